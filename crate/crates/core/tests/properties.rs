use freefield::engine::{apply_mode, mode, vertex_mode, ModeIndex};
use freefield::oracle::vertex_mode_oracle;
use freefield::twisted::twisted_vertex_mode;
use freefield::virasoro::{central_charge, heisenberg_omega, j_vector, virasoro_mode};
use freefield::weyl::{minus, plus, symplectic_involution};
use freefield::{Gen, Half, Monomial, Part, Scalar, Space, State};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, 1i64..=3).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| Scalar::frac(n, d))
}

/// Doubled depths of parts with total at most `budget` (doubled).
fn parts(budget: i64, odd: bool) -> impl Strategy<Value = Vec<i64>> {
    let unit = if odd { 1 } else { 2 };
    prop::collection::vec(0i64..=3, 0..5).prop_map(move |raw| {
        let mut out = Vec::new();
        let mut left = budget;
        for r in raw {
            let t = unit + 2 * r;
            if t <= left {
                out.push(t);
                left -= t;
            }
        }
        out
    })
}

fn bosons(twice: &[i64]) -> Vec<Part> {
    twice.iter().map(|&t| Part::new(Gen::Boson, Half::from_twice(t))).collect()
}

fn heisenberg_state() -> impl Strategy<Value = State> {
    prop::collection::vec((parts(12, false), coeff()), 1..3).prop_map(|terms| {
        State::from_terms(Space::heisenberg(), terms.into_iter().map(|(p, c)| (Monomial::from_parts(bosons(&p)), c)))
    })
}

/// Homogeneous lattice monomial of weight at most 6 with integral momentum.
fn lattice_operator() -> impl Strategy<Value = State> {
    (-2i64..=2, parts(12, false), coeff()).prop_map(|(r, p, c)| {
        let budget = 12 - 2 * r * r;
        let p: Vec<i64> = p.into_iter().scan(0, |s, t| {
            *s += t;
            Some((*s, t))
        }).take_while(|(s, _)| *s <= budget).map(|(_, t)| t).collect();
        State::term(Space::Lattice, Monomial::from_parts(bosons(&p)).with_momentum(Half::int(r)), c)
    })
}

fn lattice_target() -> impl Strategy<Value = State> {
    (-4i64..=4, parts(12, false)).prop_map(|(t, p)| {
        State::monomial(Space::Lattice, Monomial::from_parts(bosons(&p)).with_momentum(Half::from_twice(t)))
    })
}

fn weyl_parts(rank: u8, budget: i64) -> impl Strategy<Value = Vec<Part>> {
    (parts(budget, true), prop::collection::vec((1..=rank, any::<bool>()), 5)).prop_map(|(p, labels)| {
        p.iter().zip(labels).map(|(&t, (i, s))| if s { plus(i, t) } else { minus(i, t) }).collect()
    })
}

fn weyl_state(rank: u8) -> impl Strategy<Value = State> {
    (weyl_parts(rank, 12), coeff()).prop_map(move |(p, c)| State::term(Space::Weyl { rank }, Monomial::from_parts(p), c))
}

fn tensor_state(rank: u8) -> impl Strategy<Value = State> {
    (weyl_parts(rank, 8), parts(6, false), coeff()).prop_map(move |(w, b, c)| {
        let mut all = w;
        all.extend(bosons(&b));
        State::term(Space::Tensor { rank }, Monomial::from_parts(all), c)
    })
}

fn weight(s: &State) -> Half {
    s.half_weight().unwrap()
}

/// Floor of the largest conformal weight among the terms.
fn top_weight(s: &State) -> i64 {
    s.terms()
        .map(|(m, _)| s.space().weight(m).as_rational().expect("rational weight").floor().to_integer().try_into().unwrap())
        .max()
        .unwrap_or(0)
}

/// Modes where `u_(n) v` may be nonzero, plus a little slack on either side.
fn mode_range(u: &State, v: &State) -> std::ops::RangeInclusive<i64> {
    let total = top_weight(u) + top_weight(v) + 1;
    (-2 - total.min(4))..=(total + 1)
}

fn check_oracle(u: &State, n: i64, v: &State) -> Result<(), TestCaseError> {
    let x = vertex_mode(u, ModeIndex::formal(n), v).unwrap();
    let y = vertex_mode_oracle(u, ModeIndex::formal(n), v).unwrap();
    prop_assert_eq!(x, y, "u = {}, n = {}, v = {}", u, n, v);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_heisenberg(u in heisenberg_state(), v in heisenberg_state(), k in 0usize..64) {
        let r: Vec<i64> = mode_range(&u, &v).collect();
        check_oracle(&u, r[k % r.len()], &v)?;
    }

    #[test]
    fn oracle_lattice(u in lattice_operator(), v in lattice_target(), k in 0usize..64) {
        let r: Vec<i64> = mode_range(&u, &v).collect();
        check_oracle(&u, r[k % r.len()], &v)?;
    }

    #[test]
    fn oracle_weyl((u, v) in (1u8..=3).prop_flat_map(|r| (weyl_state(r), weyl_state(r))), k in 0usize..64) {
        let r: Vec<i64> = mode_range(&u, &v).collect();
        check_oracle(&u, r[k % r.len()], &v)?;
    }

    #[test]
    fn oracle_tensor((u, v) in (1u8..=3).prop_flat_map(|r| (tensor_state(r), tensor_state(r))), k in 0usize..64) {
        let r: Vec<i64> = mode_range(&u, &v).collect();
        check_oracle(&u, r[k % r.len()], &v)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form(a in heisenberg_state(), b in heisenberg_state()) {
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        prop_assert!(a.try_add(&b).unwrap().try_sub(&b).unwrap() == a);
        let rebuilt = State::from_terms(a.space().clone(), a.terms().map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>().into_iter().rev());
        prop_assert_eq!(rebuilt, a.clone());
        prop_assert!(a.try_sub(&a).unwrap().is_zero());
    }

    #[test]
    fn scalar_field_axioms(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &a.inv(), Scalar::one());
        let s = Scalar::sqrt2();
        let x = &(&a + &(&b * &s)) * &(&a - &(&b * &s));
        prop_assert_eq!(x, &(&a * &a) - &(&(&b * &b) * &Scalar::int(2)));
    }

    #[test]
    fn theta_is_an_involutive_automorphism(u in heisenberg_state(), v in heisenberg_state(), n in -4i64..3) {
        prop_assert_eq!(u.theta().unwrap().theta().unwrap(), u.clone());
        let lhs = mode(&u, n, &v).unwrap().theta().unwrap();
        let rhs = mode(&u.theta().unwrap(), n, &v.theta().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grading(u in heisenberg_state(), v in heisenberg_state(), n in -4i64..4) {
        for (mu, cu) in u.terms() {
            for (mv, cv) in v.terms() {
                let uu = State::term(u.space().clone(), mu.clone(), cu.clone());
                let vv = State::term(v.space().clone(), mv.clone(), cv.clone());
                let r = mode(&uu, n, &vv).unwrap();
                if !r.is_zero() {
                    prop_assert_eq!(weight(&r), weight(&uu) + weight(&vv) - Half::int(n + 1));
                }
            }
        }
    }

    #[test]
    fn vacuum_and_creation(u in heisenberg_state(), n in 0i64..4) {
        let vac = State::vacuum(Space::heisenberg());
        prop_assert_eq!(mode(&u, -1, &vac).unwrap(), u.clone());
        prop_assert!(mode(&u, n, &vac).unwrap().is_zero());
        prop_assert_eq!(mode(&vac, -1, &u).unwrap(), u.clone());
        prop_assert!(mode(&vac, n, &u).unwrap().is_zero());
    }

    #[test]
    fn skew_symmetry_heisenberg(u in heisenberg_state(), v in heisenberg_state(), n in -3i64..3) {
        skew(&u, n, &v)?;
    }

    #[test]
    fn skew_symmetry_weyl(u in weyl_state(2), v in weyl_state(2), n in -3i64..3) {
        skew(&u, n, &v)?;
    }

    #[test]
    fn skew_symmetry_lattice(u in lattice_operator(), v in lattice_operator(), n in -3i64..3) {
        skew(&u, n, &v)?;
    }

    #[test]
    fn virasoro_bracket(v in heisenberg_state(), m in -3i64..=3, n in -3i64..=3) {
        virasoro(&v, m, n)?;
    }

    #[test]
    fn virasoro_bracket_weyl(v in weyl_state(2), m in -3i64..=3, n in -3i64..=3) {
        virasoro(&v, m, n)?;
    }

    #[test]
    fn virasoro_bracket_tensor(v in tensor_state(1), m in -2i64..=2, n in -2i64..=2) {
        virasoro(&v, m, n)?;
    }

    #[test]
    fn l_j_commutator(v in heisenberg_state(), m in -3i64..=3, n in -3i64..=3) {
        let j = j_vector();
        let lhs = virasoro_mode(m, &mode(&j, n, &v).unwrap()).unwrap()
            .try_sub(&mode(&j, n, &virasoro_mode(m, &v).unwrap()).unwrap()).unwrap();
        let rhs = mode(&j, m + n, &v).unwrap().scale(&Scalar::int(3 * (m + 1) - n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weyl_relations(v in weyl_state(3), i in 1u8..=3, j in 1u8..=3, r in 0i64..3, s in 0i64..3) {
        let (r, s) = (Half::from_twice(2 * r + 1), Half::from_twice(2 * s + 1));
        for (x, y) in [(Gen::Plus(i), Gen::Minus(j)), (Gen::Plus(i), Gen::Plus(j)), (Gen::Minus(i), Gen::Minus(j))] {
            for (a, b) in [(r, -s), (-r, s), (r, s), (-r, -s)] {
                let c = apply_mode(x, a, &apply_mode(y, b, &v)).try_sub(&apply_mode(y, b, &apply_mode(x, a, &v))).unwrap();
                let expect = if matches!((x, y), (Gen::Plus(_), Gen::Minus(_))) && i == j && a + b == Half::ZERO {
                    v.clone()
                } else {
                    State::zero(v.space().clone())
                };
                prop_assert_eq!(c, expect);
            }
        }
    }

    #[test]
    fn symplectic_involution_preserves_weight(v in weyl_state(2)) {
        let s = symplectic_involution(&v).unwrap();
        prop_assert_eq!(weight(&s), weight(&v));
        prop_assert_eq!(virasoro_mode(0, &s).unwrap(), symplectic_involution(&virasoro_mode(0, &v).unwrap()).unwrap());
    }

    #[test]
    fn twisted_heisenberg(p in parts(9, true), r in 0i64..4, s in 0i64..4, sr in any::<bool>(), ss in any::<bool>()) {
        let v = State::monomial(Space::Twisted, Monomial::from_parts(bosons(&p)));
        let r = Half::from_twice(2 * r + 1) * if sr { 1 } else { -1 };
        let s = Half::from_twice(2 * s + 1) * if ss { 1 } else { -1 };
        let c = apply_mode(Gen::Boson, r, &apply_mode(Gen::Boson, s, &v))
            .try_sub(&apply_mode(Gen::Boson, s, &apply_mode(Gen::Boson, r, &v))).unwrap();
        let expect = if r + s == Half::ZERO { v.scale(&Scalar::from(r.to_rational())) } else { State::zero(Space::Twisted) };
        prop_assert_eq!(c, expect);
    }

    #[test]
    fn twisted_virasoro(p in parts(7, true), m in -2i64..=2, n in -2i64..=2) {
        let v = State::monomial(Space::Twisted, Monomial::from_parts(bosons(&p)));
        let w = heisenberg_omega();
        let l = |k: i64, x: &State| twisted_vertex_mode(&w, ModeIndex::formal(k + 1), x).unwrap();
        let lhs = l(m, &l(n, &v)).try_sub(&l(n, &l(m, &v))).unwrap();
        let mut rhs = l(m + n, &v).scale(&Scalar::int(m - n));
        if m + n == 0 {
            rhs.add_scaled(&v, &Scalar::frac(m * m * m - m, 12));
        }
        prop_assert_eq!(lhs, rhs);
    }
}

fn skew(u: &State, n: i64, v: &State) -> Result<(), TestCaseError> {
    // u_(n) v = sum_j (-1)^(n+j+1) L(-1)^j / j! v_(n+j) u
    let lhs = mode(u, n, v).unwrap();
    let mut rhs = State::zero(lhs.space().clone());
    let top = top_weight(u) + top_weight(v) + 3;
    let mut fact = 1i64;
    for j in 0..=(top - n).max(0) {
        if j > 0 {
            fact *= j;
        }
        let mut t = mode(v, n + j, u).unwrap();
        for _ in 0..j {
            t = virasoro_mode(-1, &t).unwrap();
        }
        let sign = if (n + j + 1).rem_euclid(2) == 0 { 1 } else { -1 };
        rhs.add_scaled(&t, &Scalar::frac(sign, fact));
    }
    prop_assert_eq!(lhs, rhs, "u = {}, n = {}, v = {}", u, n, v);
    Ok(())
}

fn virasoro(v: &State, m: i64, n: i64) -> Result<(), TestCaseError> {
    let c = central_charge(v.space()).unwrap();
    let l = |k: i64, x: &State| virasoro_mode(k, x).unwrap();
    let lhs = l(m, &l(n, v)).try_sub(&l(n, &l(m, v))).unwrap();
    let mut rhs = l(m + n, v).scale(&Scalar::int(m - n));
    if m + n == 0 {
        rhs.add_scaled(v, &(&c * &Scalar::frac(m * m * m - m, 12)));
    }
    prop_assert_eq!(lhs, rhs);
    Ok(())
}
