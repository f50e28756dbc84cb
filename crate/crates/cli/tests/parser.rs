use freefield::{Gen, Half, Monomial, Part, Scalar, Space, State};
use freefield_cli::parse::{evaluate, parse_expr, parse_state, Context};
use proptest::prelude::*;

const CORPUS: &[&str] = &[
    "|0>",
    "0",
    "a(-1) |0>",
    "a(-1) a(-1) |0>",
    "a(-3) a(-1) |0>",
    "1/2 a(-1) a(-1) |0>",
    "3/2 * a(-2) a(-2) |0>",
    "a(-1)a(-1)a(-1)a(-1)|0> - 2 a(-3)a(-1)|0> + 3/2 a(-2)a(-2)|0>",
    "J",
    "w",
    "2 J - w",
    "-J",
    "J + 4 w",
    "(1/2 + s2) a(-1) |0>",
    "s2 a(-2) |0>",
    "-1/3 s2 a(-1) |0> + a(-2)|0>",
    "|lam>",
    "x |lam>",
    "(x^4 - 1/2 x^2) |lam>",
    "x^2 a(-1) |lam>",
    "(x + 1) a(-2) a(-1) |lam> - |lam>",
    "(1/x) |lam>",
    "|mom:1/2>",
    "|mom:1/2 s2>",
    "a(-1) |mom:-3/2>",
    "2 a(-2) a(-1) |mom:s2>",
    "|tw>",
    "h(-1/2) |tw>",
    "h(-3/2) h(-1/2) |tw>",
    "1/16 |tw> + h(-1/2) h(-1/2) |tw>",
    "-h(-5/2) |tw>",
    "|e:0>",
    "|e:1/2>",
    "g(-1) |e:1>",
    "g(-2) g(-1) |e:-1/2>",
    "E",
    "F",
    "E + F",
    "E - 2 g(-1) |e:0>",
    "b1+(-1/2) |0>",
    "b1-(-3/2) b1+(-1/2) |0>",
    "b2+(-1/2) b1-(-1/2) |0>",
    "w1",
    "H",
    "H - w1",
    "b1+(-1/2) a(-1) |0>",
    "b1+(-1/2) |0> + a(-1) |0>",
    "a(1) a(-1) |0>",
    "a(0) |lam>",
    "b1-(1/2) b1+(-1/2) |0>",
];

#[test]
fn corpus_round_trip() {
    assert_eq!(CORPUS.len(), 50);
    let ctx = Context { weyl_rank: Some(2) };
    for text in CORPUS {
        let ast = parse_expr(text).unwrap_or_else(|e| panic!("{}", e.render(text)));
        let printed = ast.to_string();
        let again = parse_expr(&printed).unwrap_or_else(|e| panic!("{}", e.render(&printed)));
        assert_eq!(ast.without_spans(), again.without_spans(), "{text} -> {printed}");
        let v = evaluate(&ast, ctx).unwrap_or_else(|e| panic!("{}", e.render(text)));
        assert_eq!(v, evaluate(&again, ctx).unwrap(), "{text}");
    }
}

#[test]
fn spans_point_into_the_source() {
    let text = "a(-1)|0> + 2 h(-1/2)|tw>";
    let e = parse_expr(text).unwrap();
    assert_eq!(&text[e.terms[1].span.start..e.terms[1].span.end], "2 h(-1/2)|tw>");
    let err = evaluate(&e, Context::default()).unwrap_err();
    assert_eq!(&text[err.span().start..err.span().end], "2 h(-1/2)|tw>");
}

#[test]
fn alias_expansion() {
    let j = parse_state("J", Context::default()).unwrap();
    assert_eq!(j.to_string(), "-2 a(-3) a(-1) |0> + 3/2 a(-2) a(-2) |0> + a(-1) a(-1) a(-1) a(-1) |0>");
    assert_eq!(parse_state("w", Context::default()).unwrap().to_string(), "1/2 a(-1) a(-1) |0>");
}

fn coeff() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-4i64..=4, 1i64..=4).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| Scalar::frac(n, d)),
        (-3i64..=3, 1i64..=3).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| &Scalar::frac(n, d) * &Scalar::sqrt2()),
        (1i64..=2, -3i64..=3).prop_map(|(a, b)| &Scalar::int(a) + &(&Scalar::frac(b, 2) * &Scalar::sqrt2())),
        (1u32..=4, -3i64..=3).prop_map(|(k, c)| &Scalar::lambda().pow(k) + &Scalar::frac(c, 2)),
    ]
}

fn twice_depths(odd: bool) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..4, 0..4).prop_map(move |v| v.into_iter().map(|k| if odd { 2 * k + 1 } else { 2 * k + 2 }).collect())
}

fn space() -> impl Strategy<Value = Space> {
    prop_oneof![
        Just(Space::heisenberg()),
        Just(Space::symbolic_fock()),
        Just(Space::Twisted),
        Just(Space::Lattice),
        Just(Space::Weyl { rank: 2 }),
        Just(Space::Tensor { rank: 2 }),
    ]
}

fn monomial(space: Space) -> BoxedStrategy<Monomial> {
    let bos = |t: Vec<i64>| t.into_iter().map(|d| Part::new(Gen::Boson, Half::from_twice(d))).collect::<Vec<_>>();
    let weyl = || {
        (twice_depths(true), prop::collection::vec((1u8..=2, any::<bool>()), 4)).prop_map(|(t, l)| {
            t.into_iter()
                .zip(l)
                .map(|(d, (i, p))| Part::new(if p { Gen::Plus(i) } else { Gen::Minus(i) }, Half::from_twice(d)))
                .collect::<Vec<_>>()
        })
    };
    match space {
        Space::Twisted => twice_depths(true).prop_map(move |t| Monomial::from_parts(bos(t))).boxed(),
        Space::Lattice => (twice_depths(false), -3i64..=3)
            .prop_map(move |(t, r)| Monomial::from_parts(bos(t)).with_momentum(Half::from_twice(r)))
            .boxed(),
        Space::Weyl { .. } => weyl().prop_map(Monomial::from_parts).boxed(),
        Space::Tensor { .. } => (weyl(), twice_depths(false))
            .prop_map(move |(mut w, t)| {
                w.extend(bos(t));
                Monomial::from_parts(w)
            })
            .boxed(),
        _ => twice_depths(false).prop_map(move |t| Monomial::from_parts(bos(t))).boxed(),
    }
}

fn state() -> impl Strategy<Value = State> {
    space().prop_flat_map(|sp| {
        prop::collection::vec((monomial(sp.clone()), coeff()), 1..4).prop_map(move |terms| State::from_terms(sp.clone(), terms))
    })
}

proptest! {
    #[test]
    fn printed_states_reparse(s in state()) {
        prop_assume!(!s.is_zero());
        let text = s.to_string();
        let ctx = Context { weyl_rank: Some(s.space().weyl_rank().max(1)) };
        let back = parse_state(&text, ctx).map_err(|e| TestCaseError::fail(e.render(&text)))?;
        // a tensor state with no Weyl parts reads back in M(1)
        let back = back.reinterpret(s.space().clone()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back, s);
    }

    #[test]
    fn printed_asts_reparse(s in state()) {
        let text = s.to_string();
        let ctx = Context { weyl_rank: Some(2) };
        let ast = parse_expr(&text).unwrap();
        let printed = ast.to_string();
        let again = parse_expr(&printed).unwrap();
        prop_assert_eq!(ast.without_spans(), again.without_spans());
        prop_assert_eq!(evaluate(&ast, ctx).unwrap(), evaluate(&again, ctx).unwrap());
    }

    #[test]
    fn garbage_never_panics(text in "[a-z0-9|<>()+*/: -]{0,24}") {
        let _ = parse_state(&text, Context::default());
    }
}
