//! Conformal vectors, Virasoro modes and central charges.

use crate::engine::{vertex_mode, ModeIndex};
use crate::error::Result;
use crate::half::Half;
use crate::scalar::Scalar;
use crate::state::{Gen, Monomial, Part, Space, State};

/// `omega = alpha(-1)^2 vac / 2` in `M(1)`.
pub fn heisenberg_omega() -> State {
    State::term(Space::heisenberg(), Monomial::bosons(&[1, 1]), Scalar::frac(1, 2))
}

/// `J = alpha(-1)^4 - 2 alpha(-3) alpha(-1) + 3/2 alpha(-2)^2`, the weight-4
/// singular vector generating `M(1)^+` together with `omega`.
pub fn j_vector() -> State {
    let sp = Space::heisenberg();
    State::from_terms(
        sp,
        [
            (Monomial::bosons(&[1, 1, 1, 1]), Scalar::one()),
            (Monomial::bosons(&[3, 1]), Scalar::int(-2)),
            (Monomial::bosons(&[2, 2]), Scalar::frac(3, 2)),
        ],
    )
}

/// `omega_1 = 1/2 sum_i (a_i^-(-3/2) a_i^+(-1/2) - a_i^+(-3/2) a_i^-(-1/2)) vac`.
pub fn weyl_omega(rank: u8) -> State {
    weyl_omega_in(Space::Weyl { rank }, rank)
}

fn weyl_omega_in(space: Space, rank: u8) -> State {
    let mut out = State::zero(space);
    let (h, th) = (Half::HALF, Half::from_twice(3));
    for i in 1..=rank {
        let t1 = Monomial::from_parts([Part::new(Gen::Minus(i), th), Part::new(Gen::Plus(i), h)]);
        let t2 = Monomial::from_parts([Part::new(Gen::Plus(i), th), Part::new(Gen::Minus(i), h)]);
        out.add_term(t1, Scalar::frac(1, 2));
        out.add_term(t2, Scalar::frac(-1, 2));
    }
    out
}

/// The conformal vector whose modes act on `space`, as an element of the
/// algebra acting there.
pub fn conformal_vector(space: &Space) -> State {
    match space {
        Space::Fock { .. } | Space::Twisted | Space::Lattice => heisenberg_omega(),
        Space::Weyl { rank } => weyl_omega(*rank),
        Space::Tensor { rank } => {
            let mut w = weyl_omega_in(Space::Tensor { rank: *rank }, *rank);
            w.add_term(Monomial::bosons(&[1, 1]), Scalar::frac(1, 2));
            w
        }
    }
}

/// `L(k) v = omega_(k+1) v`.
pub fn virasoro_mode(k: i64, v: &State) -> Result<State> {
    vertex_mode(&conformal_vector(v.space()), ModeIndex::formal(k + 1), v)
}

/// `2 <vac, L(2) L(-2) vac>`.
pub fn central_charge(space: &Space) -> Result<Scalar> {
    let algebra = match space {
        Space::Fock { .. } | Space::Twisted => Space::heisenberg(),
        s => s.clone(),
    };
    let vac = State::vacuum(algebra);
    let r = virasoro_mode(2, &virasoro_mode(-2, &vac)?)?;
    Ok(&r.coeff(&Monomial::vacuum()) * &Scalar::int(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l0_on_fock_vacuum() {
        let e = State::vacuum(Space::symbolic_fock());
        let r = virasoro_mode(0, &e).unwrap();
        let lam = Scalar::lambda();
        assert_eq!(r, e.scale(&(&(&lam * &lam) * &Scalar::frac(1, 2))));
    }

    #[test]
    fn vacuum_translation_vanishes() {
        assert!(virasoro_mode(-1, &State::vacuum(Space::heisenberg())).unwrap().is_zero());
    }

    #[test]
    fn j_is_singular() {
        let j = j_vector();
        assert!(virasoro_mode(1, &j).unwrap().is_zero());
        assert!(virasoro_mode(2, &j).unwrap().is_zero());
        assert_eq!(virasoro_mode(0, &j).unwrap(), j.scale(&Scalar::int(4)));
    }

    #[test]
    fn central_charges() {
        assert_eq!(central_charge(&Space::heisenberg()).unwrap(), Scalar::one());
        assert_eq!(central_charge(&Space::Lattice).unwrap(), Scalar::one());
        for n in 1..=3u8 {
            assert_eq!(central_charge(&Space::Weyl { rank: n }).unwrap(), Scalar::int(-(n as i64)));
            assert_eq!(central_charge(&Space::Tensor { rank: n }).unwrap(), Scalar::int(1 - n as i64));
        }
    }

    #[test]
    fn weyl_generator_weight() {
        let sp = Space::Weyl { rank: 2 };
        let v = State::monomial(sp, Monomial::from_parts([Part::new(Gen::Plus(1), Half::HALF)]));
        assert_eq!(virasoro_mode(0, &v).unwrap(), v.scale(&Scalar::frac(1, 2)));
    }
}
