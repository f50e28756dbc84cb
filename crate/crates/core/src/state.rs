//! Canonical-form states: finite linear combinations of creation monomials
//! over a declared space.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalar::{Quad, Scalar};

/// A free-field generator. `Boson` is the Heisenberg field of whatever space
/// the state lives in (alpha, gamma or the twisted h); `Plus(i)` and
/// `Minus(i)` are the Weyl generators `a_i^+`, `a_i^-` (1-based).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    Boson,
    Plus(u8),
    Minus(u8),
}

impl Gen {
    pub fn is_weyl(self) -> bool {
        !matches!(self, Gen::Boson)
    }

    /// Conformal weight of the generating field.
    pub fn weight(self) -> Half {
        match self {
            Gen::Boson => Half::ONE,
            _ => Half::HALF,
        }
    }
}

/// A creation operator `gen(-depth)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Part {
    pub gen: Gen,
    pub depth: Half,
}

impl Part {
    pub fn new(gen: Gen, depth: Half) -> Self {
        Part { gen, depth }
    }
}

impl Ord for Part {
    // weakly decreasing depth, ties broken by generator
    fn cmp(&self, o: &Self) -> Ordering {
        o.depth.cmp(&self.depth).then(self.gen.cmp(&o.gen))
    }
}

impl PartialOrd for Part {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub type Parts = SmallVec<[Part; 8]>;

/// A product of creation operators on a vacuum. For lattice states the
/// vacuum is `e^{momentum * gamma}`; in every other space `momentum` is zero
/// and the momentum of the module is carried by the space itself.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    momentum: Half,
    parts: Parts,
}

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial::default()
    }

    pub fn new(mut parts: Parts, momentum: Half) -> Self {
        parts.sort();
        Monomial { momentum, parts }
    }

    pub fn from_parts(parts: impl IntoIterator<Item = Part>) -> Self {
        Monomial::new(parts.into_iter().collect(), Half::ZERO)
    }

    /// Heisenberg monomial `boson(-d1) boson(-d2) ...`.
    pub fn bosons(depths: &[i64]) -> Self {
        Monomial::from_parts(depths.iter().map(|&d| Part::new(Gen::Boson, Half::int(d))))
    }

    pub fn exponential(momentum: Half) -> Self {
        Monomial { momentum, parts: Parts::new() }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn momentum(&self) -> Half {
        self.momentum
    }

    pub fn with_momentum(&self, momentum: Half) -> Self {
        Monomial { momentum, parts: self.parts.clone() }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn depth(&self) -> Half {
        self.parts.iter().map(|p| p.depth).sum()
    }

    /// Number of `a^+` minus number of `a^-` generators.
    pub fn weyl_charge(&self) -> i64 {
        self.parts
            .iter()
            .map(|p| match p.gen {
                Gen::Plus(_) => 1,
                Gen::Minus(_) => -1,
                Gen::Boson => 0,
            })
            .sum()
    }

    pub fn boson_count(&self) -> usize {
        self.parts.iter().filter(|p| p.gen == Gen::Boson).count()
    }

    /// Multiply by further creation operators.
    pub fn times(&self, extra: &[Part]) -> Monomial {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(extra);
        parts.sort();
        Monomial { momentum: self.momentum, parts }
    }

    pub fn product(&self, other: &Monomial) -> Monomial {
        let mut m = self.times(&other.parts);
        m.momentum = self.momentum + other.momentum;
        m
    }

    /// Remove one copy of `part`; returns the multiplicity it had.
    pub fn remove_one(&self, part: Part) -> Option<(Monomial, usize)> {
        let mult = self.parts.iter().filter(|p| **p == part).count();
        if mult == 0 {
            return None;
        }
        let pos = self.parts.iter().position(|p| *p == part).unwrap();
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some((Monomial { momentum: self.momentum, parts }, mult))
    }

    /// Split into the Weyl factor and the Heisenberg factor.
    pub fn split_tensor(&self) -> (Monomial, Monomial) {
        let (w, b): (Vec<Part>, Vec<Part>) = self.parts.iter().partition(|p| p.gen.is_weyl());
        (Monomial::from_parts(w), Monomial::from_parts(b))
    }

    pub fn map_parts(&self, f: impl Fn(Part) -> Part) -> Monomial {
        Monomial::new(self.parts.iter().map(|p| f(*p)).collect(), self.momentum)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.depth()
            .cmp(&o.depth())
            .then(self.momentum.cmp(&o.momentum))
            .then(self.parts.len().cmp(&o.parts.len()))
            .then_with(|| self.parts.iter().cmp(o.parts.iter()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Which algebra or module a state belongs to.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Space {
    /// Heisenberg Fock module `M(1, momentum)` for alpha with `(alpha, alpha) = 1`;
    /// momentum zero is the vertex algebra `M(1)` itself.
    Fock { momentum: Scalar },
    /// The twisted Fock module on half-integer modes of `h`.
    Twisted,
    /// `V_L + V_{L + gamma/2}` for `L = Z gamma`, `(gamma, gamma) = 2`.
    Lattice,
    /// The rank-n Weyl vertex algebra.
    Weyl { rank: u8 },
    /// Rank-n Weyl algebra tensored with `M(1)`.
    Tensor { rank: u8 },
}

impl Space {
    pub fn heisenberg() -> Space {
        Space::Fock { momentum: Scalar::zero() }
    }

    pub fn fock(momentum: Scalar) -> Space {
        Space::Fock { momentum }
    }

    pub fn symbolic_fock() -> Space {
        Space::Fock { momentum: Scalar::lambda() }
    }

    /// `(boson, boson)` pairing.
    pub fn boson_norm(&self) -> i64 {
        match self {
            Space::Lattice => 2,
            _ => 1,
        }
    }

    /// Mode depths of the boson are half-integers only in the twisted sector.
    pub fn boson_half_modes(&self) -> bool {
        matches!(self, Space::Twisted)
    }

    pub fn weyl_rank(&self) -> u8 {
        match self {
            Space::Weyl { rank } | Space::Tensor { rank } => *rank,
            _ => 0,
        }
    }

    pub fn has_bosons(&self) -> bool {
        !matches!(self, Space::Weyl { .. })
    }

    pub fn fock_momentum(&self) -> Option<&Scalar> {
        match self {
            Space::Fock { momentum } => Some(momentum),
            _ => None,
        }
    }

    /// Check that a monomial belongs to this space.
    pub fn admits(&self, m: &Monomial) -> bool {
        if !matches!(self, Space::Lattice) && m.momentum() != Half::ZERO {
            return false;
        }
        m.parts().iter().all(|p| {
            if !p.depth.is_positive() {
                return false;
            }
            match p.gen {
                Gen::Boson => self.has_bosons() && (p.depth.is_integer() != self.boson_half_modes()),
                Gen::Plus(i) | Gen::Minus(i) => {
                    i >= 1 && i <= self.weyl_rank() && !p.depth.is_integer()
                }
            }
        })
    }

    /// Conformal weight of a monomial.
    pub fn weight(&self, m: &Monomial) -> Scalar {
        let depth = Scalar::from(m.depth().to_rational());
        match self {
            Space::Fock { momentum } => &(&(momentum * momentum) * &Scalar::frac(1, 2)) + &depth,
            Space::Twisted => &Scalar::frac(1, 16) + &depth,
            Space::Lattice => {
                let r = Scalar::from(m.momentum().to_rational());
                &(&r * &r) + &depth
            }
            _ => depth,
        }
    }

    pub fn boson_letter(&self) -> &'static str {
        match self {
            Space::Twisted => "h",
            Space::Lattice => "g",
            _ => "a",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Fock { momentum } if momentum.is_zero() => write!(f, "M(1)"),
            Space::Fock { momentum } => write!(f, "M(1, {momentum})"),
            Space::Twisted => write!(f, "M(1)(theta)"),
            Space::Lattice => write!(f, "V_L + V_(L+gamma/2)"),
            Space::Weyl { rank } => write!(f, "S({rank})"),
            Space::Tensor { rank } => write!(f, "S({rank}) x M(1)"),
        }
    }
}

/// A finite linear combination of monomials in a fixed space, in canonical
/// form: no zero coefficients, terms ordered by depth then monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct State {
    space: Space,
    terms: BTreeMap<Monomial, Scalar>,
}

impl State {
    pub fn zero(space: Space) -> Self {
        State { space, terms: BTreeMap::new() }
    }

    pub fn vacuum(space: Space) -> Self {
        State::monomial(space, Monomial::vacuum())
    }

    pub fn monomial(space: Space, m: Monomial) -> Self {
        State::term(space, m, Scalar::one())
    }

    pub fn term(space: Space, m: Monomial, c: Scalar) -> Self {
        let mut s = State::zero(space);
        s.add_term(m, c);
        s
    }

    pub fn from_terms(space: Space, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut s = State::zero(space);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Accumulate `c * m` in place, keeping canonical form.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.space.admits(&m), "monomial {m:?} not in {}", self.space);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Accumulate `c * other` in place. Spaces must agree.
    pub fn add_scaled(&mut self, other: &State, c: &Scalar) {
        debug_assert_eq!(self.space, other.space);
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), if c.is_one() { d.clone() } else { d * c });
        }
    }

    pub fn try_add(&self, other: &State) -> Result<State> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space.to_string(), right: other.space.to_string() });
        }
        let mut s = self.clone();
        s.add_scaled(other, &Scalar::one());
        Ok(s)
    }

    pub fn try_sub(&self, other: &State) -> Result<State> {
        self.try_add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> State {
        if c.is_zero() {
            return State::zero(self.space.clone());
        }
        State {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).filter(|(_, d)| !d.is_zero()).collect(),
        }
    }

    pub fn neg(&self) -> State {
        self.scale(&Scalar::int(-1))
    }

    /// Re-tag the state with another space (only monomials are checked).
    pub fn reinterpret(&self, space: Space) -> Result<State> {
        if let Some(m) = self.terms.keys().find(|m| !space.admits(m)) {
            return Err(Error::Sector(format!("monomial {} does not belong to {space}", self.fmt_monomial(m))));
        }
        Ok(State { space, terms: self.terms.clone() })
    }

    pub fn map_monomials(&self, space: Space, f: impl Fn(&Monomial) -> (Monomial, Scalar)) -> State {
        let mut out = State::zero(space);
        for (m, c) in &self.terms {
            let (m2, k) = f(m);
            out.add_term(m2, c * &k);
        }
        out
    }

    pub fn max_depth(&self) -> Half {
        self.terms.keys().map(Monomial::depth).max().unwrap_or(Half::ZERO)
    }

    /// The common conformal weight, if the state is homogeneous and nonzero.
    pub fn homogeneous_weight(&self) -> Option<Scalar> {
        let mut it = self.terms.keys().map(|m| self.space.weight(m));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn weight(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::NotHomogeneous("zero state has no weight".into()));
        }
        self.homogeneous_weight().ok_or_else(|| Error::NotHomogeneous(self.to_string()))
    }

    /// Homogeneous weight as an element of `(1/2)Z`, for algebra elements.
    pub fn half_weight(&self) -> Result<Half> {
        let w = self.weight()?;
        w.as_rational().and_then(Half::from_rational).ok_or_else(|| Error::NotHomogeneous(format!("weight {w} is not in (1/2)Z")))
    }

    /// Sum of the terms of the given depth.
    pub fn depth_component(&self, depth: Half) -> State {
        State {
            space: self.space.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.depth() == depth).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn depths(&self) -> Vec<Half> {
        let mut ds: Vec<Half> = self.terms.keys().map(Monomial::depth).collect();
        ds.dedup();
        ds
    }

    fn require_theta_domain(&self) -> Result<()> {
        match &self.space {
            Space::Fock { momentum } if momentum.is_zero() => Ok(()),
            Space::Twisted => Ok(()),
            Space::Fock { momentum } => Err(Error::NonzeroMomentum(momentum.to_string())),
            other => Err(Error::Sector(format!("theta is not defined on {other}"))),
        }
    }

    /// The involution `alpha -> -alpha`, scaling each monomial by `(-1)^length`.
    pub fn theta(&self) -> Result<State> {
        self.require_theta_domain()?;
        Ok(self.map_monomials(self.space.clone(), |m| {
            (m.clone(), if m.len() % 2 == 0 { Scalar::one() } else { Scalar::int(-1) })
        }))
    }

    /// `(s + sign * theta(s)) / 2`.
    pub fn project_parity(&self, sign: i8) -> Result<State> {
        self.require_theta_domain()?;
        let keep = if sign >= 0 { 0 } else { 1 };
        Ok(State {
            space: self.space.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.len() % 2 == keep).map(|(m, c)| (m.clone(), c.clone())).collect(),
        })
    }

    /// Substitute a value for the formal momentum parameter everywhere.
    pub fn specialize(&self, at: &Quad) -> Option<State> {
        let space = match &self.space {
            Space::Fock { momentum } => Space::Fock { momentum: momentum.specialize(at)? },
            s => s.clone(),
        };
        let mut out = State::zero(space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.specialize(at)?);
        }
        Some(out)
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        format_monomial(&self.space, m)
    }
}

pub fn format_ket(space: &Space, m: &Monomial) -> String {
    match space {
        Space::Fock { momentum } if momentum.is_zero() => "|0>".into(),
        Space::Fock { momentum } if momentum == &Scalar::lambda() => "|lam>".into(),
        Space::Fock { momentum } => format!("|mom:{momentum}>"),
        Space::Twisted => "|tw>".into(),
        Space::Lattice => format!("|e:{}>", m.momentum()),
        Space::Weyl { .. } | Space::Tensor { .. } => "|0>".into(),
    }
}

pub fn format_part(space: &Space, p: &Part) -> String {
    match p.gen {
        Gen::Boson => format!("{}({})", space.boson_letter(), -p.depth),
        Gen::Plus(i) => format!("b{i}+({})", -p.depth),
        Gen::Minus(i) => format!("b{i}-({})", -p.depth),
    }
}

pub fn format_monomial(space: &Space, m: &Monomial) -> String {
    let mut s = String::new();
    for p in m.parts() {
        s.push_str(&format_part(space, p));
        s.push(' ');
    }
    s.push_str(&format_ket(space, m));
    s
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_display();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if !mag.is_one() {
                if mag.is_compound() {
                    write!(f, "({mag}) ")?;
                } else {
                    write!(f, "{mag} ")?;
                }
            }
            f.write_str(&format_monomial(&self.space, m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1() -> Space {
        Space::heisenberg()
    }

    fn a(depths: &[i64]) -> State {
        State::monomial(m1(), Monomial::bosons(depths))
    }

    #[test]
    fn additive_inverse_cancels() {
        let s = a(&[1]).try_add(&a(&[1]).neg()).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn sum_is_depth_graded() {
        let s = a(&[2]).try_add(&a(&[1, 1])).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.depths(), vec![Half::int(2)]);
    }

    #[test]
    fn symbolic_coefficients_merge() {
        let sp = Space::symbolic_fock();
        let lam = Scalar::lambda();
        let e = State::term(sp.clone(), Monomial::vacuum(), lam.clone());
        let s = e.try_add(&e).unwrap();
        assert_eq!(s.coeff(&Monomial::vacuum()), &Scalar::int(2) * &lam);
        assert!(s.coeff(&Monomial::vacuum()).is_symbolic());
    }

    #[test]
    fn space_mismatch_names_both_spaces() {
        let tw = State::vacuum(Space::Twisted);
        let err = a(&[1]).try_add(&tw).unwrap_err().to_string();
        assert!(err.contains("M(1)") && err.contains("theta"), "{err}");
    }

    #[test]
    fn theta_examples() {
        assert_eq!(State::vacuum(m1()).theta().unwrap(), State::vacuum(m1()));
        assert_eq!(a(&[1]).theta().unwrap(), a(&[1]).neg());
        let tw = State::monomial(
            Space::Twisted,
            Monomial::from_parts([Part::new(Gen::Boson, Half::HALF), Part::new(Gen::Boson, Half::from_twice(3))]),
        );
        assert_eq!(tw.theta().unwrap(), tw);
        let lam = State::vacuum(Space::symbolic_fock());
        assert!(matches!(lam.theta(), Err(Error::NonzeroMomentum(_))));
    }

    #[test]
    fn parity_projection_examples() {
        let sq = a(&[1, 1]);
        assert_eq!(sq.project_parity(1).unwrap(), sq);
        assert!(sq.project_parity(-1).unwrap().is_zero());
        let mixed = a(&[1]).try_add(&a(&[2, 1])).unwrap();
        assert_eq!(mixed.project_parity(-1).unwrap(), a(&[1]));
        // three parts is odd length, so this one survives whole
        let odd = a(&[1]).try_add(&a(&[2, 1, 1])).unwrap();
        assert_eq!(odd.project_parity(-1).unwrap(), odd);
    }

    #[test]
    fn depth_components() {
        let s = a(&[2]).try_add(&a(&[1])).unwrap();
        assert_eq!(s.depth_component(Half::int(2)), a(&[2]));
        let e = State::vacuum(Space::symbolic_fock());
        assert_eq!(e.depth_component(Half::ZERO), e);
        let tw = State::monomial(Space::Twisted, Monomial::from_parts([Part::new(Gen::Boson, Half::HALF); 2]));
        assert_eq!(tw.depth_component(Half::ONE), tw);
    }

    #[test]
    fn printing() {
        let s = a(&[1, 1]).scale(&Scalar::frac(1, 2)).try_add(&a(&[2]).neg()).unwrap();
        assert_eq!(s.to_string(), "-a(-2) |0> + 1/2 a(-1) a(-1) |0>");
    }
}
