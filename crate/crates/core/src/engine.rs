//! Mode products `u_(n) v` by expansion of normal-ordered free fields.
//!
//! A creation monomial `x1(-d1) ... xr(-dr) vac` corresponds to the field
//! `:d^(k1) x1(z) ... d^(kr) xr(z):` with `ki = di - wt(xi)`, where
//! `x(z) = sum_s x(s) z^(-s - wt(x))` and `d^(k)` is the divided derivative.
//! Lattice exponentials contribute the usual `E^-(z) E^+(z) e_b z^(b gamma(0))`
//! factor. The coefficient of `z^(-n-1)` applied to `v` is assembled by
//! choosing, for every factor, either an annihilation mode (acting on `v`
//! first) or a creation mode (multiplied on afterwards).

use std::collections::HashMap;

use crate::combinat::{multiplicity_factorial, partitions};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalar::{binomial, rat, Quad, Rational, Scalar};
use crate::state::{Gen, Monomial, Part, Parts, Space, State};

/// Which indexing a mode number uses.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Convention {
    /// `u_(n)`: coefficient of `z^(-n-1)`.
    Formal,
    /// `u_n = u_(n + wt(u) - 1)`: shifts weight by `-n`.
    Weighted,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub struct ModeIndex {
    pub value: Half,
    pub convention: Convention,
}

impl ModeIndex {
    pub fn formal(n: impl Into<Half>) -> Self {
        ModeIndex { value: n.into(), convention: Convention::Formal }
    }

    pub fn weighted(n: impl Into<Half>) -> Self {
        ModeIndex { value: n.into(), convention: Convention::Weighted }
    }

    /// Formal index for an operator of weight `wt`.
    pub fn to_formal(self, wt: Half) -> Half {
        match self.convention {
            Convention::Formal => self.value,
            Convention::Weighted => self.value + wt - Half::ONE,
        }
    }

    /// Weighted index for an operator of weight `wt`.
    pub fn to_weighted(self, wt: Half) -> Half {
        match self.convention {
            Convention::Formal => self.value - wt + Half::ONE,
            Convention::Weighted => self.value,
        }
    }
}

/// How the modes of a generator are indexed on a target space.
#[derive(Copy, Clone, Debug)]
pub(crate) struct ModeClass {
    pub half: bool,
    pub zero_mode: bool,
}

impl ModeClass {
    pub fn of(target: &Space, gen: Gen) -> ModeClass {
        match gen {
            Gen::Boson => {
                let half = target.boson_half_modes();
                ModeClass { half, zero_mode: !half }
            }
            _ => ModeClass { half: true, zero_mode: false },
        }
    }

    pub fn smallest_positive(self) -> Half {
        if self.half {
            Half::HALF
        } else {
            Half::ONE
        }
    }
}

/// `[x_a(s), x_b(-s)]` for `s > 0`.
pub fn bracket(target: &Space, a: Gen, b: Gen, s: Half) -> Scalar {
    match (a, b) {
        (Gen::Boson, Gen::Boson) => Scalar::from(s.to_rational() * rat(target.boson_norm(), 1)),
        (Gen::Plus(i), Gen::Minus(j)) if i == j => Scalar::one(),
        (Gen::Minus(i), Gen::Plus(j)) if i == j => Scalar::int(-1),
        _ => Scalar::zero(),
    }
}

/// Apply the annihilation (or zero) mode `x_gen(s)`, `s >= 0`, to a monomial.
pub(crate) fn annihilate_monomial(target: &Space, gen: Gen, s: Half, m: &Monomial) -> Vec<(Monomial, Scalar)> {
    if s == Half::ZERO {
        if gen != Gen::Boson {
            return Vec::new();
        }
        let eig = match target {
            Space::Fock { momentum } => momentum.clone(),
            Space::Lattice => Scalar::int(m.momentum().twice()),
            _ => Scalar::zero(),
        };
        return if eig.is_zero() { Vec::new() } else { vec![(m.clone(), eig)] };
    }
    let mut out = Vec::new();
    let mut seen: Option<Part> = None;
    for p in m.parts() {
        if p.depth != s || seen == Some(*p) {
            continue;
        }
        seen = Some(*p);
        let br = bracket(target, gen, p.gen, s);
        if br.is_zero() {
            continue;
        }
        let (rest, mult) = m.remove_one(*p).unwrap();
        out.push((rest, &br * &Scalar::int(mult as i64)));
    }
    out
}

/// The operator `x_gen(s)` on a state, for any `s` in the generator's class.
pub fn apply_mode(gen: Gen, s: Half, v: &State) -> State {
    let space = v.space().clone();
    let mut out = State::zero(space.clone());
    if s.is_negative() {
        for (m, c) in v.terms() {
            out.add_term(m.times(&[Part::new(gen, -s)]), c.clone());
        }
        return out;
    }
    for (m, c) in v.terms() {
        for (m2, k) in annihilate_monomial(&space, gen, s, m) {
            out.add_term(m2, c * &k);
        }
    }
    out
}

/// Apply a sequence of modes, rightmost first.
pub fn apply_modes(modes: &[(Gen, Half)], v: &State) -> State {
    modes.iter().rev().fold(v.clone(), |acc, (g, s)| apply_mode(*g, *s, &acc))
}

/// Coefficient of mode `s` in the divided derivative `d^(k) x(z)`:
/// `binom(-s - wt(x), k)`.
pub(crate) fn field_coeff(gen: Gen, k: u32, s: Half) -> Rational {
    binomial(&(-s - gen.weight()).to_rational(), k)
}

#[derive(Clone, Debug)]
struct Field {
    gen: Gen,
    depth: Half,
    deriv: u32,
    class: ModeClass,
}

impl Field {
    fn new(target: &Space, p: &Part) -> Field {
        let k = p.depth - p.gen.weight();
        Field { gen: p.gen, depth: p.depth, deriv: k.as_int().expect("derivative order") as u32, class: ModeClass::of(target, p.gen) }
    }

    /// Smallest creation depth with a possibly nonzero coefficient.
    fn creation_floor(&self) -> Half {
        let min = self.class.smallest_positive();
        // binom(d - w, k) vanishes for integral 0 <= d - w < k
        let integral = (min - self.gen.weight()).is_integer();
        if integral {
            self.depth.max(min)
        } else {
            min
        }
    }
}

type Creations = Vec<(Parts, Rational)>;

/// All creation assignments for the chosen factors with prescribed total depth.
fn creation_terms(fields: &[Field], creators: &[usize], total: Half) -> Creations {
    let floors: Vec<Half> = creators.iter().map(|&i| fields[i].creation_floor()).collect();
    let base: Half = floors.iter().copied().sum();
    let excess = total - base;
    let mut out = Vec::new();
    if excess.is_negative() || !excess.is_integer() {
        return out;
    }
    let excess = excess.as_int().unwrap();
    let mut depths = floors.clone();
    fn rec(
        idx: usize,
        rem: i64,
        fields: &[Field],
        creators: &[usize],
        floors: &[Half],
        depths: &mut Vec<Half>,
        out: &mut Creations,
    ) {
        if idx == creators.len() {
            if rem != 0 {
                return;
            }
            let mut coeff = Rational::from_integer(1.into());
            let mut parts = Parts::new();
            for (j, &fi) in creators.iter().enumerate() {
                let f = &fields[fi];
                let c = field_coeff(f.gen, f.deriv, -depths[j]);
                if c == Rational::from_integer(0.into()) {
                    return;
                }
                coeff *= c;
                parts.push(Part::new(f.gen, depths[j]));
            }
            out.push((parts, coeff));
            return;
        }
        let last = idx + 1 == creators.len();
        let range: Vec<i64> = if last { vec![rem] } else { (0..=rem).collect() };
        for e in range {
            depths[idx] = floors[idx] + Half::int(e);
            rec(idx + 1, rem - e, fields, creators, floors, depths, out);
        }
    }
    if creators.is_empty() {
        if excess == 0 {
            out.push((Parts::new(), Rational::from_integer(1.into())));
        }
        return out;
    }
    rec(0, excess, fields, creators, &floors, &mut depths, &mut out);
    out
}

/// Terms of `E^-(-b gamma, z)` at `z^a`: `exp(sum_n b gamma(-n) z^n / n)`.
pub(crate) fn exp_creation(b: i64, a: i64) -> Vec<(Parts, Rational)> {
    partitions(a)
        .into_iter()
        .map(|lam| {
            let mut c = Rational::from_integer(1.into());
            for &p in &lam {
                c *= rat(b, p);
            }
            c /= Rational::from_integer(multiplicity_factorial(&lam).into());
            (lam.iter().map(|&p| Part::new(Gen::Boson, Half::int(p))).collect(), c)
        })
        .collect()
}

/// `E^+(-b gamma, z)` at `z^(-bdeg)` applied to a lattice state:
/// `exp(-sum_n b gamma(n) z^(-n) / n)`.
pub(crate) fn exp_annihilate(b: i64, bdeg: i64, v: &State) -> State {
    let mut out = State::zero(v.space().clone());
    if bdeg == 0 {
        return v.clone();
    }
    for lam in partitions(bdeg) {
        let mut c = Rational::from_integer(1.into());
        for &p in &lam {
            c *= rat(-b, p);
        }
        c /= Rational::from_integer(multiplicity_factorial(&lam).into());
        let mut cur = v.clone();
        for &p in &lam {
            cur = apply_mode(Gen::Boson, Half::int(p), &cur);
            if cur.is_zero() {
                break;
            }
        }
        out.add_scaled(&cur, &Scalar::from(c));
    }
    out
}

struct Expansion<'a> {
    target: &'a Space,
    fields: Vec<Field>,
    exp_b: i64,
    weight_sum: Half,
    n: Half,
    cache: HashMap<(Vec<usize>, Half), Creations>,
}

impl Expansion<'_> {
    fn creations(&mut self, creators: &[usize], total: Half) -> Creations {
        let key = (creators.to_vec(), total);
        if let Some(c) = self.cache.get(&key) {
            return c.clone();
        }
        let c = creation_terms(&self.fields, creators, total);
        self.cache.insert(key, c.clone());
        c
    }

    fn run(&mut self, v_mono: &Monomial, coeff: &Scalar, out: &mut State) {
        let start = State::term(self.target.clone(), v_mono.clone(), coeff.clone());
        let budget = v_mono.depth();
        self.annihilate(0, start, Half::ZERO, budget, &mut Vec::new(), v_mono.momentum(), out);
    }

    #[allow(clippy::too_many_arguments)]
    fn annihilate(
        &mut self,
        i: usize,
        cur: State,
        spent: Half,
        budget: Half,
        creators: &mut Vec<usize>,
        mu: Half,
        out: &mut State,
    ) {
        if i == self.fields.len() {
            self.finish(&cur, spent, creators, mu, out);
            return;
        }
        creators.push(i);
        self.annihilate(i + 1, cur.clone(), spent, budget, creators, mu, out);
        creators.pop();
        let f = self.fields[i].clone();
        let mut s = if f.class.zero_mode { Half::ZERO } else { f.class.smallest_positive() };
        while spent + s <= budget {
            let c = field_coeff(f.gen, f.deriv, s);
            let next = apply_mode(f.gen, s, &cur);
            if !next.is_zero() {
                self.annihilate(i + 1, next.scale(&Scalar::from(c)), spent + s, budget, creators, mu, out);
            }
            s += Half::ONE;
        }
    }

    fn finish(&mut self, cur: &State, spent: Half, creators: &[usize], mu: Half, out: &mut State) {
        // creation depth + E^- degree = spent + E^+ degree + sum(d) - (b gamma, mu gamma) - n - 1
        let pairing = Half::int(self.exp_b * mu.twice());
        let base = spent + self.weight_sum - pairing - self.n - Half::ONE;
        if self.exp_b == 0 {
            for (parts, c) in self.creations(creators, base) {
                let c = Scalar::from(c);
                for (m, k) in cur.terms() {
                    out.add_term(m.times(&parts), k * &c);
                }
            }
            return;
        }
        let b = self.exp_b;
        let avail = cur.max_depth().as_int().unwrap_or(0);
        for bdeg in 0..=avail {
            let ann = exp_annihilate(b, bdeg, cur);
            if ann.is_zero() {
                continue;
            }
            let total = base + Half::int(bdeg);
            if total.is_negative() {
                continue;
            }
            let shifted = ann.map_monomials(self.target.clone(), |m| (m.with_momentum(m.momentum() + Half::int(b)), Scalar::one()));
            let tot = total.as_int().expect("integral lattice creation depth");
            for adeg in 0..=tot {
                let cre = self.creations(creators, total - Half::int(adeg));
                if cre.is_empty() {
                    continue;
                }
                let ex = exp_creation(b, adeg);
                for (p1, c1) in &cre {
                    for (p2, c2) in &ex {
                        let c = Scalar::from(c1 * c2);
                        let mut parts = p1.clone();
                        parts.extend_from_slice(p2);
                        for (m, k) in shifted.terms() {
                            out.add_term(m.times(&parts), k * &c);
                        }
                    }
                }
            }
        }
    }
}

/// Field expansion of a single operator monomial `coeff * parts * e^(b gamma)`.
pub(crate) fn expand_monomial(target: &Space, u_mono: &Monomial, u_coeff: &Scalar, n: Half, v: &State, out: &mut State) {
    let exp_b = u_mono.momentum().as_int().expect("acting exponentials have integral momentum");
    let mut ex = Expansion {
        target,
        fields: u_mono.parts().iter().map(|p| Field::new(target, p)).collect(),
        exp_b,
        weight_sum: u_mono.depth(),
        n,
        cache: HashMap::new(),
    };
    for (m, c) in v.terms() {
        ex.run(m, &(c * u_coeff), out);
    }
}

/// Rewrite a Heisenberg state `M(1)` in the lattice basis via
/// `alpha = gamma / sqrt(2)`.
pub fn heisenberg_to_lattice(u: &State) -> State {
    let inv_sqrt2 = Scalar::from_quad(Quad::new(Rational::from_integer(0.into()), rat(1, 2)));
    u.map_monomials(Space::Lattice, |m| (m.clone(), inv_sqrt2.pow(m.boson_count() as u32)))
}

/// Bring an operator into the representation used by the target space, or
/// explain why it cannot act there.
pub(crate) fn operator_for(u: &State, target: &Space) -> Result<State> {
    let mismatch = || Error::SpaceMismatch { left: u.space().to_string(), right: target.to_string() };
    match (u.space(), target) {
        (Space::Fock { momentum }, _) if !momentum.is_zero() => {
            Err(Error::NotActing(u.to_string(), format!("vectors of the module {} are not operators", u.space())))
        }
        (Space::Fock { .. }, Space::Fock { .. }) => Ok(u.clone()),
        (Space::Fock { .. }, Space::Lattice) => Ok(heisenberg_to_lattice(u)),
        (Space::Fock { .. }, Space::Tensor { rank }) => u.reinterpret(Space::Tensor { rank: *rank }),
        (Space::Lattice, Space::Lattice) => {
            if let Some((m, _)) = u.terms().find(|(m, _)| !m.momentum().is_integer()) {
                return Err(Error::NotActing(
                    u.fmt_monomial(m),
                    "module vectors do not act: half-lattice exponentials are not in V_L".into(),
                ));
            }
            Ok(u.clone())
        }
        (Space::Weyl { rank: a }, Space::Weyl { rank: b }) | (Space::Tensor { rank: a }, Space::Tensor { rank: b }) => {
            if a != b {
                Err(Error::RankMismatch(*a, *b))
            } else {
                Ok(u.clone())
            }
        }
        (Space::Weyl { rank: a }, Space::Tensor { rank: b }) => {
            if a != b {
                Err(Error::RankMismatch(*a, *b))
            } else {
                u.reinterpret(Space::Tensor { rank: *b })
            }
        }
        (Space::Twisted, _) => Err(Error::NotActing(u.to_string(), "twisted-module vectors are not operators".into())),
        _ => Err(mismatch()),
    }
}

/// Conformal weight of an operator in its own algebra, as a half-integer.
pub(crate) fn operator_weight(u: &State) -> Result<Half> {
    u.half_weight()
}

/// `u_(n) v` for untwisted spaces, by normal-ordered field expansion.
/// Twisted targets are delegated to [`crate::twisted::twisted_vertex_mode`].
pub fn vertex_mode(u: &State, n: ModeIndex, v: &State) -> Result<State> {
    if matches!(v.space(), Space::Twisted) {
        return crate::twisted::twisted_vertex_mode(u, n, v);
    }
    let op = operator_for(u, v.space())?;
    let formal = match n.convention {
        Convention::Formal => n.value,
        Convention::Weighted => n.to_formal(operator_weight(u)?),
    };
    if !formal.is_integer() {
        return Err(Error::BadMode(formal.to_string(), format!("untwisted modes on {} are integral", v.space())));
    }
    let mut out = State::zero(v.space().clone());
    for (m, c) in op.terms() {
        expand_monomial(v.space(), m, c, formal, v, &mut out);
    }
    Ok(out)
}

/// Convenience: formal mode with an integer index.
pub fn mode(u: &State, n: i64, v: &State) -> Result<State> {
    vertex_mode(u, ModeIndex::formal(n), v)
}

/// `u_m (w_n v) - w_n (u_m v)`.
pub fn commutator_mode(u: &State, m: ModeIndex, w: &State, n: ModeIndex, v: &State) -> Result<State> {
    let a = vertex_mode(u, m, &vertex_mode(w, n, v)?)?;
    let b = vertex_mode(w, n, &vertex_mode(u, m, v)?)?;
    a.try_sub(&b)
}
