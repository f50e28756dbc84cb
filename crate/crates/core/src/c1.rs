//! Graded pieces of `C_1(M) = span{v_(-1) m : v in M(1)^+, wt v > 0}` for
//! the irreducible `M(1)^+`-modules, and rank analysis over `Q(sqrt 2)(x)`.
//!
//! Everything is graded by depth (the Heisenberg number grading), so the
//! momentum parameter never enters the grading.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinat::{odd_partitions, partitions};
use crate::engine::{vertex_mode, ModeIndex};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::linalg::{factor_roots, minor_gcd, rank, scalar_to_poly};
use crate::scalar::{rat, Poly, Quad, Rational, Scalar};
use crate::state::{Gen, Monomial, Part, Space, State};

#[derive(Clone, Debug, PartialEq)]
pub enum C1Module {
    /// `M(1, x)` with the momentum kept as a parameter.
    Generic,
    /// `M(1, mu)` for a specific momentum.
    Momentum(Scalar),
    Plus,
    Minus,
    TwistedPlus,
    TwistedMinus,
}

impl C1Module {
    /// `M(1, m / sqrt 2)`.
    pub fn atypical(m: i64) -> C1Module {
        C1Module::Momentum(Scalar::from_quad(Quad::new(rat(0, 1), rat(m, 2))))
    }

    pub fn space(&self) -> Space {
        match self {
            C1Module::Generic => Space::symbolic_fock(),
            C1Module::Momentum(mu) => Space::fock(mu.clone()),
            C1Module::Plus | C1Module::Minus => Space::heisenberg(),
            C1Module::TwistedPlus | C1Module::TwistedMinus => Space::Twisted,
        }
    }

    /// Parity of the monomials spanning the module, if it is a theta-eigenspace.
    pub fn parity(&self) -> Option<usize> {
        match self {
            C1Module::Plus | C1Module::TwistedPlus => Some(0),
            C1Module::Minus | C1Module::TwistedMinus => Some(1),
            _ => None,
        }
    }

    pub fn is_twisted(&self) -> bool {
        matches!(self, C1Module::TwistedPlus | C1Module::TwistedMinus)
    }

    /// Monomial basis of the depth-`d` piece.
    pub fn basis(&self, d: Half) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = if self.is_twisted() {
            // depths in 1/2 + Z: partitions of 2d into odd parts
            odd_partitions(d.twice())
                .into_iter()
                .map(|p| Monomial::from_parts(p.into_iter().map(|t| Part::new(Gen::Boson, Half::from_twice(t)))))
                .collect()
        } else {
            match d.as_int() {
                Some(n) if n >= 0 => partitions(n).iter().map(|p| Monomial::bosons(p)).collect(),
                _ => Vec::new(),
            }
        };
        if let Some(k) = self.parity() {
            out.retain(|m| m.len() % 2 == k);
        }
        out.sort();
        out
    }
}

impl fmt::Display for C1Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            C1Module::Generic => write!(f, "M(1,x)"),
            C1Module::Momentum(mu) => write!(f, "M(1,{mu})"),
            C1Module::Plus => write!(f, "M(1)+"),
            C1Module::Minus => write!(f, "M(1)-"),
            C1Module::TwistedPlus => write!(f, "M(1)(theta)+"),
            C1Module::TwistedMinus => write!(f, "M(1)(theta)-"),
        }
    }
}

/// Monomial basis of `M(1)^+` at weight `w`: even-length alpha monomials.
pub fn orbifold_basis(w: i64) -> Vec<State> {
    partitions(w)
        .into_iter()
        .filter(|p| p.len() % 2 == 0)
        .map(|p| State::monomial(Space::heisenberg(), Monomial::bosons(&p)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct C1Matrix {
    pub module: C1Module,
    pub depth: Half,
    pub columns: Vec<Monomial>,
    /// `(wt v, v, m)` for each row.
    pub labels: Vec<(i64, State, Monomial)>,
    pub rows: Vec<Vec<Scalar>>,
}

impl C1Matrix {
    pub fn ambient_dim(&self) -> usize {
        self.columns.len()
    }

    /// Conformal weight of the depth-`d` piece.
    pub fn conformal_weight(&self) -> Scalar {
        let d = Scalar::from(self.depth.to_rational());
        match self.module.space() {
            Space::Fock { momentum } => &(&(&momentum * &momentum) * &Scalar::frac(1, 2)) + &d,
            Space::Twisted => &Scalar::frac(1, 16) + &d,
            _ => d,
        }
    }

    fn coordinates(&self, s: &State) -> Result<Vec<Scalar>> {
        let mut row = vec![Scalar::zero(); self.columns.len()];
        for (m, c) in s.terms() {
            let i = self
                .columns
                .binary_search(m)
                .map_err(|_| Error::Sector(format!("{} is outside {} at depth {}", s.fmt_monomial(m), self.module, self.depth)))?;
            row[i] = c.clone();
        }
        Ok(row)
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    /// Whether `target` has a nonzero component outside the row span.
    pub fn excludes(&self, target: &State) -> Result<bool> {
        let mut rows = self.rows.clone();
        rows.push(self.coordinates(target)?);
        Ok(rank(&rows) > self.rank())
    }

    /// Same matrix with the momentum parameter set to `at`.
    pub fn specialize(&self, at: &Quad) -> Option<Vec<Vec<Scalar>>> {
        self.rows.iter().map(|r| r.iter().map(|c| c.specialize(at)).collect()).collect()
    }
}

fn v_minus_one(v: &State, m: &State) -> Result<State> {
    vertex_mode(v, ModeIndex::formal(-1), m)
}

/// Rows `v_(-1) m` landing in depth `d`, for `v` running over the monomial
/// basis of `M(1)^+` with `0 < wt v <= max_weight` and `m` over the basis of
/// the complementary depth.
fn c1_rows(module: &C1Module, d: Half, max_weight: i64, mat: &mut C1Matrix) -> Result<()> {
    let space = module.space();
    for w in 1..=max_weight {
        let md = d - Half::int(w);
        if md.is_negative() {
            // rows beyond the grading bound still get checked to vanish here
            for v in orbifold_basis(w) {
                let r = v_minus_one(&v, &State::vacuum(space.clone()))?.depth_component(d);
                if !r.is_zero() {
                    return Err(Error::Sector(format!("grading bound violated by {v}")));
                }
            }
            continue;
        }
        for v in orbifold_basis(w) {
            for m in module.basis(md) {
                let r = v_minus_one(&v, &State::monomial(space.clone(), m.clone()))?;
                let row = mat.coordinates(&r)?;
                mat.labels.push((w, v.clone(), m));
                mat.rows.push(row);
            }
        }
    }
    Ok(())
}

/// The matrix of `C_1(M)(d)` against the monomial basis of `M(d)`.
pub fn c1_component(module: &C1Module, d: Half) -> Result<C1Matrix> {
    c1_component_to(module, d, d.floor())
}

/// As [`c1_component`], drawing `v` from weights up to `max_weight`. Weights
/// above `d` contribute nothing; that is checked rather than assumed.
pub fn c1_component_to(module: &C1Module, d: Half, max_weight: i64) -> Result<C1Matrix> {
    if d.is_negative() {
        return Err(Error::Sector(format!("negative depth {d}")));
    }
    let mut mat = C1Matrix { module: module.clone(), depth: d, columns: module.basis(d), labels: Vec::new(), rows: Vec::new() };
    c1_rows(module, d, max_weight, &mut mat)?;
    Ok(mat)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub generic_rank: usize,
    pub ambient_dim: usize,
    /// Squarefree part of the gcd of the maximal nonvanishing minors.
    pub exceptional: Poly,
    /// Irreducible pieces of `exceptional` with their roots in `Q(sqrt 2)`.
    pub exceptional_candidates: Vec<(Poly, Vec<Quad>)>,
    /// `(x0, rank at x0)` for random rational `x0` off the exceptional set.
    pub specializations: Vec<(Rational, usize)>,
}

impl RankReport {
    pub fn codimension(&self) -> usize {
        self.ambient_dim - self.generic_rank
    }

    pub fn coherent(&self) -> bool {
        self.specializations.iter().all(|(_, r)| *r == self.generic_rank)
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-60..=60);
        let d: i64 = rng.gen_range(1..=25);
        if n != 0 {
            return rat(n, d);
        }
    }
}

/// Exact rank analysis of a C1 matrix over `Q(sqrt 2)(x)`, with a
/// specialization cross-check at `samples` random rational points.
pub fn rank_analysis(mat: &C1Matrix, samples: usize, seed: u64) -> Result<RankReport> {
    rank_analysis_rows(&mat.rows, mat.ambient_dim(), samples, seed)
}

pub fn rank_analysis_rows(rows: &[Vec<Scalar>], ambient_dim: usize, samples: usize, seed: u64) -> Result<RankReport> {
    let polys: Vec<Vec<Poly>> = rows
        .iter()
        .map(|r| r.iter().map(|c| scalar_to_poly(c).ok_or_else(|| Error::Sector(format!("non-polynomial entry {c}")))).collect())
        .collect::<Result<_>>()?;
    let (generic_rank, g) = minor_gcd(polys);
    let exceptional = g.squarefree();
    let exceptional_candidates = factor_roots(&exceptional);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specializations = Vec::new();
    while specializations.len() < samples {
        let x0 = random_rational(&mut rng);
        let q = Quad::from_rational(x0.clone());
        if exceptional.eval(&q).is_zero() {
            continue;
        }
        let spec: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|c| c.specialize(&q).expect("polynomial entry")).collect()).collect();
        specializations.push((x0, rank(&spec)));
    }
    Ok(RankReport { generic_rank, ambient_dim, exceptional, exceptional_candidates, specializations })
}

/// Same report computed from a shuffled row order.
pub fn shuffled_rank_analysis(mat: &C1Matrix, samples: usize, seed: u64) -> Result<RankReport> {
    let mut rows = mat.rows.clone();
    rows.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
    rank_analysis_rows(&rows, mat.ambient_dim(), samples, seed)
}

#[derive(Clone, Debug)]
pub struct TopExclusion {
    pub i: i64,
    pub depth: Half,
    pub excluded: bool,
}

#[derive(Clone, Debug)]
pub struct TwistedTopReport {
    pub sign: i8,
    pub tops: Vec<TopExclusion>,
    /// `(depth, dim M(d), dim of M(d) / C_1(d))`.
    pub quotients: Vec<(Half, usize, usize)>,
}

impl TwistedTopReport {
    pub fn passed(&self) -> bool {
        self.tops.iter().all(|t| t.excluded)
    }
}

/// Check that `h(-1/2)^(2i) 1_tw` (sign `+`) or `h(-1/2)^(2i+1) 1_tw`
/// (sign `-`) lies outside `C_1` for `i <= i_max`.
pub fn twisted_top_exclusion(sign: i8, i_max: i64) -> Result<TwistedTopReport> {
    let module = if sign >= 0 { C1Module::TwistedPlus } else { C1Module::TwistedMinus };
    let mut tops = Vec::new();
    let mut quotients = Vec::new();
    for i in 0..=i_max {
        let len = if sign >= 0 { 2 * i } else { 2 * i + 1 };
        let depth = Half::from_twice(len);
        let top = State::monomial(Space::Twisted, Monomial::from_parts((0..len).map(|_| Part::new(Gen::Boson, Half::HALF))));
        let mat = c1_component(&module, depth)?;
        let r = mat.rank();
        quotients.push((depth, mat.ambient_dim(), mat.ambient_dim() - r));
        tops.push(TopExclusion { i, depth, excluded: mat.excludes(&top)? });
    }
    Ok(TwistedTopReport { sign, tops, quotients })
}

#[derive(Clone, Debug)]
pub struct CodimScan {
    pub m: i64,
    /// `(depth, dim M(d), rank C_1(d))`.
    pub rows: Vec<(i64, usize, usize)>,
    /// Stopped early because a matrix exceeded the row budget.
    pub partial: bool,
}

impl CodimScan {
    pub fn codimensions(&self) -> Vec<usize> {
        self.rows.iter().map(|(_, a, r)| a - r).collect()
    }

    /// First depth from which every scanned codimension is zero.
    pub fn threshold(&self) -> Option<i64> {
        let mut t = None;
        for (d, a, r) in self.rows.iter().rev() {
            if a != r {
                break;
            }
            t = Some(*d);
        }
        t
    }
}

/// Per-depth codimension of `C_1` in `M(1, m / sqrt 2)` for `d <= d_max`.
pub fn atypical_codim_scan(m: i64, d_max: i64, row_budget: usize) -> Result<CodimScan> {
    if m < 0 {
        return Err(Error::Sector(format!("m must be nonnegative, got {m}")));
    }
    let module = C1Module::atypical(m);
    let mut rows = Vec::new();
    let mut partial = false;
    for d in 0..=d_max {
        let mat = c1_component(&module, Half::int(d))?;
        if mat.rows.len() > row_budget {
            partial = true;
            break;
        }
        rows.push((d, mat.ambient_dim(), mat.rank()));
    }
    Ok(CodimScan { m, rows, partial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::partition_counts;

    #[test]
    fn orbifold_dimensions() {
        let dims: Vec<usize> = (1..=6).map(|w| orbifold_basis(w).len()).collect();
        assert_eq!(dims, [0, 1, 1, 3, 3, 6]);
    }

    #[test]
    fn generic_depth_two() {
        let mat = c1_component(&C1Module::Generic, Half::int(2)).unwrap();
        assert_eq!(mat.rows.len(), 1);
        assert_eq!(mat.ambient_dim(), 2);
        // omega_(-1) e^x = x a(-2) e^x + a(-1)^2 e^x / 2
        let x = Scalar::lambda();
        let expect = State::from_terms(
            Space::symbolic_fock(),
            [(Monomial::bosons(&[2]), x), (Monomial::bosons(&[1, 1]), Scalar::frac(1, 2))],
        );
        let omega = orbifold_basis(2)[0].scale(&Scalar::frac(1, 2));
        let got = v_minus_one(&omega, &State::vacuum(Space::symbolic_fock())).unwrap();
        assert_eq!(got, expect);
        let r = rank_analysis(&mat, 3, 1).unwrap();
        assert_eq!((r.generic_rank, r.ambient_dim), (1, 2));
        assert!(r.exceptional_candidates.is_empty());
        assert!(r.coherent());
    }

    #[test]
    fn vacuum_not_in_c1() {
        let mat = c1_component(&C1Module::Plus, Half::ZERO).unwrap();
        assert_eq!(mat.rank(), 0);
        assert_eq!(mat.ambient_dim(), 1);
        let tw = c1_component(&C1Module::TwistedPlus, Half::ZERO).unwrap();
        assert!(tw.rows.is_empty());
    }

    #[test]
    fn zero_matrix_rank() {
        let r = rank_analysis_rows(&[vec![Scalar::zero(); 3]], 3, 2, 0).unwrap();
        assert_eq!(r.generic_rank, 0);
    }

    #[test]
    fn basis_sizes() {
        let p = partition_counts(6);
        for d in 0..=6 {
            assert_eq!(C1Module::Generic.basis(Half::int(d)).len() as u64, p[d as usize]);
        }
        // h(-1/2)^2, h(-3/2) h(-1/2) at depths 1 and 2
        assert_eq!(C1Module::TwistedPlus.basis(Half::int(1)).len(), 1);
        assert_eq!(C1Module::TwistedPlus.basis(Half::int(2)).len(), 2);
        assert_eq!(C1Module::TwistedMinus.basis(Half::from_twice(3)).len(), 2);
    }

    #[test]
    fn grading_bound_saturates() {
        for module in [C1Module::Generic, C1Module::Plus, C1Module::TwistedMinus] {
            let d = if module.is_twisted() { Half::from_twice(5) } else { Half::int(4) };
            let a = c1_component(&module, d).unwrap();
            let b = c1_component_to(&module, d, d.floor() + 2).unwrap();
            assert_eq!(a.rows.len(), b.rows.len());
            assert_eq!(a.rank(), b.rank());
        }
    }

    #[test]
    fn generic_ranks() {
        let got: Vec<(usize, usize)> = (0..=5)
            .map(|d| {
                let r = rank_analysis(&c1_component(&C1Module::Generic, Half::int(d)).unwrap(), 2, 3).unwrap();
                (r.generic_rank, r.ambient_dim)
            })
            .collect();
        assert_eq!(got, [(0, 1), (0, 1), (1, 2), (2, 3), (5, 5), (7, 7)]);
    }

    #[test]
    fn specialized_module_matches_specialized_matrix() {
        let generic = c1_component(&C1Module::Generic, Half::int(3)).unwrap();
        for x0 in [rat(3, 7), rat(-5, 2)] {
            let q = Quad::from_rational(x0.clone());
            let direct = c1_component(&C1Module::Momentum(Scalar::from(x0)), Half::int(3)).unwrap();
            assert_eq!(generic.specialize(&q).unwrap(), direct.rows);
        }
    }

    #[test]
    fn generic_dominates_atypical() {
        let g = rank_analysis(&c1_component(&C1Module::Generic, Half::int(4)).unwrap(), 5, 7).unwrap();
        assert!(g.coherent());
        let m0 = c1_component(&C1Module::atypical(0), Half::int(4)).unwrap();
        assert!(g.codimension() <= m0.ambient_dim() - m0.rank());
    }

    #[test]
    fn shuffled_rows_agree() {
        let mat = c1_component(&C1Module::Generic, Half::int(4)).unwrap();
        assert_eq!(rank_analysis(&mat, 3, 11).unwrap(), shuffled_rank_analysis(&mat, 3, 11).unwrap());
    }

    #[test]
    fn twisted_tops_excluded() {
        assert!(twisted_top_exclusion(1, 2).unwrap().passed());
        assert!(twisted_top_exclusion(-1, 1).unwrap().passed());
    }

    #[test]
    fn atypical_scans() {
        for m in [0, 1] {
            let s = atypical_codim_scan(m, 5, usize::MAX).unwrap();
            assert_eq!(s.codimensions(), [1, 1, 1, 1, 0, 0]);
            assert_eq!(s.threshold(), Some(4));
            assert!(!s.partial);
        }
        assert!(atypical_codim_scan(0, 5, 3).unwrap().partial);
    }
}
