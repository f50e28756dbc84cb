//! Exact linear algebra: ranks over the scalar field, span membership, and
//! determinantal divisors of polynomial matrices.

use std::collections::BTreeMap;

use crate::scalar::{Poly, Quad, Scalar};
use crate::state::{Monomial, State};

/// Coordinate rows of `states` against the sorted union of their monomials.
pub fn coordinates(states: &[State]) -> (Vec<Monomial>, Vec<Vec<Scalar>>) {
    let mut cols: BTreeMap<Monomial, usize> = BTreeMap::new();
    for s in states {
        for (m, _) in s.terms() {
            let n = cols.len();
            cols.entry(m.clone()).or_insert(n);
        }
    }
    let order: Vec<Monomial> = cols.keys().cloned().collect();
    let index: BTreeMap<&Monomial, usize> = order.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = states
        .iter()
        .map(|s| {
            let mut row = vec![Scalar::zero(); order.len()];
            for (m, c) in s.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect();
    (order, rows)
}

/// Reduced row echelon basis, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// `(pivot column, row)`; each row has 1 at its pivot.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; returns the remainder.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (p, row) in &self.rows {
            if *p >= v.len() || v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&c * r);
                }
            }
        }
        v
    }

    /// Insert `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        let v: Vec<Scalar> = v.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if p < row.len() && !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x = &*x - &(&c * r);
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: Vec<Scalar>) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }
}

/// Reduced echelon basis of a subspace of states, with the leading monomial
/// of each row as its pivot.
#[derive(Clone, Debug, Default)]
pub struct StateSpan {
    rows: Vec<(Monomial, State)>,
}

impl StateSpan {
    pub fn new() -> Self {
        StateSpan::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &State> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn reduce(&self, v: &State) -> State {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            let c = v.coeff(p);
            if !c.is_zero() {
                v.add_scaled(row, &-c);
            }
        }
        v
    }

    /// Insert `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &State) -> bool {
        let r = self.reduce(v);
        let Some((p, c)) = r.terms().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let r = r.scale(&c.inv());
        for (_, row) in self.rows.iter_mut() {
            let k = row.coeff(&p);
            if !k.is_zero() {
                row.add_scaled(&r, &-k);
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn contains(&self, v: &State) -> bool {
        self.reduce(v).is_zero()
    }
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

pub fn rank_of_states(states: &[State]) -> usize {
    rank(&coordinates(states).1)
}

/// Whether `target` lies in the span of `states`.
pub fn in_span(states: &[State], target: &State) -> bool {
    let mut all = states.to_vec();
    all.push(target.clone());
    let (_, mut rows) = coordinates(&all);
    let t = rows.pop().unwrap();
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.contains(t)
}

/// Row echelon form over `Q(sqrt 2)[x]` by unimodular row operations
/// (Euclidean reduction in each pivot column). Zero rows are dropped.
pub fn hermite_rows(mut rows: Vec<Vec<Poly>>) -> Vec<Vec<Poly>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for col in 0..ncols {
        loop {
            // smallest-degree nonzero entry in this column becomes the pivot
            let pivot = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[col].is_zero())
                .min_by_key(|(_, r)| r[col].degree().unwrap())
                .map(|(i, _)| i);
            let Some(pi) = pivot else { break };
            let prow = rows.swap_remove(pi);
            let mut done = true;
            for r in rows.iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let (q, rem) = r[col].div_rem(&prow[col]);
                for (x, y) in r.iter_mut().zip(&prow) {
                    *x = x.sub(&q.mul(y));
                }
                debug_assert_eq!(r[col], rem);
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                out.push(prow);
                break;
            }
            rows.push(prow);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
pub fn poly_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, s);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Generic rank and the monic gcd of all maximal nonvanishing minors of a
/// polynomial matrix. Unimodular row operations preserve the ideal of
/// minors, so the minors are taken from the echelon form.
pub fn minor_gcd(rows: Vec<Vec<Poly>>) -> (usize, Poly) {
    let h = hermite_rows(rows);
    let r = h.len();
    if r == 0 {
        return (0, Poly::one());
    }
    let ncols = h[0].len();
    let mut g = Poly::zero();
    for cols in combinations(ncols, r) {
        let sub: Vec<Vec<Poly>> = h.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        let d = poly_det(sub);
        if !d.is_zero() {
            g = if g.is_zero() { d.monic() } else { g.gcd(&d) };
            if g.is_constant() {
                break;
            }
        }
    }
    (r, g.monic())
}

/// Convert a scalar to a polynomial in the momentum parameter, if it is one.
pub fn scalar_to_poly(s: &Scalar) -> Option<Poly> {
    let f = s.to_ratfunc();
    f.is_polynomial().then(|| f.num().clone())
}

/// Split a squarefree polynomial into factors with their roots in `Q(sqrt 2)`
/// where available: rational linear factors, then quadratics solved by the
/// discriminant. Remaining factors are reported without roots.
pub fn factor_roots(p: &Poly) -> Vec<(Poly, Vec<Quad>)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut rest = p.monic();
    if rest.has_rational_coeffs() {
        for r in crate::scalar::rational_roots(&rest) {
            let lin = Poly::from_coeffs(vec![Quad::from_rational(-r.clone()), Quad::one()]);
            let (q, rem) = rest.div_rem(&lin);
            if rem.is_zero() {
                rest = q;
                out.push((lin, vec![Quad::from_rational(r)]));
            }
        }
    }
    if rest.degree() == Some(2) {
        let c = rest.coeffs();
        // x^2 + b x + c0 with disc b^2 - 4 c0
        let (c0, b) = (&c[0], &c[1]);
        let disc = b.mul(b).sub(&c0.mul(&Quad::from_rational(crate::scalar::rat(4, 1))));
        if let Some(s) = quad_sqrt(&disc) {
            let half = Quad::from_rational(crate::scalar::rat(1, 2));
            let r1 = b.neg().add(&s).mul(&half);
            let r2 = b.neg().sub(&s).mul(&half);
            out.push((rest.clone(), vec![r1, r2]));
            return out;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push((rest, Vec::new()));
    }
    out
}

/// Square root in `Q(sqrt 2)` of a rational number, when one exists there.
fn quad_sqrt(q: &Quad) -> Option<Quad> {
    if !q.is_rational() {
        return None;
    }
    let r = q.a.clone();
    if let Some(s) = crate::scalar::rational_sqrt(&r) {
        return Some(Quad::from_rational(s));
    }
    let half = r / crate::scalar::rat(2, 1);
    crate::scalar::rational_sqrt(&half).map(|s| Quad::new(crate::scalar::rat(0, 1), s))
}
