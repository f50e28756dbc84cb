//! Independent mode products by the iterate recursion.
//!
//! Writing `u = x(-d) u' = g_(m) u'` with `g = x(-wt x) vac` and
//! `m = wt(x) - d - 1`, the Jacobi identity gives
//!
//! ```text
//! (g_(m) u')_(n) v = sum_j (-1)^j C(m, j) [ g_(m-j) u'_(n+j) v - (-1)^m u'_(m+n-j) g_(j) v ]
//! ```
//!
//! so every product reduces to single generator modes and products of
//! shorter monomials, ending at the vacuum or at a bare exponential. Bare
//! exponentials `e^(b gamma)` with `|b| >= 2` are peeled the same way using
//! `e^(b gamma) = (e^(s gamma))_(1 - 2|b|) e^((b - s) gamma)`. Only used to
//! cross-check [`crate::engine::vertex_mode`].

use std::collections::HashMap;

use crate::engine::{apply_mode, operator_for, Convention, ModeIndex};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalar::{binomial, rat, Scalar};
use crate::state::{Gen, Monomial, Part, Space, State};

/// One factor peeled off an operator monomial.
#[derive(Clone, Copy, Debug)]
enum Peel {
    Gen(Gen, Half),
    Exp(i64),
}

struct Oracle<'a> {
    space: &'a Space,
    /// `levels[l]` is the operator after removing the first `l` factors.
    levels: Vec<(Vec<Peel>, i64)>,
    memo: HashMap<(usize, i64, Monomial), State>,
}

fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

impl Oracle<'_> {
    fn zero(&self) -> State {
        State::zero(self.space.clone())
    }

    /// Upper bound on `p` for which `level_(p) v` can be nonzero.
    fn top_mode(&self, level: usize, v: &Monomial) -> i64 {
        let (peels, b) = &self.levels[level];
        let depth: Half = peels
            .iter()
            .map(|p| match p {
                Peel::Gen(_, d) => *d,
                Peel::Exp(_) => Half::ZERO,
            })
            .sum();
        let mu = if matches!(self.space, Space::Lattice) { v.momentum().twice() } else { 0 };
        (depth + v.depth()).floor() - 1 - b * mu
    }

    fn on_state(&mut self, level: usize, p: i64, v: &State) -> State {
        let mut out = self.zero();
        for (m, c) in v.terms() {
            let r = self.on_monomial(level, p, m);
            out.add_scaled(&r, c);
        }
        out
    }

    fn on_monomial(&mut self, level: usize, p: i64, v: &Monomial) -> State {
        if p > self.top_mode(level, v) {
            return self.zero();
        }
        let key = (level, p, v.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.compute(level, p, v);
        self.memo.insert(key, r.clone());
        r
    }

    fn compute(&mut self, level: usize, n: i64, v: &Monomial) -> State {
        let vs = State::monomial(self.space.clone(), v.clone());
        let (peels, _) = self.levels[level].clone();
        let Some(&head) = peels.first() else {
            return if n == -1 { vs } else { self.zero() };
        };
        if peels.len() == 1 {
            if let Peel::Exp(b) = head {
                if b.abs() == 1 {
                    return exp_mode(self.space, b, n, v);
                }
            }
        }
        let m = match head {
            Peel::Gen(g, d) => (g.weight() - d - Half::ONE).as_int().expect("integral formal mode"),
            Peel::Exp(b) => 1 - 2 * b.abs(),
        };
        let mut out = self.zero();
        let sm = sign(m);
        // first sum: g_(m-j) u'_(n+j) v
        let top = self.top_mode(level + 1, v);
        for j in 0..=(top - n).max(-1) {
            let inner = self.on_monomial(level + 1, n + j, v);
            if inner.is_zero() {
                continue;
            }
            let c = &sign(j) * &Scalar::from(binomial(&rat(m, 1), j as u32));
            let outer = self.single(head, m - j, &inner);
            out.add_scaled(&outer, &c);
        }
        // second sum: u'_(m+n-j) g_(j) v
        let gtop = match head {
            Peel::Gen(g, _) => (v.depth() - Half::ONE + g.weight()).floor(),
            Peel::Exp(b) => {
                let s = b.signum();
                v.depth().floor() - 1 - s * v.momentum().twice()
            }
        };
        for j in 0..=gtop.max(-1) {
            let gv = self.single(head, j, &vs);
            if gv.is_zero() {
                continue;
            }
            let inner = self.on_state(level + 1, m + n - j, &gv);
            let c = &(&sign(j) * &Scalar::from(binomial(&rat(m, 1), j as u32))) * &sm;
            out.add_scaled(&inner, &-c);
        }
        out
    }

    /// `g_(p)` for the peeled factor `g`.
    fn single(&self, head: Peel, p: i64, v: &State) -> State {
        match head {
            Peel::Gen(g, _) => apply_mode(g, Half::int(p + 1) - g.weight(), v),
            Peel::Exp(b) => {
                let s = b.signum();
                let mut out = self.zero();
                for (m, c) in v.terms() {
                    out.add_scaled(&exp_mode(self.space, s, p, m), c);
                }
                out
            }
        }
    }
}

/// `(e^(b gamma))_(n)` on a lattice monomial, expanding both exponentials
/// term by term in powers of their exponents.
fn exp_mode(space: &Space, b: i64, n: i64, v: &Monomial) -> State {
    let mu = v.momentum().twice();
    // z-power of E^-: a, of E^+: -bb; a - bb + b mu = -n - 1
    let shift = -n - 1 - b * mu;
    let start = State::monomial(space.clone(), v.clone());
    // E^+ applied: degree -> state
    let mut plus: Vec<State> = vec![start.clone()];
    let max_b = v.depth().floor();
    let mut term: Vec<State> = vec![start];
    let mut k = 1;
    loop {
        // term <- X term / k with X = sum_r (-b/r) gamma(r) z^-r
        let mut next: Vec<State> = vec![State::zero(space.clone()); (max_b + 1) as usize];
        let mut any = false;
        for (deg, st) in term.iter().enumerate() {
            if st.is_zero() {
                continue;
            }
            for r in 1..=(max_b - deg as i64) {
                let s = apply_mode(Gen::Boson, Half::int(r), st);
                if s.is_zero() {
                    continue;
                }
                any = true;
                next[deg + r as usize].add_scaled(&s, &Scalar::from(rat(-b, r * k)));
            }
        }
        if !any {
            break;
        }
        plus.resize((max_b + 1) as usize, State::zero(space.clone()));
        for (d, s) in next.iter().enumerate() {
            plus[d].add_scaled(s, &Scalar::one());
        }
        term = next;
        k += 1;
    }
    let mut out = State::zero(space.clone());
    for (bb, st) in plus.iter().enumerate() {
        let a = shift + bb as i64;
        if a < 0 || st.is_zero() {
            continue;
        }
        let shifted = st.map_monomials(space.clone(), |m| (m.with_momentum(m.momentum() + Half::int(b)), Scalar::one()));
        // E^- at z^a: the degree-a part of exp(sum_r (b/r) gamma(-r) z^r)
        let mut total = State::zero(space.clone());
        let mut cur: Vec<State> = vec![shifted];
        cur.resize((a + 1) as usize, State::zero(space.clone()));
        let mut k = 1;
        loop {
            total.add_scaled(&cur[a as usize], &Scalar::one());
            let mut next: Vec<State> = vec![State::zero(space.clone()); (a + 1) as usize];
            let mut any = false;
            for (deg, st) in cur.iter().enumerate() {
                if st.is_zero() {
                    continue;
                }
                for r in 1..=(a - deg as i64) {
                    let s = apply_mode(Gen::Boson, Half::int(-r), st);
                    any = true;
                    next[deg + r as usize].add_scaled(&s, &Scalar::from(rat(b, r * k)));
                }
            }
            if !any {
                break;
            }
            cur = next;
            k += 1;
        }
        out.add_scaled(&total, &Scalar::one());
    }
    out
}

/// `u_(n) v` by the iterate recursion. Accepts the same inputs as
/// [`crate::engine::vertex_mode`] on untwisted spaces.
pub fn vertex_mode_oracle(u: &State, n: ModeIndex, v: &State) -> Result<State> {
    if matches!(v.space(), Space::Twisted) {
        return Err(Error::Sector("the oracle covers untwisted spaces only".into()));
    }
    let op = operator_for(u, v.space())?;
    let formal = match n.convention {
        Convention::Formal => n.value,
        Convention::Weighted => n.to_formal(u.half_weight()?),
    };
    let Some(n) = formal.as_int() else {
        return Err(Error::BadMode(formal.to_string(), format!("untwisted modes on {} are integral", v.space())));
    };
    let mut out = State::zero(v.space().clone());
    for (m, c) in op.terms() {
        let b = m.momentum().as_int().expect("integral momentum");
        let mut peels: Vec<Peel> = m.parts().iter().map(|p: &Part| Peel::Gen(p.gen, p.depth)).collect();
        let mut rest = b;
        while rest != 0 {
            peels.push(Peel::Exp(rest));
            rest -= rest.signum();
        }
        // peel order: generators first, then exponentials of decreasing size
        let mut levels = Vec::new();
        for l in 0..=peels.len() {
            let tail: Vec<Peel> = peels[l..].to_vec();
            let mom = tail
                .iter()
                .find_map(|p| match p {
                    Peel::Exp(b) => Some(*b),
                    _ => None,
                })
                .unwrap_or(0);
            levels.push((tail, mom));
        }
        // an Exp(b) level stands for the bare e^(b gamma); drop nested Exp entries
        for (tail, _) in levels.iter_mut() {
            if let Some(pos) = tail.iter().position(|p| matches!(p, Peel::Exp(_))) {
                tail.truncate(pos + 1);
            }
        }
        let mut oracle = Oracle { space: v.space(), levels, memo: HashMap::new() };
        let r = oracle.on_state(0, n, v);
        out.add_scaled(&r, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{mode, vertex_mode};

    fn m1() -> Space {
        Space::heisenberg()
    }

    fn a(depths: &[i64]) -> State {
        State::monomial(m1(), Monomial::bosons(depths))
    }

    #[test]
    fn agrees_on_basic_heisenberg_cases() {
        let o = vertex_mode_oracle(&a(&[1]), ModeIndex::formal(1), &a(&[1])).unwrap();
        assert_eq!(o, State::vacuum(m1()));
        let w = a(&[1, 1]).scale(&Scalar::frac(1, 2));
        let o = vertex_mode_oracle(&w, ModeIndex::formal(1), &a(&[2])).unwrap();
        assert_eq!(o, a(&[2]).scale(&Scalar::int(2)));
        let o = vertex_mode_oracle(&a(&[2]), ModeIndex::formal(-1), &State::vacuum(m1())).unwrap();
        assert_eq!(o, a(&[2]));
    }

    #[test]
    fn agrees_on_lattice_exponentials() {
        let sp = Space::Lattice;
        let e = |r: i64, d: &[i64]| State::monomial(sp.clone(), Monomial::bosons(d).with_momentum(Half::int(r)));
        let half = State::monomial(sp.clone(), Monomial::exponential(Half::HALF));
        for u in [e(1, &[]), e(-1, &[]), e(2, &[]), e(-2, &[1]), e(1, &[2, 1])] {
            for v in [e(0, &[]), e(1, &[1]), e(-1, &[2]), half.clone()] {
                for n in -4..4 {
                    let x = mode(&u, n, &v).unwrap();
                    let y = vertex_mode_oracle(&u, ModeIndex::formal(n), &v).unwrap();
                    assert_eq!(x, y, "u={u} n={n} v={v}");
                }
            }
        }
    }

    #[test]
    fn agrees_on_weyl() {
        let sp = Space::Weyl { rank: 2 };
        let st = |parts: &[Part]| State::monomial(sp.clone(), Monomial::from_parts(parts.iter().copied()));
        let ap = |i, d: i64| Part::new(Gen::Plus(i), Half::from_twice(d));
        let am = |i, d: i64| Part::new(Gen::Minus(i), Half::from_twice(d));
        let us = [st(&[ap(1, 1)]), st(&[am(1, 3), ap(1, 1)]), st(&[ap(2, 1), am(1, 1)])];
        let vs = [st(&[]), st(&[am(1, 1)]), st(&[ap(1, 3), am(2, 1), am(1, 1)])];
        for u in &us {
            for v in &vs {
                for n in -3..3 {
                    let x = vertex_mode(u, ModeIndex::formal(n), v).unwrap();
                    let y = vertex_mode_oracle(u, ModeIndex::formal(n), v).unwrap();
                    assert_eq!(x, y, "u={u} n={n} v={v}");
                }
            }
        }
    }
}
