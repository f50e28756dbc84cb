//! Twisted vertex operators `Y_tw(u, z) = W(Delta_z u, z)` on the Fock space
//! of half-integer modes.
//!
//! `W(u, z)` is the normal-ordered product of derivatives of
//! `h(z) = sum_{s in 1/2 + Z} h(s) z^(-s-1)` shaped like `u`, and
//! `Delta_z = exp(sum_{m,n >= 0} c_mn alpha(m) alpha(n) z^(-m-n))` with
//! `sum c_mn x^m y^n = -log(((1+x)^(1/2) + (1+y)^(1/2)) / 2)`.

use std::collections::BTreeMap;
use std::sync::RwLock;

use crate::engine::{apply_mode, expand_monomial, Convention, ModeIndex};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalar::{binomial, rat, Rational, Scalar};
use crate::state::{Gen, Space, State};

static DELTA: RwLock<Vec<Vec<Rational>>> = RwLock::new(Vec::new());

fn delta_table(order: usize) -> Vec<Vec<Rational>> {
    let zero = Rational::from_integer(0.into());
    // coefficient lists indexed [i][j] with i + j <= order
    let mut t = vec![vec![zero.clone(); order + 1]; order + 1];
    let half = rat(1, 2);
    for k in 1..=order {
        let c = binomial(&half, k as u32) * rat(1, 2);
        t[k][0] += c.clone();
        t[0][k] += c;
    }
    let mut out = vec![vec![zero.clone(); order + 1]; order + 1];
    let mut power = t.clone();
    for k in 1..=order {
        let c = rat(if k % 2 == 0 { 1 } else { -1 }, k as i64);
        for i in 0..=order {
            for j in 0..=(order - i) {
                if power[i][j] != zero {
                    out[i][j] += &power[i][j] * &c;
                }
            }
        }
        let mut next = vec![vec![zero.clone(); order + 1]; order + 1];
        for i in 0..=order {
            for j in 0..=(order - i) {
                if power[i][j] == zero {
                    continue;
                }
                for a in 1..=(order - i - j) {
                    if t[a][0] != zero {
                        next[i + a][j] += &power[i][j] * &t[a][0];
                    }
                    if t[0][a] != zero {
                        next[i][j + a] += &power[i][j] * &t[0][a];
                    }
                }
            }
        }
        power = next;
    }
    out
}

/// `c_mn`, from a table shared across threads and grown on demand.
pub fn delta_coefficient(m: usize, n: usize) -> Rational {
    let need = m + n;
    {
        let t = DELTA.read().unwrap();
        if t.len() > need {
            return t[m][n].clone();
        }
    }
    let mut t = DELTA.write().unwrap();
    if t.len() <= need {
        *t = delta_table((need + 1).max(16).max(2 * t.len()));
    }
    t[m][n].clone()
}

/// `Delta_z v` as a map from `j` to the coefficient of `z^(-j)`.
pub fn delta_apply(v: &State) -> Result<BTreeMap<i64, State>> {
    match v.space() {
        Space::Fock { momentum } if momentum.is_zero() => {}
        Space::Fock { momentum } => return Err(Error::NonzeroMomentum(momentum.to_string())),
        other => return Err(Error::Sector(format!("Delta_z acts on M(1), not {other}"))),
    }
    let mut out: BTreeMap<i64, State> = BTreeMap::new();
    let top = v.max_depth().as_int().unwrap_or(0);
    // exp(X) v with X lowering depth by m + n >= 2
    let mut term: BTreeMap<i64, State> = BTreeMap::from([(0, v.clone())]);
    let mut k = 1;
    while !term.is_empty() {
        for (j, s) in &term {
            out.entry(*j).or_insert_with(|| State::zero(v.space().clone())).add_scaled(s, &Scalar::one());
        }
        let mut next: BTreeMap<i64, State> = BTreeMap::new();
        for (j, s) in &term {
            let room = top - j;
            for a in 1..room {
                let sa = apply_mode(Gen::Boson, Half::int(a), s);
                if sa.is_zero() {
                    continue;
                }
                for b in 1..=(room - a) {
                    let c = delta_coefficient(a as usize, b as usize) / rat(k, 1);
                    if c == Rational::from_integer(0.into()) {
                        continue;
                    }
                    let sb = apply_mode(Gen::Boson, Half::int(b), &sa);
                    if sb.is_zero() {
                        continue;
                    }
                    next.entry(j + a + b).or_insert_with(|| State::zero(v.space().clone())).add_scaled(&sb, &Scalar::from(c));
                }
            }
        }
        next.retain(|_, s| !s.is_zero());
        term = next;
        k += 1;
    }
    out.retain(|_, s| !s.is_zero());
    Ok(out)
}

/// `W(u, z)` coefficient of `z^(-n-1)` on a twisted state.
pub fn w_mode(u: &State, n: Half, v: &State) -> State {
    let mut out = State::zero(Space::Twisted);
    for (m, c) in u.terms() {
        expand_monomial(&Space::Twisted, m, c, n, v, &mut out);
    }
    out
}

/// Twisted mode `u_n` of an untwisted `u` in `M(1)` acting on `M(1)(theta)`.
/// Theta-even parts of `u` have integral formal modes, theta-odd parts
/// half-integral ones.
pub fn twisted_vertex_mode(u: &State, n: ModeIndex, v: &State) -> Result<State> {
    if !matches!(v.space(), Space::Twisted) {
        return Err(Error::Sector(format!("twisted modes act on M(1)(theta), not {}", v.space())));
    }
    match u.space() {
        Space::Fock { momentum } if momentum.is_zero() => {}
        Space::Fock { momentum } => return Err(Error::NonzeroMomentum(momentum.to_string())),
        other => return Err(Error::NotActing(u.to_string(), format!("only M(1) acts on M(1)(theta), got {other}"))),
    }
    let formal = match n.convention {
        Convention::Formal => n.value,
        Convention::Weighted => n.to_formal(u.half_weight()?),
    };
    // theta-even monomials need integral modes
    let keep = if formal.is_integer() { 0 } else { 1 };
    let part = u.project_parity(if keep == 0 { 1 } else { -1 })?;
    if part.is_zero() && !u.is_zero() {
        return Err(Error::BadMode(
            formal.to_string(),
            format!("theta-{} operators have {} twisted modes", if keep == 0 { "odd" } else { "even" }, if keep == 0 { "half-integral" } else { "integral" }),
        ));
    }
    let mut out = State::zero(Space::Twisted);
    for (j, uj) in delta_apply(&part)? {
        let r = w_mode(&uj, formal - Half::int(j), v);
        out.add_scaled(&r, &Scalar::one());
    }
    Ok(out)
}
