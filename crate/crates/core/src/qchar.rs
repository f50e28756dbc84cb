//! Truncated q-series for graded dimensions and twisted traces, closed-form
//! characters of the modules in play, and basis enumerations to check them.

use std::fmt;

use num_traits::ToPrimitive;

use crate::combinat::{odd_partitions, partitions};
use crate::error::Result;
use crate::half::Half;
use crate::linalg::StateSpan;
use crate::scalar::{rat, Quad, Rational, Scalar};
use crate::state::{Space, State};
use crate::virasoro::virasoro_mode;

/// `sum_j c_j q^(offset + j/2)`, known for `j/2 <= order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    offset: Rational,
    coeffs: Vec<i64>,
}

fn twice_of(r: &Rational) -> i64 {
    let t = r * rat(2, 1);
    assert!(t.is_integer(), "exponent {r} is not on the half-integer grid");
    t.to_integer().to_i64().expect("exponent fits")
}

impl QSeries {
    /// The zero series at `offset`, known to relative order `order`.
    pub fn zero(offset: Rational, order: Rational) -> QSeries {
        let n = twice_of(&order).max(-1);
        QSeries { offset, coeffs: vec![0; (n + 1) as usize] }
    }

    pub fn one(order: i64) -> QSeries {
        let mut s = QSeries::zero(rat(0, 1), rat(order, 1));
        s.coeffs[0] = 1;
        s
    }

    /// Integer coefficients at `offset`, `offset + 1`, ...
    pub fn from_integral(offset: Rational, cs: &[i64]) -> QSeries {
        let mut coeffs = vec![0; 2 * cs.len().max(1) - 1];
        for (j, c) in cs.iter().enumerate() {
            coeffs[2 * j] = *c;
        }
        QSeries { offset, coeffs }
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// Relative truncation order.
    pub fn order(&self) -> Rational {
        rat(self.coeffs.len() as i64 - 1, 2)
    }

    /// Highest exponent known.
    pub fn top(&self) -> Rational {
        &self.offset + &self.order()
    }

    /// Coefficient of `q^e`; zero below the offset.
    pub fn coeff(&self, e: &Rational) -> i64 {
        let j = twice_of(&(e - &self.offset));
        assert!(e <= &self.top(), "q^{e} is beyond the truncation {}", self.top());
        if j < 0 {
            0
        } else {
            self.coeffs[j as usize]
        }
    }

    /// Whether every exponent is in `offset + Z`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| *c == 0)
    }

    /// Coefficients on the grid `offset + Z` when integral, else `offset + Z/2`.
    pub fn coefficients(&self) -> Vec<i64> {
        if self.is_integral() {
            self.coeffs.iter().step_by(2).copied().collect()
        } else {
            self.coeffs.clone()
        }
    }

    fn binary(&self, o: &QSeries, sign: i64) -> QSeries {
        let offset = if self.offset <= o.offset { self.offset.clone() } else { o.offset.clone() };
        let top = if self.top() <= o.top() { self.top() } else { o.top() };
        let mut out = QSeries::zero(offset.clone(), &top - &offset);
        for (j, c) in out.coeffs.iter_mut().enumerate() {
            let e = &offset + &rat(j as i64, 2);
            *c = self.coeff(&e) + sign * o.coeff(&e);
        }
        out
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        self.binary(o, 1)
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.binary(o, -1)
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut coeffs = vec![0i64; n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QSeries { offset: &self.offset + &o.offset, coeffs }
    }

    pub fn scale(&self, k: i64) -> QSeries {
        QSeries { offset: self.offset.clone(), coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Exact halving; `None` if some coefficient is odd.
    pub fn halve(&self) -> Option<QSeries> {
        self.coeffs.iter().all(|c| c % 2 == 0).then(|| QSeries {
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|c| c / 2).collect(),
        })
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: &Rational) -> QSeries {
        QSeries { offset: &self.offset + e, coeffs: self.coeffs.clone() }
    }

    /// Cut down to relative order `order`.
    pub fn truncate(&self, order: &Rational) -> QSeries {
        let n = (twice_of(order) + 1).max(0) as usize;
        QSeries { offset: self.offset.clone(), coeffs: self.coeffs.iter().take(n).copied().collect() }
    }

    /// Move the offset to the first nonzero coefficient.
    pub fn normalized(&self) -> QSeries {
        match self.coeffs.iter().position(|c| *c != 0) {
            Some(j) => QSeries { offset: &self.offset + &rat(j as i64, 2), coeffs: self.coeffs[j..].to_vec() },
            None => self.clone(),
        }
    }

    /// Equal coefficients at every exponent `<= top`.
    pub fn agrees(&self, o: &QSeries, top: &Rational) -> bool {
        if &self.top() < top || &o.top() < top {
            return false;
        }
        let lo = if self.offset <= o.offset { self.offset.clone() } else { o.offset.clone() };
        let mut e = lo;
        while &e <= top {
            if self.coeff(&e) != o.coeff(&e) {
                return false;
            }
            e += rat(1, 2);
        }
        true
    }

    /// `self / (1 - s q^e)`, `e > 0` given doubled.
    fn divide_factor(&mut self, twice_e: usize, s: i64) {
        for j in twice_e..self.coeffs.len() {
            self.coeffs[j] += s * self.coeffs[j - twice_e];
        }
    }

    /// `prod_{k >= 0} (1 - s q^(first + k step))^(-power)` to relative order `order`.
    pub fn inverse_product(first: Half, step: Half, s: i64, power: u32, order: i64) -> QSeries {
        assert!(first.is_positive() && step.is_positive());
        let mut out = QSeries::one(order);
        let mut e = first;
        while e.twice() as usize <= 2 * order as usize {
            for _ in 0..power {
                out.divide_factor(e.twice() as usize, s);
            }
            e += step;
        }
        out
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coefficients().iter().map(i64::to_string).collect();
        let step = if self.is_integral() { "1" } else { "1/2" };
        write!(f, "q^({}) [step {step}] {} + O(q^({}))", self.offset, cs.join(","), &self.top() + &rat(1, 2))
    }
}

/// `1 / prod_{n >= 1} (1 - q^n)`.
pub fn eta_inverse(order: i64) -> QSeries {
    QSeries::inverse_product(Half::ONE, Half::ONE, 1, 1, order)
}

pub fn char_fock(momentum_weight: &Rational, order: i64) -> QSeries {
    eta_inverse(order).shift(momentum_weight)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Untwisted,
    Twisted,
}

/// Graded dimension of `M(1)^+-` or `M(1)(theta)^+-`, normalized to the
/// lowest nonzero weight.
pub fn char_orbifold(sign: i8, sector: Sector, order: i64) -> QSeries {
    let (first, offset) = match sector {
        Sector::Untwisted => (Half::ONE, rat(0, 1)),
        Sector::Twisted => (Half::HALF, rat(1, 16)),
    };
    let full = QSeries::inverse_product(first, Half::ONE, 1, 1, order + 1);
    let trace = QSeries::inverse_product(first, Half::ONE, -1, 1, order + 1);
    let sum = if sign >= 0 { full.add(&trace) } else { full.sub(&trace) };
    let s = sum.halve().expect("traces of an involution").shift(&offset).normalized();
    s.truncate(&rat(order, 1))
}

/// `q^(m^2/4) (1 - q^(m+1)) / prod (1 - q^n)`, the character of the
/// irreducible `c = 1` Virasoro module of lowest weight `m^2 / 4`.
pub fn char_virasoro_c1(m: i64, order: i64) -> QSeries {
    let p = eta_inverse(order);
    let lead = rat(m * m, 4);
    p.sub(&p.shift(&rat(m + 1, 1))).shift(&lead)
}

/// `sum_{j in Z} q^((j + shift)^2) / prod (1 - q^n)` with `shift` 0 or 1/2,
/// normalized to start at the lowest weight.
pub fn char_lattice(half_coset: bool, order: i64) -> QSeries {
    let s = if half_coset { rat(1, 2) } else { rat(0, 1) };
    let base = &s * &s;
    let mut theta = QSeries::zero(rat(0, 1), rat(order, 1));
    let mut j = -(order + 1);
    while j <= order + 1 {
        let jj = rat(j, 1) + &s;
        let e = &jj * &jj - &base;
        if e <= rat(order, 1) {
            let i = twice_of(&e) as usize;
            theta.coeffs[i] += 1;
        }
        j += 1;
    }
    theta.mul(&eta_inverse(order)).shift(&base)
}

/// Graded dimension and parity trace of `S(r)`:
/// `prod (1 - q^(n-1/2))^(-2r)` and `prod (1 + q^(n-1/2))^(-2r)`.
pub fn char_weyl(rank: u8, order: i64) -> (QSeries, QSeries) {
    let p = 2 * rank as u32;
    (
        QSeries::inverse_product(Half::HALF, Half::ONE, 1, p, order),
        QSeries::inverse_product(Half::HALF, Half::ONE, -1, p, order),
    )
}

/// Even and odd parts of `S(r)`.
pub fn char_weyl_parts(rank: u8, order: i64) -> (QSeries, QSeries) {
    let (full, trace) = char_weyl(rank, order);
    (full.add(&trace).halve().unwrap(), full.sub(&trace).halve().unwrap())
}

fn counts_to_series(offset: Rational, counts: Vec<i64>) -> QSeries {
    QSeries { offset, coeffs: counts }
}

/// Graded counts of Fock basis monomials, optionally by parity of length.
pub fn enumerate_fock(parity: Option<usize>, order: i64) -> QSeries {
    let mut counts = vec![0; 2 * order as usize + 1];
    for d in 0..=order {
        counts[2 * d as usize] = partitions(d).iter().filter(|p| parity.is_none_or(|k| p.len() % 2 == k)).count() as i64;
    }
    counts_to_series(rat(0, 1), counts)
}

/// Graded counts of twisted Fock monomials `h(-r1)...h(-rk) 1_tw` by parity,
/// offset by `1/16`.
pub fn enumerate_twisted(parity: Option<usize>, order: i64) -> QSeries {
    let mut counts = vec![0; 2 * order as usize + 1];
    for (t, c) in counts.iter_mut().enumerate() {
        *c = odd_partitions(t as i64).iter().filter(|p| parity.is_none_or(|k| p.len() % 2 == k)).count() as i64;
    }
    counts_to_series(rat(1, 16), counts)
}

/// Graded counts of `g(-n1)...g(-nk) e^(j gamma)` over `j in Z` or
/// `j in 1/2 + Z`, normalized to the lowest weight.
pub fn enumerate_lattice(half_coset: bool, order: i64) -> QSeries {
    let s = if half_coset { rat(1, 2) } else { rat(0, 1) };
    let base = &s * &s;
    let mut counts = vec![0; 2 * order as usize + 1];
    for j in -(order + 1)..=(order + 1) {
        let jj = rat(j, 1) + &s;
        let e = &jj * &jj - &base;
        let mut d = 0;
        while e.clone() + rat(d, 1) <= rat(order, 1) {
            counts[twice_of(&(&e + &rat(d, 1))) as usize] += partitions(d).len() as i64;
            d += 1;
        }
    }
    counts_to_series(base, counts)
}

/// Graded counts of `S(r)` monomials split by parity of length:
/// `2r` colors of modes at depths in `1/2 + Z`.
pub fn enumerate_weyl(rank: u8, order: i64) -> (QSeries, QSeries) {
    let n = 2 * order as usize + 1;
    let colors = 2 * rank as usize;
    // for each multiset of odd parts (doubled), the number of colorings
    let mut even = vec![0i64; n];
    let mut odd = vec![0i64; n];
    fn rec(
        rest: i64,
        max: i64,
        colors: usize,
        parts: &mut Vec<i64>,
        total: i64,
        even: &mut [i64],
        odd: &mut [i64],
    ) {
        // count colorings of the current multiset: for each distinct part
        // with multiplicity k, C(k + colors - 1, colors - 1)
        let mut ways = 1i64;
        let mut i = 0;
        while i < parts.len() {
            let mut j = i;
            while j < parts.len() && parts[j] == parts[i] {
                j += 1;
            }
            ways *= multichoose(colors as i64, (j - i) as i64);
            i = j;
        }
        let slot = if parts.len() % 2 == 0 { &mut even[..] } else { &mut odd[..] };
        slot[total as usize] += ways;
        let mut p = max.min(rest);
        if p % 2 == 0 {
            p -= 1;
        }
        while p >= 1 {
            parts.push(p);
            rec(rest - p, p, colors, parts, total + p, even, odd);
            parts.pop();
            p -= 2;
        }
    }
    let top = 2 * order;
    rec(top, top, colors, &mut Vec::new(), 0, &mut even, &mut odd);
    (counts_to_series(rat(0, 1), even), counts_to_series(rat(0, 1), odd))
}

fn multichoose(n: i64, k: i64) -> i64 {
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n + i) / (i + 1);
    }
    r
}

/// Graded dimensions of the Virasoro submodule generated by `top`, found by
/// spanning `L(-n)` images depth by depth.
pub fn virasoro_span_dims(top: &State, order: i64) -> Result<Vec<usize>> {
    let mut spans: Vec<StateSpan> = Vec::new();
    let mut first = StateSpan::new();
    first.insert(top);
    spans.push(first);
    for d in 1..=order as usize {
        let mut span = StateSpan::new();
        for n in 1..=d {
            for w in spans[d - n].basis() {
                span.insert(&virasoro_mode(-(n as i64), w)?);
            }
        }
        spans.push(span);
    }
    Ok(spans.iter().map(StateSpan::dim).collect())
}

/// [`virasoro_span_dims`] of `e^(m / sqrt 2)` in `M(1, m / sqrt 2)`, as a series.
pub fn enumerate_virasoro_c1(m: i64, order: i64) -> Result<QSeries> {
    let mu = Scalar::from_quad(Quad::new(rat(0, 1), rat(m, 2)));
    let dims = virasoro_span_dims(&State::vacuum(Space::fock(mu)), order)?;
    let cs: Vec<i64> = dims.iter().map(|d| *d as i64).collect();
    Ok(QSeries::from_integral(rat(m * m, 4), &cs))
}

#[derive(Clone, Debug)]
pub struct SeriesCheck {
    pub name: String,
    pub lhs: QSeries,
    pub rhs: QSeries,
    /// Checked through `q^top`.
    pub top: Rational,
}

impl SeriesCheck {
    fn new(name: impl Into<String>, lhs: QSeries, rhs: QSeries, top: Rational) -> SeriesCheck {
        SeriesCheck { name: name.into(), lhs, rhs, top }
    }

    pub fn passed(&self) -> bool {
        self.lhs.agrees(&self.rhs, &self.top)
    }
}

/// Every closed form against basis enumeration through relative order `order`.
pub fn closed_form_checks(order: i64) -> Result<Vec<SeriesCheck>> {
    let n = rat(order, 1);
    let mut out = Vec::new();
    for w in [rat(0, 1), rat(1, 4), rat(1, 1)] {
        out.push(SeriesCheck::new(
            format!("char M(1, weight {w}) = partitions"),
            char_fock(&w, order),
            enumerate_fock(None, order).shift(&w),
            &w + &n,
        ));
    }
    for (sign, k, label) in [(1i8, 0usize, "+"), (-1, 1, "-")] {
        let e = enumerate_fock(Some(k), order + 1).normalized().truncate(&n);
        let c = char_orbifold(sign, Sector::Untwisted, order);
        let top = c.top();
        out.push(SeriesCheck::new(format!("char M(1){label} = parity-filtered partitions"), c, e, top));
        let e = enumerate_twisted(Some(k), order + 1).normalized().truncate(&n);
        let c = char_orbifold(sign, Sector::Twisted, order);
        let top = c.top();
        out.push(SeriesCheck::new(format!("char M(1)(theta){label} = parity-filtered odd partitions"), c, e, top));
    }
    for m in 0..=4 {
        let lead = rat(m * m, 4);
        out.push(SeriesCheck::new(
            format!("char L(1,{lead}) = Virasoro span of e^(m/sqrt 2), m = {m}"),
            char_virasoro_c1(m, order),
            enumerate_virasoro_c1(m, order)?,
            &lead + &n,
        ));
    }
    for (half, label) in [(false, "V_L"), (true, "V_(L+gamma/2)")] {
        let c = char_lattice(half, order);
        let top = c.top();
        out.push(SeriesCheck::new(format!("char {label} = lattice monomials"), c, enumerate_lattice(half, order), top));
    }
    for r in 1..=3u8 {
        let (e, o) = char_weyl_parts(r, order);
        let (ee, eo) = enumerate_weyl(r, order);
        out.push(SeriesCheck::new(format!("char S({r})^0 = even monomials"), e, ee, n.clone()));
        out.push(SeriesCheck::new(format!("char S({r})^1 = odd monomials"), o, eo, n.clone()));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub checks: Vec<SeriesCheck>,
    pub warnings: Vec<String>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(SeriesCheck::passed)
    }
}

/// Character identities for the decompositions: `M(1, m/sqrt 2)` into
/// Virasoro modules to `q^telescope`, `V_L` and `V_(L+gamma/2)` to `q^order`,
/// and the fixed points of `sigma (x) theta` on `S(n-1) (x) M(1)` to
/// `q^tensor_order`.
pub fn verify_decompositions(telescope: i64, order: i64, tensor_order: i64) -> DecompositionReport {
    let mut warnings = Vec::new();
    for (label, n) in [("telescoping", telescope), ("lattice", order), ("tensor", tensor_order)] {
        if n < 8 {
            warnings.push(format!("{label} truncation {n} is below 8"));
        }
    }
    let mut checks = Vec::new();
    for m in 0..=4i64 {
        let lead = rat(m * m, 4);
        let mut sum = QSeries::zero(lead.clone(), rat(telescope, 1));
        let mut k = 0;
        // terms with m + 2k beyond the window start above q^(lead + telescope)
        while rat(k * (m + k), 1) <= rat(telescope, 1) {
            sum = sum.add(&char_virasoro_c1(m + 2 * k, telescope));
            k += 1;
        }
        checks.push(SeriesCheck::new(
            format!("M(1, {m}/sqrt 2) = sum_k L(1, ({m}/2 + k)^2)"),
            sum,
            char_fock(&lead, telescope),
            &lead + &rat(telescope, 1),
        ));
    }
    for (half, label) in [(false, "V_L = sum_m (2m+1) L(1, m^2)"), (true, "V_(L+gamma/2) = sum_m (2m+2) L(1, (2m+1)^2/4)")] {
        let lattice = char_lattice(half, order);
        let base = lattice.offset().clone();
        let mut sum = QSeries::zero(base.clone(), rat(order, 1));
        let mut mm = if half { 1 } else { 0 };
        while rat(mm * mm, 4) <= &base + &rat(order, 1) {
            sum = sum.add(&char_virasoro_c1(mm, order).scale(mm + 1));
            mm += 2;
        }
        let top = &base + &rat(order, 1);
        checks.push(SeriesCheck::new(label, sum, lattice, top));
    }
    for n in 2..=3u8 {
        let r = n - 1;
        // fixed points of sigma (x) theta: (ch S ch M + tr sigma tr theta) / 2
        let (full_s, trace_s) = char_weyl(r, tensor_order);
        let full_m = eta_inverse(tensor_order);
        let trace_m = QSeries::inverse_product(Half::ONE, Half::ONE, -1, 1, tensor_order);
        let fixed = full_s.mul(&full_m).add(&trace_s.mul(&trace_m)).halve().expect("trace of an involution");
        // S^0 (x) M(1)^+ + S^1 (x) M(1)^-, from enumeration
        let (s0, s1) = enumerate_weyl(r, tensor_order);
        let mp = enumerate_fock(Some(0), tensor_order);
        let mm = enumerate_fock(Some(1), tensor_order);
        let displayed = s0.mul(&mp).add(&s1.mul(&mm));
        checks.push(SeriesCheck::new(
            format!("U at n = {n}: fixed-point trace = S({r})^0 x M(1)^+ + S({r})^1 x M(1)^-"),
            fixed,
            displayed,
            rat(tensor_order, 1),
        ));
    }
    DecompositionReport { checks, warnings }
}
