//! Exact coefficient field: rationals, the quadratic field `Q(sqrt 2)`, and
//! rational functions in one formal momentum parameter `x` with `Q(sqrt 2)`
//! coefficients.
//!
//! Every [`Scalar`] is kept in its narrowest exact variant, so a rational
//! function that happens to be constant is stored as a [`Quad`] or a plain
//! rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `top` choose `k` for an arbitrary rational `top`.
pub fn binomial(top: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= top - rint(i as i64);
        acc /= rint(i as i64 + 1);
    }
    acc
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element `a + b*sqrt(2)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quad {
    pub a: Rational,
    pub b: Rational,
}

impl Quad {
    pub fn new(a: Rational, b: Rational) -> Self {
        Quad { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        Quad { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Quad::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Quad::from_rational(Rational::one())
    }

    pub fn sqrt2() -> Self {
        Quad { a: Rational::zero(), b: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Field norm `a^2 - 2 b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rint(2) * &self.b * &self.b
    }

    pub fn conj(&self) -> Self {
        Quad { a: self.a.clone(), b: -self.b.clone() }
    }

    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero in Q(sqrt2)");
        Quad { a: &self.a / &n, b: -(&self.b / &n) }
    }

    pub fn add(&self, o: &Quad) -> Quad {
        Quad { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Quad) -> Quad {
        Quad { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn mul(&self, o: &Quad) -> Quad {
        if self.b.is_zero() && o.b.is_zero() {
            return Quad::from_rational(&self.a * &o.a);
        }
        Quad {
            a: &self.a * &o.a + rint(2) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn neg(&self) -> Quad {
        Quad { a: -self.a.clone(), b: -self.b.clone() }
    }

    pub fn div(&self, o: &Quad) -> Quad {
        if o.b.is_zero() {
            return Quad { a: &self.a / &o.a, b: &self.b / &o.a };
        }
        self.mul(&o.inv())
    }

    /// Sign of the real number `a + b*sqrt(2)`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with 2 b^2
        let a2 = &self.a * &self.a;
        let b2 = rint(2) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let bpart = if self.b.is_one() {
            "s2".to_string()
        } else if self.b == -Rational::one() {
            "-s2".to_string()
        } else {
            format!("{} s2", fmt_rational(&self.b))
        };
        if self.a.is_zero() {
            return write!(f, "{bpart}");
        }
        if self.b.is_negative() {
            let pos = Quad { a: Rational::zero(), b: -self.b.clone() };
            write!(f, "{} - {}", fmt_rational(&self.a), pos)
        } else {
            write!(f, "{} + {}", fmt_rational(&self.a), bpart)
        }
    }
}

/// Dense univariate polynomial over `Q(sqrt 2)`, coefficients low degree first,
/// with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    coeffs: Vec<Quad>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Quad) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Quad::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Quad::zero(), Quad::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Quad>) -> Self {
        while coeffs.last().is_some_and(Quad::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Poly::from_coeffs(cs.iter().cloned().map(Quad::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[Quad] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Quad {
        self.coeffs.last().cloned().unwrap_or_else(Quad::zero)
    }

    pub fn constant_term(&self) -> Quad {
        self.coeffs.first().cloned().unwrap_or_else(Quad::zero)
    }

    pub fn has_rational_coeffs(&self) -> bool {
        self.coeffs.iter().all(Quad::is_rational)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Quad::zero();
        let cs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z).add(o.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Poly::from_coeffs(cs)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(Quad::neg).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut cs = vec![Quad::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                cs[i + j] = cs[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(cs)
    }

    pub fn scale(&self, c: &Quad) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.lead().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Quad::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = rem[i - dd + j].sub(&c.mul(dc));
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.lead().inv();
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&Quad::from_rational(rint(i as i64))))
                .collect(),
        )
    }

    /// Squarefree part `p / gcd(p, p')`, made monic.
    pub fn squarefree(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, at: &Quad) -> Quad {
        let mut acc = Quad::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            // a coefficient is "simple" when it is a single signed rational or s2 multiple
            let simple = c.b.is_zero() || c.a.is_zero();
            let negative = if c.b.is_zero() { c.a.is_negative() } else { c.a.is_zero() && c.b.is_negative() };
            let mag = if negative { c.neg() } else { c.clone() };
            let body = if !simple {
                if mono.is_empty() {
                    format!("({mag})")
                } else {
                    format!("({mag}) {mono}")
                }
            } else if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else {
                format!("{mag} {mono}")
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if negative { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }
}

impl Quad {
    fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

/// A reduced fraction of polynomials in `x` with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        if den.is_constant() {
            let inv = den.lead().inv();
            return RatFunc { num: num.scale(&inv), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let inv = d.lead().inv();
        n = n.scale(&inv);
        d = d.scale(&inv);
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_polynomial() && o.is_polynomial() {
            return RatFunc::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_polynomial() && o.is_polynomial() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn inv(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }
}

/// An exact scalar, always stored in its narrowest variant.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(Rational),
    Quad(Quad),
    Func(RatFunc),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Quad(a), Scalar::Quad(b)) => a == b,
            (Scalar::Func(a), Scalar::Func(b)) => a == b,
            // narrowed representations of different width are never equal
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(rint(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rat(rat(n, d))
    }

    pub fn sqrt2() -> Self {
        Scalar::Quad(Quad::sqrt2())
    }

    /// The formal momentum parameter.
    pub fn lambda() -> Self {
        Scalar::Func(RatFunc::from_poly(Poly::x()))
    }

    pub fn from_quad(q: Quad) -> Self {
        Scalar::Quad(q).narrow()
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar::Func(RatFunc::from_poly(p)).narrow()
    }

    pub fn from_ratfunc(f: RatFunc) -> Self {
        Scalar::Func(f).narrow()
    }

    /// Move to the narrowest variant holding the same value.
    pub fn narrow(self) -> Self {
        match self {
            Scalar::Func(f) if f.num.is_constant() && f.den.is_constant() => {
                let q = f.num.constant_term();
                Scalar::Quad(q).narrow()
            }
            Scalar::Quad(q) if q.b.is_zero() => Scalar::Rat(q.a),
            s => s,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Func(f) => f.num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_quad(&self) -> Option<Quad> {
        match self {
            Scalar::Rat(r) => Some(Quad::from_rational(r.clone())),
            Scalar::Quad(q) => Some(q.clone()),
            Scalar::Func(_) => None,
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        match self {
            Scalar::Func(f) => f.clone(),
            other => RatFunc::from_poly(Poly::constant(other.to_quad().unwrap())),
        }
    }

    /// True when the value depends on the formal parameter.
    pub fn is_symbolic(&self) -> bool {
        matches!(self, Scalar::Func(_))
    }

    /// Substitute a value for the formal parameter; `None` at a pole.
    pub fn specialize(&self, at: &Quad) -> Option<Scalar> {
        match self {
            Scalar::Func(f) => {
                let d = f.den.eval(at);
                if d.is_zero() {
                    return None;
                }
                Some(Scalar::from_quad(f.num.eval(at).div(&d)))
            }
            s => Some(s.clone()),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Quad(q) => Scalar::from_quad(q.inv()),
            Scalar::Func(f) => Scalar::from_ratfunc(f.inv()),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn rank(&self) -> u8 {
        match self {
            Scalar::Rat(_) => 0,
            Scalar::Quad(_) => 1,
            Scalar::Func(_) => 2,
        }
    }

    fn binop(
        &self,
        o: &Scalar,
        fr: impl Fn(&Rational, &Rational) -> Rational,
        fq: impl Fn(&Quad, &Quad) -> Quad,
        ff: impl Fn(&RatFunc, &RatFunc) -> RatFunc,
    ) -> Scalar {
        match self.rank().max(o.rank()) {
            0 => Scalar::Rat(fr(self.as_rational().unwrap(), o.as_rational().unwrap())),
            1 => Scalar::from_quad(fq(&self.to_quad().unwrap(), &o.to_quad().unwrap())),
            _ => Scalar::from_ratfunc(ff(&self.to_ratfunc(), &o.to_ratfunc())),
        }
    }

    /// Small integer value, if this is one.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rat(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    /// True when the printed form needs parentheses as a coefficient.
    pub fn is_compound(&self) -> bool {
        match self {
            Scalar::Rat(_) => false,
            Scalar::Quad(q) => !q.a.is_zero(),
            Scalar::Func(f) => !f.is_polynomial() || f.num.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 || {
                let c = f.num.lead();
                !c.a.is_zero() && !c.b.is_zero()
            },
        }
    }

    /// Leading sign for printing a term as `- c ...`.
    pub fn is_negative_display(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Quad(q) => q.a.is_zero() && q.b.is_negative(),
            Scalar::Func(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => f.write_str(&fmt_rational(r)),
            Scalar::Quad(q) => write!(f, "{q}"),
            Scalar::Func(rf) => {
                if rf.is_polynomial() {
                    write!(f, "{}", rf.num)
                } else {
                    write!(f, "({})/({})", rf.num, rf.den)
                }
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.binop(o, |a, b| a + b, Quad::add, RatFunc::add)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.binop(o, |a, b| a - b, Quad::sub, |a, b| a.add(&b.neg()))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.binop(o, |a, b| a * b, Quad::mul, RatFunc::mul)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        assert!(!o.is_zero(), "division by zero scalar");
        self.binop(o, |a, b| a / b, Quad::div, |a, b| a.mul(&b.inv()))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
            Scalar::Func(f) => Scalar::Func(f.neg()),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

/// Rational roots of a polynomial with rational coefficients.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    if p.is_zero() || !p.has_rational_coeffs() {
        return Vec::new();
    }
    // clear denominators to an integer polynomial
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.a.denom());
    }
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (&c.a * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    // x = 0 root
    let first_nz = ints.iter().position(|c| !c.is_zero()).unwrap();
    if first_nz > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[first_nz..];
    let c0 = ints[0].abs();
    let cn = ints[ints.len() - 1].abs();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.to_u64().unwrap_or(0);
        if n == 0 || n > 1_000_000 {
            return Vec::new();
        }
        (1..=n).filter(|d| n % d == 0).map(BigInt::from).collect()
    };
    let (ps, qs) = (divisors(&c0), divisors(&cn));
    let shifted = Poly::from_rationals(&ints.iter().map(|c| Rational::from_integer(c.clone())).collect::<Vec<_>>());
    for pn in &ps {
        for qn in &qs {
            for sign in [1i64, -1] {
                let cand = Rational::new(pn * BigInt::from(sign), qn.clone());
                if roots.contains(&cand) {
                    continue;
                }
                if shifted.eval(&Quad::from_rational(cand.clone())).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let s = Scalar::frac(6, -4);
        assert_eq!(s.to_string(), "-3/2");
    }

    #[test]
    fn quad_narrowing() {
        let s2 = Scalar::sqrt2();
        let two = &s2 * &s2;
        assert_eq!(two, Scalar::int(2));
        assert!(matches!(two, Scalar::Rat(_)));
        let q = &s2 + &Scalar::one();
        assert_eq!(q.to_string(), "1 + s2");
        assert_eq!((&q * &q.inv()), Scalar::one());
    }

    #[test]
    fn ratfunc_reduction() {
        let x = Scalar::lambda();
        let num = &(&x * &x) - &Scalar::one();
        let den = &x - &Scalar::one();
        let q = &num / &den;
        assert_eq!(q, &x + &Scalar::one());
        // (x+1) - x narrows to a rational
        let c = &q - &x;
        assert_eq!(c, Scalar::one());
        assert!(matches!(c, Scalar::Rat(_)));
    }

    #[test]
    fn ratfunc_denominator_is_monic() {
        let x = Scalar::lambda();
        let f = &Scalar::one() / &(&Scalar::int(2) * &x);
        if let Scalar::Func(rf) = &f {
            assert_eq!(rf.den().lead(), Quad::one());
        } else {
            panic!("expected a rational function");
        }
        assert_eq!(f.to_string(), "(1/2)/(x)");
    }

    #[test]
    fn poly_printing() {
        let x = Scalar::lambda();
        let p = &x.pow(4) - &(&Scalar::frac(1, 2) * &x.pow(2));
        assert_eq!(p.to_string(), "x^4 - 1/2 x^2");
    }

    #[test]
    fn specialization() {
        let x = Scalar::lambda();
        let p = &x.pow(2) - &Scalar::frac(1, 2);
        let at = Quad::new(Rational::zero(), rat(1, 2));
        assert!(p.specialize(&at).unwrap().is_zero());
    }

    #[test]
    fn squarefree_and_roots() {
        let x = Poly::x();
        let one = Poly::one();
        let p = x.sub(&one).pow(2).mul(&x.add(&Poly::constant(Quad::from_rational(rint(2)))));
        let sf = p.squarefree();
        assert_eq!(sf.degree(), Some(2));
        assert_eq!(rational_roots(&sf), vec![rint(-2), rint(1)]);
    }

    #[test]
    fn quad_sign() {
        assert_eq!(Quad::new(rint(1), rint(-1)).signum(), Ordering::Less);
        assert_eq!(Quad::new(rint(2), rint(-1)).signum(), Ordering::Greater);
        assert_eq!(Quad::new(rint(-3), rint(2)).signum(), Ordering::Less);
    }
}
