//! Text syntax for states.
//!
//! ```text
//! state := term (('+' | '-') term)* | '0'
//! term  := ['-'] [coeff ['*']] (alias | mode* ket)
//! mode  := gen '(' rational ')'        gen in a, h, g, b<i>+, b<i>-
//! ket   := '|0>' | '|tw>' | '|lam>' | '|mom:' coeff '>' | '|e:' rational '>'
//! coeff := products of rationals, 's2', 'x^k' and parenthesized sums
//! alias := J | w | w1 | H | E | F
//! ```

use std::fmt;

use freefield::engine::apply_mode;
use freefield::lattice::{e_vector, f_vector};
use freefield::scalar::{rat, Poly, Rational};
use freefield::virasoro::{heisenberg_omega, j_vector, weyl_omega};
use freefield::weyl::charge_vector;
use freefield::{Gen, Half, Monomial, Scalar, Space, State};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {span}: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("sector mismatch at {span}: {msg}")]
    Sector { span: Span, msg: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::Sector { span, .. } => *span,
        }
    }

    /// The message followed by the source line with a caret under the span.
    pub fn render(&self, src: &str) -> String {
        let s = self.span();
        let width = s.end.saturating_sub(s.start).max(1);
        format!("{self}\n  {src}\n  {}{}", " ".repeat(s.start), "^".repeat(width))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alias {
    J,
    Omega,
    Omega1,
    H,
    E,
    F,
}

impl Alias {
    fn name(self) -> &'static str {
        match self {
            Alias::J => "J",
            Alias::Omega => "w",
            Alias::Omega1 => "w1",
            Alias::H => "H",
            Alias::E => "E",
            Alias::F => "F",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenAst {
    A,
    H,
    G,
    Plus(u8),
    Minus(u8),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeAst {
    pub gen: GenAst,
    pub index: Rational,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum KetKind {
    Vacuum,
    Twisted,
    Lambda,
    Momentum(Scalar),
    Lattice(Half),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    pub kind: KetKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Alias { alias: Alias, span: Span },
    Product { modes: Vec<ModeAst>, ket: Ket },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coeff {
    pub value: Scalar,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub negative: bool,
    pub coeff: Option<Coeff>,
    pub body: Body,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub terms: Vec<Term>,
    pub span: Span,
}

impl Expr {
    /// Copy with every span zeroed, for comparing trees parsed from
    /// different texts.
    pub fn without_spans(&self) -> Expr {
        let z = Span::default();
        Expr {
            span: z,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    negative: t.negative,
                    coeff: t.coeff.as_ref().map(|c| Coeff { value: c.value.clone(), span: z }),
                    body: match &t.body {
                        Body::Alias { alias, .. } => Body::Alias { alias: *alias, span: z },
                        Body::Product { modes, ket } => Body::Product {
                            modes: modes.iter().map(|m| ModeAst { gen: m.gen, index: m.index.clone(), span: z }).collect(),
                            ket: Ket { kind: ket.kind.clone(), span: z },
                        },
                    },
                    span: z,
                })
                .collect(),
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if let Some(c) = &t.coeff {
                if c.value.is_compound() || c.value.is_negative_display() {
                    write!(f, "({}) ", c.value)?;
                } else {
                    write!(f, "{} ", c.value)?;
                }
            }
            match &t.body {
                Body::Alias { alias, .. } => f.write_str(alias.name())?,
                Body::Product { modes, ket } => {
                    for m in modes {
                        let g = match m.gen {
                            GenAst::A => "a".to_string(),
                            GenAst::H => "h".to_string(),
                            GenAst::G => "g".to_string(),
                            GenAst::Plus(i) => format!("b{i}+"),
                            GenAst::Minus(i) => format!("b{i}-"),
                        };
                        write!(f, "{g}({}) ", fmt_rational(&m.index))?;
                    }
                    match &ket.kind {
                        KetKind::Vacuum => f.write_str("|0>")?,
                        KetKind::Twisted => f.write_str("|tw>")?,
                        KetKind::Lambda => f.write_str("|lam>")?,
                        KetKind::Momentum(s) => write!(f, "|mom:{s}>")?,
                        KetKind::Lattice(h) => write!(f, "|e:{h}>")?,
                    }
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, start: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        let end = (self.pos.max(start + 1)).min(self.src.len().max(start + 1));
        Err(ParseError::Syntax { span: Span { start, end }, msg: msg.into() })
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        let at = self.pos;
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.rest().chars().next().map_or("end of input".to_string(), |c| format!("'{c}'"));
            self.err(at, format!("expected '{s}', found {found}"))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return self.err(start, "expected a number");
        }
        self.pos += digits.len();
        digits.parse().or_else(|_| self.err(start, "number too large"))
    }

    /// `['-' | '+'] int ['/' int]`
    fn rational(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let neg = if self.eat("-") {
            true
        } else {
            self.eat("+");
            false
        };
        let n = self.integer()?;
        let d = if self.eat("/") { self.integer()? } else { 1 };
        if d == 0 {
            return self.err(start, "zero denominator");
        }
        Ok(rat(if neg { -n } else { n }, d))
    }

    fn starts_scalar_factor(&mut self) -> bool {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '(' || c == 'x' => true,
            Some('s') => self.rest().starts_with("s2"),
            _ => false,
        }
    }

    fn scalar_factor(&mut self) -> Result<Scalar, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let s = self.scalar_sum()?;
                self.expect(")")?;
                Ok(s)
            }
            Some('x') => {
                self.pos += 1;
                let k = if self.eat("^") { self.integer()? } else { 1 };
                Ok(Scalar::from_poly(Poly::x().pow(k as u32)))
            }
            Some('s') if self.rest().starts_with("s2") => {
                self.pos += 2;
                Ok(Scalar::sqrt2())
            }
            Some(c) if c.is_ascii_digit() => Ok(Scalar::int(self.integer()?)),
            _ => self.err(start, "expected a coefficient"),
        }
    }

    /// Juxtaposed factors with optional '/' divisions.
    fn scalar_product(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.scalar_factor()?;
        loop {
            let at = self.pos;
            if self.eat("/") {
                let d = self.scalar_factor()?;
                if d.is_zero() {
                    return self.err(at, "division by zero");
                }
                acc = &acc / &d;
            } else if self.starts_scalar_factor() {
                acc = &acc * &self.scalar_factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_sum(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = if self.eat("-") { -self.scalar_product()? } else { self.scalar_product()? };
        loop {
            if self.eat("+") {
                acc = &acc + &self.scalar_product()?;
            } else if self.eat("-") {
                acc = &acc - &self.scalar_product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn identifier(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let n = rest.chars().take_while(|c| c.is_ascii_alphanumeric()).count();
        self.pos += n;
        &rest[..n]
    }

    fn ket(&mut self) -> Result<Ket, ParseError> {
        self.skip_ws();
        let start = self.pos;
        self.expect("|")?;
        let kind = if self.eat("0") {
            KetKind::Vacuum
        } else if self.eat("tw") {
            KetKind::Twisted
        } else if self.eat("lam") {
            KetKind::Lambda
        } else if self.eat("mom:") {
            KetKind::Momentum(self.scalar_sum()?)
        } else if self.eat("e:") {
            let at = self.pos;
            let r = self.rational()?;
            match Half::from_rational(&r) {
                Some(h) => KetKind::Lattice(h),
                None => {
                    return Err(ParseError::Sector {
                        span: Span { start: at, end: self.pos },
                        msg: format!("lattice momenta are multiples of 1/2, got {}", fmt_rational(&r)),
                    })
                }
            }
        } else {
            return self.err(start, "unknown ket; expected |0>, |tw>, |lam>, |mom:..> or |e:..>");
        };
        self.expect(">")?;
        Ok(Ket { kind, span: Span { start, end: self.pos } })
    }

    fn term(&mut self, negative: bool) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let coeff = if self.starts_scalar_factor() {
            let value = self.scalar_product()?;
            let span = Span { start, end: self.pos };
            self.eat("*");
            Some(Coeff { value, span })
        } else {
            None
        };
        let mut modes = Vec::new();
        loop {
            match self.peek() {
                Some('|') => {
                    let ket = self.ket()?;
                    return Ok(Term { negative, coeff, body: Body::Product { modes, ket }, span: Span { start, end: self.pos } });
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let at = self.pos;
                    let id = self.identifier();
                    let alias = match id {
                        "J" => Some(Alias::J),
                        "w" => Some(Alias::Omega),
                        "w1" => Some(Alias::Omega1),
                        "H" => Some(Alias::H),
                        "E" => Some(Alias::E),
                        "F" => Some(Alias::F),
                        _ => None,
                    };
                    if let Some(alias) = alias {
                        if !modes.is_empty() {
                            return self.err(at, format!("alias {id} cannot follow modes"));
                        }
                        let span = Span { start: at, end: self.pos };
                        return Ok(Term { negative, coeff, body: Body::Alias { alias, span }, span: Span { start, end: self.pos } });
                    }
                    let gen = match id {
                        "a" => GenAst::A,
                        "h" => GenAst::H,
                        "g" => GenAst::G,
                        b if b.starts_with('b') && b.len() > 1 && b[1..].chars().all(|c| c.is_ascii_digit()) => {
                            let i: u8 = match b[1..].parse() {
                                Ok(i) if i >= 1 => i,
                                _ => return self.err(at, format!("bad Weyl index in {b}")),
                            };
                            if self.rest().starts_with('+') {
                                self.pos += 1;
                                GenAst::Plus(i)
                            } else if self.rest().starts_with('-') {
                                self.pos += 1;
                                GenAst::Minus(i)
                            } else {
                                return self.err(at, format!("{b} needs a '+' or '-'"));
                            }
                        }
                        other => return self.err(at, format!("unknown generator '{other}'")),
                    };
                    self.expect("(")?;
                    let index = self.rational()?;
                    self.expect(")")?;
                    modes.push(ModeAst { gen, index, span: Span { start: at, end: self.pos } });
                }
                _ => return self.err(self.pos, "expected a mode, an alias or a ket"),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().trim() == "0" {
            self.pos = self.src.len();
            return Ok(Expr { terms: Vec::new(), span: Span { start, end: self.pos } });
        }
        let mut terms = Vec::new();
        let mut negative = self.eat("-");
        loop {
            terms.push(self.term(negative)?);
            if self.eat("+") {
                negative = false;
            } else if self.eat("-") {
                negative = true;
            } else {
                break;
            }
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err(self.pos, "unexpected trailing input");
        }
        Ok(Expr { terms, span: Span { start, end: self.pos } })
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    Parser { src: text, pos: 0 }.expr()
}

/// Evaluation context: the Weyl rank for `b<i>` modes and the `w1`, `H`
/// aliases (defaults to the largest index used, at least 1).
#[derive(Clone, Copy, Debug, Default)]
pub struct Context {
    pub weyl_rank: Option<u8>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Vacuum,
    Heisenberg,
    Weyl,
    Tensor,
    Fixed,
}

fn sector(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::Sector { span, msg: msg.into() }
}

fn max_index(e: &Expr) -> u8 {
    let mut r = 0;
    for t in &e.terms {
        if let Body::Product { modes, .. } = &t.body {
            for m in modes {
                if let GenAst::Plus(i) | GenAst::Minus(i) = m.gen {
                    r = r.max(i);
                }
            }
        }
    }
    r
}

/// Evaluate a parsed expression to a state, inferring its space.
pub fn evaluate(e: &Expr, ctx: Context) -> Result<State, ParseError> {
    let rank = ctx.weyl_rank.unwrap_or_else(|| max_index(e).max(1));
    // pass 1: the space of each term
    let mut kinds = Vec::new();
    for t in &e.terms {
        let (kind, space) = match &t.body {
            Body::Alias { alias, .. } => match alias {
                Alias::J | Alias::Omega => (Kind::Heisenberg, Space::heisenberg()),
                Alias::Omega1 | Alias::H => (Kind::Weyl, Space::Weyl { rank }),
                Alias::E | Alias::F => (Kind::Fixed, Space::Lattice),
            },
            Body::Product { modes, ket } => {
                let has = |f: fn(GenAst) -> bool| modes.iter().any(|m| f(m.gen));
                let bosonic = has(|g| g == GenAst::A);
                let weyl = has(|g| matches!(g, GenAst::Plus(_) | GenAst::Minus(_)));
                match &ket.kind {
                    KetKind::Vacuum => match (bosonic, weyl) {
                        (false, false) => (Kind::Vacuum, Space::heisenberg()),
                        (true, false) => (Kind::Heisenberg, Space::heisenberg()),
                        (false, true) => (Kind::Weyl, Space::Weyl { rank }),
                        (true, true) => (Kind::Tensor, Space::Tensor { rank }),
                    },
                    KetKind::Twisted => (Kind::Fixed, Space::Twisted),
                    KetKind::Lambda => (Kind::Fixed, Space::symbolic_fock()),
                    KetKind::Momentum(s) => (Kind::Fixed, Space::fock(s.clone())),
                    KetKind::Lattice(_) => (Kind::Fixed, Space::Lattice),
                }
            }
        };
        kinds.push((kind, space));
    }
    // pass 2: a common space
    let has = |k: Kind| kinds.iter().any(|(kk, _)| *kk == k);
    let anchor = kinds.iter().position(|(k, _)| *k == Kind::Fixed);
    let space = if let Some(i) = anchor {
        kinds[i].1.clone()
    } else if has(Kind::Tensor) || (has(Kind::Heisenberg) && has(Kind::Weyl)) {
        Space::Tensor { rank }
    } else if has(Kind::Weyl) {
        Space::Weyl { rank }
    } else {
        Space::heisenberg()
    };
    let mut out = State::zero(space.clone());
    for (i, (t, (kind, natural))) in e.terms.iter().zip(&kinds).enumerate() {
        let mismatch = match kind {
            Kind::Fixed => natural != &space,
            Kind::Heisenberg => !matches!(space, Space::Fock { ref momentum } if momentum.is_zero()) && !matches!(space, Space::Tensor { .. }),
            Kind::Weyl => !matches!(space, Space::Weyl { .. } | Space::Tensor { .. }),
            Kind::Tensor => !matches!(space, Space::Tensor { .. }),
            Kind::Vacuum => !matches!(space, Space::Fock { ref momentum } if momentum.is_zero()) && !matches!(space, Space::Weyl { .. } | Space::Tensor { .. }),
        };
        if mismatch {
            if let Some(a) = anchor.filter(|a| *a > i) {
                return Err(sector(e.terms[a].span, format!("term lives in {space}, earlier terms in {natural}")));
            }
            return Err(sector(t.span, format!("term lives in {natural}, the expression in {space}")));
        }
        let value = match &t.body {
            Body::Alias { alias, .. } => {
                let s = match alias {
                    Alias::J => j_vector(),
                    Alias::Omega => heisenberg_omega(),
                    Alias::Omega1 => weyl_omega(rank),
                    Alias::H => charge_vector(rank),
                    Alias::E => e_vector(),
                    Alias::F => f_vector(),
                };
                s.reinterpret(space.clone()).map_err(|err| sector(t.span, err.to_string()))?
            }
            Body::Product { modes, ket } => {
                let momentum = match ket.kind {
                    KetKind::Lattice(h) => h,
                    _ => Half::ZERO,
                };
                let mut v = State::monomial(space.clone(), Monomial::exponential(momentum));
                for m in modes.iter().rev() {
                    let (gen, half_class) = match m.gen {
                        GenAst::A => (Gen::Boson, false),
                        GenAst::G => (Gen::Boson, false),
                        GenAst::H => (Gen::Boson, true),
                        GenAst::Plus(i) => (Gen::Plus(i), true),
                        GenAst::Minus(i) => (Gen::Minus(i), true),
                    };
                    let letter_ok = match m.gen {
                        GenAst::A => matches!(space, Space::Fock { .. } | Space::Tensor { .. }),
                        GenAst::H => space == Space::Twisted,
                        GenAst::G => space == Space::Lattice,
                        GenAst::Plus(i) | GenAst::Minus(i) => {
                            if i > rank {
                                return Err(sector(m.span, format!("index {i} exceeds the Weyl rank {rank}")));
                            }
                            matches!(space, Space::Weyl { .. } | Space::Tensor { .. })
                        }
                    };
                    if !letter_ok {
                        let ket_name = match &ket.kind {
                            KetKind::Vacuum => "|0>".to_string(),
                            KetKind::Twisted => "|tw>".to_string(),
                            KetKind::Lambda => "|lam>".to_string(),
                            KetKind::Momentum(s) => format!("|mom:{s}>"),
                            KetKind::Lattice(h) => format!("|e:{h}>"),
                        };
                        let hint = match m.gen {
                            GenAst::H => "h modes act on the twisted vacuum |tw>",
                            GenAst::G => "g modes act on lattice kets |e:r>",
                            GenAst::A => "a modes act on |0>, |lam> and |mom:..>",
                            _ => "Weyl modes act on |0>",
                        };
                        return Err(sector(m.span, format!("{hint}, not on {ket_name}")));
                    }
                    let idx = Half::from_rational(&m.index);
                    let ok = idx.is_some_and(|h| h.is_integer() != half_class);
                    if !ok {
                        let want = if half_class { "in 1/2 + Z" } else { "integral" };
                        return Err(sector(m.span, format!("mode index {} must be {want}", fmt_rational(&m.index))));
                    }
                    v = apply_mode(gen, idx.unwrap(), &v);
                }
                v
            }
        };
        let mut c = t.coeff.as_ref().map_or(Scalar::one(), |c| c.value.clone());
        if t.negative {
            c = -c;
        }
        out.add_scaled(&value, &c);
    }
    Ok(out)
}

/// Parse and evaluate in one step.
pub fn parse_state(text: &str, ctx: Context) -> Result<State, ParseError> {
    evaluate(&parse_expr(text)?, ctx)
}
