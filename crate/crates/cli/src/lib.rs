//! Command-line front end for the freefield engine: a text syntax for states,
//! the verification suites, and report output.

pub mod parse;
pub mod report;
pub mod suites;

use freefield::engine::{vertex_mode, Convention, ModeIndex};
use freefield::Half;
use thiserror::Error;

use crate::parse::{parse_expr, evaluate, Context, ParseError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("in {what}: {err}")]
    Parse { what: &'static str, text: String, err: ParseError },
    #[error("mode '{0}' must be an integer or a half-integer")]
    BadMode(String),
    #[error(transparent)]
    Engine(#[from] freefield::Error),
}

impl EvalError {
    /// Diagnostic with the offending text underlined where available.
    pub fn render(&self) -> String {
        match self {
            EvalError::Parse { what, text, err } => format!("in {what}: {}", err.render(text)),
            e => e.to_string(),
        }
    }
}

pub fn parse_mode(text: &str) -> Result<Half, EvalError> {
    let bad = || EvalError::BadMode(text.into());
    let (n, d) = match text.trim().split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (text.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    match d {
        1 => Ok(Half::int(n)),
        2 => Ok(Half::from_twice(n)),
        _ => Err(bad()),
    }
}

/// `u_n v` printed canonically, with `u` and `v` given as text.
pub fn eval_command(state: &str, operator: &str, mode: &str, convention: Convention, ctx: Context) -> Result<String, EvalError> {
    let parse = |what: &'static str, text: &str| {
        parse_expr(text)
            .and_then(|e| evaluate(&e, ctx))
            .map_err(|err| EvalError::Parse { what, text: text.into(), err })
    };
    let u = parse("operator", operator)?;
    let v = parse("state", state)?;
    let n = parse_mode(mode)?;
    let idx = match convention {
        Convention::Formal => ModeIndex::formal(n),
        Convention::Weighted => ModeIndex::weighted(n),
    };
    Ok(vertex_mode(&u, idx, &v)?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(op: &str, n: &str, v: &str) -> String {
        eval_command(v, op, n, Convention::Formal, Context::default()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ev("J", "3", "|lam>"), "(x^4 - 1/2 x^2) |lam>");
        assert_eq!(ev("w", "1", "|0>"), "0");
        assert_eq!(ev("a(-1)|0>", "1", "a(-1)|0>"), "|0>");
    }

    #[test]
    fn eval_twisted_and_weighted() {
        let r = eval_command("|tw>", "w", "0", Convention::Weighted, Context::default()).unwrap();
        assert_eq!(r, "1/16 |tw>");
        assert_eq!(ev("a(-1)|0>", "1/2", "h(-1/2)|tw>"), "1/2 |tw>");
    }

    #[test]
    fn eval_errors() {
        assert!(matches!(eval_command("|0>", "a(-1", "1", Convention::Formal, Context::default()), Err(EvalError::Parse { .. })));
        assert!(matches!(eval_command("|0>", "w", "1/3", Convention::Formal, Context::default()), Err(EvalError::BadMode(_))));
        assert!(matches!(eval_command("|lam>", "|lam>", "0", Convention::Formal, Context::default()), Err(EvalError::Engine(_))));
    }
}
