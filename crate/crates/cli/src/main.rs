use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use freefield::c1::{c1_component, rank_analysis, C1Module};
use freefield::engine::Convention;
use freefield::qchar::{
    char_fock, char_lattice, char_orbifold, char_virasoro_c1, char_weyl, enumerate_fock, enumerate_lattice, enumerate_twisted,
    enumerate_virasoro_c1, enumerate_weyl, QSeries, Sector,
};
use freefield::scalar::{rat, Rational};
use freefield_cli::parse::Context;
use freefield_cli::suites::{parse_suites, run_suites, Budgets, RunOptions};
use freefield_cli::{eval_command, parse_mode};

#[derive(Parser)]
#[command(name = "freefield", version, about = "Exact computations in free-field vertex algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Directory for reports when --report is not given.
    #[arg(long, global = true, env = "FREEFIELD_REPORT_DIR")]
    report_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    format: Format,
    /// Override a suite budget, e.g. c1.depth=4.
    #[arg(long, global = true, value_name = "KEY=VALUE")]
    budget: Vec<String>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Leave timing fields out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Structured,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Formal,
    Weighted,
}

#[derive(Subcommand)]
enum Command {
    /// Print OP_MODE STATE.
    Eval {
        #[arg(value_name = "OP")]
        operator: String,
        #[arg(value_name = "MODE", allow_hyphen_values = true)]
        mode: String,
        #[arg(value_name = "STATE", allow_hyphen_values = true)]
        state: String,
        #[arg(long, value_enum, default_value_t = Conv::Formal)]
        convention: Conv,
        /// Weyl rank for b<i> modes and the w1, H aliases.
        #[arg(long)]
        rank: Option<u8>,
    },
    /// Run a verification suite (or `all`).
    Verify { suite: String },
    /// Compare a character closed form with basis enumeration.
    Char {
        /// fock[:w], plus, minus, twisted-plus, twisted-minus, vir:m, lattice, lattice-half, weyl:n
        module: String,
        #[arg(long, default_value_t = 12)]
        order: i64,
    },
    /// Rank of the C1 subspace in one graded piece.
    C1Rank {
        /// generic, atypical:m, plus, minus, twisted-plus, twisted-minus
        #[arg(long)]
        module: String,
        #[arg(long, allow_hyphen_values = true)]
        depth: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn verify(cli: &Cli, name: &str) -> ExitCode {
    let suites = match parse_suites(name) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let budgets = match Budgets::with_overrides(&cli.budget) {
        Ok(b) => b,
        Err(e) => return usage(e),
    };
    let report = run_suites(&suites, &budgets, RunOptions { jobs: cli.jobs, timing: !cli.no_timing });
    let (text, ext) = match cli.format {
        Format::Structured => (report.to_structured(), "json"),
        Format::Tsv => (report.to_tsv(), "tsv"),
    };
    let path = cli.report.clone().or_else(|| cli.report_dir.as_ref().map(|d| d.join(format!("{name}.{ext}"))));
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, text) {
                return usage(format!("cannot write {}: {e}", p.display()));
            }
            for s in &report.suites {
                println!("{}: {} pass, {} fail, {} skipped", s.suite, s.summary.pass, s.summary.fail, s.summary.skipped);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (i64, i64) = (n.parse().ok()?, d.parse().ok()?);
            (d != 0).then(|| rat(n, d))
        }
        None => Some(rat(s.parse().ok()?, 1)),
    }
}

/// `(closed form, enumeration, checked through)`.
fn characters(module: &str, order: i64) -> Option<(QSeries, QSeries, Rational)> {
    let n = rat(order, 1);
    let (kind, arg) = module.split_once(':').map_or((module, None), |(k, a)| (k, Some(a)));
    Some(match (kind, arg) {
        ("fock", w) => {
            let w = w.map_or(Some(rat(0, 1)), parse_rational)?;
            let top = &w + &n;
            (char_fock(&w, order), enumerate_fock(None, order).shift(&w), top)
        }
        ("plus" | "minus" | "twisted-plus" | "twisted-minus", None) => {
            let (sign, k) = if kind.ends_with("plus") { (1, 0) } else { (-1, 1) };
            let (sector, e) = if kind.starts_with("twisted") {
                (Sector::Twisted, enumerate_twisted(Some(k), order + 1))
            } else {
                (Sector::Untwisted, enumerate_fock(Some(k), order + 1))
            };
            let c = char_orbifold(sign, sector, order);
            let top = c.top();
            (c, e.normalized().truncate(&n), top)
        }
        ("vir", Some(m)) => {
            let m: i64 = m.parse().ok().filter(|m| *m >= 0)?;
            (char_virasoro_c1(m, order), enumerate_virasoro_c1(m, order).ok()?, &rat(m * m, 4) + &n)
        }
        ("lattice" | "lattice-half", None) => {
            let half = kind == "lattice-half";
            let c = char_lattice(half, order);
            let top = c.top();
            (c, enumerate_lattice(half, order), top)
        }
        ("weyl", Some(r)) => {
            let r: u8 = r.parse().ok().filter(|r| (1..=8).contains(r))?;
            let (even, odd) = enumerate_weyl(r, order);
            (char_weyl(r, order).0, even.add(&odd), n)
        }
        _ => return None,
    })
}

fn char_command(module: &str, order: i64) -> ExitCode {
    if order < 0 {
        return usage("order must be nonnegative");
    }
    let Some((closed, enumerated, top)) = characters(module, order) else {
        return usage(format!("unknown module '{module}'"));
    };
    let agree = closed.agrees(&enumerated, &top);
    println!("closed form: {closed}");
    println!("enumeration: {enumerated}");
    println!("agree through q^{top}: {agree}");
    if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn c1_module(name: &str) -> Option<C1Module> {
    Some(match name {
        "generic" => C1Module::Generic,
        "plus" => C1Module::Plus,
        "minus" => C1Module::Minus,
        "twisted-plus" => C1Module::TwistedPlus,
        "twisted-minus" => C1Module::TwistedMinus,
        _ => C1Module::atypical(name.strip_prefix("atypical:")?.parse().ok()?),
    })
}

fn c1_rank(module: &str, depth: &str, samples: usize) -> ExitCode {
    let Some(module) = c1_module(module) else {
        return usage(format!("unknown module '{module}'"));
    };
    let depth = match parse_mode(depth) {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let mat = match c1_component(&module, depth) {
        Ok(m) => m,
        Err(e) => return usage(e),
    };
    println!("module: {module}");
    println!("depth: {depth}");
    println!("conformal weight: {}", mat.conformal_weight());
    println!("dimension: {}", mat.ambient_dim());
    println!("spanning vectors: {}", mat.rows.len());
    if module == C1Module::Generic {
        let r = match rank_analysis(&mat, samples, 0) {
            Ok(r) => r,
            Err(e) => return usage(e),
        };
        println!("generic rank: {}", r.generic_rank);
        println!("codimension: {}", r.codimension());
        println!("exceptional: {}", r.exceptional);
        for (x, k) in &r.specializations {
            println!("rank at x = {x}: {k}");
        }
        if !r.coherent() {
            return ExitCode::from(1);
        }
    } else {
        let r = mat.rank();
        println!("rank: {r}");
        println!("codimension: {}", mat.ambient_dim() - r);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Eval { operator, mode, state, convention, rank } => {
            let conv = match convention {
                Conv::Formal => Convention::Formal,
                Conv::Weighted => Convention::Weighted,
            };
            match eval_command(state, operator, mode, conv, Context { weyl_rank: *rank }) {
                Ok(s) => {
                    println!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e.render()),
            }
        }
        Command::Verify { suite } => verify(&cli, suite),
        Command::Char { module, order } => char_command(module, *order),
        Command::C1Rank { module, depth, samples } => c1_rank(module, depth, *samples),
    }
}
