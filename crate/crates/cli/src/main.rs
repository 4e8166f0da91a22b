use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use commutant::cli::{parse, run_suite, EvalContext};
use commutant::report::Params;
use commutant::vertex_engine::AlgebraKind;
use commutant::Error;

#[derive(Parser)]
#[command(name = "commutant", version, about = "Exact OPE calculator and verification suites for beta-gamma systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Built-in algebra: sl2-adjoint, sl2-standard or abelian-<n>.
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Largest conformal weight for the commutant dimension checks.
    #[arg(long, global = true)]
    max_weight: Option<u32>,
    /// Largest polynomial degree for graded components.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Truncation N of the graded ring.
    #[arg(long, global = true)]
    level: Option<u32>,
    /// Largest level of graded components.
    #[arg(long, global = true)]
    max_level: Option<u32>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Use the larger truncations (weight 4, N = 2, level 3).
    #[arg(long, global = true)]
    extended: bool,
    /// Directory for cached Groebner bases.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Singular part of the OPE of two expressions.
    Ope { a: String, b: String },
    /// Evaluate an expression to a state.
    Eval { expr: String },
    /// Run a verification suite (or `all`).
    Verify { suite: String },
}

impl Cli {
    fn params(&self) -> Params {
        let mut p = if self.extended { Params::extended() } else { Params::default() };
        if let Some(a) = &self.algebra {
            p.algebra = a.clone();
        }
        p.max_weight = self.max_weight.unwrap_or(p.max_weight);
        p.max_degree = self.max_degree.unwrap_or(p.max_degree);
        p.level = self.level.unwrap_or(p.level);
        p.max_level = self.max_level.unwrap_or(p.max_level);
        p.seed = self.seed.unwrap_or(p.seed);
        p
    }
}

fn usage(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let params = cli.params();
    match &cli.command {
        Command::Eval { expr } => {
            let result = parse(expr).and_then(|e| EvalContext::new(&params.algebra)?.eval(&e));
            match result {
                Ok(s) if cli.json => println!("{}", serde_json::json!({ "expr": expr, "value": s.to_string() })),
                Ok(s) => println!("{s}"),
                Err(e) => return usage(e),
            }
        }
        Command::Ope { a, b } => {
            let result = (|| {
                let ctx = EvalContext::new(&params.algebra)?;
                let (x, y) = (ctx.eval(&parse(a)?)?, ctx.eval(&parse(b)?)?);
                if x.algebra != y.algebra {
                    return Err(Error::AlgebraMismatch);
                }
                let engine = match x.algebra.kind {
                    AlgebraKind::GhostSystem => &ctx.ghost,
                    AlgebraKind::CurrentAlgebra => ctx.current.as_ref().expect("current states come with an engine"),
                };
                engine.ope(&x, &y)
            })();
            match result {
                Ok(t) if cli.json => {
                    let entries: Vec<_> = t.entries.iter().map(|(n, s)| serde_json::json!({ "n": n, "value": s.to_string() })).collect();
                    println!("{}", serde_json::json!({ "a": a, "b": b, "ope": entries }));
                }
                Ok(t) => print!("{t}"),
                Err(e) => return usage(e),
            }
        }
        Command::Verify { suite } => {
            let report = match run_suite(suite, &params, cli.cache_dir.as_deref()) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{report}");
            }
            if !report.pass {
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::SUCCESS
}
