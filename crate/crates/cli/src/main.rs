use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use elimgen::corpus::bench::{self, PipelineError, TrialRecord};
use elimgen::corpus::instance::parse_instance;
use elimgen::corpus::registry::Problem;
use elimgen::field::PrimeField;
use elimgen::numeric::{OnlineSolver, SolveError, SolveOptions, RESIDUAL_THRESHOLD};
use elimgen::oracle::run_planted;
use elimgen::template::{strategy_by_name, Template};

#[derive(Parser)]
#[command(name = "elimgen", version, about = "Elimination template generator and solver for Laurent polynomial systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find and prune a template for a problem
    Generate {
        /// Problem document, or the name of a bundled entry
        problem: String,
        #[arg(short = 'N', long = "iterations", default_value_t = 10)]
        iterations: usize,
        #[arg(long, default_value = "first", value_parser = ["first", "best"])]
        mode: String,
        #[arg(short = 'p', long, default_value_t = elimgen::field::DEFAULT_PRIME as u64)]
        prime: u64,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Shrink a template by dropping shifts, then prune
    Reduce {
        template: PathBuf,
        problem: String,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Solve a real instance with a template
    Solve {
        template: PathBuf,
        instance: PathBuf,
        /// Residual bound for accepting a candidate
        #[arg(long, default_value_t = RESIDUAL_THRESHOLD)]
        threshold: f64,
        /// Number of true roots for the aggregate residual; defaults to #B
        #[arg(long)]
        roots: Option<usize>,
    },
    /// Run the planted-root suite
    Verify {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(short = 'N', long = "iterations", default_value_t = 10)]
        iterations: usize,
        #[arg(short = 'p', long, default_value_t = elimgen::field::DEFAULT_PRIME as u64)]
        prime: u64,
    },
    /// Generate, reduce and solve synthetic trials of a corpus entry; CSV on stdout
    Bench {
        /// Bundled entry name or problem document
        entry: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Use this template instead of generating one
        #[arg(long)]
        template: Option<PathBuf>,
        #[arg(long, value_parser = ["first", "best"])]
        mode: Option<String>,
        #[arg(short = 'N', long = "iterations", default_value_t = 10)]
        iterations: usize,
        #[arg(short = 'p', long, default_value_t = elimgen::field::DEFAULT_PRIME as u64)]
        prime: u64,
        /// Skip the reduction step
        #[arg(long)]
        no_reduce: bool,
    },
}

/// Exit 1: the pipeline ran but did not produce an acceptable answer.
/// Exit 2: bad input.
enum Failure {
    Solver(String),
    Usage(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Problem(_) => Failure::Usage(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_problem(arg: &str) -> Result<Problem, Failure> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(p) = Problem::from_entry(arg) {
            return Ok(p);
        }
    }
    let text = read(path)?;
    Problem::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_template(path: &Path) -> Result<(Template, Vec<String>), Failure> {
    Template::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn field(prime: u64) -> Result<PrimeField, Failure> {
    PrimeField::new(prime).map_err(|e| Failure::Usage(e.to_string()))
}

fn describe(t: &Template, names: &[String]) -> String {
    let (rows, cols) = t.size();
    format!(
        "template {rows}x{cols}, #B = {}, action {}",
        t.basis().len(),
        t.action.display(names)
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate {
            problem,
            iterations,
            mode,
            prime,
            output,
        } => {
            let problem = load_problem(&problem)?;
            let f = field(prime)?;
            let system = problem.gf_system(f).map_err(|e| Failure::Usage(e.to_string()))?;
            let strategy = strategy_by_name(&mode).expect("validated by clap");
            let t = bench::generate(f, &system, iterations, strategy)?;
            eprintln!("{}", describe(&t, &problem.def.vars));
            write(&output, &t.render(&problem.def.vars))
        }
        Command::Reduce {
            template,
            problem,
            output,
        } => {
            let (t, names) = load_template(&template)?;
            let problem = load_problem(&problem)?;
            if names != problem.def.vars {
                return Err(Failure::Usage("template and problem use different variables".into()));
            }
            let system = problem.gf_system(t.field).map_err(|e| Failure::Usage(e.to_string()))?;
            let (reduced, audit) = bench::reduce(&system, &t)?;
            for a in &audit {
                eprintln!(
                    "shift {} of f{}: {} (#B {}, bound {})",
                    a.shift.display(&names),
                    a.poly,
                    if a.accepted { "dropped" } else { "kept" },
                    a.basis.map_or("-".to_string(), |b| b.to_string()),
                    a.bound
                );
            }
            eprintln!("{}", describe(&reduced, &names));
            write(&output, &reduced.render(&names))
        }
        Command::Solve {
            template,
            instance,
            threshold,
            roots,
        } => {
            let (t, names) = load_template(&template)?;
            let (vars, system) =
                parse_instance(&read(&instance)?).map_err(|e| Failure::Usage(format!("{}: {e}", instance.display())))?;
            if vars != names {
                return Err(Failure::Usage("template and instance use different variables".into()));
            }
            let solver = OnlineSolver::new(t).map_err(|e| Failure::Usage(e.to_string()))?;
            let sol = solver.solve(&system, SolveOptions { expected_roots: roots }).map_err(|e| match e {
                SolveError::Mismatch(_) | SolveError::NonFinite => Failure::Usage(e.to_string()),
                _ => Failure::Solver(e.to_string()),
            })?;
            print!("{}", render_roots(&names, &sol.roots, threshold));
            eprintln!(
                "fill {:.3} ms, online {:.3} ms",
                sol.fill_time.as_secs_f64() * 1e3,
                sol.online_time.as_secs_f64() * 1e3
            );
            if sol.roots.accepted(threshold).next().is_none() {
                return Err(Failure::Solver("no candidate within the residual bound".into()));
            }
            Ok(())
        }
        Command::Verify {
            seeds,
            iterations,
            prime,
        } => {
            let f = field(prime)?;
            println!("seed,k,d,found,iterations,basis,size,vanishing,spectrum,identity,monotone,pass");
            let mut found = 0;
            let mut passed = 0;
            for seed in 0..seeds {
                let r = run_planted(f, seed, iterations);
                found += r.found() as u64;
                passed += r.passes() as u64;
                println!(
                    "{seed},{},{},{},{},{},{},{},{},{},{},{}",
                    r.spec.arity,
                    r.spec.roots,
                    r.found(),
                    r.iterations.map_or("-".into(), |i| i.to_string()),
                    r.basis.map_or("-".into(), |(a, b)| format!("{a}->{b}")),
                    r.size.map_or("-".into(), |(a, b)| format!("{a}x{b}")),
                    r.vanishing,
                    r.spectrum,
                    r.identity,
                    r.monotone,
                    if r.passes() { "pass" } else { "fail" }
                );
                if let Some(e) = r.error {
                    eprintln!("seed {seed}: {e}");
                }
            }
            println!("found {found}/{seeds}, checks passed {passed}/{found}");
            let rate = found as f64 / seeds.max(1) as f64;
            if passed == found && rate >= 0.95 {
                Ok(())
            } else {
                Err(Failure::Solver(format!("success rate {rate:.2}, {} failed checks", found - passed)))
            }
        }
        Command::Bench {
            entry,
            trials,
            template,
            mode,
            iterations,
            prime,
            no_reduce,
        } => {
            let problem = load_problem(&entry)?;
            let t = match template {
                Some(path) => load_template(&path)?.0,
                None => {
                    let f = field(prime)?;
                    let system = problem.gf_system(f).map_err(|e| Failure::Usage(e.to_string()))?;
                    let mode = mode
                        .as_deref()
                        .or(problem.builder.as_ref().map(|b| b.strategy()))
                        .unwrap_or("first");
                    let t = bench::generate(f, &system, iterations, strategy_by_name(mode).expect("known mode"))?;
                    if no_reduce {
                        t
                    } else {
                        bench::reduce(&system, &t)?.0
                    }
                }
            };
            eprintln!("{}", describe(&t, &problem.def.vars));
            let solver = OnlineSolver::new(t).map_err(|e| Failure::Solver(e.to_string()))?;
            let records = bench::run_trials(&solver, &problem, 0..trials);
            println!("{}", TrialRecord::CSV_HEADER);
            for r in &records {
                println!("{}", r.csv());
                if let Some(e) = &r.error {
                    eprintln!("trial {}: {e}", r.trial);
                }
            }
            let Some(thresholds) = problem.builder.as_ref().map(|b| b.thresholds()) else {
                return Ok(());
            };
            let s = bench::summarize(&records, thresholds.placement);
            eprintln!(
                "{} trials, {} failed, median aggregate {}, placement < {:e} in {}, median online {:.3} ms, fill {:.3} ms",
                s.trials,
                s.failures,
                s.median_aggregate.map_or("-".into(), |m| format!("{m:.2}")),
                thresholds.placement,
                s.placement_rate.map_or("-".into(), |r| format!("{:.1}%", 100.0 * r)),
                s.median_online_ms,
                s.median_fill_ms
            );
            if s.passes(&thresholds) {
                Ok(())
            } else {
                Err(Failure::Solver("thresholds not met".into()))
            }
        }
    }
}

fn render_roots(names: &[String], roots: &elimgen::numeric::RootSet, threshold: f64) -> String {
    let mut out = String::new();
    writeln!(out, "elimgen-roots 1").unwrap();
    writeln!(out, "vars {}", names.join(" ")).unwrap();
    writeln!(out, "candidates {}", roots.candidates.len()).unwrap();
    writeln!(out, "accepted {}", roots.accepted(threshold).count()).unwrap();
    for c in &roots.candidates {
        let status = match (c.residual <= threshold, c.is_real()) {
            (true, true) => "real",
            (true, false) => "complex",
            (false, _) => "rejected",
        };
        write!(
            out,
            "root {status} eigenvalue {:.17e} {:.17e} residual {:.3e} point",
            c.eigenvalue.re, c.eigenvalue.im, c.residual
        )
        .unwrap();
        for z in &c.point {
            write!(out, " {:.17e} {:.17e}", z.re, z.im).unwrap();
        }
        writeln!(out).unwrap();
    }
    if let Some(a) = roots.aggregate {
        writeln!(out, "aggregate {a:.3}").unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Solver(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
