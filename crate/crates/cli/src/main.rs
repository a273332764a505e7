mod document;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use document::{Goal, Loaded, ReportLine, Term};
use hybridcp::{Objective, SearchConfig, SearchEvent, Solution, Solver};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "hybridcp",
    version,
    about = "Hybrid finite-domain / continuous constraint solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve (or minimize) a JSON model.
    Solve {
        model: PathBuf,
        /// Also print a machine-readable record as the last line.
        #[arg(long)]
        json: bool,
        /// Enumerate every solution (satisfaction models only).
        #[arg(long)]
        all: bool,
        #[arg(long, value_name = "N")]
        node_limit: Option<u64>,
        #[arg(long, value_name = "MS")]
        time_limit: Option<u64>,
    },
}

const EXIT_SOLUTION: u8 = 0;
const EXIT_NO_SOLUTION: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

struct Options {
    json: bool,
    all: bool,
    node_limit: Option<u64>,
    time_limit: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_SOLUTION
            });
        }
    };
    let Command::Solve {
        model,
        json,
        all,
        node_limit,
        time_limit,
    } = cli.command;
    let text = match std::fs::read_to_string(&model) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", model.display());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let opts = Options {
        json,
        all,
        node_limit,
        time_limit,
    };
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    match std::panic::catch_unwind(|| run(&text, &opts)) {
        Ok(code) => ExitCode::from(code),
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}

fn run(text: &str, opts: &Options) -> u8 {
    let loaded = match document::parse(text) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    if opts.all && loaded.goal != Goal::Satisfy {
        eprintln!("error: --all only applies to models with {{\"satisfy\": true}}");
        return EXIT_INVALID;
    }
    let Loaded {
        model,
        decisions,
        goal,
        objective_name,
        report,
        ..
    } = loaded;
    let names = Names {
        ints: model
            .int_vars()
            .iter()
            .map(|&x| model.int_name(x).to_string())
            .collect(),
        reals: model
            .real_vars()
            .iter()
            .map(|&r| model.real_name(r).to_string())
            .collect(),
        report,
    };
    let mut solver = model.solver(SearchConfig {
        decisions,
        node_limit: opts.node_limit,
        time_limit: opts.time_limit.map(Duration::from_millis),
        check_restore: false,
    });
    let out = std::io::stdout();
    let mut out = out.lock();
    let mut count = 0;
    let (status, last) = match goal {
        Goal::Minimize(obj) => {
            let res = solver.minimize(obj, |s| {
                count += 1;
                let _ = writeln!(out, "********* Solution #{count}");
                print_solution(&mut out, &names, s);
            });
            let status = match (&res.best, res.proven) {
                (Some(_), true) => "OPTIMAL",
                (Some(_), false) => "FEASIBLE",
                (None, true) => "UNSAT",
                (None, false) => "UNKNOWN",
            };
            (status, res.best.map(|b| (b, Some(obj))))
        }
        Goal::Satisfy => {
            let mut last = None;
            let mut exhausted = false;
            loop {
                match solver.next_solution() {
                    SearchEvent::Solution(s) => {
                        count += 1;
                        let _ = writeln!(out, "********* Solution #{count}");
                        print_solution(&mut out, &names, &s);
                        last = Some(s);
                        if !opts.all {
                            break;
                        }
                    }
                    SearchEvent::Exhausted => {
                        exhausted = true;
                        break;
                    }
                    SearchEvent::Limit => break,
                }
            }
            let status = match (&last, exhausted) {
                (Some(_), _) => "SATISFIED",
                (None, true) => "UNSAT",
                (None, false) => "UNKNOWN",
            };
            (status, last.map(|s| (s, None)))
        }
    };

    match (status, &last) {
        ("OPTIMAL", Some((s, _))) => {
            let _ = writeln!(out, "********* Optimal solution");
            print_solution(&mut out, &names, s);
        }
        ("FEASIBLE", Some((s, _))) => {
            let _ = writeln!(out, "********* Best solution found (optimality not proven)");
            print_solution(&mut out, &names, s);
        }
        ("UNSAT", _) => {
            let _ = writeln!(out, "********* No solution");
        }
        ("UNKNOWN", _) => {
            let _ = writeln!(out, "********* No solution found before the search limit");
        }
        _ => {}
    }

    if opts.json {
        let record = json_record(
            &solver,
            &names,
            status,
            last.as_ref(),
            objective_name.as_deref(),
        );
        let _ = writeln!(out, "{record}");
    }
    let _ = out.flush();
    if last.is_some() {
        EXIT_SOLUTION
    } else {
        EXIT_NO_SOLUTION
    }
}

struct Names {
    ints: Vec<String>,
    reals: Vec<String>,
    /// Lines to print per solution; every variable when empty.
    report: Vec<ReportLine>,
}

fn print_solution(out: &mut impl Write, names: &Names, s: &Solution) {
    if names.report.is_empty() {
        for (name, v) in names.ints.iter().zip(&s.ints) {
            let _ = writeln!(out, "{name}: {v}");
        }
        for (name, r) in names.reals.iter().zip(&s.reals) {
            let _ = writeln!(out, "{name}: {}", r.mid());
        }
        return;
    }
    for line in &names.report {
        let value = match line.term {
            Term::Int(x) => s.int(x).to_string(),
            Term::Real(r) => s.real(r).mid().to_string(),
        };
        match &line.unit {
            Some(u) => {
                let _ = writeln!(out, "{}: {value} {u}", line.label);
            }
            None => {
                let _ = writeln!(out, "{}: {value}", line.label);
            }
        }
    }
}

fn json_record(
    solver: &Solver,
    names: &Names,
    status: &str,
    last: Option<&(Solution, Option<Objective>)>,
    objective_name: Option<&str>,
) -> Value {
    let stats = solver.stats();
    let mut assignments = Map::new();
    let mut real_bounds = Map::new();
    let mut objective = Value::Null;
    if let Some((s, obj)) = last {
        for (name, v) in names.ints.iter().zip(&s.ints) {
            assignments.insert(name.clone(), json!(v));
        }
        for (name, r) in names.reals.iter().zip(&s.reals) {
            real_bounds.insert(name.clone(), json!([r.lo(), r.hi()]));
        }
        if let Some(o) = obj {
            let b = s.objective(*o);
            objective = json!({
                "name": objective_name,
                "lb": b.lo(),
                "ub": b.hi(),
                "value": b.mid(),
            });
        }
    }
    json!({
        "status": status,
        "assignments": assignments,
        "real_bounds": real_bounds,
        "objective": objective,
        "nodes": stats.nodes,
        "fails": stats.fails,
        "time_ms": solver.elapsed().as_secs_f64() * 1e3,
    })
}
