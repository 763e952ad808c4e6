//! Command-line front end: type-check a program under a metric profile,
//! optionally run it and compare inferred bounds with measured circuits.
//!
//! Exit status: 0 on success, 1 on parse/type/usage errors, 2 when a
//! measured circuit exceeds its inferred bound.

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pqra::circuit::random_circuit;
use pqra::harness::{check_source, corpus_program, run_main, valuation_grid, verify_bounds, HarnessError};
use pqra::index::{export_smtlib, CheckStrategy, Valuation};
use pqra::metrics::{
    builtin_profiles, profile_by_name, validate_cmi_sound, validate_local_coherence, validate_well_behaved,
    MetricProfile,
};
use pqra::syntax::pretty::{display_index, display_type};

#[derive(Parser, Debug)]
#[command(name = "pqra", version, about = "Resource-aware type checking and execution of quantum circuit programs")]
struct Cli {
    /// Program file, or `corpus:<name>` for a bundled example.
    file: Option<String>,

    /// Global metric profile (width, gatecount, gatecount_all, tcount, qubits, bits).
    #[arg(short = 'g', long = "global", value_name = "PROFILE", conflicts_with = "local")]
    global: Option<String>,

    /// Local metric profile (depth).
    #[arg(short = 'l', long = "local", value_name = "PROFILE")]
    local: Option<String>,

    /// Only type-check; do not evaluate.
    #[arg(long)]
    check_only: bool,

    /// Evaluate main under the given index values, e.g. `n=3,i=0`.
    #[arg(long, value_name = "VALUES")]
    eval: Option<String>,

    /// Compare bounds with measurements over ranges, e.g. `n=0..8,i=0..2`.
    #[arg(long, value_name = "RANGES")]
    verify_bounds: Option<String>,

    /// Print the circuit produced by `--eval`.
    #[arg(long)]
    dump_circuit: bool,

    /// Write the checker's index obligations as SMT-LIB to this path.
    #[arg(long, value_name = "PATH")]
    emit_smt: Option<String>,

    /// Largest value tried per variable when checking index entailments.
    #[arg(long, value_name = "K")]
    entailment_bound: Option<u64>,

    /// Check the algebraic laws of every built-in metric profile.
    #[arg(long)]
    validate_metrics: bool,
}

fn parse_assignments(s: &str) -> Result<Vec<(String, String)>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, found `{p}`"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn parse_valuation(s: &str) -> Result<Valuation, String> {
    parse_assignments(s)?
        .into_iter()
        .map(|(k, v)| v.parse::<u64>().map(|n| (k, n)).map_err(|e| format!("bad value `{v}`: {e}")))
        .collect()
}

fn parse_ranges(s: &str) -> Result<Vec<Valuation>, String> {
    let mut out = vec![Valuation::new()];
    for (k, v) in parse_assignments(s)? {
        let (lo, hi) = match v.split_once("..") {
            Some((lo, hi)) => (lo.parse::<u64>(), hi.trim_start_matches('=').parse::<u64>()),
            None => (v.parse::<u64>(), v.parse::<u64>()),
        };
        let (lo, hi) = (lo.map_err(|e| format!("bad range `{v}`: {e}"))?, hi.map_err(|e| format!("bad range `{v}`: {e}"))?);
        out = out
            .into_iter()
            .flat_map(|base| {
                let mut grid = valuation_grid(&[k.as_str()], lo..=hi);
                for g in &mut grid {
                    g.extend(base.clone());
                }
                grid
            })
            .collect();
    }
    Ok(out)
}

fn load_source(file: &str) -> Result<String, String> {
    if let Some(name) = file.strip_prefix("corpus:") {
        return corpus_program(name).map(|p| p.source.to_string()).ok_or_else(|| format!("no bundled program `{name}`"));
    }
    fs::read_to_string(file).map_err(|e| format!("cannot read {file}: {e}"))
}

fn select_profile(cli: &Cli) -> Result<&'static MetricProfile, String> {
    let (name, want_local) = match (&cli.global, &cli.local) {
        (Some(g), None) => (g.as_str(), false),
        (None, Some(l)) => (l.as_str(), true),
        _ => ("width", false),
    };
    let p = profile_by_name(name).ok_or_else(|| format!("unknown profile `{name}`"))?;
    if p.is_local() != want_local {
        let flag = if p.is_local() { "-l" } else { "-g" };
        return Err(format!("profile `{name}` must be selected with {flag}"));
    }
    Ok(p)
}

fn validate_metrics() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let corpus: Vec<_> = (0..64).map(|_| random_circuit(&mut rng, 12)).collect();
    let mut ok = true;
    for p in builtin_profiles() {
        let reports = if p.is_local() {
            vec![validate_local_coherence(&p.rmi, &p.cmi, 16), validate_cmi_sound(p, &corpus, 16)]
        } else {
            vec![
                validate_well_behaved(&p.rmi, 16),
                validate_local_coherence(&p.rmi, &p.cmi, 16),
                validate_cmi_sound(p, &corpus, 16),
            ]
        };
        for r in reports {
            ok &= r.passed();
            println!("{}: {r}", p.name);
        }
    }
    ok
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    if cli.validate_metrics {
        let ok = validate_metrics();
        if cli.file.is_none() {
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    }
    let file = cli.file.as_deref().ok_or("no program given (see --help)")?;
    let p = select_profile(cli)?;
    let src = load_source(file)?;
    let mut strategy = CheckStrategy::default();
    if let Some(k) = cli.entailment_bound {
        strategy.grid_max = k;
    }
    let (program, typing) = match check_source(&src, p, strategy) {
        Ok(r) => r,
        Err(e @ (HarnessError::Parse(_) | HarnessError::Type(_))) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e.to_string()),
    };
    println!("Inferred type: {}", display_type(&typing.main_type, p));
    if !p.is_local() {
        println!("Effect of main: {}", display_index(&typing.main_effect, p));
    }

    if let Some(path) = &cli.emit_smt {
        let mut out = String::new();
        for (k, o) in typing.obligations.iter().enumerate() {
            out.push_str(&format!("; obligation {k} from `{}`: {} {} {}\n", o.binding, o.lhs, o.rel, o.rhs));
            match export_smtlib(&o.vars, &o.lhs, &o.rhs, o.rel, p) {
                Ok(s) => out.push_str(&s),
                Err(e) => out.push_str(&format!("; not expressible: {e}\n")),
            }
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| format!("cannot write {path}: {e}"))?;
        println!("Wrote {} obligations to {path}", typing.obligations.len());
    }
    if cli.check_only {
        return Ok(ExitCode::SUCCESS);
    }

    let mut violated = false;
    if let Some(vals) = &cli.eval {
        let val = parse_valuation(vals)?;
        let r = run_main(&program, &typing, p, &val).map_err(|e| e.to_string())?;
        if p.is_local() {
            for (l, promised, reached) in &r.label_depths {
                let mark = if reached <= promised { "ok" } else { "VIOLATED" };
                println!("{l}: depth {reached} (annotation {promised}) {mark}");
                violated |= reached > promised;
            }
        } else {
            let measured = p.oracle.measure(&r.circuit);
            let mark = if measured <= r.bound { "ok" } else { "VIOLATED" };
            println!("{}: measured {measured}, bound {} {mark}", p.name, r.bound);
            violated |= measured > r.bound;
        }
        if cli.dump_circuit {
            print!("{}", r.circuit.to_text());
        }
    }
    if let Some(ranges) = &cli.verify_bounds {
        let vals = parse_ranges(ranges)?;
        let report = verify_bounds(file, &program, &typing, p, &vals).map_err(|e| e.to_string())?;
        print!("{report}");
        violated |= !report.all_hold();
    }
    Ok(if violated { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
