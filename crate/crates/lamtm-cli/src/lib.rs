//! Command-line harness around the machine-to-lambda compiler: compile
//! machines to terms, run them at the lambda level with exact step counts,
//! cross-check against the direct simulator, and benchmark the step-count
//! growth law.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use lamtm::compile::{compile_machine, decode_boolean, encode_input};
use lamtm::encode::Alphabet;
use lamtm::eval::evaluate;
use lamtm::machine::{parse_machine, run_machine, wrap_payload, Machine};
use lamtm::revbin::{
    bitstring_term, decode_bitstring, lookup_rb, lookup_term, pred_rb, pred_term, succ_rb,
    succ_term, BitString,
};
use lamtm::term::{Term, TermKind};

const DEFAULT_FUEL: u64 = 100_000_000;

#[derive(Parser)]
#[command(
    name = "lamtm",
    about = "Compile two-tape Turing machines to the deterministic lambda-calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    Whole,
    Trans,
    Init,
    Final,
}

#[derive(Subcommand)]
enum Command {
    /// Print the compiled term of a machine
    Compile {
        /// Machine description file (.tm)
        machine: PathBuf,
        /// Which compiled term to print
        #[arg(long, value_enum, default_value = "whole")]
        part: Part,
        /// Print the term size instead of the term itself
        #[arg(long)]
        size: bool,
    },
    /// Evaluate the compiled machine on a payload and report the boolean
    Run {
        machine: PathBuf,
        /// Payload over {0,1}; the L/R markers are added automatically
        payload: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Run the direct simulator on a payload
    Simulate {
        machine: PathBuf,
        payload: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Compare the compiled machine against the simulator on all payloads
    /// up to a length
    Verify {
        machine: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Measure beta-steps across payload sizes and check the growth law
    Bench {
        machine: PathBuf,
        /// Comma-separated payload sizes
        #[arg(long, default_value = "4,8,16,32", value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Write a JSON report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the exact step-count contracts of the building blocks
    LemmaCheck {
        /// Largest numeral exercised by the arithmetic checks
        #[arg(long, default_value_t = 256)]
        max_n: u64,
    },
}

pub fn run() -> Result<()> {
    let cli = Cli::parse();
    let mut out = String::new();
    match cli.command {
        Command::Compile {
            machine,
            part,
            size,
        } => cmd_compile(&mut out, &machine, part, size)?,
        Command::Run {
            machine,
            payload,
            fuel,
        } => cmd_run(&mut out, &machine, &payload, fuel)?,
        Command::Simulate {
            machine,
            payload,
            fuel,
        } => cmd_simulate(&mut out, &machine, &payload, fuel)?,
        Command::Verify {
            machine,
            max_len,
            fuel,
        } => cmd_verify(&mut out, &machine, max_len, fuel)?,
        Command::Bench {
            machine,
            sizes,
            seed,
            fuel,
            json,
        } => cmd_bench(&mut out, &machine, &sizes, seed, fuel, json.as_deref())?,
        Command::LemmaCheck { max_n } => cmd_lemma_check(&mut out, max_n)?,
    }
    print!("{out}");
    Ok(())
}

fn load_machine(path: &Path) -> Result<Machine> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let machine = parse_machine(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let issues = machine.validate();
    if !issues.is_empty() {
        bail!(
            "{} is not a valid machine:\n  {}",
            path.display(),
            issues.join("\n  ")
        );
    }
    Ok(machine)
}

fn cmd_compile(out: &mut String, path: &Path, part: Part, size: bool) -> Result<()> {
    let machine = load_machine(path)?;
    let compiled = compile_machine(&machine)?;
    let term = match part {
        Part::Whole => &compiled.whole,
        Part::Trans => &compiled.trans,
        Part::Init => &compiled.init,
        Part::Final => &compiled.final_term,
    };
    if size {
        writeln!(out, "{}", term.size())?;
    } else {
        writeln!(out, "{term}")?;
    }
    Ok(())
}

fn cmd_run(out: &mut String, path: &Path, payload: &str, fuel: u64) -> Result<()> {
    let machine = load_machine(path)?;
    let input = wrap_payload(payload)?;
    let compiled = compile_machine(&machine)?;
    let term = Term::app(compiled.whole, encode_input(&input)?);
    let result = evaluate(&term, fuel);
    if result.exhausted {
        bail!("fuel exhausted after {} beta-steps", result.steps);
    }
    let accept = decode_boolean(&result.result)?;
    writeln!(
        out,
        "{}  ({} beta-steps)",
        if accept { "accept" } else { "reject" },
        result.steps
    )?;
    Ok(())
}

fn cmd_simulate(out: &mut String, path: &Path, payload: &str, fuel: u64) -> Result<()> {
    let machine = load_machine(path)?;
    let input = wrap_payload(payload)?;
    let run = run_machine(&machine, &input, fuel)?;
    if !run.halted {
        bail!("machine did not halt within {fuel} steps");
    }
    if run.stuck {
        bail!(
            "machine got stuck in non-final state {} after {} steps",
            run.final_config.state,
            run.steps
        );
    }
    let accept = run.final_config.state == machine.accept;
    writeln!(
        out,
        "{}  ({} machine steps, {} work cells)",
        if accept { "accept" } else { "reject" },
        run.steps,
        run.work_space
    )?;
    Ok(())
}

fn cmd_verify(out: &mut String, path: &Path, max_len: usize, fuel: u64) -> Result<()> {
    let machine = load_machine(path)?;
    let compiled = compile_machine(&machine)?;
    let mut cases = 0usize;
    for len in 0..=max_len {
        for bits in 0..(1u64 << len) {
            let payload: String = (0..len)
                .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            let input = wrap_payload(&payload)?;
            let oracle = run_machine(&machine, &input, fuel)?;
            if !oracle.halted || oracle.stuck {
                bail!("simulator did not finish cleanly on payload {payload:?}");
            }
            let expect = oracle.final_config.state == machine.accept;
            let term = Term::app(compiled.whole.clone(), encode_input(&input)?);
            let result = evaluate(&term, fuel);
            if result.exhausted {
                bail!("fuel exhausted on payload {payload:?}");
            }
            let got = decode_boolean(&result.result)?;
            if got != expect {
                bail!("mismatch on payload {payload:?}: simulator says {expect}, term says {got}");
            }
            cases += 1;
        }
    }
    writeln!(
        out,
        "ok: compiled machine agrees with the simulator on {cases} payloads (length <= {max_len})"
    )?;
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    payload_len: usize,
    input_len: usize,
    machine_steps: u64,
    beta_steps: u64,
    /// beta_steps / ((machine_steps + 1) * input_len * max(1, ceil(log2 input_len)))
    ratio: f64,
}

#[derive(Serialize)]
struct BenchReport {
    schema_version: u32,
    machine: String,
    seed: u64,
    rows: Vec<BenchRow>,
    ratio_min: f64,
    ratio_max: f64,
    status: String,
}

fn cmd_bench(
    out: &mut String,
    path: &Path,
    sizes: &[usize],
    seed: u64,
    fuel: u64,
    json: Option<&Path>,
) -> Result<()> {
    let machine = load_machine(path)?;
    let compiled = compile_machine(&machine)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    writeln!(
        out,
        "{:>8} {:>10} {:>12} {:>8}",
        "size", "tm-steps", "beta-steps", "ratio"
    )?;
    for &size in sizes {
        let payload: String = (0..size)
            .map(|_| if rng.gen_bool(0.5) { '1' } else { '0' })
            .collect();
        let input = wrap_payload(&payload)?;
        let oracle = run_machine(&machine, &input, fuel)?;
        if !oracle.halted || oracle.stuck {
            bail!("simulator did not finish cleanly at size {size}");
        }
        let term = Term::app(compiled.whole.clone(), encode_input(&input)?);
        let result = evaluate(&term, fuel);
        if result.exhausted {
            bail!("fuel exhausted at size {size}");
        }
        let len = input.len() as f64;
        let log = len.log2().ceil().max(1.0);
        let ratio = result.steps as f64 / ((oracle.steps + 1) as f64 * len * log);
        writeln!(
            out,
            "{size:>8} {:>10} {:>12} {ratio:>8.3}",
            oracle.steps, result.steps
        )?;
        rows.push(BenchRow {
            payload_len: size,
            input_len: input.len(),
            machine_steps: oracle.steps,
            beta_steps: result.steps,
            ratio,
        });
    }
    let ratio_min = rows.iter().map(|r| r.ratio).fold(f64::MAX, f64::min);
    let ratio_max = rows.iter().map(|r| r.ratio).fold(f64::MIN, f64::max);
    let status = if ratio_max / ratio_min <= 4.0 {
        "ok"
    } else {
        "spread"
    };
    writeln!(out, "ratio spread: {:.3} ({status})", ratio_max / ratio_min)?;
    if let Some(json_path) = json {
        let report = BenchReport {
            schema_version: 1,
            machine: path.display().to_string(),
            seed,
            rows,
            ratio_min,
            ratio_max,
            status: status.to_string(),
        };
        std::fs::write(json_path, serde_json::to_string_pretty(&report)?)
            .with_context(|| format!("writing {}", json_path.display()))?;
    }
    Ok(())
}

/// Evaluates `t` to the marker form `K v` and returns `(v, steps)`.
fn run_to_marker(t: &Term, fuel: u64) -> Result<(Term, u64)> {
    let out = evaluate(t, fuel);
    if out.exhausted {
        bail!("fuel exhausted after {} steps", out.steps);
    }
    match out.result.kind() {
        TermKind::App(k, payload) if *k == Term::var("K") => Ok((payload.clone(), out.steps)),
        _ => bail!("result not of shape K v: {}", out.result),
    }
}

fn cmd_lemma_check(out: &mut String, max_n: u64) -> Result<()> {
    // append: exactly 2 steps at several lengths
    let work = Alphabet::work();
    let append = work.append_char_term('1')?;
    for len in [0usize, 1, 16, 64] {
        let s = "0".repeat(len);
        let t = Term::apps(append.clone(), [Term::var("K"), work.encode_string(&s)?]);
        let (payload, steps) = run_to_marker(&t, 100)?;
        if steps != 2 || work.decode_string(&payload)? != format!("1{s}") {
            bail!("append contract violated at length {len}");
        }
    }
    writeln!(out, "append: exactly 2 beta-steps, result correct")?;

    // succ/pred/lookup against the reference functions
    let succ = succ_term();
    let pred = pred_term();
    let mut max_succ = 0u64;
    let mut max_pred = 0u64;
    for n in 0..max_n {
        let nb = BitString::from_nat(n);
        let (r, steps) = run_to_marker(
            &Term::apps(succ.clone(), [Term::var("K"), bitstring_term(&nb)]),
            100_000,
        )?;
        if decode_bitstring(&r)? != succ_rb(&nb) {
            bail!("succ wrong at {n}");
        }
        max_succ = max_succ.max(steps);
        if n > 0 {
            let (r, steps) = run_to_marker(
                &Term::apps(pred.clone(), [Term::var("K"), bitstring_term(&nb)]),
                100_000,
            )?;
            if decode_bitstring(&r)? != pred_rb(&nb).unwrap() {
                bail!("pred wrong at {n}");
            }
            max_pred = max_pred.max(steps);
        }
    }
    writeln!(
        out,
        "succ/pred: agree with reference for n < {max_n} (max steps {max_succ}/{max_pred})"
    )?;

    let input_a = Alphabet::input();
    let s: String = "01LR".chars().cycle().take(max_n as usize + 1).collect();
    let s_term = input_a.encode_string(&s)?;
    let lookup = lookup_term(&input_a);
    for n in 0..max_n.min(s.len() as u64) {
        let nb = BitString::from_nat(n);
        let (r, _) = run_to_marker(
            &Term::apps(
                lookup.clone(),
                [Term::var("K"), bitstring_term(&nb), s_term.clone()],
            ),
            1_000_000,
        )?;
        if input_a.decode_symbol(&r)? != lookup_rb(&nb, &s).unwrap() {
            bail!("lookup wrong at {n}");
        }
    }
    writeln!(out, "lookup: agrees with reference for n < {max_n}")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine_path(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../machines")
            .join(name)
    }

    #[test]
    fn run_matches_simulate_on_parity() {
        let path = machine_path("parity.tm");
        for (payload, expect) in [("", "reject"), ("1", "accept"), ("101", "reject")] {
            let mut via_term = String::new();
            cmd_run(&mut via_term, &path, payload, DEFAULT_FUEL).unwrap();
            assert!(via_term.starts_with(expect), "{payload}: {via_term}");
            let mut via_sim = String::new();
            cmd_simulate(&mut via_sim, &path, payload, DEFAULT_FUEL).unwrap();
            assert!(via_sim.starts_with(expect), "{payload}: {via_sim}");
        }
    }

    #[test]
    fn verify_small_lengths() {
        for name in ["parity.tm", "eq101.tm", "firstlast.tm"] {
            let mut out = String::new();
            cmd_verify(&mut out, &machine_path(name), 4, DEFAULT_FUEL).unwrap();
            assert!(out.starts_with("ok:"), "{name}: {out}");
        }
    }

    #[test]
    fn compile_prints_a_closed_deterministic_term() {
        let mut out = String::new();
        cmd_compile(&mut out, &machine_path("parity.tm"), Part::Whole, false).unwrap();
        let term = lamtm::term::parse_term(out.trim()).unwrap();
        assert!(term.is_closed() && term.is_lamdet());
    }

    #[test]
    fn bench_writes_versioned_json() {
        let dir = tempfile::tempdir().unwrap();
        let json_path = dir.path().join("report.json");
        let mut out = String::new();
        cmd_bench(
            &mut out,
            &machine_path("parity.tm"),
            &[4, 8, 16],
            7,
            DEFAULT_FUEL,
            Some(&json_path),
        )
        .unwrap();
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(report["schema_version"], 1);
        assert_eq!(report["rows"].as_array().unwrap().len(), 3);
        assert_eq!(report["status"], "ok");
    }

    #[test]
    fn bench_is_reproducible_for_a_seed() {
        let path = machine_path("parity.tm");
        let mut a = String::new();
        let mut b = String::new();
        cmd_bench(&mut a, &path, &[4, 8], 42, DEFAULT_FUEL, None).unwrap();
        cmd_bench(&mut b, &path, &[4, 8], 42, DEFAULT_FUEL, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lemma_check_passes() {
        let mut out = String::new();
        cmd_lemma_check(&mut out, 64).unwrap();
        assert!(out.contains("append: exactly 2"));
    }

    #[test]
    fn invalid_machine_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tm");
        std::fs::write(&path, "states: a\ninitial: a\naccept: a\nreject: a\n").unwrap();
        let err = load_machine(&path).unwrap_err().to_string();
        assert!(err.contains("not a valid machine"), "{err}");
    }
}
