//! Command-line front end. The binary only forwards `argv` to [`run`].

pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::abelian_engine::{analyze, render_text};
use crate::abgroup::FinAbGroup;
use crate::cyclic_engine::{sha_cyclic, Mode};
use crate::oracle::{build_shat, build_that, build_tk, cohomology, factors, sha_oracle, split, verify_bounds, Caps, Record};
use crate::scenario::{
    base_change_to_f, derive_cyclic, faithful_quotient, normalize_redundant_factors, p_part, CyclicScenario,
    GaloisScenario,
};
use crate::{Error, Result};

/// Parsed command line.
#[derive(Parser, Debug)]
#[command(name = "multinorm", version, about = "Tate-Shafarevich groups of multinorm-one tori")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CapArgs {
    /// Largest group order for oracle computations in degrees up to two.
    #[arg(long, default_value_t = Caps::default().max_order)]
    pub cap: usize,
    /// Largest lattice rank accepted by the oracle.
    #[arg(long, default_value_t = Caps::default().max_rank)]
    pub rank_cap: usize,
    /// Largest dense cochain dimension.
    #[arg(long, default_value_t = Caps::default().max_cochain_dim)]
    pub cochain_cap: usize,
}

impl CapArgs {
    pub fn caps(&self) -> Caps {
        Caps {
            max_order: self.cap,
            max_order_high: self.cap.min(Caps::default().max_order_high),
            max_rank: self.rank_cap,
            max_cochain_dim: self.cochain_cap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatticeKind {
    /// Character lattice of the multinorm-one torus.
    Multinorm,
    /// Character lattice of the norm-one torus of the designated factor.
    Field,
    /// Two-sided lattice of the designated split.
    Split,
    /// The trivial lattice `Z`.
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Inflation onto the p-primary part.
    Inflation,
    /// First cohomology of the multinorm lattice against the abelian quotient.
    H1,
    /// Invariance under dropping redundant factors.
    Normalize,
    /// Every suite above.
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the Tate-Shafarevich group of an abelian scenario (file or directory).
    Compute {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also compare against the cohomology oracle.
        #[arg(long)]
        oracle_check: bool,
        /// Cross-check cyclic-quotient cases with the paranoid cyclic engine.
        #[arg(long)]
        paranoid: bool,
        /// Factor to use as the distinguished field.
        #[arg(long)]
        designate: Option<String>,
        /// Directory input only: write `<name>.report.json` per scenario here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Run the cyclic engine on a cyclic scenario.
    Cyclic {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        paranoid: bool,
    },
    /// Write a reduced scenario: p-primary part, base change, or normalization.
    Reduce {
        path: PathBuf,
        #[arg(long, group = "reduction")]
        prime: Option<u64>,
        #[arg(long, group = "reduction")]
        base_change: bool,
        #[arg(long, group = "reduction")]
        normalize: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Tamagawa number of an abelian scenario.
    Tamagawa {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        designate: Option<String>,
    },
    /// Raw cohomology query on a lattice built from a scenario.
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = LatticeKind::Multinorm)]
        lattice: LatticeKind,
        /// Also compute the local-global kernel over the local profile.
        #[arg(long)]
        sha: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Check a scenario against the oracle, or run a check suite.
    Verify {
        path: Option<PathBuf>,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Largest group order used by the suites.
        #[arg(long, default_value_t = 12)]
        max_order: u64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Run the internal invariant suites and print a pass/fail matrix.
    Selftest {
        /// Largest group order in the scenario corpus.
        #[arg(long, default_value_t = 8)]
        cap: u64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Corrupt one SNF result to check that failures are reported.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&config.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GaloisScenario> {
    GaloisScenario::parse(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Input(format!("write failed: {e}")))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn records_text(records: &[Record]) -> String {
    records
        .iter()
        .map(|r| format!("{}  {}: {} vs {}\n", if r.holds { "pass" } else { "FAIL" }, r.claim, r.lhs, r.rhs))
        .collect()
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Compute { path, json, oracle_check, paranoid, designate, out_dir, caps } => {
            let opts = ComputeOpts { oracle_check: *oracle_check, paranoid: *paranoid, designate: designate.as_deref(), caps: caps.caps() };
            if path.is_dir() {
                return compute_dir(path, *json, out_dir.as_deref(), &opts, out);
            }
            if out_dir.is_some() {
                return Err(Error::Input("--out-dir needs a directory input".into()));
            }
            let (value, ok) = compute_one(&load(path)?, &opts)?;
            emit(out, &if *json { pretty(&value) } else { compute_text(&value) })?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Cyclic { path, json, paranoid } => {
            let cs = CyclicScenario::parse(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let mode = if *paranoid { Mode::Paranoid } else { Mode::Fast };
            let report = sha_cyclic(&cs, mode)?;
            emit(out, &if *json { report.to_json() + "\n" } else { report.to_text() })?;
            Ok(0)
        }
        Command::Reduce { path, prime, base_change, normalize, out: target } => {
            let s = load(path)?;
            let s = s.as_abelian()?;
            let (reduced, log) = match (prime, base_change, normalize) {
                (Some(p), false, false) => (p_part(s, *p)?, Vec::new()),
                (None, true, false) => (base_change_to_f(s)?, Vec::new()),
                (None, false, true) => normalize_redundant_factors(s),
                _ => return Err(Error::Input("give exactly one of --prime, --base-change, --normalize".into())),
            };
            let text = GaloisScenario::Abelian(faithful_quotient(&reduced)).to_json() + "\n";
            GaloisScenario::parse(&text).map_err(|e| Error::Internal(format!("reduced scenario does not reparse: {e}")))?;
            match target {
                Some(p) => fs::write(p, &text).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?,
                None => emit(out, &text)?,
            }
            for line in log {
                eprintln!("{line}");
            }
            Ok(0)
        }
        Command::Tamagawa { path, json, designate } => {
            let s = load(path)?;
            let mut s = s.as_abelian()?.clone();
            if let Some(d) = designate {
                s = s.with_designation(d)?;
            }
            let r = analyze(&s)?.report;
            let v = r.to_json_value();
            if *json {
                emit(out, &pretty(&json!({"tamagawa": v["tamagawa"], "status": v["status"]})))?;
            } else {
                let line = match &r.tamagawa {
                    Some(t) if t.is_integer() => format!("{}\n", t.numer()),
                    Some(t) => format!("{}/{}\n", t.numer(), t.denom()),
                    None => "unavailable (the answer is only bounded)\n".into(),
                };
                emit(out, &line)?;
            }
            Ok(0)
        }
        Command::Oracle { path, degree, lattice, sha, json, caps } => {
            let v = oracle_query(&load(path)?, *degree, *lattice, *sha, &caps.caps())?;
            emit(out, &if *json { pretty(&v) } else { oracle_text(&v) })?;
            Ok(0)
        }
        Command::Verify { path, suite, max_order, json, caps } => {
            let caps = caps.caps();
            let mut records = Vec::new();
            if let Some(p) = path {
                let s = load(p)?;
                records.extend(verify_bounds(s.as_abelian()?, &caps)?.records);
            }
            let suite = match (path, suite) {
                (None, None) => Some(Suite::All),
                (_, s) => *s,
            };
            if let Some(s) = suite {
                let all = s == Suite::All;
                if all || s == Suite::Inflation {
                    records.extend(suites::inflation(&caps)?);
                }
                if all || s == Suite::H1 {
                    records.extend(suites::h1_multinorm_suite(*max_order, &caps)?);
                }
                if all || s == Suite::Normalize {
                    records.extend(suites::normalize_suite((*max_order).min(8), &caps)?);
                }
            }
            let ok = records.iter().all(|r| r.holds);
            if *json {
                emit(out, &pretty(&Value::Array(records.iter().map(Record::to_json_value).collect())))?;
            } else {
                emit(out, &records_text(&records))?;
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Selftest { cap, seed, json, inject_fault } => selftest(*cap, *seed, *json, *inject_fault, out),
    }
}

struct ComputeOpts<'a> {
    oracle_check: bool,
    paranoid: bool,
    designate: Option<&'a str>,
    caps: Caps,
}

/// Report JSON for one scenario and whether every requested check held.
fn compute_one(s: &GaloisScenario, opts: &ComputeOpts) -> Result<(Value, bool)> {
    let s = match s {
        GaloisScenario::Abelian(s) => s,
        GaloisScenario::Table(_) => {
            return Err(Error::Input("compute needs an abelian scenario; use `oracle` for table groups".into()))
        }
    };
    let s = match opts.designate {
        Some(d) => s.with_designation(d)?,
        None => s.clone(),
    };
    let report = analyze(&s)?.report;
    let mut v = report.to_json_value();
    let mut ok = true;
    if opts.paranoid {
        if let Ok(dc) = derive_cyclic(&faithful_quotient(&s).with_designation(&report.designation)?) {
            let cyclic = sha_cyclic(&dc.cyclic, Mode::Paranoid)?;
            let holds = cyclic.s_mod_d == report.s_mod_d;
            ok &= holds;
            let r = Record { claim: "cyclic engine agrees with S/D".into(), lhs: json!(factors(&cyclic.s_mod_d)), rhs: json!(factors(&report.s_mod_d)), holds };
            v["paranoid"] = r.to_json_value();
        }
    }
    if opts.oracle_check {
        let check = verify_bounds(&s, &opts.caps)?;
        ok &= check.passed();
        v["verification"] = check.to_json_value();
    }
    Ok((v, ok))
}

fn compute_text(v: &Value) -> String {
    let mut text = render_text(v);
    let mut lines = Vec::new();
    if let Some(p) = v.get("paranoid") {
        lines.push(p.clone());
    }
    if let Some(Value::Array(rs)) = v.get("verification") {
        lines.extend(rs.iter().cloned());
    }
    for r in lines {
        text += &format!("{}  {}: {} vs {}\n", if r["verdict"] == "pass" { "pass" } else { "FAIL" }, r["claim"].as_str().unwrap_or(""), r["lhs"], r["rhs"]);
    }
    text
}

/// Batch mode: every `*.json` file in sorted order, one result per file name.
/// Per-file errors are reported in place; the exit code is the worst seen.
/// With `out_dir`, each result is also written to `<stem>.report.json`.
fn compute_dir(dir: &Path, json: bool, out_dir: Option<&Path>, opts: &ComputeOpts, out: &mut dyn Write) -> Result<i32> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut results = Map::new();
    let mut code = 0;
    for f in &files {
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let v = match load(f).and_then(|s| compute_one(&s, opts)) {
            Ok((v, ok)) => {
                code = worst(code, if ok { 0 } else { 1 });
                v
            }
            Err(e) => {
                code = worst(code, e.exit_code());
                json!({"error": e.to_string(), "exit_code": e.exit_code()})
            }
        };
        if let Some(target) = out_dir {
            let stem = f.file_stem().unwrap().to_string_lossy();
            let file = target.join(format!("{stem}.report.json"));
            fs::create_dir_all(target)
                .and_then(|_| fs::write(&file, pretty(&v)))
                .map_err(|e| Error::Input(format!("{}: {e}", file.display())))?;
        }
        results.insert(name, v);
    }
    if json {
        emit(out, &pretty(&Value::Object(results)))?;
    } else {
        for (name, v) in &results {
            let body = match v.get("error") {
                Some(e) => format!("error: {}\n", e.as_str().unwrap_or("")),
                None => compute_text(v),
            };
            emit(out, &format!("== {name}\n{body}"))?;
        }
    }
    Ok(code)
}

/// Severity order for batch runs: internal failures, then caps, then input errors.
fn worst(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        0 => 0,
        2 => 1,
        3 => 2,
        _ => 3,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn oracle_query(s: &GaloisScenario, q: usize, kind: LatticeKind, want_sha: bool, caps: &Caps) -> Result<Value> {
    let mut t = s.to_table();
    if let GaloisScenario::Abelian(a) = s {
        t.designate = Some(a.designation()?.name);
    }
    let (k, others) = split(&t);
    let lattice = match kind {
        LatticeKind::Multinorm => build_that(&t)?.lattice,
        LatticeKind::Field => build_tk(&t.group, &k)?.lattice,
        LatticeKind::Split => build_shat(&t.group, &k, &others)?.lattice,
        LatticeKind::Trivial => crate::oracle::GLattice::trivial(&t.group),
    };
    let h = cohomology(&lattice, q, caps)?;
    let mut v = json!({
        "degree": q,
        "lattice": format!("{kind:?}").to_lowercase(),
        "group_order": t.group.order(),
        "rank": lattice.rank(),
        "cohomology": factors(h.group()),
        "free_rank": h.free_rank(),
    });
    if want_sha {
        if q == 0 {
            return Err(Error::Input("the local-global kernel needs degree at least 1".into()));
        }
        let sha: FinAbGroup = sha_oracle(&lattice, q, &t.profile_subgroups(), caps)?;
        v["sha"] = json!(factors(&sha));
    }
    Ok(v)
}

fn oracle_text(v: &Value) -> String {
    let mut s = format!(
        "H^{}(G, {}) with |G| = {}, rank {}: torsion {} free rank {}\n",
        v["degree"], v["lattice"].as_str().unwrap_or(""), v["group_order"], v["rank"], v["cohomology"], v["free_rank"]
    );
    if let Some(x) = v.get("sha") {
        s += &format!("local-global kernel: {x}\n");
    }
    s
}

/// One row of the selftest matrix.
struct SuiteRow {
    name: &'static str,
    records: Vec<Record>,
    seconds: f64,
}

fn selftest(cap: u64, seed: u64, json_out: bool, inject_fault: bool, out: &mut dyn Write) -> Result<i32> {
    let caps = Caps::default();
    let mut rows = Vec::new();
    let mut timed = |name: &'static str, f: &mut dyn FnMut() -> Result<Vec<Record>>| -> Result<()> {
        let t = Instant::now();
        let records = f()?;
        rows.push(SuiteRow { name, records, seconds: t.elapsed().as_secs_f64() });
        Ok(())
    };
    timed("snf", &mut || Ok(suites::snf_random(200, seed, inject_fault)))?;
    timed("complexes", &mut || suites::complexes(&caps))?;
    timed("cohomology-paths", &mut || suites::cohomology_paths(40, seed, &caps))?;
    timed("inflation", &mut || suites::inflation(&caps))?;
    timed("h1-multinorm", &mut || suites::h1_multinorm_suite(cap, &caps))?;
    timed("engine-oracle", &mut || suites::engine_oracle(cap, &caps))?;
    timed("cyclic", &mut || suites::cyclic_paths(cap, &caps))?;
    timed("normalize", &mut || suites::normalize_suite(cap.min(4), &caps))?;

    let ok = rows.iter().all(|r| r.records.iter().all(|x| x.holds));
    if json_out {
        let v: Vec<Value> = rows
            .iter()
            .map(|r| {
                let failures: Vec<Value> = r.records.iter().filter(|x| !x.holds).map(Record::to_json_value).collect();
                json!({"suite": r.name, "cases": r.records.len(), "passed": failures.is_empty(), "failures": failures})
            })
            .collect();
        emit(out, &pretty(&json!({"seed": seed, "cap": cap, "suites": v, "passed": ok})))?;
    } else {
        let mut text = format!("selftest seed={seed:#x} cap={cap}\n");
        for r in &rows {
            let fails = r.records.iter().filter(|x| !x.holds).count();
            let verdict = if fails == 0 { "PASS".to_string() } else { format!("FAIL ({fails} failing)") };
            text += &format!("{:<18} {:>6} cases  {:>7.2}s  {verdict}\n", r.name, r.records.len(), r.seconds);
            for x in r.records.iter().filter(|x| !x.holds).take(5) {
                text += &format!("    {}: {} vs {}\n", x.claim, x.lhs, x.rhs);
            }
        }
        text += if ok { "all suites passed\n" } else { "selftest FAILED\n" };
        emit(out, &text)?;
    }
    Ok(if ok { 0 } else { 1 })
}
