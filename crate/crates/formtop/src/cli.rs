//! The `formtop` command line.
//!
//! Exit codes: 0 success or true, 1 false or refuted (a witness is
//! printed), 2 a fuel, depth or enumeration bound was hit, 3 malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use formtop_core::baire::{split_cover, DerivationError};
use formtop_core::continuity::{
    check_pfunction_conditions, modulus, sigma_to_decidable_bar, BarVerdict, ContinuityError,
};
use formtop_core::finite::{
    run_family_suite, topology_family, verify_topology, Bounds, FamilyParams, FiniteError, SuiteReport,
};
use formtop_core::pairing::unpair;
use formtop_core::reals::{
    certify, decide, heine_borel, prefix_witnesses, validate, Decision, Mode, RatInterval, RealCertificate, RealsError,
};
use formtop_core::spread::{fan_uniform_depth, retract_prefix, retract_seq, SpreadError};
use formtop_core::DEFAULT_FUEL;
use serde_json::{json, Value};

use crate::certificate_file::parse_certificate;
use crate::derivation_file::parse_derivation;
use crate::error::{read_file, InputError};
use crate::specs::{
    parse_cover_file, parse_enumerated_cover, parse_interval, parse_relation, parse_seq, parse_set, parse_sigma,
    parse_spread, parse_stream,
};
use crate::topology_file::{parse_topology, TopologyDoc};

#[derive(Debug, Parser)]
#[command(
    name = "formtop",
    version,
    about = "Positive topologies, the Baire space, spreads and formal reals"
)]
pub struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized inputs such as `random:bound` streams.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite positive topologies.
    #[command(subcommand)]
    Finite(FiniteCommand),
    /// Cover derivations on the Baire space.
    #[command(subcommand)]
    Baire(BaireCommand),
    /// Relations from sequences to naturals.
    #[command(subcommand)]
    Maps(MapsCommand),
    /// Spreads and the retraction onto them.
    #[command(subcommand)]
    Spread(SpreadCommand),
    /// Uniform bar search on the binary tree.
    #[command(subcommand)]
    Fan(FanCommand),
    /// Finite covers of rational intervals.
    #[command(subcommand)]
    Reals(RealsCommand),
}

#[derive(Debug, Subcommand)]
pub enum FiniteCommand {
    /// Check topology files (or directories of `.top` files) against every finite property.
    Verify {
        paths: Vec<PathBuf>,
        /// Also run the exhaustive suite over all small generated topologies.
        #[arg(long)]
        family: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BaireCommand {
    /// Follow a derivation along a stream to the member of the target it reaches.
    Split {
        /// Derivation file, or an inline s-expression starting with `(`.
        #[arg(long)]
        derivation: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        stream: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum MapsCommand {
    /// Evaluate a relation at a stream.
    Eval {
        #[arg(long)]
        relation: String,
        #[arg(long)]
        stream: String,
        /// Also print the prefix that determines the value.
        #[arg(long)]
        modulus: bool,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Decide membership in the decidable bar obtained from a Σ⁰₁ predicate.
    Sigma2dec {
        #[arg(long)]
        d: String,
        #[arg(long)]
        probe: String,
    },
    /// Check single-valuedness, monotonicity and barhood of the domain up to a depth.
    CheckModulus {
        #[arg(long)]
        relation: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpreadCommand {
    /// Retract a sequence, or a prefix of a stream, onto a spread.
    Retract(RetractArgs),
}

#[derive(Debug, Args)]
pub struct RetractArgs {
    #[arg(long)]
    pub spread: String,
    #[arg(long, conflicts_with_all = ["stream", "levels"], required_unless_present = "stream")]
    pub input: Option<String>,
    #[arg(long, requires = "levels")]
    pub stream: Option<String>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Largest digit tried when searching for a child inside the spread.
    #[arg(long, default_value_t = 10_000)]
    pub fuel: u64,
}

#[derive(Debug, Subcommand)]
pub enum FanCommand {
    /// The least length at which every binary sequence has a prefix in the set.
    Depth {
        #[arg(long)]
        set: String,
        #[arg(long)]
        max: usize,
    },
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    /// `r` for the reals, `i01` for the unit interval.
    #[arg(long, default_value = "r")]
    pub mode: String,
    /// The interval to cover, as `p/q..r/s`.
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    /// File with one interval `p/q,r/s` per line.
    #[arg(long)]
    pub cover: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum RealsCommand {
    /// Decide whether the finite family covers the target.
    Decide(CoverArgs),
    /// Print a validated derivation of the cover.
    Certify(CoverArgs),
    /// Validate a certificate file against a target and family.
    Check {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Find the least covering prefix of an enumerated cover.
    HeineBorel {
        #[arg(long, default_value = "r")]
        mode: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// `shrinking`, `inner`, `constant:p/q,r/s` or `file:path`.
        #[arg(long)]
        cover_gen: String,
        /// Largest prefix length tried.
        #[arg(long, default_value_t = 200)]
        fuel: usize,
    },
}

/// The result of a command before it is written out.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn new(code: i32, text: String, json: Value) -> Self {
        Outcome { code, text, json }
    }
}

/// Failures that stop a command.
#[derive(Debug)]
pub enum Failure {
    Input(InputError),
    Exhausted(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

fn finite_failure(e: FiniteError) -> Failure {
    match e {
        FiniteError::BaseTooLarge { .. } | FiniteError::EnumerationTooLarge { .. } => Failure::Exhausted(e.to_string()),
        other => Failure::Input(InputError::spec("finite topology", "", other.to_string())),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                3
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    let (code, text, value) = match dispatch(&cli) {
        Ok(o) => (o.code, o.text, o.json),
        Err(failure) => {
            let (code, kind, message) = match failure {
                Failure::Input(e) => (3, "malformed-input", e.to_string()),
                Failure::Exhausted(m) => (2, "exhausted", m),
            };
            let _ = writeln!(err, "error: {message}");
            (
                code,
                String::new(),
                json!({"error": {"kind": kind, "message": message}}),
            )
        }
    };
    if cli.json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap_or_default());
    } else {
        let _ = write!(out, "{text}");
    }
    code
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Finite(FiniteCommand::Verify { paths, family }) => finite_verify(paths, *family),
        Command::Baire(BaireCommand::Split {
            derivation,
            set,
            stream,
            fuel,
        }) => baire_split(derivation, set, stream, *fuel, cli.seed),
        Command::Maps(MapsCommand::Eval {
            relation,
            stream,
            modulus,
            fuel,
        }) => maps_eval(relation, stream, *modulus, *fuel, cli.seed),
        Command::Maps(MapsCommand::Sigma2dec { d, probe }) => maps_sigma2dec(d, probe),
        Command::Maps(MapsCommand::CheckModulus { relation, depth }) => maps_check_modulus(relation, *depth),
        Command::Spread(SpreadCommand::Retract(args)) => spread_retract(args, cli.seed),
        Command::Fan(FanCommand::Depth { set, max }) => fan_depth(set, *max),
        Command::Reals(RealsCommand::Decide(args)) => reals_decide(args),
        Command::Reals(RealsCommand::Certify(args)) => reals_certify(args),
        Command::Reals(RealsCommand::Check { cover, certificate }) => reals_check(cover, certificate),
        Command::Reals(RealsCommand::HeineBorel {
            mode,
            target,
            cover_gen,
            fuel,
        }) => reals_heine_borel(mode, target, cover_gen, *fuel),
    }
}

fn collect_topology_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, InputError> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = std::fs::read_dir(p).map_err(|source| InputError::Io {
                path: p.clone(),
                source,
            })?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "top"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn report_lines(report: &SuiteReport, text: &mut String) -> Vec<Value> {
    let mut checks = Vec::new();
    for o in &report.outcomes {
        let status = if o.passed() { "pass" } else { "FAIL" };
        text.push_str(&format!(
            "  {status} {:<28} {:>9} instances {:>6} failures\n",
            o.check.name(),
            o.instances,
            o.failures
        ));
        if let Some(w) = &o.first_failure {
            text.push_str(&format!("       witness: {w}\n"));
        }
        checks.push(json!({
            "name": o.check.name(),
            "instances": o.instances,
            "failures": o.failures,
            "witness": o.first_failure,
        }));
    }
    checks
}

fn finite_verify(paths: &[PathBuf], family: bool) -> Result<Outcome, Failure> {
    if paths.is_empty() && !family {
        return Err(InputError::spec("finite verify", "", "give topology files, a directory, or --family").into());
    }
    let bounds = Bounds::default();
    let files = collect_topology_files(paths)?;
    let mut docs: Vec<(PathBuf, TopologyDoc)> = Vec::new();
    for f in files {
        let text = read_file(&f)?;
        let doc = parse_topology(&f.display().to_string(), &text, &bounds)?;
        docs.push((f, doc));
    }
    let targets = topology_family(2, 2, &bounds).map_err(finite_failure)?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all_passed = true;
    for (path, doc) in &docs {
        let report = verify_topology(&doc.topology, &targets, &bounds).map_err(finite_failure)?;
        all_passed &= report.passed();
        match &doc.name {
            Some(name) => text.push_str(&format!("{} ({name})\n", path.display())),
            None => text.push_str(&format!("{}\n", path.display())),
        }
        let checks = report_lines(&report, &mut text);
        results.push(json!({
            "file": path.display().to_string(),
            "name": doc.name,
            "atoms": doc.topology.size(),
            "concrete": doc.concrete,
            "passed": report.passed(),
            "checks": checks,
        }));
    }
    let mut family_json = Value::Null;
    if family {
        let report = run_family_suite(&FamilyParams::default(), &bounds).map_err(finite_failure)?;
        all_passed &= report.passed();
        text.push_str("generated family\n");
        let checks = report_lines(&report, &mut text);
        family_json = json!({"passed": report.passed(), "checks": checks});
    }
    text.push_str(if all_passed {
        "all checks passed\n"
    } else {
        "some checks failed\n"
    });
    let value = json!({
        "command": "finite verify",
        "passed": all_passed,
        "files": results,
        "family": family_json,
        "targets": targets.len(),
    });
    Ok(Outcome::new(if all_passed { 0 } else { 1 }, text, value))
}

fn baire_split(derivation: &str, set: &str, stream: &str, fuel: usize, seed: u64) -> Result<Outcome, Failure> {
    let d = if derivation.trim_start().starts_with('(') {
        parse_derivation("<inline>", derivation)?
    } else {
        let path = Path::new(derivation);
        parse_derivation(derivation, &read_file(path)?)?
    };
    let u = parse_set(set)?;
    let alpha = parse_stream(stream, seed)?;
    match split_cover(&alpha, &d, &u, fuel) {
        Ok(leaf) => Ok(Outcome::new(
            0,
            format!("{leaf}\n"),
            json!({"command": "baire split", "leaf": leaf.to_string(), "entries": leaf.entries()}),
        )),
        Err(DerivationError::FuelExhausted(n)) => {
            Err(Failure::Exhausted(format!("fuel exhausted after {n} fan steps")))
        }
        Err(e) => Ok(Outcome::new(
            1,
            format!("refuted: {e}\n"),
            json!({"command": "baire split", "leaf": null, "violation": e.to_string()}),
        )),
    }
}

fn maps_eval(relation: &str, stream: &str, show_modulus: bool, fuel: usize, seed: u64) -> Result<Outcome, Failure> {
    let s = parse_relation(relation)?;
    let alpha = parse_stream(stream, seed)?;
    match modulus(&s, &alpha, fuel) {
        Ok((prefix, n)) => {
            let text = if show_modulus {
                format!("{n}\nmodulus {prefix}\n")
            } else {
                format!("{n}\n")
            };
            let mut value = json!({"command": "maps eval", "value": n});
            if show_modulus {
                value["modulus"] = json!(prefix.to_string());
            }
            Ok(Outcome::new(0, text, value))
        }
        Err(ContinuityError::FuelExhausted { fuel }) => Err(Failure::Exhausted(format!(
            "no prefix among the first {fuel} has a value: the domain may not be a bar"
        ))),
        Err(e @ ContinuityError::NotSingleValued { .. }) => Ok(Outcome::new(
            1,
            format!("refuted: {e}\n"),
            json!({"command": "maps eval", "value": null, "violation": e.to_string()}),
        )),
    }
}

fn maps_sigma2dec(d: &str, probe: &str) -> Result<Outcome, Failure> {
    let p = parse_sigma(d)?;
    let a = parse_seq("probe", probe)?;
    let v = sigma_to_decidable_bar(&p);
    let member = v.contains(&a);
    let (k, n) = unpair(a.len() as u64);
    let text = format!(
        "{}\nlength {} decodes to prefix length {k} and witness {n}\n",
        if member { "member" } else { "not a member" },
        a.len()
    );
    let value = json!({
        "command": "maps sigma2dec",
        "probe": a.to_string(),
        "member": member,
        "prefix_length": k,
        "witness": n,
    });
    Ok(Outcome::new(if member { 0 } else { 1 }, text, value))
}

fn maps_check_modulus(relation: &str, depth: usize) -> Result<Outcome, Failure> {
    let s = parse_relation(relation)?;
    let r = check_pfunction_conditions(&s, depth);
    let mut text = String::new();
    match &r.multi_valued {
        None => text.push_str("single-valued: yes\n"),
        Some((a, vs)) => text.push_str(&format!("single-valued: no, {a} has values {vs:?}\n")),
    }
    match &r.monotonicity_failure {
        None => text.push_str("monotone: yes\n"),
        Some((a, parent, n)) => text.push_str(&format!(
            "monotone: no, {parent} has value {n} but its extension {a} does not\n"
        )),
    }
    let bar = match &r.bar {
        BarVerdict::Confirmed { level, alphabet } => {
            text.push_str(&format!("domain bars the {alphabet}-ary tree at length {level}\n"));
            json!({"confirmed": true, "level": level, "alphabet": alphabet})
        }
        BarVerdict::NotConfirmed { escape } => {
            text.push_str(&format!(
                "domain not confirmed as a bar: {escape} escapes it up to depth {depth}\n"
            ));
            json!({"confirmed": false, "escape": escape.to_string()})
        }
    };
    let value = json!({
        "command": "maps check-modulus",
        "alphabet": r.alphabet,
        "single_valued": r.single_valued(),
        "multi_valued": r.multi_valued.as_ref().map(|(a, vs)| json!({"at": a.to_string(), "values": vs})),
        "monotone": r.monotonicity_failure.is_none(),
        "monotonicity_failure": r.monotonicity_failure.as_ref().map(|(a, p, n)| json!({"at": a.to_string(), "parent": p.to_string(), "value": n})),
        "bar": bar,
    });
    let code = if !r.single_valued() || r.monotonicity_failure.is_some() {
        1
    } else if r.bar_confirmed().is_none() {
        2
    } else {
        0
    };
    Ok(Outcome::new(code, text, value))
}

fn spread_failure(e: SpreadError) -> Failure {
    match e {
        SpreadError::InvalidSpread(m) => Failure::Input(InputError::spec("spread spec", "", m)),
        other => Failure::Exhausted(other.to_string()),
    }
}

fn spread_retract(args: &RetractArgs, seed: u64) -> Result<Outcome, Failure> {
    let u = parse_spread(&args.spread)?;
    let (input, image) = match (&args.input, &args.stream, args.levels) {
        (Some(a), _, _) => {
            let a = parse_seq("input", a)?;
            let b = retract_seq(&u, &a, args.fuel).map_err(spread_failure)?;
            (a, b)
        }
        (None, Some(stream), Some(k)) => {
            let alpha = parse_stream(stream, seed)?;
            let b = retract_prefix(&u, &alpha, k, args.fuel).map_err(spread_failure)?;
            (alpha.prefix(k), b)
        }
        _ => return Err(InputError::spec("spread retract", "", "give --input, or --stream with --levels").into()),
    };
    let value = json!({
        "command": "spread retract",
        "input": input.to_string(),
        "retraction": image.to_string(),
        "fixed": input == image,
    });
    Ok(Outcome::new(0, format!("{image}\n"), value))
}

fn fan_depth(set: &str, max: usize) -> Result<Outcome, Failure> {
    let u = parse_set(set)?;
    match fan_uniform_depth(&u, max) {
        Ok(depth) => Ok(Outcome::new(
            0,
            format!("{depth}\n"),
            json!({"command": "fan depth", "depth": depth}),
        )),
        Err(e) => Err(Failure::Exhausted(e.to_string())),
    }
}

fn load_cover(args: &CoverArgs) -> Result<(Mode, RatInterval, Vec<RatInterval>), Failure> {
    let mode: Mode = args
        .mode
        .parse()
        .map_err(|m: String| InputError::spec("mode", &args.mode, m))?;
    let t = parse_interval(&args.target)?;
    let path = args.cover.display().to_string();
    let u = parse_cover_file(&path, &read_file(&args.cover)?)?;
    Ok((mode, t, u))
}

fn reals_decide(args: &CoverArgs) -> Result<Outcome, Failure> {
    let (mode, t, u) = load_cover(args)?;
    match decide(mode, &t, &u) {
        Decision::Covered { chain } => {
            let mut text = String::from("covered\n");
            for &i in &chain {
                text.push_str(&format!("  {}\n", u[i]));
            }
            let value = json!({
                "command": "reals decide",
                "mode": mode.to_string(),
                "target": t.to_string(),
                "covered": true,
                "chain": chain.iter().map(|&i| u[i].to_string()).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(0, text, value))
        }
        Decision::Uncovered { witness } => {
            let value = json!({
                "command": "reals decide",
                "mode": mode.to_string(),
                "target": t.to_string(),
                "covered": false,
                "witness": witness.to_string(),
            });
            Ok(Outcome::new(1, format!("not covered\nwitness {witness}\n"), value))
        }
    }
}

fn certificate_json(c: &RealCertificate) -> Value {
    let mut node = json!({"rule": c.rule_name(), "at": c.conclusion().to_string()});
    match c {
        RealCertificate::Weaken { wider, premise, .. } => {
            node["wider"] = json!(wider.to_string());
            node["premises"] = json!([certificate_json(premise)]);
        }
        RealCertificate::Split {
            p1, q1, left, right, ..
        } => {
            node["cut"] = json!([p1.to_string(), q1.to_string()]);
            node["premises"] = json!([certificate_json(left), certificate_json(right)]);
        }
        _ => {}
    }
    node
}

fn reals_certify(args: &CoverArgs) -> Result<Outcome, Failure> {
    let (mode, t, u) = load_cover(args)?;
    match certify(mode, &t, &u) {
        Ok(cert) => {
            if let Err(v) = validate(mode, &t, &u, &cert) {
                // The sweep produced a certificate its validator rejects.
                return Ok(Outcome::new(
                    1,
                    format!("internal certificate rejected: {v}\n{cert}"),
                    json!({"command": "reals certify", "valid": false, "violation": v.to_string()}),
                ));
            }
            let value = json!({
                "command": "reals certify",
                "mode": mode.to_string(),
                "valid": true,
                "size": cert.size(),
                "certificate": certificate_json(&cert),
            });
            Ok(Outcome::new(0, cert.to_string(), value))
        }
        Err(RealsError::NotCoverable { witness }) => Ok(Outcome::new(
            1,
            format!("not covered\nwitness {witness}\n"),
            json!({"command": "reals certify", "covered": false, "witness": witness.to_string()}),
        )),
        Err(e) => Err(InputError::spec("cover", "", e.to_string()).into()),
    }
}

fn reals_check(args: &CoverArgs, certificate: &Path) -> Result<Outcome, Failure> {
    let (mode, t, u) = load_cover(args)?;
    let cert = parse_certificate(&certificate.display().to_string(), &read_file(certificate)?)?;
    match validate(mode, &t, &u, &cert) {
        Ok(()) => Ok(Outcome::new(
            0,
            format!("valid: {} nodes\n", cert.size()),
            json!({"command": "reals check", "valid": true, "size": cert.size()}),
        )),
        Err(v) => Ok(Outcome::new(
            1,
            format!("invalid: {v}\n"),
            json!({"command": "reals check", "valid": false, "violation": v.to_string()}),
        )),
    }
}

fn reals_heine_borel(mode: &str, target: &str, cover_gen: &str, fuel: usize) -> Result<Outcome, Failure> {
    let mode: Mode = mode.parse().map_err(|m: String| InputError::spec("mode", mode, m))?;
    let t = parse_interval(target)?;
    let cover = parse_enumerated_cover(cover_gen)?;
    match heine_borel(mode, &t, &cover, fuel) {
        Ok(sub) => {
            let mut text = format!("subcover after {} members\n", sub.prefix.len());
            for iv in &sub.chain {
                text.push_str(&format!("  {iv}\n"));
            }
            let value = json!({
                "command": "reals heine-borel",
                "prefix_length": sub.prefix.len(),
                "prefix": sub.prefix.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "chain": sub.chain.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(0, text, value))
        }
        Err(RealsError::FuelExhausted { fuel }) => {
            let last = prefix_witnesses(mode, &t, &cover, fuel).pop().flatten();
            let hint = last.map_or(String::new(), |w| format!("; {w} is missed by all of them"));
            Err(Failure::Exhausted(format!(
                "no prefix of the first {fuel} members covers {t}{hint}"
            )))
        }
        Err(e) => Err(InputError::spec("cover", "", e.to_string()).into()),
    }
}
