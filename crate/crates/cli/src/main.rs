//! Command-line front end for the groupoid and relation calculus.
//!
//! Every subcommand prints a human-readable report and can also write the
//! same report as JSON (`--out`). Exit codes follow the verdict: `0` for
//! pass, `1` for fail, `2` for unusable input, and `3` when a search gave
//! up on its budget. `--expect` inverts nothing — it just makes the exit
//! code reflect whether the verdict matched the expectation, which keeps
//! negative examples scriptable.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relcp::bitcommit::{builtin_protocol, AdversaryClass, BindingVerdict, BitCommitmentProtocol};
use relcp::catalog;
use relcp::cpstar::broadcast::decide_broadcastable;
use relcp::cpstar::signalling::{
    kinematic_independence, kinematic_independence_structural, no_signalling, FamilyScope,
    NsWitness,
};
use relcp::cpstar::{copyable_states, entanglement_witness, CpError, Subsystem};
use relcp::fhilb::{
    diagonal_structure, matrix_algebra_structure, verify_commutative_broadcast, FhilbError,
};
use relcp::frobenius::{
    frobenius_of_groupoid, groupoid_from_frobenius, is_commutative, violated_axioms,
};
use relcp::groupoid::Groupoid;
use relcp::relcat::Elem;
use relcp::report::{CheckReport, Verdict};
use relcp::specfile;

#[derive(Parser)]
#[command(name = "relcp", version, about = "Exact checks for groupoids, relations and their information-theoretic behaviour")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report as JSON to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit successfully exactly when the verdict matches this expectation.
    #[arg(long, global = true, value_enum)]
    expect: Option<ExpectArg>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in groupoids and triples, then run the whole
    /// verification suite.
    Catalog,
    /// Build a groupoid from a name or file and report its shape.
    Validate(GroupoidArg),
    /// Check the induced multiplication against the structure axioms and
    /// round-trip the extraction.
    FrobeniusCheck(GroupoidArg),
    /// Decide whether the groupoid admits a broadcasting map.
    Broadcast {
        #[command(flatten)]
        groupoid: GroupoidArg,
        /// Largest morphism count for which nonexistence is re-proved by
        /// exhaustive search.
        #[arg(long, default_value_t = 16)]
        exhaustive_limit: usize,
    },
    /// Enumerate the copyable states.
    Copyables(GroupoidArg),
    /// Test a product state for entanglement.
    Witness {
        /// JSON file with `left`, `right` and `state`.
        #[arg(long)]
        state: PathBuf,
    },
    /// Inspect a measurement family: channel agreement and causality.
    Measure {
        /// JSON file with `groupoid` and `parts`.
        #[arg(long)]
        measurement: PathBuf,
    },
    /// Decide kinematic independence of two wide subsystems.
    Ki(SubsystemsArg),
    /// Decide no-signalling between two wide subsystems.
    Ns {
        #[command(flatten)]
        subsystems: SubsystemsArg,
        /// Quantify over every measurement family instead of only the
        /// causal ones.
        #[arg(long)]
        no_causal: bool,
        /// Quantify over causal families only (the default).
        #[arg(long, conflicts_with = "no_causal")]
        causal: bool,
    },
    /// Check the commitment protocol: soundness, concealment and binding.
    Bitcommit {
        /// Use the built-in protocol (the default when no file is given).
        #[arg(long)]
        builtin: bool,
        /// JSON file with `alice`, `bob`, `heads` and `tails`.
        #[arg(long, conflicts_with = "builtin")]
        protocol: Option<PathBuf>,
        /// Restrict the binding check to one adversary class.
        #[arg(long, value_enum)]
        adversary: Option<AdversaryArg>,
        /// Node budget for the binding search.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Verify broadcastability of a matrix structure numerically.
    FhilbVerify {
        #[arg(long, value_enum, default_value_t = StructureArg::Diagonal)]
        structure: StructureArg,
        /// Base dimension: the space is C^dim for diagonal structures and
        /// C^(dim*dim) for matrix algebras.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
struct GroupoidArg {
    /// A catalogue name (see `relcp catalog`) or a JSON file path.
    #[arg(long)]
    groupoid: String,
}

#[derive(Args)]
struct SubsystemsArg {
    /// JSON file with `groupoid`, `left` and `right`.
    #[arg(long, conflicts_with = "triple")]
    subsystems: Option<PathBuf>,
    /// A catalogue triple name (see `relcp catalog`).
    #[arg(long)]
    triple: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectArg {
    Pass,
    Fail,
    Inconclusive,
}

impl ExpectArg {
    fn verdict(self) -> Verdict {
        match self {
            ExpectArg::Pass => Verdict::Pass,
            ExpectArg::Fail => Verdict::Fail,
            ExpectArg::Inconclusive => Verdict::Inconclusive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AdversaryArg {
    Functions,
    Bijections,
    Isometries,
    All,
}

impl AdversaryArg {
    fn class(self) -> AdversaryClass {
        match self {
            AdversaryArg::Functions => AdversaryClass::FunctionGraphs,
            AdversaryArg::Bijections => AdversaryClass::BijectionGraphs,
            AdversaryArg::Isometries => AdversaryClass::Isometries,
            AdversaryArg::All => AdversaryClass::AllCpMorphisms,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
    Diagonal,
    Matrix,
}

/// An input problem: the check never ran.
struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<specfile::SpecError> for InputError {
    fn from(e: specfile::SpecError) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T> = Result<T, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            println!("{report}");
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, report.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(exit_code(report.verdict, cli.expect))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn exit_code(verdict: Verdict, expect: Option<ExpectArg>) -> u8 {
    match expect {
        Some(e) if e.verdict() == verdict => 0,
        Some(_) => match verdict {
            Verdict::Inconclusive => 3,
            _ => 1,
        },
        None => match verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        },
    }
}

fn run(command: &Command) -> CliResult<CheckReport> {
    let start = Instant::now();
    let report = match command {
        Command::Catalog => catalog_report(),
        Command::Validate(arg) => validate(arg),
        Command::FrobeniusCheck(arg) => frobenius_check(arg),
        Command::Broadcast { groupoid, exhaustive_limit } => broadcast(groupoid, *exhaustive_limit),
        Command::Copyables(arg) => copyables(arg),
        Command::Witness { state } => witness(state),
        Command::Measure { measurement } => measure(measurement),
        Command::Ki(arg) => ki(arg),
        Command::Ns { subsystems, no_causal, .. } => ns(subsystems, *no_causal),
        Command::Bitcommit { builtin: _, protocol, adversary, budget } => {
            bitcommit(protocol.as_deref(), *adversary, *budget)
        }
        Command::FhilbVerify { structure, dim, trials, tol, seed } => {
            fhilb_verify(*structure, *dim, *trials, *tol, *seed)
        }
    }?;
    Ok(report.elapsed(start.elapsed()))
}

fn resolve_groupoid(arg: &str) -> CliResult<Result<Groupoid, String>> {
    if let Some(g) = catalog::groupoid_by_name(arg) {
        return Ok(Ok(g));
    }
    let path = PathBuf::from(arg);
    if !path.exists() {
        return Err(InputError(format!(
            "{arg} is neither a catalogue groupoid nor a file; known names: {}",
            catalog::groupoid_names().join(", ")
        )));
    }
    let text = fs::read_to_string(&path)?;
    // JSON that does not parse is an input error; a description that parses
    // but denotes no valid groupoid is a check failure for `validate`.
    match relcp::specfile::groupoid_from_json(&text) {
        Ok(g) => Ok(Ok(g)),
        Err(specfile::SpecError::Json(e)) => Err(InputError(e.to_string())),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn require_groupoid(arg: &str) -> CliResult<Groupoid> {
    resolve_groupoid(arg)?.map_err(InputError)
}

fn join_labels<'a>(labels: impl IntoIterator<Item = &'a Elem>) -> String {
    labels.into_iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

fn catalog_report() -> CliResult<CheckReport> {
    for g in catalog::named_groupoids() {
        println!(
            "groupoid {:<16} {:>2} objects {:>2} morphisms{}",
            g.name(),
            g.object_count(),
            g.morphism_count(),
            if g.is_totally_disconnected() { "" } else { "  (has non-endomorphisms)" }
        );
    }
    for t in catalog::subsystem_triples() {
        println!("triple   {} on {}", t.name, t.parent().name());
    }
    println!();
    let results = relcp::suite::run_all();
    let mut failed = Vec::new();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} {:<24} [{:>9.3?}] {}", r.name, r.elapsed, r.detail);
        if !r.passed {
            failed.push(r.name);
        }
    }
    let report = CheckReport::new("catalog")
        .input("groupoids", catalog::named_groupoids().len())
        .input("triples", catalog::subsystem_triples().len())
        .input("criteria", results.len())
        .candidates(results.len() as u64);
    Ok(if failed.is_empty() {
        report.verdict(Verdict::Pass)
    } else {
        report.verdict(Verdict::Fail).witness(format!("failed: {}", failed.join(", ")))
    })
}

fn validate(arg: &GroupoidArg) -> CliResult<CheckReport> {
    let report = CheckReport::new("validate").input("groupoid", &arg.groupoid);
    match resolve_groupoid(&arg.groupoid)? {
        Ok(g) => Ok(report
            .input("objects", g.object_count())
            .input("morphisms", g.morphism_count())
            .input("discrete", g.is_discrete())
            .input("abelian-union", g.is_disjoint_union_of_abelian_groups())
            .input("totally-disconnected", g.is_totally_disconnected())
            .verdict(Verdict::Pass)),
        Err(why) => Ok(report.verdict(Verdict::Fail).witness(why)),
    }
}

fn frobenius_check(arg: &GroupoidArg) -> CliResult<CheckReport> {
    let g = require_groupoid(&arg.groupoid)?;
    let d = frobenius_of_groupoid(&g);
    let violated = violated_axioms(&d);
    let round_trip = groupoid_from_frobenius(&d).map(|back| back.same_structure(&g));
    let report = CheckReport::new("frobenius-check")
        .input("groupoid", g.name())
        .input("commutative", is_commutative(&d));
    Ok(if violated.is_empty() && round_trip == Ok(true) {
        report.verdict(Verdict::Pass)
    } else {
        report.verdict(Verdict::Fail).witness(format!(
            "violated axioms: {violated:?}; round-trip: {round_trip:?}"
        ))
    })
}

fn broadcast(arg: &GroupoidArg, exhaustive_limit: usize) -> CliResult<CheckReport> {
    let g = require_groupoid(&arg.groupoid)?;
    let decision = decide_broadcastable(&g, exhaustive_limit);
    let report = CheckReport::new("broadcast")
        .input("groupoid", g.name())
        .input("exhaustive-limit", exhaustive_limit)
        .input("exhaustive", decision.exhaustive)
        .candidates(decision.nodes_examined);
    Ok(if decision.broadcastable {
        let map = decision.map.expect("positive decisions carry a map");
        report.verdict(Verdict::Pass).witness(format!("broadcasting map: {map}"))
    } else {
        report
            .verdict(Verdict::Fail)
            .witness(decision.refutation.expect("negative decisions carry a refutation"))
    })
}

fn copyables(arg: &GroupoidArg) -> CliResult<CheckReport> {
    let g = require_groupoid(&arg.groupoid)?;
    let states = copyable_states(&g);
    let rendered: Vec<String> = states
        .iter()
        .map(|s| format!("{{{}}}", join_labels(s.iter().map(|&m| g.label(m)))))
        .collect();
    Ok(CheckReport::new("copyables")
        .input("groupoid", g.name())
        .input("count", states.len())
        .verdict(Verdict::Pass)
        .witness(if rendered.is_empty() { "none".to_string() } else { rendered.join("; ") }))
}

fn witness(path: &PathBuf) -> CliResult<CheckReport> {
    let exp = specfile::product_state_from_json(&fs::read_to_string(path)?)?;
    let report = CheckReport::new("witness")
        .input("left", exp.left.name())
        .input("right", exp.right.name())
        .input("state-size", exp.state.size());
    match entanglement_witness(&exp.left, &exp.right, &exp.state) {
        Ok(Some(w)) => Ok(report
            .verdict(Verdict::Pass)
            .witness(format!("entangled: pair ({}, {}) lacks its identity marker", w.left, w.right))),
        Ok(None) => Ok(report
            .verdict(Verdict::Fail)
            .witness("no violating pair; the state decomposes over product states")),
        Err(e @ (CpError::Rel(_) | CpError::NotInverseRespecting(_))) => {
            Err(InputError(e.to_string()))
        }
        Err(e) => Err(InputError(e.to_string())),
    }
}

fn measure(path: &PathBuf) -> CliResult<CheckReport> {
    let exp = specfile::measurement_from_json(&fs::read_to_string(path)?)
        .map_err(|e| InputError(e.to_string()))?;
    let m = &exp.measurement;
    let agreement = m.channel() == m.channel_via_pairing();
    let causal = m.is_causal();
    let causal_agreement = causal == m.is_causal_structural();
    let report = CheckReport::new("measure")
        .input("groupoid", exp.parent.name())
        .input("parts", m.parts().len())
        .input("causal", causal)
        .input("channel-size", m.channel().size());
    Ok(if agreement && causal_agreement {
        report.verdict(Verdict::Pass)
    } else {
        report
            .verdict(Verdict::Fail)
            .witness("internal formulations disagree; this is a defect, please report it")
    })
}

fn load_subsystems(arg: &SubsystemsArg) -> CliResult<(String, Subsystem, Subsystem)> {
    match (&arg.subsystems, &arg.triple) {
        (Some(path), None) => {
            let exp = specfile::subsystems_from_json(&fs::read_to_string(path)?)?;
            Ok((exp.parent.name().to_string(), exp.left, exp.right))
        }
        (None, Some(name)) => {
            let t = catalog::triple_by_name(name).ok_or_else(|| {
                InputError(format!(
                    "unknown triple {name}; known: {}",
                    catalog::subsystem_triples()
                        .iter()
                        .map(|t| t.name)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
            let left = t.left().map_err(|e| InputError(e.to_string()))?;
            let right = t.right().map_err(|e| InputError(e.to_string()))?;
            Ok((t.name.to_string(), left, right))
        }
        _ => Err(InputError("give exactly one of --subsystems or --triple".into())),
    }
}

fn ki(arg: &SubsystemsArg) -> CliResult<CheckReport> {
    let (name, a, b) = load_subsystems(arg)?;
    let independent = kinematic_independence(&a, &b);
    let agree = independent == kinematic_independence_structural(&a, &b);
    let report = CheckReport::new("ki").input("pair", &name);
    Ok(match (independent && agree, agree) {
        (true, _) => report.verdict(Verdict::Pass),
        (false, true) => report
            .verdict(Verdict::Fail)
            .witness(ki_counterexample(&a, &b).unwrap_or_else(|| "subsystems do not commute".into())),
        (false, false) => report
            .verdict(Verdict::Fail)
            .witness("independence formulations disagree; this is a defect, please report it"),
    })
}

/// A concrete pair of morphisms breaking commutation, for the report.
fn ki_counterexample(a: &Subsystem, b: &Subsystem) -> Option<String> {
    let parent = a.parent();
    for i in 0..a.subgroupoid().to_groupoid().morphism_count() {
        for j in 0..b.subgroupoid().to_groupoid().morphism_count() {
            let (f, g) = (a.subgroupoid().parent_index(i), b.subgroupoid().parent_index(j));
            let fg = parent.compose(f, g);
            let gf = parent.compose(g, f);
            if fg != gf {
                return Some(format!(
                    "{} and {} compose to {:?} and {:?}",
                    parent.label(f),
                    parent.label(g),
                    fg.map(|k| parent.label(k).to_string()),
                    gf.map(|k| parent.label(k).to_string()),
                ));
            }
        }
    }
    None
}

fn format_ns_witness(w: &NsWitness) -> String {
    let parts: Vec<String> =
        w.parts.iter().map(|p| format!("{{{}}}", join_labels(p.iter()))).collect();
    format!(
        "measuring the {} side with parts {} maps {} to [{}]",
        if w.measured_first { "first" } else { "second" },
        parts.join(" "),
        w.state,
        join_labels(w.image.iter()),
    )
}

fn ns(arg: &SubsystemsArg, no_causal: bool) -> CliResult<CheckReport> {
    let (name, a, b) = load_subsystems(arg)?;
    let scope = if no_causal { FamilyScope::All } else { FamilyScope::Causal };
    let outcome = no_signalling(&a, &b, scope);
    let report = CheckReport::new("ns")
        .input("pair", &name)
        .input("families", if no_causal { "all" } else { "causal" })
        .candidates(outcome.families_checked);
    Ok(match outcome.witness {
        None if outcome.holds => report.verdict(Verdict::Pass),
        Some(w) => report.verdict(Verdict::Fail).witness(format_ns_witness(&w)),
        None => report.verdict(Verdict::Fail).witness("violated without recorded witness"),
    })
}

fn load_protocol(path: Option<&std::path::Path>) -> CliResult<BitCommitmentProtocol> {
    match path {
        None => Ok(builtin_protocol()),
        Some(p) => Ok(specfile::protocol_from_json(&fs::read_to_string(p)?)?),
    }
}

fn bitcommit(
    protocol: Option<&std::path::Path>,
    adversary: Option<AdversaryArg>,
    budget: u64,
) -> CliResult<CheckReport> {
    let p = load_protocol(protocol)?;
    let report = CheckReport::new("bitcommit")
        .input("alice", p.alice().name())
        .input("bob", p.bob().name())
        .input("budget", budget);
    if let Some(class) = adversary {
        let class = class.class();
        let outcome = p.check_binding(class, budget);
        let report = report
            .input("adversary", class.name())
            .candidates(outcome.nodes_examined);
        return Ok(match outcome.verdict {
            BindingVerdict::Binding { refutation } => {
                report.verdict(Verdict::Pass).witness(refutation)
            }
            BindingVerdict::CheatFound { direction, cheat } => report
                .verdict(Verdict::Fail)
                .witness(format!("cheat ({direction:?}, {} pairs): {cheat}", cheat.size())),
            BindingVerdict::Inconclusive { budget } => report
                .verdict(Verdict::Inconclusive)
                .witness(format!("search exceeded its budget of {budget} nodes")),
        });
    }
    let secure = p.check_secure(budget);
    let mut lines = Vec::new();
    lines.push(format!("sound: {}", secure.sound.sound));
    lines.push(format!("concealing: {}", secure.concealing.concealing));
    let mut nodes = 0;
    let mut verdict = if secure.sound.sound && secure.concealing.concealing {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    for (class, outcome) in &secure.bindings {
        nodes += outcome.nodes_examined;
        let line = match &outcome.verdict {
            BindingVerdict::Binding { .. } => "binding".to_string(),
            BindingVerdict::CheatFound { cheat, .. } => {
                format!("cheat with {} pairs", cheat.size())
            }
            BindingVerdict::Inconclusive { .. } => "inconclusive".to_string(),
        };
        lines.push(format!("{}: {line}", class.name()));
        if *class != AdversaryClass::AllCpMorphisms {
            match outcome.verdict {
                BindingVerdict::Binding { .. } => {}
                BindingVerdict::Inconclusive { .. } => {
                    if verdict == Verdict::Pass {
                        verdict = Verdict::Inconclusive;
                    }
                }
                BindingVerdict::CheatFound { .. } => verdict = Verdict::Fail,
            }
        }
    }
    Ok(report.verdict(verdict).witness(lines.join("; ")).candidates(nodes))
}

fn fhilb_verify(
    structure: StructureArg,
    dim: usize,
    trials: usize,
    tol: f64,
    seed: u64,
) -> CliResult<CheckReport> {
    if dim == 0 {
        return Err(InputError("dimension must be at least one".into()));
    }
    let (name, s) = match structure {
        StructureArg::Diagonal => ("diagonal", diagonal_structure(dim)),
        StructureArg::Matrix => ("matrix-algebra", matrix_algebra_structure(dim)),
    };
    let report = CheckReport::new("fhilb-verify")
        .input("structure", name)
        .input("dim", dim)
        .input("trials", trials)
        .input("tol", tol)
        .input("seed", seed)
        .candidates(trials as u64);
    Ok(match verify_commutative_broadcast(&s, trials, tol, seed) {
        Ok(r) => report.verdict(Verdict::Pass).witness(format!(
            "max marginal deviation {:.3e} over {} trials",
            r.max_marginal_error, r.trials
        )),
        Err(e @ FhilbError::NotCommutative { .. }) => {
            report.verdict(Verdict::Fail).witness(e.to_string())
        }
        Err(e) => report.verdict(Verdict::Fail).witness(e.to_string()),
    })
}
