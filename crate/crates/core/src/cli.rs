//! Command-line front end. Every subcommand produces a [`RunReport`],
//! printed as JSON (or as a short text summary with `--pretty`).
//!
//! Exit codes: 0 success or property holds, 1 property violated or nothing
//! found, 2 input error, 3 budget refusal.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::axioms::{self, AxiomReport, Verdict, Witness};
use crate::gav::TieBreakMode;
use crate::instances::{self, GeneratorParams, Lemma, LemmaParams, Plant};
use crate::model::{Election, ElectionFile};
use crate::rules::{select, RuleId, SelectOptions, SelectionResult};
use crate::score::Score;
use crate::solvers::{self, binomial, Budget, BudgetError, HeuristicResult, SearchReport, SetCoverInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "attrvote", version, about = "Committee selection from attribute-approval ballots")]
pub struct Cli {
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Cap on worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a voting rule on an election file.
    Select(SelectArgs),
    /// Check a committee against a representation property.
    Verify(VerifyArgs),
    /// Exhaustive or constructive committee search.
    Search(SearchArgs),
    /// Generate a seeded random election.
    Gen(GenArgs),
    /// Metamorphic property harness for a rule.
    Axioms(AxiomsArgs),
    /// Build an election from a set-cover instance.
    Reduce(ReduceArgs),
    /// Write one of the fixed counterexample constructions.
    Lemma(LemmaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreakArg {
    ByIndex,
    StrongUnanimity,
}

impl From<TieBreakArg> for TieBreakMode {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::ByIndex => TieBreakMode::ByIndex,
            TieBreakArg::StrongUnanimity => TieBreakMode::StrongUnanimity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyArg {
    WeakUnanimity,
    StrongUnanimity,
    Sjr,
    Cjr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveArg {
    MaxAvJustified,
    CjrExists,
    PavOpt,
    MavOpt,
    CjrProduct,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetArg {
    Cjr,
    MaxAvJustified,
}

#[derive(Args, Debug, Serialize)]
pub struct SelectArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long)]
    pub rule: RuleId,
    #[arg(long, value_enum, default_value = "by-index")]
    pub tie_break: TieBreakArg,
    #[arg(long, default_value_t = solvers::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Comma-separated candidate ids.
    #[arg(long, value_delimiter = ',', required = true)]
    pub committee: Vec<String>,
    #[arg(long, value_enum)]
    pub property: PropertyArg,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    /// Decision threshold for max-av-justified, e.g. `18` or `37/2`.
    #[arg(long)]
    pub tau: Option<Score>,
    #[arg(long, default_value_t = solvers::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub voters: usize,
    #[arg(long)]
    pub candidates: usize,
    #[arg(long)]
    pub dims: usize,
    #[arg(long)]
    pub domain_size: usize,
    #[arg(long)]
    pub approval_prob: f64,
    #[arg(long)]
    pub k: usize,
    /// Add one held value to every ballot.
    #[arg(long, group = "plant")]
    pub plant_unanimous: bool,
    /// Add one held value per dimension to every ballot.
    #[arg(long, group = "plant")]
    pub plant_unanimous_every_dimension: bool,
    /// Reduce ⌈n/k⌉ voters to approving one shared value.
    #[arg(long, group = "plant")]
    pub plant_bloc: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct AxiomsArgs {
    #[arg(long)]
    pub rule: RuleId,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long, default_value_t = solvers::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ReduceArgs {
    /// Set-cover JSON: {"universe": n, "subsets": [[...], ...], "budget": k'}.
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub target: TargetArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Solve both sides exhaustively and compare.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = solvers::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct LemmaArgs {
    #[arg(long)]
    pub which: Lemma,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub set_cover: bool,
    pub election: bool,
    pub agreement: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Selection {
        result: SelectionResult,
        committee_ids: Vec<String>,
    },
    Verdict {
        property: PropertyArg,
        committee_ids: Vec<String>,
        verdict: Verdict,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness_voter_ids: Option<Vec<String>>,
    },
    Search {
        report: SearchReport,
    },
    Heuristic {
        result: HeuristicResult,
        committee_ids: Vec<String>,
    },
    Election {
        digest: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
        n: usize,
        m: usize,
        d: usize,
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        election: Option<ElectionFile>,
    },
    Axioms {
        report: AxiomReport,
        /// Every reported counterexample was replayed and confirmed.
        revalidated: bool,
    },
    Reduction {
        target: TargetArg,
        k: usize,
        d: usize,
        digest: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
        n: usize,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau: Option<Score>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        election: Option<ElectionFile>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        check: Option<ReductionCheck>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub subcommand: String,
    /// SHA-256 of the input file bytes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub parameters: serde_json::Value,
    pub payload: Payload,
    pub wall_time_us: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

impl From<axioms::AxiomError> for CliError {
    fn from(e: axioms::AxiomError) -> Self {
        match e {
            axioms::AxiomError::Budget(b) => CliError::Budget(b),
            other => input_err(other),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub exit_code: i32,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let bytes = fs::read(path).map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    let digest = sha256_hex(&bytes);
    Ok((bytes, digest))
}

/// Reads, parses and validates an election file.
pub fn load_election(path: &Path) -> Result<(Election, String), CliError> {
    let (bytes, digest) = read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| input_err(format!("{} is not UTF-8", path.display())))?;
    let file = ElectionFile::from_json(&text).map_err(|e| input_err(format!("parse error in {}: {e}", path.display())))?;
    let election = Election::from_file(&file).map_err(|e| input_err(format!("invalid election {}: {e}", path.display())))?;
    Ok((election, digest))
}

/// Writes the canonical serialization and returns its digest.
fn write_election(file: &ElectionFile, path: Option<&Path>) -> Result<String, CliError> {
    let text = file.to_json();
    if let Some(path) = path {
        fs::write(path, &text).map_err(|e| input_err(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(sha256_hex(text.as_bytes()))
}

fn election_payload(e: &Election, path: Option<&Path>) -> Result<Payload, CliError> {
    let file = e.to_file();
    let digest = write_election(&file, path)?;
    Ok(Payload::Election {
        digest,
        path: path.map(Path::to_path_buf),
        n: e.n(),
        m: e.m(),
        d: e.d(),
        k: e.k(),
        election: path.is_none().then_some(file),
    })
}

struct Step {
    subcommand: &'static str,
    input_digest: Option<String>,
    parameters: serde_json::Value,
    payload: Payload,
    exit_code: i32,
}

fn params<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn run_select(a: &SelectArgs) -> Result<Step, CliError> {
    let (e, digest) = load_election(&a.input)?;
    let opts = SelectOptions { budget: Budget::new(a.budget), tie_break: a.tie_break.into() };
    let result = select(a.rule, &e, &opts)?;
    let committee_ids = e.committee_ids(&result.committee);
    Ok(Step { subcommand: "select", input_digest: Some(digest), parameters: params(a), payload: Payload::Selection { result, committee_ids }, exit_code: EXIT_OK })
}

fn run_verify(a: &VerifyArgs) -> Result<Step, CliError> {
    let (e, digest) = load_election(&a.input)?;
    let w = e.committee_from_ids(&a.committee).map_err(input_err)?;
    let verdict = match a.property {
        PropertyArg::WeakUnanimity => axioms::check_weak_unanimity(&e, &w),
        PropertyArg::StrongUnanimity => axioms::check_strong_unanimity(&e, &w),
        PropertyArg::Sjr => axioms::check_sjr(&e, &w),
        PropertyArg::Cjr => axioms::check_cjr(&e, &w),
    };
    let witness_voter_ids = match &verdict.witness {
        Some(Witness::UnrepresentedGroup { voters, .. }) => Some(voters.iter().map(|&v| e.ballot(v).id.clone()).collect()),
        _ => None,
    };
    let exit_code = if verdict.holds { EXIT_OK } else { EXIT_VIOLATED };
    Ok(Step {
        subcommand: "verify",
        input_digest: Some(digest),
        parameters: params(a),
        payload: Payload::Verdict { property: a.property, committee_ids: e.committee_ids(&w), verdict, witness_voter_ids },
        exit_code,
    })
}

fn run_search(a: &SearchArgs) -> Result<Step, CliError> {
    let (e, digest) = load_election(&a.input)?;
    let budget = Budget::new(a.budget);
    if a.tau.is_some() && a.objective != ObjectiveArg::MaxAvJustified {
        return Err(input_err("--tau only applies to max-av-justified"));
    }
    let exhaustive = |r: SelectionResult, name: &str| {
        SearchReport::new(name, &e, Some(r.committee), Some(r.objective), binomial(e.m(), e.k()) as u64, true)
    };
    let (payload, found) = match a.objective {
        ObjectiveArg::MaxAvJustified => {
            let r = solvers::max_av_justified(&e, a.tau.as_ref(), budget)?;
            let found = r.decision != Some(false);
            (Payload::Search { report: r }, found)
        }
        ObjectiveArg::CjrExists => {
            let r = solvers::cjr_exists(&e, budget)?;
            let found = r.decision == Some(true);
            (Payload::Search { report: r }, found)
        }
        ObjectiveArg::PavOpt => (Payload::Search { report: exhaustive(solvers::pav_exact(&e, budget)?, "pav") }, true),
        ObjectiveArg::MavOpt => (Payload::Search { report: exhaustive(solvers::mav_exact(&e, budget)?, "mav") }, true),
        ObjectiveArg::CjrProduct => {
            let r = solvers::cjr_product_construction(&e);
            let found = r.decision == Some(true);
            (Payload::Search { report: r }, found)
        }
        ObjectiveArg::Heuristic => {
            let result = solvers::justified_av_heuristic(&e);
            let committee_ids = e.committee_ids(&result.committee);
            (Payload::Heuristic { result, committee_ids }, true)
        }
    };
    let exit_code = if found { EXIT_OK } else { EXIT_VIOLATED };
    Ok(Step { subcommand: "search", input_digest: Some(digest), parameters: params(a), payload, exit_code })
}

fn run_gen(a: &GenArgs) -> Result<Step, CliError> {
    let plant = if a.plant_unanimous {
        Plant::Unanimous
    } else if a.plant_unanimous_every_dimension {
        Plant::UnanimousEveryDimension
    } else if a.plant_bloc {
        Plant::Bloc
    } else {
        Plant::None
    };
    let gp = GeneratorParams {
        seed: a.seed,
        voters: a.voters,
        candidates: a.candidates,
        dims: a.dims,
        domain_size: a.domain_size,
        approval_prob: a.approval_prob,
        k: a.k,
        plant,
    };
    let e = instances::generate_random(&gp).map_err(input_err)?;
    let payload = election_payload(&e, a.output.as_deref())?;
    Ok(Step { subcommand: "gen", input_digest: None, parameters: params(a), payload, exit_code: EXIT_OK })
}

fn run_axioms(a: &AxiomsArgs) -> Result<Step, CliError> {
    if a.trials == 0 {
        return Err(input_err("--trials must be at least 1"));
    }
    if a.k_max == 0 {
        return Err(input_err("--k-max must be at least 1"));
    }
    let opts = SelectOptions { budget: Budget::new(a.budget), ..Default::default() };
    let report = axioms::run_axiom_suite(a.rule, a.trials, a.seed, a.k_max, &opts)?;
    let mut revalidated = true;
    let mut violated = false;
    for tally in &report.properties {
        violated |= tally.violations > 0;
        if let Some(c) = &tally.counterexample {
            let e = Election::from_file(&c.election).map_err(input_err)?;
            revalidated &= axioms::revalidate(a.rule, &e, &c.witness, &opts)?;
        }
    }
    let exit_code = if violated { EXIT_VIOLATED } else { EXIT_OK };
    Ok(Step { subcommand: "axioms", input_digest: None, parameters: params(a), payload: Payload::Axioms { report, revalidated }, exit_code })
}

fn run_reduce(a: &ReduceArgs) -> Result<Step, CliError> {
    let (bytes, digest) = read(&a.input)?;
    let text = String::from_utf8(bytes).map_err(|_| input_err("set-cover file is not UTF-8"))?;
    let inst = SetCoverInstance::from_json(&text).map_err(input_err)?;
    let budget = Budget::new(a.budget);
    let (e, tau) = match a.target {
        TargetArg::Cjr => {
            if a.d != 2 {
                return Err(input_err("the CJR reduction builds d = 2 elections"));
            }
            (solvers::reduce_setcover_to_cjr(&inst, a.k).map_err(input_err)?, None)
        }
        TargetArg::MaxAvJustified => {
            let (e, tau) = solvers::reduce_setcover_to_max_av_justified(&inst, a.k, a.d).map_err(input_err)?;
            (e, Some(tau))
        }
    };
    let check = if a.check {
        // Both reductions fix the set-cover budget at k.
        let at_k = SetCoverInstance { budget: a.k, ..inst.clone() };
        let set_cover = solvers::solve_set_cover(&at_k).map_err(input_err)?.covers;
        let election = match a.target {
            TargetArg::Cjr => solvers::cjr_exists(&e, budget)?.decision,
            TargetArg::MaxAvJustified => solvers::max_av_justified(&e, tau.as_ref(), budget)?.decision,
        } == Some(true);
        Some(ReductionCheck { set_cover, election, agreement: set_cover == election })
    } else {
        None
    };
    let file = e.to_file();
    let out_digest = write_election(&file, a.output.as_deref())?;
    let exit_code = if check.as_ref().is_some_and(|c| !c.agreement) { EXIT_VIOLATED } else { EXIT_OK };
    let payload = Payload::Reduction {
        target: a.target,
        k: a.k,
        d: e.d(),
        digest: out_digest,
        path: a.output.clone(),
        n: e.n(),
        m: e.m(),
        tau,
        election: a.output.is_none().then_some(file),
        check,
    };
    Ok(Step { subcommand: "reduce", input_digest: Some(digest), parameters: params(a), payload, exit_code })
}

fn run_lemma(a: &LemmaArgs) -> Result<Step, CliError> {
    let e = instances::lemma_instance(a.which, &LemmaParams { n: a.n, m: a.m, k: a.k, d: a.d }).map_err(input_err)?;
    let payload = election_payload(&e, a.output.as_deref())?;
    Ok(Step { subcommand: "lemma", input_digest: None, parameters: params(a), payload, exit_code: EXIT_OK })
}

fn dispatch(command: &Command) -> Result<Step, CliError> {
    match command {
        Command::Select(a) => run_select(a),
        Command::Verify(a) => run_verify(a),
        Command::Search(a) => run_search(a),
        Command::Gen(a) => run_gen(a),
        Command::Axioms(a) => run_axioms(a),
        Command::Reduce(a) => run_reduce(a),
        Command::Lemma(a) => run_lemma(a),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let step = match cli.threads {
        Some(0) => return Err(input_err("--threads must be at least 1")),
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(input_err)?.install(|| dispatch(&cli.command))?,
        None => dispatch(&cli.command)?,
    };
    let report = RunReport {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema: REPORT_SCHEMA,
        subcommand: step.subcommand.into(),
        input_digest: step.input_digest,
        parameters: step.parameters,
        payload: step.payload,
        wall_time_us: start.elapsed().as_micros() as u64,
    };
    Ok(Outcome { report, exit_code: step.exit_code })
}

fn ids(list: &[String]) -> String {
    format!("{{{}}}", list.join(", "))
}

/// Short text rendering for `--pretty`.
pub fn render_pretty(report: &RunReport) -> String {
    let mut out = format!("{} {} {}\n", report.tool, report.version, report.subcommand);
    if let Some(d) = &report.input_digest {
        out += &format!("input sha256  {d}\n");
    }
    match &report.payload {
        Payload::Selection { result, committee_ids } => {
            out += &format!("rule          {}\ncommittee     {}\nobjective     {}\n", result.rule, ids(committee_ids), result.objective);
            for s in &result.trace {
                out += &format!("  stage {:>3}  chosen {:?}  score {}\n", s.stage, s.chosen.iter().map(|c| c + 1).collect::<Vec<_>>(), s.score);
            }
        }
        Payload::Verdict { property, committee_ids, verdict, witness_voter_ids } => {
            out += &format!("property      {property:?}\ncommittee     {}\nholds         {}\n", ids(committee_ids), verdict.holds);
            if verdict.vacuous {
                out += "              (vacuously)\n";
            }
            if let Some(w) = witness_voter_ids {
                out += &format!("witness       {} voters: {}\n", w.len(), w.join(" "));
            } else if let Some(w) = &verdict.witness {
                out += &format!("witness       {}\n", serde_json::to_string(w).unwrap_or_default());
            }
        }
        Payload::Search { report: r } => {
            out += &format!("objective     {}\nexamined      {} (exhausted: {})\n", r.objective, r.examined, r.exhausted);
            match &r.best_ids {
                Some(b) => out += &format!("best          {}\n", ids(b)),
                None => out += "best          none\n",
            }
            if let Some(v) = &r.best_value {
                out += &format!("value         {v}\n");
            }
            if let Some(t) = &r.tau {
                out += &format!("tau           {t}\n");
            }
            if let Some(dec) = r.decision {
                out += &format!("decision      {}\n", if dec { "yes" } else { "no" });
            }
            if let Some(n) = &r.note {
                out += &format!("note          {n}\n");
            }
        }
        Payload::Heuristic { result, committee_ids } => {
            out += &format!(
                "committee     {}\nav score      {}\nseed score    {}\nswaps         {}\n",
                ids(committee_ids),
                result.objective,
                result.seed_objective,
                result.swaps
            );
        }
        Payload::Election { digest, path, n, m, d, k, .. } => {
            out += &format!("n={n} m={m} d={d} k={k}\nsha256        {digest}\n");
            if let Some(p) = path {
                out += &format!("written to    {}\n", p.display());
            }
        }
        Payload::Axioms { report: r, revalidated } => {
            out += &format!("rule {}  trials {}  seed {}  k_max {}\n", r.rule, r.trials, r.seed, r.k_max);
            out += &format!("{:<24} {:>8} {:>8} {:>10}\n", "property", "checked", "vacuous", "violations");
            for t in &r.properties {
                out += &format!("{:<24} {:>8} {:>8} {:>10}\n", format!("{:?}", t.property), t.checked, t.vacuous, t.violations);
            }
            out += &format!("witnesses revalidated: {revalidated}\n");
        }
        Payload::Reduction { target, k, d, digest, path, n, m, tau, check, .. } => {
            out += &format!("target {target:?}  k={k} d={d}  n={n} m={m}\nsha256        {digest}\n");
            if let Some(t) = tau {
                out += &format!("tau           {t}\n");
            }
            if let Some(p) = path {
                out += &format!("written to    {}\n", p.display());
            }
            if let Some(c) = check {
                out += &format!(
                    "set cover: {}  election: {}  agreement: {}\n",
                    c.set_cover,
                    c.election,
                    if c.agreement { "yes" } else { "no" }
                );
            }
        }
    }
    out += &format!("wall time     {} us\n", report.wall_time_us);
    out
}

/// Parses `args`, runs the subcommand, prints the report and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let text = if cli.pretty {
                render_pretty(&outcome.report)
            } else {
                serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n"
            };
            // A closed pipe downstream is not an error for us.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
