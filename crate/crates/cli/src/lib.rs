//! Command implementations for the `ptight` binary.
//!
//! Every command returns its report as text plus an exit code, so the
//! commands can be tested without spawning a process. Exit codes are 0 for
//! success, 1 for a semantic failure (incoherence, unsound envelope) and 2 for
//! bad input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use clap::{Parser, Subcommand};
use ptight::coherence::{Coherence, CoherenceError, IntervalAssessment};
use ptight::engine::{Derivation, EngineError, KnowledgeBase, Plan, QueryAnswer, QueryOptions, Status, Step, DEFAULT_DEPTH};
use ptight::kbfile::KbDocument;
use ptight::logic::{ConditionalEvent, Formula, DEFAULT_ATOM_LIMIT};
use ptight::oracle::{self, EnvelopeReport, OracleError};
use ptight::par::Execution;
use ptight::rational::{self, one, parse_rational};
use ptight::rules::{self, ProbInterval, RuleId};
use ptight::Rational;

/// Environment variable overriding the atom limit.
pub const ATOM_LIMIT_VAR: &str = "PTIGHT_ATOM_LIMIT";

/// Significant digits in decimal renderings.
const SIG: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "ptight", version, about = "Exact interval reasoning over conditional knowledge bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report g-coherence of the asserted intervals and strict p-consistency
    /// of the conditionals.
    Check { kb: PathBuf },
    /// Bound a conditional event by rule chaining, and optionally by LP.
    Query {
        kb: PathBuf,
        /// Target such as `!noisy given linda | steve`.
        conditional: String,
        /// Saturation rounds.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Also compute the LP-tight interval.
        #[arg(long)]
        tight: bool,
        /// Print the derivation tree.
        #[arg(long)]
        trace: bool,
        /// Emit the full answer as JSON.
        #[arg(long)]
        json: bool,
        /// Replay a given derivation, e.g. `Or(Cut(3, 4), Cut(3, 2))`,
        /// instead of searching.
        #[arg(long, value_name = "PLAN")]
        via: Option<String>,
        /// Compare the answer with a claimed ε.
        #[arg(long, value_name = "EPS")]
        claim_eps: Option<String>,
    },
    /// Apply one rule's interval form to premise intervals.
    Propagate {
        rule: RuleId,
        /// Intervals `[lo, hi]` or single values, in premise order.
        premises: Vec<String>,
        /// RW: premise consequent; LLE: premise antecedent.
        #[arg(long, value_name = "FORMULA")]
        from: Option<String>,
        /// RW: weakened consequent; LLE: equivalent antecedent.
        #[arg(long, value_name = "FORMULA")]
        to: Option<String>,
    },
    /// CSV of exact versus additive ε growth under repeated application.
    Degrade {
        /// Comma-separated rules with an ε-form: and, cm, or, cut.
        rules: String,
        e1: String,
        e2: String,
        /// Step k combines the step k−1 result with `e2` again.
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Check a rule's envelope against sampled world distributions.
    Verify {
        rule: RuleId,
        /// Point values, or `[lo, hi]` intervals for a box sweep.
        premises: Vec<String>,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Disable the rayon sweep.
        #[arg(long)]
        sequential: bool,
    },
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    /// Exit 2.
    Input(anyhow::Error),
    /// Exit 1.
    Semantic(anyhow::Error),
}

type Outcome = Result<Output, Failure>;

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Coherence(c) => c.into(),
            EngineError::InconsistentDuplicate(_) | EngineError::Incoherent { .. } => Failure::Semantic(e.into()),
            EngineError::Logic(_) | EngineError::Plan(_) => Failure::Input(e.into()),
        }
    }
}

impl From<CoherenceError> for Failure {
    fn from(e: CoherenceError) -> Self {
        match e {
            CoherenceError::Incoherent | CoherenceError::InconsistentKb => Failure::Semantic(e.into()),
            _ => Failure::Input(e.into()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Input(e.into())
    }
}

fn ok(stdout: String) -> Outcome {
    Ok(Output {
        stdout,
        stderr: String::new(),
        code: 0,
    })
}

/// Atom limit from [`ATOM_LIMIT_VAR`], if set.
pub fn atom_limit_from_env() -> Result<usize, String> {
    match std::env::var(ATOM_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("{ATOM_LIMIT_VAR} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_ATOM_LIMIT),
    }
}

pub fn run(cli: Cli) -> Output {
    match atom_limit_from_env() {
        Ok(limit) => run_with_limit(cli, limit),
        Err(message) => Output {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: 2,
        },
    }
}

pub fn run_with_limit(cli: Cli, atom_limit: usize) -> Output {
    let result = match cli.command {
        Command::Check { kb } => check(&kb, atom_limit),
        Command::Query {
            kb,
            conditional,
            depth,
            tight,
            trace,
            json,
            via,
            claim_eps,
        } => query(
            &kb,
            atom_limit,
            &QueryRequest {
                conditional,
                depth,
                tight,
                trace,
                json,
                via,
                claim_eps,
            },
        ),
        Command::Propagate { rule, premises, from, to } => propagate(rule, &premises, from.as_deref(), to.as_deref()),
        Command::Degrade { rules, e1, e2, steps } => degrade(&rules, &e1, &e2, steps),
        Command::Verify {
            rule,
            premises,
            grid,
            seed,
            json,
            sequential,
        } => {
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            verify(rule, &premises, grid, seed, json, exec)
        }
    };
    match result {
        Ok(out) => out,
        Err(Failure::Input(e)) => Output {
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
            code: 2,
        },
        Err(Failure::Semantic(e)) => Output {
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
            code: 1,
        },
    }
}

fn load(path: &Path, atom_limit: usize) -> Result<(KbDocument, KnowledgeBase), Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(input)?;
    let doc = KbDocument::parse(&text).map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
    let kb = doc.to_knowledge_base(atom_limit)?;
    Ok((doc, kb))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(path: &Path, atom_limit: usize) -> Outcome {
    let (doc, _) = load(path, atom_limit)?;
    let assertions = doc.assertions();
    let checker = Coherence::new(atom_limit);
    let events: Vec<ConditionalEvent> = assertions.iter().map(|(e, _)| e.clone()).collect();
    let (g, p) = if events.is_empty() {
        (true, true)
    } else {
        (
            checker.check_gcoherence(&IntervalAssessment::from_pairs(assertions))?,
            checker.strict_p_consistency(&events)?,
        )
    };
    Ok(Output {
        stdout: format!("g-coherent: {}; p-consistent: {}\n", yes(g), yes(p)),
        stderr: String::new(),
        code: if g && p { 0 } else { 1 },
    })
}

struct QueryRequest {
    conditional: String,
    depth: usize,
    tight: bool,
    trace: bool,
    json: bool,
    via: Option<String>,
    claim_eps: Option<String>,
}

fn eps_text(e: &Rational) -> String {
    rational::to_decimal(e, SIG)
}

/// Explains a claimed ε that the answer does not support.
fn claim_note(claimed: &Rational, answer: &QueryAnswer) -> String {
    let derived = answer.chained.eps();
    if *claimed >= derived {
        return format!("note: claimed ε {} is consistent with the derived ε {}", eps_text(claimed), eps_text(&derived));
    }
    let mut note = format!("note: claimed ε {} is inconsistent with the derived ε {}", eps_text(claimed), eps_text(&derived));
    if let Some(Derivation {
        step: Step::Rule { rule, premises },
        ..
    }) = &answer.trace
    {
        if let [p1, p2] = premises.as_slice() {
            if let Ok(e3) = rule.eps(&p1.interval.eps(), &p2.interval.eps()) {
                let _ = write!(
                    note,
                    ": the {} ε-form gives {}({}, {}) = {}",
                    rule.title(),
                    rule.title(),
                    eps_text(&p1.interval.eps()),
                    eps_text(&p2.interval.eps()),
                    eps_text(&e3)
                );
            }
        }
    }
    if let Some(t) = &answer.tight {
        if t.eps() > *claimed {
            let _ = write!(note, "; the LP-tight ε is {}, so the claim is not entailed", eps_text(&t.eps()));
        }
    }
    note.push('\n');
    note
}

fn query(path: &Path, atom_limit: usize, req: &QueryRequest) -> Outcome {
    let (_, kb) = load(path, atom_limit)?;
    let target: ConditionalEvent = req.conditional.parse().map_err(|e| input(anyhow!("target `{}`: {e}", req.conditional)))?;
    let claimed = req
        .claim_eps
        .as_deref()
        .map(|c| parse_probability(c).context("--claim-eps"))
        .transpose()
        .map_err(input)?;

    let mut answer = match &req.via {
        Some(plan) => {
            let plan: Plan = plan.parse().map_err(input)?;
            let d = kb.replay(&plan, &target)?;
            QueryAnswer {
                target: target.clone(),
                chained: d.interval.clone(),
                tight: None,
                trace: Some(d),
                status: Status::ChainedOnly,
            }
        }
        None => kb.query(
            &target,
            &QueryOptions {
                depth: req.depth,
                compute_tight: false,
            },
        )?,
    };
    if req.tight {
        let t = kb.tight(&target)?;
        answer.status = if t == answer.chained { Status::Exact } else { Status::ChainedOnly };
        answer.tight = Some(t);
    }
    let note = claimed.map(|c| claim_note(&c, &answer)).unwrap_or_default();

    if req.json {
        let json = serde_json::to_string_pretty(&answer).map_err(input)?;
        return Ok(Output {
            stdout: json + "\n",
            stderr: note,
            code: 0,
        });
    }

    let mut out = String::new();
    let _ = writeln!(out, "{}", answer.target);
    let _ = writeln!(out, "  chained: {}  (ε {})", answer.chained.display_both(), eps_text(&answer.chained.eps()));
    match &answer.trace {
        Some(d) => {
            let _ = writeln!(out, "  derivation: {}", d.shape());
        }
        None => out.push_str("  derivation: none\n"),
    }
    if let Some(t) = &answer.tight {
        let status = match answer.status {
            Status::Exact => "exact",
            Status::ChainedOnly => "chained bound is not tight",
        };
        let _ = writeln!(out, "  tight:   {}  (ε {}; {status})", t.display_both(), eps_text(&t.eps()));
    }
    if req.trace {
        if let Some(d) = &answer.trace {
            out.push('\n');
            let _ = write!(out, "{d}");
        }
    }
    out.push_str(&note);
    ok(out)
}

fn parse_probability(text: &str) -> anyhow::Result<Rational> {
    let r = parse_rational(text.trim()).map_err(|e| anyhow!("`{text}`: {e}"))?;
    if !rational::is_probability(&r) {
        return Err(anyhow!("`{text}` is outside [0, 1]"));
    }
    Ok(r)
}

/// `[lo, hi]` or a single value.
pub fn parse_interval(text: &str) -> anyhow::Result<ProbInterval> {
    let t = text.trim();
    match t.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        Some(inner) => {
            let (lo, hi) = inner.split_once(',').ok_or_else(|| anyhow!("`{text}`: expected `[lo, hi]`"))?;
            Ok(ProbInterval::new(parse_probability(lo)?, parse_probability(hi)?).map_err(|e| anyhow!("`{text}`: {e}"))?)
        }
        None => Ok(ProbInterval::point(parse_probability(t)?)?),
    }
}

fn parse_formula(flag: &str, text: Option<&str>) -> anyhow::Result<Formula> {
    let text = text.ok_or_else(|| anyhow!("{flag} is required together with the other formula flag"))?;
    text.parse().map_err(|e| anyhow!("{flag} `{text}`: {e}"))
}

fn propagate(rule: RuleId, premises: &[String], from: Option<&str>, to: Option<&str>) -> Outcome {
    let intervals = premises.iter().map(|p| parse_interval(p)).collect::<anyhow::Result<Vec<_>>>().map_err(input)?;
    let result = match (rule, from.is_some() || to.is_some()) {
        (RuleId::Rw | RuleId::Lle, true) => {
            let [i1] = intervals.as_slice() else {
                return Err(input(anyhow!("{} takes 1 premise, got {}", rule.title(), intervals.len())));
            };
            let (f, g) = (parse_formula("--from", from).map_err(input)?, parse_formula("--to", to).map_err(input)?);
            match rule {
                RuleId::Rw => rules::rw_rule(i1, &f, &g),
                _ => rules::lle_rule(i1, &f, &g),
            }
        }
        (_, true) => return Err(input(anyhow!("--from/--to only apply to rw and lle"))),
        (_, false) => rule.propagate(&intervals),
    }
    .map_err(input)?;
    let shown: Vec<String> = intervals.iter().map(|i| format!("[{}, {}]", rational::to_literal(i.lo()), rational::to_literal(i.hi()))).collect();
    let side = match (from, to) {
        (Some(f), Some(t)) => format!(" from `{f}` to `{t}`"),
        _ => String::new(),
    };
    ok(format!("{} {}{side}\n  = {}\n", rule.name(), shown.join(" "), result.display_both()))
}

fn degrade(rule_list: &str, e1: &str, e2: &str, steps: usize) -> Outcome {
    let rules = rule_list
        .split(',')
        .map(|r| r.trim().parse::<RuleId>().map_err(|e| anyhow!(e)))
        .collect::<anyhow::Result<Vec<_>>>()
        .map_err(input)?;
    let e1 = parse_probability(e1).map_err(input)?;
    let e2 = parse_probability(e2).map_err(input)?;
    if e1 >= one() || e2 >= one() {
        return Err(input(anyhow!("ε values must be below 1")));
    }
    if steps == 0 {
        return Err(input(anyhow!("--steps must be at least 1")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, row: [String; 5]| w.write_record(row).map_err(input);
    write(&mut w, ["rule", "step", "eps3_exact", "eps3_naive", "difference"].map(String::from))?;
    for rule in rules {
        let (mut exact, mut naive) = (e1.clone(), e1.clone());
        for step in 1..=steps {
            exact = rule.eps(&exact, &e2).map_err(input)?;
            naive = (naive + &e2).min(one());
            let diff = &naive - &exact;
            write(
                &mut w,
                [rule.name().to_string(), step.to_string(), eps_text(&exact), eps_text(&naive), eps_text(&diff)],
            )?;
        }
    }
    let bytes = w.into_inner().map_err(|e| input(anyhow!("{e}")))?;
    ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn render_report(rep: &EnvelopeReport, grid: usize) -> String {
    let inputs: Vec<String> = rep
        .inputs
        .iter()
        .map(|i| if i.lo() == i.hi() { rational::to_literal(i.lo()) } else { format!("[{}, {}]", rational::to_literal(i.lo()), rational::to_literal(i.hi())) })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "{} at ({}), grid {grid}", rep.rule.name(), inputs.join(", "));
    let _ = writeln!(out, "  envelope:  {}", rep.formula_envelope.display_both());
    let empirical = ProbInterval::new(rep.empirical_min.clone(), rep.empirical_max.clone()).map(|i| i.display_both()).unwrap_or_else(|_| "none".to_string());
    let _ = writeln!(out, "  empirical: {empirical}  ({} samples, {} undefined)", rep.samples, rep.undefined);
    let _ = writeln!(out, "  sound: {} ({} violations)", yes(rep.sound), rep.violations);
    let _ = writeln!(out, "  gaps: lo {}, hi {}", rational::to_decimal(&rep.gap_lo, SIG), rational::to_decimal(&rep.gap_hi, SIG));
    let _ = writeln!(out, "  attained: lo {}, hi {}", yes(rep.attained_lo), yes(rep.attained_hi));
    out
}

fn verify(rule: RuleId, premises: &[String], grid: usize, seed: u64, json: bool, exec: Execution) -> Outcome {
    let rep = if premises.iter().any(|p| p.contains('[')) {
        let intervals = premises.iter().map(|p| parse_interval(p)).collect::<anyhow::Result<Vec<_>>>().map_err(input)?;
        oracle::verify_interval_rule(rule, &intervals, grid, exec)?
    } else {
        let values = premises.iter().map(|p| parse_probability(p)).collect::<anyhow::Result<Vec<_>>>().map_err(input)?;
        oracle::verify_envelope_with(rule, &values, grid, seed, exec)?
    };
    let stdout = if json {
        serde_json::to_string_pretty(&rep).map_err(input)? + "\n"
    } else {
        render_report(&rep, grid)
    };
    Ok(Output {
        stdout,
        stderr: String::new(),
        code: if rep.sound { 0 } else { 1 },
    })
}
