//! The semi-decision procedure: backward proof search with a replayable
//! proof object on success and a validated counter-model on saturated
//! failure.

mod extract;
mod proof;
mod search;

pub use extract::{complete_model, extract_model, NotSaturated};
pub use proof::{check_proof, Proof, ProofNode};
pub use search::{
    heuristic_hint, unifying_saturation_steps, BranchState, SearchOptions, SearchStats,
};

use crate::axiom::SystemConfig;
use crate::calculus::CalcMode;
use crate::formula::{Formula, FormulaArena};
use crate::rules::{compile_system, InvalidAxiom};
use crate::semantics::{check_frame, falsifiable, KripkeModel};
use crate::sequent::{Sequent, Side};
use search::{Outcome, Searcher};
use std::time::{Duration, Instant};

/// Resource bounds for one proof attempt. At least one bound is always
/// finite: an entirely unbounded budget is normalized to a ten-minute
/// timeout.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub timeout: Option<Duration>,
    pub max_labels: Option<u32>,
    pub max_rule_applications: Option<u64>,
}

impl Budget {
    pub fn timeout(d: Duration) -> Self {
        Budget {
            timeout: Some(d),
            ..Budget::default()
        }
    }

    pub fn seconds(s: f64) -> Self {
        Budget::timeout(Duration::from_secs_f64(s))
    }

    fn normalized(mut self) -> Self {
        if self.timeout.is_none() && self.max_labels.is_none() && self.max_rule_applications.is_none()
        {
            self.timeout = Some(Duration::from_secs(600));
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    Timeout,
    Budget,
    /// The branch saturated but no validated counter-model was produced
    /// (extraction disabled, or the candidate failed validation).
    SaturationUnvalidated,
}

impl std::fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            UnknownReason::Timeout => "timeout",
            UnknownReason::Budget => "budget",
            UnknownReason::SaturationUnvalidated => "saturation-unvalidated",
        };
        f.write_str(s)
    }
}

/// Outcome of a proof attempt. `Refuted` is only produced after the
/// extracted model passed validation: it satisfies the system's frame
/// axioms, falsifies the saturated branch, and falsifies the goal at the
/// named world.
#[derive(Debug)]
pub enum Verdict {
    Proved(Proof),
    Refuted { model: KripkeModel, world: String },
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn summary(&self) -> String {
        match self {
            Verdict::Proved(_) => "Proved".into(),
            Verdict::Refuted { world, .. } => format!("Refuted (at world {world})"),
            Verdict::Unknown(r) => format!("Unknown ({r})"),
        }
    }
}

#[derive(Debug)]
pub struct ProveOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

/// Prove `f` in the given system with default search options (all
/// optimizations on, counter-model extraction on).
pub fn prove(f: &Formula, cfg: &SystemConfig, budget: Budget) -> Result<Verdict, InvalidAxiom> {
    prove_detailed(f, cfg, budget, SearchOptions::default()).map(|o| o.verdict)
}

pub fn prove_detailed(
    f: &Formula,
    cfg: &SystemConfig,
    budget: Budget,
    opts: SearchOptions,
) -> Result<ProveOutcome, InvalidAxiom> {
    let budget = budget.normalized();
    let rules = compile_system(cfg)?;
    let mode = if cfg.use_substitution_calculus {
        CalcMode::Substitution
    } else {
        CalcMode::Equality
    };
    let mut arena = FormulaArena::new();
    let fid = arena.intern(f);
    let deadline = budget.timeout.map(|d| Instant::now() + d);
    let extract = opts.extract_model;
    let mut searcher = Searcher::new(
        &arena,
        mode,
        &rules,
        cfg.em_enabled,
        opts,
        deadline,
        budget.max_labels,
        budget.max_rule_applications,
    );
    if extract {
        searcher.refuter = Some(Box::new(|branch: &Sequent, root: crate::label::Label| {
            validate_refutation(branch, root, &arena, mode, cfg, f)
        }));
    }
    // The goal sits at an arbitrary non-eps label.
    let root = searcher.alloc.fresh();
    let mut seq = Sequent::new();
    seq.insert_back(Side::Delta, root, fid);

    let outcome = searcher.search(BranchState::new(seq, root));
    let stats = searcher.stats.clone();
    drop(searcher);
    let verdict = match outcome {
        Outcome::Closed(node, _) => {
            let proof = Proof {
                arena,
                mode,
                root: *node,
            };
            debug_assert!(check_proof(&proof, cfg), "engine produced unreplayable proof");
            Verdict::Proved(proof)
        }
        Outcome::Saturated(state) => {
            if extract {
                match validate_refutation(&state.seq, state.root, &arena, mode, cfg, f) {
                    Some((model, world)) => Verdict::Refuted { model, world },
                    None => Verdict::Unknown(UnknownReason::SaturationUnvalidated),
                }
            } else {
                Verdict::Unknown(UnknownReason::SaturationUnvalidated)
            }
        }
        Outcome::FoundModel(model, world) => Verdict::Refuted {
            model: *model,
            world,
        },
        Outcome::OutOfBudget(reason) => Verdict::Unknown(reason),
    };
    Ok(ProveOutcome { verdict, stats })
}

/// Worlds beyond which no extraction is attempted: exhaustive frame
/// checking is exponential in the quantifier prefix.
const EXTRACT_WORLD_CAP: usize = 8;
/// Triples the model-completion search may add.
const COMPLETION_BUDGET: usize = 64;

/// Extract a candidate model from an open branch and validate it end to
/// end: the candidate (or its axiom-driven completion) must satisfy every
/// active frame axiom and falsify the goal formula at the world of the
/// root label. Only a validated model ever becomes a `Refuted` verdict.
fn validate_refutation(
    branch: &Sequent,
    root: crate::label::Label,
    arena: &FormulaArena,
    mode: CalcMode,
    cfg: &SystemConfig,
    goal: &Formula,
) -> Option<(KripkeModel, String)> {
    let model = extract_model(branch, arena, mode).ok()?;
    if model.world_count() > EXTRACT_WORLD_CAP {
        return None;
    }
    let world = model.rho(root)?;
    if model.eval(world, goal).ok()? {
        log::debug!("candidate does not falsify the goal; verdict stays Unknown");
        return None;
    }
    if check_frame(&model, &cfg.axioms).is_empty() {
        if falsifiable(&model, branch, arena) == Ok(true) {
            let name = model.world_name(world).to_owned();
            return Some((model, name));
        }
        return None;
    }
    // The branch may describe only a fragment of a model; try to close it
    // over the same worlds and re-validate.
    let completed = complete_model(&model, &cfg.axioms, COMPLETION_BUDGET)?;
    if !check_frame(&completed, &cfg.axioms).is_empty() {
        return None;
    }
    let world = completed.rho(root)?;
    if completed.eval(world, goal).ok()? {
        return None;
    }
    let name = completed.world_name(world).to_owned();
    Some((completed, name))
}
