//! Backward proof search.
//!
//! The strategy, per branch: (1) try to close; (2) exhaust the
//! label-unifying structural rules; (3) apply invertible logical rules;
//! (4) split one `*` on the right or `-*` on the left against an existing
//! relational atom, never reusing a (formula, atom) pair; (5) run one
//! structural saturation round (commutative variants, then the
//! fresh-label rules under a redundancy guard, then identity atoms, then
//! one excluded-middle split when enabled); (6) if the round was a
//! fixpoint, the branch is saturated and the search stops.
//!
//! Every rule preserves falsifiability upwards, so a saturated branch
//! refutes the root: the search never backtracks over rule choices, only
//! over the conjunctive branching of two-premise rules. Back-jumping
//! skips the second premise of a binary rule when the support of the
//! first premise's derivation is contained in it; the skipped subtree is
//! rebuilt by replaying the derivation, which re-validates the skip.

use crate::calculus::{
    apply_em, apply_logical, apply_structural, close_check, match_structural, rules_for_mode,
    structural_redundant, CalcMode, ClosureReason, FreshSource, Premises, RuleId, RuleInstance,
    RuleRef,
};
use crate::formula::{FormulaArena, FormulaId, Node};
use crate::label::{Label, LabelAllocator};
use crate::prover::proof::{replant, ProofNode};
use crate::prover::UnknownReason;
use crate::rules::CompiledSystem;
use crate::sequent::{RelAtom, Sequent, Side};
use std::collections::HashSet;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Skip the sibling premise of a binary rule when the closed premise's
    /// support is contained in it.
    pub backjumping: bool,
    /// Prioritize `*R` atoms suggested by matching subformula labels.
    pub assoc_heuristic: bool,
    /// On saturation, extract and validate a counter-model instead of
    /// reporting an unvalidated failure.
    pub extract_model: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            backjumping: true,
            assoc_heuristic: true,
            extract_model: true,
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct SearchStats {
    pub rule_applications: u64,
    pub backjump_skips: u64,
    /// Principal/atom pairs consumed by step 4, in order.
    pub step4_pairs: Vec<(Label, FormulaId, RelAtom)>,
}

/// Branch-local search state. Sequents are values: a binary rule clones
/// the state per premise and backtracking is simply dropping the copy.
#[derive(Debug, Clone)]
pub struct BranchState {
    pub seq: Sequent,
    /// Current name of the label the goal formula was placed at.
    pub root: Label,
    star_memo: HashSet<(Label, FormulaId, RelAtom)>,
    wand_memo: HashSet<(Label, FormulaId, RelAtom)>,
    /// Saturation rounds taken on this branch; schedules the opportunistic
    /// counter-model attempts.
    sat_rounds: u32,
}

impl BranchState {
    pub fn new(seq: Sequent, root: Label) -> Self {
        BranchState {
            seq,
            root,
            star_memo: HashSet::new(),
            wand_memo: HashSet::new(),
            sat_rounds: 0,
        }
    }

    /// Rename the bookkeeping after the premise applied substitutions.
    fn remap(&mut self, substs: &[(Label, Label)]) {
        if substs.is_empty() {
            return;
        }
        let map = |mut l: Label| {
            for &(f, t) in substs {
                if l == f {
                    l = t;
                }
            }
            l
        };
        self.root = map(self.root);
        self.star_memo = self
            .star_memo
            .drain()
            .map(|(l, f, a)| (map(l), f, a.map(map)))
            .collect();
        self.wand_memo = self
            .wand_memo
            .drain()
            .map(|(l, f, a)| (map(l), f, a.map(map)))
            .collect();
    }
}

/// Support of a closed subderivation: the occurrences its rule instances
/// consumed. If the support is contained in another sequent, the same
/// derivation closes that sequent too.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoreItem {
    Fm(Side, Label, FormulaId),
    At(RelAtom),
}

pub type Core = HashSet<CoreItem>;

fn present_in(seq: &Sequent, item: &CoreItem) -> bool {
    match item {
        CoreItem::Fm(side, l, f) => seq.contains(*side, *l, *f),
        CoreItem::At(a) => seq.contains_atom(a),
    }
}

fn core_contained(core: &Core, seq: &Sequent) -> bool {
    core.iter().all(|item| present_in(seq, item))
}

pub enum Outcome {
    Closed(Box<ProofNode>, Core),
    /// First saturated branch; aborts the whole attempt (rules are
    /// invertible, so an unprovable premise refutes the root).
    Saturated(Box<BranchState>),
    /// A validated counter-model surfaced during saturation.
    FoundModel(Box<crate::semantics::KripkeModel>, String),
    OutOfBudget(UnknownReason),
}

/// Validation callback: given an open branch and the current root label,
/// produce a checked counter-model or nothing.
pub type Refuter<'a> =
    Box<dyn Fn(&Sequent, Label) -> Option<(crate::semantics::KripkeModel, String)> + 'a>;

pub struct Searcher<'a> {
    pub arena: &'a FormulaArena,
    pub mode: CalcMode,
    pub rules: &'a CompiledSystem,
    pub em_enabled: bool,
    pub opts: SearchOptions,
    pub alloc: LabelAllocator,
    pub stats: SearchStats,
    /// Invoked on open branches at scheduled saturation rounds.
    pub refuter: Option<Refuter<'a>>,
    deadline: Option<Instant>,
    max_labels: Option<u32>,
    max_apps: Option<u64>,
    unifying: Vec<usize>,
    plain: Vec<usize>,
    fresh_rules: Vec<usize>,
    generators: Vec<usize>,
}

impl<'a> Searcher<'a> {
    pub fn new(
        arena: &'a FormulaArena,
        mode: CalcMode,
        rules: &'a CompiledSystem,
        em_enabled: bool,
        opts: SearchOptions,
        deadline: Option<Instant>,
        max_labels: Option<u32>,
        max_apps: Option<u64>,
    ) -> Self {
        let refs = rules_for_mode(rules, mode);
        let mut unifying = Vec::new();
        let mut plain = Vec::new();
        let mut fresh_rules = Vec::new();
        let mut generators = Vec::new();
        for r in &refs {
            if r.is_unifying() {
                unifying.push(r.index());
            } else if r.is_generator() {
                generators.push(r.index());
            } else if r.introduces_fresh() {
                fresh_rules.push(r.index());
            } else {
                plain.push(r.index());
            }
        }
        Searcher {
            arena,
            mode,
            rules,
            em_enabled,
            opts,
            alloc: LabelAllocator::new(),
            stats: SearchStats::default(),
            refuter: None,
            deadline,
            max_labels,
            max_apps,
            unifying,
            plain,
            fresh_rules,
            generators,
        }
    }

    fn rule_ref(&self, idx: usize) -> RuleRef<'a> {
        match self.mode {
            CalcMode::Equality => RuleRef::Eq(idx, &self.rules.structural[idx]),
            CalcMode::Substitution => RuleRef::Sub(idx, &self.rules.subst[idx]),
        }
    }

    fn over_budget(&self) -> Option<UnknownReason> {
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return Some(UnknownReason::Timeout);
            }
        }
        if let Some(max) = self.max_labels {
            if self.alloc.allocated() > max {
                return Some(UnknownReason::Budget);
            }
        }
        if let Some(max) = self.max_apps {
            if self.stats.rule_applications > max {
                return Some(UnknownReason::Budget);
            }
        }
        None
    }

    fn count_app(&mut self) {
        self.stats.rule_applications += 1;
    }

    pub fn search(&mut self, state: BranchState) -> Outcome {
        let mut state = state;
        // Conclusion/instance pairs of the unary applications made in this
        // frame, unwound into proof nodes once the branch closes.
        let mut trail: Vec<(Sequent, RuleInstance)> = Vec::new();
        loop {
            if let Some(reason) = self.over_budget() {
                return Outcome::OutOfBudget(reason);
            }
            // Step 1: closure.
            if let Some(reason) = close_check(&state.seq, self.arena, self.mode) {
                let inst = RuleInstance {
                    rule: RuleId::Close(reason),
                    name: reason.rule_name().into(),
                    principal: None,
                    atoms: Vec::new(),
                    theta: Vec::new(),
                    pair: None,
                    fresh: Vec::new(),
                    substs_done: Vec::new(),
                };
                let mut node = ProofNode {
                    sequent: state.seq.clone(),
                    rule: inst,
                    children: Vec::new(),
                };
                let mut core = self.closure_core(&reason, &state.seq);
                while let Some((concl, inst)) = trail.pop() {
                    core = self.unwind_core(core, &inst, &concl);
                    node = ProofNode {
                        sequent: concl,
                        rule: inst,
                        children: vec![node],
                    };
                }
                return Outcome::Closed(Box::new(node), core);
            }
            // Step 2: label-unifying structural rules.
            if let Some((inst, premise)) = self.step2(&state.seq) {
                self.count_app();
                let concl = std::mem::replace(&mut state.seq, premise);
                state.remap(&inst.substs_done);
                trail.push((concl, inst));
                continue;
            }
            // Step 3: invertible logical rules.
            if let Some((side, label, fid)) = step3_principal(&state.seq, self.arena) {
                let (inst, prem) = apply_logical(
                    &state.seq,
                    self.arena,
                    self.mode,
                    side,
                    label,
                    fid,
                    None,
                    &mut FreshSource::alloc(&mut self.alloc),
                )
                .expect("step 3 picked an applicable principal");
                self.count_app();
                match prem {
                    Premises::One(p) => {
                        let concl = std::mem::replace(&mut state.seq, *p);
                        state.remap(&inst.substs_done);
                        trail.push((concl, inst));
                        continue;
                    }
                    Premises::Two(l, r) => return self.binary(state, trail, inst, *l, *r),
                    Premises::Zero(_) => unreachable!("logical rules have premises"),
                }
            }
            // Step 4: `*R` / `-*L` over existing atoms.
            if let Some((side, label, fid, atom)) = self.step4_pick(&state) {
                let memo_key = (label, fid, atom);
                match side {
                    Side::Delta => state.star_memo.insert(memo_key),
                    Side::Gamma => state.wand_memo.insert(memo_key),
                };
                self.stats.step4_pairs.push(memo_key);
                let (inst, prem) = apply_logical(
                    &state.seq,
                    self.arena,
                    self.mode,
                    side,
                    label,
                    fid,
                    Some(atom),
                    &mut FreshSource::alloc(&mut self.alloc),
                )
                .expect("step 4 picked an applicable pair");
                self.count_app();
                let Premises::Two(l, r) = prem else {
                    unreachable!("starR and wandL are binary")
                };
                return self.binary(state, trail, inst, *l, *r);
            }
            // Step 5: one structural saturation round.
            match self.step5(&mut state, &mut trail) {
                Err(reason) => return Outcome::OutOfBudget(reason),
                Ok(true) => {
                    state.sat_rounds += 1;
                    // The branch is open and structurally saturating; see
                    // whether it already describes a counter-model. Checked
                    // at rounds 1, 2, 4, 8, ... to keep the cost bounded.
                    if state.sat_rounds.is_power_of_two() {
                        if let Some(refuter) = &self.refuter {
                            if let Some((model, world)) = refuter(&state.seq, state.root) {
                                return Outcome::FoundModel(Box::new(model), world);
                            }
                        }
                    }
                    continue;
                }
                Ok(false) => {}
            }
            // Excluded middle, when the system needs it.
            if self.em_enabled {
                if let Some((x, y)) = next_em_pair(&state.seq, self.mode) {
                    let (inst, prem) =
                        apply_em(&state.seq, self.mode, x, y).expect("pair is distinct");
                    self.count_app();
                    let Premises::Two(l, r) = prem else {
                        unreachable!("EM is binary")
                    };
                    return self.binary(state, trail, inst, *l, *r);
                }
            }
            // Step 6: fixpoint.
            return Outcome::Saturated(Box::new(state));
        }
    }

    /// Handle a two-premise rule: prove the first premise, then either
    /// skip the second by back-jumping or prove it too.
    fn binary(
        &mut self,
        state: BranchState,
        mut trail: Vec<(Sequent, RuleInstance)>,
        inst: RuleInstance,
        left: Sequent,
        right: Sequent,
    ) -> Outcome {
        let concl = state.seq.clone();
        let mut lstate = state.clone();
        lstate.seq = left;
        lstate.remap(&inst.substs_done);
        let mut rstate = state;
        rstate.seq = right;

        let (lnode, lcore) = match self.search(lstate) {
            Outcome::Closed(node, core) => (node, core),
            other => return other,
        };
        let (rnode, rcore) = 'right: {
            if self.opts.backjumping && core_contained(&lcore, &rstate.seq) {
                if let Some(node) = replant(
                    &lnode,
                    rstate.seq.clone(),
                    self.arena,
                    self.mode,
                    self.rules,
                ) {
                    self.stats.backjump_skips += 1;
                    break 'right (Box::new(node), lcore.clone());
                }
            }
            match self.search(rstate) {
                Outcome::Closed(node, core) => (node, core),
                other => return other,
            }
        };

        let mut core: Core = lcore;
        core.extend(rcore);
        core = self.unwind_core(core, &inst, &concl);
        let mut node = ProofNode {
            sequent: concl,
            rule: inst,
            children: vec![*lnode, *rnode],
        };
        while let Some((concl, inst)) = trail.pop() {
            core = self.unwind_core(core, &inst, &concl);
            node = ProofNode {
                sequent: concl,
                rule: inst,
                children: vec![node],
            };
        }
        Outcome::Closed(Box::new(node), core)
    }

    fn closure_core(&self, reason: &ClosureReason, seq: &Sequent) -> Core {
        let mut core = Core::new();
        match *reason {
            ClosureReason::Id(wl, wr, f) => {
                core.insert(CoreItem::Fm(Side::Gamma, wl, f));
                core.insert(CoreItem::Fm(Side::Delta, wr, f));
            }
            ClosureReason::BotL(w, f) => {
                core.insert(CoreItem::Fm(Side::Gamma, w, f));
            }
            ClosureReason::TopR(w, f) | ClosureReason::EmpR(w, f) => {
                core.insert(CoreItem::Fm(Side::Delta, w, f));
            }
            ClosureReason::NEq(a, b) => {
                core.insert(CoreItem::At(RelAtom::neq(a, b)));
            }
        }
        if self.mode == CalcMode::Equality {
            // Equality reasoning may have contributed; keep the whole
            // equality context in the support.
            for atom in &seq.g {
                if matches!(atom, RelAtom::Eq(..)) {
                    core.insert(CoreItem::At(*atom));
                }
            }
        }
        core
    }

    /// Map a premise-space core back to conclusion space through one rule
    /// application, and add the rule's own support.
    fn unwind_core(&self, core: Core, inst: &RuleInstance, concl: &Sequent) -> Core {
        let mut out = Core::new();
        for item in core {
            for cand in reverse_subst(&item, &inst.substs_done) {
                if present_in(concl, &cand) {
                    out.insert(cand);
                }
            }
        }
        if let Some((side, l, f)) = inst.principal {
            out.insert(CoreItem::Fm(side, l, f));
        }
        for atom in &inst.atoms {
            out.insert(CoreItem::At(*atom));
        }
        if self.mode == CalcMode::Equality {
            for atom in &concl.g {
                if matches!(atom, RelAtom::Eq(..)) {
                    out.insert(CoreItem::At(*atom));
                }
            }
        }
        out
    }

    /// First applicable, non-redundant label-unifying rule application.
    fn step2(&mut self, seq: &Sequent) -> Option<(RuleInstance, Sequent)> {
        for &idx in &self.unifying.clone() {
            let rule = self.rule_ref(idx);
            for theta in match_structural(rule, seq, self.mode) {
                if structural_redundant(rule, seq, self.mode, &theta) {
                    continue;
                }
                if let Ok((inst, Premises::One(p))) = apply_structural(
                    seq,
                    rule,
                    &theta,
                    self.mode,
                    &mut FreshSource::alloc(&mut self.alloc),
                ) {
                    if p.same_contents(seq) {
                        continue;
                    }
                    return Some((inst, *p));
                }
            }
        }
        None
    }

    /// Pick the next `*R`/`-*L` pair: heuristic hints first, then the
    /// worklist order of the principal formulas.
    fn step4_pick(&self, state: &BranchState) -> Option<(Side, Label, FormulaId, RelAtom)> {
        let seq = &state.seq;
        if self.opts.assoc_heuristic {
            for (l, f) in seq.delta() {
                if matches!(self.arena.node(f), Node::Star(..)) {
                    for atom in heuristic_hint(seq, self.arena, self.mode, l, f) {
                        if !state.star_memo.contains(&(l, f, atom)) {
                            return Some((Side::Delta, l, f, atom));
                        }
                    }
                }
            }
        }
        for (l, f) in seq.delta() {
            if matches!(self.arena.node(f), Node::Star(..)) {
                for (x, y, z) in seq.ternary_atoms() {
                    if self.mode.labels_agree(seq, z, l) {
                        let atom = RelAtom::Ternary(x, y, z);
                        if !state.star_memo.contains(&(l, f, atom)) {
                            return Some((Side::Delta, l, f, atom));
                        }
                    }
                }
            }
        }
        for (l, f) in seq.gamma() {
            if matches!(self.arena.node(f), Node::Wand(..)) {
                for (x, y, z) in seq.ternary_atoms() {
                    if self.mode.labels_agree(seq, y, l) {
                        let atom = RelAtom::Ternary(x, y, z);
                        if !state.wand_memo.contains(&(l, f, atom)) {
                            return Some((Side::Gamma, l, f, atom));
                        }
                    }
                }
            }
        }
        None
    }

    /// One saturation round: saturate the plain rules (commutative
    /// variants), then apply each fresh-label rule wherever the redundancy
    /// guard admits it, then the generator rules per label. Returns
    /// whether anything was applied.
    fn step5(
        &mut self,
        state: &mut BranchState,
        trail: &mut Vec<(Sequent, RuleInstance)>,
    ) -> Result<bool, UnknownReason> {
        let mut applied_any = false;
        // 5a: rules that add atoms without fresh labels, to fixpoint.
        loop {
            let mut progressed = false;
            for &idx in &self.plain.clone() {
                progressed |= self.apply_all(idx, state, trail)?;
            }
            if !progressed {
                break;
            }
            applied_any = true;
        }
        // 5b: fresh-label rules, one pass under the redundancy guard.
        for &idx in &self.fresh_rules.clone() {
            applied_any |= self.apply_all(idx, state, trail)?;
        }
        // 5c: identity/extension atoms for the labels of the sequent.
        for &idx in &self.generators.clone() {
            applied_any |= self.apply_all(idx, state, trail)?;
        }
        Ok(applied_any)
    }

    /// Apply one structural rule at every non-redundant match found on
    /// entry; the guard is re-checked against the evolving sequent.
    fn apply_all(
        &mut self,
        idx: usize,
        state: &mut BranchState,
        trail: &mut Vec<(Sequent, RuleInstance)>,
    ) -> Result<bool, UnknownReason> {
        let rule = self.rule_ref(idx);
        let thetas = match_structural(rule, &state.seq, self.mode);
        let mut applied = false;
        for theta in thetas {
            if let Some(reason) = self.over_budget() {
                return Err(reason);
            }
            if structural_redundant(rule, &state.seq, self.mode, &theta) {
                continue;
            }
            let Ok((inst, Premises::One(p))) = apply_structural(
                &state.seq,
                rule,
                &theta,
                self.mode,
                &mut FreshSource::alloc(&mut self.alloc),
            ) else {
                continue;
            };
            if p.same_contents(&state.seq) {
                continue;
            }
            self.count_app();
            let concl = std::mem::replace(&mut state.seq, *p);
            state.remap(&inst.substs_done);
            trail.push((concl, inst));
            applied = true;
        }
        Ok(applied)
    }
}

fn reverse_subst(item: &CoreItem, substs: &[(Label, Label)]) -> Vec<CoreItem> {
    let mut set: Vec<CoreItem> = vec![item.clone()];
    for &(from, to) in substs.iter().rev() {
        let mut next = Vec::new();
        for it in &set {
            next.push(it.clone());
            let undone = match it {
                CoreItem::Fm(s, l, f) => {
                    CoreItem::Fm(*s, if *l == to { from } else { *l }, *f)
                }
                CoreItem::At(a) => CoreItem::At(a.map(|l| if l == to { from } else { l })),
            };
            if !next.contains(&undone) {
                next.push(undone);
            }
        }
        set = next;
    }
    set
}

/// First invertible logical principal in worklist order.
fn step3_principal(seq: &Sequent, arena: &FormulaArena) -> Option<(Side, Label, FormulaId)> {
    for (l, f) in seq.gamma() {
        match arena.node(f) {
            Node::And(..) | Node::Or(..) | Node::Imp(..) | Node::Not(..) | Node::Emp
            | Node::Star(..) => return Some((Side::Gamma, l, f)),
            _ => {}
        }
    }
    for (l, f) in seq.delta() {
        match arena.node(f) {
            Node::And(..) | Node::Or(..) | Node::Imp(..) | Node::Not(..) | Node::Wand(..) => {
                return Some((Side::Delta, l, f))
            }
            _ => {}
        }
    }
    None
}

/// First undecided label pair for `EM`, over `eps` and the labels of the
/// relational atoms, in first-occurrence order.
fn next_em_pair(seq: &Sequent, mode: CalcMode) -> Option<(Label, Label)> {
    let mut labels = vec![Label::EPSILON];
    for atom in &seq.g {
        for l in atom.labels() {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
    }
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            let (x, y) = (labels[i], labels[j]);
            if !mode.labels_agree(seq, x, y) && !seq.contains_atom(&RelAtom::neq(x, y)) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Ordering hint for step 4: when `f = A * B` sits on the right at `z`
/// and the sequent already contains labels forcing `A` and `B` on the
/// left, the relational atoms composing those labels into `z` are tried
/// first. Purely an ordering device; it never excludes an atom.
pub fn heuristic_hint(
    seq: &Sequent,
    arena: &FormulaArena,
    mode: CalcMode,
    z: Label,
    f: FormulaId,
) -> Vec<RelAtom> {
    let Node::Star(a, b) = arena.node(f) else {
        return Vec::new();
    };
    let ca = candidate_labels(seq, arena, a);
    if ca.is_empty() {
        return Vec::new();
    }
    let cb = candidate_labels(seq, arena, b);
    let mut out = Vec::new();
    for (x, y, z2) in seq.ternary_atoms() {
        if mode.labels_agree(seq, z2, z) && ca.contains(&x) && cb.contains(&y) {
            let atom = RelAtom::Ternary(x, y, z2);
            if !out.contains(&atom) {
                out.push(atom);
            }
        }
    }
    out
}

/// Labels that visibly force `f` on the left: direct members of the left
/// set, or, for a `*`-formula, compositions of such labels recursively.
fn candidate_labels(seq: &Sequent, arena: &FormulaArena, f: FormulaId) -> Vec<Label> {
    let mut out: Vec<Label> = seq
        .gamma()
        .filter_map(|(l, g)| (g == f).then_some(l))
        .collect();
    if let Node::Star(a, b) = arena.node(f) {
        let ca = candidate_labels(seq, arena, a);
        if !ca.is_empty() {
            let cb = candidate_labels(seq, arena, b);
            for (x, y, z) in seq.ternary_atoms() {
                if ca.contains(&x) && cb.contains(&y) && !out.contains(&z) {
                    out.push(z);
                }
            }
        }
    }
    out
}

/// Run step 2 alone to fixpoint, returning the number of applications.
/// Each one eliminates a label (or merges two equality classes), so the
/// count is bounded by the number of labels in the sequent.
pub fn unifying_saturation_steps(
    seq: &mut Sequent,
    rules: &CompiledSystem,
    mode: CalcMode,
    alloc: &mut LabelAllocator,
) -> usize {
    let refs = rules_for_mode(rules, mode);
    let unifying: Vec<RuleRef> = refs.into_iter().filter(|r| r.is_unifying()).collect();
    let mut steps = 0;
    'outer: loop {
        for rule in &unifying {
            for theta in match_structural(*rule, seq, mode) {
                if structural_redundant(*rule, seq, mode, &theta) {
                    continue;
                }
                let Ok((_, Premises::One(p))) =
                    apply_structural(seq, *rule, &theta, mode, &mut FreshSource::alloc(alloc))
                else {
                    continue;
                };
                if p.same_contents(seq) {
                    continue;
                }
                *seq = *p;
                steps += 1;
                continue 'outer;
            }
        }
        return steps;
    }
}
