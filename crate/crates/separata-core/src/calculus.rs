//! The rule-application engine: zero-premise closure checks, the logical
//! rules (in both the equality-store and the substitution presentation),
//! and matching/application of structural rules against a sequent.

use crate::axiom::{AxAtom, Term};
use crate::formula::{FormulaArena, FormulaId, Node};
use crate::label::{Label, LabelAllocator};
use crate::rules::{CompiledSystem, StructuralRule, SubstRule};
use crate::sequent::{RelAtom, Sequent, Side};
use thiserror::Error;

/// Which presentation of the calculus is running. They are never mixed
/// within one proof attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalcMode {
    /// Equalities are relational atoms; side conditions consult the
    /// equality judgment.
    Equality,
    /// Equalities are realized eagerly by global label substitutions;
    /// side conditions are syntactic.
    Substitution,
}

impl CalcMode {
    /// Label agreement in the sense of the active calculus.
    pub fn labels_agree(self, s: &Sequent, a: Label, b: Label) -> bool {
        match self {
            CalcMode::Equality => s.eq_query(a, b),
            CalcMode::Substitution => a == b,
        }
    }
}

/// Why a branch closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureReason {
    /// `w:p` on the left, `w':p` on the right, labels agree.
    Id(Label, Label, FormulaId),
    BotL(Label, FormulaId),
    TopR(Label, FormulaId),
    /// `w:emp` on the right with `w` (provably) `eps`.
    EmpR(Label, FormulaId),
    /// An inequality whose two sides agree.
    NEq(Label, Label),
}

impl ClosureReason {
    pub fn rule_name(&self) -> &'static str {
        match self {
            ClosureReason::Id(..) => "id",
            ClosureReason::BotL(..) => "botL",
            ClosureReason::TopR(..) => "topR",
            ClosureReason::EmpR(..) => "empR",
            ClosureReason::NEq(..) => "neq",
        }
    }
}

/// Identifies the applied rule within a [`RuleInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    Close(ClosureReason),
    AndL,
    AndR,
    OrL,
    OrR,
    NotL,
    NotR,
    ImpL,
    ImpR,
    EmpL,
    StarL,
    StarR,
    WandL,
    WandR,
    Em,
    /// Index into the compiled rule list of the active mode.
    Structural(usize),
}

/// Everything needed to regenerate the premises of a rule application
/// from its conclusion, deterministically.
#[derive(Debug, Clone)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub name: String,
    /// Principal labelled formula, for logical rules.
    pub principal: Option<(Side, Label, FormulaId)>,
    /// Principal relational atoms: the side atom of `*R`/`-*L`, or the
    /// matched antecedent atoms of a structural rule.
    pub atoms: Vec<RelAtom>,
    /// Bindings of the rule's universal variables, for structural rules.
    pub theta: Vec<Label>,
    /// The pair split on by `EM`.
    pub pair: Option<(Label, Label)>,
    /// Fresh labels consumed, in allocation order.
    pub fresh: Vec<Label>,
    /// Global substitutions performed in the (first) premise, in order.
    /// Lets callers remap branch-local bookkeeping keyed by labels.
    pub substs_done: Vec<(Label, Label)>,
}

/// Premise sequents of an application; the closure tag is the
/// zero-premise case.
#[derive(Debug, Clone)]
pub enum Premises {
    Zero(ClosureReason),
    One(Box<Sequent>),
    Two(Box<Sequent>, Box<Sequent>),
}

impl Premises {
    pub fn count(&self) -> usize {
        match self {
            Premises::Zero(_) => 0,
            Premises::One(_) => 1,
            Premises::Two(..) => 2,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("rule not applicable: {0}")]
pub struct RuleNotApplicable(pub String);

/// Fresh labels either come from the attempt's allocator (search) or are
/// replayed from a recorded instance (proof checking).
pub enum FreshSource<'a> {
    Alloc(&'a mut LabelAllocator),
    Fixed(&'a [Label], usize),
}

impl<'a> FreshSource<'a> {
    pub fn alloc(a: &'a mut LabelAllocator) -> Self {
        FreshSource::Alloc(a)
    }

    pub fn fixed(labels: &'a [Label]) -> Self {
        FreshSource::Fixed(labels, 0)
    }

    fn next(&mut self) -> Result<Label, RuleNotApplicable> {
        match self {
            FreshSource::Alloc(a) => Ok(a.fresh()),
            FreshSource::Fixed(labels, i) => {
                let l = labels
                    .get(*i)
                    .copied()
                    .ok_or_else(|| RuleNotApplicable("recorded fresh labels exhausted".into()))?;
                *i += 1;
                Ok(l)
            }
        }
    }
}

/// Search the sequent for a zero-premise closure.
///
/// The inequality check doubles as the `NEq` rule; it never fires when no
/// inequality atoms exist.
pub fn close_check(s: &Sequent, arena: &FormulaArena, mode: CalcMode) -> Option<ClosureReason> {
    for (w, f) in s.gamma() {
        if arena.node(f) == Node::Bot {
            return Some(ClosureReason::BotL(w, f));
        }
    }
    for (w, f) in s.delta() {
        match arena.node(f) {
            Node::Top => return Some(ClosureReason::TopR(w, f)),
            Node::Emp => {
                if mode.labels_agree(s, w, Label::EPSILON) {
                    return Some(ClosureReason::EmpR(w, f));
                }
            }
            Node::Atom(_) => {
                for (w2, f2) in s.gamma() {
                    if f2 == f && mode.labels_agree(s, w2, w) {
                        return Some(ClosureReason::Id(w2, w, f));
                    }
                }
            }
            _ => {}
        }
    }
    for atom in &s.g {
        if let RelAtom::Neq(a, b) = *atom {
            if mode.labels_agree(s, a, b) {
                return Some(ClosureReason::NEq(a, b));
            }
        }
    }
    None
}

fn missing(principal: &str) -> RuleNotApplicable {
    RuleNotApplicable(format!("principal {principal} not present"))
}

/// Apply a logical rule to its principal formula (plus, for `*R`/`-*L`,
/// the principal relational atom). Returns the recorded instance and the
/// premises.
pub fn apply_logical(
    s: &Sequent,
    arena: &FormulaArena,
    mode: CalcMode,
    side: Side,
    label: Label,
    fid: FormulaId,
    atom: Option<RelAtom>,
    fresh: &mut FreshSource,
) -> Result<(RuleInstance, Premises), RuleNotApplicable> {
    if !s.contains(side, label, fid) {
        return Err(missing(&arena.render(fid)));
    }
    let node = arena.node(fid);
    let principal = Some((side, label, fid));
    let mut inst = RuleInstance {
        rule: RuleId::AndL,
        name: String::new(),
        principal,
        atoms: Vec::new(),
        theta: Vec::new(),
        pair: None,
        fresh: Vec::new(),
        substs_done: Vec::new(),
    };
    let premises = match (side, node) {
        (Side::Gamma, Node::And(a, b)) => {
            inst.rule = RuleId::AndL;
            inst.name = "andL".into();
            let mut p = s.clone();
            p.remove(Side::Gamma, label, fid);
            p.insert_front(Side::Gamma, label, b);
            p.insert_front(Side::Gamma, label, a);
            Premises::One(Box::new(p))
        }
        (Side::Delta, Node::And(a, b)) => {
            inst.rule = RuleId::AndR;
            inst.name = "andR".into();
            let mut left = s.clone();
            left.remove(Side::Delta, label, fid);
            let mut right = left.clone();
            left.insert_front(Side::Delta, label, a);
            right.insert_front(Side::Delta, label, b);
            Premises::Two(Box::new(left), Box::new(right))
        }
        (Side::Gamma, Node::Or(a, b)) => {
            inst.rule = RuleId::OrL;
            inst.name = "orL".into();
            let mut left = s.clone();
            left.remove(Side::Gamma, label, fid);
            let mut right = left.clone();
            left.insert_front(Side::Gamma, label, a);
            right.insert_front(Side::Gamma, label, b);
            Premises::Two(Box::new(left), Box::new(right))
        }
        (Side::Delta, Node::Or(a, b)) => {
            inst.rule = RuleId::OrR;
            inst.name = "orR".into();
            let mut p = s.clone();
            p.remove(Side::Delta, label, fid);
            p.insert_front(Side::Delta, label, b);
            p.insert_front(Side::Delta, label, a);
            Premises::One(Box::new(p))
        }
        (Side::Gamma, Node::Not(a)) => {
            inst.rule = RuleId::NotL;
            inst.name = "notL".into();
            let mut p = s.clone();
            p.remove(Side::Gamma, label, fid);
            p.insert_front(Side::Delta, label, a);
            Premises::One(Box::new(p))
        }
        (Side::Delta, Node::Not(a)) => {
            inst.rule = RuleId::NotR;
            inst.name = "notR".into();
            let mut p = s.clone();
            p.remove(Side::Delta, label, fid);
            p.insert_front(Side::Gamma, label, a);
            Premises::One(Box::new(p))
        }
        (Side::Gamma, Node::Imp(a, b)) => {
            inst.rule = RuleId::ImpL;
            inst.name = "impL".into();
            let mut left = s.clone();
            left.remove(Side::Gamma, label, fid);
            let mut right = left.clone();
            left.insert_front(Side::Delta, label, a);
            right.insert_front(Side::Gamma, label, b);
            Premises::Two(Box::new(left), Box::new(right))
        }
        (Side::Delta, Node::Imp(a, b)) => {
            inst.rule = RuleId::ImpR;
            inst.name = "impR".into();
            let mut p = s.clone();
            p.remove(Side::Delta, label, fid);
            p.insert_front(Side::Gamma, label, a);
            p.insert_front(Side::Delta, label, b);
            Premises::One(Box::new(p))
        }
        (Side::Gamma, Node::Emp) => {
            inst.rule = RuleId::EmpL;
            inst.name = "empL".into();
            let mut p = s.clone();
            p.remove(Side::Gamma, label, fid);
            match mode {
                CalcMode::Equality => {
                    p.assert_eq(label, Label::EPSILON);
                }
                CalcMode::Substitution => {
                    if !label.is_epsilon() {
                        p.apply_subst(label, Label::EPSILON)
                            .expect("label is not eps");
                        inst.substs_done.push((label, Label::EPSILON));
                    }
                }
            }
            Premises::One(Box::new(p))
        }
        (Side::Gamma, Node::Star(a, b)) => {
            inst.rule = RuleId::StarL;
            inst.name = "starL".into();
            let x = fresh.next()?;
            let y = fresh.next()?;
            debug_assert!(!s.contains_label(x) && !s.contains_label(y));
            inst.fresh = vec![x, y];
            let mut p = s.clone();
            p.remove(Side::Gamma, label, fid);
            p.insert_atom(RelAtom::Ternary(x, y, label));
            p.insert_front(Side::Gamma, y, b);
            p.insert_front(Side::Gamma, x, a);
            Premises::One(Box::new(p))
        }
        (Side::Delta, Node::Wand(a, b)) => {
            inst.rule = RuleId::WandR;
            inst.name = "wandR".into();
            let x = fresh.next()?;
            let y = fresh.next()?;
            debug_assert!(!s.contains_label(x) && !s.contains_label(y));
            inst.fresh = vec![x, y];
            let mut p = s.clone();
            p.remove(Side::Delta, label, fid);
            p.insert_atom(RelAtom::Ternary(x, label, y));
            p.insert_front(Side::Gamma, x, a);
            p.insert_front(Side::Delta, y, b);
            Premises::One(Box::new(p))
        }
        (Side::Delta, Node::Star(a, b)) => {
            // Needs a principal atom (x, y > z') with z' agreeing with the
            // principal's label; the principal stays in both premises and
            // is rotated to the back for fairness.
            let Some(atom @ RelAtom::Ternary(x, y, z)) = atom else {
                return Err(RuleNotApplicable("starR needs a ternary atom".into()));
            };
            if !s.contains_atom(&atom) {
                return Err(RuleNotApplicable("principal atom not present".into()));
            }
            if !mode.labels_agree(s, z, label) {
                return Err(RuleNotApplicable(
                    "atom result does not match the principal label".into(),
                ));
            }
            inst.rule = RuleId::StarR;
            inst.name = "starR".into();
            inst.atoms = vec![atom];
            let mut left = s.clone();
            left.rotate_to_back(Side::Delta, label, fid);
            let mut right = left.clone();
            left.insert_front(Side::Delta, x, a);
            right.insert_front(Side::Delta, y, b);
            Premises::Two(Box::new(left), Box::new(right))
        }
        (Side::Gamma, Node::Wand(a, b)) => {
            let Some(atom @ RelAtom::Ternary(x, y, z)) = atom else {
                return Err(RuleNotApplicable("wandL needs a ternary atom".into()));
            };
            if !s.contains_atom(&atom) {
                return Err(RuleNotApplicable("principal atom not present".into()));
            }
            if !mode.labels_agree(s, y, label) {
                return Err(RuleNotApplicable(
                    "atom middle does not match the principal label".into(),
                ));
            }
            inst.rule = RuleId::WandL;
            inst.name = "wandL".into();
            inst.atoms = vec![atom];
            let mut left = s.clone();
            left.rotate_to_back(Side::Gamma, label, fid);
            let mut right = left.clone();
            left.insert_front(Side::Delta, x, a);
            right.insert_front(Side::Gamma, z, b);
            Premises::Two(Box::new(left), Box::new(right))
        }
        _ => {
            return Err(RuleNotApplicable(format!(
                "no rule for {} on that side",
                arena.render(fid)
            )))
        }
    };
    Ok((inst, premises))
}

/// Split on `x = y` versus `x != y`. In substitution mode the equal branch
/// merges the pair globally instead of recording an equality atom.
pub fn apply_em(
    s: &Sequent,
    mode: CalcMode,
    x: Label,
    y: Label,
) -> Result<(RuleInstance, Premises), RuleNotApplicable> {
    if x == y {
        return Err(RuleNotApplicable("EM pair must be distinct".into()));
    }
    let mut eq_branch = s.clone();
    match mode {
        CalcMode::Equality => eq_branch.assert_eq(x, y),
        CalcMode::Substitution => {
            let (from, to) = if y.is_epsilon() { (x, y) } else { (y, x) };
            eq_branch.apply_subst(from, to).expect("from is not eps");
        }
    }
    let mut neq_branch = s.clone();
    neq_branch.insert_atom(RelAtom::neq(x, y));
    let inst = RuleInstance {
        rule: RuleId::Em,
        name: "em".into(),
        principal: None,
        atoms: Vec::new(),
        theta: Vec::new(),
        pair: Some((x, y)),
        fresh: Vec::new(),
        substs_done: match mode {
            CalcMode::Equality => Vec::new(),
            CalcMode::Substitution => {
                let (from, to) = if y.is_epsilon() { (x, y) } else { (y, x) };
                vec![(from, to)]
            }
        },
    };
    Ok((inst, Premises::Two(Box::new(eq_branch), Box::new(neq_branch))))
}

/// A structural rule of either presentation, with its index in the
/// compiled system.
#[derive(Debug, Clone, Copy)]
pub enum RuleRef<'r> {
    Eq(usize, &'r StructuralRule),
    Sub(usize, &'r SubstRule),
}

impl<'r> RuleRef<'r> {
    pub fn name(&self) -> &str {
        match self {
            RuleRef::Eq(_, r) => &r.name,
            RuleRef::Sub(_, r) => &r.name,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            RuleRef::Eq(i, _) | RuleRef::Sub(i, _) => *i,
        }
    }

    pub fn antecedent(&self) -> &[AxAtom] {
        match self {
            RuleRef::Eq(_, r) => &r.antecedent,
            RuleRef::Sub(_, r) => &r.antecedent,
        }
    }

    pub fn num_universals(&self) -> usize {
        match self {
            RuleRef::Eq(_, r) => r.uni_names.len(),
            RuleRef::Sub(_, r) => r.uni_names.len(),
        }
    }

    fn equalities(&self) -> &[(Term, Term)] {
        match self {
            RuleRef::Eq(_, r) => &r.equalities,
            RuleRef::Sub(_, _) => &[],
        }
    }

    pub fn adds(&self) -> &[AxAtom] {
        match self {
            RuleRef::Eq(_, r) => &r.adds,
            RuleRef::Sub(_, r) => &r.adds,
        }
    }

    /// Does applying this rule only merge labels (substitutions or new
    /// equalities), as opposed to growing the atom set?
    pub fn is_unifying(&self) -> bool {
        match self {
            RuleRef::Eq(_, r) => r.adds.iter().all(|a| matches!(a, AxAtom::Eq(..))),
            RuleRef::Sub(_, r) => !r.substs.is_empty() && r.adds.is_empty(),
        }
    }

    /// No antecedent to match: applications are generated per label
    /// occurring in the conclusion (the identity and extensibility rules).
    pub fn is_generator(&self) -> bool {
        self.antecedent().is_empty()
    }

    pub fn introduces_fresh(&self) -> bool {
        match self {
            RuleRef::Eq(_, r) => !r.exi_names.is_empty(),
            RuleRef::Sub(_, r) => !r.live_existentials().is_empty(),
        }
    }

    /// Universal variables that occur anywhere in the rule. Conversion can
    /// leave a variable dead (merged away by a side-condition equality);
    /// dead variables are never enumerated when matching.
    fn occurring_universals(&self) -> Vec<bool> {
        let mut used = vec![false; self.num_universals()];
        let mut mark = |t: Term| {
            if let Term::Uni(i) = t {
                used[i] = true;
            }
        };
        for atom in self.antecedent().iter().chain(self.adds()) {
            for t in atom.terms() {
                mark(t);
            }
        }
        for (s, t) in self.equalities() {
            mark(*s);
            mark(*t);
        }
        if let RuleRef::Sub(_, r) = self {
            for &(from, to) in &r.substs {
                mark(Term::Uni(from));
                mark(to);
            }
        }
        used
    }
}

/// Enumerate the rules of the compiled system for one mode.
pub fn rules_for_mode(rules: &CompiledSystem, mode: CalcMode) -> Vec<RuleRef<'_>> {
    match mode {
        CalcMode::Equality => rules
            .structural
            .iter()
            .enumerate()
            .map(|(i, r)| RuleRef::Eq(i, r))
            .collect(),
        CalcMode::Substitution => rules
            .subst
            .iter()
            .enumerate()
            .map(|(i, r)| RuleRef::Sub(i, r))
            .collect(),
    }
}

fn resolve(t: Term, theta: &[Option<Label>]) -> Option<Label> {
    match t {
        Term::Epsilon => Some(Label::EPSILON),
        Term::Uni(i) => theta[i],
        Term::Exi(_) => None,
    }
}

fn bind(t: Term, l: Label, theta: &mut [Option<Label>]) -> bool {
    match t {
        Term::Epsilon => l.is_epsilon(),
        Term::Uni(i) => match theta[i] {
            Some(bound) => bound == l,
            None => {
                theta[i] = Some(l);
                true
            }
        },
        Term::Exi(_) => false,
    }
}

/// All assignments of the rule's antecedent pattern to atoms of the
/// sequent, with unconstrained universals enumerated over the labels
/// occurring in the sequent (plus `eps`). Distinct pattern atoms may match
/// the same sequent atom. The list is duplicate-free and deterministic
/// given the sequent's insertion order.
pub fn match_structural(rule: RuleRef<'_>, s: &Sequent, mode: CalcMode) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = Vec::new();
    let mut theta: Vec<Option<Label>> = vec![None; rule.num_universals()];
    let g_atoms: Vec<RelAtom> = s.g.iter().copied().collect();
    let mut candidates = vec![Label::EPSILON];
    for l in s.labels() {
        if !candidates.contains(&l) {
            candidates.push(l);
        }
    }
    match_atoms(rule, s, mode, &g_atoms, &candidates, 0, &mut theta, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn match_atoms(
    rule: RuleRef<'_>,
    s: &Sequent,
    mode: CalcMode,
    g_atoms: &[RelAtom],
    candidates: &[Label],
    pos: usize,
    theta: &mut Vec<Option<Label>>,
    out: &mut Vec<Vec<Label>>,
) {
    let antecedent = rule.antecedent();
    if pos == antecedent.len() {
        // Enumerate the occurring universals the pattern left unbound;
        // dead variables are pinned to eps.
        let occurring = rule.occurring_universals();
        if let Some(unbound) = theta.iter().position(Option::is_none) {
            if occurring[unbound] {
                for &l in candidates {
                    theta[unbound] = Some(l);
                    match_atoms(rule, s, mode, g_atoms, candidates, pos, theta, out);
                }
            } else {
                theta[unbound] = Some(Label::EPSILON);
                match_atoms(rule, s, mode, g_atoms, candidates, pos, theta, out);
            }
            theta[unbound] = None;
            return;
        }
        // Check the equality side conditions (equality mode only).
        for (a, b) in rule.equalities() {
            let (la, lb) = (
                resolve(*a, theta).expect("bound"),
                resolve(*b, theta).expect("bound"),
            );
            if !mode.labels_agree(s, la, lb) {
                return;
            }
        }
        let binding: Vec<Label> = theta.iter().map(|o| o.expect("bound")).collect();
        if !out.contains(&binding) {
            out.push(binding);
        }
        return;
    }
    let pattern = antecedent[pos];
    match pattern {
        AxAtom::Ternary(p1, p2, p3) => {
            for atom in g_atoms {
                let RelAtom::Ternary(a, b, c) = *atom else {
                    continue;
                };
                let saved = theta.clone();
                if bind(p1, a, theta) && bind(p2, b, theta) && bind(p3, c, theta) {
                    match_atoms(rule, s, mode, g_atoms, candidates, pos + 1, theta, out);
                }
                *theta = saved;
            }
        }
        AxAtom::Neq(p1, p2) => {
            for atom in g_atoms {
                let RelAtom::Neq(a, b) = *atom else {
                    continue;
                };
                // Inequality atoms are unordered; try both orientations.
                for (x, y) in [(a, b), (b, a)] {
                    let saved = theta.clone();
                    if bind(p1, x, theta) && bind(p2, y, theta) {
                        match_atoms(rule, s, mode, g_atoms, candidates, pos + 1, theta, out);
                    }
                    *theta = saved;
                }
            }
        }
        AxAtom::Eq(..) => unreachable!("validated axioms have no equalities in the antecedent"),
    }
}

fn instantiate(atom: &AxAtom, theta: &[Label], sigma: &[(usize, Label)]) -> RelAtom {
    let term = |t: Term| -> Label {
        match t {
            Term::Epsilon => Label::EPSILON,
            Term::Uni(i) => theta[i],
            Term::Exi(i) => {
                sigma
                    .iter()
                    .find(|(j, _)| *j == i)
                    .expect("existential instantiated")
                    .1
            }
        }
    };
    match atom {
        AxAtom::Ternary(a, b, c) => RelAtom::Ternary(term(*a), term(*b), term(*c)),
        AxAtom::Eq(a, b) => RelAtom::eq(term(*a), term(*b)),
        AxAtom::Neq(a, b) => RelAtom::neq(term(*a), term(*b)),
    }
}

/// Would this structural application change nothing? True when there is
/// an instantiation of the existentials by existing labels under which
/// every atom the rule would add is already present (equalities: already
/// derivable). This is both the loop guard of saturation and the
/// saturation-completeness test for counter-model extraction.
pub fn structural_redundant(rule: RuleRef<'_>, s: &Sequent, mode: CalcMode, theta: &[Label]) -> bool {
    match rule {
        RuleRef::Sub(_, r) => {
            // A substitution that renames a label to itself and adds
            // nothing new is redundant.
            let mut chain: Vec<(Label, Label)> = Vec::new();
            let resolve_lbl = |t: Term, chain: &[(Label, Label)], sigma: &[(usize, Label)]| -> Option<Label> {
                let mut l = match t {
                    Term::Epsilon => Label::EPSILON,
                    Term::Uni(i) => theta[i],
                    Term::Exi(i) => sigma.iter().find(|(j, _)| *j == i)?.1,
                };
                for &(f, t) in chain {
                    if l == f {
                        l = t;
                    }
                }
                Some(l)
            };
            for &(from, to) in &r.substs {
                // Fresh targets always change the sequent.
                let Some(to_l) = resolve_lbl(to, &chain, &[]) else {
                    return false;
                };
                let Some(from_l) = resolve_lbl(Term::Uni(from), &chain, &[]) else {
                    return false;
                };
                if from_l != to_l {
                    return false;
                }
                chain.push((from_l, to_l));
            }
            if r.adds.is_empty() {
                return true;
            }
            exists_sigma_with_adds_present(rule, s, mode, theta, &r.live_existentials())
        }
        RuleRef::Eq(_, r) => {
            let live: Vec<usize> = (0..r.exi_names.len()).collect();
            exists_sigma_with_adds_present(rule, s, mode, theta, &live)
        }
    }
}

fn exists_sigma_with_adds_present(
    rule: RuleRef<'_>,
    s: &Sequent,
    mode: CalcMode,
    theta: &[Label],
    live: &[usize],
) -> bool {
    let candidates: Vec<Label> = {
        let mut v = vec![Label::EPSILON];
        for l in s.labels() {
            if !v.contains(&l) {
                v.push(l);
            }
        }
        v
    };
    let mut sigma: Vec<(usize, Label)> = Vec::new();
    fn rec(
        rule: RuleRef<'_>,
        s: &Sequent,
        mode: CalcMode,
        theta: &[Label],
        live: &[usize],
        candidates: &[Label],
        sigma: &mut Vec<(usize, Label)>,
    ) -> bool {
        if sigma.len() == live.len() {
            return rule.adds().iter().all(|add| {
                let atom = instantiate(add, theta, sigma);
                match atom {
                    RelAtom::Eq(a, b) => mode.labels_agree(s, a, b),
                    other => s.contains_atom(&other),
                }
            });
        }
        let exi = live[sigma.len()];
        for &l in candidates {
            sigma.push((exi, l));
            if rec(rule, s, mode, theta, live, candidates, sigma) {
                sigma.pop();
                return true;
            }
            sigma.pop();
        }
        false
    }
    rec(rule, s, mode, theta, live, &candidates, &mut sigma)
}

/// Apply a structural rule under a binding from [`match_structural`].
pub fn apply_structural(
    s: &Sequent,
    rule: RuleRef<'_>,
    theta: &[Label],
    mode: CalcMode,
    fresh: &mut FreshSource,
) -> Result<(RuleInstance, Premises), RuleNotApplicable> {
    if theta.len() != rule.num_universals() {
        return Err(RuleNotApplicable("binding arity mismatch".into()));
    }
    let matched: Vec<RelAtom> = rule
        .antecedent()
        .iter()
        .map(|a| instantiate(a, theta, &[]))
        .collect();
    for atom in &matched {
        if !s.contains_atom(atom) {
            return Err(RuleNotApplicable(format!(
                "matched atom {} not present",
                atom.render()
            )));
        }
    }
    let mut inst = RuleInstance {
        rule: RuleId::Structural(rule.index()),
        name: rule.name().to_owned(),
        principal: None,
        atoms: matched,
        theta: theta.to_vec(),
        pair: None,
        fresh: Vec::new(),
        substs_done: Vec::new(),
    };
    let premise = match rule {
        RuleRef::Eq(_, r) => {
            let lbl = |t: Term| -> Label {
                match t {
                    Term::Epsilon => Label::EPSILON,
                    Term::Uni(i) => theta[i],
                    Term::Exi(_) => unreachable!("equalities mention only universals and eps"),
                }
            };
            for (a, b) in &r.equalities {
                let (la, lb) = (lbl(*a), lbl(*b));
                if !mode.labels_agree(s, la, lb) {
                    return Err(RuleNotApplicable(format!(
                        "equality side condition {la} = {lb} fails"
                    )));
                }
            }
            let mut sigma = Vec::new();
            for i in 0..r.exi_names.len() {
                let l = fresh.next()?;
                debug_assert!(!s.contains_label(l), "fresh label occurs in conclusion");
                inst.fresh.push(l);
                sigma.push((i, l));
            }
            let mut p = s.clone();
            for add in &r.adds {
                p.insert_atom(instantiate(add, theta, &sigma));
            }
            p
        }
        RuleRef::Sub(_, r) => {
            let mut sigma = Vec::new();
            for &i in &r.live_existentials() {
                let l = fresh.next()?;
                debug_assert!(!s.contains_label(l), "fresh label occurs in conclusion");
                inst.fresh.push(l);
                sigma.push((i, l));
            }
            let mut p = s.clone();
            // Later substitutions see the renamings done by earlier ones.
            let mut chain: Vec<(Label, Label)> = Vec::new();
            let follow = |l: Label, chain: &[(Label, Label)]| -> Label {
                let mut l = l;
                for &(f, t) in chain {
                    if l == f {
                        l = t;
                    }
                }
                l
            };
            for &(from, to) in &r.substs {
                let from_l = follow(theta[from], &chain);
                let to_l = follow(
                    match to {
                        Term::Epsilon => Label::EPSILON,
                        Term::Uni(i) => theta[i],
                        Term::Exi(i) => sigma.iter().find(|(j, _)| *j == i).expect("live").1,
                    },
                    &chain,
                );
                if from_l == to_l {
                    continue;
                }
                if from_l.is_epsilon() {
                    return Err(RuleNotApplicable("would substitute eps away".into()));
                }
                p.apply_subst(from_l, to_l).expect("checked");
                chain.push((from_l, to_l));
                inst.substs_done.push((from_l, to_l));
            }
            for add in &r.adds {
                let atom = instantiate(add, theta, &sigma).map(|l| follow(l, &chain));
                p.insert_atom(atom);
            }
            p
        }
    };
    Ok((inst, Premises::One(Box::new(premise))))
}

/// Re-derive the premises of a recorded rule instance from its conclusion.
/// Fresh labels are replayed from the record, so the result is exactly
/// reproducible.
pub fn replay(
    s: &Sequent,
    arena: &FormulaArena,
    mode: CalcMode,
    rules: &CompiledSystem,
    inst: &RuleInstance,
) -> Result<Premises, RuleNotApplicable> {
    let mut fresh = FreshSource::fixed(&inst.fresh);
    match inst.rule {
        RuleId::Close(reason) => {
            let found = close_check(s, arena, mode)
                .ok_or_else(|| RuleNotApplicable("leaf does not close".into()))?;
            // Any closure suffices for validity; require the same kind for
            // faithful replay.
            if found.rule_name() != reason.rule_name() {
                return Err(RuleNotApplicable("closure reason mismatch".into()));
            }
            Ok(Premises::Zero(found))
        }
        RuleId::Em => {
            let (x, y) = inst
                .pair
                .ok_or_else(|| RuleNotApplicable("EM instance lacks a pair".into()))?;
            apply_em(s, mode, x, y).map(|(_, p)| p)
        }
        RuleId::Structural(idx) => {
            let rule = match mode {
                CalcMode::Equality => {
                    let r = rules
                        .structural
                        .get(idx)
                        .ok_or_else(|| RuleNotApplicable("rule index out of range".into()))?;
                    RuleRef::Eq(idx, r)
                }
                CalcMode::Substitution => {
                    let r = rules
                        .subst
                        .get(idx)
                        .ok_or_else(|| RuleNotApplicable("rule index out of range".into()))?;
                    RuleRef::Sub(idx, r)
                }
            };
            apply_structural(s, rule, &inst.theta, mode, &mut fresh).map(|(_, p)| p)
        }
        _ => {
            let (side, label, fid) = inst
                .principal
                .ok_or_else(|| RuleNotApplicable("instance lacks a principal".into()))?;
            let atom = inst.atoms.first().copied();
            apply_logical(s, arena, mode, side, label, fid, atom, &mut fresh).map(|(_, p)| p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::builtin_system;
    use crate::formula::Formula;
    use crate::rules::compile_system;

    fn setup() -> (FormulaArena, LabelAllocator) {
        (FormulaArena::new(), LabelAllocator::new())
    }

    #[test]
    fn close_by_id_with_equalities() {
        let (mut arena, mut alloc) = setup();
        let p = arena.intern(&Formula::atom("p"));
        let (x, y) = (alloc.fresh(), alloc.fresh());
        let mut s = Sequent::new();
        s.insert_back(Side::Gamma, x, p);
        s.insert_back(Side::Delta, y, p);
        assert_eq!(close_check(&s, &arena, CalcMode::Equality), None);
        s.assert_eq(x, y);
        assert_eq!(
            close_check(&s, &arena, CalcMode::Equality),
            Some(ClosureReason::Id(x, y, p))
        );
        // The substitution calculus needs syntactic agreement.
        assert_eq!(close_check(&s, &arena, CalcMode::Substitution), None);
    }

    #[test]
    fn close_by_bot_and_not_by_unprovable_emp() {
        let (mut arena, mut alloc) = setup();
        let bot = arena.intern(&Formula::Bot);
        let emp = arena.intern(&Formula::Emp);
        let x = alloc.fresh();
        let mut s = Sequent::new();
        s.insert_back(Side::Delta, x, emp);
        assert_eq!(close_check(&s, &arena, CalcMode::Equality), None);
        s.insert_back(Side::Gamma, x, bot);
        assert_eq!(
            close_check(&s, &arena, CalcMode::Equality),
            Some(ClosureReason::BotL(x, bot))
        );
    }

    #[test]
    fn star_l_allocates_fresh_labels() {
        let (mut arena, mut alloc) = setup();
        let ab = arena.intern(&Formula::star(Formula::atom("a"), Formula::atom("b")));
        let a = arena.intern(&Formula::atom("a"));
        let b = arena.intern(&Formula::atom("b"));
        let z = alloc.fresh();
        let mut s = Sequent::new();
        s.insert_back(Side::Gamma, z, ab);
        let (inst, prem) = apply_logical(
            &s,
            &arena,
            CalcMode::Substitution,
            Side::Gamma,
            z,
            ab,
            None,
            &mut FreshSource::alloc(&mut alloc),
        )
        .unwrap();
        let [x, y] = inst.fresh[..] else { panic!() };
        let Premises::One(p) = prem else { panic!() };
        assert!(p.contains_atom(&RelAtom::Ternary(x, y, z)));
        assert!(p.contains(Side::Gamma, x, a));
        assert!(p.contains(Side::Gamma, y, b));
        assert!(!p.contains(Side::Gamma, z, ab));
    }

    #[test]
    fn wand_l_keeps_principal_in_both_premises() {
        let (mut arena, mut alloc) = setup();
        let wand = arena.intern(&Formula::wand(Formula::atom("a"), Formula::atom("b")));
        let a = arena.intern(&Formula::atom("a"));
        let b = arena.intern(&Formula::atom("b"));
        let (x, y, z) = (alloc.fresh(), alloc.fresh(), alloc.fresh());
        let mut s = Sequent::new();
        s.insert_back(Side::Gamma, y, wand);
        s.insert_atom(RelAtom::Ternary(x, y, z));
        let (_, prem) = apply_logical(
            &s,
            &arena,
            CalcMode::Substitution,
            Side::Gamma,
            y,
            wand,
            Some(RelAtom::Ternary(x, y, z)),
            &mut FreshSource::alloc(&mut alloc),
        )
        .unwrap();
        let Premises::Two(left, right) = prem else { panic!() };
        assert!(left.contains(Side::Delta, x, a));
        assert!(left.contains(Side::Gamma, y, wand));
        assert!(right.contains(Side::Gamma, z, b));
        assert!(right.contains(Side::Gamma, y, wand));
    }

    #[test]
    fn emp_l_substitutes_globally() {
        let (mut arena, mut alloc) = setup();
        let emp = arena.intern(&Formula::Emp);
        let a = arena.intern(&Formula::atom("a"));
        let w = alloc.fresh();
        let mut s = Sequent::new();
        s.insert_back(Side::Gamma, w, emp);
        s.insert_back(Side::Delta, w, a);
        let (_, prem) = apply_logical(
            &s,
            &arena,
            CalcMode::Substitution,
            Side::Gamma,
            w,
            emp,
            None,
            &mut FreshSource::alloc(&mut alloc),
        )
        .unwrap();
        let Premises::One(p) = prem else { panic!() };
        assert!(p.contains(Side::Delta, Label::EPSILON, a));
        assert!(!p.contains_label(w));
    }

    #[test]
    fn match_commutativity() {
        let cfg = builtin_system("pasl").unwrap();
        let rules = compile_system(&cfg).unwrap();
        let mode = CalcMode::Substitution;
        let refs = rules_for_mode(&rules, mode);
        let com = refs.iter().find(|r| r.name() == "Com").copied().unwrap();
        let mut alloc = LabelAllocator::new();
        let (a, b, c) = (alloc.fresh(), alloc.fresh(), alloc.fresh());
        let mut s = Sequent::new();
        s.insert_atom(RelAtom::Ternary(a, b, c));
        let thetas = match_structural(com, &s, mode);
        assert_eq!(thetas.len(), 1);
        assert_eq!(thetas[0], vec![a, b, c]);
    }

    #[test]
    fn match_associativity_on_atom_pair() {
        let cfg = builtin_system("pasl").unwrap();
        let rules = compile_system(&cfg).unwrap();
        let mode = CalcMode::Substitution;
        let refs = rules_for_mode(&rules, mode);
        let assoc = refs.iter().find(|r| r.name() == "A").copied().unwrap();
        let mut alloc = LabelAllocator::new();
        let (u, y, x, v, w) = (
            alloc.fresh(),
            alloc.fresh(),
            alloc.fresh(),
            alloc.fresh(),
            alloc.fresh(),
        );
        let mut s = Sequent::new();
        s.insert_atom(RelAtom::Ternary(u, y, x));
        s.insert_atom(RelAtom::Ternary(v, w, y));
        let thetas = match_structural(assoc, &s, mode);
        assert_eq!(thetas.len(), 1);
        let (_, prem) = apply_structural(
            &s,
            assoc,
            &thetas[0],
            mode,
            &mut FreshSource::alloc(&mut alloc),
        )
        .unwrap();
        let Premises::One(p) = prem else { panic!() };
        assert_eq!(p.g.len(), 4);
    }

    #[test]
    fn disjointness_needs_syntactic_match_in_subst_mode() {
        let cfg = builtin_system("pasl+d").unwrap();
        let rules = compile_system(&cfg).unwrap();
        let mode = CalcMode::Substitution;
        let refs = rules_for_mode(&rules, mode);
        let d = refs.iter().find(|r| r.name() == "D").copied().unwrap();
        let mut alloc = LabelAllocator::new();
        let (a, b, c) = (alloc.fresh(), alloc.fresh(), alloc.fresh());
        let mut s = Sequent::new();
        s.insert_atom(RelAtom::Ternary(a, b, c));
        assert!(match_structural(d, &s, mode).is_empty());
        s.insert_atom(RelAtom::Ternary(a, a, c));
        assert_eq!(match_structural(d, &s, mode).len(), 1);
    }

    #[test]
    fn em_splits_or_merges() {
        let mut alloc = LabelAllocator::new();
        let (x, y, z) = (alloc.fresh(), alloc.fresh(), alloc.fresh());
        let mut s = Sequent::new();
        s.insert_atom(RelAtom::Ternary(x, y, z));
        let (_, prem) = apply_em(&s, CalcMode::Substitution, x, y).unwrap();
        let Premises::Two(merged, split) = prem else { panic!() };
        assert!(merged.contains_atom(&RelAtom::Ternary(x, x, z)));
        assert!(split.contains_atom(&RelAtom::neq(x, y)));
    }
}
