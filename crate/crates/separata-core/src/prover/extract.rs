//! Counter-model extraction from a saturated open branch: worlds are the
//! equality classes of the labels in the branch, the relation comes from
//! the ternary atoms, and the valuation reads off the left-hand atomic
//! formulas.

use crate::axiom::{AxAtom, FrameAxiom, Term};
use crate::calculus::{close_check, CalcMode};
use crate::formula::{FormulaArena, Node};
use crate::label::Label;
use crate::semantics::{violating_assignment, KripkeModel};
use crate::sequent::{RelAtom, Sequent};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("branch is not a saturated open branch")]
pub struct NotSaturated;

/// Build the candidate model for a saturated branch. The caller is
/// responsible for validating the candidate (frame axioms, falsifiability)
/// before trusting it. Fails on branches that are closed outright.
pub fn extract_model(
    s: &Sequent,
    arena: &FormulaArena,
    mode: CalcMode,
) -> Result<KripkeModel, NotSaturated> {
    if close_check(s, arena, mode).is_some() {
        return Err(NotSaturated);
    }
    // One world per equality class; in substitution mode every label is
    // already its own class.
    let mut labels = vec![Label::EPSILON];
    for l in s.labels() {
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let class_of = |l: Label| -> Label {
        match mode {
            CalcMode::Equality => s.eq.repr(l),
            CalcMode::Substitution => l,
        }
    };
    let mut worlds: Vec<Label> = Vec::new();
    for &l in &labels {
        let c = class_of(l);
        if !worlds.contains(&c) {
            worlds.push(c);
        }
    }
    let world_names: Vec<String> = worlds.iter().map(Label::to_string).collect();
    let name_of = |l: Label| class_of(l).to_string();

    let mut triples = Vec::new();
    for atom in &s.g {
        if let RelAtom::Ternary(a, b, c) = *atom {
            triples.push((name_of(a), name_of(b), name_of(c)));
        }
    }
    let mut valuation: Vec<(String, Vec<String>)> = Vec::new();
    for (l, f) in s.gamma() {
        if let Node::Atom(p) = arena.node(f) {
            let atom_name = arena.atom_name(p).to_owned();
            let world = name_of(l);
            match valuation.iter_mut().find(|(a, _)| *a == atom_name) {
                Some((_, ws)) => {
                    if !ws.contains(&world) {
                        ws.push(world);
                    }
                }
                None => valuation.push((atom_name, vec![world])),
            }
        }
    }
    let rho: Vec<(String, String)> = labels
        .iter()
        .map(|&l| (l.to_string(), name_of(l)))
        .collect();
    KripkeModel::new(world_names, "eps", &triples, &valuation, &rho)
        .map_err(|_| NotSaturated)
}

/// Try to repair a candidate model that violates some frame axioms by
/// adding triples over its existing worlds, choosing witnesses for the
/// existentials among those worlds. A finite open branch often describes
/// only a fragment of a model (associativity, say, may demand
/// compositions the branch never needed); this closes the fragment when a
/// closure exists within the same world set. Pure search with
/// backtracking; the result must still pass validation by the caller.
pub fn complete_model(
    m: &KripkeModel,
    axioms: &[FrameAxiom],
    max_added: usize,
) -> Option<KripkeModel> {
    let violated = axioms
        .iter()
        .find(|ax| violating_assignment(m, ax).is_some());
    let Some(ax) = violated else {
        return Some(m.clone());
    };
    if max_added == 0 {
        return None;
    }
    let mu = violating_assignment(m, ax).expect("just found");
    let n = m.world_count();
    let value = |t: Term, sigma: &[usize]| -> usize {
        match t {
            Term::Epsilon => m.epsilon(),
            Term::Uni(i) => mu[i],
            Term::Exi(i) => sigma[i],
        }
    };
    // Enumerate witness assignments for the existentials.
    let mut sigma = vec![0usize; ax.existentials.len()];
    loop {
        let mut additions: Vec<(usize, usize, usize)> = Vec::new();
        let mut feasible = true;
        for atom in &ax.consequent {
            match atom {
                AxAtom::Ternary(a, b, c) => {
                    let t = (value(*a, &sigma), value(*b, &sigma), value(*c, &sigma));
                    if !m.has_triple(t.0, t.1, t.2) && !additions.contains(&t) {
                        additions.push(t);
                    }
                }
                AxAtom::Eq(a, b) => {
                    // Worlds are fixed; an equality can only be satisfied,
                    // never enforced.
                    if value(*a, &sigma) != value(*b, &sigma) {
                        feasible = false;
                        break;
                    }
                }
                AxAtom::Neq(a, b) => {
                    if value(*a, &sigma) == value(*b, &sigma) {
                        feasible = false;
                        break;
                    }
                }
            }
        }
        if feasible && !additions.is_empty() && additions.len() <= max_added {
            let extended = m.with_triples(&additions);
            if let Some(done) =
                complete_model(&extended, axioms, max_added - additions.len())
            {
                return Some(done);
            }
        }
        // Next sigma, odometer-style.
        let mut pos = 0;
        loop {
            if pos == sigma.len() {
                return None;
            }
            sigma[pos] += 1;
            if sigma[pos] < n {
                break;
            }
            sigma[pos] = 0;
            pos += 1;
        }
    }
}
