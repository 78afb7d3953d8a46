//! Structural inference rules synthesized from frame axioms, and their
//! conversion into equality-free rules that act by global label
//! substitution.
//!
//! An axiom `forall xs. (eqs & S1..Sk => exists ys. T1..Tl)` induces,
//! read backwards: if the `S`s match atoms of the sequent and the
//! equalities hold in the equality store, extend the sequent with the
//! `T`s, instantiating the `y`s with fresh labels. The conversion
//! replaces equality reasoning by substitutions: side-condition
//! equalities merge schematic variables in the pattern, and consequent
//! equalities become global substitutions in the premise, one rule per
//! legal substitution direction.

use crate::axiom::{AxAtom, FrameAxiom, SystemConfig, Term, Violation};
use std::fmt;
use thiserror::Error;

/// Equality-mode rule: match `antecedent` in the sequent, require the
/// `equalities` to hold under the equality judgment, then add `adds`,
/// instantiating existentials with fresh labels.
#[derive(Debug, Clone)]
pub struct StructuralRule {
    pub name: String,
    pub axiom_name: String,
    pub uni_names: Vec<String>,
    pub exi_names: Vec<String>,
    pub antecedent: Vec<AxAtom>,
    pub equalities: Vec<(Term, Term)>,
    pub adds: Vec<AxAtom>,
}

/// Substitution-mode rule: match `antecedent` syntactically, apply the
/// `substs` globally to the premise (in order, each replacing one matched
/// label), then add `adds`.
#[derive(Debug, Clone)]
pub struct SubstRule {
    pub name: String,
    pub axiom_name: String,
    pub uni_names: Vec<String>,
    pub exi_names: Vec<String>,
    pub antecedent: Vec<AxAtom>,
    pub substs: Vec<(usize, Term)>,
    pub adds: Vec<AxAtom>,
}

#[derive(Debug, Clone, Error)]
#[error("axiom does not satisfy the frame-axiom conditions: {0:?}")]
pub struct InvalidAxiom(pub Vec<Violation>);

/// Short rule names for the builtin axioms, following the usual
/// presentation of the calculus.
fn short_name(axiom_name: &str) -> String {
    use crate::axiom::builtin_names as n;
    match axiom_name {
        x if x == n::IDENTITY1 => "E".into(),
        x if x == n::IDENTITY2 => "U".into(),
        x if x == n::COMMUTATIVITY => "Com".into(),
        x if x == n::ASSOCIATIVITY => "A".into(),
        x if x == n::CANCELLATIVITY => "C".into(),
        x if x == n::PARTIAL_DETERMINISM => "P".into(),
        x if x == n::INDIVISIBLE_UNIT => "IU".into(),
        x if x == n::DISJOINTNESS => "D".into(),
        x if x == n::SPLITTABILITY => "S".into(),
        x if x == n::CROSS_SPLIT => "CS".into(),
        x if x == n::EXTENSIBILITY => "Ext".into(),
        other => other.into(),
    }
}

/// Turn a validated frame axiom into its general structural rule.
pub fn synthesize_rule(axiom: &FrameAxiom) -> Result<StructuralRule, InvalidAxiom> {
    let violations = axiom.validate();
    if !violations.is_empty() {
        return Err(InvalidAxiom(violations));
    }
    Ok(StructuralRule {
        name: short_name(&axiom.name),
        axiom_name: axiom.name.clone(),
        uni_names: axiom.universals.clone(),
        exi_names: axiom.existentials.clone(),
        antecedent: axiom.antecedent.clone(),
        equalities: axiom.equalities.clone(),
        adds: axiom.consequent.clone(),
    })
}

fn subst_term(t: Term, from: Term, to: Term) -> Term {
    if t == from {
        to
    } else {
        t
    }
}

fn subst_atom(a: &AxAtom, from: Term, to: Term) -> AxAtom {
    a.map(|t| subst_term(t, from, to))
}

/// Convert a structural rule to its substitution-based forms.
///
/// Step 1 deletes each equality side condition, merging the two schematic
/// terms (toward `eps` when one side is `eps`). Step 2 deletes each
/// consequent equality and replaces it by a premise-wide substitution, one
/// output rule per direction that does not substitute `eps` away.
/// Outputs identical up to variable renaming are deduplicated.
pub fn to_subst_rules(rule: &StructuralRule) -> Vec<SubstRule> {
    // Step 1: merge pattern variables mentioned by side-condition equalities.
    let mut ante = rule.antecedent.clone();
    let mut adds = rule.adds.clone();
    let mut eqs = rule.equalities.clone();
    while !eqs.is_empty() {
        let (s, t) = eqs.remove(0);
        if s == t {
            continue;
        }
        let (from, to) = if t != Term::Epsilon { (t, s) } else { (s, Term::Epsilon) };
        for a in ante.iter_mut().chain(adds.iter_mut()) {
            *a = subst_atom(a, from, to);
        }
        for (x, y) in eqs.iter_mut() {
            *x = subst_term(*x, from, to);
            *y = subst_term(*y, from, to);
        }
    }

    // Step 2: branch on the direction of each consequent equality.
    let mut results = Vec::new();
    branch_on_equalities(adds, Vec::new(), &mut results);

    let mut out: Vec<SubstRule> = Vec::new();
    for (adds, substs) in results {
        let runtime_substs: Vec<(usize, Term)> = substs
            .iter()
            .filter_map(|&(from, to)| match from {
                Term::Uni(i) => Some((i, to)),
                // An eliminated existential never materializes; nothing to
                // substitute at run time.
                _ => None,
            })
            .collect();
        let candidate = SubstRule {
            name: rule.name.clone(),
            axiom_name: rule.axiom_name.clone(),
            uni_names: rule.uni_names.clone(),
            exi_names: rule.exi_names.clone(),
            antecedent: ante.clone(),
            substs: runtime_substs,
            adds,
        };
        let key = canonical_subst_key(&candidate);
        if !out.iter().any(|r| canonical_subst_key(r) == key) {
            out.push(candidate);
        }
    }
    // Give the split variants distinct names (e.g. E1, E2).
    if out.len() > 1 {
        for (i, r) in out.iter_mut().enumerate() {
            r.name = format!("{}{}", r.name, i + 1);
        }
    }
    out
}

fn branch_on_equalities(
    adds: Vec<AxAtom>,
    substs: Vec<(Term, Term)>,
    out: &mut Vec<(Vec<AxAtom>, Vec<(Term, Term)>)>,
) {
    let Some(pos) = adds.iter().position(|a| matches!(a, AxAtom::Eq(..))) else {
        out.push((adds, substs));
        return;
    };
    let mut rest = adds;
    let AxAtom::Eq(u, v) = rest.remove(pos) else {
        unreachable!()
    };
    if u == v {
        branch_on_equalities(rest, substs, out);
        return;
    }
    // Substituting the later term by the earlier first matches the usual
    // presentation ([x/z] before [z/x] for the rule split from identity).
    for (from, to) in [(v, u), (u, v)] {
        if from == Term::Epsilon {
            continue;
        }
        let mapped: Vec<AxAtom> = rest.iter().map(|a| subst_atom(a, from, to)).collect();
        let mut substs = substs.clone();
        // Rewrite earlier targets so chains resolve at run time in order.
        for (_, t) in substs.iter_mut() {
            *t = subst_term(*t, from, to);
        }
        substs.push((from, to));
        branch_on_equalities(mapped, substs, out);
    }
}

// --- canonical forms, used for deduplication and golden comparisons ---

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for i in 0..n {
            let mut p = rest.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out
}

#[derive(Default)]
struct Renamer {
    map: Vec<(Term, u32)>,
}

impl Renamer {
    fn encode(&mut self, t: Term) -> String {
        if t == Term::Epsilon {
            return "e".into();
        }
        if let Some(&(_, id)) = self.map.iter().find(|(k, _)| *k == t) {
            return format!("v{id}");
        }
        let id = self.map.len() as u32;
        self.map.push((t, id));
        format!("v{id}")
    }

    fn encode_atom(&mut self, a: &AxAtom) -> String {
        match a {
            AxAtom::Ternary(x, y, z) => {
                format!("R({},{},{})", self.encode(*x), self.encode(*y), self.encode(*z))
            }
            AxAtom::Eq(x, y) => {
                let (x, y) = (self.encode(*x), self.encode(*y));
                let mut pair = [x, y];
                pair.sort();
                format!("Eq({},{})", pair[0], pair[1])
            }
            AxAtom::Neq(x, y) => {
                let (x, y) = (self.encode(*x), self.encode(*y));
                let mut pair = [x, y];
                pair.sort();
                format!("Ne({},{})", pair[0], pair[1])
            }
        }
    }
}

fn canonical_key_parts(
    antecedent: &[AxAtom],
    equalities: &[(Term, Term)],
    substs: &[(Term, Term)],
    adds: &[AxAtom],
) -> String {
    let mut best: Option<String> = None;
    for pa in permutations(antecedent.len()) {
        for padds in permutations(adds.len()) {
            let mut r = Renamer::default();
            let mut s = String::new();
            s.push('[');
            for &i in &pa {
                s.push_str(&r.encode_atom(&antecedent[i]));
                s.push(';');
            }
            s.push(']');
            // Equality side conditions are unordered; encode each pair
            // orientation-insensitively and sort the list.
            let mut eq_parts: Vec<String> = equalities
                .iter()
                .map(|(a, b)| {
                    let (a, b) = (r.encode(*a), r.encode(*b));
                    let mut pair = [a, b];
                    pair.sort();
                    format!("{}={}", pair[0], pair[1])
                })
                .collect();
            eq_parts.sort();
            s.push_str(&eq_parts.join(","));
            s.push('|');
            for (from, to) in substs {
                s.push_str(&format!("{{{}:={}}}", r.encode(*from), r.encode(*to)));
            }
            s.push('|');
            for &i in &padds {
                s.push_str(&r.encode_atom(&adds[i]));
                s.push(';');
            }
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    best.unwrap_or_default()
}

/// Canonical encoding of a structural rule, invariant under variable
/// renaming and reordering of the atom sets.
pub fn canonical_structural_key(rule: &StructuralRule) -> String {
    canonical_key_parts(&rule.antecedent, &rule.equalities, &[], &rule.adds)
}

/// Canonical encoding of a substitution rule.
pub fn canonical_subst_key(rule: &SubstRule) -> String {
    let substs: Vec<(Term, Term)> = rule
        .substs
        .iter()
        .map(|&(i, to)| (Term::Uni(i), to))
        .collect();
    canonical_key_parts(&rule.antecedent, &[], &substs, &rule.adds)
}

impl StructuralRule {
    fn term_name(&self, t: Term) -> String {
        match t {
            Term::Epsilon => "eps".into(),
            Term::Uni(i) => self.uni_names[i].clone(),
            Term::Exi(i) => self.exi_names[i].clone(),
        }
    }

    fn atom_text(&self, a: &AxAtom) -> String {
        atom_text(a, &|t| self.term_name(t))
    }
}

impl SubstRule {
    fn term_name(&self, t: Term) -> String {
        match t {
            Term::Epsilon => "eps".into(),
            Term::Uni(i) => self.uni_names[i].clone(),
            Term::Exi(i) => self.exi_names[i].clone(),
        }
    }

    fn atom_text(&self, a: &AxAtom) -> String {
        atom_text(a, &|t| self.term_name(t))
    }

    /// Existentials that actually survive conversion and need fresh labels.
    pub fn live_existentials(&self) -> Vec<usize> {
        let mut live = Vec::new();
        let mut push = |t: Term| {
            if let Term::Exi(i) = t {
                if !live.contains(&i) {
                    live.push(i);
                }
            }
        };
        for a in &self.adds {
            for t in a.terms() {
                push(t);
            }
        }
        for &(_, to) in &self.substs {
            push(to);
        }
        live.sort();
        live
    }
}

fn atom_text(a: &AxAtom, name: &dyn Fn(Term) -> String) -> String {
    match a {
        AxAtom::Ternary(x, y, z) => format!("({},{} > {})", name(*x), name(*y), name(*z)),
        AxAtom::Eq(x, y) => format!("{} = {}", name(*x), name(*y)),
        AxAtom::Neq(x, y) => format!("{} != {}", name(*x), name(*y)),
    }
}

impl fmt::Display for StructuralRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ante: Vec<_> = self.antecedent.iter().map(|a| self.atom_text(a)).collect();
        write!(f, "{}: {}", self.name, ante.join("; "))?;
        if !self.equalities.is_empty() {
            let eqs: Vec<_> = self
                .equalities
                .iter()
                .map(|(s, t)| format!("{} = {}", self.term_name(*s), self.term_name(*t)))
                .collect();
            write!(f, " | {}", eqs.join(", "))?;
        }
        write!(f, " ==> ")?;
        if !self.exi_names.is_empty() {
            write!(f, "exists {}. ", self.exi_names.join(" "))?;
        }
        let adds: Vec<_> = self.adds.iter().map(|a| self.atom_text(a)).collect();
        write!(f, "{}", adds.join("; "))
    }
}

impl fmt::Display for SubstRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ante: Vec<_> = self.antecedent.iter().map(|a| self.atom_text(a)).collect();
        write!(f, "{}: {} ==> ", self.name, ante.join("; "))?;
        for &(from, to) in &self.substs {
            write!(
                f,
                "[{}/{}]",
                self.term_name(to),
                self.term_name(Term::Uni(from))
            )?;
        }
        let live = self.live_existentials();
        if !live.is_empty() {
            let names: Vec<_> = live.iter().map(|&i| self.exi_names[i].clone()).collect();
            write!(f, " fresh {}.", names.join(" "))?;
        }
        let adds: Vec<_> = self.adds.iter().map(|a| self.atom_text(a)).collect();
        write!(f, " {}", adds.join("; "))
    }
}

/// Rules for a whole system, in both calculi.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    pub structural: Vec<StructuralRule>,
    pub subst: Vec<SubstRule>,
}

/// Validate and compile every axiom of a configuration. The
/// indivisible-unit shortcut, when enabled, contributes its rules even
/// though the axiom itself is not part of the system.
pub fn compile_system(cfg: &SystemConfig) -> Result<CompiledSystem, InvalidAxiom> {
    let mut axioms: Vec<FrameAxiom> = cfg.axioms.clone();
    if cfg.include_iu_shortcut {
        let iu = crate::axiom::builtin_axiom(crate::axiom::builtin_names::INDIVISIBLE_UNIT)
            .expect("builtin");
        if !axioms.iter().any(|a| a.name == iu.name) {
            axioms.push(iu);
        }
    }
    let mut structural = Vec::new();
    let mut subst = Vec::new();
    for axiom in &axioms {
        let rule = synthesize_rule(axiom)?;
        subst.extend(to_subst_rules(&rule));
        structural.push(rule);
    }
    Ok(CompiledSystem { structural, subst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::{builtin_axiom, builtin_names as n};

    fn rule(name: &str) -> StructuralRule {
        synthesize_rule(&builtin_axiom(name).unwrap()).unwrap()
    }

    #[test]
    fn identity1_splits_into_two_subst_rules() {
        let rules = to_subst_rules(&rule(n::IDENTITY1));
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].name, "E1");
        assert_eq!(rules[1].name, "E2");
        // Pattern is (x, eps > z) in both.
        for r in &rules {
            assert_eq!(r.antecedent.len(), 1);
            assert!(matches!(
                r.antecedent[0],
                AxAtom::Ternary(_, Term::Epsilon, _)
            ));
            assert_eq!(r.substs.len(), 1);
            assert!(r.adds.is_empty());
        }
    }

    #[test]
    fn cancellativity_variants_collapse() {
        let rules = to_subst_rules(&rule(n::CANCELLATIVITY));
        assert_eq!(rules.len(), 1);
        let c = &rules[0];
        assert_eq!(c.antecedent.len(), 2);
        assert_eq!(c.substs.len(), 1);
        assert!(c.adds.is_empty());
    }

    #[test]
    fn partial_determinism_single_rule() {
        let rules = to_subst_rules(&rule(n::PARTIAL_DETERMINISM));
        assert_eq!(rules.len(), 1);
    }

    #[test]
    fn disjointness_substitutes_toward_epsilon() {
        let rules = to_subst_rules(&rule(n::DISJOINTNESS));
        assert_eq!(rules.len(), 1);
        let d = &rules[0];
        // (x,x > z) pattern with [eps/x]; the matched atom becomes
        // (eps,eps > z) through the substitution itself.
        assert_eq!(d.antecedent.len(), 1);
        match d.antecedent[0] {
            AxAtom::Ternary(a, b, _) => assert_eq!(a, b),
            ref other => panic!("unexpected pattern {other:?}"),
        }
        assert_eq!(d.substs, vec![(0, Term::Epsilon)]);
        assert!(d.adds.is_empty());
    }

    #[test]
    fn splittability_converts_unchanged() {
        let rules = to_subst_rules(&rule(n::SPLITTABILITY));
        assert_eq!(rules.len(), 1);
        assert!(rules[0].substs.is_empty());
        assert_eq!(rules[0].adds.len(), 3);
        assert_eq!(rules[0].live_existentials(), vec![0, 1]);
    }

    #[test]
    fn canonical_key_ignores_renaming_and_order() {
        let a = rule(n::ASSOCIATIVITY);
        let mut b = a.clone();
        b.uni_names = vec!["u".into(), "v".into(), "w".into(), "x".into(), "y".into(), "y'".into()];
        b.antecedent.reverse();
        b.adds.reverse();
        assert_eq!(canonical_structural_key(&a), canonical_structural_key(&b));
    }
}
