//! Finite Kripke relational models: the forcing relation, frame-axiom
//! checking by exhaustive quantifier enumeration, sequent falsifiability,
//! and small concrete-model constructors. This module is the semantic
//! oracle the prover is tested against; it favours clarity over speed and
//! is intended for models of at most a dozen worlds.

use crate::axiom::{AxAtom, FrameAxiom, Term};
use crate::formula::{Formula, FormulaArena};
use crate::label::Label;
use crate::sequent::{RelAtom, Sequent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("epsilon world `{0}` is not in the world set")]
    BadEpsilon(String),
    #[error("label mapping must send eps to the epsilon world")]
    RhoEpsilon,
    #[error("label `{0}` is not mapped to a world")]
    UnmappedLabel(String),
    #[error("duplicate world name `{0}`")]
    DuplicateWorld(String),
    #[error("model file: {0}")]
    Format(String),
}

/// A finite frame `(H, R, eps)` with a valuation and an optional label
/// mapping. Worlds are indices internally; names appear in the file format
/// and in reports.
#[derive(Debug, Clone)]
pub struct KripkeModel {
    worlds: Vec<String>,
    epsilon: usize,
    rel: HashSet<(usize, usize, usize)>,
    /// Triples grouped by result world (for `*`).
    by_result: Vec<Vec<(usize, usize)>>,
    /// Triples grouped by first component (for `-*`).
    by_first: Vec<Vec<(usize, usize)>>,
    valuation: HashMap<String, HashSet<usize>>,
    rho: HashMap<String, usize>,
}

impl KripkeModel {
    pub fn new(
        worlds: Vec<String>,
        epsilon: &str,
        triples: &[(String, String, String)],
        valuation: &[(String, Vec<String>)],
        rho: &[(String, String)],
    ) -> Result<Self, ModelError> {
        let mut index = HashMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownWorld(name.to_owned()))
        };
        let epsilon = lookup(epsilon).map_err(|_| ModelError::BadEpsilon(epsilon.to_owned()))?;
        let mut rel = HashSet::new();
        for (a, b, c) in triples {
            rel.insert((lookup(a)?, lookup(b)?, lookup(c)?));
        }
        let mut val = HashMap::new();
        for (atom, ws) in valuation {
            let mut set = HashSet::new();
            for w in ws {
                set.insert(lookup(w)?);
            }
            val.insert(atom.clone(), set);
        }
        let mut rho_map = HashMap::new();
        for (label, world) in rho {
            rho_map.insert(label.clone(), lookup(world)?);
        }
        if let Some(&e) = rho_map.get("eps") {
            if e != epsilon {
                return Err(ModelError::RhoEpsilon);
            }
        }
        rho_map.insert("eps".to_owned(), epsilon);
        let mut by_result = vec![Vec::new(); worlds.len()];
        let mut by_first = vec![Vec::new(); worlds.len()];
        let mut sorted: Vec<_> = rel.iter().copied().collect();
        sorted.sort();
        for (a, b, c) in sorted {
            by_result[c].push((a, b));
            by_first[a].push((b, c));
        }
        Ok(KripkeModel {
            worlds,
            epsilon,
            rel,
            by_result,
            by_first,
            valuation: val,
            rho: rho_map,
        })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world_index(&self, name: &str) -> Result<usize, ModelError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_owned()))
    }

    pub fn epsilon(&self) -> usize {
        self.epsilon
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.rel.iter().copied()
    }

    pub fn has_triple(&self, a: usize, b: usize, c: usize) -> bool {
        self.rel.contains(&(a, b, c))
    }

    pub fn set_valuation(&mut self, atom: &str, worlds: &[usize]) {
        self.valuation
            .insert(atom.to_owned(), worlds.iter().copied().collect());
    }

    pub fn rho(&self, label: Label) -> Option<usize> {
        self.rho.get(&label.to_string()).copied()
    }

    pub fn set_rho(&mut self, label: Label, world: usize) {
        self.rho.insert(label.to_string(), world);
    }

    /// The same model with extra triples (worlds, valuation and label
    /// mapping unchanged).
    pub fn with_triples(&self, extra: &[(usize, usize, usize)]) -> KripkeModel {
        let mut m = self.clone();
        for &t in extra {
            m.rel.insert(t);
        }
        m.by_result = vec![Vec::new(); m.worlds.len()];
        m.by_first = vec![Vec::new(); m.worlds.len()];
        let mut sorted: Vec<_> = m.rel.iter().copied().collect();
        sorted.sort();
        for (a, b, c) in sorted {
            m.by_result[c].push((a, b));
            m.by_first[a].push((b, c));
        }
        m
    }

    /// The forcing relation at world `h`.
    pub fn eval(&self, h: usize, f: &Formula) -> Result<bool, ModelError> {
        if h >= self.worlds.len() {
            return Err(ModelError::UnknownWorld(format!("#{h}")));
        }
        Ok(self.force(h, f))
    }

    fn force(&self, h: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => self.valuation.get(p).is_some_and(|s| s.contains(&h)),
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Emp => h == self.epsilon,
            Formula::Not(a) => !self.force(h, a),
            Formula::And(a, b) => self.force(h, a) && self.force(h, b),
            Formula::Or(a, b) => self.force(h, a) || self.force(h, b),
            Formula::Imp(a, b) => !self.force(h, a) || self.force(h, b),
            Formula::Star(a, b) => self.by_result[h]
                .iter()
                .any(|&(h1, h2)| self.force(h1, a) && self.force(h2, b)),
            Formula::Wand(a, b) => self.by_first[h]
                .iter()
                .all(|&(h1, h2)| !self.force(h1, a) || self.force(h2, b)),
        }
    }

    /// True at every world?
    pub fn valid_everywhere(&self, f: &Formula) -> bool {
        (0..self.worlds.len()).all(|h| self.force(h, f))
    }

    /// First world falsifying `f`, if any.
    pub fn falsifying_world(&self, f: &Formula) -> Option<usize> {
        (0..self.worlds.len()).find(|&h| !self.force(h, f))
    }
}

/// A frame-axiom violation: the witnessing assignment of the universal
/// variables, by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameViolation {
    pub axiom: String,
    pub witness: Vec<(String, String)>,
}

/// Evaluate each axiom as a first-order sentence over the worlds by
/// exhaustive enumeration; returns one violation (with witness) per
/// failing axiom.
pub fn check_frame(m: &KripkeModel, axioms: &[FrameAxiom]) -> Vec<FrameViolation> {
    axioms
        .iter()
        .filter_map(|ax| {
            check_axiom(m, ax).map(|witness| FrameViolation {
                axiom: ax.name.clone(),
                witness: witness
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| (ax.universals[i].clone(), m.worlds[w].clone()))
                    .collect(),
            })
        })
        .collect()
}

/// Some assignment of the universals refuting the axiom, or `None` if the
/// frame satisfies it.
pub fn violating_assignment(m: &KripkeModel, ax: &FrameAxiom) -> Option<Vec<usize>> {
    check_axiom(m, ax)
}

fn check_axiom(m: &KripkeModel, ax: &FrameAxiom) -> Option<Vec<usize>> {
    let mut mu = vec![0usize; ax.universals.len()];
    search_universals(m, ax, 0, &mut mu)
}

fn term_value(t: Term, m: &KripkeModel, mu: &[usize], sigma: &[usize]) -> Option<usize> {
    match t {
        Term::Epsilon => Some(m.epsilon),
        Term::Uni(i) => mu.get(i).copied(),
        Term::Exi(i) => sigma.get(i).copied(),
    }
}

fn atom_holds(a: &AxAtom, m: &KripkeModel, mu: &[usize], sigma: &[usize]) -> Option<bool> {
    let v = |t: Term| term_value(t, m, mu, sigma);
    Some(match a {
        AxAtom::Ternary(x, y, z) => m.rel.contains(&(v(*x)?, v(*y)?, v(*z)?)),
        AxAtom::Eq(x, y) => v(*x)? == v(*y)?,
        AxAtom::Neq(x, y) => v(*x)? != v(*y)?,
    })
}

fn search_universals(m: &KripkeModel, ax: &FrameAxiom, depth: usize, mu: &mut Vec<usize>) -> Option<Vec<usize>> {
    // Prune as soon as a fully-assigned antecedent conjunct fails.
    let assigned = &mu[..depth];
    let lhs_holds = |limit: usize| -> bool {
        let mu_part = &mu[..limit];
        for (s, t) in &ax.equalities {
            if let (Some(a), Some(b)) = (
                term_value(*s, m, mu_part, &[]),
                term_value(*t, m, mu_part, &[]),
            ) {
                if a != b {
                    return false;
                }
            }
        }
        for atom in &ax.antecedent {
            if let Some(holds) = atom_holds(atom, m, mu_part, &[]) {
                if !holds {
                    return false;
                }
            }
        }
        true
    };
    if !lhs_holds(assigned.len()) {
        return None;
    }
    if depth == ax.universals.len() {
        // Antecedent satisfied: look for existentials making the consequent true.
        let mut sigma = Vec::new();
        if satisfy_existentials(m, ax, mu, &mut sigma) {
            return None;
        }
        return Some(mu.clone());
    }
    for w in 0..m.worlds.len() {
        if depth < mu.len() {
            mu[depth] = w;
        } else {
            mu.push(w);
        }
        if let Some(witness) = search_universals(m, ax, depth + 1, mu) {
            return Some(witness);
        }
    }
    None
}

fn satisfy_existentials(m: &KripkeModel, ax: &FrameAxiom, mu: &[usize], sigma: &mut Vec<usize>) -> bool {
    // Prune on any consequent conjunct that is already fully assigned.
    for atom in &ax.consequent {
        if let Some(holds) = atom_holds(atom, m, mu, sigma) {
            if !holds {
                return false;
            }
        }
    }
    if sigma.len() == ax.existentials.len() {
        return true;
    }
    for w in 0..m.worlds.len() {
        sigma.push(w);
        if satisfy_existentials(m, ax, mu, sigma) {
            sigma.pop();
            return true;
        }
        sigma.pop();
    }
    false
}

/// Is the sequent falsifiable in this extended model? Every left formula
/// must be forced at its world, every relational atom must hold under the
/// label mapping, and every right formula must fail at its world.
pub fn falsifiable(m: &KripkeModel, s: &Sequent, arena: &FormulaArena) -> Result<bool, ModelError> {
    let rho = |l: Label| -> Result<usize, ModelError> {
        m.rho(l).ok_or_else(|| ModelError::UnmappedLabel(l.to_string()))
    };
    for atom in &s.g {
        let ok = match *atom {
            RelAtom::Ternary(a, b, c) => m.rel.contains(&(rho(a)?, rho(b)?, rho(c)?)),
            RelAtom::Eq(a, b) => rho(a)? == rho(b)?,
            RelAtom::Neq(a, b) => rho(a)? != rho(b)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    for (l, f) in s.gamma() {
        if !m.force(rho(l)?, &arena.to_formula(f)) {
            return Ok(false);
        }
    }
    for (l, f) in s.delta() {
        if m.force(rho(l)?, &arena.to_formula(f)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("requested heap frame has {worlds} worlds, above the cap of {cap}")]
pub struct CapExceeded {
    pub worlds: usize,
    pub cap: usize,
}

/// A heap world: a partial function from `locations` to `values`,
/// rendered like `{1:2,3:1}`.
fn heap_name(cells: &[Option<u32>]) -> String {
    let parts: Vec<String> = cells
        .iter()
        .enumerate()
        .filter_map(|(l, v)| v.map(|v| format!("{}:{}", l + 1, v)))
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// The heap frame over `locations` cells and `values` possible contents:
/// worlds are partial functions, composition is union of disjoint-domain
/// heaps, `{}` is the unit. No valuation is set.
pub fn heap_frame(locations: u32, values: u32, cap: usize) -> Result<KripkeModel, CapExceeded> {
    let n_worlds = (values as usize + 1).pow(locations);
    if n_worlds > cap {
        return Err(CapExceeded {
            worlds: n_worlds,
            cap,
        });
    }
    let mut heaps: Vec<Vec<Option<u32>>> = vec![vec![]];
    for _ in 0..locations {
        let mut next = Vec::new();
        for h in &heaps {
            for v in std::iter::once(None).chain((1..=values).map(Some)) {
                let mut h2 = h.clone();
                h2.push(v);
                next.push(h2);
            }
        }
        heaps = next;
    }
    let names: Vec<String> = heaps.iter().map(|h| heap_name(h)).collect();
    let mut triples = Vec::new();
    for (i, h1) in heaps.iter().enumerate() {
        for (j, h2) in heaps.iter().enumerate() {
            // Disjoint domains?
            if h1
                .iter()
                .zip(h2.iter())
                .any(|(a, b)| a.is_some() && b.is_some())
            {
                continue;
            }
            let union: Vec<Option<u32>> = h1
                .iter()
                .zip(h2.iter())
                .map(|(a, b)| a.or(*b))
                .collect();
            let k = heaps.iter().position(|h| *h == union).expect("closed");
            triples.push((names[i].clone(), names[j].clone(), names[k].clone()));
        }
    }
    let epsilon = heap_name(&vec![None; locations as usize]);
    KripkeModel::new(names.clone(), &epsilon, &triples, &[], &[])
        .map_err(|_| unreachable!("heap frame construction is closed"))
}

/// Heap models: the frame crossed with valuations over the given atoms.
/// All valuations are produced when there are at most `max_valuations` of
/// them; otherwise that many are sampled, deterministically per `seed`.
pub fn enumerate_heap_models(
    locations: u32,
    values: u32,
    atoms: &[String],
    cap: usize,
    max_valuations: usize,
    seed: u64,
) -> Result<Vec<KripkeModel>, CapExceeded> {
    let frame = heap_frame(locations, values, cap)?;
    let n = frame.world_count();
    let exhaustive_total = if n < usize::BITS as usize - 1 {
        (1usize << n).checked_pow(atoms.len() as u32)
    } else {
        None
    };
    let with_valuation = |codes: &[usize]| {
        let mut m = frame.clone();
        for (atom, &subset) in atoms.iter().zip(codes) {
            let worlds: Vec<usize> = (0..n).filter(|i| subset & (1 << i) != 0).collect();
            m.set_valuation(atom, &worlds);
        }
        m
    };
    let mut models = Vec::new();
    match exhaustive_total {
        Some(total) if total <= max_valuations => {
            let subsets_per_atom = 1usize << n;
            for mut code in 0..total {
                let codes: Vec<usize> = atoms
                    .iter()
                    .map(|_| {
                        let s = code % subsets_per_atom;
                        code /= subsets_per_atom;
                        s
                    })
                    .collect();
                models.push(with_valuation(&codes));
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..max_valuations {
                let codes: Vec<usize> = atoms
                    .iter()
                    .map(|_| rng.gen_range(0..(1usize << n)))
                    .collect();
                models.push(with_valuation(&codes));
            }
        }
    }
    Ok(models)
}

/// Total commutative monoid from a composition function; partiality is
/// encoded by `None`.
pub fn make_monoid(
    names: &[&str],
    unit: &str,
    compose: impl Fn(usize, usize) -> Option<usize>,
) -> KripkeModel {
    let mut triples = Vec::new();
    for a in 0..names.len() {
        for b in 0..names.len() {
            if let Some(c) = compose(a, b) {
                triples.push((
                    names[a].to_owned(),
                    names[b].to_owned(),
                    names[c].to_owned(),
                ));
            }
        }
    }
    KripkeModel::new(
        names.iter().map(|s| s.to_string()).collect(),
        unit,
        &triples,
        &[],
        &[],
    )
    .expect("monoid tables are closed")
}

/// The additive group Z_n presented as a frame: worlds `0..n-1`,
/// `R(a,b,c)` iff `a + b = c (mod n)`.
pub fn zn_model(n: u32) -> KripkeModel {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    make_monoid(&refs, "0", |a, b| Some((a + b) % n as usize))
}

/// Fractional permissions on one location with one value, truncated to
/// denominators of `den`: worlds are `eps` and the shares `1/den ..
/// den/den`; shares compose by addition when the sum stays at or below 1.
pub fn fractional_model(den: u32) -> KripkeModel {
    let mut names = vec!["eps".to_owned()];
    names.extend((1..=den).map(|i| format!("{i}/{den}")));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    make_monoid(&refs, "eps", move |a, b| {
        // index 0 is eps = share 0
        let sum = a + b;
        if sum <= den as usize {
            Some(sum)
        } else {
            None
        }
    })
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    worlds: Vec<String>,
    epsilon: String,
    rel: Vec<[String; 3]>,
    valuation: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<BTreeMap<String, String>>,
}

impl KripkeModel {
    pub fn to_json(&self) -> String {
        let mut rel: Vec<[String; 3]> = self
            .rel
            .iter()
            .map(|&(a, b, c)| {
                [
                    self.worlds[a].clone(),
                    self.worlds[b].clone(),
                    self.worlds[c].clone(),
                ]
            })
            .collect();
        rel.sort();
        let mut valuation = BTreeMap::new();
        for (atom, set) in &self.valuation {
            let mut ws: Vec<String> = set.iter().map(|&w| self.worlds[w].clone()).collect();
            ws.sort();
            valuation.insert(atom.clone(), ws);
        }
        let rho: BTreeMap<String, String> = self
            .rho
            .iter()
            .map(|(l, &w)| (l.clone(), self.worlds[w].clone()))
            .collect();
        let file = ModelFile {
            worlds: self.worlds.clone(),
            epsilon: self.worlds[self.epsilon].clone(),
            rel,
            valuation,
            rho: if rho.len() > 1 { Some(rho) } else { None },
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        let triples: Vec<(String, String, String)> = file
            .rel
            .into_iter()
            .map(|[a, b, c]| (a, b, c))
            .collect();
        let valuation: Vec<(String, Vec<String>)> = file.valuation.into_iter().collect();
        let rho: Vec<(String, String)> = file.rho.unwrap_or_default().into_iter().collect();
        KripkeModel::new(file.worlds, &file.epsilon, &triples, &valuation, &rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn emp_holds_exactly_at_epsilon() {
        let m = zn_model(2);
        assert!(m.eval(0, &Formula::Emp).unwrap());
        assert!(!m.eval(1, &Formula::Emp).unwrap());
        assert!(m.eval(2, &Formula::Emp).is_err());
    }

    #[test]
    fn z2_falsifies_indivisible_unit_axiom_formula() {
        let mut m = zn_model(2);
        m.set_valuation("a", &[1]);
        m.set_valuation("b", &[1]);
        let lhs = parse("emp & (a * b)").unwrap();
        assert!(m.eval(0, &lhs).unwrap());
        assert!(!m.eval(0, &parse("a").unwrap()).unwrap());
        let f = parse("emp & (a * b) -> a").unwrap();
        assert_eq!(m.falsifying_world(&f), Some(0));
    }

    #[test]
    fn single_cell_heap_cannot_split_a_cell() {
        let mut m = heap_frame(1, 1, 16).unwrap();
        let full = m.world_index("{1:1}").unwrap();
        m.set_valuation("a", &[full]);
        assert!(!m.eval(full, &parse("a * a").unwrap()).unwrap());
        assert!(m.eval(full, &parse("a * emp").unwrap()).unwrap());
    }

    #[test]
    fn heap_frame_1_1_has_three_triples() {
        let m = heap_frame(1, 1, 16).unwrap();
        assert_eq!(m.world_count(), 2);
        let triples: Vec<_> = m.triples().collect();
        assert_eq!(triples.len(), 3);
    }

    #[test]
    fn heap_frame_2_1_has_four_worlds() {
        let m = heap_frame(2, 1, 16).unwrap();
        assert_eq!(m.world_count(), 4);
    }

    #[test]
    fn heap_frames_satisfy_pasl_axioms() {
        let axioms = crate::axiom::builtin_system("pasl+iu+d+cs").unwrap().axioms;
        for (l, v) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let m = heap_frame(l, v, 16).unwrap();
            let violations = check_frame(&m, &axioms);
            assert!(violations.is_empty(), "heap({l},{v}): {violations:?}");
        }
    }

    #[test]
    fn z2_violates_disjointness_and_indivisible_unit() {
        let m = zn_model(2);
        let d = crate::axiom::builtin_axiom("disjointness").unwrap();
        let iu = crate::axiom::builtin_axiom("indivisible_unit").unwrap();
        let violations = check_frame(&m, &[d, iu]);
        assert_eq!(violations.len(), 2);
        // witnessed by R(1,1,0) with 1 != eps
        assert!(violations[0].witness.iter().any(|(_, w)| w == "1"));
    }

    #[test]
    fn z3_satisfies_splittability_z2_does_not() {
        let s = crate::axiom::builtin_axiom("splittability").unwrap();
        assert!(check_frame(&zn_model(3), &[s.clone()]).is_empty());
        assert!(!check_frame(&zn_model(2), &[s]).is_empty());
    }

    #[test]
    fn fractional_violates_disjointness_but_not_indivisible_unit() {
        let m = fractional_model(4);
        let d = crate::axiom::builtin_axiom("disjointness").unwrap();
        let iu = crate::axiom::builtin_axiom("indivisible_unit").unwrap();
        assert_eq!(check_frame(&m, &[d]).len(), 1);
        assert!(check_frame(&m, &[iu]).is_empty());
    }

    #[test]
    fn model_json_round_trip() {
        let mut m = zn_model(2);
        m.set_valuation("a", &[1]);
        let text = m.to_json();
        let back = KripkeModel::from_json(&text).unwrap();
        assert_eq!(back.world_count(), 2);
        assert!(back.eval(1, &Formula::atom("a")).unwrap());
        assert!(KripkeModel::from_json("{not json").is_err());
    }

    #[test]
    fn classical_tautologies_hold_everywhere() {
        let models = enumerate_heap_models(2, 1, &["a".into(), "b".into()], 16, 40, 7).unwrap();
        assert!(!models.is_empty());
        let peirce = parse("((a -> b) -> a) -> a").unwrap();
        let excluded_middle = parse("a | ~a").unwrap();
        for m in &models {
            assert!(m.valid_everywhere(&peirce));
            assert!(m.valid_everywhere(&excluded_middle));
        }
    }
}
