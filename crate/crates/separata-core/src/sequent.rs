//! Sequents: a set of relational atoms about labels, two sets of labelled
//! formulas, and an equality store kept synchronized with the equality
//! atoms.

use crate::formula::{FormulaArena, FormulaId};
use crate::label::Label;
use indexmap::IndexSet;
use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

/// A syntactic fact about labels. `Ternary(a, b, c)` encodes the relation
/// `(a, b > c)`: composing the worlds of `a` and `b` can yield the world
/// of `c`. Equalities and inequalities are stored with the smaller label
/// first so that set membership is orientation-insensitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelAtom {
    Ternary(Label, Label, Label),
    Eq(Label, Label),
    Neq(Label, Label),
}

impl RelAtom {
    pub fn eq(a: Label, b: Label) -> RelAtom {
        if a <= b {
            RelAtom::Eq(a, b)
        } else {
            RelAtom::Eq(b, a)
        }
    }

    pub fn neq(a: Label, b: Label) -> RelAtom {
        if a <= b {
            RelAtom::Neq(a, b)
        } else {
            RelAtom::Neq(b, a)
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        let v = match *self {
            RelAtom::Ternary(a, b, c) => vec![a, b, c],
            RelAtom::Eq(a, b) | RelAtom::Neq(a, b) => vec![a, b],
        };
        v.into_iter()
    }

    pub fn map(&self, f: impl Fn(Label) -> Label) -> RelAtom {
        match *self {
            RelAtom::Ternary(a, b, c) => RelAtom::Ternary(f(a), f(b), f(c)),
            RelAtom::Eq(a, b) => RelAtom::eq(f(a), f(b)),
            RelAtom::Neq(a, b) => RelAtom::neq(f(a), f(b)),
        }
    }

    pub fn render(&self) -> String {
        match self {
            RelAtom::Ternary(a, b, c) => format!("({a},{b} > {c})"),
            RelAtom::Eq(a, b) => format!("{a} = {b}"),
            RelAtom::Neq(a, b) => format!("{a} != {b}"),
        }
    }
}

/// Union-find partition over labels, realizing the reflexive, symmetric,
/// transitive closure of the asserted equalities. `eps` participates as an
/// ordinary element.
#[derive(Debug, Clone, Default)]
pub struct EqStore {
    parent: Vec<u32>,
}

impl EqStore {
    pub fn new() -> Self {
        EqStore::default()
    }

    fn ensure(&mut self, l: Label) {
        let idx = l.index();
        while self.parent.len() <= idx {
            self.parent.push(self.parent.len() as u32);
        }
    }

    fn root(&self, l: Label) -> u32 {
        let mut x = l.index() as u32;
        while (x as usize) < self.parent.len() && self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    pub fn union(&mut self, a: Label, b: Label) {
        self.ensure(a);
        self.ensure(b);
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return;
        }
        // Keep the smaller id as representative so eps always represents
        // its own class; compress the paths we just walked.
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop as usize] = keep;
        self.compress(a, keep);
        self.compress(b, keep);
    }

    fn compress(&mut self, from: Label, to: u32) {
        let mut x = from.index() as u32;
        while self.parent[x as usize] != to && self.parent[x as usize] != x {
            let next = self.parent[x as usize];
            self.parent[x as usize] = to;
            x = next;
        }
        self.parent[x as usize] = to;
    }

    /// True iff `a = b` is derivable from the asserted equalities by
    /// assumption, reflexivity, symmetry and transitivity.
    pub fn query(&self, a: Label, b: Label) -> bool {
        if a == b {
            return true;
        }
        let (ia, ib) = (a.index(), b.index());
        if ia >= self.parent.len() || ib >= self.parent.len() {
            return false;
        }
        self.root(a) == self.root(b)
    }

    /// Canonical representative of the class of `l` (the smallest label id
    /// in the class, for labels the store has seen).
    pub fn repr(&self, l: Label) -> Label {
        if l.index() >= self.parent.len() {
            return l;
        }
        let r = self.root(l);
        if r == 0 {
            Label::EPSILON
        } else {
            Label::var(r)
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("cannot substitute eps away")]
pub struct SubstituteEpsilon;

/// A labelled sequent. `gamma` and `delta` are kept in insertion order:
/// proof search treats them as worklists, pushing decomposition products
/// to the front and rotating fairness-sensitive principals to the back.
/// Membership is still set-like, so inserting a duplicate is a no-op.
#[derive(Debug, Clone, Default)]
pub struct Sequent {
    pub g: IndexSet<RelAtom>,
    gamma: VecDeque<(Label, FormulaId)>,
    gamma_set: HashSet<(Label, FormulaId)>,
    delta: VecDeque<(Label, FormulaId)>,
    delta_set: HashSet<(Label, FormulaId)>,
    pub eq: EqStore,
}

/// Which side of the turnstile a labelled formula lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Gamma,
    Delta,
}

impl Sequent {
    pub fn new() -> Self {
        Sequent::default()
    }

    pub fn gamma(&self) -> impl Iterator<Item = (Label, FormulaId)> + '_ {
        self.gamma.iter().copied()
    }

    pub fn delta(&self) -> impl Iterator<Item = (Label, FormulaId)> + '_ {
        self.delta.iter().copied()
    }

    pub fn side(&self, side: Side) -> impl Iterator<Item = (Label, FormulaId)> + '_ {
        match side {
            Side::Gamma => self.gamma.iter().copied(),
            Side::Delta => self.delta.iter().copied(),
        }
    }

    pub fn contains(&self, side: Side, l: Label, f: FormulaId) -> bool {
        match side {
            Side::Gamma => self.gamma_set.contains(&(l, f)),
            Side::Delta => self.delta_set.contains(&(l, f)),
        }
    }

    pub fn contains_atom(&self, atom: &RelAtom) -> bool {
        self.g.contains(atom)
    }

    /// Insert at the front of the worklist; no-op if already present.
    pub fn insert_front(&mut self, side: Side, l: Label, f: FormulaId) {
        let (list, set) = self.side_mut(side);
        if set.insert((l, f)) {
            list.push_front((l, f));
        }
    }

    /// Insert at the back of the worklist; no-op if already present.
    pub fn insert_back(&mut self, side: Side, l: Label, f: FormulaId) {
        let (list, set) = self.side_mut(side);
        if set.insert((l, f)) {
            list.push_back((l, f));
        }
    }

    pub fn remove(&mut self, side: Side, l: Label, f: FormulaId) -> bool {
        let (list, set) = self.side_mut(side);
        if set.remove(&(l, f)) {
            if let Some(pos) = list.iter().position(|&e| e == (l, f)) {
                list.remove(pos);
            }
            true
        } else {
            false
        }
    }

    /// Move an existing entry to the end of its worklist (fairness rotation).
    pub fn rotate_to_back(&mut self, side: Side, l: Label, f: FormulaId) {
        let (list, set) = self.side_mut(side);
        if set.contains(&(l, f)) {
            if let Some(pos) = list.iter().position(|&e| e == (l, f)) {
                list.remove(pos);
                list.push_back((l, f));
            }
        }
    }

    fn side_mut(
        &mut self,
        side: Side,
    ) -> (
        &mut VecDeque<(Label, FormulaId)>,
        &mut HashSet<(Label, FormulaId)>,
    ) {
        match side {
            Side::Gamma => (&mut self.gamma, &mut self.gamma_set),
            Side::Delta => (&mut self.delta, &mut self.delta_set),
        }
    }

    /// Add a relational atom, keeping the equality store in sync.
    pub fn insert_atom(&mut self, atom: RelAtom) -> bool {
        let fresh = self.g.insert(atom);
        if fresh {
            if let RelAtom::Eq(a, b) = atom {
                self.eq.union(a, b);
            }
        }
        fresh
    }

    /// Assert `a = b`: records the equality atom and unions the classes.
    pub fn assert_eq(&mut self, a: Label, b: Label) {
        self.insert_atom(RelAtom::eq(a, b));
    }

    /// `a = b` under the equality judgment over the equalities of `g`.
    pub fn eq_query(&self, a: Label, b: Label) -> bool {
        self.eq.query(a, b)
    }

    /// Replace every occurrence of `from` by `to`, rebuilding worklists,
    /// the atom set and the equality store. Worklist order is preserved;
    /// entries that collapse keep the earliest position.
    pub fn apply_subst(&mut self, from: Label, to: Label) -> Result<(), SubstituteEpsilon> {
        if from.is_epsilon() {
            return Err(SubstituteEpsilon);
        }
        if from == to {
            return Ok(());
        }
        let map = |l: Label| if l == from { to } else { l };
        let old_g = std::mem::take(&mut self.g);
        self.eq = EqStore::new();
        for atom in old_g {
            self.insert_atom(atom.map(map));
        }
        for side in [Side::Gamma, Side::Delta] {
            let (list, set) = self.side_mut(side);
            let old: Vec<_> = std::mem::take(list).into();
            set.clear();
            for (l, f) in old {
                let entry = (map(l), f);
                if set.insert(entry) {
                    list.push_back(entry);
                }
            }
        }
        Ok(())
    }

    /// All labels occurring in the sequent, in first-occurrence order.
    pub fn labels(&self) -> Vec<Label> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut push = |l: Label| {
            if seen.insert(l) {
                out.push(l);
            }
        };
        for atom in &self.g {
            for l in atom.labels() {
                push(l);
            }
        }
        for &(l, _) in self.gamma.iter().chain(self.delta.iter()) {
            push(l);
        }
        out
    }

    pub fn contains_label(&self, l: Label) -> bool {
        self.g.iter().any(|a| a.labels().any(|x| x == l))
            || self.gamma.iter().any(|&(x, _)| x == l)
            || self.delta.iter().any(|&(x, _)| x == l)
    }

    /// Ternary atoms only, in insertion order.
    pub fn ternary_atoms(&self) -> impl Iterator<Item = (Label, Label, Label)> + '_ {
        self.g.iter().filter_map(|a| match *a {
            RelAtom::Ternary(x, y, z) => Some((x, y, z)),
            _ => None,
        })
    }

    /// Set-equality of the three components (worklist order ignored).
    pub fn same_contents(&self, other: &Sequent) -> bool {
        self.g.len() == other.g.len()
            && self.g.iter().all(|a| other.g.contains(a))
            && self.gamma_set == other.gamma_set
            && self.delta_set == other.delta_set
    }

    pub fn render(&self, arena: &FormulaArena) -> String {
        let mut s = String::new();
        let atoms: Vec<_> = self.g.iter().map(RelAtom::render).collect();
        s.push_str(&atoms.join("; "));
        let _ = write!(s, " |- ");
        let gs: Vec<_> = self
            .gamma
            .iter()
            .map(|&(l, f)| format!("{l}: {}", arena.render(f)))
            .collect();
        s.push_str(&gs.join("; "));
        let _ = write!(s, " |- ");
        let ds: Vec<_> = self
            .delta
            .iter()
            .map(|&(l, f)| format!("{l}: {}", arena.render(f)))
            .collect();
        s.push_str(&ds.join("; "));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::label::LabelAllocator;

    fn labels3() -> (Label, Label, Label) {
        let mut alloc = LabelAllocator::new();
        (alloc.fresh(), alloc.fresh(), alloc.fresh())
    }

    #[test]
    fn eq_query_reflexive() {
        let s = Sequent::new();
        let (x, _, _) = labels3();
        assert!(s.eq_query(x, x));
    }

    #[test]
    fn eq_query_symmetric_transitive() {
        let mut s = Sequent::new();
        let (x, y, z) = labels3();
        s.assert_eq(x, y);
        s.assert_eq(y, z);
        assert!(s.eq_query(z, x));
    }

    #[test]
    fn eq_query_does_not_invent_epsilon() {
        let mut s = Sequent::new();
        let (x, y, _) = labels3();
        s.assert_eq(x, y);
        assert!(!s.eq_query(x, Label::EPSILON));
    }

    #[test]
    fn assert_eq_idempotent() {
        let mut s = Sequent::new();
        let (x, _, _) = labels3();
        s.assert_eq(x, x);
        let before = s.g.len();
        s.assert_eq(x, x);
        assert_eq!(s.g.len(), before);
    }

    #[test]
    fn subst_rewrites_atoms() {
        // G = {(x, eps > z)}, [x/z] yields {(x, eps > x)}
        let mut s = Sequent::new();
        let (x, z, _) = labels3();
        s.insert_atom(RelAtom::Ternary(x, Label::EPSILON, z));
        s.apply_subst(z, x).unwrap();
        assert!(s.contains_atom(&RelAtom::Ternary(x, Label::EPSILON, x)));
        assert_eq!(s.g.len(), 1);
    }

    #[test]
    fn subst_of_absent_label_is_identity() {
        let mut s = Sequent::new();
        let (x, y, z) = labels3();
        s.insert_atom(RelAtom::Ternary(x, y, z));
        let before = s.clone();
        let mut alloc = LabelAllocator::new();
        alloc.fresh();
        alloc.fresh();
        alloc.fresh();
        let unused = alloc.fresh();
        s.apply_subst(unused, x).unwrap();
        assert!(s.same_contents(&before));
    }

    #[test]
    fn subst_toward_epsilon_allowed_but_not_away() {
        let mut arena = FormulaArena::new();
        let emp = arena.intern(&Formula::Emp);
        let mut s = Sequent::new();
        let (w, _, _) = labels3();
        s.insert_front(Side::Gamma, w, emp);
        s.apply_subst(w, Label::EPSILON).unwrap();
        assert!(s.contains(Side::Gamma, Label::EPSILON, emp));
        assert_eq!(
            s.apply_subst(Label::EPSILON, w).unwrap_err(),
            SubstituteEpsilon
        );
    }

    #[test]
    fn worklist_rotation_keeps_membership() {
        let mut arena = FormulaArena::new();
        let a = arena.intern(&Formula::atom("a"));
        let b = arena.intern(&Formula::atom("b"));
        let mut s = Sequent::new();
        let (x, _, _) = labels3();
        s.insert_back(Side::Delta, x, a);
        s.insert_back(Side::Delta, x, b);
        s.rotate_to_back(Side::Delta, x, a);
        let order: Vec<_> = s.delta().map(|(_, f)| f).collect();
        assert_eq!(order, vec![b, a]);
        assert!(s.contains(Side::Delta, x, a));
    }
}
