//! Formula AST for the assertion language: classical connectives plus the
//! multiplicatives `*` (separating conjunction), `emp` (its unit) and `-*`
//! (magic wand).

use std::collections::HashMap;
use std::fmt;

/// A propositional formula. Negation and disjunction are primitive
/// constructors, not sugar, so that derivations can use the dedicated
/// rules for them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    /// The multiplicative unit, written `emp`.
    Emp,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Star(Box<Formula>, Box<Formula>),
    Wand(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn star(a: Formula, b: Formula) -> Self {
        Formula::Star(Box::new(a), Box::new(b))
    }

    pub fn wand(a: Formula, b: Formula) -> Self {
        Formula::Wand(Box::new(a), Box::new(b))
    }

    /// Node count, always >= 1.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot | Formula::Emp => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Star(a, b)
            | Formula::Wand(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Number of connective nodes (everything except atoms and constants).
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot | Formula::Emp => 0,
            Formula::Not(a) => 1 + a.connective_count(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Star(a, b)
            | Formula::Wand(a, b) => 1 + a.connective_count() + b.connective_count(),
        }
    }

    /// Names of the propositional atoms occurring in the formula, deduplicated.
    pub fn atoms(&self) -> Vec<String> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
            match f {
                Formula::Atom(p) => {
                    if !out.contains(&p.as_str()) {
                        out.push(p);
                    }
                }
                Formula::Top | Formula::Bot | Formula::Emp => {}
                Formula::Not(a) => walk(a, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Imp(a, b)
                | Formula::Star(a, b)
                | Formula::Wand(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut names = Vec::new();
        walk(self, &mut names);
        names.into_iter().map(str::to_owned).collect()
    }

    /// Binding strength used by the parser and printer. Higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Wand(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Star(..) => 5,
            Formula::Not(..) => 6,
            Formula::Atom(_) | Formula::Top | Formula::Bot | Formula::Emp => 7,
        }
    }

    fn is_right_assoc(&self) -> bool {
        matches!(self, Formula::Imp(..) | Formula::Wand(..))
    }

    /// Minimal-parenthesis rendering; `parse(render(f))` is structurally `f`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s);
        s
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Formula::Atom(p) => out.push_str(p),
            Formula::Top => out.push_str("top"),
            Formula::Bot => out.push_str("bot"),
            Formula::Emp => out.push_str("emp"),
            Formula::Not(a) => {
                out.push('~');
                self.render_child(a, true, out);
            }
            Formula::And(a, b) => self.render_binary(a, " & ", b, out),
            Formula::Or(a, b) => self.render_binary(a, " | ", b, out),
            Formula::Imp(a, b) => self.render_binary(a, " -> ", b, out),
            Formula::Star(a, b) => self.render_binary(a, " * ", b, out),
            Formula::Wand(a, b) => self.render_binary(a, " -* ", b, out),
        }
    }

    fn render_binary(&self, left: &Formula, op: &str, right: &Formula, out: &mut String) {
        // Left operand of a right-associative operator needs parentheses at
        // equal precedence, and symmetrically for left-associative ones.
        let assoc_right = self.is_right_assoc();
        self.render_child(left, assoc_right, out);
        out.push_str(op);
        self.render_child(right, !assoc_right, out);
    }

    fn render_child(&self, child: &Formula, parens_at_equal: bool, out: &mut String) {
        let needs = child.precedence() < self.precedence()
            || (parens_at_equal && child.precedence() == self.precedence());
        if needs {
            out.push('(');
            child.render_into(out);
            out.push(')');
        } else {
            child.render_into(out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Interned formula reference inside a [`FormulaArena`]. Cheap to copy,
/// compare and hash; two ids are equal iff the formulas are structurally
/// identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(pub u32);

/// The same constructors as [`Formula`], with interned children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(u32),
    Top,
    Bot,
    Emp,
    Not(FormulaId),
    And(FormulaId, FormulaId),
    Or(FormulaId, FormulaId),
    Imp(FormulaId, FormulaId),
    Star(FormulaId, FormulaId),
    Wand(FormulaId, FormulaId),
}

/// Hash-consing arena. During proof search formulas are only ever
/// decomposed, never rebuilt, so one arena per proof attempt holds exactly
/// the subformula closure of the goal.
#[derive(Debug, Default, Clone)]
pub struct FormulaArena {
    nodes: Vec<Node>,
    index: HashMap<Node, FormulaId>,
    atom_names: Vec<String>,
    atom_index: HashMap<String, u32>,
}

impl FormulaArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, f: &Formula) -> FormulaId {
        let node = match f {
            Formula::Atom(p) => Node::Atom(self.intern_atom(p)),
            Formula::Top => Node::Top,
            Formula::Bot => Node::Bot,
            Formula::Emp => Node::Emp,
            Formula::Not(a) => Node::Not(self.intern(a)),
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Imp(a, b) => Node::Imp(self.intern(a), self.intern(b)),
            Formula::Star(a, b) => Node::Star(self.intern(a), self.intern(b)),
            Formula::Wand(a, b) => Node::Wand(self.intern(a), self.intern(b)),
        };
        self.intern_node(node)
    }

    fn intern_node(&mut self, node: Node) -> FormulaId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = FormulaId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    fn intern_atom(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.atom_index.get(name) {
            return id;
        }
        let id = self.atom_names.len() as u32;
        self.atom_names.push(name.to_owned());
        self.atom_index.insert(name.to_owned(), id);
        id
    }

    pub fn node(&self, id: FormulaId) -> Node {
        self.nodes[id.0 as usize]
    }

    pub fn atom_name(&self, atom: u32) -> &str {
        &self.atom_names[atom as usize]
    }

    pub fn to_formula(&self, id: FormulaId) -> Formula {
        match self.node(id) {
            Node::Atom(p) => Formula::Atom(self.atom_name(p).to_owned()),
            Node::Top => Formula::Top,
            Node::Bot => Formula::Bot,
            Node::Emp => Formula::Emp,
            Node::Not(a) => Formula::not(self.to_formula(a)),
            Node::And(a, b) => Formula::and(self.to_formula(a), self.to_formula(b)),
            Node::Or(a, b) => Formula::or(self.to_formula(a), self.to_formula(b)),
            Node::Imp(a, b) => Formula::imp(self.to_formula(a), self.to_formula(b)),
            Node::Star(a, b) => Formula::star(self.to_formula(a), self.to_formula(b)),
            Node::Wand(a, b) => Formula::wand(self.to_formula(a), self.to_formula(b)),
        }
    }

    pub fn render(&self, id: FormulaId) -> String {
        self.to_formula(id).render()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_constants() {
        assert_eq!(Formula::Emp.render(), "emp");
        assert_eq!(
            Formula::and(Formula::atom("a"), Formula::atom("b")).render(),
            "a & b"
        );
    }

    #[test]
    fn render_uses_precedence() {
        // star binds tighter than and, which binds tighter than ->
        let f = Formula::imp(
            Formula::and(
                Formula::Emp,
                Formula::star(Formula::atom("a"), Formula::atom("b")),
            ),
            Formula::atom("a"),
        );
        assert_eq!(f.render(), "emp & a * b -> a");
    }

    #[test]
    fn render_right_assoc_wand() {
        let f = Formula::wand(
            Formula::atom("a"),
            Formula::imp(Formula::atom("b"), Formula::atom("c")),
        );
        // -> binds weaker than -*, so the body keeps its parentheses
        assert_eq!(f.render(), "a -* (b -> c)");
    }

    #[test]
    fn arena_interning_dedups() {
        let mut arena = FormulaArena::new();
        let f = Formula::star(Formula::atom("a"), Formula::atom("a"));
        let id = arena.intern(&f);
        match arena.node(id) {
            Node::Star(x, y) => assert_eq!(x, y),
            other => panic!("unexpected node {other:?}"),
        }
        assert_eq!(arena.to_formula(id), f);
    }
}
