//! Declarative frame axioms and the systems built from them.
//!
//! An axiom has the shape
//!
//! ```text
//! forall x1..xm. (s1 = t1 & ... & sp = tp & S1 & ... & Sk
//!                  => exists y1..yn. (T1 & ... & Tl))
//! ```
//!
//! subject to four conditions checked by [`FrameAxiom::validate`]: the `S`s
//! are ternary atoms or inequalities, the `T`s are relational atoms, no
//! label variable occurs twice across the antecedent, and `eps` does not
//! occur in an antecedent ternary atom.

use std::fmt;
use thiserror::Error;

/// A schematic term: a universal variable, an existential variable, or the
/// label constant `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Epsilon,
    Uni(usize),
    Exi(usize),
}

impl Term {
    pub fn is_var(self) -> bool {
        !matches!(self, Term::Epsilon)
    }
}

/// A schematic relational atom over [`Term`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxAtom {
    Ternary(Term, Term, Term),
    Eq(Term, Term),
    Neq(Term, Term),
}

impl AxAtom {
    pub fn terms(&self) -> Vec<Term> {
        match *self {
            AxAtom::Ternary(a, b, c) => vec![a, b, c],
            AxAtom::Eq(a, b) | AxAtom::Neq(a, b) => vec![a, b],
        }
    }

    pub fn map(&self, f: impl Fn(Term) -> Term) -> AxAtom {
        match *self {
            AxAtom::Ternary(a, b, c) => AxAtom::Ternary(f(a), f(b), f(c)),
            AxAtom::Eq(a, b) => AxAtom::Eq(f(a), f(b)),
            AxAtom::Neq(a, b) => AxAtom::Neq(f(a), f(b)),
        }
    }
}

/// A frame axiom in the restricted first-order format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameAxiom {
    pub name: String,
    pub universals: Vec<String>,
    pub equalities: Vec<(Term, Term)>,
    pub antecedent: Vec<AxAtom>,
    pub existentials: Vec<String>,
    pub consequent: Vec<AxAtom>,
}

/// One failed side condition, naming the condition and the offending atom.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("axiom `{axiom}`: {condition} ({detail})")]
pub struct Violation {
    pub axiom: String,
    pub condition: &'static str,
    pub detail: String,
}

impl FrameAxiom {
    pub fn term_name(&self, t: Term) -> String {
        match t {
            Term::Epsilon => "eps".to_owned(),
            Term::Uni(i) => self.universals[i].clone(),
            Term::Exi(i) => self.existentials[i].clone(),
        }
    }

    fn atom_text(&self, a: &AxAtom) -> String {
        match a {
            AxAtom::Ternary(x, y, z) => format!(
                "({},{} > {})",
                self.term_name(*x),
                self.term_name(*y),
                self.term_name(*z)
            ),
            AxAtom::Eq(x, y) => format!("{} = {}", self.term_name(*x), self.term_name(*y)),
            AxAtom::Neq(x, y) => format!("{} != {}", self.term_name(*x), self.term_name(*y)),
        }
    }

    /// Check the four side conditions; the returned list is empty iff the
    /// axiom is admissible.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut violation = |condition: &'static str, detail: String| {
            out.push(Violation {
                axiom: self.name.clone(),
                condition,
                detail,
            });
        };
        let mut seen = vec![0usize; self.universals.len()];
        for s in &self.antecedent {
            match s {
                AxAtom::Eq(..) => violation(
                    "antecedent atom must be a ternary atom or an inequality",
                    self.atom_text(s),
                ),
                AxAtom::Ternary(a, b, c) => {
                    if [a, b, c].iter().any(|t| **t == Term::Epsilon) {
                        violation(
                            "eps must not occur in an antecedent ternary atom",
                            self.atom_text(s),
                        );
                    }
                }
                AxAtom::Neq(..) => {}
            }
            for t in s.terms() {
                match t {
                    Term::Uni(i) => seen[i] += 1,
                    Term::Exi(_) => violation(
                        "antecedent may not mention existential variables",
                        self.atom_text(s),
                    ),
                    Term::Epsilon => {}
                }
            }
        }
        for (i, count) in seen.iter().enumerate() {
            if *count > 1 {
                violation(
                    "variable occurs twice in antecedent",
                    self.universals[i].clone(),
                );
            }
        }
        // Ts are relational atoms by construction; nothing to check there.
        out
    }
}

impl fmt::Display for FrameAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<_> = self
            .equalities
            .iter()
            .map(|(s, t)| format!("{} = {}", self.term_name(*s), self.term_name(*t)))
            .collect();
        let ante: Vec<_> = self.antecedent.iter().map(|a| self.atom_text(a)).collect();
        let cons: Vec<_> = self.consequent.iter().map(|a| self.atom_text(a)).collect();
        write!(
            f,
            "{}: forall {}. [{}] [{}] => ",
            self.name,
            self.universals.join(" "),
            eqs.join(", "),
            ante.join("; ")
        )?;
        if !self.existentials.is_empty() {
            write!(f, "exists {}. ", self.existentials.join(" "))?;
        }
        write!(f, "[{}]", cons.join("; "))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct AxiomParseError {
    pub line: usize,
    pub msg: String,
}

/// Parse an axiom file, one axiom per line:
///
/// ```text
/// name: forall x1 .. xm. [s1 = t1, ...] [S1; ...] => exists y1 .. yn. [T1; ...]
/// ```
///
/// Blank lines and lines starting with `#` are skipped. `eps` (or `ε`)
/// denotes the label constant; every other identifier must be bound by the
/// `forall` or `exists` prefix. The `exists` part may be omitted when there
/// are no existentials.
pub fn parse_axiom_file(text: &str) -> Result<Vec<FrameAxiom>, AxiomParseError> {
    let mut axioms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        axioms.push(parse_axiom_line(line, idx + 1)?);
    }
    Ok(axioms)
}

fn parse_axiom_line(line: &str, lineno: usize) -> Result<FrameAxiom, AxiomParseError> {
    let err = |msg: String| AxiomParseError { line: lineno, msg };
    let (name, rest) = line
        .split_once(':')
        .ok_or_else(|| err("missing `name:` prefix".into()))?;
    let name = name.trim().to_owned();
    let rest = rest.trim();
    let rest = rest
        .strip_prefix("forall")
        .ok_or_else(|| err("expected `forall`".into()))?;
    let (vars_part, rest) = rest
        .split_once('.')
        .ok_or_else(|| err("expected `.` after the forall variables".into()))?;
    let universals: Vec<String> = vars_part.split_whitespace().map(str::to_owned).collect();
    for v in &universals {
        if v == "eps" || v == "\u{3b5}" {
            return Err(err("`eps` cannot be quantified".into()));
        }
    }

    let (lhs, rhs) = rest
        .split_once("=>")
        .ok_or_else(|| err("expected `=>`".into()))?;
    let (eq_block, ante_block) = two_brackets(lhs)
        .ok_or_else(|| err("expected `[equalities] [antecedent]` before `=>`".into()))?;

    let rhs = rhs.trim();
    let (existentials, cons_block) = if let Some(r) = rhs.strip_prefix("exists") {
        let (vars_part, r) = r
            .split_once('.')
            .ok_or_else(|| err("expected `.` after the exists variables".into()))?;
        let vars: Vec<String> = vars_part.split_whitespace().map(str::to_owned).collect();
        (vars, r.trim())
    } else {
        (Vec::new(), rhs)
    };
    let cons_block = strip_brackets(cons_block)
        .ok_or_else(|| err("expected `[consequent]`".into()))?;

    let lookup = |token: &str| -> Result<Term, AxiomParseError> {
        let token = token.trim();
        if token == "eps" || token == "\u{3b5}" {
            return Ok(Term::Epsilon);
        }
        if let Some(i) = universals.iter().position(|v| v == token) {
            return Ok(Term::Uni(i));
        }
        if let Some(i) = existentials.iter().position(|v| v == token) {
            return Ok(Term::Exi(i));
        }
        Err(err(format!("unbound variable `{token}`")))
    };

    let parse_atom = |text: &str| -> Result<AxAtom, AxiomParseError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| err(format!("unterminated ternary atom `{text}`")))?;
            let (ab, c) = inner
                .split_once('>')
                .ok_or_else(|| err(format!("ternary atom `{text}` needs `>`")))?;
            let (a, b) = ab
                .split_once(',')
                .ok_or_else(|| err(format!("ternary atom `{text}` needs `,`")))?;
            return Ok(AxAtom::Ternary(lookup(a)?, lookup(b)?, lookup(c)?));
        }
        if let Some((a, b)) = text.split_once("!=") {
            return Ok(AxAtom::Neq(lookup(a)?, lookup(b)?));
        }
        if let Some((a, b)) = text.split_once('=') {
            return Ok(AxAtom::Eq(lookup(a)?, lookup(b)?));
        }
        Err(err(format!("cannot parse atom `{text}`")))
    };

    let mut equalities = Vec::new();
    for part in split_list(eq_block, ',') {
        let (s, t) = part
            .split_once('=')
            .ok_or_else(|| err(format!("cannot parse equality `{part}`")))?;
        let (s, t) = (lookup(s)?, lookup(t)?);
        if matches!(s, Term::Exi(_)) || matches!(t, Term::Exi(_)) {
            return Err(err(
                "equalities may only mention forall-bound variables and eps".into(),
            ));
        }
        equalities.push((s, t));
    }
    let mut antecedent = Vec::new();
    for part in split_list(ante_block, ';') {
        antecedent.push(parse_atom(&part)?);
    }
    let mut consequent = Vec::new();
    for part in split_list(cons_block, ';') {
        consequent.push(parse_atom(&part)?);
    }

    Ok(FrameAxiom {
        name,
        universals,
        equalities,
        antecedent,
        existentials,
        consequent,
    })
}

fn strip_brackets(s: &str) -> Option<&str> {
    s.trim().strip_prefix('[')?.strip_suffix(']')
}

fn two_brackets(s: &str) -> Option<(&str, &str)> {
    let s = s.trim().strip_prefix('[')?;
    let (first, rest) = s.split_once(']')?;
    let second = strip_brackets(rest)?;
    Some((first, second))
}

fn split_list(s: &str, sep: char) -> Vec<String> {
    let s = s.trim();
    if s.is_empty() {
        return Vec::new();
    }
    s.split(sep).map(|p| p.trim().to_owned()).collect()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown system `{0}`")]
pub struct UnknownSystem(pub String);

/// A prover configuration: the active frame axioms plus calculus switches.
#[derive(Debug, Clone)]
pub struct SystemConfig {
    pub name: String,
    pub axioms: Vec<FrameAxiom>,
    pub neq_enabled: bool,
    pub em_enabled: bool,
    /// Run the substitution calculus (global label substitutions) instead
    /// of the equality-store calculus.
    pub use_substitution_calculus: bool,
    /// Add the indivisible-unit rule when disjointness is active even if
    /// the indivisible-unit axiom itself is not: it shrinks sequents.
    pub include_iu_shortcut: bool,
}

impl SystemConfig {
    pub fn from_axioms(name: impl Into<String>, axioms: Vec<FrameAxiom>) -> Self {
        let mut cfg = SystemConfig {
            name: name.into(),
            axioms,
            neq_enabled: false,
            em_enabled: false,
            use_substitution_calculus: true,
            include_iu_shortcut: false,
        };
        cfg.normalize();
        cfg
    }

    pub fn has_axiom(&self, name: &str) -> bool {
        self.axioms.iter().any(|a| a.name == name)
    }

    /// Splittability needs excluded middle on label equalities to produce
    /// the inequality atoms its rule matches on.
    pub fn normalize(&mut self) {
        if self.has_axiom(builtin_names::SPLITTABILITY) {
            self.em_enabled = true;
            self.neq_enabled = true;
        }
        if self.has_axiom(builtin_names::DISJOINTNESS)
            && !self.has_axiom(builtin_names::INDIVISIBLE_UNIT)
        {
            self.include_iu_shortcut = true;
        }
    }
}

pub mod builtin_names {
    pub const IDENTITY1: &str = "identity1";
    pub const IDENTITY2: &str = "identity2";
    pub const COMMUTATIVITY: &str = "commutativity";
    pub const ASSOCIATIVITY: &str = "associativity";
    pub const CANCELLATIVITY: &str = "cancellativity";
    pub const PARTIAL_DETERMINISM: &str = "partial_determinism";
    pub const INDIVISIBLE_UNIT: &str = "indivisible_unit";
    pub const DISJOINTNESS: &str = "disjointness";
    pub const SPLITTABILITY: &str = "splittability";
    pub const CROSS_SPLIT: &str = "cross_split";
    pub const EXTENSIBILITY: &str = "extensibility";
}

fn ax(
    name: &str,
    universals: &[&str],
    equalities: Vec<(Term, Term)>,
    antecedent: Vec<AxAtom>,
    existentials: &[&str],
    consequent: Vec<AxAtom>,
) -> FrameAxiom {
    let a = FrameAxiom {
        name: name.to_owned(),
        universals: universals.iter().map(|s| s.to_string()).collect(),
        equalities,
        antecedent,
        existentials: existentials.iter().map(|s| s.to_string()).collect(),
        consequent,
    };
    debug_assert!(a.validate().is_empty(), "builtin axiom {name} invalid");
    a
}

/// One builtin frame axiom by name.
pub fn builtin_axiom(name: &str) -> Option<FrameAxiom> {
    use builtin_names::*;
    use AxAtom::*;
    use Term::*;
    let a = match name {
        // h2 = eps & (h1,h2 > h3) => h1 = h3
        IDENTITY1 => ax(
            IDENTITY1,
            &["h1", "h2", "h3"],
            vec![(Uni(1), Epsilon)],
            vec![Ternary(Uni(0), Uni(1), Uni(2))],
            &[],
            vec![Eq(Uni(0), Uni(2))],
        ),
        // h1 = h2 => (h1,eps > h2)
        IDENTITY2 => ax(
            IDENTITY2,
            &["h1", "h2"],
            vec![(Uni(0), Uni(1))],
            vec![],
            &[],
            vec![Ternary(Uni(0), Epsilon, Uni(1))],
        ),
        // (h1,h2 > h3) => (h2,h1 > h3)
        COMMUTATIVITY => ax(
            COMMUTATIVITY,
            &["h1", "h2", "h3"],
            vec![],
            vec![Ternary(Uni(0), Uni(1), Uni(2))],
            &[],
            vec![Ternary(Uni(1), Uni(0), Uni(2))],
        ),
        // h5 = h5' & (h1,h5 > h4) & (h2,h3 > h5') => exists h6. (h6,h3 > h4) & (h1,h2 > h6)
        ASSOCIATIVITY => ax(
            ASSOCIATIVITY,
            &["h1", "h2", "h3", "h4", "h5", "h5'"],
            vec![(Uni(4), Uni(5))],
            vec![
                Ternary(Uni(0), Uni(4), Uni(3)),
                Ternary(Uni(1), Uni(2), Uni(5)),
            ],
            &["h6"],
            vec![
                Ternary(Exi(0), Uni(2), Uni(3)),
                Ternary(Uni(0), Uni(1), Exi(0)),
            ],
        ),
        // h1 = h1' & h3 = h3' & (h1,h2 > h3) & (h1',h4 > h3') => h2 = h4
        CANCELLATIVITY => ax(
            CANCELLATIVITY,
            &["h1", "h2", "h3", "h1'", "h3'", "h4"],
            vec![(Uni(0), Uni(3)), (Uni(2), Uni(4))],
            vec![
                Ternary(Uni(0), Uni(1), Uni(2)),
                Ternary(Uni(3), Uni(5), Uni(4)),
            ],
            &[],
            vec![Eq(Uni(1), Uni(5))],
        ),
        // h1 = h1' & h2 = h2' & (h1,h2 > h3) & (h1',h2' > h4) => h3 = h4
        PARTIAL_DETERMINISM => ax(
            PARTIAL_DETERMINISM,
            &["h1", "h2", "h3", "h1'", "h2'", "h4"],
            vec![(Uni(0), Uni(3)), (Uni(1), Uni(4))],
            vec![
                Ternary(Uni(0), Uni(1), Uni(2)),
                Ternary(Uni(3), Uni(4), Uni(5)),
            ],
            &[],
            vec![Eq(Uni(2), Uni(5))],
        ),
        // h0 = eps & (h1,h2 > h0) => h1 = eps
        INDIVISIBLE_UNIT => ax(
            INDIVISIBLE_UNIT,
            &["h1", "h2", "h0"],
            vec![(Uni(2), Epsilon)],
            vec![Ternary(Uni(0), Uni(1), Uni(2))],
            &[],
            vec![Eq(Uni(0), Epsilon)],
        ),
        // h1 = h3 & (h1,h3 > h2) => h1 = eps
        DISJOINTNESS => ax(
            DISJOINTNESS,
            &["h1", "h2", "h3"],
            vec![(Uni(0), Uni(2))],
            vec![Ternary(Uni(0), Uni(2), Uni(1))],
            &[],
            vec![Eq(Uni(0), Epsilon)],
        ),
        // h0 != eps => exists h1 h2. h1 != eps & h2 != eps & (h1,h2 > h0)
        SPLITTABILITY => ax(
            SPLITTABILITY,
            &["h0"],
            vec![],
            vec![Neq(Uni(0), Epsilon)],
            &["h1", "h2"],
            vec![
                Neq(Exi(0), Epsilon),
                Neq(Exi(1), Epsilon),
                Ternary(Exi(0), Exi(1), Uni(0)),
            ],
        ),
        // h0 = h0' & (h1,h2 > h0) & (h3,h4 > h0') =>
        //   exists h13 h14 h23 h24. the four intersection compositions
        CROSS_SPLIT => ax(
            CROSS_SPLIT,
            &["h1", "h2", "h0", "h3", "h4", "h0'"],
            vec![(Uni(2), Uni(5))],
            vec![
                Ternary(Uni(0), Uni(1), Uni(2)),
                Ternary(Uni(3), Uni(4), Uni(5)),
            ],
            &["h13", "h14", "h23", "h24"],
            vec![
                Ternary(Exi(0), Exi(1), Uni(0)),
                Ternary(Exi(2), Exi(3), Uni(1)),
                Ternary(Exi(0), Exi(2), Uni(3)),
                Ternary(Exi(1), Exi(3), Uni(4)),
            ],
        ),
        // => exists h2 h3. h2 != eps & (h1,h2 > h3)
        EXTENSIBILITY => ax(
            EXTENSIBILITY,
            &["h1"],
            vec![],
            vec![],
            &["h2", "h3"],
            vec![Neq(Exi(0), Epsilon), Ternary(Uni(0), Exi(0), Exi(1))],
        ),
        _ => return None,
    };
    Some(a)
}

/// Axiom sets for the named systems. The base names are `bbi-nd` (the
/// non-deterministic monoid), `pasl` (separation algebras) and
/// `pasl-nocancel`; extensions are added with `+iu`, `+d`, `+s`, `+cs`,
/// `+ext`, e.g. `pasl+d+cs`.
pub fn builtin_system(name: &str) -> Result<SystemConfig, UnknownSystem> {
    use builtin_names::*;
    let mut parts = name.split('+');
    let base = parts.next().unwrap_or("");
    let mut axioms: Vec<&str> = match base {
        "bbi-nd" => vec![IDENTITY1, IDENTITY2, COMMUTATIVITY, ASSOCIATIVITY],
        "pasl" => vec![
            IDENTITY1,
            IDENTITY2,
            COMMUTATIVITY,
            ASSOCIATIVITY,
            CANCELLATIVITY,
            PARTIAL_DETERMINISM,
        ],
        "pasl-nocancel" => vec![
            IDENTITY1,
            IDENTITY2,
            COMMUTATIVITY,
            ASSOCIATIVITY,
            PARTIAL_DETERMINISM,
        ],
        _ => return Err(UnknownSystem(name.to_owned())),
    };
    for flag in parts {
        let ax_name = match flag {
            "iu" => INDIVISIBLE_UNIT,
            "d" => DISJOINTNESS,
            "s" => SPLITTABILITY,
            "cs" => CROSS_SPLIT,
            "ext" => EXTENSIBILITY,
            _ => return Err(UnknownSystem(name.to_owned())),
        };
        if !axioms.contains(&ax_name) {
            axioms.push(ax_name);
        }
    }
    let axioms = axioms
        .into_iter()
        .map(|n| builtin_axiom(n).expect("builtin"))
        .collect();
    Ok(SystemConfig::from_axioms(name, axioms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_associativity_is_rejected() {
        // h5 repeated in the antecedent
        let bad = FrameAxiom {
            name: "assoc_naive".into(),
            universals: vec!["h1".into(), "h2".into(), "h3".into(), "h4".into(), "h5".into()],
            equalities: vec![],
            antecedent: vec![
                AxAtom::Ternary(Term::Uni(0), Term::Uni(4), Term::Uni(3)),
                AxAtom::Ternary(Term::Uni(1), Term::Uni(2), Term::Uni(4)),
            ],
            existentials: vec!["h6".into()],
            consequent: vec![
                AxAtom::Ternary(Term::Exi(0), Term::Uni(2), Term::Uni(3)),
                AxAtom::Ternary(Term::Uni(0), Term::Uni(1), Term::Exi(0)),
            ],
        };
        let violations = bad.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].condition, "variable occurs twice in antecedent");
    }

    #[test]
    fn corrected_associativity_is_ok() {
        assert!(builtin_axiom("associativity").unwrap().validate().is_empty());
    }

    #[test]
    fn commutativity_is_ok() {
        assert!(builtin_axiom("commutativity").unwrap().validate().is_empty());
    }

    #[test]
    fn epsilon_in_antecedent_ternary_rejected() {
        let bad = FrameAxiom {
            name: "bad".into(),
            universals: vec!["x".into(), "y".into()],
            equalities: vec![],
            antecedent: vec![AxAtom::Ternary(Term::Uni(0), Term::Epsilon, Term::Uni(1))],
            existentials: vec![],
            consequent: vec![AxAtom::Eq(Term::Uni(0), Term::Uni(1))],
        };
        assert!(bad
            .validate()
            .iter()
            .any(|v| v.condition.contains("eps must not occur")));
    }

    #[test]
    fn equality_in_antecedent_rejected() {
        let bad = FrameAxiom {
            name: "bad".into(),
            universals: vec!["x".into(), "y".into()],
            equalities: vec![],
            antecedent: vec![AxAtom::Eq(Term::Uni(0), Term::Uni(1))],
            existentials: vec![],
            consequent: vec![AxAtom::Eq(Term::Uni(0), Term::Uni(1))],
        };
        assert!(!bad.validate().is_empty());
    }

    #[test]
    fn builtin_system_pasl() {
        let cfg = builtin_system("pasl").unwrap();
        assert_eq!(cfg.axioms.len(), 6);
        assert!(!cfg.em_enabled);
        let cfg = builtin_system("pasl+d").unwrap();
        assert_eq!(cfg.axioms.len(), 7);
        assert!(cfg.include_iu_shortcut);
        let cfg = builtin_system("pasl+s").unwrap();
        assert!(cfg.em_enabled && cfg.neq_enabled);
        let cfg = builtin_system("pasl-nocancel").unwrap();
        assert!(!cfg.has_axiom(builtin_names::CANCELLATIVITY));
        assert!(builtin_system("nonsense").is_err());
    }

    #[test]
    fn dsl_round_trip() {
        let text = builtin_system("pasl+d+s+cs+ext")
            .unwrap()
            .axioms
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join("\n");
        let parsed = parse_axiom_file(&text).unwrap();
        assert_eq!(parsed, builtin_system("pasl+d+s+cs+ext").unwrap().axioms);
    }

    #[test]
    fn dsl_errors_carry_line_numbers() {
        let err = parse_axiom_file("ok: forall x. [] [(x,x > x)] => [x = eps]\nbroken").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_axiom_file("b: forall x. [] [(x,y > x)] => [x = eps]").unwrap_err();
        assert!(err.msg.contains("unbound variable"));
    }
}
