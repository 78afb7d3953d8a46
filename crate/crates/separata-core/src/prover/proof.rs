//! Replayable proof objects: each node stores its conclusion and the rule
//! instance applied to it, so the premises can be regenerated and compared
//! against the recorded children.

use crate::calculus::{replay, CalcMode, Premises, RuleInstance};
use crate::formula::FormulaArena;
use crate::rules::{compile_system, CompiledSystem};
use crate::axiom::SystemConfig;
use crate::sequent::Sequent;
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct ProofNode {
    pub sequent: Sequent,
    pub rule: RuleInstance,
    pub children: Vec<ProofNode>,
}

/// A finished derivation: the node tree plus the formula arena its
/// sequents refer to.
#[derive(Debug, Clone)]
pub struct Proof {
    pub arena: FormulaArena,
    pub mode: CalcMode,
    pub root: ProofNode,
}

impl Proof {
    pub fn node_count(&self) -> usize {
        fn count(n: &ProofNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        count(&self.root)
    }

    /// Indented text rendering, conclusion first.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        fn walk(node: &ProofNode, arena: &FormulaArena, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&format!(
                "[{}] {}\n",
                node.rule.name,
                node.sequent.render(arena)
            ));
            for child in &node.children {
                walk(child, arena, depth + 1, out);
            }
        }
        walk(&self.root, &self.arena, 0, &mut out);
        out
    }

    /// Machine-readable tree. Field names are part of the output contract:
    /// `rule`, `sequent` (with `rel`, `gamma`, `delta`), `children`.
    pub fn to_json(&self) -> Value {
        fn node_json(node: &ProofNode, arena: &FormulaArena) -> Value {
            let rel: Vec<String> = node.sequent.g.iter().map(|a| a.render()).collect();
            let gamma: Vec<Value> = node
                .sequent
                .gamma()
                .map(|(l, f)| json!([l.to_string(), arena.render(f)]))
                .collect();
            let delta: Vec<Value> = node
                .sequent
                .delta()
                .map(|(l, f)| json!([l.to_string(), arena.render(f)]))
                .collect();
            json!({
                "rule": node.rule.name,
                "sequent": {"rel": rel, "gamma": gamma, "delta": delta},
                "children": node.children.iter().map(|c| node_json(c, arena)).collect::<Vec<_>>(),
            })
        }
        node_json(&self.root, &self.arena)
    }
}

/// Replay every node of the proof: the recorded rule instance, applied to
/// the recorded conclusion, must regenerate the recorded children (as
/// sets), and every leaf must close. Guards the search engine against
/// producing ill-formed derivations.
pub fn check_proof(proof: &Proof, cfg: &SystemConfig) -> bool {
    let Ok(rules) = compile_system(cfg) else {
        return false;
    };
    check_node(&proof.root, &proof.arena, proof.mode, &rules)
}

fn check_node(
    node: &ProofNode,
    arena: &FormulaArena,
    mode: CalcMode,
    rules: &CompiledSystem,
) -> bool {
    match replay(&node.sequent, arena, mode, rules, &node.rule) {
        Ok(Premises::Zero(_)) => node.children.is_empty(),
        Ok(Premises::One(p)) => {
            node.children.len() == 1
                && node.children[0].sequent.same_contents(&p)
                && check_node(&node.children[0], arena, mode, rules)
        }
        Ok(Premises::Two(l, r)) => {
            node.children.len() == 2
                && node.children[0].sequent.same_contents(&l)
                && node.children[1].sequent.same_contents(&r)
                && check_node(&node.children[0], arena, mode, rules)
                && check_node(&node.children[1], arena, mode, rules)
        }
        Err(_) => false,
    }
}

/// Replay the rule skeleton of `template` starting from a different (but
/// compatible) sequent, rebuilding the node tree. Used by back-jumping:
/// when a closed branch's support is contained in a sibling premise, the
/// same derivation closes the sibling. Returns `None` if any step fails
/// to apply, in which case the caller searches the sibling normally.
pub fn replant(
    template: &ProofNode,
    seq: Sequent,
    arena: &FormulaArena,
    mode: CalcMode,
    rules: &CompiledSystem,
) -> Option<ProofNode> {
    let premises = replay(&seq, arena, mode, rules, &template.rule).ok()?;
    let children = match premises {
        Premises::Zero(_) => Vec::new(),
        Premises::One(p) => {
            if template.children.len() != 1 {
                return None;
            }
            vec![replant(&template.children[0], *p, arena, mode, rules)?]
        }
        Premises::Two(l, r) => {
            if template.children.len() != 2 {
                return None;
            }
            vec![
                replant(&template.children[0], *l, arena, mode, rules)?,
                replant(&template.children[1], *r, arena, mode, rules)?,
            ]
        }
    };
    Some(ProofNode {
        sequent: seq,
        rule: template.rule.clone(),
        children,
    })
}
