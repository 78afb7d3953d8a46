//! Seeded generator of BBI theorems, for fuzzing the prover against the
//! model checker.
//!
//! Each output instantiates a randomly chosen axiom schema (the classical
//! schemas plus the multiplicative unit/commutativity/associativity
//! schemas) with random formulas, then mutates it by the two residuation
//! deduction rules, rewriting `A -> (B -* C)` to `(A * B) -> C` and back
//! at the top level. Both directions preserve theoremhood, so every
//! output is a theorem by construction.
//!
//! Randomness comes from ChaCha8 with the suite seed, using one stream
//! per formula index: the output is a pure function of `(seed, k)`, stable
//! across platforms.

use crate::formula::Formula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct GenParams {
    /// Connective-count target for the random formulas substituted into
    /// the schema slots.
    pub n: usize,
    /// Number of mutation iterations.
    pub i: usize,
    pub seed: u64,
    pub count: usize,
}

const ATOMS: [&str; 5] = ["a", "b", "c", "d", "e"];

fn random_atom(rng: &mut ChaCha8Rng) -> Formula {
    // Constants appear occasionally; plain atoms dominate.
    match rng.gen_range(0..8) {
        0 => Formula::Top,
        1 => Formula::Emp,
        _ => Formula::atom(ATOMS[rng.gen_range(0..ATOMS.len())]),
    }
}

/// A random formula with exactly `n` connectives.
fn random_formula(rng: &mut ChaCha8Rng, n: usize) -> Formula {
    if n == 0 {
        return random_atom(rng);
    }
    match rng.gen_range(0..6) {
        0 => Formula::not(random_formula(rng, n - 1)),
        kind => {
            let left = rng.gen_range(0..n);
            let (a, b) = (
                random_formula(rng, left),
                random_formula(rng, n - 1 - left),
            );
            match kind {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                3 => Formula::imp(a, b),
                4 => Formula::star(a, b),
                _ => Formula::wand(a, b),
            }
        }
    }
}

/// The axiom schemas; `s` yields the slot instantiations.
fn instantiate_schema(rng: &mut ChaCha8Rng, n: usize) -> Formula {
    let schema = rng.gen_range(0..13);
    let mut s = || random_formula(rng, n);
    let (a, b, c) = (s(), s(), s());
    match schema {
        // multiplicative unit, commutativity, associativity
        0 => Formula::imp(a.clone(), Formula::star(Formula::Emp, a)),
        1 => Formula::imp(Formula::star(Formula::Emp, a.clone()), a),
        2 => Formula::imp(
            Formula::star(a.clone(), b.clone()),
            Formula::star(b, a),
        ),
        3 => Formula::imp(
            Formula::star(a.clone(), Formula::star(b.clone(), c.clone())),
            Formula::star(Formula::star(a, b), c),
        ),
        // classical implication basis
        4 => Formula::imp(a.clone(), Formula::imp(b, a)),
        5 => Formula::imp(
            Formula::imp(a.clone(), Formula::imp(b.clone(), c.clone())),
            Formula::imp(Formula::imp(a.clone(), b), Formula::imp(a, c)),
        ),
        6 => Formula::imp(
            Formula::imp(Formula::not(a.clone()), Formula::not(b.clone())),
            Formula::imp(b, a),
        ),
        // additive conjunction and disjunction
        7 => Formula::imp(Formula::and(a.clone(), b), a),
        8 => Formula::imp(Formula::and(a, b.clone()), b),
        9 => Formula::imp(a.clone(), Formula::imp(b.clone(), Formula::and(a, b))),
        10 => Formula::imp(a.clone(), Formula::or(a, b)),
        11 => Formula::imp(b.clone(), Formula::or(a, b)),
        _ => Formula::imp(
            Formula::imp(a.clone(), c.clone()),
            Formula::imp(
                Formula::imp(b.clone(), c.clone()),
                Formula::imp(Formula::or(a, b), c),
            ),
        ),
    }
}

/// One residuation step at the top level, when the shape allows it.
fn mutate(rng: &mut ChaCha8Rng, f: Formula) -> Formula {
    let curry_applies = matches!(&f, Formula::Imp(lhs, _) if matches!(**lhs, Formula::Star(..)));
    let uncurry_applies =
        matches!(&f, Formula::Imp(_, rhs) if matches!(**rhs, Formula::Wand(..)));
    let pick_curry = match (curry_applies, uncurry_applies) {
        (false, false) => return f,
        (true, false) => true,
        (false, true) => false,
        (true, true) => rng.gen_bool(0.5),
    };
    let Formula::Imp(lhs, rhs) = f else { unreachable!() };
    if pick_curry {
        // (A * B) -> C  becomes  A -> (B -* C)
        let Formula::Star(a, b) = *lhs else { unreachable!() };
        Formula::imp(*a, Formula::Wand(b, rhs))
    } else {
        // A -> (B -* C)  becomes  (A * B) -> C
        let Formula::Wand(b, c) = *rhs else { unreachable!() };
        Formula::imp(Formula::Star(lhs, b), *c)
    }
}

/// The `k`-th theorem of the suite; a pure function of `(params.seed, k)`.
pub fn gen_theorem(params: &GenParams, k: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(k);
    let mut f = instantiate_schema(&mut rng, params.n);
    for _ in 0..params.i {
        f = mutate(&mut rng, f);
    }
    f
}

pub fn gen_suite(params: &GenParams) -> Vec<Formula> {
    (0..params.count as u64)
        .map(|k| gen_theorem(params, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_suite() {
        let p = GenParams {
            n: 10,
            i: 20,
            seed: 7,
            count: 25,
        };
        let a = gen_suite(&p);
        let b = gen_suite(&p);
        assert_eq!(a, b);
        let different = gen_suite(&GenParams { seed: 8, ..p });
        assert_ne!(a, different);
    }

    #[test]
    fn zero_iterations_yield_axiom_instances() {
        // With i = 0 the top connective is an implication straight from a
        // schema.
        let p = GenParams {
            n: 3,
            i: 0,
            seed: 42,
            count: 50,
        };
        for f in gen_suite(&p) {
            assert!(matches!(f, Formula::Imp(..)), "not a schema instance: {f}");
        }
    }

    #[test]
    fn curry_mutation_of_star_implication() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = Formula::imp(
            Formula::star(Formula::atom("p"), Formula::atom("q")),
            Formula::atom("r"),
        );
        let g = mutate(&mut rng, f);
        assert_eq!(
            g,
            Formula::imp(
                Formula::atom("p"),
                Formula::wand(Formula::atom("q"), Formula::atom("r"))
            )
        );
    }

    #[test]
    fn mutation_without_applicable_shape_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = Formula::and(Formula::atom("p"), Formula::atom("q"));
        assert_eq!(mutate(&mut rng, f.clone()), f);
    }
}
