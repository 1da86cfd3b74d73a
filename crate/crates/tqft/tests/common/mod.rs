//! Shared helpers for the integration suites: seeded random term
//! generation with a size budget, and the defining relation pairs of
//! the cobordism category.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tqft::cob::{CobTerm, Gen};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponent bound on apex carrier size: the span of a term of weight w
/// over G has every intermediate carrier at most |G|^w.
pub fn weight(t: &CobTerm) -> usize {
    use tqft::cob::TermView;
    match t.view() {
        TermView::Gen(Gen::Unit) | TermView::Gen(Gen::Counit) => 0,
        TermView::Gen(Gen::Id) => 1,
        TermView::Gen(_) => 2,
        TermView::Compose(f, g) => weight(f) + weight(g) + f.output(),
        TermView::Tensor(f, g) => weight(f) + weight(g),
    }
}

fn atom_with_input(r: &mut ChaCha8Rng, m: usize) -> (CobTerm, usize) {
    // Returns an atom together with how many input wires it consumed.
    if m >= 2 && r.gen_bool(0.5) {
        let t = if r.gen_bool(0.7) { CobTerm::mult() } else { CobTerm::twist() };
        return (t, 2);
    }
    if m >= 1 {
        let t = match r.gen_range(0..4) {
            0 => CobTerm::id(),
            1 => CobTerm::comult(),
            2 => CobTerm::counit(),
            _ => CobTerm::id(),
        };
        return (t, 1);
    }
    (CobTerm::unit(), 0)
}

/// One monoidal layer with exactly `m` input wires.
fn layer_with_input(r: &mut ChaCha8Rng, m: usize) -> CobTerm {
    if m == 0 {
        return CobTerm::unit();
    }
    let mut left = m;
    let mut parts: Vec<CobTerm> = Vec::new();
    while left > 0 {
        let (atom, used) = atom_with_input(r, left);
        left -= used;
        parts.push(atom);
    }
    let mut t = parts.remove(0);
    for p in parts {
        t = CobTerm::tensor(t, p);
    }
    t
}

/// A well-formed term with `m` input wires and nesting depth at most
/// `depth` (each composed layer spends one unit of depth).
pub fn term_with_input(r: &mut ChaCha8Rng, m: usize, depth: usize) -> CobTerm {
    let layer = layer_with_input(r, m);
    if depth == 0 || r.gen_bool(0.35) {
        return layer;
    }
    let out = layer.output();
    let rest = term_with_input(r, out.min(4), depth - 1);
    if rest.input() != out {
        return layer; // width was clamped; stop here
    }
    CobTerm::compose(layer, rest).expect("arities match by construction")
}

/// A random well-formed term of depth at most `depth` whose span-side
/// cost stays under |G|^max_weight at every intermediate step.
pub fn random_term(r: &mut ChaCha8Rng, depth: usize, max_weight: usize) -> CobTerm {
    bounded_term(r, depth, max_weight, usize::MAX)
}

/// As `random_term`, but also bounding input + output arity so that
/// the evaluated matrix stays small (it has dim^(in+out) entries).
pub fn bounded_term(
    r: &mut ChaCha8Rng,
    depth: usize,
    max_weight: usize,
    max_boundary: usize,
) -> CobTerm {
    loop {
        let m = r.gen_range(0..=3);
        let t = term_with_input(r, m, depth);
        if weight(&t) <= max_weight && t.input() + t.output() <= max_boundary {
            return t;
        }
    }
}

/// A composable pair (f, g) with f.output() == g.input().
pub fn composable_pair(r: &mut ChaCha8Rng, depth: usize, max_weight: usize) -> (CobTerm, CobTerm) {
    loop {
        let f = bounded_term(r, depth, max_weight, 8);
        let g = term_with_input(r, f.output(), depth);
        if weight(&g) <= max_weight && g.input() + g.output() <= 8 {
            return (f, g);
        }
    }
}

/// The defining relations: each pair is topologically equal, so every
/// evaluation must send both sides to the same matrix.
pub fn relation_pairs() -> Vec<(&'static str, CobTerm, CobTerm)> {
    let c = |f: CobTerm, g: CobTerm| CobTerm::compose(f, g).unwrap();
    let t = CobTerm::tensor;
    let (unit, counit) = (CobTerm::unit, CobTerm::counit);
    let (mult, comult) = (CobTerm::mult, CobTerm::comult);
    let (id, twist) = (CobTerm::id, CobTerm::twist);
    vec![
        ("left unit", c(t(unit(), id()), mult()), id()),
        ("right unit", c(t(id(), unit()), mult()), id()),
        ("left counit", c(comult(), t(counit(), id())), id()),
        ("right counit", c(comult(), t(id(), counit())), id()),
        (
            "associativity",
            c(t(mult(), id()), mult()),
            c(t(id(), mult()), mult()),
        ),
        (
            "coassociativity",
            c(comult(), t(comult(), id())),
            c(comult(), t(id(), comult())),
        ),
        ("commutativity", c(twist(), mult()), mult()),
        ("cocommutativity", comult(), c(comult(), twist())),
        (
            "frobenius left",
            c(t(comult(), id()), t(id(), mult())),
            c(mult(), comult()),
        ),
        (
            "frobenius right",
            c(t(id(), comult()), t(mult(), id())),
            c(mult(), comult()),
        ),
        ("twist involution", c(twist(), twist()), t(id(), id())),
    ]
}

/// Embed a relation pair in a random context: a random prefix into its
/// input boundary and a random suffix out of its output boundary.
pub fn embedded_relation_pair(r: &mut ChaCha8Rng, max_weight: usize) -> (&'static str, CobTerm, CobTerm) {
    let pairs = relation_pairs();
    loop {
        let (name, lhs, rhs) = pairs[r.gen_range(0..pairs.len())].clone();
        let prefix = term_with_input(r, lhs.input(), 2).transpose();
        let suffix = term_with_input(r, lhs.output(), 2);
        let glue = |mid: CobTerm| {
            CobTerm::compose(CobTerm::compose(prefix.clone(), mid).unwrap(), suffix.clone())
                .unwrap()
        };
        let (a, b) = (glue(lhs), glue(rhs));
        if weight(&a) <= max_weight && weight(&b) <= max_weight {
            return (name, a, b);
        }
    }
}
