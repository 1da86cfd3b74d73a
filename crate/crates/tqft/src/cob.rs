//! The cobordism category 2Cob as a term algebra over six generators,
//! with composition, disjoint union, and reduction to topological
//! normal form.
//!
//! Normal forms are computed by union-find over wire adjacency plus
//! Euler-characteristic bookkeeping, not by term rewriting: the
//! classification of connected compact oriented surfaces by
//! (inputs, outputs, genus) is exactly the invariant content of the
//! generator relations.

pub mod dsl;

use crate::error::{Error, Result};

/// The six generating cobordisms of 2Cob.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gen {
    /// Disk, 0 -> 1.
    Unit,
    /// Disk, 1 -> 0.
    Counit,
    /// Pair of pants, 2 -> 1.
    Mult,
    /// Reversed pair of pants, 1 -> 2.
    Comult,
    /// Cylinder, 1 -> 1.
    Id,
    /// Two crossing cylinders, 2 -> 2.
    Twist,
}

pub const GENERATORS: [Gen; 6] = [Gen::Unit, Gen::Counit, Gen::Mult, Gen::Comult, Gen::Id, Gen::Twist];

impl Gen {
    pub fn arity(self) -> (usize, usize) {
        match self {
            Gen::Unit => (0, 1),
            Gen::Counit => (1, 0),
            Gen::Mult => (2, 1),
            Gen::Comult => (1, 2),
            Gen::Id => (1, 1),
            Gen::Twist => (2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::Unit => "unit",
            Gen::Counit => "counit",
            Gen::Mult => "mult",
            Gen::Comult => "comult",
            Gen::Id => "id",
            Gen::Twist => "twist",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    Gen(Gen),
    Compose(Box<CobTerm>, Box<CobTerm>),
    Tensor(Box<CobTerm>, Box<CobTerm>),
}

/// A syntactic cobordism expression with cached arities.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CobTerm {
    node: Node,
    input: usize,
    output: usize,
}

/// Borrowed view of a term's top node, for structural recursion.
pub enum TermView<'a> {
    Gen(Gen),
    Compose(&'a CobTerm, &'a CobTerm),
    Tensor(&'a CobTerm, &'a CobTerm),
}

impl CobTerm {
    pub fn gen(g: Gen) -> CobTerm {
        let (input, output) = g.arity();
        CobTerm { node: Node::Gen(g), input, output }
    }

    pub fn unit() -> CobTerm {
        Self::gen(Gen::Unit)
    }
    pub fn counit() -> CobTerm {
        Self::gen(Gen::Counit)
    }
    pub fn mult() -> CobTerm {
        Self::gen(Gen::Mult)
    }
    pub fn comult() -> CobTerm {
        Self::gen(Gen::Comult)
    }
    pub fn id() -> CobTerm {
        Self::gen(Gen::Id)
    }
    pub fn twist() -> CobTerm {
        Self::gen(Gen::Twist)
    }

    /// n parallel cylinders, n >= 1.
    pub fn id_n(n: usize) -> CobTerm {
        assert!(n >= 1);
        let mut t = Self::id();
        for _ in 1..n {
            t = Self::tensor(t, Self::id());
        }
        t
    }

    /// Sequential composition, left to right: `f` then `g`.
    pub fn compose(f: CobTerm, g: CobTerm) -> Result<CobTerm> {
        if f.output != g.input {
            return Err(Error::ArityMismatch { left_out: f.output, right_in: g.input });
        }
        Ok(CobTerm {
            input: f.input,
            output: g.output,
            node: Node::Compose(Box::new(f), Box::new(g)),
        })
    }

    /// Disjoint union; arities add.
    pub fn tensor(f: CobTerm, g: CobTerm) -> CobTerm {
        CobTerm {
            input: f.input + g.input,
            output: f.output + g.output,
            node: Node::Tensor(Box::new(f), Box::new(g)),
        }
    }

    pub fn input(&self) -> usize {
        self.input
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn view(&self) -> TermView<'_> {
        match &self.node {
            Node::Gen(g) => TermView::Gen(*g),
            Node::Compose(f, g) => TermView::Compose(f, g),
            Node::Tensor(f, g) => TermView::Tensor(f, g),
        }
    }

    /// Orientation reversal: swap in/out roles. Structurally this is
    /// mult <-> comult, unit <-> counit, and reversed composition.
    pub fn transpose(&self) -> CobTerm {
        match self.view() {
            TermView::Gen(g) => CobTerm::gen(match g {
                Gen::Unit => Gen::Counit,
                Gen::Counit => Gen::Unit,
                Gen::Mult => Gen::Comult,
                Gen::Comult => Gen::Mult,
                Gen::Id => Gen::Id,
                Gen::Twist => Gen::Twist,
            }),
            TermView::Compose(f, g) => {
                CobTerm::compose(g.transpose(), f.transpose()).expect("transpose preserves arities")
            }
            TermView::Tensor(f, g) => CobTerm::tensor(f.transpose(), g.transpose()),
        }
    }

    pub fn size(&self) -> usize {
        match self.view() {
            TermView::Gen(_) => 1,
            TermView::Compose(f, g) | TermView::Tensor(f, g) => f.size() + g.size(),
        }
    }

    pub fn normalize(&self) -> NormalForm {
        normalize(self)
    }
}

/// One connected surface component of a normal form: the sorted global
/// boundary ports it touches, and its genus.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Component {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub genus: usize,
}

/// Topological classification of a cobordism term: open components
/// with their boundary wiring, plus genera of closed components.
/// Canonically ordered, so `Eq` is semantic equality of cobordisms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalForm {
    pub input: usize,
    pub output: usize,
    pub components: Vec<Component>,
    pub closed: Vec<usize>,
}

// Union-find with an Euler characteristic accumulated at each root.
struct Surfaces {
    parent: Vec<usize>,
    chi: Vec<i64>,
}

impl Surfaces {
    fn new() -> Self {
        Surfaces { parent: Vec::new(), chi: Vec::new() }
    }

    fn fresh(&mut self, chi: i64) -> usize {
        self.parent.push(self.parent.len());
        self.chi.push(chi);
        self.parent.len() - 1
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[b] = a;
            self.chi[a] += self.chi[b];
        }
    }
}

// Boundary ports of a partially built surface, as union-find node ids.
struct Wiring {
    ins: Vec<usize>,
    outs: Vec<usize>,
}

fn build(t: &CobTerm, s: &mut Surfaces) -> Wiring {
    match t.view() {
        TermView::Gen(g) => match g {
            Gen::Unit => {
                let c = s.fresh(1);
                Wiring { ins: vec![], outs: vec![c] }
            }
            Gen::Counit => {
                let c = s.fresh(1);
                Wiring { ins: vec![c], outs: vec![] }
            }
            Gen::Mult => {
                let c = s.fresh(-1);
                Wiring { ins: vec![c, c], outs: vec![c] }
            }
            Gen::Comult => {
                let c = s.fresh(-1);
                Wiring { ins: vec![c], outs: vec![c, c] }
            }
            Gen::Id => {
                let c = s.fresh(0);
                Wiring { ins: vec![c], outs: vec![c] }
            }
            Gen::Twist => {
                let c0 = s.fresh(0);
                let c1 = s.fresh(0);
                Wiring { ins: vec![c0, c1], outs: vec![c1, c0] }
            }
        },
        TermView::Compose(f, g) => {
            let wf = build(f, s);
            let wg = build(g, s);
            // glue along the middle circles; chi(S^1) = 0, so chi adds
            for (a, b) in wf.outs.iter().zip(wg.ins.iter()) {
                s.union(*a, *b);
            }
            Wiring { ins: wf.ins, outs: wg.outs }
        }
        TermView::Tensor(f, g) => {
            let mut wf = build(f, s);
            let mut wg = build(g, s);
            wf.ins.append(&mut wg.ins);
            wf.outs.append(&mut wg.outs);
            Wiring { ins: wf.ins, outs: wf.outs }
        }
    }
}

/// Classify a term: connected components by union-find over wire
/// adjacency, genus from chi = 2 - 2g - b per component.
pub fn normalize(t: &CobTerm) -> NormalForm {
    let mut s = Surfaces::new();
    let w = build(t, &mut s);

    let n = s.parent.len();
    let mut ins_of = vec![Vec::new(); n];
    let mut outs_of = vec![Vec::new(); n];
    for (i, &node) in w.ins.iter().enumerate() {
        let r = s.find(node);
        ins_of[r].push(i);
    }
    for (i, &node) in w.outs.iter().enumerate() {
        let r = s.find(node);
        outs_of[r].push(i);
    }

    let mut components = Vec::new();
    let mut closed = Vec::new();
    for r in 0..n {
        if s.find(r) != r {
            continue;
        }
        let chi = s.chi[r];
        let b = (ins_of[r].len() + outs_of[r].len()) as i64;
        let two_g = 2 - chi - b;
        assert!(two_g >= 0 && two_g % 2 == 0, "chi bookkeeping broke: chi={chi} b={b}");
        let genus = (two_g / 2) as usize;
        if b == 0 {
            closed.push(genus);
        } else {
            components.push(Component {
                inputs: std::mem::take(&mut ins_of[r]),
                outputs: std::mem::take(&mut outs_of[r]),
                genus,
            });
        }
    }
    // canonical order: ports within a component are already ascending,
    // components sorted by (inputs, outputs, genus)
    components.sort_by(|a, b| {
        (a.inputs.len(), a.outputs.len(), a.genus, &a.inputs, &a.outputs).cmp(&(
            b.inputs.len(),
            b.outputs.len(),
            b.genus,
            &b.inputs,
            &b.outputs,
        ))
    });
    closed.sort_unstable();
    NormalForm { input: t.input, output: t.output, components, closed }
}

/// Semantic equality of cobordisms: equal normal forms.
pub fn equal(f: &CobTerm, g: &CobTerm) -> bool {
    if (f.input, f.output) != (g.input, g.output) {
        return false;
    }
    normalize(f) == normalize(g)
}

/// A cobordism (n -> n) of crossing cylinders sending input wire i to
/// output position perm[i]. perm must be a permutation of 0..n, n >= 1.
pub fn permutation_term(perm: &[usize]) -> CobTerm {
    let n = perm.len();
    assert!(n >= 1);
    // target[pos] = which input wire must end at pos
    let mut target = vec![0usize; n];
    for (i, &p) in perm.iter().enumerate() {
        target[p] = i;
    }
    let mut arr: Vec<usize> = (0..n).collect();
    let mut term = CobTerm::id_n(n);
    for pos in 0..n {
        let mut k = arr.iter().position(|&w| w == target[pos]).unwrap();
        while k > pos {
            // adjacent swap at (k-1, k)
            let mut layer = if k >= 2 { Some(CobTerm::id_n(k - 1)) } else { None };
            layer = Some(match layer {
                Some(l) => CobTerm::tensor(l, CobTerm::twist()),
                None => CobTerm::twist(),
            });
            let mut layer = layer.unwrap();
            if k + 1 < n {
                layer = CobTerm::tensor(layer, CobTerm::id_n(n - k - 1));
            }
            term = CobTerm::compose(term, layer).expect("permutation layers are n -> n");
            arr.swap(k - 1, k);
            k -= 1;
        }
    }
    term
}

/// A connected (m -> n, genus g) cobordism term.
pub fn connected_term(m: usize, n: usize, genus: usize) -> CobTerm {
    fn merge(m: usize) -> CobTerm {
        // m -> 1
        match m {
            0 => CobTerm::unit(),
            1 => CobTerm::id(),
            2 => CobTerm::mult(),
            _ => CobTerm::compose(CobTerm::tensor(merge(m - 1), CobTerm::id()), CobTerm::mult())
                .expect("merge tree arities line up"),
        }
    }
    let mut t = merge(m);
    for _ in 0..genus {
        let handle = CobTerm::compose(CobTerm::comult(), CobTerm::mult()).unwrap();
        t = CobTerm::compose(t, handle).unwrap();
    }
    let split = merge(n).transpose(); // 1 -> n
    CobTerm::compose(t, split).expect("split tree arities line up")
}

impl NormalForm {
    /// Rebuild a term wiring-equivalent to this normal form:
    /// input permutation, tensored components, output permutation.
    pub fn to_term(&self) -> CobTerm {
        let mut middle: Option<CobTerm> = None;
        let mut push = |t: CobTerm| {
            middle = Some(match middle.take() {
                Some(m) => CobTerm::tensor(m, t),
                None => t,
            });
        };
        for c in &self.components {
            push(connected_term(c.inputs.len(), c.outputs.len(), c.genus));
        }
        for &g in &self.closed {
            push(connected_term(0, 0, g));
        }
        let middle = middle.expect("a normal form has at least one component");

        let mut term = middle;
        if self.input >= 1 {
            // global input i must arrive at its grouped position
            let mut perm = vec![0usize; self.input];
            let mut pos = 0;
            for c in &self.components {
                for &g in &c.inputs {
                    perm[g] = pos;
                    pos += 1;
                }
            }
            term = CobTerm::compose(permutation_term(&perm), term).unwrap();
        }
        if self.output >= 1 {
            // grouped output position j carries global output out_concat[j]
            let mut perm = Vec::with_capacity(self.output);
            for c in &self.components {
                perm.extend(c.outputs.iter().copied());
            }
            term = CobTerm::compose(term, permutation_term(&perm)).unwrap();
        }
        term
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(f: CobTerm, g: CobTerm) -> CobTerm {
        CobTerm::compose(f, g).unwrap()
    }

    #[test]
    fn compose_arities() {
        let t = comp(CobTerm::mult(), CobTerm::counit());
        assert_eq!((t.input(), t.output()), (2, 0));
        let err = CobTerm::compose(CobTerm::mult(), CobTerm::mult()).unwrap_err();
        assert!(matches!(err, Error::ArityMismatch { left_out: 1, right_in: 2 }));
    }

    #[test]
    fn tensor_arities() {
        assert_eq!(
            {
                let t = CobTerm::tensor(CobTerm::id(), CobTerm::id());
                (t.input(), t.output())
            },
            (2, 2)
        );
        let t = CobTerm::tensor(CobTerm::unit(), CobTerm::counit());
        assert_eq!((t.input(), t.output()), (1, 1));
    }

    #[test]
    fn identity_relation() {
        let t = comp(CobTerm::id(), CobTerm::id());
        assert!(equal(&t, &CobTerm::id()));
    }

    #[test]
    fn handle_has_genus_one() {
        let t = comp(CobTerm::comult(), CobTerm::mult());
        let nf = normalize(&t);
        assert_eq!(nf.closed, Vec::<usize>::new());
        assert_eq!(
            nf.components,
            vec![Component { inputs: vec![0], outputs: vec![0], genus: 1 }]
        );
    }

    #[test]
    fn sphere_and_torus() {
        let sphere = comp(CobTerm::unit(), CobTerm::counit());
        let nf = normalize(&sphere);
        assert!(nf.components.is_empty());
        assert_eq!(nf.closed, vec![0]);

        let torus = comp(
            comp(CobTerm::unit(), CobTerm::comult()),
            comp(CobTerm::mult(), CobTerm::counit()),
        );
        assert_eq!(normalize(&torus).closed, vec![1]);
    }

    #[test]
    fn tensor_with_closed_sphere() {
        let t = CobTerm::tensor(CobTerm::id(), comp(CobTerm::unit(), CobTerm::counit()));
        let nf = normalize(&t);
        assert_eq!(nf.closed, vec![0]);
        assert_eq!(
            nf.components,
            vec![Component { inputs: vec![0], outputs: vec![0], genus: 0 }]
        );
    }

    #[test]
    fn commutativity_frobenius_symmetry_relations() {
        // Figure 4: mult after twist = mult
        let lhs = comp(CobTerm::twist(), CobTerm::mult());
        assert!(equal(&lhs, &CobTerm::mult()));

        // Figure 5: (comult x id);(id x mult) = mult;comult
        let lhs = comp(
            CobTerm::tensor(CobTerm::comult(), CobTerm::id()),
            CobTerm::tensor(CobTerm::id(), CobTerm::mult()),
        );
        let rhs = comp(CobTerm::mult(), CobTerm::comult());
        assert!(equal(&lhs, &rhs));

        // Figure 6: twist;twist = id x id
        let lhs = comp(CobTerm::twist(), CobTerm::twist());
        assert!(equal(&lhs, &CobTerm::tensor(CobTerm::id(), CobTerm::id())));
        // but a single twist is not the identity wiring
        assert!(!equal(
            &CobTerm::twist(),
            &CobTerm::tensor(CobTerm::id(), CobTerm::id())
        ));
    }

    #[test]
    fn unequal_arities_and_shapes() {
        assert!(!equal(&CobTerm::mult(), &CobTerm::comult()));
    }

    #[test]
    fn normalize_idempotent_through_rebuild() {
        let terms = vec![
            comp(CobTerm::comult(), CobTerm::mult()),
            CobTerm::tensor(CobTerm::twist(), comp(CobTerm::unit(), CobTerm::counit())),
            comp(
                CobTerm::tensor(CobTerm::comult(), CobTerm::unit()),
                comp(
                    CobTerm::tensor(CobTerm::twist(), CobTerm::id()),
                    CobTerm::tensor(CobTerm::id(), CobTerm::mult()),
                ),
            ),
        ];
        for t in terms {
            let nf = normalize(&t);
            let rebuilt = nf.to_term();
            assert_eq!((rebuilt.input(), rebuilt.output()), (t.input(), t.output()));
            assert_eq!(normalize(&rebuilt), nf);
        }
    }

    #[test]
    fn permutation_term_wiring() {
        // send wire 0 -> 2, 1 -> 0, 2 -> 1
        let p = permutation_term(&[2, 0, 1]);
        let nf = normalize(&p);
        assert_eq!(nf.components.len(), 3);
        for c in &nf.components {
            assert_eq!(c.genus, 0);
        }
        let find_out = |i: usize| {
            nf.components.iter().find(|c| c.inputs == vec![i]).unwrap().outputs[0]
        };
        assert_eq!((find_out(0), find_out(1), find_out(2)), (2, 0, 1));
    }

    #[test]
    fn transpose_swaps_roles() {
        let t = comp(CobTerm::mult(), CobTerm::counit());
        let tt = t.transpose();
        assert_eq!((tt.input(), tt.output()), (0, 2));
        assert!(equal(
            &tt,
            &comp(CobTerm::unit(), CobTerm::comult())
        ));
    }

    #[test]
    fn chi_parity_invariant() {
        // 2 - 2g - b = chi means b and chi have the same parity; the
        // normalize assertion enforces it, so exercising a few shapes
        // is enough.
        for t in [
            connected_term(3, 2, 1),
            connected_term(0, 4, 2),
            connected_term(2, 0, 0),
        ] {
            let nf = normalize(&t);
            assert_eq!(nf.components.len(), 1);
        }
    }
}
