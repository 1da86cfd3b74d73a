//! Finite gauge fields as action groupoids, cobordism generators as
//! spans of groupoids, composition by weak (iso-comma) pullback, and
//! degroupoidification into exact rational linear maps.
//!
//! Every groupoid here is acted on by a power of one base group G:
//! boundary circles carry holonomies with conjugation gauge action,
//! a connected generator surface carries one gauge factor, and weak
//! pullbacks and disjoint unions multiply the gauge factors. Weights
//! are groupoid cardinality: iso classes counted with 1/|Aut|.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::cob::{CobTerm, Gen, TermView};
use crate::error::{Error, Result};
use crate::group::{centralizer_order, conjugacy_classes, ConjugacyClasses, FiniteGroup};
use crate::linalg::{LinearMap, Matrix, Q};

/// Default cap on weak-pullback apex enumeration.
pub const DEFAULT_SPAN_CAP: u64 = 10_000_000;

/// A base group together with its conjugacy data, shared by every
/// groupoid built over it.
#[derive(Debug)]
pub struct GroupCtx {
    pub group: FiniteGroup,
    pub classes: ConjugacyClasses,
    pub centralizer_orders: Vec<usize>, // per class
}

impl GroupCtx {
    pub fn new(group: FiniteGroup) -> Arc<GroupCtx> {
        let classes = conjugacy_classes(&group);
        let centralizer_orders = classes
            .representatives
            .iter()
            .map(|&r| centralizer_order(&group, r))
            .collect();
        Arc::new(GroupCtx { group, classes, centralizer_orders })
    }

    pub fn order(&self) -> usize {
        self.group.order
    }

    pub fn num_classes(&self) -> usize {
        self.classes.count()
    }

    /// Carrier size of the boundary groupoid on `arity` circles.
    pub fn foot_len(&self, arity: usize, cap: u64) -> Result<usize> {
        checked_pow(self.order(), arity, cap, "boundary field space")
    }

    /// Number of iso classes of the boundary groupoid on `arity` circles.
    pub fn foot_classes(&self, arity: usize, cap: u64) -> Result<usize> {
        checked_pow(self.num_classes(), arity, cap, "boundary state space")
    }

    fn decode(&self, point: usize, arity: usize) -> Vec<usize> {
        let n = self.order();
        let mut digits = vec![0; arity];
        let mut p = point;
        for d in digits.iter_mut().rev() {
            *d = p % n;
            p /= n;
        }
        digits
    }

    fn encode(&self, digits: &[usize]) -> usize {
        let n = self.order();
        digits.iter().fold(0, |acc, &d| acc * n + d)
    }

    /// Componentwise conjugation of a boundary point by h in G^arity.
    fn conj_foot(&self, h: &[usize], point: usize) -> usize {
        let digits = self.decode(point, h.len());
        let conj: Vec<usize> =
            h.iter().zip(&digits).map(|(&hi, &xi)| self.group.conj(hi, xi)).collect();
        self.encode(&conj)
    }

    /// Iso class of a boundary point: the tuple of conjugacy classes,
    /// indexed lexicographically with the leftmost circle slowest.
    pub fn foot_class_of(&self, point: usize, arity: usize) -> usize {
        let nc = self.num_classes();
        self.decode(point, arity)
            .iter()
            .fold(0, |acc, &d| acc * nc + self.classes.class_of[d])
    }

    /// |Aut| of a boundary iso class: product of centralizer orders.
    pub fn foot_class_aut(&self, class: usize, arity: usize) -> BigUint {
        let nc = self.num_classes();
        let mut c = class;
        let mut aut = BigUint::one();
        for _ in 0..arity {
            aut *= BigUint::from(self.centralizer_orders[c % nc]);
            c /= nc;
        }
        aut
    }
}

fn checked_pow(base: usize, exp: usize, cap: u64, what: &str) -> Result<usize> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= base as u128;
        if acc > cap as u128 {
            return Err(Error::ResourceCap {
                detail: format!("{what} needs {base}^{exp} points"),
                cap,
            });
        }
    }
    Ok(acc as usize)
}

/// A finite groupoid presented by an action of G^rank on a carrier set.
pub struct ActionGroupoid {
    pub ctx: Arc<GroupCtx>,
    pub rank: usize,
    pub carrier: usize,
    /// act[(factor * |G| + g) * carrier + x] = image of x under the
    /// element g placed in the given gauge factor.
    act: Vec<u32>,
    pub label: String,
}

impl ActionGroupoid {
    #[inline]
    pub fn act(&self, factor: usize, g: usize, x: usize) -> usize {
        self.act[(factor * self.ctx.order() + g) * self.carrier + x] as usize
    }

    pub fn group_order(&self) -> BigUint {
        BigUint::from(self.ctx.order()).pow(self.rank as u32)
    }

    /// Verify the action laws: identity acts trivially, each factor's
    /// action is compatible with the group multiplication, and
    /// distinct factors commute.
    pub fn check_action(&self) -> Result<()> {
        let n = self.ctx.order();
        let e = self.ctx.group.identity;
        for f in 0..self.rank {
            for x in 0..self.carrier {
                if self.act(f, e, x) != x {
                    return Err(Error::Group(format!(
                        "{}: identity moves point {x} in factor {f}",
                        self.label
                    )));
                }
                for g in 0..n {
                    for h in 0..n {
                        if self.act(f, g, self.act(f, h, x))
                            != self.act(f, self.ctx.group.mul(g, h), x)
                        {
                            return Err(Error::Group(format!(
                                "{}: factor {f} action incompatible at ({g},{h},{x})",
                                self.label
                            )));
                        }
                    }
                }
                for f2 in 0..f {
                    for g in 0..n {
                        for h in 0..n {
                            if self.act(f, g, self.act(f2, h, x))
                                != self.act(f2, h, self.act(f, g, x))
                            {
                                return Err(Error::Group(format!(
                                    "{}: factors {f2},{f} do not commute at ({g},{h},{x})",
                                    self.label
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Orbits of the carrier, each sorted, ordered by (size, minimum).
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.ctx.order();
        let mut seen = vec![false; self.carrier];
        let mut orbits = Vec::new();
        for start in 0..self.carrier {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut frontier = vec![start];
            while let Some(x) = frontier.pop() {
                for f in 0..self.rank {
                    for g in 0..n {
                        let y = self.act(f, g, x);
                        if !seen[y] {
                            seen[y] = true;
                            orbit.push(y);
                            frontier.push(y);
                        }
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits.sort_by_key(|o| (o.len(), o[0]));
        orbits
    }
}

/// Orbit representatives of an action groupoid with their stabilizer
/// orders; the groupoid-cardinality measure lives here.
pub struct IsoClassSpace {
    pub classes: Vec<usize>,
    pub aut_orders: Vec<BigUint>,
}

pub fn iso_class_space(g: &ActionGroupoid) -> IsoClassSpace {
    let group_order = g.group_order();
    let orbits = g.orbits();
    let mut classes = Vec::with_capacity(orbits.len());
    let mut aut_orders = Vec::with_capacity(orbits.len());
    let mut total = BigUint::from(0u32);
    for o in &orbits {
        classes.push(o[0]);
        // orbit-stabilizer: |Aut| = |group| / |orbit|
        let aut = &group_order / BigUint::from(o.len());
        assert_eq!(
            &aut * BigUint::from(o.len()),
            group_order,
            "orbit size does not divide the group order"
        );
        total += BigUint::from(o.len());
        aut_orders.push(aut);
    }
    assert_eq!(total, BigUint::from(g.carrier), "orbits must partition the carrier");
    IsoClassSpace { classes, aut_orders }
}

/// One leg of a span: a gauge homomorphism (each boundary gauge factor
/// pulls from one apex gauge factor) plus an equivariant carrier map.
pub struct SpanLeg {
    pub arity: usize,
    pub factor_src: Vec<usize>,
    pub carrier_map: Vec<u32>,
}

impl SpanLeg {
    fn point(&self, x: usize) -> usize {
        self.carrier_map[x] as usize
    }
}

/// A span of groupoids between two boundary field groupoids.
pub struct GroupoidSpan {
    pub ctx: Arc<GroupCtx>,
    pub apex: ActionGroupoid,
    pub left: SpanLeg,  // restriction to the incoming boundary
    pub right: SpanLeg, // restriction to the outgoing boundary
}

impl GroupoidSpan {
    pub fn in_arity(&self) -> usize {
        self.left.arity
    }

    pub fn out_arity(&self) -> usize {
        self.right.arity
    }

    /// Both legs jointly equivariant: leg(g.x) = hom(g).leg(x).
    pub fn check_equivariance(&self) -> Result<()> {
        let n = self.ctx.order();
        for leg in [&self.left, &self.right] {
            for x in 0..self.apex.carrier {
                for f in 0..self.apex.rank {
                    for g in 0..n {
                        let moved = leg.point(self.apex.act(f, g, x));
                        let mut h = vec![self.ctx.group.identity; leg.arity];
                        for (i, &src) in leg.factor_src.iter().enumerate() {
                            if src == f {
                                h[i] = g;
                            }
                        }
                        let expect = self.ctx.conj_foot(&h, leg.point(x));
                        if moved != expect {
                            return Err(Error::Group(format!(
                                "{}: leg not equivariant at (x={x}, factor={f}, g={g})",
                                self.apex.label
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Holonomies around a circle with conjugation gauge action; its iso
/// classes are the conjugacy classes in group-core order.
pub fn circle_groupoid(ctx: Arc<GroupCtx>) -> ActionGroupoid {
    let n = ctx.order();
    let mut act = vec![0u32; n * n];
    for g in 0..n {
        for x in 0..n {
            act[g * n + x] = ctx.group.conj(g, x) as u32;
        }
    }
    ActionGroupoid { ctx, rank: 1, carrier: n, act, label: "circle".to_string() }
}

/// The flat-field span of one generator cobordism.
pub fn generator_span(gen: Gen, ctx: Arc<GroupCtx>) -> GroupoidSpan {
    let n = ctx.order();
    let ident: Vec<u32> = (0..n as u32).collect();
    let conj_act = || {
        let mut act = vec![0u32; n * n];
        for g in 0..n {
            for x in 0..n {
                act[g * n + x] = ctx.group.conj(g, x) as u32;
            }
        }
        act
    };
    // diagonal conjugation on pairs, single gauge factor
    let pair_diag_act = || {
        let mut act = vec![0u32; n * n * n];
        for g in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let img = ctx.group.conj(g, a) * n + ctx.group.conj(g, b);
                    act[g * (n * n) + a * n + b] = img as u32;
                }
            }
        }
        act
    };
    // componentwise conjugation on pairs, two gauge factors
    let pair_two_factor_act = || {
        let mut act = vec![0u32; 2 * n * n * n];
        for g in 0..n {
            for a in 0..n {
                for b in 0..n {
                    act[g * (n * n) + a * n + b] = (ctx.group.conj(g, a) * n + b) as u32;
                    act[(n + g) * (n * n) + a * n + b] = (a * n + ctx.group.conj(g, b)) as u32;
                }
            }
        }
        act
    };
    let pair_ident: Vec<u32> = (0..(n * n) as u32).collect();
    let product_map: Vec<u32> =
        (0..n * n).map(|p| ctx.group.mul(p / n, p % n) as u32).collect();

    let (apex, left, right) = match gen {
        Gen::Unit => (
            ActionGroupoid {
                ctx: ctx.clone(),
                rank: 1,
                carrier: 1,
                act: vec![0u32; n],
                label: "disk".to_string(),
            },
            SpanLeg { arity: 0, factor_src: vec![], carrier_map: vec![0] },
            SpanLeg {
                arity: 1,
                factor_src: vec![0],
                carrier_map: vec![ctx.group.identity as u32],
            },
        ),
        Gen::Counit => (
            ActionGroupoid {
                ctx: ctx.clone(),
                rank: 1,
                carrier: 1,
                act: vec![0u32; n],
                label: "disk".to_string(),
            },
            SpanLeg {
                arity: 1,
                factor_src: vec![0],
                carrier_map: vec![ctx.group.identity as u32],
            },
            SpanLeg { arity: 0, factor_src: vec![], carrier_map: vec![0] },
        ),
        Gen::Id => (
            ActionGroupoid {
                ctx: ctx.clone(),
                rank: 1,
                carrier: n,
                act: conj_act(),
                label: "cylinder".to_string(),
            },
            SpanLeg { arity: 1, factor_src: vec![0], carrier_map: ident.clone() },
            SpanLeg { arity: 1, factor_src: vec![0], carrier_map: ident },
        ),
        Gen::Mult => (
            ActionGroupoid {
                ctx: ctx.clone(),
                rank: 1,
                carrier: n * n,
                act: pair_diag_act(),
                label: "pants".to_string(),
            },
            SpanLeg { arity: 2, factor_src: vec![0, 0], carrier_map: pair_ident },
            SpanLeg { arity: 1, factor_src: vec![0], carrier_map: product_map },
        ),
        Gen::Comult => (
            ActionGroupoid {
                ctx: ctx.clone(),
                rank: 1,
                carrier: n * n,
                act: pair_diag_act(),
                label: "pants (reversed)".to_string(),
            },
            SpanLeg { arity: 1, factor_src: vec![0], carrier_map: product_map },
            SpanLeg { arity: 2, factor_src: vec![0, 0], carrier_map: pair_ident },
        ),
        Gen::Twist => {
            let swap_map: Vec<u32> = (0..n * n).map(|p| ((p % n) * n + p / n) as u32).collect();
            (
                ActionGroupoid {
                    ctx: ctx.clone(),
                    rank: 2,
                    carrier: n * n,
                    act: pair_two_factor_act(),
                    label: "crossed cylinders".to_string(),
                },
                SpanLeg { arity: 2, factor_src: vec![0, 1], carrier_map: pair_ident },
                SpanLeg { arity: 2, factor_src: vec![1, 0], carrier_map: swap_map },
            )
        }
    };
    GroupoidSpan { ctx, apex, left, right }
}

fn guard(value: u128, cap: u64, what: &str) -> Result<()> {
    if value > cap as u128 {
        Err(Error::ResourceCap { detail: format!("{what} needs {value} steps/points"), cap })
    } else {
        Ok(())
    }
}

/// Weak pullback: the apex holds pairs of field configurations plus an
/// explicit gauge element of the shared foot relating their
/// restrictions. Action componentwise, connecting element transported.
pub fn compose_spans(s1: &GroupoidSpan, s2: &GroupoidSpan, cap: u64) -> Result<GroupoidSpan> {
    if !Arc::ptr_eq(&s1.ctx, &s2.ctx) && s1.ctx.group.name != s2.ctx.group.name {
        return Err(Error::FootMismatch("spans built over different base groups".into()));
    }
    if s1.out_arity() != s2.in_arity() {
        return Err(Error::FootMismatch(format!(
            "cannot compose a span into {} circles with one out of {}",
            s1.out_arity(),
            s2.in_arity()
        )));
    }
    let ctx = s1.ctx.clone();
    let n = ctx.order();
    let k = s1.out_arity();
    let mid = ctx.foot_len(k, cap)?;
    let e = ctx.group.identity;

    // Gauge-fix interior factors of s1 (those feeding only seam
    // circles): such a factor translates the connecting morphism
    // freely, so restricting one of its seam coordinates (the pivot)
    // to the identity picks exactly one point per orbit and yields an
    // equivalent, n-times-smaller apex. Each circle is fed by exactly
    // one s1 factor, so pivots never interfere.
    let mut eager: Vec<(usize, usize, Vec<usize>)> = Vec::new(); // (factor, pivot, seams)
    let mut fixed = vec![false; k];
    for f in 0..s1.apex.rank {
        if s1.left.factor_src.contains(&f) {
            continue;
        }
        let seams: Vec<usize> =
            (0..k).filter(|&i| s1.right.factor_src[i] == f).collect();
        if let Some(&pivot) = seams.first() {
            fixed[pivot] = true;
            eager.push((f, pivot, seams));
        }
    }
    let free_circles: Vec<usize> = (0..k).filter(|&i| !fixed[i]).collect();
    let free_count = ctx.foot_len(free_circles.len(), cap)?;
    guard(
        s1.apex.carrier as u128 * free_count as u128,
        cap.saturating_mul(8),
        "weak pullback enumeration",
    )?;

    // y's of the second apex grouped by their left restriction
    let mut by_restriction: Vec<Vec<u32>> = vec![Vec::new(); mid];
    for y in 0..s2.apex.carrier {
        by_restriction[s2.left.point(y)].push(y as u32);
    }

    let mut triples: Vec<(u32, u32, u32)> = Vec::new();
    let mut h_digits = vec![e; k];
    for x in 0..s1.apex.carrier {
        let base = s1.right.point(x);
        let mut free_digits = vec![0usize; free_circles.len()];
        loop {
            for (slot, &i) in free_circles.iter().enumerate() {
                h_digits[i] = free_digits[slot];
            }
            let h = ctx.encode(&h_digits) as u32;
            let target = ctx.conj_foot(&h_digits, base);
            for &y in &by_restriction[target] {
                triples.push((x as u32, h, y));
                if triples.len() as u128 > cap as u128 {
                    return Err(Error::ResourceCap {
                        detail: "weak pullback apex carrier".to_string(),
                        cap,
                    });
                }
            }
            // next free tuple, leftmost slowest (keeps triples sorted)
            let mut slot = free_circles.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                free_digits[slot] += 1;
                if free_digits[slot] < n {
                    break;
                }
                free_digits[slot] = 0;
            }
            if free_digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }

    let carrier = triples.len();
    let kept: Vec<usize> =
        (0..s1.apex.rank).filter(|f| !eager.iter().any(|(ef, _, _)| ef == f)).collect();
    let s1_new: Vec<usize> = {
        let mut m = vec![usize::MAX; s1.apex.rank];
        for (i, &f) in kept.iter().enumerate() {
            m[f] = i;
        }
        m
    };
    let rank = kept.len() + s2.apex.rank;
    guard(carrier as u128 * rank as u128 * n as u128, cap.saturating_mul(8), "apex action table")?;

    // Restore the pivot coordinates to the identity after an action.
    let canon = |x: &mut usize, hd: &mut [usize]| {
        for (f, pivot, seams) in &eager {
            let gfix = hd[*pivot];
            if gfix != e {
                *x = s1.apex.act(*f, gfix, *x);
                let ginv = ctx.group.inv(gfix);
                for &i in seams {
                    hd[i] = ctx.group.mul(hd[i], ginv);
                }
            }
        }
    };
    let index = |t: (u32, u32, u32)| -> u32 {
        triples.binary_search(&t).expect("apex is closed under the action") as u32
    };

    let mut act = vec![0u32; rank * n * carrier];
    for (t, &(x, h, y)) in triples.iter().enumerate() {
        let h_digits = ctx.decode(h as usize, k);
        for &f in &kept {
            for g in 0..n {
                let x2 = s1.apex.act(f, g, x as usize);
                // h' = h . phi1(g)^{-1} on the circles fed by f
                let ginv = ctx.group.inv(g);
                let mut hd = h_digits.clone();
                for (i, &src) in s1.right.factor_src.iter().enumerate() {
                    if src == f {
                        hd[i] = ctx.group.mul(hd[i], ginv);
                    }
                }
                let img = index((x2 as u32, ctx.encode(&hd) as u32, y));
                act[(s1_new[f] * n + g) * carrier + t] = img;
            }
        }
        for f2 in 0..s2.apex.rank {
            let f = kept.len() + f2;
            for g in 0..n {
                let y2 = s2.apex.act(f2, g, y as usize) as u32;
                // h' = phi2(g) . h on the circles fed by f2
                let mut hd = h_digits.clone();
                for (i, &src) in s2.left.factor_src.iter().enumerate() {
                    if src == f2 {
                        hd[i] = ctx.group.mul(g, hd[i]);
                    }
                }
                let mut x2 = x as usize;
                canon(&mut x2, &mut hd);
                let img = index((x2 as u32, ctx.encode(&hd) as u32, y2));
                act[(f * n + g) * carrier + t] = img;
            }
        }
    }

    let left = SpanLeg {
        arity: s1.in_arity(),
        factor_src: s1.left.factor_src.iter().map(|&f| s1_new[f]).collect(),
        carrier_map: triples.iter().map(|&(x, _, _)| s1.left.carrier_map[x as usize]).collect(),
    };
    let right = SpanLeg {
        arity: s2.out_arity(),
        factor_src: s2.right.factor_src.iter().map(|&f| f + kept.len()).collect(),
        carrier_map: triples.iter().map(|&(_, _, y)| s2.right.carrier_map[y as usize]).collect(),
    };
    let apex = ActionGroupoid {
        ctx: ctx.clone(),
        rank,
        carrier,
        act,
        label: format!("({}) . ({})", s1.apex.label, s2.apex.label),
    };
    Ok(reduce_gauge(GroupoidSpan { ctx, apex, left, right }))
}

/// Quotient away apex gauge factors that no leg references and that
/// act freely: the quotient groupoid is equivalent (orbits and
/// automorphism orders are unchanged), so every downstream
/// composition and degroupoidification agrees, at 1/|G| the size.
fn reduce_gauge(mut s: GroupoidSpan) -> GroupoidSpan {
    'outer: loop {
        if s.apex.rank <= 1 || s.apex.carrier == 0 {
            return s;
        }
        let n = s.ctx.order();
        let e = s.ctx.group.identity;
        for f in 0..s.apex.rank {
            if s.left.factor_src.contains(&f) || s.right.factor_src.contains(&f) {
                continue;
            }
            let free = (0..s.apex.carrier)
                .all(|x| (0..n).all(|g| g == e || s.apex.act(f, g, x) != x));
            if free {
                s = quotient_factor(s, f);
                continue 'outer;
            }
        }
        return s;
    }
}

fn quotient_factor(s: GroupoidSpan, f: usize) -> GroupoidSpan {
    let n = s.ctx.order();
    let a = &s.apex;
    // Representative = minimum of the f-orbit.
    let mut rep: Vec<u32> = Vec::with_capacity(a.carrier);
    for x in 0..a.carrier {
        rep.push((0..n).map(|g| a.act(f, g, x) as u32).min().unwrap());
    }
    let mut new_index = vec![u32::MAX; a.carrier];
    let mut reps: Vec<u32> = Vec::new();
    for x in 0..a.carrier {
        if rep[x] as usize == x {
            new_index[x] = reps.len() as u32;
            reps.push(x as u32);
        }
    }
    let carrier = reps.len();
    let rank = a.rank - 1;
    let mut act = vec![0u32; rank * n * carrier];
    let mut nf = 0;
    for f2 in 0..a.rank {
        if f2 == f {
            continue;
        }
        for g in 0..n {
            for (i, &r) in reps.iter().enumerate() {
                let img = a.act(f2, g, r as usize);
                act[(nf * n + g) * carrier + i] = new_index[rep[img] as usize];
            }
        }
        nf += 1;
    }
    let remap = |src: &[usize]| -> Vec<usize> {
        src.iter().map(|&x| if x > f { x - 1 } else { x }).collect()
    };
    let pick = |cm: &[u32]| -> Vec<u32> { reps.iter().map(|&r| cm[r as usize]).collect() };
    let left = SpanLeg {
        arity: s.left.arity,
        factor_src: remap(&s.left.factor_src),
        carrier_map: pick(&s.left.carrier_map),
    };
    let right = SpanLeg {
        arity: s.right.arity,
        factor_src: remap(&s.right.factor_src),
        carrier_map: pick(&s.right.carrier_map),
    };
    let apex = ActionGroupoid {
        ctx: s.ctx.clone(),
        rank,
        carrier,
        act,
        label: format!("{}/gauge", a.label),
    };
    GroupoidSpan { ctx: s.ctx.clone(), apex, left, right }
}

/// Disjoint union of spans: carrier and gauge products, first factor
/// slowest-varying, matching the Kronecker convention.
pub fn tensor_spans(s1: &GroupoidSpan, s2: &GroupoidSpan, cap: u64) -> Result<GroupoidSpan> {
    let ctx = s1.ctx.clone();
    let n = ctx.order();
    let (c1, c2) = (s1.apex.carrier, s2.apex.carrier);
    guard(c1 as u128 * c2 as u128, cap, "disjoint-union apex carrier")?;
    let carrier = c1 * c2;
    let rank = s1.apex.rank + s2.apex.rank;
    guard(carrier as u128 * rank as u128 * n as u128, cap.saturating_mul(8), "apex action table")?;

    let mut act = vec![0u32; rank * n * carrier];
    for x in 0..c1 {
        for y in 0..c2 {
            let t = x * c2 + y;
            for f in 0..s1.apex.rank {
                for g in 0..n {
                    act[(f * n + g) * carrier + t] = (s1.apex.act(f, g, x) * c2 + y) as u32;
                }
            }
            for f2 in 0..s2.apex.rank {
                let f = s1.apex.rank + f2;
                for g in 0..n {
                    act[(f * n + g) * carrier + t] = (x * c2 + s2.apex.act(f2, g, y)) as u32;
                }
            }
        }
    }

    let make_leg = |l1: &SpanLeg, l2: &SpanLeg| -> Result<SpanLeg> {
        let foot2 = ctx.foot_len(l2.arity, cap)?;
        let mut carrier_map = Vec::with_capacity(carrier);
        for x in 0..c1 {
            for y in 0..c2 {
                carrier_map.push((l1.point(x) * foot2 + l2.point(y)) as u32);
            }
        }
        let mut factor_src = l1.factor_src.clone();
        factor_src.extend(l2.factor_src.iter().map(|&f| f + s1.apex.rank));
        Ok(SpanLeg { arity: l1.arity + l2.arity, factor_src, carrier_map })
    };

    let left = make_leg(&s1.left, &s2.left)?;
    let right = make_leg(&s1.right, &s2.right)?;
    let apex = ActionGroupoid {
        ctx: ctx.clone(),
        rank,
        carrier,
        act,
        label: format!("({}) x ({})", s1.apex.label, s2.apex.label),
    };
    Ok(GroupoidSpan { ctx, apex, left, right })
}

/// Push-pull with kernel over iso classes: pull along the left leg,
/// weight by groupoid cardinality, push along the right leg. The
/// kernel receives an apex orbit representative; untwisted theories
/// pass the constant 1.
pub fn degroupoidify_with_kernel(
    s: &GroupoidSpan,
    cap: u64,
    kernel: &dyn Fn(usize) -> Q,
) -> Result<LinearMap> {
    let ctx = &s.ctx;
    let rows = ctx.foot_classes(s.out_arity(), cap)?;
    let cols = ctx.foot_classes(s.in_arity(), cap)?;
    guard(rows as u128 * cols as u128, cap, "degroupoidified matrix")?;

    let iso = iso_class_space(&s.apex);
    let mut mat = Matrix::zeros(rows, cols);
    for (rep, aut) in iso.classes.iter().zip(&iso.aut_orders) {
        let in_class = ctx.foot_class_of(s.left.point(*rep), s.in_arity());
        let out_class = ctx.foot_class_of(s.right.point(*rep), s.out_arity());
        let weight = Q::new(
            ctx.foot_class_aut(out_class, s.out_arity()).into(),
            aut.clone().into(),
        ) * kernel(*rep);
        let v = mat.get(out_class, in_class) + weight;
        mat.set(out_class, in_class, v);
    }
    Ok(LinearMap::new(ctx.num_classes(), s.in_arity(), s.out_arity(), mat))
}

pub fn degroupoidify(s: &GroupoidSpan, cap: u64) -> Result<LinearMap> {
    degroupoidify_with_kernel(s, cap, &|_| Q::one())
}

/// The span of a whole cobordism term: generators through
/// `generator_span`, composition by weak pullback, disjoint union by
/// products — degroupoidified once at the end by `quantize`.
pub fn term_span(t: &CobTerm, ctx: Arc<GroupCtx>, cap: u64) -> Result<GroupoidSpan> {
    match t.view() {
        TermView::Gen(g) => Ok(generator_span(g, ctx)),
        TermView::Compose(f, g) => {
            let sf = term_span(f, ctx.clone(), cap)?;
            let sg = term_span(g, ctx, cap)?;
            compose_spans(&sf, &sg, cap)
        }
        TermView::Tensor(f, g) => {
            let sf = term_span(f, ctx.clone(), cap)?;
            let sg = term_span(g, ctx, cap)?;
            tensor_spans(&sf, &sg, cap)
        }
    }
}

/// Quantization through the span backend: build the field span of the
/// term, then degroupoidify.
pub fn quantize(t: &CobTerm, ctx: Arc<GroupCtx>, cap: u64) -> Result<LinearMap> {
    degroupoidify(&term_span(t, ctx, cap)?, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cob::GENERATORS;
    use crate::frobenius::{center_of_group_algebra, Evaluator};
    use crate::linalg::q_int;

    fn ctx(name: &str) -> Arc<GroupCtx> {
        GroupCtx::new(FiniteGroup::by_name(name).unwrap())
    }

    #[test]
    fn circle_groupoid_classes() {
        let z2 = circle_groupoid(ctx("Z2"));
        let iso = iso_class_space(&z2);
        assert_eq!(iso.classes.len(), 2);
        assert!(iso.aut_orders.iter().all(|a| *a == BigUint::from(2u32)));

        let s3 = circle_groupoid(ctx("S3"));
        let iso = iso_class_space(&s3);
        let auts: Vec<u64> = iso.aut_orders.iter().map(|a| u64::try_from(a).unwrap()).collect();
        assert_eq!(auts, vec![6, 3, 2]);

        let z3 = circle_groupoid(ctx("Z3"));
        let iso = iso_class_space(&z3);
        assert_eq!(iso.classes.len(), 3);
        assert!(iso.aut_orders.iter().all(|a| *a == BigUint::from(3u32)));
    }

    #[test]
    fn generator_spans_are_equivariant_actions() {
        for name in ["Z2", "S3"] {
            let c = ctx(name);
            for g in GENERATORS {
                let s = generator_span(g, c.clone());
                s.apex.check_action().unwrap();
                s.check_equivariance().unwrap();
            }
        }
    }

    #[test]
    fn unit_span_hits_identity_holonomy() {
        let c = ctx("S3");
        let s = generator_span(Gen::Unit, c.clone());
        assert_eq!(s.apex.carrier, 1);
        let m = degroupoidify(&s, DEFAULT_SPAN_CAP).unwrap();
        assert_eq!((m.mat.rows(), m.mat.cols()), (3, 1));
        assert_eq!(m.mat.get(0, 0), &q_int(1));
        assert_eq!(m.mat.get(1, 0), &q_int(0));
        assert_eq!(m.mat.get(2, 0), &q_int(0));
    }

    #[test]
    fn identity_span_degroupoidifies_to_identity() {
        for name in ["Z2", "S3", "Q8"] {
            let c = ctx(name);
            let s = generator_span(Gen::Id, c.clone());
            let m = degroupoidify(&s, DEFAULT_SPAN_CAP).unwrap();
            assert_eq!(m.mat, Matrix::identity(c.num_classes()), "{name}");
        }
    }

    #[test]
    fn mult_span_matches_class_algebra_for_z2() {
        let c = ctx("Z2");
        let m = degroupoidify(&generator_span(Gen::Mult, c.clone()), DEFAULT_SPAN_CAP).unwrap();
        assert_eq!((m.mat.rows(), m.mat.cols()), (2, 4));
        let a = center_of_group_algebra(&c.group);
        let e = Evaluator::new(&a).unwrap();
        assert_eq!(m.mat, e.evaluate(&CobTerm::mult()).mat);
    }

    #[test]
    fn composed_identity_spans_stay_identity() {
        let c = ctx("S3");
        let s = generator_span(Gen::Id, c.clone());
        let ss = compose_spans(&s, &s, DEFAULT_SPAN_CAP).unwrap();
        ss.apex.check_action().unwrap();
        ss.check_equivariance().unwrap();
        let m = degroupoidify(&ss, DEFAULT_SPAN_CAP).unwrap();
        assert_eq!(m.mat, Matrix::identity(3));
    }

    #[test]
    fn handle_apex_size_over_z2() {
        // mult o comult: triples (x, g, y) with one connecting element
        let c = ctx("Z2");
        let s1 = generator_span(Gen::Comult, c.clone());
        let s2 = generator_span(Gen::Mult, c.clone());
        let s = compose_spans(&s1, &s2, DEFAULT_SPAN_CAP).unwrap();
        // x in G^2 (4), h in G^2 (one mediator per circle, 4), y determined: 16
        assert_eq!(s.apex.carrier, 4 * 4);
        s.apex.check_action().unwrap();
        s.check_equivariance().unwrap();

        // cross-backend: handle operator of the class algebra
        let m = degroupoidify(&s, DEFAULT_SPAN_CAP).unwrap();
        let e = Evaluator::new(&center_of_group_algebra(&c.group)).unwrap();
        let handle = CobTerm::compose(CobTerm::comult(), CobTerm::mult()).unwrap();
        assert_eq!(m.mat, e.evaluate(&handle).mat);
    }

    #[test]
    fn quantize_examples() {
        let c = ctx("S3");
        let m = quantize(&CobTerm::id(), c.clone(), DEFAULT_SPAN_CAP).unwrap();
        assert_eq!(m.mat, Matrix::identity(3));

        // closed genus-1 term evaluates to the class count
        let torus = CobTerm::compose(
            CobTerm::compose(CobTerm::unit(), CobTerm::comult()).unwrap(),
            CobTerm::compose(CobTerm::mult(), CobTerm::counit()).unwrap(),
        )
        .unwrap();
        let m = quantize(&torus, c.clone(), DEFAULT_SPAN_CAP).unwrap();
        assert_eq!(m.scalar().unwrap(), &q_int(3));
    }

    #[test]
    fn quantize_generators_match_frobenius_backend() {
        for name in ["Z2", "Z3", "S3"] {
            let c = ctx(name);
            let e = Evaluator::new(&center_of_group_algebra(&c.group)).unwrap();
            for g in GENERATORS {
                let t = CobTerm::gen(g);
                let span_mat = quantize(&t, c.clone(), DEFAULT_SPAN_CAP).unwrap();
                let frob_mat = e.evaluate(&t);
                assert_eq!(span_mat.mat, frob_mat.mat, "{name} / {}", g.name());
            }
        }
    }

    #[test]
    fn tensor_span_additivity() {
        // state space of a disjoint union is the tensor product
        let c = ctx("S3");
        let s1 = generator_span(Gen::Id, c.clone());
        let s2 = generator_span(Gen::Mult, c.clone());
        let t = tensor_spans(&s1, &s2, DEFAULT_SPAN_CAP).unwrap();
        t.apex.check_action().unwrap();
        t.check_equivariance().unwrap();
        let m = degroupoidify(&t, DEFAULT_SPAN_CAP).unwrap();
        let m1 = degroupoidify(&s1, DEFAULT_SPAN_CAP).unwrap();
        let m2 = degroupoidify(&s2, DEFAULT_SPAN_CAP).unwrap();
        assert_eq!(m.mat, m1.mat.kron(&m2.mat));
        assert_eq!(
            c.foot_classes(3, DEFAULT_SPAN_CAP).unwrap(),
            c.foot_classes(1, DEFAULT_SPAN_CAP).unwrap() * c.foot_classes(2, DEFAULT_SPAN_CAP).unwrap()
        );
    }

    #[test]
    fn cap_guard_trips() {
        let c = ctx("S4");
        // arity-6 boundary needs 24^6 > 10^7 points
        assert!(matches!(
            c.foot_len(6, DEFAULT_SPAN_CAP),
            Err(Error::ResourceCap { .. })
        ));
    }
}
