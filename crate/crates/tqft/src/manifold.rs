//! Closed-manifold invariants from the counting side:
//! Z(M) = |Hom(pi_1 M, G)| / |G|. This is the independent oracle the
//! Frobenius and span backends are checked against.


use num_bigint::BigInt;

use crate::cob::CobTerm;
use crate::error::Result;
use crate::frobenius::{center_of_group_algebra, Evaluator};
use crate::group::{hom_count, FiniteGroup, GroupPresentation};
use crate::linalg::Q;
use crate::span::{quantize, GroupCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifoldKind {
    /// Closed orientable surface of the given genus.
    Surface { genus: usize },
    /// Lens space L(p,q). q is recorded but does not enter the
    /// untwisted invariant: only pi_1 = Z/p is visible.
    Lens { p: u64, q: u64 },
    /// The 3-torus.
    Torus3,
    /// Any finitely presented fundamental group.
    Custom(GroupPresentation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub kind: ManifoldKind,
    pub name: String,
}

impl ManifoldSpec {
    pub fn surface(genus: usize) -> ManifoldSpec {
        ManifoldSpec { kind: ManifoldKind::Surface { genus }, name: format!("surface({genus})") }
    }

    pub fn lens(p: u64, q: u64) -> Result<ManifoldSpec> {
        if p < 1 {
            return Err(crate::error::Error::BadInput("lens space needs p >= 1".into()));
        }
        Ok(ManifoldSpec { kind: ManifoldKind::Lens { p, q }, name: format!("lens({p},{q})") })
    }

    pub fn torus3() -> ManifoldSpec {
        ManifoldSpec { kind: ManifoldKind::Torus3, name: "torus3".to_string() }
    }

    pub fn custom(p: GroupPresentation) -> ManifoldSpec {
        let name = format!("custom({})", p.name);
        ManifoldSpec { kind: ManifoldKind::Custom(p), name }
    }

    pub fn presentation(&self) -> GroupPresentation {
        match &self.kind {
            ManifoldKind::Surface { genus } => GroupPresentation::surface(*genus),
            ManifoldKind::Lens { p, .. } => GroupPresentation::lens(*p),
            ManifoldKind::Torus3 => GroupPresentation::torus3(),
            ManifoldKind::Custom(p) => p.clone(),
        }
    }
}

/// |Hom(pi_1 M, G)| / |G|, exact.
pub fn invariant(m: &ManifoldSpec, g: &FiniteGroup, cap: u64) -> Result<Q> {
    let count = hom_count(&m.presentation(), g, cap)?;
    Ok(Q::new(BigInt::from(count), BigInt::from(g.order)))
}

/// Invariant of a disjoint union: the product over the pieces.
pub fn invariant_product(specs: &[ManifoldSpec], g: &FiniteGroup, cap: u64) -> Result<Q> {
    let mut acc = Q::new(1.into(), 1.into());
    for m in specs {
        acc *= invariant(m, g, cap)?;
    }
    Ok(acc)
}

/// The closed genus-g surface as a cobordism term from nothing to
/// nothing: cap, g handles, cap.
pub fn closed_surface_term(genus: usize) -> CobTerm {
    // Folded one generator at a time: the span backend composes along
    // the term tree, and attaching generators to the closed prefix
    // keeps every intermediate field groupoid small.
    let mut t = CobTerm::unit();
    for _ in 0..genus {
        t = CobTerm::compose(t, CobTerm::comult()).unwrap();
        t = CobTerm::compose(t, CobTerm::mult()).unwrap();
    }
    CobTerm::compose(t, CobTerm::counit()).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub genus: usize,
    pub counting: Q,
    pub frobenius: Q,
    pub span: Q,
    pub all_equal: bool,
}

/// Compare the counting oracle against both quantization backends for
/// every genus up to max_genus.
pub fn oracle_report(
    g: &FiniteGroup,
    max_genus: usize,
    hom_cap: u64,
    span_cap: u64,
) -> Result<Vec<OracleRow>> {
    let evaluator = Evaluator::new(&center_of_group_algebra(g))?;
    let ctx = GroupCtx::new(g.clone());
    let mut rows = Vec::with_capacity(max_genus + 1);
    for genus in 0..=max_genus {
        let counting = invariant(&ManifoldSpec::surface(genus), g, hom_cap)?;
        let frobenius = evaluator.closed_invariant(genus);
        let span = quantize(&closed_surface_term(genus), ctx.clone(), span_cap)?
            .scalar()
            .expect("closed term quantizes to a scalar")
            .clone();
        let all_equal = counting == frobenius && counting == span;
        rows.push(OracleRow { genus, counting, frobenius, span, all_equal });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_HOM_CAP;
    use crate::linalg::{q, q_int};
    use crate::span::DEFAULT_SPAN_CAP;

    #[test]
    fn surface_invariants_over_s3() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(invariant(&ManifoldSpec::surface(0), &s3, DEFAULT_HOM_CAP).unwrap(), q(1, 6));
        assert_eq!(invariant(&ManifoldSpec::surface(2), &s3, DEFAULT_HOM_CAP).unwrap(), q_int(81));
    }

    #[test]
    fn lens_space_counts_elements_of_order_dividing_p() {
        let s3 = FiniteGroup::symmetric(3);
        let m = ManifoldSpec::lens(3, 1).unwrap();
        assert_eq!(invariant(&m, &s3, DEFAULT_HOM_CAP).unwrap(), q(1, 2));
        // q is recorded but invisible
        let m2 = ManifoldSpec::lens(3, 2).unwrap();
        assert_eq!(
            invariant(&m, &s3, DEFAULT_HOM_CAP).unwrap(),
            invariant(&m2, &s3, DEFAULT_HOM_CAP).unwrap()
        );
    }

    #[test]
    fn torus3_counts_commuting_triples() {
        let s3 = FiniteGroup::symmetric(3);
        let z = invariant(&ManifoldSpec::torus3(), &s3, DEFAULT_HOM_CAP).unwrap();
        // independent triple loop
        let mut triples = 0u64;
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    if s3.mul(a, b) == s3.mul(b, a)
                        && s3.mul(a, c) == s3.mul(c, a)
                        && s3.mul(b, c) == s3.mul(c, b)
                    {
                        triples += 1;
                    }
                }
            }
        }
        assert_eq!(z * q_int(6), q_int(triples as i64));
    }

    #[test]
    fn disjoint_union_multiplies() {
        let s3 = FiniteGroup::symmetric(3);
        let pieces = [ManifoldSpec::surface(1), ManifoldSpec::surface(2)];
        let prod = invariant_product(&pieces, &s3, DEFAULT_HOM_CAP).unwrap();
        assert_eq!(prod, q_int(3) * q_int(81));
    }

    #[test]
    fn oracle_rows_for_z2() {
        let z2 = FiniteGroup::cyclic(2);
        let rows = oracle_report(&z2, 2, DEFAULT_HOM_CAP, DEFAULT_SPAN_CAP).unwrap();
        let expect = [q(1, 2), q_int(2), q_int(8)];
        for (row, want) in rows.iter().zip(expect) {
            assert!(row.all_equal, "genus {}", row.genus);
            assert_eq!(row.counting, want);
        }
    }
}
