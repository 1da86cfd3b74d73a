//! Commutative Frobenius algebras over exact rationals and the
//! evaluation of cobordism terms into linear maps.
//!
//! The comultiplication is never stored: it is derived from the
//! multiplication and the nondegenerate pairing, so a validated
//! algebra cannot carry an inconsistent coalgebra half.

use serde::{Deserialize, Serialize};

use crate::cob::{CobTerm, Gen, TermView};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, FiniteGroup};
use crate::linalg::{fmt_q, parse_q, LinearMap, Matrix, Q};
use num_traits::{One, Zero};

/// Structure constants c[i][j][k] with e_i * e_j = sum_k c[i][j][k] e_k,
/// a unit vector and a counit covector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    pub name: String,
    pub dim: usize,
    mult: Vec<Q>, // dim^3
    pub unit: Vec<Q>,
    pub counit: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// Witness index tuple where the axiom first fails.
    Fail(Vec<usize>),
    /// Not checkable (the pairing was degenerate).
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == CheckStatus::Pass)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.entries.iter().find(|e| e.status != CheckStatus::Pass)
    }
}

impl FrobeniusAlgebra {
    pub fn new(name: &str, dim: usize, mult: Vec<Q>, unit: Vec<Q>, counit: Vec<Q>) -> Result<Self> {
        if dim == 0 || mult.len() != dim * dim * dim || unit.len() != dim || counit.len() != dim {
            return Err(Error::BadInput(format!("{name}: inconsistent algebra shapes")));
        }
        Ok(FrobeniusAlgebra { name: name.to_string(), dim, mult, unit, counit })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground_field() -> FrobeniusAlgebra {
        FrobeniusAlgebra::new("k", 1, vec![Q::one()], vec![Q::one()], vec![Q::one()]).unwrap()
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.mult[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_c(&mut self, i: usize, j: usize, k: usize, v: Q) {
        self.mult[(i * self.dim + j) * self.dim + k] = v;
    }

    /// P[i][j] = counit(e_i * e_j).
    pub fn pairing(&self) -> Matrix {
        let d = self.dim;
        Matrix::from_fn(d, d, |i, j| (0..d).map(|k| self.c(i, j, k) * &self.counit[k]).sum())
    }

    /// Per-axiom pass/fail report with a witness tuple on failure.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim;
        let mut entries = Vec::new();

        // associativity: (e_i e_j) e_k = e_i (e_j e_k)
        let mut assoc = CheckStatus::Pass;
        'assoc: for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let lhs: Q = (0..d).map(|m| self.c(i, j, m) * self.c(m, k, l)).sum();
                        let rhs: Q = (0..d).map(|m| self.c(j, k, m) * self.c(i, m, l)).sum();
                        if lhs != rhs {
                            assoc = CheckStatus::Fail(vec![i, j, k, l]);
                            break 'assoc;
                        }
                    }
                }
            }
        }
        entries.push(AxiomCheck { axiom: "associativity", status: assoc });

        let mut comm = CheckStatus::Pass;
        'comm: for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.c(i, j, k) != self.c(j, i, k) {
                        comm = CheckStatus::Fail(vec![i, j, k]);
                        break 'comm;
                    }
                }
            }
        }
        entries.push(AxiomCheck { axiom: "commutativity", status: comm });

        // unit law: 1 * e_j = e_j (commutativity covers the other side)
        let mut unit = CheckStatus::Pass;
        'unit: for j in 0..d {
            for k in 0..d {
                let lhs: Q = (0..d).map(|i| &self.unit[i] * self.c(i, j, k)).sum();
                let expect = if j == k { Q::one() } else { Q::zero() };
                if lhs != expect {
                    unit = CheckStatus::Fail(vec![j, k]);
                    break 'unit;
                }
            }
        }
        entries.push(AxiomCheck { axiom: "unit", status: unit });

        let pairing = self.pairing();
        let pairing_inv = pairing.inverse();
        entries.push(AxiomCheck {
            axiom: "pairing nondegeneracy",
            status: if pairing_inv.is_some() {
                CheckStatus::Pass
            } else {
                // Witness: first basis index whose pairing column has
                // no pivot, i.e. a direction in the radical.
                CheckStatus::Fail(vec![first_dependent_column(&pairing)])
            },
        });

        match pairing_inv {
            None => {
                entries.push(AxiomCheck { axiom: "coassociativity", status: CheckStatus::Skipped });
                entries.push(AxiomCheck { axiom: "frobenius relation", status: CheckStatus::Skipped });
            }
            Some(pinv) => {
                let comult = derived_comult(self, &pinv);
                let mult = mult_matrix(self);
                let id = Matrix::identity(d);

                // (comult x id) . comult = (id x comult) . comult
                let lhs = comult.kron(&id).mul(&comult);
                let rhs = id.kron(&comult).mul(&comult);
                entries.push(AxiomCheck {
                    axiom: "coassociativity",
                    status: first_diff(&lhs, &rhs),
                });

                // comult . mult = (mult x id) . (id x comult)
                let lhs = comult.mul(&mult);
                let rhs = mult.kron(&id).mul(&id.kron(&comult));
                let rhs2 = id.kron(&mult).mul(&comult.kron(&id));
                let status = match (first_diff(&lhs, &rhs), first_diff(&lhs, &rhs2)) {
                    (CheckStatus::Pass, s) | (s, _) => s,
                };
                entries.push(AxiomCheck { axiom: "frobenius relation", status });
            }
        }

        ValidationReport { entries }
    }
}

fn first_diff(a: &Matrix, b: &Matrix) -> CheckStatus {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j) != b.get(i, j) {
                return CheckStatus::Fail(vec![i, j]);
            }
        }
    }
    CheckStatus::Pass
}

/// Multiplication as a dim x dim^2 matrix; column (i,j) with i slowest.
fn mult_matrix(a: &FrobeniusAlgebra) -> Matrix {
    let d = a.dim;
    Matrix::from_fn(d, d * d, |k, col| a.c(col / d, col % d, k).clone())
}

/// Comultiplication derived from mult and the pairing:
/// Delta(e_k) = sum_{a,b} Pinv[a][b] (e_k e_a) (x) e_b.
fn derived_comult(alg: &FrobeniusAlgebra, pinv: &Matrix) -> Matrix {
    let d = alg.dim;
    Matrix::from_fn(d * d, d, |row, k| {
        let (i, j) = (row / d, row % d);
        (0..d).map(|a| pinv.get(a, j) * alg.c(k, a, i)).sum()
    })
}

/// Basis = conjugacy-class sums of the group algebra; counit reads the
/// identity coefficient divided by |G|, the groupoid-cardinality
/// normalization that makes closed surfaces count homomorphisms.
/// Index of the first column lying in the span of the earlier ones.
fn first_dependent_column(m: &Matrix) -> usize {
    let rows = m.rows();
    let mut work = m.clone();
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        let Some(r) = (pivot_row..rows).find(|&r| !work.get(r, col).is_zero()) else {
            return col;
        };
        for j in 0..m.cols() {
            let tmp = work.get(pivot_row, j).clone();
            work.set(pivot_row, j, work.get(r, j).clone());
            work.set(r, j, tmp);
        }
        let inv = Q::one() / work.get(pivot_row, col).clone();
        for r2 in pivot_row + 1..rows {
            let factor = work.get(r2, col).clone() * &inv;
            for j in 0..m.cols() {
                let v = work.get(r2, j).clone() - &factor * work.get(pivot_row, j);
                work.set(r2, j, v);
            }
        }
        pivot_row += 1;
    }
    m.cols() // fully independent; callers only use this on singular input
}

pub fn center_of_group_algebra(g: &FiniteGroup) -> FrobeniusAlgebra {
    let classes = conjugacy_classes(g);
    let d = classes.count();
    let mut mult = vec![Q::zero(); d * d * d];
    // z_A z_B = sum over C of #{(a,b) in AxB : ab = rep_C} z_C
    let members: Vec<Vec<usize>> = (0..d)
        .map(|c| (0..g.order).filter(|&x| classes.class_of[x] == c).collect())
        .collect();
    for a_cls in 0..d {
        for b_cls in 0..d {
            for c_cls in 0..d {
                let rep = classes.representatives[c_cls];
                let count = members[a_cls]
                    .iter()
                    .flat_map(|&a| members[b_cls].iter().map(move |&b| (a, b)))
                    .filter(|&(a, b)| g.mul(a, b) == rep)
                    .count();
                mult[(a_cls * d + b_cls) * d + c_cls] = Q::from_integer(count.into());
            }
        }
    }
    let mut unit = vec![Q::zero(); d];
    unit[0] = Q::one(); // class 0 is the identity's class
    let mut counit = vec![Q::zero(); d];
    counit[0] = Q::new(1.into(), g.order.into());
    FrobeniusAlgebra {
        name: format!("Z({}[G]) for G = {}", "k", g.name),
        dim: d,
        mult,
        unit,
        counit,
    }
}

/// Evaluation functor for a fixed validated algebra: cobordism terms
/// to exact rational matrices, closed surfaces to scalars.
pub struct Evaluator {
    pub dim: usize,
    unit: Matrix,    // dim x 1
    counit: Matrix,  // 1 x dim
    mult: Matrix,    // dim x dim^2
    comult: Matrix,  // dim^2 x dim
    pairing: Matrix, // dim x dim
}

impl Evaluator {
    pub fn new(a: &FrobeniusAlgebra) -> Result<Evaluator> {
        let report = a.validate();
        if let Some(fail) = report.first_failure() {
            return Err(Error::Validation(format!(
                "{}: axiom {:?} does not hold",
                a.name, fail.axiom
            )));
        }
        let d = a.dim;
        let pairing = a.pairing();
        let pinv = pairing.inverse().expect("validated pairing is invertible");
        Ok(Evaluator {
            dim: d,
            unit: Matrix::from_fn(d, 1, |i, _| a.unit[i].clone()),
            counit: Matrix::from_fn(1, d, |_, j| a.counit[j].clone()),
            mult: mult_matrix(a),
            comult: derived_comult(a, &pinv),
            pairing,
        })
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    pub fn gen_matrix(&self, g: Gen) -> Matrix {
        let d = self.dim;
        match g {
            Gen::Unit => self.unit.clone(),
            Gen::Counit => self.counit.clone(),
            Gen::Mult => self.mult.clone(),
            Gen::Comult => self.comult.clone(),
            Gen::Id => Matrix::identity(d),
            Gen::Twist => {
                // e_i (x) e_j |-> e_j (x) e_i, leftmost factor slowest
                let mut m = Matrix::zeros(d * d, d * d);
                for i in 0..d {
                    for j in 0..d {
                        m.set(j * d + i, i * d + j, Q::one());
                    }
                }
                m
            }
        }
    }

    fn matrix(&self, t: &CobTerm) -> Matrix {
        match t.view() {
            TermView::Gen(g) => self.gen_matrix(g),
            TermView::Compose(f, g) => self.matrix(g).mul(&self.matrix(f)),
            TermView::Tensor(f, g) => self.matrix(f).kron(&self.matrix(g)),
        }
    }

    pub fn evaluate(&self, t: &CobTerm) -> LinearMap {
        LinearMap::new(self.dim, t.input(), t.output(), self.matrix(t))
    }

    /// counit(H^genus(unit)) with H = mult . comult, the closed
    /// genus-g surface invariant.
    pub fn closed_invariant(&self, genus: usize) -> Q {
        let handle = self.mult.mul(&self.comult);
        let mut v = self.unit.clone();
        for _ in 0..genus {
            v = handle.mul(&v);
        }
        self.counit.mul(&v).get(0, 0).clone()
    }
}

/// Convenience wrapper: validate-and-evaluate in one call.
pub fn evaluate(t: &CobTerm, a: &FrobeniusAlgebra) -> Result<LinearMap> {
    Ok(Evaluator::new(a)?.evaluate(t))
}

pub fn closed_invariant(genus: usize, a: &FrobeniusAlgebra) -> Result<Q> {
    Ok(Evaluator::new(a)?.closed_invariant(genus))
}

// ---------------------------------------------------------------------
// File format: sparse structure constants, rationals as "p/q" strings.

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    dim: usize,
    mult: Vec<(usize, usize, usize, String)>,
    unit: Vec<String>,
    counit: Vec<String>,
}

impl FrobeniusAlgebra {
    pub fn from_json(text: &str) -> Result<FrobeniusAlgebra> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::BadInput(format!("algebra file: {e}")))?;
        let d = file.dim;
        if d == 0 {
            return Err(Error::BadInput("algebra file: dim must be positive".into()));
        }
        if file.unit.len() != d || file.counit.len() != d {
            return Err(Error::BadInput(format!(
                "algebra file: unit/counit must have length {d}"
            )));
        }
        let mut mult = vec![Q::zero(); d * d * d];
        for (i, j, k, v) in &file.mult {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::BadInput(format!(
                    "algebra file: mult index ({i},{j},{k}) out of range for dim {d}"
                )));
            }
            mult[(i * d + j) * d + k] = parse_q(v)?;
        }
        let unit = file.unit.iter().map(|s| parse_q(s)).collect::<Result<_>>()?;
        let counit = file.counit.iter().map(|s| parse_q(s)).collect::<Result<_>>()?;
        FrobeniusAlgebra::new(&file.name, d, mult, unit, counit)
    }

    pub fn to_json(&self) -> String {
        let d = self.dim;
        let mut entries = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = self.c(i, j, k);
                    if !v.is_zero() {
                        entries.push((i, j, k, fmt_q(v)));
                    }
                }
            }
        }
        let file = AlgebraFile {
            name: self.name.clone(),
            dim: d,
            mult: entries,
            unit: self.unit.iter().map(fmt_q).collect(),
            counit: self.counit.iter().map(fmt_q).collect(),
        };
        serde_json::to_string_pretty(&file).expect("algebra serialization cannot fail")
    }
}
