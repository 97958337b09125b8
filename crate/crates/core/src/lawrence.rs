//! 3-algebras given by structural constants and the residuals of their seven
//! defining axioms.
//!
//! `qbar[i][j][s][t]` is the coefficient of `e_s ⊗ e_t` in `m̄(e_i ⊗ e_j)` and
//! `qm[i][j][k][t]` the coefficient of `e_t` in `m(e_i ⊗ e_j ⊗ e_k)`.

use std::fmt;
use std::str::FromStr;

use crate::compose::{self, t, Factor, Op, Operators};
use crate::error::{Error, Result};
use crate::tensor::{max_abs_diff, BasisPermutation, DenseTensor, Leg, Scalar};

pub(crate) const MBAR_LEGS: [Leg; 4] = [Leg::Lower, Leg::Lower, Leg::Upper, Leg::Upper];
pub(crate) const M_LEGS: [Leg; 4] = [Leg::Lower, Leg::Lower, Leg::Lower, Leg::Upper];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl AxiomId {
    pub const ALL: [AxiomId; 7] = [
        AxiomId::I,
        AxiomId::II,
        AxiomId::III,
        AxiomId::IV,
        AxiomId::V,
        AxiomId::VI,
        AxiomId::VII,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            AxiomId::I => "i",
            AxiomId::II => "ii",
            AxiomId::III => "iii",
            AxiomId::IV => "iv",
            AxiomId::V => "v",
            AxiomId::VI => "vi",
            AxiomId::VII => "vii",
        }
    }

    /// Whether the axiom mentions the ternary operation m.
    pub fn needs_m(self) -> bool {
        !matches!(self, AxiomId::IV | AxiomId::VII)
    }

    /// Number of tensor slots in the codomain of both sides.
    fn codomain(self) -> usize {
        match self {
            AxiomId::I | AxiomId::VI => 1,
            AxiomId::II | AxiomId::III | AxiomId::V | AxiomId::VII => 2,
            AxiomId::IV => 3,
        }
    }

    /// Both sides as operator words. `P^{-1}` is written `P^2`.
    fn words(self) -> (Vec<Factor>, Vec<Factor>) {
        use Op::{Id, Mbar, M, P};
        let s = Factor::Swap;
        match self {
            // m(m ⊗ 1 ⊗ 1) = m(1 ⊗ 1 ⊗ m)σ34(1 ⊗ m̄ ⊗ 1 ⊗ 1)σ34
            AxiomId::I => (
                vec![t(&[M]), t(&[M, Id, Id])],
                vec![
                    t(&[M]),
                    t(&[Id, Id, M]),
                    s(3, 4),
                    t(&[Id, Mbar, Id, Id]),
                    s(3, 4),
                ],
            ),
            // (1 ⊗ m)σ23(m̄ ⊗ 1 ⊗ 1) = m̄(1 ⊗ m)σ12(P^-1 ⊗ 1 ⊗ 1 ⊗ 1)(m̄ ⊗ 1 ⊗ 1)(P ⊗ P ⊗ 1 ⊗ 1)σ23
            AxiomId::II => (
                vec![t(&[Id, M]), s(2, 3), t(&[Mbar, Id, Id])],
                vec![
                    t(&[Mbar]),
                    t(&[Id, M]),
                    s(1, 2),
                    t(&[P(2), Id, Id, Id]),
                    t(&[Mbar, Id, Id]),
                    t(&[P(1), P(1), Id, Id]),
                    s(2, 3),
                ],
            ),
            // m̄(m ⊗ 1) = (1 ⊗ m)σ12(P^2 ⊗ m̄ ⊗ 1)(1 ⊗ 1 ⊗ m̄)σ12σ23
            AxiomId::III => (
                vec![t(&[Mbar]), t(&[M, Id])],
                vec![
                    t(&[Id, M]),
                    s(1, 2),
                    t(&[P(2), Mbar, Id]),
                    t(&[Id, Id, Mbar]),
                    s(1, 2),
                    s(2, 3),
                ],
            ),
            // (1 ⊗ m̄)σ12(1 ⊗ m̄) = (m̄ ⊗ 1)(1 ⊗ m̄)(P ⊗ P ⊗ 1)(m̄ ⊗ 1)(1 ⊗ P^-1 ⊗ 1)
            AxiomId::IV => (
                vec![t(&[Id, Mbar]), s(1, 2), t(&[Id, Mbar])],
                vec![
                    t(&[Mbar, Id]),
                    t(&[Id, Mbar]),
                    t(&[P(1), P(1), Id]),
                    t(&[Mbar, Id]),
                    t(&[Id, P(2), Id]),
                ],
            ),
            // (1 ⊗ m)σ23(m̄ ⊗ P^2 ⊗ 1) = (m ⊗ 1)(1 ⊗ 1 ⊗ m̄)
            AxiomId::V => (
                vec![t(&[Id, M]), s(2, 3), t(&[Mbar, P(2), Id])],
                vec![t(&[M, Id]), t(&[Id, Id, Mbar])],
            ),
            // Pm = m(P ⊗ P ⊗ P)σ23σ12
            AxiomId::VI => (
                vec![t(&[P(1)]), t(&[M])],
                vec![t(&[M]), t(&[P(1), P(1), P(1)]), s(2, 3), s(1, 2)],
            ),
            // m̄(P^2 ⊗ P)σ12 = σ12 m̄(P^2 ⊗ P)
            AxiomId::VII => (
                vec![t(&[Mbar]), t(&[P(2), P(1)]), s(1, 2)],
                vec![s(1, 2), t(&[Mbar]), t(&[P(2), P(1)])],
            ),
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.roman() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::format("axioms", format!("unknown axiom `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeAlgebra {
    p: BasisPermutation,
    qbar: DenseTensor,
    qm: Option<DenseTensor>,
}

impl ThreeAlgebra {
    pub fn new(p: BasisPermutation, qbar: DenseTensor, qm: Option<DenseTensor>) -> Result<Self> {
        if qbar.legs() != MBAR_LEGS {
            return Err(Error::Signature(format!(
                "m̄ needs (lower, lower, upper, upper), got {:?}",
                qbar.legs()
            )));
        }
        if qbar.n() != p.n() {
            return Err(Error::Dimension(format!(
                "P acts on dimension {}, m̄ has {}",
                p.n(),
                qbar.n()
            )));
        }
        if let Some(m) = &qm {
            if m.legs() != M_LEGS {
                return Err(Error::Signature(format!(
                    "m needs (lower, lower, lower, upper), got {:?}",
                    m.legs()
                )));
            }
            if m.n() != p.n() {
                return Err(Error::Dimension(format!(
                    "P acts on dimension {}, m has {}",
                    p.n(),
                    m.n()
                )));
            }
        }
        Ok(ThreeAlgebra { p, qbar, qm })
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn p(&self) -> &BasisPermutation {
        &self.p
    }

    pub fn qbar(&self) -> &DenseTensor {
        &self.qbar
    }

    pub fn qm(&self) -> Option<&DenseTensor> {
        self.qm.as_ref()
    }

    pub fn with_qm(mut self, qm: DenseTensor) -> Result<Self> {
        self.qm = Some(qm);
        ThreeAlgebra::new(self.p, self.qbar, self.qm)
    }

    fn operators(&self) -> Operators<'_> {
        Operators {
            p: &self.p,
            m: self.qm.as_ref(),
            mbar: &self.qbar,
        }
    }
}

/// Both sides of an axiom as maps between tensor powers of A.
pub fn axiom_sides(alg: &ThreeAlgebra, which: AxiomId) -> Result<(DenseTensor, DenseTensor)> {
    if which.needs_m() && alg.qm.is_none() {
        return Err(Error::MissingM(which));
    }
    let (lhs, rhs) = which.words();
    let ops = alg.operators();
    let l = compose::evaluate(&ops, which.codomain(), &lhs)?;
    let r = compose::evaluate(&ops, which.codomain(), &rhs)?;
    Ok((l, r))
}

/// Max-abs difference between the two sides of an axiom in operator form.
pub fn axiom_residual(alg: &ThreeAlgebra, which: AxiomId) -> Result<f64> {
    let (l, r) = axiom_sides(alg, which)?;
    max_abs_diff(&l, &r)
}

/// Residual of the coordinate form of (vi) or (vii) for a basis permutation P:
/// `Q_{ijk}^s = Q_{P(j)P(k)P(i)}^{P(s)}` and
/// `Q_{ij}^{st} = Q_{P^2(j)P(i)}^{P^2(t)P(s)}`.
pub fn coordinate_axiom_residual(alg: &ThreeAlgebra, which: AxiomId) -> Result<f64> {
    let target = match which {
        AxiomId::VI => alg.qm.as_ref().ok_or(Error::MissingM(which))?,
        AxiomId::VII => &alg.qbar,
        other => {
            return Err(Error::Unsupported(format!(
                "no coordinate form for axiom ({other})"
            )))
        }
    };
    let image = transform(target, &alg.p, which)?;
    max_abs_diff(target, &image)
}

/// One application of the index transformation behind (vi) or (vii).
fn transform(t: &DenseTensor, p: &BasisPermutation, rule: AxiomId) -> Result<DenseTensor> {
    let (legs, name) = match rule {
        AxiomId::VI => (M_LEGS, "m"),
        AxiomId::VII => (MBAR_LEGS, "m̄"),
        other => {
            return Err(Error::Unsupported(format!(
                "no symmetrization rule for axiom ({other})"
            )))
        }
    };
    if t.legs() != legs {
        return Err(Error::Signature(format!(
            "rule ({rule}) acts on {name}, got legs {:?}",
            t.legs()
        )));
    }
    if t.n() != p.n() {
        return Err(Error::Dimension(format!("P acts on {}, tensor has {}", p.n(), t.n())));
    }
    let pw = |i: usize, k: i32| p.pow(i, k);
    DenseTensor::from_fn(t.n(), legs.to_vec(), |x| match rule {
        AxiomId::VI => t.get(&[pw(x[1], 1), pw(x[2], 1), pw(x[0], 1), pw(x[3], 1)]),
        _ => t.get(&[pw(x[1], 2), pw(x[0], 1), pw(x[3], 2), pw(x[2], 1)]),
    })
}

/// Averages a tensor over the orbit of the (vi) or (vii) index transformation.
///
/// The (vii) transformation is an involution and the (vi) transformation has
/// order three, so the average is a fixed point and satisfies the coordinate
/// identity exactly (up to rounding).
pub fn symmetrize(t: &DenseTensor, p: &BasisPermutation, rule: AxiomId) -> Result<DenseTensor> {
    let order = match rule {
        AxiomId::VI => 3,
        _ => 2,
    };
    let mut acc = t.clone();
    let mut cur = t.clone();
    for _ in 1..order {
        cur = transform(&cur, p, rule)?;
        acc = acc.add(&cur)?;
    }
    Ok(acc.scale(Scalar::new(1.0 / order as f64, 0.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomResidual {
    pub axiom: AxiomId,
    /// `None` when the axiom needs m and the algebra has none.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub tolerance: f64,
    pub entries: Vec<AxiomResidual>,
}

impl ResidualReport {
    pub fn residual(&self, axiom: AxiomId) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.axiom == axiom)
            .and_then(|e| e.residual)
    }

    pub fn passes(&self, axiom: AxiomId) -> Option<bool> {
        self.residual(axiom).map(|r| r <= self.tolerance)
    }

    /// True when every computed residual is within tolerance.
    pub fn all_pass(&self) -> bool {
        self.entries
            .iter()
            .filter_map(|e| e.residual)
            .all(|r| r <= self.tolerance)
    }
}

/// Residuals of all seven axioms; the checks are independent and run on
/// separate threads.
pub fn residual_report(alg: &ThreeAlgebra, tolerance: f64) -> ResidualReport {
    let entries = std::thread::scope(|scope| {
        let handles: Vec<_> = AxiomId::ALL
            .into_iter()
            .map(|axiom| scope.spawn(move || AxiomResidual {
                axiom,
                residual: axiom_residual(alg, axiom).ok(),
            }))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("axiom check panicked"))
            .collect()
    });
    ResidualReport { tolerance, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn identity_mbar(n: usize) -> DenseTensor {
        DenseTensor::from_fn(n, MBAR_LEGS.to_vec(), |x| {
            if x[0] == x[2] && x[1] == x[3] {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            }
        })
        .unwrap()
    }

    // m(e_i e_j e_k) = delta_jk e_i, the ternary map of the identity m̄ with h = 1
    fn identity_m(n: usize) -> DenseTensor {
        DenseTensor::from_fn(n, M_LEGS.to_vec(), |x| {
            if x[0] == x[3] && x[1] == x[2] {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            }
        })
        .unwrap()
    }

    #[test]
    fn parse_axiom_ids() {
        assert_eq!("iv".parse::<AxiomId>().unwrap(), AxiomId::IV);
        assert_eq!("VII".parse::<AxiomId>().unwrap(), AxiomId::VII);
        assert!("viii".parse::<AxiomId>().is_err());
    }

    #[test]
    fn identity_mbar_axioms() {
        let alg = ThreeAlgebra::new(BasisPermutation::identity(2), identity_mbar(2), Some(identity_m(2))).unwrap();
        assert_eq!(axiom_residual(&alg, AxiomId::VII).unwrap(), 0.0);
        // (iv): LHS collapses to σ12, RHS to the identity
        assert_eq!(axiom_residual(&alg, AxiomId::IV).unwrap(), 1.0);
    }

    #[test]
    fn missing_m_is_an_error() {
        let alg = ThreeAlgebra::new(BasisPermutation::identity(2), identity_mbar(2), None).unwrap();
        for a in AxiomId::ALL {
            let r = axiom_residual(&alg, a);
            if a.needs_m() {
                assert_eq!(r, Err(Error::MissingM(a)));
            } else {
                assert!(r.is_ok());
            }
        }
        assert!(coordinate_axiom_residual(&alg, AxiomId::VI).is_err());
        let report = residual_report(&alg, 1e-9);
        assert_eq!(report.residual(AxiomId::I), None);
        assert_eq!(report.residual(AxiomId::VII), Some(0.0));
    }

    #[test]
    fn coordinate_vii_with_identity_p_is_transpose_symmetry() {
        let mut rng = StdRng::seed_from_u64(3);
        let q = random::mbar(&mut rng, 2);
        let p = BasisPermutation::identity(2);
        let sym = symmetrize(&q, &p, AxiomId::VII).unwrap();
        for x in [[0, 1, 1, 0], [1, 0, 0, 0], [0, 1, 0, 1]] {
            let swapped = sym.get(&[x[1], x[0], x[3], x[2]]);
            assert!((sym.get(&x) - swapped).norm() < 1e-15);
        }
        let alg = ThreeAlgebra::new(p, sym, None).unwrap();
        assert!(coordinate_axiom_residual(&alg, AxiomId::VII).unwrap() < 1e-15);
        assert!(axiom_residual(&alg, AxiomId::VII).unwrap() < 1e-15);
    }

    #[test]
    fn symmetrize_three_cycle() {
        let mut rng = StdRng::seed_from_u64(5);
        let p = BasisPermutation::three_cycle(3).unwrap();
        let q = random::mbar(&mut rng, 3);
        let sym = symmetrize(&q, &p, AxiomId::VII).unwrap();
        let again = symmetrize(&sym, &p, AxiomId::VII).unwrap();
        assert!(max_abs_diff(&sym, &again).unwrap() < 1e-12);
        let m = symmetrize(&random::m(&mut rng, 3), &p, AxiomId::VI).unwrap();
        let alg = ThreeAlgebra::new(p, sym, Some(m)).unwrap();
        assert!(coordinate_axiom_residual(&alg, AxiomId::VII).unwrap() < 1e-12);
        assert!(coordinate_axiom_residual(&alg, AxiomId::VI).unwrap() < 1e-12);
        // operator (vi) is the same identity as its coordinate form
        assert!(axiom_residual(&alg, AxiomId::VI).unwrap() < 1e-12);
    }

    #[test]
    fn cyclic_average_of_m_with_identity_p() {
        let mut rng = StdRng::seed_from_u64(8);
        let m = random::m(&mut rng, 2);
        let p = BasisPermutation::identity(2);
        let sym = symmetrize(&m, &p, AxiomId::VI).unwrap();
        let expected = (m.get(&[0, 0, 1, 1]) + m.get(&[0, 1, 0, 1]) + m.get(&[1, 0, 0, 1])) / 3.0;
        assert!((sym.get(&[0, 0, 1, 1]) - expected).norm() < 1e-15);
        assert!(symmetrize(&m, &p, AxiomId::VII).is_err());
        assert!(symmetrize(&m, &p, AxiomId::IV).is_err());
    }

    #[test]
    fn signature_is_validated() {
        let m = identity_m(2);
        assert!(ThreeAlgebra::new(BasisPermutation::identity(2), m.clone(), None).is_err());
        assert!(ThreeAlgebra::new(BasisPermutation::identity(3), identity_mbar(2), None).is_err());
        assert!(ThreeAlgebra::new(BasisPermutation::identity(2), identity_mbar(2), Some(identity_mbar(2))).is_err());
    }
}
