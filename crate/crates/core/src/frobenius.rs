//! Bilinear forms, Frobenius compatibility between m̄ and m, and the full
//! 3-algebra built by raising and lowering legs.
//!
//! `h[j][k]` is `h_{jk}`; its inverse `h^{jk}` raises a lower leg:
//! `Q_i^{stu} = Q_{ij}^{st} h^{ju}`.

use crate::error::{Error, Result};
use crate::lawrence::{axiom_residual, AxiomId, ThreeAlgebra, MBAR_LEGS};
use crate::tensor::{
    contract, max_abs_diff, permute_legs, BasisPermutation, DenseTensor, Leg, MultiIndex, Scalar,
};

/// Entries with modulus below this fraction of the largest entry are treated as
/// zero pivots.
const PIVOT_EPS: f64 = 1e-12;
/// Required accuracy of `h · h_inv = 1`.
const INVERSE_TOL: f64 = 1e-9;

/// Gauss-Jordan elimination with partial pivoting. Returns the inverse and the
/// determinant, or `None` when a pivot vanishes.
fn invert(m: &[Vec<Scalar>]) -> Option<(Vec<Vec<Scalar>>, Scalar)> {
    let n = m.len();
    let scale = m
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Scalar::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    let mut det = Scalar::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[pivot][col].norm() <= PIVOT_EPS * scale {
            return None;
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let pv = a[col][col];
        det *= pv;
        for k in 0..n {
            a[col][k] /= pv;
            inv[col][k] /= pv;
        }
        for row in 0..n {
            if row != col {
                let factor = a[row][col];
                if factor != Scalar::new(0.0, 0.0) {
                    for k in 0..n {
                        let (ak, ik) = (a[col][k], inv[col][k]);
                        a[row][k] -= factor * ak;
                        inv[row][k] -= factor * ik;
                    }
                }
            }
        }
    }
    Some((inv, det))
}

/// Determinant of a square matrix (zero when elimination hits a vanishing pivot).
pub fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    invert(m).map_or(Scalar::new(0.0, 0.0), |(_, d)| d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    h: DenseTensor,
    h_inv: DenseTensor,
}

impl BilinearForm {
    pub fn new(matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("h must be a non-empty square matrix".into()));
        }
        let (inv, _) = invert(&matrix).ok_or(Error::SingularForm)?;
        let h = DenseTensor::from_matrix([Leg::Lower, Leg::Lower], &matrix)?;
        let h_inv = DenseTensor::from_matrix([Leg::Upper, Leg::Upper], &inv)?;
        let form = BilinearForm { h, h_inv };
        if form.inverse_error() > INVERSE_TOL {
            return Err(Error::SingularForm);
        }
        Ok(form)
    }

    pub fn identity(n: usize) -> Self {
        let m: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Scalar::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        BilinearForm::new(m).expect("identity is invertible")
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    /// `h_{jk}`: two lower legs.
    pub fn h(&self) -> &DenseTensor {
        &self.h
    }

    /// `h^{jk}`: two upper legs.
    pub fn h_inv(&self) -> &DenseTensor {
        &self.h_inv
    }

    pub fn entry(&self, j: usize, k: usize) -> Scalar {
        self.h.get(&[j, k])
    }

    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        let n = self.n();
        (0..n).map(|j| (0..n).map(|k| self.entry(j, k)).collect()).collect()
    }

    /// `max |sum_k h_{jk} h^{kl} - delta_jl|`
    pub fn inverse_error(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for l in 0..n {
                let s: Scalar = (0..n).map(|k| self.h.get(&[j, k]) * self.h_inv.get(&[k, l])).sum();
                let target = if j == l { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n();
        (0..n).all(|j| {
            (0..n).all(|k| self.entry(j, k) == Scalar::new(if j == k { 1.0 } else { 0.0 }, 0.0))
        })
    }
}

/// Averages a matrix with its image under `h_{jk} -> h_{P(k)P^2(j)}` (an
/// involution), giving a form that satisfies the form condition.
pub fn symmetrize_form(m: &[Vec<Scalar>], p: &BasisPermutation) -> Vec<Vec<Scalar>> {
    let n = m.len();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| (m[j][k] + m[p.pow(k, 1)][p.pow(j, 2)]) * 0.5)
                .collect()
        })
        .collect()
}

/// `max_{j,k} |h_{jk} - h_{P(k)P^2(j)}|`
pub fn form_condition_residual(h: &BilinearForm, p: &BasisPermutation) -> Result<f64> {
    if h.n() != p.n() {
        return Err(Error::Dimension(format!("h has dimension {}, P {}", h.n(), p.n())));
    }
    let n = h.n();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            worst = worst.max((h.entry(j, k) - h.entry(p.pow(k, 1), p.pow(j, 2))).norm());
        }
    }
    Ok(worst)
}

fn check_dims(qbar: &DenseTensor, h: &BilinearForm) -> Result<()> {
    if qbar.legs() != MBAR_LEGS {
        return Err(Error::Signature(format!("expected m̄ legs, got {:?}", qbar.legs())));
    }
    if qbar.n() != h.n() {
        return Err(Error::Dimension(format!("m̄ has dimension {}, h {}", qbar.n(), h.n())));
    }
    Ok(())
}

/// `Q_{ijk}^t = sum_s Q_{ij}^{ts} h_{sk}`, legs `(i, j, k | t)`.
pub fn derive_m(qbar: &DenseTensor, h: &BilinearForm) -> Result<DenseTensor> {
    check_dims(qbar, h)?;
    // [i, j, t, k]
    let joined = contract(qbar, h.h(), &[(3, 0)])?;
    permute_legs(&joined, &[0, 1, 3, 2])
}

/// `max |Q_{ijk}^s - sum_t Q_{ij}^{st} h_{tk}|`
pub fn compatibility_residual(alg: &ThreeAlgebra, h: &BilinearForm) -> Result<f64> {
    let qm = alg.qm().ok_or(Error::MissingM(AxiomId::I))?;
    let derived = derive_m(alg.qbar(), h)?;
    max_abs_diff(qm, &derived)
}

/// Raises lower leg `leg` with `h^{..}`; the new upper leg keeps its position.
pub fn raise_leg(t: &DenseTensor, leg: usize, h: &BilinearForm) -> Result<DenseTensor> {
    move_leg(t, leg, h.h_inv(), Leg::Lower)
}

/// Lowers upper leg `leg` with `h_{..}`; the new lower leg keeps its position.
pub fn lower_leg(t: &DenseTensor, leg: usize, h: &BilinearForm) -> Result<DenseTensor> {
    move_leg(t, leg, h.h(), Leg::Upper)
}

fn move_leg(t: &DenseTensor, leg: usize, metric: &DenseTensor, expect: Leg) -> Result<DenseTensor> {
    if leg >= t.rank() {
        return Err(Error::InvalidLeg { leg, rank: t.rank() });
    }
    if t.legs()[leg] != expect {
        return Err(Error::Signature(format!("leg {leg} is not {expect:?}")));
    }
    let joined = contract(t, metric, &[(leg, 0)])?;
    let last = joined.rank() - 1;
    let perm: Vec<usize> = (0..joined.rank())
        .map(|k| match k.cmp(&leg) {
            std::cmp::Ordering::Less => k,
            std::cmp::Ordering::Equal => last,
            std::cmp::Ordering::Greater => k - 1,
        })
        .collect();
    permute_legs(&joined, &perm)
}

/// A 3-algebra with P a basis permutation, together with a non-degenerate form
/// satisfying `h_{jk} = h_{P(k)P^2(j)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusAlgebra {
    base: ThreeAlgebra,
    h: BilinearForm,
    form_residual: f64,
    star_residuals: (f64, f64),
}

impl FrobeniusAlgebra {
    /// Fails when the form condition is violated beyond `tolerance`. The
    /// residuals of (i*) and (ii*) are recorded but not required to vanish.
    pub fn new(base: ThreeAlgebra, h: BilinearForm, tolerance: f64) -> Result<Self> {
        check_dims(base.qbar(), &h)?;
        let form_residual = form_condition_residual(&h, base.p())?;
        if form_residual > tolerance {
            return Err(Error::FormCondition(form_residual));
        }
        // (i*) reads exactly as axiom (iv), (ii*) as axiom (vii)
        let star_residuals = (
            axiom_residual(&base, AxiomId::IV)?,
            axiom_residual(&base, AxiomId::VII)?,
        );
        Ok(FrobeniusAlgebra {
            base,
            h,
            form_residual,
            star_residuals,
        })
    }

    pub fn base(&self) -> &ThreeAlgebra {
        &self.base
    }

    pub fn h(&self) -> &BilinearForm {
        &self.h
    }

    pub fn form_residual(&self) -> f64 {
        self.form_residual
    }

    /// Residuals of (i*) and (ii*).
    pub fn star_residuals(&self) -> (f64, f64) {
        self.star_residuals
    }

    pub fn is_frobenius(&self, tolerance: f64) -> bool {
        self.star_residuals.0 <= tolerance && self.star_residuals.1 <= tolerance
    }
}

/// The five operations `m_{j,4-j}` of a full 3-algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct FullThreeAlgebra {
    /// `Q_{ij}^{st}`
    pub m22: DenseTensor,
    /// `Q_{ijk}^t = Q_{ij}^{ts} h_{sk}`
    pub m31: DenseTensor,
    /// `Q_i^{stu} = Q_{ij}^{st} h^{ju}`
    pub m13: DenseTensor,
    /// `Q^{ijkl} = Q_s^{ijk} h^{sl}`
    pub m04: DenseTensor,
    /// `Q_{ijkl} = Q_{ijk}^t h_{tl}`
    pub m40: DenseTensor,
}

pub fn build_full(fa: &FrobeniusAlgebra) -> Result<FullThreeAlgebra> {
    full_from_parts(fa.base.qbar(), &fa.h)
}

pub(crate) fn full_from_parts(qbar: &DenseTensor, h: &BilinearForm) -> Result<FullThreeAlgebra> {
    check_dims(qbar, h)?;
    let m22 = qbar.clone();
    let m31 = derive_m(qbar, h)?;
    let m13 = contract(qbar, h.h_inv(), &[(1, 0)])?;
    let m04 = contract(&m13, h.h_inv(), &[(0, 0)])?;
    let m40 = contract(&m31, h.h(), &[(3, 0)])?;
    Ok(FullThreeAlgebra {
        m22,
        m31,
        m13,
        m04,
        m40,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullConsistency {
    /// `m31` regenerated from `m22`.
    pub m31_from_m22: f64,
    /// `m13` with its last upper leg lowered, against `m22`.
    pub m13_to_m22: f64,
    /// `m04` with its last leg lowered, against `m13`.
    pub m04_to_m13: f64,
    /// `m40` with its last leg raised, against `m31`.
    pub m40_to_m31: f64,
    /// Largest raise-then-lower (or lower-then-raise) round trip over every leg
    /// of all five tensors.
    pub round_trip: f64,
}

impl FullConsistency {
    pub fn max(&self) -> f64 {
        [
            self.m31_from_m22,
            self.m13_to_m22,
            self.m04_to_m13,
            self.m40_to_m31,
            self.round_trip,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl FullThreeAlgebra {
    pub fn tensors(&self) -> [(&'static str, &DenseTensor); 5] {
        [
            ("m04", &self.m04),
            ("m13", &self.m13),
            ("m22", &self.m22),
            ("m31", &self.m31),
            ("m40", &self.m40),
        ]
    }

    pub fn consistency(&self, h: &BilinearForm) -> Result<FullConsistency> {
        let m31_from_m22 = max_abs_diff(&self.m31, &derive_m(&self.m22, h)?)?;
        // [i, s, t, k] -> [i, k, s, t]
        let lowered13 = permute_legs(&contract(&self.m13, h.h(), &[(3, 0)])?, &[0, 3, 1, 2])?;
        let m13_to_m22 = max_abs_diff(&lowered13, &self.m22)?;
        // [i, j, k, m] -> [m, i, j, k]
        let lowered04 = permute_legs(&contract(&self.m04, h.h(), &[(3, 0)])?, &[3, 0, 1, 2])?;
        let m04_to_m13 = max_abs_diff(&lowered04, &self.m13)?;
        let raised40 = contract(&self.m40, h.h_inv(), &[(3, 0)])?;
        let m40_to_m31 = max_abs_diff(&raised40, &self.m31)?;

        let mut round_trip: f64 = 0.0;
        for (_, t) in self.tensors() {
            for leg in 0..t.rank() {
                let back = match t.legs()[leg] {
                    Leg::Lower => lower_leg(&raise_leg(t, leg, h)?, leg, h)?,
                    Leg::Upper => raise_leg(&lower_leg(t, leg, h)?, leg, h)?,
                };
                round_trip = round_trip.max(max_abs_diff(&back, t)?);
            }
        }
        Ok(FullConsistency {
            m31_from_m22,
            m13_to_m22,
            m04_to_m13,
            m40_to_m31,
            round_trip,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexSwapCheck {
    /// `max |sum_{k'} h_{j'k'} Q_{kl}^{k't} - Q_{P^2(l)P(k)P^2(j')}^{P^2(t)}|`
    /// with m derived from m̄ and h.
    pub residual: f64,
    /// Coordinate (vii) residual of m̄ (precondition).
    pub vii_residual: f64,
    /// Form-condition residual of h (precondition).
    pub form_residual: f64,
}

impl IndexSwapCheck {
    pub fn preconditions_hold(&self, tolerance: f64) -> bool {
        self.vii_residual <= tolerance && self.form_residual <= tolerance
    }
}

/// The index swap used to show that compatibility implies axiom (v):
/// `h_{j'k'} Q_{kl}^{k't} = Q_{P^2(l)P(k)}^{P^2(t)s} h_{s P^2(j')}`.
pub fn index_swap_residual(
    qbar: &DenseTensor,
    h: &BilinearForm,
    p: &BasisPermutation,
) -> Result<IndexSwapCheck> {
    check_dims(qbar, h)?;
    let alg = ThreeAlgebra::new(p.clone(), qbar.clone(), None)?;
    let vii_residual = crate::lawrence::coordinate_axiom_residual(&alg, AxiomId::VII)?;
    let form_residual = form_condition_residual(h, p)?;
    let m = derive_m(qbar, h)?;
    let n = qbar.n();
    let mut residual: f64 = 0.0;
    MultiIndex::for_each(n, 4, |x| {
        let (jp, k, l, t) = (x[0], x[1], x[2], x[3]);
        let lhs: Scalar = (0..n).map(|kp| h.entry(jp, kp) * qbar.get(&[k, l, kp, t])).sum();
        let rhs = m.get(&[p.pow(l, 2), p.pow(k, 1), p.pow(jp, 2), p.pow(t, 2)]);
        residual = residual.max((lhs - rhs).norm());
    });
    Ok(IndexSwapCheck {
        residual,
        vii_residual,
        form_residual,
    })
}

/// The raised coordinate identities compared by [`equivalence_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordinateIdentity {
    /// Axiom (i), raised: `Q_{tl'}^{ru}Q_{jk}^{l'q} = Q_{j'l}^{rq}Q_{k'j}^{j'u}Q_{kt}^{k'l}`
    RaisedI,
    /// Axiom (ii), raised: `Q_{ij}^{tj'}Q_{kj'}^{sq} = Q_{k's'}^{ts}Q_{ik}^{i'k'}Q_{i'j}^{s'q}`
    RaisedII,
    /// Axiom (iii), raised: `Q_{s'l}^{qr}Q_{ij}^{s't} = Q_{t'l'}^{rt}Q_{ij'}^{qt'}Q_{jl}^{j'l'}`
    RaisedIII,
    /// Axiom (iv): `Q_{ik'}^{st}Q_{jk}^{rk'} = Q_{i'q'}^{rs}Q_{j'k}^{q't}Q_{ij}^{i'j'}`
    AxiomIV,
    /// Pentagon: `Q_{rl'}^{ts}Q_{ji}^{l'k} = Q_{j't'}^{sk}Q_{i'i}^{tt'}Q_{jr}^{j'i'}`
    Pentagon,
}

impl CoordinateIdentity {
    pub const ALL: [CoordinateIdentity; 5] = [
        CoordinateIdentity::RaisedI,
        CoordinateIdentity::RaisedII,
        CoordinateIdentity::RaisedIII,
        CoordinateIdentity::AxiomIV,
        CoordinateIdentity::Pentagon,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CoordinateIdentity::RaisedI => "raised i",
            CoordinateIdentity::RaisedII => "raised ii",
            CoordinateIdentity::RaisedIII => "raised iii",
            CoordinateIdentity::AxiomIV => "iv",
            CoordinateIdentity::Pentagon => "pentagon",
        }
    }

    /// LHS - RHS over the six free indices, P = id. Free-leg order:
    /// raised i: t r u j k q; raised ii: i j k t s q; raised iii: l q r i j t;
    /// iv: i j k s t r; pentagon: r t s j i k.
    pub fn residual_tensor(self, q: &DenseTensor) -> Result<DenseTensor> {
        use Leg::{Lower as L, Upper as U};
        let n = q.n();
        let g = |a: usize, b: usize, c: usize, d: usize| q.get(&[a, b, c, d]);
        let sum1 = |f: &dyn Fn(usize) -> Scalar| (0..n).map(f).sum::<Scalar>();
        let sum3 = |f: &dyn Fn(usize, usize, usize) -> Scalar| {
            let mut s = Scalar::new(0.0, 0.0);
            MultiIndex::for_each(n, 3, |d| s += f(d[0], d[1], d[2]));
            s
        };
        match self {
            CoordinateIdentity::RaisedI => DenseTensor::from_fn(n, vec![L, U, U, L, L, U], |x| {
                let (t, r, u, j, k, qq) = (x[0], x[1], x[2], x[3], x[4], x[5]);
                sum1(&|lp| g(t, lp, r, u) * g(j, k, lp, qq))
                    - sum3(&|jp, kp, l| g(jp, l, r, qq) * g(kp, j, jp, u) * g(k, t, kp, l))
            }),
            CoordinateIdentity::RaisedII => DenseTensor::from_fn(n, vec![L, L, L, U, U, U], |x| {
                let (i, j, k, t, s, qq) = (x[0], x[1], x[2], x[3], x[4], x[5]);
                sum1(&|jp| g(i, j, t, jp) * g(k, jp, s, qq))
                    - sum3(&|kp, sp, ip| g(kp, sp, t, s) * g(i, k, ip, kp) * g(ip, j, sp, qq))
            }),
            CoordinateIdentity::RaisedIII => DenseTensor::from_fn(n, vec![L, U, U, L, L, U], |x| {
                let (l, qq, r, i, j, t) = (x[0], x[1], x[2], x[3], x[4], x[5]);
                sum1(&|sp| g(sp, l, qq, r) * g(i, j, sp, t))
                    - sum3(&|tp, lp, jp| g(tp, lp, r, t) * g(i, jp, qq, tp) * g(j, l, jp, lp))
            }),
            CoordinateIdentity::AxiomIV => DenseTensor::from_fn(n, vec![L, L, L, U, U, U], |x| {
                let (i, j, k, s, t, r) = (x[0], x[1], x[2], x[3], x[4], x[5]);
                sum1(&|kp| g(i, kp, s, t) * g(j, k, r, kp))
                    - sum3(&|ip, qp, jp| g(ip, qp, r, s) * g(jp, k, qp, t) * g(i, j, ip, jp))
            }),
            CoordinateIdentity::Pentagon => crate::pentagon::pentagon_coordinate_tensor(q),
        }
    }
}

/// Leg renamings carrying the residual tensors of the raised forms of (i), (ii)
/// and (iii) onto that of (iv): `permute_legs(residual_X, perm) == residual_14`.
pub const RENAMING_TO_IV: [(CoordinateIdentity, [usize; 6]); 3] = [
    (CoordinateIdentity::RaisedI, [0, 4, 3, 1, 2, 5]),
    (CoordinateIdentity::RaisedII, [2, 0, 1, 4, 5, 3]),
    (CoordinateIdentity::RaisedIII, [0, 4, 3, 2, 1, 5]),
];

/// Renaming from the pentagon onto (iv) obtained by matching the index roles of the two
/// left-hand sides: `Q_{rl'}^{ts}Q_{ji}^{l'k}` against `Q_{ik'}^{st}Q_{jk}^{rk'}`
/// under `Q_{ij}^{st} = Q_{ji}^{ts}`.
pub const RENAMING_PENTAGON_TO_IV: [usize; 6] = [0, 4, 3, 1, 2, 5];

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// Max-abs residual of each identity.
    pub residuals: Vec<(CoordinateIdentity, f64)>,
    /// Entrywise distance between the residual tensor of an identity, renamed,
    /// and the residual tensor of (iv).
    pub coincidence: Vec<(CoordinateIdentity, f64)>,
    /// Form-condition residual of the supplied h.
    pub form_residual: f64,
}

impl EquivalenceReport {
    pub fn residual(&self, id: CoordinateIdentity) -> f64 {
        self.residuals
            .iter()
            .find(|(x, _)| *x == id)
            .map(|(_, r)| *r)
            .unwrap_or(f64::NAN)
    }

    pub fn coincidence(&self, id: CoordinateIdentity) -> f64 {
        self.coincidence
            .iter()
            .find(|(x, _)| *x == id)
            .map(|(_, r)| *r)
            .unwrap_or(f64::NAN)
    }
}

/// Compares the raised coordinate forms of axioms (i)-(iv) with each other and
/// with the pentagon equation. Only P = id is supported.
///
/// With P = id the raised identities involve m̄ alone; h enters only through the
/// form condition, which is reported.
pub fn equivalence_suite(
    qbar: &DenseTensor,
    h: &BilinearForm,
    p: &BasisPermutation,
) -> Result<EquivalenceReport> {
    if !p.is_identity() {
        return Err(Error::Unsupported(
            "the equivalence suite needs P = id".into(),
        ));
    }
    check_dims(qbar, h)?;
    let mut residuals = Vec::new();
    let mut tensors = Vec::new();
    for id in CoordinateIdentity::ALL {
        let t = id.residual_tensor(qbar)?;
        residuals.push((id, t.max_abs()));
        tensors.push((id, t));
    }
    let r14 = &tensors[3].1;
    let mut coincidence = Vec::new();
    for (id, perm) in RENAMING_TO_IV {
        let t = &tensors.iter().find(|(x, _)| *x == id).expect("present").1;
        coincidence.push((id, max_abs_diff(&permute_legs(t, &perm)?, r14)?));
    }
    let renamed15 = permute_legs(&tensors[4].1, &RENAMING_PENTAGON_TO_IV)?;
    coincidence.push((CoordinateIdentity::Pentagon, max_abs_diff(&renamed15, r14)?));
    Ok(EquivalenceReport {
        residuals,
        coincidence,
        form_residual: form_condition_residual(h, p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn identity_mbar(n: usize) -> DenseTensor {
        DenseTensor::from_fn(n, MBAR_LEGS.to_vec(), |x| {
            c(if x[0] == x[2] && x[1] == x[3] { 1.0 } else { 0.0 })
        })
        .unwrap()
    }

    fn delta(a: usize, b: usize) -> f64 {
        if a == b {
            1.0
        } else {
            0.0
        }
    }

    #[test]
    fn form_condition_examples() {
        let p = BasisPermutation::identity(2);
        assert_eq!(form_condition_residual(&BilinearForm::identity(2), &p).unwrap(), 0.0);
        let sym = BilinearForm::new(vec![vec![c(2.0), c(0.5)], vec![c(0.5), c(-1.0)]]).unwrap();
        assert_eq!(form_condition_residual(&sym, &p).unwrap(), 0.0);
        let asym = BilinearForm::new(vec![vec![c(1.0), c(1.0)], vec![c(0.0), c(1.0)]]).unwrap();
        assert_eq!(form_condition_residual(&asym, &p).unwrap(), 1.0);
    }

    #[test]
    fn singular_forms_are_rejected() {
        let ones = vec![vec![c(1.0), c(1.0)], vec![c(1.0), c(1.0)]];
        assert_eq!(BilinearForm::new(ones), Err(Error::SingularForm));
        assert_eq!(BilinearForm::new(vec![vec![c(0.0)]]), Err(Error::SingularForm));
        assert!(BilinearForm::new(vec![vec![c(1.0), c(0.0)]]).is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let m = vec![vec![c(0.0), c(2.0)], vec![c(3.0), c(1.0)]];
        assert!((determinant(&m) - c(-6.0)).norm() < 1e-15);
        let form = BilinearForm::new(m).unwrap();
        assert!(form.inverse_error() < 1e-15);
    }

    #[test]
    fn derive_m_identity_form() {
        let q = identity_mbar(2);
        let h = BilinearForm::identity(2);
        let m = derive_m(&q, &h).unwrap();
        crate::tensor::MultiIndex::for_each(2, 4, |x| {
            // m(e_i e_j e_k) = delta_jk e_i
            assert_eq!(m.get(x), c(delta(x[0], x[3]) * delta(x[1], x[2])));
        });
        let mut rng = StdRng::seed_from_u64(1);
        let r = random::mbar(&mut rng, 3);
        let m = derive_m(&r, &BilinearForm::identity(3)).unwrap();
        crate::tensor::MultiIndex::for_each(3, 4, |x| {
            assert_eq!(m.get(x), r.get(&[x[0], x[1], x[3], x[2]]));
        });
    }

    #[test]
    fn compatibility_examples() {
        let q = identity_mbar(2);
        let h = BilinearForm::identity(2);
        let m = derive_m(&q, &h).unwrap();
        let alg = ThreeAlgebra::new(BasisPermutation::identity(2), q.clone(), Some(m.clone())).unwrap();
        assert_eq!(compatibility_residual(&alg, &h).unwrap(), 0.0);
        let mut bumped = m;
        bumped.set(&[0, 1, 1, 0], bumped.get(&[0, 1, 1, 0]) + c(0.2));
        let alg = ThreeAlgebra::new(BasisPermutation::identity(2), q.clone(), Some(bumped)).unwrap();
        assert!((compatibility_residual(&alg, &h).unwrap() - 0.2).abs() < 1e-15);
        let bare = ThreeAlgebra::new(BasisPermutation::identity(2), q, None).unwrap();
        assert!(compatibility_residual(&bare, &h).is_err());
    }

    #[test]
    fn full_algebra_of_identity() {
        let q = identity_mbar(2);
        let h = BilinearForm::identity(2);
        let full = full_from_parts(&q, &h).unwrap();
        crate::tensor::MultiIndex::for_each(2, 4, |x| {
            let (a, b, cc, d) = (x[0], x[1], x[2], x[3]);
            // Q_i^{stu} = delta_is delta_tu
            assert_eq!(full.m13.get(x), c(delta(a, b) * delta(cc, d)));
            // Q_{ijkl} = delta_jk delta_il
            assert_eq!(full.m40.get(x), c(delta(b, cc) * delta(a, d)));
        });
        assert_eq!(full.m04.legs(), &[Leg::Upper; 4]);
        assert_eq!(full.m40.legs(), &[Leg::Lower; 4]);
        assert_eq!(full.consistency(&h).unwrap().max(), 0.0);
    }

    #[test]
    fn frobenius_algebra_requires_form_condition() {
        let q = identity_mbar(2);
        let base = ThreeAlgebra::new(BasisPermutation::identity(2), q, None).unwrap();
        let asym = BilinearForm::new(vec![vec![c(1.0), c(1.0)], vec![c(0.0), c(1.0)]]).unwrap();
        assert_eq!(
            FrobeniusAlgebra::new(base.clone(), asym, 1e-9),
            Err(Error::FormCondition(1.0))
        );
        let fa = FrobeniusAlgebra::new(base, BilinearForm::identity(2), 1e-9).unwrap();
        // identity m̄ satisfies (ii*) but not (i*)
        assert_eq!(fa.star_residuals(), (1.0, 0.0));
        assert!(!fa.is_frobenius(1e-9));
        assert!(build_full(&fa).is_ok());
    }

    #[test]
    fn index_swap_detects_broken_symmetry() {
        let mut rng = StdRng::seed_from_u64(21);
        let p = BasisPermutation::three_cycle(3).unwrap();
        let q = random::mbar(&mut rng, 3);
        let h = BilinearForm::new(symmetrize_form(&random::matrix(&mut rng, 3), &p)).unwrap();
        let check = index_swap_residual(&q, &h, &p).unwrap();
        assert!(!check.preconditions_hold(1e-9));
        assert!(check.residual > 1e-3);
        let sym = crate::lawrence::symmetrize(&q, &p, AxiomId::VII).unwrap();
        let check = index_swap_residual(&sym, &h, &p).unwrap();
        assert!(check.preconditions_hold(1e-12));
        assert!(check.residual < 1e-12);
    }

    #[test]
    fn equivalence_suite_rejects_nontrivial_p() {
        let q = identity_mbar(3);
        let p = BasisPermutation::three_cycle(3).unwrap();
        assert!(equivalence_suite(&q, &BilinearForm::identity(3), &p).is_err());
    }

    #[test]
    fn identity_mbar_satisfies_pentagon_but_not_axiom_iv() {
        let q = identity_mbar(2);
        let rep = equivalence_suite(&q, &BilinearForm::identity(2), &BasisPermutation::identity(2)).unwrap();
        assert_eq!(rep.residual(CoordinateIdentity::Pentagon), 0.0);
        assert_eq!(rep.residual(CoordinateIdentity::AxiomIV), 1.0);
    }
}
