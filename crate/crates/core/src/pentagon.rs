//! Identities of the P = id calculus: the pentagon equation in operator and
//! coordinate form, the 1-4 move, its cubic reduction and the projector matrix.
//!
//! All coordinate identities take `Q[i][j][s][t] = Q_{ij}^{st}` and return the
//! largest entry of LHS - RHS.

use crate::compose::{evaluate, t, Factor, Op, Operators};
use crate::error::{Error, Result};
use crate::lawrence::MBAR_LEGS;
use crate::tensor::{
    contract, max_abs_diff, permute_legs, trace, BasisPermutation, DenseTensor, Leg, MultiIndex,
    Scalar,
};

fn check(qbar: &DenseTensor) -> Result<()> {
    if qbar.legs() != MBAR_LEGS {
        return Err(Error::Signature(format!("expected m̄ legs, got {:?}", qbar.legs())));
    }
    Ok(())
}

/// `(m̄)_12 (m̄)_23` and `(m̄)_23 (m̄)_13 (m̄)_12` as maps on `A⊗A⊗A`, with
/// `(m̄)_13 = σ23 (m̄ ⊗ 1) σ23`.
pub fn pentagon_sides(qbar: &DenseTensor) -> Result<(DenseTensor, DenseTensor)> {
    check(qbar)?;
    let p = BasisPermutation::identity(qbar.n());
    let ops = Operators { p: &p, m: None, mbar: qbar };
    let lhs = [t(&[Op::Mbar, Op::Id]), t(&[Op::Id, Op::Mbar])];
    let rhs = [
        t(&[Op::Id, Op::Mbar]),
        Factor::Swap(2, 3),
        t(&[Op::Mbar, Op::Id]),
        Factor::Swap(2, 3),
        t(&[Op::Mbar, Op::Id]),
    ];
    Ok((evaluate(&ops, 3, &lhs)?, evaluate(&ops, 3, &rhs)?))
}

/// Operator-form pentagon residual.
pub fn pentagon_residual(qbar: &DenseTensor) -> Result<f64> {
    let (lhs, rhs) = pentagon_sides(qbar)?;
    max_abs_diff(&lhs, &rhs)
}

/// `Q_{rl'}^{ts}Q_{ji}^{l'k} - Q_{j't'}^{sk}Q_{i'i}^{tt'}Q_{jr}^{j'i'}` with free
/// legs ordered `(r, t, s, j, i, k)`.
pub fn pentagon_coordinate_tensor(qbar: &DenseTensor) -> Result<DenseTensor> {
    check(qbar)?;
    use Leg::{Lower as L, Upper as U};
    let n = qbar.n();
    let q = |a: usize, b: usize, c: usize, d: usize| qbar.get(&[a, b, c, d]);
    DenseTensor::from_fn(n, vec![L, U, U, L, L, U], |x| {
        let (r, tt, s, j, i, k) = (x[0], x[1], x[2], x[3], x[4], x[5]);
        let lhs: Scalar = (0..n).map(|lp| q(r, lp, tt, s) * q(j, i, lp, k)).sum();
        let mut rhs = Scalar::new(0.0, 0.0);
        // dummies j', t', i'
        MultiIndex::for_each(n, 3, |d| {
            let (jp, tp, ip) = (d[0], d[1], d[2]);
            rhs += q(jp, tp, s, k) * q(ip, i, tt, tp) * q(j, r, jp, ip);
        });
        lhs - rhs
    })
}

/// Coordinate-form pentagon residual. Agrees with [`pentagon_residual`] when
/// `Q_{ij}^{st} = Q_{ji}^{ts}`.
pub fn pentagon_coordinate_residual(qbar: &DenseTensor) -> Result<f64> {
    Ok(pentagon_coordinate_tensor(qbar)?.max_abs())
}

/// 1-4 move: `Q_{ij}^{kl} = Q_{ij'}^{k'l'}Q_{jr'}^{s'j'}Q_{k's'}^{kp'}Q_{l'p'}^{lr'}`.
pub fn pachner14_residual(qbar: &DenseTensor) -> Result<f64> {
    check(qbar)?;
    // [i, k', l', j, r', s']
    let ab = contract(qbar, qbar, &[(1, 3)])?;
    // with Q_{k's'}^{kp'}: [i, l', j, r', k, p']
    let abc = contract(&ab, qbar, &[(1, 0), (5, 1)])?;
    // with Q_{l'p'}^{lr'}: [i, j, k, l]
    let rhs = contract(&abc, qbar, &[(1, 0), (5, 1), (3, 3)])?;
    max_abs_diff(qbar, &rhs)
}

/// Cubic reduction: `Q_{ij}^{kl} = Q_{r'z'}^{l'p'}Q_{ji}^{z'k}Q_{l'p'}^{lr'}`.
pub fn cubic_residual(qbar: &DenseTensor) -> Result<f64> {
    check(qbar)?;
    // Q_{r'z'}^{l'p'} Q_{l'p'}^{lr'}: [z', l]
    let outer = contract(qbar, qbar, &[(2, 0), (3, 1), (0, 3)])?;
    // Q_{ji}^{z'k} with it: [j, i, k, l]
    let rhs = contract(qbar, &outer, &[(2, 0)])?;
    max_abs_diff(qbar, &permute_legs(&rhs, &[1, 0, 2, 3])?)
}

/// `B_{jk} = sum_i Q_{ij}^{ki}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorMatrix {
    b: Vec<Vec<Scalar>>,
}

impl ProjectorMatrix {
    pub fn new(b: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = b.len();
        if b.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("B must be square".into()));
        }
        Ok(ProjectorMatrix { b })
    }

    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `max |B - 1|`
    pub fn identity_distance(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, row) in self.b.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                worst = worst.max((v - if j == k { 1.0 } else { 0.0 }).norm());
            }
        }
        worst
    }
}

pub fn projector_matrix(qbar: &DenseTensor) -> Result<ProjectorMatrix> {
    check(qbar)?;
    // [j, k]
    let b = trace(qbar, &[(0, 3)])?;
    let n = qbar.n();
    ProjectorMatrix::new((0..n).map(|j| (0..n).map(|k| b.get(&[j, k])).collect()).collect())
}

/// `max |B^2 - B|`
pub fn projector_residual(b: &ProjectorMatrix) -> f64 {
    let n = b.n();
    let m = &b.b;
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let sq: Scalar = (0..n).map(|x| m[j][x] * m[x][k]).sum();
            worst = worst.max((sq - m[j][k]).norm());
        }
    }
    worst
}
