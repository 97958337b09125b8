//! Two-dimensional solutions of the pentagon equation written in six variables.
//!
//! With basis indices 0 and 1:
//!
//! | variable | entries `Q_{ij}^{st}` |
//! |---|---|
//! | `a` | `Q_00^01 = Q_00^10`, and `-a` at `Q_01^11 = Q_10^11` |
//! | `b` | `Q_01^00 = Q_10^00`, and `-b` at `Q_11^10 = Q_11^01` |
//! | `c` | `Q_01^01 = Q_10^10` |
//! | `d` | `Q_01^10 = Q_10^01`, and `1 - d` at `Q_00^00 = Q_11^11` |
//! | `f` | `Q_00^11` |
//! | `y` | `Q_11^00` |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lawrence::MBAR_LEGS;
use crate::tensor::{DenseTensor, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SixVars {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub f: Scalar,
    pub y: Scalar,
}

impl SixVars {
    /// The identity m̄: `c = 1`, everything else zero.
    pub fn trivial() -> Self {
        let zero = Scalar::new(0.0, 0.0);
        SixVars {
            a: zero,
            b: zero,
            c: Scalar::new(1.0, 0.0),
            d: zero,
            f: zero,
            y: zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `f = αd`, `y = d/α`
    First,
    /// `f = -αd`, `y = -d/α`
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub d: Scalar,
    pub alpha: Scalar,
    pub sign: Sign,
    pub branch: Branch,
}

/// Largest allowed deviation from the forced entry pattern in [`extract`].
pub const PATTERN_TOL: f64 = 1e-9;

fn entries(v: &SixVars) -> [([usize; 4], Scalar); 16] {
    let one = Scalar::new(1.0, 0.0);
    [
        ([0, 0, 0, 1], v.a),
        ([0, 0, 1, 0], v.a),
        ([0, 1, 0, 0], v.b),
        ([1, 0, 0, 0], v.b),
        ([0, 1, 0, 1], v.c),
        ([1, 0, 1, 0], v.c),
        ([0, 1, 1, 0], v.d),
        ([1, 0, 0, 1], v.d),
        ([0, 0, 1, 1], v.f),
        ([1, 1, 0, 0], v.y),
        ([0, 1, 1, 1], -v.a),
        ([1, 0, 1, 1], -v.a),
        ([1, 1, 1, 0], -v.b),
        ([1, 1, 0, 1], -v.b),
        ([0, 0, 0, 0], one - v.d),
        ([1, 1, 1, 1], one - v.d),
    ]
}

pub fn embed(vars: &SixVars) -> DenseTensor {
    let mut q = DenseTensor::zeros(2, MBAR_LEGS.to_vec()).expect("n = 2");
    for (idx, v) in entries(vars) {
        q.set(&idx, v);
    }
    q
}

/// Reads the six variables off a 2-dimensional m̄, failing when the other
/// entries do not follow the pattern within [`PATTERN_TOL`].
pub fn extract(qbar: &DenseTensor) -> Result<SixVars> {
    if qbar.n() != 2 || qbar.legs() != MBAR_LEGS {
        return Err(Error::Dimension("the six-variable form needs a 2-dimensional m̄".into()));
    }
    let g = |i: [usize; 4]| qbar.get(&i);
    let vars = SixVars {
        a: g([0, 0, 0, 1]),
        b: g([0, 1, 0, 0]),
        c: g([0, 1, 0, 1]),
        d: g([0, 1, 1, 0]),
        f: g([0, 0, 1, 1]),
        y: g([1, 1, 0, 0]),
    };
    let deviation = entries(&vars)
        .iter()
        .map(|(idx, v)| (g(*idx) - v).norm())
        .fold(0.0, f64::max);
    if deviation > PATTERN_TOL {
        return Err(Error::Pattern(deviation));
    }
    Ok(vars)
}

pub fn family(params: &FamilyParams) -> Result<SixVars> {
    let zero = Scalar::new(0.0, 0.0);
    if params.d == zero {
        return Err(Error::ZeroParameter("d"));
    }
    if params.alpha == zero {
        return Err(Error::ZeroParameter("alpha"));
    }
    let FamilyParams { d, alpha, sign, branch } = *params;
    let s = sign.value();
    let (a, b, f, y) = match branch {
        Branch::First => {
            let root = (d / (2.0 * alpha) - d * d / alpha).sqrt();
            (s * alpha * root, s * root, alpha * d, d / alpha)
        }
        Branch::Second => {
            let root = (d * d / alpha - d / (2.0 * alpha)).sqrt();
            (-s * alpha * root, s * root, -alpha * d, -d / alpha)
        }
    };
    Ok(SixVars { a, b, c: d, d, f, y })
}

/// Absolute values of the twelve polynomials of the reduced pentagon system, in
/// order: `a(c-d)`, `b(c-d)`, `(c-1)(c-d)`, `d(c-d)`, `f(c-d)`, `y(c-d)`,
/// `ad-bf`, `ay-bc`, `d²-fy`, `2ab+2d²-d`, `2a²+2df-f`, `2b²+2dy-y`.
pub fn system_residuals(v: &SixVars) -> [f64; 12] {
    let SixVars { a, b, c, d, f, y } = *v;
    let one = Scalar::new(1.0, 0.0);
    let gap = c - d;
    [
        a * gap,
        b * gap,
        (c - one) * gap,
        d * gap,
        f * gap,
        y * gap,
        a * d - b * f,
        a * y - b * c,
        d * d - f * y,
        2.0 * a * b + 2.0 * d * d - d,
        2.0 * a * a + 2.0 * d * f - f,
        2.0 * b * b + 2.0 * d * y - y,
    ]
    .map(|e| e.norm())
}

/// `|4ab + 2cd + (1-d)² + fy - 1|`
pub fn normalization_residual(v: &SixVars) -> f64 {
    let one = Scalar::new(1.0, 0.0);
    (4.0 * v.a * v.b + 2.0 * v.c * v.d + (one - v.d) * (one - v.d) + v.f * v.y - one).norm()
}

/// The parameter grid used for verification: `d ∈ {±1/4, ±1/2, 1+i}`,
/// `α ∈ {1, 4, -2, i}`, both signs, both branches.
pub fn test_grid() -> Vec<FamilyParams> {
    let ds = [
        Scalar::new(0.25, 0.0),
        Scalar::new(-0.25, 0.0),
        Scalar::new(0.5, 0.0),
        Scalar::new(-0.5, 0.0),
        Scalar::new(1.0, 1.0),
    ];
    let alphas = [
        Scalar::new(1.0, 0.0),
        Scalar::new(4.0, 0.0),
        Scalar::new(-2.0, 0.0),
        Scalar::new(0.0, 1.0),
    ];
    let mut out = Vec::new();
    for d in ds {
        for alpha in alphas {
            for sign in [Sign::Plus, Sign::Minus] {
                for branch in [Branch::First, Branch::Second] {
                    out.push(FamilyParams { d, alpha, sign, branch });
                }
            }
        }
    }
    out
}
