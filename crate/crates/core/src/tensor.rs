//! Dense complex tensors over a fixed basis dimension.
//!
//! Every leg of a [`DenseTensor`] runs over the same basis `0..n` and carries a
//! tag: [`Leg::Lower`] for an input (subscript) and [`Leg::Upper`] for an
//! output (superscript). Storage is row-major with leg 0 as the slowest index.
//!
//! Structural constants use 0-based indices: the subscript `1` of a printed
//! formula is index `0` here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Scalar = Complex64;

/// Largest supported basis dimension.
pub const MAX_DIM: usize = 8;
/// Largest supported number of legs.
pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Leg {
    Lower,
    Upper,
}

impl Leg {
    pub fn dual(self) -> Leg {
        match self {
            Leg::Lower => Leg::Upper,
            Leg::Upper => Leg::Lower,
        }
    }
}

/// Odometer over all multi-indices of `rank` digits in base `n`, ascending.
#[derive(Debug, Clone)]
pub struct MultiIndex {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl MultiIndex {
    fn new(n: usize, rank: usize) -> Self {
        MultiIndex {
            n,
            current: vec![0; rank],
            done: n == 0,
        }
    }

    fn advance(&mut self) {
        for digit in self.current.iter_mut().rev() {
            *digit += 1;
            if *digit < self.n {
                return;
            }
            *digit = 0;
        }
        self.done = true;
    }

    /// Calls `f` on every multi-index in ascending order.
    pub fn for_each(n: usize, rank: usize, mut f: impl FnMut(&[usize])) {
        let mut it = MultiIndex::new(n, rank);
        while !it.done {
            f(&it.current);
            it.advance();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    n: usize,
    legs: Vec<Leg>,
    data: Vec<Scalar>,
}

fn check_shape(n: usize, rank: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::TooLarge(format!(
            "basis dimension {n} outside 1..={MAX_DIM}"
        )));
    }
    if rank > MAX_RANK {
        return Err(Error::TooLarge(format!(
            "rank {rank} exceeds the limit of {MAX_RANK}"
        )));
    }
    Ok(())
}

fn strides(n: usize, rank: usize) -> Vec<usize> {
    let mut s = vec![1; rank];
    for k in (0..rank.saturating_sub(1)).rev() {
        s[k] = s[k + 1] * n;
    }
    s
}

impl DenseTensor {
    pub fn zeros(n: usize, legs: Vec<Leg>) -> Result<Self> {
        check_shape(n, legs.len())?;
        let len = n.pow(legs.len() as u32);
        Ok(DenseTensor {
            n,
            legs,
            data: vec![Scalar::new(0.0, 0.0); len],
        })
    }

    pub fn from_fn(n: usize, legs: Vec<Leg>, mut f: impl FnMut(&[usize]) -> Scalar) -> Result<Self> {
        let mut t = DenseTensor::zeros(n, legs)?;
        let mut pos = 0;
        let rank = t.rank();
        let data = &mut t.data;
        MultiIndex::for_each(n, rank, |idx| {
            data[pos] = f(idx);
            pos += 1;
        });
        Ok(t)
    }

    pub fn from_data(n: usize, legs: Vec<Leg>, data: Vec<Scalar>) -> Result<Self> {
        check_shape(n, legs.len())?;
        let expected = n.pow(legs.len() as u32);
        if data.len() != expected {
            return Err(Error::Dimension(format!(
                "expected {expected} entries, got {}",
                data.len()
            )));
        }
        Ok(DenseTensor { n, legs, data })
    }

    /// Rank-0 tensor holding a single value.
    pub fn scalar(n: usize, value: Scalar) -> Result<Self> {
        DenseTensor::from_data(n, Vec::new(), vec![value])
    }

    /// Rank-2 tensor from a square matrix, `m[row][col]`.
    pub fn from_matrix(legs: [Leg; 2], m: &[Vec<Scalar>]) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        DenseTensor::from_fn(n, legs.to_vec(), |idx| m[idx[0]][idx[1]])
    }

    /// The identity map on `slots` tensor factors: `slots` lower legs followed by
    /// `slots` upper legs, entries `prod_k delta(x_k, y_k)`.
    pub fn identity_map(n: usize, slots: usize) -> Result<Self> {
        let mut legs = vec![Leg::Lower; slots];
        legs.extend(std::iter::repeat_n(Leg::Upper, slots));
        DenseTensor::from_fn(n, legs, |idx| {
            let (x, y) = idx.split_at(slots);
            if x == y {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.legs.len()
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    /// Value of a rank-0 tensor.
    pub fn as_scalar(&self) -> Option<Scalar> {
        (self.rank() == 0).then(|| self.data[0])
    }

    pub fn scale(&self, factor: Scalar) -> DenseTensor {
        DenseTensor {
            n: self.n,
            legs: self.legs.clone(),
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Entrywise sum; both tensors must share dimension and signature.
    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.check_same_signature(other)?;
        Ok(DenseTensor {
            n: self.n,
            legs: self.legs.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.add(&other.scale(Scalar::new(-1.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    fn check_same_signature(&self, other: &DenseTensor) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "basis dimension {} vs {}",
                self.n, other.n
            )));
        }
        if self.legs != other.legs {
            return Err(Error::Signature(format!(
                "{:?} vs {:?}",
                self.legs, other.legs
            )));
        }
        Ok(())
    }
}

/// Sums over the paired legs of `a` and `b`.
///
/// The result carries the unpaired legs of `a` in order followed by the unpaired
/// legs of `b`. Each pair must join a lower leg with an upper leg. Paired indices
/// are summed in ascending multi-index order.
pub fn contract(a: &DenseTensor, b: &DenseTensor, pairs: &[(usize, usize)]) -> Result<DenseTensor> {
    if a.n != b.n {
        return Err(Error::Dimension(format!(
            "basis dimension {} vs {}",
            a.n, b.n
        )));
    }
    let n = a.n;
    let mut used_a = vec![false; a.rank()];
    let mut used_b = vec![false; b.rank()];
    for &(la, lb) in pairs {
        if la >= a.rank() {
            return Err(Error::InvalidLeg { leg: la, rank: a.rank() });
        }
        if lb >= b.rank() {
            return Err(Error::InvalidLeg { leg: lb, rank: b.rank() });
        }
        if used_a[la] {
            return Err(Error::DuplicateLeg(la));
        }
        if used_b[lb] {
            return Err(Error::DuplicateLeg(lb));
        }
        used_a[la] = true;
        used_b[lb] = true;
        if a.legs[la] == b.legs[lb] {
            return Err(Error::TagMismatch { a_leg: la, b_leg: lb });
        }
    }

    let sa = strides(n, a.rank());
    let sb = strides(n, b.rank());
    let free_a: Vec<usize> = (0..a.rank()).filter(|&k| !used_a[k]).collect();
    let free_b: Vec<usize> = (0..b.rank()).filter(|&k| !used_b[k]).collect();
    let mut legs: Vec<Leg> = free_a.iter().map(|&k| a.legs[k]).collect();
    legs.extend(free_b.iter().map(|&k| b.legs[k]));

    let mut summed = Vec::with_capacity(n.pow(pairs.len() as u32));
    MultiIndex::for_each(n, pairs.len(), |idx| {
        let (mut da, mut db) = (0, 0);
        for (&x, &(la, lb)) in idx.iter().zip(pairs) {
            da += x * sa[la];
            db += x * sb[lb];
        }
        summed.push((da, db));
    });

    let out_free_a = free_a.len();
    DenseTensor::from_fn(n, legs, |idx| {
        let (ia, ib) = idx.split_at(out_free_a);
        let oa: usize = ia.iter().zip(&free_a).map(|(&x, &k)| x * sa[k]).sum();
        let ob: usize = ib.iter().zip(&free_b).map(|(&x, &k)| x * sb[k]).sum();
        summed
            .iter()
            .map(|&(da, db)| a.data[oa + da] * b.data[ob + db])
            .sum()
    })
}

/// Sums over pairs of legs of a single tensor (partial trace).
pub fn trace(t: &DenseTensor, pairs: &[(usize, usize)]) -> Result<DenseTensor> {
    let n = t.n;
    let mut used = vec![false; t.rank()];
    for &(x, y) in pairs {
        for leg in [x, y] {
            if leg >= t.rank() {
                return Err(Error::InvalidLeg { leg, rank: t.rank() });
            }
            if used[leg] {
                return Err(Error::DuplicateLeg(leg));
            }
            used[leg] = true;
        }
        if t.legs[x] == t.legs[y] {
            return Err(Error::TagMismatch { a_leg: x, b_leg: y });
        }
    }
    let st = strides(n, t.rank());
    let free: Vec<usize> = (0..t.rank()).filter(|&k| !used[k]).collect();
    let legs = free.iter().map(|&k| t.legs[k]).collect();
    let mut summed = Vec::new();
    MultiIndex::for_each(n, pairs.len(), |idx| {
        summed.push(
            idx.iter()
                .zip(pairs)
                .map(|(&v, &(x, y))| v * (st[x] + st[y]))
                .sum::<usize>(),
        );
    });
    DenseTensor::from_fn(n, legs, |idx| {
        let o: usize = idx.iter().zip(&free).map(|(&v, &k)| v * st[k]).sum();
        summed.iter().map(|&d| t.data[o + d]).sum()
    })
}

/// Reorders legs: leg `k` of the result is leg `perm[k]` of `t`.
pub fn permute_legs(t: &DenseTensor, perm: &[usize]) -> Result<DenseTensor> {
    let rank = t.rank();
    if perm.len() != rank {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = vec![false; rank];
    for &p in perm {
        if p >= rank || seen[p] {
            return Err(Error::InvalidPermutation);
        }
        seen[p] = true;
    }
    let st = strides(t.n, rank);
    let legs = perm.iter().map(|&p| t.legs[p]).collect();
    DenseTensor::from_fn(t.n, legs, |idx| {
        let o: usize = idx.iter().zip(perm).map(|(&v, &p)| v * st[p]).sum();
        t.data[o]
    })
}

/// A permutation of basis vectors with `P^3 = id`, written `e_i -> e_{P(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisPermutation {
    map: Vec<usize>,
}

impl BasisPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::BasisPermutation(format!(
                "length {n} outside 1..={MAX_DIM}"
            )));
        }
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::BasisPermutation("not a bijection".into()));
            }
            seen[v] = true;
        }
        if (0..n).any(|i| map[map[map[i]]] != i) {
            return Err(Error::BasisPermutation("P^3 is not the identity".into()));
        }
        Ok(BasisPermutation { map })
    }

    pub fn identity(n: usize) -> Self {
        BasisPermutation {
            map: (0..n).collect(),
        }
    }

    /// `e_0 -> e_1 -> e_2 -> e_0`, fixing the remaining basis vectors.
    pub fn three_cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::BasisPermutation(format!(
                "a 3-cycle needs n >= 3, got {n}"
            )));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map[0] = 1;
        map[1] = 2;
        map[2] = 0;
        BasisPermutation::new(map)
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// `P^power(i)`; negative powers go through the inverse.
    pub fn pow(&self, i: usize, power: i32) -> usize {
        (0..power.rem_euclid(3)).fold(i, |acc, _| self.map[acc])
    }
}

/// Relabels the index on `leg` through `P^power`.
///
/// On a lower leg the entry at index `x` becomes the old entry at `P^power(x)`
/// (precomposition with `P^power`); on an upper leg the entry at `u` becomes the
/// old entry at `P^-power(u)` (postcomposition).
pub fn apply_basis_perm(
    t: &DenseTensor,
    p: &BasisPermutation,
    leg: usize,
    power: i32,
) -> Result<DenseTensor> {
    if leg >= t.rank() {
        return Err(Error::InvalidLeg { leg, rank: t.rank() });
    }
    if p.n() != t.n {
        return Err(Error::Dimension(format!(
            "P acts on dimension {}, tensor has {}",
            p.n(),
            t.n
        )));
    }
    let shift = match t.legs[leg] {
        Leg::Lower => power,
        Leg::Upper => -power,
    };
    let mut src = vec![0; t.rank()];
    DenseTensor::from_fn(t.n, t.legs.clone(), |idx| {
        src.copy_from_slice(idx);
        src[leg] = p.pow(idx[leg], shift);
        t.get(&src)
    })
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DenseTensor, b: &DenseTensor) -> Result<f64> {
    a.check_same_signature(b)?;
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}
