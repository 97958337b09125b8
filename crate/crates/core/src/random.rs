//! Random test instances. Entries are drawn uniformly from the complex unit
//! square `[0,1) + [0,1)i`.

use rand::Rng;

use crate::tensor::{DenseTensor, Leg, Scalar};

pub fn unit_square<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    Scalar::new(rng.gen::<f64>(), rng.gen::<f64>())
}

pub fn tensor<R: Rng + ?Sized>(rng: &mut R, n: usize, legs: Vec<Leg>) -> DenseTensor {
    DenseTensor::from_fn(n, legs, |_| unit_square(rng)).expect("shape within limits")
}

/// Random tensor with the signature of m̄ (two lower legs, two upper legs).
pub fn mbar<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseTensor {
    tensor(rng, n, vec![Leg::Lower, Leg::Lower, Leg::Upper, Leg::Upper])
}

/// Random tensor with the signature of m (three lower legs, one upper leg).
pub fn m<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseTensor {
    tensor(rng, n, vec![Leg::Lower, Leg::Lower, Leg::Lower, Leg::Upper])
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|_| (0..n).map(|_| unit_square(rng)).collect())
        .collect()
}
