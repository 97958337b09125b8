#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use triqal::frobenius::{determinant, symmetrize_form, BilinearForm};
use triqal::lens::{ContractionNetwork, Mediator};
use triqal::tensor::{BasisPermutation, DenseTensor, Leg, Scalar};

pub const MBAR: [Leg; 4] = [Leg::Lower, Leg::Lower, Leg::Upper, Leg::Upper];

pub fn c(re: f64) -> Scalar {
    Scalar::new(re, 0.0)
}

pub fn identity_mbar(n: usize) -> DenseTensor {
    DenseTensor::from_fn(n, MBAR.to_vec(), |x| {
        c(if x[0] == x[2] && x[1] == x[3] { 1.0 } else { 0.0 })
    })
    .unwrap()
}

/// Averages `Q_{ij}^{st}` with `Q_{ji}^{ts}`.
pub fn transpose_symmetric(q: &DenseTensor) -> DenseTensor {
    DenseTensor::from_fn(q.n(), MBAR.to_vec(), |x| {
        (q.get(x) + q.get(&[x[1], x[0], x[3], x[2]])) * 0.5
    })
    .unwrap()
}

/// A random form satisfying the form condition for `p`, redrawn until
/// `|det| >= 1e-6`.
pub fn random_form(rng: &mut StdRng, p: &BasisPermutation) -> BilinearForm {
    loop {
        let m = symmetrize_form(&triqal::random::matrix(rng, p.n()), p);
        if determinant(&m).norm() >= 1e-6 {
            if let Ok(h) = BilinearForm::new(m) {
                return h;
            }
        }
    }
}

/// Random well-conditioned 2x2 matrix and its inverse.
pub fn random_gl2(rng: &mut StdRng) -> ([[Scalar; 2]; 2], [[Scalar; 2]; 2]) {
    loop {
        let mut g = [[c(0.0); 2]; 2];
        for row in g.iter_mut() {
            for v in row.iter_mut() {
                *v = Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if det.norm() > 0.3 {
            let inv = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
            return (g, inv);
        }
    }
}

/// `(G ⊗ G) m̄ (G^{-1} ⊗ G^{-1})` for a 2-dimensional m̄.
pub fn conjugate(q: &DenseTensor, g: &[[Scalar; 2]; 2], inv: &[[Scalar; 2]; 2]) -> DenseTensor {
    DenseTensor::from_fn(2, MBAR.to_vec(), |x| {
        let (i, j, s, t) = (x[0], x[1], x[2], x[3]);
        let mut acc = c(0.0);
        for a in 0..2 {
            for b in 0..2 {
                for cc in 0..2 {
                    for d in 0..2 {
                        acc += inv[a][i] * inv[b][j] * q.get(&[a, b, cc, d]) * g[s][cc] * g[t][d];
                    }
                }
            }
        }
        acc
    })
    .unwrap()
}

/// Full summation over every index assignment of the network, one variable
/// per glued face pair, two for a pair joined through `h` or its inverse.
pub fn brute_force(net: &ContractionNetwork, q: &DenseTensor, h: &BilinearForm) -> Scalar {
    let n = q.n();
    // variable attached to (tetra, slot)
    let mut var = vec![[usize::MAX; 4]; net.tetra.len()];
    let mut weights: Vec<(usize, usize, &DenseTensor)> = Vec::new();
    let mut count = 0;
    for bond in &net.bonds {
        let [(t0, s0), (t1, s1)] = bond.ends;
        match bond.mediator {
            Mediator::Direct => {
                var[t0][s0] = count;
                var[t1][s1] = count;
                count += 1;
            }
            Mediator::H | Mediator::HInv => {
                var[t0][s0] = count;
                var[t1][s1] = count + 1;
                let m = if bond.mediator == Mediator::H { h.h() } else { h.h_inv() };
                weights.push((count, count + 1, m));
                count += 2;
            }
        }
    }
    let mut idx = vec![0usize; count];
    let mut total = c(0.0);
    loop {
        let mut term = c(1.0);
        for slots in &var {
            term *= q.get(&[idx[slots[0]], idx[slots[1]], idx[slots[2]], idx[slots[3]]]);
        }
        for (a, b, m) in &weights {
            term *= m.get(&[idx[*a], idx[*b]]);
        }
        total += term;
        let mut k = 0;
        loop {
            if k == count {
                return total;
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn coprime_pairs(max_p: usize) -> Vec<(usize, usize)> {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (3..=max_p)
        .flat_map(|p| (1..p).filter(move |q| gcd(p, *q) == 1).map(move |q| (p, q)))
        .collect()
}
