mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{brute_force, c, conjugate, random_form, random_gl2, transpose_symmetric, MBAR};
use triqal::families::{self, Branch, FamilyParams, Sign};
use triqal::frobenius::{
    build_full, derive_m, equivalence_suite, lower_leg, index_swap_residual,
    raise_leg, BilinearForm, CoordinateIdentity, FrobeniusAlgebra,
};
use triqal::lawrence::{axiom_residual, coordinate_axiom_residual, symmetrize, AxiomId, ThreeAlgebra};
use triqal::lens::{build_lens, evaluate};
use triqal::pentagon::{
    cubic_residual, pachner14_residual, pentagon_coordinate_residual, pentagon_residual,
    projector_matrix, projector_residual,
};
use triqal::random;
use triqal::tensor::{
    apply_basis_perm, contract, max_abs_diff, permute_legs, BasisPermutation, DenseTensor, Leg,
    Scalar,
};

fn perm_for(n: usize, cycle: bool) -> BasisPermutation {
    if cycle && n >= 3 {
        BasisPermutation::three_cycle(n).unwrap()
    } else {
        BasisPermutation::identity(n)
    }
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Scalar::new(re, im))
}

fn nonzero() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |z| z.norm() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(48) })]

    #[test]
    fn contraction_order_does_not_matter(seed in any::<u64>(), n in 2usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random::tensor(&mut rng, n, vec![Leg::Lower, Leg::Upper]);
        let b = random::tensor(&mut rng, n, vec![Leg::Lower, Leg::Upper]);
        let m = random::mbar(&mut rng, n);
        let first = contract(&contract(&m, &a, &[(2, 0)]).unwrap(), &b, &[(2, 0)]).unwrap();
        let second = contract(&contract(&m, &b, &[(3, 0)]).unwrap(), &a, &[(2, 0)]).unwrap();
        let second = permute_legs(&second, &[0, 1, 3, 2]).unwrap();
        prop_assert!(max_abs_diff(&first, &second).unwrap() < 1e-12);
        // against a hand-written sum
        let manual = DenseTensor::from_fn(n, MBAR.to_vec(), |x| {
            let mut acc = c(0.0);
            for s in 0..n {
                for t in 0..n {
                    acc += m.get(&[x[0], x[1], s, t]) * a.get(&[s, x[2]]) * b.get(&[t, x[3]]);
                }
            }
            acc
        })
        .unwrap();
        prop_assert!(max_abs_diff(&first, &manual).unwrap() < 1e-12);
    }

    #[test]
    fn permutation_round_trip(seed in any::<u64>(), perm in Just([2usize, 0, 3, 1]).prop_shuffle()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let t = random::mbar(&mut rng, 2);
        let mut inv = [0; 4];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let back = permute_legs(&permute_legs(&t, &perm).unwrap(), &inv).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn basis_permutation_has_order_three(seed in any::<u64>(), leg in 0usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let t = random::mbar(&mut rng, 3);
        let p = BasisPermutation::three_cycle(3).unwrap();
        let mut cur = t.clone();
        for _ in 0..3 {
            cur = apply_basis_perm(&cur, &p, leg, 1).unwrap();
        }
        prop_assert_eq!(&cur, &t);
        let there = apply_basis_perm(&t, &p, leg, 1).unwrap();
        prop_assert_eq!(apply_basis_perm(&there, &p, leg, 2).unwrap(), t);
    }

    #[test]
    fn raise_then_lower_is_identity(seed in any::<u64>(), n in 2usize..4, leg in 0usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let h = random_form(&mut rng, &BasisPermutation::identity(n));
        let q = random::mbar(&mut rng, n);
        let back = match q.legs()[leg] {
            Leg::Lower => lower_leg(&raise_leg(&q, leg, &h).unwrap(), leg, &h).unwrap(),
            Leg::Upper => raise_leg(&lower_leg(&q, leg, &h).unwrap(), leg, &h).unwrap(),
        };
        let scale = h.h_inv().max_abs().max(1.0);
        prop_assert!(max_abs_diff(&back, &q).unwrap() < 1e-12 * scale);
    }

    #[test]
    fn derive_m_is_linear(seed in any::<u64>(), n in 2usize..4, k in scalar()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let q1 = random::mbar(&mut rng, n);
        let q2 = random::mbar(&mut rng, n);
        let m1 = random::matrix(&mut rng, n);
        let m2 = random::matrix(&mut rng, n);
        let form = |m: &Vec<Vec<Scalar>>| BilinearForm::new(m.clone());
        let (Ok(h1), Ok(h2)) = (form(&m1), form(&m2)) else { return Ok(()) };
        let mix: Vec<Vec<Scalar>> = (0..n).map(|j| (0..n).map(|l| m1[j][l] + k * m2[j][l]).collect()).collect();
        let Ok(hmix) = BilinearForm::new(mix) else { return Ok(()) };
        // linear in m̄
        let lhs = derive_m(&q1.add(&q2.scale(k)).unwrap(), &h1).unwrap();
        let rhs = derive_m(&q1, &h1).unwrap().add(&derive_m(&q2, &h1).unwrap().scale(k)).unwrap();
        prop_assert!(max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
        // linear in h
        let lhs = derive_m(&q1, &hmix).unwrap();
        let rhs = derive_m(&q1, &h1).unwrap().add(&derive_m(&q1, &h2).unwrap().scale(k)).unwrap();
        prop_assert!(max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
    }

    #[test]
    fn full_algebra_is_self_consistent(seed in any::<u64>(), n in 2usize..4, cycle in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = perm_for(n, cycle);
        let h = random_form(&mut rng, &p);
        let q = random::mbar(&mut rng, n);
        let base = ThreeAlgebra::new(p, q, None).unwrap();
        let fa = FrobeniusAlgebra::new(base, h.clone(), 1e-9).unwrap();
        let full = build_full(&fa).unwrap();
        let cons = full.consistency(&h).unwrap();
        let scale = h.h_inv().max_abs().powi(2).max(1.0);
        prop_assert!(cons.max() < 1e-12 * scale, "{:?}", cons);
    }

    #[test]
    fn index_swap_vanishes_on_symmetric_data(seed in any::<u64>(), n in 2usize..4, cycle in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = perm_for(n, cycle);
        let q = symmetrize(&random::mbar(&mut rng, n), &p, AxiomId::VII).unwrap();
        let h = random_form(&mut rng, &p);
        let step = index_swap_residual(&q, &h, &p).unwrap();
        prop_assert!(step.preconditions_hold(1e-12));
        prop_assert!(step.residual <= 1e-12, "{}", step.residual);
    }

    #[test]
    fn symmetrized_tensors_satisfy_coordinate_rules(seed in any::<u64>(), cycle in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = perm_for(3, cycle);
        let q = symmetrize(&random::mbar(&mut rng, 3), &p, AxiomId::VII).unwrap();
        let m = symmetrize(&random::m(&mut rng, 3), &p, AxiomId::VI).unwrap();
        let alg = ThreeAlgebra::new(p, q, Some(m)).unwrap();
        prop_assert!(coordinate_axiom_residual(&alg, AxiomId::VII).unwrap() < 1e-12);
        prop_assert!(coordinate_axiom_residual(&alg, AxiomId::VI).unwrap() < 1e-12);
        // the operator and coordinate forms of (vi) are the same identity
        prop_assert!(axiom_residual(&alg, AxiomId::VI).unwrap() < 1e-12);
    }

    #[test]
    fn pentagon_forms_agree_on_transpose_symmetric_tensors(seed in any::<u64>(), n in 2usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let q = transpose_symmetric(&random::mbar(&mut rng, n));
        let a = pentagon_residual(&q).unwrap();
        let b = pentagon_coordinate_residual(&q).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn raised_axioms_coincide_with_iv_on_symmetric_tensors(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let q = transpose_symmetric(&random::mbar(&mut rng, 2));
        let rep = equivalence_suite(&q, &BilinearForm::identity(2), &BasisPermutation::identity(2)).unwrap();
        for id in [CoordinateIdentity::RaisedI, CoordinateIdentity::RaisedII, CoordinateIdentity::RaisedIII] {
            prop_assert!(rep.coincidence(id) < 1e-12, "{}: {}", id.label(), rep.coincidence(id));
        }
    }

    #[test]
    fn families_solve_the_reduced_system(d in nonzero(), alpha in nonzero(), plus in any::<bool>(), first in any::<bool>()) {
        let params = FamilyParams {
            d,
            alpha,
            sign: if plus { Sign::Plus } else { Sign::Minus },
            branch: if first { Branch::First } else { Branch::Second },
        };
        let v = families::family(&params).unwrap();
        let scale = [v.a, v.b, v.d, v.f, v.y].iter().map(|z| z.norm()).fold(1.0, f64::max).powi(2);
        prop_assert!(families::system_residuals(&v).iter().all(|r| *r <= 1e-12 * scale));
        prop_assert!(families::normalization_residual(&v) <= 1e-12 * scale);
        prop_assert_eq!(families::extract(&families::embed(&v)).unwrap(), v);
    }

    #[test]
    fn solutions_satisfy_cubic_and_projector(seed in any::<u64>(), pick in 0usize..80) {
        let mut rng = StdRng::seed_from_u64(seed);
        let grid = families::test_grid();
        let base = families::embed(&families::family(&grid[pick % grid.len()]).unwrap());
        let (g, inv) = random_gl2(&mut rng);
        let q = conjugate(&base, &g, &inv);
        if pentagon_residual(&q).unwrap() <= 1e-9 && pachner14_residual(&q).unwrap() <= 1e-9 {
            prop_assert!(cubic_residual(&q).unwrap() <= 1e-6);
            prop_assert!(projector_residual(&projector_matrix(&q).unwrap()) <= 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(8) })]

    #[test]
    fn greedy_matches_summation(seed in any::<u64>(), pick in 0usize..16) {
        let pairs = common::coprime_pairs(5);
        let (p, qq) = pairs[pick % pairs.len()];
        let mut rng = StdRng::seed_from_u64(seed);
        let q = random::mbar(&mut rng, 2);
        let h = random_form(&mut rng, &BasisPermutation::identity(2));
        let net = build_lens(p, qq).unwrap();
        let greedy = evaluate(&net, &q, &h).unwrap();
        let full = brute_force(&net, &q, &h);
        prop_assert!((greedy - full).norm() <= 1e-12 * full.norm().max(1.0));
    }
}

#[test]
fn lens_values_on_the_family_grid() {
    let h = BilinearForm::identity(2);
    for params in families::test_grid() {
        let q = families::embed(&families::family(&params).unwrap());
        for (p, qq) in common::coprime_pairs(6) {
            let net = build_lens(p, qq).unwrap();
            let value = evaluate(&net, &q, &h).unwrap();
            let full = brute_force(&net, &q, &h);
            assert!((value - full).norm() < 1e-12 * full.norm().max(1.0), "L({p},{qq}) {params:?}: {value} vs {full}");
        }
    }
}

#[test]
fn counts_of_bonds_and_legs() {
    for (p, q) in common::coprime_pairs(9) {
        let net = build_lens(p, q).unwrap();
        assert_eq!(net.leg_count(), 2 * net.bonds.len());
        assert_eq!(net.tetra.len(), 2 * (p - 2));
        assert_eq!(net.open_legs(), 0);
    }
}
