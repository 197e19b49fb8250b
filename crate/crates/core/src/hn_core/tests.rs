use super::*;
use crate::field::{Echelon, PrimeField};
use crate::fixtures;
use crate::grmat::{int, rat, submodule_presentation};
use crate::invariants::{slope_at, Staircase};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Every nonzero subspace of `F_q^t`, found by spanning all tuples of
/// nonzero vectors of length at most `t`.
fn all_subspaces(f: PrimeField, t: usize) -> Vec<Vec<Vec<Elem>>> {
    let q = f.order() as usize;
    let vectors: Vec<Vec<Elem>> = (1..q.pow(t as u32))
        .map(|mut code| {
            (0..t)
                .map(|_| {
                    let d = (code % q) as Elem;
                    code /= q;
                    d
                })
                .collect()
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(Echelon, usize)> = vec![(Echelon::new(f, t), 0)];
    while let Some((e, start)) = stack.pop() {
        for (i, v) in vectors.iter().enumerate().skip(start) {
            let mut next = e.clone();
            if next.insert(v.clone()) && seen.insert(next.basis().to_vec()) {
                out.push(next.basis().to_vec());
                stack.push((next, i + 1));
            }
        }
    }
    out
}

/// Highest slope over all subspaces, with slopes from Betti numbers.
fn oracle_max_slope(m: &GradedMatrix) -> Rat {
    let alpha = m.generated_at().unwrap();
    all_subspaces(m.field(), m.num_rows())
        .into_iter()
        .map(|b| {
            let s: Vec<_> = b.into_iter().map(|v| (alpha, v)).collect();
            slope_at(&submodule_presentation(m, &s).unwrap(), &alpha).unwrap()
        })
        .max()
        .unwrap()
}

fn stair(gen: (i64, i64), rels: &[(i64, i64)]) -> Staircase {
    Staircase::new(Degree::ints(gen.0, gen.1), rels.iter().map(|&(x, y)| Degree::ints(x, y)))
}

#[test]
fn oracle_enumerates_all_subspaces() {
    let f = PrimeField::new(2).unwrap();
    assert_eq!(all_subspaces(f, 3).len(), 7 + 7 + 1);
}

#[test]
fn cross_top_factor_is_the_vertical_slice() {
    let alpha = Degree::ints(0, 1);
    let sub = submodule_at(&fixtures::cross(), &alpha);
    let rec = brute_force_max_slope(&sub).unwrap();
    assert_eq!(rec.basis, vec![vec![1, 0]]);
    assert_eq!(rec.inv_slope, int(2));
    assert_eq!(oracle_max_slope(&sub), rat(1, 2));
}

#[test]
fn stable_is_semistable() {
    let stable = fixtures::stable();
    let rec = brute_force_max_slope(&stable).unwrap();
    assert_eq!(rec.dim(), 2);
    assert_eq!(rec.slope(), rat(2, 9));
    let model = LocalModel::new(&stable, &Degree::zero()).unwrap();
    for line in SubspaceIter::with_dims(stable.field(), 2, 1..=1) {
        assert_eq!(model.integral(&line), int(5));
    }
    let hn = hn_filtration_at(&stable, &Degree::zero()).unwrap();
    assert_eq!(hn.factors.len(), 1);
    assert_eq!(hn.factors[0].slope, rat(2, 9));
    assert_eq!(hn.factors[0].thickness(), 2);
}

#[test]
fn thickness_one_and_errors() {
    let v = fixtures::vertical();
    let rec = brute_force_max_slope(&v).unwrap();
    assert_eq!((rec.basis.clone(), rec.slope()), (vec![vec![1]], rat(1, 3)));
    assert_eq!(brute_force_max_slope(&fixtures::cross()), Err(Error::NotUniquelyGenerated));
    let hn = hn_filtration_at(&v, &Degree::zero()).unwrap();
    assert_eq!(hn.factors, vec![HnFactor { staircases: vec![stair((0, 0), &[(1, 0), (0, 3)])], slope: rat(1, 3) }]);
    assert!(hn_filtration_at(&v, &Degree::ints(4, 4)).unwrap().is_empty());
}

#[test]
fn cross_filtration() {
    let alpha = Degree::ints(0, 1);
    let hn = hn_filtration_at(&fixtures::cross(), &alpha).unwrap();
    assert_eq!(
        hn.factors,
        vec![
            HnFactor { staircases: vec![stair((0, 1), &[(1, 1), (0, 3)])], slope: rat(1, 2) },
            HnFactor { staircases: vec![stair((0, 1), &[(3, 1), (0, 2)])], slope: rat(1, 3) },
        ]
    );
    assert_eq!(hn_blockwise(&fixtures::cross(), &alpha, true).unwrap(), hn);
    assert_eq!(merge_factors(&alpha, std::slice::from_ref(&hn)).unwrap(), hn);
    let other = HNFactorList::empty(Degree::zero());
    assert!(matches!(merge_factors(&alpha, &[hn, other]), Err(Error::MismatchedBase(..))));
}

#[test]
fn equal_slopes_become_one_factor() {
    // Two copies of the same staircase: every line has the slope of the
    // whole module.
    let v = fixtures::vertical();
    let double = v.direct_sum(&v);
    let hn = hn_filtration_at(&double, &Degree::zero()).unwrap();
    assert_eq!(hn.factors.len(), 1);
    assert_eq!(hn.factors[0].thickness(), 2);
    assert_eq!(hn.factors[0].slope, rat(1, 3));
}

fn random_generated(seed: u64, q: u32, thickness: usize) -> GradedMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = PrimeField::new(q).unwrap();
    fixtures::random_uniquely_generated(f, thickness, 4, 1, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn filter_does_not_change_the_result(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), t in 1usize..=4) {
        let m = random_generated(seed, q, t);
        let on = brute_force_max_slope_with(&m, true).unwrap();
        let off = brute_force_max_slope_with(&m, false).unwrap();
        prop_assert_eq!(on, off);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_matches_the_oracle(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), t in 1usize..=3) {
        let m = random_generated(seed, q, t);
        prop_assert_eq!(brute_force_max_slope(&m).unwrap().slope(), oracle_max_slope(&m));
    }

    #[test]
    fn filtration_invariants(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), t in 1usize..=4) {
        let m = random_generated(seed, q, t);
        let alpha = m.generated_at().unwrap();
        let hn = hn_filtration_at(&m, &alpha).unwrap();
        prop_assert!(hn.slopes_strictly_decrease());
        prop_assert_eq!(hn.dim_at(&alpha), t);
        let model = LocalModel::new(&m, &alpha).unwrap();
        let all = SubspaceIter::with_dims(m.field(), t, t..=t).next().unwrap();
        prop_assert_eq!(total_integral(&hn), Some(model.integral(&all)));
        for p in m.induced_grid().points() {
            prop_assert_eq!(hn.dim_at(&p), m.dim_at(&p));
        }
        // The top factor is semistable: nothing in it beats its slope.
        let top = &hn.factors[0];
        prop_assert_eq!(top.slope, brute_force_max_slope(&m).unwrap().slope());
    }

    #[test]
    fn blockwise_equals_whole(seed in any::<u64>()) {
        let a = random_generated(seed, 2, 2);
        let mut b = random_generated(seed.wrapping_add(1), 2, 2);
        // Move b's generators onto a's degree.
        let alpha = a.generated_at().unwrap();
        b = b.shift_join(&alpha);
        let sum = a.direct_sum(&b);
        prop_assert_eq!(hn_blockwise(&sum, &alpha, true).unwrap(), hn_filtration_at(&sum, &alpha).unwrap());
    }
}

#[test]
fn skipped_strata_hold_no_competitor() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let m = random_generated(seed, 2, 4);
        let alpha = m.generated_at().unwrap();
        let model = LocalModel::new(&m, &alpha).unwrap();
        let lines: Vec<(Vec<Elem>, Rat)> =
            SubspaceIter::with_dims(m.field(), 4, 1..=1).map(|b| (b[0].clone(), model.integral(&b))).collect();
        let best_line = lines.iter().map(|l| l.1).min().unwrap();
        for k in 2..=4usize {
            let bound = best_line * Rat::from_integer(k as i64);
            let big = lines.iter().filter(|l| l.1 <= bound).count();
            if big >= (1 << k) - 1 {
                continue;
            }
            checked += 1;
            for u in SubspaceIter::with_dims(m.field(), 4, k..=k) {
                let span = Echelon::spanned_by(m.field(), 4, u.clone());
                let small = lines.iter().any(|(v, inv)| span.contains(v) && *inv > bound);
                assert!(small, "seed {seed}: stratum {k} skipped without a witness");
                let inv = model.integral(&u) / Rat::from_integer(k as i64);
                assert!(inv > best_line);
            }
        }
        if checked >= 20 {
            break;
        }
    }
    assert!(checked >= 20, "only {checked} skipped strata found");
}
