use super::*;
use crate::field::PrimeField;
use crate::fixtures;
use crate::grmat::{int, rat, submodule_presentation};
use crate::hn_core::hn_filtration_at;
use crate::invariants::{slope_at, submodule_at};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn first_cell(m: &GradedMatrix) -> Cell {
    let alpha = m.generated_at().unwrap();
    let g = m.induced_grid();
    let (i, j) = g.floor_indices(&alpha).unwrap();
    g.cell(i, j)
}

fn poly(c0: Rat, cy: Rat, cx: Rat) -> SlopePoly {
    SlopePoly { c0, cx, cy }
}

fn line(m: &GradedMatrix, v: Vec<Elem>) -> GradedMatrix {
    submodule_presentation(m, &[(m.generated_at().unwrap(), v)]).unwrap()
}

#[test]
fn vertical_factor_polynomial() {
    let v = submodule_at(&fixtures::vertical(), &Degree::ints(0, 1));
    let p = slope_polynomial(&v).unwrap();
    assert_eq!(p, poly(int(2), int(2), int(1)));
    assert_eq!(p.full((int(0), int(0))), int(2));
    // [1/2, 1) × [1, 3) has area 1.
    assert_eq!(p.full((rat(1, 2), int(0))), int(1));
}

#[test]
fn stable_polynomials() {
    let s = fixtures::stable();
    assert_eq!(slope_polynomial(&s).unwrap(), poly(rat(9, 2), rat(5, 2), rat(5, 2)));
    assert_eq!(slope_polynomial(&line(&s, vec![1, 1])).unwrap(), poly(int(5), int(3), int(3)));
    assert_eq!(slope_polynomial(&line(&s, vec![1, 0])).unwrap(), poly(int(5), int(2), int(3)));
    assert_eq!(slope_polynomial(&line(&s, vec![0, 1])).unwrap(), poly(int(5), int(3), int(2)));
}

#[test]
fn thickness_one_is_one_face() {
    let v = fixtures::vertical();
    let cell = first_cell(&v);
    let faces = all_max_slope(&v, &cell).unwrap();
    assert_eq!(faces.len(), 1);
    assert_eq!(faces[0].region, ConvexRegion::from_cell(&cell).unwrap());
    let tree = exact_hnf_cell(&v, &cell).unwrap();
    assert_eq!(tree.depth(), 1);
    assert_eq!(tree.nodes().len(), 2);
}

#[test]
fn cross_cell() {
    let alpha = Degree::ints(0, 1);
    let m = submodule_at(&fixtures::cross(), &alpha);
    let cell = first_cell(&m);
    assert_eq!((cell.hi_x, cell.hi_y), (Some(int(1)), Some(int(2))));
    let faces = all_max_slope(&m, &cell).unwrap();
    assert_eq!(faces.len(), 2);
    assert_eq!(faces[0].basis, vec![vec![1, 0]]);
    assert_eq!(faces[1].basis, vec![vec![0, 1]]);
    let wall: Vec<Point> =
        faces[0].region.vertices().iter().copied().filter(|v| faces[1].region.vertices().contains(v)).collect();
    assert_eq!(wall.len(), 2);
    for (d1, d2) in wall {
        assert_eq!(d2 * int(2), int(1) + d1);
    }

    let tree = exact_hnf_cell(&m, &cell).unwrap();
    assert_eq!(tree.root().children.len(), 2);
    for &c in &tree.root().children {
        let kids = &tree.node(c).children;
        assert_eq!(kids.len(), 1);
        assert!(tree.node(kids[0]).children.is_empty());
        assert_eq!(tree.node(kids[0]).basis.len(), 2);
    }
    let beta = Degree::new(int(0), rat(19, 10));
    let hn = tree.factors_at(&beta).unwrap();
    let slopes: Vec<Rat> = hn.factors.iter().map(|f| f.slope).collect();
    assert_eq!(slopes, vec![rat(10, 3), rat(10, 11)]);
    assert_eq!(hn, hn_filtration_at(&fixtures::cross(), &beta).unwrap());
    assert!(tree.factors_at(&Degree::ints(1, 1)).is_err());
}

#[test]
fn stable_first_cell_splits_on_the_antidiagonal() {
    let s = fixtures::stable();
    let cell = first_cell(&s);
    let faces = all_max_slope(&s, &cell).unwrap();
    // Enumeration order: [1,0], [1,1], [0,1], whole space.
    assert_eq!(faces.iter().map(|f| f.id).collect::<Vec<_>>(), vec![1, 3]);
    let whole = &faces[1];
    assert_eq!(whole.region.area(), rat(1, 2));
    assert!(whole.region.contains((rat(1, 2), rat(1, 2))));
    assert!(!whole.region.contains((rat(3, 4), rat(1, 2))));
    let tree = exact_hnf_cell(&s, &cell).unwrap();
    assert_eq!(tree.depth(), 2);
    let semistable = tree.factors_at(&Degree::new(rat(1, 4), rat(1, 4))).unwrap();
    assert_eq!(semistable.factors.len(), 1);
    assert_eq!(semistable.factors[0].thickness(), 2);
    let split = tree.factors_at(&Degree::new(rat(3, 4), rat(3, 4))).unwrap();
    assert_eq!(split.factors.len(), 2);
    for beta in
        [Degree::new(rat(1, 4), rat(1, 4)), Degree::new(rat(3, 4), rat(3, 4)), Degree::new(rat(1, 2), rat(1, 2))]
    {
        assert_eq!(tree.factors_at(&beta).unwrap(), hn_filtration_at(&s, &beta).unwrap());
    }
}

fn random_generated(seed: u64, q: u32, thickness: usize) -> GradedMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = PrimeField::new(q).unwrap();
    fixtures::random_uniquely_generated(f, thickness, 4, 2, &mut rng)
}

fn random_point(cell: &Cell, rng: &mut impl Rng) -> Degree {
    let pick = |lo: Rat, hi: Rat, rng: &mut dyn rand::RngCore| lo + (hi - lo) * rat(rng.gen_range(0..6), 6);
    Degree::new(pick(cell.lo.x, cell.hi_x.unwrap(), rng), pick(cell.lo.y, cell.hi_y.unwrap(), rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tree_paths_match_brute_force(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), t in 1usize..=3) {
        let m = random_generated(seed, q, t);
        let cell = first_cell(&m);
        let tree = exact_hnf_cell(&m, &cell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..5 {
            let beta = random_point(&cell, &mut rng);
            prop_assert_eq!(tree.factors_at(&beta).unwrap(), hn_filtration_at(&m, &beta).unwrap());
        }
    }

    #[test]
    fn polynomial_matches_direct_slopes(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), t in 1usize..=3) {
        let m = random_generated(seed, q, t);
        let cell = first_cell(&m);
        let p = slope_polynomial(&m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd1ec);
        for _ in 0..5 {
            let beta = random_point(&cell, &mut rng);
            prop_assert_eq!(p.full(beta.minus(&cell.lo)), slope_at(&m, &beta).unwrap().recip());
        }
    }

    #[test]
    fn tree_structure(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3]), t in 1usize..=3) {
        let m = random_generated(seed, q, t);
        let tree = exact_hnf_cell(&m, &first_cell(&m)).unwrap();
        for node in tree.nodes() {
            if node.children.is_empty() {
                prop_assert_eq!(node.basis.len(), t);
                continue;
            }
            let covered = node.children.iter().fold(Rat::zero(), |a, &c| a + tree.node(c).region.area());
            prop_assert_eq!(covered, node.region.area());
            for &c in &node.children {
                let child = tree.node(c);
                prop_assert!(child.basis.len() > node.basis.len());
                prop_assert_eq!(&child.basis[..node.basis.len()], &node.basis[..]);
                // See-saw: the next factor is no steeper inside the face. Ties
                // occur when a smaller subspace attains the maximal slope.
                let d = child.region.center().unwrap();
                if node.parent.is_some() {
                    prop_assert!(child.poly.slope(d) <= node.poly.slope(d));
                }
            }
        }
    }
}
