//! Small named modules and random module generators shared by tests,
//! benches and the CLI self-check.

use rand::Rng;

use crate::field::{Elem, PrimeField};
use crate::grmat::{rat, Degree, GradedMatrix, Rat};

fn f2() -> PrimeField {
    PrimeField::new(2).expect("2 is prime")
}

fn build(field: PrimeField, gens: Vec<Degree>, rels: Vec<(Degree, Vec<(usize, Elem)>)>) -> GradedMatrix {
    GradedMatrix::new(field, gens, rels).expect("fixture is homogeneous")
}

/// The staircase `[0,1) x [0,3)` over F_2.
pub fn vertical() -> GradedMatrix {
    build(f2(), vec![Degree::ints(0, 0)], vec![(Degree::ints(1, 0), vec![(0, 1)]), (Degree::ints(0, 3), vec![(0, 1)])])
}

/// The staircase `[0,3) x [1,2)` over F_2.
pub fn horizontal() -> GradedMatrix {
    build(f2(), vec![Degree::ints(0, 1)], vec![(Degree::ints(3, 1), vec![(0, 1)]), (Degree::ints(0, 2), vec![(0, 1)])])
}

/// `vertical() ⊕ horizontal()` written as one presentation with generators
/// `g1@(0,0)`, `g2@(0,1)`.
pub fn cross() -> GradedMatrix {
    build(
        f2(),
        vec![Degree::ints(0, 0), Degree::ints(0, 1)],
        vec![
            (Degree::ints(1, 0), vec![(0, 1)]),
            (Degree::ints(0, 3), vec![(0, 1)]),
            (Degree::ints(3, 1), vec![(1, 1)]),
            (Degree::ints(0, 2), vec![(1, 1)]),
        ],
    )
}

/// A semistable module over F_2 generated by `e1, e2` at the origin. It has
/// total integral 9, and each of the three lines generates a submodule of
/// integral 5.
pub fn stable() -> GradedMatrix {
    build(
        f2(),
        vec![Degree::ints(0, 0), Degree::ints(0, 0)],
        vec![
            (Degree::ints(2, 0), vec![(1, 1)]),
            (Degree::ints(0, 2), vec![(0, 1)]),
            (Degree::ints(1, 1), vec![(0, 1), (1, 1)]),
            (Degree::ints(3, 0), vec![(0, 1)]),
            (Degree::ints(0, 3), vec![(1, 1)]),
        ],
    )
}

fn random_coord<R: Rng + ?Sized>(lo: Rat, hi: Rat, denom: i64, rng: &mut R) -> Rat {
    let a = (lo * denom).ceil().to_integer();
    let b = (hi * denom).floor().to_integer();
    rat(rng.gen_range(a..=b), denom)
}

fn random_degree_above<R: Rng + ?Sized>(lo: &Degree, hi: i64, denom: i64, rng: &mut R) -> Degree {
    let top = Rat::from_integer(hi);
    Degree::new(random_coord(lo.x, top, denom, rng), random_coord(lo.y, top, denom, rng))
}

fn random_column<R: Rng + ?Sized>(field: PrimeField, rows: usize, rng: &mut R) -> Vec<Elem> {
    loop {
        let v: Vec<Elem> = (0..rows).map(|_| field.random(rng)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// A random bounded presentation with `gens` generators and `rels` random
/// relations. Degrees have coordinates in `(1/denom)Z ∩ [0, max_coord]`;
/// generators lie strictly below `max_coord`, and cap relations at
/// `max_coord` bound the support.
pub fn random_module<R: Rng + ?Sized>(
    field: PrimeField,
    gens: usize,
    rels: usize,
    max_coord: i64,
    denom: i64,
    rng: &mut R,
) -> GradedMatrix {
    let below = rat(max_coord * denom - 1, denom);
    let row_degrees: Vec<Degree> = (0..gens)
        .map(|_| {
            Degree::new(
                random_coord(Rat::from_integer(0), below, denom, rng),
                random_coord(Rat::from_integer(0), below, denom, rng),
            )
        })
        .collect();
    let mut cols = Vec::with_capacity(rels);
    if gens > 0 {
        for _ in 0..rels {
            let support = rng.gen_range(1..=gens.min(2));
            let mut entries = Vec::with_capacity(support);
            let mut lo = Degree::new(Rat::from_integer(0), Rat::from_integer(0));
            for _ in 0..support {
                let i = rng.gen_range(0..gens);
                entries.push((i, field.random_nonzero(rng)));
                lo = lo.join(&row_degrees[i]);
            }
            cols.push((random_degree_above(&lo, max_coord, denom, rng), entries));
        }
    }
    build(field, row_degrees, cols).with_caps(&Degree::ints(max_coord, max_coord))
}

/// A random bounded module with `thickness` generators at a common degree
/// and no relation at that degree, so its dimension there is `thickness`.
/// All degrees have coordinates in `(1/denom)Z ∩ [0, max_coord]`.
pub fn random_uniquely_generated<R: Rng + ?Sized>(
    field: PrimeField,
    thickness: usize,
    max_coord: i64,
    denom: i64,
    rng: &mut R,
) -> GradedMatrix {
    let below = rat(max_coord * denom - 1, denom);
    let zero = Rat::from_integer(0);
    let alpha = Degree::new(random_coord(zero, below, denom, rng), random_coord(zero, below, denom, rng));
    let num_rels = rng.gen_range(thickness..=2 * thickness + 1);
    let mut cols = Vec::with_capacity(num_rels);
    while cols.len() < num_rels {
        let d = random_degree_above(&alpha, max_coord, denom, rng);
        if d == alpha {
            continue;
        }
        let v = random_column(field, thickness, rng);
        cols.push((d, v.into_iter().enumerate().filter(|&(_, x)| x != 0).collect()));
    }
    build(field, vec![alpha; thickness], cols).with_caps(&Degree::ints(max_coord, max_coord))
}

/// A direct sum of `count` random staircases, each with up to three random
/// relations, capped at `max_coord`.
pub fn random_staircase_sum<R: Rng + ?Sized>(
    field: PrimeField,
    count: usize,
    max_coord: i64,
    denom: i64,
    rng: &mut R,
) -> GradedMatrix {
    let below = rat(max_coord * denom - 1, denom);
    let zero = Rat::from_integer(0);
    let mut gens = Vec::with_capacity(count);
    let mut cols = Vec::new();
    for i in 0..count {
        let g = Degree::new(random_coord(zero, below, denom, rng), random_coord(zero, below, denom, rng));
        gens.push(g);
        for _ in 0..rng.gen_range(0..=3) {
            let d = random_degree_above(&g, max_coord, denom, rng);
            if d != g {
                cols.push((d, vec![(i, 1)]));
            }
        }
    }
    build(field, gens, cols).with_caps(&Degree::ints(max_coord, max_coord))
}
