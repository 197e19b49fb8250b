//! Acceptance criteria, one line each. Exits non-zero if any criterion
//! fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skyscraper_core::cheng::{hn_cheng, shrunk_subspace_random, ChengConfig, MatrixSpace};
use skyscraper_core::field::Echelon;
use skyscraper_core::grmat::{int, rat, submodule_presentation, Cell, Degree, GradedMatrix, Grid, Rat};
use skyscraper_core::hn_core::{brute_force_max_slope, hn_filtration_at, hn_filtration_with, SubspaceIter};
use skyscraper_core::invariants::{
    betti_numbers, erosion_distance, hilbert_function, integral_dim, slope_at, submodule_at, HNFactorList,
    SkyscraperQuery,
};
use skyscraper_core::pipeline::{
    approx_with_work, clip, exact_skyscraper, parallel_grid_scan, support_box, Engine, ScanConfig,
};
use skyscraper_core::subdivision::{all_max_slope, exact_hnf_cell, slope_polynomial, Point, SlopePoly};
use skyscraper_core::{fixtures, DenseMatrix, Error, PrimeField};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn first_cell(m: &GradedMatrix) -> Cell {
    let alpha = m.generated_at().expect("uniquely generated");
    let g = m.induced_grid();
    let (i, j) = g.floor_indices(&alpha).expect("on grid");
    g.cell(i, j)
}

fn line(m: &GradedMatrix, v: Vec<u32>) -> GradedMatrix {
    submodule_presentation(m, &[(m.generated_at().unwrap(), v)]).unwrap()
}

fn stable_polynomials() -> Outcome {
    let start = Instant::now();
    let s = fixtures::stable();
    let whole = slope_polynomial(&s).map_err(e)?;
    let expected = SlopePoly { c0: rat(9, 2), cx: rat(5, 2), cy: rat(5, 2) };
    ensure(whole == expected, || format!("full space polynomial {whole:?}"))?;
    let mut pairs = BTreeSet::new();
    for v in [vec![1, 0], vec![0, 1], vec![1, 1]] {
        let p = slope_polynomial(&line(&s, v)).map_err(e)?;
        ensure(p.c0 == int(5), || format!("line constant {}", p.c0))?;
        pairs.insert((p.cy, p.cx));
    }
    let want: BTreeSet<(Rat, Rat)> = [(3, 3), (3, 2), (2, 3)].iter().map(|&(a, b)| (int(a), int(b))).collect();
    ensure(pairs == want, || format!("coefficient pairs {pairs:?}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("9/2 - 5/2 d1 - 5/2 d2 and lines 5 with {{(3,3),(3,2),(2,3)}} in {t:?}"))
}

fn stable_is_semistable() -> Outcome {
    let s = fixtures::stable();
    let best = brute_force_max_slope(&s).map_err(e)?;
    ensure(best.dim() == 2 && best.slope() == rat(2, 9), || {
        format!("max slope {} on dim {}", best.slope(), best.dim())
    })?;
    for v in [vec![1, 0], vec![0, 1], vec![1, 1]] {
        let sub = line(&s, v.clone());
        let slope = slope_at(&sub, &Degree::zero()).map_err(e)?;
        ensure(slope == rat(1, 5), || format!("line {v:?} has slope {slope}"))?;
    }
    Ok("whole space at slope 2/9, each line at 1/5".into())
}

fn cross_end_to_end() -> Outcome {
    let alpha = Degree::ints(0, 1);
    let hn = hn_filtration_at(&fixtures::cross(), &alpha).map_err(e)?;
    let slopes: Vec<Rat> = hn.factors.iter().map(|f| f.slope).collect();
    ensure(slopes == vec![rat(1, 2), rat(1, 3)], || format!("slopes {slopes:?}"))?;
    let m = submodule_at(&fixtures::cross(), &alpha);
    let cell = Cell { lo: alpha, hi_x: Some(int(1)), hi_y: Some(int(2)) };
    let faces = all_max_slope(&m, &cell).map_err(e)?;
    ensure(faces.len() == 2, || format!("{} faces", faces.len()))?;
    let wall: Vec<Point> =
        faces[0].region.vertices().iter().copied().filter(|v| faces[1].region.vertices().contains(v)).collect();
    ensure(wall.len() == 2, || format!("shared vertices {wall:?}"))?;
    ensure(wall.iter().all(|&(d1, d2)| d2 * int(2) == int(1) + d1), || format!("wall {wall:?}"))?;
    let tree = exact_hnf_cell(&m, &cell).map_err(e)?;
    ensure(tree.root().children.len() == 2, || format!("{} top faces in the tree", tree.root().children.len()))?;
    let shown: Vec<String> = wall.iter().map(|(a, b)| format!("({a}, {b})")).collect();
    Ok(format!("slopes [1/2, 1/3]; two faces meeting on d2 = (1+d1)/2 at {}", shown.join(", ")))
}

fn random_point_in(cell: &Cell, rng: &mut ChaCha8Rng) -> Degree {
    let w = cell.hi_x.expect("bounded cell") - cell.lo.x;
    let h = cell.hi_y.expect("bounded cell") - cell.lo.y;
    cell.lo.offset(w * rat(rng.gen_range(0..8), 8), h * rat(rng.gen_range(0..8), 8))
}

fn engine_cross_validation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let unit = Grid::regular(Degree::zero(), Degree::ints(3, 3), int(1));
    let (mut modules, mut cheng_runs, mut comparisons) = (0, 0, 0);
    let mut mismatches = Vec::new();
    for i in 0..240 {
        let q = if i % 2 == 0 { 2 } else { 3 };
        let t = 1 + (i / 2) % 4;
        let cheng_case = t <= 3 && (i / 8) % 2 == 0;
        let f = PrimeField::new(q).unwrap();
        let m = if cheng_case {
            fixtures::random_uniquely_generated(f, t, 3, 1, &mut rng)
        } else {
            fixtures::random_uniquely_generated(f, t, 4, 2, &mut rng)
        };
        modules += 1;
        let alpha = m.generated_at().unwrap();
        let reference = hn_filtration_with(&m, &alpha, true).map_err(e)?;
        let compare = |what: &str, other: Result<HNFactorList, Error>, mismatches: &mut Vec<String>| match other {
            Ok(o) if o == reference => {}
            Ok(_) => mismatches.push(format!("module {i} ({what}) at {alpha}")),
            Err(err) => mismatches.push(format!("module {i} ({what}) failed: {err}")),
        };
        compare("filter off", hn_filtration_with(&m, &alpha, false), &mut mismatches);
        let tree = exact_hnf_cell(&m, &first_cell(&m)).map_err(e)?;
        compare("subdivision", tree.factors_at(&alpha), &mut mismatches);
        comparisons += 2;
        for _ in 0..3 {
            let beta = random_point_in(&tree.cell, &mut rng);
            let brute = hn_filtration_with(&m, &beta, true).map_err(e)?;
            let unfiltered = hn_filtration_with(&m, &beta, false).map_err(e)?;
            let exact = tree.factors_at(&beta).map_err(e)?;
            if brute != exact || brute != unfiltered {
                mismatches.push(format!("module {i} at {beta}"));
            }
            comparisons += 2;
        }
        if cheng_case {
            let cfg = ChengConfig { seed: i as u64, ..ChengConfig::default() };
            compare("cheng", hn_cheng(&m, &unit, &alpha, &cfg), &mut mismatches);
            cheng_runs += 1;
            comparisons += 1;
        }
    }
    let t = start.elapsed();
    ensure(mismatches.is_empty(), || format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]))?;
    ensure(t < Duration::from_secs(600), || format!("took {t:?}"))?;
    Ok(format!(
        "{modules} modules, {cheng_runs} with the randomized engine, {comparisons} comparisons, 0 mismatches in {t:?}"
    ))
}

fn random_modules(count: usize, seed: u64) -> Vec<GradedMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let f = PrimeField::new(if i % 3 == 2 { 3 } else { 2 }).unwrap();
            let gens = rng.gen_range(1..=3);
            let rels = rng.gen_range(1..=4);
            fixtures::random_module(f, gens, rels, 3, 2, &mut rng)
        })
        .collect()
}

const EPSILONS: [(i64, i64); 3] = [(1, 1), (1, 2), (1, 4)];

/// Lattice points of the box plus points off the lattice.
fn probes(m: &GradedMatrix, cfg: &ScanConfig, rng: &mut ChaCha8Rng) -> Vec<Degree> {
    let Some((lo, hi)) = support_box(m, cfg) else { return Vec::new() };
    let lattice = skyscraper_core::pipeline::lattice_grid(&lo, &hi, cfg.epsilon);
    let mut out: Vec<Degree> = lattice.points().filter(|p| m.dim_at(p) > 0).collect();
    while out.len() > 80 {
        out.swap_remove(rng.gen_range(0..out.len()));
    }
    let (w, h) = hi.minus(&lo);
    for _ in 0..30 {
        out.push(lo.offset(w * rat(rng.gen_range(0..64), 64), h * rat(rng.gen_range(0..64), 64)));
    }
    out
}

fn epsilon_bound(modules: &[GradedMatrix]) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let thetas = [int(0), rat(1, 4), int(1)];
    let mut worst = [Rat::zero(); 2];
    let mut brackets = 0;
    for (i, m) in modules.iter().enumerate() {
        for &(n, d) in &EPSILONS {
            let eps = rat(n, d);
            let brute_cfg = ScanConfig { epsilon: eps, ..ScanConfig::default() };
            let exact = exact_skyscraper(&clip(m, &brute_cfg)).map_err(e)?;
            let points = probes(m, &brute_cfg, &mut rng);
            for (k, engine) in [Engine::Brute, Engine::Cheng].into_iter().enumerate() {
                let cfg = ScanConfig { engine, seed: i as u64, ..brute_cfg.clone() };
                let (approx, _) = approx_with_work(m, &cfg).map_err(e)?;
                let limit = eps * int(k as i64 + 1);
                for &theta in &thetas {
                    let b = erosion_distance(&approx, &exact, theta, &points, eps / 4, 8).map_err(e)?;
                    brackets += 1;
                    let upper = b
                        .upper
                        .ok_or_else(|| format!("module {i}, {engine}, eps {eps}, theta {theta}: above {}", b.lower))?;
                    ensure(upper <= limit, || {
                        format!("module {i}, {engine}, eps {eps}, theta {theta}: {upper} > {limit}")
                    })?;
                    worst[k] = worst[k].max(upper / eps);
                }
            }
        }
    }
    Ok(format!(
        "{} modules, {brackets} brackets; worst upper/eps {} (brute), {} (cheng) in {:?}",
        modules.len(),
        worst[0],
        worst[1],
        start.elapsed()
    ))
}

fn scan_equals_approx(modules: &[GradedMatrix]) -> Outcome {
    let mut stores = 0;
    for (i, m) in modules.iter().enumerate() {
        for &(n, d) in &EPSILONS {
            let cfg = ScanConfig { epsilon: rat(n, d), ..ScanConfig::default() };
            let (approx, approx_work) = approx_with_work(m, &cfg).map_err(e)?;
            let (scan, work) = parallel_grid_scan(m, &cfg).map_err(e)?;
            ensure(scan == approx, || format!("module {i}, eps {}: stores differ", cfg.epsilon))?;
            for (s, (a, b)) in work.per_summand.iter().zip(&approx_work.per_summand).enumerate() {
                ensure(a <= b, || format!("module {i}, eps {}, summand {s}: scan work {a} > {b}", cfg.epsilon))?;
            }
            stores += 1;
        }
    }
    Ok(format!("{stores} store pairs equal entry-for-entry, scan work never above approx work"))
}

fn rank_consistency(modules: &[GradedMatrix]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut pairs = 0;
    for (i, m) in modules.iter().enumerate() {
        let cfg = ScanConfig { epsilon: rat(1, 2), ..ScanConfig::default() };
        let clipped = clip(m, &cfg);
        let exact = exact_skyscraper(&clipped).map_err(e)?;
        let (approx, _) = approx_with_work(m, &cfg).map_err(e)?;
        let (lo, hi) = support_box(m, &cfg).expect("has generators");
        let (w, h) = hi.minus(&lo);
        for k in 0..100 {
            let a = lo.offset(w * rat(rng.gen_range(0..16), 16), h * rat(rng.gen_range(0..16), 16));
            let b = a.offset(w * rat(rng.gen_range(0..8), 16), h * rat(rng.gen_range(0..8), 16));
            let rank = clipped.structure_map(&a, &b).map_err(e)?.rank();
            let got = exact.query(int(0), &a, &b).map_err(e)?;
            ensure(got == rank, || format!("module {i}: exact query {got} != rank {rank} from {a} to {b}"))?;
            if k % 2 == 0 {
                // Lattice points for the approximation, whose lookups snap down.
                let a = Degree::new((a.x * 2).floor() / 2, (a.y * 2).floor() / 2);
                let rank = clipped.structure_map(&a, &b).map_err(e)?.rank();
                let got = approx.query(int(0), &a, &b).map_err(e)?;
                ensure(got == rank, || format!("module {i}: lattice query {got} != rank {rank} from {a} to {b}"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} random pairs over {} modules", modules.len()))
}

/// `Σ dim · area` over the cells of the induced grid.
fn cell_area_sum(m: &GradedMatrix) -> Option<Rat> {
    let g = m.induced_grid();
    let hf = hilbert_function(m, &g);
    let mut total = Rat::zero();
    for (i, col) in hf.values.iter().enumerate() {
        for (j, &v) in col.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let w = *g.xs.get(i + 1)? - g.xs[i];
            let h = *g.ys.get(j + 1)? - g.ys[j];
            total += w * h * int(v as i64);
        }
    }
    Some(total)
}

fn integral_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let f = PrimeField::new(if i % 2 == 0 { 2 } else { 3 }).unwrap();
        let count = rng.gen_range(1..=4);
        let m = fixtures::random_staircase_sum(f, count, 4, 4, &mut rng);
        let bound = m.max_degree().expect("nonempty");
        let betti = integral_dim(&betti_numbers(&m), &bound).map_err(e)?;
        let cells = cell_area_sum(&m).ok_or_else(|| format!("sum {i} is unbounded"))?;
        ensure(betti == cells, || format!("sum {i}: Betti formula {betti}, cells {cells}"))?;
    }
    Ok("100 staircase sums, Betti formula equals cell sum exactly".into())
}

fn brute_force_scaling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let m = fixtures::random_uniquely_generated(f2(), 6, 4, 2, &mut rng);
    let start = Instant::now();
    let best = brute_force_max_slope(&m).map_err(e)?;
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("thickness 6 in {t:?}, best subspace of dim {} at slope {}", best.dim(), best.slope()))
}

/// The least maximizer of `dim U − dim 𝒜U`, by enumerating every subspace.
fn exhaustive_shrunk(space: &MatrixSpace) -> Echelon {
    let (f, n) = (space.field(), space.cols());
    let all: Vec<Echelon> = SubspaceIter::with_dims(f, n, 0..=n).map(|b| Echelon::spanned_by(f, n, b)).collect();
    let best = all.iter().map(|u| space.discrepancy(u)).max().expect("zero subspace");
    let maximizers: Vec<&Echelon> = all.iter().filter(|u| space.discrepancy(u) == best).collect();
    // Maximizers form a lattice; the least one is contained in all others.
    (*maximizers.iter().find(|u| maximizers.iter().all(|v| v.contains_all(u))).expect("least maximizer")).clone()
}

fn random_matrix_space(rng: &mut ChaCha8Rng) -> MatrixSpace {
    let f = f2();
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    let count = rng.gen_range(0..=3.min(rows * cols));
    loop {
        let basis: Vec<DenseMatrix> = (0..count)
            .map(|_| DenseMatrix::from_rows(f, rows, cols, (0..rows * cols).map(|_| f.random(rng)).collect()))
            .collect();
        if let Ok(s) = MatrixSpace::new(f, rows, cols, basis) {
            return s;
        }
    }
}

fn shrunk_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut retries_used = 0;
    for i in 0..50 {
        let space = random_matrix_space(&mut rng);
        let want = exhaustive_shrunk(&space);
        let found = (0..8u64).find_map(|attempt| {
            let r = 1usize << (attempt / 2);
            let basis = shrunk_subspace_random(&space, r, 1000 * i + attempt)?;
            retries_used = retries_used.max(attempt);
            Some(Echelon::spanned_by(space.field(), space.cols(), basis))
        });
        let found = found.ok_or_else(|| format!("space {i}: no success in 8 attempts"))?;
        ensure(found == want, || format!("space {i}: found {:?}, oracle {:?}", found.basis(), want.basis()))?;
    }
    Ok(format!("50 spaces agree with exhaustive search, at most {} retries", retries_used))
}

fn main() {
    let modules = random_modules(50, 3);
    let criteria: Vec<Criterion> = vec![
        ("slope polynomials of the stable module", Box::new(stable_polynomials)),
        ("stable module is semistable", Box::new(stable_is_semistable)),
        ("cross module end to end", Box::new(cross_end_to_end)),
        ("engine cross-validation", Box::new(engine_cross_validation)),
        ("epsilon approximation bound", Box::new(|| epsilon_bound(&modules))),
        ("scan equals approximation", Box::new(|| scan_equals_approx(&modules))),
        ("rank consistency", Box::new(|| rank_consistency(&modules))),
        ("integral formula", Box::new(integral_formula)),
        ("brute-force scaling", Box::new(brute_force_scaling)),
        ("shrunk subspace oracle", Box::new(shrunk_oracle)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
