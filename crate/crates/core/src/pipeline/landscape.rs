use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;

use crate::grmat::{int, Degree, Rat};
use crate::invariants::SkyscraperQuery;
use crate::Error;

/// Whether the probe interval is centered at the evaluation point or starts
/// there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Anchor {
    /// `s^θ(α − h, α + h)`.
    Center,
    /// `s^θ(α, α + h)`.
    Source,
}

impl FromStr for Anchor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "center" => Ok(Anchor::Center),
            "source" => Ok(Anchor::Source),
            _ => Err(Error::Config(format!("unknown anchor `{s}`"))),
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Anchor::Center => "center",
            Anchor::Source => "source",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandscapeParams {
    pub ks: Vec<usize>,
    pub thetas: Vec<Rat>,
    /// Evaluation points per axis.
    pub resolution: usize,
    pub anchor: Anchor,
}

impl Default for LandscapeParams {
    fn default() -> Self {
        LandscapeParams { ks: vec![1], thetas: vec![Rat::zero()], resolution: 10, anchor: Anchor::Center }
    }
}

/// `resolution × resolution` evaluation points spanning `[lo, hi]`, x-major.
pub fn landscape_points(lo: &Degree, hi: &Degree, resolution: usize) -> Vec<Degree> {
    assert!(resolution >= 2);
    let steps = int(resolution as i64 - 1);
    let at = |a: Rat, b: Rat, i: usize| a + (b - a) * int(i as i64) / steps;
    (0..resolution)
        .flat_map(|i| (0..resolution).map(move |j| Degree::new(at(lo.x, hi.x, i), at(lo.y, hi.y, j))))
        .collect()
}

/// `λ_k^θ(α) = sup{h ≥ 0 : s^θ(α − h, α + h) ≥ k}` at each point, with `h`
/// restricted to multiples of `h_step` up to `h_max` and found by bisection.
/// `s^θ` is non-increasing in `h`, so the bisection is exact on that set.
pub fn filtered_landscape(
    q: &(impl SkyscraperQuery + Sync + ?Sized),
    k: usize,
    theta: Rat,
    points: &[Degree],
    h_step: Rat,
    h_max: Rat,
    anchor: Anchor,
) -> Result<Vec<Rat>, Error> {
    let max_j = (h_max / h_step).floor().to_integer().max(0) as usize;
    points
        .par_iter()
        .map(|alpha| {
            let holds = |j: usize| -> Result<bool, Error> {
                let h = h_step * int(j as i64);
                let lo = match anchor {
                    Anchor::Center => alpha.offset(-h, -h),
                    Anchor::Source => *alpha,
                };
                Ok(q.query(theta, &lo, &alpha.offset(h, h))? >= k)
            };
            if !holds(0)? {
                return Ok(Rat::zero());
            }
            if holds(max_j)? {
                return Ok(h_step * int(max_j as i64));
            }
            let (mut good, mut bad) = (0, max_j);
            while bad - good > 1 {
                let mid = (good + bad) / 2;
                if holds(mid)? {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            Ok(h_step * int(good as i64))
        })
        .collect()
}

/// One value of a filtered landscape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandscapeRow {
    pub point: Degree,
    pub k: usize,
    pub theta: Rat,
    pub lambda: Rat,
}

/// Every `(k, θ)` landscape of `params` on the evaluation grid of `[lo, hi]`,
/// `k` outermost, then `θ`, then the points in x-major order.
pub fn landscapes(
    q: &(impl SkyscraperQuery + Sync + ?Sized),
    params: &LandscapeParams,
    lo: &Degree,
    hi: &Degree,
    h_step: Rat,
) -> Result<Vec<LandscapeRow>, Error> {
    let points = landscape_points(lo, hi, params.resolution);
    let h_max = (hi.x - lo.x).max(hi.y - lo.y);
    let mut rows = Vec::new();
    for &k in &params.ks {
        for &theta in &params.thetas {
            let values = filtered_landscape(q, k, theta, &points, h_step, h_max, params.anchor)?;
            rows.extend(points.iter().zip(values).map(|(p, lambda)| LandscapeRow { point: *p, k, theta, lambda }));
        }
    }
    Ok(rows)
}
