//! Poisson point processes and Voronoi cell statistics.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{check_count, check_lambda, chunk_rng, map_chunks, SimSeed, SimWindow};
use crate::error::Result;

pub(super) fn poisson_count<R: Rng>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng) as u64
}

pub(super) fn ppp_in_square<R: Rng>(lambda: f64, w: f64, rng: &mut R) -> Vec<[f64; 2]> {
    let n = poisson_count(lambda * 4.0 * w * w, rng);
    (0..n)
        .map(|_| [rng.random_range(-w..w), rng.random_range(-w..w)])
        .collect()
}

/// Homogeneous PPP of intensity `lambda_b` (km⁻²) on the window.
pub fn sample_ppp(lambda_b: f64, window: &SimWindow, seed: SimSeed) -> Result<Vec<[f64; 2]>> {
    check_lambda("sample_ppp", lambda_b)?;
    window.validate()?;
    Ok(ppp_in_square(lambda_b, window.half_width, &mut chunk_rng(seed, 0)))
}

pub(super) fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

pub(super) fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(super) fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Keeps the part of a convex polygon with `(x − c)·v ≤ h`.
fn clip(poly: &[[f64; 2]], c: [f64; 2], v: [f64; 2], h: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let side = |p: [f64; 2]| dot(sub(p, c), v) - h;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (sa, sb) = (side(a), side(b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa <= 0.0) != (sb <= 0.0) {
            let t = sa / (sa - sb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Voronoi cell of `sites[idx]` intersected with the square `[−bound, bound]²`.
///
/// Neighbours are visited by distance; once the next one is farther than twice
/// the current circumradius it can no longer cut the cell.
pub fn voronoi_cell(sites: &[[f64; 2]], idx: usize, bound: f64) -> Vec<[f64; 2]> {
    let c = sites[idx];
    let mut poly = vec![[-bound, -bound], [bound, -bound], [bound, bound], [-bound, bound]];
    let mut others: Vec<(f64, [f64; 2])> = sites
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != idx)
        .map(|(_, &p)| (norm(sub(p, c)), p))
        .collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = circumradius(&poly, c);
    for (d, p) in others {
        if d > 2.0 * reach {
            break;
        }
        let v = sub(p, c);
        poly = clip(&poly, c, v, 0.5 * dot(v, v));
        reach = circumradius(&poly, c);
    }
    poly
}

pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        .abs()
}

/// Largest distance from `c` to the polygon, attained at a vertex.
pub fn circumradius(poly: &[[f64; 2]], c: [f64; 2]) -> f64 {
    poly.iter().map(|&p| norm(sub(p, c))).fold(0.0, f64::max)
}

/// Normalized geometry samples: `r̄ = √λ_b·r`, `r̄_max = √λ_b·r_max`, `Ā = λ_b·A`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalGeometry {
    /// Distance from the window centre to the nearest site, one per trial.
    pub nearest: Vec<f64>,
    /// Largest distance from a site to any point of its cell.
    pub max_distance: Vec<f64>,
    pub area: Vec<f64>,
}

/// Nearest-distance, per-cell maximum distance and cell-area samples.
///
/// Cell statistics come from sites inside the guard margin only.
pub fn empirical_geometry(
    lambda_b: f64,
    window: &SimWindow,
    seed: SimSeed,
    n_trials: u64,
) -> Result<EmpiricalGeometry> {
    check_lambda("empirical_geometry", lambda_b)?;
    window.validate()?;
    check_count("empirical_geometry", n_trials)?;
    let w = window.half_width;
    let inner = w - window.guard_margin;
    let (s1, s2) = (lambda_b.sqrt(), lambda_b);
    let parts = map_chunks(n_trials, 64, |k, len| {
        let mut rng = chunk_rng(seed, k);
        let mut g = EmpiricalGeometry::default();
        for _ in 0..len {
            let sites = ppp_in_square(lambda_b, w, &mut rng);
            if let Some(d) = sites.iter().map(|&p| norm(p)).min_by(f64::total_cmp) {
                g.nearest.push(s1 * d);
            }
            for (i, p) in sites.iter().enumerate() {
                if p[0].abs() > inner || p[1].abs() > inner {
                    continue;
                }
                let cell = voronoi_cell(&sites, i, w);
                g.max_distance.push(s1 * circumradius(&cell, *p));
                g.area.push(s2 * polygon_area(&cell));
            }
        }
        g
    });
    Ok(parts.into_iter().fold(EmpiricalGeometry::default(), |mut acc, g| {
        acc.nearest.extend(g.nearest);
        acc.max_distance.extend(g.max_distance);
        acc.area.extend(g.area);
        acc
    }))
}

/// Two-sided Kolmogorov–Smirnov distance between the samples and `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}
