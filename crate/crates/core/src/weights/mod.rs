//! Graph weights: the hyperbolic angle map, the pulled-back density on the
//! gauge-fixed configuration space, and deterministic parallel Monte Carlo
//! estimation.
//!
//! For graphs with two ground vertices the affine gauge pins the ground
//! points at 0 and 1, identifying the configuration space with the product
//! of upper half-planes. For wheels the hub is pinned at `i`, which uses up
//! the same two-parameter group. Each angle coordinate carries a factor of
//! `1/(2π)` so the torus has total mass one, and the weight is the signed
//! integral of the angle-map Jacobian over the slice in the fixed coordinate
//! order `(Re p_1, Im p_1, Re p_2, …)` with edges in their listed order.
//! This orientation convention makes the single-wedge difference
//! `w(K1:(L,R)) − w(K1:(R,L))` come out at `+1`, matching the first-order
//! anchor of the star product.

pub mod sampler;
pub mod table;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graphs::{encode, AdmissibleGraph, Target};
use sampler::point_mixture;

pub use table::{
    cache_load, cache_store, solve_low_order_table, validate_low_order_table, CacheEntry,
    TableError, WeightTable,
};

/// Bumped when the integrator changes in a way that invalidates cached
/// Monte Carlo estimates.
pub const INTEGRATOR_VERSION: &str = "mc1";

/// Points closer than this are treated as a degenerate configuration.
pub const DEGENERACY_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("coincident points in the angle map")]
    CoincidentPoints,
    #[error("the source of an edge must lie strictly in the upper half-plane")]
    LowerHalfPlane,
    #[error("form degree {edges} does not match the domain dimension {dim}; the weight vanishes")]
    DimensionMismatch { edges: usize, dim: usize },
    #[error("degenerate configuration: two points within {DEGENERACY_EPS}")]
    DegenerateConfiguration,
    #[error("no gauge for this graph shape (need two ground vertices, or a wheel)")]
    UnsupportedGauge,
    #[error("configuration has {got} free points, gauge needs {want}")]
    WrongPointCount { got: usize, want: usize },
}

/// The hyperbolic angle at `z1` between the geodesic towards `z2` and the
/// vertical, reduced to `[0, 2π)`:
/// `(1/2i)·Log[(z₂−z₁)(z̄₂−z₁) / ((z₂−z̄₁)(z̄₂−z̄₁))]` with the principal
/// branch.
pub fn hyperbolic_angle(z1: Complex64, z2: Complex64) -> Result<f64, WeightError> {
    if z1.im <= 0.0 {
        return Err(WeightError::LowerHalfPlane);
    }
    if (z1 - z2).norm() < DEGENERACY_EPS {
        return Err(WeightError::CoincidentPoints);
    }
    let num = (z2 - z1) * (z2.conj() - z1);
    let den = (z2 - z1.conj()) * (z2.conj() - z1.conj());
    let ratio = num / den;
    // Land exactly-real negatives on the principal branch (+π, not −π).
    let im = if ratio.im == 0.0 { 0.0 } else { ratio.im };
    let phi = Complex64::new(ratio.re, im).arg() / 2.0;
    Ok(phi.rem_euclid(2.0 * PI))
}

/// How the affine group has been fixed for a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// Two ground vertices pinned at 0 and 1; all first-type points free.
    TwoGround,
    /// Wheel hub pinned at `i`; the rim points are free.
    Hub,
}

/// Positions of the free points of a gauge-fixed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationPoint {
    pub points: Vec<Complex64>,
}

/// Picks the gauge for a graph, or reports that none applies.
pub fn gauge_of(g: &AdmissibleGraph) -> Result<Gauge, WeightError> {
    if g.m() == 2 {
        Ok(Gauge::TwoGround)
    } else if g.wheel_rim().is_some() {
        Ok(Gauge::Hub)
    } else {
        Err(WeightError::UnsupportedGauge)
    }
}

/// Number of free points once the gauge is fixed.
pub fn free_points(g: &AdmissibleGraph) -> Result<usize, WeightError> {
    Ok(match gauge_of(g)? {
        Gauge::TwoGround => g.n(),
        Gauge::Hub => g.n() - 1,
    })
}

fn position(g: &AdmissibleGraph, gauge: Gauge, c: &ConfigurationPoint, v: Target) -> Complex64 {
    match (gauge, v) {
        (_, Target::Second(j)) => Complex64::new(j as f64, 0.0),
        (Gauge::TwoGround, Target::First(i)) => c.points[i],
        (Gauge::Hub, Target::First(i)) => {
            if i + 1 == g.n() {
                Complex64::new(0.0, 1.0)
            } else {
                c.points[i]
            }
        }
    }
}

/// Jacobian determinant of the angle coordinates (edges in listed order)
/// with respect to the real coordinates of the free points, divided by
/// `(2π)^k`. Errors signal either a vanishing weight (form degree below the
/// domain dimension) or a degenerate configuration.
pub fn pullback_density(
    g: &AdmissibleGraph,
    c: &ConfigurationPoint,
) -> Result<f64, WeightError> {
    let gauge = gauge_of(g)?;
    let nfree = free_points(g)?;
    if c.points.len() != nfree {
        return Err(WeightError::WrongPointCount {
            got: c.points.len(),
            want: nfree,
        });
    }
    let k = g.edge_count();
    let dim = 2 * nfree;
    if k != dim {
        return Err(WeightError::DimensionMismatch { edges: k, dim });
    }
    for p in &c.points {
        if p.im <= 0.0 {
            return Err(WeightError::LowerHalfPlane);
        }
    }
    // All vertex positions, for the degeneracy check.
    let mut positions: Vec<Complex64> = Vec::with_capacity(g.n() + g.m());
    for i in 0..g.n() {
        positions.push(position(g, gauge, c, Target::First(i)));
    }
    for j in 0..g.m() {
        positions.push(position(g, gauge, c, Target::Second(j)));
    }
    for a in 0..positions.len() {
        for b in (a + 1)..positions.len() {
            if (positions[a] - positions[b]).norm() < DEGENERACY_EPS {
                return Err(WeightError::DegenerateConfiguration);
            }
        }
    }

    let free_index = |v: Target| -> Option<usize> {
        match (gauge, v) {
            (Gauge::TwoGround, Target::First(i)) => Some(i),
            (Gauge::Hub, Target::First(i)) if i + 1 < g.n() => Some(i),
            _ => None,
        }
    };

    let mut jac = vec![0.0f64; k * k];
    for (row, (src, tgt)) in g.edges().into_iter().enumerate() {
        let z1 = positions[src];
        let z2 = position(g, gauge, c, tgt);
        // dφ = Im(dz₂/(z₂−z₁) + dz̄₂/(z̄₂−z₁) − (dz₁)·(1/(z₂−z₁) + 1/(z̄₂−z₁)))
        let inv1 = (z2 - z1).inv();
        let inv2 = (z2.conj() - z1).inv();
        let i1 = free_index(Target::First(src)).expect("edge sources are free");
        jac[row * k + 2 * i1] += (-inv1 - inv2).im;
        jac[row * k + 2 * i1 + 1] += (Complex64::i() * (-inv1 - inv2)).im;
        if let Some(i2) = free_index(tgt) {
            jac[row * k + 2 * i2] += (inv1 + inv2).im;
            jac[row * k + 2 * i2 + 1] += (Complex64::i() * (inv1 - inv2)).im;
        }
    }
    let det = det_in_place(&mut jac, k);
    Ok(det / (2.0 * PI).powi(k as i32))
}

/// Determinant by LU with partial pivoting; the matrix is clobbered.
fn det_in_place(m: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0f64;
    for col in 0..k {
        let mut pivot = col;
        let mut best = m[col * k + col].abs();
        for row in (col + 1)..k {
            let v = m[row * k + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..k {
                m.swap(col * k + c, pivot * k + c);
            }
            det = -det;
        }
        let d = m[col * k + col];
        det *= d;
        for row in (col + 1)..k {
            let factor = m[row * k + col] / d;
            if factor == 0.0 {
                continue;
            }
            for c in col..k {
                m[row * k + c] -= factor * m[col * k + c];
            }
        }
    }
    det
}

/// Monte Carlo estimate of a graph weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub graph: String,
}

const BATCH: u64 = 16384;

/// Importance-sampled estimate of the weight integral over the gauge-fixed
/// domain. Deterministic for a given `(graph, samples, seed)` triple: every
/// sample draws from its own counter-indexed stream and batches are reduced
/// at a single merge point in fixed order, so the result is bit-identical
/// for any worker count.
pub fn mc_weight(
    g: &AdmissibleGraph,
    samples: u64,
    seed: u64,
) -> Result<WeightEstimate, WeightError> {
    let gauge = gauge_of(g)?;
    let nfree = free_points(g)?;
    let encoding = encode(g);
    if g.edge_count() != 2 * nfree {
        // The form degree is wrong, so the weight vanishes identically.
        return Ok(WeightEstimate {
            mean: 0.0,
            stderr: 0.0,
            samples,
            seed,
            graph: encoding,
        });
    }
    let proto = ChaCha8Rng::seed_from_u64(seed);
    let batches = samples.div_ceil(BATCH);
    let partials: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * BATCH;
            let hi = (lo + BATCH).min(samples);
            let mut sum = 0.0f64;
            let mut sumsq = 0.0f64;
            for idx in lo..hi {
                let mut rng = proto.clone();
                rng.set_stream(idx);
                let w = one_sample(g, gauge, nfree, &mut rng);
                sum += w;
                sumsq += w * w;
            }
            (sum, sumsq)
        })
        .collect();
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for (s, s2) in partials {
        sum += s;
        sumsq += s2;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(WeightEstimate {
        mean,
        stderr: (var / n).sqrt(),
        samples,
        seed,
        graph: encoding,
    })
}

fn one_sample(g: &AdmissibleGraph, gauge: Gauge, nfree: usize, rng: &mut ChaCha8Rng) -> f64 {
    let mut points: Vec<Complex64> = Vec::with_capacity(nfree);
    let mut density = 1.0f64;
    for _ in 0..nfree {
        let mixture = point_mixture(gauge, &points);
        let (p, q) = mixture.sample(rng);
        points.push(p);
        density *= q;
    }
    let c = ConfigurationPoint { points };
    match pullback_density(g, &c) {
        Ok(f) => f / density,
        // Colliding draws have probability zero; count them as zero.
        Err(_) => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{parse, wheel};

    #[test]
    fn angle_examples() {
        let i = Complex64::i();
        assert!(hyperbolic_angle(i, 2.0 * i).unwrap().abs() < 1e-12);
        assert!((hyperbolic_angle(i, Complex64::new(1.0, 0.0)).unwrap() - PI / 2.0).abs() < 1e-12);
        let at_zero = hyperbolic_angle(i, Complex64::new(0.0, 0.0)).unwrap();
        assert!(at_zero.abs() < 1e-12 || (at_zero - 2.0 * PI).abs() < 1e-12);
        assert_eq!(hyperbolic_angle(i, i), Err(WeightError::CoincidentPoints));
        assert_eq!(
            hyperbolic_angle(Complex64::new(0.0, -1.0), i),
            Err(WeightError::LowerHalfPlane)
        );
    }

    /// Central finite differences of the raw angle map, with branch jumps
    /// wrapped away. Independent of the analytic Jacobian path.
    fn fd_density(g: &AdmissibleGraph, c: &ConfigurationPoint) -> f64 {
        let gauge = gauge_of(g).unwrap();
        let k = g.edge_count();
        let h = 1e-6;
        let angle_vec = |points: &[Complex64]| -> Vec<f64> {
            let cfg = ConfigurationPoint {
                points: points.to_vec(),
            };
            g.edges()
                .into_iter()
                .map(|(src, tgt)| {
                    let z1 = position(g, gauge, &cfg, Target::First(src));
                    let z2 = position(g, gauge, &cfg, tgt);
                    hyperbolic_angle(z1, z2).unwrap()
                })
                .collect()
        };
        // The angle formula works modulo π (the principal log halves the
        // doubled argument), so finite differences must be wrapped mod π.
        let wrap = |d: f64| -> f64 {
            let mut d = d % PI;
            if d > PI / 2.0 {
                d -= PI;
            }
            if d < -PI / 2.0 {
                d += PI;
            }
            d
        };
        let mut jac = vec![0.0f64; k * k];
        for col in 0..k {
            let mut plus = c.points.clone();
            let mut minus = c.points.clone();
            let (idx, im) = (col / 2, col % 2 == 1);
            if im {
                plus[idx].im += h;
                minus[idx].im -= h;
            } else {
                plus[idx].re += h;
                minus[idx].re -= h;
            }
            let fp = angle_vec(&plus);
            let fm = angle_vec(&minus);
            for row in 0..k {
                jac[row * k + col] = wrap(fp[row] - fm[row]) / (2.0 * h);
            }
        }
        det_in_place(&mut jac, k) / (2.0 * PI).powi(k as i32)
    }

    #[test]
    fn density_matches_finite_differences_at_a_point() {
        let g = parse("K1:(L,R)").unwrap();
        let c = ConfigurationPoint {
            points: vec![Complex64::i()],
        };
        let analytic = pullback_density(&g, &c).unwrap();
        let numeric = fd_density(&g, &c);
        assert!(
            (analytic - numeric).abs() <= 1e-6 * analytic.abs().max(1.0),
            "analytic {analytic} vs fd {numeric}"
        );
    }

    #[test]
    fn density_matches_finite_differences_on_random_configurations() {
        use rand::Rng;
        let mut graphs = vec![parse("K1:(L,R)").unwrap(), parse("K1:(R,L)").unwrap()];
        graphs.extend(crate::graphs::enumerate_graphs(2, crate::graphs::GraphClass::A).unwrap());
        graphs.push(wheel(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in graphs {
            let nfree = free_points(&g).unwrap();
            for _ in 0..100 {
                let points: Vec<Complex64> = (0..nfree)
                    .map(|_| {
                        Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..2.5))
                    })
                    .collect();
                let c = ConfigurationPoint { points };
                if pullback_density(&g, &c).is_err() {
                    continue;
                }
                let analytic = pullback_density(&g, &c).unwrap();
                let numeric = fd_density(&g, &c);
                let scale = analytic.abs().max(1e-3);
                assert!(
                    (analytic - numeric).abs() <= 1e-5 * scale,
                    "{}: analytic {analytic} vs fd {numeric}",
                    encode(&g)
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_and_degeneracy() {
        let g = parse("K1:(L)").unwrap();
        let c = ConfigurationPoint {
            points: vec![Complex64::i()],
        };
        assert_eq!(
            pullback_density(&g, &c),
            Err(WeightError::DimensionMismatch { edges: 1, dim: 2 })
        );
        let est = mc_weight(&g, 1000, 1).unwrap();
        assert_eq!((est.mean, est.stderr), (0.0, 0.0));

        let g2 = parse("K2:(L,2);(L,R)").unwrap();
        let z = Complex64::new(0.25, 1.5);
        let c2 = ConfigurationPoint {
            points: vec![z, z + Complex64::new(0.0, 1e-13)],
        };
        assert_eq!(
            pullback_density(&g2, &c2),
            Err(WeightError::DegenerateConfiguration)
        );
    }

    #[test]
    fn mc_is_deterministic_across_worker_counts() {
        let g = parse("K1:(L,R)").unwrap();
        let baseline = mc_weight(&g, 30_000, 42).unwrap();
        for workers in [1usize, 2, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            let est = pool.install(|| mc_weight(&g, 30_000, 42).unwrap());
            assert_eq!(est.mean.to_bits(), baseline.mean.to_bits());
            assert_eq!(est.stderr.to_bits(), baseline.stderr.to_bits());
        }
    }

    #[test]
    fn wedge_difference_is_one() {
        let lr = mc_weight(&parse("K1:(L,R)").unwrap(), 200_000, 11).unwrap();
        let rl = mc_weight(&parse("K1:(R,L)").unwrap(), 200_000, 12).unwrap();
        let diff = lr.mean - rl.mean;
        let sigma = (lr.stderr.powi(2) + rl.stderr.powi(2)).sqrt();
        assert!(
            (diff - 1.0).abs() <= 3.0 * sigma,
            "difference {diff} ± {sigma}"
        );
    }

    #[test]
    fn stderr_scales_like_inverse_sqrt() {
        let g = parse("K1:(L,R)").unwrap();
        let mut ratios = Vec::new();
        for rep in 0..5u64 {
            let small = mc_weight(&g, 40_000, 100 + rep).unwrap();
            let big = mc_weight(&g, 80_000, 200 + rep).unwrap();
            ratios.push(big.stderr / small.stderr);
        }
        let mean: f64 = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let target = 1.0 / 2.0f64.sqrt();
        assert!(
            (mean - target).abs() <= 0.15,
            "stderr ratios {ratios:?}, mean {mean}"
        );
    }

    #[test]
    fn wheel_estimate_is_finite_and_bounded() {
        let est = mc_weight(&wheel(2).unwrap(), 100_000, 5).unwrap();
        assert!(est.mean.is_finite());
        assert!(est.stderr.is_finite());
        // |w| ≤ 4^n on the wheel as well, within noise.
        assert!(est.mean.abs() <= 16.0 + 3.0 * est.stderr);
    }
}
