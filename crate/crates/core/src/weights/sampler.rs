//! Importance sampling for the weight integrals.
//!
//! The base draw maps `(u, v) ∈ (0,1)²` to `(tan(π(u−1/2)), v/(1−v))`,
//! a Cauchy tail in the horizontal direction and a `1/(1+v)²` tail
//! vertically — the angle-form density decays slowly on the noncompact
//! gauge slice. The integrand additionally has integrable `1/r` spikes
//! where two marked points meet (a pair of aerial points, an aerial point
//! and a pinned ground point or hub, or the far region). Each spike gets a
//! log-uniform radial mixture component whose `1/ρ²` area density keeps the
//! second moment of the estimator finite. Densities are evaluated exactly
//! for the full mixture, so the estimator stays unbiased.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::Gauge;

/// A uniform draw in the open interval (0, 1).
fn unit_open(rng: &mut ChaCha8Rng) -> f64 {
    use rand::RngCore;
    (((rng.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9007199254740992.0)
}

#[derive(Debug, Clone, Copy)]
pub enum Component {
    /// Cauchy × transformed-uniform product over the half-plane.
    Base,
    /// Log-uniform radius around a boundary point, angle in (0, π).
    HalfDisc { center: f64, rho_min: f64, rho_max: f64 },
    /// Log-uniform radius around an interior point, angle in (0, 2π).
    Disc {
        center: Complex64,
        rho_min: f64,
        rho_max: f64,
    },
}

impl Component {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        let (a, b) = (unit_open(rng), unit_open(rng));
        match *self {
            Component::Base => {
                let u = (PI * (a - 0.5)).tan();
                let v = b / (1.0 - b);
                Complex64::new(u, v)
            }
            Component::HalfDisc {
                center,
                rho_min,
                rho_max,
            } => {
                let rho = rho_min * (rho_max / rho_min).powf(a);
                let theta = PI * b;
                Complex64::new(center, 0.0) + rho * Complex64::new(theta.cos(), theta.sin())
            }
            Component::Disc {
                center,
                rho_min,
                rho_max,
            } => {
                let rho = rho_min * (rho_max / rho_min).powf(a);
                let theta = 2.0 * PI * b;
                center + rho * Complex64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// Density with respect to the area element `du dv` of the half-plane.
    fn density(&self, p: Complex64) -> f64 {
        if p.im <= 0.0 {
            return 0.0;
        }
        match *self {
            Component::Base => {
                let cauchy = 1.0 / (PI * (1.0 + p.re * p.re));
                let vertical = 1.0 / ((1.0 + p.im) * (1.0 + p.im));
                cauchy * vertical
            }
            Component::HalfDisc {
                center,
                rho_min,
                rho_max,
            } => {
                let rho = (p - Complex64::new(center, 0.0)).norm();
                if rho <= rho_min || rho >= rho_max {
                    0.0
                } else {
                    1.0 / (PI * (rho_max / rho_min).ln() * rho * rho)
                }
            }
            Component::Disc {
                center,
                rho_min,
                rho_max,
            } => {
                let rho = (p - center).norm();
                if rho <= rho_min || rho >= rho_max {
                    0.0
                } else {
                    1.0 / (2.0 * PI * (rho_max / rho_min).ln() * rho * rho)
                }
            }
        }
    }
}

/// Weighted mixture of components; the weights sum to one.
pub struct Mixture {
    components: Vec<(f64, Component)>,
}

impl Mixture {
    /// Draws one point and returns it with its exact mixture density.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> (Complex64, f64) {
        let pick = unit_open(rng);
        let mut acc = 0.0;
        let mut chosen = self.components.len() - 1;
        for (i, (w, _)) in self.components.iter().enumerate() {
            acc += w;
            if pick < acc {
                chosen = i;
                break;
            }
        }
        let p = self.components[chosen].1.sample(rng);
        (p, self.density(p))
    }

    pub fn density(&self, p: Complex64) -> f64 {
        self.components
            .iter()
            .map(|(w, c)| w * c.density(p))
            .sum()
    }
}

const FAR_RHO_MIN: f64 = 1e-4;
const FAR_RHO_MAX: f64 = 1e5;
const NEAR_FRACTION: f64 = 0.2;

/// The mixture for the next free point, given the points drawn so far.
/// Anchored components cover the pinned ground points (or the hub) and the
/// far region; collision components cover previously drawn points.
pub fn point_mixture(gauge: Gauge, prev: &[Complex64]) -> Mixture {
    let mut fixed: Vec<(f64, Component)> = vec![(0.5, Component::Base)];
    match gauge {
        Gauge::TwoGround => {
            fixed.push((
                0.15,
                Component::HalfDisc {
                    center: 0.0,
                    rho_min: FAR_RHO_MIN,
                    rho_max: FAR_RHO_MAX,
                },
            ));
            fixed.push((
                0.15,
                Component::HalfDisc {
                    center: 1.0,
                    rho_min: FAR_RHO_MIN,
                    rho_max: FAR_RHO_MAX,
                },
            ));
        }
        Gauge::Hub => {
            fixed.push((
                0.15,
                Component::HalfDisc {
                    center: 0.0,
                    rho_min: FAR_RHO_MIN,
                    rho_max: FAR_RHO_MAX,
                },
            ));
            fixed.push((
                0.15,
                Component::Disc {
                    center: Complex64::new(0.0, 1.0),
                    rho_min: 1e-5,
                    rho_max: 0.5,
                },
            ));
        }
    }
    let mut components = Vec::new();
    if prev.is_empty() {
        let total: f64 = fixed.iter().map(|(w, _)| w).sum();
        for (w, c) in fixed {
            components.push((w / total, c));
        }
    } else {
        components.extend(fixed);
        let share = NEAR_FRACTION / prev.len() as f64;
        for &q in prev {
            components.push((
                share,
                Component::Disc {
                    center: q,
                    rho_min: q.im * 1e-5,
                    rho_max: q.im * 0.5,
                },
            ));
        }
    }
    Mixture { components }
}
