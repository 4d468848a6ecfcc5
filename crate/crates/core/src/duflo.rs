//! The Duflo series and its star-product counterpart: exact Bernoulli jets,
//! wheel coefficients solved from the transfer identity, the map
//! `η(p) = exp_*(p·q)`, and the Duflo / graded Kashiwara–Vergne residual
//! checks.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diffop::{apply_right_operator, DiffOperator};
use crate::graphs::wheel;
use crate::lie::{find_invariants, is_invariant, trace_power_poly, LieAlgebra};
use crate::poly::{distribution_times_jet, multiply_jet, Coords, Polynomial};
use crate::ratio::{factorial, fmt_rat, rat, rat_to_f64, Rat};
use crate::star::{kappa, star_truncated, StarContext, StarError};
use crate::uea::{symmetrize, uea_mul, UEnvElement};
use crate::weights::{mc_weight, WeightError, WeightEstimate};

#[derive(Debug, Error)]
pub enum DufloError {
    #[error("the algebra yields no constraint: all trace powers vanish")]
    NoConstraint,
    #[error("inconsistent wheel constraints: {0}")]
    InconsistentConstraints(String),
    #[error("missing wheel coefficient for k = {0}")]
    MissingCoefficient(usize),
    #[error("wheel coefficients above k = {requested} need weight-table orders ≤ {needed}, context covers {available}")]
    WheelCoverage {
        requested: usize,
        needed: usize,
        available: usize,
    },
    #[error("solved c2 = {solved} disagrees with the Monte Carlo wheel estimate {mc} ± {sigma}")]
    CrossCheckFailed {
        solved: String,
        mc: f64,
        sigma: f64,
    },
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Sym(#[from] crate::poly::SymError),
}

/// Exact Bernoulli numbers by the standard recursion
/// `Σ_{k≤n} C(n+1,k)·B_k = 0` (so `B_1 = -1/2`; odd values above one
/// vanish).
pub fn bernoulli(n: usize) -> Rat {
    let mut b: Vec<Rat> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rat::one());
            continue;
        }
        let mut acc = Rat::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Rat::from_integer(binomial(m + 1, k)) * bk;
        }
        b.push(-acc / Rat::from_integer((m as i64 + 1).into()));
    }
    b.pop().unwrap()
}

fn binomial(n: usize, k: usize) -> num_bigint::BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// A truncated even series evaluated on the algebra: the exponential of a
/// linear combination of trace powers, cut at `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetSeries {
    pub order: usize,
    /// Polynomial function on the algebra (Y coordinates); even degrees
    /// only, constant term 1.
    pub poly: Polynomial,
}

/// Truncated exponential of a polynomial with zero constant term.
fn exp_truncated(e: &Polynomial, order: usize) -> Polynomial {
    let d = e.dim();
    let mut acc = Polynomial::one(d, e.coords());
    if e.is_zero() {
        return acc;
    }
    let mut power = Polynomial::one(d, e.coords());
    let min_deg = 2usize; // trace powers start at degree 2
    let mut j = 1usize;
    while j * min_deg <= order {
        power = power.mul(e).truncate_above(order);
        let scale = Rat::one() / Rat::from_integer(factorial(j));
        acc = acc.add(&power.scale(&scale));
        j += 1;
    }
    acc.truncate_above(order)
}

/// The exponent `Σ coeff_k · tr[(ad x)^(2k)]` truncated at `order`.
fn trace_series(
    algebra: &LieAlgebra,
    order: usize,
    coeff: impl Fn(usize) -> Result<Rat, DufloError>,
) -> Result<Polynomial, DufloError> {
    let d = algebra.dim();
    let mut e = Polynomial::zero(d, Coords::Y);
    let mut k = 1usize;
    while 2 * k <= order {
        let t = trace_power_poly(algebra, k).retag(Coords::Y);
        if !t.is_zero() {
            e = e.add(&t.scale(&coeff(k)?));
        }
        k += 1;
    }
    Ok(e)
}

/// The square-root-Jacobian series of the exponential map:
/// `q = exp(Σ_k B_{2k}/(4k(2k)!)·tr[(ad x)^{2k}])`, truncated at `order`.
pub fn q_jet(algebra: &LieAlgebra, order: usize) -> JetSeries {
    let e = trace_series(algebra, order, |k| {
        Ok(bernoulli(2 * k)
            / (rat(4) * rat(k as i64) * Rat::from_integer(factorial(2 * k))))
    })
    .expect("q-series coefficients are closed-form");
    JetSeries {
        order,
        poly: exp_truncated(&e, order),
    }
}

/// Wheel coefficient values: exact when solved, estimate-backed otherwise.
#[derive(Debug, Clone)]
pub enum WheelCoeff {
    Exact(Rat),
    Mc(WeightEstimate),
}

/// Mapping `k → c_{2k}` for the even-wheel series.
#[derive(Debug, Clone, Default)]
pub struct WheelCoefficients {
    entries: BTreeMap<usize, WheelCoeff>,
}

impl WheelCoefficients {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn insert_exact(&mut self, k: usize, value: Rat) {
        // The wheel weight obeys |w| ≤ 4^(2k), so the coefficient obeys
        // |c| ≤ 2^(2k).
        debug_assert!(value.abs() <= rat(2).pow(2 * k as i32));
        self.entries.insert(k, WheelCoeff::Exact(value));
    }

    pub fn insert_estimate(&mut self, k: usize, est: WeightEstimate) {
        self.entries.insert(k, WheelCoeff::Mc(est));
    }

    pub fn get(&self, k: usize) -> Option<&WheelCoeff> {
        self.entries.get(&k)
    }

    pub fn exact(&self, k: usize) -> Option<Rat> {
        match self.entries.get(&k) {
            Some(WheelCoeff::Exact(r)) => Some(r.clone()),
            _ => None,
        }
    }
}

/// The transfer series `τ = exp(Σ_k c_{2k}·tr[(ad x)^{2k}])` truncated at
/// `order`. Exact for exact coefficient entries; estimate-backed entries
/// enter through their mean.
pub fn tau_jet(
    algebra: &LieAlgebra,
    order: usize,
    wc: &WheelCoefficients,
) -> Result<JetSeries, DufloError> {
    let e = trace_series(algebra, order, |k| {
        // Coefficients are only required where the trace power is nonzero.
        match wc.get(k) {
            Some(WheelCoeff::Exact(r)) => Ok(r.clone()),
            Some(WheelCoeff::Mc(est)) => {
                Ok(Rat::from_float(est.mean).unwrap_or_else(Rat::zero)
                    / rat(2).pow(2 * k as i32))
            }
            None => Err(DufloError::MissingCoefficient(k)),
        }
    })?;
    Ok(JetSeries {
        order,
        poly: exp_truncated(&e, order),
    })
}

/// Result of the wheel-coefficient solve, with its Monte Carlo cross-check.
#[derive(Debug, Clone)]
pub struct WheelSolve {
    pub coeffs: WheelCoefficients,
    pub mc_checks: Vec<(usize, WeightEstimate)>,
}

/// Solves `c_2` exactly from the identity `κ(p·τ) = exp_*(p·q)` applied to
/// degree-two test elements, and cross-validates against the Monte Carlo
/// estimate of the two-wheel weight over four.
///
/// For a degree-two `p` with `λ_p = ⟨p, tr[(ad x)²]⟩-contraction ≠ 0` the
/// identity pins `c_2` through its scalar part; the higher parts must agree
/// on their own, which is reported as an inconsistency otherwise.
pub fn solve_wheel_coeffs(
    algebra: &LieAlgebra,
    ctx: &StarContext,
    kmax: usize,
    mc_samples: u64,
    mc_seed: u64,
) -> Result<WheelSolve, DufloError> {
    if kmax == 0 {
        return Ok(WheelSolve {
            coeffs: WheelCoefficients::empty(),
            mc_checks: Vec::new(),
        });
    }
    if 2 * kmax > ctx.max_n() {
        return Err(DufloError::WheelCoverage {
            requested: kmax,
            needed: 2 * kmax,
            available: ctx.max_n(),
        });
    }
    if kmax >= 2 {
        // Orders above two need n ≤ 4 exact weights, outside the solved
        // table; the coverage error above already reports this.
        return Err(DufloError::WheelCoverage {
            requested: kmax,
            needed: 2 * kmax,
            available: ctx.max_n(),
        });
    }
    let d = algebra.dim();
    let t2 = trace_power_poly(algebra, 1);
    if t2.is_zero() {
        return Err(DufloError::NoConstraint);
    }
    let t2y = t2.retag(Coords::Y);

    // Degree-two test elements, invariants first.
    let mut candidates: Vec<Polynomial> = Vec::new();
    for inv in find_invariants(algebra, 2).elements {
        if inv.degree() == 2 {
            candidates.push(inv.truncate_below(2));
        }
    }
    for exps in crate::lie::monomials_up_to(d, 2) {
        if exps.iter().map(|&x| x as usize).sum::<usize>() == 2 {
            candidates.push(Polynomial::monomial(d, Coords::X, exps, Rat::one()));
        }
    }

    let q2_coeff = bernoulli(2) / rat(8); // B_2/(4·1·2!)
    let mut solved: Option<(Rat, String)> = None;
    let mut used = 0usize;
    for p in &candidates {
        let lambda = distribution_times_jet(p, &t2y)?;
        if lambda.is_zero() || lambda.degree() != 0 {
            continue;
        }
        let lambda = lambda.coeff(&vec![0u16; d]);
        // symmetrize(p) − κ(p) must be a scalar multiple of the unit.
        let diff = symmetrize(algebra, p).sub(&kappa(p, ctx)?);
        let scalar = diff.coeff(&vec![0u16; d]);
        let rest = diff.sub(&UEnvElement::monomial(d, vec![0; d], scalar.clone()));
        if !rest.is_zero() {
            return Err(DufloError::InconsistentConstraints(format!(
                "non-scalar defect for test element of degree 2 (basis {})",
                algebra.basis().join(",")
            )));
        }
        let c2 = q2_coeff.clone() + scalar / lambda;
        match &solved {
            None => solved = Some((c2, fmt_rat(&q2_coeff))),
            Some((prev, _)) => {
                if *prev != c2 {
                    return Err(DufloError::InconsistentConstraints(format!(
                        "test elements disagree: {} vs {}",
                        fmt_rat(prev),
                        fmt_rat(&c2)
                    )));
                }
            }
        }
        used += 1;
    }
    let Some((c2, _)) = solved else {
        return Err(DufloError::NoConstraint);
    };
    let _ = used;

    // Cross-check against the wheel weight: c_2 = w(W2)/4.
    let est = mc_weight(&wheel(2).expect("two-wheel exists"), mc_samples, mc_seed)?;
    let c2_f = rat_to_f64(&c2);
    let sigma = est.stderr / 4.0;
    if (c2_f - est.mean / 4.0).abs() > 3.0 * sigma {
        return Err(DufloError::CrossCheckFailed {
            solved: fmt_rat(&c2),
            mc: est.mean / 4.0,
            sigma,
        });
    }
    let mut coeffs = WheelCoefficients::empty();
    coeffs.insert_exact(1, c2);
    Ok(WheelSolve {
        coeffs,
        mc_checks: vec![(1, est)],
    })
}

/// The Duflo map on polynomial representatives:
/// `η(p) = exp_*(p·q) = symmetrize(p · q-jet)`.
pub fn eta(p: &Polynomial, algebra: &LieAlgebra) -> UEnvElement {
    let jet = q_jet(algebra, p.degree());
    let pq = multiply_jet(p, &jet.poly, jet.order).expect("jet order matches degree");
    symmetrize(algebra, &pq)
}

/// Multiplicativity defect of the Duflo map:
/// `η(p₁·p₂) − η(p₁)·η(p₂)`, exactly zero when both inputs are invariant.
#[derive(Debug, Clone)]
pub struct DufloResidual {
    pub residual: UEnvElement,
    pub warnings: Vec<String>,
}

pub fn duflo_residual(p1: &Polynomial, p2: &Polynomial, algebra: &LieAlgebra) -> DufloResidual {
    let mut warnings = Vec::new();
    for (label, p) in [("first", p1), ("second", p2)] {
        if !is_invariant(algebra, p) {
            warnings.push(format!(
                "{label} argument is not invariant; the identity is not asserted there"
            ));
        }
    }
    let lhs = eta(&p1.mul(p2), algebra);
    let rhs = uea_mul(algebra, &eta(p1, algebra), &eta(p2, algebra));
    DufloResidual {
        residual: lhs.sub(&rhs),
        warnings,
    }
}

/// Graded components of `(r·p)·τ − (r·τ) ⋆ (p·τ)` in the degrees exactly
/// determined by graph orders ≤ `depth`; all of them vanish when `r` and
/// `p` are invariant. Components are returned with their degree, highest
/// first.
pub fn kv_graded_residual(
    r: &Polynomial,
    p: &Polynomial,
    ctx: &StarContext,
    wc: &WheelCoefficients,
    depth: usize,
) -> Result<Vec<(usize, Polynomial)>, DufloError> {
    if depth > ctx.max_n() {
        return Err(StarError::CoverageInsufficient {
            missing_order: ctx.max_n() + 1,
        }
        .into());
    }
    let algebra = ctx.algebra();
    let tau = tau_jet(algebra, depth, wc)?;
    // Jet terms beyond `depth` only touch components below the returned
    // range, so the depth-truncated jet is enough on all three slots.
    let rp_tau = distribution_times_jet(&r.mul(p), &tau.poly)?;
    let r_tau = distribution_times_jet(r, &tau.poly)?;
    let p_tau = distribution_times_jet(p, &tau.poly)?;
    let star_part = star_truncated(&r_tau, &p_tau, ctx)?;

    let cutoff = (r.degree() + p.degree()).saturating_sub(depth);
    let diff = rp_tau.truncate_below(cutoff).sub(&star_part.poly.truncate_below(cutoff));
    let top = r.degree() + p.degree();
    let mut out = Vec::new();
    for degree in (cutoff..=top).rev() {
        out.push((degree, diff.graded_component(degree)));
    }
    Ok(out)
}

/// Necessary condition for membership in the right ideal generated by the
/// adjoint fields: the operator annihilates every invariant up to the
/// degree bound.
pub fn annihilates_invariants(op: &DiffOperator, algebra: &LieAlgebra, degree_bound: usize) -> bool {
    find_invariants(algebra, degree_bound)
        .elements
        .iter()
        .all(|p| apply_right_operator(p, op).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lie::adjoint_field;
    use crate::ratio::ratio;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(3), rat(0));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn q_jet_examples() {
        let sl2 = fixtures::load_bundled("sl2").unwrap();
        let heis = fixtures::load_bundled("heis3").unwrap();
        // order 0 → 1
        assert_eq!(q_jet(&sl2, 0).poly, Polynomial::one(3, Coords::Y));
        // nilpotent algebras give the constant jet at every order
        for order in [0, 2, 4, 6] {
            assert_eq!(q_jet(&heis, order).poly, Polynomial::one(3, Coords::Y));
        }
        // sl2 at order 2: 1 + (x_h² + x_e·x_f)/6
        let jet = q_jet(&sl2, 2).poly;
        assert_eq!(jet.coeff(&[0, 0, 0]), rat(1));
        assert_eq!(jet.coeff(&[0, 2, 0]), ratio(1, 6));
        assert_eq!(jet.coeff(&[1, 0, 1]), ratio(1, 6));
        assert_eq!(jet.num_terms(), 3);
    }

    #[test]
    fn jets_are_even_with_unit_constant_term() {
        let mut wc = WheelCoefficients::empty();
        wc.insert_exact(1, ratio(1, 48));
        wc.insert_exact(2, ratio(-1, 5760));
        wc.insert_exact(3, ratio(1, 362880));
        for name in fixtures::NAMES {
            let a = fixtures::load_bundled(name).unwrap();
            for order in 0..=6 {
                for jet in [q_jet(&a, order).poly, tau_jet(&a, order, &wc).unwrap().poly] {
                    let dim = jet.dim();
                    assert_eq!(jet.coeff(&vec![0u16; dim]), rat(1));
                    for (e, _) in jet.terms() {
                        let deg: usize = e.iter().map(|&x| x as usize).sum();
                        assert_eq!(deg % 2, 0, "{name} order {order}");
                        assert!(deg <= order || deg == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn tau_jet_requires_coefficients_only_when_traces_survive() {
        let heis = fixtures::load_bundled("heis3").unwrap();
        let empty = WheelCoefficients::empty();
        // heis3 → 1 at every order, with no coefficients available
        assert_eq!(
            tau_jet(&heis, 6, &empty).unwrap().poly,
            Polynomial::one(3, Coords::Y)
        );
        let sl2 = fixtures::load_bundled("sl2").unwrap();
        assert!(matches!(
            tau_jet(&sl2, 2, &empty),
            Err(DufloError::MissingCoefficient(1))
        ));
        let mut wc = WheelCoefficients::empty();
        wc.insert_exact(1, ratio(1, 48));
        let jet = tau_jet(&sl2, 2, &wc).unwrap().poly;
        // 1 + c₂·(8x_h² + 8x_e·x_f)
        assert_eq!(jet.coeff(&[0, 2, 0]), ratio(8, 48));
        assert_eq!(jet.coeff(&[1, 0, 1]), ratio(8, 48));
    }

    #[test]
    fn eta_examples() {
        let sl2 = fixtures::load_bundled("sl2").unwrap();
        // p = 1 → unit
        assert_eq!(eta(&Polynomial::one(3, Coords::X), &sl2), UEnvElement::unit(3));
        // p = x_i → generator
        let xe = Polynomial::var(3, Coords::X, 0);
        assert_eq!(eta(&xe, &sl2), UEnvElement::generator(3, 0));
        // the Casimir picks up its scalar shift: h² + 4ef − 2h + 1
        let u = eta(&fixtures::sl2_casimir(), &sl2);
        assert_eq!(u.coeff(&[0, 2, 0]), rat(1));
        assert_eq!(u.coeff(&[1, 0, 1]), rat(4));
        assert_eq!(u.coeff(&[0, 1, 0]), rat(-2));
        assert_eq!(u.coeff(&[0, 0, 0]), rat(1));
        assert_eq!(u.degree(), 2);
    }

    #[test]
    fn eta_preserves_the_filtration_and_top_symbol() {
        for name in ["sl2", "heis3"] {
            let a = fixtures::load_bundled(name).unwrap();
            for exps in crate::lie::monomials_up_to(3, 4) {
                let deg: usize = exps.iter().map(|&x| x as usize).sum();
                if deg == 0 {
                    continue;
                }
                let p = Polynomial::monomial(3, Coords::X, exps, rat(1));
                let u = eta(&p, &a);
                assert_eq!(u.degree(), deg);
                assert_eq!(u.symbol_at(deg), p);
            }
        }
    }

    #[test]
    fn duflo_identity_for_the_casimir() {
        let sl2 = fixtures::load_bundled("sl2").unwrap();
        let c = fixtures::sl2_casimir();
        let res = duflo_residual(&c, &c, &sl2);
        assert!(res.residual.is_zero());
        assert!(res.warnings.is_empty());
        // trivial pair
        let one = Polynomial::one(3, Coords::X);
        assert!(duflo_residual(&one, &one, &sl2).residual.is_zero());
    }

    #[test]
    fn duflo_residual_warns_for_noninvariant_arguments() {
        let sl2 = fixtures::load_bundled("sl2").unwrap();
        let xe = Polynomial::var(3, Coords::X, 0);
        let xf = Polynomial::var(3, Coords::X, 2);
        let res = duflo_residual(&xe, &xf, &sl2);
        assert!(!res.residual.is_zero());
        assert_eq!(res.warnings.len(), 2);
    }

    #[test]
    fn duflo_identity_on_heisenberg_invariants() {
        let heis = fixtures::load_bundled("heis3").unwrap();
        let inv = find_invariants(&heis, 2);
        for p1 in &inv.elements {
            for p2 in &inv.elements {
                let res = duflo_residual(p1, p2, &heis);
                assert!(res.residual.is_zero());
                assert!(res.warnings.is_empty());
            }
        }
    }

    #[test]
    fn adjoint_fields_annihilate_invariants() {
        for name in ["sl2", "heis3"] {
            let a = fixtures::load_bundled(name).unwrap();
            for i in 0..a.dim() {
                assert!(annihilates_invariants(&adjoint_field(&a, i), &a, 4));
            }
        }
        let sl2 = fixtures::load_bundled("sl2").unwrap();
        assert!(!annihilates_invariants(&DiffOperator::identity(3), &sl2, 2));
        assert!(annihilates_invariants(&DiffOperator::zero(3), &sl2, 4));
    }
}
