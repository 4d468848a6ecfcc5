//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A `Polynomial` either lives in the `X` coordinate family (linear
//! coordinates on the dual space, i.e. elements of the symmetric algebra,
//! doubling as distributions supported at the origin) or in the `Y` family
//! (linear coordinates on the algebra itself, i.e. polynomial functions on
//! it). The pairing `⟨x^a, y^b⟩ = a!·[a = b]` connects the two and fixes the
//! distribution identification `x^a ↔ ∂^a δ₀`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ratio::{factorial, fmt_rat, Rat};

/// Which coordinate family a polynomial is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coords {
    /// Coordinates on the dual space; members of the symmetric algebra.
    X,
    /// Coordinates on the algebra; polynomial functions on it.
    Y,
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coords::X => write!(f, "x"),
            Coords::Y => write!(f, "y"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymError {
    #[error("coordinate family mismatch: {0} vs {1}")]
    CoordMismatch(Coords, Coords),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("jet supplied to order {order} but argument has degree {needed}")]
    JetOrderInsufficient { order: usize, needed: usize },
}

pub type Exponents = Vec<u16>;

/// Sparse exponent-vector → exact-rational coefficient mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    coords: Coords,
    terms: BTreeMap<Exponents, Rat>,
}

impl Polynomial {
    pub fn zero(dim: usize, coords: Coords) -> Self {
        Polynomial {
            dim,
            coords,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, coords: Coords, c: Rat) -> Self {
        let mut p = Self::zero(dim, coords);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize, coords: Coords) -> Self {
        Self::constant(dim, coords, Rat::one())
    }

    /// The coordinate `x_i` (or `y_i`).
    pub fn var(dim: usize, coords: Coords, i: usize) -> Self {
        assert!(i < dim);
        let mut exps = vec![0u16; dim];
        exps[i] = 1;
        let mut p = Self::zero(dim, coords);
        p.add_term(exps, Rat::one());
        p
    }

    pub fn monomial(dim: usize, coords: Coords, exps: Exponents, coeff: Rat) -> Self {
        assert_eq!(exps.len(), dim);
        let mut p = Self::zero(dim, coords);
        p.add_term(exps, coeff);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u16]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Exponents, coeff: Rat) {
        debug_assert_eq!(exps.len(), self.dim);
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.dim, self.coords);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim, self.coords);
        }
        let mut out = Self::zero(self.dim, self.coords);
        for (e, k) in &self.terms {
            out.terms.insert(e.clone(), k.clone() * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other);
        let mut out = Self::zero(self.dim, self.coords);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// The homogeneous component of total degree `k`.
    pub fn graded_component(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim, self.coords);
        for (e, c) in &self.terms {
            if e.iter().map(|&x| x as usize).sum::<usize>() == k {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Drops all components of total degree strictly below `k`.
    pub fn truncate_below(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim, self.coords);
        for (e, c) in &self.terms {
            if e.iter().map(|&x| x as usize).sum::<usize>() >= k {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Drops all components of total degree strictly above `k`.
    pub fn truncate_above(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim, self.coords);
        for (e, c) in &self.terms {
            if e.iter().map(|&x| x as usize).sum::<usize>() <= k {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Formal partial derivative along coordinate `i`.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.dim);
        let mut out = Self::zero(self.dim, self.coords);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            out.add_term(exps, c.clone() * Rat::from_integer(e[i].into()));
        }
        out
    }

    /// `∂^α` applied formally, with the falling-factorial coefficients.
    pub fn derivative_multi(&self, alpha: &[u16]) -> Self {
        debug_assert_eq!(alpha.len(), self.dim);
        let mut out = Self::zero(self.dim, self.coords);
        'term: for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = e.clone();
            for i in 0..self.dim {
                if e[i] < alpha[i] {
                    continue 'term;
                }
                for j in 0..alpha[i] {
                    coeff *= Rat::from_integer((e[i] - j).into());
                }
                exps[i] = e[i] - alpha[i];
            }
            out.add_term(exps, coeff);
        }
        out
    }

    /// Multiplies every exponent vector by `x^beta` (shifts exponents up).
    pub fn shift(&self, beta: &[u16]) -> Self {
        debug_assert_eq!(beta.len(), self.dim);
        let mut out = Self::zero(self.dim, self.coords);
        for (e, c) in &self.terms {
            let exps: Exponents = e.iter().zip(beta).map(|(a, b)| a + b).collect();
            out.terms.insert(exps, c.clone());
        }
        out
    }

    /// Reinterprets the polynomial in the other coordinate family.
    pub fn retag(&self, coords: Coords) -> Self {
        let mut out = self.clone();
        out.coords = coords;
        out
    }

    /// Renders the polynomial using the supplied variable names.
    pub fn display(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.dim);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Exponents, &Rat)> = self.terms.iter().collect();
        ordered.sort_by(|(ea, _), (eb, _)| {
            let da: usize = ea.iter().map(|&k| k as usize).sum();
            let db: usize = eb.iter().map(|&k| k as usize).sum();
            db.cmp(&da).then(eb.cmp(ea))
        });
        let mut parts: Vec<(String, bool)> = Vec::new();
        for (e, c) in ordered {
            let mut factors: Vec<String> = Vec::new();
            let abs = c.abs();
            if !abs.is_one() || e.iter().all(|&k| k == 0) {
                factors.push(fmt_rat(&abs));
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(names[i].clone());
                } else if k > 1 {
                    factors.push(format!("{}^{}", names[i], k));
                }
            }
            parts.push((factors.join("*"), c.is_negative()));
        }
        let mut out = String::new();
        for (i, (body, negative)) in parts.iter().enumerate() {
            if i == 0 {
                if *negative {
                    out.push('-');
                }
            } else {
                out.push_str(if *negative { " - " } else { " + " });
            }
            out.push_str(body);
        }
        out
    }

    fn check_compat(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "polynomial dimension mismatch");
        assert_eq!(self.coords, other.coords, "polynomial coordinate mismatch");
    }
}

/// The pairing `⟨p, f⟩ = (p(∂_y) f)(0)` between a distribution `p` (X family)
/// and a polynomial function `f` (Y family). On monomials,
/// `⟨x^a, y^b⟩ = a!` when `a = b` and `0` otherwise.
pub fn pairing(p: &Polynomial, f: &Polynomial) -> Result<Rat, SymError> {
    if p.coords != Coords::X || f.coords != Coords::Y {
        return Err(SymError::CoordMismatch(p.coords, f.coords));
    }
    if p.dim != f.dim {
        return Err(SymError::DimMismatch(p.dim, f.dim));
    }
    let mut acc = Rat::zero();
    for (e, cp) in &p.terms {
        if let Some(cf) = f.terms.get(e) {
            let mut fac = Rat::one();
            for &k in e {
                fac *= Rat::from_integer(factorial(k as usize));
            }
            acc += cp.clone() * cf.clone() * fac;
        }
    }
    Ok(acc)
}

/// Product of a point-supported distribution with a (truncated) function jet,
/// defined by `⟨p·q, f⟩ = ⟨p, q·f⟩`. On monomials,
/// `x^a · y^b = (a!/(a-b)!)·x^(a-b)` when `b ≤ a` and `0` otherwise, so the
/// result has degree at most `deg p` and only jet terms of degree ≤ `deg p`
/// contribute.
pub fn distribution_times_jet(p: &Polynomial, jet: &Polynomial) -> Result<Polynomial, SymError> {
    if p.coords != Coords::X || jet.coords != Coords::Y {
        return Err(SymError::CoordMismatch(p.coords, jet.coords));
    }
    if p.dim != jet.dim {
        return Err(SymError::DimMismatch(p.dim, jet.dim));
    }
    let mut out = Polynomial::zero(p.dim, Coords::X);
    for (b, cj) in &jet.terms {
        // x^a ∘ y^b contracts b derivatives away.
        let contracted = p.derivative_multi(b);
        for (e, c) in &contracted.terms {
            out.add_term(e.clone(), c.clone() * cj.clone());
        }
    }
    Ok(out)
}

/// `distribution_times_jet` with the jet-order precondition of the public
/// operation: the jet must be supplied at least to the degree of `p`.
pub fn multiply_jet(
    p: &Polynomial,
    jet: &Polynomial,
    jet_order: usize,
) -> Result<Polynomial, SymError> {
    if jet_order < p.degree() {
        return Err(SymError::JetOrderInsufficient {
            order: jet_order,
            needed: p.degree(),
        });
    }
    distribution_times_jet(p, jet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, ratio};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, Coords::X, i)
    }

    fn y(i: usize) -> Polynomial {
        Polynomial::var(3, Coords::Y, i)
    }

    #[test]
    fn arithmetic_basics() {
        let p = x(0).mul(&x(1)).scale(&rat(4)).add(&x(2).mul(&x(2)));
        assert_eq!(p.degree(), 2);
        assert_eq!(p.num_terms(), 2);
        assert!(p.sub(&p).is_zero());
        let names: Vec<String> = ["e", "f", "h"].iter().map(|s| s.to_string()).collect();
        assert_eq!(p.display(&names), "4*e*f + h^2");
    }

    #[test]
    fn pairing_examples() {
        // ⟨1, f⟩ = f(0)
        let one = Polynomial::one(3, Coords::X);
        let f = y(0).add(&Polynomial::constant(3, Coords::Y, rat(7)));
        assert_eq!(pairing(&one, &f).unwrap(), rat(7));
        // ⟨x_1, y_1⟩ = 1
        assert_eq!(pairing(&x(0), &y(0)).unwrap(), rat(1));
        // ⟨x_1², y_1²⟩ = 2
        assert_eq!(pairing(&x(0).mul(&x(0)), &y(0).mul(&y(0))).unwrap(), rat(2));
        // coordinate mismatch is rejected
        assert!(pairing(&y(0), &y(0)).is_err());
    }

    #[test]
    fn pairing_is_diagonal_with_factorial_entries() {
        // On each graded piece the pairing matrix is diagonal with entries a!.
        for k in 0..=3u16 {
            for a0 in 0..=k {
                for b0 in 0..=k {
                    let a = vec![a0, k - a0, 0];
                    let b = vec![b0, k - b0, 0];
                    let p = Polynomial::monomial(3, Coords::X, a.clone(), rat(1));
                    let f = Polynomial::monomial(3, Coords::Y, b.clone(), rat(1));
                    let got = pairing(&p, &f).unwrap();
                    if a == b {
                        let expect = factorial(a0 as usize) * factorial((k - a0) as usize);
                        assert_eq!(got, Rat::from_integer(expect));
                    } else {
                        assert!(got.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn jet_multiplication() {
        // p arbitrary, jet = 1 → p
        let p = x(0).mul(&x(1)).scale(&rat(4)).add(&x(2).mul(&x(2)));
        let one = Polynomial::one(3, Coords::Y);
        assert_eq!(multiply_jet(&p, &one, 2).unwrap(), p);
        // degree-1 p with higher jets truncated away
        let jet = Polynomial::one(3, Coords::Y).add(&y(1).mul(&y(1)));
        assert_eq!(multiply_jet(&x(0), &jet, 2).unwrap(), x(0));
        // insufficient order is an error
        assert_eq!(
            multiply_jet(&p, &one, 1),
            Err(SymError::JetOrderInsufficient { order: 1, needed: 2 })
        );
    }

    #[test]
    fn jet_multiplication_matches_pairing_oracle() {
        // ⟨p·q, f⟩ = ⟨p, q·f⟩ for all monomials f of degree ≤ deg p.
        let p = x(0).mul(&x(1)).scale(&rat(4)).add(&x(2).mul(&x(2)));
        let jet = Polynomial::one(3, Coords::Y)
            .add(&y(0).mul(&y(1)).scale(&ratio(1, 6)))
            .add(&y(2).mul(&y(2)).scale(&ratio(-2, 3)));
        let pq = multiply_jet(&p, &jet, 2).unwrap();
        for e0 in 0..=2u16 {
            for e1 in 0..=2u16 {
                for e2 in 0..=2u16 {
                    if e0 + e1 + e2 > 2 {
                        continue;
                    }
                    let f = Polynomial::monomial(3, Coords::Y, vec![e0, e1, e2], rat(1));
                    let lhs = pairing(&pq, &f).unwrap();
                    let rhs = pairing(&p, &jet.mul(&f)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
