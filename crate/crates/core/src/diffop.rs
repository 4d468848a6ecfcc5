//! Polynomial-coefficient differential operators acting on distributions.
//!
//! Operators live in the Weyl algebra of the underlying space: finite sums
//! `Σ_β c_β(y) ∂_y^β` with polynomial coefficients in the `Y` family. The
//! symmetric algebra is a right module for these operators through the
//! anti-isomorphism that swaps multiplications and differentiations: acting
//! on the right, `∂_{y_k}` multiplies by `x_k` and multiplication by `y_j`
//! differentiates along `x_j`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::poly::{Coords, Exponents, Polynomial};
use crate::ratio::Rat;

/// Finite sparse mapping from a derivative multi-index to its polynomial
/// coefficient (in the `Y` coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator {
    dim: usize,
    terms: BTreeMap<Exponents, Polynomial>,
}

impl DiffOperator {
    pub fn zero(dim: usize) -> Self {
        DiffOperator {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator (multiplication by 1, no derivatives).
    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        op.add_term(vec![0; dim], Polynomial::one(dim, Coords::Y));
        op
    }

    /// Multiplication by the coordinate `y_i`.
    pub fn mul_by_coordinate(dim: usize, i: usize) -> Self {
        let mut op = Self::zero(dim);
        op.add_term(vec![0; dim], Polynomial::var(dim, Coords::Y, i));
        op
    }

    /// The partial derivative `∂_{y_i}`.
    pub fn partial(dim: usize, i: usize) -> Self {
        let mut exps = vec![0u16; dim];
        exps[i] = 1;
        let mut op = Self::zero(dim);
        op.add_term(exps, Polynomial::one(dim, Coords::Y));
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Polynomial)> {
        self.terms.iter()
    }

    /// Adds `coeff(y)·∂^beta`.
    pub fn add_term(&mut self, beta: Exponents, coeff: Polynomial) {
        debug_assert_eq!(beta.len(), self.dim);
        debug_assert_eq!(coeff.coords(), Coords::Y);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(beta) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (b, p) in &self.terms {
            out.terms.insert(b.clone(), p.scale(c));
        }
        out
    }

    /// Derivative order: the largest `|β|` carrying a nonzero coefficient.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|b| b.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest total degree among the coefficient polynomials.
    pub fn coefficient_degree(&self) -> usize {
        self.terms.values().map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Applies the operator to a function of the `Y` family (left action).
    pub fn apply_left(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.coords(), Coords::Y);
        assert_eq!(f.dim(), self.dim);
        let mut out = Polynomial::zero(self.dim, Coords::Y);
        for (beta, coeff) in &self.terms {
            out = out.add(&coeff.mul(&f.derivative_multi(beta)));
        }
        out
    }

    /// Renders the operator as a sum of `coeff·D^β` terms.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (beta, coeff) in &self.terms {
            let mut body = format!("({})", coeff.display(names));
            for (i, &k) in beta.iter().enumerate() {
                if k == 1 {
                    body.push_str(&format!("*D[{}]", names[i]));
                } else if k > 1 {
                    body.push_str(&format!("*D[{}]^{}", names[i], k));
                }
            }
            parts.push(body);
        }
        parts.join(" + ")
    }
}

/// Right action of an operator on a distribution, characterised by
/// `⟨p·D, f⟩ = ⟨p, D f⟩`. For a normal-ordered term `c(y)·∂^β` this is
/// `p ↦ x^β · (c(∂_x) p)`.
pub fn apply_right_operator(p: &Polynomial, op: &DiffOperator) -> Polynomial {
    assert_eq!(p.coords(), Coords::X);
    assert_eq!(p.dim(), op.dim);
    let mut out = Polynomial::zero(p.dim(), Coords::X);
    for (beta, coeff) in &op.terms {
        for (alpha, c) in coeff.terms() {
            let term = p.derivative_multi(alpha).shift(beta).scale(c);
            out = out.add(&term);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::pairing;
    use crate::ratio::rat;

    fn xv(i: usize) -> Polynomial {
        Polynomial::var(2, Coords::X, i)
    }

    #[test]
    fn spec_examples() {
        // p = x_i, D = multiplication by y_i → 1
        let d = DiffOperator::mul_by_coordinate(2, 0);
        assert_eq!(
            apply_right_operator(&xv(0), &d),
            Polynomial::one(2, Coords::X)
        );
        // any p, D = ∂_{y_i} → x_i · p
        let d = DiffOperator::partial(2, 1);
        let p = xv(0).mul(&xv(0)).add(&xv(1));
        assert_eq!(apply_right_operator(&p, &d), xv(1).mul(&p));
        // p = 1, D = multiplication by y_i → 0
        let d = DiffOperator::mul_by_coordinate(2, 0);
        assert!(apply_right_operator(&Polynomial::one(2, Coords::X), &d).is_zero());
    }

    #[test]
    fn pairing_contract_for_composite_operators() {
        // ⟨p·D, f⟩ = ⟨p, Df⟩ for composite operators of order ≤ 3 against all
        // monomials of degree ≤ 4, exercising the anti-isomorphism.
        let dim = 2;
        let mut op = DiffOperator::zero(dim);
        // y_0²·∂_0∂_1 + 3·y_1·∂_1² + y_0y_1·(no derivative) + ∂_0³
        let y0 = Polynomial::var(dim, Coords::Y, 0);
        let y1 = Polynomial::var(dim, Coords::Y, 1);
        op.add_term(vec![1, 1], y0.mul(&y0));
        op.add_term(vec![0, 2], y1.scale(&rat(3)));
        op.add_term(vec![0, 0], y0.mul(&y1));
        op.add_term(vec![3, 0], Polynomial::one(dim, Coords::Y));
        assert_eq!(op.order(), 3);

        for a0 in 0..=4u16 {
            for a1 in 0..=(4 - a0) {
                let p = Polynomial::monomial(dim, Coords::X, vec![a0, a1], rat(1));
                let pd = apply_right_operator(&p, &op);
                for b0 in 0..=6u16 {
                    for b1 in 0..=(6 - b0) {
                        let f = Polynomial::monomial(dim, Coords::Y, vec![b0, b1], rat(1));
                        let lhs = pairing(&pd, &f).unwrap();
                        let rhs = pairing(&p, &op.apply_left(&f)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn right_action_reverses_composition() {
        // p·(A∘B) = (p·A)·B for A = mult by y_0, B = ∂_0.
        // A∘B as a normal-ordered operator is y_0·∂_0.
        let dim = 2;
        let mut ab = DiffOperator::zero(dim);
        ab.add_term(vec![1, 0], Polynomial::var(dim, Coords::Y, 0));
        let a = DiffOperator::mul_by_coordinate(dim, 0);
        let b = DiffOperator::partial(dim, 0);
        let p = xv(0).mul(&xv(0)).mul(&xv(1));
        let via_ab = apply_right_operator(&p, &ab);
        let via_steps = apply_right_operator(&apply_right_operator(&p, &a), &b);
        assert_eq!(via_ab, via_steps);
    }
}
