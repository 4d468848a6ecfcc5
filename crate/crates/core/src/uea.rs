//! The universal enveloping algebra in a Poincaré–Birkhoff–Witt basis.
//!
//! Elements are kept normal-ordered eagerly: a PBW exponent vector
//! `(a_1, …, a_d)` stands for the ordered monomial `g_1^{a_1}·…·g_d^{a_d}`
//! in the basis order of the algebra file. Products are rewritten with the
//! bracket relations; the symmetrization map averages all orderings of a
//! monomial and is inverted degree by degree.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lie::LieAlgebra;
use crate::poly::{Coords, Exponents, Polynomial};
use crate::ratio::{factorial, Rat};

/// Element of the enveloping algebra, as a sparse mapping from PBW exponent
/// vectors to exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UEnvElement {
    dim: usize,
    terms: BTreeMap<Exponents, Rat>,
}

impl UEnvElement {
    pub fn zero(dim: usize) -> Self {
        UEnvElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(dim: usize) -> Self {
        let mut u = Self::zero(dim);
        u.add_term(vec![0; dim], Rat::one());
        u
    }

    /// The generator `g_i`.
    pub fn generator(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut exps = vec![0u16; dim];
        exps[i] = 1;
        let mut u = Self::zero(dim);
        u.add_term(exps, Rat::one());
        u
    }

    pub fn monomial(dim: usize, exps: Exponents, coeff: Rat) -> Self {
        assert_eq!(exps.len(), dim);
        let mut u = Self::zero(dim);
        u.add_term(exps, coeff);
        u
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Filtration degree: the largest total PBW exponent.
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
        match self.terms.entry(exps) {
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
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (e, k) in &self.terms {
            out.terms.insert(e.clone(), k.clone() * c);
        }
        out
    }

    /// Terms of exactly the given filtration degree, as a commutative
    /// polynomial (the symbol of that layer).
    pub fn symbol_at(&self, degree: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.dim, Coords::X);
        for (e, c) in &self.terms {
            if e.iter().map(|&k| k as usize).sum::<usize>() == degree {
                p.add_term(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn display(&self, names: &[String]) -> String {
        // PBW monomials print like commutative ones; reuse that renderer.
        let mut p = Polynomial::zero(self.dim, Coords::X);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone());
        }
        p.display(names)
    }
}

fn word_of(exps: &[u16]) -> Vec<usize> {
    let mut word = Vec::new();
    for (i, &k) in exps.iter().enumerate() {
        for _ in 0..k {
            word.push(i);
        }
    }
    word
}

/// Rewrites the product of two PBW monomial words into normal order,
/// accumulating into `out` with the given coefficient.
fn normal_order_word(algebra: &LieAlgebra, word: &[usize], coeff: Rat, out: &mut UEnvElement) {
    // Find the first descent; swap and emit the bracket correction.
    for pos in 0..word.len().saturating_sub(1) {
        let (a, b) = (word[pos], word[pos + 1]);
        if a > b {
            let mut swapped = word.to_vec();
            swapped[pos] = b;
            swapped[pos + 1] = a;
            normal_order_word(algebra, &swapped, coeff.clone(), out);
            for (k, c) in algebra.bracket(a, b) {
                let mut shorter = Vec::with_capacity(word.len() - 1);
                shorter.extend_from_slice(&word[..pos]);
                shorter.push(k);
                shorter.extend_from_slice(&word[pos + 2..]);
                normal_order_word(algebra, &shorter, coeff.clone() * c, out);
            }
            return;
        }
    }
    let mut exps = vec![0u16; algebra.dim()];
    for &g in word {
        exps[g] += 1;
    }
    out.add_term(exps, coeff);
}

/// Product in the enveloping algebra, normal-ordered via bracket rewriting.
pub fn uea_mul(algebra: &LieAlgebra, u: &UEnvElement, v: &UEnvElement) -> UEnvElement {
    assert_eq!(u.dim, algebra.dim());
    assert_eq!(v.dim, algebra.dim());
    let mut out = UEnvElement::zero(u.dim);
    for (eu, cu) in &u.terms {
        for (ev, cv) in &v.terms {
            let mut word = word_of(eu);
            word.extend(word_of(ev));
            normal_order_word(algebra, &word, cu.clone() * cv.clone(), &mut out);
        }
    }
    out
}

fn multiset_permutations(word: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = word.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(sorted.clone());
        // next_permutation in place
        let n = sorted.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| sorted[i] < sorted[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| sorted[j] > sorted[i]).unwrap();
        sorted.swap(i, j);
        sorted[i + 1..].reverse();
    }
    out
}

/// The symmetrization map: a monomial of degree k goes to the average of
/// its k! orderings, re-expressed in PBW normal order. Linear, filtration
/// preserving.
pub fn symmetrize(algebra: &LieAlgebra, p: &Polynomial) -> UEnvElement {
    assert_eq!(p.dim(), algebra.dim());
    assert_eq!(p.coords(), Coords::X);
    let mut out = UEnvElement::zero(p.dim());
    for (exps, coeff) in p.terms() {
        let word = word_of(exps);
        let perms = multiset_permutations(&word);
        // Distinct sequences each appear ∏ a_i! times among the k!
        // orderings, so weight them by ∏ a_i!/k!.
        let mut rep = Rat::from_integer(factorial(word.len()));
        for &k in exps {
            rep /= Rat::from_integer(factorial(k as usize));
        }
        let share = coeff.clone() / rep;
        for perm in perms {
            normal_order_word(algebra, &perm, share.clone(), &mut out);
        }
    }
    out
}

/// Inverse of `symmetrize` on polynomial representatives, computed degree
/// by degree using the triangularity of the symmetrization map.
pub fn unsymmetrize(algebra: &LieAlgebra, u: &UEnvElement) -> Polynomial {
    let mut rest = u.clone();
    let mut out = Polynomial::zero(u.dim, Coords::X);
    while !rest.is_zero() {
        let top = rest.symbol_at(rest.degree());
        out = out.add(&top);
        rest = rest.sub(&symmetrize(algebra, &top));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ratio::{rat, ratio};

    fn sl2() -> LieAlgebra {
        fixtures::load_bundled("sl2").unwrap()
    }

    #[test]
    fn pbw_rewriting_examples() {
        let a = sl2();
        // order e < h < f: f·e = ef - h
        let f = UEnvElement::generator(3, 2);
        let e = UEnvElement::generator(3, 0);
        let fe = uea_mul(&a, &f, &e);
        assert_eq!(fe.coeff(&[1, 0, 1]), rat(1));
        assert_eq!(fe.coeff(&[0, 1, 0]), rat(-1));
        assert_eq!(fe.terms().count(), 2);

        // heis3 with order x < y < z: y·x = xy - z
        let h = fixtures::load_bundled("heis3").unwrap();
        let yx = uea_mul(&h, &UEnvElement::generator(3, 1), &UEnvElement::generator(3, 0));
        assert_eq!(yx.coeff(&[1, 1, 0]), rat(1));
        assert_eq!(yx.coeff(&[0, 0, 1]), rat(-1));

        // abelian: uv = vu
        let ab = fixtures::load_bundled("abelian3").unwrap();
        let u = UEnvElement::monomial(3, vec![1, 2, 0], rat(3));
        let v = UEnvElement::monomial(3, vec![0, 1, 1], ratio(1, 2));
        assert_eq!(uea_mul(&ab, &u, &v), uea_mul(&ab, &v, &u));
    }

    #[test]
    fn pbw_associativity_degree_two() {
        let a = sl2();
        let monomials: Vec<UEnvElement> = crate::lie::monomials_up_to(3, 2)
            .into_iter()
            .map(|e| UEnvElement::monomial(3, e, rat(1)))
            .collect();
        for u in &monomials {
            for v in &monomials {
                for w in &monomials {
                    let lhs = uea_mul(&a, &uea_mul(&a, u, v), w);
                    let rhs = uea_mul(&a, u, &uea_mul(&a, v, w));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn symmetrize_examples() {
        let a = sl2();
        // single variable: x_e³ → e³
        let xe3 = Polynomial::monomial(3, Coords::X, vec![3, 0, 0], rat(1));
        assert_eq!(symmetrize(&a, &xe3), UEnvElement::monomial(3, vec![3, 0, 0], rat(1)));
        // x_e·x_f → ef − h/2
        let xef = Polynomial::monomial(3, Coords::X, vec![1, 0, 1], rat(1));
        let s = symmetrize(&a, &xef);
        assert_eq!(s.coeff(&[1, 0, 1]), rat(1));
        assert_eq!(s.coeff(&[0, 1, 0]), ratio(-1, 2));
        assert_eq!(s.terms().count(), 2);
        // unit
        let one = Polynomial::one(3, Coords::X);
        assert_eq!(symmetrize(&a, &one), UEnvElement::unit(3));
    }

    #[test]
    fn unsymmetrize_examples() {
        let a = sl2();
        assert_eq!(unsymmetrize(&a, &UEnvElement::unit(3)), Polynomial::one(3, Coords::X));
        // ef recovers x_e·x_f plus a lower-degree correction consistent
        // with the round trip.
        let ef = UEnvElement::monomial(3, vec![1, 0, 1], rat(1));
        let p = unsymmetrize(&a, &ef);
        assert_eq!(symmetrize(&a, &p), ef);
        assert_eq!(p.graded_component(2), Polynomial::monomial(3, Coords::X, vec![1, 0, 1], rat(1)));
    }

    #[test]
    fn symmetrize_round_trip_through_degree_four() {
        let a = sl2();
        for exps in crate::lie::monomials_up_to(3, 4) {
            let p = Polynomial::monomial(3, Coords::X, exps.clone(), rat(1));
            let u = symmetrize(&a, &p);
            assert_eq!(unsymmetrize(&a, &u), p, "monomial {exps:?}");
            let v = UEnvElement::monomial(3, exps.clone(), rat(1));
            assert_eq!(symmetrize(&a, &unsymmetrize(&a, &v)), v, "PBW {exps:?}");
        }
    }

    #[test]
    fn filtration_degree_is_preserved() {
        let a = sl2();
        let p = fixtures::sl2_casimir();
        let u = symmetrize(&a, &p);
        assert_eq!(u.degree(), 2);
        assert_eq!(u.symbol_at(2), p.graded_component(2));
    }
}
