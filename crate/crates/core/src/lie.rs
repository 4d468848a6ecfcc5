//! Finite-dimensional Lie algebras over the rationals: loading and
//! validation, basis normalization, adjoint machinery and invariant
//! (Casimir) discovery.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diffop::{apply_right_operator, DiffOperator};
use crate::poly::{Coords, Exponents, Polynomial};
use crate::ratio::{parse_rat, rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("antisymmetry conflict for bracket [{a},{b}]: inconsistent with [{b},{a}]")]
    AntisymmetryConflict { a: String, b: String },
    #[error("Jacobi identity fails for basis indices ({i},{j},{k}) in component {l}")]
    JacobiViolation { i: usize, j: usize, k: usize, l: usize },
}

/// A Lie algebra given by exact-rational structure constants on a named
/// basis. Constants are stored sparsely over `i < j` pairs; the
/// antisymmetric completion is computed on lookup, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    basis: Vec<String>,
    /// (i, j) with i < j → list of (k, c_ij^k), each list sorted by k.
    constants: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl LieAlgebra {
    /// Builds and validates an algebra directly from parts. Bracket entries
    /// may use any index order; they are folded to `i < j` storage.
    pub fn new(
        name: &str,
        basis: Vec<String>,
        brackets: Vec<(usize, usize, Vec<(usize, Rat)>)>,
    ) -> Result<Self, AlgebraError> {
        let dim = basis.len();
        let mut constants: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        let mut seen: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for (a, b, terms) in brackets {
            let mut combo: BTreeMap<usize, Rat> = BTreeMap::new();
            for (k, c) in terms {
                let e = combo.entry(k).or_insert_with(Rat::zero);
                *e += c;
            }
            let terms: Vec<(usize, Rat)> =
                combo.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            let (key, stored) = if a < b {
                ((a, b), terms)
            } else {
                ((b, a), terms.into_iter().map(|(k, c)| (k, -c)).collect())
            };
            if let Some(prev) = seen.get(&key) {
                if prev != &stored {
                    return Err(AlgebraError::AntisymmetryConflict {
                        a: basis[key.0].clone(),
                        b: basis[key.1].clone(),
                    });
                }
            } else {
                seen.insert(key, stored.clone());
                if !stored.is_empty() {
                    constants.insert(key, stored);
                }
            }
        }
        let algebra = LieAlgebra {
            name: name.to_string(),
            dim,
            basis,
            constants,
        };
        algebra.check_jacobi()?;
        Ok(algebra)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// `[x_a, x_b]` as a list of `(k, c_ab^k)`.
    pub fn bracket(&self, a: usize, b: usize) -> Vec<(usize, Rat)> {
        if a == b {
            return Vec::new();
        }
        if a < b {
            self.constants.get(&(a, b)).cloned().unwrap_or_default()
        } else {
            self.constants
                .get(&(b, a))
                .map(|v| v.iter().map(|(k, c)| (*k, -c.clone())).collect())
                .unwrap_or_default()
        }
    }

    /// A single structure constant `c_ab^k`.
    pub fn constant(&self, a: usize, b: usize, k: usize) -> Rat {
        self.bracket(a, b)
            .into_iter()
            .find(|(m, _)| *m == k)
            .map(|(_, c)| c)
            .unwrap_or_else(Rat::zero)
    }

    /// `[x_a, x_b]` as a linear polynomial in the X coordinates.
    pub fn bracket_poly(&self, a: usize, b: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.dim, Coords::X);
        for (k, c) in self.bracket(a, b) {
            let mut exps = vec![0u16; self.dim];
            exps[k] = 1;
            p.add_term(exps, c);
        }
        p
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    /// Largest |c_ij^k| over all stored constants (zero for abelian).
    pub fn max_constant(&self) -> Rat {
        let mut max = Rat::zero();
        for terms in self.constants.values() {
            for (_, c) in terms {
                let a = c.abs();
                if a > max {
                    max = a;
                }
            }
        }
        max
    }

    fn check_jacobi(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let mut acc = vec![Rat::zero(); self.dim];
                    for (m, c_ij) in self.bracket(i, j) {
                        for (l, c_mk) in self.bracket(m, k) {
                            acc[l] += c_ij.clone() * c_mk;
                        }
                    }
                    for (m, c_jk) in self.bracket(j, k) {
                        for (l, c_mi) in self.bracket(m, i) {
                            acc[l] += c_jk.clone() * c_mi;
                        }
                    }
                    for (m, c_ki) in self.bracket(k, i) {
                        for (l, c_mj) in self.bracket(m, j) {
                            acc[l] += c_ki.clone() * c_mj;
                        }
                    }
                    if let Some(l) = acc.iter().position(|c| !c.is_zero()) {
                        return Err(AlgebraError::JacobiViolation { i, j, k, l });
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim)
    }
}

/// Parses the algebra file grammar:
///
/// ```text
/// algebra <name>
/// dim <d>
/// basis <id> ... <id>
/// bracket <a> <b> -> <rat> <c> [<rat> <c> ...]
/// ```
///
/// Comments start with `#`; unspecified brackets are zero.
pub fn load_algebra(document: &str) -> Result<LieAlgebra, AlgebraError> {
    let mut name: Option<String> = None;
    let mut dim: Option<usize> = None;
    let mut basis: Vec<String> = Vec::new();
    let mut brackets: Vec<(usize, usize, Vec<(usize, Rat)>)> = Vec::new();

    let err = |line: usize, msg: &str| AlgebraError::Parse {
        line,
        msg: msg.to_string(),
    };

    for (idx, raw) in document.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("algebra") => {
                let value = tokens.next().ok_or_else(|| err(line_no, "missing name"))?;
                if tokens.next().is_some() {
                    return Err(err(line_no, "trailing tokens after algebra name"));
                }
                name = Some(value.to_string());
            }
            Some("dim") => {
                let value = tokens.next().ok_or_else(|| err(line_no, "missing dimension"))?;
                let d: usize = value
                    .parse()
                    .map_err(|_| err(line_no, "dimension is not a positive integer"))?;
                if d == 0 {
                    return Err(err(line_no, "dimension must be positive"));
                }
                dim = Some(d);
            }
            Some("basis") => {
                basis = tokens.map(|t| t.to_string()).collect();
                let mut sorted = basis.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != basis.len() {
                    return Err(err(line_no, "duplicate basis identifier"));
                }
            }
            Some("bracket") => {
                if basis.is_empty() {
                    return Err(err(line_no, "bracket before basis line"));
                }
                let a_name = tokens.next().ok_or_else(|| err(line_no, "missing bracket operand"))?;
                let b_name = tokens.next().ok_or_else(|| err(line_no, "missing bracket operand"))?;
                let arrow = tokens.next().ok_or_else(|| err(line_no, "missing '->'"))?;
                if arrow != "->" {
                    return Err(err(line_no, "expected '->'"));
                }
                let a = basis
                    .iter()
                    .position(|b| b == a_name)
                    .ok_or_else(|| err(line_no, "unknown basis identifier"))?;
                let b = basis
                    .iter()
                    .position(|x| x == b_name)
                    .ok_or_else(|| err(line_no, "unknown basis identifier"))?;
                if a == b {
                    return Err(err(line_no, "bracket of an element with itself"));
                }
                let rest: Vec<&str> = tokens.collect();
                if rest.is_empty() || rest.len() % 2 != 0 {
                    return Err(err(line_no, "bracket needs coefficient/element pairs"));
                }
                let mut terms = Vec::new();
                for pair in rest.chunks(2) {
                    let c = parse_rat(pair[0])
                        .ok_or_else(|| err(line_no, "malformed rational coefficient"))?;
                    let k = basis
                        .iter()
                        .position(|x| x == pair[1])
                        .ok_or_else(|| err(line_no, "unknown basis identifier"))?;
                    terms.push((k, c));
                }
                brackets.push((a, b, terms));
            }
            Some(other) => {
                return Err(err(line_no, &format!("unknown directive '{other}'")));
            }
            None => unreachable!(),
        }
    }

    let name = name.ok_or_else(|| err(0, "missing 'algebra' line"))?;
    let dim = dim.ok_or_else(|| err(0, "missing 'dim' line"))?;
    if basis.len() != dim {
        return Err(err(0, "basis size does not match dim"));
    }
    LieAlgebra::new(&name, basis, brackets_to_indices(brackets))
}

fn brackets_to_indices(
    brackets: Vec<(usize, usize, Vec<(usize, Rat)>)>,
) -> Vec<(usize, usize, Vec<(usize, Rat)>)> {
    brackets
}

/// Rescales the basis `x_i → λ·x_i` with λ the largest power of two such
/// that all structure constants stay within `|c| ≤ 2` (constants scale by
/// λ). Powers of two keep rational denominators small; for a nonabelian
/// algebra the maximal choice also forces `max |c| > 1`.
pub fn normalize_constants(algebra: &LieAlgebra) -> (LieAlgebra, Rat) {
    let max = algebra.max_constant();
    if max.is_zero() {
        return (algebra.clone(), Rat::one());
    }
    let two = rat(2);
    let mut scale = Rat::one();
    while scale.clone() * &max > two {
        scale /= &two;
    }
    while scale.clone() * &max * &two <= two {
        scale *= &two;
    }
    let constants = algebra
        .constants
        .iter()
        .map(|(key, terms)| {
            (
                *key,
                terms
                    .iter()
                    .map(|(k, c)| (*k, c.clone() * &scale))
                    .collect(),
            )
        })
        .collect();
    (
        LieAlgebra {
            name: algebra.name.clone(),
            dim: algebra.dim,
            basis: algebra.basis.clone(),
            constants,
        },
        scale,
    )
}

/// The symbolic adjoint matrix `M(x)` with `(ad x)(x_j) = Σ_k M_kj x_k`:
/// `M[k][j] = Σ_i c_ij^k x_i`, linear in the coordinates of `x`.
pub fn adjoint_matrix(algebra: &LieAlgebra) -> Vec<Vec<Polynomial>> {
    let d = algebra.dim;
    let mut m = vec![vec![Polynomial::zero(d, Coords::X); d]; d];
    for i in 0..d {
        for j in 0..d {
            for (k, c) in algebra.bracket(i, j) {
                let mut exps = vec![0u16; d];
                exps[i] = 1;
                m[k][j].add_term(exps, c);
            }
        }
    }
    m
}

/// `tr[(ad x)^(2k)]` as a homogeneous polynomial of degree 2k.
pub fn trace_power_poly(algebra: &LieAlgebra, k: usize) -> Polynomial {
    assert!(k >= 1);
    let d = algebra.dim;
    let m = adjoint_matrix(algebra);
    let mut power = m.clone();
    for _ in 1..(2 * k) {
        power = poly_mat_mul(&power, &m, d);
    }
    let mut tr = Polynomial::zero(d, Coords::X);
    for (i, row) in power.iter().enumerate() {
        tr = tr.add(&row[i]);
    }
    tr
}

fn poly_mat_mul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>], d: usize) -> Vec<Vec<Polynomial>> {
    let mut out = vec![vec![Polynomial::zero(d, Coords::X); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = Polynomial::zero(d, Coords::X);
            for l in 0..d {
                if a[i][l].is_zero() || b[l][j].is_zero() {
                    continue;
                }
                acc = acc.add(&a[i][l].mul(&b[l][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// The adjoint vector field of the basis element `x_a`, as a first-order
/// operator with linear coefficients: `adj_a = -Σ_{j,k} c_aj^k y_j ∂_{y_k}`.
/// The sign follows the generator of `f(exp(-ta)·x)`; with the pairing
/// convention of this crate its right action on the symmetric algebra is the
/// Poisson bracket `p ↦ {p, x_a}`, so Casimir elements are annihilated.
pub fn adjoint_field(algebra: &LieAlgebra, a: usize) -> DiffOperator {
    assert!(a < algebra.dim);
    let d = algebra.dim;
    let mut op = DiffOperator::zero(d);
    for j in 0..d {
        for (k, c) in algebra.bracket(a, j) {
            let mut beta = vec![0u16; d];
            beta[k] = 1;
            let coeff = Polynomial::var(d, Coords::Y, j).scale(&-c);
            op.add_term(beta, coeff);
        }
    }
    op
}

/// Whether `p · adj_a = 0` for every basis element `a` (distribution-side
/// invariance).
pub fn is_invariant(algebra: &LieAlgebra, p: &Polynomial) -> bool {
    assert_eq!(p.dim(), algebra.dim);
    (0..algebra.dim).all(|a| apply_right_operator(p, &adjoint_field(algebra, a)).is_zero())
}

/// Whether `adj_a(f) = 0` for every basis element `a` (function-side
/// invariance, for polynomials in the Y family).
pub fn is_invariant_function(algebra: &LieAlgebra, f: &Polynomial) -> bool {
    assert_eq!(f.dim(), algebra.dim);
    (0..algebra.dim).all(|a| adjoint_field(algebra, a).apply_left(f).is_zero())
}

/// A rational basis of the invariants of degree at most `degree_bound`.
#[derive(Debug, Clone)]
pub struct InvariantBasis {
    pub degree_bound: usize,
    pub elements: Vec<Polynomial>,
}

impl InvariantBasis {
    /// Exact span-membership test against this basis.
    pub fn contains(&self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return true;
        }
        let mut monomials: Vec<Exponents> = Vec::new();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut index = BTreeMap::new();
        let column = |e: &Exponents,
                          monomials: &mut Vec<Exponents>,
                          index: &mut BTreeMap<Exponents, usize>| {
            *index.entry(e.clone()).or_insert_with(|| {
                monomials.push(e.clone());
                monomials.len() - 1
            })
        };
        for b in &self.elements {
            let mut row = Vec::new();
            for (e, c) in b.terms() {
                let col = column(e, &mut monomials, &mut index);
                if row.len() <= col {
                    row.resize(col + 1, Rat::zero());
                }
                row[col] = c.clone();
            }
            rows.push(row);
        }
        let mut target = Vec::new();
        for (e, c) in p.terms() {
            if !index.contains_key(e) {
                return false;
            }
            let col = index[e];
            if target.len() <= col {
                target.resize(col + 1, Rat::zero());
            }
            target[col] = c.clone();
        }
        let width = monomials.len();
        for row in rows.iter_mut().chain(std::iter::once(&mut target)) {
            row.resize(width, Rat::zero());
        }
        // p is in the span iff appending it does not raise the rank.
        let base_rank = rank(rows.clone());
        rows.push(target);
        rank(rows) == base_rank
    }
}

fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let height = rows.len();
    if height == 0 {
        return 0;
    }
    let width = rows[0].len();
    let mut r = 0;
    for col in 0..width {
        let Some(pivot) = (r..height).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][col].clone().recip();
        for c in col..width {
            let v = rows[r][c].clone() * &inv;
            rows[r][c] = v;
        }
        for i in 0..height {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in col..width {
                    let v = rows[i][c].clone() - factor.clone() * &rows[r][c];
                    rows[i][c] = v;
                }
            }
        }
        r += 1;
        if r == height {
            break;
        }
    }
    r
}

/// All exponent vectors of total degree ≤ `bound`, graded then lexicographic.
pub fn monomials_up_to(dim: usize, bound: usize) -> Vec<Exponents> {
    let mut out = Vec::new();
    for total in 0..=bound {
        let mut current = vec![0u16; dim];
        fill(dim, 0, total, &mut current, &mut out);
    }
    fn fill(dim: usize, pos: usize, left: usize, current: &mut Vec<u16>, out: &mut Vec<Exponents>) {
        if pos + 1 == dim {
            current[pos] = left as u16;
            out.push(current.clone());
            current[pos] = 0;
            return;
        }
        for take in (0..=left).rev() {
            current[pos] = take as u16;
            fill(dim, pos + 1, left - take, current, out);
        }
        current[pos] = 0;
    }
    out
}

/// Exact-rational basis of the joint kernel of all adjoint fields on the
/// polynomials of degree at most `degree_bound`.
pub fn find_invariants(algebra: &LieAlgebra, degree_bound: usize) -> InvariantBasis {
    let d = algebra.dim;
    let monomials = monomials_up_to(d, degree_bound);
    let fields: Vec<DiffOperator> = (0..d).map(|a| adjoint_field(algebra, a)).collect();

    // Stack the matrices of all adjoint actions; kernel columns are the
    // simultaneous invariants. The image of a degree-k monomial stays in
    // degree k, so all output monomials are already in the column set.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for field in &fields {
        let mut images: Vec<Polynomial> = Vec::with_capacity(monomials.len());
        for e in &monomials {
            let p = Polynomial::monomial(d, Coords::X, e.clone(), Rat::one());
            images.push(apply_right_operator(&p, field));
        }
        let mut out_monomials: Vec<Exponents> = Vec::new();
        let mut out_index: BTreeMap<Exponents, usize> = BTreeMap::new();
        for img in &images {
            for (e, _) in img.terms() {
                out_index.entry(e.clone()).or_insert_with(|| {
                    out_monomials.push(e.clone());
                    out_monomials.len() - 1
                });
            }
        }
        let mut block = vec![vec![Rat::zero(); monomials.len()]; out_monomials.len()];
        for (col, img) in images.iter().enumerate() {
            for (e, c) in img.terms() {
                block[out_index[e]][col] = c.clone();
            }
        }
        rows.extend(block);
    }

    let kernel = nullspace(rows, monomials.len());
    let elements = kernel
        .into_iter()
        .map(|vec| {
            let mut p = Polynomial::zero(d, Coords::X);
            for (col, c) in vec.into_iter().enumerate() {
                if !c.is_zero() {
                    p.add_term(monomials[col].clone(), c);
                }
            }
            p
        })
        .collect();
    InvariantBasis {
        degree_bound,
        elements,
    }
}

/// Kernel basis of a rational matrix, via reduced row echelon form.
fn nullspace(mut rows: Vec<Vec<Rat>>, width: usize) -> Vec<Vec<Rat>> {
    let height = rows.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; width];
    let mut r = 0;
    for col in 0..width {
        let Some(pivot) = (r..height).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][col].clone().recip();
        for c in col..width {
            let v = rows[r][c].clone() * &inv;
            rows[r][c] = v;
        }
        for i in 0..height {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in col..width {
                    let v = rows[i][c].clone() - factor.clone() * &rows[r][c];
                    rows[i][c] = v;
                }
            }
        }
        pivot_of_col[col] = Some(r);
        r += 1;
        if r == height {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..width {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); width];
        v[free] = Rat::one();
        for col in 0..width {
            if let Some(pr) = pivot_of_col[col] {
                v[col] = -rows[pr][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ratio::ratio;

    fn sl2() -> LieAlgebra {
        fixtures::load_bundled("sl2").unwrap()
    }

    fn heis3() -> LieAlgebra {
        fixtures::load_bundled("heis3").unwrap()
    }

    fn abelian3() -> LieAlgebra {
        fixtures::load_bundled("abelian3").unwrap()
    }

    fn solv2() -> LieAlgebra {
        fixtures::load_bundled("solv2").unwrap()
    }

    #[test]
    fn loads_sl2() {
        let a = sl2();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.basis(), ["e", "h", "f"]);
        // [h,e] = 2e with h index 1, e index 0
        assert_eq!(a.constant(1, 0, 0), rat(2));
        assert_eq!(a.constant(0, 1, 0), rat(-2));
        assert_eq!(a.constant(0, 2, 1), rat(1));
    }

    #[test]
    fn abelian_file_loads_with_zero_constants() {
        let a = abelian3();
        assert!(a.is_abelian());
        assert_eq!(a.dim(), 3);
    }

    #[test]
    fn antisymmetry_conflict_is_reported() {
        let doc = "algebra bad\ndim 3\nbasis e h f\nbracket e f -> 1 h\nbracket f e -> 1 h\n";
        assert_eq!(
            load_algebra(doc),
            Err(AlgebraError::AntisymmetryConflict {
                a: "e".into(),
                b: "f".into()
            })
        );
        // A consistent restatement is fine.
        let doc = "algebra ok\ndim 3\nbasis e h f\nbracket e f -> 1 h\nbracket f e -> -1 h\n";
        assert!(load_algebra(doc).is_ok());
    }

    #[test]
    fn jacobi_violation_is_reported() {
        let doc =
            "algebra bad\ndim 3\nbasis a b c\nbracket a b -> 1 a\nbracket b c -> 1 c\nbracket a c -> 1 c\n";
        match load_algebra(doc) {
            Err(AlgebraError::JacobiViolation { .. }) => {}
            other => panic!("expected Jacobi violation, got {other:?}"),
        }
    }

    #[test]
    fn normalization_scales_by_powers_of_two() {
        let (n, scale) = normalize_constants(&sl2());
        assert_eq!(scale, rat(1));
        assert_eq!(n.max_constant(), rat(2));

        // sl2 with constants ×10: the largest power of two keeping
        // |λ·c| ≤ 2 is 1/16, landing at max 20/16 = 5/4 > 1.
        let doc = "algebra big\ndim 3\nbasis e h f\nbracket h e -> 20 e\nbracket h f -> -20 f\nbracket e f -> 10 h\n";
        let big = load_algebra(doc).unwrap();
        let (n, scale) = normalize_constants(&big);
        assert_eq!(scale, ratio(1, 16));
        assert_eq!(n.max_constant(), ratio(5, 4));
        assert!(n.max_constant() > rat(1));

        let (_, scale) = normalize_constants(&abelian3());
        assert_eq!(scale, rat(1));

        // heis3 has max constant 1; maximal λ doubles it.
        let (n, scale) = normalize_constants(&heis3());
        assert_eq!(scale, rat(2));
        assert_eq!(n.max_constant(), rat(2));
    }

    #[test]
    fn trace_power_examples() {
        // abelian and nilpotent algebras have vanishing trace powers
        for k in 1..=3 {
            assert!(trace_power_poly(&abelian3(), k).is_zero());
            assert!(trace_power_poly(&heis3(), k).is_zero());
        }
        // sl2: tr[(ad x)²] = 8·x_h² + 8·x_e·x_f
        let t = trace_power_poly(&sl2(), 1);
        let names: Vec<String> = ["e", "h", "f"].iter().map(|s| s.to_string()).collect();
        assert_eq!(t.display(&names), "8*e*f + 8*h^2");
    }

    #[test]
    fn adjoint_field_examples() {
        let a = sl2();
        // right action of adj_h on x_e is -2·x_e under this sign convention
        let xe = Polynomial::var(3, Coords::X, 0);
        let adj_h = adjoint_field(&a, 1);
        assert_eq!(apply_right_operator(&xe, &adj_h), xe.scale(&rat(-2)));
        // abelian: zero operator
        assert!(adjoint_field(&abelian3(), 0).is_zero());
        // heis3: x_y · adj_x = -x_z
        let h = heis3();
        let xy = Polynomial::var(3, Coords::X, 1);
        let xz = Polynomial::var(3, Coords::X, 2);
        assert_eq!(
            apply_right_operator(&xy, &adjoint_field(&h, 0)),
            xz.scale(&rat(-1))
        );
    }

    #[test]
    fn invariance_examples() {
        let a = sl2();
        let casimir = fixtures::sl2_casimir();
        assert!(is_invariant(&a, &casimir));
        assert!(!is_invariant(&a, &Polynomial::var(3, Coords::X, 0)));
        // everything is invariant over an abelian algebra
        let p = Polynomial::var(3, Coords::X, 0).mul(&Polynomial::var(3, Coords::X, 2));
        assert!(is_invariant(&abelian3(), &p));
    }

    #[test]
    fn invariant_bases() {
        // sl2 degree 2: span{1, 4ef + h²}
        let inv = find_invariants(&sl2(), 2);
        assert_eq!(inv.elements.len(), 2);
        for p in &inv.elements {
            assert!(is_invariant(&sl2(), p));
        }
        assert!(inv.contains(&fixtures::sl2_casimir()));
        assert!(inv.contains(&Polynomial::one(3, Coords::X)));
        assert!(!inv.contains(&Polynomial::var(3, Coords::X, 0)));

        // heis3 degree 1: span{1, x_z}
        let inv = find_invariants(&heis3(), 1);
        assert_eq!(inv.elements.len(), 2);
        assert!(inv.contains(&Polynomial::var(3, Coords::X, 2)));

        // abelian degree 2: all ten monomials
        let inv = find_invariants(&abelian3(), 2);
        assert_eq!(inv.elements.len(), 10);
    }

    #[test]
    fn invariants_close_under_multiplication() {
        let inv = find_invariants(&sl2(), 4);
        for a in &inv.elements {
            for b in &inv.elements {
                if a.degree() + b.degree() <= 4 {
                    assert!(inv.contains(&a.mul(b)));
                }
            }
        }
    }

    #[test]
    fn trace_powers_are_invariant_functions() {
        // tr[(ad x)^{2k}] is an invariant function on the algebra, for
        // every bundled algebra. (As a distribution its coefficients would
        // need the inverse-form rescaling, so only the identically-zero
        // cases are also distribution-side invariant.)
        for algebra in [sl2(), heis3(), abelian3(), solv2()] {
            for k in 1..=3 {
                let t = trace_power_poly(&algebra, k).retag(Coords::Y);
                assert!(is_invariant_function(&algebra, &t), "{} k={k}", algebra.name());
            }
        }
        for algebra in [heis3(), abelian3()] {
            for k in 1..=3 {
                let t = trace_power_poly(&algebra, k);
                assert!(is_invariant(&algebra, &t));
            }
        }
    }

    #[test]
    fn adjoint_fields_are_derivations() {
        // Right action satisfies the Leibniz rule on products.
        let a = sl2();
        let p = Polynomial::var(3, Coords::X, 0)
            .mul(&Polynomial::var(3, Coords::X, 1))
            .add(&Polynomial::var(3, Coords::X, 2));
        let q = Polynomial::var(3, Coords::X, 2)
            .mul(&Polynomial::var(3, Coords::X, 2))
            .add(&Polynomial::one(3, Coords::X).scale(&ratio(1, 3)));
        for i in 0..3 {
            let field = adjoint_field(&a, i);
            let lhs = apply_right_operator(&p.mul(&q), &field);
            let rhs = apply_right_operator(&p, &field)
                .mul(&q)
                .add(&p.mul(&apply_right_operator(&q, &field)));
            assert_eq!(lhs, rhs);
        }
    }
}
