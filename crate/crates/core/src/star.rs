//! The star product: compiles admissible graphs into bidifferential
//! operators, evaluates the (possibly truncated) product on polynomials,
//! extracts the right convolution operator of a distribution, and checks
//! the coefficient growth bound.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diffop::DiffOperator;
use crate::graphs::{encode, enumerate_graphs_with_ceiling, AdmissibleGraph, GraphClass, Target};
use crate::lie::LieAlgebra;
use crate::poly::{Coords, Exponents, Polynomial};
use crate::ratio::{factorial, rat, ratio, Rat};
use crate::weights::WeightTable;

#[derive(Debug, Error, PartialEq)]
pub enum StarError {
    #[error("weight table does not cover graph order {missing_order}")]
    CoverageInsufficient { missing_order: usize },
    #[error("weight table has no entry for graph {0}")]
    TableIncomplete(String),
    #[error("algebra must satisfy the normalization |c| ≤ 2 (max is {0})")]
    AlgebraNotNormalized(String),
    #[error("graph order {n} exceeds the resource ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("graph {0} is not in the out-degree-two class")]
    NotClassG(String),
}

/// Evaluation context: a normalized algebra, an exact weight table and the
/// graph-order ceiling it covers. Immutable and safe to share.
pub struct StarContext {
    algebra: LieAlgebra,
    max_n: usize,
    /// Per order n ≤ max_n: the graphs of the linear-case class with their
    /// exact weights, in encoding order.
    orders: Vec<Vec<(AdmissibleGraph, Rat)>>,
    /// Nonzero ordered index pairs (i, j, [x_i, x_j]) of the algebra.
    pairs: Vec<(usize, usize, Vec<(usize, Rat)>)>,
    table_provenance: String,
}

impl StarContext {
    pub fn new(algebra: LieAlgebra, table: &WeightTable, max_n: usize) -> Result<Self, StarError> {
        let max_c = algebra.max_constant();
        if max_c > rat(2) {
            return Err(StarError::AlgebraNotNormalized(
                crate::ratio::fmt_rat(&max_c),
            ));
        }
        if max_n > table.max_order() {
            return Err(StarError::CoverageInsufficient {
                missing_order: table.max_order() + 1,
            });
        }
        let mut orders = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let graphs = enumerate_graphs_with_ceiling(n, GraphClass::A, max_n.max(5))
                .map_err(|_| StarError::CeilingExceeded { n, ceiling: 5 })?;
            let mut with_weights = Vec::with_capacity(graphs.len());
            for g in graphs {
                let key = encode(&g);
                let w = table
                    .get(&key)
                    .ok_or_else(|| StarError::TableIncomplete(key.clone()))?;
                with_weights.push((g, w.clone()));
            }
            orders.push(with_weights);
        }
        let d = algebra.dim();
        let mut pairs = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let b = algebra.bracket(i, j);
                if !b.is_empty() {
                    pairs.push((i, j, b));
                }
            }
        }
        Ok(StarContext {
            algebra,
            max_n,
            orders,
            pairs,
            table_provenance: table.provenance_summary(),
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn table_provenance(&self) -> &str {
        &self.table_provenance
    }

    pub fn graphs_of_order(&self, n: usize) -> &[(AdmissibleGraph, Rat)] {
        &self.orders[n]
    }
}

/// Where each of a vertex's two edges points, with the chosen coordinate
/// labels of the edges.
struct Assignment {
    /// (i_v, j_v) per first-type vertex.
    choices: Vec<(usize, usize)>,
}

fn edge_label(assignment: &Assignment, src: usize, idx: usize) -> usize {
    let (i, j) = assignment.choices[src];
    if idx == 0 {
        i
    } else {
        j
    }
}

/// Sparse iteration over all edge labelings: every edge starts at a
/// first-type vertex, so a labeling is a choice of an ordered index pair
/// with a nonvanishing bracket at every vertex.
fn for_each_assignment<F: FnMut(&Assignment)>(ctx: &StarContext, n: usize, mut f: F) {
    if ctx.pairs.is_empty() && n > 0 {
        return;
    }
    let mut choices = vec![0usize; n];
    loop {
        let assignment = Assignment {
            choices: choices
                .iter()
                .map(|&c| {
                    let (i, j, _) = ctx.pairs[c];
                    (i, j)
                })
                .collect(),
        };
        f(&assignment);
        // odometer
        let mut pos = 0;
        loop {
            if pos == n {
                return;
            }
            choices[pos] += 1;
            if choices[pos] < ctx.pairs.len() {
                break;
            }
            choices[pos] = 0;
            pos += 1;
        }
        if n == 0 {
            return;
        }
    }
}

/// Half the bracket `[x_i, x_j]`, the bivector component as a linear
/// polynomial.
fn gamma_poly(ctx: &StarContext, i: usize, j: usize) -> Polynomial {
    ctx.algebra.bracket_poly(i, j).scale(&ratio(1, 2))
}

/// Derivative of the bivector component by a single coordinate label.
fn gamma_deriv(ctx: &StarContext, i: usize, j: usize, by: usize) -> Rat {
    ctx.algebra.constant(i, j, by) * ratio(1, 2)
}

/// The bidifferential operator of one graph applied to two polynomials:
/// the sum over edge labelings of products of differentiated bivector
/// components and differentiated arguments. Zero whenever a first-type
/// vertex receives two or more edges, since the components are linear.
pub fn b_gamma(
    g: &AdmissibleGraph,
    ctx: &StarContext,
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<Polynomial, StarError> {
    if !g.is_class_g() {
        return Err(StarError::NotClassG(encode(g)));
    }
    let d = ctx.algebra.dim();
    let n = g.n();
    let edges = g.edges();
    let mut acc = Polynomial::zero(d, Coords::X);
    for_each_assignment(ctx, n, |assignment| {
        // labels of incoming edges per sink
        let mut into_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut into_f1: Vec<u16> = vec![0; d];
        let mut into_f2: Vec<u16> = vec![0; d];
        for (pos, &(src, tgt)) in edges.iter().enumerate() {
            let idx = pos - edges[..pos].iter().position(|&(s, _)| s == src).unwrap_or(pos);
            let label = edge_label(assignment, src, idx);
            match tgt {
                Target::First(v) => into_vertex[v].push(label),
                Target::Second(0) => into_f1[label] += 1,
                Target::Second(_) => into_f2[label] += 1,
            }
        }
        let mut coeff = Rat::one();
        let mut polys: Vec<Polynomial> = Vec::new();
        for v in 0..n {
            let (i, j) = assignment.choices[v];
            match into_vertex[v].len() {
                0 => polys.push(gamma_poly(ctx, i, j)),
                1 => {
                    let c = gamma_deriv(ctx, i, j, into_vertex[v][0]);
                    if c.is_zero() {
                        return;
                    }
                    coeff *= c;
                }
                _ => return, // linear components vanish after two derivatives
            }
        }
        let df1 = f1.derivative_multi(&into_f1);
        if df1.is_zero() {
            return;
        }
        let df2 = f2.derivative_multi(&into_f2);
        if df2.is_zero() {
            return;
        }
        let mut term = df1.mul(&df2).scale(&coeff);
        for p in &polys {
            term = term.mul(p);
        }
        acc = acc.add(&term);
    });
    Ok(acc)
}

/// Star product result with its truncation tag: graded components of total
/// degree at least `exact_from_degree` are exact for the context's graph
/// order ceiling; lower components are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedStar {
    pub poly: Polynomial,
    pub exact_from_degree: usize,
    pub orders_used: usize,
}

fn star_orders(
    f1: &Polynomial,
    f2: &Polynomial,
    ctx: &StarContext,
    up_to: usize,
) -> Result<Polynomial, StarError> {
    use rayon::prelude::*;
    let d = ctx.algebra.dim();
    let mut acc = Polynomial::zero(d, Coords::X);
    for n in 0..=up_to {
        // Parallel over the graphs of one order; the reduction folds the
        // contributions in canonical graph order (exact arithmetic makes
        // any order equivalent, the fixed order keeps it reviewable).
        let terms: Vec<Polynomial> = ctx
            .graphs_of_order(n)
            .par_iter()
            .map(|(g, w)| {
                if w.is_zero() {
                    Ok(Polynomial::zero(d, Coords::X))
                } else {
                    Ok(b_gamma(g, ctx, f1, f2)?.scale(w))
                }
            })
            .collect::<Result<_, StarError>>()?;
        let mut level = Polynomial::zero(d, Coords::X);
        for term in terms {
            level = level.add(&term);
        }
        let scale = Rat::one() / Rat::from_integer(factorial(n));
        acc = acc.add(&level.scale(&scale));
    }
    Ok(acc)
}

/// The full star product. The graph orders needed run up to
/// `deg f1 + deg f2`; if the table does not reach, the error names the
/// first missing order.
pub fn star(f1: &Polynomial, f2: &Polynomial, ctx: &StarContext) -> Result<Polynomial, StarError> {
    let l = f1.degree() + f2.degree();
    if l > ctx.max_n {
        return Err(StarError::CoverageInsufficient {
            missing_order: ctx.max_n + 1,
        });
    }
    star_orders(f1, f2, ctx, l)
}

/// Star product truncated to the context's order ceiling. Only the graded
/// components that are exact at this ceiling are returned.
pub fn star_truncated(
    f1: &Polynomial,
    f2: &Polynomial,
    ctx: &StarContext,
) -> Result<TruncatedStar, StarError> {
    let l = f1.degree() + f2.degree();
    let up_to = l.min(ctx.max_n);
    let raw = star_orders(f1, f2, ctx, up_to)?;
    let exact_from = l - up_to;
    Ok(TruncatedStar {
        poly: raw.truncate_below(exact_from),
        exact_from_degree: exact_from,
        orders_used: up_to,
    })
}

/// The right operator of a distribution, together with its truncation tag.
#[derive(Debug, Clone)]
pub struct ExtractedOperator {
    pub op: DiffOperator,
    pub orders_included: usize,
    pub p_degree: usize,
}

/// One graph's contribution to the right operator of `p`: the operator
/// `∂_Γ^p` with `B_Γ(r, p) = r·∂_Γ^p`. Built through the anti-isomorphism:
/// edges into the first ground slot become coordinate multiplications, and
/// the polynomial factor (bivector components times the differentiated `p`)
/// becomes the derivative part.
fn graph_right_operator(
    g: &AdmissibleGraph,
    ctx: &StarContext,
    p: &Polynomial,
) -> Result<DiffOperator, StarError> {
    if !g.is_class_g() {
        return Err(StarError::NotClassG(encode(g)));
    }
    let d = ctx.algebra.dim();
    let n = g.n();
    let edges = g.edges();
    let mut op = DiffOperator::zero(d);
    for_each_assignment(ctx, n, |assignment| {
        let mut into_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut into_r: Vec<u16> = vec![0; d];
        let mut into_p: Vec<u16> = vec![0; d];
        for (pos, &(src, tgt)) in edges.iter().enumerate() {
            let idx = pos - edges[..pos].iter().position(|&(s, _)| s == src).unwrap_or(pos);
            let label = edge_label(assignment, src, idx);
            match tgt {
                Target::First(v) => into_vertex[v].push(label),
                Target::Second(0) => into_r[label] += 1,
                Target::Second(_) => into_p[label] += 1,
            }
        }
        let mut coeff = Rat::one();
        let mut factor = p.derivative_multi(&into_p);
        if factor.is_zero() {
            return;
        }
        for v in 0..n {
            let (i, j) = assignment.choices[v];
            match into_vertex[v].len() {
                0 => factor = factor.mul(&gamma_poly(ctx, i, j)),
                1 => {
                    let c = gamma_deriv(ctx, i, j, into_vertex[v][0]);
                    if c.is_zero() {
                        return;
                    }
                    coeff *= c;
                }
                _ => return,
            }
            if factor.is_zero() {
                return;
            }
        }
        // r·(factor(x)·∂_x^into_r) = r·(y^into_r · factor(∂_y)) on the
        // distribution side: derivative multi-indices come from the factor
        // monomials, the coefficient is y^into_r.
        for (alpha, c) in factor.terms() {
            let coeff_poly = Polynomial::monomial(d, Coords::Y, into_r.clone(), c.clone() * &coeff);
            op.add_term(alpha.clone(), coeff_poly);
        }
    });
    Ok(op)
}

fn right_operator_orders(
    p: &Polynomial,
    ctx: &StarContext,
    up_to: usize,
) -> Result<DiffOperator, StarError> {
    use rayon::prelude::*;
    let d = ctx.algebra.dim();
    let mut op = DiffOperator::zero(d);
    for n in 0..=up_to {
        let terms: Vec<DiffOperator> = ctx
            .graphs_of_order(n)
            .par_iter()
            .map(|(g, w)| {
                if w.is_zero() {
                    Ok(DiffOperator::zero(d))
                } else {
                    Ok(graph_right_operator(g, ctx, p)?.scale(w))
                }
            })
            .collect::<Result<_, StarError>>()?;
        let mut level = DiffOperator::zero(d);
        for term in terms {
            level = level.add(&term);
        }
        let scale = Rat::one() / Rat::from_integer(factorial(n));
        op = op.add(&level.scale(&scale));
    }
    Ok(op)
}

/// The right operator `∂_p^⋆` with `r ⋆ p = r·∂_p^⋆`, with coefficient
/// polynomials truncated at degree `coeff_degree_cap`. Requires table
/// coverage through order `deg p + coeff_degree_cap`; the defining identity
/// then holds exactly for all `r` of degree ≤ cap.
pub fn extract_right_operator(
    p: &Polynomial,
    ctx: &StarContext,
    coeff_degree_cap: usize,
) -> Result<ExtractedOperator, StarError> {
    let l = p.degree();
    let needed = l + coeff_degree_cap;
    if needed > ctx.max_n {
        return Err(StarError::CoverageInsufficient {
            missing_order: ctx.max_n + 1,
        });
    }
    let raw = right_operator_orders(p, ctx, needed)?;
    let mut op = DiffOperator::zero(raw.dim());
    for (beta, coeff) in raw.terms() {
        op.add_term(beta.clone(), coeff.truncate_above(coeff_degree_cap));
    }
    Ok(ExtractedOperator {
        op,
        orders_included: needed,
        p_degree: l,
    })
}

/// The right operator built from every order the context covers, without a
/// coefficient cap. The defining identity holds on the graded components
/// determined by those orders.
pub fn extract_right_operator_truncated(
    p: &Polynomial,
    ctx: &StarContext,
) -> Result<ExtractedOperator, StarError> {
    let op = right_operator_orders(p, ctx, ctx.max_n)?;
    Ok(ExtractedOperator {
        op,
        orders_included: ctx.max_n,
        p_degree: p.degree(),
    })
}

/// Result of the coefficient growth check for one monomial.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// Largest ratio |c_αβ| / (C'_p·(32e)^{|α|}) seen, as an exact rational
    /// (e replaced by a rational bound; values below use a lower bound for
    /// e on the right-hand side, which only strengthens the check).
    pub max_ratio: Rat,
    pub entries_checked: usize,
    pub all_within: bool,
    /// Orders covered exactly by the weight table.
    pub orders_exact: usize,
    /// Orders covered by the |w| ≤ 4^n certificate.
    pub orders_certified: usize,
}

/// Rational lower bound for e; using it on the right-hand side of the
/// growth inequality makes the verified bound slightly stronger than the
/// analytic one.
fn e_lower() -> Rat {
    ratio(2718281828, 1_000_000_000)
}

/// Verifies `|c_αβ| ≤ C'_p·(32e)^{|α|}` for every coefficient of `∂_p^⋆`,
/// through the table's exact orders plus certified bounds (|w_Γ| ≤ 4^n)
/// up to `certified_order`. `p` is handled monomial by monomial.
pub fn coefficient_bound_report(
    p: &Polynomial,
    ctx: &StarContext,
    certified_order: usize,
) -> Result<BoundReport, StarError> {
    let d = ctx.algebra.dim();
    let mut max_ratio = Rat::zero();
    let mut entries = 0usize;
    let mut all_within = true;
    let e_lo = e_lower();

    for (a, coeff_mono) in p.terms() {
        let l: usize = a.iter().map(|&x| x as usize).sum();
        let mono = Polynomial::monomial(d, Coords::X, a.clone(), coeff_mono.clone());
        let mut c_p = Rat::one();
        for &ai in a {
            c_p *= Rat::from_integer(factorial(ai as usize));
        }
        c_p *= coeff_mono.abs();
        let c_p_prime = c_p.clone() * (rat(32) * &e_lo).pow(l as i32);

        // |c_αβ| per (α, β): the pair determines the single contributing
        // order m = l + |α| − |β|. Exact where the table reaches, otherwise
        // bounded through the weight estimate |w| ≤ 4^m.
        let mut bound_of: std::collections::BTreeMap<(Exponents, Exponents), Rat> =
            std::collections::BTreeMap::new();

        let exact = right_operator_orders(&mono, ctx, ctx.max_n)?;
        for (beta, coeff) in exact.terms() {
            for (alpha, c) in coeff.terms() {
                let key = (alpha.clone(), beta.clone());
                let e = bound_of.entry(key).or_insert_with(Rat::zero);
                *e += c.abs();
            }
        }
        for m in (ctx.max_n + 1)..=certified_order {
            use rayon::prelude::*;
            let graphs = enumerate_graphs_with_ceiling(m, GraphClass::A, certified_order.max(5))
                .map_err(|_| StarError::CeilingExceeded {
                    n: m,
                    ceiling: certified_order.max(5),
                })?;
            let cap = rat(4).pow(m as i32) / Rat::from_integer(factorial(m));
            let per_graph: Vec<Vec<((Exponents, Exponents), Rat)>> = graphs
                .par_iter()
                .map(|g| {
                    let op = graph_right_operator(g, ctx, &mono)?;
                    let mut out = Vec::new();
                    for (beta, coeff) in op.terms() {
                        for (alpha, c) in coeff.terms() {
                            out.push(((alpha.clone(), beta.clone()), c.abs() * &cap));
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<_, StarError>>()?;
            for entries in per_graph {
                for (key, value) in entries {
                    let e = bound_of.entry(key).or_insert_with(Rat::zero);
                    *e += value;
                }
            }
        }

        for ((alpha, _beta), value) in bound_of {
            let deg_alpha: usize = alpha.iter().map(|&x| x as usize).sum();
            let allowed = c_p_prime.clone() * (rat(32) * &e_lo).pow(deg_alpha as i32);
            let ratio_here = value / allowed;
            if ratio_here > max_ratio {
                max_ratio = ratio_here.clone();
            }
            if ratio_here > Rat::one() {
                all_within = false;
            }
            entries += 1;
        }
    }
    Ok(BoundReport {
        max_ratio,
        entries_checked: entries,
        all_within,
        orders_exact: ctx.max_n,
        orders_certified: certified_order,
    })
}

/// The unique algebra homomorphism from the enveloping algebra to the star
/// algebra, determined by identity on the generators: PBW monomials map to
/// ordered star products of coordinates.
pub fn i_alg(u: &crate::uea::UEnvElement, ctx: &StarContext) -> Result<Polynomial, StarError> {
    let d = ctx.algebra.dim();
    if u.degree() > ctx.max_n {
        return Err(StarError::CoverageInsufficient {
            missing_order: ctx.max_n + 1,
        });
    }
    let mut acc = Polynomial::zero(d, Coords::X);
    for (exps, c) in u.terms() {
        let mut value = Polynomial::one(d, Coords::X);
        for (i, &k) in exps.iter().enumerate() {
            for _ in 0..k {
                let xi = Polynomial::var(d, Coords::X, i);
                value = star(&value, &xi, ctx)?;
            }
        }
        acc = acc.add(&value.scale(c));
    }
    Ok(acc)
}

/// Inverse of `i_alg`, by back-substitution on the degree filtration: the
/// top symbol of `i_alg(u)` is the commutative top term of `u`.
pub fn kappa(p: &Polynomial, ctx: &StarContext) -> Result<crate::uea::UEnvElement, StarError> {
    let d = ctx.algebra.dim();
    if p.degree() > ctx.max_n {
        return Err(StarError::CoverageInsufficient {
            missing_order: ctx.max_n + 1,
        });
    }
    let mut rest = p.clone();
    let mut u = crate::uea::UEnvElement::zero(d);
    while !rest.is_zero() {
        let k = rest.degree();
        let top = rest.graded_component(k);
        let mut layer = crate::uea::UEnvElement::zero(d);
        for (exps, c) in top.terms() {
            layer.add_term(exps.clone(), c.clone());
        }
        u = u.add(&layer);
        rest = rest.sub(&i_alg(&layer, ctx)?);
        debug_assert!(rest.is_zero() || rest.degree() < k);
    }
    Ok(u)
}
