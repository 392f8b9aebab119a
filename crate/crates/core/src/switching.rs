//! Switching polynomials and switching elements ("ghosts").
//!
//! For a direction set `S` the product `F_S(x, y)` of the direction
//! polynomials has zero line sums along every direction of `S` when its
//! coefficients are laid out on the grid (`x^i y^j` at position `(i, j)`).
//! The translates `x^u y^v F_S` that fit inside the `m x n` grid form a
//! basis of all grids with zero line sums.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::direction::{Direction, DirectionSet};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lines::{self, compute_line_sums, LineSumTable};
use crate::rational::{self, Q};

/// Sparse bivariate polynomial with integer coefficients, keyed by the
/// exponent pair `(i, j)` of `x^i y^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(usize, usize), i64>,
}

impl BivariatePolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), i64)>) -> Self {
        let mut p = BivariatePolynomial::default();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn one() -> Self {
        Self::from_terms([((0, 0), 1)])
    }

    fn add_term(&mut self, k: (usize, usize), c: i64) {
        let slot = self.terms.entry(k).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&k);
        }
    }

    /// Terms in lexicographic order of `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coefficient(&self, i: usize, j: usize) -> i64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_x(&self) -> usize {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> usize {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Lexicographically first term.
    pub fn leading(&self) -> Option<((usize, usize), i64)> {
        self.terms.iter().next().map(|(&k, &c)| (k, c))
    }

    pub fn mul(&self, other: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::default();
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    /// Sum of squared coefficients.
    pub fn sum_of_squares(&self) -> i64 {
        self.terms.values().map(|c| c * c).sum()
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), &c) in self.terms.iter().rev() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let x = match i {
                        0 => String::new(),
                        1 => "x".into(),
                        _ => format!("x^{i}"),
                    };
                    let y = match j {
                        0 => String::new(),
                        1 => "y".into(),
                        _ => format!("y^{j}"),
                    };
                    format!("{x}{y}")
                }
            };
            let coef = if mag == 1 && !mono.is_empty() {
                String::new()
            } else {
                mag.to_string()
            };
            if first {
                write!(f, "{sign}{coef}{mono}")?;
            } else {
                write!(f, " {sign} {coef}{mono}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// `f_(a,b)`: a binomial whose coefficient grid has zero sums along `(a, b)`.
///
/// `x^a y^b - 1` for `a, b > 0`, `x^a - y^|b|` for `a > 0 > b`, `x - 1` for
/// `(1, 0)` and `y - 1` for `(0, 1)`.
pub fn direction_polynomial(d: Direction) -> BivariatePolynomial {
    let (a, b) = (d.a() as usize, d.b());
    match (a, b) {
        (0, _) => BivariatePolynomial::from_terms([((0, 1), 1), ((0, 0), -1)]),
        (_, 0) => BivariatePolynomial::from_terms([((a, 0), 1), ((0, 0), -1)]),
        (_, b) if b > 0 => BivariatePolynomial::from_terms([((a, b as usize), 1), ((0, 0), -1)]),
        (_, b) => {
            log::debug!(
                "direction ({a},{b}) with b < 0 uses the binomial x^{a} - y^{}",
                -b
            );
            BivariatePolynomial::from_terms([((a, 0), 1), ((0, (-b) as usize), -1)])
        }
    }
}

/// `F_S`: the product of the direction polynomials.
pub fn switching_polynomial(set: &DirectionSet) -> BivariatePolynomial {
    set.iter().fold(BivariatePolynomial::one(), |acc, &d| {
        acc.mul(&direction_polynomial(d))
    })
}

/// `R(S)`: the sum of squared coefficients of `F_S`, which is the squared
/// length of every switching element.
pub fn weight(set: &DirectionSet) -> i64 {
    switching_polynomial(set).sum_of_squares()
}

/// Switching elements `m_(u,v,S)` for `0 <= u < m - M`, `0 <= v < n - N`.
#[derive(Debug, Clone)]
pub struct SwitchingBasis {
    set: DirectionSet,
    m: usize,
    n: usize,
    poly: BivariatePolynomial,
    /// Number of translates along `x` and `y`.
    du: usize,
    dv: usize,
    corner_offset: (usize, usize),
    corner_sign: i64,
}

impl SwitchingBasis {
    pub fn new(set: &DirectionSet, m: usize, n: usize) -> Result<Self> {
        let (big_m, big_n) = set.validate(m, n)?;
        let poly = switching_polynomial(set);
        let ((ci, cj), sign) = poly.leading().expect("F_S is nonzero");
        debug_assert!(sign == 1 || sign == -1);
        debug_assert_eq!((poly.degree_x(), poly.degree_y()), (big_m, big_n));
        Ok(SwitchingBasis {
            set: set.clone(),
            m,
            n,
            poly,
            du: m - big_m,
            dv: n - big_n,
            corner_offset: (ci, cj),
            corner_sign: sign,
        })
    }

    pub fn direction_set(&self) -> &DirectionSet {
        &self.set
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polynomial(&self) -> &BivariatePolynomial {
        &self.poly
    }

    /// Number of elements, `(m - M)(n - N)`.
    pub fn dimension(&self) -> usize {
        self.du * self.dv
    }

    /// Translate ranges `(m - M, n - N)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.du, self.dv)
    }

    /// `R(S)`.
    pub fn weight(&self) -> i64 {
        self.poly.sum_of_squares()
    }

    /// Translates `(u, v)` in lexicographic order; this is the basis order.
    pub fn translates(&self) -> impl Iterator<Item = (usize, usize)> {
        let dv = self.dv;
        (0..self.du).flat_map(move |u| (0..dv).map(move |v| (u, v)))
    }

    pub fn translate(&self, k: usize) -> (usize, usize) {
        (k / self.dv, k % self.dv)
    }

    fn check(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.du || v >= self.dv {
            return Err(Error::IndexOutOfRange { u, v });
        }
        Ok(())
    }

    /// Nonzero entries `(i, j, value)` of `m_(u,v,S)`, lexicographic.
    pub fn entries(&self, u: usize, v: usize) -> Result<Vec<(usize, usize, i64)>> {
        self.check(u, v)?;
        Ok(self
            .poly
            .terms()
            .map(|((i, j), c)| (i + u, j + v, c))
            .collect())
    }

    pub fn element(&self, u: usize, v: usize) -> Result<Grid<i64>> {
        let mut g = Grid::filled(self.m, self.n, 0i64);
        for (i, j, c) in self.entries(u, v)? {
            g.set(i, j, c);
        }
        Ok(g)
    }

    /// Bottom-left corner of `m_(u,v,S)` and the (±1) value there.
    pub fn corner(&self, u: usize, v: usize) -> Result<((usize, usize), i64)> {
        self.check(u, v)?;
        Ok((
            (u + self.corner_offset.0, v + self.corner_offset.1),
            self.corner_sign,
        ))
    }

    /// The corner set `K`, lexicographically ordered.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        self.translates()
            .map(|(u, v)| (u + self.corner_offset.0, v + self.corner_offset.1))
            .collect()
    }

    /// `sum_k c_k m_k` for coefficients in basis order.
    pub fn recompose(&self, coefficients: &[Q]) -> Grid<Q> {
        assert_eq!(coefficients.len(), self.dimension());
        let mut g = Grid::filled(self.m, self.n, Q::zero());
        for ((u, v), c) in self.translates().zip(coefficients) {
            if c.is_zero() {
                continue;
            }
            for ((i, j), e) in self.poly.terms() {
                *g.get_mut(i + u, j + v) += c * rational::q(e);
            }
        }
        g
    }

    /// Integer combination `sum_k c_k m_k`.
    pub fn recompose_integer(&self, coefficients: &[i64]) -> Grid<i64> {
        assert_eq!(coefficients.len(), self.dimension());
        let mut g = Grid::filled(self.m, self.n, 0i64);
        for ((u, v), &c) in self.translates().zip(coefficients) {
            for ((i, j), e) in self.poly.terms() {
                *g.get_mut(i + u, j + v) += c * e;
            }
        }
        g
    }

    /// Gram matrix `<m_k, m_l>` in basis order.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let d = self.dimension();
        let ts: Vec<_> = self.translates().collect();
        let mut gram = vec![vec![0i64; d]; d];
        for (k, &(u1, v1)) in ts.iter().enumerate() {
            for (l, &(u2, v2)) in ts.iter().enumerate().skip(k) {
                // Overlap of two translates of F_S depends only on the shift.
                let (du, dv) = (u2 as i64 - u1 as i64, v2 as i64 - v1 as i64);
                let mut acc = 0;
                for ((i, j), c) in self.poly.terms() {
                    let (pi, pj) = (i as i64 - du, j as i64 - dv);
                    if pi >= 0 && pj >= 0 {
                        acc += c * self.poly.coefficient(pi as usize, pj as usize);
                    }
                }
                gram[k][l] = acc;
                gram[l][k] = acc;
            }
        }
        gram
    }

    /// Inner products `<g, m_k>` in basis order.
    pub fn project_onto(&self, g: &Grid<Q>) -> Vec<Q> {
        self.translates()
            .map(|(u, v)| {
                self.poly
                    .terms()
                    .map(|((i, j), c)| g.get(i + u, j + v) * rational::q(c))
                    .sum()
            })
            .collect()
    }
}

/// Coefficients `c_uv` of a zero-line-sum grid in the switching basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    shape: (usize, usize),
    coefficients: Vec<Q>,
}

impl Decomposition {
    pub fn get(&self, u: usize, v: usize) -> &Q {
        &self.coefficients[u * self.shape.1 + v]
    }

    /// Coefficients in basis (lexicographic `(u, v)`) order.
    pub fn coefficients(&self) -> &[Q] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Q> {
        self.coefficients
    }
}

/// Writes `g` as `sum c_uv m_(u,v,S)` by peeling corners in lexicographic
/// order. Each element vanishes at the corners of all earlier elements, so
/// the coefficient is read off the residual at its own corner.
pub fn decompose(g: &Grid<Q>, basis: &SwitchingBasis) -> Result<Decomposition> {
    if g.m() != basis.m || g.n() != basis.n {
        return Err(Error::DimensionMismatch(format!(
            "grid is {}x{}, basis is for {}x{}",
            g.m(),
            g.n(),
            basis.m,
            basis.n
        )));
    }
    let sums = compute_line_sums(g, &basis.set);
    for d in sums.directions() {
        if d.sums.values().any(|v| !v.is_zero()) {
            return Err(Error::NotZeroSum {
                a: d.direction.a(),
                b: d.direction.b(),
            });
        }
    }
    let mut residual = g.clone();
    let mut coefficients = Vec::with_capacity(basis.dimension());
    for (u, v) in basis.translates() {
        let ((ci, cj), sign) = basis.corner(u, v)?;
        let c = residual.get(ci, cj) * rational::q(sign);
        if !c.is_zero() {
            for ((i, j), e) in basis.poly.terms() {
                *residual.get_mut(i + u, j + v) -= &c * rational::q(e);
            }
        }
        coefficients.push(c);
    }
    if residual.values().iter().any(|x| !x.is_zero()) {
        return Err(Error::DecompositionResidual);
    }
    Ok(Decomposition {
        shape: basis.shape(),
        coefficients,
    })
}

/// The unique grid with the given line sums and prescribed values on the
/// corner set `K` (values in `K` order).
pub fn reconstruct_from_corners(
    corner_values: &[Q],
    table: &LineSumTable<Q>,
    basis: &SwitchingBasis,
) -> Result<Grid<Q>> {
    if corner_values.len() != basis.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{} corner values for {} corners",
            corner_values.len(),
            basis.dimension()
        )));
    }
    let particular = lines::particular_solution(table, &basis.set, basis.m, basis.n)?
        .ok_or_else(|| incompatible(table, basis))?;
    Ok(fix_corners(particular, corner_values, basis))
}

/// Adds the basis combination that moves the corner values of `g` to
/// `corner_values`.
pub(crate) fn fix_corners(mut g: Grid<Q>, corner_values: &[Q], basis: &SwitchingBasis) -> Grid<Q> {
    for ((u, v), target) in basis.translates().zip(corner_values) {
        let ((ci, cj), sign) = basis.corner(u, v).expect("translate in range");
        let c = (target - g.get(ci, cj)) * rational::q(sign);
        if c.is_zero() {
            continue;
        }
        for ((i, j), e) in basis.poly.terms() {
            *g.get_mut(i + u, j + v) += &c * rational::q(e);
        }
    }
    g
}

pub(crate) fn incompatible(table: &LineSumTable<Q>, basis: &SwitchingBasis) -> Error {
    let residual = lines::check_compatibility(&table.to_f64(), &basis.set, basis.m, basis.n)
        .unwrap_or(f64::NAN);
    Error::IncompatibleLineSums { residual }
}

/// Values of `g` on the corner set, in `K` order.
pub fn corner_values<T: Clone>(g: &Grid<T>, basis: &SwitchingBasis) -> Vec<T> {
    basis
        .corners()
        .into_iter()
        .map(|(i, j)| g.get(i, j).clone())
        .collect()
}

/// Sparse JSON form of one switching element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseElement {
    pub u: usize,
    pub v: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SwitchingBasis {
    pub fn sparse(&self, u: usize, v: usize) -> Result<SparseElement> {
        Ok(SparseElement {
            u,
            v,
            entries: self.entries(u, v)?,
        })
    }
}
