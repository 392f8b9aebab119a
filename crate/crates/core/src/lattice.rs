//! Integer solutions of a line-sum system.
//!
//! With integer line sums the integer solutions are `g + L`, where `g` is
//! any one of them and `L` is the lattice spanned by the switching
//! elements. Every basis vector of `L` has squared length `R(S)`, so any
//! real solution lies in a cell of `L` whose nearest vertex is within
//! `sqrt(R(S) (m - M)(n - N)) / 2`.

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::direction::DirectionSet;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lines::{self, compute_line_sums, LineOperator, LineSumTable};
use crate::projection::ProjectionResult;
use crate::rational::{self, q, Q};
use crate::switching::{self, decompose, SwitchingBasis};

/// Largest lattice dimension for exhaustive vertex search.
pub const MAX_ENUMERATION_DIM: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeMethod {
    /// Each basis coefficient rounded to the nearest integer.
    BabaiRounding,
    /// Walk to the nearest facet of the containing cell, one coordinate at
    /// a time, until a vertex is reached.
    FaceDescent,
    /// Best of all `2^dim` vertices of the containing cell.
    VertexEnumeration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSolution {
    pub f: Grid<i64>,
    /// The real target `h`.
    pub anchor: Grid<Q>,
    /// Coefficients of `f - h` in the switching basis.
    pub offsets: Vec<Q>,
    pub distance_sq: Q,
    pub distance: f64,
    pub bound_sq: Q,
    pub bound: f64,
    pub method: LatticeMethod,
}

impl LatticeSolution {
    pub fn within_bound(&self) -> bool {
        self.distance_sq <= self.bound_sq
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceBound {
    /// `R(S) (m - M)(n - N) / 4`.
    pub squared: Q,
    pub value: f64,
}

/// `sqrt(R(S) (m - M)(n - N)) / 2`: how far any real solution with integer
/// line sums can be from the nearest integer solution.
pub fn distance_bound(set: &DirectionSet, m: usize, n: usize) -> Result<DistanceBound> {
    let dim = set.switching_dimension(m, n)?;
    let squared = Q::new((switching::weight(set) * dim as i64).into(), 4.into());
    let value = rational::to_f64(&squared).sqrt();
    Ok(DistanceBound { squared, value })
}

/// Bound on the distance between `f0` and the shortest integer solution,
/// twice [`distance_bound`].
pub fn shortest_solution_bound(set: &DirectionSet, m: usize, n: usize) -> Result<f64> {
    Ok(2.0 * distance_bound(set, m, n)?.value)
}

/// Some integer grid with the given integer line sums.
///
/// Peels the grid cell by cell: a line with a single remaining cell forces
/// that cell; otherwise the first switching translate lying entirely in
/// the remaining cells has its corner set to zero.
pub fn construct_integer_solution(
    table: &LineSumTable<i64>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<Grid<i64>> {
    let basis = SwitchingBasis::new(set, m, n)?;
    let table_q = table.to_rational();
    if !lines::is_compatible_exact(&table_q, set, m, n)? {
        return Err(switching::incompatible(&table_q, &basis));
    }
    let op = LineOperator::new(set, m, n)?;
    match peel(&op, &basis, &op.rhs(table)) {
        Some(values) => {
            let g = op.grid_from(values);
            if compute_line_sums(&g, set) == *table {
                return Ok(g);
            }
            log::warn!("peeling produced inconsistent sums; solving from corners");
        }
        None => log::warn!("peeling got stuck; solving from corners"),
    }
    let zeros = vec![Q::zero(); basis.dimension()];
    switching::reconstruct_from_corners(&zeros, &table_q, &basis)?.to_integer()
}

fn peel(op: &LineOperator, basis: &SwitchingBasis, target: &[i64]) -> Option<Vec<i64>> {
    let (m, n) = (basis.m(), basis.n());
    let cells = m * n;
    let mut line_cells = vec![Vec::new(); op.num_lines()];
    for cell in 0..cells {
        for &l in op.lines_through(cell) {
            line_cells[l].push(cell);
        }
    }
    let mut residual = target.to_vec();
    let mut count: Vec<usize> = line_cells.iter().map(Vec::len).collect();
    let mut remaining = vec![true; cells];
    let mut values = vec![0i64; cells];
    let supports: Vec<(usize, Vec<usize>)> = basis
        .translates()
        .map(|(u, v)| {
            let ((ci, cj), _) = basis.corner(u, v).expect("in range");
            let support = basis
                .entries(u, v)
                .expect("in range")
                .into_iter()
                .map(|(i, j, _)| j * m + i)
                .collect();
            (cj * m + ci, support)
        })
        .collect();

    let mut left = cells;
    while left > 0 {
        let forced = (0..op.num_lines()).find(|&l| count[l] == 1).map(|l| {
            let cell = *line_cells[l]
                .iter()
                .find(|&&c| remaining[c])
                .expect("count is 1");
            (cell, residual[l])
        });
        let (cell, value) = match forced {
            Some(x) => x,
            None => {
                let (corner, _) = supports
                    .iter()
                    .find(|(_, support)| support.iter().all(|&c| remaining[c]))?;
                (*corner, 0)
            }
        };
        values[cell] = value;
        remaining[cell] = false;
        left -= 1;
        for &l in op.lines_through(cell) {
            residual[l] -= value;
            count[l] -= 1;
        }
    }
    residual.iter().all(|&r| r == 0).then_some(values)
}

/// An integer solution within [`distance_bound`] of the real solution `h`.
pub fn nearest_integer_solution(
    h: &Grid<Q>,
    table: &LineSumTable<i64>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<LatticeSolution> {
    if h.m() != m || h.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "anchor is {}x{}, expected {m}x{n}",
            h.m(),
            h.n()
        )));
    }
    let table_q = table.to_rational();
    let h_sums = compute_line_sums(h, set);
    if h_sums != table_q {
        let residual = h_sums
            .flatten()
            .into_iter()
            .zip(table_q.flatten())
            .map(|(a, b)| rational::to_f64(&(a - b)).powi(2))
            .sum::<f64>()
            .sqrt();
        return Err(Error::IncompatibleLineSums { residual });
    }
    let basis = SwitchingBasis::new(set, m, n)?;
    let bound = distance_bound(set, m, n)?;
    let g = construct_integer_solution(table, set, m, n)?;

    let mut diff = g.to_rational();
    diff.sub_assign(h);
    let coeffs = decompose(&diff, &basis)?.into_coefficients();

    let finish = |shift: Vec<i64>, method| -> Result<LatticeSolution> {
        let f = {
            let mut f = g.clone();
            f.sub_assign(&basis.recompose_integer(&shift));
            f
        };
        let offsets: Vec<Q> = coeffs.iter().zip(&shift).map(|(c, &k)| c - q(k)).collect();
        let mut delta = f.to_rational();
        delta.sub_assign(h);
        let distance_sq = delta.norm_sq();
        Ok(LatticeSolution {
            distance: rational::to_f64(&distance_sq).sqrt(),
            f,
            anchor: h.clone(),
            offsets,
            distance_sq,
            bound_sq: bound.squared.clone(),
            bound: bound.value,
            method,
        })
    };

    let rounded = coeffs
        .iter()
        .map(|c| to_i64(&rational::round_half_up(c)))
        .collect::<Result<Vec<_>>>()?;
    let babai = finish(rounded, LatticeMethod::BabaiRounding)?;
    if babai.within_bound() {
        return Ok(babai);
    }

    let floors = coeffs
        .iter()
        .map(|c| to_i64(&c.floor().to_integer()))
        .collect::<Result<Vec<_>>>()?;
    let frac: Vec<f64> = coeffs
        .iter()
        .zip(&floors)
        .map(|(c, &k)| rational::to_f64(&(c - q(k))))
        .collect();
    let gram = gram_f64(&basis);
    let with_vertex = |vertex: &[bool]| -> Vec<i64> {
        floors
            .iter()
            .zip(vertex)
            .map(|(&k, &up)| k + i64::from(up))
            .collect()
    };

    let descent = finish(
        with_vertex(&face_descent(&gram, &frac)),
        LatticeMethod::FaceDescent,
    )?;
    if descent.within_bound() {
        return Ok(descent);
    }

    let dim = basis.dimension();
    if dim > MAX_ENUMERATION_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            cap: MAX_ENUMERATION_DIM,
        });
    }
    let (best, _) = nearest_vertex_exhaustive(&gram, &frac);
    finish(with_vertex(&best), LatticeMethod::VertexEnumeration)
}

/// Candidate for the shortest integer solution: the integer solution found
/// near `f0`. Not certified to be the shortest.
pub fn shortest_integer_candidate(
    f0: &ProjectionResult<Q>,
    table: &LineSumTable<i64>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<LatticeSolution> {
    nearest_integer_solution(&f0.f0, table, set, m, n)
}

fn to_i64(x: &num_bigint::BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::NonIntegerResult(format!("{x} overflows i64")))
}

fn gram_f64(basis: &SwitchingBasis) -> DMatrix<f64> {
    let gram = basis.gram();
    let d = gram.len();
    DMatrix::from_fn(d, d, |r, c| gram[r][c] as f64)
}

/// Squared length `x^T G x` of `x = point - vertex`.
fn quad_form(gram: &DMatrix<f64>, x: &[f64]) -> f64 {
    let d = x.len();
    (0..d)
        .map(|r| x[r] * (0..d).map(|c| gram[(r, c)] * x[c]).sum::<f64>())
        .sum()
}

/// Vertex of the unit cell `[0,1]^d` (in basis coordinates, metric `gram`)
/// reached by repeatedly moving `point` to its nearest facet.
///
/// The nearest boundary point of a parallelepiped is the orthogonal
/// projection onto some facet hyperplane that lands inside the facet, and
/// that step is at most half an edge; so `d` steps reach a vertex within
/// half the cell diagonal bound.
pub fn face_descent(gram: &DMatrix<f64>, point: &[f64]) -> Vec<bool> {
    const EPS: f64 = 1e-12;
    let d = point.len();
    let mut x = point.to_vec();
    let mut vertex = vec![false; d];
    let mut free: Vec<usize> = (0..d).collect();
    while !free.is_empty() {
        let k = free.len();
        let sub = DMatrix::from_fn(k, k, |r, c| gram[(free[r], free[c])]);
        let inv = sub
            .clone()
            .try_inverse()
            .expect("switching Gram matrix is positive definite");
        // (dist^2, local index, side, valid)
        let mut best: Option<(f64, usize, bool, bool)> = None;
        for a in 0..k {
            let i = free[a];
            for up in [false, true] {
                let target = if up { 1.0 } else { 0.0 };
                let delta = target - x[i];
                let hii = inv[(a, a)];
                let dist_sq = delta * delta / hii;
                let step = delta / hii;
                let valid = (0..k).all(|b| {
                    let v = x[free[b]] + step * inv[(b, a)];
                    (-EPS..=1.0 + EPS).contains(&v)
                });
                let better = match best {
                    None => true,
                    Some((bd, _, _, bv)) => (valid && !bv) || (valid == bv && dist_sq < bd),
                };
                if better {
                    best = Some((dist_sq, a, up, valid));
                }
            }
        }
        let (_, a, up, _) = best.expect("at least one free coordinate");
        let i = free[a];
        let step = (if up { 1.0 } else { 0.0 } - x[i]) / inv[(a, a)];
        for b in 0..k {
            let xb = &mut x[free[b]];
            *xb = (*xb + step * inv[(b, a)]).clamp(0.0, 1.0);
        }
        x[i] = if up { 1.0 } else { 0.0 };
        vertex[i] = up;
        free.remove(a);
    }
    vertex
}

/// Nearest of the `2^d` cell vertices to `point`, by a Gray-code walk.
/// Returns the vertex and its squared distance; ties keep the lowest index.
pub fn nearest_vertex_exhaustive(gram: &DMatrix<f64>, point: &[f64]) -> (Vec<bool>, f64) {
    let d = point.len();
    assert!(d < 63);
    let mut vertex = vec![false; d];
    let mut x = point.to_vec();
    let mut gx: Vec<f64> = (0..d)
        .map(|r| (0..d).map(|c| gram[(r, c)] * x[c]).sum())
        .collect();
    let mut value = quad_form(gram, &x);
    let mut best = (0u64, value);
    for step in 1u64..(1u64 << d) {
        let bit = step.trailing_zeros() as usize;
        let sign = if vertex[bit] { 1.0 } else { -1.0 };
        // x_bit moves by `sign`.
        value += 2.0 * sign * gx[bit] + gram[(bit, bit)];
        for r in 0..d {
            gx[r] += sign * gram[(r, bit)];
        }
        x[bit] += sign;
        vertex[bit] = !vertex[bit];
        let gray = step ^ (step >> 1);
        if value < best.1 || (value == best.1 && gray < best.0) {
            best = (gray, value);
        }
    }
    let bits = (0..d).map(|b| best.0 >> b & 1 == 1).collect();
    (bits, best.1)
}
