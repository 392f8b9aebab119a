//! The minimum-norm real solution `f0` of a line-sum system.

use num_traits::Zero;
use serde::Serialize;

use crate::direction::DirectionSet;
use crate::error::{Error, Result};
use crate::exact;
use crate::grid::Grid;
use crate::lines::{self, LineOperator, LineSumTable};
use crate::rational::{self, Q};
use crate::solver;
use crate::switching::{self, SwitchingBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMethod {
    /// Row/column closed form.
    ClosedForm,
    /// Exact rational projection orthogonal to the switching basis.
    ExactRational,
    /// Conjugate gradients on the normal equations.
    MinimumNormNumeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult<T> {
    pub f0: Grid<T>,
    pub norm_sq: T,
    pub method: ProjectionMethod,
    /// Euclidean norm of the line-sum residual of `f0`.
    pub residual: f64,
}

/// Closed form for row sums `r_j` and column sums `c_i`:
/// `f0(i, j) = c_i / n + r_j / m - D / (m n)`.
pub fn project_simple(row_sums: &[Q], col_sums: &[Q]) -> Result<ProjectionResult<Q>> {
    let (m, n) = (col_sums.len(), row_sums.len());
    if m == 0 || n == 0 {
        return Err(Error::DimensionMismatch("empty row or column sums".into()));
    }
    let total: Q = row_sums.iter().sum();
    let col_total: Q = col_sums.iter().sum();
    if total != col_total {
        return Err(Error::InconsistentTotals(format!(
            "row sums total {}, column sums total {}",
            rational::format_q(&total),
            rational::format_q(&col_total)
        )));
    }
    let (mq, nq) = (rational::q(m as i64), rational::q(n as i64));
    let shift = &total / (&mq * &nq);
    let col_part: Vec<Q> = col_sums.iter().map(|c| c / &nq).collect();
    let row_part: Vec<Q> = row_sums.iter().map(|r| r / &mq - &shift).collect();
    let f0 = Grid::from_fn(m, n, |i, j| &col_part[i] + &row_part[j]);
    let norm_sq = f0.norm_sq();
    Ok(ProjectionResult {
        f0,
        norm_sq,
        method: ProjectionMethod::ClosedForm,
        residual: 0.0,
    })
}

/// Closed form applied to a table that carries row and column sums.
pub fn project_simple_table(table: &LineSumTable<Q>) -> Result<ProjectionResult<Q>> {
    let set = table.direction_set();
    if !set.is_simple() {
        return Err(Error::DimensionMismatch(
            "closed form needs exactly the row and column directions".into(),
        ));
    }
    let rows: Vec<Q> = table
        .row_sums()
        .expect("simple")
        .into_iter()
        .cloned()
        .collect();
    let cols: Vec<Q> = table
        .col_sums()
        .expect("simple")
        .into_iter()
        .cloned()
        .collect();
    project_simple(&rows, &cols)
}

/// Exact `f0` for any valid direction set: take a particular rational
/// solution and remove its component in the span of the switching elements.
pub fn project_exact(
    table: &LineSumTable<Q>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<ProjectionResult<Q>> {
    let basis = SwitchingBasis::new(set, m, n)?;
    let particular = lines::particular_solution(table, set, m, n)?
        .ok_or_else(|| switching::incompatible(table, &basis))?;
    let f0 = remove_switching_component(particular, &basis);
    let norm_sq = f0.norm_sq();
    Ok(ProjectionResult {
        f0,
        norm_sq,
        method: ProjectionMethod::ExactRational,
        residual: 0.0,
    })
}

/// `g - P g`, with `P` the orthogonal projector onto the switching span.
pub fn remove_switching_component(g: Grid<Q>, basis: &SwitchingBasis) -> Grid<Q> {
    let gram: exact::Matrix = basis
        .gram()
        .into_iter()
        .map(|row| row.into_iter().map(rational::q).collect())
        .collect();
    let rhs = basis.project_onto(&g);
    let coeffs = exact::solve(&gram, &rhs).expect("switching elements are independent");
    let mut out = g;
    out.sub_assign(&basis.recompose(&coeffs));
    out
}

/// Float `f0` for a general direction set, by conjugate gradients on the
/// normal equations `A A^T y = b`, `f0 = A^T y`.
pub fn project_general(
    table: &LineSumTable<f64>,
    set: &DirectionSet,
    m: usize,
    n: usize,
    tolerance: f64,
) -> Result<ProjectionResult<f64>> {
    let compat = lines::check_compatibility(table, set, m, n)?;
    if compat > tolerance {
        return Err(Error::IncompatibleLineSums { residual: compat });
    }
    let op = LineOperator::new(set, m, n)?;
    let b = op.rhs(table);
    let sol = solver::cgne(&op, &b, 10 * op.num_lines(), 1e-12);
    let ax = op.apply(&sol.solution);
    let residual = ax
        .iter()
        .zip(&b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt();
    log::debug!(
        "cgne converged in {} iterations, residual {residual:e}",
        sol.iterations
    );
    let f0 = op.grid_from(sol.solution);
    let norm_sq = f0.norm_sq();
    Ok(ProjectionResult {
        f0,
        norm_sq,
        method: ProjectionMethod::MinimumNormNumeric,
        residual,
    })
}

/// `|g|^2`.
pub fn norm_sq<T>(g: &Grid<T>) -> T
where
    T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T> + for<'a> std::ops::Mul<&'a T, Output = T>,
{
    g.norm_sq()
}
