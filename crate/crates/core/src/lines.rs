//! Line enumeration, line sums, and compatibility of prescribed line sums.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::direction::{Direction, DirectionSet};
use crate::error::{Error, Result};
use crate::exact;
use crate::grid::{positions, Grid};
use crate::rational::{self, Q};
use crate::solver;

/// Absolute residual below which float line sums count as compatible.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-8;

/// Line sums of one direction, keyed by `t = a*j - b*i` in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSums<T> {
    pub direction: Direction,
    pub sums: BTreeMap<i64, T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSumTable<T> {
    m: usize,
    n: usize,
    directions: Vec<DirectionSums<T>>,
    total: T,
}

impl<T: Clone + Zero + for<'a> AddAssign<&'a T>> LineSumTable<T> {
    /// Builds a table from prescribed sums. Lines of `A` missing from
    /// `sums` are taken as zero; keys of lines that miss `A` are rejected.
    pub fn new(
        set: &DirectionSet,
        m: usize,
        n: usize,
        sums: Vec<BTreeMap<i64, T>>,
    ) -> Result<Self> {
        set.validate(m, n)?;
        if sums.len() != set.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} directions but {} line-sum maps",
                set.len(),
                sums.len()
            )));
        }
        let mut directions = Vec::with_capacity(set.len());
        for (d, given) in set.iter().zip(sums) {
            let keys = line_keys(*d, m, n);
            let mut full: BTreeMap<i64, T> = keys.iter().map(|&t| (t, T::zero())).collect();
            for (t, v) in given {
                match full.get_mut(&t) {
                    Some(slot) => *slot = v,
                    None => {
                        return Err(Error::DimensionMismatch(format!(
                            "line t={t} in direction ({d}) does not meet the {m}x{n} grid"
                        )))
                    }
                }
            }
            directions.push(DirectionSums {
                direction: *d,
                sums: full,
            });
        }
        let total = sum_values(directions[0].sums.values());
        Ok(LineSumTable {
            m,
            n,
            directions,
            total,
        })
    }

    /// Row sums `r_j` and column sums `c_i`.
    pub fn simple(row_sums: Vec<T>, col_sums: Vec<T>) -> Result<Self> {
        let (m, n) = (col_sums.len(), row_sums.len());
        // Direction (1,0): t = j; direction (0,1): t = -i.
        let rows = row_sums
            .into_iter()
            .enumerate()
            .map(|(j, v)| (j as i64, v))
            .collect();
        let cols = col_sums
            .into_iter()
            .enumerate()
            .map(|(i, v)| (-(i as i64), v))
            .collect();
        LineSumTable::new(&DirectionSet::simple(), m, n, vec![rows, cols])
    }
}

impl<T> LineSumTable<T> {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The grand total `D` (read off the first direction).
    pub fn total(&self) -> &T {
        &self.total
    }

    pub fn directions(&self) -> &[DirectionSums<T>] {
        &self.directions
    }

    pub fn direction_set(&self) -> DirectionSet {
        DirectionSet::new(self.directions.iter().map(|d| d.direction).collect())
            .expect("table directions are distinct")
    }

    pub fn sums_for(&self, d: Direction) -> Option<&BTreeMap<i64, T>> {
        self.directions
            .iter()
            .find(|x| x.direction == d)
            .map(|x| &x.sums)
    }

    /// Row sums `r_j` (direction `(1,0)`), when present.
    pub fn row_sums(&self) -> Option<Vec<&T>> {
        self.sums_for(Direction::ROW).map(|s| s.values().collect())
    }

    /// Column sums `c_i` (direction `(0,1)`), when present.
    pub fn col_sums(&self) -> Option<Vec<&T>> {
        // Keys are t = -i, so reverse to get increasing i.
        self.sums_for(Direction::COLUMN)
            .map(|s| s.values().rev().collect())
    }

    /// All sums in operator line order.
    pub fn flatten(&self) -> Vec<&T> {
        self.directions
            .iter()
            .flat_map(|d| d.sums.values())
            .collect()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> LineSumTable<U> {
        LineSumTable {
            m: self.m,
            n: self.n,
            directions: self
                .directions
                .iter()
                .map(|d| DirectionSums {
                    direction: d.direction,
                    sums: d.sums.iter().map(|(&t, v)| (t, f(v))).collect(),
                })
                .collect(),
            total: f(&self.total),
        }
    }
}

impl<T: Clone + Zero + for<'a> AddAssign<&'a T>> LineSumTable<T> {
    /// Per-direction totals; all equal for a compatible table.
    pub fn direction_totals(&self) -> Vec<T> {
        self.directions
            .iter()
            .map(|d| sum_values(d.sums.values()))
            .collect()
    }
}

impl LineSumTable<Q> {
    pub fn to_f64(&self) -> LineSumTable<f64> {
        self.map(rational::to_f64)
    }

    pub fn is_integral(&self) -> bool {
        self.flatten().iter().all(|v| v.is_integer())
    }

    pub fn to_integer(&self) -> Result<LineSumTable<i64>> {
        let table = self.map(rational::to_i64);
        for d in &table.directions {
            for v in d.sums.values() {
                if let Err(e) = v {
                    return Err(e.clone());
                }
            }
        }
        Ok(table.map(|v| *v.as_ref().expect("checked above")))
    }
}

impl LineSumTable<i64> {
    pub fn to_rational(&self) -> LineSumTable<Q> {
        self.map(|&v| rational::q(v))
    }
}

fn sum_values<'a, T: 'a + Clone + Zero + for<'b> AddAssign<&'b T>>(
    values: impl Iterator<Item = &'a T>,
) -> T {
    let mut acc = T::zero();
    for v in values {
        acc += v;
    }
    acc
}

/// Sorted keys `t` of the lines in direction `d` that meet `A`.
pub fn line_keys(d: Direction, m: usize, n: usize) -> Vec<i64> {
    let mut keys: Vec<i64> = positions(m, n).map(|(i, j)| d.line_of(i, j)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys
}

/// Sums of `g` along every line of every direction in `set`.
pub fn compute_line_sums<T>(g: &Grid<T>, set: &DirectionSet) -> LineSumTable<T>
where
    T: Clone + Zero + for<'a> AddAssign<&'a T>,
{
    let (m, n) = (g.m(), g.n());
    let directions: Vec<_> = set
        .iter()
        .map(|&d| {
            let mut sums: BTreeMap<i64, T> = BTreeMap::new();
            for (i, j) in positions(m, n) {
                *sums.entry(d.line_of(i, j)).or_insert_with(T::zero) += g.get(i, j);
            }
            DirectionSums { direction: d, sums }
        })
        .collect();
    LineSumTable {
        m,
        n,
        total: g.total(),
        directions,
    }
}

/// The line-sum map `A` as a sparse incidence structure: every cell lies on
/// exactly one line per direction.
#[derive(Debug, Clone)]
pub struct LineOperator {
    m: usize,
    n: usize,
    /// `(direction index, t)` for each line, in table order.
    lines: Vec<(usize, i64)>,
    /// Line indices through each cell, by grid storage index.
    cell_lines: Vec<Vec<usize>>,
}

impl LineOperator {
    pub fn new(set: &DirectionSet, m: usize, n: usize) -> Result<Self> {
        set.validate(m, n)?;
        let mut lines = Vec::new();
        let mut offsets = Vec::new();
        for (k, &d) in set.iter().enumerate() {
            let keys = line_keys(d, m, n);
            offsets.push((lines.len(), keys.clone()));
            lines.extend(keys.into_iter().map(|t| (k, t)));
        }
        let mut cell_lines = vec![Vec::with_capacity(set.len()); m * n];
        for j in 0..n {
            for i in 0..m {
                for (k, &d) in set.iter().enumerate() {
                    let (base, keys) = &offsets[k];
                    let pos = keys
                        .binary_search(&d.line_of(i, j))
                        .expect("key enumerated above");
                    cell_lines[j * m + i].push(base + pos);
                }
            }
        }
        Ok(LineOperator {
            m,
            n,
            lines,
            cell_lines,
        })
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_cells(&self) -> usize {
        self.m * self.n
    }

    pub fn lines(&self) -> &[(usize, i64)] {
        &self.lines
    }

    /// Line indices through the cell at storage index `cell`.
    pub fn lines_through(&self, cell: usize) -> &[usize] {
        &self.cell_lines[cell]
    }

    /// `y = A x`.
    pub fn apply<T: Clone + Zero + for<'a> AddAssign<&'a T>>(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.lines.len()];
        for (cell, ls) in self.cell_lines.iter().enumerate() {
            for &l in ls {
                y[l] += &x[cell];
            }
        }
        y
    }

    /// `x = A^T y`.
    pub fn apply_transpose<T: Clone + Zero + for<'a> AddAssign<&'a T>>(&self, y: &[T]) -> Vec<T> {
        self.cell_lines
            .iter()
            .map(|ls| {
                let mut acc = T::zero();
                for &l in ls {
                    acc += &y[l];
                }
                acc
            })
            .collect()
    }

    /// Dense 0/1 matrix of the operator (lines x cells).
    pub fn dense(&self) -> exact::Matrix {
        let mut mat = vec![vec![Q::zero(); self.num_cells()]; self.num_lines()];
        for (cell, ls) in self.cell_lines.iter().enumerate() {
            for &l in ls {
                mat[l][cell] = rational::q(1);
            }
        }
        mat
    }

    pub fn rhs<T: Clone>(&self, table: &LineSumTable<T>) -> Vec<T> {
        table.flatten().into_iter().cloned().collect()
    }

    pub fn grid_from<T: Clone>(&self, values: Vec<T>) -> Grid<T> {
        assert_eq!(values.len(), self.num_cells());
        let mut it = values.into_iter();
        let rows = (0..self.n)
            .map(|_| it.by_ref().take(self.m).collect())
            .collect();
        Grid::from_rows(rows).expect("shape checked")
    }
}

fn check_table_shape<T>(
    table: &LineSumTable<T>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<()> {
    if table.m != m || table.n != n {
        return Err(Error::DimensionMismatch(format!(
            "table is {}x{}, expected {m}x{n}",
            table.m, table.n
        )));
    }
    let dirs: Vec<_> = table.directions.iter().map(|d| d.direction).collect();
    if dirs != set.directions() {
        return Err(Error::DimensionMismatch(
            "table directions differ from the direction set".into(),
        ));
    }
    Ok(())
}

/// Norm of the line-sum residual of the least-squares grid; zero (up to
/// rounding) exactly when a real solution exists.
pub fn check_compatibility(
    table: &LineSumTable<f64>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<f64> {
    check_table_shape(table, set, m, n)?;
    let op = LineOperator::new(set, m, n)?;
    let b = op.rhs(table);
    let x = solver::cgls(&op, &b, 10 * op.num_lines().max(1), 1e-14);
    let ax = op.apply(&x.solution);
    Ok(ax
        .iter()
        .zip(&b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt())
}

/// Exact compatibility test: does some rational grid reproduce `table`?
pub fn is_compatible_exact(
    table: &LineSumTable<Q>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<bool> {
    Ok(particular_solution(table, set, m, n)?.is_some())
}

/// Some rational grid with the given line sums, by exact elimination.
pub fn particular_solution(
    table: &LineSumTable<Q>,
    set: &DirectionSet,
    m: usize,
    n: usize,
) -> Result<Option<Grid<Q>>> {
    check_table_shape(table, set, m, n)?;
    let op = LineOperator::new(set, m, n)?;
    Ok(exact::solve(&op.dense(), &op.rhs(table)).map(|x| op.grid_from(x)))
}
