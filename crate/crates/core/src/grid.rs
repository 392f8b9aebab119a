//! Rectangular grids of values on `A = {0..m} x {0..n}`.
//!
//! `i` is the column index (`0 <= i < m`) and `j` the row index
//! (`0 <= j < n`). Storage is row-major with row `j = 0` first, which is
//! also the serialized layout. Iteration in "lexicographic" order means
//! `(i, j)` ordered with `i` major.

use std::fmt;
use std::ops::{AddAssign, Mul, SubAssign};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid<T> {
    m: usize,
    n: usize,
    values: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(m: usize, n: usize, value: T) -> Self {
        Grid {
            m,
            n,
            values: vec![value; m * n],
        }
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut values = Vec::with_capacity(m * n);
        for j in 0..n {
            for i in 0..m {
                values.push(f(i, j));
            }
        }
        Grid { m, n, values }
    }

    /// Builds a grid from rows, row `j = 0` first.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch("grid must be non-empty".into()));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged grid rows".into()));
        }
        Ok(Grid {
            m,
            n,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.values.chunks(self.m).map(<[T]>::to_vec).collect()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            m: self.m,
            n: self.n,
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl<T> Grid<T> {
    /// Number of columns.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.m && j < self.n);
        j * self.m + i
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.values[self.index(i, j)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        let k = self.index(i, j);
        &mut self.values[k]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let k = self.index(i, j);
        self.values[k] = value;
    }

    /// Raw values in storage (row-major) order.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.m == other.m && self.n == other.n
    }

    /// All positions of `A` in lexicographic order.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> {
        positions(self.m, self.n)
    }
}

pub fn positions(m: usize, n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

impl<T> Grid<T>
where
    T: Clone + for<'a> AddAssign<&'a T>,
{
    pub fn add_assign(&mut self, other: &Grid<T>) {
        assert!(self.same_shape(other));
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += y;
        }
    }
}

impl<T> Grid<T>
where
    T: Clone + for<'a> SubAssign<&'a T>,
{
    pub fn sub_assign(&mut self, other: &Grid<T>) {
        assert!(self.same_shape(other));
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x -= y;
        }
    }
}

impl<T> Grid<T>
where
    T: Clone + Zero + for<'a> AddAssign<&'a T> + for<'a> Mul<&'a T, Output = T>,
{
    /// Euclidean inner product over all positions.
    pub fn dot(&self, other: &Grid<T>) -> T {
        assert!(self.same_shape(other));
        let mut acc = T::zero();
        for (x, y) in self.values.iter().zip(&other.values) {
            acc += &(x.clone() * y);
        }
        acc
    }

    /// Sum of squared entries, `|g|^2`.
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }
}

impl<T: Clone + Zero + for<'a> AddAssign<&'a T>> Grid<T> {
    pub fn total(&self) -> T {
        let mut acc = T::zero();
        for v in &self.values {
            acc += v;
        }
        acc
    }
}

impl Grid<i64> {
    /// A 0/1 grid; rejects any other entry.
    pub fn binary(rows: Vec<Vec<i64>>) -> Result<Self> {
        let g = Grid::from_rows(rows)?;
        g.check_binary()?;
        Ok(g)
    }

    pub fn check_binary(&self) -> Result<()> {
        for (i, j) in self.positions() {
            if !matches!(self.get(i, j), 0 | 1) {
                return Err(Error::NotBinary { i, j });
            }
        }
        Ok(())
    }

    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|v| matches!(v, 0 | 1))
    }

    pub fn to_rational(&self) -> Grid<Q> {
        self.map(|&v| rational::q(v))
    }

    /// Number of positions where the grids differ.
    pub fn hamming(&self, other: &Grid<i64>) -> usize {
        assert!(self.same_shape(other));
        self.values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl Grid<f64> {
    pub fn check_finite(&self) -> Result<()> {
        for (i, j) in self.positions() {
            if !self.get(i, j).is_finite() {
                return Err(Error::NonFinite { i, j });
            }
        }
        Ok(())
    }
}

impl Grid<Q> {
    pub fn to_f64(&self) -> Grid<f64> {
        self.map(rational::to_f64)
    }

    /// Converts to integers, failing on the first non-integral entry.
    pub fn to_integer(&self) -> Result<Grid<i64>> {
        let values = self
            .values
            .iter()
            .map(rational::to_i64)
            .collect::<Result<Vec<_>>>()?;
        Ok(Grid {
            m: self.m,
            n: self.n,
            values,
        })
    }
}

impl<T: fmt::Display> fmt::Display for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.values.chunks(self.m) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout_with_row_zero_first() {
        let g = Grid::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!((g.m(), g.n()), (3, 2));
        assert_eq!(*g.get(2, 0), 3);
        assert_eq!(*g.get(0, 1), 4);
        assert_eq!(g.rows(), vec![vec![1, 2, 3], vec![4, 5, 6]]);
    }

    #[test]
    fn lexicographic_positions_are_column_major() {
        let p: Vec<_> = positions(2, 2).collect();
        assert_eq!(p, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn rejects_ragged_and_non_binary() {
        assert!(Grid::from_rows(vec![vec![1, 2], vec![3]]).is_err());
        assert!(Grid::<i64>::from_rows(vec![]).is_err());
        assert_eq!(
            Grid::binary(vec![vec![0, 2]]),
            Err(Error::NotBinary { i: 1, j: 0 })
        );
    }

    #[test]
    fn float_grids_must_be_finite() {
        let g = Grid::from_rows(vec![vec![0.0, f64::NAN]]).unwrap();
        assert_eq!(g.check_finite(), Err(Error::NonFinite { i: 1, j: 0 }));
    }

    #[test]
    fn hamming_and_norm() {
        let a = Grid::binary(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let b = Grid::binary(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(a.hamming(&b), 4);
        assert_eq!(a.norm_sq(), 2);
    }
}
