//! Exhaustive search for binary grids with prescribed line sums.

use crate::direction::DirectionSet;
use crate::error::Result;
use crate::grid::{positions, Grid};
use crate::lines::{LineOperator, LineSumTable};

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    /// Solutions in lexicographic order of their values read position by
    /// position (`(i, j)` with `i` major).
    pub solutions: Vec<Grid<i64>>,
    /// Search stopped at the cap; more solutions may exist.
    pub truncated: bool,
}

struct Search<'a> {
    op: &'a LineOperator,
    /// Storage indices of cells in visiting order.
    order: Vec<usize>,
    target: Vec<i64>,
    partial: Vec<i64>,
    remaining: Vec<i64>,
    values: Vec<i64>,
    cap: usize,
    found: Vec<Vec<i64>>,
    truncated: bool,
}

impl Search<'_> {
    fn feasible(&self, cell: usize) -> bool {
        self.op.lines_through(cell).iter().all(|&l| {
            self.partial[l] <= self.target[l]
                && self.partial[l] + self.remaining[l] >= self.target[l]
        })
    }

    fn place(&mut self, cell: usize, value: i64) {
        self.values[cell] = value;
        for &l in self.op.lines_through(cell) {
            self.partial[l] += value;
            self.remaining[l] -= 1;
        }
    }

    fn unplace(&mut self, cell: usize) {
        let value = self.values[cell];
        for &l in self.op.lines_through(cell) {
            self.partial[l] -= value;
            self.remaining[l] += 1;
        }
        self.values[cell] = 0;
    }

    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.cap {
            self.truncated = true;
            return;
        }
        if depth == self.order.len() {
            self.found.push(self.values.clone());
            return;
        }
        let cell = self.order[depth];
        for value in [0, 1] {
            self.place(cell, value);
            if self.feasible(cell) {
                self.run(depth + 1);
            }
            self.unplace(cell);
            if self.truncated {
                return;
            }
        }
    }
}

/// All 0/1 grids with the given integer line sums, up to `cap` of them.
pub fn enumerate_binary_solutions(
    table: &LineSumTable<i64>,
    set: &DirectionSet,
    m: usize,
    n: usize,
    cap: usize,
) -> Result<Enumeration> {
    let op = LineOperator::new(set, m, n)?;
    let target: Vec<i64> = op.rhs(table);
    let remaining = op.apply(&vec![1i64; m * n]);
    let mut search = Search {
        op: &op,
        order: positions(m, n).map(|(i, j)| j * m + i).collect(),
        partial: vec![0; target.len()],
        target,
        remaining,
        values: vec![0; m * n],
        cap,
        found: Vec::new(),
        truncated: false,
    };
    let impossible = search
        .target
        .iter()
        .zip(&search.remaining)
        .any(|(&t, &r)| t < 0 || t > r);
    if !impossible {
        search.run(0);
    }
    let Search {
        found, truncated, ..
    } = search;
    if truncated {
        log::warn!("binary enumeration truncated at {cap} solutions");
    }
    Ok(Enumeration {
        solutions: found.into_iter().map(|v| op.grid_from(v)).collect(),
        truncated,
    })
}
