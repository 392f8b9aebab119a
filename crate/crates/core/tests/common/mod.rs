//! Shared strategies and oracles for the property suites.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use linesum::direction::valid_direction_sets;
use linesum::rational::{q, q_frac, Q};
use linesum::{DirectionSet, Grid};

/// Deterministic runner: fixed seed, no persisted failures.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn small_rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, d)| q_frac(p, d))
}

pub fn rational_grid(m: usize, n: usize) -> impl Strategy<Value = Grid<Q>> {
    proptest::collection::vec(small_rational(), m * n)
        .prop_map(move |v| Grid::from_fn(m, n, |i, j| v[j * m + i].clone()))
}

pub fn int_grid(m: usize, n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Grid<i64>> {
    proptest::collection::vec(lo..=hi, m * n)
        .prop_map(move |v| Grid::from_fn(m, n, |i, j| v[j * m + i]))
}

pub fn binary_grid(m: usize, n: usize) -> impl Strategy<Value = Grid<i64>> {
    int_grid(m, n, 0, 1)
}

/// `(m, n, S)` with `S` valid for `m x n` and `|S| <= max_k`.
pub fn valid_instance(
    max_side: usize,
    max_k: usize,
) -> impl Strategy<Value = (usize, usize, DirectionSet)> {
    (2..=max_side, 2..=max_side).prop_flat_map(move |(m, n)| {
        let sets = valid_direction_sets(m, n, max_k);
        (Just(m), Just(n), proptest::sample::select(sets))
    })
}

/// Row sums `r_j` and column sums `c_i`, computed directly.
pub fn simple_sums(g: &Grid<i64>) -> (Vec<Q>, Vec<Q>) {
    let rows = (0..g.n())
        .map(|j| q((0..g.m()).map(|i| g.get(i, j)).sum()))
        .collect();
    let cols = (0..g.m())
        .map(|i| q((0..g.n()).map(|j| g.get(i, j)).sum()))
        .collect();
    (rows, cols)
}

/// Rank of a rational matrix by fraction-free elimination, independent of
/// the library's own solver.
pub fn rank_oracle(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != q(0)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != q(0) {
                let factor = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
        rank += 1;
    }
    rank
}
