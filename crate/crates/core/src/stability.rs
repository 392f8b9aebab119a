//! How far binary solutions can be from the rounded `f0`, and from each
//! other.
//!
//! Every binary solution `g` lies on the sphere `|g - f0|^2 = D - |f0|^2`.
//! Rounding `f0` to the nearest 0/1 grid `F` costs `E`; each pixel where a
//! solution disagrees with `F` costs an extra `|2 f0(p) - 1|`. The budget
//! `D - E - |f0|^2` therefore caps how many pixels can be wrong.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rational::{self, q, q_frac, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryRadius {
    /// `D - |f0|^2`, exact.
    pub radicand: Q,
    pub radius: f64,
}

/// Distance from `f0` shared by every binary solution.
pub fn binary_radius(norm_sq_f0: &Q, total: &Q) -> Result<BinaryRadius> {
    let radicand = total - norm_sq_f0;
    if radicand.is_negative() {
        return Err(Error::NegativeRadicand);
    }
    let radius = rational::to_f64(&radicand).sqrt();
    Ok(BinaryRadius { radicand, radius })
}

/// `min(|x|, |1 - x|)`.
pub fn distance_to_binary(x: &Q) -> Q {
    let to_zero = x.abs();
    let to_one = (q(1) - x).abs();
    if to_zero <= to_one {
        to_zero
    } else {
        to_one
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rounding {
    pub grid: Grid<i64>,
    /// Squared distance from `f0` to `grid`.
    pub e: Q,
    /// Positions where `f0 = 1/2` (rounded up).
    pub ties: Vec<(usize, usize)>,
}

/// Nearest 0/1 grid to `f0`; exact halves round to 1 and are reported.
pub fn round_binary(f0: &Grid<Q>) -> Rounding {
    let half = q_frac(1, 2);
    let grid = f0.map(|v| i64::from(*v >= half));
    let mut e = Q::zero();
    for v in f0.values() {
        let d = distance_to_binary(v);
        e += &d * &d;
    }
    let ties = f0
        .positions()
        .filter(|&(i, j)| *f0.get(i, j) == half)
        .collect();
    Rounding { grid, e, ties }
}

/// One entry of the sorted b-list: the extra cost of flipping `F` at
/// `position`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlipCost {
    pub cost: Q,
    pub position: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// `F`, the rounded `f0`.
    pub rounded: Grid<i64>,
    pub total: Q,
    pub norm_sq_f0: Q,
    pub e: Q,
    /// `D - E - |f0|^2`.
    pub slack: Q,
    /// `|2 f0(p) - 1|` in nondecreasing order, ties by position.
    pub b_list: Vec<FlipCost>,
    /// Any binary solution differs from `F` in at most `s` positions.
    pub s: usize,
    /// Any two binary solutions differ in at most `t` positions.
    pub t: usize,
    pub tie_positions: Vec<(usize, usize)>,
}

/// Largest `k` with `b_1 + ... + b_k <= budget`.
pub fn prefix_count(b_list: &[FlipCost], budget: &Q) -> usize {
    let mut acc = Q::zero();
    for (k, b) in b_list.iter().enumerate() {
        acc += &b.cost;
        if &acc > budget {
            return k;
        }
    }
    b_list.len()
}

pub fn flip_costs(f0: &Grid<Q>) -> Vec<FlipCost> {
    let mut b_list: Vec<FlipCost> = f0
        .positions()
        .map(|(i, j)| FlipCost {
            cost: (f0.get(i, j) * q(2) - q(1)).abs(),
            position: (i, j),
        })
        .collect();
    b_list.sort();
    b_list
}

pub fn stability_bounds(f0: &Grid<Q>, total: &Q) -> Result<StabilityReport> {
    let norm_sq_f0 = f0.norm_sq();
    let rounding = round_binary(f0);
    let slack = total - &rounding.e - &norm_sq_f0;
    if slack.is_negative() {
        return Err(Error::NegativeSlack);
    }
    let b_list = flip_costs(f0);
    let s = prefix_count(&b_list, &slack);
    let t = prefix_count(&b_list, &(&slack * q(2)));
    Ok(StabilityReport {
        rounded: rounding.grid,
        total: total.clone(),
        norm_sq_f0,
        e: rounding.e,
        slack,
        b_list,
        s,
        t,
        tie_positions: rounding.ties,
    })
}
