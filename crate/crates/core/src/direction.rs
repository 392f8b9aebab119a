//! Lattice directions and direction sets.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A primitive lattice direction `(a, b)` with `gcd(a, b) = 1`, `a >= 0`,
/// and `b = 1` whenever `a = 0`.
///
/// Lines in this direction are `a*y = b*x + t`; a position `(i, j)` lies on
/// the line keyed by `t = a*j - b*i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Direction {
    a: i64,
    b: i64,
}

impl Direction {
    pub const ROW: Direction = Direction { a: 1, b: 0 };
    pub const COLUMN: Direction = Direction { a: 0, b: 1 };

    pub fn new(a: i64, b: i64) -> Result<Self> {
        let malformed = |reason| Error::MalformedDirection { a, b, reason };
        if a < 0 {
            return Err(malformed("a must be nonnegative"));
        }
        if a == 0 && b != 1 {
            return Err(malformed("a = 0 requires b = 1"));
        }
        if a.gcd(&b) != 1 {
            return Err(malformed("gcd(a, b) must be 1"));
        }
        Ok(Direction { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// Line key of position `(i, j)`.
    #[inline]
    pub fn line_of(&self, i: usize, j: usize) -> i64 {
        self.a * j as i64 - self.b * i as i64
    }
}

impl TryFrom<(i64, i64)> for Direction {
    type Error = Error;

    fn try_from((a, b): (i64, i64)) -> Result<Self> {
        Direction::new(a, b)
    }
}

impl From<Direction> for (i64, i64) {
    fn from(d: Direction) -> Self {
        (d.a, d.b)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// Pairwise-distinct directions `S` with `M = sum a_d` and `N = sum |b_d|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Direction>", into = "Vec<Direction>")]
pub struct DirectionSet {
    directions: Vec<Direction>,
}

impl DirectionSet {
    pub fn new(directions: Vec<Direction>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::EmptyDirectionSet);
        }
        for (k, d) in directions.iter().enumerate() {
            if directions[..k].contains(d) {
                return Err(Error::DuplicateDirection { a: d.a, b: d.b });
            }
        }
        Ok(DirectionSet { directions })
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let dirs = pairs
            .iter()
            .map(|&(a, b)| Direction::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        DirectionSet::new(dirs)
    }

    /// Row and column sums only.
    pub fn simple() -> Self {
        DirectionSet {
            directions: vec![Direction::ROW, Direction::COLUMN],
        }
    }

    pub fn is_simple(&self) -> bool {
        self.directions.len() == 2
            && self.directions.contains(&Direction::ROW)
            && self.directions.contains(&Direction::COLUMN)
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Direction> {
        self.directions.iter()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn big_m(&self) -> i64 {
        self.directions.iter().map(|d| d.a).sum()
    }

    pub fn big_n(&self) -> i64 {
        self.directions.iter().map(|d| d.b.abs()).sum()
    }

    /// Returns `(M, N)` when `M < m` and `N < n`.
    pub fn validate(&self, m: usize, n: usize) -> Result<(usize, usize)> {
        let (big_m, big_n) = (self.big_m(), self.big_n());
        if m == 0 || n == 0 || big_m >= m as i64 || big_n >= n as i64 {
            return Err(Error::InvalidDirectionSet { big_m, big_n, m, n });
        }
        Ok((big_m as usize, big_n as usize))
    }

    /// Number of independent linear relations among the line sums,
    /// `M*N - sum a_d*|b_d|`.
    pub fn dependency_count(&self, m: usize, n: usize) -> Result<i64> {
        self.validate(m, n)?;
        let cross: i64 = self.directions.iter().map(|d| d.a * d.b.abs()).sum();
        Ok(self.big_m() * self.big_n() - cross)
    }

    /// `(m - M)(n - N)`: the number of switching elements.
    pub fn switching_dimension(&self, m: usize, n: usize) -> Result<usize> {
        let (big_m, big_n) = self.validate(m, n)?;
        Ok((m - big_m) * (n - big_n))
    }
}

impl TryFrom<Vec<Direction>> for DirectionSet {
    type Error = Error;

    fn try_from(v: Vec<Direction>) -> Result<Self> {
        DirectionSet::new(v)
    }
}

impl From<DirectionSet> for Vec<Direction> {
    fn from(s: DirectionSet) -> Self {
        s.directions
    }
}

impl<'a> IntoIterator for &'a DirectionSet {
    type Item = &'a Direction;
    type IntoIter = std::slice::Iter<'a, Direction>;

    fn into_iter(self) -> Self::IntoIter {
        self.directions.iter()
    }
}

/// All normalized directions with `a <= max_a` and `|b| <= max_b`.
pub fn all_directions(max_a: i64, max_b: i64) -> Vec<Direction> {
    let mut out = Vec::new();
    for a in 0..=max_a {
        for b in -max_b..=max_b {
            if let Ok(d) = Direction::new(a, b) {
                out.push(d);
            }
        }
    }
    out
}

/// Every direction set with at most `max_k` directions that is valid for `m x n`.
pub fn valid_direction_sets(m: usize, n: usize, max_k: usize) -> Vec<DirectionSet> {
    let pool = all_directions(m as i64 - 1, n as i64 - 1);
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(
        pool: &[Direction],
        start: usize,
        max_k: usize,
        m: usize,
        n: usize,
        current: &mut Vec<Direction>,
        out: &mut Vec<DirectionSet>,
    ) {
        for idx in start..pool.len() {
            current.push(pool[idx]);
            let set = DirectionSet {
                directions: current.clone(),
            };
            if set.validate(m, n).is_ok() {
                out.push(set);
                if current.len() < max_k {
                    extend(pool, idx + 1, max_k, m, n, current, out);
                }
            }
            current.pop();
        }
    }
    extend(&pool, 0, max_k, m, n, &mut current, &mut out);
    out
}
