//! Line sums on the square torus `(Z/nZ)^2`.
//!
//! A torus line in direction `(a, b)` through `(i, j)` is the orbit
//! `{(i, j) + t (a, b) mod n}`; equivalently the points with
//! `b x - a y = b i - a j (mod n)`. For pairwise independent directions
//! the minimum-norm solution has a closed form.

use std::fmt;
use std::ops::AddAssign;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{positions, Grid};
use crate::rational::{self, q, Q};

/// A direction `(a, b)` admissible on the `n x n` torus:
/// `0 <= a, b < n` and `gcd(a, b) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusDirection {
    a: usize,
    b: usize,
}

impl TorusDirection {
    pub fn new(a: i64, b: i64, n: usize) -> Result<Self> {
        let ok = a >= 0 && b >= 0 && (a as usize) < n && (b as usize) < n && a.gcd(&b) == 1;
        if !ok {
            return Err(Error::NotAdmissible { a, b, n });
        }
        Ok(TorusDirection {
            a: a as usize,
            b: b as usize,
        })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Residue `b x - a y mod n` shared by all points of one line.
    fn class_of(&self, x: usize, y: usize, n: usize) -> usize {
        ((self.b * x) % n + n - (self.a * y) % n) % n
    }
}

impl fmt::Display for TorusDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// All admissible directions for modulus `n`.
pub fn admissible_directions(n: usize) -> Vec<TorusDirection> {
    let mut out = Vec::new();
    for a in 0..n as i64 {
        for b in 0..n as i64 {
            if let Ok(d) = TorusDirection::new(a, b, n) {
                out.push(d);
            }
        }
    }
    out
}

/// The `n` points `p + t (a, b) mod n`, `t = 0..n`.
pub fn torus_line(d: TorusDirection, p: (usize, usize), n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .map(|t| ((p.0 + t * d.a) % n, (p.1 + t * d.b) % n))
        .collect()
}

/// `gcd(a d - b c, n) = 1`.
pub fn are_independent(d1: TorusDirection, d2: TorusDirection, n: usize) -> bool {
    let det = d1.a as i64 * d2.b as i64 - d1.b as i64 * d2.a as i64;
    det.gcd(&(n as i64)) == 1
}

/// The partition of the torus into the `n` lines of one direction.
///
/// Representative `P_t` is the lexicographically first point not covered by
/// the lines through `P_0, ..., P_{t-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLines {
    n: usize,
    direction: TorusDirection,
    representatives: Vec<(usize, usize)>,
    /// Line index `t` for each residue class.
    class_index: Vec<usize>,
}

impl TorusLines {
    pub fn new(direction: TorusDirection, n: usize) -> Self {
        let mut class_index = vec![usize::MAX; n];
        let mut representatives = Vec::with_capacity(n);
        for (i, j) in positions(n, n) {
            let c = direction.class_of(i, j, n);
            if class_index[c] == usize::MAX {
                class_index[c] = representatives.len();
                representatives.push((i, j));
            }
        }
        TorusLines {
            n,
            direction,
            representatives,
            class_index,
        }
    }

    pub fn direction(&self) -> TorusDirection {
        self.direction
    }

    pub fn representatives(&self) -> &[(usize, usize)] {
        &self.representatives
    }

    /// Index `t` of the line through `(i, j)`.
    pub fn index_of(&self, i: usize, j: usize) -> usize {
        self.class_index[self.direction.class_of(i, j, self.n)]
    }

    pub fn line(&self, t: usize) -> Vec<(usize, usize)> {
        torus_line(self.direction, self.representatives[t], self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusInstance<T> {
    n: usize,
    lines: Vec<TorusLines>,
    /// Per direction, the `n` sums `L((a, b), t)`.
    line_sums: Vec<Vec<T>>,
}

impl<T: Clone + Zero + for<'a> AddAssign<&'a T>> TorusInstance<T> {
    pub fn new(n: usize, directions: Vec<TorusDirection>, line_sums: Vec<Vec<T>>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::EmptyDirectionSet);
        }
        if line_sums.len() != directions.len() || line_sums.iter().any(|s| s.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} lists of {n} torus line sums",
                directions.len()
            )));
        }
        for (k, d) in directions.iter().enumerate() {
            if d.a >= n || d.b >= n {
                return Err(Error::NotAdmissible {
                    a: d.a as i64,
                    b: d.b as i64,
                    n,
                });
            }
            if directions[..k].contains(d) {
                return Err(Error::DuplicateDirection {
                    a: d.a as i64,
                    b: d.b as i64,
                });
            }
        }
        Ok(TorusInstance {
            n,
            lines: directions
                .into_iter()
                .map(|d| TorusLines::new(d, n))
                .collect(),
            line_sums,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directions(&self) -> Vec<TorusDirection> {
        self.lines.iter().map(TorusLines::direction).collect()
    }

    pub fn lines(&self) -> &[TorusLines] {
        &self.lines
    }

    pub fn line_sums(&self) -> &[Vec<T>] {
        &self.line_sums
    }

    /// Sum of the line sums per direction.
    pub fn direction_totals(&self) -> Vec<T> {
        self.line_sums
            .iter()
            .map(|sums| {
                let mut acc = T::zero();
                for v in sums {
                    acc += v;
                }
                acc
            })
            .collect()
    }

    /// `T_g`, read off the first direction.
    pub fn total(&self) -> T {
        self.direction_totals().swap_remove(0)
    }
}

/// Torus line sums of an `n x n` grid.
pub fn torus_line_sums<T>(g: &Grid<T>, directions: &[TorusDirection]) -> Result<TorusInstance<T>>
where
    T: Clone + Zero + for<'a> AddAssign<&'a T>,
{
    let n = g.m();
    if g.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "torus grids are square, got {}x{}",
            g.m(),
            g.n()
        )));
    }
    let sums = directions
        .iter()
        .map(|&d| {
            if d.a >= n || d.b >= n {
                return Err(Error::NotAdmissible {
                    a: d.a as i64,
                    b: d.b as i64,
                    n,
                });
            }
            let lines = TorusLines::new(d, n);
            let mut sums = vec![T::zero(); n];
            for (i, j) in positions(n, n) {
                sums[lines.index_of(i, j)] += g.get(i, j);
            }
            Ok(sums)
        })
        .collect::<Result<Vec<_>>>()?;
    TorusInstance::new(n, directions.to_vec(), sums)
}

/// Shortest solution for pairwise independent directions:
/// `f0(i, j) = sum_d L_d(t_d(i, j)) / n - (k - 1) T / n^2`.
pub fn torus_project(inst: &TorusInstance<Q>) -> Result<Grid<Q>> {
    let n = inst.n;
    let dirs = inst.directions();
    for (k, &d1) in dirs.iter().enumerate() {
        for &d2 in &dirs[k + 1..] {
            if !are_independent(d1, d2, n) {
                return Err(Error::DependentDirections {
                    a: d1.a as i64,
                    b: d1.b as i64,
                    c: d2.a as i64,
                    d: d2.b as i64,
                    n,
                });
            }
        }
    }
    let totals = inst.direction_totals();
    if totals.iter().any(|t| *t != totals[0]) {
        let shown: Vec<String> = totals.iter().map(rational::format_q).collect();
        return Err(Error::InconsistentTotals(format!(
            "torus direction totals differ: {}",
            shown.join(", ")
        )));
    }
    let nq = q(n as i64);
    let shift = q(dirs.len() as i64 - 1) * &totals[0] / (&nq * &nq);
    Ok(Grid::from_fn(n, n, |i, j| {
        let mut acc = -shift.clone();
        for (lines, sums) in inst.lines.iter().zip(&inst.line_sums) {
            acc += &sums[lines.index_of(i, j)] / &nq;
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn dir(a: i64, b: i64, n: usize) -> TorusDirection {
        TorusDirection::new(a, b, n).unwrap()
    }

    #[test]
    fn line_through_origin_mod_5() {
        assert_eq!(
            torus_line(dir(1, 2, 5), (0, 0), 5),
            vec![(0, 0), (1, 2), (2, 4), (3, 1), (4, 3)]
        );
    }

    #[test]
    fn admissibility() {
        assert!(TorusDirection::new(0, 0, 5).is_err());
        assert!(TorusDirection::new(5, 1, 5).is_err());
        assert!(TorusDirection::new(2, 4, 7).is_err());
        assert!(TorusDirection::new(0, 1, 2).is_ok());
    }

    #[test]
    fn independence() {
        assert!(are_independent(dir(1, 0, 5), dir(0, 1, 5), 5));
        assert!(!are_independent(dir(1, 2, 6), dir(1, 4, 6), 6));
    }

    #[test]
    fn representatives_follow_lexicographic_rule() {
        let lines = TorusLines::new(dir(1, 0, 3), 3);
        // Direction (1,0) lines are rows; first uncovered points are (0,j).
        assert_eq!(lines.representatives(), &[(0, 0), (0, 1), (0, 2)]);
        assert_eq!(lines.index_of(2, 1), 1);
    }

    #[test]
    fn constant_grid() {
        let g = Grid::filled(5, 5, q(3));
        let dirs = vec![dir(1, 0, 5), dir(0, 1, 5), dir(1, 1, 5)];
        let inst = torus_line_sums(&g, &dirs).unwrap();
        assert!(inst.line_sums().iter().flatten().all(|v| *v == q(15)));
        assert_eq!(inst.total(), q(75));
        assert_eq!(torus_project(&inst).unwrap(), g);
    }

    #[test]
    fn single_direction_spreads_evenly() {
        let g = Grid::from_fn(4, 4, |i, j| q((i * 4 + j) as i64));
        let d = dir(1, 1, 4);
        let inst = torus_line_sums(&g, &[d]).unwrap();
        let f0 = torus_project(&inst).unwrap();
        for (i, j) in g.positions() {
            let t = inst.lines()[0].index_of(i, j);
            assert_eq!(*f0.get(i, j), &inst.line_sums()[0][t] / q(4));
        }
    }

    #[test]
    fn errors() {
        let inst = TorusInstance::new(
            6,
            vec![dir(1, 2, 6), dir(1, 4, 6)],
            vec![vec![q(1); 6], vec![q(1); 6]],
        )
        .unwrap();
        assert!(matches!(
            torus_project(&inst),
            Err(Error::DependentDirections { .. })
        ));
        let inst = TorusInstance::new(
            3,
            vec![dir(1, 0, 3), dir(0, 1, 3)],
            vec![vec![q(1); 3], vec![q(1), q(1), q_frac(1, 2)]],
        )
        .unwrap();
        assert!(matches!(
            torus_project(&inst),
            Err(Error::InconsistentTotals(_))
        ));
    }
}
