//! Row and column integrals on the box `T = [0, m] x [0, n]`.
//!
//! Sets are finite unions of axis-aligned rectangles, so every profile is a
//! step function with rational breakpoints and every integral is exact.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rational::{q, q_frac, Q};

/// `[x1, x2] x [y1, y2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub x1: Q,
    pub y1: Q,
    pub x2: Q,
    pub y2: Q,
}

impl Rect {
    pub fn new(x1: Q, y1: Q, x2: Q, y2: Q) -> Self {
        Rect { x1, y1, x2, y2 }
    }

    pub fn area(&self) -> Q {
        (&self.x2 - &self.x1) * (&self.y2 - &self.y1)
    }

    fn overlaps(&self, other: &Rect) -> bool {
        self.x1 < other.x2 && other.x1 < self.x2 && self.y1 < other.y2 && other.y1 < self.y2
    }
}

/// Interior-disjoint rectangles inside `[0, m] x [0, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RectUnion {
    m: Q,
    n: Q,
    rects: Vec<Rect>,
}

impl RectUnion {
    pub fn new(m: Q, n: Q, rects: Vec<Rect>) -> Result<Self> {
        if !m.is_positive() || !n.is_positive() {
            return Err(Error::DimensionMismatch(
                "box sides must be positive".into(),
            ));
        }
        for (index, r) in rects.iter().enumerate() {
            let reason = if r.x1 >= r.x2 || r.y1 >= r.y2 {
                Some("needs x1 < x2 and y1 < y2")
            } else if r.x1.is_negative() || r.y1.is_negative() || r.x2 > m || r.y2 > n {
                Some("outside the box")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(Error::InvalidRectangle {
                    index,
                    reason: reason.into(),
                });
            }
        }
        for k in 0..rects.len() {
            for l in k + 1..rects.len() {
                if rects[k].overlaps(&rects[l]) {
                    return Err(Error::OverlappingRectangles(k, l));
                }
            }
        }
        Ok(RectUnion { m, n, rects })
    }

    /// Union of the unit cells `[i, i+1] x [j, j+1]` where `g(i, j) = 1`.
    pub fn from_binary_grid(g: &Grid<i64>) -> Result<Self> {
        g.check_binary()?;
        let rects = g
            .positions()
            .filter(|&(i, j)| *g.get(i, j) == 1)
            .map(|(i, j)| {
                let (i, j) = (i as i64, j as i64);
                Rect::new(q(i), q(j), q(i + 1), q(j + 1))
            })
            .collect();
        RectUnion::new(q(g.m() as i64), q(g.n() as i64), rects)
    }

    pub fn m(&self) -> &Q {
        &self.m
    }

    pub fn n(&self) -> &Q {
        &self.n
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    /// `lambda(A)`.
    pub fn measure(&self) -> Q {
        self.rects.iter().map(Rect::area).sum()
    }

    /// Characteristic function as a separable test function.
    pub fn indicator(&self) -> SeparableTestFn {
        SeparableTestFn {
            terms: self
                .rects
                .iter()
                .map(|r| {
                    (
                        StepProfile::indicator(&r.x1, &r.x2),
                        StepProfile::indicator(&r.y1, &r.y2),
                    )
                })
                .collect(),
        }
    }
}

/// Piecewise-constant function: `values[k]` on `[breakpoints[k], breakpoints[k+1])`,
/// zero outside `[breakpoints[0], breakpoints[last]]`. The last interval is
/// closed on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepProfile {
    breakpoints: Vec<Q>,
    values: Vec<Q>,
}

impl StepProfile {
    pub fn new(breakpoints: Vec<Q>, values: Vec<Q>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DimensionMismatch(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(StepProfile {
            breakpoints,
            values,
        })
    }

    pub fn constant(lo: &Q, hi: &Q, value: Q) -> Self {
        StepProfile {
            breakpoints: vec![lo.clone(), hi.clone()],
            values: vec![value],
        }
    }

    /// `1` on `[lo, hi]`.
    pub fn indicator(lo: &Q, hi: &Q) -> Self {
        Self::constant(lo, hi, q(1))
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn lo(&self) -> &Q {
        &self.breakpoints[0]
    }

    pub fn hi(&self) -> &Q {
        self.breakpoints.last().expect("nonempty")
    }

    pub fn eval(&self, x: &Q) -> Q {
        if x < self.lo() || x > self.hi() {
            return Q::zero();
        }
        // Index of the last breakpoint <= x, clamped to the final interval.
        let k = self.breakpoints.partition_point(|b| b <= x);
        self.values[(k - 1).min(self.values.len() - 1)].clone()
    }

    pub fn integral(&self) -> Q {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(v, w)| v * (&w[1] - &w[0]))
            .sum()
    }

    /// `int u(x) w(x) dx`, exact.
    pub fn integral_product(&self, other: &StepProfile) -> Q {
        let cuts: BTreeSet<&Q> = self.breakpoints.iter().chain(&other.breakpoints).collect();
        let cuts: Vec<&Q> = cuts.into_iter().collect();
        let half = q_frac(1, 2);
        cuts.windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) * &half;
                self.eval(&mid) * other.eval(&mid) * (w[1] - w[0])
            })
            .sum()
    }

    pub fn scale(&self, factor: &Q) -> Self {
        StepProfile {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self + c` on the same support.
    pub fn shift(&self, c: &Q) -> Self {
        StepProfile {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Sum of step functions, on the union of their breakpoints.
    pub fn add(&self, other: &StepProfile) -> Self {
        let cuts: BTreeSet<Q> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .cloned()
            .collect();
        let breakpoints: Vec<Q> = cuts.into_iter().collect();
        let half = q_frac(1, 2);
        let values = breakpoints
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) * &half;
                self.eval(&mid) + other.eval(&mid)
            })
            .collect();
        StepProfile {
            breakpoints,
            values,
        }
    }

    /// Same function with equal neighbouring pieces merged.
    pub fn simplify(&self) -> Self {
        let mut breakpoints = vec![self.breakpoints[0].clone()];
        let mut values: Vec<Q> = Vec::new();
        for (k, v) in self.values.iter().enumerate() {
            if values.last() == Some(v) {
                *breakpoints.last_mut().expect("nonempty") = self.breakpoints[k + 1].clone();
            } else {
                values.push(v.clone());
                breakpoints.push(self.breakpoints[k + 1].clone());
            }
        }
        StepProfile {
            breakpoints,
            values,
        }
    }

    /// Equal as functions on `[lo, hi]` (up to breakpoint refinement).
    pub fn same_function(&self, other: &StepProfile) -> bool {
        let diff = self.add(&other.scale(&q(-1)));
        diff.values.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profiles {
    /// `c(x) = int_0^n f_A(x, y) dy`.
    pub col: StepProfile,
    /// `r(y) = int_0^m f_A(x, y) dx`.
    pub row: StepProfile,
    /// `lambda(A)`.
    pub measure: Q,
}

fn coverage_profile(lo: &Q, hi: &Q, spans: impl Iterator<Item = (Q, Q, Q)> + Clone) -> StepProfile {
    let mut cuts: BTreeSet<Q> = BTreeSet::from([lo.clone(), hi.clone()]);
    for (a, b, _) in spans.clone() {
        cuts.insert(a);
        cuts.insert(b);
    }
    let breakpoints: Vec<Q> = cuts.into_iter().collect();
    let values = breakpoints
        .windows(2)
        .map(|w| {
            spans
                .clone()
                .filter(|(a, b, _)| *a <= w[0] && w[1] <= *b)
                .map(|(_, _, len)| len)
                .sum()
        })
        .collect();
    StepProfile {
        breakpoints,
        values,
    }
    .simplify()
}

pub fn profiles(a: &RectUnion) -> Profiles {
    let zero = Q::zero();
    let rects = a.rects.iter();
    let col = coverage_profile(
        &zero,
        &a.m,
        rects
            .clone()
            .map(|r| (r.x1.clone(), r.x2.clone(), &r.y2 - &r.y1)),
    );
    let row = coverage_profile(
        &zero,
        &a.n,
        rects.map(|r| (r.y1.clone(), r.y2.clone(), &r.x2 - &r.x1)),
    );
    Profiles {
        col,
        row,
        measure: a.measure(),
    }
}

/// `f0(x, y) = c(x)/n + r(y)/m - lambda(A)/(m n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableF0 {
    pub m: Q,
    pub n: Q,
    /// `c(x) / n` on `[0, m]`.
    pub col_profile: StepProfile,
    /// `r(y) / m` on `[0, n]`.
    pub row_profile: StepProfile,
    /// `-lambda(A) / (m n)`.
    pub constant: Q,
}

impl SeparableF0 {
    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.col_profile.eval(x) + self.row_profile.eval(y) + &self.constant
    }

    /// `x -> int_0^n f0(x, y) dy`.
    pub fn column_integrals(&self) -> StepProfile {
        let offset = self.row_profile.integral() + &self.constant * &self.n;
        self.col_profile.scale(&self.n).shift(&offset)
    }

    /// `y -> int_0^m f0(x, y) dx`.
    pub fn row_integrals(&self) -> StepProfile {
        let offset = self.col_profile.integral() + &self.constant * &self.m;
        self.row_profile.scale(&self.m).shift(&offset)
    }

    /// As a sum of products `u(x) v(y)`.
    pub fn as_test_fn(&self) -> SeparableTestFn {
        let zero = Q::zero();
        let one_x = StepProfile::indicator(&zero, &self.m);
        let one_y = StepProfile::indicator(&zero, &self.n);
        SeparableTestFn {
            terms: vec![
                (self.col_profile.clone(), one_y.clone()),
                (one_x.clone(), self.row_profile.clone()),
                (one_x.scale(&self.constant), one_y),
            ],
        }
    }

    pub fn norm_sq(&self) -> Q {
        inner_product(self, &self.as_test_fn())
    }
}

pub fn continuous_project(a: &RectUnion) -> SeparableF0 {
    let p = profiles(a);
    SeparableF0 {
        col_profile: p.col.scale(&(q(1) / &a.n)),
        row_profile: p.row.scale(&(q(1) / &a.m)),
        constant: -(&p.measure / (&a.m * &a.n)),
        m: a.m.clone(),
        n: a.n.clone(),
    }
}

/// `h(x, y) = sum_k u_k(x) v_k(y)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeparableTestFn {
    pub terms: Vec<(StepProfile, StepProfile)>,
}

impl SeparableTestFn {
    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.terms.iter().map(|(u, v)| u.eval(x) * v.eval(y)).sum()
    }

    /// `x -> int h(x, y) dy`, on the given support.
    pub fn column_integrals(&self, lo: &Q, hi: &Q) -> StepProfile {
        self.terms
            .iter()
            .fold(StepProfile::constant(lo, hi, Q::zero()), |acc, (u, v)| {
                acc.add(&u.scale(&v.integral()))
            })
    }

    /// `y -> int h(x, y) dx`, on the given support.
    pub fn row_integrals(&self, lo: &Q, hi: &Q) -> StepProfile {
        self.terms
            .iter()
            .fold(StepProfile::constant(lo, hi, Q::zero()), |acc, (u, v)| {
                acc.add(&v.scale(&u.integral()))
            })
    }
}

/// `int int f0 h dx dy`, exact.
pub fn inner_product(f: &SeparableF0, h: &SeparableTestFn) -> Q {
    h.terms
        .iter()
        .map(|(u, v)| {
            let (iu, iv) = (u.integral(), v.integral());
            f.col_profile.integral_product(u) * &iv
                + &iu * f.row_profile.integral_product(v)
                + &f.constant * &iu * &iv
        })
        .sum()
}

/// `int int h1 h2 dx dy`, exact.
pub fn test_fn_inner_product(h1: &SeparableTestFn, h2: &SeparableTestFn) -> Q {
    let mut acc = Q::zero();
    for (u1, v1) in &h1.terms {
        for (u2, v2) in &h2.terms {
            acc += u1.integral_product(u2) * v1.integral_product(v2);
        }
    }
    acc
}
