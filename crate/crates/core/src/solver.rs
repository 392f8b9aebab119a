//! Matrix-free Krylov solvers over the line-sum operator.

use crate::lines::LineOperator;

#[derive(Debug, Clone)]
pub struct Solve {
    pub solution: Vec<f64>,
    pub iterations: usize,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Minimum-norm solution of the consistent system `A x = b`: conjugate
/// gradients on `A A^T y = b` carried out in cell space, `x = A^T y`.
pub fn cgne(op: &LineOperator, b: &[f64], max_iter: usize, rel_tol: f64) -> Solve {
    let mut x = vec![0.0; op.num_cells()];
    let mut r = b.to_vec();
    let mut rr = dot(&r, &r);
    let stop = rel_tol * rel_tol * rr;
    if rr == 0.0 {
        return Solve {
            solution: x,
            iterations: 0,
        };
    }
    let mut p = op.apply_transpose(&r);
    let mut iterations = 0;
    while iterations < max_iter && rr > stop {
        let pp = dot(&p, &p);
        if pp == 0.0 {
            break;
        }
        let alpha = rr / pp;
        axpy(alpha, &p, &mut x);
        let ap = op.apply(&p);
        axpy(-alpha, &ap, &mut r);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        let atr = op.apply_transpose(&r);
        for (pi, ai) in p.iter_mut().zip(&atr) {
            *pi = ai + beta * *pi;
        }
        iterations += 1;
    }
    Solve {
        solution: x,
        iterations,
    }
}

/// Least-squares solution of `A x ~ b` started from zero, so the result is
/// also the minimum-norm least-squares solution.
pub fn cgls(op: &LineOperator, b: &[f64], max_iter: usize, rel_tol: f64) -> Solve {
    let mut x = vec![0.0; op.num_cells()];
    let mut r = b.to_vec();
    let mut s = op.apply_transpose(&r);
    let mut p = s.clone();
    let mut gamma = dot(&s, &s);
    let stop = rel_tol * rel_tol * gamma;
    let mut iterations = 0;
    while iterations < max_iter && gamma > stop && gamma > 0.0 {
        let q = op.apply(&p);
        let qq = dot(&q, &q);
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &q, &mut r);
        s = op.apply_transpose(&r);
        let gamma_new = dot(&s, &s);
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
        iterations += 1;
    }
    Solve {
        solution: x,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direction::DirectionSet;

    #[test]
    fn cgne_reproduces_consistent_sums() {
        let set = DirectionSet::from_pairs(&[(1, 0), (0, 1), (1, 1)]).unwrap();
        let op = LineOperator::new(&set, 5, 4).unwrap();
        let g: Vec<f64> = (0..20).map(|k| ((k * 7) % 5) as f64).collect();
        let b = op.apply(&g);
        let sol = cgne(&op, &b, 10 * op.num_lines(), 1e-12);
        let ax = op.apply(&sol.solution);
        for (p, q) in ax.iter().zip(&b) {
            assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let op = LineOperator::new(&DirectionSet::simple(), 3, 3).unwrap();
        let sol = cgne(&op, &vec![0.0; op.num_lines()], 100, 1e-12);
        assert!(sol.solution.iter().all(|&v| v == 0.0));
        assert_eq!(sol.iterations, 0);
    }
}
