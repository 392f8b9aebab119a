mod common;

use proptest::prelude::*;

use common::{binary_grid, config, int_grid, simple_sums, small_rational, valid_instance};
use linesum::enumerate::enumerate_binary_solutions;
use linesum::projection::{project_exact, project_general, project_simple};
use linesum::rational::{q, to_f64};
use linesum::stability::{flip_costs, round_binary, stability_bounds};
use linesum::switching::SwitchingBasis;
use linesum::{compute_line_sums, DirectionSet, Grid};

fn simple_binary(max_side: usize) -> impl Strategy<Value = Grid<i64>> {
    (2..=max_side, 2..=max_side).prop_flat_map(|(m, n)| binary_grid(m, n))
}

fn solutions(g: &Grid<i64>, set: &DirectionSet) -> Vec<Grid<i64>> {
    let table = compute_line_sums(g, set);
    let found = enumerate_binary_solutions(&table, set, g.m(), g.n(), 100_000).unwrap();
    assert!(!found.truncated);
    found.solutions
}

proptest! {
    #![proptest_config(config(150))]

    #[test]
    fn closed_form_reproduces_sums(g in (1..=8usize, 1..=8usize).prop_flat_map(|(m, n)| int_grid(m, n, -4, 9))) {
        let (rows, cols) = simple_sums(&g);
        let f0 = project_simple(&rows, &cols).unwrap().f0;
        let got = compute_line_sums(&f0, &DirectionSet::simple());
        let want = compute_line_sums(&g.to_rational(), &DirectionSet::simple());
        prop_assert_eq!(got, want);
    }

    #[test]
    fn f0_is_orthogonal_to_switching_span(
        (g, set, coeffs) in valid_instance(5, 3).prop_flat_map(|(m, n, s)| {
            let dim = (m - s.big_m() as usize) * (n - s.big_n() as usize);
            (int_grid(m, n, 0, 3), Just(s), proptest::collection::vec(small_rational(), dim))
        })
    ) {
        let (m, n) = (g.m(), g.n());
        let table = compute_line_sums(&g.to_rational(), &set);
        let basis = SwitchingBasis::new(&set, m, n).unwrap();
        let h = basis.recompose(&coeffs);

        let exact = project_exact(&table, &set, m, n).unwrap();
        prop_assert_eq!(exact.f0.dot(&h), q(0));

        let numeric = project_general(&table.to_f64(), &set, m, n, 1e-8).unwrap();
        let dot: f64 = numeric.f0.values().iter().zip(h.values()).map(|(a, b)| a * to_f64(b)).sum();
        let scale = (basis.weight() as f64) * g.values().iter().map(|&v| v as f64).fold(1.0, f64::max);
        prop_assert!(dot.abs() <= 1e-8 * scale, "numeric <f0, h> = {}", dot);
        for (a, b) in numeric.f0.values().iter().zip(exact.f0.values()) {
            prop_assert!((a - to_f64(b)).abs() < 1e-9);
        }
    }

    #[test]
    fn general_projector_matches_closed_form(g in (2..=8usize, 2..=8usize).prop_flat_map(|(m, n)| int_grid(m, n, 0, 5))) {
        let (rows, cols) = simple_sums(&g);
        let exact = project_simple(&rows, &cols).unwrap().f0;
        let table = compute_line_sums(&g.map(|&v| v as f64), &DirectionSet::simple());
        let numeric = project_general(&table, &DirectionSet::simple(), g.m(), g.n(), 1e-8).unwrap().f0;
        for (a, b) in numeric.values().iter().zip(exact.values()) {
            prop_assert!((a - to_f64(b)).abs() <= 1e-9);
        }
    }

    #[test]
    fn pythagoras_and_sphere(g in simple_binary(4)) {
        let (rows, cols) = simple_sums(&g);
        let res = project_simple(&rows, &cols).unwrap();
        let total = q(g.total());
        for s in solutions(&g, &DirectionSet::simple()) {
            let s = s.to_rational();
            let mut diff = s.clone();
            diff.sub_assign(&res.f0);
            prop_assert_eq!(s.norm_sq(), &res.norm_sq + diff.norm_sq());
            prop_assert_eq!(diff.norm_sq(), &total - &res.norm_sq);
        }
    }

    #[test]
    fn hamming_bounds_hold(g in simple_binary(5)) {
        let (rows, cols) = simple_sums(&g);
        let f0 = project_simple(&rows, &cols).unwrap().f0;
        let rep = stability_bounds(&f0, &q(g.total())).unwrap();
        let sols = solutions(&g, &DirectionSet::simple());
        for (k, a) in sols.iter().enumerate() {
            prop_assert!(a.hamming(&rep.rounded) <= rep.s);
            for b in &sols[k + 1..] {
                prop_assert!(a.hamming(b) <= rep.t);
            }
        }
    }

    #[test]
    fn zero_slack_means_rounding_is_the_only_solution(g in simple_binary(5)) {
        let (rows, cols) = simple_sums(&g);
        let f0 = project_simple(&rows, &cols).unwrap().f0;
        let rep = stability_bounds(&f0, &q(g.total())).unwrap();
        if rep.slack == q(0) && rep.tie_positions.is_empty() {
            prop_assert_eq!(solutions(&g, &DirectionSet::simple()), vec![rep.rounded]);
        }
    }

    #[test]
    fn flip_cost_is_the_change_in_distance(f0 in (1..=5usize, 1..=5usize).prop_flat_map(|(m, n)| {
        proptest::collection::vec(small_rational(), m * n)
            .prop_map(move |v| Grid::from_fn(m, n, |i, j| v[j * m + i].clone()))
    })) {
        let rounded = round_binary(&f0);
        for b in flip_costs(&f0) {
            let (i, j) = b.position;
            let v = f0.get(i, j);
            let keep = v - q(*rounded.grid.get(i, j));
            let flip = v - q(1 - *rounded.grid.get(i, j));
            prop_assert_eq!(&flip * &flip - &keep * &keep, b.cost);
        }
    }
}

/// Row sums 3, 2, 1 and column sums 3, 2, 1 force the staircase.
#[test]
fn staircase_is_unique() {
    let g = Grid::binary(vec![vec![1, 1, 1], vec![1, 1, 0], vec![1, 0, 0]]).unwrap();
    let (rows, cols) = simple_sums(&g);
    let f0 = project_simple(&rows, &cols).unwrap().f0;
    let rep = stability_bounds(&f0, &q(6)).unwrap();
    assert_eq!(rep.rounded, g);
    assert_eq!(rep.s, 0);
    assert_eq!(solutions(&g, &DirectionSet::simple()), vec![g]);
}
