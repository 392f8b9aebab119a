mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{binary_grid, config, int_grid, valid_instance};
use linesum::lattice::{construct_integer_solution, nearest_integer_solution, LatticeMethod};
use linesum::projection::project_exact;
use linesum::rational::{q, q_frac, Q};
use linesum::{compute_line_sums, DirectionSet, Grid, LineSumTable};

fn f0_of(table: &LineSumTable<i64>, set: &DirectionSet, m: usize, n: usize) -> Grid<Q> {
    project_exact(&table.to_rational(), set, m, n).unwrap().f0
}

proptest! {
    #![proptest_config(config(150))]

    #[test]
    fn constructed_solution_has_the_sums(
        (g, set) in valid_instance(6, 3).prop_flat_map(|(m, n, s)| (int_grid(m, n, -3, 3), Just(s)))
    ) {
        let table = compute_line_sums(&g, &set);
        let f = construct_integer_solution(&table, &set, g.m(), g.n()).unwrap();
        prop_assert_eq!(compute_line_sums(&f, &set), table);
    }

    #[test]
    fn nearest_solution_is_within_the_bound(
        (g, set) in valid_instance(6, 3).prop_flat_map(|(m, n, s)| (int_grid(m, n, -3, 3), Just(s)))
    ) {
        let (m, n) = (g.m(), g.n());
        let table = compute_line_sums(&g, &set);
        let h = f0_of(&table, &set, m, n);
        let sol = nearest_integer_solution(&h, &table, &set, m, n).unwrap();
        prop_assert_eq!(compute_line_sums(&sol.f, &set), table);
        prop_assert!(sol.within_bound());
        if sol.method == LatticeMethod::BabaiRounding {
            let half = q_frac(1, 2);
            prop_assert!(sol.offsets.iter().all(|c| c.abs() <= half));
        }
    }

    #[test]
    fn integer_solutions_are_at_least_as_long_as_binary_ones(
        (g, set) in valid_instance(5, 3).prop_flat_map(|(m, n, s)| (binary_grid(m, n), Just(s)))
    ) {
        let (m, n) = (g.m(), g.n());
        let table = compute_line_sums(&g, &set);
        let total = q(g.total());
        let built = construct_integer_solution(&table, &set, m, n).unwrap();
        prop_assert!(q(built.norm_sq()) >= total);
        let near = nearest_integer_solution(&f0_of(&table, &set, m, n), &table, &set, m, n).unwrap();
        prop_assert!(q(near.f.norm_sq()) >= total);
    }
}

/// Every integer grid with entries in `lo..=hi`, by odometer.
fn all_grids(m: usize, n: usize, lo: i64, hi: i64, mut visit: impl FnMut(&Grid<i64>)) {
    let mut g = Grid::filled(m, n, lo);
    loop {
        visit(&g);
        let mut k = 0;
        loop {
            if k == m * n {
                return;
            }
            let (i, j) = (k % m, k / m);
            if *g.get(i, j) < hi {
                *g.get_mut(i, j) += 1;
                break;
            }
            g.set(i, j, lo);
            k += 1;
        }
    }
}

#[test]
fn binary_solutions_are_the_shortest_integer_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let set = DirectionSet::simple();
    for _ in 0..12 {
        let (m, n) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let g = Grid::from_fn(m, n, |_, _| rng.gen_range(0..=1i64));
        let table = compute_line_sums(&g, &set);
        let mut shortest = i64::MAX;
        all_grids(m, n, -2, 2, |f| {
            if compute_line_sums(f, &set) == table {
                shortest = shortest.min(f.norm_sq());
            }
        });
        assert_eq!(shortest, g.total(), "{g}");
        let near =
            nearest_integer_solution(&f0_of(&table, &set, m, n), &table, &set, m, n).unwrap();
        assert!(near.f.norm_sq() >= shortest);
    }
}
