mod common;

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use common::{config, int_grid};
use linesum::rational::q;
use linesum::torus::{
    admissible_directions, are_independent, torus_line_sums, torus_project, TorusDirection,
    TorusLines,
};
use linesum::Grid;

/// Greedy pairwise independent subset of `pool`, at most `k` long.
fn independent_subset(pool: &[TorusDirection], n: usize, k: usize) -> Vec<TorusDirection> {
    let mut out: Vec<TorusDirection> = Vec::new();
    for &d in pool {
        if out.len() == k {
            break;
        }
        if out.iter().all(|&e| are_independent(d, e, n)) {
            out.push(d);
        }
    }
    out
}

fn instance() -> impl Strategy<Value = (Grid<i64>, Vec<TorusDirection>)> {
    (2..=9usize, 1..=4usize).prop_flat_map(|(n, k)| {
        let pool = admissible_directions(n);
        (
            int_grid(n, n, -3, 6),
            Just(pool)
                .prop_shuffle()
                .prop_map(move |p| independent_subset(&p, n, k)),
        )
    })
}

#[test]
fn lines_partition_the_torus() {
    for n in 2..=12usize {
        for d in admissible_directions(n) {
            let lines = TorusLines::new(d, n);
            let mut seen = BTreeSet::new();
            for t in 0..n {
                let line = lines.line(t);
                assert_eq!(line.len(), n);
                for &(i, j) in &line {
                    assert_eq!(lines.index_of(i, j), t, "n={n} d={d}");
                    assert!(seen.insert((i, j)), "n={n} d={d} covers ({i},{j}) twice");
                }
            }
            assert_eq!(seen.len(), n * n);
        }
    }
}

#[test]
fn independent_lines_cross_once() {
    for n in 2..=9usize {
        let dirs = admissible_directions(n);
        for &d1 in &dirs {
            for &d2 in &dirs {
                if d1 == d2 || !are_independent(d1, d2, n) {
                    continue;
                }
                let (l1, l2) = (TorusLines::new(d1, n), TorusLines::new(d2, n));
                for t in 0..n {
                    let a: BTreeSet<_> = l1.line(t).into_iter().collect();
                    for u in 0..n {
                        let hits = l2.line(u).iter().filter(|p| a.contains(p)).count();
                        assert_eq!(hits, 1, "n={n} {d1} {d2}");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn projection_reproduces_sums((g, dirs) in instance()) {
        let inst = torus_line_sums(&g.to_rational(), &dirs).unwrap();
        let f0 = torus_project(&inst).unwrap();
        let back = torus_line_sums(&f0, &dirs).unwrap();
        prop_assert_eq!(back.line_sums(), inst.line_sums());
    }

    #[test]
    fn projection_is_orthogonal_to_the_difference((g, dirs) in instance()) {
        let g = g.to_rational();
        let f0 = torus_project(&torus_line_sums(&g, &dirs).unwrap()).unwrap();
        let mut diff = g.clone();
        diff.sub_assign(&f0);
        prop_assert_eq!(f0.dot(&diff), q(0));
    }
}

/// Every binary `n x n` grid, grouped by its line sums.
#[test]
fn projection_is_the_shortest_solution() {
    for n in 2..=4usize {
        let pool = admissible_directions(n);
        for k in 2..=3 {
            let dirs = independent_subset(&pool, n, k);
            if dirs.len() < k {
                continue;
            }
            let mut classes: HashMap<Vec<Vec<i64>>, Vec<Grid<i64>>> = HashMap::new();
            for bits in 0u32..1 << (n * n) {
                let g = Grid::from_fn(n, n, |i, j| i64::from(bits >> (j * n + i) & 1));
                let sums = torus_line_sums(&g, &dirs).unwrap().line_sums().to_vec();
                classes.entry(sums).or_default().push(g);
            }
            for members in classes.values() {
                let inst = torus_line_sums(&members[0].to_rational(), &dirs).unwrap();
                let f0 = torus_project(&inst).unwrap();
                for g in members {
                    let g = g.to_rational();
                    assert!(f0.norm_sq() <= g.norm_sq());
                    assert_eq!(f0.norm_sq() == g.norm_sq(), f0 == g, "n={n} k={k}");
                }
            }
        }
    }
}
