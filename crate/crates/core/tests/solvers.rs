use gape_kit::graph::erdos_renyi;
use gape_kit::sylvester::{solve_fixed_point, solve_gape_system, SolveMethod, Strategy};
use gape_kit::verify::random_solver_instance;
use gape_kit::wgwa::{encode_gape, init_damped};

fn iterations_at(seed: u64, target: f64) -> Option<usize> {
    let inst = random_solver_instance(seed);
    if inst.rho_product < 1e-9 {
        return None;
    }
    let left = inst.left().scale(target / inst.rho_product);
    let (_, rep) = solve_fixed_point(&left, &inst.a, &inst.c, 1e-12, 100_000).unwrap();
    Some(rep.iterations)
}

#[test]
fn fixed_point_iterations_grow_with_rho_product() {
    let mut compared = 0;
    for seed in 0..40 {
        if let (Some(low), Some(high)) = (iterations_at(seed, 0.1), iterations_at(seed, 0.9)) {
            assert!(low <= high, "seed {seed}: {low} vs {high}");
            compared += 1;
        }
    }
    assert!(compared >= 30);
    let (low, high): (usize, usize) = (0..40)
        .filter_map(|s| Some((iterations_at(s, 0.1)?, iterations_at(s, 0.9)?)))
        .fold((0, 0), |(a, b), (l, h)| (a + l, b + h));
    assert!(low < high);
}

#[test]
fn auto_dispatch_by_system_size() {
    let small = erdos_renyi(20, 0.2, 1).unwrap();
    let w = init_damped(32, small.label_count(), 0.02, 0).unwrap();
    let (_, rep) = encode_gape(&small, &w, Strategy::Auto).unwrap();
    assert_eq!(rep.method, SolveMethod::Kronecker);

    let large = erdos_renyi(200, 0.02, 1).unwrap();
    let w = init_damped(32, large.label_count(), 0.002, 0).unwrap();
    let (_, rep) = encode_gape(&large, &w, Strategy::Auto).unwrap();
    assert_eq!(rep.method, SolveMethod::Schur);
}

#[test]
fn strategies_agree_relative_to_solution_size() {
    for seed in 0..25 {
        let inst = random_solver_instance(seed);
        let left = inst.left();
        let solve = |s| solve_gape_system(&left, &inst.a, &inst.c, s).unwrap().0;
        let p = solve(Strategy::Kronecker);
        let bound = 1e-7 * p.max_abs().max(1.0);
        for s in [Strategy::FixedPoint, Strategy::Schur] {
            assert!(solve(s).max_abs_diff(&p) <= bound, "seed {seed} {s:?}");
        }
    }
}
