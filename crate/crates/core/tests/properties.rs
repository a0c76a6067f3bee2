use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gape_kit::baseline::{minmax_columns, ppr_matrix};
use gape_kit::compare::pearson;
use gape_kit::encoding::{read_csv, write_csv};
use gape_kit::graph::{csl_graph, erdos_renyi, walk_matrix, LabeledGraph};
use gape_kit::numerics::{kronecker, solve_dense};
use gape_kit::sylvester::{residual, solve_kronecker, solve_schur, Strategy as Solver};
use gape_kit::wgwa::{encode_gape, init_damped, random_orthogonal};
use gape_kit::DenseMatrix;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-1.0f64..1.0, rows * cols).prop_map(move |v| DenseMatrix::from_vec(rows, cols, v).unwrap())
}

fn square_pair() -> impl Strategy<Value = (DenseMatrix, DenseMatrix)> {
    (1usize..6, 1usize..8).prop_flat_map(|(k, n)| (matrix(k, k), matrix(n, n)))
}

/// Scales `m` so that ρ(m)·ρ(n) equals `target` (when both radii are nonzero).
fn well_posed(m: &DenseMatrix, n: &DenseMatrix, target: f64) -> DenseMatrix {
    let rho = gape_kit::sylvester::rho_product(m, n);
    if rho > 1e-12 {
        m.scale(target / rho)
    } else {
        m.clone()
    }
}

fn graph() -> impl Strategy<Value = LabeledGraph> {
    (2usize..12, 0.1f64..0.9, any::<u64>()).prop_map(|(n, p, seed)| erdos_renyi(n, p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stein_solution_is_linear_in_rhs(
        (m, n) in square_pair(),
        rho in 0.05f64..0.9,
        s in -3.0f64..3.0,
        seed in any::<u64>(),
    ) {
        let m = well_posed(&m, &n, rho);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c1 = random_orthogonal(m.rows().max(n.rows()), &mut rng).block(0, 0, m.rows(), n.rows());
        let c2 = DenseMatrix::from_fn(m.rows(), n.rows(), |i, j| ((i * 7 + j * 3) as f64).sin());
        let x1 = solve_schur(&m, &n, &c1).unwrap().0;
        let x2 = solve_schur(&m, &n, &c2).unwrap().0;
        let x = solve_schur(&m, &n, &c1.add(&c2.scale(s))).unwrap().0;
        let scale = x1.max_abs().max(x2.max_abs()).max(1.0);
        prop_assert!(x.max_abs_diff(&x1.add(&x2.scale(s))) <= 1e-9 * scale * (1.0 + s.abs()));
    }

    #[test]
    fn schur_and_kronecker_agree((m, n) in square_pair(), rho in 0.0f64..0.95, c_seed in any::<u64>()) {
        let m = well_posed(&m, &n, rho);
        let mut rng = ChaCha8Rng::seed_from_u64(c_seed);
        let c = random_orthogonal(m.rows().max(n.rows()), &mut rng).block(0, 0, m.rows(), n.rows());
        let (xk, _) = solve_kronecker(&m, &n, &c).unwrap();
        let (xs, _) = solve_schur(&m, &n, &c).unwrap();
        prop_assert!(xk.max_abs_diff(&xs) <= 1e-8 * xk.max_abs().max(1.0));
        prop_assert!(residual(&m, &n, &c, &xs) <= 1e-10 * xs.max_abs().max(1.0));
    }

    #[test]
    fn gape_is_permutation_equivariant(g in graph(), k in 1usize..5, seed in any::<u64>(), shuffle in any::<u64>()) {
        let g = g.with_unique_labels();
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let w = init_damped(k, n, 0.5 / n as f64, seed).unwrap();
        // labels travel with their nodes, so label ℓ(v) stays attached to v
        let h = g.permuted(&perm).unwrap();
        let a = encode_gape(&g, &w, Solver::Kronecker).unwrap().0;
        let b = encode_gape(&h, &w, Solver::Kronecker).unwrap().0;
        for v in 0..n {
            for j in 0..k {
                prop_assert!((a.values[(v, j)] - b.values[(perm[v], j)]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn csv_round_trip_is_exact(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let m = DenseMatrix::from_fn(rows, cols, |_, _| {
            let mantissa: f64 = rng.random_range(-1.0..1.0);
            mantissa * 10f64.powi(rng.random_range(-300..300))
        });
        prop_assert_eq!(read_csv(&write_csv(&m)).unwrap(), m);
    }

    #[test]
    fn graph_json_round_trip(g in graph(), directed in any::<bool>()) {
        let g = if directed {
            LabeledGraph::new(g.n(), g.labels().to_vec(), &g.edges(), true).unwrap()
        } else {
            g
        };
        prop_assert_eq!(LabeledGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn walk_matrix_is_column_stochastic(g in graph()) {
        if let Ok(w) = walk_matrix(&g) {
            for j in 0..g.n() {
                prop_assert!((w.col(j).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            // so are the columns of Π = β (I − (1−β) W)⁻¹
            let pi = ppr_matrix(&w, 0.3).unwrap();
            for j in 0..g.n() {
                prop_assert!((pi.col(j).iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }
            prop_assert!(pi.data().iter().all(|&x| x >= -1e-14));
        }
    }

    #[test]
    fn kronecker_mixed_product(a in matrix(2, 3), b in matrix(3, 2), c in matrix(3, 2), d in matrix(2, 4)) {
        let lhs = kronecker(&a, &b).matmul(&kronecker(&c, &d));
        let rhs = kronecker(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn lu_solve_residual(n in 1usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_orthogonal(n, &mut rng);
        let a = q.add(&DenseMatrix::identity(n).scale(0.1));
        let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        if let Ok(x) = solve_dense(&a, &b) {
            let ax = a.mul_vec(&x);
            let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let bn = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let err = ax.iter().zip(&b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            prop_assert!(err <= 1e-8 * (a.max_abs() * xn + bn));
        }
    }

    #[test]
    fn minmax_lands_in_unit_interval(m in matrix(5, 3)) {
        let s = minmax_columns(&m);
        prop_assert!(s.data().iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn pearson_ignores_positive_affine_maps(x in prop::collection::vec(-5.0f64..5.0, 3..20), a in 0.1f64..10.0, b in -5.0f64..5.0) {
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * v - i as f64).collect();
        let z: Vec<f64> = y.iter().map(|v| a * v + b).collect();
        match (pearson(&x, &y), pearson(&x, &z)) {
            (Some(r), Some(s)) => prop_assert!((r - s).abs() < 1e-9),
            (None, None) => {}
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn csl_is_four_regular(n in 5usize..60, skip in 2usize..58) {
        match csl_graph(n, skip) {
            Ok(g) => {
                prop_assert!((0..n).all(|v| g.adjacency().row(v).iter().sum::<f64>() == 4.0));
                prop_assert_eq!(g.edge_count(), 2 * n);
            }
            Err(_) => {
                let s = skip % n;
                prop_assert!(s == 0 || s == 1 || s == n - 1 || 2 * s == n);
            }
        }
    }
}
