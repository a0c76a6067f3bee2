//! Runs every example's `run()` so the examples directory stays working.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().expect(concat!(stringify!($name), " example runs"));
        }
    };
}

example!(compare_encodings);
example!(fit_lape);
example!(gape_encoding);
example!(generate_graphs);
example!(lape_construction);
example!(ppr_equivalence);
example!(run_weights);
example!(rw_vs_pprp);
example!(sinusoidal_equivalence);
example!(solve_stein);
example!(verify_suites);
