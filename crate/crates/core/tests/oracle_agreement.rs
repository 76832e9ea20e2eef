use wsumci::coverage::{self, SweepConfig};
use wsumci::mixture;
use wsumci::oracle::{brute_coverage, brute_masses, mc_cdf, McConfig};
use wsumci::{Error, Method, Model, QuadratureConfig};

#[test]
fn monte_carlo_matches_quadrature() {
    let model = Model::new(20, 30, 0.3).unwrap();
    let quad = QuadratureConfig::default();
    let cfg = McConfig { samples: 50_000, seed: 42 };
    let (est, se) = mc_cdf(&model, 0.03, 0.05, &cfg);
    let exact = mixture::cdf(&model, 0.03, 0.05, &quad).unwrap();
    assert!((est - exact).abs() < 3.0 * se, "{est} vs {exact} (se {se})");
}

#[test]
fn brute_masses_match_production() {
    let model = Model::new(3, 4, 0.35).unwrap();
    let quad = QuadratureConfig::default();
    for t in [0.05, 0.35, 0.65, 0.99] {
        let slow = brute_masses(&model, t, 4000).unwrap();
        let fast = mixture::atom_masses(&model, t, &quad).unwrap();
        for (a, b) in slow.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-10, "{t}: {a} vs {b}");
        }
    }
}

#[test]
fn brute_coverage_examples() {
    let model = Model::new(2, 3, 0.4).unwrap();
    let cfg = SweepConfig::with_method(Method::Standard);
    let slow = brute_coverage(&model, 0.5, &cfg, 2000).unwrap();
    let fast = coverage::coverage_at(&model, 0.5, &cfg).unwrap().coverage;
    assert!((slow - fast).abs() < 1e-5);
    let masses: f64 = brute_masses(&model, 0.5, 2000).unwrap().iter().sum();
    assert!((masses - 1.0).abs() < 1e-9);
}

#[test]
fn brute_force_refuses_large_designs() {
    let model = Model::new(10, 10, 0.4).unwrap();
    let cfg = SweepConfig::default();
    assert!(matches!(
        brute_coverage(&model, 0.5, &cfg, 100),
        Err(Error::DesignTooLarge { cells: 121, limit: 100 })
    ));
}
