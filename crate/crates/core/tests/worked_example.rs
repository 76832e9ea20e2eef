use wsumci::{
    compute_interval, IntervalRequest, Method, Model, Sides, SolverConfig,
};

fn request(method: Method) -> IntervalRequest {
    IntervalRequest::new(Model::new(20, 30, 0.3).unwrap(), 2, 0, 0.95, method)
}

#[test]
fn standard_interval_with_drawn_y() {
    let req = request(Method::Standard).with_y(0.2);
    let iv = compute_interval(&req, &SolverConfig::default()).unwrap();
    assert!((iv.lower - 0.004672159).abs() < 1e-4, "{iv:?}");
    assert!((iv.upper - 0.111730732).abs() < 1e-4, "{iv:?}");
    assert!((iv.length - 0.107058574).abs() < 2e-4);
    assert_eq!(iv.sides, Sides::TwoSided);
    assert!((iv.gamma1 - 0.025).abs() < 1e-15);
}

#[test]
fn standard_interval_without_randomization() {
    // cross-checked against an independent scipy computation
    let iv = compute_interval(&request(Method::Standard), &SolverConfig::default()).unwrap();
    assert!((iv.lower - 0.0044484175294).abs() < 1e-9, "{iv:?}");
    assert!((iv.upper - 0.1095408555946).abs() < 1e-9, "{iv:?}");
    assert_eq!(iv.y, None);
}

#[test]
fn randomized_interval() {
    let cfg = SolverConfig::default();
    let iv = compute_interval(&request(Method::Randomized).with_y(0.2), &cfg).unwrap();
    assert!((iv.lower - 0.000883203).abs() < 1e-4, "{iv:?}");
    assert!((iv.upper - 0.097443898).abs() < 1e-4, "{iv:?}");
    assert!((iv.length - 0.096560695).abs() < 2e-4);
    let std = compute_interval(&request(Method::Standard).with_y(0.2), &cfg).unwrap();
    assert!((iv.length / std.length - 0.90).abs() < 0.01);
}

#[test]
fn shortest_interval_is_not_longer() {
    let cfg = SolverConfig::default();
    let short = compute_interval(&request(Method::Shortest), &cfg).unwrap();
    let std = compute_interval(&request(Method::Standard), &cfg).unwrap();
    assert!(short.length <= std.length + 1e-12, "{short:?}");
    assert_eq!(short.sides, Sides::TwoSided);
}

#[test]
fn mid_range_outcome() {
    // k2 = 10 gives an estimate of about 0.2633
    let req = IntervalRequest::new(Model::new(20, 30, 0.3).unwrap(), 2, 10, 0.95, Method::Shortest);
    assert!((req.estimate() - 0.2633333333).abs() < 1e-9);
    let iv = compute_interval(&req, &SolverConfig::default()).unwrap();
    assert!(iv.lower < 0.2633 && 0.2634 < iv.upper);
}
