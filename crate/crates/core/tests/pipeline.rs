use sgsweep_core::*;

fn grid(spec: &ProblemSpec, n: usize) -> CartesianGrid {
    CartesianGrid::new(&spec.origin, &spec.extent, &vec![n; spec.dim()]).unwrap()
}

#[test]
fn refinement_study_table_for_example_2() {
    let spec = make_benchmark(2, None).unwrap();
    let cfg = SweepConfig::for_problem(&spec, DerivativeMode::Weno3);
    let mut study = RefinementStudy::default();
    for n in [20, 40] {
        let sol = solve_single_grid(&spec, &grid(&spec, n), &cfg).unwrap();
        study.push(
            n,
            Some(error_norms(&sol.field, &spec).unwrap()),
            sol.timings.sweeps,
        );
    }
    let orders = study.l1_orders().unwrap();
    assert!(orders[0] > 2.0, "{orders:?}");
    let mut table = Vec::new();
    emit_table(&study, &mut table).unwrap();
    let text = String::from_utf8(table).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(2).unwrap().starts_with("40,"));
}

#[test]
fn sparse_and_single_agree_on_example_2() {
    let spec = make_benchmark(2, None).unwrap();
    let cfg = SweepConfig::for_problem(&spec, DerivativeMode::Weno3);
    let plan = SparsePlan::semi_coarsened_family(&spec.origin, &spec.extent, &[10, 10], 2).unwrap();
    let sparse = solve_sparse(&spec, &plan, &cfg, Prolongation::Lagrange, 2).unwrap();
    assert_eq!(sparse.components.len(), 5);
    let single = solve_single_grid(&spec, &plan.finest_grid(), &cfg).unwrap();
    let sparse_err = error_norms(&sparse.field, &spec).unwrap();
    let single_err = error_norms(&single.field, &spec).unwrap();
    assert!(
        sparse_err.l1 < 10.0 * single_err.l1,
        "{sparse_err:?} {single_err:?}"
    );
    assert!(sparse.timings.total() >= sparse.timings.solve);
}

#[test]
fn voronoi_3d_runs_on_a_small_family() {
    let spec = make_benchmark(5, Some(Case::ThreeD)).unwrap();
    let cfg = SweepConfig::for_problem(&spec, DerivativeMode::Weno3);
    let plan =
        SparsePlan::semi_coarsened_family(&spec.origin, &spec.extent, &[8, 8, 8], 2).unwrap();
    assert_eq!(plan.entries().len(), 10);
    assert_eq!(plan.coefficient_sum(), 1);
    let sol = solve_sparse(&spec, &plan, &cfg, Prolongation::weno(), 2).unwrap();
    let sparse = error_norms(&sol.field, &spec).unwrap();
    let single = solve_single_grid(&spec, &plan.finest_grid(), &cfg).unwrap();
    let single = error_norms(&single.field, &spec).unwrap();
    assert!(sparse.l1 < 5.0 * single.l1, "{sparse:?} {single:?}");
}

#[test]
fn boat_sail_has_no_error_norms_but_solves() {
    let spec = make_benchmark(6, Some(Case::TwoD)).unwrap();
    let cfg = SweepConfig::for_problem(&spec, DerivativeMode::Weno3);
    let sol = solve_single_grid(&spec, &grid(&spec, 32), &cfg).unwrap();
    assert!(matches!(
        error_norms(&sol.field, &spec),
        Err(Error::NoExactSolution(_))
    ));
    assert!(sol
        .field
        .values()
        .iter()
        .all(|v| v.is_finite() && *v >= -1e-12));
}

#[test]
fn unknown_benchmark_is_rejected() {
    assert!(matches!(
        make_benchmark(7, None),
        Err(Error::UnknownBenchmark(_))
    ));
    assert!(make_benchmark(5, None).is_err());
}
