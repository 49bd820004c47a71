use proptest::prelude::*;
use zdc_core::optimizer::{optimize_row, random_start, Objective, SearchConfig};
use zdc_core::pipeline::published::published_rows;
use zdc_core::pipeline::{EvalSettings, RowEvaluator};

fn first_row_config() -> (zdc_core::pipeline::RangeSpec, SearchConfig) {
    let r = &published_rows()[0];
    (r.spec, SearchConfig { iterations: 300, ..SearchConfig::new(r.params) })
}

#[test]
fn identical_inputs_give_identical_output() {
    let (spec, cfg) = first_row_config();
    let a = optimize_row(&spec, &cfg).unwrap();
    let b = optimize_row(&spec, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.objective.to_bits(), b.objective.to_bits());
}

#[test]
fn published_point_never_regresses() {
    let (spec, cfg) = first_row_config();
    let start = RowEvaluator::new(spec, EvalSettings::default()).unwrap().evaluate(&cfg.initial).unwrap();
    let start_obj = Objective::MinBoundAtAlpha0T1.value(&spec, &start.estimate);
    let r = optimize_row(&spec, &cfg).unwrap();
    assert!(r.objective <= start_obj + 1e-9, "{} > {start_obj}", r.objective);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn returned_point_is_feasible_and_no_worse(seed in any::<u64>(), row in 0usize..38, objective in 0usize..3) {
        let r = &published_rows()[row];
        let objective = [Objective::MinBoundAtAlpha0T1, Objective::MinB, Objective::MinC][objective];
        let cfg = SearchConfig { seed, iterations: 150, objective, ..SearchConfig::new(r.params) };
        let ev = RowEvaluator::new(r.spec, EvalSettings::default()).unwrap();
        let start = objective.value(&r.spec, &ev.evaluate(&r.params).unwrap().estimate);
        let out = optimize_row(&r.spec, &cfg).unwrap();
        prop_assert!(out.params.validate().is_ok());
        let again = ev.evaluate(&out.params).unwrap();
        prop_assert!(again.detector.validate().is_ok());
        prop_assert_eq!(again.estimate, out.estimate);
        prop_assert!(out.objective <= start + 1e-9);
    }
}

/// Random start with 1e5 proposals lands within 5% of the printed C and 2%
/// of the printed B for the first row.
#[test]
fn random_start_reaches_first_row() {
    let r = &published_rows()[0];
    let start = random_start(&r.spec, EvalSettings::default(), 0).unwrap();
    let cfg = SearchConfig { iterations: 100_000, ..SearchConfig::new(start) };
    let out = optimize_row(&r.spec, &cfg).unwrap();
    let (c, b) = (out.estimate.c, out.estimate.b);
    assert!((c / r.c - 1.0).abs() <= 0.05, "C = {c} vs {}", r.c);
    assert!((b / r.b - 1.0).abs() <= 0.02, "B = {b} vs {}", r.b);
}
