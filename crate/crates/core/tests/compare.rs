//! The real earlier constants are external input; these tests use synthetic
//! tables to exercise the logic only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zdc_core::compare::{check_dominance, improvement_percent, DominanceTechnique, KlnConstants, KlnEntry};
use zdc_core::pipeline::{evaluate_schedule, default_schedule, EvalSettings};
use zdc_core::Error;

fn synthetic(c1: f64) -> KlnConstants {
    KlnConstants::new(vec![
        KlnEntry { sigma: 0.98, c1, c2: 10.0 },
        KlnEntry { sigma: 0.99, c1: 2.0 * c1, c2: 10.0 },
    ])
    .unwrap()
}

#[test]
fn shipped_template_has_no_data() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/kln_template.csv");
    assert!(matches!(KlnConstants::from_path(path), Err(Error::ExternalData(_))));
}

#[test]
fn dominance_implies_positive_improvement() {
    let rows = default_schedule();
    let results = evaluate_schedule(&rows, EvalSettings::default());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut passed, mut failed) = (0, 0);
    for c1 in [1e-12, 1e-6, 1e2, 1e6] {
        let kln = synthetic(c1);
        for r in results.iter().map(|r| r.as_ref().unwrap()) {
            let report = check_dominance(&r.spec, &r.estimate, &kln).unwrap();
            if r.spec.log_t1 <= 500.0 {
                assert_eq!(report.technique, DominanceTechnique::SigmaCondition);
            }
            if !report.passed {
                failed += 1;
                continue;
            }
            passed += 1;
            for _ in 0..100 {
                let sigma = rng.gen_range(r.spec.alpha0..=1.0);
                let l = rng.gen_range(r.spec.log_t0..=r.spec.log_t1).max(r.spec.log_t0 + 1e-9);
                let imp = improvement_percent(sigma, l, &r.estimate, &kln).unwrap();
                assert!(imp > 0.0, "{:?} sigma={sigma} L={l}: {imp}", r.spec);
            }
        }
    }
    assert!(passed > 0 && failed > 0, "passed {passed}, failed {failed}");
}

#[test]
fn step_lookup_uses_entry_at_or_below_sigma() {
    let kln = synthetic(5.0);
    assert_eq!(kln.at(0.985).unwrap().c1, 5.0);
    assert_eq!(kln.at(0.99).unwrap().c1, 10.0);
    assert!(kln.at(0.97).is_err());
    assert_eq!(kln.min_c1_on(0.985).unwrap(), 5.0);
}
