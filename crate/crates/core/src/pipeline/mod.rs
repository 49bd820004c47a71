//! Row assembly: turns `(RangeSpec, ParamVector)` into the final `(B, C)`,
//! and holds the interval schedule.

pub mod display;
pub mod published;
pub mod reproduce;

use crate::arith::{d3_literal, D3Mode, DivisorSumConstants, ParamVector};
use crate::detector::{self, DetectorConstants, JConstants};
use crate::foundations::{log_rh_height, round_up, select_region, LogGrid, ZeroFreeRegion, LOG_T_MAX};
use crate::zerocount::{fit_rectangle_count, ArgumentConstant, ZeroCountCoefficients};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Smallest and largest admissible `alpha0`.
pub const ALPHA0_MIN: f64 = 0.985;
pub const ALPHA0_MAX: f64 = 0.9927;
/// Zeros below `0.447 log T` are covered by the verified height, which caps `log T1`.
const VERIFIED_HEIGHT: f64 = 3.0e12;

/// One row's domain: `T in (T0, T1]`, `sigma in [alpha0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeSpec {
    #[serde(rename = "t0_log")]
    pub log_t0: f64,
    #[serde(rename = "t1_log")]
    pub log_t1: f64,
    pub alpha0: f64,
}

impl RangeSpec {
    pub fn new(log_t0: f64, log_t1: f64, alpha0: f64) -> Result<Self> {
        let s = Self { log_t0, log_t1, alpha0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { log_t0, log_t1, alpha0 } = *self;
        if !(log_t0 >= log_rh_height()) {
            return Err(Error::Domain(format!("T0 = exp({log_t0}) is below the verified height 3e12")));
        }
        if !(log_t0 < log_t1 && log_t1 <= LOG_T_MAX) {
            return Err(Error::Domain(format!(
                "need T0 < T1 <= exp(6.7e12), got log T0 = {log_t0}, log T1 = {log_t1}"
            )));
        }
        if !(0.447 * log_t1 <= VERIFIED_HEIGHT) {
            return Err(Error::Domain(format!("0.447 log T1 = {} exceeds 3e12", 0.447 * log_t1)));
        }
        if !((ALPHA0_MIN..=ALPHA0_MAX).contains(&alpha0)) {
            return Err(Error::Domain(format!("alpha0 = {alpha0} outside [{ALPHA0_MIN}, {ALPHA0_MAX}]")));
        }
        Ok(())
    }
}

/// Final estimate `N(sigma, T) <= C T^{B (1 - sigma)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C1_part")]
    pub c1_part: f64,
    #[serde(rename = "C2_part")]
    pub c2_part: f64,
}

impl DensityEstimate {
    /// `log C + B (1 - sigma) log T`.
    pub fn log_bound(&self, sigma: f64, log_t: f64) -> f64 {
        self.c.ln() + self.b * (1.0 - sigma) * log_t
    }
}

/// Logarithm of `C T^{B (1 - sigma)}` on the row's domain.
pub fn evaluate_log_bound(est: &DensityEstimate, spec: &RangeSpec, sigma: f64, log_t: f64) -> Result<f64> {
    if !(sigma >= spec.alpha0 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} outside [{}, 1]", spec.alpha0)));
    }
    if !(log_t > spec.log_t0 && log_t <= spec.log_t1) {
        return Err(Error::Domain(format!("log T = {log_t} outside ({}, {}]", spec.log_t0, spec.log_t1)));
    }
    Ok(est.log_bound(sigma, log_t))
}

/// `C T^{B (1 - sigma)}`; may be `inf` when the value exceeds `f64`.
pub fn evaluate_bound(est: &DensityEstimate, spec: &RangeSpec, sigma: f64, log_t: f64) -> Result<f64> {
    Ok(evaluate_log_bound(est, spec, sigma, log_t)?.exp())
}

/// Knobs for row evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub d3_mode: D3Mode,
    pub grid: LogGrid,
    pub argument_constant: ArgumentConstant,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self { d3_mode: D3Mode::Literal, grid: LogGrid::default(), argument_constant: ArgumentConstant::Corollary }
    }
}

/// Every constant computed for one row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowConstants {
    pub spec: RangeSpec,
    pub params: ParamVector,
    /// Mode actually used for d3 (table mode falls back to literal for rows
    /// without a printed value).
    pub d3_mode: D3Mode,
    pub divisor: DivisorSumConstants,
    pub zero_count: ZeroCountCoefficients,
    pub detector: DetectorConstants,
    pub estimate: DensityEstimate,
    pub region_t0: ZeroFreeRegion,
    pub nu_t0: f64,
    pub nu_t1: f64,
}

/// Integrals that depend only on `alpha0`.
#[derive(Debug, Clone, Copy)]
struct AlphaIntegrals {
    c4: f64,
    j: JConstants,
}

fn alpha_integrals(alpha0: f64) -> Result<AlphaIntegrals> {
    static CACHE: OnceLock<Mutex<HashMap<u64, AlphaIntegrals>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(&alpha0.to_bits()) {
        return Ok(*hit);
    }
    let fresh = AlphaIntegrals {
        c4: detector::c4_integral(alpha0)?.certified_upper,
        j: JConstants::effective(alpha0)?,
    };
    cache.lock().expect("cache lock").insert(alpha0.to_bits(), fresh);
    Ok(fresh)
}

/// Evaluates parameter vectors for one fixed row, caching everything that
/// does not depend on the parameters.
#[derive(Debug, Clone)]
pub struct RowEvaluator {
    spec: RangeSpec,
    settings: EvalSettings,
    zero_count: ZeroCountCoefficients,
    integrals: AlphaIntegrals,
    region_t0: ZeroFreeRegion,
    nu_t0: f64,
    nu_t1: f64,
    table_d3: Option<f64>,
}

impl RowEvaluator {
    pub fn new(spec: RangeSpec, settings: EvalSettings) -> Result<Self> {
        spec.validate()?;
        let region_t0 = select_region(spec.log_t0)?;
        Ok(Self {
            spec,
            settings,
            zero_count: fit_rectangle_count(&spec, settings.argument_constant)?,
            integrals: alpha_integrals(spec.alpha0)?,
            region_t0,
            nu_t0: region_t0.width(spec.log_t0)?,
            nu_t1: select_region(spec.log_t1)?.width(spec.log_t1)?,
            table_d3: published::lookup(&spec).map(|r| r.d3),
        })
    }

    pub fn spec(&self) -> &RangeSpec {
        &self.spec
    }

    pub fn settings(&self) -> &EvalSettings {
        &self.settings
    }

    /// Overrides the printed d3 used in table mode.
    pub fn with_table_d3(mut self, d3: Option<f64>) -> Self {
        self.table_d3 = d3;
        self
    }

    pub fn evaluate(&self, p: &ParamVector) -> Result<RowConstants> {
        p.validate()?;
        let spec = &self.spec;
        let grid = &self.settings.grid;
        let (d3, d3_mode) = match (self.settings.d3_mode, self.table_d3) {
            (D3Mode::Table, Some(d3)) => (d3, D3Mode::Table),
            _ => (d3_literal(spec, p, grid), D3Mode::Literal),
        };
        let divisor = DivisorSumConstants::compute(spec, p, d3, grid)?;
        let (d4, d5) = (divisor.d4, divisor.d5);
        let det = DetectorConstants {
            c1: detector::c1_lower_bound(spec, p, divisor.d21, grid)?,
            c2: detector::c2_constant(d4, d5, p.w)?,
            c3: detector::c3_constant(d4, d5, p.w, self.nu_t1)?,
            c4: detector::c4_from_integral(d4, d5, p.w, self.integrals.c4)?,
            c5: detector::c5_constant(spec, p, d4, d5, &self.integrals.j, grid)?,
        };
        det.validate()?;
        let sum = round_up(det.c2 + det.c3 + det.c4);
        let margin = det.margin();
        let c1_part = round_up(sum * self.zero_count.b1 / margin);
        let c2_part = round_up(sum * self.zero_count.b2 / (margin * self.nu_t0 * spec.log_t0));
        let estimate = DensityEstimate { b: 2.0 * p.x, c: round_up(c1_part + c2_part), c1_part, c2_part };
        Ok(RowConstants {
            spec: *spec,
            params: *p,
            d3_mode,
            divisor,
            zero_count: self.zero_count,
            detector: det,
            estimate,
            region_t0: self.region_t0,
            nu_t0: self.nu_t0,
            nu_t1: self.nu_t1,
        })
    }
}

/// `(B, C)` for a row with default settings (literal d3).
pub fn assemble_row(spec: &RangeSpec, p: &ParamVector) -> Result<DensityEstimate> {
    Ok(RowEvaluator::new(*spec, EvalSettings::default())?.evaluate(p)?.estimate)
}

/// `(C1_part, C2_part, C)` from already computed constants:
/// `S b1 / (c1^2 - c5)` and `S b2 / ((c1^2 - c5) nu(T0) log T0)` with `S = c2 + c3 + c4`.
pub fn combine(det: &DetectorConstants, b: &ZeroCountCoefficients, nu_t0: f64, log_t0: f64) -> (f64, f64, f64) {
    let sum = det.c2 + det.c3 + det.c4;
    let margin = det.c1 * det.c1 - det.c5;
    let c1_part = sum * b.b1 / margin;
    let c2_part = sum * b.b2 / (margin * nu_t0 * log_t0);
    (c1_part, c2_part, c1_part + c2_part)
}

/// One schedule entry, serialized flat as `{t0_log, t1_log, alpha0, u, v, w, x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRecord", into = "ScheduleRecord")]
pub struct ScheduleRow {
    pub spec: RangeSpec,
    pub params: ParamVector,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleRecord {
    t0_log: f64,
    t1_log: f64,
    alpha0: f64,
    u: f64,
    v: f64,
    w: f64,
    x: f64,
}

impl TryFrom<ScheduleRecord> for ScheduleRow {
    type Error = Error;

    fn try_from(r: ScheduleRecord) -> Result<Self> {
        Ok(Self { spec: RangeSpec::new(r.t0_log, r.t1_log, r.alpha0)?, params: ParamVector::new(r.u, r.v, r.w, r.x)? })
    }
}

impl From<ScheduleRow> for ScheduleRecord {
    fn from(r: ScheduleRow) -> Self {
        Self {
            t0_log: r.spec.log_t0,
            t1_log: r.spec.log_t1,
            alpha0: r.spec.alpha0,
            u: r.params.u,
            v: r.params.v,
            w: r.params.w,
            x: r.params.x,
        }
    }
}

/// Index of the uniform row in [`default_schedule`].
pub const UNIFORM_ROW: usize = 38;

/// The 38 printed rows followed by the uniform row.
pub fn default_schedule() -> Vec<ScheduleRow> {
    let mut rows: Vec<ScheduleRow> =
        published::published_rows().iter().map(|r| ScheduleRow { spec: r.spec, params: r.params }).collect();
    let u = published::uniform_row();
    rows.push(ScheduleRow { spec: u.spec, params: u.params });
    rows
}

/// Evaluates every row in parallel; results keep the input order.
pub fn evaluate_schedule(rows: &[ScheduleRow], settings: EvalSettings) -> Vec<Result<RowConstants>> {
    rows.par_iter()
        .map(|r| RowEvaluator::new(r.spec, settings)?.evaluate(&r.params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_spec_gates() {
        assert!(RangeSpec::new(3e12_f64.ln(), 29.0, 0.9927).is_ok());
        assert!(RangeSpec::new(1e12_f64.ln(), 29.0, 0.9927).is_err());
        assert!(RangeSpec::new(30.0, 29.0, 0.9927).is_err());
        assert!(RangeSpec::new(29.0, 30.0, 0.98).is_err());
        assert!(RangeSpec::new(29.0, 7e12, 0.985).is_err());
    }

    #[test]
    fn schedule_is_contiguous() {
        let s = default_schedule();
        assert_eq!(s.len(), 39);
        for w in s.windows(2) {
            assert_eq!(w[0].spec.log_t1, w[1].spec.log_t0);
        }
        assert_eq!(s[UNIFORM_ROW].params.u, 0.3520926);
    }

    #[test]
    fn degenerate_sum_gives_zero() {
        let det = DetectorConstants { c1: 0.98, c2: 0.0, c3: 0.0, c4: 0.0, c5: 0.06 };
        let b = ZeroCountCoefficients { b1: 0.711, b2: 2.113 };
        assert_eq!(combine(&det, &b, 0.006, 29.0).2, 0.0);
    }

    #[test]
    fn bound_at_sigma_one_is_c() {
        let spec = RangeSpec::new(29.0, 30.0, 0.9927).unwrap();
        let est = DensityEstimate { b: 14.0, c: 37000.0, c1_part: 1.0, c2_part: 1.0 };
        assert!((evaluate_bound(&est, &spec, 1.0, 29.5).unwrap() - 37000.0).abs() < 1e-9);
        assert!(evaluate_bound(&est, &spec, 0.98, 29.5).is_err());
        assert!(evaluate_bound(&est, &spec, 0.995, 29.0).is_err());
    }

    #[test]
    fn schedule_record_round_trip() {
        let row = default_schedule()[0];
        let rec: ScheduleRecord = row.into();
        assert_eq!(ScheduleRow::try_from(rec).unwrap(), row);
    }
}
