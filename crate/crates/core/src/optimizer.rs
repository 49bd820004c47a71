//! Seeded simulated annealing over `(u, v, w, x)` for one row.

use crate::arith::ParamVector;
use crate::foundations::LogGrid;
use crate::pipeline::{DensityEstimate, EvalSettings, RangeSpec, RowEvaluator};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Quantity minimised by the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `log C + B (1 - alpha0) log T1`: the bound's logarithm at its largest point.
    #[default]
    MinBoundAtAlpha0T1,
    MinB,
    MinC,
}

impl Objective {
    pub fn value(self, spec: &RangeSpec, est: &DensityEstimate) -> f64 {
        match self {
            Self::MinBoundAtAlpha0T1 => est.log_bound(spec.alpha0, spec.log_t1),
            Self::MinB => est.b,
            Self::MinC => est.c.ln(),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "bound" | "minboundatalpha0t1" => Ok(Self::MinBoundAtAlpha0T1),
            "b" | "minb" => Ok(Self::MinB),
            "c" | "minc" => Ok(Self::MinC),
            _ => Err(Error::Parse(format!("unknown objective '{s}' (expected bound, b or c)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub iterations: usize,
    pub initial: ParamVector,
    /// Standard deviations of the Gaussian proposal for `[u, v, w, x]`.
    pub step_scales: [f64; 4],
    pub objective: Objective,
    /// Grid used while searching; the result is re-evaluated with `settings.grid`.
    pub search_grid: LogGrid,
    pub settings: EvalSettings,
}

/// Starting temperature in objective units.
const INITIAL_TEMPERATURE: f64 = 0.05;
const COOLING: f64 = 0.95;
const COOLING_PERIOD: usize = 100;
/// Best coarse-grid points re-evaluated on the full grid at the end.
const FINALISTS: usize = 8;
const RANDOM_START_TRIES: usize = 10_000;

impl SearchConfig {
    /// Defaults: seed 0, 2000 proposals, steps of 1% of each coordinate.
    pub fn new(initial: ParamVector) -> Self {
        Self {
            seed: 0,
            iterations: 2000,
            initial,
            step_scales: initial.as_array().map(|c| 0.01 * c.abs()),
            objective: Objective::default(),
            search_grid: LogGrid::new(62),
            settings: EvalSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.step_scales.iter().all(|s| *s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("step scales must be positive, got {:?}", self.step_scales)));
        }
        self.initial.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub params: ParamVector,
    pub estimate: DensityEstimate,
    pub objective: f64,
    pub accepted: usize,
}

/// Runs one annealing chain. Never returns a point worse than `cfg.initial`
/// when the initial point is feasible.
pub fn optimize_row(spec: &RangeSpec, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let full = RowEvaluator::new(*spec, cfg.settings)?;
    let coarse = RowEvaluator::new(*spec, EvalSettings { grid: cfg.search_grid, ..cfg.settings })?;
    let score = |ev: &RowEvaluator, p: &ParamVector| -> Option<(DensityEstimate, f64)> {
        let est = ev.evaluate(p).ok()?.estimate;
        let obj = cfg.objective.value(spec, &est);
        obj.is_finite().then_some((est, obj))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = cfg.initial;
    let mut current_obj = score(&coarse, &current).map_or(f64::INFINITY, |s| s.1);
    let mut finalists: Vec<(f64, ParamVector)> = Vec::new();
    if current_obj.is_finite() {
        finalists.push((current_obj, current));
    }
    let mut temperature = INITIAL_TEMPERATURE;
    let mut accepted = 0;

    for i in 0..cfg.iterations {
        if i > 0 && i % COOLING_PERIOD == 0 {
            temperature *= COOLING;
        }
        let mut coords = current.as_array();
        for (c, s) in coords.iter_mut().zip(cfg.step_scales) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *c += s * z;
        }
        let candidate = ParamVector::from_array(coords);
        if candidate.validate().is_err() {
            continue;
        }
        let Some((_, obj)) = score(&coarse, &candidate) else { continue };
        let delta = obj - current_obj;
        if delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp() {
            current = candidate;
            current_obj = obj;
            accepted += 1;
            insert_finalist(&mut finalists, obj, candidate);
        }
    }

    let initial_full = score(&full, &cfg.initial);
    let mut best: Option<(ParamVector, DensityEstimate, f64)> = initial_full.map(|(e, o)| (cfg.initial, e, o));
    for (_, p) in &finalists {
        if let Some((e, o)) = score(&full, p) {
            if best.as_ref().is_none_or(|b| o < b.2) {
                best = Some((*p, e, o));
            }
        }
    }
    let (params, estimate, objective) =
        best.ok_or_else(|| Error::Infeasible("no feasible point found within the search budget".into()))?;
    Ok(SearchResult { params, estimate, objective, accepted })
}

fn insert_finalist(list: &mut Vec<(f64, ParamVector)>, obj: f64, p: ParamVector) {
    if list.len() == FINALISTS && obj >= list[FINALISTS - 1].0 {
        return;
    }
    let pos = list.partition_point(|(o, _)| *o <= obj);
    list.insert(pos, (obj, p));
    list.truncate(FINALISTS);
}

/// Independent chains with seeds `seed, seed + 1, ...`, merged by best objective.
pub fn optimize_chains(spec: &RangeSpec, cfg: &SearchConfig, chains: usize) -> Result<SearchResult> {
    let results: Vec<Result<SearchResult>> = (0..chains.max(1) as u64)
        .into_par_iter()
        .map(|k| optimize_row(spec, &SearchConfig { seed: cfg.seed.wrapping_add(k), ..cfg.clone() }))
        .collect();
    let mut best: Option<SearchResult> = None;
    let mut last_err = None;
    for r in results {
        match r {
            Ok(r) if best.as_ref().is_none_or(|b| r.objective < b.objective) => best = Some(r),
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::Infeasible("no chains ran".into())))
}

/// Draws a feasible point with `u/x in [0.2, 0.5]`, `v/x` between `u/x` and
/// `1 - u/x`, and `w/u in [0.01, 0.3]`.
pub fn random_start(spec: &RangeSpec, settings: EvalSettings, seed: u64) -> Result<ParamVector> {
    let ev = RowEvaluator::new(*spec, EvalSettings { grid: LogGrid::new(62), ..settings })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_START_TRIES {
        let x = rng.gen_range(0.5..8.0);
        let ur = rng.gen_range(0.2..0.5);
        let vr = rng.gen_range(ur..(1.0 - ur));
        let wr = rng.gen_range(0.01..0.3);
        let (u, v) = (ur * x, vr * x);
        let Ok(p) = ParamVector::new(u, v, wr * u, x) else { continue };
        if ev.evaluate(&p).is_ok() {
            return Ok(p);
        }
    }
    Err(Error::Infeasible(format!("no feasible random start after {RANDOM_START_TRIES} draws")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::published::published_rows;

    fn row_one() -> (RangeSpec, ParamVector) {
        let r = &published_rows()[0];
        (r.spec, r.params)
    }

    #[test]
    fn zero_iterations_is_identity() {
        let (spec, p) = row_one();
        let cfg = SearchConfig { iterations: 0, ..SearchConfig::new(p) };
        let r = optimize_row(&spec, &cfg).unwrap();
        assert_eq!(r.params, p);
        assert_eq!(r.estimate, crate::pipeline::assemble_row(&spec, &p).unwrap());
    }

    #[test]
    fn objective_parsing() {
        assert_eq!("bound".parse::<Objective>().unwrap(), Objective::MinBoundAtAlpha0T1);
        assert_eq!("MinB".parse::<Objective>().unwrap(), Objective::MinB);
        assert!("nope".parse::<Objective>().is_err());
    }

    #[test]
    fn bad_steps_rejected() {
        let (spec, p) = row_one();
        let cfg = SearchConfig { step_scales: [0.0, 1.0, 1.0, 1.0], ..SearchConfig::new(p) };
        assert!(optimize_row(&spec, &cfg).is_err());
    }

    #[test]
    fn finalists_stay_sorted_and_bounded() {
        let p = row_one().1;
        let mut l = Vec::new();
        for o in [5.0, 3.0, 9.0, 1.0, 7.0, 2.0, 8.0, 6.0, 4.0, 0.5] {
            insert_finalist(&mut l, o, p);
        }
        let objs: Vec<f64> = l.iter().map(|x| x.0).collect();
        assert_eq!(objs, vec![0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
    }
}
