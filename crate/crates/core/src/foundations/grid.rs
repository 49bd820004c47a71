use serde::{Deserialize, Serialize};

/// Grid uniform in `log T` on `[log T0, log T1]` used to locate suprema and
/// infima of the row constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogGrid {
    /// Number of points strictly inside the interval.
    pub interior: usize,
}

impl Default for LogGrid {
    fn default() -> Self {
        Self { interior: 1024 }
    }
}

/// Refinement factor applied when sampled values are not monotone.
const REFINE: usize = 8;

impl LogGrid {
    pub fn new(interior: usize) -> Self {
        Self { interior }
    }

    /// Grid points, endpoints included.
    pub fn points(&self, l0: f64, l1: f64) -> impl Iterator<Item = f64> {
        let n = self.interior + 1;
        let span = l1 - l0;
        (0..=n).map(move |i| {
            if i == n {
                l1
            } else {
                l0 + span * (i as f64 / n as f64)
            }
        })
    }

    pub fn sup(&self, l0: f64, l1: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.extremum(l0, l1, &f, true)
    }

    pub fn inf(&self, l0: f64, l1: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.extremum(l0, l1, &f, false)
    }

    fn extremum(&self, l0: f64, l1: f64, f: &dyn Fn(f64) -> f64, max: bool) -> f64 {
        let values: Vec<f64> = self.points(l0, l1).map(f).collect();
        let best = pick(&values, max);
        if monotone(&values) || best.is_nan() {
            return best;
        }
        let fine = LogGrid::new((self.interior + 1) * REFINE - 1);
        let refined = pick(&fine.points(l0, l1).map(f).collect::<Vec<_>>(), max);
        pick(&[best, refined], max)
    }
}

fn pick(values: &[f64], max: bool) -> f64 {
    values.iter().copied().fold(if max { f64::NEG_INFINITY } else { f64::INFINITY }, |acc, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else if max {
            acc.max(v)
        } else {
            acc.min(v)
        }
    })
}

fn monotone(values: &[f64]) -> bool {
    let up = values.windows(2).all(|w| w[1] >= w[0]);
    let down = values.windows(2).all(|w| w[1] <= w[0]);
    up || down
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_endpoints_and_count() {
        let g = LogGrid::default();
        let pts: Vec<f64> = g.points(29.0, 30.0).collect();
        assert_eq!(pts.len(), 1026);
        assert_eq!(pts[0], 29.0);
        assert_eq!(*pts.last().unwrap(), 30.0);
    }

    #[test]
    fn sup_finds_interior_peak() {
        let g = LogGrid::new(64);
        let s = g.sup(0.0, 1.0, |x| -(x - 0.3).powi(2));
        assert!(s <= 0.0 && s > -1e-4);
        assert_eq!(g.inf(0.0, 1.0, |x| x), 0.0);
    }

    #[test]
    fn compensated_sum() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }
}
