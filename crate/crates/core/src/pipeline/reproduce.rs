//! Recomputed constants against the printed tables, with the tolerance each
//! column is held to.

use super::display::round_b;
use super::published::PublishedRow;
use super::RowConstants;
use crate::arith::D3Mode;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    C,
    B,
    B1,
    B2,
    D11,
    D12,
    D21,
    D22,
    D3,
    D4,
    D5,
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl Quantity {
    pub const FINAL: [Quantity; 2] = [Quantity::C, Quantity::B];
    pub const ZERO_COUNT: [Quantity; 2] = [Quantity::B1, Quantity::B2];
    pub const DIVISOR: [Quantity; 7] =
        [Quantity::D11, Quantity::D12, Quantity::D21, Quantity::D22, Quantity::D3, Quantity::D4, Quantity::D5];
    pub const DETECTOR: [Quantity; 5] = [Quantity::C1, Quantity::C2, Quantity::C3, Quantity::C4, Quantity::C5];

    pub fn name(self) -> &'static str {
        match self {
            Self::C => "C",
            Self::B => "B",
            Self::B1 => "b1",
            Self::B2 => "b2",
            Self::D11 => "d11",
            Self::D12 => "d12",
            Self::D21 => "d21",
            Self::D22 => "d22",
            Self::D3 => "d3",
            Self::D4 => "d4",
            Self::D5 => "d5",
            Self::C1 => "c1",
            Self::C2 => "c2",
            Self::C3 => "c3",
            Self::C4 => "c4",
            Self::C5 => "c5",
        }
    }

    pub fn computed(self, r: &RowConstants) -> f64 {
        match self {
            Self::C => r.estimate.c,
            Self::B => r.estimate.b,
            Self::B1 => r.zero_count.b1,
            Self::B2 => r.zero_count.b2,
            Self::D11 => r.divisor.d11,
            Self::D12 => r.divisor.d12,
            Self::D21 => r.divisor.d21,
            Self::D22 => r.divisor.d22,
            Self::D3 => r.divisor.d3,
            Self::D4 => r.divisor.d4,
            Self::D5 => r.divisor.d5,
            Self::C1 => r.detector.c1,
            Self::C2 => r.detector.c2,
            Self::C3 => r.detector.c3,
            Self::C4 => r.detector.c4,
            Self::C5 => r.detector.c5,
        }
    }

    pub fn published(self, p: &PublishedRow) -> f64 {
        match self {
            Self::C => p.c,
            Self::B => p.b,
            Self::B1 => p.b1,
            Self::B2 => p.b2,
            Self::D11 => p.d11,
            Self::D12 => p.d12,
            Self::D21 => p.d21,
            Self::D22 => p.d22,
            Self::D3 => p.d3,
            Self::D4 => p.d4,
            Self::D5 => p.d5,
            Self::C1 => p.c1,
            Self::C2 => p.c2,
            Self::C3 => p.c3,
            Self::C4 => p.c4,
            Self::C5 => p.c5,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a recomputed column is held against its printed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tolerance {
    Relative(f64),
    Absolute(f64),
    /// Computed may be smaller, or larger by at most this fraction.
    Excess(f64),
    /// Must round up to the printed three-decimal value.
    RoundsTo,
    Exact,
    /// Documented disagreement; reported, never counted as a failure.
    Known,
}

/// Tolerance for each column. `d11, d12, d21` are printed to three decimals
/// (about 2% of their size), so they get 3%.
pub fn tolerance(q: Quantity, mode: D3Mode) -> Tolerance {
    match q {
        Quantity::C => Tolerance::Relative(0.02),
        Quantity::B => Tolerance::RoundsTo,
        Quantity::B1 | Quantity::B2 => Tolerance::Excess(0.01),
        Quantity::D11 | Quantity::D12 | Quantity::D21 => Tolerance::Relative(0.03),
        Quantity::D22 => Tolerance::Known,
        Quantity::D3 => match mode {
            D3Mode::Literal => Tolerance::Known,
            D3Mode::Table => Tolerance::Exact,
        },
        Quantity::D4 | Quantity::C2 | Quantity::C3 | Quantity::C4 => Tolerance::Relative(0.02),
        Quantity::D5 => Tolerance::Relative(0.001),
        Quantity::C1 => Tolerance::Absolute(0.005),
        Quantity::C5 => Tolerance::Relative(0.10),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: Quantity,
    pub computed: f64,
    pub published: f64,
    /// Relative difference, or absolute for absolute tolerances.
    pub diff: f64,
    pub tolerance: Tolerance,
    pub within: bool,
}

impl Comparison {
    pub fn known(&self) -> bool {
        self.tolerance == Tolerance::Known
    }

    /// Counts against the run: outside tolerance and not a documented discrepancy.
    pub fn failed(&self) -> bool {
        !self.within && !self.known()
    }
}

pub fn compare(q: Quantity, computed: f64, published: f64, tol: Tolerance) -> Comparison {
    let rel = computed / published - 1.0;
    let (diff, within) = match tol {
        Tolerance::Relative(t) => (rel, rel.abs() <= t),
        Tolerance::Absolute(t) => (computed - published, (computed - published).abs() <= t),
        Tolerance::Excess(t) => (rel, rel <= t),
        Tolerance::RoundsTo => (rel, round_b(computed) == published),
        Tolerance::Exact => (rel, computed == published),
        Tolerance::Known => (rel, rel.abs() <= 1e-12),
    };
    Comparison { quantity: q, computed, published, diff, tolerance: tol, within }
}

/// Compares the requested columns of one row.
pub fn compare_row(r: &RowConstants, p: &PublishedRow, quantities: &[Quantity]) -> Vec<Comparison> {
    quantities.iter().map(|&q| compare(q, q.computed(r), q.published(p), tolerance(q, r.d3_mode))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_kinds() {
        assert!(compare(Quantity::C, 101.0, 100.0, Tolerance::Relative(0.02)).within);
        assert!(!compare(Quantity::C, 103.0, 100.0, Tolerance::Relative(0.02)).within);
        assert!(compare(Quantity::B1, 0.5, 0.711, Tolerance::Excess(0.01)).within);
        assert!(!compare(Quantity::B1, 0.72, 0.711, Tolerance::Excess(0.01)).within);
        assert!(compare(Quantity::B, 14.159674, 14.160, Tolerance::RoundsTo).within);
        assert!(!compare(Quantity::B, 14.1611, 14.160, Tolerance::RoundsTo).within);
        let known = compare(Quantity::D3, 1.7, 0.003, Tolerance::Known);
        assert!(!known.within && known.known() && !known.failed());
    }
}
