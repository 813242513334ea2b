//! Field profiles, grid sweeps and the entanglement collapse/revival scan.
//!
//! At fixed `t̃`, the logarithmic negativity of the two-site state drops to
//! zero at some field `ã_c` as `ã` grows. For some times it becomes nonzero
//! again at larger fields. The question this module answers for each time is
//! whether the discord is rising at `ã_c` and whether a revival follows.
//!
//! Entanglement is tracked through the smallest eigenvalue of the partial
//! transpose, `λ(ã)`. It is smooth apart from kinks where the two X-blocks
//! exchange roles, and the zero-entanglement windows near those kinks can be
//! far narrower than any practical scan step (about `2·10⁻³` wide at
//! `t̃ = 0.5, γ = 0.5`). The scan therefore refines every sampled local maximum
//! of `λ` before deciding that no window exists there.
//!
//! `LN` and `Q` are even in `ã`: flipping the field maps the state to its
//! image under a global `σˣ⊗σˣ` rotation. Only the positive axis is scanned
//! by default.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::{correlator_set, CorrelatorSet, ModelParams};
use crate::discord::{discord_with, mutual_information, DiscordResult};
use crate::entanglement::{self, EntanglementResult};
use crate::error::{Error, Result};
use crate::optimize::BasisSearch;
use crate::qstate::{Diagnostics, Side, TwoQubitState};
use crate::quadrature::QuadratureSpec;
use crate::workdeficit::{one_way_deficit_with, DeficitResult};

/// Which correlation measures to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Measures {
    pub ln: bool,
    pub discord: bool,
    pub deficit: bool,
    pub mi: bool,
}

impl Measures {
    pub fn all() -> Self {
        Measures {
            ln: true,
            discord: true,
            deficit: true,
            mi: true,
        }
    }

    pub fn ln_discord() -> Self {
        Measures {
            ln: true,
            discord: true,
            ..Default::default()
        }
    }
}

impl FromStr for Measures {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut m = Measures::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "ln" => m.ln = true,
                "discord" => m.discord = true,
                "deficit" => m.deficit = true,
                "mi" => m.mi = true,
                "all" => m = Measures::all(),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown measure '{other}' (expected ln, discord, deficit, mi or all)"
                    )))
                }
            }
        }
        Ok(m)
    }
}

/// Knobs of the analysis layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub quadrature: QuadratureSpec,
    pub search: BasisSearch,
    /// Side measured for discord and dephased for the work-deficit.
    #[serde(skip)]
    pub measured_side: Side,
    /// Partial-transpose eigenvalues above `-collapse_threshold` mean no entanglement.
    pub collapse_threshold: f64,
    /// Post-collapse LN above this (ebits) counts as a revival.
    pub revival_threshold: f64,
    /// Field resolution of the returned `ã_c`.
    pub collapse_resolution: f64,
    /// Search window for `ã_c`.
    pub collapse_window: (f64, f64),
    /// Sampling step of the collapse search.
    pub collapse_step: f64,
    /// Upper end of the revival search.
    pub revival_ceiling: f64,
    /// Sampling step of the revival search.
    pub revival_step: f64,
    /// Central-difference half-width for `∂Q/∂ã`.
    pub slope_step: f64,
    /// Allowed disagreement between the `h` and `h/2` slopes.
    pub slope_agreement: f64,
    /// `|ã_c|` inside this interval is flagged as near the `ã = 1` transition.
    pub exceptional_zone: (f64, f64),
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            quadrature: QuadratureSpec::default(),
            search: BasisSearch::default(),
            measured_side: Side::B,
            collapse_threshold: entanglement::ZERO_THRESHOLD,
            revival_threshold: 1e-4,
            collapse_resolution: 1e-9,
            collapse_window: (0.0, 3.0),
            collapse_step: 5e-3,
            revival_ceiling: 20.0,
            revival_step: 1e-2,
            slope_step: 1e-3,
            slope_agreement: 1e-3,
            exceptional_zone: (0.9, 1.1),
        }
    }
}

/// Rectangular `(ã, t̃)` grid at fixed anisotropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub a_min: f64,
    pub a_max: f64,
    pub a_steps: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub gamma: f64,
}

/// Evenly spaced values, both ends included; a single value when `count == 1`.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    max
                } else {
                    min + (max - min) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_min < self.a_max) && self.a_steps > 1 {
            return Err(Error::InvalidParameter(
                "sweep grid needs a_min < a_max".into(),
            ));
        }
        if !(self.t_min <= self.t_max) {
            return Err(Error::InvalidParameter(
                "sweep grid needs t_min <= t_max".into(),
            ));
        }
        if self.a_steps < 1 || self.t_steps < 1 {
            return Err(Error::InvalidParameter(
                "sweep grid needs at least one step per axis".into(),
            ));
        }
        ModelParams::new(self.gamma, self.a_min, self.t_min.max(0.0))?;
        Ok(())
    }

    pub fn a_values(&self) -> Vec<f64> {
        linspace(self.a_min, self.a_max, self.a_steps)
    }

    pub fn t_values(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.t_steps)
    }
}

/// Everything computed at one `(ã, t̃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub params: ModelParams,
    pub correlators: CorrelatorSet,
    #[serde(skip)]
    pub diagnostics: Option<Diagnostics>,
    /// Smallest partial-transpose eigenvalue.
    pub min_pt_eigenvalue: f64,
    pub entanglement: Option<EntanglementResult>,
    pub discord: Option<DiscordResult>,
    pub deficit: Option<DeficitResult>,
    pub mutual_info: Option<f64>,
}

/// One sample of a fixed-time field profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldProfilePoint {
    pub a_tilde: f64,
    /// Logarithmic negativity, ebits. Always computed.
    pub ln: f64,
    /// Discord, bits.
    pub discord: Option<f64>,
    /// One-way work-deficit, qubits.
    pub deficit: Option<f64>,
    /// Mutual information, bits.
    pub mutual_info: Option<f64>,
}

impl From<&PointReport> for FieldProfilePoint {
    fn from(r: &PointReport) -> Self {
        FieldProfilePoint {
            a_tilde: r.params.a_tilde,
            ln: r.entanglement.map(|e| e.log_negativity).unwrap_or(f64::NAN),
            discord: r.discord.map(|d| d.discord),
            deficit: r.deficit.map(|d| d.deficit),
            mutual_info: r.mutual_info,
        }
    }
}

/// Largest post-collapse entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Revival {
    pub max_ln: f64,
    pub a_at_max: f64,
    pub revived: bool,
}

/// Per-time summary of the collapse/revival scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseRevivalRecord {
    pub t_tilde: f64,
    pub a_c: Option<f64>,
    /// `∂Q/∂ã` at `ã_c`.
    pub slope: Option<f64>,
    pub revived: bool,
    pub max_ln_after_collapse: f64,
    pub a_revival_peak: Option<f64>,
    pub predicate_holds: bool,
    pub exceptional_near_qpt: bool,
}

impl CollapseRevivalRecord {
    /// Whether the slope sign and the revival outcome agree.
    pub fn concordant(&self) -> bool {
        self.predicate_holds == self.revived
    }
}

/// `ã_c · ∂Q/∂ã > 0`: rising discord (away from zero field) at the collapse
/// field predicts a revival at larger `|ã|`.
pub fn revival_predicate(record: &CollapseRevivalRecord) -> bool {
    match (record.a_c, record.slope) {
        (Some(a_c), Some(slope)) => a_c * slope > 0.0,
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanFailure {
    pub t_tilde: f64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanReport {
    pub records: Vec<CollapseRevivalRecord>,
    pub failures: Vec<ScanFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub a_tilde: f64,
    pub t_tilde: f64,
    pub outcome: std::result::Result<FieldProfilePoint, Error>,
}

/// Row-major (`t̃` outer, `ã` inner) sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDataset {
    pub grid: SweepGrid,
    pub cells: Vec<GridCell>,
}

impl GridDataset {
    pub fn failures(&self) -> impl Iterator<Item = &GridCell> {
        self.cells.iter().filter(|c| c.outcome.is_err())
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal function on `[lo, hi]`.
fn golden_max<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

/// Locates the first entangled-to-separable transition of `signal` (the
/// smallest partial-transpose eigenvalue) in `[lo, hi]`.
///
/// `signal(ã) < -threshold` means entangled. Sampled at `step`; each sampled
/// local maximum that stays below `-threshold` is refined in case a narrow
/// separable window hides between samples. The returned field is the
/// separable end of a bisection bracket no wider than `resolution`.
pub fn locate_collapse<F>(
    mut signal: F,
    lo: f64,
    hi: f64,
    step: f64,
    threshold: f64,
    resolution: f64,
) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(hi > lo) || !(step > 0.0) {
        return Ok(None);
    }
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let xs = linspace(lo, hi, n + 1);
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        ys.push(signal(x)?);
    }
    let entangled = |y: f64| y < -threshold;

    let mut bracket = None;
    for i in 1..xs.len() {
        if entangled(ys[i - 1]) && !entangled(ys[i]) {
            bracket = Some((xs[i - 1], xs[i]));
            break;
        }
        let interior_peak = i + 1 < xs.len()
            && entangled(ys[i - 1])
            && entangled(ys[i])
            && entangled(ys[i + 1])
            && ys[i] >= ys[i - 1]
            && ys[i] >= ys[i + 1];
        if interior_peak {
            let (x_peak, y_peak) = golden_max(&mut signal, xs[i - 1], xs[i + 1], 1e-12)?;
            if !entangled(y_peak) {
                bracket = Some((xs[i - 1], x_peak));
                break;
            }
        }
    }
    let Some((mut ent, mut sep)) = bracket else {
        return Ok(None);
    };
    while sep - ent > resolution {
        let mid = 0.5 * (ent + sep);
        if entangled(signal(mid)?) {
            ent = mid;
        } else {
            sep = mid;
        }
    }
    Ok(Some(sep))
}

/// Largest `-signal` on `(lo, hi]` with local refinement around every sampled
/// minimum.
fn deepest_dip<F>(mut signal: F, lo: f64, hi: f64, step: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let xs: Vec<f64> = linspace(lo, hi, n + 1).into_iter().skip(1).collect();
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        ys.push(signal(x)?);
    }
    let mut best = xs
        .iter()
        .zip(&ys)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(&x, &y)| (x, y))
        .unwrap_or((hi, f64::INFINITY));
    for i in 1..xs.len().saturating_sub(1) {
        if ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1] {
            let (x, neg_y) = golden_max(|x| signal(x).map(|y| -y), xs[i - 1], xs[i + 1], 1e-10)?;
            if -neg_y < best.1 {
                best = (x, -neg_y);
            }
        }
    }
    Ok(best)
}

/// Evaluates the pipeline at fixed anisotropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analyzer {
    pub gamma: f64,
    pub config: AnalysisConfig,
}

impl Analyzer {
    pub fn new(gamma: f64, config: AnalysisConfig) -> Result<Self> {
        ModelParams::new(gamma, 0.0, 0.0)?;
        config.quadrature.validate()?;
        Ok(Analyzer { gamma, config })
    }

    fn params(&self, a_tilde: f64, t_tilde: f64) -> Result<ModelParams> {
        ModelParams::new(self.gamma, a_tilde, t_tilde)
    }

    pub fn correlators(&self, a_tilde: f64, t_tilde: f64) -> Result<CorrelatorSet> {
        correlator_set(&self.params(a_tilde, t_tilde)?, &self.config.quadrature)
    }

    pub fn state(&self, a_tilde: f64, t_tilde: f64) -> Result<TwoQubitState> {
        TwoQubitState::from_correlators(&self.correlators(a_tilde, t_tilde)?)
    }

    /// Smallest partial-transpose eigenvalue; negative means entangled.
    pub fn min_pt_eigenvalue(&self, a_tilde: f64, t_tilde: f64) -> Result<f64> {
        Ok(entanglement::min_pt_eigenvalue(
            &self.state(a_tilde, t_tilde)?,
        ))
    }

    pub fn log_negativity(&self, a_tilde: f64, t_tilde: f64) -> Result<f64> {
        Ok(entanglement::log_negativity(&self.state(a_tilde, t_tilde)?))
    }

    pub fn discord_value(&self, a_tilde: f64, t_tilde: f64, search: &BasisSearch) -> Result<f64> {
        let s = self.state(a_tilde, t_tilde)?;
        Ok(discord_with(&s, self.config.measured_side, search)?.discord)
    }

    /// Full evaluation at one point.
    pub fn evaluate(&self, a_tilde: f64, t_tilde: f64, measures: Measures) -> Result<PointReport> {
        let inner = || -> Result<PointReport> {
            let params = self.params(a_tilde, t_tilde)?;
            let correlators = correlator_set(&params, &self.config.quadrature)?;
            let state = TwoQubitState::from_correlators(&correlators)?;
            let side = self.config.measured_side;
            Ok(PointReport {
                params,
                correlators,
                diagnostics: Some(state.validate()),
                min_pt_eigenvalue: entanglement::min_pt_eigenvalue(&state),
                entanglement: Some(entanglement::entanglement(&state)),
                discord: if measures.discord {
                    Some(discord_with(&state, side, &self.config.search)?)
                } else {
                    None
                },
                deficit: if measures.deficit {
                    Some(one_way_deficit_with(&state, side, &self.config.search)?)
                } else {
                    None
                },
                mutual_info: if measures.mi {
                    Some(mutual_information(&state)?)
                } else {
                    None
                },
            })
        };
        inner().map_err(|e| e.at(a_tilde, t_tilde))
    }

    /// Evaluates `(ã, t̃)` pairs in parallel; results keep input order.
    pub fn evaluate_many(
        &self,
        points: &[(f64, f64)],
        measures: Measures,
    ) -> Vec<Result<PointReport>> {
        points
            .par_iter()
            .map(|&(a, t)| self.evaluate(a, t, measures))
            .collect()
    }

    /// Measures along `a_values` at fixed time, in input order.
    pub fn field_profile(
        &self,
        t_tilde: f64,
        a_values: &[f64],
        measures: Measures,
    ) -> Result<Vec<FieldProfilePoint>> {
        a_values
            .par_iter()
            .map(|&a| {
                self.evaluate(a, t_tilde, measures)
                    .map(|r| FieldProfilePoint::from(&r))
            })
            .collect()
    }

    /// First field in `window` where entanglement vanishes at time `t_tilde`.
    pub fn find_collapse(&self, t_tilde: f64, window: (f64, f64)) -> Result<Option<f64>> {
        let c = &self.config;
        locate_collapse(
            |a| self.min_pt_eigenvalue(a, t_tilde),
            window.0,
            window.1,
            c.collapse_step,
            c.collapse_threshold,
            c.collapse_resolution,
        )
        .map_err(|e| e.at(window.0, t_tilde))
    }

    /// Largest LN on `(a_c, ceiling]`.
    pub fn find_revival(&self, t_tilde: f64, a_c: f64, ceiling: f64) -> Result<Revival> {
        if !(ceiling > a_c) {
            return Ok(Revival {
                max_ln: 0.0,
                a_at_max: a_c,
                revived: false,
            });
        }
        let (a_at_max, lambda) = deepest_dip(
            |a| self.min_pt_eigenvalue(a, t_tilde),
            a_c,
            ceiling,
            self.config.revival_step,
        )
        .map_err(|e| e.at(a_c, t_tilde))?;
        let negativity = if lambda < -self.config.collapse_threshold {
            -lambda
        } else {
            0.0
        };
        let max_ln = entanglement::log_negativity_from(negativity);
        Ok(Revival {
            max_ln,
            a_at_max,
            revived: max_ln > self.config.revival_threshold,
        })
    }

    fn central_difference(
        &self,
        t_tilde: f64,
        a_c: f64,
        h: f64,
        search: &BasisSearch,
    ) -> Result<f64> {
        let up = self.discord_value(a_c + h, t_tilde, search)?;
        let down = self.discord_value(a_c - h, t_tilde, search)?;
        Ok((up - down) / (2.0 * h))
    }

    /// `∂Q/∂ã` at `a_c` by central differences, cross-checked at half step.
    pub fn discord_slope(&self, t_tilde: f64, a_c: f64) -> Result<f64> {
        let h = self.config.slope_step;
        let mut last = (f64::NAN, f64::NAN);
        for search in [self.config.search, self.config.search.tightened(1e-3)] {
            let coarse = self.central_difference(t_tilde, a_c, h, &search)?;
            let fine = self.central_difference(t_tilde, a_c, 0.5 * h, &search)?;
            if (coarse - fine).abs() <= self.config.slope_agreement {
                return Ok(coarse);
            }
            last = (coarse, fine);
        }
        Err(Error::UnstableDerivative {
            coarse: last.0,
            fine: last.1,
        }
        .at(a_c, t_tilde))
    }

    pub fn is_exceptional(&self, a_c: f64) -> bool {
        let (lo, hi) = self.config.exceptional_zone;
        (lo..=hi).contains(&a_c.abs())
    }

    /// Collapse, slope, revival and predicate at one time.
    pub fn collapse_revival(&self, t_tilde: f64) -> Result<CollapseRevivalRecord> {
        let mut record = CollapseRevivalRecord {
            t_tilde,
            a_c: None,
            slope: None,
            revived: false,
            max_ln_after_collapse: 0.0,
            a_revival_peak: None,
            predicate_holds: false,
            exceptional_near_qpt: false,
        };
        let Some(a_c) = self.find_collapse(t_tilde, self.config.collapse_window)? else {
            return Ok(record);
        };
        record.a_c = Some(a_c);
        record.exceptional_near_qpt = self.is_exceptional(a_c);
        record.slope = Some(self.discord_slope(t_tilde, a_c)?);
        let revival = self.find_revival(t_tilde, a_c, self.config.revival_ceiling)?;
        record.revived = revival.revived;
        record.max_ln_after_collapse = revival.max_ln;
        record.a_revival_peak = revival.revived.then_some(revival.a_at_max);
        record.predicate_holds = revival_predicate(&record);
        Ok(record)
    }

    /// Runs [`collapse_revival`](Self::collapse_revival) for every time.
    /// Failures are collected and the scan continues.
    pub fn derivative_scan(&self, t_values: &[f64]) -> ScanReport {
        let results: Vec<_> = t_values
            .par_iter()
            .map(|&t| (t, self.collapse_revival(t)))
            .collect();
        let mut report = ScanReport::default();
        for (t_tilde, r) in results {
            match r {
                Ok(rec) => report.records.push(rec),
                Err(error) => report.failures.push(ScanFailure { t_tilde, error }),
            }
        }
        report
    }

    /// Evaluates every grid cell; failing cells are kept with their error.
    pub fn grid_sweep(&self, grid: &SweepGrid, measures: Measures) -> Result<GridDataset> {
        grid.validate()?;
        let a_values = grid.a_values();
        let coords: Vec<(f64, f64)> = grid
            .t_values()
            .into_iter()
            .flat_map(|t| a_values.iter().map(move |&a| (a, t)))
            .collect();
        let cells = coords
            .par_iter()
            .map(|&(a, t)| GridCell {
                a_tilde: a,
                t_tilde: t,
                outcome: self
                    .evaluate(a, t, measures)
                    .map(|r| FieldProfilePoint::from(&r)),
            })
            .collect();
        Ok(GridDataset { grid: *grid, cells })
    }
}
