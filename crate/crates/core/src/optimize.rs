//! Weighted-sum maximization over both hulls and the sufficient conditions
//! under which the achievable region meets the outer bound.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::exec::{Executor, Serial};
use crate::math::half_log2_1p;
use crate::model::{ChannelParams, PowerSplit, RateTriple, Weights};
use crate::regions::{
    self, cognitive_private_denominator, primary_private_denominator, BoundKind, RegionError,
    RegionTable, SplitGrid, SupportResult,
};

/// `gap` at or below this counts as tight.
pub const GAP_TOLERANCE: f64 = 1e-9;
/// `alpha° >= 1 - ALPHA_ONE_TOLERANCE` counts as `alpha° = 1`.
pub const ALPHA_ONE_TOLERANCE: f64 = 1e-6;

const R2_NOTE: &str = "r2_cap = 1/2*log2(1 + alpha*P2) for both kinds";
const COND33_NOTE: &str = "cond33 evaluated with beta_opt = 1 in both radicals";
const LEMMA7_NOTE: &str = "lemma7 corner checked against the inner region at alpha = 1, beta = 0";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizeError {
    Region(RegionError),
    PreconditionViolated(&'static str),
}

impl fmt::Display for OptimizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimizeError::Region(e) => e.fmt(f),
            OptimizeError::PreconditionViolated(what) => write!(f, "precondition violated: {what}"),
        }
    }
}

impl core::error::Error for OptimizeError {}

impl From<RegionError> for OptimizeError {
    fn from(e: RegionError) -> Self {
        OptimizeError::Region(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Tight,
    NotProvenTight,
}

/// Which sufficient condition a report evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Condition {
    /// `mu0 >= mu1`: two channel inequalities at `(alpha°, 1)`.
    Lemma6,
    /// `mu0 < mu1`: `alpha° = 1` plus achievability of the outer corner.
    Lemma7,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct OptimalityReport {
    pub condition: Condition,
    pub weights: Weights,
    pub outer_value: f64,
    pub inner_value: f64,
    pub outer_split: PowerSplit,
    pub inner_split: PowerSplit,
    pub outer_point: RateTriple,
    pub inner_point: RateTriple,
    /// `outer_value - inner_value`.
    pub gap: f64,
    /// Cognitive-receiver R1 constraint no tighter than the primary one,
    /// evaluated at `inner_split`.
    pub remark1_holds: bool,
    pub lemma6_cond33: bool,
    pub lemma6_cond34: bool,
    pub lemma7_applicable: bool,
    /// Only evaluated for [`Condition::Lemma7`] when `alpha° = 1`.
    pub corner_achievable: Option<bool>,
    /// Both Lemma 6 inequalities hold yet the measured gap is not zero.
    pub claim_counterexample: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Maximizes `w·R` over the hull of the chosen kind.
pub fn maximize_weighted(
    ch: &ChannelParams,
    w: &Weights,
    kind: BoundKind,
    grid: SplitGrid,
) -> Result<SupportResult, OptimizeError> {
    maximize_weighted_with(ch, w, kind, grid, &Serial)
}

pub fn maximize_weighted_with<E: Executor>(
    ch: &ChannelParams,
    w: &Weights,
    kind: BoundKind,
    grid: SplitGrid,
    exec: &E,
) -> Result<SupportResult, OptimizeError> {
    Ok(RegionTable::with_executor(ch, kind, grid, exec)?.union_support(w))
}

/// Both sides of the Remark 1 comparison with the common `(1-beta)·P1`
/// factor divided out: `a²/D_cog` versus `1/D_primary`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Remark1Terms {
    pub left: f64,
    pub right: f64,
}

pub fn remark1_terms(ch: &ChannelParams, sp: PowerSplit) -> Remark1Terms {
    Remark1Terms {
        left: ch.a() * ch.a() / cognitive_private_denominator(ch, &sp),
        right: 1.0 / primary_private_denominator(ch, &sp),
    }
}

/// True when the primary receiver's R1 constraint is at least as binding as
/// the cognitive receiver's. With no private power both sides vanish and the
/// condition holds trivially.
pub fn check_remark1(ch: &ChannelParams, sp: PowerSplit) -> bool {
    if sp.beta() >= 1.0 || ch.p1() == 0.0 {
        return true;
    }
    let t = remark1_terms(ch, sp);
    t.left >= t.right
}

/// The remark-1 inequality evaluated at `(alpha°, beta° = 1)`.
pub fn lemma6_cond33(ch: &ChannelParams, alpha_opt: f64) -> bool {
    let t = remark1_terms(ch, PowerSplit::clamped(alpha_opt, 1.0));
    t.left >= t.right
}

/// The primary's full-power rate against `mu` times the
/// rate the cognitive relaying adds, both in base 2.
pub fn lemma6_cond34(ch: &ChannelParams, alpha_opt: f64) -> bool {
    let b2 = ch.b() * ch.b();
    let lhs = half_log2_1p(ch.p1() / (1.0 + b2 * ch.p2()));
    let rhs =
        ch.mu() * half_log2_1p(b2 * (1.0 - alpha_opt) * ch.p2() / (1.0 + b2 * alpha_opt * ch.p2()));
    lhs >= rhs
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma5Violation {
    pub split: PowerSplit,
    pub support_at_split: f64,
    pub support_at_beta_one: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma5Report {
    pub weights: Weights,
    pub argmax: SupportResult,
    pub beta_opt_is_one: bool,
    /// First grid cell (row-major) where `beta < 1` beats `beta = 1`.
    pub violation: Option<Lemma5Violation>,
    /// Some `beta < 1` on the optimal alpha row ties the optimum.
    pub degenerate_tie: bool,
}

impl Lemma5Report {
    pub fn holds(&self) -> bool {
        self.beta_opt_is_one && self.violation.is_none()
    }
}

pub fn check_lemma5(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
) -> Result<Lemma5Report, OptimizeError> {
    check_lemma5_with(ch, w, grid, &Serial)
}

/// Empirical check that `beta° = 1`: at every grid alpha, the `beta = 1`
/// region dominates every other beta in direction `w`.
pub fn check_lemma5_with<E: Executor>(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
    exec: &E,
) -> Result<Lemma5Report, OptimizeError> {
    let table = RegionTable::with_executor(ch, BoundKind::Outer, grid, exec)?;
    let argmax = table.union_support(w);
    let supports: Vec<SupportResult> = table.bounds().map(|rb| regions::support(rb, w)).collect();
    let tol = |v: f64| 1e-12 * v.abs().max(1.0);

    let mut violation = None;
    for row in supports.chunks(grid.beta_steps) {
        let at_one = row[grid.beta_steps - 1];
        if let Some(s) = row
            .iter()
            .find(|s| s.value > at_one.value + tol(at_one.value))
        {
            violation = Some(Lemma5Violation {
                split: s.split,
                support_at_split: s.value,
                support_at_beta_one: at_one.value,
            });
            break;
        }
    }

    let alpha_opt = argmax.split.alpha();
    let degenerate_tie = (0..grid.beta_steps - 1).any(|j| {
        let sp = PowerSplit::clamped(alpha_opt, grid.beta_at(j));
        let rb = regions::outer_bounds(ch, sp).expect("weak interference checked above");
        regions::support(&rb, w).value >= argmax.value - tol(argmax.value)
    });

    Ok(Lemma5Report {
        weights: *w,
        beta_opt_is_one: argmax.split.beta() >= 1.0 - ALPHA_ONE_TOLERANCE,
        argmax,
        violation,
        degenerate_tie,
    })
}

struct Optima {
    outer: SupportResult,
    inner: SupportResult,
}

fn both_optima<E: Executor>(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
    exec: &E,
) -> Result<Optima, OptimizeError> {
    Ok(Optima {
        outer: maximize_weighted_with(ch, w, BoundKind::Outer, grid, exec)?,
        inner: maximize_weighted_with(ch, w, BoundKind::Inner, grid, exec)?,
    })
}

fn base_report(
    ch: &ChannelParams,
    w: &Weights,
    condition: Condition,
    opt: &Optima,
) -> OptimalityReport {
    let alpha_opt = opt.outer.split.alpha();
    let lemma6_cond33 = lemma6_cond33(ch, alpha_opt);
    let lemma6_cond34 = lemma6_cond34(ch, alpha_opt);
    let gap = opt.outer.value - opt.inner.value;
    OptimalityReport {
        condition,
        weights: *w,
        outer_value: opt.outer.value,
        inner_value: opt.inner.value,
        outer_split: opt.outer.split,
        inner_split: opt.inner.split,
        outer_point: opt.outer.maximizer,
        inner_point: opt.inner.maximizer,
        gap,
        remark1_holds: check_remark1(ch, opt.inner.split),
        lemma6_cond33,
        lemma6_cond34,
        lemma7_applicable: w.mu0() < w.mu1() && alpha_opt >= 1.0 - ALPHA_ONE_TOLERANCE,
        corner_achievable: None,
        claim_counterexample: lemma6_cond33 && lemma6_cond34 && gap > GAP_TOLERANCE,
        verdict: Verdict::NotProvenTight,
        notes: vec![R2_NOTE.to_string()],
    }
}

pub fn check_lemma6(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
) -> Result<OptimalityReport, OptimizeError> {
    check_lemma6_with(ch, w, grid, &Serial)
}

/// `mu0 >= mu1` case: tight when both channel conditions hold and the
/// measured gap vanishes.
pub fn check_lemma6_with<E: Executor>(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
    exec: &E,
) -> Result<OptimalityReport, OptimizeError> {
    if w.mu0() < w.mu1() {
        return Err(OptimizeError::PreconditionViolated(
            "lemma 6 needs mu0 >= mu1",
        ));
    }
    let opt = both_optima(ch, w, grid, exec)?;
    let mut report = base_report(ch, w, Condition::Lemma6, &opt);
    report.notes.push(COND33_NOTE.to_string());
    if report.lemma6_cond33 && report.lemma6_cond34 && report.gap <= GAP_TOLERANCE {
        report.verdict = Verdict::Tight;
    }
    Ok(report)
}

/// The outer optimum for `mu0 < mu1` at `alpha° = 1`.
pub fn lemma7_corner(ch: &ChannelParams) -> RateTriple {
    let b2 = ch.b() * ch.b();
    RateTriple {
        r0: 0.0,
        r1: half_log2_1p(ch.p1() / (1.0 + b2 * ch.p2())),
        r2: half_log2_1p(ch.p2()),
    }
}

pub fn check_lemma7(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
) -> Result<OptimalityReport, OptimizeError> {
    check_lemma7_with(ch, w, grid, &Serial)
}

/// `mu0 < mu1` case: tight when `alpha° = 1` and the outer corner is
/// achievable with `alpha = 1, beta = 0`.
pub fn check_lemma7_with<E: Executor>(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
    exec: &E,
) -> Result<OptimalityReport, OptimizeError> {
    if w.mu0() >= w.mu1() {
        return Err(OptimizeError::PreconditionViolated(
            "lemma 7 needs mu0 < mu1",
        ));
    }
    let opt = both_optima(ch, w, grid, exec)?;
    let mut report = base_report(ch, w, Condition::Lemma7, &opt);
    report.notes.push(LEMMA7_NOTE.to_string());
    if report.lemma7_applicable {
        let at_corner = regions::inner_bounds(ch, PowerSplit::clamped(1.0, 0.0));
        let achievable = at_corner.contains_point(&lemma7_corner(ch), 1e-12);
        report.corner_achievable = Some(achievable);
        if achievable && report.gap <= GAP_TOLERANCE {
            report.verdict = Verdict::Tight;
        }
    }
    Ok(report)
}

/// Lemma 6 when `mu0 >= mu1`, otherwise Lemma 7.
pub fn optimality_report_with<E: Executor>(
    ch: &ChannelParams,
    w: &Weights,
    grid: SplitGrid,
    exec: &E,
) -> Result<OptimalityReport, OptimizeError> {
    if w.mu0() >= w.mu1() {
        check_lemma6_with(ch, w, grid, exec)
    } else {
        check_lemma7_with(ch, w, grid, exec)
    }
}
