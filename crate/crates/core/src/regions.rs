//! Outer-bound and achievable rate polytopes.
//!
//! For a fixed power split `(alpha, beta)` both regions are polytopes of the
//! form `F × [0, r2_cap]`, where the face `F` lives in the `(R0, R1)` plane:
//!
//! * outer: `R0 <= r0_cap`, `R0 + R1 <= sum_cap`, `R1 >= mu·R0`, `R0 >= 0`
//! * inner: `R0 <= r0_cap`, `R1 <= min(r1 caps)`, `R1 >= mu·R0`, `R0 >= 0`
//!
//! The full regions are convex hulls of the union over the split square.
//! They are never built explicitly: the support function of a hull of a
//! union is the maximum of the member supports, so weighted-sum queries are
//! answered by maximizing over `(alpha, beta)`.
//!
//! That maximization starts from a grid sweep, walks the best node (and a
//! couple of runner-up local maxima) uphill by coordinate search, then
//! polishes with a trust-region linear model in `t = sqrt(1 - alpha)`,
//! `s = sqrt(beta)`, where the caps are smooth.

use alloc::vec::Vec;
use core::fmt;

use crate::exec::{Executor, Serial};
use crate::math::{coherent_term, half_log2_1p, sqrt};
use crate::model::{ChannelParams, PowerSplit, RateTriple, Weights};

/// Slack used in [`contains`].
pub const CONTAINS_TOLERANCE: f64 = 1e-9;
/// Refinement stops once an accepted move gains less than this.
pub const REFINE_TOLERANCE: f64 = 1e-10;

const FEASIBILITY_TOL: f64 = 1e-12;
const DEDUP_TOL: f64 = 1e-12;
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundKind {
    Outer,
    Inner,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Outer => "outer",
            BoundKind::Inner => "inner",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionError {
    /// The outer bound is only valid for `|b| < 1`.
    WeakInterferenceRequired {
        b: f64,
    },
    InvalidGrid,
    TooFewDirections {
        requested: usize,
    },
}

impl fmt::Display for RegionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionError::WeakInterferenceRequired { b } => {
                write!(
                    f,
                    "outer bound requires weak interference |b| < 1, got b = {b}"
                )
            }
            RegionError::InvalidGrid => f.write_str("grid needs at least 2 points per axis"),
            RegionError::TooFewDirections { requested } => {
                write!(
                    f,
                    "membership test needs at least 16 directions, got {requested}"
                )
            }
        }
    }
}

impl core::error::Error for RegionError {}

/// The kind-specific part of a per-split region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionShape {
    Outer {
        sum_cap: f64,
    },
    Inner {
        r1_cap_legitimate: f64,
        r1_cap_cognitive: f64,
    },
}

/// Caps of the polytope produced by one power split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    pub split: PowerSplit,
    pub mu: f64,
    pub r0_cap: f64,
    pub r2_cap: f64,
    pub shape: RegionShape,
}

impl RegionBounds {
    pub fn from_outer_caps(
        split: PowerSplit,
        mu: f64,
        r0_cap: f64,
        sum_cap: f64,
        r2_cap: f64,
    ) -> Self {
        RegionBounds {
            split,
            mu,
            r0_cap,
            r2_cap,
            shape: RegionShape::Outer { sum_cap },
        }
    }

    pub fn from_inner_caps(
        split: PowerSplit,
        mu: f64,
        r0_cap: f64,
        r1_cap_legitimate: f64,
        r1_cap_cognitive: f64,
        r2_cap: f64,
    ) -> Self {
        RegionBounds {
            split,
            mu,
            r0_cap,
            r2_cap,
            shape: RegionShape::Inner {
                r1_cap_legitimate,
                r1_cap_cognitive,
            },
        }
    }

    pub fn kind(&self) -> BoundKind {
        match self.shape {
            RegionShape::Outer { .. } => BoundKind::Outer,
            RegionShape::Inner { .. } => BoundKind::Inner,
        }
    }

    pub fn sum_cap(&self) -> Option<f64> {
        match self.shape {
            RegionShape::Outer { sum_cap } => Some(sum_cap),
            RegionShape::Inner { .. } => None,
        }
    }

    /// Effective inner R1 cap, `min` of the two decoding constraints.
    pub fn r1_cap(&self) -> Option<f64> {
        match self.shape {
            RegionShape::Outer { .. } => None,
            RegionShape::Inner {
                r1_cap_legitimate,
                r1_cap_cognitive,
            } => Some(r1_cap_legitimate.min(r1_cap_cognitive)),
        }
    }

    /// Half-planes `c0·R0 + c1·R1 <= rhs` bounding the face.
    fn constraints(&self) -> [(f64, f64, f64); 4] {
        let last = match self.shape {
            RegionShape::Outer { sum_cap } => (1.0, 1.0, sum_cap),
            RegionShape::Inner { .. } => (0.0, 1.0, self.r1_cap().unwrap_or(0.0)),
        };
        [
            (-1.0, 0.0, 0.0),
            (self.mu, -1.0, 0.0),
            (1.0, 0.0, self.r0_cap),
            last,
        ]
    }

    /// Vertices of the `(R0, R1)` face, lexicographically ascending.
    pub fn face(&self) -> Face {
        let cons = self.constraints();
        let scale = 1.0 + cons.iter().map(|c| libm::fabs(c.2)).fold(0.0, f64::max);
        let mut face = Face::default();
        for i in 0..cons.len() {
            for j in (i + 1)..cons.len() {
                let (a0, a1, ar) = cons[i];
                let (b0, b1, br) = cons[j];
                let det = a0 * b1 - a1 * b0;
                if libm::fabs(det) < 1e-300 {
                    continue;
                }
                let r0 = (ar * b1 - a1 * br) / det;
                let r1 = (a0 * br - ar * b0) / det;
                let feasible = cons
                    .iter()
                    .all(|&(c0, c1, rhs)| c0 * r0 + c1 * r1 <= rhs + FEASIBILITY_TOL * scale);
                if feasible {
                    face.push_unique(r0.max(0.0), r1.max(0.0), DEDUP_TOL * scale);
                }
            }
        }
        face.sort();
        face
    }

    /// Membership in this split's polytope, with absolute slack `tol`.
    pub fn contains_point(&self, pt: &RateTriple, tol: f64) -> bool {
        let face_ok = self
            .constraints()
            .iter()
            .all(|&(c0, c1, rhs)| c0 * pt.r0 + c1 * pt.r1 <= rhs + tol);
        face_ok && pt.r1 >= -tol && pt.r2 >= -tol && pt.r2 <= self.r2_cap + tol
    }
}

/// At most six candidate vertices survive pairwise intersection of four lines.
const FACE_CAPACITY: usize = 6;

/// Fixed-capacity vertex list of a polygon face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pts: [(f64, f64); FACE_CAPACITY],
    len: usize,
}

impl Default for Face {
    fn default() -> Self {
        Face {
            pts: [(0.0, 0.0); FACE_CAPACITY],
            len: 0,
        }
    }
}

impl Face {
    fn push_unique(&mut self, r0: f64, r1: f64, tol: f64) {
        let dup = self
            .points()
            .iter()
            .any(|&(x, y)| libm::fabs(x - r0) <= tol && libm::fabs(y - r1) <= tol);
        if !dup && self.len < FACE_CAPACITY {
            self.pts[self.len] = (r0, r1);
            self.len += 1;
        }
    }

    fn sort(&mut self) {
        self.pts[..self.len].sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.pts[..self.len]
    }
}

/// A weighted-sum optimum and where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupportResult {
    pub value: f64,
    pub maximizer: RateTriple,
    pub split: PowerSplit,
}

/// Points per axis of the `(alpha, beta)` sweep, plus the budget of the
/// coordinate-search refinement that follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitGrid {
    pub alpha_steps: usize,
    pub beta_steps: usize,
    pub refine_iters: usize,
}

impl Default for SplitGrid {
    fn default() -> Self {
        SplitGrid {
            alpha_steps: 101,
            beta_steps: 101,
            refine_iters: 60,
        }
    }
}

impl SplitGrid {
    pub fn new(
        alpha_steps: usize,
        beta_steps: usize,
        refine_iters: usize,
    ) -> Result<Self, RegionError> {
        let grid = SplitGrid {
            alpha_steps,
            beta_steps,
            refine_iters,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), RegionError> {
        if self.alpha_steps < 2 || self.beta_steps < 2 {
            return Err(RegionError::InvalidGrid);
        }
        Ok(())
    }

    pub fn alpha_at(&self, i: usize) -> f64 {
        i as f64 / (self.alpha_steps - 1) as f64
    }

    pub fn beta_at(&self, j: usize) -> f64 {
        j as f64 / (self.beta_steps - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.alpha_steps * self.beta_steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid nodes, row-major in alpha then beta.
    pub fn splits(&self) -> impl Iterator<Item = PowerSplit> + '_ {
        (0..self.alpha_steps).flat_map(move |i| {
            (0..self.beta_steps)
                .map(move |j| PowerSplit::clamped(self.alpha_at(i), self.beta_at(j)))
        })
    }
}

fn require_weak(ch: &ChannelParams) -> Result<(), RegionError> {
    if ch.weak_interference() {
        Ok(())
    } else {
        Err(RegionError::WeakInterferenceRequired { b: ch.b() })
    }
}

/// Numerator shared by the R0 cap and (with `beta·P1 -> P1`) the sum cap.
#[inline]
fn shared_numerator(ch: &ChannelParams, sp: &PowerSplit, primary_power: f64) -> f64 {
    let b = ch.b();
    let cross = coherent_term(sp.alpha(), sp.beta(), ch.p1(), ch.p2());
    primary_power + b * b * (1.0 - sp.alpha()) * ch.p2() + 2.0 * b * cross
}

/// Interference-plus-noise seen by the shared message at the primary receiver.
#[inline]
fn shared_denominator(ch: &ChannelParams, sp: &PowerSplit) -> f64 {
    1.0 + ch.b() * ch.b() * sp.alpha() * ch.p2()
}

#[inline]
fn r0_cap(ch: &ChannelParams, sp: &PowerSplit) -> f64 {
    let num = shared_numerator(ch, sp, sp.beta() * ch.p1());
    half_log2_1p(num.max(0.0) / shared_denominator(ch, sp))
}

#[inline]
fn r2_cap(ch: &ChannelParams, sp: &PowerSplit) -> f64 {
    half_log2_1p(sp.alpha() * ch.p2())
}

fn outer_unchecked(ch: &ChannelParams, sp: PowerSplit) -> RegionBounds {
    let sum_num = shared_numerator(ch, &sp, ch.p1());
    let sum_cap = half_log2_1p(sum_num.max(0.0) / shared_denominator(ch, &sp));
    RegionBounds::from_outer_caps(sp, ch.mu(), r0_cap(ch, &sp), sum_cap, r2_cap(ch, &sp))
}

/// Outer-bound caps for one split. Valid only under weak interference.
pub fn outer_bounds(ch: &ChannelParams, sp: PowerSplit) -> Result<RegionBounds, RegionError> {
    require_weak(ch)?;
    Ok(outer_unchecked(ch, sp))
}

/// Interference-plus-noise power while decoding the private message at the
/// primary receiver (the shared codewords and the cognitive signal are noise).
pub(crate) fn primary_private_denominator(ch: &ChannelParams, sp: &PowerSplit) -> f64 {
    let (a, b) = (sp.alpha(), sp.beta());
    let cross = coherent_term(a, b, ch.p1(), ch.p2());
    1.0 + b * ch.p1() + ch.b() * ch.b() * ch.p2() + 2.0 * ch.b() * cross
}

/// Same as [`primary_private_denominator`] but at the cognitive receiver.
pub(crate) fn cognitive_private_denominator(ch: &ChannelParams, sp: &PowerSplit) -> f64 {
    let (a, b) = (sp.alpha(), sp.beta());
    let cross = coherent_term(a, b, ch.p1(), ch.p2());
    1.0 + ch.a() * ch.a() * b * ch.p1() + ch.p2() + 2.0 * ch.a() * cross
}

/// Achievable caps of superposition plus dirty-paper coding at one split.
pub fn inner_bounds(ch: &ChannelParams, sp: PowerSplit) -> RegionBounds {
    let private = (1.0 - sp.beta()) * ch.p1();
    let legit = half_log2_1p(private / primary_private_denominator(ch, &sp));
    let cog = half_log2_1p(ch.a() * ch.a() * private / cognitive_private_denominator(ch, &sp));
    RegionBounds::from_inner_caps(sp, ch.mu(), r0_cap(ch, &sp), legit, cog, r2_cap(ch, &sp))
}

fn bounds_unchecked(ch: &ChannelParams, kind: BoundKind, sp: PowerSplit) -> RegionBounds {
    match kind {
        BoundKind::Outer => outer_unchecked(ch, sp),
        BoundKind::Inner => inner_bounds(ch, sp),
    }
}

/// Either kind, with the weak-interference gate applied to the outer bound.
pub fn bounds(
    ch: &ChannelParams,
    kind: BoundKind,
    sp: PowerSplit,
) -> Result<RegionBounds, RegionError> {
    match kind {
        BoundKind::Outer => outer_bounds(ch, sp),
        BoundKind::Inner => Ok(inner_bounds(ch, sp)),
    }
}

/// All vertices of the per-split polytope, deduplicated, lexicographically
/// ascending.
pub fn polytope_vertices(rb: &RegionBounds) -> Vec<RateTriple> {
    let r2_levels: &[f64] = if rb.r2_cap > DEDUP_TOL {
        &[0.0, rb.r2_cap]
    } else {
        &[0.0]
    };
    let mut out = Vec::with_capacity(2 * FACE_CAPACITY);
    for &(r0, r1) in rb.face().points() {
        for &r2 in r2_levels {
            out.push(RateTriple { r0, r1, r2 });
        }
    }
    out.sort_by(RateTriple::lex_cmp);
    out
}

#[inline]
fn tie_tol(value: f64) -> f64 {
    TIE_TOL * libm::fabs(value).max(1.0)
}

/// Best face vertex under `w`; ties go to the lexicographically largest point.
/// Since weights are nonnegative, `R2 = r2_cap` is always optimal.
fn support_on_face(face: &Face, r2_cap: f64, split: PowerSplit, w: &Weights) -> SupportResult {
    let r2_term = w.mu2() * r2_cap;
    let mut best: Option<(f64, f64, f64)> = None;
    for &(r0, r1) in face.points() {
        let value = w.mu0() * r0 + w.mu1() * r1 + r2_term;
        best = match best {
            None => Some((value, r0, r1)),
            Some((bv, b0, b1)) => {
                let tol = tie_tol(bv);
                let larger = (r0, r1) > (b0, b1);
                if value > bv + tol || (value >= bv - tol && larger) {
                    Some((value, r0, r1))
                } else {
                    Some((bv, b0, b1))
                }
            }
        };
    }
    let (value, r0, r1) = best.unwrap_or((r2_term, 0.0, 0.0));
    SupportResult {
        value,
        maximizer: RateTriple { r0, r1, r2: r2_cap },
        split,
    }
}

/// Support function of one per-split polytope.
pub fn support(rb: &RegionBounds, w: &Weights) -> SupportResult {
    support_on_face(&rb.face(), rb.r2_cap, rb.split, w)
}

#[derive(Debug, Clone, Copy)]
struct Member {
    bounds: RegionBounds,
    face: Face,
}

/// The per-split regions of one channel, tabulated on a [`SplitGrid`].
///
/// Tabulating once and querying many weight vectors is much cheaper than
/// calling [`union_support`] repeatedly: the caps do not depend on `w`.
#[derive(Debug, Clone)]
pub struct RegionTable {
    ch: ChannelParams,
    kind: BoundKind,
    grid: SplitGrid,
    members: Vec<Member>,
}

impl RegionTable {
    pub fn new(ch: &ChannelParams, kind: BoundKind, grid: SplitGrid) -> Result<Self, RegionError> {
        Self::with_executor(ch, kind, grid, &Serial)
    }

    pub fn with_executor<E: Executor>(
        ch: &ChannelParams,
        kind: BoundKind,
        grid: SplitGrid,
        exec: &E,
    ) -> Result<Self, RegionError> {
        grid.validate()?;
        if kind == BoundKind::Outer {
            require_weak(ch)?;
        }
        let ch = *ch;
        let rows = exec.map_indexed(grid.alpha_steps, |i| {
            let alpha = grid.alpha_at(i);
            (0..grid.beta_steps)
                .map(|j| {
                    let bounds =
                        bounds_unchecked(&ch, kind, PowerSplit::clamped(alpha, grid.beta_at(j)));
                    Member {
                        bounds,
                        face: bounds.face(),
                    }
                })
                .collect::<Vec<_>>()
        });
        let members = rows.into_iter().flatten().collect();
        Ok(RegionTable {
            ch,
            kind,
            grid,
            members,
        })
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.ch
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn grid(&self) -> &SplitGrid {
        &self.grid
    }

    /// Tabulated regions, row-major in alpha then beta.
    pub fn bounds(&self) -> impl Iterator<Item = &RegionBounds> {
        self.members.iter().map(|m| &m.bounds)
    }

    /// Support value at every node, in grid order.
    fn node_values(&self, w: &Weights) -> Vec<f64> {
        self.members
            .iter()
            .map(|m| piecewise_support(&m.bounds, w))
            .collect()
    }

    fn node_result(&self, index: usize, w: &Weights) -> SupportResult {
        let m = &self.members[index];
        support_on_face(&m.face, m.bounds.r2_cap, m.bounds.split, w)
    }

    /// Best grid node only, without refinement. Ties prefer larger beta,
    /// then larger alpha.
    pub fn grid_support(&self, w: &Weights) -> SupportResult {
        self.node_result(self.best_node(&self.node_values(w)), w)
    }

    /// Support of the convex hull of the union of all per-split regions:
    /// grid maximum followed by local refinement. The next best local maxima
    /// of the grid are refined too, since narrow basins near `beta = 0` and
    /// `alpha = 1` can hide between nodes.
    pub fn union_support(&self, w: &Weights) -> SupportResult {
        let values = self.node_values(w);
        let start = self.best_node(&values);
        let mut best = refine(
            &self.ch,
            self.kind,
            w,
            &self.grid,
            self.node_result(start, w),
        );
        for other in self.other_local_maxima(&values, start) {
            let cand = refine(
                &self.ch,
                self.kind,
                w,
                &self.grid,
                self.node_result(other, w),
            );
            if cand.value > best.value + tie_tol(best.value) {
                best = cand;
            }
        }
        best
    }

    /// Index of the best node. Ties prefer larger beta, then larger alpha.
    fn best_node(&self, values: &[f64]) -> usize {
        let key = |k: usize| {
            let sp = self.members[k].bounds.split;
            (sp.beta(), sp.alpha())
        };
        let mut best = 0;
        for k in 1..values.len() {
            let tol = tie_tol(values[best]);
            if values[k] > values[best] + tol
                || (values[k] >= values[best] - tol && key(k) > key(best))
            {
                best = k;
            }
        }
        best
    }

    /// The best [`EXTRA_STARTS`] grid-local maxima other than `skip`,
    /// best first; equal values keep grid order.
    fn other_local_maxima(&self, values: &[f64], skip: usize) -> Vec<usize> {
        let (na, nb) = (self.grid.alpha_steps, self.grid.beta_steps);
        let mut top: Vec<usize> = Vec::with_capacity(EXTRA_STARTS + 1);
        for i in 0..na {
            for j in 0..nb {
                let k = i * nb + j;
                let v = values[k];
                if k == skip || (top.len() == EXTRA_STARTS && v <= values[top[EXTRA_STARTS - 1]]) {
                    continue;
                }
                let is_max = (i.saturating_sub(1)..(i + 2).min(na)).all(|p| {
                    (j.saturating_sub(1)..(j + 2).min(nb)).all(|q| values[p * nb + q] <= v)
                });
                if is_max {
                    let at = top.iter().position(|&t| values[t] < v).unwrap_or(top.len());
                    top.insert(at, k);
                    top.truncate(EXTRA_STARTS);
                }
            }
        }
        top
    }
}

/// Extra refinement starts drawn from the other grid-local maxima.
const EXTRA_STARTS: usize = 2;

fn refine(
    ch: &ChannelParams,
    kind: BoundKind,
    w: &Weights,
    grid: &SplitGrid,
    start: SupportResult,
) -> SupportResult {
    let eval = |alpha: f64, beta: f64| {
        support(
            &bounds_unchecked(ch, kind, PowerSplit::clamped(alpha, beta)),
            w,
        )
    };
    let mut cur = start;
    let mut step_a = 1.0 / (grid.alpha_steps - 1) as f64;
    let mut step_b = 1.0 / (grid.beta_steps - 1) as f64;
    for _ in 0..grid.refine_iters {
        let (a, b) = (cur.split.alpha(), cur.split.beta());
        let moves = [
            (a + step_a, b),
            (a - step_a, b),
            (a, b + step_b),
            (a, b - step_b),
        ];
        let mut best_move: Option<SupportResult> = None;
        for (na, nb) in moves {
            let (na, nb) = (na.clamp(0.0, 1.0), nb.clamp(0.0, 1.0));
            if na == a && nb == b {
                continue;
            }
            let cand = eval(na, nb);
            if cand.value
                > best_move.map_or(cur.value, |m| m.value) + f64::EPSILON * cur.value.abs()
            {
                best_move = Some(cand);
            }
        }
        match best_move {
            Some(m) => {
                let gain = m.value - cur.value;
                cur = m;
                if gain < REFINE_TOLERANCE {
                    break;
                }
            }
            None => {
                step_a *= 0.5;
                step_b *= 0.5;
                if step_a.max(step_b) < 1e-12 {
                    break;
                }
            }
        }
    }
    polish(ch, kind, w, cur)
}

/// Most smooth pieces in [`pieces`].
const MAX_PIECES: usize = 4;
const POLISH_ITERS: usize = 120;
const POLISH_RADIUS: f64 = 0.05;
const FD_STEP: f64 = 1e-7;

/// The per-split support written as the minimum of smooth functions of the
/// caps. Only pieces that can bind are listed.
///
/// Outer: `mu2·C + mu1·B + (mu0 - mu1)⁺·min(A, B/(1+mu))`.
/// Inner: `mu2·C + mu1·D + mu0·min(A, D/mu)` with `D = min(L, G)`.
fn pieces(rb: &RegionBounds, w: &Weights) -> ([f64; MAX_PIECES], usize) {
    let (w0, w1) = (w.mu0(), w.mu1());
    let base = w.mu2() * rb.r2_cap;
    let mut out = [0.0; MAX_PIECES];
    let n = match rb.shape {
        RegionShape::Outer { sum_cap } => {
            let common = base + w1 * sum_cap;
            if w0 > w1 {
                out[0] = common + (w0 - w1) * rb.r0_cap;
                out[1] = common + (w0 - w1) * sum_cap / (1.0 + rb.mu);
                2
            } else {
                out[0] = common;
                1
            }
        }
        RegionShape::Inner {
            r1_cap_legitimate,
            r1_cap_cognitive,
        } => {
            for (k, d) in [r1_cap_legitimate, r1_cap_cognitive]
                .into_iter()
                .enumerate()
            {
                out[2 * k] = base + w1 * d + w0 * rb.r0_cap;
                out[2 * k + 1] = base + w1 * d + w0 * d / rb.mu;
            }
            4
        }
    };
    (out, n)
}

/// Support value from the closed form in [`pieces`]; agrees with the vertex
/// enumeration in [`support`].
#[inline]
fn piecewise_support(rb: &RegionBounds, w: &Weights) -> f64 {
    let (g, n) = pieces(rb, w);
    g[..n].iter().copied().fold(f64::INFINITY, f64::min)
}

/// Split from the smoothing coordinates `t = sqrt(1 - alpha)`, `s = sqrt(beta)`,
/// in which every cap is smooth up to the square's edges.
fn warped_split(t: f64, s: f64) -> PowerSplit {
    PowerSplit::clamped(1.0 - t * t, s * s)
}

/// Maximizes `min_k (g[k] + grad[k]·d)` over the box `lo <= d <= hi`.
///
/// The model is concave and piecewise linear, so its maximum is at a box
/// corner, where a break line meets a box edge, or where two break lines
/// cross. All such candidates are enumerated.
fn solve_model(g: &[f64], grad: &[[f64; 2]], lo: [f64; 2], hi: [f64; 2]) -> ([f64; 2], f64) {
    let model = |d: [f64; 2]| {
        g.iter()
            .zip(grad)
            .map(|(gk, dk)| gk + dk[0] * d[0] + dk[1] * d[1])
            .fold(f64::INFINITY, f64::min)
    };
    let inside = |d: [f64; 2]| {
        let slack = 1e-12 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
        d[0] >= lo[0] - slack
            && d[0] <= hi[0] + slack
            && d[1] >= lo[1] - slack
            && d[1] <= hi[1] + slack
    };
    // break lines: l0·d0 + l1·d1 = rhs where pieces i and j are equal
    let mut lines: [(f64, f64, f64); 6] = [(0.0, 0.0, 0.0); 6];
    let mut n_lines = 0;
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            lines[n_lines] = (
                grad[i][0] - grad[j][0],
                grad[i][1] - grad[j][1],
                g[j] - g[i],
            );
            n_lines += 1;
        }
    }
    let lines = &lines[..n_lines];

    let mut best = ([0.0, 0.0], f64::NEG_INFINITY);
    let mut consider = |d: [f64; 2]| {
        if inside(d) {
            let d = [d[0].clamp(lo[0], hi[0]), d[1].clamp(lo[1], hi[1])];
            let v = model(d);
            if v > best.1 {
                best = (d, v);
            }
        }
    };
    for d0 in [lo[0], hi[0]] {
        for d1 in [lo[1], hi[1]] {
            consider([d0, d1]);
        }
    }
    for &(l0, l1, rhs) in lines {
        for d0 in [lo[0], hi[0]] {
            if libm::fabs(l1) > 1e-300 {
                consider([d0, (rhs - l0 * d0) / l1]);
            }
        }
        for d1 in [lo[1], hi[1]] {
            if libm::fabs(l0) > 1e-300 {
                consider([(rhs - l1 * d1) / l0, d1]);
            }
        }
    }
    for (i, &(a0, a1, ar)) in lines.iter().enumerate() {
        for &(b0, b1, br) in &lines[i + 1..] {
            let det = a0 * b1 - a1 * b0;
            if libm::fabs(det) > 1e-300 {
                consider([(ar * b1 - a1 * br) / det, (a0 * br - ar * b0) / det]);
            }
        }
    }
    best
}

/// Trust-region ascent on the piecewise-smooth support, linearizing each
/// piece. Follows ridges where pieces cross, which coordinate moves cannot.
fn polish(ch: &ChannelParams, kind: BoundKind, w: &Weights, start: SupportResult) -> SupportResult {
    let eval = |t: f64, s: f64| {
        let (g, n) = pieces(&bounds_unchecked(ch, kind, warped_split(t, s)), w);
        (g, n)
    };
    let value = |g: &[f64]| g.iter().copied().fold(f64::INFINITY, f64::min);

    let mut x = [
        sqrt((1.0 - start.split.alpha()).max(0.0)),
        sqrt(start.split.beta()),
    ];
    let (mut gx, n) = eval(x[0], x[1]);
    let mut fx = value(&gx[..n]);
    let mut radius = POLISH_RADIUS;
    for _ in 0..POLISH_ITERS {
        let mut grad = [[0.0; 2]; MAX_PIECES];
        for axis in 0..2 {
            let h = if x[axis] + FD_STEP <= 1.0 {
                FD_STEP
            } else {
                -FD_STEP
            };
            let mut y = x;
            y[axis] += h;
            let (gy, _) = eval(y[0], y[1]);
            for k in 0..n {
                grad[k][axis] = (gy[k] - gx[k]) / h;
            }
        }
        let lo = [(-radius).max(-x[0]), (-radius).max(-x[1])];
        let hi = [radius.min(1.0 - x[0]), radius.min(1.0 - x[1])];
        let (d, predicted) = solve_model(&gx[..n], &grad[..n], lo, hi);
        let gain_floor = 1e-15 * fx.abs().max(1.0);
        if predicted - fx > gain_floor {
            let y = [(x[0] + d[0]).clamp(0.0, 1.0), (x[1] + d[1]).clamp(0.0, 1.0)];
            let (gy, _) = eval(y[0], y[1]);
            let fy = value(&gy[..n]);
            if fy > fx {
                let ratio = (fy - fx) / (predicted - fx);
                x = y;
                gx = gy;
                fx = fy;
                if ratio > 0.75 {
                    radius = (2.0 * radius).min(POLISH_RADIUS);
                } else if ratio < 0.25 {
                    radius *= 0.5;
                }
                continue;
            }
        }
        radius *= 0.5;
        if radius < 1e-11 {
            break;
        }
    }
    let polished = support(&bounds_unchecked(ch, kind, warped_split(x[0], x[1])), w);
    if polished.value > start.value {
        polished
    } else {
        start
    }
}

/// Support of the hull of the union over the split square.
pub fn union_support(
    ch: &ChannelParams,
    w: &Weights,
    kind: BoundKind,
    grid: SplitGrid,
) -> Result<SupportResult, RegionError> {
    Ok(RegionTable::new(ch, kind, grid)?.union_support(w))
}

/// `n` unit directions in the nonnegative octant: the three axes followed by
/// a Fibonacci spiral.
pub fn octant_directions(n: usize) -> Vec<[f64; 3]> {
    let golden = 0.5 * (sqrt(5.0) - 1.0);
    let mut dirs = Vec::with_capacity(n);
    for axis in 0..3.min(n) {
        let mut d = [0.0; 3];
        d[axis] = 1.0;
        dirs.push(d);
    }
    let spiral = n.saturating_sub(3);
    for i in 0..spiral {
        let z = 1.0 - (i as f64 + 0.5) / spiral as f64;
        let rho = sqrt((1.0 - z * z).max(0.0));
        let frac = {
            let t = i as f64 * golden;
            t - libm::floor(t)
        };
        let phi = frac * core::f64::consts::FRAC_PI_2;
        dirs.push([rho * libm::cos(phi), rho * libm::sin(phi), z]);
    }
    dirs
}

/// Approximate membership in the hull-of-union region on the default grid.
///
/// One-sided: `false` is a certificate (some direction separates `pt`),
/// `true` holds up to the resolution of the direction sample.
pub fn contains(
    ch: &ChannelParams,
    pt: &RateTriple,
    kind: BoundKind,
    directions: usize,
) -> Result<bool, RegionError> {
    contains_on_grid(ch, pt, kind, directions, SplitGrid::default())
}

pub fn contains_on_grid(
    ch: &ChannelParams,
    pt: &RateTriple,
    kind: BoundKind,
    directions: usize,
    grid: SplitGrid,
) -> Result<bool, RegionError> {
    if directions < 16 {
        return Err(RegionError::TooFewDirections {
            requested: directions,
        });
    }
    let table = RegionTable::new(ch, kind, grid)?;
    Ok(table_contains(&table, pt, directions))
}

pub fn table_contains(table: &RegionTable, pt: &RateTriple, directions: usize) -> bool {
    octant_directions(directions).into_iter().all(|d| {
        let Ok(w) = Weights::new(d[0], d[1], d[2]) else {
            return true;
        };
        w.dot(pt) <= table.union_support(&w).value + CONTAINS_TOLERANCE
    })
}

/// Every vertex of every grid region, tagged with its split. Row-major in
/// alpha then beta; vertices within a split are lexicographically ascending.
pub fn boundary_sample(
    ch: &ChannelParams,
    kind: BoundKind,
    grid: SplitGrid,
) -> Result<Vec<(PowerSplit, RateTriple)>, RegionError> {
    boundary_sample_with(ch, kind, grid, &Serial)
}

pub fn boundary_sample_with<E: Executor>(
    ch: &ChannelParams,
    kind: BoundKind,
    grid: SplitGrid,
    exec: &E,
) -> Result<Vec<(PowerSplit, RateTriple)>, RegionError> {
    let table = RegionTable::with_executor(ch, kind, grid, exec)?;
    Ok(table
        .bounds()
        .flat_map(|rb| {
            polytope_vertices(rb)
                .into_iter()
                .map(move |v| (rb.split, v))
        })
        .collect())
}
