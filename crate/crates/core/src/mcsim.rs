//! Monte Carlo check of the Gaussian signalling behind the achievable region.
//!
//! Each channel use draws the codeword symbols of the superposition /
//! dirty-paper scheme:
//!
//! ```text
//! X10 ~ N(0, beta P1)     shared message at the primary transmitter
//! X11 ~ N(0, (1-beta) P1) private message
//! X20 = sqrt((1-alpha) P2 / (beta P1)) X10   shared message relayed
//! X22 ~ N(0, alpha P2)    cognitive message, independent of a X10 + X20
//! ```
//!
//! and accumulates the second moments every rate formula depends on. Dirty
//! paper coding itself is represented by its statistical signature only.
//!
//! Draws come from ChaCha8 keyed by the seed, one stream per fixed-size chunk
//! of samples, so every draw is a pure function of `(seed, sample index)` and
//! parallel runs are bit-identical to serial ones.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::exec::{Executor, Serial};
use crate::math::sqrt;
use crate::model::{ChannelParams, PowerSplit};

/// Samples per RNG stream. Fixing this fixes the partition plan.
pub const CHUNK_SAMPLES: u64 = 1 << 16;

/// Relative error floor for interference-plus-noise checks.
pub const SINR_REL_FLOOR: f64 = 0.01;
/// Relative error floor for the residual-variance check.
pub const RESIDUAL_REL_FLOOR: f64 = 0.005;
/// Standard errors allowed by the variance checks.
pub const VARIANCE_SE_MULTIPLE: f64 = 4.0;
/// Standard errors allowed between the correlation and its bound.
pub const CORRELATION_SE_MULTIPLE: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    InvalidSamples,
    /// A verification step failed; carries the stage name.
    StatsMismatch {
        stage: String,
    },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::InvalidSamples => f.write_str("simulation needs at least one sample"),
            SimError::StatsMismatch { stage } => {
                write!(f, "empirical statistics disagree at stage `{stage}`")
            }
        }
    }
}

impl core::error::Error for SimError {}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub ch: ChannelParams,
    pub sp: PowerSplit,
    pub samples: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(
        ch: ChannelParams,
        sp: PowerSplit,
        samples: u64,
        seed: u64,
    ) -> Result<Self, SimError> {
        if samples == 0 {
            return Err(SimError::InvalidSamples);
        }
        Ok(SimConfig {
            ch,
            sp,
            samples,
            seed,
        })
    }
}

/// A sample moment and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

/// Second moments about zero (all signals are zero-mean by construction).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimStats {
    pub samples: u64,
    pub var_x1: Estimate,
    pub var_x2: Estimate,
    pub var_y1: Estimate,
    pub var_y2: Estimate,
    /// `E[X1·X2]`.
    pub cross_x1_x2: Estimate,
    /// `Var(Y1 - X1 - b·X20)`, i.e. of `b·X22 + Z1`.
    pub residual_rx1: Estimate,
    /// Primary receiver decoding W1: everything but `X11` is noise.
    pub stage_rx1_w1: Estimate,
    /// Primary receiver decoding W0 after cancelling `X11`.
    pub stage_rx1_w0: Estimate,
    /// Cognitive receiver decoding W1.
    pub stage_rx2_w1: Estimate,
    /// Cognitive receiver decoding W2 after dirty-paper decoding.
    pub stage_rx2_w2: Estimate,
    /// `E[X22·(a·X10 + X20)]`, zero for a dirty-paper codeword.
    pub dpc_cross: Estimate,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }

    fn merge(&mut self, other: &Sum) {
        self.add(other.sum);
        self.add(other.comp);
    }
}

const N_MOMENTS: usize = 13;

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sums: [Sum; N_MOMENTS],
}

// moment slots
const X1X1: usize = 0;
const X2X2: usize = 1;
const Y1Y1: usize = 2;
const Y2Y2: usize = 3;
const X1X2: usize = 4;
const RES: usize = 5;
const RX1W1: usize = 6;
const RX1W0: usize = 7;
const RX2W1: usize = 8;
const RX2W2: usize = 9;
const X22INTF: usize = 10;
const X22X22: usize = 11;
const INTF: usize = 12;

impl Moments {
    fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        for (s, o) in self.sums.iter_mut().zip(other.sums.iter()) {
            s.merge(o);
        }
    }

    fn mean(&self, slot: usize) -> f64 {
        self.sums[slot].value() / self.n as f64
    }
}

/// Uniform on `(0, 1]`.
#[inline]
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Two independent standard normals (Box-Muller).
#[inline]
fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let r = sqrt(-2.0 * libm::log(open_unit(rng)));
    let theta = core::f64::consts::TAU * open_unit(rng);
    let (s, c) = libm::sincos(theta);
    (r * c, r * s)
}

struct Gains {
    a: f64,
    b: f64,
    sd_x10: f64,
    sd_x11: f64,
    sd_x22: f64,
    sd_x20: f64,
    /// `Some(scale)` when `X20 = scale·X10`; `None` draws `X20` independently.
    relay_scale: Option<f64>,
}

impl Gains {
    fn new(ch: &ChannelParams, sp: &PowerSplit) -> Self {
        let (alpha, beta) = (sp.alpha(), sp.beta());
        let shared = beta * ch.p1();
        let relay_power = (1.0 - alpha) * ch.p2();
        Gains {
            a: ch.a(),
            b: ch.b(),
            sd_x10: sqrt(shared),
            sd_x11: sqrt((1.0 - beta) * ch.p1()),
            sd_x22: sqrt(alpha * ch.p2()),
            sd_x20: sqrt(relay_power),
            // beta·P1 = 0 leaves nothing to scale; an independent codeword of
            // the same power has the same second-order statistics
            relay_scale: (shared > 0.0).then(|| sqrt(relay_power / shared)),
        }
    }
}

fn simulate_chunk(cfg: &SimConfig, gains: &Gains, chunk: u64) -> Moments {
    let start = chunk * CHUNK_SAMPLES;
    let len = CHUNK_SAMPLES.min(cfg.samples - start);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk);
    let mut m = Moments {
        n: len,
        ..Moments::default()
    };
    let g = gains;
    for _ in 0..len {
        let (g0, g1) = normal_pair(&mut rng);
        let (g2, g3) = normal_pair(&mut rng);
        let (g4, g5) = normal_pair(&mut rng);
        let x10 = g.sd_x10 * g0;
        let x11 = g.sd_x11 * g1;
        let x22 = g.sd_x22 * g2;
        let (z1, z2) = (g3, g4);
        let x20 = match g.relay_scale {
            Some(scale) => scale * x10,
            None => g.sd_x20 * g5,
        };
        let x1 = x10 + x11;
        let x2 = x20 + x22;
        let y1 = x1 + g.b * x2 + z1;
        let y2 = g.a * x1 + x2 + z2;
        let residual = y1 - x1 - g.b * x20;
        let rx1_w1 = y1 - x11;
        let rx1_w0 = rx1_w1 - x10 - g.b * x20;
        let rx2_w1 = y2 - g.a * x11;
        let intf = g.a * x10 + x20;
        let rx2_w2 = rx2_w1 - intf - x22;

        let s = &mut m.sums;
        s[X1X1].add(x1 * x1);
        s[X2X2].add(x2 * x2);
        s[Y1Y1].add(y1 * y1);
        s[Y2Y2].add(y2 * y2);
        s[X1X2].add(x1 * x2);
        s[RES].add(residual * residual);
        s[RX1W1].add(rx1_w1 * rx1_w1);
        s[RX1W0].add(rx1_w0 * rx1_w0);
        s[RX2W1].add(rx2_w1 * rx2_w1);
        s[RX2W2].add(rx2_w2 * rx2_w2);
        s[X22INTF].add(x22 * intf);
        s[X22X22].add(x22 * x22);
        s[INTF].add(intf * intf);
    }
    m
}

/// Gaussian fourth-moment standard error of a second moment.
fn variance_estimate(m: &Moments, slot: usize) -> Estimate {
    let value = m.mean(slot);
    Estimate {
        value,
        std_err: value * sqrt(2.0 / m.n as f64),
    }
}

/// Standard error of `E[UV]` for jointly Gaussian zero-mean `U, V`.
fn cross_estimate(m: &Moments, slot: usize, uu: usize, vv: usize) -> Estimate {
    let value = m.mean(slot);
    let var = m.mean(uu) * m.mean(vv) + value * value;
    Estimate {
        value,
        std_err: sqrt(var / m.n as f64),
    }
}

pub fn simulate_signals(cfg: &SimConfig) -> SimStats {
    simulate_signals_with(cfg, &Serial)
}

pub fn simulate_signals_with<E: Executor>(cfg: &SimConfig, exec: &E) -> SimStats {
    let gains = Gains::new(&cfg.ch, &cfg.sp);
    let chunks = cfg.samples.div_ceil(CHUNK_SAMPLES);
    let parts = exec.map_indexed(chunks as usize, |c| simulate_chunk(cfg, &gains, c as u64));
    let mut m = Moments::default();
    for part in &parts {
        m.merge(part);
    }
    SimStats {
        samples: cfg.samples,
        var_x1: variance_estimate(&m, X1X1),
        var_x2: variance_estimate(&m, X2X2),
        var_y1: variance_estimate(&m, Y1Y1),
        var_y2: variance_estimate(&m, Y2Y2),
        cross_x1_x2: cross_estimate(&m, X1X2, X1X1, X2X2),
        residual_rx1: variance_estimate(&m, RES),
        stage_rx1_w1: variance_estimate(&m, RX1W1),
        stage_rx1_w0: variance_estimate(&m, RX1W0),
        stage_rx2_w1: variance_estimate(&m, RX2W1),
        stage_rx2_w2: variance_estimate(&m, RX2W2),
        dpc_cross: cross_estimate(&m, X22INTF, X22X22, INTF),
    }
}

/// Signal and interference-plus-noise powers of each decoding stage, derived
/// from the signal model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StagePowers {
    pub signal: f64,
    pub noise: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalyticStages {
    pub rx1_w1: StagePowers,
    pub rx1_w0: StagePowers,
    pub rx2_w1: StagePowers,
    pub rx2_w2: StagePowers,
    /// `E[X1·X2] = E[X10·X20]`.
    pub cross_x1_x2: f64,
}

impl AnalyticStages {
    pub fn new(ch: &ChannelParams, sp: &PowerSplit) -> Self {
        let (a, b, p1, p2) = (ch.a(), ch.b(), ch.p1(), ch.p2());
        let (alpha, beta) = (sp.alpha(), sp.beta());
        let x10 = beta * p1;
        let x11 = (1.0 - beta) * p1;
        let x20 = (1.0 - alpha) * p2;
        let x22 = alpha * p2;
        let c = sqrt(x10 * x20);
        // Rx1 after cancelling X11 sees X10 + b·X20 as signal
        let shared_at_rx1 = x10 + b * b * x20 + 2.0 * b * c;
        let dpc_noise = 1.0 + b * b * x22;
        AnalyticStages {
            rx1_w1: StagePowers {
                signal: x11,
                noise: shared_at_rx1 + dpc_noise,
            },
            rx1_w0: StagePowers {
                signal: shared_at_rx1,
                noise: dpc_noise,
            },
            rx2_w1: StagePowers {
                signal: a * a * x11,
                noise: 1.0 + a * a * x10 + x20 + x22 + 2.0 * a * c,
            },
            rx2_w2: StagePowers {
                signal: x22,
                noise: 1.0,
            },
            cross_x1_x2: c,
        }
    }

    /// Upper bound on `Var(Y1)` used by the entropy chain of the converse.
    pub fn y1_power_bound(ch: &ChannelParams, sp: &PowerSplit) -> f64 {
        let b = ch.b();
        1.0 + ch.p1()
            + b * b * ch.p2()
            + 2.0 * b * sqrt(sp.beta() * (1.0 - sp.alpha()) * ch.p1() * ch.p2())
    }
}

/// One comparison between an empirical statistic and its analytic value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub stage: String,
    pub empirical: f64,
    pub analytic: f64,
    pub std_err: f64,
    /// Largest accepted `|empirical - analytic|`.
    pub allowed: f64,
    pub passed: bool,
}

impl Check {
    fn relative(stage: &str, est: Estimate, analytic: f64, rel_floor: f64) -> Self {
        let allowed = (rel_floor * analytic.abs()).max(VARIANCE_SE_MULTIPLE * est.std_err);
        Check {
            stage: stage.to_string(),
            empirical: est.value,
            analytic,
            std_err: est.std_err,
            allowed,
            passed: (est.value - analytic).abs() <= allowed,
        }
    }

    fn within_se(stage: &str, est: Estimate, analytic: f64, multiple: f64) -> Self {
        let allowed = multiple * est.std_err;
        Check {
            stage: stage.to_string(),
            empirical: est.value,
            analytic,
            std_err: est.std_err,
            allowed,
            passed: (est.value - analytic).abs() <= allowed,
        }
    }

    fn upper_bound(stage: &str, est: Estimate, bound: f64, slack: f64) -> Self {
        Check {
            stage: stage.to_string(),
            empirical: est.value,
            analytic: bound,
            std_err: est.std_err,
            allowed: slack,
            passed: est.value <= bound + slack,
        }
    }

    pub fn relative_error(&self) -> f64 {
        if self.analytic == 0.0 {
            (self.empirical - self.analytic).abs()
        } else {
            ((self.empirical - self.analytic) / self.analytic).abs()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, stage: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.stage == stage)
    }

    /// `Err(StatsMismatch)` naming the first failing stage.
    pub fn ensure(&self) -> Result<(), SimError> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(SimError::StatsMismatch {
                stage: c.stage.clone(),
            }),
            None => Ok(()),
        }
    }
}

/// Interference-plus-noise power of every decoding stage.
pub fn verify_sinr(st: &SimStats, ch: &ChannelParams, sp: &PowerSplit) -> VerificationReport {
    let an = AnalyticStages::new(ch, sp);
    VerificationReport {
        checks: alloc::vec![
            Check::relative("rx1_w1", st.stage_rx1_w1, an.rx1_w1.noise, SINR_REL_FLOOR),
            Check::relative("rx1_w0", st.stage_rx1_w0, an.rx1_w0.noise, SINR_REL_FLOOR),
            Check::relative("rx2_w1", st.stage_rx2_w1, an.rx2_w1.noise, SINR_REL_FLOOR),
            Check::relative("rx2_w2", st.stage_rx2_w2, an.rx2_w2.noise, SINR_REL_FLOOR),
            Check::within_se("dpc_independence", st.dpc_cross, 0.0, VARIANCE_SE_MULTIPLE),
        ],
    }
}

/// The residual `Y1 - X1 - b·X20 = b·X22 + Z1` has variance `1 + b²·alpha·P2`,
/// the value at which the entropy power inequality step is tight.
pub fn verify_epi_residual(
    st: &SimStats,
    ch: &ChannelParams,
    sp: &PowerSplit,
) -> VerificationReport {
    let analytic = 1.0 + ch.b() * ch.b() * sp.alpha() * ch.p2();
    VerificationReport {
        checks: alloc::vec![Check::relative(
            "epi_residual",
            st.residual_rx1,
            analytic,
            RESIDUAL_REL_FLOOR
        )],
    }
}

/// `E[X1·X2] <= sqrt(beta P1)·sqrt((1-alpha) P2)` with equality for this
/// scheme, and the matching bound on `Var(Y1)`.
pub fn verify_cross_correlation(
    st: &SimStats,
    ch: &ChannelParams,
    sp: &PowerSplit,
) -> VerificationReport {
    let bound = sqrt(sp.beta() * ch.p1()) * sqrt((1.0 - sp.alpha()) * ch.p2());
    let y1_bound = AnalyticStages::y1_power_bound(ch, sp);
    let y1_slack = (RESIDUAL_REL_FLOOR * y1_bound).max(VARIANCE_SE_MULTIPLE * st.var_y1.std_err);
    VerificationReport {
        checks: alloc::vec![
            Check::upper_bound(
                "cross_bound",
                st.cross_x1_x2,
                bound,
                VARIANCE_SE_MULTIPLE * st.cross_x1_x2.std_err
            ),
            Check::within_se(
                "cross_equality",
                st.cross_x1_x2,
                bound,
                CORRELATION_SE_MULTIPLE
            ),
            Check::upper_bound("y1_power_bound", st.var_y1, y1_bound, y1_slack),
        ],
    }
}

/// All three verifiers, concatenated.
pub fn verify_all(st: &SimStats, ch: &ChannelParams, sp: &PowerSplit) -> VerificationReport {
    let mut checks: Vec<Check> = Vec::new();
    checks.extend(verify_sinr(st, ch, sp).checks);
    checks.extend(verify_epi_residual(st, ch, sp).checks);
    checks.extend(verify_cross_correlation(st, ch, sp).checks);
    VerificationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::half_log2_1p;
    use crate::regions;

    fn example() -> ChannelParams {
        ChannelParams::new(2.0, 0.5, 6.0, 6.0, 0.5).unwrap()
    }

    fn cfg(ch: ChannelParams, alpha: f64, beta: f64, samples: u64) -> SimConfig {
        SimConfig::new(ch, PowerSplit::new(alpha, beta).unwrap(), samples, 42).unwrap()
    }

    fn within(est: Estimate, target: f64, k: f64) -> bool {
        (est.value - target).abs() <= k * est.std_err
    }

    #[test]
    fn zero_samples_rejected() {
        let sp = PowerSplit::new(0.5, 0.5).unwrap();
        assert_eq!(
            SimConfig::new(example(), sp, 0, 1),
            Err(SimError::InvalidSamples)
        );
    }

    #[test]
    fn full_alpha_has_no_correlation() {
        let c = cfg(example(), 1.0, 0.5, 200_000);
        let st = simulate_signals(&c);
        assert!(within(st.var_x2, 6.0, 4.0), "{:?}", st.var_x2);
        assert!(within(st.cross_x1_x2, 0.0, 3.0), "{:?}", st.cross_x1_x2);
        assert!(verify_all(&st, &c.ch, &c.sp).passed());
    }

    #[test]
    fn seeded_runs_are_identical() {
        let c = cfg(example(), 0.3, 0.7, 150_000);
        assert_eq!(simulate_signals(&c), simulate_signals(&c));
        let other = SimConfig { seed: 43, ..c };
        assert_ne!(simulate_signals(&c), simulate_signals(&other));
    }

    #[test]
    fn analytic_stages_examples() {
        let an = AnalyticStages::new(&example(), &PowerSplit::new(0.5, 0.5).unwrap());
        assert_eq!(an.rx1_w1.noise, 8.5);
        assert_eq!(an.rx2_w1.noise, 31.0);
        assert_eq!(an.rx1_w0.noise, 1.75);
        assert_eq!(an.rx2_w2.noise, 1.0);
        assert_eq!(an.cross_x1_x2, 3.0);

        let no_b = example().with_gains(2.0, 0.0).unwrap();
        let an = AnalyticStages::new(&no_b, &PowerSplit::new(0.5, 0.5).unwrap());
        assert_eq!(an.rx1_w1.noise, 1.0 + 3.0);

        let silent = ChannelParams::new(2.0, 0.5, 0.0, 0.0, 0.5).unwrap();
        let an = AnalyticStages::new(&silent, &PowerSplit::new(0.5, 0.5).unwrap());
        for s in [an.rx1_w1, an.rx1_w0, an.rx2_w1, an.rx2_w2] {
            assert_eq!(s.noise, 1.0);
        }
    }

    #[test]
    fn residual_analytic_values() {
        let st = simulate_signals(&cfg(example(), 0.5, 0.2, 100_000));
        let rep = verify_epi_residual(&st, &example(), &PowerSplit::new(0.5, 0.2).unwrap());
        assert_eq!(rep.checks[0].analytic, 1.75);
        let rep = verify_epi_residual(&st, &example(), &PowerSplit::new(0.0, 0.2).unwrap());
        assert_eq!(rep.checks[0].analytic, 1.0);
    }

    #[test]
    fn zero_beta_uses_independent_relay() {
        let c = cfg(example(), 0.4, 0.0, 200_000);
        let st = simulate_signals(&c);
        assert!(within(st.cross_x1_x2, 0.0, 3.0));
        assert!(within(st.var_x2, 6.0, 4.0));
        let rep = verify_all(&st, &c.ch, &c.sp);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn pure_noise_channel() {
        let silent = ChannelParams::new(2.0, 0.5, 0.0, 0.0, 0.5).unwrap();
        let c = cfg(silent, 0.5, 0.5, 100_000);
        let st = simulate_signals(&c);
        assert_eq!(st.var_x1.value, 0.0);
        assert!(verify_sinr(&st, &c.ch, &c.sp).passed());
    }

    #[test]
    fn mismatch_names_the_stage() {
        let c = cfg(example(), 0.5, 0.5, 50_000);
        let st = simulate_signals(&c);
        // verify against a different channel: the Rx1 stages no longer match
        let wrong = example().with_gains(2.0, 0.9).unwrap();
        let rep = verify_sinr(&st, &wrong, &c.sp);
        assert!(!rep.passed());
        assert_eq!(
            rep.ensure(),
            Err(SimError::StatsMismatch {
                stage: "rx1_w1".into()
            })
        );
    }

    #[test]
    fn standard_error_scales_with_root_samples() {
        let small = simulate_signals(&cfg(example(), 0.5, 0.5, 10_000));
        let large = simulate_signals(&cfg(example(), 0.5, 0.5, 1_000_000));
        let ratio = small.stage_rx1_w1.std_err / large.stage_rx1_w1.std_err;
        assert!((5.0..=20.0).contains(&ratio), "{ratio}");
        assert!(large.var_y1.std_err > 0.0);
    }

    #[test]
    fn stage_rates_match_inner_caps() {
        let ch = example();
        for (alpha, beta) in [(0.5, 0.5), (0.0, 0.3), (1.0, 0.0), (0.25, 1.0), (0.9, 0.1)] {
            let sp = PowerSplit::new(alpha, beta).unwrap();
            let an = AnalyticStages::new(&ch, &sp);
            let rb = regions::inner_bounds(&ch, sp);
            let regions::RegionShape::Inner {
                r1_cap_legitimate,
                r1_cap_cognitive,
            } = rb.shape
            else {
                unreachable!()
            };
            let rate = |s: StagePowers| half_log2_1p(s.signal / s.noise);
            assert!((rate(an.rx1_w1) - r1_cap_legitimate).abs() <= 1e-12);
            assert!((rate(an.rx1_w0) - rb.r0_cap).abs() <= 1e-12);
            assert!((rate(an.rx2_w1) - r1_cap_cognitive).abs() <= 1e-12);
            assert!((rate(an.rx2_w2) - rb.r2_cap).abs() <= 1e-12);
        }
    }
}
