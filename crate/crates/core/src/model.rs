//! Channel, power-split, weight and rate types shared by the other modules.
//!
//! The channel is
//!
//! ```text
//! Y1 = X1 + b·X2 + Z1
//! Y2 = a·X1 + X2 + Z2
//! ```
//!
//! with unit-variance noises. All rates are in bits per channel use.

use core::fmt;

/// Additive slack used by [`ratio_constraint_satisfied`].
pub const RATIO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelError {
    /// `p1 < 0` or `p2 < 0`; carries the field name.
    NonpositivePower(&'static str),
    NonpositiveMu,
    NonFinite(&'static str),
    SplitOutOfRange(&'static str),
    NegativeRate(&'static str),
    NegativeWeight(&'static str),
    ZeroWeights,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::NonpositivePower(field) => write!(f, "power `{field}` must be >= 0"),
            ModelError::NonpositiveMu => f.write_str("ratio coefficient `mu` must be > 0"),
            ModelError::NonFinite(field) => write!(f, "`{field}` must be finite"),
            ModelError::SplitOutOfRange(field) => write!(f, "`{field}` must lie in [0, 1]"),
            ModelError::NegativeRate(field) => write!(f, "rate `{field}` must be >= 0"),
            ModelError::NegativeWeight(field) => write!(f, "weight `{field}` must be >= 0"),
            ModelError::ZeroWeights => f.write_str("at least one weight must be positive"),
        }
    }
}

impl core::error::Error for ModelError {}

fn finite(value: f64, field: &'static str) -> Result<f64, ModelError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::NonFinite(field))
    }
}

/// Unvalidated channel parameters, as read from a config file.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct RawChannel {
    pub a: f64,
    pub b: f64,
    pub p1: f64,
    pub p2: f64,
    pub mu: f64,
}

/// A validated channel: gains `a` (primary Tx to cognitive Rx) and `b`
/// (cognitive Tx to primary Rx), powers, and the ratio coefficient `mu` of
/// the constraint `R1 >= mu·R0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ChannelParams {
    a: f64,
    b: f64,
    p1: f64,
    p2: f64,
    mu: f64,
}

impl ChannelParams {
    pub fn new(a: f64, b: f64, p1: f64, p2: f64, mu: f64) -> Result<Self, ModelError> {
        validate_channel(&RawChannel { a, b, p1, p2, mu })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `|b| < 1`. Gates the outer bound, so no tolerance is applied.
    pub fn weak_interference(&self) -> bool {
        libm::fabs(self.b) < 1.0
    }

    pub fn to_raw(&self) -> RawChannel {
        RawChannel {
            a: self.a,
            b: self.b,
            p1: self.p1,
            p2: self.p2,
            mu: self.mu,
        }
    }

    pub fn with_gains(&self, a: f64, b: f64) -> Result<Self, ModelError> {
        Self::new(a, b, self.p1, self.p2, self.mu)
    }
}

pub fn validate_channel(raw: &RawChannel) -> Result<ChannelParams, ModelError> {
    let a = finite(raw.a, "a")?;
    let b = finite(raw.b, "b")?;
    let p1 = finite(raw.p1, "p1")?;
    let p2 = finite(raw.p2, "p2")?;
    let mu = finite(raw.mu, "mu")?;
    if p1 < 0.0 {
        return Err(ModelError::NonpositivePower("p1"));
    }
    if p2 < 0.0 {
        return Err(ModelError::NonpositivePower("p2"));
    }
    if mu <= 0.0 {
        return Err(ModelError::NonpositiveMu);
    }
    Ok(ChannelParams { a, b, p1, p2, mu })
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for ChannelParams {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawChannel::deserialize(deserializer)?;
        validate_channel(&raw).map_err(serde::de::Error::custom)
    }
}

/// `alpha`: share of the cognitive power spent on its own message.
/// `beta`: share of the primary power spent on the shared message.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PowerSplit {
    alpha: f64,
    beta: f64,
}

impl PowerSplit {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ModelError> {
        let alpha = finite(alpha, "alpha")?;
        let beta = finite(beta, "beta")?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(ModelError::SplitOutOfRange("alpha"));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(ModelError::SplitOutOfRange("beta"));
        }
        Ok(PowerSplit { alpha, beta })
    }

    /// Clamps into the unit square; used by the search routines.
    pub(crate) fn clamped(alpha: f64, beta: f64) -> Self {
        PowerSplit {
            alpha: alpha.clamp(0.0, 1.0),
            beta: beta.clamp(0.0, 1.0),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for PowerSplit {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            alpha: f64,
            beta: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        PowerSplit::new(raw.alpha, raw.beta).map_err(serde::de::Error::custom)
    }
}

/// A rate point `(R0, R1, R2)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateTriple {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl RateTriple {
    pub fn new(r0: f64, r1: f64, r2: f64) -> Result<Self, ModelError> {
        for (value, field) in [(r0, "r0"), (r1, "r1"), (r2, "r2")] {
            finite(value, field)?;
            if value < 0.0 {
                return Err(ModelError::NegativeRate(field));
            }
        }
        Ok(RateTriple { r0, r1, r2 })
    }

    pub const ORIGIN: RateTriple = RateTriple {
        r0: 0.0,
        r1: 0.0,
        r2: 0.0,
    };

    /// Lexicographic comparison on `(r0, r1, r2)`.
    pub fn lex_cmp(&self, other: &RateTriple) -> core::cmp::Ordering {
        self.r0
            .total_cmp(&other.r0)
            .then(self.r1.total_cmp(&other.r1))
            .then(self.r2.total_cmp(&other.r2))
    }
}

/// Objective weights `mu0·R0 + mu1·R1 + mu2·R2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Weights {
    mu0: f64,
    mu1: f64,
    mu2: f64,
}

impl Weights {
    pub fn new(mu0: f64, mu1: f64, mu2: f64) -> Result<Self, ModelError> {
        for (value, field) in [(mu0, "mu0"), (mu1, "mu1"), (mu2, "mu2")] {
            finite(value, field)?;
            if value < 0.0 {
                return Err(ModelError::NegativeWeight(field));
            }
        }
        if mu0 + mu1 + mu2 <= 0.0 {
            return Err(ModelError::ZeroWeights);
        }
        Ok(Weights { mu0, mu1, mu2 })
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    #[inline]
    pub fn dot(&self, rt: &RateTriple) -> f64 {
        self.mu0 * rt.r0 + self.mu1 * rt.r1 + self.mu2 * rt.r2
    }

    /// Positive rescaling; `None` when `factor` is not a positive finite number.
    pub fn scaled(&self, factor: f64) -> Option<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return None;
        }
        Weights::new(self.mu0 * factor, self.mu1 * factor, self.mu2 * factor).ok()
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Weights {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            mu0: f64,
            mu1: f64,
            mu2: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        Weights::new(raw.mu0, raw.mu1, raw.mu2).map_err(serde::de::Error::custom)
    }
}

/// `R1 >= mu·R0` up to [`RATIO_TOLERANCE`].
pub fn ratio_constraint_satisfied(rt: &RateTriple, ch: &ChannelParams) -> bool {
    rt.r1 >= ch.mu * rt.r0 - RATIO_TOLERANCE
}
