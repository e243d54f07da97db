/// `½·log2(1 + snr)`, the Gaussian rate in bits per channel use.
#[inline]
pub(crate) fn half_log2_1p(snr: f64) -> f64 {
    0.5 * libm::log1p(snr) * core::f64::consts::LOG2_E
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `√(β(1−α)P1P2)`: the correlation between the two transmit signals.
#[inline]
pub(crate) fn coherent_term(alpha: f64, beta: f64, p1: f64, p2: f64) -> f64 {
    sqrt(beta * (1.0 - alpha) * p1 * p2)
}
