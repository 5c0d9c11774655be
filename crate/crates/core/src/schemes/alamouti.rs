//! Two-transmitter Alamouti space-time block code between the BS (antenna 0)
//! and the TVS (antenna 1).
//!
//! The outage pipeline only uses [`alamouti_effective_snr`]. The symbol-level
//! encode/combine routines exist to check that model: coherent combining
//! gives a post-detection SNR of (|h1|² + |h2|²)·Es/σ², i.e. the sum of the
//! two received powers over the noise.

use num_complex::Complex64;

use crate::error::Error;

/// `block[slot][antenna]`.
pub type CodeBlock = [[Complex64; 2]; 2];

/// Slot 1 sends (x1, x2); slot 2 sends (-x2*, x1*).
pub fn alamouti_encode(x1: Complex64, x2: Complex64) -> CodeBlock {
    [[x1, x2], [-x2.conj(), x1.conj()]]
}

/// What a single-antenna receiver sees over the two slots, with block fading
/// `h` and additive noise `noise`.
pub fn received_block(block: &CodeBlock, h: [Complex64; 2], noise: [Complex64; 2]) -> [Complex64; 2] {
    [0, 1].map(|slot| block[slot][0] * h[0] + block[slot][1] * h[1] + noise[slot])
}

/// Linear combiner output, scaled by |h1|² + |h2|² relative to the symbols.
pub fn alamouti_combine(received: [Complex64; 2], h: [Complex64; 2]) -> [Complex64; 2] {
    let [r1, r2] = received;
    let [h1, h2] = h;
    [
        h1.conj() * r1 + h2 * r2.conj(),
        h2.conj() * r1 - h1 * r2.conj(),
    ]
}

/// Combined and normalized symbol estimates.
pub fn alamouti_decode(received: [Complex64; 2], h: [Complex64; 2]) -> Result<[Complex64; 2], Error> {
    let gain = h[0].norm_sqr() + h[1].norm_sqr();
    if gain == 0.0 {
        return Err(Error::Undecodable);
    }
    Ok(alamouti_combine(received, h).map(|x| x / gain))
}

/// SNR at the combiner output for the first symbol, derived by pushing a unit
/// symbol and unit noise impulses through the actual encode/combine chain.
pub fn post_detection_snr(h: [Complex64; 2], symbol_energy: f64, noise_variance: f64) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let block = alamouti_encode(one, zero);
    let signal_gain = alamouti_combine(received_block(&block, h, [zero; 2]), h)[0];
    // The combiner maps circular noise in each slot to circular noise, so the
    // output variance is σ² times the squared response to each impulse.
    let noise_gain: f64 = [[one, zero], [zero, one]]
        .iter()
        .map(|&impulse| alamouti_combine(impulse, h)[0].norm_sqr())
        .sum();
    signal_gain.norm_sqr() * symbol_energy / (noise_gain * noise_variance)
}

/// Capacity-level model: received powers of both transmitters add.
pub fn alamouti_effective_snr(bs_received_w: f64, tvs_received_w: f64, denominator_w: f64) -> f64 {
    (bs_received_w + tvs_received_w) / denominator_w
}
