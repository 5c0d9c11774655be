//! CDFs of the received signal power on one frequency plane.
//!
//! Each active transmitter contributes an independent exponential term, so
//! the plane's signal power is a sum of one or two exponentials.

use super::quadrature::{integrate, Integral};
use crate::error::Error;

/// Upper end of the interference integral in units of its mean; the tail
/// beyond contributes at most exp(-700).
const INTERFERENCE_CUTOFF: f64 = 700.0;
const SEGMENT_REL_TOL: f64 = 1e-12;
const MAX_SEGMENTS: usize = 400;
/// Required relative accuracy of interference-averaged outage.
pub const QUADRATURE_REL_TOL: f64 = 1e-8;

/// (1 - e^{-z}) / z, continuous at 0.
fn one_minus_exp_over(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        -(-z).exp_m1() / z
    }
}

/// Pr(S < x) where S is a sum of independent exponentials with the given
/// means. Zero means (inactive branches) are ignored; with no active branch
/// S = 0.
pub fn exp_sum_cdf(means: &[f64], x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut active = means.iter().copied().filter(|&m| m > 0.0);
    match (active.next(), active.next(), active.next()) {
        (None, _, _) => 1.0,
        (Some(m), None, _) => -(-x / m).exp_m1(),
        (Some(m1), Some(m2), None) => {
            // Hypoexponential with rates a <= b. With d = b - a:
            // survival = e^{-ax} (1 + a x (1 - e^{-dx}) / (dx)),
            // which reduces to the Erlang-2 form when the means coincide.
            let (a, b) = if m1 >= m2 { (1.0 / m1, 1.0 / m2) } else { (1.0 / m2, 1.0 / m1) };
            let ax = a * x;
            let phi = one_minus_exp_over((b - a) * x);
            (-(-ax).exp_m1() - ax * (-ax).exp() * phi).clamp(0.0, 1.0)
        }
        _ => panic!("at most two transmitters share a frequency plane"),
    }
}

/// Pr(S < threshold·(noise + I)) with I ~ Exp(mean `interference_mean_w`)
/// independent of S, by adaptive quadrature over the interference draw.
pub fn interference_averaged_cdf(
    means: &[f64],
    threshold: f64,
    noise_w: f64,
    interference_mean_w: f64,
) -> Result<Integral, Error> {
    let Some(min_mean) = means.iter().copied().filter(|&m| m > 0.0).reduce(f64::min) else {
        return Ok(Integral {
            value: exp_sum_cdf(means, threshold * noise_w),
            error_bound: 0.0,
        });
    };
    if interference_mean_w <= 0.0 {
        return Ok(Integral {
            value: exp_sum_cdf(means, threshold * noise_w),
            error_bound: 0.0,
        });
    }

    // u is the interference draw in units of its mean, density e^{-u}.
    let integrand = |u: f64| (-u).exp() * exp_sum_cdf(means, threshold * (noise_w + interference_mean_w * u));

    // The CDF moves on the scale u ~ min_mean / (threshold·I); breakpoints
    // double from there so every segment sees a smooth integrand.
    let scale = min_mean / (threshold * interference_mean_w);
    let mut breakpoints = vec![0.0];
    let mut b = scale.min(INTERFERENCE_CUTOFF);
    while b < INTERFERENCE_CUTOFF {
        breakpoints.push(b);
        b *= 2.0;
    }
    breakpoints.push(INTERFERENCE_CUTOFF);

    let mut total = Integral {
        value: 0.0,
        error_bound: 0.0,
    };
    for w in breakpoints.windows(2) {
        let seg = integrate(integrand, w[0], w[1], 0.0, SEGMENT_REL_TOL, MAX_SEGMENTS)?;
        total.value += seg.value;
        total.error_bound += seg.error_bound;
    }
    // The CDF is increasing in u, so the tail lies in [e^{-U} F(U), e^{-U}].
    let tail_floor = integrand(INTERFERENCE_CUTOFF);
    total.value += tail_floor;
    total.error_bound += (-INTERFERENCE_CUTOFF).exp() - tail_floor;

    let allowed = QUADRATURE_REL_TOL * total.value + 2.0 * (-INTERFERENCE_CUTOFF).exp();
    if total.error_bound > allowed {
        return Err(Error::QuadratureDiverged {
            estimate: total.value,
            error_bound: total.error_bound,
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Closed forms used only as oracles: E_U[e^{-cU}] = 1/(1+c) and
    // E_U[U e^{-cU}] = 1/(1+c)² for U ~ Exp(1).
    fn oracle_single(m: f64, th: f64, n: f64, mu: f64) -> f64 {
        1.0 - (-th * n / m).exp() / (1.0 + th * mu / m)
    }

    fn oracle_pair(m1: f64, m2: f64, th: f64, n: f64, mu: f64) -> f64 {
        let term = |m: f64| m * (-th * n / m).exp() / (1.0 + th * mu / m);
        1.0 - (term(m1) - term(m2)) / (m1 - m2)
    }

    fn oracle_equal(m: f64, th: f64, n: f64, mu: f64) -> f64 {
        let c = th * mu / m;
        let y0 = th * n / m;
        1.0 - (-y0).exp() * ((1.0 + y0) / (1.0 + c) + c / (1.0 + c).powi(2))
    }

    #[test]
    fn erlang_two_anchor() {
        let f = exp_sum_cdf(&[2.0, 2.0], 2.0);
        assert!((f - (1.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-15);
        assert!((f - 0.2642).abs() < 5e-5);
    }

    #[test]
    fn single_and_empty() {
        assert_eq!(exp_sum_cdf(&[], 1.0), 1.0);
        assert_eq!(exp_sum_cdf(&[0.0, 0.0], 1.0), 1.0);
        assert_eq!(exp_sum_cdf(&[1.0, 0.0], 1.0), 1.0 - (-1.0f64).exp());
        assert_eq!(exp_sum_cdf(&[1.0], 0.0), 0.0);
    }

    #[test]
    fn small_argument_accuracy() {
        // Erlang-2 CDF by its alternating series, y = 1e-4.
        let y: f64 = 1e-4;
        let series: f64 = (2..12)
            .map(|k| {
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                (-1f64).powi(k) * (k as f64 - 1.0) * y.powi(k) / fact
            })
            .sum();
        let f = exp_sum_cdf(&[1.0, 1.0], y);
        assert!((f / series - 1.0).abs() < 1e-9, "{f} vs {series}");
    }

    #[test]
    fn quadrature_matches_closed_forms_at_table_scale() {
        // TV plane under a missed detection, default geometry at P = 1 W.
        let m = 0.25 * 5.89e-7;
        let (th, n, mu) = (31.0, 2.4012e-14, 45e3 * 5.89e-7);
        let single = interference_averaged_cdf(&[m], th, n, mu).unwrap().value;
        assert!((single / oracle_single(m, th, n, mu) - 1.0).abs() < 1e-8);
        let equal = interference_averaged_cdf(&[m, m], th, n, mu).unwrap().value;
        assert!((equal / oracle_equal(m, th, n, mu) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn no_interference_is_exact() {
        let r = interference_averaged_cdf(&[1.0], 2.0, 1.0, 0.0).unwrap();
        assert_eq!(r.value, exp_sum_cdf(&[1.0], 2.0));
        assert_eq!(r.error_bound, 0.0);
    }

    proptest! {
        #[test]
        fn cdf_matches_difference_form(m1 in 0.1..10.0f64, ratio in 1.5..20.0f64, x in 0.01..50.0f64) {
            let m2 = m1 * ratio;
            let direct = 1.0 - (m2 * (-x / m2).exp() - m1 * (-x / m1).exp()) / (m2 - m1);
            prop_assert!((exp_sum_cdf(&[m1, m2], x) - direct).abs() < 1e-12);
        }

        #[test]
        fn quadrature_matches_oracle(
            m1 in 1e-3..10.0f64,
            ratio in prop_oneof![0.2..0.8f64, 1.25..5.0f64],
            th in 1.0..100.0f64,
            n in 1e-4..1.0f64,
            mu in 1e-4..1e4f64,
        ) {
            let m2 = m1 * ratio;
            let single = interference_averaged_cdf(&[m1], th, n, mu).unwrap().value;
            prop_assert!((single - oracle_single(m1, th, n, mu)).abs() <= 1e-8 * single + 1e-14);
            let pair = interference_averaged_cdf(&[m1, m2], th, n, mu).unwrap().value;
            let expected = oracle_pair(m1, m2, th, n, mu);
            // The oracle itself cancels to ~1e-16 absolute.
            prop_assert!((pair - expected).abs() <= 1e-8 * pair + 1e-14, "{} vs {}", pair, expected);
        }
    }
}
