use std::f64::consts::PI;

use super::MathError;

/// Largest dimension supported by the volume kernels and the SVD.
pub const MAX_DIMENSION: usize = 64;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn log_gamma(x: f64) -> Result<f64, MathError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(MathError::Domain { function: "log_gamma", x });
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return Ok((PI / (PI * x).sin()).ln() - lanczos_ln_gamma(1.0 - x));
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Digamma ψ(x) for x > 0.
///
/// Shifts the argument up to 10 with ψ(x) = ψ(x+1) − 1/x and finishes with
/// the asymptotic expansion through x^-14.
pub fn digamma(x: f64) -> Result<f64, MathError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(MathError::Domain { function: "digamma", x });
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_{2n} / (2n)
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(shift + x.ln() - 0.5 / x - series)
}

/// Log of the volume of the unit d-ball, ln(π^{d/2} / Γ(1 + d/2)).
pub fn ln_unit_ball_volume(d: usize) -> Result<f64, MathError> {
    if d == 0 || d > MAX_DIMENSION {
        return Err(MathError::InvalidInput(format!(
            "dimension {d} outside 1..={MAX_DIMENSION}"
        )));
    }
    let half = d as f64 / 2.0;
    Ok(half * PI.ln() - log_gamma(1.0 + half)?)
}

pub fn unit_ball_volume(d: usize) -> Result<f64, MathError> {
    match d {
        // exact closed forms for the common cases
        1 => Ok(2.0),
        2 => Ok(PI),
        3 => Ok(4.0 * PI / 3.0),
        _ => Ok(ln_unit_ball_volume(d)?.exp()),
    }
}

/// Volume of an ellipsoid with the given semi-axis lengths.
pub fn ellipsoid_volume(radii: &[f64]) -> Result<f64, MathError> {
    if let Some((index, &value)) = radii.iter().enumerate().find(|(_, r)| !(**r > 0.0) || !r.is_finite()) {
        return Err(MathError::DegenerateVolume { index, value });
    }
    let product: f64 = radii.iter().product();
    Ok(unit_ball_volume(radii.len())? * product)
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    /// Stirling series evaluated after shifting x above 30; an independent
    /// route to ln Γ.
    fn stirling_ln_gamma(x: f64) -> f64 {
        let mut x = x;
        let mut shift = 0.0;
        while x < 30.0 {
            shift -= x.ln();
            x += 1.0;
        }
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
        shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
    }

    /// Plain asymptotic series for ψ at large x, no shifting.
    fn asymptotic_digamma(x: f64) -> f64 {
        let x2 = x * x;
        x.ln() - 0.5 / x - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2) - 1.0 / (252.0 * x2 * x2 * x2)
            + 1.0 / (240.0 * x2.powi(4))
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn log_gamma_integer_points() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!((log_gamma(10.0).unwrap() - 362_880f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_matches_stirling_oracle() {
        // Γ(2.5) = 1.32934038817913702...
        assert!(rel(log_gamma(2.5).unwrap(), 1.329_340_388_179_137_f64.ln()) < 1e-12);
        let mut x = 0.5;
        while x <= 200.0 {
            let oracle = stirling_ln_gamma(x);
            let got = log_gamma(x).unwrap();
            let err = if oracle.abs() > 1e-3 { rel(got, oracle) } else { (got - oracle).abs() };
            assert!(err < 1e-12, "x={x}: {got} vs {oracle}");
            x += 0.37;
        }
    }

    #[test]
    fn log_gamma_frozen_values() {
        // high-precision reference values
        for (x, v) in [
            (0.5, 0.572_364_942_924_700_087_07),
            (3.7, 1.428_072_326_665_388_129_2),
            (57.3, 173.563_868_279_691_418_94),
            (200.0, 857.933_669_825_857_436_82),
        ] {
            assert!(rel(log_gamma(x).unwrap(), v) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn log_gamma_domain() {
        assert!(matches!(log_gamma(0.0), Err(MathError::Domain { .. })));
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!((log_gamma(0.25).unwrap() - 3.625_609_908_221_908_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn digamma_anchor_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-12);
        assert!((digamma(100.0).unwrap() - asymptotic_digamma(100.0)).abs() < 1e-10);
        for (x, v) in [
            (2.5, 0.703_156_640_645_243_187_23),
            (10.0, 2.251_752_589_066_721_107_6),
            (100.0, 4.600_161_852_738_087_400_2),
            (1234.5, 7.118_016_231_827_997_843_3),
            (1e6, 13.815_510_057_964_190_771),
        ] {
            assert!((digamma(x).unwrap() - v).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn digamma_recurrence() {
        for x in [1.0, 2.5, 10.0, 100.0] {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!((lhs - 1.0 / x).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn digamma_domain() {
        assert!(matches!(digamma(0.0), Err(MathError::Domain { .. })));
        assert!(digamma(-3.0).is_err());
    }

    #[test]
    fn unit_ball_low_dimensions() {
        assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
        assert_eq!(unit_ball_volume(2).unwrap(), PI);
        assert!(rel(unit_ball_volume(3).unwrap(), 4.0 * PI / 3.0) < 1e-15);
        assert!(rel(unit_ball_volume(4).unwrap(), PI * PI / 2.0) < 1e-13);
        assert!(rel(ln_unit_ball_volume(2).unwrap(), PI.ln()) < 1e-13);
        assert!(unit_ball_volume(0).is_err());
        assert!(unit_ball_volume(65).is_err());
    }

    #[test]
    fn ellipsoid_volume_examples() {
        assert_eq!(ellipsoid_volume(&[1.0, 1.0]).unwrap(), PI);
        assert_eq!(ellipsoid_volume(&[2.0, 1.0]).unwrap(), 2.0 * PI);
        let v = ellipsoid_volume(&[1.0, 0.5, 0.25, 0.125]).unwrap();
        assert!(rel(v, PI * PI / 2.0 / 64.0) < 1e-13);
    }

    #[test]
    fn ellipsoid_volume_rejects_degenerate_radius() {
        assert_eq!(
            ellipsoid_volume(&[1.0, 0.0]),
            Err(MathError::DegenerateVolume { index: 1, value: 0.0 })
        );
        assert!(ellipsoid_volume(&[-1.0]).is_err());
    }

    #[test]
    fn ellipsoid_volume_scales_as_power_of_dimension() {
        let radii = [0.3, 1.7, 0.9];
        let base = ellipsoid_volume(&radii).unwrap();
        for s in [0.1, 2.0, 13.0] {
            let scaled: Vec<f64> = radii.iter().map(|r| r * s).collect();
            assert!(rel(ellipsoid_volume(&scaled).unwrap(), base * s.powi(3)) < 1e-12);
        }
    }

    #[test]
    fn normal_cdf_symmetry() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.0) + normal_cdf(-1.0) - 1.0).abs() < 1e-15);
        assert!((normal_cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-12);
    }
}
