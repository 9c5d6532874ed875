//! Frequency-dependent material model and the Fresnel reflection
//! coefficients that attenuate each bounce.
//!
//! Materials follow the power-law parameterization: the real part of the
//! relative permittivity is `a * f^b` and the conductivity is `c * f^d`
//! with `f` in GHz. The complex relative permittivity of a half-space is
//! then `eta' - j * 17.98 * sigma / f`, and bounces are attenuated by the
//! smooth-surface Fresnel coefficient of the matching polarization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MaterialError {
    #[error("frequency {freq_ghz} GHz outside the validity range {low}-{high} GHz of '{material}'")]
    FrequencyOutOfRange {
        material: String,
        freq_ghz: f64,
        low: f64,
        high: f64,
    },
}

/// Power-law material coefficients with their frequency validity range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub name: String,
    /// Permittivity scale (unitless), > 0.
    pub a: f64,
    /// Permittivity exponent (unitless).
    pub b: f64,
    /// Conductivity at 1 GHz, in S/m, >= 0.
    pub c: f64,
    /// Conductivity exponent (unitless).
    pub d: f64,
    /// Inclusive validity range in GHz.
    pub freq_range: (f64, f64),
}

impl MaterialSpec {
    pub fn new(name: impl Into<String>, a: f64, b: f64, c: f64, d: f64, freq_range: (f64, f64)) -> Self {
        Self { name: name.into(), a, b, c, d, freq_range }
    }

    fn check_freq(&self, f_ghz: f64) -> Result<(), MaterialError> {
        if f_ghz < self.freq_range.0 || f_ghz > self.freq_range.1 {
            return Err(MaterialError::FrequencyOutOfRange {
                material: self.name.clone(),
                freq_ghz: f_ghz,
                low: self.freq_range.0,
                high: self.freq_range.1,
            });
        }
        Ok(())
    }
}

/// Highly conductive metal: frequency-flat permittivity 1 and
/// conductivity 1e7 S/m, valid 1-100 GHz.
pub fn metal() -> MaterialSpec {
    MaterialSpec::new("metal", 1.0, 0.0, 1e7, 0.0, (1.0, 100.0))
}

/// Concrete: permittivity 5.24 (frequency-flat) and conductivity
/// 0.0462 * f^0.7822 S/m, valid 1-100 GHz.
pub fn concrete() -> MaterialSpec {
    MaterialSpec::new("concrete", 5.24, 0.0, 0.0462, 0.7822, (1.0, 100.0))
}

/// Relative permittivity of a reflecting half-space, stored with the
/// `-j` sign convention: `value = eta' - j * 17.98 * sigma / f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPermittivity {
    pub value: Complex64,
}

impl ComplexPermittivity {
    /// Real part `eta'`.
    pub fn real_part(self) -> f64 {
        self.value.re
    }

    /// Magnitude of the loss term (the imaginary part is stored negative).
    pub fn loss_magnitude(self) -> f64 {
        -self.value.im
    }
}

/// Real part of the relative permittivity, `a * f^b`.
pub fn eval_eta_prime(m: &MaterialSpec, f_ghz: f64) -> Result<f64, MaterialError> {
    m.check_freq(f_ghz)?;
    Ok(m.a * f_ghz.powf(m.b))
}

/// Conductivity in S/m, `c * f^d`.
pub fn eval_sigma(m: &MaterialSpec, f_ghz: f64) -> Result<f64, MaterialError> {
    m.check_freq(f_ghz)?;
    Ok(m.c * f_ghz.powf(m.d))
}

/// Complex relative permittivity `eta' - j * 17.98 * sigma / f`.
pub fn complex_permittivity(m: &MaterialSpec, f_ghz: f64) -> Result<ComplexPermittivity, MaterialError> {
    let eta_prime = eval_eta_prime(m, f_ghz)?;
    let sigma = eval_sigma(m, f_ghz)?;
    Ok(ComplexPermittivity {
        value: Complex64::new(eta_prime, -17.98 * sigma / f_ghz),
    })
}

/// TE (perpendicular) and TM (parallel) Fresnel reflection coefficients.
#[derive(Debug, Clone, Copy)]
pub struct FresnelCoefficients {
    pub gamma_te: Complex64,
    pub gamma_tm: Complex64,
}

/// Smooth half-space Fresnel coefficients for incidence from vacuum.
///
/// `cos_theta_i` is the cosine of the incidence angle measured from the
/// surface normal. The square root is the principal branch (non-negative
/// real part).
pub fn fresnel_coefficients(eta: ComplexPermittivity, cos_theta_i: f64) -> FresnelCoefficients {
    let cos_i = cos_theta_i.clamp(0.0, 1.0);
    let sin_sq = 1.0 - cos_i * cos_i;
    let root = (eta.value - sin_sq).sqrt();
    let gamma_te = (cos_i - root) / (cos_i + root);
    let gamma_tm = (eta.value * cos_i - root) / (eta.value * cos_i + root);
    FresnelCoefficients { gamma_te, gamma_tm }
}

/// Which Fresnel branch multiplies the path amplitude at each bounce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarization {
    #[default]
    Te,
    Tm,
    /// Power-average amplitude of both branches, carrying the TE phase.
    Unpolarized,
}

impl Polarization {
    pub fn parse(s: &str) -> Option<Polarization> {
        match s {
            "te" | "TE" => Some(Polarization::Te),
            "tm" | "TM" => Some(Polarization::Tm),
            "unpolarized" => Some(Polarization::Unpolarized),
            _ => None,
        }
    }
}

/// Complex reflection coefficient applied to a bounce.
pub fn bounce_coefficient(
    eta: ComplexPermittivity,
    cos_theta_i: f64,
    polarization: Polarization,
) -> Complex64 {
    let fc = fresnel_coefficients(eta, cos_theta_i);
    match polarization {
        Polarization::Te => fc.gamma_te,
        Polarization::Tm => fc.gamma_tm,
        Polarization::Unpolarized => {
            let amp = ((fc.gamma_te.norm_sqr() + fc.gamma_tm.norm_sqr()) / 2.0).sqrt();
            Complex64::from_polar(amp, fc.gamma_te.arg())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn table_values_exact_at_1ghz() {
        assert_eq!(eval_eta_prime(&metal(), 1.0).unwrap(), 1.0);
        assert_eq!(eval_sigma(&metal(), 1.0).unwrap(), 1e7);
        assert_eq!(eval_eta_prime(&concrete(), 1.0).unwrap(), 5.24);
        assert_eq!(eval_sigma(&concrete(), 1.0).unwrap(), 0.0462);
    }

    #[test]
    fn flat_exponents_are_frequency_independent() {
        assert_eq!(eval_eta_prime(&metal(), 28.0).unwrap(), 1.0);
        assert_eq!(eval_sigma(&metal(), 28.0).unwrap(), 1e7);
        assert_eq!(eval_eta_prime(&concrete(), 100.0).unwrap(), 5.24);
    }

    #[test]
    fn concrete_sigma_at_28ghz() {
        // 0.0462 * 28^0.7822, evaluated with 30-digit arithmetic.
        let sigma = eval_sigma(&concrete(), 28.0).unwrap();
        assert_abs_diff_eq!(sigma, 0.626049953566988, epsilon = 1e-12);
    }

    #[test]
    fn complex_permittivity_values() {
        let eta = complex_permittivity(&concrete(), 28.0).unwrap();
        assert_abs_diff_eq!(eta.real_part(), 5.24, epsilon = 1e-12);
        assert_abs_diff_eq!(eta.loss_magnitude(), 0.402013505897659, epsilon = 1e-12);

        let eta = complex_permittivity(&metal(), 28.0).unwrap();
        assert_abs_diff_eq!(eta.real_part(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eta.loss_magnitude(), 6.421428571428571e6, epsilon = 1.0);

        let eta = complex_permittivity(&concrete(), 1.0).unwrap();
        assert_abs_diff_eq!(eta.loss_magnitude(), 0.830676, epsilon = 1e-12);
    }

    #[test]
    fn frequency_out_of_range() {
        let err = eval_eta_prime(&concrete(), 200.0).unwrap_err();
        assert!(matches!(err, MaterialError::FrequencyOutOfRange { .. }));
        assert!(complex_permittivity(&metal(), 0.5).is_err());
    }

    #[test]
    fn metal_is_near_perfect_mirror_at_normal_incidence() {
        let eta = complex_permittivity(&metal(), 28.0).unwrap();
        let fc = fresnel_coefficients(eta, 1.0);
        assert!(fc.gamma_te.norm() >= 0.999);
        // 30-digit oracle: |gamma_te| = 0.999442072201570.
        assert_abs_diff_eq!(fc.gamma_te.norm(), 0.999442072201570, epsilon = 1e-9);
    }

    #[test]
    fn concrete_normal_incidence_reflection() {
        let eta = complex_permittivity(&concrete(), 28.0).unwrap();
        let fc = fresnel_coefficients(eta, 1.0);
        // (1 - sqrt(eta)) / (1 + sqrt(eta)) with eta = 5.24 - j0.402.
        assert_abs_diff_eq!(fc.gamma_te.norm(), 0.393007977841619, epsilon = 5e-3);
        // TE and TM magnitudes coincide at normal incidence.
        assert_abs_diff_eq!(fc.gamma_te.norm(), fc.gamma_tm.norm(), epsilon = 1e-9);
    }

    #[test]
    fn grazing_incidence_is_total() {
        for mat in [metal(), concrete()] {
            let eta = complex_permittivity(&mat, 28.0).unwrap();
            let fc = fresnel_coefficients(eta, 0.0);
            assert_abs_diff_eq!(fc.gamma_te.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(fc.gamma_tm.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gamma_bounded_over_sweep() {
        // 10^4-point sweep over incidence and frequency for both materials.
        for mat in [metal(), concrete()] {
            for fi in 0..100 {
                let f = 1.0 + 99.0 * fi as f64 / 99.0;
                let eta = complex_permittivity(&mat, f).unwrap();
                for ci in 0..100 {
                    let cos_i = ci as f64 / 99.0;
                    let fc = fresnel_coefficients(eta, cos_i);
                    assert!(fc.gamma_te.norm() <= 1.0 + 1e-12);
                    assert!(fc.gamma_tm.norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn metal_mirror_up_to_80_degrees() {
        let eta = complex_permittivity(&metal(), 28.0).unwrap();
        for i in 0..=1000 {
            let cos_i = 0.17 + (1.0 - 0.17) * i as f64 / 1000.0;
            assert!(fresnel_coefficients(eta, cos_i).gamma_te.norm() >= 0.999);
        }
    }

    #[test]
    fn power_law_monotone_in_frequency() {
        let mat = concrete();
        let mut prev = eval_sigma(&mat, 1.0).unwrap();
        for i in 1..=99 {
            let f = 1.0 + i as f64;
            let next = eval_sigma(&mat, f).unwrap();
            assert!(next >= prev);
            prev = next;
        }
    }

    #[test]
    fn brewster_dip_for_lossless_concrete() {
        let eta = ComplexPermittivity { value: Complex64::new(5.24, 0.0) };
        let mut min_val = f64::INFINITY;
        let mut min_cos = f64::NAN;
        for i in 0..=10_000 {
            let cos_i = i as f64 / 10_000.0;
            let g = fresnel_coefficients(eta, cos_i).gamma_tm.norm();
            if g < min_val {
                min_val = g;
                min_cos = cos_i;
            }
        }
        // Brewster angle arctan(sqrt(5.24)): cos = 0.400320.
        assert_abs_diff_eq!(min_cos, 0.400320384512718, epsilon = 1e-3);
        assert!(min_val < 1e-3);
    }

    #[test]
    fn bounce_coefficient_branches() {
        let eta = complex_permittivity(&concrete(), 28.0).unwrap();
        let cos_i = 0.6;
        let fc = fresnel_coefficients(eta, cos_i);
        assert_eq!(bounce_coefficient(eta, cos_i, Polarization::Te), fc.gamma_te);
        assert_eq!(bounce_coefficient(eta, cos_i, Polarization::Tm), fc.gamma_tm);

        let un = bounce_coefficient(eta, cos_i, Polarization::Unpolarized).norm();
        let lo = fc.gamma_te.norm().min(fc.gamma_tm.norm());
        let hi = fc.gamma_te.norm().max(fc.gamma_tm.norm());
        assert!(un >= lo - 1e-12 && un <= hi + 1e-12);

        // Normal incidence: the two branch magnitudes agree.
        let fc0 = fresnel_coefficients(eta, 1.0);
        assert_abs_diff_eq!(fc0.gamma_te.norm(), fc0.gamma_tm.norm(), epsilon = 1e-9);
    }
}
