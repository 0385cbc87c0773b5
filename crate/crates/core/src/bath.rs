//! Field power spectrum of the de Sitter alpha-vacua and the Lindblad
//! coefficients A, B it induces on the comoving qubit.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Alpha values closer to zero than this are rejected: the spectrum carries a
/// `1 - e^{2 alpha}` denominator that blows up as alpha -> 0-.
pub const ALPHA_UPPER_BOUND: f64 = -1e-6;

/// Which de Sitter-invariant vacuum the scalar field is in.
///
/// `BunchDavies` is the alpha -> -infinity limit, kept as an explicit variant
/// so the thermal limit is evaluated by exact formulas instead of a large
/// negative alpha.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Vacuum {
    Alpha(f64),
    BunchDavies,
}

/// Environment parameters: qubit gap, Gibbons-Hawking temperature, vacuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathParams {
    omega: f64,
    temperature: f64,
    vacuum: Vacuum,
}

impl BathParams {
    pub fn new(omega: f64, temperature: f64, vacuum: Vacuum) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::invalid(
                "omega",
                format!("must be positive, got {omega}"),
            ));
        }
        if !temperature.is_finite() || temperature <= 0.0 {
            return Err(Error::invalid(
                "temperature",
                format!("must be positive, got {temperature}"),
            ));
        }
        if let Vacuum::Alpha(alpha) = vacuum {
            if !alpha.is_finite() || alpha > ALPHA_UPPER_BOUND {
                return Err(Error::invalid(
                    "alpha",
                    format!("must be <= {ALPHA_UPPER_BOUND}, got {alpha}"),
                ));
            }
        }
        Ok(Self {
            omega,
            temperature,
            vacuum,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn vacuum(&self) -> Vacuum {
        self.vacuum
    }
}

/// The dissipator coefficients `A = [G(w) + G(-w)]/4`, `B = [G(w) - G(-w)]/4`.
///
/// `A > |B|` is required for complete positivity and is confirmed numerically
/// on construction rather than trusted from sign bookkeeping; B itself may be
/// negative for alpha-vacua, whose spectra violate detailed balance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathCoefficients {
    a: f64,
    b: f64,
}

impl BathCoefficients {
    /// `|B| = A` is accepted: mathematically the gap `A - |B|` is strictly
    /// positive at finite temperature, but at extreme `pi omega` it sits far
    /// below the double-precision resolution of `A`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a <= 0.0 || b.abs() > a {
            return Err(Error::invalid(
                "bath coefficients",
                format!("require finite A >= |B|, A > 0, got A={a:.6e}, B={b:.6e}"),
            ));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Temperature perceived by a comoving detector, `T = 1/(2 pi l)`.
pub fn gibbons_hawking_temperature(curvature_radius: f64) -> Result<f64> {
    if !curvature_radius.is_finite() || curvature_radius <= 0.0 {
        return Err(Error::invalid(
            "curvature_radius",
            format!("must be positive, got {curvature_radius}"),
        ));
    }
    Ok(1.0 / (2.0 * PI * curvature_radius))
}

/// `(1 + e^s)^2 * e^t` without overflow for large positive `s`: the square is
/// folded into a single exponent, `e^{2s + t} (1 + e^{-s})^2`.
fn sq1p_exp_times_exp(s: f64, t: f64) -> f64 {
    if s <= 0.0 {
        let u = s.exp();
        (1.0 + u) * (1.0 + u) * t.exp()
    } else {
        let u = (-s).exp();
        (2.0 * s + t).exp() * (1.0 + u) * (1.0 + u)
    }
}

/// `1 - e^x` evaluated without cancellation.
fn one_minus_exp(x: f64) -> f64 {
    -x.exp_m1()
}

/// Power spectrum `G(lambda)` of the field correlation function.
///
/// For an alpha-vacuum
/// `G(lambda) = lambda (1 + e^{alpha - pi lambda})^2 /
///              [2 pi (1 - e^{-lambda/T}) (1 - e^{2 alpha})]`,
/// reducing to `lambda / [2 pi (1 - e^{-lambda/T})]` in the Bunch-Davies
/// limit. Positive for every nonzero `lambda`; the removable singularity at
/// `lambda = 0` is out of scope and rejected.
pub fn power_spectrum(lambda: f64, params: &BathParams) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::invalid(
            "lambda",
            format!("must be finite and nonzero, got {lambda}"),
        ));
    }
    let t = params.temperature;
    // Negative frequencies are folded to mu = -lambda > 0 so every
    // exponential ratio is evaluated with combined exponents.
    let value = match params.vacuum {
        Vacuum::BunchDavies => {
            if lambda > 0.0 {
                lambda / (2.0 * PI * one_minus_exp(-lambda / t))
            } else {
                let mu = -lambda;
                mu / (2.0 * PI * (mu / t).exp_m1())
            }
        }
        Vacuum::Alpha(alpha) => {
            let d_alpha = one_minus_exp(2.0 * alpha);
            if lambda > 0.0 {
                let n = {
                    let u = (alpha - PI * lambda).exp();
                    (1.0 + u) * (1.0 + u)
                };
                lambda * n / (2.0 * PI * one_minus_exp(-lambda / t) * d_alpha)
            } else {
                let mu = -lambda;
                let n = sq1p_exp_times_exp(alpha + PI * mu, -mu / t);
                mu * n / (2.0 * PI * one_minus_exp(-mu / t) * d_alpha)
            }
        }
    };
    Ok(value)
}

/// Lindblad coefficients from the closed-form spectrum.
///
/// Bunch-Davies reduces to `A = (w/8pi) coth(w/2T)`, `B = w/8pi`; the general
/// alpha-vacuum expression is evaluated with the same overflow-safe folding
/// as [`power_spectrum`] and must agree with it to 1e-12 relative.
pub fn bath_coefficients(params: &BathParams) -> Result<BathCoefficients> {
    let omega = params.omega;
    let t = params.temperature;
    let (a, b) = match params.vacuum {
        Vacuum::BunchDavies => {
            let b = omega / (8.0 * PI);
            let a = b / (omega / (2.0 * t)).tanh();
            (a, b)
        }
        Vacuum::Alpha(alpha) => {
            let n_minus = {
                let u = (alpha - PI * omega).exp();
                (1.0 + u) * (1.0 + u)
            };
            let n_plus = sq1p_exp_times_exp(alpha + PI * omega, -omega / t);
            // (e^{2a} - 1)(e^{-w/T} - 1) is a product of two negatives
            let denom = 8.0 * PI * (2.0 * alpha).exp_m1() * (-omega / t).exp_m1();
            (
                omega * (n_minus + n_plus) / denom,
                omega * (n_minus - n_plus) / denom,
            )
        }
    };
    BathCoefficients::new(a, b).map_err(|_| Error::CoefficientPositivity {
        omega,
        temperature: t,
        a,
        b,
    })
}
