//! Evanescent plane-wave family and its axis slices.
//!
//! The family is
//!
//! ```text
//!   g(t, r) = A e^{k₂ r} e^{j(ω t − k₁ r)} = A e^{κ r} e^{jω t},   κ = k₂ − j k₁,
//! ```
//!
//! so every axis slice is a pure complex exponential: freezing r = r₀ gives
//! g(t) = [A e^{κ r₀}] e^{jω t}, freezing t = t₀ gives g(r) = [A e^{jω t₀}] e^{κ r}.
//! Each derivative multiplies by the slice rate μ (jω or κ), which yields the
//! closed forms ∂^i g^n = (n μ)^i g^n used to cross-check the jet arithmetic.
//!
//! Two real-signal conventions are supported: take the real part first and
//! then apply powers/operators, or work complex and take the real part last.
//! They differ by a cross term — (Re g)² = Re(g²)/2 + |g|²/2 — which the
//! operator-derivative comparison tracks explicitly.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::operators::{psi, Axis, Sign};
use crate::smooth::SmoothFn;

/// Parameters of the evanescent family and its space-time box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveParams {
    pub amplitude: f64,
    /// Propagating wavenumber k₁.
    pub k1: f64,
    /// Growth/attenuation rate k₂.
    pub k2: f64,
    /// Angular frequency ω.
    pub omega: f64,
    /// Propagation speed c.
    pub speed: f64,
    /// Time box [0, t_max].
    pub t_max: f64,
    /// Space box [r_min, r_max].
    pub r_min: f64,
    pub r_max: f64,
}

impl WaveParams {
    /// Named parameter presets: 1 is the slow low-attenuation regime,
    /// 2 the fast regime with k₁ ≫ k₂.
    pub fn scenario(which: u32) -> Result<WaveParams> {
        match which {
            1 => Ok(WaveParams {
                amplitude: 1.0,
                k1: 1e-10,
                k2: 1e-10,
                omega: 0.03,
                speed: 3e8,
                t_max: 100.0,
                r_min: 2.0,
                r_max: 140.0,
            }),
            2 => Ok(WaveParams {
                amplitude: 1.0,
                k1: 1e-3,
                k2: 1e-5,
                omega: 3000.0,
                speed: 3e8,
                t_max: 100.0,
                r_min: 2.0,
                r_max: 140.0,
            }),
            other => Err(Error::InvalidConfig(format!(
                "unknown scenario preset {other} (available: 1, 2)"
            ))),
        }
    }

    /// Complex spatial rate κ = k₂ − j k₁.
    pub fn kappa(&self) -> Complex64 {
        Complex64::new(self.k2, -self.k1)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("amplitude", self.amplitude),
            ("k1", self.k1),
            ("k2", self.k2),
            ("omega", self.omega),
            ("speed", self.speed),
            ("t_max", self.t_max),
            ("r_min", self.r_min),
            ("r_max", self.r_max),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "wave parameter {name} must be finite, got {value}"
                )));
            }
        }
        if self.amplitude == 0.0 {
            return Err(Error::InvalidConfig(
                "wave amplitude must be nonzero".into(),
            ));
        }
        if self.speed <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "wave speed must be positive, got {}",
                self.speed
            )));
        }
        if self.t_max <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.r_min >= self.r_max {
            return Err(Error::InvalidConfig(format!(
                "space box needs r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        Ok(())
    }
}

/// Where the real part is taken relative to powers and operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RealConvention {
    /// Re first: operators act on the real signal Re g.
    RealThenPower,
    /// Operators act on the complex signal; Re is taken at readout.
    PowerThenReal,
}

impl RealConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            RealConvention::RealThenPower => "real-then-power",
            RealConvention::PowerThenReal => "power-then-real",
        }
    }
}

impl fmt::Display for RealConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RealConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real-then-power" => Ok(RealConvention::RealThenPower),
            "power-then-real" => Ok(RealConvention::PowerThenReal),
            other => Err(Error::InvalidConfig(format!(
                "unknown real convention {other:?} (expected real-then-power or power-then-real)"
            ))),
        }
    }
}

/// Evaluates the full field g(t, r), enforcing the space-time box.
pub fn wave_eval(params: &WaveParams, t: f64, r: f64) -> Result<Complex64> {
    params.validate()?;
    if !(0.0..=params.t_max).contains(&t) {
        return Err(Error::OutsideDomain {
            point: t,
            min: 0.0,
            max: params.t_max,
        });
    }
    if !(params.r_min..=params.r_max).contains(&r) {
        return Err(Error::OutsideDomain {
            point: r,
            min: params.r_min,
            max: params.r_max,
        });
    }
    let j_omega_t = Complex64::new(0.0, params.omega * t);
    Ok(params.amplitude * (params.kappa() * r).exp() * j_omega_t.exp())
}

/// One-variable restriction of the field along an axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveSlice {
    pub params: WaveParams,
    pub axis: Axis,
    /// Frozen coordinate: r₀ for a time slice, t₀ for a space slice.
    pub anchor: f64,
    pub convention: RealConvention,
}

impl WaveSlice {
    /// Restriction t ↦ g(t, r₀); r₀ must lie in the space box.
    pub fn time_slice(params: WaveParams, r0: f64, convention: RealConvention) -> Result<WaveSlice> {
        params.validate()?;
        if !(params.r_min..=params.r_max).contains(&r0) {
            return Err(Error::OutsideDomain {
                point: r0,
                min: params.r_min,
                max: params.r_max,
            });
        }
        Ok(WaveSlice {
            params,
            axis: Axis::Time,
            anchor: r0,
            convention,
        })
    }

    /// Restriction r ↦ g(t₀, r); t₀ must lie in the time box.
    pub fn space_slice(
        params: WaveParams,
        t0: f64,
        convention: RealConvention,
    ) -> Result<WaveSlice> {
        params.validate()?;
        if !(0.0..=params.t_max).contains(&t0) {
            return Err(Error::OutsideDomain {
                point: t0,
                min: 0.0,
                max: params.t_max,
            });
        }
        Ok(WaveSlice {
            params,
            axis: Axis::Space,
            anchor: t0,
            convention,
        })
    }

    /// Per-derivative rate μ of the slice: jω on the time axis, κ on space.
    pub fn mu(&self) -> Complex64 {
        match self.axis {
            Axis::Time => Complex64::new(0.0, self.params.omega),
            Axis::Space => self.params.kappa(),
        }
    }

    /// Constant prefactor C with slice value C e^{μ x}.
    pub fn prefactor(&self) -> Complex64 {
        match self.axis {
            Axis::Time => self.params.amplitude * (self.params.kappa() * self.anchor).exp(),
            Axis::Space => {
                self.params.amplitude * Complex64::new(0.0, self.params.omega * self.anchor).exp()
            }
        }
    }

    /// Complex slice value C e^{μ x}, regardless of convention.
    pub fn complex_value(&self, point: f64) -> Complex64 {
        self.prefactor() * (self.mu() * point).exp()
    }

    /// Jet of the complex slice at `point`.
    pub fn complex_jet(&self, point: f64, order: usize) -> Result<Jet> {
        Ok(Jet::variable(point, order)?
            .scale(self.mu())
            .exp()
            .scale(self.prefactor()))
    }
}

impl SmoothFn for WaveSlice {
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        let jet = self.complex_jet(point, order)?;
        Ok(match self.convention {
            RealConvention::RealThenPower => jet.real_part(),
            RealConvention::PowerThenReal => jet,
        })
    }

    fn label(&self) -> String {
        format!(
            "wave-{}-slice(anchor={}, omega={}, k1={}, k2={}, conv={})",
            self.axis.as_str(),
            self.anchor,
            self.params.omega,
            self.params.k1,
            self.params.k2,
            self.convention.as_str()
        )
    }
}

/// Closed form ∂^i (g^n) = (n μ)^i g^n for the complex slice.
pub fn closed_form_derivative(slice: &WaveSlice, point: f64, i: usize, n: i32) -> Complex64 {
    let g = slice.complex_value(point);
    let rate = Complex64::new(n as f64, 0.0) * slice.mu();
    rate.powi(i as i32) * g.powi(n)
}

/// Side-by-side evaluation of ∂^i applied to the first plus-operator image.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PsiDerivativeComparison {
    pub i: usize,
    pub convention: RealConvention,
    /// Published closed-form reading: Re(2 i μ g²), linear in the order i.
    pub literal: f64,
    /// Closed form consistent with the convention in force.
    pub closed_form: f64,
    /// Jet evaluation of ∂^i Ψ₁⁺ under the convention.
    pub jet_value: f64,
    /// (2 Re μ)^i (Re μ) |g|²: the extra term the real-first convention picks
    /// up from |g|²; zero on the time axis where Re μ = 0.
    pub cross_term: f64,
    /// jet_value − closed_form; small when the identity holds.
    pub identity_residual: f64,
    /// jet_value − literal; reported for audit, not an error measure.
    pub literal_discrepancy: f64,
}

/// Compares ∂^i Ψ₁⁺ on a slice against its closed form and against the
/// published linear-in-i expression.
///
/// The convention-honoring closed forms are
///
/// ```text
///   power-then-real:  Re( (2μ)^i · 2μ · g² )
///   real-then-power:  Re( (2μ)^i ·  μ · g² ) + (2 Re μ)^i (Re μ) |g|²
/// ```
///
/// The published expression Re(2 i μ g²) is evaluated verbatim and only
/// reported; its gap to the jet value is `literal_discrepancy`.
pub fn psi_derivative_comparison(
    slice: &WaveSlice,
    point: f64,
    i: usize,
) -> Result<PsiDerivativeComparison> {
    let g = slice.complex_value(point);
    let g2 = g * g;
    let mu = slice.mu();
    let two_mu = 2.0 * mu;

    let literal = (Complex64::new(2.0 * i as f64, 0.0) * mu * g2).re;
    let cross_term = match slice.convention {
        RealConvention::RealThenPower => (2.0 * mu.re).powi(i as i32) * mu.re * g.norm_sqr(),
        RealConvention::PowerThenReal => 0.0,
    };
    let closed_form = match slice.convention {
        RealConvention::RealThenPower => (two_mu.powi(i as i32) * mu * g2).re + cross_term,
        RealConvention::PowerThenReal => (two_mu.powi(i as i32) * two_mu * g2).re,
    };

    let jet = slice.jet(point, i + 1)?;
    let jet_value = psi(Sign::Plus, 1, &jet)?.derivative_value(i)?.re;

    Ok(PsiDerivativeComparison {
        i,
        convention: slice.convention,
        literal,
        closed_form,
        jet_value,
        cross_term,
        identity_residual: jet_value - closed_form,
        literal_discrepancy: jet_value - literal,
    })
}

/// Normalized wave-operator residual of ∂^i_t (g^n) at one space-time point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DispersionReport {
    pub i: usize,
    pub n: i32,
    /// □ ∂^i_t g^n divided by n² (jωn)^i g^n, computed from jets.
    pub normalized: Complex64,
    /// κ² + ω²/c².
    pub analytic: Complex64,
    /// normalized − analytic.
    pub residual: Complex64,
    /// Published real reading k₁² − k₂² − ω²/c² (the negative of Re analytic).
    pub real_form: f64,
}

/// Computes the normalized dispersion residual via jets, using separability:
/// g^n(t, r) = S(t) R(r) / g^n(t₀, r₀) for the powered axis slices S, R.
///
/// The wave operator ∂²_r − c⁻²∂²_t applied to ∂^i_t g^n, normalized by
/// n² (jωn)^i g^n, is independent of both i and n and equals κ² + ω²/c².
pub fn dispersion_residual(
    params: &WaveParams,
    t0: f64,
    r0: f64,
    i: usize,
    n: i32,
) -> Result<DispersionReport> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dispersion residual needs a nonzero power".into(),
        ));
    }
    let time = WaveSlice::time_slice(*params, r0, RealConvention::PowerThenReal)?;
    let space = WaveSlice::space_slice(*params, t0, RealConvention::PowerThenReal)?;

    let s = time.complex_jet(t0, i + 2)?.powi(n)?;
    let r = space.complex_jet(r0, 2)?.powi(n)?;
    let u0 = s.value();
    if u0.norm() == 0.0 {
        return Err(Error::VanishingNormalizer(
            "powered slice vanishes at the anchor point".into(),
        ));
    }
    let s_i = s.derivative_value(i)?;
    let s_i2 = s.derivative_value(i + 2)?;
    let r_2 = r.derivative_value(2)?;
    if s_i.norm() == 0.0 {
        return Err(Error::VanishingNormalizer(format!(
            "time-derivative factor of order {i} vanishes"
        )));
    }

    let c2 = params.speed * params.speed;
    let num = s_i * r_2 / u0 - s_i2 / c2;
    let den = Complex64::new((n as f64) * (n as f64), 0.0) * s_i;
    let normalized = num / den;

    let analytic = params.kappa().powi(2)
        + Complex64::new((params.omega / params.speed).powi(2), 0.0);
    let real_form =
        params.k1 * params.k1 - params.k2 * params.k2 - (params.omega / params.speed).powi(2);

    Ok(DispersionReport {
        i,
        n,
        normalized,
        analytic,
        residual: normalized - analytic,
        real_form,
    })
}
