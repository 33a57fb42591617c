//! Smooth-function evaluators and the finite-difference cross-check oracle.
//!
//! A [`SmoothFn`] produces the jet of a univariate smooth function at any
//! requested point and order. Two-variable families enter this crate only as
//! slices with one coordinate fixed, so one trait over one variable covers
//! everything; evaluators must be pure (same point and order, same jet).
//!
//! [`fd_oracle`] estimates a k-th derivative by Richardson-extrapolated
//! central differences using only order-0 evaluations. It exists to
//! cross-check jet differentiation through a computation that shares no code
//! with the Taylor recurrences, and it reports an honest error bound
//! (extrapolation-table estimate plus an explicit roundoff term) alongside
//! the value.

use num_complex::Complex64;

use crate::error::Result;
use crate::jet::{binomial, Jet};

/// A univariate smooth function, evaluable as a jet at any point and order.
pub trait SmoothFn {
    /// Jet of the function at `point`, carrying orders 0..=`order`.
    fn jet(&self, point: f64, order: usize) -> Result<Jet>;

    /// Short human-readable name used in reports.
    fn label(&self) -> String;

    /// Function value at `point` (order-0 shortcut).
    fn value(&self, point: f64) -> Result<Complex64> {
        Ok(self.jet(point, 0)?.value())
    }
}

impl<T: SmoothFn + ?Sized> SmoothFn for &T {
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        (**self).jet(point, order)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

/// Polynomial with real coefficients in ascending power order.
#[derive(Debug, Clone)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }
}

impl SmoothFn for Polynomial {
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        let n = self.coeffs.len();
        if n == 0 {
            return Jet::from_real(point, &vec![0.0; order + 1]);
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        for k in 0..=order {
            // c_k = p^{(k)}(point)/k! = Σ_{m≥k} a_m · C(m, k) · point^{m−k}
            let mut s = 0.0f64;
            let mut powv = 1.0f64;
            for m in k..n {
                s += self.coeffs[m] * binomial(m, k) * powv;
                powv *= point;
            }
            coeffs.push(s);
        }
        Jet::from_real(point, &coeffs)
    }

    fn label(&self) -> String {
        format!("poly{:?}", self.coeffs)
    }
}

/// Exponential e^{a·t} with a real rate.
#[derive(Debug, Clone, Copy)]
pub struct Exponential {
    pub rate: f64,
}

impl SmoothFn for Exponential {
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        let arg = Jet::variable(point, order)?.scale(Complex64::new(self.rate, 0.0));
        Ok(arg.exp())
    }
    fn label(&self) -> String {
        format!("exp({}t)", self.rate)
    }
}

/// Harmonic a·cos(ω·t + φ).
#[derive(Debug, Clone, Copy)]
pub struct Harmonic {
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

impl SmoothFn for Harmonic {
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        let arg = Jet::variable(point, order)?
            .scale(Complex64::new(self.omega, 0.0))
            .add(&Jet::constant(
                Complex64::new(self.phase, 0.0),
                point,
                order,
            )?)?;
        Ok(arg.cos().scale(Complex64::new(self.amplitude, 0.0)))
    }
    fn label(&self) -> String {
        format!("{}cos({}t+{})", self.amplitude, self.omega, self.phase)
    }
}

/// Constant function.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    pub value: f64,
}

impl SmoothFn for Constant {
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        Jet::constant(Complex64::new(self.value, 0.0), point, order)
    }
    fn label(&self) -> String {
        format!("const({})", self.value)
    }
}

/// The zero function.
#[derive(Debug, Clone, Copy)]
pub struct ZeroFn;

impl SmoothFn for ZeroFn {
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        Jet::zero(point, order)
    }
    fn label(&self) -> String {
        "zero".into()
    }
}

/// Adapter wrapping a closure, for bespoke test functions.
pub struct ClosureFn<F>
where
    F: Fn(f64, usize) -> Result<Jet>,
{
    pub f: F,
    pub name: String,
}

impl<F> SmoothFn for ClosureFn<F>
where
    F: Fn(f64, usize) -> Result<Jet>,
{
    fn jet(&self, point: f64, order: usize) -> Result<Jet> {
        (self.f)(point, order)
    }
    fn label(&self) -> String {
        self.name.clone()
    }
}

/// Result of a finite-difference derivative estimate.
#[derive(Debug, Clone, Copy)]
pub struct FdEstimate {
    pub value: Complex64,
    /// Conservative absolute error bound: extrapolation-table estimate plus
    /// an explicit roundoff term.
    pub error_bound: f64,
}

/// Central-difference estimate of ∂^k f at t₀ with Richardson extrapolation.
///
/// The base step is h = ε_machine^{1/(k+2)}·max(1, |t₀|). The four table
/// levels evaluate the iterated central difference at 8h, 4h, 2h and h —
/// refining *towards* the base step rather than below it, because steps under
/// h sink beneath the roundoff floor ε·2^k/h^k for k ≥ 2. The returned bound
/// adds that floor to the usual last-column extrapolation differences, so
/// callers can trust `error_bound` even where cancellation dominates.
pub fn fd_oracle(f: &dyn SmoothFn, t0: f64, k: usize) -> Result<FdEstimate> {
    if k == 0 {
        let v = f.value(t0)?;
        return Ok(FdEstimate {
            value: v,
            error_bound: f64::EPSILON * v.norm().max(1.0),
        });
    }
    let eps = f64::EPSILON;
    let h_base = eps.powf(1.0 / (k as f64 + 2.0)) * t0.abs().max(1.0);
    const LEVELS: usize = 4;

    let mut max_sample = 0.0f64;
    let mut d = [Complex64::ZERO; LEVELS];
    for (m, dm) in d.iter_mut().enumerate() {
        // level m uses step h_base·2^(LEVELS-1-m): coarsest first
        let h = h_base * f64::powi(2.0, (LEVELS - 1 - m) as i32);
        let mut acc = Complex64::ZERO;
        for i in 0..=k {
            let offset = (k as f64 / 2.0 - i as f64) * h;
            let v = f.value(t0 + offset)?;
            max_sample = max_sample.max(v.norm());
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += v * (sign * binomial(k, i));
        }
        *dm = acc / h.powi(k as i32);
    }

    // Richardson table in powers of h²: R[m][j] eliminates h^{2j}.
    let mut table = [[Complex64::ZERO; LEVELS]; LEVELS];
    for m in 0..LEVELS {
        table[m][0] = d[m];
    }
    for j in 1..LEVELS {
        let denom = f64::powi(4.0, j as i32) - 1.0;
        for m in j..LEVELS {
            table[m][j] = (table[m][j - 1] * f64::powi(4.0, j as i32) - table[m - 1][j - 1]) / denom;
        }
    }
    let value = table[LEVELS - 1][LEVELS - 1];
    let table_est = (value - table[LEVELS - 1][LEVELS - 2])
        .norm()
        .max((value - table[LEVELS - 2][LEVELS - 2]).norm());
    let roundoff = 4.0 * eps * f64::powi(2.0, k as i32) * max_sample.max(1.0) / h_base.powi(k as i32);
    Ok(FdEstimate {
        value,
        error_bound: table_est + roundoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cubic_second_derivative_at_one() {
        // ∂²t³ = 6t → 6 at t₀ = 1; a cubic is exact for the stencil up to roundoff
        let p = Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]);
        let est = fd_oracle(&p, 1.0, 2).unwrap();
        assert!(
            (est.value.re - 6.0).abs() <= est.error_bound,
            "value {} bound {}",
            est.value.re,
            est.error_bound
        );
        assert!(est.error_bound < 1e-5);
        assert!(est.value.im.abs() < 1e-12);
    }

    #[test]
    fn slow_exponential_third_derivative_at_zero() {
        // ∂³e^{0.1t}(0) = 1e−3
        let f = Exponential { rate: 0.1 };
        let est = fd_oracle(&f, 0.0, 3).unwrap();
        assert!(
            (est.value.re - 1e-3).abs() <= est.error_bound,
            "value {} bound {}",
            est.value.re,
            est.error_bound
        );
        assert!(est.error_bound < 1e-4);
    }

    #[test]
    fn cosine_first_derivative_at_zero_is_zero() {
        let f = Harmonic {
            amplitude: 1.0,
            omega: 1.0,
            phase: 0.0,
        };
        let est = fd_oracle(&f, 0.0, 1).unwrap();
        assert!(est.value.re.abs() <= est.error_bound.max(1e-10));
    }

    #[test]
    fn oracle_agrees_with_jets_across_orders() {
        let funcs: Vec<Box<dyn SmoothFn>> = vec![
            Box::new(Polynomial::new(vec![1.0, -2.0, 0.5, 3.0, -0.25])),
            Box::new(Exponential { rate: 0.7 }),
            Box::new(Harmonic {
                amplitude: 2.0,
                omega: 1.3,
                phase: 0.4,
            }),
        ];
        for f in &funcs {
            for k in 0..=6usize {
                let t0 = 0.8;
                let jet_val = f.jet(t0, k).unwrap().derivative_value(k).unwrap();
                let est = fd_oracle(f.as_ref(), t0, k).unwrap();
                let diff = (jet_val - est.value).norm();
                let tol = (1e-6 * jet_val.norm()).max(est.error_bound);
                assert!(
                    diff <= tol,
                    "{} k={k}: jet {jet_val}, fd {}, diff {diff:e}, tol {tol:e}",
                    f.label(),
                    est.value
                );
            }
        }
    }

    #[test]
    fn polynomial_jet_is_exact_taylor_shift() {
        // (1 + 2t + 3t²) at t₀ = 2: value 17, slope 14, curvature coeff 3
        let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
        let j = p.jet(2.0, 3).unwrap();
        assert_relative_eq!(j.coeff(0).re, 17.0);
        assert_relative_eq!(j.coeff(1).re, 14.0);
        assert_relative_eq!(j.coeff(2).re, 3.0);
        assert_relative_eq!(j.coeff(3).re, 0.0);
    }
}
