//! Energy functionals E(f)(τ) = ∫_q^τ (Re f)² dt: adaptive quadrature,
//! Taylor continuation of the energy past the integration end, and the
//! classifier deciding when first-order knowledge of the integrand suffices.
//!
//! The continuation rests on ∂(f²) = Ψ_1^+(f): the increment
//! E(T+dt) − E(T) expands as
//!
//! ```text
//!   f²(T)·dt + Σ_{k≥2} ∂^{k−2}(Ψ_1^+ f + Ψ_1^− f)(T) · dt^k / k!
//! ```
//!
//! which is the primary evaluation path here; the plain squared-function
//! Taylor series Σ_k ∂^{k−1}(f²)(T)·dt^k/k! is retained term by term as a
//! cross-check. The two agree analytically, so their disagreement measures
//! evaluator error only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{factorial, MAX_ORDER};
use crate::operators::{psi, Sign};
use crate::smooth::SmoothFn;

/// Hard cap on interval subdivisions in one adaptive integration.
pub const PANEL_CAP: usize = 1 << 20;

/// Maximum subdivision depth (beyond this, panel width is meaningless).
const MAX_DEPTH: usize = 48;

/// Panels of the coarse pre-pass that sets the absolute tolerance scale.
const COARSE_PANELS: usize = 32;

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyEstimate {
    pub value: f64,
    pub interval: (f64, f64),
    /// Relative tolerance requested by the caller.
    pub rel_tol: f64,
    /// Absolute tolerance the adaptive pass actually worked against
    /// (rel_tol × coarse-estimate scale).
    pub abs_tol: f64,
    /// Accumulated extrapolation-correction magnitudes over accepted panels.
    pub abs_error_estimate: f64,
    /// Accepted leaf panels of the adaptive pass.
    pub panels: usize,
}

impl EnergyEstimate {
    /// Whether the accumulated error estimate met the tolerance it was
    /// integrated against.
    pub fn converged(&self) -> bool {
        self.abs_error_estimate <= self.abs_tol
    }
}

struct AdaptState<'a> {
    g: &'a dyn Fn(f64) -> Result<f64>,
    splits: usize,
    leaves: usize,
    err_acc: f64,
    rel_tol: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    state: &mut AdaptState,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (state.g)(lm)?;
    let frm = (state.g)(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let s2 = left + right;
    let diff = s2 - whole;
    if diff.abs() <= 15.0 * tol || depth == 0 {
        state.err_acc += diff.abs() / 15.0;
        state.leaves += 1;
        return Ok(s2 + diff / 15.0);
    }
    state.splits += 1;
    if state.splits > PANEL_CAP {
        return Err(Error::QuadratureBudget {
            panels: state.splits as u64,
            tol: state.rel_tol,
        });
    }
    let half = 0.5 * tol;
    let l = adapt(state, a, lm, m, fa, flm, fm, left, half, depth - 1)?;
    let r = adapt(state, m, rm, b, fm, frm, fb, right, half, depth - 1)?;
    Ok(l + r)
}

/// Integrates g(t)² over [a, b] adaptively to a relative tolerance.
///
/// A 32-panel composite pass first estimates the integral's magnitude; the
/// adaptive pass then works against abs_tol = rel_tol × that scale, halving
/// the budget at each subdivision and accepting a panel when the two-level
/// difference is within 15× its share (the accepted value keeps the
/// difference/15 extrapolation correction). Exceeding [`PANEL_CAP`]
/// subdivisions aborts with [`Error::QuadratureBudget`].
pub fn integrate_square(
    g: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<EnergyEstimate> {
    if !rel_tol.is_finite() || rel_tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "relative tolerance must be positive and finite, got {rel_tol}"
        )));
    }
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::InvalidInterval { start: a, end: b });
    }
    let sq = |t: f64| -> Result<f64> {
        let v = g(t)?;
        Ok(v * v)
    };
    if a == b {
        return Ok(EnergyEstimate {
            value: 0.0,
            interval: (a, b),
            rel_tol,
            abs_tol: rel_tol,
            abs_error_estimate: 0.0,
            panels: 0,
        });
    }

    // coarse composite pass: sets the absolute scale for the tolerance
    let h = (b - a) / COARSE_PANELS as f64;
    let mut coarse = 0.0f64;
    let mut prev = sq(a)?;
    for i in 0..COARSE_PANELS {
        let left = a + i as f64 * h;
        let mid = sq(left + 0.5 * h)?;
        let right_t = if i + 1 == COARSE_PANELS {
            b
        } else {
            left + h
        };
        let right = sq(right_t)?;
        coarse += simpson(left, right_t, prev, mid, right);
        prev = right;
    }
    let abs_tol = rel_tol * coarse.abs().max(1e-300);

    let fa = sq(a)?;
    let fb = sq(b)?;
    let m = 0.5 * (a + b);
    let fm = sq(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    let mut state = AdaptState {
        g: &sq,
        splits: 0,
        leaves: 0,
        err_acc: 0.0,
        rel_tol,
    };
    let value = adapt(&mut state, a, m, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)?;
    Ok(EnergyEstimate {
        value,
        interval: (a, b),
        rel_tol,
        abs_tol,
        abs_error_estimate: state.err_acc,
        panels: state.leaves,
    })
}

/// E(f)(τ) = ∫_q^τ (Re f)² dt.
pub fn energy(f: &dyn SmoothFn, q: f64, tau: f64, rel_tol: f64) -> Result<EnergyEstimate> {
    integrate_square(&|t| Ok(f.value(t)?.re), q, tau, rel_tol)
}

/// Explanation attached to every extrapolation report.
pub const EXTRAPOLATION_NOTE: &str =
    "tail evaluated through the operator-pair form; plain squared-derivative terms kept as cross-check";

/// Taylor continuation of the energy past the integration end.
#[derive(Debug, Clone, Serialize)]
pub struct ExtrapolationReport {
    /// E(f)(t_end) integrated from the start point.
    pub base: EnergyEstimate,
    /// base + operator-pair tail: the continued energy at t_end + dt.
    pub value: f64,
    /// Tail evaluated through the operator pair (primary).
    pub bracket_tail: f64,
    /// Tail from the plain squared-function series (cross-check).
    pub raw_tail: f64,
    /// Term k (k = 1..=terms) of the pair form: f²·dt, then
    /// ∂^{k−2}(Ψ_1^+ + Ψ_1^−)(f)·dt^k/k!.
    pub bracket_terms: Vec<f64>,
    /// Term k of the cross-check series ∂^{k-1}(f²)·dt^k/k!.
    pub raw_terms: Vec<f64>,
    pub dt: f64,
    pub terms: usize,
    pub note: &'static str,
}

/// Continues E(f) from t_end to t_end + dt with a `terms`-term series.
///
/// Derivatives are taken of the real part, matching the energy integrand.
pub fn taylor_energy_extrapolate(
    f: &dyn SmoothFn,
    start: f64,
    t_end: f64,
    dt: f64,
    terms: usize,
    rel_tol: f64,
) -> Result<ExtrapolationReport> {
    if terms == 0 {
        return Err(Error::InvalidArgument(
            "extrapolation needs at least one term".into(),
        ));
    }
    if terms > MAX_ORDER {
        return Err(Error::OrderBudget {
            needed: terms,
            max: MAX_ORDER,
        });
    }
    let base = energy(f, start, t_end, rel_tol)?;
    let jet = f.jet(t_end, terms)?.real_part();
    let sq = jet.mul(&jet)?;
    let plus = psi(Sign::Plus, 1, &jet)?;
    let minus = psi(Sign::Minus, 1, &jet)?;
    let pair = plus.add(&minus)?;
    let mut raw_terms = Vec::with_capacity(terms);
    let mut bracket_terms = Vec::with_capacity(terms);
    for k in 1..=terms {
        let weight = dt.powi(k as i32) / factorial(k);
        raw_terms.push(sq.derivative_value(k - 1)?.re * weight);
        let b = if k == 1 {
            sq.value().re * dt
        } else {
            pair.derivative_value(k - 2)?.re * weight
        };
        bracket_terms.push(b);
    }
    let raw_tail: f64 = raw_terms.iter().sum();
    let bracket_tail: f64 = bracket_terms.iter().sum();
    Ok(ExtrapolationReport {
        value: base.value + bracket_tail,
        base,
        bracket_tail,
        raw_tail,
        bracket_terms,
        raw_terms,
        dt,
        terms,
        note: EXTRAPOLATION_NOTE,
    })
}

/// Series terms examined by the duplication classifier.
const DUPLICATION_TERMS: usize = 6;

/// Whether the first-order energy increment is enough over one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DuplicationClass {
    /// Every higher series term is within ε of the first-order increment:
    /// carrying f² alone across the step is justified.
    FirstOrderSufficient,
    /// Some higher term exceeds the ε share: the operator chain must be
    /// carried along (the increment needs duplicated derivative data).
    DuplicationRequired,
}

/// Classifier verdict with the inspected term magnitudes.
#[derive(Debug, Clone, Serialize)]
pub struct DuplicationReport {
    pub class: DuplicationClass,
    /// |f²(T)|·dt.
    pub first_term: f64,
    /// |∂^{k−1}(Ψ_1^+ f)(T)|·dt^{k+1}/(k+1)! for k = 1..
    pub higher_terms: Vec<f64>,
    /// True when some higher term exceeds the first-order increment itself,
    /// not merely its ε share.
    pub tail_dominated: bool,
    pub epsilon: f64,
    pub dt: f64,
}

/// Compares higher energy-increment terms against the ε share of the
/// first-order term at t_end over a step dt.
pub fn duplication_classify(
    f: &dyn SmoothFn,
    t_end: f64,
    dt: f64,
    epsilon: f64,
) -> Result<DuplicationReport> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let jet = f.jet(t_end, DUPLICATION_TERMS)?.real_part();
    let sq = jet.mul(&jet)?;
    let plus = psi(Sign::Plus, 1, &jet)?;
    let first_term = sq.value().re.abs() * dt;
    let mut higher_terms = Vec::new();
    for k in 1..DUPLICATION_TERMS {
        let term = plus.derivative_value(k - 1)?.re.abs() * dt.powi(k as i32 + 1)
            / factorial(k + 1);
        higher_terms.push(term);
    }
    let budget = epsilon * first_term;
    let class = if higher_terms.iter().all(|&t| t <= budget) {
        DuplicationClass::FirstOrderSufficient
    } else {
        DuplicationClass::DuplicationRequired
    };
    let tail_dominated = higher_terms.iter().any(|&t| t > first_term);
    Ok(DuplicationReport {
        class,
        first_term,
        higher_terms,
        tail_dominated,
        epsilon,
        dt,
    })
}
