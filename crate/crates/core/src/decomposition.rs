//! Decomposition of derivatives of integer powers through the level-1 plus
//! operator, coefficient recovery for the conjugate pair, and the
//! low-power (n ≤ 1) routes.
//!
//! The central identity: for n ≥ 2 and v ≥ 1,
//!
//! ```text
//!   ∂^v(f^n) = (n/2) Σ_{j=0}^{v−1} C(v−1, j) · ∂^{v−1−j}(f^{n−2}) · ∂^j(Ψ_1^+ f)
//! ```
//!
//! which follows from ∂(f^n) = (n/2)·f^{n−2}·Ψ_1^+(f) and the product rule.
//! Every derivative of f^n is therefore a finite combination of derivatives
//! of the level-1 plus operator weighted by lower powers — the structural
//! fact the energy-space scanner exploits.
//!
//! Powers outside the n ≥ 2 range route through auxiliary factorizations
//! (f = f³·f^{−2}, f^{−1} = f²·f^{−3}, and reciprocal jets for n ≤ −2),
//! each of whose factors is again reachable by the identity above.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{binomial, Jet, MAX_ORDER};
use crate::operators::{bracket, psi, Axis, OperatorSpec, Sign};
use crate::smooth::SmoothFn;

/// One weighted term of a realized decomposition plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanTerm {
    /// Scalar weight α·C(v−1, j).
    pub weight: f64,
    /// Derivative order applied to the residual power f^{n−l}.
    pub power_derivative: usize,
    /// Derivative order applied to Ψ_1^+(f).
    pub operator_derivative: usize,
}

/// Symbolic description of the identity for one (v, n) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionPlan {
    pub n: i32,
    pub v: usize,
    /// Leading scalar α = n/2.
    pub alpha: f64,
    /// Power consumed by one operator application (always 2 here: Ψ_1^+
    /// carries f·∂f).
    pub l: u32,
    pub terms: Vec<PlanTerm>,
}

impl DecompositionPlan {
    /// Builds the term list for ∂^v(f^n), n ≥ 2, v ≥ 1.
    pub fn realized(v: usize, n: i32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "power-chain decomposition needs n >= 2, got {n}"
            )));
        }
        if v == 0 {
            return Err(Error::InvalidArgument(
                "decomposition describes derivatives; v must be >= 1".into(),
            ));
        }
        if v > MAX_ORDER {
            return Err(Error::OrderBudget {
                needed: v,
                max: MAX_ORDER,
            });
        }
        let alpha = n as f64 / 2.0;
        let terms = (0..v)
            .map(|j| PlanTerm {
                weight: alpha * binomial(v - 1, j),
                power_derivative: v - 1 - j,
                operator_derivative: j,
            })
            .collect();
        Ok(DecompositionPlan {
            n,
            v,
            alpha,
            l: 2,
            terms,
        })
    }

    /// One-line rendering of the plan, e.g. for report output.
    pub fn describe(&self) -> String {
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                format!(
                    "{:.1}*D^{}(f^{})*D^{}(P1+?f)",
                    t.weight,
                    t.power_derivative,
                    self.n - 2,
                    t.operator_derivative
                )
                .replace("P1+?f", "Psi1+[f]")
            })
            .collect();
        format!("D^{}(f^{}) = {}", self.v, self.n, body.join(" + "))
    }
}

/// Two evaluations of the same quantity and their disagreement.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IdentityCheck {
    pub direct: Complex64,
    pub decomposed: Complex64,
    pub residual: f64,
    /// Residual over max(|direct|, 1e−300).
    pub relative_residual: f64,
}

impl IdentityCheck {
    fn from_pair(direct: Complex64, decomposed: Complex64) -> Self {
        let residual = (direct - decomposed).norm();
        IdentityCheck {
            direct,
            decomposed,
            residual,
            relative_residual: residual / direct.norm().max(1e-300),
        }
    }
}

/// Evaluates both sides of the power-derivative identity at one point.
///
/// The left side is ∂^v(f^n) computed directly from the power jet; the right
/// side is the realized plan of [`DecompositionPlan::realized`]. Both use a
/// single jet of f of order v, so the comparison isolates the algebraic
/// rearrangement rather than evaluator differences.
pub fn leibniz_expand(f: &dyn SmoothFn, n: i32, v: usize, point: f64) -> Result<IdentityCheck> {
    let plan = DecompositionPlan::realized(v, n)?;
    let jet = f.jet(point, v)?;
    let direct = jet.powi(n)?.derivative_value(v)?;
    let residual_power = jet.powi(n - 2)?;
    let op = psi(Sign::Plus, 1, &jet)?;
    let mut decomposed = Complex64::ZERO;
    for term in &plan.terms {
        decomposed += term.weight
            * residual_power.derivative_value(term.power_derivative)?
            * op.derivative_value(term.operator_derivative)?;
    }
    Ok(IdentityCheck::from_pair(direct, decomposed))
}

/// v = 1 specialization: ∂(f^n) vs (n/2)·f^{n−2}·Ψ_1^+(f).
pub fn first_identity_residual(f: &dyn SmoothFn, n: i32, point: f64) -> Result<IdentityCheck> {
    leibniz_expand(f, n, 1, point)
}

/// Coefficients (a, b) recovered from samples of S ≈ a·Ψ_k^+(f) + b·Ψ_k^−(f).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RecoveredPair {
    pub plus_coeff: f64,
    pub minus_coeff: f64,
    /// Relative l² misfit of the recovered combination over the samples
    /// (absolute when the target samples all vanish).
    pub residual: f64,
    /// True when one member vanished on every sample and the other carried
    /// the whole fit (e.g. k = 1, where the minus member is identically 0).
    pub rank_deficient: bool,
    pub samples: usize,
}

/// Least-squares recovery of the pair coefficients from point samples.
///
/// Solves the 2×2 real normal equations built from complex samples of the
/// target and of both members at `points`. When exactly one member vanishes
/// on all samples the fit drops to rank 1 and the vanishing member's
/// coefficient is pinned to 0; when both vanish, or the sampled members are
/// numerically collinear, no unique combination exists and
/// [`Error::SingularSystem`] is returned.
pub fn recover_pair_coefficients(
    target: &dyn SmoothFn,
    f: &dyn SmoothFn,
    k: i32,
    points: &[f64],
) -> Result<RecoveredPair> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "coefficient recovery needs at least 2 sample points".into(),
        ));
    }
    if k < 0 {
        return Err(Error::NegativeOperatorIndex(k));
    }
    let order = (k.max(1)) as usize;
    let mut p = Vec::with_capacity(points.len());
    let mut m = Vec::with_capacity(points.len());
    let mut s = Vec::with_capacity(points.len());
    for &t in points {
        let jet = f.jet(t, order)?;
        p.push(psi(Sign::Plus, k, &jet)?.value());
        m.push(psi(Sign::Minus, k, &jet)?.value());
        s.push(target.value(t)?);
    }
    let app: f64 = p.iter().map(|z| z.norm_sqr()).sum();
    let amm: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let apm: f64 = p.iter().zip(&m).map(|(a, b)| (a.conj() * b).re).sum();
    let bp: f64 = p.iter().zip(&s).map(|(a, b)| (a.conj() * b).re).sum();
    let bm: f64 = m.iter().zip(&s).map(|(a, b)| (a.conj() * b).re).sum();

    let scale = app.max(amm);
    if scale == 0.0 {
        return Err(Error::SingularSystem(
            "both pair members vanish on every sample".into(),
        ));
    }
    let tiny = 1e-28 * scale;
    let (a, b, rank_deficient) = if amm <= tiny {
        (bp / app, 0.0, true)
    } else if app <= tiny {
        (0.0, bm / amm, true)
    } else {
        let det = app * amm - apm * apm;
        if det <= 1e-12 * app * amm {
            return Err(Error::SingularSystem(
                "sampled pair members are numerically collinear".into(),
            ));
        }
        ((amm * bp - apm * bm) / det, (app * bm - apm * bp) / det, false)
    };

    let mut misfit = 0.0f64;
    let mut target_norm = 0.0f64;
    for i in 0..points.len() {
        misfit += (s[i] - a * p[i] - b * m[i]).norm_sqr();
        target_norm += s[i].norm_sqr();
    }
    let misfit = misfit.sqrt();
    let residual = if target_norm > 0.0 {
        misfit / target_norm.sqrt()
    } else {
        misfit
    };
    Ok(RecoveredPair {
        plus_coeff: a,
        minus_coeff: b,
        residual,
        rank_deficient,
        samples: points.len(),
    })
}

/// Which factorization evaluated a low-power derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PowerRoute {
    /// n = 1 via f = f³ · f^{−2}.
    CubeOverSquare,
    /// n = −1 via f^{−1} = f² · f^{−3}.
    SquareOverCube,
    /// n ≤ −2 via h = 1/f and the main chain on h^{|n|}.
    ReciprocalChain,
    /// n = 0: the constant function 1.
    ConstantPower,
}

/// A low-power decomposition evaluated against the direct power jet.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerDecomposition {
    pub n: i32,
    pub v: usize,
    pub point: f64,
    /// Generalization level of the base object B = chain_level(f).
    pub level: u32,
    pub route: PowerRoute,
    pub check: IdentityCheck,
}

/// Floor below which |B(point)| makes reciprocal factors meaningless.
pub const DEFAULT_POWER_FLOOR: f64 = 1e-12;

/// Evaluates ∂^v(B^n) for n ≤ 1, where B is the level-`level` plus-chain
/// image of f, through a factorization whose pieces the main chain identity
/// reaches, and compares against the direct power jet of B.
///
/// All routes except n = 0 divide by B, so |B(point)| must stay above
/// `floor` ([`Error::VanishingBracket`] otherwise). Powers n ≥ 2 belong to
/// [`leibniz_expand`] and are rejected here.
pub fn nonpositive_power_decompose(
    f: &dyn SmoothFn,
    n: i32,
    v: usize,
    point: f64,
    level: u32,
    floor: f64,
) -> Result<PowerDecomposition> {
    if n >= 2 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is covered by the main chain identity; this routine handles n <= 1"
        )));
    }
    let spec = OperatorSpec::new(Sign::Plus, 1, level, Axis::Time);
    let jet = bracket(&spec, f, point, v)?;
    if n != 0 {
        let fval = jet.value().norm();
        if fval < floor {
            return Err(Error::VanishingBracket {
                value: fval,
                floor,
            });
        }
    }
    let direct = jet.powi(n)?.derivative_value(v)?;
    let (route, decomposed) = match n {
        0 => (
            PowerRoute::ConstantPower,
            if v == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::ZERO
            },
        ),
        1 => (
            PowerRoute::CubeOverSquare,
            product_rule_value(&jet.powi(3)?, &jet.powi(-2)?, v)?,
        ),
        -1 => (
            PowerRoute::SquareOverCube,
            product_rule_value(&jet.powi(2)?, &jet.powi(-3)?, v)?,
        ),
        _ => {
            // n <= -2: run the main chain on h = 1/f with power |n| >= 2.
            let h = jet.powi(-1)?;
            let value = if v == 0 {
                h.powi(-n)?.value()
            } else {
                let plan = DecompositionPlan::realized(v, -n)?;
                let residual_power = h.powi(-n - 2)?;
                let op = psi(Sign::Plus, 1, &h)?;
                let mut acc = Complex64::ZERO;
                for term in &plan.terms {
                    acc += term.weight
                        * residual_power.derivative_value(term.power_derivative)?
                        * op.derivative_value(term.operator_derivative)?;
                }
                acc
            };
            (PowerRoute::ReciprocalChain, value)
        }
    };
    Ok(PowerDecomposition {
        n,
        v,
        point,
        level,
        route,
        check: IdentityCheck::from_pair(direct, decomposed),
    })
}

/// Σ_j C(v, j) · ∂^j A · ∂^{v−j} B evaluated at the base point.
fn product_rule_value(a: &Jet, b: &Jet, v: usize) -> Result<Complex64> {
    let mut acc = Complex64::ZERO;
    for j in 0..=v {
        acc += binomial(v, j) * a.derivative_value(j)? * b.derivative_value(v - j)?;
    }
    Ok(acc)
}
