//! Conjugate energy-operator pairs and their iterated (bracket) forms.
//!
//! The pair acting on a smooth f is
//!
//! ```text
//!   Ψ_k^+(f) = ∂f · ∂^{k−1}f + f · ∂^k f
//!   Ψ_k^−(f) = ∂f · ∂^{k−1}f − f · ∂^k f
//! ```
//!
//! so Ψ_1^+(f) = 2·f·∂f = ∂(f²) and Ψ_1^−(f) vanishes identically, while
//! Ψ_2^− is the classical cross-energy tracker ((∂f)² − f·∂²f). Their sum is
//! 2·∂f·∂^{k−1}f and their difference 2·f·∂^k f for every k.
//!
//! The iterated ("bracket") operator of level p feeds the output of the
//! level-1 plus operator back into itself p times before the final k-indexed
//! application:
//!
//! ```text
//!   level 0:  Ψ_k^±(f)
//!   level p:  Ψ_k^±( level-(p−1) plus-chain of f )
//! ```
//!
//! Each level-1 application consumes one derivative order; a k-indexed
//! application consumes max(k, 1). For k = 0 the factor ∂^{−1}f is realized
//! as the antiderivative jet vanishing at the expansion point (see
//! [`psi`]); negative k is rejected.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::smooth::SmoothFn;

/// Which member of the conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Axis along which derivatives are taken; pure metadata for reports (the
/// jet machinery is axis-agnostic, slices carry the axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    Time,
    Space,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Time => "time",
            Axis::Space => "space",
        }
    }
}

/// Full description of one operator application.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorSpec {
    pub sign: Sign,
    /// Derivative index k ≥ 0 of the final application.
    pub k: i32,
    /// Iteration level p ≥ 0 (number of inner level-1 plus applications).
    pub level: u32,
    pub axis: Axis,
}

impl OperatorSpec {
    pub fn new(sign: Sign, k: i32, level: u32, axis: Axis) -> Self {
        OperatorSpec {
            sign,
            k,
            level,
            axis,
        }
    }

    /// Derivative orders one application of the final operator consumes.
    pub fn orders_consumed(&self) -> usize {
        (self.k.max(1)) as usize
    }
}

/// Applies Ψ_k^± to a jet. The output order is the input order minus
/// max(k, 1).
///
/// For k = 0 the ∂^{−1} factor uses the antiderivative that vanishes at the
/// expansion point, so the order-0 value of Ψ_0^±(f) is ±f(t₀)²; this
/// convention is the only deterministic choice available from local data and
/// is documented rather than configurable. k < 0 is rejected.
///
/// For k = 1 the minus member subtracts two bitwise-identical products
/// (jet multiplication is bitwise commutative), so Ψ_1^−(f) is exactly the
/// zero jet, coefficient by coefficient.
pub fn psi(sign: Sign, k: i32, f: &Jet) -> Result<Jet> {
    if k < 0 {
        return Err(Error::NegativeOperatorIndex(k));
    }
    let k = k as usize;
    let consumed = k.max(1);
    if f.order() < consumed {
        return Err(Error::InsufficientOrder {
            order: f.order(),
            consumed,
        });
    }
    let d1 = f.derivative(1)?;
    let dk_minus_1 = if k >= 1 {
        f.derivative(k - 1)?
    } else {
        f.antiderivative()?
    };
    let dk = f.derivative(k)?;
    let cross = d1.mul(&dk_minus_1)?;
    let direct = f.mul(&dk)?;
    match sign {
        Sign::Plus => cross.add(&direct),
        Sign::Minus => cross.sub(&direct),
    }
}

/// Evaluates the level-p bracket operator of f at `point`, producing a jet of
/// order `out_order`.
///
/// The evaluator is asked for exactly the orders the chain consumes:
/// `out_order + level + max(k, 1)`. Exceeding [`crate::jet::MAX_ORDER`] is an
/// error. Level 0 coincides with a single [`psi`] application.
pub fn bracket(spec: &OperatorSpec, f: &dyn SmoothFn, point: f64, out_order: usize) -> Result<Jet> {
    if spec.k < 0 {
        return Err(Error::NegativeOperatorIndex(spec.k));
    }
    let needed = out_order + spec.level as usize + spec.orders_consumed();
    if needed > crate::jet::MAX_ORDER {
        return Err(Error::OrderBudget {
            needed,
            max: crate::jet::MAX_ORDER,
        });
    }
    let mut jet = f.jet(point, needed)?;
    for _ in 0..spec.level {
        jet = psi(Sign::Plus, 1, &jet)?;
    }
    psi(spec.sign, spec.k, &jet)
}

/// One row of a kernel scan: the largest sampled magnitudes of Ψ_k^± over the
/// grid.
#[derive(Debug, Clone, Serialize)]
pub struct KernelRow {
    pub k: i32,
    pub sup_plus: f64,
    pub sup_minus: f64,
    pub plus_below_epsilon: bool,
    pub minus_below_epsilon: bool,
}

/// Result of probing |t^k·∂^j f| on a negative-argument grid.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub ok: bool,
    pub bound: f64,
    pub max_value: f64,
    /// (k, j, t) attaining the maximum, if any sample was taken.
    pub worst: Option<(usize, usize, f64)>,
    pub k_max: usize,
    pub j_max: usize,
    pub samples: usize,
}

/// Numerical membership summary for one function.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub label: String,
    pub epsilon: f64,
    pub k_min: i32,
    pub k_max: i32,
    pub rows: Vec<KernelRow>,
    /// True when every scanned kernel magnitude exceeds ε — the function sits
    /// outside every scanned operator kernel. The identically-vanishing
    /// minus member at k = 1 is exempt from the test.
    pub in_s_minus: bool,
    pub schwartz_decay: DecayReport,
    pub grid_len: usize,
}

/// Default bound for the decay probe: |t^k·∂^j f| must stay below this on the
/// sampled negative-argument grid.
pub const DECAY_DEFAULT_BOUND: f64 = 1e9;

/// Default (k, j) cap for the decay probe.
pub const DECAY_DEFAULT_KJ_MAX: usize = 3;

/// Samples |t^k·∂^j f(t)| over a grid (negative arguments expected) and
/// compares against `bound`.
///
/// This is a finite-sample shadow of a decay condition, not a proof: a
/// function with a huge-but-finite supremum can fail and a divergent one
/// sampled too near zero can pass. Pick the grid to cover the scales of
/// interest; [`default_decay_grid`] reaches −1e4 so that constants fail for
/// k ≥ 1 under the default bound while decaying exponentials pass.
pub fn schwartz_decay_check(
    f: &dyn SmoothFn,
    grid: &[f64],
    k_max: usize,
    j_max: usize,
    bound: f64,
) -> Result<DecayReport> {
    let mut max_value = 0.0f64;
    let mut worst = None;
    let mut samples = 0usize;
    for &t in grid {
        let jet = f.jet(t, j_max)?;
        for j in 0..=j_max {
            let dj = jet.derivative_value(j)?.norm();
            let mut tk = 1.0f64;
            for k in 0..=k_max {
                let v = tk * dj;
                if v > max_value {
                    max_value = v;
                    worst = Some((k, j, t));
                }
                samples += 1;
                tk *= t.abs();
            }
        }
    }
    Ok(DecayReport {
        ok: max_value <= bound,
        bound,
        max_value,
        worst,
        k_max,
        j_max,
        samples,
    })
}

/// Geometric grid of 26 negative arguments from −0.1 down to −1e4.
pub fn default_decay_grid() -> Vec<f64> {
    let n = 26usize;
    (0..n)
        .map(|i| {
            let expo = -1.0 + 5.0 * i as f64 / (n - 1) as f64;
            -(10.0f64.powf(expo))
        })
        .collect()
}

/// Scans the conjugate-pair kernels of f over `k_range` on a sample grid.
///
/// For each k the report records the largest sampled |Ψ_k^±(f)| (order-0
/// values at each grid point). `in_s_minus` is true when every scanned
/// magnitude exceeds ε, with the structurally-zero minus member at k = 1
/// exempted. The Schwartz-decay field is filled by probing the scan grid
/// mirrored to negative arguments with the default (k, j) cap and bound; use
/// [`schwartz_decay_check`] directly for full control of that probe.
pub fn kernel_scan(
    f: &dyn SmoothFn,
    k_range: std::ops::RangeInclusive<i32>,
    grid: &[f64],
    epsilon: f64,
) -> Result<MembershipReport> {
    let (k_min, k_max) = (*k_range.start(), *k_range.end());
    if k_min < 0 {
        return Err(Error::NegativeOperatorIndex(k_min));
    }
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty kernel-scan grid".into()));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let mut rows = Vec::new();
    for k in k_range.clone() {
        let consumed = (k.max(1)) as usize;
        let mut sup_plus = 0.0f64;
        let mut sup_minus = 0.0f64;
        for &t in grid {
            let jet = f.jet(t, consumed)?;
            sup_plus = sup_plus.max(psi(Sign::Plus, k, &jet)?.value().norm());
            sup_minus = sup_minus.max(psi(Sign::Minus, k, &jet)?.value().norm());
        }
        rows.push(KernelRow {
            k,
            sup_plus,
            sup_minus,
            plus_below_epsilon: sup_plus < epsilon,
            minus_below_epsilon: sup_minus < epsilon,
        });
    }
    let in_s_minus = rows.iter().all(|r| {
        let plus_ok = r.sup_plus > epsilon;
        let minus_ok = r.k == 1 || r.sup_minus > epsilon;
        plus_ok && minus_ok
    });
    let mirrored: Vec<f64> = grid
        .iter()
        .map(|t| -t.abs())
        .filter(|t| *t < 0.0)
        .collect();
    let decay_grid = if mirrored.is_empty() {
        default_decay_grid()
    } else {
        mirrored
    };
    let schwartz_decay = schwartz_decay_check(
        f,
        &decay_grid,
        DECAY_DEFAULT_KJ_MAX,
        DECAY_DEFAULT_KJ_MAX,
        DECAY_DEFAULT_BOUND,
    )?;
    Ok(MembershipReport {
        label: f.label(),
        epsilon,
        k_min,
        k_max,
        rows,
        in_s_minus,
        schwartz_decay,
        grid_len: grid.len(),
    })
}

/// Order-0 value of ∂^i applied to the level-p plus bracket of f at `point`.
/// Chains used by the scanner: the jet order consumed is i + p + 1.
pub fn derived_bracket_value(
    f: &dyn SmoothFn,
    point: f64,
    level: u32,
    i: usize,
    axis: Axis,
) -> Result<Complex64> {
    let spec = OperatorSpec::new(Sign::Plus, 1, level, axis);
    let jet = bracket(&spec, f, point, i)?;
    Ok(jet.derivative(i)?.value())
}
