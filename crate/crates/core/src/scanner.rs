//! Energy-space emptiness scanning.
//!
//! For a smooth signal f on an interval, the scan tabulates the energies
//!
//! ```text
//!   E(p, i) = ∫ ( ∂^i  chain_p(f) )²      chain_p = (p+1)-fold Ψ_1^+
//! ```
//!
//! for p = 0..=p_max and i = 0..=i_max, flags which cells fall below the
//! emptiness threshold ε, and derives:
//!
//! * per-level cutoffs i₁ — the smallest index from which every later energy
//!   in the row stays below ε (the tail test, not a single crossing);
//! * the N-family suprema m_i = max_n E(∂^i f^n) and their cap M;
//! * measured geometric decay ratios over an index stride of 4 — the stride
//!   absorbs the π/2 phase the integration window picks up per derivative
//!   order, so the measured per-step ratio isolates the frequency factor;
//! * a level comparison (level 1 vs level 0) with both the absolute ε rule
//!   and a relative rule E₁(i) ≤ θ·E₀(i), since absolute level-1 energies
//!   need not clear ε even when they are negligible next to level 0.
//!
//! All evaluation is sequential and in (p, i) lexicographic order, so
//! reports are byte-deterministic for identical inputs.

use serde::Serialize;

use crate::energy::integrate_square;
use crate::error::{Error, Result};
use crate::jet::MAX_ORDER;
use crate::operators::{psi, Axis, Sign};
use crate::smooth::SmoothFn;

/// Scan-grid configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Largest derivative order scanned per level.
    pub i_max: usize,
    /// Largest generalization level (level p applies the plus operator
    /// p + 1 times).
    pub p_max: u32,
    /// Powers entering the m_i suprema (all ≥ 1).
    pub n_list: Vec<i32>,
    /// Emptiness threshold: energies below it count as zero.
    pub epsilon: f64,
    /// Relative quadrature tolerance per cell.
    pub quad_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            i_max: 5,
            p_max: 1,
            n_list: vec![2],
            epsilon: 1e-10,
            quad_tol: 1e-9,
        }
    }
}

impl ScanOptions {
    pub fn validate(&self) -> Result<()> {
        if self.i_max == 0 {
            return Err(Error::InvalidConfig("i_max must be at least 1".into()));
        }
        let budget = self.i_max * (self.p_max as usize + 1) + 2;
        if budget > MAX_ORDER {
            return Err(Error::InvalidConfig(format!(
                "scan grid needs order budget {budget}, cap is {MAX_ORDER}; lower i_max or p_max"
            )));
        }
        if self.n_list.is_empty() {
            return Err(Error::InvalidConfig("n_list must not be empty".into()));
        }
        if let Some(&bad) = self.n_list.iter().find(|&&n| n < 1) {
            return Err(Error::InvalidConfig(format!(
                "n_list entries must be >= 1, got {bad}"
            )));
        }
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if !self.quad_tol.is_finite() || self.quad_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "quad_tol must be positive and finite, got {}",
                self.quad_tol
            )));
        }
        Ok(())
    }
}

/// One (level, order) cell of the scan table.
#[derive(Debug, Clone, Serialize)]
pub struct ScanCell {
    pub p: u32,
    pub i: usize,
    /// E(∂^i chain_p(f)) over the scan interval; 0 when `error` is set.
    pub energy: f64,
    pub quad_error: f64,
    pub panels: usize,
    pub below_epsilon: bool,
    /// max over the n list of E(∂^i (chain_p(f))^n).
    pub m_value: f64,
    /// Quadrature failure for this cell, if any; the scan continues.
    pub error: Option<String>,
}

/// N-family supremum row: m_i = max_n E(∂^i f^n).
#[derive(Debug, Clone, Serialize)]
pub struct MRow {
    pub i: usize,
    pub m_i: f64,
    /// (n, energy) pairs behind the max.
    pub by_n: Vec<(i32, f64)>,
    pub error: Option<String>,
}

/// Tail cutoff for one level row.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CutoffRow {
    pub p: u32,
    /// Smallest i₀ with every cell at i ≥ i₀ below ε; None when even the
    /// last cell is not.
    pub cutoff: Option<usize>,
}

/// Measured geometric decay over a stride-4 window of one level row.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrideRatio {
    pub p: u32,
    pub i_start: usize,
    pub stride: usize,
    /// (E(i_start + stride) / E(i_start))^(1/stride); None when the row is
    /// too short, a cell failed, or the base energy vanishes.
    pub per_step_ratio: Option<f64>,
}

/// Full scan outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub label: String,
    pub axis: Axis,
    pub interval: (f64, f64),
    pub options: ScanOptions,
    /// Cells in (p, i) lexicographic order, i from 0 for every level.
    pub cells: Vec<ScanCell>,
    pub m_rows: Vec<MRow>,
    /// M = max of the m_i.
    pub m_cap: f64,
    pub cutoffs: Vec<CutoffRow>,
    /// Levels whose entire row is exactly zero (no errors).
    pub empty_levels: Vec<u32>,
    pub stride_ratios: Vec<StrideRatio>,
}

impl ScanReport {
    pub fn cell(&self, p: u32, i: usize) -> Option<&ScanCell> {
        self.cells.iter().find(|c| c.p == p && c.i == i)
    }

    pub fn cutoff(&self, p: u32) -> Option<usize> {
        self.cutoffs.iter().find(|c| c.p == p).and_then(|c| c.cutoff)
    }
}

/// Jet of the (p+1)-fold plus chain of f at `point`, with `out_order`
/// retained derivative orders.
fn chain_jet(
    f: &dyn SmoothFn,
    point: f64,
    p: u32,
    out_order: usize,
) -> Result<crate::jet::Jet> {
    let mut jet = f.jet(point, out_order + p as usize + 1)?;
    for _ in 0..=p {
        jet = psi(Sign::Plus, 1, &jet)?;
    }
    Ok(jet)
}

fn run_cell(
    f: &dyn SmoothFn,
    interval: (f64, f64),
    p: u32,
    i: usize,
    opts: &ScanOptions,
) -> ScanCell {
    let energy_est = integrate_square(
        &|t| Ok(chain_jet(f, t, p, i)?.derivative_value(i)?.re),
        interval.0,
        interval.1,
        opts.quad_tol,
    );
    let (energy, quad_error, panels, mut error) = match energy_est {
        Ok(est) => (est.value, est.abs_error_estimate, est.panels, None),
        Err(e) => (0.0, 0.0, 0, Some(e.to_string())),
    };
    let mut m_value = 0.0f64;
    if error.is_none() {
        for &n in &opts.n_list {
            let est = integrate_square(
                &|t| {
                    Ok(chain_jet(f, t, p, i)?
                        .powi(n)?
                        .derivative_value(i)?
                        .re)
                },
                interval.0,
                interval.1,
                opts.quad_tol,
            );
            match est {
                Ok(est) => m_value = m_value.max(est.value),
                Err(e) => {
                    error = Some(format!("power n={n}: {e}"));
                    break;
                }
            }
        }
    }
    ScanCell {
        p,
        i,
        energy,
        quad_error,
        panels,
        below_epsilon: error.is_none() && energy < opts.epsilon,
        m_value,
        error,
    }
}

/// Runs the energy-space scan of f over the interval.
///
/// Per-cell quadrature failures are recorded in the cell and the scan
/// continues; configuration problems abort up front.
pub fn scan_energy_spaces(
    f: &dyn SmoothFn,
    interval: (f64, f64),
    axis: Axis,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    opts.validate()?;
    let (a, b) = interval;
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::InvalidInterval { start: a, end: b });
    }

    let mut cells = Vec::with_capacity((opts.p_max as usize + 1) * (opts.i_max + 1));
    for p in 0..=opts.p_max {
        for i in 0..=opts.i_max {
            cells.push(run_cell(f, interval, p, i, opts));
        }
    }

    let mut m_rows = Vec::with_capacity(opts.i_max + 1);
    for i in 0..=opts.i_max {
        let mut by_n = Vec::with_capacity(opts.n_list.len());
        let mut m_i = 0.0f64;
        let mut error = None;
        for &n in &opts.n_list {
            let est = integrate_square(
                &|t| Ok(f.jet(t, i)?.powi(n)?.derivative_value(i)?.re),
                a,
                b,
                opts.quad_tol,
            );
            match est {
                Ok(est) => {
                    by_n.push((n, est.value));
                    m_i = m_i.max(est.value);
                }
                Err(e) => {
                    error = Some(format!("power n={n}: {e}"));
                    break;
                }
            }
        }
        m_rows.push(MRow {
            i,
            m_i,
            by_n,
            error,
        });
    }
    let m_cap = m_rows
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| r.m_i)
        .fold(0.0f64, f64::max);

    let mut cutoffs = Vec::new();
    let mut empty_levels = Vec::new();
    let mut stride_ratios = Vec::new();
    for p in 0..=opts.p_max {
        let row: Vec<&ScanCell> = cells.iter().filter(|c| c.p == p).collect();
        // tail cutoff: smallest i0 with every later cell below epsilon
        let mut cutoff = None;
        for i0 in (0..=opts.i_max).rev() {
            if row[i0].below_epsilon {
                cutoff = Some(i0);
            } else {
                break;
            }
        }
        cutoffs.push(CutoffRow { p, cutoff });

        if row
            .iter()
            .all(|c| c.error.is_none() && c.energy == 0.0)
        {
            empty_levels.push(p);
        }

        let i_start = 1usize;
        let stride = if opts.i_max >= i_start {
            4 * ((opts.i_max - i_start) / 4)
        } else {
            0
        };
        let per_step_ratio = if stride >= 4 {
            let base = &row[i_start];
            let far = &row[i_start + stride];
            if base.error.is_none() && far.error.is_none() && base.energy > 0.0 {
                Some((far.energy / base.energy).powf(1.0 / stride as f64))
            } else {
                None
            }
        } else {
            None
        };
        stride_ratios.push(StrideRatio {
            p,
            i_start,
            stride,
            per_step_ratio,
        });
    }

    Ok(ScanReport {
        label: f.label(),
        axis,
        interval,
        options: opts.clone(),
        cells,
        m_rows,
        m_cap,
        cutoffs,
        empty_levels,
        stride_ratios,
    })
}

/// One partial-sum row of the triangle-inequality check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MinkowskiRow {
    pub k_upper: usize,
    /// √E(Σ_{i≤K} ∂^i f^n).
    pub lhs: f64,
    /// Σ_{i≤K} √E(∂^i f^n).
    pub rhs: f64,
    /// rhs − lhs; nonnegative up to quadrature error.
    pub margin: f64,
}

/// Triangle-inequality audit for the partial sums of derivative families.
#[derive(Debug, Clone, Serialize)]
pub struct MinkowskiReport {
    pub n: i32,
    pub interval: (f64, f64),
    pub rows: Vec<MinkowskiRow>,
}

/// Verifies √E(Σ_{i≤K} ∂^i f^n) ≤ Σ_{i≤K} √E(∂^i f^n) for K = 0..=i_max.
///
/// Both sides run through the identical integration path, so the K = 0 row
/// is an exact tie (margin 0.0 bitwise) and later margins reflect genuine
/// cross-term cancellation plus quadrature error only.
pub fn minkowski_check(
    f: &dyn SmoothFn,
    interval: (f64, f64),
    n: i32,
    i_max: usize,
    quad_tol: f64,
) -> Result<MinkowskiReport> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "power must be >= 1, got {n}"
        )));
    }
    if i_max > MAX_ORDER {
        return Err(Error::OrderBudget {
            needed: i_max,
            max: MAX_ORDER,
        });
    }
    let (a, b) = interval;
    let mut member = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let est = integrate_square(
            &|t| Ok(f.jet(t, i)?.powi(n)?.derivative_value(i)?.re),
            a,
            b,
            quad_tol,
        )?;
        member.push(est.value.max(0.0).sqrt());
    }
    let mut rows = Vec::with_capacity(i_max + 1);
    for k_upper in 0..=i_max {
        let est = integrate_square(
            &|t| {
                let jet = f.jet(t, k_upper)?.powi(n)?;
                let mut acc = 0.0f64;
                for i in 0..=k_upper {
                    acc += jet.derivative_value(i)?.re;
                }
                Ok(acc)
            },
            a,
            b,
            quad_tol,
        )?;
        let lhs = est.value.max(0.0).sqrt();
        let rhs: f64 = member[..=k_upper].iter().sum();
        rows.push(MinkowskiRow {
            k_upper,
            lhs,
            rhs,
            margin: rhs - lhs,
        });
    }
    Ok(MinkowskiReport {
        n,
        interval,
        rows,
    })
}

/// Default relative-comparison threshold for the level comparison.
pub const LEVEL_RATIO_THRESHOLD: f64 = 1e-2;

/// One order of the level-1 vs level-0 comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelRow {
    pub i: usize,
    pub level0: f64,
    pub level1: f64,
    /// level1 / level0; None when the denominator is below the machine
    /// floor.
    pub ratio: Option<f64>,
    /// level1 ≤ θ·level0, or level1 < ε.
    pub satisfied: bool,
}

/// Level-1 emptiness assessment relative to level 0.
#[derive(Debug, Clone, Serialize)]
pub struct LevelComparison {
    pub theta: f64,
    pub epsilon: f64,
    pub rows: Vec<LevelRow>,
    /// Smallest i₀ from which every row satisfies the relative-or-ε rule.
    pub relative_cutoff: Option<usize>,
    /// Smallest i₀ from which every level-1 energy is below ε outright.
    pub absolute_cutoff: Option<usize>,
    /// True when the relative cutoff is 0: level 1 is negligible at every
    /// order, the "reduced to zero from the start" reading.
    pub consistent_with_empty_claim: bool,
}

/// Compares the level-1 row of a scan against its level-0 row.
///
/// The absolute ε rule alone cannot certify level-1 emptiness when level-0
/// energies are themselves small; the relative rule (level1 ≤ θ·level0)
/// captures "negligible next to the level below". Cells where both levels
/// sit below ε count as satisfied (nothing there on either level).
pub fn generalized_level_comparison(report: &ScanReport, theta: f64) -> Result<LevelComparison> {
    if report.options.p_max < 1 {
        return Err(Error::InvalidArgument(
            "level comparison needs a scan with p_max >= 1".into(),
        ));
    }
    if !theta.is_finite() || theta <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "theta must be positive and finite, got {theta}"
        )));
    }
    let eps = report.options.epsilon;
    let mut rows = Vec::with_capacity(report.options.i_max + 1);
    for i in 0..=report.options.i_max {
        let c0 = report
            .cell(0, i)
            .ok_or_else(|| Error::InvalidArgument(format!("missing level-0 cell i={i}")))?;
        let c1 = report
            .cell(1, i)
            .ok_or_else(|| Error::InvalidArgument(format!("missing level-1 cell i={i}")))?;
        if let Some(e) = c0.error.as_ref().or(c1.error.as_ref()) {
            return Err(Error::InvalidArgument(format!(
                "cell i={i} carries a quadrature error: {e}"
            )));
        }
        let ratio = if c0.energy > 1e-300 {
            Some(c1.energy / c0.energy)
        } else {
            None
        };
        let relative_ok = c1.energy <= theta * c0.energy;
        let satisfied = relative_ok || c1.energy < eps;
        rows.push(LevelRow {
            i,
            level0: c0.energy,
            level1: c1.energy,
            ratio,
            satisfied,
        });
    }
    let mut relative_cutoff = None;
    for i0 in (0..rows.len()).rev() {
        if rows[i0].satisfied {
            relative_cutoff = Some(i0);
        } else {
            break;
        }
    }
    let mut absolute_cutoff = None;
    for i0 in (0..rows.len()).rev() {
        if rows[i0].level1 < eps {
            absolute_cutoff = Some(i0);
        } else {
            break;
        }
    }
    Ok(LevelComparison {
        theta,
        epsilon: eps,
        rows,
        relative_cutoff,
        absolute_cutoff,
        consistent_with_empty_claim: relative_cutoff == Some(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::{Harmonic, Polynomial, ZeroFn};
    use approx::assert_relative_eq;

    fn slow_wave() -> Harmonic {
        Harmonic {
            amplitude: 1.0,
            omega: 0.03,
            phase: 0.0,
        }
    }

    #[test]
    fn zero_function_scan_is_empty_everywhere() {
        let report =
            scan_energy_spaces(&ZeroFn, (0.0, 10.0), Axis::Time, &ScanOptions::default())
                .unwrap();
        assert!(report.cells.iter().all(|c| c.energy == 0.0));
        assert_eq!(report.cutoff(0), Some(0));
        assert_eq!(report.cutoff(1), Some(0));
        assert_eq!(report.empty_levels, vec![0, 1]);
        assert_eq!(report.m_cap, 0.0);
        let cmp = generalized_level_comparison(&report, LEVEL_RATIO_THRESHOLD).unwrap();
        assert_eq!(cmp.relative_cutoff, Some(0));
        assert!(cmp.consistent_with_empty_claim);
    }

    #[test]
    fn slow_harmonic_energies_match_closed_forms() {
        // chain values for a·cos(ωt): level 0 is −ω sin(2ωt), whose i-th
        // derivative has amplitude (2ω)^i ω, giving
        //   E(0,i) = (2ω)^{2i} ω² ∫ trig²(2ωt) dt
        let report = scan_energy_spaces(
            &slow_wave(),
            (0.0, 100.0),
            Axis::Time,
            &ScanOptions::default(),
        )
        .unwrap();
        let om = 0.03f64;
        let t = 100.0f64;
        // ∫cos²(2ωt) = T/2 + sin(4ωT)/(8ω); ∫sin²(2ωt) = T/2 − sin(4ωT)/(8ω)
        let int_cos2 = t / 2.0 + (4.0 * om * t).sin() / (8.0 * om);
        let int_sin2 = t / 2.0 - (4.0 * om * t).sin() / (8.0 * om);
        let e01 = (2.0 * om).powi(2) * om * om * int_cos2;
        let e04 = (2.0 * om).powi(8) * om * om * int_sin2;
        assert_relative_eq!(
            report.cell(0, 1).unwrap().energy,
            e01,
            max_relative = 1e-7
        );
        assert_relative_eq!(
            report.cell(0, 4).unwrap().energy,
            e04,
            max_relative = 1e-7
        );
        assert_eq!(report.cutoff(0), Some(4));
        assert_eq!(report.cutoff(1), Some(2));
    }

    #[test]
    fn stride_ratio_recovers_the_frequency_factor() {
        let report = scan_energy_spaces(
            &slow_wave(),
            (0.0, 100.0),
            Axis::Time,
            &ScanOptions::default(),
        )
        .unwrap();
        let row = &report.stride_ratios[0];
        assert_eq!((row.i_start, row.stride), (1, 4));
        let measured = row.per_step_ratio.unwrap();
        let expected = (2.0 * 0.03f64).powi(2);
        assert!(
            (measured / expected - 1.0).abs() < 0.05,
            "measured {measured:e} vs {expected:e}"
        );
    }

    #[test]
    fn level_comparison_on_the_slow_harmonic() {
        let report = scan_energy_spaces(
            &slow_wave(),
            (0.0, 100.0),
            Axis::Time,
            &ScanOptions::default(),
        )
        .unwrap();
        let cmp = generalized_level_comparison(&report, LEVEL_RATIO_THRESHOLD).unwrap();
        assert_eq!(cmp.relative_cutoff, Some(0));
        assert!(cmp.consistent_with_empty_claim);
        let r1 = cmp.rows[1].ratio.unwrap();
        assert_relative_eq!(r1, 1.3055e-5, max_relative = 1e-3);
    }

    #[test]
    fn m_rows_on_a_polynomial() {
        // f = t, n = 2: E(∂^i t²) over [0,1] is 1/5, 4/3, 4, 0 for i=0..3
        let f = Polynomial::new(vec![0.0, 1.0]);
        let opts = ScanOptions {
            i_max: 3,
            p_max: 0,
            ..ScanOptions::default()
        };
        let report = scan_energy_spaces(&f, (0.0, 1.0), Axis::Time, &opts).unwrap();
        let expect = [0.2, 4.0 / 3.0, 4.0, 0.0];
        for (i, &e) in expect.iter().enumerate() {
            let got = report.m_rows[i].m_i;
            if e == 0.0 {
                assert!(got.abs() < 1e-12, "i={i}: {got:e}");
            } else {
                assert_relative_eq!(got, e, max_relative = 1e-9);
            }
        }
        assert_relative_eq!(report.m_cap, 4.0, max_relative = 1e-9);
    }

    #[test]
    fn minkowski_margins_are_nonnegative_and_tie_at_first_row() {
        let rep = minkowski_check(&slow_wave(), (0.0, 100.0), 2, 4, 1e-9).unwrap();
        assert_eq!(rep.rows[0].margin, 0.0);
        for row in &rep.rows {
            assert!(
                row.margin >= -1e-9 * row.rhs.max(1.0),
                "K={}: lhs {:e} rhs {:e}",
                row.k_upper,
                row.lhs,
                row.rhs
            );
        }
    }

    #[test]
    fn cutoff_grows_as_epsilon_shrinks() {
        let loose = ScanOptions {
            epsilon: 1e-6,
            ..ScanOptions::default()
        };
        let tight = ScanOptions {
            epsilon: 1e-13,
            ..ScanOptions::default()
        };
        let r1 = scan_energy_spaces(&slow_wave(), (0.0, 100.0), Axis::Time, &loose).unwrap();
        let r2 = scan_energy_spaces(&slow_wave(), (0.0, 100.0), Axis::Time, &tight).unwrap();
        if let (Some(c1), Some(c2)) = (r1.cutoff(0), r2.cutoff(0)) {
            assert!(c2 >= c1, "tight {c2} vs loose {c1}");
        } else {
            panic!("expected both cutoffs present");
        }
    }

    #[test]
    fn option_validation_catches_bad_grids() {
        let base = ScanOptions::default;
        assert!(ScanOptions { i_max: 0, ..base() }.validate().is_err());
        // 12·2+2 = 26 exceeds the order cap; 11·2+2 = 24 sits exactly on it
        assert!(ScanOptions { i_max: 12, ..base() }.validate().is_err());
        assert!(ScanOptions { i_max: 11, ..base() }.validate().is_ok());
        assert!(ScanOptions {
            n_list: vec![],
            ..base()
        }
        .validate()
        .is_err());
        assert!(ScanOptions {
            n_list: vec![2, 0],
            ..base()
        }
        .validate()
        .is_err());
        assert!(ScanOptions {
            epsilon: 0.0,
            ..base()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn reversed_interval_is_rejected() {
        assert!(matches!(
            scan_energy_spaces(
                &ZeroFn,
                (1.0, 0.0),
                Axis::Time,
                &ScanOptions::default()
            ),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn cells_cover_the_grid_in_order() {
        let report = scan_energy_spaces(
            &Polynomial::new(vec![1.0, 1.0]),
            (0.0, 1.0),
            Axis::Time,
            &ScanOptions::default(),
        )
        .unwrap();
        let mut expect = Vec::new();
        for p in 0..=1u32 {
            for i in 0..=5usize {
                expect.push((p, i));
            }
        }
        let got: Vec<(u32, usize)> = report.cells.iter().map(|c| (c.p, c.i)).collect();
        assert_eq!(got, expect);
    }
}
