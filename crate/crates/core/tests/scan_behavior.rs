//! Behavioral checks of the energy-space scanner on the wave-slice
//! presets, plus randomized structural properties of the jet and energy
//! layers.

use eo_core::energy::energy;
use eo_core::error::Error;
use eo_core::jet::Jet;
use eo_core::operators::Axis;
use eo_core::scanner::{
    generalized_level_comparison, minkowski_check, scan_energy_spaces, ScanOptions,
    LEVEL_RATIO_THRESHOLD,
};
use eo_core::smooth::{ClosureFn, Harmonic, Polynomial, SmoothFn};
use eo_core::waves::{RealConvention, WaveParams, WaveSlice};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn slow_scenario_time_scan_matches_frozen_values() {
    let p = WaveParams::scenario(1).unwrap();
    let slice = WaveSlice::time_slice(p, 2.0, RealConvention::RealThenPower).unwrap();
    let report = scan_energy_spaces(
        &slice,
        (0.0, p.t_max),
        Axis::Time,
        &ScanOptions::default(),
    )
    .unwrap();

    let e01 = report.cell(0, 1).unwrap().energy;
    assert!(
        (e01 / 1.5476e-4 - 1.0).abs() < 1e-3,
        "E(0,1) = {e01:e}, expected ~1.5476e-4"
    );
    assert_eq!(report.cutoff(0), Some(4));
    assert_eq!(report.cutoff(1), Some(2));
    assert!(report.empty_levels.is_empty());

    let ratio = report.stride_ratios[0].per_step_ratio.unwrap();
    let expected = (2.0 * p.omega).powi(2);
    assert!(
        (ratio / expected - 1.0).abs() < 0.05,
        "stride ratio {ratio:e} vs (2w)^2 = {expected:e}"
    );

    let cmp = generalized_level_comparison(&report, LEVEL_RATIO_THRESHOLD).unwrap();
    assert_eq!(cmp.relative_cutoff, Some(0));
    assert!(cmp.consistent_with_empty_claim);
    let r1 = cmp.rows[1].ratio.unwrap();
    assert!(
        (r1.log10() + 4.0).abs() <= 1.0,
        "level ratio at i=1: {r1:e}"
    );
}

#[test]
fn fast_scenario_space_scan_matches_frozen_values() {
    let p = WaveParams::scenario(2).unwrap();
    let slice = WaveSlice::space_slice(p, 0.0, RealConvention::RealThenPower).unwrap();
    let report = scan_energy_spaces(
        &slice,
        (p.r_min, p.r_max),
        Axis::Space,
        &ScanOptions::default(),
    )
    .unwrap();

    let e01 = report.cell(0, 1).unwrap().energy;
    assert!(
        (3e-10..8e-10).contains(&e01),
        "E(0,1) = {e01:e}, expected ~5.4e-10"
    );
    assert_eq!(report.cutoff(0), Some(2));

    let ratio = report.stride_ratios[0].per_step_ratio.unwrap();
    let expected = 4.0 * p.kappa().norm_sqr();
    assert!(
        (ratio / expected - 1.0).abs() < 0.05,
        "stride ratio {ratio:e} vs (2|kappa|)^2 = {expected:e}"
    );

    let cmp = generalized_level_comparison(&report, LEVEL_RATIO_THRESHOLD).unwrap();
    assert_eq!(cmp.relative_cutoff, Some(0));
    let r1 = cmp.rows[1].ratio.unwrap();
    assert!(
        (r1.log10() + 11.0).abs() <= 1.0,
        "level ratio at i=1: {r1:e}"
    );
}

#[test]
fn cell_failures_are_recorded_and_the_scan_completes() {
    let failing = ClosureFn {
        f: |_t: f64, _order: usize| -> eo_core::error::Result<Jet> {
            Err(Error::InvalidArgument("deliberately failing probe".into()))
        },
        name: "failing-probe".to_string(),
    };
    let report = scan_energy_spaces(
        &failing,
        (0.0, 1.0),
        Axis::Time,
        &ScanOptions::default(),
    )
    .unwrap();
    assert!(report.cells.iter().all(|c| c.error.is_some()));
    assert!(report.cells.iter().all(|c| c.energy == 0.0 && !c.below_epsilon));
    assert_eq!(report.cutoff(0), None);
    assert!(report.empty_levels.is_empty());
    assert!(report.m_rows.iter().all(|r| r.error.is_some()));
}

#[test]
fn minkowski_margins_on_the_slice() {
    let p = WaveParams::scenario(1).unwrap();
    let slice = WaveSlice::time_slice(p, 2.0, RealConvention::RealThenPower).unwrap();
    let rep = minkowski_check(&slice, (0.0, p.t_max), 2, 5, 1e-9).unwrap();
    assert_eq!(rep.rows[0].margin, 0.0);
    for row in &rep.rows {
        assert!(
            row.margin >= -1e-8 * row.rhs.max(1e-300),
            "K={}: lhs {:e} rhs {:e}",
            row.k_upper,
            row.lhs,
            row.rhs
        );
    }
}

#[test]
fn wider_n_list_only_raises_the_suprema() {
    let f = Harmonic {
        amplitude: 1.1,
        omega: 0.4,
        phase: 0.2,
    };
    let narrow = ScanOptions::default();
    let wide = ScanOptions {
        n_list: vec![2, 3, 4],
        ..ScanOptions::default()
    };
    let rn = scan_energy_spaces(&f, (0.0, 10.0), Axis::Time, &narrow).unwrap();
    let rw = scan_energy_spaces(&f, (0.0, 10.0), Axis::Time, &wide).unwrap();
    for (a, b) in rn.m_rows.iter().zip(&rw.m_rows) {
        assert!(b.m_i >= a.m_i * (1.0 - 1e-12), "i={}: {:e} vs {:e}", a.i, b.m_i, a.m_i);
    }
    assert!(rw.m_cap >= rn.m_cap * (1.0 - 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_additive_over_adjacent_intervals(
        amp in 0.5f64..1.5,
        omega in 0.2f64..1.5,
        phase in 0.0f64..1.0,
        b in 0.5f64..2.0,
        tail in 0.1f64..2.0,
    ) {
        let f = Harmonic { amplitude: amp, omega, phase };
        let c = b + tail;
        let whole = energy(&f, 0.0, c, 1e-10).unwrap().value;
        let left = energy(&f, 0.0, b, 1e-10).unwrap().value;
        let right = energy(&f, b, c, 1e-10).unwrap().value;
        prop_assert!(
            (whole - (left + right)).abs() <= 1e-6 * whole.max(1e-12),
            "whole {whole:e} vs {left:e} + {right:e}"
        );
    }

    #[test]
    fn energy_grows_with_the_interval(
        amp in 0.5f64..1.5,
        omega in 0.2f64..1.5,
        b in 0.5f64..2.0,
        tail in 0.0f64..2.0,
    ) {
        let f = Harmonic { amplitude: amp, omega, phase: 0.0 };
        let short = energy(&f, 0.0, b, 1e-9).unwrap().value;
        let long = energy(&f, 0.0, b + tail, 1e-9).unwrap().value;
        prop_assert!(long >= short * (1.0 - 1e-7));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_identity_holds_for_random_polynomials(
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        c3 in -2.0f64..2.0,
        n in 2i32..=5,
        v in 1usize..=3,
        point in -1.0f64..1.0,
    ) {
        let f = Polynomial::new(vec![c0, c1, c2, c3]);
        let check = leibniz(&f, n, v, point);
        prop_assume!(check.direct.norm() > 1e-6);
        prop_assert!(
            check.relative_residual <= 1e-10,
            "n={n} v={v}: {:e}",
            check.relative_residual
        );
    }
}

fn leibniz(f: &dyn SmoothFn, n: i32, v: usize, point: f64) -> eo_core::decomposition::IdentityCheck {
    eo_core::decomposition::leibniz_expand(f, n, v, point).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jet_multiplication_is_bitwise_commutative(
        are in proptest::collection::vec(-3.0f64..3.0, 1..6),
        aim in proptest::collection::vec(-3.0f64..3.0, 1..6),
        bre in proptest::collection::vec(-3.0f64..3.0, 1..6),
        bim in proptest::collection::vec(-3.0f64..3.0, 1..6),
    ) {
        let ac: Vec<Complex64> = are
            .iter()
            .zip(aim.iter().chain(std::iter::repeat(&0.0)))
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let bc: Vec<Complex64> = bre
            .iter()
            .zip(bim.iter().chain(std::iter::repeat(&0.0)))
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let order = ac.len().min(bc.len()) - 1;
        let a = Jet::new(0.0, ac[..=order].to_vec()).unwrap();
        let b = Jet::new(0.0, bc[..=order].to_vec()).unwrap();
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        for m in 0..=order {
            prop_assert_eq!(ab.coeff(m), ba.coeff(m));
        }
    }
}
