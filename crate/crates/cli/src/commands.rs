//! The operational commands: scan, dispersion, duplicate, decompose-check,
//! and membership. Each writes a JSON sidecar plus a config echo into the
//! output directory; scan adds the CSV table.

use std::path::Path;

use eo_core::decomposition::{
    leibniz_expand, nonpositive_power_decompose, PowerRoute, DEFAULT_POWER_FLOOR,
};
use eo_core::energy::{duplication_classify, energy, taylor_energy_extrapolate};
use eo_core::error::Result;
use eo_core::operators::kernel_scan;
use eo_core::scanner::{
    generalized_level_comparison, minkowski_check, scan_energy_spaces, LevelComparison,
    MinkowskiRow,
};
use eo_core::smooth::{Exponential, Harmonic, Polynomial, SmoothFn};
use eo_core::waves::{dispersion_residual, psi_derivative_comparison, WaveSlice};
use eo_core::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{
    scan_csv, to_json, write_output, NOTE_CONTINUATION, NOTE_PSI_LITERAL, NOTE_REAL_DISPERSION,
    NOTE_SCAN_CONVENTION,
};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct MinkowskiOutcome {
    n: i32,
    rows: Option<Vec<MinkowskiRow>>,
    error: Option<String>,
}

#[derive(Serialize)]
struct ScanSidecar<'a> {
    tool_version: &'static str,
    config: &'a RunConfig,
    label: String,
    cutoffs: &'a [eo_core::scanner::CutoffRow],
    stride_ratios: &'a [eo_core::scanner::StrideRatio],
    m_rows: &'a [eo_core::scanner::MRow],
    m_cap: f64,
    empty_levels: &'a [u32],
    minkowski: Vec<MinkowskiOutcome>,
    level_comparison: Option<LevelComparison>,
    cell_errors: usize,
    cells: &'a [eo_core::scanner::ScanCell],
    notes: [&'static str; 4],
}

pub fn scan(cfg: &RunConfig, out_dir: &Path) -> Result<u8> {
    let slice = cfg.slice()?;
    let report = scan_energy_spaces(&slice, cfg.interval(), cfg.axis, &cfg.scan_options())?;
    let cell_errors = report.cells.iter().filter(|c| c.error.is_some()).count();

    let minkowski = cfg
        .n_list
        .iter()
        .map(|&n| {
            match minkowski_check(&slice, cfg.interval(), n, cfg.i_max, cfg.quad_tol) {
                Ok(rep) => MinkowskiOutcome {
                    n,
                    rows: Some(rep.rows),
                    error: None,
                },
                Err(e) => MinkowskiOutcome {
                    n,
                    rows: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let level_comparison = if cfg.p_max >= 1 && cell_errors == 0 {
        Some(generalized_level_comparison(&report, cfg.theta)?)
    } else {
        None
    };

    let sidecar = ScanSidecar {
        tool_version: TOOL_VERSION,
        config: cfg,
        label: report.label.clone(),
        cutoffs: &report.cutoffs,
        stride_ratios: &report.stride_ratios,
        m_rows: &report.m_rows,
        m_cap: report.m_cap,
        empty_levels: &report.empty_levels,
        minkowski,
        level_comparison,
        cell_errors,
        cells: &report.cells,
        notes: [
            NOTE_SCAN_CONVENTION,
            NOTE_CONTINUATION,
            NOTE_REAL_DISPERSION,
            NOTE_PSI_LITERAL,
        ],
    };

    write_output(out_dir, "scan.csv", &scan_csv(&report))?;
    write_output(out_dir, "scan.json", &to_json(&sidecar)?)?;
    write_output(out_dir, "scan.config", &crate::config::emit_config(cfg))?;

    for row in &report.cutoffs {
        match row.cutoff {
            Some(c) => println!("scan: level {} empty from derivative order {c}", row.p),
            None => println!("scan: level {} not certified empty anywhere", row.p),
        }
    }
    if cell_errors > 0 {
        for cell in report.cells.iter().filter(|c| c.error.is_some()) {
            eprintln!(
                "scan: cell (p={}, i={}) failed: {}",
                cell.p,
                cell.i,
                cell.error.as_deref().unwrap_or("unknown")
            );
        }
        return Ok(3);
    }
    Ok(0)
}

#[derive(Serialize)]
struct DispersionSidecar<'a> {
    tool_version: &'static str,
    config: &'a RunConfig,
    rows: Vec<eo_core::waves::DispersionReport>,
    analytic: Complex64,
    real_form: f64,
    max_abs_residual: f64,
    spread: f64,
    psi_rows: Vec<eo_core::waves::PsiDerivativeComparison>,
    max_identity_residual: f64,
    notes: [&'static str; 2],
}

pub fn dispersion(cfg: &RunConfig, out_dir: &Path) -> Result<u8> {
    let params = cfg.wave_params();
    let mut rows = Vec::new();
    for n in 2..=5 {
        for i in 0..=4usize {
            rows.push(dispersion_residual(&params, cfg.t0, cfg.r0, i, n)?);
        }
    }
    let analytic = rows[0].analytic;
    let real_form = rows[0].real_form;
    let max_abs_residual = rows
        .iter()
        .map(|r| r.residual.norm())
        .fold(0.0f64, f64::max);
    let spread = rows
        .iter()
        .flat_map(|a| rows.iter().map(move |b| (a.normalized - b.normalized).norm()))
        .fold(0.0f64, f64::max);

    let slice = cfg.slice()?;
    let mut psi_rows = Vec::new();
    for i in 0..=4usize {
        psi_rows.push(psi_derivative_comparison(&slice, cfg.point(), i)?);
    }
    let max_identity_residual = psi_rows
        .iter()
        .map(|r| r.identity_residual.abs())
        .fold(0.0f64, f64::max);

    let sidecar = DispersionSidecar {
        tool_version: TOOL_VERSION,
        config: cfg,
        rows,
        analytic,
        real_form,
        max_abs_residual,
        spread,
        psi_rows,
        max_identity_residual,
        notes: [NOTE_REAL_DISPERSION, NOTE_PSI_LITERAL],
    };
    write_output(out_dir, "dispersion.json", &to_json(&sidecar)?)?;
    write_output(out_dir, "dispersion.config", &crate::config::emit_config(cfg))?;
    println!(
        "dispersion: residual spread {:e} around {:e}{:+e}i",
        spread, analytic.re, analytic.im
    );
    Ok(0)
}

#[derive(Serialize)]
struct DuplicateSidecar<'a> {
    tool_version: &'static str,
    config: &'a RunConfig,
    classification: eo_core::energy::DuplicationReport,
    extrapolation: eo_core::energy::ExtrapolationReport,
    direct_energy: f64,
    extrapolated: f64,
    relative_gap: f64,
    notes: [&'static str; 1],
}

pub fn duplicate(cfg: &RunConfig, out_dir: &Path) -> Result<u8> {
    // continuation happens along time, whatever axis the scan uses
    let slice = WaveSlice::time_slice(cfg.wave_params(), cfg.r0, cfg.convention)?;
    let classification = duplication_classify(&slice, cfg.t_max, cfg.dt, cfg.dup_epsilon)?;
    let extrapolation =
        taylor_energy_extrapolate(&slice, 0.0, cfg.t_max, cfg.dt, cfg.terms, cfg.quad_tol)?;
    let direct = energy(&slice, 0.0, cfg.t_max + cfg.dt, cfg.quad_tol)?;
    let relative_gap =
        (extrapolation.value - direct.value).abs() / direct.value.abs().max(1e-300);

    let class = classification.class;
    let extrapolated = extrapolation.value;
    let sidecar = DuplicateSidecar {
        tool_version: TOOL_VERSION,
        config: cfg,
        classification,
        extrapolation,
        direct_energy: direct.value,
        extrapolated,
        relative_gap,
        notes: [NOTE_CONTINUATION],
    };
    write_output(out_dir, "duplicate.json", &to_json(&sidecar)?)?;
    write_output(out_dir, "duplicate.config", &crate::config::emit_config(cfg))?;
    println!("duplicate: {class:?}, continuation gap {relative_gap:e}");
    Ok(0)
}

#[derive(Serialize)]
struct ChainRow {
    label: String,
    n: i32,
    v: usize,
    relative_residual: f64,
}

#[derive(Serialize)]
struct PowerRow {
    label: String,
    level: u32,
    n: i32,
    v: usize,
    route: PowerRoute,
    relative_residual: f64,
}

#[derive(Serialize)]
struct DecomposeSidecar<'a> {
    tool_version: &'static str,
    config: &'a RunConfig,
    slice_point: f64,
    chain_rows: Vec<ChainRow>,
    max_chain_residual: f64,
    power_rows: Vec<PowerRow>,
    max_power_residual: f64,
}

pub fn decompose_check(cfg: &RunConfig, out_dir: &Path) -> Result<u8> {
    let slice = cfg.slice()?;
    let (a, b) = cfg.interval();
    let midpoint = 0.5 * (a + b);
    let bases: Vec<(Box<dyn SmoothFn>, f64)> = vec![
        (
            Box::new(Polynomial::new(vec![0.4, -1.2, 0.7, 0.05])) as Box<dyn SmoothFn>,
            0.3,
        ),
        (Box::new(Exponential { rate: 0.7 }), 0.4),
        (
            Box::new(Harmonic {
                amplitude: 1.3,
                omega: 1.1,
                phase: 0.4,
            }),
            0.2,
        ),
        (Box::new(slice), midpoint),
    ];

    let mut chain_rows = Vec::new();
    let mut power_rows = Vec::new();
    for (f, point) in &bases {
        for n in 2..=6 {
            for v in 1..=4usize {
                let check = leibniz_expand(f.as_ref(), n, v, *point)?;
                chain_rows.push(ChainRow {
                    label: f.label(),
                    n,
                    v,
                    relative_residual: check.relative_residual,
                });
            }
        }
        for level in 0..=1u32 {
            for &n in &[1, 0, -1, -2, -3] {
                for v in 0..=3usize {
                    let dec = nonpositive_power_decompose(
                        f.as_ref(),
                        n,
                        v,
                        *point,
                        level,
                        DEFAULT_POWER_FLOOR,
                    )?;
                    power_rows.push(PowerRow {
                        label: f.label(),
                        level,
                        n,
                        v,
                        route: dec.route,
                        relative_residual: dec.check.relative_residual,
                    });
                }
            }
        }
    }
    let max_chain_residual = chain_rows
        .iter()
        .map(|r| r.relative_residual)
        .fold(0.0f64, f64::max);
    let max_power_residual = power_rows
        .iter()
        .map(|r| r.relative_residual)
        .fold(0.0f64, f64::max);

    let sidecar = DecomposeSidecar {
        tool_version: TOOL_VERSION,
        config: cfg,
        slice_point: midpoint,
        chain_rows,
        max_chain_residual,
        power_rows,
        max_power_residual,
    };
    write_output(out_dir, "decompose-check.json", &to_json(&sidecar)?)?;
    write_output(out_dir, "decompose-check.config", &crate::config::emit_config(cfg))?;
    println!(
        "decompose-check: max residuals {max_chain_residual:e} (chain), {max_power_residual:e} (low powers)"
    );
    Ok(0)
}

#[derive(Serialize)]
struct MembershipSidecar<'a> {
    tool_version: &'static str,
    config: &'a RunConfig,
    report: eo_core::operators::MembershipReport,
    grid_points: usize,
}

pub fn membership(cfg: &RunConfig, out_dir: &Path) -> Result<u8> {
    let slice = cfg.slice()?;
    let (a, b) = cfg.interval();
    let points = 65usize;
    let grid: Vec<f64> = (0..points)
        .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
        .collect();
    let report = kernel_scan(&slice, cfg.k_min..=cfg.k_max, &grid, cfg.epsilon)?;

    let in_s_minus = report.in_s_minus;
    let sidecar = MembershipSidecar {
        tool_version: TOOL_VERSION,
        config: cfg,
        report,
        grid_points: points,
    };
    write_output(out_dir, "membership.json", &to_json(&sidecar)?)?;
    write_output(out_dir, "membership.config", &crate::config::emit_config(cfg))?;
    println!(
        "membership: outside every scanned kernel: {}",
        if in_s_minus { "yes" } else { "no" }
    );
    Ok(0)
}
