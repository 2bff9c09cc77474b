use std::f64::consts::PI;

use dicke_core::finite::{decay_spectrum, spectrum_variance};
use dicke_core::{
    build_lattice, burst_measure_1d, critical_distance_scan, dcrit_2d_model, dcrit_3d_model, displacement_table,
    pair_gamma, sum_rule_check, variance_dense, variance_fast, ChainPolarization, LatticeSpec64, ModelMode,
    PlanarPolarization, PolClass, Polarization64, ScanOptions, ThreeDModelParams, TwoDModelParams,
};
use serde_json::{json, Map};

use super::prepare;
use crate::args::CheckArgs;
use crate::error::{CliError, CliResult};
use crate::output::{header, write, Table};

type Check = (&'static str, fn() -> Result<String, String>);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn verdict(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pair_rates() -> Result<String, String> {
    let perp = pair_gamma(&[0.0, 0.0, 0.5], &Polarization64::x());
    let par = pair_gamma(&[0.0, 0.0, 0.5], &Polarization64::z());
    let e = rel(perp, -1.5 / (PI * PI)).max(rel(par, 3.0 / (PI * PI)));
    verdict(e < 1e-12, format!("half-wavelength pair rates, rel. error {e:.1e}"))
}

fn pair_counting() -> Result<String, String> {
    let t = displacement_table(&LatticeSpec64::cubic(2, 1.0)).map_err(|e| e.to_string())?;
    verdict(
        t.len() == 13 && t.pair_count() == 28,
        format!("2x2x2 cube: {} vectors, {} pairs", t.len(), t.pair_count()),
    )
}

fn fast_vs_dense() -> Result<String, String> {
    let cases = [
        (LatticeSpec64::chain(25, 0.2), Polarization64::x()),
        (LatticeSpec64::cubic(3, 0.4), Polarization64::z()),
        (LatticeSpec64::triangular(7, 0.35), Polarization64::x()),
    ];
    let mut worst: f64 = 0.0;
    for (spec, pol) in &cases {
        let fast = variance_fast(&displacement_table(spec).map_err(|e| e.to_string())?, pol, spec.spacing).variance;
        let dense = variance_dense(&build_lattice(spec).map_err(|e| e.to_string())?, pol)
            .map_err(|e| e.to_string())?
            .variance;
        worst = worst.max(rel(fast, dense));
    }
    verdict(worst < 1e-10, format!("fast and dense variance, worst rel. difference {worst:.1e}"))
}

fn trace_identity() -> Result<String, String> {
    let lattice = build_lattice(&LatticeSpec64::square(6, 0.3)).map_err(|e| e.to_string())?;
    let rates = decay_spectrum(&lattice, &Polarization64::x()).map_err(|e| e.to_string())?;
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
    verdict(
        (mean - 1.0).abs() < 1e-9 && min >= -1e-8,
        format!("6x6 square: mean rate {mean:.12}, smallest {min:.2e}, variance {:.6}", spectrum_variance(&rates)),
    )
}

fn dicke_limit() -> Result<String, String> {
    let spec = LatticeSpec64::chain(10, 1e-4);
    let v = variance_fast(&displacement_table(&spec).map_err(|e| e.to_string())?, &Polarization64::x(), 1e-4).variance;
    verdict(rel(v, 9.0) < 1e-3, format!("10 atoms at 1e-4 wavelengths: variance {v:.6}"))
}

fn chain_bounds() -> Result<String, String> {
    let m = burst_measure_1d(0.2625f64, ChainPolarization::Perpendicular).map_err(|e| e.to_string())?;
    let scan = critical_distance_scan(
        &LatticeSpec64::chain(400, 0.2),
        &Polarization64::x(),
        &ScanOptions::window(0.05, 1.0),
    )
    .map_err(|e| e.to_string())?;
    let d_max = scan.d_max.unwrap_or(f64::NAN);
    verdict(
        (m.ratio - 1.0).abs() < 1e-12 && rel(d_max, 0.2625) < 0.01,
        format!("infinite-chain ratio at 21/80: {:.12}; 400-atom scan d_max {d_max:.5}", m.ratio),
    )
}

fn sum_rules() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for class in [
        PolClass::One(ChainPolarization::Parallel),
        PolClass::One(ChainPolarization::Perpendicular),
        PolClass::Two(PlanarPolarization::OutOfPlane),
        PolClass::Two(PlanarPolarization::InPlaneCircular),
    ] {
        worst = worst.max(sum_rule_check(0.2, class).map_err(|e| e.to_string())?.relative_deviation);
    }
    verdict(worst < 1e-6, format!("1D/2D zone integrals at d = 0.2, worst rel. deviation {worst:.1e}"))
}

fn models() -> Result<String, String> {
    let p2 = TwoDModelParams::<f64>::preset(PlanarPolarization::OutOfPlane);
    let t = dcrit_2d_model(1e8, &p2, ModelMode::Transcendental).map_err(|e| e.to_string())?;
    let a = dcrit_2d_model(1e8, &p2, ModelMode::Asymptotic).map_err(|e| e.to_string())?;
    let p3 = ThreeDModelParams::<f64>::cubic();
    let step = dcrit_3d_model(2e6, &p3).map_err(|e| e.to_string())? / dcrit_3d_model(1e6, &p3).map_err(|e| e.to_string())?;
    verdict(
        rel(t, a) < 0.02 && rel(step, 2f64.powf(1.0 / 6.0)) < 1e-9,
        format!("2D models at N = 1e8: {t:.4} vs {a:.4}; 3D doubling step {step:.10}"),
    )
}

const CHECKS: [Check; 8] = [
    ("pair_rates", pair_rates),
    ("pair_counting", pair_counting),
    ("fast_vs_dense", fast_vs_dense),
    ("trace_identity", trace_identity),
    ("dicke_limit", dicke_limit),
    ("chain_bounds", chain_bounds),
    ("sum_rules", sum_rules),
    ("models", models),
];

pub fn run(mut args: CheckArgs) -> CliResult<()> {
    let format = prepare(&mut args.common)?;
    let mut table = Table::new("checks", vec!["check", "passed", "detail"]);
    let mut failed = Vec::new();
    for (name, f) in CHECKS {
        let (ok, detail) = match f() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        eprintln!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(name);
        }
        table.push(vec![json!(name), json!(ok), json!(detail)]);
    }
    let h = header("check", &args, Map::new())?;
    write(args.common.out.as_deref(), format, &h, &[table])?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("failed checks: {}", failed.join(", "))))
    }
}
