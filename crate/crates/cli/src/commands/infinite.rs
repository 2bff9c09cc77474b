use std::f64::consts::PI;

use dicke_core::infinite::DEFAULT_DELTA;
use dicke_core::{
    burst_measure_1d, critical_distance_1d_exact, dcrit_2d_model, dcrit_3d_model, gamma_k_1d, gamma_k_2d,
    gamma_k_3d, sum_rule_check, Axis, ChainPolarization, Error, ModelMode, PlanarPolarization, PolClass,
    ThreeDModelParams, TwoDModelParams,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{num, prepare};
use crate::args::{AxisArg, GeometryKind, InfiniteArgs};
use crate::error::{CliError, CliResult};
use crate::output::{header, write, Table};

fn pol_class(args: &InfiniteArgs) -> CliResult<PolClass> {
    let pol = args.pol.as_deref();
    let unknown = |p: &str| CliError::validation(format!("polarization `{p}` is not available for this geometry"));
    match args.geometry.expect("filled") {
        GeometryKind::Chain => match pol.unwrap_or("perp") {
            "perp" | "out-of-plane" => Ok(PolClass::One(ChainPolarization::Perpendicular)),
            "par" | "in-plane-linear" => Ok(PolClass::One(ChainPolarization::Parallel)),
            p => Err(unknown(p)),
        },
        GeometryKind::Square => match pol.unwrap_or("out-of-plane") {
            "perp" | "out-of-plane" => Ok(PolClass::Two(PlanarPolarization::OutOfPlane)),
            "par" | "in-plane-linear" => Ok(PolClass::Two(PlanarPolarization::InPlaneLinear)),
            "in-plane-circular" => Ok(PolClass::Two(PlanarPolarization::InPlaneCircular)),
            p => Err(unknown(p)),
        },
        GeometryKind::Cubic => {
            let axis = match (args.axis, pol) {
                (Some(a), _) => a,
                (None, None | Some("perp") | Some("out-of-plane")) => AxisArg::X,
                (None, Some("par") | Some("in-plane-linear")) => AxisArg::Z,
                (None, Some(p)) => return Err(unknown(p)),
            };
            Ok(PolClass::Three(match axis {
                AxisArg::X => Axis::X,
                AxisArg::Y => Axis::Y,
                AxisArg::Z => Axis::Z,
            }))
        }
        other => Err(CliError::validation(format!(
            "infinite arrays support chain, square and cubic geometries, not {other:?}"
        ))),
    }
}

fn default_points(class: PolClass) -> usize {
    match class {
        PolClass::One(_) => 201,
        PolClass::Two(_) => 101,
        PolClass::Three(_) => 31,
    }
}

fn zone_grid(d: f64, m: usize) -> Vec<f64> {
    let edge = PI / d;
    if m == 1 {
        return vec![0.0];
    }
    (0..m).map(|i| -edge + 2.0 * edge * i as f64 / (m - 1) as f64).collect()
}

fn rate_cells(r: Result<f64, Error>) -> CliResult<(Value, &'static str)> {
    match r {
        Ok(g) => Ok((num(g), "ok")),
        Err(Error::LightConeContact) => Ok((Value::Null, "light_cone")),
        Err(e) => Err(e.into()),
    }
}

fn models(args: &InfiniteArgs, class: PolClass, d: f64) -> CliResult<Value> {
    Ok(match class {
        PolClass::One(p) => {
            let exact = critical_distance_1d_exact(p);
            let burst = burst_measure_1d(d, p)?;
            json!({
                "critical_distance": format!("{}/{}", exact.numer(), exact.denom()),
                "critical_distance_value": *exact.numer() as f64 / *exact.denom() as f64,
                "burst_measure_at_d": burst,
            })
        }
        PolClass::Two(p) => match args.n_total {
            None => Value::Null,
            Some(n) => {
                let mut params = TwoDModelParams::<f64>::preset(p);
                if let Some(c) = args.sampling_c {
                    params = params.with_c(c);
                }
                if let Some(b) = args.b_const {
                    params = params.with_b_recip(b);
                }
                json!({
                    "params": params,
                    "alpha": params.alpha(),
                    "beta": params.beta(),
                    "transcendental": dcrit_2d_model(n, &params, ModelMode::Transcendental)?,
                    "asymptotic": dcrit_2d_model(n, &params, ModelMode::Asymptotic)?,
                })
            }
        },
        PolClass::Three(_) => match args.n_total {
            None => Value::Null,
            Some(n) => {
                let mut params = ThreeDModelParams::<f64>::cubic();
                if let Some(c) = args.sampling_c {
                    params = params.with_c(c);
                }
                if let Some(b) = args.b_const {
                    params = params.with_b_offset(b);
                }
                json!({
                    "params": params,
                    "a_bar": params.a_bar(),
                    "model": dcrit_3d_model(n, &params)?,
                    "cubic_fit_law": params.fit_law(n),
                    "tetrahedral_fit_law": ThreeDModelParams::<f64>::tetrahedral().fit_law(n),
                })
            }
        },
    })
}

pub fn run(mut args: InfiniteArgs) -> CliResult<()> {
    let format = prepare(&mut args.common)?;
    args.geometry.get_or_insert(GeometryKind::Chain);
    let class = pol_class(&args)?;
    let d = *args.d.get_or_insert(0.2);
    if !(d > 0.0) {
        return Err(CliError::validation("--d must be positive"));
    }
    let m = *args.k_points.get_or_insert(default_points(class));
    if m == 0 {
        return Err(CliError::validation("--k-points must be at least 1"));
    }
    let delta = match class {
        PolClass::Three(_) => *args.delta.get_or_insert(DEFAULT_DELTA),
        _ => {
            args.delta = None;
            DEFAULT_DELTA
        }
    };
    let ks = zone_grid(d, m);

    let table = match class {
        PolClass::One(p) => {
            let mut t = Table::new("band", vec!["kz", "gamma_over_gamma0", "flag"]);
            for &kz in &ks {
                t.push(vec![num(kz), num(gamma_k_1d(kz, d, p)), json!("ok")]);
            }
            t
        }
        PolClass::Two(p) => {
            let mut t = Table::new("band", vec!["kz", "ky", "gamma_over_gamma0", "flag"]);
            for &kz in &ks {
                for &ky in &ks {
                    let (g, flag) = rate_cells(gamma_k_2d([kz, ky], d, p))?;
                    t.push(vec![num(kz), num(ky), g, json!(flag)]);
                }
            }
            t
        }
        PolClass::Three(axis) => {
            let mut t = Table::new("band", vec!["kx", "ky", "kz", "gamma_over_gamma0", "flag"]);
            let rows: Vec<Vec<Value>> = ks
                .par_iter()
                .flat_map_iter(|&kx| {
                    let ks = &ks;
                    ks.iter().flat_map(move |&ky| {
                        ks.iter().map(move |&kz| {
                            let g = gamma_k_3d([kx, ky, kz], d, delta, axis).map(num).unwrap_or(Value::Null);
                            vec![num(kx), num(ky), num(kz), g, json!("ok")]
                        })
                    })
                })
                .collect();
            t.rows = rows;
            t
        }
    };

    let mut extra = Map::new();
    let sum_rule = if args.no_sum_rule.unwrap_or(false) {
        json!({ "skipped": "disabled by flag" })
    } else if d < 0.5 {
        json!(sum_rule_check(d, class)?)
    } else {
        json!({ "skipped": "sum-rule quadrature is implemented for d < 0.5" })
    };
    extra.insert("sum_rule".into(), sum_rule);
    extra.insert("pol_class".into(), json!(class));
    extra.insert("critical_distance".into(), models(&args, class, d)?);
    let h = header("infinite", &args, extra)?;
    write(args.common.out.as_deref(), format, &h, &[table])?;
    Ok(())
}
