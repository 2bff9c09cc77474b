use dicke_core::{
    critical_distance_scan, polarization_from_angles, CriticalDistanceResult64, Dimensionality, PolarizationKind,
    ScanOptions,
};
use serde_json::{json, Map, Value};

use super::{num, prepare};
use crate::args::{parse_range, parse_sweep, ScanArgs, SweepKind};
use crate::error::{CliError, CliResult};
use crate::output::{header, write, Table};
use crate::resolve::{dimensionality, fill_geometry, lattice_spec, polarization};

enum Sweep {
    Single,
    Sizes(Vec<usize>),
    PolAngle(Vec<f64>),
    LatticeAngle(Vec<f64>),
}

fn crossings_json(r: &CriticalDistanceResult64) -> String {
    serde_json::to_string(&r.crossings).expect("floats serialize")
}

pub fn run(mut args: ScanArgs) -> CliResult<()> {
    let format = prepare(&mut args.common)?;
    fill_geometry(&mut args.geometry, args.n_list.is_some())?;
    let dim = dimensionality(args.geometry.geometry.expect("filled"));
    let window = ScanOptions::<f64>::default_for(dim);
    let range = args
        .d_range
        .get_or_insert_with(|| format!("{}:{}", window.d_lo, window.d_hi))
        .clone();
    let (lo, hi) = parse_range(&range)?;
    let opts = ScanOptions {
        d_lo: lo,
        d_hi: hi,
        coarse_step: *args.d_step.get_or_insert(window.coarse_step),
        resolution: *args.resolution.get_or_insert(window.resolution),
    };
    opts.validate()?;

    let requested = [
        args.n_list.is_some(),
        args.pol_angle_sweep.is_some(),
        args.lattice_angle_sweep.is_some(),
    ];
    if requested.iter().filter(|&&b| b).count() > 1 {
        return Err(CliError::validation(
            "choose at most one of --n-list, --pol-angle-sweep, --lattice-angle-sweep",
        ));
    }
    let sweep = if let Some(ns) = &args.n_list {
        if ns.is_empty() {
            return Err(CliError::validation("--n-list is empty"));
        }
        Sweep::Sizes(ns.clone())
    } else if let Some(s) = &args.pol_angle_sweep {
        args.phi.get_or_insert(0.0);
        args.sweep_kind.get_or_insert(SweepKind::Linear);
        Sweep::PolAngle(parse_sweep(s)?)
    } else if let Some(s) = &args.lattice_angle_sweep {
        if dim != Dimensionality::Two {
            return Err(CliError::validation("lattice-angle sweeps need a planar geometry"));
        }
        Sweep::LatticeAngle(parse_sweep(s)?)
    } else {
        Sweep::Single
    };

    let base_pol = polarization(args.geometry.pol.as_deref().expect("filled"))?;
    let (column, points): (&'static str, Vec<(Value, _, _)>) = match &sweep {
        Sweep::Single => {
            let spec = lattice_spec(&args.geometry, None, lo)?;
            ("n_side", vec![(json!(args.geometry.n), spec, base_pol)])
        }
        Sweep::Sizes(ns) => (
            "n_side",
            ns.iter()
                .map(|&n| Ok((json!(n), lattice_spec(&args.geometry, Some(n), lo)?, base_pol)))
                .collect::<CliResult<_>>()?,
        ),
        Sweep::PolAngle(thetas) => {
            let spec = lattice_spec(&args.geometry, None, lo)?;
            let kind = match args.sweep_kind.expect("filled") {
                SweepKind::Linear => PolarizationKind::Linear,
                SweepKind::Circular => PolarizationKind::Circular,
            };
            let phi = args.phi.expect("filled").to_radians();
            (
                "pol_angle_deg",
                thetas
                    .iter()
                    .map(|&t| (num(t), spec, polarization_from_angles(t.to_radians(), phi, kind)))
                    .collect(),
            )
        }
        Sweep::LatticeAngle(angles) => {
            let mut points = Vec::new();
            for &a in angles {
                let mut g = args.geometry.clone();
                g.lattice_angle = Some(a);
                points.push((num(a), lattice_spec(&g, None, lo)?, base_pol));
            }
            ("lattice_angle_deg", points)
        }
    };

    let mut table = Table::new(
        "scan",
        vec![column, "n_atoms", "d_max", "burst_at_upper_edge", "crossings"],
    );
    for (label, spec, pol) in points {
        let r = critical_distance_scan(&spec, &pol, &opts)?;
        table.push(vec![
            label,
            json!(spec.n_atoms()),
            r.d_max.map(num).unwrap_or(Value::Null),
            json!(r.burst_at_upper_edge),
            Value::String(crossings_json(&r)),
        ]);
    }
    let h = header("scan", &args, Map::new())?;
    write(args.common.out.as_deref(), format, &h, &[table])?;
    Ok(())
}
