use dicke_core::finite::{decay_spectrum, spectrum_variance, DEFAULT_SPECTRUM_CAP};
use dicke_core::{build_lattice, ScanOptions};
use rayon::prelude::*;
use serde_json::{json, Map};

use super::{grid, num, prepare};
use crate::args::{parse_range, SpectrumArgs};
use crate::error::{CliError, CliResult};
use crate::output::{header, write, Table};
use crate::resolve::{dimensionality, fill_geometry, lattice_spec, polarization};

const DEFAULT_STEP: f64 = 0.01;

pub fn run(mut args: SpectrumArgs) -> CliResult<()> {
    let format = prepare(&mut args.common)?;
    fill_geometry(&mut args.geometry, false)?;
    let dim = dimensionality(args.geometry.geometry.expect("filled"));
    let ds = match args.d {
        Some(d) => vec![d],
        None => {
            let window = ScanOptions::<f64>::default_for(dim);
            let range = args
                .d_range
                .get_or_insert_with(|| format!("{}:{}", window.d_lo, window.d_hi))
                .clone();
            let step = *args.d_step.get_or_insert(DEFAULT_STEP);
            let (lo, hi) = parse_range(&range)?;
            grid(lo, hi, step)?
        }
    };
    let pol = polarization(args.geometry.pol.as_deref().expect("filled"))?;
    let spec = lattice_spec(&args.geometry, None, ds[0])?;
    if spec.n_atoms() > DEFAULT_SPECTRUM_CAP {
        return Err(CliError::validation(format!(
            "spectrum needs a dense eigensolve; {} atoms exceeds the cap of {DEFAULT_SPECTRUM_CAP}",
            spec.n_atoms()
        )));
    }

    let results: Vec<(f64, Vec<f64>)> = ds
        .par_iter()
        .map(|&d| {
            let lattice = build_lattice(&spec.with_spacing(d))?;
            Ok((d, decay_spectrum(&lattice, &pol)?))
        })
        .collect::<Result<_, dicke_core::Error>>()?;

    let mut spectrum = Table::new("spectrum", vec!["d", "eigenvalue_index", "gamma_over_gamma0"]);
    let mut variance = Table::new("variance", vec!["d", "variance", "burst"]);
    for (d, rates) in &results {
        for (i, g) in rates.iter().enumerate() {
            spectrum.push(vec![num(*d), json!(i), num(*g)]);
        }
        let v = spectrum_variance(rates);
        variance.push(vec![num(*d), num(v), json!(v > 1.0)]);
    }
    let mut extra = Map::new();
    extra.insert("n_atoms".into(), json!(spec.n_atoms()));
    let h = header("spectrum", &args, extra)?;
    write(args.common.out.as_deref(), format, &h, &[spectrum, variance])?;
    Ok(())
}
