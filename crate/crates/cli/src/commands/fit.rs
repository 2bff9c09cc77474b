use std::fs::File;
use std::io::Write;

use dicke_core::{fit_power_law, fit_saturation, fit_sqrt_log};
use serde_json::{json, Map};

use super::prepare;
use crate::args::{FitArgs, FitKind, Format};
use crate::error::{CliError, CliResult};
use crate::output::header;

/// Reads two numeric columns; rows where either cell is empty are skipped.
fn read_columns(path: &std::path::Path, x: &str, y: &str) -> CliResult<(Vec<f64>, Vec<f64>, usize)> {
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::validation(format!("column `{name}` not found in {}", path.display())))
    };
    let (ix, iy) = (find(x)?, find(y)?);
    let (mut xs, mut ys, mut skipped) = (Vec::new(), Vec::new(), 0);
    for rec in rdr.records() {
        let rec = rec?;
        let (a, b) = (rec.get(ix).unwrap_or(""), rec.get(iy).unwrap_or(""));
        if a.is_empty() || b.is_empty() {
            skipped += 1;
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::validation(format!("`{s}` is not a number")))
        };
        xs.push(parse(a)?);
        ys.push(parse(b)?);
    }
    Ok((xs, ys, skipped))
}

pub fn run(mut args: FitArgs) -> CliResult<()> {
    // fit results are a single record, always JSON
    args.common.format = Some(Format::Json);
    prepare(&mut args.common)?;
    let input = args
        .input
        .clone()
        .ok_or_else(|| CliError::validation("--input is required"))?;
    let model = *args.model.get_or_insert(FitKind::PowerLaw);
    let x = args.x.get_or_insert_with(|| "n_atoms".into()).clone();
    let y = args.y.get_or_insert_with(|| "d_max".into()).clone();
    let (xs, ys, skipped) = read_columns(&input, &x, &y)?;
    let result = match model {
        FitKind::PowerLaw => fit_power_law(&xs, &ys),
        FitKind::SqrtLog => fit_sqrt_log(&xs, &ys),
        FitKind::Saturation => fit_saturation(&xs, &ys),
    }?;
    let mut extra = Map::new();
    extra.insert("skipped_rows".into(), json!(skipped));
    let doc = json!({
        "header": header("fit", &args, extra)?,
        "fit": result,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Numerical(e.to_string()))?;
    match &args.common.out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}
