//! Turning flag values into library types.

use dicke_core::{polarization_from_angles, Dimensionality, LatticeSpec64, Polarization64, PolarizationKind};

use crate::args::{GeometryArgs, GeometryKind};
use crate::error::{CliError, CliResult};

pub fn dimensionality(kind: GeometryKind) -> Dimensionality {
    match kind {
        GeometryKind::Chain => Dimensionality::One,
        GeometryKind::Square | GeometryKind::Rhombic | GeometryKind::Triangular => Dimensionality::Two,
        GeometryKind::Cubic | GeometryKind::Tetrahedral => Dimensionality::Three,
    }
}

/// Fills the geometry defaults in place: chain geometry, `⊥` polarization.
/// `sized_elsewhere` waives the atom-count requirement (size sweeps).
pub fn fill_geometry(g: &mut GeometryArgs, sized_elsewhere: bool) -> CliResult<()> {
    let kind = *g.geometry.get_or_insert(GeometryKind::Chain);
    if !sized_elsewhere && g.n.is_none() && g.nx.is_none() {
        return Err(CliError::validation("atom count missing: pass --n (or --nx/--ny/--nz)"));
    }
    g.pol.get_or_insert_with(|| "perp".into());
    if dimensionality(kind) == Dimensionality::Two && g.lattice_angle.is_none() {
        let deg = match kind {
            GeometryKind::Triangular => 60.0,
            GeometryKind::Rhombic => 75.0,
            _ => 90.0,
        };
        g.lattice_angle = Some(deg);
    }
    Ok(())
}

/// Lattice for filled geometry flags, with atoms-per-axis `n_side` when given.
pub fn lattice_spec(g: &GeometryArgs, n_side: Option<usize>, d: f64) -> CliResult<LatticeSpec64> {
    let kind = g.geometry.unwrap_or(GeometryKind::Chain);
    let pick = |axis: Option<usize>| -> CliResult<usize> {
        n_side
            .or(axis)
            .or(g.n)
            .ok_or_else(|| CliError::validation("atom count missing for a lattice axis"))
    };
    let spec = match dimensionality(kind) {
        Dimensionality::One => LatticeSpec64::chain(pick(g.nx)?, d),
        Dimensionality::Two => {
            let angle = g.lattice_angle.unwrap_or(90.0).to_radians();
            LatticeSpec64::planar(pick(g.nx)?, pick(g.ny)?, d, angle)
        }
        Dimensionality::Three => {
            let mut s = match kind {
                GeometryKind::Tetrahedral => LatticeSpec64::tetrahedral(1, d),
                _ => LatticeSpec64::cubic(1, d),
            };
            s.counts = [pick(g.nx)?, pick(g.ny)?, pick(g.nz)?];
            s
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn angle_pair(s: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    let [t, p] = parts.as_slice() else {
        return Err(CliError::validation(format!("expected `θ,φ` in degrees, got `{s}`")));
    };
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| CliError::validation(format!("`{x}` is not a number")))
    };
    Ok((num(t)?, num(p)?))
}

/// Polarization from its flag value. Arrays lie along `ẑ` (chains) or in the
/// y–z plane, so `perp`/`out-of-plane` is `x̂` and `par`/`in-plane-linear` is `ẑ`.
pub fn polarization(s: &str) -> CliResult<Polarization64> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("angle=") {
        let (t, p) = angle_pair(rest)?;
        return Ok(polarization_from_angles(t.to_radians(), p.to_radians(), PolarizationKind::Linear));
    }
    if let Some(rest) = s.strip_prefix("circular-angle=") {
        let (t, p) = angle_pair(rest)?;
        return Ok(polarization_from_angles(t.to_radians(), p.to_radians(), PolarizationKind::Circular));
    }
    match s {
        "perp" | "out-of-plane" => Ok(Polarization64::x()),
        "par" | "in-plane-linear" => Ok(Polarization64::z()),
        "in-plane-circular" => Ok(Polarization64::circular([0.0, 0.0, 1.0], [0.0, 1.0, 0.0])?),
        other => Err(CliError::validation(format!("unknown polarization `{other}`"))),
    }
}
