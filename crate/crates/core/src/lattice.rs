//! Finite Bravais arrays and their unique-displacement tables.
//!
//! A lattice with `n₁ × n₂ × n₃` sites spanned by primitive vectors
//! `ŝ₁, ŝ₂, ŝ₃` contains every integer displacement `a ŝ₁ + b ŝ₂ + c ŝ₃` with
//! `|a| < n₁, |b| < n₂, |c| < n₃`, and each one occurs
//! `(n₁ − |a|)(n₂ − |b|)(n₃ − |c|)` times. Keeping one representative per
//! `±` pair turns the `N²` pair sum into a sum over `O(N)` table entries.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::greens::Polarization;
use crate::scalar::{add, scale, Real, Vec3};

/// Default cap on the number of atoms a lattice may hold.
pub const DEFAULT_ATOM_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimensionality {
    One,
    Two,
    Three,
}

impl Dimensionality {
    pub fn rank(self) -> usize {
        match self {
            Dimensionality::One => 1,
            Dimensionality::Two => 2,
            Dimensionality::Three => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell3d {
    Cubic,
    /// Rhombohedral cell with 60° between every pair of primitive vectors
    /// (the primitive cell of a face-centred cubic crystal).
    Tetrahedral,
}

/// Geometry description; all lengths in λ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec<T> {
    pub dimensionality: Dimensionality,
    /// Atoms along each primitive direction; unused axes hold 1.
    pub counts: [usize; 3],
    pub spacing: T,
    /// Angle between the two primitive vectors of a planar lattice.
    pub lattice_angle: T,
    pub cell_3d: Cell3d,
    pub atom_cap: usize,
}

impl<T: Real> LatticeSpec<T> {
    fn base(dimensionality: Dimensionality, counts: [usize; 3], spacing: T) -> Self {
        Self {
            dimensionality,
            counts,
            spacing,
            lattice_angle: T::FRAC_PI_2(),
            cell_3d: Cell3d::Cubic,
            atom_cap: DEFAULT_ATOM_CAP,
        }
    }

    pub fn chain(n: usize, spacing: T) -> Self {
        Self::base(Dimensionality::One, [n, 1, 1], spacing)
    }

    pub fn planar(n1: usize, n2: usize, spacing: T, angle: T) -> Self {
        Self {
            lattice_angle: angle,
            ..Self::base(Dimensionality::Two, [n1, n2, 1], spacing)
        }
    }

    pub fn square(n_side: usize, spacing: T) -> Self {
        Self::planar(n_side, n_side, spacing, T::FRAC_PI_2())
    }

    pub fn triangular(n_side: usize, spacing: T) -> Self {
        Self::planar(n_side, n_side, spacing, T::FRAC_PI_3())
    }

    /// Rhombic preset with a 75° lattice angle.
    pub fn rhombic(n_side: usize, spacing: T) -> Self {
        Self::planar(n_side, n_side, spacing, T::lit(75f64.to_radians()))
    }

    pub fn cubic(n_side: usize, spacing: T) -> Self {
        Self::base(Dimensionality::Three, [n_side; 3], spacing)
    }

    pub fn tetrahedral(n_side: usize, spacing: T) -> Self {
        Self {
            cell_3d: Cell3d::Tetrahedral,
            ..Self::base(Dimensionality::Three, [n_side; 3], spacing)
        }
    }

    pub fn with_spacing(mut self, spacing: T) -> Self {
        self.spacing = spacing;
        self
    }

    pub fn with_atom_cap(mut self, cap: usize) -> Self {
        self.atom_cap = cap;
        self
    }

    pub fn n_atoms(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn validate(&self) -> Result<()> {
        let rank = self.dimensionality.rank();
        if self.counts[..rank].contains(&0) {
            return invalid("atom count along every lattice axis must be at least 1");
        }
        if self.counts[rank..].iter().any(|&n| n != 1) {
            return invalid("counts along unused axes must be 1");
        }
        if !(self.spacing > T::zero()) || !self.spacing.is_finite() {
            return invalid("lattice spacing must be positive and finite");
        }
        if self.dimensionality == Dimensionality::Two {
            // Below 60° the short diagonal becomes shorter than the spacing.
            let tol = T::lit(1e-12);
            if !(self.lattice_angle >= T::FRAC_PI_3() - tol && self.lattice_angle <= T::FRAC_PI_2() + tol) {
                return invalid("lattice angle must lie in [π/3, π/2]");
            }
        }
        let n = self
            .counts
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c))
            .unwrap_or(usize::MAX);
        if n > self.atom_cap {
            return Err(Error::TooManyAtoms {
                what: "lattice",
                n,
                cap: self.atom_cap,
            });
        }
        Ok(())
    }

    /// Primitive vectors for unit spacing. The first axis is always `ẑ`; a
    /// planar lattice lives in the y–z plane, so `x̂` is its normal.
    pub fn primitive_vectors(&self) -> Vec<Vec3<T>> {
        let (o, l) = (T::zero(), T::one());
        let z = [o, o, l];
        match self.dimensionality {
            Dimensionality::One => vec![z],
            Dimensionality::Two => {
                let (s, c) = self.lattice_angle.sin_cos();
                vec![z, [o, s, c]]
            }
            Dimensionality::Three => match self.cell_3d {
                Cell3d::Cubic => vec![z, [o, l, o], [l, o, o]],
                Cell3d::Tetrahedral => {
                    let half = T::lit(0.5);
                    let three = T::lit(3.0);
                    vec![
                        z,
                        [o, three.sqrt() * half, half],
                        [(T::lit(2.0) / three).sqrt(), l / (T::lit(2.0) * three.sqrt()), half],
                    ]
                }
            },
        }
    }
}

/// Realized array: atom positions in λ₀.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lattice<T> {
    pub spec: LatticeSpec<T>,
    /// Primitive vectors scaled by the spacing.
    pub unit_vectors: Vec<Vec3<T>>,
    pub positions: Vec<Vec3<T>>,
}

impl<T: Real> Lattice<T> {
    pub fn n_atoms(&self) -> usize {
        self.positions.len()
    }

    /// Integer coordinates of atom `i`; the first axis varies fastest.
    pub fn coefficients(&self, i: usize) -> [usize; 3] {
        let [n1, n2, _] = self.spec.counts;
        [i % n1, (i / n1) % n2, i / (n1 * n2)]
    }
}

pub fn build_lattice<T: Real>(spec: &LatticeSpec<T>) -> Result<Lattice<T>> {
    spec.validate()?;
    let unit_vectors: Vec<Vec3<T>> = spec
        .primitive_vectors()
        .iter()
        .map(|v| scale(v, spec.spacing))
        .collect();
    let mut basis = [[T::zero(); 3]; 3];
    for (slot, v) in basis.iter_mut().zip(&unit_vectors) {
        *slot = *v;
    }
    let [n1, n2, n3] = spec.counts;
    let mut positions = Vec::with_capacity(spec.n_atoms());
    for c in 0..n3 {
        for b in 0..n2 {
            for a in 0..n1 {
                let p = add(
                    &add(&scale(&basis[0], T::from_count(a)), &scale(&basis[1], T::from_count(b))),
                    &scale(&basis[2], T::from_count(c)),
                );
                positions.push(p);
            }
        }
    }
    Ok(Lattice {
        spec: *spec,
        unit_vectors,
        positions,
    })
}

/// One unique displacement `a ŝ₁ + b ŝ₂ + c ŝ₃` and how many unordered atom
/// pairs realize it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementEntry<T> {
    pub coefficients: [i64; 3],
    /// Cartesian displacement for unit spacing; multiply by `d`.
    pub unit_displacement: Vec3<T>,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DisplacementTable<T> {
    pub n_atoms: usize,
    pub counts: [usize; 3],
    pub entries: Vec<DisplacementEntry<T>>,
}

impl<T: Real> DisplacementTable<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of unordered pairs covered by the table.
    pub fn pair_count(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

impl<T: Real> DisplacementEntry<T> {
    #[inline]
    pub fn displacement(&self, spacing: T) -> Vec3<T> {
        scale(&self.unit_displacement, spacing)
    }
}

/// Unique displacement vectors with multiplicities.
///
/// Each `±` pair is represented once, by the vector whose first non-zero
/// integer coefficient is positive. In 2D this reproduces the two-corner
/// construction (`{a, b}` with `a, b ≥ 0` plus `{a, −b}` with `a, b ≥ 1`) and
/// in 3D the four-corner one.
pub fn displacement_table<T: Real>(spec: &LatticeSpec<T>) -> Result<DisplacementTable<T>> {
    spec.validate()?;
    let prims = spec.primitive_vectors();
    let mut basis = [[T::zero(); 3]; 3];
    for (slot, v) in basis.iter_mut().zip(&prims) {
        *slot = *v;
    }
    let [n1, n2, n3] = spec.counts.map(|n| n as i64);
    let mut entries = Vec::new();
    for a in 0..n1 {
        let b_lo = if a == 0 { 0 } else { -(n2 - 1) };
        for b in b_lo..n2 {
            let c_lo = if a == 0 && b == 0 { 1 } else { -(n3 - 1) };
            for c in c_lo..n3 {
                let multiplicity = ((n1 - a) * (n2 - b.abs()) * (n3 - c.abs())) as u64;
                let unit_displacement = add(
                    &add(&scale(&basis[0], T::lit(a as f64)), &scale(&basis[1], T::lit(b as f64))),
                    &scale(&basis[2], T::lit(c as f64)),
                );
                entries.push(DisplacementEntry {
                    coefficients: [a, b, c],
                    unit_displacement,
                    multiplicity,
                });
            }
        }
    }
    Ok(DisplacementTable {
        n_atoms: spec.n_atoms(),
        counts: spec.counts,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarizationKind {
    Linear,
    Circular,
}

/// Polarization relative to a planar array in the y–z plane.
///
/// `theta` is measured from the array normal `x̂`, `phi` is the azimuth in the
/// plane measured from `ẑ` towards `ŷ`. The circular kind rotates in the
/// plane spanned by the linear direction and the in-plane vector orthogonal
/// to its projection, so `theta = π/2` gives `(ẑ + iŷ)/√2` up to a phase.
pub fn polarization_from_angles<T: Real>(theta: T, phi: T, kind: PolarizationKind) -> Polarization<T> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let u = [ct, st * sp, st * cp];
    match kind {
        PolarizationKind::Linear => Polarization::linear(u),
        PolarizationKind::Circular => Polarization::circular(u, [T::zero(), cp, -sp]),
    }
    .expect("unit directions built from angles")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::pair_gamma;
    use crate::scalar::{norm, sub};
    use approx::assert_relative_eq;
    use std::collections::HashMap;

    fn all_geometries() -> Vec<LatticeSpec<f64>> {
        vec![
            LatticeSpec::chain(17, 0.23),
            LatticeSpec::square(6, 0.41),
            LatticeSpec::planar(5, 8, 0.3, 1.2),
            LatticeSpec::triangular(7, 0.55),
            LatticeSpec::rhombic(6, 0.7),
            LatticeSpec::cubic(4, 0.35),
            LatticeSpec::tetrahedral(5, 0.62),
            LatticeSpec {
                counts: [3, 4, 5],
                ..LatticeSpec::cubic(1, 0.5)
            },
        ]
    }

    #[test]
    fn chain_positions() {
        let lat = build_lattice(&LatticeSpec::chain(3, 0.2)).unwrap();
        let expect = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.2], [0.0, 0.0, 0.4]];
        for (p, e) in lat.positions.iter().zip(expect) {
            for k in 0..3 {
                assert_relative_eq!(p[k], e[k], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn square_and_triangular_positions() {
        let sq = build_lattice(&LatticeSpec::square(2, 1.0)).unwrap();
        let expect = [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 1.0, 1.0]];
        for (p, e) in sq.positions.iter().zip(expect) {
            assert!(norm(&sub(p, &e)) < 1e-15);
        }
        let tri = build_lattice(&LatticeSpec::triangular(2, 1.0)).unwrap();
        let row = tri.positions[2];
        assert!(norm(&sub(&row, &[0.0, 3f64.sqrt() / 2.0, 0.5])) < 1e-15);
    }

    #[test]
    fn size_and_minimum_distance() {
        for spec in all_geometries() {
            let lat = build_lattice(&spec).unwrap();
            assert_eq!(lat.n_atoms(), spec.counts.iter().product::<usize>());
            let mut dmin = f64::INFINITY;
            for i in 0..lat.n_atoms() {
                for j in (i + 1)..lat.n_atoms() {
                    dmin = dmin.min(norm(&sub(&lat.positions[i], &lat.positions[j])));
                }
            }
            assert!((dmin - spec.spacing).abs() < 1e-12, "{spec:?}: {dmin}");
        }
    }

    #[test]
    fn validation_errors() {
        assert!(build_lattice(&LatticeSpec::chain(0, 0.2)).is_err());
        assert!(build_lattice(&LatticeSpec::chain(3, 0.0)).is_err());
        assert!(build_lattice(&LatticeSpec::planar(3, 3, 0.2, 0.5)).is_err());
        let err = build_lattice(&LatticeSpec::cubic(300, 0.2)).unwrap_err();
        assert!(matches!(err, Error::TooManyAtoms { n: 27_000_000, .. }));
        assert!(LatticeSpec::cubic(10, 0.2).with_atom_cap(999).validate().is_err());
    }

    #[test]
    fn chain_table() {
        let t = displacement_table(&LatticeSpec::chain(4, 1.0)).unwrap();
        let got: Vec<_> = t.entries.iter().map(|e| (e.coefficients[0], e.multiplicity)).collect();
        assert_eq!(got, vec![(1, 3), (2, 2), (3, 1)]);
        assert_eq!(t.pair_count(), 6);
    }

    #[test]
    fn square_table() {
        let t = displacement_table(&LatticeSpec::square(2, 1.0)).unwrap();
        let mut got: Vec<_> = t.entries.iter().map(|e| (e.coefficients, e.multiplicity)).collect();
        got.sort();
        assert_eq!(got, vec![([0, 1, 0], 2), ([1, -1, 0], 1), ([1, 0, 0], 2), ([1, 1, 0], 1)]);
    }

    #[test]
    fn cube_table_matches_pair_enumeration() {
        // enumerate all 28 pairs of a 2×2×2 cube and deduplicate up to sign
        let lat = build_lattice(&LatticeSpec::cubic(2, 1.0)).unwrap();
        let mut counts: HashMap<[i64; 3], u64> = HashMap::new();
        for i in 0..8 {
            for j in (i + 1)..8 {
                let (ci, cj) = (lat.coefficients(i), lat.coefficients(j));
                let mut v = [0i64; 3];
                for k in 0..3 {
                    v[k] = cj[k] as i64 - ci[k] as i64;
                }
                let first = v.iter().find(|&&x| x != 0).copied().unwrap();
                if first < 0 {
                    v = v.map(|x| -x);
                }
                *counts.entry(v).or_default() += 1;
            }
        }
        assert_eq!(counts.len(), 13);
        let t = displacement_table(&LatticeSpec::<f64>::cubic(2, 1.0)).unwrap();
        assert_eq!(t.len(), 13);
        assert_eq!(t.pair_count(), 28);
        for e in &t.entries {
            assert_eq!(counts[&e.coefficients], e.multiplicity);
        }
    }

    #[test]
    fn table_invariants() {
        for spec in all_geometries() {
            let t = displacement_table(&spec).unwrap();
            let n = spec.n_atoms() as u64;
            assert_eq!(t.pair_count(), n * (n - 1) / 2);
            assert!(t.len() <= 4 * spec.n_atoms());
            // no duplicates up to sign
            let mut seen = std::collections::HashSet::new();
            for e in &t.entries {
                let neg = e.coefficients.map(|x| -x);
                assert!(seen.insert(e.coefficients) && !seen.contains(&neg));
            }
            let n1 = spec.counts[0];
            match spec.dimensionality {
                Dimensionality::One => assert_eq!(t.len(), n1 - 1),
                Dimensionality::Two if spec.counts[0] == spec.counts[1] => assert!(t.len() <= 2 * n1 * n1),
                Dimensionality::Three if spec.counts.iter().all(|&c| c == n1) => {
                    assert!(t.len() <= 4 * n1 * n1 * n1)
                }
                _ => {}
            }
        }
    }

    #[test]
    fn table_reproduces_brute_force_pair_sums() {
        let pols = [Polarization::x(), Polarization::z(), polarization_from_angles(1.0, 0.3, PolarizationKind::Circular)];
        for spec in all_geometries().into_iter().filter(|s| s.n_atoms() <= 200) {
            let lat = build_lattice(&spec).unwrap();
            let table = displacement_table(&spec).unwrap();
            for pol in &pols {
                let mut brute = 0.0;
                for i in 0..lat.n_atoms() {
                    for j in (i + 1)..lat.n_atoms() {
                        brute += pair_gamma(&sub(&lat.positions[i], &lat.positions[j]), pol).powi(2);
                    }
                }
                let fast: f64 = table
                    .entries
                    .iter()
                    .map(|e| e.multiplicity as f64 * pair_gamma(&e.displacement(spec.spacing), pol).powi(2))
                    .sum();
                assert_relative_eq!(fast, brute, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn table_size_is_linear() {
        for (small, big) in [
            (LatticeSpec::<f64>::chain(100, 0.2), LatticeSpec::chain(400, 0.2)),
            (LatticeSpec::square(10, 0.2), LatticeSpec::square(20, 0.2)),
            (LatticeSpec::cubic(5, 0.2), LatticeSpec::cubic(10, 0.2)),
        ] {
            let (ts, tb) = (displacement_table(&small).unwrap(), displacement_table(&big).unwrap());
            assert!(ts.len() <= 4 * small.n_atoms());
            assert!(tb.len() <= 4 * big.n_atoms());
        }
    }

    #[test]
    fn polarization_angles() {
        let close = |p: &Polarization<f64>, v: [f64; 3]| {
            // compare up to a global phase via |⟨v, p⟩| = 1
            let ov: num_complex::Complex<f64> = (0..3).map(|k| p.vector()[k] * v[k]).sum();
            (ov.norm() - 1.0).abs() < 1e-12
        };
        assert!(close(&polarization_from_angles(0.0, 0.0, PolarizationKind::Linear), [1.0, 0.0, 0.0]));
        assert!(close(
            &polarization_from_angles(std::f64::consts::FRAC_PI_2, 0.0, PolarizationKind::Linear),
            [0.0, 0.0, 1.0]
        ));
        for phi in [0.0, 0.4, 2.0] {
            let c = polarization_from_angles(std::f64::consts::FRAC_PI_2, phi, PolarizationKind::Circular);
            let target = Polarization::circular([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]).unwrap();
            let ov: num_complex::Complex<f64> =
                (0..3).map(|k| target.vector()[k].conj() * c.vector()[k]).sum();
            assert_relative_eq!(ov.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn json_export() {
        let lat = build_lattice(&LatticeSpec::square(2, 0.5)).unwrap();
        let text = serde_json::to_string(&lat).unwrap();
        assert!(text.contains("\"positions\""));
        let t = displacement_table(&LatticeSpec::square(2, 0.5)).unwrap();
        let back: DisplacementTable<f64> = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back.entries, t.entries);
    }
}
