//! Antipodally symmetric quadrature grids on S^1 and S^2.
//!
//! Every field and measure in this crate lives on a [`SphereGrid`]: a set of
//! unit nodes with positive quadrature weights and an exact antipodal pairing
//! `node[antipode(i)] == -node[i]` (bitwise, nodes are constructed in ± pairs).
//!
//! * `n = 2`: uniform angular grid with `resolution` nodes and equal weights
//!   `2π/N`. Trapezoidal quadrature on the circle is spectrally accurate.
//! * `n = 3`: icosahedron subdivided `resolution` times per edge, projected to
//!   the sphere and closed under `x ↦ -x`. Weights are barycentric-lumped
//!   spherical triangle areas, followed by a least-norm correction that makes
//!   the rule exact on constants and on all second-degree moments
//!   (`∫ x_a x_b = (4π/3) δ_ab`). The correction is tiny (O(Δ²) relative) and
//!   keeps all weights positive.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes are stored as points in ℝ³; planar grids set the third coordinate
/// to zero.
pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn neg(a: &Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

#[inline]
pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn normalize(a: &Vec3) -> Vec3 {
    let n = norm(a);
    scale(a, 1.0 / n)
}

/// Quadrature grid on S^{n-1} (n = 2 or 3) with exact antipodal pairing.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    ambient_dim: usize,
    resolution: usize,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    antipode: Vec<usize>,
}

/// Serialization record for a grid (JSON: nodes trimmed to `ambient_dim`
/// coordinates).
#[derive(Debug, Serialize, Deserialize)]
pub struct GridRecord {
    pub ambient_dim: usize,
    pub resolution: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub antipode: Vec<usize>,
}

impl SphereGrid {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Vec3 {
        &self.nodes[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    pub fn antipode_map(&self) -> &[usize] {
        &self.antipode
    }

    /// One representative index per antipodal pair, in ascending order.
    pub fn even_representatives(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&i| i < self.antipode[i])
            .collect()
    }

    /// Total surface measure of the grid (2π or 4π).
    pub fn total_area(&self) -> f64 {
        match self.ambient_dim {
            2 => 2.0 * PI,
            _ => 4.0 * PI,
        }
    }

    /// Quadrature: Σ w_i v_i.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values)?;
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(self
            .weights
            .iter()
            .zip(values.iter())
            .map(|(w, v)| w * v)
            .sum())
    }

    /// Projection onto even functions: `out[i] = (v[i] + v[σ(i)]) / 2`.
    ///
    /// The output is exactly even (`out[i] == out[σ(i)]` bitwise).
    pub fn symmetrize(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.check_len(values)?;
        Ok((0..values.len())
            .map(|i| 0.5 * (values[i] + values[self.antipode[i]]))
            .collect())
    }

    /// Sup-norm of the odd part of `values`.
    pub fn odd_part_sup(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values)?;
        Ok((0..values.len())
            .map(|i| 0.5 * (values[i] - values[self.antipode[i]]).abs())
            .fold(0.0, f64::max))
    }

    pub fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.node_count() {
            return Err(Error::LengthMismatch {
                expected: self.node_count(),
                got: values.len(),
            });
        }
        Ok(())
    }

    /// Two grids are interchangeable iff dimension and resolution agree
    /// (construction is deterministic).
    pub fn same_layout(&self, other: &SphereGrid) -> bool {
        self.ambient_dim == other.ambient_dim && self.resolution == other.resolution
    }

    pub fn to_record(&self) -> GridRecord {
        GridRecord {
            ambient_dim: self.ambient_dim,
            resolution: self.resolution,
            nodes: self
                .nodes
                .iter()
                .map(|n| n[..self.ambient_dim].to_vec())
                .collect(),
            weights: self.weights.clone(),
            antipode: self.antipode.clone(),
        }
    }
}

/// Build the grid for the given ambient dimension and refinement parameter.
///
/// `resolution` must be even and at least 4: for n = 2 it is the node count,
/// for n = 3 the icosahedral subdivision frequency (node count `10 f² + 2`).
pub fn build_grid(ambient_dim: usize, resolution: usize) -> Result<SphereGrid> {
    if ambient_dim != 2 && ambient_dim != 3 {
        return Err(Error::UnsupportedDimension(ambient_dim));
    }
    if resolution < 4 || resolution % 2 != 0 {
        return Err(Error::BadResolution(resolution));
    }
    let grid = match ambient_dim {
        2 => build_circle(resolution),
        _ => build_sphere(resolution)?,
    };
    debug_assert!(grid.weights.iter().all(|&w| w > 0.0));
    Ok(grid)
}

fn build_circle(n: usize) -> SphereGrid {
    let half = n / 2;
    let mut nodes = Vec::with_capacity(n);
    for k in 0..half {
        let theta = 2.0 * PI * (k as f64) / (n as f64);
        nodes.push([theta.cos(), theta.sin(), 0.0]);
    }
    // Second half by exact negation so the antipodal pairing is bitwise.
    for k in 0..half {
        nodes.push(neg(&nodes[k]));
    }
    let antipode = (0..n).map(|i| (i + half) % n).collect();
    let w = 2.0 * PI / (n as f64);
    SphereGrid {
        ambient_dim: 2,
        resolution: n,
        nodes,
        weights: vec![w; n],
        antipode,
    }
}

/// Icosahedron vertices (unit) and outward-oriented faces.
fn icosahedron() -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = Vec::with_capacity(12);
    for &s1 in &[1.0, -1.0] {
        for &s2 in &[1.0, -1.0] {
            verts.push([0.0, s1, s2 * phi]);
            verts.push([s1, s2 * phi, 0.0]);
            verts.push([s2 * phi, 0.0, s1]);
        }
    }
    // Edges of the unnormalized icosahedron have squared length 4.
    let mut faces = Vec::with_capacity(20);
    let adj = |a: &Vec3, b: &Vec3| {
        let d = sub(a, b);
        (dot(&d, &d) - 4.0).abs() < 1e-9
    };
    for i in 0..12 {
        for j in (i + 1)..12 {
            if !adj(&verts[i], &verts[j]) {
                continue;
            }
            for k in (j + 1)..12 {
                if adj(&verts[i], &verts[k]) && adj(&verts[j], &verts[k]) {
                    // orient outward
                    let c = cross(&sub(&verts[j], &verts[i]), &sub(&verts[k], &verts[i]));
                    if dot(&c, &verts[i]) > 0.0 {
                        faces.push([i, j, k]);
                    } else {
                        faces.push([i, k, j]);
                    }
                }
            }
        }
    }
    debug_assert_eq!(faces.len(), 20);
    let verts = verts.iter().map(normalize).collect();
    (verts, faces)
}

/// Spatial hash map used to deduplicate subdivision vertices.
struct PointDedup {
    map: std::collections::HashMap<(i64, i64, i64), Vec<usize>>,
    points: Vec<Vec3>,
    tol: f64,
}

impl PointDedup {
    fn new(tol: f64) -> Self {
        PointDedup {
            map: std::collections::HashMap::new(),
            points: Vec::new(),
            tol,
        }
    }

    fn key(&self, p: &Vec3) -> (i64, i64, i64) {
        let s = 1.0 / (self.tol * 16.0);
        (
            (p[0] * s).round() as i64,
            (p[1] * s).round() as i64,
            (p[2] * s).round() as i64,
        )
    }

    fn find(&self, p: &Vec3) -> Option<usize> {
        let (kx, ky, kz) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.map.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &id in ids {
                            if norm(&sub(&self.points[id], p)) < self.tol {
                                return Some(id);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, p: Vec3) -> usize {
        if let Some(id) = self.find(&p) {
            return id;
        }
        let id = self.points.len();
        let key = self.key(&p);
        self.points.push(p);
        self.map.entry(key).or_default().push(id);
        id
    }
}

fn build_sphere(frequency: usize) -> Result<SphereGrid> {
    let f = frequency;
    let (base_verts, base_faces) = icosahedron();

    let mut dedup = PointDedup::new(1e-9);
    let mut triangles: Vec<[usize; 3]> = Vec::new();

    for face in &base_faces {
        let (a, b, c) = (
            base_verts[face[0]],
            base_verts[face[1]],
            base_verts[face[2]],
        );
        // Barycentric lattice on the face, projected to the sphere.
        let mut local = vec![0usize; (f + 1) * (f + 2) / 2];
        let idx = |i: usize, j: usize| -> usize {
            // row i in 0..=f, column j in 0..=(f-i)
            i * (2 * f + 3 - i) / 2 + j
        };
        for i in 0..=f {
            for j in 0..=(f - i) {
                let k = f - i - j;
                let p = [
                    (i as f64) * a[0] + (j as f64) * b[0] + (k as f64) * c[0],
                    (i as f64) * a[1] + (j as f64) * b[1] + (k as f64) * c[1],
                    (i as f64) * a[2] + (j as f64) * b[2] + (k as f64) * c[2],
                ];
                local[idx(i, j)] = dedup.insert(normalize(&p));
            }
        }
        for i in 0..f {
            for j in 0..(f - i) {
                triangles.push([local[idx(i, j)], local[idx(i + 1, j)], local[idx(i, j + 1)]]);
                if j + 1 < f - i {
                    triangles.push([
                        local[idx(i + 1, j)],
                        local[idx(i + 1, j + 1)],
                        local[idx(i, j + 1)],
                    ]);
                }
            }
        }
    }

    let unique = dedup.points.clone();
    let n_unique = unique.len();
    debug_assert_eq!(n_unique, 10 * f * f + 2);

    // Pair each vertex with its antipode and re-emit nodes in ± pairs so the
    // pairing is exact. The canonical representative of a pair is the
    // lexicographically larger endpoint.
    let mut old_to_new = vec![usize::MAX; n_unique];
    let mut nodes: Vec<Vec3> = Vec::with_capacity(n_unique);
    for i in 0..n_unique {
        if old_to_new[i] != usize::MAX {
            continue;
        }
        let p = unique[i];
        let q = neg(&p);
        let j = dedup
            .find(&q)
            .ok_or_else(|| Error::DegenerateBody("node set is not antipodally closed".into()))?;
        if i == j {
            return Err(Error::DegenerateBody("self-antipodal node".into()));
        }
        let rep = if p > q { p } else { q };
        let (rep_old, other_old) = if p > q { (i, j) } else { (j, i) };
        old_to_new[rep_old] = nodes.len();
        old_to_new[other_old] = nodes.len() + 1;
        nodes.push(rep);
        nodes.push(neg(&rep));
    }
    let n_nodes = nodes.len();
    debug_assert_eq!(n_nodes, n_unique);
    let antipode: Vec<usize> = (0..n_nodes)
        .map(|i| if i % 2 == 0 { i + 1 } else { i - 1 })
        .collect();

    // Lumped weights: a third of each incident spherical triangle area.
    let mut weights = vec![0.0f64; n_nodes];
    for t in &triangles {
        let (a, b, c) = (
            nodes[old_to_new[t[0]]],
            nodes[old_to_new[t[1]]],
            nodes[old_to_new[t[2]]],
        );
        let area = spherical_triangle_area(&a, &b, &c);
        let third = area / 3.0;
        weights[old_to_new[t[0]]] += third;
        weights[old_to_new[t[1]]] += third;
        weights[old_to_new[t[2]]] += third;
    }
    // Exact antipodal invariance of the weights.
    for i in (0..n_nodes).step_by(2) {
        let w = 0.5 * (weights[i] + weights[i + 1]);
        weights[i] = w;
        weights[i + 1] = w;
    }

    moment_correct_weights(&nodes, &mut weights)?;

    for &w in &weights {
        if !(w > 0.0) {
            return Err(Error::OptimizationFailure(
                "non-positive quadrature weight after moment correction".into(),
            ));
        }
    }

    Ok(SphereGrid {
        ambient_dim: 3,
        resolution: f,
        nodes,
        weights,
        antipode,
    })
}

/// Area of the spherical triangle with unit vertices a, b, c (L'Huilier).
fn spherical_triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let side = |u: &Vec3, v: &Vec3| 2.0 * (0.5 * norm(&sub(u, v))).min(1.0).asin();
    let (sa, sb, sc) = (side(b, c), side(a, c), side(a, b));
    let s = 0.5 * (sa + sb + sc);
    let t = (0.5 * s).tan()
        * (0.5 * (s - sa)).tan()
        * (0.5 * (s - sb)).tan()
        * (0.5 * (s - sc)).tan();
    4.0 * t.max(0.0).sqrt().atan()
}

/// Least-norm weight correction enforcing Σw = 4π and Σ w x_a x_b = (4π/3) δ_ab.
///
/// The constraint functions are even, so the correction preserves the exact
/// antipodal invariance of the weights.
fn moment_correct_weights(nodes: &[Vec3], weights: &mut [f64]) -> Result<()> {
    use nalgebra::{DMatrix, DVector};
    let n = nodes.len();
    let m = 7;
    // rows: 1, x², y², z², xy, xz, yz
    let basis = |p: &Vec3| -> [f64; 7] {
        [
            1.0,
            p[0] * p[0],
            p[1] * p[1],
            p[2] * p[2],
            p[0] * p[1],
            p[0] * p[2],
            p[1] * p[2],
        ]
    };
    let target = [
        4.0 * PI,
        4.0 * PI / 3.0,
        4.0 * PI / 3.0,
        4.0 * PI / 3.0,
        0.0,
        0.0,
        0.0,
    ];
    let mut c = DMatrix::<f64>::zeros(m, n);
    for (j, p) in nodes.iter().enumerate() {
        let b = basis(p);
        for i in 0..m {
            c[(i, j)] = b[i];
        }
    }
    let w = DVector::from_column_slice(weights);
    let defect = DVector::from_iterator(m, (0..m).map(|i| target[i] - (c.row(i) * &w)[0]));
    let gram = &c * c.transpose();
    let alpha = gram
        .lu()
        .solve(&defect)
        .ok_or_else(|| Error::OptimizationFailure("singular moment-correction system".into()))?;
    let delta = c.transpose() * alpha;
    for j in 0..n {
        weights[j] += delta[j];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_grid_basics() {
        let g = build_grid(2, 8).unwrap();
        assert_eq!(g.node_count(), 8);
        let w: f64 = g.weights().iter().sum();
        assert!((w - 2.0 * PI).abs() < 1e-10);
        for w in g.weights() {
            assert!((w - 2.0 * PI / 8.0).abs() < 1e-15);
        }
        for i in 0..8 {
            let j = g.antipode(i);
            assert_eq!(g.antipode(j), i);
            assert_ne!(i, j);
            let n = g.node(i);
            let m = g.node(j);
            assert_eq!(m[0], -n[0]);
            assert_eq!(m[1], -n[1]);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_grid(4, 8).is_err());
        assert!(build_grid(2, 7).is_err());
        assert!(build_grid(2, 2).is_err());
        assert!(build_grid(3, 5).is_err());
    }

    #[test]
    fn sphere_grid_weights_sum_to_area() {
        for f in [4usize, 6, 16] {
            let g = build_grid(3, f).unwrap();
            assert_eq!(g.node_count(), 10 * f * f + 2);
            let w: f64 = g.weights().iter().sum();
            assert!(
                (w - 4.0 * PI).abs() < 1e-6,
                "f={f}: sum {w} vs {}",
                4.0 * PI
            );
            for i in 0..g.node_count() {
                assert!((norm(g.node(i)) - 1.0).abs() < 1e-12);
                let j = g.antipode(i);
                assert_eq!(g.antipode(j), i);
                let n = g.node(i);
                let m = g.node(j);
                assert_eq!(m[0], -n[0]);
                assert_eq!(m[1], -n[1]);
                assert_eq!(m[2], -n[2]);
                assert_eq!(g.weights()[i], g.weights()[j]);
            }
        }
    }

    #[test]
    fn integrate_constants_and_odd() {
        let g = build_grid(2, 64).unwrap();
        let one = vec![1.0; g.node_count()];
        assert!((g.integrate(&one).unwrap() - 2.0 * PI).abs() < 1e-12);
        let odd: Vec<f64> = g.nodes().iter().map(|n| n[0]).collect();
        assert!(g.integrate(&odd).unwrap().abs() < 1e-12);

        let g3 = build_grid(3, 8).unwrap();
        let one = vec![1.0; g3.node_count()];
        assert!((g3.integrate(&one).unwrap() - 4.0 * PI).abs() < 1e-9);
        let odd: Vec<f64> = g3.nodes().iter().map(|n| n[2]).collect();
        assert!(g3.integrate(&odd).unwrap().abs() < 1e-12);
    }

    #[test]
    fn integrate_second_moment() {
        // ∫ (x·e1)² = |S^{n-1}|/n
        let g = build_grid(2, 32).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|n| n[0] * n[0]).collect();
        assert!((g.integrate(&v).unwrap() - PI).abs() < 1e-12);

        for f in [4usize, 8, 16] {
            let g3 = build_grid(3, f).unwrap();
            let v: Vec<f64> = g3.nodes().iter().map(|n| n[0] * n[0]).collect();
            let err = (g3.integrate(&v).unwrap() - 4.0 * PI / 3.0).abs();
            assert!(err < 1e-5, "f={f}: moment error {err}");
        }
    }

    #[test]
    fn refinement_improves_higher_moments() {
        // Low moments are exact: degree 2 by the weight correction, degree 4
        // by icosahedral symmetry (no invariant harmonic below degree 6). The
        // sixth moment ∫ (x·e1)^6 = 4π/7 measures genuine refinement.
        for (deg, exact) in [(2, 4.0 * PI / 3.0), (4, 4.0 * PI / 5.0)] {
            let g = build_grid(3, 8).unwrap();
            let v: Vec<f64> = g.nodes().iter().map(|n| n[0].powi(deg)).collect();
            assert!((g.integrate(&v).unwrap() - exact).abs() < 1e-12);
        }
        let exact = 4.0 * PI / 7.0;
        let mut last = f64::INFINITY;
        for f in [4usize, 8, 16] {
            let g = build_grid(3, f).unwrap();
            let v: Vec<f64> = g.nodes().iter().map(|n| n[0].powi(6)).collect();
            let err = (g.integrate(&v).unwrap() - exact).abs();
            assert!(err <= last, "f={f}: err {err} vs previous {last}");
            last = err;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn symmetrize_projection() {
        let g = build_grid(3, 4).unwrap();
        let v: Vec<f64> = g
            .nodes()
            .iter()
            .map(|n| 1.0 + n[0] + 0.3 * n[1] * n[2])
            .collect();
        let s = g.symmetrize(&v).unwrap();
        let ss = g.symmetrize(&s).unwrap();
        assert_eq!(s, ss, "idempotent projection");
        for i in 0..g.node_count() {
            assert_eq!(s[i], s[g.antipode(i)]);
        }
        // weights are antipode-invariant, so integration is preserved
        let a = g.integrate(&v).unwrap();
        let b = g.integrate(&s).unwrap();
        assert!((a - b).abs() < 1e-12);

        let odd: Vec<f64> = g.nodes().iter().map(|n| n[0]).collect();
        let z = g.symmetrize(&odd).unwrap();
        assert!(z.iter().all(|&x| x.abs() < 1e-16));

        let mix: Vec<f64> = g.nodes().iter().map(|n| 1.0 + n[0]).collect();
        let c = g.symmetrize(&mix).unwrap();
        assert!(c.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn grid_record_roundtrip() {
        let g = build_grid(2, 8).unwrap();
        let rec = g.to_record();
        let json = serde_json::to_string(&rec).unwrap();
        let back: GridRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.ambient_dim, 2);
        assert_eq!(back.resolution, 8);
        assert_eq!(back.nodes.len(), 8);
        assert_eq!(back.nodes[0].len(), 2);
    }
}
