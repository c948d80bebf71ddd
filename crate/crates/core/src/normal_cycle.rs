//! An explicit normal-cycle structure for complexes in ambient dimension
//! at most 3.
//!
//! The cycle is stored as a stratified multiplicity function: for every
//! simplex `σ` the great subsphere `σ^⊥ ∩ Σˇ` is partitioned by the
//! hyperplanes `{ξ · (w - v) = 0}` over link vertices `w`, and every
//! top-dimensional cell of that arrangement carries the (constant) Morse
//! index of covectors in its interior. Pieces with multiplicity zero are not
//! stored.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{CellSelection, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::euler::cell_sign;
use crate::geometry::{cross3, dot, norm, rot90, Covector};
use crate::morse::{MorseDataSlice, SliceAtom};

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Tolerance for coplanarity of link vertices with a codimension-1 simplex.
const FLAT_TOL: f64 = 1e-9;
/// Tolerance for merging coincident arrangement hyperplanes and cut points.
const MERGE_TOL: f64 = 1e-9;
/// Tolerance for vertex classification while clipping spherical polygons.
const CLIP_TOL: f64 = 1e-12;

/// A cell of the arrangement on the carrier sphere `σ^⊥ ∩ Σˇ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SphericalCell {
    /// One point of a 0-sphere carrier (σ has codimension 1).
    Point { dir: Covector },
    /// An uncut circle carrier.
    Circle { basis: [Covector; 2] },
    /// An open arc of the carrier circle: angles in the orthonormal basis,
    /// counterclockwise, `0 <= theta0 < theta1 <= theta0 + 2π`.
    Arc { basis: [Covector; 2], theta0: f64, theta1: f64 },
    /// The whole 2-sphere (an isolated vertex in R^3).
    Sphere,
    /// An open convex spherical polygon on S^2; vertices are unit covectors
    /// in counterclockwise order viewed from outside.
    Polygon { verts: Vec<Covector> },
}

/// Containment of a covector in a cell, with a tolerance band around the
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

impl SphericalCell {
    /// Direction of the arc parameter `theta` in ambient coordinates.
    fn arc_dir(basis: &[Covector; 2], theta: f64) -> Covector {
        let (c, s) = (theta.cos(), theta.sin());
        Covector(
            basis[0]
                .coords()
                .iter()
                .zip(basis[1].coords())
                .map(|(b1, b2)| c * b1 + s * b2)
                .collect(),
        )
    }

    /// Representative covector in the relative interior of the cell.
    pub fn representative(&self) -> Covector {
        match self {
            SphericalCell::Point { dir } => dir.clone(),
            SphericalCell::Circle { basis } => basis[0].clone(),
            SphericalCell::Arc { basis, theta0, theta1 } => {
                Self::arc_dir(basis, 0.5 * (theta0 + theta1))
            }
            SphericalCell::Sphere => Covector(vec![0.0, 0.0, 1.0]),
            SphericalCell::Polygon { verts } => {
                let n = verts[0].dim();
                let mut sum = vec![0.0; n];
                for v in verts {
                    for (s, c) in sum.iter_mut().zip(v.coords()) {
                        *s += c;
                    }
                }
                Covector::unit(&sum).expect("convex spherical polygon has interior")
            }
        }
    }

    /// Sample covectors witnessing the cell (its corners plus an interior
    /// point), used by the structural checks.
    pub fn sample_points(&self) -> Vec<Covector> {
        match self {
            SphericalCell::Point { dir } => vec![dir.clone()],
            SphericalCell::Circle { basis } => {
                vec![basis[0].clone(), basis[1].clone(), basis[0].negated()]
            }
            SphericalCell::Arc { basis, theta0, theta1 } => vec![
                Self::arc_dir(basis, *theta0),
                Self::arc_dir(basis, 0.5 * (theta0 + theta1)),
                Self::arc_dir(basis, *theta1),
            ],
            SphericalCell::Sphere => vec![
                Covector(vec![1.0, 0.0, 0.0]),
                Covector(vec![0.0, 1.0, 0.0]),
                Covector(vec![0.0, 0.0, 1.0]),
            ],
            SphericalCell::Polygon { verts } => {
                let mut out = verts.clone();
                out.push(self.representative());
                out
            }
        }
    }

    /// The normalized measure of the cell within its carrier sphere.
    pub fn carrier_fraction(&self) -> f64 {
        match self {
            SphericalCell::Point { .. } => 0.5,
            SphericalCell::Circle { .. } | SphericalCell::Sphere => 1.0,
            SphericalCell::Arc { theta0, theta1, .. } => (theta1 - theta0) / TAU,
            SphericalCell::Polygon { verts } => spherical_polygon_area(verts) / (4.0 * PI),
        }
    }

    /// Whether `xi` (a unit covector) lies in the cell, on its boundary
    /// within `tol`, or outside.
    pub fn contains(&self, xi: &Covector, tol: f64) -> Containment {
        match self {
            SphericalCell::Point { dir } => {
                let d = dot(xi.coords(), dir.coords());
                if d >= 1.0 - tol {
                    Containment::Inside
                } else {
                    Containment::Outside
                }
            }
            SphericalCell::Circle { .. } | SphericalCell::Sphere => Containment::Inside,
            SphericalCell::Arc { basis, theta0, theta1 } => {
                let x = dot(xi.coords(), basis[0].coords());
                let y = dot(xi.coords(), basis[1].coords());
                let mut th = y.atan2(x);
                while th < *theta0 {
                    th += TAU;
                }
                // th in [theta0, theta0 + 2π)
                let ang_tol = tol;
                if th > theta0 + ang_tol && th < theta1 - ang_tol {
                    Containment::Inside
                } else if th <= theta0 + ang_tol
                    || (th >= theta1 - ang_tol && th <= theta1 + ang_tol)
                    || th >= theta0 + TAU - ang_tol
                {
                    Containment::Boundary
                } else {
                    Containment::Outside
                }
            }
            SphericalCell::Polygon { verts } => {
                let mut worst = f64::INFINITY;
                for i in 0..verts.len() {
                    let a = &verts[i];
                    let b = &verts[(i + 1) % verts.len()];
                    let m = cross3(a.coords(), b.coords());
                    let len = norm(&m);
                    if len < CLIP_TOL {
                        continue;
                    }
                    let d = dot(&m, xi.coords()) / len;
                    worst = worst.min(d);
                }
                if worst > tol {
                    Containment::Inside
                } else if worst >= -tol {
                    Containment::Boundary
                } else {
                    Containment::Outside
                }
            }
        }
    }
}

/// One piece of the normal cycle: a simplex, a cell of its carrier
/// arrangement, and the constant Morse index over that cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalCyclePiece {
    pub simplex: Simplex,
    pub cell: SphericalCell,
    pub multiplicity: i64,
}

/// The normal cycle of a complex: the full list of nonzero-index pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalCycle {
    complex: SimplicialComplex,
    pieces: Vec<NormalCyclePiece>,
}

impl NormalCycle {
    /// Reassembles a cycle from parts (deserialized dumps, corrupted test
    /// fixtures). No verification is performed here; use the check
    /// functions.
    pub fn from_parts(complex: SimplicialComplex, pieces: Vec<NormalCyclePiece>) -> Self {
        NormalCycle { complex, pieces }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn pieces(&self) -> &[NormalCyclePiece] {
        &self.pieces
    }

    pub fn into_parts(self) -> (SimplicialComplex, Vec<NormalCyclePiece>) {
        (self.complex, self.pieces)
    }
}

/// Builds the normal cycle of a complex in ambient dimension <= 3: for every
/// simplex, the arrangement of link hyperplanes on its carrier sphere is
/// enumerated and every top-dimensional cell with nonzero index becomes a
/// piece.
pub fn build_normal_cycle(cx: &SimplicialComplex) -> Result<NormalCycle> {
    let n = cx.ambient_dim();
    if n > 3 {
        return Err(Error::UnsupportedDimension(format!(
            "normal cycles are supported for ambient dimension <= 3, got {n}"
        )));
    }
    if cx.is_empty() {
        return Ok(NormalCycle { complex: cx.clone(), pieces: Vec::new() });
    }

    let indices: Vec<usize> = (0..cx.cell_count()).collect();
    let mut groups: Vec<(usize, Vec<NormalCyclePiece>)> = indices
        .par_iter()
        .map(|&ci| (ci, pieces_for_simplex(cx, ci)))
        .collect();
    groups.sort_by_key(|(ci, _)| *ci);
    let pieces = groups.into_iter().flat_map(|(_, p)| p).collect();
    Ok(NormalCycle { complex: cx.clone(), pieces })
}

/// The index `1 - χ(upper link)` for a fixed sign assignment on the link
/// vertices: the upper link is the full subcomplex of the link on the
/// strictly positive vertices.
fn index_from_signs(
    cx: &SimplicialComplex,
    link_cells: &[usize],
    sign_of: &HashMap<u32, i8>,
) -> i64 {
    let chi: i64 = link_cells
        .iter()
        .map(|&lc| cx.cell(lc))
        .filter(|s| s.vertices().iter().all(|w| sign_of[w] > 0))
        .map(|s| cell_sign(s.dim()))
        .sum();
    1 - chi
}

fn pieces_for_simplex(cx: &SimplicialComplex, ci: usize) -> Vec<NormalCyclePiece> {
    let sigma = cx.cell(ci);
    let n = cx.ambient_dim();
    let s = sigma.dim();
    if s >= n {
        // A full-dimensional simplex has an empty carrier sphere. (A simplex
        // of dimension > ambient cannot be embedded and is rejected at
        // build time.)
        return Vec::new();
    }

    let v0 = sigma.vertices()[0];
    let p0 = cx.position(v0);
    let tangent: Vec<Vec<f64>> = {
        let edges: Vec<Vec<f64>> =
            sigma.vertices()[1..].iter().map(|&v| cx.position(v).sub(p0)).collect();
        orthonormalize(&edges)
    };
    let carrier = orthonormal_complement(&tangent, n);
    debug_assert_eq!(carrier.len(), n - s);

    let link_cells = cx.link_of_cell(sigma).expect("sigma is a cell");
    let mut link_verts: Vec<u32> = Vec::new();
    for &lc in &link_cells {
        for &w in cx.cell(lc).vertices() {
            if !link_verts.contains(&w) {
                link_verts.push(w);
            }
        }
    }
    let offsets: Vec<(u32, Vec<f64>)> =
        link_verts.iter().map(|&w| (w, cx.position(w).sub(p0))).collect();

    let mut out = Vec::new();
    let mut emit = |cell: SphericalCell, signs: &HashMap<u32, i8>| {
        let m = index_from_signs(cx, &link_cells, signs);
        if m != 0 {
            out.push(NormalCyclePiece { simplex: sigma.clone(), cell, multiplicity: m });
        }
    };

    match carrier.len() {
        1 => {
            // S^0 carrier: two antipodal unit normals. Link vertices may be
            // coplanar with sigma (flat neighborhoods); they count as 0 and
            // never enter an upper link.
            let nv = &carrier[0];
            for dir in [nv.clone(), nv.iter().map(|c| -c).collect::<Vec<f64>>()] {
                let signs: HashMap<u32, i8> = offsets
                    .iter()
                    .map(|(w, u)| {
                        let d = dot(&dir, u);
                        let band = FLAT_TOL * norm(u);
                        (*w, if d.abs() <= band { 0 } else if d > 0.0 { 1 } else { -1 })
                    })
                    .collect();
                emit(SphericalCell::Point { dir: Covector(dir.clone()) }, &signs);
            }
        }
        2 => {
            let b1 = Covector(carrier[0].clone());
            let b2 = Covector(carrier[1].clone());
            // Project each link hyperplane onto the carrier plane; collect
            // the two antipodal cut angles per non-degenerate trace.
            let mut cuts: Vec<f64> = Vec::new();
            let mut flats: Vec<u32> = Vec::new();
            for (w, u) in &offsets {
                let c1 = dot(b1.coords(), u);
                let c2 = dot(b2.coords(), u);
                let r = (c1 * c1 + c2 * c2).sqrt();
                if r <= FLAT_TOL * norm(u) {
                    flats.push(*w);
                    continue;
                }
                let alpha = (-c1).atan2(c2);
                cuts.push(normalize_angle(alpha));
                cuts.push(normalize_angle(alpha + PI));
            }
            cuts.sort_unstable_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL);
            if cuts.len() >= 2 && (cuts[cuts.len() - 1] - TAU - cuts[0]).abs() <= MERGE_TOL {
                cuts.pop();
            }

            if cuts.is_empty() {
                let signs: HashMap<u32, i8> = link_verts.iter().map(|&w| (w, 0)).collect();
                emit(SphericalCell::Circle { basis: [b1.clone(), b2.clone()] }, &signs);
            } else {
                for i in 0..cuts.len() {
                    let theta0 = cuts[i];
                    let theta1 = if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + TAU };
                    let rep = SphericalCell::arc_dir(&[b1.clone(), b2.clone()], 0.5 * (theta0 + theta1));
                    let signs: HashMap<u32, i8> = offsets
                        .iter()
                        .map(|(w, u)| {
                            if flats.contains(w) {
                                (*w, 0)
                            } else {
                                (*w, if dot(rep.coords(), u) > 0.0 { 1 } else { -1 })
                            }
                        })
                        .collect();
                    emit(
                        SphericalCell::Arc { basis: [b1.clone(), b2.clone()], theta0, theta1 },
                        &signs,
                    );
                }
            }
        }
        3 => {
            // S^2 carrier (a vertex in R^3). The arrangement of the link
            // great circles is built by incremental convex clipping,
            // bootstrapped from the octant subdivision so every cell stays
            // a spherical polygon of angular diameter < π.
            if link_verts.is_empty() {
                let signs = HashMap::new();
                emit(SphericalCell::Sphere, &signs);
                return out;
            }
            let mut planes: Vec<Vec<f64>> = Vec::new();
            for (_, u) in &offsets {
                let nu: Vec<f64> = {
                    let l = norm(u);
                    u.iter().map(|c| c / l).collect()
                };
                let duplicate = planes
                    .iter()
                    .any(|p| norm(&cross3(p, &nu)) <= MERGE_TOL);
                if !duplicate {
                    planes.push(nu);
                }
            }
            let mut cells: Vec<Vec<Vec<f64>>> = octant_triangles();
            for plane in &planes {
                let mut next = Vec::with_capacity(cells.len() * 2);
                for cell in &cells {
                    for keep_positive in [true, false] {
                        let part = clip_spherical(cell, plane, keep_positive);
                        if part.len() >= 3 {
                            next.push(part);
                        }
                    }
                }
                cells = next;
            }
            for cell in cells {
                let mut rep = vec![0.0; 3];
                for v in &cell {
                    for (r, c) in rep.iter_mut().zip(v) {
                        *r += c;
                    }
                }
                let l = norm(&rep);
                if l < CLIP_TOL {
                    continue;
                }
                for r in rep.iter_mut() {
                    *r /= l;
                }
                let signs: HashMap<u32, i8> = offsets
                    .iter()
                    .map(|(w, u)| (*w, if dot(&rep, u) > 0.0 { 1 } else { -1 }))
                    .collect();
                let verts = cell.into_iter().map(Covector).collect();
                emit(SphericalCell::Polygon { verts }, &signs);
            }
        }
        _ => {}
    }
    out
}

/// Slices the normal cycle at a generic unit covector: the atoms are the
/// vertex pieces whose cell contains `ξ`. For generic `ξ` only vertices
/// contribute (a positive-dimensional simplex would need `ξ ⊥ σ` exactly).
/// The result equals the Morse-data slice of the underlying complex.
pub fn slice_at(nc: &NormalCycle, xi: &Covector) -> Result<MorseDataSlice> {
    if !xi.is_unit() {
        return Err(Error::InvalidInput("slice covector must be a unit covector".into()));
    }
    let cx = &nc.complex;
    let tol = 1e-9;
    let mut atoms: Vec<SliceAtom> = Vec::new();
    for piece in &nc.pieces {
        if piece.simplex.dim() == 0 {
            match piece.cell.contains(xi, tol) {
                Containment::Inside => {
                    let v = piece.simplex.vertices()[0];
                    atoms.push(SliceAtom {
                        vertex: v,
                        index: piece.multiplicity,
                        level: xi.eval(cx.position(v)),
                    });
                }
                Containment::Boundary => {
                    return Err(Error::NonGenericCovector(format!(
                        "covector lies on a cell boundary of vertex piece {}",
                        piece.simplex
                    )));
                }
                Containment::Outside => {}
            }
        } else {
            // xi must not be orthogonal to any positive-dimensional simplex
            // carrying a piece; that is the measure-zero non-generic locus.
            let v0 = piece.simplex.vertices()[0];
            let p0 = cx.position(v0);
            let edges: Vec<Vec<f64>> = piece.simplex.vertices()[1..]
                .iter()
                .map(|&v| cx.position(v).sub(p0))
                .collect();
            let basis = orthonormalize(&edges);
            let tangential: f64 = basis
                .iter()
                .map(|b| dot(xi.coords(), b).powi(2))
                .sum::<f64>()
                .sqrt();
            if tangential <= tol {
                return Err(Error::NonGenericCovector(format!(
                    "covector is orthogonal to simplex {}",
                    piece.simplex
                )));
            }
        }
    }
    atoms.sort_by(|a, b| a.level.total_cmp(&b.level));
    Ok(MorseDataSlice { xi: xi.clone(), atoms })
}

/// Report of the structural Legendrian check: every piece's cell must lie in
/// `σ^⊥`, i.e. sample covectors annihilate all edge vectors of `σ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LegendrianReport {
    pub max_violation: f64,
    pub tolerance: f64,
    /// Piece index and violation for every piece above tolerance.
    pub violations: Vec<(usize, f64)>,
}

impl LegendrianReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the Legendrian (orthogonality) condition structurally.
pub fn check_legendrian(nc: &NormalCycle) -> LegendrianReport {
    let cx = &nc.complex;
    let tolerance = 1e-9 * cx.diameter().max(1.0);
    let mut max_violation: f64 = 0.0;
    let mut violations = Vec::new();
    for (pi, piece) in nc.pieces.iter().enumerate() {
        let verts = piece.simplex.vertices();
        let mut worst: f64 = 0.0;
        for sample in piece.cell.sample_points() {
            for i in 0..verts.len() {
                for j in (i + 1)..verts.len() {
                    let e = cx.position(verts[j]).sub(cx.position(verts[i]));
                    worst = worst.max(sample.dot_vec(&e).abs());
                }
            }
        }
        max_violation = max_violation.max(worst);
        if worst > tolerance {
            violations.push((pi, worst));
        }
    }
    LegendrianReport { max_violation, tolerance, violations }
}

/// Report of the boundary cancellation check in the plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleReport {
    /// Junction atoms (vertex id, direction, residual) with nonzero residual.
    pub unbalanced: Vec<(u32, Vec<f64>, i64)>,
}

impl CycleReport {
    pub fn passed(&self) -> bool {
        self.unbalanced.is_empty()
    }
}

/// Verifies `∂N = 0` for ambient dimension 2 by exact combinatorial
/// bookkeeping: vertex arcs are oriented counterclockwise, an edge piece is
/// traversed along the 90-degrees-counterclockwise rotation of its normal,
/// and the signed endpoint contributions must cancel at every junction of
/// the support.
pub fn check_cycle_2d(nc: &NormalCycle) -> Result<CycleReport> {
    let cx = &nc.complex;
    if cx.ambient_dim() != 2 {
        return Err(Error::UnsupportedDimension(
            "the boundary check is implemented for ambient dimension 2".into(),
        ));
    }
    // Signed atoms of the boundary: (vertex id, direction on the circle).
    let mut atoms: Vec<(u32, [f64; 2], i64)> = Vec::new();
    for piece in &nc.pieces {
        let m = piece.multiplicity;
        match (&piece.cell, piece.simplex.dim()) {
            (SphericalCell::Circle { .. }, 0) => {}
            (SphericalCell::Arc { basis, theta0, theta1 }, 0) => {
                let v = piece.simplex.vertices()[0];
                let start = SphericalCell::arc_dir(basis, *theta0);
                let end = SphericalCell::arc_dir(basis, *theta1);
                atoms.push((v, [start.coords()[0], start.coords()[1]], -m));
                atoms.push((v, [end.coords()[0], end.coords()[1]], m));
            }
            (SphericalCell::Point { dir }, 1) => {
                let (a, b) = (piece.simplex.vertices()[0], piece.simplex.vertices()[1]);
                let d = rot90(dir.coords());
                let along = dot(&cx.position(b).sub(cx.position(a)), &d);
                let (head, tail) = if along > 0.0 { (b, a) } else { (a, b) };
                atoms.push((head, [dir.coords()[0], dir.coords()[1]], m));
                atoms.push((tail, [dir.coords()[0], dir.coords()[1]], -m));
            }
            (cell, dim) => {
                return Err(Error::InvalidInput(format!(
                    "unexpected piece in the plane: simplex dimension {dim}, cell {cell:?}"
                )));
            }
        }
    }
    // Group by vertex exactly and by direction within tolerance.
    let mut unbalanced = Vec::new();
    let mut by_vertex: HashMap<u32, Vec<([f64; 2], i64)>> = HashMap::new();
    for (v, dir, m) in atoms {
        let groups = by_vertex.entry(v).or_default();
        match groups.iter_mut().find(|(d, _)| close_dirs(d, &dir)) {
            Some((_, sum)) => *sum += m,
            None => groups.push((dir, m)),
        }
    }
    let mut vertex_ids: Vec<u32> = by_vertex.keys().copied().collect();
    vertex_ids.sort_unstable();
    for v in vertex_ids {
        for (dir, sum) in &by_vertex[&v] {
            if *sum != 0 {
                unbalanced.push((v, dir.to_vec(), *sum));
            }
        }
    }
    Ok(CycleReport { unbalanced })
}

fn close_dirs(a: &[f64; 2], b: &[f64; 2]) -> bool {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() <= 1e-7
}

/// The conical extension of a normal cycle: each piece's cell is replaced by
/// the cone over it, and the zero-section term is recorded as the
/// caller-supplied full-dimensional body. The only semantic content is that
/// slicing the cone at any positive multiple of a unit covector reproduces
/// the slice of the base cycle.
#[derive(Debug, Clone)]
pub struct ConicalExtension {
    base: NormalCycle,
    zero_section: Option<CellSelection>,
}

/// Builds the conical extension. If `full_dim_body` is given it must be a
/// face-closed selection; it is stored as the zero-section term and takes no
/// part in slicing at nonzero covectors.
pub fn cone_extend(nc: &NormalCycle, full_dim_body: Option<CellSelection>) -> Result<ConicalExtension> {
    if let Some(sel) = &full_dim_body {
        if !sel.is_face_closed(nc.complex()) {
            return Err(Error::NotFaceClosed("cone zero-section body".into()));
        }
    }
    Ok(ConicalExtension { base: nc.clone(), zero_section: full_dim_body })
}

impl ConicalExtension {
    pub fn base(&self) -> &NormalCycle {
        &self.base
    }

    pub fn zero_section(&self) -> Option<&CellSelection> {
        self.zero_section.as_ref()
    }

    /// Number of conical pieces (one per base piece, plus the zero section).
    pub fn piece_count(&self) -> usize {
        self.base.pieces().len() + usize::from(self.zero_section.is_some())
    }

    /// Slices the cone at any nonzero covector: conical invariance means the
    /// slice only depends on the ray direction.
    pub fn slice(&self, xi: &Covector) -> Result<MorseDataSlice> {
        let n = xi.norm();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("cone slice needs a nonzero covector".into()));
        }
        slice_at(&self.base, &Covector(xi.coords().iter().map(|c| c / n).collect()))
    }
}

fn normalize_angle(a: f64) -> f64 {
    let mut x = a % TAU;
    if x < 0.0 {
        x += TAU;
    }
    x
}

/// Modified Gram-Schmidt; returns an orthonormal basis of the span.
fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut e = v.clone();
        for b in &basis {
            let c = dot(&e, b);
            for (ei, bi) in e.iter_mut().zip(b) {
                *ei -= c * bi;
            }
        }
        let r = norm(&e);
        if r > 1e-12 * norm(v).max(1.0) {
            for ei in e.iter_mut() {
                *ei /= r;
            }
            basis.push(e);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `span`.
fn orthonormal_complement(span: &[Vec<f64>], ambient: usize) -> Vec<Vec<f64>> {
    let mut basis = span.to_vec();
    let mut complement = Vec::new();
    for k in 0..ambient {
        let mut e = vec![0.0; ambient];
        e[k] = 1.0;
        for b in &basis {
            let c = dot(&e, b);
            for (ei, bi) in e.iter_mut().zip(b) {
                *ei -= c * bi;
            }
        }
        let r = norm(&e);
        if r > 1e-9 {
            for ei in e.iter_mut() {
                *ei /= r;
            }
            basis.push(e.clone());
            complement.push(e);
        }
    }
    complement
}

/// The eight octants of S^2 as counterclockwise spherical triangles.
fn octant_triangles() -> Vec<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(8);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let a = vec![sx, 0.0, 0.0];
                let b = vec![0.0, sy, 0.0];
                let c = vec![0.0, 0.0, sz];
                let tri = if sx * sy * sz > 0.0 { vec![a, b, c] } else { vec![a, c, b] };
                out.push(tri);
            }
        }
    }
    out
}

/// Clips a convex spherical polygon by the great circle of plane `u`,
/// keeping the requested open side; vertices on the plane are kept in both
/// parts.
fn clip_spherical(poly: &[Vec<f64>], u: &[f64], keep_positive: bool) -> Vec<Vec<f64>> {
    let flip = if keep_positive { 1.0 } else { -1.0 };
    let signs: Vec<i8> = poly
        .iter()
        .map(|v| {
            let d = flip * dot(v, u);
            if d > CLIP_TOL {
                1
            } else if d < -CLIP_TOL {
                -1
            } else {
                0
            }
        })
        .collect();
    if signs.iter().all(|&s| s >= 0) {
        return if signs.iter().any(|&s| s > 0) { poly.to_vec() } else { Vec::new() };
    }
    if signs.iter().all(|&s| s <= 0) {
        return Vec::new();
    }
    let mut out: Vec<Vec<f64>> = Vec::new();
    let k = poly.len();
    for i in 0..k {
        let (a, sa) = (&poly[i], signs[i]);
        let (b, sb) = (&poly[(i + 1) % k], signs[(i + 1) % k]);
        if sa >= 0 {
            out.push(a.clone());
        }
        if sa as i32 * sb as i32 == -1 {
            let m = cross3(a, b);
            let mut d = cross3(&m, u).to_vec();
            let l = norm(&d);
            if l > CLIP_TOL {
                for di in d.iter_mut() {
                    *di /= l;
                }
                let towards: f64 = a.iter().zip(b).map(|(x, y)| x + y).zip(&d).map(|(s, di)| s * di).sum();
                if towards < 0.0 {
                    for di in d.iter_mut() {
                        *di = -*di;
                    }
                }
                out.push(d);
            }
        }
    }
    // Deduplicate nearly coincident consecutive vertices.
    let mut dedup: Vec<Vec<f64>> = Vec::with_capacity(out.len());
    for v in out {
        let same = dedup
            .last()
            .map(|p| p.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() < 1e-10)
            .unwrap_or(false);
        if !same {
            dedup.push(v);
        }
    }
    while dedup.len() >= 2 {
        let first = dedup.first().unwrap();
        let last = dedup.last().unwrap();
        let d: f64 = first.iter().zip(last).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if d < 1e-10 {
            dedup.pop();
        } else {
            break;
        }
    }
    if dedup.len() < 3 {
        return Vec::new();
    }
    dedup
}

/// Area of a convex spherical polygon via the angle excess.
pub(crate) fn spherical_polygon_area(verts: &[Covector]) -> f64 {
    let k = verts.len();
    let mut sum = 0.0;
    for i in 0..k {
        let v = verts[i].coords();
        let prev = verts[(i + k - 1) % k].coords();
        let next = verts[(i + 1) % k].coords();
        let t1 = tangent_at(v, prev);
        let t2 = tangent_at(v, next);
        let c = dot(&t1, &t2).clamp(-1.0, 1.0);
        sum += c.acos();
    }
    (sum - (k as f64 - 2.0) * PI).max(0.0)
}

fn tangent_at(v: &[f64], towards: &[f64]) -> Vec<f64> {
    let c = dot(v, towards);
    let mut t: Vec<f64> = towards.iter().zip(v).map(|(w, vi)| w - c * vi).collect();
    let l = norm(&t);
    if l > 0.0 {
        for ti in t.iter_mut() {
            *ti /= l;
        }
    }
    t
}
