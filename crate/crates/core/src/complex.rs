//! Embedded finite simplicial complexes: face lattices, links, selections.
//!
//! A complex is built from maximal simplices and closed under faces. The
//! geometric realization is assumed non-self-intersecting; this is not
//! checked. Intrinsic dimension is capped at 3.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Covector, Point};

/// The largest supported intrinsic dimension.
pub const MAX_DIM: usize = 3;

/// A simplex, stored as its sorted vertex ids within the owning complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Builds a simplex from vertex ids; ids are sorted and must be distinct.
    pub fn new(mut ids: Vec<u32>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::InvalidInput("empty simplex".into()));
        }
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(format!("repeated vertex id in simplex {:?}", ids)));
        }
        Ok(Simplex(ids))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        let mut out = Vec::with_capacity((1 << k) - 1);
        for mask in 1u32..(1 << k) {
            let ids: Vec<u32> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect();
            out.push(Simplex(ids));
        }
        out
    }

    /// The simplex with `v` adjoined.
    pub fn join_vertex(&self, v: u32) -> Simplex {
        let mut ids = self.0.clone();
        let pos = ids.binary_search(&v).unwrap_err();
        ids.insert(pos, v);
        Simplex(ids)
    }

    /// Key of the form "i-j-k" used by the JSON weight maps.
    pub fn key(&self) -> String {
        self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
    }

    pub fn from_key(key: &str) -> Result<Simplex> {
        let ids: std::result::Result<Vec<u32>, _> = key.split('-').map(|s| s.parse()).collect();
        match ids {
            Ok(ids) => Simplex::new(ids),
            Err(_) => Err(Error::InvalidInput(format!("bad simplex key {key:?}"))),
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

/// A finite simplicial complex embedded in Euclidean space.
///
/// Cells are stored in a canonical order (by dimension, then lexicographic on
/// vertex ids), so two complexes built from the same data compare equal.
/// Immutable after construction; all operations are pure, so shared read
/// access from multiple threads is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    vertices: Vec<Point>,
    cells: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    maximal: Vec<usize>,
    dim: usize,
    ambient: usize,
    diameter: f64,
}

/// Builds a complex from vertex positions and maximal simplices (as vertex-id
/// tuples). The face lattice is generated automatically; duplicate faces are
/// merged silently.
pub fn build_complex(vertices: Vec<Point>, maximal_simplices: &[Vec<u32>]) -> Result<SimplicialComplex> {
    let simplices: Result<Vec<Simplex>> =
        maximal_simplices.iter().map(|ids| Simplex::new(ids.clone())).collect();
    SimplicialComplex::from_maximal(vertices, simplices?)
}

impl SimplicialComplex {
    /// The empty complex in the given ambient space.
    pub fn empty(ambient: usize) -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            cells: Vec::new(),
            index: HashMap::new(),
            maximal: Vec::new(),
            dim: 0,
            ambient,
            diameter: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn from_maximal(vertices: Vec<Point>, maximal: Vec<Simplex>) -> Result<Self> {
        Self::from_maximal_impl(vertices, maximal, true)
    }

    /// Constructor for internally generated complexes (links, subcomplexes,
    /// level subdivisions). Their simplices are faces or exact convex cuts
    /// of already validated ones, so the affine-independence tolerance check
    /// is skipped; thin cells produced by repeated cutting are valid.
    pub(crate) fn from_maximal_unchecked(vertices: Vec<Point>, maximal: Vec<Simplex>) -> Result<Self> {
        Self::from_maximal_impl(vertices, maximal, false)
    }

    fn from_maximal_impl(vertices: Vec<Point>, maximal: Vec<Simplex>, validate: bool) -> Result<Self> {
        if vertices.is_empty() {
            if maximal.is_empty() {
                return Ok(Self::empty(0));
            }
            return Err(Error::InvalidInput("simplices given without vertices".into()));
        }
        let ambient = vertices[0].dim();
        if vertices.iter().any(|p| p.dim() != ambient) {
            return Err(Error::InvalidInput("inconsistent ambient dimensions".into()));
        }
        // Exactly coincident vertex positions are almost always an input bug
        // and they break genericity sampling, so reject them outright.
        {
            let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
            for (i, p) in vertices.iter().enumerate() {
                let key: Vec<u64> = p.coords().iter().map(|c| c.to_bits()).collect();
                if let Some(j) = seen.insert(key, i) {
                    return Err(Error::DuplicateVertex(format!(
                        "vertices {j} and {i} have identical coordinates"
                    )));
                }
            }
        }
        let mut simplices = maximal;
        if simplices.is_empty() {
            // A bare point cloud: every vertex is a maximal 0-cell.
            simplices = (0..vertices.len() as u32).map(|v| Simplex(vec![v])).collect();
        }
        for s in &simplices {
            if s.dim() > MAX_DIM {
                return Err(Error::UnsupportedDimension(format!(
                    "simplex {s} has dimension {} > {MAX_DIM}",
                    s.dim()
                )));
            }
            for &v in s.vertices() {
                if v as usize >= vertices.len() {
                    return Err(Error::UnknownVertex(v as usize));
                }
            }
            if validate {
                check_affinely_independent(&vertices, s)?;
            }
        }

        // Face closure, deduplicated.
        let mut index: HashMap<Simplex, usize> = HashMap::new();
        let mut cells: Vec<Simplex> = Vec::new();
        for s in &simplices {
            for f in s.faces() {
                if !index.contains_key(&f) {
                    index.insert(f.clone(), 0);
                    cells.push(f);
                }
            }
        }
        cells.sort_unstable_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        index.clear();
        for (i, c) in cells.iter().enumerate() {
            index.insert(c.clone(), i);
        }

        // A cell is maximal iff it is a proper face of no other cell.
        let mut is_max = vec![true; cells.len()];
        for c in &cells {
            for f in c.faces() {
                if f != *c {
                    is_max[index[&f]] = false;
                }
            }
        }
        let maximal: Vec<usize> = (0..cells.len()).filter(|&i| is_max[i]).collect();
        let dim = cells.iter().map(|c| c.dim()).max().unwrap_or(0);

        let mut lo = vec![f64::INFINITY; ambient];
        let mut hi = vec![f64::NEG_INFINITY; ambient];
        for p in &vertices {
            for (k, &c) in p.coords().iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let diameter = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt();

        Ok(SimplicialComplex { vertices, cells, index, maximal, dim, ambient, diameter })
    }

    /// Builds a complex from an already face-closed cell list.
    pub(crate) fn from_cells(vertices: Vec<Point>, cells: Vec<Simplex>) -> Result<Self> {
        let maximal: Vec<Simplex> = cells
            .iter()
            .filter(|c| !cells.iter().any(|d| *c != d && c.is_face_of(d)))
            .cloned()
            .collect();
        Self::from_maximal_unchecked(vertices, maximal)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn position(&self, v: u32) -> &Point {
        &self.vertices[v as usize]
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Simplex {
        &self.cells[i]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_index(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Indices of the maximal cells, in canonical order.
    pub fn maximal_cells(&self) -> &[usize] {
        &self.maximal
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Diagonal of the coordinate bounding box.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Default tie tolerance for genericity checks: 1e-9 scaled by the
    /// coordinate diameter of the complex.
    pub fn tie_eps(&self) -> f64 {
        1e-9 * self.diameter
    }

    pub fn check_vertex(&self, v: u32) -> Result<()> {
        if (v as usize) < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v as usize))
        }
    }

    /// Values `⟨ξ, v⟩` for every vertex.
    pub fn vertex_values(&self, xi: &Covector) -> Vec<f64> {
        self.vertices.iter().map(|p| xi.eval(p)).collect()
    }

    /// Cell indices of the link of vertex `v`: all simplices `σ` with
    /// `v ∉ σ` and `σ ∪ {v}` a cell of the complex.
    pub fn link_cell_indices(&self, v: u32) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.contains(v) && self.index.contains_key(&s.join_vertex(v)))
            .map(|(i, _)| i)
            .collect())
    }

    /// The link of a vertex, as a complex with inherited vertex positions.
    pub fn link(&self, v: u32) -> Result<SimplicialComplex> {
        let cells = self.link_cell_indices(v)?;
        self.subcomplex_from_cells(&cells)
    }

    /// Cell indices of the link of an arbitrary cell `σ`: all `τ` disjoint
    /// from `σ` with `τ ∪ σ` a cell.
    pub fn link_of_cell(&self, s: &Simplex) -> Result<Vec<usize>> {
        if self.cell_index(s).is_none() {
            return Err(Error::InvalidInput(format!("{s} is not a cell of the complex")));
        }
        Ok(self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, t)| {
                if s.vertices().iter().any(|&v| t.contains(v)) {
                    return false;
                }
                let mut ids = t.0.clone();
                ids.extend_from_slice(s.vertices());
                ids.sort_unstable();
                self.index.contains_key(&Simplex(ids))
            })
            .map(|(i, _)| i)
            .collect())
    }

    /// Builds a standalone complex out of a face-closed family of cells.
    /// Vertex ids are remapped; positions are inherited. The second return
    /// value maps new vertex ids to original ones.
    pub fn subcomplex_with_map(&self, cell_indices: &[usize]) -> Result<(SimplicialComplex, Vec<u32>)> {
        let mut old_to_new: HashMap<u32, u32> = HashMap::new();
        let mut new_to_old: Vec<u32> = Vec::new();
        let mut vertices: Vec<Point> = Vec::new();
        for &ci in cell_indices {
            for &v in self.cells[ci].vertices() {
                old_to_new.entry(v).or_insert_with(|| {
                    let nv = new_to_old.len() as u32;
                    new_to_old.push(v);
                    vertices.push(self.vertices[v as usize].clone());
                    nv
                });
            }
        }
        let cells: Vec<Simplex> = cell_indices
            .iter()
            .map(|&ci| {
                let mut ids: Vec<u32> =
                    self.cells[ci].vertices().iter().map(|v| old_to_new[v]).collect();
                ids.sort_unstable();
                Simplex(ids)
            })
            .collect();
        let complex = SimplicialComplex::from_cells(vertices, cells)?;
        Ok((complex, new_to_old))
    }

    pub fn subcomplex_from_cells(&self, cell_indices: &[usize]) -> Result<SimplicialComplex> {
        if cell_indices.is_empty() {
            return Ok(SimplicialComplex::empty(self.ambient));
        }
        Ok(self.subcomplex_with_map(cell_indices)?.0)
    }

    /// Extracts the subcomplex described by a face-closed selection.
    pub fn subcomplex_from_selection(&self, sel: &CellSelection) -> Result<SimplicialComplex> {
        if !sel.is_face_closed(self) {
            return Err(Error::NotFaceClosed("subcomplex extraction".into()));
        }
        let cells: Vec<usize> = sel.iter_indices().collect();
        self.subcomplex_from_cells(&cells)
    }

    /// The full subcomplex of the link of `v` induced by link vertices `w`
    /// with `⟨ξ, w⟩ > ⟨ξ, v⟩`. Fails with [`Error::NonGenericCovector`] if
    /// any link vertex ties with `v` within `tie_eps`.
    pub fn upper_link_eps(&self, v: u32, xi: &Covector, tie_eps: f64) -> Result<SimplicialComplex> {
        let cells = self.upper_link_cell_indices(v, xi, tie_eps)?;
        self.subcomplex_from_cells(&cells)
    }

    /// Same as [`Self::upper_link_eps`] with the complex's default tolerance.
    pub fn upper_link(&self, v: u32, xi: &Covector) -> Result<SimplicialComplex> {
        self.upper_link_eps(v, xi, self.tie_eps())
    }

    /// Cell indices (in `self`) of the upper link of `v`.
    pub fn upper_link_cell_indices(&self, v: u32, xi: &Covector, tie_eps: f64) -> Result<Vec<usize>> {
        let link = self.link_cell_indices(v)?;
        let base = xi.eval(self.position(v));
        let mut above: HashMap<u32, bool> = HashMap::new();
        for &ci in &link {
            for &w in self.cells[ci].vertices() {
                if let std::collections::hash_map::Entry::Vacant(e) = above.entry(w) {
                    let val = xi.eval(self.position(w));
                    if (val - base).abs() <= tie_eps {
                        return Err(Error::NonGenericCovector(format!(
                            "link vertex {w} ties with vertex {v} within {tie_eps:.3e}"
                        )));
                    }
                    e.insert(val > base);
                }
            }
        }
        Ok(link
            .into_iter()
            .filter(|&ci| self.cells[ci].vertices().iter().all(|w| above[w]))
            .collect())
    }
}

fn check_affinely_independent(vertices: &[Point], s: &Simplex) -> Result<()> {
    let k = s.dim();
    if k == 0 {
        return Ok(());
    }
    let p0 = &vertices[s.vertices()[0] as usize];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for &v in &s.vertices()[1..] {
        let mut e = vertices[v as usize].sub(p0);
        let scale = crate::geometry::norm(&e);
        for b in &basis {
            let c = crate::geometry::dot(&e, b);
            for (ei, bi) in e.iter_mut().zip(b) {
                *ei -= c * bi;
            }
        }
        let residual = crate::geometry::norm(&e);
        if residual <= 1e-9 * scale.max(1e-300) {
            return Err(Error::DegenerateSimplex(format!("simplex {s}")));
        }
        for ei in e.iter_mut() {
            *ei /= residual;
        }
        basis.push(e);
    }
    Ok(())
}

/// A selection of open cells of a fixed complex (a union of open simplices).
///
/// Face-closed selections describe compact subcomplexes; general selections
/// need not be closed under faces.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSelection {
    bits: Vec<bool>,
}

impl CellSelection {
    pub fn none(cx: &SimplicialComplex) -> Self {
        CellSelection { bits: vec![false; cx.cell_count()] }
    }

    pub fn all(cx: &SimplicialComplex) -> Self {
        CellSelection { bits: vec![true; cx.cell_count()] }
    }

    pub fn from_predicate(cx: &SimplicialComplex, mut pred: impl FnMut(usize, &Simplex) -> bool) -> Self {
        CellSelection { bits: cx.cells.iter().enumerate().map(|(i, s)| pred(i, s)).collect() }
    }

    pub fn from_indices(cx: &SimplicialComplex, idx: &[usize]) -> Self {
        let mut bits = vec![false; cx.cell_count()];
        for &i in idx {
            bits[i] = true;
        }
        CellSelection { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i] = true;
    }

    pub fn iter_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn union(&self, other: &CellSelection) -> CellSelection {
        CellSelection { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect() }
    }

    pub fn intersection(&self, other: &CellSelection) -> CellSelection {
        CellSelection { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect() }
    }

    pub fn difference(&self, other: &CellSelection) -> CellSelection {
        CellSelection { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && !*b).collect() }
    }

    pub fn complement(&self) -> CellSelection {
        CellSelection { bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// Downward closure: adds every face of every selected cell.
    pub fn face_closure(&self, cx: &SimplicialComplex) -> CellSelection {
        let mut bits = self.bits.clone();
        for i in 0..bits.len() {
            if self.bits[i] {
                for f in cx.cells[i].faces() {
                    bits[cx.index[&f]] = true;
                }
            }
        }
        CellSelection { bits }
    }

    pub fn is_face_closed(&self, cx: &SimplicialComplex) -> bool {
        self.iter_indices().all(|i| cx.cells[i].faces().iter().all(|f| self.bits[cx.index[&f]]))
    }

    /// Full subcomplex induced by a set of vertices: all cells whose vertices
    /// all lie in the set.
    pub fn induced_by_vertices(cx: &SimplicialComplex, verts: &[u32]) -> CellSelection {
        let set: std::collections::HashSet<u32> = verts.iter().copied().collect();
        CellSelection::from_predicate(cx, |_, s| s.vertices().iter().all(|v| set.contains(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn point_complex_has_one_cell() {
        let cx = build_complex(vec![p(&[0.0])], &[vec![0]]).unwrap();
        assert_eq!(cx.cell_count(), 1);
        assert_eq!(cx.intrinsic_dim(), 0);
    }

    #[test]
    fn triangle_face_closure_counts() {
        let cx = build_complex(
            vec![p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[0.0, 1.0])],
            &[vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(cx.cell_count(), 7);
        assert_eq!(cx.maximal_cells().len(), 1);
    }

    #[test]
    fn tetrahedron_boundary_counts() {
        let verts = vec![
            p(&[0.0, 0.0, 0.0]),
            p(&[1.0, 0.0, 0.0]),
            p(&[0.0, 1.0, 0.0]),
            p(&[0.0, 0.0, 1.0]),
        ];
        let cx =
            build_complex(verts, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(cx.cell_count(), 14);
        assert_eq!(cx.intrinsic_dim(), 2);
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let err = build_complex(
            vec![p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[2.0, 0.0])],
            &[vec![0, 1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateSimplex(_)));
    }

    #[test]
    fn duplicate_position_rejected() {
        let err = build_complex(vec![p(&[0.0]), p(&[0.0])], &[vec![0], vec![1]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateVertex(_)));
    }

    #[test]
    fn dimension_cap() {
        let verts: Vec<Point> = (0..5)
            .map(|i| {
                let mut c = vec![0.0; 5];
                if i > 0 {
                    c[i - 1] = 1.0;
                }
                p(&c)
            })
            .collect();
        let err = build_complex(verts, &[vec![0, 1, 2, 3, 4]]).unwrap_err();
        assert!(matches!(err, Error::UnsupportedDimension(_)));
    }

    #[test]
    fn link_of_edge_vertex_is_point() {
        let cx = build_complex(vec![p(&[0.0]), p(&[1.0])], &[vec![0, 1]]).unwrap();
        let link = cx.link(0).unwrap();
        assert_eq!(link.cell_count(), 1);
        assert_eq!(link.intrinsic_dim(), 0);
    }

    #[test]
    fn unknown_vertex_link() {
        let cx = build_complex(vec![p(&[0.0]), p(&[1.0])], &[vec![0, 1]]).unwrap();
        assert!(matches!(cx.link(7), Err(Error::UnknownVertex(7))));
    }

    #[test]
    fn selection_face_closure() {
        let cx = build_complex(
            vec![p(&[0.0, 0.0]), p(&[1.0, 0.0]), p(&[0.0, 1.0])],
            &[vec![0, 1, 2]],
        )
        .unwrap();
        let top = cx.cell_index(&Simplex::new(vec![0, 1, 2]).unwrap()).unwrap();
        let sel = CellSelection::from_indices(&cx, &[top]);
        assert!(!sel.is_face_closed(&cx));
        let closed = sel.face_closure(&cx);
        assert!(closed.is_face_closed(&cx));
        assert_eq!(closed.iter_indices().count(), 7);
    }
}
