//! Readers and writers for the on-disk formats: complexes and constructible
//! functions as JSON, surface meshes in OFF format, and normal-cycle dumps.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{build_complex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::euler::ConstructibleFunction;
use crate::geometry::{Covector, Point};
use crate::normal_cycle::{NormalCycle, NormalCyclePiece, SphericalCell};

/// JSON schema of a complex: vertex coordinate rows plus maximal simplices
/// with 0-based vertex indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<Vec<f64>>,
    pub simplices: Vec<Vec<u32>>,
}

impl ComplexJson {
    pub fn from_complex(cx: &SimplicialComplex) -> Self {
        ComplexJson {
            vertices: cx.vertices().iter().map(|p| p.coords().to_vec()).collect(),
            simplices: cx
                .maximal_cells()
                .iter()
                .map(|&mi| cx.cell(mi).vertices().to_vec())
                .collect(),
        }
    }

    pub fn into_complex(self) -> Result<SimplicialComplex> {
        let vertices: Result<Vec<Point>> = self.vertices.into_iter().map(Point::new).collect();
        build_complex(vertices?, &self.simplices)
    }
}

pub fn complex_to_json(cx: &SimplicialComplex) -> String {
    serde_json::to_string_pretty(&ComplexJson::from_complex(cx)).expect("serializable")
}

pub fn complex_from_json(text: &str) -> Result<SimplicialComplex> {
    let parsed: ComplexJson = serde_json::from_str(text)?;
    parsed.into_complex()
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("off") | Some("OFF") => read_off(path),
        _ => complex_from_json(&std::fs::read_to_string(path)?),
    }
}

/// Constructible-function JSON: the complex inline or as a path reference,
/// and sparse weights keyed by sorted vertex tuples "i-j-k".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructibleJson {
    pub complex: ComplexRef,
    pub weights: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRef {
    Path(String),
    Inline(ComplexJson),
}

pub fn constructible_to_json(f: &ConstructibleFunction) -> String {
    let cx = f.complex();
    let mut weights = BTreeMap::new();
    for (i, &w) in f.weights().iter().enumerate() {
        if w != 0 {
            weights.insert(cx.cell(i).key(), w);
        }
    }
    let doc = ConstructibleJson {
        complex: ComplexRef::Inline(ComplexJson::from_complex(cx)),
        weights,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Loads a constructible function; path references inside the document are
/// resolved relative to `base_dir`.
pub fn constructible_from_json(text: &str, base_dir: &Path) -> Result<ConstructibleFunction> {
    let doc: ConstructibleJson = serde_json::from_str(text)?;
    let cx = match doc.complex {
        ComplexRef::Inline(c) => c.into_complex()?,
        ComplexRef::Path(p) => read_complex(&base_dir.join(p))?,
    };
    let cx = Arc::new(cx);
    let mut weights = vec![0i64; cx.cell_count()];
    for (key, w) in doc.weights {
        let simplex = Simplex::from_key(&key)?;
        let idx = cx
            .cell_index(&simplex)
            .ok_or_else(|| Error::InvalidInput(format!("weight on unknown cell {key}")))?;
        weights[idx] = w;
    }
    ConstructibleFunction::from_weights(cx, weights)
}

pub fn read_constructible(path: &Path) -> Result<ConstructibleFunction> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    constructible_from_json(&std::fs::read_to_string(path)?, base)
}

/// OFF reader for triangle surface meshes: header "OFF", counts line
/// "V F E", V coordinate rows, F triangle rows "3 i j k".
pub fn read_off(path: &Path) -> Result<SimplicialComplex> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut lines = reader
        .lines()
        .collect::<std::io::Result<Vec<String>>>()?
        .into_iter()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let header = lines.next().ok_or_else(|| Error::InvalidInput("empty OFF file".into()))?;
    if header != "OFF" {
        return Err(Error::InvalidInput(format!("expected OFF header, got {header:?}")));
    }
    let counts = lines.next().ok_or_else(|| Error::InvalidInput("missing OFF counts".into()))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::InvalidInput(format!("bad count {t:?}"))))
        .collect::<Result<_>>()?;
    if counts.len() < 2 {
        return Err(Error::InvalidInput("OFF counts need vertices and faces".into()));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = lines.next().ok_or_else(|| Error::InvalidInput("truncated vertex list".into()))?;
        let coords: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::InvalidInput(format!("bad coordinate {t:?}"))))
            .collect::<Result<_>>()?;
        if coords.len() != 3 {
            return Err(Error::InvalidInput("OFF vertices must have 3 coordinates".into()));
        }
        vertices.push(Point::new(coords)?);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let line = lines.next().ok_or_else(|| Error::InvalidInput("truncated face list".into()))?;
        let fields: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::InvalidInput(format!("bad face index {t:?}"))))
            .collect::<Result<_>>()?;
        if fields.is_empty() || fields[0] != 3 || fields.len() != 4 {
            return Err(Error::InvalidInput("only triangle faces are supported".into()));
        }
        faces.push(fields[1..].to_vec());
    }
    build_complex(vertices, &faces)
}

pub fn write_off(cx: &SimplicialComplex, path: &Path) -> Result<()> {
    if cx.ambient_dim() != 3 || cx.intrinsic_dim() != 2 {
        return Err(Error::UnsupportedDimension(
            "OFF output is for surface meshes in R^3".into(),
        ));
    }
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let tris: Vec<&Simplex> =
        cx.maximal_cells().iter().map(|&mi| cx.cell(mi)).filter(|s| s.dim() == 2).collect();
    writeln!(out, "OFF")?;
    writeln!(out, "{} {} 0", cx.vertex_count(), tris.len())?;
    for p in cx.vertices() {
        let c = p.coords();
        writeln!(out, "{:.17e} {:.17e} {:.17e}", c[0], c[1], c[2])?;
    }
    for t in tris {
        let v = t.vertices();
        writeln!(out, "3 {} {} {}", v[0], v[1], v[2])?;
    }
    Ok(())
}

/// Normal-cycle dump: pieces with cells serialized by kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalCycleJson {
    pub pieces: Vec<PieceJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceJson {
    pub simplex: Vec<u32>,
    pub cell: CellJson,
    pub mult: i64,
}

/// Cell kinds: "point" (one direction), "arc" (start, via, end on the
/// carrier circle), "circle" (two basis directions), "polygon" (spherical
/// vertices), "sphere" (no data).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub data: Vec<Vec<f64>>,
}

fn cell_to_json(cell: &SphericalCell) -> CellJson {
    match cell {
        SphericalCell::Point { dir } => {
            CellJson { kind: "point".into(), data: vec![dir.coords().to_vec()] }
        }
        SphericalCell::Circle { basis } => CellJson {
            kind: "circle".into(),
            data: vec![basis[0].coords().to_vec(), basis[1].coords().to_vec()],
        },
        SphericalCell::Arc { .. } => {
            let samples = cell.sample_points();
            CellJson {
                kind: "arc".into(),
                data: samples.iter().map(|c| c.coords().to_vec()).collect(),
            }
        }
        SphericalCell::Sphere => CellJson { kind: "sphere".into(), data: vec![] },
        SphericalCell::Polygon { verts } => CellJson {
            kind: "polygon".into(),
            data: verts.iter().map(|c| c.coords().to_vec()).collect(),
        },
    }
}

fn cell_from_json(cell: &CellJson) -> Result<SphericalCell> {
    let vecs: Vec<Covector> = cell.data.iter().map(|c| Covector::new(c.clone())).collect::<Result<_>>()?;
    match cell.kind.as_str() {
        "point" => {
            if vecs.len() != 1 {
                return Err(Error::InvalidInput("point cell needs one direction".into()));
            }
            Ok(SphericalCell::Point { dir: vecs[0].clone() })
        }
        "circle" => {
            if vecs.len() != 2 {
                return Err(Error::InvalidInput("circle cell needs two basis directions".into()));
            }
            Ok(SphericalCell::Circle { basis: [vecs[0].clone(), vecs[1].clone()] })
        }
        "arc" => {
            if vecs.len() != 3 {
                return Err(Error::InvalidInput("arc cell needs start, via, end".into()));
            }
            arc_from_samples(&vecs[0], &vecs[1], &vecs[2])
        }
        "sphere" => Ok(SphericalCell::Sphere),
        "polygon" => {
            if vecs.len() < 3 {
                return Err(Error::InvalidInput("polygon cell needs at least 3 vertices".into()));
            }
            Ok(SphericalCell::Polygon { verts: vecs })
        }
        other => Err(Error::InvalidInput(format!("unknown cell type {other:?}"))),
    }
}

/// Rebuilds an arc from three sample directions: the basis is anchored at
/// the start, oriented so the midpoint comes before the end.
fn arc_from_samples(start: &Covector, via: &Covector, end: &Covector) -> Result<SphericalCell> {
    let b1 = Covector::unit(start.coords())?;
    let mut residual: Vec<f64> = via.coords().to_vec();
    let c = crate::geometry::dot(via.coords(), b1.coords());
    for (r, b) in residual.iter_mut().zip(b1.coords()) {
        *r -= c * b;
    }
    let b2 = Covector::unit(&residual)
        .map_err(|_| Error::InvalidInput("degenerate arc: via is collinear with start".into()))?;
    let angle_of = |v: &Covector| -> f64 {
        let x = crate::geometry::dot(v.coords(), b1.coords());
        let y = crate::geometry::dot(v.coords(), b2.coords());
        let mut a = y.atan2(x);
        if a <= 0.0 {
            a += 2.0 * std::f64::consts::PI;
        }
        a
    };
    let theta_via = angle_of(via);
    let mut theta_end = angle_of(end);
    if theta_end < theta_via {
        // The end wraps past the via point only for arcs longer than a full
        // turn, which cannot happen; treat as boundary noise.
        theta_end = theta_via * 2.0;
    }
    Ok(SphericalCell::Arc { basis: [b1, b2], theta0: 0.0, theta1: theta_end })
}

pub fn normal_cycle_to_json(nc: &NormalCycle) -> String {
    let doc = NormalCycleJson {
        pieces: nc
            .pieces()
            .iter()
            .map(|p| PieceJson {
                simplex: p.simplex.vertices().to_vec(),
                cell: cell_to_json(&p.cell),
                mult: p.multiplicity,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Reassembles a dumped normal cycle over the given complex.
pub fn normal_cycle_from_json(text: &str, cx: &SimplicialComplex) -> Result<NormalCycle> {
    let doc: NormalCycleJson = serde_json::from_str(text)?;
    let mut pieces = Vec::with_capacity(doc.pieces.len());
    for p in doc.pieces {
        let simplex = Simplex::new(p.simplex)?;
        if cx.cell_index(&simplex).is_none() {
            return Err(Error::InvalidInput(format!(
                "piece simplex {simplex} is not a cell of the complex"
            )));
        }
        pieces.push(NormalCyclePiece {
            simplex,
            cell: cell_from_json(&p.cell)?,
            multiplicity: p.mult,
        });
    }
    Ok(NormalCycle::from_parts(cx.clone(), pieces))
}
