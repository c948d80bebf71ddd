//! Canonical test complexes: the standard zoo used by the verification
//! suites and the CLI demos.

use crate::complex::{build_complex, SimplicialComplex};
use crate::error::Result;
use crate::geometry::{Covector, Point};
use crate::sampling::sample_generic_covector;
use crate::subdivide::subdivide_by_level;

fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).expect("finite literal coordinates")
}

/// A single point at the origin of `R^n`.
pub fn point(ambient: usize) -> SimplicialComplex {
    build_complex(vec![pt(&vec![0.0; ambient])], &[vec![0]]).unwrap()
}

/// The closed unit segment on the x-axis of `R^n`.
pub fn segment(ambient: usize) -> SimplicialComplex {
    let mut a = vec![0.0; ambient];
    let mut b = vec![0.0; ambient];
    a[0] = 0.0;
    b[0] = 1.0;
    build_complex(vec![pt(&a), pt(&b)], &[vec![0, 1]]).unwrap()
}

/// A filled triangle in the plane.
pub fn triangle() -> SimplicialComplex {
    build_complex(
        vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.3, 0.9])],
        &[vec![0, 1, 2]],
    )
    .unwrap()
}

/// The closed unit square as two triangles.
pub fn square() -> SimplicialComplex {
    build_complex(
        vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[1.0, 1.0]), pt(&[0.0, 1.0])],
        &[vec![0, 1, 2], vec![0, 2, 3]],
    )
    .unwrap()
}

/// A filled regular pentagon (fan triangulation), circumradius 1.
pub fn pentagon() -> SimplicialComplex {
    let verts: Vec<Point> = (0..5)
        .map(|k| {
            let a = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / 5.0;
            pt(&[a.cos(), a.sin()])
        })
        .collect();
    build_complex(verts, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4]]).unwrap()
}

/// A filled non-convex L-shaped polygon with a reflex vertex at (1,1).
pub fn l_polygon() -> SimplicialComplex {
    build_complex(
        vec![
            pt(&[0.0, 0.0]),
            pt(&[2.0, 0.0]),
            pt(&[2.0, 1.0]),
            pt(&[1.0, 1.0]),
            pt(&[1.0, 2.0]),
            pt(&[0.0, 2.0]),
        ],
        &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5]],
    )
    .unwrap()
}

/// A triangulated disk: hexagon fan around a center vertex (vertex 0).
pub fn disk() -> SimplicialComplex {
    let mut verts = vec![pt(&[0.0, 0.0])];
    for k in 0..6 {
        let a = 2.0 * std::f64::consts::PI * k as f64 / 6.0 + 0.1;
        verts.push(pt(&[a.cos(), a.sin()]));
    }
    let tris: Vec<Vec<u32>> = (0..6).map(|k| vec![0, 1 + k, 1 + (k + 1) % 6]).collect();
    build_complex(verts, &tris).unwrap()
}

/// The boundary of a tetrahedron (a PL 2-sphere with 4 triangles).
pub fn sphere_tetrahedron() -> SimplicialComplex {
    build_complex(
        vec![
            pt(&[0.0, 0.0, 0.0]),
            pt(&[1.0, 0.0, 0.0]),
            pt(&[0.0, 1.0, 0.0]),
            pt(&[0.0, 0.0, 1.0]),
        ],
        &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    )
    .unwrap()
}

/// The boundary of an octahedron (a PL 2-sphere with 8 triangles).
pub fn sphere_octahedron() -> SimplicialComplex {
    build_complex(
        vec![
            pt(&[1.0, 0.0, 0.0]),
            pt(&[-1.0, 0.0, 0.0]),
            pt(&[0.0, 1.0, 0.0]),
            pt(&[0.0, -1.0, 0.0]),
            pt(&[0.0, 0.0, 1.0]),
            pt(&[0.0, 0.0, -1.0]),
        ],
        &[
            vec![0, 2, 4],
            vec![2, 1, 4],
            vec![1, 3, 4],
            vec![3, 0, 4],
            vec![0, 2, 5],
            vec![2, 1, 5],
            vec![1, 3, 5],
            vec![3, 0, 5],
        ],
    )
    .unwrap()
}

/// An embedded torus: `nu` segments around the core circle (radius 2),
/// `nv` around the tube (radius 0.7).
pub fn torus(nu: usize, nv: usize) -> SimplicialComplex {
    assert!(nu >= 3 && nv >= 3);
    let mut verts = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let th = 2.0 * std::f64::consts::PI * i as f64 / nu as f64;
        for j in 0..nv {
            let ph = 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
            let w = 2.0 + 0.7 * ph.cos();
            verts.push(pt(&[w * th.cos(), w * th.sin(), 0.7 * ph.sin()]));
        }
    }
    let id = |i: usize, j: usize| -> u32 { ((i % nu) * nv + (j % nv)) as u32 };
    let mut tris = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            tris.push(vec![a, b, c]);
            tris.push(vec![b, d, c]);
        }
    }
    build_complex(verts, &tris).unwrap()
}

/// A wedge of two circles as a PL graph (two square loops sharing a vertex).
pub fn wedge_two_circles() -> SimplicialComplex {
    build_complex(
        vec![
            pt(&[0.0, 0.0]),
            pt(&[1.0, 0.0]),
            pt(&[1.0, 1.0]),
            pt(&[0.0, 1.0]),
            pt(&[-1.0, 0.0]),
            pt(&[-1.0, -1.0]),
            pt(&[0.0, -1.0]),
        ],
        &[
            vec![0, 1],
            vec![1, 2],
            vec![2, 3],
            vec![3, 0],
            vec![0, 4],
            vec![4, 5],
            vec![5, 6],
            vec![6, 0],
        ],
    )
    .unwrap()
}

/// A 4-valent PL saddle: central vertex with an 8-ring at heights
/// alternating in pairs, so the vertical direction sees two arcs above.
pub fn saddle() -> SimplicialComplex {
    quadric_graph(1.0, -1.0)
}

/// The PL graph of `z = s1*x^2 + s2*y^2` sampled on an 8-ring of radius 1
/// around the central vertex (vertex 0). Ring angles are offset by 22.5
/// degrees so that no ring height ties with the center for vertical
/// covectors.
pub fn quadric_graph(s1: f64, s2: f64) -> SimplicialComplex {
    let mut verts = vec![pt(&[0.0, 0.0, 0.0])];
    for k in 0..8 {
        let a = std::f64::consts::PI / 8.0 + 2.0 * std::f64::consts::PI * k as f64 / 8.0;
        let (x, y) = (a.cos(), a.sin());
        verts.push(pt(&[x, y, s1 * x * x + s2 * y * y]));
    }
    let tris: Vec<Vec<u32>> = (0..8).map(|k| vec![0, 1 + k, 1 + (k + 1) % 8]).collect();
    build_complex(verts, &tris).unwrap()
}

/// A solid tetrahedron in `R^3`.
pub fn tetrahedron_solid() -> SimplicialComplex {
    build_complex(
        vec![
            pt(&[0.0, 0.0, 0.0]),
            pt(&[1.0, 0.0, 0.0]),
            pt(&[0.0, 1.0, 0.0]),
            pt(&[0.0, 0.0, 1.0]),
        ],
        &[vec![0, 1, 2, 3]],
    )
    .unwrap()
}

/// The solid unit cube as six tetrahedra around the main diagonal
/// (the Kuhn subdivision; face-consistent across the cube's squares).
pub fn cube_solid() -> SimplicialComplex {
    let verts: Vec<Point> = (0..8u32)
        .map(|i| pt(&[(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]))
        .collect();
    let axes = [1u32, 2, 4];
    let mut tets = Vec::new();
    for p0 in 0..3 {
        for p1 in 0..3 {
            if p1 == p0 {
                continue;
            }
            let p2 = 3 - p0 - p1;
            let a = axes[p0];
            let b = axes[p1];
            let c = axes[p2];
            tets.push(vec![0, a, a | b, a | b | c]);
        }
    }
    build_complex(verts, &tets).unwrap()
}

/// The prism `triangle x [0,1]` as three tetrahedra.
pub fn prism() -> SimplicialComplex {
    build_complex(
        vec![
            pt(&[0.0, 0.0, 0.0]),
            pt(&[1.0, 0.0, 0.0]),
            pt(&[0.0, 1.0, 0.0]),
            pt(&[0.0, 0.0, 1.0]),
            pt(&[1.0, 0.0, 1.0]),
            pt(&[0.0, 1.0, 1.0]),
        ],
        &[vec![0, 1, 2, 3], vec![1, 2, 3, 4], vec![2, 3, 4, 5]],
    )
    .unwrap()
}

/// A closed polygonal circle with `m` vertices on the radius-`r` circle.
pub fn circle_polygon(m: usize, r: f64) -> SimplicialComplex {
    assert!(m >= 3);
    let verts: Vec<Point> = (0..m)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            pt(&[r * a.cos(), r * a.sin()])
        })
        .collect();
    let edges: Vec<Vec<u32>> = (0..m as u32).map(|k| vec![k, (k + 1) % m as u32]).collect();
    build_complex(verts, &edges).unwrap()
}

/// A triangulated annulus between radii `r_in` and `r_out`, with `m` angular
/// sectors matching the angular grid of [`circle_polygon`].
pub fn annulus(m: usize, r_in: f64, r_out: f64) -> SimplicialComplex {
    assert!(m >= 3 && r_out > r_in && r_in > 0.0);
    let mut verts = Vec::with_capacity(2 * m);
    for k in 0..m {
        let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        verts.push(pt(&[r_in * a.cos(), r_in * a.sin()]));
    }
    for k in 0..m {
        let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        verts.push(pt(&[r_out * a.cos(), r_out * a.sin()]));
    }
    let mu = m as u32;
    let mut tris = Vec::with_capacity(2 * m);
    for k in 0..mu {
        let (i0, i1) = (k, (k + 1) % mu);
        let (o0, o1) = (mu + k, mu + (k + 1) % mu);
        tris.push(vec![i0, o0, i1]);
        tris.push(vec![o0, o1, i1]);
    }
    build_complex(verts, &tris).unwrap()
}

/// A right-triangle grid on the unit square with `k x k` cells
/// (`2 k^2` triangles).
pub fn grid_mesh(k: usize) -> SimplicialComplex {
    assert!(k >= 1);
    let n = k + 1;
    let verts: Vec<Point> = (0..n * n)
        .map(|i| pt(&[(i % n) as f64 / k as f64, (i / n) as f64 / k as f64]))
        .collect();
    let id = |x: usize, y: usize| -> u32 { (y * n + x) as u32 };
    let mut tris = Vec::with_capacity(2 * k * k);
    for y in 0..k {
        for x in 0..k {
            tris.push(vec![id(x, y), id(x + 1, y), id(x + 1, y + 1)]);
            tris.push(vec![id(x, y), id(x + 1, y + 1), id(x, y + 1)]);
        }
    }
    build_complex(verts, &tris).unwrap()
}

/// A genuine refinement of `cx` with the same geometric realization,
/// produced by chaining level-set subdivisions along sampled directions.
pub fn refined(cx: &SimplicialComplex, seed: u64, cuts: usize) -> Result<SimplicialComplex> {
    let mut out = cx.clone();
    for i in 0..cuts {
        let xi = sample_generic_covector(&out, seed.wrapping_add(i as u64))?;
        let values = out.vertex_values(&xi);
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let t = lo + 0.41421356 * (hi - lo);
        out = subdivide_by_level(&out, &xi, t)?.complex;
    }
    Ok(out)
}

/// A generic covector convenience for examples and docs.
pub fn direction(coords: &[f64]) -> Covector {
    Covector::unit(coords).expect("nonzero literal direction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellSelection;
    use crate::euler::chi_o_all;

    #[test]
    fn euler_characteristics_of_the_zoo() {
        assert_eq!(chi_o_all(&point(2)), 1);
        assert_eq!(chi_o_all(&segment(1)), 1);
        assert_eq!(chi_o_all(&triangle()), 1);
        assert_eq!(chi_o_all(&square()), 1);
        assert_eq!(chi_o_all(&pentagon()), 1);
        assert_eq!(chi_o_all(&l_polygon()), 1);
        assert_eq!(chi_o_all(&disk()), 1);
        assert_eq!(chi_o_all(&sphere_tetrahedron()), 2);
        assert_eq!(chi_o_all(&sphere_octahedron()), 2);
        assert_eq!(chi_o_all(&torus(8, 4)), 0);
        assert_eq!(chi_o_all(&wedge_two_circles()), -1);
        assert_eq!(chi_o_all(&tetrahedron_solid()), 1);
        assert_eq!(chi_o_all(&cube_solid()), 1);
        assert_eq!(chi_o_all(&prism()), 1);
        assert_eq!(chi_o_all(&circle_polygon(16, 1.0)), 0);
        assert_eq!(chi_o_all(&annulus(16, 1.0, 1.5)), 0);
        assert_eq!(chi_o_all(&grid_mesh(10)), 1);
        assert_eq!(chi_o_all(&saddle()), 1);
    }

    #[test]
    fn grid_mesh_has_200_triangles() {
        let g = grid_mesh(10);
        assert_eq!(g.cells().iter().filter(|s| s.dim() == 2).count(), 200);
    }

    #[test]
    fn disk_links() {
        let d = disk();
        // Interior vertex: link is a closed polygonal cycle (chi = 0).
        let link0 = d.link(0).unwrap();
        assert_eq!(chi_o_all(&link0), 0);
        // Boundary vertex: link is a path (chi = 1).
        let link1 = d.link(1).unwrap();
        assert_eq!(chi_o_all(&link1), 1);
    }

    #[test]
    fn product_rule_on_prism() {
        // chi_o(open edge x closed triangle) = -chi_o(closed triangle) = -1.
        let pr = prism();
        let bottom: Vec<u32> = vec![0, 1, 2];
        let top: Vec<u32> = vec![3, 4, 5];
        let ends = CellSelection::induced_by_vertices(&pr, &bottom)
            .union(&CellSelection::induced_by_vertices(&pr, &top));
        let middle = ends.complement();
        assert_eq!(crate::euler::chi_o(&pr, &middle), -1);
    }

    #[test]
    fn refinement_preserves_chi() {
        let d = disk();
        let r = refined(&d, 7, 3).unwrap();
        assert!(r.cell_count() > d.cell_count());
        assert_eq!(chi_o_all(&r), chi_o_all(&d));
    }
}
