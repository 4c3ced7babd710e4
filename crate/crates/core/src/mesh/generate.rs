use super::{Mesh, MeshError};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    /// Unit square, each cell split along its (0,0)-(1,1) diagonal.
    UnitSquareTri,
    /// Unit cube, each cell split into the six Kuhn tetrahedra.
    UnitCubeTet,
}

impl FromStr for MeshKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit-square-tri" => Ok(MeshKind::UnitSquareTri),
            "unit-cube-tet" => Ok(MeshKind::UnitCubeTet),
            other => Err(format!(
                "unknown mesh kind `{other}` (expected unit-square-tri or unit-cube-tet)"
            )),
        }
    }
}

impl fmt::Display for MeshKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeshKind::UnitSquareTri => "unit-square-tri",
            MeshKind::UnitCubeTet => "unit-cube-tet",
        })
    }
}

/// Structured mesh of the unit square (`2n²` triangles) or unit cube (`6n³`
/// tetrahedra) with constant permeability.
pub fn generate_structured_mesh(kind: MeshKind, n: usize, mu: f64) -> Result<Mesh, MeshError> {
    if n == 0 {
        return Err(MeshError::ZeroSubdivisions);
    }
    let h = 1.0 / n as f64;
    match kind {
        MeshKind::UnitSquareTri => {
            let id = |i: usize, j: usize| j * (n + 1) + i;
            let mut nodes = Vec::with_capacity((n + 1) * (n + 1));
            for j in 0..=n {
                for i in 0..=n {
                    nodes.push([i as f64 * h, j as f64 * h, 0.0]);
                }
            }
            let mut elements = Vec::with_capacity(6 * n * n);
            for j in 0..n {
                for i in 0..n {
                    let (v00, v10, v01, v11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
                    elements.extend_from_slice(&[v00, v10, v11]);
                    elements.extend_from_slice(&[v00, v11, v01]);
                }
            }
            Mesh::from_flat(2, nodes, elements, vec![mu; 2 * n * n])
        }
        MeshKind::UnitCubeTet => {
            let id = |i: usize, j: usize, k: usize| (k * (n + 1) + j) * (n + 1) + i;
            let mut nodes = Vec::with_capacity((n + 1).pow(3));
            for k in 0..=n {
                for j in 0..=n {
                    for i in 0..=n {
                        nodes.push([i as f64 * h, j as f64 * h, k as f64 * h]);
                    }
                }
            }
            // every tetrahedron walks from the cell's origin corner to the
            // opposite corner along one axis permutation
            const PERMUTATIONS: [[usize; 3]; 6] =
                [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let mut elements = Vec::with_capacity(24 * n * n * n);
            for k in 0..n {
                for j in 0..n {
                    for i in 0..n {
                        for perm in PERMUTATIONS {
                            let mut corner = [i, j, k];
                            elements.push(id(corner[0], corner[1], corner[2]));
                            for axis in perm {
                                corner[axis] += 1;
                                elements.push(id(corner[0], corner[1], corner[2]));
                            }
                        }
                    }
                }
            }
            Mesh::from_flat(3, nodes, elements, vec![mu; 6 * n * n * n])
        }
    }
}

/// Annulus `r_inner ≤ r ≤ r_outer` split into `rings × sectors` curved cells,
/// each cut into two triangles. `phase` rotates the first sector boundary
/// away from the positive x axis.
pub fn generate_annulus_mesh(
    r_inner: f64,
    r_outer: f64,
    rings: usize,
    sectors: usize,
    phase: f64,
    mu: f64,
) -> Result<Mesh, MeshError> {
    if rings == 0 || sectors < 3 {
        return Err(MeshError::ZeroSubdivisions);
    }
    let mut nodes = Vec::with_capacity((rings + 1) * sectors);
    for i in 0..=rings {
        let r = r_inner + (r_outer - r_inner) * i as f64 / rings as f64;
        for j in 0..sectors {
            let theta = phase + std::f64::consts::TAU * j as f64 / sectors as f64;
            nodes.push([r * theta.cos(), r * theta.sin(), 0.0]);
        }
    }
    let id = |i: usize, j: usize| i * sectors + j % sectors;
    let mut elements = Vec::with_capacity(6 * rings * sectors);
    for i in 0..rings {
        for j in 0..sectors {
            let (a, b, c, d) = (id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j));
            elements.extend_from_slice(&[a, b, c]);
            elements.extend_from_slice(&[a, c, d]);
        }
    }
    Mesh::from_flat(2, nodes, elements, vec![mu; 2 * rings * sectors])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_and_node_counts() {
        let m = generate_structured_mesh(MeshKind::UnitSquareTri, 1, 1.0).unwrap();
        assert_eq!((m.element_count(), m.node_count()), (2, 4));
        let m = generate_structured_mesh(MeshKind::UnitSquareTri, 2, 1.0).unwrap();
        assert_eq!((m.element_count(), m.node_count()), (8, 9));
        let m = generate_structured_mesh(MeshKind::UnitCubeTet, 1, 1.0).unwrap();
        assert_eq!((m.element_count(), m.node_count()), (6, 8));
        let m = generate_structured_mesh(MeshKind::UnitCubeTet, 3, 1.0).unwrap();
        assert_eq!((m.element_count(), m.node_count()), (162, 64));
    }

    #[test]
    fn measures_tile_the_domain() {
        for (kind, n) in [(MeshKind::UnitSquareTri, 5), (MeshKind::UnitCubeTet, 3)] {
            let m = generate_structured_mesh(kind, n, 1.0).unwrap();
            let total: f64 = (0..m.element_count()).map(|e| m.geometry(e).measure).sum();
            assert!((total - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_subdivisions_rejected() {
        assert_eq!(
            generate_structured_mesh(MeshKind::UnitSquareTri, 0, 1.0),
            Err(MeshError::ZeroSubdivisions)
        );
    }

    #[test]
    fn annulus_area_and_counts() {
        let mesh = generate_annulus_mesh(0.5, 1.0, 3, 64, 0.1, 2.0).unwrap();
        assert_eq!((mesh.node_count(), mesh.element_count()), (4 * 64, 2 * 3 * 64));
        let area: f64 = (0..mesh.element_count()).map(|e| mesh.geometry(e).measure).sum();
        // polygonal rings: 0.5 · 64 · sin(2π/64) · (1 − 0.25)
        let expected = 0.5 * 64.0 * (std::f64::consts::TAU / 64.0).sin() * 0.75;
        assert!((area - expected).abs() < 1e-12);
        assert!(mesh.with_mu(vec![1.0; mesh.element_count()]).is_ok());
        assert!(generate_annulus_mesh(0.5, 1.0, 0, 64, 0.0, 1.0).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in [MeshKind::UnitSquareTri, MeshKind::UnitCubeTet] {
            assert_eq!(kind.to_string().parse::<MeshKind>().unwrap(), kind);
        }
        assert!("hex".parse::<MeshKind>().is_err());
    }
}
