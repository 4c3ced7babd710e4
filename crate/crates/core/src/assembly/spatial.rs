use super::{AssemblyError, SparseSymMatrix};
use crate::basis::{whitney_local, QuadratureRule};
use crate::mesh::{EdgeTable, Mesh};
use rayon::prelude::*;

/// Edge mass matrix `A_ij = ∫_D μ w_i · w_j`.
///
/// The integrand is quadratic in the barycentric coordinates, so any rule of
/// order two or more integrates it exactly.
pub fn assemble_spatial_mass(
    mesh: &Mesh,
    edges: &EdgeTable,
    quad: &QuadratureRule,
) -> Result<SparseSymMatrix, AssemblyError> {
    if quad.dim() != mesh.dim() {
        return Err(AssemblyError::QuadratureDimension {
            mesh: mesh.dim(),
            rule: quad.dim(),
        });
    }
    if quad.order() < 2 {
        return Err(AssemblyError::MassQuadratureTooLow(quad.order()));
    }
    let local_count = edges.edges_per_element();
    let locals: Vec<Vec<f64>> = (0..mesh.element_count())
        .into_par_iter()
        .map(|e| element_mass(mesh, edges, quad, e))
        .collect();

    let mut triplets = Vec::with_capacity(locals.len() * local_count * local_count);
    for (e, local) in locals.iter().enumerate() {
        let map = edges.element_edges(e);
        for (a, la) in map.iter().enumerate() {
            for (b, lb) in map.iter().enumerate() {
                triplets.push((la.global, lb.global, local[a * local_count + b]));
            }
        }
    }
    Ok(SparseSymMatrix::from_triplets(edges.len(), triplets))
}

/// Signed local mass matrix of one element, row-major.
fn element_mass(mesh: &Mesh, edges: &EdgeTable, quad: &QuadratureRule, e: usize) -> Vec<f64> {
    let geometry = mesh.geometry(e);
    let n = edges.edges_per_element();
    let mut local = vec![0.0; n * n];
    for (point, weight) in quad.points().iter().zip(quad.weights()) {
        let w = whitney_local(&geometry, point);
        for a in 0..n {
            for b in a..n {
                let product = w[a][0] * w[b][0] + w[a][1] * w[b][1] + w[a][2] * w[b][2];
                local[a * n + b] += weight * product;
            }
        }
    }
    let factor = mesh.mu()[e] * geometry.jacobian;
    let map = edges.element_edges(e);
    for a in 0..n {
        for b in a..n {
            let sign = f64::from(map[a].sign * map[b].sign);
            let v = factor * sign * local[a * n + b];
            local[a * n + b] = v;
            local[b * n + a] = v;
        }
    }
    local
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::simplex_quadrature;
    use crate::mesh::{generate_structured_mesh, MeshKind, LOCAL_EDGES_TET, LOCAL_EDGES_TRI};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// ∫_K λ_a λ_b exactly: |K| (1 + δ_ab) d! / (d + 2)!
    fn lambda_product(dim: usize, measure: f64, a: usize, b: usize) -> f64 {
        let num = if a == b { 2.0 } else { 1.0 };
        measure * num * factorial(dim) / factorial(dim + 2)
    }

    /// Dense oracle built pair by pair from exact barycentric-monomial
    /// integrals, independent of any quadrature rule.
    fn dense_oracle(mesh: &Mesh, edges: &EdgeTable) -> Vec<Vec<f64>> {
        let m = edges.len();
        let mut dense = vec![vec![0.0; m]; m];
        let pairs: &[(usize, usize)] = if mesh.dim() == 2 { &LOCAL_EDGES_TRI } else { &LOCAL_EDGES_TET };
        for e in 0..mesh.element_count() {
            let g = mesh.geometry(e);
            let map = edges.element_edges(e);
            let dot = |u: usize, v: usize| {
                let (x, y) = (g.grads[u], g.grads[v]);
                x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
            };
            for (i, &(a, b)) in pairs.iter().enumerate() {
                for (j, &(c, d)) in pairs.iter().enumerate() {
                    // (λa∇λb − λb∇λa)·(λc∇λd − λd∇λc)
                    let value = lambda_product(mesh.dim(), g.measure, a, c) * dot(b, d)
                        - lambda_product(mesh.dim(), g.measure, a, d) * dot(b, c)
                        - lambda_product(mesh.dim(), g.measure, b, c) * dot(a, d)
                        + lambda_product(mesh.dim(), g.measure, b, d) * dot(a, c);
                    let sign = f64::from(map[i].sign * map[j].sign);
                    dense[map[i].global][map[j].global] += mesh.mu()[e] * sign * value;
                }
            }
        }
        dense
    }

    fn two_triangle_square(mu: Vec<f64>) -> Mesh {
        Mesh::new(
            2,
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 2], vec![2, 3, 0]],
            mu,
        )
        .unwrap()
    }

    #[test]
    fn reference_triangle_diagonal() {
        let mesh = Mesh::new(
            2,
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 2]],
            vec![1.0],
        )
        .unwrap();
        let edges = EdgeTable::build(&mesh);
        let a = assemble_spatial_mass(&mesh, &edges, &simplex_quadrature(2, 4).unwrap()).unwrap();
        assert!((a.get(0, 0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn matches_exact_oracle_entry_by_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let square = two_triangle_square(vec![rng.gen_range(0.5..5.0), rng.gen_range(0.5..5.0)]);
        let cube = generate_structured_mesh(MeshKind::UnitCubeTet, 2, 1.0).unwrap();
        let cube_mu = (0..cube.element_count()).map(|_| rng.gen_range(0.5..5.0)).collect();
        let cube = cube.with_mu(cube_mu).unwrap();
        for mesh in [square, cube] {
            let edges = EdgeTable::build(&mesh);
            let quad = simplex_quadrature(mesh.dim(), 4).unwrap();
            let a = assemble_spatial_mass(&mesh, &edges, &quad).unwrap();
            let oracle = dense_oracle(&mesh, &edges);
            for (i, row) in oracle.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert!((a.get(i, j) - v).abs() < 1e-13, "({i},{j}) {} vs {v}", a.get(i, j));
                }
            }
        }
    }

    #[test]
    fn doubling_mu_doubles_a() {
        let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, 3, 1.5).unwrap();
        let edges = EdgeTable::build(&mesh);
        let quad = simplex_quadrature(2, 4).unwrap();
        let a = assemble_spatial_mass(&mesh, &edges, &quad).unwrap();
        let a2 = assemble_spatial_mass(&mesh.with_scaled_mu(2.0).unwrap(), &edges, &quad).unwrap();
        assert_eq!(a2, a.scaled(2.0));
    }

    #[test]
    fn symmetric_positive_definite() {
        for (kind, n) in [(MeshKind::UnitSquareTri, 3), (MeshKind::UnitCubeTet, 2)] {
            let mesh = generate_structured_mesh(kind, n, 1.0).unwrap();
            let edges = EdgeTable::build(&mesh);
            let a = assemble_spatial_mass(&mesh, &edges, &simplex_quadrature(mesh.dim(), 2).unwrap()).unwrap();
            assert!(a.asymmetry() < 1e-12);
            let eigen = a.to_dense().symmetric_eigen();
            assert!(eigen.eigenvalues.min() > 0.0);
        }
    }

    #[test]
    fn independent_of_element_order() {
        let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, 3, 1.0).unwrap();
        let mut elements: Vec<Vec<usize>> = mesh.elements().map(|e| e.to_vec()).collect();
        elements.reverse();
        let shuffled = Mesh::new(2, mesh.nodes().to_vec(), elements, mesh.mu().to_vec()).unwrap();
        let quad = simplex_quadrature(2, 4).unwrap();
        let a = assemble_spatial_mass(&mesh, &EdgeTable::build(&mesh), &quad).unwrap();
        let b = assemble_spatial_mass(&shuffled, &EdgeTable::build(&shuffled), &quad).unwrap();
        for i in 0..a.dim() {
            for (j, v) in a.row(i) {
                assert!((v - b.get(i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn low_order_rule_rejected() {
        let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, 1, 1.0).unwrap();
        let edges = EdgeTable::build(&mesh);
        assert_eq!(
            assemble_spatial_mass(&mesh, &edges, &simplex_quadrature(2, 1).unwrap()),
            Err(AssemblyError::MassQuadratureTooLow(1))
        );
        assert!(assemble_spatial_mass(&mesh, &edges, &simplex_quadrature(3, 2).unwrap()).is_err());
    }
}
