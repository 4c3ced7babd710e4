use crate::mesh::{ElementGeometry, EdgeTable, Mesh};
use crate::mesh::{LOCAL_EDGES_TET, LOCAL_EDGES_TRI};
use crate::Vector;
use arrayvec::ArrayVec;

/// Values of the lowest-order Whitney edge functions of one element at one
/// point, one vector per local edge, already multiplied by the global
/// orientation sign.
pub type LocalEdgeValues = ArrayVec<Vector, 6>;

/// Local edge functions `λ_a ∇λ_b − λ_b ∇λ_a` at barycentric point `lambda`,
/// without orientation signs.
pub fn whitney_local(geometry: &ElementGeometry, lambda: &[f64]) -> LocalEdgeValues {
    let pairs: &[(usize, usize)] = if geometry.dim == 2 {
        &LOCAL_EDGES_TRI
    } else {
        &LOCAL_EDGES_TET
    };
    pairs
        .iter()
        .map(|&(a, b)| {
            let (ga, gb) = (&geometry.grads[a], &geometry.grads[b]);
            [
                lambda[a] * gb[0] - lambda[b] * ga[0],
                lambda[a] * gb[1] - lambda[b] * ga[1],
                lambda[a] * gb[2] - lambda[b] * ga[2],
            ]
        })
        .collect()
}

/// Globally oriented edge functions of `element` at barycentric point
/// `lambda`.
pub fn whitney_edge_eval(
    mesh: &Mesh,
    edges: &EdgeTable,
    element: usize,
    lambda: &[f64],
) -> LocalEdgeValues {
    let geometry = mesh.geometry(element);
    whitney_oriented(&geometry, edges, element, lambda)
}

pub(crate) fn whitney_oriented(
    geometry: &ElementGeometry,
    edges: &EdgeTable,
    element: usize,
    lambda: &[f64],
) -> LocalEdgeValues {
    let mut values = whitney_local(geometry, lambda);
    for (w, local) in values.iter_mut().zip(edges.element_edges(element)) {
        if local.sign < 0 {
            for c in w.iter_mut() {
                *c = -*c;
            }
        }
    }
    values
}

/// Edge circulations of a constant vector: the DOFs that represent it exactly.
pub fn constant_field_dofs(mesh: &Mesh, edges: &EdgeTable, value: &Vector) -> Vec<f64> {
    edges
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (pa, pb) = (mesh.nodes()[a], mesh.nodes()[b]);
            (0..3).map(|c| value[c] * (pb[c] - pa[c])).sum()
        })
        .collect()
}
