use super::Mesh;
use std::collections::BTreeMap;

/// Local edges of a triangle as pairs of local vertex indices.
pub const LOCAL_EDGES_TRI: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
/// Local edges of a tetrahedron as pairs of local vertex indices.
pub const LOCAL_EDGES_TET: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub(crate) fn local_edges(dim: usize) -> &'static [(usize, usize)] {
    if dim == 2 {
        &LOCAL_EDGES_TRI
    } else {
        &LOCAL_EDGES_TET
    }
}

/// Global index and orientation of one local edge of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalEdge {
    pub global: usize,
    /// `+1` when the local direction (lower to higher local vertex) runs from
    /// the lower to the higher global node index, `-1` otherwise.
    pub sign: i8,
}

/// Global edge enumeration with the ascending-node-index orientation.
///
/// Edges are sorted lexicographically by `(node_a, node_b)` with
/// `node_a < node_b`, so two builds of the same mesh are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTable {
    edges: Vec<(usize, usize)>,
    local: Vec<LocalEdge>,
    per_element: usize,
}

impl EdgeTable {
    pub fn build(mesh: &Mesh) -> Self {
        let pairs = local_edges(mesh.dim());
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for element in mesh.elements() {
            for &(a, b) in pairs {
                let (na, nb) = (element[a], element[b]);
                index.insert((na.min(nb), na.max(nb)), 0);
            }
        }
        let mut edges = Vec::with_capacity(index.len());
        for (k, (pair, slot)) in index.iter_mut().enumerate() {
            *slot = k;
            edges.push(*pair);
        }
        let mut local = Vec::with_capacity(mesh.element_count() * pairs.len());
        for element in mesh.elements() {
            for &(a, b) in pairs {
                let (na, nb) = (element[a], element[b]);
                let global = index[&(na.min(nb), na.max(nb))];
                local.push(LocalEdge {
                    global,
                    sign: if na < nb { 1 } else { -1 },
                });
            }
        }
        EdgeTable {
            edges,
            local,
            per_element: pairs.len(),
        }
    }

    /// Number of distinct edges `M`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Local-edge map of element `e`, in the order of [`LOCAL_EDGES_TRI`] or
    /// [`LOCAL_EDGES_TET`].
    pub fn element_edges(&self, e: usize) -> &[LocalEdge] {
        &self.local[e * self.per_element..(e + 1) * self.per_element]
    }

    pub fn edges_per_element(&self) -> usize {
        self.per_element
    }

    /// Index of the edge joining two nodes, if it exists.
    pub fn find(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }
}
