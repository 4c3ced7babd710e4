//! The `stgp-mesh` text format.
//!
//! ```text
//! stgp-mesh 1
//! dim 2
//! nodes 4
//! 0 0 0
//! 1 1 0
//! 2 1 1
//! 3 0 1
//! elements 2
//! 0 0 1 2
//! 1 0 2 3
//! mu 2
//! 0 1
//! 1 1
//! ```

use super::{Mesh, MeshError};
use crate::text::{parse_real, parse_token, write_real, Lines, ParseError};
use std::fmt::Write as _;

pub fn read_mesh(text: &str) -> Result<Mesh, ParseError> {
    let mut lines = Lines::new(text);
    let (line, tokens) = lines.next_line("`stgp-mesh 1`")?;
    if tokens != ["stgp-mesh", "1"] {
        return Err(ParseError::new(
            line,
            format!("malformed header `{}`, expected `stgp-mesh 1`", tokens.join(" ")),
        ));
    }
    let (line, tokens) = lines.next_line("`dim <2|3>`")?;
    let dim = match tokens.as_slice() {
        ["dim", "2"] => 2,
        ["dim", "3"] => 3,
        _ => {
            return Err(ParseError::new(
                line,
                format!("malformed dimension line `{}`", tokens.join(" ")),
            ))
        }
    };

    let (_, node_count) = lines.counted_header("nodes")?;
    let mut nodes = Vec::with_capacity(node_count);
    for k in 0..node_count {
        let (line, tokens) = lines.next_line("a node line")?;
        if tokens.len() != dim + 1 {
            return Err(ParseError::new(
                line,
                format!("node line needs an id and {dim} coordinates"),
            ));
        }
        expect_id(line, tokens[0], k, "node")?;
        let mut p = [0.0; 3];
        for c in 0..dim {
            p[c] = parse_real(line, tokens[c + 1], "coordinate")?;
        }
        nodes.push(p);
    }

    let (_, element_count) = lines.counted_header("elements")?;
    let mut elements = Vec::with_capacity(element_count * (dim + 1));
    let mut element_lines = Vec::with_capacity(element_count);
    for k in 0..element_count {
        let (line, tokens) = lines.next_line("an element line")?;
        if tokens.len() != dim + 2 {
            return Err(ParseError::new(
                line,
                format!("element line needs an id and {} node indices", dim + 1),
            ));
        }
        expect_id(line, tokens[0], k, "element")?;
        for token in &tokens[1..] {
            let node: usize = parse_token(line, token, "node index")?;
            if node >= node_count {
                return Err(ParseError::new(
                    line,
                    format!("node index {node} out of range (mesh has {node_count} nodes)"),
                ));
            }
            elements.push(node);
        }
        element_lines.push(line);
    }

    let (mu_line, mu_count) = lines.counted_header("mu")?;
    let mut mu: Vec<Option<f64>> = vec![None; element_count];
    for _ in 0..mu_count {
        let (line, tokens) = lines.next_line("a mu line")?;
        if tokens.len() != 2 {
            return Err(ParseError::new(line, "mu line needs `<element-id> <value>`"));
        }
        let element: usize = parse_token(line, tokens[0], "element id")?;
        if element >= element_count {
            return Err(ParseError::new(
                line,
                format!("mu entry for element {element} out of range"),
            ));
        }
        if mu[element].is_some() {
            return Err(ParseError::new(
                line,
                format!("duplicate mu entry for element {element}"),
            ));
        }
        mu[element] = Some(parse_real(line, tokens[1], "permeability")?);
    }
    lines.expect_end()?;
    let mu = mu
        .into_iter()
        .enumerate()
        .map(|(e, value)| {
            value.ok_or_else(|| ParseError::new(mu_line, format!("missing mu entry for element {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Mesh::from_flat(dim, nodes, elements, mu).map_err(|err| {
        let line = match err {
            MeshError::Degenerate { element, .. }
            | MeshError::RepeatedNode { element }
            | MeshError::InvalidMu { element, .. } => element_lines.get(element).copied().unwrap_or(0),
            _ => 0,
        };
        ParseError::new(line, err.to_string())
    })
}

fn expect_id(line: usize, token: &str, expected: usize, what: &str) -> Result<(), ParseError> {
    let id: usize = parse_token(line, token, &format!("{what} id"))?;
    if id != expected {
        return Err(ParseError::new(
            line,
            format!("{what} ids must be 0-based and consecutive: expected {expected}, found {id}"),
        ));
    }
    Ok(())
}

/// Canonical text form of a mesh. Reals use the shortest representation that
/// reads back bit-identically.
pub fn write_mesh(mesh: &Mesh) -> String {
    let dim = mesh.dim();
    let mut out = String::new();
    let _ = writeln!(out, "stgp-mesh 1\ndim {dim}\nnodes {}", mesh.node_count());
    for (k, p) in mesh.nodes().iter().enumerate() {
        let _ = write!(out, "{k}");
        for c in p.iter().take(dim) {
            out.push(' ');
            write_real(&mut out, *c);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "elements {}", mesh.element_count());
    for (k, element) in mesh.elements().enumerate() {
        let _ = write!(out, "{k}");
        for n in element {
            let _ = write!(out, " {n}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "mu {}", mesh.element_count());
    for (k, m) in mesh.mu().iter().enumerate() {
        let _ = write!(out, "{k} ");
        write_real(&mut out, *m);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured_mesh, MeshKind};

    const TWO_TRIANGLES: &str = "stgp-mesh 1
dim 2
nodes 4
0 0 0
1 1 0
2 1 1
3 0 1
elements 2
0 0 1 2
1 0 2 3
mu 2
0 1
1 4e-7
";

    #[test]
    fn canonical_file_round_trips_byte_for_byte() {
        let mesh = read_mesh(TWO_TRIANGLES).unwrap();
        assert_eq!(mesh.node_count(), 4);
        assert_eq!(mesh.mu(), &[1.0, 4e-7]);
        assert_eq!(write_mesh(&mesh), TWO_TRIANGLES);
    }

    #[test]
    fn mesh_values_round_trip() {
        for kind in [MeshKind::UnitSquareTri, MeshKind::UnitCubeTet] {
            let mesh = generate_structured_mesh(kind, 3, 1.2566370614359173e-6).unwrap();
            assert_eq!(read_mesh(&write_mesh(&mesh)).unwrap(), mesh);
        }
    }

    #[test]
    fn comments_are_ignored() {
        let text = format!("# generated\n{}", TWO_TRIANGLES.replace("dim 2", "dim 2 # planar"));
        assert_eq!(read_mesh(&text).unwrap(), read_mesh(TWO_TRIANGLES).unwrap());
    }

    #[test]
    fn node_index_out_of_range_names_the_line() {
        let text = TWO_TRIANGLES.replace("1 0 2 3", "1 0 2 99");
        let err = read_mesh(&text).unwrap_err();
        assert_eq!(err.line, 10);
        assert!(err.message.contains("99"));
    }

    #[test]
    fn malformed_header_and_missing_mu() {
        let err = read_mesh(&TWO_TRIANGLES.replace("stgp-mesh 1", "stgp-mesh 2")).unwrap_err();
        assert_eq!(err.line, 1);
        let text = TWO_TRIANGLES.replace("mu 2\n0 1\n", "mu 1\n");
        let err = read_mesh(&text).unwrap_err();
        assert_eq!(err.line, 11);
        assert!(err.message.contains("missing mu entry for element 0"));
    }

    #[test]
    fn degenerate_element_reported_at_its_line() {
        let text = TWO_TRIANGLES.replace("3 0 1\n", "3 2 2\n");
        let err = read_mesh(&text).unwrap_err();
        assert_eq!(err.line, 10);
        assert!(err.message.contains("degenerate"));
    }
}
