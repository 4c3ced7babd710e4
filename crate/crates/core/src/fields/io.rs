//! The `stgp-field` text format.
//!
//! ```text
//! stgp-field 1
//! mesh square.mesh
//! edges 3 steps 2
//! times 0 0.5
//! 1 2
//! 0 0.25
//! -1 3
//! ```

use super::{DiscreteField, FieldError};
use crate::assembly::DofMatrix;
use crate::basis::{BasisError, TemporalGrid};
use crate::mesh::Mesh;
use crate::text::{parse_real, parse_token, write_real, Lines, ParseError};
use std::fmt::Write as _;

/// Contents of a field file: the mesh binding is informational only.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub mesh_name: String,
    pub grid: TemporalGrid,
    pub dofs: DofMatrix,
}

impl FieldFile {
    /// Binds the DOFs to `mesh`, checking the edge count.
    pub fn into_discrete(self, mesh: Mesh) -> Result<DiscreteField, FieldError> {
        DiscreteField::new(mesh, self.grid, self.dofs)
    }
}

pub fn read_field(text: &str) -> Result<FieldFile, ParseError> {
    let mut lines = Lines::new(text);
    let (line, tokens) = lines.next_line("`stgp-field 1`")?;
    if tokens != ["stgp-field", "1"] {
        return Err(ParseError::new(
            line,
            format!("malformed header `{}`, expected `stgp-field 1`", tokens.join(" ")),
        ));
    }
    let (line, tokens) = lines.next_line("`mesh <name>`")?;
    if tokens.len() != 2 || tokens[0] != "mesh" {
        return Err(ParseError::new(line, "expected `mesh <mesh-file-name>`"));
    }
    let mesh_name = tokens[1].to_string();

    let (line, tokens) = lines.next_line("`edges <M> steps <N>`")?;
    if tokens.len() != 4 || tokens[0] != "edges" || tokens[2] != "steps" {
        return Err(ParseError::new(line, "expected `edges <M> steps <N>`"));
    }
    let rows: usize = parse_token(line, tokens[1], "edge count")?;
    let cols: usize = parse_token(line, tokens[3], "step count")?;

    let (line, tokens) = lines.next_line("the `times` line")?;
    if tokens.first() != Some(&"times") {
        return Err(ParseError::new(line, "expected `times <t_0> ... <t_N-1>`"));
    }
    if tokens.len() != cols + 1 {
        return Err(ParseError::new(
            line,
            format!("expected {cols} times, found {}", tokens.len() - 1),
        ));
    }
    let times = tokens[1..]
        .iter()
        .map(|t| parse_real(line, t, "time"))
        .collect::<Result<Vec<_>, _>>()?;
    let grid = TemporalGrid::new(times).map_err(|err| match err {
        BasisError::NonMonotoneTime(k) => {
            ParseError::new(line, format!("time line is non-monotone at entry {k}"))
        }
        other => ParseError::new(line, other.to_string()),
    })?;

    let mut dofs = DofMatrix::zeros(rows, cols);
    for i in 0..rows {
        let (line, tokens) = lines.next_line("a DOF row")?;
        if tokens.len() != cols {
            return Err(ParseError::new(
                line,
                format!("DOF row {i} has {} values, expected {cols}", tokens.len()),
            ));
        }
        for (j, token) in tokens.iter().enumerate() {
            dofs[(i, j)] = parse_real(line, token, "DOF value")?;
        }
    }
    lines.expect_end()?;
    Ok(FieldFile {
        mesh_name,
        grid,
        dofs,
    })
}

/// Canonical text form: one row per edge, shortest round-trip reals.
pub fn write_field(mesh_name: &str, grid: &TemporalGrid, dofs: &DofMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "stgp-field 1\nmesh {mesh_name}\nedges {} steps {}",
        dofs.rows(),
        dofs.cols()
    );
    out.push_str("times");
    for &t in grid.times() {
        out.push(' ');
        write_real(&mut out, t);
    }
    out.push('\n');
    for i in 0..dofs.rows() {
        for (j, v) in dofs.row(i).enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write_real(&mut out, v);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured_mesh, MeshKind};

    const CANONICAL: &str = "stgp-field 1
mesh square.mesh
edges 3 steps 2
times 0 0.5
1 2
0 0.25
-1 3e-9
";

    #[test]
    fn canonical_file_round_trips() {
        let file = read_field(CANONICAL).unwrap();
        assert_eq!(file.dofs.shape(), (3, 2));
        assert_eq!(file.dofs[(2, 1)], 3e-9);
        assert_eq!(file.mesh_name, "square.mesh");
        assert_eq!(write_field(&file.mesh_name, &file.grid, &file.dofs), CANONICAL);
    }

    #[test]
    fn non_monotone_times_rejected() {
        let text = CANONICAL.replace("times 0 0.5", "times 0 0");
        let err = read_field(&text).unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("non-monotone"));
    }

    #[test]
    fn dimension_mismatch_against_mesh() {
        let file = read_field(CANONICAL).unwrap();
        let mesh = generate_structured_mesh(MeshKind::UnitSquareTri, 1, 1.0).unwrap();
        assert!(matches!(
            file.into_discrete(mesh),
            Err(FieldError::DimensionMismatch { edges: 5, found_rows: 3, .. })
        ));
    }

    #[test]
    fn short_rows_rejected() {
        let err = read_field(&CANONICAL.replace("0 0.25", "0")).unwrap_err();
        assert_eq!(err.line, 6);
        let err = read_field(&CANONICAL.replace("-1 3e-9\n", "")).unwrap_err();
        assert!(err.message.contains("end of file"));
    }
}
