//! Canonical JSON formats for meshes and family manifests.
//!
//! Mesh:     `{"ambient_dimension": d, "vertices": [[x, ...], ...], "cells": [[i0, ..., id], ...]}`
//! Manifest: `{"meshes": ["path0", "path1", ...]}`, paths relative to the manifest file.
//!
//! Numbers are written with the shortest representation that parses back to the same
//! `f64`, so a parse/write/parse cycle is bit-exact.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use meshreg_core::{Mesh, MeshError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}line {line}, column {column}: {message}")]
    Syntax {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}{source}")]
    Structure {
        context: String,
        #[source]
        source: MeshError,
    },
    #[error("{0}")]
    Manifest(String),
    #[error("{0}")]
    Write(#[from] std::io::Error),
}

impl InputError {
    fn in_file(self, path: &Path) -> Self {
        let context = format!("{}: ", path.display());
        match self {
            InputError::Syntax { line, column, message, .. } => InputError::Syntax {
                context,
                line,
                column,
                message,
            },
            InputError::Structure { source, .. } => InputError::Structure { context, source },
            other => other,
        }
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; we report those separately
        let message = match message.rfind(" at line ") {
            Some(pos) => message[..pos].to_string(),
            None => message,
        };
        InputError::Syntax {
            context: String::new(),
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshDocument {
    pub ambient_dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub cells: Vec<Vec<usize>>,
}

impl From<&Mesh> for MeshDocument {
    fn from(mesh: &Mesh) -> Self {
        MeshDocument {
            ambient_dimension: mesh.ambient_dim(),
            vertices: mesh.vertices().map(|v| v.to_vec()).collect(),
            cells: mesh.cells().map(|c| c.to_vec()).collect(),
        }
    }
}

impl TryFrom<MeshDocument> for Mesh {
    type Error = MeshError;

    fn try_from(doc: MeshDocument) -> Result<Self, Self::Error> {
        Mesh::new(doc.ambient_dimension, doc.vertices, doc.cells)
    }
}

pub fn parse_mesh(bytes: &[u8]) -> Result<Mesh, InputError> {
    let doc: MeshDocument = serde_json::from_slice(bytes)?;
    Mesh::try_from(doc).map_err(|source| InputError::Structure {
        context: String::new(),
        source,
    })
}

pub fn read_mesh<R: Read>(mut reader: R) -> Result<Mesh, InputError> {
    let mut buf = Vec::new();
    reader.read_to_end(&mut buf)?;
    parse_mesh(&buf)
}

pub fn load_mesh(path: &Path) -> Result<Mesh, InputError> {
    let bytes = fs::read(path).map_err(|source| InputError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_mesh(&bytes).map_err(|e| e.in_file(path))
}

pub fn write_mesh<W: Write>(mesh: &Mesh, mut sink: W) -> Result<(), InputError> {
    serde_json::to_writer(&mut sink, &MeshDocument::from(mesh)).map_err(std::io::Error::from)?;
    sink.write_all(b"\n")?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyManifest {
    pub meshes: Vec<PathBuf>,
}

impl FamilyManifest {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let bytes = fs::read(path).map_err(|source| InputError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut manifest: FamilyManifest =
            serde_json::from_slice(&bytes).map_err(|e| InputError::from(e).in_file(path))?;
        if manifest.meshes.is_empty() {
            return Err(InputError::Manifest(format!(
                "{}: manifest lists no meshes",
                path.display()
            )));
        }
        let base = path.parent().unwrap_or(Path::new(""));
        for m in &mut manifest.meshes {
            if m.is_relative() {
                *m = base.join(&*m);
            }
        }
        Ok(manifest)
    }

    /// Loads every member; all must share one ambient dimension.
    pub fn load_meshes(&self) -> Result<Vec<Mesh>, InputError> {
        let meshes = self
            .meshes
            .iter()
            .map(|p| load_mesh(p))
            .collect::<Result<Vec<_>, _>>()?;
        let d = meshes[0].ambient_dim();
        if let Some((i, m)) = meshes.iter().enumerate().find(|(_, m)| m.ambient_dim() != d) {
            return Err(InputError::Manifest(format!(
                "{}: ambient dimension {} differs from the family's {}",
                self.meshes[i].display(),
                m.ambient_dim(),
                d
            )));
        }
        Ok(meshes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TET: &str = r#"{"ambient_dimension": 3,
        "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
        "cells": [[0,1,2,3]]}"#;

    #[test]
    fn parses_single_tetrahedron() {
        let mesh = parse_mesh(TET.as_bytes()).unwrap();
        assert_eq!(mesh.ambient_dim(), 3);
        assert_eq!(mesh.cell_count(), 1);
        assert_eq!(mesh.vertex(3), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn structural_errors_are_input_errors() {
        let repeated = TET.replace("[0,1,2,3]", "[0,1,1,2]");
        let err = parse_mesh(repeated.as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            InputError::Structure { source: MeshError::RepeatedIndex { cell: 0, index: 1 }, .. }
        ));
        let short = TET.replace("[0,1,0]", "[0,1]");
        let err = parse_mesh(short.as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            InputError::Structure { source: MeshError::VertexArity { vertex: 2, .. }, .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let broken = "{\"ambient_dimension\": 3,\n \"vertices\": [[0,0,0],\n oops]}";
        match parse_mesh(broken.as_bytes()).unwrap_err() {
            InputError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_mesh(br#"{"ambient_dimension": 2, "vertices": [], "cells": [], "extra": 1}"#),
            Err(InputError::Syntax { .. })
        ));
    }

    #[test]
    fn empty_mesh_is_rejected() {
        assert!(matches!(
            parse_mesh(br#"{"ambient_dimension": 2, "vertices": [[0,0]], "cells": []}"#),
            Err(InputError::Structure { source: MeshError::NoCells, .. })
        ));
    }

    #[test]
    fn write_round_trips_bit_exact() {
        let mesh = Mesh::new(
            2,
            vec![vec![0.1, 1.0 / 3.0], vec![std::f64::consts::PI, -2.5e-300], vec![1e17, 0.7]],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_mesh(&mesh, &mut buf).unwrap();
        let back = parse_mesh(&buf).unwrap();
        assert_eq!(back, mesh);
        for (a, b) in back.vertices().flatten().zip(mesh.vertices().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
