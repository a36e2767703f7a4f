//! Matroid specification files and enumeration caps.

use std::path::Path;

use matroid_xf_core::{Caps, Graph, Matroid};
use serde::Deserialize;

use crate::error::CliError;

/// A matroid described in JSON, dispatched on the `type` field.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidSpecFile {
    Uniform { r: usize, n: usize },
    Graphic { vertices: usize, edges: Vec<[usize; 2]> },
    Binary { matrix: Vec<Vec<u8>> },
    Bases { n: usize, bases: Vec<Vec<usize>> },
    Dual { of: Box<MatroidSpecFile> },
    DirectSum { parts: Vec<MatroidSpecFile> },
}

impl MatroidSpecFile {
    pub fn build(&self) -> Result<Matroid, CliError> {
        let m = match self {
            MatroidSpecFile::Uniform { r, n } => Matroid::uniform(*r, *n)?,
            MatroidSpecFile::Graphic { vertices, edges } => {
                if let Some(i) = edges.iter().position(|[u, v]| u == v) {
                    return Err(CliError::Loop(format!("edge {i} is a self-loop")));
                }
                let edges = edges.iter().map(|&[u, v]| (u, v)).collect();
                Matroid::graphic(Graph::new(*vertices, edges)?)?
            }
            MatroidSpecFile::Binary { matrix } => {
                let width = matrix.first().map_or(0, Vec::len);
                if let Some(j) = (0..width).find(|&j| matrix.iter().all(|row| row.get(j) == Some(&0))) {
                    return Err(CliError::Loop(format!("column {j} is zero")));
                }
                Matroid::binary(matrix)?
            }
            MatroidSpecFile::Bases { n, bases } => Matroid::from_bases(*n, bases)?,
            MatroidSpecFile::Dual { of } => of.build()?.dual().map_err(|e| match e {
                matroid_xf_core::Error::Loop { element } => {
                    CliError::Loop(format!("element {element} is a coloop, so it is a loop of the dual"))
                }
                other => other.into(),
            })?,
            MatroidSpecFile::DirectSum { parts } => {
                let mut iter = parts.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| CliError::Validation("direct_sum needs at least one part".into()))?;
                iter.try_fold(first.build()?, |acc, p| Ok::<_, CliError>(acc.direct_sum(&p.build()?)?))?
            }
        };
        Ok(m)
    }
}

pub fn load_matroid(path: &Path) -> Result<Matroid, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    let spec: MatroidSpecFile = serde_json::from_str(&text).map_err(|e| {
        if e.is_data() {
            CliError::Validation(format!("{}: {e}", path.display()))
        } else {
            CliError::Parse { path: path.to_owned(), message: e.to_string() }
        }
    })?;
    spec.build()
}

/// Parses `key=value` pairs separated by commas, starting from the defaults.
pub fn parse_caps(text: &str) -> Result<Caps, CliError> {
    let mut caps = Caps::default();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Caps(format!("expected key=value, got {item:?}")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| CliError::Caps(format!("{key} must be a non-negative integer")))?;
        match key.trim() {
            "max_elements" => caps.max_elements = value,
            "max_bases" => caps.max_bases = value,
            "max_cover_columns" => caps.max_cover_columns = value,
            other => return Err(CliError::Caps(format!("unknown cap {other:?}"))),
        }
    }
    Ok(caps)
}

pub fn caps_from_env() -> Result<Caps, CliError> {
    match std::env::var("MATROID_XF_CAPS") {
        Ok(text) => parse_caps(&text),
        Err(_) => Ok(Caps::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(json: &str) -> Result<Matroid, CliError> {
        serde_json::from_str::<MatroidSpecFile>(json).unwrap().build()
    }

    #[test]
    fn nested_specs() {
        let m = build(r#"{"type":"dual","of":{"type":"uniform","r":2,"n":5}}"#).unwrap();
        assert_eq!((m.n(), m.rank()), (5, 3));
        let m = build(
            r#"{"type":"direct_sum","parts":[{"type":"uniform","r":1,"n":2},
                {"type":"bases","n":3,"bases":[[0,1],[0,2],[1,2]]}]}"#,
        )
        .unwrap();
        assert_eq!((m.n(), m.rank()), (5, 3));
    }

    #[test]
    fn loops_rejected() {
        assert!(matches!(build(r#"{"type":"binary","matrix":[[1,0],[1,0]]}"#), Err(CliError::Loop(_))));
        assert!(matches!(
            build(r#"{"type":"dual","of":{"type":"uniform","r":3,"n":3}}"#),
            Err(CliError::Loop(_))
        ));
    }

    #[test]
    fn caps_parsing() {
        let caps = parse_caps("max_bases=10, max_cover_columns=7").unwrap();
        assert_eq!((caps.max_bases, caps.max_cover_columns), (10, 7));
        assert!(parse_caps("max_bases").is_err());
        assert!(parse_caps("speed=3").is_err());
    }
}
