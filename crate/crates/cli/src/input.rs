//! Lattice input: builtin names, inline JSON, or a path to a JSON file.
//!
//! The JSON may be a bare Gram matrix `[[int]]` or a lattice record
//! `{"label": str, "gram": [[int]]}`. Any object carrying `label` and
//! `gram`, such as a `lattice-info` JSON report, is accepted.

use std::path::Path;

use fano_lattice::fano::ambient_model;
use fano_lattice::lattice::LatticeRecord;
use fano_lattice::{Lattice, StandardKind};
use serde::Deserialize;

use crate::CliError;

pub const BUILTIN_NAMES: [&str; 7] = ["U", "A1", "E8", "Lambda", "Lambda2", "I22_2", "I20_2"];

#[derive(Deserialize)]
#[serde(untagged)]
enum GramInput {
    Matrix(Vec<Vec<i64>>),
    Record { label: String, gram: Vec<Vec<i64>> },
}

pub fn builtin(name: &str) -> Result<Option<Lattice>, CliError> {
    let l = match name {
        "U" => Lattice::standard(StandardKind::U)?,
        "A1" => Lattice::standard(StandardKind::A1)?,
        "E8" => Lattice::standard(StandardKind::E8)?,
        "I22_2" => Lattice::standard(StandardKind::OddUnimodular(22, 2))?,
        "I20_2" => Lattice::standard(StandardKind::OddUnimodular(20, 2))?,
        "Lambda" => ambient_model()?.lambda_lattice.clone(),
        "Lambda2" => ambient_model()?
            .lambda2
            .induced_lattice()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .with_label("Lambda2"),
        _ => return Ok(None),
    };
    Ok(Some(l))
}

/// Parses JSON text into a lattice. `fallback_label` names bare matrices.
pub fn parse_json(text: &str, fallback_label: &str) -> Result<Lattice, CliError> {
    let input: GramInput =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("expected a Gram matrix or lattice record: {e}")))?;
    let record = match input {
        GramInput::Matrix(gram) => LatticeRecord { label: fallback_label.to_string(), gram },
        GramInput::Record { label, gram } => LatticeRecord { label, gram },
    };
    if record.gram.is_empty() {
        return Err(CliError::Parse("empty Gram matrix".into()));
    }
    let n = record.gram.len();
    if let Some(row) = record.gram.iter().find(|r| r.len() != n) {
        return Err(CliError::Parse(format!("Gram matrix has {n} rows but a row of length {}", row.len())));
    }
    Ok(Lattice::try_from(record)?)
}

/// Resolves a lattice argument: builtin name, then inline JSON, then file.
pub fn resolve_lattice(arg: &str) -> Result<Lattice, CliError> {
    if let Some(l) = builtin(arg)? {
        return Ok(l);
    }
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        return parse_json(arg, "");
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
        return parse_json(&text, "");
    }
    Err(CliError::Parse(format!(
        "{arg:?} is not a builtin ({}), inline JSON, or a readable file",
        BUILTIN_NAMES.join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_resolve() {
        for name in BUILTIN_NAMES {
            let l = resolve_lattice(name).unwrap();
            assert_eq!(l.label(), Some(name));
        }
    }

    #[test]
    fn json_forms() {
        let a = resolve_lattice("[[2,1],[1,2]]").unwrap();
        let b = resolve_lattice(r#"{"label":"A2","gram":[[2,1],[1,2]]}"#).unwrap();
        assert_eq!(a.gram(), b.gram());
        assert_eq!(b.label(), Some("A2"));
    }

    #[test]
    fn error_classes() {
        assert_eq!(resolve_lattice("[[1,2]").unwrap_err().exit_code(), 2);
        assert_eq!(resolve_lattice("[[1,2],[3]]").unwrap_err().exit_code(), 2);
        assert_eq!(resolve_lattice("[[1,2],[3,4]]").unwrap_err().exit_code(), 3);
        assert_eq!(resolve_lattice("[[1,1],[1,1]]").unwrap_err().exit_code(), 3);
        assert_eq!(resolve_lattice("no-such-name").unwrap_err().exit_code(), 2);
    }
}
