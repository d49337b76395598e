//! Named lattices and codes, file formats and the expression language.

pub mod dsl;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::BinaryCode;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

pub use dsl::{parse_code, parse_lattice, parse_spec, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Lattice,
    Code,
}

/// Invariants an entry is known to have. Unset fields are not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expected {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceeds_h: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twisted_count: Option<u64>,
    /// Which of the conditions (a), (b), (c) holds, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<char>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twisted_sign: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_distribution: Option<Vec<(u32, u64)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: Kind,
    pub constructor: &'static str,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<Value> {
        parse_spec(self.constructor)
    }
}

fn lat(name: &'static str, constructor: &'static str, expected: Expected) -> CatalogEntry {
    CatalogEntry { name, kind: Kind::Lattice, constructor, expected }
}

fn code(name: &'static str, constructor: &'static str, expected: Expected) -> CatalogEntry {
    CatalogEntry { name, kind: Kind::Code, constructor, expected }
}

fn plain(rank: usize, det: u64, roots: usize) -> Expected {
    Expected {
        rank: Some(rank),
        determinant: Some(det),
        root_count: Some(roots),
        r_size: Some(0),
        q_size: Some(1),
        exceeds_h: Some(false),
        ..Expected::default()
    }
}

/// All catalog entries, lattices first, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        lat("A1", "A1", Expected { twisted_count: Some(2), ..plain(1, 2, 2) }),
        lat(
            "2A1",
            "2A1",
            Expected {
                root_count: Some(0),
                r_size: Some(1),
                q_size: Some(3),
                exceeds_h: Some(true),
                h_order: Some(2),
                aut_order: Some(6),
                twisted_count: Some(2),
                ..plain(1, 8, 0)
            },
        ),
        lat(
            "sqrt2*A1",
            "sqrt2*A1",
            Expected { h_order: Some(2), aut_order: Some(2), ..plain(1, 4, 0) },
        ),
        lat("A2", "A2", plain(2, 3, 6)),
        lat("A1+A1", "A1+A1", plain(2, 4, 4)),
        lat(
            "sqrt2*(A1+A1)",
            "sqrt2*(A1+A1)",
            Expected {
                r_size: Some(1),
                q_size: Some(3),
                exceeds_h: Some(true),
                h_order: Some(16),
                aut_order: Some(48),
                twisted_count: Some(4),
                ..plain(2, 16, 0)
            },
        ),
        lat("A3", "A3", plain(3, 4, 12)),
        lat(
            "sqrt2*A3",
            "sqrt2*A3",
            Expected {
                r_size: Some(1),
                q_size: Some(3),
                exceeds_h: Some(true),
                h_order: Some(192),
                aut_order: Some(576),
                ..plain(3, 32, 0)
            },
        ),
        lat("D4", "D4", plain(4, 4, 24)),
        lat(
            "B(zero(4))",
            "B(zero(4))",
            Expected {
                rank: Some(4),
                determinant: Some(64),
                root_count: Some(0),
                exceeds_h: Some(true),
                ..Expected::default()
            },
        ),
        lat(
            "E8",
            "E8",
            Expected {
                q_size: Some(2),
                exceeds_h: Some(true),
                twisted_count: Some(1),
                condition: Some('c'),
                twisted_sign: Some("-"),
                ..plain(8, 1, 240)
            },
        ),
        lat(
            "B(rep(8))",
            "B(rep(8))",
            Expected {
                rank: Some(8),
                determinant: Some(256),
                root_count: Some(0),
                r_size: Some(135),
                q_size: Some(527),
                exceeds_h: Some(true),
                twisted_count: Some(256),
                condition: Some('a'),
                twisted_sign: Some("-"),
                ..Expected::default()
            },
        ),
        lat(
            "B(hamming8)",
            "B(hamming8)",
            Expected {
                rank: Some(8),
                root_count: Some(112),
                exceeds_h: Some(true),
                condition: Some('a'),
                twisted_sign: Some("-"),
                ..Expected::default()
            },
        ),
        lat("E8+E8", "E8+E8", plain(16, 1, 480)),
        lat("Gamma16", "Gamma16", plain(16, 1, 480)),
        lat(
            "B(rm14)",
            "B(rm14)",
            Expected {
                rank: Some(16),
                root_count: Some(0),
                exceeds_h: Some(true),
                condition: Some('b'),
                twisted_sign: Some("+"),
                ..Expected::default()
            },
        ),
        lat("Z1", "Z1", Expected { rank: Some(1), determinant: Some(1), ..Expected::default() }),
        lat("Z2", "Z2", Expected { rank: Some(2), determinant: Some(1), ..Expected::default() }),
        code(
            "zero(4)",
            "zero(4)",
            Expected {
                code_dimension: Some(0),
                weight_distribution: Some(vec![(0, 1)]),
                ..Expected::default()
            },
        ),
        code(
            "rep(8)",
            "rep(8)",
            Expected {
                code_dimension: Some(1),
                weight_distribution: Some(vec![(0, 1), (8, 1)]),
                ..Expected::default()
            },
        ),
        code(
            "hamming8",
            "hamming8",
            Expected {
                code_dimension: Some(4),
                weight_distribution: Some(vec![(0, 1), (4, 14), (8, 1)]),
                ..Expected::default()
            },
        ),
        code(
            "rm14",
            "rm14",
            Expected {
                code_dimension: Some(5),
                weight_distribution: Some(vec![(0, 1), (8, 30), (16, 1)]),
                ..Expected::default()
            },
        ),
    ]
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// On-disk lattice: an optional name and a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gram: Vec<Vec<i64>>,
}

/// On-disk code: a length and generator strings, leftmost character first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub length: usize,
    pub generators: Vec<String>,
}

fn read_document<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let is_toml = path.extension().is_some_and(|e| e == "toml");
    if is_toml {
        toml::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    } else {
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }
}

pub fn read_lattice_file(path: &Path) -> Result<Lattice> {
    let f: LatticeFile = read_document(path)?;
    Lattice::new(f.gram)
}

pub fn read_code_file(path: &Path) -> Result<BinaryCode> {
    let f: CodeFile = read_document(path)?;
    BinaryCode::from_strings(f.length, &f.generators)
}

/// Resolves a command-line operand: an existing file, a catalog name, or an
/// expression. Files with a `length` field are read as codes.
pub fn resolve(arg: &str) -> Result<Value> {
    let path = Path::new(arg);
    if path.is_file() {
        let v: serde_json::Value = if path.extension().is_some_and(|e| e == "toml") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("{arg}: {e}")))?;
            let t: toml::Value =
                toml::from_str(&text).map_err(|e| Error::Input(format!("{arg}: {e}")))?;
            serde_json::to_value(t).map_err(|e| Error::Input(e.to_string()))?
        } else {
            read_document(path)?
        };
        return if v.get("length").is_some() {
            read_code_file(path).map(Value::Code)
        } else {
            read_lattice_file(path).map(Value::Lattice)
        };
    }
    match lookup(arg) {
        Some(e) => e.build(),
        None => parse_spec(arg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds() {
        let cat = catalog();
        assert!(cat.iter().filter(|e| e.kind == Kind::Lattice).count() >= 15);
        for e in &cat {
            let v = e.build().unwrap();
            match (&v, e.kind) {
                (Value::Lattice(l), Kind::Lattice) => {
                    if let Some(r) = e.expected.rank {
                        assert_eq!(l.rank(), r, "{}", e.name);
                    }
                }
                (Value::Code(c), Kind::Code) => {
                    assert_eq!(Some(c.dimension()), e.expected.code_dimension, "{}", e.name);
                }
                _ => panic!("{} has the wrong kind", e.name),
            }
        }
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let lj = dir.path().join("a2.json");
        std::fs::write(&lj, r#"{"name": "A2", "gram": [[2, -1], [-1, 2]]}"#).unwrap();
        let lt = dir.path().join("a2.toml");
        std::fs::write(&lt, "gram = [[2, -1], [-1, 2]]\n").unwrap();
        let a2 = parse_lattice("A2").unwrap();
        assert_eq!(read_lattice_file(&lj).unwrap(), a2);
        assert_eq!(resolve(lt.to_str().unwrap()).unwrap(), Value::Lattice(a2));
        let cj = dir.path().join("c.json");
        std::fs::write(&cj, r#"{"length": 8, "generators": ["11111111"]}"#).unwrap();
        assert_eq!(
            resolve(cj.to_str().unwrap()).unwrap(),
            Value::Code(BinaryCode::repetition(8).unwrap())
        );
        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, r#"{"gram": [[1, 2], [3, 4]]}"#).unwrap();
        assert!(read_lattice_file(&bad).is_err());
    }
}
