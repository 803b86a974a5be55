//! JSON and text formats for matrices, codes, quasifield tables, forms and
//! equivalence witnesses.
//!
//! JSON output is canonical: object keys are sorted, matrix lists are sorted,
//! and documents are pretty-printed with a trailing newline, so exporting an
//! imported canonical document reproduces it byte for byte.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::Quasifield;
use crate::classify::EquivalenceWitness;
use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::gf::{FieldDescriptor, FieldSpec};
use crate::matgf::MatGF;
use crate::symmetric::BilinearForm;

/// `{"rows": m, "cols": n, "entries": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub cols: usize,
    pub entries: Vec<Vec<u32>>,
    pub rows: usize,
}

impl MatrixJson {
    pub fn of(a: &MatGF) -> MatrixJson {
        MatrixJson { cols: a.cols(), entries: a.to_rows(), rows: a.rows() }
    }

    pub fn to_mat(&self, field: &Arc<FieldSpec>) -> Result<MatGF> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Validation(format!("matrix entries do not form a {}x{} grid", self.rows, self.cols)));
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Validation("matrix has no entries".into()));
        }
        MatGF::from_rows(field.clone(), &self.entries)
    }
}

/// Code JSON: exactly one of `basis` and `elements` is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<MatrixJson>>,
    pub field: FieldDescriptor,
    pub linear: bool,
    pub m: usize,
    pub n: usize,
}

/// `{"p":, "dim":, "identity":, "table": [..]}` with the table row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub dim: usize,
    pub identity: u32,
    pub p: u32,
    pub table: Vec<u32>,
}

/// `{"field": .., "gram": matrix}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub field: FieldDescriptor,
    pub gram: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    #[serde(rename = "X")]
    pub x: MatrixJson,
    #[serde(rename = "Y")]
    pub y: MatrixJson,
    #[serde(rename = "Z")]
    pub z: MatrixJson,
    pub field: FieldDescriptor,
    pub sigma: u32,
    pub transposed: bool,
    pub verified: bool,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
}

/// Parses JSON text into `T`, reporting the position of syntax and shape errors.
pub fn from_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(parse_err)
}

/// Canonical pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    // Round-tripping through Value sorts every object's keys.
    let value: Value = serde_json::to_value(v).expect("serializable");
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn sorted(mats: &[MatGF]) -> Vec<MatrixJson> {
    let mut v = mats.to_vec();
    v.sort();
    v.iter().map(MatrixJson::of).collect()
}

pub fn code_json(c: &RankCode) -> CodeJson {
    let (basis, elements) = match c.basis() {
        Some(b) => (Some(sorted(b)), None),
        None => (None, Some(sorted(c.elements()))),
    };
    CodeJson { basis, elements, field: c.field().descriptor(), linear: c.basis().is_some(), m: c.m(), n: c.n() }
}

pub fn export_code(c: &RankCode) -> String {
    to_json(&code_json(c))
}

pub fn code_from_json(j: &CodeJson) -> Result<RankCode> {
    let field = FieldSpec::from_descriptor(&j.field)?;
    let load = |v: &[MatrixJson]| -> Result<Vec<MatGF>> {
        let mats = v.iter().map(|m| m.to_mat(&field)).collect::<Result<Vec<_>>>()?;
        if mats.is_empty() {
            return Err(Error::Validation("code lists no matrices".into()));
        }
        if let Some(a) = mats.iter().find(|a| a.shape() != (j.m, j.n)) {
            return Err(Error::Validation(format!("matrix of shape {:?} in a {}x{} code", a.shape(), j.m, j.n)));
        }
        Ok(mats)
    };
    match (&j.basis, &j.elements) {
        (Some(b), None) => {
            if !j.linear {
                return Err(Error::Validation("a basis is given but \"linear\" is false".into()));
            }
            let mats = load(b)?;
            let mut check = mats.clone();
            check.sort();
            if check.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation("duplicate matrix in basis".into()));
            }
            RankCode::from_basis(field.clone(), j.m, j.n, mats)
        }
        (None, Some(e)) => {
            if j.linear {
                return Err(Error::Validation("\"linear\" is true but no basis is given".into()));
            }
            RankCode::from_elements(field.clone(), j.m, j.n, load(e)?)
        }
        _ => Err(Error::Validation("exactly one of \"basis\" and \"elements\" is required".into())),
    }
}

pub fn import_code(s: &str) -> Result<RankCode> {
    code_from_json(&from_json(s)?)
}

pub fn table_json(q: &Quasifield) -> TableJson {
    TableJson { dim: q.dim(), identity: q.identity(), p: q.p(), table: q.table().to_vec() }
}

pub fn export_table(q: &Quasifield) -> String {
    to_json(&table_json(q))
}

/// Parses a table and runs the full axiom check.
pub fn import_table(s: &str) -> Result<Quasifield> {
    let j: TableJson = from_json(s)?;
    Quasifield::validated(j.p, j.dim, j.identity, j.table)
}

pub fn export_form(f: &BilinearForm) -> String {
    to_json(&FormJson { field: f.field().descriptor(), gram: MatrixJson::of(&f.gram) })
}

pub fn import_form(s: &str) -> Result<BilinearForm> {
    let j: FormJson = from_json(s)?;
    let field = FieldSpec::from_descriptor(&j.field)?;
    BilinearForm::new(j.gram.to_mat(&field)?)
}

pub fn witness_json(w: &EquivalenceWitness) -> WitnessJson {
    WitnessJson {
        x: MatrixJson::of(&w.x),
        y: MatrixJson::of(&w.y),
        z: MatrixJson::of(&w.z),
        field: w.x.field().descriptor(),
        sigma: w.sigma,
        transposed: w.transposed,
        verified: w.verified,
    }
}

pub fn export_witness(w: &EquivalenceWitness) -> String {
    to_json(&witness_json(w))
}

/// The witness as stored; `verified` is taken from the document, so callers
/// that need a checked map should re-apply it with `apply_isometry`.
pub fn import_witness(s: &str) -> Result<EquivalenceWitness> {
    let j: WitnessJson = from_json(s)?;
    let field = FieldSpec::from_descriptor(&j.field)?;
    Ok(EquivalenceWitness {
        x: j.x.to_mat(&field)?,
        y: j.y.to_mat(&field)?,
        sigma: j.sigma,
        transposed: j.transposed,
        z: j.z.to_mat(&field)?,
        verified: j.verified,
    })
}

/// One element as its base-`p` digits, most significant first. Fields with
/// `p > 10` separate the digits with `:`.
pub fn element_text(field: &FieldSpec, x: u32) -> String {
    let digits: Vec<String> = field.coeffs(x).iter().rev().map(|d| d.to_string()).collect();
    if field.p() > 10 {
        digits.join(":")
    } else {
        digits.concat()
    }
}

pub fn element_from_text(field: &FieldSpec, s: &str) -> Option<u32> {
    let e = field.e() as usize;
    let digits: Vec<u32> = if field.p() > 10 {
        s.split(':').map(|d| d.parse().ok()).collect::<Option<_>>()?
    } else {
        s.chars().map(|c| c.to_digit(10)).collect::<Option<_>>()?
    };
    if digits.len() != e || digits.iter().any(|&d| d >= field.p()) {
        return None;
    }
    let coeffs: Vec<u32> = digits.into_iter().rev().collect();
    Some(field.from_coeffs(&coeffs))
}

/// One row per line, entries space-separated.
pub fn matrix_to_text(a: &MatGF) -> String {
    let f = a.field();
    let mut s = String::new();
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|&x| element_text(f, x)).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Matrices separated by blank lines; `#` starts a comment line.
pub fn matrices_from_text(field: &Arc<FieldSpec>, s: &str) -> Result<Vec<MatGF>> {
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut flush = |rows: &mut Vec<Vec<u32>>, line: usize| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        let m = MatGF::from_rows(field.clone(), rows)
            .map_err(|e| Error::Parse { line, column: 1, msg: e.to_string() })?;
        out.push(m);
        rows.clear();
        Ok(())
    };
    for (ln, line) in s.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            flush(&mut rows, ln + 1)?;
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for tok in line.split(' ') {
            if !tok.is_empty() {
                let x = element_from_text(field, tok).ok_or_else(|| Error::Parse {
                    line: ln + 1,
                    column: col,
                    msg: format!("{tok:?} is not an element of GF({})", field.order()),
                })?;
                row.push(x);
            }
            col += tok.chars().count() + 1;
        }
        rows.push(row);
    }
    flush(&mut rows, s.lines().count())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_text_roundtrip() {
        for (p, e) in [(2, 4), (3, 3), (11, 1), (11, 2)] {
            let f = FieldSpec::new(p, e, None).unwrap();
            for x in f.elements() {
                assert_eq!(element_from_text(&f, &element_text(&f, x)), Some(x));
            }
        }
    }

    #[test]
    fn matrix_text_roundtrip() {
        let f = FieldSpec::new(2, 2, None).unwrap();
        let a = MatGF::from_rows(f.clone(), &[vec![0, 1, 2], vec![3, 2, 1]]).unwrap();
        let text = matrix_to_text(&a);
        assert_eq!(text, "00 01 10\n11 10 01\n");
        assert_eq!(matrices_from_text(&f, &text).unwrap(), vec![a]);
    }

    #[test]
    fn parse_errors_have_positions() {
        let f = FieldSpec::prime(3).unwrap();
        match matrices_from_text(&f, "0 1\n2 7\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(import_code("{\"m\": 1,"), Err(Error::Parse { line: 1, .. })));
    }
}
