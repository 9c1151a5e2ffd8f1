//! JSON and CSV exchange formats.
//!
//! Complex scalars are `[re, im]`, matrices are arrays of rows, compressed
//! vectors are `{dim, order, labels?, data}` and parameter files are
//! `{dim, hbar, A, B}`. Malformed documents give [`Error::Parse`]; well-formed
//! documents with inconsistent sizes give [`Error::DimensionMismatch`].

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hagedorn::{RealignMode, RealignmentPlan};
use crate::matrix::{ComplexMatrix, C64};
use crate::multiindex::{lex_enumerate, MultiIndex, Ranker};
use crate::symspace::SymVec;

pub type JsonComplex = [f64; 2];

pub fn complex_to_json(z: C64) -> JsonComplex {
    [z.re, z.im]
}

pub fn complex_from_json(z: JsonComplex) -> C64 {
    C64::new(z[0], z[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<JsonComplex>>);

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson(
            m.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(complex_to_json).collect())
                .collect(),
        )
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(m: &MatrixJson) -> Result<Self> {
        let cols = m.0.first().map_or(0, Vec::len);
        if m.0.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("matrix rows have different lengths".into()));
        }
        let rows: Vec<Vec<C64>> = m.0.iter().map(|r| r.iter().copied().map(complex_from_json).collect()).collect();
        ComplexMatrix::from_rows(&rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymVecJson {
    pub dim: usize,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<u32>>>,
    pub data: Vec<JsonComplex>,
}

impl SymVecJson {
    pub fn from_symvec(y: &SymVec, with_labels: bool) -> Self {
        let labels = with_labels.then(|| y.labels().iter().map(|k| k.entries().to_vec()).collect());
        SymVecJson {
            dim: y.dim(),
            order: y.order(),
            labels,
            data: y.data().iter().copied().map(complex_to_json).collect(),
        }
    }

    /// Converts to canonical order. Labels, when present, may come in any
    /// order but must list every multi-index of modulus `order` exactly once.
    pub fn to_symvec(&self) -> Result<SymVec> {
        let values: Vec<C64> = self.data.iter().copied().map(complex_from_json).collect();
        let Some(labels) = &self.labels else {
            return SymVec::new(self.dim, self.order, values);
        };
        let len = lex_enumerate(self.dim, self.order)?.len();
        if labels.len() != values.len() || labels.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{} labels and {} values for a level of size {len}",
                labels.len(),
                values.len()
            )));
        }
        let ranker = Ranker::new(self.dim, self.order)?;
        let mut out = vec![None; len];
        for (k, v) in labels.iter().zip(values) {
            if k.len() != self.dim || k.iter().map(|&e| e as usize).sum::<usize>() != self.order {
                return Err(Error::DimensionMismatch(format!(
                    "label {} is not a multi-index of dimension {} and modulus {}",
                    MultiIndex::new(k.clone()),
                    self.dim,
                    self.order
                )));
            }
            let slot = &mut out[ranker.rank0(k)];
            if slot.replace(v).is_some() {
                return Err(Error::DimensionMismatch(format!("duplicate label {}", MultiIndex::new(k.clone()))));
            }
        }
        SymVec::new(self.dim, self.order, out.into_iter().map(|v| v.expect("every slot filled")).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub dim: usize,
    pub hbar: f64,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
}

impl ParamsJson {
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix, hbar: f64) -> Self {
        ParamsJson {
            dim: a.rows(),
            hbar,
            a: a.into(),
            b: b.into(),
        }
    }

    /// `(A, B, ħ)` with shapes checked against `dim`; validity is not checked.
    pub fn matrices(&self) -> Result<(ComplexMatrix, ComplexMatrix, f64)> {
        let a = ComplexMatrix::try_from(&self.a)?;
        let b = ComplexMatrix::try_from(&self.b)?;
        for (name, m) in [("A", &a), ("B", &b)] {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, dim is {}",
                    m.rows(),
                    m.cols(),
                    self.dim
                )));
            }
        }
        Ok((a, b, self.hbar))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealignmentPlanJson {
    pub mode: RealignMode,
    #[serde(rename = "U")]
    pub u: MatrixJson,
    #[serde(rename = "A_new")]
    pub a_new: MatrixJson,
    #[serde(rename = "B_new")]
    pub b_new: MatrixJson,
    pub phase: JsonComplex,
    pub sigma: Vec<f64>,
}

impl From<&RealignmentPlan> for RealignmentPlanJson {
    fn from(p: &RealignmentPlan) -> Self {
        RealignmentPlanJson {
            mode: p.mode,
            u: (&p.u).into(),
            a_new: (&p.a_new).into(),
            b_new: (&p.b_new).into(),
            phase: complex_to_json(p.phase),
            sigma: p.sigma.clone(),
        }
    }
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON; floats use the shortest representation that parses back to the same value.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

pub fn read_matrix(s: &str) -> Result<ComplexMatrix> {
    ComplexMatrix::try_from(&from_json_str::<MatrixJson>(s)?)
}

pub fn read_symvec(s: &str) -> Result<SymVec> {
    from_json_str::<SymVecJson>(s)?.to_symvec()
}

pub fn read_params(s: &str) -> Result<(ComplexMatrix, ComplexMatrix, f64)> {
    from_json_str::<ParamsJson>(s)?.matrices()
}

/// Rows of `dim` reals. Blank lines and `#` comments are skipped, and a
/// first row that does not parse as numbers is taken as a header.
pub fn read_points_csv(s: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(s.as_bytes());
    let mut out = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(p) if p.len() == dim => out.push(p),
            Ok(p) => {
                return Err(Error::DimensionMismatch(format!(
                    "line {}: {} coordinates, expected {dim}",
                    n + 1,
                    p.len()
                )))
            }
            Err(_) if n == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("line {}: {e}", n + 1))),
        }
    }
    Ok(out)
}

/// `k_1..k_d, x_1..x_d, re, im` per packet and point.
pub fn packets_to_csv(labels: &[MultiIndex], points: &[Vec<f64>], values: &ComplexMatrix) -> Result<String> {
    let dim = points.first().map_or_else(|| labels.first().map_or(0, |k| k.dim()), Vec::len);
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (1..=dim)
        .map(|j| format!("k{j}"))
        .chain((1..=dim).map(|j| format!("x{j}")))
        .chain(["re".into(), "im".into()])
        .collect();
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for (i, k) in labels.iter().enumerate() {
        for (pt, x) in points.iter().enumerate() {
            let v = values[(i, pt)];
            let rec: Vec<String> = k
                .entries()
                .iter()
                .map(u32::to_string)
                .chain(x.iter().map(|c| format!("{c:.16e}")))
                .chain([format!("{:.16e}", v.re), format!("{:.16e}", v.im)])
                .collect();
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::SeededRng;

    #[test]
    fn matrix_round_trip() {
        let m = SeededRng::new(1).complex_matrix(3, 2);
        let s = to_json_string(&MatrixJson::from(&m));
        assert_eq!(read_matrix(&s).unwrap(), m);
    }

    #[test]
    fn matrix_errors() {
        assert!(matches!(read_matrix("[[1,2]"), Err(Error::Parse(_))));
        assert!(matches!(read_matrix("[[[1,0]],[[1,0],[2,0]]]"), Err(Error::Parse(_))));
    }

    #[test]
    fn symvec_round_trip_and_relabel() {
        let y = SymVec::new(2, 2, SeededRng::new(2).complex_vector(3)).unwrap();
        for labels in [false, true] {
            let s = to_json_string(&SymVecJson::from_symvec(&y, labels));
            assert_eq!(read_symvec(&s).unwrap(), y);
        }
        let shuffled = r#"{"dim":2,"order":2,"labels":[[0,2],[2,0],[1,1]],"data":[[3,0],[1,0],[2,0]]}"#;
        let z = read_symvec(shuffled).unwrap();
        let re: Vec<f64> = z.data().iter().map(|c| c.re).collect();
        assert_eq!(re, [1.0, 2.0, 3.0]);
        let dup = r#"{"dim":2,"order":2,"labels":[[0,2],[0,2],[1,1]],"data":[[3,0],[1,0],[2,0]]}"#;
        assert!(matches!(read_symvec(dup), Err(Error::DimensionMismatch(_))));
        let short = r#"{"dim":2,"order":2,"data":[[3,0]]}"#;
        assert!(matches!(read_symvec(short), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn params_round_trip() {
        let (a, b) = SeededRng::new(3).valid_pair(2);
        let s = to_json_string(&ParamsJson::new(&a, &b, 0.25));
        let (a2, b2, h) = read_params(&s).unwrap();
        assert_eq!((a2, b2, h), (a, b, 0.25));
        let wrong_dim = s.replacen("\"dim\": 2", "\"dim\": 3", 1);
        assert!(matches!(read_params(&wrong_dim), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn points_csv() {
        let pts = read_points_csv("x,y\n1, 2\n# note\n\n-0.5,3e-1\n", 2).unwrap();
        assert_eq!(pts, vec![vec![1.0, 2.0], vec![-0.5, 0.3]]);
        assert!(matches!(read_points_csv("1,2,3\n", 2), Err(Error::DimensionMismatch(_))));
        assert!(matches!(read_points_csv("1,2\n1,x\n", 2), Err(Error::Parse(_))));
    }

    #[test]
    fn packet_csv_layout() {
        let labels = vec![MultiIndex::new(vec![1, 0]), MultiIndex::new(vec![0, 1])];
        let pts = vec![vec![0.0, 1.0]];
        let vals = ComplexMatrix::from_real_rows(&[vec![0.5], vec![-1.0]]).unwrap();
        let out = packets_to_csv(&labels, &pts, &vals).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "k1,k2,x1,x2,re,im");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("0,1,"));
    }
}
