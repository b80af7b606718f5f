//! JSON formats.
//!
//! Complex numbers are `[re, im]` pairs. The encodings are
//!
//! * matrix: `{"dim": n, "entries": [[[re, im], ...], ...]}`, row-major;
//! * Gelfand-Zeitlin value: `{"n": n, "levels": [[[re, im], ...], ...]}`;
//! * decomposition data: `{"n": n, "strata": [[parts...], ...]}`;
//! * cover point: `{"x": matrix, "z": [[[re, im], ...], ...]}`;
//! * group element: `{"levels": [{"s": [...], "t": [...]}, ...]}`.
//!
//! Every decoder validates its input fully and never panics.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cover::{CoverPoint, ZdElement};
use crate::decomp::{Partition, RegularDecompositionData};
use crate::error::{GzError, Result};
use crate::gz::GzValue;
use crate::linalg::CMatrix;
use crate::Tolerances;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    dim: usize,
    entries: Vec<Vec<Complex64>>,
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = GzError;
    fn try_from(m: MatrixJson) -> Result<Self> {
        if m.entries.len() != m.dim {
            return Err(GzError::InvalidMatrix(format!(
                "dim {} but {} rows",
                m.dim,
                m.entries.len()
            )));
        }
        CMatrix::from_rows(&m.entries)
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { dim: self.dim(), entries: self.rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CMatrix::try_from(MatrixJson::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GzValueJson {
    n: usize,
    levels: Vec<Vec<Complex64>>,
}

impl Serialize for GzValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GzValueJson { n: self.n(), levels: self.levels().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GzValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GzValueJson::deserialize(d)?;
        if raw.levels.len() != raw.n {
            return Err(D::Error::custom(format!("n = {} but {} levels", raw.n, raw.levels.len())));
        }
        GzValue::new(raw.levels).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionJson {
    n: usize,
    strata: Vec<Vec<usize>>,
}

impl Serialize for RegularDecompositionData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionJson {
            n: self.n(),
            strata: self.strata().iter().map(|p| p.parts().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RegularDecompositionData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DecompositionJson::deserialize(d)?;
        if raw.strata.len() != raw.n {
            return Err(D::Error::custom(format!("n = {} but {} strata", raw.n, raw.strata.len())));
        }
        let parts = raw
            .strata
            .into_iter()
            .map(Partition::new)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RegularDecompositionData::new(parts).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverPointJson {
    x: CMatrix,
    z: Vec<Vec<Complex64>>,
}

impl Serialize for CoverPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoverPointJson { x: self.x().clone(), z: self.z().to_vec() }.serialize(s)
    }
}

fn parse<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(GzError::from)
}

pub fn decode_matrix(s: &str) -> Result<CMatrix> {
    parse(s)
}

pub fn decode_gz_value(s: &str) -> Result<GzValue> {
    parse(s)
}

pub fn decode_decomposition(s: &str) -> Result<RegularDecompositionData> {
    parse(s)
}

/// Decodes and validates a cover point (strong regularity and eigenvalue data).
pub fn decode_cover_point(s: &str, tols: &Tolerances) -> Result<CoverPoint> {
    let raw: CoverPointJson = parse(s)?;
    if raw.z.iter().flatten().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(GzError::InvalidCoverPoint("non-finite eigenvalue".into()));
    }
    CoverPoint::new(raw.x, raw.z, tols)
}

/// Decodes a group element; shape checks happen when it is applied.
pub fn decode_zd_element(s: &str) -> Result<ZdElement> {
    let k: ZdElement = parse(s)?;
    if k
        .levels
        .iter()
        .flat_map(|l| l.s.iter().chain(&l.t))
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(GzError::InvalidGroupElement("non-finite coordinate".into()));
    }
    Ok(k)
}

pub fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn to_json_pretty<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}
