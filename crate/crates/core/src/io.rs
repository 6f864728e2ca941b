//! JSON file formats.
//!
//! * alphabet: `{"symbols": ["t", "f"]}`
//! * kernel: `{"source": space, "target": space, "rows": [[[num, den], …], …]}`
//! * bang element: `{"alphabet": …, "depth": N, "coeffs": [{"multiset": [2,1], "value": "1/8"}, …]}`
//!   (missing multisets read as zero)
//! * mixing measure: `{"alphabet": …, "atoms": [{"point": ["1/3","2/3"], "weight": "1"}, …]}`
//!
//! Rational values are written as `"n/d"` strings and read from strings or
//! JSON numbers.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multiset::{Alphabet, Multiset, MultisetBasis};
use crate::pcoh::BangElement;
use crate::rational::{self, Q};
use crate::space::IndexSpace;
use crate::stoch::{FinKernel, KernelKind};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable")
}

/// Reads an alphabet from a JSON file, or from an inline spec: `bool`, a
/// count such as `3`, or comma-separated symbols.
pub fn alphabet_arg(arg: &str) -> Result<Alphabet> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json(path);
    }
    if arg.eq_ignore_ascii_case("bool") {
        return Ok(Alphabet::bool());
    }
    if let Ok(k) = arg.parse::<usize>() {
        return match k {
            0 => Err(Error::Alphabet("empty alphabet".into())),
            2 => Ok(Alphabet::bool()),
            k => Ok(Alphabet::letters(k)),
        };
    }
    if arg.ends_with(".json") {
        return Err(Error::Parse(format!("{arg}: no such file")));
    }
    Alphabet::new(arg.split(',').map(str::trim))
}

#[derive(Serialize, Deserialize)]
struct KernelRepr {
    source: IndexSpace,
    target: IndexSpace,
    rows: Vec<Vec<[Value; 2]>>,
}

fn int_json(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

pub fn kernel_to_json(k: &FinKernel) -> String {
    let rows = k
        .matrix()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| [int_json(x.numer()), int_json(x.denom())]).collect())
        .collect();
    to_json(&KernelRepr { source: k.source().clone(), target: k.target().clone(), rows })
}

/// Parses a kernel; rows summing to one make it stochastic, otherwise it
/// must be substochastic.
pub fn kernel_from_json(text: &str) -> Result<FinKernel> {
    let repr: KernelRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = repr
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|[n, d]| {
                    let d = rational::from_json(d)?;
                    if d.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    Ok(rational::from_json(n)? / d)
                })
                .collect::<Result<Vec<Q>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = Matrix::from_rows(rows)?;
    let kind = if matrix.row_sums().iter().all(One::is_one) { KernelKind::Stochastic } else { KernelKind::Substochastic };
    FinKernel::new(repr.source, repr.target, matrix, kind)
}

#[derive(Serialize, Deserialize)]
struct BangEntry {
    multiset: Multiset,
    value: Value,
}

#[derive(Serialize, Deserialize)]
struct BangRepr {
    alphabet: Alphabet,
    depth: usize,
    coeffs: Vec<BangEntry>,
}

pub fn bang_to_json(b: &BangElement) -> String {
    let coeffs = b
        .graded()
        .into_iter()
        .map(|(multiset, v)| BangEntry { multiset, value: Value::String(rational::format(&v)) })
        .collect();
    to_json(&BangRepr { alphabet: b.alphabet().clone(), depth: b.depth(), coeffs })
}

pub fn bang_from_json(text: &str) -> Result<BangElement> {
    let repr: BangRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let k = repr.alphabet.len();
    let basis = MultisetBasis::bounded(k, repr.depth);
    let mut coeffs = vec![Q::zero(); basis.len()];
    for e in &repr.coeffs {
        if e.multiset.arity() != k {
            return Err(Error::Parse(format!("multiset {:?} over {k} symbols", e.multiset.counts())));
        }
        let i = basis
            .position(&e.multiset)
            .ok_or(Error::Depth { depth: repr.depth, level: e.multiset.size() as usize })?;
        coeffs[i] = rational::from_json(&e.value)?;
    }
    BangElement::new(repr.alphabet, repr.depth, coeffs)
}

pub fn read_bang(path: &Path) -> Result<BangElement> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    bang_from_json(&text)
}
