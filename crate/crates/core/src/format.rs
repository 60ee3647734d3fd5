//! Text and JSON encodings shared by the library and the CLI.
//!
//! Complex matrices and vectors travel as nested arrays of `[re, im]` pairs.
//! CSV numbers use 17 significant digits in scientific notation, which
//! round-trips every `f64` and does not depend on locale.

use num_complex::Complex64 as C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{ComplexMatrix, StateVector};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0e0"
        return "0e0".to_string();
    }
    format!("{x:.16e}")
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self.rows().into_iter().map(|r| r.into_iter().map(pair).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<C64>> = rows.into_iter().map(|r| r.into_iter().map(unpair).collect()).collect();
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[f64; 2]> = self.amplitudes().into_iter().map(pair).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    /// Accepts unnormalized amplitudes and rescales them.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<[f64; 2]> = Vec::deserialize(d)?;
        StateVector::normalized(v.into_iter().map(unpair).collect()).map_err(D::Error::custom)
    }
}
