// Copyright 2026 The cstomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Plain-text and binary matrix encodings.
//!
//! Text: a header line `d <rows> <cols>` followed by `rows` lines of
//! whitespace-separated `re,im` pairs. Several matrices may follow one
//! another in the same document. Floats are written in shortest round-trip
//! form, so a decode of an encode is exact.
//!
//! Binary: `rows` and `cols` as little-endian `u64`, then `rows · cols`
//! entries in row-major order, each as little-endian `f64` real part
//! followed by imaginary part.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

pub fn to_text(m: &impl AsRef<DMatrix<C64>>) -> String {
    let m = m.as_ref();
    let mut out = String::new();
    let _ = writeln!(out, "d {} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(' ');
            }
            let z = m[(i, j)];
            let _ = write!(out, "{:?},{:?}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

pub fn to_text_blocks<M: AsRef<DMatrix<C64>>>(blocks: &[M]) -> String {
    blocks.iter().map(to_text).collect()
}

/// Decodes exactly one matrix.
pub fn from_text(text: &str) -> Result<ComplexMatrix> {
    let mut blocks = from_text_blocks(text)?;
    match blocks.len() {
        1 => Ok(blocks.remove(0)),
        n => Err(Error::Parse {
            line: 1,
            message: format!("expected one matrix, found {n}"),
        }),
    }
}

/// Decodes a sequence of matrices. Blank lines and lines starting with `#` are skipped.
pub fn from_text_blocks(text: &str) -> Result<Vec<ComplexMatrix>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut out = Vec::new();
    while let Some((line, header)) = lines.next() {
        let (rows, cols) = parse_header(line, header)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (line, row) = lines.next().ok_or_else(|| Error::Parse {
                line,
                message: format!("missing row {r} of {rows}"),
            })?;
            let before = entries.len();
            for token in row.split_whitespace() {
                entries.push(parse_entry(line, token)?);
            }
            if entries.len() - before != cols {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {cols} entries, found {}", entries.len() - before),
                });
            }
        }
        let m = ComplexMatrix::from_row_major(rows, cols, &entries).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        out.push(m);
    }
    Ok(out)
}

fn parse_header(line: usize, header: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = header.split_whitespace().collect();
    let bad = || Error::Parse {
        line,
        message: format!("expected 'd <rows> <cols>', found '{header}'"),
    };
    if parts.len() != 3 || parts[0] != "d" {
        return Err(bad());
    }
    let rows = parts[1].parse().map_err(|_| bad())?;
    let cols = parts[2].parse().map_err(|_| bad())?;
    Ok((rows, cols))
}

fn parse_entry(line: usize, token: &str) -> Result<C64> {
    let bad = || Error::Parse {
        line,
        message: format!("malformed entry '{token}'"),
    };
    let (re, im) = token.split_once(',').ok_or_else(bad)?;
    Ok(C64::new(
        re.parse().map_err(|_| bad())?,
        im.parse().map_err(|_| bad())?,
    ))
}

pub fn to_binary(m: &impl AsRef<DMatrix<C64>>) -> Vec<u8> {
    let m = m.as_ref();
    let mut out = Vec::with_capacity(16 + 16 * m.len());
    out.extend_from_slice(&(m.nrows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.ncols() as u64).to_le_bytes());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.extend_from_slice(&m[(i, j)].re.to_le_bytes());
            out.extend_from_slice(&m[(i, j)].im.to_le_bytes());
        }
    }
    out
}

pub fn from_binary(bytes: &[u8]) -> Result<ComplexMatrix> {
    let word = |k: usize| -> Result<[u8; 8]> {
        bytes
            .get(8 * k..8 * k + 8)
            .map(|s| s.try_into().expect("slice of length 8"))
            .ok_or_else(|| Error::invalid("binary matrix is truncated"))
    };
    let rows = u64::from_le_bytes(word(0)?) as usize;
    let cols = u64::from_le_bytes(word(1)?) as usize;
    let count = rows
        .checked_mul(cols)
        .filter(|&n| n.checked_mul(16).is_some_and(|b| b + 16 == bytes.len()))
        .ok_or_else(|| Error::invalid("binary matrix length does not match its header"))?;
    let mut entries = Vec::with_capacity(count);
    for k in 0..count {
        let re = f64::from_le_bytes(word(2 + 2 * k)?);
        let im = f64::from_le_bytes(word(3 + 2 * k)?);
        entries.push(C64::new(re, im));
    }
    ComplexMatrix::from_row_major(rows, cols, &entries)
}
