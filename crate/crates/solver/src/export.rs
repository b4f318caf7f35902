//! Value table export.
//!
//! Binary layout, all little-endian:
//!
//! ```text
//! magic  b"DVGV"
//! u32    version
//! u32    node count
//! per node: u32 state count, then that many f64 values
//! ```

use std::fmt::Write as _;

use tlvc_dvg::NodeId;

use crate::{Real, Solution};

pub const BLOB_MAGIC: &[u8; 4] = b"DVGV";
pub const BLOB_VERSION: u32 = 1;

/// `node,state,value` rows, nodes in id order.
pub fn to_csv<T: Real>(sol: &Solution<T>) -> String {
    let mut out = String::from("node,state,value\n");
    for (i, table) in sol.tables.iter().enumerate() {
        for (x, v) in table.iter().enumerate() {
            let _ = writeln!(out, "{},{x},{}", NodeId(i), v.to_f64().unwrap_or(f64::NAN));
        }
    }
    out
}

pub fn to_blob<T: Real>(sol: &Solution<T>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(BLOB_MAGIC);
    out.extend_from_slice(&BLOB_VERSION.to_le_bytes());
    out.extend_from_slice(&(sol.tables.len() as u32).to_le_bytes());
    for table in &sol.tables {
        out.extend_from_slice(&(table.len() as u32).to_le_bytes());
        for v in table {
            out.extend_from_slice(&v.to_f64().unwrap_or(f64::NAN).to_le_bytes());
        }
    }
    out
}

/// Reads tables back from [`to_blob`] output.
pub fn from_blob(bytes: &[u8]) -> Result<Vec<Vec<f64>>, String> {
    let mut rest = bytes;
    let mut take = |n: usize| -> Result<&[u8], String> {
        if rest.len() < n {
            return Err("truncated value blob".into());
        }
        let (head, tail) = rest.split_at(n);
        rest = tail;
        Ok(head)
    };
    if take(4)? != BLOB_MAGIC {
        return Err("bad magic".into());
    }
    let u32_at = |b: &[u8]| u32::from_le_bytes(b.try_into().unwrap());
    let version = u32_at(take(4)?);
    if version != BLOB_VERSION {
        return Err(format!("unsupported blob version {version}"));
    }
    let nodes = u32_at(take(4)?) as usize;
    let mut tables = Vec::with_capacity(nodes);
    for _ in 0..nodes {
        let len = u32_at(take(4)?) as usize;
        let raw = take(len * 8)?;
        tables.push(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect());
    }
    if !take(0)?.is_empty() || bytes.len() != 12 + tables.iter().map(|t: &Vec<f64>| 4 + 8 * t.len()).sum::<usize>() {
        return Err("trailing bytes after value blob".into());
    }
    Ok(tables)
}
