use std::io::{Read, Write};

use nalgebra::DMatrix;

use super::cache::{JwCache, TlBudget};
use crate::error::{QgrdError, Result};

pub const DUMP_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"QGRDJWC\0";
const LAYOUT_ROW_MAJOR_F64_LE: u32 = 1;

/// Writes the isometries of `cache` to `w`.
///
/// Header: magic, version, layout tag, `N`, `n_max` (all `u32` LE), tolerance (`f64` LE).
/// Then for each `n` the right and left isometries as `rows`, `cols` (`u32` LE) and row-major `f64` LE entries.
pub fn save_cache<W: Write>(cache: &JwCache, tolerance: f64, mut w: W) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    for v in [
        DUMP_VERSION,
        LAYOUT_ROW_MAJOR_F64_LE,
        cache.strand_dim() as u32,
        cache.n_max() as u32,
    ] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&tolerance.to_le_bytes())?;
    for n in 0..=cache.n_max() {
        write_matrix(&mut w, cache.right_isometry(n))?;
        write_matrix(&mut w, cache.left_isometry(n))?;
    }
    Ok(())
}

fn write_matrix<W: Write>(w: &mut W, m: &DMatrix<f64>) -> std::io::Result<()> {
    w.write_all(&(m.nrows() as u32).to_le_bytes())?;
    w.write_all(&(m.ncols() as u32).to_le_bytes())?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            w.write_all(&m[(r, c)].to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)
        .map_err(|e| QgrdError::Format(e.to_string()))?;
    Ok(u32::from_le_bytes(b))
}

fn read_matrix<R: Read>(r: &mut R, limit: usize) -> Result<DMatrix<f64>> {
    let rows = read_u32(r)? as usize;
    let cols = read_u32(r)? as usize;
    if rows > limit || cols > limit {
        return Err(QgrdError::Format(format!(
            "{rows}x{cols} matrix exceeds the budget"
        )));
    }
    let mut buf = vec![0u8; rows * cols * 8];
    r.read_exact(&mut buf)
        .map_err(|e| QgrdError::Format(e.to_string()))?;
    let vals: Vec<f64> = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(DMatrix::from_row_slice(rows, cols, &vals))
}

/// Reads a dump written by [`save_cache`], returning the cache and the stored tolerance.
pub fn load_cache<R: Read>(mut r: R, budget: &TlBudget) -> Result<(JwCache, f64)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)
        .map_err(|e| QgrdError::Format(e.to_string()))?;
    if &magic != MAGIC {
        return Err(QgrdError::Format("not a Jones-Wenzl cache dump".into()));
    }
    let version = read_u32(&mut r)?;
    if version != DUMP_VERSION {
        return Err(QgrdError::Format(format!(
            "dump version {version}, expected {DUMP_VERSION}"
        )));
    }
    if read_u32(&mut r)? != LAYOUT_ROW_MAJOR_F64_LE {
        return Err(QgrdError::Format("unknown layout".into()));
    }
    let strand_dim = read_u32(&mut r)? as usize;
    let n_max = read_u32(&mut r)? as usize;
    if n_max > budget.max_strands {
        return Err(QgrdError::Budget(format!("dump holds {n_max} strands")));
    }
    let mut t = [0u8; 8];
    r.read_exact(&mut t)
        .map_err(|e| QgrdError::Format(e.to_string()))?;
    let tolerance = f64::from_le_bytes(t);
    let mut right = Vec::with_capacity(n_max + 1);
    let mut left = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        right.push(read_matrix(&mut r, budget.max_dimension.max(1))?);
        left.push(read_matrix(&mut r, budget.max_dimension.max(1))?);
    }
    let cache = JwCache::from_parts(strand_dim, right, left)?;
    Ok((cache, tolerance))
}
