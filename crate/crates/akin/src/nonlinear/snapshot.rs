//! Binary field snapshots: the magic `AKIN1`, `Nx, Ny, Nθ` as little-endian `u64`,
//! `ψ̄` and `t` as little-endian `f64`, then `ψ` on the grid in row-major order.

use std::io::{Read, Write};

use super::{Field2D, Grid, SimError};

pub const SNAPSHOT_MAGIC: &[u8; 5] = b"AKIN1";

fn io(e: std::io::Error) -> SimError {
    SimError::Snapshot(e.to_string())
}

pub fn write_snapshot(mut w: impl Write, field: &Field2D) -> Result<(), SimError> {
    let g = field.grid;
    let mut buf = Vec::with_capacity(45 + 8 * g.len());
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    for n in g.dims() {
        buf.extend_from_slice(&(n as u64).to_le_bytes());
    }
    buf.extend_from_slice(&field.psi_bar.to_le_bytes());
    buf.extend_from_slice(&field.t.to_le_bytes());
    for v in field.values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf).map_err(io)
}

pub fn read_snapshot(mut r: impl Read) -> Result<Field2D, SimError> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(SimError::Snapshot("bad magic".into()));
    }
    let mut word = [0u8; 8];
    let mut next = |r: &mut dyn Read| -> Result<[u8; 8], SimError> {
        r.read_exact(&mut word).map_err(io)?;
        Ok(word)
    };
    let mut dims = [0usize; 3];
    for d in &mut dims {
        *d = usize::try_from(u64::from_le_bytes(next(&mut r)?))
            .map_err(|e| SimError::Snapshot(e.to_string()))?;
    }
    let grid = Grid::new(dims[0], dims[1], dims[2])?;
    let psi_bar = f64::from_le_bytes(next(&mut r)?);
    let t = f64::from_le_bytes(next(&mut r)?);
    let mut raw = vec![0u8; 8 * grid.len()];
    r.read_exact(&mut raw).map_err(io)?;
    let values: Vec<f64> = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let mut field = Field2D::from_values(grid, psi_bar, &values)?;
    field.t = t;
    Ok(field)
}
