//! Binary snapshots of a state: magic `KGSNAP`, a little-endian header
//! (version, dimension, points per axis, half length, time) and the physical
//! samples of `u` and `w` as interleaved `(re, im)` pairs of `f64`.

use std::io::{Read, Write};

use kg_spectral::{make_grid, Field, Float, C};

use crate::error::DynamicsError;
use crate::state::KGState;

pub const MAGIC: &[u8; 6] = b"KGSNAP";
pub const VERSION: u32 = 1;

fn io(e: std::io::Error) -> DynamicsError {
    DynamicsError::Snapshot(e.to_string())
}

pub fn write_snapshot<T: Float>(out: &mut impl Write, state: &KGState<T>) -> Result<(), DynamicsError> {
    let g = state.grid();
    let mut buf = Vec::with_capacity(40 + 32 * g.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    buf.extend_from_slice(&(g.n() as u32).to_le_bytes());
    buf.extend_from_slice(&g.half_len().as_f64().to_le_bytes());
    buf.extend_from_slice(&state.t.as_f64().to_le_bytes());
    for f in [&state.u, &state.w] {
        for c in f.physical() {
            buf.extend_from_slice(&c.re.as_f64().to_le_bytes());
            buf.extend_from_slice(&c.im.as_f64().to_le_bytes());
        }
    }
    out.write_all(&buf).map_err(io)
}

fn take<const K: usize>(src: &mut impl Read) -> Result<[u8; K], DynamicsError> {
    let mut b = [0u8; K];
    src.read_exact(&mut b).map_err(io)?;
    Ok(b)
}

pub fn read_snapshot(src: &mut impl Read) -> Result<KGState<f64>, DynamicsError> {
    if &take::<6>(src)? != MAGIC {
        return Err(DynamicsError::Snapshot("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(src)?);
    if version != VERSION {
        return Err(DynamicsError::Snapshot(format!("unsupported version {version}")));
    }
    let dim = u32::from_le_bytes(take(src)?) as usize;
    let n = u32::from_le_bytes(take(src)?) as usize;
    let half_len = f64::from_le_bytes(take(src)?);
    let t = f64::from_le_bytes(take(src)?);
    let grid = make_grid(dim, n, half_len)?;
    let mut field = || -> Result<Field<f64>, DynamicsError> {
        let data = (0..grid.len())
            .map(|_| Ok(C::new(f64::from_le_bytes(take(src)?), f64::from_le_bytes(take(src)?))))
            .collect::<Result<Vec<_>, DynamicsError>>()?;
        Ok(Field::from_physical(&grid, data)?)
    };
    let u = field()?;
    let w = field()?;
    KGState::new(t, u, w)
}
