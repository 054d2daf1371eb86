//! Time-series CSV and the `MHDC` binary snapshot format.
//!
//! Snapshot layout, all little-endian:
//!
//! | bytes            | content                                       |
//! |------------------|-----------------------------------------------|
//! | 4                | magic `MHDC`                                  |
//! | u32              | format version (1)                            |
//! | u32, u32, f64    | dim, n_points, t                              |
//! | f64 pairs        | `v` then `B`, component-major, `(re, im)`     |
//!
//! Coefficients within a component follow the grid's flat wavevector order
//! (first axis fastest).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::diagnostics::InvariantRecord;
use crate::dynamics::MhdState;
use crate::error::{Error, Result};
use crate::spectral::{Scalar, SpectralField, TorusGrid};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"MHDC";
pub const SNAPSHOT_VERSION: u32 = 1;

pub fn timeseries_header(dim: usize) -> String {
    let mut h = String::from("t,energy,cross_helicity");
    for i in 1..=dim {
        write!(h, ",momentum_{i}").unwrap();
    }
    h.push_str(",magnetic_helicity,max_div_v,max_div_B");
    h
}

/// CSV text for a run; `{:.16e}` keeps 17 significant digits so every value
/// round-trips exactly.
pub fn format_timeseries(records: &[InvariantRecord], dim: usize) -> String {
    let mut out = timeseries_header(dim);
    out.push('\n');
    for r in records {
        write!(
            out,
            "{:.16e},{:.16e},{:.16e}",
            r.t, r.energy, r.cross_helicity
        )
        .unwrap();
        for m in &r.momentum {
            write!(out, ",{m:.16e}").unwrap();
        }
        match r.magnetic_helicity {
            Some(h) => write!(out, ",{h:.16e}").unwrap(),
            None => out.push(','),
        }
        writeln!(out, ",{:.16e},{:.16e}", r.max_div_v, r.max_div_b).unwrap();
    }
    out
}

pub fn write_timeseries(records: &[InvariantRecord], dim: usize, path: &Path) -> Result<()> {
    fs::write(path, format_timeseries(records, dim)).map_err(|e| Error::io(path, e))
}

pub fn encode_snapshot(state: &MhdState) -> Vec<u8> {
    let grid = state.grid();
    let mut out = Vec::with_capacity(24 + 2 * grid.dim() * grid.len() * 16);
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.n_points() as u32).to_le_bytes());
    out.extend_from_slice(&state.t().to_le_bytes());
    for field in [state.v(), state.b()] {
        for comp in field.components() {
            for z in comp.coeffs() {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Snapshot(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(chunk.try_into().expect("length checked"))
    }

    fn u32(&mut self) -> Result<u32> {
        self.take::<4>().map(u32::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64> {
        self.take::<8>().map(f64::from_le_bytes)
    }
}

/// Inverse of [`encode_snapshot`]. The decoded fields must be divergence-free.
pub fn decode_snapshot(bytes: &[u8]) -> Result<MhdState> {
    let mut cur = Cursor { bytes, pos: 0 };
    if &cur.take::<4>()? != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic bytes".into()));
    }
    let version = cur.u32()?;
    if version != SNAPSHOT_VERSION {
        return Err(Error::Snapshot(format!(
            "unsupported version {version}, expected {SNAPSHOT_VERSION}"
        )));
    }
    let dim = cur.u32()? as usize;
    let n = cur.u32()? as usize;
    let t = cur.f64()?;
    let grid = TorusGrid::new(dim, n).map_err(|e| Error::Snapshot(e.to_string()))?;
    let expected = cur.pos + 2 * dim * grid.len() * 16;
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "expected {expected} bytes for a {grid} snapshot, found {}",
            bytes.len()
        )));
    }
    let mut read_field = || -> Result<SpectralField> {
        let comps = (0..dim)
            .map(|_| {
                let coeffs = (0..grid.len())
                    .map(|_| Ok(Complex64::new(cur.f64()?, cur.f64()?)))
                    .collect::<Result<Vec<_>>>()?;
                Scalar::from_coeffs(grid, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        SpectralField::from_components(comps)
    };
    let v = read_field()?;
    let b = read_field()?;
    MhdState::new(v, b, t)
}

pub fn write_snapshot(state: &MhdState, path: &Path) -> Result<()> {
    fs::write(path, encode_snapshot(state)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<MhdState> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::random_state;

    #[test]
    fn header_columns() {
        assert_eq!(
            timeseries_header(2),
            "t,energy,cross_helicity,momentum_1,momentum_2,magnetic_helicity,max_div_v,max_div_B"
        );
        assert!(timeseries_header(3).contains("momentum_3,magnetic_helicity"));
    }

    #[test]
    fn csv_rows_and_empty_helicity() {
        let s = random_state(TorusGrid::new(2, 16).unwrap(), 3, 3, 0.1, 0.5);
        let r = InvariantRecord::sample(&s);
        let csv = format_timeseries(&[r.clone(), r.clone(), r], 2);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        let cells: Vec<_> = lines[1].split(',').collect();
        assert_eq!(cells.len(), 8);
        assert_eq!(cells[5], "");
        let e: f64 = cells[1].parse().unwrap();
        assert_eq!(e, crate::diagnostics::energy(&s));
    }

    #[test]
    fn zero_state_round_trip() {
        let s = MhdState::zero(TorusGrid::new(3, 8).unwrap());
        assert_eq!(decode_snapshot(&encode_snapshot(&s)).unwrap(), s);
    }

    #[test]
    fn random_state_round_trip_is_bit_identical() {
        let s = random_state(TorusGrid::new(2, 16).unwrap(), 9, 4, 0.3, 0.2).with_time(0.125);
        let back = decode_snapshot(&encode_snapshot(&s)).unwrap();
        assert_eq!(back.t(), 0.125);
        for (a, b) in back.v().components().iter().zip(s.v().components()) {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
        assert_eq!(back, s);
    }

    #[test]
    fn header_layout() {
        let s = MhdState::zero(TorusGrid::new(2, 8).unwrap()).with_time(1.5);
        let bytes = encode_snapshot(&s);
        assert_eq!(&bytes[..4], b"MHDC");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 1.5);
        assert_eq!(bytes.len(), 24 + 2 * 2 * 64 * 16);
    }

    #[test]
    fn rejects_bad_input() {
        let s = MhdState::zero(TorusGrid::new(2, 8).unwrap());
        let mut bytes = encode_snapshot(&s);
        bytes[4] = 2;
        assert!(
            matches!(decode_snapshot(&bytes), Err(Error::Snapshot(m)) if m.contains("version"))
        );
        bytes[4] = 1;
        bytes[0] = b'X';
        assert!(decode_snapshot(&bytes).is_err());
        bytes[0] = b'M';
        bytes.pop();
        assert!(decode_snapshot(&bytes).is_err());
    }
}
