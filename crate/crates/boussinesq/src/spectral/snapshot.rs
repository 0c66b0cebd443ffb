//! Binary spectra dump.
//!
//! Layout, all little-endian:
//!
//! | offset | type      | field                                        |
//! |--------|-----------|----------------------------------------------|
//! | 0      | `[u8; 8]` | magic `BQSNAP\0\0`                           |
//! | 8      | `u32`     | format version (1)                           |
//! | 12     | `u32`     | `K` (rows are `k = -K..=K`)                  |
//! | 16     | `u32`     | `Xi` (columns are `j = -Xi..=Xi`)            |
//! | 20     | `u32`     | Sobolev index `N`                            |
//! | 24     | `f64`     | `dxi`                                        |
//! | 32     | `f64`     | frame time `t`                               |
//! | 40     | `6 x f64` | `alpha, beta, nu_x, nu_y, eta_x, eta_y`      |
//! | 88     | `f64` pairs | `omega` coefficients `(re, im)`, row-major |
//! | ...    | `f64` pairs | `theta` coefficients, same layout          |

use std::io::{self, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use super::SimState;
use crate::model::{Params, SpectralField};

pub const MAGIC: &[u8; 8] = b"BQSNAP\0\0";
pub const VERSION: u32 = 1;

pub fn write_snapshot<W: Write>(mut w: W, state: &SimState, params: &Params) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u32::<LittleEndian>(state.omega.grid_k as u32)?;
    w.write_u32::<LittleEndian>(state.omega.grid_xi as u32)?;
    w.write_u32::<LittleEndian>(params.sobolev_n)?;
    w.write_f64::<LittleEndian>(state.omega.dxi)?;
    w.write_f64::<LittleEndian>(state.t)?;
    for v in [params.alpha, params.beta, params.nu_x, params.nu_y, params.eta_x, params.eta_y] {
        w.write_f64::<LittleEndian>(v)?;
    }
    for field in [&state.omega, &state.theta] {
        for z in field.data.iter() {
            w.write_f64::<LittleEndian>(z.re)?;
            w.write_f64::<LittleEndian>(z.im)?;
        }
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> io::Result<(SimState, Params)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "not a snapshot file"));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(io::Error::new(io::ErrorKind::InvalidData, format!("unsupported snapshot version {version}")));
    }
    let grid_k = r.read_u32::<LittleEndian>()? as usize;
    let grid_xi = r.read_u32::<LittleEndian>()? as usize;
    let sobolev_n = r.read_u32::<LittleEndian>()?;
    let dxi = r.read_f64::<LittleEndian>()?;
    let t = r.read_f64::<LittleEndian>()?;
    let mut p = [0.0; 6];
    for v in p.iter_mut() {
        *v = r.read_f64::<LittleEndian>()?;
    }
    let params = Params { alpha: p[0], beta: p[1], nu_x: p[2], nu_y: p[3], eta_x: p[4], eta_y: p[5], sobolev_n };
    let mut fields = [SpectralField::zeros(grid_k, grid_xi, dxi, t), SpectralField::zeros(grid_k, grid_xi, dxi, t)];
    for field in fields.iter_mut() {
        for z in field.data.iter_mut() {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            *z = Complex64::new(re, im);
        }
    }
    let [omega, theta] = fields;
    Ok((SimState { omega, theta, t }, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_layout() {
        let mut omega = SpectralField::zeros(1, 2, 0.5, 3.25);
        omega.set(1, -2, Complex64::new(1.5, -2.0));
        let mut theta = omega.same_shape();
        theta.set(-1, 0, Complex64::new(0.0, 7.0));
        let state = SimState { omega, theta, t: 3.25 };
        let params = Params { alpha: 0.2, nu_x: 0.01, sobolev_n: 5, ..Params::default() };
        let mut bytes = Vec::new();
        write_snapshot(&mut bytes, &state, &params).unwrap();
        assert_eq!(bytes.len(), 88 + 2 * 3 * 5 * 16);
        assert_eq!(&bytes[..8], MAGIC);
        assert_eq!(&bytes[32..40], &3.25f64.to_le_bytes());
        // omega(k=1, j=-2) is row 2, column 0
        let off = 88 + (2 * 5) * 16;
        assert_eq!(&bytes[off..off + 8], &1.5f64.to_le_bytes());
        let (back, p) = read_snapshot(bytes.as_slice()).unwrap();
        assert_eq!(back, state);
        assert_eq!(p, params);
        assert!(read_snapshot(&bytes[..20]).is_err());
        assert!(read_snapshot(&b"NOTASNAPxxxxxxxxxxxx"[..]).is_err());
    }
}
