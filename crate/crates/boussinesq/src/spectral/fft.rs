//! Two-dimensional complex FFTs on an `n_x x n_y` row-major buffer, plus the
//! scatter/gather between the retained lattice and the transform grid.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::model::SpectralField;

pub struct Fft2 {
    pub nx: usize,
    pub ny: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fft2({}x{})", self.nx, self.ny)
    }
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd_x = planner.plan_fft_forward(nx);
        let inv_x = planner.plan_fft_inverse(nx);
        let fwd_y = planner.plan_fft_forward(ny);
        let inv_y = planner.plan_fft_inverse(ny);
        let scratch_len = [&fwd_x, &inv_x, &fwd_y, &inv_y]
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Fft2 {
            nx,
            ny,
            fwd_x,
            inv_x,
            fwd_y,
            inv_y,
            scratch: vec![Complex64::default(); scratch_len],
            transposed: vec![Complex64::default(); nx * ny],
        }
    }

    fn transform(&mut self, buf: &mut [Complex64], forward: bool) {
        let (px, py) = if forward { (&self.fwd_x, &self.fwd_y) } else { (&self.inv_x, &self.inv_y) };
        py.process_with_scratch(buf, &mut self.scratch);
        for i in 0..self.nx {
            for j in 0..self.ny {
                self.transposed[j * self.nx + i] = buf[i * self.ny + j];
            }
        }
        px.process_with_scratch(&mut self.transposed, &mut self.scratch);
        for j in 0..self.ny {
            for i in 0..self.nx {
                buf[i * self.ny + j] = self.transposed[j * self.nx + i];
            }
        }
    }

    /// Unnormalized `sum_k F_k e^{+i k x}`: coefficients to grid values.
    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        self.transform(buf, false);
    }

    /// `(1/(nx ny)) sum_x f(x) e^{-i k x}`: grid values to coefficients.
    pub fn forward(&mut self, buf: &mut [Complex64]) {
        self.transform(buf, true);
        let s = 1.0 / (self.nx * self.ny) as f64;
        for z in buf.iter_mut() {
            *z *= s;
        }
    }

    fn wrap(n: usize, k: i64) -> usize {
        k.rem_euclid(n as i64) as usize
    }

    /// Writes `field` (times `mult(row, col)`) into a zeroed transform buffer.
    pub fn scatter(&self, field: &SpectralField, buf: &mut [Complex64], mult: impl Fn(usize, usize) -> Complex64) {
        buf.iter_mut().for_each(|z| *z = Complex64::default());
        for ((r, c), z) in field.data.indexed_iter() {
            let ix = Self::wrap(self.nx, field.k_of(r));
            let iy = Self::wrap(self.ny, field.j_of(c));
            buf[ix * self.ny + iy] = *z * mult(r, c);
        }
    }

    /// Reads the retained coefficients of `buf` into `field`.
    pub fn gather(&self, buf: &[Complex64], field: &mut SpectralField) {
        let (nr, nc) = field.shape();
        for r in 0..nr {
            let ix = Self::wrap(self.nx, field.k_of(r));
            for c in 0..nc {
                let iy = Self::wrap(self.ny, field.j_of(c));
                field.data[[r, c]] = buf[ix * self.ny + iy];
            }
        }
    }

    /// Splits the transform `Z` of `p + i q` (both real) into the
    /// transforms of `p` and `q` on the retained lattice.
    pub fn gather_pair(&self, buf: &[Complex64], p: &mut SpectralField, q: &mut SpectralField) {
        let (nr, nc) = p.shape();
        let half = Complex64::new(0.5, 0.0);
        let minus_half_i = Complex64::new(0.0, -0.5);
        for r in 0..nr {
            let k = p.k_of(r);
            let ix = Self::wrap(self.nx, k);
            let ixm = Self::wrap(self.nx, -k);
            for c in 0..nc {
                let j = p.j_of(c);
                let z = buf[ix * self.ny + Self::wrap(self.ny, j)];
                let zm = buf[ixm * self.ny + Self::wrap(self.ny, -j)].conj();
                p.data[[r, c]] = half * (z + zm);
                q.data[[r, c]] = minus_half_i * (z - zm);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_single_mode() {
        let mut f = SpectralField::zeros(2, 3, 0.5, 0.0);
        f.set(1, -2, Complex64::new(0.25, -0.5));
        f.set(-1, 2, Complex64::new(0.25, 0.5));
        let mut fft = Fft2::new(8, 12);
        let mut buf = vec![Complex64::default(); 96];
        fft.scatter(&f, &mut buf, |_, _| Complex64::new(1.0, 0.0));
        fft.inverse(&mut buf);
        // value at grid point (ix, iy): 2 Re(c e^{i(k x + j dxi y)}) with x = 2 pi ix/8, y = 2 pi iy/(12 dxi)
        for (idx, z) in buf.iter().enumerate() {
            let (ix, iy) = (idx / 12, idx % 12);
            let phase = 2.0 * std::f64::consts::PI * (ix as f64 / 8.0 - 2.0 * iy as f64 / 12.0);
            let expect = 2.0 * (Complex64::new(0.25, -0.5) * Complex64::from_polar(1.0, phase)).re;
            assert!((z.re - expect).abs() < 1e-14 && z.im.abs() < 1e-14);
        }
        fft.forward(&mut buf);
        let mut g = f.same_shape();
        fft.gather(&buf, &mut g);
        assert!((&g.data - &f.data).iter().all(|d| d.norm() < 1e-15));
    }

    #[test]
    fn packed_pair_separates() {
        let mut p = SpectralField::zeros(2, 2, 1.0, 0.0);
        let mut q = p.same_shape();
        p.set(1, 1, Complex64::new(0.3, 0.1));
        p.set(0, 2, Complex64::new(-0.2, 0.4));
        q.set(2, -1, Complex64::new(0.7, -0.3));
        p.symmetrize();
        q.symmetrize();
        let mut fft = Fft2::new(8, 8);
        let mut buf = vec![Complex64::default(); 64];
        let mut tmp = vec![Complex64::default(); 64];
        fft.scatter(&p, &mut buf, |_, _| Complex64::new(1.0, 0.0));
        fft.scatter(&q, &mut tmp, |_, _| Complex64::new(0.0, 1.0));
        for (a, b) in buf.iter_mut().zip(&tmp) {
            *a += b;
        }
        fft.inverse(&mut buf);
        fft.forward(&mut buf);
        let (mut p2, mut q2) = (p.same_shape(), q.same_shape());
        fft.gather_pair(&buf, &mut p2, &mut q2);
        assert!((&p2.data - &p.data).iter().all(|d| d.norm() < 1e-15));
        assert!((&q2.data - &q.data).iter().all(|d| d.norm() < 1e-15));
    }
}
