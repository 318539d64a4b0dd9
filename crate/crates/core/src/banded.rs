//! Complex banded LU with partial pivoting for the Crank–Nicolson solves.
//!
//! LAPACK-style band storage: entry (i, j) of an n×n matrix with `kl`
//! subdiagonals and `ku` superdiagonals lives at `ab[kl + ku + i − j][j]`,
//! with `kl` extra superdiagonal rows reserved for pivoting fill-in. The
//! factorization is done once per (grid, dt); each time step is a pair of
//! O(n) triangular sweeps.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    /// (2·kl + ku + 1) rows by n columns, row-major.
    ab: Vec<Complex64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let rows = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, ab: vec![Complex64::new(0.0, 0.0); rows * n] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        (self.kl + self.ku + i - j) * self.n + j
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        // storage covers kl subdiagonals and ku + kl superdiagonals (fill-in)
        debug_assert!(i <= j + self.kl && j <= i + self.kl + self.ku);
        let k = self.idx(i, j);
        self.ab[k] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i > j + self.kl || j > i + self.kl + self.ku {
            return Complex64::new(0.0, 0.0);
        }
        self.ab[self.idx(i, j)]
    }

    /// In-place LU with partial pivoting; returns the factorization.
    pub fn factorize(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let i_max = (k + kl).min(n - 1);
            // pivot search in column k
            let mut p = k;
            let mut best = self.get(k, k).norm_sqr();
            for i in k + 1..=i_max {
                let v = self.get(i, k).norm_sqr();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::domain(format!("banded LU: zero pivot at column {k}")));
            }
            piv[k] = p;
            let j_max = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=j_max {
                    let a = self.get(k, j);
                    let b = self.get(p, j);
                    self.set(k, j, b);
                    self.set(p, j, a);
                }
            }
            let pivot = self.get(k, k);
            for i in k + 1..=i_max {
                let m = self.get(i, k) / pivot;
                self.set(i, k, m);
                if m.norm_sqr() != 0.0 {
                    for j in k + 1..=j_max {
                        let v = self.get(i, j) - m * self.get(k, j);
                        self.set(i, j, v);
                    }
                }
            }
        }
        Ok(BandedLu { mat: self, piv })
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    mat: BandedMatrix,
    piv: Vec<usize>,
}

impl BandedLu {
    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        let n = self.mat.n;
        let kl = self.mat.kl;
        let ku = self.mat.ku;
        debug_assert_eq!(b.len(), n);
        // forward: apply swaps and multipliers
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let i_max = (k + kl).min(n - 1);
            let bk = b[k];
            for i in k + 1..=i_max {
                let m = self.mat.get(i, k);
                b[i] -= m * bk;
            }
        }
        // back substitution
        for k in (0..n).rev() {
            let j_max = (k + ku + kl).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=j_max {
                s -= self.mat.get(k, j) * b[j];
            }
            b[k] = s / self.mat.get(k, k);
        }
    }
}
