//! Banded LU factorization with partial pivoting, LAPACK `dgbtrf` layout.
//!
//! Box-grid finite-difference Jacobians have bandwidth equal to one grid
//! plane, so a banded direct solve is orders of magnitude cheaper than a
//! dense factorization at the grid sizes this crate targets.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
#[error("banded matrix is numerically singular at column {col}")]
pub struct SingularMatrix {
    pub col: usize,
}

/// A square banded matrix with `kl` subdiagonals and `ku` superdiagonals.
/// Extra `kl` rows of storage hold the fill-in produced by row pivoting.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Column-major band storage: entry (i, j) of the matrix lives at
    /// `data[j * ldab + kl + ku + i - j]` for `j - kl - ku <= i <= j + kl`.
    data: Vec<f64>,
    ipiv: Vec<usize>,
    factored: bool,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        assert!(n > 0);
        let ldab = 2 * kl + ku + 1;
        Self { n, kl, ku, data: vec![0.0; ldab * n], ipiv: vec![0; n], factored: false }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn ldab(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(i + self.kl + self.ku >= j && j + self.kl >= i, "entry ({i},{j}) outside band");
        j * self.ldab() + (self.kl + self.ku + i - j)
    }

    /// Set entry (i, j); panics outside the band (the pivoting fill region
    /// of `kl + ku` superdiagonals is accepted).
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(!self.factored, "matrix already factored");
        assert!(
            i + self.ku >= j && j + self.kl >= i,
            "entry ({i},{j}) outside declared band kl={}, ku={}",
            self.kl,
            self.ku
        );
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(!self.factored, "matrix already factored");
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// In-place LU factorization with partial pivoting.
    pub fn factor(&mut self) -> Result<(), SingularMatrix> {
        assert!(!self.factored);
        let n = self.n;
        let kl = self.kl;
        let kv = self.kl + self.ku;
        let ldab = self.ldab();
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // Pivot search over the column slice below the diagonal.
            let base = j * ldab + kv;
            let mut jp = 0usize;
            let mut best = self.data[base].abs();
            for p in 1..=km {
                let v = self.data[base + p].abs();
                if v > best {
                    best = v;
                    jp = p;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(SingularMatrix { col: j });
            }
            self.ipiv[j] = j + jp;
            ju = ju.max((j + self.ku + jp).min(n - 1));
            if jp != 0 {
                for col in j..=ju {
                    let a = col * ldab + (kv + j - col);
                    let b = col * ldab + (kv + j + jp - col);
                    self.data.swap(a, b);
                }
            }
            if km > 0 {
                let piv = self.data[base];
                for p in 1..=km {
                    self.data[base + p] /= piv;
                }
                for col in (j + 1)..=ju {
                    let upper = col * ldab + (kv + j - col);
                    let factor = self.data[upper];
                    if factor != 0.0 {
                        for p in 1..=km {
                            self.data[col * ldab + (kv + j + p - col)] -=
                                self.data[base + p] * factor;
                        }
                    }
                }
            }
        }
        self.factored = true;
        Ok(())
    }

    /// Solve `A x = b` in place; `factor` must have succeeded.
    pub fn solve(&self, b: &mut [f64]) {
        assert!(self.factored, "call factor() first");
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kl = self.kl;
        let kv = self.kl + self.ku;
        let ldab = self.ldab();
        // Forward: apply permutations and the unit-lower band.
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            let base = j * ldab + kv;
            let bj = b[j];
            if bj != 0.0 {
                for q in 1..=km {
                    b[j + q] -= self.data[base + q] * bj;
                }
            }
        }
        // Back substitution on the banded U (bandwidth kv).
        for i in (0..n).rev() {
            let jmax = (i + kv).min(n - 1);
            let mut s = b[i];
            for j in (i + 1)..=jmax {
                s -= self.data[j * ldab + (kv + i - j)] * b[j];
            }
            b[i] = s / self.data[i * ldab + kv];
        }
    }
}
