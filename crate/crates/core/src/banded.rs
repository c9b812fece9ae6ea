//! Banded matrices: symmetric storage with Cholesky factorization for the
//! eigenproblem, and general storage with unpivoted LU for implicit flow
//! steps.

use crate::error::{Error, Result};

/// Symmetric matrix with half-bandwidth `bw`; entry (i, j) with
/// i − bw ≤ j ≤ i is stored at `data[i * (bw + 1) + (i − j)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBanded {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBanded {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Entry (i, j) of the full symmetric matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[i * (self.bw + 1) + (i - j)]
        }
    }

    /// Add v to entry (i, j) (and implicitly (j, i)).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside band {}", self.bw);
        self.data[i * (self.bw + 1) + (i - j)] += v;
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// y = M x.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            for j in lo..=i {
                let v = self.data[i * (self.bw + 1) + (i - j)];
                y[i] += v * x[j];
                if j != i {
                    y[j] += v * x[i];
                }
            }
        }
        y
    }

    /// xᵀ M y.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.mul_vec(y))
    }

    /// self + alpha * other (same shape).
    pub fn add_scaled(&self, alpha: f64, other: &SymBanded) -> SymBanded {
        assert_eq!((self.n, self.bw), (other.n, other.bw));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        SymBanded { n: self.n, bw: self.bw, data }
    }

    /// Banded Cholesky factor L with M = L Lᵀ.
    pub fn cholesky(&self) -> Result<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let mut l = self.data.clone();
        let idx = |i: usize, j: usize| i * (bw + 1) + (i - j);
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut d = l[idx(j, j)];
            for k in lo..j {
                d -= l[idx(j, k)] * l[idx(j, k)];
            }
            if !(d > 0.0) {
                return Err(Error::Factorization { row: j, pivot: d });
            }
            let d = d.sqrt();
            l[idx(j, j)] = d;
            for i in (j + 1)..(j + bw + 1).min(n) {
                let lo_i = i.saturating_sub(bw);
                let mut s = l[idx(i, j)];
                for k in lo_i.max(lo)..j {
                    s -= l[idx(i, k)] * l[idx(j, k)];
                }
                l[idx(i, j)] = s / d;
            }
        }
        Ok(BandCholesky { n, bw, l })
    }

    /// Number of negative pivots of the unpivoted LDLᵀ factorization, which
    /// by Sylvester's law of inertia is the number of negative eigenvalues.
    /// Fails on an exactly zero pivot.
    pub fn negative_pivots(&self) -> Result<usize> {
        let (n, bw) = (self.n, self.bw);
        let mut l = self.data.clone();
        let mut d = vec![0.0; n];
        let idx = |i: usize, j: usize| i * (bw + 1) + (i - j);
        let mut negatives = 0;
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut dj = l[idx(j, j)];
            for k in lo..j {
                dj -= l[idx(j, k)] * l[idx(j, k)] * d[k];
            }
            if dj == 0.0 || !dj.is_finite() {
                return Err(Error::Factorization { row: j, pivot: dj });
            }
            d[j] = dj;
            if dj < 0.0 {
                negatives += 1;
            }
            for i in (j + 1)..(j + bw + 1).min(n) {
                let mut s = l[idx(i, j)];
                for k in i.saturating_sub(bw).max(lo)..j {
                    s -= l[idx(i, k)] * l[idx(j, k)] * d[k];
                }
                l[idx(i, j)] = s / dj;
            }
        }
        Ok(negatives)
    }
}

/// Cholesky factor of a symmetric banded matrix.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Solve M x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let idx = |i: usize, j: usize| i * (bw + 1) + (i - j);
        let mut y = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = y[i];
            for k in lo..i {
                s -= self.l[idx(i, k)] * y[k];
            }
            y[i] = s / self.l[idx(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..(i + bw + 1).min(n) {
                s -= self.l[idx(k, i)] * y[k];
            }
            y[i] = s / self.l[idx(i, i)];
        }
        y
    }
}

/// General square banded matrix with `lower`/`upper` bandwidths; entry
/// (i, j) is stored at `data[i * width + (j + lower − i)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Banded {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl Banded {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Self { n, lower, upper, data: vec![0.0; n * (lower + upper + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.lower >= i && j <= i + self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[i * self.width() + (j + self.lower - i)]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let w = self.width();
        self.data[i * w + (j + self.lower - i)] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.lower);
                let hi = (i + self.upper).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// In-place LU without pivoting; intended for matrices of the form
    /// I − dt·J that are close to the identity.
    pub fn lu(mut self) -> Result<BandLu> {
        let n = self.n;
        for k in 0..n {
            let piv = self.get(k, k);
            if !(piv.abs() > 1e-300) || !piv.is_finite() {
                return Err(Error::Factorization { row: k, pivot: piv });
            }
            for i in (k + 1)..(k + self.lower + 1).min(n) {
                let m = self.get(i, k) / piv;
                self.set(i, k, m);
                for j in (k + 1)..(k + self.upper + 1).min(n) {
                    let v = self.get(i, j) - m * self.get(k, j);
                    self.set(i, j, v);
                }
            }
        }
        Ok(BandLu { m: self })
    }
}

/// Packed LU factors of a banded matrix.
#[derive(Debug, Clone)]
pub struct BandLu {
    m: Banded,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.m.n;
        let mut x = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(self.m.lower);
            let s: f64 = (lo..i).map(|j| self.m.get(i, j) * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let hi = (i + self.m.upper).min(n - 1);
            let s: f64 = ((i + 1)..=hi).map(|j| self.m.get(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.m.get(i, i);
        }
        x
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
