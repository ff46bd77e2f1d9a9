//! Symmetric banded Cholesky with an optional dense border row/column.
//!
//! The chain programs couple only neighbouring nodes, so their barrier Hessians
//! are banded. The phase-I slack variable adds one dense border.

#[derive(Debug, Clone)]
pub(crate) struct BandedSym {
    n: usize,
    bw: usize,
    /// Lower band, column-major: entry `(i, j)`, `j <= i <= j + bw`, at `j * (bw + 1) + (i - j)`.
    data: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bw = bw.min(n.saturating_sub(1));
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(i - j <= self.bw, "entry ({i}, {j}) outside band {}", self.bw);
        j * (self.bw + 1) + (i - j)
    }

    /// Adds `v` to entry `(i, j)` (and implicitly `(j, i)`).
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i.abs_diff(j) > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    fn max_diag(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).abs()).fold(0.0, f64::max)
    }

    /// In-place Cholesky `A = L L^T`; `None` if a pivot is not positive.
    fn factor(&self) -> Option<BandedSym> {
        let mut l = self.clone();
        let (n, bw) = (self.n, self.bw);
        for j in 0..n {
            let k0 = j.saturating_sub(bw);
            let mut d = l.data[l.idx(j, j)];
            for k in k0..j {
                let v = l.data[l.idx(j, k)];
                d -= v * v;
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let d = d.sqrt();
            let jj = l.idx(j, j);
            l.data[jj] = d;
            for i in (j + 1)..n.min(j + bw + 1) {
                let mut s = l.data[l.idx(i, j)];
                for k in i.saturating_sub(bw).max(k0)..j {
                    s -= l.data[l.idx(i, k)] * l.data[l.idx(j, k)];
                }
                let ij = l.idx(i, j);
                l.data[ij] = s / d;
            }
        }
        Some(l)
    }

    /// Cholesky with diagonal shifts when the matrix is numerically singular.
    pub fn factor_regularized(&self) -> Option<Factor> {
        if let Some(l) = self.factor() {
            return Some(Factor { l });
        }
        let scale = self.max_diag().max(1e-300);
        let mut shift = 1e-14 * scale;
        for _ in 0..12 {
            let mut shifted = self.clone();
            for i in 0..self.n {
                shifted.add(i, i, shift);
            }
            if let Some(l) = shifted.factor() {
                return Some(Factor { l });
            }
            shift *= 100.0;
        }
        None
    }
}

pub(crate) struct Factor {
    l: BandedSym,
}

impl Factor {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let (n, bw) = (l.n, l.bw);
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= l.data[l.idx(i, k)] * y[k];
            }
            y[i] = s / l.data[l.idx(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n.min(i + bw + 1) {
                s -= l.data[l.idx(k, i)] * y[k];
            }
            y[i] = s / l.data[l.idx(i, i)];
        }
        y
    }
}

/// Solves `[[A, b], [b^T, c]] [u; v] = [r; rho]` with `A` banded.
pub(crate) fn solve_bordered(a: &BandedSym, b: &[f64], c: f64, r: &[f64], rho: f64) -> Option<(Vec<f64>, f64)> {
    let fac = a.factor_regularized()?;
    let ar = fac.solve(r);
    let ab = fac.solve(b);
    let schur = c - b.iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>();
    let schur = if schur > 0.0 { schur } else { c.abs().max(1e-300) * 1e-14 };
    let v = (rho - b.iter().zip(&ar).map(|(x, y)| x * y).sum::<f64>()) / schur;
    let u = ar.iter().zip(&ab).map(|(x, y)| x - v * y).collect();
    Some((u, v))
}
