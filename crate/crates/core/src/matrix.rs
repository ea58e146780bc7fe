use crate::error::{Error, Result};

/// Dense square matrix in row-major order, used for symmetric operators.
///
/// Symmetry is not enforced by the type; [`SymMatrix::from_lower`] builds
/// a bit-exact symmetric matrix and [`SymMatrix::check_symmetric`] checks
/// one built some other way.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    /// Like [`SymMatrix::zeros`] but reports allocation failure.
    pub fn try_zeros(dim: usize) -> Result<Self> {
        let len = dim.checked_mul(dim).ok_or(Error::Allocation { dim })?;
        let mut data = Vec::new();
        data.try_reserve_exact(len).map_err(|_| Error::Allocation { dim })?;
        data.resize(len, 0.0);
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Evaluates `f(i, j)` on the lower triangle and mirrors it.
    pub fn from_lower(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Builds from explicit rows; the caller is responsible for symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "matrix must be square");
            data.extend_from_slice(r);
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// First position where the matrix differs bitwise from its transpose.
    pub fn check_symmetric(&self) -> Option<(usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..i {
                if self.data[i * n + j].to_bits() != self.data[j * n + i].to_bits() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The reversal similarity `P M P` with `P` the anti-identity.
    pub fn reversed(&self) -> Self {
        let n = self.dim;
        let mut r = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                r.data[i * n + j] = self.data[(n - 1 - i) * n + (n - 1 - j)];
            }
        }
        r
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SymMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Symmetric band matrix holding the diagonal and `bandwidth` lower
/// diagonals; entry `(i + d, i)` lives at `d * dim + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    dim: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        Self { dim, bandwidth, data: vec![0.0; (bandwidth + 1) * dim] }
    }

    /// Evaluates `f(i, j)` for `j <= i <= j + bandwidth`.
    pub fn from_lower(dim: usize, bandwidth: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim, bandwidth);
        for d in 0..=bandwidth {
            for j in 0..dim.saturating_sub(d) {
                m.data[d * dim + j] = f(j + d, j);
            }
        }
        m
    }

    /// Copies the band of a dense matrix; entries outside it are ignored.
    pub fn from_dense(m: &SymMatrix, bandwidth: usize) -> Self {
        Self::from_lower(m.dim(), bandwidth, |i, j| m[(i, j)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bandwidth {
            0.0
        } else {
            self.data[d * self.dim + lo]
        }
    }

    /// Writes `(i, j)` and its mirror. Zeros outside the band are dropped;
    /// anything else there is a logic error.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bandwidth {
            debug_assert!(v == 0.0, "write outside band at ({i}, {j})");
            return;
        }
        self.data[d * self.dim + lo] = v;
    }

    /// Same entries with room for `extra` more diagonals.
    pub fn widened(&self, extra: usize) -> Self {
        let mut w = Self::zeros(self.dim, self.bandwidth + extra);
        w.data[..self.data.len()].copy_from_slice(&self.data);
        w
    }

    pub fn to_dense(&self) -> SymMatrix {
        SymMatrix::from_lower(self.dim, |i, j| self.get(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_lower_is_bitwise_symmetric() {
        let m = SymMatrix::from_lower(7, |i, j| (i as f64 + 0.1).sin() * (j as f64).exp());
        assert_eq!(m.check_symmetric(), None);
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn detects_asymmetry() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0 + 1e-16 * 4.0, 1.0]]);
        assert_eq!(m.check_symmetric(), Some((1, 0)));
    }

    #[test]
    fn reversal_is_an_involution() {
        let m = SymMatrix::from_lower(5, |i, j| (i * 10 + j) as f64);
        assert_eq!(m.reversed().reversed(), m);
        assert_eq!(m.reversed()[(0, 0)], m[(4, 4)]);
    }

    #[test]
    fn band_round_trip() {
        let m = SymMatrix::from_lower(6, |i, j| if i - j <= 2 { (1 + i + 3 * j) as f64 } else { 0.0 });
        let b = BandMatrix::from_dense(&m, 2);
        assert_eq!(b.to_dense(), m);
        assert_eq!(b.get(0, 5), 0.0);
        let w = b.widened(1);
        assert_eq!(w.bandwidth(), 3);
        assert_eq!(w.to_dense(), m);
    }
}
