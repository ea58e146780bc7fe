//! Dense real-symmetric eigensolver: Householder reduction to tridiagonal
//! form followed by implicit-shift QL, plus a Givens band reduction for
//! the pentadiagonal toroidal dipole blocks.
//!
//! Eigenvectors are kept as rows so that every rotation and reflection
//! sweeps contiguous memory.

use crate::error::{domain, Error, Result};
use crate::matrix::{BandMatrix, SymMatrix};
use crate::operators::{assemble_block, assemble_toroidal_band, OperatorBlock, OperatorKind};

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Ascending eigenvalues with orthonormal, gauge-fixed eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    vectors: Vec<f64>,
    truncation: Option<usize>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector of level `h`; component `i` belongs to `n = i - N` for
    /// spectra of operator blocks.
    pub fn vector(&self, h: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[h * n..(h + 1) * n]
    }

    /// Basis truncation `N` when the spectrum came from a block.
    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }
}

/// Reduces `a` (row-major, symmetric, overwritten) to tridiagonal form.
/// Returns the diagonal, the off-diagonal (`e[i]` couples `i` and `i+1`,
/// last entry 0) and, if requested, `Qᵀ` with `A = Q T Qᵀ`.
fn householder(a: &mut [f64], n: usize, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<Vec<f64>>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut reflectors: Vec<(usize, f64, Vec<f64>)> = Vec::new();
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k];
        let x = &a[k * n + k + 1..(k + 1) * n];
        let x0 = x[0];
        let sigma: f64 = x[1..].iter().map(|v| v * v).sum();
        if sigma == 0.0 {
            e[k] = x0;
            continue;
        }
        let norm = (x0 * x0 + sigma).sqrt();
        let alpha = if x0 > 0.0 { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] = x0 - alpha;
        let beta = 2.0 / (v[0] * v[0] + sigma);
        e[k] = alpha;

        let off = k + 1;
        let m = n - off;
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i + 1) * n];
            p[i] = beta * row.iter().zip(&v).map(|(r, s)| r * s).sum::<f64>();
        }
        let kk = 0.5 * beta * p[..m].iter().zip(&v).map(|(r, s)| r * s).sum::<f64>();
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(off + i) * n + off..(off + i + 1) * n];
            for ((r, vj), wj) in row.iter_mut().zip(&v).zip(&p[..m]) {
                *r -= vi * wj + wi * vj;
            }
        }
        if want_q {
            reflectors.push((k, beta, v));
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        d[n - 1] = a[n * n - 1];
    }

    let qt = want_q.then(|| {
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            q[i * n + i] = 1.0;
        }
        let mut r = vec![0.0; n];
        for (k, beta, v) in &reflectors {
            let off = k + 1;
            r[1..].fill(0.0);
            for (i, vi) in v.iter().enumerate() {
                let row = &q[(off + i) * n..(off + i + 1) * n];
                for j in 1..n {
                    r[j] += vi * row[j];
                }
            }
            for (i, vi) in v.iter().enumerate() {
                let f = beta * vi;
                let row = &mut q[(off + i) * n..(off + i + 1) * n];
                for j in 1..n {
                    row[j] -= f * r[j];
                }
            }
        }
        q
    });
    (d, e, qt)
}

/// Implicit-shift QL on the tridiagonal `(d, e)`. Rotations are applied
/// to the rows of `z` when given. Eigenvalues are left in `d`, unsorted.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let budget = 30 * n;
    let mut iterations = 0usize;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    e[n - 1] = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > budget {
                    return Err(Error::EigenNotConverged { index: l, iterations: budget });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let t = *b;
                            *b = s * *a + c * t;
                            *a = c * *a - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn check_input(m: &SymMatrix) -> Result<()> {
    if let Some((row, col)) = m.check_symmetric() {
        return Err(Error::NotSymmetric { row, col });
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(domain("matrix has non-finite entries"));
    }
    Ok(())
}

fn sorted_ascending(values: &mut [f64]) {
    values.sort_by(f64::total_cmp);
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &SymMatrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let (mut d, mut e, _) = householder(&mut a, n, false);
    tridiagonal_ql(&mut d, &mut e, None)?;
    sorted_ascending(&mut d);
    Ok(d)
}

/// Eigenvalues of a symmetric band matrix, ascending, by Givens band
/// reduction followed by QL. Costs `O(n² b)` instead of `O(n³)`.
pub fn eigvalsh_band(m: &BandMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let b = m.bandwidth();
    let mut w = m.widened(1);
    let bulge = b + 1;
    // Rotation in the plane (p, p+1) chosen to zero (p+1, col).
    let rotate = |w: &mut BandMatrix, p: usize, col: usize| {
        let q = p + 1;
        let x = w.get(q, col);
        if x == 0.0 {
            return;
        }
        let y = w.get(p, col);
        let r = y.hypot(x);
        let (c, s) = (y / r, x / r);
        let lo = p.saturating_sub(bulge);
        let hi = (q + bulge + 1).min(n);
        for k in lo..hi {
            if k == p || k == q {
                continue;
            }
            let (kp, kq) = (w.get(k, p), w.get(k, q));
            if kp == 0.0 && kq == 0.0 {
                continue;
            }
            w.set(k, p, c * kp + s * kq);
            w.set(k, q, -s * kp + c * kq);
        }
        let (app, aqq, apq) = (w.get(p, p), w.get(q, q), w.get(p, q));
        w.set(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
        w.set(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
        w.set(p, q, c * s * (aqq - app) + (c * c - s * s) * apq);
        w.set(q, col, 0.0);
    };
    if b >= 2 {
        for j in 0..n.saturating_sub(2) {
            for r in (2..=b).rev() {
                let mut row = j + r;
                let mut col = j;
                while row < n {
                    rotate(&mut w, row - 1, col);
                    // the rotation leaves a bulge at (row + b, row - 1)
                    col = row - 1;
                    row += b;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| w.get(i, i)).collect();
    let mut e: Vec<f64> = (0..n).map(|i| if i + 1 < n { w.get(i + 1, i) } else { 0.0 }).collect();
    tridiagonal_ql(&mut d, &mut e, None)?;
    sorted_ascending(&mut d);
    Ok(d)
}

/// Full decomposition of a symmetric matrix with the sign gauge applied
/// but no degeneracy handling.
pub fn decompose(m: &SymMatrix) -> Result<Spectrum> {
    check_input(m)?;
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let (mut d, mut e, qt) = householder(&mut a, n, true);
    let mut z = qt.expect("requested");
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(&z[i * n..(i + 1) * n]);
    }
    let mut s = Spectrum { eigenvalues, vectors, truncation: None };
    for h in 0..n {
        fix_gauge(s.vector_mut(h));
    }
    Ok(s)
}

impl Spectrum {
    fn vector_mut(&mut self, h: usize) -> &mut [f64] {
        let n = self.dim();
        &mut self.vectors[h * n..(h + 1) * n]
    }
}

/// Makes the first component of (numerically) largest magnitude positive.
fn fix_gauge(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v.iter().find(|x| x.abs() >= max * (1.0 - 1e-9)).copied().unwrap_or(0.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Decomposes an operator block.
///
/// Blocks that commute with the reversal `n -> -n` (all Hamiltonian
/// blocks) get their eigenvectors cleaned up by symmetry:
///
/// * an isolated level is projected onto its dominant parity, removing
///   rounding-level admixtures of the other parity;
/// * a cluster of levels closer than [`DEGENERACY_TOL`] is rotated to
///   diagonalize the momentum `n` inside the cluster, ordered by
///   ascending momentum, and its eigenvalues are replaced by their mean.
///
/// Inside a cluster the solver's own mixing is arbitrary, so some fixed
/// choice is needed for reproducible output. Momentum-diagonal states are
/// the limit of the exact states under an infinitesimal perturbation that
/// lifts the ±n degeneracy, and they are what a filled level carries.
pub fn eigh(block: &OperatorBlock) -> Result<Spectrum> {
    let mut s = decompose(block.values())?;
    s.truncation = Some(block.truncation());
    if block.kind() == OperatorKind::Hamiltonian || block.values().reversed() == *block.values() {
        resolve_parity(&mut s, block);
    }
    Ok(s)
}

fn resolve_parity(s: &mut Spectrum, block: &OperatorBlock) {
    let n = s.dim();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && s.eigenvalues[end] - s.eigenvalues[end - 1] < DEGENERACY_TOL {
            end += 1;
        }
        if end - start == 1 {
            project_parity(s.vector_mut(start));
        } else {
            rotate_to_momentum(s, block, start, end);
        }
        for h in start..end {
            fix_gauge(s.vector_mut(h));
        }
        start = end;
    }
}

fn project_parity(v: &mut [f64]) {
    let n = v.len();
    let (mut even, mut odd) = (0.0, 0.0);
    for i in 0..n {
        let j = n - 1 - i;
        even += (v[i] + v[j]).powi(2);
        odd += (v[i] - v[j]).powi(2);
    }
    let sign = if even >= odd { 1.0 } else { -1.0 };
    let proj: Vec<f64> = (0..n).map(|i| 0.5 * (v[i] + sign * v[n - 1 - i])).collect();
    v.copy_from_slice(&proj);
    normalize(v);
}

fn rotate_to_momentum(s: &mut Spectrum, block: &OperatorBlock, start: usize, end: usize) {
    let k = end - start;
    let dim = s.dim();
    let momentum = SymMatrix::from_lower(k, |i, j| {
        let (vi, vj) = (s.vector(start + i), s.vector(start + j));
        (0..dim).map(|c| block.n_of(c) as f64 * vi[c] * vj[c]).sum()
    });
    let Ok(local) = decompose(&momentum) else {
        return;
    };
    let mut rotated = vec![0.0; k * dim];
    for l in 0..k {
        let coeffs = local.vector(l);
        let out = &mut rotated[l * dim..(l + 1) * dim];
        for (j, cj) in coeffs.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(s.vector(start + j)) {
                *o += cj * x;
            }
        }
        normalize(out);
    }
    s.vectors[start * dim..end * dim].copy_from_slice(&rotated);
    let mean = s.eigenvalues[start..end].iter().sum::<f64>() / k as f64;
    s.eigenvalues[start..end].fill(mean);
}

fn block_eigenvalues(kind: OperatorKind, truncation: usize, m: i64, a: f64) -> Result<Vec<f64>> {
    match kind {
        OperatorKind::Hamiltonian => eigvalsh(assemble_block(kind, truncation, m, a)?.values()),
        OperatorKind::ToroidalDipole => eigvalsh_band(&assemble_toroidal_band(truncation, a)?),
    }
}

/// Largest eigenvalue change between truncations `n_small` and `n_large`
/// over `levels` compared levels.
///
/// Hamiltonian spectra are bounded below and compared from the ground
/// state up. The toroidal dipole spectrum is unbounded in both directions
/// and its extreme eigenvalues are truncation artefacts, so the `levels`
/// eigenvalues nearest zero are compared instead.
pub fn convergence_delta(
    kind: OperatorKind,
    m: i64,
    a: f64,
    n_small: usize,
    n_large: usize,
    levels: usize,
) -> Result<f64> {
    if n_small > n_large {
        return Err(domain(format!("need N_small <= N_large, got {n_small} > {n_large}")));
    }
    if levels == 0 || levels > 2 * n_small + 1 {
        return Err(domain(format!("levels must lie in 1..={}, got {levels}", 2 * n_small + 1)));
    }
    let small = block_eigenvalues(kind, n_small, m, a)?;
    let large = if n_small == n_large { small.clone() } else { block_eigenvalues(kind, n_large, m, a)? };
    let (s0, l0) = match kind {
        OperatorKind::Hamiltonian => (0, 0),
        OperatorKind::ToroidalDipole => ((small.len() - levels) / 2, (large.len() - levels) / 2),
    };
    Ok(small[s0..s0 + levels]
        .iter()
        .zip(&large[l0..l0 + levels])
        .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn orthonormality_error(s: &Spectrum) -> f64 {
        let n = s.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                let dot: f64 = s.vector(i).iter().zip(s.vector(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    fn residual(m: &SymMatrix, s: &Spectrum) -> f64 {
        (0..s.dim())
            .map(|h| {
                let v = s.vector(h);
                let mv = m.mul_vec(v);
                let lam = s.eigenvalues()[h];
                let r: f64 = mv.iter().zip(v).map(|(x, y)| (x - lam * y).powi(2)).sum::<f64>().sqrt();
                r / lam.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity() {
        let s = decompose(&SymMatrix::identity(5)).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0; 5]);
        assert!(orthonormality_error(&s) < 1e-15);
    }

    #[test]
    fn exchange_matrix() {
        let m = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let s = decompose(&m).unwrap();
        assert!((s.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues()[1] - 1.0).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = s.vector(0);
        assert!((v0[0] - r).abs() < 1e-15 && (v0[1] + r).abs() < 1e-15);
        let v1 = s.vector(1);
        assert!((v1[0] - r).abs() < 1e-15 && (v1[1] - r).abs() < 1e-15);
    }

    #[test]
    fn tiny_sizes() {
        assert!(decompose(&SymMatrix::zeros(0)).unwrap().eigenvalues().is_empty());
        let s = decompose(&SymMatrix::from_rows(&[vec![-3.5]])).unwrap();
        assert_eq!(s.eigenvalues(), &[-3.5]);
        assert_eq!(s.vector(0), &[1.0]);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]]);
        assert!(matches!(decompose(&m), Err(Error::NotSymmetric { .. })));
        assert!(matches!(eigvalsh(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn hamiltonian_low_levels_are_frozen() {
        // reference values from an independent LAPACK run
        let expected = [-0.35117, 0.63861, 0.67203, 3.65222, 3.65609, 8.65374];
        let b = assemble_block(OperatorKind::Hamiltonian, 250, 0, 2.0).unwrap();
        let s = eigh(&b).unwrap();
        for (x, y) in s.eigenvalues().iter().zip(expected) {
            assert!((x - y).abs() < 1e-5, "{x} vs {y}");
        }
    }

    #[test]
    fn decompositions_satisfy_invariants() {
        for (kind, n, m, a) in [
            (OperatorKind::Hamiltonian, 40, 0, 2.0),
            (OperatorKind::Hamiltonian, 30, 3, 1.2),
            (OperatorKind::ToroidalDipole, 40, 0, 2.5),
        ] {
            let b = assemble_block(kind, n, m, a).unwrap();
            let s = eigh(&b).unwrap();
            assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
            assert!(orthonormality_error(&s) < 1e-10);
            assert!(residual(b.values(), &s) < 1e-9);
            let sum: f64 = s.eigenvalues().iter().sum();
            let tr = b.values().trace();
            assert!((sum - tr).abs() <= 1e-9 * tr.abs().max(1.0));
        }
    }

    #[test]
    fn toroidal_spectrum_is_symmetric() {
        let b = assemble_block(OperatorKind::ToroidalDipole, 60, 0, 2.0).unwrap();
        let ev = eigvalsh(b.values()).unwrap();
        let n = ev.len();
        for i in 0..n {
            assert!((ev[i] + ev[n - 1 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn band_path_matches_dense_path() {
        for a in [1.5, 2.0, 3.0] {
            let b = assemble_block(OperatorKind::ToroidalDipole, 50, 0, a).unwrap();
            let dense = eigvalsh(b.values()).unwrap();
            let band = eigvalsh_band(&assemble_toroidal_band(50, a).unwrap()).unwrap();
            for (x, y) in dense.iter().zip(&band) {
                assert!((x - y).abs() < 1e-10 * x.abs().max(1.0));
            }
        }
        let m = SymMatrix::from_lower(9, |i, j| if i - j <= 3 { ((i * 7 + j * 3) % 5) as f64 - 1.5 } else { 0.0 });
        let dense = eigvalsh(&m).unwrap();
        let band = eigvalsh_band(&BandMatrix::from_dense(&m, 3)).unwrap();
        for (x, y) in dense.iter().zip(&band) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_states_have_definite_parity_or_momentum() {
        let b = assemble_block(OperatorKind::Hamiltonian, 60, 0, 2.0).unwrap();
        let s = eigh(&b).unwrap();
        let dim = s.dim();
        // ground state: exactly even
        let v = s.vector(0);
        for i in 0..dim {
            assert_eq!(v[i], v[dim - 1 - i]);
        }
        // high levels: members of a degenerate pair lean towards opposite n
        let top = s.eigenvalues().len() - 20;
        let mut checked = 0;
        for h in 0..top - 1 {
            if s.eigenvalues()[h] == s.eigenvalues()[h + 1] {
                let lean = |v: &[f64]| (0..dim).map(|i| b.n_of(i) as f64 * v[i] * v[i]).sum::<f64>();
                assert!(lean(s.vector(h)) < 0.0 && lean(s.vector(h + 1)) > 0.0);
                checked += 1;
            }
        }
        assert!(checked > 5);
    }

    #[test]
    fn convergence_of_identical_truncations_is_exact() {
        assert_eq!(convergence_delta(OperatorKind::Hamiltonian, 1, 2.0, 30, 30, 20).unwrap(), 0.0);
        assert!(convergence_delta(OperatorKind::Hamiltonian, 1, 2.0, 30, 20, 20).is_err());
        assert!(convergence_delta(OperatorKind::Hamiltonian, 1, 2.0, 5, 20, 12).is_err());
    }

    #[test]
    fn hamiltonian_converges_quickly() {
        let d = convergence_delta(OperatorKind::Hamiltonian, 0, 2.0, 60, 120, 30).unwrap();
        assert!(d < 1e-8, "{d}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn random_symmetric_matrices(seed in proptest::collection::vec(-10.0f64..10.0, 1..=64)) {
            let n = (seed.len() as f64).sqrt() as usize;
            let m = SymMatrix::from_lower(n, |i, j| seed[i * n + j]);
            let s = decompose(&m).unwrap();
            prop_assert!(orthonormality_error(&s) < 1e-10);
            prop_assert!(residual(&m, &s) < 1e-9 * m.max_abs().max(1.0));
            let vals = eigvalsh(&m).unwrap();
            for (x, y) in vals.iter().zip(s.eigenvalues()) {
                prop_assert!((x - y).abs() < 1e-12 * m.max_abs().max(1.0));
            }
        }

        #[test]
        fn reversed_hamiltonian_has_identical_spectrum(m in 0i64..4, a in 1.05f64..5.0) {
            let b = assemble_block(OperatorKind::Hamiltonian, 20, m, a).unwrap();
            let x = eigvalsh(b.values()).unwrap();
            let y = eigvalsh(&b.values().reversed()).unwrap();
            prop_assert_eq!(x, y);
        }
    }
}
