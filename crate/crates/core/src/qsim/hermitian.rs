use ndarray::Array2;

use super::{C64, HERMITIAN_TOL};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Complex square matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: Array2<C64>,
}

impl HermitianMatrix {
    /// Validates Hermiticity within [`HERMITIAN_TOL`].
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::Shape(format!("hermitian matrix must be square and non-empty, got {r}x{c}")));
        }
        let mut dev: f64 = 0.0;
        for i in 0..r {
            for j in i..r {
                dev = dev.max((entries[[i, j]] - entries[[j, i]].conj()).norm());
            }
        }
        if !(dev <= HERMITIAN_TOL) {
            return Err(Error::Validation(format!("matrix is not Hermitian: max deviation {dev:e}")));
        }
        Ok(HermitianMatrix { entries })
    }

    pub fn from_real_symmetric(m: &Array2<f64>) -> Result<Self> {
        Self::new(m.mapv(|x| C64::new(x, 0.0)))
    }

    /// Skips validation; the caller builds the matrix Hermitian by construction.
    pub(crate) fn from_entries_unchecked(entries: Array2<C64>) -> Self {
        HermitianMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diag().iter().map(|z| z.re).sum()
    }

    /// Eigenvalues in ascending order, by Householder reduction to a real
    /// tridiagonal matrix and implicit QL. Cheaper than [`Self::eigh`] when
    /// the vectors are not needed.
    pub fn eigvals(&self) -> Result<Vec<f64>> {
        let (mut d, mut e) = tridiagonalize(&self.entries);
        tridiagonal_ql(&mut d, &mut e)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// Eigen-decomposition by cyclic complex Jacobi rotations. Returns
    /// ascending eigenvalues and the matching unit eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, Array2<C64>)> {
        let n = self.dim();
        let mut a = self.entries.clone();
        let mut v: Array2<C64> = Array2::eye(n);
        let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if scale == 0.0 {
            return Ok((vec![0.0; n], v));
        }
        let tol = 1e-15 * scale;

        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&a);
            if off <= tol {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q, tol / n as f64);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > tol {
            return Err(Error::Numerical(format!(
                "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (dim {n})"
            )));
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
        let vals = order.iter().map(|&i| a[[i, i]].re).collect();
        let mut vecs = Array2::zeros((n, n));
        for (col, &i) in order.iter().enumerate() {
            vecs.column_mut(col).assign(&v.column(i));
        }
        Ok((vals, vecs))
    }
}

/// Unitarily reduce a Hermitian matrix to tridiagonal form. Returns the real
/// diagonal and the moduli of the subdiagonal; a diagonal phase similarity
/// makes the subdiagonal real without changing the spectrum.
fn tridiagonalize(entries: &Array2<C64>) -> (Vec<f64>, Vec<f64>) {
    let n = entries.nrows();
    let mut a = entries.clone();
    let mut sub = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| a[[i, k]]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            sub[k] = x[0].norm();
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= vnorm);

        // B ← H B H on the trailing block with H = I − 2vv†:
        // w = Bv, u = w − (v†w)v, B ← B − 2(vu† + uv†)
        let m = n - k - 1;
        let mut w = vec![C64::new(0.0, 0.0); m];
        for i in 0..m {
            let row = a.row(k + 1 + i);
            w[i] = (0..m).map(|j| row[k + 1 + j] * v[j]).sum();
        }
        let vw: C64 = v.iter().zip(&w).map(|(vi, wi)| vi.conj() * wi).sum();
        let u: Vec<C64> = w.iter().zip(&v).map(|(wi, vi)| wi - vw * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[[k + 1 + i, k + 1 + j]] -= (v[i] * u[j].conj() + u[i] * v[j].conj()) * 2.0;
            }
        }
        sub[k] = alpha.norm();
    }
    if n >= 2 {
        sub[n - 2] = a[[n - 1, n - 2]].norm();
    }
    let diag = (0..n).map(|i| a[[i, i]].re).collect();
    (diag, sub)
}

/// Eigenvalues of the symmetric tridiagonal `(d, e)` (with `e[i]` coupling
/// `i` and `i + 1`) by implicit QL with Wilkinson shifts; `d` is overwritten.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical(format!("tridiagonal QL did not converge (dim {n})")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn off_diagonal_norm(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += a[[p, q]].norm_sqr();
        }
    }
    (2.0 * acc).sqrt()
}

/// Zeroes `a[p][q]` with `a ← J† a J`, `J = diag(1, e^{-iφ}) · R(c, s)` on
/// the (p, q) plane, and accumulates `v ← v J`.
fn rotate(a: &mut Array2<C64>, v: &mut Array2<C64>, p: usize, q: usize, skip_below: f64) {
    let apq = a[[p, q]];
    let mag = apq.norm();
    if mag <= skip_below {
        return;
    }
    let phase = apq / mag;
    let app = a[[p, p]].re;
    let aqq = a[[q, q]].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e_minus = phase.conj();

    let n = a.nrows();
    for k in 0..n {
        let akp = a[[k, p]];
        let akq = a[[k, q]];
        a[[k, p]] = akp * c - akq * e_minus * s;
        a[[k, q]] = akp * s + akq * e_minus * c;
    }
    for k in 0..n {
        let apk = a[[p, k]];
        let aqk = a[[q, k]];
        a[[p, k]] = apk * c - aqk * phase * s;
        a[[q, k]] = apk * s + aqk * phase * c;
    }
    a[[p, q]] = C64::new(0.0, 0.0);
    a[[q, p]] = C64::new(0.0, 0.0);
    a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
    a[[q, q]] = C64::new(a[[q, q]].re, 0.0);

    for k in 0..n {
        let vkp = v[[k, p]];
        let vkq = v[[k, q]];
        v[[k, p]] = vkp * c - vkq * e_minus * s;
        v[[k, q]] = vkp * s + vkq * e_minus * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(m: &[[f64; 2]; 2]) -> HermitianMatrix {
        HermitianMatrix::from_real_symmetric(&arr2(m)).unwrap()
    }

    #[test]
    fn diagonal_and_pauli_x() {
        assert_eq!(real(&[[2.0, 0.0], [0.0, 1.0]]).eigvals().unwrap(), vec![1.0, 2.0]);
        let ev = real(&[[0.0, 1.0], [1.0, 0.0]]).eigvals().unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = arr2(&[[C64::new(1.0, 0.0), C64::new(0.0, 1.0)], [C64::new(0.0, 1.0), C64::new(1.0, 0.0)]]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::Validation(_))));
    }

    /// Roots of det(λI − M) for a real symmetric 3×3 by bisection on the
    /// characteristic cubic, bracketed by Gershgorin discs.
    fn cubic_roots_by_bisection(m: &[[f64; 3]; 3]) -> Vec<f64> {
        let det = |l: f64| {
            let a = [
                [m[0][0] - l, m[0][1], m[0][2]],
                [m[1][0], m[1][1] - l, m[1][2]],
                [m[2][0], m[2][1], m[2][2] - l],
            ];
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        };
        let radius: f64 = (0..3)
            .map(|i| m[i][i].abs() + (0..3).filter(|&j| j != i).map(|j| m[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
            + 1.0;
        // scan for sign changes on a fine grid, then bisect each bracket
        let steps = 20000;
        let h = 2.0 * radius / steps as f64;
        let mut roots = Vec::new();
        let mut x0 = -radius;
        let mut f0 = det(x0);
        for k in 1..=steps {
            let x1 = -radius + k as f64 * h;
            let f1 = det(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut lo, mut hi) = (x0, x1);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if det(lo) * det(mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            x0 = x1;
            f0 = f1;
        }
        roots
    }

    #[test]
    fn random_symmetric_3x3_matches_characteristic_polynomial_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mut m = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in i..3 {
                    let x: f64 = rng.random_range(-2.0..2.0);
                    m[i][j] = x;
                    m[j][i] = x;
                }
            }
            let oracle = cubic_roots_by_bisection(&m);
            assert_eq!(oracle.len(), 3);
            let mat = Array2::from_shape_fn((3, 3), |(i, j)| m[i][j]);
            let got = HermitianMatrix::from_real_symmetric(&mat).unwrap().eigvals().unwrap();
            for (g, o) in got.iter().zip(&oracle) {
                assert!((g - o).abs() < 1e-8, "{got:?} vs {oracle:?}");
            }
        }
    }

    #[test]
    fn complex_eigenpairs_have_small_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &n in &[2usize, 5, 16] {
            let mut m = Array2::<C64>::zeros((n, n));
            for i in 0..n {
                m[[i, i]] = C64::new(rng.random_range(-1.0..1.0), 0.0);
                for j in (i + 1)..n {
                    let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    m[[i, j]] = z;
                    m[[j, i]] = z.conj();
                }
            }
            let h = HermitianMatrix::new(m.clone()).unwrap();
            let (vals, vecs) = h.eigh().unwrap();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            assert!((vals.iter().sum::<f64>() - h.trace()).abs() < 1e-8);
            for (k, &l) in vals.iter().enumerate() {
                let v = vecs.column(k);
                let mv = m.dot(&v);
                let resid = mv
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| (a - b * l).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(resid < 1e-8, "residual {resid}");
            }
        }
    }

    #[test]
    fn tridiagonal_eigvals_match_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [1usize, 2, 3, 5, 16, 33] {
            let mut m = Array2::from_shape_simple_fn((n, n), || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let adj = m.t().mapv(|z| z.conj());
            m = (&m + &adj).mapv(|z| z * 0.5);
            let h = HermitianMatrix::new(m).unwrap();
            let fast = h.eigvals().unwrap();
            let slow = h.eigh().unwrap().0;
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
            }
        }
        // repeated eigenvalues and an already tridiagonal input
        let d = HermitianMatrix::from_real_symmetric(&arr2(&[[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]])).unwrap();
        assert_eq!(d.eigvals().unwrap(), vec![-1.0, 2.0, 2.0]);
        let zero = HermitianMatrix::from_real_symmetric(&Array2::zeros((4, 4))).unwrap();
        assert_eq!(zero.eigvals().unwrap(), vec![0.0; 4]);
    }
}
