//! Dense real linear algebra used by the graph and circuit modules.

use ndarray::{s, Array1, Array2, Axis};

use crate::error::{Error, Result};

/// Result of a Householder QR of a square matrix, normalized so that
/// `diag(R) ≥ 0`.
#[derive(Debug, Clone)]
pub struct Qr {
    pub q: Array2<f64>,
    pub r: Array2<f64>,
}

impl Qr {
    /// Smallest `|R_ii|` relative to the largest; zero for singular input.
    pub fn min_relative_pivot(&self) -> f64 {
        let d = self.r.diag();
        let max = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if max == 0.0 {
            return 0.0;
        }
        d.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())) / max
    }
}

/// Householder QR of a square matrix with the sign convention `R_ii ≥ 0`.
pub fn householder_qr(a: &Array2<f64>) -> Result<Qr> {
    let (m, n) = a.dim();
    if m != n {
        return Err(Error::Shape(format!("QR expects a square matrix, got {m}x{n}")));
    }
    let mut r = a.clone();
    // reflectors v_k (stored with v_k[0] at row k) and their 2/(vᵀv)
    let mut reflectors: Vec<(Array1<f64>, f64)> = Vec::with_capacity(n);
    let mut w = Array1::<f64>::zeros(n);

    for k in 0..n.saturating_sub(1) {
        let x = r.slice(s![k.., k]);
        let alpha = x.dot(&x).sqrt();
        if alpha == 0.0 {
            reflectors.push((Array1::zeros(m - k), 0.0));
            continue;
        }
        let mut v = x.to_owned();
        // reflect onto -sign(x0)·‖x‖·e1 to avoid cancellation
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vtv = v.dot(&v);
        let beta = 2.0 / vtv;

        // R[k.., k..] -= beta v (vᵀ R[k.., k..]), row-wise for locality
        let mut ws = w.slice_mut(s![k..]);
        ws.fill(0.0);
        for (i, vi) in v.iter().enumerate() {
            if *vi != 0.0 {
                ws.scaled_add(*vi, &r.slice(s![k + i, k..]));
            }
        }
        for (i, vi) in v.iter().enumerate() {
            if *vi != 0.0 {
                r.slice_mut(s![k + i, k..]).scaled_add(-beta * vi, &ws);
            }
        }
        for i in (k + 1)..m {
            r[[i, k]] = 0.0;
        }
        reflectors.push((v, beta));
    }

    // Q = H_0 H_1 … H_{n-2}, accumulated right to left onto the identity
    let mut q = Array2::<f64>::eye(n);
    for (k, (v, beta)) in reflectors.iter().enumerate().rev() {
        if *beta == 0.0 {
            continue;
        }
        let mut ws = w.slice_mut(s![k..]);
        ws.fill(0.0);
        for (i, vi) in v.iter().enumerate() {
            if *vi != 0.0 {
                ws.scaled_add(*vi, &q.slice(s![k + i, k..]));
            }
        }
        for (i, vi) in v.iter().enumerate() {
            if *vi != 0.0 {
                q.slice_mut(s![k + i, k..]).scaled_add(-beta * vi, &ws);
            }
        }
    }

    for i in 0..n {
        if r[[i, i]] < 0.0 {
            r.row_mut(i).mapv_inplace(|x| -x);
            q.column_mut(i).mapv_inplace(|x| -x);
        }
    }
    Ok(Qr { q, r })
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
/// Fails with a conditioning report when a pivot vanishes.
pub fn solve(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::Shape(format!(
            "system {}x{} with right-hand side {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut aug = ndarray::concatenate(Axis(1), &[a.view(), b.view()]).expect("row counts agree");
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot: f64 = 0.0;

    for col in 0..n {
        let (piv_row, piv) = (col..n)
            .map(|r| (r, aug[[r, col]].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv <= f64::EPSILON * scale * n as f64 || piv == 0.0 {
            return Err(Error::Numerical(format!(
                "singular system: pivot {piv:e} in column {col} (matrix scale {scale:e}, \
                 pivot ratio so far {:e})",
                if max_pivot > 0.0 { min_pivot.min(piv) / max_pivot } else { 0.0 }
            )));
        }
        min_pivot = min_pivot.min(piv);
        max_pivot = max_pivot.max(piv);
        if piv_row != col {
            for k in 0..aug.ncols() {
                aug.swap([col, k], [piv_row, k]);
            }
        }
        let pivot_row = aug.row(col).to_owned();
        for r in (col + 1)..n {
            let f = aug[[r, col]] / pivot_row[col];
            if f != 0.0 {
                aug.row_mut(r).scaled_add(-f, &pivot_row);
            }
        }
    }

    let m = b.ncols();
    let mut x = Array2::<f64>::zeros((n, m));
    for r in (0..n).rev() {
        for c in 0..m {
            let mut acc = aug[[r, n + c]];
            for k in (r + 1)..n {
                acc -= aug[[r, k]] * x[[k, c]];
            }
            x[[r, c]] = acc / aug[[r, r]];
        }
    }
    Ok(x)
}

#[cfg(test)]
pub(crate) fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
