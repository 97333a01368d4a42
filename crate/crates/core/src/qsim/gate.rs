use ndarray::{Array2, ArrayView2};

use super::{C64, UNITARY_TOL};
use crate::error::{Error, Result};

/// A 2×2 complex matrix in row-major order; the working form of every
/// single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ]);

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }
}

/// A validated unitary on `log2(dim)` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    entries: Array2<C64>,
}

impl GateMatrix {
    /// Wraps `entries` after checking it is square, power-of-two sized, and
    /// unitary within [`UNITARY_TOL`].
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::Shape(format!("gate matrix must be square, got {r}x{c}")));
        }
        if r == 0 || !r.is_power_of_two() {
            return Err(Error::Shape(format!("gate dimension {r} is not a power of two")));
        }
        let dev = unitarity_deviation(entries.view());
        if !(dev <= UNITARY_TOL) {
            return Err(Error::Validation(format!(
                "gate is not unitary: max |U†U - I| = {dev:e}"
            )));
        }
        Ok(GateMatrix { entries })
    }

    /// Builds a gate from a real matrix (checked for orthogonality).
    pub fn from_real(entries: &Array2<f64>) -> Result<Self> {
        Self::new(entries.mapv(|x| C64::new(x, 0.0)))
    }

    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        GateMatrix {
            entries: Array2::eye(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    /// The 2×2 form, if this is a single-qubit gate.
    pub fn as_mat2(&self) -> Option<Mat2> {
        if self.dim() != 2 {
            return None;
        }
        let e = &self.entries;
        Some(Mat2([[e[[0, 0]], e[[0, 1]]], [e[[1, 0]], e[[1, 1]]]]))
    }

    /// Kronecker product `self ⊗ rhs`; `self` acts on the leading wires.
    pub fn kron(&self, rhs: &GateMatrix) -> GateMatrix {
        let (a, b) = (&self.entries, &rhs.entries);
        let (da, db) = (a.nrows(), b.nrows());
        let mut out = Array2::zeros((da * db, da * db));
        for i in 0..da {
            for j in 0..da {
                let aij = a[[i, j]];
                for k in 0..db {
                    for l in 0..db {
                        out[[i * db + k, j * db + l]] = aij * b[[k, l]];
                    }
                }
            }
        }
        GateMatrix { entries: out }
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(self.entries.view())
    }
}

impl From<Mat2> for GateMatrix {
    fn from(m: Mat2) -> Self {
        let e = m.0;
        GateMatrix {
            entries: ndarray::arr2(&[[e[0][0], e[0][1]], [e[1][0], e[1][1]]]),
        }
    }
}

pub(crate) fn unitarity_deviation(u: ArrayView2<C64>) -> f64 {
    let n = u.nrows();
    if u.iter().all(|z| z.im == 0.0) {
        // real orthogonal fast path
        let re = u.mapv(|z| z.re);
        let g = re.t().dot(&re);
        return max_identity_deviation_real(&g);
    }
    let uh = u.t().mapv(|z| z.conj());
    let g = uh.dot(&u);
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g[[i, j]] - C64::new(target, 0.0)).norm());
        }
    }
    dev
}

fn max_identity_deviation_real(g: &Array2<f64>) -> f64 {
    let mut dev: f64 = 0.0;
    for ((i, j), &v) in g.indexed_iter() {
        let target = if i == j { 1.0 } else { 0.0 };
        dev = dev.max((v - target).abs());
    }
    dev
}

/// Standard single-qubit gates.
pub mod gates {
    use super::Mat2;
    use crate::qsim::C64;

    const ZERO: C64 = C64::new(0.0, 0.0);
    const ONE: C64 = C64::new(1.0, 0.0);

    pub fn x() -> Mat2 {
        Mat2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Mat2 {
        Mat2([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
    }

    pub fn z() -> Mat2 {
        Mat2([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn h() -> Mat2 {
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Mat2([[r, r], [r, -r]])
    }

    /// `RX(θ) = [[cos θ/2, −i sin θ/2], [−i sin θ/2, cos θ/2]]`
    pub fn rx(theta: f64) -> Mat2 {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2([
            [C64::new(c, 0.0), C64::new(0.0, -s)],
            [C64::new(0.0, -s), C64::new(c, 0.0)],
        ])
    }

    /// `RY(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`
    pub fn ry(theta: f64) -> Mat2 {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2([
            [C64::new(c, 0.0), C64::new(-s, 0.0)],
            [C64::new(s, 0.0), C64::new(c, 0.0)],
        ])
    }

    /// `RZ(θ) = diag(e^{−iθ/2}, e^{iθ/2})`
    pub fn rz(theta: f64) -> Mat2 {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2([[C64::new(c, -s), ZERO], [ZERO, C64::new(c, s)]])
    }

    /// General rotation: `RZ(phi)` first, then `RY(theta)`, then `RZ(omega)`.
    pub fn rot(phi: f64, theta: f64, omega: f64) -> Mat2 {
        rz(omega).mul(&ry(theta)).mul(&rz(phi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a.0[i][j] - b.0[i][j]).norm() <= tol))
    }

    #[test]
    fn rotations_are_unitary() {
        for &t in &[0.0, 0.3, 1.7, -2.2, std::f64::consts::PI] {
            for m in [gates::rx(t), gates::ry(t), gates::rz(t), gates::rot(t, 0.5 * t, -t)] {
                assert!(GateMatrix::from(m).unitarity_deviation() < 1e-14);
            }
        }
    }

    #[test]
    fn rot_with_zero_angles_is_identity() {
        assert!(close(&gates::rot(0.0, 0.0, 0.0), &Mat2::IDENTITY, 1e-15));
    }

    #[test]
    fn rot_matches_closed_form() {
        // Rot(φ,θ,ω) = [[e^{-i(φ+ω)/2} cos θ/2, -e^{i(φ-ω)/2} sin θ/2],
        //               [e^{-i(φ-ω)/2} sin θ/2,  e^{i(φ+ω)/2} cos θ/2]]
        let (phi, theta, omega): (f64, f64, f64) = (0.4, 1.1, -0.7);
        let (s, c) = (theta / 2.0).sin_cos();
        let e = |x: f64| C64::from_polar(1.0, x);
        let expected = Mat2([
            [e(-(phi + omega) / 2.0) * c, -e((phi - omega) / 2.0) * s],
            [e(-(phi - omega) / 2.0) * s, e((phi + omega) / 2.0) * c],
        ]);
        assert!(close(&gates::rot(phi, theta, omega), &expected, 1e-14));
    }

    #[test]
    fn rejects_non_unitary_and_bad_shapes() {
        let m = arr2(&[[C64::new(1.0, 0.0), C64::new(1.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]);
        assert!(matches!(GateMatrix::new(m), Err(Error::Validation(_))));
        assert!(matches!(GateMatrix::new(Array2::eye(3)), Err(Error::Shape(_))));
        assert!(matches!(GateMatrix::new(Array2::zeros((2, 4))), Err(Error::Shape(_))));
    }

    #[test]
    fn kron_orders_leading_wire_first() {
        let xi = GateMatrix::from(gates::x()).kron(&GateMatrix::identity(1));
        // X ⊗ I maps |00⟩ (index 0) to |10⟩ (index 2)
        assert_eq!(xi.entries()[[2, 0]], C64::new(1.0, 0.0));
        assert_eq!(xi.n_qubits(), 2);
    }
}
