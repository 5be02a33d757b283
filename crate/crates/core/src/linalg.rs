//! Dense determinants in log space.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `ln|det|` and sign of a real square matrix via partial-pivot LU.
pub fn log_det_real(m: DMatrix<f64>) -> (f64, f64) {
    let n = m.nrows();
    if n == 0 {
        return (0.0, 1.0);
    }
    let lu = m.lu();
    let mut ln = 0.0;
    let mut sign = lu.p().determinant::<f64>();
    for d in lu.u().diagonal().iter().copied() {
        if d == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        ln += d.abs().ln();
        sign *= d.signum();
    }
    (ln, sign)
}

/// `ln|det|` and unit phase of a complex square matrix.
pub fn log_det_complex(m: DMatrix<Complex64>) -> (f64, Complex64) {
    let n = m.nrows();
    if n == 0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let lu = m.lu();
    let mut ln = 0.0;
    let mut phase = Complex64::new(lu.p().determinant::<f64>(), 0.0);
    for d in lu.u().diagonal().iter().copied() {
        let a = d.norm();
        if a == 0.0 {
            return (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
        }
        ln += a.ln();
        phase *= d / a;
    }
    (ln, phase)
}

pub fn det_real(m: DMatrix<f64>) -> f64 {
    let (ln, s) = log_det_real(m);
    s * ln.exp()
}

pub fn det_complex(m: DMatrix<Complex64>) -> Complex64 {
    let (ln, ph) = log_det_complex(m);
    ph * ln.exp()
}


/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((det_real(m) - 3.0).abs() < 1e-14);
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(log_det_real(m).1, -1.0);
        assert_eq!(det_bareiss(vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]), 4);
        assert_eq!(det_bareiss(vec![vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn complex_determinant() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[one, i, i, one]);
        let d = det_complex(m);
        assert!((d - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }
}
