//! Dense determinants over the generic scalar field.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{cone, czero, Real};

/// Determinant of a square row-major matrix by Gaussian elimination with
/// partial pivoting on the squared modulus.
#[allow(clippy::needless_range_loop)]
pub fn det<T: Real>(mut a: Vec<Vec<Complex<T>>>) -> Complex<T> {
    let n = a.len();
    if n == 0 {
        return cone();
    }
    let mut det = cone::<T>();
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col][col].norm_sqr();
        for row in col + 1..n {
            let m = a[row][col].norm_sqr();
            if m > best {
                best = m;
                pivot = row;
            }
        }
        if best.is_zero() {
            return czero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        let inv = cone::<T>() / p;
        for row in col + 1..n {
            let factor = a[row][col].clone() * inv.clone();
            if factor.is_zero() {
                continue;
            }
            for k in col + 1..n {
                let t = factor.clone() * a[col][k].clone();
                a[row][k] = a[row][k].clone() - t;
            }
        }
    }
    det
}

/// Exact integer determinant (fraction-free Bareiss elimination).
pub fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
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
                    a.swap(r, k);
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
