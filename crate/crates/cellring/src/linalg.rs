//! Dense linear-algebra kernels: LU solves and a real nonsymmetric
//! eigensolver (balancing, Householder reduction to upper Hessenberg form,
//! Francis double-shift QR iteration). The QR path follows the classic
//! EISPACK `balanc`/`orthes`/`hqr` lineage, eigenvalues only.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

/// Solve `a x = b` by LU decomposition with partial pivoting.
/// Returns `None` when a pivot is negligible relative to the matrix scale.
pub fn lu_solve(a: &Array2<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.nrows();
    debug_assert_eq!(a.ncols(), n);
    debug_assert_eq!(b.len(), n);
    let mut lu = a.clone();
    let mut x = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    let scale = lu.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let tiny = f64::EPSILON * scale * n as f64;

    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_val = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let v = lu[(i, k)].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = i;
            }
        }
        if pivot_val <= tiny {
            return None;
        }
        if pivot_row != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = t;
            }
            perm.swap(k, pivot_row);
            x.swap(k, pivot_row);
        }
        let d = lu[(k, k)];
        for i in (k + 1)..n {
            let m = lu[(i, k)] / d;
            lu[(i, k)] = m;
            for j in (k + 1)..n {
                lu[(i, j)] -= m * lu[(k, j)];
            }
            x[i] -= m * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= lu[(i, j)] * x[j];
        }
        x[i] = s / lu[(i, i)];
    }
    Some(x)
}

/// Maximum absolute row sum.
pub fn infinity_norm(a: &Array2<f64>) -> f64 {
    let mut best = 0.0_f64;
    for row in a.rows() {
        let s: f64 = row.iter().map(|v| v.abs()).sum();
        best = best.max(s);
    }
    best
}

/// Diagonal similarity scaling toward equal row/column norms (radix 2, so the
/// transform is exact in floating point and leaves eigenvalues unchanged).
fn balance(a: &mut Array2<f64>) {
    let n = a.nrows();
    let radix: f64 = 2.0;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / radix;
                let mut f = 1.0;
                let s = c + r;
                let mut c_acc = c;
                while c_acc < g {
                    f *= radix;
                    c_acc *= sqrdx;
                }
                g = r * radix;
                while c_acc > g {
                    f /= radix;
                    c_acc /= sqrdx;
                }
                if (c_acc + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place.
fn to_hessenberg(a: &mut Array2<f64>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0_f64; n];
    for m in 1..(n - 1) {
        let mut scale = 0.0;
        for i in m..n {
            scale += a[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..n).rev() {
            ort[i] = a[(i, m - 1)] / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;

        // apply Householder similarity transform H = (I - u u' / h) A (I - u u' / h)
        for j in m..n {
            let mut f = 0.0;
            for i in (m..n).rev() {
                f += ort[i] * a[(i, j)];
            }
            f /= h;
            for i in m..n {
                a[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..n {
            let mut f = 0.0;
            for j in (m..n).rev() {
                f += ort[j] * a[(i, j)];
            }
            f /= h;
            for j in m..n {
                a[(i, j)] -= f * ort[j];
            }
        }
        a[(m, m - 1)] = scale * g;
        for i in (m + 1)..n {
            a[(i, m - 1)] = 0.0;
        }
    }
}

/// Francis double-shift QR iteration on an upper Hessenberg matrix.
/// Returns all eigenvalues; errs if any eigenvalue fails to deflate within
/// the iteration budget.
#[allow(unused_assignments)] // working variables follow the classic hqr flow
fn hqr_eigenvalues(h: &mut Array2<f64>) -> Result<Vec<Complex64>> {
    let nn = h.nrows();
    let mut eig = vec![Complex64::new(0.0, 0.0); nn];
    if nn == 0 {
        return Ok(eig);
    }

    let eps = f64::EPSILON;
    let low: isize = 0;
    let mut n: isize = nn as isize - 1;
    let mut exshift = 0.0_f64;
    let (mut p, mut q, mut r, mut s, mut z): (f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut x, mut y, mut w): (f64, f64, f64);

    // overall matrix scale for the deflation test
    let mut norm = 0.0_f64;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }
    if norm == 0.0 {
        return Ok(eig);
    }

    let mut iter = 0usize;
    while n >= low {
        let un = n as usize;

        // find a single small subdiagonal element
        let mut l = n;
        while l > low {
            let ul = l as usize;
            s = h[(ul - 1, ul - 1)].abs() + h[(ul, ul)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(ul, ul - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            h[(un, un)] += exshift;
            eig[un] = Complex64::new(h[(un, un)], 0.0);
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // two roots found
            w = h[(un, un - 1)] * h[(un - 1, un)];
            p = (h[(un - 1, un - 1)] - h[(un, un)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(un, un)] += exshift;
            h[(un - 1, un - 1)] += exshift;
            x = h[(un, un)];
            if q >= 0.0 {
                // real pair
                z = if p >= 0.0 { p + z } else { p - z };
                eig[un - 1] = Complex64::new(x + z, 0.0);
                eig[un] = if z != 0.0 {
                    Complex64::new(x - w / z, 0.0)
                } else {
                    eig[un - 1]
                };
            } else {
                // complex conjugate pair
                eig[un - 1] = Complex64::new(x + p, z);
                eig[un] = Complex64::new(x + p, -z);
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet: perform one double QR step
            let ul = l as usize;
            x = h[(un, un)];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[(un - 1, un - 1)];
                w = h[(un, un - 1)] * h[(un - 1, un)];
            }

            if iter == 10 || iter == 20 {
                // exceptional shift
                exshift += x;
                for i in (low as usize)..=un {
                    h[(i, i)] -= x;
                }
                s = h[(un, un - 1)].abs() + h[(un - 1, un - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NumericalFailure(format!(
                    "QR iteration failed to deflate eigenvalue {un} within 60 sweeps"
                )));
            }

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            while m >= l {
                let um = m as usize;
                z = h[(um, um)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(um + 1, um)] + h[(um, um + 1)];
                q = h[(um + 1, um + 1)] - z - r - s;
                r = h[(um + 2, um + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(um, um - 1)].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[(um - 1, um - 1)].abs()
                                + z.abs()
                                + h[(um + 1, um + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }
            let um = m as usize;
            for i in (um + 2)..=un {
                h[(i, i - 2)] = 0.0;
                if i > um + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..n and columns m..n
            for k in um..un {
                let notlast = k != un - 1;
                if k != um {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != um {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    // row modification
                    for j in k..=un {
                        let mut pp = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            pp += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= pp * z;
                        }
                        h[(k, j)] -= pp * x;
                        h[(k + 1, j)] -= pp * y;
                    }

                    // column modification
                    let i_hi = un.min(k + 3);
                    for i in ul..=i_hi {
                        let mut pp = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            pp += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= pp * r;
                        }
                        h[(i, k)] -= pp;
                        h[(i, k + 1)] -= pp * q;
                    }
                }
            }
        }
    }
    Ok(eig)
}

/// All eigenvalues of a real square matrix, sorted by descending magnitude
/// (ties broken by real part, then imaginary part, for a deterministic order).
pub fn eigenvalues(a: &Array2<f64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NumericalFailure(format!(
            "eigenvalues need a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if !a.iter().all(|v| v.is_finite()) {
        return Err(Error::NumericalFailure(
            "matrix contains non-finite entries".into(),
        ));
    }
    let mut work = a.clone();
    balance(&mut work);
    to_hessenberg(&mut work);
    let mut eig = hqr_eigenvalues(&mut work)?;
    sort_eigenvalues(&mut eig);
    Ok(eig)
}

/// Descending (|lambda|, re, im) order.
pub fn sort_eigenvalues(eig: &mut [Complex64]) {
    eig.sort_by(|a, b| {
        (b.norm(), b.re, b.im)
            .partial_cmp(&(a.norm(), a.re, a.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lu_solves_small_system() {
        let a = array![[2.0, 1.0], [1.0, 3.0]];
        let x = lu_solve(&a, &[5.0, 10.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn lu_detects_singular() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        assert!(lu_solve(&a, &[1.0, 2.0]).is_none());
    }

    #[test]
    fn infinity_norm_is_max_abs_row_sum() {
        let a = array![[1.0, -2.0], [3.0, 0.5]];
        assert_eq!(infinity_norm(&a), 3.5);
        let id: Array2<f64> = Array2::eye(4);
        assert_eq!(infinity_norm(&id), 1.0);
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let a = Array2::from_diag(&ndarray::arr1(&[0.2, -0.7, 0.5]));
        let eig = eigenvalues(&a).unwrap();
        let mags: Vec<f64> = eig.iter().map(|z| z.norm()).collect();
        assert_relative_eq!(mags[0], 0.7, epsilon = 1e-12);
        assert_relative_eq!(mags[1], 0.5, epsilon = 1e-12);
        assert_relative_eq!(mags[2], 0.2, epsilon = 1e-12);
    }

    #[test]
    fn eigenvalues_of_rotation_are_complex_pair() {
        let t = 0.3_f64;
        let a = array![[t.cos(), -t.sin()], [t.sin(), t.cos()]];
        let eig = eigenvalues(&a).unwrap();
        assert_relative_eq!(eig[0].re, t.cos(), epsilon = 1e-12);
        assert_relative_eq!(eig[0].im.abs(), t.sin(), epsilon = 1e-12);
        assert_relative_eq!(eig[0].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigenvalues_match_nalgebra_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[1usize, 2, 3, 5, 8, 13, 21, 40, 64] {
            for _ in 0..4 {
                let a = Array2::from_shape_fn((n, n), |_| rng.random_range(-2.0..2.0));
                let mut mine = eigenvalues(&a).unwrap();
                let na = nalgebra::DMatrix::from_fn(n, n, |i, j| a[(i, j)]);
                let mut theirs: Vec<Complex64> = na
                    .complex_eigenvalues()
                    .iter()
                    .map(|z| Complex64::new(z.re, z.im))
                    .collect();
                sort_eigenvalues(&mut mine);
                sort_eigenvalues(&mut theirs);
                for (m, t) in mine.iter().zip(&theirs) {
                    assert!(
                        (m - t).norm() < 1e-7 * (1.0 + t.norm()),
                        "n={n}: {m} vs {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalue_magnitude_never_exceeds_infinity_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(2..30);
            let a = Array2::from_shape_fn((n, n), |_| rng.random_range(-1.5..1.5));
            let rho = eigenvalues(&a)
                .unwrap()
                .iter()
                .map(|z| z.norm())
                .fold(0.0_f64, f64::max);
            assert!(rho <= infinity_norm(&a) + 1e-9);
        }
    }

    #[test]
    fn defective_jordan_block_converges() {
        // 4x4 Jordan block with eigenvalue 0.9: QR should still deflate.
        let mut a = Array2::zeros((4, 4));
        for i in 0..4 {
            a[(i, i)] = 0.9;
            if i + 1 < 4 {
                a[(i, i + 1)] = 1.0;
            }
        }
        let eig = eigenvalues(&a).unwrap();
        for z in eig {
            // defective eigenvalue accuracy degrades to ~eps^(1/4)
            assert!((z - Complex64::new(0.9, 0.0)).norm() < 1e-3);
        }
    }
}
