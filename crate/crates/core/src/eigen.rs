//! Cyclic Jacobi eigenvalues for small dense matrices.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a real symmetric `N×N` matrix, ascending.
///
/// Only the upper triangle is trusted; the lower one is overwritten from it.
pub fn symmetric_eigenvalues<const N: usize>(mut a: [[f64; N]; N]) -> [f64; N] {
    for i in 0..N {
        for j in 0..i {
            a[i][j] = a[j][i];
        }
    }
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return [0.0; N];
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (i + 1..N).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() <= f64::EPSILON * scale * 1e-2 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }

    let mut eig = [0.0; N];
    for (i, e) in eig.iter_mut().enumerate() {
        *e = a[i][i];
    }
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues of a 4×4 Hermitian matrix, ascending.
///
/// Uses the real embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is the
/// Hermitian spectrum with every eigenvalue doubled.
pub fn hermitian_eigenvalues_4(h: &[[Complex64; 4]; 4]) -> [f64; 4] {
    let mut emb = [[0.0; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let z = h[i][j];
            emb[i][j] = z.re;
            emb[i + 4][j + 4] = z.re;
            emb[i][j + 4] = -z.im;
            emb[i + 4][j] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(emb);
    [doubled[0], doubled[2], doubled[4], doubled[6]]
}
