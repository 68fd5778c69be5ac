//! Eigenvalues of Hermitian matrices by the cyclic complex Jacobi method.
//!
//! Used for singular values (through the Gram matrix). Jacobi always
//! converges for Hermitian input, so the routine is infallible.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Real eigenvalues of a Hermitian matrix, in no particular order.
///
/// Only the Hermitian part of `a` is meaningful; the strictly lower triangle
/// is assumed to mirror the upper one.
pub fn eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();

    let total = m.frobenius_norm();
    if total == 0.0 {
        return vec![0.0; n];
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * total * 1e-2 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, p, q);
            }
        }
    }

    (0..n).map(|i| m[(i, i)].re).collect()
}

/// One Jacobi rotation annihilating `m[p][q]` and `m[q][p]`.
fn rotate(m: &mut ComplexMatrix, p: usize, q: usize) {
    let g = m[(p, q)];
    let r = g.norm();
    if r == 0.0 {
        return;
    }
    let phase = g / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = m.rows();
    let pc = phase.conj();

    // columns: M <- M J
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c - akq * pc * s;
        m[(k, q)] = akp * s + akq * pc * c;
    }
    // rows: M <- J^* M
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c - aqk * phase * s;
        m[(q, k)] = apk * s + aqk * phase * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn pauli_y_has_eigenvalues_plus_minus_one() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let ev = sorted(eigenvalues(&y));
        assert!((ev[0] + 1.0).abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        // Hermitian 3x3 with complex off-diagonals
        let z = |re, im| Complex64::new(re, im);
        let h = ComplexMatrix::new(
            3,
            3,
            vec![
                z(2.0, 0.0),
                z(1.0, 1.0),
                z(0.0, -0.5),
                z(1.0, -1.0),
                z(-1.0, 0.0),
                z(0.25, 0.0),
                z(0.0, 0.5),
                z(0.25, 0.0),
                z(3.0, 0.0),
            ],
        )
        .unwrap();
        let ev = eigenvalues(&h);
        let trace: f64 = ev.iter().sum();
        assert!((trace - 4.0).abs() < 1e-13);
        let fro2: f64 = ev.iter().map(|x| x * x).sum();
        assert!((fro2 - h.frobenius_norm().powi(2)).abs() < 1e-12);
    }
}
