//! Complex Schur decomposition `A = Q T Q*` with `Q` unitary and `T` upper
//! triangular.
//!
//! Householder reduction to Hessenberg form followed by single-shift QR
//! sweeps with Wilkinson shifts and deflation. Sizes here are at most a few
//! dozen, so the explicit-shift variant is plenty.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Iteration budget per eigenvalue before giving up.
const ITERS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct Schur {
    pub unitary: ComplexMatrix,
    pub triangular: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.triangular.diagonal()
    }

    /// Frobenius norm of the strictly upper triangle of `T`.
    pub fn departure(&self) -> f64 {
        let t = &self.triangular;
        let n = t.rows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                acc += t[(i, j)].norm_sqr();
            }
        }
        acc.sqrt()
    }
}

/// Returns `None` if the QR iteration does not converge.
pub fn schur(a: &ComplexMatrix) -> Option<Schur> {
    assert!(a.is_square(), "schur needs a square matrix");
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);

    hessenberg(&mut h, &mut q);
    qr_iterate(&mut h, &mut q)?;

    // clean the strictly lower part, which is roundoff by now
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Some(Schur {
        unitary: q,
        triangular: h,
    })
}

fn hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0] == ZERO {
            ONE
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2 v v*) H (I - 2 v v*)
        let off = k + 1;
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(off + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(off + i, j)] -= 2.0 * vi * dot;
            }
        }
        for mat in [&mut *h, &mut *q] {
            for i in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(j, vj)| mat[(i, off + j)] * vj)
                    .sum();
                for (j, vj) in v.iter().enumerate() {
                    mat[(i, off + j)] -= 2.0 * dot * vj.conj();
                }
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Givens rotation `G = [[c, -conj(s)], [s, c]]` (real `c`) such that
/// `G^* [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b / bn);
    }
    let r = an.hypot(bn);
    (an / r, b * (a / an).conj() / r)
}

fn qr_iterate(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Option<()> {
    let n = h.rows();
    if n == 1 {
        return Some(());
    }
    let norm = h.frobenius_norm();
    if norm == 0.0 {
        return Some(());
    }
    let small = f64::EPSILON * norm;

    let mut hi = n - 1;
    let mut iters = 0usize;
    let budget = ITERS_PER_EIGENVALUE * n;
    let mut since_deflation = 0usize;

    while hi > 0 {
        // locate the active block [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let scale = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * scale || sub <= small {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        iters += 1;
        since_deflation += 1;
        if iters > budget {
            return None;
        }

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        qr_step(h, q, lo, hi, shift);
    }
    Some(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (m1, m2) = (mid + disc, mid - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// One explicit-shift QR step on the active block `[lo, hi]`, applied as a
/// similarity to the full matrix so that `Q` keeps accumulating.
fn qr_step(h: &mut ComplexMatrix, q: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    let n = h.rows();
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        // rows k, k+1 <- G^* rows
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        h[(k + 1, k)] = ZERO;
        rots.push((k, c, s));
    }
    for &(k, c, s) in &rots {
        // columns k, k+1 <- cols G
        let top = (k + 2).min(hi) + 1;
        for i in 0..top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = c * x + s * y;
            h[(i, k + 1)] = -s.conj() * x + c * y;
        }
        for i in 0..n {
            let x = q[(i, k)];
            let y = q[(i, k + 1)];
            q[(i, k)] = c * x + s * y;
            q[(i, k + 1)] = -s.conj() * x + c * y;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}
