//! Roots of complex polynomials from the eigenvalues of the balanced companion
//! matrix, followed by Newton polishing.

// float math for no_std; std builds resolve to the inherent methods
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::{Error, Result};

const MAX_SWEEPS_PER_ROOT: usize = 60;
const NEWTON_STEPS: usize = 2;

/// All roots of `coeffs[0] z^n + coeffs[1] z^(n-1) + ... + coeffs[n]`.
///
/// The leading coefficient must be non-zero. Roots are returned in no
/// particular order, repeated according to multiplicity.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[0];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidWeights("leading polynomial coefficient is zero"));
    }
    let monic: Vec<Complex64> = coeffs[1..].iter().map(|c| c / lead).collect();
    let mut found = if degree == 1 {
        vec![-monic[0]]
    } else {
        let mut h = companion(&monic);
        balance(&mut h, degree);
        hessenberg_eigenvalues(&mut h, degree)?
    };
    for z in &mut found {
        *z = polish(coeffs, *z);
    }
    Ok(found)
}

/// Upper-Hessenberg companion matrix, row-major: first row holds -a_1..-a_n.
fn companion(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len();
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, a) in monic.iter().enumerate() {
        h[j] = -a;
    }
    for i in 1..n {
        h[i * n + i - 1] = Complex64::new(1.0, 0.0);
    }
    h
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Parlett-Reinsch diagonal balancing with powers of two; keeps the Hessenberg
/// structure and the spectrum.
fn balance(h: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    let sqr = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(h[j * n + i]);
                    r += l1(h[i * n + j]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqr;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqr;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    h[i * n + j] *= g;
                    h[j * n + i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Shifted QR iteration with Givens rotations on an upper Hessenberg matrix.
fn hessenberg_eigenvalues(h: &mut [Complex64], n: usize) -> Result<Vec<Complex64>> {
    let at = |r: usize, c: usize| r * n + c;
    let scale = h.iter().fold(0.0f64, |m, z| m.max(l1(*z)));
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = h[at(0, 0)];
            break;
        }
        // deflation point
        let mut lo = hi;
        while lo > 0 {
            let mut s = l1(h[at(lo, lo)]) + l1(h[at(lo - 1, lo - 1)]);
            if s == 0.0 {
                s = scale;
            }
            if l1(h[at(lo, lo - 1)]) <= f64::EPSILON * s {
                h[at(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[at(hi, hi)];
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_ROOT {
            return Err(Error::RootFinding { degree: n });
        }
        let shift = if sweeps % 11 == 10 {
            // exceptional shift
            h[at(hi, hi)] + Complex64::new(0.75, 0.5) * l1(h[at(hi, hi - 1)])
        } else {
            wilkinson_shift(h[at(hi - 1, hi - 1)], h[at(hi - 1, hi)], h[at(hi, hi - 1)], h[at(hi, hi)])
        };
        for k in lo..=hi {
            h[at(k, k)] -= shift;
        }
        rotations.clear();
        for k in lo..hi {
            let x = h[at(k, k)];
            let y = h[at(k + 1, k)];
            let (c, s) = givens(x, y);
            for col in k..=hi {
                let a = h[at(k, col)];
                let b = h[at(k + 1, col)];
                h[at(k, col)] = a * c + s * b;
                h[at(k + 1, col)] = -s.conj() * a + b * c;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for row in lo..=(k + 1).min(hi) {
                let a = h[at(row, k)];
                let b = h[at(row, k + 1)];
                h[at(row, k)] = a * c + b * s.conj();
                h[at(row, k + 1)] = -a * s + b * c;
            }
        }
        for k in lo..=hi {
            h[at(k, k)] += shift;
        }
    }
    Ok(eig)
}

/// Rotation (c real, s complex) with [[c, s], [-conj(s), c]] (x, y)^T = (r, 0)^T.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let r = ax.hypot(y.norm());
    if r == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// Eigenvalue of [[a, b], [c, d]] closer to d.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// p(z) and p'(z) by Horner, coefficients in descending order.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Newton steps that are only kept when they reduce the residual. Roots
/// outside the unit disk are polished as roots w = 1/z of the reversed
/// polynomial.
fn polish(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    if z.norm() <= 1.0 {
        newton(coeffs, z)
    } else {
        let reversed: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        let w = newton(&reversed, z.inv());
        if w.norm() == 0.0 {
            z
        } else {
            w.inv()
        }
    }
}

fn newton(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut p, mut dp) = horner(coeffs, z);
    for _ in 0..NEWTON_STEPS {
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let (cp, cdp) = horner(coeffs, candidate);
        if !(cp.norm() < p.norm()) {
            break;
        }
        z = candidate;
        p = cp;
        dp = cdp;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn expand(rts: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for r in rts {
            let mut next = vec![c(0.0, 0.0); p.len() + 1];
            for (i, a) in p.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a * r;
            }
            p = next;
        }
        p
    }

    fn assert_same_roots(found: &[Complex64], want: &[Complex64], tol: f64) {
        assert_eq!(found.len(), want.len());
        let mut used = vec![false; want.len()];
        for f in found {
            let (idx, dist) = want
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, w)| (i, (f - w).norm()))
                .fold((usize::MAX, f64::INFINITY), |best, x| if x.1 < best.1 { x } else { best });
            assert!(dist < tol, "root {f} off by {dist}");
            used[idx] = true;
        }
    }

    #[test]
    fn linear_and_quadratic() {
        assert_same_roots(&roots(&[c(2.0, 0.0), c(-4.0, 2.0)]).unwrap(), &[c(2.0, -1.0)], 1e-15);
        let want = [c(1.0, 1.0), c(-3.0, 0.5)];
        assert_same_roots(&roots(&expand(&want)).unwrap(), &want, 1e-13);
    }

    #[test]
    fn spread_magnitudes() {
        let want = [c(1e-4, 0.0), c(0.0, 3.0), c(-250.0, 10.0), c(0.5, -0.5), c(7.0, 7.0), c(0.0, 0.0)];
        let coeffs = expand(&want);
        let found = roots(&coeffs).unwrap();
        for f in &found {
            let best = want.iter().map(|w| (f - w).norm() / w.norm().max(1.0)).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "{f}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let n = 24;
        let mut coeffs = vec![c(0.0, 0.0); n + 1];
        coeffs[0] = c(1.0, 0.0);
        coeffs[n] = c(-1.0, 0.0);
        let found = roots(&coeffs).unwrap();
        let want: Vec<_> =
            (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * k as f64 / n as f64)).collect();
        assert_same_roots(&found, &want, 1e-12);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(roots(&[c(3.0, 0.0)]).unwrap().is_empty());
        assert!(roots(&[c(0.0, 0.0), c(1.0, 0.0)]).is_err());
    }
}
