//! Univariate polynomials over `Q(z_r)`: characteristic polynomials and the
//! roots that lie in the field.
//!
//! Roots are located numerically in every complex embedding, lifted back to
//! the field by rational reconstruction, and only kept after an exact check,
//! so a reported root is always a root. A root can be missed (huge heights,
//! bad conditioning); callers see that as an unsplit polynomial.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::{euler_phi, CycloNum};
use crate::linalg::Matrix;

/// Coefficients from the constant term upwards.
pub type Poly = Vec<CycloNum>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(CycloNum::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[CycloNum]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[CycloNum], x: &CycloNum) -> CycloNum {
    p.iter().rev().fold(CycloNum::zero(x.order()), |acc, c| &(&acc * x) + c)
}

pub fn derivative(p: &[CycloNum]) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&BigRational::from_integer(BigInt::from(k))))
        .collect()
}

/// Quotient and remainder; `b` must be nonzero.
pub fn div_rem(a: &[CycloNum], b: &[CycloNum]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut rem = trim(a.to_vec());
    let r = b[db].order();
    let mut quo = vec![CycloNum::zero(r); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] * &lead_inv;
        for (k, bk) in b.iter().enumerate().take(db + 1) {
            rem[dr - db + k] -= &(&c * bk);
        }
        quo[dr - db] = c;
        rem = trim(rem);
    }
    (trim(quo), rem)
}

pub fn monic(p: &[CycloNum]) -> Poly {
    match degree(p) {
        None => Vec::new(),
        Some(d) => {
            let inv = p[d].inv().unwrap();
            p[..=d].iter().map(|c| c * &inv).collect()
        }
    }
}

pub fn gcd(a: &[CycloNum], b: &[CycloNum]) -> Poly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while degree(&y).is_some() {
        let (_, rem) = div_rem(&x, &y);
        x = y;
        y = rem;
    }
    monic(&x)
}

/// `det(x I - A)` by the Faddeev-LeVerrier recursion.
pub fn charpoly(a: &Matrix) -> Poly {
    let n = a.rows();
    let r = a.field();
    let mut coeffs = vec![CycloNum::zero(r); n + 1];
    coeffs[n] = CycloNum::one(r);
    let mut m = Matrix::zeros(r, n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&Matrix::scalar(r, n, &coeffs[n + 1 - k]));
        let am = a.mul(&m);
        let mut tr = CycloNum::zero(r);
        for i in 0..n {
            tr += am.get(i, i);
        }
        coeffs[n - k] = -tr.scale(&BigRational::new(BigInt::from(1), BigInt::from(k)));
    }
    coeffs
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn embed(c: &CycloNum, power: u32) -> Complex64 {
    let r = c.order();
    c.coeffs()
        .iter()
        .enumerate()
        .map(|(j, q)| {
            let angle = 2.0 * std::f64::consts::PI * ((power as u64 * j as u64) % r as u64) as f64 / r as f64;
            Complex64::from_polar(rational_to_f64(q), angle)
        })
        .sum()
}

/// Durand-Kerner on a polynomial with complex coefficients.
fn complex_roots(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    let lead = p[d];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * bound.min(10.0)).collect();
    let value = |x: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + c);
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = value(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * bound {
            break;
        }
    }
    z
}

/// Best rational approximation with denominator at most `max_den`.
fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-12 || (x - h1 as f64 / k1 as f64).abs() < 1e-9 * x.abs().max(1.0) {
            break;
        }
        v = 1.0 / frac;
    }
    (k1 != 0).then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

fn solve_real(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Exponents `e` giving one embedding `z -> z^e` per complex-conjugate pair.
fn embedding_exponents(r: u32) -> Vec<u32> {
    if r <= 2 {
        return vec![1];
    }
    (1..r).filter(|&e| gcd_u32(e, r) == 1 && 2 * e < r).collect()
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Candidate field elements from one chosen complex root per embedding.
fn reconstruct(r: u32, exps: &[u32], chosen: &[Complex64]) -> Option<CycloNum> {
    let phi = euler_phi(r);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (&e, z) in exps.iter().zip(chosen) {
        let basis: Vec<Complex64> = (0..phi)
            .map(|j| {
                Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * ((e as usize * j) % r as usize) as f64 / r as f64,
                )
            })
            .collect();
        rows.push(basis.iter().map(|c| c.re).collect());
        rhs.push(z.re);
        if r > 2 {
            rows.push(basis.iter().map(|c| c.im).collect());
            rhs.push(z.im);
        } else if z.im.abs() > 1e-6 * z.norm().max(1.0) {
            return None;
        }
    }
    let sol = solve_real(rows, rhs)?;
    let coeffs = sol
        .iter()
        .map(|&x| rationalize(x, 1_000_000))
        .collect::<Option<Vec<_>>>()?;
    Some(CycloNum::from_poly(r, coeffs))
}

/// Distinct roots of a squarefree polynomial that lie in `Q(z_r)`.
fn squarefree_field_roots(p: &[CycloNum]) -> Vec<CycloNum> {
    let Some(d) = degree(p) else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    let r = p[0].order();
    if d == 1 {
        return vec![-(&p[0] * &p[1].inv().unwrap())];
    }
    let exps = embedding_exponents(r);
    let per_embedding: Vec<Vec<Complex64>> = exps
        .iter()
        .map(|&e| complex_roots(&p[..=d].iter().map(|c| embed(c, e)).collect::<Vec<_>>()))
        .collect();
    let mut found: Vec<CycloNum> = Vec::new();
    let mut choice = vec![0usize; exps.len()];
    loop {
        let chosen: Vec<Complex64> = choice.iter().enumerate().map(|(k, &i)| per_embedding[k][i]).collect();
        if let Some(x) = reconstruct(r, &exps, &chosen) {
            if !found.contains(&x) && eval(p, &x).is_zero() {
                found.push(x);
                if found.len() == d {
                    break;
                }
            }
        }
        // Odometer over one root per embedding.
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < d {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            break;
        }
    }
    found
}

/// Roots in `Q(z_r)` with multiplicity, and whether they account for the
/// full degree (the polynomial splits).
pub fn field_roots(p: &[CycloNum]) -> (Vec<(CycloNum, usize)>, bool) {
    let p = trim(p.to_vec());
    let Some(d) = degree(&p) else {
        return (Vec::new(), false);
    };
    let g = gcd(&p, &derivative(&p));
    let (squarefree, _) = div_rem(&p, &g);
    let roots = squarefree_field_roots(&squarefree);
    let r = p[0].order();
    let mut out = Vec::new();
    let mut total = 0;
    for x in roots {
        let lin = vec![-x.clone(), CycloNum::one(r)];
        let mut rest = p.clone();
        let mut mult = 0;
        loop {
            let (q, rem) = div_rem(&rest, &lin);
            if degree(&rem).is_some() {
                break;
            }
            rest = q;
            mult += 1;
        }
        total += mult;
        out.push((x, mult));
    }
    (out, total == d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(r: u32, n: i64) -> CycloNum {
        CycloNum::from_int(r, n)
    }

    fn from_roots(r: u32, roots: &[CycloNum]) -> Poly {
        let mut p = vec![CycloNum::one(r)];
        for x in roots {
            let mut next = vec![CycloNum::zero(r); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= &(a * x);
            }
            p = next;
        }
        p
    }

    #[test]
    fn charpoly_of_companion_shape() {
        let a = Matrix::from_rows(3, vec![vec![c(3, 2), c(3, 1)], vec![c(3, 0), c(3, 5)]]);
        assert_eq!(charpoly(&a), vec![c(3, 10), c(3, -7), c(3, 1)]);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let r = 2;
        let roots = [c(r, 2), c(r, 2), CycloNum::from_frac(r, -3, 2), c(r, 0)];
        let (found, split) = field_roots(&from_roots(r, &roots));
        assert!(split);
        assert!(found.contains(&(c(r, 2), 2)));
        assert!(found.contains(&(CycloNum::from_frac(r, -3, 2), 1)));
    }

    #[test]
    fn cyclotomic_roots() {
        for r in [3u32, 4, 5, 8] {
            let roots: Vec<CycloNum> = (0..r as i64)
                .map(|e| &CycloNum::root(r, e) + &CycloNum::from_frac(r, e, 3))
                .collect();
            let (found, split) = field_roots(&from_roots(r, &roots));
            assert!(split, "r = {r}");
            assert_eq!(found.len(), r as usize);
        }
    }

    #[test]
    fn irreducible_factor_does_not_split() {
        // x^2 - 2 has no root in Q(i)
        let r = 4;
        let (found, split) = field_roots(&[c(r, -2), c(r, 0), c(r, 1)]);
        assert!(found.is_empty());
        assert!(!split);
        // x^2 + 1 splits there
        let (found, split) = field_roots(&[c(r, 1), c(r, 0), c(r, 1)]);
        assert!(split);
        assert_eq!(found.len(), 2);
    }
}
