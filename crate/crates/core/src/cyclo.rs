//! Exact arithmetic in the cyclotomic field `Q(z)`, `z` a primitive `r`-th root of unity.
//!
//! Elements are stored as rational coefficient vectors of length `phi(r)`,
//! always reduced modulo the cyclotomic polynomial `Phi_r`. Because the
//! reduction is eager, structural equality is field equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("root order must be positive")]
    ZeroOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: Q(z_{left}) vs Q(z_{right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("cannot parse cyclotomic literal {0:?}: {1}")]
    Parse(String, String),
}

/// Euler's totient.
pub fn euler_phi(r: u32) -> usize {
    let mut n = r;
    let mut result = r;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

type IntPoly = Vec<i64>;

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of `Phi_r`, lowest degree first.
pub fn cyclotomic_poly(r: u32) -> Arc<IntPoly> {
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&r) {
        return Arc::clone(p);
    }
    // x^r - 1 divided by every Phi_d with d | r, d < r.
    let mut num: IntPoly = vec![0; r as usize + 1];
    num[0] = -1;
    num[r as usize] = 1;
    for d in 1..r {
        if r % d == 0 {
            let den = cyclotomic_poly(d);
            num = int_poly_exact_div(&num, &den);
        }
    }
    let arc = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(r, Arc::clone(&arc));
    arc
}

fn int_poly_exact_div(num: &[i64], den: &[i64]) -> IntPoly {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// An exact element of `Q(z_r)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNum {
    r: u32,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycloNum {
    pub fn zero(r: u32) -> Self {
        assert!(r > 0, "root order must be positive");
        CycloNum {
            r,
            coeffs: vec![BigRational::zero(); euler_phi(r)],
        }
    }

    pub fn one(r: u32) -> Self {
        Self::from_rational(r, BigRational::one())
    }

    pub fn from_int(r: u32, n: i64) -> Self {
        Self::from_rational(r, rat(n))
    }

    pub fn from_rational(r: u32, q: BigRational) -> Self {
        let mut z = Self::zero(r);
        z.coeffs[0] = q;
        z
    }

    pub fn from_frac(r: u32, num: i64, den: i64) -> Self {
        Self::from_rational(r, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds an element from an arbitrary-length polynomial in `z`.
    pub fn from_poly(r: u32, poly: Vec<BigRational>) -> Self {
        assert!(r > 0, "root order must be positive");
        CycloNum {
            r,
            coeffs: reduce(r, poly),
        }
    }

    /// `z^e` for any integer exponent.
    pub fn zeta_pow(r: u32, e: i64) -> Result<Self, CycloError> {
        if r == 0 {
            return Err(CycloError::ZeroOrder);
        }
        let e = e.rem_euclid(r as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Ok(Self::from_poly(r, poly))
    }

    /// Infallible `z^e` for callers that already hold a valid order.
    pub fn root(r: u32, e: i64) -> Self {
        Self::zeta_pow(r, e).expect("positive root order")
    }

    pub fn order(&self) -> u32 {
        self.r
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), CycloError> {
        if self.r == other.r {
            Ok(())
        } else {
            Err(CycloError::FieldMismatch {
                left: self.r,
                right: other.r,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        Ok(CycloNum {
            r: self.r,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        Ok(CycloNum {
            r: self.r,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.r));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_poly(self.r, prod))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloNum {
            r: self.r,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Phi_r`.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.r, q.recip()));
        }
        let modulus: Vec<BigRational> = cyclotomic_poly(self.r).iter().map(|&c| rat(c)).collect();
        // Invariant: s * a == r0 (mod Phi_r).
        let (mut r0, mut r1) = (trim(self.coeffs.clone()), modulus);
        let (mut s0, mut s1) = (vec![BigRational::one()], Vec::<BigRational>::new());
        while !r1.is_empty() {
            let (q, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Phi_r is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let s: Vec<BigRational> = s0.into_iter().map(|x| x * &c).collect();
        Ok(Self::from_poly(self.r, s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.r);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Floating-point evaluation at `exp(2 pi i / r)`; debug output only.
    pub fn to_complex(&self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI / self.r as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let a = theta * k as f64;
            (re + v * a.cos(), im + v * a.sin())
        })
    }

    /// Parses the text format `a0 + a1*z + a2*z^2 ...`; exponents may be any integer.
    pub fn parse(r: u32, text: &str) -> Result<Self, CycloError> {
        if r == 0 {
            return Err(CycloError::ZeroOrder);
        }
        let err = |msg: &str| CycloError::Parse(text.to_string(), msg.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty literal"));
        }
        // Split into signed terms; a sign directly after '^' or at the start belongs to the term.
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !matches!(prev, Some('^') | Some('+') | Some('-')) {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        terms.push(cur);

        let mut acc = Self::zero(r);
        for term in terms {
            let (neg, body) = strip_signs(&term);
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef_str, exp) = match body.find('z') {
                None => (body, None),
                Some(pos) => {
                    let coef = body[..pos].trim_end_matches('*');
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else if let Some(ex) = rest.strip_prefix('^') {
                        ex.parse::<i64>().map_err(|_| err("bad exponent"))?
                    } else {
                        return Err(err("unexpected text after z"));
                    };
                    (coef, Some(e))
                }
            };
            let mut coef = if coef_str.is_empty() {
                if exp.is_none() {
                    return Err(err("empty term"));
                }
                BigRational::one()
            } else {
                parse_rational(coef_str).ok_or_else(|| err("bad rational coefficient"))?
            };
            if neg {
                coef = -coef;
            }
            let base = Self::zeta_pow(r, exp.unwrap_or(0))?;
            acc += &base.scale(&coef);
        }
        Ok(acc)
    }
}

fn strip_signs(term: &str) -> (bool, &str) {
    let mut neg = false;
    let mut rest = term;
    loop {
        if let Some(t) = rest.strip_prefix('-') {
            neg = !neg;
            rest = t;
        } else if let Some(t) = rest.strip_prefix('+') {
            rest = t;
        } else {
            return (neg, rest);
        }
    }
}

/// Parses `p` or `p/q` with optional sign; no decimals.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn reduce(r: u32, poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = euler_phi(r);
    let mut p = poly;
    if p.len() > phi {
        let modulus = cyclotomic_poly(r);
        for k in (phi..p.len()).rev() {
            let c = std::mem::take(&mut p[k]);
            if c.is_zero() {
                continue;
            }
            // z^k = z^(k-phi) * z^phi and z^phi = -sum_{j<phi} m_j z^j.
            for (j, &m) in modulus[..phi].iter().enumerate() {
                if m != 0 {
                    p[k - phi + j] -= &c * rat(m);
                }
            }
        }
        p.truncate(phi);
    }
    p.resize(phi, BigRational::zero());
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut q = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
        rem = trim(rem);
    }
    (trim(q), rem)
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*z", format_rational(c))?,
                _ => write!(f, "{}*z^{}", format_rational(c), k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [Q(z_{})]", self, self.r)
    }
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        self.check(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        self.check(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&CycloNum> for CycloNum {
    fn mul_assign(&mut self, rhs: &CycloNum) {
        *self = &*self * rhs;
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(mut self) -> CycloNum {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_and_cyclotomic_polys() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_pow_basics() {
        assert_eq!(CycloNum::zeta_pow(4, 2).unwrap(), CycloNum::from_int(4, -1));
        for r in 1..9 {
            assert!(CycloNum::zeta_pow(r, 0).unwrap().is_one());
        }
        let s = CycloNum::root(3, 1) + CycloNum::root(3, 2);
        assert_eq!(s, CycloNum::from_int(3, -1));
        assert_eq!(CycloNum::zeta_pow(0, 1), Err(CycloError::ZeroOrder));
        assert_eq!(CycloNum::root(5, -1), CycloNum::root(5, 4));
    }

    #[test]
    fn small_field_identities() {
        let i = CycloNum::root(4, 1);
        assert_eq!(i.inv().unwrap(), -&i);
        assert!((CycloNum::root(3, 1) * CycloNum::root(3, 2)).is_one());
        // r = 2: z is -1.
        assert_eq!(CycloNum::root(2, 1), CycloNum::from_int(2, -1));
        assert_eq!(CycloNum::zero(7).inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn root_sums() {
        for r in 1..=8u32 {
            for d in 0..(2 * r as i64) {
                let mut acc = CycloNum::zero(r);
                for m in 0..r as i64 {
                    acc += &CycloNum::root(r, m * d);
                }
                let expect = if d % r as i64 == 0 { r as i64 } else { 0 };
                assert_eq!(acc, CycloNum::from_int(r, expect), "r={r} d={d}");
            }
        }
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = CycloNum::one(3);
        let b = CycloNum::one(4);
        assert_eq!(a.try_add(&b), Err(CycloError::FieldMismatch { left: 3, right: 4 }));
        assert!(a.try_div(&b).is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = CycloNum::parse(5, "1/2 - 3*z^2 + z^4").unwrap();
        assert_eq!(CycloNum::parse(5, &x.to_string()).unwrap(), x);
        assert_eq!(CycloNum::parse(4, "z^2+1").unwrap(), CycloNum::zero(4));
        assert_eq!(CycloNum::parse(3, "-2/3").unwrap(), CycloNum::from_frac(3, -2, 3));
        assert_eq!(CycloNum::parse(6, "z^-1").unwrap(), CycloNum::root(6, 5));
        assert_eq!(CycloNum::zero(3).to_string(), "0");
        assert!(CycloNum::parse(3, "1.5").is_err());
        assert!(CycloNum::parse(3, "").is_err());
        assert!(CycloNum::parse(3, "2*w").is_err());
    }

    #[test]
    fn complex_printer() {
        let (re, im) = CycloNum::root(4, 1).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }
}
