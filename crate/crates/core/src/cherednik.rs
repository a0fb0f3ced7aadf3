//! The rational Cherednik algebra `H(G,k)` of `G = G(r,1,n)` in PBW normal form
//! `x^a g y^b`, with `x` in `V*` (basis `alpha_i`) and `y` in `V` (basis `v_i`).
//!
//! Products are normalized by rewriting `g x -> g(x) g`, `g y -> g(y) g` and
//! `y x -> x y + [y, x]`. Every rewrite lowers the number of `y`-before-`x`
//! letters or the total degree, so the recursion terminates without a
//! completion step.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cyclo::CycloNum;
use crate::refl_group::{GroupElem, Perm};

/// Parameter function: `k_t` on the `theta_i^t` (t = 1..r-1) and `kbar0` on every `s_{u,v}^{[m]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub r: u32,
    pub n: usize,
    pub k: Vec<CycloNum>,
    pub kbar0: CycloNum,
}

impl Params {
    pub fn new(r: u32, n: usize, k: Vec<CycloNum>, kbar0: CycloNum) -> Self {
        assert_eq!(k.len(), r.saturating_sub(1) as usize, "need k_1..k_(r-1)");
        Params { r, n, k, kbar0 }
    }

    pub fn zero(r: u32, n: usize) -> Self {
        Self::new(r, n, vec![CycloNum::zero(r); r as usize - 1], CycloNum::zero(r))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CherMono {
    pub x: Vec<u32>,
    pub g: GroupElem,
    pub y: Vec<u32>,
}

impl CherMono {
    pub fn degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.y.iter().sum::<u32>()
    }
}

/// A finite linear combination of PBW monomials; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct CherElem {
    r: u32,
    n: usize,
    terms: BTreeMap<CherMono, CycloNum>,
}

impl CherElem {
    pub fn zero(r: u32, n: usize) -> Self {
        CherElem {
            r,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(r: u32, mono: CherMono, c: CycloNum) -> Self {
        let mut e = Self::zero(r, mono.g.n());
        e.add_term(mono, c);
        e
    }

    pub fn scalar(r: u32, n: usize, c: CycloNum) -> Self {
        Self::group(GroupElem::identity(r, n)).scale(&c)
    }

    pub fn group(g: GroupElem) -> Self {
        let (r, n) = (g.r(), g.n());
        Self::monomial(
            r,
            CherMono {
                x: vec![0; n],
                g,
                y: vec![0; n],
            },
            CycloNum::one(r),
        )
    }

    /// `alpha_j` in `V*`.
    pub fn x(r: u32, n: usize, j: usize) -> Self {
        let mut x = vec![0; n];
        x[j] = 1;
        Self::monomial(
            r,
            CherMono {
                x,
                g: GroupElem::identity(r, n),
                y: vec![0; n],
            },
            CycloNum::one(r),
        )
    }

    /// `v_j` in `V`.
    pub fn y(r: u32, n: usize, j: usize) -> Self {
        let mut y = vec![0; n];
        y[j] = 1;
        Self::monomial(
            r,
            CherMono {
                x: vec![0; n],
                g: GroupElem::identity(r, n),
                y,
            },
            CycloNum::one(r),
        )
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<CherMono, CycloNum> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: CherMono, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &CherElem) -> CherElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CherElem) -> CherElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &CycloNum) -> CherElem {
        let mut out = Self::zero(self.r, self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Highest total `(x, y)`-degree present, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(CherMono::degree).max()
    }

    /// Terms of the given total degree.
    pub fn homogeneous_part(&self, d: u32) -> CherElem {
        CherElem {
            r: self.r,
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The group-algebra part, if the element has no `x` or `y` letters.
    pub fn as_group_algebra(&self) -> Option<BTreeMap<GroupElem, CycloNum>> {
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.degree() == 0 {
                    Some((m.g.clone(), c.clone()))
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Debug for CherElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c}) x{:?} {} y{:?}", m.x, m.g, m.y))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct CherTermJson<'a> {
    x: &'a [u32],
    g: &'a GroupElem,
    y: &'a [u32],
    c: &'a CycloNum,
}

impl Serialize for CherElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&CherTermJson {
                x: &m.x,
                g: &m.g,
                y: &m.y,
                c,
            })?;
        }
        seq.end()
    }
}

/// Group-algebra elements keyed by group element.
pub type GroupAlgebraElem = BTreeMap<GroupElem, CycloNum>;

/// The algebra `H(G,k)` with memoized `y^b x^c` normal forms.
pub struct Cherednik {
    params: Params,
    commutators: Vec<Vec<GroupAlgebraElem>>,
    yx_cache: Mutex<HashMap<(Vec<u32>, Vec<u32>), Arc<CherElem>>>,
}

/// Exponent of `z` picked up by `g(x^a)`: `g alpha_j = z^{-t_{w(j)}} alpha_{w(j)}`.
fn x_twist_exponent(g: &GroupElem, a: &[u32]) -> i64 {
    let w = g.perm();
    -a.iter()
        .enumerate()
        .map(|(j, &e)| e as i64 * g.torsion()[w.apply(j)] as i64)
        .sum::<i64>()
}

/// Exponent of `z` picked up by `g(y^b)`: `g v_j = z^{t_{w(j)}} v_{w(j)}`.
fn y_twist_exponent(g: &GroupElem, b: &[u32]) -> i64 {
    -x_twist_exponent(g, b)
}

impl Cherednik {
    pub fn new(params: Params) -> Self {
        let n = params.n;
        let commutators = (0..n)
            .map(|i| (0..n).map(|j| commutator_yx(i, j, &params)).collect())
            .collect();
        Cherednik {
            params,
            commutators,
            yx_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn r(&self) -> u32 {
        self.params.r
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn zero(&self) -> CherElem {
        CherElem::zero(self.r(), self.n())
    }

    pub fn one(&self) -> CherElem {
        CherElem::group(GroupElem::identity(self.r(), self.n()))
    }

    pub fn x(&self, j: usize) -> CherElem {
        CherElem::x(self.r(), self.n(), j)
    }

    pub fn y(&self, j: usize) -> CherElem {
        CherElem::y(self.r(), self.n(), j)
    }

    pub fn group(&self, g: &GroupElem) -> CherElem {
        CherElem::group(g.clone())
    }

    pub fn from_group_algebra(&self, a: &GroupAlgebraElem) -> CherElem {
        let mut out = self.zero();
        for (g, c) in a {
            out.add_term(
                CherMono {
                    x: vec![0; self.n()],
                    g: g.clone(),
                    y: vec![0; self.n()],
                },
                c.clone(),
            );
        }
        out
    }

    /// `[v_i, alpha_j]` as a group-algebra element.
    pub fn commutator(&self, i: usize, j: usize) -> &GroupAlgebraElem {
        &self.commutators[i][j]
    }

    pub fn multiply(&self, a: &CherElem, b: &CherElem) -> CherElem {
        let mut out = self.zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let coef = ca * cb;
                self.mono_mul_into(ma, mb, &coef, &mut out);
            }
        }
        out
    }

    pub fn multiply_all(&self, factors: &[&CherElem]) -> CherElem {
        factors.iter().fold(self.one(), |acc, f| self.multiply(&acc, f))
    }

    pub fn commutator_of(&self, a: &CherElem, b: &CherElem) -> CherElem {
        self.multiply(a, b).sub(&self.multiply(b, a))
    }

    /// `x^a g y^b * x^c h y^d`.
    fn mono_mul_into(&self, left: &CherMono, right: &CherMono, coef: &CycloNum, out: &mut CherElem) {
        let r = self.r();
        let middle = self.yx_normal(&left.y, &right.x);
        let h_inv = right.g.inverse();
        for (m, c) in &middle.terms {
            // x^a g x^e k y^f h y^d = x^{a + g.e} (g k h) y^{h^{-1}.f + d} up to roots of unity.
            let ex = x_twist_exponent(&left.g, &m.x) + y_twist_exponent(&h_inv, &m.y);
            let gx = left.g.perm().act_on_vec(&m.x);
            let hy = h_inv.perm().act_on_vec(&m.y);
            let x: Vec<u32> = left.x.iter().zip(&gx).map(|(p, q)| p + q).collect();
            let y: Vec<u32> = hy.iter().zip(&right.y).map(|(p, q)| p + q).collect();
            let g = left.g.mul(&m.g).mul(&right.g);
            let value = &(coef * c) * &CycloNum::root(r, ex);
            out.add_term(CherMono { x, g, y }, value);
        }
    }

    /// Normal form of `y^b x^c`.
    pub fn yx_normal(&self, b: &[u32], c: &[u32]) -> Arc<CherElem> {
        let key = (b.to_vec(), c.to_vec());
        if let Some(v) = self.yx_cache.lock().unwrap().get(&key) {
            return Arc::clone(v);
        }
        let value = Arc::new(self.compute_yx(b, c));
        self.yx_cache.lock().unwrap().insert(key, Arc::clone(&value));
        value
    }

    fn compute_yx(&self, b: &[u32], c: &[u32]) -> CherElem {
        let (r, n) = (self.r(), self.n());
        let id = GroupElem::identity(r, n);
        if b.iter().all(|&e| e == 0) || c.iter().all(|&e| e == 0) {
            return CherElem::monomial(
                r,
                CherMono {
                    x: c.to_vec(),
                    g: id,
                    y: b.to_vec(),
                },
                CycloNum::one(r),
            );
        }
        let i = b.iter().rposition(|&e| e > 0).unwrap();
        let mut b_rest = b.to_vec();
        b_rest[i] -= 1;

        let mut out = self.zero();
        // y^{b'} x^c y_i
        for (m, coef) in &self.yx_normal(&b_rest, c).terms {
            let mut y = m.y.clone();
            y[i] += 1;
            out.add_term(
                CherMono {
                    x: m.x.clone(),
                    g: m.g.clone(),
                    y,
                },
                coef.clone(),
            );
        }
        // y^{b'} [y_i, x^c], with [y_i, x^c] a sum of x^p g.
        for (m, coef) in &self.commutator_with_monomial(i, c).terms {
            let g_inv = m.g.inverse();
            for (m2, c2) in &self.yx_normal(&b_rest, &m.x).terms {
                // x^e k y^f g = x^e (k g) g^{-1}(y^f)
                let ex = y_twist_exponent(&g_inv, &m2.y);
                let y = g_inv.perm().act_on_vec(&m2.y);
                let value = &(coef * c2) * &CycloNum::root(r, ex);
                out.add_term(
                    CherMono {
                        x: m2.x.clone(),
                        g: m2.g.mul(&m.g),
                        y,
                    },
                    value,
                );
            }
        }
        out
    }

    /// `[y_i, x^c]`, as a combination of `x^p g`.
    fn commutator_with_monomial(&self, i: usize, c: &[u32]) -> CherElem {
        let r = self.r();
        let n = self.n();
        let letters: Vec<usize> = c
            .iter()
            .enumerate()
            .flat_map(|(j, &e)| std::iter::repeat_n(j, e as usize))
            .collect();
        let mut out = self.zero();
        for (k, &j) in letters.iter().enumerate() {
            let mut prefix = vec![0u32; n];
            for &l in &letters[..k] {
                prefix[l] += 1;
            }
            let mut rest = vec![0u32; n];
            for &l in &letters[k + 1..] {
                rest[l] += 1;
            }
            for (g, coef) in self.commutator(i, j) {
                let ex = x_twist_exponent(g, &rest);
                let moved = g.perm().act_on_vec(&rest);
                let x: Vec<u32> = prefix.iter().zip(&moved).map(|(p, q)| p + q).collect();
                out.add_term(
                    CherMono {
                        x,
                        g: g.clone(),
                        y: vec![0; n],
                    },
                    coef * &CycloNum::root(r, ex),
                );
            }
        }
        out
    }

    /// `k~_(i,j) = (kbar0/2) sum_{m=0}^{r-1} (theta_i^m theta_j^{-m} + theta_j^m theta_i^{-m})`.
    pub fn ktilde(&self, i: usize, j: usize) -> GroupAlgebraElem {
        ktilde_group_algebra(self.r(), self.n(), i, j, &self.params.kbar0)
    }

    /// `D_j = v_j alpha_j + sum_{i<j} k~_(i,j) s_{i,j}^{[0]}`.
    ///
    /// With the commutator relation above, this sign is the one for which the
    /// `D_j` commute; the opposite sign fails already for `r = 1, n = 2`.
    pub fn dunkl_d(&self, j: usize) -> CherElem {
        let (r, n) = (self.r(), self.n());
        let mut d = self.multiply(&self.y(j), &self.x(j));
        for i in 0..j {
            let s = GroupElem::reflection_s(r, n, i, j, 0).expect("i < j");
            for (t, c) in self.ktilde(i, j) {
                d.add_term(
                    CherMono {
                        x: vec![0; n],
                        g: t.mul(&s),
                        y: vec![0; n],
                    },
                    c,
                );
            }
        }
        d
    }

    /// `X_i = s_i D_i - D_{i+1} s_i` for the simple transposition `s_i = (i, i+1)`.
    /// It is a pure group-algebra element supported on `T`; it works out to
    /// `-k~_(i,i+1)` with no trailing transposition.
    pub fn cross_constant(&self, i: usize) -> GroupAlgebraElem {
        let (r, n) = (self.r(), self.n());
        let s = self.group(&GroupElem::from_perm(r, Perm::simple(n, i)));
        let lhs = self.multiply(&s, &self.dunkl_d(i));
        let rhs = self.multiply(&self.dunkl_d(i + 1), &s);
        lhs.sub(&rhs)
            .as_group_algebra()
            .expect("cross relation constant has degree zero")
    }
}

pub fn ktilde_group_algebra(r: u32, n: usize, i: usize, j: usize, kbar0: &CycloNum) -> GroupAlgebraElem {
    let half = kbar0.scale(&num_rational::BigRational::new(1.into(), 2.into()));
    let mut out = GroupAlgebraElem::new();
    for m in 0..r as i64 {
        for (a, b) in [(i, j), (j, i)] {
            let t = GroupElem::theta(r, n, a, m).mul(&GroupElem::theta(r, n, b, -m));
            let e = out.entry(t).or_insert_with(|| CycloNum::zero(r));
            *e += &half;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `[v_i, alpha_j] = <v_i, alpha_j> - sum_t k_t sum_s <v_i,alpha_s><v_s,alpha_j> theta_s^t
///   - kbar0 sum_m sum_{u != v} <v_i, alpha_{u,v}^{[m]}> <v_{u,v}^{[m]}, alpha_j> s_{u,v}^{[m]}`
/// with `alpha_{u,v}^{[m]} = z^{-m} alpha_u - alpha_v` and `v_{u,v}^{[m]} = (z^m v_u - v_v)/2`.
pub fn commutator_yx(i: usize, j: usize, p: &Params) -> GroupAlgebraElem {
    let (r, n) = (p.r, p.n);
    let mut out = GroupAlgebraElem::new();
    let mut add = |g: GroupElem, c: CycloNum| {
        let e = out.entry(g).or_insert_with(|| CycloNum::zero(r));
        *e += &c;
    };
    if i == j {
        add(GroupElem::identity(r, n), CycloNum::one(r));
        for t in 1..r as i64 {
            add(GroupElem::theta(r, n, i, t), -&p.k[t as usize - 1]);
        }
    }
    let half = num_rational::BigRational::new(1.into(), 2.into());
    for m in 0..r as i64 {
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                // <v_i, alpha_{u,v}^{[m]}>
                let left = match (i == u, i == v) {
                    (true, _) => CycloNum::root(r, -m),
                    (_, true) => CycloNum::from_int(r, -1),
                    _ => continue,
                };
                // <v_{u,v}^{[m]}, alpha_j>
                let right = match (j == u, j == v) {
                    (true, _) => CycloNum::root(r, m),
                    (_, true) => CycloNum::from_int(r, -1),
                    _ => continue,
                }
                .scale(&half);
                let s = GroupElem::reflection_s(r, n, u, v, m).expect("u != v");
                add(s, -&(&(&left * &right) * &p.kbar0));
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r: u32, n: usize, k: &[(i64, i64)], kbar0: (i64, i64)) -> Params {
        Params::new(
            r,
            n,
            k.iter().map(|&(a, b)| CycloNum::from_frac(r, a, b)).collect(),
            CycloNum::from_frac(r, kbar0.0, kbar0.1),
        )
    }

    #[test]
    fn commutator_single_variable() {
        // n = 1, r = 3: [v_1, alpha_1] = 1 - k_1 theta - k_2 theta^2.
        let p = params(3, 1, &[(2, 1), (5, 1)], (7, 1));
        let c = commutator_yx(0, 0, &p);
        let mut expect = GroupAlgebraElem::new();
        expect.insert(GroupElem::identity(3, 1), CycloNum::one(3));
        expect.insert(GroupElem::theta(3, 1, 0, 1), CycloNum::from_int(3, -2));
        expect.insert(GroupElem::theta(3, 1, 0, 2), CycloNum::from_int(3, -5));
        assert_eq!(c, expect);
    }

    #[test]
    fn commutator_type_a() {
        // r = 1, n = 2: [v_2, alpha_1] = kbar0 (1,2).
        let p = params(1, 2, &[], (3, 4));
        let c = commutator_yx(1, 0, &p);
        let mut expect = GroupAlgebraElem::new();
        expect.insert(
            GroupElem::from_perm(1, Perm::simple(2, 0)),
            CycloNum::from_frac(1, 3, 4),
        );
        assert_eq!(c, expect);
    }

    #[test]
    fn weyl_degeneration() {
        for (r, n) in [(1u32, 3usize), (3, 2), (4, 2)] {
            let p = Params::zero(r, n);
            for i in 0..n {
                for j in 0..n {
                    let c = commutator_yx(i, j, &p);
                    if i == j {
                        assert_eq!(c.len(), 1);
                        assert!(c[&GroupElem::identity(r, n)].is_one());
                    } else {
                        assert!(c.is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_matches_product_difference() {
        let h = Cherednik::new(params(3, 2, &[(1, 2), (1, 3)], (2, 5)));
        let yx = h.multiply(&h.y(0), &h.x(0));
        let xy = h.multiply(&h.x(0), &h.y(0));
        assert_eq!(yx.sub(&xy), h.from_group_algebra(h.commutator(0, 0)));
    }

    #[test]
    fn group_conjugation_of_x() {
        let h = Cherednik::new(params(3, 2, &[(1, 1), (1, 1)], (1, 1)));
        let g = GroupElem::reflection_s(3, 2, 0, 1, 1).unwrap();
        let x2 = h.multiply(&h.x(0), &h.x(1));
        let conj = h.multiply_all(&[&h.group(&g), &x2, &h.group(&g.inverse())]);
        assert_eq!(conj.degree(), Some(2));
        assert!(conj
            .terms()
            .keys()
            .all(|m| m.g.is_identity() && m.y.iter().all(|&e| e == 0)));
    }

    #[test]
    fn first_dunkl_element_has_no_correction() {
        let h = Cherednik::new(params(2, 3, &[(1, 1)], (1, 1)));
        assert_eq!(h.dunkl_d(0), h.multiply(&h.y(0), &h.x(0)));
    }

    #[test]
    fn dunkl_type_a() {
        let h = Cherednik::new(params(1, 2, &[], (1, 2)));
        let s = h.group(&GroupElem::from_perm(1, Perm::simple(2, 0)));
        let expect = h
            .multiply(&h.y(1), &h.x(1))
            .add(&s.scale(&CycloNum::from_frac(1, 1, 2)));
        assert_eq!(h.dunkl_d(1), expect);
    }
}
