//! The generalized graded Hecke algebra `H_k(r,n)`, generated by commuting
//! `D_1..D_n` and the group algebra of `G(r,1,n)`.
//!
//! Normal form is `w theta^t D^a` (permutation, then torus, then a commuting
//! `D`-monomial). `theta` and `D` commute; `theta^t w = w theta^{w^{-1}.t}`; the
//! only nontrivial rule moves a `D` past a simple transposition:
//!
//! ```text
//! s_i D_i - D_{i+1} s_i = X_i        (X_i in CT)
//! ```
//!
//! `X_i` is taken from the Cherednik realization (`Cherednik::cross_constant`)
//! or from the closed form `-c~_(i,i+1)`; the two agree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cherednik::{CherElem, Cherednik};
use crate::cyclo::CycloNum;
use crate::refl_group::{all_torsions, GroupElem, Perm};

/// Elements of the torus algebra `CT`, keyed by torsion vector.
pub type CtElem = BTreeMap<Vec<u32>, CycloNum>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GghaMono {
    pub w: Perm,
    pub t: Vec<u32>,
    pub a: Vec<u32>,
}

impl GghaMono {
    pub fn d_degree(&self) -> u32 {
        self.a.iter().sum()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct GghaElem {
    r: u32,
    n: usize,
    terms: BTreeMap<GghaMono, CycloNum>,
}

impl GghaElem {
    pub fn zero(r: u32, n: usize) -> Self {
        GghaElem {
            r,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(r: u32, mono: GghaMono, c: CycloNum) -> Self {
        let mut e = Self::zero(r, mono.w.n());
        e.add_term(mono, c);
        e
    }

    pub fn one(r: u32, n: usize) -> Self {
        Self::scalar(r, n, CycloNum::one(r))
    }

    pub fn scalar(r: u32, n: usize, c: CycloNum) -> Self {
        Self::monomial(
            r,
            GghaMono {
                w: Perm::identity(n),
                t: vec![0; n],
                a: vec![0; n],
            },
            c,
        )
    }

    pub fn d(r: u32, n: usize, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        Self::d_monomial(r, a)
    }

    pub fn d_monomial(r: u32, a: Vec<u32>) -> Self {
        let n = a.len();
        Self::monomial(
            r,
            GghaMono {
                w: Perm::identity(n),
                t: vec![0; n],
                a,
            },
            CycloNum::one(r),
        )
    }

    /// A linear combination `sum_i c_i D_i`.
    pub fn linear(r: u32, coeffs: &[CycloNum]) -> Self {
        let n = coeffs.len();
        let mut out = Self::zero(r, n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut a = vec![0; n];
            a[i] = 1;
            out.add_term(
                GghaMono {
                    w: Perm::identity(n),
                    t: vec![0; n],
                    a,
                },
                c.clone(),
            );
        }
        out
    }

    pub fn theta(r: u32, n: usize, i: usize, t: i64) -> Self {
        let mut tv = vec![0; n];
        tv[i] = t.rem_euclid(r as i64) as u32;
        Self::torus(r, tv)
    }

    pub fn torus(r: u32, t: Vec<u32>) -> Self {
        let n = t.len();
        Self::monomial(
            r,
            GghaMono {
                w: Perm::identity(n),
                t,
                a: vec![0; n],
            },
            CycloNum::one(r),
        )
    }

    pub fn perm(r: u32, w: Perm) -> Self {
        let n = w.n();
        Self::monomial(
            r,
            GghaMono {
                w,
                t: vec![0; n],
                a: vec![0; n],
            },
            CycloNum::one(r),
        )
    }

    /// `t_g` for `g = (t, w) = theta^t w = w theta^{w^{-1}.t}`.
    pub fn group(g: &GroupElem) -> Self {
        let winv = g.perm().inverse();
        let t = winv.act_on_vec(g.torsion());
        Self::monomial(
            g.r(),
            GghaMono {
                w: g.perm().clone(),
                t,
                a: vec![0; g.n()],
            },
            CycloNum::one(g.r()),
        )
    }

    pub fn from_ct(r: u32, n: usize, ct: &CtElem) -> Self {
        let mut out = Self::zero(r, n);
        for (t, c) in ct {
            out.add_term(
                GghaMono {
                    w: Perm::identity(n),
                    t: t.clone(),
                    a: vec![0; n],
                },
                c.clone(),
            );
        }
        out
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<GghaMono, CycloNum> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn d_degree(&self) -> Option<u32> {
        self.terms.keys().map(GghaMono::d_degree).max()
    }

    pub fn add_term(&mut self, mono: GghaMono, c: CycloNum) {
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

    pub fn add(&self, other: &GghaElem) -> GghaElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GghaElem) -> GghaElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &CycloNum) -> GghaElem {
        let mut out = Self::zero(self.r, self.n);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Left multiplication by a permutation; no rewriting needed.
    pub fn left_perm(&self, u: &Perm) -> GghaElem {
        let mut out = Self::zero(self.r, self.n);
        for (m, c) in &self.terms {
            out.add_term(
                GghaMono {
                    w: u.compose(&m.w),
                    t: m.t.clone(),
                    a: m.a.clone(),
                },
                c.clone(),
            );
        }
        out
    }
}

impl fmt::Debug for GghaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c}) {} t{:?} D{:?}", m.w, m.t, m.a))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct GghaTermJson<'a> {
    w: &'a Perm,
    t: &'a [u32],
    a: &'a [u32],
    c: &'a CycloNum,
}

impl Serialize for GghaElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&GghaTermJson {
                w: &m.w,
                t: &m.t,
                a: &m.a,
                c,
            })?;
        }
        seq.end()
    }
}

/// `c~_(u,v) = (c0/2) sum_{m=0}^{r-1} (theta_u^m theta_v^{-m} + theta_u^{-m} theta_v^m)`.
pub fn ctilde(r: u32, n: usize, u: usize, v: usize, c0: &CycloNum) -> CtElem {
    let half = c0.scale(&BigRational::new(BigInt::from(1), BigInt::from(2)));
    let mut out = CtElem::new();
    for m in 0..r as i64 {
        for sign in [1i64, -1] {
            let mut t = vec![0u32; n];
            t[u] = (sign * m).rem_euclid(r as i64) as u32;
            t[v] = (-sign * m).rem_euclid(r as i64) as u32;
            *out.entry(t).or_insert_with(|| CycloNum::zero(r)) += &half;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Transport of a `CT` element by a permutation: `u X u^{-1}`.
pub fn conjugate_ct(u: &Perm, x: &CtElem) -> CtElem {
    x.iter().map(|(t, c)| (u.act_on_vec(t), c.clone())).collect()
}

fn mul_ct(a: &CtElem, b: &CtElem, r: u32) -> CtElem {
    let mut out = CtElem::new();
    for (s, x) in a {
        for (t, y) in b {
            let key: Vec<u32> = s.iter().zip(t).map(|(p, q)| (p + q) % r).collect();
            *out.entry(key).or_insert_with(|| CycloNum::zero(r)) += &(x * y);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The algebra `H_k(r,n)` with a fixed cross-relation constant per simple transposition.
pub struct Ggha {
    r: u32,
    n: usize,
    kbar0: CycloNum,
    cross: Vec<CtElem>,
    d_past_w: Mutex<HashMap<(Vec<u32>, Perm), Arc<GghaElem>>>,
}

impl Ggha {
    /// Uses the closed-form constant `X_i = -c~_(i,i+1)` with `c0 = kbar0`.
    pub fn new(r: u32, n: usize, kbar0: CycloNum) -> Self {
        let cross = (0..n.saturating_sub(1))
            .map(|i| {
                ctilde(r, n, i, i + 1, &kbar0)
                    .into_iter()
                    .map(|(t, c)| (t, -c))
                    .collect()
            })
            .collect();
        Self::with_cross_constants(r, n, kbar0, cross)
    }

    pub fn with_cross_constants(r: u32, n: usize, kbar0: CycloNum, cross: Vec<CtElem>) -> Self {
        assert_eq!(cross.len(), n.saturating_sub(1));
        Ggha {
            r,
            n,
            kbar0,
            cross,
            d_past_w: Mutex::new(HashMap::new()),
        }
    }

    /// Takes `X_i` from the Cherednik realization.
    pub fn from_cherednik(h: &Cherednik) -> Self {
        let (r, n) = (h.r(), h.n());
        let cross = (0..n.saturating_sub(1))
            .map(|i| {
                h.cross_constant(i)
                    .into_iter()
                    .map(|(g, c)| {
                        assert!(g.perm().is_identity(), "cross constant outside CT");
                        (g.torsion().to_vec(), c)
                    })
                    .collect()
            })
            .collect();
        Self::with_cross_constants(r, n, h.params().kbar0.clone(), cross)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kbar0(&self) -> &CycloNum {
        &self.kbar0
    }

    pub fn cross_constant(&self, i: usize) -> &CtElem {
        &self.cross[i]
    }

    pub fn zero(&self) -> GghaElem {
        GghaElem::zero(self.r, self.n)
    }

    pub fn one(&self) -> GghaElem {
        GghaElem::one(self.r, self.n)
    }

    pub fn d(&self, i: usize) -> GghaElem {
        GghaElem::d(self.r, self.n, i)
    }

    pub fn theta(&self, i: usize) -> GghaElem {
        GghaElem::theta(self.r, self.n, i, 1)
    }

    pub fn simple(&self, i: usize) -> GghaElem {
        GghaElem::perm(self.r, Perm::simple(self.n, i))
    }

    pub fn perm(&self, w: &Perm) -> GghaElem {
        GghaElem::perm(self.r, w.clone())
    }

    /// `c~_(u,v)` with `c0 = kbar0`.
    pub fn ctilde(&self, u: usize, v: usize) -> CtElem {
        ctilde(self.r, self.n, u, v, &self.kbar0)
    }

    pub fn multiply(&self, a: &GghaElem, b: &GghaElem) -> GghaElem {
        let mut out = self.zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.mono_mul_into(ma, mb, &(ca * cb), &mut out);
            }
        }
        out
    }

    pub fn multiply_all(&self, factors: &[&GghaElem]) -> GghaElem {
        factors.iter().fold(self.one(), |acc, f| self.multiply(&acc, f))
    }

    pub fn commutator(&self, a: &GghaElem, b: &GghaElem) -> GghaElem {
        self.multiply(a, b).sub(&self.multiply(b, a))
    }

    /// `w1 theta^{t1} D^{a1} * w2 theta^{t2} D^{a2}`.
    fn mono_mul_into(&self, left: &GghaMono, right: &GghaMono, coef: &CycloNum, out: &mut GghaElem) {
        let moved = self.d_past_perm(&left.a, &right.w);
        for (m, c) in &moved.terms {
            // theta^{t1} u = u theta^{u^{-1}.t1}
            let t1 = m.w.inverse().act_on_vec(&left.t);
            let t: Vec<u32> = t1
                .iter()
                .zip(&m.t)
                .zip(&right.t)
                .map(|((x, y), z)| (x + y + z) % self.r)
                .collect();
            let a: Vec<u32> = m.a.iter().zip(&right.a).map(|(x, y)| x + y).collect();
            out.add_term(
                GghaMono {
                    w: left.w.compose(&m.w),
                    t,
                    a,
                },
                coef * c,
            );
        }
    }

    /// Normal form of `D^a w`.
    pub fn d_past_perm(&self, a: &[u32], w: &Perm) -> Arc<GghaElem> {
        let key = (a.to_vec(), w.clone());
        if let Some(v) = self.d_past_w.lock().unwrap().get(&key) {
            return Arc::clone(v);
        }
        let value = Arc::new(self.compute_d_past_perm(a, w));
        self.d_past_w.lock().unwrap().insert(key, Arc::clone(&value));
        value
    }

    fn compute_d_past_perm(&self, a: &[u32], w: &Perm) -> GghaElem {
        let (r, n) = (self.r, self.n);
        if w.is_identity() || a.iter().all(|&e| e == 0) {
            return GghaElem::monomial(
                r,
                GghaMono {
                    w: w.clone(),
                    t: vec![0; n],
                    a: a.to_vec(),
                },
                CycloNum::one(r),
            );
        }
        let k = a.iter().rposition(|&e| e > 0).unwrap();
        let mut rest = a.to_vec();
        rest[k] -= 1;
        // D^{a'} (D_k w), with D_k w = sum u theta^s D^b.
        let single = self.single_d_past_word(k, &w.reduced_word());
        let mut out = self.zero();
        for (m, c) in &single.terms {
            for (m2, c2) in &self.d_past_perm(&rest, &m.w).terms {
                let t: Vec<u32> = m2.t.iter().zip(&m.t).map(|(x, y)| (x + y) % r).collect();
                let b: Vec<u32> = m2.a.iter().zip(&m.a).map(|(x, y)| x + y).collect();
                out.add_term(
                    GghaMono {
                        w: m2.w.clone(),
                        t,
                        a: b,
                    },
                    c * c2,
                );
            }
        }
        out
    }

    /// Normal form of `D_k s_{word[0]} s_{word[1]} ...`.
    fn single_d_past_word(&self, k: usize, word: &[usize]) -> GghaElem {
        let (r, n) = (self.r, self.n);
        let Some((&i, tail)) = word.split_first() else {
            return GghaElem::d(r, n, k);
        };
        let s = Perm::simple(n, i);
        let tail_perm = Perm::from_word(n, tail);
        // D_k s_i = s_i D_{k'} + (correction in CT), then carry on with the tail.
        let (next, correction) = if k == i + 1 {
            // D_{i+1} s_i = s_i D_i - X_i
            (i, negate_ct(&self.cross[i]))
        } else if k == i {
            // D_i s_i = s_i D_{i+1} + s_i X_i s_i
            (i + 1, conjugate_ct(&s, &self.cross[i]))
        } else {
            (k, CtElem::new())
        };
        let mut out = self.single_d_past_word(next, tail).left_perm(&s);
        // Y * tail = tail * (tail^{-1} Y tail)
        let moved = conjugate_ct(&tail_perm.inverse(), &correction);
        for (t, c) in moved {
            out.add_term(
                GghaMono {
                    w: tail_perm.clone(),
                    t,
                    a: vec![0; n],
                },
                c,
            );
        }
        out
    }

    /// `w zeta w^{-1}` for `zeta = sum c_i D_i`: `D_i -> D_{w(i)}`.
    pub fn act_on_linear(w: &Perm, zeta: &[CycloNum]) -> Vec<CycloNum> {
        w.act_on_vec(zeta)
    }

    /// The correction sum of the one-step commutation formula
    /// `w zeta = w(zeta) w - sum_{{i,j} in R(w^{-1})} <i,j | w(zeta)> (i,j) w c~_(w^{-1}(i), w^{-1}(j))`.
    ///
    /// The pairing that reproduces the engine is `<i,j | xi> = xi_j - xi_i` for `i < j`,
    /// i.e. `-<alpha_i - alpha_j, xi>`; with `v_(i,j) = (v_i - v_j)/2` this is
    /// `-2 <v_(i,j), xi>`. The factor and sign are fixed by `X_i = -c~_(i,i+1)`.
    pub fn commutation_correction(&self, w: &Perm, zeta: &[CycloNum]) -> GghaElem {
        let wz = Self::act_on_linear(w, zeta);
        let winv = w.inverse();
        let mut out = self.zero();
        for (i, j) in winv.inversion_set() {
            let coef = &wz[j] - &wz[i];
            if coef.is_zero() {
                continue;
            }
            let u = Perm::transposition(self.n, i, j).compose(w);
            let ct = self.ctilde(winv.apply(i), winv.apply(j));
            for (t, c) in ct {
                out.add_term(
                    GghaMono {
                        w: u.clone(),
                        t,
                        a: vec![0; self.n],
                    },
                    &coef * &c,
                );
            }
        }
        out
    }

    /// Right-hand side of the commutation formula with `w(zeta) w` normalized by
    /// the engine; equals `w * zeta`.
    pub fn commute_closed_form(&self, w: &Perm, zeta: &[CycloNum]) -> GghaElem {
        let wz = GghaElem::linear(self.r, &Self::act_on_linear(w, zeta));
        self.multiply(&wz, &self.perm(w))
            .sub(&self.commutation_correction(w, zeta))
    }

    /// Normal form of `zeta w` from the commutation formula alone, without rewriting.
    pub fn move_past_closed_form(&self, zeta: &[CycloNum], w: &Perm) -> GghaElem {
        // zeta w = w zeta' + correction(w, zeta'), zeta' = w^{-1}(zeta)
        let zp = Self::act_on_linear(&w.inverse(), zeta);
        let mut out = self.zero();
        for (i, c) in zp.iter().enumerate() {
            let mut a = vec![0; self.n];
            a[i] = 1;
            out.add_term(
                GghaMono {
                    w: w.clone(),
                    t: vec![0; self.n],
                    a,
                },
                c.clone(),
            );
        }
        out.add(&self.commutation_correction(w, &zp))
    }

    /// Generators used for centrality: `D_i`, `theta_1` and the simple transpositions.
    pub fn center_generators(&self) -> Vec<GghaElem> {
        let mut gens: Vec<GghaElem> = (0..self.n).map(|i| self.d(i)).collect();
        gens.push(self.theta(0));
        gens.extend((0..self.n.saturating_sub(1)).map(|i| self.simple(i)));
        gens
    }

    pub fn center_check(&self, z: &GghaElem) -> bool {
        self.center_generators().iter().all(|g| self.commutator(z, g).is_zero())
    }

    /// `delta`: `D -> D`, `theta -> det(theta) theta`, `(i,j) -> (i,j)`.
    pub fn delta(&self, a: &GghaElem) -> GghaElem {
        let mut out = self.zero();
        for (m, c) in &a.terms {
            let e: u64 = m.t.iter().map(|&x| x as u64).sum();
            out.add_term(m.clone(), c * &CycloNum::root(self.r, e as i64));
        }
        out
    }

    /// `iota`: anti-automorphism with `D_i -> -D_i`, `g -> det(g) g^{-1}`.
    pub fn iota(&self, a: &GghaElem) -> GghaElem {
        let mut out = self.zero();
        for (m, c) in &a.terms {
            // iota(w theta^t D^a) = (-1)^{|a|} D^a det(theta^t) theta^{-t} det(w) w^{-1}
            let deg = m.d_degree();
            let te: u64 = m.t.iter().map(|&x| x as u64).sum();
            let mut coef = c * &CycloNum::root(self.r, te as i64);
            if (deg as i64 + if m.w.sign() < 0 { 1 } else { 0 }) % 2 == 1 {
                coef = -coef;
            }
            let neg_t: Vec<u32> = m.t.iter().map(|&x| (self.r - x) % self.r).collect();
            let left = GghaElem::monomial(
                self.r,
                GghaMono {
                    w: Perm::identity(self.n),
                    t: neg_t,
                    a: m.a.clone(),
                },
                coef,
            );
            let prod = self.multiply(&left, &self.perm(&m.w.inverse()));
            out = out.add(&prod);
        }
        out
    }

    /// `psi`: `D_i -> D_i`, `theta_i -> theta_i`, `(u,v) -> s_{u,v}^{[0]}`.
    pub fn psi(&self, h: &Cherednik, a: &GghaElem) -> CherElem {
        let (r, n) = (self.r, self.n);
        let ds: Vec<CherElem> = (0..n).map(|j| h.dunkl_d(j)).collect();
        let mut out = h.zero();
        for (m, c) in &a.terms {
            let g = GroupElem::from_perm(r, m.w.clone()).mul(&GroupElem::from_torsion(r, m.t.clone()));
            let mut term = h.group(&g).scale(c);
            for (j, &e) in m.a.iter().enumerate() {
                for _ in 0..e {
                    term = h.multiply(&term, &ds[j]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// `sum_{t in orbit} theta^t` for each `S_n`-orbit on torsion vectors.
    pub fn torus_orbit_sums(&self) -> Vec<GghaElem> {
        let mut seen: Vec<Vec<u32>> = Vec::new();
        let mut out = Vec::new();
        for t in all_torsions(self.r, self.n) {
            let mut sorted = t.clone();
            sorted.sort_unstable();
            if seen.contains(&sorted) {
                continue;
            }
            seen.push(sorted.clone());
            let mut elem = self.zero();
            for u in all_torsions(self.r, self.n) {
                let mut su = u.clone();
                su.sort_unstable();
                if su == sorted {
                    elem.add_term(
                        GghaMono {
                            w: Perm::identity(self.n),
                            t: u,
                            a: vec![0; self.n],
                        },
                        CycloNum::one(self.r),
                    );
                }
            }
            out.push(elem);
        }
        out
    }

    /// Elementary symmetric polynomial `e_k(D_1, .., D_n)`.
    pub fn elementary_symmetric(&self, k: usize) -> GghaElem {
        let mut out = self.zero();
        for subset in 0u32..(1 << self.n) {
            if subset.count_ones() as usize != k {
                continue;
            }
            let a: Vec<u32> = (0..self.n).map(|i| (subset >> i) & 1).collect();
            out = out.add(&GghaElem::d_monomial(self.r, a));
        }
        out
    }

    /// Value of a `CT` element under a `T`-character.
    pub fn ct_value(ct: &CtElem, character: &crate::refl_group::TChar) -> CycloNum {
        let mut acc = CycloNum::zero(character.r);
        for (t, c) in ct {
            acc += &(c * &character.value_on(t));
        }
        acc
    }

    pub fn ct_product(&self, a: &CtElem, b: &CtElem) -> CtElem {
        mul_ct(a, b, self.r)
    }
}

fn negate_ct(x: &CtElem) -> CtElem {
    x.iter().map(|(t, c)| (t.clone(), -c)).collect()
}
