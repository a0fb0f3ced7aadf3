//! The wreath product `G(r,1,n) = T x| S_n` and its combinatorics.
//!
//! Indices are 0-based throughout the API; one-line notation and JSON output
//! are 1-based. A group element `(t, w)` sends `e_i` to `z^{t_{w(i)}} e_{w(i)}`.

use std::fmt;
use std::ops::Range;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::CycloNum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("reflection s_(u,v) needs u != v (got u = v = {0})")]
    EqualIndices(usize),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
}

/// A permutation of `{0..n}` stored by images: `w(i) = images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(GroupError::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// One-line notation with 1-based values, e.g. `[2,1,3]`.
    pub fn from_one_line(values: &[usize]) -> Result<Self, GroupError> {
        if values.contains(&0) {
            return Err(GroupError::NotAPermutation(format!("{values:?}")));
        }
        Self::from_images(values.iter().map(|v| v - 1).collect())
    }

    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
        let values: Result<Vec<usize>, _> = inner
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>())
            .collect();
        let values = values.map_err(|_| GroupError::NotAPermutation(text.to_string()))?;
        Self::from_one_line(&values)
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Perm(v)
    }

    /// The simple reflection `(i, i+1)`.
    pub fn simple(n: usize, i: usize) -> Self {
        Self::transposition(n, i, i + 1)
    }

    pub fn longest(n: usize) -> Self {
        Perm((0..n).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// Inversion set `R(w) = {{i,j} : i < j, w(j) < w(i)}`.
    pub fn inversion_set(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.0[j] < self.0[i] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.inversion_set().len()
    }

    pub fn sign(&self) -> i64 {
        if self.length() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// A reduced word `[a_1, .., a_l]` with `w = s_{a_1} ... s_{a_l}`, peeling
    /// right descents from the right.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::new();
        let mut w = self.clone();
        while let Some(i) = (0..w.n().saturating_sub(1)).find(|&i| w.0[i] > w.0[i + 1]) {
            word.push(i);
            w.0.swap(i, i + 1);
        }
        word.reverse();
        word
    }

    pub fn from_word(n: usize, word: &[usize]) -> Perm {
        word.iter()
            .fold(Perm::identity(n), |acc, &i| acc.compose(&Perm::simple(n, i)))
    }

    /// Transports an index vector: `(w.v)_i = v_{w^{-1}(i)}`.
    pub fn act_on_vec<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let inv = self.inverse();
        (0..self.n()).map(|i| v[inv.0[i]].clone()).collect()
    }

    /// All of `S_n`, ordered by length and then lexicographically.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        permute(&mut cur, 0, &mut out);
        out.sort_by_key(|p| (p.length(), p.0.clone()));
        out
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == cur.len() {
        out.push(Perm(cur.clone()));
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An element `(t, w)` of `G(r,1,n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    r: u32,
    torsion: Vec<u32>,
    perm: Perm,
}

impl GroupElem {
    pub fn new(r: u32, torsion: Vec<u32>, perm: Perm) -> Self {
        assert_eq!(torsion.len(), perm.n());
        let torsion = torsion.into_iter().map(|t| t % r).collect();
        GroupElem { r, torsion, perm }
    }

    pub fn identity(r: u32, n: usize) -> Self {
        GroupElem {
            r,
            torsion: vec![0; n],
            perm: Perm::identity(n),
        }
    }

    pub fn from_perm(r: u32, perm: Perm) -> Self {
        GroupElem {
            r,
            torsion: vec![0; perm.n()],
            perm,
        }
    }

    pub fn from_torsion(r: u32, torsion: Vec<u32>) -> Self {
        let n = torsion.len();
        Self::new(r, torsion, Perm::identity(n))
    }

    /// `theta_i^t`: scales `e_i` by `z^t`.
    pub fn theta(r: u32, n: usize, i: usize, t: i64) -> Self {
        let mut torsion = vec![0; n];
        torsion[i] = t.rem_euclid(r as i64) as u32;
        Self::from_torsion(r, torsion)
    }

    /// `s_{u,v}^{[m]}`: fixes `z^m e_u + e_v`, negates `z^m e_u - e_v`.
    pub fn reflection_s(r: u32, n: usize, u: usize, v: usize, m: i64) -> Result<Self, GroupError> {
        if u == v {
            return Err(GroupError::EqualIndices(u));
        }
        for idx in [u, v] {
            if idx >= n {
                return Err(GroupError::IndexOutOfRange { index: idx, n });
            }
        }
        let mut torsion = vec![0u32; n];
        torsion[u] = m.rem_euclid(r as i64) as u32;
        torsion[v] = (-m).rem_euclid(r as i64) as u32;
        Ok(GroupElem {
            r,
            torsion,
            perm: Perm::transposition(n, u, v),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.torsion.len()
    }

    pub fn torsion(&self) -> &[u32] {
        &self.torsion
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.torsion.iter().all(|&t| t == 0)
    }

    /// `(t,w)(t',w') = (t + w.t', w w')`.
    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        let moved = self.perm.act_on_vec(&other.torsion);
        let torsion = self.torsion.iter().zip(moved).map(|(a, b)| (a + b) % self.r).collect();
        GroupElem {
            r: self.r,
            torsion,
            perm: self.perm.compose(&other.perm),
        }
    }

    pub fn inverse(&self) -> GroupElem {
        let winv = self.perm.inverse();
        let neg: Vec<u32> = self.torsion.iter().map(|&t| (self.r - t) % self.r).collect();
        GroupElem {
            r: self.r,
            torsion: winv.act_on_vec(&neg),
            perm: winv,
        }
    }

    pub fn pow(&self, e: i64) -> GroupElem {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Self::identity(self.r, self.n()), |acc, _| acc.mul(&base))
    }

    /// Image of basis vector `e_i` as `(exponent of z, target index)`.
    pub fn apply_basis(&self, i: usize) -> (u32, usize) {
        let j = self.perm.apply(i);
        (self.torsion[j], j)
    }

    /// `det(t, w) = z^{sum t} sign(w)` as `(z-exponent, sign)`.
    pub fn det_parts(&self) -> (u32, i64) {
        let e = self.torsion.iter().map(|&t| t as u64).sum::<u64>() % self.r as u64;
        (e as u32, self.perm.sign())
    }

    pub fn det(&self) -> CycloNum {
        let (e, sign) = self.det_parts();
        let z = CycloNum::root(self.r, e as i64);
        if sign < 0 {
            -z
        } else {
            z
        }
    }

    /// The full group, `r^n n!` elements.
    pub fn enumerate(r: u32, n: usize) -> Vec<GroupElem> {
        let perms = Perm::all(n);
        let mut out = Vec::new();
        for t in all_torsions(r, n) {
            for w in &perms {
                out.push(GroupElem::new(r, t.clone(), w.clone()));
            }
        }
        out
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|x| x.to_string()).collect();
        write!(f, "([{}],{})", t.join(","), self.perm)
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize)]
struct GroupElemJson<'a> {
    torsion: &'a [u32],
    perm: &'a Perm,
}

impl Serialize for GroupElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroupElemJson {
            torsion: &self.torsion,
            perm: &self.perm,
        }
        .serialize(s)
    }
}

/// Every torsion vector in `(Z/r)^n`, lexicographic.
pub fn all_torsions(r: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..r).map(move |t| {
                    let mut w = v.clone();
                    w.push(t);
                    w
                })
            })
            .collect();
    }
    out
}

/// A character of `T`, `theta_s -> z^{index_s}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct TChar {
    pub r: u32,
    pub index: Vec<u32>,
}

impl TChar {
    pub fn new(r: u32, index: Vec<u32>) -> Self {
        let index = index.into_iter().map(|x| x % r).collect();
        TChar { r, index }
    }

    pub fn trivial(r: u32, n: usize) -> Self {
        TChar { r, index: vec![0; n] }
    }

    /// Restriction of `det` to `T`.
    pub fn det(r: u32, n: usize) -> Self {
        Self::new(r, vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.index.len()
    }

    /// `(count of 0s, count of 1s, ..)`, summing to `n`.
    pub fn r_index(&self) -> Vec<usize> {
        let mut counts = vec![0; self.r as usize];
        for &x in &self.index {
            counts[x as usize] += 1;
        }
        counts
    }

    /// Exponent of `z` in the value on `theta^t`.
    pub fn exponent_on(&self, torsion: &[u32]) -> u32 {
        let s: u64 = self.index.iter().zip(torsion).map(|(&a, &b)| a as u64 * b as u64).sum();
        (s % self.r as u64) as u32
    }

    pub fn value_on(&self, torsion: &[u32]) -> CycloNum {
        CycloNum::root(self.r, self.exponent_on(torsion) as i64)
    }

    /// `(^w mu)_i = mu_{w^{-1}(i)}`.
    pub fn twist(&self, w: &Perm) -> TChar {
        TChar {
            r: self.r,
            index: w.act_on_vec(&self.index),
        }
    }

    pub fn inverse(&self) -> TChar {
        TChar::new(self.r, self.index.iter().map(|&x| self.r - x).collect())
    }

    pub fn product(&self, other: &TChar) -> TChar {
        TChar::new(
            self.r,
            self.index.iter().zip(&other.index).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn is_sorted(&self) -> bool {
        self.index.windows(2).all(|w| w[0] <= w[1])
    }

    /// Every character of `T`.
    pub fn all(r: u32, n: usize) -> Vec<TChar> {
        all_torsions(r, n).into_iter().map(|t| TChar { r, index: t }).collect()
    }

    /// One sorted representative per `S_n`-orbit.
    pub fn orbit_representatives(r: u32, n: usize) -> Vec<TChar> {
        Self::all(r, n).into_iter().filter(TChar::is_sorted).collect()
    }
}

/// Result of sorting a `T`-character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedChar {
    /// Stable-sort permutation: original position `p` goes to `sigma(p)`.
    pub sigma: Perm,
    /// `^sigma varpi`, non-decreasing.
    pub mu: TChar,
    /// Index intervals of the type-A factors of the stabilizer of `mu`.
    pub blocks: Vec<Range<usize>>,
}

pub fn sort_char(varpi: &TChar) -> SortedChar {
    let n = varpi.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| varpi.index[p]);
    // order[i] is the original position of the i-th sorted entry, i.e. sigma^{-1}.
    let sigma = Perm(order).inverse();
    let mu = varpi.twist(&sigma);
    let blocks = blocks_of(&mu.index);
    let out = SortedChar { sigma, mu, blocks };
    debug_assert!(sort_inversions_separate(varpi, &out.sigma));
    out
}

/// Maximal runs of equal values, as intervals.
pub fn blocks_of(values: &[u32]) -> Vec<Range<usize>> {
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] != values[start] {
            blocks.push(start..i);
            start = i;
        }
    }
    blocks
}

/// Every pair of positions whose relative order the sort reverses carries
/// distinct values; phrased on `varpi` through `R(sigma)` and on the sorted
/// character through `R(sigma^{-1})`.
pub fn sort_inversions_separate(varpi: &TChar, sigma: &Perm) -> bool {
    let mu = varpi.twist(sigma);
    sigma
        .inversion_set()
        .iter()
        .all(|&(i, j)| varpi.index[i] != varpi.index[j])
        && sigma
            .inverse()
            .inversion_set()
            .iter()
            .all(|&(i, j)| mu.index[i] != mu.index[j])
}

/// Transpositions `(u, v)`, `u < v`, fixing `varpi`.
pub fn stabilizer(varpi: &TChar) -> Vec<(usize, usize)> {
    let n = varpi.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if varpi.index[u] == varpi.index[v] {
                out.push((u, v));
            }
        }
    }
    out
}

/// Elements of `S_n(varpi)` in length order.
pub fn stabilizer_elements(varpi: &TChar) -> Vec<Perm> {
    Perm::all(varpi.n())
        .into_iter()
        .filter(|w| varpi.twist(w) == *varpi)
        .collect()
}

/// Left coset representatives `w_1 = id, w_2, ..` of `S_n / S_n(varpi)`, each
/// the shortest element of its coset.
pub fn coset_representatives(varpi: &TChar) -> Vec<Perm> {
    let mut seen: Vec<TChar> = Vec::new();
    let mut reps = Vec::new();
    for w in Perm::all(varpi.n()) {
        let image = varpi.twist(&w);
        if !seen.contains(&image) {
            seen.push(image);
            reps.push(w);
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_coordinates() {
        let s = GroupElem::reflection_s(4, 3, 0, 1, 0).unwrap();
        assert_eq!(s.torsion(), &[0, 0, 0]);
        assert_eq!(s.perm(), &Perm::transposition(3, 0, 1));
        let s1 = GroupElem::reflection_s(4, 3, 0, 1, 1).unwrap();
        assert_eq!(s1.torsion(), &[1, 3, 0]);
        // g(e_1) = z^{-1} e_2 and g(e_2) = z e_1.
        assert_eq!(s1.apply_basis(0), (3, 1));
        assert_eq!(s1.apply_basis(1), (1, 0));
        assert_eq!(GroupElem::reflection_s(3, 3, 1, 1, 0), Err(GroupError::EqualIndices(1)));
    }

    #[test]
    fn reflections_are_involutions() {
        for u in 0..3 {
            for v in 0..3 {
                if u == v {
                    continue;
                }
                for m in 0..3 {
                    let s = GroupElem::reflection_s(3, 3, u, v, m).unwrap();
                    assert!(s.mul(&s).is_identity());
                }
            }
        }
    }

    #[test]
    fn inversion_sets() {
        assert!(Perm::identity(3).inversion_set().is_empty());
        let w0 = Perm::longest(3);
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.inversion_set().len(), 3);
        assert_eq!(Perm::transposition(3, 0, 1).inversion_set(), vec![(0, 1)]);
    }

    #[test]
    fn reduced_words_multiply_back() {
        for w in Perm::all(4) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            assert_eq!(Perm::from_word(4, &word), w);
        }
    }

    #[test]
    fn group_order_and_generation() {
        for (r, n) in [(1u32, 3usize), (2, 2), (3, 2), (2, 3)] {
            let all = GroupElem::enumerate(r, n);
            let order = (r as usize).pow(n as u32) * (1..=n).product::<usize>();
            assert_eq!(all.len(), order);
            let mut gens = vec![GroupElem::theta(r, n, 0, 1)];
            gens.extend((0..n - 1).map(|i| GroupElem::from_perm(r, Perm::simple(n, i))));
            let mut closure = vec![GroupElem::identity(r, n)];
            let mut frontier = closure.clone();
            while let Some(g) = frontier.pop() {
                for s in &gens {
                    let h = g.mul(s);
                    if !closure.contains(&h) {
                        closure.push(h.clone());
                        frontier.push(h);
                    }
                }
            }
            assert_eq!(closure.len(), order);
        }
    }

    #[test]
    fn conjugating_theta_transports_index() {
        let (r, n) = (3, 4);
        for w in Perm::all(n) {
            let g = GroupElem::from_perm(r, w.clone());
            for i in 0..n {
                let conj = g.mul(&GroupElem::theta(r, n, i, 1)).mul(&g.inverse());
                assert_eq!(conj, GroupElem::theta(r, n, w.apply(i), 1));
            }
        }
    }

    #[test]
    fn sort_examples() {
        let s = sort_char(&TChar::new(3, vec![0, 0, 0]));
        assert!(s.sigma.is_identity());
        assert_eq!(s.blocks, vec![0..3]);

        let s = sort_char(&TChar::new(3, vec![2, 0, 1]));
        assert_eq!(s.mu.index, vec![0, 1, 2]);
        assert_eq!(s.blocks, vec![0..1, 1..2, 2..3]);

        let v = TChar::new(2, vec![1, 0, 1, 0]);
        let s = sort_char(&v);
        assert_eq!(s.mu.index, vec![0, 0, 1, 1]);
        assert_eq!(s.blocks, vec![0..2, 2..4]);
        assert_eq!(v.twist(&s.sigma), s.mu);
    }

    #[test]
    fn stabilizer_examples() {
        let c = TChar::new(2, vec![0, 0, 0]);
        assert_eq!(stabilizer(&c).len(), 3);
        assert_eq!(stabilizer_elements(&c).len(), 6);
        let d = TChar::new(3, vec![0, 1, 2]);
        assert!(stabilizer(&d).is_empty());
        assert_eq!(coset_representatives(&d).len(), 6);
        let e = TChar::new(2, vec![0, 0, 1]);
        assert_eq!(stabilizer(&e), vec![(0, 1)]);
        assert_eq!(stabilizer_elements(&e).len(), 2);
        let reps = coset_representatives(&e);
        assert_eq!(reps.len(), 3);
        assert!(reps[0].is_identity());
    }

    #[test]
    fn perm_text() {
        let w = Perm::parse("[2,1,3]").unwrap();
        assert_eq!(w, Perm::transposition(3, 0, 1));
        assert_eq!(w.to_string(), "[2,1,3]");
        assert!(Perm::parse("[1,1]").is_err());
    }
}
