//! The graded Hecke algebra of a Young subgroup `S_{b_1} x .. x S_{b_k}` of
//! `S_n` with constant multiplicity `c`, and its principal series.
//!
//! Basis `t_w lambda^a` with `w` block-preserving. The cross relations are
//!
//! ```text
//! s_i lambda_i     = lambda_{i+1} s_i - c
//! lambda_{i+1} s_i = s_i lambda_i + c
//! lambda_i s_i     = s_i lambda_{i+1} - c
//! ```
//!
//! for `i, i+1` in the same block; `lambda_k` commutes with `s_i` otherwise.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Mutex;

use crate::cyclo::CycloNum;
use crate::linalg::Matrix;
use crate::psmod::{Generator, ModuleParams, ModuleRep};
use crate::refl_group::Perm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhaElem {
    pub terms: BTreeMap<(Perm, Vec<u32>), CycloNum>,
}

impl GhaElem {
    pub fn zero() -> Self {
        GhaElem { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, w: Perm, a: Vec<u32>, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((w, a)).or_insert_with(|| CycloNum::zero(c.order()));
        *entry += &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub struct GhaA {
    r: u32,
    n: usize,
    blocks: Vec<Range<usize>>,
    c: CycloNum,
    lambda_past_w: Mutex<HashMap<(usize, Perm), GhaElem>>,
}

impl GhaA {
    /// `r` only fixes the coefficient field `Q(z_r)`.
    pub fn new(r: u32, blocks: Vec<Range<usize>>, c: CycloNum) -> Self {
        let n = blocks.last().map_or(0, |b| b.end);
        assert!(blocks.windows(2).all(|w| w[0].end == w[1].start));
        GhaA {
            r,
            n,
            blocks,
            c,
            lambda_past_w: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn c(&self) -> &CycloNum {
        &self.c
    }

    /// Simple reflections `s_i` with `i, i+1` in one block.
    pub fn simple_indices(&self) -> Vec<usize> {
        (0..self.n.saturating_sub(1))
            .filter(|&i| self.same_block(i, i + 1))
            .collect()
    }

    fn same_block(&self, i: usize, j: usize) -> bool {
        self.blocks.iter().any(|b| b.contains(&i) && b.contains(&j))
    }

    /// `W`, the block-preserving permutations, in length order.
    pub fn weyl_group(&self) -> Vec<Perm> {
        Perm::all(self.n)
            .into_iter()
            .filter(|w| (0..self.n).all(|i| self.same_block(i, w.apply(i))))
            .collect()
    }

    /// Normal form of `lambda_k t_w`.
    pub fn lambda_times(&self, k: usize, w: &Perm) -> GhaElem {
        let key = (k, w.clone());
        if let Some(v) = self.lambda_past_w.lock().unwrap().get(&key) {
            return v.clone();
        }
        let value = self.lambda_past_word(k, &w.reduced_word());
        self.lambda_past_w.lock().unwrap().insert(key, value.clone());
        value
    }

    fn lambda_past_word(&self, k: usize, word: &[usize]) -> GhaElem {
        let n = self.n;
        let mut out = GhaElem::zero();
        let Some((&i, tail)) = word.split_first() else {
            let mut a = vec![0; n];
            a[k] = 1;
            out.add_term(Perm::identity(n), a, CycloNum::one(self.r));
            return out;
        };
        let s = Perm::simple(n, i);
        let (next, correction) = if k == i + 1 {
            (i, Some(self.c.clone()))
        } else if k == i {
            (i + 1, Some(-&self.c))
        } else {
            (k, None)
        };
        for ((u, a), c) in self.lambda_past_word(next, tail).terms {
            out.add_term(s.compose(&u), a, c);
        }
        if let Some(c) = correction {
            out.add_term(Perm::from_word(n, tail), vec![0; n], c);
        }
        out
    }

    /// Normal form of `t_w lambda^a * t_u lambda^b`.
    pub fn multiply(&self, x: &GhaElem, y: &GhaElem) -> GhaElem {
        let mut out = GhaElem::zero();
        for ((w, a), c1) in &x.terms {
            for ((u, b), c2) in &y.terms {
                // lambda^a t_u, peeled one lambda at a time
                let mut cur = GhaElem::zero();
                cur.add_term(u.clone(), b.clone(), c1 * c2);
                for (k, &e) in a.iter().enumerate().rev() {
                    for _ in 0..e {
                        cur = self.left_lambda(k, &cur);
                    }
                }
                for ((v, d), c) in cur.terms {
                    out.add_term(w.compose(&v), d, c);
                }
            }
        }
        out
    }

    fn left_lambda(&self, k: usize, x: &GhaElem) -> GhaElem {
        let mut out = GhaElem::zero();
        for ((u, b), c) in &x.terms {
            for ((v, a), c2) in self.lambda_times(k, u).terms {
                let sum: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(v, sum, c * &c2);
            }
        }
        out
    }
}

/// `M(lambda) = H (x)_{S(V)} C_lambda`, basis `t_w (x) m` for `w` in `W`.
pub fn principal_series_a(lambda: &[CycloNum], blocks: &[Range<usize>], c: &CycloNum) -> ModuleRep {
    let r = c.order();
    let alg = GhaA::new(r, blocks.to_vec(), c.clone());
    let n = alg.n();
    assert_eq!(lambda.len(), n);
    let perms = alg.weyl_group();
    let d = perms.len();
    let index_of = |u: &Perm| perms.iter().position(|p| p == u).unwrap();
    let value = |a: &[u32]| {
        let mut v = CycloNum::one(r);
        for (l, &e) in lambda.iter().zip(a) {
            for _ in 0..e {
                v = &v * l;
            }
        }
        v
    };
    let mut generators = Vec::new();
    for k in 0..n {
        let mut m = Matrix::zeros(r, d, d);
        for (col, w) in perms.iter().enumerate() {
            for ((u, a), coef) in alg.lambda_times(k, w).terms {
                let row = index_of(&u);
                let v = m.get(row, col) + &(&coef * &value(&a));
                m.set(row, col, v);
            }
        }
        generators.push(Generator {
            name: format!("lambda{}", k + 1),
            matrix: m,
        });
    }
    for i in alg.simple_indices() {
        let s = Perm::simple(n, i);
        let mut m = Matrix::zeros(r, d, d);
        for (col, w) in perms.iter().enumerate() {
            m.set(index_of(&s.compose(w)), col, CycloNum::one(r));
        }
        generators.push(Generator {
            name: format!("s{}", i + 1),
            matrix: m,
        });
    }
    ModuleRep {
        r,
        basis: perms.iter().map(|w| format!("{w} (x) m")).collect(),
        generators,
        commutative: (0..n).collect(),
        params: ModuleParams {
            algebra: "H_gr(c, type A)".into(),
            r,
            n,
            kbar0: None,
            c: Some(c.clone()),
            character: None,
            blocks: Some(blocks.iter().map(|b| b.clone().collect()).collect()),
            operations: vec![format!(
                "principal series at lambda = [{}]",
                lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            )],
        },
    }
}

/// Positive roots `e_i - e_j` (`i < j`, same block) with `lambda_i - lambda_j = +-c`.
pub fn kr_set(lambda: &[CycloNum], blocks: &[Range<usize>], c: &CycloNum) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for b in blocks {
        for i in b.clone() {
            for j in i + 1..b.end {
                let diff = &lambda[i] - &lambda[j];
                if diff == *c || diff == -c {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

/// Defining relations of the type-A algebra on a module's generator matrices.
pub fn relation_failures(m: &ModuleRep, blocks: &[Range<usize>], c: &CycloNum) -> Vec<String> {
    let n = blocks.last().map_or(0, |b| b.end);
    let d = m.dim();
    let r = m.r;
    let id = Matrix::identity(r, d);
    let ls: Vec<&Matrix> = (1..=n).map(|i| m.generator(&format!("lambda{i}")).unwrap()).collect();
    let alg = GhaA::new(r, blocks.to_vec(), c.clone());
    let simple = alg.simple_indices();
    let mut fails = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if ls[i].mul(ls[j]) != ls[j].mul(ls[i]) {
                fails.push(format!("[lambda{}, lambda{}] = 0", i + 1, j + 1));
            }
        }
    }
    for &i in &simple {
        let s = m.generator(&format!("s{}", i + 1)).unwrap();
        if s.mul(s) != id {
            fails.push(format!("s{}^2 = 1", i + 1));
        }
        if simple.contains(&(i + 1)) {
            let t = m.generator(&format!("s{}", i + 2)).unwrap();
            if s.mul(t).mul(s) != t.mul(s).mul(t) {
                fails.push(format!("braid s{} s{}", i + 1, i + 2));
            }
        }
        for k in 0..n {
            let ok = if k == i {
                s.mul(ls[i]) == ls[i + 1].mul(s).sub(&Matrix::scalar(r, d, c))
            } else if k == i + 1 {
                ls[i + 1].mul(s) == s.mul(ls[i]).add(&Matrix::scalar(r, d, c))
            } else {
                s.mul(ls[k]) == ls[k].mul(s)
            };
            if !ok {
                fails.push(format!("cross relation s{} lambda{}", i + 1, k + 1));
            }
        }
    }
    fails
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicity::is_simple;

    fn q(n: i64) -> CycloNum {
        CycloNum::from_int(1, n)
    }

    #[test]
    fn singleton_blocks_give_a_character() {
        let lambda = [q(4), q(-1)];
        let m = principal_series_a(&lambda, &[0..1, 1..2], &q(1));
        assert_eq!(m.dim(), 1);
        assert_eq!(m.generator("lambda1").unwrap().get(0, 0), &q(4));
    }

    #[test]
    fn rank_one_shape() {
        // basis {1 (x) m, s (x) m}: lambda_1 s m = s lambda_2 m - c m
        let c = q(2);
        let m = principal_series_a(&[q(5), q(3)], &[0..2], &c);
        let l1 = m.generator("lambda1").unwrap();
        let expect = Matrix::from_rows(1, vec![vec![q(5), q(-2)], vec![q(0), q(3)]]);
        assert_eq!(l1, &expect);
        assert!(relation_failures(&m, &[0..2], &c).is_empty());
    }

    #[test]
    fn kr_examples() {
        let c = q(2);
        assert_eq!(kr_set(&[q(2), q(0)], &[0..2], &c), vec![(0, 1)]);
        assert!(kr_set(&[q(0), q(0)], &[0..2], &c).is_empty());
        assert_eq!(kr_set(&[q(5), q(3)], &[0..2], &c), vec![(0, 1)]);
        let m = principal_series_a(&[q(5), q(3)], &[0..2], &c);
        assert!(!is_simple(&m).unwrap().is_simple());
    }

    #[test]
    fn associativity_on_basis() {
        let alg = GhaA::new(1, vec![0..3], q(3));
        let mut elems = Vec::new();
        for w in alg.weyl_group() {
            for a in [vec![0, 0, 0], vec![1, 0, 0], vec![0, 2, 1]] {
                let mut e = GhaElem::zero();
                e.add_term(w.clone(), a, q(1));
                elems.push(e);
            }
        }
        for x in elems.iter().step_by(5) {
            for y in elems.iter().step_by(3) {
                for z in elems.iter().step_by(7) {
                    let lhs = alg.multiply(&alg.multiply(x, y), z);
                    let rhs = alg.multiply(x, &alg.multiply(y, z));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn weights_are_the_orbit() {
        use crate::psmod::weights_match;
        let lambda = [q(1), q(7), q(-2)];
        let m = principal_series_a(&lambda, &[0..3], &q(1));
        let weights: Vec<Vec<CycloNum>> = Perm::all(3).iter().map(|w| w.act_on_vec(&lambda)).collect();
        assert!(weights_match(&m, &weights));
    }
}
