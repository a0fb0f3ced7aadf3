//! Principal series modules `M(gamma~)` over `H_k(r,n)` as explicit matrices,
//! their `T`-isotypic pieces, twists, duals, and the Hom-space solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::CycloNum;
use crate::ggha::{Ggha, GghaElem, GghaMono};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::refl_group::{coset_representatives, sort_char, stabilizer, stabilizer_elements, Perm, TChar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PsmodError {
    #[error("the T-action matrices do not commute")]
    TorusNotCommutative,
    #[error("isotypic piece for character {0:?} has dimension {1}, expected {2}")]
    IsotypicDimension(Vec<u32>, usize, usize),
    #[error("character {0:?} is not sorted")]
    UnsortedCharacter(Vec<u32>),
    #[error("module carries no principal series character")]
    NotPrincipalSeries,
    #[error("subspace is not stable under generator {0}")]
    NotStable(String),
    #[error("missing generator {0}")]
    MissingGenerator(String),
}

/// A character `gamma (x) mu` of `C = S(V_0) (x) CT`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CChar {
    pub gamma: Vec<CycloNum>,
    pub mu: TChar,
}

impl CChar {
    pub fn new(gamma: Vec<CycloNum>, mu: TChar) -> Self {
        assert_eq!(gamma.len(), mu.n());
        CChar { gamma, mu }
    }

    pub fn from_rationals(r: u32, gamma: &[(i64, i64)], mu: TChar) -> Self {
        Self::new(gamma.iter().map(|&(p, q)| CycloNum::from_frac(r, p, q)).collect(), mu)
    }

    pub fn r(&self) -> u32 {
        self.mu.r
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    /// Value on `theta^t D^a`.
    pub fn eval(&self, t: &[u32], a: &[u32]) -> CycloNum {
        let mut v = self.mu.value_on(t);
        for (g, &e) in self.gamma.iter().zip(a) {
            for _ in 0..e {
                v = &v * g;
            }
        }
        v
    }

    /// `^w gamma~`, by index transport on both factors.
    pub fn twist(&self, w: &Perm) -> CChar {
        CChar {
            gamma: w.act_on_vec(&self.gamma),
            mu: self.mu.twist(w),
        }
    }

    /// Joint eigenvalue on the generators `D_1..D_n, theta_1..theta_n`.
    pub fn weight_vector(&self) -> Vec<CycloNum> {
        let mut v = self.gamma.clone();
        v.extend(self.mu.index.iter().map(|&e| CycloNum::root(self.r(), e as i64)));
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub name: String,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ModuleParams {
    pub algebra: String,
    pub r: u32,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kbar0: Option<CycloNum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<CycloNum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<CChar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    pub operations: Vec<String>,
}

/// A finite-dimensional representation: one matrix per named generator, acting
/// on column vectors.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    pub r: u32,
    pub basis: Vec<String>,
    pub generators: Vec<Generator>,
    /// Indices of the generators spanning the commutative subalgebra.
    pub commutative: Vec<usize>,
    pub params: ModuleParams,
}

#[derive(Serialize)]
struct ModuleJson<'a> {
    dim: usize,
    basis: &'a [String],
    generators: &'a [Generator],
    params: &'a ModuleParams,
}

impl Serialize for ModuleRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModuleJson {
            dim: self.dim(),
            basis: &self.basis,
            generators: &self.generators,
            params: &self.params,
        }
        .serialize(s)
    }
}

impl ModuleRep {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generator(&self, name: &str) -> Option<&Matrix> {
        self.generators.iter().find(|g| g.name == name).map(|g| &g.matrix)
    }

    fn require(&self, name: &str) -> Result<&Matrix, PsmodError> {
        self.generator(name)
            .ok_or_else(|| PsmodError::MissingGenerator(name.to_string()))
    }

    pub fn matrices(&self) -> impl Iterator<Item = &Matrix> {
        self.generators.iter().map(|g| &g.matrix)
    }

    pub fn commutative_matrices(&self) -> Vec<&Matrix> {
        self.commutative.iter().map(|&i| &self.generators[i].matrix).collect()
    }

    fn with_matrices(&self, matrices: Vec<Matrix>, op: String) -> ModuleRep {
        let mut out = self.clone();
        for (g, m) in out.generators.iter_mut().zip(matrices) {
            g.matrix = m;
        }
        out.params.operations.push(op);
        out
    }

    /// Same module in the basis given by the columns of `p`.
    pub fn conjugate(&self, p: &Matrix) -> ModuleRep {
        let pinv = p.inverse().expect("basis change must be invertible");
        let mats = self.matrices().map(|m| pinv.mul(m).mul(p)).collect();
        let mut out = self.with_matrices(mats, "basis change".into());
        out.basis = (0..self.dim()).map(|i| format!("b{}", i + 1)).collect();
        out
    }

    /// The submodule spanned by `basis`, if it is stable.
    pub fn submodule(&self, basis: &[Vector]) -> Option<ModuleRep> {
        let mats = self.matrices().map(|m| m.restrict(basis)).collect::<Option<Vec<_>>>()?;
        let mut out = self.with_matrices(mats, "submodule".into());
        out.basis = (0..basis.len()).map(|i| format!("v{}", i + 1)).collect();
        Some(out)
    }

    /// The quotient by the stable subspace spanned by `basis`, in the basis of
    /// the images of the standard complement.
    pub fn quotient(&self, basis: &[Vector]) -> Option<ModuleRep> {
        let d = self.dim();
        let k = basis.len();
        let sub = Subspace::spanned_by(self.r, d, basis);
        let comp = sub.standard_complement();
        let mut cols = basis.to_vec();
        cols.extend(comp.iter().cloned());
        let p = Matrix::from_columns(self.r, d, &cols);
        let pinv = p.inverse()?;
        let mut mats = Vec::new();
        for m in self.matrices() {
            let b = pinv.mul(m).mul(&p);
            let mut q = Matrix::zeros(self.r, d - k, d - k);
            for i in 0..d - k {
                for j in 0..k {
                    if !b.get(k + i, j).is_zero() {
                        return None;
                    }
                }
                for j in 0..d - k {
                    q.set(i, j, b.get(k + i, k + j).clone());
                }
            }
            mats.push(q);
        }
        let mut out = self.with_matrices(mats, "quotient".into());
        out.basis = (0..d - k).map(|i| format!("q{}", i + 1)).collect();
        Some(out)
    }
}

/// Names of the fixed generator list `D_1..D_n, theta_1..theta_n, s_1..s_{n-1}`.
pub fn generator_names(n: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("D{i}")).collect();
    names.extend((1..=n).map(|i| format!("theta{i}")));
    names.extend((1..n).map(|i| format!("s{i}")));
    names
}

pub fn standard_generators(alg: &Ggha) -> Vec<(String, GghaElem)> {
    let n = alg.n();
    let mut elems: Vec<GghaElem> = (0..n).map(|i| alg.d(i)).collect();
    elems.extend((0..n).map(|i| alg.theta(i)));
    elems.extend((0..n.saturating_sub(1)).map(|i| alg.simple(i)));
    generator_names(n).into_iter().zip(elems).collect()
}

fn perm_labels(perms: &[Perm]) -> Vec<String> {
    perms.iter().map(|w| format!("{w} (x) m")).collect()
}

/// `M(gamma~) = H (x)_C C m`, basis `w (x) m` for `w` in `S_n` ordered by length.
pub fn principal_series(alg: &Ggha, chi: &CChar) -> ModuleRep {
    let (r, n) = (alg.r(), alg.n());
    assert_eq!(chi.r(), r);
    assert_eq!(chi.n(), n);
    let perms = Perm::all(n);
    let index_of = |u: &Perm| perms.iter().position(|p| p == u).unwrap();
    let d = perms.len();
    let generators = standard_generators(alg)
        .into_iter()
        .map(|(name, g)| {
            let mut m = Matrix::zeros(r, d, d);
            for (col, w) in perms.iter().enumerate() {
                let prod = alg.multiply(&g, &alg.perm(w));
                for (mono, c) in prod.terms() {
                    let row = index_of(&mono.w);
                    let v = m.get(row, col) + &(c * &chi.eval(&mono.t, &mono.a));
                    m.set(row, col, v);
                }
            }
            Generator { name, matrix: m }
        })
        .collect();
    ModuleRep {
        r,
        basis: perm_labels(&perms),
        generators,
        commutative: (0..2 * n).collect(),
        params: ModuleParams {
            algebra: "H_k(r,n)".into(),
            r,
            n,
            kbar0: Some(alg.kbar0().clone()),
            c: None,
            character: Some(chi.clone()),
            blocks: None,
            operations: vec!["principal series".into()],
        },
    }
}

/// Matrix of an arbitrary element on a module carrying the standard generators.
pub fn act(alg: &Ggha, m: &ModuleRep, a: &GghaElem) -> Matrix {
    let (r, n, d) = (alg.r(), alg.n(), m.dim());
    let ds: Vec<&Matrix> = (1..=n).map(|i| m.generator(&format!("D{i}")).unwrap()).collect();
    let ths: Vec<&Matrix> = (1..=n).map(|i| m.generator(&format!("theta{i}")).unwrap()).collect();
    let ss: Vec<&Matrix> = (1..n).map(|i| m.generator(&format!("s{i}")).unwrap()).collect();
    let mut out = Matrix::zeros(r, d, d);
    for (mono, c) in a.terms() {
        let mut x = Matrix::identity(r, d);
        for &i in &mono.w.reduced_word() {
            x = x.mul(ss[i]);
        }
        for (i, &e) in mono.t.iter().enumerate() {
            for _ in 0..e {
                x = x.mul(ths[i]);
            }
        }
        for (i, &e) in mono.a.iter().enumerate() {
            for _ in 0..e {
                x = x.mul(ds[i]);
            }
        }
        out = out.add(&x.scale(c));
    }
    out
}

/// `^w M`: each generator `a` now acts by `rho(w a w^{-1})`.
pub fn twist(alg: &Ggha, m: &ModuleRep, w: &Perm) -> ModuleRep {
    let pw = alg.perm(w);
    let pwinv = alg.perm(&w.inverse());
    let mats = standard_generators(alg)
        .iter()
        .map(|(_, g)| act(alg, m, &alg.multiply_all(&[&pw, g, &pwinv])))
        .collect();
    m.with_matrices(mats, format!("twist {w}"))
}

/// `^delta M`: each generator `a` now acts by `rho(delta(a))`.
pub fn delta_twist(alg: &Ggha, m: &ModuleRep) -> ModuleRep {
    let mats = standard_generators(alg)
        .iter()
        .map(|(_, g)| act(alg, m, &alg.delta(g)))
        .collect();
    m.with_matrices(mats, "delta twist".into())
}

/// `M^*` with `<a.f, u> = <f, iota(a).u>`: generator matrices are transposes of
/// `rho(iota(a))`.
pub fn dual(alg: &Ggha, m: &ModuleRep) -> ModuleRep {
    let mats = standard_generators(alg)
        .iter()
        .map(|(_, g)| act(alg, m, &alg.iota(g)).transpose())
        .collect();
    let mut out = m.with_matrices(mats, "dual".into());
    out.basis = m.basis.iter().map(|b| format!("({b})*")).collect();
    out
}

/// Checks every defining relation of `H_k(r,n)` on the generator matrices;
/// returns the names of the failing relations.
pub fn relation_failures(alg: &Ggha, m: &ModuleRep) -> Vec<String> {
    let (r, n, d) = (alg.r(), alg.n(), m.dim());
    let g = |name: String| m.generator(&name).cloned();
    let (Some(ds), Some(ths), Some(ss)) = (
        (1..=n).map(|i| g(format!("D{i}"))).collect::<Option<Vec<_>>>(),
        (1..=n).map(|i| g(format!("theta{i}"))).collect::<Option<Vec<_>>>(),
        (1..n).map(|i| g(format!("s{i}"))).collect::<Option<Vec<_>>>(),
    ) else {
        return vec!["generator list".into()];
    };
    let id = Matrix::identity(r, d);
    let comm = |a: &Matrix, b: &Matrix| a.mul(b) == b.mul(a);
    let mut fails = Vec::new();
    let mut check = |ok: bool, name: String| {
        if !ok {
            fails.push(name);
        }
    };
    for i in 0..n {
        check(ths[i].pow(r) == id, format!("theta{}^r = 1", i + 1));
        for j in 0..n {
            check(comm(&ds[i], &ds[j]), format!("[D{}, D{}] = 0", i + 1, j + 1));
            check(comm(&ths[i], &ths[j]), format!("[theta{}, theta{}] = 0", i + 1, j + 1));
            check(comm(&ds[i], &ths[j]), format!("[D{}, theta{}] = 0", i + 1, j + 1));
        }
    }
    let ct_matrix = |ct: &crate::ggha::CtElem| {
        let mut out = Matrix::zeros(r, d, d);
        for (t, c) in ct {
            let mut x = id.clone();
            for (i, &e) in t.iter().enumerate() {
                x = x.mul(&ths[i].pow(e));
            }
            out = out.add(&x.scale(c));
        }
        out
    };
    for i in 0..n.saturating_sub(1) {
        let s = &ss[i];
        check(s.mul(s) == id, format!("s{}^2 = 1", i + 1));
        if i + 2 < n {
            let t = &ss[i + 1];
            check(
                s.mul(t).mul(s) == t.mul(s).mul(t),
                format!("braid s{} s{}", i + 1, i + 2),
            );
        }
        for j in i + 2..n.saturating_sub(1) {
            check(comm(s, &ss[j]), format!("[s{}, s{}] = 0", i + 1, j + 1));
        }
        for k in 0..n {
            let target = if k == i {
                i + 1
            } else if k == i + 1 {
                i
            } else {
                k
            };
            check(
                s.mul(&ths[k]) == ths[target].mul(s),
                format!("s{} theta{} = theta{} s{}", i + 1, k + 1, target + 1, i + 1),
            );
            if k != i && k != i + 1 {
                check(comm(s, &ds[k]), format!("[s{}, D{}] = 0", i + 1, k + 1));
            }
        }
        let cross = s.mul(&ds[i]).sub(&ds[i + 1].mul(s));
        check(
            cross == ct_matrix(alg.cross_constant(i)),
            format!("s{0} D{0} - D{1} s{0} = X{0}", i + 1, i + 2),
        );
    }
    fails
}

/// `{^w gamma~ : w in S_n}` with multiplicity.
pub fn expected_weights(chi: &CChar) -> Vec<CChar> {
    Perm::all(chi.n()).iter().map(|w| chi.twist(w)).collect()
}

fn kernel_of_power(a: &Matrix, lambda: &CycloNum, power: u32) -> Subspace {
    let d = a.rows();
    let shifted = a.sub(&Matrix::scalar(a.field(), d, lambda)).pow(power);
    Subspace::spanned_by(a.field(), d, &shifted.nullspace())
}

/// Dimension of the joint (generalized if `power > 1`) eigenspace of the
/// commutative generators for the joint eigenvalue `lambda`.
pub fn joint_eigenspace(m: &ModuleRep, lambda: &[CycloNum], power: u32) -> Subspace {
    let mats = m.commutative_matrices();
    assert_eq!(mats.len(), lambda.len());
    let mut space = Subspace::full(m.r, m.dim());
    for (a, l) in mats.iter().zip(lambda) {
        space = space.intersect(&kernel_of_power(a, l, power));
        if space.dimension() == 0 {
            break;
        }
    }
    space
}

/// Whether the generalized weights of `m` are exactly the given multiset.
pub fn weights_match(m: &ModuleRep, weights: &[Vec<CycloNum>]) -> bool {
    let d = m.dim() as u32;
    let mut distinct: Vec<(&Vec<CycloNum>, usize)> = Vec::new();
    for w in weights {
        match distinct.iter_mut().find(|(x, _)| *x == w) {
            Some((_, k)) => *k += 1,
            None => distinct.push((w, 1)),
        }
    }
    let total: usize = distinct.iter().map(|(_, k)| k).sum();
    total == m.dim()
        && distinct
            .iter()
            .all(|(w, k)| joint_eigenspace(m, w, d).dimension() == *k)
}

/// One `T`-isotypic piece `E_j` with its character `^{w_j} varpi`.
#[derive(Clone, Debug)]
pub struct IsotypicPiece {
    pub coset_rep: Perm,
    pub character: TChar,
    pub basis: Vec<Vector>,
}

/// `M = E_1 (+) .. (+) E_s` for `M = M(nu (x) varpi)`.
pub fn t_isotypic(alg: &Ggha, m: &ModuleRep) -> Result<Vec<IsotypicPiece>, PsmodError> {
    let (r, n) = (alg.r(), alg.n());
    let varpi = m
        .params
        .character
        .as_ref()
        .ok_or(PsmodError::NotPrincipalSeries)?
        .mu
        .clone();
    let ths: Vec<&Matrix> = (1..=n)
        .map(|i| m.require(&format!("theta{i}")))
        .collect::<Result<_, _>>()?;
    for a in &ths {
        for b in &ths {
            if a.mul(b) != b.mul(a) {
                return Err(PsmodError::TorusNotCommutative);
            }
        }
    }
    let stab = stabilizer_elements(&varpi).len();
    let mut pieces = Vec::new();
    for w in coset_representatives(&varpi) {
        let chr = varpi.twist(&w);
        let mut space = Subspace::full(r, m.dim());
        for (i, a) in ths.iter().enumerate() {
            let value = CycloNum::root(r, chr.index[i] as i64);
            space = space.intersect(&kernel_of_power(a, &value, 1));
        }
        if space.dimension() != stab {
            return Err(PsmodError::IsotypicDimension(chr.index, space.dimension(), stab));
        }
        pieces.push(IsotypicPiece {
            coset_rep: w,
            character: chr,
            basis: space.basis().to_vec(),
        });
    }
    Ok(pieces)
}

/// Positions of `w (x) m` for `w` in `S_n(varpi)`; these span `E_1`.
pub fn e1_positions(varpi: &TChar) -> Vec<usize> {
    let perms = Perm::all(varpi.n());
    stabilizer_elements(varpi)
        .iter()
        .map(|w| perms.iter().position(|p| p == w).unwrap())
        .collect()
}

fn unit_vectors(r: u32, d: usize, positions: &[usize]) -> Vec<Vector> {
    positions
        .iter()
        .map(|&p| {
            let mut v = vec![CycloNum::zero(r); d];
            v[p] = CycloNum::one(r);
            v
        })
        .collect()
}

/// `E_1(nu~)` as a module over `H_k(varpi)`, generated by the `D_i`, the
/// `theta_i` and the transpositions fixing `varpi`.
pub fn e1_module(alg: &Ggha, m: &ModuleRep) -> Result<ModuleRep, PsmodError> {
    let (r, n) = (alg.r(), alg.n());
    let chi = m.params.character.as_ref().ok_or(PsmodError::NotPrincipalSeries)?;
    let varpi = &chi.mu;
    let positions = e1_positions(varpi);
    let basis = unit_vectors(r, m.dim(), &positions);
    let mut gens: Vec<(String, GghaElem)> = standard_generators(alg).into_iter().take(2 * n).collect();
    for (u, v) in stabilizer(varpi) {
        gens.push((
            format!("({},{})", u + 1, v + 1),
            alg.perm(&Perm::transposition(n, u, v)),
        ));
    }
    let mut generators = Vec::new();
    for (name, g) in gens {
        let full = act(alg, m, &g);
        let matrix = full
            .restrict(&basis)
            .ok_or_else(|| PsmodError::NotStable(name.clone()))?;
        generators.push(Generator { name, matrix });
    }
    let all = Perm::all(n);
    Ok(ModuleRep {
        r,
        basis: positions.iter().map(|&p| format!("{} (x) m", all[p])).collect(),
        generators,
        commutative: (0..2 * n).collect(),
        params: ModuleParams {
            algebra: "H_k(varpi)".into(),
            operations: {
                let mut ops = m.params.operations.clone();
                ops.push("E_1".into());
                ops
            },
            ..m.params.clone()
        },
    })
}

/// `E_1` of `M(gamma (x) mu_varpi)` read as a module over the type-A graded
/// Hecke algebra of the blocks of `mu_varpi`, with `c = r kbar0`. `theta`
/// acts on `E_1` by the scalar character and is dropped.
pub fn e1_as_gha(alg: &Ggha, m: &ModuleRep) -> Result<ModuleRep, PsmodError> {
    let (r, n) = (alg.r(), alg.n());
    let chi = m.params.character.as_ref().ok_or(PsmodError::NotPrincipalSeries)?;
    if !chi.mu.is_sorted() {
        return Err(PsmodError::UnsortedCharacter(chi.mu.index.clone()));
    }
    let blocks = sort_char(&chi.mu).blocks;
    let positions = e1_positions(&chi.mu);
    let basis = unit_vectors(r, m.dim(), &positions);
    let restrict = |name: &str| -> Result<Matrix, PsmodError> {
        m.require(name)?
            .restrict(&basis)
            .ok_or_else(|| PsmodError::NotStable(name.to_string()))
    };
    let mut generators = Vec::new();
    for i in 1..=n {
        generators.push(Generator {
            name: format!("lambda{i}"),
            matrix: restrict(&format!("D{i}"))?,
        });
    }
    for i in 0..n.saturating_sub(1) {
        if blocks.iter().any(|b| b.contains(&i) && b.contains(&(i + 1))) {
            generators.push(Generator {
                name: format!("s{}", i + 1),
                matrix: restrict(&format!("s{}", i + 1))?,
            });
        }
    }
    let all = Perm::all(n);
    let c = alg.kbar0().scale(&num_rational::BigRational::from_integer(r.into()));
    Ok(ModuleRep {
        r,
        basis: positions.iter().map(|&p| format!("{} (x) m", all[p])).collect(),
        generators,
        commutative: (0..n).collect(),
        params: ModuleParams {
            algebra: "H_gr(c, type A)".into(),
            r,
            n,
            kbar0: None,
            c: Some(c),
            character: None,
            blocks: Some(blocks.iter().map(|b| b.clone().collect()).collect()),
            operations: vec!["E_1 as type-A module".into()],
        },
    })
}

/// Basis of `Hom(M, N)`: all `X` with `X rho_M(g) = rho_N(g) X` for every
/// generator, matched by name.
pub fn intertwiners(m: &ModuleRep, n: &ModuleRep) -> Vec<Matrix> {
    let (dm, dn, r) = (m.dim(), n.dim(), m.r);
    let unknowns = dm * dn;
    let mut eqs: Vec<Vector> = Vec::new();
    for g in &m.generators {
        let a = &g.matrix;
        let b = n
            .generator(&g.name)
            .unwrap_or_else(|| panic!("generator {} missing on target", g.name));
        for p in 0..dn {
            for q in 0..dm {
                // (X A)_{pq} - (B X)_{pq}
                let mut row = vec![CycloNum::zero(r); unknowns];
                for k in 0..dm {
                    row[p * dm + k] += a.get(k, q);
                }
                for k in 0..dn {
                    row[k * dm + q] -= b.get(p, k);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let system = if eqs.is_empty() {
        Matrix::zeros(r, 1, unknowns)
    } else {
        Matrix::from_rows(r, Subspace::spanned_by(r, unknowns, &eqs).basis().to_vec())
    };
    system
        .nullspace()
        .into_iter()
        .map(|v| {
            let rows = (0..dn).map(|p| v[p * dm..(p + 1) * dm].to_vec()).collect();
            Matrix::from_rows(r, rows)
        })
        .collect()
}

/// Whether `x rho_M(g) = rho_N(g) x` for every generator.
pub fn is_intertwiner(x: &Matrix, m: &ModuleRep, n: &ModuleRep) -> bool {
    m.generators
        .iter()
        .all(|g| n.generator(&g.name).is_some_and(|b| x.mul(&g.matrix) == b.mul(x)))
}

/// An invertible intertwiner `M -> N`, if one exists. Tries the basis
/// elements first, then seeded random combinations (a nonzero determinant
/// polynomial vanishes at a random point with probability at most
/// `dim / 1000` per try).
pub fn find_isomorphism(m: &ModuleRep, n: &ModuleRep) -> Option<Matrix> {
    if m.dim() != n.dim() {
        return None;
    }
    let homs = intertwiners(m, n);
    if let Some(x) = homs.iter().find(|x| x.is_invertible()) {
        return Some(x.clone());
    }
    if homs.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..24 {
        let mut x = Matrix::zeros(m.r, n.dim(), m.dim());
        for h in &homs {
            x = x.add(&h.scale(&CycloNum::from_int(m.r, rng.gen_range(1..=1000))));
        }
        if x.is_invertible() {
            return Some(x);
        }
    }
    None
}

/// A generalized-eigenvector basis of the `D`-monomial values, used for the
/// upper-triangularity claim: `C`-generators are upper triangular in the
/// length-ordered basis.
pub fn commutative_part_is_triangular(m: &ModuleRep) -> bool {
    m.commutative_matrices().iter().all(|a| a.is_upper_triangular())
}

/// Value of the element `theta^t D^a` placed after `w`, as a `GghaElem`.
pub fn basis_monomial(r: u32, w: &Perm, t: Vec<u32>, a: Vec<u32>) -> GghaElem {
    GghaElem::monomial(r, GghaMono { w: w.clone(), t, a }, CycloNum::one(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(r: u32, a: i64) -> CycloNum {
        CycloNum::from_int(r, a)
    }

    #[test]
    fn rank_one_module() {
        let alg = Ggha::new(3, 1, q(3, 1));
        let chi = CChar::new(vec![q(3, 5)], TChar::new(3, vec![2]));
        let m = principal_series(&alg, &chi);
        assert_eq!(m.dim(), 1);
        assert_eq!(m.generator("D1").unwrap().get(0, 0), &q(3, 5));
        assert_eq!(m.generator("theta1").unwrap().get(0, 0), &CycloNum::root(3, 2));
    }

    #[test]
    fn two_by_two_is_triangular_with_twisted_diagonal() {
        let alg = Ggha::new(2, 2, q(2, 1));
        let chi = CChar::new(vec![q(2, 3), q(2, -1)], TChar::trivial(2, 2));
        let m = principal_series(&alg, &chi);
        let d1 = m.generator("D1").unwrap();
        assert!(d1.is_upper_triangular());
        assert_eq!(d1.diagonal(), vec![q(2, 3), q(2, -1)]);
        assert!(relation_failures(&alg, &m).is_empty());
    }

    #[test]
    fn principal_series_satisfies_relations() {
        for (r, n) in [(2u32, 3usize), (3, 2), (3, 3)] {
            let alg = Ggha::new(r, n, CycloNum::from_frac(r, 2, 3));
            let gamma = (0..n).map(|i| CycloNum::from_frac(r, 3 * i as i64 - 1, 2)).collect();
            let mu = TChar::new(r, (0..n as u32).map(|i| i * 2).collect());
            let m = principal_series(&alg, &CChar::new(gamma, mu));
            assert_eq!(relation_failures(&alg, &m), Vec::<String>::new());
            assert!(commutative_part_is_triangular(&m));
        }
    }

    #[test]
    fn isotypic_pieces() {
        let alg = Ggha::new(2, 3, q(2, 1));
        let chi = CChar::new(vec![q(2, 1), q(2, 2), q(2, 0)], TChar::new(2, vec![0, 0, 1]));
        let m = principal_series(&alg, &chi);
        let pieces = t_isotypic(&alg, &m).unwrap();
        assert_eq!(pieces.len(), 3);
        assert!(pieces.iter().all(|p| p.basis.len() == 2));
        let e1 = e1_module(&alg, &m).unwrap();
        assert_eq!(e1.dim(), 2);

        let flat = principal_series(&alg, &CChar::new(chi.gamma.clone(), TChar::trivial(2, 3)));
        assert_eq!(t_isotypic(&alg, &flat).unwrap().len(), 1);
        let alg2 = Ggha::new(2, 2, q(2, 1));
        let split = principal_series(&alg2, &CChar::new(vec![q(2, 0), q(2, 0)], TChar::new(2, vec![0, 1])));
        assert_eq!(t_isotypic(&alg2, &split).unwrap().len(), 2);
    }

    #[test]
    fn twist_by_identity_is_identity() {
        let alg = Ggha::new(2, 2, q(2, 1));
        let m = principal_series(&alg, &CChar::new(vec![q(2, 2), q(2, 0)], TChar::trivial(2, 2)));
        let t = twist(&alg, &m, &Perm::identity(2));
        for (a, b) in m.matrices().zip(t.matrices()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn unsorted_character_is_rejected() {
        let alg = Ggha::new(2, 2, q(2, 1));
        let m = principal_series(&alg, &CChar::new(vec![q(2, 2), q(2, 0)], TChar::new(2, vec![1, 0])));
        assert_eq!(
            e1_as_gha(&alg, &m).unwrap_err(),
            PsmodError::UnsortedCharacter(vec![1, 0])
        );
    }

    #[test]
    fn schur_on_a_simple_module() {
        let alg = Ggha::new(2, 2, q(2, 1));
        let m = principal_series(&alg, &CChar::new(vec![q(2, 5), q(2, 0)], TChar::trivial(2, 2)));
        assert_eq!(intertwiners(&m, &m).len(), 1);
    }
}
