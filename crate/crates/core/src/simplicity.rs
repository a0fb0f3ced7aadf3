//! Brute-force irreducibility and composition length for [`ModuleRep`]s.
//!
//! The first pass splits the module into simultaneous eigenspaces of the
//! commutative generators and spins eigenvectors. When some eigenspace is
//! degenerate, or a characteristic polynomial does not split over the field,
//! the matrix algebra generated by the action is examined directly: full
//! matrix algebra means absolutely simple, a nonzero trace-form radical yields
//! a submodule, and a semisimple algebra is split using its commutant.

use serde::Serialize;
use thiserror::Error;

use crate::cyclo::CycloNum;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::poly::{charpoly, field_roots};
use crate::psmod::{intertwiners, ModuleRep};

pub const DEFAULT_BOUND: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplicityError {
    #[error("cannot spin the zero vector")]
    ZeroVector,
    #[error("commutative generators {0} and {1} do not commute")]
    NonCommutative(String, String),
    #[error("dimension {dim} exceeds the desk-scale bound {bound}")]
    TooLarge { dim: usize, bound: usize },
    #[error("undecided: {0}")]
    Undecided(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Simple,
    Reducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Every simultaneous eigenspace is a line and its vector spins to `M`.
    EigenvectorsSpinFull,
    /// The action spans all `d x d` matrices.
    FullMatrixAlgebra,
    /// A proper nonzero submodule was found.
    Submodule,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub vector: Vector,
    pub submodule: Vec<Vector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplicityReport {
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub witness: Option<Witness>,
    pub composition_factor_dims: Vec<usize>,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        self.verdict == Verdict::Simple
    }
}

/// The cyclic submodule generated by `v`.
pub fn spin(m: &ModuleRep, v: &[CycloNum]) -> Result<Vec<Vector>, SimplicityError> {
    if v.iter().all(CycloNum::is_zero) {
        return Err(SimplicityError::ZeroVector);
    }
    let mut space = Subspace::zero(m.r, m.dim());
    let mut queue = vec![v.to_vec()];
    space.insert(v);
    while let Some(x) = queue.pop() {
        for a in m.matrices() {
            let y = a.mul_vec(&x);
            if space.insert(&y) {
                queue.push(y);
            }
        }
        if space.dimension() == m.dim() {
            break;
        }
    }
    Ok(space.basis().to_vec())
}

fn check_commutative(m: &ModuleRep) -> Result<(), SimplicityError> {
    for (x, &i) in m.commutative.iter().enumerate() {
        for &j in &m.commutative[x + 1..] {
            let (a, b) = (&m.generators[i].matrix, &m.generators[j].matrix);
            if a.mul(b) != b.mul(a) {
                return Err(SimplicityError::NonCommutative(
                    m.generators[i].name.clone(),
                    m.generators[j].name.clone(),
                ));
            }
        }
    }
    Ok(())
}

/// Simultaneous eigenspaces of the commutative generators, and whether every
/// characteristic polynomial split over the field.
pub fn simultaneous_eigenspaces(m: &ModuleRep) -> (Vec<Subspace>, bool) {
    let d = m.dim();
    let mut spaces = vec![Subspace::full(m.r, d)];
    let mut split = true;
    for a in m.commutative_matrices() {
        let (roots, ok) = field_roots(&charpoly(a));
        split &= ok;
        let mut next = Vec::new();
        for (lambda, _) in &roots {
            let shifted = a.sub(&Matrix::scalar(m.r, d, lambda));
            let kernel = Subspace::spanned_by(m.r, d, &shifted.nullspace());
            for s in &spaces {
                let piece = s.intersect(&kernel);
                if piece.dimension() > 0 {
                    next.push(piece);
                }
            }
        }
        spaces = next;
    }
    (spaces, split)
}

fn flatten(a: &Matrix) -> Vector {
    a.entries().to_vec()
}

/// Basis of the unital matrix algebra generated by the action.
pub fn spanned_algebra(m: &ModuleRep) -> Vec<Matrix> {
    let (r, d) = (m.r, m.dim());
    let mut space = Subspace::zero(r, d * d);
    let id = Matrix::identity(r, d);
    space.insert(&flatten(&id));
    let mut elems = vec![id];
    let mut k = 0;
    while k < elems.len() && space.dimension() < d * d {
        let x = elems[k].clone();
        for g in m.matrices() {
            let y = g.mul(&x);
            if space.insert(&flatten(&y)) {
                elems.push(y);
            }
        }
        k += 1;
    }
    elems
}

fn proper_witness(m: &ModuleRep, v: Vector) -> Result<Option<Witness>, SimplicityError> {
    let sub = spin(m, &v)?;
    Ok((sub.len() < m.dim()).then(|| Witness {
        vector: v,
        submodule: sub,
    }))
}

fn nonzero_column(a: &Matrix) -> Option<Vector> {
    (0..a.cols())
        .map(|j| a.column(j))
        .find(|c| c.iter().any(|x| !x.is_zero()))
}

/// `Ok(None)`: simple; `Ok(Some(w))`: reducible with witness `w`.
fn find_submodule(m: &ModuleRep) -> Result<(Option<Witness>, Certificate), SimplicityError> {
    let (r, d) = (m.r, m.dim());
    if d <= 1 {
        return Ok((None, Certificate::EigenvectorsSpinFull));
    }
    check_commutative(m)?;
    let (spaces, split) = simultaneous_eigenspaces(m);
    for s in &spaces {
        for v in s.basis() {
            if let Some(w) = proper_witness(m, v.clone())? {
                return Ok((Some(w), Certificate::Submodule));
            }
        }
    }
    if split && spaces.iter().all(|s| s.dimension() == 1) {
        return Ok((None, Certificate::EigenvectorsSpinFull));
    }

    let algebra = spanned_algebra(m);
    if algebra.len() == d * d {
        return Ok((None, Certificate::FullMatrixAlgebra));
    }
    // Radical of the spanned algebra: the kernel of the trace form.
    let k = algebra.len();
    let mut gram = Matrix::zeros(r, k, k);
    for i in 0..k {
        for j in 0..k {
            let p = algebra[i].mul(&algebra[j]);
            let mut tr = CycloNum::zero(r);
            for t in 0..d {
                tr += p.get(t, t);
            }
            gram.set(i, j, tr);
        }
    }
    for coeffs in gram.nullspace() {
        let mut x = Matrix::zeros(r, d, d);
        for (c, a) in coeffs.iter().zip(&algebra) {
            x = x.add(&a.scale(c));
        }
        if let Some(v) = nonzero_column(&x) {
            if let Some(w) = proper_witness(m, v)? {
                return Ok((Some(w), Certificate::Submodule));
            }
        }
    }
    // Semisimple action: eigenvectors of a non-scalar endomorphism.
    for phi in intertwiners(m, m) {
        let (roots, _) = field_roots(&charpoly(&phi));
        for (lambda, _) in roots {
            let shifted = phi.sub(&Matrix::scalar(r, d, &lambda));
            if shifted.is_zero() {
                continue;
            }
            if let Some(v) = shifted.nullspace().into_iter().next() {
                if let Some(w) = proper_witness(m, v)? {
                    return Ok((Some(w), Certificate::Submodule));
                }
            }
        }
    }
    Err(SimplicityError::Undecided(format!(
        "dimension {d}: spanned algebra has dimension {k} < {}, no rational submodule found",
        d * d
    )))
}

/// Composition factor dimensions, peeling submodules recursively.
pub fn composition_length(m: &ModuleRep, bound: usize) -> Result<Vec<usize>, SimplicityError> {
    if m.dim() > bound {
        return Err(SimplicityError::TooLarge { dim: m.dim(), bound });
    }
    factors(m)
}

fn factors(m: &ModuleRep) -> Result<Vec<usize>, SimplicityError> {
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    match find_submodule(m)?.0 {
        None => Ok(vec![m.dim()]),
        Some(w) => {
            let sub = m.submodule(&w.submodule).expect("spun subspace is stable");
            let quo = m.quotient(&w.submodule).expect("spun subspace is stable");
            let mut out = factors(&sub)?;
            out.extend(factors(&quo)?);
            out.sort_unstable();
            Ok(out)
        }
    }
}

pub fn is_simple(m: &ModuleRep) -> Result<SimplicityReport, SimplicityError> {
    is_simple_bounded(m, DEFAULT_BOUND)
}

pub fn is_simple_bounded(m: &ModuleRep, bound: usize) -> Result<SimplicityReport, SimplicityError> {
    if m.dim() > bound {
        return Err(SimplicityError::TooLarge { dim: m.dim(), bound });
    }
    let (witness, certificate) = find_submodule(m)?;
    match witness {
        None => Ok(SimplicityReport {
            verdict: Verdict::Simple,
            certificate,
            witness: None,
            composition_factor_dims: vec![m.dim()],
        }),
        Some(w) => {
            assert!(!w.submodule.is_empty() && w.submodule.len() < m.dim());
            let composition_factor_dims = composition_length(m, bound)?;
            Ok(SimplicityReport {
                verdict: Verdict::Reducible,
                certificate,
                witness: Some(w),
                composition_factor_dims,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggha::Ggha;
    use crate::psmod::{principal_series, CChar, Generator, ModuleParams};
    use crate::refl_group::TChar;

    fn q(n: i64) -> CycloNum {
        CycloNum::from_int(2, n)
    }

    fn module(gens: Vec<(&str, Matrix)>, commutative: Vec<usize>) -> ModuleRep {
        let d = gens[0].1.rows();
        ModuleRep {
            r: gens[0].1.field(),
            basis: (0..d).map(|i| i.to_string()).collect(),
            generators: gens
                .into_iter()
                .map(|(n, m)| Generator {
                    name: n.into(),
                    matrix: m,
                })
                .collect(),
            commutative,
            params: ModuleParams::default(),
        }
    }

    #[test]
    fn one_dimensional_is_simple() {
        let m = module(vec![("a", Matrix::scalar(2, 1, &q(3)))], vec![0]);
        let rep = is_simple(&m).unwrap();
        assert!(rep.is_simple());
        assert_eq!(spin(&m, &[q(5)]).unwrap().len(), 1);
        assert_eq!(spin(&m, &[q(0)]), Err(SimplicityError::ZeroVector));
    }

    #[test]
    fn reducible_principal_series() {
        let alg = Ggha::new(2, 2, q(1));
        let m = principal_series(&alg, &CChar::new(vec![q(2), q(0)], TChar::trivial(2, 2)));
        let rep = is_simple(&m).unwrap();
        assert_eq!(rep.verdict, Verdict::Reducible);
        assert_eq!(rep.composition_factor_dims, vec![1, 1]);
        assert_eq!(rep.witness.unwrap().submodule.len(), 1);
    }

    #[test]
    fn trivial_stabilizer_is_simple() {
        let alg = Ggha::new(2, 2, q(1));
        for nu in [[2, 0], [0, 0], [1, -1]] {
            let m = principal_series(&alg, &CChar::new(vec![q(nu[0]), q(nu[1])], TChar::new(2, vec![0, 1])));
            assert!(is_simple(&m).unwrap().is_simple());
        }
    }

    #[test]
    fn regular_representation_of_s2_splits() {
        // Group algebra of S_2 acting on itself; the commutative part is zero.
        let swap = Matrix::from_rows(2, vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        let zero = Matrix::zeros(2, 2, 2);
        let m = module(vec![("D", zero), ("s", swap)], vec![0]);
        let rep = is_simple(&m).unwrap();
        assert_eq!(rep.verdict, Verdict::Reducible);
        assert_eq!(rep.composition_factor_dims, vec![1, 1]);
    }

    #[test]
    fn nonsplit_but_simple_over_the_field() {
        // Rotation by 90 degrees over Q: simple over Q but not absolutely.
        let rot = Matrix::from_rows(
            1,
            vec![
                vec![CycloNum::from_int(1, 0), CycloNum::from_int(1, -1)],
                vec![CycloNum::from_int(1, 1), CycloNum::from_int(1, 0)],
            ],
        );
        let m = module(vec![("a", rot)], vec![0]);
        assert!(matches!(is_simple(&m), Err(SimplicityError::Undecided(_))));
    }

    #[test]
    fn bound_is_enforced() {
        let m = module(vec![("a", Matrix::identity(2, 3))], vec![0]);
        assert_eq!(
            composition_length(&m, 2),
            Err(SimplicityError::TooLarge { dim: 3, bound: 2 })
        );
    }
}
