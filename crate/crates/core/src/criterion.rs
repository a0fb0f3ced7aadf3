//! The irreducibility criterion for `M(nu (x) varpi)`: sort `varpi`, transport
//! `nu`, and look for pairs in the stabilizer of the sorted character whose
//! `nu`-difference is `+-r kbar0`. Also the sweep comparing it with the
//! brute-force oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::CycloNum;
use crate::ggha::Ggha;
use crate::gha_a::principal_series_a;
use crate::psmod::{e1_module, principal_series, CChar};
use crate::refl_group::{sort_char, stabilizer, Perm, TChar};
use crate::simplicity::{composition_length, is_simple_bounded, SimplicityError, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct PairWitness {
    pub pair: (usize, usize),
    pub difference: CycloNum,
    /// `+1` when the difference is `r kbar0`, `-1` when it is `-r kbar0`.
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub sigma: Perm,
    pub sorted_char: TChar,
    pub sorted_nu: Vec<CycloNum>,
    pub p_set: Vec<(usize, usize)>,
    pub verdict: Verdict,
    pub witnesses: Vec<PairWitness>,
}

fn r_kbar0(r: u32, kbar0: &CycloNum) -> CycloNum {
    kbar0.scale(&BigRational::from_integer(BigInt::from(r)))
}

fn sign_against(diff: &CycloNum, target: &CycloNum) -> Option<i8> {
    if diff == target {
        Some(1)
    } else if *diff == -target {
        Some(-1)
    } else {
        None
    }
}

/// `P_varpi(^sigma nu)`.
pub fn p_set(nu: &[CycloNum], varpi: &TChar, kbar0: &CycloNum) -> CriterionReport {
    let sorted = sort_char(varpi);
    let sorted_nu = sorted.sigma.act_on_vec(nu);
    let target = r_kbar0(varpi.r, kbar0);
    let mut p = Vec::new();
    let mut witnesses = Vec::new();
    for (i, j) in stabilizer(&sorted.mu) {
        let difference = &sorted_nu[i] - &sorted_nu[j];
        if let Some(sign) = sign_against(&difference, &target) {
            p.push((i, j));
            witnesses.push(PairWitness {
                pair: (i, j),
                difference,
                sign,
            });
        }
    }
    CriterionReport {
        sigma: sorted.sigma,
        sorted_char: sorted.mu,
        sorted_nu,
        verdict: if p.is_empty() {
            Verdict::Simple
        } else {
            Verdict::Reducible
        },
        p_set: p,
        witnesses,
    }
}

/// Pairs `u < v` with `varpi_u = varpi_v` and `nu_u - nu_v = +-r kbar0`, no sorting.
pub fn p_set_unsorted(nu: &[CycloNum], varpi: &TChar, kbar0: &CycloNum) -> Vec<(usize, usize)> {
    let target = r_kbar0(varpi.r, kbar0);
    stabilizer(varpi)
        .into_iter()
        .filter(|&(u, v)| sign_against(&(&nu[u] - &nu[v]), &target).is_some())
        .collect()
}

/// The verdict for `(^w nu, ^w varpi)` is the same for every `w`, and agrees
/// with the unsorted form.
pub fn sigma_independence(nu: &[CycloNum], varpi: &TChar, kbar0: &CycloNum) -> bool {
    let base = p_set(nu, varpi, kbar0).verdict;
    Perm::all(varpi.n()).iter().all(|w| {
        let (nu_w, varpi_w) = (w.act_on_vec(nu), varpi.twist(w));
        p_set(&nu_w, &varpi_w, kbar0).verdict == base
            && p_set_unsorted(&nu_w, &varpi_w, kbar0).is_empty() == (base == Verdict::Simple)
    })
}

/// All vectors of length `n` with entries from `values`.
pub fn grid(values: &[CycloNum], n: usize) -> Vec<Vec<CycloNum>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Rationals `lo..=hi` in steps of `1/den`, embedded in `Q(z_r)`.
pub fn rational_range(r: u32, lo: i64, hi: i64, den: i64) -> Vec<CycloNum> {
    (lo * den..=hi * den).map(|k| CycloNum::from_frac(r, k, den)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub nu: Vec<CycloNum>,
    pub varpi: Vec<u32>,
    pub kbar0: CycloNum,
    pub criterion: Verdict,
    pub oracle: Option<Verdict>,
    pub factors: Vec<usize>,
    pub refusal: Option<String>,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.oracle == Some(self.criterion)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub agree: usize,
    pub disagree: usize,
    pub refused: usize,
}

impl SweepSummary {
    pub fn of(rows: &[SweepRow]) -> Self {
        let mut s = SweepSummary {
            instances: rows.len(),
            ..Default::default()
        };
        for row in rows {
            match row.oracle {
                None => s.refused += 1,
                Some(_) if row.agrees() => s.agree += 1,
                Some(_) => s.disagree += 1,
            }
        }
        s
    }

    pub fn line(&self) -> String {
        format!(
            "{} instances, {} agree, {} disagree, {} refused",
            self.instances, self.agree, self.disagree, self.refused
        )
    }
}

pub fn check_instance(alg: &Ggha, nu: &[CycloNum], varpi: &TChar, bound: usize) -> SweepRow {
    let criterion = p_set(nu, varpi, alg.kbar0()).verdict;
    let m = principal_series(alg, &CChar::new(nu.to_vec(), varpi.clone()));
    let (oracle, factors, refusal) = match is_simple_bounded(&m, bound) {
        Ok(rep) => (Some(rep.verdict), rep.composition_factor_dims, None),
        Err(e) => (None, Vec::new(), Some(e.to_string())),
    };
    SweepRow {
        nu: nu.to_vec(),
        varpi: varpi.index.clone(),
        kbar0: alg.kbar0().clone(),
        criterion,
        oracle,
        factors,
        refusal,
    }
}

/// Compares the criterion with the oracle on every `(nu, varpi)`; rows come
/// back in input order whatever the thread count.
pub fn criterion_sweep(
    alg: &Ggha,
    nus: &[Vec<CycloNum>],
    varpis: &[TChar],
    bound: usize,
    jobs: usize,
) -> (Vec<SweepRow>, SweepSummary) {
    let cases: Vec<(&Vec<CycloNum>, &TChar)> = varpis.iter().flat_map(|v| nus.iter().map(move |nu| (nu, v))).collect();
    let run = || -> Vec<SweepRow> {
        cases
            .par_iter()
            .map(|(nu, v)| check_instance(alg, nu, v, bound))
            .collect()
    };
    let rows = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    let summary = SweepSummary::of(&rows);
    (rows, summary)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lengths {
    pub principal_series: Vec<usize>,
    pub e1: Vec<usize>,
    pub type_a: Vec<usize>,
}

impl Lengths {
    pub fn agree(&self) -> bool {
        self.principal_series.len() == self.e1.len() && self.e1.len() == self.type_a.len()
    }
}

/// Composition factors of `M(nu (x) varpi)`, of `E_1` over `H_k(varpi)`, and of
/// the type-A principal series at `^sigma nu` with `c = r kbar0`.
pub fn lengths(alg: &Ggha, nu: &[CycloNum], varpi: &TChar, bound: usize) -> Result<Lengths, SimplicityError> {
    let m = principal_series(alg, &CChar::new(nu.to_vec(), varpi.clone()));
    let e1 = e1_module(alg, &m).expect("principal series has an E_1 piece");
    let sorted = sort_char(varpi);
    let lambda = sorted.sigma.act_on_vec(nu);
    let ma = principal_series_a(&lambda, &sorted.blocks, &r_kbar0(alg.r(), alg.kbar0()));
    Ok(Lengths {
        principal_series: composition_length(&m, bound)?,
        e1: composition_length(&e1, bound)?,
        type_a: composition_length(&ma, bound)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(r: u32, n: i64) -> CycloNum {
        CycloNum::from_int(r, n)
    }

    #[test]
    fn distinct_characters_are_always_simple() {
        let varpi = TChar::new(3, vec![2, 0, 1]);
        for nu in grid(&rational_range(3, -1, 1, 1), 3) {
            let rep = p_set(&nu, &varpi, &q(3, 1));
            assert!(rep.p_set.is_empty());
            assert!(sigma_independence(&nu, &varpi, &q(3, 1)));
        }
    }

    #[test]
    fn rank_two_examples() {
        let varpi = TChar::trivial(2, 2);
        let rep = p_set(&[q(2, 2), q(2, 0)], &varpi, &q(2, 1));
        assert_eq!(rep.p_set, vec![(0, 1)]);
        assert_eq!(rep.verdict, Verdict::Reducible);
        assert_eq!(rep.witnesses[0].sign, 1);
        let rep = p_set(&[q(2, 0), q(2, 0)], &varpi, &q(2, 1));
        assert_eq!(rep.verdict, Verdict::Simple);
        assert!(sigma_independence(&[q(2, 2), q(2, 0)], &varpi, &q(2, 1)));
    }

    #[test]
    fn sorting_transports_nu() {
        // varpi = (1,0,1): sorted (0,1,1) with nu moved along.
        let varpi = TChar::new(2, vec![1, 0, 1]);
        let nu = [q(2, 5), q(2, 9), q(2, 3)];
        let rep = p_set(&nu, &varpi, &q(2, 1));
        assert_eq!(rep.sorted_char.index, vec![0, 1, 1]);
        assert_eq!(rep.sorted_nu, vec![q(2, 9), q(2, 5), q(2, 3)]);
        assert_eq!(rep.p_set, vec![(1, 2)]);
        assert_eq!(p_set_unsorted(&nu, &varpi, &q(2, 1)), vec![(0, 2)]);
    }

    #[test]
    fn zero_kbar0_needs_equal_coordinates() {
        let varpi = TChar::trivial(2, 2);
        let zero = CycloNum::zero(2);
        assert_eq!(p_set(&[q(2, 1), q(2, 1)], &varpi, &zero).verdict, Verdict::Reducible);
        assert_eq!(p_set(&[q(2, 1), q(2, 2)], &varpi, &zero).verdict, Verdict::Simple);
    }

    #[test]
    fn small_sweep_agrees() {
        let alg = Ggha::new(2, 2, q(2, 1));
        let (rows, summary) = criterion_sweep(&alg, &grid(&rational_range(2, -2, 2, 1), 2), &TChar::all(2, 2), 24, 2);
        assert_eq!(summary.disagree, 0, "{:?}", rows.iter().find(|r| !r.agrees()));
        assert_eq!(summary.refused, 0);
        assert_eq!(summary.instances, 100);
    }
}
