//! The `verify` suites. Each returns a list of named exact checks.

use hecke_core::cherednik::{CherElem, CherMono, Cherednik, Params};
use hecke_core::cyclo::CycloNum;
use hecke_core::ggha::{Ggha, GghaElem, GghaMono};
use hecke_core::psmod::{act, delta_twist, dual, find_isomorphism, is_intertwiner, principal_series, twist, CChar};
use hecke_core::refl_group::{all_torsions, sort_char, GroupElem, Perm, TChar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub passed: bool,
}

#[derive(Default)]
struct Log(Vec<Check>);

impl Log {
    fn push(&mut self, check: String, passed: bool) {
        self.0.push(Check { check, passed });
    }
}

pub const SUITES: [&str; 5] = ["relations", "pbw", "realization", "center", "duality"];

pub fn run(suite: &str, cfg: &RunConfig, fuzz: usize) -> Vec<Check> {
    let mut log = Log::default();
    match suite {
        "relations" => relations(cfg, &mut log),
        "pbw" => pbw(cfg, fuzz, &mut log),
        "realization" => realization(cfg, &mut log),
        "center" => center(cfg, &mut log),
        "duality" => duality(cfg, fuzz, &mut log),
        _ => unreachable!("suite names are validated by the parser"),
    }
    log.0
}

fn params(cfg: &RunConfig) -> Params {
    Params::new(cfg.r, cfg.n, cfg.k.clone(), cfg.kbar0.clone())
}

fn relations(cfg: &RunConfig, log: &mut Log) {
    let (r, n) = (cfg.r, cfg.n);
    let h = Cherednik::new(params(cfg));
    let ds: Vec<CherElem> = (0..n).map(|j| h.dunkl_d(j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            log.push(
                format!("[D{},D{}] = 0", i + 1, j + 1),
                h.commutator_of(&ds[i], &ds[j]).is_zero(),
            );
        }
        for j in 0..n {
            let xi = h.group(&GroupElem::theta(r, n, j, 1));
            log.push(
                format!("xi{} D{} = D{} xi{}", j + 1, i + 1, i + 1, j + 1),
                h.commutator_of(&xi, &ds[i]).is_zero(),
            );
        }
        for j in (0..n.saturating_sub(1)).filter(|&j| i != j && i != j + 1) {
            let s = h.group(&GroupElem::from_perm(r, Perm::simple(n, j)));
            log.push(
                format!("s{} D{} = D{} s{}", j + 1, i + 1, i + 1, j + 1),
                h.commutator_of(&s, &ds[i]).is_zero(),
            );
        }
    }
    let derived = Ggha::from_cherednik(&h);
    let closed = Ggha::new(r, n, cfg.kbar0.clone());
    for i in 0..n.saturating_sub(1) {
        log.push(
            format!("X{} = s{} D{} - D{} s{} equals -c~", i + 1, i + 1, i + 1, i + 2, i + 1),
            derived.cross_constant(i) == closed.cross_constant(i),
        );
    }
}

fn rand_q(rng: &mut ChaCha8Rng, r: u32) -> CycloNum {
    CycloNum::from_frac(r, rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn rand_nonzero_q(rng: &mut ChaCha8Rng, r: u32) -> CycloNum {
    CycloNum::from_frac(
        r,
        rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 },
        rng.gen_range(1..=4),
    )
}

fn rand_cyclo(rng: &mut ChaCha8Rng, r: u32) -> CycloNum {
    let x = rand_q(rng, r);
    if r > 2 && rng.gen_bool(0.5) {
        &x + &(&CycloNum::root(r, 1) * &rand_q(rng, r))
    } else {
        x
    }
}

fn rand_cher(rng: &mut ChaCha8Rng, group: &[GroupElem], n: usize, r: u32) -> CherElem {
    let mut e = CherElem::zero(r, n);
    for _ in 0..rng.gen_range(1..=2) {
        let (mut x, mut y) = (vec![0; n], vec![0; n]);
        for _ in 0..rng.gen_range(0..=2) {
            let slot = if rng.gen_bool(0.5) { &mut x } else { &mut y };
            slot[rng.gen_range(0..n)] += 1;
        }
        let g = group[rng.gen_range(0..group.len())].clone();
        e.add_term(CherMono { x, g, y }, rand_nonzero_q(rng, r));
    }
    e
}

fn rand_ggha(rng: &mut ChaCha8Rng, perms: &[Perm], tors: &[Vec<u32>], n: usize, r: u32) -> GghaElem {
    let mut e = GghaElem::zero(r, n);
    for _ in 0..rng.gen_range(1..=3) {
        let mut a = vec![0; n];
        for _ in 0..rng.gen_range(0..=3) {
            a[rng.gen_range(0..n)] += 1;
        }
        let mono = GghaMono {
            w: perms[rng.gen_range(0..perms.len())].clone(),
            t: tors[rng.gen_range(0..tors.len())].clone(),
            a,
        };
        e.add_term(mono, rand_cyclo(rng, r));
    }
    e
}

fn pbw(cfg: &RunConfig, fuzz: usize, log: &mut Log) {
    let (r, n) = (cfg.r, cfg.n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let h = Cherednik::new(params(cfg));
    let g = Ggha::new(r, n, cfg.kbar0.clone());
    let group = GroupElem::enumerate(r, n);
    let (perms, tors) = (Perm::all(n), all_torsions(r, n));
    for t in 0..fuzz {
        let [a, b, c] = [0, 1, 2].map(|_| rand_cher(&mut rng, &group, n, r));
        let lhs = h.multiply(&h.multiply(&a, &b), &c);
        let ok = lhs == h.multiply(&a, &h.multiply(&b, &c)) && h.multiply(&h.one(), &lhs) == lhs;
        log.push(format!("H(G,k) triple {t}: (ab)c = a(bc)"), ok);

        let [a, b, c] = [0, 1, 2].map(|_| rand_ggha(&mut rng, &perms, &tors, n, r));
        let lhs = g.multiply(&g.multiply(&a, &b), &c);
        let ok = lhs == g.multiply(&a, &g.multiply(&b, &c)) && g.multiply(&g.one(), &lhs) == lhs;
        log.push(format!("H_k triple {t}: (ab)c = a(bc)"), ok);
    }
}

fn realization(cfg: &RunConfig, log: &mut Log) {
    let n = cfg.n;
    let h = Cherednik::new(params(cfg));
    let g = Ggha::from_cherednik(&h);
    let mut gens: Vec<(String, GghaElem)> = (0..n).map(|i| (format!("D{}", i + 1), g.d(i))).collect();
    gens.extend((0..n).map(|i| (format!("theta{}", i + 1), g.theta(i))));
    gens.extend((0..n - 1).map(|i| (format!("s{}", i + 1), g.simple(i))));
    let images: Vec<CherElem> = gens.iter().map(|(_, x)| g.psi(&h, x)).collect();
    for ((na, a), pa) in gens.iter().zip(&images) {
        for ((nb, b), pb) in gens.iter().zip(&images) {
            let ok = g.psi(&h, &g.multiply(a, b)) == h.multiply(pa, pb);
            log.push(format!("psi({na} {nb}) = psi({na}) psi({nb})"), ok);
        }
    }
}

fn center(cfg: &RunConfig, log: &mut Log) {
    let (r, n) = (cfg.r, cfg.n);
    let g = Ggha::new(r, n, cfg.kbar0.clone());
    for k in 1..=n {
        let ek = g.elementary_symmetric(k);
        for (o, orbit) in g.torus_orbit_sums().iter().enumerate() {
            log.push(
                format!("e{k}(D) * orbit sum {o} is central"),
                g.center_check(&g.multiply(&ek, orbit)),
            );
        }
    }
    if n >= 2 {
        for i in 0..n {
            log.push(format!("D{} is not central", i + 1), !g.center_check(&g.d(i)));
            if r >= 2 {
                log.push(format!("theta{} is not central", i + 1), !g.center_check(&g.theta(i)));
            }
        }
    }
}

fn duality(cfg: &RunConfig, fuzz: usize, log: &mut Log) {
    let (r, n) = (cfg.r, cfg.n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = Ggha::new(r, n, cfg.kbar0.clone());
    let perms = Perm::all(n);
    for inst in 0..fuzz {
        let gamma: Vec<CycloNum> = (0..n).map(|_| rand_cyclo(&mut rng, r)).collect();
        let mu = TChar::new(r, (0..n).map(|_| rng.gen_range(0..r)).collect());
        let chi = CChar::new(gamma.clone(), mu.clone());
        let m = principal_series(&g, &chi);
        let tag = format!("instance {inst} mu={:?}", mu.index);

        let w = perms[rng.gen_range(0..perms.len())].clone();
        let rho_w = act(&g, &m, &g.perm(&w));
        log.push(
            format!("{tag}: rho({w}) is an isomorphism M -> ^w M"),
            is_intertwiner(&rho_w, &m, &twist(&g, &m, &w)) && rho_w.is_invertible(),
        );

        let w0 = Perm::longest(n);
        let star = CChar::new(
            w0.act_on_vec(&gamma).into_iter().map(|x| -x).collect(),
            mu.twist(&w0).inverse().product(&TChar::det(r, n)),
        );
        log.push(
            format!("{tag}: M* = M(-w0 gamma, det (w0 mu)^-1)"),
            find_isomorphism(&dual(&g, &m), &principal_series(&g, &star)).is_some(),
        );

        let sigma = sort_char(&mu).sigma;
        log.push(
            format!("{tag}: M(^sigma chi) = ^(sigma^-1) M(chi)"),
            find_isomorphism(
                &principal_series(&g, &chi.twist(&sigma)),
                &twist(&g, &m, &sigma.inverse()),
            )
            .is_some(),
        );

        let dm = delta_twist(&g, &m);
        let mut matches: Vec<Vec<u32>> = TChar::all(r, n)
            .into_iter()
            .filter(|mp| find_isomorphism(&dm, &principal_series(&g, &CChar::new(gamma.clone(), mp.clone()))).is_some())
            .map(|mp| mp.index)
            .collect();
        matches.sort();
        let expect = delta_targets(&gamma, &mu.product(&TChar::det(r, n)));
        log.push(
            format!("{tag}: ^delta M = M(gamma, mu') exactly for mu' in {expect:?}, matched {matches:?}"),
            matches == expect,
        );
    }
}

/// `det mu` moved by the permutations fixing `gamma`, sorted and deduplicated.
fn delta_targets(gamma: &[CycloNum], det_mu: &TChar) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Perm::all(gamma.len())
        .iter()
        .filter(|w| w.act_on_vec(gamma) == gamma)
        .map(|w| det_mu.twist(w).index)
        .collect();
    out.sort();
    out.dedup();
    out
}
