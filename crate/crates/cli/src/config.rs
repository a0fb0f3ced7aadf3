//! Command-line parameters, parsed into exact values.

use std::collections::BTreeMap;
use std::fmt;

use clap::{Args, ValueEnum};
use hecke_core::cyclo::{parse_rational, CycloNum};
use hecke_core::refl_group::{Perm, TChar};
use num_rational::BigRational;
use num_traits::Signed;

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Parsed<T> = Result<T, UsageError>;

fn usage<T>(msg: impl Into<String>) -> Parsed<T> {
    Err(UsageError(msg.into()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Order of the cyclic group.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    /// Rank.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// k_1,...,k_(r-1) as exact literals; all zero when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub kbar0: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; falls back to $HECKE_OUT_DIR, then stdout.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 means one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Largest module dimension the oracle will attempt.
    #[arg(long, default_value_t = hecke_core::simplicity::DEFAULT_BOUND)]
    pub bound: usize,
}

/// Exact values plus the verbatim arguments they came from.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub r: u32,
    pub n: usize,
    pub k: Vec<CycloNum>,
    pub kbar0: CycloNum,
    pub format: Format,
    pub out: Option<String>,
    pub seed: u64,
    pub jobs: usize,
    pub bound: usize,
    pub echo: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn from_common(command: &str, c: &Common) -> Parsed<Self> {
        if c.r == 0 {
            return usage("--r must be positive");
        }
        if c.n == 0 {
            return usage("--n must be positive");
        }
        let k = match &c.k {
            Some(text) => parse_list(c.r, text)?,
            None => vec![CycloNum::zero(c.r); c.r as usize - 1],
        };
        if k.len() != c.r as usize - 1 {
            return usage(format!("--k needs {} values (k_1..k_(r-1)), got {}", c.r - 1, k.len()));
        }
        let jobs = if c.jobs == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            c.jobs
        };
        let mut echo = BTreeMap::new();
        echo.insert("command".into(), command.to_string());
        echo.insert("r".into(), c.r.to_string());
        echo.insert("n".into(), c.n.to_string());
        echo.insert("k".into(), c.k.clone().unwrap_or_default());
        echo.insert("kbar0".into(), c.kbar0.clone());
        echo.insert("seed".into(), c.seed.to_string());
        echo.insert("bound".into(), c.bound.to_string());
        echo.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        Ok(RunConfig {
            r: c.r,
            n: c.n,
            k,
            kbar0: parse_literal(c.r, &c.kbar0)?,
            format: c.format,
            out: c.out.clone(),
            seed: c.seed,
            jobs,
            bound: c.bound,
            echo,
        })
    }

    pub fn record(&mut self, key: &str, value: impl Into<String>) {
        self.echo.insert(key.to_string(), value.into());
    }
}

/// A rational (`-2/3`) or cyclotomic (`z^2 + 1`) literal; decimals are rejected.
pub fn parse_literal(r: u32, text: &str) -> Parsed<CycloNum> {
    if text.contains('.') {
        return usage(format!("{text:?}: only exact literals are accepted"));
    }
    CycloNum::parse(r, text).map_err(|e| UsageError(e.to_string()))
}

pub fn parse_list(r: u32, text: &str) -> Parsed<Vec<CycloNum>> {
    text.split(',').map(|s| parse_literal(r, s)).collect()
}

pub fn parse_varpi(r: u32, n: usize, text: &str) -> Parsed<TChar> {
    let index: Vec<u32> = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| UsageError(format!("bad character index list {text:?}")))?;
    if index.len() != n {
        return usage(format!("character {text:?} has {} entries, need {n}", index.len()));
    }
    if let Some(bad) = index.iter().find(|&&e| e >= r) {
        return usage(format!("character index {bad} is not below r = {r}"));
    }
    Ok(TChar::new(r, index))
}

/// `all`, `all-orbits`, or explicit characters separated by `;`.
pub fn parse_varpi_selection(r: u32, n: usize, text: &str) -> Parsed<Vec<TChar>> {
    match text.trim() {
        "all" => Ok(TChar::all(r, n)),
        "all-orbits" => Ok(TChar::orbit_representatives(r, n)),
        list => list.split(';').map(|v| parse_varpi(r, n, v)).collect(),
    }
}

/// `lo..hi` with rational endpoints, stepping by `step`.
pub fn parse_range(r: u32, text: &str, step: &str) -> Parsed<Vec<CycloNum>> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| UsageError(format!("grid {text:?} is not of the form lo..hi")))?;
    let rat = |s: &str| parse_rational(s).ok_or_else(|| UsageError(format!("{s:?} is not an exact rational")));
    let (lo, hi, step) = (rat(lo)?, rat(hi)?, rat(step)?);
    if !step.is_positive() {
        return usage("grid step must be positive");
    }
    if lo > hi {
        return usage(format!("empty grid {text:?}"));
    }
    let mut out = Vec::new();
    let mut x: BigRational = lo;
    while x <= hi {
        out.push(CycloNum::from_rational(r, x.clone()));
        x += &step;
    }
    Ok(out)
}

pub fn parse_perm(n: usize, text: &str) -> Parsed<Perm> {
    let p = Perm::parse(text).map_err(|e| UsageError(e.to_string()))?;
    if p.n() != n {
        return usage(format!("permutation {text:?} is not in S_{n}"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(parse_literal(3, "2/3").unwrap(), CycloNum::from_frac(3, 2, 3));
        assert_eq!(parse_literal(4, "z^2+1").unwrap(), CycloNum::zero(4));
        assert!(parse_literal(2, "0.5").is_err());
        assert!(parse_literal(2, "1e3").is_err());
    }

    #[test]
    fn ranges() {
        let g = parse_range(2, "-1..1", "1/2").unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[1], CycloNum::from_frac(2, -1, 2));
        assert!(parse_range(2, "1..-1", "1").is_err());
        assert!(parse_range(2, "0..1", "0").is_err());
    }

    #[test]
    fn characters() {
        assert_eq!(parse_varpi_selection(2, 2, "all").unwrap().len(), 4);
        assert_eq!(parse_varpi_selection(3, 2, "0,1;2,2").unwrap().len(), 2);
        assert!(parse_varpi(2, 2, "0,2").is_err());
        assert!(parse_varpi(2, 2, "0").is_err());
    }
}
