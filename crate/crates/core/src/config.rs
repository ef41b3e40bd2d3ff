//! Run configuration: defaults, a key = value file, and overrides.
//!
//! ```text
//! # motivic.conf
//! curve = C1
//! primes = 7..31
//! tempo_scale = 1.5
//! ```

use std::fmt::Write;
use std::path::PathBuf;

use crate::curves::{catalog, catalog_curve, CurveSpec};
use crate::error::{Error, Result};
use crate::field::{is_prime, DEFAULT_BITMAP_THRESHOLD};
use crate::rhythm::Tolerances;

pub const CACHE_DIR_ENV: &str = "MOTIVIC_CACHE_DIR";

/// Largest field size counted by default; 31⁵.
pub const DEFAULT_COUNT_LIMIT: u64 = 28_629_151;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveSelector {
    All,
    Named(String),
    /// Coefficients from the leading term down.
    Coeffs(Vec<i64>),
}

impl CurveSelector {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(CurveSelector::All);
        }
        if let Some(c) = catalog_curve(&s.to_ascii_uppercase()) {
            return Ok(CurveSelector::Named(c.name().to_string()));
        }
        let coeffs: std::result::Result<Vec<i64>, _> =
            s.trim_matches(|c| c == '[' || c == ']').split(',').map(|t| t.trim().parse::<i64>()).collect();
        match coeffs {
            Ok(c) => {
                CurveSpec::from_descending("custom", &c)?;
                Ok(CurveSelector::Coeffs(c))
            }
            Err(_) => Err(Error::Config(format!(
                "curve '{s}' is neither C1..C6, 'all', nor a comma-separated coefficient list"
            ))),
        }
    }

    pub fn curves(&self) -> Result<Vec<CurveSpec>> {
        match self {
            CurveSelector::All => Ok(catalog()),
            CurveSelector::Named(n) => {
                Ok(vec![catalog_curve(n).ok_or_else(|| Error::Config(format!("unknown curve {n}")))?])
            }
            CurveSelector::Coeffs(c) => {
                let name = crate::cache::cache_key(&CurveSpec::from_descending("custom", c)?);
                Ok(vec![CurveSpec::from_descending(name, c)?])
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            CurveSelector::All => "all".into(),
            CurveSelector::Named(n) => n.clone(),
            CurveSelector::Coeffs(c) => c.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
        }
    }
}

/// Primes in `lo..=hi`, or an explicit comma-separated list.
pub fn parse_primes(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let bad = |what: &str| Error::Config(format!("primes '{s}': {what}"));
    let primes: Vec<u64> = if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.trim_start_matches('=');
        let lo: u64 = lo.trim().parse().map_err(|_| bad("bad lower end"))?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad("bad upper end"))?;
        for end in [lo, hi] {
            if end == 2 || !is_prime(end) {
                return Err(bad(&format!("endpoint {end} is not an odd prime")));
            }
        }
        (lo..=hi).filter(|&n| n > 2 && is_prime(n)).collect()
    } else {
        let list: std::result::Result<Vec<u64>, _> = s.split(',').map(|t| t.trim().parse::<u64>()).collect();
        let mut list = list.map_err(|_| bad("expected lo..hi or a comma-separated list"))?;
        if let Some(&n) = list.iter().find(|&&n| n == 2 || !is_prime(n)) {
            return Err(bad(&format!("{n} is not an odd prime")));
        }
        list.sort_unstable();
        list.dedup();
        list
    };
    if primes.is_empty() {
        return Err(bad("empty range"));
    }
    Ok(primes)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub curve: CurveSelector,
    pub primes: Vec<u64>,
    pub tolerances: Tolerances,
    pub tempo_scale: f64,
    pub n_periods: usize,
    pub out: PathBuf,
    /// None means `<out>/cache`.
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    /// Largest extension degree to count; None means the genus.
    pub k_max: Option<usize>,
    /// Lifts the field-size limit on counting.
    pub full: bool,
    pub bitmap_threshold: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            curve: CurveSelector::All,
            primes: (7..=67).filter(|&n| is_prime(n)).collect(),
            tolerances: Tolerances::default(),
            tempo_scale: 1.0,
            n_periods: 2,
            out: PathBuf::from("out"),
            cache_dir: None,
            workers: 1,
            k_max: None,
            full: false,
            bitmap_threshold: DEFAULT_BITMAP_THRESHOLD,
        }
    }
}

impl RunConfig {
    pub fn cache_dir(&self) -> PathBuf {
        self.cache_dir.clone().unwrap_or_else(|| self.out.join("cache"))
    }

    pub fn count_limit(&self) -> u64 {
        if self.full {
            u64::MAX
        } else {
            DEFAULT_COUNT_LIMIT
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let num = |what: &str| Error::Config(format!("{key} = {value}: expected {what}"));
        let positive = |x: f64| -> Result<f64> {
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Config(format!("{key} must be positive")))
            }
        };
        match key.trim() {
            "curve" => self.curve = CurveSelector::parse(value)?,
            "primes" => self.primes = parse_primes(value)?,
            "tempo_scale" => self.tempo_scale = positive(value.parse().map_err(|_| num("a number"))?)?,
            "n_periods" => {
                self.n_periods = value.parse().map_err(|_| num("an integer"))?;
                if self.n_periods == 0 {
                    return Err(Error::Config("n_periods must be positive".into()));
                }
            }
            "out" => self.out = PathBuf::from(value),
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            "workers" => self.workers = value.parse::<usize>().map_err(|_| num("an integer"))?.max(1),
            "k_max" => self.k_max = Some(value.parse().map_err(|_| num("an integer"))?),
            "full" => self.full = value.parse().map_err(|_| num("true or false"))?,
            "bitmap_threshold" => self.bitmap_threshold = value.parse().map_err(|_| num("an integer"))?,
            "tol_root_update" => self.tolerances.root_update = positive(value.parse().map_err(|_| num("a number"))?)?,
            "tol_residual" => self.tolerances.residual = positive(value.parse().map_err(|_| num("a number"))?)?,
            "tol_palindrome" => self.tolerances.palindrome = positive(value.parse().map_err(|_| num("a number"))?)?,
            "tol_modulus" => self.tolerances.modulus = positive(value.parse().map_err(|_| num("a number"))?)?,
            "max_iterations" => self.tolerances.max_iterations = value.parse().map_err(|_| num("an integer"))?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies every setting from a config file's text.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(key, value).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Picks up the cache directory from the environment unless already set.
    pub fn apply_env(&mut self) {
        if self.cache_dir.is_none() {
            if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
                self.cache_dir = Some(PathBuf::from(dir));
            }
        }
    }

    /// The effective settings in config-file syntax. Paths are left out so
    /// that bundles written to different directories stay identical.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let primes: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "curve = {}", self.curve.describe());
        let _ = writeln!(s, "primes = {}", primes.join(","));
        let _ = writeln!(s, "tempo_scale = {}", self.tempo_scale);
        let _ = writeln!(s, "n_periods = {}", self.n_periods);
        let _ = writeln!(s, "full = {}", self.full);
        if let Some(k) = self.k_max {
            let _ = writeln!(s, "k_max = {k}");
        }
        let _ = writeln!(s, "bitmap_threshold = {}", self.bitmap_threshold);
        let _ = writeln!(s, "tol_root_update = {:e}", self.tolerances.root_update);
        let _ = writeln!(s, "tol_residual = {:e}", self.tolerances.residual);
        let _ = writeln!(s, "tol_palindrome = {:e}", self.tolerances.palindrome);
        let _ = writeln!(s, "tol_modulus = {:e}", self.tolerances.modulus);
        let _ = writeln!(s, "max_iterations = {}", self.tolerances.max_iterations);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes() {
        assert_eq!(RunConfig::default().primes, vec![7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67]);
    }

    #[test]
    fn prime_ranges() {
        assert_eq!(parse_primes("7..13").unwrap(), vec![7, 11, 13]);
        assert_eq!(parse_primes("7..=13").unwrap(), vec![7, 11, 13]);
        assert_eq!(parse_primes("13, 7").unwrap(), vec![7, 13]);
        assert!(parse_primes("8..13").is_err());
        assert!(parse_primes("2..13").is_err());
        assert!(parse_primes("7,9").is_err());
        assert!(parse_primes("13..7").is_err());
    }

    #[test]
    fn curve_selectors() {
        assert_eq!(CurveSelector::parse("c2").unwrap(), CurveSelector::Named("C2".into()));
        assert_eq!(CurveSelector::parse("all").unwrap(), CurveSelector::All);
        assert_eq!(CurveSelector::parse("1,0,0,1").unwrap(), CurveSelector::Coeffs(vec![1, 0, 0, 1]));
        assert!(CurveSelector::parse("1,0,1").is_err());
        assert!(CurveSelector::parse("C9").is_err());
        let custom = CurveSelector::parse("[1, 0, 0, 1]").unwrap().curves().unwrap();
        assert!(custom[0].name().starts_with("custom-"));
    }

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        c.apply_file("# comment\ncurve = C3\nprimes = 7..11  # trailing\n\ntempo_scale = 2\n").unwrap();
        assert_eq!(c.curve, CurveSelector::Named("C3".into()));
        assert_eq!(c.primes, vec![7, 11]);
        c.set("tempo_scale", "0.5").unwrap();
        assert_eq!(c.tempo_scale, 0.5);
        assert!(c.apply_file("nonsense").is_err());
        assert!(c.apply_file("colour = red").is_err());
        assert!(c.set("tol_modulus", "-1").is_err());
    }

    #[test]
    fn cache_dir_default_and_echo() {
        let mut c = RunConfig { out: PathBuf::from("/tmp/x"), ..RunConfig::default() };
        assert_eq!(c.cache_dir(), PathBuf::from("/tmp/x/cache"));
        c.cache_dir = Some(PathBuf::from("/elsewhere"));
        assert_eq!(c.cache_dir(), PathBuf::from("/elsewhere"));
        let echo = c.echo();
        assert!(!echo.contains("/tmp") && !echo.contains("/elsewhere"));
        let mut back = RunConfig::default();
        back.apply_file(&echo).unwrap();
        assert_eq!(back.primes, c.primes);
        assert_eq!(back.tolerances, c.tolerances);
    }
}
