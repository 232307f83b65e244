use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::IntSet;
use crate::tuples::count_sidon_tuples;

use super::count::{count_generalized_capped, serialize_big};

/// Tuple budgets as functions of `n` (logarithms base 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    Zero,
    NOverLog5,
    NOverLog4,
    NOverLog3,
    NOverLog2,
    NOverLog,
    N,
}

impl AlphaRule {
    pub const ALL: [AlphaRule; 7] = [
        AlphaRule::Zero,
        AlphaRule::NOverLog5,
        AlphaRule::NOverLog4,
        AlphaRule::NOverLog3,
        AlphaRule::NOverLog2,
        AlphaRule::NOverLog,
        AlphaRule::N,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlphaRule::Zero => "zero",
            AlphaRule::NOverLog5 => "n_over_log5",
            AlphaRule::NOverLog4 => "n_over_log4",
            AlphaRule::NOverLog3 => "n_over_log3",
            AlphaRule::NOverLog2 => "n_over_log2",
            AlphaRule::NOverLog => "n_over_log",
            AlphaRule::N => "n",
        }
    }

    fn log_power(self) -> Option<i32> {
        match self {
            AlphaRule::Zero | AlphaRule::N => None,
            AlphaRule::NOverLog5 => Some(5),
            AlphaRule::NOverLog4 => Some(4),
            AlphaRule::NOverLog3 => Some(3),
            AlphaRule::NOverLog2 => Some(2),
            AlphaRule::NOverLog => Some(1),
        }
    }

    /// `⌊rule(n)⌋`.
    pub fn budget(self, n: u32) -> Result<u64> {
        match self {
            AlphaRule::Zero => Ok(0),
            AlphaRule::N => Ok(n as u64),
            rule => {
                if n < 2 {
                    return Err(Error::Argument(format!("{} needs n >= 2", rule.name())));
                }
                let k = rule.log_power().expect("log rule");
                let nf = n as f64;
                Ok((nf / nf.log2().powi(k)).floor() as u64)
            }
        }
    }
}

impl FromStr for AlphaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlphaRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown alpha rule {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthRow {
    pub n: u32,
    pub alpha_rule: AlphaRule,
    pub alpha: u64,
    #[serde(serialize_with = "serialize_big")]
    pub count: BigUint,
    pub exponent: f64,
    pub seconds: f64,
}

/// One exact count per `(n, rule)`, `n` outermost.
pub fn growth_table(n_values: &[u32], rules: &[AlphaRule], cap: u32) -> Result<Vec<GrowthRow>> {
    let mut rows = Vec::with_capacity(n_values.len() * rules.len());
    for &n in n_values {
        for &rule in rules {
            let alpha = rule.budget(n)?;
            let start = Instant::now();
            let r = count_generalized_capped(n, alpha, cap)?;
            rows.push(GrowthRow {
                n,
                alpha_rule: rule,
                alpha,
                count: r.count,
                exponent: r.exponent,
                seconds: start.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(rows)
}

/// CSV with header `n,alpha_rule,alpha,count,exponent,seconds`. Without
/// `timing` the seconds column holds `-` so output is reproducible.
pub fn growth_table_csv(rows: &[GrowthRow], timing: bool) -> String {
    let mut out = String::from("n,alpha_rule,alpha,count,exponent,seconds\n");
    for r in rows {
        let secs = if timing { format!("{:.3}", r.seconds) } else { "-".into() };
        let _ = writeln!(out, "{},{},{},{},{:.6},{}", r.n, r.alpha_rule.name(), r.alpha, r.count, r.exponent, secs);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LowerBoundEstimate {
    pub n: u32,
    pub alpha: u64,
    /// `⌊(αn)^{1/4}⌋`.
    pub m: u32,
    pub trials: u32,
    pub mean_count: f64,
    pub median_count: f64,
    /// Share of samples with at most `α` tuples.
    pub fraction_within: f64,
    /// `m⁴ / n`, the order of magnitude of a typical count.
    pub reference: f64,
}

/// Largest `m` with `m⁴ ≤ x`.
fn fourth_root(x: u128) -> u32 {
    let mut m = (x as f64).powf(0.25) as u128;
    while m.pow(4) > x {
        m -= 1;
    }
    while (m + 1).pow(4) <= x {
        m += 1;
    }
    m as u32
}

/// Tuple counts of uniform `m`-subsets of `[n]` with `m = ⌊(αn)^{1/4}⌋`.
pub fn random_lower_bound_experiment(n: u32, alpha: u64, trials: u32, seed: u64) -> Result<LowerBoundEstimate> {
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let m = fourth_root(alpha as u128 * n as u128);
    if m > n {
        return Err(Error::Argument(format!("m = {m} exceeds n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: Vec<u64> = (0..trials)
        .map(|_| {
            let picked = sample(&mut rng, n as usize, m as usize).into_iter().map(|i| i as u32 + 1).collect();
            count_sidon_tuples(&IntSet::new(picked).expect("indices are in range"))
        })
        .collect();
    counts.sort_unstable();
    let t = trials as usize;
    let median = if t % 2 == 1 {
        counts[t / 2] as f64
    } else {
        (counts[t / 2 - 1] + counts[t / 2]) as f64 / 2.0
    };
    Ok(LowerBoundEstimate {
        n,
        alpha,
        m,
        trials,
        mean_count: counts.iter().sum::<u64>() as f64 / t as f64,
        median_count: median,
        fraction_within: counts.iter().filter(|&&c| c <= alpha).count() as f64 / t as f64,
        reference: (m as f64).powi(4) / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_budgets() {
        assert_eq!(AlphaRule::N.budget(16).unwrap(), 16);
        assert_eq!(AlphaRule::Zero.budget(16).unwrap(), 0);
        assert_eq!(AlphaRule::NOverLog.budget(16).unwrap(), 4);
        assert_eq!(AlphaRule::NOverLog2.budget(16).unwrap(), 1);
        assert_eq!(AlphaRule::NOverLog5.budget(16).unwrap(), 0);
        assert!(AlphaRule::NOverLog.budget(1).is_err());
        assert_eq!("n_over_log3".parse::<AlphaRule>().unwrap(), AlphaRule::NOverLog3);
        assert!("n_over_log9".parse::<AlphaRule>().is_err());
    }

    #[test]
    fn empty_table_is_header_only() {
        let rows = growth_table(&[], &AlphaRule::ALL, 40).unwrap();
        assert_eq!(growth_table_csv(&rows, false), "n,alpha_rule,alpha,count,exponent,seconds\n");
    }

    #[test]
    fn csv_rows() {
        let rows = growth_table(&[4], &[AlphaRule::Zero, AlphaRule::N], 40).unwrap();
        let csv = growth_table_csv(&rows, false);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], format!("4,zero,0,13,{:.6},-", 13f64.log2() / 2.0));
        // every subset but [4] itself, which has 16 tuples
        assert_eq!(lines[2], format!("4,n,4,15,{:.6},-", 15f64.log2() / 2.0));
    }

    #[test]
    fn fourth_roots() {
        assert_eq!(fourth_root(0), 0);
        assert_eq!(fourth_root(15), 1);
        assert_eq!(fourth_root(16), 2);
        assert_eq!(fourth_root(65536), 16);
        assert_eq!(fourth_root(65535), 15);
    }

    #[test]
    fn lower_bound_experiment() {
        let r = random_lower_bound_experiment(256, 0, 10, 1).unwrap();
        assert_eq!(r.m, 0);
        let r = random_lower_bound_experiment(16, 1, 50, 1).unwrap();
        assert_eq!(r.m, 2);
        let r = random_lower_bound_experiment(1, 1, 50, 1).unwrap();
        assert_eq!((r.m, r.mean_count), (1, 0.0));
        let r = random_lower_bound_experiment(256, 256, 2000, 3).unwrap();
        assert_eq!(r.m, 16);
        assert!(r.mean_count > 0.0 && r.mean_count.is_finite());
        assert_eq!(r.reference, 256.0);
        let a = random_lower_bound_experiment(256, 256, 1, 9).unwrap();
        assert_eq!(a, random_lower_bound_experiment(256, 256, 1, 9).unwrap());
        assert!(random_lower_bound_experiment(4, 1000, 1, 9).is_err());
        assert!(random_lower_bound_experiment(4, 1, 0, 9).is_err());
    }
}
