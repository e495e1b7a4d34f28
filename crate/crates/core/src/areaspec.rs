//! Area sequences `a_1, a_2, ...` given as short text specs.
//!
//! ```text
//! list:0.5,0.25,0.25     finite list
//! pow4:1,1,2,2           finite list of 4^-m
//! geom:a,q               a_k = a q^(k-1), 0 < q < 1
//! pow:c,p                a_k = c k^-p, needs p > 2
//! invsq                  a_k = k^-2 (always rejected)
//! ```
//!
//! Any spec may end in `@n` to fix how many terms are used. Every accepted
//! spec has `sum_k sqrt(a_k) < inf`; the tail of that series is computed in
//! closed form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Terms used for infinite families without `@n`.
pub const DEFAULT_TERMS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum AreaFamily {
    List(Vec<f64>),
    Pow4(Vec<u32>),
    Geometric { first: f64, ratio: f64 },
    Power { scale: f64, exponent: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AreaSpec {
    pub family: AreaFamily,
    pub terms: Option<usize>,
}

fn num(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{what}: cannot parse {s:?} as a number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!("{what}: {v} is not finite")));
    }
    Ok(v)
}

fn two(args: &str, what: &str) -> Result<(f64, f64)> {
    match args.split(',').collect::<Vec<_>>()[..] {
        [a, b] => Ok((num(a, what)?, num(b, what)?)),
        _ => Err(Error::InvalidArgument(format!("{what} takes two numbers, got {args:?}"))),
    }
}

/// `sum_{k >= 1} k^-s` for `s > 1`, by Euler-Maclaurin after 1000 terms.
fn zeta(s: f64) -> f64 {
    const M: f64 = 1000.0;
    let head: f64 = (1..1000).map(|k| (k as f64).powf(-s)).sum();
    head + M.powf(1.0 - s) / (s - 1.0) + 0.5 * M.powf(-s) + s / 12.0 * M.powf(-s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * M.powf(-s - 3.0)
}

impl AreaSpec {
    pub fn parse(text: &str) -> Result<AreaSpec> {
        let text = text.trim();
        let (body, terms) = match text.rsplit_once('@') {
            Some((b, n)) => {
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad term count {n:?}")))?;
                if n == 0 {
                    return Err(Error::InvalidArgument("term count must be at least 1".into()));
                }
                (b, Some(n))
            }
            None => (text, None),
        };
        let (name, args) = body.split_once(':').unwrap_or((body, ""));
        let family = match name.trim() {
            "list" => {
                let v = args
                    .split(',')
                    .enumerate()
                    .map(|(k, s)| num(s, &format!("area {k}")))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(k) = v.iter().position(|a| *a < 0.0) {
                    return Err(Error::InvalidArgument(format!("area {k} = {} is negative", v[k])));
                }
                AreaFamily::List(v)
            }
            "pow4" => AreaFamily::Pow4(
                args.split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| Error::InvalidArgument(format!("bad exponent {s:?}")))
                    })
                    .collect::<Result<Vec<u32>>>()?,
            ),
            "geom" => {
                let (first, ratio) = two(args, "geom")?;
                if first <= 0.0 {
                    return Err(Error::InvalidArgument(format!("geom: first area {first} must be positive")));
                }
                if ratio <= 0.0 {
                    return Err(Error::InvalidArgument(format!("geom: ratio {ratio} must be positive")));
                }
                if ratio >= 1.0 {
                    return Err(Error::HypothesisViolated(format!(
                        "sum of sqrt(a_k) diverges for geom ratio {ratio} >= 1"
                    )));
                }
                AreaFamily::Geometric { first, ratio }
            }
            "pow" | "invsq" => {
                let (scale, exponent) = if name.trim() == "invsq" {
                    if !args.is_empty() {
                        return Err(Error::InvalidArgument("invsq takes no arguments".into()));
                    }
                    (1.0, 2.0)
                } else {
                    two(args, "pow")?
                };
                if scale <= 0.0 {
                    return Err(Error::InvalidArgument(format!("pow: scale {scale} must be positive")));
                }
                if exponent <= 2.0 {
                    return Err(Error::HypothesisViolated(format!(
                        "sum of sqrt(a_k) = sum k^-{} diverges (needs exponent > 2, got {exponent})",
                        exponent / 2.0
                    )));
                }
                AreaFamily::Power { scale, exponent }
            }
            other => return Err(Error::InvalidArgument(format!("unknown area family {other:?}"))),
        };
        Ok(AreaSpec { family, terms })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.family, AreaFamily::List(_) | AreaFamily::Pow4(_))
    }

    /// `a_k`, 1-based; zero past the end of a finite list.
    pub fn term(&self, k: usize) -> f64 {
        assert!(k >= 1);
        match &self.family {
            AreaFamily::List(v) => v.get(k - 1).copied().unwrap_or(0.0),
            AreaFamily::Pow4(m) => m.get(k - 1).map_or(0.0, |&m| 0.25f64.powi(m as i32)),
            AreaFamily::Geometric { first, ratio } => first * ratio.powi(k as i32 - 1),
            AreaFamily::Power { scale, exponent } => scale * (k as f64).powf(-exponent),
        }
    }

    /// Number of terms used: `@n`, else the list length or
    /// [`DEFAULT_TERMS`].
    pub fn len(&self) -> usize {
        let natural = match &self.family {
            AreaFamily::List(v) => v.len(),
            AreaFamily::Pow4(m) => m.len(),
            _ => DEFAULT_TERMS,
        };
        self.terms.unwrap_or(natural)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The first `n` areas.
    pub fn areas(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|k| self.term(k)).collect()
    }

    /// The areas used, `a_1..a_len`.
    pub fn truncated(&self) -> Vec<f64> {
        self.areas(self.len())
    }

    /// `sum_{k >= 1} sqrt(a_k)` over the whole sequence.
    pub fn sqrt_sum(&self) -> f64 {
        match &self.family {
            AreaFamily::List(v) => v.iter().map(|a| a.sqrt()).sum(),
            AreaFamily::Pow4(m) => m.iter().map(|&m| 0.5f64.powi(m as i32)).sum(),
            AreaFamily::Geometric { first, ratio } => first.sqrt() / (1.0 - ratio.sqrt()),
            AreaFamily::Power { scale, exponent } => scale.sqrt() * zeta(exponent / 2.0),
        }
    }

    /// `sum_{k > n} sqrt(a_k)`.
    pub fn sqrt_tail(&self, n: usize) -> f64 {
        match &self.family {
            AreaFamily::Geometric { first, ratio } => {
                first.sqrt() * ratio.sqrt().powi(n as i32) / (1.0 - ratio.sqrt())
            }
            AreaFamily::Power { .. } => {
                let head: f64 = (1..=n).map(|k| self.term(k).sqrt()).sum();
                (self.sqrt_sum() - head).max(0.0)
            }
            _ => {
                let total = match &self.family {
                    AreaFamily::List(v) => v.len(),
                    AreaFamily::Pow4(m) => m.len(),
                    _ => unreachable!(),
                };
                (n + 1..=total).map(|k| self.term(k).sqrt()).sum()
            }
        }
    }

    /// `2 sqrt(pi) sum_k sqrt(a_k)`: the perimeter of disjoint disks of the
    /// given areas, an upper bound for every minimal cluster.
    pub fn disk_bound(&self) -> f64 {
        2.0 * std::f64::consts::PI.sqrt() * self.sqrt_sum()
    }

    /// Areas `a_k` for `k > n` of an infinite family, up to `limit` terms in
    /// total, for tail estimates that need explicit values.
    pub fn tail_areas(&self, n: usize, limit: usize) -> Vec<f64> {
        let end = if self.is_finite() { self.len().min(limit) } else { limit };
        (n + 1..=end).map(|k| self.term(k)).collect()
    }
}

impl fmt::Display for AreaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        match &self.family {
            AreaFamily::List(v) => write!(f, "list:{}", join(v.iter().map(f64::to_string).collect()))?,
            AreaFamily::Pow4(m) => write!(f, "pow4:{}", join(m.iter().map(u32::to_string).collect()))?,
            AreaFamily::Geometric { first, ratio } => write!(f, "geom:{first},{ratio}")?,
            AreaFamily::Power { scale, exponent } => write!(f, "pow:{scale},{exponent}")?,
        }
        if let Some(n) = self.terms {
            write!(f, "@{n}")?;
        }
        Ok(())
    }
}

impl FromStr for AreaSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AreaSpec::parse(s)
    }
}

impl TryFrom<String> for AreaSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        AreaSpec::parse(&s)
    }
}

impl From<AreaSpec> for String {
    fn from(s: AreaSpec) -> String {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_quarters() {
        let s = AreaSpec::parse("geom:0.25,0.25").unwrap();
        assert_eq!(s.areas(3), vec![0.25, 0.0625, 0.015625]);
        assert!((s.sqrt_sum() - 1.0).abs() < 1e-15);
        assert!((s.sqrt_tail(3) - 0.125).abs() < 1e-15);
        assert_eq!(s.len(), DEFAULT_TERMS);
        assert_eq!(AreaSpec::parse("geom:0.25,0.25@4").unwrap().truncated().len(), 4);
    }

    #[test]
    fn lists() {
        let s = AreaSpec::parse("list:1,1").unwrap();
        assert_eq!(s.truncated(), vec![1.0, 1.0]);
        assert_eq!(s.sqrt_tail(2), 0.0);
        assert_eq!(s.sqrt_tail(1), 1.0);
        let p = AreaSpec::parse("pow4:1,1,1,2,2,2,2").unwrap();
        assert_eq!(p.truncated().iter().sum::<f64>(), 1.0);
        assert!(AreaSpec::parse("list:1,-1").is_err());
        assert!(AreaSpec::parse("list:1,x").is_err());
    }

    #[test]
    fn divergent_families_are_rejected() {
        for s in ["invsq", "pow:1,2", "pow:3,1.5", "geom:1,1"] {
            assert!(
                matches!(AreaSpec::parse(s), Err(Error::HypothesisViolated(_))),
                "{s}"
            );
        }
        assert!(matches!(AreaSpec::parse("nope:1"), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn power_tail_matches_zeta() {
        // sum k^-2 = pi^2 / 6
        let s = AreaSpec::parse("pow:1,4").unwrap();
        assert!((s.sqrt_sum() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        let direct: f64 = (11..2_000_000).map(|k| (k as f64).powi(-2)).sum();
        assert!((s.sqrt_tail(10) - direct).abs() < 1e-6);
    }

    #[test]
    fn text_round_trip() {
        for t in ["list:0.5,0.25", "pow4:1,2", "geom:0.25,0.25@4", "pow:2,3"] {
            let s = AreaSpec::parse(t).unwrap();
            assert_eq!(s.to_string(), t);
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<AreaSpec>(&json).unwrap(), s);
        }
    }
}
