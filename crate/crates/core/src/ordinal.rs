//! Ordinals below ω^ω in Cantor normal form.
//!
//! Text syntax: terms `w^k*c`, `w^k`, `w*c`, `w`, `n` joined by `+` with
//! strictly decreasing exponents, or `0`. `ω` is accepted for `w`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `Σ ω^eᵢ·cᵢ` with `e₀ > e₁ > …` and every `cᵢ ≥ 1`; empty means zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OrdinalCNF {
    terms: Vec<(u32, u64)>,
}

impl OrdinalCNF {
    pub fn zero() -> Self {
        OrdinalCNF::default()
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalCNF {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    /// `ω^k`.
    pub fn omega_pow(k: u32) -> Self {
        OrdinalCNF {
            terms: vec![(k, 1)],
        }
    }

    /// Builds from `(exponent, coefficient)` terms, rejecting non-canonical input.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self> {
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::Ordinal("zero coefficient".into()));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::Ordinal("exponents must strictly decrease".into()));
        }
        Ok(OrdinalCNF { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(&(e, _)) if e > 0)
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some(&(0, _)))
    }

    /// Finite value, if any.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, n)] => Some(*n),
            _ => None,
        }
    }

    pub fn successor(&self) -> Self {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => *c += 1,
            _ => terms.push((0, 1)),
        }
        OrdinalCNF { terms }
    }

    pub fn predecessor(&self) -> Option<Self> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor is nonzero");
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        Some(OrdinalCNF { terms })
    }

    /// Ordinal sum `self + rhs` (absorbs the terms of `self` below the
    /// leading exponent of `rhs`).
    pub fn add(&self, rhs: &Self) -> Self {
        let Some(&(lead, lead_c)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .filter(|&(e, _)| e >= lead)
            .collect();
        match terms.last_mut() {
            Some((e, c)) if *e == lead => *c += lead_c,
            _ => terms.push((lead, lead_c)),
        }
        terms.extend_from_slice(&rhs.terms[1..]);
        OrdinalCNF { terms }
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|&(e, _)| e)
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }
}

impl Ord for OrdinalCNF {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for OrdinalCNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

fn parse_nat(s: &str, what: &str) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return Err(Error::Ordinal(format!("bad {what} `{s}`")));
    }
    s.parse()
        .map_err(|_| Error::Ordinal(format!("{what} `{s}` out of range")))
}

impl FromStr for OrdinalCNF {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim().replace('ω', "w");
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for raw in text.split('+') {
            let term = raw.trim();
            let (base, coeff) = match term.split_once('*') {
                Some((b, c)) => {
                    let c = parse_nat(c.trim(), "coefficient")?;
                    if c < 2 {
                        return Err(Error::Ordinal(format!("non-canonical coefficient in `{term}`")));
                    }
                    (b.trim(), Some(c))
                }
                None => (term, None),
            };
            let (exp, c) = if let Some(rest) = base.strip_prefix('w') {
                let exp = match rest.strip_prefix('^') {
                    Some(k) => {
                        let k = parse_nat(k, "exponent")?;
                        if k < 2 {
                            return Err(Error::Ordinal(format!("non-canonical exponent in `{term}`")));
                        }
                        u32::try_from(k)
                            .map_err(|_| Error::Ordinal(format!("exponent too large in `{term}`")))?
                    }
                    None if rest.is_empty() => 1,
                    None => return Err(Error::Ordinal(format!("bad term `{term}`"))),
                };
                (exp, coeff.unwrap_or(1))
            } else {
                if coeff.is_some() {
                    return Err(Error::Ordinal(format!("bad term `{term}`")));
                }
                let n = parse_nat(base, "natural")?;
                if n == 0 {
                    return Err(Error::Ordinal("zero term in a sum".into()));
                }
                (0, n)
            };
            terms.push((exp, c));
        }
        Self::from_terms(terms)
    }
}

impl Serialize for OrdinalCNF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrdinalCNF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
