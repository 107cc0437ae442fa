//! Positions in a ladder: ordinals `Σ ω^eᵢ·cᵢ` whose exponents are
//! themselves ordinals below ω^ω, with coefficients that may be the generic
//! index `m` (larger than every concrete index) plus a fixed offset.
//!
//! A ladder's points are its fixed points `Fixed(α)` for `α ≤ Λ` and the
//! strand points `Strand(α, j)`, `j ∈ ℤ`, in each gap `(α, α+1)`.
//! `Strand(α, j)` tends to `α` as `j → +∞` and to `α+1` as `j → −∞`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordinal::OrdinalCNF;

/// A coefficient: concrete, or `m + k` for the generic index `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coef {
    Nat(u64),
    Generic(i64),
}

impl Coef {
    fn is_zero(self) -> bool {
        self == Coef::Nat(0)
    }

    fn incr(self) -> Self {
        match self {
            Coef::Nat(n) => Coef::Nat(n + 1),
            Coef::Generic(k) => Coef::Generic(k + 1),
        }
    }

    fn decr(self) -> Self {
        match self {
            Coef::Nat(n) => Coef::Nat(n - 1),
            Coef::Generic(k) => Coef::Generic(k - 1),
        }
    }

    fn instantiate(self, m: u64) -> Result<Self> {
        match self {
            Coef::Nat(_) => Ok(self),
            Coef::Generic(k) => u64::try_from(m as i64 + k)
                .ok()
                .filter(|&v| v > 0)
                .map(Coef::Nat)
                .ok_or_else(|| Error::Locator(format!("m = {m} makes m{k:+} nonpositive"))),
        }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Coef::Nat(n) => write!(f, "{n}"),
            Coef::Generic(0) => f.write_str("m"),
            Coef::Generic(k) if k < 0 => write!(f, "m{k}"),
            Coef::Generic(k) => write!(f, "(m+{k})"),
        }
    }
}

fn parse_coef(s: &str) -> Result<Coef> {
    let bad = || Error::Locator(format!("bad coefficient `{s}`"));
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    if let Some(rest) = inner.strip_prefix('m') {
        let k = match rest.as_bytes().first() {
            None => 0,
            Some(b'-') => -rest[1..].parse::<i64>().map_err(|_| bad())?,
            Some(b'+') => rest[1..].parse::<i64>().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        return Ok(Coef::Generic(k));
    }
    if inner.is_empty() || !inner.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    inner.parse().map(Coef::Nat).map_err(|_| bad())
}

/// An ordinal position in Cantor normal form with ordinal exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Pos {
    terms: Vec<(OrdinalCNF, Coef)>,
}

impl Pos {
    pub fn zero() -> Self {
        Pos::default()
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Pos::zero()
        } else {
            Pos {
                terms: vec![(OrdinalCNF::zero(), Coef::Nat(n))],
            }
        }
    }

    pub fn omega_pow(e: OrdinalCNF) -> Self {
        Pos {
            terms: vec![(e, Coef::Nat(1))],
        }
    }

    pub fn from_terms(terms: Vec<(OrdinalCNF, Coef)>) -> Result<Self> {
        if terms.iter().any(|(_, c)| c.is_zero()) {
            return Err(Error::Locator("zero coefficient".into()));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::Locator("exponents must strictly decrease".into()));
        }
        Ok(Pos { terms })
    }

    pub fn terms(&self) -> &[(OrdinalCNF, Coef)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    pub fn is_concrete(&self) -> bool {
        self.terms.iter().all(|(_, c)| matches!(c, Coef::Nat(_)))
    }

    pub fn successor(&self) -> Self {
        self.add_omega_pow(&OrdinalCNF::zero())
    }

    pub fn predecessor(&self) -> Option<Self> {
        if !self.is_successor() {
            return None;
        }
        Some(self.lower_last())
    }

    /// Drops one copy of the last term: `β` for `β + ω^e`.
    fn lower_last(&self) -> Self {
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("nonzero");
        last.1 = last.1.decr();
        if last.1.is_zero() {
            terms.pop();
        }
        Pos { terms }
    }

    /// `self + ω^e`.
    pub fn add_omega_pow(&self, e: &OrdinalCNF) -> Self {
        let mut terms: Vec<_> = self.terms.iter().filter(|(x, _)| x >= e).cloned().collect();
        match terms.last_mut() {
            Some((x, c)) if x == e => *c = c.incr(),
            _ => terms.push((e.clone(), Coef::Nat(1))),
        }
        Pos { terms }
    }

    /// Largest multiple of `ω^e` not above `self`.
    pub fn truncate(&self, e: &OrdinalCNF) -> Self {
        Pos {
            terms: self.terms.iter().filter(|(x, _)| x >= e).cloned().collect(),
        }
    }

    pub fn is_multiple_of(&self, e: &OrdinalCNF) -> bool {
        self.terms.iter().all(|(x, _)| x >= e)
    }

    /// Least multiple of `ω^e` strictly above `self`.
    pub fn next_multiple(&self, e: &OrdinalCNF) -> Self {
        self.truncate(e).add_omega_pow(e)
    }

    pub fn last_exponent(&self) -> Option<&OrdinalCNF> {
        self.terms.last().map(|(e, _)| e)
    }

    /// Coefficient of `ω^e`, zero when absent.
    pub fn coef_at(&self, e: &OrdinalCNF) -> Coef {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map_or(Coef::Nat(0), |(_, c)| *c)
    }

    /// The `k`-th point (`k ≥ 1`) of the standard sequence increasing to a
    /// limit `self`; `None` for zero and successors.
    pub fn approach(&self, k: u64) -> Option<Self> {
        let e = self.last_exponent()?.clone();
        if e.is_zero() {
            return None;
        }
        let base = self.lower_last();
        let (exp, coef) = if let Some(p) = e.predecessor() {
            (p, k)
        } else {
            // e = γ + ω^f with f ≥ 1 finite: exponents γ + ω^(f−1)·k approach e.
            let mut t = e.terms().to_vec();
            let (f, c) = t.pop().expect("limit exponent");
            if c > 1 {
                t.push((f, c - 1));
            }
            t.push((f - 1, k));
            (OrdinalCNF::from_terms(t).expect("canonical"), 1)
        };
        let mut terms = base.terms;
        terms.push((exp, Coef::Nat(coef)));
        Some(Pos { terms })
    }

    /// Replaces the generic index by `m`.
    pub fn instantiate(&self, m: u64) -> Result<Self> {
        Ok(Pos {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| Ok((e.clone(), c.instantiate(m)?)))
                .collect::<Result<_>>()?,
        })
    }
}

impl Ord for Pos {
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

impl PartialOrd for Pos {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            let one = *c == Coef::Nat(1);
            match e.as_nat() {
                Some(0) => write!(f, "{c}")?,
                Some(1) => f.write_str("w")?,
                Some(n) => write!(f, "w^{n}")?,
                None => write!(f, "w^({e})")?,
            }
            if !one && !e.is_zero() {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

/// Splits on `sep` outside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for Pos {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim().replace('ω', "w");
        if text == "0" {
            return Ok(Pos::zero());
        }
        let mut terms = Vec::new();
        for raw in split_top(&text, '+') {
            let term = raw.trim();
            let (base, coef) = match split_top(term, '*').as_slice() {
                [b] => (*b, None),
                [b, c] => (*b, Some(parse_coef(c)?)),
                _ => return Err(Error::Locator(format!("bad term `{term}`"))),
            };
            let Some(rest) = base.strip_prefix('w') else {
                if coef.is_some() {
                    return Err(Error::Locator(format!("bad term `{term}`")));
                }
                terms.push((OrdinalCNF::zero(), parse_coef(base)?));
                continue;
            };
            let exp = match rest.strip_prefix('^') {
                None if rest.is_empty() => OrdinalCNF::nat(1),
                None => return Err(Error::Locator(format!("bad term `{term}`"))),
                Some(e) => {
                    let e = e
                        .strip_prefix('(')
                        .and_then(|x| x.strip_suffix(')'))
                        .unwrap_or(e);
                    OrdinalCNF::parse(e).map_err(|err| Error::Locator(err.to_string()))?
                }
            };
            if exp.is_zero() {
                return Err(Error::Locator(format!("bad term `{term}`")));
            }
            terms.push((exp, coef.unwrap_or(Coef::Nat(1))));
        }
        Pos::from_terms(terms)
    }
}

impl Serialize for Pos {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A point of a ladder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Fixed(Pos),
    Strand(Pos, i64),
}

impl Point {
    /// The fixed point at or directly below this point.
    pub fn base(&self) -> &Pos {
        match self {
            Point::Fixed(a) | Point::Strand(a, _) => a,
        }
    }

    pub fn image(&self) -> Point {
        match self {
            Point::Fixed(_) => self.clone(),
            Point::Strand(a, j) => Point::Strand(a.clone(), j + 1),
        }
    }

    pub fn instantiate(&self, m: u64) -> Result<Point> {
        Ok(match self {
            Point::Fixed(a) => Point::Fixed(a.instantiate(m)?),
            Point::Strand(a, j) => Point::Strand(a.instantiate(m)?, *j),
        })
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base().cmp(other.base()).then(match (self, other) {
            (Point::Fixed(_), Point::Fixed(_)) => Ordering::Equal,
            (Point::Fixed(_), Point::Strand(..)) => Ordering::Less,
            (Point::Strand(..), Point::Fixed(_)) => Ordering::Greater,
            // large indices sit next to the attracting lower end
            (Point::Strand(_, i), Point::Strand(_, j)) => j.cmp(i),
        })
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Fixed(a) => write!(f, "{a}"),
            Point::Strand(a, j) => write!(f, "{a}/{j}"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.rsplit_once('/') {
            Some((a, j)) => Ok(Point::Strand(
                a.parse()?,
                j.trim()
                    .parse()
                    .map_err(|_| Error::Locator(format!("bad strand index `{j}`")))?,
            )),
            None => Ok(Point::Fixed(text.parse()?)),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
