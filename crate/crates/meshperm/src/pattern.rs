//! Singleton mesh patterns: sign vectors, parsing, lattice operations and
//! structural classification (projective, antipodal, hyperplane).
//!
//! A pattern of dimension d is a set of distinct columns over {+,-}^d.
//! Columns are kept sorted lexicographically with + < -, which fixes
//! structural equality, hashing and text output.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One column of T(P): a tuple over {+,-}^d.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn get(&self, row: usize) -> Sign {
        self.0[row - 1]
    }

    /// Componentwise complement c(C).
    pub fn complement(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| s.flipped()).collect())
    }

    pub fn with_row(&self, row: usize, sign: Sign) -> SignVector {
        let mut v = self.0.clone();
        v[row - 1] = sign;
        SignVector(v)
    }

    pub fn without_row(&self, row: usize) -> SignVector {
        let mut v = self.0.clone();
        v.remove(row - 1);
        SignVector(v)
    }

    /// Bit encoding with bit i−1 set when row i is minus; +…+ is 0.
    pub fn code(&self) -> u32 {
        self.0.iter().enumerate().fold(0, |acc, (i, s)| match s {
            Sign::Minus => acc | (1 << i),
            Sign::Plus => acc,
        })
    }

    pub fn from_code(code: u32, d: usize) -> SignVector {
        SignVector(
            (0..d)
                .map(|i| {
                    if code & (1 << i) != 0 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::BadSymbol(other)),
            })
            .collect::<Result<_>>()?;
        Ok(SignVector(signs))
    }
}

/// A singleton mesh pattern: a set of distinct sign vectors of equal length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Smp {
    d: usize,
    cols: Vec<SignVector>, // sorted, distinct
}

impl Smp {
    /// Build from explicit columns; rejects duplicates and mixed lengths.
    pub fn new(d: usize, cols: Vec<SignVector>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let mut cols = cols;
        for c in &cols {
            if c.len() != d {
                return Err(Error::RaggedColumns);
            }
        }
        cols.sort();
        for w in cols.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateColumn(w[0].to_string()));
            }
        }
        Ok(Smp { d, cols })
    }

    /// The empty pattern of dimension d (every element of every permutation
    /// is an occurrence of it).
    pub fn empty(d: usize) -> Result<Self> {
        Smp::new(d, vec![])
    }

    /// The full pattern with all 2^d columns.
    pub fn full(d: usize) -> Result<Self> {
        if d >= 26 {
            return Err(Error::CapacityExceeded(format!("full pattern with d={d}")));
        }
        Smp::new(
            d,
            (0..1u32 << d)
                .map(|c| SignVector::from_code(c, d))
                .collect(),
        )
    }

    fn from_sorted(d: usize, cols: Vec<SignVector>) -> Self {
        debug_assert!(cols.windows(2).all(|w| w[0] < w[1]));
        Smp { d, cols }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Cardinality k = number of columns.
    pub fn k(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[SignVector] {
        &self.cols
    }

    pub fn contains(&self, v: &SignVector) -> bool {
        self.cols.binary_search(v).is_ok()
    }

    /// Set union of columns.
    pub fn union(&self, other: &Smp) -> Result<Smp> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        cols.sort();
        cols.dedup();
        Ok(Smp::from_sorted(self.d, cols))
    }

    /// Set intersection of columns.
    pub fn intersection(&self, other: &Smp) -> Result<Smp> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        let cols = self
            .cols
            .iter()
            .filter(|c| other.contains(c))
            .cloned()
            .collect();
        Ok(Smp::from_sorted(self.d, cols))
    }

    pub fn is_subset_of(&self, other: &Smp) -> bool {
        self.d == other.d && self.cols.iter().all(|c| other.contains(c))
    }

    /// Rows of T(P) permuted: row i of the result is row tau(i) of self.
    /// `tau` is 1-based and must be a permutation of 1..=d.
    pub fn permute_rows(&self, tau: &[usize]) -> Result<Smp> {
        if tau.len() != self.d {
            return Err(Error::DimensionMismatch(tau.len(), self.d));
        }
        let mut seen = vec![false; self.d];
        for &t in tau {
            if t == 0 || t > self.d || seen[t - 1] {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    limit: self.d,
                });
            }
            seen[t - 1] = true;
        }
        let mut cols: Vec<SignVector> = self
            .cols
            .iter()
            .map(|c| SignVector::new(tau.iter().map(|&t| c.get(t)).collect()))
            .collect();
        cols.sort();
        Ok(Smp::from_sorted(self.d, cols))
    }

    /// Complement row i of T(P) (swap + and - in that row).
    pub fn complement_row(&self, i: usize) -> Result<Smp> {
        if i == 0 || i > self.d {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.d,
            });
        }
        let mut cols: Vec<SignVector> = self
            .cols
            .iter()
            .map(|c| c.with_row(i, c.get(i).flipped()))
            .collect();
        cols.sort();
        Ok(Smp::from_sorted(self.d, cols))
    }

    /// Projective in direction i: the column set is closed under flipping
    /// the sign in row i.
    pub fn is_projective(&self, i: usize) -> bool {
        if i == 0 || i > self.d {
            return false;
        }
        self.cols
            .iter()
            .all(|c| self.contains(&c.with_row(i, c.get(i).flipped())))
    }

    /// Projection: drop row i, halving the column set. Requires
    /// `is_projective(i)` and d ≥ 3 so the result is still a pattern.
    pub fn project(&self, i: usize) -> Result<Smp> {
        if !self.is_projective(i) {
            return Err(Error::NotProjective(i));
        }
        if self.d < 3 {
            return Err(Error::DimensionTooSmall(self.d - 1));
        }
        let mut cols: Vec<SignVector> = self.cols.iter().map(|c| c.without_row(i)).collect();
        cols.sort();
        cols.dedup();
        Ok(Smp::from_sorted(self.d - 1, cols))
    }

    /// Closed under componentwise complement.
    pub fn is_plus_antipodal(&self) -> bool {
        self.cols.iter().all(|c| self.contains(&c.complement()))
    }

    /// Exactly one member of each antipodal pair {C, c(C)} is present, which
    /// forces cardinality 2^(d-1).
    pub fn is_minus_antipodal(&self) -> bool {
        self.k() == 1 << (self.d - 1) && self.cols.iter().all(|c| !self.contains(&c.complement()))
    }

    /// True when every antipodal pair has at least one representative in the
    /// pattern, i.e. some minus-antipodal pattern is a subset.
    pub fn contains_minus_antipodal_subset(&self) -> bool {
        if self.k() < 1 << (self.d - 1) {
            return false;
        }
        let mut pair_keys: Vec<SignVector> = self
            .cols
            .iter()
            .map(|c| {
                let comp = c.complement();
                if *c < comp {
                    c.clone()
                } else {
                    comp
                }
            })
            .collect();
        pair_keys.sort();
        pair_keys.dedup();
        pair_keys.len() == 1 << (self.d - 1)
    }

    /// All 2^(d-1) columns with + in row i belong to the pattern.
    pub fn is_hyperplane(&self, i: usize) -> bool {
        if i == 0 || i > self.d {
            return false;
        }
        self.cols.iter().filter(|c| c.get(i) == Sign::Plus).count() == 1 << (self.d - 1)
    }

    /// The i-hyperplane core: all columns with + in row i.
    pub fn hyperplane_core(d: usize, i: usize) -> Result<Smp> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if i == 0 || i > d {
            return Err(Error::IndexOutOfRange { index: i, limit: d });
        }
        let cols = (0..1u32 << d)
            .map(|c| SignVector::from_code(c, d))
            .filter(|c| c.get(i) == Sign::Plus)
            .collect();
        Smp::new(d, cols)
    }
}

impl fmt::Display for Smp {
    /// Canonical text: columns in sorted order joined by commas.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Expand one column template over {+,-,*}: every * row yields both signs.
fn expand_column(template: &str) -> Result<Vec<SignVector>> {
    let mut acc: Vec<Vec<Sign>> = vec![vec![]];
    for c in template.chars() {
        let choices: &[Sign] = match c {
            '+' => &[Sign::Plus],
            '-' => &[Sign::Minus],
            '*' => &[Sign::Plus, Sign::Minus],
            other => return Err(Error::BadSymbol(other)),
        };
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for prefix in &acc {
            for &s in choices {
                let mut v = prefix.clone();
                v.push(s);
                next.push(v);
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(SignVector::new).collect())
}

/// Parse the pattern grammar `column (',' column)*` with columns over
/// {+,-,*}; star rows are expanded before storage and duplicates (also those
/// produced by overlapping expansions) are rejected.
pub fn parse_smp(text: &str) -> Result<Smp> {
    let templates: Vec<&str> = text.split(',').map(str::trim).collect();
    if templates.iter().any(|t| t.is_empty()) {
        return Err(Error::RaggedColumns);
    }
    let d = templates[0].chars().count();
    if templates.iter().any(|t| t.chars().count() != d) {
        return Err(Error::RaggedColumns);
    }
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut cols = Vec::new();
    for t in &templates {
        cols.extend(expand_column(t)?);
    }
    Smp::new(d, cols)
}

/// Canonical text form (expanded columns, sorted).
pub fn format_smp(p: &Smp) -> String {
    p.to_string()
}

#[derive(Serialize, Deserialize)]
struct SmpDto {
    d: usize,
    columns: Vec<String>,
}

impl Serialize for Smp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SmpDto {
            d: self.d,
            columns: self.cols.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Smp {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let dto = SmpDto::deserialize(de)?;
        let cols = dto
            .columns
            .iter()
            .map(|c| c.parse::<SignVector>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Smp::new(dto.d, cols).map_err(serde::de::Error::custom)
    }
}
