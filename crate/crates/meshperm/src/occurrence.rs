//! Occurrence and avoidance semantics.
//!
//! Three pattern kinds share this module: singleton mesh patterns (an element
//! is an occurrence when every shaded hyperoctant around it is empty),
//! general mesh patterns of length k with shaded cells, and marked singleton
//! patterns whose octants carry either a shading or a lower bound.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::multiperm::MultiPerm;
use crate::pattern::{SignVector, Smp};
use crate::{Error, Result};

/// Compiled membership test for one pattern, reusable across permutations.
/// Works directly on value-row slices so the enumeration loop stays free of
/// allocations.
pub struct SmpChecker {
    d: usize,
    codes: Vec<u64>,
    table: Option<Vec<bool>>,
}

impl SmpChecker {
    pub fn new(p: &Smp) -> Self {
        let d = p.d();
        let mut codes: Vec<u64> = p.columns().iter().map(|c| c.code() as u64).collect();
        codes.sort_unstable();
        let table = if d <= 20 {
            let mut t = vec![false; 1 << d];
            for &c in &codes {
                t[c as usize] = true;
            }
            Some(t)
        } else {
            None
        };
        SmpChecker { d, codes, table }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    fn contains_code(&self, code: u64) -> bool {
        match &self.table {
            Some(t) => t[code as usize],
            None => self.codes.binary_search(&code).is_ok(),
        }
    }

    /// Sign code of element j relative to element i (0-based positions).
    #[inline]
    fn pair_code(rows: &[&[u32]], j: usize, i: usize) -> u64 {
        let mut code = if j < i { 1 } else { 0 };
        for (r, row) in rows.iter().enumerate() {
            if row[j] < row[i] {
                code |= 1 << (r + 1);
            }
        }
        code
    }

    /// Is element i (0-based) an occurrence in the permutation given by its
    /// value rows?
    pub fn is_occurrence_at(&self, rows: &[&[u32]], n: usize, i: usize) -> bool {
        for j in 0..n {
            if j != i && self.contains_code(Self::pair_code(rows, j, i)) {
                return false;
            }
        }
        true
    }

    pub fn count(&self, rows: &[&[u32]], n: usize) -> usize {
        (0..n)
            .filter(|&i| self.is_occurrence_at(rows, n, i))
            .count()
    }

    pub fn avoids(&self, rows: &[&[u32]], n: usize) -> bool {
        (0..n).all(|i| !self.is_occurrence_at(rows, n, i))
    }
}

fn rows_view(mp: &MultiPerm) -> Vec<&[u32]> {
    mp.value_rows().iter().map(|r| r.as_slice()).collect()
}

fn check_dims(mp: &MultiPerm, d: usize) -> Result<()> {
    if mp.d() != d {
        return Err(Error::DimensionMismatch(mp.d(), d));
    }
    Ok(())
}

/// Is element i (1-based) an occurrence of P: no other element may lie in a
/// shaded hyperoctant relative to it.
pub fn is_occurrence_smp(mp: &MultiPerm, i: usize, p: &Smp) -> Result<bool> {
    check_dims(mp, p.d())?;
    if i == 0 || i > mp.n() {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: mp.n(),
        });
    }
    let checker = SmpChecker::new(p);
    Ok(checker.is_occurrence_at(&rows_view(mp), mp.n(), i - 1))
}

/// Number of elements of Π that are occurrences of P.
pub fn count_occurrences_smp(mp: &MultiPerm, p: &Smp) -> Result<usize> {
    check_dims(mp, p.d())?;
    let checker = SmpChecker::new(p);
    Ok(checker.count(&rows_view(mp), mp.n()))
}

/// Π avoids P when it has no occurrences.
pub fn avoids(mp: &MultiPerm, p: &Smp) -> Result<bool> {
    check_dims(mp, p.d())?;
    let checker = SmpChecker::new(p);
    Ok(checker.avoids(&rows_view(mp), mp.n()))
}

/// A general d-dimensional mesh pattern: an underlying permutation of length
/// k plus a set of shaded cells, each cell a d-tuple over {0..k}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshPattern {
    t: MultiPerm,
    shading: Vec<Vec<usize>>,
}

impl MeshPattern {
    pub fn new(t: MultiPerm, mut shading: Vec<Vec<usize>>) -> Result<Self> {
        let d = t.d();
        let k = t.n();
        for cell in &shading {
            if cell.len() != d {
                return Err(Error::InvalidMeshPattern(format!(
                    "cell has {} coordinates, expected {d}",
                    cell.len()
                )));
            }
            if cell.iter().any(|&c| c > k) {
                return Err(Error::InvalidMeshPattern(format!(
                    "cell {cell:?} outside 0..={k}"
                )));
            }
        }
        shading.sort();
        let before = shading.len();
        shading.dedup();
        if shading.len() != before {
            return Err(Error::InvalidMeshPattern("duplicate cell".into()));
        }
        Ok(MeshPattern { t, shading })
    }

    /// The all-ascending length-2 pattern with empty shading, one per
    /// dimension: ((12,…,12), ∅).
    pub fn ascending_pair(d: usize) -> Result<Self> {
        MeshPattern::new(MultiPerm::identity(d, 2)?, vec![])
    }

    pub fn t(&self) -> &MultiPerm {
        &self.t
    }

    pub fn shading(&self) -> &[Vec<usize>] {
        &self.shading
    }

    pub fn d(&self) -> usize {
        self.t.d()
    }

    pub fn k(&self) -> usize {
        self.t.n()
    }

    /// Does the index subset (0-based, ascending) carry T as a subpermutation?
    fn matches_subperm(&self, rows: &[&[u32]], idx: &[usize]) -> bool {
        let trows = self.t.value_rows();
        for (r, trow) in trows.iter().enumerate() {
            for a in 0..idx.len() {
                for b in a + 1..idx.len() {
                    if (rows[r][idx[a]] < rows[r][idx[b]]) != (trow[a] < trow[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Does outside element r (0-based) fall in the shaded cell relative to
    /// the occurrence at `idx`? Cell coordinates are 1-based here (1..=k+1).
    fn element_in_cell(&self, rows: &[&[u32]], idx: &[usize], r: usize, cell: &[usize]) -> bool {
        let k = idx.len();
        // axis 1: positions; i_0 = 0 and i_{k+1} = ∞
        let p1 = cell[0] + 1;
        let lower = if p1 >= 2 { idx[p1 - 2] + 1 } else { 0 };
        if r < lower {
            return false;
        }
        if p1 <= k && r >= idx[p1 - 1] {
            return false;
        }
        // value axes: strictly between the bounding values, in either order;
        // comparisons against the undefined boundary are satisfied
        for (ri, row) in rows.iter().enumerate() {
            let p = cell[ri + 1] + 1;
            let v = row[r];
            let a = if p >= 2 { Some(row[idx[p - 2]]) } else { None };
            let b = if p <= k { Some(row[idx[p - 1]]) } else { None };
            let inside = match (a, b) {
                (Some(a), Some(b)) => v > a.min(b) && v < a.max(b),
                (None, Some(b)) => v < b,
                (Some(a), None) => v > a,
                (None, None) => true,
            };
            if !inside {
                return false;
            }
        }
        true
    }

    /// Occurrence count on a value-rows view.
    pub fn count(&self, rows: &[&[u32]], n: usize) -> usize {
        let k = self.k();
        if k > n {
            return 0;
        }
        (0..n)
            .combinations(k)
            .filter(|idx| {
                if !self.matches_subperm(rows, idx) {
                    return false;
                }
                let outside = (0..n).filter(|r| !idx.contains(r));
                for r in outside {
                    for cell in &self.shading {
                        if self.element_in_cell(rows, idx, r, cell) {
                            return false;
                        }
                    }
                }
                true
            })
            .count()
    }
}

/// Number of occurrences of the mesh pattern M in Π: index subsets carrying
/// T as a subpermutation with no outside element in a shaded cell.
pub fn count_occurrences_mesh(mp: &MultiPerm, m: &MeshPattern) -> Result<usize> {
    check_dims(mp, m.d())?;
    Ok(m.count(&rows_view(mp), mp.n()))
}

#[derive(Serialize, Deserialize)]
struct MeshPatternDto {
    #[serde(rename = "T")]
    t: MultiPerm,
    shading: Vec<Vec<usize>>,
}

impl Serialize for MeshPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeshPatternDto {
            t: self.t.clone(),
            shading: self.shading.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeshPattern {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let dto = MeshPatternDto::deserialize(de)?;
        MeshPattern::new(dto.t, dto.shading).map_err(serde::de::Error::custom)
    }
}

/// Octant requirement in a marked pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    /// The octant must be empty.
    Shaded,
    /// The octant must contain at least this many elements.
    AtLeast(u32),
}

/// A marked singleton pattern: distinct octants, each carrying a mark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSmp {
    d: usize,
    entries: Vec<(SignVector, Mark)>, // sorted by octant
}

impl MarkedSmp {
    pub fn new(d: usize, mut entries: Vec<(SignVector, Mark)>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        for (v, m) in &entries {
            if v.len() != d {
                return Err(Error::RaggedColumns);
            }
            if let Mark::AtLeast(0) = m {
                return Err(Error::InvalidMeshPattern(
                    "mark must be a positive integer or a shading".into(),
                ));
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateColumn(w[0].0.to_string()));
            }
        }
        Ok(MarkedSmp { d, entries })
    }

    /// The pattern (+,…,+ : at least x) in dimension d.
    pub fn all_plus_at_least(d: usize, x: u32) -> Result<Self> {
        let v: SignVector = "+".repeat(d).parse()?;
        MarkedSmp::new(d, vec![(v, Mark::AtLeast(x))])
    }

    /// A marked pattern with every octant of the given SMP shaded; agrees
    /// with the plain SMP semantics.
    pub fn all_shaded(p: &Smp) -> Self {
        MarkedSmp {
            d: p.d(),
            entries: p
                .columns()
                .iter()
                .map(|c| (c.clone(), Mark::Shaded))
                .collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[(SignVector, Mark)] {
        &self.entries
    }

    /// Is element i (0-based) an occurrence on a value-rows view?
    pub fn is_occurrence_at(&self, rows: &[&[u32]], n: usize, i: usize) -> bool {
        let mut counts = vec![0u32; self.entries.len()];
        for j in 0..n {
            if j == i {
                continue;
            }
            let code = SmpChecker::pair_code(rows, j, i);
            // entries are sorted by sign vector, not by code; linear scan is
            // fine at singleton-pattern cardinalities
            for (e, (v, _)) in self.entries.iter().enumerate() {
                if v.code() as u64 == code {
                    counts[e] += 1;
                    break;
                }
            }
        }
        self.entries
            .iter()
            .zip(&counts)
            .all(|((_, mark), &c)| match mark {
                Mark::Shaded => c == 0,
                Mark::AtLeast(x) => c >= *x,
            })
    }

    pub fn count(&self, rows: &[&[u32]], n: usize) -> usize {
        (0..n)
            .filter(|&i| self.is_occurrence_at(rows, n, i))
            .count()
    }
}

impl fmt::Display for MarkedSmp {
    /// Text form: "++:#" for a shaded octant, "++:2" for a lower bound.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match m {
                Mark::Shaded => write!(f, "{v}:#")?,
                Mark::AtLeast(x) => write!(f, "{v}:{x}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for MarkedSmp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut d = None;
        for part in s.split(',') {
            let part = part.trim();
            let (cols, mark) = part.split_once(':').ok_or(Error::BadSymbol(':'))?;
            let v: SignVector = cols.parse()?;
            if *d.get_or_insert(v.len()) != v.len() {
                return Err(Error::RaggedColumns);
            }
            let mark = if mark == "#" {
                Mark::Shaded
            } else {
                Mark::AtLeast(
                    mark.parse::<u32>()
                        .map_err(|_| Error::BadSymbol(mark.chars().next().unwrap_or(' ')))?,
                )
            };
            entries.push((v, mark));
        }
        MarkedSmp::new(d.unwrap_or(0), entries)
    }
}

/// Is element i (1-based) an occurrence of the marked pattern: every shaded
/// octant empty, every bounded octant populated with at least its bound.
pub fn is_occurrence_marked(mp: &MultiPerm, i: usize, m: &MarkedSmp) -> Result<bool> {
    check_dims(mp, m.d())?;
    if i == 0 || i > mp.n() {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: mp.n(),
        });
    }
    Ok(m.is_occurrence_at(&rows_view(mp), mp.n(), i - 1))
}

pub fn count_occurrences_marked(mp: &MultiPerm, m: &MarkedSmp) -> Result<usize> {
    check_dims(mp, m.d())?;
    Ok(m.count(&rows_view(mp), mp.n()))
}
