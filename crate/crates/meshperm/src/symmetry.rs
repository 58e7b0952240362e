//! The symmetry group acting jointly on patterns and permutations: row
//! permutations composed with row complements. Occurrence counts are
//! equivariant under the paired actions, which is what the tests rely on.

use crate::multiperm::MultiPerm;
use crate::pattern::Smp;
use crate::{Error, Result};

/// A symmetry: first permute rows by `row_perm` (1-based; row i of the image
/// is row `row_perm[i-1]` of the argument), then complement every row i with
/// `flip[i-1]` set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetry {
    pub row_perm: Vec<usize>,
    pub flip: Vec<bool>,
}

impl Symmetry {
    pub fn identity(d: usize) -> Self {
        Symmetry {
            row_perm: (1..=d).collect(),
            flip: vec![false; d],
        }
    }

    pub fn d(&self) -> usize {
        self.row_perm.len()
    }

    pub fn apply_pattern(&self, p: &Smp) -> Result<Smp> {
        if p.d() != self.d() {
            return Err(Error::DimensionMismatch(p.d(), self.d()));
        }
        let mut out = p.permute_rows(&self.row_perm)?;
        for (i, &f) in self.flip.iter().enumerate() {
            if f {
                out = out.complement_row(i + 1)?;
            }
        }
        Ok(out)
    }

    /// The matching action on permutations. Row permutation reorders the
    /// full matrix (including the identity row) and re-canonicalizes; a flip
    /// of row i ≥ 2 complements that row's values; a flip of row 1 flips the
    /// first coordinate of the point set, i.e. reverses every value row.
    pub fn apply_perm(&self, mp: &MultiPerm) -> Result<MultiPerm> {
        if mp.d() != self.d() {
            return Err(Error::DimensionMismatch(mp.d(), self.d()));
        }
        let full = mp.full_matrix();
        let permuted: Vec<Vec<u32>> = self.row_perm.iter().map(|&r| full[r - 1].clone()).collect();
        let mut out = MultiPerm::from_matrix(permuted)?;
        for (i, &f) in self.flip.iter().enumerate() {
            if f {
                out = out.complement_row(i + 1)?;
            }
        }
        Ok(out)
    }
}

/// Every symmetry of dimension d: all d! row permutations times all 2^d
/// flip sets. Meant for exhaustive checks at small d.
pub fn all_symmetries(d: usize) -> Vec<Symmetry> {
    use itertools::Itertools;
    let mut out = Vec::new();
    for perm in (1..=d).permutations(d) {
        for mask in 0..1u32 << d {
            out.push(Symmetry {
                row_perm: perm.clone(),
                flip: (0..d).map(|i| mask & (1 << i) != 0).collect(),
            });
        }
    }
    out
}
