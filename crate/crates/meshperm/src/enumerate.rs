//! Exhaustive, exact enumeration over S^d_n: distribution tables for plain,
//! mesh and marked patterns, avoider counts, dimension-reduction
//! cross-checks and maximum-occurrence counts.
//!
//! Tuples of value rows are visited in lexicographic order of the rows'
//! ranks; parallel chunking partitions on the first value row and merges
//! per-worker count vectors by addition, so the result is identical for any
//! worker count.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::numbers::{binomial, factorial, multiperm_count};
use crate::occurrence::{MarkedSmp, MeshPattern, SmpChecker};
use crate::pattern::{SignVector, Smp};
use crate::{Error, Result};

/// Enumeration limits and parallelism degree.
#[derive(Debug, Clone)]
pub struct EnumOptions {
    /// Maximum number of elementary occurrence checks, estimated as
    /// (n!)^(d-1) · n².
    pub budget: u64,
    /// Number of worker threads; None uses the global pool.
    pub workers: Option<usize>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            budget: 1_000_000_000,
            workers: None,
        }
    }
}

/// Exact counts c_k = #{Π ∈ S^d_n with k occurrences}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionTable {
    pub d: usize,
    pub n: usize,
    pub counts: Vec<BigUint>,
}

impl DistributionTable {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// c_0, the number of avoiders.
    pub fn avoiders(&self) -> &BigUint {
        &self.counts[0]
    }

    /// Largest k with c_k > 0; zero for an all-avoiding table.
    pub fn max_occurrences(&self) -> usize {
        self.counts.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn counts_decimal(&self) -> Vec<String> {
        self.counts.iter().map(|c| c.to_string()).collect()
    }
}

fn check_budget(d: usize, n: usize, opts: &EnumOptions) -> Result<()> {
    let checks = multiperm_count(d, n) * BigUint::from(n.max(1).pow(2));
    if checks > BigUint::from(opts.budget) {
        return Err(Error::BudgetExceeded {
            checks,
            budget: opts.budget,
        });
    }
    Ok(())
}

fn run_with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        None => f(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("failed to build worker pool")
            .install(f),
    }
}

/// Core engine: visit every (d-1)-tuple of n-permutations and histogram the
/// bucket index the counter assigns to each.
fn enumerate_buckets<F>(
    d: usize,
    n: usize,
    n_buckets: usize,
    opts: &EnumOptions,
    counter: F,
) -> Result<Vec<u64>>
where
    F: Fn(&[&[u32]], usize) -> usize + Sync,
{
    check_budget(d, n, opts)?;
    let perms: Vec<Vec<u32>> = (1..=n as u32).permutations(n).collect();
    let len = perms.len();
    let inner_slots = d - 2;
    let inner_total = len.pow(inner_slots as u32);
    let zero = || vec![0u64; n_buckets];
    let counts = run_with_workers(opts.workers, || {
        (0..len)
            .into_par_iter()
            .map(|outer| {
                let mut local = zero();
                let mut rows: Vec<&[u32]> = vec![&perms[outer]; d - 1];
                for t in 0..inner_total {
                    let mut rem = t;
                    for slot in 0..inner_slots {
                        rows[1 + slot] = &perms[rem % len];
                        rem /= len;
                    }
                    local[counter(&rows, n)] += 1;
                }
                local
            })
            .reduce(zero, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            })
    });
    Ok(counts)
}

fn to_table(d: usize, n: usize, counts: Vec<u64>) -> DistributionTable {
    DistributionTable {
        d,
        n,
        counts: counts.into_iter().map(BigUint::from).collect(),
    }
}

/// Exact occurrence distribution of an SMP over S^d_n.
pub fn distribution_smp(p: &Smp, n: usize, opts: &EnumOptions) -> Result<DistributionTable> {
    let checker = SmpChecker::new(p);
    let counts = enumerate_buckets(p.d(), n, n + 1, opts, |rows, n| checker.count(rows, n))?;
    Ok(to_table(p.d(), n, counts))
}

/// Exact occurrence distribution of a general mesh pattern; a length-k
/// pattern can occur up to C(n,k) times.
pub fn distribution_mesh(
    m: &MeshPattern,
    n: usize,
    opts: &EnumOptions,
) -> Result<DistributionTable> {
    let buckets = binomial(n, m.k()) + 1;
    let counts = enumerate_buckets(m.d(), n, buckets, opts, |rows, n| m.count(rows, n))?;
    Ok(to_table(m.d(), n, counts))
}

/// Exact occurrence distribution of a marked singleton pattern.
pub fn distribution_marked(
    m: &MarkedSmp,
    n: usize,
    opts: &EnumOptions,
) -> Result<DistributionTable> {
    let counts = enumerate_buckets(m.d(), n, n + 1, opts, |rows, n| m.count(rows, n))?;
    Ok(to_table(m.d(), n, counts))
}

/// |Av^d_n(P)|, with early exit per permutation at the first occurrence.
pub fn count_avoiders(p: &Smp, n: usize, opts: &EnumOptions) -> Result<BigUint> {
    let checker = SmpChecker::new(p);
    let counts = enumerate_buckets(p.d(), n, 2, opts, |rows, n| {
        usize::from(checker.avoids(rows, n))
    })?;
    Ok(BigUint::from(counts[1]))
}

/// Check the projective lift identity: the distribution of P equals n! times
/// the distribution of its projection, elementwise.
pub fn projective_lift_check(p: &Smp, i: usize, n: usize, opts: &EnumOptions) -> Result<bool> {
    if !p.is_projective(i) {
        return Err(Error::NotProjective(i));
    }
    let projection = p.project(i)?;
    let lifted = distribution_smp(p, n, opts)?;
    let base = distribution_smp(&projection, n, opts)?;
    let factor = factorial(n);
    Ok(lifted
        .counts
        .iter()
        .zip(&base.counts)
        .all(|(full, proj)| *full == proj * &factor))
}

/// Both sides of the hyperplane-reduction identity: the formula count
/// Σ k (n-1)! f(n,k) and the direct count of permutations with exactly one
/// occurrence of P. The two are equal when the implementation is right.
pub fn hyperplane_reduction_count(
    p: &Smp,
    i: usize,
    n: usize,
    opts: &EnumOptions,
) -> Result<(BigUint, BigUint)> {
    if !p.is_hyperplane(i) {
        return Err(Error::NotHyperplane(i));
    }
    let core = Smp::hyperplane_core(p.d(), i)?;
    let extra: Vec<SignVector> = p
        .columns()
        .iter()
        .filter(|c| !core.contains(c))
        .cloned()
        .collect();
    if extra.is_empty() {
        // the bare core is projective, not a reduction instance
        return Err(Error::NotHyperplane(i));
    }
    let dropped = Smp::new(p.d() - 1, extra.iter().map(|c| c.without_row(i)).collect())?;
    let f = distribution_smp(&dropped, n, opts)?;
    let fact = factorial(n.saturating_sub(1));
    let mut via_formula = BigUint::zero();
    for k in 1..=n {
        via_formula += BigUint::from(k) * &fact * &f.counts[k];
    }
    let direct_table = distribution_smp(p, n, opts)?;
    let direct = if n >= 1 {
        direct_table.counts[1].clone()
    } else {
        BigUint::zero()
    };
    Ok((via_formula, direct))
}

/// The cardinality-2 plus-antipodal pattern {+…+, -…-} in dimension d.
pub fn monotone_pair_pattern(d: usize) -> Result<Smp> {
    let plus: SignVector = "+".repeat(d).parse()?;
    let minus = plus.complement();
    Smp::new(d, vec![plus, minus])
}

/// R(n): permutations with the maximum possible n occurrences of the
/// monotone pair pattern.
pub fn count_max_occurrences(d: usize, n: usize, opts: &EnumOptions) -> Result<BigUint> {
    let table = distribution_smp(&monotone_pair_pattern(d)?, n, opts)?;
    Ok(table.counts[n].clone())
}

/// The same quantity through the parallel-avoidance predicate: tuples of
/// value rows with no pair of positions ascending in every row at once.
pub fn count_parallel_nonascending(d: usize, n: usize, opts: &EnumOptions) -> Result<BigUint> {
    let counts = enumerate_buckets(d, n, 2, opts, |rows, n| {
        for i in 0..n {
            for j in i + 1..n {
                if rows.iter().all(|row| row[i] < row[j]) {
                    return 0;
                }
            }
        }
        1
    })?;
    Ok(BigUint::from(counts[1]))
}

/// All of S^d_n materialized; intended for small exhaustive tests.
pub fn all_multiperms(d: usize, n: usize) -> Result<Vec<crate::MultiPerm>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let perms: Vec<Vec<u32>> = (1..=n as u32).permutations(n).collect();
    let len = perms.len();
    let total = len.pow((d - 1) as u32);
    let mut out = Vec::with_capacity(total);
    for t in 0..total {
        let mut rem = t;
        let rows: Vec<Vec<u32>> = (0..d - 1)
            .map(|_| {
                let row = perms[rem % len].clone();
                rem /= len;
                row
            })
            .collect();
        out.push(crate::MultiPerm::new(rows)?);
    }
    Ok(out)
}
