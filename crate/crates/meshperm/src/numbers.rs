//! Small exact-arithmetic helpers used by the enumeration and series layers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// n! as an unsigned big integer.
pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// n! as a signed big integer.
pub fn factorial_int(n: usize) -> BigInt {
    BigInt::from(factorial(n))
}

/// |S^d_n| = (n!)^(d-1).
pub fn multiperm_count(d: usize, n: usize) -> BigUint {
    factorial(n).pow((d - 1) as u32)
}

/// Signless Stirling numbers of the first kind c(n,k), counting
/// n-permutations with k cycles; c(n,k) = c(n-1,k-1) + (n-1) c(n-1,k).
pub fn stirling1_unsigned(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    if n == 0 {
        return BigInt::one();
    }
    if k == 0 {
        return BigInt::zero();
    }
    let mut prev = vec![BigInt::zero(); k + 1];
    prev[0] = BigInt::one();
    for i in 1..=n {
        let mut curr = vec![BigInt::zero(); k + 1];
        for j in 1..=k {
            curr[j] = &prev[j - 1] + &prev[j] * BigInt::from(i - 1);
        }
        prev = curr;
    }
    prev[k].clone()
}

/// Stirling numbers of the second kind S(n,k).
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    if n == 0 {
        return BigInt::one();
    }
    if k == 0 {
        return BigInt::zero();
    }
    let mut prev = vec![BigInt::zero(); k + 1];
    prev[0] = BigInt::one();
    for _ in 1..=n {
        let mut curr = vec![BigInt::zero(); k + 1];
        for j in 1..=k {
            curr[j] = &prev[j - 1] + &prev[j] * BigInt::from(j);
        }
        prev = curr;
    }
    prev[k].clone()
}

/// C(n,k) as a usize; saturates are not needed at the sizes we enumerate.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
