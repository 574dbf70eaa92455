//! Arbitrary-precision integer and rational kernels: binomial
//! coefficients (negative upper index included), harmonic numbers,
//! Bernoulli numbers and polynomials.
//!
//! Everything here is exact; this module is the correctness reference
//! for the modular fast path.

use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Binomial coefficient, total over integer `n` and `k >= 0`.
///
/// For `n >= 0` this is the usual coefficient (0 when `k > n`). For
/// `n < 0` it follows the convention `C(-n, k) = (-1)^k C(n+k-1, k)`.
/// Any `k < 0` yields 0.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n < 0 {
        let flip = binom(-n + k - 1, k);
        return if k % 2 == 0 { flip } else { -flip };
    }
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Cache of factorials `0! ..= cap!`, grown on demand.
///
/// Shared read-heavy table; `binom` below answers from the table when
/// both arguments are inside capacity and falls back to the
/// multiplicative product otherwise.
pub struct FactorialTable {
    table: Mutex<Vec<BigInt>>,
}

impl FactorialTable {
    pub fn new(capacity: usize) -> Self {
        let t = FactorialTable {
            table: Mutex::new(vec![BigInt::one()]),
        };
        t.grow(capacity);
        t
    }

    /// Extends the table up to `capacity`; existing entries are kept.
    pub fn grow(&self, capacity: usize) {
        let mut table = self.table.lock().unwrap();
        while table.len() <= capacity {
            let n = table.len();
            let next = table[n - 1].clone() * BigInt::from(n);
            table.push(next);
        }
    }

    pub fn capacity(&self) -> usize {
        self.table.lock().unwrap().len() - 1
    }

    pub fn factorial(&self, n: usize) -> BigInt {
        self.grow(n);
        self.table.lock().unwrap()[n].clone()
    }

    /// Same convention as the free [`binom`], served from the cache
    /// when possible.
    pub fn binom(&self, n: i64, k: i64) -> BigInt {
        if n >= 0 && k >= 0 && k <= n {
            self.grow(n as usize);
            let table = self.table.lock().unwrap();
            let (n, k) = (n as usize, k as usize);
            return &table[n] / (&table[k] * &table[n - k]);
        }
        binom(n, k)
    }
}

/// Generalized harmonic number `H_n^{(r)} = sum_{j=1..n} 1/j^r`.
pub fn harmonic(n: u64, r: u32) -> BigRational {
    assert!(r >= 1);
    let mut acc = BigRational::zero();
    for j in 1..=n {
        let jr = BigInt::from(j).pow(r);
        acc += BigRational::new(BigInt::one(), jr);
    }
    acc
}

static BERNOULLI: LazyLock<Mutex<Vec<BigRational>>> =
    LazyLock::new(|| Mutex::new(vec![BigRational::one()]));

/// Bernoulli numbers `B_0 ..= B_max` with the `B_1 = -1/2` convention.
///
/// Computed by the defining recurrence `sum_{j=0..m} C(m+1, j) B_j = 0`
/// and memoized globally; repeated calls only extend the shared table.
pub fn bernoulli_numbers(max: usize) -> Vec<BigRational> {
    let mut table = BERNOULLI.lock().unwrap();
    while table.len() <= max {
        let m = table.len();
        // accumulate sum_{j=0..m-1} C(m+1, j) B_j with an in-row
        // binomial update
        let mut c = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += BigRational::from(c.clone()) * b;
            c = c * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let next = -acc / BigRational::from(BigInt::from(m + 1));
        table.push(next);
    }
    table[..=max].to_vec()
}

/// Single Bernoulli number `B_k`.
pub fn bernoulli(k: usize) -> BigRational {
    bernoulli_numbers(k).pop().unwrap()
}

/// Bernoulli polynomial value `B_n(x) = sum_k C(n,k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    let numbers = bernoulli_numbers(n);
    // walk k = n, n-1, .., 0 so the power of x grows one step at a time
    let mut c = BigInt::one();
    let mut xpow = BigRational::one();
    let mut acc = BigRational::zero();
    for i in 0..=n {
        let k = n - i;
        acc += BigRational::from(c.clone()) * &numbers[k] * &xpow;
        if k > 0 {
            c = c * BigInt::from(k) / BigInt::from(n - k + 1);
            xpow *= x;
        }
    }
    acc
}

/// `x^e` for big rationals (`e >= 0`).
pub fn rat_pow(x: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^k` as a big integer.
pub fn sign(k: i64) -> BigInt {
    if k % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        x = q;
    }
}
