//! Generators shared by both evaluation paths: Apéry numbers, Franel
//! numbers (four independent routes), central binomial coefficients as
//! `(unit, valuation)` pairs, and `B_{p-2}(1/3) mod p`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{bernoulli_poly, binom, rat, FactorialTable};
use crate::modular::{
    self, divide_by_p_exact, reduce_rat, ModError, PAdicUnit, PrimePowerModulus, Residue,
};

/// `A_n = sum_k C(n,k)^2 C(n+k,k)^2`.
pub fn apery(n: u64) -> BigInt {
    let n = n as i64;
    let mut acc = BigInt::zero();
    for k in 0..=n {
        let b1 = binom(n, k);
        let b2 = binom(n + k, k);
        acc += &b1 * &b1 * &b2 * &b2;
    }
    acc
}

/// `A_0 ..= A_upto` with factorial-table binomials.
pub fn apery_upto(upto: u64) -> Vec<BigInt> {
    let fact = FactorialTable::new(2 * upto as usize + 1);
    (0..=upto as i64)
        .map(|n| {
            let mut acc = BigInt::zero();
            for k in 0..=n {
                let b1 = fact.binom(n, k);
                let b2 = fact.binom(n + k, k);
                acc += &b1 * &b1 * &b2 * &b2;
            }
            acc
        })
        .collect()
}

/// The four independent routes to the Franel numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FranelMethod {
    /// `f_n = sum_k C(n,k)^3`
    CubeSum,
    /// `f_n = sum_k C(n,k) C(k,n-k) C(2k,k)`
    StrehlA,
    /// `f_n = sum_k C(n,k)^2 C(2k,n)`
    StrehlB,
    /// `(n+1)^2 f_{n+1} = (7n^2+7n+2) f_n + 8 n^2 f_{n-1}`
    Recurrence,
}

impl FranelMethod {
    pub const ALL: [FranelMethod; 4] = [
        FranelMethod::CubeSum,
        FranelMethod::StrehlA,
        FranelMethod::StrehlB,
        FranelMethod::Recurrence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FranelMethod::CubeSum => "cube-sum",
            FranelMethod::StrehlA => "strehl-a",
            FranelMethod::StrehlB => "strehl-b",
            FranelMethod::Recurrence => "recurrence",
        }
    }
}

impl std::str::FromStr for FranelMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FranelMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown franel method `{s}`"))
    }
}

/// `f_0 ..= f_upto` by the chosen route.
pub fn franel_upto(upto: u64, method: FranelMethod) -> Vec<BigInt> {
    if method == FranelMethod::Recurrence {
        let mut vals = vec![BigInt::one()];
        if upto >= 1 {
            vals.push(BigInt::from(2));
        }
        for next in 2..=upto as i64 {
            let n = next - 1;
            let rhs = BigInt::from(7 * n * n + 7 * n + 2) * &vals[n as usize]
                + BigInt::from(8 * n * n) * &vals[n as usize - 1];
            let (q, r) = num_integer::Integer::div_rem(&rhs, &BigInt::from(next * next));
            assert!(r.is_zero(), "franel recurrence must divide exactly");
            vals.push(q);
        }
        return vals;
    }
    let fact = FactorialTable::new(2 * upto as usize + 1);
    (0..=upto as i64)
        .map(|n| {
            let mut acc = BigInt::zero();
            for k in 0..=n {
                acc += match method {
                    FranelMethod::CubeSum => {
                        let b = fact.binom(n, k);
                        &b * &b * &b
                    }
                    FranelMethod::StrehlA => {
                        fact.binom(n, k) * fact.binom(k, n - k) * fact.binom(2 * k, k)
                    }
                    FranelMethod::StrehlB => {
                        let b = fact.binom(n, k);
                        &b * &b * fact.binom(2 * k, n)
                    }
                    FranelMethod::Recurrence => unreachable!(),
                };
            }
            acc
        })
        .collect()
}

/// Single Franel number by the chosen route.
pub fn franel(n: u64, method: FranelMethod) -> BigInt {
    franel_upto(n, method).pop().unwrap()
}

/// Named cache of exact sequence values indexed from 0.
pub struct SequenceCache {
    name: String,
    values: Vec<BigInt>,
}

impl SequenceCache {
    pub fn apery(upto: u64) -> SequenceCache {
        SequenceCache {
            name: "apery".into(),
            values: apery_upto(upto),
        }
    }

    pub fn franel(upto: u64, method: FranelMethod) -> SequenceCache {
        SequenceCache {
            name: format!("franel/{}", method.name()),
            values: franel_upto(upto, method),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn get(&self, n: u64) -> &BigInt {
        &self.values[n as usize]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// Central binomials `C(2k,k)` for `k = 0..=upto` as `(unit, val)`
/// pairs, by the multiplicative recurrence
/// `C(2k,k) = C(2k-2,k-1) * 2(2k-1) / k`.
///
/// Requires `upto <= p-1`: in that range every step factor stays below
/// `2p`, so its p-valuation is read off the exact integer. The
/// valuation is 0 up to `(p-1)/2` and 1 from `(p+1)/2` on (the single
/// base-p carry in `k + k`).
pub fn central_binomials(m: PrimePowerModulus, upto: u64) -> Vec<PAdicUnit> {
    assert!(upto < m.prime());
    let mut out = Vec::with_capacity(upto as usize + 1);
    let mut cur = PAdicUnit::one(m);
    out.push(cur);
    for k in 1..=upto {
        cur = cur.mul_int(2 * (2 * k - 1)).div_int(k);
        out.push(cur);
    }
    out
}

/// `C(2k,k)` as a `(unit, valuation)` pair for `0 <= k <= p-1`.
pub fn central_binom_padic(k: u64, m: PrimePowerModulus) -> PAdicUnit {
    central_binomials(m, k).pop().unwrap()
}

/// `B_{p-2}(1/3) mod p`, the correction term shared by every main
/// congruence right-hand side.
///
/// Uses the power-sum congruence
/// `sum_{j=0}^{p-1} (j + 1/3)^{p-2} == p * B_{p-2}(1/3) (mod p^2)`,
/// which follows from telescoping `B_{p-1}(x+1) - B_{p-1}(x)` over one
/// full period: the non-p-integral constant `B_{p-1}` cancels in the
/// difference, the linear term contributes `(p-1) p B_{p-2}(1/3)`, and
/// everything further carries `p^2`. Cost is O(p log p) against O(p^2)
/// for the defining sum.
pub fn bernoulli_poly_mod(p: u64) -> Result<Residue, ModError> {
    let m2 = PrimePowerModulus::new(p, 2)?;
    let mm = m2.value();
    let mut s = 0u64;
    let mut x = 1u64; // 3j + 1 stays far below p^2
    for _ in 0..p {
        s = modular::addmod(s, modular::powmod(x, p - 2, mm), mm);
        x += 3;
    }
    // strip the 3^{-(p-2)} scale from (j + 1/3)^{p-2}
    let scale = m2.residue(modular::powmod(3, p - 2, mm)).inv()?;
    divide_by_p_exact(m2.residue(s) * scale)
}

/// Same value by the defining sum
/// `sum_{k=0}^{p-2} C(p-2,k) B_k (1/3)^{p-2-k}` with Bernoulli numbers
/// reduced mod p term by term.
///
/// All `B_k` with `k <= p-2` are p-integral (von Staudt-Clausen needs
/// `(q-1) | k` for a prime `q` to divide the denominator, impossible
/// for `q = p`), and powers of 3 are invertible for `p > 3`, so every
/// term reduces. O(p^2); kept as the cross-check route for the fast
/// path above.
pub fn bernoulli_poly_mod_defining_sum(p: u64) -> Result<Residue, ModError> {
    let m1 = PrimePowerModulus::new(p, 1)?;
    let mm = m1.value();
    let inv = modular::batch_inverses(m1, p - 1);
    // B_0..B_{p-2} mod p by the defining recurrence
    let n = (p - 2) as usize;
    let mut b = vec![0u64; n + 1];
    b[0] = 1;
    for m in 1..=n {
        let mut c = 1u64; // C(m+1, j)
        let mut acc = 0u64;
        for (j, bj) in b.iter().enumerate().take(m) {
            acc = modular::addmod(acc, modular::mulmod(c, *bj, mm), mm);
            c = modular::mulmod(
                modular::mulmod(c, (m + 1 - j) as u64 % mm, mm),
                inv[j + 1],
                mm,
            );
        }
        b[m] = modular::mulmod(modular::submod(0, acc, mm), inv[m + 1], mm);
    }
    let inv3 = inv[3];
    let mut c = 1u64; // C(p-2, k)
    let mut pw = modular::powmod(inv3, p - 2, mm); // (1/3)^{p-2-k}
    let mut acc = 0u64;
    for (k, bk) in b.iter().enumerate() {
        acc = modular::addmod(acc, modular::mulmod(modular::mulmod(c, *bk, mm), pw, mm), mm);
        if k < n {
            c = modular::mulmod(modular::mulmod(c, (n - k) as u64, mm), inv[k + 1], mm);
            pw = modular::mulmod(pw, 3, mm);
        }
    }
    Ok(m1.residue(acc))
}

/// Exact-oracle route: evaluate `B_{p-2}(1/3)` as a rational and reduce.
pub fn bernoulli_poly_mod_oracle(p: u64) -> Result<Residue, ModError> {
    let m1 = PrimePowerModulus::new(p, 1)?;
    let value = bernoulli_poly((p - 2) as usize, &rat(1, 3));
    reduce_rat(&value, m1)
}
