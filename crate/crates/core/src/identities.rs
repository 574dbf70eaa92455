//! Exact range verification of the finite-sum identities backing the
//! congruence proofs. Every case is evaluated in big-rational
//! arithmetic; a failing case reports the lexicographically first
//! counterexample with both values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{binom, rat, sign, FactorialTable};
use crate::sequences::{apery_upto, franel_upto, FranelMethod};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    Strehl,
    ChuVandermondeEval,
    SigmaNeg4,
    SigmaHarmonic,
    SigmaRising,
    SigmaRatio,
    Gould437,
    Liu41,
    GzTransform,
    GzThm21,
    ProductForm,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::Strehl,
        IdentityId::ChuVandermondeEval,
        IdentityId::SigmaNeg4,
        IdentityId::SigmaHarmonic,
        IdentityId::SigmaRising,
        IdentityId::SigmaRatio,
        IdentityId::Gould437,
        IdentityId::Liu41,
        IdentityId::GzTransform,
        IdentityId::GzThm21,
        IdentityId::ProductForm,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            IdentityId::Strehl => "I1",
            IdentityId::ChuVandermondeEval => "I2",
            IdentityId::SigmaNeg4 => "I3",
            IdentityId::SigmaHarmonic => "I4",
            IdentityId::SigmaRising => "I5",
            IdentityId::SigmaRatio => "I6",
            IdentityId::Gould437 => "I7",
            IdentityId::Liu41 => "I8",
            IdentityId::GzTransform => "I9",
            IdentityId::GzThm21 => "I10",
            IdentityId::ProductForm => "I11",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::Strehl => "strehl",
            IdentityId::ChuVandermondeEval => "chu-vandermonde-eval",
            IdentityId::SigmaNeg4 => "sigma-neg4",
            IdentityId::SigmaHarmonic => "sigma-harmonic",
            IdentityId::SigmaRising => "sigma-rising",
            IdentityId::SigmaRatio => "sigma-ratio",
            IdentityId::Gould437 => "gould-437",
            IdentityId::Liu41 => "liu-41",
            IdentityId::GzTransform => "gz-transform",
            IdentityId::GzThm21 => "gz-thm21",
            IdentityId::ProductForm => "product-form",
        }
    }

    pub fn arity(&self) -> u32 {
        match self {
            IdentityId::SigmaRatio | IdentityId::Gould437 | IdentityId::ProductForm => 2,
            _ => 1,
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            IdentityId::Strehl => "both binomial-product forms of f_n equal the cube sum",
            IdentityId::ChuVandermondeEval => {
                "sum_{k=0..j} C(k+j,j) C(j,k) (-1)^{k+j} collapses to 1"
            }
            IdentityId::SigmaNeg4 => {
                "weighted (-4)^j double sum equals -2 times the (-3)^k double sum"
            }
            IdentityId::SigmaHarmonic => "sum_{j=1..n} (-1)^j C(n,j)/j = -H_n",
            IdentityId::SigmaRising => {
                "sum_{j=1..n} C(n+j-1,j)/j in closed form over central binomials"
            }
            IdentityId::SigmaRatio => {
                "sum_{j=1..n} C(n+k,j)/C(n+k-1,n-j) in closed form (two parameters)"
            }
            IdentityId::Gould437 => {
                "alternating tail sum_{j=a..n} (-1)^{j-a} C(n,j)/j equals sum C(j-1,a-1)/j"
            }
            IdentityId::Liu41 => {
                "sum_{j=k..2k} C(k,j-k) C(j,k) (-1)^j H_j^(2) = 3 sum_{j=1..k} 1/(j^2 C(2j,j))"
            }
            IdentityId::GzTransform => {
                "binomial transform of f_k equals the signed (2k+1) A_k partial sum"
            }
            IdentityId::GzThm21 => {
                "(1/m) sum (-1)^k (2k+1) A_k as a double binomial sum (odd m; \
                 divisibility by m for every m)"
            }
            IdentityId::ProductForm => "C(m-1,t) C(m+t,t) = prod_{i=1..t} (m^2-i^2)/i^2",
        }
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for IdentityId {
    type Err = IdentityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.code().eq_ignore_ascii_case(&lower) || id.name() == lower)
            .ok_or_else(|| IdentityError::UnknownIdentity(s.to_string()))
    }
}

/// Parameter bounds for a run: `n_max` for single-parameter identities
/// (and the `m` range of I10/I11), `budget` for the two-parameter ones
/// (`n + 2k <= budget` for I6, `a <= n <= budget` for I7).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityRanges {
    pub n_max: i64,
    pub budget: i64,
}

impl Default for IdentityRanges {
    fn default() -> Self {
        IdentityRanges {
            n_max: 200,
            budget: 120,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityFailure {
    pub params: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub range: String,
    pub cases: u64,
    pub pass: bool,
    pub first_failure: Option<IdentityFailure>,
}

/// Streaming comparator: cases must be fed in lexicographic parameter
/// order, so the first recorded failure is the lexicographically first
/// counterexample.
struct Checker {
    cases: u64,
    first_failure: Option<IdentityFailure>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            cases: 0,
            first_failure: None,
        }
    }

    /// Returns false once a failure has been recorded.
    fn check(&mut self, params: &[i64], lhs: &BigRational, rhs: &BigRational) -> bool {
        self.cases += 1;
        if lhs != rhs {
            self.first_failure = Some(IdentityFailure {
                params: params.to_vec(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
            return false;
        }
        true
    }

    fn into_report(self, id: IdentityId, range: String) -> IdentityReport {
        IdentityReport {
            id,
            range,
            cases: self.cases,
            pass: self.first_failure.is_none(),
            first_failure: self.first_failure,
        }
    }
}

fn big(x: i64) -> BigRational {
    BigRational::from(BigInt::from(x))
}

fn validate(ranges: &IdentityRanges) -> Result<(), IdentityError> {
    if ranges.n_max < 1 {
        return Err(IdentityError::InvalidRange(format!(
            "n_max must be >= 1, got {}",
            ranges.n_max
        )));
    }
    if ranges.budget < 3 {
        return Err(IdentityError::InvalidRange(format!(
            "budget must be >= 3, got {}",
            ranges.budget
        )));
    }
    Ok(())
}

/// Checks one identity over the given bounds.
pub fn check_identity(
    id: IdentityId,
    ranges: &IdentityRanges,
) -> Result<IdentityReport, IdentityError> {
    validate(ranges)?;
    let n_max = ranges.n_max;
    let budget = ranges.budget;
    Ok(match id {
        IdentityId::Strehl => strehl(n_max),
        IdentityId::ChuVandermondeEval => chu_vandermonde_eval(n_max),
        IdentityId::SigmaNeg4 => sigma_neg4(n_max),
        IdentityId::SigmaHarmonic => sigma_harmonic(n_max),
        IdentityId::SigmaRising => sigma_rising_impl(n_max, &rat(3, 2)),
        IdentityId::SigmaRatio => sigma_ratio(budget),
        IdentityId::Gould437 => gould_437(budget),
        IdentityId::Liu41 => liu_41(n_max),
        IdentityId::GzTransform => gz_transform(n_max),
        IdentityId::GzThm21 => gz_thm21(n_max),
        IdentityId::ProductForm => product_form(n_max),
    })
}

/// Runs the whole catalog; reports come back in catalog order.
pub fn check_all_identities(n_max: i64, budget: i64) -> Result<Vec<IdentityReport>, IdentityError> {
    let ranges = IdentityRanges { n_max, budget };
    IdentityId::ALL
        .into_iter()
        .map(|id| check_identity(id, &ranges))
        .collect()
}

fn strehl(n_max: i64) -> IdentityReport {
    let cube = franel_upto(n_max as u64, FranelMethod::CubeSum);
    let a = franel_upto(n_max as u64, FranelMethod::StrehlA);
    let b = franel_upto(n_max as u64, FranelMethod::StrehlB);
    let mut c = Checker::new();
    for n in 0..=n_max {
        let i = n as usize;
        let cube_r = BigRational::from(cube[i].clone());
        if !c.check(&[n], &BigRational::from(a[i].clone()), &cube_r) {
            break;
        }
        if !c.check(&[n], &BigRational::from(b[i].clone()), &cube_r) {
            break;
        }
    }
    c.into_report(IdentityId::Strehl, format!("n = 0..={n_max}"))
}

fn chu_vandermonde_eval(n_max: i64) -> IdentityReport {
    let fact = FactorialTable::new(2 * n_max as usize + 1);
    let mut c = Checker::new();
    for j in 0..=n_max {
        let mut acc = BigInt::zero();
        for k in 0..=j {
            acc += fact.binom(k + j, j) * fact.binom(j, k) * sign(k + j);
        }
        if !c.check(&[j], &BigRational::from(acc), &BigRational::one()) {
            break;
        }
    }
    c.into_report(IdentityId::ChuVandermondeEval, format!("j = 0..={n_max}"))
}

fn sigma_neg4(n_max: i64) -> IdentityReport {
    let fact = FactorialTable::new(2 * n_max as usize + 1);
    // prefix sums: p1[j] = sum_{k<=j} 1/(k C(2k,k))
    let mut p1 = vec![BigRational::zero()];
    for j in 1..=n_max {
        let term = BigRational::new(BigInt::one(), BigInt::from(j) * fact.binom(2 * j, j));
        p1.push(p1[j as usize - 1].clone() + term);
    }
    let mut c = Checker::new();
    // rhs accumulates across n; inner p2 ditto
    let mut rhs = BigRational::zero();
    let mut p2 = BigRational::zero();
    let mut pow_neg3 = BigRational::one();
    for n in 1..=n_max {
        pow_neg3 *= big(-3);
        p2 += BigRational::new(BigInt::one(), BigInt::from(2 * n - 1)) / &pow_neg3;
        rhs -= big(2) * &pow_neg3 / big(n) * &p2;
        let mut lhs = BigRational::zero();
        let mut pw = BigRational::one();
        for j in 1..=n {
            pw *= big(-4);
            lhs += BigRational::from(fact.binom(n, j)) * &pw / big(j) * &p1[j as usize];
        }
        if !c.check(&[n], &lhs, &rhs) {
            break;
        }
    }
    c.into_report(IdentityId::SigmaNeg4, format!("n = 1..={n_max}"))
}

fn sigma_harmonic(n_max: i64) -> IdentityReport {
    let fact = FactorialTable::new(n_max as usize + 1);
    let mut c = Checker::new();
    let mut h = BigRational::zero();
    for n in 0..=n_max {
        if n > 0 {
            h += BigRational::new(BigInt::one(), BigInt::from(n));
        }
        let mut lhs = BigRational::zero();
        for j in 1..=n {
            lhs += BigRational::new(fact.binom(n, j) * sign(j), BigInt::from(j));
        }
        if !c.check(&[n], &lhs, &(-h.clone())) {
            break;
        }
    }
    c.into_report(IdentityId::SigmaHarmonic, format!("n = 0..={n_max}"))
}

/// I5 with the central-binomial constant as a parameter, so the
/// mutation control can perturb it; the catalog value is 3/2.
fn sigma_rising_impl(n_max: i64, constant: &BigRational) -> IdentityReport {
    let fact = FactorialTable::new(2 * n_max as usize + 1);
    let mut c = Checker::new();
    let mut h = BigRational::zero();
    let mut tail = BigRational::zero(); // sum_{j=2..n} C(2j,j)/j
    for n in 1..=n_max {
        h += BigRational::new(BigInt::one(), BigInt::from(n));
        if n >= 2 {
            tail += BigRational::new(fact.binom(2 * n, n), BigInt::from(n));
        }
        let mut lhs = BigRational::zero();
        for j in 1..=n {
            lhs += BigRational::new(fact.binom(n + j - 1, j), BigInt::from(j));
        }
        let rhs = rat(1 + 3 * n, n) - BigRational::new(fact.binom(2 * n, n), BigInt::from(n))
            - h.clone()
            + constant * &tail;
        if !c.check(&[n], &lhs, &rhs) {
            break;
        }
    }
    c.into_report(IdentityId::SigmaRising, format!("n = 1..={n_max}"))
}

fn sigma_ratio(budget: i64) -> IdentityReport {
    let fact = FactorialTable::new(2 * budget as usize + 2);
    let mut c = Checker::new();
    'outer: for n in 1..=budget - 2 {
        for k in 1..=(budget - n) / 2 {
            let nk = n + k;
            let mut lhs = BigRational::zero();
            for j in 1..=n {
                lhs += BigRational::new(fact.binom(nk, j), fact.binom(nk - 1, n - j));
            }
            let mut inner = BigRational::zero();
            for j in 2..=n {
                inner += BigRational::new(fact.binom(k + j - 1, k), BigInt::from(k + j));
            }
            let corner = fact.binom(nk - 1, n - 1);
            let rhs = -rat(nk, k + 1) - BigRational::new(BigInt::from(n), BigInt::from(k) * &corner)
                + BigRational::new(BigInt::from(nk * nk) * &corner, BigInt::from(n * k))
                - big(nk) * inner;
            if !c.check(&[n, k], &lhs, &rhs) {
                break 'outer;
            }
        }
    }
    c.into_report(
        IdentityId::SigmaRatio,
        format!("n, k >= 1 with n + 2k <= {budget}"),
    )
}

fn gould_437(budget: i64) -> IdentityReport {
    let fact = FactorialTable::new(budget as usize + 1);
    let mut c = Checker::new();
    'outer: for a in 1..=budget {
        // rhs extends by one term as n grows
        let mut rhs = BigRational::zero();
        for n in a..=budget {
            rhs += BigRational::new(fact.binom(n - 1, a - 1), BigInt::from(n));
            let mut lhs = BigRational::zero();
            for j in a..=n {
                lhs += BigRational::new(fact.binom(n, j) * sign(j - a), BigInt::from(j));
            }
            if !c.check(&[a, n], &lhs, &rhs) {
                break 'outer;
            }
        }
    }
    c.into_report(IdentityId::Gould437, format!("1 <= a <= n <= {budget}"))
}

fn liu_41(n_max: i64) -> IdentityReport {
    let fact = FactorialTable::new(2 * n_max as usize + 1);
    let mut c = Checker::new();
    // h2[j] = H_j^(2) up to 2k
    let mut h2 = vec![BigRational::zero()];
    for j in 1..=2 * n_max {
        let t = BigRational::new(BigInt::one(), BigInt::from(j * j));
        h2.push(h2[j as usize - 1].clone() + t);
    }
    let mut rhs = BigRational::zero();
    for k in 0..=n_max {
        if k >= 1 {
            rhs += BigRational::new(BigInt::from(3), BigInt::from(k * k) * fact.binom(2 * k, k));
        }
        let mut lhs = BigRational::zero();
        for j in k..=2 * k {
            lhs += BigRational::from(fact.binom(k, j - k) * fact.binom(j, k) * sign(j))
                * &h2[j as usize];
        }
        if !c.check(&[k], &lhs, &rhs) {
            break;
        }
    }
    c.into_report(IdentityId::Liu41, format!("k = 0..={n_max}"))
}

fn gz_transform(n_max: i64) -> IdentityReport {
    let fact = FactorialTable::new(2 * n_max as usize + 2);
    let f = franel_upto(n_max as u64, FranelMethod::CubeSum);
    let a = apery_upto(n_max as u64);
    let mut c = Checker::new();
    let mut s = BigInt::zero(); // sum (-1)^k (2k+1) A_k
    for n in 0..=n_max {
        s += sign(n) * BigInt::from(2 * n + 1) * &a[n as usize];
        let mut lhs = BigRational::zero();
        for k in 0..=n {
            lhs += BigRational::from(
                fact.binom(n, k) * fact.binom(n + 1 + k, k) * &f[k as usize],
            );
        }
        let rhs = BigRational::new(sign(n) * &s, BigInt::from(n + 1));
        if !c.check(&[n], &lhs, &rhs) {
            break;
        }
    }
    c.into_report(IdentityId::GzTransform, format!("n = 0..={n_max}"))
}

fn gz_thm21(n_max: i64) -> IdentityReport {
    let fact = FactorialTable::new(3 * n_max as usize + 1);
    let a = apery_upto(n_max as u64 - 1);
    let mut c = Checker::new();
    let mut s = BigInt::zero(); // sum_{k<m} (-1)^k (2k+1) A_k
    for m in 1..=n_max {
        s += sign(m - 1) * BigInt::from(2 * m - 1) * &a[m as usize - 1];
        // the division by m must be exact for every m
        let (q, r) = s.div_rem(&BigInt::from(m));
        if !c.check(
            &[m],
            &BigRational::from(r.clone()),
            &BigRational::zero(),
        ) {
            break;
        }
        // the displayed equality needs the alternating-transform parity:
        // it holds for odd m and flips sign for even m
        if m % 2 == 0 {
            continue;
        }
        let mut rhs = BigInt::zero();
        for k in 0..m {
            let mut inner = BigInt::zero();
            // C(m-1, k+j) vanishes past j = m-1-k
            for j in 0..=k.min(m - 1 - k) {
                inner += fact.binom(k, j)
                    * fact.binom(k + j, j)
                    * fact.binom(m - 1, k + j)
                    * fact.binom(m + k + j, k + j);
            }
            rhs += fact.binom(2 * k, k) * inner;
        }
        if !c.check(&[m], &BigRational::from(q.clone()), &BigRational::from(rhs)) {
            break;
        }
    }
    c.into_report(
        IdentityId::GzThm21,
        format!("m = 1..={n_max} (equality over odd m, divisibility for all m)"),
    )
}

fn product_form(n_max: i64) -> IdentityReport {
    let fact = FactorialTable::new(2 * n_max as usize + 1);
    let mut c = Checker::new();
    'outer: for m in 1..=n_max {
        let mut prod = BigRational::one();
        for t in 0..m {
            if t > 0 {
                prod *= rat(m * m - t * t, t * t);
            }
            let lhs = BigRational::from(fact.binom(m - 1, t) * fact.binom(m + t, t));
            if !c.check(&[m, t], &lhs, &prod) {
                break 'outer;
            }
        }
    }
    c.into_report(IdentityId::ProductForm, format!("0 <= t < m <= {n_max}"))
}

/// Mutation controls: deliberately perturbed recipes that must fail,
/// demonstrating the checker cannot pass vacuously.
pub mod controls {
    use super::*;

    /// I5 with its central-binomial constant replaced (catalog: 3/2).
    pub fn sigma_rising_with_constant(n_max: i64, constant: &BigRational) -> IdentityReport {
        sigma_rising_impl(n_max, constant)
    }
}
