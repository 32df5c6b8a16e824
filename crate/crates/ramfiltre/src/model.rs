//! Domain types: primes, valuation classes, radical specifications, lattice
//! labels, tame factors, and the index shift `r(k)`, `s_i(k)`.

use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};

/// Exact nonnegative jump value.
pub type JumpValue = BigUint;

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const EXTRA_ROUNDS: usize = 24;
const PRIMALITY_SEED: u64 = 0x7261_6d66_696c_7472;

/// A prime number, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime {
    value: BigUint,
}

impl Prime {
    /// Builds a prime, rejecting composites, 0 and 1.
    pub fn new(value: impl Into<BigUint>) -> Result<Self> {
        let value = value.into();
        if !is_prime(&value) {
            return domain(format!("{value} is not prime"));
        }
        Ok(Prime { value })
    }

    /// The prime as a big integer.
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// The prime as a machine integer, when it fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// Whether this is the prime 2, which needs the extra user-asserted hypothesis.
    pub fn is_two(&self) -> bool {
        self.value == BigUint::from(2u32)
    }

    /// `p^e` as a big integer.
    pub fn pow(&self, e: u32) -> BigUint {
        num_traits::pow(self.value.clone(), e as usize)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Miller-Rabin test. The twelve prime bases make it deterministic below
/// 3.3 * 10^24, which covers every 64-bit input; larger inputs also get
/// rounds with bases drawn from a fixed-seed generator.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &q in &SMALL_PRIMES {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            return false;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                return false;
            }
        }
        true
    };
    if SMALL_PRIMES.iter().any(|&a| witness(&BigUint::from(a))) {
        return false;
    }
    if n.bits() > 64 {
        let mut rng = ChaCha8Rng::seed_from_u64(PRIMALITY_SEED);
        for _ in 0..EXTRA_ROUNDS {
            let a = rng.gen_biguint_range(&two, &n_minus_one);
            if witness(&a) {
                return false;
            }
        }
    }
    true
}

/// Whether `p` divides the valuation of the last radicand `a_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VClass {
    /// `p | v_F(a_n)`.
    Divisible,
    /// `p` does not divide `v_F(a_n)`.
    NonDivisible,
}

impl VClass {
    /// Short name used by the command line and reports.
    pub fn short_name(self) -> &'static str {
        match self {
            VClass::Divisible => "div",
            VClass::NonDivisible => "nondiv",
        }
    }

    /// Parses `div` / `nondiv` (and the long variant names).
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "div" | "divisible" => Ok(VClass::Divisible),
            "nondiv" | "nondivisible" => Ok(VClass::NonDivisible),
            other => domain(format!("unknown valuation class {other:?}")),
        }
    }
}

impl fmt::Display for VClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Prime-to-`p` part of the exponent: primes `q_j` with their root exponents `s_{i,j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TameFactor {
    /// Pairs `(q_j, [s_{1,j}, ..., s_{n_j,j}])`.
    pub primes: Vec<(Prime, Vec<u32>)>,
}

impl TameFactor {
    /// The trivial factor `D = 1`.
    pub fn trivial() -> Self {
        TameFactor::default()
    }

    /// Whether the factor is the empty product.
    pub fn is_trivial(&self) -> bool {
        self.primes.iter().all(|(_, e)| e.is_empty())
    }

    /// Checks distinctness, coprimality to `p`, and positivity of exponents.
    pub fn validate(&self, p: &Prime) -> Result<()> {
        for (i, (q, exps)) in self.primes.iter().enumerate() {
            if q == p {
                return domain(format!("tame prime {q} equals p"));
            }
            if self.primes[..i].iter().any(|(q2, _)| q2 == q) {
                return domain(format!("tame prime {q} listed twice"));
            }
            if exps.contains(&0) {
                return domain(format!("tame exponent for {q} must be positive"));
            }
        }
        Ok(())
    }

    /// Parses `q:e1:e2,...` entries separated by commas, e.g. `5:1:2,7:1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut primes = Vec::new();
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let mut parts = entry.split(':');
            let q: BigUint = parts
                .next()
                .unwrap_or_default()
                .parse()
                .map_err(|_| crate::Error::Domain(format!("bad tame prime in {entry:?}")))?;
            let exps = parts
                .map(|e| e.parse::<u32>().map_err(|_| crate::Error::Domain(format!("bad tame exponent in {entry:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if exps.is_empty() {
                return domain(format!("tame entry {entry:?} has no exponent"));
            }
            primes.push((Prime::new(q)?, exps));
        }
        Ok(TameFactor { primes })
    }
}

/// `D = prod_j prod_i q_j^{s_{i,j}}`.
pub fn tame_multiplier(t: &TameFactor) -> BigUint {
    t.primes.iter().flat_map(|(q, exps)| exps.iter().map(move |&e| q.pow(e))).product()
}

/// Parameters of `L = F(zeta_{p^r}, a_1^{1/p^{s_1}}, ..., a_n^{1/p^{s_n}})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalSpec {
    /// Residue characteristic.
    pub p: Prime,
    /// Cyclotomic level.
    pub r: u32,
    /// Radical exponents `s_1..s_n`.
    pub s: Vec<u32>,
    /// Valuation class of `a_n`.
    pub vclass: VClass,
    /// Prime-to-`p` part.
    pub tame: TameFactor,
    /// User assertion of the extra degree hypothesis required when `p = 2`.
    pub p2_asserted: bool,
}

impl RadicalSpec {
    /// A spec with trivial tame factor and no `p = 2` assertion.
    pub fn new(p: Prime, r: u32, s: Vec<u32>, vclass: VClass) -> Self {
        RadicalSpec { p, r, s, vclass, tame: TameFactor::trivial(), p2_asserted: false }
    }

    /// Number of radicals.
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// The top node of the subfield lattice.
    pub fn full_label(&self) -> FieldLabel {
        FieldLabel::new(self.r, self.s.clone())
    }

    /// Checks every invariant, reporting the first violated clause.
    pub fn validate(&self) -> Result<()> {
        validate(self)
    }
}

/// Checks the invariants of a [`RadicalSpec`].
pub fn validate(spec: &RadicalSpec) -> Result<()> {
    if spec.s.is_empty() {
        return domain("n must be at least 1");
    }
    if spec.r == 0 {
        return domain("r must be positive");
    }
    if spec.s.contains(&0) {
        return domain("radical exponents must be positive");
    }
    if spec.s.iter().any(|&x| x > spec.r) {
        return domain("r < max(s)");
    }
    let sorted_prefix = match spec.vclass {
        VClass::Divisible => &spec.s[..],
        VClass::NonDivisible => &spec.s[..spec.s.len() - 1],
    };
    if sorted_prefix.windows(2).any(|w| w[0] > w[1]) {
        return domain("s not sorted for vclass");
    }
    if spec.p.is_two() && !spec.p2_asserted {
        return domain("p=2 hypothesis not asserted");
    }
    spec.tame.validate(&spec.p)
}

/// A node `L_{r, s_1, ..., s_n}` of the subfield lattice. Zero entries mean
/// the radical is absent; the vector always keeps full length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldLabel {
    /// Cyclotomic exponent.
    pub r: u32,
    /// Radical exponents.
    pub s: Vec<u32>,
}

impl FieldLabel {
    /// Builds a label.
    pub fn new(r: u32, s: Vec<u32>) -> Self {
        FieldLabel { r, s }
    }

    /// The base field `L_{0,0,...,0} = F`.
    pub fn base(n: usize) -> Self {
        FieldLabel { r: 0, s: vec![0; n] }
    }

    /// Number of radical slots.
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `r + sum(s)`.
    pub fn weight(&self) -> u64 {
        self.r as u64 + self.s.iter().map(|&x| x as u64).sum::<u64>()
    }

    /// Componentwise order of the lattice.
    pub fn le(&self, other: &FieldLabel) -> bool {
        self.r <= other.r && self.s.len() == other.s.len() && self.s.iter().zip(&other.s).all(|(a, b)| a <= b)
    }

    /// `[L_label : F]`: `(p-1) p^{r-1+sum s}` when `r >= 1`, `p^{sum s}` when `r = 0`.
    pub fn degree(&self, p: &Prime) -> BigUint {
        let sum: u32 = self.s.iter().sum();
        if self.r == 0 {
            p.pow(sum)
        } else {
            (p.value() - 1u32) * p.pow(self.r - 1 + sum)
        }
    }

    /// The label with coordinate `k` lowered by one (`k = 1` lowers `r`).
    pub fn shift_index(&self, k: usize) -> Result<FieldLabel> {
        shift_index(self, k)
    }
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{{{}", self.r)?;
        for x in &self.s {
            write!(f, ",{x}")?;
        }
        f.write_str("}")
    }
}

/// `r(k) = r - delta_{1,k}`, `s_i(k) = s_i - delta_{i+1,k}`. Lowering `r`
/// from 1 is rejected: that step is the degree `p-1` tame step.
pub fn shift_index(label: &FieldLabel, k: usize) -> Result<FieldLabel> {
    let n = label.n();
    if k == 0 || k > n + 1 {
        return domain(format!("index k={k} outside 1..={}", n + 1));
    }
    let mut out = label.clone();
    if k == 1 {
        if label.r < 2 {
            return domain("cannot lower r below 1");
        }
        out.r -= 1;
    } else {
        if label.s[k - 2] == 0 {
            return domain(format!("s_{} is already 0", k - 1));
        }
        out.s[k - 2] -= 1;
    }
    Ok(out)
}
