//! Path A: closed forms for `t_{n,k}` built from the `tau` values and the
//! uniform jumps `t_{n,2}(r, s, ..., s)` (Divisible) and
//! `t_{n,n+1}(r, s, ..., s)` (NonDivisible).
//!
//! Every closed form has a validity window in `r`. Outside it the functions
//! return a domain error rather than extrapolating.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{exact_div, pow, rational_to_jump, rpow, signed};
use crate::base::{self, N1Query};
use crate::error::{domain, Result};
use crate::model::{FieldLabel, JumpValue, Prime, VClass};
use crate::mutation::{Constants, Mutation};

use super::JumpQuery;

/// Reading of the inner exponent of the radical-direction double sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExponentVariant {
    /// Inner weight `p^{s_{m+1}(k) - l}`, the one obtained by unrolling the one-step recurrence.
    #[default]
    Unrolled,
    /// Inner weight `p^{s_{m+1}(k) - 1 - l}` as typeset.
    Typeset,
}

/// Arguments of `tau_n(l) = t_{n,2}(r, l, ..., l, min(l, s_last))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauQuery {
    /// Residue characteristic.
    pub p: Prime,
    /// Class of the last radical.
    pub vclass: VClass,
    /// Cyclotomic exponent.
    pub r: u32,
    /// Number of radicals.
    pub n: usize,
    /// Common exponent of the first `n - 1` radicals.
    pub l: u32,
    /// Exponent bound of the last radical.
    pub s_last: u32,
}

/// A canonicalized query: zeros dropped, radicals sorted, `k` remapped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    /// Cyclotomic exponent.
    pub r: u32,
    /// Sorted positive exponents.
    pub s: Vec<u32>,
    /// Class of the last radical (Divisible when the original last radical is absent).
    pub vclass: VClass,
    /// Direction in the canonical numbering.
    pub k: usize,
}

impl Canonical {
    /// Drops zero radicals and sorts the radicals the ordering hypotheses allow to move.
    pub fn from_query(vclass: VClass, label: &FieldLabel, k: usize) -> Result<Canonical> {
        let n = label.n();
        if k == 0 || k > n + 1 {
            return domain(format!("index k={k} outside 1..={}", n + 1));
        }
        if k >= 2 && label.s[k - 2] == 0 {
            return domain(format!("s_{} must be >= 1 for k={k}", k - 1));
        }
        if label.r == 0 || (k == 1 && label.r < 2) {
            return domain("closed forms need r >= 1, and r >= 2 when k = 1");
        }
        let mut entries: Vec<(u32, bool)> = label.s.iter().enumerate().map(|(i, &s)| (s, k == i + 2)).collect();
        let last_nondiv = vclass == VClass::NonDivisible && n > 0 && label.s[n - 1] > 0;
        let tail = if last_nondiv { entries.pop() } else { None };
        entries.retain(|&(s, _)| s > 0);
        entries.sort_by_key(|&(s, is_target)| (s, !is_target));
        entries.extend(tail);
        let k = entries.iter().position(|&(_, t)| t).map_or(1, |i| i + 2);
        Ok(Canonical {
            r: label.r,
            s: entries.into_iter().map(|(s, _)| s).collect(),
            vclass: if last_nondiv { VClass::NonDivisible } else { VClass::Divisible },
            k,
        })
    }

    /// Number of radicals.
    pub fn n(&self) -> usize {
        self.s.len()
    }
}

/// Closed-form evaluator for one prime.
#[derive(Clone, Debug)]
pub struct ClosedForms {
    p: Prime,
    pb: BigInt,
    consts: Constants,
    variant: ExponentVariant,
}

impl ClosedForms {
    /// Exact constants and the default exponent reading.
    pub fn new(p: Prime) -> Self {
        ClosedForms::with(p, Constants::EXACT, ExponentVariant::default())
    }

    /// Explicit constants and exponent reading.
    pub fn with(p: Prime, consts: Constants, variant: ExponentVariant) -> Self {
        let pb = signed(p.value());
        ClosedForms { p, pb, consts, variant }
    }

    /// The prime.
    pub fn prime(&self) -> &Prime {
        &self.p
    }

    fn one_minus_p(&self, site: Mutation) -> BigInt {
        self.consts.int(site, 1) - &self.pb
    }

    fn rp(&self, e: i64) -> BigRational {
        rpow(&self.pb, e)
    }

    /// `t_{n,2}(r, s, ..., s)` for Divisible `a_n`:
    /// `1 + 2(p-1)p^n (p^{(n+1)(s-1)} - 1) / (p^{n+1} - 1)`, valid for `r >= s >= 1`.
    pub fn uniform_t2(&self, n: usize, s: u32, r: u32) -> Result<JumpValue> {
        if n == 0 || s == 0 || r < s {
            return domain(format!("uniform_t2 needs n >= 1 and r >= s >= 1 (n={n}, s={s}, r={r})"));
        }
        let n = n as i64;
        let p = &self.pb;
        let den = pow(p, n + 1, "uniform_t2")? - 1;
        let num = self.consts.int(Mutation::U2Coeff, 2)
            * (p - 1)
            * pow(p, n, "uniform_t2")?
            * (pow(p, (n + 1) * (s as i64 - 1), "uniform_t2")? - 1);
        let v = self.consts.int(Mutation::U2Lead, 1) + exact_div(&num, &den, "uniform_t2")?;
        crate::arith::to_jump(v, "uniform_t2")
    }

    /// `t_{n,n+1}(r, s, ..., s)` for NonDivisible `a_n`:
    /// `1 + 2p^{n-1}(p-1)(p^{(n+1)s} - 1) / (p^{n+1} - 1)`, valid for `r >= s + 1`.
    pub fn uniform_tnn1(&self, n: usize, s: u32, r: u32) -> Result<JumpValue> {
        if n == 0 || r < s + 1 {
            return domain(format!("uniform_tnn1 needs n >= 1 and r >= s + 1 (n={n}, s={s}, r={r})"));
        }
        if s == 0 {
            return Ok(JumpValue::one());
        }
        let n = n as i64;
        let p = &self.pb;
        let den = pow(p, n + 1, "uniform_tnn1")? - 1;
        let num = 2
            * pow(p, n + self.consts.small(Mutation::UnnExp, -1), "uniform_tnn1")?
            * (p - 1)
            * (pow(p, (n + 1) * s as i64, "uniform_tnn1")? - 1);
        let v = BigInt::one() + exact_div(&num, &den, "uniform_tnn1")?;
        crate::arith::to_jump(v, "uniform_tnn1")
    }

    fn t1(&self, a: u32, b: u32, k: usize, vclass: VClass) -> Result<BigInt> {
        let q = N1Query { p: self.p.clone(), a, b, k, vclass };
        Ok(signed(&base::t1_with(&self.consts, &q)?.value))
    }

    /// `tau_n(l)` with the last radical clamped to `min(l, s_last)`.
    pub fn tau(&self, vclass: VClass, n: usize, l: u32, s_last: u32, r: u32) -> Result<BigInt> {
        if n == 0 || l == 0 || s_last == 0 {
            return domain("tau needs n, l, s_last >= 1");
        }
        if n == 1 {
            return self.t1(r, l.min(s_last), 2, vclass);
        }
        match vclass {
            VClass::Divisible => {
                if l > s_last {
                    return domain("Divisible tau with an active clamp is outside the closed forms");
                }
                Ok(signed(&self.uniform_t2(n, l, r)?))
            }
            VClass::NonDivisible => {
                if s_last >= l {
                    if l == 1 {
                        return Ok(BigInt::one());
                    }
                    return Ok(signed(&self.uniform_tnn1(n, l - 1, r)?));
                }
                let sn = s_last as i64;
                let mut sum = BigInt::zero();
                for j in 1..=s_last {
                    sum += pow(&self.pb, sn - j as i64, "tau")? * signed(&self.uniform_tnn1(n, j, r)?);
                }
                Ok(pow(&self.pb, sn, "tau")? * signed(&self.uniform_t2(n - 1, l, r)?)
                    + self.one_minus_p(Mutation::TauNdCoeff) * sum)
            }
        }
    }

    /// Evaluates a [`TauQuery`].
    pub fn tau_query(&self, q: &TauQuery) -> Result<JumpValue> {
        crate::arith::to_jump(self.tau(q.vclass, q.n, q.l, q.s_last, q.r)?, "tau")
    }

    /// Dispatches on `k`: the radical-direction double sum for `k >= 2`, the
    /// cyclotomic-direction sum for `k = 1`.
    pub fn jump(&self, q: &JumpQuery) -> Result<JumpValue> {
        if q.k == 1 {
            self.t_n1(q)
        } else {
            self.t_nk_closed(q)
        }
    }

    /// `t_{n,k}` for `k >= 2` from the double sum over `tau` values.
    pub fn t_nk_closed(&self, q: &JumpQuery) -> Result<JumpValue> {
        let c = Canonical::from_query(q.vclass, &q.label, q.k)?;
        if c.k < 2 {
            return domain("t_nk_closed needs k >= 2");
        }
        let n = c.n();
        let k = c.k;
        let bound = c.s[k - 2];
        // sk[j] = min(s_j, s_{k-1}) for j = 1..n, with sk[0] = 0.
        let mut sk = vec![0u32];
        sk.extend(c.s.iter().map(|&x| x.min(bound)));
        let s_last = sk[n];
        let tau = |m: usize, l: u32| self.tau(c.vclass, m, l, s_last, c.r);
        let lead_exp: i64 = sk[1..=k - 2].iter().map(|&x| x as i64).sum();
        let mut total = BigRational::from_integer(tau(n + 2 - k, sk[k - 1])?) * self.rp(lead_exp);
        let shift = match self.variant {
            ExponentVariant::Unrolled => 0,
            ExponentVariant::Typeset => 1,
        };
        let mut sum = BigRational::zero();
        let mut prefix: i64 = 0;
        for m in 0..k.saturating_sub(2) {
            prefix += sk[m] as i64;
            let top = sk[m + 1];
            let mut inner = BigRational::zero();
            for l in 1..=top {
                inner += self.rp(top as i64 - shift - l as i64) * BigRational::from_integer(tau(n - m, l)?);
            }
            sum += self.rp(prefix) * inner;
        }
        total += BigRational::from_integer(self.one_minus_p(Mutation::RadSumCoeff)) * sum;
        rational_to_jump(total, "t_nk_closed")
    }

    /// `t_{n,1}` from the cyclotomic-direction sum at `j = n`. Window:
    /// `r >= s_n + 1` (Divisible) or `r >= max(s_{n-1}, s_n) + 2` (NonDivisible).
    pub fn t_n1(&self, q: &JumpQuery) -> Result<JumpValue> {
        if q.k != 1 {
            return domain("t_n1 needs k = 1");
        }
        let c = Canonical::from_query(q.vclass, &q.label, 1)?;
        self.t_n1_canonical(&c)
    }

    fn t_n1_canonical(&self, c: &Canonical) -> Result<JumpValue> {
        let n = c.n();
        if n == 0 {
            return base::cyclotomic_jump_with(&self.consts, &self.p, c.r);
        }
        self.check_cyclotomic_window(c)?;
        let s = &c.s;
        let s_last = s[n - 1];
        let lead_exp: u32 = s[..n - 1].iter().sum();
        let mut total = pow(&self.pb, lead_exp as i64, "t_n1")? * self.t1(c.r, s_last, 1, c.vclass)?;
        let mut sum = BigInt::zero();
        let mut prefix: i64 = 0;
        for m in 0..n - 1 {
            if m > 0 {
                prefix += s[m - 1] as i64;
            }
            let top = s[m];
            let mut inner = BigInt::zero();
            for l in 1..=top {
                inner += pow(&self.pb, (top - l) as i64, "t_n1")? * self.tau(c.vclass, n - m, l, s_last, c.r)?;
            }
            sum += pow(&self.pb, prefix, "t_n1")? * inner;
        }
        total += self.one_minus_p(Mutation::CycSumCoeff) * sum;
        crate::arith::to_jump(total, "t_n1")
    }

    fn check_cyclotomic_window(&self, c: &Canonical) -> Result<()> {
        let n = c.n();
        if n < 2 {
            return Ok(());
        }
        let need = match c.vclass {
            VClass::Divisible => c.s[n - 1] + 1,
            VClass::NonDivisible => c.s[n - 2].max(c.s[n - 1]) + 2,
        };
        if c.r < need {
            return domain(format!("t_n1 outside its window: r={} < {need}", c.r));
        }
        Ok(())
    }

    /// `t_{n,1}` for NonDivisible `a_n` with `s_n <= s_1`, lowering `s_n` first:
    /// `p^{s_n} t_{n-1,1}(r, s_1..s_{n-1}) + (1-p) sum_l p^{s_n-l} t_{n,n+1}(r, l, ..., l)`.
    pub fn t_n1_lowering_last(&self, q: &JumpQuery) -> Result<JumpValue> {
        let c = Canonical::from_query(q.vclass, &q.label, 1)?;
        let n = c.n();
        if c.vclass != VClass::NonDivisible || n < 2 {
            return domain("needs a NonDivisible last radical and n >= 2");
        }
        if c.s[n - 1] > c.s[0] {
            return domain("needs s_n <= s_1");
        }
        self.check_cyclotomic_window(&c)?;
        let sn = c.s[n - 1];
        let head = Canonical { r: c.r, s: c.s[..n - 1].to_vec(), vclass: VClass::Divisible, k: 1 };
        let lead = signed(&self.t_n1_canonical(&head)?);
        let mut sum = BigInt::zero();
        for l in 1..=sn {
            sum += pow(&self.pb, (sn - l) as i64, "lowering_last")? * signed(&self.uniform_tnn1(n, l, c.r)?);
        }
        let v = pow(&self.pb, sn as i64, "lowering_last")? * lead + self.one_minus_p(Mutation::LoweringLastCoeff) * sum;
        crate::arith::to_jump(v, "lowering_last")
    }
}
