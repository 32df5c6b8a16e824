//! Closed forms for one radical (`n = 1`): `t_{1,1}(a, b)` and `t_{1,2}(a, b)`
//! where `a` is the cyclotomic exponent and `b` the radical exponent of the
//! top field, for both valuation classes.
//!
//! The closed forms are stated on reduced arguments; other points of the
//! `(a, b)` quadrant are first moved onto a reduced point by the reduction
//! clauses. The clause that produced the value is reported in [`N1Answer`].

use num_bigint::BigInt;

use crate::arith::{exact_div, pow, to_jump};
use crate::error::{domain, Result};
use crate::model::{JumpValue, Prime, VClass};
use crate::mutation::{Constants, Mutation};

/// A jump query for one radical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N1Query {
    /// Residue characteristic.
    pub p: Prime,
    /// Cyclotomic exponent of the top field, at least 1.
    pub a: u32,
    /// Radical exponent of the top field.
    pub b: u32,
    /// 1 for the cyclotomic direction, 2 for the radical direction.
    pub k: usize,
    /// Valuation class of the radicand.
    pub vclass: VClass,
}

/// Which closed form produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `t_{1,1}(1, b)`: the tame step, answered by 0.
    Tame,
    /// `p^{a-1} - 1`.
    Cyclotomic,
    /// `t_{1,2}(1, s+1)`.
    Level1,
    /// Divisible `t_{1,2}(a, b)` with `a <= b`.
    DivRadicalUpper,
    /// Divisible `t_{1,1}(a, b)` with `a > b`.
    DivCyclotomicLower,
    /// NonDivisible `t_{1,2}(s, s)`.
    NonDivDiagonal,
    /// NonDivisible `t_{1,2}(a, b)` with `a < b`.
    NonDivRadicalUpper,
    /// NonDivisible `t_{1,2}(a, b)` with `a > b`.
    NonDivRadicalLower,
    /// NonDivisible `t_{1,1}(a, b)` with `a >= b + 2`.
    NonDivCyclotomicLower,
}

/// A jump together with the reductions applied and the final clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N1Answer {
    /// The jump.
    pub value: JumpValue,
    /// The closed form that produced it.
    pub clause: Clause,
    /// The `(a, b)` arguments after reduction.
    pub reduced: (u32, u32),
}

/// Jump of `F(zeta_{p^a}) / F(zeta_{p^{a-1}})`, namely `p^{a-1} - 1`.
pub fn cyclotomic_jump(p: &Prime, a: u32) -> Result<JumpValue> {
    cyclotomic_jump_with(&Constants::EXACT, p, a)
}

/// [`cyclotomic_jump`] with explicit constants.
pub fn cyclotomic_jump_with(c: &Constants, p: &Prime, a: u32) -> Result<JumpValue> {
    if a < 2 {
        return domain("cyclotomic jump needs a >= 2");
    }
    let pp = BigInt::from(p.value().clone());
    let v = pow(&pp, a as i64 - 1, "cyclotomic")? + c.int(Mutation::CycConst, -1);
    to_jump(v, "cyclotomic")
}

/// `t_{1,2}(1, s+1)`: `p^{s+1} - p + 1` (Divisible) or `p^{s+1}` (NonDivisible).
pub fn t1_level1(p: &Prime, s: u32, vclass: VClass) -> Result<JumpValue> {
    t1_level1_with(&Constants::EXACT, p, s, vclass)
}

/// [`t1_level1`] with explicit constants.
pub fn t1_level1_with(c: &Constants, p: &Prime, s: u32, vclass: VClass) -> Result<JumpValue> {
    let pp = BigInt::from(p.value().clone());
    let top = pow(&pp, s as i64 + 1, "level1")?;
    let v = match vclass {
        VClass::Divisible => top - &pp + c.int(Mutation::Level1Const, 1),
        VClass::NonDivisible => top,
    };
    to_jump(v, "level1")
}

/// Jump `t_{1,k}(a, b)` over the whole quadrant.
pub fn t1(q: &N1Query) -> Result<N1Answer> {
    t1_with(&Constants::EXACT, q)
}

/// [`t1`] with explicit constants.
pub fn t1_with(c: &Constants, q: &N1Query) -> Result<N1Answer> {
    if q.a == 0 {
        return domain("t1 needs a >= 1");
    }
    match q.k {
        1 => t11(c, q),
        2 => {
            if q.b == 0 {
                return domain("t_{1,2} needs b >= 1");
            }
            t12(c, q)
        }
        k => domain(format!("t1 index k={k} must be 1 or 2")),
    }
}

fn answer(value: JumpValue, clause: Clause, a: u32, b: u32) -> N1Answer {
    N1Answer { value, clause, reduced: (a, b) }
}

fn t12(c: &Constants, q: &N1Query) -> Result<N1Answer> {
    let (a, b) = (q.a, q.b);
    let pp = BigInt::from(q.p.value().clone());
    let p1 = &pp + 1;
    match q.vclass {
        VClass::Divisible => {
            // Points below the diagonal reduce to the diagonal (b, b).
            let a = a.min(b);
            if a == 1 {
                let v = t1_level1_with(c, &q.p, b - 1, VClass::Divisible)?;
                return Ok(answer(v, Clause::Level1, a, b));
            }
            let num = (&pp - 1) * (pow(&pp, 2 * a as i64 - 1, "t12")? + c.int(Mutation::T12Const, 1));
            let v = pow(&pp, (a + b) as i64 - 1, "t12")? - exact_div(&num, &p1, "t12 div")?;
            Ok(answer(to_jump(v, "t12 div")?, Clause::DivRadicalUpper, a, b))
        }
        VClass::NonDivisible => {
            if a == 1 {
                let v = t1_level1_with(c, &q.p, b - 1, VClass::NonDivisible)?;
                return Ok(answer(v, Clause::Level1, a, b));
            }
            if a == b {
                let num = pow(&pp, 2 * b as i64, "nd diag")?
                    + pow(&pp, 2 * b as i64 - 2, "nd diag")?
                    + &pp
                    + c.int(Mutation::NdDiagConst, -1);
                let v = exact_div(&num, &p1, "nd diag")?;
                Ok(answer(to_jump(v, "nd diag")?, Clause::NonDivDiagonal, a, b))
            } else if a < b {
                let num = pow(&pp, 2 * a as i64 - 1, "nd upper")? - pow(&pp, 2 * a as i64 - 2, "nd upper")? - &pp
                    + c.int(Mutation::NdBelowConst, 1);
                let v = pow(&pp, (a + b) as i64 - 1, "nd upper")? - exact_div(&num, &p1, "nd upper")?;
                Ok(answer(to_jump(v, "nd upper")?, Clause::NonDivRadicalUpper, a, b))
            } else {
                // Every a > b gives the same value as (b + 1, b).
                let num = c.int(Mutation::NdAboveCoeff, 2) * pow(&pp, 2 * b as i64, "nd lower")? + &pp - 1;
                let v = exact_div(&num, &p1, "nd lower")?;
                Ok(answer(to_jump(v, "nd lower")?, Clause::NonDivRadicalLower, b + 1, b))
            }
        }
    }
}

fn t11(c: &Constants, q: &N1Query) -> Result<N1Answer> {
    let pp = BigInt::from(q.p.value().clone());
    let p1 = &pp + 1;
    let (a, mut b) = (q.a, q.b);
    if a == 1 {
        return Ok(answer(JumpValue::default(), Clause::Tame, a, b));
    }
    match q.vclass {
        VClass::Divisible => {
            if a <= b {
                b = a - 1;
            }
            if b == 0 {
                return Ok(answer(cyclotomic_jump_with(c, &q.p, a)?, Clause::Cyclotomic, a, 0));
            }
            let e = c.small(Mutation::T11DivExp, 2) * b as i64;
            let num = (&pp - 1) * (pow(&pp, 2 * b as i64, "t11 div")? + c.int(Mutation::T11DivConst, -1));
            let v =
                pow(&pp, (a + b) as i64 - 1, "t11 div")? - pow(&pp, e, "t11 div")? + exact_div(&num, &p1, "t11 div")?;
            Ok(answer(to_jump(v, "t11 div")?, Clause::DivCyclotomicLower, a, b))
        }
        VClass::NonDivisible => {
            // a <= b reduces to (a, a - 1); a = b + 1 with b >= 1 reduces to (a, a - 2).
            if a <= b {
                b = a - 1;
            }
            if a == b + 1 {
                b = a - 2;
            }
            if b == 0 {
                return Ok(answer(cyclotomic_jump_with(c, &q.p, a)?, Clause::Cyclotomic, a, 0));
            }
            let num = c.int(Mutation::NdT11Coeff, 2) * pow(&pp, 2 * b as i64 + 1, "nd t11")? - &pp + 1;
            let v = pow(&pp, (a + b) as i64 - 1, "nd t11")? - exact_div(&num, &p1, "nd t11")?;
            Ok(answer(to_jump(v, "nd t11")?, Clause::NonDivCyclotomicLower, a, b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u32, a: u32, b: u32, k: usize, vclass: VClass) -> u64 {
        let p = Prime::new(p).unwrap();
        let ans = t1(&N1Query { p, a, b, k, vclass }).unwrap();
        u64::try_from(ans.value).unwrap()
    }

    #[test]
    fn cyclotomic_examples() {
        let three = Prime::new(3u32).unwrap();
        let five = Prime::new(5u32).unwrap();
        assert_eq!(cyclotomic_jump(&three, 2).unwrap(), 2u32.into());
        assert_eq!(cyclotomic_jump(&three, 4).unwrap(), 26u32.into());
        assert_eq!(cyclotomic_jump(&five, 2).unwrap(), 4u32.into());
        assert!(cyclotomic_jump(&three, 1).is_err());
    }

    #[test]
    fn level1_examples() {
        let three = Prime::new(3u32).unwrap();
        assert_eq!(t1_level1(&three, 0, VClass::Divisible).unwrap(), 1u32.into());
        assert_eq!(t1_level1(&three, 0, VClass::NonDivisible).unwrap(), 3u32.into());
        assert_eq!(t1_level1(&three, 2, VClass::Divisible).unwrap(), 25u32.into());
    }

    #[test]
    fn t1_examples() {
        use VClass::*;
        assert_eq!(q(3, 2, 1, 1, Divisible), 4);
        assert_eq!(q(3, 4, 2, 2, Divisible), 13);
        assert_eq!(q(3, 2, 1, 2, NonDivisible), 5);
        assert_eq!(q(3, 4, 1, 1, NonDivisible), 68);
        assert_eq!(q(3, 2, 2, 2, NonDivisible), 23);
    }

    #[test]
    fn proof_formulas_agree() {
        // t_{1,1}(r+1, 1) = p^{r+1} - 2p + 1 (Divisible) and
        // t_{1,1}(r, 1) = p^{r} - 2p^2 + 2p - 1 for r >= 3 (NonDivisible).
        for p in [3u64, 5, 7] {
            for r in 1..6u32 {
                let div = q(p as u32, r + 1, 1, 1, VClass::Divisible);
                assert_eq!(div, p.pow(r + 1) - 2 * p + 1);
            }
            for r in 3..7u32 {
                let nd = q(p as u32, r, 1, 1, VClass::NonDivisible);
                assert_eq!(nd, p.pow(r) - 2 * p * p + 2 * p - 1);
            }
        }
    }

    #[test]
    fn clause_trace() {
        let three = Prime::new(3u32).unwrap();
        let ans = t1(&N1Query { p: three.clone(), a: 4, b: 2, k: 2, vclass: VClass::Divisible }).unwrap();
        assert_eq!(ans.clause, Clause::DivRadicalUpper);
        assert_eq!(ans.reduced, (2, 2));
        let ans = t1(&N1Query { p: three.clone(), a: 3, b: 5, k: 1, vclass: VClass::NonDivisible }).unwrap();
        assert_eq!(ans.clause, Clause::NonDivCyclotomicLower);
        assert_eq!(ans.reduced, (3, 1));
        let ans = t1(&N1Query { p: three, a: 1, b: 0, k: 1, vclass: VClass::Divisible }).unwrap();
        assert_eq!(ans.clause, Clause::Tame);
        assert_eq!(ans.value, 0u32.into());
    }

    #[test]
    fn domain_errors() {
        let three = Prime::new(3u32).unwrap();
        let bad = |a, b, k| t1(&N1Query { p: three.clone(), a, b, k, vclass: VClass::Divisible }).is_err();
        assert!(bad(0, 1, 2));
        assert!(bad(2, 0, 2));
        assert!(bad(2, 1, 3));
    }
}
