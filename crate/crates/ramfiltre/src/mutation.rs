//! Seeded single-constant perturbations of the closed forms, used to show
//! that the oracle checks are sensitive to transcription errors.

use std::fmt;

use num_bigint::BigInt;

/// One literal constant inside one closed form. When active, the constant
/// is replaced by its value plus one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// The `+1` in `(p^{2a-1} + 1)` of the Divisible `t_{1,2}`.
    T12Const,
    /// The `-1` in `(p^{2b} - 1)` of the Divisible `t_{1,1}`.
    T11DivConst,
    /// The `2` in the exponent of `-p^{2b}` of the Divisible `t_{1,1}`.
    T11DivExp,
    /// The `+1` of the level-one radical jump `p^{s+1} - p + 1`.
    Level1Const,
    /// The `-1` of the cyclotomic jump `p^{a-1} - 1`.
    CycConst,
    /// The `-1` in `p^{2b} + p^{2b-2} + p - 1` of the NonDivisible diagonal.
    NdDiagConst,
    /// The `+1` in `p^{2a-1} - p^{2a-2} - p + 1` of the NonDivisible `t_{1,2}` above the diagonal.
    NdBelowConst,
    /// The `2` in `2p^{2b} + p - 1` of the NonDivisible `t_{1,2}` below the diagonal.
    NdAboveCoeff,
    /// The `2` in `2p^{2b+1} - p + 1` of the NonDivisible `t_{1,1}`.
    NdT11Coeff,
    /// The leading `1` of the uniform Divisible `t_{n,2}`.
    U2Lead,
    /// The `2` in `2(p-1)p^n` of the uniform Divisible `t_{n,2}`.
    U2Coeff,
    /// The exponent offset in `p^{n-1}` of the uniform NonDivisible `t_{n,n+1}`.
    UnnExp,
    /// The `1` in `(1-p)` of the cyclotomic-direction sum.
    CycSumCoeff,
    /// The `1` in `(1-p)` of the radical-direction double sum.
    RadSumCoeff,
    /// The `1` in `(1-p)` of the clamped NonDivisible `tau`.
    TauNdCoeff,
    /// The `1` in `(1-p)` of the NonDivisible cyclotomic recurrence with `s_n` lowered first.
    LoweringLastCoeff,
}

impl Mutation {
    /// Every mutation, in a fixed order.
    pub const ALL: [Mutation; 16] = [
        Mutation::T12Const,
        Mutation::T11DivConst,
        Mutation::T11DivExp,
        Mutation::Level1Const,
        Mutation::CycConst,
        Mutation::NdDiagConst,
        Mutation::NdBelowConst,
        Mutation::NdAboveCoeff,
        Mutation::NdT11Coeff,
        Mutation::U2Lead,
        Mutation::U2Coeff,
        Mutation::UnnExp,
        Mutation::CycSumCoeff,
        Mutation::RadSumCoeff,
        Mutation::TauNdCoeff,
        Mutation::LoweringLastCoeff,
    ];

    /// Stable snake-case name, as accepted by `--mutate`.
    pub fn name(self) -> &'static str {
        match self {
            Mutation::T12Const => "t12_const",
            Mutation::T11DivConst => "t11_div_const",
            Mutation::T11DivExp => "t11_div_exp",
            Mutation::Level1Const => "level1_const",
            Mutation::CycConst => "cyc_const",
            Mutation::NdDiagConst => "nd_diag_const",
            Mutation::NdBelowConst => "nd_below_const",
            Mutation::NdAboveCoeff => "nd_above_coeff",
            Mutation::NdT11Coeff => "nd_t11_coeff",
            Mutation::U2Lead => "u2_lead",
            Mutation::U2Coeff => "u2_coeff",
            Mutation::UnnExp => "unn_exp",
            Mutation::CycSumCoeff => "cyc_sum_coeff",
            Mutation::RadSumCoeff => "rad_sum_coeff",
            Mutation::TauNdCoeff => "tau_nd_coeff",
            Mutation::LoweringLastCoeff => "lowering_last_coeff",
        }
    }

    /// Inverse of [`Mutation::name`].
    pub fn from_name(name: &str) -> Option<Mutation> {
        Mutation::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Source of the literal constants used by the closed forms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Constants {
    /// The active perturbation, if any.
    pub mutation: Option<Mutation>,
}

impl Constants {
    /// Unperturbed constants.
    pub const EXACT: Constants = Constants { mutation: None };

    /// Constants with one perturbation switched on.
    pub fn mutated(m: Mutation) -> Self {
        Constants { mutation: Some(m) }
    }

    /// `value`, or `value + 1` when `site` is the active mutation.
    pub fn int(&self, site: Mutation, value: i64) -> BigInt {
        BigInt::from(self.small(site, value))
    }

    /// Same as [`Constants::int`] for exponent arithmetic.
    pub fn small(&self, site: Mutation, value: i64) -> i64 {
        if self.mutation == Some(site) {
            value + 1
        } else {
            value
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Mutation::ALL {
            assert_eq!(Mutation::from_name(m.name()), Some(m));
        }
        assert_eq!(Mutation::from_name("nope"), None);
    }

    #[test]
    fn only_active_site_moves() {
        let c = Constants::mutated(Mutation::CycConst);
        assert_eq!(c.small(Mutation::CycConst, -1), 0);
        assert_eq!(c.small(Mutation::T12Const, 1), 1);
        assert_eq!(Constants::EXACT.small(Mutation::CycConst, -1), -1);
    }
}
