//! Herbrand functions, different valuations, and the subgroup and quotient
//! filtrations attached to a tower node.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::signed;
use crate::engine::Engine;
use crate::error::{domain, Error, Result};
use crate::filtration::{node_filtration, Filtration, FiltrationLevel};
use crate::model::{FieldLabel, JumpValue, RadicalSpec};

/// A continuous, increasing piecewise-linear map on `[-1, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    /// Points `(u, f(u))`, strictly increasing in `u`, starting at `(-1, -1)`.
    pub breakpoints: Vec<(BigRational, BigRational)>,
    /// `slopes[i]` holds from `breakpoints[i]` to `breakpoints[i + 1]`; the last one holds beyond.
    pub slopes: Vec<BigRational>,
}

impl PiecewiseLinear {
    /// Evaluates at `u`. Below `-1` the map is extended by the identity.
    pub fn eval(&self, u: &BigRational) -> BigRational {
        let idx = self.breakpoints.partition_point(|(x, _)| x <= u);
        if idx == 0 {
            return u.clone();
        }
        let (x, y) = &self.breakpoints[idx - 1];
        affine(y, &self.slopes[idx - 1], u, x)
    }

    /// The inverse map.
    pub fn inverse(&self) -> PiecewiseLinear {
        PiecewiseLinear {
            breakpoints: self.breakpoints.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            slopes: self.slopes.iter().map(|s| s.recip()).collect(),
        }
    }

    /// Whether consecutive slopes never increase.
    pub fn is_concave(&self) -> bool {
        self.slopes.windows(2).all(|w| w[1] <= w[0])
    }
}

fn rat(x: &BigUint) -> BigRational {
    BigRational::from_integer(signed(x))
}

/// `φ_{L/K}(u) = ∫_0^u [G_0 : G_t]^{-1} dt`, identity on `[-1, 0]`.
pub fn phi_from_filtration(f: &Filtration) -> PiecewiseLinear {
    let g0 = rat(&f.g0_order);
    let mut breakpoints = vec![(-BigRational::one(), -BigRational::one()), (BigRational::zero(), BigRational::zero())];
    let mut slopes = vec![BigRational::one()];
    let mut prev_u = BigRational::zero();
    for level in f.levels.iter().skip(1) {
        let u = rat(&level.jump);
        let slope = rat(&level.group_order) / &g0;
        let v = &breakpoints[breakpoints.len() - 1].1 + &slope * (&u - &prev_u);
        slopes.push(slope);
        breakpoints.push((u.clone(), v));
        prev_u = u;
    }
    slopes.push(g0.recip());
    PiecewiseLinear { breakpoints, slopes }
}

/// `ψ_{L/K}`, the inverse of [`phi_from_filtration`].
pub fn psi_from_filtration(f: &Filtration) -> PiecewiseLinear {
    phi_from_filtration(f).inverse()
}

/// Evaluates the inverse of `phi` at `v`.
pub fn psi(phi: &PiecewiseLinear, v: &BigRational) -> BigRational {
    let idx = phi.breakpoints.partition_point(|(_, y)| y <= v);
    if idx == 0 {
        return v.clone();
    }
    let (x, y) = &phi.breakpoints[idx - 1];
    affine(x, &phi.slopes[idx - 1].recip(), v, y)
}

/// `base + slope * (u - origin)` with a single normalization.
fn affine(base: &BigRational, slope: &BigRational, u: &BigRational, origin: &BigRational) -> BigRational {
    let (bn, bd) = (base.numer(), base.denom());
    let (sn, sd) = (slope.numer(), slope.denom());
    let (un, ud) = (u.numer(), u.denom());
    let (on, od) = (origin.numer(), origin.denom());
    let diff_num = un * od - on * ud;
    let diff_den = ud * od;
    let den = bd * sd * &diff_den;
    let num = bn * sd * &diff_den + bd * sn * diff_num;
    BigRational::new(num, den)
}

/// Upper-numbering jumps `φ(t_j)` of the nonzero jumps.
pub fn upper_jumps(f: &Filtration) -> Vec<BigRational> {
    let phi = phi_from_filtration(f);
    f.levels.iter().skip(1).map(|l| phi.eval(&rat(&l.jump))).collect()
}

/// `v_L(D_{L/K}) = Σ_{i ≥ 0} (|G_i| - 1)`, summed segment by segment.
pub fn different_valuation(f: &Filtration) -> BigUint {
    let one = BigUint::one();
    let mut total = &f.g0_order - &one;
    let mut prev = JumpValue::zero();
    for level in f.levels.iter().skip(1) {
        total += (&level.jump - &prev) * (&level.group_order - &one);
        prev = level.jump.clone();
    }
    total
}

/// `(d - 1)(t + 1)`: the different exponent of a degree-`d` extension with the single jump `t`.
pub fn single_jump_different(d: &BigUint, t: &JumpValue) -> BigUint {
    (d - BigUint::one()) * (t + BigUint::one())
}

/// Position `j` of a node in the tower: 0 for the base field, `j >= 1` when
/// `node` is the fixed field of `G_{t_j}`, and the number of levels for the top field.
fn node_index(f: &Filtration, node: &FieldLabel) -> Result<usize> {
    if *node == f.spec.full_label() {
        return Ok(f.levels.len());
    }
    if let Some(j) = f.levels.iter().position(|l| l.fixed_field == *node) {
        return Ok(j);
    }
    domain(format!("{node} is not a node of the tower of {}", f.spec.full_label()))
}

/// Filtration of `H = Gal(L/L_sub)` with `H_i = G_i ∩ H`.
pub fn restrict_filtration(f: &Filtration, sub: &FieldLabel) -> Result<Filtration> {
    let j = node_index(f, sub)?;
    if j == 0 {
        return Ok(f.clone());
    }
    let order = match f.levels.get(j) {
        Some(level) => level.group_order.clone(),
        None => BigUint::one(),
    };
    let mut levels =
        vec![FiltrationLevel { jump: JumpValue::zero(), group_order: order.clone(), ..f.levels[0].clone() }];
    levels[0].fixed_field = sub.clone();
    levels.extend(f.levels.iter().skip(j).cloned());
    Ok(Filtration {
        spec: f.spec.clone(),
        levels,
        g0_order: order.clone(),
        g1_order: order,
        tame_degree: f.tame_degree.clone(),
    })
}

/// Filtration of `Gal(L_sub/K) = G/H` by Herbrand's theorem: the levels of
/// `G` strictly above `H`, with jumps moved to `φ_{L/L_sub}(t_i)` and orders divided by `|H|`.
pub fn quotient_filtration(f: &Filtration, sub: &FieldLabel) -> Result<Filtration> {
    let j = node_index(f, sub)?;
    let h = restrict_filtration(f, sub)?;
    let phi = phi_from_filtration(&h);
    let h_order = &h.g0_order;
    let mut levels = Vec::with_capacity(j);
    for level in &f.levels[..j] {
        let v = phi.eval(&rat(&level.jump));
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Integrality(format!("quotient jump {v} at {sub} is not a non-negative integer")));
        }
        let jump = v.to_integer().to_biguint().unwrap_or_default();
        levels.push(FiltrationLevel { jump, group_order: &level.group_order / h_order, ..level.clone() });
    }
    let g0_order = &f.g0_order / h_order;
    let g1_order = &f.g1_order / h_order;
    let spec = RadicalSpec { r: sub.r, s: sub.s.clone(), ..f.spec.clone() };
    Ok(Filtration { spec, levels, g0_order, g1_order, tame_degree: f.tame_degree.clone() })
}

/// Checks the quotient filtration of `f` at `mid` against the directly
/// computed filtration of `L_mid / F`, then checks
/// `v_L(D_{L/K}) = v_L(D_{L/M}) + e(L|M) v_M(D_{M/K})`.
pub fn tower_different_check(f: &Filtration, mid: &FieldLabel) -> Result<bool> {
    tower_different_check_with(&Engine::new(), f, mid)
}

/// [`tower_different_check`] with a shared engine.
pub fn tower_different_check_with(engine: &Engine, f: &Filtration, mid: &FieldLabel) -> Result<bool> {
    let j = node_index(f, mid)?;
    if j == 0 || j == f.levels.len() {
        return Ok(true);
    }
    let h = restrict_filtration(f, mid)?;
    let q = match quotient_filtration(f, mid) {
        Ok(q) => q,
        Err(Error::Integrality(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let direct = node_filtration(engine, &f.spec, mid)?;
    if q.jumps() != direct.jumps() || q.orders() != direct.orders() {
        return Ok(false);
    }
    let lhs = different_valuation(f);
    let rhs = different_valuation(&h) + &h.g0_order * different_valuation(&direct);
    Ok(lhs == rhs)
}

/// `v(D_{K_{i+1}/F}) = (d - 1)(t_i + 1) + d v(D_{K_i/F})` for every step of the tower of
/// `f`, with both different exponents taken from directly computed filtrations.
/// Returns the first failing step.
pub fn tower_step_differents(engine: &Engine, f: &Filtration) -> Result<Option<FieldLabel>> {
    let mut nodes: Vec<FieldLabel> = f.levels.iter().skip(1).map(|l| l.fixed_field.clone()).collect();
    nodes.push(f.spec.full_label());
    for pair in nodes.windows(2) {
        let lower = node_filtration(engine, &f.spec, &pair[0])?;
        let upper = node_filtration(engine, &f.spec, &pair[1])?;
        let d = &upper.g0_order / &lower.g0_order;
        let t = &upper.levels[upper.levels.len() - 1].jump;
        let support = &pair[1].s;
        let lower_in_upper = FieldLabel::new(
            pair[0].r,
            pair[0].s.iter().zip(support).filter(|(_, &u)| u > 0).map(|(&x, _)| x).collect(),
        );
        let step = restrict_filtration(&upper, &lower_in_upper).ok();
        let step_ok = step.is_some_and(|s| different_valuation(&s) == single_jump_different(&d, t));
        let expected = single_jump_different(&d, t) + &d * different_valuation(&lower);
        if !step_ok || different_valuation(&upper) != expected {
            return Ok(Some(pair[1].clone()));
        }
    }
    Ok(None)
}
