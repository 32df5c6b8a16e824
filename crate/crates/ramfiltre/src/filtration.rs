//! Ramification filtrations of `Gal(L/F)`: the tower walk, the jump
//! families, filtration levels with group orders, and tame scaling.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::engine::{Engine, JumpQuery};
use crate::error::{Error, Result};
use crate::model::{tame_multiplier, FieldLabel, JumpValue, Prime, RadicalSpec, TameFactor, VClass};

/// Closed-form family a level's jump belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// The jump-0 level `G_0`.
    Tame,
    /// Family i).
    I,
    /// Family ii).
    II,
    /// Family iii).
    III,
    /// Family iv) (NonDivisible only).
    IV,
    /// The step `L_{1,0,...,0} -> L_{1,1,...,1,0}` (NonDivisible, `n >= 2`).
    Initial,
}

impl Family {
    /// Short tag used in serialized output.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Tame => "tame",
            Family::I => "i",
            Family::II => "ii",
            Family::III => "iii",
            Family::IV => "iv",
            Family::Initial => "initial",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One level `G_{t_j}` of the filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationLevel {
    /// Lower-numbering jump `t_j`.
    pub jump: JumpValue,
    /// Family of the jump.
    pub family: Family,
    /// Direction index `k` of `t_j = t_{n,k}(u_j)`.
    pub k: usize,
    /// The label `u_j`: top node of the tower step carrying the jump.
    pub source: FieldLabel,
    /// Fixed field of `G_{t_j}`.
    pub fixed_field: FieldLabel,
    /// `|G_{t_j}|`.
    pub group_order: BigUint,
}

/// The full filtration `G = G_0 ⊇ G_{t_1} ⊋ ... ⊋ {1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    /// The extension.
    pub spec: RadicalSpec,
    /// Levels, starting with jump 0.
    pub levels: Vec<FiltrationLevel>,
    /// `|G_0|`.
    pub g0_order: BigUint,
    /// `|G_1|`.
    pub g1_order: BigUint,
    /// Tame multiplier `D` applied to the jumps.
    pub tame_degree: BigUint,
}

impl Filtration {
    /// All jumps, starting with 0.
    pub fn jumps(&self) -> Vec<JumpValue> {
        self.levels.iter().map(|l| l.jump.clone()).collect()
    }

    /// The nonzero jumps.
    pub fn nonzero_jumps(&self) -> Vec<JumpValue> {
        self.levels.iter().skip(1).map(|l| l.jump.clone()).collect()
    }

    /// Group orders of all levels.
    pub fn orders(&self) -> Vec<BigUint> {
        self.levels.iter().map(|l| l.group_order.clone()).collect()
    }

    /// Residue characteristic.
    pub fn prime(&self) -> &Prime {
        &self.spec.p
    }
}

/// Drops zero radicals. When `a_n` is absent the remaining radicals are Divisible.
pub fn reduce_label(vclass: VClass, label: &FieldLabel) -> (VClass, FieldLabel) {
    let n = label.n();
    let vclass = if n == 0 || label.s[n - 1] == 0 { VClass::Divisible } else { vclass };
    let s = label.s.iter().copied().filter(|&x| x > 0).collect();
    (vclass, FieldLabel::new(label.r, s))
}

/// The tower `K_1 ⊂ ... ⊂ K_m = L` of the proofs.
pub fn tower_sequence(spec: &RadicalSpec) -> Result<Vec<FieldLabel>> {
    spec.validate()?;
    tower_walk(spec.vclass, &spec.full_label())
}

fn tower_walk(vclass: VClass, target: &FieldLabel) -> Result<Vec<FieldLabel>> {
    let n = target.n();
    let r = target.r;
    let s = &target.s;
    let mut out = vec![FieldLabel::base(n)];
    out[0].r = 1;
    if vclass == VClass::NonDivisible && n >= 2 {
        let mut k2 = out[0].clone();
        for x in &mut k2.s[..n - 1] {
            *x = 1;
        }
        out.push(k2);
    }
    let raise = |cur: &FieldLabel| -> Vec<u32> { cur.s.iter().zip(s).map(|(&c, &t)| t.min(c + 1)).collect() };
    let budget = r as usize + s.iter().map(|&x| x as usize).sum::<usize>() + n;
    while out.last() != Some(target) {
        if out.len() > budget + 1 {
            return Err(Error::Internal(format!("tower walk for {target} exceeded {budget} steps")));
        }
        let cur = out[out.len() - 1].clone();
        let next = if cur.s == *s {
            FieldLabel::new(r.min(cur.r + 1), s.clone())
        } else {
            match vclass {
                VClass::Divisible => {
                    let top = cur.s.last().copied().unwrap_or(0);
                    if cur.r == top {
                        FieldLabel::new(cur.r + 1, cur.s.clone())
                    } else if cur.r > top {
                        FieldLabel::new(cur.r, raise(&cur))
                    } else {
                        return Err(Error::Internal(format!("tower walk stuck at {cur}")));
                    }
                }
                VClass::NonDivisible if cur.r == r => FieldLabel::new(r, raise(&cur)),
                VClass::NonDivisible => {
                    let last = cur.s[n - 1];
                    let big_s = match n {
                        1 => last + 1,
                        _ if last < cur.s[n - 2] => cur.s[n - 2],
                        _ => last + 1,
                    };
                    if cur.r > big_s {
                        FieldLabel::new(cur.r, raise(&cur))
                    } else if cur.r == big_s {
                        FieldLabel::new(r.min(cur.r + 1), cur.s.clone())
                    } else {
                        return Err(Error::Internal(format!("tower walk stuck at {cur}")));
                    }
                }
            }
        };
        if next == cur {
            return Err(Error::Internal(format!("tower walk stalled at {cur}")));
        }
        out.push(next);
    }
    Ok(out)
}

/// Direction indices `k` in which `upper` exceeds `lower` (1 for `r`, `i + 1` for `s_i`).
pub fn step_directions(lower: &FieldLabel, upper: &FieldLabel) -> Vec<usize> {
    let mut ks = Vec::new();
    if upper.r != lower.r {
        ks.push(1);
    }
    ks.extend(lower.s.iter().zip(&upper.s).enumerate().filter(|(_, (a, b))| a != b).map(|(i, _)| i + 2));
    ks
}

/// Every jump family member, each as the query of the tower step it labels.
pub fn enumerate_jump_families(spec: &RadicalSpec) -> Result<Vec<(Family, JumpQuery)>> {
    spec.validate()?;
    let families = families(spec);
    let steps = tower_sequence(spec)?.len() - 1;
    if families.len() != steps {
        return Err(Error::Consistency(format!(
            "{} family queries but {steps} tower steps for {}",
            families.len(),
            spec.full_label()
        )));
    }
    Ok(families)
}

fn families(spec: &RadicalSpec) -> Vec<(Family, JumpQuery)> {
    let n = spec.n();
    let (r, s) = (spec.r, &spec.s);
    let sn = s[n - 1];
    let q = |r: u32, s: Vec<u32>, k: usize| JumpQuery::new(spec.p.clone(), spec.vclass, FieldLabel::new(r, s), k);
    let clamp = |c: u32| -> Vec<u32> { s.iter().map(|&x| x.min(c)).collect() };
    let mut out = Vec::new();
    match spec.vclass {
        VClass::Divisible => {
            for t in sn + 1..=r {
                out.push((Family::I, q(t, s.clone(), 1)));
            }
            for c in 1..sn {
                out.push((Family::II, q(c + 1, clamp(c), 1)));
            }
            for c in 1..=sn {
                out.push((Family::III, q(c, clamp(c), n + 1)));
            }
        }
        VClass::NonDivisible => {
            if n >= 2 {
                let mut first = vec![1; n];
                first[n - 1] = 0;
                out.push((Family::Initial, q(1, first, n)));
            }
            if r == sn {
                out.push((Family::I, q(r, s.clone(), n + 1)));
            }
            for c in 1..r {
                let mut v = clamp(c);
                v[n - 1] = (c - 1).min(sn);
                out.push((Family::II, q(c + 1, v, 1)));
            }
            if n >= 2 {
                for c in sn + 2..=s[n - 2] {
                    let mut v = clamp(c);
                    v[n - 1] = sn;
                    out.push((Family::III, q(c, v, n)));
                }
            }
            for c in 1..=sn.min(r - 1) {
                let mut v = clamp(c + 1);
                v[n - 1] = c;
                out.push((Family::IV, q(c + 1, v, n + 1)));
            }
        }
    }
    out
}

/// Builds the filtration of `spec` with a fresh engine.
pub fn build_filtration(spec: &RadicalSpec) -> Result<Filtration> {
    build_filtration_with(&Engine::new(), spec)
}

/// Builds the filtration of `spec`, evaluating jumps with `engine`.
pub fn build_filtration_with(engine: &Engine, spec: &RadicalSpec) -> Result<Filtration> {
    spec.validate()?;
    let wild = RadicalSpec { tame: TameFactor::trivial(), ..spec.clone() };
    let f = build_unchecked(engine, &wild)?;
    Ok(if spec.tame.is_trivial() { f } else { scale_tame(&f, &spec.tame) })
}

/// Filtration of `Gal(L_node/F)` for a node of the tower of `spec`, with the
/// same tame factor. Zero radicals are dropped, so the result may have fewer
/// radicals (possibly none).
pub fn node_filtration(engine: &Engine, spec: &RadicalSpec, node: &FieldLabel) -> Result<Filtration> {
    let (vclass, label) = reduce_label(spec.vclass, node);
    let sub = RadicalSpec {
        p: spec.p.clone(),
        r: label.r,
        s: label.s,
        vclass,
        tame: TameFactor::trivial(),
        p2_asserted: spec.p2_asserted,
    };
    let f = build_unchecked(engine, &sub)?;
    Ok(if spec.tame.is_trivial() { f } else { scale_tame(&f, &spec.tame) })
}

fn build_unchecked(engine: &Engine, spec: &RadicalSpec) -> Result<Filtration> {
    let p = &spec.p;
    let full = spec.full_label();
    let tower = tower_walk(spec.vclass, &full)?;
    let families = if spec.n() == 0 { Vec::new() } else { families(spec) };
    let degree = full.degree(p);
    let order_over = |node: &FieldLabel| &degree / node.degree(p);
    let mut levels = vec![FiltrationLevel {
        jump: JumpValue::default(),
        family: Family::Tame,
        k: 1,
        source: tower[0].clone(),
        fixed_field: FieldLabel::base(spec.n()),
        group_order: degree.clone(),
    }];
    for pair in tower.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        let ks = step_directions(lower, upper);
        let mut values = Vec::with_capacity(ks.len());
        for &k in &ks {
            values.push(engine.jump(&JumpQuery::new(p.clone(), spec.vclass, upper.clone(), k))?);
        }
        if values.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Consistency(format!("step {lower} -> {upper} has distinct jumps {values:?}")));
        }
        let k = *ks.last().ok_or_else(|| Error::Internal(format!("empty step at {lower}")))?;
        let family = if spec.n() == 0 {
            Family::I
        } else {
            families
                .iter()
                .find(|(_, q)| q.label == *upper && q.k == k)
                .map(|(fam, _)| *fam)
                .ok_or_else(|| Error::Consistency(format!("step {lower} -> {upper} (k={k}) matches no family")))?
        };
        let prev = levels.last().map(|l| l.jump.clone()).unwrap_or_default();
        if values[0] <= prev {
            return Err(Error::Ordering(format!("jump {} at {upper} does not exceed {prev}", values[0])));
        }
        levels.push(FiltrationLevel {
            jump: values[0].clone(),
            family,
            k,
            source: upper.clone(),
            fixed_field: lower.clone(),
            group_order: order_over(lower),
        });
    }
    let g1_order = order_over(&tower[0]);
    Ok(Filtration { spec: spec.clone(), levels, g0_order: degree, g1_order, tame_degree: BigUint::one() })
}

/// Multiplies every nonzero jump by `D = tame_multiplier(t)` and `|G_0|` by `D`.
pub fn scale_tame(f: &Filtration, t: &TameFactor) -> Filtration {
    let d = tame_multiplier(t);
    let mut out = f.clone();
    for (i, level) in out.levels.iter_mut().enumerate() {
        if i == 0 {
            level.group_order *= &d;
        } else {
            level.jump *= &d;
        }
    }
    out.g0_order *= &d;
    out.tame_degree *= &d;
    out.spec.tame.primes.extend(t.primes.iter().cloned());
    out
}
