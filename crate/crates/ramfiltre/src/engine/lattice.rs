//! Path B: a total, memoized evaluator on the subfield lattice.
//!
//! A node is a label together with a target direction. Its value is the
//! unique jump of `L_X / L_{X(l)}` where `l` is the target. For two distinct
//! admissible directions `l` and `k`, write `a = t_l(X(k))` and
//! `b = t_k(X(l))`. Then the jumps at `X` satisfy
//!
//! * `t_l(X) - t_k(X) = p (a - b)`,
//! * `t_l(X) = a` whenever `a <= b`,
//!
//! so `t_l(X) = a + (p - 1) max(0, a - b)`. Each application lowers
//! `r + sum(s)` by one, and the recursion bottoms out on three seeds:
//!
//! * cyclotomic target, no radical: `p^{r-1} - 1`;
//! * radical target, `r = 1`, one radical of exponent `s`:
//!   `p^s - p + 1` (Divisible) or `p^s` (NonDivisible);
//! * any remaining zero coordinate is dropped (the radical is absent).
//!
//! The value depends only on `p`, `r`, the multiset of (class, exponent)
//! pairs and the target, so nodes are stored in a canonical form.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;

use crate::error::{domain, Error, Result};
use crate::model::{FieldLabel, JumpValue, Prime, VClass};

/// Direction of a lattice step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// Lower `r`.
    Cyclotomic,
    /// Lower the exponent of a radical with the given class and exponent.
    Radical(VClass, u32),
}

/// Canonical lattice node: zero coordinates removed, non-target coordinates sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    /// Cyclotomic exponent.
    pub r: u32,
    /// Target direction.
    pub target: Target,
    /// The non-target radicals, sorted.
    pub others: Vec<(VClass, u32)>,
}

/// Which admissible second direction the square rule pairs with the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// Cyclotomic when the target is radical and `r >= 2`, else the first other radical.
    Default,
    /// Always the last (largest) other radical when one exists.
    LastRadical,
}

/// Evaluation options.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeOptions {
    /// Clamp non-target Divisible exponents to a Divisible target's exponent before evaluating.
    pub clamp: bool,
    /// Cache results.
    pub memoize: bool,
    /// Choice of second direction.
    pub pairing: Pairing,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { clamp: false, memoize: true, pairing: Pairing::Default }
    }
}

/// Memoized square-rule evaluator for one prime.
#[derive(Debug)]
pub struct Lattice {
    p: Prime,
    options: LatticeOptions,
    memo: RwLock<HashMap<Node, JumpValue>>,
}

impl Node {
    /// Builds the canonical node for `t_{n,k}` at `label`, where radicals
    /// `1..n-1` are Divisible and radical `n` has class `vclass`.
    pub fn from_query(vclass: VClass, label: &FieldLabel, k: usize) -> Result<Node> {
        let n = label.n();
        let classes: Vec<VClass> = (0..n).map(|i| if i + 1 == n { vclass } else { VClass::Divisible }).collect();
        let coords: Vec<(VClass, u32)> = classes.into_iter().zip(label.s.iter().copied()).collect();
        if label.r == 0 {
            return domain("lattice nodes need r >= 1");
        }
        match k {
            1 => {
                if label.r < 2 {
                    return domain("k=1 at r=1 is the tame step");
                }
                Ok(Node::canonical(label.r, Target::Cyclotomic, coords))
            }
            k if k >= 2 && k <= n + 1 => {
                let (class, s) = coords[k - 2];
                if s == 0 {
                    return domain(format!("s_{} must be >= 1 for k={k}", k - 1));
                }
                let mut rest = coords;
                rest.remove(k - 2);
                Ok(Node::canonical(label.r, Target::Radical(class, s), rest))
            }
            _ => domain(format!("index k={k} outside 1..={}", n + 1)),
        }
    }

    fn canonical(r: u32, target: Target, mut others: Vec<(VClass, u32)>) -> Node {
        others.retain(|&(_, s)| s > 0);
        others.sort();
        Node { r, target, others }
    }

    fn clamped(&self) -> Node {
        match self.target {
            Target::Radical(VClass::Divisible, t) => {
                let others = self
                    .others
                    .iter()
                    .map(|&(c, s)| if c == VClass::Divisible { (c, s.min(t)) } else { (c, s) })
                    .collect();
                Node::canonical(self.r, self.target, others)
            }
            _ => self.clone(),
        }
    }

    /// Every admissible second direction, as (direction, index into `others`).
    pub fn partners(&self) -> Vec<Partner> {
        let mut out = Vec::new();
        if let Target::Radical(..) = self.target {
            if self.r >= 2 {
                out.push(Partner::Cyclotomic);
            }
        }
        for i in 0..self.others.len() {
            if i == 0 || self.others[i] != self.others[i - 1] {
                out.push(Partner::Radical(i));
            }
        }
        out
    }

    /// `(t_target(X lowered along partner), t_partner(X lowered along target))`.
    fn square(&self, partner: Partner) -> (Node, Node) {
        let lowered_target_coord = |target: Target| -> (u32, Option<(VClass, u32)>) {
            match target {
                Target::Cyclotomic => (self.r - 1, None),
                Target::Radical(c, s) => (self.r, Some((c, s - 1))),
            }
        };
        match partner {
            Partner::Cyclotomic => {
                let a = Node::canonical(self.r - 1, self.target, self.others.clone());
                let (r, extra) = lowered_target_coord(self.target);
                let mut others = self.others.clone();
                others.extend(extra);
                let b = Node::canonical(r, Target::Cyclotomic, others);
                (a, b)
            }
            Partner::Radical(i) => {
                let (pc, ps) = self.others[i];
                let mut a_others = self.others.clone();
                a_others[i].1 = ps - 1;
                let a = Node::canonical(self.r, self.target, a_others);
                let (r, extra) = lowered_target_coord(self.target);
                let mut b_others = self.others.clone();
                b_others.remove(i);
                b_others.extend(extra);
                let b = Node::canonical(r, Target::Radical(pc, ps), b_others);
                (a, b)
            }
        }
    }
}

/// Second direction of a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    /// Lower `r`.
    Cyclotomic,
    /// Lower `others[i]`.
    Radical(usize),
}

impl Lattice {
    /// Evaluator with default options.
    pub fn new(p: Prime) -> Self {
        Lattice::with_options(p, LatticeOptions::default())
    }

    /// Evaluator with explicit options.
    pub fn with_options(p: Prime, options: LatticeOptions) -> Self {
        Lattice { p, options, memo: RwLock::new(HashMap::new()) }
    }

    /// The prime this evaluator works over.
    pub fn prime(&self) -> &Prime {
        &self.p
    }

    /// Number of cached nodes.
    pub fn cache_len(&self) -> usize {
        self.memo.read().map(|m| m.len()).unwrap_or(0)
    }

    /// `t_{n,k}` at `label` with `a_n` of class `vclass`.
    pub fn jump(&self, vclass: VClass, label: &FieldLabel, k: usize) -> Result<JumpValue> {
        self.eval(&Node::from_query(vclass, label, k)?)
    }

    /// Value of a node.
    pub fn eval(&self, node: &Node) -> Result<JumpValue> {
        let node = if self.options.clamp { node.clamped() } else { node.clone() };
        if self.options.memoize {
            if let Some(v) = self.memo.read().ok().and_then(|m| m.get(&node).cloned()) {
                return Ok(v);
            }
        }
        let v = self.compute(&node)?;
        if self.options.memoize {
            if let Ok(mut m) = self.memo.write() {
                m.insert(node, v.clone());
            }
        }
        Ok(v)
    }

    /// Value of a node using a specific partner for the first square.
    pub fn eval_via(&self, node: &Node, partner: Partner) -> Result<JumpValue> {
        if !self.partner_valid(node, partner) {
            return domain("partner not admissible at this node");
        }
        let (a, b) = node.square(partner);
        Ok(combine(&self.p, self.eval(&a)?, self.eval(&b)?))
    }

    fn partner_valid(&self, node: &Node, partner: Partner) -> bool {
        match partner {
            Partner::Cyclotomic => matches!(node.target, Target::Radical(..)) && node.r >= 2,
            Partner::Radical(i) => i < node.others.len(),
        }
    }

    fn compute(&self, node: &Node) -> Result<JumpValue> {
        let p = &self.p;
        match (node.target, node.others.is_empty(), node.r) {
            (_, _, 0) => Err(Error::Unreachable("node with r = 0".into())),
            (Target::Cyclotomic, _, 1) => Err(Error::Unreachable("cyclotomic target at r = 1".into())),
            (Target::Cyclotomic, true, r) => Ok(p.pow(r - 1) - 1u32),
            (Target::Radical(class, s), true, 1) => Ok(level_one(p, class, s)),
            _ => {
                let partner = self.pick(node);
                let (a, b) = node.square(partner);
                Ok(combine(p, self.eval(&a)?, self.eval(&b)?))
            }
        }
    }

    fn pick(&self, node: &Node) -> Partner {
        let last = node.others.len().checked_sub(1);
        match (self.options.pairing, node.target, last) {
            (Pairing::LastRadical, _, Some(i)) => Partner::Radical(i),
            (_, Target::Radical(..), _) if node.r >= 2 => Partner::Cyclotomic,
            _ => Partner::Radical(0),
        }
    }
}

fn level_one(p: &Prime, class: VClass, s: u32) -> JumpValue {
    match class {
        VClass::Divisible => p.pow(s) + 1u32 - p.value(),
        VClass::NonDivisible => p.pow(s),
    }
}

/// `a + (p - 1) max(0, a - b)`.
fn combine(p: &Prime, a: BigUint, b: BigUint) -> BigUint {
    if a > b {
        let gap = &a - &b;
        a + (p.value() - 1u32) * gap
    } else {
        a
    }
}
