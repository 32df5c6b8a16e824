//! General-`n` jump evaluation along two independent paths: closed forms
//! ([`closed`]) and a memoized square-rule evaluator ([`lattice`]).

pub mod closed;
pub mod lattice;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use closed::{Canonical, ClosedForms, ExponentVariant, TauQuery};
pub use lattice::{Lattice, LatticeOptions, Node, Pairing, Partner, Target};

use crate::error::Result;
use crate::model::{FieldLabel, JumpValue, Prime, VClass};

/// `t_{n,k}(label)` with `a_1..a_{n-1}` Divisible and `a_n` of class `vclass`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JumpQuery {
    /// Residue characteristic.
    pub p: Prime,
    /// Class of `a_n`.
    pub vclass: VClass,
    /// Top field of the step.
    pub label: FieldLabel,
    /// Direction: 1 lowers `r`, `i + 1` lowers `s_i`.
    pub k: usize,
}

impl JumpQuery {
    /// Builds a query.
    pub fn new(p: Prime, vclass: VClass, label: FieldLabel, k: usize) -> Self {
        JumpQuery { p, vclass, label, k }
    }
}

/// Shared evaluator holding one memoized lattice per prime.
#[derive(Debug, Default)]
pub struct Engine {
    lattices: Mutex<HashMap<Prime, Arc<Lattice>>>,
}

impl Engine {
    /// Empty engine.
    pub fn new() -> Self {
        Engine::default()
    }

    /// The memoized lattice for `p`.
    pub fn lattice(&self, p: &Prime) -> Arc<Lattice> {
        let mut map = self.lattices.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(p.clone()).or_insert_with(|| Arc::new(Lattice::new(p.clone()))).clone()
    }

    /// Path B: total on every admissible query.
    pub fn t_nk_rec(&self, q: &JumpQuery) -> Result<JumpValue> {
        self.lattice(&q.p).jump(q.vclass, &q.label, q.k)
    }

    /// Path A: closed forms, failing outside their windows.
    pub fn closed(&self, q: &JumpQuery) -> Result<JumpValue> {
        ClosedForms::new(q.p.clone()).jump(q)
    }

    /// The jump, computed by path B.
    pub fn jump(&self, q: &JumpQuery) -> Result<JumpValue> {
        self.t_nk_rec(q)
    }
}

/// Path B with a fresh cache.
pub fn t_nk_rec(q: &JumpQuery) -> Result<JumpValue> {
    Lattice::new(q.p.clone()).jump(q.vclass, &q.label, q.k)
}

/// Path A for `k >= 2`.
pub fn t_nk_closed(q: &JumpQuery) -> Result<JumpValue> {
    ClosedForms::new(q.p.clone()).t_nk_closed(q)
}

/// Path A for `k = 1`.
pub fn t_n1(q: &JumpQuery) -> Result<JumpValue> {
    ClosedForms::new(q.p.clone()).t_n1(q)
}

/// `tau_n(l)` by closed forms.
pub fn tau(q: &TauQuery) -> Result<JumpValue> {
    ClosedForms::new(q.p.clone()).tau_query(q)
}
