//! Grid-quantified cross-checks between the closed forms, the lattice
//! evaluator, the filtration builder and the Herbrand bookkeeping.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::base::{t1_with, N1Query};
use crate::engine::{ClosedForms, Engine, ExponentVariant, JumpQuery};
use crate::error::{Error, Result};
use crate::filtration::{build_filtration_with, enumerate_jump_families, scale_tame, step_directions, Filtration};
use crate::herbrand::{phi_from_filtration, psi, tower_different_check_with, tower_step_differents};
use crate::model::{tame_multiplier, FieldLabel, JumpValue, Prime, RadicalSpec, TameFactor, VClass};
use crate::mutation::Constants;

/// Note attached to every report whose grid contains `p = 2`.
pub const P2_NOTE: &str = "p = 2 results assume the user-asserted reduction hypothesis";

/// The parameter box a verification run quantifies over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    /// Residue characteristics.
    pub primes: Vec<Prime>,
    /// Largest number of radicals.
    pub n_max: usize,
    /// Largest cyclotomic exponent; radical exponents range over `1..=r`.
    pub r_max: u32,
    /// Classes of the last radical.
    pub vclasses: Vec<VClass>,
    /// Also check the tame multipliers `D = 5` and `D = 14`.
    pub include_tame: bool,
    /// Pseudo-random rationals per spec in the Herbrand inverse check.
    pub herbrand_samples: usize,
    /// Seed of the Herbrand samples.
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            primes: vec![prime(3), prime(5)],
            n_max: 3,
            r_max: 6,
            vclasses: vec![VClass::Divisible, VClass::NonDivisible],
            include_tame: true,
            herbrand_samples: 1000,
            seed: 0x5eed,
        }
    }
}

fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap_or_else(|_| unreachable!("{p} is prime"))
}

impl GridSpec {
    /// Names accepted by [`GridSpec::preset`].
    pub const PRESETS: [&'static str; 4] = ["default", "quick", "extended", "empty"];

    /// A named grid: `default` (p in {3,5}, n ≤ 3, r ≤ 6), `quick` (p = 3, n ≤ 2,
    /// r ≤ 4), `extended` (default plus p = 2 and p = 7) or `empty`.
    pub fn preset(name: &str) -> Result<GridSpec> {
        let g = GridSpec::default();
        match name {
            "default" => Ok(g),
            "quick" => Ok(GridSpec { primes: vec![prime(3)], n_max: 2, r_max: 4, herbrand_samples: 50, ..g }),
            "extended" => Ok(GridSpec { primes: vec![prime(2), prime(3), prime(5), prime(7)], ..g }),
            "empty" => Ok(GridSpec { primes: Vec::new(), ..g }),
            _ => Err(Error::Domain(format!("unknown grid preset {name:?} (expected one of {:?})", Self::PRESETS))),
        }
    }

    /// Whether the grid quantifies over nothing.
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty() || self.vclasses.is_empty() || self.n_max == 0 || self.r_max == 0
    }

    /// Whether `p = 2` is part of the grid.
    pub fn has_p2(&self) -> bool {
        self.primes.iter().any(Prime::is_two)
    }

    /// Every valid spec of the grid with trivial tame part.
    pub fn specs(&self) -> Vec<RadicalSpec> {
        let mut out = Vec::new();
        for p in &self.primes {
            for &v in &self.vclasses {
                for n in 1..=self.n_max {
                    for r in 1..=self.r_max {
                        for s in exponent_vectors(n, r, v) {
                            let mut spec = RadicalSpec::new(p.clone(), r, s, v);
                            spec.p2_asserted = p.is_two();
                            out.push(spec);
                        }
                    }
                }
            }
        }
        out
    }

    /// Tame factors to combine with specs over `p`: trivial, then `D = 5` and
    /// `D = 14` when enabled and coprime to `p`.
    pub fn tame_factors(&self, p: &Prime) -> Vec<TameFactor> {
        let mut out = vec![TameFactor::trivial()];
        if self.include_tame {
            for text in ["5:1", "2:1,7:1"] {
                if let Ok(t) = TameFactor::parse(text) {
                    if t.validate(p).is_ok() {
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    /// Every jump query `t_{n,k}(spec)` of the grid with `k = 1` excluded at `r = 1`.
    pub fn queries(&self) -> Vec<JumpQuery> {
        self.specs()
            .into_iter()
            .flat_map(|spec| {
                let label = spec.full_label();
                let ks = (1..=spec.n() + 1).filter(move |&k| k >= 2 || label.r >= 2);
                let label = spec.full_label();
                ks.map(move |k| JumpQuery::new(spec.p.clone(), spec.vclass, label.clone(), k)).collect::<Vec<_>>()
            })
            .collect()
    }

    /// Number of jump queries, reported before a run.
    pub fn query_count(&self) -> usize {
        self.queries().len()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.primes.iter().map(|p| p.value().to_string()).collect();
        let vs: Vec<&str> = self.vclasses.iter().map(|v| v.short_name()).collect();
        write!(
            f,
            "p={{{}}} n<={} r<={} vclass={{{}}} tame={}",
            ps.join(","),
            self.n_max,
            self.r_max,
            vs.join(","),
            self.include_tame
        )
    }
}

/// Exponent vectors of length `n` with entries in `1..=r`, sorted as the class requires.
pub fn exponent_vectors(n: usize, r: u32, vclass: VClass) -> Vec<Vec<u32>> {
    let sorted = match vclass {
        VClass::Divisible => n,
        VClass::NonDivisible => n - 1,
    };
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for i in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                let lo = if i < sorted { prefix.last().copied().unwrap_or(1) } else { 1 };
                (lo..=r).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    /// Name of the check.
    pub check: String,
    /// The quantified instance.
    pub query: String,
    /// The value required by the check.
    pub expected: String,
    /// The value observed.
    pub got: String,
}

/// Outcome of a verification run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Number of individual assertions evaluated.
    pub checks_run: u64,
    /// Failed assertions, sorted.
    pub failures: Vec<Failure>,
    /// Per-check `(run, failed)` counts.
    pub by_check: BTreeMap<String, (u64, u64)>,
    /// Caveats attached to the run.
    pub notes: Vec<String>,
}

impl Report {
    /// Whether every assertion held.
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one assertion.
    pub fn record(&mut self, check: &str, ok: bool, query: impl FnOnce() -> (String, String, String)) {
        self.checks_run += 1;
        let entry = self.by_check.entry(check.to_string()).or_default();
        entry.0 += 1;
        if !ok {
            entry.1 += 1;
            let (query, expected, got) = query();
            self.failures.push(Failure { check: check.to_string(), query, expected, got });
        }
    }

    /// Adds a caveat.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
        self.notes.sort();
        self.notes.dedup();
    }

    /// Combines two reports. The operation is associative and commutative.
    pub fn merge(mut self, other: Report) -> Report {
        self.checks_run += other.checks_run;
        self.failures.extend(other.failures);
        self.failures.sort();
        for (name, (run, failed)) in other.by_check {
            let entry = self.by_check.entry(name).or_default();
            entry.0 += run;
            entry.1 += failed;
        }
        self.notes.extend(other.notes);
        self.notes.sort();
        self.notes.dedup();
        self
    }

    /// Line-oriented text form listing at most `max_failures` failures.
    pub fn to_text(&self, max_failures: usize) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "status {status}");
        let _ = writeln!(out, "checks_run {}", self.checks_run);
        let _ = writeln!(out, "failures {}", self.failures.len());
        for (name, (run, failed)) in &self.by_check {
            let _ = writeln!(out, "check {name} run={run} failed={failed}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "note {note}");
        }
        for f in self.failures.iter().take(max_failures) {
            let _ = writeln!(out, "fail {} | {} | expected {} | got {}", f.check, f.query, f.expected, f.got);
        }
        out
    }
}

fn show(v: &Result<JumpValue>) -> String {
    match v {
        Ok(x) => x.to_string(),
        Err(e) => format!("{}: {e}", e.kind()),
    }
}

fn describe(q: &JumpQuery) -> String {
    format!("p={} {} t_{{{},{}}}{}", q.p.value(), q.vclass.short_name(), q.label.n(), q.k, q.label)
}

/// The checks, parameterized by the closed-form constants and exponent reading
/// under test. The lattice evaluator is never mutated.
#[derive(Debug)]
pub struct Oracle {
    /// Constants of the closed forms.
    pub constants: Constants,
    /// Exponent reading of the general closed form.
    pub variant: ExponentVariant,
    engine: Engine,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::new(Constants::EXACT, ExponentVariant::default())
    }
}

impl Oracle {
    /// An oracle checking the given closed forms.
    pub fn new(constants: Constants, variant: ExponentVariant) -> Self {
        Oracle { constants, variant, engine: Engine::new() }
    }

    /// The shared lattice engine.
    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    fn closed(&self, p: &Prime) -> ClosedForms {
        ClosedForms::with(p.clone(), self.constants, self.variant)
    }

    /// Path B value.
    pub fn lattice(&self, q: &JumpQuery) -> Result<JumpValue> {
        self.engine.t_nk_rec(q)
    }

    /// Closed-form value where the closed forms apply, lattice value elsewhere.
    pub fn preferred(&self, q: &JumpQuery) -> Result<JumpValue> {
        match self.closed(&q.p).jump(q) {
            Err(Error::Domain(_)) => self.lattice(q),
            other => other,
        }
    }

    fn preferred_at(&self, spec: &RadicalSpec, label: FieldLabel, k: usize) -> Result<JumpValue> {
        self.preferred(&JumpQuery::new(spec.p.clone(), spec.vclass, label, k))
    }

    fn base_note(&self, g: &GridSpec) -> Report {
        let mut r = Report::default();
        if g.has_p2() {
            r.note(P2_NOTE);
        }
        r
    }

    /// The one-radical closed forms against the lattice on `1 <= a, b <= r_max`.
    pub fn check_n1_table(&self, g: &GridSpec) -> Report {
        let mut cases = Vec::new();
        for p in &g.primes {
            for &v in &g.vclasses {
                for a in 1..=g.r_max {
                    for b in 1..=g.r_max {
                        for k in 1..=2usize {
                            if !(k == 1 && a == 1) {
                                cases.push(N1Query { p: p.clone(), a, b, k, vclass: v });
                            }
                        }
                    }
                }
            }
        }
        let report = cases
            .par_iter()
            .map(|q| {
                let mut r = Report::default();
                let got = t1_with(&self.constants, q).map(|a| a.value);
                let want = self.engine.lattice(&q.p).jump(q.vclass, &FieldLabel::new(q.a, vec![q.b]), q.k);
                r.record("n1_table", got.is_ok() && got == want, || {
                    let d = format!("p={} {} t_{{1,{}}}({},{})", q.p.value(), q.vclass.short_name(), q.k, q.a, q.b);
                    (d, show(&want), show(&got))
                });
                r
            })
            .reduce(Report::default, Report::merge);
        self.base_note(g).merge(report)
    }

    /// Named closed-form values.
    pub fn check_named_values(&self, g: &GridSpec) -> Report {
        let mut r = self.base_note(g);
        for p in &g.primes {
            let pv = BigInt::from(p.value().clone());
            let big = |x: BigInt| x.to_biguint().unwrap_or_default();
            let q1 = |a: u32, b: u32, k: usize, v: VClass| N1Query { p: p.clone(), a, b, k, vclass: v };
            let mut expect = |name: String, got: Result<JumpValue>, want: BigUint| {
                r.record("named_values", got.as_ref().ok() == Some(&want), || (name, want.to_string(), show(&got)));
            };
            let n1 = |q: N1Query| t1_with(&self.constants, &q).map(|a| a.value);
            expect(format!("p={pv} div t_{{1,2}}(1,1)"), n1(q1(1, 1, 2, VClass::Divisible)), BigUint::one());
            expect(format!("p={pv} nondiv t_{{1,2}}(1,1)"), n1(q1(1, 1, 2, VClass::NonDivisible)), p.value().clone());
            for rr in 2..=g.r_max.max(2) {
                let want = big(BigInt::from(2) * &pv - 1);
                expect(format!("p={pv} nondiv t_{{1,2}}({rr},1)"), n1(q1(rr, 1, 2, VClass::NonDivisible)), want);
            }
            for rr in 2..=g.r_max {
                let want = big(num_traits::pow(pv.clone(), rr as usize - 1) - 1);
                let got = crate::base::cyclotomic_jump_with(&self.constants, p, rr);
                expect(format!("p={pv} cyclotomic({rr})"), got, want);
            }
            for n in 1..=g.n_max {
                let un = big(BigInt::from(2) * num_traits::pow(pv.clone(), n)
                    - BigInt::from(2) * num_traits::pow(pv.clone(), n - 1)
                    + 1);
                for rr in 2..=g.r_max.max(2) {
                    let label = FieldLabel::new(rr, vec![1; n]);
                    let q = JumpQuery::new(p.clone(), VClass::NonDivisible, label.clone(), n + 1);
                    expect(format!("p={pv} u_{n}(1) at r={rr}"), self.closed(p).jump(&q), un.clone());
                }
                for rr in 1..=g.r_max {
                    for &v in g.vclasses.iter().filter(|&&v| n >= 2 || v == VClass::Divisible) {
                        let q = JumpQuery::new(p.clone(), v, FieldLabel::new(rr, vec![1; n]), 2);
                        expect(
                            format!("p={pv} {} t_{{{n},2}}({rr},1,...,1)", v.short_name()),
                            self.preferred(&q),
                            BigUint::one(),
                        );
                    }
                }
            }
        }
        r
    }

    /// Closed forms equal the lattice wherever the closed forms apply.
    pub fn check_path_equality(&self, g: &GridSpec) -> Report {
        let report = g
            .queries()
            .par_iter()
            .map(|q| {
                let mut r = Report::default();
                let want = self.lattice(q);
                let cf = self.closed(&q.p);
                let mut compare = |name: &str, got: Result<JumpValue>| {
                    if matches!(got, Err(Error::Domain(_))) {
                        return;
                    }
                    r.record(name, want.is_ok() && got == want, || (describe(q), show(&want), show(&got)));
                };
                compare("path_equality", cf.jump(q));
                if q.k == 1 && q.vclass == VClass::NonDivisible && q.label.n() >= 2 {
                    compare("path_equality_lowering_last", cf.t_n1_lowering_last(q));
                }
                r
            })
            .reduce(Report::default, Report::merge);
        self.base_note(g).merge(report)
    }

    /// `p t_l(X↓k) + t_k(X) = p t_k(X↓l) + t_l(X)` for every grid label `X` and
    /// every pair of admissible directions `l < k`.
    pub fn check_square_identity(&self, g: &GridSpec) -> Report {
        let report = g
            .specs()
            .par_iter()
            .map(|spec| {
                let mut r = Report::default();
                let x = spec.full_label();
                let n = spec.n();
                let dirs: Vec<usize> = (1..=n + 1).filter(|&k| k >= 2 || x.r >= 2).collect();
                let pv = BigInt::from(spec.p.value().clone());
                for (i, &l) in dirs.iter().enumerate() {
                    for &k in &dirs[i + 1..] {
                        let (Ok(xk), Ok(xl)) = (x.shift_index(k), x.shift_index(l)) else { continue };
                        let vals = [
                            self.preferred_at(spec, xk, l),
                            self.preferred_at(spec, x.clone(), k),
                            self.preferred_at(spec, xl, k),
                            self.preferred_at(spec, x.clone(), l),
                        ];
                        let query = || format!("p={} {} {x} l={l} k={k}", pv, spec.vclass.short_name());
                        match vals.iter().cloned().collect::<Result<Vec<_>>>() {
                            Ok(v) => {
                                let lhs = &pv * BigInt::from(v[0].clone()) + BigInt::from(v[1].clone());
                                let rhs = &pv * BigInt::from(v[2].clone()) + BigInt::from(v[3].clone());
                                r.record("square_identity", lhs == rhs, || (query(), rhs.to_string(), lhs.to_string()));
                            }
                            Err(e) => {
                                r.record("square_identity", false, || (query(), "four jumps".into(), e.to_string()))
                            }
                        }
                    }
                }
                r
            })
            .reduce(Report::default, Report::merge);
        self.base_note(g).merge(report)
    }

    /// Strict growth along each coordinate and the ordering inequalities between
    /// neighbouring tower steps.
    pub fn check_monotonicity(&self, g: &GridSpec) -> Report {
        let report = g
            .specs()
            .par_iter()
            .map(|spec| {
                let mut r = Report::default();
                self.monotone_directions(g, spec, &mut r);
                self.ordering_bounds(spec, &mut r);
                r
            })
            .reduce(Report::default, Report::merge);
        self.base_note(g).merge(report)
    }

    fn monotone_directions(&self, g: &GridSpec, spec: &RadicalSpec, r: &mut Report) {
        let x = spec.full_label();
        let tag = |dir: &str| format!("p={} {} {x} along {dir}", spec.p.value(), spec.vclass.short_name());
        let mut run = |dir: String, seq: Vec<Result<JumpValue>>| {
            let ok = seq.windows(2).all(|w| matches!((&w[0], &w[1]), (Ok(a), Ok(b)) if a < b));
            r.record("monotonicity", ok, || {
                let got: Vec<String> = seq.iter().map(show).collect();
                (dir, "strictly increasing".into(), got.join(","))
            });
        };
        if x.r == g.r_max {
            let seq = (2..=g.r_max).map(|rr| self.preferred_at(spec, FieldLabel::new(rr, x.s.clone()), 1)).collect();
            run(tag("r"), seq);
        }
        for i in 0..spec.n() {
            if x.s[i] != x.r {
                continue;
            }
            let seq = (1..=g.r_max)
                .map(|e| {
                    let mut s = x.s.clone();
                    s[i] = e;
                    self.preferred_at(spec, FieldLabel::new(x.r, s), i + 2)
                })
                .collect();
            run(tag(&format!("s_{}", i + 1)), seq);
        }
    }

    fn ordering_bounds(&self, spec: &RadicalSpec, r: &mut Report) {
        let n = spec.n();
        let s = &spec.s;
        let sn = s[n - 1];
        let mut less = |name: &str, a: Result<JumpValue>, b: Result<JumpValue>| {
            let ok = matches!((&a, &b), (Ok(x), Ok(y)) if x < y);
            r.record("ordering_bounds", ok, || {
                (format!("p={} {} {name}", spec.p.value(), FieldLabel::new(spec.r, s.clone())), show(&b), show(&a))
            });
        };
        match spec.vclass {
            VClass::Divisible => {
                let mut up = s.clone();
                up[n - 1] = sn + 1;
                let a = self.preferred_at(spec, FieldLabel::new(sn + 1, s.clone()), 1);
                let b = self.preferred_at(spec, FieldLabel::new(sn + 1, up), n + 1);
                less("t_{n,1}(s_n+1,s) < t_{n,n+1}(s_n+1,..,s_n+1)", a.clone(), b);
                let c = self.preferred_at(spec, FieldLabel::new(sn, s.clone()), n + 1);
                less("t_{n,n+1}(s_n,s) < t_{n,1}(s_n+1,s)", c, a);
            }
            VClass::NonDivisible => {
                if s[..n - 1].iter().any(|&x| x > sn) {
                    return;
                }
                let a = self.preferred_at(spec, FieldLabel::new(sn + 2, s.clone()), 1);
                let b = self.preferred_at(spec, FieldLabel::new(sn + 1, s.clone()), n + 1);
                less("t_{n,n+1}(s+1,s',s) < t_{n,1}(s+2,s',s)", b.clone(), a);
                let mut down = s.clone();
                down[n - 1] = sn - 1;
                let c = self.preferred_at(spec, FieldLabel::new(sn + 1, down), 1);
                less("t_{n,1}(s+1,s',s-1) < t_{n,n+1}(s+1,s',s)", c, b);
            }
        }
    }

    /// Per spec and tame factor: strictly increasing jumps, family/tower
    /// agreement, telescoping orders, the different identities at every tower
    /// node, and linearity of tame scaling.
    pub fn check_filtration_consistency(&self, g: &GridSpec) -> Report {
        let report = g
            .specs()
            .par_iter()
            .map(|spec| {
                let mut r = Report::default();
                self.filtration_checks(g, spec, &mut r);
                r
            })
            .reduce(Report::default, Report::merge);
        self.base_note(g).merge(report)
    }

    fn filtration_checks(&self, g: &GridSpec, spec: &RadicalSpec, r: &mut Report) {
        let name =
            |extra: &str| format!("p={} {} {}{extra}", spec.p.value(), spec.vclass.short_name(), spec.full_label());
        let wild = match build_filtration_with(&self.engine, spec) {
            Ok(f) => f,
            Err(e) => {
                r.record("filtration_build", false, || (name(""), "a filtration".into(), e.to_string()));
                return;
            }
        };
        r.record("filtration_build", true, || unreachable!());
        let jumps = wild.jumps();
        r.record("filtration_strict", jumps.windows(2).all(|w| w[0] < w[1]), || {
            (name(""), "strictly increasing".into(), format!("{jumps:?}"))
        });

        let fams = enumerate_jump_families(spec)
            .and_then(|fs| fs.iter().map(|(_, q)| self.preferred(q)).collect::<Result<Vec<_>>>());
        let tower = wild.nonzero_jumps();
        let (ok, got) = match fams {
            Ok(mut v) => {
                v.sort();
                (v == tower, format!("{v:?}"))
            }
            Err(e) => (false, e.to_string()),
        };
        r.record("family_tower", ok, || (name(""), format!("{tower:?}"), got));

        self.telescoping(&wild, r, &name(""));

        for t in g.tame_factors(&spec.p) {
            let tamed = if t.is_trivial() {
                wild.clone()
            } else {
                let sp = RadicalSpec { tame: t.clone(), ..spec.clone() };
                match build_filtration_with(&self.engine, &sp) {
                    Ok(f) => f,
                    Err(e) => {
                        r.record("filtration_build", false, || (name(" tamed"), "a filtration".into(), e.to_string()));
                        continue;
                    }
                }
            };
            let d = tame_multiplier(&t);
            let label = name(&format!(" D={d}"));
            if !t.is_trivial() {
                let scaled: Vec<JumpValue> = wild.nonzero_jumps().iter().map(|x| x * &d).collect();
                let ok = tamed.nonzero_jumps() == scaled
                    && tamed.levels.len() == wild.levels.len()
                    && tamed.levels.iter().zip(&wild.levels).all(|(a, b)| a.fixed_field == b.fixed_field)
                    && tamed.g0_order == &wild.g0_order * &d
                    && tamed == scale_tame(&wild, &t);
                r.record("tame_scaling", ok, || {
                    (label.clone(), format!("{scaled:?}"), format!("{:?}", tamed.nonzero_jumps()))
                });
            }
            let mut nodes: Vec<FieldLabel> = tamed.levels.iter().map(|l| l.fixed_field.clone()).collect();
            nodes.push(spec.full_label());
            for node in nodes {
                let ok = tower_different_check_with(&self.engine, &tamed, &node);
                r.record("tower_different", matches!(ok, Ok(true)), || {
                    (format!("{label} at {node}"), "true".into(), format!("{ok:?}"))
                });
            }
            let steps = tower_step_differents(&self.engine, &tamed);
            r.record("step_different", matches!(steps, Ok(None)), || {
                (label.clone(), "(d-1)(t+1) at every step".into(), format!("{steps:?}"))
            });
            self.herbrand_breakpoints(&tamed, r, &label);
        }
    }

    fn telescoping(&self, f: &Filtration, r: &mut Report, name: &str) {
        let p = f.prime();
        let mut ok =
            &f.g0_order / &f.g1_order == (p.value() - 1u32) * &f.tame_degree && (&f.g0_order % &f.g1_order).is_zero();
        let mut nodes: Vec<FieldLabel> = f.levels.iter().skip(1).map(|l| l.fixed_field.clone()).collect();
        nodes.push(f.spec.full_label());
        for (j, pair) in nodes.windows(2).enumerate() {
            let dirs = step_directions(&pair[0], &pair[1]);
            let unit = pair[0].le(&pair[1]) && pair[1].weight() == pair[0].weight() + dirs.len() as u64;
            let ratio =
                &f.levels[j + 1].group_order / f.levels.get(j + 2).map_or(BigUint::one(), |l| l.group_order.clone());
            ok &= unit && ratio == p.pow(dirs.len() as u32);
        }
        r.record("telescoping", ok, || {
            (name.to_string(), "orders drop by the step degrees".into(), format!("{:?}", f.orders()))
        });
    }

    fn herbrand_breakpoints(&self, f: &Filtration, r: &mut Report, name: &str) {
        let phi = phi_from_filtration(f);
        let mut ok = phi.is_concave() && phi.slopes.iter().all(|s| *s > BigRational::zero());
        for (x, y) in &phi.breakpoints {
            let back = psi(&phi, y);
            ok &= back == *x && phi.eval(&back) == *y && phi.eval(x) == *y;
        }
        r.record("herbrand_breakpoints", ok, || {
            (name.to_string(), "psi and phi inverse at breakpoints".into(), "mismatch".into())
        });
    }

    /// `ψ(φ(u)) = u` and `φ(ψ(v)) = v` at `herbrand_samples` seeded
    /// pseudo-random rationals per spec.
    pub fn check_herbrand(&self, g: &GridSpec) -> Report {
        let report = g
            .specs()
            .par_iter()
            .map(|spec| {
                let mut r = Report::default();
                let name = format!("p={} {} {}", spec.p.value(), spec.vclass.short_name(), spec.full_label());
                match build_filtration_with(&self.engine, spec) {
                    Ok(f) => self.herbrand_samples(&f, g.herbrand_samples, g.seed, &mut r, &name),
                    Err(e) => {
                        r.record("herbrand_inverse", false, || (name.clone(), "a filtration".into(), e.to_string()))
                    }
                }
                r
            })
            .reduce(Report::default, Report::merge);
        self.base_note(g).merge(report)
    }

    fn herbrand_samples(&self, f: &Filtration, samples: usize, seed: u64, r: &mut Report, name: &str) {
        let phi = phi_from_filtration(f);
        let top = f.levels.last().map_or(BigInt::one(), |l| BigInt::from(l.jump.clone()) + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_label(f));
        let mut bad = None;
        for _ in 0..samples {
            let den = BigInt::from(rng.gen_range(1u32..=997));
            let num = rng.gen_bigint_range(&-&den, &((&top * 2 + 1) * &den));
            let u = BigRational::new(num, den);
            let forward = psi(&phi, &phi.eval(&u)) == u;
            let backward = phi.eval(&psi(&phi, &u)) == u;
            if !(forward && backward) {
                bad = Some(u);
                break;
            }
        }
        r.record("herbrand_inverse", bad.is_none(), || {
            (name.to_string(), "psi(phi(u)) = u = phi(psi(u))".into(), format!("{bad:?}"))
        });
    }

    /// Runs every check.
    pub fn run_all(&self, g: &GridSpec) -> Report {
        if g.is_empty() {
            let mut r = Report::default();
            r.note("empty grid: no checks run");
            return r;
        }
        [
            self.check_named_values(g),
            self.check_n1_table(g),
            self.check_path_equality(g),
            self.check_square_identity(g),
            self.check_monotonicity(g),
            self.check_filtration_consistency(g),
            self.check_herbrand(g),
        ]
        .into_iter()
        .fold(Report::default(), Report::merge)
    }
}

fn hash_label(f: &Filtration) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u64| {
        h ^= x;
        h = h.wrapping_mul(0x0100_0000_01b3);
    };
    feed(f.spec.p.to_u64().unwrap_or(0));
    feed(f.spec.r as u64);
    f.spec.s.iter().for_each(|&x| feed(x as u64));
    feed(f.spec.vclass as u64);
    f.tame_degree.to_u64_digits().iter().for_each(|&x| feed(x));
    h
}

/// [`Oracle::check_square_identity`] with exact constants.
pub fn check_square_identity(g: &GridSpec) -> Report {
    Oracle::default().check_square_identity(g)
}

/// [`Oracle::check_path_equality`] with exact constants.
pub fn check_path_equality(g: &GridSpec) -> Report {
    Oracle::default().check_path_equality(g)
}

/// [`Oracle::check_filtration_consistency`] with exact constants.
pub fn check_filtration_consistency(g: &GridSpec) -> Report {
    Oracle::default().check_filtration_consistency(g)
}

/// [`Oracle::check_monotonicity`] with exact constants.
pub fn check_monotonicity(g: &GridSpec) -> Report {
    Oracle::default().check_monotonicity(g)
}

/// [`Oracle::run_all`] with exact constants.
pub fn run_all(g: &GridSpec) -> Report {
    Oracle::default().run_all(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::Mutation;

    #[test]
    fn exponent_vectors_counts() {
        assert_eq!(exponent_vectors(2, 3, VClass::Divisible).len(), 6);
        assert_eq!(exponent_vectors(2, 3, VClass::NonDivisible).len(), 9);
        assert_eq!(exponent_vectors(1, 4, VClass::Divisible), vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn merge_is_commutative_and_associative() {
        let mk = |name: &str, ok: bool| {
            let mut r = Report::default();
            r.record(name, ok, || (name.into(), "a".into(), "b".into()));
            r
        };
        let (a, b, c) = (mk("x", false), mk("y", true), mk("z", false));
        assert_eq!(a.clone().merge(b.clone()), b.clone().merge(a.clone()));
        assert_eq!(a.clone().merge(b.clone()).merge(c.clone()), a.merge(b.merge(c)));
    }

    #[test]
    fn square_example() {
        let g = GridSpec {
            primes: vec![prime(3)],
            n_max: 1,
            r_max: 2,
            vclasses: vec![VClass::Divisible],
            ..GridSpec::default()
        };
        let r = check_square_identity(&g);
        assert!(r.passed());
        assert!(r.checks_run >= 1);
    }

    #[test]
    fn quick_grid_passes() {
        let r = run_all(&GridSpec::preset("quick").unwrap());
        assert!(r.passed(), "{}", r.to_text(20));
    }

    #[test]
    fn empty_grid_runs_nothing() {
        let r = run_all(&GridSpec::preset("empty").unwrap());
        assert!(r.passed());
        assert_eq!(r.checks_run, 0);
    }

    #[test]
    fn wrong_exponent_reading_fails() {
        let g = GridSpec::preset("quick").unwrap();
        let r = Oracle::new(Constants::EXACT, ExponentVariant::Typeset).check_path_equality(&g);
        assert!(!r.passed());
    }

    #[test]
    fn mutation_is_detected() {
        let g = GridSpec::preset("quick").unwrap();
        let r = Oracle::new(Constants::mutated(Mutation::T12Const), ExponentVariant::default()).run_all(&g);
        assert!(!r.passed());
    }
}
