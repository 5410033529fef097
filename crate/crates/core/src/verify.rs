//! Verification suites behind `operad-forge verify`.
//!
//! Each suite runs a list of named checks over an exhaustive range of
//! shapes and reports, per check, the number of cases examined and the first
//! failing case. Cases are visited in canonical order, so reports are
//! byte-for-byte reproducible; wall times are recorded only on request.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chain::Chain;
use crate::condensation::{
    breq, column_basis, hochschild_oracle, hochschild_word, nor_breq, quotient, tot_column,
    vertical_d, HochWord,
};
use crate::error::{Error, Result};
use crate::homology::{check_quasi_iso, Complex};
use crate::scalar::ScalarKind;
use crate::seq::{associativity_sides, compose, degree_assignments, enumerate_configs, Config};
use crate::shapes::{enumerate_surjections, Disk2, TreeMap2};
use crate::twisted::{
    diff_word, enumerate_words, expand_epsilon_composite, expanded_eps_diff, phi, phi_chain,
    phi_inverse, plug, word_diff, word_diff_chain, Word,
};
use crate::whiskering::{
    breq_associativity_sides, breq_compose, chain_map_defect, leibniz_defect, morphism_sides, proj,
    total_d, whisker,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    SeqAxioms,
    Whiskering,
    Contractibility,
    Column,
    Hochschild,
    Phi,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::SeqAxioms,
        Suite::Whiskering,
        Suite::Contractibility,
        Suite::Column,
        Suite::Hochschild,
        Suite::Phi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SeqAxioms => "seq-axioms",
            Suite::Whiskering => "whiskering",
            Suite::Contractibility => "contractibility",
            Suite::Column => "column",
            Suite::Hochschild => "hochschild",
            Suite::Phi => "phi",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Size bounds of a run.
///
/// `max_size` bounds `Σnᵢ` (for `hochschild`, `n₁ + n₂`), `max_degree` is the
/// depth `d` of the window `[−d, 0]` or the bound on `Σℓ_ν`, and `max_out`
/// bounds `|J|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub max_size: usize,
    pub max_degree: usize,
    pub max_out: usize,
    pub scalar: ScalarKind,
    pub timings: bool,
}

impl Bounds {
    pub fn new(max_size: usize, max_degree: usize, max_out: usize) -> Self {
        Bounds {
            max_size,
            max_degree,
            max_out,
            scalar: ScalarKind::Rational,
            timings: false,
        }
    }

    fn window(&self) -> RangeInclusive<i32> {
        -(self.max_degree as i32)..=0
    }

    fn to_json(&self) -> Value {
        json!({
            "max_size": self.max_size,
            "max_degree": self.max_degree,
            "max_out": self.max_out,
            "scalar": match self.scalar { ScalarKind::Rational => "rational", ScalarKind::Fp32003 => "fp32003" },
        })
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    /// The first failing case.
    pub witness: Option<Value>,
    pub millis: Option<u128>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "status": if self.passed() { "pass" } else { "fail" },
            "cases": self.cases,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        if let Some(ms) = self.millis {
            v["millis"] = json!(ms);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub bounds: Bounds,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "bounds": self.bounds.to_json(),
            "passed": self.passed(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Counts cases and keeps the first failure.
#[derive(Debug, Default)]
struct Tally {
    cases: usize,
    witness: Option<Value>,
}

impl Tally {
    fn case(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    /// Merges tallies of independent cells in canonical order.
    fn merge(parts: impl IntoIterator<Item = Result<Tally>>) -> Result<Tally> {
        let mut t = Tally::default();
        for p in parts {
            let p = p?;
            t.cases += p.cases;
            if t.witness.is_none() {
                t.witness = p.witness;
            }
        }
        Ok(t)
    }
}

struct Runner<'a> {
    bounds: &'a Bounds,
    checks: Vec<Check>,
}

impl Runner<'_> {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<Tally>) {
        let start = Instant::now();
        let (cases, witness) = match f() {
            Ok(t) => (t.cases, t.witness),
            Err(e) => (0, Some(json!({ "error": e.to_string() }))),
        };
        let millis = self.bounds.timings.then(|| start.elapsed().as_millis());
        self.checks.push(Check {
            name: name.to_string(),
            cases,
            witness,
            millis,
        });
    }
}

/// Runs one suite.
pub fn run(suite: Suite, bounds: &Bounds) -> VerifyReport {
    let mut r = Runner {
        bounds,
        checks: Vec::new(),
    };
    match suite {
        Suite::SeqAxioms => seq_axioms(&mut r),
        Suite::Whiskering => whiskering(&mut r),
        Suite::Contractibility => contractibility(&mut r),
        Suite::Column => column(&mut r),
        Suite::Hochschild => hochschild(&mut r),
        Suite::Phi => phi_suite(&mut r),
    }
    VerifyReport {
        suite,
        bounds: bounds.clone(),
        checks: r.checks,
    }
}

fn label(c: &Config) -> Value {
    c.to_json()
}

fn labels(cs: &[Config]) -> Value {
    Value::Array(cs.iter().map(label).collect())
}

fn chain_json(c: &Chain<Config>) -> Value {
    c.to_json(Config::label)
}

/// Configurations on `disk` with output `[out]` and `Σℓ_ν ≤ bound`.
pub fn configs_up_to(disk: &Disk2, bound: usize, out: usize) -> Vec<Config> {
    (0..=bound)
        .flat_map(|s| degree_assignments(disk.num_balls(), s))
        .flat_map(|deg| enumerate_configs(disk, &deg, out))
        .collect()
}

/// Basis of the brace complex on `disk` in degrees `≥ −bound`.
fn breq_basis(disk: &Disk2, bound: usize) -> Vec<Config> {
    configs_up_to(disk, bound, 0)
}

/// Basis of the normalised quotient in degrees `≥ −bound`.
fn nor_basis(disk: &Disk2, bound: usize) -> Vec<Config> {
    column_basis(disk, 0, bound, true)
        .into_values()
        .flatten()
        .filter(|c| c.total_degree() <= bound)
        .collect()
}

/// All choices of one element from each list.
fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for l in lists {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                l.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    acc
}

/// One configuration on each disk, the `k`-th with output `[outs[k]]`, with
/// `Σℓ_ν` summed over all of them at most `budget`.
fn level_choices(disks: &[Disk2], outs: &[usize], budget: usize) -> Vec<Vec<Config>> {
    let Some((d, rest)) = disks.split_first() else {
        return vec![Vec::new()];
    };
    let mut res = Vec::new();
    for c in configs_up_to(d, budget, outs[0]) {
        for mut tail in level_choices(rest, &outs[1..], budget - c.total_degree()) {
            tail.insert(0, c.clone());
            res.push(tail);
        }
    }
    res
}

/// Surjections `U → V` for all `U` with at most `size` balls, in canonical
/// order.
fn surjections_from(size: usize) -> Vec<TreeMap2> {
    let mut res = Vec::new();
    for u in Disk2::all_up_to_size(size) {
        for v in Disk2::all_up_to_size(u.num_balls()) {
            res.extend(enumerate_surjections(&u, &v));
        }
    }
    res
}

/// Composable pairs `T → S → Q` with `T` of at most `size` balls.
fn composable_pairs(size: usize) -> Vec<(TreeMap2, TreeMap2)> {
    let mut res = Vec::new();
    for sigma in surjections_from(size) {
        for q in Disk2::all_up_to_size(sigma.target().num_balls()) {
            for tau in enumerate_surjections(sigma.target(), &q) {
                res.push((sigma.clone(), tau));
            }
        }
    }
    res
}

fn fiber_disks(p: &TreeMap2) -> Result<Vec<Disk2>> {
    (0..p.target().num_balls())
        .map(|m| p.fiber(m).map(|f| f.disk))
        .collect()
}

fn map_json(p: &TreeMap2) -> Value {
    json!({ "source": p.source().to_json(), "target": p.target().to_json(), "map": p.to_json() })
}

/// Betti numbers with the requested scalar; with the prime field, rational
/// numbers are computed too and any disagreement is reported.
fn betti<L>(
    c: &Complex<L>,
    window: RangeInclusive<i32>,
    kind: ScalarKind,
) -> Result<std::result::Result<Vec<usize>, Value>>
where
    L: Clone + Eq + std::hash::Hash + Ord + fmt::Display + Send + Sync,
{
    let b: BTreeMap<i32, usize> = c.betti(window.clone(), kind)?;
    if kind == ScalarKind::Fp32003 {
        let q = c.betti(window, ScalarKind::Rational)?;
        if q != b {
            return Ok(Err(
                json!({ "fp32003": descending(&b), "rational": descending(&q) }),
            ));
        }
    }
    Ok(Ok(descending(&b)))
}

fn descending(b: &BTreeMap<i32, usize>) -> Vec<usize> {
    b.values().rev().cloned().collect()
}

/// `(1, 0, …, 0)` with `depth` zeros.
fn point(depth: usize) -> Vec<usize> {
    let mut v = vec![0; depth + 1];
    v[0] = 1;
    v
}

fn seq_axioms(r: &mut Runner) {
    let b = r.bounds.clone();
    let outs = b.max_out.max(1);
    r.check("enumeration-valid", || {
        let mut t = Tally::default();
        for d in Disk2::all_up_to_size(b.max_size) {
            for out in 0..outs {
                for c in configs_up_to(&d, b.max_degree, out) {
                    let v = c.validate();
                    t.case(
                        v.is_none(),
                        || json!({ "config": label(&c), "violation": v.unwrap().to_string() }),
                    );
                }
            }
        }
        Ok(t)
    });
    r.check("unit-axioms", || {
        let mut t = Tally::default();
        for d in Disk2::all_up_to_size(b.max_size) {
            let id = TreeMap2::identity(&d);
            let term = TreeMap2::terminal(&d);
            for out in 0..outs {
                for a in configs_up_to(&d, b.max_degree, out) {
                    let units: Vec<Config> = a.degrees().iter().map(|&l| Config::unit(l)).collect();
                    let left = compose(&id, &units, &a)?;
                    let right = compose(&term, std::slice::from_ref(&a), &Config::unit(out))?;
                    t.case(left == a && right == a, || json!({ "config": label(&a) }));
                }
            }
        }
        Ok(t)
    });
    r.check("associativity", || {
        let cells: Vec<Result<Tally>> = composable_pairs(b.max_size)
            .into_par_iter()
            .map(|(sigma, tau)| {
                let mut t = Tally::default();
                let q = tau.target().clone();
                let tau_fibers = fiber_disks(&tau)?;
                let sigma_fibers = fiber_disks(&sigma)?;
                for delta in configs_up_to(&q, b.max_degree, 0) {
                    for betas in level_choices(&tau_fibers, delta.degrees(), b.max_degree) {
                        // The color of each ball of S, read through the fibers of τ.
                        let mut colors = vec![0; sigma.target().num_balls()];
                        for (qb, beta) in betas.iter().enumerate() {
                            for (k, &s) in tau.fiber(qb)?.balls.iter().enumerate() {
                                colors[s] = beta.degrees()[k];
                            }
                        }
                        for alphas in level_choices(&sigma_fibers, &colors, b.max_degree) {
                            let (lhs, rhs) = associativity_sides(&sigma, &tau, &alphas, &betas, &delta)?;
                            t.case(lhs == rhs, || {
                                json!({
                                    "sigma": map_json(&sigma), "tau": map_json(&tau),
                                    "alphas": labels(&alphas), "betas": labels(&betas), "delta": label(&delta),
                                })
                            });
                        }
                    }
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
}

fn whiskering(r: &mut Runner) {
    let b = r.bounds.clone();
    let max_col = b.max_out.saturating_sub(1);
    r.check("chain-map", || {
        let cells: Vec<Result<Tally>> = Disk2::all_up_to_size(b.max_size)
            .into_par_iter()
            .map(|d| {
                let mut t = Tally::default();
                for a in breq_basis(&d, b.max_degree) {
                    for l in 0..=max_col {
                        let defect = chain_map_defect(&a, l)?;
                        t.case(defect.is_zero(), || json!({ "alpha": label(&a), "column": l, "defect": chain_json(&defect) }));
                    }
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("proj-section", || {
        let mut t = Tally::default();
        for d in Disk2::all_up_to_size(b.max_size) {
            for a in breq_basis(&d, b.max_degree) {
                let mut all = Chain::zero();
                for l in 0..=max_col {
                    all.add(&whisker(&a, l)?);
                }
                let back = all.map_linear(proj);
                t.case(
                    back == Chain::basis(a.clone()),
                    || json!({ "alpha": label(&a), "proj": chain_json(&back) }),
                );
            }
        }
        Ok(t)
    });
    r.check("proj-chain-map", || {
        let mut t = Tally::default();
        for d in Disk2::all_up_to_size(b.max_size) {
            for l in 0..=max_col {
                for x in column_basis(&d, l, b.max_degree, false)
                    .into_values()
                    .flatten()
                {
                    let lhs = total_d(&x).map_linear(proj);
                    let rhs = proj(&x).map_linear(|c| vertical_d(c, false));
                    t.case(lhs == rhs, || json!({ "element": label(&x) }));
                }
            }
        }
        Ok(t)
    });
    let inputs = b.max_degree.min(1);
    r.check("operad-identity", || {
        let cells: Vec<Result<Tally>> = surjections_from(b.max_size)
            .into_par_iter()
            .map(|p| {
                let mut t = Tally::default();
                let lists: Vec<Vec<Config>> = fiber_disks(&p)?.iter().map(|f| breq_basis(f, inputs)).collect();
                for parts in product(&lists) {
                    for beta in breq_basis(p.target(), inputs) {
                        for l in 0..=max_col.min(1) {
                            let (lhs, rhs) = morphism_sides(&p, &parts, &beta, l)?;
                            t.case(lhs == rhs, || {
                                json!({
                                    "map": map_json(&p), "parts": labels(&parts), "beta": label(&beta), "L": l,
                                    "lhs": chain_json(&lhs), "rhs": chain_json(&rhs),
                                })
                            });
                        }
                    }
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("breq-units", || {
        let mut t = Tally::default();
        for d in Disk2::all_up_to_size(b.max_size) {
            let id = TreeMap2::identity(&d);
            let term = TreeMap2::terminal(&d);
            let unit = Chain::basis(Config::unit(0));
            for a in breq_basis(&d, b.max_degree) {
                let units = vec![unit.clone(); d.num_balls()];
                let x = Chain::basis(a.clone());
                let ok = breq_compose(&id, &units, &x)? == x
                    && breq_compose(&term, std::slice::from_ref(&x), &unit)? == x;
                t.case(ok, || json!({ "alpha": label(&a) }));
            }
        }
        Ok(t)
    });
    r.check("breq-leibniz", || {
        let cells: Vec<Result<Tally>> = surjections_from(b.max_size)
            .into_par_iter()
            .map(|p| {
                let mut t = Tally::default();
                let lists: Vec<Vec<Config>> = fiber_disks(&p)?.iter().map(|f| breq_basis(f, inputs)).collect();
                for parts in product(&lists) {
                    for beta in breq_basis(p.target(), inputs) {
                        let defect = leibniz_defect(&p, &parts, &beta)?;
                        t.case(defect.is_zero(), || {
                            json!({ "map": map_json(&p), "parts": labels(&parts), "beta": label(&beta), "defect": chain_json(&defect) })
                        });
                    }
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("breq-associativity", || {
        let cells: Vec<Result<Tally>> = composable_pairs(b.max_size)
            .into_par_iter()
            .map(|(sigma, tau)| {
                let mut t = Tally::default();
                let alpha_lists: Vec<Vec<Config>> = fiber_disks(&sigma)?.iter().map(|f| breq_basis(f, inputs)).collect();
                let beta_lists: Vec<Vec<Config>> = fiber_disks(&tau)?.iter().map(|f| breq_basis(f, inputs)).collect();
                let alpha_choices = product(&alpha_lists);
                for betas in product(&beta_lists) {
                    for delta in breq_basis(tau.target(), inputs) {
                        for alphas in &alpha_choices {
                            let (lhs, rhs) = breq_associativity_sides(&sigma, &tau, alphas, &betas, &delta)?;
                            t.case(lhs == rhs, || {
                                json!({
                                    "sigma": map_json(&sigma), "tau": map_json(&tau),
                                    "alphas": labels(alphas), "betas": labels(&betas), "delta": label(&delta),
                                })
                            });
                        }
                    }
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
}

fn contractibility(r: &mut Runner) {
    let b = r.bounds.clone();
    r.check("nor-breq-homology", || {
        let cells: Vec<Result<Tally>> = Disk2::all_up_to_size(b.max_size)
            .into_par_iter()
            .map(|d| {
                let mut t = Tally::default();
                let c = nor_breq(&d, b.max_degree)?;
                match betti(&c, b.window(), b.scalar)? {
                    Ok(h) => t.case(
                        h == point(b.max_degree),
                        || json!({ "disk": d.to_json(), "betti": h }),
                    ),
                    Err(w) => t.case(
                        false,
                        || json!({ "disk": d.to_json(), "scalar-mismatch": w }),
                    ),
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("quotient-quasi-iso", || {
        let cells: Vec<Result<Tally>> = Disk2::all_up_to_size(b.max_size)
            .into_par_iter()
            .map(|d| {
                let mut t = Tally::default();
                let source = breq(&d, b.max_degree)?;
                let target = nor_breq(&d, b.max_degree)?;
                let report = check_quasi_iso(&source, &target, quotient, b.window())?;
                t.case(
                    report.is_quasi_iso(),
                    || json!({ "disk": d.to_json(), "failing_degrees": report.failing_degrees }),
                );
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
}

fn column(r: &mut Runner) {
    let b = r.bounds.clone();
    let max_col = b.max_out.saturating_sub(1);
    r.check("column-homology", || {
        let cells: Vec<(Disk2, usize, bool)> = Disk2::all_up_to_size(b.max_size)
            .into_iter()
            .flat_map(|d| (0..=max_col).flat_map(move |l| [(d.clone(), l, true), (d.clone(), l, false)]))
            .collect();
        let cells: Vec<Result<Tally>> = cells
            .into_par_iter()
            .map(|(d, l, normalised)| {
                let mut t = Tally::default();
                let c = tot_column(&d, l, b.max_degree, normalised)?;
                let witness = |extra: Value| json!({ "disk": d.to_json(), "column": l, "normalised": normalised, "result": extra });
                match betti(&c, b.window(), b.scalar)? {
                    Ok(h) => t.case(h == point(b.max_degree), || witness(json!(h))),
                    Err(w) => t.case(false, || witness(w)),
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
}

fn hoch_pairs(size: usize) -> Vec<(usize, usize)> {
    (1..size)
        .flat_map(|n1| (1..=size - n1).map(move |n2| (n1, n2)))
        .collect()
}

fn hochschild(r: &mut Runner) {
    let b = r.bounds.clone();
    let pairs = hoch_pairs(b.max_size);
    type Cell = (Disk2, Complex<Config>, Complex<HochWord>);
    let built: Vec<Result<Cell>> = pairs
        .par_iter()
        .map(|&(n1, n2)| {
            let d = Disk2::new(vec![n1, n2])?;
            Ok((
                d.clone(),
                nor_breq(&d, b.max_degree)?,
                hochschild_oracle(n1, n2, b.max_degree)?,
            ))
        })
        .collect();
    let built: Result<Vec<_>> = built.into_iter().collect();
    let built = match built {
        Ok(x) => x,
        Err(e) => {
            r.check("build", || Err(e));
            return;
        }
    };
    let lo = -(b.max_degree as i32) - 1;
    r.check("dimensions", || {
        let mut t = Tally::default();
        for (d, c, h) in &built {
            for q in lo..=0 {
                t.case(c.dim(q) == h.dim(q), || json!({ "disk": d.to_json(), "degree": q, "configs": c.dim(q), "oracle": h.dim(q) }));
            }
        }
        Ok(t)
    });
    r.check("bijection", || {
        let mut t = Tally::default();
        for (d, c, h) in &built {
            for q in lo..=0 {
                let mut image = Vec::with_capacity(c.dim(q));
                for m in c.basis(q) {
                    image.push(
                        hochschild_word(m)
                            .ok_or_else(|| Error::Shape(format!("{m} has no Hochschild word")))?,
                    );
                }
                image.sort();
                t.case(
                    image == h.basis(q),
                    || json!({ "disk": d.to_json(), "degree": q }),
                );
            }
        }
        Ok(t)
    });
    r.check("chain-map", || {
        let mut t = Tally::default();
        for (d, c, _) in &built {
            for q in lo + 1..=0 {
                for m in c.basis(q) {
                    let lhs = c.d_basis(m).map_linear(|x| {
                        Chain::basis(hochschild_word(x).expect("two-column configuration"))
                    });
                    let rhs = hochschild_word(m).expect("two-column configuration").d();
                    t.case(
                        lhs == rhs,
                        || json!({ "disk": d.to_json(), "config": label(m) }),
                    );
                }
            }
        }
        Ok(t)
    });
    r.check("oracle-homology", || {
        let mut t = Tally::default();
        for (d, _, h) in &built {
            match betti(h, b.window(), b.scalar)? {
                Ok(x) => t.case(
                    x == point(b.max_degree),
                    || json!({ "disk": d.to_json(), "betti": x }),
                ),
                Err(w) => t.case(
                    false,
                    || json!({ "disk": d.to_json(), "scalar-mismatch": w }),
                ),
            }
        }
        Ok(t)
    });
}

fn phi_suite(r: &mut Runner) {
    let b = r.bounds.clone();
    let disks = Disk2::all_up_to_size(b.max_size);
    r.check("bijection", || {
        let cells: Vec<Result<Tally>> = disks
            .par_iter()
            .map(|d| {
                let mut t = Tally::default();
                let basis = nor_basis(d, b.max_degree);
                let words = enumerate_words(d, b.max_degree);
                let mut image = Vec::with_capacity(basis.len());
                for m in &basis {
                    let w = phi(m)?;
                    t.case(
                        w.degree() == m.degree() && phi_inverse(&w)? == *m,
                        || json!({ "config": label(m) }),
                    );
                    image.push(w);
                }
                image.sort();
                t.case(
                    image == words,
                    || json!({ "disk": d.to_json(), "configs": basis.len(), "words": words.len() }),
                );
                for w in &words {
                    t.case(
                        phi(&phi_inverse(w)?)? == *w,
                        || json!({ "word": w.to_json() }),
                    );
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("chain-map", || {
        let cells: Vec<Result<Tally>> = disks
            .par_iter()
            .map(|d| {
                let mut t = Tally::default();
                for m in nor_basis(d, b.max_degree) {
                    let lhs = phi_chain(&vertical_d(&m, true))?;
                    let rhs = word_diff_chain(&phi_chain(&Chain::basis(m.clone()))?);
                    t.case(lhs == rhs, || json!({ "config": label(&m) }));
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("word-d-squared", || {
        let cells: Vec<Result<Tally>> = disks
            .par_iter()
            .map(|d| {
                let mut t = Tally::default();
                for w in enumerate_words(d, b.max_degree) {
                    t.case(
                        word_diff_chain(&word_diff(&w)).is_zero(),
                        || json!({ "word": w.to_json() }),
                    );
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("epsilon-expansion", || {
        let mut t = Tally::default();
        // Arguments are normal-form words over one lower column.
        let lower: Vec<Word> = (1..=2)
            .flat_map(|n| enumerate_words(&Disk2::new(vec![n]).expect("non-empty"), 0))
            .map(|w| w.word)
            .collect();
        let nested: Vec<Word> = enumerate_words(&Disk2::new(vec![1, 1]).expect("non-empty"), 1)
            .into_iter()
            .map(|w| w.word)
            .collect();
        let pool: Vec<Word> = lower.into_iter().chain(nested).collect();
        let mut arg_lists: Vec<Vec<Word>> = vec![Vec::new()];
        for a in &pool {
            arg_lists.push(vec![a.clone()]);
            for c in &pool {
                arg_lists.push(vec![a.clone(), c.clone()]);
            }
        }
        for args in arg_lists {
            let lhs = expand_epsilon_composite(1, 0, &args)?.map_linear(diff_word);
            let rhs = expanded_eps_diff(1, 0, &args)?;
            t.case(
                lhs == rhs,
                || json!({ "args": args.iter().map(|w| w.to_string()).collect::<Vec<_>>() }),
            );
        }
        Ok(t)
    });
    let inputs = b.max_degree.min(1);
    let size = b.max_size.min(3);
    r.check("plug-transport", || {
        let cells: Vec<Result<Tally>> = surjections_from(size)
            .into_par_iter()
            .map(|p| {
                let mut t = Tally::default();
                let lists: Vec<Vec<Config>> = fiber_disks(&p)?.iter().map(|f| breq_basis(f, inputs)).collect();
                for parts in product(&lists) {
                    for beta in breq_basis(p.target(), inputs) {
                        let degenerate = beta.is_degenerate() || parts.iter().any(Config::is_degenerate);
                        let chains: Vec<Chain<Config>> = parts.iter().map(|a| Chain::basis(a.clone())).collect();
                        let composite = breq_compose(&p, &chains, &Chain::basis(beta.clone()))?;
                        if degenerate {
                            // Degenerate inputs must compose into the degenerate ideal.
                            let stray = composite.map_linear(quotient);
                            t.case(stray.is_zero(), || json!({ "map": map_json(&p), "parts": labels(&parts), "beta": label(&beta) }));
                            continue;
                        }
                        let words: Vec<_> = chains.iter().map(phi_chain).collect::<Result<_>>()?;
                        let got = plug(&p, &words, &phi_chain(&Chain::basis(beta.clone()))?)?;
                        let expected = phi_chain(&composite.map_linear(quotient))?;
                        t.case(got == expected, || json!({ "map": map_json(&p), "parts": labels(&parts), "beta": label(&beta) }));
                    }
                }
                Ok(t)
            })
            .collect();
        Tally::merge(cells)
    });
    r.check("plug-units", || {
        let mut t = Tally::default();
        let unit = phi_chain(&Chain::basis(Config::unit(0)))?;
        for d in disks.iter().filter(|d| d.num_balls() <= size) {
            let id = TreeMap2::identity(d);
            let term = TreeMap2::terminal(d);
            for m in nor_basis(d, b.max_degree) {
                let w = phi_chain(&Chain::basis(m.clone()))?;
                let units = vec![unit.clone(); d.num_balls()];
                let ok = plug(&id, &units, &w)? == w
                    && plug(&term, std::slice::from_ref(&w), &unit)? == w;
                t.case(ok, || json!({ "config": label(&m) }));
            }
        }
        Ok(t)
    });
}
