//! The Δ-colored 2-operad `seq` in sets.
//!
//! An element of `seq(U)({I_ν}; J)` is a total order on the disjoint union
//! of the color ordinals `I_ν = [ℓ_ν]` together with a monotone map `W` to
//! the output ordinal `J`. The total order is stored as a token sequence.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{shape, Error, Result};
use crate::shapes::{monotone_maps, Ball, Disk2, TreeMap2};

/// The element `i` of the color ordinal of ball `ball`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub ball: usize,
    pub idx: usize,
}

/// A configuration. Field order fixes the canonical ordering: disk, then
/// degrees, then output, then token sequence, then `W`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config {
    disk: Disk2,
    degrees: Vec<usize>,
    out: usize,
    order: Vec<Token>,
    w: Vec<usize>,
}

/// The first failed condition, with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// (1): tokens of `ball` out of order.
    ColorOrder { ball: Ball },
    /// (2): `upper` starts before `lower` ends in one column.
    SameColumn { lower: Ball, upper: Ball },
    /// (3): `inner` is not contained in a single gap of `outer`.
    Brace { inner: Ball, outer: Ball },
    /// `W` decreases at `position`.
    WNotMonotone { position: usize },
    /// `W` leaves the output ordinal at `position`.
    WOutOfRange { position: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColorOrder { ball } => write!(f, "(1) tokens of {ball} out of order"),
            Violation::SameColumn { lower, upper } => {
                write!(f, "(2) {upper} interleaves with {lower}")
            }
            Violation::Brace { inner, outer } => write!(f, "(3) {inner} is split by {outer}"),
            Violation::WNotMonotone { position } => write!(f, "W decreases at position {position}"),
            Violation::WOutOfRange { position } => {
                write!(f, "W out of range at position {position}")
            }
        }
    }
}

/// Checks that the tokens are exactly `{(ν, i) : i ≤ ℓ_ν}` and `W` has the right length.
fn check_well_formed(disk: &Disk2, degrees: &[usize], order: &[Token], w: &[usize]) -> Result<()> {
    if degrees.len() != disk.num_balls() {
        return shape(format!(
            "{} degrees given for {} balls",
            degrees.len(),
            disk.num_balls()
        ));
    }
    let expected: usize = degrees.iter().map(|l| l + 1).sum();
    if order.len() != expected {
        return shape(format!(
            "{} tokens given, {} expected",
            order.len(),
            expected
        ));
    }
    if w.len() != order.len() {
        return shape("W must have one value per token");
    }
    let mut seen: Vec<Vec<bool>> = degrees.iter().map(|&l| vec![false; l + 1]).collect();
    for t in order {
        let slot = seen
            .get_mut(t.ball)
            .and_then(|s| s.get_mut(t.idx))
            .ok_or_else(|| Error::Shape(format!("token ({}, {}) does not exist", t.ball, t.idx)))?;
        if *slot {
            return shape(format!("token ({}, {}) repeated", t.ball, t.idx));
        }
        *slot = true;
    }
    Ok(())
}

fn find_violation(disk: &Disk2, order: &[Token], out: usize, w: &[usize]) -> Option<Violation> {
    let balls = disk.balls();
    let n = balls.len();
    // (1)
    let mut last = vec![None::<usize>; n];
    for t in order {
        if let Some(prev) = last[t.ball] {
            if t.idx < prev {
                return Some(Violation::ColorOrder {
                    ball: balls[t.ball],
                });
            }
        }
        last[t.ball] = Some(t.idx);
    }
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (p, t) in order.iter().enumerate() {
        positions[t.ball].push(p);
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let (ba, bb) = (balls[a], balls[b]);
            if ba.col == bb.col && ba.row < bb.row {
                // (2): every token of a precedes every token of b.
                if positions[a].last() > positions[b].first() {
                    return Some(Violation::SameColumn {
                        lower: ba,
                        upper: bb,
                    });
                }
            } else if ba.col < bb.col {
                // (3): a sits in one gap of b.
                let gap = |p: usize| positions[b].partition_point(|&q| q < p);
                let g0 = gap(positions[a][0]);
                if positions[a].iter().any(|&p| gap(p) != g0) {
                    return Some(Violation::Brace {
                        inner: ba,
                        outer: bb,
                    });
                }
            }
        }
    }
    for (p, &x) in w.iter().enumerate() {
        if x > out {
            return Some(Violation::WOutOfRange { position: p });
        }
        if p > 0 && w[p - 1] > x {
            return Some(Violation::WNotMonotone { position: p });
        }
    }
    None
}

impl Config {
    /// Validates and builds a configuration.
    pub fn new(
        disk: Disk2,
        degrees: Vec<usize>,
        order: Vec<Token>,
        out: usize,
        w: Vec<usize>,
    ) -> Result<Self> {
        check_well_formed(&disk, &degrees, &order, &w)?;
        if let Some(v) = find_violation(&disk, &order, out, &w) {
            return shape(format!("invalid configuration: {v}"));
        }
        Ok(Config {
            disk,
            degrees,
            out,
            order,
            w,
        })
    }

    /// Validity report for raw data: `Err` for malformed token sets,
    /// `Ok(Some(_))` for the first violated condition.
    pub fn validate_parts(
        disk: &Disk2,
        degrees: &[usize],
        order: &[Token],
        out: usize,
        w: &[usize],
    ) -> Result<Option<Violation>> {
        check_well_formed(disk, degrees, order, w)?;
        Ok(find_violation(disk, order, out, w))
    }

    pub fn validate(&self) -> Option<Violation> {
        find_violation(&self.disk, &self.order, self.out, &self.w)
    }

    /// The operadic unit of color `[ℓ]`: the disk `(1)` with `W = id`.
    pub fn unit(l: usize) -> Self {
        Config {
            disk: Disk2::unit(),
            degrees: vec![l],
            out: l,
            order: (0..=l).map(|idx| Token { ball: 0, idx }).collect(),
            w: (0..=l).collect(),
        }
    }

    pub fn disk(&self) -> &Disk2 {
        &self.disk
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn order(&self) -> &[Token] {
        &self.order
    }

    pub fn out(&self) -> usize {
        self.out
    }

    pub fn w(&self) -> &[usize] {
        &self.w
    }

    /// Total simplicial degree `Σ ℓ_ν`.
    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Cohomological degree `−Σ ℓ_ν`.
    pub fn degree(&self) -> i32 {
        -(self.total_degree() as i32)
    }

    /// Position of each token, indexed `[ball][idx]`.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut pos: Vec<Vec<usize>> = self.degrees.iter().map(|&l| vec![0; l + 1]).collect();
        for (p, t) in self.order.iter().enumerate() {
            pos[t.ball][t.idx] = p;
        }
        pos
    }

    /// Degenerate: two adjacent tokens of one color with equal `W`.
    pub fn is_degenerate(&self) -> bool {
        (1..self.order.len())
            .any(|p| self.order[p - 1].ball == self.order[p].ball && self.w[p - 1] == self.w[p])
    }

    /// Pullback along monotone maps `φ_ν : [ℓ′_ν] → [ℓ_ν]`, each given as its
    /// value list.
    pub fn pullback(&self, maps: &[Vec<usize>]) -> Result<Config> {
        if maps.len() != self.degrees.len() {
            return shape("pullback needs one map per ball");
        }
        for (b, m) in maps.iter().enumerate() {
            if m.is_empty() {
                return shape("pullback source ordinal is empty");
            }
            if m.windows(2).any(|x| x[0] > x[1]) || m.iter().any(|&v| v > self.degrees[b]) {
                return shape(format!(
                    "map for ball {} is not a monotone map into [{}]",
                    b, self.degrees[b]
                ));
            }
        }
        let pos = self.positions();
        let mut keyed: Vec<(usize, usize, Token)> = Vec::new();
        for (ball, m) in maps.iter().enumerate() {
            for (idx, &v) in m.iter().enumerate() {
                keyed.push((pos[ball][v], idx, Token { ball, idx }));
            }
        }
        // Equal images only occur within one color; the source index breaks ties.
        keyed.sort();
        Ok(Config {
            disk: self.disk.clone(),
            degrees: maps.iter().map(|m| m.len() - 1).collect(),
            out: self.out,
            order: keyed.iter().map(|k| k.2).collect(),
            w: keyed.iter().map(|k| self.w[k.0]).collect(),
        })
    }

    /// The face `δ_i` in color `ball`: deletes token `(ball, i)`.
    pub fn face(&self, ball: usize, i: usize) -> Result<Config> {
        if ball >= self.degrees.len() || self.degrees[ball] == 0 || i > self.degrees[ball] {
            return shape(format!("no face {i} in color {ball}"));
        }
        let mut degrees = self.degrees.clone();
        degrees[ball] -= 1;
        let mut order = Vec::with_capacity(self.order.len() - 1);
        let mut w = Vec::with_capacity(self.order.len() - 1);
        for (p, t) in self.order.iter().enumerate() {
            if t.ball == ball {
                if t.idx == i {
                    continue;
                }
                order.push(Token {
                    ball,
                    idx: if t.idx > i { t.idx - 1 } else { t.idx },
                });
            } else {
                order.push(*t);
            }
            w.push(self.w[p]);
        }
        Ok(Config {
            disk: self.disk.clone(),
            degrees,
            out: self.out,
            order,
            w,
        })
    }

    /// The degeneracy `σ_j` in color `ball`: doubles token `(ball, j)`.
    pub fn degeneracy(&self, ball: usize, j: usize) -> Result<Config> {
        if ball >= self.degrees.len() || j > self.degrees[ball] {
            return shape(format!("no degeneracy {j} in color {ball}"));
        }
        let maps: Vec<Vec<usize>> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(b, &l)| {
                if b == ball {
                    (0..=l + 1)
                        .map(|x| if x <= j { x } else { x - 1 })
                        .collect()
                } else {
                    (0..=l).collect()
                }
            })
            .collect();
        self.pullback(&maps)
    }

    /// Pushforward along a monotone `ψ : [out] → [new_out]`.
    pub fn pushforward(&self, psi: &[usize], new_out: usize) -> Result<Config> {
        if psi.len() != self.out + 1 {
            return shape(format!("ψ must be defined on [{}]", self.out));
        }
        if psi.windows(2).any(|x| x[0] > x[1]) || psi.iter().any(|&v| v > new_out) {
            return shape(format!("ψ is not a monotone map into [{new_out}]"));
        }
        Ok(Config {
            disk: self.disk.clone(),
            degrees: self.degrees.clone(),
            out: new_out,
            order: self.order.clone(),
            w: self.w.iter().map(|&x| psi[x]).collect(),
        })
    }

    pub(crate) fn from_raw(
        disk: Disk2,
        degrees: Vec<usize>,
        order: Vec<Token>,
        out: usize,
        w: Vec<usize>,
    ) -> Config {
        Config {
            disk,
            degrees,
            out,
            order,
            w,
        }
    }

    /// Token string such as `(1,1)₀(2,1)₀(1,1)₁|0,0,0`.
    pub fn label(&self) -> String {
        let balls = self.disk.balls();
        let toks: Vec<String> = self
            .order
            .iter()
            .map(|t| format!("{}{}", balls[t.ball], t.idx))
            .collect();
        let w: Vec<String> = self.w.iter().map(|x| x.to_string()).collect();
        format!("{}:{}|{}", self.disk, toks.join(" "), w.join(","))
    }

    pub fn to_json(&self) -> Value {
        let balls = self.disk.balls();
        let mut degrees = Map::new();
        for (b, l) in balls.iter().zip(&self.degrees) {
            degrees.insert(format!("{},{}", b.col + 1, b.row + 1), json!(l));
        }
        let order: Vec<Value> = self
            .order
            .iter()
            .map(|t| json!([balls[t.ball].col + 1, balls[t.ball].row + 1, t.idx]))
            .collect();
        json!({
            "disk": self.disk.to_json(),
            "degrees": degrees,
            "order": order,
            "out": self.out,
            "W": self.w,
        })
    }

    pub fn from_json(v: &Value) -> Result<Config> {
        let bad = |what: &str| Error::Shape(format!("config JSON: bad or missing {what}"));
        let disk = Disk2::from_json(v.get("disk").ok_or_else(|| bad("disk"))?)?;
        let degs = v
            .get("degrees")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("degrees"))?;
        let mut degrees = vec![None; disk.num_balls()];
        for (k, l) in degs {
            let (c, r) = k.split_once(',').ok_or_else(|| bad("degree key"))?;
            let col = c
                .trim()
                .parse::<usize>()
                .ok()
                .and_then(|c| c.checked_sub(1))
                .ok_or_else(|| bad("degree key"))?;
            let row = r
                .trim()
                .parse::<usize>()
                .ok()
                .and_then(|r| r.checked_sub(1))
                .ok_or_else(|| bad("degree key"))?;
            let idx = disk
                .index(Ball { col, row })
                .ok_or_else(|| bad("degree key"))?;
            degrees[idx] = Some(l.as_u64().ok_or_else(|| bad("degree value"))? as usize);
        }
        let degrees = degrees
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("degrees"))?;
        let order = v
            .get("order")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("order"))?
            .iter()
            .map(|t| {
                let a = t.as_array()?;
                let col = a.first()?.as_u64()?.checked_sub(1)? as usize;
                let row = a.get(1)?.as_u64()?.checked_sub(1)? as usize;
                let idx = a.get(2)?.as_u64()? as usize;
                Some(Token {
                    ball: disk.index(Ball { col, row })?,
                    idx,
                })
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("order"))?;
        let out = v.get("out").and_then(Value::as_u64).unwrap_or(0) as usize;
        let w = v
            .get("W")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("W"))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("W"))?;
        Config::new(disk, degrees, order, out, w)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All token sequences satisfying (1)–(3), in lexicographic order.
///
/// With `no_repeats`, sequences with two adjacent tokens of one color are
/// skipped.
fn token_orders(disk: &Disk2, degrees: &[usize], no_repeats: bool) -> Vec<Vec<Token>> {
    struct Search<'a> {
        cols: Vec<usize>,
        degrees: &'a [usize],
        same_col_below: Vec<Vec<usize>>,
        left_of: Vec<Vec<usize>>,
        next: Vec<usize>,
        cur: Vec<Token>,
        total: usize,
        no_repeats: bool,
        out: Vec<Vec<Token>>,
    }
    impl Search<'_> {
        fn open(&self, b: usize) -> bool {
            self.next[b] > 0 && self.next[b] <= self.degrees[b]
        }
        fn placeable(&self, b: usize) -> bool {
            if self.next[b] > self.degrees[b] {
                return false;
            }
            if self.no_repeats && self.cur.last().map(|t| t.ball) == Some(b) {
                return false;
            }
            if self.same_col_below[b]
                .iter()
                .any(|&a| self.next[a] <= self.degrees[a])
            {
                return false;
            }
            !self.left_of[b].iter().any(|&a| self.open(a))
        }
        fn run(&mut self) {
            if self.cur.len() == self.total {
                self.out.push(self.cur.clone());
                return;
            }
            for b in 0..self.cols.len() {
                if self.placeable(b) {
                    self.cur.push(Token {
                        ball: b,
                        idx: self.next[b],
                    });
                    self.next[b] += 1;
                    self.run();
                    self.next[b] -= 1;
                    self.cur.pop();
                }
            }
        }
    }
    let balls = disk.balls();
    let n = balls.len();
    let mut s = Search {
        cols: balls.iter().map(|b| b.col).collect(),
        degrees,
        same_col_below: (0..n)
            .map(|b| {
                (0..n)
                    .filter(|&a| balls[a].col == balls[b].col && a < b)
                    .collect()
            })
            .collect(),
        left_of: (0..n)
            .map(|b| (0..n).filter(|&a| balls[a].col < balls[b].col).collect())
            .collect(),
        next: vec![0; n],
        cur: Vec::new(),
        total: degrees.iter().map(|l| l + 1).sum(),
        no_repeats,
        out: Vec::new(),
    };
    s.run();
    s.out
}

/// All of `seq(U)({[ℓ_ν]}; [out])` in canonical order.
pub fn enumerate_configs(disk: &Disk2, degrees: &[usize], out: usize) -> Vec<Config> {
    enumerate(disk, degrees, out, false)
}

/// The non-degenerate part of [`enumerate_configs`].
pub fn enumerate_nondegenerate(disk: &Disk2, degrees: &[usize], out: usize) -> Vec<Config> {
    enumerate(disk, degrees, out, true)
}

fn enumerate(disk: &Disk2, degrees: &[usize], out: usize, nondegenerate: bool) -> Vec<Config> {
    assert_eq!(degrees.len(), disk.num_balls(), "one degree per ball");
    // Adjacent repeats are always degenerate when the output is a point.
    let orders = token_orders(disk, degrees, nondegenerate && out == 0);
    let len: usize = degrees.iter().map(|l| l + 1).sum();
    let ws = monotone_maps(len, out + 1);
    let mut res = Vec::new();
    for order in orders {
        for w in &ws {
            let c = Config::from_raw(
                disk.clone(),
                degrees.to_vec(),
                order.clone(),
                out,
                w.clone(),
            );
            if !nondegenerate || !c.is_degenerate() {
                res.push(c);
            }
        }
    }
    res
}

/// Weak compositions of `total` into `parts` non-negative parts, lexicographic.
pub fn degree_assignments(parts: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(parts: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == parts {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rest {
            cur.push(x);
            rec(parts, rest - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(parts, total, &mut Vec::new(), &mut out);
    out
}

/// Operadic composition along a surjection `P : U → V`.
///
/// `parts[μ]` lives on the fiber over ball `μ` of `V` with output
/// `J_μ = [ℓ_μ(β)]`. Each token `(μ, j)` of `β` is replaced by the tokens of
/// `parts[μ]` with `W_μ = j`, in their order; they inherit `β`'s `W` value.
pub fn compose(p: &TreeMap2, parts: &[Config], beta: &Config) -> Result<Config> {
    if beta.disk() != p.target() {
        return shape(format!(
            "outer configuration lives on {}, map targets {}",
            beta.disk(),
            p.target()
        ));
    }
    if parts.len() != p.target().num_balls() {
        return shape("one inner configuration per target ball is required");
    }
    let src = p.source();
    let mut degrees = vec![0; src.num_balls()];
    let mut fibers = Vec::with_capacity(parts.len());
    for (mu, part) in parts.iter().enumerate() {
        let fiber = p.fiber(mu)?;
        if part.disk() != &fiber.disk {
            return shape(format!(
                "inner configuration {mu} lives on {}, fiber is {}",
                part.disk(),
                fiber.disk
            ));
        }
        if part.out() != beta.degrees()[mu] {
            return shape(format!(
                "inner configuration {mu} has output [{}], outer color is [{}]",
                part.out(),
                beta.degrees()[mu]
            ));
        }
        for (f, &b) in fiber.balls.iter().enumerate() {
            degrees[b] = part.degrees()[f];
        }
        fibers.push(fiber);
    }
    // Tokens of each part grouped by W value, in order.
    let groups: Vec<BTreeMap<usize, Vec<Token>>> = parts
        .iter()
        .zip(&fibers)
        .map(|(part, fiber)| {
            let mut g: BTreeMap<usize, Vec<Token>> = BTreeMap::new();
            for (t, &j) in part.order().iter().zip(part.w()) {
                g.entry(j).or_default().push(Token {
                    ball: fiber.balls[t.ball],
                    idx: t.idx,
                });
            }
            g
        })
        .collect();
    let mut order = Vec::new();
    let mut w = Vec::new();
    for (t, &k) in beta.order().iter().zip(beta.w()) {
        if let Some(toks) = groups[t.ball].get(&t.idx) {
            order.extend_from_slice(toks);
            w.extend(std::iter::repeat_n(k, toks.len()));
        }
    }
    Config::new(src.clone(), degrees, order, beta.out(), w)
}

/// Both bracketings of a double composite along `σ : T → S` and `τ : S → Q`:
/// `m_{τσ}(⊗_q m_{σ_q}(⊗_{s ∈ τ⁻¹q} α_s ⊗ β_q) ⊗ δ)` and
/// `m_σ(⊗_s α_s ⊗ m_τ(⊗_q β_q ⊗ δ))`.
pub fn associativity_sides(
    sigma: &TreeMap2,
    tau: &TreeMap2,
    alphas: &[Config],
    betas: &[Config],
    delta: &Config,
) -> Result<(Config, Config)> {
    let st = sigma.then(tau)?;
    let mut gammas = Vec::with_capacity(betas.len());
    for (q, beta) in betas.iter().enumerate() {
        let parts: Vec<Config> = tau
            .fiber(q)?
            .balls
            .iter()
            .map(|&s| alphas[s].clone())
            .collect();
        gammas.push(compose(&sigma.restrict(tau, q)?, &parts, beta)?);
    }
    let lhs = compose(&st, &gammas, delta)?;
    let rhs = compose(sigma, alphas, &compose(tau, betas, delta)?)?;
    Ok((lhs, rhs))
}
