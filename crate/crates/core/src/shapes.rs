//! Ordinals, 2-disks, pruned 2-trees and surjective maps between them.
//!
//! Balls of a disk are indexed globally in lexicographic `(column, row)`
//! order; that index is what every other module uses to name a color.
//! Columns and rows are 0-based in code and 1-based in JSON and display.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{shape, Error, Result};

/// The finite ordinal `[n] = {0 < 1 < … < n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ordinal(pub usize);

impl Ordinal {
    /// Number of elements, `n + 1`.
    pub fn len(self) -> usize {
        self.0 + 1
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Number of elementary intervals `(i, i+1)`.
    pub fn intervals(self) -> usize {
        self.0
    }
}

/// A minimal ball: row `row` of column `col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ball {
    pub col: usize,
    pub row: usize,
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col + 1, self.row + 1)
    }
}

/// A 2-globular diagram `(n₁, …, n_k)`: `k` intervals, `nᵢ` balls over interval `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Disk2 {
    columns: Vec<usize>,
}

impl Disk2 {
    pub fn new(columns: Vec<usize>) -> Result<Self> {
        if columns.is_empty() {
            return shape("a disk needs at least one column");
        }
        if let Some(c) = columns.iter().position(|&n| n == 0) {
            return shape(format!("column {} of a pruned disk is empty", c + 1));
        }
        Ok(Disk2 { columns })
    }

    /// The terminal disk `(1)`.
    pub fn unit() -> Self {
        Disk2 { columns: vec![1] }
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    /// `|𝓕(U)|`.
    pub fn num_balls(&self) -> usize {
        self.columns.iter().sum()
    }

    /// Index of the first ball of column `col`.
    pub fn column_start(&self, col: usize) -> usize {
        self.columns[..col].iter().sum()
    }

    pub fn index(&self, ball: Ball) -> Option<usize> {
        if ball.col < self.columns.len() && ball.row < self.columns[ball.col] {
            Some(self.column_start(ball.col) + ball.row)
        } else {
            None
        }
    }

    pub fn ball(&self, index: usize) -> Ball {
        let mut rest = index;
        for (col, &n) in self.columns.iter().enumerate() {
            if rest < n {
                return Ball { col, row: rest };
            }
            rest -= n;
        }
        panic!("ball index {index} out of range for {self}")
    }

    /// `𝓕(U)` in canonical order.
    pub fn balls(&self) -> Vec<Ball> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(col, &n)| (0..n).map(move |row| Ball { col, row }))
            .collect()
    }

    /// `π_U`: the interval (column) under each ball, by global index.
    pub fn projection(&self) -> Vec<usize> {
        self.balls().iter().map(|b| b.col).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "columns": self.columns })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let cols = v
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Shape("disk JSON needs a \"columns\" array".into()))?;
        let cols = cols
            .iter()
            .map(|x| x.as_u64().map(|n| n as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Shape("disk columns must be non-negative integers".into()))?;
        Disk2::new(cols)
    }

    /// All disks with exactly `size` balls (compositions of `size`), in
    /// lexicographic order of column vectors.
    pub fn all_of_size(size: usize) -> Vec<Disk2> {
        fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Disk2>) {
            if rest == 0 {
                out.push(Disk2 {
                    columns: cur.clone(),
                });
                return;
            }
            for n in 1..=rest {
                cur.push(n);
                rec(rest - n, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if size > 0 {
            rec(size, &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn all_up_to_size(max: usize) -> Vec<Disk2> {
        (1..=max).flat_map(Disk2::all_of_size).collect()
    }
}

impl fmt::Display for Disk2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self.columns.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", cols.join(","))
    }
}

impl std::str::FromStr for Disk2 {
    type Err = Error;

    /// Comma-separated column heights, e.g. `3,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let cols = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Shape(format!("bad column list {s:?}: {e}")))?;
        Disk2::new(cols)
    }
}

/// The Joyal-dual pruned 2-tree `[Σnᵢ−1] → [k−1] → [0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree2 {
    /// Level-2 structure map: leaf ↦ level-1 vertex. Monotone and surjective.
    pub rho: Vec<usize>,
    pub level1: usize,
}

impl Tree2 {
    pub fn new(rho: Vec<usize>, level1: usize) -> Result<Self> {
        if level1 == 0 {
            return shape("a pruned 2-tree has at least one level-1 vertex");
        }
        if rho.windows(2).any(|w| w[0] > w[1]) {
            return shape("structure map of a 2-tree must be monotone");
        }
        let mut hit = vec![false; level1];
        for &v in &rho {
            if v >= level1 {
                return shape(format!("leaf over nonexistent vertex {v}"));
            }
            hit[v] = true;
        }
        if hit.iter().any(|h| !h) {
            return shape("structure map of a pruned 2-tree must be surjective");
        }
        Ok(Tree2 { rho, level1 })
    }

    pub fn from_disk(d: &Disk2) -> Self {
        let rho = d.balls().iter().map(|b| b.col).collect();
        Tree2 {
            rho,
            level1: d.num_columns(),
        }
    }

    pub fn to_disk(&self) -> Disk2 {
        let mut cols = vec![0; self.level1];
        for &v in &self.rho {
            cols[v] += 1;
        }
        Disk2 { columns: cols }
    }
}

/// A map of pruned 2-trees `source → target`, given by its level-1 and
/// level-2 components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeMap2 {
    source: Disk2,
    target: Disk2,
    /// Column of `source` ↦ column of `target`.
    f1: Vec<usize>,
    /// Ball of `source` ↦ ball of `target` (global indices).
    f2: Vec<usize>,
}

/// The prunised fiber of a tree map over a target ball, together with the
/// embedding of its balls into the source balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub disk: Disk2,
    pub balls: Vec<usize>,
}

impl TreeMap2 {
    /// Checks the commutation and fiberwise-monotonicity conditions.
    pub fn new(source: Disk2, target: Disk2, f1: Vec<usize>, f2: Vec<usize>) -> Result<Self> {
        if f1.len() != source.num_columns() || f2.len() != source.num_balls() {
            return shape("tree map components have the wrong length");
        }
        if f1.iter().any(|&c| c >= target.num_columns())
            || f2.iter().any(|&b| b >= target.num_balls())
        {
            return shape("tree map points outside its target");
        }
        if f1.windows(2).any(|w| w[0] > w[1]) {
            return shape("level-1 component of a tree map must be monotone");
        }
        let src = source.balls();
        for (i, b) in src.iter().enumerate() {
            if target.ball(f2[i]).col != f1[b.col] {
                return shape(format!("ball {b} does not commute with the structure maps"));
            }
            if i > 0 && src[i - 1].col == b.col && f2[i - 1] > f2[i] {
                return shape(format!(
                    "level-2 component is not monotone on column {}",
                    b.col + 1
                ));
            }
        }
        Ok(TreeMap2 {
            source,
            target,
            f1,
            f2,
        })
    }

    pub fn identity(d: &Disk2) -> Self {
        TreeMap2 {
            source: d.clone(),
            target: d.clone(),
            f1: (0..d.num_columns()).collect(),
            f2: (0..d.num_balls()).collect(),
        }
    }

    /// The unique surjection onto the terminal disk `(1)`.
    pub fn terminal(d: &Disk2) -> Self {
        TreeMap2 {
            source: d.clone(),
            target: Disk2::unit(),
            f1: vec![0; d.num_columns()],
            f2: vec![0; d.num_balls()],
        }
    }

    pub fn source(&self) -> &Disk2 {
        &self.source
    }

    pub fn target(&self) -> &Disk2 {
        &self.target
    }

    pub fn f1(&self) -> &[usize] {
        &self.f1
    }

    pub fn f2(&self) -> &[usize] {
        &self.f2
    }

    pub fn is_surjective(&self) -> bool {
        let mut cols = vec![false; self.target.num_columns()];
        let mut balls = vec![false; self.target.num_balls()];
        self.f1.iter().for_each(|&c| cols[c] = true);
        self.f2.iter().for_each(|&b| balls[b] = true);
        cols.into_iter().chain(balls).all(|x| x)
    }

    /// The prunisation of the preimage of `Out(b)`.
    ///
    /// Source columns over the column of `b` that contain no ball mapping to
    /// `b` are the leafless level-1 vertices of the raw preimage; they are
    /// dropped.
    pub fn fiber(&self, b: usize) -> Result<Fiber> {
        if b >= self.target.num_balls() {
            return shape(format!("target {} has no ball {b}", self.target));
        }
        let mut cols = Vec::new();
        let mut balls = Vec::new();
        let mut current: Option<(usize, usize)> = None;
        for (i, sb) in self.source.balls().iter().enumerate() {
            if self.f2[i] != b {
                continue;
            }
            balls.push(i);
            match current {
                Some((col, ref mut n)) if col == sb.col => *n += 1,
                _ => {
                    if let Some((_, n)) = current {
                        cols.push(n);
                    }
                    current = Some((sb.col, 1));
                }
            }
        }
        match current {
            Some((_, n)) => cols.push(n),
            None => {
                return shape(format!(
                    "ball {} has an empty preimage",
                    self.target.ball(b)
                ))
            }
        }
        Ok(Fiber {
            disk: Disk2 { columns: cols },
            balls,
        })
    }

    /// The restriction `σ_q` of `self = σ : T → S` to the fibers over ball `q`
    /// of `τ : S → Q`, as a map from the fiber of `τ ∘ σ` to the fiber of `τ`.
    pub fn restrict(&self, tau: &TreeMap2, q: usize) -> Result<TreeMap2> {
        let outer = self.then(tau)?.fiber(q)?;
        let inner = tau.fiber(q)?;
        let mut f1 = vec![0; outer.disk.num_columns()];
        let mut f2 = Vec::with_capacity(outer.balls.len());
        for (f, &i) in outer.balls.iter().enumerate() {
            let g = inner
                .balls
                .iter()
                .position(|&b| b == self.f2[i])
                .expect("fiber of the composite maps into the fiber");
            f1[outer.disk.ball(f).col] = inner.disk.ball(g).col;
            f2.push(g);
        }
        TreeMap2::new(outer.disk, inner.disk, f1, f2)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &TreeMap2) -> Result<TreeMap2> {
        if self.target != other.source {
            return shape(format!(
                "cannot compose: {} ≠ {}",
                self.target, other.source
            ));
        }
        Ok(TreeMap2 {
            source: self.source.clone(),
            target: other.target.clone(),
            f1: self.f1.iter().map(|&c| other.f1[c]).collect(),
            f2: self.f2.iter().map(|&b| other.f2[b]).collect(),
        })
    }

    pub fn to_json(&self) -> Value {
        let f2: Vec<Value> = self
            .f2
            .iter()
            .map(|&b| {
                let ball = self.target.ball(b);
                json!([ball.col + 1, ball.row + 1])
            })
            .collect();
        let f1: Vec<usize> = self.f1.iter().map(|c| c + 1).collect();
        json!({ "f1": f1, "f2": f2 })
    }

    pub fn from_json(source: &Disk2, target: &Disk2, v: &Value) -> Result<Self> {
        let bad = || Error::Shape("tree map JSON needs \"f1\" and \"f2\" arrays".into());
        let f1 = v.get("f1").and_then(Value::as_array).ok_or_else(bad)?;
        let f2 = v.get("f2").and_then(Value::as_array).ok_or_else(bad)?;
        let f1 = f1
            .iter()
            .map(|x| x.as_u64().filter(|&c| c >= 1).map(|c| c as usize - 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        let f2 = f2
            .iter()
            .map(|x| {
                let a = x.as_array()?;
                let col = a.first()?.as_u64()?.checked_sub(1)? as usize;
                let row = a.get(1)?.as_u64()?.checked_sub(1)? as usize;
                target.index(Ball { col, row })
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        TreeMap2::new(source.clone(), target.clone(), f1, f2)
    }
}

/// Monotone maps `[0, len) → [0, range)` in lexicographic order.
pub(crate) fn monotone_maps(len: usize, range: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, range: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..range {
            cur.push(v);
            rec(len, range, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, range, 0, &mut Vec::new(), &mut out);
    out
}

/// All surjective tree maps `source → target`, in lexicographic order of
/// `(f1, f2)`.
pub fn enumerate_surjections(source: &Disk2, target: &Disk2) -> Vec<TreeMap2> {
    let mut out = Vec::new();
    for f1 in monotone_maps(source.num_columns(), target.num_columns()) {
        // Per source column: the monotone row maps into the target column.
        let choices: Vec<Vec<Vec<usize>>> = source
            .columns()
            .iter()
            .enumerate()
            .map(|(c, &n)| {
                let base = target.column_start(f1[c]);
                monotone_maps(n, target.columns()[f1[c]])
                    .into_iter()
                    .map(|m| m.into_iter().map(|r| base + r).collect())
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; choices.len()];
        'product: loop {
            let f2: Vec<usize> = idx
                .iter()
                .enumerate()
                .flat_map(|(c, &i)| choices[c][i].clone())
                .collect();
            let m = TreeMap2 {
                source: source.clone(),
                target: target.clone(),
                f1: f1.clone(),
                f2,
            };
            if m.is_surjective() {
                out.push(m);
            }
            for pos in (0..idx.len()).rev() {
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    continue 'product;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(c: &[usize]) -> Disk2 {
        Disk2::new(c.to_vec()).unwrap()
    }

    #[test]
    fn make_disk_examples() {
        assert_eq!(disk(&[1]).num_balls(), 1);
        let d = disk(&[1, 1]);
        assert_eq!(d.num_balls(), 2);
        let p = d.projection();
        assert_ne!(p[0], p[1]);
        let d = disk(&[3, 1, 2]);
        assert_eq!(d.num_balls(), 6);
        assert_eq!(d.projection(), vec![0, 0, 0, 1, 2, 2]);
    }

    #[test]
    fn make_disk_errors() {
        assert!(matches!(Disk2::new(vec![]), Err(Error::Shape(_))));
        assert!(matches!(Disk2::new(vec![2, 0]), Err(Error::Shape(_))));
        assert!("1,,2".parse::<Disk2>().is_err());
    }

    #[test]
    fn disk_tree_round_trip() {
        for d in Disk2::all_up_to_size(8) {
            let t = Tree2::from_disk(&d);
            assert_eq!(Tree2::new(t.rho.clone(), t.level1).unwrap(), t);
            assert_eq!(t.to_disk(), d);
        }
        assert_eq!(Disk2::all_of_size(4).len(), 8);
    }

    #[test]
    fn tree_rejects_non_pruned() {
        assert!(Tree2::new(vec![0, 0, 2], 3).is_err());
        assert!(Tree2::new(vec![1, 0], 2).is_err());
    }

    #[test]
    fn terminal_has_one_surjection() {
        assert_eq!(
            enumerate_surjections(&Disk2::unit(), &Disk2::unit()),
            vec![TreeMap2::identity(&Disk2::unit())]
        );
    }

    #[test]
    fn level_tree_example_maps() {
        // T = [3] → [1] → [0], S = [1] → [0] → [0].
        let t = disk(&[2, 2]);
        let s = disk(&[2]);
        let maps = enumerate_surjections(&t, &s);
        let f1 = TreeMap2::new(t.clone(), s.clone(), vec![0, 0], vec![0, 0, 1, 1]).unwrap();
        let f2 = TreeMap2::new(t.clone(), s.clone(), vec![0, 0], vec![0, 1, 0, 1]).unwrap();
        assert!(maps.contains(&f1));
        assert!(maps.contains(&f2));
        // Monotone per column, not globally.
        assert!(f2.f2().windows(2).any(|w| w[0] > w[1]));
    }

    /// Brute force over all functions on columns and balls, filtered by the
    /// tree-map conditions.
    fn brute_force_count(src: &Disk2, tgt: &Disk2) -> usize {
        let nc = src.num_columns();
        let nb = src.num_balls();
        let (tc, tb) = (tgt.num_columns(), tgt.num_balls());
        let mut count = 0;
        for code1 in 0..tc.pow(nc as u32) {
            let f1: Vec<usize> = (0..nc).map(|i| code1 / tc.pow(i as u32) % tc).collect();
            for code2 in 0..tb.pow(nb as u32) {
                let f2: Vec<usize> = (0..nb).map(|i| code2 / tb.pow(i as u32) % tb).collect();
                if let Ok(m) = TreeMap2::new(src.clone(), tgt.clone(), f1.clone(), f2) {
                    if m.is_surjective() {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn surjection_counts_match_brute_force() {
        assert_eq!(brute_force_count(&disk(&[2, 1]), &disk(&[1, 1])), 1);
        assert_eq!(
            enumerate_surjections(&disk(&[2, 1]), &disk(&[1, 1])).len(),
            1
        );
        for s in Disk2::all_up_to_size(3) {
            for t in Disk2::all_up_to_size(3) {
                assert_eq!(
                    enumerate_surjections(&s, &t).len(),
                    brute_force_count(&s, &t),
                    "{s} → {t}"
                );
            }
        }
    }

    #[test]
    fn identity_fibers_are_terminal() {
        let d = disk(&[2, 1]);
        let id = TreeMap2::identity(&d);
        for b in 0..3 {
            let f = id.fiber(b).unwrap();
            assert_eq!(f.disk, Disk2::unit());
            assert_eq!(f.balls, vec![b]);
        }
        assert!(id.fiber(3).is_err());
    }

    #[test]
    fn fiber_over_collapsed_column() {
        let m = TreeMap2::new(disk(&[2, 1]), disk(&[1, 1]), vec![0, 1], vec![0, 0, 1]).unwrap();
        let f = m.fiber(0).unwrap();
        assert_eq!(f.disk, disk(&[2]));
        assert_eq!(f.balls, vec![0, 1]);
    }

    #[test]
    fn fiber_drops_leafless_vertices() {
        // (2,2) → (2) sending column 1 to the bottom ball and column 2 to
        // the top ball: the raw preimage of each ball has both columns but
        // only one carries leaves.
        let m = TreeMap2::new(disk(&[2, 2]), disk(&[2]), vec![0, 0], vec![0, 0, 1, 1]).unwrap();
        let f = m.fiber(0).unwrap();
        assert_eq!(f.disk, disk(&[2]));
        assert_eq!(f.balls, vec![0, 1]);
        let f = m.fiber(1).unwrap();
        assert_eq!(f.balls, vec![2, 3]);
    }

    #[test]
    fn fibers_partition_source_balls() {
        for s in Disk2::all_up_to_size(4) {
            for t in Disk2::all_up_to_size(4) {
                for m in enumerate_surjections(&s, &t) {
                    let total: usize = (0..t.num_balls())
                        .map(|b| m.fiber(b).unwrap().disk.num_balls())
                        .sum();
                    assert_eq!(total, s.num_balls());
                }
            }
        }
    }

    #[test]
    fn composition_units_and_associativity() {
        let disks = Disk2::all_up_to_size(4);
        for a in &disks {
            for b in &disks {
                for s in enumerate_surjections(a, b) {
                    assert_eq!(s.then(&TreeMap2::identity(b)).unwrap(), s);
                    assert_eq!(TreeMap2::identity(a).then(&s).unwrap(), s);
                    for c in &disks {
                        for t in enumerate_surjections(b, c) {
                            let st = s.then(&t).unwrap();
                            assert!(st.is_surjective());
                            for d in &disks {
                                for u in enumerate_surjections(c, d) {
                                    assert_eq!(
                                        st.then(&u).unwrap(),
                                        s.then(&t.then(&u).unwrap()).unwrap()
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn composite_is_pointwise() {
        let s = TreeMap2::new(disk(&[2, 1]), disk(&[1, 1]), vec![0, 1], vec![0, 0, 1]).unwrap();
        let t = TreeMap2::new(disk(&[1, 1]), disk(&[1]), vec![0, 0], vec![0, 0]).unwrap();
        let st = s.then(&t).unwrap();
        assert_eq!(st.f2(), &[0, 0, 0]);
        assert!(s.then(&s).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = TreeMap2::new(disk(&[2, 1]), disk(&[1, 1]), vec![0, 1], vec![0, 0, 1]).unwrap();
        let v = s.to_json();
        assert_eq!(v.to_string(), r#"{"f1":[1,2],"f2":[[1,1],[1,1],[2,1]]}"#);
        assert_eq!(TreeMap2::from_json(s.source(), s.target(), &v).unwrap(), s);
        let d = disk(&[3, 1]);
        assert_eq!(Disk2::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn restriction_to_fibers() {
        // (2,1) → (1,1) → (1): the restriction over the single ball is the
        // map itself.
        let s = TreeMap2::new(disk(&[2, 1]), disk(&[1, 1]), vec![0, 1], vec![0, 0, 1]).unwrap();
        let t = TreeMap2::terminal(&disk(&[1, 1]));
        assert_eq!(s.restrict(&t, 0).unwrap(), s);
        for a in Disk2::all_up_to_size(3) {
            for b in Disk2::all_up_to_size(3) {
                for c in Disk2::all_up_to_size(3) {
                    for s in enumerate_surjections(&a, &b) {
                        for t in enumerate_surjections(&b, &c) {
                            for q in 0..c.num_balls() {
                                let r = s.restrict(&t, q).unwrap();
                                assert_eq!(r.source(), &s.then(&t).unwrap().fiber(q).unwrap().disk);
                                assert_eq!(r.target(), &t.fiber(q).unwrap().disk);
                                assert!(r.is_surjective());
                            }
                        }
                    }
                }
            }
        }
    }
}
