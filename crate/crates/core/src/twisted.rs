//! The word model of the twisted tensor product of interval categories.
//!
//! A morphism `min → max` of `I_{n_1} ⊗̃ ⋯ ⊗̃ I_{n_k}` in normal form is a
//! composite of fragments read from source to target: `f_i ⊗ id` for an
//! interval `i` of the last factor, `id ⊗ w` for a morphism `w` of the first
//! `k − 1` factors, and `ε(f_i; id ⊗ w_1, …, id ⊗ w_ℓ)`.
//!
//! Signs come from orienting a word by its elementary intervals: `ε(f_i; w_1,
//! …, w_ℓ)` is oriented as `e_1 w_1 e_2 w_2 ⋯ e_ℓ w_ℓ` and fragments are
//! concatenated in composition order. With this orientation the differential
//! reads
//!
//! ```text
//! d ε(f; w_1..w_ℓ) = − (id⊗w_1)·ε(f; w_2..w_ℓ)
//!                    − Σ_{0<j<ℓ} (−1)^{j + Σ_{r≤j}|w_r|} ε(f; .., w_j·w_{j+1}, ..)
//!                    − (−1)^{ℓ + Σ_{r<ℓ}|w_r|} ε(f; w_1..w_{ℓ−1})·(id⊗w_ℓ)
//!                    + Σ_j (−1)^{j + Σ_{r<j}|w_r|} ε(f; .., d w_j, ..)
//! ```
//!
//! where `·` is composition in source-to-target order, `ε(f;)` is `f ⊗ id`,
//! and the differential is extended to composites by the Leibniz rule. For
//! `ℓ = 1` this is `[d, ε(f; g)] = (id⊗g)∘(f⊗id) − (f⊗id)∘(id⊗g)`.
//!
//! [`phi`] sends a normalised configuration to its word; the chain
//! isomorphism [`phi_chain`] additionally multiplies by `(−1)^{deg}` times the
//! sign of the permutation from the word orientation to the color-by-color
//! orientation of the configuration.

use std::fmt;

use serde_json::{json, Value};

use crate::chain::Chain;
use crate::error::{shape, Error, Result};
use crate::scalar::{int, sign, Scalar};
use crate::seq::{Config, Token};
use crate::shapes::{Ball, Disk2, TreeMap2};
use crate::whiskering::breq_compose;

/// One fragment of a word. Rows are 0-based within the top column of the
/// word's level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    Gen(usize),
    Lift(Word),
    Eps(usize, Vec<Word>),
}

/// A composite of fragments in source-to-target order. The empty word is an
/// identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Fragment>);

impl Word {
    /// Number of elementary intervals, `−deg`.
    pub fn weight(&self) -> usize {
        self.0
            .iter()
            .map(|f| match f {
                Fragment::Gen(_) => 0,
                Fragment::Lift(w) => w.weight(),
                Fragment::Eps(_, args) => args.len() + args.iter().map(Word::weight).sum::<usize>(),
            })
            .sum()
    }

    pub fn degree(&self) -> i32 {
        -(self.weight() as i32)
    }

    /// Composite `self` then `other`, merging the Lift fragments that meet.
    pub fn then(&self, other: &Word) -> Word {
        let mut frags = self.0.clone();
        for f in &other.0 {
            push(&mut frags, f.clone());
        }
        Word(frags)
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|f| match f {
                    Fragment::Gen(i) => json!({ "Gen": i + 1 }),
                    Fragment::Lift(w) => json!({ "Lift": w.to_json() }),
                    Fragment::Eps(i, args) => {
                        json!({ "Eps": [i + 1, args.iter().map(Word::to_json).collect::<Vec<_>>()] })
                    }
                })
                .collect(),
        )
    }

    fn from_json(v: &Value) -> Result<Word> {
        let bad = || Error::Shape(format!("malformed word fragment list: {v}"));
        let row = |x: &Value| {
            x.as_u64()
                .filter(|&i| i >= 1)
                .map(|i| i as usize - 1)
                .ok_or_else(bad)
        };
        let mut frags = Vec::new();
        for f in v.as_array().ok_or_else(bad)? {
            let obj = f.as_object().filter(|o| o.len() == 1).ok_or_else(bad)?;
            let (key, val) = obj.iter().next().ok_or_else(bad)?;
            frags.push(match key.as_str() {
                "Gen" => Fragment::Gen(row(val)?),
                "Lift" => Fragment::Lift(Word::from_json(val)?),
                "Eps" => {
                    let pair = val.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                    let args = pair[1]
                        .as_array()
                        .ok_or_else(bad)?
                        .iter()
                        .map(Word::from_json)
                        .collect::<Result<_>>()?;
                    Fragment::Eps(row(&pair[0])?, args)
                }
                _ => return Err(bad()),
            });
        }
        Ok(Word(frags))
    }
}

fn push(frags: &mut Vec<Fragment>, f: Fragment) {
    if let (Some(Fragment::Lift(a)), Fragment::Lift(b)) = (frags.last_mut(), &f) {
        *a = a.then(b);
    } else {
        frags.push(f);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        for (n, frag) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            match frag {
                Fragment::Gen(i) => write!(f, "f{}", i + 1)?,
                Fragment::Lift(w) => write!(f, "L[{w}]")?,
                Fragment::Eps(i, args) => {
                    write!(f, "e{}(", i + 1)?;
                    for (j, a) in args.iter().enumerate() {
                        if j > 0 {
                            f.write_str("; ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
            }
        }
        Ok(())
    }
}

/// A normal-form morphism `min → max` over a disk.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistedWord {
    pub disk: Disk2,
    pub word: Word,
}

impl TwistedWord {
    pub fn degree(&self) -> i32 {
        self.word.degree()
    }

    pub fn to_json(&self) -> Value {
        json!({ "disk": self.disk.to_json(), "word": self.word.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<TwistedWord> {
        let disk = Disk2::from_json(
            v.get("disk")
                .ok_or_else(|| Error::Shape("word without disk".into()))?,
        )?;
        let word = Word::from_json(
            v.get("word")
                .ok_or_else(|| Error::Shape("word without fragments".into()))?,
        )?;
        let tw = TwistedWord { disk, word };
        phi_inverse(&tw)?;
        Ok(tw)
    }
}

impl fmt::Display for TwistedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.disk, self.word)
    }
}

/// The word of a token block whose balls lie in columns `< level`.
fn word_of(disk: &Disk2, cfg: &Config, tokens: &[Token], level: usize) -> Result<Word> {
    let top = level - 1;
    let col = |t: &Token| disk.ball(t.ball).col;
    let mut frags = Vec::new();
    let mut q = 0;
    while q < tokens.len() {
        if col(&tokens[q]) != top {
            let start = q;
            while q < tokens.len() && col(&tokens[q]) != top {
                q += 1;
            }
            frags.push(Fragment::Lift(word_of(disk, cfg, &tokens[start..q], top)?));
            continue;
        }
        let ball = tokens[q].ball;
        let row = disk.ball(ball).row;
        let l = cfg.degrees()[ball];
        q += 1;
        let mut args = Vec::with_capacity(l);
        for _ in 0..l {
            let start = q;
            while q < tokens.len() && tokens[q].ball != ball {
                q += 1;
            }
            if q == start {
                return shape(format!("{cfg} is degenerate"));
            }
            args.push(word_of(disk, cfg, &tokens[start..q], top)?);
            q += 1;
        }
        frags.push(if l == 0 {
            Fragment::Gen(row)
        } else {
            Fragment::Eps(row, args)
        });
    }
    Ok(Word(frags))
}

/// The word of a normalised configuration with output `[0]`.
pub fn phi(m: &Config) -> Result<TwistedWord> {
    if m.out() != 0 || m.is_degenerate() {
        return shape(format!(
            "{m} is not a normalised configuration with output [0]"
        ));
    }
    let disk = m.disk().clone();
    let word = word_of(&disk, m, m.order(), disk.num_columns())?;
    Ok(TwistedWord { disk, word })
}

fn emit(
    disk: &Disk2,
    word: &Word,
    level: usize,
    order: &mut Vec<Token>,
    degrees: &mut [Option<usize>],
) -> Result<()> {
    if level == 0 {
        return shape("a word nests deeper than its disk");
    }
    let top = level - 1;
    let mut prev_lift = false;
    for f in &word.0 {
        let lift = matches!(f, Fragment::Lift(_));
        if lift && prev_lift {
            return shape(format!("adjacent Lift fragments in {word}"));
        }
        prev_lift = lift;
        let (row, args) = match f {
            Fragment::Lift(w) => {
                if w.0.is_empty() {
                    return shape("empty Lift fragment");
                }
                emit(disk, w, top, order, degrees)?;
                continue;
            }
            Fragment::Gen(i) => (*i, &[][..]),
            Fragment::Eps(i, args) => {
                if args.is_empty() {
                    return shape("ε needs at least one argument");
                }
                (*i, &args[..])
            }
        };
        let ball = disk
            .index(Ball { col: top, row })
            .ok_or_else(|| Error::Shape(format!("no row {} in column {}", row + 1, top + 1)))?;
        if degrees[ball].replace(args.len()).is_some() {
            return shape(format!("row {} of column {} used twice", row + 1, top + 1));
        }
        order.push(Token { ball, idx: 0 });
        for (j, a) in args.iter().enumerate() {
            if a.0.is_empty() {
                return shape("empty ε argument");
            }
            emit(disk, a, top, order, degrees)?;
            order.push(Token { ball, idx: j + 1 });
        }
    }
    Ok(())
}

/// The configuration of a normal-form word.
pub fn phi_inverse(tw: &TwistedWord) -> Result<Config> {
    let mut order = Vec::new();
    let mut degrees = vec![None; tw.disk.num_balls()];
    emit(
        &tw.disk,
        &tw.word,
        tw.disk.num_columns(),
        &mut order,
        &mut degrees,
    )?;
    let degrees: Vec<usize> = degrees
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Shape(format!("{tw} misses a row")))?;
    let w = vec![0; order.len()];
    let cfg = Config::new(tw.disk.clone(), degrees, order, 0, w)?;
    if cfg.is_degenerate() {
        return shape(format!("{tw} is degenerate"));
    }
    Ok(cfg)
}

fn orientation(disk: &Disk2, word: &Word, level: usize, atoms: &mut Vec<(usize, usize)>) {
    let top = level - 1;
    for f in &word.0 {
        match f {
            Fragment::Gen(_) => {}
            Fragment::Lift(w) => orientation(disk, w, top, atoms),
            Fragment::Eps(row, args) => {
                let ball = disk
                    .index(Ball {
                        col: top,
                        row: *row,
                    })
                    .expect("row checked by phi_inverse");
                for (j, a) in args.iter().enumerate() {
                    atoms.push((ball, j));
                    orientation(disk, a, top, atoms);
                }
            }
        }
    }
}

/// Sign of `Φ` on one basis element: `(−1)^{deg}` times the sign of the
/// permutation sorting the word orientation color by color.
pub fn phi_sign(tw: &TwistedWord) -> Scalar {
    let mut atoms = Vec::new();
    orientation(&tw.disk, &tw.word, tw.disk.num_columns(), &mut atoms);
    let inversions: usize = (0..atoms.len())
        .map(|x| atoms[x + 1..].iter().filter(|&&y| y < atoms[x]).count())
        .sum();
    sign((inversions + atoms.len()) % 2 == 1)
}

/// The chain isomorphism `Nor(Breq)(U) → 𝒪(U)`.
pub fn phi_chain(c: &Chain<Config>) -> Result<Chain<TwistedWord>> {
    let mut res = Chain::zero();
    for (m, x) in c.iter() {
        let tw = phi(m)?;
        let s = phi_sign(&tw);
        res.add_term(tw, s * x);
    }
    Ok(res)
}

/// The inverse of [`phi_chain`].
pub fn phi_inverse_chain(c: &Chain<TwistedWord>) -> Result<Chain<Config>> {
    let mut res = Chain::zero();
    for (tw, x) in c.iter() {
        res.add_term(phi_inverse(tw)?, phi_sign(tw) * x);
    }
    Ok(res)
}

type Terms = Vec<(Scalar, Word)>;

fn parity(ws: &[Word]) -> usize {
    ws.iter().map(Word::weight).sum()
}

fn eps_or_gen(row: usize, args: Vec<Word>) -> Fragment {
    if args.is_empty() {
        Fragment::Gen(row)
    } else {
        Fragment::Eps(row, args)
    }
}

/// One term `coeff · before · ε(f; args) · after` of `d ε(f; …)`.
struct EpsTerm {
    coeff: Scalar,
    before: Word,
    args: Vec<Word>,
    after: Word,
}

/// Terms of `d ε(f; args)`.
fn eps_terms(args: &[Word]) -> Vec<EpsTerm> {
    let l = args.len();
    if l == 0 {
        return Vec::new();
    }
    let lift = |w: &Word| Word(vec![Fragment::Lift(w.clone())]);
    let term = |coeff, before, args, after| EpsTerm {
        coeff,
        before,
        args,
        after,
    };
    let mut res = vec![term(
        int(-1),
        lift(&args[0]),
        args[1..].to_vec(),
        Word::default(),
    )];
    for j in 1..l {
        let mut merged = args[..j - 1].to_vec();
        merged.push(args[j - 1].then(&args[j]));
        merged.extend_from_slice(&args[j + 1..]);
        res.push(term(
            -sign((j + parity(&args[..j])) % 2 == 1),
            Word::default(),
            merged,
            Word::default(),
        ));
    }
    let s = -sign((l + parity(&args[..l - 1])) % 2 == 1);
    res.push(term(
        s,
        Word::default(),
        args[..l - 1].to_vec(),
        lift(&args[l - 1]),
    ));
    for j in 1..=l {
        let s = sign((j + parity(&args[..j - 1])) % 2 == 1);
        for (x, dw) in diff(&args[j - 1]) {
            let mut inner = args.to_vec();
            inner[j - 1] = dw;
            res.push(term(&s * x, Word::default(), inner, Word::default()));
        }
    }
    res
}

fn diff(word: &Word) -> Terms {
    let mut res = Vec::new();
    let mut prefix_weight = 0;
    for (p, f) in word.0.iter().enumerate() {
        let local: Terms = match f {
            Fragment::Gen(_) => Vec::new(),
            Fragment::Lift(w) => diff(w)
                .into_iter()
                .map(|(x, dw)| (x, Word(vec![Fragment::Lift(dw)])))
                .collect(),
            Fragment::Eps(row, args) => eps_terms(args)
                .into_iter()
                .map(|t| {
                    (
                        t.coeff,
                        t.before
                            .then(&Word(vec![eps_or_gen(*row, t.args)]))
                            .then(&t.after),
                    )
                })
                .collect(),
        };
        let s = sign(prefix_weight % 2 == 1);
        let before = Word(word.0[..p].to_vec());
        let after = Word(word.0[p + 1..].to_vec());
        for (x, mid) in local {
            res.push((&s * x, before.then(&mid).then(&after)));
        }
        prefix_weight += match f {
            Fragment::Gen(_) => 0,
            Fragment::Lift(w) => w.weight(),
            Fragment::Eps(_, args) => args.len() + parity(args),
        };
    }
    res
}

/// The differential of the twisted tensor product on a word.
pub fn word_diff(tw: &TwistedWord) -> Chain<TwistedWord> {
    Chain::from_terms(diff(&tw.word).into_iter().map(|(x, w)| {
        (
            TwistedWord {
                disk: tw.disk.clone(),
                word: w,
            },
            x,
        )
    }))
}

/// Linear extension of [`word_diff`].
pub fn word_diff_chain(c: &Chain<TwistedWord>) -> Chain<TwistedWord> {
    c.map_linear(word_diff)
}

/// `ε(f_{i₂} ∘ f_{i₁}; args) = Σ_i ε(f_{i₂}; args[i..]) ∘ ε(f_{i₁}; args[..i])`
/// as a list of fragment composites; `ε(f;)` is `f ⊗ id`. In the word
/// orientation every term carries sign `+1`.
pub fn expand_epsilon_composite(i2: usize, i1: usize, args: &[Word]) -> Result<Chain<Word>> {
    if i2 != i1 + 1 {
        return shape(format!(
            "intervals {} and {} are not adjacent",
            i1 + 1,
            i2 + 1
        ));
    }
    if args.iter().any(|a| a.0.is_empty()) {
        return shape("ε arguments must be non-identity");
    }
    Ok(Chain::from_terms((0..=args.len()).map(|i| {
        let first = Word(vec![eps_or_gen(i1, args[..i].to_vec())]);
        let second = Word(vec![eps_or_gen(i2, args[i..].to_vec())]);
        (first.then(&second), int(1))
    })))
}

/// `d` applied to the formal `ε(f_{i₂} ∘ f_{i₁}; args)` by the ε rule, with
/// every resulting `ε(f_{i₂} ∘ f_{i₁}; …)` expanded.
pub fn expanded_eps_diff(i2: usize, i1: usize, args: &[Word]) -> Result<Chain<Word>> {
    let mut res = Chain::zero();
    for t in eps_terms(args) {
        for (mid, y) in expand_epsilon_composite(i2, i1, &t.args)?.iter() {
            res.add_term(t.before.then(mid).then(&t.after), &t.coeff * y);
        }
    }
    Ok(res)
}

/// Leibniz extension of the word differential to composites that need not be
/// `min → max`.
pub fn diff_word(w: &Word) -> Chain<Word> {
    Chain::from_terms(diff(w).into_iter().map(|(x, w)| (w, x)))
}

/// Operadic composition of words, transported from `Nor(Breq)` along `Φ`.
pub fn plug(
    p: &TreeMap2,
    parts: &[Chain<TwistedWord>],
    outer: &Chain<TwistedWord>,
) -> Result<Chain<TwistedWord>> {
    let parts: Vec<Chain<Config>> = parts.iter().map(phi_inverse_chain).collect::<Result<_>>()?;
    let outer = phi_inverse_chain(outer)?;
    let composite = breq_compose(p, &parts, &outer)?;
    let normalised: Chain<Config> = Chain::from_terms(
        composite
            .iter()
            .filter(|(c, _)| !c.is_degenerate())
            .map(|(c, x)| (c.clone(), x.clone())),
    );
    phi_chain(&normalised)
}

/// All normal-form words over the given row ranges per column, with at most
/// `budget` elementary intervals, paired with their weight.
fn words_over(ranges: &[(usize, usize)], budget: usize) -> Vec<(Word, usize)> {
    let Some((&(lo, hi), lower)) = ranges.split_last() else {
        return vec![(Word::default(), 0)];
    };
    if lo == hi {
        if lower.is_empty() {
            return vec![(Word::default(), 0)];
        }
        return words_over(lower, budget)
            .into_iter()
            .map(|(w, n)| {
                if w.0.is_empty() {
                    (w, n)
                } else {
                    (Word(vec![Fragment::Lift(w)]), n)
                }
            })
            .collect();
    }
    let mut res = Vec::new();
    for total in 0..=budget {
        for degs in crate::seq::degree_assignments(hi - lo, total) {
            // Slots: gap, args of row lo, gap, args of row lo+1, …, gap.
            let mut slots: Vec<bool> = vec![false];
            for &l in &degs {
                slots.extend(std::iter::repeat_n(true, l));
                slots.push(false);
            }
            for split in splits(lower, slots.len()) {
                fill(&slots, &split, &degs, lo, budget - total, total, &mut res);
            }
        }
    }
    res
}

/// Ways to cut each lower column range into consecutive pieces, one per slot.
fn splits(lower: &[(usize, usize)], slots: usize) -> Vec<Vec<Vec<(usize, usize)>>> {
    let mut acc: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![Vec::new(); slots]];
    for &(lo, hi) in lower {
        let mut next = Vec::new();
        for cuts in crate::seq::degree_assignments(slots, hi - lo) {
            for a in &acc {
                let mut a = a.clone();
                let mut start = lo;
                for (s, &c) in cuts.iter().enumerate() {
                    a[s].push((start, start + c));
                    start += c;
                }
                next.push(a);
            }
        }
        acc = next;
    }
    acc
}

fn fill(
    slots: &[bool],
    split: &[Vec<(usize, usize)>],
    degs: &[usize],
    lo: usize,
    budget: usize,
    used: usize,
    out: &mut Vec<(Word, usize)>,
) {
    // Choose sub-words slot by slot within the remaining budget.
    let mut partial: Vec<(Vec<Word>, usize)> = vec![(Vec::new(), 0)];
    for (s, &is_arg) in slots.iter().enumerate() {
        let nonempty = split[s].iter().any(|&(a, b)| a < b);
        if is_arg && !nonempty {
            return;
        }
        let options = words_over(&split[s], budget);
        let mut next = Vec::new();
        for (ws, n) in &partial {
            for (w, m) in &options {
                if n + m <= budget {
                    let mut ws = ws.clone();
                    ws.push(w.clone());
                    next.push((ws, n + m));
                }
            }
        }
        partial = next;
    }
    for (ws, n) in partial {
        let mut it = ws.into_iter();
        let mut frags = Vec::new();
        let gap = |w: Word, frags: &mut Vec<Fragment>| {
            if !w.0.is_empty() {
                frags.push(Fragment::Lift(w));
            }
        };
        gap(it.next().expect("leading gap"), &mut frags);
        for (r, &l) in degs.iter().enumerate() {
            let args: Vec<Word> = it.by_ref().take(l).collect();
            frags.push(eps_or_gen(lo + r, args));
            gap(it.next().expect("gap after a row"), &mut frags);
        }
        out.push((Word(frags), used + n));
    }
}

/// All normal-form words over `disk` with at most `bound` elementary
/// intervals, in canonical order.
pub fn enumerate_words(disk: &Disk2, bound: usize) -> Vec<TwistedWord> {
    let ranges: Vec<(usize, usize)> = disk.columns().iter().map(|&n| (0, n)).collect();
    let mut ws: Vec<TwistedWord> = words_over(&ranges, bound)
        .into_iter()
        .map(|(word, _)| TwistedWord {
            disk: disk.clone(),
            word,
        })
        .collect();
    ws.sort();
    ws
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condensation::{column_basis, vertical_d};

    fn disk(c: &[usize]) -> Disk2 {
        Disk2::new(c.to_vec()).unwrap()
    }

    fn tok(ball: usize, idx: usize) -> Token {
        Token { ball, idx }
    }

    fn word(frags: Vec<Fragment>) -> Word {
        Word(frags)
    }

    fn g(i: usize) -> Word {
        word(vec![Fragment::Gen(i)])
    }

    fn tw(d: &Disk2, w: Word) -> TwistedWord {
        TwistedWord {
            disk: d.clone(),
            word: w,
        }
    }

    fn nor_basis(d: &Disk2, bound: usize) -> Vec<Config> {
        column_basis(d, 0, bound, true)
            .into_values()
            .flatten()
            .filter(|c| c.total_degree() <= bound)
            .collect()
    }

    #[test]
    fn brace_is_epsilon() {
        let u = disk(&[1, 1]);
        let m = Config::new(
            u.clone(),
            vec![0, 1],
            vec![tok(1, 0), tok(0, 0), tok(1, 1)],
            0,
            vec![0; 3],
        )
        .unwrap();
        let w = phi(&m).unwrap();
        assert_eq!(w.word, word(vec![Fragment::Eps(0, vec![g(0)])]));
        assert_eq!(w.degree(), -1);
        assert_eq!(phi_inverse(&w).unwrap(), m);
    }

    #[test]
    fn single_column_is_generators() {
        for n in 1..=4 {
            let u = disk(&[n]);
            let m = nor_basis(&u, 0).pop().unwrap();
            let w = phi(&m).unwrap();
            assert_eq!(w.word, Word((0..n).map(Fragment::Gen).collect()));
            assert_eq!(phi_inverse(&w).unwrap(), m);
        }
    }

    #[test]
    fn lower_block_then_generator() {
        let u = disk(&[1, 1]);
        let m = Config::new(u, vec![0, 0], vec![tok(0, 0), tok(1, 0)], 0, vec![0; 2]).unwrap();
        let w = phi(&m).unwrap();
        assert_eq!(w.word, word(vec![Fragment::Lift(g(0)), Fragment::Gen(0)]));
        assert_eq!(phi_inverse(&w).unwrap(), m);
    }

    #[test]
    fn non_normal_forms_are_rejected() {
        let u = disk(&[2, 1]);
        let adjacent = word(vec![
            Fragment::Lift(g(0)),
            Fragment::Lift(g(1)),
            Fragment::Gen(0),
        ]);
        assert!(phi_inverse(&tw(&u, adjacent)).is_err());
        let empty_arg = word(vec![
            Fragment::Lift(word(vec![Fragment::Gen(0), Fragment::Gen(1)])),
            Fragment::Eps(0, vec![Word::default()]),
        ]);
        assert!(phi_inverse(&tw(&u, empty_arg)).is_err());
        let missing = word(vec![Fragment::Lift(g(0)), Fragment::Gen(0)]);
        assert!(phi_inverse(&tw(&u, missing)).is_err());
        let nu = Config::new(
            disk(&[1]),
            vec![1],
            vec![tok(0, 0), tok(0, 1)],
            0,
            vec![0, 0],
        )
        .unwrap();
        assert!(phi(&nu).is_err());
    }

    #[test]
    fn one_argument_differential() {
        // d ε(f; g) = (id⊗g)∘(f⊗id) − (f⊗id)∘(id⊗g), composites written
        // source to target.
        let u = disk(&[1, 1]);
        let e = tw(&u, word(vec![Fragment::Eps(0, vec![g(0)])]));
        let expected = Chain::from_terms([
            (
                tw(&u, word(vec![Fragment::Gen(0), Fragment::Lift(g(0))])),
                int(1),
            ),
            (
                tw(&u, word(vec![Fragment::Lift(g(0)), Fragment::Gen(0)])),
                int(-1),
            ),
        ]);
        assert_eq!(word_diff(&e), expected);
        assert!(word_diff(&tw(&u, word(vec![Fragment::Lift(g(0)), Fragment::Gen(0)]))).is_zero());
        assert!(word_diff(&tw(
            &disk(&[3]),
            word(vec![Fragment::Gen(0), Fragment::Gen(1), Fragment::Gen(2)])
        ))
        .is_zero());
    }

    #[test]
    fn bijection_and_chain_map() {
        for d in Disk2::all_up_to_size(3) {
            let basis = nor_basis(&d, 3);
            let words = enumerate_words(&d, 3);
            let mut images: Vec<TwistedWord> = basis.iter().map(|m| phi(m).unwrap()).collect();
            images.sort();
            assert_eq!(images, words, "{d}");
            for m in &basis {
                assert_eq!(phi(m).unwrap().degree(), m.degree());
                let lhs = phi_chain(&vertical_d(m, true)).unwrap();
                let rhs = word_diff_chain(&phi_chain(&Chain::basis(m.clone())).unwrap());
                assert_eq!(lhs, rhs, "{m}");
            }
            for w in &words {
                assert_eq!(phi(&phi_inverse(w).unwrap()).unwrap(), *w);
                assert!(word_diff_chain(&word_diff(w)).is_zero(), "d² on {w}");
            }
        }
    }

    #[test]
    fn expansion_small_cases() {
        let e0 = expand_epsilon_composite(1, 0, &[]).unwrap();
        assert_eq!(
            e0,
            Chain::basis(word(vec![Fragment::Gen(0), Fragment::Gen(1)]))
        );
        let a = g(0);
        let e1 = expand_epsilon_composite(1, 0, std::slice::from_ref(&a)).unwrap();
        let t1 = word(vec![Fragment::Gen(0), Fragment::Eps(1, vec![a.clone()])]);
        let t2 = word(vec![Fragment::Eps(0, vec![a.clone()]), Fragment::Gen(1)]);
        assert_eq!(e1, Chain::from_terms([(t1, int(1)), (t2, int(1))]));
        assert!(expand_epsilon_composite(2, 0, &[a]).is_err());
    }

    #[test]
    fn expansion_commutes_with_differential() {
        let args_sets = vec![
            vec![],
            vec![g(0)],
            vec![g(0), g(1)],
            vec![word(vec![Fragment::Gen(0), Fragment::Gen(1)])],
            vec![
                word(vec![Fragment::Eps(
                    0,
                    vec![word(vec![Fragment::Lift(g(0))])],
                )]),
                g(1),
            ],
        ];
        for args in args_sets {
            let lhs = expand_epsilon_composite(1, 0, &args)
                .unwrap()
                .map_linear(diff_word);
            let rhs = expanded_eps_diff(1, 0, &args).unwrap();
            assert_eq!(lhs, rhs, "{args:?}");
        }
    }

    #[test]
    fn plug_examples() {
        // Unit plug.
        let u = disk(&[1, 1]);
        for m in nor_basis(&u, 1) {
            let w = phi_chain(&Chain::basis(m.clone())).unwrap();
            let t = TreeMap2::terminal(&u);
            let unit = phi_chain(&Chain::basis(Config::unit(0))).unwrap();
            assert_eq!(plug(&t, std::slice::from_ref(&w), &unit).unwrap(), w);
        }
        // Degree-0 substitution along (1,1) → (1).
        let p = TreeMap2::new(u.clone(), Disk2::unit(), vec![0, 0], vec![0, 0]).unwrap();
        let part = tw(&u, word(vec![Fragment::Lift(g(0)), Fragment::Gen(0)]));
        let unit = Chain::basis(tw(&Disk2::unit(), g(0)));
        assert_eq!(
            plug(&p, &[Chain::basis(part.clone())], &unit).unwrap(),
            Chain::basis(part)
        );
        // Substituting f₁f₂ into the argument of the brace word.
        let src = disk(&[2, 1]);
        let p = TreeMap2::new(src.clone(), u.clone(), vec![0, 1], vec![0, 0, 1]).unwrap();
        let brace = Chain::basis(tw(&u, word(vec![Fragment::Eps(0, vec![g(0)])])));
        let pair = Chain::basis(tw(
            &disk(&[2]),
            word(vec![Fragment::Gen(0), Fragment::Gen(1)]),
        ));
        let point = Chain::basis(tw(&Disk2::unit(), g(0)));
        let got = plug(&p, &[pair, point], &brace).unwrap();
        let hand = tw(
            &src,
            word(vec![Fragment::Eps(
                0,
                vec![word(vec![Fragment::Gen(0), Fragment::Gen(1)])],
            )]),
        );
        assert_eq!(got, Chain::basis(hand));
    }

    #[test]
    fn json_round_trip() {
        let u = disk(&[2, 1]);
        let w = tw(
            &u,
            word(vec![Fragment::Eps(
                0,
                vec![word(vec![Fragment::Gen(0), Fragment::Gen(1)])],
            )]),
        );
        let v = w.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"disk":{"columns":[2,1]},"word":[{"Eps":[1,[[{"Gen":1},{"Gen":2}]]]}]}"#
        );
        assert_eq!(TwistedWord::from_json(&v).unwrap(), w);
        let bad = serde_json::json!({"disk": {"columns": [2, 1]}, "word": [{"Gen": 1}]});
        assert!(TwistedWord::from_json(&bad).is_err());
    }
}
