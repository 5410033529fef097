//! Condensation of `seq` into cochain complexes: the brace complex `Breq(U)`,
//! its normalised quotient, the columns `Tot(seq(U)({I_ν}; [ℓ]))`, and an
//! independent Hochschild model for two-column disks.
//!
//! A configuration with colors `[ℓ_ν]` sits in degree `−Σ ℓ_ν`. The face
//! deleting token `(ν, i)` carries the sign `(−1)^{i + Σ_{ν′<ν} ℓ_{ν′}}`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::chain::Chain;
use crate::error::Result;
use crate::homology::Complex;
use crate::scalar::{sign, Scalar};
use crate::seq::{degree_assignments, enumerate_configs, enumerate_nondegenerate, Config, Token};
use crate::shapes::Disk2;

/// Sign of the face deleting token `(ball, i)` of `cfg`.
pub fn face_sign(cfg: &Config, ball: usize, i: usize) -> Scalar {
    let before: usize = cfg.degrees()[..ball].iter().sum();
    sign((i + before) % 2 == 1)
}

/// Vertical differential: signed sum of all faces. With `normalised`,
/// degenerate faces are dropped.
pub fn vertical_d(cfg: &Config, normalised: bool) -> Chain<Config> {
    let mut out = Chain::zero();
    for (ball, &l) in cfg.degrees().iter().enumerate() {
        if l == 0 {
            continue;
        }
        for i in 0..=l {
            let f = cfg.face(ball, i).expect("face index in range");
            if normalised && f.is_degenerate() {
                continue;
            }
            out.add_term(f, face_sign(cfg, ball, i));
        }
    }
    out
}

/// Horizontal differential `Σ_i (−1)^i δ^i_*` into output `[out + 1]`,
/// where `δ^i : [out] → [out+1]` skips `i`.
pub fn horizontal_d(cfg: &Config, normalised: bool) -> Chain<Config> {
    let out = cfg.out();
    let mut res = Chain::zero();
    for i in 0..=out + 1 {
        let psi: Vec<usize> = (0..=out).map(|x| if x < i { x } else { x + 1 }).collect();
        let c = cfg.pushforward(&psi, out + 1).expect("coface is monotone");
        if normalised && c.is_degenerate() {
            continue;
        }
        res.add_term(c, sign(i % 2 == 1));
    }
    res
}

/// The canonical projection onto the normalised quotient.
pub fn quotient(cfg: &Config) -> Chain<Config> {
    if cfg.is_degenerate() {
        Chain::zero()
    } else {
        Chain::basis(cfg.clone())
    }
}

/// Basis of the column `[out]` in degrees `0 ≥ q ≥ −(bound + 1)`.
pub fn column_basis(
    disk: &Disk2,
    out: usize,
    bound: usize,
    normalised: bool,
) -> BTreeMap<i32, Vec<Config>> {
    (0..=bound + 1)
        .into_par_iter()
        .map(|s| {
            let mut b: Vec<Config> = degree_assignments(disk.num_balls(), s)
                .iter()
                .flat_map(|deg| {
                    if normalised {
                        enumerate_nondegenerate(disk, deg, out)
                    } else {
                        enumerate_configs(disk, deg, out)
                    }
                })
                .collect();
            b.sort();
            (-(s as i32), b)
        })
        .collect()
}

/// `Tot(seq(U)({I_ν}; [out]))` for the window `[−bound, 0]`, plus the extra
/// degree below needed for exact cohomology at `−bound`.
pub fn tot_column(
    disk: &Disk2,
    out: usize,
    bound: usize,
    normalised: bool,
) -> Result<Complex<Config>> {
    Complex::build(column_basis(disk, out, bound, normalised), false, |c| {
        vertical_d(c, normalised)
    })
}

/// `Breq(U)` on the window `[−bound, 0]`.
pub fn breq(disk: &Disk2, bound: usize) -> Result<Complex<Config>> {
    tot_column(disk, 0, bound, false)
}

/// `Nor(Breq)(U)` on the window `[−bound, 0]`.
pub fn nor_breq(disk: &Disk2, bound: usize) -> Result<Complex<Config>> {
    tot_column(disk, 0, bound, true)
}

/// An element `m₀ ⊗ (a¹) ⊗_A m₁ ⊗ (a²) ⊗_A … ⊗ (aⁿ) ⊗ m_n` of the `n`-fold
/// tensor product over `A = k[t]` of reduced Hochschild complexes
/// `Hoch(A, A ⊗ A)`. Exponents `m_j ≥ 0` sit between the bar factors, and
/// each bar factor `(a_1, …, a_k)` has positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HochWord {
    pub outer: Vec<usize>,
    pub bars: Vec<Vec<usize>>,
}

impl HochWord {
    pub fn degree(&self) -> i32 {
        -(self.bars.iter().map(Vec::len).sum::<usize>() as i32)
    }

    /// Total exponent of `t`.
    pub fn weight(&self) -> usize {
        self.outer.iter().sum::<usize>() + self.bars.iter().flatten().sum::<usize>()
    }

    /// Bar differential, with the Koszul sign `(−1)^{deg}` of the bar
    /// factors to the left.
    pub fn d(&self) -> Chain<HochWord> {
        let mut res = Chain::zero();
        let mut before = 0;
        for (j, bar) in self.bars.iter().enumerate() {
            let k = bar.len();
            for i in 0..=k {
                if k == 0 {
                    break;
                }
                let mut w = self.clone();
                let b = &mut w.bars[j];
                if i == 0 {
                    w.outer[j] += b.remove(0);
                } else if i == k {
                    w.outer[j + 1] += b.pop().unwrap();
                } else {
                    let x = b.remove(i);
                    b[i - 1] += x;
                }
                res.add_term(w, sign((before + i) % 2 == 1));
            }
            before += k;
        }
        res
    }
}

impl fmt::Display for HochWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}", self.outer[0])?;
        for (j, bar) in self.bars.iter().enumerate() {
            let a: Vec<String> = bar.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]t^{}", a.join(","), self.outer[j + 1])?;
        }
        Ok(())
    }
}

/// Basis of weight `weight` with `factors` bar factors and `Σ k_j = s`.
fn hoch_basis(weight: usize, factors: usize, s: usize) -> Vec<HochWord> {
    let mut res = Vec::new();
    for lens in degree_assignments(factors, s) {
        // Distribute the weight: outer exponents (≥ 0) and bar exponents (≥ 1).
        if s > weight {
            continue;
        }
        let slots = factors + 1 + s;
        for split in degree_assignments(slots, weight - s) {
            let outer: Vec<usize> = split[..factors + 1].to_vec();
            let mut rest = split[factors + 1..].iter();
            let bars = lens
                .iter()
                .map(|&k| (0..k).map(|_| rest.next().unwrap() + 1).collect())
                .collect();
            res.push(HochWord { outer, bars });
        }
    }
    res.sort();
    res
}

/// The weight-`n₁` part of the `n₂`-fold product, on the window `[−bound, 0]`.
pub fn hochschild_oracle(n1: usize, n2: usize, bound: usize) -> Result<Complex<HochWord>> {
    let bases: BTreeMap<i32, Vec<HochWord>> = (0..=bound + 1)
        .map(|s| (-(s as i32), hoch_basis(n1, n2, s)))
        .collect();
    Complex::build(bases, false, HochWord::d)
}

/// Reads a normalised configuration on `(n₁, n₂)` as a Hochschild word: the
/// blocks of first-column tokens between consecutive second-column tokens
/// give the exponents.
pub fn hochschild_word(cfg: &Config) -> Option<HochWord> {
    let cols = cfg.disk().columns();
    if cols.len() != 2 {
        return None;
    }
    let n1 = cols[0];
    let mut outer = vec![0; cols[1] + 1];
    let mut bars: Vec<Vec<usize>> = cfg.degrees()[n1..]
        .iter()
        .map(|&k| Vec::with_capacity(k))
        .collect();
    let mut current: Option<Token> = None;
    let mut run = 0;
    let flush = |current: Option<Token>,
                 run: usize,
                 outer: &mut Vec<usize>,
                 bars: &mut Vec<Vec<usize>>,
                 next: Option<Token>| {
        match (current, next) {
            (None, _) => outer[0] += run,
            (Some(t), Some(n)) if n.ball == t.ball => bars[t.ball - n1].push(run),
            (Some(t), _) => outer[t.ball - n1 + 1] += run,
        }
    };
    for t in cfg.order() {
        if t.ball < n1 {
            run += 1;
        } else {
            flush(current, run, &mut outer, &mut bars, Some(*t));
            current = Some(*t);
            run = 0;
        }
    }
    flush(current, run, &mut outer, &mut bars, None);
    Some(HochWord { outer, bars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ScalarKind};
    use crate::seq::Token;

    fn disk(c: &[usize]) -> Disk2 {
        Disk2::new(c.to_vec()).unwrap()
    }

    fn tok(ball: usize, idx: usize) -> Token {
        Token { ball, idx }
    }

    #[test]
    fn single_column_is_a_point() {
        for n in 1..=4 {
            let c = nor_breq(&disk(&[n]), 2).unwrap();
            assert_eq!(c.dim(0), 1);
            assert_eq!(c.dim(-1), 0);
            assert_eq!(c.dim(-2), 0);
        }
    }

    #[test]
    fn two_balls_side_by_side() {
        let u = disk(&[1, 1]);
        let c = nor_breq(&u, 1).unwrap();
        assert_eq!(c.dim(0), 2);
        assert_eq!(c.dim(-1), 1);
        assert_eq!(c.dim(-2), 0);
        let brace = &c.basis(-1)[0];
        assert_eq!(brace.order(), &[tok(1, 0), tok(0, 0), tok(1, 1)]);
        let d = c.d_basis(brace);
        let nu_lambda = Config::new(
            u.clone(),
            vec![0, 0],
            vec![tok(0, 0), tok(1, 0)],
            0,
            vec![0, 0],
        )
        .unwrap();
        let lambda_nu =
            Config::new(u, vec![0, 0], vec![tok(1, 0), tok(0, 0)], 0, vec![0, 0]).unwrap();
        assert_eq!(d.coeff(&nu_lambda), int(1));
        assert_eq!(d.coeff(&lambda_nu), int(-1));
        let h = c.homology(-1..=0).unwrap();
        assert_eq!(h.betti_descending(), vec![1, 0]);
    }

    #[test]
    fn four_one_example() {
        // ν₁ λ ν₂ ν₃ λ ν₄ on (4,1) with λ of degree 1.
        let u = disk(&[4, 1]);
        let l = 4;
        let cfg = Config::new(
            u.clone(),
            vec![0, 0, 0, 0, 1],
            vec![
                tok(0, 0),
                tok(l, 0),
                tok(1, 0),
                tok(2, 0),
                tok(l, 1),
                tok(3, 0),
            ],
            0,
            vec![0; 6],
        )
        .unwrap();
        let d = vertical_d(&cfg, true);
        let a = Config::new(
            u.clone(),
            vec![0; 5],
            vec![tok(0, 0), tok(1, 0), tok(2, 0), tok(l, 0), tok(3, 0)],
            0,
            vec![0; 5],
        )
        .unwrap();
        let b = Config::new(
            u,
            vec![0; 5],
            vec![tok(0, 0), tok(l, 0), tok(1, 0), tok(2, 0), tok(3, 0)],
            0,
            vec![0; 5],
        )
        .unwrap();
        assert_eq!(d, Chain::from_terms([(a, int(1)), (b, int(-1))]));
    }

    #[test]
    fn column_zero_is_breq() {
        let u = disk(&[1, 2]);
        let a = tot_column(&u, 0, 2, true).unwrap();
        let b = nor_breq(&u, 2).unwrap();
        for q in -3..=0 {
            assert_eq!(a.basis(q), b.basis(q));
            assert_eq!(a.differential(q), b.differential(q));
        }
    }

    #[test]
    fn horizontal_commutes_with_vertical() {
        let u = disk(&[1, 1]);
        for cfg in column_basis(&u, 1, 1, false).values().flatten() {
            let vh = horizontal_d(cfg, false).map_linear(|c| vertical_d(c, false));
            let hv = vertical_d(cfg, false).map_linear(|c| horizontal_d(c, false));
            assert_eq!(vh, hv);
            assert!(horizontal_d(cfg, false)
                .map_linear(|c| horizontal_d(c, false))
                .is_zero());
        }
    }

    #[test]
    fn quotient_is_a_chain_map() {
        let u = disk(&[1, 1]);
        let b = breq(&u, 2).unwrap();
        let n = nor_breq(&u, 2).unwrap();
        let r = crate::homology::check_quasi_iso(&b, &n, quotient, -2..=0).unwrap();
        assert!(r.is_quasi_iso());
    }

    #[test]
    fn hochschild_small_case() {
        let h = hochschild_oracle(1, 1, 1).unwrap();
        assert_eq!(
            h.basis(0).iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            vec!["t^0[]t^1", "t^1[]t^0"]
        );
        assert_eq!(
            h.basis(-1)
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>(),
            vec!["t^0[1]t^0"]
        );
        assert_eq!(
            h.betti(-1..=0, ScalarKind::Rational)
                .unwrap()
                .values()
                .cloned()
                .collect::<Vec<_>>(),
            vec![0, 1]
        );
    }

    #[test]
    fn hochschild_word_of_brace() {
        let u = disk(&[2, 1]);
        let cfg = Config::new(
            u,
            vec![0, 0, 0],
            vec![tok(0, 0), tok(2, 0), tok(1, 0)],
            0,
            vec![0; 3],
        )
        .unwrap();
        assert_eq!(hochschild_word(&cfg).unwrap().to_string(), "t^1[]t^1");
    }

    #[test]
    fn simplex_column() {
        let h = tot_column(&disk(&[1]), 1, 2, false)
            .unwrap()
            .betti(-2..=0, ScalarKind::Rational)
            .unwrap();
        assert_eq!(h.values().cloned().collect::<Vec<_>>(), vec![0, 0, 1]);
    }
}
