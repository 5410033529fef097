//! Whiskering: inserting elementary intervals into the colors of a
//! configuration with output `[0]` to produce configurations with output `J`,
//! and the operad structure on `Breq` it induces.
//!
//! `|seq|(U)` is the bicomplex whose column `ℓ` is the non-normalised
//! `Tot(seq(U)({I_ν}; [ℓ]))`. Its total differential on an element of total
//! degree `t = ℓ − Σ ℓ_ν` is `D = d_v − (−1)^t d_h` with
//! `d_h = Σ_i (−1)^i δ^i_*`.
//!
//! The term `w_{J,s}(α)` carries the sign of the permutation that moves the
//! inserted intervals, in the order of `J`, in front of the old elementary
//! intervals listed color by color, times `(−1)^{ℓ · Σ ℓ_ν}` for `J = [ℓ]`.

use crate::chain::Chain;
use crate::condensation::{horizontal_d, vertical_d};
use crate::error::{shape, Result};
use crate::scalar::{int, sign, Scalar};
use crate::seq::{compose, degree_assignments, Config};
use crate::shapes::TreeMap2;

/// Interval insertion counts `c_{ν,i}`, indexed `[ball][i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Insertion {
    pub counts: Vec<Vec<usize>>,
}

impl Insertion {
    /// Intervals inserted into the color of `ball`.
    pub fn inserted(&self, ball: usize) -> usize {
        self.counts[ball].iter().sum()
    }

    /// `|J| − 1`.
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// The surjection `p_ν : I′_ν → I_ν` as a value list.
    pub fn surjection(&self, ball: usize) -> Vec<usize> {
        self.counts[ball]
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c + 1))
            .collect()
    }
}

/// All insertions of `out` intervals into the colors of `alpha`, as weak
/// compositions over the slots `(ν, i)` in lexicographic order.
pub fn insertions(alpha: &Config, out: usize) -> Vec<Insertion> {
    let slots: Vec<usize> = alpha.degrees().iter().map(|l| l + 1).collect();
    degree_assignments(slots.iter().sum(), out)
        .into_iter()
        .map(|flat| {
            let mut it = flat.into_iter();
            Insertion {
                counts: slots
                    .iter()
                    .map(|&n| it.by_ref().take(n).collect())
                    .collect(),
            }
        })
        .collect()
}

/// The unsigned term `w_{J,s}(α)`: pull back along the `p_ν`, then let `W′`
/// step up exactly on the intervals inside one fiber.
pub fn whisker_term(alpha: &Config, s: &Insertion) -> Result<Config> {
    let maps: Vec<Vec<usize>> = (0..alpha.degrees().len())
        .map(|b| s.surjection(b))
        .collect();
    let pulled = alpha.pullback(&maps)?;
    let mut w = Vec::with_capacity(pulled.order().len());
    let mut level = 0;
    for (q, t) in pulled.order().iter().enumerate() {
        if q > 0 {
            let prev = pulled.order()[q - 1];
            if prev.ball == t.ball && maps[t.ball][prev.idx] == maps[t.ball][t.idx] {
                level += 1;
            }
        }
        w.push(level);
    }
    Config::new(
        pulled.disk().clone(),
        pulled.degrees().to_vec(),
        pulled.order().to_vec(),
        s.total(),
        w,
    )
}

/// Pairs of inserted intervals whose color-by-color order disagrees with
/// their order along the configuration.
fn inversions(alpha: &Config, s: &Insertion) -> usize {
    let pos = alpha.positions();
    let along: Vec<usize> = s
        .counts
        .iter()
        .enumerate()
        .flat_map(|(b, c)| {
            c.iter()
                .enumerate()
                .flat_map(move |(i, &x)| std::iter::repeat_n((b, i), x))
        })
        .map(|(b, i)| pos[b][i])
        .collect();
    (0..along.len())
        .map(|x| along[x + 1..].iter().filter(|&&y| y < along[x]).count())
        .sum()
}

/// Old intervals preceding each inserted one, color by color.
fn shuffle(alpha: &Config, s: &Insertion) -> usize {
    let mut total = 0;
    let mut prefix = 0;
    for (b, c) in s.counts.iter().enumerate() {
        total += c
            .iter()
            .enumerate()
            .map(|(i, x)| (i + prefix) * x)
            .sum::<usize>();
        prefix += alpha.degrees()[b];
    }
    total
}

/// Exponent of the sign in front of `w_{J,s}(α)`.
pub fn sign_exponent(alpha: &Config, s: &Insertion) -> usize {
    inversions(alpha, s) + shuffle(alpha, s) + s.total() * alpha.total_degree()
}

/// `w_J(α)` for `J = [out]` and a configuration `α` with output `[0]`.
pub fn whisker(alpha: &Config, out: usize) -> Result<Chain<Config>> {
    whisker_signed(alpha, out, sign_exponent)
}

fn whisker_signed(
    alpha: &Config,
    out: usize,
    exponent: impl Fn(&Config, &Insertion) -> usize,
) -> Result<Chain<Config>> {
    if alpha.out() != 0 {
        return shape("whiskering needs a configuration with output [0]");
    }
    let mut res = Chain::zero();
    for s in insertions(alpha, out) {
        res.add_term(whisker_term(alpha, &s)?, sign(exponent(alpha, &s) % 2 == 1));
    }
    Ok(res)
}

/// Linear extension of [`whisker`].
pub fn whisker_chain(chain: &Chain<Config>, out: usize) -> Result<Chain<Config>> {
    let mut res = Chain::zero();
    for (c, x) in chain.iter() {
        res.add_scaled(&whisker(c, out)?, x);
    }
    Ok(res)
}

fn horizontal_sign(cfg: &Config) -> Scalar {
    sign((cfg.out() + cfg.total_degree()).is_multiple_of(2))
}

/// The total differential of `|seq|(U)` on one configuration.
pub fn total_d(cfg: &Config) -> Chain<Config> {
    let mut res = vertical_d(cfg, false);
    res.add_scaled(&horizontal_d(cfg, false), &horizontal_sign(cfg));
    res
}

/// Column `ℓ` of `D(w α) − w(d α)`; whiskering is a chain map iff this
/// vanishes for every column.
pub fn chain_map_defect(alpha: &Config, column: usize) -> Result<Chain<Config>> {
    defect_with(alpha, column, sign_exponent)
}

fn defect_with(
    alpha: &Config,
    column: usize,
    exponent: impl Fn(&Config, &Insertion) -> usize + Copy,
) -> Result<Chain<Config>> {
    let mut lhs = whisker_signed(alpha, column, exponent)?.map_linear(|c| vertical_d(c, false));
    if column > 0 {
        for (c, x) in whisker_signed(alpha, column - 1, exponent)?.iter() {
            lhs.add_scaled(&horizontal_d(c, false), &(x * horizontal_sign(c)));
        }
    }
    for (b, x) in vertical_d(alpha, false).iter() {
        lhs.add_scaled(&whisker_signed(b, column, exponent)?, &-x.clone());
    }
    Ok(lhs)
}

/// The projection of `|seq|(U)` onto its column `0`.
pub fn proj(cfg: &Config) -> Chain<Config> {
    if cfg.out() == 0 {
        Chain::basis(cfg.clone())
    } else {
        Chain::zero()
    }
}

/// Koszul sign of the composite of basis elements in `|seq|`.
///
/// The color block of `beta` at `μ` moves past the later parts, each of total
/// degree `out − Σ ℓ_ν`, and the colors of the parts are then reordered from
/// part order into the ball order of the source disk.
pub fn composition_sign(p: &TreeMap2, parts: &[Config], beta: &Config) -> Result<Scalar> {
    let mut e = 0;
    for (mu, &l) in beta.degrees().iter().enumerate() {
        for later in &parts[mu + 1..] {
            e += l * (later.out() + later.total_degree());
        }
    }
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (mu, part) in parts.iter().enumerate() {
        let fiber = p.fiber(mu)?;
        for (f, &ball) in fiber.balls.iter().enumerate() {
            let d = part.degrees()[f];
            e += seen
                .iter()
                .filter(|(b, _)| *b > ball)
                .map(|(_, x)| x * d)
                .sum::<usize>();
            seen.push((ball, d));
        }
    }
    Ok(sign(e % 2 == 1))
}

/// Multilinear composition in `|seq|`: basis elements compose as in `seq`
/// with the sign of [`composition_sign`]; terms whose part outputs do not
/// match the colors of the outer configuration vanish.
pub fn seq_compose(
    p: &TreeMap2,
    parts: &[Chain<Config>],
    beta: &Chain<Config>,
) -> Result<Chain<Config>> {
    if parts.len() != p.target().num_balls() {
        return shape("one inner chain per target ball is required");
    }
    let mut res = Chain::zero();
    for (b, y) in beta.iter() {
        for (combo, coeff) in product(parts) {
            if combo.iter().zip(b.degrees()).any(|(a, &l)| a.out() != l) {
                continue;
            }
            let x = composition_sign(p, &combo, b)? * coeff * y;
            res.add_term(compose(p, &combo, b)?, x);
        }
    }
    Ok(res)
}

/// All choices of one term from each chain, with the product of coefficients.
fn product(chains: &[Chain<Config>]) -> Vec<(Vec<Config>, Scalar)> {
    let mut acc: Vec<(Vec<Config>, Scalar)> = vec![(Vec::new(), int(1))];
    for ch in chains {
        let mut next = Vec::with_capacity(acc.len() * ch.len());
        for (prefix, x) in &acc {
            for (c, y) in ch.iter() {
                let mut v = prefix.clone();
                v.push(c.clone());
                next.push((v, x * y));
            }
        }
        acc = next;
    }
    acc
}

/// The composition `M_P` of `Breq`: whisker each part to the matching color
/// of `beta`, then compose in `seq`.
pub fn breq_compose(
    p: &TreeMap2,
    parts: &[Chain<Config>],
    beta: &Chain<Config>,
) -> Result<Chain<Config>> {
    if parts.len() != p.target().num_balls() {
        return shape("one inner chain per target ball is required");
    }
    let mut res = Chain::zero();
    for (b, y) in beta.iter() {
        if b.out() != 0 {
            return shape("outer chain must have output [0]");
        }
        let whiskered: Vec<Chain<Config>> = parts
            .iter()
            .zip(b.degrees())
            .map(|(a, &l)| whisker_chain(a, l))
            .collect::<Result<_>>()?;
        res.add_scaled(&seq_compose(p, &whiskered, &Chain::basis(b.clone()))?, y);
    }
    Ok(res)
}

/// Both sides of the operad-morphism identity for `w_L`:
/// `m_P(⊗ w α_μ ⊗ w_L β)` and `w_L(m_P(⊗ w α_μ ⊗ β))`.
pub fn morphism_sides(
    p: &TreeMap2,
    parts: &[Config],
    beta: &Config,
    out: usize,
) -> Result<(Chain<Config>, Chain<Config>)> {
    let chains: Vec<Chain<Config>> = parts.iter().map(|a| Chain::basis(a.clone())).collect();
    let mut lhs = Chain::zero();
    for (b, y) in whisker(beta, out)?.iter() {
        let whiskered: Vec<Chain<Config>> = parts
            .iter()
            .zip(b.degrees())
            .map(|(a, &l)| whisker(a, l))
            .collect::<Result<_>>()?;
        lhs.add_scaled(&seq_compose(p, &whiskered, &Chain::basis(b.clone()))?, y);
    }
    let rhs = whisker_chain(&breq_compose(p, &chains, &Chain::basis(beta.clone()))?, out)?;
    Ok((lhs, rhs))
}

/// Koszul sign of regrouping `⊗_q (⊗_{s ∈ τ⁻¹q} α_s ⊗ β_q)` into
/// `(⊗_s α_s) ⊗ (⊗_q β_q)`.
pub fn regrouping_sign(tau: &TreeMap2, alphas: &[Config], betas: &[Config]) -> Result<Scalar> {
    let mut grouped: Vec<(usize, usize)> = Vec::new();
    for (q, beta) in betas.iter().enumerate() {
        for &s in &tau.fiber(q)?.balls {
            grouped.push((s, alphas[s].total_degree()));
        }
        grouped.push((alphas.len() + q, beta.total_degree()));
    }
    let mut e = 0;
    for (x, a) in grouped.iter().enumerate() {
        e += grouped[x + 1..]
            .iter()
            .filter(|b| b.0 < a.0)
            .map(|b| a.1 * b.1)
            .sum::<usize>();
    }
    Ok(sign(e % 2 == 1))
}

/// Both bracketings of a double composite in `Breq`, the second one carrying
/// the [`regrouping_sign`]; `Breq` is associative iff they agree.
pub fn breq_associativity_sides(
    sigma: &TreeMap2,
    tau: &TreeMap2,
    alphas: &[Config],
    betas: &[Config],
    delta: &Config,
) -> Result<(Chain<Config>, Chain<Config>)> {
    let basis = |c: &Config| Chain::basis(c.clone());
    let mut gammas = Vec::with_capacity(betas.len());
    for (q, beta) in betas.iter().enumerate() {
        let parts: Vec<Chain<Config>> = tau
            .fiber(q)?
            .balls
            .iter()
            .map(|&s| basis(&alphas[s]))
            .collect();
        gammas.push(breq_compose(
            &sigma.restrict(tau, q)?,
            &parts,
            &basis(beta),
        )?);
    }
    let lhs = breq_compose(&sigma.then(tau)?, &gammas, &basis(delta))?;
    let alpha_chains: Vec<Chain<Config>> = alphas.iter().map(basis).collect();
    let beta_chains: Vec<Chain<Config>> = betas.iter().map(basis).collect();
    let inner = breq_compose(tau, &beta_chains, &basis(delta))?;
    let rhs =
        breq_compose(sigma, &alpha_chains, &inner)?.scaled(&regrouping_sign(tau, alphas, betas)?);
    Ok((lhs, rhs))
}

/// `d M_P(⊗ α_μ ⊗ β) − Σ ± M_P(…)` with the differential moved onto each
/// input by the Koszul rule; `M_P` is a chain map iff this vanishes.
pub fn leibniz_defect(p: &TreeMap2, parts: &[Config], beta: &Config) -> Result<Chain<Config>> {
    let chains: Vec<Chain<Config>> = parts.iter().map(|a| Chain::basis(a.clone())).collect();
    let outer = Chain::basis(beta.clone());
    let mut res = breq_compose(p, &chains, &outer)?.map_linear(|c| vertical_d(c, false));
    let mut before = 0;
    for (i, a) in parts.iter().enumerate() {
        let mut moved = chains.clone();
        moved[i] = vertical_d(a, false);
        res.add_scaled(&breq_compose(p, &moved, &outer)?, &-sign(before % 2 == 1));
        before += a.total_degree();
    }
    res.add_scaled(
        &breq_compose(p, &chains, &vertical_d(beta, false))?,
        &-sign(before % 2 == 1),
    );
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condensation::column_basis;
    use crate::seq::Token;
    use crate::shapes::{enumerate_surjections, Disk2};

    fn disk(c: &[usize]) -> Disk2 {
        Disk2::new(c.to_vec()).unwrap()
    }

    fn basis(d: &Disk2, bound: usize) -> Vec<Config> {
        column_basis(d, 0, bound, false)
            .into_values()
            .flatten()
            .filter(|c| c.total_degree() <= bound)
            .collect()
    }

    fn tok(ball: usize, idx: usize) -> Token {
        Token { ball, idx }
    }

    #[test]
    fn insertion_counts() {
        let u = disk(&[1, 1]);
        let a = Config::new(
            u.clone(),
            vec![0, 0],
            vec![tok(0, 0), tok(1, 0)],
            0,
            vec![0, 0],
        )
        .unwrap();
        assert_eq!(insertions(&a, 0).len(), 1);
        assert_eq!(insertions(&a, 1).len(), 2);
        let b = Config::new(
            u,
            vec![0, 1],
            vec![tok(1, 0), tok(0, 0), tok(1, 1)],
            0,
            vec![0; 3],
        )
        .unwrap();
        assert_eq!(insertions(&b, 2).len(), 6);
        // C(|J|−1+M−1, M−1) with M = 3 slots.
        assert_eq!(insertions(&b, 3).len(), 10);
    }

    #[test]
    fn whisker_to_a_point_is_identity() {
        for a in basis(&disk(&[1, 2]), 2) {
            assert_eq!(whisker(&a, 0).unwrap(), Chain::basis(a.clone()));
            assert_eq!(whisker(&a, 0).unwrap().map_linear(proj), Chain::basis(a));
        }
    }

    #[test]
    fn whisker_two_points() {
        let u = disk(&[1, 1]);
        let a = Config::new(
            u.clone(),
            vec![0, 0],
            vec![tok(0, 0), tok(1, 0)],
            0,
            vec![0, 0],
        )
        .unwrap();
        let w = whisker(&a, 1).unwrap();
        let x = Config::new(
            u.clone(),
            vec![1, 0],
            vec![tok(0, 0), tok(0, 1), tok(1, 0)],
            1,
            vec![0, 1, 1],
        )
        .unwrap();
        let y = Config::new(
            u,
            vec![0, 1],
            vec![tok(0, 0), tok(1, 0), tok(1, 1)],
            1,
            vec![0, 0, 1],
        )
        .unwrap();
        assert_eq!(w, Chain::from_terms([(x, int(1)), (y, int(1))]));
    }

    #[test]
    fn single_color_signs_alternate() {
        // One color of degree 1, one inserted interval: the insertion after the
        // old interval carries the opposite sign.
        let a = Config::new(
            disk(&[1]),
            vec![1],
            vec![tok(0, 0), tok(0, 1)],
            0,
            vec![0, 0],
        )
        .unwrap();
        let w = whisker(&a, 1).unwrap();
        let coeffs: Vec<Scalar> = w.iter().map(|(_, x)| x.clone()).collect();
        assert_eq!(coeffs.len(), 2);
        assert_eq!(&coeffs[0] + &coeffs[1], int(0));
    }

    #[test]
    fn total_differential_squares_to_zero() {
        let u = disk(&[1, 1]);
        for out in 0..=2 {
            for c in column_basis(&u, out, 1, false).into_values().flatten() {
                assert!(total_d(&c).map_linear(total_d).is_zero(), "D² ≠ 0 on {c}");
            }
        }
    }

    #[test]
    fn chain_map_small() {
        for d in Disk2::all_up_to_size(2) {
            for a in basis(&d, 2) {
                for l in 0..=2 {
                    assert!(
                        chain_map_defect(&a, l).unwrap().is_zero(),
                        "defect on {a} at column {l}"
                    );
                }
            }
        }
    }

    /// `Σ_{a <₀ b} n_{a,b}` with `n_{a,b} = r_{a,b} c_a + ℓ_a Σ_{j ≤ p_b(r_{a,b})} c_{b,j}`,
    /// for the three readings of `<₀`.
    fn pair_formula(alpha: &Config, s: &Insertion, reading: usize) -> usize {
        let n = alpha.degrees().len();
        let order = alpha.order();
        let first: Vec<usize> = (0..n)
            .map(|b| order.iter().position(|t| t.ball == b).unwrap())
            .collect();
        let balls = alpha.disk().balls();
        let mut total = 0;
        for a in 0..n {
            for b in 0..n {
                let related = match reading {
                    0 => balls[a].col < balls[b].col,
                    1 => a < b,
                    _ => first[a] < first[b],
                };
                let before = order[..first[a]].iter().filter(|t| t.ball == b).count();
                if !related || before == 0 {
                    continue;
                }
                let r = s.counts[b][..before].iter().map(|c| c + 1).sum::<usize>() - 1;
                let inserted_b: usize = s.counts[b][..before].iter().sum();
                total += r * s.inserted(a) + inserted_b * alpha.degrees()[a];
            }
        }
        total
    }

    #[test]
    fn pair_formula_is_not_a_chain_map() {
        // Any reading of <₀, alone or on top of the color-by-color shuffle sign.
        let alphas: Vec<Config> = [disk(&[1]), disk(&[1, 1])]
            .iter()
            .flat_map(|d| basis(d, 2))
            .collect();
        for reading in 0..3 {
            for with_shuffle in [false, true] {
                let exp = move |a: &Config, s: &Insertion| {
                    let base =
                        s.total() * a.total_degree() + if with_shuffle { shuffle(a, s) } else { 0 };
                    base + pair_formula(a, s, reading)
                };
                let passes = alphas
                    .iter()
                    .all(|a| (0..=2).all(|l| defect_with(a, l, exp).unwrap().is_zero()));
                assert!(!passes, "reading {reading}, shuffle {with_shuffle}");
            }
        }
    }

    #[test]
    fn inversions_are_needed() {
        let exp = |a: &Config, s: &Insertion| shuffle(a, s) + s.total() * a.total_degree();
        let alphas = basis(&disk(&[1, 1]), 2);
        assert!(!alphas
            .iter()
            .all(|a| (0..=2).all(|l| defect_with(a, l, exp).unwrap().is_zero())));
    }

    #[test]
    fn composition_units() {
        let u = disk(&[2, 1]);
        for a in basis(&u, 1) {
            let id = TreeMap2::identity(&u);
            let units: Vec<Chain<Config>> = a
                .degrees()
                .iter()
                .map(|_| Chain::basis(Config::unit(0)))
                .collect();
            let got = breq_compose(&id, &units, &Chain::basis(a.clone())).unwrap();
            assert_eq!(got, Chain::basis(a.clone()));
            let t = TreeMap2::terminal(&u);
            let got = breq_compose(
                &t,
                &[Chain::basis(a.clone())],
                &Chain::basis(Config::unit(0)),
            )
            .unwrap();
            assert_eq!(got, Chain::basis(a));
        }
    }

    #[test]
    fn operad_identity_small() {
        let u = disk(&[1, 1]);
        let v = disk(&[1]);
        for p in enumerate_surjections(&u, &v) {
            let fiber = p.fiber(0).unwrap();
            for a in basis(&fiber.disk, 1) {
                for b in basis(&v, 1) {
                    for l in 0..=1 {
                        let (lhs, rhs) =
                            morphism_sides(&p, std::slice::from_ref(&a), &b, l).unwrap();
                        assert_eq!(lhs, rhs, "α = {a}, β = {b}, L = [{l}]");
                    }
                }
            }
        }
    }

    #[test]
    fn breq_is_associative_small() {
        let t = disk(&[1, 1]);
        let s = disk(&[1, 1]);
        let q = disk(&[1]);
        for sigma in enumerate_surjections(&t, &s) {
            for tau in enumerate_surjections(&s, &q) {
                for a0 in basis(&Disk2::unit(), 1) {
                    for a1 in basis(&Disk2::unit(), 1) {
                        for b in basis(&s, 1) {
                            for delta in basis(&q, 1) {
                                let (lhs, rhs) = breq_associativity_sides(
                                    &sigma,
                                    &tau,
                                    &[a0.clone(), a1.clone()],
                                    std::slice::from_ref(&b),
                                    &delta,
                                )
                                .unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn composition_is_a_chain_map_small() {
        let u = disk(&[1, 1]);
        for p in enumerate_surjections(&u, &u)
            .into_iter()
            .chain(enumerate_surjections(&u, &Disk2::unit()))
        {
            let fibers: Vec<Disk2> = (0..p.target().num_balls())
                .map(|m| p.fiber(m).unwrap().disk)
                .collect();
            for beta in basis(p.target(), 1) {
                let parts: Vec<Config> =
                    fibers.iter().map(|f| basis(f, 1).pop().unwrap()).collect();
                assert!(leibniz_defect(&p, &parts, &beta).unwrap().is_zero());
            }
        }
    }
}
