//! Classical strategies and their exact scores.
//!
//! A deterministic strategy fixes each player's output on input 0 and on
//! input 1. In sign form S_ij = +1 when player i outputs 0 on input j and
//! −1 otherwise; the Gaussian integer s = Π (S_i0 + i·S_i1) then has real
//! part equal to wins minus losses over the legitimate questions.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    legitimate_by_rank, legitimate_questions, low_mask, position, wins_packed, Answer, GameConfig,
    Question,
};
use crate::{Limits, Rational};

/// Strategy codes per parallel work item.
const SWEEP_CHUNK: u64 = 1 << 12;

/// Exact complex integer a + b·i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    /// i^k.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    pub fn norm_sqr(&self) -> i64 {
        self.re * self.re + self.im * self.im
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl std::ops::Add for GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl std::ops::Neg for GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Output table of a deterministic strategy, packed into one word.
///
/// Player i (0-based) owns bits `2(n-1-i)+1` (output on input 0) and
/// `2(n-1-i)` (output on input 1), so the code read in binary is the
/// concatenation of the players' two-character strings, player 1 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Strategy {
    n: u8,
    code: u64,
}

/// Largest n a packed strategy supports.
pub const MAX_STRATEGY_PLAYERS: usize = 31;

impl Strategy {
    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        if n > MAX_STRATEGY_PLAYERS {
            return Err(Error::TooManyPlayers {
                n,
                max: MAX_STRATEGY_PLAYERS,
            });
        }
        if n == 0 || code & !low_mask(2 * n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "code {code:#x} does not describe {n} players"
            )));
        }
        Ok(Strategy { n: n as u8, code })
    }

    fn from_raw(n: usize, code: u64) -> Self {
        Strategy { n: n as u8, code }
    }

    /// Every player answers `on_zero` to input 0 and `on_one` to input 1.
    pub fn uniform(cfg: GameConfig, on_zero: u8, on_one: u8) -> Result<Self> {
        let pairs = vec![[on_zero, on_one]; cfg.n()];
        Strategy::from_outputs(&pairs)
    }

    /// Builds from per-player `[output on 0, output on 1]` pairs.
    pub fn from_outputs(pairs: &[[u8; 2]]) -> Result<Self> {
        let n = pairs.len();
        if n > MAX_STRATEGY_PLAYERS {
            return Err(Error::TooManyPlayers {
                n,
                max: MAX_STRATEGY_PLAYERS,
            });
        }
        let mut code = 0u64;
        for pair in pairs {
            for &b in pair {
                if b > 1 {
                    return Err(Error::InvalidParameter(format!("output {b} is not a bit")));
                }
                code = (code << 1) | b as u64;
            }
        }
        Strategy::from_code(n, code)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    fn shift(&self, player: usize, input: u8) -> u32 {
        2 * position(self.n(), player) + (1 - input as u32)
    }

    /// y for player `player` on input bit `input`.
    pub fn output(&self, player: usize, input: u8) -> u8 {
        ((self.code >> self.shift(player, input)) & 1) as u8
    }

    /// S_ij in {+1, -1}.
    pub fn sign(&self, player: usize, input: u8) -> i64 {
        1 - 2 * self.output(player, input) as i64
    }

    pub fn with_output(&self, player: usize, input: u8, value: u8) -> Self {
        let bit = 1u64 << self.shift(player, input);
        let code = if value & 1 == 1 {
            self.code | bit
        } else {
            self.code & !bit
        };
        Strategy::from_raw(self.n(), code)
    }

    /// Outputs on input 0 and on input 1 as packed n-bit words.
    fn output_words(&self) -> (u64, u64) {
        split_code(self.n(), self.code)
    }

    pub fn eval_answer(&self, q: &Question) -> Result<Answer> {
        if q.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: q.len(),
            });
        }
        let (on0, on1) = self.output_words();
        let x = q.bits();
        Ok(Answer::from_raw(self.n(), (on0 & !x & low_mask(self.n())) | (on1 & x), 0))
    }

    /// True if the strategy answers `q` appropriately. `q` must be
    /// legitimate and of matching length.
    pub fn wins(&self, q: &Question) -> Result<bool> {
        let a = self.eval_answer(q)?;
        crate::game::is_appropriate(q, &a)
    }

    /// Legitimate questions answered appropriately, by direct count.
    pub fn win_count(&self) -> u64 {
        let (on0, on1) = self.output_words();
        count_wins(self.n(), on0, on1)
    }

    pub fn success_proportion(&self) -> Rational {
        let total = 1i128 << (self.n() - 1);
        Rational::new(self.win_count() as i128, total)
    }

    /// s = Π (S_i0 + i·S_i1).
    pub fn score_product(&self) -> GaussianInt {
        (0..self.n())
            .map(|i| GaussianInt::new(self.sign(i, 0), self.sign(i, 1)))
            .fold(GaussianInt::ONE, |acc, f| acc * f)
    }

    /// Exact score with both routes reconciled.
    pub fn score(&self) -> Result<StrategyScore> {
        let s = self.score_product();
        let wins = self.win_count();
        let losses = (1u64 << (self.n() - 1)) - wins;
        let diff = wins as i64 - losses as i64;
        if s.re != diff {
            return Err(Error::ScoreMismatch { re: s.re, diff });
        }
        Ok(StrategyScore { s, wins, losses })
    }

    /// Whether Re(s) reaches 2^⌊n/2⌋.
    pub fn is_optimal(&self) -> bool {
        self.score_product().re == optimal_re(self.n())
    }

    /// The bijection on players 1 and 2 that carries winners of 00x_3…x_n
    /// to winners of 11x_3…x_n while fixing s.
    pub fn pair_flip_map(&self) -> Result<Self> {
        self.pair_flip_map_at(0, 1)
    }

    /// The same bijection acting on players `a` and `b` (0-based) in the
    /// roles of players 1 and 2: S'_a0 = S_a1, S'_a1 = −S_a0,
    /// S'_b0 = −S_b1, S'_b1 = S_b0.
    pub fn pair_flip_map_at(&self, a: usize, b: usize) -> Result<Self> {
        let n = self.n();
        for idx in [a, b] {
            if idx >= n {
                return Err(Error::PlayerOutOfRange { index: idx, n });
            }
        }
        if a == b {
            return Err(Error::InvalidParameter(
                "pair flip needs two distinct players".into(),
            ));
        }
        // a negated sign is a flipped output bit
        let (a0, a1) = (self.output(a, 0), self.output(a, 1));
        let (b0, b1) = (self.output(b, 0), self.output(b, 1));
        Ok(self
            .with_output(a, 0, a1)
            .with_output(a, 1, a0 ^ 1)
            .with_output(b, 0, b1 ^ 1)
            .with_output(b, 1, b0))
    }

    /// All 4^n strategies in code order.
    pub fn all(cfg: GameConfig) -> Result<impl Iterator<Item = Strategy>> {
        let n = cfg.n();
        if n > MAX_STRATEGY_PLAYERS {
            return Err(Error::TooManyPlayers {
                n,
                max: MAX_STRATEGY_PLAYERS,
            });
        }
        Ok((0..1u64 << (2 * n)).map(move |code| Strategy::from_raw(n, code)))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", self.output(i, 0), self.output(i, 1))?;
        }
        Ok(())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Parses per-player pairs such as `"11 00 00"` (whitespace optional).
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<_>>()?;
        if !digits.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "strategy {s:?} has an odd number of digits"
            )));
        }
        let pairs: Vec<[u8; 2]> = digits.chunks(2).map(|c| [c[0], c[1]]).collect();
        Strategy::from_outputs(&pairs)
    }
}

/// Deinterleaves a strategy code into (outputs on 0, outputs on 1).
#[inline]
fn split_code(n: usize, code: u64) -> (u64, u64) {
    let mut on0 = 0u64;
    let mut on1 = 0u64;
    for p in 0..n {
        on1 |= ((code >> (2 * p)) & 1) << p;
        on0 |= ((code >> (2 * p + 1)) & 1) << p;
    }
    (on0, on1)
}

#[inline]
fn count_wins(n: usize, on0: u64, on1: u64) -> u64 {
    let mask = low_mask(n);
    (0..1u64 << (n - 1))
        .filter(|&k| {
            let x = legitimate_by_rank(k);
            wins_packed(x, (on0 & !x & mask) | (on1 & x))
        })
        .count() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyScore {
    pub s: GaussianInt,
    pub wins: u64,
    pub losses: u64,
}

/// 2^⌊n/2⌋, the largest attainable Re(s).
pub fn optimal_re(n: usize) -> i64 {
    1i64 << (n / 2)
}

/// ½ + 2^(−⌈n/2⌉).
pub fn classical_bound(n: usize) -> Rational {
    Rational::new(1, 2) + Rational::new(1, 1i128 << n.div_ceil(2))
}

/// Result of the exhaustive deterministic sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestStrategies {
    pub n: usize,
    pub max_wins: u64,
    pub proportion: Rational,
    /// Every maximizing strategy, in code order.
    pub witnesses: Vec<Strategy>,
    pub strategies_examined: u64,
}

fn check_limit(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::LimitExceeded { what, n, limit });
    }
    Ok(())
}

/// Sweeps all 4^n deterministic strategies by direct counting.
pub fn exhaustive_best(cfg: GameConfig, limits: &Limits) -> Result<BestStrategies> {
    let n = cfg.n();
    check_limit("exhaustive strategy sweep", n, limits.exhaustive.min(MAX_STRATEGY_PLAYERS))?;
    let total = 1u64 << (2 * n);
    let per_chunk: Vec<(u64, Vec<u64>)> = (0..total.div_ceil(SWEEP_CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * SWEEP_CHUNK;
            let end = (start + SWEEP_CHUNK).min(total);
            let mut best = 0u64;
            let mut codes = Vec::new();
            for code in start..end {
                let (on0, on1) = split_code(n, code);
                let wins = count_wins(n, on0, on1);
                if wins > best {
                    best = wins;
                    codes.clear();
                }
                if wins == best {
                    codes.push(code);
                }
            }
            (best, codes)
        })
        .collect();
    let max_wins = per_chunk.iter().map(|(w, _)| *w).max().unwrap_or(0);
    let witnesses = per_chunk
        .into_iter()
        .filter(|(w, _)| *w == max_wins)
        .flat_map(|(_, codes)| codes)
        .map(|code| Strategy::from_raw(n, code))
        .collect();
    Ok(BestStrategies {
        n,
        max_wins,
        proportion: Rational::new(max_wins as i128, 1i128 << (n - 1)),
        witnesses,
        strategies_examined: total,
    })
}

/// The simple optimal strategy keyed on n mod 8: player 1's pair, then the
/// pair shared by players 2..n.
///
/// Constant all-0 answers win exactly when Δ ≡ 0 (mod 4), which is the
/// majority class for n ≡ 0, 1, 7 (mod 8); constant all-1 answers have
/// parity n and win the Δ ≡ 2 class, the majority for n ≡ 3, 5.
pub fn table1_pairs(n: usize) -> ([u8; 2], [u8; 2]) {
    match n % 8 {
        0 | 1 | 7 => ([0, 0], [0, 0]),
        2 => ([0, 1], [0, 0]),
        3 | 5 => ([1, 1], [1, 1]),
        4 => ([1, 1], [0, 0]),
        6 => ([1, 0], [0, 0]),
        _ => unreachable!(),
    }
}

pub fn table1_strategy(cfg: GameConfig) -> Result<Strategy> {
    let (first, rest) = table1_pairs(cfg.n());
    let mut pairs = vec![rest; cfg.n()];
    pairs[0] = first;
    Strategy::from_outputs(&pairs)
}

/// All strategies with Re(s) = 2^⌊n/2⌋, in code order.
pub fn optimal_set(cfg: GameConfig, limits: &Limits) -> Result<Vec<Strategy>> {
    let n = cfg.n();
    check_limit(
        "optimal set",
        n,
        limits.optimal_set.min(limits.exhaustive).min(MAX_STRATEGY_PLAYERS),
    )?;
    let target = optimal_re(n);
    let total = 1u64 << (2 * n);
    Ok((0..total)
        .into_par_iter()
        .map(|code| Strategy::from_raw(n, code))
        .filter(|s| s.score_product().re == target)
        .collect())
}

/// Number of strategies in `strategies` winning each legitimate question,
/// in question order.
pub fn win_counts(strategies: &[Strategy], cfg: GameConfig) -> Result<Vec<u64>> {
    if let Some(bad) = strategies.iter().find(|s| s.n() != cfg.n()) {
        return Err(Error::LengthMismatch {
            expected: cfg.n(),
            got: bad.n(),
        });
    }
    let words: Vec<(u64, u64)> = strategies.iter().map(Strategy::output_words).collect();
    let mask = cfg.mask();
    Ok(legitimate_questions(cfg)
        .map(|q| {
            let x = q.bits();
            words
                .iter()
                .filter(|(on0, on1)| wins_packed(x, (on0 & !x & mask) | (on1 & x)))
                .count() as u64
        })
        .collect())
}

/// Whether every legitimate question is won by the same number of members.
pub fn is_balanced(strategies: &[Strategy], cfg: GameConfig) -> Result<bool> {
    let counts = win_counts(strategies, cfg)?;
    Ok(counts.windows(2).all(|w| w[0] == w[1]))
}

/// A finite distribution over deterministic strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilisticStrategy {
    n: usize,
    support: Vec<Strategy>,
    weights: Vec<Rational>,
}

impl ProbabilisticStrategy {
    pub fn new(support: Vec<Strategy>, weights: Vec<Rational>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        if support.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                got: weights.len(),
            });
        }
        let n = GameConfig::new(support[0].n())?.n();
        if let Some(bad) = support.iter().find(|s| s.n() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        if weights.iter().any(|w| *w < Rational::zero()) {
            return Err(Error::InvalidParameter("negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(ProbabilisticStrategy {
            n,
            support,
            weights,
        })
    }

    pub fn point(strategy: Strategy) -> Result<Self> {
        ProbabilisticStrategy::new(vec![strategy], vec![Rational::one()])
    }

    /// Uniform distribution over `support`.
    pub fn uniform(support: Vec<Strategy>) -> Result<Self> {
        let k = support.len() as i128;
        if k == 0 {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        let weights = vec![Rational::new(1, k); support.len()];
        ProbabilisticStrategy::new(support, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[Strategy] {
        &self.support
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Pr(win | x) for every legitimate x, in question order.
    pub fn win_probabilities(&self) -> Vec<Rational> {
        let cfg = GameConfig::new(self.n).expect("validated on construction");
        let words: Vec<(u64, u64)> = self.support.iter().map(Strategy::output_words).collect();
        let mask = cfg.mask();
        legitimate_questions(cfg)
            .map(|q| {
                let x = q.bits();
                words
                    .iter()
                    .zip(&self.weights)
                    .filter(|((on0, on1), _)| wins_packed(x, (on0 & !x & mask) | (on1 & x)))
                    .map(|(_, w)| *w)
                    .sum()
            })
            .collect()
    }

    /// Worst case over legitimate questions.
    pub fn success_probability(&self) -> Rational {
        self.win_probabilities()
            .into_iter()
            .min()
            .expect("at least one legitimate question")
    }

    /// Average over legitimate questions.
    pub fn success_proportion(&self) -> Rational {
        let probs = self.win_probabilities();
        let count = probs.len() as i128;
        probs.into_iter().sum::<Rational>() / Rational::from_integer(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> GameConfig {
        GameConfig::new(n).unwrap()
    }

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn packing_matches_printed_pairs() {
        let s: Strategy = "11 00 01".parse().unwrap();
        assert_eq!(s.code(), 0b110001);
        assert_eq!(s.output(0, 0), 1);
        assert_eq!(s.output(2, 0), 0);
        assert_eq!(s.output(2, 1), 1);
        assert_eq!(s.sign(0, 1), -1);
        assert_eq!(s.to_string(), "11 00 01");
        assert!("1 1 0".parse::<Strategy>().is_err());
    }

    #[test]
    fn eval_answer_examples() {
        let zero = Strategy::uniform(cfg(4), 0, 0).unwrap();
        for q in legitimate_questions(cfg(4)) {
            assert_eq!(zero.eval_answer(&q).unwrap().to_string(), "0000");
        }
        let t3 = table1_strategy(cfg(3)).unwrap();
        assert_eq!(
            t3.eval_answer(&"110".parse().unwrap()).unwrap().to_string(),
            "111"
        );
        let echo = Strategy::uniform(cfg(3), 0, 1).unwrap();
        assert_eq!(
            echo.eval_answer(&"011".parse().unwrap()).unwrap().to_string(),
            "011"
        );
    }

    #[test]
    fn product_identity_on_answers() {
        // Π S_{i,x_i} = +1 exactly when the answer is even
        for s in Strategy::all(cfg(3)).unwrap() {
            for x in 0..8u64 {
                let q = Question::new(3, x).unwrap();
                let prod: i64 = (0..3).map(|i| s.sign(i, q.bit(i))).product();
                let even = s.eval_answer(&q).unwrap().parity() == Some(0);
                assert_eq!(prod == 1, even);
            }
        }
    }

    #[test]
    fn proportions() {
        assert_eq!(Strategy::uniform(cfg(3), 1, 1).unwrap().success_proportion(), r(3, 4));
        assert_eq!(Strategy::uniform(cfg(3), 0, 0).unwrap().success_proportion(), r(1, 4));
        let t4 = table1_strategy(cfg(4)).unwrap();
        assert_eq!(t4.to_string(), "11 00 00 00");
        assert_eq!(t4.success_proportion(), r(3, 4));
    }

    #[test]
    fn score_example_n3() {
        let s = Strategy::uniform(cfg(3), 0, 0).unwrap().score().unwrap();
        assert_eq!(s.s, GaussianInt::new(-2, 2));
        assert_eq!((s.wins, s.losses), (1, 3));
    }

    #[test]
    fn even_n_scores_on_axes() {
        for n in [4, 6] {
            let m = 1i64 << (n / 2);
            let allowed = [
                GaussianInt::new(m, 0),
                GaussianInt::new(-m, 0),
                GaussianInt::new(0, m),
                GaussianInt::new(0, -m),
            ];
            for s in Strategy::all(cfg(n)).unwrap() {
                assert!(allowed.contains(&s.score_product()));
            }
        }
    }

    #[test]
    fn bound_formula() {
        assert_eq!(classical_bound(3), r(3, 4));
        assert_eq!(classical_bound(4), r(3, 4));
        assert_eq!(classical_bound(5), r(5, 8));
        assert_eq!(classical_bound(6), r(5, 8));
        assert_eq!(classical_bound(7), r(9, 16));
        assert_eq!(classical_bound(11), r(33, 64));
    }

    #[test]
    fn exhaustive_small() {
        let limits = Limits::default();
        let best3 = exhaustive_best(cfg(3), &limits).unwrap();
        assert_eq!(best3.proportion, r(3, 4));
        assert_eq!(best3.strategies_examined, 64);
        assert!(best3.witnesses.contains(&table1_strategy(cfg(3)).unwrap()));
        assert!(best3.witnesses.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(exhaustive_best(cfg(5), &limits).unwrap().proportion, r(5, 8));
        assert_eq!(exhaustive_best(cfg(6), &limits).unwrap().proportion, r(5, 8));
        assert!(matches!(
            exhaustive_best(cfg(9), &limits),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn table1_rows() {
        assert_eq!(table1_strategy(cfg(6)).unwrap().to_string(), "10 00 00 00 00 00");
        assert_eq!(
            table1_strategy(cfg(10)).unwrap().to_string(),
            "01 00 00 00 00 00 00 00 00 00"
        );
        let t11 = table1_strategy(cfg(11)).unwrap();
        assert_eq!(t11, Strategy::uniform(cfg(11), 1, 1).unwrap());
        assert_eq!(t11.success_proportion(), r(33, 64));
    }

    #[test]
    fn optimal_set_n3() {
        let set = optimal_set(cfg(3), &Limits::default()).unwrap();
        assert!(set.contains(&table1_strategy(cfg(3)).unwrap()));
        assert!(set.iter().all(|s| s.success_proportion() == r(3, 4)));
        assert!(is_balanced(&set, cfg(3)).unwrap());
        assert!(matches!(
            optimal_set(cfg(7), &Limits::default()),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn balance_edge_cases() {
        let t3 = table1_strategy(cfg(3)).unwrap();
        assert!(!is_balanced(&[t3], cfg(3)).unwrap());
        assert!(is_balanced(&[], cfg(3)).unwrap());
        assert!(is_balanced(&[t3], cfg(4)).is_err());
    }

    #[test]
    fn probabilistic_examples() {
        let set = optimal_set(cfg(3), &Limits::default()).unwrap();
        let mix = ProbabilisticStrategy::uniform(set).unwrap();
        assert_eq!(mix.success_probability(), r(3, 4));
        let point = ProbabilisticStrategy::point(table1_strategy(cfg(3)).unwrap()).unwrap();
        assert_eq!(point.success_probability(), r(0, 1));
        assert_eq!(point.success_proportion(), r(3, 4));
    }

    #[test]
    fn probabilistic_validation() {
        let s = table1_strategy(cfg(3)).unwrap();
        assert!(ProbabilisticStrategy::new(vec![s], vec![r(1, 2)]).is_err());
        assert!(ProbabilisticStrategy::new(vec![s, s], vec![r(3, 2), r(-1, 2)]).is_err());
        assert!(ProbabilisticStrategy::new(vec![], vec![]).is_err());
        let t4 = table1_strategy(cfg(4)).unwrap();
        assert!(ProbabilisticStrategy::new(vec![s, t4], vec![r(1, 2), r(1, 2)]).is_err());
        assert!(ProbabilisticStrategy::new(vec![s, s], vec![r(1, 3), r(2, 3)]).is_ok());
    }

    #[test]
    fn pair_flip_examples() {
        for s in Strategy::all(cfg(3)).unwrap() {
            let f = s.pair_flip_map().unwrap();
            assert_eq!(f.score_product(), s.score_product());
            let back = f
                .pair_flip_map()
                .and_then(|x| x.pair_flip_map())
                .and_then(|x| x.pair_flip_map())
                .unwrap();
            assert_eq!(back, s);
            if s.is_optimal() {
                assert!(f.is_optimal());
            }
            // winners of 00x3 become winners of 11x3
            for x3 in 0..2u64 {
                let from = Question::new(3, x3).unwrap();
                let to = Question::new(3, 0b110 | x3).unwrap();
                if from.is_legitimate() {
                    assert_eq!(s.wins(&from).unwrap(), f.wins(&to).unwrap());
                }
            }
        }
        let s = table1_strategy(cfg(3)).unwrap();
        assert!(s.pair_flip_map_at(0, 3).is_err());
        assert!(s.pair_flip_map_at(1, 1).is_err());
    }

    #[test]
    fn gaussian_arithmetic() {
        let one_plus_i = GaussianInt::new(1, 1);
        assert_eq!(one_plus_i * one_plus_i * one_plus_i, GaussianInt::new(-2, 2));
        assert_eq!(GaussianInt::i_pow(3), GaussianInt::new(0, -1));
        assert_eq!(GaussianInt::new(3, -4).norm_sqr(), 25);
        assert_eq!(GaussianInt::new(-2, 2).to_string(), "-2+2i");
    }
}
