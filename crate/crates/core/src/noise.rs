//! Imperfect apparatus: independent bit flips and detector inefficiency.
//!
//! Both models act on the classical outputs of the analytic quantum round.
//! Under bit flips each player reports the predicted bit with probability p;
//! under inefficiency each player reports it with probability η and ⊥
//! otherwise. The classical side of the detection comparison is the
//! error-free strategy, which may answer ⊥ but never answers wrongly.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::classical_bound;
use crate::error::{Error, Result};
use crate::game::{legitimate_by_rank, low_mask, position, wins_packed, Answer, GameConfig, Question, Symbol};
use crate::quantum::{apply_inputs_analytic, sample_parity_class};
use crate::rng::{chunks, Streams, CHUNK_TRIALS};
use crate::{Limits, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitFlipModel {
    p: f64,
}

impl BitFlipModel {
    /// `p` is the probability of reporting the predicted bit, in [½, 1].
    pub fn new(p: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "bit-flip reliability {p} outside [0.5, 1]"
            )));
        }
        Ok(BitFlipModel { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionModel {
    eta: f64,
}

impl DetectionModel {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!(
                "detection efficiency {eta} outside [0, 1]"
            )));
        }
        Ok(DetectionModel { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Win probability of the quantum team under bit flips, ½ + (2p−1)^n/2.
pub fn bitflip_win_prob(n: usize, model: &BitFlipModel) -> f64 {
    0.5 + (2.0 * model.p - 1.0).powi(n as i32) / 2.0
}

/// Reliability above which the noisy quantum team beats every classical
/// strategy: the root of (2p−1)^n/2 = 2^(−⌈n/2⌉), that is
/// ½ + 2^((1−⌈n/2⌉)/n − 1).
pub fn bitflip_threshold(n: usize) -> f64 {
    let c = n.div_ceil(2) as f64;
    0.5 + 2f64.powf((1.0 - c) / n as f64 - 1.0)
}

/// Limit of [`bitflip_threshold`] as n grows, ½ + √2/4.
pub fn bitflip_threshold_limit() -> f64 {
    0.5 + std::f64::consts::SQRT_2 / 4.0
}

/// Probability that no player answers ⊥, η^n.
pub fn detection_win_prob(n: usize, model: &DetectionModel) -> f64 {
    model.eta.powi(n as i32)
}

/// Best error-free classical proportion, 2/2^(n−1).
pub fn errorfree_classical_bound(n: usize) -> Rational {
    Rational::new(2, 1i128 << (n - 1))
}

/// Efficiency above which η^n exceeds 2/2^(n−1): 4^(1/n)/2.
pub fn detection_threshold(n: usize) -> f64 {
    4f64.powf(1.0 / n as f64) / 2.0
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The derived quantities for one player count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub n: usize,
    /// Quantum win probability under the given bit-flip model.
    pub p_n: f64,
    /// Classical bound ½ + 2^(−⌈n/2⌉).
    pub p_prime_n: f64,
    pub e_n: f64,
    pub d_n: f64,
}

impl Thresholds {
    pub fn new(n: usize, model: &BitFlipModel) -> Self {
        Thresholds {
            n,
            p_n: bitflip_win_prob(n, model),
            p_prime_n: rational_to_f64(&classical_bound(n)),
            e_n: bitflip_threshold(n),
            d_n: detection_threshold(n),
        }
    }
}

/// Empirical win frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub trials: u64,
    pub wins: u64,
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    fn from_counts(trials: u64, wins: u64) -> Self {
        let mean = wins as f64 / trials as f64;
        Estimate {
            trials,
            wins,
            mean,
            std_error: (mean * (1.0 - mean) / trials as f64).sqrt(),
        }
    }

    /// |mean − expected| in standard errors. Infinite if the estimate is
    /// degenerate and disagrees.
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = (self.mean - expected).abs();
        if diff == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.std_error
        }
    }
}

fn uniform_legitimate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> u64 {
    legitimate_by_rank(rng.random::<u64>() & low_mask(n - 1))
}

fn flip_mask<R: Rng + ?Sized>(n: usize, flip_prob: f64, rng: &mut R) -> u64 {
    (0..n).fold(0u64, |m, i| {
        if rng.random_bool(flip_prob) {
            m | 1 << i
        } else {
            m
        }
    })
}

/// One noisy quantum round on `q`.
pub fn bitflip_round<R: Rng + ?Sized>(q: &Question, model: &BitFlipModel, rng: &mut R) -> Result<Answer> {
    let phase = apply_inputs_analytic(q)?;
    let answer = sample_parity_class(q.len(), phase.answer_parity(), rng);
    Ok(answer.flipped(flip_mask(q.len(), 1.0 - model.p, rng)))
}

/// One inefficient quantum round on `q`; undetected players answer ⊥.
pub fn detection_round<R: Rng + ?Sized>(q: &Question, model: &DetectionModel, rng: &mut R) -> Result<Answer> {
    let phase = apply_inputs_analytic(q)?;
    let answer = sample_parity_class(q.len(), phase.answer_parity(), rng);
    let missed = flip_mask(q.len(), 1.0 - model.eta, rng);
    Ok(Answer::from_raw(q.len(), answer.bits(), missed))
}

fn monte_carlo<F>(cfg: GameConfig, trials: u64, streams: &Streams, round: F) -> Result<Estimate>
where
    F: Fn(&Question, &mut crate::rng::StreamRng) -> Result<bool> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = cfg.n();
    let wins = chunks(trials, CHUNK_TRIALS)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(index, count)| {
            let mut rng = streams.stream(index);
            let mut wins = 0u64;
            for _ in 0..count {
                let q = Question::new(n, uniform_legitimate(n, &mut rng))?;
                if round(&q, &mut rng)? {
                    wins += 1;
                }
            }
            Ok(wins)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(Estimate::from_counts(trials, wins))
}

/// Win frequency of the bit-flip-noisy quantum team over uniformly drawn
/// legitimate questions.
pub fn bitflip_monte_carlo(
    cfg: GameConfig,
    model: &BitFlipModel,
    trials: u64,
    streams: &Streams,
) -> Result<Estimate> {
    monte_carlo(cfg, trials, streams, |q, rng| {
        let a = bitflip_round(q, model, rng)?;
        Ok(wins_packed(q.bits(), a.bits()))
    })
}

/// Frequency of ⊥-free (hence appropriate) answers under inefficiency.
pub fn detection_monte_carlo(
    cfg: GameConfig,
    model: &DetectionModel,
    trials: u64,
    streams: &Streams,
) -> Result<Estimate> {
    monte_carlo(cfg, trials, streams, |q, rng| {
        let a = detection_round(q, model, rng)?;
        Ok(!a.has_bottom() && wins_packed(q.bits(), a.bits()))
    })
}

/// Outcome of one round for a ⊥-allowing strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundOutcome {
    Win,
    Loss,
    Draw,
}

/// Deterministic strategy whose outputs may be ⊥.
///
/// Stored as four packed n-bit words: the 0/1 outputs and the ⊥ mask for
/// each input value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtendedStrategy {
    n: u8,
    bits0: u64,
    bits1: u64,
    bottom0: u64,
    bottom1: u64,
}

const SYMBOLS: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Bottom];

impl ExtendedStrategy {
    /// Builds from per-player `[output on 0, output on 1]`.
    pub fn from_outputs(table: &[[Symbol; 2]]) -> Result<Self> {
        let n = table.len();
        GameConfig::new(n)?;
        let mut s = ExtendedStrategy {
            n: n as u8,
            bits0: 0,
            bits1: 0,
            bottom0: 0,
            bottom1: 0,
        };
        for (i, pair) in table.iter().enumerate() {
            let bit = 1u64 << position(n, i);
            for (input, sym) in pair.iter().enumerate() {
                let (bits, bottom) = if input == 0 {
                    (&mut s.bits0, &mut s.bottom0)
                } else {
                    (&mut s.bits1, &mut s.bottom1)
                };
                match sym {
                    Symbol::Zero => {}
                    Symbol::One => *bits |= bit,
                    Symbol::Bottom => *bottom |= bit,
                }
            }
        }
        Ok(s)
    }

    /// The `index`-th of the 9^n tables: base-9 digits, player 1 most
    /// significant, each digit `3·a + b` with a, b indexing (0, 1, ⊥) for
    /// inputs 0 and 1.
    pub fn from_index(cfg: GameConfig, index: u64) -> Result<Self> {
        let n = cfg.n();
        let count = 9u64
            .checked_pow(n as u32)
            .ok_or(Error::TooManyPlayers { n, max: 20 })?;
        if index >= count {
            return Err(Error::InvalidParameter(format!(
                "table index {index} out of range for {n} players"
            )));
        }
        let mut rest = index;
        let mut table = vec![[Symbol::Zero; 2]; n];
        for pair in table.iter_mut().rev() {
            let digit = (rest % 9) as usize;
            rest /= 9;
            *pair = [SYMBOLS[digit / 3], SYMBOLS[digit % 3]];
        }
        ExtendedStrategy::from_outputs(&table)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn output(&self, player: usize, input: u8) -> Symbol {
        let p = position(self.n(), player);
        let (bits, bottom) = if input == 0 {
            (self.bits0, self.bottom0)
        } else {
            (self.bits1, self.bottom1)
        };
        if (bottom >> p) & 1 == 1 {
            Symbol::Bottom
        } else {
            Symbol::from_bit(((bits >> p) & 1) as u8)
        }
    }

    pub fn table(&self) -> Vec<[Symbol; 2]> {
        (0..self.n())
            .map(|i| [self.output(i, 0), self.output(i, 1)])
            .collect()
    }

    #[inline]
    fn answer_raw(&self, x: u64) -> (u64, u64) {
        let nx = !x & low_mask(self.n());
        (
            (self.bits0 & nx) | (self.bits1 & x),
            (self.bottom0 & nx) | (self.bottom1 & x),
        )
    }

    pub fn answer(&self, q: &Question) -> Result<Answer> {
        if q.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: q.len(),
            });
        }
        let (bits, bottom) = self.answer_raw(q.bits());
        Ok(Answer::from_raw(self.n(), bits, bottom))
    }

    pub fn outcome(&self, q: &Question) -> Result<RoundOutcome> {
        let a = self.answer(q)?;
        if a.has_bottom() {
            return Ok(RoundOutcome::Draw);
        }
        Ok(if crate::game::is_appropriate(q, &a)? {
            RoundOutcome::Win
        } else {
            RoundOutcome::Loss
        })
    }

    /// (wins, losses) over all legitimate questions.
    fn tally(&self) -> (u64, u64) {
        let mut wins = 0;
        let mut losses = 0;
        for k in 0..1u64 << (self.n() - 1) {
            let x = legitimate_by_rank(k);
            let (bits, bottom) = self.answer_raw(x);
            if bottom != 0 {
                continue;
            }
            if wins_packed(x, bits) {
                wins += 1;
            } else {
                losses += 1;
            }
        }
        (wins, losses)
    }

    /// Never answers a legitimate question inappropriately.
    pub fn is_error_free(&self) -> bool {
        self.tally().1 == 0
    }

    /// Legitimate questions answered appropriately.
    pub fn win_count(&self) -> u64 {
        self.tally().0
    }

    pub fn winning_questions(&self) -> Vec<Question> {
        let n = self.n();
        (0..1u64 << (n - 1))
            .map(legitimate_by_rank)
            .filter(|&x| {
                let (bits, bottom) = self.answer_raw(x);
                bottom == 0 && wins_packed(x, bits)
            })
            .map(|x| Question::new(n, x).expect("fits in n bits"))
            .collect()
    }

    /// Players that never answer ⊥.
    pub fn interesting_players(&self) -> usize {
        (!(self.bottom0 | self.bottom1) & low_mask(self.n())).count_ones() as usize
    }

    /// Some player answers ⊥ on both inputs, so no round is ever decided.
    pub fn has_silent_player(&self) -> bool {
        self.bottom0 & self.bottom1 != 0
    }
}

impl fmt::Display for ExtendedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", self.output(i, 0).as_char(), self.output(i, 1).as_char())?;
        }
        Ok(())
    }
}

/// Player 1 answers 0 always, player 2 echoes its input, every other player
/// answers 0 on input 0 and ⊥ on input 1.
pub fn errorfree_reference_strategy(cfg: GameConfig) -> Result<ExtendedStrategy> {
    let mut table = vec![[Symbol::Zero, Symbol::Bottom]; cfg.n()];
    table[0] = [Symbol::Zero, Symbol::Zero];
    table[1] = [Symbol::Zero, Symbol::One];
    ExtendedStrategy::from_outputs(&table)
}

/// Result of sweeping all 9^n extended tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorFreeSweep {
    pub n: usize,
    pub tables_examined: u64,
    pub error_free_tables: u64,
    pub max_wins: u64,
    /// Win count → number of error-free tables achieving it.
    pub win_histogram: BTreeMap<u64, u64>,
    /// Error-free tables attaining `max_wins`, in index order.
    pub witnesses: Vec<ExtendedStrategy>,
}

/// Sweeps every ⊥-allowing deterministic table, keeping the error-free ones.
pub fn errorfree_exhaustive(cfg: GameConfig, limits: &Limits) -> Result<ErrorFreeSweep> {
    let n = cfg.n();
    if n > limits.extended {
        return Err(Error::LimitExceeded {
            what: "extended strategy sweep",
            n,
            limit: limits.extended,
        });
    }
    let total = 9u64
        .checked_pow(n as u32)
        .ok_or(Error::TooManyPlayers { n, max: 20 })?;
    const CHUNK: u64 = 1 << 12;
    let parts: Vec<(BTreeMap<u64, u64>, u64, Vec<ExtendedStrategy>)> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut hist = BTreeMap::new();
            let mut best = 0u64;
            let mut witnesses = Vec::new();
            for index in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                let s = ExtendedStrategy::from_index(cfg, index)?;
                let (wins, losses) = s.tally();
                if losses != 0 {
                    continue;
                }
                *hist.entry(wins).or_insert(0) += 1;
                if wins > best {
                    best = wins;
                    witnesses.clear();
                }
                if wins == best {
                    witnesses.push(s);
                }
            }
            Ok((hist, best, witnesses))
        })
        .collect::<Result<_>>()?;

    let max_wins = parts.iter().map(|(_, b, _)| *b).max().unwrap_or(0);
    let mut win_histogram = BTreeMap::new();
    let mut witnesses = Vec::new();
    for (hist, best, w) in parts {
        for (k, v) in hist {
            *win_histogram.entry(k).or_insert(0) += v;
        }
        if best == max_wins {
            witnesses.extend(w);
        }
    }
    Ok(ErrorFreeSweep {
        n,
        tables_examined: total,
        error_free_tables: win_histogram.values().sum(),
        max_wins,
        win_histogram,
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    QuantumWins,
    ClassicalReachable,
}

impl Verdict {
    fn from_margin(margin: f64) -> Self {
        if margin > 0.0 {
            Verdict::QuantumWins
        } else {
            Verdict::ClassicalReachable
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::QuantumWins => "quantum-wins",
            Verdict::ClassicalReachable => "classical-reachable",
        }
    }
}

/// Noisy quantum win probability against the worst-case classical bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitFlipRow {
    pub n: usize,
    pub p: f64,
    pub quantum: f64,
    pub classical: f64,
    pub margin: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    /// Verdict agrees with `p > threshold`.
    pub consistent: bool,
}

/// η^n against the best error-free classical proportion (uniform
/// questions, not worst case).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionRow {
    pub n: usize,
    pub eta: f64,
    pub quantum: f64,
    pub classical: f64,
    pub margin: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Comparison {
    pub bitflip: Vec<BitFlipRow>,
    pub detection: Vec<DetectionRow>,
}

pub fn compare_bitflip(n: usize, model: &BitFlipModel) -> BitFlipRow {
    let quantum = bitflip_win_prob(n, model);
    let classical = rational_to_f64(&classical_bound(n));
    let margin = quantum - classical;
    let threshold = bitflip_threshold(n);
    let verdict = Verdict::from_margin(margin);
    BitFlipRow {
        n,
        p: model.p,
        quantum,
        classical,
        margin,
        threshold,
        verdict,
        consistent: (model.p > threshold) == (verdict == Verdict::QuantumWins),
    }
}

pub fn compare_detection(n: usize, model: &DetectionModel) -> DetectionRow {
    let quantum = detection_win_prob(n, model);
    let classical = rational_to_f64(&errorfree_classical_bound(n));
    let margin = quantum - classical;
    let threshold = detection_threshold(n);
    let verdict = Verdict::from_margin(margin);
    DetectionRow {
        n,
        eta: model.eta,
        quantum,
        classical,
        margin,
        threshold,
        verdict,
        consistent: (model.eta > threshold) == (verdict == Verdict::QuantumWins),
    }
}

/// Tabulates both comparisons over the given grids, n-major.
pub fn compare_report(ns: &[usize], p_grid: &[f64], eta_grid: &[f64]) -> Result<Comparison> {
    let mut out = Comparison::default();
    for &n in ns {
        GameConfig::new(n)?;
        for &p in p_grid {
            out.bitflip.push(compare_bitflip(n, &BitFlipModel::new(p)?));
        }
        for &eta in eta_grid {
            out.detection.push(compare_detection(n, &DetectionModel::new(eta)?));
        }
    }
    Ok(out)
}
