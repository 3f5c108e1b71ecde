//! The perfect quantum strategy.
//!
//! Players share |Φ_n^+⟩ = (|0^n⟩ + |1^n⟩)/√2. A player holding input 1
//! applies the phase gate P, every player applies H and measures. The
//! analytic path tracks only the GHZ sign and samples the answer from the
//! matching parity class. The dense path simulates the 2^n amplitudes and
//! serves as the oracle for the analytic one.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{low_mask, position, Answer, GameConfig, Question};
use crate::Limits;

/// Tolerance on the squared norm and on individual probabilities.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Dense 2^n-amplitude pure state, indexed by packed basis strings.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    /// |Φ_n^+⟩.
    pub fn ghz(cfg: GameConfig, dense_limit: usize) -> Result<Self> {
        let n = cfg.n();
        if n > dense_limit {
            return Err(Error::LimitExceeded {
                what: "dense statevector",
                n,
                limit: dense_limit,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amplitudes[(1 << n) - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Ok(DenseState { n, amplitudes })
    }

    /// Computational basis state |bits⟩.
    pub fn basis(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > Limits::default().dense {
            return Err(Error::LimitExceeded {
                what: "dense statevector",
                n,
                limit: Limits::default().dense,
            });
        }
        if bits >= 1 << n {
            return Err(Error::InvalidParameter(format!(
                "basis index {bits} out of range for {n} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[bits as usize] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        Ok(DenseState {
            n: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, bits: u64) -> Complex64 {
        self.amplitudes[bits as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    fn check_player(&self, player: usize) -> Result<u32> {
        if player >= self.n {
            return Err(Error::PlayerOutOfRange {
                index: player,
                n: self.n,
            });
        }
        Ok(position(self.n, player))
    }

    /// P on `player`'s qubit: |1⟩ ↦ i|1⟩.
    pub fn apply_phase(&mut self, player: usize) -> Result<()> {
        let bit = 1usize << self.check_player(player)?;
        for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
            if idx & bit != 0 {
                // multiply by i
                *amp = Complex64::new(-amp.im, amp.re);
            }
        }
        Ok(())
    }

    /// H on `player`'s qubit.
    pub fn apply_hadamard(&mut self, player: usize) -> Result<()> {
        let bit = 1usize << self.check_player(player)?;
        let len = self.amplitudes.len();
        let mut base = 0;
        while base < len {
            for lo in base..base + bit {
                let hi = lo + bit;
                let a = self.amplitudes[lo];
                let b = self.amplitudes[hi];
                self.amplitudes[lo] = (a + b) * FRAC_1_SQRT_2;
                self.amplitudes[hi] = (a - b) * FRAC_1_SQRT_2;
            }
            base += 2 * bit;
        }
        Ok(())
    }

    /// H^{⊗n}.
    pub fn apply_hadamards(&mut self) {
        for player in 0..self.n {
            self.apply_hadamard(player)
                .expect("player index within range");
        }
    }

    /// If the state is an equal-weight superposition over one parity class,
    /// returns that parity. Each squared amplitude must be 2^(1-n) or 0
    /// within [`NORM_TOLERANCE`].
    pub fn parity_class(&self) -> Option<u8> {
        let expected = 2f64.powi(1 - self.n as i32);
        let mut class = None;
        let mut support = 0usize;
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p <= NORM_TOLERANCE {
                continue;
            }
            if (p - expected).abs() > NORM_TOLERANCE {
                return None;
            }
            let parity = (idx.count_ones() & 1) as u8;
            match class {
                None => class = Some(parity),
                Some(c) if c != parity => return None,
                Some(_) => {}
            }
            support += 1;
        }
        // one parity class has exactly half of all strings
        (support == self.amplitudes.len() / 2).then_some(class).flatten()
    }

    /// Measures every qubit in the computational basis.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Answer> {
        Ok(self.sampler()?.sample(rng))
    }

    /// Precomputes the outcome distribution for repeated measurement.
    pub fn sampler(&self) -> Result<Sampler> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized(norm));
        }
        let mut acc = 0.0;
        let cumulative = self
            .amplitudes
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect();
        Ok(Sampler {
            n: self.n,
            cumulative,
        })
    }
}

/// Inverse-CDF sampler over basis strings.
#[derive(Debug, Clone)]
pub struct Sampler {
    n: usize,
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Answer {
        let total = *self.cumulative.last().expect("nonempty state");
        let r = rng.random::<f64>() * total;
        // first index whose cumulative mass exceeds r; it has nonzero mass
        let idx = self
            .cumulative
            .partition_point(|&c| c <= r)
            .min(self.cumulative.len() - 1);
        Answer::from_raw(self.n, idx as u64, 0)
    }
}

/// Sign of the shared GHZ state after the phase step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GhzPhase {
    /// |Φ_n^+⟩
    Plus,
    /// |Φ_n^−⟩
    Minus,
}

impl GhzPhase {
    /// Parity of every string in the support after H^{⊗n}.
    pub fn answer_parity(&self) -> u8 {
        match self {
            GhzPhase::Plus => 0,
            GhzPhase::Minus => 1,
        }
    }
}

/// Players with input 1 apply P: m ≡ 0 (mod 4) keeps |Φ_n^+⟩, m ≡ 2 gives
/// |Φ_n^−⟩. Odd m leaves the GHZ pair, so illegitimate questions are
/// rejected.
pub fn apply_inputs_analytic(q: &Question) -> Result<GhzPhase> {
    if !q.is_legitimate() {
        return Err(Error::IllegitimateQuestion(q.to_string()));
    }
    Ok(if q.hamming_weight().is_multiple_of(4) {
        GhzPhase::Plus
    } else {
        GhzPhase::Minus
    })
}

/// Uniform string of the given parity: n-1 fair bits, the last one fixed.
pub fn sample_parity_class<R: Rng + ?Sized>(n: usize, parity: u8, rng: &mut R) -> Answer {
    let top = rng.random::<u64>() & low_mask(n - 1);
    let last = (top.count_ones() as u64 & 1) ^ parity as u64;
    Answer::from_raw(n, (top << 1) | last, 0)
}

/// Post-measurement-basis state of the dense pipeline for question `q`:
/// P on every player with input 1, then H^{⊗n}.
pub fn prepare_dense(q: &Question, dense_limit: usize) -> Result<DenseState> {
    let cfg = GameConfig::new(q.len())?;
    let mut state = DenseState::ghz(cfg, dense_limit)?;
    for player in 0..q.len() {
        if q.bit(player) == 1 {
            state.apply_phase(player)?;
        }
    }
    state.apply_hadamards();
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Dense,
}

/// A quantum team with a chosen simulation path.
#[derive(Debug, Clone, Copy)]
pub struct QuantumPlayers {
    mode: Mode,
    dense_limit: usize,
}

impl QuantumPlayers {
    pub fn new(mode: Mode, limits: &Limits) -> Self {
        QuantumPlayers {
            mode,
            dense_limit: limits.dense,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn play<R: Rng + ?Sized>(&self, q: &Question, rng: &mut R) -> Result<Answer> {
        match self.mode {
            Mode::Analytic => {
                let phase = apply_inputs_analytic(q)?;
                Ok(sample_parity_class(q.len(), phase.answer_parity(), rng))
            }
            Mode::Dense => {
                if !q.is_legitimate() {
                    return Err(Error::IllegitimateQuestion(q.to_string()));
                }
                prepare_dense(q, self.dense_limit)?.measure_all(rng)
            }
        }
    }

    /// `trials` rounds on the same question; the dense state is built once.
    pub fn play_many<R: Rng + ?Sized>(
        &self,
        q: &Question,
        trials: usize,
        rng: &mut R,
    ) -> Result<Vec<Answer>> {
        match self.mode {
            Mode::Analytic => (0..trials).map(|_| self.play(q, rng)).collect(),
            Mode::Dense => {
                if !q.is_legitimate() {
                    return Err(Error::IllegitimateQuestion(q.to_string()));
                }
                let sampler = prepare_dense(q, self.dense_limit)?.sampler()?;
                Ok((0..trials).map(|_| sampler.sample(rng)).collect())
            }
        }
    }
}

/// One round of the perfect strategy with default limits.
pub fn run_quantum_round<R: Rng + ?Sized>(q: &Question, rng: &mut R, mode: Mode) -> Result<Answer> {
    QuantumPlayers::new(mode, &Limits::default()).play(q, rng)
}
