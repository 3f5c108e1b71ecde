//! Questions, answers and the winning condition of the parity game.
//!
//! Bit strings are packed into a `u64` with player 1 in the most significant
//! of the `n` used positions, so integer order equals lexicographic order of
//! the printed string.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Packed words hold at most this many players.
pub const MAX_PLAYERS: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    n: usize,
}

impl GameConfig {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPlayers(n));
        }
        if n > MAX_PLAYERS {
            return Err(Error::TooManyPlayers {
                n,
                max: MAX_PLAYERS,
            });
        }
        Ok(GameConfig { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of questions satisfying the promise, 2^(n-1).
    pub fn legitimate_count(&self) -> u64 {
        1u64 << (self.n - 1)
    }

    pub(crate) fn mask(&self) -> u64 {
        low_mask(self.n)
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bit position of player `index` (0-based) inside a packed word.
#[inline]
pub(crate) fn position(n: usize, index: usize) -> u32 {
    (n - 1 - index) as u32
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_PLAYERS,
        });
    }
    Ok(())
}

/// The collective input x_1…x_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Question {
    n: u8,
    bits: u64,
}

impl Question {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_len(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits {bits:#x} do not fit in {n} positions"
            )));
        }
        Ok(Question { n: n as u8, bits })
    }

    pub(crate) fn from_raw(n: usize, bits: u64) -> Self {
        debug_assert!(bits & !low_mask(n) == 0);
        Question { n: n as u8, bits }
    }

    pub fn zero(cfg: GameConfig) -> Self {
        Question::from_raw(cfg.n, 0)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Input of player `index` (0-based).
    pub fn bit(&self, index: usize) -> u8 {
        ((self.bits >> position(self.len(), index)) & 1) as u8
    }

    pub fn hamming_weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_legitimate(&self) -> bool {
        self.hamming_weight().is_multiple_of(2)
    }

    /// Required answer parity, (Δ(x)/2) mod 2.
    pub fn required_parity(&self) -> Result<u8> {
        if !self.is_legitimate() {
            return Err(Error::IllegitimateQuestion(self.to_string()));
        }
        Ok(((self.hamming_weight() / 2) % 2) as u8)
    }

    /// Returns the question whose `i`-th position holds this question's
    /// `perm[i]`-th input.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let bits = permute_bits(self.len(), self.bits, perm)?;
        Ok(Question::from_raw(self.len(), bits))
    }
}

fn permute_bits(n: usize, bits: u64, perm: &[usize]) -> Result<u64> {
    if perm.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let mut out = 0u64;
    for (i, &src) in perm.iter().enumerate() {
        if src >= n {
            return Err(Error::PlayerOutOfRange { index: src, n });
        }
        let b = (bits >> position(n, src)) & 1;
        out |= b << position(n, i);
    }
    Ok(out)
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut n = 0usize;
        for c in s.chars() {
            let b = match c {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::InvalidSymbol(other)),
            };
            bits = (bits << 1) | b;
            n += 1;
            check_len(n)?;
        }
        Question::new(n, bits)
    }
}

/// One player's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Zero,
    One,
    Bottom,
}

impl Symbol {
    pub fn from_bit(b: u8) -> Self {
        if b == 0 {
            Symbol::Zero
        } else {
            Symbol::One
        }
    }

    pub fn as_char(&self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Bottom => '⊥',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '0' => Ok(Symbol::Zero),
            '1' => Ok(Symbol::One),
            '⊥' | '_' => Ok(Symbol::Bottom),
            other => Err(Error::InvalidSymbol(other)),
        }
    }
}

/// The collective output y_1…y_n, possibly containing ⊥.
///
/// `bits` holds the 0/1 outputs; `bottom` marks players that answered ⊥
/// (their `bits` position is kept at zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Answer {
    n: u8,
    bits: u64,
    bottom: u64,
}

impl Answer {
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        check_len(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits {bits:#x} do not fit in {n} positions"
            )));
        }
        Ok(Answer {
            n: n as u8,
            bits,
            bottom: 0,
        })
    }

    pub(crate) fn from_raw(n: usize, bits: u64, bottom: u64) -> Self {
        debug_assert!((bits | bottom) & !low_mask(n) == 0);
        Answer {
            n: n as u8,
            bits: bits & !bottom,
            bottom,
        }
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Result<Self> {
        let n = symbols.len();
        check_len(n)?;
        let mut bits = 0u64;
        let mut bottom = 0u64;
        for (i, s) in symbols.iter().enumerate() {
            let p = position(n, i);
            match s {
                Symbol::Zero => {}
                Symbol::One => bits |= 1 << p,
                Symbol::Bottom => bottom |= 1 << p,
            }
        }
        Ok(Answer::from_raw(n, bits, bottom))
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bottom_mask(&self) -> u64 {
        self.bottom
    }

    pub fn symbol(&self, index: usize) -> Symbol {
        let p = position(self.len(), index);
        if (self.bottom >> p) & 1 == 1 {
            Symbol::Bottom
        } else {
            Symbol::from_bit(((self.bits >> p) & 1) as u8)
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.len()).map(|i| self.symbol(i)).collect()
    }

    pub fn has_bottom(&self) -> bool {
        self.bottom != 0
    }

    /// Count of ones modulo two, or `None` if some player answered ⊥.
    pub fn parity(&self) -> Option<u8> {
        if self.has_bottom() {
            None
        } else {
            Some((self.bits.count_ones() % 2) as u8)
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        let bits = permute_bits(n, self.bits, perm)?;
        let bottom = permute_bits(n, self.bottom, perm)?;
        Ok(Answer::from_raw(n, bits, bottom))
    }

    /// Flips the output bits selected by `mask` (⊥ positions untouched).
    pub fn flipped(&self, mask: u64) -> Self {
        Answer::from_raw(self.len(), self.bits ^ (mask & !self.bottom), self.bottom)
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.symbol(i).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Answer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(Symbol::from_char)
            .collect::<Result<Vec<_>>>()?;
        Answer::from_symbols(&symbols)
    }
}

pub fn is_legitimate(q: &Question) -> bool {
    q.is_legitimate()
}

/// Winning condition: Σ y_i ≡ Δ(x)/2 (mod 2).
///
/// Fails on an illegitimate question or an answer containing ⊥; callers
/// decide what such rounds mean before reaching here.
pub fn is_appropriate(q: &Question, a: &Answer) -> Result<bool> {
    if q.len() != a.len() {
        return Err(Error::LengthMismatch {
            expected: q.len(),
            got: a.len(),
        });
    }
    let required = q.required_parity()?;
    let parity = a
        .parity()
        .ok_or_else(|| Error::UndefinedParity(a.to_string()))?;
    Ok(parity == required)
}

/// Parity-only check on packed words, for the hot loops. Assumes a
/// legitimate question.
#[inline]
pub(crate) fn wins_packed(question: u64, answer: u64) -> bool {
    (answer.count_ones() & 1) == ((question.count_ones() >> 1) & 1)
}

/// Iterates the even-weight n-bit strings in increasing (lexicographic)
/// order.
pub fn legitimate_questions(cfg: GameConfig) -> impl Iterator<Item = Question> {
    let n = cfg.n();
    (0..cfg.legitimate_count()).map(move |k| Question::from_raw(n, legitimate_by_rank(k)))
}

/// The `k`-th even-weight string: the top n-1 bits are `k`, the last bit
/// restores even parity. Monotone in `k`.
#[inline]
pub(crate) fn legitimate_by_rank(k: u64) -> u64 {
    (k << 1) | (k.count_ones() as u64 & 1)
}

pub fn enumerate_legitimate(cfg: GameConfig) -> Vec<Question> {
    legitimate_questions(cfg).collect()
}
