//! Symbolic coding of the diagonal base map: grid Markov partition,
//! words, inverse branches and cylinder anchor points.
//!
//! Ordering convention: a word `(a1, ..., an)` is the itinerary of its
//! cylinder point `x0 = ā(x)`, so `x0` lies in cell `a1`, `φ(x0)` in cell
//! `a2`, and so on, with `φⁿ(x0) = x`. The first symbol is therefore the
//! deepest preimage and the last symbol selects the one-step branch.
//!
//! Worked example for `M = (2)`, `x = 0`, word `(1, 0)`: the branch for the
//! last symbol `0` maps `0 ↦ 0`, then the branch for `1` maps `0 ↦ 0.5`.
//! Indeed `0.5` lies in cell 1 and `φ(0.5) = 0` lies in cell 0.

use crate::error::{check_budget, Error, Result};
use crate::model::{reduce_mod1, SolenoidSpec};

/// Default cap on the number of words produced by one enumeration.
pub const DEFAULT_WORD_BUDGET: u64 = 1 << 24;

/// A finite word over the alphabet `{0, …, N−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(symbols: Vec<u32>) -> Self {
        Self(symbols)
    }

    /// Builds a word after checking every symbol against the alphabet size.
    pub fn checked(symbols: Vec<u32>, alphabet: u64) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| u64::from(s) >= alphabet) {
            return Err(Error::InvalidArgument(format!(
                "symbol {s} outside alphabet of size {alphabet}"
            )));
        }
        Ok(Self(symbols))
    }

    /// The word with lexicographic rank `index` among words of length `len`.
    pub fn from_index(index: u64, len: usize, alphabet: u64) -> Self {
        let mut symbols = vec![0u32; len];
        let mut rem = index;
        for s in symbols.iter_mut().rev() {
            *s = (rem % alphabet) as u32;
            rem /= alphabet;
        }
        Self(symbols)
    }

    /// Lexicographic rank among words of the same length.
    pub fn index(&self, alphabet: u64) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &s| acc * alphabet + u64::from(s))
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Symbol of the deepest preimage.
    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Symbol of the one-step branch; it names the component of `T(V)`.
    pub fn shallowest(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Truncation to the `j` shallowest letters, i.e. the word of `φ^{n-j}(ā(x))`.
    pub fn shallow_suffix(&self, j: usize) -> Word {
        Word(self.0[self.0.len() - j..].to_vec())
    }

    /// `prefix · self`: extends the word at the deep end.
    pub fn deepen(&self, prefix: &[u32]) -> Word {
        let mut v = prefix.to_vec();
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Multi-index of the grid cell named by `symbol`; mixed radix with the
/// first coordinate most significant.
pub fn decode_symbol(base: &[u32], symbol: u32) -> Vec<u32> {
    let mut cell = vec![0u32; base.len()];
    let mut rem = symbol;
    for (c, &m) in cell.iter_mut().zip(base).rev() {
        *c = rem % m;
        rem /= m;
    }
    cell
}

pub fn encode_cell(base: &[u32], cell: &[u32]) -> u32 {
    cell.iter().zip(base).fold(0, |acc, (&c, &m)| acc * m + c)
}

/// Grid cell (symbol) containing `x`.
pub fn cell_of(base: &[u32], x: &[f64]) -> u32 {
    let cell: Vec<u32> = x
        .iter()
        .zip(base)
        .map(|(&xi, &m)| ((reduce_mod1(xi) * f64::from(m)).floor() as u32).min(m - 1))
        .collect();
    encode_cell(base, &cell)
}

/// Preimage of `x` under `φ` lying in the cell named by `symbol`.
pub fn inverse_branch_in(base: &[u32], symbol: u32, x: &[f64]) -> Vec<f64> {
    let cell = decode_symbol(base, symbol);
    x.iter()
        .zip(base)
        .zip(cell)
        .map(|((&xi, &m), c)| (reduce_mod1(xi) + f64::from(c)) / f64::from(m))
        .collect()
}

/// Preimage of `x` under `φ` lying in the cell named by `symbol`.
pub fn inverse_branch(spec: &SolenoidSpec, symbol: u32, x: &[f64]) -> Result<Vec<f64>> {
    if u64::from(symbol) >= spec.degree() {
        return Err(Error::InvalidArgument(format!(
            "symbol {symbol} outside alphabet of size {}",
            spec.degree()
        )));
    }
    Ok(inverse_branch_in(spec.base(), symbol, x))
}

/// The branch orbit `x1, …, xn` of `(word, x)`: `x1` is the one-step
/// preimage (last symbol) and `xn = ā(x)` the deepest.
pub fn branch_orbit(base: &[u32], word: &Word, x: &[f64]) -> Vec<Vec<f64>> {
    let mut orbit = Vec::with_capacity(word.len());
    let mut cur = x.to_vec();
    for &s in word.symbols().iter().rev() {
        cur = inverse_branch_in(base, s, &cur);
        orbit.push(cur.clone());
    }
    orbit
}

/// The cylinder point `ā(x)`: the unique `x0` with itinerary `word` and
/// `φⁿ(x0) = x`.
pub fn cylinder_point(spec: &SolenoidSpec, word: &Word, x: &[f64]) -> Result<Vec<f64>> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("cylinder point needs a nonempty word".into()));
    }
    let n = spec.degree();
    Word::checked(word.symbols().to_vec(), n)?;
    Ok(branch_orbit(spec.base(), word, x)
        .pop()
        .expect("nonempty word"))
}

/// `φⁿ(x)`
pub fn iterate_base(spec: &SolenoidSpec, x: &[f64], n: usize) -> Vec<f64> {
    (0..n).fold(x.to_vec(), |cur, _| spec.base_map(&cur))
}

/// A cylinder `T_ā` with the anchor `ā(x)` and its exact grid diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderSet {
    pub word: Word,
    pub anchor: Vec<f64>,
    /// Euclidean diameter of the closed cylinder box.
    pub diameter: f64,
}

/// Euclidean diameter of a depth-`n` cylinder of the grid partition.
pub fn cylinder_diameter(base: &[u32], n: usize) -> f64 {
    base.iter()
        .map(|&m| f64::from(m).powi(-(n as i32)).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn cylinder(spec: &SolenoidSpec, word: &Word, x: &[f64]) -> Result<CylinderSet> {
    Ok(CylinderSet {
        anchor: cylinder_point(spec, word, x)?,
        diameter: cylinder_diameter(spec.base(), word.len()),
        word: word.clone(),
    })
}

/// Streaming lexicographic enumeration of all words of a fixed length.
#[derive(Debug, Clone)]
pub struct WordIter {
    alphabet: u64,
    len: usize,
    next: u64,
    total: u64,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        (self.next < self.total).then(|| {
            let w = Word::from_index(self.next, self.len, self.alphabet);
            self.next += 1;
            w
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.total - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for WordIter {}

/// `N^n`, or a budget error when it exceeds `budget`.
pub fn word_count(alphabet: u64, n: usize, budget: u64) -> Result<u64> {
    let count = (alphabet as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    check_budget("word enumeration", count, u128::from(budget))?;
    Ok(count as u64)
}

/// All `N^n` words of length `n` in lexicographic order.
pub fn enumerate_words(spec: &SolenoidSpec, n: usize, budget: u64) -> Result<WordIter> {
    enumerate_words_over(spec.degree(), n, budget)
}

pub fn enumerate_words_over(alphabet: u64, n: usize, budget: u64) -> Result<WordIter> {
    let total = word_count(alphabet, n, budget)?;
    Ok(WordIter {
        alphabet,
        len: n,
        next: 0,
        total,
    })
}

/// Transition matrix of the coding: entry `(i, j)` is 1 when cell `i` maps
/// across cell `j`. For grid maps every entry is 1 (full shift).
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityMatrix {
    size: usize,
    entries: Vec<u8>,
}

impl AdmissibilityMatrix {
    pub fn full_shift(size: usize) -> Self {
        Self {
            size,
            entries: vec![1; size * size],
        }
    }

    pub fn for_spec(spec: &SolenoidSpec) -> Self {
        Self::full_shift(spec.degree() as usize)
    }

    pub fn allows(&self, from: u32, to: u32) -> bool {
        self.entries[from as usize * self.size + to as usize] == 1
    }

    pub fn is_full_shift(&self) -> bool {
        self.entries.iter().all(|&e| e == 1)
    }

    pub fn admissible(&self, word: &Word) -> bool {
        word.symbols().windows(2).all(|w| self.allows(w[0], w[1]))
    }

    /// Number of admissible words of length `n`, `1ᵀ A^{n-1} 1`.
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let mut v = vec![1u128; self.size];
        for _ in 1..n {
            v = (0..self.size)
                .map(|i| {
                    (0..self.size)
                        .filter(|&j| self.entries[i * self.size + j] == 1)
                        .map(|j| v[j])
                        .sum()
                })
                .collect();
        }
        v.iter().sum()
    }
}
