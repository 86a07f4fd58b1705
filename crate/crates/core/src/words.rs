//! The m-bonacci word: substitution, prefixes, Parikh data and the greedy
//! prefix decomposition.
//!
//! Letters are stored as `u8`, so alphabets up to m = 256 can be
//! materialized; the closed-form operations accept any `m >= 2`.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// A finite word over the alphabet `{0, ..., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LetterWord {
    pub letters: Vec<u8>,
}

impl LetterWord {
    pub fn new(letters: Vec<u8>) -> Self {
        LetterWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Count of a single letter.
    pub fn count(&self, a: u8) -> usize {
        self.letters.iter().filter(|&&x| x == a).count()
    }

    /// Parse from the CLI/golden-file format: ASCII digits for m <= 10,
    /// comma-separated integers otherwise.
    pub fn parse(s: &str, m: u32) -> Result<Self> {
        let letters: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::Config(format!("bad letter {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Config(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        for &l in &letters {
            check_letter(l, m)?;
        }
        Ok(LetterWord { letters })
    }

    /// Render in the CLI/golden-file format.
    pub fn render(&self, m: u32) -> String {
        if m <= 10 {
            self.letters.iter().map(|l| (b'0' + l) as char).collect()
        } else {
            self.letters
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for LetterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(10))
    }
}

/// Per-letter occurrence counts of a finite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParikhVector {
    pub counts: Vec<BigInt>,
}

/// The m x m matrix `M[a][b] = |phi(b)|_a`: first row all ones, ones on the
/// subdiagonal, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMatrix {
    pub m: u32,
    pub entries: Vec<Vec<BigInt>>,
}

impl SubstitutionMatrix {
    pub fn new(m: u32) -> Self {
        let n = m as usize;
        let mut entries = vec![vec![BigInt::zero(); n]; n];
        for b in 0..n {
            entries[0][b] = BigInt::one();
        }
        for b in 0..n - 1 {
            entries[b + 1][b] = BigInt::one();
        }
        SubstitutionMatrix { m, entries }
    }

    pub fn apply(&self, v: &ParikhVector) -> ParikhVector {
        let n = self.m as usize;
        let counts = (0..n)
            .map(|a| (0..n).map(|b| &self.entries[a][b] * &v.counts[b]).sum())
            .collect();
        ParikhVector { counts }
    }
}

/// The m-bonacci integer sequence `T_0 = ... = T_{m-2} = 0`, `T_{m-1} = 1`,
/// `T_n = T_{n-1} + ... + T_{n-m}`.
#[derive(Debug, Clone)]
pub struct MBonacciSequence {
    pub m: u32,
    pub values: Vec<BigInt>,
}

impl MBonacciSequence {
    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n]
    }
}

/// Greedy decomposition of the length-n prefix into blocks `phi^k(0)`.
/// `bits[k] == true` means the block `phi^k(0)` is used; blocks appear in
/// decreasing order of k in the reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixDecomposition {
    pub n: u64,
    /// `bits[k]` is the digit delta_k; index 0 is the smallest block.
    pub bits: Vec<bool>,
}

pub(crate) fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::AlphabetTooSmall(m));
    }
    Ok(())
}

fn check_letter(letter: u8, m: u32) -> Result<()> {
    if (letter as u32) < m {
        Ok(())
    } else {
        Err(Error::InvalidLetter {
            letter: letter as u32,
            m,
        })
    }
}

/// Image of a single letter: `a -> 0(a+1)` for `a < m-1`, `(m-1) -> 0`.
#[inline]
pub fn substitute_letter(a: u8, m: u32, out: &mut Vec<u8>) {
    out.push(0);
    if (a as u32) < m - 1 {
        out.push(a + 1);
    }
}

/// Apply the substitution to a whole word.
pub fn apply_substitution(w: &LetterWord, m: u32) -> Result<LetterWord> {
    check_m(m)?;
    let mut out = Vec::with_capacity(2 * w.len());
    for &a in &w.letters {
        check_letter(a, m)?;
        substitute_letter(a, m, &mut out);
    }
    Ok(LetterWord::new(out))
}

/// Streaming generator of the fixed point. Memory grows linearly with the
/// number of letters produced; each caller gets an independent cursor.
pub struct FixedPointIter {
    m: u32,
    buf: Vec<u8>,
    /// next position in `buf` whose image has not been appended yet
    expand: usize,
    /// next position to hand out
    out: usize,
}

impl FixedPointIter {
    pub fn new(m: u32) -> Self {
        // phi(0) = 01 and the fixed point starts with it; expanding from
        // index 1 onward regenerates the rest.
        FixedPointIter {
            m,
            buf: vec![0, 1],
            expand: 1,
            out: 0,
        }
    }
}

impl Iterator for FixedPointIter {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        while self.out >= self.buf.len() {
            let a = self.buf[self.expand];
            self.expand += 1;
            let m = self.m;
            self.buf.push(0);
            if (a as u32) < m - 1 {
                self.buf.push(a + 1);
            }
        }
        let l = self.buf[self.out];
        self.out += 1;
        Some(l)
    }
}

/// First n letters of the m-bonacci word.
pub fn fixed_point_prefix(m: u32, n: usize) -> Result<LetterWord> {
    check_m(m)?;
    Ok(LetterWord::new(FixedPointIter::new(m).take(n).collect()))
}

/// `T_0 ... T_upto` of the m-bonacci sequence.
pub fn mbonacci_numbers(m: u32, upto: usize) -> Result<MBonacciSequence> {
    check_m(m)?;
    let mm = m as usize;
    let len = upto.max(mm - 1) + 1;
    let mut values = vec![BigInt::zero(); len];
    values[mm - 1] = BigInt::one();
    for n in mm..len {
        let s: BigInt = values[n - mm..n].iter().sum();
        values[n] = s;
    }
    values.truncate(upto + 1);
    Ok(MBonacciSequence { m, values })
}

/// `|phi^k(0)| = T_{k+m}`, with the closed forms `2^k` for `k <= m-1` and
/// `2^k - 2^(k-m) - (k-m) 2^(k-m-1)` for `m <= k <= 2m-1`.
pub fn phi0_length(m: u32, k: usize) -> Result<BigInt> {
    check_m(m)?;
    let mm = m as usize;
    if k <= mm - 1 {
        Ok(BigInt::one() << k)
    } else if k <= 2 * mm - 1 {
        let a: BigInt = BigInt::one() << k;
        let b: BigInt = BigInt::one() << (k - mm);
        let c: BigInt = BigInt::from((k - mm) as u64) << (k - mm).saturating_sub(1);
        Ok(a - b - c)
    } else {
        let seq = mbonacci_numbers(m, k + mm)?;
        Ok(seq.values[k + mm].clone())
    }
}

/// `|phi^k(0)|_a = T_{k+m-a-1}`.
pub fn phi0_letter_count(m: u32, k: usize, a: u32) -> Result<BigInt> {
    check_m(m)?;
    check_letter(a as u8, m)?;
    let idx = k + m as usize - a as usize - 1;
    let seq = mbonacci_numbers(m, idx)?;
    Ok(seq.values[idx].clone())
}

/// Parikh vector of a word.
pub fn parikh(w: &LetterWord, m: u32) -> Result<ParikhVector> {
    check_m(m)?;
    let mut counts = vec![BigInt::zero(); m as usize];
    for &a in &w.letters {
        check_letter(a, m)?;
        counts[a as usize] += 1;
    }
    Ok(ParikhVector { counts })
}

/// Greedy (largest-block-first) decomposition of the length-n prefix:
/// repeatedly subtract the largest `|phi^k(0)| = T_{k+m}` not exceeding the
/// remainder. Reconstruction equals `fixed_point_prefix(m, n)`.
pub fn decompose_prefix(m: u32, n: u64) -> Result<PrefixDecomposition> {
    check_m(m)?;
    let mm = m as usize;
    // block lengths T_m, T_{m+1}, ... while <= n
    let mut blocks: Vec<BigInt> = Vec::new();
    {
        let mut seq: Vec<BigInt> = Vec::new();
        let mut i = 0usize;
        loop {
            let idx = i + mm;
            while seq.len() <= idx {
                let j = seq.len();
                let v = if j < mm - 1 {
                    BigInt::zero()
                } else if j == mm - 1 {
                    BigInt::one()
                } else {
                    seq[j - mm..j].iter().sum()
                };
                seq.push(v);
            }
            if seq[idx] > BigInt::from(n) {
                break;
            }
            blocks.push(seq[idx].clone());
            i += 1;
        }
    }
    let mut bits = vec![false; blocks.len()];
    let mut rem = BigInt::from(n);
    for k in (0..blocks.len()).rev() {
        if blocks[k] <= rem {
            bits[k] = true;
            rem -= &blocks[k];
        }
    }
    debug_assert!(rem.is_zero());
    Ok(PrefixDecomposition { n, bits })
}

/// Reconstruct the word described by a decomposition (concatenation of the
/// selected `phi^k(0)` in decreasing k).
pub fn reconstruct_decomposition(m: u32, d: &PrefixDecomposition) -> Result<LetterWord> {
    check_m(m)?;
    let mut out = Vec::new();
    for k in (0..d.bits.len()).rev() {
        if d.bits[k] {
            let block = iterate_phi0(m, k);
            out.extend_from_slice(&block);
        }
    }
    Ok(LetterWord::new(out))
}

/// `phi^k(0)` materialized.
pub fn iterate_phi0(m: u32, k: usize) -> Vec<u8> {
    let mut w = vec![0u8];
    for _ in 0..k {
        let mut out = Vec::with_capacity(2 * w.len());
        for &a in &w {
            substitute_letter(a, m, &mut out);
        }
        w = out;
    }
    w
}

/// `|u[n]|_a` from the greedy decomposition: `sum_k delta_k T_{k+m-a-1}`.
pub fn count_letter_in_prefix(m: u32, a: u32, n: u64) -> Result<BigInt> {
    check_m(m)?;
    check_letter(a as u8, m)?;
    if n == 0 {
        return Ok(BigInt::zero());
    }
    let d = decompose_prefix(m, n)?;
    let top = d.bits.len() - 1 + m as usize;
    let seq = mbonacci_numbers(m, top)?;
    let mut total = BigInt::zero();
    for (k, &bit) in d.bits.iter().enumerate() {
        if bit {
            total += seq.get(k + m as usize - a as usize - 1);
        }
    }
    Ok(total)
}

/// Smallest starting index of `needle` inside the length-`prefix_len` prefix,
/// or `None`. Linear scan with rolling comparison.
pub fn factor_search(m: u32, needle: &LetterWord, prefix_len: usize) -> Result<Option<usize>> {
    check_m(m)?;
    if needle.is_empty() {
        return Ok(Some(0));
    }
    if prefix_len < needle.len() {
        return Err(Error::Config(format!(
            "prefix_len {} shorter than needle length {}",
            prefix_len,
            needle.len()
        )));
    }
    let hay = fixed_point_prefix(m, prefix_len)?;
    Ok(hay
        .letters
        .windows(needle.len())
        .position(|w| w == needle.letters.as_slice()))
}
