//! Alphabets, words and the basic counting operations on them.
//!
//! Letters are indices into an [`Alphabet`]. An alphabet is either an explicit
//! ordered list of symbols or the block alphabet `Aⁿ` of some base alphabet,
//! whose letters are the length-`n` words over the base in lexicographic
//! order. Block alphabets are never materialised; a block letter is the
//! base-`#A` number formed by its symbols.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter in its alphabet.
pub type Letter = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Symbols(Vec<String>),
    Blocks { base: Arc<Alphabet>, length: usize },
}

/// A finite ordered alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    kind: Kind,
    size: usize,
}

impl Alphabet {
    /// Explicit alphabet; the order of `symbols` is the letter order.
    pub fn new<I, S>(symbols: I) -> Result<Arc<Alphabet>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        for (i, s) in names.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || "()|;".contains(c)) {
                return Err(Error::InvalidAlphabet(format!("bad symbol {s:?}")));
            }
            if names[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {s:?}")));
            }
        }
        let size = names.len();
        Ok(Arc::new(Alphabet { kind: Kind::Symbols(names), size }))
    }

    /// The alphabet `{0, 1}`.
    pub fn binary() -> Arc<Alphabet> {
        Alphabet::new(["0", "1"]).expect("binary alphabet")
    }

    /// The block alphabet `baseⁿ`.
    ///
    /// Panics if `length == 0` or if `#baseⁿ` does not fit in a `usize`.
    pub fn blocks(base: &Arc<Alphabet>, length: usize) -> Arc<Alphabet> {
        assert!(length >= 1, "block length must be positive");
        let size = (0..length)
            .try_fold(1usize, |acc, _| acc.checked_mul(base.len()))
            .expect("block alphabet too large");
        Arc::new(Alphabet {
            kind: Kind::Blocks { base: Arc::clone(base), length },
            size,
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.size
    }

    /// Base alphabet and block length, for block alphabets.
    pub fn block_structure(&self) -> Option<(&Arc<Alphabet>, usize)> {
        match &self.kind {
            Kind::Blocks { base, length } => Some((base, *length)),
            Kind::Symbols(_) => None,
        }
    }

    /// Base-alphabet letters of a block letter.
    pub fn decode_block(&self, letter: Letter) -> Option<Vec<Letter>> {
        let (base, length) = self.block_structure()?;
        let k = base.len();
        let mut out = vec![0; length];
        let mut rest = letter;
        for slot in out.iter_mut().rev() {
            *slot = rest % k;
            rest /= k;
        }
        Some(out)
    }

    /// Block letter of a sequence of base letters (`length` of them).
    pub fn encode_block(&self, letters: &[Letter]) -> Option<Letter> {
        let (base, length) = self.block_structure()?;
        if letters.len() != length {
            return None;
        }
        let k = base.len();
        Some(letters.iter().fold(0, |acc, &l| acc * k + l))
    }

    /// Printed form of a letter: the symbol itself, or `(…)` for block letters.
    pub fn render(&self, letter: Letter) -> String {
        let mut s = String::new();
        self.render_into(letter, &mut s);
        s
    }

    fn render_into(&self, letter: Letter, out: &mut String) {
        match &self.kind {
            Kind::Symbols(names) => out.push_str(&names[letter]),
            Kind::Blocks { base, .. } => {
                out.push('(');
                for l in self.decode_block(letter).expect("block alphabet") {
                    base.render_into(l, out);
                }
                out.push(')');
            }
        }
    }

    /// Symbol names, for explicit alphabets.
    pub fn symbols(&self) -> Option<&[String]> {
        match &self.kind {
            Kind::Symbols(names) => Some(names),
            Kind::Blocks { .. } => None,
        }
    }

    pub fn index_of(&self, symbol: &str) -> Option<Letter> {
        match &self.kind {
            Kind::Symbols(names) => names.iter().position(|s| s == symbol),
            Kind::Blocks { .. } => {
                let w = Word::parse(&Arc::new(self.clone()), symbol).ok()?;
                (w.len() == 1).then(|| w.letters[0])
            }
        }
    }

    fn single_char_symbols(&self) -> bool {
        match &self.kind {
            Kind::Symbols(names) => names.iter().all(|s| s.chars().count() == 1),
            Kind::Blocks { .. } => false,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Symbols(names) => write!(f, "{{{}}}", names.join(",")),
            Kind::Blocks { base, length } => write!(f, "{base}^{length}"),
        }
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_same(a: &Arc<Alphabet>, b: &Arc<Alphabet>, what: &str) -> Result<()> {
    if same_alphabet(a, b) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("{what}: {a} vs {b}")))
    }
}

/// A finite word over an alphabet.
#[derive(Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: &Arc<Alphabet>, letters: Vec<Letter>) -> Result<Word> {
        if let Some(&bad) = letters.iter().find(|&&l| l >= alphabet.len()) {
            return Err(Error::UnknownSymbol(format!("letter index {bad}")));
        }
        Ok(Word { alphabet: Arc::clone(alphabet), letters })
    }

    pub(crate) fn from_raw(alphabet: &Arc<Alphabet>, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.iter().all(|&l| l < alphabet.len()));
        Word { alphabet: Arc::clone(alphabet), letters }
    }

    pub fn empty(alphabet: &Arc<Alphabet>) -> Word {
        Word { alphabet: Arc::clone(alphabet), letters: Vec::new() }
    }

    /// Parses a plain string of symbols.
    ///
    /// Single-character alphabets are read character by character, ignoring
    /// whitespace; multi-character symbols must be whitespace separated.
    /// Block words are written as parenthesised groups, e.g. `(01)(11)`.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word> {
        let letters = match &alphabet.kind {
            Kind::Symbols(_) if alphabet.single_char_symbols() => text
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    alphabet
                        .index_of(c.encode_utf8(&mut [0; 4]))
                        .ok_or_else(|| Error::UnknownSymbol(c.to_string()))
                })
                .collect::<Result<Vec<_>>>()?,
            Kind::Symbols(_) => text
                .split_whitespace()
                .map(|s| alphabet.index_of(s).ok_or_else(|| Error::UnknownSymbol(s.into())))
                .collect::<Result<Vec<_>>>()?,
            Kind::Blocks { base, length } => {
                let mut out = Vec::new();
                for group in split_groups(text)? {
                    let inner = Word::parse(base, group)?;
                    if inner.len() != *length {
                        return Err(Error::Parse(format!(
                            "block ({group}) has length {} instead of {length}",
                            inner.len()
                        )));
                    }
                    out.push(alphabet.encode_block(&inner.letters).expect("block"));
                }
                out
            }
        };
        Ok(Word { alphabet: Arc::clone(alphabet), letters })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        check_same(&self.alphabet, &other.alphabet, "concatenation")?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word { alphabet: Arc::clone(&self.alphabet), letters })
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { alphabet: Arc::clone(&self.alphabet), letters }
    }

    /// The factor occupying `range`.
    pub fn factor(&self, range: std::ops::Range<usize>) -> Word {
        Word { alphabet: Arc::clone(&self.alphabet), letters: self.letters[range].to_vec() }
    }

    pub fn prefix(&self, n: usize) -> Result<Word> {
        if n > self.len() {
            return Err(Error::OutOfRange { requested: n, len: self.len() });
        }
        Ok(self.factor(0..n))
    }

    pub fn suffix(&self, n: usize) -> Result<Word> {
        if n > self.len() {
            return Err(Error::OutOfRange { requested: n, len: self.len() });
        }
        Ok(self.factor(self.len() - n..self.len()))
    }

    /// `pref_n`, truncated to the whole word when it is shorter than `n`.
    pub fn prefix_upto(&self, n: usize) -> Word {
        self.factor(0..n.min(self.len()))
    }

    /// Number of (possibly overlapping) occurrences of `v`.
    pub fn count_occurrences(&self, v: &Word) -> Result<usize> {
        check_same(&self.alphabet, &v.alphabet, "occurrence count")?;
        if v.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(count_in(&self.letters, &v.letters))
    }

    /// All factors of length `n`; `{ε}` for `n = 0`.
    pub fn factor_set(&self, n: usize) -> BTreeSet<Word> {
        if n == 0 {
            return BTreeSet::from([Word::empty(&self.alphabet)]);
        }
        if n > self.len() {
            return BTreeSet::new();
        }
        self.letters
            .windows(n)
            .map(|w| Word { alphabet: Arc::clone(&self.alphabet), letters: w.to_vec() })
            .collect()
    }

    /// The `n`-coding: the word over `Aⁿ` of sliding length-`n` windows.
    pub fn n_coding(&self, n: usize) -> Word {
        let blocks = Alphabet::blocks(&self.alphabet, n);
        let k = self.alphabet.len();
        let letters = if self.len() < n {
            Vec::new()
        } else {
            self.letters
                .windows(n)
                .map(|w| w.iter().fold(0, |acc, &l| acc * k + l))
                .collect()
        };
        Word { alphabet: blocks, letters }
    }

    /// Position of the first occurrence of `pattern`, if any.
    pub fn find(&self, pattern: &Word) -> Result<Option<usize>> {
        check_same(&self.alphabet, &pattern.alphabet, "search")?;
        Ok(find_in(&self.letters, &pattern.letters))
    }

    /// For a block word, the underlying base letters of each block, concatenated.
    pub fn flatten_blocks(&self) -> Option<Word> {
        let (base, _) = self.alphabet.block_structure()?;
        let letters = self
            .letters
            .iter()
            .flat_map(|&l| self.alphabet.decode_block(l).expect("block"))
            .collect();
        Some(Word { alphabet: Arc::clone(base), letters })
    }

    /// Reverses the letter order and, for block words, the inside of each block.
    pub(crate) fn mirrored(&self) -> Word {
        let mut out = self.reversed();
        if self.alphabet.block_structure().is_some() {
            for l in out.letters.iter_mut() {
                let mut inner = self.alphabet.decode_block(*l).expect("block");
                inner.reverse();
                *l = self.alphabet.encode_block(&inner).expect("block");
            }
        }
        out
    }
}

fn split_groups(text: &str) -> Result<Vec<&str>> {
    let mut groups = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' => {
                if depth == 0 {
                    start = i + 1;
                }
                depth += 1;
            }
            ')' => {
                if depth == 0 {
                    return Err(Error::Parse(format!("unbalanced ')' in {text:?}")));
                }
                depth -= 1;
                if depth == 0 {
                    groups.push(&text[start..i]);
                }
            }
            c if c.is_whitespace() => {}
            c if depth == 0 => {
                return Err(Error::Parse(format!("unexpected {c:?} outside a block in {text:?}")))
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '(' in {text:?}")));
    }
    Ok(groups)
}

/// Sliding-window occurrence count of a non-empty pattern.
pub(crate) fn count_in(text: &[Letter], pattern: &[Letter]) -> usize {
    if pattern.len() > text.len() {
        return 0;
    }
    text.windows(pattern.len()).filter(|w| *w == pattern).count()
}

/// Knuth–Morris–Pratt search.
pub(crate) fn find_in(text: &[Letter], pattern: &[Letter]) -> Option<usize> {
    if pattern.is_empty() {
        return Some(0);
    }
    let mut fail = vec![0usize; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pattern[k] {
            k = fail[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            return Some(i + 1 - k);
        }
    }
    None
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && same_alphabet(&self.alphabet, &other.alphabet)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

/// Lexicographic order on letter indices.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.cmp(&other.letters).then_with(|| {
            if same_alphabet(&self.alphabet, &other.alphabet) {
                Ordering::Equal
            } else {
                self.alphabet.to_string().cmp(&other.alphabet.to_string())
            }
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spaced = matches!(self.alphabet.kind, Kind::Symbols(_)) && !self.alphabet.single_char_symbols();
        let mut out = String::new();
        for (i, &l) in self.letters.iter().enumerate() {
            if spaced && i > 0 {
                out.push(' ');
            }
            self.alphabet.render_into(l, &mut out);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.to_string())
    }
}

/// Occurrence counts of every length-`n` word in a given word, indexed by
/// block letter (lexicographic order of `Aⁿ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceVector {
    blocks: Arc<Alphabet>,
    factor_length: usize,
    counts: Vec<u64>,
}

impl OccurrenceVector {
    pub fn of(w: &Word, n: usize) -> OccurrenceVector {
        let coded = w.n_coding(n);
        let mut counts = vec![0u64; coded.alphabet.len()];
        for &l in coded.letters() {
            counts[l] += 1;
        }
        OccurrenceVector { blocks: Arc::clone(&coded.alphabet), factor_length: n, counts }
    }

    pub fn factor_length(&self) -> usize {
        self.factor_length
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count of the length-`n` word `v`.
    pub fn get(&self, v: &Word) -> Result<u64> {
        let (base, n) = self.blocks.block_structure().expect("block alphabet");
        check_same(base, v.alphabet(), "occurrence vector lookup")?;
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("pattern of length {} for n = {n}", v.len())));
        }
        Ok(self.counts[self.blocks.encode_block(v.letters()).expect("block")])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}
