//! Substitutions (letter-to-word morphisms), their incidence matrices and the
//! induced substitution on block alphabets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{rational, RationalMatrix};
use crate::words::{check_same, same_alphabet, Alphabet, Letter, Word};

/// A morphism `A* → B*` given by its letter images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    domain: Arc<Alphabet>,
    codomain: Arc<Alphabet>,
    images: Vec<Word>,
}

impl Substitution {
    /// `images[a]` is the image of letter `a` of `domain`.
    pub fn new(domain: &Arc<Alphabet>, codomain: &Arc<Alphabet>, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for an alphabet of {} letters",
                images.len(),
                domain.len()
            )));
        }
        for img in &images {
            check_same(img.alphabet(), codomain, "letter image")?;
        }
        Ok(Substitution { domain: Arc::clone(domain), codomain: Arc::clone(codomain), images })
    }

    /// Images given as strings, in domain letter order.
    pub fn from_strs(domain: &Arc<Alphabet>, codomain: &Arc<Alphabet>, images: &[&str]) -> Result<Self> {
        let images = images.iter().map(|s| Word::parse(codomain, s)).collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, images)
    }

    pub fn identity(alphabet: &Arc<Alphabet>) -> Self {
        let images = alphabet.letters().map(|a| Word::from_raw(alphabet, vec![a])).collect();
        Substitution { domain: Arc::clone(alphabet), codomain: Arc::clone(alphabet), images }
    }

    /// Parses the `a->image;b->image` format against declared alphabets.
    /// Whitespace is ignored and every domain letter must appear exactly once.
    pub fn parse(text: &str, domain: &Arc<Alphabet>, codomain: &Arc<Alphabet>) -> Result<Self> {
        let mut images: Vec<Option<Word>> = vec![None; domain.len()];
        for (key, image) in split_rules(text)? {
            let letter = domain.index_of(&key).ok_or_else(|| Error::UnknownSymbol(key.clone()))?;
            if images[letter].is_some() {
                return Err(Error::Parse(format!("letter {key} has two images")));
            }
            images[letter] = Some(Word::parse(codomain, &image)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(a, img)| img.ok_or_else(|| Error::Parse(format!("no image for {}", domain.render(a)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, images)
    }

    /// Parses the text format over single-character symbols, inferring the
    /// alphabets: the domain is the rule keys in order of appearance, the
    /// codomain is the domain followed by any further image symbols.
    pub fn parse_inferred(text: &str) -> Result<Self> {
        let rules = split_rules(text)?;
        let mut keys: Vec<String> = Vec::new();
        for (k, _) in &rules {
            if k.chars().count() != 1 {
                return Err(Error::Parse(format!("symbol {k:?} is not a single character")));
            }
            if keys.contains(k) {
                return Err(Error::Parse(format!("letter {k} has two images")));
            }
            keys.push(k.clone());
        }
        let mut symbols = keys.clone();
        for (_, img) in &rules {
            for c in img.chars() {
                let s = c.to_string();
                if !symbols.contains(&s) {
                    symbols.push(s);
                }
            }
        }
        let domain = Alphabet::new(keys.clone())?;
        let codomain = if symbols.len() == keys.len() { Arc::clone(&domain) } else { Alphabet::new(symbols)? };
        Self::parse(text, &domain, &codomain)
    }

    pub fn domain(&self) -> &Arc<Alphabet> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Alphabet> {
        &self.codomain
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_endomorphism(&self) -> bool {
        same_alphabet(&self.domain, &self.codomain)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        check_same(w.alphabet(), &self.domain, "substitution argument")?;
        Ok(Word::from_raw(&self.codomain, self.apply_letters(w.letters())))
    }

    pub(crate) fn apply_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        let total = letters.iter().map(|&a| self.images[a].len()).sum();
        let mut out = Vec::with_capacity(total);
        for &a in letters {
            out.extend_from_slice(self.images[a].letters());
        }
        out
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Substitution) -> Result<Substitution> {
        check_same(inner.codomain(), &self.domain, "composition")?;
        let images = inner.images.iter().map(|img| self.apply(img)).collect::<Result<Vec<_>>>()?;
        Ok(Substitution { domain: Arc::clone(&inner.domain), codomain: Arc::clone(&self.codomain), images })
    }

    /// `σ₀ ∘ σ₁ ∘ ⋯ ∘ σ_{k−1}`; the identity on `alphabet` for an empty list.
    pub fn compose_all<'a, I>(alphabet: &Arc<Alphabet>, subs: I) -> Result<Substitution>
    where
        I: IntoIterator<Item = &'a Substitution>,
    {
        let mut acc = Substitution::identity(alphabet);
        for s in subs {
            acc = acc.compose(s)?;
        }
        Ok(acc)
    }

    /// `‖σ‖`.
    pub fn norm_max(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// `⟨σ⟩`.
    pub fn norm_min(&self) -> usize {
        self.images.iter().map(Word::len).min().unwrap_or(0)
    }

    pub fn is_non_erasing(&self) -> bool {
        self.norm_min() >= 1
    }

    pub fn is_left_proper(&self) -> bool {
        self.is_non_erasing() && self.images.windows(2).all(|p| p[0].letters()[0] == p[1].letters()[0])
    }

    pub fn is_right_proper(&self) -> bool {
        self.is_non_erasing()
            && self.images.windows(2).all(|p| p[0].letters().last() == p[1].letters().last())
    }

    pub fn properness_profile(&self) -> PropernessProfile {
        PropernessProfile {
            norm_max: self.norm_max(),
            norm_min: self.norm_min(),
            non_erasing: self.is_non_erasing(),
            left_proper: self.is_left_proper(),
            right_proper: self.is_right_proper(),
        }
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let rows = self.codomain.len();
        let mut entries = vec![vec![0u64; self.domain.len()]; rows];
        for (a, img) in self.images.iter().enumerate() {
            for &b in img.letters() {
                entries[b][a] += 1;
            }
        }
        IncidenceMatrix {
            row_alphabet: Arc::clone(&self.codomain),
            col_alphabet: Arc::clone(&self.domain),
            columns: self.domain.letters().collect(),
            entries,
        }
    }

    /// The substitution `a ↦ reverse(σ(a))`.
    pub fn reversed(&self) -> Substitution {
        Substitution {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            images: self.images.iter().map(Word::reversed).collect(),
        }
    }
}

fn split_rules(text: &str) -> Result<Vec<(String, String)>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rules = Vec::new();
    for rule in compact.split(';') {
        if rule.is_empty() {
            continue;
        }
        let (key, image) = rule
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("rule {rule:?} lacks '->'")))?;
        if key.is_empty() {
            return Err(Error::Parse(format!("rule {rule:?} has no letter")));
        }
        rules.push((key.to_string(), image.to_string()));
    }
    if rules.is_empty() {
        return Err(Error::Parse("no rules".into()));
    }
    Ok(rules)
}

/// Bit-exact `a->image;b->image` rendering in domain order.
impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, img) in self.images.iter().enumerate() {
            if a > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}->{}", self.domain.render(a), img)?;
        }
        Ok(())
    }
}

/// Norms and properness flags of a substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropernessProfile {
    pub norm_max: usize,
    pub norm_min: usize,
    pub non_erasing: bool,
    pub left_proper: bool,
    pub right_proper: bool,
}

/// `(|σ(a)|_b)` with rows indexed by codomain letters and columns by
/// (a subset of) domain letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    row_alphabet: Arc<Alphabet>,
    col_alphabet: Arc<Alphabet>,
    columns: Vec<Letter>,
    entries: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn get(&self, b: Letter, column: usize) -> u64 {
        self.entries[b][column]
    }

    /// Domain letters of the columns, in order.
    pub fn columns(&self) -> &[Letter] {
        &self.columns
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.columns.len()).map(|c| self.entries.iter().map(|row| row[c]).sum()).collect()
    }

    /// Integer product `self · other`; `other`'s rows must be `self`'s columns.
    pub fn mul(&self, other: &IncidenceMatrix) -> Result<IncidenceMatrix> {
        if !same_alphabet(&self.col_alphabet, &other.row_alphabet)
            || self.columns.len() != other.entries.len()
            || self.columns.iter().enumerate().any(|(i, &c)| c != i)
        {
            return Err(Error::DimensionMismatch("incidence product shapes".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|row| {
                (0..other.columns.len())
                    .map(|c| row.iter().enumerate().map(|(k, &x)| x * other.entries[k][c]).sum())
                    .collect()
            })
            .collect();
        Ok(IncidenceMatrix {
            row_alphabet: Arc::clone(&self.row_alphabet),
            col_alphabet: Arc::clone(&other.col_alphabet),
            columns: other.columns.clone(),
            entries,
        })
    }

    pub fn to_rational(&self) -> RationalMatrix {
        let rows = self.entries.len();
        let cols = self.columns.len();
        let data = self.entries.iter().flatten().map(|&x| rational(x as i64)).collect();
        RationalMatrix::new(rows, cols, data)
            .expect("shape")
            .with_labels(
                self.row_alphabet.letters().map(|b| self.row_alphabet.render(b)).collect(),
                self.columns.iter().map(|&a| self.col_alphabet.render(a)).collect(),
            )
            .expect("labels")
    }
}

/// Which side of the letter images the anchor word `u` sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnchorSide {
    /// `u` is a prefix of `σ(a)u` for every letter `a`.
    Prefix,
    /// `u` is a suffix of `uσ(a)` for every letter `a`.
    Suffix,
}

/// The substitution `σ̂` induced by `σ` on length-`n` blocks, with values in
/// the `m`-block alphabet of the codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSubstitution {
    base: Substitution,
    n: usize,
    m: usize,
    anchor: Word,
    side: AnchorSide,
    domain: Arc<Alphabet>,
    codomain: Arc<Alphabet>,
    images: BTreeMap<Letter, Word>,
}

impl BlockSubstitution {
    pub fn base(&self) -> &Substitution {
        &self.base
    }

    pub fn block_length_in(&self) -> usize {
        self.n
    }

    pub fn block_length_out(&self) -> usize {
        self.m
    }

    pub fn anchor(&self) -> &Word {
        &self.anchor
    }

    pub fn side(&self) -> AnchorSide {
        self.side
    }

    /// The `Aⁿ` block alphabet of the arguments.
    pub fn domain(&self) -> &Arc<Alphabet> {
        &self.domain
    }

    /// The `Bᵐ` block alphabet of the images.
    pub fn codomain(&self) -> &Arc<Alphabet> {
        &self.codomain
    }

    /// Block letters on which the substitution is defined, in order.
    pub fn restricted_domain(&self) -> Vec<Letter> {
        self.images.keys().copied().collect()
    }

    pub fn image(&self, block: Letter) -> Option<&Word> {
        self.images.get(&block)
    }

    /// Applies `σ̂` to a word over `Aⁿ` whose letters all lie in the restricted domain.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        check_same(w.alphabet(), &self.domain, "block substitution argument")?;
        let mut out = Vec::new();
        for &t in w.letters() {
            let img = self
                .images
                .get(&t)
                .ok_or_else(|| Error::UnknownSymbol(format!("block {} outside the domain", self.domain.render(t))))?;
            out.extend_from_slice(img.letters());
        }
        Ok(Word::from_raw(&self.codomain, out))
    }

    /// Incidence matrix with rows indexed by all of `Bᵐ` and columns by the
    /// restricted domain.
    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let columns: Vec<Letter> = self.images.keys().copied().collect();
        let mut entries = vec![vec![0u64; columns.len()]; self.codomain.len()];
        for (c, img) in self.images.values().enumerate() {
            for &b in img.letters() {
                entries[b][c] += 1;
            }
        }
        IncidenceMatrix {
            row_alphabet: Arc::clone(&self.codomain),
            col_alphabet: Arc::clone(&self.domain),
            columns,
            entries,
        }
    }

    /// The total substitution `Aⁿ → Bᵐ`, available when the restricted domain
    /// is all of `Aⁿ`.
    pub fn to_substitution(&self) -> Result<Substitution> {
        if self.images.len() != self.domain.len() {
            return Err(Error::DimensionMismatch(format!(
                "defined on {} of {} blocks",
                self.images.len(),
                self.domain.len()
            )));
        }
        Substitution::new(&self.domain, &self.codomain, self.images.values().cloned().collect())
    }

    /// The boundary term of the block identity for `w`: `(σ(suff_{n−1}(w))u)^{(m)}`
    /// on the prefix side, `(uσ(pref_{n−1}(w)))^{(m)}` on the suffix side.
    pub fn boundary_term(&self, w: &Word) -> Result<Word> {
        let keep = (self.n - 1).min(w.len());
        let word = match self.side {
            AnchorSide::Prefix => self.base.apply(&w.suffix(keep)?)?.concat(&self.anchor)?,
            AnchorSide::Suffix => self.anchor.concat(&self.base.apply(&w.prefix(keep)?)?)?,
        };
        Ok(word.n_coding(self.m))
    }

    /// Both sides of the block identity for `w`:
    /// prefix side `(σ(w)u)^{(m)}` vs `σ̂(w^{(n)})·(σ(suff_{n−1}(w))u)^{(m)}`,
    /// suffix side `(uσ(w))^{(m)}` vs `(uσ(pref_{n−1}(w)))^{(m)}·σ̂(w^{(n)})`.
    pub fn identity_sides(&self, w: &Word) -> Result<(Word, Word)> {
        let image = self.base.apply(w)?;
        let hat = self.apply(&w.n_coding(self.n))?;
        let boundary = self.boundary_term(w)?;
        Ok(match self.side {
            AnchorSide::Prefix => (image.concat(&self.anchor)?.n_coding(self.m), hat.concat(&boundary)?),
            AnchorSide::Suffix => (self.anchor.concat(&image)?.n_coding(self.m), boundary.concat(&hat)?),
        })
    }
}

impl fmt::Display for BlockSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (t, img)) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}->{}", self.domain.render(*t), img)?;
        }
        Ok(())
    }
}

/// Largest admissible output block length for the given domain blocks:
/// `min |σ(w)| + |u| + 1` over the length-`(n−1)` factors `w` of the blocks.
pub fn max_block_length(sigma: &Substitution, n: usize, anchor: &Word, domain_blocks: &[Word]) -> Result<usize> {
    let context: BTreeSet<&[Letter]> = domain_blocks
        .iter()
        .flat_map(|b| [&b.letters()[..n - 1], &b.letters()[1..]])
        .collect();
    let min = context
        .iter()
        .map(|w| w.iter().map(|&a| sigma.image(a).len()).sum::<usize>())
        .min()
        .ok_or(Error::EmptyContext(n - 1))?;
    Ok(min + anchor.len() + 1)
}

/// Builds `σ̂` on `domain_blocks ⊆ Aⁿ` with image blocks of length `m`.
///
/// Prefix side: `σ̂(a₁⋯aₙ) = (σ(a₁)·pref_{m−1}(σ(a₂⋯aₙ)u))^{(m)}`. The suffix
/// side is obtained by mirroring every word, building the prefix-side
/// substitution and mirroring back.
pub fn induced_block_substitution(
    sigma: &Substitution,
    n: usize,
    m: usize,
    anchor: &Word,
    side: AnchorSide,
    domain_blocks: &[Word],
) -> Result<BlockSubstitution> {
    if n == 0 {
        return Err(Error::DimensionMismatch("block length n must be positive".into()));
    }
    check_same(anchor.alphabet(), sigma.codomain(), "anchor word")?;
    for b in domain_blocks {
        check_same(b.alphabet(), sigma.domain(), "domain block")?;
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!("domain block {b} is not of length {n}")));
        }
    }
    check_anchor(sigma, anchor, side)?;
    let max = max_block_length(sigma, n, anchor, domain_blocks)?;
    if m < 1 || m > max {
        return Err(Error::BlockLengthOutOfRange { m, max });
    }

    let (work_sigma, work_anchor) = match side {
        AnchorSide::Prefix => (sigma.clone(), anchor.clone()),
        AnchorSide::Suffix => (sigma.reversed(), anchor.reversed()),
    };
    let domain = Alphabet::blocks(sigma.domain(), n);
    let codomain = Alphabet::blocks(sigma.codomain(), m);
    let mut images = BTreeMap::new();
    for block in domain_blocks {
        let oriented = match side {
            AnchorSide::Prefix => block.clone(),
            AnchorSide::Suffix => block.reversed(),
        };
        let head = work_sigma.image(oriented.letters()[0]);
        let tail = work_sigma.apply(&oriented.factor(1..n))?.concat(&work_anchor)?;
        let img = head.concat(&tail.prefix_upto(m - 1))?.n_coding(m);
        let img = match side {
            AnchorSide::Prefix => img,
            AnchorSide::Suffix => img.mirrored(),
        };
        debug_assert_eq!(img.len(), sigma.image(block.letters()[if side == AnchorSide::Prefix { 0 } else { n - 1 }]).len());
        let key = domain.encode_block(block.letters()).expect("block");
        images.insert(key, Word::from_raw(&codomain, img.into_letters()));
    }
    Ok(BlockSubstitution {
        base: sigma.clone(),
        n,
        m,
        anchor: anchor.clone(),
        side,
        domain,
        codomain,
        images,
    })
}

/// Checks that `u` is a prefix of `σ(a)u` (or a suffix of `uσ(a)`) for every `a`.
pub fn check_anchor(sigma: &Substitution, anchor: &Word, side: AnchorSide) -> Result<()> {
    for (a, img) in sigma.images().iter().enumerate() {
        let ok = match side {
            AnchorSide::Prefix => img.concat(anchor)?.letters().starts_with(anchor.letters()),
            AnchorSide::Suffix => anchor.concat(img)?.letters().ends_with(anchor.letters()),
        };
        if !ok {
            let rel = if side == AnchorSide::Prefix { "prefix of σ(a)u" } else { "suffix of uσ(a)" };
            return Err(Error::AnchorViolated(format!(
                "{anchor} is not a {rel} for a = {}",
                sigma.domain().render(a)
            )));
        }
    }
    Ok(())
}

/// All words of length `n` over `alphabet`, in lexicographic order.
pub fn all_blocks(alphabet: &Arc<Alphabet>, n: usize) -> Vec<Word> {
    if n == 0 {
        return vec![Word::empty(alphabet)];
    }
    let blocks = Alphabet::blocks(alphabet, n);
    blocks
        .letters()
        .map(|t| Word::from_raw(alphabet, blocks.decode_block(t).expect("block")))
        .collect()
}
