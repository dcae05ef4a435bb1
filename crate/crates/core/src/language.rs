//! Directive sequences and finite samples of their level languages.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::index::{FactorIndex, FactorRef};
use crate::substitution::Substitution;
use crate::words::{check_same, same_alphabet, Alphabet, Letter, Word};

/// Default cap on the total number of letters materialized for one sample.
pub const DEFAULT_BUDGET: usize = 1 << 24;

/// A sequence `(σ_k)_{k≥0}` with `σ_k: A_{k+1}* → A_k*`, given as a finite
/// prefix followed by an optional period repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectiveSequence {
    prefix: Vec<Substitution>,
    period: Vec<Substitution>,
    names: Option<(String, String)>,
}

impl DirectiveSequence {
    pub fn new(prefix: Vec<Substitution>, period: Vec<Substitution>) -> Result<Self> {
        if prefix.is_empty() && period.is_empty() {
            return Err(Error::InconsistentDirective("no substitutions".into()));
        }
        let chain: Vec<&Substitution> = prefix.iter().chain(&period).collect();
        for (k, pair) in chain.windows(2).enumerate() {
            if !same_alphabet(pair[0].domain(), pair[1].codomain()) {
                return Err(Error::InconsistentDirective(format!(
                    "domain of σ_{k} is {} but σ_{} maps into {}",
                    pair[0].domain(),
                    k + 1,
                    pair[1].codomain()
                )));
            }
        }
        if let (Some(last), Some(first)) = (period.last(), period.first()) {
            if !same_alphabet(last.domain(), first.codomain()) {
                return Err(Error::InconsistentDirective(format!(
                    "period does not close up: {} vs {}",
                    last.domain(),
                    first.codomain()
                )));
            }
        }
        Ok(DirectiveSequence { prefix, period, names: None })
    }

    /// The constant sequence `σ^∞`.
    pub fn stationary(sigma: Substitution) -> Result<Self> {
        Self::new(Vec::new(), vec![sigma])
    }

    /// Parses `PREFIX|PERIOD`, each character naming a registered substitution.
    /// Whitespace is ignored; either part may be empty but not both.
    pub fn parse(text: &str, registry: &BTreeMap<String, Substitution>) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, tail) = compact
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("directive {text:?} lacks '|'")))?;
        if tail.contains('|') {
            return Err(Error::Parse(format!("directive {text:?} has more than one '|'")));
        }
        let lookup = |part: &str| -> Result<Vec<Substitution>> {
            part.chars()
                .map(|c| {
                    let name = c.to_string();
                    registry.get(&name).cloned().ok_or(Error::UnknownSubstitution(name))
                })
                .collect()
        };
        let mut d = Self::new(lookup(head)?, lookup(tail)?)?;
        d.names = Some((head.to_string(), tail.to_string()));
        Ok(d)
    }

    pub fn prefix(&self) -> &[Substitution] {
        &self.prefix
    }

    pub fn period(&self) -> &[Substitution] {
        &self.period
    }

    pub fn is_eventually_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Names of the prefix and period entries, when built by [`Self::parse`].
    pub fn names(&self) -> Option<(&str, &str)> {
        self.names.as_ref().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// `σ_k`, or `None` past the end of a finite directive.
    pub fn get(&self, k: usize) -> Option<&Substitution> {
        if k < self.prefix.len() {
            Some(&self.prefix[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(k - self.prefix.len()) % self.period.len()])
        }
    }

    /// Number of defined levels, `None` when infinite.
    pub fn defined_len(&self) -> Option<usize> {
        self.period.is_empty().then_some(self.prefix.len())
    }

    /// `A_k`.
    pub fn alphabet(&self, k: usize) -> Result<&Arc<Alphabet>> {
        match self.get(k) {
            Some(s) => Ok(s.codomain()),
            None if k == self.prefix.len() => Ok(self.prefix[k - 1].domain()),
            None => Err(Error::InvalidDepth(format!("level {k} beyond the finite directive"))),
        }
    }

    fn check_defined(&self, n: usize) -> Result<()> {
        match self.defined_len() {
            Some(len) if n > len => {
                Err(Error::InvalidDepth(format!("depth {n} beyond a directive of length {len}")))
            }
            _ => Ok(()),
        }
    }

    /// `σ_{[k,n)} = σ_k ∘ ⋯ ∘ σ_{n−1}`, the identity on `A_k` when `n = k`.
    pub fn tower(&self, k: usize, n: usize) -> Result<Substitution> {
        if n < k {
            return Err(Error::InvalidDepth(format!("n = {n} < k = {k}")));
        }
        self.check_defined(n)?;
        let mut acc = Substitution::identity(self.alphabet(k)?);
        for j in k..n {
            acc = acc.compose(self.get(j).expect("defined"))?;
        }
        Ok(acc)
    }

    /// Lengths `|σ_{[k,n)}(b)|` for `b ∈ A_n`, saturating at `u128::MAX`.
    pub fn image_lengths(&self, k: usize, n: usize) -> Result<Vec<u128>> {
        if n < k {
            return Err(Error::InvalidDepth(format!("n = {n} < k = {k}")));
        }
        self.check_defined(n)?;
        let mut lengths = vec![1u128; self.alphabet(k)?.len()];
        for j in k..n {
            let s = self.get(j).expect("defined");
            lengths = s
                .images()
                .iter()
                .map(|img| img.letters().iter().fold(0u128, |acc, &c| acc.saturating_add(lengths[c])))
                .collect();
        }
        Ok(lengths)
    }

    /// `⟨σ_{[k,n)}⟩`.
    pub fn min_image_length(&self, k: usize, n: usize) -> Result<u128> {
        Ok(self.image_lengths(k, n)?.into_iter().min().unwrap_or(0))
    }

    /// First level `≥ max(k, prefix length)` aligned with the start of a period.
    fn aligned_level(&self, k: usize) -> usize {
        let p = self.prefix.len();
        let q = self.period.len();
        if k <= p {
            p
        } else {
            p + (k - p).div_ceil(q) * q
        }
    }
}

impl fmt::Display for DirectiveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.names {
            Some((head, tail)) => write!(f, "{head}|{tail}"),
            None => {
                let list = |subs: &[Substitution]| subs.iter().map(|s| format!("[{s}]")).collect::<String>();
                write!(f, "{}|{}", list(&self.prefix), list(&self.period))
            }
        }
    }
}

/// How a growth verdict was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthEvidence {
    /// Decided from the structure of the periodic tail; `power` is the
    /// exponent `s` for which the support of `M_τ^s` is idempotent.
    Exact { power: usize },
    /// Compared `⟨σ_{[k,h)}⟩` against `⟨σ_{[k,⌊h/2⌋)}⟩` at horizon `h`.
    Empirical { horizon: usize, min_length: u128, half_min_length: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCertificate {
    pub growing: bool,
    pub evidence: GrowthEvidence,
}

impl GrowthCertificate {
    pub fn is_exact(&self) -> bool {
        matches!(self.evidence, GrowthEvidence::Exact { .. })
    }
}

/// Whether `⟨σ_{[0,n)}⟩ → ∞`. Exact for eventually periodic directives;
/// otherwise an empirical verdict at the given horizon.
pub fn is_everywhere_growing(d: &DirectiveSequence, horizon: usize) -> GrowthCertificate {
    level_growth(d, 0, horizon)
}

/// Whether `⟨σ_{[k,n)}⟩ → ∞` as `n → ∞`.
pub fn level_growth(d: &DirectiveSequence, k: usize, horizon: usize) -> GrowthCertificate {
    if let Some(power) = exact_growth_power(d) {
        return GrowthCertificate { growing: exact_growth(d, k, power), evidence: GrowthEvidence::Exact { power } };
    }
    let h = horizon.min(d.defined_len().unwrap_or(usize::MAX)).max(k);
    let min_length = d.min_image_length(k, h).unwrap_or(0);
    let half_min_length = d.min_image_length(k, k + (h - k) / 2).unwrap_or(0);
    GrowthCertificate {
        growing: min_length > half_min_length,
        evidence: GrowthEvidence::Empirical { horizon: h, min_length, half_min_length },
    }
}

type SatMatrix = Vec<Vec<u8>>;

fn sat_mul(a: &SatMatrix, b: &SatMatrix) -> SatMatrix {
    let n = a.len();
    let mut out = vec![vec![0u8; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                let v = out[i][j] as u16 + a[i][k] as u16 * b[k][j] as u16;
                out[i][j] = v.min(2) as u8;
            }
        }
    }
    out
}

fn support(m: &SatMatrix) -> Vec<Vec<bool>> {
    m.iter().map(|row| row.iter().map(|&x| x > 0).collect()).collect()
}

/// Saturated (`0, 1, ≥2`) incidence matrix of the period composition.
fn period_matrix(d: &DirectiveSequence) -> Option<SatMatrix> {
    if d.period.is_empty() {
        return None;
    }
    let start = d.prefix.len();
    let tau = d.tower(start, start + d.period.len()).ok()?;
    let inc = tau.incidence_matrix();
    Some(inc.entries().iter().map(|row| row.iter().map(|&x| x.min(2) as u8).collect()).collect())
}

fn exact_growth_power(d: &DirectiveSequence) -> Option<usize> {
    let t = period_matrix(d)?;
    let mut power = t.clone();
    for s in 1..=4096 {
        if support(&sat_mul(&power, &power)) == support(&power) {
            return Some(s);
        }
        power = sat_mul(&power, &t);
    }
    None
}

fn exact_growth(d: &DirectiveSequence, k: usize, power: usize) -> bool {
    let t = period_matrix(d).expect("periodic");
    let mut q = t.clone();
    for _ in 1..power {
        q = sat_mul(&q, &t);
    }
    let n = q.len();
    let start = d.aligned_level(k);
    let weights = d.image_lengths(k, start).expect("periodic");
    let reach = |v: usize, x: usize| v == x || q[x][v] > 0;
    let looped: Vec<usize> = (0..n).filter(|&x| q[x][x] > 0).collect();
    let unbounded = |u: usize, v: usize| {
        if q[u][v] == 0 {
            return false;
        }
        let heavy = (0..n).any(|x| q[x][x] >= 2 && reach(v, x) && reach(x, u));
        heavy
            || looped.iter().any(|&x| {
                looped.iter().any(|&y| x != y && reach(v, x) && reach(x, y) && reach(y, u))
            })
    };
    let span = power * d.period.len();
    for r in 0..span {
        let rho = d.tower(start, start + r).expect("periodic");
        for img in rho.images() {
            let grows = img
                .letters()
                .iter()
                .any(|&v| (0..n).any(|u| weights[u] > 0 && unbounded(u, v)));
            if !grows {
                return false;
            }
        }
    }
    true
}

/// How a sample was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Factors of an explicit word list.
    Closure,
    /// Certified fixed point of the periodic tail.
    Exact,
    /// Intersection over a window of depths.
    Window,
    /// Factors of the image of another sample.
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleMeta {
    pub mode: SampleMode,
    /// Deepest level used: `D` in window mode, the level reached by the
    /// fixed-point iteration in exact mode.
    pub depth: Option<usize>,
    pub window: Option<usize>,
    pub exact: bool,
    pub saturated: bool,
}

/// Parameters of [`sample_level_language`]. With neither `depth` nor
/// `window` set, exact mode is used when it applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleOptions {
    pub depth: Option<usize>,
    pub window: Option<usize>,
    /// Maximum total number of letters materialized.
    pub budget: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { depth: None, window: None, budget: DEFAULT_BUDGET }
    }
}

/// A finite factorial set of words of length at most `max_length`.
///
/// Words are stored as references into a family of texts: `classes[ℓ − 1]`
/// lists one occurrence of each distinct word of length `ℓ`, in
/// lexicographic order. The empty word is always a member.
#[derive(Clone)]
pub struct LanguageSample {
    alphabet: Arc<Alphabet>,
    level: Option<usize>,
    max_length: usize,
    meta: SampleMeta,
    texts: Vec<Vec<Letter>>,
    classes: Vec<Vec<FactorRef>>,
}

impl fmt::Debug for LanguageSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguageSample")
            .field("alphabet", &self.alphabet.to_string())
            .field("level", &self.level)
            .field("max_length", &self.max_length)
            .field("meta", &self.meta)
            .field("words", &self.total_words())
            .finish()
    }
}

fn build_classes(texts: &[Vec<Letter>], cap: usize, tags: &[u64], keep: impl Fn(u64) -> bool) -> Vec<Vec<FactorRef>> {
    let index = FactorIndex::build(texts);
    let mut classes = vec![Vec::new(); cap];
    index.for_each_class(cap, tags, |len, r, mask| {
        if keep(mask) {
            classes[len - 1].push(r);
        }
    });
    classes
}

/// All factors of length at most `cap` of the given words.
pub fn factorial_closure(alphabet: &Arc<Alphabet>, words: &[Word], cap: usize) -> Result<LanguageSample> {
    for w in words {
        check_same(w.alphabet(), alphabet, "sample word")?;
    }
    let texts: Vec<Vec<Letter>> = words.iter().map(|w| w.letters().to_vec()).collect();
    let meta = SampleMeta { mode: SampleMode::Closure, depth: None, window: None, exact: true, saturated: true };
    Ok(LanguageSample::from_texts(alphabet, None, cap, meta, texts))
}

impl LanguageSample {
    fn from_texts(
        alphabet: &Arc<Alphabet>,
        level: Option<usize>,
        cap: usize,
        meta: SampleMeta,
        texts: Vec<Vec<Letter>>,
    ) -> Self {
        let tags = vec![0u64; texts.len()];
        let classes = build_classes(&texts, cap, &tags, |_| true);
        LanguageSample { alphabet: Arc::clone(alphabet), level, max_length: cap, meta, texts, classes }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Level `k` for samples of a level language.
    pub fn level(&self) -> Option<usize> {
        self.level
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub(crate) fn texts(&self) -> &[Vec<Letter>] {
        &self.texts
    }

    pub(crate) fn classes(&self, len: usize) -> &[FactorRef] {
        if len == 0 || len > self.max_length {
            &[]
        } else {
            &self.classes[len - 1]
        }
    }

    pub(crate) fn slice(&self, r: FactorRef, len: usize) -> &[Letter] {
        &self.texts[r.text as usize][r.start as usize..r.start as usize + len]
    }

    /// Length of the longest member.
    pub fn longest(&self) -> usize {
        self.classes.iter().rposition(|c| !c.is_empty()).map_or(0, |i| i + 1)
    }

    /// Number of members of length `len` (1 for the empty word).
    pub fn count(&self, len: usize) -> usize {
        if len == 0 {
            1
        } else {
            self.classes(len).len()
        }
    }

    pub fn total_words(&self) -> usize {
        1 + self.classes.iter().map(Vec::len).sum::<usize>()
    }

    /// Members of length `len`, in lexicographic order.
    pub fn words_of_length(&self, len: usize) -> Box<dyn Iterator<Item = &[Letter]> + '_> {
        if len == 0 {
            Box::new(std::iter::once(&[][..]))
        } else {
            Box::new(self.classes(len).iter().map(move |&r| self.slice(r, len)))
        }
    }

    /// All members as words, ordered by length and then lexicographically.
    pub fn words(&self) -> Vec<Word> {
        (0..=self.max_length)
            .flat_map(|len| self.words_of_length(len).map(|w| Word::from_raw(&self.alphabet, w.to_vec())))
            .collect()
    }

    pub(crate) fn contains_letters(&self, w: &[Letter]) -> bool {
        if w.is_empty() {
            return true;
        }
        let len = w.len();
        self.classes(len).binary_search_by(|&r| self.slice(r, len).cmp(w)).is_ok()
    }

    pub fn contains(&self, w: &Word) -> bool {
        same_alphabet(w.alphabet(), &self.alphabet) && self.contains_letters(w.letters())
    }

    /// Exhaustive check that the prefix and suffix of every member obtained by
    /// dropping one letter are members.
    pub fn is_factorial(&self) -> bool {
        (1..=self.max_length).all(|len| {
            self.words_of_length(len)
                .all(|w| self.contains_letters(&w[..len - 1]) && self.contains_letters(&w[1..]))
        })
    }

    /// Members that are not a proper factor of another member.
    pub fn maximal_words(&self) -> Vec<&[Letter]> {
        let mut out = Vec::new();
        for len in 0..=self.max_length {
            let covered: HashSet<&[Letter]> = self
                .words_of_length(len + 1)
                .flat_map(|w| [&w[..len], &w[1..]])
                .collect();
            out.extend(self.words_of_length(len).filter(|w| !covered.contains(w)));
        }
        out
    }

    /// Same members at every length.
    pub fn same_words(&self, other: &LanguageSample) -> bool {
        same_alphabet(&self.alphabet, &other.alphabet)
            && self.max_length == other.max_length
            && (1..=self.max_length).all(|len| self.words_of_length(len).eq(other.words_of_length(len)))
    }

    /// `F(σ(L))` truncated at `cap`, computed from the images of the maximal
    /// members. For non-erasing `σ` this is exact as long as `cap` does not
    /// exceed this sample's cap.
    pub fn image(&self, sigma: &Substitution, cap: usize) -> Result<LanguageSample> {
        check_same(sigma.domain(), &self.alphabet, "image sample")?;
        let texts = self.maximal_words().into_iter().map(|w| sigma.apply_letters(w)).collect();
        let meta = SampleMeta {
            mode: SampleMode::Image,
            depth: None,
            window: None,
            exact: self.meta.exact,
            saturated: self.meta.saturated,
        };
        Ok(LanguageSample::from_texts(sigma.codomain(), None, cap, meta, texts))
    }
}

/// Samples `L_σ^{(k)}` truncated at length `cap`.
///
/// In exact mode the periodic tail `τ` is iterated from a letter `a` with
/// `a ∈ τ(a)` from which every letter is reachable, until the factors of
/// length `≤ cap` of `τ^i(a)` stop changing. Otherwise the sample is the
/// intersection of `F_{≤cap}(σ_{[k,n)}(A_n))` over `n ∈ [D, D+W]`, and is
/// marked saturated when shifting the window by one period changes nothing.
pub fn sample_level_language(
    d: &DirectiveSequence,
    k: usize,
    cap: usize,
    options: &SampleOptions,
) -> Result<LanguageSample> {
    if options.depth.is_none() && options.window.is_none() {
        if let Some(sample) = exact_sample(d, k, cap, options.budget)? {
            return Ok(sample);
        }
    }
    window_sample(d, k, cap, options)
}

fn exact_sample(d: &DirectiveSequence, k: usize, cap: usize, budget: usize) -> Result<Option<LanguageSample>> {
    if d.period.is_empty() {
        return Ok(None);
    }
    let q = d.period.len();
    let start = d.aligned_level(k);
    let pi = d.tower(k, start)?;
    let tau = d.tower(start, start + q)?;
    if !pi.is_non_erasing() || !tau.is_non_erasing() {
        return Ok(None);
    }
    // Every letter of each intermediate level must occur in the images of the
    // rest of the period, so that the other residues add no words.
    for r in 1..q {
        let rest = d.tower(start + r, start + q)?;
        let mut seen = vec![false; rest.codomain().len()];
        for img in rest.images() {
            for &b in img.letters() {
                seen[b] = true;
            }
        }
        if seen.contains(&false) {
            return Ok(None);
        }
    }
    let alphabet = tau.domain();
    let reach = reachability(&tau);
    let Some(seed) = alphabet
        .letters()
        .find(|&a| tau.image(a).letters().contains(&a) && reach[a].iter().all(|&r| r))
    else {
        return Ok(None);
    };

    let mut x = vec![seed];
    let mut count = FactorIndex::build(std::slice::from_ref(&x)).count_distinct(cap);
    let mut iterations = 0;
    loop {
        let next = tau.apply_letters(&x);
        if next.len() > budget {
            return Err(Error::ResourceLimit(format!(
                "fixed-point iteration needs more than {budget} letters"
            )));
        }
        let next_count = FactorIndex::build(std::slice::from_ref(&next)).count_distinct(cap);
        iterations += 1;
        if next_count == count {
            break;
        }
        x = next;
        count = next_count;
    }
    let text = pi.apply_letters(&x);
    if text.len() > budget {
        return Err(Error::ResourceLimit(format!("sample text exceeds {budget} letters")));
    }
    let meta = SampleMeta {
        mode: SampleMode::Exact,
        depth: Some(start + iterations * q),
        window: None,
        exact: true,
        saturated: true,
    };
    Ok(Some(LanguageSample::from_texts(pi.codomain(), Some(k), cap, meta, vec![text])))
}

/// `reach[a][b]`: `b` occurs in `τ^j(a)` for some `j ≥ 0`.
fn reachability(tau: &Substitution) -> Vec<Vec<bool>> {
    let n = tau.domain().len();
    let mut reach = vec![vec![false; n]; n];
    for a in 0..n {
        let mut stack = vec![a];
        reach[a][a] = true;
        while let Some(x) = stack.pop() {
            for &y in tau.image(x).letters() {
                if !reach[a][y] {
                    reach[a][y] = true;
                    stack.push(y);
                }
            }
        }
    }
    reach
}

/// Default window `max(3, period length)`.
pub fn default_window(d: &DirectiveSequence) -> usize {
    d.period.len().max(3)
}

/// Default depth: the least `D > k` with `⟨σ_{[k,D)}⟩ ≥ cap` when the
/// directive grows at level `k`, else `k + 12`.
pub fn default_depth(d: &DirectiveSequence, k: usize, cap: usize, budget: usize) -> Result<usize> {
    let fallback = k + 12;
    if !level_growth(d, k, fallback + 32).growing {
        return Ok(fallback);
    }
    let limit = d.defined_len().unwrap_or(usize::MAX);
    let mut depth = k + 1;
    loop {
        if depth > limit {
            return Err(Error::InvalidDepth(format!("no depth ≤ {limit} reaches image length {cap}")));
        }
        let lengths = d.image_lengths(k, depth)?;
        if lengths.iter().copied().min().unwrap_or(0) >= cap as u128 {
            return Ok(depth);
        }
        if lengths.iter().copied().max().unwrap_or(0) > budget as u128 {
            return Err(Error::ResourceLimit(format!(
                "images exceed {budget} letters before reaching length {cap}"
            )));
        }
        depth += 1;
    }
}

fn window_sample(d: &DirectiveSequence, k: usize, cap: usize, options: &SampleOptions) -> Result<LanguageSample> {
    let window = options.window.unwrap_or_else(|| default_window(d));
    if window == 0 {
        return Err(Error::InvalidDepth("window must be at least 1".into()));
    }
    let depth = match options.depth {
        Some(depth) => depth,
        None => default_depth(d, k, cap, options.budget)?,
    };
    if depth <= k {
        return Err(Error::InvalidDepth(format!("depth {depth} must exceed level {k}")));
    }
    let shift = d.period.len().max(1);
    let mut last = depth + window;
    d.check_defined(last)?;
    let saturation_possible = d.check_defined(last + shift).is_ok();
    if saturation_possible {
        last += shift;
    }
    if last - depth >= 64 {
        return Err(Error::InvalidDepth(format!("window of {} depths exceeds 63", last - depth + 1)));
    }
    let mut total: u128 = 0;
    for n in depth..=last {
        total = total.saturating_add(d.image_lengths(k, n)?.iter().sum::<u128>());
    }
    if total > options.budget as u128 {
        return Err(Error::ResourceLimit(format!(
            "window needs {total} letters, budget is {}",
            options.budget
        )));
    }
    let mut texts = Vec::new();
    let mut tags = Vec::new();
    for n in depth..=last {
        let sigma = d.tower(k, n)?;
        for img in sigma.images() {
            texts.push(img.letters().to_vec());
            tags.push(1u64 << (n - depth));
        }
    }
    let bits = |from: usize, to: usize| (from..=to).fold(0u64, |m, i| m | (1 << i));
    let primary = bits(0, window);
    let shifted = bits(shift, window + shift);
    let index = FactorIndex::build(&texts);
    let mut classes = vec![Vec::new(); cap];
    let mut saturated = saturation_possible;
    index.for_each_class(cap, &tags, |len, r, mask| {
        let inside = mask & primary == primary;
        if saturation_possible && inside != (mask & shifted == shifted) {
            saturated = false;
        }
        if inside {
            classes[len - 1].push(r);
        }
    });
    let meta = SampleMeta { mode: SampleMode::Window, depth: Some(depth), window: Some(window), exact: false, saturated };
    Ok(LanguageSample { alphabet: Arc::clone(d.alphabet(k)?), level: Some(k), max_length: cap, meta, texts, classes })
}
