//! The substitutions `L`, `M`, `R` on `{0,1}`, the classification of their
//! directive sequences, and the Thue–Morse imbalance witnesses.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::language::{DirectiveSequence, LanguageSample};
use crate::linalg::{rational, RationalMatrix};
use crate::substitution::{all_blocks, induced_block_substitution, AnchorSide, BlockSubstitution, Substitution};
use crate::words::{check_same, count_in, find_in, Alphabet, OccurrenceVector, Word};

/// Eigenvectors of the incidence matrix of `M₂` for `2, −1, 0, 1`, in block
/// order `(00, 01, 10, 11)`.
pub const V2: [i64; 4] = [1, 2, 2, 1];
pub const V_MINUS1: [i64; 4] = [1, -1, -1, 1];
pub const V0: [i64; 4] = [1, 0, 0, -1];
pub const V1: [i64; 4] = [1, -1, 1, -1];

/// `(eigenvalue, eigenvector)` pairs of `M_{M₂}`.
pub const EIGENPAIRS: [(i64, [i64; 4]); 4] = [(2, V2), (-1, V_MINUS1), (0, V0), (1, V1)];

/// Incidence matrix of `M₂`, rows and columns in block order.
pub const M2_MATRIX: [[i64; 4]; 4] = [[0, 0, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 0, 0]];

/// Images of `M₂` in block order.
pub const M2_TABLE: [&str; 4] = ["(01)(10)", "(01)(11)", "(10)(00)", "(10)(01)"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tms {
    L,
    M,
    R,
}

impl Tms {
    pub const ALL: [Tms; 3] = [Tms::L, Tms::M, Tms::R];

    pub fn name(self) -> char {
        match self {
            Tms::L => 'L',
            Tms::M => 'M',
            Tms::R => 'R',
        }
    }

    pub fn from_name(name: &str) -> Result<Tms> {
        match name {
            "L" => Ok(Tms::L),
            "M" => Ok(Tms::M),
            "R" => Ok(Tms::R),
            other => Err(Error::UnknownSubstitution(other.to_string())),
        }
    }

    pub fn images(self) -> [&'static str; 2] {
        match self {
            Tms::L => ["0", "10"],
            Tms::M => ["01", "10"],
            Tms::R => ["01", "1"],
        }
    }

    pub fn substitution(self) -> Substitution {
        let bin = Alphabet::binary();
        Substitution::from_strs(&bin, &bin, &self.images()).expect("binary images")
    }
}

/// `L`, `M` or `R` by name.
pub fn builtin(name: &str) -> Result<Substitution> {
    Tms::from_name(name).map(Tms::substitution)
}

/// Name → substitution map holding `L`, `M` and `R`.
pub fn registry() -> BTreeMap<String, Substitution> {
    Tms::ALL.iter().map(|t| (t.name().to_string(), t.substitution())).collect()
}

/// `σ_0 ∘ ⋯ ∘ σ_{k−1}` for a word over `{L, M, R}`.
pub fn compose_word(word: &[Tms]) -> Substitution {
    let bin = Alphabet::binary();
    let subs: Vec<Substitution> = word.iter().map(|t| t.substitution()).collect();
    Substitution::compose_all(&bin, &subs).expect("binary compositions")
}

/// An eventually periodic sequence over `{L, M, R}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TmsDirective {
    pub prefix: Vec<Tms>,
    pub period: Vec<Tms>,
}

impl TmsDirective {
    pub fn new(prefix: Vec<Tms>, period: Vec<Tms>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InconsistentDirective("the period must be non-empty".into()));
        }
        Ok(TmsDirective { prefix, period })
    }

    /// Parses `PREFIX|PERIOD` over the names `L`, `M`, `R`.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, tail) = compact
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("directive {text:?} lacks '|'")))?;
        let names = |part: &str| part.chars().map(|c| Tms::from_name(&c.to_string())).collect::<Result<Vec<_>>>();
        if tail.contains('|') {
            return Err(Error::Parse(format!("directive {text:?} has more than one '|'")));
        }
        Self::new(names(head)?, names(tail)?)
    }

    pub fn to_directive(&self) -> DirectiveSequence {
        DirectiveSequence::parse(&self.to_string(), &registry()).expect("registered names")
    }
}

impl fmt::Display for TmsDirective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: &[Tms]| v.iter().map(|t| t.name()).collect::<String>();
        write!(f, "{}|{}", names(&self.prefix), names(&self.period))
    }
}

/// A sequence over `{L, M, R}` is primitive unless it ends in `L^∞` or `R^∞`.
pub fn is_primitive(d: &TmsDirective) -> bool {
    !(d.period.iter().all(|&t| t == Tms::L) || d.period.iter().all(|&t| t == Tms::R))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    FactorBalanced,
    NotFactorBalanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    /// `σ_k ≠ M` for infinitely many `k`.
    NonMInfinitelyOften,
    /// The sequence ends in `M^∞`.
    TailAllM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Classification {
    pub verdict: Verdict,
    pub reason: Reason,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FactorBalanced => "FactorBalanced",
            Verdict::NotFactorBalanced => "NotFactorBalanced",
        })
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::NonMInfinitelyOften => "the period contains L or R, so sigma_k != M for infinitely many k",
            Reason::TailAllM => "the period consists of M only, so the sequence ends in M^infinity",
        })
    }
}

/// The language is factor-balanced exactly when the tail is not `M^∞`.
pub fn classify(d: &TmsDirective) -> Classification {
    if d.period.iter().all(|&t| t == Tms::M) {
        Classification { verdict: Verdict::NotFactorBalanced, reason: Reason::TailAllM }
    } else {
        Classification { verdict: Verdict::FactorBalanced, reason: Reason::NonMInfinitelyOften }
    }
}

/// The equal-length Thue–Morse factors `w_n`, `w′_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub index: usize,
    pub w: Word,
    pub w_prime: Word,
}

/// `(4ⁿ + 2)/3`.
pub fn witness_length(n: usize) -> u128 {
    (4u128.pow(n as u32) + 2) / 3
}

fn word(s: &str) -> Word {
    Word::parse(&Alphabet::binary(), s).expect("binary literal")
}

fn strip(image: Word, head: &str, tail: &str, what: &str) -> Result<Word> {
    let (h, t) = (word(head), word(tail));
    let letters = image.letters();
    if letters.len() < h.len() + t.len() || !letters.starts_with(h.letters()) || !letters.ends_with(t.letters()) {
        return Err(Error::Consistency(format!("{what}: image does not have the borders {head}…{tail}")));
    }
    Ok(image.factor(h.len()..letters.len() - t.len()))
}

/// Pairs `1..=n` of the recursion `w₁ = 00`, `w′₁ = 01`,
/// `M²(w_{2n−1}) = 0 w_{2n} 0`, `M²(w_{2n}) = 1 w_{2n+1} 1`,
/// `M²(w′_{2n−1}) = w′_{2n} 01`, `M²(w′_{2n}) = w′_{2n+1} 10`.
pub fn witness_pairs(n: usize) -> Result<Vec<WitnessPair>> {
    if n == 0 {
        return Err(Error::OutOfRange { requested: 0, len: 1 });
    }
    let m = Tms::M.substitution();
    let m2 = m.compose(&m)?;
    let mut out = vec![WitnessPair { index: 1, w: word("00"), w_prime: word("01") }];
    for index in 2..=n {
        let prev = out.last().expect("non-empty");
        let (border, border_prime) = if index % 2 == 0 { (("0", "0"), ("", "01")) } else { (("1", "1"), ("", "10")) };
        let w = strip(m2.apply(&prev.w)?, border.0, border.1, "w")?;
        let w_prime = strip(m2.apply(&prev.w_prime)?, border_prime.0, border_prime.1, "w'")?;
        let expected = witness_length(index);
        if w.len() as u128 != expected || w_prime.len() as u128 != expected {
            return Err(Error::Consistency(format!("witness {index} has the wrong length")));
        }
        out.push(WitnessPair { index, w, w_prime });
    }
    Ok(out)
}

pub fn witness_pair(n: usize) -> Result<WitnessPair> {
    Ok(witness_pairs(n)?.pop().expect("non-empty"))
}

/// The word `b` with `ℓ₂(w_i) = M_{M₂}² ℓ₂(w_{i−1}) + ℓ₂(b)`, for `i ≥ 2`
/// and the primed sequence when `primed` is set.
///
/// For `w′` with odd `i` this is `01`: `M²(w′_{i−1}) = w′_i 10` and the
/// 2-coding recursion `M₂²((w′_{i−1})^{(2)})(01) = (w′_i)^{(2)}` adds one `01`.
pub fn ell2_border(index: usize, primed: bool) -> &'static str {
    match (index % 2 == 0, primed) {
        (true, false) => "11",
        (false, false) => "00",
        (true, true) => "10",
        (false, true) => "01",
    }
}

/// `ℓ₂(w) = (|w|₀₀, |w|₀₁, |w|₁₀, |w|₁₁)`.
pub fn abelianization2(w: &Word) -> Result<OccurrenceVector> {
    check_same(w.alphabet(), &Alphabet::binary(), "abelianization")?;
    Ok(OccurrenceVector::of(w, 2))
}

/// `ℓ₂(w)` as signed integers.
pub fn ell2(w: &Word) -> Result<[i64; 4]> {
    let counts = abelianization2(w)?;
    let c = counts.counts();
    Ok([c[0] as i64, c[1] as i64, c[2] as i64, c[3] as i64])
}

/// `σ̂` for `σ = M`, `n = m = 2`, `u = ε` on all four blocks.
pub fn m2() -> BlockSubstitution {
    let bin = Alphabet::binary();
    induced_block_substitution(&Tms::M.substitution(), 2, 2, &Word::empty(&bin), AnchorSide::Prefix, &all_blocks(&bin, 2))
        .expect("M satisfies the block hypotheses")
}

/// `M_{M₂}` as a labeled rational matrix.
pub fn m2_matrix() -> RationalMatrix {
    let labels: Vec<String> = ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<i64>> = M2_MATRIX.iter().map(|r| r.to_vec()).collect();
    RationalMatrix::from_integers(&rows)
        .expect("4x4")
        .with_labels(labels.clone(), labels)
        .expect("labels")
}

/// `ℓ₂(w_{2n}) = ((4^{2n}−1)/18) v₂ + (2n/3) v₋₁ − ½ v₀`.
pub fn closed_form_w(n: usize) -> Vec<BigRational> {
    closed_form(n, BigRational::new(BigInt::from(2 * n), BigInt::from(3)))
}

/// `ℓ₂(w′_{2n}) = ((4^{2n}−1)/18) v₂ − (2n/6) v₋₁ − ½ v₀`.
pub fn closed_form_w_prime(n: usize) -> Vec<BigRational> {
    closed_form(n, -BigRational::new(BigInt::from(2 * n), BigInt::from(6)))
}

fn closed_form(n: usize, c_minus1: BigRational) -> Vec<BigRational> {
    let growth = BigRational::new(BigInt::from(4).pow(2 * n as u32) - 1, BigInt::from(18));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (0..4)
        .map(|i| &growth * rational(V2[i]) + &c_minus1 * rational(V_MINUS1[i]) - &half * rational(V0[i]))
        .collect()
}

/// Least `k` with `w` a factor of `Mᵏ(0)`, and the first position there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub k: usize,
    pub position: usize,
}

/// Locates `w` in `Mᵏ(0)` for the least such `k ≤ max_k`.
pub fn thue_morse_certificate(w: &Word, max_k: usize) -> Result<Option<MembershipCertificate>> {
    check_same(w.alphabet(), &Alphabet::binary(), "certified word")?;
    let m = Tms::M.substitution();
    let mut text = vec![0];
    for k in 0..=max_k {
        if text.len() >= w.len() {
            if let Some(position) = find_in(&text, w.letters()) {
                return Ok(Some(MembershipCertificate { k, position }));
            }
        }
        if k < max_k {
            text = m.apply_letters(&text);
        }
    }
    Ok(None)
}

/// One point of the Thue–Morse imbalance curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthPoint {
    pub n: usize,
    /// `|w_{2n}| = (4^{2n}+2)/3`.
    pub length: usize,
    /// `|w_{2n}|₀₀ − |w′_{2n}|₀₀`.
    pub imbalance: i64,
    pub difference: [i64; 4],
}

/// For `n = 1..=n_max`, recounts `ℓ₂(w_{2n}) − ℓ₂(w′_{2n})` and checks that it is `n·v₋₁`.
pub fn tm_imbalance_growth(n_max: usize) -> Result<Vec<GrowthPoint>> {
    let pairs = witness_pairs(2 * n_max)?;
    let mut out = Vec::new();
    for n in 1..=n_max {
        let pair = &pairs[2 * n - 1];
        let (a, b) = (ell2(&pair.w)?, ell2(&pair.w_prime)?);
        let difference = [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]];
        let expected = V_MINUS1.map(|x| x * n as i64);
        if difference != expected {
            return Err(Error::Consistency(format!("ℓ₂ difference {difference:?} for n = {n}")));
        }
        out.push(GrowthPoint { n, length: pair.w.len(), imbalance: difference[0], difference });
    }
    Ok(out)
}

/// Outcome of checking `|σ(w)|_{σ(011)} = |w|_{011}` over a set of words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecReport {
    pub checked: usize,
    /// Words where the occurrence counts differ.
    pub violations: Vec<Word>,
    /// Words violating `0 ≤ |w|₁₁ − |w|₀₁₁ ≤ 1`.
    pub bound_violations: Vec<Word>,
}

impl RecReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.bound_violations.is_empty()
    }
}

/// Checks `|σ(w)|_{σ(011)} = |w|_{011}` and `0 ≤ |w|₁₁ − |w|₀₁₁ ≤ 1` for every
/// member of the sample.
pub fn check_rec_identity(sigma: &Substitution, sample: &LanguageSample) -> Result<RecReport> {
    check_same(sigma.domain(), sample.alphabet(), "sample")?;
    let pattern = word("011");
    let image = sigma.apply(&pattern)?;
    let mut report = RecReport::default();
    for len in 0..=sample.max_length() {
        for w in sample.words_of_length(len) {
            report.checked += 1;
            let lhs = count_in(&sigma.apply_letters(w), image.letters());
            let rhs = count_in(w, pattern.letters());
            let ones = count_in(w, &[1, 1]);
            if lhs != rhs {
                report.violations.push(Word::from_raw(sample.alphabet(), w.to_vec()));
            }
            if ones < rhs || ones - rhs > 1 {
                report.bound_violations.push(Word::from_raw(sample.alphabet(), w.to_vec()));
            }
        }
    }
    Ok(report)
}

/// For `σ ∈ {L, R}*`, the word `t` with `σ(01) = 01·t` and `σ(10) = 10·t`.
pub fn common_tail(word: &[Tms]) -> Result<Option<Word>> {
    if word.contains(&Tms::M) {
        return Err(Error::InconsistentDirective("common tails are defined for L/R words only".into()));
    }
    let sigma = compose_word(word);
    let a = sigma.apply(&self::word("01"))?;
    let b = sigma.apply(&self::word("10"))?;
    let (a, b) = (a.letters(), b.letters());
    let ok = a.len() == b.len() && a.starts_with(&[0, 1]) && b.starts_with(&[1, 0]) && a[2..] == b[2..];
    Ok(ok.then(|| Word::from_raw(&Alphabet::binary(), a[2..].to_vec())))
}

/// Binary alphabet shared by everything in this module.
pub fn binary() -> Arc<Alphabet> {
    Alphabet::binary()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(builtin("L").unwrap().to_string(), "0->0;1->10");
        assert_eq!(builtin("M").unwrap().to_string(), "0->01;1->10");
        assert_eq!(builtin("R").unwrap().to_string(), "0->01;1->1");
        assert!(matches!(builtin("Q"), Err(Error::UnknownSubstitution(_))));
    }

    #[test]
    fn primitivity_and_classes() {
        let p = |s: &str| TmsDirective::parse(s).unwrap();
        assert!(is_primitive(&p("|ML")));
        assert!(!is_primitive(&p("|L")));
        assert!(!is_primitive(&p("MM|RR")));
        assert!(is_primitive(&p("|M")));
        assert_eq!(classify(&p("|M")).verdict, Verdict::NotFactorBalanced);
        assert_eq!(classify(&p("|LM")).verdict, Verdict::FactorBalanced);
        assert_eq!(classify(&p("MMR|M")).verdict, Verdict::NotFactorBalanced);
        assert_eq!(classify(&p("|L")).reason, Reason::NonMInfinitelyOften);
        assert!(TmsDirective::parse("LM").is_err());
        assert!(TmsDirective::parse("L|").is_err());
        assert!(matches!(TmsDirective::parse("|Q"), Err(Error::UnknownSubstitution(_))));
        assert_eq!(p(" LMR | ML ").to_string(), "LMR|ML");
    }

    #[test]
    fn witnesses() {
        let pairs = witness_pairs(3).unwrap();
        assert_eq!((pairs[0].w.to_string(), pairs[0].w_prime.to_string()), ("00".into(), "01".into()));
        assert_eq!((pairs[1].w.to_string(), pairs[1].w_prime.to_string()), ("110011".into(), "011010".into()));
        assert_eq!(pairs[2].w.len(), 22);
        assert!(witness_pairs(0).is_err());
    }

    #[test]
    fn abelianizations() {
        assert_eq!(ell2(&word("00")).unwrap(), [1, 0, 0, 0]);
        assert_eq!(ell2(&word("110011")).unwrap(), [1, 1, 1, 2]);
        let three = Alphabet::new(["a", "b", "c"]).unwrap();
        assert!(abelianization2(&Word::parse(&three, "ab").unwrap()).is_err());
    }

    #[test]
    fn m2_fixture() {
        let table = m2();
        let images: Vec<String> = (0..4).map(|t| table.image(t).unwrap().to_string()).collect();
        assert_eq!(images, M2_TABLE);
        let inc = table.incidence_matrix();
        for (r, row) in M2_MATRIX.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                assert_eq!(inc.get(r, c) as i64, x);
            }
        }
    }

    #[test]
    fn ell2_recursions() {
        let square = m2_matrix().pow(2).unwrap();
        let pairs = witness_pairs(6).unwrap();
        for w in pairs.windows(2) {
            for primed in [false, true] {
                let (prev, next) = if primed { (&w[0].w_prime, &w[1].w_prime) } else { (&w[0].w, &w[1].w) };
                let pushed = square.mat_vec(&crate::linalg::rvec(&ell2(prev).unwrap())).unwrap();
                let border = crate::linalg::rvec(&ell2(&word(ell2_border(w[1].index, primed))).unwrap());
                let sum: Vec<BigRational> = pushed.iter().zip(&border).map(|(a, b)| a + b).collect();
                assert_eq!(sum, crate::linalg::rvec(&ell2(next).unwrap()), "index {} primed {primed}", w[1].index);
            }
        }
    }

    #[test]
    fn closed_forms_small() {
        assert_eq!(closed_form_w(1), crate::linalg::rvec(&[1, 1, 1, 2]));
        assert_eq!(closed_form_w_prime(1), crate::linalg::rvec(&[0, 2, 2, 1]));
    }

    #[test]
    fn growth_curve() {
        let points = tm_imbalance_growth(2).unwrap();
        assert_eq!((points[0].length, points[0].imbalance), (6, 1));
        assert_eq!((points[1].length, points[1].imbalance), (86, 2));
    }

    #[test]
    fn certificates() {
        let c = thue_morse_certificate(&word("110011"), 10).unwrap().unwrap();
        assert_eq!((c.k, c.position), (5, 21));
        assert_eq!(thue_morse_certificate(&word("111"), 10).unwrap(), None);
    }

    #[test]
    fn tails() {
        assert_eq!(common_tail(&[]).unwrap().unwrap().to_string(), "");
        for prefix in [vec![Tms::L], vec![Tms::R, Tms::L], vec![Tms::L, Tms::L, Tms::R]] {
            assert!(common_tail(&prefix).unwrap().is_some(), "{prefix:?}");
        }
    }
}
