//! Imbalance of samples, letter frequencies and the decomposition of image
//! factors as `x σ(y) z`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::language::{DirectiveSequence, LanguageSample};
use crate::linalg::RationalMatrix;
use crate::substitution::Substitution;
use crate::words::{check_same, Alphabet, Letter, Word};

/// Words `w`, `w′` of equal length with `|w|_v − |w′|_v` maximal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub w: Word,
    pub w_prime: Word,
    pub v: Word,
    pub count: u64,
    pub count_prime: u64,
}

impl Witness {
    pub fn difference(&self) -> u64 {
        self.count - self.count_prime
    }
}

/// Imbalance of a sample for one factor length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthBalance {
    pub factor_length: usize,
    /// Largest `||w|_v − |w′|_v|` over the sample.
    pub constant: u64,
    /// `None` when the constant is 0.
    pub witness: Option<Witness>,
    /// `curve[ℓ]` is the imbalance among the words of length `ℓ`, for `ℓ = 0..=cap`.
    pub curve: Vec<u64>,
}

/// Imbalance for factor lengths `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub length_cap: usize,
    pub lengths: Vec<LengthBalance>,
}

impl BalanceReport {
    pub fn get(&self, n: usize) -> Option<&LengthBalance> {
        self.lengths.iter().find(|l| l.factor_length == n)
    }

    pub fn letter_constant(&self) -> Option<u64> {
        self.get(1).map(|l| l.constant)
    }
}

/// Prefix occurrence counts of `v` in every text: `occ[t][i]` counts the
/// occurrences starting before position `i`.
fn occurrence_tables(texts: &[Vec<Letter>], v: &[Letter]) -> Vec<Vec<u32>> {
    texts
        .iter()
        .map(|text| {
            let mut table = Vec::with_capacity(text.len() + 1);
            let mut acc = 0u32;
            table.push(0);
            for i in 0..text.len() {
                if text[i..].starts_with(v) {
                    acc += 1;
                }
                table.push(acc);
            }
            table
        })
        .collect()
}

struct PatternScan {
    /// Per length: (max, first argmax, min, first argmin) as class indices.
    extremes: Vec<Option<(u64, usize, u64, usize)>>,
}

fn scan_pattern(sample: &LanguageSample, v: &[Letter], cap: usize) -> PatternScan {
    let tables = occurrence_tables(sample.texts(), v);
    let n = v.len();
    let mut extremes = vec![None; cap + 1];
    for (len, slot) in extremes.iter_mut().enumerate().skip(1) {
        let classes = sample.classes(len);
        if classes.is_empty() {
            continue;
        }
        let mut best: Option<(u64, usize, u64, usize)> = None;
        for (i, r) in classes.iter().enumerate() {
            let count = if len < n {
                0
            } else {
                let t = &tables[r.text as usize];
                let s = r.start as usize;
                (t[s + len - n + 1] - t[s]) as u64
            };
            best = Some(match best {
                None => (count, i, count, i),
                Some((hi, hi_at, lo, lo_at)) => {
                    let (hi, hi_at) = if count > hi { (count, i) } else { (hi, hi_at) };
                    let (lo, lo_at) = if count < lo { (count, i) } else { (lo, lo_at) };
                    (hi, hi_at, lo, lo_at)
                }
            });
        }
        *slot = best;
    }
    PatternScan { extremes }
}

/// Imbalance of `sample` with respect to the single factor `v`, over words of
/// length at most `cap`; returns the per-length curve and a witness.
pub fn pattern_imbalance(sample: &LanguageSample, v: &Word, cap: usize) -> Result<(Vec<u64>, Option<Witness>)> {
    check_same(v.alphabet(), sample.alphabet(), "factor")?;
    if v.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let cap = cap.min(sample.max_length());
    let scan = scan_pattern(sample, v.letters(), cap);
    let mut curve = vec![0u64; cap + 1];
    let mut best: Option<Witness> = None;
    for (len, e) in scan.extremes.iter().enumerate() {
        if let Some((hi, hi_at, lo, lo_at)) = *e {
            curve[len] = hi - lo;
            if hi > lo {
                let cand = make_witness(sample, len, hi_at, lo_at, v.letters(), hi, lo);
                best = pick(best, cand);
            }
        }
    }
    Ok((curve, best))
}

fn make_witness(
    sample: &LanguageSample,
    len: usize,
    hi_at: usize,
    lo_at: usize,
    v: &[Letter],
    hi: u64,
    lo: u64,
) -> Witness {
    let classes = sample.classes(len);
    let word = |i: usize| Word::from_raw(sample.alphabet(), sample.slice(classes[i], len).to_vec());
    Witness {
        w: word(hi_at),
        w_prime: word(lo_at),
        v: Word::from_raw(sample.alphabet(), v.to_vec()),
        count: hi,
        count_prime: lo,
    }
}

/// Larger difference wins; ties go to the lexicographically smaller `(w, w′, v)`.
fn pick(current: Option<Witness>, cand: Witness) -> Option<Witness> {
    match current {
        None => Some(cand),
        Some(cur) => {
            let order = cand.difference().cmp(&cur.difference()).then_with(|| {
                (cur.w.letters(), cur.w_prime.letters(), cur.v.letters())
                    .cmp(&(cand.w.letters(), cand.w_prime.letters(), cand.v.letters()))
            });
            Some(if order == Ordering::Greater { cand } else { cur })
        }
    }
}

/// `max ||w|_v − |w′|_v|` over `v` of length `n` and equal-length members of
/// length at most `length_cap`.
pub fn imbalance(sample: &LanguageSample, n: usize, length_cap: usize) -> Result<LengthBalance> {
    if n == 0 {
        return Err(Error::EmptyPattern);
    }
    let cap = length_cap.min(sample.max_length());
    let mut curve = vec![0u64; cap + 1];
    let mut best: Option<Witness> = None;
    let patterns: Vec<Vec<Letter>> = sample.words_of_length(n).map(<[Letter]>::to_vec).collect();
    for v in &patterns {
        let scan = scan_pattern(sample, v, cap);
        for (len, e) in scan.extremes.iter().enumerate() {
            if let Some((hi, hi_at, lo, lo_at)) = *e {
                curve[len] = curve[len].max(hi - lo);
                if hi > lo && best.as_ref().is_none_or(|b| hi - lo >= b.difference()) {
                    best = pick(best, make_witness(sample, len, hi_at, lo_at, v, hi, lo));
                }
            }
        }
    }
    let constant = best.as_ref().map_or(0, Witness::difference);
    Ok(LengthBalance { factor_length: n, constant, witness: best, curve })
}

pub fn balance_report(sample: &LanguageSample, n_max: usize, length_cap: usize) -> Result<BalanceReport> {
    let lengths = (1..=n_max).map(|n| imbalance(sample, n, length_cap)).collect::<Result<Vec<_>>>()?;
    Ok(BalanceReport { length_cap: length_cap.min(sample.max_length()), lengths })
}

/// Letter imbalance over the whole sample.
pub fn letter_constant(sample: &LanguageSample) -> u64 {
    imbalance(sample, 1, sample.max_length()).expect("n = 1").constant
}

/// Letter frequencies: non-negative rationals summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    alphabet: Arc<Alphabet>,
    values: Vec<BigRational>,
}

impl FrequencyVector {
    pub fn new(alphabet: &Arc<Alphabet>, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != alphabet.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} frequencies for {} letters",
                values.len(),
                alphabet.len()
            )));
        }
        if values.iter().any(Signed::is_negative) {
            return Err(Error::Consistency("negative frequency".into()));
        }
        if values.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::Consistency("frequencies do not sum to 1".into()));
        }
        Ok(FrequencyVector { alphabet: Arc::clone(alphabet), values })
    }

    /// Scales a non-negative, non-zero vector to sum 1.
    pub fn normalized(alphabet: &Arc<Alphabet>, values: Vec<BigRational>) -> Result<Self> {
        let total: BigRational = values.iter().sum();
        if total.is_zero() {
            return Err(Error::Consistency("zero vector cannot be normalized".into()));
        }
        Self::new(alphabet, values.into_iter().map(|v| v / &total).collect())
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, a: Letter) -> &BigRational {
        &self.values[a]
    }
}

/// Average letter frequencies of the longest members of the sample.
pub fn frequency_vector(sample: &LanguageSample) -> Result<FrequencyVector> {
    let len = sample.longest();
    if len == 0 {
        return Err(Error::EmptySample);
    }
    let mut counts = vec![0u64; sample.alphabet().len()];
    let mut words = 0u64;
    for w in sample.words_of_length(len) {
        words += 1;
        for &a in w {
            counts[a] += 1;
        }
    }
    let total = BigInt::from(words * len as u64);
    let values = counts.into_iter().map(|c| BigRational::new(BigInt::from(c), total.clone())).collect();
    FrequencyVector::new(sample.alphabet(), values)
}

/// `max ||w|_a − f_a|w||` over members `w` and letters `a`.
pub fn frequency_deviation(sample: &LanguageSample, f: &FrequencyVector) -> Result<BigRational> {
    check_same(f.alphabet(), sample.alphabet(), "frequency vector")?;
    let k = sample.alphabet().len();
    // Work with integers: f_a = num_a / den.
    let den = f.values.iter().fold(BigInt::one(), |acc, v| num_integer::lcm(acc, v.denom().clone()));
    let nums: Vec<BigInt> = f.values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    let small = den.to_i128().zip(nums.iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>());
    let prefix: Vec<Vec<Vec<u32>>> = sample
        .texts()
        .iter()
        .map(|text| {
            let mut rows = vec![vec![0u32; text.len() + 1]; k];
            for (i, &a) in text.iter().enumerate() {
                for (b, row) in rows.iter_mut().enumerate() {
                    row[i + 1] = row[i] + u32::from(a == b);
                }
            }
            rows
        })
        .collect();
    let mut best_small: i128 = 0;
    let mut best_big = BigInt::zero();
    for len in 1..=sample.max_length() {
        for r in sample.classes(len) {
            let table = &prefix[r.text as usize];
            let s = r.start as usize;
            for (a, row) in table.iter().enumerate() {
                let count = (row[s + len] - row[s]) as i128;
                match &small {
                    Some((d, ns)) => {
                        if let Some(dev) = count
                            .checked_mul(*d)
                            .and_then(|x| ns[a].checked_mul(len as i128).map(|y| (x - y).abs()))
                        {
                            best_small = best_small.max(dev);
                            continue;
                        }
                        let dev = (BigInt::from(count) * &den - &nums[a] * BigInt::from(len)).abs();
                        best_big = best_big.max(dev);
                    }
                    None => {
                        let dev = (BigInt::from(count) * &den - &nums[a] * BigInt::from(len)).abs();
                        best_big = best_big.max(dev);
                    }
                }
            }
        }
    }
    let best = best_big.max(BigInt::from(best_small));
    Ok(BigRational::new(best, den))
}

/// Perron–Frobenius frequencies of a substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronFrequency {
    pub frequency: FrequencyVector,
    /// Certified bounds on the dominant eigenvalue; equal when exact.
    pub eigenvalue_bounds: (BigRational, BigRational),
    /// `true` when the vector is the exact normalized eigenvector.
    pub exact: bool,
}

fn is_irreducible(m: &[Vec<u64>]) -> bool {
    let n = m.len();
    let reach_all = |transpose: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                let edge = if transpose { m[x][y] } else { m[y][x] };
                if edge > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    n > 0 && reach_all(false) && reach_all(true)
}

/// Normalized dominant eigenvector of the incidence matrix of an
/// endomorphism with irreducible incidence matrix.
///
/// Integer candidates in the column-sum range are tried first, which gives an
/// exact answer whenever the Perron root is an integer. Otherwise a rational
/// power iteration on `M + I` runs until the Collatz–Wielandt bounds are
/// within `2^-40` of each other.
pub fn perron_frequency(sigma: &Substitution) -> Result<PerronFrequency> {
    if !sigma.is_endomorphism() {
        return Err(Error::PerronUnavailable("not an endomorphism".into()));
    }
    let inc = sigma.incidence_matrix();
    if !is_irreducible(inc.entries()) {
        return Err(Error::PerronUnavailable("incidence matrix is reducible".into()));
    }
    let m = inc.to_rational();
    let n = m.rows();
    let sums = inc.column_sums();
    let (lo, hi) = (sums.iter().copied().min().unwrap_or(0), sums.iter().copied().max().unwrap_or(0));
    for lambda in (lo..=hi).rev() {
        let shifted = m.sub(&RationalMatrix::identity(n).scale(&BigRational::from_integer(lambda.into())))?;
        let basis = shifted.nullspace();
        if basis.len() != 1 {
            continue;
        }
        let v = &basis[0];
        let sign = if v.iter().all(|x| x.is_positive()) {
            BigRational::one()
        } else if v.iter().all(|x| x.is_negative()) {
            -BigRational::one()
        } else {
            continue;
        };
        let values: Vec<BigRational> = v.iter().map(|x| x * &sign).collect();
        let value = BigRational::from_integer(lambda.into());
        return Ok(PerronFrequency {
            frequency: FrequencyVector::normalized(sigma.domain(), values)?,
            eigenvalue_bounds: (value.clone(), value),
            exact: true,
        });
    }
    power_iteration(sigma, &m)
}

fn power_iteration(sigma: &Substitution, m: &RationalMatrix) -> Result<PerronFrequency> {
    let n = m.rows();
    let scale = BigInt::one() << 48usize;
    let tolerance = BigRational::new(BigInt::one(), BigInt::one() << 40usize);
    let round = |v: &BigRational| -> BigRational {
        let scaled = (v * BigRational::from_integer(scale.clone())).round();
        BigRational::new(scaled.to_integer().max(BigInt::one()), scale.clone())
    };
    let mut x: Vec<BigRational> = vec![BigRational::new(BigInt::one(), BigInt::from(n)); n];
    for _ in 0..10_000 {
        let mx = m.mat_vec(&x)?;
        let ratios: Vec<BigRational> = mx.iter().zip(&x).map(|(a, b)| a / b).collect();
        let lo = ratios.iter().min().cloned().expect("non-empty");
        let hi = ratios.iter().max().cloned().expect("non-empty");
        if &hi - &lo < tolerance {
            let next: Vec<BigRational> = mx.iter().zip(&x).map(|(a, b)| a + b).collect();
            let total: BigRational = next.iter().sum();
            let values: Vec<BigRational> = next.iter().map(|v| round(&(v / &total))).collect();
            return Ok(PerronFrequency {
                frequency: FrequencyVector::normalized(sigma.domain(), values)?,
                eigenvalue_bounds: (lo, hi),
                exact: false,
            });
        }
        // Iterate with M + I, which is primitive for irreducible M.
        let next: Vec<BigRational> = mx.iter().zip(&x).map(|(a, b)| a + b).collect();
        let total: BigRational = next.iter().sum();
        x = next.iter().map(|v| round(&(v / &total))).collect();
    }
    Err(Error::PerronUnavailable("power iteration did not converge".into()))
}

/// Frequencies of `L_σ^{(k)}` for an eventually periodic directive: the
/// Perron vector `f` of the period composition pushed through the prefix,
/// `normalize(M_π f)`.
pub fn substitutive_frequency(d: &DirectiveSequence, k: usize) -> Result<PerronFrequency> {
    if !d.is_eventually_periodic() {
        return Err(Error::PerronUnavailable("directive has no period".into()));
    }
    let p = d.prefix().len();
    let q = d.period().len();
    let start = if k <= p { p } else { p + (k - p).div_ceil(q) * q };
    let tau = d.tower(start, start + q)?;
    let base = perron_frequency(&tau)?;
    let pi = d.tower(k, start)?;
    let pushed = pi.incidence_matrix().to_rational().mat_vec(base.frequency.values())?;
    Ok(PerronFrequency { frequency: FrequencyVector::normalized(pi.codomain(), pushed)?, ..base })
}

/// Result of solving `M_σ f′ = f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedFrequency {
    pub alphabet: Arc<Alphabet>,
    pub values: Vec<BigRational>,
    /// Whether the values are non-negative and sum to 1.
    pub normalized: bool,
}

impl LiftedFrequency {
    /// The values as a frequency vector; a consistency error if they are not normalized.
    pub fn into_frequency(self) -> Result<FrequencyVector> {
        if !self.normalized {
            return Err(Error::Consistency(format!(
                "lifted frequencies sum to {}",
                self.values.iter().sum::<BigRational>()
            )));
        }
        FrequencyVector::new(&self.alphabet, self.values)
    }

    /// The values scaled to sum 1.
    pub fn rescaled(&self) -> Result<FrequencyVector> {
        FrequencyVector::normalized(&self.alphabet, self.values.clone())
    }
}

/// `f′ = M_σ^{−1} f`.
pub fn lift_frequency(f: &FrequencyVector, sigma: &Substitution) -> Result<LiftedFrequency> {
    check_same(f.alphabet(), sigma.codomain(), "frequency vector")?;
    let m = sigma.incidence_matrix().to_rational();
    if !m.is_square() {
        return Err(Error::NotInvertible);
    }
    let values = m.solve(f.values())?;
    let normalized =
        values.iter().all(|v| !v.is_negative()) && values.iter().sum::<BigRational>() == BigRational::one();
    Ok(LiftedFrequency { alphabet: Arc::clone(sigma.domain()), values, normalized })
}

/// `w = x σ(y) z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub x: Word,
    pub y: Word,
    pub z: Word,
}

impl Decomposition {
    /// `|x| + |z|`.
    pub fn border(&self) -> usize {
        self.x.len() + self.z.len()
    }
}

/// Decomposes `w = x σ(y) z` with `y` in the sample, `x` a strict suffix of
/// `σ(a)` and `z` a strict prefix of `σ(b)`, where `a y b` (dropping `a` when
/// `x` is empty and `b` when `z` is empty) is in the sample.
///
/// Among all such decompositions the one with the shortest `x` is returned,
/// then the longest `y`, then the lexicographically smallest `y`. A word lying
/// strictly inside a single image `σ(a)` is returned as `(ε, ε, w)`.
pub fn wxyz_decompose(w: &Word, sigma: &Substitution, sample: &LanguageSample) -> Result<Decomposition> {
    check_same(w.alphabet(), sigma.codomain(), "decomposed word")?;
    check_same(sigma.domain(), sample.alphabet(), "sample")?;
    let letters = w.letters();
    let norm = sigma.norm_max();
    let make = |i: usize, y: Vec<Letter>, end: usize| Decomposition {
        x: Word::from_raw(w.alphabet(), letters[..i].to_vec()),
        y: Word::from_raw(sample.alphabet(), y),
        z: Word::from_raw(w.alphabet(), letters[end..].to_vec()),
    };
    for i in 0..=letters.len().min(norm.saturating_sub(1)) {
        let x = &letters[..i];
        let heads: Vec<Option<Letter>> = if i == 0 {
            vec![None]
        } else {
            sigma
                .domain()
                .letters()
                .filter(|&a| {
                    let img = sigma.image(a).letters();
                    img.len() > i && img.ends_with(x)
                })
                .map(Some)
                .collect()
        };
        let mut best: Option<(Vec<Letter>, usize)> = None;
        for &head in &heads {
            let mut path = Vec::new();
            search(sigma, sample, letters, head, i, &mut path, &mut best);
        }
        if let Some((y, end)) = best {
            return Ok(make(i, y, end));
        }
    }
    let inside = sample
        .words_of_length(1)
        .any(|a| crate::words::find_in(sigma.image(a[0]).letters(), letters).is_some());
    if letters.len() < norm && inside {
        return Ok(make(0, Vec::new(), 0));
    }
    Err(Error::NotRepresentable)
}

fn with_ends(head: Option<Letter>, y: &[Letter], tail: Option<Letter>) -> Vec<Letter> {
    head.into_iter().chain(y.iter().copied()).chain(tail).collect()
}

fn search(
    sigma: &Substitution,
    sample: &LanguageSample,
    w: &[Letter],
    head: Option<Letter>,
    pos: usize,
    y: &mut Vec<Letter>,
    best: &mut Option<(Vec<Letter>, usize)>,
) {
    let z = &w[pos..];
    let tails: Vec<Option<Letter>> = if z.is_empty() {
        vec![None]
    } else {
        sigma
            .domain()
            .letters()
            .filter(|&b| {
                let img = sigma.image(b).letters();
                img.len() > z.len() && img.starts_with(z)
            })
            .map(Some)
            .collect()
    };
    if tails.iter().any(|&t| sample.contains_letters(&with_ends(head, y, t))) {
        let better = match best {
            None => true,
            Some((by, _)) => y.len() > by.len() || (y.len() == by.len() && y.as_slice() < by.as_slice()),
        };
        if better {
            *best = Some((y.clone(), pos));
        }
    }
    for c in sigma.domain().letters() {
        let img = sigma.image(c).letters();
        if !z.starts_with(img) {
            continue;
        }
        y.push(c);
        if sample.contains_letters(&with_ends(head, y, None)) {
            search(sigma, sample, w, head, pos + img.len(), y, best);
        }
        y.pop();
    }
}

/// Decompositions of an equal-length pair with `|y| = |y′|`: the longer `y`
/// is cut to the length of the shorter and the remainder moves into `z`.
pub fn decompose_pair(
    w: &Word,
    w_prime: &Word,
    sigma: &Substitution,
    sample: &LanguageSample,
) -> Result<(Decomposition, Decomposition)> {
    let mut d = wxyz_decompose(w, sigma, sample)?;
    let mut e = wxyz_decompose(w_prime, sigma, sample)?;
    let align = |long: &mut Decomposition, keep: usize| -> Result<()> {
        let rest = long.y.factor(keep..long.y.len());
        long.z = sigma.apply(&rest)?.concat(&long.z)?;
        long.y = long.y.prefix(keep)?;
        Ok(())
    };
    match d.y.len().cmp(&e.y.len()) {
        Ordering::Less => align(&mut e, d.y.len())?,
        Ordering::Greater => align(&mut d, e.y.len())?,
        Ordering::Equal => {}
    }
    Ok((d, e))
}

/// `(#A)^{n−k}·C_n + n − 1`, the bound on `C_k` for `k < n`.
pub fn shorter_length_bound(alphabet_size: usize, n: usize, k: usize, c_n: u64) -> u128 {
    (alphabet_size as u128).pow((n - k) as u32) * c_n as u128 + n as u128 - 1
}

/// `(2 + C·#A)·‖σ‖ − 2`, the bound on `|xz|` in aligned decompositions.
pub fn border_bound(c: u64, alphabet_size: usize, norm: usize) -> i128 {
    (2 + c as i128 * alphabet_size as i128) * norm as i128 - 2
}

/// `2(1 + C·#A)·‖σ‖ − 2`, the bound on the letter imbalance of `F(σ(L))`.
pub fn image_letter_bound(c: u64, alphabet_size: usize, norm: usize) -> i128 {
    2 * (1 + c as i128 * alphabet_size as i128) * norm as i128 - 2
}

/// Bound on the imbalance of `F(σ(L))` for factors of length `n`, for
/// non-erasing `σ`: `(2 + C₁·#A)‖σ‖ − 2 + (n − 1)(‖σ‖ − 1) + Cₙ·#(L ∩ Aⁿ)·‖σ‖`.
/// For `n = 1` it equals [`image_letter_bound`].
pub fn image_factor_bound(c1: u64, cn: u64, alphabet_size: usize, blocks: usize, n: usize, norm: usize) -> i128 {
    let norm = norm as i128;
    border_bound(c1, alphabet_size, norm as usize) + (n as i128 - 1) * (norm - 1) + cn as i128 * blocks as i128 * norm
}
