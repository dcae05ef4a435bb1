//! The verification suite behind `sadic verify`.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sadic_core::balance::{
    border_bound, image_factor_bound, image_letter_bound, shorter_length_bound, substitutive_frequency,
};
use sadic_core::linalg::{rational, rvec};
use sadic_core::substitution::{all_blocks, check_anchor, max_block_length};
use sadic_core::tms::{self, Tms, TmsDirective, EIGENPAIRS, M2_MATRIX, M2_TABLE, V_MINUS1};
use sadic_core::{
    decompose_pair, eigencheck, factorial_closure, imbalance, induced_block_substitution, lift_frequency,
    sample_level_language, Alphabet, AnchorSide, DirectiveSequence, EigenpairClaim, LanguageSample, RationalMatrix,
    SampleOptions, Substitution, Word,
};
use serde::Deserialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{CheckResult, Report};
use crate::CliError;

/// Expected `M₂` data; the built-in values unless a fixture file is given.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct M2Fixture {
    /// Image of each block `00, 01, 10, 11`.
    pub table: BTreeMap<String, String>,
    pub matrix: Vec<Vec<i64>>,
}

impl Default for M2Fixture {
    fn default() -> Self {
        let blocks = ["00", "01", "10", "11"];
        M2Fixture {
            table: blocks.iter().zip(M2_TABLE).map(|(b, img)| (b.to_string(), img.to_string())).collect(),
            matrix: M2_MATRIX.iter().map(|r| r.to_vec()).collect(),
        }
    }
}

impl M2Fixture {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let fixture: M2Fixture =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad M2 fixture {}: {e}", path.display())))?;
        if fixture.matrix.len() != 4 || fixture.matrix.iter().any(|r| r.len() != 4) {
            return Err(CliError::Usage("the M2 fixture matrix must be 4x4".into()));
        }
        Ok(fixture)
    }

    fn matrix(&self) -> RationalMatrix {
        RationalMatrix::from_integers(&self.matrix).expect("validated 4x4")
    }
}

/// Outcome of one check: pass/fail plus a one-line detail.
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }

    fn from_failures(failures: Vec<String>, ok: impl Into<String>) -> Self {
        match failures.first() {
            None => Outcome::new(true, ok),
            Some(first) => Outcome::new(false, format!("{} failures; first: {first}", failures.len())),
        }
    }
}

type CheckFn = fn(&M2Fixture) -> Result<Outcome, CliError>;

/// `(name, statement, check)` for every check, in run order.
pub const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("m2-table", "M with n = m = 2 and an empty anchor induces the expected block substitution", check_m2_table),
    ("m2-matrix", "the incidence matrix of that block substitution is the expected matrix", check_m2_matrix),
    ("eigen", "among the test vectors, exactly (1,2,2,1), (1,-1,-1,1), (1,0,0,-1), (1,-1,1,-1) are eigenvectors, for 2, -1, 0, 1", check_eigen),
    ("witness", "l2(w_2n) - l2(w'_2n) = n (1,-1,-1,1) with |w_2n| = (16^n + 2)/3, both words factors of M^k(0), n = 1..4", check_witness),
    ("closed-form", "l2(w_2n) and l2(w'_2n) match their closed forms in the eigenbasis, n = 1..4", check_closed_form),
    ("ell2-recursion", "l2 of consecutive witnesses is related by the square of the block matrix plus a border term", check_ell2_recursion),
    ("m2-recursion", "the 2-codings of consecutive witnesses are related by the square of the block substitution", check_m2_recursion),
    ("block-identity", "(s(w)u)^(m) = t(w^(n)) (s(suffix_{n-1}(w))u)^(m) for the induced t, on random instances of both sides", check_block_identity),
    ("linalg", "det(AB) = det(A) det(B) and A^-1 A = I on random integer matrices", check_linalg),
    ("shorter-lengths", "C_k <= (#A)^(n-k) C_n + n - 1 for k < n <= 4 on sampled languages", check_shorter_lengths),
    ("letter-2-balance", "random eventually periodic sequences over {L, M, R} give letter imbalance at most 2", check_letter_balance),
    ("decomposition", "equal-length image factors decompose as x s(y) z with |xz| <= (2 + C #A) |s| - 2", check_decomposition),
    ("image-bound", "image samples respect the letter bound 2(1 + C #A) |s| - 2 and the factor bound for lengths 2 and 3", check_image_bound),
    ("rec-identity", "|s(w)|_{s(011)} = |w|_{011} and 0 <= |w|_11 - |w|_011 <= 1 for Thue-Morse factors up to length 100 and s in {I, L, M, R}^{1..3}", check_rec_identity),
    ("classify", "classify reports NotFactorBalanced exactly for M-only periods, and the length-2 curves agree with the verdict", check_classify),
    ("tm-imbalance", "the length-2 imbalance of the Thue-Morse sample up to length 1366 reaches n at the witness lengths and grows", check_tm_imbalance),
    ("lifting", "lifting the image frequency through the inverse incidence matrix of L gives the preimage frequency", check_lifting),
    ("lr-tail", "for s in {L, R}*, s(01) = 01 t and s(10) = 10 t for a common t", check_lr_tail),
    ("final-remark", "F(s L (Thue-Morse)) is balanced for factor length |s(0)| + 1 on the sample", check_final_remark),
];

fn selected(name: &str, only: &[String]) -> bool {
    only.is_empty() || only.iter().any(|o| name == o || name.starts_with(o.as_str()))
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let fixture = match &config.m2_fixture {
        Some(path) => M2Fixture::load(path)?,
        None => M2Fixture::default(),
    };
    let chosen: Vec<_> = CHECKS.iter().filter(|(name, _, _)| selected(name, &config.only)).collect();
    if chosen.is_empty() {
        let known: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
        return Err(CliError::Usage(format!("--only matches no check; known: {}", known.join(", "))));
    }
    let mut checks = Vec::new();
    for (name, statement, f) in chosen {
        let outcome = f(&fixture)?;
        checks.push(CheckResult {
            name: name.to_string(),
            statement: statement.to_string(),
            passed: outcome.passed,
            detail: outcome.detail,
        });
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let results = json!({
        "fixture": if config.m2_fixture.is_some() { "file" } else { "built-in" },
        "total": checks.len(),
        "passed": passed,
        "failed": checks.len() - passed,
    });
    Ok(Report::new(config, results, checks))
}

fn bin() -> std::sync::Arc<Alphabet> {
    Alphabet::binary()
}

fn word(s: &str) -> Word {
    Word::parse(&bin(), s).expect("binary literal")
}

fn thue_morse(cap: usize) -> Result<LanguageSample, CliError> {
    let d = TmsDirective::parse("|M")?.to_directive();
    Ok(sample_level_language(&d, 0, cap, &SampleOptions::default())?)
}

fn level0(directive: &str, cap: usize) -> Result<LanguageSample, CliError> {
    let d = TmsDirective::parse(directive)?.to_directive();
    Ok(sample_level_language(&d, 0, cap, &SampleOptions::default())?)
}

fn check_m2_table(fixture: &M2Fixture) -> Result<Outcome, CliError> {
    let m2 = tms::m2();
    let mut failures = Vec::new();
    for (i, block) in ["00", "01", "10", "11"].iter().enumerate() {
        let got = m2.image(i).map(|w| w.to_string()).unwrap_or_default();
        let want = fixture.table.get(*block).cloned().unwrap_or_default();
        if got != want {
            failures.push(format!("({block}) -> {got}, expected {want}"));
        }
    }
    Ok(Outcome::from_failures(failures, m2.to_string()))
}

fn check_m2_matrix(fixture: &M2Fixture) -> Result<Outcome, CliError> {
    let inc = tms::m2().incidence_matrix();
    let got: Vec<Vec<i64>> = inc.entries().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    Ok(Outcome::new(got == fixture.matrix, format!("{got:?}")))
}

fn check_eigen(fixture: &M2Fixture) -> Result<Outcome, CliError> {
    let m = fixture.matrix();
    let mut vectors: Vec<[i64; 4]> = EIGENPAIRS.iter().map(|p| p.1).collect();
    for i in 0..4 {
        let mut e = [0; 4];
        e[i] = 1;
        vectors.push(e);
    }
    let mut accepted = Vec::new();
    for v in &vectors {
        for &(value, _) in &EIGENPAIRS {
            let claim = EigenpairClaim::new(m.clone(), rvec(v), rational(value));
            if eigencheck(&claim)? {
                accepted.push((value, *v));
            }
        }
    }
    let expected: Vec<(i64, [i64; 4])> = EIGENPAIRS.to_vec();
    let mut sorted = accepted.clone();
    sorted.sort();
    let mut want = expected.clone();
    want.sort();
    Ok(Outcome::new(sorted == want, format!("accepted {accepted:?}")))
}

fn check_witness(_: &M2Fixture) -> Result<Outcome, CliError> {
    let points = match tms::tm_imbalance_growth(4) {
        Ok(p) => p,
        Err(e) => return Ok(Outcome::new(false, e.to_string())),
    };
    let pairs = tms::witness_pairs(8)?;
    let mut failures = Vec::new();
    let mut lengths = Vec::new();
    for p in &points {
        let expected = (16u128.pow(p.n as u32) + 2) / 3;
        lengths.push(p.length);
        if p.length as u128 != expected || p.difference != V_MINUS1.map(|x| x * p.n as i64) {
            failures.push(format!("n = {}", p.n));
        }
        let pair = &pairs[2 * p.n - 1];
        for w in [&pair.w, &pair.w_prime] {
            if tms::thue_morse_certificate(w, 4 * p.n + 3)?.is_none() {
                failures.push(format!("no certificate for a word of index {}", 2 * p.n));
            }
        }
    }
    Ok(Outcome::from_failures(failures, format!("lengths {lengths:?}")))
}

fn check_closed_form(_: &M2Fixture) -> Result<Outcome, CliError> {
    let pairs = tms::witness_pairs(8)?;
    let mut failures = Vec::new();
    for n in 1..=4 {
        let pair = &pairs[2 * n - 1];
        let (a, b) = (rvec(&tms::ell2(&pair.w)?), rvec(&tms::ell2(&pair.w_prime)?));
        if a != tms::closed_form_w(n) {
            failures.push(format!("w_{}", 2 * n));
        }
        if b != tms::closed_form_w_prime(n) {
            failures.push(format!("w'_{}", 2 * n));
        }
    }
    Ok(Outcome::from_failures(failures, "n = 1..4"))
}

fn check_ell2_recursion(fixture: &M2Fixture) -> Result<Outcome, CliError> {
    let square = fixture.matrix().pow(2)?;
    let pairs = tms::witness_pairs(8)?;
    let mut failures = Vec::new();
    for window in pairs.windows(2) {
        let (prev, next) = (&window[0], &window[1]);
        let (border, border_prime) = (tms::ell2_border(next.index, false), tms::ell2_border(next.index, true));
        for (from, to, b, which) in [(&prev.w, &next.w, border, "w"), (&prev.w_prime, &next.w_prime, border_prime, "w'")] {
            let pushed = square.mat_vec(&rvec(&tms::ell2(from)?))?;
            let extra = rvec(&tms::ell2(&word(b))?);
            let predicted: Vec<BigRational> = pushed.iter().zip(&extra).map(|(x, y)| x + y).collect();
            if predicted != rvec(&tms::ell2(to)?) {
                failures.push(format!("{which}_{}", next.index));
            }
        }
    }
    Ok(Outcome::from_failures(failures, "indices 2..8"))
}

fn check_m2_recursion(_: &M2Fixture) -> Result<Outcome, CliError> {
    let m2 = tms::m2();
    let blocks = Alphabet::blocks(&bin(), 2);
    let bw = |s: &str| Word::parse(&blocks, s).expect("block literal");
    let pairs = tms::witness_pairs(8)?;
    let mut failures = Vec::new();
    for window in pairs.windows(2) {
        let (prev, next) = (&window[0], &window[1]);
        let even = next.index % 2 == 0;
        let square = |w: &Word| -> Result<Word, CliError> { Ok(m2.apply(&m2.apply(&w.n_coding(2))?)?) };
        let (tail, head) = if even { ("(01)(11)", "(01)") } else { ("(10)(00)", "(10)") };
        let lhs = square(&prev.w)?.concat(&bw(tail))?;
        let rhs = bw(head).concat(&next.w.n_coding(2))?;
        if lhs != rhs {
            failures.push(format!("w_{}", next.index));
        }
        let tail_prime = if even { "(10)" } else { "(01)" };
        let lhs = square(&prev.w_prime)?.concat(&bw(tail_prime))?;
        if lhs != next.w_prime.n_coding(2) {
            failures.push(format!("w'_{}", next.index));
        }
    }
    Ok(Outcome::from_failures(failures, "indices 2..8"))
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &std::sync::Arc<Alphabet>, len: usize) -> Word {
    let letters = (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect();
    Word::new(alphabet, letters).expect("in range")
}

/// Number of random instances per side.
pub const BLOCK_IDENTITY_CASES: usize = 1000;

fn check_block_identity(_: &M2Fixture) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let alphabets = [Alphabet::binary(), Alphabet::new(["a", "b", "c"]).expect("alphabet")];
    let mut failures = Vec::new();
    let mut checked = 0;
    for side in [AnchorSide::Prefix, AnchorSide::Suffix] {
        for _ in 0..BLOCK_IDENTITY_CASES {
            let dom = &alphabets[rng.gen_range(0..2)];
            let cod = &alphabets[rng.gen_range(0..2)];
            let images = (0..dom.len()).map(|_| {
                let low = usize::from(!rng.gen_bool(0.1));
                let len = rng.gen_range(low..=4);
                random_word(&mut rng, cod, len)
            });
            let sigma = Substitution::new(dom, cod, images.collect())?;
            let n = rng.gen_range(1..=3);
            let anchors: Vec<Word> =
                (0..=3).flat_map(|l| all_blocks(cod, l)).filter(|u| check_anchor(&sigma, u, side).is_ok()).collect();
            let u = &anchors[rng.gen_range(0..anchors.len())];
            let blocks = all_blocks(dom, n);
            let max = max_block_length(&sigma, n, u, &blocks)?;
            let m = rng.gen_range(1..=max);
            let hat = induced_block_substitution(&sigma, n, m, u, side, &blocks)?;
            let w_len = rng.gen_range(n..=n + 12);
            let w = random_word(&mut rng, dom, w_len);
            let (lhs, rhs) = hat.identity_sides(&w)?;
            checked += 1;
            if lhs != rhs {
                failures.push(format!("{side:?} sigma = {sigma}, n = {n}, m = {m}, u = {u}, w = {w}"));
            }
        }
    }
    Ok(Outcome::from_failures(failures, format!("{checked} instances")))
}

fn check_linalg(_: &M2Fixture) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut failures = Vec::new();
    let mut inverted = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1..=4);
        let mut random = || -> RationalMatrix {
            let rows: Vec<Vec<i64>> = (0..size).map(|_| (0..size).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            RationalMatrix::from_integers(&rows).expect("square")
        };
        let (a, b) = (random(), random());
        if a.mat_mul(&b)?.det()? != a.det()? * b.det()? {
            failures.push(format!("det of product, size {size}"));
        }
        match a.invert() {
            Ok(inv) => {
                inverted += 1;
                if inv.mat_mul(&a)? != RationalMatrix::identity(size) {
                    failures.push("inverse".into());
                }
            }
            Err(_) if a.det()?.is_zero() => {}
            Err(e) => failures.push(format!("invert failed on non-singular matrix: {e}")),
        }
    }
    Ok(Outcome::from_failures(failures, format!("200 pairs, {inverted} inverted")))
}

fn constants(sample: &LanguageSample, n_max: usize, cap: usize) -> Result<Vec<u64>, CliError> {
    (1..=n_max).map(|n| Ok(imbalance(sample, n, cap)?.constant)).collect()
}

fn check_shorter_lengths(_: &M2Fixture) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let cap = 40;
    let mut samples = vec![("|M".to_string(), thue_morse(cap)?)];
    for d in ["|LR", "L|RRL", "|LLR", "R|LRR"] {
        samples.push((d.to_string(), level0(d, cap)?));
    }
    for i in 0..10 {
        let a = if i % 2 == 0 { bin() } else { Alphabet::new(["a", "b", "c"]).expect("alphabet") };
        let words: Vec<Word> = (0..rng.gen_range(1..=3)).map(|_| {
            let len = rng.gen_range(5..=30);
            random_word(&mut rng, &a, len)
        }).collect();
        samples.push((format!("random-{i}"), factorial_closure(&a, &words, 30)?));
    }
    let mut failures = Vec::new();
    for (label, sample) in &samples {
        let c = constants(sample, 4, sample.max_length())?;
        let size = sample.alphabet().len();
        for n in 2..=4 {
            for k in 1..n {
                let bound = shorter_length_bound(size, n, k, c[n - 1]);
                if c[k - 1] as u128 > bound {
                    failures.push(format!("{label}: C_{k} = {} > {bound}", c[k - 1]));
                }
            }
        }
    }
    Ok(Outcome::from_failures(failures, format!("{} samples", samples.len())))
}

fn random_tms(rng: &mut ChaCha8Rng, max_prefix: usize, max_period: usize) -> TmsDirective {
    let (p, q) = (rng.gen_range(0..=max_prefix), rng.gen_range(1..=max_period));
    let mut pick = |len: usize| (0..len).map(|_| Tms::ALL[rng.gen_range(0..3)]).collect::<Vec<_>>();
    let prefix = pick(p);
    let period = pick(q);
    TmsDirective::new(prefix, period).expect("non-empty period")
}

/// Number of random directives in the letter-balance check.
pub const LETTER_BALANCE_CASES: usize = 50;

fn check_letter_balance(_: &M2Fixture) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let cap = 200;
    let mut failures = Vec::new();
    let mut worst = 0;
    for _ in 0..LETTER_BALANCE_CASES {
        let d = random_tms(&mut rng, 8, 3);
        let sample = sample_level_language(&d.to_directive(), 0, cap, &SampleOptions::default())?;
        let c = imbalance(&sample, 1, cap)?.constant;
        worst = worst.max(c);
        if c > 2 {
            failures.push(format!("{d}: C_1 = {c}"));
        }
    }
    Ok(Outcome::from_failures(failures, format!("{LETTER_BALANCE_CASES} directives, largest C_1 = {worst}")))
}

fn check_decomposition(_: &M2Fixture) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut failures = Vec::new();
    let mut pairs = 0;
    for d in ["|M", "|LR", "L|RRL", "|MRL"] {
        let sample = level0(d, 60)?;
        let c = imbalance(&sample, 1, 60)?.constant;
        for t in Tms::ALL {
            let sigma = t.substitution();
            let image = sample.image(&sigma, 30)?;
            let bound = border_bound(c, 2, sigma.norm_max());
            for _ in 0..60 {
                let len = rng.gen_range(1..=30);
                let words: Vec<&[usize]> = image.words_of_length(len).collect();
                if words.is_empty() {
                    continue;
                }
                let w = Word::new(&bin(), words[rng.gen_range(0..words.len())].to_vec())?;
                let w_prime = Word::new(&bin(), words[rng.gen_range(0..words.len())].to_vec())?;
                let (a, b) = decompose_pair(&w, &w_prime, &sigma, &sample)?;
                pairs += 1;
                for (dec, orig) in [(&a, &w), (&b, &w_prime)] {
                    let rebuilt = dec.x.concat(&sigma.apply(&dec.y)?)?.concat(&dec.z)?;
                    if &rebuilt != orig {
                        failures.push(format!("{d}, {}: {orig} is not x s(y) z", t.name()));
                    }
                    if dec.border() as i128 > bound {
                        failures.push(format!("{d}, {}: |xz| = {} > {bound} for {orig}", t.name(), dec.border()));
                    }
                }
                if a.y.len() != b.y.len() {
                    failures.push(format!("{d}, {}: |y| differ for {w}, {w_prime}", t.name()));
                }
            }
        }
    }
    Ok(Outcome::from_failures(failures, format!("{pairs} pairs")))
}

fn two_fold() -> Vec<(String, Substitution)> {
    let mut out: Vec<(String, Substitution)> = Tms::ALL.iter().map(|t| (t.name().to_string(), t.substitution())).collect();
    for a in Tms::ALL {
        for b in Tms::ALL {
            out.push((format!("{}{}", a.name(), b.name()), tms::compose_word(&[a, b])));
        }
    }
    out
}

fn check_image_bound(_: &M2Fixture) -> Result<Outcome, CliError> {
    let cap = 40;
    let mut failures = Vec::new();
    let mut cases = 0;
    for d in ["|M", "|LR", "L|RRL", "|MRL", "|RM"] {
        let sample = level0(d, cap)?;
        let c = constants(&sample, 3, cap)?;
        for (name, sigma) in two_fold() {
            let image = sample.image(&sigma, cap)?;
            let ci = constants(&image, 3, cap)?;
            let norm = sigma.norm_max();
            cases += 1;
            let letter = image_letter_bound(c[0], 2, norm);
            if ci[0] as i128 > letter {
                failures.push(format!("{d}, {name}: C_1 = {} > {letter}", ci[0]));
            }
            for n in 2..=3 {
                let bound = image_factor_bound(c[0], c[n - 1], 2, sample.count(n), n, norm);
                if ci[n - 1] as i128 > bound {
                    failures.push(format!("{d}, {name}: C_{n} = {} > {bound}", ci[n - 1]));
                }
            }
        }
    }
    Ok(Outcome::from_failures(failures, format!("{cases} images")))
}

/// Sequences over `{I, L, M, R}` of length 1 to 3.
pub fn short_compositions() -> Vec<(String, Substitution)> {
    let letters = [None, Some(Tms::L), Some(Tms::M), Some(Tms::R)];
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Option<Tms>>> = letters.iter().map(|&l| vec![l]).collect();
    stack.reverse();
    while let Some(seq) = stack.pop() {
        let name: String = seq.iter().map(|l| l.map_or('I', Tms::name)).collect();
        let word: Vec<Tms> = seq.iter().flatten().copied().collect();
        out.push((name, tms::compose_word(&word)));
        if seq.len() < 3 {
            for &l in letters.iter().rev() {
                let mut next = seq.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    out
}

fn check_rec_identity(_: &M2Fixture) -> Result<Outcome, CliError> {
    let sample = thue_morse(100)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    let compositions = short_compositions();
    for (name, sigma) in &compositions {
        let report = tms::check_rec_identity(sigma, &sample)?;
        checked += report.checked;
        if let Some(w) = report.violations.first() {
            failures.push(format!("{name}: count differs for {w}"));
        }
        if let Some(w) = report.bound_violations.first() {
            failures.push(format!("{name}: |w|_11 - |w|_011 out of range for {w}"));
        }
    }
    Ok(Outcome::from_failures(failures, format!("{} compositions, {checked} word checks", compositions.len())))
}

/// All periods of length 1 to 3 over `{L, M, R}`.
pub fn short_periods() -> Vec<Vec<Tms>> {
    let mut out: Vec<Vec<Tms>> = Vec::new();
    for len in 1..=3u32 {
        for code in 0..3usize.pow(len) {
            let mut c = code;
            let mut p = Vec::new();
            for _ in 0..len {
                p.push(Tms::ALL[c % 3]);
                c /= 3;
            }
            p.reverse();
            out.push(p);
        }
    }
    out
}

fn check_classify(_: &M2Fixture) -> Result<Outcome, CliError> {
    let cap = 400;
    let mut failures = Vec::new();
    let periods = short_periods();
    for period in &periods {
        let d = TmsDirective::new(Vec::new(), period.clone())?;
        let verdict = tms::classify(&d).verdict;
        let m_only = period.iter().all(|&t| t == Tms::M);
        if (verdict == tms::Verdict::NotFactorBalanced) != m_only {
            failures.push(format!("{d}: {verdict}"));
            continue;
        }
        let sample = sample_level_language(&d.to_directive(), 0, cap, &SampleOptions::default())?;
        let curve = imbalance(&sample, 2, cap)?.curve;
        let early = curve[..=cap / 2].iter().copied().max().unwrap_or(0);
        let late = curve[cap / 2 + 1..].iter().copied().max().unwrap_or(0);
        if m_only {
            // Record values at the witness lengths 6 and 86.
            if curve[6] < 1 || curve[86] < 2 || curve[86] <= curve[6] {
                failures.push(format!("{d}: curve[6] = {}, curve[86] = {}", curve[6], curve[86]));
            }
        } else if late > early {
            failures.push(format!("{d}: imbalance {late} beyond length {} exceeds {early}", cap / 2));
        }
    }
    if let Err(e) = tms::tm_imbalance_growth(3) {
        failures.push(format!("witness growth: {e}"));
    }
    Ok(Outcome::from_failures(failures, format!("{} periods", periods.len())))
}

fn check_tm_imbalance(_: &M2Fixture) -> Result<Outcome, CliError> {
    let cap = 1366;
    let sample = thue_morse(cap)?;
    let curve = imbalance(&sample, 2, cap)?.curve;
    let mut failures = Vec::new();
    let mut reached = Vec::new();
    for n in 1..=3 {
        let len = tms::witness_length(2 * n) as usize;
        reached.push((len, curve[len]));
        if curve[len] < n as u64 {
            failures.push(format!("imbalance {} < {n} at length {len}", curve[len]));
        }
    }
    if !reached.windows(2).all(|w| w[0].1 < w[1].1) {
        failures.push(format!("not strictly growing: {reached:?}"));
    }
    Ok(Outcome::from_failures(failures, format!("(length, imbalance) = {reached:?}")))
}

fn check_lifting(_: &M2Fixture) -> Result<Outcome, CliError> {
    let registry = tms::registry();
    let l = Tms::L.substitution();
    let mut failures = Vec::new();
    let mut exact = 0;
    for period in short_periods().into_iter().filter(|p| p.len() <= 2) {
        let tail: String = period.iter().map(|t| t.name()).collect();
        let pre = DirectiveSequence::parse(&format!("|{tail}"), &registry)?;
        let img = DirectiveSequence::parse(&format!("L|{tail}"), &registry)?;
        let (Ok(f_pre), Ok(f_img)) = (substitutive_frequency(&pre, 0), substitutive_frequency(&img, 0)) else {
            continue;
        };
        if !(f_pre.exact && f_img.exact) {
            continue;
        }
        exact += 1;
        let lifted = lift_frequency(&f_img.frequency, &l)?;
        let rescaled = lifted.rescaled()?;
        if rescaled != f_pre.frequency {
            failures.push(format!("|{tail}: lifted {:?}", rescaled.values()));
        }
        let total: BigRational = lifted.values.iter().sum();
        if lifted.normalized != (total == BigRational::from(BigInt::from(1))) {
            failures.push(format!("|{tail}: normalization flag"));
        }
    }
    let ok = exact > 0;
    if !ok {
        failures.push("no directive with exact frequencies".into());
    }
    Ok(Outcome::from_failures(failures, format!("{exact} directives with exact frequencies")))
}

fn check_lr_tail(_: &M2Fixture) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let len = rng.gen_range(0..=10);
        let prefix: Vec<Tms> = (0..len).map(|_| if rng.gen_bool(0.5) { Tms::L } else { Tms::R }).collect();
        if tms::common_tail(&prefix)?.is_none() {
            failures.push(prefix.iter().map(|t| t.name()).collect());
        }
    }
    Ok(Outcome::from_failures(failures, "200 prefixes"))
}

fn check_final_remark(_: &M2Fixture) -> Result<Outcome, CliError> {
    let cap = 160;
    let sample = thue_morse(cap)?;
    let l = Tms::L.substitution();
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    let mut sigmas: Vec<(String, Substitution)> = vec![("I".into(), Substitution::identity(&bin()))];
    sigmas.extend(two_fold());
    for (name, sigma) in sigmas {
        let composed = sigma.compose(&l)?;
        let image = sample.image(&composed, cap)?;
        let n = sigma.image(0).len() + 1;
        let curve = imbalance(&image, n, cap)?.curve;
        let early = curve[..=cap / 2].iter().copied().max().unwrap_or(0);
        let late = curve[cap / 2 + 1..].iter().copied().max().unwrap_or(0);
        seen.push(format!("{name}:{early}"));
        if late > early {
            failures.push(format!("{name}: length-{n} imbalance {late} beyond {} exceeds {early}", cap / 2));
        }
    }
    Ok(Outcome::from_failures(failures, format!("constants {}", seen.join(" "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerations() {
        assert_eq!(short_compositions().len(), 84);
        assert_eq!(short_periods().len(), 39);
        let distinct: std::collections::BTreeSet<String> =
            short_compositions().iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(distinct.len(), 40);
    }

    #[test]
    fn selection() {
        assert!(selected("eigen", &["eigen".into()]));
        assert!(selected("m2-table", &["m2".into()]));
        assert!(!selected("witness", &["eigen".into()]));
        assert!(selected("witness", &[]));
    }
}
