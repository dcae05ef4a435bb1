//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Every expected value is recomputed here with plain string and integer
//! code, independent of the library's algorithms, and compared with what
//! the library reports.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sadic_cli::{commands, Command, RunConfig};
use sadic_core::substitution::all_blocks;
use sadic_core::tms::{self, Tms, TmsDirective};
use sadic_core::{
    decompose_pair, wxyz_decompose, eigencheck, factorial_closure, imbalance, induced_block_substitution, lift_frequency,
    sample_level_language, Alphabet, AnchorSide, DirectiveSequence, EigenpairClaim, LanguageSample, RationalMatrix,
    SampleOptions, Substitution, Word,
};

type Outcome = Result<String, String>;

// ---------------------------------------------------------------------------
// Oracles on plain byte strings over the letters 0, 1, 2, ...

type Bytes = Vec<u8>;

fn apply(images: &[Bytes], w: &[u8]) -> Bytes {
    w.iter().flat_map(|&a| images[a as usize].iter().copied()).collect()
}

fn tms_images(t: char) -> Vec<Bytes> {
    match t {
        'L' => vec![vec![0], vec![1, 0]],
        'M' => vec![vec![0, 1], vec![1, 0]],
        'R' => vec![vec![0, 1], vec![1]],
        _ => vec![vec![0], vec![1]],
    }
}

/// Images of `σ_0 ∘ ⋯ ∘ σ_{k−1}` for a name string over `{I, L, M, R}`.
fn compose(names: &str) -> Vec<Bytes> {
    let mut images = vec![vec![0u8], vec![1u8]];
    for t in names.chars().rev() {
        let outer = tms_images(t);
        images = images.iter().map(|img| apply(&outer, img)).collect();
    }
    images
}

fn thue_morse_prefix(k: usize) -> Bytes {
    let m = tms_images('M');
    let mut w = vec![0u8];
    for _ in 0..k {
        w = apply(&m, &w);
    }
    w
}

fn count(text: &[u8], pattern: &[u8]) -> usize {
    if pattern.len() > text.len() {
        return 0;
    }
    text.windows(pattern.len()).filter(|w| *w == pattern).count()
}

fn contains(text: &[u8], pattern: &[u8]) -> bool {
    pattern.is_empty() || text.windows(pattern.len()).any(|w| w == pattern)
}

fn show(w: &[u8]) -> String {
    w.iter().map(|&a| char::from(b'0' + a)).collect()
}

fn bytes(w: &[usize]) -> Bytes {
    w.iter().map(|&a| a as u8).collect()
}

/// Distinct factors of length `1..=cap`, grouped by length.
fn factor_sets(texts: &[Bytes], cap: usize) -> BTreeMap<usize, BTreeSet<Bytes>> {
    let mut out: BTreeMap<usize, BTreeSet<Bytes>> = (1..=cap).map(|l| (l, BTreeSet::new())).collect();
    for text in texts {
        for len in 1..=cap.min(text.len()) {
            for w in text.windows(len) {
                out.get_mut(&len).unwrap().insert(w.to_vec());
            }
        }
    }
    out
}

fn sample_sets(sample: &LanguageSample) -> BTreeMap<usize, BTreeSet<Bytes>> {
    (1..=sample.max_length()).map(|l| (l, sample.words_of_length(l).map(bytes).collect())).collect()
}

fn all_words(size: u8, len: usize) -> Vec<Bytes> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| (0..size).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out
}

/// `curve[ℓ] = max_v (max − min of |w|_v over words of length ℓ)`, `v` of length `n`.
fn naive_curve(sets: &BTreeMap<usize, BTreeSet<Bytes>>, size: u8, n: usize) -> Vec<u64> {
    let patterns = all_words(size, n);
    let cap = sets.keys().copied().max().unwrap_or(0);
    let mut curve = vec![0u64; cap + 1];
    for (&len, words) in sets {
        let mut best = 0;
        for v in &patterns {
            let counts: Vec<usize> = words.iter().map(|w| count(w, v)).collect();
            if let (Some(hi), Some(lo)) = (counts.iter().max(), counts.iter().min()) {
                best = best.max((hi - lo) as u64);
            }
        }
        curve[len] = best;
    }
    curve
}

fn naive_constant(sets: &BTreeMap<usize, BTreeSet<Bytes>>, size: u8, n: usize) -> u64 {
    naive_curve(sets, size, n).into_iter().max().unwrap_or(0)
}

fn level0(directive: &str, cap: usize) -> LanguageSample {
    let d = TmsDirective::parse(directive).unwrap().to_directive();
    sample_level_language(&d, 0, cap, &SampleOptions::default()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
}

/// `w_n`, `w′_n` for `n = 1..=count` from the border-stripping recursion.
fn oracle_witnesses(count: usize) -> Vec<(Bytes, Bytes)> {
    let m = tms_images('M');
    let mut out = vec![(vec![0, 0], vec![0, 1])];
    for i in 2..=count {
        let (w, wp) = out.last().unwrap().clone();
        let (a, b) = (apply(&m, &apply(&m, &w)), apply(&m, &apply(&m, &wp)));
        let border = if i % 2 == 0 { 0 } else { 1 };
        assert!(a[0] == border && a[a.len() - 1] == border);
        let tail: &[u8] = if i % 2 == 0 { &[0, 1] } else { &[1, 0] };
        assert!(b.ends_with(tail));
        out.push((a[1..a.len() - 1].to_vec(), b[..b.len() - 2].to_vec()));
    }
    out
}

fn ell2(w: &[u8]) -> [i64; 4] {
    let mut out = [0; 4];
    for p in w.windows(2) {
        out[(p[0] * 2 + p[1]) as usize] += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Criteria

const M2_TABLE: [&str; 4] = ["(01)(10)", "(01)(11)", "(10)(00)", "(10)(01)"];
const M2_MATRIX: [[i64; 4]; 4] = [[0, 0, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 0, 0]];
const PAIRS: [(i64, [i64; 4]); 4] = [(2, [1, 2, 2, 1]), (-1, [1, -1, -1, 1]), (0, [1, 0, 0, -1]), (1, [1, -1, 1, -1])];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let bin = Alphabet::binary();
    let hat = induced_block_substitution(
        &Tms::M.substitution(),
        2,
        2,
        &Word::empty(&bin),
        AnchorSide::Prefix,
        &all_blocks(&bin, 2),
    )
    .map_err(|e| e.to_string())?;
    let m = tms_images('M');
    for (t, block) in all_words(2, 2).iter().enumerate() {
        // σ(a₁) followed by the first letter of σ(a₂), read through a 2-window.
        let word = [m[block[0] as usize].clone(), vec![m[block[1] as usize][0]]].concat();
        let oracle: String = word.windows(2).map(|p| format!("({})", show(p))).collect();
        let got = hat.image(t).ok_or("missing image")?.to_string();
        ensure(oracle == M2_TABLE[t] && got == oracle, || format!("({}): {got} vs {oracle}", show(block)))?;
        for (r, expected_row) in M2_MATRIX.iter().enumerate() {
            let pattern = format!("({})", show(&all_words(2, 2)[r]));
            let n = oracle.matches(&pattern).count() as u64;
            ensure(n == expected_row[t] as u64 && hat.incidence_matrix().get(r, t) == n, || {
                format!("matrix entry ({r}, {t})")
            })?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(hat.to_string())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let matrix = RationalMatrix::from_integers(&M2_MATRIX.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
    for (value, v) in PAIRS {
        let mv: Vec<i64> = M2_MATRIX.iter().map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let oracle = mv.iter().zip(&v).all(|(a, b)| *a == value * b);
        let claim = EigenpairClaim::new(matrix.clone(), sadic_core::linalg::rvec(&v), sadic_core::linalg::rational(value));
        let got = eigencheck(&claim).map_err(|e| e.to_string())?;
        ensure(oracle && got, || format!("pair ({v:?}, {value})"))?;
        for (other, _) in PAIRS.iter().filter(|p| p.0 != value) {
            let wrong = EigenpairClaim::new(matrix.clone(), sadic_core::linalg::rvec(&v), sadic_core::linalg::rational(*other));
            ensure(!eigencheck(&wrong).unwrap(), || format!("accepted ({v:?}, {other})"))?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok("four eigenpairs accepted, mismatched values rejected".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let oracle = oracle_witnesses(8);
    let lib = tms::witness_pairs(8).map_err(|e| e.to_string())?;
    let growth = tms::tm_imbalance_growth(4).map_err(|e| e.to_string())?;
    let mut lengths = Vec::new();
    for n in 1..=4usize {
        let (w, wp) = &oracle[2 * n - 1];
        let pair = &lib[2 * n - 1];
        ensure(bytes(pair.w.letters()) == *w && bytes(pair.w_prime.letters()) == *wp, || format!("pair {}", 2 * n))?;
        let expected_len = (16usize.pow(n as u32) + 2) / 3;
        ensure(w.len() == expected_len && wp.len() == expected_len, || format!("length at n = {n}"))?;
        let (a, b) = (ell2(w), ell2(wp));
        let diff: Vec<i64> = (0..4).map(|i| a[i] - b[i]).collect();
        let expected: Vec<i64> = [1, -1, -1, 1].iter().map(|x| x * n as i64).collect();
        ensure(diff == expected && growth[n - 1].difference.to_vec() == expected, || format!("difference {diff:?}"))?;
        let text = thue_morse_prefix(4 * n + 1);
        ensure(contains(&text, w) && contains(&text, wp), || format!("membership at n = {n}"))?;
        for word in [&pair.w, &pair.w_prime] {
            let cert = tms::thue_morse_certificate(word, 4 * n + 1).unwrap().ok_or("no certificate")?;
            let t = thue_morse_prefix(cert.k);
            ensure(t[cert.position..].starts_with(&bytes(word.letters())), || "certificate position".into())?;
            ensure(cert.k == 0 || !contains(&thue_morse_prefix(cert.k - 1), &bytes(word.letters())), || {
                "certificate k not minimal".into()
            })?;
        }
        lengths.push(w.len());
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("lengths {lengths:?}"))
}

fn criterion_4() -> Outcome {
    let oracle = oracle_witnesses(8);
    for n in 1..=4usize {
        let (w, wp) = &oracle[2 * n - 1];
        let g = 4i64.pow(2 * n as u32) - 1;
        let n = n as i64;
        // 18 ℓ₂ = g v₂ + 12n v₋₁ − 9 v₀ and 18 ℓ₂′ = g v₂ − 6n v₋₁ − 9 v₀.
        let (v2, vm1, v0) = (PAIRS[0].1, PAIRS[1].1, PAIRS[2].1);
        let lhs: Vec<i64> = (0..4).map(|i| g * v2[i] + 12 * n * vm1[i] - 9 * v0[i]).collect();
        let lhs_p: Vec<i64> = (0..4).map(|i| g * v2[i] - 6 * n * vm1[i] - 9 * v0[i]).collect();
        let (a, b) = (ell2(w), ell2(wp));
        ensure((0..4).all(|i| lhs[i] == 18 * a[i] && lhs_p[i] == 18 * b[i]), || format!("n = {n}"))?;
        let to_rat = |v: &[i64; 4]| v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect::<Vec<_>>();
        ensure(tms::closed_form_w(n as usize) == to_rat(&a), || format!("library closed form w, n = {n}"))?;
        ensure(tms::closed_form_w_prime(n as usize) == to_rat(&b), || format!("library closed form w', n = {n}"))?;
    }
    Ok("n = 1..4, both sequences".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut config = RunConfig::new(Command::Analyze);
    config.directive = Some("|M".into());
    config.max_length = 1366;
    config.nmax = 2;
    let report = commands::analyze(&config).map_err(|e| e.to_string())?;
    ensure(report.passed(), || "analyze checks failed".into())?;
    let curve: Vec<u64> = report.results["balance"][1]["curve"]
        .as_array()
        .ok_or("no curve")?
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    let oracle = oracle_witnesses(6);
    let mut seen = Vec::new();
    for n in 1..=3usize {
        let (w, wp) = &oracle[2 * n - 1];
        let text = thue_morse_prefix(4 * n + 1);
        ensure(contains(&text, w) && contains(&text, wp), || format!("w_{} not a Thue-Morse factor", 2 * n))?;
        let best = all_words(2, 2).iter().map(|v| count(w, v).abs_diff(count(wp, v))).max().unwrap();
        ensure(best >= n, || format!("pair {} differs by {best}", 2 * n))?;
        ensure(curve[w.len()] as usize >= best, || format!("pipeline misses the pair at length {}", w.len()))?;
        seen.push((w.len(), curve[w.len()]));
    }
    ensure(seen.windows(2).all(|p| p[0].1 < p[1].1), || format!("not strictly growing: {seen:?}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("(length, imbalance) {seen:?} in {:.1} s", start.elapsed().as_secs_f64()))
}

fn random_directive(rng: &mut ChaCha8Rng, max_prefix: usize, max_period: usize) -> String {
    let p = rng.gen_range(0..=max_prefix);
    let q = rng.gen_range(1..=max_period);
    let names = ['L', 'M', 'R'];
    let mut pick = |k: usize| (0..k).map(|_| names[rng.gen_range(0..3)]).collect::<String>();
    let prefix = pick(p);
    let period = pick(q);
    format!("{prefix}|{period}")
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0006);
    let mut worst = 0;
    let cases = 60;
    for _ in 0..cases {
        let d = random_directive(&mut rng, 8, 3);
        let sample = level0(&d, 200);
        let mut c = 0;
        for len in 1..=200 {
            let ones: Vec<usize> = sample.words_of_length(len).map(|w| w.iter().filter(|&&a| a == 1).count()).collect();
            if let (Some(hi), Some(lo)) = (ones.iter().max(), ones.iter().min()) {
                c = c.max(hi - lo);
            }
        }
        let lib = imbalance(&sample, 1, 200).unwrap().constant as usize;
        ensure(lib == c, || format!("{d}: library {lib}, oracle {c}"))?;
        ensure(c <= 2, || format!("{d}: letter imbalance {c}"))?;
        worst = worst.max(c);
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{cases} directives, largest letter imbalance {worst}"))
}

/// The block substitution built from scratch: images as lists of `m`-windows.
fn oracle_hat(sigma: &[Bytes], n: usize, m: usize, u: &[u8], prefix: bool, block: &[u8]) -> Vec<Bytes> {
    if prefix {
        let tail = [apply(sigma, &block[1..]), u.to_vec()].concat();
        let word = [sigma[block[0] as usize].clone(), tail[..m - 1].to_vec()].concat();
        word.windows(m).map(|w| w.to_vec()).collect()
    } else {
        let head = [u.to_vec(), apply(sigma, &block[..n - 1])].concat();
        let word = [head[head.len() - (m - 1)..].to_vec(), sigma[block[n - 1] as usize].clone()].concat();
        word.windows(m).map(|w| w.to_vec()).collect()
    }
}

fn windows(w: &[u8], m: usize) -> Vec<Bytes> {
    if w.len() < m {
        return Vec::new();
    }
    w.windows(m).map(|x| x.to_vec()).collect()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0007);
    let per_side = 1000;
    let mut checked = 0;
    for prefix in [true, false] {
        let mut done = 0;
        while done < per_side {
            let (k, kc) = (rng.gen_range(2..=3u8), rng.gen_range(2..=3u8));
            let sigma: Vec<Bytes> = (0..k)
                .map(|_| {
                    let len = rng.gen_range(0..=4);
                    (0..len).map(|_| rng.gen_range(0..kc)).collect()
                })
                .collect();
            let u: Bytes = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..kc)).collect();
            let n = rng.gen_range(1..=3);
            // Preconditions: the anchor condition and m ≤ min |σ(v)| + |u| + 1 over v of length n − 1.
            let anchored = sigma.iter().all(|img| {
                if prefix {
                    [img.clone(), u.clone()].concat().starts_with(&u)
                } else {
                    [u.clone(), img.clone()].concat().ends_with(&u)
                }
            });
            if !anchored {
                continue;
            }
            let shortest = sigma.iter().map(Vec::len).min().unwrap();
            let max_m = (n - 1) * shortest + u.len() + 1;
            let m = rng.gen_range(1..=max_m);
            let w: Bytes = (0..rng.gen_range(n..=n + 12)).map(|_| rng.gen_range(0..k)).collect();

            let coding_blocks = windows(&w, n);
            let hats: Vec<Vec<Bytes>> =
                coding_blocks.iter().map(|b| oracle_hat(&sigma, n, m, &u, prefix, b)).collect();
            let image = apply(&sigma, &w);
            let (lhs, rhs) = if prefix {
                let boundary = windows(&[apply(&sigma, &w[w.len() - (n - 1)..]), u.clone()].concat(), m);
                (windows(&[image, u.clone()].concat(), m), [hats.concat(), boundary].concat())
            } else {
                let boundary = windows(&[u.clone(), apply(&sigma, &w[..n - 1])].concat(), m);
                (windows(&[u.clone(), image].concat(), m), [boundary, hats.concat()].concat())
            };
            ensure(lhs == rhs, || format!("oracle identity fails: sigma {sigma:?}, u {u:?}, n {n}, m {m}, w {w:?}"))?;

            let dom = Alphabet::new((0..k).map(|i| i.to_string())).unwrap();
            let cod = Alphabet::new((0..kc).map(|i| i.to_string())).unwrap();
            let lib_sigma = Substitution::new(
                &dom,
                &cod,
                sigma.iter().map(|img| Word::new(&cod, img.iter().map(|&a| a as usize).collect()).unwrap()).collect(),
            )
            .unwrap();
            let lib_u = Word::new(&cod, u.iter().map(|&a| a as usize).collect()).unwrap();
            let side = if prefix { AnchorSide::Prefix } else { AnchorSide::Suffix };
            let hat = induced_block_substitution(&lib_sigma, n, m, &lib_u, side, &all_blocks(&dom, n))
                .map_err(|e| format!("library rejected a valid instance: {e}"))?;
            let lw = Word::new(&dom, w.iter().map(|&a| a as usize).collect()).unwrap();
            let (l, r) = hat.identity_sides(&lw).unwrap();
            ensure(l == r, || "library identity fails".into())?;
            let decode = |word: &Word| -> Vec<Bytes> {
                word.letters()
                    .iter()
                    .map(|&t| word.alphabet().decode_block(t).unwrap().iter().map(|&a| a as u8).collect())
                    .collect()
            };
            ensure(decode(&r) == rhs, || "library sides differ from the oracle".into())?;
            done += 1;
            checked += 1;
        }
    }
    Ok(format!("{checked} instances"))
}

fn shorter_ok(sets: &BTreeMap<usize, BTreeSet<Bytes>>, size: u8, label: &str) -> Result<(), String> {
    let c: Vec<u64> = (1..=4).map(|n| naive_constant(sets, size, n)).collect();
    for n in 2..=4usize {
        for k in 1..n {
            let bound = (size as u64).pow((n - k) as u32) * c[n - 1] + n as u64 - 1;
            ensure(c[k - 1] <= bound, || format!("{label}: C_{k} = {} > {bound}", c[k - 1]))?;
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0008);
    let cap = 30;
    let mut count = 0;
    // Thue-Morse from its own prefix and compared with the library sample.
    let tm = factor_sets(&[thue_morse_prefix(12)], cap);
    ensure(sample_sets(&level0("|M", cap)) == tm, || "Thue-Morse sample differs from the prefix factors".into())?;
    shorter_ok(&tm, 2, "|M")?;
    count += 1;
    for d in ["|LR", "|RL", "L|RRL", "|LLR", "R|LRR", "|LRRR"] {
        let sample = level0(d, cap);
        let sets = sample_sets(&sample);
        shorter_ok(&sets, 2, d)?;
        for n in 1..=4 {
            let lib = imbalance(&sample, n, cap).unwrap().constant;
            ensure(lib == naive_constant(&sets, 2, n), || format!("{d}: library C_{n} = {lib}"))?;
        }
        count += 1;
    }
    for i in 0..20 {
        let size = if i % 2 == 0 { 2 } else { 3 };
        let words: Vec<Bytes> =
            (0..rng.gen_range(1..=3)).map(|_| (0..rng.gen_range(4..=24)).map(|_| rng.gen_range(0..size)).collect()).collect();
        let sets = factor_sets(&words, cap);
        shorter_ok(&sets, size, &format!("random {i}"))?;
        let a = Alphabet::new((0..size).map(|x| x.to_string())).unwrap();
        let lw: Vec<Word> = words.iter().map(|w| Word::new(&a, w.iter().map(|&x| x as usize).collect()).unwrap()).collect();
        let sample = factorial_closure(&a, &lw, cap).unwrap();
        for n in 1..=4 {
            let lib = imbalance(&sample, n, cap).unwrap().constant;
            ensure(lib == naive_constant(&sets, size, n), || format!("random {i}: library C_{n} = {lib}"))?;
        }
        count += 1;
    }
    Ok(format!("{count} samples, k < n <= 4"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0009);
    let mut pairs = 0;
    let mut worst = 0;
    for d in ["|M", "|LR", "L|RRL", "|MRL"] {
        let sample = level0(d, 60);
        let sets = sample_sets(&sample);
        let members: BTreeSet<Bytes> = sets.values().flatten().cloned().collect();
        let c = naive_constant(&sets, 2, 1);
        for t in ['L', 'M', 'R'] {
            let sigma = tms_images(t);
            let norm = sigma.iter().map(Vec::len).max().unwrap();
            let bound = (2 + 2 * c as usize) * norm - 2;
            let images: Vec<Bytes> = sets[&60].iter().map(|w| apply(&sigma, w)).collect();
            let image_sets = factor_sets(&images, 30);
            let lib_sigma = Tms::from_name(&t.to_string()).unwrap().substitution();
            for _ in 0..60 {
                let len = rng.gen_range(1..=30);
                let words: Vec<&Bytes> = image_sets[&len].iter().collect();
                let (w, wp) = (words[rng.gen_range(0..words.len())], words[rng.gen_range(0..words.len())]);
                let to_word = |b: &Bytes| Word::new(&Alphabet::binary(), b.iter().map(|&a| a as usize).collect()).unwrap();
                let (ww, wwp) = (to_word(w), to_word(wp));
                let (da, db) = decompose_pair(&ww, &wwp, &lib_sigma, &sample).map_err(|e| e.to_string())?;
                ensure(da.y.len() == db.y.len(), || format!("{d}, {t}: |y| differ"))?;
                for (dec, orig) in [(&da, &ww), (&db, &wwp)] {
                    let raw = wxyz_decompose(orig, &lib_sigma, &sample).map_err(|e| e.to_string())?;
                    let orig = bytes(orig.letters());
                    let (x, y, z) = (bytes(raw.x.letters()), bytes(raw.y.letters()), bytes(raw.z.letters()));
                    ensure([x.clone(), apply(&sigma, &y), z.clone()].concat() == orig, || format!("{d}, {t}: bad split"))?;
                    ensure(y.is_empty() || members.contains(&y), || format!("{d}, {t}: y not in the sample"))?;
                    let interior = x.is_empty()
                        && y.is_empty()
                        && orig.len() < norm
                        && sigma.iter().any(|img| contains(img, &orig));
                    ensure(interior || extends(&sigma, &members, &x, &y, &z), || {
                        format!("{d}, {t}: {} has no admissible extension", show(&orig))
                    })?;
                    // The aligned form keeps x and a prefix of y.
                    let (ax, ay, az) = (bytes(dec.x.letters()), bytes(dec.y.letters()), bytes(dec.z.letters()));
                    ensure(ax == x && y.starts_with(&ay), || format!("{d}, {t}: alignment changed x or y"))?;
                    ensure([ax.clone(), apply(&sigma, &ay), az.clone()].concat() == orig, || "bad aligned split".into())?;
                    let border = ax.len() + az.len();
                    worst = worst.max(border);
                    ensure(border <= bound, || format!("{d}, {t}: |xz| = {border} > {bound}"))?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs, largest |xz| = {worst}"))
}

/// `a y b` lies in the sample for some image `σ(a)` ending strictly with `x`
/// and some `σ(b)` starting strictly with `z`; empty borders drop the letter.
fn extends(sigma: &[Bytes], members: &BTreeSet<Bytes>, x: &[u8], y: &[u8], z: &[u8]) -> bool {
    let letters = 0..sigma.len() as u8;
    let heads: Vec<Option<u8>> = if x.is_empty() {
        vec![None]
    } else {
        letters.clone().filter(|&a| sigma[a as usize].len() > x.len() && sigma[a as usize].ends_with(x)).map(Some).collect()
    };
    let tails: Vec<Option<u8>> = if z.is_empty() {
        vec![None]
    } else {
        letters.filter(|&b| sigma[b as usize].len() > z.len() && sigma[b as usize].starts_with(z)).map(Some).collect()
    };
    heads.iter().any(|a| {
        tails.iter().any(|b| {
            let ext: Bytes = a.iter().copied().chain(y.iter().copied()).chain(b.iter().copied()).collect();
            ext.is_empty() || members.contains(&ext)
        })
    })
}

fn two_fold_names() -> Vec<String> {
    let mut out: Vec<String> = ["L", "M", "R"].iter().map(|s| s.to_string()).collect();
    for a in ['L', 'M', 'R'] {
        for b in ['L', 'M', 'R'] {
            out.push(format!("{a}{b}"));
        }
    }
    out
}

fn criterion_10() -> Outcome {
    let cap = 40;
    let mut cases = 0;
    for d in ["|M", "|LR", "L|RRL", "|MRL", "|RM"] {
        let sample = level0(d, cap);
        let sets = sample_sets(&sample);
        let c: Vec<u64> = (1..=3).map(|n| naive_constant(&sets, 2, n)).collect();
        for name in two_fold_names() {
            let sigma = compose(&name);
            let norm = sigma.iter().map(Vec::len).max().unwrap();
            let images: Vec<Bytes> = sets[&cap].iter().map(|w| apply(&sigma, w)).collect();
            let image_sets = factor_sets(&images, cap);
            let lib_image = sample.image(&tms::compose_word(&tms_word(&name)), cap).unwrap();
            ensure(sample_sets(&lib_image) == image_sets, || format!("{d}, {name}: image sample differs"))?;
            let letter = naive_constant(&image_sets, 2, 1) as usize;
            let letter_bound = 2 * (1 + c[0] as usize * 2) * norm - 2;
            ensure(letter <= letter_bound, || format!("{d}, {name}: C_1 = {letter} > {letter_bound}"))?;
            for n in 2..=3usize {
                let got = naive_constant(&image_sets, 2, n) as usize;
                let blocks = sets[&n].len();
                let bound = (2 + c[0] as usize * 2) * norm - 2 + (n - 1) * (norm - 1) + c[n - 1] as usize * blocks * norm;
                ensure(got <= bound, || format!("{d}, {name}: C_{n} = {got} > {bound}"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} images, factor lengths 1..3"))
}

fn tms_word(name: &str) -> Vec<Tms> {
    name.chars().filter(|&c| c != 'I').map(|c| Tms::from_name(&c.to_string()).unwrap()).collect()
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let sets = factor_sets(&[thue_morse_prefix(14)], 100);
    let lib = sample_sets(&level0("|M", 100));
    ensure(lib == sets, || "Thue-Morse sample up to length 100 differs from the prefix factors".into())?;
    let mut names = Vec::new();
    for len in 1..=3 {
        let mut acc = vec![String::new()];
        for _ in 0..len {
            acc = acc.into_iter().flat_map(|s| "ILMR".chars().map(move |c| format!("{s}{c}"))).collect();
        }
        names.extend(acc);
    }
    let distinct: BTreeSet<Vec<Bytes>> = names.iter().map(|n| compose(n)).collect();
    let mut checked = 0u64;
    for name in &names {
        let sigma = compose(name);
        let pattern = apply(&sigma, &[0, 1, 1]);
        for words in sets.values() {
            for w in words {
                let lhs = count(&apply(&sigma, w), &pattern);
                let rhs = count(w, &[0, 1, 1]);
                ensure(lhs == rhs, || format!("{name}: {} gives {lhs} vs {rhs}", show(w)))?;
                let ones = count(w, &[1, 1]);
                ensure(ones >= rhs && ones - rhs <= 1, || format!("{}: |w|_11 - |w|_011 out of range", show(w)))?;
                checked += 1;
            }
        }
        let report = tms::check_rec_identity(&tms::compose_word(&tms_word(name)), &level0("|M", 100)).unwrap();
        ensure(report.is_clean(), || format!("library reports violations for {name}"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "{} compositions ({} distinct), {checked} word checks, 0 violations",
        names.len(),
        distinct.len()
    ))
}

fn criterion_12() -> Outcome {
    let cap = 400;
    let mut periods = Vec::new();
    for len in 1..=3 {
        let mut acc = vec![String::new()];
        for _ in 0..len {
            acc = acc.into_iter().flat_map(|s| "LMR".chars().map(move |c| format!("{s}{c}"))).collect();
        }
        periods.extend(acc);
    }
    let tm_sets = factor_sets(&[thue_morse_prefix(14)], cap);
    let mut balanced = 0;
    for p in &periods {
        let d = TmsDirective::parse(&format!("|{p}")).unwrap();
        let verdict = tms::classify(&d).verdict;
        let m_only = p.chars().all(|c| c == 'M');
        ensure((verdict == tms::Verdict::NotFactorBalanced) == m_only, || format!("|{p}: {verdict}"))?;
        let sample = level0(&format!("|{p}"), cap);
        let sets = sample_sets(&sample);
        let curve = naive_curve(&sets, 2, 2);
        ensure(imbalance(&sample, 2, cap).unwrap().curve == curve, || format!("|{p}: library curve differs"))?;
        if m_only {
            ensure(sets == tm_sets, || format!("|{p}: sample is not the Thue-Morse language"))?;
            let oracle = oracle_witnesses(6);
            let mut diffs = Vec::new();
            for n in 1..=3usize {
                let (w, wp) = &oracle[2 * n - 1];
                let text = thue_morse_prefix(4 * n + 1);
                ensure(contains(&text, w) && contains(&text, wp), || "witness not a factor".into())?;
                diffs.push(count(w, &[0, 0]) as i64 - count(wp, &[0, 0]) as i64);
                if w.len() <= cap {
                    ensure(curve[w.len()] as i64 >= diffs[n - 1], || format!("curve misses pair {}", 2 * n))?;
                }
            }
            ensure(diffs == [1, 2, 3], || format!("witness differences {diffs:?}"))?;
        } else {
            let early = curve[..=cap / 2].iter().max().unwrap();
            let late = curve[cap / 2 + 1..].iter().max().unwrap();
            ensure(late <= early, || format!("|{p}: {late} after length {} exceeds {early}", cap / 2))?;
            balanced += 1;
        }
    }
    Ok(format!("{} periods, {balanced} bounded curves, 3 M-only tails with growing witnesses", periods.len()))
}

/// Normalized Perron vector of a 2×2 non-negative integer matrix with an integer
/// dominant eigenvalue, if it has one.
fn perron_2x2(m: [[i64; 2]; 2]) -> Option<[BigRational; 2]> {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let disc = (a - d) * (a - d) + 4 * b * c;
    let root = (disc as f64).sqrt().round() as i64;
    if root * root != disc || (a + d + root) % 2 != 0 || b == 0 || c == 0 {
        return None;
    }
    let lambda = (a + d + root) / 2;
    let (x, y) = (b, lambda - a);
    let total = BigInt::from(x + y);
    Some([BigRational::new(x.into(), total.clone()), BigRational::new(y.into(), total)])
}

fn incidence(images: &[Bytes]) -> [[i64; 2]; 2] {
    let mut m = [[0; 2]; 2];
    for (col, img) in images.iter().enumerate() {
        for &a in img {
            m[a as usize][col] += 1;
        }
    }
    m
}

fn criterion_13() -> Outcome {
    let registry = tms::registry();
    let l = Tms::L.substitution();
    let m_l = incidence(&tms_images('L'));
    let mut exact = 0;
    for p in ["M", "LM", "ML", "MM", "MR", "RM", "LR", "RL"] {
        let tau = compose(p);
        let Some(f_pre) = perron_2x2(incidence(&tau)) else { continue };
        // Image frequency: M_L f, normalized.
        let pushed: Vec<BigRational> = (0..2)
            .map(|r| (0..2).map(|c| BigRational::from(BigInt::from(m_l[r][c])) * &f_pre[c]).sum())
            .collect();
        let total: BigRational = pushed.iter().sum();
        let f_img: Vec<BigRational> = pushed.iter().map(|x| x / &total).collect();

        let pre = DirectiveSequence::parse(&format!("|{p}"), &registry).unwrap();
        let img = DirectiveSequence::parse(&format!("L|{p}"), &registry).unwrap();
        let lib_pre = sadic_core::balance::substitutive_frequency(&pre, 0).map_err(|e| e.to_string())?;
        let lib_img = sadic_core::balance::substitutive_frequency(&img, 0).map_err(|e| e.to_string())?;
        ensure(lib_pre.exact && lib_pre.frequency.values() == &f_pre[..], || format!("|{p}: preimage frequency"))?;
        ensure(lib_img.exact && lib_img.frequency.values() == &f_img[..], || format!("L|{p}: image frequency"))?;
        let lifted = lift_frequency(&lib_img.frequency, &l).map_err(|e| e.to_string())?;
        // M_L⁻¹ f_img = f_pre / total, so the lift sums to 1/total.
        let sum: BigRational = lifted.values.iter().sum();
        ensure(sum == BigRational::from(BigInt::from(1)) / &total, || format!("|{p}: lifted sum {sum}"))?;
        ensure(lifted.normalized == (total == BigRational::from(BigInt::from(1))), || "normalization flag".into())?;
        let rescaled = lifted.rescaled().map_err(|e| e.to_string())?;
        ensure(rescaled.values() == &f_pre[..], || format!("|{p}: lifted frequency differs"))?;
        exact += 1;
    }
    ensure(exact >= 3, || format!("only {exact} directives with integer Perron roots"))?;
    Ok(format!("{exact} directives lifted exactly through M_L"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("block substitution of M on 2-blocks", criterion_1),
        ("eigenpairs of the block incidence matrix", criterion_2),
        ("Thue-Morse witness differences", criterion_3),
        ("closed forms of the witness abelianizations", criterion_4),
        ("length-2 imbalance growth of Thue-Morse", criterion_5),
        ("letter-2-balance of {L, M, R} languages", criterion_6),
        ("block coding identity", criterion_7),
        ("imbalance of shorter lengths", criterion_8),
        ("decomposition border bound", criterion_9),
        ("imbalance of image samples", criterion_10),
        ("occurrences of s(011)", criterion_11),
        ("classifier consistency", criterion_12),
        ("frequency lifting", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
