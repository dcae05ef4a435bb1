use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use sadic_core::balance::{shorter_length_bound, substitutive_frequency, PerronFrequency};
use sadic_core::language::{is_everywhere_growing, GrowthEvidence, DEFAULT_BUDGET};
use sadic_core::tms::{self, TmsDirective, V_MINUS1};
use sadic_core::{
    balance_report, frequency_deviation, frequency_vector, sample_level_language, DirectiveSequence, Error,
    LanguageSample, LengthBalance, SampleMode, SampleOptions, Substitution, Word,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{rational, rationals, CheckResult, Report};
use crate::CliError;

/// Horizon for the empirical growth test on directives without a period.
const GROWTH_HORIZON: usize = 64;

pub fn registry(config: &RunConfig) -> Result<BTreeMap<String, Substitution>, CliError> {
    let mut registry = tms::registry();
    for (name, spec) in &config.register {
        if registry.contains_key(name) {
            return Err(CliError::Usage(format!("{name} is a built-in substitution")));
        }
        let sigma = Substitution::parse_inferred(spec)?;
        registry.insert(name.clone(), sigma);
    }
    Ok(registry)
}

fn directive_text(config: &RunConfig) -> Result<&str, CliError> {
    config.directive.as_deref().ok_or_else(|| CliError::Usage("--directive is required".into()))
}

pub fn parse_directive(config: &RunConfig) -> Result<DirectiveSequence, CliError> {
    let text = directive_text(config)?;
    let d = DirectiveSequence::parse(text, &registry(config)?)?;
    if !d.is_eventually_periodic() {
        return Err(CliError::Usage(format!("directive {text:?} needs a non-empty period after '|'")));
    }
    Ok(d)
}

fn tms_directive(config: &RunConfig) -> Result<Option<TmsDirective>, CliError> {
    let text = directive_text(config)?;
    let is_tms = text.chars().all(|c| c.is_whitespace() || "LMR|".contains(c));
    if !is_tms {
        return Ok(None);
    }
    Ok(Some(TmsDirective::parse(text)?))
}

fn check(name: &str, statement: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), statement: statement.into(), passed, detail: detail.into() }
}

fn mode_name(mode: SampleMode) -> &'static str {
    match mode {
        SampleMode::Closure => "closure",
        SampleMode::Exact => "exact",
        SampleMode::Window => "window",
        SampleMode::Image => "image",
    }
}

pub fn sample_json(sample: &LanguageSample) -> Value {
    let meta = sample.meta();
    json!({
        "mode": mode_name(meta.mode),
        "depth": meta.depth,
        "window": meta.window,
        "exact": meta.exact,
        "saturated": meta.saturated,
        "max_length": sample.max_length(),
        "longest": sample.longest(),
        "total_words": sample.total_words(),
        "counts": (1..=sample.max_length()).map(|l| sample.count(l)).collect::<Vec<_>>(),
    })
}

pub fn length_balance_json(b: &LengthBalance) -> Value {
    let witness = b.witness.as_ref().map(|w| {
        json!({
            "w": w.w.to_string(),
            "w_prime": w.w_prime.to_string(),
            "v": w.v.to_string(),
            "count": w.count,
            "count_prime": w.count_prime,
        })
    });
    json!({
        "factor_length": b.factor_length,
        "constant": b.constant,
        "witness": witness,
        "curve": b.curve,
    })
}

fn perron_json(p: &PerronFrequency) -> Value {
    json!({
        "values": rationals(p.frequency.values()),
        "exact": p.exact,
        "eigenvalue_bounds": [rational(&p.eigenvalue_bounds.0), rational(&p.eigenvalue_bounds.1)],
    })
}

fn growth_json(d: &DirectiveSequence) -> Value {
    let cert = is_everywhere_growing(d, GROWTH_HORIZON);
    let evidence = match cert.evidence {
        GrowthEvidence::Exact { power } => json!({ "kind": "exact", "power": power }),
        GrowthEvidence::Empirical { horizon, min_length, half_min_length } => json!({
            "kind": "empirical",
            "horizon": horizon,
            "min_length": min_length.to_string(),
            "half_min_length": half_min_length.to_string(),
        }),
    };
    json!({ "everywhere_growing": cert.growing, "evidence": evidence })
}

pub fn analyze(config: &RunConfig) -> Result<Report, CliError> {
    let d = parse_directive(config)?;
    let tms = tms_directive(config)?;
    let cap = config.max_length;
    let options = SampleOptions { depth: config.depth, window: config.window, budget: DEFAULT_BUDGET };
    let sample = sample_level_language(&d, 0, cap, &options)?;
    let report = balance_report(&sample, config.nmax, cap)?;
    let f = frequency_vector(&sample)?;
    let deviation = frequency_deviation(&sample, &f)?;
    let perron = match substitutive_frequency(&d, 0) {
        Ok(p) => Some(p),
        Err(Error::PerronUnavailable(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut checks = vec![check(
        "factorial",
        "every factor of a sampled word is sampled",
        sample.is_factorial(),
        format!("{} words", sample.total_words()),
    )];
    let size = sample.alphabet().len();
    let mut worst = String::new();
    let mut bounded = true;
    for hi in &report.lengths {
        for lo in report.lengths.iter().filter(|l| l.factor_length < hi.factor_length) {
            let bound = shorter_length_bound(size, hi.factor_length, lo.factor_length, hi.constant);
            if lo.constant as u128 > bound {
                bounded = false;
                worst = format!("C_{} = {} > {bound}", lo.factor_length, lo.constant);
            }
        }
    }
    checks.push(check(
        "shorter-lengths",
        "C_k <= (#A)^(n-k) C_n + n - 1 for k < n <= nmax",
        bounded,
        worst,
    ));
    let letter = report.letter_constant().unwrap_or(0);
    let twice = &deviation * BigRational::from(BigInt::from(2));
    checks.push(check(
        "deviation",
        "the letter imbalance is at most twice the frequency deviation",
        BigRational::from(BigInt::from(letter)) <= twice,
        format!("C_1 = {letter}, deviation = {deviation}"),
    ));
    if tms.is_some() {
        checks.push(check(
            "letter-2-balance",
            "sequences over {L, M, R} generate letter-2-balanced languages",
            letter <= 2,
            format!("C_1 = {letter}"),
        ));
    }

    let classification = tms.as_ref().map(|t| {
        let c = tms::classify(t);
        json!({ "primitive": tms::is_primitive(t), "verdict": c.verdict.to_string(), "reason": c.reason.to_string() })
    });
    let results = json!({
        "directive": d.to_string(),
        "growth": growth_json(&d),
        "sample": sample_json(&sample),
        "balance": report.lengths.iter().map(length_balance_json).collect::<Vec<_>>(),
        "frequency": {
            "empirical": rationals(f.values()),
            "deviation": rational(&deviation),
            "perron": perron.as_ref().map(perron_json),
        },
        "classification": classification,
    });
    Ok(Report::new(config, results, checks))
}

pub fn classify(config: &RunConfig) -> Result<Report, CliError> {
    let text = directive_text(config)?;
    let d = match tms_directive(config)? {
        Some(d) => d,
        None => {
            // Surface unknown names before complaining about non-TMS ones.
            parse_directive(config)?;
            return Err(CliError::Usage(format!("{text:?} uses substitutions other than L, M, R")));
        }
    };
    let c = tms::classify(&d);
    let names = |v: &[tms::Tms]| v.iter().map(|t| t.name()).collect::<String>();
    let results = json!({
        "directive": d.to_string(),
        "prefix": names(&d.prefix),
        "period": names(&d.period),
        "primitive": tms::is_primitive(&d),
        "verdict": c.verdict.to_string(),
        "reason": c.reason.to_string(),
    });
    Ok(Report::new(config, results, Vec::new()))
}

fn ell2_json(w: &Word) -> Result<Value, CliError> {
    Ok(json!(tms::ell2(w)?))
}

/// Largest witness index whose membership certificate fits the letter budget.
pub const MAX_WITNESS_INDEX: usize = 11;

pub fn witness(config: &RunConfig) -> Result<Report, CliError> {
    let n = config.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    if n == 0 {
        return Err(CliError::Usage("--n is out of range: witness indices start at 1".into()));
    }
    if n > MAX_WITNESS_INDEX {
        return Err(Error::ResourceLimit(format!(
            "certifying w_{n} needs M^{}(0), more than {DEFAULT_BUDGET} letters",
            2 * n + 1
        ))
        .into());
    }
    let max_k = DEFAULT_BUDGET.ilog2() as usize;
    let pairs = tms::witness_pairs(n)?;
    let mut checks = Vec::new();
    let mut curve = Vec::new();
    for p in &pairs {
        let (a, b) = (tms::ell2(&p.w)?, tms::ell2(&p.w_prime)?);
        let difference: Vec<i64> = (0..4).map(|i| a[i] - b[i]).collect();
        curve.push(json!({
            "index": p.index,
            "length": p.w.len(),
            "ell2_w": a,
            "ell2_w_prime": b,
            "difference": difference,
        }));
        if p.index % 2 == 0 {
            let half = (p.index / 2) as i64;
            let expected: Vec<i64> = V_MINUS1.iter().map(|x| x * half).collect();
            checks.push(check(
                &format!("difference-{}", p.index),
                "l2(w_2n) - l2(w'_2n) = n (1, -1, -1, 1)",
                difference == expected,
                format!("{difference:?}"),
            ));
        }
    }
    let pair = pairs.last().expect("n >= 1");
    let expected_len = tms::witness_length(n);
    checks.push(check(
        "length",
        "|w_n| = |w'_n| = (4^n + 2)/3",
        pair.w.len() as u128 == expected_len && pair.w_prime.len() as u128 == expected_len,
        format!("{} and {}", pair.w.len(), pair.w_prime.len()),
    ));
    let cert = |w: &Word| -> Result<Value, CliError> {
        Ok(match tms::thue_morse_certificate(w, max_k)? {
            Some(c) => json!({ "k": c.k, "position": c.position }),
            None => Value::Null,
        })
    };
    let (cw, cwp) = (cert(&pair.w)?, cert(&pair.w_prime)?);
    checks.push(check(
        "membership",
        "both words are factors of M^k(0) for some k",
        !cw.is_null() && !cwp.is_null(),
        String::new(),
    ));
    let results = json!({
        "pair": {
            "index": n,
            "w": pair.w.to_string(),
            "w_prime": pair.w_prime.to_string(),
            "length": pair.w.len(),
            "ell2_w": ell2_json(&pair.w)?,
            "ell2_w_prime": ell2_json(&pair.w_prime)?,
            "difference": curve.last().map(|c| c["difference"].clone()),
        },
        "certificates": { "w": cw, "w_prime": cwp },
        "curve": curve,
    });
    Ok(Report::new(config, results, checks))
}
