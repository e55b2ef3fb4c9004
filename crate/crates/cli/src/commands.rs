use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qmark::farey::minkowski_sequence;
use qmark::measure::empirical_measure;
use qmark::moments::{solve_moments, MomentVector, SystemVariant};
use qmark::numerics::{format_fixed, format_real, parse_real, BigReal, PrecisionContext, Rational};
use qmark::qfunc::{q_rational, q_real};
use qmark::recurrence::{
    chebyshev, geometric_means, jacobi_zeros, nevai_diagnostics, stieltjes, RecurrenceCoefficients,
};
use qmark::{Error, Result};
use serde_json::{json, Value};

use crate::cache;
use crate::manifest::RunManifest;
use crate::{RecurMethod, SeqFormat};

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| ((*k).to_owned(), v.clone())).collect()
}

/// Writes to `out` with a manifest, or to stdout.
fn emit(out: Option<&Path>, bytes: &[u8], manifest: RunManifest, started: Instant) -> Result<()> {
    match out {
        Some(path) => manifest.write_with(path, bytes, started.elapsed().as_secs_f64())?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

pub fn seq(n: u32, format: SeqFormat, out: Option<&Path>) -> Result<()> {
    let started = Instant::now();
    let seq = minkowski_sequence(n)?;
    let mut buf = Vec::new();
    let format_name = match format {
        SeqFormat::Csv => {
            seq.write_csv(&mut buf)?;
            "csv"
        }
        SeqFormat::Json => {
            seq.write_json(&mut buf)?;
            buf.push(b'\n');
            "json"
        }
    };
    let manifest = RunManifest::new("seq", params(&[("N", n.into()), ("format", format_name.into())]), 0);
    emit(out, &buf, manifest, started)
}

/// Drops trailing zeros of a fixed-point rendering.
fn trim_fixed(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_owned()
}

pub fn q(x: &str, digits: u32) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    if x.contains('/') {
        let r: Rational = x.trim().parse().map_err(|e| Error::Parse(format!("{x:?}: {e}")))?;
        let v = q_rational(&r)?;
        writeln!(stdout, "{v}")?;
        writeln!(stdout, "{}", v.to_decimal())?;
    } else {
        let ctx = PrecisionContext::new(digits)?;
        let value = q_real(&parse_real(x, &ctx)?, &ctx)?;
        writeln!(stdout, "{}", trim_fixed(format_fixed(&value, digits as usize)))?;
    }
    Ok(())
}

fn moments_cache_name(variant: SystemVariant, k: usize, terms: usize, digits: u32) -> String {
    let key = cache::cache_key(&json!({
        "kind": "moments",
        "variant": variant.to_string(),
        "K": k,
        "terms": terms,
        "digits": digits,
    }));
    format!("moments-{}.json", &key[..32])
}

pub fn moments(variant: SystemVariant, k: usize, terms: usize, digits: u32, out: Option<&Path>) -> Result<()> {
    let started = Instant::now();
    let ctx = PrecisionContext::new(digits)?;
    let name = moments_cache_name(variant, k, terms, digits);
    let cached = cache::lookup(&name).and_then(|bytes| {
        let m = MomentVector::read_json(bytes.as_slice()).ok()?;
        let p = m.provenance();
        (p.system_size == k && p.series_terms == terms && p.digits == digits).then_some((bytes, m))
    });
    let hit = cached.is_some();
    let (bytes, m) = match cached {
        Some(found) => found,
        None => {
            let m = solve_moments(variant, k, terms, &ctx)?;
            let mut bytes = Vec::new();
            m.write_json(&mut bytes)?;
            bytes.push(b'\n');
            (bytes, m)
        }
    };
    let cache_path = if hit { cache::cache_dir().join(&name) } else { cache::store(&name, &bytes)? };
    let manifest = RunManifest::new(
        "moments",
        params(&[
            ("variant", variant.to_string().into()),
            ("K", k.into()),
            ("terms", terms.into()),
            ("digits", digits.into()),
        ]),
        digits,
    );
    if let Some(path) = out {
        manifest.write_with(path, &bytes, started.elapsed().as_secs_f64())?;
    }
    let gauge = m.m1_error().map(|e| e.to_string_radix(10, Some(6))).unwrap_or_default();
    println!("|m_1 - 1/2| = {gauge}");
    println!("cache: {} ({})", cache_path.display(), if hit { "hit" } else { "stored" });
    Ok(())
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

pub fn recur(
    method: RecurMethod,
    n: Option<u32>,
    moments_file: Option<&Path>,
    n_max: usize,
    digits: Option<u32>,
    out: Option<&Path>,
) -> Result<()> {
    let started = Instant::now();
    let (rc, mut parameters, digits) = match method {
        RecurMethod::Stieltjes => {
            let level = n.ok_or_else(|| Error::Parse("--N is required for stieltjes".into()))?;
            let digits = digits.unwrap_or(PrecisionContext::STIELTJES_DIGITS);
            let ctx = PrecisionContext::new(digits)?;
            let rc = stieltjes(&empirical_measure(level)?, n_max, &ctx)?;
            (rc, params(&[("method", "stieltjes".into()), ("N", level.into())]), digits)
        }
        RecurMethod::Chebyshev => {
            let path = moments_file.ok_or_else(|| Error::Parse("--moments-file is required for chebyshev".into()))?;
            let bytes = std::fs::read(path)?;
            let m = MomentVector::read_json(bytes.as_slice())?;
            let digits = digits.unwrap_or(PrecisionContext::MOMENTS_DIGITS);
            let ctx = PrecisionContext::new(digits)?;
            let rc = chebyshev(&m, n_max, &ctx)?;
            let p = params(&[
                ("method", "chebyshev".into()),
                ("moments_sha256", cache::sha256_hex(&bytes).into()),
            ]);
            (rc, p, digits)
        }
    };
    parameters.insert("n_max".into(), n_max.into());
    parameters.insert("digits".into(), digits.into());
    let mut buf = Vec::new();
    if out.is_some_and(is_json) {
        rc.write_json(&mut buf)?;
        buf.push(b'\n');
    } else {
        rc.write_csv(&mut buf)?;
    }
    eprintln!("trusted prefix: {} of {}", rc.trusted_prefix(), rc.len());
    emit(out, &buf, RunManifest::new("recur", parameters, digits), started)
}

fn strings(values: &[BigReal]) -> Vec<String> {
    values.iter().map(format_real).collect()
}

fn sibling(report: &Path, suffix: &str) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
    let mut name = stem;
    name.push(suffix);
    report.with_file_name(name)
}

pub fn analyze(coeffs_file: &Path, report: &Path, zeros: &[usize], digits: u32) -> Result<()> {
    let started = Instant::now();
    let bytes = std::fs::read(coeffs_file)?;
    let looks_json = bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{');
    let rc = if looks_json {
        RecurrenceCoefficients::read_json(bytes.as_slice())?
    } else {
        RecurrenceCoefficients::read_csv(bytes.as_slice(), &PrecisionContext::new(digits)?)?
    };
    let ctx = PrecisionContext::new(rc.provenance().digits)?;
    let nevai = nevai_diagnostics(&rc)?;
    let mut zero_map = serde_json::Map::new();
    for &n in zeros {
        zero_map.insert(n.to_string(), strings(&jacobi_zeros(&rc, n, &ctx)?).into());
    }
    let doc = json!({
        "coefficients_sha256": cache::sha256_hex(&bytes),
        "trusted_prefix": rc.trusted_prefix(),
        "count": nevai.count,
        "mean_a2": format_real(&nevai.mean_a2),
        "min_a2": format_real(&nevai.min_a2),
        "max_a2": format_real(&nevai.max_a2),
        "geometric_mean": format_real(&nevai.geometric_mean),
        "max_b_deviation": format_real(&nevai.max_b_deviation),
        "reference_a2": format_real(&nevai.reference_a2),
        "reference_a": format_real(&nevai.reference_a),
        "geometric_means": strings(&geometric_means(&rc)),
        "running_means": strings(&nevai.running_means),
        "discrepancy": strings(&nevai.discrepancy),
        "zeros": zero_map,
    });
    let mut buf = serde_json::to_vec_pretty(&doc)?;
    buf.push(b'\n');

    let mut a2_plot = Vec::new();
    rc.write_a2_plot(&mut a2_plot)?;
    cache::write_atomic(&sibling(report, ".a2.dat"), &a2_plot)?;
    let mut g_plot = Vec::new();
    rc.write_geometric_plot(&mut g_plot)?;
    cache::write_atomic(&sibling(report, ".g.dat"), &g_plot)?;

    let manifest = RunManifest::new(
        "analyze",
        params(&[
            ("coeffs_sha256", cache::sha256_hex(&bytes).into()),
            ("zeros", zeros.to_vec().into()),
            ("digits", digits.into()),
        ]),
        rc.provenance().digits,
    );
    manifest.write_with(report, &buf, started.elapsed().as_secs_f64())?;
    println!("{nevai}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimming() {
        assert_eq!(trim_fixed("0.5000".into()), "0.5");
        assert_eq!(trim_fixed("1.000".into()), "1");
        assert_eq!(trim_fixed("100".into()), "100");
    }

    #[test]
    fn cache_names_differ_by_parameters() {
        let a = moments_cache_name(SystemVariant::A, 10, 20, 30);
        assert_eq!(a, moments_cache_name(SystemVariant::A, 10, 20, 30));
        assert_ne!(a, moments_cache_name(SystemVariant::B, 10, 20, 30));
        assert_ne!(a, moments_cache_name(SystemVariant::A, 11, 20, 30));
    }

    #[test]
    fn plot_paths() {
        assert_eq!(sibling(Path::new("d/r.json"), ".a2.dat"), PathBuf::from("d/r.a2.dat"));
    }
}
