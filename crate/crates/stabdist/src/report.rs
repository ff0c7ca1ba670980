//! Stable serialization of results: JSON documents carrying a schema version
//! field and RFC-4180 CSV with a mandatory header row.
//!
//! Conventions of the `stabdist/1` schema family: arbitrary-precision
//! integers are decimal strings, exact rationals are `{"num": "...",
//! "den": "..."}` objects (or `"num/den"` in single-column contexts), floats
//! are IEEE-754 doubles. Neither JSON nor CSV ever truncates a value; only
//! pretty console output caps digit counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::counts::{rational_to_f64, EntanglementDistribution, PageAverage, TailReport};
use crate::error::{Error, Result};
use crate::sampling::{ChiSquare, EmpiricalHistogram, SAMPLER_VERSION};

/// Schema version stamped into every JSON document.
pub const SCHEMA_VERSION: &str = "stabdist/1";

/// Exact rational as a JSON object of decimal strings.
pub fn rational_json(r: &BigRational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

/// Exact rational as the compact `num/den` string used in single-column
/// contexts (CSV cells, CLI flags).
pub fn rational_compact(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `p/q` or a plain integer `p` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational numerator in {s:?}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Cap a decimal string for console display: at most 40 digits, then an
/// explicit `...(k digits)` marker. Machine formats never use this.
pub fn display_big(digits: &str) -> String {
    const CAP: usize = 40;
    if digits.len() <= CAP {
        digits.to_string()
    } else {
        format!("{}...({} digits)", &digits[..CAP], digits.len())
    }
}

fn csv_from_rows(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(header)
        .and_then(|()| rows.iter().try_for_each(|r| writer.write_record(r)))
        .map_err(|e| Error::Parse(format!("csv write failed: {e}")))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Parse(format!("csv flush failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

// ---------------------------------------------------------------------------
// distributions
// ---------------------------------------------------------------------------

pub fn distribution_json(d: &EntanglementDistribution) -> Value {
    let rows: Vec<Value> = d
        .counts()
        .iter()
        .zip(d.probs())
        .enumerate()
        .map(|(e, (count, prob))| {
            json!({
                "e": e,
                "count": count.to_string(),
                "prob": rational_json(prob),
                "prob_float": rational_to_f64(prob),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "distribution",
        "n": d.total_qubits(),
        "na": d.side_a(),
        "total_states": d.total_states().to_string(),
        "rows": rows,
    })
}

pub fn distribution_csv(d: &EntanglementDistribution) -> Result<String> {
    let rows = d
        .counts()
        .iter()
        .zip(d.probs())
        .enumerate()
        .map(|(e, (count, prob))| {
            vec![
                e.to_string(),
                count.to_string(),
                prob.numer().to_string(),
                prob.denom().to_string(),
                rational_to_f64(prob).to_string(),
            ]
        })
        .collect();
    csv_from_rows(&["E", "count", "prob_num", "prob_den", "prob_float"], rows)
}

// ---------------------------------------------------------------------------
// histograms
// ---------------------------------------------------------------------------

pub fn histogram_json(h: &EmpiricalHistogram) -> Value {
    let rows: Vec<Value> = h
        .counts_by_e()
        .iter()
        .enumerate()
        .map(|(e, count)| json!({ "e": e, "count": count.to_string() }))
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "histogram",
        "n": h.num_qubits(),
        "na": h.side_a(),
        "total_samples": h.total_samples().to_string(),
        "rows": rows,
        "provenance": {
            "seed": h.seed().to_string(),
            "worker_count": h.worker_count(),
            "sampler_version": SAMPLER_VERSION,
        },
    })
}

pub fn histogram_csv(h: &EmpiricalHistogram) -> Result<String> {
    let rows = h
        .counts_by_e()
        .iter()
        .enumerate()
        .map(|(e, count)| {
            vec![
                e.to_string(),
                count.to_string(),
                h.total_samples().to_string(),
                h.seed().to_string(),
                h.worker_count().to_string(),
                SAMPLER_VERSION.to_string(),
            ]
        })
        .collect();
    csv_from_rows(
        &["E", "count", "total_samples", "seed", "worker_count", "sampler_version"],
        rows,
    )
}

// ---------------------------------------------------------------------------
// scalar reports
// ---------------------------------------------------------------------------

pub fn average_json(n: usize, n_a: usize, avg: &BigRational) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "average",
        "n": n,
        "na": n_a,
        "average": rational_json(avg),
        "average_float": rational_to_f64(avg),
    })
}

pub fn average_csv(n: usize, n_a: usize, avg: &BigRational) -> Result<String> {
    csv_from_rows(
        &["n", "na", "average_rational", "average_float"],
        vec![vec![
            n.to_string(),
            n_a.to_string(),
            rational_compact(avg),
            rational_to_f64(avg).to_string(),
        ]],
    )
}

pub fn tail_json(n: usize, n_a: usize, report: &TailReport) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "tail",
        "n": n,
        "na": n_a,
        "mode": report.mode.as_str(),
        "epsilon": rational_json(&report.epsilon),
        "threshold": report.threshold,
        "exact_tail": rational_json(&report.exact_tail),
        "exact_tail_float": rational_to_f64(&report.exact_tail),
        "gaussian_bound": report.gaussian_bound,
    })
}

pub fn tail_csv(n: usize, n_a: usize, report: &TailReport) -> Result<String> {
    csv_from_rows(
        &[
            "n",
            "na",
            "mode",
            "epsilon",
            "threshold",
            "exact_tail_rational",
            "exact_tail_float",
            "gaussian_bound",
        ],
        vec![vec![
            n.to_string(),
            n_a.to_string(),
            report.mode.as_str().to_string(),
            rational_compact(&report.epsilon),
            report.threshold.to_string(),
            rational_compact(&report.exact_tail),
            rational_to_f64(&report.exact_tail).to_string(),
            report.gaussian_bound.map_or_else(String::new, |b| b.to_string()),
        ]],
    )
}

pub fn bound_json(n: usize, n_a: usize, epsilon: &BigRational, bound: f64) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "tail_bound",
        "n": n,
        "na": n_a,
        "epsilon": rational_json(epsilon),
        "bound": bound,
    })
}

pub fn bound_csv(n: usize, n_a: usize, epsilon: &BigRational, bound: f64) -> Result<String> {
    csv_from_rows(
        &["n", "na", "epsilon", "bound"],
        vec![vec![
            n.to_string(),
            n_a.to_string(),
            rational_compact(epsilon),
            bound.to_string(),
        ]],
    )
}

/// `include_rational` suppresses the exact value when its decimal expansion
/// would be pathologically large (the caller decides the cutoff).
pub fn page_json(
    n: usize,
    n_a: usize,
    page: Option<&PageAverage>,
    ebits: f64,
    method: &str,
    include_rational: bool,
) -> Value {
    let pre = match page {
        Some(p) if include_rational => rational_json(&p.pre_ln2),
        _ => Value::Null,
    };
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "page_average",
        "n": n,
        "na": n_a,
        "method": method,
        "ebits": ebits,
        "pre_ln2": pre,
    })
}

pub fn page_csv(
    n: usize,
    n_a: usize,
    page: Option<&PageAverage>,
    ebits: f64,
    method: &str,
    include_rational: bool,
) -> Result<String> {
    let pre = match page {
        Some(p) if include_rational => rational_compact(&p.pre_ln2),
        _ => String::new(),
    };
    csv_from_rows(
        &["n", "na", "method", "ebits", "pre_ln2_rational"],
        vec![vec![n.to_string(), n_a.to_string(), method.to_string(), ebits.to_string(), pre]],
    )
}

pub fn ratio_json(n: usize, n_a: usize, ratio: &BigRational) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "mode_ratio",
        "n": n,
        "na": n_a,
        "ratio": rational_json(ratio),
        "ratio_float": rational_to_f64(ratio),
    })
}

pub fn ratio_csv(n: usize, n_a: usize, ratio: &BigRational) -> Result<String> {
    csv_from_rows(
        &["n", "na", "ratio_rational", "ratio_float"],
        vec![vec![
            n.to_string(),
            n_a.to_string(),
            rational_compact(ratio),
            rational_to_f64(ratio).to_string(),
        ]],
    )
}

// ---------------------------------------------------------------------------
// comparison table
// ---------------------------------------------------------------------------

/// One row of the stabilizer-vs-Page average table.
#[derive(Clone, Debug)]
pub struct CompareRow {
    pub n_a: usize,
    pub stab_avg: BigRational,
    pub page_avg: f64,
}

pub fn compare_json(n: usize, rows: &[CompareRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "na": r.n_a,
                "stab_avg": rational_json(&r.stab_avg),
                "stab_avg_float": rational_to_f64(&r.stab_avg),
                "page_avg_float": r.page_avg,
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "compare",
        "n": n,
        "rows": rows,
    })
}

pub fn compare_csv(rows: &[CompareRow]) -> Result<String> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.n_a.to_string(),
                rational_compact(&r.stab_avg),
                rational_to_f64(&r.stab_avg).to_string(),
                r.page_avg.to_string(),
            ]
        })
        .collect();
    csv_from_rows(&["na", "stab_avg_rational", "stab_avg_float", "page_avg_float"], rows)
}

// ---------------------------------------------------------------------------
// verification reports
// ---------------------------------------------------------------------------

/// One named check inside a verification run.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn verification_json(n: usize, checks: &[CheckResult]) -> Value {
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "verification",
        "n": n,
        "checks": rows,
        "passed": checks.iter().all(|c| c.passed),
    })
}

pub fn verification_csv(checks: &[CheckResult]) -> Result<String> {
    let rows = checks
        .iter()
        .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
        .collect();
    csv_from_rows(&["name", "passed", "detail"], rows)
}

/// Render a chi-square result for check details.
pub fn chi_square_detail(chi: &ChiSquare) -> String {
    format!(
        "chi2 = {:.4}, dof = {}, p = {:.6e}",
        chi.statistic, chi.degrees_of_freedom, chi.p_value
    )
}

// ---------------------------------------------------------------------------
// enumerated states
// ---------------------------------------------------------------------------

pub fn states_json(n: usize, states: &[Vec<String>]) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "states",
        "n": n,
        "count": states.len().to_string(),
        "states": states,
    })
}

pub fn states_csv(states: &[Vec<String>]) -> Result<String> {
    let rows = states
        .iter()
        .enumerate()
        .map(|(i, gens)| vec![i.to_string(), gens.join(";")])
        .collect();
    csv_from_rows(&["index", "generators"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::distribution;
    use num_traits::One;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/5").unwrap(), BigRational::new(3.into(), 5.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::new(7.into(), 1.into()));
        assert_eq!(parse_rational("-1/2").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn compact_rational_roundtrip() {
        let r = BigRational::new(104_521_072_066i64.into(), 25_180_532_325i64.into());
        assert_eq!(parse_rational(&rational_compact(&r)).unwrap(), r);
    }

    #[test]
    fn display_big_caps_at_forty_digits() {
        let short = "123";
        assert_eq!(display_big(short), "123");
        let long = "9".repeat(100);
        let shown = display_big(&long);
        assert!(shown.starts_with(&"9".repeat(40)));
        assert!(shown.ends_with("...(100 digits)"));
    }

    #[test]
    fn distribution_document_shape() {
        let d = distribution(2, 1).unwrap();
        let doc = distribution_json(&d);
        assert_eq!(doc["schema"], "stabdist/1");
        assert_eq!(doc["total_states"], "60");
        assert_eq!(doc["rows"][0]["count"], "36");
        assert_eq!(doc["rows"][1]["prob"]["num"], "2");
        assert_eq!(doc["rows"][1]["prob"]["den"], "5");

        let csv = distribution_csv(&d).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "E,count,prob_num,prob_den,prob_float");
        assert_eq!(lines.next().unwrap(), "0,36,3,5,0.6");
        assert_eq!(lines.next().unwrap(), "1,24,2,5,0.4");
    }

    #[test]
    fn verification_document_aggregates_pass_flag() {
        let checks = vec![
            CheckResult::new("a", true, "ok"),
            CheckResult::new("b", false, "broken"),
        ];
        let doc = verification_json(3, &checks);
        assert_eq!(doc["passed"], false);
        let one_good = verification_json(3, &checks[..1]);
        assert_eq!(one_good["passed"], true);
    }

    #[test]
    fn rational_json_is_exact_strings() {
        let doc = rational_json(&BigRational::one());
        assert_eq!(doc["num"], "1");
        assert_eq!(doc["den"], "1");
    }
}
