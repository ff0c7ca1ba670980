//! Acceptance suite: every release gate runs here, one test per criterion,
//! each printing a single PASS/FAIL line (run with `--nocapture` to see them
//! alongside the harness output).
//!
//! Criterion 2 has a slow companion (`criterion_02_closed_form_vs_oracle_n5`)
//! covering the 2,423,520-state enumeration; it is `#[ignore]`d by default
//! and runs with `cargo test -- --ignored`.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabdist::counts::{
    self, rational_log2, rational_to_f64, LN_2,
};
use stabdist::sampling::{self, SamplerConfig};
use stabdist::state::{CutSpec, Side};
use stabdist::TailMode;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn report(name: &str, passed: bool, detail: &str) {
    println!(
        "ACCEPTANCE {name}: {} ({detail})",
        if passed { "PASS" } else { "FAIL" }
    );
}

fn assert_budget(name: &str, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "{name} took {elapsed:?}, over the {budget:?} budget"
    );
}

#[test]
fn criterion_01_paper_constants() {
    let start = Instant::now();
    let mut ok = true;
    ok &= counts::n_total(2).unwrap() == BigUint::from(60u32);
    ok &= counts::n_separable(2, 1).unwrap() == BigUint::from(36u32);
    ok &= counts::count_states(2, 1, 1).unwrap() == BigUint::from(24u32);
    ok &= counts::n_total(3).unwrap() == BigUint::from(1080u32);
    ok &= counts::n_separable(3, 1).unwrap() == BigUint::from(360u32);
    ok &= counts::count_states(3, 1, 1).unwrap() == BigUint::from(720u32);
    ok &= counts::average_entanglement(2, 1).unwrap() == rat(2, 5);
    ok &= counts::average_entanglement(3, 1).unwrap() == rat(2, 3);
    let elapsed = start.elapsed();
    report(
        "criterion 1 (closed-form constants, exact)",
        ok,
        &format!("8 exact equalities in {elapsed:?}"),
    );
    assert!(ok);
    assert_budget("criterion 1", elapsed, Duration::from_secs(1));
}

fn oracle_equality_for(n: usize) -> bool {
    (1..n).all(|n_a| {
        let oracle = sampling::brute_force_counts(n, n_a).unwrap();
        let closed: Vec<u64> = counts::distribution(n, n_a)
            .unwrap()
            .counts()
            .iter()
            .map(|c| u64::try_from(c).unwrap())
            .collect();
        oracle == closed
    })
}

#[test]
fn criterion_02_closed_form_vs_oracle() {
    let start = Instant::now();
    let ok = (2..=4).all(oracle_equality_for);
    let elapsed = start.elapsed();
    report(
        "criterion 2 (closed form vs enumeration oracle, N <= 4)",
        ok,
        &format!("all cuts of N=2..4 (36720 states at N=4) in {elapsed:?}"),
    );
    assert!(ok);
    assert_budget("criterion 2", elapsed, Duration::from_secs(120));
}

#[test]
#[ignore = "slow tier: enumerates all 2,423,520 five-qubit states (budget 30 min)"]
fn criterion_02_closed_form_vs_oracle_n5() {
    let start = Instant::now();
    let ok = oracle_equality_for(5);
    let elapsed = start.elapsed();
    report(
        "criterion 2 slow tier (N = 5)",
        ok,
        &format!("all cuts of the 2,423,520-state space in {elapsed:?}"),
    );
    assert!(ok);
    assert_budget("criterion 2 slow tier", elapsed, Duration::from_secs(1800));
}

#[test]
fn criterion_03_normalization_and_completeness() {
    let start = Instant::now();
    let mut ok = true;
    for n in 2..=40 {
        for n_a in 1..n {
            let d = counts::distribution(n, n_a).unwrap();
            let count_sum: BigUint = d.counts().iter().sum();
            let prob_sum: BigRational = d.probs().iter().sum();
            ok &= &count_sum == d.total_states();
            ok &= prob_sum.is_one();
        }
    }
    let elapsed = start.elapsed();
    report(
        "criterion 3 (normalization and completeness, N <= 40)",
        ok,
        &format!("sum P(E) = 1 and sum n_E = n_tot for every cut in {elapsed:?}"),
    );
    assert!(ok);
    assert_budget("criterion 3", elapsed, Duration::from_secs(60));
}

#[test]
fn criterion_04_single_qubit_average_identity() {
    let mut ok = true;
    for n in 2..=40 {
        let expected = BigRational::one()
            - BigRational::new(BigInt::from(3), BigInt::from(BigUint::one() << n) + BigInt::one());
        ok &= counts::average_entanglement(n, 1).unwrap() == expected;
    }
    report(
        "criterion 4 (N_A = 1 average identity, N = 2..40)",
        ok,
        "exact rational equality with 1 - 3/(2^N + 1)",
    );
    assert!(ok);
}

#[test]
fn criterion_05_product_free_form_consistency() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=60 {
        for n_a in 1..n {
            for e in 0..=n_a.min(n - n_a) {
                let exact = counts::probability(n, n_a, e).unwrap();
                let lp = counts::probability_log2(n, n_a, e).unwrap();
                let rel = ((lp.exponent - rational_log2(&exact)).exp2() - 1.0).abs();
                worst = worst.max(rel);
            }
        }
    }
    let ok = worst < 1e-9;
    report(
        "criterion 5 (product-free form vs exact, N <= 60)",
        ok,
        &format!("worst log-domain relative error {worst:.3e} in {:?}", start.elapsed()),
    );
    assert!(ok);
}

#[test]
fn criterion_06_mode_shift() {
    // exact top ratios at N = 60, N_A = 30
    let r1 = BigRational::new(
        BigInt::from(counts::count_states(60, 30, 29).unwrap()),
        BigInt::from(counts::count_states(60, 30, 30).unwrap()),
    );
    let d1 = (rational_to_f64(&r1) - 2.0).abs();
    let r2 = BigRational::new(
        BigInt::from(counts::count_states(60, 30, 28).unwrap()),
        BigInt::from(counts::count_states(60, 30, 29).unwrap()),
    );
    let d2 = (rational_to_f64(&r2) - 2.0 / 9.0).abs();
    // the closed-form ratio agrees (mode_ratio asserts against counts internally)
    let closed = counts::mode_ratio(60, 30).unwrap();
    let ratios_ok = d1 < 1e-6 && d2 < 1e-3 && closed == r1;

    let mut argmax_ok = true;
    for n in (8..=40).step_by(2) {
        let d = counts::distribution(n, n / 2).unwrap();
        argmax_ok &= d.mode() == n / 2 - 1;
    }
    let ok = ratios_ok && argmax_ok;
    report(
        "criterion 6 (mode shift)",
        ok,
        &format!(
            "|n_29/n_30 - 2| = {d1:.2e}, |n_28/n_29 - 2/9| = {d2:.2e}, \
             argmax = N/2 - 1 for even N in 8..40"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_07_concentration_bound() {
    let start = Instant::now();
    let mut grid_ok = true;
    let mut points = 0usize;
    for n in 4..=30 {
        for n_a in 2..=n / 2 {
            for eps in 1..n_a {
                let eps = rat(eps as i64, 1);
                let tail =
                    counts::tail_probability(n, n_a, &eps, TailMode::PaperLiteral).unwrap();
                let bound = counts::tail_bound_gaussian(n, n_a, &eps).unwrap();
                grid_ok &= bound >= rational_to_f64(&tail.exact_tail);
                points += 1;
            }
        }
    }

    // the exact tail at least halves with every unit of eps (N=30, N_A=15)
    let mut decay_ok = true;
    let mut prev = counts::tail_probability(30, 15, &rat(1, 1), TailMode::PaperLiteral)
        .unwrap()
        .exact_tail;
    decay_ok &= !prev.is_zero();
    for eps in 2..=14 {
        let tail = counts::tail_probability(30, 15, &rat(eps, 1), TailMode::PaperLiteral)
            .unwrap()
            .exact_tail;
        decay_ok &= tail.clone() * rat(2, 1) < prev; // exact rational comparison
        prev = tail;
    }
    let ok = grid_ok && decay_ok;
    report(
        "criterion 7 (concentration bound)",
        ok,
        &format!(
            "bound >= exact tail at {points} grid points, successive-tail ratio < 1/2 \
             at N=30, N_A=15, in {:?}",
            start.elapsed()
        ),
    );
    assert!(ok);
}

/// Direct float evaluation of the Haar-random average, independent of the
/// library's exact-rational path: plain Kahan-compensated harmonic sum.
fn page_direct(n: usize, n_a: usize) -> f64 {
    let n_a = n_a.min(n - n_a);
    let n_b = n - n_a;
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for k in (1u64 << n_b) + 1..=1u64 << n {
        let y = 1.0 / k as f64 - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    (sum - (2.0f64.powi(n_a as i32) - 1.0) / 2.0f64.powi(n_b as i32 + 1)) / LN_2
}

fn compare_rows_from_cli() -> Vec<(usize, BigRational, f64, f64)> {
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_stabdist"))
        .args(["compare", "--n", "10", "--format", "csv"])
        .output()
        .expect("compare must run");
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let mut rows = Vec::new();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4, "unexpected row {line:?}");
        let (num, den) = fields[1].split_once('/').unwrap();
        rows.push((
            fields[0].parse::<usize>().unwrap(),
            BigRational::new(num.parse().unwrap(), den.parse().unwrap()),
            fields[2].parse::<f64>().unwrap(),
            fields[3].parse::<f64>().unwrap(),
        ));
    }
    rows
}

#[test]
fn criterion_08_comparison_table_reproduction() {
    let rows = compare_rows_from_cli();
    let mut ok = rows.len() == 9;
    let mut worst_page = 0.0f64;
    for (n_a, stab, stab_float, page) in &rows {
        let exact = counts::average_entanglement(10, *n_a).unwrap();
        ok &= *stab == exact;
        ok &= *stab_float == rational_to_f64(&exact); // bit-equal float round trip
        let direct = page_direct(10, *n_a);
        worst_page = worst_page.max((page - direct).abs());
    }
    ok &= worst_page <= 1e-12;
    report(
        "criterion 8 (ten-qubit comparison table)",
        ok,
        &format!(
            "9 rows, stabilizer column exact, Page column within {worst_page:.2e} \
             of direct evaluation"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_balanced_cut_near_maximal_threshold() {
    let avg = counts::average_entanglement(10, 5).unwrap();
    let value = rational_to_f64(&avg);
    let ok = value > 4.5;
    report(
        "criterion 8 (balanced-cut average exceeds 4.5 ebits)",
        ok,
        &format!(
            "exact average at N=10, N_A=5 is 104521072066/25180532325 = {value:.9}"
        ),
    );
    // The exact balanced-cut average is 4.1509 ebits (the mass sits at E = 4
    // and 5, mean N_A - 0.849), so this 4.5-ebit threshold cannot be met at
    // N = 10. The companion table test covers the checks that do hold.
    assert!(
        ok,
        "exact average_entanglement(10, 5) = {value:.9} ebits, which is below 4.5; \
         the value is pinned by the same closed form the enumeration oracle confirms \
         at N <= 5 and equals the CLI/table output checked above"
    );
}

#[test]
fn criterion_09_sampler_correctness() {
    let start = Instant::now();
    // 600k single-worker samples over the 60 two-qubit states
    let chi_canonical = sampling::canonical_uniformity_chi_square(2, 600_000, 2).unwrap();
    let canonical_ok = chi_canonical.p_value > 1e-3;

    // 100k samples of the balanced six-qubit cut
    let config = SamplerConfig::new(6, 100_000, 7, 4).unwrap();
    let hist = sampling::empirical_distribution(&config, 3).unwrap();
    let rerun = sampling::empirical_distribution(&config, 3).unwrap();
    let deterministic_ok = hist == rerun;
    let exact = counts::distribution(6, 3).unwrap();
    let tv = hist.total_variation_distance(&exact).unwrap();
    let chi = sampling::chi_square_test(&hist, &exact).unwrap();
    let six_ok = tv < 0.01 && chi.p_value > 1e-3;

    let elapsed = start.elapsed();
    let ok = canonical_ok && six_ok && deterministic_ok;
    report(
        "criterion 9 (sampler correctness)",
        ok,
        &format!(
            "60-state chi-square p = {:.4}, six-qubit TV = {tv:.5}, p = {:.4}, \
             bit-identical rerun = {deterministic_ok}, in {elapsed:?}",
            chi_canonical.p_value, chi.p_value
        ),
    );
    assert!(ok);
    assert_budget("criterion 9", elapsed, Duration::from_secs(120));
}

#[test]
fn criterion_10_two_sided_entanglement_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut checked = 0usize;
    let mut ok = true;
    while checked < 10_000 {
        let n = rng.gen_range(2..=10usize);
        let n_a = rng.gen_range(0..=n);
        let cut = CutSpec::prefix(n_a, n).unwrap();
        let state = sampling::sample_uniform_state(n, &mut rng);
        let e = state.entanglement(&cut).unwrap();
        let s_a = state.local_subgroup_size(&cut, Side::A).unwrap();
        let s_b = state.local_subgroup_size(&cut, Side::B).unwrap();
        // E = N_A - |S_A| = N_B - |S_B| (the two-sided rank identity) and
        // |S_A| + |S_B| + 2E = N (the non-local pair count, indirectly)
        ok &= n_a as i64 - s_a as i64 == e as i64;
        ok &= (n - n_a) as i64 - s_b as i64 == e as i64;
        ok &= s_a + s_b + 2 * e == n;
        checked += 1;
    }
    report(
        "criterion 10 (two-sided entanglement identity)",
        ok,
        &format!("{checked} random states across N = 2..10 with random cuts"),
    );
    assert!(ok);
}

#[test]
fn acceptance_float_helpers_are_sane() {
    // guards the helpers this suite leans on
    assert_eq!(rational_to_f64(&rat(3, 5)), 0.6);
    assert!(rat(1, 2).to_f64().is_some());
}
