//! Exact counting and probability formulas for the entanglement of uniformly
//! random pure stabilizer states, plus float-domain companions.
//!
//! For N qubits cut into contiguous sides of N_A and N_B = N - N_A qubits,
//! the entanglement E of a uniformly random pure stabilizer state takes
//! integer values 0..min(N_A, N_B) with probability
//!
//! ```text
//! P(E) = prod_{i=1..N_A} (2^i + 1) / prod_{k=N-N_A+1..N} (2^k + 1)
//!        * prod_{j=1..E} (2^(N-N_A+1-j) - 1)(2^(N_A+j) - 2^(2j-1)) / (2^(2j) - 1)
//! ```
//!
//! over a state space of `n_tot(N) = 2^N prod_{k=1..N} (2^k + 1)` states, of
//! which `n_0 = n_tot(N_A) n_tot(N_B)` are unentangled. Everything derived
//! from these (state counts, averages, tail probabilities) is computed here
//! in exact integer/rational arithmetic; n_tot(40) already has 260 digits, so
//! floats would silently destroy the distribution's tails. The two designated
//! float paths are the product-free log-domain form
//!
//! ```text
//! P(E) = 2^( (N_A-N_B)^2/4 - (N/2-E)^2 + Sigma_1 + Sigma_2 )
//! ```
//!
//! and the Gaussian upper bound on the lower tail, evaluated through the
//! complementary error function.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

pub const LN_2: f64 = std::f64::consts::LN_2;

/// 2^k as an arbitrary-precision integer.
fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

fn big(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Reflect `n_a` to the smaller side of the cut; the distribution depends on
/// the cut only through {N_A, N_B}.
fn reflect(n: usize, n_a: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("need at least one qubit".into()));
    }
    if n_a > n {
        return Err(Error::Domain(format!("cut size {n_a} exceeds qubit count {n}")));
    }
    Ok(n_a.min(n - n_a))
}

/// Total number of distinct pure stabilizer states on `n` qubits:
/// `2^n * prod_{k=1..n} (2^k + 1)`.
pub fn n_total(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("n_total requires at least one qubit".into()));
    }
    let mut total = pow2(n);
    for k in 1..=n {
        total *= pow2(k) + BigUint::one();
    }
    Ok(total)
}

/// Number of pure stabilizer states with no entanglement across the cut:
/// `n_tot(n_a) * n_tot(n - n_a)`.
pub fn n_separable(n: usize, n_a: usize) -> Result<BigUint> {
    if n_a == 0 || n_a >= n {
        return Err(Error::Domain(format!(
            "separable count needs 1 <= n_a <= N-1, got n_a={n_a}, N={n}"
        )));
    }
    Ok(n_total(n_a)? * n_total(n - n_a)?)
}

/// The ratio `n_E / n_(E-1)` of successive state counts:
/// `(2^(N+1-N_A-E) - 1)(2^(N_A+E) - 2^(2E-1)) / (2^(2E) - 1)`.
fn count_ratio_step(n: usize, n_a: usize, e: usize) -> BigRational {
    debug_assert!(e >= 1 && n_a + e <= n + 1);
    let one = BigUint::one();
    let num = (pow2(n + 1 - n_a - e) - &one) * (pow2(n_a + e) - pow2(2 * e - 1));
    let den = pow2(2 * e) - &one;
    ratio(big(&num), big(&den))
}

/// Exact probability that a uniformly random pure stabilizer state on `n`
/// qubits has entanglement `e` across a cut of size `n_a`.
///
/// `n_a` may be given for either side (the value is reflected to
/// `min(n_a, n - n_a)`). Out-of-range `e` yields an exact 0 rather than an
/// error, so tail and moment sums need no special-casing; `n_a` of 0 or `n`
/// yields the point distribution with `P(0) = 1`.
pub fn probability(n: usize, n_a: usize, e: usize) -> Result<BigRational> {
    let n_a = reflect(n, n_a)?;
    let n_b = n - n_a;
    if e > n_a.min(n_b) {
        return Ok(BigRational::zero());
    }
    if n_a == 0 {
        return Ok(BigRational::one());
    }
    let one = BigUint::one();
    let mut prefactor_num = BigUint::one();
    for i in 1..=n_a {
        prefactor_num *= pow2(i) + &one;
    }
    let mut prefactor_den = BigUint::one();
    for k in (n - n_a + 1)..=n {
        prefactor_den *= pow2(k) + &one;
    }
    let mut p = ratio(big(&prefactor_num), big(&prefactor_den));
    for j in 1..=e {
        p *= count_ratio_step(n, n_a, j);
    }
    Ok(p)
}

/// Exact number of pure stabilizer states on `n` qubits with entanglement
/// `e` across a cut of size `n_a`.
///
/// Computed as `probability * n_total` and cross-checked against the
/// recursion that runs the count ratio up from the separable count
/// `n_0 = n_tot(N_A) n_tot(N_B)`; both must agree on an exact integer.
pub fn count_states(n: usize, n_a: usize, e: usize) -> Result<BigUint> {
    let total = n_total(n)?;
    let n_a = reflect(n, n_a)?;
    let p = probability(n, n_a, e)?;
    let via_theorem = p * ratio(big(&total), BigInt::one());
    assert!(via_theorem.is_integer(), "state count must be an exact integer");
    let count = via_theorem.to_integer();

    let n_b = n - n_a;
    if e <= n_a.min(n_b) && n_a >= 1 {
        let mut via_recursion = ratio(big(&n_separable(n, n_a)?), BigInt::one());
        for j in 1..=e {
            via_recursion *= count_ratio_step(n, n_a, j);
            assert!(
                via_recursion.is_integer(),
                "count recursion left the integers at step {j}"
            );
        }
        assert_eq!(count, via_recursion.to_integer(), "recursion disagrees with closed form");
    }
    Ok(count.to_biguint().expect("counts are nonnegative"))
}

/// The full exact entanglement distribution for one cut.
#[derive(Clone, Debug)]
pub struct EntanglementDistribution {
    total_qubits: usize,
    side_a: usize,
    counts: Vec<BigUint>,
    probs: Vec<BigRational>,
    total_states: BigUint,
}

impl EntanglementDistribution {
    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn side_a(&self) -> usize {
        self.side_a
    }

    /// State counts indexed by E = 0..=min(N_A, N_B).
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Exact probabilities indexed by E; they sum to exactly 1.
    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn total_states(&self) -> &BigUint {
        &self.total_states
    }

    pub fn max_entanglement(&self) -> usize {
        self.counts.len() - 1
    }

    /// Index of the most likely entanglement value.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for e in 1..self.probs.len() {
            if self.probs[e] > self.probs[best] {
                best = e;
            }
        }
        best
    }
}

/// Compute the exact distribution for a cut of size `n_a` out of `n` qubits.
pub fn distribution(n: usize, n_a: usize) -> Result<EntanglementDistribution> {
    let reflected = reflect(n, n_a)?;
    let total = n_total(n)?;
    let e_max = reflected.min(n - reflected);
    let mut counts = Vec::with_capacity(e_max + 1);
    let mut probs = Vec::with_capacity(e_max + 1);
    for e in 0..=e_max {
        counts.push(count_states(n, reflected, e)?);
        probs.push(probability(n, reflected, e)?);
    }
    let sum: BigUint = counts.iter().sum();
    assert_eq!(sum, total, "state counts must partition the state space");
    let psum: BigRational = probs.iter().sum();
    assert!(psum.is_one(), "probabilities must sum to exactly 1");
    for (c, p) in counts.iter().zip(&probs) {
        assert_eq!(ratio(big(c), big(&total)), *p, "count/total must equal probability");
    }
    Ok(EntanglementDistribution {
        total_qubits: n,
        side_a: n_a,
        counts,
        probs,
        total_states: total,
    })
}

/// Exact mean entanglement in ebits: `sum_E E * P(E)`.
pub fn average_entanglement(n: usize, n_a: usize) -> Result<BigRational> {
    let n_a = reflect(n, n_a)?;
    let mut mean = BigRational::zero();
    for e in 1..=n_a.min(n - n_a) {
        mean += probability(n, n_a, e)? * ratio(BigInt::from(e), BigInt::one());
    }
    Ok(mean)
}

// ---------------------------------------------------------------------------
// log-domain form and bound constants
// ---------------------------------------------------------------------------

/// `h = -log2(3/4)`, the decay constant of the bound machinery.
pub fn h_constant() -> f64 {
    -(0.75f64).log2()
}

/// `Sigma_1(N, N_A)`: the E-independent log-domain correction.
pub fn sigma1(n: usize, n_a: usize) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    let n_b = n - n_a;
    let part = |limit: usize| -> f64 {
        (1..=limit).map(|j| (1.0 + 2.0f64.powi(-(j as i32))).log2()).sum()
    };
    Ok(part(n_a) + part(n_b) - part(n))
}

/// `Sigma_2(N, N_A, E)`: the E-dependent log-domain correction.
pub fn sigma2(n: usize, n_a: usize, e: usize) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    let n_b = n - n_a;
    if e > n_a.min(n_b) {
        return Err(Error::Domain(format!("Sigma_2 needs E <= min(N_A, N_B), got {e}")));
    }
    let mut s = 0.0;
    for k in 1..=e as i32 {
        s += (1.0 - 2.0f64.powi(k - 1 - n_a as i32)).log2();
        s += (1.0 - 2.0f64.powi(k - 1 - n_b as i32)).log2();
        s -= (1.0 - 2.0f64.powi(-2 * k)).log2();
    }
    Ok(s)
}

/// Closed-form upper bound `s_1 >= Sigma_1`, valid for `N_A >= 2`:
/// `log2(3/2) + log2(5/4) + 13/36 (1 - (26/50)^(N_A-2))`.
pub fn s1_bound(n_a: usize) -> Result<f64> {
    if n_a < 2 {
        return Err(Error::Domain("the s_1 bound requires N_A >= 2".into()));
    }
    Ok(1.5f64.log2() + 1.25f64.log2() + 13.0 / 36.0 * (1.0 - 0.52f64.powi(n_a as i32 - 2)))
}

/// E-dependent upper bound on `Sigma_2`:
/// `(1 - h^-E)/(1 - h) (h^N_A + h^N_B) + 4/3 (2^-2E - 1) log2(15/16) + h`.
pub fn s2_bound_at(n: usize, n_a: usize, e: usize) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    let n_b = n - n_a;
    let h = h_constant();
    let e = e as i32;
    Ok((1.0 - h.powi(-e)) / (1.0 - h) * (h.powi(n_a as i32) + h.powi(n_b as i32))
        + 4.0 / 3.0 * (2.0f64.powi(-2 * e) - 1.0) * (15.0f64 / 16.0).log2()
        + h)
}

/// E-independent version of the `Sigma_2` bound used inside the Gaussian
/// tail bound: `(h^N_A + h^N_B)/(1 - h) - log2(15/16) + h`.
pub fn s2_bound(n: usize, n_a: usize) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    let n_b = n - n_a;
    let h = h_constant();
    Ok((h.powi(n_a as i32) + h.powi(n_b as i32)) / (1.0 - h) - (15.0f64 / 16.0).log2() + h)
}

/// Prefactor of the Gaussian tail bound:
/// `gamma(N, N_A) = 2^((N_A-N_B)^2/4 + s_1 + s_2)`.
pub fn gamma(n: usize, n_a: usize) -> Result<f64> {
    Ok(gamma_log2(n, n_a)?.exp2())
}

fn gamma_log2(n: usize, n_a: usize) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    let n_b = n - n_a;
    let d = n_b as f64 - n_a as f64;
    Ok(d * d / 4.0 + s1_bound(n_a)? + s2_bound(n, n_a)?)
}

/// The constants entering the log-domain forms and bounds, with `sigma2`
/// evaluated at the given `e` and `s2` the E-independent version.
#[derive(Clone, Copy, Debug)]
pub struct BoundConstants {
    pub sigma1: f64,
    pub sigma2: f64,
    pub s1: f64,
    pub s2: f64,
    pub h: f64,
    pub gamma: f64,
}

pub fn bound_constants(n: usize, n_a: usize, e: usize) -> Result<BoundConstants> {
    Ok(BoundConstants {
        sigma1: sigma1(n, n_a)?,
        sigma2: sigma2(n, n_a, e)?,
        s1: s1_bound(reflect(n, n_a)?)?,
        s2: s2_bound(n, n_a)?,
        h: h_constant(),
        gamma: gamma(n, n_a)?,
    })
}

/// The log-domain probability: exponent and its power of two.
#[derive(Clone, Copy, Debug)]
pub struct Log2Probability {
    /// `(N_A-N_B)^2/4 - (N/2-E)^2 + Sigma_1 + Sigma_2`.
    pub exponent: f64,
    /// `2^exponent`; an exact re-expression of the rational probability up
    /// to float rounding.
    pub probability: f64,
}

/// Product-free evaluation of the entanglement probability in the log
/// domain. Valid everywhere, intended for N too large for comfortable exact
/// evaluation. Out-of-range `e` yields exponent `-inf` and probability 0.
pub fn probability_log2(n: usize, n_a: usize, e: usize) -> Result<Log2Probability> {
    let n_a = reflect(n, n_a)?;
    let n_b = n - n_a;
    if e > n_a.min(n_b) {
        return Ok(Log2Probability { exponent: f64::NEG_INFINITY, probability: 0.0 });
    }
    let d = n_a as f64 - n_b as f64;
    let centered = n as f64 / 2.0 - e as f64;
    let exponent = d * d / 4.0 - centered * centered + sigma1(n, n_a)? + sigma2(n, n_a, e)?;
    Ok(Log2Probability { exponent, probability: exponent.exp2() })
}

// ---------------------------------------------------------------------------
// averages and tails
// ---------------------------------------------------------------------------

/// Float lower bound on the average entanglement, from the rearrangement
/// `E[S_A] = N_A (1 - n_0/n_tot) - sum_{E=1..N_A-1} (N_A-E) P(E)` with the
/// subtracted probabilities over-estimated through `s_1` and the E-dependent
/// `Sigma_2` bound. For `n_a = 1` the exact value `1 - 3/(2^N + 1)` is
/// returned instead, which the bound machinery does not cover.
pub fn average_lower_bound(n: usize, n_a: usize) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    if n_a == 0 {
        return Err(Error::Domain("average bound needs 1 <= n_a <= N-1".into()));
    }
    if n_a == 1 {
        return Ok(1.0 - 3.0 / (2.0f64.powi(n as i32) + 1.0));
    }
    let n_b = n - n_a;
    let zero_fraction = ratio(big(&n_separable(n, n_a)?), big(&n_total(n)?));
    let mut bound = n_a as f64 * (1.0 - rational_to_f64(&zero_fraction));
    let d = n_a as f64 - n_b as f64;
    let s1 = s1_bound(n_a)?;
    for e in 1..n_a {
        let centered = n as f64 / 2.0 - e as f64;
        let exponent = d * d / 4.0 - centered * centered + s1 + s2_bound_at(n, n_a, e)?;
        bound -= (n_a - e) as f64 * exponent.exp2();
    }
    Ok(bound)
}

/// Which lower limit the tail sum uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMode {
    /// Sum from E = 1, exactly as the closed form is stated.
    PaperLiteral,
    /// Sum from E = 0, so the unentangled mass is included.
    Inclusive,
}

impl TailMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TailMode::PaperLiteral => "paper-literal",
            TailMode::Inclusive => "inclusive",
        }
    }
}

impl std::str::FromStr for TailMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-literal" => Ok(TailMode::PaperLiteral),
            "inclusive" => Ok(TailMode::Inclusive),
            other => Err(Error::Parse(format!(
                "unknown tail mode {other:?} (expected paper-literal or inclusive)"
            ))),
        }
    }
}

/// Exact tail probability `P(S_A < E[S_A] - eps)` together with the Gaussian
/// bound evaluated at the same threshold.
#[derive(Clone, Debug)]
pub struct TailReport {
    /// Largest E included in the sum: `floor(E[S_A] - eps)`.
    pub threshold: i64,
    pub epsilon: BigRational,
    pub exact_tail: BigRational,
    /// The Gaussian-integral upper bound on the paper-literal tail; absent
    /// when its constants are undefined (`n_a < 2` or eps outside 1..N_A-1).
    pub gaussian_bound: Option<f64>,
    pub mode: TailMode,
}

/// Exact lower-tail probability: the sum of `P(E)` for E from the mode's
/// lower limit up to `floor(E[S_A] - eps)`.
///
/// Paper-literal mode enforces `1 <= eps <= N_A - 1` and starts at E = 1;
/// inclusive mode accepts any `eps > 0` and starts at E = 0. An empty sum
/// yields an exact 0.
pub fn tail_probability(
    n: usize,
    n_a: usize,
    epsilon: &BigRational,
    mode: TailMode,
) -> Result<TailReport> {
    let n_a = reflect(n, n_a)?;
    match mode {
        TailMode::PaperLiteral => {
            let lo = ratio(BigInt::one(), BigInt::one());
            let hi = ratio(BigInt::from(n_a as i64 - 1), BigInt::one());
            if n_a < 2 || *epsilon < lo || *epsilon > hi {
                return Err(Error::Domain(format!(
                    "paper-literal mode needs eps in [1, N_A-1] = [1, {}]",
                    n_a as i64 - 1
                )));
            }
        }
        TailMode::Inclusive => {
            if !epsilon.is_positive() {
                return Err(Error::Domain("eps must be positive".into()));
            }
        }
    }
    let mean = average_entanglement(n, n_a)?;
    // saturate: a huge inclusive-mode eps only drives the threshold below
    // every term of an already empty sum
    let threshold = (mean - epsilon).floor().to_integer().to_i64().unwrap_or(i64::MIN);
    let start: i64 = match mode {
        TailMode::PaperLiteral => 1,
        TailMode::Inclusive => 0,
    };
    let mut tail = BigRational::zero();
    let top = threshold.min(n_a.min(n - n_a) as i64);
    for e in start..=top {
        tail += probability(n, n_a, e as usize)?;
    }
    let gaussian_bound = if n_a >= 2
        && *epsilon >= ratio(BigInt::one(), BigInt::one())
        && *epsilon <= ratio(BigInt::from(n_a as i64 - 1), BigInt::one())
    {
        Some(tail_bound_gaussian(n, n_a, epsilon)?)
    } else {
        None
    };
    Ok(TailReport {
        threshold,
        epsilon: epsilon.clone(),
        exact_tail: tail,
        gaussian_bound,
        mode,
    })
}

/// Gaussian-integral upper bound on the paper-literal lower tail:
/// `gamma(N, N_A) * integral_1^(1+T) 2^-(N/2-E)^2 dE` with
/// `T = floor(E[S_A] - eps)`, evaluated through the complementary error
/// function (absolute tolerance around 1e-12; erfc keeps far-tail segments
/// from flushing to zero).
pub fn tail_bound_gaussian(n: usize, n_a: usize, epsilon: &BigRational) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    if n_a < 2 {
        return Err(Error::Domain("the Gaussian bound requires 2 <= n_a <= N/2".into()));
    }
    let lo = ratio(BigInt::one(), BigInt::one());
    let hi = ratio(BigInt::from(n_a as i64 - 1), BigInt::one());
    if *epsilon < lo || *epsilon > hi {
        return Err(Error::Domain(format!(
            "the Gaussian bound needs eps in [1, N_A-1] = [1, {}]",
            n_a as i64 - 1
        )));
    }
    let mean = average_entanglement(n, n_a)?;
    let threshold = (mean - epsilon).floor().to_integer();
    let t = match threshold.to_i64() {
        Some(t) if t >= 1 => t as f64,
        _ => return Ok(0.0),
    };
    // integral_1^(1+T) e^(-ln2 (N/2-E)^2) dE with u = sqrt(ln2) (N/2 - E);
    // both endpoints satisfy N/2 - E >= 0 because 1 + T <= N/2.
    let a = LN_2.sqrt();
    let u_hi = a * (n as f64 / 2.0 - 1.0);
    let u_lo = a * (n as f64 / 2.0 - 1.0 - t);
    let integral = std::f64::consts::PI.sqrt() / (2.0 * a) * (erfc(u_lo) - erfc(u_hi));
    if integral <= 0.0 {
        return Ok(0.0);
    }
    Ok((gamma_log2(n, n_a)? + integral.log2()).exp2())
}

// ---------------------------------------------------------------------------
// comparisons with general random states
// ---------------------------------------------------------------------------

/// Mean entanglement of Haar-random general pure states, plus the exact
/// rational inner value (the harmonic sum minus the correction, before the
/// final division by ln 2).
#[derive(Clone, Debug)]
pub struct PageAverage {
    pub ebits: f64,
    /// `sum_{k=2^N_B+1}^{2^N} 1/k - (2^N_A - 1)/2^(N_B+1)`, exact. Reduced to
    /// lowest terms only when small enough for that to be cheap.
    pub pre_ln2: BigRational,
}

/// Hard cap for the exact Page path; the harmonic sum has 2^N - 2^N_B terms.
pub const PAGE_EXACT_MAX_QUBITS: usize = 32;

/// Cap for the float fallback, which walks the harmonic terms one by one.
pub const PAGE_FLOAT_MAX_QUBITS: usize = 30;

/// `sum_{k=a..=b} 1/k` by binary splitting, returned unreduced.
fn harmonic_range(a: u64, b: u64) -> (BigUint, BigUint) {
    debug_assert!(a <= b);
    if a == b {
        return (BigUint::one(), BigUint::from(a));
    }
    let mid = a + (b - a) / 2;
    let (p1, q1) = harmonic_range(a, mid);
    let (p2, q2) = harmonic_range(mid + 1, b);
    (&p1 * &q2 + &p2 * &q1, q1 * q2)
}

/// Mean entanglement in ebits of Haar-random general pure states across an
/// (N_A, N_B) cut, with the convention N_A <= N_B applied internally:
///
/// ```text
/// E[S_A] = (sum_{k=2^N_B+1}^{2^N} 1/k - (2^N_A - 1)/2^(N_B+1)) / ln 2
/// ```
///
/// The harmonic partial sum is accumulated exactly and only the final
/// division by ln 2 happens in floating point.
pub fn page_average(n: usize, n_a: usize) -> Result<PageAverage> {
    let n_a = reflect(n, n_a)?;
    if n_a == 0 {
        return Err(Error::Domain("the Page average needs 1 <= n_a <= N-1".into()));
    }
    if n > PAGE_EXACT_MAX_QUBITS {
        return Err(Error::Domain(format!(
            "exact Page evaluation is capped at N = {PAGE_EXACT_MAX_QUBITS} \
             (the harmonic sum has 2^N terms); use the float fallback"
        )));
    }
    let n_b = n - n_a;
    let (hp, hq) = harmonic_range((1u64 << n_b) + 1, 1u64 << n);
    // hp/hq - (2^n_a - 1)/2^(n_b+1)
    let corr_num = pow2(n_a) - BigUint::one();
    let corr_den = pow2(n_b + 1);
    let num = big(&(&hp * &corr_den)) - big(&(&corr_num * &hq));
    let den = big(&(hq * corr_den));
    // reduce only while gcd on the operands is cheap
    let pre_ln2 = if den.bits() <= 1 << 14 {
        BigRational::new(num, den)
    } else {
        BigRational::new_raw(num, den)
    };
    let ebits = rational_to_f64(&pre_ln2) / LN_2;
    Ok(PageAverage { ebits, pre_ln2 })
}

/// Kahan-summed float fallback for the Page average, for N beyond the exact
/// path's comfort.
pub fn page_average_float(n: usize, n_a: usize) -> Result<f64> {
    let n_a = reflect(n, n_a)?;
    if n_a == 0 {
        return Err(Error::Domain("the Page average needs 1 <= n_a <= N-1".into()));
    }
    if n > PAGE_FLOAT_MAX_QUBITS {
        return Err(Error::Domain(format!(
            "the float Page fallback is capped at N = {PAGE_FLOAT_MAX_QUBITS}"
        )));
    }
    let n_b = n - n_a;
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for k in (1u64 << n_b) + 1..=1u64 << n {
        let y = 1.0 / k as f64 - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    let corr = (2.0f64.powi(n_a as i32) - 1.0) / 2.0f64.powi(n_b as i32 + 1);
    Ok((sum - corr) / LN_2)
}

/// Exact ratio of the two topmost state counts, `n_(N_A-1) / n_(N_A)`, in
/// the closed form `1/(2^(N-2N_A) - 1/2) - 1/(2^N - 2^(2N_A-1))`, asserted
/// against the direct count ratio.
pub fn mode_ratio(n: usize, n_a: usize) -> Result<BigRational> {
    if n_a == 0 || n < 2 * n_a {
        return Err(Error::Domain(format!(
            "mode ratio needs 1 <= n_a <= N/2, got n_a={n_a}, N={n}"
        )));
    }
    let one = BigInt::one();
    let first = ratio(BigInt::from(2), big(&(pow2(n - 2 * n_a + 1) - BigUint::one())));
    let second = ratio(one, big(&(pow2(n) - pow2(2 * n_a - 1))));
    let value = first - second;
    let above = count_states(n, n_a, n_a - 1)?;
    let below = count_states(n, n_a, n_a)?;
    assert_eq!(value, ratio(big(&above), big(&below)), "closed form disagrees with counts");
    Ok(value)
}

// ---------------------------------------------------------------------------
// big-number float helpers
// ---------------------------------------------------------------------------

/// Top-53-bit mantissa and shift for a positive big integer.
fn big_to_f64_parts(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 53 {
        (x.to_f64().expect("small biguint converts"), 0)
    } else {
        let shift = bits - 53;
        ((x >> shift).to_f64().expect("53-bit value converts"), shift as i64)
    }
}

/// Float value of an exact rational of arbitrary size (two roundings).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    if num.is_zero() {
        return 0.0;
    }
    let (mn, en) = big_to_f64_parts(num.magnitude());
    let (md, ed) = big_to_f64_parts(den.magnitude());
    let sign = if num.is_negative() != den.is_negative() { -1.0 } else { 1.0 };
    sign * (mn / md) * 2.0f64.powi((en - ed) as i32)
}

/// `log2` of a positive big integer, accurate to ~1 ulp of the mantissa.
pub fn biguint_log2(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let (m, e) = big_to_f64_parts(x);
    m.log2() + e as f64
}

/// `log2` of a positive exact rational.
pub fn rational_log2(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    biguint_log2(r.numer().magnitude()) - biguint_log2(r.denom().magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn total_counts_match_known_values() {
        assert_eq!(n_total(1).unwrap(), BigUint::from(6u32));
        assert_eq!(n_total(2).unwrap(), BigUint::from(60u32));
        assert_eq!(n_total(3).unwrap(), BigUint::from(1080u32));
        assert_eq!(n_total(4).unwrap(), BigUint::from(36720u32));
        assert_eq!(n_total(5).unwrap(), BigUint::from(2_423_520u32));
        assert!(n_total(0).is_err());
    }

    #[test]
    fn separable_counts_match_known_values() {
        assert_eq!(n_separable(2, 1).unwrap(), BigUint::from(36u32));
        assert_eq!(n_separable(3, 1).unwrap(), BigUint::from(360u32));
        assert_eq!(n_separable(4, 2).unwrap(), BigUint::from(3600u32));
        assert!(n_separable(3, 0).is_err());
        assert!(n_separable(3, 3).is_err());
    }

    #[test]
    fn probabilities_match_known_values() {
        assert_eq!(probability(2, 1, 0).unwrap(), rat(3, 5));
        assert_eq!(probability(2, 1, 1).unwrap(), rat(2, 5));
        assert_eq!(probability(3, 1, 1).unwrap(), rat(2, 3));
        // frozen from enumerating all 36720 four-qubit states
        assert_eq!(probability(4, 2, 0).unwrap(), rat(5, 51));
        assert_eq!(probability(4, 2, 1).unwrap(), rat(10, 17));
        assert_eq!(probability(4, 2, 2).unwrap(), rat(16, 51));
    }

    #[test]
    fn out_of_range_e_is_exact_zero() {
        assert_eq!(probability(4, 2, 3).unwrap(), BigRational::zero());
        assert_eq!(probability(4, 1, 2).unwrap(), BigRational::zero());
    }

    #[test]
    fn degenerate_cut_is_point_distribution() {
        assert_eq!(probability(4, 0, 0).unwrap(), BigRational::one());
        assert_eq!(probability(4, 4, 0).unwrap(), BigRational::one());
        assert_eq!(probability(4, 0, 1).unwrap(), BigRational::zero());
    }

    #[test]
    fn counts_match_known_values() {
        assert_eq!(count_states(2, 1, 1).unwrap(), BigUint::from(24u32));
        assert_eq!(count_states(3, 1, 1).unwrap(), BigUint::from(720u32));
        assert_eq!(count_states(4, 2, 2).unwrap(), BigUint::from(11520u32));
    }

    #[test]
    fn distribution_invariants() {
        let d = distribution(2, 1).unwrap();
        assert_eq!(d.counts(), &[BigUint::from(36u32), BigUint::from(24u32)]);
        let d = distribution(3, 1).unwrap();
        assert_eq!(d.counts(), &[BigUint::from(360u32), BigUint::from(720u32)]);
        for n in 2..=12 {
            for n_a in 1..n {
                let d = distribution(n, n_a).unwrap();
                let total: BigUint = d.counts().iter().sum();
                assert_eq!(&total, d.total_states());
                let psum: BigRational = d.probs().iter().sum();
                assert!(psum.is_one());
            }
        }
    }

    #[test]
    fn cut_symmetry() {
        for n in 2..=14 {
            for n_a in 1..n {
                for e in 0..=n / 2 {
                    assert_eq!(
                        probability(n, n_a, e).unwrap(),
                        probability(n, n - n_a, e).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn separable_boundary() {
        for n in 2..=12 {
            for n_a in 1..n {
                let p0 = probability(n, n_a, 0).unwrap();
                let expect = BigRational::new(
                    big(&n_separable(n, n_a).unwrap()),
                    big(&n_total(n).unwrap()),
                );
                assert_eq!(p0, expect);
            }
        }
    }

    #[test]
    fn count_recursion_stays_integer() {
        for n in 2..=20 {
            for n_a in 1..n {
                for e in 0..=n_a.min(n - n_a) {
                    count_states(n, n_a, e).unwrap(); // asserts internally
                }
            }
        }
    }

    #[test]
    fn log2_form_matches_exact_small_case() {
        let lp = probability_log2(2, 1, 0).unwrap();
        let expected = -1.0 + (6.0f64 / 5.0).log2();
        assert!((lp.exponent - expected).abs() < 1e-12);
        assert!((lp.probability - 0.6).abs() < 1e-12);
    }

    #[test]
    fn log2_form_agrees_with_exact_rationals() {
        for n in 2..=24 {
            for n_a in 1..n {
                for e in 0..=n_a.min(n - n_a) {
                    let exact = probability(n, n_a, e).unwrap();
                    let lp = probability_log2(n, n_a, e).unwrap();
                    let d = lp.exponent - rational_log2(&exact);
                    assert!(
                        (d.exp2() - 1.0).abs() < 1e-9,
                        "mismatch at N={n} N_A={n_a} E={e}"
                    );
                }
            }
        }
    }

    #[test]
    fn log2_form_shows_shifted_mode_at_large_n() {
        let p49 = probability_log2(100, 50, 49).unwrap();
        let p50 = probability_log2(100, 50, 50).unwrap();
        assert!(p49.exponent > p50.exponent);
    }

    #[test]
    fn averages_match_known_values() {
        assert_eq!(average_entanglement(2, 1).unwrap(), rat(2, 5));
        assert_eq!(average_entanglement(3, 1).unwrap(), rat(2, 3));
        // frozen: exact mean for the balanced ten-qubit cut
        assert_eq!(
            average_entanglement(10, 5).unwrap(),
            BigRational::new(BigInt::from(104_521_072_066i64), BigInt::from(25_180_532_325i64))
        );
    }

    #[test]
    fn single_qubit_average_identity() {
        for n in 2..=40 {
            let expect = BigRational::one()
                - BigRational::new(BigInt::from(3), big(&(pow2(n) + BigUint::one())));
            assert_eq!(average_entanglement(n, 1).unwrap(), expect);
        }
    }

    #[test]
    fn average_lower_bound_is_below_exact() {
        for n in 4..=30 {
            for n_a in 2..=n / 2 {
                let exact = rational_to_f64(&average_entanglement(n, n_a).unwrap());
                let bound = average_lower_bound(n, n_a).unwrap();
                assert!(bound <= exact, "bound above exact at N={n} N_A={n_a}");
            }
        }
        // frozen gap for the balanced ten-qubit cut: 0.10710 (a tight fit)
        let exact = rational_to_f64(&average_entanglement(10, 5).unwrap());
        let bound = average_lower_bound(10, 5).unwrap();
        assert!((exact - bound - 0.107_096).abs() < 1e-4);
    }

    #[test]
    fn average_lower_bound_na1_is_exact() {
        let v = average_lower_bound(10, 1).unwrap();
        assert!((v - (1.0 - 3.0 / 1025.0)).abs() < 1e-15);
    }

    #[test]
    fn sigma1_below_s1_bound() {
        for n in 4..=30 {
            for n_a in 2..=n / 2 {
                assert!(sigma1(n, n_a).unwrap() <= s1_bound(n_a).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn sigma2_below_pointwise_bound() {
        for n in 4..=30 {
            for n_a in 2..=n / 2 {
                for e in 1..=n_a.min(n - n_a) {
                    assert!(
                        sigma2(n, n_a, e).unwrap() <= s2_bound_at(n, n_a, e).unwrap() + 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn tail_empty_sum_is_zero() {
        // E[S_A] for N=4, N_A=2 is ~1.2157, so eps=1 floors the limit to 0
        let report = tail_probability(4, 2, &rat(1, 1), TailMode::PaperLiteral).unwrap();
        assert_eq!(report.threshold, 0);
        assert!(report.exact_tail.is_zero());
    }

    #[test]
    fn tail_matches_frozen_value() {
        let report = tail_probability(10, 5, &rat(2, 1), TailMode::PaperLiteral).unwrap();
        assert_eq!(report.threshold, 2);
        assert_eq!(
            report.exact_tail,
            BigRational::new(BigInt::from(43_489_094i64), BigInt::from(8_393_510_775i64))
        );
        // the same sum assembled from the distribution
        let d = distribution(10, 5).unwrap();
        let direct: BigRational = d.probs()[1..=2].iter().sum();
        assert_eq!(report.exact_tail, direct);
    }

    #[test]
    fn inclusive_tail_adds_p0() {
        let lit = tail_probability(10, 5, &rat(2, 1), TailMode::PaperLiteral).unwrap();
        let inc = tail_probability(10, 5, &rat(2, 1), TailMode::Inclusive).unwrap();
        let p0 = probability(10, 5, 0).unwrap();
        assert_eq!(inc.exact_tail, lit.exact_tail.clone() + p0);
        assert!(inc.exact_tail >= lit.exact_tail);
    }

    #[test]
    fn tail_epsilon_range_enforced() {
        assert!(tail_probability(10, 5, &rat(5, 1), TailMode::PaperLiteral).is_err());
        assert!(tail_probability(10, 5, &rat(1, 2), TailMode::PaperLiteral).is_err());
        assert!(tail_probability(10, 5, &rat(1, 2), TailMode::Inclusive).is_ok());
        assert!(tail_probability(10, 5, &rat(-1, 1), TailMode::Inclusive).is_err());
    }

    #[test]
    fn gaussian_bound_dominates_exact_tail_spot_checks() {
        for (n, n_a, eps) in [(10, 5, 1), (10, 5, 2), (12, 4, 1), (20, 10, 3), (30, 15, 5)] {
            let report = tail_probability(n, n_a, &rat(eps, 1), TailMode::PaperLiteral).unwrap();
            let bound = report.gaussian_bound.unwrap();
            assert!(bound >= rational_to_f64(&report.exact_tail));
        }
    }

    #[test]
    fn gaussian_bound_monotone_in_epsilon() {
        let mut prev = f64::INFINITY;
        for eps in 1..=9 {
            let b = tail_bound_gaussian(20, 10, &rat(eps, 1)).unwrap();
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn gaussian_bound_small_at_comfortable_epsilon() {
        let b = tail_bound_gaussian(20, 10, &rat(5, 1)).unwrap();
        assert!(b > 0.0 && b < 1e-3, "bound {b}");
    }

    #[test]
    fn erfc_reference_values() {
        // guards the erfc dependency against precision regressions
        for (x, want) in [
            (2.0, 4.677_734_981_063_127e-3),
            (5.0, 1.537_459_794_428_035e-12),
            (7.0, 4.183_825_607_779_414e-23),
        ] {
            let got = erfc(x);
            assert!(((got - want) / want).abs() < 1e-10, "erfc({x}) = {got}");
        }
    }

    #[test]
    fn page_average_small_case() {
        let page = page_average(2, 1).unwrap();
        assert_eq!(page.pre_ln2, rat(1, 3));
        assert!((page.ebits - 1.0 / (3.0 * LN_2)).abs() < 1e-14);
    }

    #[test]
    fn page_average_matches_float_fallback() {
        for n in 2..=14 {
            for n_a in 1..n {
                let exact = page_average(n, n_a).unwrap().ebits;
                let float = page_average_float(n, n_a).unwrap();
                assert!((exact - float).abs() < 1e-9, "N={n} N_A={n_a}");
            }
        }
    }

    #[test]
    fn page_average_exceeds_stabilizer_average_at_ten_qubits() {
        for n_a in 1..10 {
            let page = page_average(10, n_a).unwrap().ebits;
            let stab = rational_to_f64(&average_entanglement(10, n_a).unwrap());
            assert!(page >= stab);
        }
    }

    #[test]
    fn mode_ratio_matches_counts_and_limits() {
        // checked internally against count_states by assertion
        let r = mode_ratio(2, 1).unwrap();
        assert_eq!(r, rat(3, 2));
        // N = 2k, n_a = k: ratio -> 2 from below as k grows
        let r = mode_ratio(60, 30).unwrap();
        assert!((rational_to_f64(&r) - 2.0).abs() < 1e-6);
        // fixed n_a, growing N: ratio -> 0 exponentially
        let r10 = rational_to_f64(&mode_ratio(10, 2).unwrap());
        let r20 = rational_to_f64(&mode_ratio(20, 2).unwrap());
        let r30 = rational_to_f64(&mode_ratio(30, 2).unwrap());
        assert!(r10 < 0.02 && r20 / r10 < 1e-2 && r30 / r20 < 1e-2);
        assert!(mode_ratio(5, 3).is_err());
    }

    #[test]
    fn rational_float_helpers_handle_huge_values() {
        let huge = n_total(40).unwrap();
        let lg = biguint_log2(&huge);
        assert!(lg > 800.0 && lg < 900.0);
        let r = BigRational::new(BigInt::one(), big(&huge));
        let f = rational_to_f64(&r);
        assert!(f > 0.0 && (rational_log2(&r) - f.log2()).abs() < 1e-9);
        assert_eq!(rational_to_f64(&BigRational::zero()), 0.0);
        assert!((rational_to_f64(&rat(-3, 4)) + 0.75).abs() < 1e-15);
    }

    #[test]
    fn distribution_mode_matches_argmax() {
        let d = distribution(10, 5).unwrap();
        assert_eq!(d.mode(), 4);
        let d = distribution(9, 2).unwrap();
        let probs: Vec<f64> = d.probs().iter().map(rational_to_f64).collect();
        let argmax = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(d.mode(), argmax);
    }

    #[test]
    fn bound_constants_are_consistent() {
        let c = bound_constants(10, 5, 3).unwrap();
        assert!(c.sigma1 <= c.s1);
        assert!(c.gamma > 0.0);
        assert!((c.h - (4.0f64 / 3.0).log2()).abs() < 1e-15);
        assert!((c.sigma2 - sigma2(10, 5, 3).unwrap()).abs() < 1e-15);
        assert!(BigRational::from_f64(0.5).unwrap() < rat(3, 4)); // sanity on ordering
    }
}
