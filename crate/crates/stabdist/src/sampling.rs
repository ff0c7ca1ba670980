//! Independent verification machinery: an exactly uniform sampler over pure
//! stabilizer states, an exhaustive small-N enumerator, and chi-square
//! comparison against the closed-form distribution.
//!
//! The sampler builds a generator set sequentially. With k generators fixed,
//! the signed Pauli strings that commute with all of them and are
//! GF(2)-independent of them number `2 (2^(2N-k) - 2^k)` - a function of k
//! alone, never of which prefix was chosen. Drawing uniformly from that set
//! at every step therefore makes every ordered generating sequence of every
//! stabilizer group equally likely, and since all groups have the same
//! number of ordered generating sequences, the resulting state is uniform
//! over all `n_tot(N)` states. The draw itself picks a uniform solution of
//! the k commutation constraints (a nullspace combination) and rejects
//! dependent picks, which happens with probability `2^k / 2^(2N-k) <= 1/4`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::counts::{rational_to_f64, EntanglementDistribution};
use crate::error::{Error, Result};
use crate::gf2::{self, BitRow, RowBasis};
use crate::pauli::{PauliOperator, Sign};
use crate::state::{CutSpec, StabilizerState};

/// Identifies the sampling algorithm and stream derivation in provenance
/// blocks: worker `w` draws from ChaCha8 keyed by the seed, stream `w`.
pub const SAMPLER_VERSION: &str = "chacha8-streams/1";

/// Exhaustive enumeration is refused above this many qubits.
pub const ENUMERATION_MAX_QUBITS: usize = 5;

/// Configuration for a deterministic, parallel sampling run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub num_qubits: usize,
    pub sample_count: u64,
    pub seed: u64,
    pub worker_count: usize,
}

impl SamplerConfig {
    pub fn new(num_qubits: usize, sample_count: u64, seed: u64, worker_count: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::Domain("need at least one qubit".into()));
        }
        if sample_count == 0 {
            return Err(Error::Domain("sample_count must be at least 1".into()));
        }
        if worker_count == 0 {
            return Err(Error::Domain("worker_count must be at least 1".into()));
        }
        Ok(SamplerConfig { num_qubits, sample_count, seed, worker_count })
    }

    /// The RNG stream owned by one worker: ChaCha8 keyed by the run seed,
    /// with the worker index as the stream number.
    pub fn worker_rng(&self, worker: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(worker as u64);
        rng
    }

    /// How many samples worker `w` of `worker_count` draws.
    fn worker_share(&self, worker: usize) -> u64 {
        let base = self.sample_count / self.worker_count as u64;
        let rem = self.sample_count % self.worker_count as u64;
        base + u64::from((worker as u64) < rem)
    }
}

/// Draw one pure stabilizer state uniformly from all `n_tot(n)` states.
pub fn sample_uniform_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StabilizerState {
    assert!(n >= 1, "need at least one qubit");
    let width = 2 * n;
    let mut generators: Vec<PauliOperator> = Vec::with_capacity(n);
    let mut span = RowBasis::new(width);
    for _ in 0..n {
        // rows v with v . swap(g) = 0 for all chosen g, i.e. commuting rows
        let constraints: Vec<BitRow> = generators
            .iter()
            .map(|g| g.z_bits().concat(g.x_bits()))
            .collect();
        let kernel = gf2::nullspace(&constraints, width);
        loop {
            let mut v = BitRow::zeros(width);
            for basis_vec in &kernel {
                if rng.gen::<bool>() {
                    v.xor_assign(basis_vec);
                }
            }
            if span.contains(&v) {
                continue; // dependent (or zero) pick; at most 1/4 of draws
            }
            span.insert(v.clone());
            let sign = if rng.gen::<bool>() { Sign::Minus } else { Sign::Plus };
            generators.push(PauliOperator::from_check_row(&v, sign).expect("even width"));
            break;
        }
    }
    StabilizerState::new_unchecked(generators)
}

// ---------------------------------------------------------------------------
// exhaustive enumeration
// ---------------------------------------------------------------------------
//
// For N <= 5 a whole check-matrix row fits in one u64 (bit i = x_i, bit
// N+i = z_i), so subspace bookkeeping runs on plain words. States are
// enumerated as (maximal isotropic subspace, sign vector): the subspaces are
// grown one commuting independent row at a time and deduplicated by their
// reduced row echelon form, and each of the 2^N sign assignments to the
// echelon rows then names a distinct state exactly once.

fn swap_halves(row: u64, n: usize) -> u64 {
    let mask = (1u64 << n) - 1;
    ((row & mask) << n) | (row >> n)
}

fn reduce_by(rows: &[u64], mut v: u64) -> u64 {
    for &r in rows {
        let pivot = r.trailing_zeros();
        if v >> pivot & 1 == 1 {
            v ^= r;
        }
    }
    v
}

/// In-place reduced row echelon form; rows end up sorted by pivot.
fn rref_rows(rows: &mut Vec<u64>) {
    let mut done: Vec<u64> = Vec::with_capacity(rows.len());
    while let Some(mut v) = rows.pop() {
        v = reduce_by(&done, v);
        if v != 0 {
            for d in done.iter_mut() {
                if *d >> v.trailing_zeros() & 1 == 1 {
                    *d ^= v;
                }
            }
            done.push(v);
        }
    }
    done.sort_unstable_by_key(|r| r.trailing_zeros());
    *rows = done;
}

fn word_nullspace(constraints: &[u64], width: usize) -> Vec<u64> {
    let mut reduced = constraints.to_vec();
    rref_rows(&mut reduced);
    let pivots: Vec<u32> = reduced.iter().map(|r| r.trailing_zeros()).collect();
    let mut kernel = Vec::with_capacity(width - reduced.len());
    for free in 0..width as u32 {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = 1u64 << free;
        for (&row, &p) in reduced.iter().zip(&pivots) {
            if row >> free & 1 == 1 {
                v |= 1u64 << p;
            }
        }
        kernel.push(v);
    }
    kernel
}

/// All maximal isotropic subspaces of the 2n-dimensional symplectic GF(2)
/// space, each as the rows of its reduced row echelon form.
fn enumerate_stabilizer_groups(n: usize) -> Vec<Vec<u64>> {
    let width = 2 * n;
    let mut level: HashSet<Vec<u64>> = HashSet::new();
    level.insert(Vec::new());
    for step in 0..n {
        let mut next: HashSet<Vec<u64>> = HashSet::new();
        for subspace in &level {
            let constraints: Vec<u64> =
                subspace.iter().map(|&r| swap_halves(r, n)).collect();
            let kernel = word_nullspace(&constraints, width);
            debug_assert_eq!(kernel.len(), width - step);
            for mask in 1u64..1 << kernel.len() {
                let mut v = 0u64;
                for (i, &k) in kernel.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v ^= k;
                    }
                }
                if reduce_by(subspace, v) == 0 {
                    continue; // already in the span
                }
                let mut rows = subspace.clone();
                rows.push(v);
                rref_rows(&mut rows);
                next.insert(rows);
            }
        }
        level = next;
    }
    let mut groups: Vec<Vec<u64>> = level.into_iter().collect();
    groups.sort_unstable();
    groups
}

fn state_from_rows(rows: &[u64], sign_mask: u64, n: usize) -> StabilizerState {
    let generators = rows
        .iter()
        .enumerate()
        .map(|(i, &row)| {
            let x = BitRow::from_bits(n, (0..n).map(|q| row >> q & 1 == 1));
            let z = BitRow::from_bits(n, (0..n).map(|q| row >> (n + q) & 1 == 1));
            let sign = if sign_mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus };
            PauliOperator::new(x, z, sign).expect("equal lengths")
        })
        .collect();
    StabilizerState::new_unchecked(generators)
}

/// Every distinct pure stabilizer state on `n` qubits, exactly once, in a
/// deterministic order. Refused for `n` above [`ENUMERATION_MAX_QUBITS`]:
/// the state count `2^N prod (2^k+1)` grows too fast (2,423,520 states at
/// N = 5; 315,057,600 already at N = 6).
pub fn enumerate_all_states(n: usize) -> Result<impl Iterator<Item = StabilizerState>> {
    if n == 0 {
        return Err(Error::Domain("need at least one qubit".into()));
    }
    if n > ENUMERATION_MAX_QUBITS {
        return Err(Error::Domain(format!(
            "enumeration is refused for N = {n}: the state count grows as \
             2^N prod(2^k+1), reaching 315,057,600 at N = 6; the cap is N = \
             {ENUMERATION_MAX_QUBITS} (2,423,520 states)"
        )));
    }
    let groups = enumerate_stabilizer_groups(n);
    Ok(groups.into_iter().flat_map(move |rows| {
        (0..1u64 << n)
            .map(|mask| state_from_rows(&rows, mask, n))
            .collect::<Vec<_>>()
    }))
}

/// Ground-truth entanglement histogram: `entanglement(state, cut)` tallied
/// over every enumerated state. The oracle the closed forms are checked
/// against.
pub fn brute_force_counts(n: usize, n_a: usize) -> Result<Vec<u64>> {
    let cut = CutSpec::prefix(n_a, n)?;
    let mut hist = vec![0u64; n_a.min(n - n_a) + 1];
    for state in enumerate_all_states(n)? {
        let e = state.entanglement(&cut).expect("enumerated states are valid");
        hist[e] += 1;
    }
    Ok(hist)
}

// ---------------------------------------------------------------------------
// empirical histograms
// ---------------------------------------------------------------------------

/// Sampled entanglement histogram with its reproducibility provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalHistogram {
    num_qubits: usize,
    side_a: usize,
    counts_by_e: Vec<u64>,
    total_samples: u64,
    seed: u64,
    worker_count: usize,
}

impl EmpiricalHistogram {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn side_a(&self) -> usize {
        self.side_a
    }

    pub fn counts_by_e(&self) -> &[u64] {
        &self.counts_by_e
    }

    pub fn total_samples(&self) -> u64 {
        self.total_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn worker_count(&self) -> usize {
        self.worker_count
    }

    /// Total variation distance between the empirical frequencies and an
    /// exact distribution on the same support.
    pub fn total_variation_distance(&self, exact: &EntanglementDistribution) -> Result<f64> {
        check_shapes(self, exact)?;
        let total = self.total_samples as f64;
        let mut tv = 0.0;
        for (o, p) in self.counts_by_e.iter().zip(exact.probs()) {
            tv += (*o as f64 / total - rational_to_f64(p)).abs();
        }
        Ok(tv / 2.0)
    }
}

/// Sample `config.sample_count` states and histogram their entanglement
/// across the prefix cut of size `n_a`.
///
/// Deterministic in `(seed, worker_count)`: worker `w` owns ChaCha8 stream
/// `w` and a fixed share of the samples, and the per-worker histograms are
/// summed in worker order, so the result is bit-identical across reruns
/// regardless of thread scheduling.
pub fn empirical_distribution(config: &SamplerConfig, n_a: usize) -> Result<EmpiricalHistogram> {
    let n = config.num_qubits;
    let cut = CutSpec::prefix(n_a, n)?;
    let bins = n_a.min(n - n_a) + 1;
    let run_worker = |worker: usize| -> Vec<u64> {
        let mut rng = config.worker_rng(worker);
        let mut hist = vec![0u64; bins];
        for _ in 0..config.worker_share(worker) {
            let state = sample_uniform_state(n, &mut rng);
            let e = state.entanglement(&cut).expect("sampled states are valid");
            hist[e] += 1;
        }
        hist
    };
    let partials: Vec<Vec<u64>> = if config.worker_count == 1 {
        vec![run_worker(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..config.worker_count)
                .map(|w| scope.spawn(move || run_worker(w)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut counts_by_e = vec![0u64; bins];
    for partial in partials {
        for (acc, c) in counts_by_e.iter_mut().zip(partial) {
            *acc += c;
        }
    }
    Ok(EmpiricalHistogram {
        num_qubits: n,
        side_a: n_a,
        counts_by_e,
        total_samples: config.sample_count,
        seed: config.seed,
        worker_count: config.worker_count,
    })
}

// ---------------------------------------------------------------------------
// chi-square goodness of fit
// ---------------------------------------------------------------------------

/// Pearson chi-square result.
#[derive(Clone, Copy, Debug)]
pub struct ChiSquare {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit test of observed counts against given bin
/// probabilities (no pooling; bins with zero probability must be unobserved).
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probs.len() {
        return Err(Error::Dimension(format!(
            "{} observed bins vs {} probabilities",
            observed.len(),
            probs.len()
        )));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::Domain("no observations".into()));
    }
    let psum: f64 = probs.iter().sum();
    if (psum - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("bin probabilities sum to {psum}, not 1")));
    }
    let mut statistic = 0.0;
    let mut bins = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            if o > 0 {
                return Ok(ChiSquare {
                    statistic: f64::INFINITY,
                    degrees_of_freedom: observed.len().saturating_sub(1),
                    p_value: 0.0,
                });
            }
            continue;
        }
        bins += 1;
        let expected = total as f64 * p;
        let d = o as f64 - expected;
        statistic += d * d / expected;
    }
    let degrees_of_freedom = bins.saturating_sub(1);
    let p_value = if degrees_of_freedom == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(degrees_of_freedom as f64)
            .expect("positive dof")
            .cdf(statistic)
    };
    Ok(ChiSquare { statistic, degrees_of_freedom, p_value })
}

fn check_shapes(hist: &EmpiricalHistogram, exact: &EntanglementDistribution) -> Result<()> {
    let hn = hist.num_qubits;
    let en = exact.total_qubits();
    let hmin = hist.side_a.min(hn - hist.side_a);
    let emin = exact.side_a().min(en - exact.side_a());
    if hn != en || hmin != emin || hist.counts_by_e.len() != exact.probs().len() {
        return Err(Error::Dimension(format!(
            "histogram is for (N={hn}, N_A={}) but distribution is for (N={en}, N_A={})",
            hist.side_a,
            exact.side_a()
        )));
    }
    Ok(())
}

/// Pearson chi-square of an empirical histogram against the exact
/// distribution, with deterministic pooling: a single left-to-right sweep
/// accumulates bins until the pooled expected count reaches 5, and a
/// trailing underweight pool is merged backward into its predecessor (so
/// tail bins always pool toward the distribution's interior mode).
pub fn chi_square_test(
    hist: &EmpiricalHistogram,
    exact: &EntanglementDistribution,
) -> Result<ChiSquare> {
    check_shapes(hist, exact)?;
    let total = hist.total_samples as f64;
    let mut pooled_obs: Vec<u64> = Vec::new();
    let mut pooled_p: Vec<f64> = Vec::new();
    let mut acc_obs = 0u64;
    let mut acc_p = 0.0f64;
    for (o, p) in hist.counts_by_e.iter().zip(exact.probs()) {
        acc_obs += *o;
        acc_p += rational_to_f64(p);
        if acc_p * total >= 5.0 {
            pooled_obs.push(acc_obs);
            pooled_p.push(acc_p);
            acc_obs = 0;
            acc_p = 0.0;
        }
    }
    if acc_p > 0.0 || acc_obs > 0 {
        if let (Some(last_o), Some(last_p)) = (pooled_obs.last_mut(), pooled_p.last_mut()) {
            *last_o += acc_obs;
            *last_p += acc_p;
        } else {
            pooled_obs.push(acc_obs);
            pooled_p.push(acc_p);
        }
    }
    // absorb float drift so the probabilities still sum to 1
    let psum: f64 = pooled_p.iter().sum();
    for p in pooled_p.iter_mut() {
        *p /= psum;
    }
    chi_square_gof(&pooled_obs, &pooled_p)
}

/// Chi-square of sampled canonical-state frequencies against the uniform
/// distribution over all `n_tot(n)` states (single-threaded; practical for
/// n <= 2 where the state space is tiny).
pub fn canonical_uniformity_chi_square(n: usize, samples: u64, seed: u64) -> Result<ChiSquare> {
    let all: Vec<Vec<u8>> = enumerate_all_states(n)?
        .map(|s| s.canonical_bytes())
        .collect();
    let index: std::collections::HashMap<&[u8], usize> =
        all.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let mut observed = vec![0u64; all.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let state = sample_uniform_state(n, &mut rng);
        let key = state.canonical_bytes();
        let slot = index
            .get(key.as_slice())
            .expect("sampled state must appear in the enumeration");
        observed[*slot] += 1;
    }
    let probs = vec![1.0 / all.len() as f64; all.len()];
    chi_square_gof(&observed, &probs)
}
