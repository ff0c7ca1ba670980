//! Pure stabilizer states as signed generator sets, entanglement across a
//! bipartite cut, and canonical forms for deduplication.
//!
//! A pure state on N qubits is held as N independent, mutually commuting
//! signed Pauli generators (a check matrix with a sign per row). The
//! entanglement across a cut follows from GF(2) ranks of column-restricted
//! submatrices: with `rank_A` the rank of the rows restricted to side A's
//! x and z columns, `E = rank_A - N_A = rank_B - N_B`, and the subgroup
//! supported on one side has minimal generator count `N - rank_other_side`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{self, BitRow};
use crate::pauli::{PauliOperator, Sign};

/// A bipartition of N qubits into a contiguous prefix A and suffix B.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutSpec {
    n_a: usize,
    n_b: usize,
}

impl CutSpec {
    pub fn new(n_a: usize, n_b: usize) -> Self {
        CutSpec { n_a, n_b }
    }

    /// The cut putting the first `n_a` of `n` qubits on side A.
    pub fn prefix(n_a: usize, n: usize) -> Result<Self> {
        if n_a > n {
            return Err(Error::Domain(format!("cut size {n_a} exceeds qubit count {n}")));
        }
        Ok(CutSpec { n_a, n_b: n - n_a })
    }

    pub fn side_a(&self) -> usize {
        self.n_a
    }

    pub fn side_b(&self) -> usize {
        self.n_b
    }

    pub fn total(&self) -> usize {
        self.n_a + self.n_b
    }

    /// The same bipartition with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        CutSpec { n_a: self.n_b, n_b: self.n_a }
    }

    fn check_against(&self, n: usize) -> Result<()> {
        if self.total() != n {
            return Err(Error::Dimension(format!(
                "cut ({}, {}) does not sum to {} qubits",
                self.n_a, self.n_b, n
            )));
        }
        Ok(())
    }
}

/// One side of a cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A violation found while checking a candidate generator set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Generators act on differing qubit counts.
    LengthMismatch { row: usize, expected: usize, actual: usize },
    /// K != N: only pure states (full generator sets) are supported.
    NotPure { num_qubits: usize, generators: usize },
    /// Two generators anticommute.
    NonCommuting { row_a: usize, row_b: usize },
    /// The check-matrix rows are linearly dependent over GF(2).
    DependentRows { rank: usize, rows: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch { row, expected, actual } => {
                write!(f, "generator {row} acts on {actual} qubits, expected {expected}")
            }
            Violation::NotPure { num_qubits, generators } => {
                write!(f, "{generators} generators for {num_qubits} qubits (pure states need K = N)")
            }
            Violation::NonCommuting { row_a, row_b } => {
                write!(f, "generators {row_a} and {row_b} anticommute")
            }
            Violation::DependentRows { rank, rows } => {
                write!(f, "check matrix has rank {rank} < {rows} rows")
            }
        }
    }
}

/// Check pairwise commutation and GF(2) row independence of a candidate
/// generator set, reporting every violation found.
pub fn validate_generators(generators: &[PauliOperator]) -> Vec<Violation> {
    let mut violations = Vec::new();
    if generators.is_empty() {
        violations.push(Violation::NotPure { num_qubits: 0, generators: 0 });
        return violations;
    }
    let n = generators[0].num_qubits();
    for (i, g) in generators.iter().enumerate() {
        if g.num_qubits() != n {
            violations.push(Violation::LengthMismatch {
                row: i,
                expected: n,
                actual: g.num_qubits(),
            });
        }
    }
    if !violations.is_empty() {
        return violations; // rank/commutation undefined on ragged input
    }
    if generators.len() != n {
        violations.push(Violation::NotPure { num_qubits: n, generators: generators.len() });
    }
    for i in 0..generators.len() {
        for j in (i + 1)..generators.len() {
            if generators[i].symplectic_inner(&generators[j]).unwrap() {
                violations.push(Violation::NonCommuting { row_a: i, row_b: j });
            }
        }
    }
    let rank = gf2::rank(generators.iter().map(|g| g.check_row()));
    if rank != generators.len() {
        violations.push(Violation::DependentRows { rank, rows: generators.len() });
    }
    violations
}

/// A pure N-qubit stabilizer state: N independent, mutually commuting signed
/// Pauli generators. Valid by construction; all operations are pure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabilizerState {
    generators: Vec<PauliOperator>,
}

impl StabilizerState {
    /// Validate and adopt a generator set. All violations are reported in the
    /// error message; use [`validate_generators`] to inspect them as values.
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self> {
        let violations = validate_generators(&generators);
        if violations.is_empty() {
            Ok(StabilizerState { generators })
        } else {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Err(Error::Contract(msgs.join("; ")))
        }
    }

    /// Adopt generators known valid by construction (sampler, enumerator,
    /// canonicalization). Debug builds still verify.
    pub(crate) fn new_unchecked(generators: Vec<PauliOperator>) -> Self {
        debug_assert!(validate_generators(&generators).is_empty());
        StabilizerState { generators }
    }

    pub fn num_qubits(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// Re-run the construction checks; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        validate_generators(&self.generators)
    }

    /// Rank of the check matrix restricted to one side's x and z columns.
    fn restricted_rank(&self, cut: &CutSpec, side: Side) -> usize {
        let n = self.num_qubits();
        let (lo, hi) = match side {
            Side::A => (0, cut.side_a()),
            Side::B => (cut.side_a(), n),
        };
        gf2::rank(
            self.generators
                .iter()
                .map(|g| g.x_bits().slice(lo, hi).concat(&g.z_bits().slice(lo, hi))),
        )
    }

    /// Entanglement in ebits between the first `cut.side_a()` qubits and the
    /// rest: `E = rank_A - N_A`. Debug builds assert the two-sided identity
    /// `rank_A - N_A = rank_B - N_B`.
    pub fn entanglement(&self, cut: &CutSpec) -> Result<usize> {
        cut.check_against(self.num_qubits())?;
        let e = self.restricted_rank(cut, Side::A) - cut.side_a();
        debug_assert_eq!(
            e,
            self.restricted_rank(cut, Side::B) - cut.side_b(),
            "two-sided entanglement mismatch"
        );
        Ok(e)
    }

    /// Minimal generator count of the subgroup supported entirely on one
    /// side: `|S_side| = N - rank(other side's columns)`.
    pub fn local_subgroup_size(&self, cut: &CutSpec, side: Side) -> Result<usize> {
        cut.check_against(self.num_qubits())?;
        let other = match side {
            Side::A => Side::B,
            Side::B => Side::A,
        };
        Ok(self.num_qubits() - self.restricted_rank(cut, other))
    }

    /// The unique representative of this state's signed stabilizer group:
    /// the row-reduced echelon form of the check matrix (columns ordered
    /// x_1..x_N, z_1..z_N) with each row's sign recomputed through the Pauli
    /// multiplication phase rule. Two generator sets produce identical
    /// canonical forms exactly when they generate the same signed group.
    pub fn canonical_form(&self) -> StabilizerState {
        let n = self.num_qubits();
        let mut rows = self.generators.clone();
        let mut r = 0;
        for col in 0..2 * n {
            let bit_at = |g: &PauliOperator| {
                if col < n {
                    g.x_bits().get(col)
                } else {
                    g.z_bits().get(col - n)
                }
            };
            let Some(pivot) = (r..rows.len()).find(|&i| bit_at(&rows[i])) else {
                continue;
            };
            rows.swap(r, pivot);
            for i in 0..rows.len() {
                if i != r && bit_at(&rows[i]) {
                    // commuting group elements, so the product stays Hermitian
                    rows[i] = rows[i].mul(&rows[r]).expect("group elements commute");
                }
            }
            r += 1;
        }
        debug_assert_eq!(r, n);
        StabilizerState::new_unchecked(rows)
    }

    /// Byte encoding of the canonical form, usable as a deduplication key.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let canon = self.canonical_form();
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&(canon.num_qubits() as u64).to_le_bytes());
        for g in &canon.generators {
            for w in g.x_bits().words() {
                bytes.extend_from_slice(&w.to_le_bytes());
            }
            for w in g.z_bits().words() {
                bytes.extend_from_slice(&w.to_le_bytes());
            }
            bytes.push(g.sign().is_negative() as u8);
        }
        bytes
    }

    /// Relabel qubits: qubit `i` of the result is qubit `perm[i]` of `self`.
    /// `perm` must be a permutation of `0..N`. Arbitrary (non-contiguous)
    /// bipartitions reduce to prefix cuts through this.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_qubits();
        if perm.len() != n {
            return Err(Error::Dimension(format!(
                "permutation length {} for {} qubits",
                perm.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::Domain(format!("not a permutation of 0..{n}")));
            }
            seen[p] = true;
        }
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let x = BitRow::from_bits(n, perm.iter().map(|&p| g.x_bits().get(p)));
                let z = BitRow::from_bits(n, perm.iter().map(|&p| g.z_bits().get(p)));
                PauliOperator::new(x, z, g.sign()).expect("same length")
            })
            .collect();
        Ok(StabilizerState::new_unchecked(generators))
    }

    /// The `|0...0>` state stabilized by `<Z_1, ..., Z_N>`.
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::Domain("need at least one qubit".into()));
        }
        let generators = (0..num_qubits)
            .map(|q| {
                let x = BitRow::zeros(num_qubits);
                let mut z = BitRow::zeros(num_qubits);
                z.set(q, true);
                PauliOperator::new(x, z, Sign::Plus).unwrap()
            })
            .collect();
        Ok(StabilizerState::new_unchecked(generators))
    }
}

impl fmt::Display for StabilizerState {
    /// One generator per line; inverse of [`StabilizerState::from_str`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StabilizerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

impl FromStr for StabilizerState {
    type Err = Error;

    /// Parse one Pauli string per line (blank lines ignored) and validate.
    fn from_str(s: &str) -> Result<Self> {
        let generators: Vec<PauliOperator> = s
            .lines()
            .map(str::trim)
            .filter(|line| !line.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        StabilizerState::new(generators)
    }
}

/// Build a state from whitespace-separated Pauli strings, e.g.
/// `state_from_strs(&["XXX", "IZZ", "ZZI"])`. Test and CLI convenience.
pub fn state_from_strs(gens: &[&str]) -> Result<StabilizerState> {
    StabilizerState::new(gens.iter().map(|s| s.parse()).collect::<Result<_>>()?)
}
