//! Signed N-qubit Pauli strings in the binary-symplectic encoding.
//!
//! A Pauli string is stored as two bit rows (X-part, Z-part) plus a sign in
//! {+1, -1}. Per qubit the letter is read off the (x, z) bit pair as
//! I=(0,0), X=(1,0), Z=(0,1), Y=(1,1). Two strings commute exactly when
//! their symplectic inner product `x1.z2 + z1.x2 mod 2` vanishes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitRow;

/// Sign of a Hermitian Pauli operator. Phases +/-i never arise here: products
/// are only taken between commuting operators, which closes over {+1, -1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// One single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (false, true) => PauliLetter::Z,
            (true, true) => PauliLetter::Y,
        }
    }

    fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A signed N-qubit Pauli string.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitRow,
    z: BitRow,
    sign: Sign,
}

impl PauliOperator {
    /// Build from explicit bit rows. The rows must have equal, nonzero length.
    pub fn new(x: BitRow, z: BitRow, sign: Sign) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension(format!(
                "x part has {} bits but z part has {}",
                x.len(),
                z.len()
            )));
        }
        if x.is_empty() {
            return Err(Error::Domain("a Pauli string needs at least one qubit".into()));
        }
        Ok(PauliOperator { x, z, sign })
    }

    pub fn identity(num_qubits: usize) -> Self {
        PauliOperator {
            x: BitRow::zeros(num_qubits),
            z: BitRow::zeros(num_qubits),
            sign: Sign::Plus,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        PauliOperator { x: self.x.clone(), z: self.z.clone(), sign }
    }

    pub fn x_bits(&self) -> &BitRow {
        &self.x
    }

    pub fn z_bits(&self) -> &BitRow {
        &self.z
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        PauliLetter::from_xz(self.x.get(qubit), self.z.get(qubit))
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// The concatenated (x|z) check-matrix row of this operator.
    pub fn check_row(&self) -> BitRow {
        self.x.concat(&self.z)
    }

    /// Rebuild from a (x|z) check row of even length.
    pub fn from_check_row(row: &BitRow, sign: Sign) -> Result<Self> {
        if !row.len().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "check row length {} is odd",
                row.len()
            )));
        }
        let n = row.len() / 2;
        PauliOperator::new(row.slice(0, n), row.slice(n, 2 * n), sign)
    }

    /// Symplectic inner product `x1.z2 + z1.x2 mod 2`; zero iff the two
    /// operators commute. Signs are irrelevant to commutation.
    pub fn symplectic_inner(&self, other: &PauliOperator) -> Result<bool> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::Dimension(format!(
                "operators act on {} vs {} qubits",
                self.num_qubits(),
                other.num_qubits()
            )));
        }
        Ok(self.x.dot(&other.z) ^ self.z.dot(&other.x))
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> Result<bool> {
        Ok(!self.symplectic_inner(other)?)
    }

    /// Product of two commuting Pauli strings, with the sign tracked through
    /// the per-qubit phase rule. Anticommuting inputs are rejected: their
    /// product carries a phase +/-i, which this representation excludes.
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        if self.symplectic_inner(other)? {
            return Err(Error::Contract(
                "product of anticommuting Pauli strings has an imaginary phase".into(),
            ));
        }
        let n = self.num_qubits();
        // Accumulate the exponent t of i in prod_q (sigma_q of self)(sigma_q
        // of other) = i^t (combined string). For commuting inputs t is even,
        // so the result is Hermitian with sign (-1)^(t/2).
        let mut t: i64 = 0;
        for q in 0..n {
            let (x1, z1) = (self.x.get(q), self.z.get(q));
            let (x2, z2) = (other.x.get(q), other.z.get(q));
            t += match (x1, z1) {
                (false, false) => 0,
                (true, true) => z2 as i64 - x2 as i64,
                (true, false) => {
                    if z2 {
                        2 * (x2 as i64) - 1
                    } else {
                        0
                    }
                }
                (false, true) => {
                    if x2 {
                        1 - 2 * (z2 as i64)
                    } else {
                        0
                    }
                }
            };
        }
        debug_assert!(t.rem_euclid(2) == 0, "odd phase exponent for commuting product");
        let mut sign = if t.rem_euclid(4) == 2 { Sign::Minus } else { Sign::Plus };
        if self.sign.is_negative() {
            sign = sign.flip();
        }
        if other.sign.is_negative() {
            sign = sign.flip();
        }
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        Ok(PauliOperator { x, z, sign })
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign.is_negative() {
            write!(f, "-")?;
        }
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.letter(q).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parse strings like `XIZ`, `-YY` or `+ZZ`. `parse . to_string` is the
    /// identity on every valid operator.
    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (Sign::Minus, rest),
            None => (Sign::Plus, s.strip_prefix('+').unwrap_or(s)),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string {s:?}")));
        }
        let n = body.chars().count();
        let mut x = BitRow::zeros(n);
        let mut z = BitRow::zeros(n);
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                }
                other => {
                    return Err(Error::Parse(format!(
                        "invalid Pauli letter {other:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(PauliOperator { x, z, sign })
    }
}
