//! Pauli strings and weighted sums of them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::state::QuantumState;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const IM: C64 = C64::new(0.0, 1.0);

/// Coefficients at or below this magnitude are dropped.
pub const DROP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Pauli> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::Argument(alloc::format!("unknown Pauli letter {c:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `self * other = phase * result`.
    pub fn mul(self, other: Pauli) -> (C64, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (a, b) if a == b => (ONE, I),
            (X, Y) => (IM, Z),
            (Y, X) => (-IM, Z),
            (Y, Z) => (IM, X),
            (Z, Y) => (-IM, X),
            (Z, X) => (IM, Y),
            (X, Z) => (-IM, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::I => Gate::I.matrix(),
            Pauli::X => Gate::X.matrix(),
            Pauli::Y => Gate::Y.matrix(),
            Pauli::Z => Gate::Z.matrix(),
        }
    }

    pub fn gate(self) -> Gate {
        match self {
            Pauli::I => Gate::I,
            Pauli::X => Gate::X,
            Pauli::Y => Gate::Y,
            Pauli::Z => Gate::Z,
        }
    }
}

/// Tensor product of single-qubit Paulis; letter `q` acts on qubit `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString { letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString { letters: vec![Pauli::I; n] }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s.chars().map(Pauli::from_char).collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Argument("empty Pauli string".into()));
        }
        Ok(PauliString { letters })
    }

    /// Single letter `p` on qubit `q` of `n`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.letters[q] = p;
        s
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in pairs {
            s.letters[q] = p;
        }
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn get(&self, q: usize) -> Pauli {
        self.letters[q]
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.letters.len()).filter(|&q| self.letters[q] != Pauli::I).collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    /// `self * other = phase * result`.
    pub fn mul(&self, other: &PauliString) -> (C64, PauliString) {
        assert_eq!(self.letters.len(), other.letters.len(), "Pauli string widths differ");
        let mut phase = ONE;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase *= ph;
                p
            })
            .collect();
        (phase, PauliString { letters })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// `P|x> = phase |x'>` for a basis index; qubit 0 is the most significant bit.
    pub fn apply_basis(&self, x: usize) -> (C64, usize) {
        let n = self.letters.len();
        let mut phase = ONE;
        let mut y = x;
        for (q, &p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            let set = x & bit != 0;
            match p {
                Pauli::I => {}
                Pauli::X => y ^= bit,
                Pauli::Y => {
                    y ^= bit;
                    phase *= if set { -IM } else { IM };
                }
                Pauli::Z => {
                    if set {
                        phase = -phase;
                    }
                }
            }
        }
        (phase, y)
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn matrix(&self) -> Matrix {
        let dim = 1usize << self.letters.len();
        let mut m = Matrix::zeros(dim, dim);
        for x in 0..dim {
            let (ph, y) = self.apply_basis(x);
            m[(y, x)] = ph;
        }
        m
    }

    /// The string as a layer of single-qubit gates.
    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.letters.len());
        for (q, &p) in self.letters.iter().enumerate() {
            if p != Pauli::I {
                c.push(p.gate(), &[q], &[]);
            }
        }
        c
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.to_char())?;
        }
        Ok(())
    }
}

/// `sum_j a_j P_j + offset * I`; terms keep their insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(C64, PauliString)>,
    offset: C64,
}

impl PauliSum {
    pub fn new(n: usize) -> Self {
        PauliSum { n, terms: Vec::new(), offset: ZERO }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (C64, PauliString)>) -> Result<Self> {
        let mut s = Self::new(n);
        for (c, p) in terms {
            s.add_term(c, p)?;
        }
        Ok(s)
    }

    /// Real-coefficient constructor from `(coeff, "XYZ")` pairs.
    pub fn from_labels(terms: &[(f64, &str)]) -> Result<Self> {
        let n = terms.first().map(|t| t.1.len()).ok_or_else(|| Error::Argument("no terms".into()))?;
        let mut s = Self::new(n);
        for &(c, label) in terms {
            s.add_term(C64::new(c, 0.0), PauliString::parse(label)?)?;
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(C64, PauliString)] {
        &self.terms
    }

    pub fn offset(&self) -> C64 {
        self.offset
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.offset.norm() <= DROP_TOL
    }

    pub fn add_offset(&mut self, c: C64) {
        self.offset += c;
    }

    /// Adds `c P`, merging with an equal string; identity goes to the offset.
    pub fn add_term(&mut self, c: C64, p: PauliString) -> Result<()> {
        if p.n_qubits() != self.n {
            return Err(Error::Dimension { expected: self.n, found: p.n_qubits() });
        }
        if p.is_identity() {
            self.offset += c;
            return Ok(());
        }
        if let Some(pos) = self.terms.iter().position(|(_, q)| *q == p) {
            self.terms[pos].0 += c;
            if self.terms[pos].0.norm() <= DROP_TOL {
                self.terms.remove(pos);
            }
        } else if c.norm() > DROP_TOL {
            self.terms.push((c, p));
        }
        Ok(())
    }

    /// Drops terms with `|a| <= tol`.
    pub fn simplify(&mut self, tol: f64) {
        self.terms.retain(|(c, _)| c.norm() > tol);
        if self.offset.norm() <= tol {
            self.offset = ZERO;
        }
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = self.clone();
        for (c, p) in &other.terms {
            out.add_term(*c, p.clone())?;
        }
        out.offset += other.offset;
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> PauliSum {
        let mut out = PauliSum::new(self.n);
        for (c, p) in &self.terms {
            out.add_term(c * s, p.clone()).expect("same width");
        }
        out.offset = self.offset * s;
        out
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if other.n != self.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        let id = PauliString::identity(self.n);
        let lhs: Vec<(C64, PauliString)> =
            core::iter::once((self.offset, id.clone())).chain(self.terms.iter().cloned()).collect();
        let rhs: Vec<(C64, PauliString)> =
            core::iter::once((other.offset, id)).chain(other.terms.iter().cloned()).collect();
        let mut out = PauliSum::new(self.n);
        for (a, p) in &lhs {
            for (b, q) in &rhs {
                let (ph, r) = p.mul(q);
                out.add_term(a * b * ph, r)?;
            }
        }
        out.simplify(DROP_TOL);
        Ok(out)
    }

    pub fn dagger(&self) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self.terms.iter().map(|(c, p)| (c.conj(), p.clone())).collect(),
            offset: self.offset.conj(),
        }
    }

    /// Largest imaginary part among the coefficients.
    pub fn max_imag(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.im.abs()).fold(self.offset.im.abs(), f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Real coefficients, rejecting sums with imaginary parts above `1e-10`.
    pub fn real_terms(&self) -> Result<Vec<(f64, PauliString)>> {
        if !self.is_hermitian(1e-10) {
            return Err(Error::NotHermitian(self.max_imag()));
        }
        Ok(self.terms.iter().map(|(c, p)| (c.re, p.clone())).collect())
    }

    pub fn real_offset(&self) -> f64 {
        self.offset.re
    }

    /// `sum_j |a_j|`, excluding the offset.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm()).sum()
    }

    pub fn matrix(&self) -> Matrix {
        let dim = 1usize << self.n;
        let mut m = Matrix::identity(dim).scale(self.offset);
        for (c, p) in &self.terms {
            for x in 0..dim {
                let (ph, y) = p.apply_basis(x);
                m[(y, x)] += c * ph;
            }
        }
        m
    }

    /// `H|psi>` as a raw amplitude vector.
    pub fn apply(&self, state: &QuantumState) -> Result<Vec<C64>> {
        if state.n_qubits() != self.n {
            return Err(Error::Dimension { expected: self.n, found: state.n_qubits() });
        }
        let amps = state.amplitudes();
        let mut out: Vec<C64> = amps.iter().map(|a| a * self.offset).collect();
        for (c, p) in &self.terms {
            for (x, a) in amps.iter().enumerate() {
                let (ph, y) = p.apply_basis(x);
                out[y] += c * ph * a;
            }
        }
        Ok(out)
    }

    /// `<psi|H|psi>`.
    pub fn expectation(&self, state: &QuantumState) -> Result<C64> {
        let h = self.apply(state)?;
        Ok(state.amplitudes().iter().zip(&h).map(|(a, b)| a.conj() * b).sum())
    }

    /// Diagonal `<x|H|x>` for every basis state; only Z/I strings contribute.
    pub fn diagonal(&self) -> Vec<C64> {
        let dim = 1usize << self.n;
        let mut d = vec![self.offset; dim];
        for (c, p) in &self.terms {
            if p.letters.iter().all(|&l| l == Pauli::I || l == Pauli::Z) {
                for (x, v) in d.iter_mut().enumerate() {
                    *v += c * p.apply_basis(x).0;
                }
            }
        }
        d
    }

    /// `|a|` summed over non-Z-diagonal strings is zero.
    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.letters.iter().all(|&l| l == Pauli::I || l == Pauli::Z))
    }

    pub fn pretty(&self) -> String {
        let mut s = String::new();
        if self.offset.norm() > 0.0 {
            s.push_str(&alloc::format!("{} {}\n", fmt_c(self.offset), PauliString::identity(self.n)));
        }
        for (c, p) in &self.terms {
            s.push_str(&alloc::format!("{} {}\n", fmt_c(*c), p));
        }
        s
    }
}

fn fmt_c(c: C64) -> String {
    if c.im == 0.0 {
        alloc::format!("{}", c.re)
    } else {
        alloc::format!("{}{:+}i", c.re, c.im)
    }
}

/// `a_j = Tr[H P_j] / d` over all `4^n` strings; needs a hermitian input with
/// at most 8 qubits.
pub fn pauli_decompose(h: &Matrix) -> Result<PauliSum> {
    let dim = h.rows();
    if !h.is_square() || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Argument(alloc::format!("{}x{} is not a qubit operator", h.rows(), h.cols())));
    }
    let n = dim.trailing_zeros() as usize;
    if n > 8 {
        return Err(Error::Capacity { requested: n, limit: 8 });
    }
    let err = h.hermiticity_error();
    if err > 1e-10 {
        return Err(Error::NotHermitian(err));
    }
    let mut out = PauliSum::new(n);
    for code in 0..1usize << (2 * n) {
        let letters: Vec<Pauli> = (0..n)
            .map(|q| match (code >> (2 * (n - 1 - q))) & 3 {
                0 => Pauli::I,
                1 => Pauli::X,
                2 => Pauli::Y,
                _ => Pauli::Z,
            })
            .collect();
        let p = PauliString::new(letters);
        // Tr[H P] = sum_x <x|H P|x> = sum_x H[y, x] phase(x) with P|x> = phase |y>.
        let mut tr = ZERO;
        for x in 0..dim {
            let (ph, y) = p.apply_basis(x);
            tr += h[(x, y)] * ph;
        }
        let a = tr / dim as f64;
        // Hermitian inputs give real coefficients.
        out.add_term(C64::new(a.re, 0.0), p)?;
    }
    Ok(out)
}
