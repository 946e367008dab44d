//! Fermionic modes in the occupation-number basis and their qubit
//! encodings.
//!
//! Mode `j` lives on qubit `j`, so mode 0 is the most significant bit of a
//! basis index. Binary basis maps are stored with rows and columns in mode
//! order (`b_i = sum_j M[i][j] k_j`).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pauli::{Pauli, PauliString, PauliSum, DROP_TOL};
use crate::C64;

const ONE: C64 = C64::new(1.0, 0.0);
const HALF: C64 = C64::new(0.5, 0.0);
const HALF_I: C64 = C64::new(0.0, 0.5);

/// Largest mode count handled by the binary matrices.
pub const MAX_MODES: usize = 64;

/// A square matrix over GF(2); row `i` is a bitmask over columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BinaryMatrix {
    pub fn identity(n: usize) -> Self {
        BinaryMatrix { n, rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let n = rows.len();
        let mut out = BinaryMatrix { n, rows: vec![0; n] };
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Dimension { expected: n, found: r.len() });
            }
            for (j, &v) in r.iter().enumerate() {
                out.set(i, j, v & 1 == 1);
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.get(i, j)).collect()
    }

    pub fn column_support(&self, j: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let mut out = BinaryMatrix { n: self.n, rows: vec![0; self.n] };
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    out.rows[i] ^= other.rows[k];
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse over GF(2).
    pub fn inverse(&self) -> Result<BinaryMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = BinaryMatrix::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1).ok_or_else(|| Error::Argument("binary matrix is singular".into()))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(BinaryMatrix { n, rows: inv })
    }

    /// `M k` for an occupation vector `k`.
    pub fn apply(&self, bits: &[bool]) -> Vec<bool> {
        let mask = to_mask(bits);
        self.rows.iter().map(|r| (r & mask).count_ones() % 2 == 1).collect()
    }

    /// Top-left `m x m` block.
    pub fn truncate(&self, m: usize) -> BinaryMatrix {
        let keep = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        BinaryMatrix { n: m, rows: self.rows[..m].iter().map(|r| r & keep).collect() }
    }

    /// Basis permutation `|k> -> |M k>` on `2^n` amplitudes.
    pub fn lifted(&self) -> Matrix {
        let dim = 1usize << self.n;
        let mut m = Matrix::zeros(dim, dim);
        for x in 0..dim {
            let y = index_of(&self.apply(&bits_of(x, self.n)));
            m[(y, x)] = ONE;
        }
        m
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            if i + 1 < self.n {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

fn to_mask(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |m, (i, &b)| m | (b as u64) << i)
}

fn bits_of(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| index >> (n - 1 - j) & 1 == 1).collect()
}

fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

fn check_modes(n: usize) -> Result<()> {
    if n == 0 || n > MAX_MODES {
        return Err(Error::Range(alloc::format!("mode count {n} outside 1..={MAX_MODES}")));
    }
    Ok(())
}

/// Lower-triangular all-ones: `p_i = k_0 + ... + k_i`.
pub fn pi_matrix(n: usize) -> Result<BinaryMatrix> {
    check_modes(n)?;
    let mut m = BinaryMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, true);
        }
    }
    Ok(m)
}

/// Bravyi-Kitaev map for `n` a power of two: `beta_2m` has `beta_m` on the
/// diagonal blocks and an all-ones last row in the lower-left block.
pub fn beta_matrix(n: usize) -> Result<BinaryMatrix> {
    check_modes(n)?;
    if !n.is_power_of_two() {
        return Err(Error::Argument(alloc::format!("beta needs a power-of-two size, got {n}")));
    }
    let mut m = BinaryMatrix::identity(1);
    while m.n < n {
        let h = m.n;
        let mut next = BinaryMatrix { n: 2 * h, rows: vec![0; 2 * h] };
        for i in 0..h {
            next.rows[i] = m.rows[i];
            next.rows[h + i] = m.rows[i] << h;
        }
        next.rows[2 * h - 1] |= (1u64 << h) - 1;
        m = next;
    }
    Ok(m)
}

pub fn beta_inv(n: usize) -> Result<BinaryMatrix> {
    beta_matrix(n)?.inverse()
}

/// Qubit encodings of fermionic modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    JordanWigner,
    Parity,
    BravyiKitaev,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 3] = [EncodingKind::JordanWigner, EncodingKind::Parity, EncodingKind::BravyiKitaev];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::JordanWigner => "jordan-wigner",
            EncodingKind::Parity => "parity",
            EncodingKind::BravyiKitaev => "bravyi-kitaev",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "jw" | "jordan-wigner" => Ok(EncodingKind::JordanWigner),
            "parity" => Ok(EncodingKind::Parity),
            "bk" | "bravyi-kitaev" => Ok(EncodingKind::BravyiKitaev),
            _ => Err(Error::Argument(alloc::format!("unknown encoding {s:?}"))),
        }
    }

    /// Number of qubits the encoding works on before dropping padding.
    pub fn padded_modes(self, n: usize) -> usize {
        match self {
            EncodingKind::BravyiKitaev => n.next_power_of_two(),
            _ => n,
        }
    }

    /// Occupation-to-qubit basis map on `n` modes. For Bravyi-Kitaev with
    /// `n` not a power of two this is the leading block of the padded map.
    pub fn basis_map(self, n: usize) -> Result<BinaryMatrix> {
        check_modes(n)?;
        match self {
            EncodingKind::JordanWigner => Ok(BinaryMatrix::identity(n)),
            EncodingKind::Parity => pi_matrix(n),
            EncodingKind::BravyiKitaev => Ok(beta_matrix(n.next_power_of_two())?.truncate(n)),
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parity, update, flip and remainder sets of one mode under a basis map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeSets {
    pub parity: Vec<usize>,
    pub update: Vec<usize>,
    pub flip: Vec<usize>,
    pub remainder: Vec<usize>,
}

impl ModeSets {
    /// `P(j)` from row `j - 1` of `pi M^-1`, `U(j)` from column `j` of `M`
    /// below the diagonal, `F(j)` from row `j` of `M^-1` left of it.
    pub fn from_map(m: &BinaryMatrix, j: usize) -> Result<ModeSets> {
        let n = m.n();
        if j >= n {
            return Err(Error::Bounds { index: j, n_qubits: n });
        }
        let inv = m.inverse()?;
        let parity = if j == 0 { Vec::new() } else { pi_matrix(n)?.mul(&inv).row_support(j - 1) };
        let update = m.column_support(j).into_iter().filter(|&i| i > j).collect();
        let flip: Vec<usize> = inv.row_support(j).into_iter().filter(|&i| i < j).collect();
        let remainder = parity.iter().copied().filter(|i| !flip.contains(i)).collect();
        Ok(ModeSets { parity, update, flip, remainder })
    }

    /// `rho(j)`: the parity set for even `j`, the remainder set for odd `j`.
    pub fn rho(&self, j: usize) -> &[usize] {
        if j.is_multiple_of(2) {
            &self.parity
        } else {
            &self.remainder
        }
    }
}

fn bk_sets(j: usize, n: usize) -> Result<ModeSets> {
    ModeSets::from_map(&beta_matrix(n)?, j)
}

/// Sets are listed in descending index order, as the text prints them.
fn descending(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

pub fn parity_set(j: usize, n: usize) -> Result<Vec<usize>> {
    Ok(descending(bk_sets(j, n)?.parity))
}

pub fn update_set(j: usize, n: usize) -> Result<Vec<usize>> {
    Ok(bk_sets(j, n)?.update)
}

pub fn flip_set(j: usize, n: usize) -> Result<Vec<usize>> {
    Ok(descending(bk_sets(j, n)?.flip))
}

pub fn remainder_set(j: usize, n: usize) -> Result<Vec<usize>> {
    Ok(descending(bk_sets(j, n)?.remainder))
}

pub fn rho_set(j: usize, n: usize) -> Result<Vec<usize>> {
    let s = bk_sets(j, n)?;
    Ok(descending(s.rho(j).to_vec()))
}

/// A weighted occupation-number basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupationState {
    pub bits: Vec<bool>,
    pub amplitude: C64,
}

impl OccupationState {
    pub fn new(bits: Vec<bool>) -> Self {
        OccupationState { bits, amplitude: ONE }
    }

    /// `"1011"` with mode 0 first.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Argument(alloc::format!("bad occupation digit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(bits))
    }

    pub fn n_modes(&self) -> usize {
        self.bits.len()
    }

    pub fn index(&self) -> usize {
        index_of(&self.bits)
    }

    pub fn to_bitstring(&self) -> alloc::string::String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// `coefficient * f_1 f_2 ... f_m`, each factor `(mode, dagger)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderTerm {
    pub coefficient: C64,
    pub factors: Vec<(usize, bool)>,
}

impl LadderTerm {
    pub fn new(coefficient: C64, factors: Vec<(usize, bool)>) -> Self {
        LadderTerm { coefficient, factors }
    }

    pub fn creation(j: usize) -> Self {
        Self::new(ONE, vec![(j, true)])
    }

    pub fn annihilation(j: usize) -> Self {
        Self::new(ONE, vec![(j, false)])
    }

    /// Whitespace-separated factors, `3^` for a creation and `3` for an
    /// annihilation operator.
    pub fn parse(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in s.split_whitespace() {
            let (num, dagger) = match tok.strip_suffix('^') {
                Some(rest) => (rest, true),
                None => (tok, false),
            };
            let j = num.parse().map_err(|_| Error::Argument(alloc::format!("bad ladder factor {tok:?}")))?;
            factors.push((j, dagger));
        }
        if factors.is_empty() {
            return Err(Error::Argument("empty ladder term".into()));
        }
        Ok(Self::new(ONE, factors))
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.factors.iter().map(|f| f.0).max()
    }
}

impl fmt::Display for LadderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (j, d)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{j}{}", if *d { "^" } else { "" })?;
        }
        Ok(())
    }
}

/// Applies the factors right to left with sign `(-1)^{sum_{j<i} k_j}`;
/// `None` when some factor annihilates the state.
pub fn ladder_apply(term: &LadderTerm, state: &OccupationState) -> Result<Option<OccupationState>> {
    let n = state.n_modes();
    if let Some(m) = term.max_mode().filter(|&m| m >= n) {
        return Err(Error::Bounds { index: m, n_qubits: n });
    }
    let mut bits = state.bits.clone();
    let mut amp = state.amplitude * term.coefficient;
    for &(i, dagger) in term.factors.iter().rev() {
        if bits[i] == dagger {
            return Ok(None);
        }
        if bits[..i].iter().filter(|&&b| b).count() % 2 == 1 {
            amp = -amp;
        }
        bits[i] = dagger;
    }
    Ok(Some(OccupationState { bits, amplitude: amp }))
}

/// Dense matrix of a ladder term on the occupation basis.
pub fn ladder_matrix(term: &LadderTerm, n: usize) -> Result<Matrix> {
    check_dense(n)?;
    let dim = 1usize << n;
    let mut m = Matrix::zeros(dim, dim);
    for x in 0..dim {
        if let Some(out) = ladder_apply(term, &OccupationState::new(bits_of(x, n)))? {
            m[(out.index(), x)] += out.amplitude;
        }
    }
    Ok(m)
}

fn check_dense(n: usize) -> Result<()> {
    if n > 12 {
        return Err(Error::Capacity { requested: n, limit: 12 });
    }
    check_modes(n)
}

fn z_string(n: usize, qubits: &[usize], extra: &[(usize, Pauli)]) -> PauliString {
    let mut pairs: Vec<(usize, Pauli)> = qubits.iter().map(|&q| (q, Pauli::Z)).collect();
    pairs.extend_from_slice(extra);
    PauliString::from_pairs(n, &pairs)
}

/// Single ladder operator on `m` qubits:
/// `a_j^dagger -> X_U (X_j Z_P - i Y_j Z_rho) / 2`,
/// `a_j -> X_U (X_j Z_P + i Y_j Z_rho) / 2`.
fn encode_factor(sets: &ModeSets, j: usize, dagger: bool, m: usize) -> PauliSum {
    // With F inside P, X_j Z_F Z_rho = X_j Z_P; rho is P \ F here.
    let rho = &sets.remainder;
    let upd: Vec<(usize, Pauli)> = sets.update.iter().map(|&q| (q, Pauli::X)).collect();
    let mut xs = upd.clone();
    xs.push((j, Pauli::X));
    let mut ys = upd;
    ys.push((j, Pauli::Y));
    let sign = if dagger { -HALF_I } else { HALF_I };
    let mut s = PauliSum::new(m);
    s.add_term(HALF, z_string(m, &sets.parity, &xs)).expect("width");
    s.add_term(sign, z_string(m, rho, &ys)).expect("width");
    s
}

struct Encoder {
    n: usize,
    padded: usize,
    sets: Vec<ModeSets>,
}

impl Encoder {
    fn new(n: usize, kind: EncodingKind) -> Result<Self> {
        check_modes(n)?;
        let padded = kind.padded_modes(n);
        let map = match kind {
            EncodingKind::BravyiKitaev => beta_matrix(padded)?,
            _ => kind.basis_map(n)?,
        };
        let sets = (0..n).map(|j| ModeSets::from_map(&map, j)).collect::<Result<Vec<_>>>()?;
        Ok(Encoder { n, padded, sets })
    }

    fn term(&self, term: &LadderTerm) -> Result<PauliSum> {
        if let Some(m) = term.max_mode().filter(|&m| m >= self.n) {
            return Err(Error::Bounds { index: m, n_qubits: self.n });
        }
        let mut acc = PauliSum::new(self.padded);
        acc.add_offset(term.coefficient);
        for &(j, dagger) in &term.factors {
            acc = acc.mul(&encode_factor(&self.sets[j], j, dagger, self.padded))?;
        }
        acc.simplify(DROP_TOL);
        Ok(acc)
    }

    /// Drops padding qubits; they carry only update-set X letters for
    /// frozen modes and are never read.
    fn finish(&self, s: PauliSum) -> Result<PauliSum> {
        if self.padded == self.n {
            return Ok(s);
        }
        let mut out = PauliSum::new(self.n);
        out.add_offset(s.offset());
        for (c, p) in s.terms() {
            out.add_term(*c, PauliString::new(p.letters()[..self.n].to_vec()))?;
        }
        out.simplify(DROP_TOL);
        Ok(out)
    }
}

/// Pauli form of a ladder term on `n` modes.
pub fn encode_ladder(op: &LadderTerm, n: usize, kind: EncodingKind) -> Result<PauliSum> {
    let enc = Encoder::new(n, kind)?;
    let s = enc.term(op)?;
    enc.finish(s)
}

/// `H = sum h_pq a_p^ a_q + 1/2 sum h_pqrs a_p^ a_q^ a_r a_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionHamiltonian {
    n: usize,
    h1: Vec<C64>,
    h2: Vec<C64>,
}

/// Tolerance for the Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

impl FermionHamiltonian {
    pub fn zeros(n: usize) -> Result<Self> {
        check_modes(n)?;
        if n > 16 {
            return Err(Error::Capacity { requested: n, limit: 16 });
        }
        Ok(FermionHamiltonian { n, h1: vec![C64::new(0.0, 0.0); n * n], h2: vec![C64::new(0.0, 0.0); n.pow(4)] })
    }

    /// Validates both Hermiticity conditions.
    pub fn new(n: usize, h1: Vec<C64>, h2: Vec<C64>) -> Result<Self> {
        let mut h = Self::zeros(n)?;
        if h1.len() != n * n {
            return Err(Error::Dimension { expected: n * n, found: h1.len() });
        }
        if h2.len() != n.pow(4) {
            return Err(Error::Dimension { expected: n.pow(4), found: h2.len() });
        }
        h.h1 = h1;
        h.h2 = h2;
        h.check()?;
        Ok(h)
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn h1(&self, p: usize, q: usize) -> C64 {
        self.h1[p * self.n + q]
    }

    pub fn h2(&self, p: usize, q: usize, r: usize, s: usize) -> C64 {
        self.h2[self.idx4(p, q, r, s)]
    }

    fn idx4(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    /// Sets `h_pq` (unchecked until [`FermionHamiltonian::check`]).
    pub fn set_h1(&mut self, p: usize, q: usize, v: C64) {
        self.h1[p * self.n + q] = v;
    }

    pub fn set_h2(&mut self, p: usize, q: usize, r: usize, s: usize, v: C64) {
        let i = self.idx4(p, q, r, s);
        self.h2[i] = v;
    }

    /// `h_pq = conj(h_qp)` and `h_pqrs = conj(h_srqp)`.
    pub fn check(&self) -> Result<()> {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                worst = worst.max((self.h1(p, q) - self.h1(q, p).conj()).norm());
                for r in 0..n {
                    for s in 0..n {
                        worst = worst.max((self.h2(p, q, r, s) - self.h2(s, r, q, p).conj()).norm());
                    }
                }
            }
        }
        if worst > HERMITIAN_TOL {
            return Err(Error::NotHermitian(worst));
        }
        Ok(())
    }

    /// Ladder terms in `(p, q)` then `(p, q, r, s)` order, zeros skipped.
    pub fn ladder_terms(&self) -> Vec<LadderTerm> {
        let n = self.n;
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                let c = self.h1(p, q);
                if c.norm() > DROP_TOL {
                    out.push(LadderTerm::new(c, vec![(p, true), (q, false)]));
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let c = self.h2(p, q, r, s);
                        if c.norm() > DROP_TOL {
                            out.push(LadderTerm::new(c * 0.5, vec![(p, true), (q, true), (r, false), (s, false)]));
                        }
                    }
                }
            }
        }
        out
    }

    /// Dense matrix on the occupation basis.
    pub fn matrix(&self) -> Result<Matrix> {
        let dim = 1usize << self.n;
        let mut m = Matrix::zeros(dim, dim);
        for t in self.ladder_terms() {
            m = m.add(&ladder_matrix(&t, self.n)?);
        }
        Ok(m)
    }
}

/// Encoded Hamiltonian with real coefficients after merging.
pub fn encode_hamiltonian(h: &FermionHamiltonian, kind: EncodingKind) -> Result<PauliSum> {
    h.check()?;
    let enc = Encoder::new(h.n, kind)?;
    let mut acc = PauliSum::new(enc.padded);
    for t in h.ladder_terms() {
        acc = acc.add(&enc.term(&t)?)?;
    }
    acc.simplify(DROP_TOL);
    let acc = enc.finish(acc)?;
    let imag = acc.max_imag().max(acc.offset().im.abs());
    if imag > HERMITIAN_TOL {
        return Err(Error::NotHermitian(imag));
    }
    let mut out = PauliSum::new(h.n);
    out.add_offset(C64::new(acc.offset().re, 0.0));
    for (c, p) in acc.terms() {
        out.add_term(C64::new(c.re, 0.0), p.clone())?;
    }
    out.simplify(DROP_TOL);
    Ok(out)
}

/// Outcome of [`anticommutator_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct AnticommutatorReport {
    pub n: usize,
    pub kind: EncodingKind,
    pub checks: usize,
    pub failures: usize,
    pub max_error: f64,
}

impl AnticommutatorReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub const ANTICOMMUTATOR_TOL: f64 = 1e-12;

/// Checks `{Q_i, Q_j} = 0`, `{Q_i^+, Q_j^+} = 0`, `{Q_i, Q_j^+} = delta_ij`
/// as dense matrices for every pair.
pub fn anticommutator_check(n: usize, kind: EncodingKind) -> Result<AnticommutatorReport> {
    if n > 5 {
        return Err(Error::Capacity { requested: n, limit: 5 });
    }
    let enc = Encoder::new(n, kind)?;
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for j in 0..n {
        plus.push(enc.finish(enc.term(&LadderTerm::creation(j))?)?.matrix());
        minus.push(enc.finish(enc.term(&LadderTerm::annihilation(j))?)?.matrix());
    }
    let dim = 1usize << n;
    let id = Matrix::identity(dim);
    let zero = Matrix::zeros(dim, dim);
    let anti = |a: &Matrix, b: &Matrix| a.mul(b).add(&b.mul(a));
    let mut report = AnticommutatorReport { n, kind, checks: 0, failures: 0, max_error: 0.0 };
    for i in 0..n {
        for j in 0..n {
            let cases = [
                (anti(&minus[i], &minus[j]), &zero),
                (anti(&plus[i], &plus[j]), &zero),
                (anti(&minus[i], &plus[j]), if i == j { &id } else { &zero }),
            ];
            for (got, want) in cases {
                let e = got.max_diff(want);
                report.checks += 1;
                report.max_error = report.max_error.max(e);
                if e > ANTICOMMUTATOR_TOL {
                    report.failures += 1;
                }
            }
        }
    }
    Ok(report)
}
