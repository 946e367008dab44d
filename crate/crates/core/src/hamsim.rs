//! Hamiltonian simulation: Pauli exponentials, Trotter formulas, 1-sparse
//! oracle evolution, linear combinations of unitaries and oblivious
//! amplitude amplification.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::grover::zero_phase_flip;
use crate::math::{carg, sqrt, PI};
use crate::matrix::Matrix;
use crate::oracles::{bit_oracle, comparator, value_controls, TruthTable};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::state::{qubit_limit, Control, QuantumState};
use crate::C64;

/// Circuit for `e^{-i angle P}`: basis change, CX parity ladder onto the
/// last active qubit, `Rz(2 angle)`, and the reverse.
pub fn exp_pauli_circuit(string: &PauliString, angle: f64) -> Result<Circuit> {
    let support = string.support();
    let Some(&last) = support.last() else {
        return Err(Error::Argument("identity string: use a global phase instead".into()));
    };
    let mut c = Circuit::new(string.n_qubits());
    append_basis_change(&mut c, string, &support, false);
    for w in support.windows(2) {
        c.cx(w[0], w[1]);
    }
    c.rz(last, 2.0 * angle);
    for w in support.windows(2).rev() {
        c.cx(w[0], w[1]);
    }
    append_basis_change(&mut c, string, &support, true);
    Ok(c)
}

/// X via H (HZH = X); Y via S^dagger then H (S H Z H S^dagger = Y).
fn append_basis_change(c: &mut Circuit, string: &PauliString, support: &[usize], undo: bool) {
    for &q in support {
        match (string.get(q), undo) {
            (Pauli::X, _) => {
                c.h(q);
            }
            (Pauli::Y, false) => {
                c.p(q, -PI / 2.0).h(q);
            }
            (Pauli::Y, true) => {
                c.h(q).s(q);
            }
            _ => {}
        }
    }
}

/// `e^{-i t (sum terms)}` for a list of real terms, identity strings as
/// exact global phases.
fn append_exp_terms(c: &mut Circuit, terms: &[(f64, PauliString)], offset: f64, t: f64) -> Result<()> {
    for (a, p) in terms {
        c.append(&exp_pauli_circuit(p, a * t)?);
    }
    if offset != 0.0 {
        c.global_phase(0, -offset * t);
    }
    Ok(())
}

fn check_slices(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::Argument("need at least one Trotter slice".into()));
    }
    Ok(())
}

/// First-order product formula: `r` repetitions of the term-ordered product
/// at angles `a_k t / r`.
pub fn trotter1(h: &PauliSum, t: f64, r: usize) -> Result<Circuit> {
    check_slices(r)?;
    let terms = h.real_terms()?;
    let dt = t / r as f64;
    let mut c = Circuit::new(h.n_qubits());
    for _ in 0..r {
        append_exp_terms(&mut c, &terms, h.real_offset(), dt)?;
    }
    Ok(c)
}

/// Second-order (symmetric) product formula: each slice runs the terms
/// forward at half angle then backward at half angle.
pub fn trotter2(h: &PauliSum, t: f64, r: usize) -> Result<Circuit> {
    check_slices(r)?;
    let terms = h.real_terms()?;
    let half = t / (2.0 * r as f64);
    let mut reversed = terms.clone();
    reversed.reverse();
    let mut c = Circuit::new(h.n_qubits());
    for _ in 0..r {
        append_exp_terms(&mut c, &terms, 0.0, half)?;
        append_exp_terms(&mut c, &reversed, 0.0, half)?;
    }
    if h.real_offset() != 0.0 {
        c.global_phase(0, -h.real_offset() * t);
    }
    Ok(c)
}

/// Spectral-norm distance between a circuit and `e^{-iHt}`.
pub fn evolution_error(circuit: &Circuit, h: &PauliSum, t: f64) -> Result<f64> {
    let exact = h.matrix().evolution(t);
    Ok(circuit.unitary_matrix()?.sub(&exact).spectral_norm())
}

/// A real, 1-sparse symmetric matrix: row `x` has its only nonzero entry
/// `value[x]` in column `col[x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOracle {
    n: usize,
    col: Vec<usize>,
    value: Vec<f64>,
}

impl SparseOracle {
    pub fn new(n: usize, col: Vec<usize>, value: Vec<f64>) -> Result<Self> {
        let dim = 1usize << n;
        if col.len() != dim || value.len() != dim {
            return Err(Error::Dimension { expected: dim, found: col.len().min(value.len()) });
        }
        for x in 0..dim {
            let y = col[x];
            if y >= dim || col[y] != x {
                return Err(Error::Argument(alloc::format!("f(f({x})) != {x}")));
            }
            if value[x] != value[y] {
                return Err(Error::NotHermitian((value[x] - value[y]).abs()));
            }
            if !value[x].is_finite() {
                return Err(Error::Argument("non-finite matrix entry".into()));
            }
        }
        Ok(SparseOracle { n, col, value })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> (usize, f64)) -> Result<Self> {
        let (col, value) = (0..1usize << n).map(f).unzip();
        Self::new(n, col, value)
    }

    /// Reads a dense matrix; rejects complex entries and rows with more than
    /// one nonzero.
    pub fn from_matrix(h: &Matrix) -> Result<Self> {
        let dim = h.rows();
        if !h.is_square() || !dim.is_power_of_two() {
            return Err(Error::Argument("matrix is not a qubit operator".into()));
        }
        let n = dim.trailing_zeros() as usize;
        let mut col = vec![0; dim];
        let mut value = vec![0.0; dim];
        for x in 0..dim {
            let nz: Vec<usize> = (0..dim).filter(|&y| h[(x, y)].norm() > 1e-14).collect();
            match nz.as_slice() {
                [] => {
                    col[x] = x;
                }
                [y] => {
                    let v = h[(x, *y)];
                    if v.im.abs() > 1e-14 {
                        return Err(Error::Argument("complex entries are not supported".into()));
                    }
                    col[x] = *y;
                    value[x] = v.re;
                }
                _ => return Err(Error::Argument(alloc::format!("row {x} has {} nonzeros", nz.len()))),
            }
        }
        Self::new(n, col, value)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn column(&self, x: usize) -> usize {
        self.col[x]
    }

    pub fn value(&self, x: usize) -> f64 {
        self.value[x]
    }

    pub fn matrix(&self) -> Matrix {
        let dim = 1usize << self.n;
        let mut m = Matrix::zeros(dim, dim);
        for x in 0..dim {
            m[(x, self.col[x])] = C64::new(self.value[x], 0.0);
        }
        m
    }

    /// Representatives `(m, M)` with `m <= M` of every row pair.
    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.col.len()).filter(|&x| x <= self.col[x]).map(|x| (x, self.col[x])).collect()
    }
}

/// How the `O_H` value reaches the controlled rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuePath {
    /// Rotation angles taken directly from the entries, one multi-controlled
    /// rotation per row pair.
    Exact,
    /// `bits`-bit fixed-point magnitudes in `[0, 2)` plus sign and diagonal
    /// flags written by `O_H`; rotations consume the binary expansion.
    Quantized { bits: usize },
}

/// Default fixed-point width of the value register.
pub const VALUE_BITS: usize = 8;

/// Register layout of the 1-sparse circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SparseLayout {
    pub n: usize,
    /// First qubit of the `f(x)` register.
    pub y: usize,
    /// Comparison flag, also the rotated qubit.
    pub flag: usize,
    /// First value qubit (quantized path only).
    pub value: usize,
    pub total: usize,
}

fn sparse_layout(n: usize, path: ValuePath) -> Result<SparseLayout> {
    let extra = match path {
        ValuePath::Exact => 0,
        ValuePath::Quantized { bits } => {
            if bits == 0 || bits > 12 {
                return Err(Error::Argument("value register width must be 1..=12".into()));
            }
            bits + 2
        }
    };
    let total = 2 * n + 1 + extra;
    if total > qubit_limit() {
        return Err(Error::Capacity { requested: total, limit: qubit_limit() });
    }
    Ok(SparseLayout { n, y: n, flag: 2 * n, value: 2 * n + 1, total })
}

/// `O_f`, compare, controlled swap, controlled rotation, and uncompute.
pub fn one_sparse_circuit(oracle: &SparseOracle, t: f64, path: ValuePath) -> Result<(Circuit, SparseLayout)> {
    let n = oracle.n;
    let lay = sparse_layout(n, path)?;
    let mut c = Circuit::new(lay.total);
    let of = bit_oracle(&TruthTable::new(n, n, oracle.col.clone())?);
    let comp = comparator(n);
    let mut cswap = Circuit::new(lay.total);
    for k in 0..n {
        cswap.push(Gate::Swap, &[k, n + k], &[Control::pos(lay.flag)]);
    }
    let front: Vec<usize> = (0..=2 * n).collect();
    c.append_mapped(&of, &(0..2 * n).collect::<Vec<_>>());
    c.append_mapped(&comp, &front);
    c.append(&cswap);
    match path {
        ValuePath::Exact => {
            for (m, big_m) in oracle.pairs() {
                let h = oracle.value[m];
                if h == 0.0 {
                    continue;
                }
                let mut controls = value_controls(m, 0, n);
                controls.extend(value_controls(big_m, n, n));
                let gate = if m == big_m { Gate::Rz(2.0 * h * t) } else { Gate::Rx(2.0 * h * t) };
                c.push(gate, &[lay.flag], &controls);
            }
        }
        ValuePath::Quantized { bits } => {
            let oh = value_oracle(oracle, bits)?;
            let mut map: Vec<usize> = (0..2 * n).collect();
            map.extend(lay.value..lay.total);
            c.append_mapped(&oh, &map);
            let sign = lay.value + bits;
            let diag = sign + 1;
            for k in 0..bits {
                let weight = 2.0 * t / (1u64 << k) as f64;
                for (neg, s) in [(false, 1.0), (true, -1.0)] {
                    let ctl = |d: bool| vec![Control::pos(lay.value + k), Control::on(sign, neg), Control::on(diag, d)];
                    c.push(Gate::Rx(s * weight), &[lay.flag], &ctl(false));
                    c.push(Gate::Rz(s * weight), &[lay.flag], &ctl(true));
                }
            }
            c.append_mapped(&oh, &map);
        }
    }
    c.append(&cswap);
    c.append_mapped(&comp, &front);
    c.append_mapped(&of, &(0..2 * n).collect::<Vec<_>>());
    Ok((c, lay))
}

/// `O_H`: from `(m, M)` writes the fixed-point magnitude of `H[m][M]`, its
/// sign, and whether `m = M`.
fn value_oracle(oracle: &SparseOracle, bits: usize) -> Result<Circuit> {
    let n = oracle.n;
    let scale = (1u64 << (bits - 1)) as f64;
    let mut rows = vec![0usize; 1 << (2 * n)];
    for (m, big_m) in oracle.pairs() {
        let h = oracle.value[m];
        let q = crate::math::round(h.abs() * scale) as usize;
        if q >= 1 << bits {
            return Err(Error::Range(alloc::format!("entry {h} outside the value register range")));
        }
        let sign = (h < 0.0) as usize;
        let diag = (m == big_m) as usize;
        rows[(m << n) | big_m] = (q << 2) | (sign << 1) | diag;
    }
    Ok(bit_oracle(&TruthTable::new(2 * n, bits + 2, rows)?))
}

/// `e^{-iHt} |psi>` for a 1-sparse `H` through the oracle circuit; the
/// work registers must return to zero.
pub fn one_sparse_evolve(oracle: &SparseOracle, t: f64, state: &QuantumState, path: ValuePath) -> Result<QuantumState> {
    if state.n_qubits() != oracle.n {
        return Err(Error::Dimension { expected: oracle.n, found: state.n_qubits() });
    }
    let (c, lay) = one_sparse_circuit(oracle, t, path)?;
    let work = QuantumState::zero(lay.total - oracle.n)?;
    let out = c.run(&state.kron(&work)?)?;
    let anc: Vec<usize> = (oracle.n..lay.total).collect();
    let (sub, p) = out.postselect(&anc, 0)?;
    if (p - 1.0).abs() > 1e-9 {
        return Err(Error::Argument(alloc::format!("work registers not restored (p = {p})")));
    }
    Ok(sub)
}

/// Splits a hermitian matrix with at most two nonzeros per row into 1-sparse
/// pieces by greedy edge colouring (diagonal entries count as self-loops).
pub fn split_sparse(h: &Matrix) -> Result<Vec<Matrix>> {
    let dim = h.rows();
    let err = h.hermiticity_error();
    if err > 1e-10 {
        return Err(Error::NotHermitian(err));
    }
    let mut pieces: Vec<(Matrix, Vec<bool>)> = Vec::new();
    for i in 0..dim {
        let nz = (0..dim).filter(|&j| h[(i, j)].norm() > 1e-14).count();
        if nz > 2 {
            return Err(Error::Argument(alloc::format!("row {i} has {nz} nonzeros")));
        }
        for j in i..dim {
            let v = h[(i, j)];
            if v.norm() <= 1e-14 {
                continue;
            }
            let slot = pieces.iter().position(|(_, used)| !used[i] && !used[j]);
            let k = match slot {
                Some(k) => k,
                None => {
                    pieces.push((Matrix::zeros(dim, dim), vec![false; dim]));
                    pieces.len() - 1
                }
            };
            let (m, used) = &mut pieces[k];
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
            used[i] = true;
            used[j] = true;
        }
    }
    Ok(pieces.into_iter().map(|(m, _)| m).collect())
}

/// Circuit on `log2(v.len())` qubits mapping `|0>` to `sum_i v_i |i>` for
/// non-negative unit-norm `v`: a binary tree of prefix-controlled `Ry`.
/// For two entries the matrix is `[[v0, -v1], [v1, v0]]`.
pub fn state_preparation(v: &[f64]) -> Result<Circuit> {
    let m = v.len();
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::Argument("amplitude count must be a power of two".into()));
    }
    if v.iter().any(|&x| x < 0.0) {
        return Err(Error::Argument("amplitudes must be non-negative".into()));
    }
    let k = m.trailing_zeros() as usize;
    let mut c = Circuit::new(k);
    for level in 0..k {
        let block = m >> level;
        for prefix in 0..1usize << level {
            let seg = &v[prefix * block..(prefix + 1) * block];
            let (lo, hi) = seg.split_at(block / 2);
            let w0 = sqrt(lo.iter().map(|x| x * x).sum());
            let w1 = sqrt(hi.iter().map(|x| x * x).sum());
            if w1 == 0.0 {
                continue;
            }
            c.push(Gate::Ry(2.0 * crate::math::atan2(w1, w0)), &[level], &value_controls(prefix, 0, level));
        }
    }
    Ok(c)
}

/// Circuit `W = (O^dagger x I) V (O x I)` for `A = sum a_i U_i`, with the
/// selection register on qubits `0..k` and the system after it.
#[derive(Clone, Debug)]
pub struct LcuCircuit {
    pub circuit: Circuit,
    /// Selection-register width.
    pub k: usize,
    pub one_norm: f64,
}

pub fn lcu_circuit(coeffs: &[f64], unitaries: &[Circuit]) -> Result<LcuCircuit> {
    if coeffs.is_empty() || coeffs.len() != unitaries.len() {
        return Err(Error::Argument("need one coefficient per unitary".into()));
    }
    if coeffs.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
        return Err(Error::Argument("LCU coefficients must be non-negative".into()));
    }
    let one_norm: f64 = coeffs.iter().sum();
    if one_norm <= 0.0 {
        return Err(Error::NullResult);
    }
    let n = unitaries[0].n;
    if unitaries.iter().any(|u| u.n != n) {
        return Err(Error::Argument("unitaries act on different registers".into()));
    }
    let m = coeffs.len().next_power_of_two();
    let k = (m.trailing_zeros() as usize).max(1);
    let m = 1usize << k;
    let mut amps: Vec<f64> = coeffs.iter().map(|a| sqrt(a / one_norm)).collect();
    amps.resize(m, 0.0);
    let o = state_preparation(&amps)?.embed(k + n, &(0..k).collect::<Vec<_>>());
    let map: Vec<usize> = (k..k + n).collect();
    let mut c = o.clone();
    for (i, u) in unitaries.iter().enumerate() {
        if coeffs[i] == 0.0 {
            continue;
        }
        c.append(&u.embed(k + n, &map).controlled_by(&value_controls(i, 0, k)));
    }
    c.append(&o.inverse());
    Ok(LcuCircuit { circuit: c, k, one_norm })
}

/// Post-selected `A|psi> / ||A|psi>||` and the probability `||A psi||^2 / ||a||_1^2`.
pub fn lcu_apply(coeffs: &[f64], unitaries: &[Circuit], state: &QuantumState) -> Result<(QuantumState, f64)> {
    let lcu = lcu_circuit(coeffs, unitaries)?;
    let out = lcu.circuit.run(&QuantumState::zero(lcu.k)?.kron(state)?)?;
    postselect_zero(&out, lcu.k)
}

fn postselect_zero(out: &QuantumState, k: usize) -> Result<(QuantumState, f64)> {
    let anc: Vec<usize> = (0..k).collect();
    let p = out.probabilities(&anc)?.get(0);
    if p < 1e-24 {
        return Err(Error::NullResult);
    }
    let (sub, _) = out.postselect(&anc, 0)?;
    Ok((sub, p))
}

/// `W` followed by `rounds` of `U_f W^dagger U_f0 W` (time order) with
/// `U_f = U_f0 = (I - 2|0><0|) x I` on the first `k` qubits.
pub fn oblivious_aa(w: &Circuit, k: usize, rounds: usize) -> Result<Circuit> {
    if k == 0 || k > w.n {
        return Err(Error::Argument("ancilla register must be non-empty and fit".into()));
    }
    let anc: Vec<usize> = (0..k).collect();
    // I - 2|0><0| is -(2|0><0| - I).
    let mut reflect = zero_phase_flip(w.n, &anc);
    reflect.global_phase(0, PI);
    let mut c = w.clone();
    for _ in 0..rounds {
        c.append(&reflect);
        c.append(&w.inverse());
        c.append(&reflect);
        c.append(w);
    }
    Ok(c)
}

/// LCU followed by oblivious amplification. An extra ancilla rotation pads
/// the success amplitude down to `sin(pi / (2(2 rounds + 1)))` so the given
/// number of rounds lands exactly on the good state; this is exact when `A`
/// is proportional to a unitary.
pub fn lcu_amplified(
    coeffs: &[f64],
    unitaries: &[Circuit],
    state: &QuantumState,
    rounds: usize,
) -> Result<(QuantumState, f64)> {
    let lcu = lcu_circuit(coeffs, unitaries)?;
    let n = state.n_qubits();
    let base = lcu.circuit.run(&QuantumState::zero(lcu.k)?.kron(state)?)?;
    let (_, p) = postselect_zero(&base, lcu.k)?;
    if rounds == 0 {
        return postselect_zero(&base, lcu.k);
    }
    let target = crate::math::sin(PI / (2.0 * (2 * rounds + 1) as f64));
    let s = sqrt(p);
    if s < target - 1e-12 {
        return Err(Error::Precondition(alloc::format!(
            "success amplitude {s} below {target}; use more rounds"
        )));
    }
    // Padding qubit 0 keeps amplitude target / s on |0>.
    let beta = crate::math::acos((target / s).min(1.0));
    let k = lcu.k + 1;
    let mut w = Circuit::new(k + n);
    w.ry(0, 2.0 * beta);
    let shifted: Vec<usize> = (1..k + n).collect();
    w.append_mapped(&lcu.circuit, &shifted);
    let amplified = oblivious_aa(&w, k, rounds)?;
    let out = amplified.run(&QuantumState::zero(k)?.kron(state)?)?;
    postselect_zero(&out, k)
}

/// Truncated Taylor series `e^{-iHt} ~ sum_k (t^k / k!) a_k V_k` as
/// non-negative LCU coefficients and unitary circuits; products with the
/// same string and phase are merged.
pub fn lcu_taylor_expand(h: &PauliSum, t: f64, order: usize) -> Result<(Vec<f64>, Vec<Circuit>)> {
    if order > 6 {
        return Err(Error::Range(alloc::format!("order {order} above 6")));
    }
    if !(t >= 0.0) {
        return Err(Error::Argument("evolution time must be non-negative".into()));
    }
    let n = h.n_qubits();
    let mut base = h.real_terms()?;
    if h.real_offset() != 0.0 {
        base.push((h.real_offset(), PauliString::identity(n)));
    }
    let norm: f64 = base.iter().map(|(a, _)| a.abs()).sum();
    let mut fact = 1.0;
    for k in 1..=order + 1 {
        fact *= k as f64;
    }
    let bound = crate::math::powi(norm * t.abs(), order as i32 + 1) / fact;
    if bound >= 1e-6 {
        return Err(Error::Range(alloc::format!("truncation bound {bound:e} is not below 1e-6")));
    }
    // Each entry: (weight, phase quarter-turns, string).
    let mut merged: Vec<(f64, u8, PauliString)> = Vec::new();
    let mut push = |w: f64, quarter: u8, s: PauliString| {
        if let Some(e) = merged.iter_mut().find(|e| e.1 == quarter && e.2 == s) {
            e.0 += w;
        } else {
            merged.push((w, quarter, s));
        }
    };
    // Level-k products with accumulated phase.
    let mut level: Vec<(f64, C64, PauliString)> = vec![(1.0, C64::new(1.0, 0.0), PauliString::identity(n))];
    push(1.0, 0, PauliString::identity(n));
    let mut kfact = 1.0;
    for k in 1..=order {
        kfact *= k as f64;
        let mut next = Vec::with_capacity(level.len() * base.len());
        for (w, ph, s) in &level {
            for (a, p) in &base {
                let (mph, prod) = s.mul(p);
                let sign = if *a < 0.0 { -1.0 } else { 1.0 };
                next.push((w * a.abs(), ph * mph * C64::new(sign, 0.0) * C64::new(0.0, -1.0), prod));
            }
        }
        for (w, ph, s) in &next {
            let quarter = (crate::math::round(carg(*ph) / (PI / 2.0)) as i64).rem_euclid(4) as u8;
            push(w * crate::math::powi(t, k as i32) / kfact, quarter, s.clone());
        }
        level = next;
    }
    let mut coeffs = Vec::new();
    let mut circuits = Vec::new();
    for (w, quarter, s) in merged {
        if w == 0.0 {
            continue;
        }
        let mut c = s.circuit();
        if c.is_empty() {
            c.i(0);
        }
        if quarter != 0 {
            c.global_phase(0, quarter as f64 * PI / 2.0);
        }
        coeffs.push(w);
        circuits.push(c);
    }
    Ok((coeffs, circuits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, cos, sin, FRAC_1_SQRT_2};
    use crate::rng;
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn exp_z_is_single_rz() {
        let circ = exp_pauli_circuit(&ps("Z"), 0.3).unwrap();
        assert_eq!(circ.len(), 1);
        assert_eq!(circ.ops[0].gate, Gate::Rz(0.6));
    }

    #[test]
    fn exp_zz_truth_table() {
        let t = 0.7;
        let m = exp_pauli_circuit(&ps("ZZ"), t).unwrap().unitary_matrix().unwrap();
        let em = crate::math::cis(-t);
        let ep = crate::math::cis(t);
        let expect = Matrix::diagonal(&[em, ep, ep, em]);
        assert!(m.max_diff(&expect) < 1e-12);
    }

    #[test]
    fn exp_xyz_matches_dense() {
        for label in ["XYZ", "YXI", "IZY", "YYY", "XIX"] {
            let p = ps(label);
            let m = exp_pauli_circuit(&p, 0.45).unwrap().unitary_matrix().unwrap();
            let exact = p.matrix().evolution(0.45);
            assert!(m.max_diff(&exact) < 1e-10, "{label}");
        }
        assert!(exp_pauli_circuit(&ps("II"), 1.0).is_err());
    }

    #[test]
    fn trotter_commuting_is_exact() {
        let h = PauliSum::from_labels(&[(0.8, "ZI"), (-0.3, "IZ")]).unwrap();
        for r in [1, 3] {
            assert!(evolution_error(&trotter1(&h, 1.3, r).unwrap(), &h, 1.3).unwrap() < 1e-10);
            assert!(evolution_error(&trotter2(&h, 1.3, r).unwrap(), &h, 1.3).unwrap() < 1e-10);
        }
        let single = PauliSum::from_labels(&[(0.5, "XY")]).unwrap();
        assert!(evolution_error(&trotter2(&single, 2.0, 1).unwrap(), &single, 2.0).unwrap() < 1e-10);
    }

    #[test]
    fn trotter_r1_is_plain_product() {
        let h = PauliSum::from_labels(&[(1.0, "XI"), (1.0, "ZZ")]).unwrap();
        let circ = trotter1(&h, 1.0, 1).unwrap();
        let mut direct = exp_pauli_circuit(&ps("XI"), 1.0).unwrap();
        direct.append(&exp_pauli_circuit(&ps("ZZ"), 1.0).unwrap());
        assert!(circ.unitary_matrix().unwrap().max_diff(&direct.unitary_matrix().unwrap()) < 1e-14);
    }

    #[test]
    fn trotter_error_ratios() {
        let h = PauliSum::from_labels(&[(1.0, "XI"), (1.0, "ZZ")]).unwrap();
        let e1 = |r| evolution_error(&trotter1(&h, 1.0, r).unwrap(), &h, 1.0).unwrap();
        let e2 = |r| evolution_error(&trotter2(&h, 1.0, r).unwrap(), &h, 1.0).unwrap();
        let r1 = e1(8) / e1(16);
        let r2 = e2(8) / e2(16);
        assert!((1.6..=2.4).contains(&r1), "{r1}");
        assert!((3.2..=4.8).contains(&r2), "{r2}");
    }

    fn seeded_sum(seed: u64) -> PauliSum {
        let mut r = rng::seeded(seed);
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut h = PauliSum::new(3);
        while h.terms().len() < 4 {
            let s = PauliString::new((0..3).map(|_| letters[(rng::uniform(&mut r) * 4.0) as usize % 4]).collect());
            if !s.is_identity() {
                h.add_term(c(rng::uniform(&mut r) + 0.2, 0.0), s).unwrap();
            }
        }
        h
    }

    fn slope(e: &dyn Fn(usize) -> f64) -> f64 {
        let rs = [4usize, 8, 16, 32];
        let xs: Vec<f64> = rs.iter().map(|&r| (r as f64).ln()).collect();
        let ys: Vec<f64> = rs.iter().map(|&r| e(r).ln()).collect();
        let mx = xs.iter().sum::<f64>() / 4.0;
        let my = ys.iter().sum::<f64>() / 4.0;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    }

    #[test]
    fn trotter_log_log_slopes() {
        for seed in [3u64, 11] {
            let h = seeded_sum(seed);
            let s1 = slope(&|r| evolution_error(&trotter1(&h, 1.0, r).unwrap(), &h, 1.0).unwrap());
            let s2 = slope(&|r| evolution_error(&trotter2(&h, 1.0, r).unwrap(), &h, 1.0).unwrap());
            assert!((s1 + 1.0).abs() <= 0.3, "seed {seed}: first-order slope {s1}");
            assert!((s2 + 2.0).abs() <= 0.3, "seed {seed}: second-order slope {s2}");
        }
    }

    fn reference_sparse(a: f64, b: f64, cv: f64) -> SparseOracle {
        SparseOracle::new(2, vec![3, 1, 2, 0], vec![a, b, cv, a]).unwrap()
    }

    #[test]
    fn one_sparse_reference_block() {
        let (a, b, cv, t) = (0.7, -0.4, 1.1, 0.9);
        let o = reference_sparse(a, b, cv);
        let dense = o.matrix();
        assert_eq!(dense[(0, 3)], c(a, 0.0));
        let exact = dense.evolution(t);
        // Block form: e^{-iaXt} on {0, 3}, phases on 1 and 2.
        assert!((exact[(0, 0)] - c(cos(a * t), 0.0)).norm() < 1e-12);
        assert!((exact[(0, 3)] - c(0.0, -sin(a * t))).norm() < 1e-12);
        assert!((exact[(1, 1)] - crate::math::cis(-b * t)).norm() < 1e-12);
        assert!((exact[(2, 2)] - crate::math::cis(-cv * t)).norm() < 1e-12);
        for x in 0..4 {
            let out = one_sparse_evolve(&o, t, &QuantumState::basis(2, x).unwrap(), ValuePath::Exact).unwrap();
            let col = QuantumState::from_amplitudes(exact.column(x)).unwrap();
            assert!(out.max_diff(&col) < 1e-8);
        }
    }

    #[test]
    fn one_sparse_zero_is_identity() {
        let o = SparseOracle::from_fn(2, |x| (x, 0.0)).unwrap();
        let psi = QuantumState::uniform(2).unwrap();
        assert!(one_sparse_evolve(&o, 1.0, &psi, ValuePath::Exact).unwrap().max_diff(&psi) < 1e-12);
    }

    #[test]
    fn one_sparse_rejects_bad_oracles() {
        assert!(SparseOracle::new(2, vec![1, 2, 0, 3], vec![1.0; 4]).is_err());
        assert!(SparseOracle::new(1, vec![1, 0], vec![1.0, 2.0]).is_err());
        let cm = Matrix::from_rows(&[[c(0.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(0.0, 0.0)]]);
        assert!(SparseOracle::from_matrix(&cm).is_err());
    }

    pub(crate) fn random_sparse(n: usize, seed: u64) -> SparseOracle {
        let mut r = rng::seeded(seed);
        let dim = 1usize << n;
        let mut perm: Vec<usize> = (0..dim).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut r);
        let mut col: Vec<usize> = (0..dim).collect();
        let mut value = vec![0.0; dim];
        let mut i = 0;
        while i < dim {
            let x = perm[i];
            let v = 1.8 * rng::uniform(&mut r) - 0.9;
            if i + 1 < dim && rng::uniform(&mut r) < 0.6 {
                let y = perm[i + 1];
                col[x] = y;
                col[y] = x;
                value[x] = v;
                value[y] = v;
                i += 2;
            } else {
                value[x] = v;
                i += 1;
            }
        }
        SparseOracle::new(n, col, value).unwrap()
    }

    fn random_state(n: usize, seed: u64) -> QuantumState {
        let mut r = rng::seeded(seed);
        QuantumState::normalized((0..1 << n).map(|_| c(rng::uniform(&mut r) - 0.5, rng::uniform(&mut r) - 0.5)).collect())
            .unwrap()
    }

    #[test]
    fn one_sparse_random_exact() {
        for seed in 0..20u64 {
            let n = 1 + (seed as usize % 3);
            let o = random_sparse(n, seed);
            let psi = random_state(n, seed + 100);
            let out = one_sparse_evolve(&o, 0.8, &psi, ValuePath::Exact).unwrap();
            let want = o.matrix().evolution(0.8).mul_vec(psi.amplitudes());
            assert!(out.max_diff(&QuantumState::from_amplitudes(want).unwrap()) < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn one_sparse_quantized_within_budget() {
        for seed in [1u64, 2] {
            let o = random_sparse(2, seed);
            let psi = random_state(2, seed);
            let out = one_sparse_evolve(&o, 0.8, &psi, ValuePath::Quantized { bits: VALUE_BITS }).unwrap();
            let want = o.matrix().evolution(0.8).mul_vec(psi.amplitudes());
            assert!(out.max_diff(&QuantumState::from_amplitudes(want).unwrap()) < 2e-2);
        }
    }

    #[test]
    fn one_sparse_commutes_with_relabelling() {
        // Relabel basis states by x -> x ^ mask on both the oracle and the state.
        let o = random_sparse(3, 9);
        let mask = 0b101;
        let relabelled =
            SparseOracle::from_fn(3, |x| (o.column(x ^ mask) ^ mask, o.value(x ^ mask))).unwrap();
        let psi = random_state(3, 4);
        let out = one_sparse_evolve(&o, 0.6, &psi, ValuePath::Exact).unwrap();
        let mut permuted = psi.clone();
        permuted.apply_permutation(|x| x ^ mask);
        let mut out2 = one_sparse_evolve(&relabelled, 0.6, &permuted, ValuePath::Exact).unwrap();
        out2.apply_permutation(|x| x ^ mask);
        assert!(out.max_diff(&out2) < 1e-10);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_two_sparse() {
        let h = Matrix::from_real_rows(&[
            &[0.5, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 2.0, 0.0],
            &[0.0, 2.0, 0.0, 0.3],
            &[0.0, 0.0, 0.3, 0.0],
        ]);
        let parts = split_sparse(&h).unwrap();
        let mut sum = Matrix::zeros(4, 4);
        for p in &parts {
            SparseOracle::from_matrix(p).unwrap();
            sum = sum.add(p);
        }
        assert!(sum.max_diff(&h) < 1e-15);
    }

    #[test]
    fn lcu_prep_matches_two_by_two() {
        let (a0, a1) = (0.3f64, 1.1f64);
        let s = (a0 + a1).sqrt();
        let o = state_preparation(&[(a0 / (a0 + a1)).sqrt(), (a1 / (a0 + a1)).sqrt()]).unwrap();
        let expect = Matrix::from_real_rows(&[&[a0.sqrt() / s, -a1.sqrt() / s], &[a1.sqrt() / s, a0.sqrt() / s]]);
        assert!(o.unitary_matrix().unwrap().max_diff(&expect) < 1e-15);
        let v = [0.1f64, 0.0, 0.7, 0.2, 0.3, 0.0, 0.5, 0.1];
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let out = state_preparation(&v).unwrap().run_basis(0).unwrap();
        for (i, &x) in v.iter().enumerate() {
            assert!((out.amplitude(i) - c(x, 0.0)).norm() < 1e-12);
        }
    }

    fn pauli_circuit(p: Pauli) -> Circuit {
        let mut c = Circuit::new(1);
        c.push(p.gate(), &[0], &[]);
        c
    }

    #[test]
    fn lcu_x_plus_z() {
        let zero = QuantumState::zero(1).unwrap();
        let (out, p) = lcu_apply(&[1.0, 1.0], &[pauli_circuit(Pauli::X), pauli_circuit(Pauli::Z)], &zero).unwrap();
        let plus = QuantumState::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!((p - 0.5).abs() < 1e-10);
        assert!(out.equal_up_to_global_phase(&plus, 1e-10));
        let (amp, p1) = lcu_amplified(&[1.0, 1.0], &[pauli_circuit(Pauli::X), pauli_circuit(Pauli::Z)], &zero, 1).unwrap();
        assert!((p1 - 1.0).abs() < 1e-9);
        assert!(amp.equal_up_to_global_phase(&plus, 1e-9));
    }

    #[test]
    fn lcu_general_combination() {
        let mut ry = Circuit::new(2);
        ry.ry(0, 0.4).cx(0, 1);
        let mut hx = Circuit::new(2);
        hx.h(1).x(0);
        let cz = {
            let mut c = Circuit::new(2);
            c.cz(0, 1);
            c
        };
        let coeffs = [0.5, 1.5, 0.25];
        let us = [ry, hx, cz];
        let psi = random_state(2, 8);
        let (out, p) = lcu_apply(&coeffs, &us, &psi).unwrap();
        let mut a = Matrix::zeros(4, 4);
        for (w, u) in coeffs.iter().zip(&us) {
            a = a.add(&u.unitary_matrix().unwrap().scale(c(*w, 0.0)));
        }
        let v = a.mul_vec(psi.amplitudes());
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((p - norm2 / (2.25 * 2.25)).abs() < 1e-12);
        assert!(out.max_diff(&QuantumState::normalized(v).unwrap()) < 1e-10);
        let one = lcu_apply(&[2.0], &us[..1], &psi).unwrap();
        assert!((one.1 - 1.0).abs() < 1e-12);
        let cancel = lcu_apply(&[1.0, 1.0], &[pauli_circuit(Pauli::Z), {
            let mut c = pauli_circuit(Pauli::Z);
            c.global_phase(0, PI);
            c
        }], &QuantumState::zero(1).unwrap());
        assert!(matches!(cancel, Err(Error::NullResult)));
    }

    #[test]
    fn oblivious_rotation() {
        // W puts amplitude 1/2 on ancilla |0>; one round reaches 1.
        let mut w = Circuit::new(2);
        w.ry(0, 2.0 * (PI / 3.0)).h(1);
        let p0 = w.run_basis(0).unwrap().probabilities(&[0]).unwrap().get(0);
        assert!((p0 - 0.25).abs() < 1e-12);
        let amplified = oblivious_aa(&w, 1, 1).unwrap();
        let p = amplified.run_basis(0).unwrap().probabilities(&[0]).unwrap().get(0);
        assert!((p - 1.0).abs() < 1e-9);
        let bare = oblivious_aa(&w, 1, 0).unwrap();
        assert_eq!(bare, w);
    }

    #[test]
    fn taylor_examples() {
        let z = PauliSum::from_labels(&[(1.0, "Z")]).unwrap();
        assert!(lcu_taylor_expand(&z, 0.1, 0).is_err());
        let (c0, u0) = lcu_taylor_expand(&z, 1e-7, 0).unwrap();
        assert_eq!(c0, vec![1.0]);
        assert_eq!(u0.len(), 1);
        let t = 0.1;
        let (coeffs, us) = lcu_taylor_expand(&z, t, 4).unwrap();
        let total: f64 = coeffs.iter().sum();
        let series: f64 = (0..=4).map(|k| crate::math::powi(t, k) / (1..=k).map(|j| j as f64).product::<f64>()).sum();
        assert!((total - series).abs() < 1e-14);
        let plus = QuantumState::uniform(1).unwrap();
        let (out, _) = lcu_apply(&coeffs, &us, &plus).unwrap();
        let exact = QuantumState::from_amplitudes(z.matrix().evolution(t).mul_vec(plus.amplitudes())).unwrap();
        assert!(out.max_diff(&exact) < 1e-6, "{}", out.max_diff(&exact));
        let big = PauliSum::from_labels(&[(3.0, "X")]).unwrap();
        assert!(matches!(lcu_taylor_expand(&big, 1.0, 3), Err(Error::Range(_))));
    }

    #[test]
    fn taylor_two_qubit() {
        let h = PauliSum::from_labels(&[(0.5, "XZ"), (-0.3, "YY"), (0.2, "ZI")]).unwrap();
        let t = 0.05;
        let (coeffs, us) = lcu_taylor_expand(&h, t, 5).unwrap();
        let psi = random_state(2, 21);
        let (out, _) = lcu_apply(&coeffs, &us, &psi).unwrap();
        let exact = QuantumState::from_amplitudes(h.matrix().evolution(t).mul_vec(psi.amplitudes())).unwrap();
        assert!(out.max_diff(&exact) < 1e-6);
    }

    proptest! {
        #[test]
        fn exp_pauli_is_cos_minus_i_sin(code in 1usize..64, theta in -3.0f64..3.0) {
            let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
            let p = PauliString::new((0..3).map(|q| letters[(code >> (2 * q)) & 3]).collect());
            prop_assume!(!p.is_identity());
            let m = exp_pauli_circuit(&p, theta).unwrap().unitary_matrix().unwrap();
            let expect = Matrix::identity(8).scale(c(cos(theta), 0.0)).sub(&p.matrix().scale(c(0.0, sin(theta))));
            prop_assert!(m.max_diff(&expect) < 1e-10);
        }

        #[test]
        fn lcu_success_is_exact(w0 in 0.05f64..2.0, w1 in 0.05f64..2.0, seed in 0u64..100) {
            let psi = random_state(1, seed);
            let us = [pauli_circuit(Pauli::X), pauli_circuit(Pauli::Y)];
            let lcu = lcu_circuit(&[w0, w1], &us).unwrap();
            let out = lcu.circuit.run(&QuantumState::zero(1).unwrap().kron(&psi).unwrap()).unwrap();
            let p = out.probabilities(&[0]).unwrap().get(0);
            let a = Pauli::X.matrix().scale(c(w0, 0.0)).add(&Pauli::Y.matrix().scale(c(w1, 0.0)));
            let v = a.mul_vec(psi.amplitudes());
            let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((p - n2 / ((w0 + w1) * (w0 + w1))).abs() < 1e-12);
        }
    }
}
