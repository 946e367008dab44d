//! Entry-level algorithms: Bell pairs, basis changes, teleportation,
//! Deutsch-Jozsa, Bernstein-Vazirani, Simon and readout-error mitigation.

use alloc::vec::Vec;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::matrix::real;
use crate::rng;
use crate::state::{sample_distribution, BasisLabel, Distribution, QuantumState, TOL};

/// Index `(x, y)` of the Bell state `(|0y> + (-1)^x |1 y'>)/sqrt 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellIndex {
    pub x: bool,
    pub y: bool,
}

impl BellIndex {
    pub fn new(x: bool, y: bool) -> Self {
        BellIndex { x, y }
    }

    pub fn all() -> [BellIndex; 4] {
        [(false, false), (false, true), (true, false), (true, true)].map(|(x, y)| BellIndex { x, y })
    }

    /// Two-bit value `xy`.
    pub fn value(&self) -> usize {
        ((self.x as usize) << 1) | self.y as usize
    }
}

/// H on the first qubit then CX, starting from `|xy>`.
pub fn bell_prepare(idx: BellIndex) -> QuantumState {
    let mut c = Circuit::new(2);
    c.h(0).cx(0, 1);
    c.run_basis(idx.value()).expect("two-qubit circuit")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementBasis {
    Computational,
    Bell,
    Hadamard,
}

/// Circuit rotating `basis` onto the computational basis.
pub fn basis_change(basis: MeasurementBasis, n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    match basis {
        MeasurementBasis::Computational => {}
        MeasurementBasis::Bell => {
            if n != 2 {
                return Err(Error::Argument(alloc::format!("Bell measurement needs 2 qubits, got {n}")));
            }
            c.cx(0, 1).h(0);
        }
        MeasurementBasis::Hadamard => {
            for q in 0..n {
                c.h(q);
            }
        }
    }
    Ok(c)
}

/// Outcome probabilities of measuring `state` in `basis`.
pub fn measure_in_basis(state: &QuantumState, basis: MeasurementBasis) -> Result<Distribution> {
    let c = basis_change(basis, state.n_qubits())?;
    Ok(c.run(state)?.full_distribution())
}

/// One branch of the teleportation protocol.
#[derive(Clone, Debug)]
pub struct TeleportBranch {
    /// Alice's outcome `(i, j)`: `i` from the payload qubit, `j` from her half.
    pub outcome: BellIndex,
    pub probability: f64,
    /// Bob's qubit before the `X^j Z^i` correction.
    pub before: QuantumState,
    pub after: QuantumState,
}

/// All four branches of teleporting a one-qubit `payload`; qubit 0 is the
/// payload, qubits 1 and 2 share the Bell pair, qubit 2 is Bob's.
pub fn teleport_branches(payload: &QuantumState) -> Result<Vec<TeleportBranch>> {
    if payload.n_qubits() != 1 {
        return Err(Error::Argument("payload must be a single qubit".into()));
    }
    let mut c = Circuit::new(3);
    c.h(1).cx(1, 2).cx(0, 1).h(0);
    let state = c.run(&payload.kron(&QuantumState::zero(2)?)?)?;
    let mut out = Vec::with_capacity(4);
    for outcome in BellIndex::all() {
        let (before, probability) = state.postselect(&[0, 1], outcome.value())?;
        let mut after = before.clone();
        if outcome.y {
            after.apply_gate(&Gate::X.matrix(), &[0], &[])?;
        }
        if outcome.x {
            after.apply_gate(&Gate::Z.matrix(), &[0], &[])?;
        }
        out.push(TeleportBranch { outcome, probability, before, after });
    }
    Ok(out)
}

/// Teleports `payload` with Alice's outcome drawn from `seed`; returns Bob's
/// corrected qubit and the classical message.
pub fn teleport(payload: &QuantumState, seed: u64) -> Result<(QuantumState, BellIndex)> {
    let branches = teleport_branches(payload)?;
    let probs: Vec<f64> = branches.iter().map(|b| b.probability).collect();
    let dist = Distribution::exact(2, &probs);
    let drawn = sample_distribution(&dist, 1, seed)?;
    let k = *drawn.entries.keys().next().ok_or(Error::ImpossibleOutcome)?;
    let b = branches.into_iter().nth(k).ok_or(Error::ImpossibleOutcome)?;
    Ok((b.after, b.outcome))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DjVerdict {
    Constant,
    Balanced,
}

/// Deutsch-Jozsa circuit: H layer, the phase oracle once, H layer.
pub fn deutsch_jozsa_circuit(oracle: &Circuit, n: usize) -> Result<Circuit> {
    if oracle.n != n {
        return Err(Error::Dimension { expected: n, found: oracle.n });
    }
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.h(q);
    }
    c.append(oracle);
    for q in 0..n {
        c.h(q);
    }
    Ok(c)
}

/// Probability of the all-zeros outcome of the Deutsch-Jozsa circuit.
pub fn deutsch_jozsa_p0(oracle: &Circuit, n: usize) -> Result<f64> {
    let out = deutsch_jozsa_circuit(oracle, n)?.run_basis(0)?;
    Ok(out.amplitude(0).norm_sqr())
}

/// Constant iff the all-zeros probability is 1, balanced iff it is 0.
pub fn deutsch_jozsa(oracle: &Circuit, n: usize) -> Result<DjVerdict> {
    let p0 = deutsch_jozsa_p0(oracle, n)?;
    if (p0 - 1.0).abs() <= TOL {
        Ok(DjVerdict::Constant)
    } else if p0 <= TOL {
        Ok(DjVerdict::Balanced)
    } else {
        Err(Error::Promise(alloc::format!("all-zeros probability {p0} is neither 0 nor 1")))
    }
}

/// Shot-based verdict: constant when more than half the shots read all zeros.
pub fn deutsch_jozsa_sampled(oracle: &Circuit, n: usize, shots: u64, seed: u64) -> Result<DjVerdict> {
    let out = deutsch_jozsa_circuit(oracle, n)?.run_basis(0)?;
    let counts = out.sample(shots, seed)?;
    if counts.frequency(0) > 0.5 {
        Ok(DjVerdict::Constant)
    } else {
        Ok(DjVerdict::Balanced)
    }
}

/// Recovers `s` from a phase oracle for `x -> s.x mod 2`.
pub fn bernstein_vazirani(oracle: &Circuit, n: usize) -> Result<BasisLabel> {
    let out = deutsch_jozsa_circuit(oracle, n)?.run_basis(0)?;
    let dist = out.full_distribution();
    let s = dist.argmax().ok_or(Error::ImpossibleOutcome)?;
    if (dist.get(s) - 1.0).abs() > 1e-9 {
        return Err(Error::Promise("oracle is not a linear phase oracle".into()));
    }
    BasisLabel::new(s, n)
}

/// Phase oracle for `x -> s.x mod 2`: a Z on every qubit where `s` is 1.
pub fn bv_oracle(s: BasisLabel) -> Circuit {
    let mut c = Circuit::new(s.width);
    for q in 0..s.width {
        if s.bit(q) {
            c.z(q);
        }
    }
    c
}

/// Dot product of bit vectors modulo 2.
pub fn gf2_dot(a: usize, b: usize) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// Row-reduced echelon form over GF(2); rows are `n`-bit vectors with bit
/// `n-1-k` holding column `k`. Returns the nonzero pivot rows and their
/// pivot columns.
pub fn gf2_rref(rows: &[usize], n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut m: Vec<usize> = rows.iter().map(|&r| r & ((1usize << n) - 1)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let bit = 1usize << (n - 1 - col);
        let Some(pos) = (rank..m.len()).find(|&i| m[i] & bit != 0) else { continue };
        m.swap(rank, pos);
        for i in 0..m.len() {
            if i != rank && m[i] & bit != 0 {
                m[i] ^= m[rank];
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    (m, pivots)
}

pub fn gf2_rank(rows: &[usize], n: usize) -> usize {
    gf2_rref(rows, n).1.len()
}

/// Basis of `{p : rows . p = 0 (mod 2)}` by Gaussian elimination.
pub fn gf2_nullspace(rows: &[usize], n: usize) -> Vec<usize> {
    let (m, pivots) = gf2_rref(rows, n);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = 1usize << (n - 1 - free);
        for (row, &pc) in m.iter().zip(&pivots) {
            if row & (1usize << (n - 1 - free)) != 0 {
                v |= 1usize << (n - 1 - pc);
            }
        }
        basis.push(v);
    }
    basis
}

/// Outcome of [`simon`].
#[derive(Clone, Debug, PartialEq)]
pub struct SimonResult {
    pub p: BasisLabel,
    /// Measured strings, in order.
    pub samples: Vec<usize>,
}

/// Distribution of the input register after H, oracle, H.
pub fn simon_distribution(oracle: &Circuit, n: usize) -> Result<Distribution> {
    if oracle.n != 2 * n {
        return Err(Error::Dimension { expected: 2 * n, found: oracle.n });
    }
    let mut c = Circuit::new(2 * n);
    for q in 0..n {
        c.h(q);
    }
    c.append(oracle);
    for q in 0..n {
        c.h(q);
    }
    let inputs: Vec<usize> = (0..n).collect();
    c.run_basis(0)?.probabilities(&inputs)
}

fn oracle_output(oracle: &Circuit, n: usize, x: usize) -> Result<usize> {
    let out = oracle.run_basis(x << n)?;
    out.full_distribution().argmax().map(|v| v & ((1 << n) - 1)).ok_or(Error::ImpossibleOutcome)
}

/// Simon's algorithm on a bit oracle with inputs `0..n` and outputs `n..2n`.
/// Samples until the strings reach rank `n - 1`; the single nullspace
/// candidate is confirmed with two classical oracle evaluations, and a
/// failed confirmation or full rank means the function is one-to-one.
pub fn simon(oracle: &Circuit, n: usize, seed: u64, max_runs: Option<usize>) -> Result<SimonResult> {
    if n == 0 {
        return Err(Error::Argument("need at least one input bit".into()));
    }
    let max_runs = max_runs.unwrap_or(4 * n);
    let dist = simon_distribution(oracle, n)?;
    let mut r = rng::seeded(seed);
    let cdf: Vec<f64> = dist
        .to_dense()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let mut samples = Vec::new();
    for _ in 0..max_runs {
        samples.push(rng::draw_from_cdf(&mut r, &cdf));
        let rank = gf2_rank(&samples, n);
        if rank == n {
            return Ok(SimonResult { p: BasisLabel::new(0, n)?, samples });
        }
        if rank == n - 1 {
            let p = gf2_nullspace(&samples, n)[0];
            let p = if oracle_output(oracle, n, 0)? == oracle_output(oracle, n, p)? { p } else { 0 };
            return Ok(SimonResult { p: BasisLabel::new(p, n)?, samples });
        }
    }
    Err(Error::Inconclusive(alloc::format!("rank {} after {max_runs} runs", gf2_rank(&samples, n))))
}

/// Column-stochastic readout matrix mapping ideal to noisy probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct MitigationMatrix {
    dim: usize,
    /// Row-major entries.
    data: Vec<f64>,
}

/// Condition numbers above this are rejected by [`mitigation_correct`].
pub const MAX_CONDITION: f64 = 1e8;

impl MitigationMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Argument(alloc::format!("dimension {dim} is not a power of two")));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Dimension { expected: dim, found: r.len() });
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::Argument("entries must lie in [0, 1]".into()));
        }
        for col in 0..dim {
            let s: f64 = (0..dim).map(|r| data[r * dim + col]).sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::Argument(alloc::format!("column {col} sums to {s}")));
            }
        }
        Ok(MitigationMatrix { dim, data })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new((0..dim).map(|r| (0..dim).map(|c| if r == c { 1.0 } else { 0.0 }).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Condition number in the 1-norm, infinite when singular.
    pub fn condition(&self) -> f64 {
        match real::inverse(&self.data, self.dim) {
            Some(inv) => real::norm1(&self.data, self.dim) * real::norm1(&inv, self.dim),
            None => f64::INFINITY,
        }
    }
}

fn check_len(m: &MitigationMatrix, v: &[f64]) -> Result<()> {
    if v.len() != m.dim {
        return Err(Error::Dimension { expected: m.dim, found: v.len() });
    }
    Ok(())
}

/// `P_noisy = M P_ideal`.
pub fn mitigation_predict(m: &MitigationMatrix, ideal: &[f64]) -> Result<Vec<f64>> {
    check_len(m, ideal)?;
    let s: f64 = ideal.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::Argument(alloc::format!("probabilities sum to {s}")));
    }
    Ok(real::mul_vec(&m.data, m.dim, ideal))
}

/// Result of inverting the readout matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mitigated {
    /// Clipped to `[0, 1]` and renormalized.
    pub probabilities: Vec<f64>,
    /// `M^{-1} P_noisy` before clipping.
    pub raw: Vec<f64>,
}

/// `P_ideal = M^{-1} P_noisy`, clipped back onto the simplex.
pub fn mitigation_correct(m: &MitigationMatrix, noisy: &[f64]) -> Result<Mitigated> {
    check_len(m, noisy)?;
    let cond = m.condition();
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::Conditioning(cond));
    }
    let inv = real::inverse(&m.data, m.dim).ok_or(Error::Conditioning(f64::INFINITY))?;
    let raw = real::mul_vec(&inv, m.dim, noisy);
    let mut probabilities: Vec<f64> = raw.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = probabilities.iter().sum();
    if total <= 0.0 {
        return Err(Error::NullResult);
    }
    for p in &mut probabilities {
        *p = (*p / total).min(1.0);
    }
    Ok(Mitigated { probabilities, raw })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::math::{c, FRAC_1_SQRT_2};
    use crate::oracles::{bit_oracle, phase_oracle_from_table, TruthTable};
    use proptest::prelude::*;

    fn reference_m() -> MitigationMatrix {
        MitigationMatrix::new(vec![
            vec![0.90, 0.01, 0.02, 0.01],
            vec![0.05, 0.98, 0.04, 0.03],
            vec![0.04, 0.002, 0.91, 0.04],
            vec![0.01, 0.008, 0.03, 0.92],
        ])
        .unwrap()
    }

    fn state(amps: &[(f64, f64)]) -> QuantumState {
        QuantumState::from_amplitudes(amps.iter().map(|&(r, i)| c(r, i)).collect()).unwrap()
    }

    #[test]
    fn bell_states() {
        let h = FRAC_1_SQRT_2;
        let s00 = bell_prepare(BellIndex::new(false, false));
        assert!(s00.max_diff(&state(&[(h, 0.0), (0.0, 0.0), (0.0, 0.0), (h, 0.0)])) < 1e-12);
        let s11 = bell_prepare(BellIndex::new(true, true));
        assert!(s11.max_diff(&state(&[(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, 0.0)])) < 1e-12);
        for a in BellIndex::all() {
            for b in BellIndex::all() {
                let ip = bell_prepare(a).inner(&bell_prepare(b)).unwrap();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_measurements() {
        for idx in BellIndex::all() {
            let d = measure_in_basis(&bell_prepare(idx), MeasurementBasis::Bell).unwrap();
            assert!((d.get(idx.value()) - 1.0).abs() < 1e-12);
        }
        let plus = QuantumState::uniform(2).unwrap();
        let d = measure_in_basis(&plus, MeasurementBasis::Hadamard).unwrap();
        assert!((d.get(0) - 1.0).abs() < 1e-12);
        assert!(measure_in_basis(&QuantumState::zero(3).unwrap(), MeasurementBasis::Bell).is_err());
        // a' psi00 + b' psi01 reads 00 and 01 with weights |a'|^2 and |b'|^2.
        let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
        let p00 = bell_prepare(BellIndex::new(false, false));
        let p01 = bell_prepare(BellIndex::new(false, true));
        let mixed: Vec<_> = p00.amplitudes().iter().zip(p01.amplitudes()).map(|(x, y)| a * x + b * y).collect();
        let d = measure_in_basis(&QuantumState::from_amplitudes(mixed).unwrap(), MeasurementBasis::Bell).unwrap();
        assert!((d.get(0) - 0.36).abs() < 1e-12);
        assert!((d.get(1) - 0.64).abs() < 1e-12);
    }

    #[test]
    fn teleport_examples() {
        let zero = QuantumState::zero(1).unwrap();
        for b in teleport_branches(&zero).unwrap() {
            assert!(b.after.fidelity(&zero).unwrap() > 1.0 - 1e-12);
            assert!((b.probability - 0.25).abs() < 1e-10);
        }
        let phi = state(&[(0.6, 0.0), (0.0, 0.8)]);
        let branches = teleport_branches(&phi).unwrap();
        let b10 = branches.iter().find(|b| b.outcome == BellIndex::new(true, false)).unwrap();
        let mut z_phi = phi.clone();
        z_phi.apply_gate(&Gate::Z.matrix(), &[0], &[]).unwrap();
        assert!(b10.before.equal_up_to_global_phase(&z_phi, 1e-12));
        assert!(b10.after.equal_up_to_global_phase(&phi, 1e-12));
    }

    #[test]
    fn teleport_random_payloads() {
        let mut r = rng::seeded(99);
        let mut min_f: f64 = 1.0;
        for seed in 0..1000 {
            let amps = vec![
                c(rng::uniform(&mut r) - 0.5, rng::uniform(&mut r) - 0.5),
                c(rng::uniform(&mut r) - 0.5, rng::uniform(&mut r) - 0.5),
            ];
            let payload = QuantumState::normalized(amps).unwrap();
            let (out, _) = teleport(&payload, seed).unwrap();
            min_f = min_f.min(out.fidelity(&payload).unwrap());
        }
        assert!(min_f >= 1.0 - 1e-10);
    }

    fn dj_oracle(n: usize, f: impl Fn(usize) -> usize) -> Circuit {
        phase_oracle_from_table(&TruthTable::from_fn(n, 1, f).unwrap()).unwrap()
    }

    #[test]
    fn deutsch_jozsa_examples() {
        assert_eq!(deutsch_jozsa(&dj_oracle(3, |_| 0), 3).unwrap(), DjVerdict::Constant);
        assert_eq!(deutsch_jozsa(&dj_oracle(3, |x| x.count_ones() as usize % 2), 3).unwrap(), DjVerdict::Balanced);
        let ones = dj_oracle(3, |_| 1);
        assert_eq!(deutsch_jozsa(&ones, 3).unwrap(), DjVerdict::Constant);
        let out = deutsch_jozsa_circuit(&ones, 3).unwrap().run_basis(0).unwrap();
        assert!((out.amplitude(0) - c(-1.0, 0.0)).norm() < 1e-12);
        let bad = dj_oracle(2, |x| (x == 0) as usize);
        assert!(matches!(deutsch_jozsa(&bad, 2), Err(Error::Promise(_))));
        assert_eq!(deutsch_jozsa_sampled(&dj_oracle(3, |x| x & 1), 3, 100, 1).unwrap(), DjVerdict::Balanced);
    }

    #[test]
    fn deutsch_jozsa_exhaustive_small() {
        for n in 1..=4usize {
            let size = 1usize << n;
            // Constant functions and every balanced function for n <= 3;
            // for n = 4 a stride through the balanced subsets.
            let step = if n == 4 { 97 } else { 1 };
            for mask in (0..1u64 << size).step_by(step) {
                let ones = mask.count_ones() as usize;
                if ones != 0 && ones != size && ones != size / 2 {
                    continue;
                }
                let f = |x: usize| ((mask >> x) & 1) as usize;
                let oracle = dj_oracle(n, f);
                let circ = deutsch_jozsa_circuit(&oracle, n).unwrap();
                assert_eq!(circ.len(), 2 * n + oracle.len());
                let expect = if ones == size / 2 { DjVerdict::Balanced } else { DjVerdict::Constant };
                assert_eq!(deutsch_jozsa(&oracle, n).unwrap(), expect, "n={n} mask={mask:b}");
            }
        }
    }

    #[test]
    fn bernstein_vazirani_examples() {
        let s = BasisLabel::parse("101").unwrap();
        let oracle = bv_oracle(s);
        let table = TruthTable::from_fn(3, 1, |x| gf2_dot(x, 0b101) as usize).unwrap();
        assert_eq!(table.rows, vec![0, 1, 0, 1, 1, 0, 1, 0]);
        let m = oracle.unitary_matrix().unwrap();
        for x in 0..8 {
            let sign = if table.rows[x] == 1 { -1.0 } else { 1.0 };
            assert!((m[(x, x)].re - sign).abs() < 1e-12);
        }
        assert_eq!(bernstein_vazirani(&oracle, 3).unwrap(), s);
        let zero = BasisLabel::new(0, 3).unwrap();
        assert_eq!(bernstein_vazirani(&bv_oracle(zero), 3).unwrap(), zero);
        let mut r = rng::seeded(5);
        for _ in 0..100 {
            let v = (rng::uniform(&mut r) * 256.0) as usize;
            let s = BasisLabel::new(v, 8).unwrap();
            assert_eq!(bernstein_vazirani(&bv_oracle(s), 8).unwrap(), s);
        }
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(gf2_nullspace(&[0b001, 0b100, 0b101], 3), vec![0b010]);
        assert_eq!(gf2_nullspace(&[], 3).len(), 3);
        let ns = gf2_nullspace(&[0b110, 0b011], 3);
        assert_eq!(ns, vec![0b111]);
        // Exhaustive cross-check of the {001, 100, 101} case.
        let zeros: Vec<usize> = (1..8).filter(|&p| [1, 4, 5].iter().all(|&r| !gf2_dot(r, p))).collect();
        assert_eq!(zeros, vec![0b010]);
    }

    fn simon_table(p: usize) -> TruthTable {
        // f(x) = min(x, x ^ p) is two-to-one for p != 0.
        TruthTable::from_fn(3, 3, |x| x.min(x ^ p)).unwrap()
    }

    #[test]
    fn simon_examples() {
        // The p = 010 table: 000,010 -> f0; 001,011 -> f1; 100,110 -> f2; 101,111 -> f3.
        let t = TruthTable::new(3, 3, vec![0, 1, 0, 1, 2, 3, 2, 3]).unwrap();
        for seed in 0..10 {
            assert_eq!(simon(&bit_oracle(&t), 3, seed, None).unwrap().p.value, 0b010);
        }
        let one_to_one = TruthTable::from_fn(3, 3, |x| x ^ 0b101).unwrap();
        for seed in 0..10 {
            assert_eq!(simon(&bit_oracle(&one_to_one), 3, seed, None).unwrap().p.value, 0);
        }
    }

    #[test]
    fn simon_samples_orthogonal() {
        let p = 0b110;
        let dist = simon_distribution(&bit_oracle(&simon_table(p)), 3).unwrap();
        let counts = sample_distribution(&dist, 1000, 4).unwrap();
        for &x in counts.entries.keys() {
            assert!(!gf2_dot(x, p));
        }
    }

    #[test]
    fn mitigation_examples() {
        let m = reference_m();
        let noisy = mitigation_predict(&m, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        for (a, b) in noisy.iter().zip([0.455, 0.04, 0.04, 0.465]) {
            assert!((a - b).abs() < 1e-12);
        }
        let back = mitigation_correct(&m, &[0.455, 0.04, 0.04, 0.465]).unwrap();
        for (a, b) in back.probabilities.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((a - b).abs() < 1e-10);
        }
        let id = MitigationMatrix::identity(4).unwrap();
        let v = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(mitigation_predict(&id, &v).unwrap(), v.to_vec());
        assert_eq!(mitigation_correct(&id, &v).unwrap().probabilities, v.to_vec());
        for col in 0..4 {
            let mut e = [0.0; 4];
            e[col] = 1.0;
            let out = mitigation_predict(&m, &e).unwrap();
            for row in 0..4 {
                assert_eq!(out[row], m.get(row, col));
            }
        }
        assert!(mitigation_predict(&m, &[1.0, 0.0]).is_err());
        let singular = MitigationMatrix::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(matches!(mitigation_correct(&singular, &[0.5, 0.5]), Err(Error::Conditioning(_))));
    }

    #[test]
    fn mitigation_clipping_keeps_raw() {
        let m = reference_m();
        let out = mitigation_correct(&m, &[0.95, 0.05, 0.0, 0.0]).unwrap();
        assert!(out.raw.iter().any(|&v| v < 0.0));
        assert!(out.probabilities.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!((out.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn mitigation_round_trip(w in proptest::collection::vec(0.01f64..1.0, 4)) {
            let s: f64 = w.iter().sum();
            let ideal: Vec<f64> = w.iter().map(|x| x / s).collect();
            let m = reference_m();
            let back = mitigation_correct(&m, &mitigation_predict(&m, &ideal).unwrap()).unwrap();
            for (a, b) in back.probabilities.iter().zip(&ideal) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn simon_p_is_hidden_shift(p in 0usize..16, seed in 0u64..1000) {
            let t = TruthTable::from_fn(4, 4, |x| x.min(x ^ p)).unwrap();
            let got = simon(&bit_oracle(&t), 4, seed, Some(64)).unwrap().p.value;
            for x in 0..16 {
                prop_assert_eq!(t.eval(x), t.eval(x ^ got));
            }
            prop_assert_eq!(got, p);
        }

        #[test]
        fn nullspace_is_orthogonal(rows in proptest::collection::vec(0usize..32, 0..6)) {
            let ns = gf2_nullspace(&rows, 5);
            prop_assert_eq!(ns.len() + gf2_rank(&rows, 5), 5);
            for v in &ns {
                for r in &rows {
                    prop_assert!(!gf2_dot(*r, *v));
                }
            }
            prop_assert_eq!(gf2_rank(&ns, 5), ns.len());
        }
    }
}
