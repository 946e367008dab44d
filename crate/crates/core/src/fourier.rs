//! Quantum Fourier transform, phase estimation and iterative phase
//! estimation.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Gate, UnitaryMatrix};
use crate::error::{Error, Result};
use crate::math::{sin, PI};
use crate::matrix::Matrix;
use crate::state::{check_capacity, BasisLabel, Control, Distribution, QuantumState};

/// QFT on `n` qubits. With `swaps` the output qubit order matches the
/// input labels, so the matrix is the unitary DFT `e^{2 pi i j k / 2^n}`.
pub fn qft_circuit(n: usize, swaps: bool) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Argument("QFT needs at least one qubit".into()));
    }
    check_capacity(n)?;
    let mut circ = Circuit::new(n);
    for q in 0..n {
        circ.h(q);
        for m in (q + 1)..n {
            let k = (m - q + 1) as i32;
            circ.cp(m, q, 2.0 * PI / crate::math::powi(2.0, k));
        }
    }
    if swaps {
        for q in 0..n / 2 {
            circ.swap(q, n - 1 - q);
        }
    }
    Ok(circ)
}

/// Inverse QFT (with final swaps).
pub fn iqft_circuit(n: usize) -> Result<Circuit> {
    Ok(qft_circuit(n, true)?.inverse())
}

/// Number of gates in [`qft_circuit`] with swaps.
pub fn qft_gate_count(n: usize) -> usize {
    n * (n + 1) / 2 + n / 2
}

/// Result of a phase-estimation run.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseEstimate {
    /// Most likely clock reading.
    pub raw: BasisLabel,
    /// `raw / 2^c`.
    pub theta_hat: f64,
    /// Exact distribution over the clock register.
    pub distribution: Distribution,
}

/// Supplies `C-U^{2^k}` as a circuit on `1 + m` qubits with qubit 0 as the
/// control and the system on `1..=m`.
pub type ControlledPower<'a> = dyn Fn(usize) -> Result<Circuit> + 'a;

/// Controlled powers of a small unitary matrix by repeated squaring.
pub fn matrix_powers(u: &Matrix) -> Result<Box<dyn Fn(usize) -> Result<Circuit>>> {
    let base = UnitaryMatrix::new(u.clone())?;
    let m = base.n_qubits();
    if m > 3 {
        return Err(Error::Argument("matrix powers support at most 3 system qubits".into()));
    }
    let base = base.into_matrix();
    Ok(Box::new(move |k: usize| {
        let mut p = base.clone();
        for _ in 0..k {
            p = p.mul(&p);
        }
        let mut circ = Circuit::new(1 + m);
        let targets: Vec<usize> = (1..=m).collect();
        circ.unitary(UnitaryMatrix::new(p)?, &targets, &[Control::pos(0)]);
        Ok(circ)
    }))
}

/// Controlled powers of a single catalog gate `P(a)`-like diagonal via
/// angle scaling; exact for phase and rotation gates.
pub fn gate_powers(g: Gate) -> impl Fn(usize) -> Result<Circuit> {
    move |k: usize| {
        let times = 1usize << k.min(62);
        let mut circ = Circuit::new(2);
        let scaled = match g {
            Gate::P(a) => Some(Gate::P(a * times as f64)),
            Gate::Rz(a) => Some(Gate::Rz(a * times as f64)),
            Gate::T => Some(Gate::P(PI / 4.0 * times as f64)),
            Gate::S => Some(Gate::P(PI / 2.0 * times as f64)),
            Gate::Z => Some(if times == 1 { Gate::Z } else { Gate::I }),
            Gate::I => Some(Gate::I),
            _ => None,
        };
        match scaled {
            Some(s) => {
                circ.push(s, &[1], &[Control::pos(0)]);
                Ok(circ)
            }
            None => {
                let mut p = g.matrix();
                for _ in 0..k {
                    p = p.mul(&p);
                }
                circ.unitary(UnitaryMatrix::new(p)?, &[1], &[Control::pos(0)]);
                Ok(circ)
            }
        }
    }
}

/// Full phase-estimation circuit: clocks `0..c`, system `c..c+m`.
pub fn qpe_circuit(powers: &ControlledPower<'_>, m: usize, c: usize) -> Result<Circuit> {
    if !(1..=20).contains(&c) {
        return Err(Error::Range(alloc::format!("clock width {c} outside 1..=20")));
    }
    check_capacity(c + m)?;
    let mut circ = Circuit::new(c + m);
    for q in 0..c {
        circ.h(q);
    }
    for j in 0..c {
        let stage = powers(c - 1 - j)?;
        if stage.n != 1 + m {
            return Err(Error::Dimension { expected: 1 + m, found: stage.n });
        }
        let mut map = Vec::with_capacity(1 + m);
        map.push(j);
        map.extend(c..c + m);
        circ.append(&stage.embed(c + m, &map));
    }
    let clocks: Vec<usize> = (0..c).collect();
    circ.append(&iqft_circuit(c)?.embed(c + m, &clocks));
    Ok(circ)
}

/// Phase estimation of the eigenphase `theta` of `U |u> = e^{2 pi i theta} |u>`.
///
/// Superposition inputs are allowed; the distribution is then the weighted
/// mixture over eigenphases.
pub fn qpe(powers: &ControlledPower<'_>, eigenstate: &QuantumState, c: usize) -> Result<PhaseEstimate> {
    let m = eigenstate.n_qubits();
    let circ = qpe_circuit(powers, m, c)?;
    let input = QuantumState::zero(c)?.kron(eigenstate)?;
    let out = circ.run(&input)?;
    let clocks: Vec<usize> = (0..c).collect();
    let distribution = out.probabilities(&clocks)?;
    let raw = distribution.argmax().unwrap_or(0);
    Ok(PhaseEstimate {
        raw: BasisLabel { value: raw, width: c },
        theta_hat: raw as f64 / (1u64 << c) as f64,
        distribution,
    })
}

/// Closed-form probability that a `c`-bit clock reads `outcome` for phase `theta`.
pub fn qpe_outcome_prob(theta: f64, c: usize, outcome: usize) -> f64 {
    let big_n = (1u64 << c) as f64;
    let delta = theta - outcome as f64 / big_n;
    let den = sin(PI * delta);
    if den.abs() < 1e-13 {
        return 1.0;
    }
    let num = sin(PI * delta * big_n);
    (num * num) / (big_n * big_n * den * den)
}

/// Result of iterative phase estimation.
#[derive(Clone, Debug, PartialEq)]
pub struct IpeResult {
    /// `phi_1 ... phi_m`, most significant first.
    pub bits: Vec<bool>,
    pub raw: BasisLabel,
    pub theta_hat: f64,
    /// Probability of the chosen value in each round, in measurement order
    /// (least significant bit first).
    pub round_probabilities: Vec<f64>,
    /// True when every round was deterministic.
    pub exact: bool,
}

/// Iterative phase estimation with one ancilla (qubit 0), measuring the
/// least significant bit first and feeding earlier bits into correction
/// phases. Each round keeps the more likely outcome.
pub fn ipe(powers: &ControlledPower<'_>, eigenstate: &QuantumState, m: usize) -> Result<IpeResult> {
    if !(1..=20).contains(&m) {
        return Err(Error::Range(alloc::format!("bit count {m} outside 1..=20")));
    }
    let sys = eigenstate.n_qubits();
    let mut state = QuantumState::zero(1)?.kron(eigenstate)?;
    let mut bits = alloc::vec![false; m + 1];
    let mut probs = Vec::with_capacity(m);
    let mut exact = true;
    for k in (1..=m).rev() {
        let mut round = Circuit::new(1 + sys);
        round.h(0);
        round.append(&powers(k - 1)?);
        let mut correction = 0.0;
        for (j, &set) in bits.iter().enumerate().skip(k + 1) {
            if set {
                correction += 1.0 / crate::math::powi(2.0, (j - k + 1) as i32);
            }
        }
        if correction != 0.0 {
            round.p(0, -2.0 * PI * correction);
        }
        round.h(0);
        round.apply(&mut state)?;
        let p1 = state.probability_of(0, true)?;
        let bit = p1 > 0.5;
        let p = if bit { p1 } else { 1.0 - p1 };
        if p < 1.0 - 1e-9 {
            exact = false;
        }
        probs.push(p);
        state.project_in_place(0, bit)?;
        if bit {
            state.apply_unchecked(&Gate::X.matrix(), &[0], &[]);
        }
        bits[k] = bit;
    }
    let bits: Vec<bool> = bits[1..].to_vec();
    let value = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    Ok(IpeResult {
        raw: BasisLabel { value, width: m },
        theta_hat: value as f64 / (1u64 << m) as f64,
        bits,
        round_probabilities: probs,
        exact,
    })
}
