//! Grover search, counting, amplitude estimation and amplification,
//! derandomized search and search as Hamiltonian evolution.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fourier::{qpe, PhaseEstimate};
use crate::math::{asin, ceil, cos, round, sin, sqrt, PI};
use crate::matrix::Matrix;
use crate::oracles::{phase_oracle, value_controls, MarkedSet};
use crate::state::{Control, Distribution, QuantumState};
use crate::C64;

/// Iteration plan for `mu` solutions among `N = 2^n` states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverPlan {
    pub n: usize,
    pub big_n: usize,
    pub mu: usize,
    /// `arcsin(sqrt(mu / N))`.
    pub alpha: f64,
    pub r: usize,
}

impl GroverPlan {
    pub fn new(n: usize, mu: usize, r_override: Option<usize>) -> Result<Self> {
        let big_n = 1usize << n;
        if mu == 0 || mu >= big_n {
            return Err(Error::Promise(alloc::format!("need 1 <= mu < {big_n}, got {mu}")));
        }
        let alpha = asin(sqrt(mu as f64 / big_n as f64));
        let r = r_override.unwrap_or_else(|| optimal_iterations(alpha));
        Ok(GroverPlan { n, big_n, mu, alpha, r })
    }

    /// `sin^2((2r + 1) alpha)`.
    pub fn success_probability(&self) -> f64 {
        let s = sin((2 * self.r + 1) as f64 * self.alpha);
        s * s
    }
}

/// `round(pi / (4 alpha) - 1/2)`, never negative.
pub fn optimal_iterations(alpha: f64) -> usize {
    let r = round(PI / (4.0 * alpha) - 0.5);
    if r > 0.0 { r as usize } else { 0 }
}

/// `I - 2|0><0|` on `qubits`: X layer, multi-controlled Z, X layer.
fn zero_reflection(circ: &mut Circuit, qubits: &[usize]) {
    for &q in qubits {
        circ.x(q);
    }
    let (&last, rest) = qubits.split_last().expect("at least one qubit");
    let controls: Vec<Control> = rest.iter().map(|&q| Control::pos(q)).collect();
    circ.mcz(&controls, last);
    for &q in qubits {
        circ.x(q);
    }
}

/// `S_0 = 2|0><0| - I` on `qubits`, global phase included.
pub fn zero_phase_flip(n: usize, qubits: &[usize]) -> Circuit {
    let mut circ = Circuit::new(n);
    zero_reflection(&mut circ, qubits);
    circ.global_phase(qubits[0], PI);
    circ
}

/// `V = 2|s><s| - I = H^n (2|0><0| - I) H^n`.
pub fn diffuser(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Argument("diffuser needs at least one qubit".into()));
    }
    let qubits: Vec<usize> = (0..n).collect();
    let mut circ = Circuit::new(n);
    for &q in &qubits {
        circ.h(q);
    }
    circ.append(&zero_phase_flip(n, &qubits));
    for &q in &qubits {
        circ.h(q);
    }
    Ok(circ)
}

/// One Grover iterate `G = V U_f`.
pub fn grover_operator(marked: &MarkedSet) -> Result<Circuit> {
    let mut circ = phase_oracle(marked);
    circ.append(&diffuser(marked.n)?);
    Ok(circ)
}

/// State after `r` iterations applied to `|s>`.
pub fn grover_state(marked: &MarkedSet, r: usize) -> Result<QuantumState> {
    let g = grover_operator(marked)?;
    let mut state = QuantumState::uniform(marked.n)?;
    for _ in 0..r {
        g.apply(&mut state)?;
    }
    Ok(state)
}

/// Grover search with the planned (or overridden) iteration count.
pub fn grover_search(marked: &MarkedSet, r_override: Option<usize>) -> Result<(Distribution, GroverPlan)> {
    let plan = GroverPlan::new(marked.n, marked.len(), r_override)?;
    let state = grover_state(marked, plan.r)?;
    Ok((state.full_distribution(), plan))
}

/// Controlled powers `C-W^{2^k}` of a circuit `w` on `m` qubits, built by
/// repetition.
fn repeated_powers(w: &Circuit) -> impl Fn(usize) -> Result<Circuit> + '_ {
    move |k: usize| {
        let m = w.n;
        let map: Vec<usize> = (1..=m).collect();
        let one = w.embed(1 + m, &map).controlled(Control::pos(0));
        let mut circ = Circuit::new(1 + m);
        for _ in 0..1usize << k {
            circ.append(&one);
        }
        Ok(circ)
    }
}

/// Maps a clock reading to the phase in `[0, 1/2]`, merging `x` and `1 - x`.
pub fn fold_outcome(raw: usize, c: usize) -> usize {
    let half = 1usize << (c - 1);
    if raw > half { (1usize << c) - raw } else { raw }
}

/// Outcome of [`quantum_count`].
#[derive(Clone, Debug, PartialEq)]
pub struct CountEstimate {
    pub mu_hat: usize,
    /// Estimated rotation angle of `G`.
    pub theta_hat: f64,
    pub estimate: PhaseEstimate,
}

/// Quantum counting: phase estimation of `G` on `|s>`,
/// `mu = round(N sin^2(theta/2))`.
pub fn quantum_count(marked: &MarkedSet, c: usize) -> Result<CountEstimate> {
    if c < 2 {
        return Err(Error::Argument("counting needs at least 2 clock qubits".into()));
    }
    let g = grover_operator(marked)?;
    let estimate = qpe(&repeated_powers(&g), &QuantumState::uniform(marked.n)?, c)?;
    let folded = fold_outcome(estimate.raw.value, c);
    let theta_hat = 2.0 * PI * folded as f64 / (1u64 << c) as f64;
    let s = sin(theta_hat / 2.0);
    let mu_hat = round((1usize << marked.n) as f64 * s * s) as usize;
    Ok(CountEstimate { mu_hat, theta_hat, estimate })
}

/// `Q = A S_0 A^dagger S_g` (rightmost applied first).
pub fn amplification_operator(prep: &Circuit, good: &MarkedSet) -> Result<Circuit> {
    if prep.n != good.n {
        return Err(Error::Dimension { expected: good.n, found: prep.n });
    }
    let qubits: Vec<usize> = (0..prep.n).collect();
    let mut circ = phase_oracle(good);
    circ.append(&prep.inverse());
    circ.append(&zero_phase_flip(prep.n, &qubits));
    circ.append(prep);
    Ok(circ)
}

/// `Q^r A |0>`.
pub fn amplify(prep: &Circuit, good: &MarkedSet, r: usize) -> Result<QuantumState> {
    let q = amplification_operator(prep, good)?;
    let mut state = prep.run_basis(0)?;
    for _ in 0..r {
        q.apply(&mut state)?;
    }
    Ok(state)
}

/// Outcome of [`amplitude_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeEstimate {
    pub g_hat: f64,
    /// `theta` with `sqrt(g) = sin(theta)`.
    pub theta_hat: f64,
    pub estimate: PhaseEstimate,
}

/// Phase estimation of `Q` on `A|0>`; `g = sin^2(theta)`.
pub fn amplitude_estimate(prep: &Circuit, good: &MarkedSet, c: usize) -> Result<AmplitudeEstimate> {
    if c < 2 {
        return Err(Error::Argument("estimation needs at least 2 clock qubits".into()));
    }
    let q = amplification_operator(prep, good)?;
    let estimate = qpe(&repeated_powers(&q), &prep.run_basis(0)?, c)?;
    let folded = fold_outcome(estimate.raw.value, c);
    let theta_hat = PI * folded as f64 / (1u64 << c) as f64;
    let s = sin(theta_hat);
    Ok(AmplitudeEstimate { g_hat: s * s, theta_hat, estimate })
}

/// Outcome of [`derandomized_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct DerandomizedSearch {
    pub r: usize,
    pub g0: f64,
    /// Reduced success amplitude squared; equals `g0` when no ancilla is needed.
    pub g0_prime: f64,
    /// True when an ancilla rotation was appended.
    pub uses_ancilla: bool,
    /// Distribution over the data register.
    pub distribution: Distribution,
    /// Probability of the good subspace.
    pub success: f64,
}

/// Grover search made exact: `g0` is lowered to `g0'` with an ancilla
/// rotation `R` so that `(2r + 1) arcsin(sqrt g0') = pi/2` for integer `r`.
pub fn derandomized_search(marked: &MarkedSet) -> Result<DerandomizedSearch> {
    let n = marked.n;
    let big_n = 1usize << n;
    let mu = marked.len();
    if mu == 0 || mu >= big_n {
        return Err(Error::Promise(alloc::format!("need 1 <= mu < {big_n}, got {mu}")));
    }
    let g0 = mu as f64 / big_n as f64;
    let r_real = PI / (4.0 * asin(sqrt(g0))) - 0.5;
    let data: Vec<usize> = (0..n).collect();
    if (r_real - round(r_real)).abs() < 1e-9 {
        let state = grover_state(marked, round(r_real) as usize)?;
        let distribution = state.full_distribution();
        let success = marked.marked.iter().map(|&w| distribution.get(w)).sum();
        return Ok(DerandomizedSearch {
            r: round(r_real) as usize,
            g0,
            g0_prime: g0,
            uses_ancilla: false,
            distribution,
            success,
        });
    }
    let r = ceil(r_real) as usize;
    let s = sin(PI / (2.0 * (2 * r + 1) as f64));
    let g0_prime = s * s;
    let beta = asin(sqrt(g0_prime / g0));
    let mut prep = Circuit::new(n + 1);
    for &q in &data {
        prep.h(q);
    }
    prep.ry(n, 2.0 * beta);
    let good = MarkedSet::new(n + 1, marked.marked.iter().map(|&w| (w << 1) | 1))?;
    let state = amplify(&prep, &good, r)?;
    let success = good.marked.iter().map(|&u| state.amplitude(u).norm_sqr()).sum();
    let distribution = state.probabilities(&data)?;
    Ok(DerandomizedSearch { r, g0, g0_prime, uses_ancilla: true, distribution, success })
}

/// One step `U(dt) = e^{-i|psi><psi| dt} e^{-i|x><x| dt}` on `n` data qubits
/// plus an ancilla on qubit `n`.
pub fn hamiltonian_search_step(n: usize, x: usize, dt: f64) -> Circuit {
    let anc = n;
    let mut circ = Circuit::new(n + 1);
    let on_x = value_controls(x, 0, n);
    circ.mcx(&on_x, anc).p(anc, -dt).mcx(&on_x, anc);
    let on_zero: Vec<Control> = (0..n).map(Control::neg).collect();
    for q in 0..n {
        circ.h(q);
    }
    circ.mcx(&on_zero, anc).p(anc, -dt).mcx(&on_zero, anc);
    for q in 0..n {
        circ.h(q);
    }
    circ
}

/// Time step that maximizes the per-step rotation.
pub const SEARCH_DT: f64 = PI;

/// `P(x)` after each of `steps` evolution steps with `dt = pi`, starting
/// from `|psi> |0>`.
pub fn search_by_hamiltonian(n: usize, x: usize, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::Argument("need at least one step".into()));
    }
    if n == 0 || x >> n != 0 {
        return Err(Error::Argument(alloc::format!("target {x} does not fit in {n} qubits")));
    }
    let step = hamiltonian_search_step(n, x, SEARCH_DT);
    let mut state = QuantumState::uniform(n)?.kron(&QuantumState::zero(1)?)?;
    let mut trace = Vec::with_capacity(steps);
    for _ in 0..steps {
        step.apply(&mut state)?;
        trace.push(state.amplitude(x << 1).norm_sqr());
    }
    Ok(trace)
}

/// Step restricted to the `{|x>, |y>}` plane with the ancilla at `|0>`,
/// as a 2x2 matrix; `y` is the uniform superposition of the other states.
pub fn search_step_matrix(n: usize, x: usize, dt: f64) -> Result<Matrix> {
    let big_n = 1usize << n;
    let step = hamiltonian_search_step(n, x, dt);
    let ket_x = QuantumState::basis(n, x)?;
    let mut y = vec![C64::new(0.0, 0.0); big_n];
    for (j, a) in y.iter_mut().enumerate() {
        if j != x {
            *a = C64::new(1.0, 0.0);
        }
    }
    let ket_y = QuantumState::normalized(y)?;
    let zero = QuantumState::zero(1)?;
    let basis = [ket_x.kron(&zero)?, ket_y.kron(&zero)?];
    let mut m = Matrix::zeros(2, 2);
    for (col, input) in basis.iter().enumerate() {
        let out = step.run(input)?;
        for (row, b) in basis.iter().enumerate() {
            m[(row, col)] = b.inner(&out)?;
        }
    }
    Ok(m)
}

/// `cos(theta/2)` of the step's Bloch rotation, with the `e^{-i dt}`
/// global phase removed.
pub fn search_step_cos_half_angle(n: usize, x: usize, dt: f64) -> Result<f64> {
    let m = search_step_matrix(n, x, dt)?;
    let tr = (m[(0, 0)] + m[(1, 1)]) * C64::new(cos(dt), sin(dt));
    Ok(tr.re / 2.0)
}

/// Dense `|x><x| + |psi><psi|` on `n` qubits.
pub fn search_hamiltonian(n: usize, x: usize) -> Result<Matrix> {
    let psi = QuantumState::uniform(n)?;
    let kx = QuantumState::basis(n, x)?;
    Ok(Matrix::outer(kx.amplitudes(), kx.amplitudes()).add(&Matrix::outer(psi.amplitudes(), psi.amplitudes())))
}
