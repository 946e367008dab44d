//! QUBO and MaxCut encodings, QAOA, adiabatic evolution, HHL, and the
//! variational linear solver.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::fourier::{matrix_powers, qpe_circuit};
use crate::hamsim::exp_pauli_circuit;
use crate::math::{acos, cis, PI};
use crate::matrix::Matrix;
use crate::oracles::value_controls;
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::rng;
use crate::state::{BasisLabel, Control, QuantumState};
use crate::C64;

/// Undirected graph with a symmetric weight matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    w: Vec<f64>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph { n, w: vec![0.0; n * n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(i, j, w) in edges {
            g.add_edge(i, j, w)?;
        }
        Ok(g)
    }

    pub fn from_matrix(n: usize, w: Vec<f64>) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::Dimension { expected: n * n, found: w.len() });
        }
        for i in 0..n {
            if w[i * n + i] != 0.0 {
                return Err(Error::Argument(alloc::format!("self-loop at node {i}")));
            }
            for j in 0..i {
                if w[i * n + j] != w[j * n + i] {
                    return Err(Error::Argument(alloc::format!("weight ({i}, {j}) is not symmetric")));
                }
            }
        }
        Ok(WeightedGraph { n, w })
    }

    /// Sets the weight of edge `{i, j}`; setting an edge twice overwrites it.
    pub fn add_edge(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::Bounds { index: i.max(j), n_qubits: self.n });
        }
        if i == j {
            return Err(Error::Argument(alloc::format!("self-loop at node {i}")));
        }
        if !w.is_finite() {
            return Err(Error::Argument("edge weight must be finite".into()));
        }
        self.w[i * self.n + j] = w;
        self.w[j * self.n + i] = w;
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    /// Edges `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let w = self.weight(i, j);
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Total weight of edges crossing the partition; bit `i` of `x` is node `i`.
    pub fn cut_weight(&self, x: &[bool]) -> f64 {
        self.edges().iter().filter(|(i, j, _)| x[*i] != x[*j]).map(|e| e.2).sum()
    }
}

/// `C(x) = x^T Q x + c^T x` over bit vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Qubo {
    pub n: usize,
    pub q: Vec<f64>,
    pub c: Vec<f64>,
}

impl Qubo {
    pub fn new(n: usize, q: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if q.len() != n * n {
            return Err(Error::Dimension { expected: n * n, found: q.len() });
        }
        if c.len() != n {
            return Err(Error::Dimension { expected: n, found: c.len() });
        }
        Ok(Qubo { n, q, c })
    }

    pub fn cost(&self, x: &[bool]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            if !x[i] {
                continue;
            }
            total += self.c[i];
            for j in 0..n {
                if x[j] {
                    total += self.q[i * n + j];
                }
            }
        }
        total
    }

    /// Cost of basis index `index`, qubit 0 holding `x_0`.
    pub fn cost_of_index(&self, index: usize) -> f64 {
        let label = BasisLabel { value: index, width: self.n };
        self.cost(&label.bits())
    }

    /// Exhaustive `(best value, maximizers)`.
    pub fn brute_force_max(&self) -> (f64, Vec<usize>) {
        let mut best = f64::NEG_INFINITY;
        let mut arg = Vec::new();
        for x in 0..1usize << self.n {
            let v = self.cost_of_index(x);
            if v > best + 1e-12 {
                best = v;
                arg.clear();
            }
            if (v - best).abs() <= 1e-12 {
                arg.push(x);
            }
        }
        (best, arg)
    }
}

/// `Q = -W`, `c_i = sum_j W_ij`, so `C(x)` is the cut weight.
pub fn maxcut_qubo(g: &WeightedGraph) -> Qubo {
    let n = g.n;
    let q = g.w.iter().map(|w| -w).collect();
    let c = (0..n).map(|i| (0..n).map(|j| g.weight(i, j)).sum()).collect();
    Qubo { n, q, c }
}

/// Diagonal Hamiltonian with `<x|H|x> + constant = C(x)`, from the
/// substitution `x_i = (1 - Z_i)/2`. Terms appear in `(i, j)` order with
/// `Z_i` at `(i, i)`.
pub fn qubo_cost_hamiltonian(qubo: &Qubo) -> (PauliSum, f64) {
    let n = qubo.n;
    let q = |i: usize, j: usize| qubo.q[i * n + j];
    let mut h = PauliSum::new(n);
    let mut constant = 0.0;
    for i in 0..n {
        constant += (q(i, i) + qubo.c[i]) / 2.0;
        for j in 0..n {
            if j != i {
                constant += q(i, j) / 4.0;
            }
        }
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| q(i, j) + q(j, i)).sum();
        let zi = -off / 4.0 - (q(i, i) + qubo.c[i]) / 2.0;
        push_real(&mut h, zi, PauliString::single(n, i, Pauli::Z));
        for j in i + 1..n {
            let zz = (q(i, j) + q(j, i)) / 4.0;
            push_real(&mut h, zz, PauliString::from_pairs(n, &[(i, Pauli::Z), (j, Pauli::Z)]));
        }
    }
    (h, constant)
}

fn push_real(h: &mut PauliSum, a: f64, p: PauliString) {
    if a.abs() > 1e-12 {
        h.add_term(C64::new(a, 0.0), p).expect("same register");
    }
}

/// `-sum_i X_i`, ground state `|+...+>`.
pub fn transverse_field(n: usize) -> PauliSum {
    let mut h = PauliSum::new(n);
    for q in 0..n {
        push_real(&mut h, -1.0, PauliString::single(n, q, Pauli::X));
    }
    h
}

/// Two angles per QAOA round.
#[derive(Clone, Debug, PartialEq)]
pub struct QaoaParams {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() || betas.len() != gammas.len() {
            return Err(Error::Argument("need p >= 1 betas and as many gammas".into()));
        }
        Ok(QaoaParams { betas, gammas })
    }

    pub fn rounds(&self) -> usize {
        self.betas.len()
    }

    /// Flattened `[betas..., gammas...]`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::Argument("parameter vector must have even length".into()));
        }
        let (b, g) = v.split_at(v.len() / 2);
        Self::new(b.to_vec(), g.to_vec())
    }
}

/// `H^n`, then per round `U_C(gamma) = prod exp(-i gamma a_k P_k)` and
/// `U_M(beta) = prod Rx(2 beta)`.
pub fn qaoa_circuit(h: &PauliSum, params: &QaoaParams) -> Result<Circuit> {
    let n = h.n_qubits();
    let terms = h.real_terms()?;
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.h(q);
    }
    for (beta, gamma) in params.betas.iter().zip(&params.gammas) {
        for (a, p) in &terms {
            c.append(&exp_pauli_circuit(p, a * gamma)?);
        }
        for q in 0..n {
            c.rx(q, 2.0 * beta);
        }
    }
    Ok(c)
}

pub fn qaoa_state(h: &PauliSum, params: &QaoaParams) -> Result<QuantumState> {
    qaoa_circuit(h, params)?.run(&QuantumState::zero(h.n_qubits())?)
}

/// `<beta, gamma| H_c |beta, gamma> + constant`.
pub fn qaoa_expectation(h: &PauliSum, constant: f64, params: &QaoaParams) -> Result<f64> {
    let psi = qaoa_state(h, params)?;
    Ok(h.expectation(&psi)?.re + constant)
}

/// Optimization direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Result of [`optimize_derivative_free`].
#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub params: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

pub const INITIAL_STEP: f64 = PI / 4.0;
pub const MIN_STEP: f64 = 1e-3;

/// Coordinate search: try `x_i +- step` per coordinate, halve the step
/// after a sweep without improvement, stop below [`MIN_STEP`] or when the
/// budget is spent. The seed only fixes the coordinate order.
pub fn optimize_derivative_free(
    objective: &mut dyn FnMut(&[f64]) -> Result<f64>,
    init: &[f64],
    budget: usize,
    seed: u64,
) -> Result<Optimum> {
    if budget == 0 {
        return Err(Error::Argument("budget must be at least one evaluation".into()));
    }
    let mut order: Vec<usize> = (0..init.len()).collect();
    order.shuffle(&mut rng::seeded(seed));
    let mut x = init.to_vec();
    let mut best = objective(&x)?;
    let mut evals = 1;
    let mut step = INITIAL_STEP;
    'outer: while step >= MIN_STEP {
        let mut improved = false;
        for &i in &order {
            for dir in [1.0, -1.0] {
                if evals >= budget {
                    break 'outer;
                }
                let mut trial = x.clone();
                trial[i] += dir * step;
                let v = objective(&trial)?;
                evals += 1;
                if v < best {
                    best = v;
                    x = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(Optimum { params: x, value: best, evaluations: evals })
}

/// Fitted QAOA parameters and their expectation.
#[derive(Clone, Debug, PartialEq)]
pub struct QaoaResult {
    pub params: QaoaParams,
    pub expectation: f64,
    pub evaluations: usize,
}

/// Starting point: `beta = pi/8`, `gamma = pi/8` in every round.
pub fn qaoa_default_init(p: usize) -> QaoaParams {
    QaoaParams { betas: vec![PI / 8.0; p], gammas: vec![PI / 8.0; p] }
}

pub fn qaoa_optimize(
    h: &PauliSum,
    constant: f64,
    init: &QaoaParams,
    sense: Sense,
    budget: usize,
    seed: u64,
) -> Result<QaoaResult> {
    let sign = match sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut f = |v: &[f64]| Ok(sign * qaoa_expectation(h, constant, &QaoaParams::from_slice(v)?)?);
    let opt = optimize_derivative_free(&mut f, &init.to_vec(), budget, seed)?;
    Ok(QaoaResult {
        params: QaoaParams::from_slice(&opt.params)?,
        expectation: sign * opt.value,
        evaluations: opt.evaluations,
    })
}

fn all_commute(h: &PauliSum) -> bool {
    let t = h.terms();
    t.iter().enumerate().all(|(i, (_, p))| t[i + 1..].iter().all(|(_, q)| p.commutes_with(q)))
}

/// `|psi> <- e^{-iHt}|psi>`: exact Pauli exponentials when the terms commute,
/// dense exponential otherwise.
pub fn evolve(state: &mut QuantumState, h: &PauliSum, t: f64) -> Result<()> {
    if all_commute(h) {
        let mut c = Circuit::new(h.n_qubits());
        for (a, p) in h.real_terms()? {
            c.append(&exp_pauli_circuit(&p, a * t)?);
        }
        c.apply(state)?;
        state.apply_global_phase(-h.real_offset() * t);
        Ok(())
    } else {
        state.apply_full(&h.matrix().evolution(t))
    }
}

/// Slices `e^{-i beta_j H_f} e^{-i gamma_j H_i}` with `t_j = j T / p`,
/// `beta_j = (t_j/T) dt`, `gamma_j = (1 - t_j/T) dt`. Without `h_i` the
/// start is `-sum X` in `|+...+>`; otherwise the ground state of `h_i`.
pub fn adiabatic_evolve(h_i: Option<&PauliSum>, h_f: &PauliSum, total_t: f64, p: usize) -> Result<QuantumState> {
    if p == 0 {
        return Err(Error::Argument("need at least one slice".into()));
    }
    let n = h_f.n_qubits();
    let default;
    let (h_i, mut state) = match h_i {
        Some(h) => {
            if h.n_qubits() != n {
                return Err(Error::Dimension { expected: n, found: h.n_qubits() });
            }
            (h, ground_state(h)?)
        }
        None => {
            default = transverse_field(n);
            (&default, QuantumState::uniform(n)?)
        }
    };
    let dt = total_t / p as f64;
    for j in 1..=p {
        let s = j as f64 / p as f64;
        evolve(&mut state, h_i, (1.0 - s) * dt)?;
        evolve(&mut state, h_f, s * dt)?;
    }
    Ok(state)
}

/// Lowest eigenvector of a Hermitian sum (dense).
pub fn ground_state(h: &PauliSum) -> Result<QuantumState> {
    let (vals, vecs) = hermitian_matrix(h)?.hermitian_eigen();
    let k = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).ok_or(Error::NullResult)?;
    QuantumState::normalized(vecs.column(k))
}

fn hermitian_matrix(h: &PauliSum) -> Result<Matrix> {
    let m = h.matrix();
    let err = m.hermiticity_error();
    if err > 1e-10 {
        return Err(Error::NotHermitian(err));
    }
    Ok(m)
}

/// Weight of `state` on the ground space of a diagonal Hamiltonian.
pub fn ground_population(h: &PauliSum, state: &QuantumState) -> Result<(f64, Vec<usize>)> {
    if !h.is_diagonal() {
        return Err(Error::Precondition("ground population needs a diagonal Hamiltonian".into()));
    }
    let d: Vec<f64> = h.diagonal().iter().map(|z| z.re).collect();
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let ground: Vec<usize> = (0..d.len()).filter(|&x| d[x] - min <= 1e-9).collect();
    let p = ground.iter().map(|&x| state.amplitude(x).norm_sqr()).sum();
    Ok((p, ground))
}

/// `A x = b` with Hermitian `A`, spectrum in `(0, 1)`, and unit `b`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    a: Matrix,
    b: QuantumState,
    eigenvalues: Vec<f64>,
}

impl LinearSystem {
    pub fn new(a: Matrix, b: QuantumState) -> Result<Self> {
        if !a.is_square() || a.rows() != b.dim() {
            return Err(Error::Dimension { expected: b.dim(), found: a.rows() });
        }
        let err = a.hermiticity_error();
        if err > 1e-10 {
            return Err(Error::NotHermitian(err));
        }
        let eigenvalues = a.hermitian_eigenvalues();
        if eigenvalues.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
            return Err(Error::Precondition("eigenvalues must lie in (0, 1)".into()));
        }
        Ok(LinearSystem { a, b, eigenvalues })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &QuantumState {
        &self.b
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Normalized `A^{-1} b` by eigendecomposition.
    pub fn classical_solution(&self) -> Result<QuantumState> {
        let inv = self.a.hermitian_function(|l| C64::new(1.0 / l, 0.0));
        QuantumState::normalized(inv.mul_vec(self.b.amplitudes()))
    }
}

/// HHL output: the post-selected memory register.
#[derive(Clone, Debug)]
pub struct HhlResult {
    pub state: QuantumState,
    pub success: f64,
    pub fidelity: f64,
    pub c_const: f64,
}

/// Default `C = 2^{-n_clock}`, the smallest nonzero clock reading.
pub fn default_c(n_clock: usize) -> f64 {
    1.0 / (1u64 << n_clock) as f64
}

/// Layout: ancilla 0, clock `1..=n_clock` (qubit 1 most significant),
/// memory after. QPE of `U = e^{2 pi i A}`, an `Ry` per clock value leaving
/// `C / lambda` on ancilla `|0>` (clock 0 is sent to `|1>`), inverse QPE,
/// and post-selection of ancilla and clock on zero.
pub fn hhl(sys: &LinearSystem, n_clock: usize, c_const: Option<f64>) -> Result<HhlResult> {
    if n_clock == 0 || n_clock > 12 {
        return Err(Error::Range(alloc::format!("clock width {n_clock} outside 1..=12")));
    }
    let c_const = c_const.unwrap_or_else(|| default_c(n_clock));
    let lambda_min = sys.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(c_const > 0.0) || c_const > lambda_min + 1e-12 {
        return Err(Error::Precondition(alloc::format!("C = {c_const} must lie in (0, {lambda_min}]")));
    }
    let u = sys.a.hermitian_function(|l| cis(2.0 * PI * l));
    let m = sys.b.n_qubits();
    let powers = matrix_powers(&u)?;
    let qpe = qpe_circuit(&*powers, m, n_clock)?;
    let total = 1 + n_clock + m;
    let map: Vec<usize> = (1..total).collect();
    let mut c = qpe.embed(total, &map);
    let grid = (1u64 << n_clock) as f64;
    for k in 0..1usize << n_clock {
        let angle = if k == 0 { PI } else { 2.0 * acos((c_const * grid / k as f64).min(1.0)) };
        if angle != 0.0 {
            c.push(Gate::Ry(angle), &[0], &value_controls(k, 1, n_clock));
        }
    }
    c.append(&qpe.inverse().embed(total, &map));
    let b = sys.b.clone();
    let input = QuantumState::zero(1 + n_clock)?.kron(&b)?;
    let out = c.run(&input)?;
    let fixed: Vec<usize> = (0..=n_clock).collect();
    let success = out.probabilities(&fixed)?.get(0);
    if success < 1e-9 {
        return Err(Error::NullResult);
    }
    let (state, _) = out.postselect(&fixed, 0)?;
    let fidelity = state.fidelity(&sys.classical_solution()?)?;
    Ok(HhlResult { state, success, fidelity, c_const })
}

/// Ry on qubit 0 controlled by clock qubit `k` (1-based) with angle
/// `2 pi / 2^k`; clock qubit 1 holds `lambda_0`, the lowest-weight bit.
pub fn lambda_inverse_rotations(n_clock: usize) -> Result<Circuit> {
    if n_clock == 0 {
        return Err(Error::Argument("need at least one clock qubit".into()));
    }
    let mut c = Circuit::new(1 + n_clock);
    for k in 1..=n_clock {
        c.push(Gate::Ry(2.0 * PI / (1u64 << k) as f64), &[0], &[Control::pos(k)]);
    }
    Ok(c)
}

/// Exact `Re <Phi|U|Phi> = p(0) - p(1)` from the ancilla of a Hadamard test.
pub fn hadamard_test(u: &Circuit, prep: &Circuit) -> Result<f64> {
    if u.n != prep.n {
        return Err(Error::Dimension { expected: prep.n, found: u.n });
    }
    let n = prep.n;
    let sys: Vec<usize> = (1..=n).collect();
    let mut c = Circuit::new(n + 1);
    c.append_mapped(prep, &sys);
    c.h(0);
    c.append(&u.embed(n + 1, &sys).controlled(Control::pos(0)));
    c.h(0);
    let d = c.run_basis(0)?.probabilities(&[0])?;
    Ok(d.get(0) - d.get(1))
}

/// `<Phi|Phi> - |<b|Phi>|^2` with `|Phi> = A|candidate>`.
pub fn vqls_cost(a: &Matrix, b: &QuantumState, candidate: &QuantumState) -> Result<f64> {
    if a.rows() != candidate.dim() || a.cols() != candidate.dim() || b.dim() != candidate.dim() {
        return Err(Error::Dimension { expected: candidate.dim(), found: a.rows() });
    }
    let phi = a.mul_vec(candidate.amplitudes());
    let norm2: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    let overlap: C64 = b.amplitudes().iter().zip(&phi).map(|(x, y)| x.conj() * y).sum();
    Ok((norm2 - overlap.norm_sqr()).max(0.0))
}

/// `layers` of `Ry` on every qubit followed by a CX ring; `params` has
/// `layers * n` angles.
pub fn vqls_ansatz(n: usize, layers: usize, params: &[f64]) -> Result<Circuit> {
    if params.len() != n * layers {
        return Err(Error::Dimension { expected: n * layers, found: params.len() });
    }
    let mut c = Circuit::new(n);
    for l in 0..layers {
        for q in 0..n {
            c.ry(q, params[l * n + q]);
        }
        if n > 1 {
            for q in 0..n {
                let next = (q + 1) % n;
                if n == 2 && q == 1 {
                    break;
                }
                c.cx(q, next);
            }
        }
    }
    Ok(c)
}

/// Minimizes [`vqls_cost`] over [`vqls_ansatz`] parameters.
pub fn vqls_solve(a: &Matrix, b: &QuantumState, layers: usize, budget: usize, seed: u64) -> Result<(QuantumState, f64)> {
    let n = b.n_qubits();
    let mut f = |v: &[f64]| {
        let psi = vqls_ansatz(n, layers, v)?.run(&QuantumState::zero(n)?)?;
        vqls_cost(a, b, &psi)
    };
    let init = vec![0.1; n * layers];
    let opt = optimize_derivative_free(&mut f, &init, budget, seed)?;
    let psi = vqls_ansatz(n, layers, &opt.params)?.run(&QuantumState::zero(n)?)?;
    Ok((psi, opt.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{atan2, c, cos, sin, FRAC_1_SQRT_2};

    pub(crate) fn reference_graph() -> WeightedGraph {
        WeightedGraph::from_edges(5, &[(0, 1, 2.0), (0, 3, 1.0), (0, 4, 1.0), (1, 2, 2.0), (2, 3, 2.0), (3, 4, 3.0)])
            .unwrap()
    }

    fn index(bits: &str) -> usize {
        BasisLabel::parse(bits).unwrap().value
    }

    #[test]
    fn reference_graph_weights() {
        let g = reference_graph();
        let w = [
            [0.0, 2.0, 0.0, 1.0, 1.0],
            [2.0, 0.0, 2.0, 0.0, 0.0],
            [0.0, 2.0, 0.0, 2.0, 0.0],
            [1.0, 0.0, 2.0, 0.0, 3.0],
            [1.0, 0.0, 0.0, 3.0, 0.0],
        ];
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(g.weight(i, j), w[i][j]);
            }
        }
        assert_eq!(g.edges().len(), 6);
    }

    #[test]
    fn maxcut_costs() {
        let g = reference_graph();
        let q = maxcut_qubo(&g);
        assert_eq!(q.cost(&[true, false, true, false, true]), 10.0);
        assert_eq!(q.cost(&[false; 5]), 0.0);
        for x in 0..32 {
            let bits = BasisLabel { value: x, width: 5 }.bits();
            assert_eq!(q.cost(&bits), g.cut_weight(&bits));
        }
        let (best, arg) = q.brute_force_max();
        assert_eq!(best, 10.0);
        assert!(arg.contains(&index("10101")));
        let cut_edges = g.edges().iter().filter(|(i, j, _)| (i % 2 == 0) != (j % 2 == 0)).count();
        assert_eq!(cut_edges, 5);
    }

    fn check_diagonal(q: &Qubo) {
        let (h, k) = qubo_cost_hamiltonian(q);
        assert!(h.is_diagonal());
        let d = h.diagonal();
        for x in 0..1usize << q.n {
            assert!((d[x].re + k - q.cost_of_index(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn cost_hamiltonian_diagonal() {
        check_diagonal(&maxcut_qubo(&reference_graph()));
        let (h, k) = qubo_cost_hamiltonian(&Qubo::new(3, vec![0.0; 9], vec![0.0; 3]).unwrap());
        assert!(h.is_empty());
        assert_eq!(k, 0.0);
        let edge = maxcut_qubo(&WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap());
        let (h, k) = qubo_cost_hamiltonian(&edge);
        let d = h.diagonal();
        let costs: Vec<f64> = (0..4).map(|x| d[x].re + k).collect();
        assert!(costs.iter().zip([0.0, 1.0, 1.0, 0.0]).all(|(a, b)| (a - b).abs() < 1e-12));
        let mut r = rng::seeded(5);
        for n in 1..=6 {
            let q: Vec<f64> = (0..n * n).map(|_| rng::uniform(&mut r) * 4.0 - 2.0).collect();
            let cv: Vec<f64> = (0..n).map(|_| rng::uniform(&mut r) * 4.0 - 2.0).collect();
            check_diagonal(&Qubo::new(n, q, cv).unwrap());
        }
    }

    #[test]
    fn qaoa_trivial_angles_give_average() {
        let qubo = maxcut_qubo(&reference_graph());
        let (h, k) = qubo_cost_hamiltonian(&qubo);
        let avg: f64 = (0..32).map(|x| qubo.cost_of_index(x)).sum::<f64>() / 32.0;
        let zero = QaoaParams::new(vec![0.0], vec![0.0]).unwrap();
        assert!((qaoa_expectation(&h, k, &zero).unwrap() - avg).abs() < 1e-10);
        for beta in [0.3, 1.1, 2.5] {
            let p = QaoaParams::new(vec![beta], vec![0.0]).unwrap();
            assert!((qaoa_expectation(&h, k, &p).unwrap() - avg).abs() < 1e-10);
        }
    }

    #[test]
    fn qaoa_periodicity() {
        let (h, k) = qubo_cost_hamiltonian(&maxcut_qubo(&reference_graph()));
        let base = QaoaParams::new(vec![0.4, 0.9], vec![0.7, 1.3]).unwrap();
        let e = qaoa_expectation(&h, k, &base).unwrap();
        for r in 0..2 {
            let mut g = base.clone();
            g.gammas[r] += 2.0 * PI;
            assert!((qaoa_expectation(&h, k, &g).unwrap() - e).abs() < 1e-9);
            let mut b = base.clone();
            b.betas[r] += PI;
            assert!((qaoa_expectation(&h, k, &b).unwrap() - e).abs() < 1e-9);
        }
    }

    #[test]
    fn qaoa_reference_graph_optimized() {
        let (h, k) = qubo_cost_hamiltonian(&maxcut_qubo(&reference_graph()));
        let res = qaoa_optimize(&h, k, &qaoa_default_init(2), Sense::Maximize, 400, 0).unwrap();
        assert!(res.expectation >= 7.0, "{}", res.expectation);
    }

    #[test]
    fn optimizer_examples() {
        let mut quad = |x: &[f64]| Ok((x[0] - 1.0) * (x[0] - 1.0));
        let o = optimize_derivative_free(&mut quad, &[0.0], 200, 1).unwrap();
        assert!((o.params[0] - 1.0).abs() <= 1e-2);
        assert!(o.evaluations <= 200);
        let mut flat = |_: &[f64]| Ok(3.0);
        let o = optimize_derivative_free(&mut flat, &[0.2, -0.4], 50, 2).unwrap();
        assert_eq!(o.params, vec![0.2, -0.4]);
        let z = PauliSum::from_labels(&[(1.0, "Z")]).unwrap();
        let mut vqe = |x: &[f64]| {
            let mut c = Circuit::new(1);
            c.ry(0, x[0]);
            Ok(z.expectation(&c.run_basis(0)?)?.re)
        };
        let o = optimize_derivative_free(&mut vqe, &[0.3], 200, 0).unwrap();
        assert!((o.value + 1.0).abs() < 1e-2);
        assert!((o.params[0] - PI).abs() < 1e-2);
        let a = optimize_derivative_free(&mut quad, &[0.0], 200, 9).unwrap();
        let b = optimize_derivative_free(&mut quad, &[0.0], 200, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn adiabatic_examples() {
        let hi = transverse_field(2);
        let s = adiabatic_evolve(None, &hi, 5.0, 20).unwrap();
        assert!(s.equal_up_to_global_phase(&QuantumState::uniform(2).unwrap(), 1e-10));
        let mz = PauliSum::from_labels(&[(-1.0, "Z")]).unwrap();
        let s = adiabatic_evolve(None, &mz, 20.0, 200).unwrap();
        assert!(s.probabilities(&[0]).unwrap().get(0) >= 0.95);
    }

    #[test]
    fn adiabatic_maxcut() {
        let qubo = maxcut_qubo(&reference_graph());
        let (h, _) = qubo_cost_hamiltonian(&qubo);
        // Ground states of -H_c are the maximum cuts.
        let hf = h.scale(c(-1.0, 0.0));
        let s = adiabatic_evolve(None, &hf, 30.0, 300).unwrap();
        let (p, ground) = ground_population(&hf, &s).unwrap();
        assert!(p >= 0.5, "{p}");
        let arg = s.full_distribution().argmax().unwrap();
        assert!(ground.contains(&arg));
        assert_eq!(qubo.cost_of_index(arg), 10.0);
    }

    #[test]
    fn adiabatic_fidelity_grows_with_time() {
        let hf = PauliSum::from_labels(&[(-1.0, "ZI"), (0.5, "ZZ"), (-0.3, "IZ")]).unwrap();
        let mut last = 0.0;
        for t in [5.0, 15.0, 45.0] {
            let s = adiabatic_evolve(None, &hf, t, (10.0 * t) as usize).unwrap();
            let (p, _) = ground_population(&hf, &s).unwrap();
            assert!(p >= last - 1e-9, "T = {t}: {p} < {last}");
            last = p;
        }
    }

    fn hadamard_matrix() -> Matrix {
        let s = FRAC_1_SQRT_2;
        Matrix::from_real_rows(&[[s, s], [s, -s]])
    }

    #[test]
    fn hhl_dyadic_exact() {
        let h = hadamard_matrix();
        let a = h.mul(&Matrix::diagonal(&[c(0.25, 0.0), c(0.75, 0.0)])).mul(&h);
        let b = QuantumState::zero(1).unwrap();
        let sys = LinearSystem::new(a, b).unwrap();
        let res = hhl(&sys, 2, Some(0.25)).unwrap();
        assert!(res.fidelity >= 1.0 - 1e-6);
        // Eigenbasis coefficients of the solution are (3, 1) / sqrt(10).
        let coeffs = h.mul_vec(res.state.amplitudes());
        let ratio = coeffs[0] / coeffs[1];
        assert!((ratio - c(3.0, 0.0)).norm() < 1e-9);
        let half = Matrix::identity(2).scale(c(0.5, 0.0));
        let b = QuantumState::normalized(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let res = hhl(&LinearSystem::new(half, b.clone()).unwrap(), 3, None).unwrap();
        assert!(res.state.equal_up_to_global_phase(&b, 1e-9));
        assert!((res.success - (0.125f64 / 0.5).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn hhl_non_dyadic() {
        let a = Matrix::diagonal(&[c(0.3, 0.0), c(0.6, 0.0)]);
        let b = QuantumState::uniform(1).unwrap();
        let sys = LinearSystem::new(a, b).unwrap();
        let res = hhl(&sys, 6, None).unwrap();
        assert!(res.fidelity >= 0.9, "{}", res.fidelity);
        assert!(LinearSystem::new(Matrix::identity(2), QuantumState::zero(1).unwrap()).is_err());
        assert!(hhl(&sys, 2, Some(0.5)).is_err());
    }

    #[test]
    fn hhl_two_qubit_commuting() {
        let a = Matrix::diagonal(&[c(0.125, 0.0), c(0.25, 0.0), c(0.5, 0.0), c(0.875, 0.0)]);
        let b = QuantumState::uniform(2).unwrap();
        let res = hhl(&LinearSystem::new(a, b).unwrap(), 3, None).unwrap();
        assert!(res.fidelity >= 1.0 - 1e-6);
    }

    fn ancilla_after(clock: usize, n_clock: usize) -> QuantumState {
        let c = lambda_inverse_rotations(n_clock).unwrap();
        c.run_basis(clock).unwrap()
    }

    #[test]
    fn lambda_rotation_angles() {
        // Clock |10> puts clock qubit 1 (lambda_0) at one: Ry(pi).
        let s = ancilla_after(0b010, 2);
        assert!((s.probabilities(&[0]).unwrap().get(1) - 1.0).abs() < 1e-12);
        let s = ancilla_after(0, 3);
        assert!((s.probabilities(&[0]).unwrap().get(0) - 1.0).abs() < 1e-12);
        // Single-bit settings lambda = 2^k: larger lambda, smaller rotation.
        let n = 4;
        let mut last = f64::INFINITY;
        for k in 0..n {
            let clock = 1usize << (n - 1 - k);
            let p1 = ancilla_after(clock, n).probabilities(&[0]).unwrap().get(1);
            assert!(p1 < last);
            last = p1;
        }
    }

    fn random_1q(r: &mut rng::SimRng) -> Circuit {
        let mut c = Circuit::new(2);
        c.ry(0, rng::uniform(r) * 6.0).rz(1, rng::uniform(r) * 6.0).cx(0, 1).rx(1, rng::uniform(r) * 6.0);
        c.p(0, rng::uniform(r) * 6.0);
        c
    }

    #[test]
    fn hadamard_test_examples() {
        let mut id = Circuit::new(1);
        id.i(0);
        let zero = Circuit::new(1);
        assert!((hadamard_test(&id, &zero).unwrap() - 1.0).abs() < 1e-12);
        let mut z = Circuit::new(1);
        z.z(0);
        let mut plus = Circuit::new(1);
        plus.h(0);
        assert!(hadamard_test(&z, &plus).unwrap().abs() < 1e-12);
        let mut rz = Circuit::new(1);
        rz.rz(0, 2.0 * 0.7);
        assert!((hadamard_test(&rz, &zero).unwrap() - cos(0.7)).abs() < 1e-12);
        let mut r = rng::seeded(17);
        for _ in 0..50 {
            let u = random_1q(&mut r);
            let prep = random_1q(&mut r);
            let phi = prep.run_basis(0).unwrap();
            let direct = phi.inner(&u.run(&phi).unwrap()).unwrap().re;
            assert!((hadamard_test(&u, &prep).unwrap() - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn vqls_examples() {
        let a = Matrix::from_real_rows(&[[0.8, 0.2], [0.2, 0.5]]);
        let b = QuantumState::normalized(vec![c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        let sys = LinearSystem::new(a.clone(), b.clone()).unwrap();
        let x = sys.classical_solution().unwrap();
        assert!(vqls_cost(&a, &b, &x).unwrap() < 1e-10);
        let id = Matrix::identity(2);
        let perp = QuantumState::basis(1, 1).unwrap();
        assert!((vqls_cost(&id, &QuantumState::zero(1).unwrap(), &perp).unwrap() - 1.0).abs() < 1e-12);
        // Sweep Ry(theta)|0> = (cos theta/2, sin theta/2) over [0, 2 pi).
        let amps = x.amplitudes();
        let mut want = 2.0 * atan2(amps[1].re, amps[0].re);
        if want < 0.0 {
            want += 2.0 * PI;
        }
        let steps = 20000;
        let mut best = (f64::INFINITY, 0.0);
        for s in 0..steps {
            let theta = 2.0 * PI * s as f64 / steps as f64;
            let cand = QuantumState::from_amplitudes(vec![c(cos(theta / 2.0), 0.0), c(sin(theta / 2.0), 0.0)]).unwrap();
            let v = vqls_cost(&a, &b, &cand).unwrap();
            if v < best.0 {
                best = (v, theta);
            }
        }
        assert!((best.1 - want).abs() < 1e-3);
    }

    #[test]
    fn vqls_ansatz_solves_two_qubits() {
        let a = Matrix::diagonal(&[c(0.9, 0.0), c(0.4, 0.0), c(0.6, 0.0), c(0.3, 0.0)]);
        let b = QuantumState::uniform(2).unwrap();
        let (_, cost) = vqls_solve(&a, &b, 2, 2000, 0).unwrap();
        assert!(cost < 1e-4, "{cost}");
        assert_eq!(vqls_ansatz(3, 1, &[0.0; 3]).unwrap().count("x"), 3);
    }
}
