//! Gate catalog, circuit IR and execution.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{c, cis, cos, sin, FRAC_1_SQRT_2, PI};
use crate::matrix::Matrix;
use crate::state::{check_capacity, validate_wires, Control, QuantumState, TOL};
use crate::C64;

/// A matrix that passed the unitarity check.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(Matrix);

impl UnitaryMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() || !m.rows().is_power_of_two() || m.rows() < 2 {
            return Err(Error::Dimension { expected: m.rows().next_power_of_two().max(2), found: m.rows() });
        }
        if !m.is_finite() {
            return Err(Error::Argument("non-finite matrix entry".into()));
        }
        let err = m.unitarity_error();
        if !(err <= TOL) {
            return Err(Error::NotUnitary(err));
        }
        Ok(UnitaryMatrix(m))
    }

    /// Number of qubits the matrix acts on.
    pub fn n_qubits(&self) -> usize {
        self.0.rows().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn dagger(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.dagger())
    }
}

/// Catalog gates; parameterized kinds carry their angle in radians.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    P(f64),
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Swap,
    Custom(UnitaryMatrix),
}

impl Gate {
    /// Builds a catalog gate from its mnemonic and parameter list.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Gate> {
        let need = match name {
            "p" | "rx" | "ry" | "rz" => 1,
            "i" | "x" | "y" | "z" | "h" | "s" | "t" | "swap" => 0,
            _ => return Err(Error::Argument(alloc::format!("unknown gate {name:?}"))),
        };
        if params.len() != need {
            return Err(Error::Argument(alloc::format!(
                "gate {name} takes {need} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(match name {
            "i" => Gate::I,
            "x" => Gate::X,
            "y" => Gate::Y,
            "z" => Gate::Z,
            "h" => Gate::H,
            "s" => Gate::S,
            "t" => Gate::T,
            "swap" => Gate::Swap,
            "p" => Gate::P(params[0]),
            "rx" => Gate::Rx(params[0]),
            "ry" => Gate::Ry(params[0]),
            _ => Gate::Rz(params[0]),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::I => "i",
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::H => "h",
            Gate::S => "s",
            Gate::T => "t",
            Gate::P(_) => "p",
            Gate::Rx(_) => "rx",
            Gate::Ry(_) => "ry",
            Gate::Rz(_) => "rz",
            Gate::Swap => "swap",
            Gate::Custom(_) => "unitary",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::P(a) | Gate::Rx(a) | Gate::Ry(a) | Gate::Rz(a) => vec![a],
            _ => Vec::new(),
        }
    }

    /// Number of target qubits.
    pub fn arity(&self) -> usize {
        match self {
            Gate::Swap => 2,
            Gate::Custom(u) => u.n_qubits(),
            _ => 1,
        }
    }

    pub fn matrix(&self) -> Matrix {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match *self {
            Gate::I => Matrix::identity(2),
            Gate::X => Matrix::from_rows(&[[z, one], [one, z]]),
            Gate::Y => Matrix::from_rows(&[[z, c(0.0, -1.0)], [c(0.0, 1.0), z]]),
            Gate::Z => Matrix::from_rows(&[[one, z], [z, -one]]),
            Gate::H => Matrix::from_real_rows(&[[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]),
            Gate::S => Matrix::from_rows(&[[one, z], [z, c(0.0, 1.0)]]),
            Gate::T => Matrix::from_rows(&[[one, z], [z, cis(PI / 4.0)]]),
            Gate::P(a) => Matrix::from_rows(&[[one, z], [z, cis(a)]]),
            Gate::Rx(t) => {
                let (co, si) = (cos(t / 2.0), sin(t / 2.0));
                Matrix::from_rows(&[[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]])
            }
            Gate::Ry(t) => {
                let (co, si) = (cos(t / 2.0), sin(t / 2.0));
                Matrix::from_real_rows(&[[co, -si], [si, co]])
            }
            Gate::Rz(t) => Matrix::from_rows(&[[cis(-t / 2.0), z], [z, cis(t / 2.0)]]),
            Gate::Swap => Matrix::from_real_rows(&[
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]),
            Gate::Custom(ref u) => u.matrix().clone(),
        }
    }

    /// Hermitian conjugate, kept inside the catalog where possible.
    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::S => Gate::P(-PI / 2.0),
            Gate::T => Gate::P(-PI / 4.0),
            Gate::P(a) => Gate::P(-a),
            Gate::Rx(a) => Gate::Rx(-a),
            Gate::Ry(a) => Gate::Ry(-a),
            Gate::Rz(a) => Gate::Rz(-a),
            Gate::Custom(ref u) => Gate::Custom(u.dagger()),
            ref g => g.clone(),
        }
    }

    /// True for gates whose matrix is diagonal.
    pub fn is_diagonal(&self) -> bool {
        matches!(self, Gate::I | Gate::Z | Gate::S | Gate::T | Gate::P(_) | Gate::Rz(_))
    }
}

/// `gate_matrix(kind, params)` in catalog form.
pub fn gate_matrix(name: &str, params: &[f64]) -> Result<Matrix> {
    Ok(Gate::from_name(name, params)?.matrix())
}

/// One gate application: `gate` on `targets`, conditioned on `controls`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub gate: Gate,
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
}

impl Instruction {
    pub fn new(gate: Gate, targets: Vec<usize>, controls: Vec<Control>) -> Self {
        Instruction { gate, targets, controls }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.targets.len() != self.gate.arity() {
            return Err(Error::Argument(alloc::format!(
                "gate {} acts on {} qubit(s), got {}",
                self.gate.name(),
                self.gate.arity(),
                self.targets.len()
            )));
        }
        if let Gate::Custom(u) = &self.gate {
            if u.n_qubits() > 3 {
                return Err(Error::Argument("custom gates act on at most 3 qubits".into()));
            }
        }
        validate_wires(n, &self.targets, &self.controls)
    }

    pub fn adjoint(&self) -> Instruction {
        Instruction { gate: self.gate.adjoint(), targets: self.targets.clone(), controls: self.controls.clone() }
    }

    /// Largest qubit index touched.
    pub fn max_qubit(&self) -> Option<usize> {
        self.targets.iter().copied().chain(self.controls.iter().map(|c| c.qubit)).max()
    }

    /// Applies the instruction; indices must already be valid.
    pub fn apply(&self, state: &mut QuantumState) {
        state.apply_unchecked(&self.gate.matrix(), &self.targets, &self.controls);
    }
}

/// An ordered gate program on a fixed register.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    pub n: usize,
    pub ops: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, ops: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Appends without validation; `run` reports bad indices.
    pub fn push(&mut self, gate: Gate, targets: &[usize], controls: &[Control]) -> &mut Self {
        self.ops.push(Instruction::new(gate, targets.to_vec(), controls.to_vec()));
        self
    }

    /// Appends after validating arity and indices.
    pub fn try_add(&mut self, inst: Instruction) -> Result<&mut Self> {
        inst.validate(self.n)?;
        self.ops.push(inst);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_capacity(self.n)?;
        self.ops.iter().try_for_each(|op| op.validate(self.n))
    }

    pub fn i(&mut self, q: usize) -> &mut Self {
        self.push(Gate::I, &[q], &[])
    }
    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push(Gate::X, &[q], &[])
    }
    pub fn y(&mut self, q: usize) -> &mut Self {
        self.push(Gate::Y, &[q], &[])
    }
    pub fn z(&mut self, q: usize) -> &mut Self {
        self.push(Gate::Z, &[q], &[])
    }
    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push(Gate::H, &[q], &[])
    }
    pub fn s(&mut self, q: usize) -> &mut Self {
        self.push(Gate::S, &[q], &[])
    }
    pub fn t(&mut self, q: usize) -> &mut Self {
        self.push(Gate::T, &[q], &[])
    }
    pub fn p(&mut self, q: usize, a: f64) -> &mut Self {
        self.push(Gate::P(a), &[q], &[])
    }
    pub fn rx(&mut self, q: usize, a: f64) -> &mut Self {
        self.push(Gate::Rx(a), &[q], &[])
    }
    pub fn ry(&mut self, q: usize, a: f64) -> &mut Self {
        self.push(Gate::Ry(a), &[q], &[])
    }
    pub fn rz(&mut self, q: usize, a: f64) -> &mut Self {
        self.push(Gate::Rz(a), &[q], &[])
    }
    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push(Gate::Swap, &[a, b], &[])
    }
    pub fn cx(&mut self, ctrl: usize, target: usize) -> &mut Self {
        self.push(Gate::X, &[target], &[Control::pos(ctrl)])
    }
    pub fn cz(&mut self, ctrl: usize, target: usize) -> &mut Self {
        self.push(Gate::Z, &[target], &[Control::pos(ctrl)])
    }
    pub fn cp(&mut self, ctrl: usize, target: usize, a: f64) -> &mut Self {
        self.push(Gate::P(a), &[target], &[Control::pos(ctrl)])
    }
    pub fn ccx(&mut self, c0: usize, c1: usize, target: usize) -> &mut Self {
        self.push(Gate::X, &[target], &[Control::pos(c0), Control::pos(c1)])
    }
    pub fn mcx(&mut self, controls: &[Control], target: usize) -> &mut Self {
        self.push(Gate::X, &[target], controls)
    }
    pub fn mcz(&mut self, controls: &[Control], target: usize) -> &mut Self {
        self.push(Gate::Z, &[target], controls)
    }

    /// Appends a custom unitary; `targets[0]` is the matrix MSB.
    pub fn unitary(&mut self, u: UnitaryMatrix, targets: &[usize], controls: &[Control]) -> &mut Self {
        self.push(Gate::Custom(u), targets, controls)
    }

    /// Exact global phase `e^{i phi}` from `P(phi) X P(phi) X` on `qubit`.
    /// Under added controls it becomes a controlled phase.
    pub fn global_phase(&mut self, qubit: usize, phi: f64) -> &mut Self {
        self.p(qubit, phi).x(qubit).p(qubit, phi).x(qubit)
    }

    /// Appends all of `other`'s instructions (registers must match).
    pub fn append(&mut self, other: &Circuit) -> &mut Self {
        assert!(other.n <= self.n, "appended circuit is wider than the target");
        self.ops.extend(other.ops.iter().cloned());
        self
    }

    /// Appends `other` with its qubit `q` mapped to `map[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> &mut Self {
        assert_eq!(map.len(), other.n, "qubit map must cover the sub-circuit");
        for op in &other.ops {
            self.ops.push(Instruction {
                gate: op.gate.clone(),
                targets: op.targets.iter().map(|&q| map[q]).collect(),
                controls: op.controls.iter().map(|c| Control { qubit: map[c.qubit], positive: c.positive }).collect(),
            });
        }
        self
    }

    /// Same program on a wider register, qubit `q` placed at `map[q]`.
    pub fn embed(&self, n_total: usize, map: &[usize]) -> Circuit {
        let mut out = Circuit::new(n_total);
        out.append_mapped(self, map);
        out
    }

    /// Adds `control` to every instruction.
    pub fn controlled(&self, control: Control) -> Circuit {
        self.controlled_by(&[control])
    }

    pub fn controlled_by(&self, controls: &[Control]) -> Circuit {
        let mut out = self.clone();
        for op in &mut out.ops {
            op.controls.extend_from_slice(controls);
        }
        out
    }

    /// Reversed program with every gate conjugated.
    pub fn inverse(&self) -> Circuit {
        Circuit { n: self.n, ops: self.ops.iter().rev().map(Instruction::adjoint).collect() }
    }

    /// Runs the circuit in place on `state`.
    pub fn apply(&self, state: &mut QuantumState) -> Result<()> {
        if state.n_qubits() != self.n {
            return Err(Error::Dimension { expected: 1 << self.n, found: state.dim() });
        }
        self.validate()?;
        for op in &self.ops {
            op.apply(state);
        }
        Ok(())
    }

    pub fn run(&self, initial: &QuantumState) -> Result<QuantumState> {
        let mut s = initial.clone();
        self.apply(&mut s)?;
        Ok(s)
    }

    /// Runs on the basis state `|index>`.
    pub fn run_basis(&self, index: usize) -> Result<QuantumState> {
        let mut s = QuantumState::basis(self.n, index)?;
        self.apply(&mut s)?;
        Ok(s)
    }

    /// Full matrix of the circuit, column `j` being the image of `|j>`.
    pub fn unitary_matrix(&self) -> Result<Matrix> {
        if self.n > 10 {
            return Err(Error::Capacity { requested: self.n, limit: 10 });
        }
        self.validate()?;
        let dim = 1usize << self.n;
        let mut m = Matrix::zeros(dim, dim);
        for j in 0..dim {
            let s = self.run_basis(j)?;
            for (i, &a) in s.amplitudes().iter().enumerate() {
                m[(i, j)] = a;
            }
        }
        Ok(m)
    }

    /// Count of instructions whose gate has the given mnemonic.
    pub fn count(&self, name: &str) -> usize {
        self.ops.iter().filter(|op| op.gate.name() == name).count()
    }

    /// Count of instructions with at least one control.
    pub fn controlled_count(&self) -> usize {
        self.ops.iter().filter(|op| !op.controls.is_empty()).count()
    }

    /// Short human-readable listing, one instruction per line.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            for ctl in &op.controls {
                out.push_str(if ctl.positive { "c" } else { "nc" });
            }
            out.push_str(op.gate.name());
            for ctl in &op.controls {
                out.push_str(&alloc::format!(" {}", ctl.qubit));
            }
            for t in &op.targets {
                out.push_str(&alloc::format!(" {t}"));
            }
            for a in op.gate.params() {
                out.push_str(&alloc::format!(" {a}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Matrix of `u` controlled on `n_controls` leading qubits (all positive).
pub fn controlled_matrix(u: &Matrix, n_controls: usize) -> Matrix {
    let k = u.rows();
    let dim = k << n_controls;
    let mut m = Matrix::identity(dim);
    let off = dim - k;
    for i in 0..k {
        for j in 0..k {
            m[(off + i, off + j)] = u[(i, j)];
        }
    }
    m
}

/// `trace(A^dagger B) / d` has unit modulus iff `A` and `B` agree up to phase.
pub fn phase_between(a: &Matrix, b: &Matrix) -> C64 {
    a.dagger().mul(b).trace() / a.rows() as f64
}
