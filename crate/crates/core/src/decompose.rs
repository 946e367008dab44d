//! Unitary decompositions: Z-Y Euler angles, the AXBXC controlled-U
//! construction, square roots, C²(U), the ancilla-ladder Cⁿ(U), two-level
//! factorization and gray-code synthesis.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Gate, UnitaryMatrix};
use crate::error::{Error, Result};
use crate::math::{atan2, c, cabs, carg, cis, csqrt, hypot, PI};
use crate::matrix::Matrix;
use crate::state::{BasisLabel, Control, TOL};
use crate::C64;

const EPS: f64 = 1e-12;

/// `U = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZyDecomposition {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl ZyDecomposition {
    pub fn to_matrix(&self) -> Matrix {
        Gate::Rz(self.beta)
            .matrix()
            .mul(&Gate::Ry(self.gamma).matrix())
            .mul(&Gate::Rz(self.delta).matrix())
            .scale(cis(self.alpha))
    }
}

fn check_single(u: &Matrix) -> Result<()> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::Dimension { expected: 2, found: u.rows() });
    }
    let err = u.unitarity_error();
    if !(err <= TOL) {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

fn wrap_2pi(x: f64) -> f64 {
    if x <= -2.0 * PI + 1e-15 {
        x + 4.0 * PI
    } else {
        x
    }
}

/// Z-Y decomposition of a single-qubit unitary.
///
/// Angle branches: `gamma` in `[0, pi]`, `beta` and `delta` in
/// `(-2pi, 2pi]`, `alpha` in `(-pi, pi]`. When `gamma` is 0 or `pi` the whole
/// z-rotation goes into `delta` and `beta` is 0.
pub fn zy_decompose(u: &Matrix) -> Result<ZyDecomposition> {
    check_single(u)?;
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let alpha = carg(det) / 2.0;
    let phase = cis(-alpha);
    let a = u[(0, 0)] * phase;
    let b = u[(1, 0)] * phase;
    let gamma = 2.0 * atan2(cabs(b), cabs(a));
    let (beta, delta) = if cabs(b) < EPS {
        (0.0, wrap_2pi(-2.0 * carg(a)))
    } else if cabs(a) < EPS {
        (0.0, wrap_2pi(-2.0 * carg(b)))
    } else {
        (wrap_2pi(carg(b) - carg(a)), wrap_2pi(-carg(a) - carg(b)))
    };
    Ok(ZyDecomposition { alpha, beta, gamma, delta })
}

/// Output of [`axbxc_compile`]: the angles, the three factors and the
/// two-qubit circuit (qubit 0 control, qubit 1 target).
#[derive(Clone, Debug)]
pub struct Axbxc {
    pub zy: ZyDecomposition,
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub circuit: Circuit,
}

/// Controlled-U from single-qubit rotations, two CX gates and a phase on the
/// control, using `U = e^{i alpha} A X B X C` with `ABC = I`.
pub fn axbxc_compile(u: &Matrix) -> Result<Axbxc> {
    let zy = zy_decompose(u)?;
    let ZyDecomposition { alpha, beta, gamma, delta } = zy;
    let a = Gate::Rz(beta).matrix().mul(&Gate::Ry(gamma / 2.0).matrix());
    let b = Gate::Ry(-gamma / 2.0).matrix().mul(&Gate::Rz(-(delta + beta) / 2.0).matrix());
    let cm = Gate::Rz((delta - beta) / 2.0).matrix();
    let mut circ = Circuit::new(2);
    circ.rz(1, (delta - beta) / 2.0)
        .cx(0, 1)
        .rz(1, -(delta + beta) / 2.0)
        .ry(1, -gamma / 2.0)
        .cx(0, 1)
        .ry(1, gamma / 2.0)
        .rz(1, beta)
        .p(0, alpha);
    Ok(Axbxc { zy, a, b, c: cm, circuit: circ })
}

/// Principal square root of a single-qubit unitary.
pub fn sqrt_gate(u: &Matrix) -> Result<Matrix> {
    check_single(u)?;
    let (p, q, r, s) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let tr = p + s;
    let det = p * s - q * r;
    let disc = csqrt(tr * tr - det * 4.0);
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    if cabs(l1 - l2) < 1e-9 {
        // A unitary with a repeated eigenvalue is a multiple of I.
        return Ok(Matrix::identity(2).scale(csqrt(l1)));
    }
    let cand1 = [q, l1 - p];
    let cand2 = [l1 - s, r];
    let n1 = hypot(cabs(cand1[0]), cabs(cand1[1]));
    let n2 = hypot(cabs(cand2[0]), cabs(cand2[1]));
    let v = if n1 >= n2 { [cand1[0] / n1, cand1[1] / n1] } else { [cand2[0] / n2, cand2[1] / n2] };
    let w = [-v[1].conj(), v[0].conj()];
    let p1 = Matrix::outer(&v, &v).scale(csqrt(l1));
    let p2 = Matrix::outer(&w, &w).scale(csqrt(l2));
    Ok(p1.add(&p2))
}

fn custom(m: Matrix) -> Gate {
    Gate::Custom(UnitaryMatrix::new(m).expect("decomposition produced a non-unitary factor"))
}

/// Doubly-controlled U from controlled square roots: controls 0 and 1,
/// target 2.
pub fn ccu_compile(u: &Matrix) -> Result<Circuit> {
    let v = sqrt_gate(u)?;
    let vd = v.dagger();
    let mut circ = Circuit::new(3);
    circ.push(custom(v.clone()), &[2], &[Control::pos(1)])
        .cx(0, 1)
        .push(custom(vd), &[2], &[Control::pos(1)])
        .cx(0, 1)
        .push(custom(v), &[2], &[Control::pos(0)]);
    Ok(circ)
}

/// Cⁿ(U) with an ancilla ladder of Toffoli gates. Layout: controls
/// `0..n`, target `n`, ancillas `n+1..2n`.
pub fn multi_controlled_compile(u: &Matrix, n_controls: usize) -> Result<Circuit> {
    check_single(u)?;
    if n_controls == 0 {
        return Err(Error::Argument("need at least one control".into()));
    }
    let n = n_controls;
    let target = n;
    let anc = |k: usize| n + 1 + k;
    let total = 2 * n;
    let mut circ = Circuit::new(total);
    let gate = custom(u.clone());
    if n == 1 {
        circ.push(gate, &[target], &[Control::pos(0)]);
        return Ok(circ);
    }
    let mut ladder = Circuit::new(total);
    ladder.ccx(0, 1, anc(0));
    for k in 2..n {
        ladder.ccx(k, anc(k - 2), anc(k - 1));
    }
    circ.append(&ladder);
    circ.push(gate, &[target], &[Control::pos(anc(n - 2))]);
    circ.append(&ladder.inverse());
    Ok(circ)
}

/// A unitary acting non-trivially only on basis indices `i` and `j`, with
/// `block` written in `(i, j)` order.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoLevel {
    pub dim: usize,
    pub i: usize,
    pub j: usize,
    pub block: [[C64; 2]; 2],
}

impl TwoLevel {
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::identity(self.dim);
        m[(self.i, self.i)] = self.block[0][0];
        m[(self.i, self.j)] = self.block[0][1];
        m[(self.j, self.i)] = self.block[1][0];
        m[(self.j, self.j)] = self.block[1][1];
        m
    }

    pub fn dagger(&self) -> TwoLevel {
        let b = self.block;
        TwoLevel { dim: self.dim, i: self.i, j: self.j, block: [[b[0][0].conj(), b[1][0].conj()], [b[0][1].conj(), b[1][1].conj()]] }
    }

    /// Basis indices on which the factor differs from the identity.
    pub fn support(&self) -> Vec<usize> {
        let one = c(1.0, 0.0);
        let mut s = Vec::new();
        let b = self.block;
        if cabs(b[0][0] - one) > EPS || cabs(b[0][1]) > EPS || cabs(b[1][0]) > EPS {
            s.push(self.i);
        }
        if cabs(b[1][1] - one) > EPS || cabs(b[0][1]) > EPS || cabs(b[1][0]) > EPS {
            s.push(self.j);
        }
        s
    }

    fn is_identity(&self) -> bool {
        self.support().is_empty()
    }

    /// Left-multiplies `m` by this factor in place.
    fn apply_left(&self, m: &mut Matrix) {
        for col in 0..m.cols() {
            let x = m[(self.i, col)];
            let y = m[(self.j, col)];
            m[(self.i, col)] = self.block[0][0] * x + self.block[0][1] * y;
            m[(self.j, col)] = self.block[1][0] * x + self.block[1][1] * y;
        }
    }
}

/// Factors `u` as `V_1 V_2 ... V_k` of two-level unitaries with
/// `k <= d(d-1)/2`. Identity factors are omitted.
pub fn two_level_decompose(u: &Matrix) -> Result<Vec<TwoLevel>> {
    let d = u.rows();
    if !u.is_square() || !(2..=16).contains(&d) {
        return Err(Error::Argument("two-level decomposition needs a square matrix of size 2..=16".into()));
    }
    let err = u.unitarity_error();
    if !(err <= TOL) {
        return Err(Error::NotUnitary(err));
    }
    let bound = d * (d - 1) / 2;
    let mut work = u.clone();
    // Reducers U_k with U_k ... U_1 u = I; the factors are their adjoints.
    let mut reducers: Vec<TwoLevel> = Vec::new();
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    for col in 0..d.saturating_sub(2) {
        for row in (col + 1)..d {
            let a = work[(col, col)];
            let b = work[(row, col)];
            let last = row == d - 1;
            let r = if cabs(b) > EPS {
                let m = hypot(cabs(a), cabs(b));
                TwoLevel { dim: d, i: col, j: row, block: [[a.conj() / m, b.conj() / m], [b / m, -a / m]] }
            } else if last {
                TwoLevel { dim: d, i: col, j: row, block: [[a.conj(), zero], [zero, one]] }
            } else {
                continue;
            };
            r.apply_left(&mut work);
            work[(row, col)] = zero;
            if !r.is_identity() {
                reducers.push(r);
            }
        }
    }
    let (i, j) = (d - 2, d - 1);
    let block = [[work[(i, i)], work[(i, j)]], [work[(j, i)], work[(j, j)]]];
    let tail = TwoLevel { dim: d, i, j, block }.dagger();
    let diagonal = cabs(block[0][1]) < EPS && cabs(block[1][0]) < EPS;
    if diagonal && reducers.len() + 2 <= bound {
        let lo = TwoLevel { dim: d, i, j, block: [[tail.block[0][0], zero], [zero, one]] };
        let hi = TwoLevel { dim: d, i, j, block: [[one, zero], [zero, tail.block[1][1]]] };
        for f in [lo, hi] {
            if !f.is_identity() {
                reducers.push(f);
            }
        }
    } else if !tail.is_identity() {
        reducers.push(tail);
    }
    Ok(reducers.iter().map(TwoLevel::dagger).collect())
}

/// Product `V_1 V_2 ... V_k` of a factor list.
pub fn two_level_product(factors: &[TwoLevel], dim: usize) -> Matrix {
    let mut m = Matrix::identity(dim);
    for f in factors.iter().rev() {
        f.apply_left(&mut m);
    }
    m
}

/// Gray path from `from` to `to`, flipping the lowest-index differing qubit
/// first (qubit 0 is the MSB).
pub fn gray_path(from: usize, to: usize, n: usize) -> Vec<usize> {
    let mut path = vec![from];
    let mut cur = from;
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        if (cur ^ to) & bit != 0 {
            cur ^= bit;
            path.push(cur);
        }
    }
    path
}

fn qubit_of_bit(bit: usize, n: usize) -> usize {
    n - 1 - bit.trailing_zeros() as usize
}

fn controls_matching(value: usize, n: usize, skip: usize) -> Vec<Control> {
    (0..n).filter(|&q| q != skip).map(|q| Control::on(q, (value >> (n - 1 - q)) & 1 == 1)).collect()
}

/// Circuit for a two-level unitary given by its `2 x 2` block in
/// `(idx_a, idx_b)` order on an `n`-qubit register.
pub fn gray_code_from_block(block: &Matrix, idx_a: usize, idx_b: usize, n: usize) -> Result<Circuit> {
    if idx_a == idx_b {
        return Err(Error::Argument("two-level indices must differ".into()));
    }
    if idx_a >> n != 0 || idx_b >> n != 0 {
        return Err(Error::Bounds { index: idx_a.max(idx_b), n_qubits: n });
    }
    check_single(block)?;
    let path = gray_path(idx_b, idx_a, n);
    let m = path.len() - 1;
    let mut steps = Circuit::new(n);
    for w in path.windows(2).take(m - 1) {
        let q = qubit_of_bit(w[0] ^ w[1], n);
        steps.mcx(&controls_matching(w[0], n, q), q);
    }
    let q = qubit_of_bit(path[m - 1] ^ path[m], n);
    let mut u = block.clone();
    if (idx_a >> (n - 1 - q)) & 1 == 1 {
        let x = Gate::X.matrix();
        u = x.mul(&u).mul(&x);
    }
    let mut circ = Circuit::new(n);
    circ.append(&steps);
    circ.push(custom(u), &[q], &controls_matching(idx_a, n, q));
    circ.append(&steps.inverse());
    Ok(circ)
}

/// Gray-code circuit for a full `2^n x 2^n` two-level unitary acting on
/// `idx_a` and `idx_b`.
pub fn gray_code_synthesize(two_level: &Matrix, idx_a: BasisLabel, idx_b: BasisLabel, n: usize) -> Result<Circuit> {
    let dim = 1usize << n;
    if two_level.rows() != dim || two_level.cols() != dim {
        return Err(Error::Dimension { expected: dim, found: two_level.rows() });
    }
    let (a, b) = (idx_a.value, idx_b.value);
    if a == b {
        return Err(Error::Argument("two-level indices must differ".into()));
    }
    for i in 0..dim {
        for j in 0..dim {
            if [a, b].contains(&i) && [a, b].contains(&j) {
                continue;
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            if cabs(two_level[(i, j)] - c(expect, 0.0)) > 1e-9 {
                return Err(Error::Argument("matrix acts outside the two given basis states".into()));
            }
        }
    }
    let block = Matrix::from_rows(&[[two_level[(a, a)], two_level[(a, b)]], [two_level[(b, a)], two_level[(b, b)]]]);
    gray_code_from_block(&block, a, b, n)
}

/// Circuit of multi-controlled gates for an arbitrary `n`-qubit unitary,
/// through two-level factors and gray-code synthesis.
pub fn synthesize_unitary(u: &Matrix) -> Result<Circuit> {
    let dim = u.rows();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Dimension { expected: dim.next_power_of_two().max(2), found: dim });
    }
    let n = dim.trailing_zeros() as usize;
    let factors = two_level_decompose(u)?;
    let mut circ = Circuit::new(n);
    // u = V_1 ... V_k, so V_k acts first.
    for f in factors.iter().rev() {
        let block = Matrix::from_rows(&f.block);
        circ.append(&gray_code_from_block(&block, f.i, f.j, n)?);
    }
    Ok(circ)
}
