//! Oracle constructors: bit and phase oracles, the comparator, and
//! modular multiplication / exponentiation.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::decompose::gray_code_from_block;
use crate::error::{Error, Result};
use crate::number::{gcd, mod_pow};
use crate::circuit::Gate;
use crate::state::Control;

/// A total function `{0,1}^n_in -> {0,1}^n_out`, stored as `rows[x] = f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub n_in: usize,
    pub n_out: usize,
    pub rows: Vec<usize>,
}

impl TruthTable {
    pub fn new(n_in: usize, n_out: usize, rows: Vec<usize>) -> Result<Self> {
        if n_in == 0 || n_out == 0 || n_in + n_out > crate::state::qubit_limit() {
            return Err(Error::Argument("truth table widths out of range".into()));
        }
        if rows.len() != 1 << n_in {
            return Err(Error::Argument(alloc::format!("expected {} rows, got {}", 1usize << n_in, rows.len())));
        }
        if let Some(&bad) = rows.iter().find(|&&y| y >> n_out != 0) {
            return Err(Error::Argument(alloc::format!("output {bad} wider than {n_out} bits")));
        }
        Ok(TruthTable { n_in, n_out, rows })
    }

    pub fn from_fn(n_in: usize, n_out: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(n_in, n_out, (0..1usize << n_in).map(f).collect())
    }

    /// Builds a table from `(input, output)` pairs that must cover every input once.
    pub fn from_pairs(n_in: usize, n_out: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![None; 1usize << n_in.min(30)];
        if n_in > 30 {
            return Err(Error::Argument("input width too large".into()));
        }
        for &(x, y) in pairs {
            let slot = rows.get_mut(x).ok_or_else(|| Error::Argument(alloc::format!("input {x} out of range")))?;
            if slot.is_some() {
                return Err(Error::Argument(alloc::format!("input {x} listed twice")));
            }
            *slot = Some(y);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| Error::Argument(alloc::format!("input {x} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_in, n_out, rows)
    }

    pub fn eval(&self, x: usize) -> usize {
        self.rows[x]
    }
}

/// A set of marked basis states on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MarkedSet {
    pub n: usize,
    pub marked: BTreeSet<usize>,
}

impl MarkedSet {
    pub fn new(n: usize, marked: impl IntoIterator<Item = usize>) -> Result<Self> {
        let marked: BTreeSet<usize> = marked.into_iter().collect();
        if n == 0 || n > crate::state::qubit_limit() {
            return Err(Error::Argument("marked-set width out of range".into()));
        }
        if let Some(&bad) = marked.iter().find(|&&w| w >> n != 0) {
            return Err(Error::Argument(alloc::format!("marked state {bad} wider than {n} bits")));
        }
        Ok(MarkedSet { n, marked })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.marked.contains(&x)
    }

    pub fn len(&self) -> usize {
        self.marked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marked.is_empty()
    }
}

/// Controls that fire exactly when qubits `first..first+width` hold `value`.
pub fn value_controls(value: usize, first: usize, width: usize) -> Vec<Control> {
    (0..width).map(|k| Control::on(first + k, (value >> (width - 1 - k)) & 1 == 1)).collect()
}

/// `|x>|b> -> |x>|b xor f(x)>` with inputs on `0..n_in` and output bit `j`
/// on qubit `n_in + j`; one multi-controlled X per set output bit.
pub fn bit_oracle(table: &TruthTable) -> Circuit {
    let mut circ = Circuit::new(table.n_in + table.n_out);
    for (x, &y) in table.rows.iter().enumerate() {
        let controls = value_controls(x, 0, table.n_in);
        for j in 0..table.n_out {
            if (y >> (table.n_out - 1 - j)) & 1 == 1 {
                circ.mcx(&controls, table.n_in + j);
            }
        }
    }
    circ
}

/// Diagonal oracle `|x> -> (-1)^[x in marked] |x>` from polarity-controlled Z
/// gates on the last qubit.
pub fn phase_oracle(marked: &MarkedSet) -> Circuit {
    let n = marked.n;
    let target = n - 1;
    let mut circ = Circuit::new(n);
    for &w in &marked.marked {
        let controls = value_controls(w >> 1, 0, n - 1);
        let flip = w & 1 == 0;
        if flip {
            circ.x(target);
        }
        circ.mcz(&controls, target);
        if flip {
            circ.x(target);
        }
    }
    circ
}

/// Phase oracle for a one-bit function given as a truth table.
pub fn phase_oracle_from_table(table: &TruthTable) -> Result<Circuit> {
    if table.n_out != 1 {
        return Err(Error::Argument("phase oracles need a one-bit output".into()));
    }
    let marked = MarkedSet::new(table.n_in, (0..table.rows.len()).filter(|&x| table.rows[x] == 1))?;
    Ok(phase_oracle(&marked))
}

/// `|x>|y>|0> -> |x>|y>|x > y>` with `x` on `0..n`, `y` on `n..2n` and the
/// flag on `2n`. Equal registers leave the flag at 0.
pub fn comparator(n: usize) -> Circuit {
    let mut circ = Circuit::new(2 * n + 1);
    for k in 0..n {
        for prefix in 0..(1usize << k) {
            let mut controls = value_controls(prefix, 0, k);
            controls.extend(value_controls(prefix, n, k));
            controls.push(Control::pos(k));
            controls.push(Control::neg(n + k));
            circ.mcx(&controls, 2 * n);
        }
    }
    circ
}

/// Time-ordered basis transpositions realizing the permutation `perm`.
fn transpositions(perm: &[usize]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; perm.len()];
    let mut swaps = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        for k in (0..cycle.len().saturating_sub(1)).rev() {
            swaps.push((cycle[k], cycle[k + 1]));
        }
    }
    swaps
}

/// Circuit for an arbitrary basis permutation on `width` qubits, built from
/// gray-code transpositions.
pub fn permutation_circuit(perm: &[usize], width: usize) -> Result<Circuit> {
    if perm.len() != 1 << width {
        return Err(Error::Dimension { expected: 1 << width, found: perm.len() });
    }
    let mut check = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || check[p] {
            return Err(Error::Argument("not a permutation".into()));
        }
        check[p] = true;
    }
    let x = Gate::X.matrix();
    let mut circ = Circuit::new(width);
    for (i, j) in transpositions(perm) {
        circ.append(&gray_code_from_block(&x, i, j, width)?);
    }
    Ok(circ)
}

/// `|y> -> |a y mod N>` for `y < N`; values `y >= N` are fixed.
pub fn modmul_circuit(a: u64, n_mod: u64, width: usize) -> Result<Circuit> {
    if n_mod < 2 || width == 0 || width > 16 || n_mod > 1 << width {
        return Err(Error::Argument(alloc::format!("modulus {n_mod} does not fit in {width} qubits")));
    }
    let a = a % n_mod;
    if gcd(a, n_mod) != 1 {
        return Err(Error::NotInvertible { a, n: n_mod });
    }
    if n_mod == (1 << width) - 1 && a.is_power_of_two() {
        return Ok(rotation_network(a.trailing_zeros() as usize, width));
    }
    let perm: Vec<usize> = (0..1usize << width)
        .map(|y| if (y as u64) < n_mod { ((a * y as u64) % n_mod) as usize } else { y })
        .collect();
    permutation_circuit(&perm, width)
}

/// Multiplication by `2^k` modulo `2^w - 1` is a cyclic left rotation by
/// `k` bits; one rotation is a chain of adjacent swaps.
fn rotation_network(k: usize, width: usize) -> Circuit {
    let mut circ = Circuit::new(width);
    for _ in 0..k % width {
        for q in 0..width - 1 {
            circ.swap(q, q + 1);
        }
    }
    circ
}

/// `|x>|y> -> |x>|a^x y mod N>` with `x` on `0..t` (qubit 0 is the MSB)
/// and `y` on `t..t+width`.
pub fn controlled_modexp(a: u64, n_mod: u64, t: usize, width: usize) -> Result<Circuit> {
    if t == 0 {
        return Err(Error::Argument("need at least one clock qubit".into()));
    }
    let mut circ = Circuit::new(t + width);
    let map: Vec<usize> = (t..t + width).collect();
    for k in 0..t {
        let power = mod_pow(a % n_mod, 1u64 << (t - 1 - k), n_mod);
        let stage = modmul_circuit(power, n_mod, width)?;
        circ.append(&stage.embed(t + width, &map).controlled(Control::pos(k)));
    }
    Ok(circ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::state::QuantumState;
    use crate::Matrix;
    use proptest::prelude::*;

    /// Index the basis state maps to, asserting the circuit acts as a permutation.
    fn image(circ: &Circuit, idx: usize) -> usize {
        let s = circ.run_basis(idx).unwrap();
        let (best, amp) = s
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        assert!((amp.norm() - 1.0).abs() < 1e-12, "not a basis permutation");
        best
    }

    fn period3() -> TruthTable {
        TruthTable::new(3, 1, vec![0, 1, 1, 0, 1, 1, 0, 1]).unwrap()
    }

    #[test]
    fn bit_oracle_period_three() {
        let circ = bit_oracle(&period3());
        // Ancilla preset to |1>, flipped on the zeros {000, 011, 110}.
        let mut figure = Circuit::new(4);
        figure.x(3);
        for zero in [0b000, 0b011, 0b110] {
            figure.mcx(&value_controls(zero, 0, 3), 3);
        }
        assert!(circ.unitary_matrix().unwrap().max_diff(&figure.unitary_matrix().unwrap()) < 1e-12);
        for x in 0..8 {
            assert_eq!(image(&circ, x << 1), (x << 1) | period3().eval(x));
        }
    }

    #[test]
    fn bit_oracle_constant_zero_is_identity() {
        let t = TruthTable::from_fn(3, 2, |_| 0).unwrap();
        assert!(bit_oracle(&t).is_empty());
    }

    #[test]
    fn bit_oracle_is_self_inverse() {
        let t = TruthTable::from_fn(3, 2, |x| (x * 5 + 1) % 4).unwrap();
        let c = bit_oracle(&t);
        let mut twice = c.clone();
        twice.append(&c);
        assert!(twice.unitary_matrix().unwrap().max_diff(&Matrix::identity(32)) < 1e-12);
    }

    #[test]
    fn truth_table_validation() {
        assert!(TruthTable::new(2, 1, vec![0, 1, 0]).is_err());
        assert!(TruthTable::new(2, 1, vec![0, 1, 2, 0]).is_err());
        assert!(TruthTable::from_pairs(1, 1, &[(0, 1)]).is_err());
        assert!(TruthTable::from_pairs(1, 1, &[(0, 1), (0, 0)]).is_err());
        assert_eq!(TruthTable::from_pairs(1, 1, &[(1, 0), (0, 1)]).unwrap().rows, vec![1, 0]);
    }

    #[test]
    fn phase_oracle_single_mark() {
        let m = phase_oracle(&MarkedSet::new(3, [0b101]).unwrap()).unitary_matrix().unwrap();
        for i in 0..8 {
            let expect = if i == 0b101 { -1.0 } else { 1.0 };
            assert!((m[(i, i)].re - expect).abs() < 1e-12);
        }
        assert!(m.max_diff(&Matrix::diagonal(&(0..8).map(|i| m[(i, i)]).collect::<Vec<_>>())) < 1e-15);
    }

    #[test]
    fn phase_oracle_two_marks_and_empty() {
        let c = phase_oracle(&MarkedSet::new(3, [0b011, 0b001]).unwrap());
        let m = c.unitary_matrix().unwrap();
        for i in 0..8 {
            let expect = if i == 0b011 || i == 0b001 { -1.0 } else { 1.0 };
            assert!((m[(i, i)].re - expect).abs() < 1e-12);
        }
        let e = phase_oracle(&MarkedSet::new(3, []).unwrap());
        assert!(e.unitary_matrix().unwrap().max_diff(&Matrix::identity(8)) < 1e-15);
    }

    #[test]
    fn bit_oracle_with_minus_ancilla_is_phase_oracle() {
        let t = TruthTable::from_fn(2, 1, |x| (x == 2) as usize).unwrap();
        let mut c = Circuit::new(3);
        c.x(2).h(2);
        c.append(&bit_oracle(&t));
        c.h(2).x(2);
        let direct = phase_oracle_from_table(&t).unwrap().embed(3, &[0, 1]);
        // Equivalent whenever the ancilla starts in |0>.
        for x in 0..4usize {
            let a = c.run_basis(x << 1).unwrap();
            let b = direct.run_basis(x << 1).unwrap();
            assert!(a.max_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn phase_kickback() {
        for ctl in 0..2usize {
            let mut c = Circuit::new(2);
            c.x(1).h(1).cx(0, 1);
            let s = c.run_basis(ctl << 1).unwrap();
            let mut minus = QuantumState::basis(1, 1).unwrap();
            minus.apply_gate(&Gate::H.matrix(), &[0], &[]).unwrap();
            let mut expect = QuantumState::basis(1, ctl).unwrap().kron(&minus).unwrap();
            if ctl == 1 {
                expect.apply_global_phase(crate::math::PI);
            }
            assert!(s.max_diff(&expect) < 1e-12);
        }
    }

    #[test]
    fn comparator_cases() {
        let c = comparator(2);
        assert_eq!(c.len(), 3);
        let run = |x: usize, y: usize| image(&c, (x << 3) | (y << 1)) & 1;
        assert_eq!(run(3, 1), 1);
        assert_eq!(run(2, 2), 0);
        assert_eq!(run(0, 2), 0);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(run(x, y), (x > y) as usize);
            }
        }
    }

    #[test]
    fn modmul_examples() {
        let c = modmul_circuit(2, 15, 4).unwrap();
        assert_eq!(image(&c, 0b0001), 0b0010);
        assert_eq!(image(&c, 0b1000), 0b0001);
        assert_eq!(c.count("swap"), 3);
        assert!(modmul_circuit(1, 15, 4).unwrap().is_empty());
        let c7 = modmul_circuit(7, 15, 4).unwrap();
        assert_eq!(image(&c7, 1), 7);
        assert_eq!(modmul_circuit(3, 15, 4), Err(Error::NotInvertible { a: 3, n: 15 }));
    }

    #[test]
    fn modmul_is_permutation_on_residues() {
        for (a, n, w) in [(2u64, 15u64, 4usize), (7, 15, 4), (4, 21, 5), (5, 21, 5), (3, 10, 4)] {
            let c = modmul_circuit(a, n, w).unwrap();
            for y in 0..(1usize << w) {
                let expect = if (y as u64) < n { ((a * y as u64) % n) as usize } else { y };
                assert_eq!(image(&c, y), expect, "a={a} N={n} y={y}");
            }
        }
    }

    #[test]
    fn modexp_examples() {
        let c = controlled_modexp(2, 15, 3, 4).unwrap();
        assert_eq!(image(&c, (3 << 4) | 1) & 0xf, 8);
        assert_eq!(image(&c, 5) & 0xf, 5);
        let c = controlled_modexp(7, 15, 2, 4).unwrap();
        assert_eq!(image(&c, (2 << 4) | 1) & 0xf, 4);
    }

    proptest! {
        #[test]
        fn modmul_then_inverse_is_identity(n in 3u64..32, a in 1u64..32, y in 0usize..32) {
            let a = a % n;
            prop_assume!(gcd(a, n) == 1);
            let w = crate::math::bit_length(n) as usize;
            prop_assume!(y < n as usize);
            let inv = crate::number::mod_inverse(a, n).unwrap();
            let mut c = modmul_circuit(a, n, w).unwrap();
            c.append(&modmul_circuit(inv, n, w).unwrap());
            prop_assert_eq!(image(&c, y), y);
        }

        #[test]
        fn phase_oracle_matrix_form(mask in 0usize..16) {
            let marked = MarkedSet::new(4, (0..16).filter(|i| mask >> (i % 4) & 1 == 1 && i % 3 == 0)).unwrap();
            let m = phase_oracle(&marked).unitary_matrix().unwrap();
            let mut expect = Matrix::identity(16);
            for &w in &marked.marked {
                expect[(w, w)] = crate::math::c(-1.0, 0.0);
            }
            prop_assert!(m.max_diff(&expect) < 1e-12);
        }

        #[test]
        fn comparator_exhaustive(x in 0usize..8, y in 0usize..8) {
            let c = comparator(3);
            prop_assert_eq!(image(&c, (x << 4) | (y << 1)) & 1, (x > y) as usize);
        }
    }
}
