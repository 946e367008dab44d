//! Dense state vectors and the gate-application kernel.
//!
//! Qubit 0 is the most significant bit of the basis index, so the basis
//! state `|q0 q1 ... q(n-1)>` has index `sum q_k 2^(n-1-k)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::math::{cabs, sqrt};
use crate::matrix::Matrix;
use crate::rng;
use crate::C64;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

static QUBIT_LIMIT: AtomicUsize = AtomicUsize::new(MAX_QUBITS);

/// Current allocation cap; starts at [`MAX_QUBITS`].
pub fn qubit_limit() -> usize {
    QUBIT_LIMIT.load(Ordering::Relaxed)
}

/// Lowers the process-wide cap to `n`. Requests above the current cap are
/// ignored. Returns the cap now in force.
pub fn lower_qubit_limit(n: usize) -> usize {
    QUBIT_LIMIT.fetch_min(n, Ordering::Relaxed);
    qubit_limit()
}

/// Tolerance for unitarity and normalization checks.
pub const TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A control qubit with its polarity; negative controls fire on `|0>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub positive: bool,
}

impl Control {
    pub const fn pos(qubit: usize) -> Self {
        Control { qubit, positive: true }
    }

    pub const fn neg(qubit: usize) -> Self {
        Control { qubit, positive: false }
    }

    /// Control that fires when `qubit` holds `bit`.
    pub const fn on(qubit: usize, bit: bool) -> Self {
        Control { qubit, positive: bit }
    }
}

/// A computational basis label of fixed width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub value: usize,
    pub width: usize,
}

impl BasisLabel {
    pub fn new(value: usize, width: usize) -> Result<Self> {
        if width > 63 || (width < 63 && value >> width != 0) {
            return Err(Error::Argument(alloc::format!("value {value} does not fit in {width} bits")));
        }
        Ok(BasisLabel { value, width })
    }

    /// Parses a string of `0`/`1` characters, qubit 0 first.
    pub fn parse(bits: &str) -> Result<Self> {
        let bits = bits.trim();
        if bits.is_empty() || bits.len() > 63 {
            return Err(Error::Argument(alloc::format!("bad bitstring {bits:?}")));
        }
        let mut value = 0usize;
        for ch in bits.chars() {
            value = (value << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Argument(alloc::format!("bad bitstring {bits:?}"))),
                };
        }
        Ok(BasisLabel { value, width: bits.len() })
    }

    /// Bit held by qubit `k`.
    pub fn bit(&self, k: usize) -> bool {
        (self.value >> (self.width - 1 - k)) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.width).map(|k| self.bit(k)).collect()
    }

    pub fn to_bitstring(&self) -> String {
        bitstring(self.value, self.width)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Formats `value` as a `width`-character bitstring, most significant first.
pub fn bitstring(value: usize, width: usize) -> String {
    (0..width).map(|k| if (value >> (width - 1 - k)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Whether a distribution holds exact probabilities or sampled counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistributionKind {
    Exact,
    Sampled { shots: u64 },
}

/// Outcome distribution over a register of `width` qubits.
///
/// Exact distributions map outcomes to probabilities; sampled ones map
/// outcomes to counts (stored as `f64` for a uniform interface).
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub width: usize,
    pub kind: DistributionKind,
    pub entries: BTreeMap<usize, f64>,
}

impl Distribution {
    pub fn exact(width: usize, probs: &[f64]) -> Self {
        let entries = probs.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(i, &p)| (i, p)).collect();
        Distribution { width, kind: DistributionKind::Exact, entries }
    }

    pub fn point(width: usize, value: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(value, 1.0);
        Distribution { width, kind: DistributionKind::Exact, entries }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == DistributionKind::Exact
    }

    /// Probability (exact) or count (sampled) of an outcome.
    pub fn get(&self, value: usize) -> f64 {
        self.entries.get(&value).copied().unwrap_or(0.0)
    }

    /// Relative frequency of an outcome regardless of kind.
    pub fn frequency(&self, value: usize) -> f64 {
        match self.kind {
            DistributionKind::Exact => self.get(value),
            DistributionKind::Sampled { shots } => self.get(value) / shots as f64,
        }
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Most likely outcome; ties go to the smallest value.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (&k, &v) in &self.entries {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((k, v));
            }
        }
        best.map(|(k, _)| k)
    }

    /// Dense probability vector of length `2^width`.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1 << self.width];
        for &k in self.entries.keys() {
            v[k] = self.frequency(k);
        }
        v
    }

    /// Outcomes with frequency above `threshold`, ascending.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        self.entries.keys().copied().filter(|&k| self.frequency(k) > threshold).collect()
    }
}

/// A normalized pure state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n: usize,
    amps: Vec<C64>,
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    let limit = qubit_limit();
    if n > limit {
        return Err(Error::Capacity { requested: n, limit });
    }
    if n == 0 {
        return Err(Error::Argument("a register needs at least one qubit".into()));
    }
    Ok(())
}

impl QuantumState {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_capacity(n)?;
        if index >> n != 0 {
            return Err(Error::Bounds { index, n_qubits: n });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(QuantumState { n, amps })
    }

    pub fn from_label(label: BasisLabel) -> Result<Self> {
        Self::basis(label.width, label.value)
    }

    /// Wraps amplitudes that must already be normalized within [`TOL`].
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("non-finite amplitude".into()));
        }
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(sqrt(norm2)));
        }
        Ok(QuantumState { n, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm = sqrt(amps.iter().map(|z| z.norm_sqr()).sum());
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(QuantumState { n, amps: amps.into_iter().map(|z| z / norm).collect() })
    }

    /// Uniform superposition over all `2^n` basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let a = C64::new(1.0 / sqrt((1usize << n) as f64), 0.0);
        Ok(QuantumState { n, amps: vec![a; 1 << n] })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.amps.iter().map(|z| z.norm_sqr()).sum())
    }

    /// `self (x) other`, with `self` on the leading qubits.
    pub fn kron(&self, other: &QuantumState) -> Result<QuantumState> {
        check_capacity(self.n + other.n)?;
        Ok(QuantumState { n: self.n + other.n, amps: crate::matrix::vector::kron(&self.amps, &other.amps) })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.dim(), found: other.dim() });
        }
        Ok(crate::matrix::vector::inner(&self.amps, &other.amps))
    }

    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// True when `|<a|b>| >= 1 - tol`.
    pub fn equal_up_to_global_phase(&self, other: &QuantumState, tol: f64) -> bool {
        match self.inner(other) {
            Ok(z) => cabs(z) >= 1.0 - tol,
            Err(_) => false,
        }
    }

    /// Elementwise max-norm distance.
    pub fn max_diff(&self, other: &QuantumState) -> f64 {
        crate::matrix::vector::max_diff(&self.amps, &other.amps)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::Bounds { index: q, n_qubits: self.n });
        }
        Ok(())
    }

    /// Validates a gate application: indices in range, distinct, disjoint,
    /// and a unitary of matching size.
    pub fn check_gate(&self, u: &Matrix, targets: &[usize], controls: &[Control]) -> Result<()> {
        validate_wires(self.n, targets, controls)?;
        if !u.is_square() || u.rows() != 1 << targets.len() {
            return Err(Error::Dimension { expected: 1 << targets.len(), found: u.rows() });
        }
        let err = u.unitarity_error();
        if !(err <= TOL) {
            return Err(Error::NotUnitary(err));
        }
        Ok(())
    }

    /// Applies `u` to `targets` (first target is the matrix MSB), conditioned
    /// on every control matching its polarity.
    pub fn apply_gate(&mut self, u: &Matrix, targets: &[usize], controls: &[Control]) -> Result<()> {
        self.check_gate(u, targets, controls)?;
        self.apply_unchecked(u, targets, controls);
        Ok(())
    }

    /// Gate application without validation; indices must already be valid.
    pub fn apply_unchecked(&mut self, u: &Matrix, targets: &[usize], controls: &[Control]) {
        let n = self.n;
        let (cmask, cval) = control_masks(n, controls);
        if targets.len() == 1 {
            let bit = 1usize << (n - 1 - targets[0]);
            let m = u.data();
            let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
            let low = bit - 1;
            for base in 0..(self.amps.len() >> 1) {
                let i0 = ((base & !low) << 1) | (base & low);
                if i0 & cmask != cval {
                    continue;
                }
                let i1 = i0 | bit;
                let a = self.amps[i0];
                let b = self.amps[i1];
                self.amps[i0] = m00 * a + m01 * b;
                self.amps[i1] = m10 * a + m11 * b;
            }
            return;
        }
        let k = targets.len();
        let span = 1usize << k;
        let offsets: Vec<usize> = (0..span)
            .map(|s| {
                let mut off = 0;
                for (pos, &q) in targets.iter().enumerate() {
                    if (s >> (k - 1 - pos)) & 1 == 1 {
                        off |= 1 << (n - 1 - q);
                    }
                }
                off
            })
            .collect();
        let mut positions: Vec<usize> = targets.iter().map(|&q| n - 1 - q).collect();
        positions.sort_unstable();
        let mut gathered = vec![ZERO; span];
        let m = u.data();
        for base in 0..(self.amps.len() >> k) {
            let mut i0 = base;
            for &p in &positions {
                i0 = ((i0 >> p) << (p + 1)) | (i0 & ((1 << p) - 1));
            }
            if i0 & cmask != cval {
                continue;
            }
            for s in 0..span {
                gathered[s] = self.amps[i0 | offsets[s]];
            }
            for r in 0..span {
                let row = &m[r * span..(r + 1) * span];
                let mut acc = ZERO;
                for (x, y) in row.iter().zip(&gathered) {
                    acc += x * y;
                }
                self.amps[i0 | offsets[r]] = acc;
            }
        }
    }

    /// Multiplies by a global phase `e^{i phi}`.
    pub fn apply_global_phase(&mut self, phi: f64) {
        let z = crate::math::cis(phi);
        for a in &mut self.amps {
            *a *= z;
        }
    }

    /// Applies a full `2^n x 2^n` matrix (verification and small registers).
    pub fn apply_full(&mut self, u: &Matrix) -> Result<()> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: u.rows() });
        }
        self.amps = u.mul_vec(&self.amps);
        Ok(())
    }

    /// Applies a basis permutation `|i> -> |perm(i)>`; `perm` must be a bijection.
    pub fn apply_permutation(&mut self, perm: impl Fn(usize) -> usize) {
        let mut out = vec![ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if a != ZERO {
                out[perm(i)] = a;
            }
        }
        self.amps = out;
    }

    /// Probabilities of every basis state.
    pub fn probability_vector(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Marginal distribution over `subset`; `subset[0]` is the outcome MSB.
    pub fn probabilities(&self, subset: &[usize]) -> Result<Distribution> {
        if subset.is_empty() {
            return Err(Error::Argument("empty qubit subset".into()));
        }
        validate_wires(self.n, subset, &[])?;
        let k = subset.len();
        let mut probs = vec![0.0; 1 << k];
        for (i, z) in self.amps.iter().enumerate() {
            let p = z.norm_sqr();
            if p == 0.0 {
                continue;
            }
            probs[extract_bits(i, self.n, subset)] += p;
        }
        Ok(Distribution::exact(k, &probs))
    }

    /// Distribution over all qubits.
    pub fn full_distribution(&self) -> Distribution {
        Distribution::exact(self.n, &self.probability_vector())
    }

    /// Multinomial sample of `shots` measurements of every qubit.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Distribution> {
        if shots == 0 {
            return Err(Error::Argument("shots must be at least 1".into()));
        }
        let cdf = cumulative(&self.probability_vector());
        let mut r = rng::seeded(seed);
        let mut entries = BTreeMap::new();
        for _ in 0..shots {
            *entries.entry(rng::draw_from_cdf(&mut r, &cdf)).or_insert(0.0) += 1.0;
        }
        Ok(Distribution { width: self.n, kind: DistributionKind::Sampled { shots }, entries })
    }

    /// Samples a marginal over `subset` with the same drawing procedure.
    pub fn sample_subset(&self, subset: &[usize], shots: u64, seed: u64) -> Result<Distribution> {
        if shots == 0 {
            return Err(Error::Argument("shots must be at least 1".into()));
        }
        let dist = self.probabilities(subset)?;
        sample_distribution(&dist, shots, seed)
    }

    /// Probability that `qubit` reads `outcome`.
    pub fn probability_of(&self, qubit: usize, outcome: bool) -> Result<f64> {
        self.check_qubit(qubit)?;
        let bit = 1usize << (self.n - 1 - qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == outcome)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }

    /// Post-measurement state and the probability of the outcome.
    pub fn project(&self, qubit: usize, outcome: bool) -> Result<(QuantumState, f64)> {
        let mut s = self.clone();
        let p = s.project_in_place(qubit, outcome)?;
        Ok((s, p))
    }

    pub fn project_in_place(&mut self, qubit: usize, outcome: bool) -> Result<f64> {
        let p = self.probability_of(qubit, outcome)?;
        if p <= 1e-12 {
            return Err(Error::ImpossibleOutcome);
        }
        let bit = 1usize << (self.n - 1 - qubit);
        let scale = 1.0 / sqrt(p);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == outcome {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        Ok(p)
    }

    /// Projects several qubits onto the bits of `value` (`qubits[0]` is the MSB).
    pub fn project_register(&mut self, qubits: &[usize], value: usize) -> Result<f64> {
        validate_wires(self.n, qubits, &[])?;
        let p: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| extract_bits(*i, self.n, qubits) == value)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        if p <= 1e-12 {
            return Err(Error::ImpossibleOutcome);
        }
        let scale = 1.0 / sqrt(p);
        let n = self.n;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if extract_bits(i, n, qubits) == value {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        Ok(p)
    }

    /// Reduced state of the qubits outside `fixed` after projecting `fixed`
    /// onto `value`. Returns the sub-state and the branch probability.
    pub fn postselect(&self, fixed: &[usize], value: usize) -> Result<(QuantumState, f64)> {
        validate_wires(self.n, fixed, &[])?;
        let rest: Vec<usize> = (0..self.n).filter(|q| !fixed.contains(q)).collect();
        if rest.is_empty() {
            return Err(Error::Argument("post-selection leaves no qubits".into()));
        }
        let mut amps = vec![ZERO; 1 << rest.len()];
        for (i, &z) in self.amps.iter().enumerate() {
            if extract_bits(i, self.n, fixed) == value {
                amps[extract_bits(i, self.n, &rest)] = z;
            }
        }
        let p: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if p <= 1e-12 {
            return Err(Error::ImpossibleOutcome);
        }
        Ok((QuantumState::normalized(amps)?, p))
    }

    /// `<psi|M|psi>` for a full-size matrix.
    pub fn expectation(&self, m: &Matrix) -> Result<C64> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: m.rows() });
        }
        Ok(crate::matrix::vector::inner(&self.amps, &m.mul_vec(&self.amps)))
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Dimension { expected: len.next_power_of_two().max(2), found: len });
    }
    let n = len.trailing_zeros() as usize;
    check_capacity(n)?;
    Ok(n)
}

/// Checks indices are in range, targets distinct, and disjoint from controls.
pub fn validate_wires(n: usize, targets: &[usize], controls: &[Control]) -> Result<()> {
    let mut seen = 0u64;
    for &q in targets.iter().chain(controls.iter().map(|c| &c.qubit)) {
        if q >= n {
            return Err(Error::Bounds { index: q, n_qubits: n });
        }
        if seen >> q & 1 == 1 {
            return Err(Error::Argument(alloc::format!("qubit {q} used twice in one gate")));
        }
        seen |= 1 << q;
    }
    Ok(())
}

pub(crate) fn control_masks(n: usize, controls: &[Control]) -> (usize, usize) {
    let mut mask = 0;
    let mut val = 0;
    for c in controls {
        let bit = 1usize << (n - 1 - c.qubit);
        mask |= bit;
        if c.positive {
            val |= bit;
        }
    }
    (mask, val)
}

/// Reads the bits of `index` at `qubits` into an integer, `qubits[0]` first.
pub fn extract_bits(index: usize, n: usize, qubits: &[usize]) -> usize {
    let mut v = 0;
    for &q in qubits {
        v = (v << 1) | ((index >> (n - 1 - q)) & 1);
    }
    v
}

/// Writes `value` into the bits of `index` at `qubits`.
pub fn deposit_bits(index: usize, n: usize, qubits: &[usize], value: usize) -> usize {
    let k = qubits.len();
    let mut out = index;
    for (pos, &q) in qubits.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        if (value >> (k - 1 - pos)) & 1 == 1 {
            out |= bit;
        } else {
            out &= !bit;
        }
    }
    out
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    // Guard against round-off so every draw lands inside the table.
    if let Some(last) = cdf.iter().rposition(|_| true) {
        let total = cdf[last];
        for c in &mut cdf {
            *c /= total;
        }
    }
    cdf
}

/// Draws `shots` samples from an exact distribution.
pub fn sample_distribution(dist: &Distribution, shots: u64, seed: u64) -> Result<Distribution> {
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    let keys: Vec<usize> = dist.entries.keys().copied().collect();
    let probs: Vec<f64> = keys.iter().map(|&k| dist.frequency(k)).collect();
    let cdf = cumulative(&probs);
    let mut r = rng::seeded(seed);
    let mut entries = BTreeMap::new();
    for _ in 0..shots {
        let idx = rng::draw_from_cdf(&mut r, &cdf);
        *entries.entry(keys[idx]).or_insert(0.0) += 1.0;
    }
    Ok(Distribution { width: dist.width, kind: DistributionKind::Sampled { shots }, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, cis, FRAC_1_SQRT_2};
    use proptest::prelude::*;

    fn x() -> Matrix {
        Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
    }

    #[test]
    fn qubit_limit_never_rises() {
        assert_eq!(lower_qubit_limit(MAX_QUBITS + 8), MAX_QUBITS);
        assert_eq!(qubit_limit(), MAX_QUBITS);
    }
    fn h() -> Matrix {
        Matrix::from_real_rows(&[[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
    }
    fn z() -> Matrix {
        Matrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
    }

    fn bell() -> QuantumState {
        let mut s = QuantumState::zero(2).unwrap();
        s.apply_gate(&h(), &[0], &[]).unwrap();
        s.apply_gate(&x(), &[1], &[Control::pos(0)]).unwrap();
        s
    }

    #[test]
    fn x_flips_zero() {
        let mut s = QuantumState::zero(1).unwrap();
        s.apply_gate(&x(), &[0], &[]).unwrap();
        assert_eq!(s.amplitude(1), c(1.0, 0.0));
    }

    #[test]
    fn cx_on_10() {
        let mut s = QuantumState::basis(2, 0b10).unwrap();
        s.apply_gate(&x(), &[1], &[Control::pos(0)]).unwrap();
        assert_eq!(s.amplitude(0b11), c(1.0, 0.0));
    }

    #[test]
    fn negative_control_fires_on_zero() {
        let mut s = QuantumState::basis(2, 0b00).unwrap();
        s.apply_gate(&x(), &[1], &[Control::neg(0)]).unwrap();
        assert_eq!(s.amplitude(0b01), c(1.0, 0.0));
    }

    #[test]
    fn hadamard_superposition() {
        let mut s = QuantumState::zero(1).unwrap();
        s.apply_gate(&h(), &[0], &[]).unwrap();
        assert!((s.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn gate_errors() {
        let mut s = QuantumState::zero(2).unwrap();
        assert!(matches!(s.apply_gate(&x(), &[2], &[]), Err(Error::Bounds { .. })));
        let bad = Matrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(s.apply_gate(&bad, &[0], &[]), Err(Error::NotUnitary(_))));
        assert!(s.apply_gate(&x(), &[0], &[Control::pos(0)]).is_err());
        assert!(matches!(QuantumState::zero(25), Err(Error::Capacity { .. })));
    }

    #[test]
    fn inner_products() {
        let mut plus = QuantumState::zero(1).unwrap();
        plus.apply_gate(&h(), &[0], &[]).unwrap();
        let mut minus = QuantumState::basis(1, 1).unwrap();
        minus.apply_gate(&h(), &[0], &[]).unwrap();
        assert!(plus.inner(&minus).unwrap().norm() < 1e-15);
        let b = bell();
        let zero = QuantumState::zero(2).unwrap();
        assert!((zero.inner(&b).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(zero.inner(&plus).is_err());
    }

    #[test]
    fn bell_probabilities() {
        let d = bell().probabilities(&[0, 1]).unwrap();
        assert!((d.get(0) - 0.5).abs() < 1e-15 && (d.get(3) - 0.5).abs() < 1e-15);
        assert_eq!(d.entries.len(), 2);
        assert!(bell().probabilities(&[]).is_err());
    }

    #[test]
    fn marginal_of_general_qubit() {
        let (a, b) = (0.6, 0.8);
        let s = QuantumState::from_amplitudes(vec![c(a, 0.0), c(0.0, b)]).unwrap();
        let d = s.probabilities(&[0]).unwrap();
        assert!((d.get(0) - a * a).abs() < 1e-15 && (d.get(1) - b * b).abs() < 1e-15);
    }

    #[test]
    fn sampling() {
        let one = QuantumState::basis(1, 1).unwrap();
        let d = one.sample(100, 7).unwrap();
        assert_eq!(d.get(1), 100.0);
        let b = bell();
        let d = b.sample(10_000, 42).unwrap();
        let sigma = (10_000.0f64 * 0.25).sqrt();
        assert!((d.get(0) - 5000.0).abs() < 5.0 * sigma);
        assert_eq!(d.get(0) + d.get(3), 10_000.0);
        assert_eq!(b.sample(10_000, 42).unwrap(), d);
    }

    #[test]
    fn projections() {
        let (s, p) = bell().project(0, false).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!((s.amplitude(0).re - 1.0).abs() < 1e-15);
        let (s, p) = QuantumState::basis(1, 1).unwrap().project(0, true).unwrap();
        assert_eq!((s.amplitude(1), p), (c(1.0, 0.0), 1.0));
        let mut plus = QuantumState::zero(1).unwrap();
        plus.apply_gate(&h(), &[0], &[]).unwrap();
        let (s, p) = plus.project(0, false).unwrap();
        assert!((p - 0.5).abs() < 1e-15 && (s.amplitude(0).re - 1.0).abs() < 1e-15);
        assert_eq!(QuantumState::zero(1).unwrap().project(0, true), Err(Error::ImpossibleOutcome));
    }

    #[test]
    fn expectations() {
        let zero = QuantumState::zero(1).unwrap();
        assert_eq!(zero.expectation(&z()).unwrap(), c(1.0, 0.0));
        let mut plus = zero.clone();
        plus.apply_gate(&h(), &[0], &[]).unwrap();
        assert!((plus.expectation(&x()).unwrap().re - 1.0).abs() < 1e-15);
        assert!((bell().expectation(&z().kron(&z())).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn global_phase_equality() {
        let zero = QuantumState::zero(1).unwrap();
        let izero = QuantumState::from_amplitudes(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert!(zero.equal_up_to_global_phase(&izero, 1e-10));
        assert!(!zero.equal_up_to_global_phase(&QuantumState::basis(1, 1).unwrap(), 1e-10));
        let mut plus = zero.clone();
        plus.apply_gate(&h(), &[0], &[]).unwrap();
        let mut rotated = plus.clone();
        rotated.apply_global_phase(crate::math::PI / 8.0);
        assert!(plus.equal_up_to_global_phase(&rotated, 1e-10));
        assert!((rotated.amplitude(0) - cis(crate::math::PI / 8.0) * FRAC_1_SQRT_2).norm() < 1e-15);
    }

    #[test]
    fn multi_target_matches_embedded_matrix() {
        let u = h().kron(&x());
        let mut s = QuantumState::basis(3, 0b010).unwrap();
        s.apply_gate(&u, &[2, 0], &[]).unwrap();
        let full = u.embed(&[2, 0], 3);
        let mut t = QuantumState::basis(3, 0b010).unwrap();
        t.apply_full(&full).unwrap();
        assert!(s.max_diff(&t) < 1e-15);
    }

    fn arb_state(n: usize) -> impl Strategy<Value = QuantumState> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("zero vector", |v| {
            QuantumState::normalized(v.into_iter().map(|(a, b)| c(a, b)).collect()).ok()
        })
    }

    fn arb_unitary2() -> impl Strategy<Value = Matrix> {
        (0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(a, b, g, d)| {
            let (cg, sg) = ((g / 2.0).cos(), (g / 2.0).sin());
            Matrix::from_rows(&[
                [cis(a - b / 2.0 - d / 2.0) * cg, -cis(a - b / 2.0 + d / 2.0) * sg],
                [cis(a + b / 2.0 - d / 2.0) * sg, cis(a + b / 2.0 + d / 2.0) * cg],
            ])
        })
    }

    proptest! {
        #[test]
        fn gate_then_adjoint_restores(s in arb_state(3), u in arb_unitary2(), t in 0usize..3, cq in 0usize..3, pol: bool) {
            let controls = if cq == t { vec![] } else { vec![Control::on(cq, pol)] };
            let mut w = s.clone();
            w.apply_gate(&u, &[t], &controls).unwrap();
            prop_assert!((w.norm() - 1.0).abs() < 1e-12);
            w.apply_gate(&u.dagger(), &[t], &controls).unwrap();
            prop_assert!(w.max_diff(&s) < 1e-10);
        }

        #[test]
        fn two_target_gate_preserves_norm(s in arb_state(4), u in arb_unitary2(), v in arb_unitary2()) {
            let mut w = s.clone();
            w.apply_gate(&u.kron(&v), &[3, 1], &[Control::neg(0)]).unwrap();
            prop_assert!((w.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn probabilities_sum_to_one(s in arb_state(4), mask in 1usize..16) {
            let subset: Vec<usize> = (0..4).filter(|q| mask >> q & 1 == 1).collect();
            let d = s.probabilities(&subset).unwrap();
            prop_assert!((d.total() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn sampled_counts_sum_to_shots(s in arb_state(3), shots in 1u64..500, seed: u64) {
            let d = s.sample(shots, seed).unwrap();
            prop_assert_eq!(d.total(), shots as f64);
        }
    }
}
