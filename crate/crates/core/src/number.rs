//! Number theory and the period-finding family: Euclid, continued
//! fractions, order finding, Shor factoring, discrete logarithms and RSA.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fourier::iqft_circuit;
use crate::math::bit_length;
use crate::oracles::controlled_modexp;
use crate::rng;
use crate::state::{qubit_limit, sample_distribution, Distribution, QuantumState};

/// Registers up to this many qubits run as gate-level circuits; larger ones
/// use the equivalent basis-permutation kernel for the modular oracle.
pub const GATE_LEVEL_LIMIT: usize = 14;

/// Euclid's algorithm; `gcd(0, 0)` is 0.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// `gcd` that rejects the `(0, 0)` input.
pub fn try_gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::Argument("gcd(0, 0) is undefined".into()));
    }
    Ok(gcd(a, b))
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid: `(g, x, y)` with `g = a x + b y` and `g >= 0`.
pub fn bezout(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::Argument("bezout(0, 0) is undefined".into()));
    }
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        Ok((-r0, -s0, -t0))
    } else {
        Ok((r0, s0, t0))
    }
}

/// Inverse of `a` modulo `n`.
pub fn mod_inverse(a: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Argument("modulus must be at least 2".into()));
    }
    let (g, x, _) = bezout((a % n) as i64, n as i64)?;
    if g != 1 {
        return Err(Error::NotCoprime(a, n));
    }
    Ok(x.rem_euclid(n as i64) as u64)
}

/// `a^x mod n` by square-and-multiply.
pub fn mod_pow(a: u64, mut x: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let n128 = n as u128;
    let mut base = (a % n) as u128;
    let mut acc = 1u128;
    while x > 0 {
        if x & 1 == 1 {
            acc = acc * base % n128;
        }
        base = base * base % n128;
        x >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `n` by direct search (classical
/// reference; the quantum routine is [`quantum_period`]).
pub fn classical_order(a: u64, n: u64) -> Result<u64> {
    if gcd(a, n) != 1 {
        return Err(Error::NotCoprime(a, n));
    }
    let mut v = a % n;
    let mut r = 1;
    while v != 1 % n {
        v = v * (a % n) % n;
        r += 1;
    }
    Ok(r)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, k))` when `n = p^k` with `p` prime and `k >= 2`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut m = n;
            let mut k = 0;
            while m.is_multiple_of(d) {
                m /= d;
                k += 1;
            }
            return if m == 1 && k >= 2 { Some((d, k)) } else { None };
        }
        d += 1;
    }
    None
}

/// A continued-fraction convergent `l / r` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub l: u64,
    pub r: u64,
}

/// All convergents of `m / big_m`, in increasing-denominator order; the
/// last one equals `m / big_m` reduced.
pub fn continued_fractions(m: u64, big_m: u64) -> Result<Vec<Convergent>> {
    if big_m == 0 || m >= big_m {
        return Err(Error::Argument(alloc::format!("need 0 <= m < M, got {m}/{big_m}")));
    }
    let mut out = Vec::new();
    let (mut num, mut den) = (m, big_m);
    let (mut p1, mut p2) = (1u64, 0u64);
    let (mut q1, mut q2) = (0u64, 1u64);
    loop {
        let a = num / den;
        let (p, q) = (a * p1 + p2, a * q1 + q2);
        out.push(Convergent { l: p, r: q });
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
        let rem = num - a * den;
        if rem == 0 {
            break;
        }
        (num, den) = (den, rem);
    }
    Ok(out)
}

/// Exact distribution of the clock register of the order-finding circuit
/// for `a` modulo `n` with `t` clock qubits.
pub fn period_distribution(a: u64, n: u64, t: usize) -> Result<Distribution> {
    let width = bit_length(n) as usize;
    let state = period_state(a, n, t, width)?;
    let clocks: Vec<usize> = (0..t).collect();
    state.probabilities(&clocks)
}

fn period_state(a: u64, n: u64, t: usize, width: usize) -> Result<QuantumState> {
    if t == 0 {
        return Err(Error::Argument("need at least one clock qubit".into()));
    }
    let total = t + width;
    if total > qubit_limit() {
        return Err(Error::Capacity { requested: total, limit: qubit_limit() });
    }
    let mut state = QuantumState::basis(total, 1)?;
    let mut prep = Circuit::new(total);
    for q in 0..t {
        prep.h(q);
    }
    prep.apply(&mut state)?;
    if total <= GATE_LEVEL_LIMIT {
        controlled_modexp(a, n, t, width)?.apply(&mut state)?;
    } else {
        if gcd(a, n) != 1 {
            return Err(Error::NotInvertible { a, n });
        }
        // Same permutation as the modular-exponentiation circuit.
        let ymask = (1usize << width) - 1;
        let powers: Vec<u64> = (0..1u64 << t).map(|x| mod_pow(a, x, n)).collect();
        state.apply_permutation(|i| {
            let x = i >> width;
            let y = (i & ymask) as u64;
            if y < n {
                (x << width) | (powers[x] * y % n) as usize
            } else {
                i
            }
        });
    }
    let clocks: Vec<usize> = (0..t).collect();
    iqft_circuit(t)?.embed(total, &clocks).apply(&mut state)?;
    Ok(state)
}

/// Default clock width `ceil(log2 N) + 2`, capped so the register fits.
pub fn default_clock_width(n: u64) -> usize {
    let width = bit_length(n) as usize;
    let ceil_log = bit_length(n.saturating_sub(1)) as usize;
    (ceil_log + 2).min(qubit_limit().saturating_sub(width))
}

/// Outcome of [`quantum_period`].
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodResult {
    pub r: u64,
    pub t: usize,
    /// Clock readings consumed, in order.
    pub samples: Vec<u64>,
}

/// Reduces a multiple of the order to the order itself.
fn reduce_order(a: u64, n: u64, mut r: u64) -> u64 {
    let mut p = 2;
    let mut m = r;
    while p * p <= m {
        while m.is_multiple_of(p) {
            m /= p;
            if mod_pow(a, r / p, n) == 1 {
                r /= p;
            }
        }
        p += 1;
    }
    if m > 1 && mod_pow(a, r / m, n) == 1 {
        r /= m;
    }
    r
}

/// Order of `a` modulo `n` from sampled clock readings, continued fractions
/// and lcm accumulation, verified by modular exponentiation.
pub fn quantum_period(a: u64, n: u64, t: Option<usize>, seed: u64, attempts: usize) -> Result<PeriodResult> {
    if n < 2 {
        return Err(Error::Argument("modulus must be at least 2".into()));
    }
    if gcd(a, n) != 1 {
        return Err(Error::NotCoprime(a, n));
    }
    let t = t.unwrap_or_else(|| default_clock_width(n));
    if a % n == 1 {
        return Ok(PeriodResult { r: 1, t, samples: Vec::new() });
    }
    let dist = period_distribution(a, n, t)?;
    let draws = sample_distribution(&dist, attempts.max(1) as u64, seed)?;
    // Expand the sampled counts back into a reproducible sequence.
    let mut r_stream = rng::seeded(rng::derive_seed(seed, 1));
    let mut sequence: Vec<u64> = Vec::new();
    for (&k, &count) in &draws.entries {
        for _ in 0..count as usize {
            sequence.push(k as u64);
        }
    }
    sequence.shuffle(&mut r_stream);
    let big_m = 1u64 << t;
    let mut acc = 1u64;
    let mut used = Vec::new();
    for m in sequence {
        used.push(m);
        let conv = continued_fractions(m, big_m)?;
        let d = conv.iter().rev().map(|c| c.r).find(|&r| r <= n).unwrap_or(1);
        acc = lcm(acc, d);
        if acc > n * n {
            acc = d;
        }
        if mod_pow(a, acc, n) == 1 {
            return Ok(PeriodResult { r: reduce_order(a, n, acc), t, samples: used });
        }
    }
    Err(Error::Inconclusive(alloc::format!("order of {a} mod {n} not found in {attempts} samples")))
}

/// Outcome of [`shor_factor`].
#[derive(Clone, Debug, PartialEq)]
pub struct ShorResult {
    pub p: u64,
    pub q: u64,
    pub a: u64,
    pub r: u64,
    /// Bases tried, in order.
    pub tried: Vec<u64>,
}

/// Classical pre-checks; returns the reason a quantum run is unnecessary.
pub fn shor_precheck(n: u64) -> Result<()> {
    if !(15..=4095).contains(&n) {
        return Err(Error::Range(alloc::format!("N = {n} outside 15..=4095")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::Precondition(alloc::format!("N = {n} is even: factor 2 x {}", n / 2)));
    }
    if is_prime(n) {
        return Err(Error::Precondition(alloc::format!("N = {n} is prime")));
    }
    if let Some((p, k)) = prime_power(n) {
        return Err(Error::Precondition(alloc::format!("N = {n} is a prime power {p}^{k}")));
    }
    Ok(())
}

/// Shor factoring: seeded choice of coprime bases, quantum order finding,
/// and the `gcd(a^{r/2} +- 1, N)` split. At most `max_bases` bases are tried.
pub fn shor_factor(n: u64, seed: u64, max_bases: usize) -> Result<ShorResult> {
    shor_precheck(n)?;
    let mut candidates: Vec<u64> = (2..=n - 2).collect();
    let mut r = rng::seeded(seed);
    candidates.shuffle(&mut r);
    let mut tried = Vec::new();
    for a in candidates.into_iter().filter(|&a| gcd(a, n) == 1) {
        if tried.len() >= max_bases {
            break;
        }
        tried.push(a);
        let sub_seed = rng::derive_seed(seed, tried.len() as u64);
        let period = match quantum_period(a, n, None, sub_seed, 2 * default_clock_width(n) + 8) {
            Ok(p) => p.r,
            Err(Error::Inconclusive(_)) => continue,
            Err(e) => return Err(e),
        };
        if period % 2 == 1 {
            continue;
        }
        let half = mod_pow(a, period / 2, n);
        if half == n - 1 {
            continue;
        }
        for g in [gcd(half + n - 1, n), gcd(half + 1, n)] {
            if g > 1 && g < n {
                let (p, q) = (g.min(n / g), g.max(n / g));
                return Ok(ShorResult { p, q, a, r: period, tried });
            }
        }
    }
    Err(Error::Inconclusive(alloc::format!("no factor of {n} after {} bases", tried.len())))
}

/// Outcome of [`discrete_log`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteLogResult {
    pub s: u64,
    pub r: u64,
    /// `(m1, m2)` clock readings consumed.
    pub samples: Vec<(u64, u64)>,
}

fn discrete_log_state(a: u64, b: u64, n: u64, t: usize) -> Result<(QuantumState, usize)> {
    let width = bit_length(n) as usize;
    let total = 2 * t + width;
    if total > qubit_limit() {
        return Err(Error::Capacity { requested: total, limit: qubit_limit() });
    }
    let mut state = QuantumState::basis(total, 1)?;
    let mut prep = Circuit::new(total);
    for q in 0..2 * t {
        prep.h(q);
    }
    prep.apply(&mut state)?;
    if total <= GATE_LEVEL_LIMIT {
        let target: Vec<usize> = (2 * t..total).collect();
        let mut map_y: Vec<usize> = (t..2 * t).collect();
        map_y.extend(&target);
        let mut map_x: Vec<usize> = (0..t).collect();
        map_x.extend(&target);
        let mut oracle = Circuit::new(total);
        oracle.append_mapped(&controlled_modexp(a, n, t, width)?, &map_y);
        oracle.append_mapped(&controlled_modexp(b, n, t, width)?, &map_x);
        oracle.apply(&mut state)?;
    } else {
        let zmask = (1usize << width) - 1;
        let pa: Vec<u64> = (0..1u64 << t).map(|y| mod_pow(a, y, n)).collect();
        let pb: Vec<u64> = (0..1u64 << t).map(|x| mod_pow(b, x, n)).collect();
        let tmask = (1usize << t) - 1;
        state.apply_permutation(|i| {
            let z = (i & zmask) as u64;
            if z >= n {
                return i;
            }
            let y = (i >> width) & tmask;
            let x = i >> (width + t);
            let v = pb[x] * (pa[y] * z % n) % n;
            (i & !zmask) | v as usize
        });
    }
    let x: Vec<usize> = (0..t).collect();
    let y: Vec<usize> = (t..2 * t).collect();
    let iqft = iqft_circuit(t)?;
    iqft.embed(total, &x).apply(&mut state)?;
    iqft.embed(total, &y).apply(&mut state)?;
    Ok((state, width))
}

/// Discrete logarithm `s` with `a^s = b (mod N)`.
pub fn discrete_log(a: u64, b: u64, n: u64, t: Option<usize>, seed: u64, attempts: usize) -> Result<DiscreteLogResult> {
    if n < 2 {
        return Err(Error::Argument("modulus must be at least 2".into()));
    }
    if gcd(a, n) != 1 {
        return Err(Error::NotCoprime(a, n));
    }
    let width = bit_length(n) as usize;
    let t = t.unwrap_or_else(|| {
        let ceil_log = bit_length(n.saturating_sub(1)) as usize;
        (ceil_log + 2).min(qubit_limit().saturating_sub(width) / 2)
    });
    let order = quantum_period(a, n, Some(t.min(qubit_limit().saturating_sub(width))), rng::derive_seed(seed, 0), 4 * t + 8)?.r;
    let b = b % n;
    if order == 1 {
        return if b == 1 % n {
            Ok(DiscreteLogResult { s: 0, r: 1, samples: Vec::new() })
        } else {
            Err(Error::Argument(alloc::format!("{b} is not a power of {a} modulo {n}")))
        };
    }
    let (state, _) = discrete_log_state(a % n, b, n, t)?;
    let regs: Vec<usize> = (0..2 * t).collect();
    let dist = state.probabilities(&regs)?;
    let draws = sample_distribution(&dist, attempts.max(1) as u64, rng::derive_seed(seed, 1))?;
    let mut seq: Vec<usize> = Vec::new();
    for (&k, &count) in &draws.entries {
        seq.extend(core::iter::repeat_n(k, count as usize));
    }
    seq.shuffle(&mut rng::seeded(rng::derive_seed(seed, 2)));
    let big_m = (1u64 << t) as f64;
    let mut used = Vec::new();
    for v in seq {
        let m1 = (v >> t) as u64;
        let m2 = (v & ((1 << t) - 1)) as u64;
        used.push((m1, m2));
        let k_hat = crate::math::round(m2 as f64 * order as f64 / big_m) as u64 % order;
        let sk = crate::math::round(m1 as f64 * order as f64 / big_m) as u64 % order;
        if gcd(k_hat, order) != 1 {
            continue;
        }
        let s = sk * mod_inverse(k_hat, order)? % order;
        if mod_pow(a, s, n) == b {
            return Ok(DiscreteLogResult { s, r: order, samples: used });
        }
    }
    Err(Error::Inconclusive(alloc::format!("discrete log of {b} base {a} mod {n} not found")))
}

/// RSA key material.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RsaKeys {
    pub n: u64,
    pub e: u64,
    pub d: u64,
    pub p: u64,
    pub q: u64,
    pub phi: u64,
}

/// Key generation, encryption and decryption of one message.
pub fn rsa(p: u64, q: u64, e: u64, message: u64) -> Result<(RsaKeys, u64, u64)> {
    if !is_prime(p) || !is_prime(q) || p == q {
        return Err(Error::Argument("p and q must be distinct primes".into()));
    }
    let n = p.checked_mul(q).filter(|&n| n < 1 << 31).ok_or_else(|| Error::Argument("modulus too large".into()))?;
    let phi = (p - 1) * (q - 1);
    if gcd(e, phi) != 1 {
        return Err(Error::NotCoprime(e, phi));
    }
    if message >= n {
        return Err(Error::Argument(alloc::format!("message {message} must be below n = {n}")));
    }
    let d = mod_inverse(e, phi)?;
    let cipher = mod_pow(message, e, n);
    let decrypted = mod_pow(cipher, d, n);
    Ok((RsaKeys { n, e, d, p, q, phi }, cipher, decrypted))
}

/// Eigenstate `|u_s> = r^{-1/2} sum_k e^{-2 pi i s k / r} |a^k mod N>` of
/// modular multiplication, on `width` qubits.
pub fn modmul_eigenstate(a: u64, n: u64, s: u64, width: usize) -> Result<QuantumState> {
    let r = classical_order(a, n)?;
    let mut amps = vec![crate::C64::new(0.0, 0.0); 1 << width];
    let mut v = 1u64;
    for k in 0..r {
        amps[v as usize] = crate::math::cis(-2.0 * crate::math::PI * (s * k) as f64 / r as f64);
        v = v * a % n;
    }
    QuantumState::normalized(amps)
}
