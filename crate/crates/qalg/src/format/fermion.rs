//! Fermion Hamiltonian files.
//!
//! ```text
//! 2
//! [h1]
//! 0 0 -1.25 0
//! 1 1 -0.5 0
//! [h2]
//! 0 1 1 0 0.25 0
//! 1 0 0 1 0.25 0
//! ```
//!
//! Entries are listed explicitly (a Hermitian pair needs both lines) and
//! unlisted ones are zero. The result must pass the Hermiticity check.

use qalg_core::fermion::FermionHamiltonian;
use qalg_core::C64;

use super::{content_lines, core_err, parse_float, parse_index, FormatError, FormatResult};

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    One,
    Two,
}

pub fn parse_fermion_hamiltonian(text: &str) -> FormatResult<FermionHamiltonian> {
    let mut lines = content_lines(text);
    let (no, first) = lines.next().ok_or_else(|| FormatError::new(0, "empty Hamiltonian file"))?;
    let n = parse_index(no, first)?;
    let mut h = FermionHamiltonian::zeros(n).map_err(|e| core_err(no, e))?;
    let mut section = Section::None;
    let mut seen = std::collections::BTreeSet::new();
    let mut last = no;
    for (no, line) in lines {
        last = no;
        match line {
            "[h1]" => section = Section::One,
            "[h2]" => section = Section::Two,
            _ => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                let arity = match section {
                    Section::None => return Err(FormatError::new(no, "entry before a [h1] or [h2] header")),
                    Section::One => 2,
                    Section::Two => 4,
                };
                if toks.len() != arity + 2 {
                    return Err(FormatError::new(no, format!("expected {arity} indices then `re im`")));
                }
                let idx = toks[..arity].iter().map(|t| parse_index(no, t)).collect::<FormatResult<Vec<_>>>()?;
                if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                    return Err(FormatError::new(no, format!("mode {bad} out of range for {n} modes")));
                }
                let v = C64::new(parse_float(no, toks[arity])?, parse_float(no, toks[arity + 1])?);
                if !seen.insert(idx.clone()) {
                    return Err(FormatError::new(no, "entry listed twice"));
                }
                match *idx.as_slice() {
                    [p, q] => h.set_h1(p, q, v),
                    [p, q, r, s] => h.set_h2(p, q, r, s, v),
                    _ => unreachable!(),
                }
            }
        }
    }
    h.check().map_err(|e| core_err(last, e))?;
    Ok(h)
}

/// Nonzero entries in index order.
pub fn write_fermion_hamiltonian(h: &FermionHamiltonian) -> String {
    let n = h.n_modes();
    let zero = C64::new(0.0, 0.0);
    let mut out = format!("{n}\n[h1]\n");
    for p in 0..n {
        for q in 0..n {
            let v = h.h1(p, q);
            if v != zero {
                out.push_str(&format!("{p} {q} {} {}\n", v.re, v.im));
            }
        }
    }
    out.push_str("[h2]\n");
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = h.h2(p, q, r, s);
                    if v != zero {
                        out.push_str(&format!("{p} {q} {r} {s} {} {}\n", v.re, v.im));
                    }
                }
            }
        }
    }
    out
}
