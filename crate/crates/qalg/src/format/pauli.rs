//! Pauli-sum files: `<coeff> <letters>` per line, e.g. `0.5 XYZ`. An
//! all-`I` line contributes to the identity offset.

use qalg_core::pauli::{PauliString, PauliSum};
use qalg_core::C64;

use super::{content_lines, core_err, parse_float, FormatError, FormatResult};

pub fn parse_pauli_sum(text: &str) -> FormatResult<PauliSum> {
    let mut sum: Option<PauliSum> = None;
    for (no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [coeff, letters] = toks.as_slice() else {
            return Err(FormatError::new(no, "expected `<coeff> <letters>`"));
        };
        let a = parse_float(no, coeff)?;
        let p = PauliString::parse(letters).map_err(|e| core_err(no, e))?;
        let s = sum.get_or_insert_with(|| PauliSum::new(p.n_qubits()));
        s.add_term(C64::new(a, 0.0), p).map_err(|e| core_err(no, e))?;
    }
    sum.ok_or_else(|| FormatError::new(0, "no terms"))
}

/// Offset first, then terms in stored order. Complex coefficients are refused.
pub fn write_pauli_sum(sum: &PauliSum) -> FormatResult<String> {
    let mut out = String::new();
    let mut line = |c: C64, label: String| {
        if c.im != 0.0 {
            return Err(FormatError::new(0, format!("coefficient of {label} is complex")));
        }
        out.push_str(&format!("{} {label}\n", c.re));
        Ok(())
    };
    if sum.offset() != C64::new(0.0, 0.0) || sum.terms().is_empty() {
        line(sum.offset(), PauliString::identity(sum.n_qubits()).to_string())?;
    }
    for (c, p) in sum.terms() {
        line(*c, p.to_string())?;
    }
    Ok(out)
}
