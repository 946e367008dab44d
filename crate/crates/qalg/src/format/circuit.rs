//! Circuit files: one instruction per line.
//!
//! ```text
//! qubits 3
//! h 0
//! cx 0 1
//! ncx 0 2        # fires when qubit 0 is |0>
//! rz 1 0.7853981633974483
//! ```
//!
//! A mnemonic carries one `c` (positive) or `nc` (negative) prefix per
//! control. Operands are the controls, then the targets, then the angles.
//! The `qubits` header is optional when reading; without it the register
//! is one wider than the largest index used.

use qalg_core::{Circuit, Control, Gate, Instruction};

use super::{content_lines, core_err, parse_float, parse_index, FormatError, FormatResult};

fn split_prefix(word: &str) -> (Vec<bool>, &str) {
    let mut polarity = Vec::new();
    let mut rest = word;
    loop {
        if let Some(r) = rest.strip_prefix("nc") {
            polarity.push(false);
            rest = r;
        } else if let Some(r) = rest.strip_prefix('c') {
            polarity.push(true);
            rest = r;
        } else {
            return (polarity, rest);
        }
    }
}

fn param_count(name: &str) -> Option<usize> {
    match name {
        "i" | "x" | "y" | "z" | "h" | "s" | "t" | "swap" => Some(0),
        "p" | "rx" | "ry" | "rz" => Some(1),
        _ => None,
    }
}

pub fn parse_circuit(text: &str) -> FormatResult<Circuit> {
    let mut declared = None;
    let mut ops = Vec::new();
    for (no, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let word = toks.next().unwrap_or_default();
        let rest: Vec<&str> = toks.collect();
        if word == "qubits" {
            if declared.is_some() || !ops.is_empty() {
                return Err(FormatError::new(no, "qubits header must come first and only once"));
            }
            match rest.as_slice() {
                [n] => declared = Some(parse_index(no, n)?),
                _ => return Err(FormatError::new(no, "expected `qubits <n>`")),
            }
            continue;
        }
        let (polarity, name) = split_prefix(word);
        let n_params = param_count(name).ok_or_else(|| FormatError::new(no, format!("unknown gate {word:?}")))?;
        let n_targets = if name == "swap" { 2 } else { 1 };
        let expected = polarity.len() + n_targets + n_params;
        if rest.len() != expected {
            return Err(FormatError::new(no, format!("{word} takes {expected} operand(s), got {}", rest.len())));
        }
        let (wires, angles) = rest.split_at(polarity.len() + n_targets);
        let wires = wires.iter().map(|t| parse_index(no, t)).collect::<FormatResult<Vec<_>>>()?;
        let angles = angles.iter().map(|t| parse_float(no, t)).collect::<FormatResult<Vec<_>>>()?;
        let controls = polarity.iter().zip(&wires).map(|(&pos, &q)| Control::on(q, pos)).collect();
        let gate = Gate::from_name(name, &angles).map_err(|e| core_err(no, e))?;
        ops.push((no, Instruction::new(gate, wires[polarity.len()..].to_vec(), controls)));
    }
    let widest = ops.iter().filter_map(|(_, op)| op.max_qubit()).max().map_or(1, |m| m + 1);
    let n = declared.unwrap_or(widest);
    let mut circuit = Circuit::new(n);
    for (no, op) in ops {
        circuit.try_add(op).map_err(|e| core_err(no, e))?;
    }
    Ok(circuit)
}

/// Serializes `circuit`; custom matrix gates have no text form.
pub fn write_circuit(circuit: &Circuit) -> FormatResult<String> {
    let mut out = format!("qubits {}\n", circuit.n);
    for (k, op) in circuit.ops.iter().enumerate() {
        if matches!(op.gate, Gate::Custom(_)) {
            return Err(FormatError::new(0, format!("instruction {k} is a custom unitary")));
        }
        let mut words = Vec::new();
        let mut mnemonic = String::new();
        for ctl in &op.controls {
            mnemonic.push_str(if ctl.positive { "c" } else { "nc" });
        }
        mnemonic.push_str(op.gate.name());
        words.push(mnemonic);
        words.extend(op.controls.iter().map(|c| c.qubit.to_string()));
        words.extend(op.targets.iter().map(|t| t.to_string()));
        words.extend(op.gate.params().iter().map(|a| a.to_string()));
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    Ok(out)
}
