//! Truth-table files: `input output` in binary, one row per input.

use qalg_core::oracles::TruthTable;
use qalg_core::BasisLabel;

use super::{content_lines, core_err, FormatError, FormatResult};

pub fn parse_truth_table(text: &str) -> FormatResult<TruthTable> {
    let mut widths = None;
    let mut pairs = Vec::new();
    let mut last = 0;
    for (no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = toks.as_slice() else {
            return Err(FormatError::new(no, "expected `<input> <output>`"));
        };
        let x = BasisLabel::parse(x).map_err(|e| core_err(no, e))?;
        let y = BasisLabel::parse(y).map_err(|e| core_err(no, e))?;
        let w = *widths.get_or_insert((x.width, y.width));
        if w != (x.width, y.width) {
            return Err(FormatError::new(no, format!("row widths differ from the first row ({} {})", w.0, w.1)));
        }
        pairs.push((x.value, y.value));
        last = no;
    }
    let (n_in, n_out) = widths.ok_or_else(|| FormatError::new(0, "empty truth table"))?;
    TruthTable::from_pairs(n_in, n_out, &pairs).map_err(|e| core_err(last, e))
}

pub fn write_truth_table(table: &TruthTable) -> String {
    (0..1usize << table.n_in)
        .map(|x| {
            format!(
                "{} {}\n",
                qalg_core::state::bitstring(x, table.n_in),
                qalg_core::state::bitstring(table.eval(x), table.n_out)
            )
        })
        .collect()
}
