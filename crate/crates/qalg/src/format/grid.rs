//! Grids of floats, one row per line, separated by whitespace or commas.

use super::{content_lines, parse_float, FormatError, FormatResult};

/// Rows must all have the same length.
pub fn parse_grid(text: &str) -> FormatResult<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (no, line) in content_lines(text) {
        let row = line
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| parse_float(no, t))
            .collect::<FormatResult<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(FormatError::new(no, format!("row has {} entries, expected {}", row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FormatError::new(0, "empty grid"));
    }
    Ok(rows)
}

pub fn write_grid(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commas_and_spaces() {
        let g = parse_grid("0.9, 0.1\n# next\n0.1 0.9\n").unwrap();
        assert_eq!(g, vec![vec![0.9, 0.1], vec![0.1, 0.9]]);
        assert!(parse_grid("1 2\n3").is_err());
        assert!(parse_grid("1 x").is_err());
    }

    #[test]
    fn round_trip() {
        let g = vec![vec![0.1 + 0.2, -1e-9], vec![1.0 / 7.0, 0.0]];
        assert_eq!(parse_grid(&write_grid(&g)).unwrap(), g);
    }
}
