//! Graph files: the node count on the first line, then `i j w` per edge.

use qalg_core::variational::WeightedGraph;

use super::{content_lines, core_err, parse_float, parse_index, FormatError, FormatResult};

pub fn parse_graph(text: &str) -> FormatResult<WeightedGraph> {
    let mut lines = content_lines(text);
    let (no, first) = lines.next().ok_or_else(|| FormatError::new(0, "empty graph file"))?;
    let n = parse_index(no, first)?;
    if n == 0 {
        return Err(FormatError::new(no, "graph needs at least one node"));
    }
    let mut g = WeightedGraph::new(n);
    let mut seen = std::collections::BTreeSet::new();
    for (no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [i, j, w] = toks.as_slice() else {
            return Err(FormatError::new(no, "expected `<i> <j> <w>`"));
        };
        let (i, j) = (parse_index(no, i)?, parse_index(no, j)?);
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(FormatError::new(no, format!("edge {{{i}, {j}}} listed twice")));
        }
        g.add_edge(i, j, parse_float(no, w)?).map_err(|e| core_err(no, e))?;
    }
    Ok(g)
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = format!("{}\n", g.n_nodes());
    for (i, j, w) in g.edges() {
        out.push_str(&format!("{i} {j} {w}\n"));
    }
    out
}
