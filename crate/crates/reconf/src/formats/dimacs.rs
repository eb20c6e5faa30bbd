//! DIMACS CNF, variable-map and reconfiguration-graph dumps.

use std::fmt::Write as _;

use reconf_core::oracle::ReconfigGraph;
use reconf_core::sat::{Cnf, Lit, Var};

use super::{numbered_lines, ParseError};

/// `p cnf <vars> <clauses>` followed by one zero-terminated clause per line.
pub fn write_dimacs_cnf(cnf: &Cnf) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars, cnf.clauses.len());
    for clause in &cnf.clauses {
        for lit in clause {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Reads DIMACS CNF. Clauses may span lines; `c` lines are comments.
pub fn parse_dimacs_cnf(text: &str) -> Result<Cnf, ParseError> {
    let mut header: Option<(usize, u32, usize)> = None;
    let mut cnf = Cnf::default();
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 1;
    for (line, raw) in numbered_lines(text) {
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('c') || raw.starts_with('%') {
            continue;
        }
        last_line = line;
        if let Some(rest) = raw.strip_prefix('p') {
            if header.is_some() {
                return Err(ParseError::new(line, "duplicate 'p' line"));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let ["cnf", v, c] = fields[..] else {
                return Err(ParseError::new(line, "expected 'p cnf <vars> <clauses>'"));
            };
            let v = v.parse().map_err(|_| ParseError::new(line, format!("bad variable count '{v}'")))?;
            let c = c.parse().map_err(|_| ParseError::new(line, format!("bad clause count '{c}'")))?;
            cnf.num_vars = v;
            header = Some((line, v, c));
            continue;
        }
        let Some((_, num_vars, _)) = header else {
            return Err(ParseError::new(line, "clause before the 'p' line"));
        };
        for tok in raw.split_whitespace() {
            let value: i64 = tok
                .parse()
                .map_err(|_| ParseError::new(line, format!("expected a literal, found '{tok}'")))?;
            if value == 0 {
                cnf.clauses.push(std::mem::take(&mut current));
                continue;
            }
            match Lit::from_dimacs(value) {
                Some(lit) if lit.var().index() <= num_vars => current.push(lit),
                _ => return Err(ParseError::new(line, format!("literal {value} outside 1..{num_vars}"))),
            }
        }
    }
    let (hline, _, expected) = header.ok_or_else(|| ParseError::new(last_line, "missing 'p cnf' line"))?;
    if !current.is_empty() {
        return Err(ParseError::new(last_line, "last clause is not terminated by 0"));
    }
    if cnf.clauses.len() != expected {
        return Err(ParseError::new(
            hline,
            format!("header declares {expected} clauses, found {}", cnf.clauses.len()),
        ));
    }
    Ok(cnf)
}

/// One `name index` line per variable.
pub fn write_var_map(atoms: &[(String, Var)]) -> String {
    let mut out = String::new();
    for (name, var) in atoms {
        let _ = writeln!(out, "{name} {}", var.index());
    }
    out
}

/// States as `n <i> <v1> .. <vk>` lines (1-based), then edges as `e <i> <j>`.
pub fn write_reconfig_graph(graph: &ReconfigGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "c states={} edges={}", graph.states.len(), graph.edge_count());
    for (i, state) in graph.states.iter().enumerate() {
        let _ = write!(out, "n {}", i + 1);
        for v in state.nodes() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for (i, j) in graph.edges() {
        let _ = writeln!(out, "e {} {}", i + 1, j + 1);
    }
    out
}
