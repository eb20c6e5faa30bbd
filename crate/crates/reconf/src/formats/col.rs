//! DIMACS graph (`p edge n m` / `e u v`) plus an `s`/`t` pair file.

use reconf_core::model::{Graph, IsrpInstance, ModelError, NodeId, TokenState};

use super::{numbered_lines, ParseError};

const MAX_NODES: NodeId = 10_000_000;

struct Header {
    line: usize,
    n: NodeId,
    m: usize,
}

fn parse_id(line: usize, tok: &str, n: NodeId) -> Result<NodeId, ParseError> {
    let v: i64 = tok
        .parse()
        .map_err(|_| ParseError::new(line, format!("expected a node id, found '{tok}'")))?;
    if v < 1 || v > n as i64 {
        return Err(ParseError::new(line, format!("node id {v} outside 1..{n}")));
    }
    Ok(v as NodeId)
}

fn parse_graph(text: &str) -> Result<(Graph, NodeId), ParseError> {
    let mut header: Option<Header> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (line, raw) in numbered_lines(text) {
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        last_line = line;
        match kind {
            "c" => {}
            "p" => {
                if let Some(h) = &header {
                    return Err(ParseError::new(line, format!("duplicate 'p' line (first on line {})", h.line)));
                }
                let fields: Vec<&str> = toks.collect();
                let [format, n, m] = fields[..] else {
                    return Err(ParseError::new(line, "expected 'p edge <n> <m>'"));
                };
                if format != "edge" && format != "col" {
                    return Err(ParseError::new(line, format!("unsupported problem type '{format}'")));
                }
                let n: NodeId = n
                    .parse()
                    .map_err(|_| ParseError::new(line, format!("bad node count '{n}'")))?;
                let m: usize = m
                    .parse()
                    .map_err(|_| ParseError::new(line, format!("bad edge count '{m}'")))?;
                if n > MAX_NODES {
                    return Err(ParseError::new(line, format!("node count {n} exceeds {MAX_NODES}")));
                }
                header = Some(Header { line, n, m });
            }
            "e" => {
                let Some(h) = &header else {
                    return Err(ParseError::new(line, "edge before the 'p' line"));
                };
                let fields: Vec<&str> = toks.collect();
                let [u, v] = fields[..] else {
                    return Err(ParseError::new(line, "expected 'e <u> <v>'"));
                };
                let (u, v) = (parse_id(line, u, h.n)?, parse_id(line, v, h.n)?);
                if u == v {
                    return Err(ParseError::model(line, ModelError::SelfLoop(u)));
                }
                edges.push((u, v));
            }
            other => return Err(ParseError::new(line, format!("unknown line type '{other}'"))),
        }
    }
    let h = header.ok_or_else(|| ParseError::new(last_line.max(1), "missing 'p edge <n> <m>' line"))?;
    if edges.len() != h.m {
        return Err(ParseError::new(
            h.line,
            format!("header declares {} edges, found {}", h.m, edges.len()),
        ));
    }
    let graph = Graph::new(1..=h.n, edges).map_err(|e| ParseError::model(h.line, e))?;
    Ok((graph, h.n))
}

fn parse_pairs(text: &str, n: NodeId) -> Result<(TokenState, TokenState, usize, usize), ParseError> {
    let mut start: Option<(usize, TokenState)> = None;
    let mut goal: Option<(usize, TokenState)> = None;
    let mut last_line = 0;
    for (line, raw) in numbered_lines(text) {
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        last_line = line;
        let slot = match kind {
            "c" => continue,
            "s" => &mut start,
            "t" => &mut goal,
            other => return Err(ParseError::new(line, format!("unknown line type '{other}'"))),
        };
        if let Some((first, _)) = slot {
            return Err(ParseError::new(line, format!("duplicate '{kind}' line (first on line {first})")));
        }
        let ids = toks.map(|t| parse_id(line, t, n)).collect::<Result<Vec<_>, _>>()?;
        *slot = Some((line, TokenState::new(ids)));
    }
    let (sl, s) = start.ok_or_else(|| ParseError::new(last_line.max(1), "missing 's' line"))?;
    let (tl, t) = goal.ok_or_else(|| ParseError::new(last_line.max(1), "missing 't' line"))?;
    Ok((s, t, sl, tl))
}

/// Parses a DIMACS graph and a start/goal pair file. `k` is the size of the
/// start set. Line numbers in errors refer to whichever file is at fault,
/// and the message says which.
pub fn parse_col_dat(graph_text: &str, pair_text: &str) -> Result<IsrpInstance, ParseError> {
    let (graph, n) = parse_graph(graph_text).map_err(|e| ParseError::new(e.line, format!("graph: {}", e.message)))?;
    let tag = |e: ParseError| ParseError::new(e.line, format!("pairs: {}", e.message));
    let (start, goal, sl, tl) = parse_pairs(pair_text, n).map_err(tag)?;
    if start.len() != goal.len() {
        return Err(tag(ParseError::new(
            tl,
            format!("start has {} nodes but goal has {}", start.len(), goal.len()),
        )));
    }
    IsrpInstance::with_inferred_k(graph, start, goal).map_err(|e| {
        let line = match &e {
            ModelError::NotIndependent { which: "start", .. } | ModelError::WrongSize { which: "start", .. } => sl,
            _ => tl,
        };
        tag(ParseError::model(line, e))
    })
}
