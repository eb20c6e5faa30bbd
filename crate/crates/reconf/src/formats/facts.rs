//! Fact format: `k/1`, `node/1`, `edge/2`, `start/1`, `goal/1`.
//!
//! ```text
//! % comment
//! k(3). node(1..8).
//! edge(1,3). start(1). goal(3).
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use reconf_core::model::{Graph, IsrpInstance, ModelError, NodeId, TokenState};

use super::ParseError;

const MAX_INTERVAL: NodeId = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arg {
    Int(i64),
    Range(i64, i64),
}

struct Statement {
    line: usize,
    name: String,
    args: Vec<Arg>,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            match c {
                b'%' => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => {
                    self.bump();
                }
                _ => break,
            }
        }
    }

    fn expect(&mut self, want: u8) -> Result<(), ParseError> {
        self.skip_trivia();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(ParseError::new(
                self.line,
                format!("expected '{}', found '{}'", want as char, c.escape_ascii()),
            )),
            None => Err(ParseError::new(
                self.line,
                format!("expected '{}', found end of input", want as char),
            )),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos || !self.src[start].is_ascii_lowercase() {
            return Err(ParseError::new(self.line, "expected a predicate name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<i64>().map_err(|_| {
            let found = self.src[start..]
                .iter()
                .take_while(|c| !matches!(c, b',' | b')' | b'.' | b'\n'))
                .take(24)
                .map(|&c| c as char)
                .collect::<String>();
            ParseError::new(self.line, format!("expected an integer, found '{}'", found.trim()))
        })
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let a = self.integer()?;
        self.skip_trivia();
        if self.src[self.pos..].starts_with(b"..") {
            self.pos += 2;
            let b = self.integer()?;
            Ok(Arg::Range(a, b))
        } else {
            Ok(Arg::Int(a))
        }
    }

    fn statement(&mut self) -> Result<Option<Statement>, ParseError> {
        self.skip_trivia();
        if self.peek().is_none() {
            return Ok(None);
        }
        let line = self.line;
        let name = self.ident()?;
        self.expect(b'(')?;
        let mut args = vec![self.arg()?];
        loop {
            self.skip_trivia();
            match self.peek() {
                Some(b',') => {
                    self.bump();
                    args.push(self.arg()?);
                }
                _ => break,
            }
        }
        self.expect(b')')?;
        self.expect(b'.')?;
        Ok(Some(Statement { line, name, args }))
    }
}

fn node_id(line: usize, v: i64) -> Result<NodeId, ParseError> {
    if v <= 0 || v > NodeId::MAX as i64 {
        return Err(ParseError::new(line, format!("node id {v} is not a positive 32-bit integer")));
    }
    Ok(v as NodeId)
}

fn single(st: &Statement) -> Result<i64, ParseError> {
    match st.args[..] {
        [Arg::Int(v)] => Ok(v),
        [Arg::Range(..)] => Err(ParseError::new(
            st.line,
            format!("interval not allowed in {}/1", st.name),
        )),
        _ => Err(arity(st, 1)),
    }
}

fn arity(st: &Statement, want: usize) -> ParseError {
    ParseError::new(
        st.line,
        format!("{}/{} used with {} argument(s), expected {}", st.name, want, st.args.len(), want),
    )
}

/// Parses an instance from fact text.
///
/// Statements may appear in any order and may repeat. When `k/1` is absent
/// it is taken from the number of `start/1` facts.
pub fn parse_facts(text: &str) -> Result<IsrpInstance, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut k: Option<(usize, i64)> = None;
    let mut nodes = BTreeSet::new();
    let mut edges: Vec<(usize, NodeId, NodeId)> = Vec::new();
    let mut start: Vec<(usize, NodeId)> = Vec::new();
    let mut goal: Vec<(usize, NodeId)> = Vec::new();

    while let Some(st) = lexer.statement()? {
        match st.name.as_str() {
            "k" => {
                let v = single(&st)?;
                if v <= 0 {
                    return Err(ParseError::new(st.line, format!("k must be positive, got {v}")));
                }
                match k {
                    Some((_, prev)) if prev != v => {
                        return Err(ParseError::new(st.line, format!("conflicting k: {prev} and {v}")));
                    }
                    _ => k = Some((st.line, v)),
                }
            }
            "node" => {
                if st.args.len() != 1 {
                    return Err(arity(&st, 1));
                }
                match st.args[0] {
                    Arg::Int(v) => {
                        nodes.insert(node_id(st.line, v)?);
                    }
                    Arg::Range(a, b) => {
                        let (a, b) = (node_id(st.line, a)?, node_id(st.line, b)?);
                        if b >= a && b - a >= MAX_INTERVAL {
                            return Err(ParseError::new(st.line, format!("interval {a}..{b} is too large")));
                        }
                        nodes.extend(a..=b);
                    }
                }
            }
            "edge" => {
                let (u, v) = match st.args[..] {
                    [Arg::Int(u), Arg::Int(v)] => (node_id(st.line, u)?, node_id(st.line, v)?),
                    [_, _] => return Err(ParseError::new(st.line, "interval not allowed in edge/2")),
                    _ => return Err(arity(&st, 2)),
                };
                edges.push((st.line, u, v));
            }
            "start" => start.push((st.line, node_id(st.line, single(&st)?)?)),
            "goal" => goal.push((st.line, node_id(st.line, single(&st)?)?)),
            other => return Err(ParseError::new(st.line, format!("unknown predicate '{other}'"))),
        }
    }

    for &(line, u, v) in &edges {
        for x in [u, v] {
            if !nodes.contains(&x) {
                return Err(ParseError::new(line, format!("edge endpoint {x} is not a declared node")));
            }
        }
    }
    for (which, list) in [("start", &start), ("goal", &goal)] {
        for &(line, x) in list.iter() {
            if !nodes.contains(&x) {
                return Err(ParseError::new(line, format!("{which} node {x} is not a declared node")));
            }
        }
    }

    let fallback = k.map_or(lexer.line, |(l, _)| l);
    let first_line = |list: &[(usize, NodeId)]| list.first().map_or(fallback, |&(l, _)| l);
    let graph = Graph::new(nodes.iter().copied(), edges.iter().map(|&(_, u, v)| (u, v))).map_err(|e| {
        let line = match e {
            ModelError::SelfLoop(x) => edges.iter().find(|&&(_, u, v)| u == x && v == x).map_or(0, |e| e.0),
            _ => 0,
        };
        ParseError::model(line, e)
    })?;
    let start_state = TokenState::new(start.iter().map(|&(_, x)| x));
    let goal_state = TokenState::new(goal.iter().map(|&(_, x)| x));
    let k = match k {
        Some((_, v)) => v as usize,
        None => start_state.len(),
    };
    IsrpInstance::new(graph, k, start_state, goal_state).map_err(|e| {
        let line = match &e {
            ModelError::WrongSize { which: "start", .. } | ModelError::NotIndependent { which: "start", .. } => {
                first_line(&start)
            }
            ModelError::WrongSize { .. } | ModelError::NotIndependent { .. } => first_line(&goal),
            _ => 0,
        };
        ParseError::model(line, e)
    })
}

/// Writes an instance as facts, one statement per line.
pub fn write_facts(instance: &IsrpInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k({}).", instance.k());
    for &v in instance.graph().node_ids() {
        let _ = writeln!(out, "node({v}).");
    }
    for (u, v) in instance.graph().edges() {
        let _ = writeln!(out, "edge({},{}).", u.min(v), u.max(v));
    }
    for &v in instance.start().nodes() {
        let _ = writeln!(out, "start({v}).");
    }
    for &v in instance.goal().nodes() {
        let _ = writeln!(out, "goal({v}).");
    }
    out
}
