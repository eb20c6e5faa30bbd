//! Solution text: `s STATUS`, one `a v1 .. vk` line per state, then
//! `c key=value` lines.

use std::fmt::Write as _;

use reconf_core::model::{NodeId, ReconfigSequence, SolveOutcome, Status, TokenState};

use super::{numbered_lines, ParseError};

/// Renders `outcome`, followed by one `c` line per entry of `stats`.
pub fn write_solution(outcome: &SolveOutcome, stats: &[(String, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s {}", outcome.status);
    if let Some(seq) = &outcome.sequence {
        for state in &seq.states {
            out.push('a');
            for v in state.nodes() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
    }
    for (key, value) in stats {
        let _ = writeln!(out, "c {key}={value}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSolution {
    pub status: Status,
    /// Present iff the status is REACHABLE.
    pub sequence: Option<ReconfigSequence>,
    /// `a` line numbers, parallel to the states of `sequence`.
    pub state_lines: Vec<usize>,
    pub comments: Vec<String>,
}

/// Reads solution text back. Every state line must list positive ids; sizes
/// and adjacency are left to the validator.
pub fn parse_solution(text: &str) -> Result<ParsedSolution, ParseError> {
    let mut status: Option<Status> = None;
    let mut states = Vec::new();
    let mut state_lines = Vec::new();
    let mut comments = Vec::new();
    for (line, raw) in numbered_lines(text) {
        if raw.trim().is_empty() {
            continue;
        }
        let (kind, rest) = raw.split_once(' ').unwrap_or((raw, ""));
        match kind {
            "s" => {
                if status.is_some() {
                    return Err(ParseError::new(line, "duplicate 's' line"));
                }
                status = Some(match rest.trim() {
                    "REACHABLE" => Status::Reachable,
                    "UNREACHABLE" => Status::Unreachable,
                    "UNKNOWN" => Status::Unknown,
                    other => return Err(ParseError::new(line, format!("unknown status '{other}'"))),
                });
            }
            "a" => {
                if status.is_none() {
                    return Err(ParseError::new(line, "state line before the 's' line"));
                }
                let ids = rest
                    .split_whitespace()
                    .map(|t| match t.parse::<NodeId>() {
                        Ok(v) if v > 0 => Ok(v),
                        _ => Err(ParseError::new(line, format!("expected a node id, found '{t}'"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                states.push(TokenState::new(ids));
                state_lines.push(line);
            }
            "c" => comments.push(rest.to_string()),
            other => return Err(ParseError::new(line, format!("unknown line type '{other}'"))),
        }
    }
    let status = status.ok_or_else(|| ParseError::new(1, "missing 's' line"))?;
    let sequence = match status {
        Status::Reachable if states.is_empty() => {
            return Err(ParseError::new(1, "REACHABLE without any state lines"));
        }
        Status::Reachable => Some(ReconfigSequence::new(states)),
        _ if !states.is_empty() => {
            return Err(ParseError::new(state_lines[0], format!("state lines with status {status}")));
        }
        _ => None,
    };
    Ok(ParsedSolution {
        status,
        sequence,
        state_lines,
        comments,
    })
}
