//! Line-oriented text formats for instances and templates.
//!
//! ```text
//! # instance
//! var x 1
//! var y 2
//! edge x y
//!
//! # template
//! vertex a loop
//! vertex b
//! edge a b
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::instance::{Instance, Variable};
use super::template::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate declaration of `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}, column {column}: `{name}` is not declared")]
    Undeclared {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("line {line}, column {column}: count must be at least 1")]
    ZeroCount { line: usize, column: usize },
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &content[s..],
            column: content[..s].chars().count() + 1,
        });
    }
    out
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn identifier<'a>(line: usize, tok: &Token<'a>) -> Result<&'a str, ParseError> {
    if is_identifier(tok.text) {
        Ok(tok.text)
    } else {
        Err(ParseError::Syntax {
            line,
            column: tok.column,
            message: format!(
                "`{}` is not a valid name (ASCII letters, digits, `_`)",
                tok.text
            ),
        })
    }
}

fn arity(
    line: usize,
    toks: &[Token<'_>],
    min: usize,
    max: usize,
    usage: &str,
) -> Result<(), ParseError> {
    if toks.len() < min || toks.len() > max {
        let column = toks.get(max).map_or(1, |t| t.column);
        return Err(ParseError::Syntax {
            line,
            column,
            message: format!("expected `{usage}`"),
        });
    }
    Ok(())
}

struct PendingEdge<'a> {
    line: usize,
    ends: [(&'a str, usize); 2],
}

fn resolve<'a>(
    edges: &[PendingEdge<'a>],
    lookup: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<(usize, usize)>, ParseError> {
    edges
        .iter()
        .map(|e| {
            let mut idx = [0; 2];
            for (slot, &(name, column)) in idx.iter_mut().zip(&e.ends) {
                *slot = lookup(name).ok_or_else(|| ParseError::Undeclared {
                    line: e.line,
                    column,
                    name: name.to_string(),
                })?;
            }
            Ok((idx[0], idx[1]))
        })
        .collect()
}

/// Parses an instance. Variable order is declaration order; `edge` lines may
/// mention variables declared further down.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut vars: Vec<Variable> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(head) = toks.first() else { continue };
        match head.text {
            "var" => {
                arity(line, &toks, 3, 3, "var <name> <count>")?;
                let name = identifier(line, &toks[1])?;
                let count_tok = &toks[2];
                let count: u32 = count_tok.text.parse().map_err(|_| ParseError::Syntax {
                    line,
                    column: count_tok.column,
                    message: format!("`{}` is not a count", count_tok.text),
                })?;
                if count == 0 {
                    return Err(ParseError::ZeroCount {
                        line,
                        column: count_tok.column,
                    });
                }
                if vars.iter().any(|v| v.name == name) {
                    return Err(ParseError::Duplicate {
                        line,
                        name: name.to_string(),
                    });
                }
                vars.push(Variable::new(name, count));
            }
            "edge" => {
                arity(line, &toks, 3, 3, "edge <name> <name>")?;
                let a = identifier(line, &toks[1])?;
                let b = identifier(line, &toks[2])?;
                edges.push(PendingEdge {
                    line,
                    ends: [(a, toks[1].column), (b, toks[2].column)],
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column: head.column,
                    message: format!("unknown directive `{other}` (expected `var` or `edge`)"),
                })
            }
        }
    }
    let atoms = resolve(&edges, |n| vars.iter().position(|v| v.name == n))?;
    Ok(Instance::new(vars, atoms).expect("parser validated names and counts"))
}

/// Writes an instance in the format read by [`parse_instance`].
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    for v in inst.variables() {
        let _ = writeln!(out, "var {} {}", v.name, v.count);
    }
    for (a, b) in inst.atoms() {
        let _ = writeln!(out, "edge {} {}", inst.name(a), inst.name(b));
    }
    out
}

/// Parses a finite template graph.
pub fn parse_template(text: &str) -> Result<Graph, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut loops = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(head) = toks.first() else { continue };
        match head.text {
            "vertex" => {
                arity(line, &toks, 2, 3, "vertex <name> [loop]")?;
                let name = identifier(line, &toks[1])?;
                if names.iter().any(|n| n == name) {
                    return Err(ParseError::Duplicate {
                        line,
                        name: name.to_string(),
                    });
                }
                if let Some(flag) = toks.get(2) {
                    if flag.text != "loop" {
                        return Err(ParseError::Syntax {
                            line,
                            column: flag.column,
                            message: format!("expected `loop`, found `{}`", flag.text),
                        });
                    }
                    loops.push(names.len());
                }
                names.push(name.to_string());
            }
            "edge" => {
                arity(line, &toks, 3, 3, "edge <name> <name>")?;
                let a = identifier(line, &toks[1])?;
                let b = identifier(line, &toks[2])?;
                edges.push(PendingEdge {
                    line,
                    ends: [(a, toks[1].column), (b, toks[2].column)],
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column: head.column,
                    message: format!("unknown directive `{other}` (expected `vertex` or `edge`)"),
                })
            }
        }
    }
    let mut all = resolve(&edges, |n| names.iter().position(|m| m == n))?;
    all.extend(loops.iter().map(|&v| (v, v)));
    Ok(Graph::new(names, all).expect("parser validated names"))
}

/// Writes a template in the format read by [`parse_template`].
pub fn serialize_template(g: &Graph) -> String {
    let mut out = String::new();
    for v in 0..g.len() {
        if g.has_loop(v) {
            let _ = writeln!(out, "vertex {} loop", g.name(v));
        } else {
            let _ = writeln!(out, "vertex {}", g.name(v));
        }
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "edge {} {}", g.name(a), g.name(b));
    }
    out
}
