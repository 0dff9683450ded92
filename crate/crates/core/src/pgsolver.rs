//! PGSolver text format with `live <src> <dst>;` extension statements.
//!
//! ```text
//! parity 2;
//! 0 1 1 0,1 "a";
//! 1 2 0 1;
//! live 0 1;
//! ```
//!
//! Node statements are `<id> <priority> <owner> <succ>(,<succ>)* ["name"];`
//! with owner 0 for Even and 1 for Odd. Whitespace, including line breaks, is
//! free between tokens. Vertices are numbered densely in order of declaration.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::game::{GameBuilder, OddFairGame, Player, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    Invalid(Violation),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => f.write_str(m),
            ParseErrorKind::Invalid(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Comma,
    Semi,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { chars: s.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn next(&mut self) -> Result<Option<(Tok, Pos)>, ParseError> {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let pos = self.pos();
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        let tok = match c {
            ',' => {
                self.bump();
                Tok::Comma
            }
            ';' => {
                self.bump();
                Tok::Semi
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(syntax(pos, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(e) => s.push(e),
                            None => return Err(syntax(pos, "unterminated string")),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = self.chars.peek() {
                    if ch.is_whitespace() || matches!(ch, ',' | ';' | '"') {
                        break;
                    }
                    s.push(ch);
                    self.bump();
                }
                Tok::Word(s)
            }
        };
        Ok(Some((tok, pos)))
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError { line: pos.line, col: pos.col, kind: ParseErrorKind::Syntax(msg.into()) }
}

fn invalid(pos: Pos, v: Violation) -> ParseError {
    ParseError { line: pos.line, col: pos.col, kind: ParseErrorKind::Invalid(v) }
}

fn number<T: std::str::FromStr>(tok: &(Tok, Pos), what: &str) -> Result<T, ParseError> {
    match &tok.0 {
        Tok::Word(w) => w.parse().map_err(|_| syntax(tok.1, format!("expected {what}, found `{w}`"))),
        other => Err(syntax(tok.1, format!("expected {what}, found {other:?}"))),
    }
}

struct NodeStmt {
    pos: Pos,
    id: u64,
    priority: u32,
    owner: Player,
    succ: Vec<(u64, Pos)>,
    name: Option<String>,
}

pub fn parse_game(text: &str) -> Result<OddFairGame, ParseError> {
    let mut lx = Lexer::new(text);
    let mut stmts: Vec<Vec<(Tok, Pos)>> = Vec::new();
    let mut cur = Vec::new();
    while let Some(t) = lx.next()? {
        if t.0 == Tok::Semi {
            if cur.is_empty() {
                return Err(syntax(t.1, "empty statement"));
            }
            stmts.push(std::mem::take(&mut cur));
        } else {
            cur.push(t);
        }
    }
    if let Some(t) = cur.first() {
        return Err(syntax(t.1, "statement lacks a terminating `;`"));
    }

    let mut nodes = Vec::new();
    let mut live = Vec::new();
    for (i, st) in stmts.iter().enumerate() {
        match &st[0].0 {
            Tok::Word(w) if w == "parity" => {
                if i != 0 {
                    return Err(syntax(st[0].1, "`parity` header must come first"));
                }
                if st.len() != 2 {
                    return Err(syntax(st[0].1, "header is `parity <max-id>;`"));
                }
                number::<u64>(&st[1], "a vertex id")?;
            }
            Tok::Word(w) if w == "live" => {
                if st.len() != 3 {
                    return Err(syntax(st[0].1, "live edges are `live <src> <dst>;`"));
                }
                live.push((st[0].1, number::<u64>(&st[1], "a vertex id")?, number::<u64>(&st[2], "a vertex id")?));
            }
            _ => nodes.push(node(st)?),
        }
    }

    let mut index = HashMap::with_capacity(nodes.len());
    for (k, nd) in nodes.iter().enumerate() {
        if index.insert(nd.id, k).is_some() {
            return Err(invalid(nd.pos, Violation::DuplicateId(nd.id)));
        }
    }
    let mut b = GameBuilder::new();
    for nd in &nodes {
        b.vertex_with_id(nd.id, nd.owner, nd.priority, nd.name.clone());
    }
    for (k, nd) in nodes.iter().enumerate() {
        for &(s, pos) in &nd.succ {
            let Some(&t) = index.get(&s) else {
                return Err(invalid(pos, Violation::DanglingEdge(nd.id, s)));
            };
            b.edge(k, t);
        }
    }
    for &(pos, u, v) in &live {
        let (Some(&a), Some(&c)) = (index.get(&u), index.get(&v)) else {
            return Err(invalid(pos, Violation::LiveUnknownVertex(u, v)));
        };
        if !nodes[a].succ.iter().any(|&(s, _)| s == v) {
            return Err(invalid(pos, Violation::LiveNotAnEdge(u, v)));
        }
        if nodes[a].owner == Player::Even {
            return Err(invalid(pos, Violation::LiveFromEven(u, v)));
        }
        b.live_edge(a, c);
    }
    let end = lx.pos();
    b.build().map_err(|v| invalid(end, v))
}

fn node(st: &[(Tok, Pos)]) -> Result<NodeStmt, ParseError> {
    let pos = st[0].1;
    if st.len() < 4 {
        return Err(syntax(pos, "node statements are `<id> <priority> <owner> <successors> [\"name\"];`"));
    }
    let id = number::<u64>(&st[0], "a vertex id")?;
    let priority = number::<u32>(&st[1], "a priority")?;
    let owner = match number::<u8>(&st[2], "owner 0 or 1")? {
        0 => Player::Even,
        1 => Player::Odd,
        _ => return Err(syntax(st[2].1, "owner must be 0 or 1")),
    };
    let mut succ = Vec::new();
    let mut rest = &st[3..];
    while let Some(t) = rest.first() {
        succ.push((number::<u64>(t, "a successor id")?, t.1));
        rest = &rest[1..];
        match rest.first() {
            Some((Tok::Comma, _)) => rest = &rest[1..],
            _ => break,
        }
    }
    let name = match rest {
        [] => None,
        [(Tok::Str(s), _)] => Some(s.clone()),
        [(t, p), ..] => return Err(syntax(*p, format!("unexpected {t:?} after successor list"))),
    };
    Ok(NodeStmt { pos, id, priority, owner, succ, name })
}

/// Serializes with the input ids and priorities; live statements follow the
/// nodes, sorted by source and target.
pub fn write_game(g: &OddFairGame) -> String {
    let mut s = String::new();
    let max_id = (0..g.len()).map(|v| g.id(v)).max().unwrap_or(0);
    writeln!(s, "parity {max_id};").unwrap();
    for v in 0..g.len() {
        let succ: Vec<String> = g.successors(v).iter().map(|&w| g.id(w).to_string()).collect();
        write!(s, "{} {} {} {}", g.id(v), g.original_priority(v), g.owner(v).code(), succ.join(",")).unwrap();
        if let Some(name) = g.name(v) {
            let esc = name.replace('\\', "\\\\").replace('"', "\\\"");
            write!(s, " \"{esc}\"").unwrap();
        }
        s.push_str(";\n");
    }
    let mut live: Vec<(u64, u64)> = g.live_edges().map(|(u, v)| (g.id(u), g.id(v))).collect();
    live.sort_unstable();
    for (u, v) in live {
        writeln!(s, "live {u} {v};").unwrap();
    }
    s
}
