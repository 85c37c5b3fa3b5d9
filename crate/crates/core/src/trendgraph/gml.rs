//! GML reader and writer.
//!
//! Output layout, byte for byte:
//!
//! ```text
//! graph [
//!   node [
//!     id 0
//!     label "#Yolo"
//!     kind "trend"
//!   ]
//!   edge [
//!     source 0
//!     target 1
//!   ]
//! ]
//! ```
//!
//! Nodes are emitted in ascending id order and edges in (source, target)
//! order, so a given graph always serialises to the same bytes. `"` and `&`
//! inside strings are written as `&quot;` and `&amp;`.

use std::io::{self, Read, Write};

use super::graph::{NodeKind, TrendGraph};
use super::NodeId;
use crate::error::{Error, Result};

pub fn write_gml<W: Write>(graph: &TrendGraph, mut out: W) -> io::Result<()> {
    out.write_all(b"graph [\n")?;
    for node in graph.nodes() {
        writeln!(
            out,
            "  node [\n    id {}\n    label \"{}\"\n    kind \"{}\"\n  ]",
            node.id(),
            escape(node.label()),
            node.kind().as_str()
        )?;
    }
    for edge in graph.edges() {
        writeln!(
            out,
            "  edge [\n    source {}\n    target {}\n  ]",
            edge.source, edge.target
        )?;
    }
    out.write_all(b"]\n")?;
    out.flush()
}

pub fn write_gml_string(graph: &TrendGraph) -> String {
    let mut buf = Vec::new();
    write_gml(graph, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("GML output is UTF-8")
}

pub fn read_gml<R: Read>(mut input: R) -> Result<TrendGraph> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    Parser::new(&text).parse()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('"', "&quot;")
}

fn unescape(s: &str) -> String {
    s.replace("&quot;", "\"").replace("&amp;", "&")
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Key(String),
    Int(i64),
    Str(String),
    Open,
    Close,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    /// Next token with the line it starts on, or `None` at end of input.
    fn next(&mut self) -> Result<Option<(Token, usize)>> {
        while let Some(&c) = self.chars.peek() {
            if c == '\n' {
                self.line += 1;
                self.chars.next();
            } else if c.is_whitespace() {
                self.chars.next();
            } else {
                break;
            }
        }
        let line = self.line;
        let Some(c) = self.chars.next() else {
            return Ok(None);
        };
        let token = match c {
            '[' => Token::Open,
            ']' => Token::Close,
            '"' => {
                let mut s = String::new();
                loop {
                    match self.chars.next() {
                        Some('"') => break,
                        Some(ch) => {
                            if ch == '\n' {
                                self.line += 1;
                            }
                            s.push(ch);
                        }
                        None => return Err(self.err("unterminated string")),
                    }
                }
                Token::Str(unescape(&s))
            }
            c if c == '-' || c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(&d) = self.chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    self.chars.next();
                }
                let value = s
                    .parse()
                    .map_err(|_| self.err(format!("bad integer {s:?}")))?;
                Token::Int(value)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                while let Some(&d) = self.chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    self.chars.next();
                }
                Token::Key(s)
            }
            other => return Err(self.err(format!("unexpected character {other:?}"))),
        };
        Ok(Some((token, line)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
}

#[derive(Default)]
struct NodeBlock {
    id: Option<i64>,
    label: Option<String>,
    kind: Option<NodeKind>,
    line: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lexer: Lexer::new(text),
        }
    }

    fn expect_token(&mut self, what: &str) -> Result<(Token, usize)> {
        self.lexer.next()?.ok_or_else(|| {
            self.lexer
                .err(format!("unexpected end of input, expected {what}"))
        })
    }

    fn expect_open(&mut self) -> Result<()> {
        match self.expect_token("'['")? {
            (Token::Open, _) => Ok(()),
            (other, line) => Err(parse_err(line, format!("expected '[', found {other:?}"))),
        }
    }

    fn expect_int(&mut self, key: &str) -> Result<i64> {
        match self.expect_token("integer")? {
            (Token::Int(v), _) => Ok(v),
            (other, line) => Err(parse_err(
                line,
                format!("{key}: expected integer, found {other:?}"),
            )),
        }
    }

    fn expect_str(&mut self, key: &str) -> Result<String> {
        match self.expect_token("string")? {
            (Token::Str(s), _) => Ok(s),
            (other, line) => Err(parse_err(
                line,
                format!("{key}: expected string, found {other:?}"),
            )),
        }
    }

    fn parse(mut self) -> Result<TrendGraph> {
        match self.expect_token("'graph'")? {
            (Token::Key(k), _) if k == "graph" => {}
            (other, line) => {
                return Err(parse_err(
                    line,
                    format!("expected 'graph', found {other:?}"),
                ))
            }
        }
        self.expect_open()?;

        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        loop {
            match self.expect_token("'node', 'edge' or ']'")? {
                (Token::Close, _) => break,
                (Token::Key(k), line) if k == "node" => nodes.push(self.node_block(line)?),
                (Token::Key(k), line) if k == "edge" => edges.push(self.edge_block(line)?),
                (other, line) => {
                    return Err(parse_err(line, format!("unexpected {other:?} in graph")))
                }
            }
        }
        if let Some((tok, line)) = self.lexer.next()? {
            return Err(parse_err(line, format!("trailing {tok:?} after graph")));
        }

        nodes.sort_by_key(|n| n.id);
        let mut graph = TrendGraph::new();
        for (expected, node) in nodes.into_iter().enumerate() {
            let id = node.id.unwrap_or(-1);
            if id != expected as i64 {
                return Err(parse_err(
                    node.line,
                    format!("node ids must be dense from 0; expected {expected}, found {id}"),
                ));
            }
            graph
                .insert_node(
                    node.kind.unwrap_or(NodeKind::User),
                    node.label.unwrap_or_default(),
                )
                .map_err(|e| parse_err(node.line, e.to_string()))?;
        }
        for (source, target, line) in edges {
            let to_id = |v: i64| {
                u32::try_from(v)
                    .map(NodeId)
                    .map_err(|_| parse_err(line, format!("bad node id {v}")))
            };
            graph
                .insert_edge(to_id(source)?, to_id(target)?)
                .map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(graph)
    }

    fn node_block(&mut self, line: usize) -> Result<NodeBlock> {
        self.expect_open()?;
        let mut block = NodeBlock {
            line,
            ..NodeBlock::default()
        };
        loop {
            match self.expect_token("node attribute or ']'")? {
                (Token::Close, _) => break,
                (Token::Key(k), _) if k == "id" => block.id = Some(self.expect_int("id")?),
                (Token::Key(k), _) if k == "label" => block.label = Some(self.expect_str("label")?),
                (Token::Key(k), _) if k == "kind" => {
                    block.kind = Some(match self.expect_str("kind")?.as_str() {
                        "trend" => NodeKind::Trend,
                        "user" => NodeKind::User,
                        other => {
                            return Err(self.lexer.err(format!("unknown node kind {other:?}")))
                        }
                    });
                }
                (other, l) => return Err(parse_err(l, format!("unexpected {other:?} in node"))),
            }
        }
        if block.id.is_none() || block.label.is_none() || block.kind.is_none() {
            return Err(parse_err(line, "node requires id, label and kind"));
        }
        Ok(block)
    }

    fn edge_block(&mut self, line: usize) -> Result<(i64, i64, usize)> {
        self.expect_open()?;
        let (mut source, mut target) = (None, None);
        loop {
            match self.expect_token("edge attribute or ']'")? {
                (Token::Close, _) => break,
                (Token::Key(k), _) if k == "source" => source = Some(self.expect_int("source")?),
                (Token::Key(k), _) if k == "target" => target = Some(self.expect_int("target")?),
                (other, l) => return Err(parse_err(l, format!("unexpected {other:?} in edge"))),
            }
        }
        match (source, target) {
            (Some(s), Some(t)) => Ok((s, t, line)),
            _ => Err(parse_err(line, "edge requires source and target")),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
