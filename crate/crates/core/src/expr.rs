//! Textual graph expressions such as `kneser(7,3)`, `cartesian(K3,P4)` or
//! `corona(P3, line(K4))`.
//!
//! Grammar: `expr := name | name '(' arg (',' arg)* ')'` where an argument is
//! an integer or a nested expression. Short forms `K<n>`, `P<n>`, `C<n>` and
//! `E<n>` stand for complete, path, cycle and edgeless graphs.

use crate::constructions as c;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Arg {
    Int(usize),
    Graph(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Expr {
    name: String,
    args: Vec<Arg>,
    offset: usize,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: msg.into(),
        }
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a graph name or integer"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip_ws();
        if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            let start = self.pos;
            let word = self.ident()?;
            return word.parse().map(Arg::Int).map_err(|_| Error::Parse {
                offset: start,
                message: format!("bad integer '{word}'"),
            });
        }
        self.expr().map(Arg::Graph)
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        let offset = self.pos;
        let name = self.ident()?;
        self.skip_ws();
        let mut args = Vec::new();
        if self.src.get(self.pos) == Some(&b'(') {
            self.pos += 1;
            loop {
                args.push(self.arg()?);
                self.skip_ws();
                match self.src.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected ',' or ')'")),
                }
            }
        }
        Ok(Expr { name, args, offset })
    }
}

fn ints(e: &Expr) -> Result<Vec<usize>> {
    e.args
        .iter()
        .map(|a| match a {
            Arg::Int(v) => Ok(*v),
            Arg::Graph(_) => Err(invalid(format!("{} takes integer arguments", e.name))),
        })
        .collect()
}

fn graphs(e: &Expr) -> Result<Vec<Graph>> {
    e.args
        .iter()
        .map(|a| match a {
            Arg::Graph(g) => build(g),
            Arg::Int(_) => Err(invalid(format!("{} takes graph arguments", e.name))),
        })
        .collect()
}

fn arity<T>(e: &Expr, v: Vec<T>, n: usize) -> Result<Vec<T>> {
    if v.len() == n {
        Ok(v)
    } else {
        Err(invalid(format!("{} takes {n} argument(s), got {}", e.name, v.len())))
    }
}

fn short_form(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let head = chars.next()?;
    let rest = chars.as_str().trim_start_matches('_');
    if !"KPCE".contains(head) || rest.is_empty() {
        return None;
    }
    rest.parse().ok().map(|n| (head, n))
}

fn build(e: &Expr) -> Result<Graph> {
    if e.args.is_empty() {
        if let Some((head, n)) = short_form(&e.name) {
            return match head {
                'K' => c::complete(n),
                'P' => c::path(n),
                'C' => c::cycle(n),
                _ => Ok(c::edgeless(n)),
            };
        }
    }
    match e.name.as_str() {
        "complete" => c::complete(arity(e, ints(e)?, 1)?[0]),
        "path" => c::path(arity(e, ints(e)?, 1)?[0]),
        "cycle" => c::cycle(arity(e, ints(e)?, 1)?[0]),
        "edgeless" | "empty" => Ok(c::edgeless(arity(e, ints(e)?, 1)?[0])),
        "kneser" => {
            let v = arity(e, ints(e)?, 2)?;
            c::kneser(v[0], v[1])
        }
        "petersen" => {
            arity(e, ints(e)?, 0)?;
            Ok(c::petersen())
        }
        "hamming" => c::hamming(&ints(e)?),
        "cartesian" | "product" => {
            let g = arity(e, graphs(e)?, 2)?;
            Ok(c::cartesian_product(&g[0], &g[1]))
        }
        "join" => {
            let g = arity(e, graphs(e)?, 2)?;
            Ok(c::join(&g[0], &g[1]))
        }
        "union" => {
            let g = arity(e, graphs(e)?, 2)?;
            Ok(c::disjoint_union(&g[0], &g[1]))
        }
        "corona" => {
            let g = arity(e, graphs(e)?, 2)?;
            c::corona(&g[0], &g[1])
        }
        "line" => Ok(c::line_graph(&arity(e, graphs(e)?, 1)?[0])),
        "complement" => Ok(arity(e, graphs(e)?, 1)?[0].complement()),
        other => Err(Error::Parse {
            offset: e.offset,
            message: format!("unknown graph family '{other}'"),
        }),
    }
}

/// Builds the graph an expression denotes.
pub fn parse_graph(src: &str) -> Result<Graph> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    build(&e)
}
