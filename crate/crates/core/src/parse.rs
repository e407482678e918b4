//! The s-expression map format.
//!
//! ```text
//! (map <dom> <cod> <expr>...)
//! expr := x<k> | <int> | <int>/<int> | (<op> expr...)
//! op   := + | * | neg | sin | cos | exp | inv
//! ```
//!
//! `;` starts a comment that runs to the end of the line.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::Rational;
use crate::smooth::SmoothMap;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            ';' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                    column += 1;
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '(' | ')' => {
                chars.next();
                column += 1;
                let tok = if ch == '(' { Tok::Open } else { Tok::Close };
                out.push(Token { tok, line: l, column: c });
            }
            _ => {
                let mut atom = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                    column += 1;
                }
                out.push(Token { tok: Tok::Atom(atom), line: l, column: c });
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    dom: usize,
}

impl Parser {
    fn err<T>(&self, at: Option<&Token>, message: impl Into<String>) -> Result<T> {
        let (line, column) = at.map_or(self.end, |t| (t.line, t.column));
        Err(Error::Syntax { line, column, message: message.into() })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token> {
        match self.next() {
            Some(t) if t.tok == want => Ok(t),
            other => self.err(other.as_ref(), format!("expected {what}")),
        }
    }

    fn natural(&mut self, what: &str) -> Result<usize> {
        match self.next() {
            Some(Token { tok: Tok::Atom(a), .. }) if a.parse::<usize>().is_ok() => Ok(a.parse().unwrap()),
            other => self.err(other.as_ref(), format!("expected {what}")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let Some(t) = self.next() else {
            return self.err(None, "unexpected end of input");
        };
        match &t.tok {
            Tok::Close => self.err(Some(&t), "unexpected ')'"),
            Tok::Atom(a) => self.atom(a, &t),
            Tok::Open => {
                let head = match self.next() {
                    Some(Token { tok: Tok::Atom(a), .. }) => a,
                    other => return self.err(other.as_ref(), "expected an operator"),
                };
                let mut args = Vec::new();
                while self.peek().is_some_and(|t| t.tok != Tok::Close) {
                    args.push(self.expr()?);
                }
                self.expect(Tok::Close, "')'")?;
                let unary = |args: Vec<Expr>, f: fn(&Expr) -> Expr| -> Result<Expr> {
                    match <[Expr; 1]>::try_from(args) {
                        Ok([e]) => Ok(f(&e)),
                        Err(args) => self.err(Some(&t), format!("'{head}' takes one argument, got {}", args.len())),
                    }
                };
                match head.as_str() {
                    "+" => Ok(Expr::sum(args)),
                    "*" => Ok(Expr::product(args)),
                    "neg" => unary(args, Expr::neg),
                    "sin" => unary(args, Expr::sin),
                    "cos" => unary(args, Expr::cos),
                    "exp" => unary(args, Expr::exp),
                    "inv" => unary(args, Expr::inv),
                    _ => self.err(Some(&t), format!("unknown operator '{head}'")),
                }
            }
        }
    }

    fn atom(&self, a: &str, t: &Token) -> Result<Expr> {
        if let Some(index) = a.strip_prefix('x').and_then(|k| k.parse::<usize>().ok()) {
            if index >= self.dom {
                return Err(Error::UnboundVariable { index, dim: self.dom });
            }
            return Ok(Expr::var(index));
        }
        match parse_rational(a) {
            Some(q) => Ok(Expr::constant(q)),
            None => self.err(Some(t), format!("unrecognised atom '{a}'")),
        }
    }
}

/// `p`, `-p`, `p/q` with integer `p`, positive integer `q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = n.parse().ok()?;
    let denom: BigInt = d.parse().ok()?;
    if denom.is_zero() || d.starts_with(['-', '+']) {
        return None;
    }
    Some(Rational::new(numer, denom))
}

pub fn parse_map(source: &str) -> Result<SmoothMap> {
    let toks = tokenize(source);
    let end = toks.last().map_or((1, 1), |t| (t.line, t.column + 1));
    let mut p = Parser { toks, pos: 0, end, dom: 0 };
    p.expect(Tok::Open, "'(map'")?;
    match p.next() {
        Some(Token { tok: Tok::Atom(a), .. }) if a == "map" => {}
        other => return p.err(other.as_ref(), "expected 'map'"),
    }
    let dom = p.natural("domain dimension")?;
    let cod = p.natural("codomain dimension")?;
    p.dom = dom;
    let mut components = Vec::new();
    while p.peek().is_some_and(|t| t.tok != Tok::Close) {
        components.push(p.expr()?);
    }
    p.expect(Tok::Close, "')'")?;
    if let Some(t) = p.peek() {
        return p.err(Some(t), "trailing input after map");
    }
    if components.len() != cod {
        return Err(Error::dim("map body", cod, components.len()));
    }
    SmoothMap::new(dom, components)
}

/// Parse a single expression over `dom` variables.
pub fn parse_expr(source: &str, dom: usize) -> Result<Expr> {
    let toks = tokenize(source);
    let end = toks.last().map_or((1, 1), |t| (t.line, t.column + 1));
    let mut p = Parser { toks, pos: 0, end, dom };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return p.err(Some(t), "trailing input after expression");
    }
    Ok(e)
}
