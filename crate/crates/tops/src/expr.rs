//! A tiny arithmetic-expression evaluator for config values and custom
//! polynomials: numbers, `+ - * / ^`, parentheses, `sqrt(...)`, `pi`, and
//! named variables.
//!
//! Case conditions like the Hess–Appel'rot one involve square roots that
//! cannot be typed as decimals to 1e-12; configs therefore accept strings
//! like `"sqrt(3)"` or `"-1/sqrt(2)"` wherever a number is expected.

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("unexpected character `{0}` at position {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected `{0}`")]
    Expected(char),
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("trailing input at position {0}")]
    TrailingInput(usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Var(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Sqrt(Box<Node>),
}

/// A parsed expression; evaluation takes a variable table.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    root: Node,
    pub source: String,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let mut p = Parser { chars: src.char_indices().collect(), pos: 0 };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(ExprError::TrailingInput(p.chars[p.pos].0));
        }
        Ok(Expr { root, source: src.to_string() })
    }

    pub fn eval(&self, vars: &HashMap<String, f64>) -> Result<f64, ExprError> {
        eval_node(&self.root, vars)
    }

    /// Evaluates a constant expression (no variables allowed).
    pub fn eval_const(&self) -> Result<f64, ExprError> {
        self.eval(&HashMap::new())
    }

    /// Names of the variables the expression references.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        collect_vars(&self.root, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

fn collect_vars(n: &Node, out: &mut Vec<String>) {
    match n {
        Node::Var(v) => out.push(v.clone()),
        Node::Num(_) => {}
        Node::Neg(a) | Node::Sqrt(a) => collect_vars(a, out),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

fn eval_node(n: &Node, vars: &HashMap<String, f64>) -> Result<f64, ExprError> {
    Ok(match n {
        Node::Num(v) => *v,
        Node::Var(name) => match name.as_str() {
            "pi" => std::f64::consts::PI,
            _ => *vars.get(name).ok_or_else(|| ExprError::UnknownIdent(name.clone()))?,
        },
        Node::Neg(a) => -eval_node(a, vars)?,
        Node::Add(a, b) => eval_node(a, vars)? + eval_node(b, vars)?,
        Node::Sub(a, b) => eval_node(a, vars)? - eval_node(b, vars)?,
        Node::Mul(a, b) => eval_node(a, vars)? * eval_node(b, vars)?,
        Node::Div(a, b) => eval_node(a, vars)? / eval_node(b, vars)?,
        Node::Pow(a, b) => eval_node(a, vars)?.powf(eval_node(b, vars)?),
        Node::Sqrt(a) => eval_node(a, vars)?.sqrt(),
    })
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ExprError::Expected(c))
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some('/') => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(Node::Neg(Box::new(self.factor()?)))
            }
            Some('+') => {
                self.bump();
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                self.skip_ws();
                if self.peek() == Some('^') {
                    self.bump();
                    // right-associative
                    let exp = self.factor()?;
                    Ok(Node::Pow(Box::new(base), Box::new(exp)))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        self.skip_ws();
        match self.peek() {
            None => Err(ExprError::UnexpectedEnd),
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.ident();
                if name == "sqrt" {
                    self.expect('(')?;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    Ok(Node::Sqrt(Box::new(inner)))
                } else {
                    Ok(Node::Var(name))
                }
            }
            Some(c) => Err(ExprError::UnexpectedChar(c, self.chars[self.pos].0)),
        }
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        text.parse::<f64>()
            .map(Node::Num)
            .map_err(|_| ExprError::UnexpectedChar('.', self.chars[start].0))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().map(|&(_, c)| c).collect()
    }
}
