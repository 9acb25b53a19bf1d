//! Minimal arithmetic expressions in one variable, so functions and weights
//! can be supplied on the command line without recompiling.
//!
//! Grammar (usual precedence, `^` binds tightest and associates right):
//!
//! ```text
//! sum    := product (('+' | '-') product)*
//! product:= unary (('*' | '/' | 'x' juxtaposition is NOT allowed) unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | name '(' sum (',' sum)? ')' | '(' sum ')'
//! ```
//!
//! Names: `sin`, `cos`, `exp`, `abs`, `sqrt`, and two-argument `pow`. The
//! unicode operators `×`, `÷`, and `−` are accepted as aliases.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Variable,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
    Sqrt,
    Pow,
}

impl Func {
    fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at byte {})", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Comma,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push((Token::Plus, pos));
            }
            '-' | '−' => {
                chars.next();
                tokens.push((Token::Minus, pos));
            }
            '*' | '×' => {
                chars.next();
                tokens.push((Token::Star, pos));
            }
            '/' | '÷' => {
                chars.next();
                tokens.push((Token::Slash, pos));
            }
            '^' => {
                chars.next();
                tokens.push((Token::Caret, pos));
            }
            ',' => {
                chars.next();
                tokens.push((Token::Comma, pos));
            }
            '(' => {
                chars.next();
                tokens.push((Token::Open, pos));
            }
            ')' => {
                chars.next();
                tokens.push((Token::Close, pos));
            }
            '0'..='9' | '.' => {
                let start = pos;
                let mut end = pos;
                let mut seen_exp = false;
                while let Some(&(p, d)) = chars.peek() {
                    let take = d.is_ascii_digit()
                        || d == '.'
                        || (!seen_exp && (d == 'e' || d == 'E'))
                        || (seen_exp
                            && (d == '+' || d == '-')
                            && input[start..p].ends_with(['e', 'E']));
                    if !take {
                        break;
                    }
                    if d == 'e' || d == 'E' {
                        seen_exp = true;
                    }
                    end = p + d.len_utf8();
                    chars.next();
                }
                let text = &input[start..end];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    message: format!("bad number literal '{text}'"),
                    position: start,
                })?;
                tokens.push((Token::Number(value), start));
            }
            c if c.is_ascii_alphabetic() => {
                let start = pos;
                let mut end = pos;
                while let Some(&(p, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = p + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(input[start..end].to_string()), start));
            }
            other => {
                return Err(ParseError {
                    message: format!("unexpected character '{other}'"),
                    position: pos,
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.cursor).map(|&(_, p)| p).unwrap_or(self.input_len)
    }

    fn bump(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.cursor).map(|(t, _)| t.clone());
        if token.is_some() {
            self.cursor += 1;
        }
        token
    }

    fn expect(&mut self, wanted: Token, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&wanted) {
            self.cursor += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError { message, position: self.position() }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.cursor += 1;
                    left = Expr::Add(Box::new(left), Box::new(self.product()?));
                }
                Some(Token::Minus) => {
                    self.cursor += 1;
                    left = Expr::Sub(Box::new(left), Box::new(self.product()?));
                }
                _ => return Ok(left),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.cursor += 1;
                    left = Expr::Mul(Box::new(left), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.cursor += 1;
                    left = Expr::Div(Box::new(left), Box::new(self.unary()?));
                }
                _ => return Ok(left),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.cursor += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.cursor += 1;
            // Right-associative; the exponent may itself carry a unary minus.
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            Some(Token::Number(v)) => Ok(Expr::Number(v)),
            Some(Token::Ident(name)) => {
                if name == "x" {
                    return Ok(Expr::Variable);
                }
                let func = match name.as_str() {
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    "abs" => Func::Abs,
                    "sqrt" => Func::Sqrt,
                    "pow" => Func::Pow,
                    _ => {
                        self.cursor -= 1;
                        return Err(self.error(format!("unknown name '{name}'")));
                    }
                };
                self.expect(Token::Open, "'(' after function name")?;
                let mut args = vec![self.sum()?];
                while self.peek() == Some(&Token::Comma) {
                    self.cursor += 1;
                    args.push(self.sum()?);
                }
                self.expect(Token::Close, "')' closing the argument list")?;
                if args.len() != func.arity() {
                    return Err(self.error(format!(
                        "{name} takes {} argument(s), got {}",
                        func.arity(),
                        args.len()
                    )));
                }
                Ok(Expr::Call(func, args))
            }
            Some(Token::Open) => {
                let inner = self.sum()?;
                self.expect(Token::Close, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, 'x', a function, or '('".into())),
        }
    }
}

impl Expr {
    pub fn parse(input: &str) -> Result<Expr, ParseError> {
        let tokens = tokenize(input)?;
        if tokens.is_empty() {
            return Err(ParseError { message: "empty expression".into(), position: 0 });
        }
        let mut parser = Parser { tokens, cursor: 0, input_len: input.len() };
        let expr = parser.sum()?;
        if parser.peek().is_some() {
            return Err(parser.error("trailing input after expression".into()));
        }
        Ok(expr)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Number(v) => *v,
            Expr::Variable => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Expr::Call(f, args) => match f {
                Func::Sin => args[0].eval(x).sin(),
                Func::Cos => args[0].eval(x).cos(),
                Func::Exp => args[0].eval(x).exp(),
                Func::Abs => args[0].eval(x).abs(),
                Func::Sqrt => args[0].eval(x).sqrt(),
                Func::Pow => args[0].eval(x).powf(args[1].eval(x)),
            },
        }
    }
}
