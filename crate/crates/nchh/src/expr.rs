//! Expression language for function and error-function specifications.
//!
//! Grammar: numeric literals, the single variable (`x` for functions, `d`
//! for error functions), `+ - * / ^` with `^` right-associative and binding
//! tighter than unary minus, parentheses, the calls `sin cos exp log abs
//! sqrt`, and `noise(seed, amplitude)` — a deterministic hash-based
//! perturbation of the variable, bounded by the amplitude.
//!
//! Precedence, tightest first: `^`, unary `-`, `* /`, `+ -`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at offset {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input string.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("evaluation error at x={x}: {message}")]
pub struct EvalError {
    /// The argument at which evaluation failed.
    pub x: f64,
    pub message: String,
}

impl EvalError {
    pub fn new(x: f64, message: impl Into<String>) -> Self {
        Self {
            x,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Expression tree over a single variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var,
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
    },
    Noise {
        seed: Box<Expr>,
        amplitude: Box<Expr>,
    },
}

impl Expr {
    /// Evaluates at `var`. `seed` perturbs every `noise` term and is 0 unless
    /// a caller explicitly re-seeds. Domain violations and non-finite
    /// intermediates are reported as errors, never as silent NaN.
    pub fn eval(&self, var: f64, seed: u64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Number(c) => *c,
            Expr::Var => var,
            Expr::Neg(inner) => -inner.eval(var, seed)?,
            Expr::Binary { op, lhs, rhs } => {
                let l = lhs.eval(var, seed)?;
                let r = rhs.eval(var, seed)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(EvalError::new(var, "division by zero"));
                        }
                        l / r
                    }
                    BinOp::Pow => l.powf(r),
                }
            }
            Expr::Call { func, arg } => {
                let a = arg.eval(var, seed)?;
                match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(EvalError::new(
                                var,
                                format!("log of non-positive argument {a}"),
                            ));
                        }
                        a.ln()
                    }
                    Func::Abs => a.abs(),
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::new(
                                var,
                                format!("sqrt of negative argument {a}"),
                            ));
                        }
                        a.sqrt()
                    }
                }
            }
            Expr::Noise { seed: s, amplitude } => {
                let noise_seed = s.eval(var, seed)?;
                let amp = amplitude.eval(var, seed)?;
                amp * unit_noise(var, noise_seed, seed)
            }
        };
        if !v.is_finite() {
            return Err(EvalError::new(var, "expression produced a non-finite value"));
        }
        Ok(v)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic pseudo-random value in [-1, 1), keyed on the bit pattern
/// of `x` mixed with the noise seed and the evaluation seed.
fn unit_noise(x: f64, noise_seed: f64, eval_seed: u64) -> f64 {
    let mixed = splitmix64(x.to_bits() ^ splitmix64(noise_seed.to_bits() ^ eval_seed));
    let u = (mixed >> 11) as f64 / (1u64 << 53) as f64;
    2.0 * u - 1.0
}

/// Renders with explicit parentheses so the output re-parses to an
/// expression that evaluates identically.
pub fn render(expr: &Expr, var: &str) -> String {
    match expr {
        Expr::Number(c) => {
            if c.is_sign_negative() {
                format!("({c})")
            } else {
                format!("{c}")
            }
        }
        Expr::Var => var.to_string(),
        Expr::Neg(inner) => format!("(-{})", render(inner, var)),
        Expr::Binary { op, lhs, rhs } => format!(
            "({}{}{})",
            render(lhs, var),
            op.symbol(),
            render(rhs, var)
        ),
        Expr::Call { func, arg } => format!("{}({})", func.name(), render(arg, var)),
        Expr::Noise { seed, amplitude } => format!(
            "noise({},{})",
            render(seed, var),
            render(amplitude, var)
        ),
    }
}

/// Parses an expression over the named variable.
pub fn parse(text: &str, var: &str) -> Result<Expr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        var,
        input_len: text.len(),
    };
    let expr = parser.parse_sum()?;
    if let Some((tok, at)) = parser.peek() {
        return Err(ParseError::new(
            at,
            format!("unexpected trailing input '{}'", tok.describe()),
        ));
    }
    Ok(expr)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(v) => format!("{v}"),
            Token::Ident(s) => s.clone(),
            Token::Plus => "+".into(),
            Token::Minus => "-".into(),
            Token::Star => "*".into(),
            Token::Slash => "/".into(),
            Token::Caret => "^".into(),
            Token::LParen => "(".into(),
            Token::RParen => ")".into(),
            Token::Comma => ",".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            ',' => {
                tokens.push((Token::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let literal = &text[start..i];
                let value: f64 = literal
                    .parse()
                    .map_err(|_| ParseError::new(start, format!("invalid number '{literal}'")))?;
                if !value.is_finite() {
                    return Err(ParseError::new(
                        start,
                        format!("numeric literal '{literal}' out of range"),
                    ));
                }
                tokens.push((Token::Number(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((Token::Ident(text[start..i].to_string()), start));
            }
            _ => return Err(ParseError::new(i, format!("unexpected character '{c}'"))),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    var: &'a str,
    input_len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(&Token, usize)> {
        self.tokens.get(self.pos).map(|(t, at)| (t, *at))
    }

    fn advance(&mut self) -> Option<(Token, usize)> {
        let item = self.tokens.get(self.pos).cloned();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, at)| *at)
            .unwrap_or(self.input_len)
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ParseError> {
        match self.advance() {
            Some((tok, _)) if tok == want => Ok(()),
            Some((tok, at)) => Err(ParseError::new(
                at,
                format!("expected {what}, found '{}'", tok.describe()),
            )),
            None => Err(ParseError::new(
                self.input_len,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn parse_sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        while let Some((tok, _)) = self.peek() {
            let op = match tok {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_term()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        while let Some((tok, _)) = self.peek() {
            let op = match tok {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_unary()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if let Some((Token::Minus, _)) = self.peek() {
            self.advance();
            let inner = self.parse_unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_atom()?;
        if let Some((Token::Caret, _)) = self.peek() {
            self.advance();
            // Right-associative; descending to unary admits exponents like x^-2.
            let exponent = self.parse_unary()?;
            return Ok(Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            });
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        match self.advance() {
            Some((Token::Number(v), _)) => Ok(Expr::Number(v)),
            Some((Token::LParen, _)) => {
                let inner = self.parse_sum()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Some((Token::Ident(name), at)) => {
                if name == self.var {
                    return Ok(Expr::Var);
                }
                if name == "noise" {
                    self.expect(Token::LParen, "'(' after noise")?;
                    let seed = self.parse_sum()?;
                    self.expect(Token::Comma, "',' between noise arguments")?;
                    let amplitude = self.parse_sum()?;
                    self.expect(Token::RParen, "')'")?;
                    return Ok(Expr::Noise {
                        seed: Box::new(seed),
                        amplitude: Box::new(amplitude),
                    });
                }
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Token::LParen, &format!("'(' after {name}"))?;
                    let arg = self.parse_sum()?;
                    self.expect(Token::RParen, "')'")?;
                    return Ok(Expr::Call {
                        func,
                        arg: Box::new(arg),
                    });
                }
                Err(ParseError::new(at, format!("unknown identifier '{name}'")))
            }
            Some((tok, at)) => Err(ParseError::new(
                at,
                format!("expected a value, found '{}'", tok.describe()),
            )),
            None => Err(ParseError::new(self.here(), "unexpected end of input")),
        }
    }
}
