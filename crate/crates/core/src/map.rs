//! Monotone, subhomogeneous self-maps of `B(T)` given as expression trees.

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::real::Real;
use crate::space::Vector;

/// Anything the fixed-point solver can iterate.
pub trait SelfMap<T: Real> {
    fn dim(&self) -> usize;

    fn apply(&self, x: &Vector<T>) -> Result<Vector<T>>;
}

/// One output coordinate of a [`MapExpr::Coords`] map.
///
/// Every node is nondecreasing and satisfies `e(r ⊙ x) ≤ r + e(x)` for
/// `r ≥ 0`, and both properties are preserved by the constructors, so any
/// tree is monotone and nonexpansive in the sup norm.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr<T> {
    Var(usize),
    Const(T),
    Shift(Box<Expr<T>>, T),
    Max(Box<Expr<T>>, Box<Expr<T>>),
    Min(Box<Expr<T>>, Box<Expr<T>>),
}

impl<T: Real> Expr<T> {
    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn shift(self, c: T) -> Self {
        match self {
            Expr::Const(a) => Expr::Const(a + c),
            Expr::Shift(e, a) => Expr::Shift(e, a + c),
            e => Expr::Shift(Box::new(e), c),
        }
    }

    pub fn max(self, other: Self) -> Self {
        Expr::Max(Box::new(self), Box::new(other))
    }

    pub fn min(self, other: Self) -> Self {
        Expr::Min(Box::new(self), Box::new(other))
    }

    pub fn eval(&self, x: &[T]) -> T {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => *c,
            Expr::Shift(e, c) => e.eval(x) + *c,
            Expr::Max(a, b) => a.eval(x).max(b.eval(x)),
            Expr::Min(a, b) => a.eval(x).min(b.eval(x)),
        }
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Shift(e, _) => e.max_var(),
            Expr::Max(a, b) | Expr::Min(a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    fn check_finite(&self) -> Result<()> {
        match self {
            Expr::Var(_) => Ok(()),
            Expr::Const(c) | Expr::Shift(_, c) if !c.is_finite() => Err(Error::NonFinite {
                index: 0,
                value: c.to_f64_lossy(),
            }),
            Expr::Const(_) => Ok(()),
            Expr::Shift(e, _) => e.check_finite(),
            Expr::Max(a, b) | Expr::Min(a, b) => {
                a.check_finite()?;
                b.check_finite()
            }
        }
    }

    /// Parses the textual coordinate grammar, e.g. `max(min(x0+1,x1),x2-2)`.
    pub fn parse(src: &str, dim: usize) -> Result<Self> {
        let e = parse::Parser::new(src).parse_all()?;
        if let Some(i) = e.max_var() {
            if i >= dim {
                return Err(Error::VariableOutOfRange { index: i, dim });
            }
        }
        Ok(e)
    }
}

/// A self-map of `B(T)`: either a max-plus matrix or one expression per
/// coordinate.
#[derive(Clone, Debug, PartialEq)]
pub enum MapExpr<T> {
    TropicalLinear(Matrix<T>),
    Coords(Vec<Expr<T>>),
}

impl<T: Real> MapExpr<T> {
    pub fn linear(matrix: Matrix<T>) -> Self {
        MapExpr::TropicalLinear(matrix)
    }

    pub fn coords(exprs: Vec<Expr<T>>) -> Result<Self> {
        let dim = exprs.len();
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        for e in &exprs {
            e.check_finite()?;
            if let Some(i) = e.max_var() {
                if i >= dim {
                    return Err(Error::VariableOutOfRange { index: i, dim });
                }
            }
        }
        Ok(MapExpr::Coords(exprs))
    }

    pub fn parse_coords<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        let dim = coords.len();
        let exprs = coords
            .iter()
            .map(|s| Expr::parse(s.as_ref(), dim))
            .collect::<Result<Vec<_>>>()?;
        Self::coords(exprs)
    }

    pub fn identity(dim: usize) -> Self {
        MapExpr::Coords((0..dim).map(Expr::Var).collect())
    }

    /// The constant map onto `c`.
    pub fn constant(c: &Vector<T>) -> Self {
        MapExpr::Coords(c.iter().map(Expr::Const).collect())
    }

    pub fn dim(&self) -> usize {
        match self {
            MapExpr::TropicalLinear(a) => a.dim(),
            MapExpr::Coords(es) => es.len(),
        }
    }

    pub fn eval(&self, x: &Vector<T>) -> Result<Vector<T>> {
        check_dim(self.dim(), x.dim())?;
        match self {
            MapExpr::TropicalLinear(a) => a.apply(x),
            MapExpr::Coords(es) => Ok(Vector::from_vec_unchecked(
                es.iter().map(|e| e.eval(x.entries())).collect(),
            )),
        }
    }
}

impl<T: Real> SelfMap<T> for MapExpr<T> {
    fn dim(&self) -> usize {
        MapExpr::dim(self)
    }

    fn apply(&self, x: &Vector<T>) -> Result<Vector<T>> {
        self.eval(x)
    }
}

mod parse {
    use super::*;

    #[derive(Clone, Debug, PartialEq)]
    enum Token {
        Num(f64),
        Var(usize),
        Max,
        Min,
        Open,
        Close,
        Comma,
        Plus,
        Minus,
    }

    pub(super) struct Parser {
        tokens: Vec<Token>,
        pos: usize,
        error: Option<Error>,
    }

    fn lex(src: &str) -> Result<Vec<Token>> {
        let chars: Vec<char> = src.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '(' => {
                    out.push(Token::Open);
                    i += 1;
                }
                ')' => {
                    out.push(Token::Close);
                    i += 1;
                }
                ',' => {
                    out.push(Token::Comma);
                    i += 1;
                }
                '+' => {
                    out.push(Token::Plus);
                    i += 1;
                }
                '-' => {
                    out.push(Token::Minus);
                    i += 1;
                }
                c if c.is_ascii_digit() || c == '.' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                        i += 1;
                    }
                    // exponent
                    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                        let mut j = i + 1;
                        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                            j += 1;
                        }
                        if j < chars.len() && chars[j].is_ascii_digit() {
                            i = j;
                            while i < chars.len() && chars[i].is_ascii_digit() {
                                i += 1;
                            }
                        }
                    }
                    let text: String = chars[start..i].iter().collect();
                    let v: f64 = text
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad number '{text}'")))?;
                    out.push(Token::Num(v));
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    match word.as_str() {
                        "max" => out.push(Token::Max),
                        "min" => out.push(Token::Min),
                        w if w.starts_with('x') && w.len() > 1 && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                            let idx = w[1..]
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad variable '{w}'")))?;
                            out.push(Token::Var(idx));
                        }
                        w => return Err(Error::Parse(format!("unknown identifier '{w}'"))),
                    }
                }
                c => return Err(Error::Parse(format!("unexpected character '{c}'"))),
            }
        }
        Ok(out)
    }

    impl Parser {
        pub(super) fn new(src: &str) -> Self {
            match lex(src) {
                Ok(tokens) => Parser {
                    tokens,
                    pos: 0,
                    error: None,
                },
                Err(e) => Parser {
                    tokens: Vec::new(),
                    pos: 0,
                    error: Some(e),
                },
            }
        }

        pub(super) fn parse_all<T: Real>(mut self) -> Result<Expr<T>> {
            if let Some(e) = self.error.take() {
                return Err(e);
            }
            let e = self.additive()?;
            if self.pos != self.tokens.len() {
                return Err(Error::Parse(format!(
                    "trailing input at token {}",
                    self.pos
                )));
            }
            Ok(e)
        }

        fn peek(&self) -> Option<&Token> {
            self.tokens.get(self.pos)
        }

        fn next(&mut self) -> Option<Token> {
            let t = self.tokens.get(self.pos).cloned();
            self.pos += 1;
            t
        }

        fn expect(&mut self, want: Token) -> Result<()> {
            match self.next() {
                Some(t) if t == want => Ok(()),
                other => Err(Error::Parse(format!("expected {want:?}, found {other:?}"))),
            }
        }

        fn literal<T: Real>(v: f64) -> Result<T> {
            T::from_f64(v)
                .filter(|t| t.is_finite())
                .ok_or_else(|| Error::Parse(format!("literal {v} is not finite")))
        }

        // additive := primary (('+' | '-') primary)*
        // At least one side of every '+' / '-' must be a literal, and a
        // literal may not be the left operand of '-' with a variable on the
        // right (that map would be decreasing).
        fn additive<T: Real>(&mut self) -> Result<Expr<T>> {
            let mut lhs = self.primary()?;
            loop {
                let op = match self.peek() {
                    Some(Token::Plus) => Token::Plus,
                    Some(Token::Minus) => Token::Minus,
                    _ => return Ok(lhs),
                };
                self.pos += 1;
                let rhs = self.primary()?;
                lhs = match (op, lhs, rhs) {
                    (Token::Plus, Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
                    (Token::Minus, Expr::Const(a), Expr::Const(b)) => Expr::Const(a - b),
                    (Token::Plus, e, Expr::Const(c)) | (Token::Plus, Expr::Const(c), e) => e.shift(c),
                    (Token::Minus, e, Expr::Const(c)) => e.shift(-c),
                    (Token::Minus, Expr::Const(_), _) => {
                        return Err(Error::Parse(
                            "subtracting an expression from a literal gives a decreasing map".into(),
                        ))
                    }
                    _ => {
                        return Err(Error::Parse(
                            "'+' and '-' need a literal on one side".into(),
                        ))
                    }
                };
            }
        }

        fn primary<T: Real>(&mut self) -> Result<Expr<T>> {
            match self.next() {
                Some(Token::Num(v)) => Ok(Expr::Const(Self::literal(v)?)),
                Some(Token::Minus) => match self.next() {
                    Some(Token::Num(v)) => Ok(Expr::Const(Self::literal(-v)?)),
                    other => Err(Error::Parse(format!(
                        "unary minus applies to literals only, found {other:?}"
                    ))),
                },
                Some(Token::Var(i)) => Ok(Expr::Var(i)),
                Some(Token::Open) => {
                    let e = self.additive()?;
                    self.expect(Token::Close)?;
                    Ok(e)
                }
                Some(tok @ (Token::Max | Token::Min)) => {
                    self.expect(Token::Open)?;
                    let mut acc = self.additive()?;
                    let mut args = 1;
                    while self.peek() == Some(&Token::Comma) {
                        self.pos += 1;
                        let next = self.additive()?;
                        acc = if tok == Token::Max { acc.max(next) } else { acc.min(next) };
                        args += 1;
                    }
                    self.expect(Token::Close)?;
                    if args < 2 {
                        return Err(Error::Parse(format!("{tok:?} needs at least two arguments")));
                    }
                    Ok(acc)
                }
                other => Err(Error::Parse(format!("unexpected token {other:?}"))),
            }
        }
    }
}
