use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar_poly::VarId;
use crate::structures::{builtin, ghost_algebra, level_algebra, LieRepSpec, NamedOperatorSet, REngine, RState};
use crate::vertex_engine::{AlgebraKind, Engine, State};
use crate::{Poly, Rational};

/// Creation atoms `b[i,k]`, `g[i,k]`, `u[a,k]` with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomKind {
    Beta,
    Gamma,
    Current,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    Builtin(String),
    Atom { kind: AtomKind, index: usize, mode: u32 },
    /// Right-nested Wick product `W(a1, ..., ak) = :a1 :a2 ... ak::`.
    Wick(Vec<Expr>),
    Circle(Box<Expr>, i64, Box<Expr>),
    Derivative(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

pub const BUILTINS: [&str; 10] = ["theta_x", "theta_y", "theta_h", "v_x", "v_y", "v_h", "L_S", "L_O", "script_L", "euler"];

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    e = Expr::Add(Box::new(e), Box::new(self.product()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    e = Expr::Sub(Box::new(e), Box::new(self.product()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        Ok(text.parse().expect("digits"))
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        self.skip_ws();
        let at = self.pos;
        let v: i64 = self.digits()?.try_into().map_err(|_| Error::Parse { offset: at, message: "integer too large".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn number(&mut self) -> Result<Expr> {
        let num = self.digits()?;
        if self.s.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::Parse { offset: at, message: "zero denominator".into() });
            }
            return Ok(Expr::Number(Rational::new(num, den)));
        }
        Ok(Expr::Number(Rational::from_integer(num)))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect(b'(')?;
        let mut out = vec![self.sum()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(self.sum()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "W" => {
                        let args = self.args()?;
                        if args.len() < 2 {
                            return Err(self.err("W needs at least two arguments"));
                        }
                        Ok(Expr::Wick(args))
                    }
                    "D" => {
                        let mut args = self.args()?;
                        if args.len() != 1 {
                            return Err(self.err("D takes one argument"));
                        }
                        Ok(Expr::Derivative(Box::new(args.remove(0))))
                    }
                    "C" => {
                        self.expect(b'(')?;
                        let a = self.sum()?;
                        self.expect(b',')?;
                        let n = self.integer()?;
                        self.expect(b',')?;
                        let b = self.sum()?;
                        self.expect(b')')?;
                        Ok(Expr::Circle(Box::new(a), n, Box::new(b)))
                    }
                    "b" | "g" | "u" => {
                        let kind = match name.as_str() {
                            "b" => AtomKind::Beta,
                            "g" => AtomKind::Gamma,
                            _ => AtomKind::Current,
                        };
                        self.expect(b'[')?;
                        self.skip_ws();
                        let at = self.pos;
                        let index = self.integer()?;
                        if index < 1 {
                            return Err(Error::Parse { offset: at, message: "indices are 1-based".into() });
                        }
                        self.expect(b',')?;
                        self.skip_ws();
                        let at = self.pos;
                        let mode = self.integer()?;
                        if mode < 0 {
                            return Err(Error::Parse { offset: at, message: "mode labels are nonnegative".into() });
                        }
                        self.expect(b']')?;
                        Ok(Expr::Atom { kind, index: index as usize, mode: mode as u32 })
                    }
                    _ if BUILTINS.contains(&name.as_str()) || name.starts_with("theta_") => Ok(Expr::Builtin(name)),
                    _ => Err(Error::Parse { offset: start, message: format!("unknown identifier '{name}'") }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(r) => write!(f, "{r}"),
            Expr::Builtin(n) => write!(f, "{n}"),
            Expr::Atom { kind, index, mode } => {
                let c = match kind {
                    AtomKind::Beta => 'b',
                    AtomKind::Gamma => 'g',
                    AtomKind::Current => 'u',
                };
                write!(f, "{c}[{index},{mode}]")
            }
            Expr::Wick(items) => {
                write!(f, "W(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Expr::Circle(a, n, b) => write!(f, "C({a}, {n}, {b})"),
            Expr::Derivative(a) => write!(f, "D({a})"),
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::Sub(a, b) => write!(f, "{a} - ({b})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Mul(a, b) => write!(f, "({a})*({b})"),
        }
    }
}

/// Engines and named states for one built-in spec.
pub struct EvalContext {
    pub spec: LieRepSpec,
    pub ghost: REngine,
    pub current: Option<REngine>,
    pub named: NamedOperatorSet,
}

enum Value {
    Scalar(Rational),
    State(RState),
}

impl EvalContext {
    pub fn new(algebra: &str) -> Result<Self> {
        let spec = builtin(algebra)?;
        let ghost = Engine::new(ghost_algebra(&spec));
        let named = NamedOperatorSet::build(&spec, &ghost)?;
        let current = match named.get("L_O") {
            Some(l) => Some(Engine::new(Arc::clone(&l.algebra))),
            None => spec.level().ok().and_then(|lam| level_algebra(&spec, &lam).ok()).map(Engine::new),
        };
        Ok(EvalContext { spec, ghost, current, named })
    }

    fn engine_for(&self, s: &RState) -> &REngine {
        match s.algebra.kind {
            AlgebraKind::CurrentAlgebra => self.current.as_ref().expect("current states need a current engine"),
            AlgebraKind::GhostSystem => &self.ghost,
        }
    }

    /// Evaluates to a state; bare numbers become multiples of the vacuum
    /// of the ghost system.
    pub fn eval(&self, e: &Expr) -> Result<RState> {
        Ok(match self.value(e)? {
            Value::State(s) => s,
            Value::Scalar(c) => self.ghost.vacuum().scale(&c),
        })
    }

    fn as_state(&self, v: Value, like: &RState) -> RState {
        match v {
            Value::State(s) => s,
            Value::Scalar(c) => State::vacuum(&like.algebra).scale(&c),
        }
    }

    fn pair(&self, a: Value, b: Value) -> (RState, RState) {
        match (a, b) {
            (Value::State(a), b) => {
                let b = self.as_state(b, &a);
                (a, b)
            }
            (a, Value::State(b)) => (self.as_state(a, &b), b),
            (Value::Scalar(a), Value::Scalar(b)) => (self.ghost.vacuum().scale(&a), self.ghost.vacuum().scale(&b)),
        }
    }

    fn value(&self, e: &Expr) -> Result<Value> {
        Ok(match e {
            Expr::Number(r) => Value::Scalar(r.clone()),
            Expr::Builtin(name) => Value::State(
                self.named
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::Eval(format!("'{name}' is not defined for {}", self.spec.name)))?,
            ),
            Expr::Atom { kind, index, mode } => {
                let i = index - 1;
                let (engine, v) = match kind {
                    AtomKind::Beta => (&self.ghost, VarId::beta(i, *mode)),
                    AtomKind::Gamma => (&self.ghost, VarId::gamma(i, *mode)),
                    AtomKind::Current => (
                        self.current.as_ref().ok_or_else(|| Error::Eval(format!("no current algebra for {}", self.spec.name)))?,
                        VarId::current(i, *mode),
                    ),
                };
                Value::State(engine.state(Poly::var(v))?)
            }
            Expr::Wick(items) => {
                let mut vals: Vec<Value> = items.iter().map(|x| self.value(x)).collect::<Result<_>>()?;
                let mut acc = vals.pop().expect("two or more");
                while let Some(prev) = vals.pop() {
                    let (a, b) = self.pair(prev, acc);
                    acc = Value::State(self.engine_for(&a).wick(&a, &b)?);
                }
                acc
            }
            Expr::Circle(a, n, b) => {
                let (a, b) = self.pair(self.value(a)?, self.value(b)?);
                Value::State(self.engine_for(&a).circle_product(&a, *n, &b)?)
            }
            Expr::Derivative(a) => match self.value(a)? {
                Value::State(s) => Value::State(self.engine_for(&s).derivative(&s)?),
                Value::Scalar(_) => Value::Scalar(Rational::zero()),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sub = matches!(e, Expr::Sub(..));
                match (self.value(a)?, self.value(b)?) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x - y } else { x + y }),
                    (x, y) => {
                        let (x, y) = self.pair(x, y);
                        Value::State(if sub { x.try_sub(&y)? } else { x.try_add(&y)? })
                    }
                }
            }
            Expr::Neg(a) => match self.value(a)? {
                Value::Scalar(x) => Value::Scalar(-x),
                Value::State(s) => Value::State(s.scale(&-Rational::one())),
            },
            Expr::Mul(a, b) => match (self.value(a)?, self.value(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(x), Value::State(s)) | (Value::State(s), Value::Scalar(x)) => Value::State(s.scale(&x)),
                (Value::State(_), Value::State(_)) => {
                    return Err(Error::Eval("'*' is scalar multiplication; use W(a, b) for the Wick product".into()))
                }
            },
        })
    }
}
