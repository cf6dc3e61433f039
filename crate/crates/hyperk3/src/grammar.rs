//! Polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := postfix ('^' INT)?
//! postfix:= atom ('@' 'z')*
//! atom   := INT | 'z' | 'w' | '(' expr ')' | C(k) | CT(k) | L | LT | MT | NT | R(i) | LNF(i)
//! ```
//!
//! `z`, `C(k)` and `L` live on the z-side; `w`, `CT(k)`, `LT`, `MT`, `NT`,
//! `R(i)` and `LNF(i)` on the w-side. `X@z` substitutes `w = z + 1/z`, which
//! yields a Laurent polynomial; a final negative valuation is cleared by a
//! power of `z`, so `R(1)@z` and `z^11*R(1)@z` both read as the degree 22
//! polynomial. `C(k)` is the z-lift of `CT(k)`: `C(1) = (z-1)^2`,
//! `C(2) = (z+1)^2`.

use hyperk3_core::polyring::builtin::{lehmer, lnf, lt, mt, nt, salem_trace_r};
use hyperk3_core::polyring::{cyclotomic, cyclotomic_trace, from_trace, CycloConvention};
use hyperk3_core::{BigInt, IntPoly};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    Z,
    W,
}

/// A parsed polynomial and the variable it is written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub var: Variable,
    pub poly: IntPoly,
}

#[derive(Clone, Debug)]
enum Val {
    Int(BigInt),
    W(IntPoly),
    /// `z^shift * poly`.
    Z(IntPoly, i64),
}

fn laurent(p: IntPoly, shift: i64) -> Val {
    if p.is_zero() {
        return Val::Z(p, 0);
    }
    let low = (0..=p.degree()).find(|&i| !p.coeff(i).is_zero()).unwrap_or(0);
    if low == 0 {
        return Val::Z(p, shift);
    }
    let c: Vec<BigInt> = p.coeffs()[low..].to_vec();
    Val::Z(IntPoly::new(c), shift + low as i64)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn small(&mut self) -> Result<u64, ParseError> {
        let at = self.pos;
        let n = self.integer()?;
        u64::try_from(n).or_else(|_| Err(ParseError { pos: at, msg: "integer too large".into() }))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn arg(&mut self) -> Result<u64, ParseError> {
        self.expect(b'(')?;
        let k = self.small()?;
        self.expect(b')')?;
        Ok(k)
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = self.combine(acc, rhs, Op::Add)?;
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = self.combine(acc, rhs, Op::Sub)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            let rhs = self.unary()?;
            acc = self.combine(acc, rhs, Op::Mul)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Val, ParseError> {
        if self.eat(b'-') {
            let v = self.unary()?;
            return Ok(match v {
                Val::Int(n) => Val::Int(-n),
                Val::W(p) => Val::W(-p),
                Val::Z(p, s) => Val::Z(-p, s),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val, ParseError> {
        let base = self.postfix()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.small()?;
        let e = u32::try_from(e).or_else(|_| Err(ParseError { pos: at, msg: "exponent too large".into() }))?;
        Ok(match base {
            Val::Int(n) => Val::Int(num_traits::pow(n, e as usize)),
            Val::W(p) => Val::W(p.pow(e)),
            Val::Z(p, s) => Val::Z(p.pow(e), s * e as i64),
        })
    }

    fn postfix(&mut self) -> Result<Val, ParseError> {
        let mut v = self.atom()?;
        while self.eat(b'@') {
            if self.ident() != "z" {
                return self.err("only '@z' is supported");
            }
            v = match v {
                Val::Int(n) => Val::Int(n),
                Val::W(p) => {
                    let d = if p.is_zero() { 0 } else { p.degree() as i64 };
                    laurent(from_trace(&p), -d)
                }
                Val::Z(..) => return self.err("'@z' applies to w-side expressions"),
            };
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<Val, ParseError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(Val::Int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.ident();
                let core = |r: hyperk3_core::Result<IntPoly>| r.map_err(|e| ParseError { pos: at, msg: e.to_string() });
                match name.as_str() {
                    "z" => Ok(Val::Z(IntPoly::one(), 1)),
                    "w" => Ok(Val::W(IntPoly::x())),
                    "L" => Ok(Val::Z(lehmer(), 0)),
                    "LT" => Ok(Val::W(lt())),
                    "MT" => Ok(Val::W(mt())),
                    "NT" => Ok(Val::W(nt())),
                    "C" => {
                        let k = self.arg()?;
                        Ok(Val::Z(core(cyclotomic(k, CycloConvention::Squared))?, 0))
                    }
                    "CT" => {
                        let k = self.arg()?;
                        Ok(Val::W(core(cyclotomic_trace(k))?))
                    }
                    "R" => {
                        let i = self.arg()?;
                        Ok(Val::W(core(salem_trace_r(i as usize))?))
                    }
                    "LNF" => {
                        let i = self.arg()?;
                        Ok(Val::W(core(lnf(i as usize))?))
                    }
                    _ => Err(ParseError { pos: at, msg: format!("unknown atom '{name}'") }),
                }
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
        }
    }

    fn combine(&self, a: Val, b: Val, op: Op) -> Result<Val, ParseError> {
        use Val::*;
        Ok(match (a, b) {
            (Int(x), Int(y)) => Int(match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
            }),
            (W(p), W(q)) => W(op.apply(&p, &q)),
            (W(p), Int(n)) => W(op.apply(&p, &IntPoly::constant(n))),
            (Int(n), W(q)) => W(op.apply(&IntPoly::constant(n), &q)),
            (Z(p, s), Int(n)) => z_op(p, s, IntPoly::constant(n), 0, op),
            (Int(n), Z(q, t)) => z_op(IntPoly::constant(n), 0, q, t, op),
            (Z(p, s), Z(q, t)) => z_op(p, s, q, t, op),
            _ => return self.err("cannot mix z and w; lift w-side terms with '@z'"),
        })
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl Op {
    fn apply(self, p: &IntPoly, q: &IntPoly) -> IntPoly {
        match self {
            Op::Add => p + q,
            Op::Sub => p - q,
            Op::Mul => p * q,
        }
    }
}

fn z_op(p: IntPoly, s: i64, q: IntPoly, t: i64, op: Op) -> Val {
    if let Op::Mul = op {
        return laurent(&p * &q, s + t);
    }
    let m = s.min(t);
    let p = p.shift((s - m) as usize);
    let q = q.shift((t - m) as usize);
    laurent(op.apply(&p, &q), m)
}

/// Parse one polynomial. Constants are reported on the z-side.
pub fn parse_poly(text: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(match v {
        Val::Int(n) => Parsed { var: Variable::Z, poly: IntPoly::constant(n) },
        Val::W(poly) => Parsed { var: Variable::W, poly },
        Val::Z(poly, s) => Parsed { var: Variable::Z, poly: if s > 0 { poly.shift(s as usize) } else { poly } },
    })
}
