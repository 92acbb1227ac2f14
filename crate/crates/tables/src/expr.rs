//! Value expressions: the small language in which table entries, parameter
//! constraints, and symmetry maps are written.
//!
//! Grammar (precedence low to high): `+ -`, `* /`, unary `-`, `^`.
//! Atoms are integers, `q`, `s` (the field radical for twisted families),
//! character parameters `k1..k3`, class parameters `l1..l3`,
//! `zeta(modulus; exponent)`, `re(e)`, `conj(e)`, `gauss`, and
//! `case{d1 | f1: e1, ..., else: e}` selecting the first arm whose
//! divisibility test holds.

use crate::error::TableError;
use cyclo::{rat, Cyclotomic, Rational};
use num_traits::{ToPrimitive, Zero};
use std::fmt;

/// A parsed expression, kept together with its source string.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    src: String,
    node: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(u64),
    Q,
    S,
    /// A character parameter (`false`) or class parameter (`true`), 0-based.
    Var(bool, usize),
    Zeta(Box<Node>, Box<Node>),
    Re(Box<Node>),
    Conj(Box<Node>),
    Gauss,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
    Case(Vec<CaseArm>),
}

#[derive(Debug, Clone, PartialEq)]
struct CaseArm {
    /// `None` marks the `else` arm.
    pred: Option<(Node, Node)>,
    value: Node,
}

/// Everything needed to evaluate expressions at one prime power.
///
/// `qq` always holds the square of the defining parameter, so `q` evaluates
/// to an exact square root: rational for the untwisted families, a real
/// cyclotomic surd for the Suzuki and Ree ones.
pub struct EvalCtx {
    /// q^2 as a rational.
    pub qq: Rational,
    /// q itself when q^2 is a perfect square.
    pub rational_q: Option<Rational>,
    /// q as an exact cyclotomic number.
    pub sqrt_q: Cyclotomic,
    /// The radical sqrt(base) as a rational multiple of sqrt(qq), if any.
    s_quad: Option<Rational>,
    /// The radical sqrt(base) as a cyclotomic number.
    s_cyclo: Option<Cyclotomic>,
    /// The quadratic Gauss sum of F_q, for odd untwisted q.
    gauss: Option<Cyclotomic>,
    /// Character parameters bound during evaluation.
    pub k: Vec<i64>,
    /// Class parameters bound during evaluation.
    pub l: Vec<i64>,
}

impl EvalCtx {
    /// Context for an untwisted family at the prime power q0.
    pub fn plain(q0: u64) -> Result<Self, TableError> {
        let q = rat(q0 as i64);
        let gauss = cyclo::gauss_sum(q0).ok();
        Ok(EvalCtx {
            qq: &q * &q,
            rational_q: Some(q.clone()),
            sqrt_q: Cyclotomic::from_rational(q),
            s_quad: None,
            s_cyclo: None,
            gauss,
            k: Vec::new(),
            l: Vec::new(),
        })
    }

    /// Context for a twisted family: `qq` is an odd power of `base`
    /// (2 for Suzuki groups, 3 for Ree groups), and q = sqrt(qq).
    pub fn twisted(base: u8, qq: u64) -> Result<Self, TableError> {
        let (radical, m) = match base {
            2 | 3 => {
                let mut m = 0u32;
                let mut v = qq;
                let b = base as u64;
                while v % b == 0 {
                    v /= b;
                    m += 1;
                }
                if v != 1 || m % 2 == 0 {
                    return Err(TableError::BadQ(format!(
                        "{qq} is not an odd power of {base}"
                    )));
                }
                (base as u64, (m - 1) / 2)
            }
            _ => {
                return Err(TableError::BadQ(format!(
                    "unsupported radical base {base}"
                )))
            }
        };
        // sqrt(2) = zeta_8 + zeta_8^-1, sqrt(3) = zeta_12 + zeta_12^-1.
        let conductor = 4 * radical;
        let s = &cyclo::zeta(conductor, 1)? + &cyclo::zeta(conductor, -1)?;
        let scale = rat(radical.pow(m) as i64);
        let sqrt_q = s.scale(&scale);
        Ok(EvalCtx {
            qq: rat(qq as i64),
            rational_q: None,
            sqrt_q,
            s_quad: Some(rat(1) / scale),
            s_cyclo: Some(s),
            gauss: None,
            k: Vec::new(),
            l: Vec::new(),
        })
    }

    /// Bind parameters; the context is otherwise reused across evaluations.
    pub fn bind(&mut self, k: &[i64], l: &[i64]) {
        self.k.clear();
        self.k.extend_from_slice(k);
        self.l.clear();
        self.l.extend_from_slice(l);
    }
}

impl Expr {
    /// Parse an expression; byte positions in errors refer to `src`.
    pub fn parse(src: &str) -> Result<Expr, TableError> {
        let tokens = lex(src)?;
        let mut p = Parser {
            src,
            tokens,
            pos: 0,
        };
        let node = p.expr(0)?;
        if p.pos < p.tokens.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(Expr {
            src: src.to_string(),
            node,
        })
    }

    /// The original source text.
    #[must_use]
    pub fn src(&self) -> &str {
        &self.src
    }

    /// Evaluate to an exact cyclotomic number.
    pub fn eval(&self, ctx: &EvalCtx) -> Result<Cyclotomic, TableError> {
        eval_value(&self.node, ctx, &self.src)
    }

    /// Evaluate in integer position (moduli, linear forms, symmetry images).
    pub fn eval_int(&self, ctx: &EvalCtx) -> Result<i128, TableError> {
        let (a, b) = eval_quad(&self.node, ctx, &self.src)?;
        if !b.is_zero() {
            return Err(TableError::Eval(format!(
                "`{}` is irrational in integer position",
                self.src
            )));
        }
        if !a.is_integer() {
            return Err(TableError::Eval(format!(
                "`{}` evaluates to the non-integer {a}",
                self.src
            )));
        }
        a.to_integer().to_i128().ok_or_else(|| {
            TableError::Eval(format!("`{}` overflows an integer", self.src))
        })
    }

    /// True when any subexpression references a character or class parameter.
    #[must_use]
    pub fn has_params(&self) -> bool {
        let (k, l) = self.var_arity();
        k > 0 || l > 0
    }

    /// Smallest arities (k-count, l-count) under which every referenced
    /// parameter is bound.
    #[must_use]
    pub fn var_arity(&self) -> (usize, usize) {
        fn walk(n: &Node, k: &mut usize, l: &mut usize) {
            match n {
                Node::Var(false, i) => *k = (*k).max(i + 1),
                Node::Var(true, i) => *l = (*l).max(i + 1),
                Node::Num(_) | Node::Q | Node::S | Node::Gauss => {}
                Node::Zeta(a, b) | Node::Add(a, b) | Node::Sub(a, b)
                | Node::Mul(a, b) | Node::Div(a, b) => {
                    walk(a, k, l);
                    walk(b, k, l);
                }
                Node::Re(a) | Node::Conj(a) | Node::Neg(a) | Node::Pow(a, _) => {
                    walk(a, k, l);
                }
                Node::Case(arms) => {
                    for arm in arms {
                        if let Some((d, f)) = &arm.pred {
                            walk(d, k, l);
                            walk(f, k, l);
                        }
                        walk(&arm.value, k, l);
                    }
                }
            }
        }
        let (mut k, mut l) = (0, 0);
        walk(&self.node, &mut k, &mut l);
        (k, l)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

fn eval_value(node: &Node, ctx: &EvalCtx, src: &str) -> Result<Cyclotomic, TableError> {
    Ok(match node {
        Node::Num(v) => Cyclotomic::from_rational(rat(*v as i64)),
        Node::Q => ctx.sqrt_q.clone(),
        Node::S => ctx
            .s_cyclo
            .clone()
            .ok_or_else(|| TableError::Eval(format!("`s` outside a twisted family in `{src}`")))?,
        Node::Var(class, i) => {
            let v = lookup_var(*class, *i, ctx, src)?;
            Cyclotomic::from_int(v as i64)
        }
        Node::Zeta(m, e) => {
            let modulus = int_position(m, ctx, src)?;
            if modulus <= 0 {
                return Err(TableError::Eval(format!(
                    "zeta modulus {modulus} is not positive in `{src}`"
                )));
            }
            let exp = int_position(e, ctx, src)?;
            let r = exp.rem_euclid(modulus);
            cyclo::zeta(modulus as u64, r as i64)?
        }
        Node::Re(a) => eval_value(a, ctx, src)?.real_part(),
        Node::Conj(a) => eval_value(a, ctx, src)?.conj(),
        Node::Gauss => ctx.gauss.clone().ok_or_else(|| {
            TableError::Eval(format!("gauss sum unavailable at this q in `{src}`"))
        })?,
        Node::Neg(a) => -&eval_value(a, ctx, src)?,
        Node::Add(a, b) => &eval_value(a, ctx, src)? + &eval_value(b, ctx, src)?,
        Node::Sub(a, b) => &eval_value(a, ctx, src)? - &eval_value(b, ctx, src)?,
        Node::Mul(a, b) => &eval_value(a, ctx, src)? * &eval_value(b, ctx, src)?,
        Node::Div(a, b) => {
            let d = eval_value(b, ctx, src)?;
            eval_value(a, ctx, src)?.div(&d)?
        }
        Node::Pow(a, e) => eval_value(a, ctx, src)?.pow(*e),
        Node::Case(arms) => {
            for arm in arms {
                match &arm.pred {
                    Some((d, f)) => {
                        let d = int_position(d, ctx, src)?;
                        if d == 0 {
                            return Err(TableError::Eval(format!(
                                "zero divisor in case predicate in `{src}`"
                            )));
                        }
                        let v = int_position(f, ctx, src)?;
                        if v.rem_euclid(d.abs()) == 0 {
                            return eval_value(&arm.value, ctx, src);
                        }
                    }
                    None => return eval_value(&arm.value, ctx, src),
                }
            }
            return Err(TableError::Eval(format!(
                "no case arm matched in `{src}`"
            )));
        }
    })
}

fn int_position(node: &Node, ctx: &EvalCtx, src: &str) -> Result<i128, TableError> {
    let (a, b) = eval_quad(node, ctx, src)?;
    if !b.is_zero() {
        return Err(TableError::Eval(format!(
            "irrational value in integer position in `{src}`"
        )));
    }
    if !a.is_integer() {
        return Err(TableError::Eval(format!(
            "non-integer value {a} in integer position in `{src}`"
        )));
    }
    a.to_integer()
        .to_i128()
        .ok_or_else(|| TableError::Eval(format!("integer overflow in `{src}`")))
}

fn lookup_var(class: bool, i: usize, ctx: &EvalCtx, src: &str) -> Result<i128, TableError> {
    let slot = if class { &ctx.l } else { &ctx.k };
    slot.get(i).copied().map(i128::from).ok_or_else(|| {
        let name = if class { "l" } else { "k" };
        TableError::Eval(format!("unbound parameter {name}{} in `{src}`", i + 1))
    })
}

/// Evaluate as an element a + b sqrt(qq) of the real quadratic field.
fn eval_quad(
    node: &Node,
    ctx: &EvalCtx,
    src: &str,
) -> Result<(Rational, Rational), TableError> {
    let zero = Rational::zero;
    Ok(match node {
        Node::Num(v) => (rat(*v as i64), zero()),
        Node::Q => match &ctx.rational_q {
            Some(q) => (q.clone(), zero()),
            None => (zero(), rat(1)),
        },
        Node::S => match &ctx.s_quad {
            Some(c) => (zero(), c.clone()),
            None => {
                return Err(TableError::Eval(format!(
                    "`s` outside a twisted family in `{src}`"
                )))
            }
        },
        Node::Var(class, i) => (
            Rational::from_integer(lookup_var(*class, *i, ctx, src)?.into()),
            zero(),
        ),
        Node::Neg(a) => {
            let (x, y) = eval_quad(a, ctx, src)?;
            (-x, -y)
        }
        Node::Add(a, b) => {
            let (x1, y1) = eval_quad(a, ctx, src)?;
            let (x2, y2) = eval_quad(b, ctx, src)?;
            (x1 + x2, y1 + y2)
        }
        Node::Sub(a, b) => {
            let (x1, y1) = eval_quad(a, ctx, src)?;
            let (x2, y2) = eval_quad(b, ctx, src)?;
            (x1 - x2, y1 - y2)
        }
        Node::Mul(a, b) => {
            let (x1, y1) = eval_quad(a, ctx, src)?;
            let (x2, y2) = eval_quad(b, ctx, src)?;
            (&x1 * &x2 + &(&y1 * &y2) * &ctx.qq, &x1 * &y2 + &y1 * &x2)
        }
        Node::Div(a, b) => {
            let (x1, y1) = eval_quad(a, ctx, src)?;
            let (x2, y2) = eval_quad(b, ctx, src)?;
            // Multiply by the conjugate: the norm x2^2 - y2^2 qq is nonzero
            // unless the denominator itself is zero.
            let norm = &(&x2 * &x2) - &(&(&y2 * &y2) * &ctx.qq);
            if norm.is_zero() {
                return Err(TableError::Eval(format!("division by zero in `{src}`")));
            }
            let nx = &(&x1 * &x2) - &(&(&y1 * &y2) * &ctx.qq);
            let ny = &(&y1 * &x2) - &(&x1 * &y2);
            (nx / norm.clone(), ny / norm)
        }
        Node::Pow(a, e) => {
            let (mut x, mut y) = (rat(1), zero());
            let base = eval_quad(a, ctx, src)?;
            for _ in 0..*e {
                let nx = &(&x * &base.0) + &(&(&y * &base.1) * &ctx.qq);
                let ny = &(&x * &base.1) + &(&y * &base.0);
                x = nx;
                y = ny;
            }
            (x, y)
        }
        Node::Case(arms) => {
            for arm in arms {
                match &arm.pred {
                    Some((d, f)) => {
                        let d = int_position(d, ctx, src)?;
                        if d == 0 {
                            return Err(TableError::Eval(format!(
                                "zero divisor in case predicate in `{src}`"
                            )));
                        }
                        let v = int_position(f, ctx, src)?;
                        if v.rem_euclid(d.abs()) == 0 {
                            return eval_quad(&arm.value, ctx, src);
                        }
                    }
                    None => return eval_quad(&arm.value, ctx, src),
                }
            }
            return Err(TableError::Eval(format!(
                "no case arm matched in `{src}`"
            )));
        }
        Node::Zeta(..) | Node::Re(_) | Node::Conj(_) | Node::Gauss => {
            return Err(TableError::Eval(format!(
                "cyclotomic subexpression in integer position in `{src}`"
            )))
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Q,
    S,
    Var(bool, usize),
    Zeta,
    Re,
    Conj,
    Gauss,
    Case,
    Else,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Semi,
    Colon,
    Comma,
    Bar,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TableError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b';' => Tok::Semi,
            b':' => Tok::Colon,
            b',' => Tok::Comma,
            b'|' => Tok::Bar,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: u64 = src[start..i].parse().map_err(|_| TableError::Parse {
                    pos: start,
                    msg: "integer literal overflows".into(),
                })?;
                out.push((start, Tok::Int(v)));
                continue;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit())
                {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = match word {
                    "q" => Tok::Q,
                    "s" => Tok::S,
                    "zeta" => Tok::Zeta,
                    "re" => Tok::Re,
                    "conj" => Tok::Conj,
                    "gauss" => Tok::Gauss,
                    "case" => Tok::Case,
                    "else" => Tok::Else,
                    "k1" | "k2" | "k3" => {
                        Tok::Var(false, (word.as_bytes()[1] - b'1') as usize)
                    }
                    "l1" | "l2" | "l3" => {
                        Tok::Var(true, (word.as_bytes()[1] - b'1') as usize)
                    }
                    _ => {
                        return Err(TableError::Parse {
                            pos: start,
                            msg: format!("unknown name `{word}`"),
                        })
                    }
                };
                out.push((start, tok));
                continue;
            }
            other => {
                return Err(TableError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> TableError {
        let pos = self
            .tokens
            .get(self.pos)
            .map_or(self.src.len(), |(p, _)| *p);
        TableError::Parse {
            pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), TableError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    /// Precedence climbing: level 0 is `+ -`, level 1 is `* /`.
    fn expr(&mut self, level: u8) -> Result<Node, TableError> {
        if level >= 2 {
            return self.unary();
        }
        let mut lhs = self.expr(level + 1)?;
        loop {
            let op = match (level, self.peek()) {
                (0, Some(Tok::Plus)) => Tok::Plus,
                (0, Some(Tok::Minus)) => Tok::Minus,
                (1, Some(Tok::Star)) => Tok::Star,
                (1, Some(Tok::Slash)) => Tok::Slash,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.expr(level + 1)?;
            lhs = match op {
                Tok::Plus => Node::Add(Box::new(lhs), Box::new(rhs)),
                Tok::Minus => Node::Sub(Box::new(lhs), Box::new(rhs)),
                Tok::Star => Node::Mul(Box::new(lhs), Box::new(rhs)),
                _ => Node::Div(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, TableError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, TableError> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(e)) => {
                    let e = u32::try_from(e)
                        .map_err(|_| self.err("exponent too large"))?;
                    return Ok(Node::Pow(Box::new(base), e));
                }
                _ => return Err(self.err("expected integer exponent after `^`")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, TableError> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(Node::Num(v)),
            Some(Tok::Q) => Ok(Node::Q),
            Some(Tok::S) => Ok(Node::S),
            Some(Tok::Var(class, i)) => Ok(Node::Var(class, i)),
            Some(Tok::Gauss) => Ok(Node::Gauss),
            Some(Tok::LParen) => {
                let inner = self.expr(0)?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Zeta) => {
                self.expect(&Tok::LParen, "`(` after zeta")?;
                let m = self.expr(0)?;
                self.expect(&Tok::Semi, "`;` between modulus and exponent")?;
                let e = self.expr(0)?;
                self.expect(&Tok::RParen, "`)` closing zeta")?;
                Ok(Node::Zeta(Box::new(m), Box::new(e)))
            }
            Some(Tok::Re) => {
                self.expect(&Tok::LParen, "`(` after re")?;
                let a = self.expr(0)?;
                self.expect(&Tok::RParen, "`)` closing re")?;
                Ok(Node::Re(Box::new(a)))
            }
            Some(Tok::Conj) => {
                self.expect(&Tok::LParen, "`(` after conj")?;
                let a = self.expr(0)?;
                self.expect(&Tok::RParen, "`)` closing conj")?;
                Ok(Node::Conj(Box::new(a)))
            }
            Some(Tok::Case) => {
                self.expect(&Tok::LBrace, "`{` after case")?;
                let mut arms = Vec::new();
                loop {
                    if self.peek() == Some(&Tok::Else) {
                        self.pos += 1;
                        self.expect(&Tok::Colon, "`:` after else")?;
                        let value = self.expr(0)?;
                        arms.push(CaseArm { pred: None, value });
                    } else {
                        let d = self.expr(0)?;
                        self.expect(&Tok::Bar, "`|` in case predicate")?;
                        let f = self.expr(0)?;
                        self.expect(&Tok::Colon, "`:` after case predicate")?;
                        let value = self.expr(0)?;
                        arms.push(CaseArm {
                            pred: Some((d, f)),
                            value,
                        });
                    }
                    match self.next() {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RBrace) => break,
                        _ => return Err(self.err("expected `,` or `}` in case")),
                    }
                }
                if arms.is_empty() {
                    return Err(self.err("empty case expression"));
                }
                Ok(Node::Case(arms))
            }
            _ => Err(self.err("expected an expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx5() -> EvalCtx {
        EvalCtx::plain(5).unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        let e = Expr::parse("2+3*4^2-1").unwrap();
        assert_eq!(e.eval_int(&ctx5()).unwrap(), 49);
        let e = Expr::parse("-(q-1)/2").unwrap();
        assert_eq!(e.eval_int(&ctx5()).unwrap(), -2);
    }

    #[test]
    fn parameters_bind() {
        let mut ctx = ctx5();
        ctx.bind(&[3, 0, 0], &[2, 7, 0]);
        let e = Expr::parse("(q+1)*k1*l1 - l2").unwrap();
        assert_eq!(e.eval_int(&ctx).unwrap(), 6 * 6 - 7);
        assert!(e.has_params());
        assert!(!Expr::parse("q^2-1").unwrap().has_params());
    }

    #[test]
    fn zeta_reduces_mod_conductor() {
        let mut ctx = ctx5();
        ctx.bind(&[3], &[4]);
        let a = Expr::parse("zeta(q-1; k1*l1)").unwrap().eval(&ctx).unwrap();
        let b = cyclo::zeta(4, 12).unwrap();
        assert_eq!(a, b);
        // zeta(2; (q-1)/2) is the sign (-1)^((q-1)/2).
        let sign = Expr::parse("zeta(2; (q-1)/2)").unwrap().eval(&ctx).unwrap();
        assert_eq!(sign.as_int().unwrap(), 1.into());
    }

    #[test]
    fn case_selects_first_match() {
        let mut ctx = ctx5();
        ctx.bind(&[6], &[]);
        let e = Expr::parse("case{2|k1: 10, 3|k1: 20, else: 30}").unwrap();
        assert_eq!(e.eval_int(&ctx).unwrap(), 10);
        ctx.bind(&[9], &[]);
        assert_eq!(e.eval_int(&ctx).unwrap(), 20);
        ctx.bind(&[7], &[]);
        assert_eq!(e.eval_int(&ctx).unwrap(), 30);
    }

    #[test]
    fn twisted_context_handles_surds() {
        let ctx = EvalCtx::twisted(2, 8).unwrap();
        // q = 2 sqrt 2, so q^2 = 8 and s*q = 4.
        let e = Expr::parse("q^2").unwrap();
        assert_eq!(e.eval_int(&ctx).unwrap(), 8);
        let e = Expr::parse("s*q").unwrap();
        assert_eq!(e.eval_int(&ctx).unwrap(), 4);
        let e = Expr::parse("s*q/2*(q^2-1)").unwrap();
        assert_eq!(e.eval_int(&ctx).unwrap(), 14);
        // q alone is irrational: fine as a value, an error in integer position.
        let v = Expr::parse("q").unwrap().eval(&ctx).unwrap();
        assert!(!v.is_real() || v.as_rational().is_none());
        assert!(Expr::parse("q").unwrap().eval_int(&ctx).is_err());
    }

    #[test]
    fn conj_and_re() {
        let ctx = ctx5();
        let z = Expr::parse("zeta(5; 1)").unwrap().eval(&ctx).unwrap();
        let zc = Expr::parse("conj(zeta(5; 1))").unwrap().eval(&ctx).unwrap();
        assert_eq!(zc, z.conj());
        let r = Expr::parse("re(zeta(5; 1))").unwrap().eval(&ctx).unwrap();
        assert_eq!(r, z.real_part());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match Expr::parse("1 + foo") {
            Err(TableError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(Expr::parse("zeta(5: 1)").is_err());
        assert!(Expr::parse("2 ^ q").is_err());
        assert!(Expr::parse("1 + ").is_err());
    }
}
