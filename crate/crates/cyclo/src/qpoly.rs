//! Polynomials in a group-order parameter q with coefficients in Q or in
//! the real quadratic field Q(sqrt(d)), d in {2, 3}.
//!
//! Degrees of generic characters are polynomials of this kind: ordinary
//! families need only rational coefficients (base 1), while the families
//! defined over fields of size q^2 = 2^(2m+1) or q^2 = 3^(2m+1) need
//! sqrt(2) or sqrt(3). Evaluation substitutes a rational value for q and
//! demands a rational result, reporting irrationality exactly.

use crate::{rat, CycloError, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A coefficient a + b*sqrt(d); the base d is carried by the polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub a: Rational,
    pub b: Rational,
}

impl Quad {
    #[must_use]
    pub fn rational(a: Rational) -> Self {
        Quad {
            a,
            b: Rational::zero(),
        }
    }

    #[must_use]
    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, o: &Quad) -> Quad {
        Quad {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    fn neg(&self) -> Quad {
        Quad {
            a: -&self.a,
            b: -&self.b,
        }
    }

    fn mul(&self, o: &Quad, d: u8) -> Quad {
        let d = rat(i64::from(d));
        Quad {
            a: &self.a * &o.a + &(&self.b * &o.b) * &d,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    fn inv(&self, d: u8) -> Result<Quad, CycloError> {
        // (a + b sqrt d)^-1 = (a - b sqrt d) / (a^2 - d b^2); the norm is
        // nonzero for nonzero elements because d is not a rational square.
        let d = rat(i64::from(d));
        let norm = &self.a * &self.a - &(&self.b * &self.b) * &d;
        if norm.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        Ok(Quad {
            a: &self.a / &norm,
            b: -&self.b / &norm,
        })
    }
}

/// A polynomial in q over Q(sqrt(base)); base 1 means rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoly {
    base: u8,
    coeffs: BTreeMap<u32, Quad>,
}

impl QPoly {
    /// The zero polynomial (at base 1; base promotes on combination).
    #[must_use]
    pub fn zero() -> Self {
        QPoly {
            base: 1,
            coeffs: BTreeMap::new(),
        }
    }

    /// A constant rational polynomial.
    #[must_use]
    pub fn constant(r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, Quad::rational(r));
        }
        QPoly { base: 1, coeffs }
    }

    /// The monomial q^k.
    #[must_use]
    pub fn q_power(k: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, Quad::rational(rat(1)));
        QPoly { base: 1, coeffs }
    }

    /// The generator sqrt(d) as a constant, at base d.
    pub fn sqrt_base(d: u8) -> Result<Self, CycloError> {
        if d != 2 && d != 3 {
            return Err(CycloError::Parse(format!(
                "sqrt base must be 2 or 3, got {d}"
            )));
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(
            0,
            Quad {
                a: Rational::zero(),
                b: rat(1),
            },
        );
        Ok(QPoly { base: d, coeffs })
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[must_use]
    pub fn base(&self) -> u8 {
        self.base
    }

    /// Whether every coefficient is rational (no sqrt part).
    #[must_use]
    pub fn is_rational_poly(&self) -> bool {
        self.coeffs.values().all(|c| c.b.is_zero())
    }

    fn normalized(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        if self.coeffs.values().all(|c| c.b.is_zero()) {
            self.base = 1;
        }
        self
    }

    /// Unify bases: pure-rational polynomials adopt the other side's base.
    fn joint_base(&self, o: &QPoly) -> Result<u8, CycloError> {
        match (self.base, o.base) {
            (a, b) if a == b => Ok(a),
            (1, b) => Ok(b),
            (a, 1) => Ok(a),
            (a, b) => Err(CycloError::BaseMismatch(a, b)),
        }
    }

    pub fn add(&self, o: &QPoly) -> Result<QPoly, CycloError> {
        let base = self.joint_base(o)?;
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &o.coeffs {
            let cur = coeffs.entry(*k).or_insert_with(Quad::zero);
            *cur = cur.add(c);
        }
        Ok(QPoly { base, coeffs }.normalized())
    }

    #[must_use]
    pub fn neg(&self) -> QPoly {
        QPoly {
            base: self.base,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &QPoly) -> Result<QPoly, CycloError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QPoly) -> Result<QPoly, CycloError> {
        let base = self.joint_base(o)?;
        let mut coeffs: BTreeMap<u32, Quad> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                let cur = coeffs.entry(i + j).or_insert_with(Quad::zero);
                *cur = cur.add(&a.mul(b, base));
            }
        }
        Ok(QPoly { base, coeffs }.normalized())
    }

    /// Divide by a constant polynomial.
    pub fn div(&self, o: &QPoly) -> Result<QPoly, CycloError> {
        let base = self.joint_base(o)?;
        if o.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if o.coeffs.len() != 1 || !o.coeffs.contains_key(&0) {
            return Err(CycloError::Parse(
                "division only by constants".to_string(),
            ));
        }
        let inv = o.coeffs[&0].inv(base)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (*k, c.mul(&inv, base)))
            .collect();
        Ok(QPoly { base, coeffs }.normalized())
    }

    #[must_use]
    pub fn pow(&self, mut k: u32) -> QPoly {
        let mut acc = QPoly::constant(rat(1));
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b).expect("same base");
            }
            b = b.mul(&b).expect("same base");
            k >>= 1;
        }
        acc
    }

    /// Evaluate at the positive real q = sqrt(q_squared), demanding a
    /// rational result. The argument is always q^2 so that families living
    /// over fields of non-square size (q^2 = 2^(2m+1), 3^(2m+1)) and
    /// ordinary families share one entry point.
    pub fn eval(&self, q_squared: &Rational) -> Result<Rational, CycloError> {
        if !q_squared.is_positive() {
            return Err(CycloError::IrrationalValue(format!(
                "q^2 must be positive, got {q_squared}"
            )));
        }
        let irr = |what: &str| {
            CycloError::IrrationalValue(format!(
                "{self} at q^2 = {q_squared} has a residual {what} part"
            ))
        };
        if let Some(q) = sqrt_exact(q_squared) {
            // q itself is rational; only the sqrt(base) part must cancel.
            let mut rational = Rational::zero();
            let mut radical = Rational::zero();
            for (k, c) in &self.coeffs {
                let qk = pow_rat(&q, *k);
                rational += &c.a * &qk;
                radical += &c.b * &qk;
            }
            return if radical.is_zero() {
                Ok(rational)
            } else {
                Err(irr("sqrt"))
            };
        }
        let d = rat(i64::from(self.base));
        if self.base > 1 {
            if let Some(c) = sqrt_exact(&(q_squared / &d)) {
                // q = c * sqrt(d): q^k = c^k d^(k/2) for even k and
                // c^k d^((k-1)/2) sqrt(d) for odd k.
                let mut rational = Rational::zero();
                let mut radical = Rational::zero();
                for (k, coef) in &self.coeffs {
                    let ck = pow_rat(&c, *k);
                    if k % 2 == 0 {
                        let dk = pow_rat(&d, k / 2);
                        rational += &coef.a * &ck * &dk;
                        radical += &coef.b * &ck * &dk;
                    } else {
                        let dk = pow_rat(&d, (k - 1) / 2);
                        radical += &coef.a * &ck * &dk;
                        rational += &coef.b * &ck * &dk * &d;
                    }
                }
                return if radical.is_zero() {
                    Ok(rational)
                } else {
                    Err(irr("sqrt"))
                };
            }
        }
        // q = sqrt(q^2) is an irrational radical independent of sqrt(base):
        // only even powers with rational coefficients can contribute.
        let mut rational = Rational::zero();
        for (k, c) in &self.coeffs {
            if k % 2 == 0 && c.b.is_zero() {
                rational += &c.a * pow_rat(q_squared, k / 2);
            } else if !c.is_zero() {
                return Err(irr("radical"));
            }
        }
        Ok(rational)
    }

    /// Parse the expression grammar: integers, `q`, `s` (sqrt of the base),
    /// `+ - * / ^` and parentheses; `*` is required between factors.
    pub fn parse(src: &str, base: u8) -> Result<QPoly, CycloError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            base,
        };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(poly)
    }
}

fn pow_rat(r: &Rational, mut k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut b = r.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        k >>= 1;
    }
    acc
}

/// Exact square root of a non-negative rational, if one exists.
fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    let cand = Rational::new(num, den);
    (&cand * &cand == *r).then_some(cand)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    base: u8,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> CycloError {
        CycloError::Parse(format!(
            "{msg} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
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

    fn expr(&mut self) -> Result<QPoly, CycloError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, CycloError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QPoly, CycloError> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.uint()?;
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<QPoly, CycloError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(QPoly::q_power(1))
            }
            Some(b's') => {
                self.pos += 1;
                if self.base == 1 {
                    return Err(self.err("'s' needs a quadratic base"));
                }
                QPoly::sqrt_base(self.base)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.uint()?;
                Ok(QPoly::constant(Rational::from_integer(k.into())))
            }
            _ => Err(self.err("expected an atom")),
        }
    }

    fn uint(&mut self) -> Result<u32, CycloError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("number out of range"))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            let (lead, body) = format_quad(c);
            if first {
                if lead {
                    write!(f, "-")?;
                }
                first = false;
            } else if lead {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_unit = body == "1";
            if *k == 0 {
                write!(f, "{body}")?;
            } else {
                if !is_unit {
                    write!(f, "{body}*")?;
                }
                write!(f, "q")?;
                if *k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Render a coefficient as (is_negative, magnitude text). Mixed a + b*s
/// coefficients render parenthesized and are treated as positive.
fn format_quad(c: &Quad) -> (bool, String) {
    if c.b.is_zero() {
        (c.a.is_negative(), format!("{}", c.a.abs()))
    } else if c.a.is_zero() {
        let mag = c.b.abs();
        let body = if mag.is_one() {
            "s".to_string()
        } else {
            format!("{mag}*s")
        };
        (c.b.is_negative(), body)
    } else {
        let b_mag = c.b.abs();
        let b_body = if b_mag.is_one() {
            "s".to_string()
        } else {
            format!("{b_mag}*s")
        };
        let sign = if c.b.is_negative() { "-" } else { "+" };
        (false, format!("({}{}{})", c.a, sign, b_body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn p(src: &str) -> QPoly {
        QPoly::parse(src, 1).unwrap()
    }

    fn p2(src: &str) -> QPoly {
        QPoly::parse(src, 2).unwrap()
    }

    #[test]
    fn parse_and_eval_rational() {
        let f = p("q^2+q+1");
        assert_eq!(f.eval(&rat(9)).unwrap(), rat(13));
        let g = p("(q-1)*(q+1)/2");
        assert_eq!(g.eval(&rat(25)).unwrap(), rat(12));
        assert_eq!(p("q^3-q").eval(&rat(49)).unwrap(), rat(336));
    }

    #[test]
    fn eval_takes_q_squared() {
        // The argument is q^2: plain q at q^2 = 9 gives 3.
        assert_eq!(p("q").eval(&rat(9)).unwrap(), rat(3));
        // Odd powers at a non-square q^2 are irrational.
        assert!(p("q").eval(&rat(8)).is_err());
        // Even powers survive any positive q^2.
        assert_eq!(p("q^4-q^2").eval(&rat(8)).unwrap(), rat(56));
        assert!(p("q").eval(&rat(-4)).is_err());
    }

    #[test]
    fn quadratic_base_eval() {
        // (s*q/2)*(q^2-1) at q^2 = 8 (q = 2 sqrt 2): sqrt2*2*sqrt2/2 * 7 = 14.
        let f = p2("(s*q/2)*(q^2-1)");
        assert_eq!(f.eval(&rat(8)).unwrap(), rat(14));
        assert_eq!(p2("q^4").eval(&rat(8)).unwrap(), rat(64));
        // q^2 - s*q + 1 at q^2 = 8: 8 - 4 + 1 = 5.
        assert_eq!(p2("q^2-s*q+1").eval(&rat(8)).unwrap(), rat(5));
        // A residual radical part is an error, not a truncation.
        assert!(p2("s*q^2").eval(&rat(8)).is_err());
        // At a rational q the sqrt(2) of an s-coefficient cannot cancel.
        assert!(p2("s*q").eval(&rat(9)).is_err());
        assert_eq!(p2("q").eval(&rat(9)).unwrap(), rat(3));
    }

    #[test]
    fn base_mixing() {
        let a = p("q+1");
        let b = p2("s*q");
        assert_eq!(a.mul(&b).unwrap().base(), 2);
        let c = QPoly::parse("s", 3).unwrap();
        assert!(b.mul(&c).is_err());
        // s*s collapses to the rational 2, and the base drops back to 1.
        assert_eq!(p2("s*s"), QPoly::constant(rat(2)));
        assert_eq!(p2("s*s").base(), 1);
    }

    #[test]
    fn arithmetic_identities() {
        let a = p("q^2-1");
        let b = p("q+1");
        let c = p("q-1");
        assert_eq!(b.mul(&c).unwrap(), a);
        assert_eq!(a.sub(&a).unwrap(), QPoly::zero());
        assert_eq!(a.div(&p("2")).unwrap().eval(&rat(9)).unwrap(), rat(4));
        assert!(a.div(&b).is_err());
        assert_eq!(p("q").pow(3), p("q^3"));
    }

    #[test]
    fn fractional_constants() {
        let f = p("(q-1)/2");
        assert_eq!(f.eval(&rat(49)).unwrap(), rat(3));
        assert_eq!(f.eval(&rat(81)).unwrap(), rat(4));
        let half = QPoly::constant(ratio(1, 2));
        assert_eq!(p("1/2"), half);
    }

    #[test]
    fn display_round_trips_through_parse() {
        for src in ["q^3 - q", "2*q^2 + q - 3", "(q-1)/2", "q^6"] {
            let f = p(src);
            assert_eq!(QPoly::parse(&f.to_string(), 1).unwrap(), f);
        }
        for src in ["s*q^3 - q", "q^2 - s*q + 1", "(s*q/2)*(q^2-1)"] {
            let f = p2(src);
            assert_eq!(QPoly::parse(&f.to_string(), 2).unwrap(), f);
        }
    }

    #[test]
    fn parse_errors_are_located() {
        assert!(QPoly::parse("q +", 1).is_err());
        assert!(QPoly::parse("(q", 1).is_err());
        assert!(QPoly::parse("s", 1).is_err());
        assert!(QPoly::parse("q q", 1).is_err());
        assert!(QPoly::parse("q^-1", 1).is_err());
    }
}
