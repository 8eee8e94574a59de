//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{ExtScalar, Field, Scalar};

/// Ascending coefficients `p0, p1, ..., pn`, trimmed so the last one is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Polynomial {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.in_field(&field)));
        Polynomial { field, coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Polynomial {
        Polynomial::new(
            field.clone(),
            coeffs.iter().map(|&c| Scalar::from_int(field, c)).collect(),
        )
    }

    pub fn zero(field: &Field) -> Polynomial {
        Polynomial::new(field.clone(), Vec::new())
    }

    pub fn constant(c: Scalar) -> Polynomial {
        Polynomial::new(c.field(), vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: Scalar, k: usize) -> Polynomial {
        let field = c.field();
        let mut coeffs = vec![Scalar::zero(&field); k];
        coeffs.push(c);
        Polynomial::new(field, coeffs)
    }

    pub fn x(field: &Field) -> Polynomial {
        Polynomial::monomial(Scalar::one(field), 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.field))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> Scalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.field))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Polynomial::new(self.field.clone(), coeffs)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.field.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let mut out = vec![Scalar::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.field.clone(), out)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::new(self.field.clone(), self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv().expect("nonzero leading coefficient"))
    }

    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().inv()?;
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return Ok((Polynomial::zero(&self.field), self.clone()));
        }
        let mut quot = vec![Scalar::zero(&self.field); n - dd];
        for k in (dd..n).rev() {
            let c = &rem[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + i] = &rem[k - dd + i] - &(&c * d);
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((
            Polynomial::new(self.field.clone(), quot),
            Polynomial::new(self.field.clone(), rem),
        ))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` not normalised.
    pub fn ext_gcd(&self, other: &Polynomial) -> Result<(Polynomial, Polynomial, Polynomial)> {
        let one = Polynomial::constant(Scalar::one(&self.field));
        let zero = Polynomial::zero(&self.field);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        Ok((r0, s0, t0))
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, exp: &BigInt, modulus: &Polynomial) -> Result<Polynomial> {
        let mut acc = Polynomial::constant(Scalar::one(&self.field)).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus)?;
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Horner evaluation; `at` may live in an extension of the coefficient field.
    pub fn eval(&self, at: &Scalar) -> Result<Scalar> {
        let field = at.field();
        let mut acc = Scalar::zero(&field);
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(at)?.try_add(&c.coerce(&field)?)?;
        }
        Ok(acc)
    }

    /// The same polynomial with coefficients coerced into `field`.
    pub fn embed(&self, field: &Field) -> Result<Polynomial> {
        Ok(Polynomial::new(
            field.clone(),
            self.coeffs
                .iter()
                .map(|c| c.coerce(field))
                .collect::<Result<_>>()?,
        ))
    }

    /// Synthetic division by `x - root`; fails unless `root` is a root.
    pub fn quotient_by_linear(&self, root: &Scalar) -> Result<Polynomial> {
        let field = root.field();
        let p = self.embed(&field)?;
        let n = p.coeffs.len();
        if n == 0 {
            return Ok(p);
        }
        // b_{n-2} = a_{n-1}, b_{k-1} = a_k + root·b_k, remainder a_0 + root·b_0
        let mut out = vec![Scalar::zero(&field); n - 1];
        let mut carry = Scalar::zero(&field);
        for k in (1..n).rev() {
            carry = &p.coeffs[k] + &(root * &carry);
            out[k - 1] = carry.clone();
        }
        let remainder = &p.coeffs[0] + &(root * &carry);
        if !remainder.is_zero() {
            return Err(Error::NotARoot(root.to_string()));
        }
        Ok(Polynomial::new(field, out))
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            let body = match abs.as_base() {
                Some(b) if matches!(abs, Scalar::Ext(_)) => b.render("xbar"),
                None => format!("({})", abs.render("xbar")),
                _ => abs.render("xbar"),
            };
            let abs = abs.as_base().unwrap_or(abs);
            if negative {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&body);
            } else if !abs.is_one() {
                out.push_str(&body);
                out.push_str(&power);
            } else {
                out.push_str(&power);
            }
        }
        out
    }

    /// Parses `[coef][x[^k]]` terms joined by signs, whitespace ignored.
    pub fn parse(text: &str, field: &Field) -> Result<Polynomial> {
        Polynomial::parse_in(text, field, "x")
    }

    pub fn parse_in(text: &str, field: &Field, var: &str) -> Result<Polynomial> {
        PolyParser::new(text, var).parse(field)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

/// Parses a polynomial in `var` and reduces it into an extension element.
pub fn parse_ext_scalar(text: &str, field: &Field) -> Result<Scalar> {
    match field {
        Field::Extension(ext) => {
            let base = Field::Base(ext.base().clone());
            let p = Polynomial::parse_in(text, &base, "xbar")?;
            Ok(Scalar::Ext(ExtScalar::from_polynomial(ext, &p)?))
        }
        Field::Base(_) => {
            let p = Polynomial::parse_in(text, field, "xbar")?;
            match p.degree() {
                None => Ok(Scalar::zero(field)),
                Some(0) => Ok(p.coeffs[0].clone()),
                Some(_) => Err(Error::syntax(1, 1, "xbar is not defined over a base field")),
            }
        }
    }
}

struct PolyParser {
    // (column, char) with whitespace removed
    chars: Vec<(usize, char)>,
    pos: usize,
    var: Vec<char>,
}

impl PolyParser {
    fn new(text: &str, var: &str) -> PolyParser {
        PolyParser {
            chars: text
                .chars()
                .enumerate()
                .filter(|(_, c)| !c.is_whitespace())
                .map(|(i, c)| (i + 1, c))
                .collect(),
            pos: 0,
            var: var.chars().collect(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or_else(|| self.chars.last().map_or(1, |(i, _)| i + 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(1, self.column(), msg)
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            self.chars[start..self.pos]
                .iter()
                .map(|(_, c)| *c)
                .collect::<String>()
                .parse()
                .expect("ascii digits")
        })
    }

    fn at_var(&self) -> bool {
        self.var
            .iter()
            .enumerate()
            .all(|(i, v)| self.chars.get(self.pos + i).map(|(_, c)| c) == Some(v))
            // `x` must not swallow the start of `xbar`
            && !self
                .chars
                .get(self.pos + self.var.len())
                .is_some_and(|(_, c)| c.is_ascii_alphanumeric())
    }

    fn parse(mut self, field: &Field) -> Result<Polynomial> {
        if self.chars.is_empty() {
            return Err(self.err("empty polynomial"));
        }
        let mut acc: Vec<Scalar> = Vec::new();
        let mut first = true;
        while self.pos < self.chars.len() {
            let mut negative = false;
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    negative = true;
                    self.pos += 1
                }
                _ if first => {}
                _ => return Err(self.err("expected `+` or `-`")),
            }
            first = false;
            let (coef, degree) = self.term(field)?;
            let coef = if negative { -coef } else { coef };
            if acc.len() <= degree {
                acc.resize(degree + 1, Scalar::zero(field));
            }
            acc[degree] = &acc[degree] + &coef;
        }
        Ok(Polynomial::new(field.clone(), acc))
    }

    fn term(&mut self, field: &Field) -> Result<(Scalar, usize)> {
        let col = self.column();
        let coef = match self.digits() {
            Some(num) => {
                let den = if self.peek() == Some('/') {
                    self.pos += 1;
                    self.digits().ok_or_else(|| self.err("expected denominator"))?
                } else {
                    BigInt::from(1)
                };
                if den == BigInt::from(0) {
                    return Err(Error::NonInvertibleDenominator("0".into()));
                }
                Some(Scalar::from_rational(field, &BigRational::new(num, den))?)
            }
            None => None,
        };
        if coef.is_some() && self.peek() == Some('*') {
            self.pos += 1;
            if !self.at_var() {
                return Err(self.err("expected variable after `*`"));
            }
        }
        if !self.at_var() {
            return coef
                .map(|c| (c, 0))
                .ok_or_else(|| Error::syntax(1, col, "expected coefficient or variable"));
        }
        self.pos += self.var.len();
        let degree = if self.peek() == Some('^') {
            self.pos += 1;
            let d = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            usize::try_from(d).map_err(|_| self.err("exponent too large"))?
        } else {
            1
        };
        Ok((coef.unwrap_or_else(|| Scalar::one(field)), degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseField;

    fn q() -> Field {
        Field::RATIONAL
    }

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn parses_the_worked_polynomials() {
        let p = Polynomial::parse("1/2x^2-1", &q()).unwrap();
        assert_eq!(p.coeffs(), &[rat(-1, 1), rat(0, 1), rat(1, 2)]);
        let q3 = Polynomial::parse("x^3-3x-1", &q()).unwrap();
        assert_eq!(q3.coeffs(), &[rat(-1, 1), rat(-3, 1), rat(0, 1), rat(1, 1)]);
        let zero = Polynomial::parse("0", &q()).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), None);
    }

    #[test]
    fn parse_tolerates_whitespace_and_star() {
        let a = Polynomial::parse(" 1/2 * x ^ 2 - 1 ", &q()).unwrap();
        let b = Polynomial::parse("1/2x^2-1", &q()).unwrap();
        assert_eq!(a, b);
        assert_eq!(Polynomial::parse("-x+x", &q()).unwrap(), Polynomial::zero(&q()));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Polynomial::parse("x^", &q()), Err(Error::Syntax { .. })));
        assert!(matches!(Polynomial::parse("2y", &q()), Err(Error::Syntax { .. })));
        assert!(matches!(Polynomial::parse("", &q()), Err(Error::Syntax { .. })));
        let f3 = Field::Base(BaseField::Prime(3));
        assert!(matches!(
            Polynomial::parse("1/3x", &f3),
            Err(Error::NonInvertibleDenominator(_))
        ));
    }

    #[test]
    fn render_round_trips() {
        for s in ["1/2x^2-1", "x^3-3x-1", "-x^2-1", "x", "-3", "0", "2x^4+x-7/3"] {
            let p = Polynomial::parse(s, &q()).unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn division_identity() {
        let a = Polynomial::parse("x^5-3x^2+1/2", &q()).unwrap();
        let b = Polynomial::parse("2x^2+x-1", &q()).unwrap();
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_and_bezout() {
        let a = Polynomial::parse("x^2-1", &q()).unwrap();
        let b = Polynomial::parse("x^2+2x+1", &q()).unwrap();
        assert_eq!(a.gcd(&b), Polynomial::parse("x+1", &q()).unwrap());
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn quotient_by_linear_over_extension() {
        let m = Polynomial::parse("x^2-2", &q()).unwrap();
        let k = Field::extension(&m).unwrap();
        let xbar = k.generator().unwrap();
        let r = m.quotient_by_linear(&xbar).unwrap();
        // x^2 - 2 = (x + xbar)(x - xbar)
        let expect = Polynomial::new(k.clone(), vec![xbar.clone(), Scalar::one(&k)]);
        assert_eq!(r, expect);

        let linear = Polynomial::new(k.clone(), vec![-&xbar, Scalar::one(&k)]);
        assert_eq!(
            linear.quotient_by_linear(&xbar).unwrap(),
            Polynomial::constant(Scalar::one(&k))
        );
        let one = Scalar::one(&k);
        assert!(matches!(m.quotient_by_linear(&one), Err(Error::NotARoot(_))));
    }
}
