//! Exact scalars: rationals, prime fields, and simple extensions `K[x]/<p>`.
//!
//! A [`Scalar`] carries enough of its field to do arithmetic on its own
//! (prime elements know their modulus, extension elements share an
//! `Arc<ExtensionField>`). Mixing fields is a programming error for the
//! operator impls and a recoverable [`Error`] for the `try_*` methods.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rational,
    Prime(u64),
}

impl BaseField {
    pub fn prime(p: u64) -> Result<BaseField> {
        if is_prime(p) {
            Ok(BaseField::Prime(p))
        } else {
            Err(Error::InvalidField(format!("F{p}")))
        }
    }
}

impl FromStr for BaseField {
    type Err = Error;

    /// `Q` or `F<prime>`.
    fn from_str(s: &str) -> Result<BaseField> {
        let s = s.trim();
        if s == "Q" {
            return Ok(BaseField::Rational);
        }
        s.strip_prefix('F')
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| Error::InvalidField(s.to_string()))
            .and_then(BaseField::prime)
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => write!(f, "Q"),
            BaseField::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// `K[x]/<modulus>` for an irreducible modulus over a base field.
#[derive(Debug)]
pub struct ExtensionField {
    modulus: Polynomial,
    // modulus divided by its leading coefficient, without the leading 1
    monic_tail: Vec<Scalar>,
}

impl ExtensionField {
    /// The caller vouches for irreducibility; see [`Field::extension`] for the checked path.
    pub fn new_unchecked(modulus: Polynomial) -> Arc<ExtensionField> {
        let lead_inv = modulus
            .leading()
            .inv()
            .expect("modulus is nonzero");
        let n = modulus.degree().expect("modulus is nonzero");
        let monic_tail = modulus.coeffs()[..n].iter().map(|c| c * &lead_inv).collect();
        Arc::new(ExtensionField {
            modulus,
            monic_tail,
        })
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.monic_tail.len()
    }

    pub fn base(&self) -> &BaseField {
        match self.modulus.field() {
            Field::Base(b) => b,
            Field::Extension(_) => unreachable!("towers are not supported"),
        }
    }
}

impl PartialEq for ExtensionField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl Eq for ExtensionField {}

#[derive(Clone, Debug)]
pub enum Field {
    Base(BaseField),
    Extension(Arc<ExtensionField>),
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Field::Base(a), Field::Base(b)) => a == b,
            (Field::Extension(a), Field::Extension(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl Field {
    pub const RATIONAL: Field = Field::Base(BaseField::Rational);

    /// `K[x]/<p>` after checking `p` is irreducible of degree at least one.
    pub fn extension(p: &Polynomial) -> Result<Field> {
        if p.field().is_extension() {
            return Err(Error::InvalidField("extension of an extension".into()));
        }
        match p.degree() {
            None | Some(0) => return Err(Error::DegreeTooSmall(p.to_string())),
            _ => {}
        }
        if !crate::irreducible::is_irreducible(p)? {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        Ok(Field::Extension(ExtensionField::new_unchecked(p.clone())))
    }

    pub fn is_extension(&self) -> bool {
        matches!(self, Field::Extension(_))
    }

    /// The base field: itself for base fields, `K` for `K[x]/<p>`.
    pub fn base(&self) -> BaseField {
        match self {
            Field::Base(b) => b.clone(),
            Field::Extension(ext) => ext.base().clone(),
        }
    }

    /// Dimension over the base field.
    pub fn degree(&self) -> usize {
        match self {
            Field::Base(_) => 1,
            Field::Extension(ext) => ext.degree(),
        }
    }

    /// The class of `x` in an extension field.
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            Field::Base(_) => None,
            Field::Extension(ext) => {
                let base = Field::Base(ext.base().clone());
                let n = ext.degree();
                let mut coeffs = vec![Scalar::zero(&base); n];
                if n == 1 {
                    // x = -m0/m1
                    coeffs[0] = -&ext.monic_tail[0];
                } else {
                    coeffs[1] = Scalar::one(&base);
                }
                Some(Scalar::Ext(ExtScalar {
                    field: ext.clone(),
                    coeffs,
                }))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Base(b) => write!(f, "{b}"),
            Field::Extension(ext) => write!(f, "{}[x]/<{}>", ext.base(), ext.modulus),
        }
    }
}

/// An element of `K[x]/<p>` stored as `c0 + c1·xbar + ... + c_{n-1}·xbar^{n-1}`.
#[derive(Clone, Debug)]
pub struct ExtScalar {
    field: Arc<ExtensionField>,
    coeffs: Vec<Scalar>,
}

impl ExtScalar {
    pub fn field(&self) -> &Arc<ExtensionField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Reduces a polynomial over the base field into the extension.
    pub fn from_polynomial(field: &Arc<ExtensionField>, p: &Polynomial) -> Result<ExtScalar> {
        let base = Field::Base(field.base().clone());
        if p.field() != &base {
            return Err(Error::FieldMismatch(p.field().to_string(), base.to_string()));
        }
        Ok(ExtScalar {
            field: field.clone(),
            coeffs: reduce(field, p.coeffs().to_vec()),
        })
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(
            Field::Base(self.field.base().clone()),
            self.coeffs.clone(),
        )
    }
}

impl PartialEq for ExtScalar {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
            && self.coeffs == other.coeffs
    }
}

impl Eq for ExtScalar {}

fn reduce(field: &ExtensionField, mut coeffs: Vec<Scalar>) -> Vec<Scalar> {
    let n = field.degree();
    let base = Field::Base(field.base().clone());
    for k in (n..coeffs.len()).rev() {
        let c = coeffs[k].clone();
        if c.is_zero() {
            continue;
        }
        for (i, m) in field.monic_tail.iter().enumerate() {
            coeffs[k - n + i] = &coeffs[k - n + i] - &(&c * m);
        }
    }
    coeffs.resize(n, Scalar::zero(&base));
    coeffs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
    Ext(ExtScalar),
}

impl Scalar {
    pub fn zero(field: &Field) -> Scalar {
        Scalar::from_int(field, 0)
    }

    pub fn one(field: &Field) -> Scalar {
        Scalar::from_int(field, 1)
    }

    pub fn from_int(field: &Field, n: i64) -> Scalar {
        match field {
            Field::Base(BaseField::Rational) => Scalar::Rational(BigRational::from_integer(n.into())),
            Field::Base(BaseField::Prime(p)) => Scalar::Prime {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
            Field::Extension(ext) => {
                let base = Field::Base(ext.base().clone());
                let mut coeffs = vec![Scalar::zero(&base); ext.degree()];
                coeffs[0] = Scalar::from_int(&base, n);
                Scalar::Ext(ExtScalar {
                    field: ext.clone(),
                    coeffs,
                })
            }
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(field: &Field, q: &BigRational) -> Result<Scalar> {
        match field {
            Field::Base(BaseField::Rational) => Ok(Scalar::Rational(q.clone())),
            Field::Base(BaseField::Prime(p)) => {
                let m = BigInt::from(*p);
                let num = q.numer().mod_floor(&m);
                let den = q.denom().mod_floor(&m);
                if den.is_zero() {
                    return Err(Error::NonInvertibleDenominator(q.denom().to_string()));
                }
                let to_u64 = |b: BigInt| -> u64 { b.try_into().expect("reduced below modulus") };
                let num = Scalar::Prime {
                    value: to_u64(num),
                    modulus: *p,
                };
                let den = Scalar::Prime {
                    value: to_u64(den),
                    modulus: *p,
                };
                Ok(&num * &den.inv()?)
            }
            Field::Extension(ext) => {
                let base = Field::Base(ext.base().clone());
                Ok(Scalar::from_rational(&base, q)?.embed(ext))
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Base(BaseField::Rational),
            Scalar::Prime { modulus, .. } => Field::Base(BaseField::Prime(*modulus)),
            Scalar::Ext(x) => Field::Extension(x.field.clone()),
        }
    }

    pub fn in_field(&self, field: &Field) -> bool {
        match (self, field) {
            (Scalar::Rational(_), Field::Base(BaseField::Rational)) => true,
            (Scalar::Prime { modulus, .. }, Field::Base(BaseField::Prime(p))) => modulus == p,
            (Scalar::Ext(x), Field::Extension(ext)) => Arc::ptr_eq(&x.field, ext) || *x.field == **ext,
            _ => false,
        }
    }

    /// Base-field scalar viewed inside `ext`.
    pub fn embed(&self, ext: &Arc<ExtensionField>) -> Scalar {
        if let Scalar::Ext(_) = self {
            return self.clone();
        }
        let base = Field::Base(ext.base().clone());
        let mut coeffs = vec![Scalar::zero(&base); ext.degree()];
        coeffs[0] = self.clone();
        Scalar::Ext(ExtScalar {
            field: ext.clone(),
            coeffs,
        })
    }

    /// Coerces into `field` when that is the same field or an extension of ours.
    pub fn coerce(&self, field: &Field) -> Result<Scalar> {
        if self.in_field(field) {
            return Ok(self.clone());
        }
        match field {
            Field::Extension(ext) if self.in_field(&Field::Base(ext.base().clone())) => Ok(self.embed(ext)),
            _ => Err(Error::FieldMismatch(self.field().to_string(), field.to_string())),
        }
    }

    /// The base-field value, if this extension element lies in `K`.
    pub fn as_base(&self) -> Option<Scalar> {
        match self {
            Scalar::Ext(x) => x.coeffs[1..]
                .iter()
                .all(Scalar::is_zero)
                .then(|| x.coeffs[0].clone()),
            other => Some(other.clone()),
        }
    }

    /// Coordinates over the base field (length 1 for base scalars).
    pub fn base_coords(&self) -> Vec<Scalar> {
        match self {
            Scalar::Ext(x) => x.coeffs.clone(),
            other => vec![other.clone()],
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Ext(x) => x.coeffs.iter().all(Scalar::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
            Scalar::Ext(x) => x.coeffs[0].is_one() && x.coeffs[1..].iter().all(Scalar::is_zero),
        }
    }

    /// Sign as written: negative rationals, including rationals inside an extension.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Ext(_) => self.as_base().is_some_and(|b| b.is_negative()),
            Scalar::Prime { .. } => false,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        match (self, other) {
            (Scalar::Ext(_), Scalar::Ext(_)) => Error::MixedExtensions,
            _ => Error::FieldMismatch(self.field().to_string(), other.field().to_string()),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime { value: a, modulus },
                Scalar::Prime {
                    value: b,
                    modulus: m,
                },
            ) if modulus == m => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            (Scalar::Ext(a), Scalar::Ext(b)) if Scalar::Ext(a.clone()).in_field(&other.field()) => {
                Scalar::Ext(ExtScalar {
                    field: a.field.clone(),
                    coeffs: a
                        .coeffs
                        .iter()
                        .zip(&b.coeffs)
                        .map(|(x, y)| x.try_add(y))
                        .collect::<Result<_>>()?,
                })
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime { value: a, modulus },
                Scalar::Prime {
                    value: b,
                    modulus: m,
                },
            ) if modulus == m => Scalar::Prime {
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            (Scalar::Ext(a), Scalar::Ext(b)) if self.in_field(&other.field()) => {
                let n = a.coeffs.len();
                let base = Field::Base(a.field.base().clone());
                let mut prod = vec![Scalar::zero(&base); 2 * n - 1];
                for (i, x) in a.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.coeffs.iter().enumerate() {
                        prod[i + j] = &prod[i + j] + &(x * y);
                    }
                }
                Scalar::Ext(ExtScalar {
                    field: a.field.clone(),
                    coeffs: reduce(&a.field, prod),
                })
            }
            // scaling an extension element by a base scalar
            (Scalar::Ext(a), b) | (b, Scalar::Ext(a)) if b.in_field(&Field::Base(a.field.base().clone())) => {
                Scalar::Ext(ExtScalar {
                    field: a.field.clone(),
                    coeffs: a.coeffs.iter().map(|x| x * b).collect(),
                })
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: mod_inverse(*value, *modulus),
                modulus: *modulus,
            },
            Scalar::Ext(x) => {
                // s·a + t·m = g with g a nonzero constant, since m is irreducible
                let a = x.to_polynomial();
                let (g, s, _) = a.ext_gcd(x.field.modulus())?;
                let g0 = g.coeffs()[0].inv()?;
                let s = s.scale(&g0);
                Scalar::Ext(ExtScalar::from_polynomial(&x.field, &s)?)
            }
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Scalar::one(&self.field());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Renders an extension element as a polynomial in `var`.
    pub fn render(&self, var: &str) -> String {
        match self {
            Scalar::Rational(q) => q.to_string(),
            Scalar::Prime { value, .. } => value.to_string(),
            Scalar::Ext(x) => x.to_polynomial().render(var),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("xbar"))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalars from the same field")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalars from the same field")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalars from the same field")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Ext(x) => Scalar::Ext(ExtScalar {
                field: x.field.clone(),
                coeffs: x.coeffs.iter().map(|c| -c).collect(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let m128 = m as u128;
    let mut base = b as u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    mod_pow(a, m - 2, m)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn parses_field_flags() {
        assert_eq!("Q".parse::<BaseField>().unwrap(), BaseField::Rational);
        assert_eq!("F7".parse::<BaseField>().unwrap(), BaseField::Prime(7));
        assert!("F8".parse::<BaseField>().is_err());
        assert!("R".parse::<BaseField>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Base(BaseField::Prime(7));
        let a = Scalar::from_int(&f, 3);
        let b = Scalar::from_int(&f, 5);
        assert_eq!(&a + &b, Scalar::from_int(&f, 1));
        assert_eq!(&a * &b, Scalar::from_int(&f, 1));
        assert_eq!(&a * &a.inv().unwrap(), Scalar::one(&f));
        assert_eq!(-&a, Scalar::from_int(&f, 4));
        assert_eq!(Scalar::zero(&f).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::Base(BaseField::Prime(5));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(Scalar::from_rational(&f, &half).unwrap(), Scalar::from_int(&f, 3));
        let fifth = BigRational::new(1.into(), 5.into());
        assert!(matches!(
            Scalar::from_rational(&f, &fifth),
            Err(Error::NonInvertibleDenominator(_))
        ));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = q(1, 2);
        let b = Scalar::from_int(&Field::Base(BaseField::Prime(3)), 1);
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn powers_and_negative_exponents() {
        let two = q(2, 1);
        assert_eq!(two.pow(3).unwrap(), q(8, 1));
        assert_eq!(two.pow(-2).unwrap(), q(1, 4));
        assert_eq!(two.pow(0).unwrap(), q(1, 1));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }
}
