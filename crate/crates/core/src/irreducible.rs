//! Irreducibility over prime fields and over the rationals, and basic
//! irreducible polynomials (irreducible, degree at least two, constant term -1).

use std::collections::BTreeSet;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::Integer;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{BaseField, Field, Scalar};

/// Degree bound for the complete search over Q.
pub const MAX_RATIONAL_DEGREE: usize = 8;

// |f(a)| above this is not factored during Kronecker's search
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// Exact irreducibility verdict for `deg p >= 1` over a base field.
pub fn is_irreducible(p: &Polynomial) -> Result<bool> {
    let n = match p.degree() {
        None | Some(0) => return Err(Error::DegreeTooSmall(p.to_string())),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    match p.field() {
        Field::Base(BaseField::Prime(ell)) => Ok(irreducible_mod_prime(p, *ell)),
        Field::Base(BaseField::Rational) => irreducible_over_q(p),
        Field::Extension(_) => Err(Error::InvalidField(
            "irreducibility over an extension field".into(),
        )),
    }
}

/// `p` over F_ell is irreducible iff `gcd(x^(ell^i) - x, p) = 1` for all `i <= deg/2`.
fn irreducible_mod_prime(p: &Polynomial, ell: u64) -> bool {
    let f = p.monic();
    let n = f.degree().expect("nonzero");
    let x = Polynomial::x(f.field());
    let ell = BigInt::from(ell);
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = h.pow_mod(&ell, &f).expect("f is nonzero");
        let g = h.sub(&x).gcd(&f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Clears denominators and content: the primitive integer polynomial with positive leading coefficient.
fn primitive_integer(p: &Polynomial) -> Vec<BigInt> {
    let rats: Vec<BigRational> = p
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Rational(q) => q.clone(),
            _ => unreachable!("rational polynomial"),
        })
        .collect();
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = rats
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in ints.iter_mut() {
        *c /= &content;
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -c.clone();
        }
    }
    ints
}

fn eval_int(f: &[BigInt], a: i64) -> BigInt {
    let a = BigInt::from(a);
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * &a + c)
}

fn positive_divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn irreducible_over_q(p: &Polynomial) -> Result<bool> {
    let f = primitive_integer(p);
    let n = f.len() - 1;
    if f[0].is_zero() {
        return Ok(false);
    }
    if has_rational_root(&f) == Some(true) {
        return Ok(false);
    }
    // irreducible modulo a prime that keeps the degree => irreducible over Q
    for ell in (2u64..200).filter(|&l| crate::scalar::is_prime(l)) {
        if (&f[n] % BigInt::from(ell)).is_zero() {
            continue;
        }
        let field = Field::Base(BaseField::Prime(ell));
        let coeffs = f
            .iter()
            .map(|c| Scalar::from_rational(&field, &BigRational::from_integer(c.clone())))
            .collect::<Result<Vec<_>>>()?;
        let reduced = Polynomial::new(field, coeffs);
        if irreducible_mod_prime(&reduced, ell) {
            return Ok(true);
        }
    }
    if n > MAX_RATIONAL_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    for d in 1..=n / 2 {
        if kronecker_factor(&f, d)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Some(true)` if a rational root exists, `None` when the candidates are too large to list.
fn has_rational_root(f: &[BigInt]) -> Option<bool> {
    let c0 = f[0].abs().to_u64().filter(|&c| c <= DIVISOR_LIMIT)?;
    let cn = f[f.len() - 1].abs().to_u64().filter(|&c| c <= DIVISOR_LIMIT)?;
    let field = Field::RATIONAL;
    let poly = Polynomial::new(
        field.clone(),
        f.iter()
            .map(|c| Scalar::Rational(BigRational::from_integer(c.clone())))
            .collect(),
    );
    for a in positive_divisors(c0) {
        for b in positive_divisors(cn) {
            for sign in [1i64, -1] {
                let r = Scalar::Rational(BigRational::new(BigInt::from(a) * sign, BigInt::from(b)));
                if poly.eval(&r).ok()?.is_zero() {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

/// Searches for an integer factor of degree exactly `d` by interpolation at `d + 1` points.
fn kronecker_factor(f: &[BigInt], d: usize) -> Result<Option<Vec<BigInt>>> {
    // candidate points 0, 1, -1, 2, -2, ...
    let mut points: Vec<(usize, i64, Vec<u64>)> = Vec::new();
    for k in 0..64i64 {
        let a = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
        let v = eval_int(f, a);
        if v.is_zero() {
            // a rational root; degree >= 2 means a proper factor
            let mut factor = vec![-BigInt::from(a), BigInt::one()];
            factor.shrink_to_fit();
            return Ok(Some(factor));
        }
        if let Some(m) = v.abs().to_u64().filter(|&m| m <= DIVISOR_LIMIT) {
            let divs = positive_divisors(m);
            points.push((divs.len(), a, divs));
        }
    }
    if points.len() < d + 1 {
        return Err(Error::DegreeTooLarge(f.len() - 1));
    }
    points.sort_by_key(|(count, a, _)| (*count, a.unsigned_abs()));
    points.truncate(d + 1);

    let xs: Vec<BigRational> = points
        .iter()
        .map(|(_, a, _)| BigRational::from_integer((*a).into()))
        .collect();
    // Lagrange basis polynomials over Q, as coefficient vectors
    let basis: Vec<Vec<BigRational>> = (0..=d)
        .map(|i| {
            let mut poly = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for j in 0..=d {
                if i == j {
                    continue;
                }
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * &xs[j];
                }
                poly = next;
                denom *= &xs[i] - &xs[j];
            }
            poly.into_iter().map(|c| c / &denom).collect()
        })
        .collect();

    let fq: Vec<BigRational> = f.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut choice = vec![0usize; d + 1];
    let options: Vec<Vec<i64>> = points
        .iter()
        .enumerate()
        .map(|(i, (_, _, divs))| {
            let mut opts: Vec<i64> = divs.iter().map(|&x| x as i64).collect();
            if i > 0 {
                opts.extend(divs.iter().map(|&x| -(x as i64)));
            }
            opts
        })
        .collect();
    loop {
        let mut g = vec![BigRational::zero(); d + 1];
        for (i, &c) in choice.iter().enumerate() {
            let v = BigRational::from_integer(options[i][c].into());
            for (k, b) in basis[i].iter().enumerate() {
                g[k] += &v * b;
            }
        }
        if g[d] != BigRational::zero() && g.iter().all(|c| c.is_integer()) && divides_q(&g, &fq) {
            return Ok(Some(g.into_iter().map(|c| c.to_integer()).collect()));
        }
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i > d {
                return Ok(None);
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn divides_q(g: &[BigRational], f: &[BigRational]) -> bool {
    let dg = g.len() - 1;
    let mut rem = f.to_vec();
    for k in (dg..rem.len()).rev() {
        let c = &rem[k] / &g[dg];
        if c.is_zero() {
            continue;
        }
        for (i, gi) in g.iter().enumerate() {
            rem[k - dg + i] -= &c * gi;
        }
    }
    rem[..dg].iter().all(Zero::is_zero)
}

/// An irreducible polynomial of degree at least two with constant term exactly -1,
/// together with its residue field `K[x]/<p>`.
#[derive(Clone, Debug)]
pub struct BasicPolynomial {
    poly: Polynomial,
    extension: Field,
}

impl PartialEq for BasicPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for BasicPolynomial {}

impl BasicPolynomial {
    /// Accepts `p` only if it is already basic irreducible.
    pub fn new(p: Polynomial) -> Result<BasicPolynomial> {
        if p.coeff(0) != -Scalar::one(p.field()) {
            return Err(Error::NotBasic(p.to_string()));
        }
        let n = p.degree().expect("constant term is nonzero");
        if n < 2 {
            return Err(Error::DegreeTooSmall(p.to_string()));
        }
        if !is_irreducible(&p)? {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        let extension = Field::Extension(crate::scalar::ExtensionField::new_unchecked(p.clone()));
        Ok(BasicPolynomial { poly: p, extension })
    }

    /// Rescales an irreducible `p` with `p(0) != 0` so the constant term is -1.
    pub fn normalize(p: &Polynomial) -> Result<BasicPolynomial> {
        BasicPolynomial::new(make_basic(p)?)
    }

    /// Accepts any irreducible `p` of degree at least two with `p(0) != 0`,
    /// rescaling it to constant term -1 when needed.
    pub fn from_user(p: &Polynomial) -> Result<BasicPolynomial> {
        let basic = make_basic(p).map_err(|err| match err {
            Error::DegreeTooLarge(_) => err,
            _ => Error::NotBasicIrreducible(p.to_string()),
        })?;
        if &basic != p {
            log::info!("normalized {p} to {basic} (same ideal, constant term -1)");
        }
        BasicPolynomial::new(basic)
    }

    /// Parses and normalizes a user polynomial over `field`.
    pub fn parse(text: &str, field: &Field) -> Result<BasicPolynomial> {
        BasicPolynomial::from_user(&Polynomial::parse(text, field)?)
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("basic polynomials are nonzero")
    }

    pub fn base_field(&self) -> &Field {
        self.poly.field()
    }

    /// `K' = K[x]/<p>`.
    pub fn extension(&self) -> &Field {
        &self.extension
    }

    pub fn extension_field(&self) -> &Arc<crate::scalar::ExtensionField> {
        match &self.extension {
            Field::Extension(ext) => ext,
            Field::Base(_) => unreachable!(),
        }
    }

    pub fn xbar(&self) -> Scalar {
        self.extension.generator().expect("extension field")
    }

    pub fn xbar_inverse(&self) -> Scalar {
        xbar_inverse(&self.poly).expect("basic by construction")
    }
}

impl std::fmt::Display for BasicPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `(-p(0))^{-1}·p`, the unit multiple with constant term -1.
pub fn make_basic(p: &Polynomial) -> Result<Polynomial> {
    let n = p.degree().ok_or_else(|| Error::DegreeTooSmall(p.to_string()))?;
    if n < 2 {
        return Err(Error::DegreeTooSmall(p.to_string()));
    }
    let c0 = p.coeff(0);
    if c0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    let unit = (-&c0).inv()?;
    Ok(p.scale(&unit))
}

/// `p_n·xbar^{n-1} + ... + p_2·xbar + p_1`, the inverse of `xbar` when `p(0) = -1`.
pub fn xbar_inverse(p: &Polynomial) -> Result<Scalar> {
    if p.coeff(0) != -Scalar::one(p.field()) || p.degree().unwrap_or(0) < 1 {
        return Err(Error::NotBasic(p.to_string()));
    }
    let ext = match Field::extension(p)? {
        Field::Extension(ext) => ext,
        Field::Base(_) => unreachable!(),
    };
    let shifted = Polynomial::new(p.field().clone(), p.coeffs()[1..].to_vec());
    Ok(Scalar::Ext(crate::scalar::ExtScalar::from_polynomial(&ext, &shifted)?))
}

/// All monic polynomials of degree `n` over F_ell (oracle helper, small inputs only).
pub fn monic_polynomials(ell: u64, n: usize) -> Vec<Polynomial> {
    let field = Field::Base(BaseField::Prime(ell));
    let count = (ell as usize).pow(n as u32);
    (0..count)
        .map(|mut idx| {
            let mut coeffs = Vec::with_capacity(n + 1);
            for _ in 0..n {
                coeffs.push(Scalar::from_int(&field, (idx % ell as usize) as i64));
                idx /= ell as usize;
            }
            coeffs.push(Scalar::one(&field));
            Polynomial::new(field.clone(), coeffs)
        })
        .collect()
}

/// Products of two monic polynomials of positive degree summing to `n`, rendered.
pub fn reducible_monic_by_products(ell: u64, n: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for d in 1..n {
        for a in monic_polynomials(ell, d) {
            for b in monic_polynomials(ell, n - d) {
                out.insert(a.mul(&b).to_string());
            }
        }
    }
    out
}
