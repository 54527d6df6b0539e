//! Exact scalars: rationals, real quadratic towers of depth two, and
//! certified interval enclosures.
//!
//! The exact kinds form a chain `Q` inside `Q(sqrt(d))` inside
//! `Q(sqrt(d))(sqrt(s))`. Every constructor keeps values canonical: a
//! [`Scalar::Quad`] always has a nonzero irrational part and squarefree
//! `d >= 2`, a [`Scalar::Ext`] always has a nonzero outer radical part, so
//! each value has exactly one representation and equality is structural.
//! Square roots simplify back down whenever the radicand is a perfect
//! square at its level, and interval scalars ([`Interval`]) pick up values
//! that no depth-two tower can hold.

pub mod interval;

pub use interval::Interval;

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational number with arbitrary precision.
pub type Rat = BigRational;

/// Rational with the given numerator and denominator.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn rat_sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Element `a + b*sqrt(d)` of a real quadratic field; `d` is tracked by the
/// containing [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPair {
    pub a: Rat,
    pub b: Rat,
}

impl QPair {
    pub fn new(a: Rat, b: Rat) -> Self {
        QPair { a, b }
    }

    pub fn rational(a: Rat) -> Self {
        QPair { a, b: Rat::zero() }
    }

    pub fn zero() -> Self {
        QPair::rational(Rat::zero())
    }

    pub fn one() -> Self {
        QPair::rational(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &QPair) -> QPair {
        QPair::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &QPair) -> QPair {
        QPair::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn neg(&self) -> QPair {
        QPair::new(-self.a.clone(), -self.b.clone())
    }

    pub fn scale(&self, r: &Rat) -> QPair {
        QPair::new(&self.a * r, &self.b * r)
    }

    pub fn mul(&self, o: &QPair, d: &BigInt) -> QPair {
        let drat = Rat::from_integer(d.clone());
        QPair::new(
            &self.a * &o.a + &drat * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    /// Field norm `a^2 - d*b^2`; zero only for the zero element.
    pub fn norm(&self, d: &BigInt) -> Rat {
        let drat = Rat::from_integer(d.clone());
        &self.a * &self.a - &drat * &self.b * &self.b
    }

    pub fn conj(&self) -> QPair {
        QPair::new(self.a.clone(), -self.b.clone())
    }

    pub fn inv(&self, d: &BigInt) -> Option<QPair> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm(d);
        Some(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, o: &QPair, d: &BigInt) -> Option<QPair> {
        Some(self.mul(&o.inv(d)?, d))
    }

    /// Exact sign of `a + b*sqrt(d)`, settled by comparing `a^2` with
    /// `d*b^2` when the two parts pull in opposite directions.
    pub fn sign(&self, d: &BigInt) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        match rat_sign(&self.norm(d)) {
            1 => sa,
            -1 => sb,
            _ => 0,
        }
    }
}

/// The field `Q(sqrt(d))(sqrt(s))`: `d` squarefree, `s = s.a + s.b*sqrt(d)`
/// positive and not a square in `Q(sqrt(d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    pub d: BigInt,
    pub s: QPair,
}

/// An exact real scalar, or a certified interval enclosure when the value
/// leaves every supported tower.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(Rat),
    Quad { d: BigInt, v: QPair },
    Ext { field: ExtField, a: QPair, b: QPair },
    Interval(Interval),
}

enum Unified {
    Rats(Rat, Rat),
    Quads(BigInt, QPair, QPair),
    Exts(ExtField, QPair, QPair, QPair, QPair),
    Intervals(Interval, Interval),
}

fn unify(x: &Scalar, y: &Scalar) -> Result<Unified> {
    use Scalar::*;
    Ok(match (x, y) {
        (Interval(_), _) | (_, Interval(_)) => {
            Unified::Intervals(x.to_interval(), y.to_interval())
        }
        (Rat(a), Rat(b)) => Unified::Rats(a.clone(), b.clone()),
        (Rat(a), Quad { d, v }) => {
            Unified::Quads(d.clone(), QPair::rational(a.clone()), v.clone())
        }
        (Quad { d, v }, Rat(b)) => {
            Unified::Quads(d.clone(), v.clone(), QPair::rational(b.clone()))
        }
        (Quad { d: d1, v: v1 }, Quad { d: d2, v: v2 }) => {
            if d1 != d2 {
                return Err(Error::IncompatibleTowers(format!(
                    "sqrt({d1}) vs sqrt({d2})"
                )));
            }
            Unified::Quads(d1.clone(), v1.clone(), v2.clone())
        }
        (Rat(r), Ext { field, a, b }) => Unified::Exts(
            field.clone(),
            QPair::rational(r.clone()),
            QPair::zero(),
            a.clone(),
            b.clone(),
        ),
        (Ext { field, a, b }, Rat(r)) => Unified::Exts(
            field.clone(),
            a.clone(),
            b.clone(),
            QPair::rational(r.clone()),
            QPair::zero(),
        ),
        (Quad { d, v }, Ext { field, a, b }) => {
            if *d != field.d {
                return Err(Error::IncompatibleTowers(format!(
                    "sqrt({d}) vs base field sqrt({})",
                    field.d
                )));
            }
            Unified::Exts(field.clone(), v.clone(), QPair::zero(), a.clone(), b.clone())
        }
        (Ext { field, a, b }, Quad { d, v }) => {
            if *d != field.d {
                return Err(Error::IncompatibleTowers(format!(
                    "sqrt({d}) vs base field sqrt({})",
                    field.d
                )));
            }
            Unified::Exts(field.clone(), a.clone(), b.clone(), v.clone(), QPair::zero())
        }
        (Ext { field: f1, a: a1, b: b1 }, Ext { field: f2, a: a2, b: b2 }) => {
            if f1 != f2 {
                return Err(Error::IncompatibleTowers(
                    "distinct depth-two towers".into(),
                ));
            }
            Unified::Exts(f1.clone(), a1.clone(), b1.clone(), a2.clone(), b2.clone())
        }
    })
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(Rat::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rat(rat_int(n))
    }

    pub fn from_rat(r: Rat) -> Scalar {
        Scalar::Rat(r)
    }

    /// Rational `p/q` as a scalar.
    pub fn ratio(p: i64, q: i64) -> Scalar {
        Scalar::Rat(rat(p, q))
    }

    pub(crate) fn quad(d: BigInt, v: QPair) -> Scalar {
        if v.b.is_zero() {
            Scalar::Rat(v.a)
        } else {
            Scalar::Quad { d, v }
        }
    }

    pub(crate) fn ext(field: ExtField, a: QPair, b: QPair) -> Scalar {
        if b.is_zero() {
            Scalar::quad(field.d, a)
        } else {
            Scalar::Ext { field, a, b }
        }
    }

    /// True only when the value is known to be exactly zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad { .. } | Scalar::Ext { .. } => false,
            Scalar::Interval(i) => i.is_known_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_interval(&self) -> Interval {
        match self {
            Scalar::Rat(r) => Interval::from_rat(r.clone()),
            Scalar::Quad { d, v } => Interval::quad_leaf(d.clone(), v.clone()),
            Scalar::Ext { field, a, b } => {
                let ia = Interval::quad_leaf(field.d.clone(), a.clone());
                let ib = Interval::quad_leaf(field.d.clone(), b.clone());
                let is = Interval::quad_leaf(field.d.clone(), field.s.clone());
                let root = is.sqrt().expect("tower radicand is positive");
                ia.add(&ib.mul(&root))
            }
            Scalar::Interval(i) => i.clone(),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(match unify(self, rhs)? {
            Unified::Rats(a, b) => Scalar::Rat(a + b),
            Unified::Quads(d, x, y) => Scalar::quad(d, x.add(&y)),
            Unified::Exts(f, a1, b1, a2, b2) => Scalar::ext(f, a1.add(&a2), b1.add(&b2)),
            Unified::Intervals(x, y) => Scalar::Interval(x.add(&y)),
        })
    }

    pub fn sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Quad { d, v } => Scalar::Quad { d: d.clone(), v: v.neg() },
            Scalar::Ext { field, a, b } => Scalar::Ext {
                field: field.clone(),
                a: a.neg(),
                b: b.neg(),
            },
            Scalar::Interval(i) => Scalar::Interval(i.neg()),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(match unify(self, rhs)? {
            Unified::Rats(a, b) => Scalar::Rat(a * b),
            Unified::Quads(d, x, y) => {
                let prod = x.mul(&y, &d);
                Scalar::quad(d, prod)
            }
            Unified::Exts(f, a1, b1, a2, b2) => {
                let d = &f.d;
                let a = a1.mul(&a2, d).add(&f.s.mul(&b1.mul(&b2, d), d));
                let b = a1.mul(&b2, d).add(&a2.mul(&b1, d));
                Scalar::ext(f.clone(), a, b)
            }
            Unified::Intervals(x, y) => Scalar::Interval(x.mul(&y)),
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(match unify(self, rhs)? {
            Unified::Rats(a, b) => {
                if b.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Scalar::Rat(a / b)
            }
            Unified::Quads(d, x, y) => {
                let q = x.div(&y, &d).ok_or(Error::DivisionByZero)?;
                Scalar::quad(d, q)
            }
            Unified::Exts(f, a1, b1, a2, b2) => {
                if a2.is_zero() && b2.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let d = &f.d;
                let norm = a2.mul(&a2, d).sub(&f.s.mul(&b2.mul(&b2, d), d));
                let ninv = norm.inv(d).ok_or(Error::DivisionByZero)?;
                let num_a = a1.mul(&a2, d).sub(&f.s.mul(&b1.mul(&b2, d), d));
                let num_b = a2.mul(&b1, d).sub(&a1.mul(&b2, d));
                let a = num_a.mul(&ninv, d);
                let b = num_b.mul(&ninv, d);
                Scalar::ext(f.clone(), a, b)
            }
            Unified::Intervals(x, y) => Scalar::Interval(x.div(&y)?),
        })
    }

    pub fn pow(&self, mut e: u32) -> Result<Scalar> {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact sign for tower scalars; intervals refine until the sign is
    /// certified or the precision cap is hit.
    pub fn sign_of(&self) -> Result<i8> {
        match self {
            Scalar::Rat(r) => Ok(rat_sign(r)),
            Scalar::Quad { d, v } => Ok(v.sign(d)),
            Scalar::Ext { field, a, b } => Ok(ext_sign(field, a, b)),
            Scalar::Interval(i) => i.certified_sign(),
        }
    }

    /// Square root, staying as low in the tower as possible. Perfect
    /// squares simplify at every level; a non-square rational lands in
    /// `Q(sqrt(d))`, a non-square there extends the tower once, and a
    /// non-square at depth two is rejected.
    pub fn sqrt(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(r) => match rat_sign(r) {
                -1 => Err(Error::NegativeRadicand(self.to_string())),
                0 => Ok(Scalar::zero()),
                _ => {
                    if let Some(x) = rat_sqrt_exact(r) {
                        return Ok(Scalar::Rat(x));
                    }
                    let n = r.numer() * r.denom();
                    let (m, d) = square_decompose(&n);
                    let coeff = Rat::new(m, r.denom().clone());
                    if d.is_one() {
                        Ok(Scalar::Rat(coeff))
                    } else {
                        Ok(Scalar::Quad {
                            d,
                            v: QPair::new(Rat::zero(), coeff),
                        })
                    }
                }
            },
            Scalar::Quad { d, v } => match v.sign(d) {
                -1 => Err(Error::NegativeRadicand(self.to_string())),
                0 => Ok(Scalar::zero()),
                _ => {
                    if let Some(root) = quad_sqrt_exact(d, v) {
                        return Ok(Scalar::quad(d.clone(), root));
                    }
                    Ok(Scalar::Ext {
                        field: ExtField { d: d.clone(), s: v.clone() },
                        a: QPair::zero(),
                        b: QPair::one(),
                    })
                }
            },
            Scalar::Ext { field, a, b } => match ext_sign(field, a, b) {
                -1 => Err(Error::NegativeRadicand(self.to_string())),
                0 => Ok(Scalar::zero()),
                _ => {
                    if let Some((x, y)) = ext_sqrt_exact(field, a, b) {
                        return Ok(Scalar::ext(field.clone(), x, y));
                    }
                    Err(Error::DepthExceeded(format!("sqrt of {self}")))
                }
            },
            Scalar::Interval(i) => Ok(Scalar::Interval(i.sqrt()?)),
        }
    }

    pub fn approx_f64(&self) -> f64 {
        match self {
            Scalar::Rat(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Quad { d, v } => {
                let sd = d.to_f64().unwrap_or(f64::NAN).sqrt();
                v.a.to_f64().unwrap_or(f64::NAN) + v.b.to_f64().unwrap_or(f64::NAN) * sd
            }
            Scalar::Ext { field, a, b } => {
                let sd = field.d.to_f64().unwrap_or(f64::NAN).sqrt();
                let s = field.s.a.to_f64().unwrap_or(f64::NAN)
                    + field.s.b.to_f64().unwrap_or(f64::NAN) * sd;
                let root = s.sqrt();
                let af = a.a.to_f64().unwrap_or(f64::NAN)
                    + a.b.to_f64().unwrap_or(f64::NAN) * sd;
                let bf = b.a.to_f64().unwrap_or(f64::NAN)
                    + b.b.to_f64().unwrap_or(f64::NAN) * sd;
                af + bf * root
            }
            Scalar::Interval(i) => i.midpoint_f64(),
        }
    }
}

fn ext_sign(field: &ExtField, a: &QPair, b: &QPair) -> i8 {
    let d = &field.d;
    let sb = b.sign(d);
    if sb == 0 {
        return a.sign(d);
    }
    let sa = a.sign(d);
    if sa == 0 {
        return sb;
    }
    if sa == sb {
        return sa;
    }
    let diff = a.mul(a, d).sub(&field.s.mul(&b.mul(b, d), d));
    match diff.sign(d) {
        1 => sa,
        -1 => sb,
        _ => 0,
    }
}

fn rat_sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let ns = r.numer().sqrt();
    if &(&ns * &ns) != r.numer() {
        return None;
    }
    let ds = r.denom().sqrt();
    if &(&ds * &ds) != r.denom() {
        return None;
    }
    Some(Rat::new(ns, ds))
}

fn quad_sqrt_exact(d: &BigInt, v: &QPair) -> Option<QPair> {
    if v.b.is_zero() {
        return rat_sqrt_exact(&v.a).map(QPair::rational);
    }
    let t = rat_sqrt_exact(&v.norm(d))?;
    let two = rat_int(2);
    let drat = Rat::from_integer(d.clone());
    for cand in [(&v.a + &t) / &two, (&v.a - &t) / &two] {
        let Some(x) = rat_sqrt_exact(&cand) else { continue };
        if x.is_zero() {
            continue;
        }
        let y = &v.b / (&two * &x);
        if &x * &x + &drat * &y * &y == v.a && &two * &x * &y == v.b {
            let root = QPair::new(x, y);
            return Some(if root.sign(d) >= 0 { root } else { root.neg() });
        }
    }
    None
}

fn ext_sqrt_exact(field: &ExtField, a: &QPair, b: &QPair) -> Option<(QPair, QPair)> {
    let d = &field.d;
    if b.is_zero() {
        return quad_sqrt_exact(d, a).map(|x| (x, QPair::zero()));
    }
    let disc = a.mul(a, d).sub(&field.s.mul(&b.mul(b, d), d));
    if disc.sign(d) < 0 {
        return None;
    }
    let t = quad_sqrt_exact(d, &disc)?;
    let half = QPair::rational(rat(1, 2));
    for cand in [a.add(&t).mul(&half, d), a.sub(&t).mul(&half, d)] {
        if cand.sign(d) < 0 {
            continue;
        }
        let Some(x) = quad_sqrt_exact(d, &cand) else { continue };
        if x.is_zero() {
            continue;
        }
        let Some(y) = b.div(&x.scale(&rat_int(2)), d) else { continue };
        let sq_a = x.mul(&x, d).add(&field.s.mul(&y.mul(&y, d), d));
        let sq_b = x.mul(&y, d).scale(&rat_int(2));
        if &sq_a == a && &sq_b == b {
            return Some(if ext_sign(field, &x, &y) >= 0 {
                (x, y)
            } else {
                (x.neg(), y.neg())
            });
        }
    }
    None
}

/// Split `n > 0` as `square^2 * free` with `free` squarefree, by trial
/// division with a perfect-square check on the remaining cofactor.
fn square_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let mut rem = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &p * &p <= rem && p <= limit {
        let mut e = 0u32;
        while (&rem % &p).is_zero() {
            rem = &rem / &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square = &square * &p;
        }
        if e % 2 == 1 {
            free = &free * &p;
        }
        p = if p == BigInt::from(2) {
            BigInt::from(3)
        } else {
            &p + BigInt::from(2)
        };
    }
    if !rem.is_one() {
        let root = rem.sqrt();
        if &root * &root == rem {
            square = &square * &root;
        } else {
            free = &free * &rem;
        }
    }
    (square, free)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Quad { d: d1, v: v1 }, Scalar::Quad { d: d2, v: v2 }) => {
                d1 == d2 && v1 == v2
            }
            (
                Scalar::Ext { field: f1, a: a1, b: b1 },
                Scalar::Ext { field: f2, a: a2, b: b2 },
            ) => f1 == f2 && a1 == a2 && b1 == b2,
            (Scalar::Interval(x), Scalar::Interval(y)) => x == y,
            (Scalar::Interval(i), Scalar::Rat(r)) | (Scalar::Rat(r), Scalar::Interval(i)) => {
                i.is_point() && i.lo() == r
            }
            _ => false,
        }
    }
}

fn qpair_str(d: &BigInt, v: &QPair) -> String {
    let root = format!("sqrt({d})");
    if v.b.is_zero() {
        return v.a.to_string();
    }
    let neg_one = -Rat::one();
    let bterm = if v.b.is_one() {
        root
    } else if v.b == neg_one {
        format!("-{root}")
    } else {
        format!("{}*{root}", v.b)
    };
    if v.a.is_zero() {
        bterm
    } else if let Some(tail) = bterm.strip_prefix('-') {
        format!("{} - {tail}", v.a)
    } else {
        format!("{} + {bterm}", v.a)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Quad { d, v } => write!(f, "{}", qpair_str(d, v)),
            Scalar::Ext { field, a, b } => {
                let root = format!("sqrt({})", qpair_str(&field.d, &field.s));
                let neg_one = -Rat::one();
                let bterm = if b.b.is_zero() {
                    if b.a.is_one() {
                        root
                    } else if b.a == neg_one {
                        format!("-{root}")
                    } else {
                        format!("{}*{root}", b.a)
                    }
                } else {
                    format!("({})*{root}", qpair_str(&field.d, b))
                };
                if a.is_zero() {
                    write!(f, "{bterm}")
                } else if let Some(tail) = bterm.strip_prefix('-') {
                    write!(f, "{} - {tail}", qpair_str(&field.d, a))
                } else {
                    write!(f, "{} + {bterm}", qpair_str(&field.d, a))
                }
            }
            Scalar::Interval(i) => write!(f, "{i}"),
        }
    }
}

/// Complex scalar with independently exact real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl ComplexScalar {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        ComplexScalar { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        ComplexScalar { re, im: Scalar::zero() }
    }

    pub fn imag(im: Scalar) -> Self {
        ComplexScalar { re: Scalar::zero(), im }
    }

    pub fn i() -> Self {
        ComplexScalar::imag(Scalar::one())
    }

    pub fn zero() -> Self {
        ComplexScalar::real(Scalar::zero())
    }

    pub fn one() -> Self {
        ComplexScalar::real(Scalar::one())
    }

    pub fn from_int(n: i64) -> Self {
        ComplexScalar::real(Scalar::from_int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ComplexScalar::real(Scalar::ratio(p, q))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True when the imaginary part is known to vanish.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The real part, insisting that the imaginary part is exactly zero.
    pub fn expect_real(&self) -> Result<&Scalar> {
        if self.is_real() {
            Ok(&self.re)
        } else {
            Err(Error::Internal(format!(
                "expected a real value, got imaginary part {}",
                self.im
            )))
        }
    }

    pub fn conj(&self) -> Self {
        ComplexScalar {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexScalar {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(ComplexScalar {
            re: self.re.add(&o.re)?,
            im: self.im.add(&o.im)?,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(ComplexScalar {
            re: self.re.sub(&o.re)?,
            im: self.im.sub(&o.im)?,
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(ComplexScalar {
            re: self.re.mul(&o.re)?.sub(&self.im.mul(&o.im)?)?,
            im: self.re.mul(&o.im)?.add(&self.im.mul(&o.re)?)?,
        })
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Result<Self> {
        Ok(ComplexScalar {
            re: self.re.mul(s)?,
            im: self.im.mul(s)?,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let norm = o.re.mul(&o.re)?.add(&o.im.mul(&o.im)?)?;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.mul(&o.conj())?;
        Ok(ComplexScalar {
            re: num.re.div(&norm)?,
            im: num.im.div(&norm)?,
        })
    }

    pub fn approx_f64(&self) -> (f64, f64) {
        (self.re.approx_f64(), self.im.approx_f64())
    }
}

fn scalar_factor_str(s: &Scalar) -> String {
    match s {
        Scalar::Rat(_) => s.to_string(),
        _ => format!("({s})"),
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let neg_one = -Rat::one();
        let iterm = match &self.im {
            Scalar::Rat(r) if r.is_one() => "i".to_string(),
            Scalar::Rat(r) if *r == neg_one => "-i".to_string(),
            Scalar::Rat(r) => format!("{r}*i"),
            other => format!("({other})*i"),
        };
        if self.re.is_zero() {
            write!(f, "{iterm}")
        } else if let Some(tail) = iterm.strip_prefix('-') {
            write!(f, "{} - {tail}", scalar_factor_str(&self.re))
        } else {
            write!(f, "{} + {iterm}", scalar_factor_str(&self.re))
        }
    }
}
