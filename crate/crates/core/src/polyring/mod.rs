//! Sparse exact multivariate polynomials in two flavors: real polynomials
//! in x variables and Hermitian symmetric bipolynomials in (z, ~z), with
//! the structural conversions between them.
//!
//! A Hermitian symmetric polynomial stores coefficients keyed by pairs
//! (alpha, beta) of exponent vectors, one for the z side and one for the
//! conjugate side, and every public constructor rejects input that breaks
//! the symmetry `c_{ab} = conj(c_{ba})` instead of repairing it. Real
//! polynomials connect to Hermitian ones through [`moment_lift`] (substitute
//! x_j -> |z_j|^2) and [`realify`] (substitute x = (z + ~z)/2,
//! y = (z - ~z)/(2i)).

use crate::scalar::{ComplexScalar, Scalar};
use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of fixed arity, ordered by total degree then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(arity: usize) -> Self {
        MultiIndex(vec![0; arity])
    }

    /// The exponent vector of the single variable `j` (zero-based).
    pub fn var(arity: usize, j: usize) -> Self {
        let mut v = vec![0; arity];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Entrywise difference, or None when any entry would go negative.
    pub fn checked_sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn divides(&self, o: &MultiIndex) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// Append one extra variable carrying exponent `e`.
    pub fn pad(&self, e: u32) -> MultiIndex {
        let mut v = self.0.clone();
        v.push(e);
        MultiIndex(v)
    }

    /// Drop the last variable.
    pub fn truncate(&self) -> MultiIndex {
        let mut v = self.0.clone();
        v.pop();
        MultiIndex(v)
    }

    /// Widen to a larger arity by appending zero exponents.
    pub fn widen(&self, arity: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.resize(arity, 0);
        MultiIndex(v)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn mono_str(mi: &MultiIndex, prefix: &str) -> String {
    let mut parts = Vec::new();
    for (j, &e) in mi.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            parts.push(format!("{prefix}{}", j + 1));
        } else {
            parts.push(format!("{prefix}{}^{e}", j + 1));
        }
    }
    parts.join("*")
}

pub(crate) fn herm_mono_str(a: &MultiIndex, b: &MultiIndex) -> String {
    if a == b {
        let mut parts = Vec::new();
        for (j, &e) in a.0.iter().enumerate() {
            if e > 0 {
                parts.push(format!("|z{}|^{}", j + 1, 2 * e));
            }
        }
        return parts.join("*");
    }
    let zs = mono_str(a, "z");
    let ws = mono_str(b, "~z");
    match (zs.is_empty(), ws.is_empty()) {
        (true, true) => String::new(),
        (false, true) => zs,
        (true, false) => ws,
        (false, false) => format!("{zs}*{ws}"),
    }
}

fn scalar_is_composite(s: &Scalar) -> bool {
    use num_traits::Zero;
    match s {
        Scalar::Rat(_) => false,
        Scalar::Quad { v, .. } => !v.a.is_zero(),
        Scalar::Ext { a, .. } => !a.is_zero(),
        Scalar::Interval(_) => true,
    }
}

fn push_scalar_term(out: &mut String, first: bool, c: &Scalar, mono: &str) {
    use num_traits::One;
    if let Scalar::Rat(r) = c {
        let neg = r < &crate::scalar::Rat::from_integer(0.into());
        let mag = if neg { -r.clone() } else { r.clone() };
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono.to_string()
        } else {
            format!("{mag}*{mono}")
        };
        match (first, neg) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
        return;
    }
    if scalar_is_composite(c) {
        let body = if mono.is_empty() {
            format!("({c})")
        } else {
            format!("({c})*{mono}")
        };
        if !first {
            out.push_str(" + ");
        }
        out.push_str(&body);
        return;
    }
    let s = c.to_string();
    let (neg, core) = match s.strip_prefix('-') {
        Some(tail) => (true, tail.to_string()),
        None => (false, s),
    };
    let body = if mono.is_empty() {
        core
    } else {
        format!("{core}*{mono}")
    };
    match (first, neg) {
        (true, false) => out.push_str(&body),
        (true, true) => {
            out.push('-');
            out.push_str(&body);
        }
        (false, false) => {
            out.push_str(" + ");
            out.push_str(&body);
        }
        (false, true) => {
            out.push_str(" - ");
            out.push_str(&body);
        }
    }
}

pub(crate) fn push_complex_term(out: &mut String, first: bool, c: &ComplexScalar, mono: &str) {
    if c.is_real() {
        push_scalar_term(out, first, &c.re, mono);
        return;
    }
    let body = if mono.is_empty() {
        format!("({c})")
    } else {
        format!("({c})*{mono}")
    };
    if !first {
        out.push_str(" + ");
    }
    out.push_str(&body);
}

/// Real polynomial in variables x1..xn with exact scalar coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly {
    arity: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

fn insert_scalar(map: &mut BTreeMap<MultiIndex, Scalar>, key: MultiIndex, c: Scalar) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    match map.remove(&key) {
        None => {
            map.insert(key, c);
        }
        Some(old) => {
            let sum = old.add(&c)?;
            if !sum.is_zero() {
                map.insert(key, sum);
            }
        }
    }
    Ok(())
}

impl RealPoly {
    pub fn zero(arity: usize) -> Self {
        RealPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(MultiIndex::zero(arity), c);
        }
        RealPoly { arity, terms }
    }

    pub fn one(arity: usize) -> Self {
        RealPoly::constant(arity, Scalar::one())
    }

    pub fn variable(arity: usize, j: usize) -> Self {
        RealPoly::monomial(MultiIndex::var(arity, j), Scalar::one())
    }

    pub fn monomial(mi: MultiIndex, c: Scalar) -> Self {
        let arity = mi.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mi, c);
        }
        RealPoly { arity, terms }
    }

    pub fn from_terms(
        arity: usize,
        items: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (mi, c) in items {
            if mi.arity() != arity {
                return Err(Error::ArityMismatch(mi.arity(), arity));
            }
            insert_scalar(&mut terms, mi, c)?;
        }
        Ok(RealPoly { arity, terms })
    }

    /// One-variable polynomial with `coeffs[k]` the coefficient of x1^k.
    pub fn univariate(coeffs: &[Scalar]) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(MultiIndex(vec![k as u32]), c.clone());
            }
        }
        RealPoly { arity: 1, terms }
    }

    /// One-variable polynomial with integer coefficients.
    pub fn univariate_ints(coeffs: &[i64]) -> Self {
        let scalars: Vec<Scalar> = coeffs.iter().map(|&c| Scalar::from_int(c)).collect();
        RealPoly::univariate(&scalars)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mi: &MultiIndex) -> Scalar {
        self.terms.get(mi).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    /// The graded-lex largest term.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, o: &RealPoly) -> Result<RealPoly> {
        if self.arity != o.arity {
            return Err(Error::ArityMismatch(self.arity, o.arity));
        }
        let mut terms = self.terms.clone();
        for (mi, c) in &o.terms {
            insert_scalar(&mut terms, mi.clone(), c.clone())?;
        }
        Ok(RealPoly {
            arity: self.arity,
            terms,
        })
    }

    pub fn sub(&self, o: &RealPoly) -> Result<RealPoly> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RealPoly {
        RealPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<RealPoly> {
        if c.is_zero() {
            return Ok(RealPoly::zero(self.arity));
        }
        let mut terms = BTreeMap::new();
        for (mi, x) in &self.terms {
            insert_scalar(&mut terms, mi.clone(), x.mul(c)?)?;
        }
        Ok(RealPoly {
            arity: self.arity,
            terms,
        })
    }

    pub fn mul(&self, o: &RealPoly) -> Result<RealPoly> {
        if self.arity != o.arity {
            return Err(Error::ArityMismatch(self.arity, o.arity));
        }
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                insert_scalar(&mut terms, m1.add(m2), c1.mul(c2)?)?;
            }
        }
        Ok(RealPoly {
            arity: self.arity,
            terms,
        })
    }

    pub fn pow(&self, mut e: u32) -> Result<RealPoly> {
        let mut base = self.clone();
        let mut acc = RealPoly::one(self.arity);
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

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch(point.len(), self.arity));
        }
        let mut acc = Scalar::zero();
        for (mi, c) in &self.terms {
            let mut t = c.clone();
            for (j, &e) in mi.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[j].pow(e)?)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Substitute a polynomial for each variable.
    pub fn compose(&self, args: &[RealPoly]) -> Result<RealPoly> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch(args.len(), self.arity));
        }
        let arity = args.first().map_or(0, |a| a.arity);
        for a in args {
            if a.arity != arity {
                return Err(Error::ArityMismatch(a.arity, arity));
            }
        }
        let mut acc = RealPoly::zero(arity);
        for (mi, c) in &self.terms {
            let mut t = RealPoly::constant(arity, c.clone());
            for (j, &e) in mi.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&args[j].pow(e)?)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Counts of positive and negative coefficients.
    pub fn sign_counts(&self) -> Result<(usize, usize)> {
        let mut pos = 0;
        let mut neg = 0;
        for c in self.terms.values() {
            match c.sign_of()? {
                1 => pos += 1,
                -1 => neg += 1,
                _ => {}
            }
        }
        Ok((pos, neg))
    }

    /// Homogenize with a fresh last variable up to the total degree.
    pub fn homogenize(&self) -> RealPoly {
        let d = self.degree();
        RealPoly {
            arity: self.arity + 1,
            terms: self
                .terms
                .iter()
                .map(|(mi, c)| (mi.pad(d - mi.degree()), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (mi, c) in self.terms.iter().rev() {
            push_scalar_term(&mut out, first, c, &mono_str(mi, "x"));
            first = false;
        }
        write!(f, "{out}")
    }
}

/// Hermitian symmetric polynomial in z1..zn and their conjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct HermPoly {
    arity: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), ComplexScalar>,
}

fn insert_complex(
    map: &mut BTreeMap<(MultiIndex, MultiIndex), ComplexScalar>,
    key: (MultiIndex, MultiIndex),
    c: ComplexScalar,
) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    match map.remove(&key) {
        None => {
            map.insert(key, c);
        }
        Some(old) => {
            let sum = old.add(&c)?;
            if !sum.is_zero() {
                map.insert(key, sum);
            }
        }
    }
    Ok(())
}

impl HermPoly {
    pub fn zero(arity: usize) -> Self {
        HermPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(
                (MultiIndex::zero(arity), MultiIndex::zero(arity)),
                ComplexScalar::real(c),
            );
        }
        HermPoly { arity, terms }
    }

    pub fn one(arity: usize) -> Self {
        HermPoly::constant(arity, Scalar::one())
    }

    /// `|z_j|^2` as a polynomial (zero-based `j`).
    pub fn modulus_squared(arity: usize, j: usize) -> Self {
        let e = MultiIndex::var(arity, j);
        let mut terms = BTreeMap::new();
        terms.insert((e.clone(), e), ComplexScalar::one());
        HermPoly { arity, terms }
    }

    pub fn from_terms(
        arity: usize,
        items: impl IntoIterator<Item = (MultiIndex, MultiIndex, ComplexScalar)>,
    ) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (a, b, c) in items {
            if a.arity() != arity {
                return Err(Error::ArityMismatch(a.arity(), arity));
            }
            if b.arity() != arity {
                return Err(Error::ArityMismatch(b.arity(), arity));
            }
            insert_complex(&mut terms, (a, b), c)?;
        }
        let p = HermPoly { arity, terms };
        p.check_symmetry()?;
        Ok(p)
    }

    pub(crate) fn from_map_trusted(
        arity: usize,
        terms: BTreeMap<(MultiIndex, MultiIndex), ComplexScalar>,
    ) -> Self {
        HermPoly { arity, terms }
    }

    pub fn check_symmetry(&self) -> Result<()> {
        for ((a, b), c) in &self.terms {
            let mirror = self.terms.get(&(b.clone(), a.clone()));
            let expected = c.conj();
            match mirror {
                Some(m) if *m == expected => {}
                Some(m) => {
                    return Err(Error::NotHermitian(format!(
                        "coefficient at ({}) is {m}, expected {expected} to mirror ({})",
                        herm_mono_str(b, a),
                        herm_mono_str(a, b),
                    )));
                }
                None => {
                    return Err(Error::NotHermitian(format!(
                        "term ({}) has no conjugate partner",
                        herm_mono_str(a, b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &ComplexScalar)> {
        self.terms.iter()
    }

    pub(crate) fn terms_map(&self) -> &BTreeMap<(MultiIndex, MultiIndex), ComplexScalar> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &MultiIndex, b: &MultiIndex) -> ComplexScalar {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(ComplexScalar::zero)
    }

    /// (max |alpha|, max |beta|) over the support; (0,0) for the zero poly.
    pub fn bidegree(&self) -> (u32, u32) {
        let mut da = 0;
        let mut db = 0;
        for (a, b) in self.terms.keys() {
            da = da.max(a.degree());
            db = db.max(b.degree());
        }
        (da, db)
    }

    /// Some(d) when every term has |alpha| = |beta| = d.
    pub fn is_bihomogeneous(&self) -> Option<u32> {
        let mut keys = self.terms.keys();
        let d = match keys.next() {
            None => return Some(0),
            Some((a, b)) => {
                if a.degree() != b.degree() {
                    return None;
                }
                a.degree()
            }
        };
        for (a, b) in keys {
            if a.degree() != d || b.degree() != d {
                return None;
            }
        }
        Some(d)
    }

    /// True when only (alpha, alpha) entries appear.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|(a, b)| a == b)
    }

    pub fn add(&self, o: &HermPoly) -> Result<HermPoly> {
        if self.arity != o.arity {
            return Err(Error::ArityMismatch(self.arity, o.arity));
        }
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            insert_complex(&mut terms, k.clone(), c.clone())?;
        }
        Ok(HermPoly {
            arity: self.arity,
            terms,
        })
    }

    pub fn sub(&self, o: &HermPoly) -> Result<HermPoly> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> HermPoly {
        HermPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    /// Scale by a real scalar (complex scaling would break symmetry).
    pub fn scale(&self, c: &Scalar) -> Result<HermPoly> {
        if c.is_zero() {
            return Ok(HermPoly::zero(self.arity));
        }
        let mut terms = BTreeMap::new();
        for (k, x) in &self.terms {
            insert_complex(&mut terms, k.clone(), x.mul_scalar(c)?)?;
        }
        Ok(HermPoly {
            arity: self.arity,
            terms,
        })
    }

    pub fn mul(&self, o: &HermPoly) -> Result<HermPoly> {
        if self.arity != o.arity {
            return Err(Error::ArityMismatch(self.arity, o.arity));
        }
        let mut terms = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                insert_complex(&mut terms, (a1.add(a2), b1.add(b2)), c1.mul(c2)?)?;
            }
        }
        Ok(HermPoly {
            arity: self.arity,
            terms,
        })
    }

    pub fn pow(&self, mut e: u32) -> Result<HermPoly> {
        let mut base = self.clone();
        let mut acc = HermPoly::one(self.arity);
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

    /// Exact value of p(z, conj z); the imaginary part must vanish exactly.
    pub fn evaluate(&self, z: &[ComplexScalar]) -> Result<Scalar> {
        if z.len() != self.arity {
            return Err(Error::ArityMismatch(z.len(), self.arity));
        }
        let mut acc = ComplexScalar::zero();
        for ((a, b), c) in &self.terms {
            let mut t = c.clone();
            for (j, &e) in a.0.iter().enumerate() {
                if e > 0 {
                    let mut p = z[j].clone();
                    for _ in 1..e {
                        p = p.mul(&z[j])?;
                    }
                    t = t.mul(&p)?;
                }
            }
            for (j, &e) in b.0.iter().enumerate() {
                if e > 0 {
                    let zb = z[j].conj();
                    let mut p = zb.clone();
                    for _ in 1..e {
                        p = p.mul(&zb)?;
                    }
                    t = t.mul(&p)?;
                }
            }
            acc = acc.add(&t)?;
        }
        acc.expect_real().cloned()
    }

    /// Pad every term with powers of a fresh variable z_{n+1} up to the
    /// common bidegree; already-bihomogeneous input is returned unchanged.
    pub fn bihomogenize(&self) -> HermPoly {
        if self.is_bihomogeneous().is_some() {
            return self.clone();
        }
        let (da, db) = self.bidegree();
        let d = da.max(db);
        HermPoly {
            arity: self.arity + 1,
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| {
                    (
                        (a.pad(d - a.degree()), b.pad(d - b.degree())),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Set the last variable and its conjugate to 1.
    pub fn dehomogenize(&self) -> Result<HermPoly> {
        if self.arity == 0 {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            insert_complex(&mut terms, (a.truncate(), b.truncate()), c.clone())?;
        }
        Ok(HermPoly {
            arity: self.arity - 1,
            terms,
        })
    }

    /// Reinterpret in a larger variable count (extra variables unused).
    pub fn widen(&self, arity: usize) -> Result<HermPoly> {
        if arity < self.arity {
            return Err(Error::ArityMismatch(arity, self.arity));
        }
        Ok(HermPoly {
            arity,
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((a.widen(arity), b.widen(arity)), c.clone()))
                .collect(),
        })
    }
}

impl fmt::Display for HermPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            push_complex_term(&mut out, first, c, &herm_mono_str(a, b));
            first = false;
        }
        write!(f, "{out}")
    }
}

/// Substitute x_j -> |z_j|^2, turning a real polynomial into a diagonal
/// Hermitian symmetric one.
pub fn moment_lift(p: &RealPoly) -> HermPoly {
    let terms = p
        .terms
        .iter()
        .map(|(mi, c)| ((mi.clone(), mi.clone()), ComplexScalar::real(c.clone())))
        .collect();
    HermPoly {
        arity: p.arity,
        terms,
    }
}

/// Intermediate bipolynomial without the symmetry invariant, used while
/// expanding substitutions whose end result is Hermitian.
#[derive(Clone, Debug)]
pub(crate) struct BiPoly {
    pub(crate) arity: usize,
    pub(crate) terms: BTreeMap<(MultiIndex, MultiIndex), ComplexScalar>,
}

impl BiPoly {
    pub(crate) fn zero(arity: usize) -> Self {
        BiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn constant(arity: usize, c: ComplexScalar) -> Self {
        let mut p = BiPoly::zero(arity);
        if !c.is_zero() {
            p.terms
                .insert((MultiIndex::zero(arity), MultiIndex::zero(arity)), c);
        }
        p
    }

    pub(crate) fn term(arity: usize, a: MultiIndex, b: MultiIndex, c: ComplexScalar) -> Self {
        let mut p = BiPoly::zero(arity);
        if !c.is_zero() {
            p.terms.insert((a, b), c);
        }
        p
    }

    pub(crate) fn add(&self, o: &BiPoly) -> Result<BiPoly> {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            insert_complex(&mut terms, k.clone(), c.clone())?;
        }
        Ok(BiPoly {
            arity: self.arity,
            terms,
        })
    }

    pub(crate) fn mul(&self, o: &BiPoly) -> Result<BiPoly> {
        let mut terms = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                insert_complex(&mut terms, (a1.add(a2), b1.add(b2)), c1.mul(c2)?)?;
            }
        }
        Ok(BiPoly {
            arity: self.arity,
            terms,
        })
    }

    pub(crate) fn pow(&self, mut e: u32) -> Result<BiPoly> {
        let mut base = self.clone();
        let mut acc = BiPoly::constant(self.arity, ComplexScalar::one());
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

    pub(crate) fn into_herm(self) -> Result<HermPoly> {
        let p = HermPoly {
            arity: self.arity,
            terms: self.terms,
        };
        p.check_symmetry()?;
        Ok(p)
    }
}

/// Substitute x_j = (z_j + ~z_j)/2 and y_j = (z_j - ~z_j)/(2i) into a real
/// polynomial in (x_1..x_n, y_1..y_n), producing a Hermitian symmetric
/// polynomial in z_1..z_n.
pub fn realify(rho: &RealPoly) -> Result<HermPoly> {
    if rho.arity % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "realify needs an even arity split as (x, y); got {}",
            rho.arity
        )));
    }
    let n = rho.arity / 2;
    let half = ComplexScalar::ratio(1, 2);
    let neg_half_i = ComplexScalar::imag(Scalar::ratio(-1, 2));
    let half_i = ComplexScalar::imag(Scalar::ratio(1, 2));
    let mut acc = BiPoly::zero(n);
    for (mi, c) in &rho.terms {
        let mut t = BiPoly::constant(n, ComplexScalar::real(c.clone()));
        for j in 0..n {
            let e = mi.0[j];
            if e > 0 {
                let x_j = BiPoly::term(n, MultiIndex::var(n, j), MultiIndex::zero(n), half.clone())
                    .add(&BiPoly::term(
                        n,
                        MultiIndex::zero(n),
                        MultiIndex::var(n, j),
                        half.clone(),
                    ))?;
                t = t.mul(&x_j.pow(e)?)?;
            }
        }
        for j in 0..n {
            let e = mi.0[n + j];
            if e > 0 {
                let y_j = BiPoly::term(
                    n,
                    MultiIndex::var(n, j),
                    MultiIndex::zero(n),
                    neg_half_i.clone(),
                )
                .add(&BiPoly::term(
                    n,
                    MultiIndex::zero(n),
                    MultiIndex::var(n, j),
                    half_i.clone(),
                ))?;
                t = t.mul(&y_j.pow(e)?)?;
            }
        }
        acc = acc.add(&t)?;
    }
    acc.into_herm()
}
