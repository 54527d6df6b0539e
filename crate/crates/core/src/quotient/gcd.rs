//! Multivariate polynomial gcd over the Gaussian rationals, via recursive
//! content and primitive-part splitting with a primitive pseudo-remainder
//! sequence in the leading variable.

use crate::polyring::MultiIndex;
use crate::scalar::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Element of Q(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GaussQ {
    pub re: Rat,
    pub im: Rat,
}

impl GaussQ {
    pub fn one() -> Self {
        GaussQ {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn div(&self, o: &GaussQ) -> GaussQ {
        let norm = &o.re * &o.re + &o.im * &o.im;
        GaussQ {
            re: (&self.re * &o.re + &self.im * &o.im) / &norm,
            im: (&self.im * &o.re - &self.re * &o.im) / &norm,
        }
    }
}

/// Sparse polynomial over Q(i); the arity travels separately.
pub(crate) type GMap = BTreeMap<MultiIndex, GaussQ>;

pub(crate) fn g_constant(vars: usize, c: GaussQ) -> GMap {
    let mut m = GMap::new();
    if !c.is_zero() {
        m.insert(MultiIndex::zero(vars), c);
    }
    m
}

fn g_insert(map: &mut GMap, key: MultiIndex, c: GaussQ) {
    if c.is_zero() {
        return;
    }
    match map.remove(&key) {
        None => {
            map.insert(key, c);
        }
        Some(old) => {
            let sum = old.add(&c);
            if !sum.is_zero() {
                map.insert(key, sum);
            }
        }
    }
}

fn g_sub(a: &GMap, b: &GMap) -> GMap {
    let mut out = a.clone();
    for (k, c) in b {
        g_insert(
            &mut out,
            k.clone(),
            GaussQ {
                re: -c.re.clone(),
                im: -c.im.clone(),
            },
        );
    }
    out
}

fn g_mul(a: &GMap, b: &GMap) -> GMap {
    let mut out = GMap::new();
    for (k1, c1) in a {
        for (k2, c2) in b {
            g_insert(&mut out, k1.add(k2), c1.mul(c2));
        }
    }
    out
}

/// Exact single-divisor division with graded-lex leading terms; None when
/// the division leaves a remainder.
pub(crate) fn g_divexact(f: &GMap, g: &GMap) -> Option<GMap> {
    let (lt_key, lt_coeff) = g.iter().next_back()?;
    let mut work = f.clone();
    let mut quot = GMap::new();
    while let Some((k, c)) = work.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
        let shift = k.checked_sub(lt_key)?;
        let u = c.div(lt_coeff);
        work.remove(&k);
        for (gk, gc) in g {
            if gk == lt_key {
                continue;
            }
            let moved = gk.add(&shift);
            let delta = u.mul(gc);
            g_insert(
                &mut work,
                moved,
                GaussQ {
                    re: -delta.re,
                    im: -delta.im,
                },
            );
        }
        g_insert(&mut quot, shift, u);
    }
    Some(quot)
}

fn leading_coeff(f: &GMap) -> Option<&GaussQ> {
    f.iter().next_back().map(|(_, c)| c)
}

/// Scale so the graded-lex leading coefficient is exactly 1.
pub(crate) fn g_monic(f: &GMap) -> GMap {
    let Some(lc) = leading_coeff(f).cloned() else {
        return f.clone();
    };
    f.iter()
        .map(|(k, c)| (k.clone(), c.div(&lc)))
        .collect()
}

pub(crate) fn g_is_constant(f: &GMap) -> bool {
    f.keys().all(|k| k.is_zero())
}

/// View in the first variable: exponent of x1 -> coefficient polynomial
/// in the remaining variables.
fn to_univ(f: &GMap) -> BTreeMap<u32, GMap> {
    let mut out: BTreeMap<u32, GMap> = BTreeMap::new();
    for (k, c) in f {
        let head = k.0[0];
        let tail = MultiIndex::new(k.0[1..].to_vec());
        g_insert(out.entry(head).or_default(), tail, c.clone());
    }
    out.retain(|_, v| !v.is_empty());
    out
}

fn from_univ(u: &BTreeMap<u32, GMap>) -> GMap {
    let mut out = GMap::new();
    for (head, poly) in u {
        for (tail, c) in poly {
            let mut v = Vec::with_capacity(tail.arity() + 1);
            v.push(*head);
            v.extend_from_slice(&tail.0);
            g_insert(&mut out, MultiIndex::new(v), c.clone());
        }
    }
    out
}

fn univ_degree(u: &BTreeMap<u32, GMap>) -> Option<u32> {
    u.keys().next_back().copied()
}

fn univ_scale(u: &BTreeMap<u32, GMap>, c: &GMap) -> BTreeMap<u32, GMap> {
    u.iter()
        .map(|(d, p)| (*d, g_mul(p, c)))
        .filter(|(_, p)| !p.is_empty())
        .collect()
}

fn univ_sub(a: &BTreeMap<u32, GMap>, b: &BTreeMap<u32, GMap>) -> BTreeMap<u32, GMap> {
    let mut out = a.clone();
    for (d, p) in b {
        let cur = out.remove(d).unwrap_or_default();
        let next = g_sub(&cur, p);
        if !next.is_empty() {
            out.insert(*d, next);
        }
    }
    out
}

fn univ_shift(u: &BTreeMap<u32, GMap>, by: u32) -> BTreeMap<u32, GMap> {
    u.iter().map(|(d, p)| (d + by, p.clone())).collect()
}

/// One pseudo-remainder step chain: reduce `a` below the degree of `b`
/// using only ring multiplications by the leading coefficient of `b`.
fn pseudo_rem(a: &BTreeMap<u32, GMap>, b: &BTreeMap<u32, GMap>) -> BTreeMap<u32, GMap> {
    let db = univ_degree(b).expect("pseudo_rem by zero");
    let lb = b.get(&db).unwrap().clone();
    let mut rem = a.clone();
    while let Some(dr) = univ_degree(&rem) {
        if dr < db {
            break;
        }
        let lr = rem.get(&dr).unwrap().clone();
        let scaled = univ_scale(&rem, &lb);
        let shifted = univ_scale(&univ_shift(b, dr - db), &lr);
        rem = univ_sub(&scaled, &shifted);
    }
    rem
}

fn univ_content(u: &BTreeMap<u32, GMap>, vars_rest: usize) -> GMap {
    let coeffs: Vec<&GMap> = u.values().collect();
    gcd_list(&coeffs, vars_rest)
}

fn univ_primitive(u: &BTreeMap<u32, GMap>, vars_rest: usize) -> BTreeMap<u32, GMap> {
    if u.is_empty() {
        return u.clone();
    }
    let cont = univ_content(u, vars_rest);
    u.iter()
        .map(|(d, p)| {
            (
                *d,
                g_divexact(p, &cont).expect("content must divide its coefficients"),
            )
        })
        .collect()
}

/// Gcd of two polynomials in `vars` variables, monic in graded-lex.
pub(crate) fn g_gcd(f: &GMap, g: &GMap, vars: usize) -> GMap {
    if f.is_empty() {
        return g_monic(g);
    }
    if g.is_empty() {
        return g_monic(f);
    }
    if vars == 0 {
        return g_constant(0, GaussQ::one());
    }
    let uf = to_univ(f);
    let ug = to_univ(g);
    let rest = vars - 1;
    let cont_f = univ_content(&uf, rest);
    let cont_g = univ_content(&ug, rest);
    let shared_cont = g_gcd(&cont_f, &cont_g, rest);
    let mut a = univ_primitive(&uf, rest);
    let mut b = univ_primitive(&ug, rest);
    if univ_degree(&a) < univ_degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = univ_primitive(&r, rest);
    }
    let pp = univ_primitive(&a, rest);
    let assembled = from_univ(&univ_scale(&pp, &shared_cont));
    g_monic(&assembled)
}

pub(crate) fn gcd_list(items: &[&GMap], vars: usize) -> GMap {
    let mut acc = GMap::new();
    for item in items {
        acc = g_gcd(&acc, item, vars);
        if !acc.is_empty() && g_is_constant(&acc) {
            return g_constant(vars, GaussQ::one());
        }
    }
    acc
}
