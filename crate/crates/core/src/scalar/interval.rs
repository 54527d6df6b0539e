//! Rational interval enclosures with shared, memoized refinement.
//!
//! Values outside the supported quadratic towers (such as cos(pi/16)) are
//! nodes in an expression DAG. Each node caches the outward bounds it
//! computed per precision level, and refinement re-evaluates the DAG at
//! twice the working precision, intersecting with the previous bounds, so
//! an enclosure only ever shrinks and every bound stays valid.
//!
//! Precision at level `k` is `64 << k` bits; the default cap is level 6
//! (4096 bits). Set `HERMSIG_INTERVAL_MAX_LEVEL` to change the cap.

use super::{rat, QPair, Rat};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

static MAX_LEVEL: Lazy<u32> = Lazy::new(|| {
    std::env::var("HERMSIG_INTERVAL_MAX_LEVEL")
        .ok()
        .and_then(|v| v.parse::<u32>().ok())
        .map(|v| v.min(12))
        .unwrap_or(6)
});

fn bits(level: u32) -> u64 {
    64u64 << level
}

/// Round outward onto the dyadic grid with denominator `2^bits`, so
/// endpoint rationals never outgrow the working precision.
fn dyadic_out(lo: Rat, hi: Rat, bits: u64) -> (Rat, Rat) {
    let scale = BigInt::one() << bits;
    let down = (lo * Rat::from_integer(scale.clone())).floor().to_integer();
    let up = (hi * Rat::from_integer(scale.clone())).ceil().to_integer();
    (Rat::new(down, scale.clone()), Rat::new(up, scale))
}

#[derive(Debug)]
enum Op {
    Const(Rat),
    QuadLeaf { d: BigInt, v: QPair },
    Sqrt(Arc<Node>),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Neg(Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
}

#[derive(Debug)]
struct Node {
    op: Op,
    cache: Mutex<BTreeMap<u32, (Rat, Rat)>>,
}

impl Node {
    fn new(op: Op) -> Arc<Node> {
        Arc::new(Node {
            op,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    fn eval(&self, level: u32) -> Result<(Rat, Rat)> {
        {
            let cache = self.cache.lock().unwrap();
            if let Some((_, bounds)) = cache.range(level..).next() {
                return Ok(bounds.clone());
            }
        }
        let raw = match &self.op {
            Op::Const(r) => (r.clone(), r.clone()),
            Op::QuadLeaf { d, v } => quad_bounds(d, v, bits(level)),
            Op::Sqrt(c) => {
                let (clo, chi) = c.eval(level)?;
                if chi.is_negative() {
                    return Err(Error::NegativeRadicand(format!(
                        "interval [{clo}, {chi}]"
                    )));
                }
                let clo = if clo.is_negative() { Rat::zero() } else { clo };
                (sqrt_lower(&clo, bits(level)), sqrt_upper(&chi, bits(level)))
            }
            Op::Add(x, y) => {
                let a = x.eval(level)?;
                let b = y.eval(level)?;
                (a.0 + b.0, a.1 + b.1)
            }
            Op::Sub(x, y) => {
                let a = x.eval(level)?;
                let b = y.eval(level)?;
                (a.0 - b.1, a.1 - b.0)
            }
            Op::Neg(x) => {
                let a = x.eval(level)?;
                (-a.1, -a.0)
            }
            Op::Mul(x, y) => {
                let a = x.eval(level)?;
                let b = y.eval(level)?;
                mul_bounds(&a, &b)
            }
            Op::Div(x, y) => {
                let mut den = y.eval(level)?;
                if den.0.is_zero() && den.1.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                if contains_zero(&den) {
                    let mut excluded = false;
                    for l in (level + 1)..=*MAX_LEVEL {
                        den = y.eval(l)?;
                        if den.0.is_zero() && den.1.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        if !contains_zero(&den) {
                            excluded = true;
                            break;
                        }
                    }
                    if !excluded {
                        return Err(Error::IndeterminateSign {
                            level: *MAX_LEVEL,
                            width: decimal(&(&den.1 - &den.0), 40, true),
                        });
                    }
                }
                let num = x.eval(level)?;
                mul_bounds(&num, &(den.1.recip(), den.0.recip()))
            }
        };
        let (mut lo, mut hi) = match &self.op {
            Op::Const(_) | Op::QuadLeaf { .. } | Op::Sqrt(_) => raw,
            _ => dyadic_out(raw.0, raw.1, bits(level)),
        };
        let mut cache = self.cache.lock().unwrap();
        if let Some((_, prev)) = cache.range(..level).next_back() {
            if prev.0 > lo {
                lo = prev.0.clone();
            }
            if prev.1 < hi {
                hi = prev.1.clone();
            }
        }
        if lo > hi {
            return Err(Error::Internal("interval bounds crossed".into()));
        }
        cache.insert(level, (lo.clone(), hi.clone()));
        Ok((lo, hi))
    }
}

fn contains_zero(b: &(Rat, Rat)) -> bool {
    !b.0.is_positive() && !b.1.is_negative()
}

fn mul_bounds(a: &(Rat, Rat), b: &(Rat, Rat)) -> (Rat, Rat) {
    let cands = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let mut lo = cands[0].clone();
    let mut hi = cands[0].clone();
    for c in &cands[1..] {
        if *c < lo {
            lo = c.clone();
        }
        if *c > hi {
            hi = c.clone();
        }
    }
    (lo, hi)
}

fn quad_bounds(d: &BigInt, v: &QPair, bits: u64) -> (Rat, Rat) {
    let scale = BigInt::one() << bits;
    let root = (d * (&scale * &scale)).sqrt();
    let lo_s = Rat::new(root.clone(), scale.clone());
    let hi_s = Rat::new(root + BigInt::one(), scale);
    let (blo, bhi) = if v.b.is_negative() {
        (&v.b * &hi_s, &v.b * &lo_s)
    } else {
        (&v.b * &lo_s, &v.b * &hi_s)
    };
    (&v.a + blo, &v.a + bhi)
}

fn sqrt_lower(x: &Rat, bits: u64) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = (x * Rat::from_integer(&scale * &scale)).floor().to_integer();
    Rat::new(scaled.sqrt(), scale)
}

fn sqrt_upper(x: &Rat, bits: u64) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = (x * Rat::from_integer(&scale * &scale)).ceil().to_integer();
    Rat::new(scaled.sqrt() + BigInt::one(), scale)
}

pub(crate) fn decimal(r: &Rat, digits: u32, round_up: bool) -> String {
    let mut scale = BigInt::one();
    for _ in 0..digits {
        scale = scale * BigInt::from(10);
    }
    let scaled = r * Rat::from_integer(scale.clone());
    let n = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let neg = n.is_negative();
    let (int, frac) = n.abs().div_rem(&scale);
    format!(
        "{}{}.{:0>width$}",
        if neg { "-" } else { "" },
        int,
        frac.to_string(),
        width = digits as usize
    )
}

/// Certified enclosure of a real value, backed by a shared expression DAG.
#[derive(Clone, Debug)]
pub struct Interval {
    node: Arc<Node>,
    lo: Rat,
    hi: Rat,
    level: u32,
}

impl Interval {
    pub fn from_rat(r: Rat) -> Self {
        Interval {
            node: Node::new(Op::Const(r.clone())),
            lo: r.clone(),
            hi: r,
            level: 0,
        }
    }

    pub(crate) fn quad_leaf(d: BigInt, v: QPair) -> Self {
        let (lo, hi) = quad_bounds(&d, &v, bits(0));
        Interval {
            node: Node::new(Op::QuadLeaf { d, v }),
            lo,
            hi,
            level: 0,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_known_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let mid = (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let level = self.level.max(o.level);
        let (lo, hi) = dyadic_out(&self.lo + &o.lo, &self.hi + &o.hi, bits(level));
        Interval {
            node: Node::new(Op::Add(self.node.clone(), o.node.clone())),
            lo,
            hi,
            level,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let level = self.level.max(o.level);
        let (lo, hi) = dyadic_out(&self.lo - &o.hi, &self.hi - &o.lo, bits(level));
        Interval {
            node: Node::new(Op::Sub(self.node.clone(), o.node.clone())),
            lo,
            hi,
            level,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            node: Node::new(Op::Neg(self.node.clone())),
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            level: self.level,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let level = self.level.max(o.level);
        let raw = mul_bounds(&(self.lo.clone(), self.hi.clone()), &(o.lo.clone(), o.hi.clone()));
        let (lo, hi) = dyadic_out(raw.0, raw.1, bits(level));
        Interval {
            node: Node::new(Op::Mul(self.node.clone(), o.node.clone())),
            lo,
            hi,
            level,
        }
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if o.is_known_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut den = (o.lo.clone(), o.hi.clone());
        let mut level = self.level.max(o.level);
        if contains_zero(&den) {
            let mut excluded = false;
            for l in (o.level + 1)..=*MAX_LEVEL {
                den = o.node.eval(l)?;
                if den.0.is_zero() && den.1.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                if !contains_zero(&den) {
                    level = level.max(l);
                    excluded = true;
                    break;
                }
            }
            if !excluded {
                return Err(Error::IndeterminateSign {
                    level: *MAX_LEVEL,
                    width: decimal(&(&den.1 - &den.0), 40, true),
                });
            }
        }
        let rec = (den.1.recip(), den.0.recip());
        let raw = mul_bounds(&(self.lo.clone(), self.hi.clone()), &rec);
        let (lo, hi) = dyadic_out(raw.0, raw.1, bits(level));
        Ok(Interval {
            node: Node::new(Op::Div(self.node.clone(), o.node.clone())),
            lo,
            hi,
            level,
        })
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.hi.is_negative() {
            return Err(Error::NegativeRadicand(self.to_string()));
        }
        let lo_in = if self.lo.is_negative() {
            Rat::zero()
        } else {
            self.lo.clone()
        };
        Ok(Interval {
            node: Node::new(Op::Sqrt(self.node.clone())),
            lo: sqrt_lower(&lo_in, bits(self.level)),
            hi: sqrt_upper(&self.hi, bits(self.level)),
            level: self.level,
        })
    }

    /// Re-evaluate one level deeper; returns false once the cap is hit.
    pub fn refine(&mut self) -> Result<bool> {
        if self.level >= *MAX_LEVEL {
            return Ok(false);
        }
        self.level += 1;
        let (lo, hi) = self.node.eval(self.level)?;
        if lo > self.lo {
            self.lo = lo;
        }
        if hi < self.hi {
            self.hi = hi;
        }
        Ok(true)
    }

    /// Refine until the enclosure is at most `eps` wide.
    pub fn refine_to_width(&mut self, eps: &Rat) -> Result<()> {
        loop {
            if self.width() <= *eps {
                return Ok(());
            }
            if !self.refine()? {
                return Err(Error::IndeterminateSign {
                    level: self.level,
                    width: decimal(&self.width(), 40, true),
                });
            }
        }
    }

    /// Sign certified by refinement; exact zeros report 0, anything that
    /// still straddles zero at the precision cap is an error.
    pub fn certified_sign(&self) -> Result<i8> {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        let mut level = self.level;
        loop {
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            if lo.is_zero() && hi.is_zero() {
                return Ok(0);
            }
            if level >= *MAX_LEVEL {
                return Err(Error::IndeterminateSign {
                    level,
                    width: decimal(&(&hi - &lo), 40, true),
                });
            }
            level += 1;
            let (l, h) = self.node.eval(level)?;
            if l > lo {
                lo = l;
            }
            if h < hi {
                hi = h;
            }
        }
    }
}

impl PartialEq for Interval {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.node, &o.node)
            || (self.is_point() && o.is_point() && self.lo == o.lo)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            decimal(&self.lo, 40, false),
            decimal(&self.hi, 40, true)
        )
    }
}

/// Enclosure of `cos(pi / 2^m)` for `m >= 2`, built by the half-angle
/// chain `cos(t/2) = sqrt((1 + cos t)/2)` from `cos(pi/4) = sqrt(2)/2`.
pub fn cos_pi_over_pow2(m: u32) -> Result<Interval> {
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "cos(pi/2^m) needs m >= 2, got m = {m}"
        )));
    }
    if m == 2 {
        return Ok(Interval::quad_leaf(
            BigInt::from(2),
            QPair::new(Rat::zero(), rat(1, 2)),
        ));
    }
    let prev = cos_pi_over_pow2(m - 1)?;
    let one = Interval::from_rat(Rat::one());
    let half = Interval::from_rat(rat(1, 2));
    one.add(&prev).mul(&half).sqrt()
}

/// Enclosures of `cos(j*pi/2^m)` for odd `j` in `1..2^(m-1)`, ascending,
/// via the Chebyshev recurrence on `cos(pi/2^m)`.
pub fn odd_cosines(m: u32) -> Result<Vec<Interval>> {
    let c = cos_pi_over_pow2(m)?;
    let two = Interval::from_rat(super::rat_int(2));
    let mut prev = Interval::from_rat(Rat::one());
    let mut cur = c.clone();
    let mut out = vec![c.clone()];
    for k in 2..(1u32 << (m - 1)) {
        let next = two.mul(&c).mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
        if k % 2 == 1 {
            out.push(cur.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn sqrt2() -> Interval {
        Interval::quad_leaf(BigInt::from(2), QPair::new(Rat::zero(), Rat::one()))
    }

    #[test]
    fn sqrt_two_enclosure_contains_truth() {
        let i = sqrt2();
        let two = rat_int(2);
        assert!(i.lo() * i.lo() <= two && two <= i.hi() * i.hi());
        assert!(i.width() < rat(1, 1_000_000_000));
    }

    #[test]
    fn refinement_shrinks_width() {
        let mut i = sqrt2();
        let before = i.width();
        assert!(i.refine().unwrap());
        assert!(i.width() < before);
    }

    #[test]
    fn half_angle_chain_is_consistent() {
        let c2 = cos_pi_over_pow2(2).unwrap();
        let c3 = cos_pi_over_pow2(3).unwrap();
        let two = Interval::from_rat(rat_int(2));
        let one = Interval::from_rat(Rat::one());
        let mut diff = two.mul(&c3).mul(&c3).sub(&one).sub(&c2);
        diff.refine_to_width(&rat(1, 1_000_000_000)).unwrap();
        assert!(!diff.lo().is_positive() && !diff.hi().is_negative());
    }

    #[test]
    fn signs_certify_by_refinement() {
        let c3 = cos_pi_over_pow2(3).unwrap();
        let c2 = cos_pi_over_pow2(2).unwrap();
        assert_eq!(c3.sub(&c2).certified_sign().unwrap(), 1);
        assert_eq!(c2.sub(&c3).certified_sign().unwrap(), -1);
    }

    #[test]
    fn chebyshev_cosines_are_ordered() {
        let cs = odd_cosines(4).unwrap();
        assert_eq!(cs.len(), 4);
        for w in cs.windows(2) {
            assert_eq!(w[1].sub(&w[0]).certified_sign().unwrap(), -1);
        }
        assert_eq!(cs[0].certified_sign().unwrap(), 1);
        assert_eq!(cs[3].certified_sign().unwrap(), 1);
    }

    #[test]
    fn division_by_straddling_interval_is_indeterminate() {
        let c2 = cos_pi_over_pow2(2).unwrap();
        let other = cos_pi_over_pow2(2).unwrap();
        let straddle = c2.sub(&other);
        let e = Interval::from_rat(Rat::one()).div(&straddle);
        assert!(matches!(e, Err(Error::IndeterminateSign { .. })));
    }

    #[test]
    fn width_certification_reaches_tiny_targets() {
        let mut c = cos_pi_over_pow2(6).unwrap();
        let eps = Rat::new(BigInt::one(), BigInt::from(10u8).pow(30));
        c.refine_to_width(&eps).unwrap();
        assert!(c.width() <= eps);
    }
}
