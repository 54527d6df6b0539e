//! Exact division by the hyperquadric form and its real-variable analogue,
//! extraction of squared holomorphic factors, projective degree, and the
//! search for a power of the squared norm that makes a form diagonalizable
//! with no negative or zero eigenvalues.
//!
//! Membership in the principal ideal generated by r = |z1|^2 + ... +
//! |zn|^2 - |z_{n+1}|^2 is the same as divisibility, because a single
//! polynomial generates a Groebner basis of its own ideal. Division is
//! plain monomial reduction against a chosen pivot term z_j*~z_j of r;
//! the reduction is confluent, so the quotient and remainder are
//! canonical, and both inherit Hermitian symmetry from the input because
//! conjugation swaps each reducible support pair while fixing r.

use crate::hermitian_form::{inertia, InertiaResult};
use crate::polyring::{mono_str, push_complex_term, HermPoly, MultiIndex, RealPoly};
use crate::scalar::{ComplexScalar, Rat, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

mod gcd;

use gcd::{g_divexact, g_is_constant, g_monic, gcd_list, GMap, GaussQ};

/// r = |z1|^2 + ... + |zn|^2 - |z_{n+1}|^2, in n+1 variables.
pub fn sphere_form(n: usize) -> HermPoly {
    let arity = n + 1;
    let mut terms = BTreeMap::new();
    for j in 0..n {
        let e = MultiIndex::var(arity, j);
        terms.insert((e.clone(), e), ComplexScalar::one());
    }
    let last = MultiIndex::var(arity, n);
    terms.insert((last.clone(), last), ComplexScalar::from_int(-1));
    HermPoly::from_map_trusted(arity, terms)
}

/// x1 + ... + xn - x_{n+1}, the moment image of the hyperquadric.
pub fn hyperplane_form(n: usize) -> RealPoly {
    let arity = n + 1;
    let mut p = RealPoly::zero(arity);
    for j in 0..n {
        p = p.add(&RealPoly::variable(arity, j)).unwrap();
    }
    p.sub(&RealPoly::variable(arity, n)).unwrap()
}

/// x1 + ... + xn - 1, the affine chart of the same divisor.
pub fn hyperplane_form_affine(n: usize) -> RealPoly {
    let mut p = RealPoly::constant(n, Scalar::from_int(-1));
    for j in 0..n {
        p = p.add(&RealPoly::variable(n, j)).unwrap();
    }
    p
}

/// Exact division record: dividend = divisor * quotient + remainder.
#[derive(Clone, Debug)]
pub struct DivisionWitness<P> {
    pub divisor: P,
    pub quotient: P,
    pub remainder: P,
    pub member: bool,
}

impl DivisionWitness<HermPoly> {
    /// Re-multiply and compare against the dividend.
    pub fn verify(&self, dividend: &HermPoly) -> Result<bool> {
        let back = self.divisor.mul(&self.quotient)?.add(&self.remainder)?;
        Ok(back == *dividend && self.member == self.remainder.is_zero())
    }
}

impl DivisionWitness<RealPoly> {
    pub fn verify(&self, dividend: &RealPoly) -> Result<bool> {
        let back = self.divisor.mul(&self.quotient)?.add(&self.remainder)?;
        Ok(back == *dividend && self.member == self.remainder.is_zero())
    }
}

type PairKey = (MultiIndex, MultiIndex);

fn acc_complex(map: &mut BTreeMap<PairKey, ComplexScalar>, key: PairKey, c: ComplexScalar) -> Result<()> {
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

fn acc_scalar(map: &mut BTreeMap<MultiIndex, Scalar>, key: MultiIndex, c: Scalar) -> Result<()> {
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

/// Divide by r using the pivot term z_1*~z_1.
pub fn divide_by_r(p: &HermPoly) -> Result<DivisionWitness<HermPoly>> {
    divide_by_r_pivot(p, 0)
}

/// Divide by r, reducing against z_{pivot+1}*~z_{pivot+1}. Every pivot
/// yields the same membership answer; the quotient and remainder are the
/// canonical ones for that pivot's reduction order.
pub fn divide_by_r_pivot(p: &HermPoly, pivot: usize) -> Result<DivisionWitness<HermPoly>> {
    let arity = p.arity();
    if arity < 2 {
        return Err(Error::InvalidInput(format!(
            "division by r needs at least two variables, got {arity}"
        )));
    }
    if pivot >= arity {
        return Err(Error::InvalidInput(format!(
            "pivot variable {pivot} out of range for arity {arity}"
        )));
    }
    let divisor = sphere_form(arity - 1);
    let lt_key = {
        let e = MultiIndex::var(arity, pivot);
        (e.clone(), e)
    };
    let lt_coeff = if pivot + 1 == arity {
        ComplexScalar::from_int(-1)
    } else {
        ComplexScalar::one()
    };

    let mut work = p.terms_map().clone();
    let mut quot: BTreeMap<PairKey, ComplexScalar> = BTreeMap::new();
    loop {
        let target = work
            .iter()
            .rev()
            .find(|((a, b), _)| lt_key.0.divides(a) && lt_key.1.divides(b))
            .map(|(k, c)| (k.clone(), c.clone()));
        let Some(((a, b), c)) = target else { break };
        let shift = (
            a.checked_sub(&lt_key.0).unwrap(),
            b.checked_sub(&lt_key.1).unwrap(),
        );
        let u = c.div(&lt_coeff)?;
        work.remove(&(a, b));
        for ((da, db), dc) in divisor.terms() {
            if (da, db) == (&lt_key.0, &lt_key.1) {
                continue;
            }
            let moved = (da.add(&shift.0), db.add(&shift.1));
            acc_complex(&mut work, moved, u.mul(dc)?.neg())?;
        }
        acc_complex(&mut quot, shift, u)?;
    }

    let quotient = HermPoly::from_map_trusted(arity, quot);
    let remainder = HermPoly::from_map_trusted(arity, work);
    let member = remainder.is_zero();
    Ok(DivisionWitness {
        divisor,
        quotient,
        remainder,
        member,
    })
}

/// Exact division of real polynomials by a divisor whose graded-lex
/// leading coefficient is invertible.
pub fn divide_real(p: &RealPoly, divisor: &RealPoly) -> Result<DivisionWitness<RealPoly>> {
    if p.arity() != divisor.arity() {
        return Err(Error::ArityMismatch(p.arity(), divisor.arity()));
    }
    let (lt_key, lt_coeff) = divisor
        .leading_term()
        .map(|(k, c)| (k.clone(), c.clone()))
        .ok_or(Error::DivisionByZero)?;

    let mut work: BTreeMap<MultiIndex, Scalar> =
        p.terms().map(|(k, c)| (k.clone(), c.clone())).collect();
    let mut quot: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
    loop {
        let target = work
            .iter()
            .rev()
            .find_map(|(k, c)| lt_key.divides(k).then(|| (k.clone(), c.clone())));
        let Some((key, c)) = target else { break };
        let shift = key.checked_sub(&lt_key).unwrap();
        let u = c.div(&lt_coeff)?;
        work.remove(&key);
        for (dk, dc) in divisor.terms() {
            if *dk == lt_key {
                continue;
            }
            acc_scalar(&mut work, dk.add(&shift), u.mul(dc)?.neg())?;
        }
        acc_scalar(&mut quot, shift, u)?;
    }

    let quotient = RealPoly::from_terms(p.arity(), quot)?;
    let remainder = RealPoly::from_terms(p.arity(), work)?;
    let member = remainder.is_zero();
    Ok(DivisionWitness {
        divisor: divisor.clone(),
        quotient,
        remainder,
        member,
    })
}

/// Holomorphic polynomial in z with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloPoly {
    arity: usize,
    terms: BTreeMap<MultiIndex, ComplexScalar>,
}

impl HoloPoly {
    pub fn one(arity: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(MultiIndex::zero(arity), ComplexScalar::one());
        HoloPoly { arity, terms }
    }

    pub fn monomial(mi: MultiIndex, c: ComplexScalar) -> Self {
        let arity = mi.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mi, c);
        }
        HoloPoly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(k, c)| k.is_zero() && c.is_real() && c.re.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ComplexScalar)> {
        self.terms.iter()
    }

    /// |h|^2 as a Hermitian polynomial: h(z) * conj(h)(~z).
    pub fn squared_modulus(&self) -> HermPoly {
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &self.terms {
                let coeff = ca.mul(&cb.conj()).expect("rational product");
                let key = (a.clone(), b.clone());
                match terms.remove(&key) {
                    None => {
                        terms.insert(key, coeff);
                    }
                    Some(old) => {
                        let sum: ComplexScalar =
                            old.add(&coeff).expect("rational sum");
                        if !sum.is_zero() {
                            terms.insert(key, sum);
                        }
                    }
                }
            }
        }
        HermPoly::from_map_trusted(self.arity, terms)
    }

    fn from_gmap(arity: usize, g: &GMap) -> Self {
        let terms = g
            .iter()
            .map(|(k, c)| {
                (
                    k.clone(),
                    ComplexScalar::new(
                        Scalar::from_rat(c.re.clone()),
                        Scalar::from_rat(c.im.clone()),
                    ),
                )
            })
            .collect();
        HoloPoly { arity, terms }
    }
}

impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            push_complex_term(&mut out, first, c, &mono_str(k, "z"));
            first = false;
        }
        write!(f, "{out}")
    }
}

fn gaussian(c: &ComplexScalar) -> Result<GaussQ> {
    let describe = |s: &Scalar| -> Result<Rat> {
        s.as_rat().cloned().ok_or_else(|| {
            Error::UnsupportedCoefficients(format!(
                "holomorphic content needs Gaussian-rational coefficients, got {s}"
            ))
        })
    };
    Ok(GaussQ {
        re: describe(&c.re)?,
        im: describe(&c.im)?,
    })
}

/// The monic gcd h of the z-coefficient slices of p, together with the
/// exact cofactor q in p = |h|^2 * q.
pub fn holomorphic_content(p: &HermPoly) -> Result<(HoloPoly, HermPoly)> {
    if p.is_bihomogeneous().is_none() {
        return Err(Error::NotBihomogeneous(p.bidegree().0));
    }
    let arity = p.arity();
    if p.is_zero() {
        return Ok((HoloPoly::one(arity), p.clone()));
    }
    let mut slices: BTreeMap<MultiIndex, GMap> = BTreeMap::new();
    for ((a, b), c) in p.terms() {
        let g = gaussian(c)?;
        slices
            .entry(b.clone())
            .or_default()
            .insert(a.clone(), g);
    }
    let slice_refs: Vec<&GMap> = slices.values().collect();
    let h_map = g_monic(&gcd_list(&slice_refs, arity));
    let h = HoloPoly::from_gmap(arity, &h_map);
    if g_is_constant(&h_map) {
        return Ok((HoloPoly::one(arity), p.clone()));
    }

    let mut q_terms: BTreeMap<PairKey, ComplexScalar> = BTreeMap::new();
    let conj_h: GMap = h_map
        .iter()
        .map(|(k, c)| {
            (
                k.clone(),
                GaussQ {
                    re: c.re.clone(),
                    im: -c.im.clone(),
                },
            )
        })
        .collect();
    for (b, slice) in &slices {
        let reduced = g_divexact(slice, &h_map).ok_or_else(|| {
            Error::Internal("slice gcd does not divide a slice".into())
        })?;
        for (a, c) in &reduced {
            q_terms.insert(
                (a.clone(), b.clone()),
                ComplexScalar::new(
                    Scalar::from_rat(c.re.clone()),
                    Scalar::from_rat(c.im.clone()),
                ),
            );
        }
    }
    let partial = HermPoly::from_map_trusted(arity, q_terms);
    let conj_side = divide_conj_side(&partial, &conj_h)?;
    Ok((h, conj_side))
}

/// Divide p(z, ~z) by conj(h)(~z) exactly, treating the ~z block as the
/// main variables.
fn divide_conj_side(p: &HermPoly, conj_h: &GMap) -> Result<HermPoly> {
    let arity = p.arity();
    let (lt_b, lt_coeff) = conj_h
        .iter()
        .next_back()
        .map(|(k, c)| (k.clone(), c.clone()))
        .ok_or(Error::DivisionByZero)?;
    let lt_c = ComplexScalar::new(
        Scalar::from_rat(lt_coeff.re.clone()),
        Scalar::from_rat(lt_coeff.im.clone()),
    );
    let mut work = p.terms_map().clone();
    let mut quot: BTreeMap<PairKey, ComplexScalar> = BTreeMap::new();
    loop {
        let target = work
            .iter()
            .rev()
            .find(|((_, b), _)| lt_b.divides(b))
            .map(|(k, c)| (k.clone(), c.clone()));
        let Some(((a, b), c)) = target else { break };
        let shift = b.checked_sub(&lt_b).unwrap();
        let u = c.div(&lt_c)?;
        work.remove(&(a.clone(), b));
        for (hk, hc) in conj_h {
            if *hk == lt_b {
                continue;
            }
            let hcs = ComplexScalar::new(
                Scalar::from_rat(hc.re.clone()),
                Scalar::from_rat(hc.im.clone()),
            );
            acc_complex(
                &mut work,
                (a.clone(), hk.add(&shift)),
                u.mul(&hcs)?.neg(),
            )?;
        }
        acc_complex(&mut quot, (a, shift), u)?;
    }
    if !work.is_empty() {
        return Err(Error::Internal(
            "conjugate factor does not divide the cofactor".into(),
        ));
    }
    Ok(HermPoly::from_map_trusted(arity, quot))
}

/// Result of dividing out every squared holomorphic factor.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub input: HermPoly,
    pub reduced: HermPoly,
    pub content: HoloPoly,
    pub degree: u32,
}

/// Projective degree: twice the bidegree that remains once the
/// holomorphic content is trivial.
pub fn projective_degree(p: &HermPoly) -> Result<ReductionResult> {
    if p.is_zero() {
        return Err(Error::InvalidInput(
            "projective degree of the zero polynomial".into(),
        ));
    }
    let mut reduced = p.clone();
    let mut content = HoloPoly::one(p.arity());
    loop {
        let (h, q) = holomorphic_content(&reduced)?;
        if h.is_one() {
            break;
        }
        content = multiply_holo(&content, &h);
        reduced = q;
    }
    let d = reduced
        .is_bihomogeneous()
        .ok_or(Error::NotBihomogeneous(reduced.bidegree().0))?;
    Ok(ReductionResult {
        input: p.clone(),
        reduced,
        content,
        degree: 2 * d,
    })
}

fn multiply_holo(a: &HoloPoly, b: &HoloPoly) -> HoloPoly {
    let mut terms: BTreeMap<MultiIndex, ComplexScalar> = BTreeMap::new();
    for (k1, c1) in &a.terms {
        for (k2, c2) in &b.terms {
            let key = k1.add(k2);
            let prod = c1.mul(c2).expect("rational product");
            match terms.remove(&key) {
                None => {
                    terms.insert(key, prod);
                }
                Some(old) => {
                    let sum = old.add(&prod).expect("rational sum");
                    if !sum.is_zero() {
                        terms.insert(key, sum);
                    }
                }
            }
        }
    }
    HoloPoly {
        arity: a.arity,
        terms,
    }
}

/// Fixed sample points with Gaussian-rational coordinates, used to reject
/// obviously non-positive inputs before a stabilization search.
fn sample_points(arity: usize) -> Vec<Vec<ComplexScalar>> {
    let mut points = Vec::new();
    for j in 0..arity {
        let mut p = vec![ComplexScalar::zero(); arity];
        p[j] = ComplexScalar::one();
        points.push(p);
    }
    points.push(vec![ComplexScalar::one(); arity]);
    points.push(
        (0..arity)
            .map(|j| {
                if j % 2 == 0 {
                    ComplexScalar::new(Scalar::one(), Scalar::one())
                } else {
                    ComplexScalar::new(Scalar::one(), Scalar::from_int(-1))
                }
            })
            .collect(),
    );
    points.push(
        (0..arity)
            .map(|j| ComplexScalar::ratio(1, (j + 2) as i64))
            .collect(),
    );
    points.push(
        (0..arity)
            .map(|j| ComplexScalar::new(Scalar::ratio(j as i64 + 1, 2), Scalar::ratio(1, 3)))
            .collect(),
    );
    points
}

/// Smallest d <= d_max such that the squared norm to the d-th power times
/// p has only positive eigenvalues and no kernel, together with the
/// verifying inertia. Positivity of p is screened at sample points only;
/// a strictly negative sample refuses the search outright.
pub fn stabilization_search(
    p: &HermPoly,
    d_max: u32,
) -> Result<Option<(u32, InertiaResult)>> {
    if p.is_zero() {
        return Err(Error::InvalidInput(
            "stabilization search needs a nonzero polynomial".into(),
        ));
    }
    if p.is_bihomogeneous().is_none() {
        return Err(Error::NotBihomogeneous(p.bidegree().0));
    }
    let arity = p.arity();
    for point in sample_points(arity) {
        let value = p.evaluate(&point)?;
        if value.sign_of()? < 0 {
            let coords: Vec<String> = point.iter().map(|c| c.to_string()).collect();
            return Err(Error::Refused(format!(
                "not nonnegative at z = ({}), value {value}",
                coords.join(", ")
            )));
        }
    }
    let mut norm = HermPoly::zero(arity);
    for j in 0..arity {
        norm = norm.add(&HermPoly::modulus_squared(arity, j))?;
    }
    let mut current = p.clone();
    for d in 0..=d_max {
        let res = inertia(&current)?;
        if res.neg == 0 && res.zero == 0 {
            return Ok(Some((d, res)));
        }
        if d < d_max {
            current = current.mul(&norm)?;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::moment_lift;
    use proptest::prelude::*;

    fn lift_of(terms: &[(&[u32], i64)]) -> HermPoly {
        let arity = terms[0].0.len();
        let p = RealPoly::from_terms(
            arity,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex::new(e.to_vec()), Scalar::from_int(*c))),
        )
        .unwrap();
        moment_lift(&p)
    }

    #[test]
    fn projectivized_whitney_quadratic_is_a_member() {
        let p = lift_of(&[(&[2, 0, 0], 1), (&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[0, 0, 2], -1)]);
        let w = divide_by_r(&p).unwrap();
        assert!(w.member);
        assert!(w.verify(&p).unwrap());
        assert_eq!(w.quotient.bidegree(), (1, 1));
        assert_eq!(w.quotient, lift_of(&[(&[1, 0, 0], 1), (&[0, 0, 1], 1)]));
        w.quotient.check_symmetry().unwrap();
    }

    #[test]
    fn r_divides_itself_with_unit_quotient() {
        let r = sphere_form(2);
        let w = divide_by_r(&r).unwrap();
        assert!(w.member);
        assert_eq!(w.quotient, HermPoly::one(3));
        assert!(w.remainder.is_zero());
    }

    #[test]
    fn single_modulus_is_not_a_member() {
        let p = HermPoly::modulus_squared(3, 0);
        let w = divide_by_r(&p).unwrap();
        assert!(!w.member);
        assert!(!w.remainder.is_zero());
        assert!(w.verify(&p).unwrap());
        let cone_point = vec![
            ComplexScalar::one(),
            ComplexScalar::zero(),
            ComplexScalar::one(),
        ];
        assert!(sphere_form(2).evaluate(&cone_point).unwrap().is_zero());
        assert_eq!(p.evaluate(&cone_point).unwrap(), Scalar::one());
        w.remainder.check_symmetry().unwrap();
        w.quotient.check_symmetry().unwrap();
    }

    fn power_sum_recurrence(d: u32) -> RealPoly {
        let x = RealPoly::variable(2, 0);
        let y = RealPoly::variable(2, 1);
        let mut s_prev = x.clone();
        let mut s_cur = x.mul(&x).unwrap().add(&y.scale(&Scalar::from_int(2)).unwrap()).unwrap();
        if d == 1 {
            return s_prev;
        }
        for _ in 2..d {
            let next = x
                .mul(&s_cur)
                .unwrap()
                .add(&y.mul(&s_prev).unwrap())
                .unwrap();
            s_prev = s_cur;
            s_cur = next;
        }
        s_cur
    }

    #[test]
    fn symmetrized_cubic_minus_one_divides_the_affine_line() {
        let s3 = power_sum_recurrence(3);
        let y_cubed = RealPoly::monomial(MultiIndex::new(vec![0, 3]), Scalar::one());
        let f3 = s3.add(&y_cubed).unwrap();
        let expected = RealPoly::from_terms(
            2,
            vec![
                (MultiIndex::new(vec![3, 0]), Scalar::from_int(1)),
                (MultiIndex::new(vec![1, 1]), Scalar::from_int(3)),
                (MultiIndex::new(vec![0, 3]), Scalar::from_int(1)),
            ],
        )
        .unwrap();
        assert_eq!(f3, expected);
        let dividend = f3.sub(&RealPoly::one(2)).unwrap();
        let w = divide_real(&dividend, &hyperplane_form_affine(2)).unwrap();
        assert!(w.member);
        assert!(w.verify(&dividend).unwrap());
    }

    fn whitney_raw(d: u32) -> RealPoly {
        let x = RealPoly::variable(2, 0);
        let y = RealPoly::variable(2, 1);
        let mut tail = RealPoly::zero(2);
        for k in 0..d {
            tail = tail.add(&x.pow(k).unwrap()).unwrap();
        }
        x.pow(d).unwrap().add(&y.mul(&tail).unwrap()).unwrap()
    }

    #[test]
    fn whitney_is_one_on_the_affine_line() {
        for d in 1..=6 {
            let w_d = whitney_raw(d);
            let x = RealPoly::variable(1, 0);
            let one_minus_x = RealPoly::one(1).sub(&x).unwrap();
            let restricted = w_d.compose(&[x, one_minus_x]).unwrap();
            assert_eq!(restricted, RealPoly::one(1));
            let dividend = w_d.sub(&RealPoly::one(2)).unwrap();
            let witness = divide_real(&dividend, &hyperplane_form_affine(2)).unwrap();
            assert!(witness.member);
            assert!(witness.verify(&dividend).unwrap());
        }
    }

    #[test]
    fn a_lone_variable_is_not_on_the_line() {
        let p = RealPoly::variable(2, 0);
        let w = divide_real(&p, &hyperplane_form_affine(2)).unwrap();
        assert!(!w.member);
        assert!(w.verify(&p).unwrap());
    }

    #[test]
    fn content_strips_monomial_factors() {
        for m in 1..=3u32 {
            let p = moment_lift(
                &RealPoly::from_terms(
                    3,
                    vec![
                        (MultiIndex::new(vec![m + 1, 0, 0]), Scalar::one()),
                        (MultiIndex::new(vec![m, 1, 0]), Scalar::one()),
                        (MultiIndex::new(vec![m, 0, 1]), Scalar::from_int(-1)),
                    ],
                )
                .unwrap(),
            );
            let (h, q) = holomorphic_content(&p).unwrap();
            assert_eq!(
                h,
                HoloPoly::monomial(
                    MultiIndex::new(vec![m, 0, 0]),
                    ComplexScalar::one()
                )
            );
            assert_eq!(q, sphere_form(2));
            assert_eq!(h.squared_modulus().mul(&q).unwrap(), p);
        }
    }

    #[test]
    fn sphere_form_has_trivial_content() {
        let r = sphere_form(2);
        let (h, q) = holomorphic_content(&r).unwrap();
        assert!(h.is_one());
        assert_eq!(q, r);
    }

    #[test]
    fn content_with_two_variables() {
        let h = HoloPoly::monomial(MultiIndex::new(vec![1, 1, 0]), ComplexScalar::one());
        let p = h.squared_modulus().mul(&sphere_form(2)).unwrap();
        let (found, q) = holomorphic_content(&p).unwrap();
        assert_eq!(found, h);
        assert_eq!(q, sphere_form(2));
    }

    #[test]
    fn projective_degrees_match_the_reduction() {
        let m = 3u32;
        let p = lift_of(&[
            (&[4, 0, 0], 1),
            (&[3, 1, 0], 1),
            (&[3, 0, 1], -1),
        ]);
        let red = projective_degree(&p).unwrap();
        assert_eq!(red.degree, 2);
        assert_eq!(red.reduced, sphere_form(2));

        let q = lift_of(&[
            (&[4, 0, 0], 1),
            (&[3, 1, 0], 1),
            (&[0, 0, 4], 1),
            (&[3, 0, 1], -1),
        ]);
        let red_q = projective_degree(&q).unwrap();
        assert_eq!(red_q.degree, 2 * m + 2);
        assert!(red_q.content.is_one());

        let half = Scalar::ratio(1, 2);
        let balanced = lift_of(&[(&[1, 0, 0], 3), (&[0, 1, 0], 3)])
            .scale(&half)
            .unwrap()
            .sub(&HermPoly::modulus_squared(3, 2).scale(&half).unwrap())
            .unwrap();
        assert_eq!(projective_degree(&balanced).unwrap().degree, 2);

        let cube = lift_of(&[(&[3], 1)]);
        let red_cube = projective_degree(&cube).unwrap();
        assert_eq!(red_cube.degree, 0);
        assert_eq!(red_cube.reduced, HermPoly::one(1));
    }

    #[test]
    fn pivot_choice_does_not_change_membership() {
        let member = sphere_form(2)
            .mul(&lift_of(&[(&[1, 0, 0], 2), (&[0, 0, 1], 5)]))
            .unwrap();
        let non_member = lift_of(&[(&[2, 0, 0], 1), (&[0, 1, 0], 1)]);
        for pivot in 0..3 {
            assert!(divide_by_r_pivot(&member, pivot).unwrap().member);
            assert!(!divide_by_r_pivot(&non_member, pivot).unwrap().member);
        }
    }

    #[test]
    fn constructed_products_return_their_cofactor() {
        let v = lift_of(&[(&[1, 0, 0], 7), (&[0, 1, 0], -2), (&[0, 0, 1], 1)]);
        let p = sphere_form(2).mul(&v).unwrap();
        let w = divide_by_r(&p).unwrap();
        assert!(w.member);
        assert_eq!(w.quotient, v);
    }

    #[test]
    fn stabilization_examples() {
        let r_eps = {
            let x = RealPoly::variable(2, 0);
            let y = RealPoly::variable(2, 1);
            let sum4 = x.add(&y).unwrap().pow(4).unwrap();
            let cross = x
                .mul(&y)
                .unwrap()
                .pow(2)
                .unwrap()
                .scale(&Scalar::ratio(13, 2))
                .unwrap();
            moment_lift(&sum4.sub(&cross).unwrap())
        };
        let sq = r_eps.mul(&r_eps).unwrap();
        let (d, res) = stabilization_search(&sq, 3).unwrap().unwrap();
        assert_eq!(d, 0);
        assert_eq!(res.triple(), (9, 0, 0));

        let norm_sq = lift_of(&[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
        let (d, _) = stabilization_search(&norm_sq, 2).unwrap().unwrap();
        assert_eq!(d, 0);
    }

    #[test]
    fn skewed_quadratic_needs_several_powers() {
        let p = moment_lift(
            &RealPoly::from_terms(
                2,
                vec![
                    (MultiIndex::new(vec![2, 0]), Scalar::ratio(11, 10)),
                    (MultiIndex::new(vec![1, 1]), Scalar::ratio(-9, 5)),
                    (MultiIndex::new(vec![0, 2]), Scalar::ratio(11, 10)),
                ],
            )
            .unwrap(),
        );
        let found = stabilization_search(&p, 12).unwrap();
        let (d, res) = found.unwrap();
        assert!(d > 0);
        assert_eq!(res.neg, 0);
        assert_eq!(res.zero, 0);
        assert_eq!(res.pos, d as usize + 3);
        if d > 0 {
            let mut shy = p.clone();
            let mut norm = HermPoly::zero(2);
            for j in 0..2 {
                norm = norm.add(&HermPoly::modulus_squared(2, j)).unwrap();
            }
            for _ in 0..d - 1 {
                shy = shy.mul(&norm).unwrap();
            }
            let prior = inertia(&shy).unwrap();
            assert!(prior.neg > 0 || prior.zero > 0);
        }
        assert!(stabilization_search(&p, 1).unwrap().is_none());
    }

    #[test]
    fn negative_samples_refuse_the_search() {
        let p = lift_of(&[(&[1, 0], 1), (&[0, 1], -1)]);
        let err = stabilization_search(&p, 2);
        assert!(matches!(err, Err(Error::Refused(_))));
    }

    fn small_lift() -> impl Strategy<Value = HermPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..2), -4i64..=4), 1..5).prop_map(
            |items| {
                let p = RealPoly::from_terms(
                    3,
                    items
                        .into_iter()
                        .map(|((a, b, c), v)| (MultiIndex::new(vec![a, b, c]), Scalar::from_int(v))),
                )
                .unwrap();
                moment_lift(&p)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn division_identity_always_holds(p in small_lift()) {
            let w = divide_by_r(&p).unwrap();
            prop_assert!(w.verify(&p).unwrap());
            w.quotient.check_symmetry().unwrap();
            w.remainder.check_symmetry().unwrap();
        }

        #[test]
        fn squared_factors_do_not_move_the_degree(
            p in small_lift(),
            e in proptest::collection::vec(0u32..3, 3),
        ) {
            let hom = p.bihomogenize();
            if !hom.is_zero() {
                let arity = hom.arity();
                let mut exps = e;
                exps.resize(arity, 0);
                let h = HoloPoly::monomial(MultiIndex::new(exps), ComplexScalar::one());
                let scaled = h.squared_modulus().mul(&hom).unwrap();
                let d1 = projective_degree(&hom).unwrap().degree;
                let d2 = projective_degree(&scaled).unwrap().degree;
                prop_assert_eq!(d1, d2);
            }
        }

        #[test]
        fn reduced_polynomials_are_fixed_points(p in small_lift()) {
            let hom = p.bihomogenize();
            if !hom.is_zero() {
                let red = projective_degree(&hom).unwrap();
                let again = projective_degree(&red.reduced).unwrap();
                prop_assert!(again.content.is_one());
                prop_assert_eq!(again.degree, red.degree);
                prop_assert_eq!(
                    red.content.squared_modulus().mul(&red.reduced).unwrap(),
                    hom
                );
            }
        }
    }
}
