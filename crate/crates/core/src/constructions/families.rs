//! Worked families and small explicit identities: the gap polynomials,
//! the Whitney sequence, and the low-degree examples that anchor the
//! projective-degree and squared-norm behavior.

use super::{check_member, check_pair, check_triple, pair_str, Certificate};
use crate::hermitian_form::inertia;
use crate::polyring::{moment_lift, HermPoly, MultiIndex, RealPoly};
use crate::quotient::{divide_real, hyperplane_form_affine, projective_degree, sphere_form};
use crate::scalar::{rat, rat_int, ComplexScalar, Rat, Scalar};
use crate::{Error, Result};
use num_traits::{Signed, Zero};

/// `s_1 = x`, `s_2 = x^2 + 2y`, `s_d = x*s_(d-1) + y*s_(d-2)`: power sums
/// of the two roots of `u^2 - x*u - y`.
pub(crate) fn root_power_sum(d: u32) -> Result<RealPoly> {
    let x = RealPoly::variable(2, 0);
    let y = RealPoly::variable(2, 1);
    let mut prev = x.clone();
    let mut cur = x.mul(&x)?.add(&y.scale(&Scalar::from_int(2))?)?;
    match d {
        1 => return Ok(prev),
        2 => return Ok(cur),
        _ => {}
    }
    for _ in 3..=d {
        let next = x.mul(&cur)?.add(&y.mul(&prev)?)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `f_d = s_d + (-1)^(d+1) y^d`, which restricts to 1 on `x + y = 1`.
pub(crate) fn gap_poly(d: u32) -> Result<RealPoly> {
    let y = RealPoly::variable(2, 1);
    let tail = y.pow(d)?;
    let signed_tail = if d % 2 == 1 { tail } else { tail.neg() };
    root_power_sum(d)?.add(&signed_tail)
}

/// Degree-`d` member of the gap family: two real variables, lifted and
/// homogenized into three complex ones, with a full-rank cofactor.
pub fn gap_family(d: u32) -> Result<Certificate> {
    if d < 1 {
        return Err(Error::InvalidInput(format!(
            "the gap family starts at d = 1, got {d}"
        )));
    }
    let f = gap_poly(d)?;
    let mut cert = Certificate::new("gap");
    cert.param("d", d);
    cert.poly_real("f", &f);
    let affine = f.sub(&RealPoly::one(2))?;
    let witness = divide_real(&affine, &hyperplane_form_affine(2))?;
    if !witness.verify(&affine)? {
        return Err(Error::Internal(
            "affine division witness failed to re-multiply".into(),
        ));
    }
    cert.certify(
        "affine divisibility",
        "f - 1 is divisible by x1 + x2 - 1",
        witness.member,
    )?;
    let p = moment_lift(&affine).bihomogenize();
    cert.poly("p", &p);
    let cofactor = check_member(&mut cert, "p", &p)?;
    let half = (d as usize) / 2;
    let expected = if d % 2 == 1 { (half + 2, 1) } else { (half + 1, 2) };
    check_pair(&mut cert, "p", &p, expected)?;
    cert.check(
        "rank of the cofactor",
        (d as usize) * (d as usize + 1) / 2,
        inertia(&cofactor)?.rank(),
    )?;
    Ok(cert)
}

/// `W_d = x^d + y*(1 + x + ... + x^(d-1))`, identically 1 on `y = 1 - x`.
pub(crate) fn whitney_poly(d: u32) -> Result<RealPoly> {
    let x = RealPoly::variable(2, 0);
    let y = RealPoly::variable(2, 1);
    let mut geometric = RealPoly::zero(2);
    for k in 0..d {
        geometric = geometric.add(&x.pow(k)?)?;
    }
    x.pow(d)?.add(&y.mul(&geometric)?)
}

/// Certified Whitney element of degree `d`: signature pair `(d+1, 1)`.
pub fn whitney(d: u32) -> Result<Certificate> {
    if d < 1 {
        return Err(Error::InvalidInput(format!(
            "the Whitney sequence starts at d = 1, got {d}"
        )));
    }
    let w = whitney_poly(d)?;
    let mut cert = Certificate::new("whitney");
    cert.param("d", d);
    cert.poly_real("W", &w);
    let x = RealPoly::variable(1, 0);
    let restricted = w.compose(&[x.clone(), RealPoly::one(1).sub(&x)?])?;
    cert.certify(
        "line restriction",
        "W(x, 1 - x) = 1",
        restricted == RealPoly::one(1),
    )?;
    let p = moment_lift(&w.sub(&RealPoly::one(2))?).bihomogenize();
    cert.poly("p", &p);
    check_member(&mut cert, "p", &p)?;
    check_pair(&mut cert, "p", &p, (d as usize + 1, 1))?;
    Ok(cert)
}

fn herm_term(za: &[u32], wb: &[u32], num: i64, den: i64) -> (MultiIndex, MultiIndex, ComplexScalar) {
    (
        MultiIndex::new(za.to_vec()),
        MultiIndex::new(wb.to_vec()),
        ComplexScalar::new(Scalar::ratio(num, den), Scalar::zero()),
    )
}

/// The cubic three-term product: two sparse forms whose product has four
/// terms, with inertia triples in the minimal ambient at each stage.
pub fn triple_product_example() -> Result<Certificate> {
    let p = HermPoly::from_terms(
        3,
        [
            herm_term(&[1, 0, 0], &[0, 0, 1], 1, 1),
            herm_term(&[0, 1, 0], &[0, 1, 0], 1, 1),
            herm_term(&[0, 0, 1], &[1, 0, 0], 1, 1),
        ],
    )?;
    let q = HermPoly::from_terms(
        3,
        [
            herm_term(&[2, 0, 0], &[0, 0, 2], 1, 1),
            herm_term(&[0, 2, 0], &[0, 2, 0], 1, 1),
            herm_term(&[0, 0, 2], &[2, 0, 0], 1, 1),
            herm_term(&[1, 0, 1], &[1, 0, 1], -1, 1),
            herm_term(&[1, 1, 0], &[0, 1, 1], -1, 1),
            herm_term(&[0, 1, 1], &[1, 1, 0], -1, 1),
        ],
    )?;
    let expected = HermPoly::from_terms(
        3,
        [
            herm_term(&[3, 0, 0], &[0, 0, 3], 1, 1),
            herm_term(&[0, 3, 0], &[0, 3, 0], 1, 1),
            herm_term(&[0, 0, 3], &[3, 0, 0], 1, 1),
            herm_term(&[1, 1, 1], &[1, 1, 1], -3, 1),
        ],
    )?;
    let product = p.mul(&q)?;
    let mut cert = Certificate::new("example 14");
    cert.poly("p", &p);
    cert.poly("q", &q);
    cert.poly("p*q", &product);
    cert.certify(
        "product identity",
        "p * q collapses to the four-term cubic",
        product == expected,
    )?;
    check_triple(&mut cert, "p", &p, (2, 1, 0))?;
    check_triple(&mut cert, "q", &q, (3, 3, 0))?;
    check_triple(&mut cert, "p*q", &product, (2, 2, 6))?;
    Ok(cert)
}

/// `(x1 + x2)^4 - (6 + eps)*x1^2*x2^2`, lifted. Inside `0 < eps < 1` the
/// lift has signature pair `(4, 1)` while its square is positive definite.
pub fn squared_norm_example(eps: Rat) -> Result<Certificate> {
    let x1 = RealPoly::variable(2, 0);
    let x2 = RealPoly::variable(2, 1);
    let middle = Scalar::from_rat(rat_int(6) + eps.clone());
    let quartic = x1
        .add(&x2)?
        .pow(4)?
        .sub(&x1.pow(2)?.mul(&x2.pow(2)?)?.scale(&middle)?)?;
    let p = moment_lift(&quartic);
    let square = p.mul(&p)?;
    let mut cert = Certificate::new("example 4.1");
    cert.param("epsilon", &eps);
    cert.poly("p", &p);
    cert.poly("p^2", &square);
    if eps.is_positive() && eps < rat_int(1) {
        check_pair(&mut cert, "p", &p, (4, 1))?;
        check_pair(&mut cert, "p^2", &square, (9, 0))?;
    } else {
        cert.record("signature pair of p", pair_str(inertia(&p)?.pair()));
        cert.record("signature pair of p^2", pair_str(inertia(&square)?.pair()));
    }
    Ok(cert)
}

fn diagonal_poly(arity: usize, entries: &[(&[u32], Rat)]) -> Result<HermPoly> {
    HermPoly::from_terms(
        arity,
        entries.iter().map(|(exps, c)| {
            let mi = MultiIndex::new(exps.to_vec());
            (
                mi.clone(),
                mi,
                ComplexScalar::new(Scalar::from_rat(c.clone()), Scalar::zero()),
            )
        }),
    )
}

/// Three polynomials that agree as functions on the hyperquadric yet
/// carry projective degrees 2, `2m + 2`, and 2.
pub fn degree_growth_example(m: u32) -> Result<Certificate> {
    if m < 1 {
        return Err(Error::InvalidInput(format!(
            "the degree growth example needs m >= 1, got {m}"
        )));
    }
    let r = sphere_form(2);
    let p = HermPoly::modulus_squared(3, 0).pow(m)?.mul(&r)?;
    let q = diagonal_poly(
        3,
        &[
            (&[m + 1, 0, 0], rat_int(1)),
            (&[m, 1, 0], rat_int(1)),
            (&[0, 0, m + 1], rat_int(1)),
            (&[m, 0, 1], rat_int(-1)),
        ],
    )?;
    let plane = diagonal_poly(
        3,
        &[
            (&[1, 0, 0], rat(3, 2)),
            (&[0, 1, 0], rat(3, 2)),
            (&[0, 0, 1], rat(-1, 2)),
        ],
    )?;
    let mut cert = Certificate::new("example 6.1");
    cert.param("m", m);
    cert.poly("p", &p);
    cert.poly("q", &q);
    cert.poly("plane", &plane);
    check_member(&mut cert, "p", &p)?;
    check_pair(&mut cert, "p", &p, (2, 1))?;
    check_pair(&mut cert, "q", &q, (3, 1))?;
    check_pair(&mut cert, "plane", &plane, (2, 1))?;
    cert.check("projective degree of p", 2, projective_degree(&p)?.degree)?;
    cert.check(
        "projective degree of q",
        2 * m + 2,
        projective_degree(&q)?.degree,
    )?;
    cert.check(
        "projective degree of plane",
        2,
        projective_degree(&plane)?.degree,
    )?;
    Ok(cert)
}

/// Lift of `(l1*x + l2*y + l3*t) * (x + y - t)`.
pub(crate) fn line_multiple_poly(lambda: &(Rat, Rat, Rat)) -> Result<HermPoly> {
    let x = RealPoly::variable(3, 0);
    let y = RealPoly::variable(3, 1);
    let t = RealPoly::variable(3, 2);
    let ell = x
        .scale(&Scalar::from_rat(lambda.0.clone()))?
        .add(&y.scale(&Scalar::from_rat(lambda.1.clone()))?)?
        .add(&t.scale(&Scalar::from_rat(lambda.2.clone()))?)?;
    let line = x.add(&y)?.sub(&t)?;
    Ok(moment_lift(&ell.mul(&line)?))
}

fn classify_direct(a: &Rat, b: &Rat, c: &Rat) -> Option<(usize, usize)> {
    let zero = Rat::zero();
    if a.is_zero() && *c > zero && c < b {
        return Some((3, 2));
    }
    if a.is_zero() && *c > zero && c == b {
        return Some((3, 1));
    }
    if c > a && a >= b && *b > zero {
        return Some((5, 1));
    }
    if a == c && c > b && *b > zero {
        return Some((4, 1));
    }
    if b > c && c > a && *a > zero {
        return Some((4, 2));
    }
    None
}

fn classify_line_multiple(lambda: &(Rat, Rat, Rat)) -> Option<(usize, usize)> {
    let (a, b, c) = lambda;
    classify_direct(a, b, c).or_else(|| {
        classify_direct(&-a.clone(), &-b.clone(), &-c.clone()).map(|(p, q)| (q, p))
    })
}

/// Multiples of the hyperplane section by a varying linear form: always a
/// member, with signature pair read off the coefficient shape when the
/// coefficients fall in a recognized region.
pub fn line_multiple_example(lambda: (Rat, Rat, Rat)) -> Result<Certificate> {
    let h = line_multiple_poly(&lambda)?;
    let mut cert = Certificate::new("example 7.1");
    cert.param(
        "lambda",
        format!("({}, {}, {})", lambda.0, lambda.1, lambda.2),
    );
    cert.poly("h", &h);
    check_member(&mut cert, "h", &h)?;
    match classify_line_multiple(&lambda) {
        Some(expected) => check_pair(&mut cert, "h", &h, expected)?,
        None => cert.record("signature pair of h", pair_str(inertia(&h)?.pair())),
    }
    Ok(cert)
}

/// Lift of `(x - y) * (x + y - t)`: a balanced signature pair from two
/// indefinite linear factors.
pub fn split_difference_example() -> Result<Certificate> {
    let x = RealPoly::variable(3, 0);
    let y = RealPoly::variable(3, 1);
    let t = RealPoly::variable(3, 2);
    let difference = x.sub(&y)?;
    let line = x.add(&y)?.sub(&t)?;
    let p = moment_lift(&difference.mul(&line)?);
    let mut cert = Certificate::new("example 7.2");
    cert.poly("p", &p);
    check_member(&mut cert, "p", &p)?;
    check_pair(&mut cert, "p", &p, (2, 2))?;
    check_pair(&mut cert, "first factor", &moment_lift(&difference), (1, 1))?;
    check_pair(&mut cert, "second factor", &moment_lift(&line), (2, 1))?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian_form::signature_pair;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rational(n: i64, d: i64) -> Rat {
        rat(n, d)
    }

    #[test]
    fn small_gap_polynomials_match_hand_expansion() {
        let x = RealPoly::variable(2, 0);
        let y = RealPoly::variable(2, 1);
        assert_eq!(gap_poly(1).unwrap(), x.add(&y).unwrap());
        let f2 = x
            .pow(2)
            .unwrap()
            .add(&y.scale(&Scalar::from_int(2)).unwrap())
            .unwrap()
            .sub(&y.pow(2).unwrap())
            .unwrap();
        assert_eq!(gap_poly(2).unwrap(), f2);
        let f3 = x
            .pow(3)
            .unwrap()
            .add(&x.mul(&y).unwrap().scale(&Scalar::from_int(3)).unwrap())
            .unwrap()
            .add(&y.pow(3).unwrap())
            .unwrap();
        assert_eq!(gap_poly(3).unwrap(), f3);
    }

    #[test]
    fn power_sums_match_the_radical_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9a7f_3d21);
        let mut checked = 0;
        while checked < 200 {
            let xn: i64 = rng.random_range(-8..=8);
            let yn: i64 = rng.random_range(-8..=8);
            let den: i64 = rng.random_range(1..=4);
            let d: u32 = rng.random_range(1..=9);
            let x = xn as f64 / den as f64;
            let y = yn as f64 / den as f64;
            let disc = x * x + 4.0 * y;
            if disc < 0.1 {
                continue;
            }
            let root = disc.sqrt();
            let expected = ((x + root) / 2.0).powi(d as i32) + ((x - root) / 2.0).powi(d as i32);
            let got = root_power_sum(d)
                .unwrap()
                .evaluate(&[
                    Scalar::from_rat(rational(xn, den)),
                    Scalar::from_rat(rational(yn, den)),
                ])
                .unwrap()
                .approx_f64();
            assert!(
                (got - expected).abs() <= 1e-6 * (1.0 + expected.abs()),
                "s_{d}({x}, {y}): recurrence {got}, radical {expected}"
            );
            checked += 1;
        }
    }

    #[test]
    fn gap_certificates_hold_for_small_degrees() {
        for d in 1..=5 {
            let cert = gap_family(d).unwrap();
            assert!(cert.is_verified(), "degree {d}");
        }
    }

    #[test]
    fn gap_signature_alternates_with_parity() {
        let pair_of = |cert: &Certificate| {
            cert.claims
                .iter()
                .find(|c| c.kind == "signature pair of p")
                .unwrap()
                .computed
                .clone()
        };
        assert_eq!(pair_of(&gap_family(2).unwrap()), "(2, 2)");
        assert_eq!(pair_of(&gap_family(3).unwrap()), "(3, 1)");
        assert_eq!(pair_of(&gap_family(4).unwrap()), "(3, 2)");
    }

    #[test]
    fn first_whitney_element_is_the_hyperquadric_form() {
        let w = whitney_poly(1).unwrap();
        let p = moment_lift(&w.sub(&RealPoly::one(2)).unwrap()).bihomogenize();
        assert_eq!(p, sphere_form(2));
        assert!(whitney(1).unwrap().is_verified());
    }

    #[test]
    fn whitney_signatures_grow_linearly() {
        for d in 2..=4 {
            let cert = whitney(d).unwrap();
            assert!(cert.is_verified());
            let w = whitney_poly(d).unwrap();
            let p = moment_lift(&w.sub(&RealPoly::one(2)).unwrap()).bihomogenize();
            assert_eq!(signature_pair(&p).unwrap(), (d as usize + 1, 1));
        }
    }

    #[test]
    fn triple_product_certificate_holds() {
        let cert = triple_product_example().unwrap();
        assert!(cert.is_verified());
        let triples: Vec<&str> = cert
            .claims
            .iter()
            .filter(|c| c.kind.starts_with("inertia triple"))
            .map(|c| c.computed.as_str())
            .collect();
        assert_eq!(triples, ["(2, 1, 0)", "(3, 3, 0)", "(2, 2, 6)"]);
    }

    #[test]
    fn squared_norm_is_definite_inside_the_window() {
        let cert = squared_norm_example(rational(1, 2)).unwrap();
        assert!(cert.is_verified());
    }

    #[test]
    fn squared_norm_square_has_the_frozen_coefficients() {
        let x1 = RealPoly::variable(2, 0);
        let x2 = RealPoly::variable(2, 1);
        let quartic = x1
            .add(&x2)
            .unwrap()
            .pow(4)
            .unwrap()
            .sub(
                &x1.pow(2)
                    .unwrap()
                    .mul(&x2.pow(2).unwrap())
                    .unwrap()
                    .scale(&Scalar::from_rat(rational(13, 2)))
                    .unwrap(),
            )
            .unwrap();
        let square = quartic.mul(&quartic).unwrap();
        let expected = [
            rational(1, 1),
            rational(8, 1),
            rational(15, 1),
            rational(4, 1),
            rational(137, 4),
            rational(4, 1),
            rational(15, 1),
            rational(8, 1),
            rational(1, 1),
        ];
        for (k, want) in expected.iter().enumerate() {
            let mi = MultiIndex::new(vec![8 - k as u32, k as u32]);
            assert_eq!(square.coeff(&mi), Scalar::from_rat(want.clone()));
        }
    }

    #[test]
    fn squared_norm_outside_the_window_is_recorded_not_verified() {
        let cert = squared_norm_example(rational(2, 1)).unwrap();
        assert!(cert.claims.iter().any(|c| c.status == "computed"));
    }

    #[test]
    fn degree_growth_projective_degrees() {
        for m in 1..=3 {
            let cert = degree_growth_example(m).unwrap();
            assert!(cert.is_verified());
            let claim = cert
                .claims
                .iter()
                .find(|c| c.kind == "projective degree of q")
                .unwrap();
            assert_eq!(claim.computed, (2 * m + 2).to_string());
        }
    }

    #[test]
    fn line_multiple_recognized_regions() {
        let cases = [
            ((0, 2, 1), (3, 2)),
            ((0, 1, 1), (3, 1)),
            ((1, 1, 2), (5, 1)),
            ((2, 1, 2), (4, 1)),
            ((1, 3, 2), (4, 2)),
        ];
        for ((a, b, c), expected) in cases {
            let lambda = (rat_int(a), rat_int(b), rat_int(c));
            let cert = line_multiple_example(lambda).unwrap();
            assert!(cert.is_verified(), "lambda ({a}, {b}, {c})");
            let claim = cert
                .claims
                .iter()
                .find(|cl| cl.kind == "signature pair of h")
                .unwrap();
            assert_eq!(claim.computed, pair_str(expected), "lambda ({a}, {b}, {c})");
            assert_eq!(claim.status, "verified");
        }
    }

    #[test]
    fn negated_line_multiple_swaps_the_pair() {
        let cert = line_multiple_example((rat_int(0), rat_int(-2), rat_int(-1))).unwrap();
        let claim = cert
            .claims
            .iter()
            .find(|cl| cl.kind == "signature pair of h")
            .unwrap();
        assert_eq!(claim.computed, "(2, 3)");
        assert_eq!(claim.status, "verified");
    }

    #[test]
    fn unrecognized_line_multiple_is_recorded() {
        let cert = line_multiple_example((rat_int(1), rat_int(1), rat_int(1))).unwrap();
        let claim = cert
            .claims
            .iter()
            .find(|cl| cl.kind == "signature pair of h")
            .unwrap();
        assert_eq!(claim.status, "computed");
        assert_eq!(claim.computed, "(3, 1)");
    }

    #[test]
    fn split_difference_is_balanced() {
        let cert = split_difference_example().unwrap();
        assert!(cert.is_verified());
    }
}
