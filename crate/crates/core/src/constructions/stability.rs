//! Signature arithmetic in the stable range: shifts that add a block to
//! the signature pair, growth steps that enlarge the positive part one
//! notch at a time, and the decomposition that strings them together to
//! hit any prescribed pair past the threshold.

use super::{check_member, check_pair, pair_str, Certificate};
use crate::constructions::families::line_multiple_poly;
use crate::hermitian_form::inertia;
use crate::polyring::{mono_str, HermPoly, MultiIndex};
use crate::quotient::{divide_by_r, projective_degree, sphere_form};
use crate::scalar::{rat_int, ComplexScalar, Rat, Scalar};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;

/// Past this total size every signature pair with both entries at least 2
/// is reachable.
pub fn stability_threshold(n: usize) -> usize {
    2 * (2 * n * n - n)
}

/// Past this size every `(N, 1)` pair is reachable by the target family.
pub fn target_threshold(n: usize) -> usize {
    n * n - 2 * n + 2
}

/// `N*(N-1) / (2*(2n-3))`, the degree estimate for a target of size `N`.
pub fn degree_bound(n: usize, target: usize) -> Result<Rat> {
    if n < 2 {
        return Err(Error::Refused(format!(
            "the degree bound needs n >= 2, got {n}"
        )));
    }
    let num = BigInt::from(target) * BigInt::from(target.max(1) - 1);
    let den = BigInt::from(2 * (2 * n - 3));
    Ok(Rat::new(num, den))
}

/// A single diagonal monomial `c * |z^alpha|^2`.
fn diagonal_monomial(alpha: &MultiIndex, c: &Scalar) -> Result<HermPoly> {
    HermPoly::from_terms(
        alpha.arity(),
        [(
            alpha.clone(),
            alpha.clone(),
            ComplexScalar::new(c.clone(), Scalar::zero()),
        )],
    )
}

/// Build the shifted polynomial `(v*|zeta|^(2(k-dv)) +/- |z1|^(2k)) * r`
/// where `v` is the cofactor of `p`. Returns the shift together with the
/// cofactor degree and the `k` actually used.
fn shift_parts(
    p: &HermPoly,
    plus: bool,
    k_request: Option<u32>,
    padding: u32,
) -> Result<(HermPoly, u32, u32)> {
    let witness = divide_by_r(p)?;
    if !witness.member {
        return Err(Error::InvalidInput(
            "the shift needs a member of the hyperquadric ideal".into(),
        ));
    }
    if !witness.verify(p)? {
        return Err(Error::Internal(
            "division witness failed to re-multiply".into(),
        ));
    }
    let v = witness.quotient;
    let dv = v
        .is_bihomogeneous()
        .ok_or(Error::NotBihomogeneous(v.bidegree().0))?;
    let k = k_request.unwrap_or(dv + 2 + padding);
    if k < dv + 2 {
        return Err(Error::Refused(format!(
            "shift amount k = {k} is below the separation threshold {}; \
             the two blocks would overlap",
            dv + 2
        )));
    }
    let arity = p.arity();
    let zeta = HermPoly::modulus_squared(arity, arity - 1);
    let lifted_cofactor = v.mul(&zeta.pow(k - dv)?)?;
    let spike = HermPoly::modulus_squared(arity, 0).pow(k)?;
    let inner = if plus {
        lifted_cofactor.add(&spike)?
    } else {
        lifted_cofactor.sub(&spike)?
    };
    let q = inner.mul(&sphere_form(arity - 1))?;
    Ok((q, dv, k))
}

/// Shift a member's signature pair by `(n, 1)` (plus) or `(1, n)` (minus)
/// without leaving the ideal: the cofactor is pushed into high powers of
/// the last variable while a definite block in `z_1` occupies the low
/// ones, so the two contributions cannot interact.
pub fn signature_shift(p: &HermPoly, plus: bool, k: u32) -> Result<Certificate> {
    let before = inertia(p)?.pair();
    let (q, dv, _) = shift_parts(p, plus, Some(k), 0)?;
    let n = p.arity() - 1;
    let mut cert = Certificate::new("shift");
    cert.param("direction", if plus { "plus" } else { "minus" });
    cert.param("k", k);
    cert.chose("cofactor degree", dv);
    cert.poly("p", p);
    cert.poly("q", &q);
    cert.record("signature pair of p", pair_str(before));
    check_member(&mut cert, "q", &q)?;
    let expected = if plus {
        (before.0 + n, before.1 + 1)
    } else {
        (before.0 + 1, before.1 + n)
    };
    check_pair(&mut cert, "q", &q, expected)?;
    Ok(cert)
}

fn positive_diagonal_terms(p: &HermPoly) -> Result<Vec<(MultiIndex, Scalar)>> {
    let mut out = Vec::new();
    for ((a, b), c) in p.terms() {
        if a != b {
            continue;
        }
        let re = c.expect_real()?;
        if re.sign_of()? > 0 {
            out.push((a.clone(), re.clone()));
        }
    }
    Ok(out)
}

/// The tensor move applied at the `j`-th positive diagonal term.
pub(crate) fn tensor_move_poly(p: &HermPoly, j: usize) -> Result<(HermPoly, MultiIndex)> {
    if !p.is_diagonal() {
        return Err(Error::InvalidInput(
            "the tensor move needs a diagonal polynomial".into(),
        ));
    }
    let positives = positive_diagonal_terms(p)?;
    let Some((alpha, c)) = positives.get(j) else {
        return Err(Error::InvalidInput(format!(
            "positive term index {j} is out of range ({} available)",
            positives.len()
        )));
    };
    let arity = p.arity();
    let zeta = HermPoly::modulus_squared(arity, arity - 1);
    let bump = diagonal_monomial(alpha, c)?.mul(&sphere_form(arity - 1))?;
    Ok((zeta.mul(p)?.add(&bump)?, alpha.clone()))
}

/// Trade one positive term for `n` fresh ones: multiply by `|zeta|^2` and
/// add back the traded term times the hyperquadric form, which cancels
/// the shifted copy exactly. Takes `(N, 1)` to `(N + n - 1, 1)`.
pub fn tensor_move(p: &HermPoly, j: usize) -> Result<Certificate> {
    let before = inertia(p)?.pair();
    if before.1 != 1 {
        return Err(Error::InvalidInput(format!(
            "the tensor move needs signature pair (N, 1), got {}",
            pair_str(before)
        )));
    }
    let n = p.arity() - 1;
    let (moved, alpha) = tensor_move_poly(p, j)?;
    let mut cert = Certificate::new("tensor");
    cert.param("term index", j);
    cert.chose("moved monomial", format!("|{}|^2", mono_str(&alpha, "z")));
    cert.poly("p", p);
    cert.poly("p'", &moved);
    cert.record("signature pair of p", pair_str(before));
    check_member(&mut cert, "p'", &moved)?;
    let expected = (before.0 + n - 1, 1);
    let computed = inertia(&moved)?.pair();
    if computed != expected {
        return Err(Error::VerificationFailed(format!(
            "independence degenerated: moving |{}|^2 gave {}, wanted {}",
            mono_str(&alpha, "z"),
            pair_str(computed),
            pair_str(expected)
        )));
    }
    check_pair(&mut cert, "p'", &moved, expected)?;
    Ok(cert)
}

/// Bidegree, positive count, and sanity constraints for a juxtaposition
/// input: diagonal, bihomogeneous, in the ideal, signature `(N, 1)` with
/// the negative part a single pure power of the last variable.
fn juxtaposition_profile(name: &str, p: &HermPoly) -> Result<(u32, usize)> {
    if !p.is_diagonal() {
        return Err(Error::InvalidInput(format!("{name} must be diagonal")));
    }
    let d = p
        .is_bihomogeneous()
        .ok_or(Error::NotBihomogeneous(p.bidegree().0))?;
    let arity = p.arity();
    let mut negatives = Vec::new();
    for ((a, _), c) in p.terms() {
        if c.expect_real()?.sign_of()? < 0 {
            negatives.push(a.clone());
        }
    }
    let pure = MultiIndex::var(arity, arity - 1)
        .0
        .iter()
        .map(|&e| e * d)
        .collect::<Vec<_>>();
    if negatives.len() != 1 || negatives[0] != MultiIndex::new(pure) {
        return Err(Error::InvalidInput(format!(
            "{name} must have a single negative term, a pure power of the last variable"
        )));
    }
    if !divide_by_r(p)?.member {
        return Err(Error::InvalidInput(format!(
            "{name} must lie in the hyperquadric ideal"
        )));
    }
    let pair = inertia(p)?.pair();
    Ok((d, pair.0))
}

/// Convex combination of two members with disjoint positive supports:
/// the positive counts add while the negative parts merge into one.
pub fn juxtapose(p1: &HermPoly, p2: &HermPoly, t: Rat) -> Result<Certificate> {
    if t <= Rat::zero() || t >= rat_int(1) {
        return Err(Error::InvalidInput(format!(
            "the mixing weight must lie strictly between 0 and 1, got {t}"
        )));
    }
    if p1.arity() != p2.arity() {
        return Err(Error::ArityMismatch(p1.arity(), p2.arity()));
    }
    let arity = p1.arity();
    let (d1, n1) = juxtaposition_profile("the first input", p1)?;
    let (d2, n2) = juxtaposition_profile("the second input", p2)?;
    let common = d1.max(d2);
    let zeta = HermPoly::modulus_squared(arity, arity - 1);
    let q1 = p1.mul(&zeta.pow(common - d1)?)?;
    let q2 = p2.mul(&zeta.pow(common - d2)?)?;
    for (alpha, _) in positive_diagonal_terms(&q1)? {
        if q2.coeff(&alpha, &alpha).expect_real()?.sign_of()? > 0 {
            return Err(Error::SupportCollision(format!(
                "positive supports meet at |{}|^2 after padding to bidegree {common}; \
                 rebuild one input at a different degree or in fresh variables \
                 so the blocks stay independent",
                mono_str(&alpha, "z")
            )));
        }
    }
    let mixed = q1
        .scale(&Scalar::from_rat(t.clone()))?
        .add(&q2.scale(&Scalar::from_rat(rat_int(1) - t.clone()))?)?;
    let mut cert = Certificate::new("juxtapose");
    cert.param("t", &t);
    cert.chose("common bidegree", common);
    cert.poly("p1", p1);
    cert.poly("p2", p2);
    cert.poly("mixed", &mixed);
    check_member(&mut cert, "mixed", &mixed)?;
    check_pair(&mut cert, "mixed", &mixed, (n1 + n2, 1))?;
    Ok(cert)
}

/// One growth step: multiply by `|zeta|^2`, then add `delta * |g|^2 * r`
/// at the largest zeta-free positive monomial `g`. A full step (`delta`
/// equal to the coefficient) cancels the shifted copy of `g` and adds
/// `n - 1` positives; a partial step (half the coefficient) keeps it and
/// adds `n`.
fn growth_step(p: &HermPoly, partial: bool) -> Result<HermPoly> {
    let arity = p.arity();
    let mut best: Option<(MultiIndex, Scalar)> = None;
    for (alpha, c) in positive_diagonal_terms(p)? {
        if alpha.0[arity - 1] != 0 {
            continue;
        }
        match &best {
            Some((cur, _)) if *cur >= alpha => {}
            _ => best = Some((alpha, c)),
        }
    }
    let Some((g, c)) = best else {
        return Err(Error::Internal(
            "no zeta-free positive term to grow from".into(),
        ));
    };
    let delta = if partial {
        c.div(&Scalar::from_int(2))?
    } else {
        c
    };
    let zeta = HermPoly::modulus_squared(arity, arity - 1);
    let bump = diagonal_monomial(&g, &delta)?.mul(&sphere_form(arity - 1))?;
    zeta.mul(p)?.add(&bump)
}

/// The member with signature pair `(N, 1)` realized as `j - 1` partial
/// steps and `k` full steps on the hyperquadric form, together with the
/// step counts. Sizes follow `N = j*n + k*(n-1)`.
pub(crate) fn target_family_poly(n: usize, size: usize) -> Result<(HermPoly, usize, usize)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "the target family needs n >= 2, got {n}"
        )));
    }
    if size < n {
        return Err(Error::Refused(format!(
            "the target family starts at N = n = {n}, got {size}"
        )));
    }
    let mut split = None;
    for j in (1..=size / n).rev() {
        let rem = size - j * n;
        if rem % (n - 1) == 0 {
            split = Some((j, rem / (n - 1)));
            break;
        }
    }
    let Some((j, k)) = split else {
        return Err(Error::Refused(format!(
            "{size} is not reachable as j*{n} + k*{} with j >= 1; every size \
             from {} on is",
            n - 1,
            target_threshold(n)
        )));
    };
    let mut p = sphere_form(n);
    for _ in 1..j {
        p = growth_step(&p, true)?;
    }
    for _ in 0..k {
        p = growth_step(&p, false)?;
    }
    Ok((p, j, k))
}

/// Certified member with signature pair `(N, 1)`.
pub fn target_family(n: usize, size: usize) -> Result<Certificate> {
    let (p, j, k) = target_family_poly(n, size)?;
    let mut cert = Certificate::new("target");
    cert.param("n", n);
    cert.param("N", size);
    cert.chose("partial steps", j - 1);
    cert.chose("full steps", k);
    cert.certify(
        "size accounting",
        format!("{j}*{n} + {k}*{} = {size}", n - 1),
        j * n + k * (n - 1) == size,
    )?;
    cert.poly("p", &p);
    check_member(&mut cert, "p", &p)?;
    check_pair(&mut cert, "p", &p, (size, 1))?;
    Ok(cert)
}

/// How a signature pair decomposes into a target-family base plus shift
/// steps. `swapped` means the mirror pair is built and negated at the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub swapped: bool,
    pub base: usize,
    pub plus_steps: usize,
    pub minus_steps: usize,
}

/// Split `(A, B)` as base `(N, 1)` plus `a` plus-shifts and `b`
/// minus-shifts: `A = N + a*n + b`, `B = 1 + a + b*n` (after ordering the
/// pair largest first). Refused when no split leaves a reachable base,
/// which only happens below the stability threshold.
pub fn stability_decompose(n: usize, a_sig: usize, b_sig: usize) -> Result<Decomposition> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "the decomposition needs n >= 2, got {n}"
        )));
    }
    if a_sig < 2 || b_sig < 2 {
        return Err(Error::Refused(format!(
            "the stable range covers pairs with both entries at least 2, got {}",
            pair_str((a_sig, b_sig))
        )));
    }
    let swapped = a_sig < b_sig;
    let (hi, lo) = if swapped { (b_sig, a_sig) } else { (a_sig, b_sig) };
    for b in (0..=(lo - 1) / n).rev() {
        let a = lo - 1 - b * n;
        let used = a * n + b;
        if used > hi {
            continue;
        }
        let base = hi - used;
        if base >= target_threshold(n) {
            return Ok(Decomposition {
                swapped,
                base,
                plus_steps: a,
                minus_steps: b,
            });
        }
    }
    Err(Error::Refused(format!(
        "no decomposition of {} over the degree-{n} target family; every pair \
         with total size at least {} has one",
        pair_str((a_sig, b_sig)),
        stability_threshold(n)
    )))
}

/// Mirror base for two variables: the plane multiple with signature pair
/// `(3, 2)`, reached when the target-family route refuses.
fn plane_multiple_route(
    cert: &mut Certificate,
    a_sig: usize,
    b_sig: usize,
    padding: u32,
) -> Result<HermPoly> {
    let solve = |hi: usize, lo: usize| -> Option<(usize, usize)> {
        let da = hi.checked_sub(3)?;
        let db = lo.checked_sub(2)?;
        let num_a = (2 * da).checked_sub(db)?;
        let num_b = (2 * db).checked_sub(da)?;
        if num_a % 3 != 0 || num_b % 3 != 0 {
            return None;
        }
        Some((num_a / 3, num_b / 3))
    };
    let (swapped, a, b) = match solve(a_sig, b_sig) {
        Some((a, b)) => (false, a, b),
        None => match solve(b_sig, a_sig) {
            Some((a, b)) => (true, a, b),
            None => {
                return Err(Error::Refused(format!(
                    "{} is out of reach of both the target family and the \
                     plane multiple base",
                    pair_str((a_sig, b_sig))
                )))
            }
        },
    };
    cert.chose("route", "plane multiple base (3, 2)");
    cert.chose("plus shifts", a);
    cert.chose("minus shifts", b);
    if swapped {
        cert.chose("mirrored", "yes");
    }
    let mut p = line_multiple_poly(&(rat_int(0), rat_int(2), rat_int(1)))?;
    let mut pending = padding;
    for _ in 0..a {
        p = shift_parts(&p, true, None, pending)?.0;
        pending = 0;
    }
    for _ in 0..b {
        p = shift_parts(&p, false, None, pending)?.0;
        pending = 0;
    }
    if a + b == 0 && padding > 0 {
        cert.chose("degree padding", "unused (no shifts on this route)");
    }
    Ok(if swapped { p.neg() } else { p })
}

/// Certified member with signature pair `(A, B)` for any pair in the
/// stable range. `padding` widens the first shift, raising the projective
/// degree by `2 * padding` without touching the signature.
pub fn stability_construct(
    n: usize,
    a_sig: usize,
    b_sig: usize,
    padding: u32,
) -> Result<Certificate> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "the construction needs n >= 2, got {n}"
        )));
    }
    if a_sig < 2 || b_sig < 2 {
        return Err(Error::Refused(format!(
            "the stable range covers pairs with both entries at least 2, got {}",
            pair_str((a_sig, b_sig))
        )));
    }
    let mut cert = Certificate::new("thm82");
    cert.param("n", n);
    cert.param("A", a_sig);
    cert.param("B", b_sig);
    cert.param("degree padding", padding);
    let p = match stability_decompose(n, a_sig, b_sig) {
        Ok(dec) => {
            cert.chose("route", "target family base");
            cert.chose("base size", dec.base);
            cert.chose("plus shifts", dec.plus_steps);
            cert.chose("minus shifts", dec.minus_steps);
            if dec.swapped {
                cert.chose("mirrored", "yes");
            }
            let (mut p, j, k) = target_family_poly(n, dec.base)?;
            cert.chose("partial steps", j - 1);
            cert.chose("full steps", k);
            let mut pending = padding;
            for _ in 0..dec.plus_steps {
                p = shift_parts(&p, true, None, pending)?.0;
                pending = 0;
            }
            for _ in 0..dec.minus_steps {
                p = shift_parts(&p, false, None, pending)?.0;
                pending = 0;
            }
            if dec.swapped {
                p.neg()
            } else {
                p
            }
        }
        Err(Error::Refused(_)) if n == 2 => {
            plane_multiple_route(&mut cert, a_sig, b_sig, padding)?
        }
        Err(other) => return Err(other),
    };
    cert.poly("p", &p);
    check_member(&mut cert, "p", &p)?;
    check_pair(&mut cert, "p", &p, (a_sig, b_sig))?;
    cert.chose("stability threshold", stability_threshold(n));
    cert.chose("target threshold", target_threshold(n));
    cert.record(
        "projective degree of p",
        projective_degree(&p)?.degree,
    );
    Ok(cert)
}
