//! The acceptance gate: one test per shipped guarantee, eleven in all.
//! Each test re-derives the advertised numbers through the public API and
//! fails loudly on any drift, so a green run is a complete re-verification.

use hermsig::constructions::{
    cyclotomic_factor, degree_growth_example, gap_family, indefinite_product, lemma31_suite,
    line_multiple_example, mixed_collapse, power_collapse, split_difference_example,
    squared_norm_example, stability_construct, stability_threshold, target_family, whitney,
    Certificate,
};
use hermsig::hermitian_form::{eigen_oracle, inertia_in, signature_pair, Ambient, HermMatrix};
use hermsig::polyring::{moment_lift, HermPoly, MultiIndex, RealPoly};
use hermsig::quotient::{divide_by_r, sphere_form};
use hermsig::scalar::{rat, rat_int, ComplexScalar, Rat, Scalar};
use hermsig::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn claim_value<'a>(cert: &'a Certificate, kind: &str) -> &'a str {
    let claim = cert
        .claims
        .iter()
        .find(|c| c.kind == kind)
        .unwrap_or_else(|| panic!("certificate {} has no claim `{kind}`", cert.construction));
    assert!(
        claim.status == "verified" || claim.status == "computed",
        "claim `{kind}` has status {}",
        claim.status
    );
    &claim.computed
}

fn assert_pair_claim(cert: &Certificate, name: &str, expected: (usize, usize)) {
    let kind = format!("signature pair of {name}");
    let computed = claim_value(cert, &kind);
    let want = format!("({}, {})", expected.0, expected.1);
    assert_eq!(computed, want, "claim `{kind}` in {}", cert.construction);
}

fn assert_member_claim(cert: &Certificate, name: &str) {
    let kind = format!("{name} lies in the ideal of the hyperquadric form");
    assert_eq!(claim_value(cert, &kind), "true");
}

fn degree_claim(cert: &Certificate, name: &str) -> u32 {
    claim_value(cert, &format!("projective degree of {name}"))
        .parse()
        .expect("projective degree claims hold integers")
}

fn lift_univariate(coeffs: &[i64]) -> HermPoly {
    moment_lift(&RealPoly::univariate_ints(coeffs)).bihomogenize()
}

fn triple_on(coeffs: &[i64], degree: u32, vars: usize) -> (usize, usize, usize) {
    let p = lift_univariate(coeffs);
    let ambient = Ambient::new(degree, vars).unwrap();
    inertia_in(&p, ambient).unwrap().triple()
}

#[test]
fn criterion_01_exact_split_factorizations() {
    let certs = lemma31_suite().unwrap();
    assert_eq!(certs.len(), 5);
    let counts: [(&str, [(usize, usize); 3]); 5] = [
        ("7.1", [(2, 0), (3, 0), (2, 1)]),
        ("7.2", [(1, 1), (2, 2), (2, 1)]),
        ("7.3", [(2, 0), (5, 0), (3, 2)]),
        ("7.4", [(2, 0), (2, 1), (6, 3)]),
        ("7.5", [(2, 2), (2, 1), (3, 3)]),
    ];
    for (cert, (label, expected)) in certs.iter().zip(counts) {
        assert!(cert.is_verified());
        assert_eq!(cert.params["identity"], label);
        claim_value(cert, "exact factorization");
        for (name, pair) in ["product", "first", "second"].iter().zip(expected) {
            let computed = claim_value(cert, &format!("sign count of {name}"));
            assert_eq!(computed, format!("({}, {})", pair.0, pair.1));
        }
    }
    let octic = &certs[2];
    assert!(
        octic.polynomials["first"].contains("sqrt(4 + 2*sqrt(2))"),
        "the octic split should quote its nested radical"
    );
}

#[test]
fn criterion_02_certified_cyclotomic_factors() {
    for m in 2..=6u32 {
        let cert = cyclotomic_factor(m).unwrap();
        assert!(cert.is_verified(), "cyclotomic m={m}");
        let coefficients = (1usize << (m - 1)) + 1;
        assert_eq!(
            claim_value(&cert, "number of coefficients"),
            coefficients.to_string()
        );
        if m <= 3 {
            claim_value(&cert, "exact factorization");
            assert_eq!(
                claim_value(&cert, "sign count of the positive factor"),
                format!("({coefficients}, 0)")
            );
        } else {
            let positive = cert
                .claims
                .iter()
                .find(|c| c.kind == "coefficients certified positive")
                .unwrap();
            assert!(positive.expected.contains("10^-30"));
            assert_eq!(positive.status, "verified");
            let identity = cert
                .claims
                .iter()
                .find(|c| c.kind == "certified factorization")
                .unwrap();
            assert!(identity.expected.contains("10^-30"));
            assert_eq!(identity.status, "verified");
        }
    }
}

#[test]
fn criterion_03_rank_collapse_examples() {
    for m in 2..=5u32 {
        let cert = power_collapse(m).unwrap();
        assert!(cert.is_verified(), "power collapse m={m}");
        let quarter = 1usize << (m - 2);
        assert_pair_claim(&cert, "q", (2 * quarter + 1, 0));
        assert_pair_claim(&cert, "r", (quarter + 1, quarter));
        let product_name = if m <= 3 { "q*r" } else { "q*r (collapsed form)" };
        assert_pair_claim(&cert, product_name, (2, 0));
    }
    let triples = [
        [(2, 2), (2, 1), (1, 1)],
        [(5, 0), (3, 2), (2, 0)],
        [(6, 3), (2, 1), (2, 0)],
        [(3, 3), (2, 1), (2, 2)],
    ];
    for (selector, triple) in (1..=4u32).zip(triples) {
        let cert = mixed_collapse(selector).unwrap();
        assert!(cert.is_verified(), "mixed collapse {selector}");
        assert_pair_claim(&cert, "q", triple[0]);
        assert_pair_claim(&cert, "r", triple[1]);
        assert_pair_claim(&cert, "q*r", triple[2]);
    }
}

#[test]
fn criterion_04_squared_norm_window() {
    let cert = squared_norm_example(rat(1, 2)).unwrap();
    assert!(cert.is_verified());
    assert_pair_claim(&cert, "p", (4, 1));
    assert_pair_claim(&cert, "p^2", (9, 0));
}

#[test]
fn criterion_05_inertia_triples() {
    let cert = hermsig::constructions::triple_product_example().unwrap();
    assert!(cert.is_verified());
    assert_eq!(claim_value(&cert, "inertia triple of p"), "(2, 1, 0)");
    assert_eq!(claim_value(&cert, "inertia triple of q"), "(3, 3, 0)");
    assert_eq!(claim_value(&cert, "inertia triple of p*q"), "(2, 2, 6)");

    let p = [1, -1, 1];
    let q = [1, 1, -1, -2, -1, 1];
    let pq = [1, 0, -1, 0, 0, 0, -2, 1];
    let product = RealPoly::univariate_ints(&p)
        .mul(&RealPoly::univariate_ints(&q))
        .unwrap();
    assert_eq!(product, RealPoly::univariate_ints(&pq));

    assert_eq!(triple_on(&p, 2, 2), (2, 1, 0));
    assert_eq!(triple_on(&q, 5, 2), (3, 3, 0));
    assert_eq!(triple_on(&pq, 7, 2), (2, 2, 4));

    assert_eq!(triple_on(&p, 2, 3), (2, 1, 3));
    assert_eq!(triple_on(&q, 5, 3), (3, 3, 15));
    assert_eq!(triple_on(&pq, 7, 3), (2, 2, 32));

    let mut two_term = [0i64; 13];
    two_term[0] = 1;
    two_term[12] = 1;
    assert_eq!(triple_on(&two_term, 12, 2), (2, 0, 11));
}

#[test]
fn criterion_06_indefinite_product_sweep() {
    let mut refused = Vec::new();
    for a in 0..=12usize {
        for b in 0..=(12 - a) {
            match indefinite_product(a, b) {
                Ok(cert) => {
                    assert!(cert.is_verified(), "product ({a}, {b})");
                    assert_pair_claim(&cert, "r1*r2", (a, b));
                    claim_value(&cert, "r1 is indefinite");
                    claim_value(&cert, "r2 is indefinite");
                }
                Err(Error::Refused(reason)) => {
                    assert!(
                        reason.contains("rank"),
                        "refusal for ({a}, {b}) should argue through ranks: {reason}"
                    );
                    refused.push((a, b));
                }
                Err(other) => panic!("unexpected error at ({a}, {b}): {other}"),
            }
        }
    }
    assert_eq!(refused, [(0, 0), (0, 1), (1, 0)]);
}

#[test]
fn criterion_07_constructive_cells() {
    for d in 1..=10u32 {
        let cert = whitney(d).unwrap();
        assert!(cert.is_verified(), "whitney d={d}");
        assert_member_claim(&cert, "p");
        assert_pair_claim(&cert, "p", (d as usize + 1, 1));
    }

    let cases: [((i64, i64, i64), (usize, usize)); 5] = [
        ((0, 2, 1), (3, 2)),
        ((0, 1, 1), (3, 1)),
        ((1, 1, 2), (5, 1)),
        ((2, 1, 2), (4, 1)),
        ((1, 3, 2), (4, 2)),
    ];
    for ((l1, l2, l3), expected) in cases {
        let cert = line_multiple_example((rat_int(l1), rat_int(l2), rat_int(l3))).unwrap();
        assert!(cert.is_verified(), "line multiple ({l1}, {l2}, {l3})");
        assert_member_claim(&cert, "h");
        assert_pair_claim(&cert, "h", expected);
    }

    let cert = split_difference_example().unwrap();
    assert!(cert.is_verified());
    assert_pair_claim(&cert, "p", (2, 2));
    assert_pair_claim(&cert, "first factor", (1, 1));
    assert_pair_claim(&cert, "second factor", (2, 1));

    let low = stability_construct(2, 4, 4, 0).unwrap();
    let high = stability_construct(2, 4, 4, 3).unwrap();
    assert!(low.is_verified() && high.is_verified());
    assert_pair_claim(&low, "p", (4, 4));
    assert_pair_claim(&high, "p", (4, 4));
    assert!(
        degree_claim(&high, "p") > degree_claim(&low, "p"),
        "the (4, 4) element should come in strictly increasing projective degrees"
    );
}

#[test]
fn criterion_08_projective_degree_growth() {
    for m in 1..=5u32 {
        let cert = degree_growth_example(m).unwrap();
        assert!(cert.is_verified(), "degree growth m={m}");
        assert_eq!(degree_claim(&cert, "p"), 2);
        assert_eq!(degree_claim(&cert, "q"), 2 * m + 2);
        assert_eq!(degree_claim(&cert, "plane"), 2);
    }
}

#[test]
fn criterion_09_gap_family() {
    for d in 1..=9u32 {
        let cert = gap_family(d).unwrap();
        assert!(cert.is_verified(), "gap family d={d}");
        claim_value(&cert, "affine divisibility");
        assert_member_claim(&cert, "p");
        let half = (d as usize) / 2;
        let expected = if d % 2 == 1 {
            (half + 2, 1)
        } else {
            (half + 1, 2)
        };
        assert_pair_claim(&cert, "p", expected);
        let rank = (d as usize) * (d as usize + 1) / 2;
        assert_eq!(claim_value(&cert, "rank of the cofactor"), rank.to_string());
    }
}

#[test]
fn criterion_10_stability_window() {
    let mut jobs = Vec::new();
    for n in [2usize, 3, 4] {
        let threshold = 2 * (2 * n * n - n);
        assert_eq!(stability_threshold(n), threshold);
        for total in threshold..=(threshold + 10) {
            for a in 2..=(total - 2) {
                jobs.push((n, a, total - a));
            }
        }
    }

    let failures = std::sync::Mutex::new(Vec::new());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&(n, a, b)) = jobs.get(i) else { break };
                let outcome = stability_construct(n, a, b, 0);
                let ok = match &outcome {
                    Ok(cert) => {
                        cert.is_verified()
                            && claim_value(cert, "signature pair of p") == format!("({a}, {b})")
                            && claim_value(cert, "p lies in the ideal of the hyperquadric form")
                                == "true"
                    }
                    Err(_) => false,
                };
                if !ok {
                    failures.lock().unwrap().push(format!(
                        "stability n={n} ({a}, {b}): {}",
                        outcome
                            .err()
                            .map_or("claims drifted".into(), |e| e.to_string())
                    ));
                }
            });
        }
    });
    let failures = failures.into_inner().unwrap();
    assert!(failures.is_empty(), "{failures:?}");

    match target_family(3, 4) {
        Err(Error::Refused(_)) => {}
        other => panic!("target size 4 with n = 3 must be refused, got {other:?}"),
    }
    for size in 5..=15usize {
        let cert = target_family(3, size).unwrap();
        assert!(cert.is_verified(), "target family N={size}");
    }

    for (n, a, b) in [(2usize, 7usize, 5usize), (2, 6, 6), (3, 15, 15)] {
        let low = stability_construct(n, a, b, 0).unwrap();
        let high = stability_construct(n, a, b, 3).unwrap();
        assert_pair_claim(&low, "p", (a, b));
        assert_pair_claim(&high, "p", (a, b));
        let spread = degree_claim(&high, "p") as i64 - degree_claim(&low, "p") as i64;
        assert!(
            spread >= 5,
            "projective degrees at n={n} ({a}, {b}) differ by {spread}, expected >= 5"
        );
    }
}

type Mat = Vec<Vec<ComplexScalar>>;

fn random_rat(rng: &mut ChaCha8Rng, span: i64) -> Rat {
    rat(rng.random_range(-span..=span), rng.random_range(1..=4))
}

fn random_complex(rng: &mut ChaCha8Rng, span: i64) -> ComplexScalar {
    ComplexScalar::new(
        Scalar::from_rat(random_rat(rng, span)),
        Scalar::from_rat(random_rat(rng, span)),
    )
}

fn random_hermitian_matrix(rng: &mut ChaCha8Rng, dim: usize) -> HermMatrix {
    let mut rows = vec![vec![ComplexScalar::zero(); dim]; dim];
    for i in 0..dim {
        rows[i][i] = ComplexScalar::real(Scalar::from_rat(random_rat(rng, 4)));
        for j in (i + 1)..dim {
            let c = random_complex(rng, 3);
            rows[i][j] = c.clone();
            rows[j][i] = c.conj();
        }
    }
    HermMatrix::from_rows(rows).expect("mirrored entries form a Hermitian matrix")
}

fn apply_shear(rows: &mut Mat, i: usize, j: usize, c: &ComplexScalar) {
    let dim = rows.len();
    for row in rows.iter_mut() {
        let shifted = row[j].add(&row[i].mul(c).unwrap()).unwrap();
        row[j] = shifted;
    }
    let conj = c.conj();
    for k in 0..dim {
        let shifted = rows[j][k].add(&rows[i][k].mul(&conj).unwrap()).unwrap();
        rows[j][k] = shifted;
    }
}

/// Apply `M <- Q^H M Q` in place for one elementary `Q`, chosen at random:
/// a shear (column j += c * column i, with the mirrored row update), an
/// exact nonzero rescaling of one index, or a swap of two indices.
fn random_congruence_step(rng: &mut ChaCha8Rng, rows: &mut Mat) {
    let dim = rows.len();
    let i = rng.random_range(0..dim);
    let mut j = rng.random_range(0..dim);
    while j == i {
        j = rng.random_range(0..dim);
    }
    match rng.random_range(0..4u32) {
        0 | 1 => apply_shear(rows, i, j, &random_complex(rng, 2)),
        2 => {
            let s = ComplexScalar::real(Scalar::from_rat(rat(
                rng.random_range(1..=5),
                rng.random_range(1..=3),
            )));
            for row in rows.iter_mut() {
                row[j] = row[j].mul(&s).unwrap();
            }
            let conj = s.conj();
            for k in 0..dim {
                rows[j][k] = rows[j][k].mul(&conj).unwrap();
            }
        }
        _ => {
            for row in rows.iter_mut() {
                row.swap(i, j);
            }
            rows.swap(i, j);
        }
    }
}

fn sylvester_suite(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51E5);
    for case in 0..cases {
        let dim = rng.random_range(2..=7);
        let m = random_hermitian_matrix(&mut rng, dim);
        let before = m.diagonalize().unwrap();
        let mut rows: Mat = m.rows().to_vec();
        for _ in 0..(2 * dim) {
            random_congruence_step(&mut rng, &mut rows);
        }
        let transformed = HermMatrix::from_rows(rows).expect("congruence preserves symmetry");
        let after = transformed.diagonalize().unwrap();
        assert_eq!(
            (before.pos, before.neg, before.zero),
            (after.pos, after.neg, after.zero),
            "inertia drifted under congruence at case {case}"
        );
    }
}

fn random_exponent(rng: &mut ChaCha8Rng, arity: usize, degree: u32) -> MultiIndex {
    let mut v = vec![0u32; arity];
    for _ in 0..degree {
        v[rng.random_range(0..arity)] += 1;
    }
    MultiIndex::new(v)
}

/// Random nonzero bihomogeneous Hermitian polynomial of the given bidegree.
fn random_biho(rng: &mut ChaCha8Rng, arity: usize, degree: u32) -> HermPoly {
    let top = MultiIndex::new(
        (0..arity)
            .map(|k| if k == 0 { degree } else { 0 })
            .collect(),
    );
    let mut items = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        let e = random_exponent(rng, arity, degree);
        let c = Scalar::from_rat(random_rat(rng, 6));
        items.push((e.clone(), e, ComplexScalar::real(c)));
    }
    for _ in 0..rng.random_range(0..=2u32) {
        let a = random_exponent(rng, arity, degree);
        let b = random_exponent(rng, arity, degree);
        if a == b {
            continue;
        }
        let c = random_complex(rng, 4);
        items.push((a.clone(), b.clone(), c.clone()));
        items.push((b, a, c.conj()));
    }
    let candidate = HermPoly::from_terms(arity, items).expect("mirrored construction is Hermitian");
    if candidate.is_zero() {
        let fallback = vec![(top.clone(), top, ComplexScalar::one())];
        HermPoly::from_terms(arity, fallback).unwrap()
    } else {
        candidate
    }
}

fn product_inequality_suite(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x900D);
    for case in 0..cases {
        let arity = rng.random_range(2..=3);
        let d1 = rng.random_range(1..=2);
        let d2 = rng.random_range(1..=2);
        let p1 = random_biho(&mut rng, arity, d1);
        let p2 = random_biho(&mut rng, arity, d2);
        let (a1, b1) = signature_pair(&p1).unwrap();
        let (a2, b2) = signature_pair(&p2).unwrap();
        let (a, b) = signature_pair(&p1.mul(&p2).unwrap()).unwrap();
        assert!(
            a <= a1 * a2 + b1 * b2,
            "positive bound failed at case {case}"
        );
        assert!(
            b <= a1 * b2 + a2 * b1,
            "negative bound failed at case {case}"
        );
        assert!(
            a + b <= (a1 + b1) * (a2 + b2),
            "rank bound failed at case {case}"
        );
    }
}

fn random_real_poly(rng: &mut ChaCha8Rng, arity: usize) -> RealPoly {
    let mut terms = std::collections::BTreeMap::new();
    for _ in 0..rng.random_range(1..=6) {
        let degree = rng.random_range(0..=3);
        let e = random_exponent(rng, arity, degree);
        let c = random_rat(rng, 8);
        terms.insert(e, c);
    }
    let items = terms
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e, Scalar::from_rat(c)));
    RealPoly::from_terms(arity, items).expect("distinct monomials never collide")
}

fn diagonal_correspondence_suite(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1A6);
    let mut nonzero = 0usize;
    for case in 0..cases {
        let arity = rng.random_range(1..=3);
        let p = random_real_poly(&mut rng, arity);
        if p.num_terms() == 0 {
            continue;
        }
        nonzero += 1;
        let counts = p.sign_counts().unwrap();
        let lifted = signature_pair(&moment_lift(&p)).unwrap();
        assert_eq!(
            counts, lifted,
            "diagonal correspondence broke at case {case}"
        );
    }
    assert!(nonzero * 10 >= cases * 9, "generator degenerated");
}

fn division_witness_suite(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD117);
    for case in 0..cases {
        let arity = rng.random_range(2..=3);
        let r = sphere_form(arity - 1);
        let dv = rng.random_range(1..=2);
        let v = random_biho(&mut rng, arity, dv);
        let p = v.mul(&r).unwrap();
        let witness = divide_by_r(&p).unwrap();
        assert!(witness.member, "multiple not recognized at case {case}");
        assert!(witness.remainder.is_zero());
        assert_eq!(witness.quotient, v, "quotient drifted at case {case}");
        assert!(witness.verify(&p).unwrap());

        let dw = rng.random_range(1..=3);
        let w = random_biho(&mut rng, arity, dw);
        let witness = divide_by_r(&w).unwrap();
        assert!(
            witness.verify(&w).unwrap(),
            "witness failed to re-multiply at case {case}"
        );
    }
}

/// One of `0`, `1`, `-1`, `i`, `-i`, so planted eigenvalues stay far from
/// the float oracle's zero threshold after shearing.
fn unit_shear_coeff(rng: &mut ChaCha8Rng) -> ComplexScalar {
    match rng.random_range(0..5u32) {
        0 => ComplexScalar::zero(),
        1 => ComplexScalar::one(),
        2 => ComplexScalar::from_int(-1),
        3 => ComplexScalar::new(Scalar::zero(), Scalar::one()),
        _ => ComplexScalar::new(Scalar::zero(), Scalar::from_int(-1)),
    }
}

/// `Q^H D Q` for a random signed integer diagonal `D` and a short product
/// of unit shears and swaps, so the exact inertia is known in advance and
/// every nonzero eigenvalue stays orders of magnitude above `1e-9`.
fn planted_matrix(
    rng: &mut ChaCha8Rng,
    dim: usize,
    shears: usize,
) -> (HermMatrix, (usize, usize, usize)) {
    let mut rows: Mat = vec![vec![ComplexScalar::zero(); dim]; dim];
    let mut expected = (0usize, 0usize, 0usize);
    for (k, row) in rows.iter_mut().enumerate() {
        let sign = rng.random_range(-1..=1i64);
        match sign {
            1 => expected.0 += 1,
            -1 => expected.1 += 1,
            _ => expected.2 += 1,
        }
        row[k] = ComplexScalar::real(Scalar::from_int(sign * rng.random_range(1..=3)));
    }
    for _ in 0..shears {
        let i = rng.random_range(0..dim);
        let mut j = rng.random_range(0..dim);
        while j == i {
            j = rng.random_range(0..dim);
        }
        if rng.random_range(0..4u32) == 0 {
            for row in rows.iter_mut() {
                row.swap(i, j);
            }
            rows.swap(i, j);
        } else {
            apply_shear(&mut rows, i, j, &unit_shear_coeff(rng));
        }
    }
    (
        HermMatrix::from_rows(rows).expect("planted construction stays Hermitian"),
        expected,
    )
}

fn eigen_oracle_suite(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C1E);
    for case in 0..cases {
        let (dim, shears) = if case % 10 == 0 {
            (rng.random_range(11..=60), 6)
        } else {
            let dim = rng.random_range(2..=10);
            (dim, dim)
        };
        let (m, expected) = planted_matrix(&mut rng, dim, shears);
        let exact = m.diagonalize().unwrap();
        assert_eq!(
            (exact.pos, exact.neg, exact.zero),
            expected,
            "exact inertia drifted at case {case} (dim {dim})"
        );
        let oracle = eigen_oracle(&m, 1e-9);
        assert_eq!(
            oracle, expected,
            "eigen oracle disagreed at case {case} (dim {dim})"
        );
    }
}

#[test]
fn criterion_11_randomized_property_suites() {
    let cases = 1000;
    sylvester_suite(cases);
    product_inequality_suite(cases);
    diagonal_correspondence_suite(cases);
    division_witness_suite(cases);
    eigen_oracle_suite(cases);
}
