//! Batch verification: every reproduced claim, grouped into the four
//! suites `s3`, `s4`, `s7`, `s8`. Each group builds one or more
//! certificates independently of the others, so groups run on a small
//! worker pool; the report keeps submission order.

use hermsig::constructions::{
    cyclotomic_factor, degree_growth_example, gap_family, indefinite_product, lemma31_suite,
    line_multiple_example, mixed_collapse, power_collapse, signature_shift, signature_table,
    split_difference_example, squared_norm_example, stability_construct, target_family,
    tensor_move, triple_product_example, whitney, Certificate,
};
use hermsig::polyring::HermPoly;
use hermsig::quotient::sphere_form;
use hermsig::scalar::{rat, rat_int};
use hermsig::{Error, Result};
use std::collections::VecDeque;
use std::sync::Mutex;

type Job = (String, Box<dyn FnOnce() -> Result<Vec<Certificate>> + Send>);

pub struct GroupReport {
    pub name: String,
    pub result: Result<Vec<Certificate>>,
}

fn job<F>(name: impl Into<String>, f: F) -> Job
where
    F: FnOnce() -> Result<Vec<Certificate>> + Send + 'static,
{
    (name.into(), Box::new(f))
}

fn one<F>(name: impl Into<String>, f: F) -> Job
where
    F: FnOnce() -> Result<Certificate> + Send + 'static,
{
    job(name, move || f().map(|c| vec![c]))
}

/// The worked base for shift demonstrations: `(|z1|^2 - |z2|^2) * r`.
pub(crate) fn shift_base() -> Result<HermPoly> {
    HermPoly::modulus_squared(3, 0)
        .sub(&HermPoly::modulus_squared(3, 1))?
        .mul(&sphere_form(2))
}

/// The five tabulated coefficient triples of the line-multiple example.
pub(crate) fn line_multiple_cases() -> [(i64, i64, i64); 5] {
    [(0, 2, 1), (0, 1, 1), (1, 1, 2), (2, 1, 2), (1, 3, 2)]
}

fn recorded_degree(cert: &Certificate) -> Result<u32> {
    let claim = cert
        .claims
        .iter()
        .find(|c| c.kind == "projective degree of p")
        .ok_or_else(|| Error::Internal("certificate lacks a projective degree".into()))?;
    claim
        .computed
        .parse()
        .map_err(|_| Error::Internal(format!("unreadable projective degree {}", claim.computed)))
}

fn s3_jobs(jobs: &mut Vec<Job>) {
    jobs.push(job("factorization identities", lemma31_suite));
    for m in 2..=6 {
        jobs.push(one(format!("cyclotomic m={m}"), move || cyclotomic_factor(m)));
    }
    for d in 1..=9 {
        jobs.push(one(format!("gap family d={d}"), move || gap_family(d)));
    }
}

fn s4_jobs(jobs: &mut Vec<Job>) {
    for m in 2..=5 {
        jobs.push(one(format!("power collapse m={m}"), move || {
            power_collapse(m)
        }));
    }
    for selector in 1..=4 {
        jobs.push(one(format!("mixed collapse {selector}"), move || {
            mixed_collapse(selector)
        }));
    }
    jobs.push(one("squared norm eps=1/2", || squared_norm_example(rat(1, 2))));
    jobs.push(one("triple products", triple_product_example));
    jobs.push(job("indefinite product refusals", || {
        for (a, b) in [(0, 0), (1, 0), (0, 1)] {
            match indefinite_product(a, b) {
                Err(Error::Refused(_)) => {}
                Ok(_) => {
                    return Err(Error::VerificationFailed(format!(
                        "target ({a}, {b}) must be refused"
                    )))
                }
                Err(other) => return Err(other),
            }
        }
        Ok(Vec::new())
    }));
    for total in 0..=12 {
        for a in 0..=total {
            let b = total - a;
            if matches!((a, b), (0, 0) | (1, 0) | (0, 1)) {
                continue;
            }
            jobs.push(one(format!("indefinite product ({a}, {b})"), move || {
                indefinite_product(a, b)
            }));
        }
    }
}

fn s7_jobs(jobs: &mut Vec<Job>) {
    for d in 1..=10 {
        jobs.push(one(format!("whitney d={d}"), move || whitney(d)));
    }
    for (a, b, c) in line_multiple_cases() {
        jobs.push(one(format!("line multiple ({a}, {b}, {c})"), move || {
            line_multiple_example((rat_int(a), rat_int(b), rat_int(c)))
        }));
    }
    jobs.push(one("split difference", split_difference_example));
    jobs.push(job("table constructed cells", || {
        let cells = signature_table()?;
        let mut certs = Vec::new();
        for cell in cells {
            if let Some(cert) = cell.certificate {
                if !cert.is_verified() {
                    return Err(Error::VerificationFailed(format!(
                        "cell ({}, {}) carries an unverified certificate",
                        cell.a, cell.b
                    )));
                }
                certs.push(cert);
            }
        }
        Ok(certs)
    }));
    jobs.push(job("unbounded degree at (4, 4)", || {
        let low = stability_construct(2, 4, 4, 0)?;
        let high = stability_construct(2, 4, 4, 3)?;
        let d0 = recorded_degree(&low)?;
        let d1 = recorded_degree(&high)?;
        if d1 <= d0 {
            return Err(Error::VerificationFailed(format!(
                "projective degree failed to grow: {d0}, then {d1}"
            )));
        }
        Ok(vec![low, high])
    }));
    for m in 1..=5u32 {
        jobs.push(one(format!("degree growth m={m}"), move || {
            degree_growth_example(m)
        }));
    }
}

fn s8_jobs(jobs: &mut Vec<Job>) {
    for (n, a, b) in [
        (2, 7, 5),
        (2, 5, 7),
        (2, 6, 6),
        (2, 4, 4),
        (3, 15, 15),
        (4, 28, 28),
    ] {
        jobs.push(one(format!("stable pair n={n} ({a}, {b})"), move || {
            stability_construct(n, a, b, 0)
        }));
    }
    jobs.push(job("target family refusal n=3 N=4", || {
        match target_family(3, 4) {
            Err(Error::Refused(_)) => Ok(Vec::new()),
            Ok(_) => Err(Error::VerificationFailed(
                "target size 4 must be refused for n = 3".into(),
            )),
            Err(other) => Err(other),
        }
    }));
    for size in 5..=15 {
        jobs.push(one(format!("target family n=3 N={size}"), move || {
            target_family(3, size)
        }));
    }
    for plus in [true, false] {
        let name = if plus { "plus" } else { "minus" };
        jobs.push(one(format!("signature shift {name}"), move || {
            signature_shift(&shift_base()?, plus, 3)
        }));
    }
    jobs.push(one("tensor move", || {
        let start = sphere_form(2);
        tensor_move(&start, 0)
    }));
}

/// Assemble the groups for one suite name (`all` concatenates the four).
pub fn suite_jobs(suite: &str) -> Vec<Job> {
    let mut jobs = Vec::new();
    if suite == "all" || suite == "s3" {
        s3_jobs(&mut jobs);
    }
    if suite == "all" || suite == "s4" {
        s4_jobs(&mut jobs);
    }
    if suite == "all" || suite == "s7" {
        s7_jobs(&mut jobs);
    }
    if suite == "all" || suite == "s8" {
        s8_jobs(&mut jobs);
    }
    jobs
}

/// Run every group on a worker pool and hand the reports back in
/// submission order.
pub fn run_suite(suite: &str) -> Vec<GroupReport> {
    let jobs = suite_jobs(suite);
    let count = jobs.len();
    let queue: Mutex<VecDeque<(usize, Job)>> = Mutex::new(jobs.into_iter().enumerate().collect());
    let done: Mutex<Vec<(usize, GroupReport)>> = Mutex::new(Vec::with_capacity(count));
    let workers = std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(4)
        .min(count.max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().pop_front();
                let Some((index, (name, work))) = next else {
                    break;
                };
                let result = work();
                done.lock()
                    .unwrap()
                    .push((index, GroupReport { name, result }));
            });
        }
    });
    let mut reports = done.into_inner().unwrap();
    reports.sort_by_key(|(index, _)| *index);
    reports.into_iter().map(|(_, report)| report).collect()
}
