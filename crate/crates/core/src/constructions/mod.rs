//! Certified generators for polynomials with prescribed signature data.
//!
//! Every public operation here builds something concrete (a factorization,
//! a family member, a product with collapsing rank, a sphere-ideal element
//! with a chosen signature pair) and then re-derives each claimed invariant
//! through [`crate::hermitian_form`] and [`crate::quotient`] before putting
//! it in a [`Certificate`]. Nothing a generator "knows" about its own output
//! is ever written down without being recomputed; a claim that fails to
//! verify aborts the construction with [`Error::VerificationFailed`] instead
//! of producing a certificate.

mod factorizations;
mod families;
mod stability;
mod table;

pub use factorizations::{
    cyclotomic_factor, cyclotomic_positive_factor, indefinite_product, lemma31_suite,
    mixed_collapse, power_collapse,
};
pub use families::{
    degree_growth_example, gap_family, line_multiple_example, split_difference_example,
    squared_norm_example, triple_product_example, whitney,
};
pub use stability::{
    degree_bound, juxtapose, signature_shift, stability_construct, stability_decompose,
    stability_threshold, target_family, target_threshold, tensor_move, Decomposition,
};
pub use table::{signature_table, TableCell};

use crate::hermitian_form::{inertia, InertiaResult, Witness};
use crate::polyring::{moment_lift, HermPoly, RealPoly};
use crate::quotient::{divide_by_r, DivisionWitness};
use crate::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;

/// One recomputed statement inside a [`Certificate`].
///
/// `status` is `"verified"` when `computed` was checked against `expected`,
/// and `"computed"` when there was no expectation to check against (free
/// parameters outside the tabulated cases).
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub kind: String,
    pub expected: String,
    pub computed: String,
    pub status: String,
}

/// A construction together with every claim about it, each one recomputed.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub construction: String,
    pub params: BTreeMap<String, String>,
    pub polynomials: BTreeMap<String, String>,
    pub claims: Vec<Claim>,
    pub chosen_parameters: BTreeMap<String, String>,
}

impl Certificate {
    pub fn new(construction: &str) -> Certificate {
        Certificate {
            construction: construction.to_string(),
            params: BTreeMap::new(),
            polynomials: BTreeMap::new(),
            claims: Vec::new(),
            chosen_parameters: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn poly(&mut self, name: &str, p: &HermPoly) {
        self.polynomials.insert(name.to_string(), p.to_string());
    }

    pub fn poly_real(&mut self, name: &str, p: &RealPoly) {
        self.polynomials.insert(name.to_string(), p.to_string());
    }

    /// Record a free parameter the construction settled on (an epsilon, a
    /// sign pattern, a degree), so the output is reproducible.
    pub fn chose(&mut self, key: &str, value: impl fmt::Display) {
        self.chosen_parameters
            .insert(key.to_string(), value.to_string());
    }

    /// Push a claim whose recomputed value must match the expectation.
    pub fn check(
        &mut self,
        kind: &str,
        expected: impl fmt::Display,
        computed: impl fmt::Display,
    ) -> Result<()> {
        let expected = expected.to_string();
        let computed = computed.to_string();
        if expected != computed {
            return Err(Error::VerificationFailed(format!(
                "{kind}: expected {expected}, computed {computed}"
            )));
        }
        self.claims.push(Claim {
            kind: kind.to_string(),
            expected,
            computed,
            status: "verified".to_string(),
        });
        Ok(())
    }

    /// Push a claim that holds by a certified predicate rather than string
    /// equality (interval bounds). The statement describes what was checked.
    pub fn certify(&mut self, kind: &str, statement: impl fmt::Display, ok: bool) -> Result<()> {
        let statement = statement.to_string();
        if !ok {
            return Err(Error::VerificationFailed(format!("{kind}: {statement}")));
        }
        self.claims.push(Claim {
            kind: kind.to_string(),
            expected: statement.clone(),
            computed: statement,
            status: "verified".to_string(),
        });
        Ok(())
    }

    /// Push a computed value with no expectation attached.
    pub fn record(&mut self, kind: &str, computed: impl fmt::Display) {
        let computed = computed.to_string();
        self.claims.push(Claim {
            kind: kind.to_string(),
            expected: computed.clone(),
            computed,
            status: "computed".to_string(),
        });
    }

    pub fn is_verified(&self) -> bool {
        !self.claims.is_empty()
            && self
                .claims
                .iter()
                .all(|c| c.status == "verified" || c.status == "computed")
    }
}

pub(crate) fn pair_str(p: (usize, usize)) -> String {
    format!("({}, {})", p.0, p.1)
}

pub(crate) fn triple_str(t: (usize, usize, usize)) -> String {
    format!("({}, {}, {})", t.0, t.1, t.2)
}

/// Hex digest of the congruence witness behind an inertia computation, so a
/// certificate pins down which diagonalization vouched for it.
pub(crate) fn witness_digest(result: &InertiaResult) -> String {
    let mut hasher = Sha256::new();
    match &result.witness {
        Witness::Identity(n) => hasher.update(format!("identity:{n}")),
        Witness::Matrix(rows) => {
            for row in rows {
                for entry in row {
                    hasher.update(entry.to_string());
                    hasher.update(";");
                }
                hasher.update("|");
            }
        }
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Recompute the signature pair of `p` and check it against `expected`.
pub(crate) fn check_pair(
    cert: &mut Certificate,
    name: &str,
    p: &HermPoly,
    expected: (usize, usize),
) -> Result<()> {
    let result = inertia(p)?;
    cert.chose(&format!("witness sha256 for {name}"), witness_digest(&result));
    cert.check(
        &format!("signature pair of {name}"),
        pair_str(expected),
        pair_str(result.pair()),
    )
}

/// Recompute the inertia triple of `p` in its minimal ambient space.
pub(crate) fn check_triple(
    cert: &mut Certificate,
    name: &str,
    p: &HermPoly,
    expected: (usize, usize, usize),
) -> Result<()> {
    let result = inertia(p)?;
    cert.chose(&format!("witness sha256 for {name}"), witness_digest(&result));
    cert.check(
        &format!("inertia triple of {name}"),
        triple_str(expected),
        triple_str(result.triple()),
    )
}

/// Divide `p` by the hyperquadric form, demand an exact multiple, and hand
/// back the cofactor. The division identity is re-multiplied before the
/// membership claim is recorded.
pub(crate) fn check_member(
    cert: &mut Certificate,
    name: &str,
    p: &HermPoly,
) -> Result<HermPoly> {
    let witness: DivisionWitness<HermPoly> = divide_by_r(p)?;
    if !witness.verify(p)? {
        return Err(Error::Internal(format!(
            "division identity for {name} failed to re-multiply"
        )));
    }
    cert.check(
        &format!("{name} lies in the ideal of the hyperquadric form"),
        true,
        witness.member,
    )?;
    Ok(witness.quotient)
}

/// Lift a polynomial in one real variable to a bihomogeneous Hermitian
/// polynomial on C^2: substitute `t = |z_1|^2` and homogenize with `z_2`.
pub(crate) fn lift_line(p: &RealPoly) -> HermPoly {
    moment_lift(p).bihomogenize()
}
