//! Coefficient matrices of bihomogeneous Hermitian polynomials on a
//! monomial basis, with exact inertia by congruence reduction.
//!
//! The inertia triple is computed without eigenvalues: Lagrange reduction
//! pivots on nonzero diagonal entries and falls back to the hyperbolic
//! basis change `e_i + e_j` (or `e_i + i*e_j` for purely imaginary
//! couplings) when the remaining diagonal vanishes. Inertia is a
//! congruence invariant, so counting signs of the exact reduced diagonal
//! gives the answer with no rounding anywhere. A floating eigensolver is
//! provided as an independent cross-check for tests only.

use crate::polyring::{HermPoly, MultiIndex};
use crate::scalar::ComplexScalar;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// The space V(d, m) of homogeneous degree-d polynomials in m variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub degree: u32,
    pub vars: usize,
}

impl Ambient {
    pub fn new(degree: u32, vars: usize) -> Result<Self> {
        if vars == 0 {
            return Err(Error::InvalidInput(
                "ambient needs at least one variable".into(),
            ));
        }
        Ok(Ambient { degree, vars })
    }

    /// The smallest ambient containing a bihomogeneous polynomial.
    pub fn minimal_for(p: &HermPoly) -> Result<Self> {
        let d = p
            .is_bihomogeneous()
            .ok_or(Error::NotBihomogeneous(p.bidegree().0))?;
        Ambient::new(d, p.arity().max(1))
    }

    /// Dimension of V(d, m): binomial(d + m - 1, m - 1).
    pub fn dim(&self) -> usize {
        let n = u128::from(self.degree) + (self.vars as u128) - 1;
        let k = (self.vars as u128) - 1;
        let b = binomial_u128(n, k);
        usize::try_from(b).expect("ambient dimension overflows usize")
    }
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Degree-d monomials in m variables, in descending lexicographic order.
pub fn monomial_basis(ambient: &Ambient) -> Vec<MultiIndex> {
    fn gen(d: u32, m: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if m == 1 {
            prefix.push(d);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            gen(d - e, m - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(ambient.dim());
    gen(ambient.degree, ambient.vars, &mut Vec::new(), &mut out);
    out
}

/// Square matrix with the Hermitian symmetry checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix {
    rows: Vec<Vec<ComplexScalar>>,
}

impl HermMatrix {
    pub fn from_rows(rows: Vec<Vec<ComplexScalar>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::InvalidInput(format!(
                    "matrix is not square: row of length {} in a {}-row matrix",
                    r.len(),
                    n
                )));
            }
        }
        for i in 0..n {
            for j in i..n {
                if rows[i][j] != rows[j][i].conj() {
                    return Err(Error::NotHermitian(format!(
                        "entry ({i},{j}) is {} but ({j},{i}) is {}",
                        rows[i][j], rows[j][i]
                    )));
                }
            }
        }
        Ok(HermMatrix { rows })
    }

    pub fn zero(dim: usize) -> Self {
        HermMatrix {
            rows: vec![vec![ComplexScalar::zero(); dim]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &ComplexScalar {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<ComplexScalar>] {
        &self.rows
    }

    /// Exact inertia of the matrix by congruence reduction.
    pub fn diagonalize(&self) -> Result<Diagonalization> {
        congruence_inertia(self.rows.clone())
    }
}

/// The coefficient matrix of a bihomogeneous polynomial on `basis`:
/// entry (i, j) is the coefficient of `z^basis[i] * ~z^basis[j]`.
#[derive(Clone, Debug)]
pub struct FormMatrix {
    pub ambient: Ambient,
    pub basis: Vec<MultiIndex>,
    pub matrix: HermMatrix,
}

pub fn form_matrix(p: &HermPoly, ambient: Ambient) -> Result<FormMatrix> {
    let placed = place(p, ambient)?;
    let basis = monomial_basis(&ambient);
    let index: BTreeMap<&MultiIndex, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut matrix = HermMatrix::zero(basis.len());
    for ((a, b), c) in placed.terms() {
        let i = *index
            .get(a)
            .ok_or_else(|| Error::Internal(format!("monomial {a:?} missing from basis")))?;
        let j = *index
            .get(b)
            .ok_or_else(|| Error::Internal(format!("monomial {b:?} missing from basis")))?;
        matrix.rows[i][j] = c.clone();
    }
    Ok(FormMatrix {
        ambient,
        basis,
        matrix,
    })
}

fn place(p: &HermPoly, ambient: Ambient) -> Result<HermPoly> {
    if p.is_zero() {
        return p.widen(ambient.vars.max(p.arity()));
    }
    match p.is_bihomogeneous() {
        Some(d) if d == ambient.degree => {}
        _ => return Err(Error::NotBihomogeneous(ambient.degree)),
    }
    if p.arity() > ambient.vars {
        return Err(Error::AmbientTooSmall(format!(
            "polynomial in {} variables placed in V({}, {})",
            p.arity(),
            ambient.degree,
            ambient.vars
        )));
    }
    p.widen(ambient.vars)
}

/// Change of basis realizing a congruence diagonalization.
#[derive(Clone, Debug)]
pub enum Witness {
    /// The form was already diagonal on the monomial basis.
    Identity(usize),
    /// Columns are the new basis vectors; `Q^H M Q` is the signed diagonal.
    Matrix(Vec<Vec<ComplexScalar>>),
}

#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
    pub witness: Witness,
}

/// Exact inertia of a polynomial placed in an explicit ambient space.
#[derive(Clone, Debug)]
pub struct InertiaResult {
    pub ambient: Ambient,
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
    pub witness: Witness,
}

impl InertiaResult {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.pos, self.neg, self.zero)
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.pos, self.neg)
    }

    pub fn rank(&self) -> usize {
        self.pos + self.neg
    }
}

/// Inertia of `p` in a declared ambient space. Diagonal polynomials skip
/// matrix construction entirely: their eigenvalues are the stored
/// coefficients, and the nullity is the count of absent basis monomials,
/// so only the dimension formula is needed. That keeps very large but
/// sparse diagonal forms (dimension in the tens of thousands) cheap.
pub fn inertia_in(p: &HermPoly, ambient: Ambient) -> Result<InertiaResult> {
    let placed = place(p, ambient)?;
    let dim = ambient.dim();
    if placed.is_diagonal() {
        let mut pos = 0;
        let mut neg = 0;
        for (_, c) in placed.terms() {
            match diag_sign(c)? {
                1 => pos += 1,
                -1 => neg += 1,
                _ => {
                    return Err(Error::Internal(
                        "stored diagonal coefficient is zero".into(),
                    ))
                }
            }
        }
        return Ok(InertiaResult {
            ambient,
            pos,
            neg,
            zero: dim - pos - neg,
            witness: Witness::Identity(dim),
        });
    }
    let fm = form_matrix(&placed, ambient)?;
    let d = fm.matrix.diagonalize()?;
    Ok(InertiaResult {
        ambient,
        pos: d.pos,
        neg: d.neg,
        zero: d.zero,
        witness: d.witness,
    })
}

/// Inertia in the minimal ambient space, bihomogenizing first if needed.
pub fn inertia(p: &HermPoly) -> Result<InertiaResult> {
    let q = p.bihomogenize();
    let ambient = Ambient::minimal_for(&q)?;
    inertia_in(&q, ambient)
}

/// Counts of positive and negative eigenvalues; unaffected by the choice
/// of ambient space.
pub fn signature_pair(p: &HermPoly) -> Result<(usize, usize)> {
    Ok(inertia(p)?.pair())
}

pub fn rank(p: &HermPoly) -> Result<usize> {
    let (a, b) = signature_pair(p)?;
    Ok(a + b)
}

fn diag_sign(c: &ComplexScalar) -> Result<i8> {
    if !matches!(c.im, crate::scalar::Scalar::Interval(_)) && !c.im.is_zero() {
        return Err(Error::Internal(format!(
            "diagonal entry {c} has a nonzero imaginary part"
        )));
    }
    c.re.sign_of()
}

fn congruence_inertia(mut m: Vec<Vec<ComplexScalar>>) -> Result<Diagonalization> {
    let n = m.len();
    let mut q: Vec<Vec<ComplexScalar>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        ComplexScalar::one()
                    } else {
                        ComplexScalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;

    let mut k = 0;
    while k < n {
        if m[k][k].is_zero() {
            let diag = (k + 1..n).find(|&i| !m[i][i].is_zero());
            if let Some(i) = diag {
                swap_basis(&mut m, &mut q, k, i);
            } else {
                let coupling = (k..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !m[i][j].is_zero());
                let (i, j) = match coupling {
                    Some(pair) => pair,
                    None => {
                        zero += n - k;
                        break;
                    }
                };
                let c = if m[i][j].re.is_zero() {
                    ComplexScalar::i()
                } else {
                    ComplexScalar::one()
                };
                add_basis(&mut m, &mut q, i, j, &c)?;
                if i != k {
                    swap_basis(&mut m, &mut q, k, i);
                }
            }
        }
        let pivot = m[k][k].clone();
        match diag_sign(&pivot)? {
            1 => pos += 1,
            -1 => neg += 1,
            _ => return Err(Error::Internal("zero pivot after selection".into())),
        }
        for i in k + 1..n {
            let a_i = m[k][i].div(&pivot)?;
            if a_i.is_zero() {
                continue;
            }
            let conj_a = a_i.conj();
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let delta = conj_a.mul(&m[k][j])?;
                m[i][j] = m[i][j].sub(&delta)?;
            }
            for r in 0..n {
                if q[r][k].is_zero() {
                    continue;
                }
                let delta = a_i.mul(&q[r][k])?;
                q[r][i] = q[r][i].sub(&delta)?;
            }
        }
        for i in k + 1..n {
            m[k][i] = ComplexScalar::zero();
            m[i][k] = ComplexScalar::zero();
        }
        k += 1;
    }

    Ok(Diagonalization {
        pos,
        neg,
        zero,
        witness: Witness::Matrix(q),
    })
}

fn swap_basis(
    m: &mut [Vec<ComplexScalar>],
    q: &mut [Vec<ComplexScalar>],
    a: usize,
    b: usize,
) {
    let n = m.len();
    m.swap(a, b);
    for row in m.iter_mut() {
        row.swap(a, b);
    }
    for r in 0..n {
        q[r].swap(a, b);
    }
}

/// Basis change `e_i <- e_i + c * e_j`, applied to the form and recorded
/// in the transform.
fn add_basis(
    m: &mut [Vec<ComplexScalar>],
    q: &mut [Vec<ComplexScalar>],
    i: usize,
    j: usize,
    c: &ComplexScalar,
) -> Result<()> {
    let n = m.len();
    let conj_c = c.conj();
    for s in 0..n {
        let delta = conj_c.mul(&m[j][s])?;
        m[i][s] = m[i][s].add(&delta)?;
    }
    for s in 0..n {
        let delta = c.mul(&m[s][j])?;
        m[s][i] = m[s][i].add(&delta)?;
    }
    for r in 0..n {
        let delta = c.mul(&q[r][j])?;
        q[r][i] = q[r][i].add(&delta)?;
    }
    Ok(())
}

/// Recompute `Q^H M Q` from the witness and check it is a diagonal matrix
/// whose sign counts match the claimed inertia.
pub fn verify_diagonalization(m: &HermMatrix, d: &Diagonalization) -> Result<bool> {
    let n = m.dim();
    let q = match &d.witness {
        Witness::Identity(dim) => {
            if *dim != n {
                return Ok(false);
            }
            return check_diagonal_counts(m.rows(), d);
        }
        Witness::Matrix(q) => q,
    };
    if q.len() != n {
        return Ok(false);
    }
    let mut mq = vec![vec![ComplexScalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = ComplexScalar::zero();
            for t in 0..n {
                if m.rows[i][t].is_zero() || q[t][j].is_zero() {
                    continue;
                }
                acc = acc.add(&m.rows[i][t].mul(&q[t][j])?)?;
            }
            mq[i][j] = acc;
        }
    }
    let mut diag = vec![vec![ComplexScalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = ComplexScalar::zero();
            for t in 0..n {
                if q[t][i].is_zero() || mq[t][j].is_zero() {
                    continue;
                }
                acc = acc.add(&q[t][i].conj().mul(&mq[t][j])?)?;
            }
            diag[i][j] = acc;
        }
    }
    check_diagonal_counts(&diag, d)
}

fn check_diagonal_counts(rows: &[Vec<ComplexScalar>], d: &Diagonalization) -> Result<bool> {
    let n = rows.len();
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j && !rows[i][j].is_zero() {
                return Ok(false);
            }
        }
        match diag_sign(&rows[i][i])? {
            1 => pos += 1,
            -1 => neg += 1,
            _ => zero += 1,
        }
    }
    Ok(pos == d.pos && neg == d.neg && zero == d.zero)
}

/// Floating eigenvalue counts by sign, for cross-checking the exact path
/// in tests. The complex Hermitian matrix H = A + iB embeds as the real
/// symmetric matrix [[A, -B], [B, A]], whose spectrum is that of H with
/// every eigenvalue doubled.
pub fn eigen_oracle(m: &HermMatrix, zero_threshold: f64) -> (usize, usize, usize) {
    let n = m.dim();
    if n == 0 {
        return (0, 0, 0);
    }
    let mut real = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (re, im) = m.rows[i][j].approx_f64();
            real[(i, j)] = re;
            real[(n + i, n + j)] = re;
            real[(i, n + j)] = -im;
            real[(n + i, j)] = im;
        }
    }
    let sym = nalgebra::SymmetricEigen::new(real);
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for ev in sym.eigenvalues.iter() {
        if *ev > zero_threshold {
            pos += 1;
        } else if *ev < -zero_threshold {
            neg += 1;
        } else {
            zero += 1;
        }
    }
    (pos / 2, neg / 2, zero / 2)
}
