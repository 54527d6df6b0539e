//! Text grammar for polynomials: variables `z1..z9`, conjugates `~z1..~z9`,
//! real variables `x1..x9`, the modulus sugar `|zj|^2k`, the imaginary unit
//! `i`, rational literals, `sqrt(...)` of a scalar subexpression, and the
//! operators `+ - * / ^` with parentheses. Whitespace is ignored everywhere.
//!
//! Evaluation is exact. An expression either denotes a Hermitian symmetric
//! polynomial in `z`/`~z`, a real polynomial in `x`, or a constant; mixing
//! the two variable kinds is an error, and a `z`-expression that is not
//! Hermitian symmetric is rejected with the offending term pair named.

use hermsig::polyring::{HermPoly, MultiIndex, RealPoly};
use hermsig::scalar::{ComplexScalar, Scalar};
use hermsig::{Error, Result};
use std::collections::BTreeMap;

const MAX_VARS: usize = 9;
const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    ZVar(usize),
    ConjVar(usize),
    XVar(usize),
    Imag,
    Sqrt,
    Pipe,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn syntax(pos: usize, what: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("syntax error at byte {pos}: {what}"))
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((start, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((start, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((start, Tok::Star));
                i += 1;
            }
            '/' => {
                toks.push((start, Tok::Slash));
                i += 1;
            }
            '^' => {
                toks.push((start, Tok::Caret));
                i += 1;
            }
            '(' => {
                toks.push((start, Tok::Open));
                i += 1;
            }
            ')' => {
                toks.push((start, Tok::Close));
                i += 1;
            }
            '|' => {
                toks.push((start, Tok::Pipe));
                i += 1;
            }
            '~' => {
                let j = (bytes.get(i + 1) == Some(&b'z'))
                    .then(|| var_index(bytes, i + 2, 'z'))
                    .flatten()
                    .ok_or_else(|| syntax(start, "`~` must be followed by z1..z9"))?;
                toks.push((start, Tok::ConjVar(j)));
                i += 3;
            }
            '0'..='9' => {
                let mut end = i;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                toks.push((start, Tok::Int(text[i..end].to_string())));
                i = end;
            }
            'a'..='z' | 'A'..='Z' => {
                if let Some(j) = var_index(bytes, i + 1, c) {
                    let tok = match c {
                        'z' => Tok::ZVar(j),
                        'x' => Tok::XVar(j),
                        _ => return Err(syntax(start, format!("unknown variable `{c}{}`", j + 1))),
                    };
                    toks.push((start, tok));
                    i += 2;
                    continue;
                }
                let mut end = i;
                while end < bytes.len() && (bytes[end] as char).is_ascii_alphabetic() {
                    end += 1;
                }
                match &text[i..end] {
                    "i" => toks.push((start, Tok::Imag)),
                    "sqrt" => toks.push((start, Tok::Sqrt)),
                    word => return Err(syntax(start, format!("unknown name `{word}`"))),
                }
                i = end;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

fn var_index(bytes: &[u8], at: usize, kind: char) -> Option<usize> {
    if kind != 'z' && kind != 'x' {
        return None;
    }
    let d = *bytes.get(at)? as char;
    if !('1'..='9').contains(&d) {
        return None;
    }
    if bytes.get(at + 1).is_some_and(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(d as usize - '1' as usize)
}

/// Monomial key over the three variable kinds, each at full width so keys
/// combine without arity bookkeeping; trimming happens at classification.
type Key = (MultiIndex, MultiIndex, MultiIndex);

fn unit_key() -> Key {
    (
        MultiIndex::zero(MAX_VARS),
        MultiIndex::zero(MAX_VARS),
        MultiIndex::zero(MAX_VARS),
    )
}

fn key_mul(a: &Key, b: &Key) -> Key {
    (a.0.add(&b.0), a.1.add(&b.1), a.2.add(&b.2))
}

/// Exact polynomial over all three variable kinds at once, the working
/// value during evaluation.
#[derive(Clone, Debug)]
struct Raw {
    terms: BTreeMap<Key, ComplexScalar>,
}

impl Raw {
    fn zero() -> Raw {
        Raw {
            terms: BTreeMap::new(),
        }
    }

    fn constant(c: ComplexScalar) -> Raw {
        let mut p = Raw::zero();
        if !c.is_zero() {
            p.terms.insert(unit_key(), c);
        }
        p
    }

    fn variable(tok: &Tok) -> Raw {
        let mut key = unit_key();
        match tok {
            Tok::ZVar(j) => key.0 .0[*j] = 1,
            Tok::ConjVar(j) => key.1 .0[*j] = 1,
            Tok::XVar(j) => key.2 .0[*j] = 1,
            _ => unreachable!("variable token"),
        }
        let mut p = Raw::zero();
        p.terms.insert(key, ComplexScalar::one());
        p
    }

    fn modulus(j: usize, half: u32) -> Raw {
        let mut key = unit_key();
        key.0 .0[j] = half;
        key.1 .0[j] = half;
        let mut p = Raw::zero();
        p.terms.insert(key, ComplexScalar::one());
        p
    }

    fn insert(&mut self, key: Key, c: ComplexScalar) -> Result<()> {
        match self.terms.remove(&key) {
            None => {
                if !c.is_zero() {
                    self.terms.insert(key, c);
                }
            }
            Some(old) => {
                let sum = old.add(&c)?;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
        Ok(())
    }

    fn add(&self, o: &Raw) -> Result<Raw> {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    fn neg(&self) -> Raw {
        Raw {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    fn mul(&self, o: &Raw) -> Result<Raw> {
        let mut out = Raw::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                out.insert(key_mul(ka, kb), ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    fn pow(&self, e: u32) -> Result<Raw> {
        let mut out = Raw::constant(ComplexScalar::one());
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    fn as_constant(&self) -> Option<ComplexScalar> {
        if self.terms.is_empty() {
            return Some(ComplexScalar::zero());
        }
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            if *k == unit_key() {
                return Some(c.clone());
            }
        }
        None
    }

    fn div(&self, o: &Raw, pos: usize) -> Result<Raw> {
        let denom = o
            .as_constant()
            .ok_or_else(|| syntax(pos, "division is only defined by a scalar"))?;
        let mut out = Raw::zero();
        for (k, c) in &self.terms {
            out.insert(k.clone(), c.div(&denom)?)?;
        }
        Ok(out)
    }
}

/// A parsed polynomial: Hermitian symmetric in `z`, or real in `x`.
#[derive(Clone, Debug)]
pub enum Parsed {
    Herm(HermPoly),
    Real(RealPoly),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<usize> {
        match self.bump() {
            Some((p, t)) if t == *want => Ok(p),
            Some((p, _)) => Err(syntax(p, format!("expected {what}"))),
            None => Err(syntax(self.len, format!("expected {what}, found end"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<(usize, u32)> {
        match self.bump() {
            Some((p, Tok::Int(digits))) => {
                let v: u32 = digits
                    .parse()
                    .map_err(|_| syntax(p, format!("{what} is out of range")))?;
                if v > MAX_EXPONENT {
                    return Err(syntax(p, format!("{what} exceeds {MAX_EXPONENT}")));
                }
                Ok((p, v))
            }
            Some((p, _)) => Err(syntax(p, format!("expected {what}"))),
            None => Err(syntax(self.len, format!("expected {what}, found end"))),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Raw> {
        let mut lhs = self.prefix()?;
        loop {
            let (bp, tok) = match self.peek() {
                Some(Tok::Plus) => (1, Tok::Plus),
                Some(Tok::Minus) => (1, Tok::Minus),
                Some(Tok::Star) => (3, Tok::Star),
                Some(Tok::Slash) => (5, Tok::Slash),
                Some(Tok::Caret) => (7, Tok::Caret),
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            let (pos, _) = self.bump().unwrap();
            lhs = match tok {
                Tok::Caret => {
                    let (_, e) = self.int("an integer exponent")?;
                    lhs.pow(e)?
                }
                Tok::Slash => {
                    let rhs = self.expr(bp + 1)?;
                    lhs.div(&rhs, pos)?
                }
                Tok::Star => lhs.mul(&self.expr(bp + 1)?)?,
                Tok::Plus => lhs.add(&self.expr(bp + 1)?)?,
                Tok::Minus => lhs.add(&self.expr(bp + 1)?.neg())?,
                _ => unreachable!("binary operator"),
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Raw> {
        let (pos, tok) = self
            .bump()
            .ok_or_else(|| syntax(self.len, "expected an expression, found end"))?;
        match tok {
            Tok::Int(digits) => {
                let r = digits
                    .parse()
                    .map_err(|_| syntax(pos, "unreadable integer literal"))?;
                Ok(Raw::constant(ComplexScalar::real(Scalar::from_rat(r))))
            }
            Tok::Imag => Ok(Raw::constant(ComplexScalar::new(
                Scalar::zero(),
                Scalar::one(),
            ))),
            Tok::ZVar(_) | Tok::ConjVar(_) | Tok::XVar(_) => Ok(Raw::variable(&tok)),
            Tok::Minus => Ok(self.expr(6)?.neg()),
            Tok::Plus => self.expr(6),
            Tok::Open => {
                let inner = self.expr(0)?;
                self.expect(&Tok::Close, "a closing parenthesis")?;
                Ok(inner)
            }
            Tok::Sqrt => {
                self.expect(&Tok::Open, "`(` after sqrt")?;
                let inner = self.expr(0)?;
                self.expect(&Tok::Close, "a closing parenthesis")?;
                let c = inner
                    .as_constant()
                    .ok_or_else(|| syntax(pos, "sqrt of a non-scalar expression"))?;
                let real = c.expect_real()?;
                Ok(Raw::constant(ComplexScalar::real(real.sqrt()?)))
            }
            Tok::Pipe => {
                let j = match self.bump() {
                    Some((_, Tok::ZVar(j))) => j,
                    Some((p, _)) => return Err(syntax(p, "expected z1..z9 inside `|...|`")),
                    None => return Err(syntax(self.len, "expected z1..z9 inside `|...|`")),
                };
                self.expect(&Tok::Pipe, "a closing `|`")?;
                self.expect(&Tok::Caret, "`^` after `|zj|`")?;
                let (epos, e) = self.int("an integer exponent")?;
                if e % 2 != 0 {
                    return Err(syntax(epos, "modulus powers must be even"));
                }
                Ok(Raw::modulus(j, e / 2))
            }
            _ => Err(syntax(pos, "expected an expression")),
        }
    }
}

fn classify(raw: Raw, len: usize) -> Result<Parsed> {
    let mut zmax = 0usize;
    let mut xmax = 0usize;
    let mut z_used = false;
    let mut x_used = false;
    for (z, w, x) in raw.terms.keys() {
        for j in 0..MAX_VARS {
            if z.0[j] > 0 || w.0[j] > 0 {
                z_used = true;
                zmax = zmax.max(j + 1);
            }
            if x.0[j] > 0 {
                x_used = true;
                xmax = xmax.max(j + 1);
            }
        }
    }
    if z_used && x_used {
        return Err(syntax(
            len,
            "an expression cannot mix z-variables with x-variables",
        ));
    }
    if x_used {
        let mut items = Vec::new();
        for ((_, _, x), c) in &raw.terms {
            if !c.is_real() {
                return Err(syntax(
                    len,
                    "a real polynomial needs real coefficients",
                ));
            }
            let mi = MultiIndex::new(x.0[..xmax].to_vec());
            items.push((mi, c.re.clone()));
        }
        return Ok(Parsed::Real(RealPoly::from_terms(xmax, items)?));
    }
    let items: Vec<_> = raw
        .terms
        .iter()
        .map(|((z, w, _), c)| {
            (
                MultiIndex::new(z.0[..zmax].to_vec()),
                MultiIndex::new(w.0[..zmax].to_vec()),
                c.clone(),
            )
        })
        .collect();
    Ok(Parsed::Herm(HermPoly::from_terms(zmax, items)?))
}

/// Parse and evaluate an expression into an exact polynomial.
pub fn parse_polynomial(text: &str) -> Result<Parsed> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
    };
    let raw = p.expr(0)?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "trailing input after the expression"));
    }
    classify(raw, text.len())
}

/// Parse an expression that must denote a Hermitian symmetric polynomial;
/// real `x`-expressions are carried over by the moment map.
pub fn parse_hermitian(text: &str) -> Result<HermPoly> {
    match parse_polynomial(text)? {
        Parsed::Herm(p) => Ok(p),
        Parsed::Real(p) => Ok(hermsig::polyring::moment_lift(&p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hermsig::scalar::{rat, rat_int};
    use proptest::prelude::*;

    fn herm(text: &str) -> HermPoly {
        match parse_polynomial(text).unwrap() {
            Parsed::Herm(p) => p,
            Parsed::Real(_) => panic!("expected a Hermitian polynomial"),
        }
    }

    fn real(text: &str) -> RealPoly {
        match parse_polynomial(text).unwrap() {
            Parsed::Real(p) => p,
            Parsed::Herm(_) => panic!("expected a real polynomial"),
        }
    }

    fn failure(text: &str) -> String {
        parse_polynomial(text).unwrap_err().to_string()
    }

    #[test]
    fn multiplication_binds_tighter_than_addition() {
        assert_eq!(herm("1 + 2*3"), HermPoly::constant(0, Scalar::from_int(7)));
    }

    #[test]
    fn exponents_bind_tighter_than_multiplication() {
        assert_eq!(herm("2*3^2"), HermPoly::constant(0, Scalar::from_int(18)));
    }

    #[test]
    fn division_rescales_every_coefficient() {
        assert_eq!(herm("(|z1|^2 + |z2|^2)/2"), herm("1/2*|z1|^2 + 1/2*|z2|^2"));
    }

    #[test]
    fn division_chains_to_the_left() {
        assert_eq!(herm("1/2/2"), HermPoly::constant(0, Scalar::from_rat(rat(1, 4))));
    }

    #[test]
    fn dividing_by_a_polynomial_is_rejected() {
        assert!(failure("z1*~z1/|z2|^2").contains("only defined by a scalar"));
    }

    #[test]
    fn modulus_sugar_matches_its_expansion() {
        assert_eq!(herm("|z2|^4"), herm("(|z2|^2)^2"));
        assert_eq!(herm("|z1|^2"), herm("z1*~z1"));
    }

    #[test]
    fn odd_modulus_powers_are_rejected() {
        assert!(failure("|z1|^3").contains("must be even"));
    }

    #[test]
    fn whitespace_never_matters() {
        assert_eq!(herm(" | z1 | ^ 2  -  | z2 |^2 "), herm("|z1|^2-|z2|^2"));
    }

    #[test]
    fn mixing_variable_kinds_is_rejected() {
        assert!(failure("x1*z1*~z1").contains("cannot mix"));
    }

    #[test]
    fn real_coefficients_are_required_on_x_terms() {
        assert!(failure("i*x1").contains("real coefficients"));
    }

    #[test]
    fn an_unmirrored_term_names_itself() {
        assert!(failure("z1*~z2").contains("no conjugate partner"));
    }

    #[test]
    fn a_lopsided_mirror_names_both_coefficients() {
        assert!(failure("z1*~z2 + 2*z2*~z1").contains("mirror"));
    }

    #[test]
    fn an_imaginary_diagonal_is_not_hermitian() {
        assert!(matches!(
            parse_polynomial("i*|z1|^2"),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn sqrt_needs_a_scalar_argument() {
        assert!(failure("sqrt(z1)").contains("non-scalar"));
    }

    #[test]
    fn sqrt_of_a_negative_is_rejected() {
        assert!(matches!(
            parse_polynomial("sqrt(-2)"),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn nested_radicals_square_back() {
        assert_eq!(herm("sqrt(2 + sqrt(2))^2"), herm("2 + sqrt(2)"));
    }

    #[test]
    fn exponent_caps_are_enforced() {
        assert!(failure("z1^5000").contains("exceeds 4096"));
    }

    #[test]
    fn unbalanced_parens_point_past_the_end() {
        assert!(failure("(z1*~z1").contains("closing parenthesis"));
    }

    #[test]
    fn adjacent_atoms_are_trailing_input() {
        assert!(failure("2 z1").contains("trailing input"));
    }

    #[test]
    fn stray_characters_carry_their_offset() {
        assert!(failure("z1*~z1 + $2").contains("byte 9"));
    }

    #[test]
    fn x_expressions_classify_as_real_polynomials() {
        let p = real("x1^2*x2 - x3");
        let q = RealPoly::from_terms(
            3,
            [
                (MultiIndex::new(vec![2, 1, 0]), Scalar::one()),
                (MultiIndex::new(vec![0, 0, 1]), Scalar::from_int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn imaginary_off_diagonal_pairs_balance() {
        let e1 = MultiIndex::var(2, 0);
        let e2 = MultiIndex::var(2, 1);
        let c = ComplexScalar::new(Scalar::zero(), Scalar::one());
        let q = HermPoly::from_terms(
            2,
            [
                (e1.clone(), e2.clone(), c.clone()),
                (e2, e1, c.conj()),
            ],
        )
        .unwrap();
        assert_eq!(herm("i*z1*~z2 - i*z2*~z1"), q);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let rational = (-60i64..60, 1i64..12).prop_map(|(p, q)| Scalar::from_rat(rat(p, q)));
        let quad = (-9i64..9, 1i64..5, prop_oneof![Just(2i64), Just(3), Just(5)]).prop_map(
            |(p, q, d)| {
                let root = Scalar::from_int(d).sqrt().unwrap();
                Scalar::from_rat(rat(p, q)).mul(&root).unwrap()
            },
        );
        prop_oneof![3 => rational, 1 => quad]
    }

    fn arb_exponent(arity: usize) -> impl Strategy<Value = MultiIndex> {
        prop::collection::vec(0u32..3, arity).prop_map(MultiIndex::new)
    }

    prop_compose! {
        fn arb_hermitian()(arity in 2usize..4)(
            diag in prop::collection::btree_map(arb_exponent(arity), arb_scalar(), 0..4),
            off in prop::collection::btree_map(
                (arb_exponent(arity), arb_exponent(arity)),
                (-20i64..20, -20i64..20, 1i64..6),
                0..3,
            ),
            arity in Just(arity),
        ) -> HermPoly {
            let mut items = Vec::new();
            for (e, c) in diag {
                items.push((e.clone(), e, ComplexScalar::real(c)));
            }
            for ((a, b), (re, im, q)) in off {
                if a == b {
                    continue;
                }
                let c = ComplexScalar::new(
                    Scalar::from_rat(rat(re, q)),
                    Scalar::from_rat(rat(im, q)),
                );
                items.push((a.clone(), b.clone(), c.clone()));
                items.push((b, a, c.conj()));
            }
            HermPoly::from_terms(arity, items).unwrap()
        }
    }

    proptest! {
        #[test]
        fn printing_and_reparsing_is_the_identity(p in arb_hermitian()) {
            let printed = p.to_string();
            let reparsed = parse_hermitian(&printed).unwrap();
            prop_assert!(reparsed.arity() <= p.arity());
            prop_assert_eq!(&p, &reparsed.widen(p.arity()).unwrap());
        }

        #[test]
        fn parsed_rational_constants_are_exact(n in -3000i64..3000, d in 1i64..120) {
            let text = if n < 0 {
                format!("-{}/{d}", -n)
            } else {
                format!("{n}/{d}")
            };
            let p = herm(&text);
            prop_assert_eq!(p, HermPoly::constant(0, Scalar::from_rat(rat(n, d))));
        }
    }

    #[test]
    fn moment_lift_reads_x_as_squared_modulus() {
        assert_eq!(
            parse_hermitian("x1*x2").unwrap(),
            herm("|z1|^2*|z2|^2")
        );
    }

    #[test]
    fn integer_literals_accept_many_digits() {
        assert_eq!(
            herm("123456789123456789"),
            HermPoly::constant(0, Scalar::from_rat("123456789123456789".parse().unwrap()))
        );
    }

    #[test]
    fn rat_int_helper_matches_integer_parsing() {
        assert_eq!(
            herm("41"),
            HermPoly::constant(0, Scalar::from_rat(rat_int(41)))
        );
    }
}
