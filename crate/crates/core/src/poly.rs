//! Exact arithmetic for Laurent polynomials in `A` over the integers and for
//! arrow polynomials, whose Laurent coefficients are attached to monomials in
//! the loop variables `K_n`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Laurent polynomial in `A` with arbitrary-precision integer coefficients.
///
/// Zero coefficients are never stored, so two polynomials are mathematically
/// equal iff their representations are identical.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * A^exp`.
    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `A^exp`.
    pub fn a(exp: i64) -> Self {
        Self::monomial(exp, 1)
    }

    /// The loop value `d = -A^2 - A^-2`.
    pub fn d() -> Self {
        Self::from_terms(&[(2, -1), (-2, -1)])
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(exp, c) in terms {
            p.add_term(exp, &BigInt::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn add_term(&mut self, exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Highest minus lowest `A`-exponent; `None` for the zero polynomial.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    /// Substitutes `A = 1`, collapsing the polynomial to an integer.
    pub fn eval_a_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (exp, c) in &rhs.coeffs {
            out.add_term(*exp, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }
}

/// Writes one signed term, preceded by a separator when not leading.
fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    negative: bool,
    body: &str,
) -> fmt::Result {
    match (first, negative) {
        (true, false) => write!(f, "{body}"),
        (true, true) => write!(f, "-{body}"),
        (false, false) => write!(f, " + {body}"),
        (false, true) => write!(f, " - {body}"),
    }
}

/// `c * A^exp` without sign, e.g. `A^4`, `2`, `3*A^-2`.
fn term_body(exp: i64, c: &BigInt) -> String {
    let mag = c.magnitude();
    match (exp, mag.is_one()) {
        (0, _) => format!("{mag}"),
        (1, true) => "A".to_string(),
        (_, true) => format!("A^{exp}"),
        (1, false) => format!("{mag}*A"),
        (_, false) => format!("{mag}*A^{exp}"),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (exp, c)) in self.coeffs.iter().rev().enumerate() {
            write_signed_term(f, idx == 0, c.is_negative(), &term_body(*exp, c))?;
        }
        Ok(())
    }
}

/// Monomial in the loop variables: a finite map `n -> power` representing
/// the product of `K_n^power`. The empty map is the monomial 1.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ArrowMonomial {
    exps: BTreeMap<u32, u32>,
}

impl ArrowMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `K_n`. Requires `n >= 1`.
    pub fn k(n: u32) -> Self {
        Self::k_pow(n, 1)
    }

    /// `K_n^p`.
    pub fn k_pow(n: u32, p: u32) -> Self {
        assert!(n >= 1, "K variables are indexed from 1");
        let mut exps = BTreeMap::new();
        if p > 0 {
            exps.insert(n, p);
        }
        Self { exps }
    }

    /// Product over a state's nonzero arrow numbers.
    pub fn from_arrow_numbers(numbers: impl IntoIterator<Item = u32>) -> Self {
        let mut exps: BTreeMap<u32, u32> = BTreeMap::new();
        for n in numbers {
            if n > 0 {
                *exps.entry(n).or_default() += 1;
            }
        }
        Self { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn powers(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps.iter().map(|(&n, &p)| (n, p))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (&n, &p) in &rhs.exps {
            *exps.entry(n).or_default() += p;
        }
        Self { exps }
    }
}

impl fmt::Display for ArrowMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (idx, (n, p)) in self.exps.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            if *p == 1 {
                write!(f, "K{n}")?;
            } else {
                write!(f, "K{n}^{p}")?;
            }
        }
        Ok(())
    }
}

/// Arrow polynomial: a finite sum of `ArrowMonomial` terms with `LaurentPoly`
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ArrowPolynomial {
    terms: BTreeMap<ArrowMonomial, LaurentPoly>,
}

impl ArrowPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    /// Embeds a Laurent polynomial as the coefficient of the monomial 1.
    pub fn from_laurent(p: LaurentPoly) -> Self {
        Self::term(ArrowMonomial::one(), p)
    }

    pub fn term(mon: ArrowMonomial, p: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(mon, &p);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mon: ArrowMonomial, p: &LaurentPoly) {
        use std::collections::btree_map::Entry;
        if p.is_zero() {
            return;
        }
        match self.terms.entry(mon) {
            Entry::Occupied(mut e) => {
                let sum = e.get() + p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(e) => {
                e.insert(p.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ArrowMonomial, &LaurentPoly)> {
        self.terms.iter()
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coeff(&self, mon: &ArrowMonomial) -> LaurentPoly {
        self.terms.get(mon).cloned().unwrap_or_default()
    }

    /// Substitutes `K_n = 1` for every `n`, leaving a Laurent polynomial.
    pub fn specialize_k_unity(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for p in self.terms.values() {
            out = &out + p;
        }
        out
    }

    /// Substitutes `A = 1`; the `K_n` variables survive with integer
    /// coefficients.
    pub fn specialize_a_one(&self) -> ArrowPolynomial {
        let mut out = Self::zero();
        for (mon, p) in &self.terms {
            out.add_term(mon.clone(), &LaurentPoly::monomial(0, p.eval_a_one()));
        }
        out
    }

    /// Max minus min `A`-exponent over all terms of all monomials; `None`
    /// for the zero polynomial.
    pub fn a_span(&self) -> Option<i64> {
        let max = self.terms.values().filter_map(LaurentPoly::max_exp).max()?;
        let min = self.terms.values().filter_map(LaurentPoly::min_exp).min()?;
        Some(max - min)
    }
}

impl Add for &ArrowPolynomial {
    type Output = ArrowPolynomial;
    fn add(self, rhs: &ArrowPolynomial) -> ArrowPolynomial {
        let mut out = self.clone();
        for (mon, p) in &rhs.terms {
            out.add_term(mon.clone(), p);
        }
        out
    }
}

impl Sub for &ArrowPolynomial {
    type Output = ArrowPolynomial;
    fn sub(self, rhs: &ArrowPolynomial) -> ArrowPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ArrowPolynomial {
    type Output = ArrowPolynomial;
    fn neg(self) -> ArrowPolynomial {
        ArrowPolynomial {
            terms: self.terms.iter().map(|(m, p)| (m.clone(), -p)).collect(),
        }
    }
}

impl Mul for &ArrowPolynomial {
    type Output = ArrowPolynomial;
    fn mul(self, rhs: &ArrowPolynomial) -> ArrowPolynomial {
        let mut out = ArrowPolynomial::zero();
        for (ma, pa) in &self.terms {
            for (mb, pb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(pa * pb));
            }
        }
        out
    }
}

impl fmt::Display for ArrowPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (mon, p)) in self.terms.iter().enumerate() {
            let first = idx == 0;
            if mon.is_one() {
                // The empty monomial sorts first; its coefficient renders as
                // a bare Laurent polynomial.
                write!(f, "{p}")?;
                continue;
            }
            if p.coeffs.len() == 1 {
                let (exp, c) = p.terms().next().expect("nonzero");
                let body = if exp == 0 && c.magnitude().is_one() {
                    format!("{mon}")
                } else {
                    format!("{}*{mon}", term_body(exp, c))
                };
                write_signed_term(f, first, c.is_negative(), &body)?;
            } else {
                // Multi-term coefficients are parenthesized, factoring out a
                // leading minus when every coefficient is negative.
                let neg = p.coeffs.values().all(Signed::is_negative);
                let inner = if neg { -p } else { p.clone() };
                write_signed_term(f, first, neg, &format!("({inner})*{mon}"))?;
            }
        }
        Ok(())
    }
}
