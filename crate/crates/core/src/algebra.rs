//! Exact rationals and sparse multivariate polynomials.
//!
//! Polynomials live in two families of formal variables: `S1, S2, ...` (power
//! sums of the base multiset) and `E1, E2, ...` (power sums of its k-sum
//! multiset). Every coefficient is an exact [`Rational`]; there is no
//! floating point anywhere in this module.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic over the variable order (`S` before `E`, then by
//! index). Two equal polynomials therefore always have identical term maps,
//! and the text rendering is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact division that reports a zero divisor instead of panicking.
pub fn checked_div(num: &Rational, den: &Rational) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(num / den)
}

/// Parses `"12"`, `"-3"` or `"7/2"` into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        None => text.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((num, den)) => {
            let num = num.parse::<BigInt>().map_err(|_| bad())?;
            let den = den.parse::<BigInt>().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(num, den))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Power sums of the base multiset.
    S,
    /// Power sums of the k-sum multiset.
    E,
}

/// A formal variable such as `S6` or `E14`.
///
/// The derived order compares the family first (`S < E`) and then the index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub family: Family,
    pub index: u32,
}

impl VarId {
    pub fn new(family: Family, index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        VarId { family, index }
    }

    pub fn s(index: u32) -> Self {
        VarId::new(Family::S, index)
    }

    pub fn e(index: u32) -> Self {
        VarId::new(Family::E, index)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.family {
            Family::S => 'S',
            Family::E => 'E',
        };
        write!(f, "{letter}{}", self.index)
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a variable: {text:?}"));
        let mut chars = text.chars();
        let family = match chars.next() {
            Some('S') => Family::S,
            Some('E') => Family::E,
            _ => return Err(bad()),
        };
        let index: u32 = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(VarId { family, index })
    }
}

/// A product of variables with positive exponents, stored sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn pow(v: VarId, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    /// Builds a monomial from factors in any order; repeated variables are
    /// merged and zero exponents dropped.
    pub fn from_factors<I: IntoIterator<Item = (VarId, u32)>>(factors: I) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Weighted degree where `S_p` and `E_p` both carry weight `p`.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&(v, e)| v.index * e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// The monomial with every power of `v` removed.
    pub fn without(&self, v: VarId) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// smallest variable on which the two monomials differ.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, &(v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "1" {
            return Ok(Monomial::one());
        }
        let mut factors = Vec::new();
        for factor in text.split('*') {
            factors.push(parse_factor(factor.trim())?);
        }
        Ok(Monomial::from_factors(factors))
    }
}

fn parse_factor(text: &str) -> Result<(VarId, u32)> {
    match text.split_once('^') {
        None => Ok((text.parse()?, 1)),
        Some((v, e)) => {
            let exp = e
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?;
            Ok((v.parse()?, exp))
        }
    }
}

/// Exact multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        SparsePolynomial::default()
    }

    pub fn one() -> Self {
        SparsePolynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        SparsePolynomial::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        SparsePolynomial::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = SparsePolynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = SparsePolynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Returns the value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    /// Is every term of weighted degree `w`?
    pub fn is_weighted_homogeneous(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }

    /// The coefficient of `v^d`, as a polynomial in the remaining variables.
    pub fn coefficient_in(&self, v: VarId, d: u32) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == d)
                .map(|(m, c)| (m.without(v), c.clone())),
        )
    }

    pub fn scale(&self, c: &Rational) -> SparsePolynomial {
        if c.is_zero() {
            return SparsePolynomial::zero();
        }
        SparsePolynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> SparsePolynomial {
        let mut acc = SparsePolynomial::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces each bound variable by its polynomial and re-expands.
    /// Unbound variables pass through unchanged.
    pub fn substitute(&self, bindings: &HashMap<VarId, SparsePolynomial>) -> SparsePolynomial {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(VarId, u32), SparsePolynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut free = Vec::new();
            let mut product = SparsePolynomial::one();
            for &(v, e) in m.factors() {
                match bindings.get(&v) {
                    None => free.push((v, e)),
                    Some(b) => {
                        let power = powers.entry((v, e)).or_insert_with(|| b.pow(e));
                        product = &product * power;
                    }
                }
            }
            let free = Monomial::from_factors(free);
            for (pm, pc) in product.terms {
                let entry = acc.entry(pm.mul(&free)).or_insert_with(Rational::zero);
                *entry += pc * c;
            }
        }
        SparsePolynomial::from_accumulator(acc)
    }

    /// Sets one variable to a constant.
    pub fn substitute_value(&self, v: VarId, value: &Rational) -> SparsePolynomial {
        let mut bindings = HashMap::new();
        bindings.insert(v, SparsePolynomial::constant(value.clone()));
        self.substitute(&bindings)
    }

    /// Evaluates exactly. Every variable must be bound.
    pub fn eval(&self, values: &HashMap<VarId, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = values.get(&v).ok_or(Error::UnboundVariable(v))?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    fn from_accumulator(acc: HashMap<Monomial, Rational>) -> SparsePolynomial {
        SparsePolynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Parses a polynomial term by term without merging, so that explicit
    /// zero coefficients such as `0*S6` survive.
    pub fn parse_terms(text: &str) -> Result<Vec<(Monomial, Rational)>> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if ch == '+' || ch == '-' {
                if i > 0 {
                    if current.is_empty() {
                        return Err(Error::Parse(format!("dangling sign in {text:?}")));
                    }
                    pieces.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {text:?}")));
        }
        pieces.push((negative, current));

        let mut terms = Vec::with_capacity(pieces.len());
        for (negative, body) in pieces {
            let mut coefficient = Rational::one();
            let mut factors = Vec::new();
            for (i, factor) in body.split('*').enumerate() {
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    if i > 0 {
                        return Err(Error::Parse(format!("coefficient must lead the term: {body:?}")));
                    }
                    coefficient = parse_rational(factor)?;
                } else {
                    factors.push(parse_factor(factor)?);
                }
            }
            if negative {
                coefficient = -coefficient;
            }
            terms.push((Monomial::from_factors(factors), coefficient));
        }
        Ok(terms)
    }
}

impl FromStr for SparsePolynomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Ok(SparsePolynomial::from_terms(SparsePolynomial::parse_terms(text)?))
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let magnitude = c.abs();
            if m.is_one() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add<&SparsePolynomial> for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SparsePolynomial {
    type Output = SparsePolynomial;

    fn add(mut self, rhs: SparsePolynomial) -> SparsePolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&SparsePolynomial> for SparsePolynomial {
    fn add_assign(&mut self, rhs: &SparsePolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn neg(self) -> SparsePolynomial {
        SparsePolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for SparsePolynomial {
    type Output = SparsePolynomial;

    fn neg(self) -> SparsePolynomial {
        -&self
    }
}

impl Sub<&SparsePolynomial> for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for SparsePolynomial {
    type Output = SparsePolynomial;

    fn sub(self, rhs: SparsePolynomial) -> SparsePolynomial {
        &self - &rhs
    }
}

impl Mul<&SparsePolynomial> for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return SparsePolynomial::zero();
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let entry = acc.entry(ma.mul(mb)).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        SparsePolynomial::from_accumulator(acc)
    }
}

impl Mul for SparsePolynomial {
    type Output = SparsePolynomial;

    fn mul(self, rhs: SparsePolynomial) -> SparsePolynomial {
        &self * &rhs
    }
}

/// Builds a value map for [`SparsePolynomial::eval`] from `(family, 1-based list)`.
pub fn bindings_from(family: Family, values: &[Rational]) -> HashMap<VarId, Rational> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| (VarId::new(family, i as u32 + 1), v.clone()))
        .collect()
}
