//! Number multisets, their k-sum multisets, and concrete power sums.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{bindings_from, parse_rational, rat, Family, Rational, VarId};
use crate::error::{Error, Result};

/// The multiset `A = {a_1, ..., a_n}`, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumberMultiset {
    elements: Vec<Rational>,
}

impl NumberMultiset {
    pub fn new(mut elements: Vec<Rational>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyMultiset);
        }
        elements.sort();
        Ok(NumberMultiset { elements })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        NumberMultiset::new(values.iter().map(|&v| rat(v)).collect())
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Applies `x -> scale * x + shift` to every element.
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> NumberMultiset {
        let mut elements: Vec<Rational> =
            self.elements.iter().map(|x| x * scale + shift).collect();
        elements.sort();
        NumberMultiset { elements }
    }

    pub fn negated(&self) -> NumberMultiset {
        self.affine(&rat(-1), &Rational::zero())
    }

    pub fn sum(&self) -> Rational {
        self.elements.iter().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.elements.iter().all(|x| x.is_integer())
    }

    /// Renders with the `x^m` multiplicity shorthand for repeated values.
    pub fn to_literal(&self) -> String {
        run_length(&self.elements)
    }

    /// Parses one multiset literal: whitespace or comma separated entries,
    /// each an integer or `p/q`, optionally followed by `^m` for `m` copies.
    /// Surrounding braces are ignored.
    pub fn parse_literal(text: &str) -> Result<Self> {
        let body = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut elements = Vec::new();
        for token in body.split(|c: char| c.is_whitespace() || c == ',') {
            if token.is_empty() {
                continue;
            }
            let (value, copies) = match token.split_once('^') {
                None => (token, 1usize),
                Some((v, m)) => {
                    let m = m
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {token:?}")))?;
                    (v, m)
                }
            };
            let x = parse_rational(value)?;
            elements.extend(std::iter::repeat_n(x, copies));
        }
        NumberMultiset::new(elements)
    }
}

impl FromStr for NumberMultiset {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        NumberMultiset::parse_literal(text)
    }
}

impl fmt::Display for NumberMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

fn run_length(values: &[Rational]) -> String {
    values
        .iter()
        .chunk_by(|x| *x)
        .into_iter()
        .map(|(x, run)| match run.count() {
            1 => x.to_string(),
            m => format!("{x}^{m}"),
        })
        .join(" ")
}

/// The multiset `A^(k)` of all `C(n, k)` sums over index-distinct k-subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumMultiset {
    sums: Vec<Rational>,
    source_n: usize,
    source_k: usize,
}

impl SumMultiset {
    pub fn sums(&self) -> &[Rational] {
        &self.sums
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn source_k(&self) -> usize {
        self.source_k
    }

    /// Run-length rendering such as `-1^120 0^255 1^120`.
    pub fn to_literal(&self) -> String {
        run_length(&self.sums)
    }

    /// First position where the two sorted lists disagree.
    pub fn first_difference<'a>(&'a self, other: &'a SumMultiset) -> Option<(usize, Option<&'a Rational>, Option<&'a Rational>)> {
        let longest = self.sums.len().max(other.sums.len());
        (0..longest).find_map(|i| {
            let (a, b) = (self.sums.get(i), other.sums.get(i));
            (a != b).then_some((i, a, b))
        })
    }
}

/// `S_1..S_m` (or `E_1..E_m`) stored 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumVector {
    values: Vec<Rational>,
}

impl PowerSumVector {
    pub fn new(values: Vec<Rational>) -> Self {
        PowerSumVector { values }
    }

    /// Entry `p` (1-based). Panics when `p` is 0 or beyond the stored length.
    pub fn get(&self, p: usize) -> &Rational {
        assert!(p >= 1, "power sums are indexed from 1");
        &self.values[p - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value map binding `S_p` (or `E_p`) to entry `p`.
    pub fn bindings(&self, family: Family) -> std::collections::HashMap<VarId, Rational> {
        bindings_from(family, &self.values)
    }
}

/// All sums of `k` elements taken at distinct indices, sorted ascending.
pub fn ksums(a: &NumberMultiset, k: usize) -> Result<SumMultiset> {
    let n = a.len();
    if k == 0 || k > n {
        return Err(Error::BadK { k, n });
    }
    let mut sums: Vec<Rational> = if a.is_integral() {
        integral_ksums(a, k)
    } else {
        a.elements
            .iter()
            .combinations(k)
            .map(|c| c.into_iter().sum())
            .collect()
    };
    sums.sort();
    Ok(SumMultiset { sums, source_n: n, source_k: k })
}

fn integral_ksums(a: &NumberMultiset, k: usize) -> Vec<Rational> {
    let ints: Vec<BigInt> = a.elements.iter().map(|x| x.to_integer()).collect();
    ints.iter()
        .combinations(k)
        .map(|c| Rational::from_integer(c.into_iter().sum()))
        .collect()
}

pub fn multiset_equal(x: &SumMultiset, y: &SumMultiset) -> bool {
    x.sums == y.sums
}

/// `S_p = sum_i a_i^p`; `p = 0` gives `n`.
pub fn power_sum(a: &NumberMultiset, p: u32) -> Rational {
    a.elements
        .iter()
        .map(|x| num_traits::pow(x.clone(), p as usize))
        .sum()
}

/// `S_1..S_m` of `a`.
pub fn power_sum_vector(a: &NumberMultiset, m: usize) -> PowerSumVector {
    assert!(m >= 1, "need at least one power sum");
    let mut values = vec![Rational::zero(); m];
    for x in &a.elements {
        let mut power = Rational::one();
        for slot in values.iter_mut() {
            power *= x;
            *slot += &power;
        }
    }
    PowerSumVector::new(values)
}

/// Result of [`normalize_affine`]: `normalized = scale * (a + shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineNormalization {
    pub normalized: NumberMultiset,
    pub shift: Rational,
    pub scale: Rational,
}

/// Canonical representative of the affine orbit of `a`.
///
/// Shifts so that `S_1 = 0`, scales by the positive rational that makes the
/// entries coprime integers, and finally reflects (`scale < 0`) when the
/// negated list sorts lexicographically smaller.
pub fn normalize_affine(a: &NumberMultiset) -> AffineNormalization {
    let n = rat(a.len() as i64);
    let shift = -(a.sum() / n);
    let centred: Vec<Rational> = a.elements.iter().map(|x| x + &shift).collect();

    let scale = integralizing_scale(&centred);
    let candidate = NumberMultiset {
        elements: centred.iter().map(|x| x * &scale).collect(),
    };
    let reflected = candidate.negated();
    if reflected < candidate {
        AffineNormalization { normalized: reflected, shift, scale: -scale }
    } else {
        AffineNormalization { normalized: candidate, shift, scale }
    }
}

/// Smallest positive rational turning every value into an integer with
/// collective gcd 1. Returns 1 when all values are zero.
pub(crate) fn integralizing_scale(values: &[Rational]) -> Rational {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let gcd = values
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
    if gcd.is_zero() {
        Rational::one()
    } else {
        Rational::new(lcm, gcd.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use proptest::prelude::*;

    fn set(values: &[i64]) -> NumberMultiset {
        NumberMultiset::from_integers(values).unwrap()
    }

    fn example_one() -> NumberMultiset {
        "-1 0^10 1".parse().unwrap()
    }

    #[test]
    fn ksums_small_cases() {
        assert_eq!(ksums(&set(&[1, 2, 3]), 3).unwrap().sums(), &[rat(6)]);
        assert_eq!(
            ksums(&set(&[1, 2, 3]), 2).unwrap().sums(),
            &[rat(3), rat(4), rat(5)]
        );
        assert!(matches!(ksums(&set(&[1, 2, 3]), 4), Err(Error::BadK { k: 4, n: 3 })));
        assert!(matches!(ksums(&set(&[1, 2, 3]), 0), Err(Error::BadK { .. })));
    }

    #[test]
    fn example_one_four_sums() {
        let sums = ksums(&example_one(), 4).unwrap();
        assert_eq!(sums.len(), 495);
        assert_eq!(sums.to_literal(), "-1^120 0^255 1^120");
    }

    #[test]
    fn equality_of_sum_multisets() {
        let x = ksums(&set(&[0, 1, 2]), 2).unwrap();
        let y = ksums(&set(&[0, 1, 3]), 2).unwrap();
        assert!(!multiset_equal(&x, &y));
        assert!(multiset_equal(&x, &x));
        assert_eq!(x.first_difference(&y).unwrap().0, 1);
    }

    #[test]
    fn power_sums() {
        let a1 = set(&[0, 0, 1, -1, 2, -2, 4, -4, 7, -7, 7, -7]);
        assert_eq!(power_sum(&a1, 0), rat(12));
        assert_eq!(power_sum(&a1, 1), rat(0));
        assert_eq!(power_sum(&a1, 2), rat(238));
        let v = power_sum_vector(&example_one(), 8);
        let expected: Vec<Rational> = [0, 2, 0, 2, 0, 2, 0, 2].iter().map(|&x| rat(x)).collect();
        assert_eq!(v.values(), &expected[..]);
        assert_eq!(power_sum_vector(&set(&[0]), 3).values(), &[rat(0), rat(0), rat(0)]);
        let odd = power_sum_vector(&a1, 12);
        assert!((1..=12).step_by(2).all(|p| odd.get(p).is_zero()));
    }

    #[test]
    fn normalization_examples() {
        let r = normalize_affine(&set(&[1, 2, 3]));
        assert_eq!(r.normalized, set(&[-1, 0, 1]));
        assert_eq!((r.shift, r.scale), (rat(-2), rat(1)));

        let r = normalize_affine(&set(&[2, 4, 6]));
        assert_eq!(r.normalized, set(&[-1, 0, 1]));
        assert_eq!((r.shift, r.scale), (rat(-4), ratio(1, 2)));

        let r = normalize_affine(&set(&[0, 0, 0]));
        assert_eq!(r.normalized, set(&[0, 0, 0]));
        assert_eq!((r.shift, r.scale), (rat(0), rat(1)));
    }

    #[test]
    fn normalization_reflects_to_the_smaller_side() {
        // {0,1,3} centres to {-4/3,-1/3,5/3} -> {-4,-1,5}; reflected {-5,1,4} is smaller.
        let r = normalize_affine(&set(&[0, 1, 3]));
        assert_eq!(r.normalized, set(&[-5, 1, 4]));
        assert_eq!(r.scale, rat(-3));
        let back = set(&[0, 1, 3]).affine(&r.scale, &(&r.scale * &r.shift));
        assert_eq!(back, r.normalized);
    }

    #[test]
    fn literal_parsing() {
        let a: NumberMultiset = "{1, 2/4, 0^3}".parse().unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a.to_literal(), "0^3 1/2 1");
        assert!(matches!("".parse::<NumberMultiset>(), Err(Error::EmptyMultiset)));
        assert!("1 x".parse::<NumberMultiset>().is_err());
        assert!("1^a".parse::<NumberMultiset>().is_err());
    }

    fn small_set(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-9i64..=9, 1..=max_len)
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    proptest! {
        #[test]
        fn ksum_count_is_binomial(values in small_set(9), k_seed in 0usize..100) {
            let a = set(&values);
            let k = 1 + k_seed % a.len();
            prop_assert_eq!(ksums(&a, k).unwrap().len(), binomial(a.len(), k));
        }

        #[test]
        fn complement_identity(values in small_set(8), k_seed in 0usize..100) {
            let a = set(&values);
            let n = a.len();
            prop_assume!(n >= 2);
            let k = 1 + k_seed % (n - 1);
            let total = a.sum();
            let mut mirrored: Vec<Rational> =
                ksums(&a, k).unwrap().sums().iter().map(|s| &total - s).collect();
            mirrored.sort();
            let complement = ksums(&a, n - k).unwrap();
            prop_assert_eq!(complement.sums(), &mirrored[..]);
        }

        #[test]
        fn affine_equivariance(
            values in small_set(7),
            k_seed in 0usize..100,
            t in (-5i64..=5).prop_filter("nonzero", |t| *t != 0),
            t_den in 1i64..4,
            c in -6i64..=6,
        ) {
            let a = set(&values);
            let k = 1 + k_seed % a.len();
            let (t, c) = (ratio(t, t_den), ratio(c, 3));
            let moved = ksums(&a.affine(&t, &c), k).unwrap();
            let shift = &c * rat(k as i64);
            let mut expected: Vec<Rational> =
                ksums(&a, k).unwrap().sums().iter().map(|s| s * &t + &shift).collect();
            expected.sort();
            prop_assert_eq!(moved.sums(), &expected[..]);
        }

        #[test]
        fn normalization_is_an_orbit_invariant(
            values in small_set(7),
            t in (-5i64..=5).prop_filter("nonzero", |t| *t != 0),
            c in -6i64..=6,
        ) {
            let a = set(&values);
            let once = normalize_affine(&a).normalized;
            prop_assert_eq!(&normalize_affine(&once).normalized, &once);
            let moved = a.affine(&ratio(t, 2), &ratio(c, 5));
            prop_assert_eq!(normalize_affine(&moved).normalized, once);
        }

        #[test]
        fn literal_round_trip(values in small_set(12)) {
            let a = set(&values);
            prop_assert_eq!(a.to_literal().parse::<NumberMultiset>().unwrap(), a);
        }
    }
}
