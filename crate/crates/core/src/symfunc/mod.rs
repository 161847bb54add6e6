//! Symbolic symmetric-function identities.
//!
//! Everything here produces polynomials in the formal power sums `S1, S2, ...`
//! that hold identically in the elements of the underlying multiset:
//!
//! * [`reduce_monomial`] rewrites a monomial power sum `S_{p1,...,pj}` (sum
//!   over ordered tuples of distinct indices) as a polynomial in single power
//!   sums by peeling off the last part.
//! * [`macmahon_reduce`] rewrites `S_m`, `m > n`, in terms of `S_1..S_n`
//!   using the vanishing of the elementary symmetric functions above degree
//!   `n`.
//! * [`e_expansion`] expresses `E_p`, the `p`-th power sum of the k-sum
//!   multiset, through the multinomial expansion of `(a_i1 + ... + a_ik)^p`.
//!
//! Each generator has a direct numeric counterpart ([`monomial_power_sum_direct`],
//! [`crate::multiset::power_sum`], [`e_power_sums`]) used as its test oracle.
//! Results are memoized process-wide.

pub mod fixture;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{rat, Monomial, Rational, SparsePolynomial, VarId};
use crate::error::{Error, Result};
use crate::multiset::{ksums, power_sum_vector, NumberMultiset, PowerSumVector};

/// Exponent list `(p_1, ..., p_j)` of a monomial power sum. Zero parts are
/// dropped on construction; the given order is otherwise kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: &[u32]) -> Self {
        Composition {
            parts: parts.iter().copied().filter(|&p| p > 0).collect(),
        }
    }

    /// Parts sorted descending.
    pub fn canonical(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Composition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// A partition of `m` stored as part size -> multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    multiplicities: BTreeMap<u32, u32>,
    weight: u32,
}

impl Partition {
    pub fn from_parts(parts: &[u32]) -> Self {
        let mut multiplicities = BTreeMap::new();
        for &p in parts.iter().filter(|&&p| p > 0) {
            *multiplicities.entry(p).or_insert(0) += 1;
        }
        Partition { multiplicities, weight: parts.iter().sum() }
    }

    /// Every partition of `m` with parts at most `max_part`, largest parts
    /// first, in reverse lexicographic order.
    pub fn all(m: u32, max_part: u32) -> Vec<Partition> {
        fn walk(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition::from_parts(prefix));
                return;
            }
            for part in (1..=max.min(rest)).rev() {
                prefix.push(part);
                walk(rest - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        walk(m, max_part, &mut Vec::new(), &mut out);
        out
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn multiplicities(&self) -> &BTreeMap<u32, u32> {
        &self.multiplicities
    }

    /// Number of parts, `sum p_i`.
    pub fn length(&self) -> u32 {
        self.multiplicities.values().sum()
    }

    /// Parts in descending order.
    pub fn parts(&self) -> Vec<u32> {
        self.multiplicities
            .iter()
            .rev()
            .flat_map(|(&part, &count)| std::iter::repeat_n(part, count as usize))
            .collect()
    }

    /// `prod_i S_i^{p_i}`.
    pub fn power_sum_monomial(&self) -> Monomial {
        Monomial::from_factors(self.multiplicities.iter().map(|(&i, &c)| (VarId::s(i), c)))
    }

    /// `1 / prod_i (i^{p_i} p_i!)`.
    pub fn inverse_centralizer(&self) -> Rational {
        let z = self
            .multiplicities
            .iter()
            .fold(BigInt::one(), |acc, (&i, &c)| {
                acc * num_traits::pow(BigInt::from(i), c as usize) * factorial(c)
            });
        Rational::new(BigInt::one(), z)
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn falling(n: usize, count: usize) -> BigInt {
    (0..count).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// `S_{p_1,...,p_j}(a)` summed directly over ordered tuples of distinct indices.
pub fn monomial_power_sum_direct(a: &NumberMultiset, c: &Composition) -> Result<Rational> {
    let n = a.len();
    let j = c.len();
    if j > n {
        return Err(Error::TooManyParts { parts: j, n });
    }
    let elements = a.elements();
    let mut total = Rational::zero();
    for tuple in (0..n).permutations(j) {
        let mut term = Rational::one();
        for (&index, &p) in tuple.iter().zip(c.parts()) {
            term *= num_traits::pow(elements[index].clone(), p as usize);
        }
        total += term;
    }
    Ok(total)
}

type Memo<K> = OnceLock<Mutex<HashMap<K, Arc<SparsePolynomial>>>>;

fn memo_get<K: std::hash::Hash + Eq>(memo: &Memo<K>, key: &K) -> Option<Arc<SparsePolynomial>> {
    memo.get_or_init(Default::default).lock().unwrap().get(key).cloned()
}

fn memo_put<K: std::hash::Hash + Eq>(memo: &Memo<K>, key: K, value: SparsePolynomial) -> Arc<SparsePolynomial> {
    let mut table = memo.get_or_init(Default::default).lock().unwrap();
    table.entry(key).or_insert_with(|| Arc::new(value)).clone()
}

static MONOMIAL_MEMO: Memo<Vec<u32>> = OnceLock::new();

/// Rewrites `S_{p_1,...,p_j}` as a polynomial in `S_1, S_2, ...` by
/// repeatedly applying
/// `S_{p1..pj} = S_{p1..p(j-1)} S_pj - sum_t S_{p1.., pt + pj, ..p(j-1)}`.
pub fn reduce_monomial(c: &Composition) -> SparsePolynomial {
    (*reduce_canonical(c.canonical().parts)).clone()
}

fn reduce_canonical(parts: Vec<u32>) -> Arc<SparsePolynomial> {
    if let Some(hit) = memo_get(&MONOMIAL_MEMO, &parts) {
        return hit;
    }
    let value = match parts.len() {
        0 => SparsePolynomial::one(),
        1 => SparsePolynomial::var(VarId::s(parts[0])),
        j => {
            let last = parts[j - 1];
            let prefix = parts[..j - 1].to_vec();
            let mut acc = &*reduce_canonical(prefix.clone()) * &SparsePolynomial::var(VarId::s(last));
            for t in 0..j - 1 {
                let mut merged = prefix.clone();
                merged[t] += last;
                merged.sort_unstable_by(|a, b| b.cmp(a));
                acc = &acc - &*reduce_canonical(merged);
            }
            acc
        }
    };
    memo_put(&MONOMIAL_MEMO, parts, value)
}

/// `e_i` written in power sums:
/// `sum over partitions of i of (-1)^(i - parts) prod S_j^{p_j} / (j^{p_j} p_j!)`.
pub fn elementary_in_power_sums(i: u32) -> SparsePolynomial {
    SparsePolynomial::from_terms(Partition::all(i, i).into_iter().map(|lambda| {
        let sign = if (i - lambda.length()).is_multiple_of(2) { rat(1) } else { rat(-1) };
        (lambda.power_sum_monomial(), sign * lambda.inverse_centralizer())
    }))
}

/// The partition-sum relation between `S_m` and lower power sums that holds
/// whenever the multiset has fewer than `m` elements:
///
/// `S_m / m = sum over partitions of m other than (m) of
///            (-1)^(number of parts) prod S_j^{p_j} / (j^{p_j} p_j!)`.
///
/// The right-hand side (times `m`) is returned unreduced, still containing
/// `S_j` for `j` between `n` and `m`.
pub fn macmahon_relation(m: u32) -> SparsePolynomial {
    let m_rat = rat(m as i64);
    SparsePolynomial::from_terms(
        Partition::all(m, m - 1).into_iter().map(|lambda| {
            let sign = if lambda.length() % 2 == 0 { rat(1) } else { rat(-1) };
            (lambda.power_sum_monomial(), sign * lambda.inverse_centralizer() * &m_rat)
        }),
    )
}

static MACMAHON_MEMO: OnceLock<Mutex<HashMap<u32, Vec<Arc<SparsePolynomial>>>>> = OnceLock::new();

/// `S_m` as a polynomial in `S_1..S_n`, valid for every `n`-element multiset.
///
/// Builds the reductions for weights `n+1, ..., m` in turn from Newton's
/// recurrence `S_w = sum_{i=1..n} (-1)^(i-1) e_i S_(w-i)`, substituting the
/// already reduced `S_(w-i)` whenever `w - i > n`.
pub fn macmahon_reduce(m: u32, n: u32) -> Result<SparsePolynomial> {
    if n == 0 || m <= n {
        return Err(Error::BadRange(format!(
            "reduction of S{m} needs m > n >= 1 (n = {n})"
        )));
    }
    Ok((*macmahon_cached(m, n)).clone())
}

fn macmahon_cached(m: u32, n: u32) -> Arc<SparsePolynomial> {
    let memo = MACMAHON_MEMO.get_or_init(Default::default);
    let mut table = memo.lock().unwrap();
    let chain = table.entry(n).or_default();
    let wanted = (m - n - 1) as usize;
    if chain.len() <= wanted {
        let elementary: Vec<SparsePolynomial> = (1..=n).map(elementary_in_power_sums).collect();
        while chain.len() <= wanted {
            let w = n + 1 + chain.len() as u32;
            let mut acc = SparsePolynomial::zero();
            for (i, e_i) in (1..=n).zip(&elementary) {
                let lower = w - i;
                let term = if lower <= n {
                    e_i * &SparsePolynomial::var(VarId::s(lower))
                } else {
                    e_i * &*chain[(lower - n - 1) as usize]
                };
                if i % 2 == 1 {
                    acc += &term;
                } else {
                    acc = &acc - &term;
                }
            }
            chain.push(Arc::new(acc));
        }
    }
    chain[wanted].clone()
}

/// Replaces every `S_m` with `m > n` by its reduction in `S_1..S_n`.
pub fn reduce_power_sums(p: &SparsePolynomial, n: u32) -> SparsePolynomial {
    let bindings: HashMap<VarId, SparsePolynomial> = p
        .variables()
        .into_iter()
        .filter(|v| v.family == crate::algebra::Family::S && v.index > n)
        .map(|v| (v, (*macmahon_cached(v.index, n)).clone()))
        .collect();
    p.substitute(&bindings)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct ExpansionKey {
    p: u32,
    k: u32,
    n: u32,
    s1_zero: bool,
    reduced: bool,
}

static EXPANSION_MEMO: Memo<ExpansionKey> = OnceLock::new();

fn check_expansion_args(p: u32, k: u32, n: u32) -> Result<()> {
    if p == 0 || k == 0 || k > n {
        return Err(Error::BadRange(format!(
            "E{p} expansion needs p >= 1 and 1 <= k <= n (k = {k}, n = {n})"
        )));
    }
    Ok(())
}

/// `E_p` in terms of `S_1..S_p`, before any reduction of `S_m` with `m > n`.
///
/// `k! E_p = sum over compositions p_1 + ... + p_k = p of
/// p!/(p_1!...p_k!) S_{p_1,...,p_k}`; a composition with `j` nonzero parts
/// contributes `(n-j)(n-j-1)...(n-k+1)` times the monomial power sum of its
/// nonzero parts.
pub fn e_expansion_unreduced(p: u32, k: u32, n: u32, set_s1_zero: bool) -> Result<SparsePolynomial> {
    check_expansion_args(p, k, n)?;
    let key = ExpansionKey { p, k, n, s1_zero: set_s1_zero, reduced: false };
    if let Some(hit) = memo_get(&EXPANSION_MEMO, &key) {
        return Ok((*hit).clone());
    }
    let k_fact = factorial(k);
    let p_fact = factorial(p);
    let mut acc = SparsePolynomial::zero();
    for lambda in Partition::all(p, p) {
        let j = lambda.length();
        if j > k {
            continue;
        }
        let placements = lambda
            .multiplicities()
            .values()
            .fold(factorial(k) / factorial(k - j), |acc, &c| acc / factorial(c));
        let multinomial = lambda
            .parts()
            .iter()
            .fold(p_fact.clone(), |acc, &part| acc / factorial(part));
        let free_slots = falling(n as usize - j as usize, (k - j) as usize);
        let coefficient = Rational::new(placements * multinomial * free_slots, k_fact.clone());
        let mut monomial = (*reduce_canonical(lambda.parts())).clone();
        if set_s1_zero {
            monomial = monomial.substitute_value(VarId::s(1), &Rational::zero());
        }
        acc += &monomial.scale(&coefficient);
    }
    Ok((*memo_put(&EXPANSION_MEMO, key, acc)).clone())
}

/// `E_p` as a polynomial in `S_1..S_n` (or `S_2..S_n` with `set_s1_zero`).
pub fn e_expansion(p: u32, k: u32, n: u32, set_s1_zero: bool) -> Result<SparsePolynomial> {
    check_expansion_args(p, k, n)?;
    let key = ExpansionKey { p, k, n, s1_zero: set_s1_zero, reduced: true };
    if let Some(hit) = memo_get(&EXPANSION_MEMO, &key) {
        return Ok((*hit).clone());
    }
    let raw = e_expansion_unreduced(p, k, n, set_s1_zero)?;
    let mut reduced = reduce_power_sums(&raw, n);
    if set_s1_zero {
        reduced = reduced.substitute_value(VarId::s(1), &Rational::zero());
    }
    Ok((*memo_put(&EXPANSION_MEMO, key, reduced)).clone())
}

/// `E_1..E_pmax` computed from the k-sum multiset itself.
pub fn e_power_sums(a: &NumberMultiset, k: usize, pmax: usize) -> Result<PowerSumVector> {
    let sums = ksums(a, k)?;
    let as_multiset = NumberMultiset::new(sums.sums().to_vec())?;
    Ok(power_sum_vector(&as_multiset, pmax))
}
