//! Elimination of the `(n, k) = (12, 4)` system down to a quadratic in `S6`.
//!
//! With `S1 = 0`, the `i`-th equation reads `E_i = f_i(S_2, ..., S_12)`, where
//! `f_i` is [`e_expansion`]`(i, 4, 12, true)`. Equations 2..5 are solved for
//! `S_2..S_5` in terms of the `E`'s; equation 6 does not contain `S6` at all;
//! equations 7..12 are each linear in their own `S_p` and are solved for
//! `S_7..S_12` as polynomials in `S6` and the `E`'s. Substituting those
//! tables into equation 14 leaves a quadratic in `S6`; equation 13 becomes
//! linear in `S6`.
//!
//! All symbolic work happens once per process and is cached.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{checked_div, Family, Monomial, Rational, SparsePolynomial, VarId};
use crate::error::{Error, Result};
use crate::multiset::PowerSumVector;
use crate::report::CoefficientCheck;
use crate::symfunc::e_expansion;

const N: u32 = 12;
const K: u32 = 4;
const LOW: [u32; 4] = [2, 3, 4, 5];
const HIGH: [u32; 6] = [7, 8, 9, 10, 11, 12];

/// Equations whose residuals certify a second solution.
pub const RESIDUAL_EQUATIONS: [u32; 13] = [13, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26];

/// Expected `S6^2` and `S6` coefficients of the 14th equation.
pub const EXPECTED_C2: &str = "73458/5465*E2";
pub const EXPECTED_C1: &str = "22556178701/5315943600*E3*E5 - 889/12*E8 - 15211/13392*E4^2 \
    + 4783550233/119441640960*E2^2*E4 - 9881683541849/418343497545600*E2*E3^2 \
    - 72629302403/477766563840000*E2^4";

/// Closed form of the second root of the 14th equation, split as
/// `polynomial part + (part over S2) / S2`.
const SECOND_ROOT_POLY: &str = "-556877605/796368672*S2^3 + 562115611087/46487926782*S3^2 \
    + 762093077/66364056*S2*S4 - 1990577/47223*S6";
const SECOND_ROOT_OVER_S2: &str = "-4217456129563/116219816955*S3*S5 - 14623247/1301256*S4^2 \
    + 2359787/31482*S8";

/// `S7` forced by a vanishing `S6` coefficient in the 13th equation.
pub const S7_CONDITION: &str = "-1494661249487/4501080325368*S2^2*S3 + 217002961/417230286*S2*S5 \
    + 3678199/2599908*S3*S4";

fn s(i: u32) -> VarId {
    VarId::s(i)
}

fn e(i: u32) -> VarId {
    VarId::e(i)
}

fn parse(text: &str) -> SparsePolynomial {
    text.parse().expect("embedded polynomial constant")
}

/// The `i`-th equation's right-hand side with `S1 = 0`, reduced to `S_2..S_12`.
pub fn equation(i: u32) -> Result<SparsePolynomial> {
    e_expansion(i, K, N, true)
}

/// Solutions of equations 2..5 and 7..12 for their pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTables {
    low: BTreeMap<u32, SparsePolynomial>,
    high: BTreeMap<u32, SparsePolynomial>,
    assumes_s1_zero: bool,
}

impl EliminationTables {
    /// `S_p` for `p` in 2..=5, as a polynomial in the `E`'s.
    pub fn low(&self, p: u32) -> Option<&SparsePolynomial> {
        self.low.get(&p)
    }

    /// `S_p` for `p` in 7..=12, as a polynomial in `S6` and the `E`'s.
    pub fn high(&self, p: u32) -> Option<&SparsePolynomial> {
        self.high.get(&p)
    }

    pub fn assumes_s1_zero(&self) -> bool {
        self.assumes_s1_zero
    }

    /// Bindings `S1 -> 0`, `S_p -> table entry` for every tabulated `p`.
    pub fn bindings(&self) -> HashMap<VarId, SparsePolynomial> {
        let mut out: HashMap<VarId, SparsePolynomial> = self
            .low
            .iter()
            .chain(&self.high)
            .map(|(&p, poly)| (s(p), poly.clone()))
            .collect();
        out.insert(s(1), SparsePolynomial::zero());
        out
    }

    /// Evaluates the tables at concrete `E` values and a chosen `S6`,
    /// returning `S_1..S_12`.
    pub fn power_sums_at(&self, e_values: &HashMap<VarId, Rational>, s6: &Rational) -> Result<PowerSumVector> {
        let mut values = e_values.clone();
        values.insert(s(6), s6.clone());
        let mut out = vec![Rational::zero(); N as usize];
        out[5] = s6.clone();
        for (&p, poly) in self.low.iter().chain(&self.high) {
            out[p as usize - 1] = poly.eval(&values)?;
        }
        Ok(PowerSumVector::new(out))
    }
}

/// Solves `E_p = eq` for `S_p` after substituting `bindings`.
fn solve_pivot(
    eq: &SparsePolynomial,
    p: u32,
    bindings: &HashMap<VarId, SparsePolynomial>,
) -> Result<SparsePolynomial> {
    let substituted = eq.substitute(bindings);
    let pivot = s(p);
    if substituted.degree_in(pivot) != 1 {
        return Err(Error::NonLinearPivot(p));
    }
    let lead = substituted
        .coefficient_in(pivot, 1)
        .as_constant()
        .ok_or(Error::NonLinearPivot(p))?;
    let rest = substituted.coefficient_in(pivot, 0);
    let numerator = &SparsePolynomial::var(e(p)) - &rest;
    Ok(numerator.scale(&checked_div(&Rational::from_integer(BigInt::from(1)), &lead)?))
}

pub fn build_elimination_tables() -> Result<EliminationTables> {
    let mut bindings: HashMap<VarId, SparsePolynomial> = HashMap::new();
    bindings.insert(s(1), SparsePolynomial::zero());
    let mut low = BTreeMap::new();
    for p in LOW {
        let solved = solve_pivot(&equation(p)?, p, &bindings)?;
        bindings.insert(s(p), solved.clone());
        low.insert(p, solved);
    }
    let mut high = BTreeMap::new();
    for p in HIGH {
        let solved = solve_pivot(&equation(p)?, p, &bindings)?;
        bindings.insert(s(p), solved.clone());
        high.insert(p, solved);
    }
    Ok(EliminationTables { low, high, assumes_s1_zero: true })
}

static TABLES: OnceLock<EliminationTables> = OnceLock::new();

/// Process-wide cached [`build_elimination_tables`].
pub fn elimination_tables() -> Result<&'static EliminationTables> {
    if let Some(t) = TABLES.get() {
        return Ok(t);
    }
    let built = build_elimination_tables()?;
    Ok(TABLES.get_or_init(|| built))
}

static REDUCED: OnceLock<Mutex<HashMap<u32, SparsePolynomial>>> = OnceLock::new();

/// The `i`-th right-hand side with every tabulated `S_p` eliminated: a
/// polynomial in `S6` and the `E`'s.
pub fn eliminated_equation(i: u32) -> Result<SparsePolynomial> {
    let memo = REDUCED.get_or_init(Default::default);
    if let Some(hit) = memo.lock().unwrap().get(&i) {
        return Ok(hit.clone());
    }
    let tables = elimination_tables()?;
    let value = equation(i)?.substitute(&tables.bindings());
    memo.lock().unwrap().insert(i, value.clone());
    Ok(value)
}

/// `c2 S6^2 + c1 S6 + c0 - E14 = 0`, coefficients polynomial in the `E`'s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticInS6 {
    pub c2: SparsePolynomial,
    pub c1: SparsePolynomial,
    pub c0: SparsePolynomial,
}

impl QuadraticInS6 {
    /// Specializes the coefficients at concrete `E` values (`E14` included).
    pub fn at(&self, e_values: &HashMap<VarId, Rational>) -> Result<NumericQuadratic> {
        let e14 = e_values.get(&e(14)).ok_or(Error::UnboundVariable(e(14)))?;
        Ok(NumericQuadratic {
            a: self.c2.eval(e_values)?,
            b: self.c1.eval(e_values)?,
            c: self.c0.eval(e_values)? - e14,
        })
    }

    /// `c2` and `c1` checked term by term against the expected constants.
    pub fn verify_coefficients(&self) -> Vec<CoefficientCheck> {
        let mut checks = Vec::new();
        for (degree, got, expected) in [(2, &self.c2, EXPECTED_C2), (1, &self.c1, EXPECTED_C1)] {
            let expected = parse(expected);
            let lift = Monomial::pow(s(6), degree);
            let mut seen: Vec<&Monomial> = Vec::new();
            for (m, c) in expected.terms() {
                checks.push(CoefficientCheck {
                    monomial: m.mul(&lift),
                    got: got.coefficient(m),
                    expected: c.clone(),
                });
                seen.push(m);
            }
            for (m, c) in got.terms() {
                if !seen.contains(&m) {
                    checks.push(CoefficientCheck {
                        monomial: m.mul(&lift),
                        got: c.clone(),
                        expected: Rational::zero(),
                    });
                }
            }
        }
        checks
    }
}

/// `a x^2 + b x + c` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericQuadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl NumericQuadratic {
    pub fn eval(&self, x: &Rational) -> Rational {
        (&self.a * x + &self.b) * x + &self.c
    }

    pub fn discriminant(&self) -> Rational {
        &self.b * &self.b - Rational::from_integer(BigInt::from(4)) * &self.a * &self.c
    }

    /// Distinct rational roots in ascending order, or `None` when the
    /// discriminant is not the square of a rational. A degenerate (linear)
    /// quadratic yields its single root.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.a.is_zero() {
            if self.b.is_zero() {
                return None;
            }
            return Some(vec![-&self.c / &self.b]);
        }
        let disc = self.discriminant();
        if disc.is_negative() {
            return Some(Vec::new());
        }
        let root = rational_sqrt(&disc)?;
        let two_a = &self.a * Rational::from_integer(BigInt::from(2));
        let mut roots = vec![(-&self.b - &root) / &two_a, (-&self.b + &root) / &two_a];
        roots.sort();
        roots.dedup();
        Some(roots)
    }
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let (num, den) = (x.numer(), x.denom());
    let (rn, rd) = (num.sqrt(), den.sqrt());
    (&rn * &rn == *num && &rd * &rd == *den).then(|| Rational::new(rn, rd))
}

static QUADRATIC: OnceLock<QuadraticInS6> = OnceLock::new();

/// Equation 14 after elimination, as a quadratic in `S6`.
pub fn fourteenth_quadratic() -> Result<&'static QuadraticInS6> {
    if let Some(q) = QUADRATIC.get() {
        return Ok(q);
    }
    let eq = eliminated_equation(14)?;
    let s6 = s(6);
    if eq.degree_in(s6) > 2 {
        return Err(Error::BadRange(format!(
            "equation 14 has degree {} in S6",
            eq.degree_in(s6)
        )));
    }
    let built = QuadraticInS6 {
        c2: eq.coefficient_in(s6, 2),
        c1: eq.coefficient_in(s6, 1),
        c0: eq.coefficient_in(s6, 0),
    };
    Ok(QUADRATIC.get_or_init(|| built))
}

/// `E_1..E_pmax` implied by power sums `S_1..S_12` (with `S1 = 0`).
pub fn implied_e_values(s_values: &PowerSumVector, pmax: u32) -> Result<HashMap<VarId, Rational>> {
    let bindings = s_values.bindings(Family::S);
    (1..=pmax)
        .map(|i| Ok((e(i), equation(i)?.eval(&bindings)?)))
        .collect()
}

fn require_centred(sv: &PowerSumVector, needed: usize) -> Result<()> {
    if sv.len() < needed {
        return Err(Error::BadRange(format!(
            "need power sums up to S{needed}, got {}",
            sv.len()
        )));
    }
    if !sv.get(1).is_zero() {
        return Err(Error::NotCentred(sv.get(1).to_string()));
    }
    Ok(())
}

/// The other root `S6''` of the 14th equation, from its closed form in
/// `S_2..S_8` of the first set.
pub fn second_root(sv: &PowerSumVector) -> Result<Rational> {
    require_centred(sv, 8)?;
    let values = sv.bindings(Family::S);
    let whole = parse(SECOND_ROOT_POLY).eval(&values)?;
    let fraction = checked_div(&parse(SECOND_ROOT_OVER_S2).eval(&values)?, sv.get(2))?;
    Ok(whole + fraction)
}

/// `S2 * S6''` derived from the generated quadratic via Vieta's formula
/// `S6'' = -c1/c2 - S6'`, with every `E` rewritten in the first set's power
/// sums. Polynomial in `S_2..S_8`.
pub fn second_root_numerator() -> Result<SparsePolynomial> {
    let q = fourteenth_quadratic()?;
    let lead = q
        .c2
        .coefficient_in(e(2), 1)
        .as_constant()
        .filter(|_| q.c2.len() == 1)
        .ok_or_else(|| Error::BadRange("c2 is not a multiple of E2".into()))?;
    let to_s = e_to_s_bindings(8)?;
    // c2 = lead * E2 = lead * 120 * S2, so S2 * (-c1/c2) = -c1 / (120 lead).
    let e2_per_s2 = equation(2)?.coefficient(&Monomial::var(s(2)));
    let scale = -(Rational::from_integer(BigInt::from(1)) / (lead * e2_per_s2));
    let c1 = q.c1.substitute(&to_s);
    Ok(&c1.scale(&scale) - &(&SparsePolynomial::var(s(2)) * &SparsePolynomial::var(s(6))))
}

/// The displayed closed form multiplied through by `S2`.
pub fn second_root_numerator_expected() -> SparsePolynomial {
    &parse(SECOND_ROOT_POLY) * &SparsePolynomial::var(s(2)) + parse(SECOND_ROOT_OVER_S2)
}

fn e_to_s_bindings(pmax: u32) -> Result<HashMap<VarId, SparsePolynomial>> {
    (1..=pmax).map(|i| Ok((e(i), equation(i)?))).collect()
}

/// Predicted `S7` under the two-root condition on the 13th equation.
pub fn s7_linear_condition(sv: &PowerSumVector) -> Result<Rational> {
    require_centred(sv, 5)?;
    parse(S7_CONDITION).eval(&sv.bindings(Family::S))
}

/// `S7` solved from "coefficient of `S6` in the eliminated 13th equation is
/// zero", with the `E`'s rewritten in the first set's power sums.
pub fn s7_condition_polynomial() -> Result<SparsePolynomial> {
    let eq = eliminated_equation(13)?;
    let s6 = s(6);
    if eq.degree_in(s6) != 1 {
        return Err(Error::BadRange(format!(
            "equation 13 has degree {} in S6",
            eq.degree_in(s6)
        )));
    }
    let slope = eq.coefficient_in(s6, 1).substitute(&e_to_s_bindings(7)?);
    let s7 = s(7);
    if slope.degree_in(s7) != 1 {
        return Err(Error::NonLinearPivot(7));
    }
    let lead = slope
        .coefficient_in(s7, 1)
        .as_constant()
        .ok_or(Error::NonLinearPivot(7))?;
    let rest = slope.coefficient_in(s7, 0);
    Ok(rest.scale(&-(Rational::from_integer(BigInt::from(1)) / lead)))
}

/// The displayed `S7` condition as a polynomial.
pub fn s7_condition_expected() -> SparsePolynomial {
    parse(S7_CONDITION)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub equation: u32,
    pub value: Rational,
}

/// Residuals of equations 13 and 15..=`pmax` when the second root
/// `S6''` and the elimination tables stand in for the unknown second set.
///
/// All zero iff the power sums `sv` (`S1 = 0`, `S_2..S_12`) admit a
/// consistent second solution at this level of the system.
pub fn residual_relations(sv: &PowerSumVector, pmax: u32) -> Result<Vec<Residual>> {
    require_centred(sv, N as usize)?;
    let s6_second = second_root(sv)?;
    let first: Vec<Rational> = sv.values()[..N as usize].to_vec();
    let first = PowerSumVector::new(first);
    let e_values = implied_e_values(&first, pmax.max(12))?;
    let tables = elimination_tables()?;
    let second = tables.power_sums_at(&e_values, &s6_second)?;
    let second_bindings = second.bindings(Family::S);
    RESIDUAL_EQUATIONS
        .iter()
        .copied()
        .filter(|&i| i <= pmax)
        .map(|i| {
            let value = equation(i)?.eval(&second_bindings)? - &e_values[&e(i)];
            Ok(Residual { equation: i, value })
        })
        .collect()
}
