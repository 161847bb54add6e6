//! Identity fixture files: one `E<p> = <polynomial>` per line.
//!
//! The embedded reference file holds the hand-transcribed expansions for
//! `(n, k) = (12, 4)` with `S1 = 0`. [`render_identities`] writes generated
//! expansions in the same format so regenerated output can be diffed.

use std::collections::BTreeMap;
use std::path::Path;

use crate::algebra::{Monomial, Rational, SparsePolynomial};
use crate::error::{Error, Result};
use crate::report::CoefficientCheck;

use super::e_expansion_unreduced;

/// Reference expansions for `E_1..E_12` and `E_14`, `(n, k) = (12, 4)`, `S1 = 0`.
pub const REFERENCE_IDENTITIES: &str = include_str!("../../fixtures/reference_identities_n12_k4.txt");

/// Generated expansions for `E_1..E_26`, same specialization, unreduced.
pub const GENERATED_IDENTITIES: &str = include_str!("../../fixtures/e_identities_n12_k4_v1.txt");

/// Environment variable that points at a replacement reference file.
pub const FIXTURES_ENV: &str = "KSUMLAB_FIXTURES";

/// Expected terms of one identity, kept as written (explicit zeros included).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFixture {
    pub p: u32,
    pub terms: Vec<(Monomial, Rational)>,
}

/// Parses a fixture file; `#` starts a comment line.
pub fn parse_fixture_file(text: &str) -> Result<BTreeMap<u32, IdentityFixture>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("fixture line {}: {what}", lineno + 1));
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("missing '='"))?;
        let p: u32 = lhs
            .trim()
            .strip_prefix('E')
            .and_then(|i| i.parse().ok())
            .ok_or_else(|| bad("left side must be E<p>"))?;
        let terms = SparsePolynomial::parse_terms(rhs)?;
        if out.insert(p, IdentityFixture { p, terms }).is_some() {
            return Err(bad("duplicate identity"));
        }
    }
    Ok(out)
}

/// The reference fixtures, read from `$KSUMLAB_FIXTURES` when set.
pub fn load_reference_fixtures() -> Result<BTreeMap<u32, IdentityFixture>> {
    match std::env::var_os(FIXTURES_ENV) {
        Some(path) => load_fixture_path(Path::new(&path)),
        None => parse_fixture_file(REFERENCE_IDENTITIES),
    }
}

pub fn load_fixture_path(path: &Path) -> Result<BTreeMap<u32, IdentityFixture>> {
    parse_fixture_file(&std::fs::read_to_string(path)?)
}

/// Compares `generated` with a fixture coefficient by coefficient. Terms of
/// `generated` absent from the fixture are reported against an expected 0.
pub fn check_identity(generated: &SparsePolynomial, fixture: &IdentityFixture) -> Vec<CoefficientCheck> {
    let expected = SparsePolynomial::from_terms(fixture.terms.iter().cloned());
    let mut checks: Vec<CoefficientCheck> = fixture
        .terms
        .iter()
        .map(|(m, _)| CoefficientCheck {
            monomial: m.clone(),
            got: generated.coefficient(m),
            expected: expected.coefficient(m),
        })
        .collect();
    for (m, c) in generated.terms() {
        if !fixture.terms.iter().any(|(f, _)| f == m) {
            checks.push(CoefficientCheck {
                monomial: m.clone(),
                got: c.clone(),
                expected: expected.coefficient(m),
            });
        }
    }
    checks
}

/// Checks the generated `E_p` (`k = 4`, `n = 12`, `S1 = 0`, unreduced)
/// against the matching fixture entry.
pub fn check_against_fixtures(
    p: u32,
    fixtures: &BTreeMap<u32, IdentityFixture>,
) -> Result<Vec<CoefficientCheck>> {
    let fixture = fixtures
        .get(&p)
        .ok_or_else(|| Error::BadRange(format!("no reference identity for E{p}")))?;
    let generated = e_expansion_unreduced(p, 4, 12, true)?;
    Ok(check_identity(&generated, fixture))
}

/// Renders `E_1..E_pmax` in fixture format.
pub fn render_identities(k: u32, n: u32, pmax: u32) -> Result<String> {
    let mut out = format!(
        "# E_p for k = {k}, n = {n}, S1 = 0; S_m with m > n left unreduced.\n\
         # Generated by `ksumlab expand --all`; format v1.\n"
    );
    for p in 1..=pmax {
        let e = e_expansion_unreduced(p, k, n, true)?;
        out.push_str(&format!("E{p} = {e}\n"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_file_parses() {
        let fixtures = parse_fixture_file(REFERENCE_IDENTITIES).unwrap();
        let keys: Vec<u32> = fixtures.keys().copied().collect();
        assert_eq!(keys, vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14]);
        assert_eq!(fixtures[&14].terms.len(), 26);
        assert_eq!(fixtures[&6].terms.len(), 4);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(parse_fixture_file("E2 120*S2").is_err());
        assert!(parse_fixture_file("X2 = S2").is_err());
        assert!(parse_fixture_file("E2 = S2\nE2 = S2").is_err());
    }

    #[test]
    fn vanishing_s6_coefficient_is_reported() {
        let fixtures = parse_fixture_file(REFERENCE_IDENTITIES).unwrap();
        let checks = check_against_fixtures(6, &fixtures).unwrap();
        assert_eq!(checks[0].to_string(), "coef(S6) = 0 [expected 0] OK");
        assert!(checks.iter().all(CoefficientCheck::ok));
    }

    #[test]
    fn extra_generated_terms_fail_the_check() {
        let fixture = IdentityFixture { p: 2, terms: vec![("S2".parse().unwrap(), crate::algebra::rat(120))] };
        let generated: SparsePolynomial = "120*S2 + S1^2".parse().unwrap();
        let checks = check_identity(&generated, &fixture);
        assert_eq!(checks.len(), 2);
        assert!(!checks[1].ok());
    }

    #[test]
    fn generated_fixture_is_current() {
        assert_eq!(render_identities(4, 12, 26).unwrap(), GENERATED_IDENTITIES);
    }
}
