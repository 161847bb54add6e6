use std::fmt;

use crate::algebra::{Monomial, Rational};

/// One generated coefficient compared against its expected value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCheck {
    pub monomial: Monomial,
    pub got: Rational,
    pub expected: Rational,
}

impl CoefficientCheck {
    pub fn ok(&self) -> bool {
        self.got == self.expected
    }
}

impl fmt::Display for CoefficientCheck {
    /// `coef(<monomial>) = <rational> [expected <rational>] OK|MISMATCH`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coef({}) = {} [expected {}] {}",
            self.monomial,
            self.got,
            self.expected,
            if self.ok() { "OK" } else { "MISMATCH" }
        )
    }
}
