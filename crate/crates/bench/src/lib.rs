//! Shared inputs for the ksumlab benchmarks.

use ksumlab::NumberMultiset;

/// The two 12-element sets with identical 4-sum multisets.
pub fn twelve_four_pair() -> (NumberMultiset, NumberMultiset) {
    (
        "0^2 -1 1 -2 2 -4 4 -7^2 7^2".parse().unwrap(),
        "-1 1 -2 2 -3 3 -4 4 -5 5 -8 8".parse().unwrap(),
    )
}

/// A centred 12-element set with no known partner.
pub fn generic_twelve() -> NumberMultiset {
    "-11 -9 -6 -3 -2 0 1 2 4 5 9 10".parse().unwrap()
}
