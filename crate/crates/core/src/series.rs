//! Exponential-generating-function prefixes over exact integers: the
//! labeled-tree and endofunction sequences, binomial convolution, and the
//! Abel expansion that proves their closed forms.
//!
//! The three sequences are
//!
//! ```text
//! A(n) = (n+1)^(n-1)   labeled trees on n+1 vertices,   e(A_n) for n >= 1
//! B(n) = n^n           endofunctions of an n-set,        e(B_n) for n >= 2
//! D(n) = (n-1)^n       with D(1) = 0,                2·D(n) = e(D_n), n >= 2
//! ```
//!
//! and the binomial convolution `(F ⋆ G)(n) = Σ_k C(n,k) F(k) G(n-k)`
//! satisfies
//!
//! ```text
//! (A ⋆ A)(n) = 2 (n+2)^(n-1)    (n >= 1)
//! (A ⋆ B)(n) = (n+1)^n
//! (A ⋆ D)(n) = B(n)
//! ```
//!
//! all of which are instances of Abel's generalization of the binomial
//! theorem, checked here exactly rather than assumed.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::counting;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("the Abel expansion requires x != 0")]
    AbelZeroX,
}

/// Coefficients `c_0 ..= c_order` of a formal series, all exact integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPrefix {
    coeffs: Vec<BigInt>,
}

impl SeriesPrefix {
    pub fn new(coeffs: Vec<BigInt>) -> SeriesPrefix {
        assert!(!coeffs.is_empty(), "a series prefix has at least c_0");
        SeriesPrefix { coeffs }
    }

    /// The prefix of the multiplicative unit: `1, 0, 0, …`.
    pub fn unit(order: usize) -> SeriesPrefix {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        SeriesPrefix { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `(self ⋆ other)(n) = Σ_k C(n,k) self(k) other(n-k)` for each order.
    /// Both prefixes must carry the same order.
    pub fn binomial_convolution(&self, other: &SeriesPrefix) -> Result<SeriesPrefix, SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let coeffs = (0..=self.order())
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        binomial(n, k) * &self.coeffs[k] * &other.coeffs[n - k]
                    })
                    .sum()
            })
            .collect();
        Ok(SeriesPrefix { coeffs })
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    BigInt::from(counting::binomial(n as u64, k as u64))
}

fn ipow(base: BigInt, exponent: usize) -> BigInt {
    num_traits::pow(base, exponent)
}

/// `A(n) = (n+1)^(n-1)` up to the given order.
pub fn seq_a(order: usize) -> SeriesPrefix {
    SeriesPrefix::new(
        (0..=order)
            .map(|n| {
                if n == 0 {
                    BigInt::one()
                } else {
                    ipow(BigInt::from(n + 1), n - 1)
                }
            })
            .collect(),
    )
}

/// `B(n) = n^n` up to the given order, with `B(0) = 1`.
pub fn seq_b(order: usize) -> SeriesPrefix {
    SeriesPrefix::new((0..=order).map(|n| ipow(BigInt::from(n), n)).collect())
}

/// `D(n) = (n-1)^n` up to the given order, with `D(0) = 1`, `D(1) = 0`.
pub fn seq_d(order: usize) -> SeriesPrefix {
    SeriesPrefix::new(
        (0..=order)
            .map(|n| ipow(BigInt::from(n as i64 - 1), n))
            .collect(),
    )
}

/// Abel's expansion of `(x + y)^n`:
///
/// ```text
/// (x + y)^n = Σ_k C(n,k) · x (x - kz)^(k-1) · (y + kz)^(n-k)
/// ```
///
/// with the `k = 0` term read as `y^n`. Requires `x != 0` (the `k`-th
/// term otherwise hides a division by `x`).
pub fn abel_sum(x: i64, y: i64, z: i64, n: u32) -> Result<BigInt, SeriesError> {
    if x == 0 {
        return Err(SeriesError::AbelZeroX);
    }
    let mut total = BigInt::zero();
    for k in 0..=n {
        let term = if k == 0 {
            ipow(BigInt::from(y), n as usize)
        } else {
            let shifted_x = BigInt::from(x as i128 - k as i128 * z as i128);
            let shifted_y = BigInt::from(y as i128 + k as i128 * z as i128);
            binomial(n as usize, k as usize)
                * BigInt::from(x)
                * ipow(shifted_x, k as usize - 1)
                * ipow(shifted_y, (n - k) as usize)
        };
        total += term;
    }
    Ok(total)
}

/// Closed form for `(A ⋆ A)(n)`.
pub fn a_conv_a_closed(n: usize) -> BigInt {
    if n == 0 {
        BigInt::one()
    } else {
        ipow(BigInt::from(n + 2), n - 1) * 2
    }
}

/// Closed form for `(A ⋆ B)(n)`.
pub fn a_conv_b_closed(n: usize) -> BigInt {
    ipow(BigInt::from(n + 1), n)
}

/// Per-identity verdicts: each field holds the first order where the
/// convolution and its closed form disagree, `None` when they never do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionReport {
    pub order: usize,
    pub a_conv_a: Option<usize>,
    pub a_conv_b: Option<usize>,
    pub a_conv_d: Option<usize>,
}

impl ConvolutionReport {
    pub fn all_hold(&self) -> bool {
        self.a_conv_a.is_none() && self.a_conv_b.is_none() && self.a_conv_d.is_none()
    }
}

/// Checks the three convolution identities coefficient by coefficient up
/// to the given order.
pub fn verify_convolution_identities(order: usize) -> ConvolutionReport {
    let a = seq_a(order);
    let b = seq_b(order);
    let d = seq_d(order);
    let first_mismatch = |computed: &SeriesPrefix, closed: &dyn Fn(usize) -> BigInt| {
        (0..=order).find(|&n| computed.coeff(n) != &closed(n))
    };
    let aa = a.binomial_convolution(&a).expect("orders match");
    let ab = a.binomial_convolution(&b).expect("orders match");
    let ad = a.binomial_convolution(&d).expect("orders match");
    ConvolutionReport {
        order,
        a_conv_a: first_mismatch(&aa, &|n| a_conv_a_closed(n)),
        a_conv_b: first_mismatch(&ab, &|n| a_conv_b_closed(n)),
        a_conv_d: first_mismatch(&ad, &|n| b.coeff(n).clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::e_closed;
    use crate::diagram::{ConnectedDiagram, Family};
    use proptest::prelude::*;

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn sequence_prefixes_match_the_reference_table() {
        assert_eq!(
            seq_a(10).coeffs(),
            ints(&[
                1, 1, 3, 16, 125, 1296, 16807, 262144, 4782969, 100000000, 2357947691
            ])
        );
        assert_eq!(
            seq_b(10).coeffs(),
            ints(&[
                1, 1, 4, 27, 256, 3125, 46656, 823543, 16777216, 387420489, 10000000000
            ])
        );
        assert_eq!(
            seq_d(10).coeffs(),
            ints(&[
                1, 0, 1, 8, 81, 1024, 15625, 279936, 5764801, 134217728, 3486784401
            ])
        );
    }

    #[test]
    fn sequences_match_the_connected_counts() {
        for n in 1..=10usize {
            let a = ConnectedDiagram::new(Family::A, n).unwrap();
            assert_eq!(BigInt::from(e_closed(&a)), *seq_a(10).coeff(n));
        }
        for n in 2..=10usize {
            let b = ConnectedDiagram::new(Family::B, n).unwrap();
            let d = ConnectedDiagram::new(Family::D, n).unwrap();
            assert_eq!(BigInt::from(e_closed(&b)), *seq_b(10).coeff(n));
            assert_eq!(BigInt::from(e_closed(&d)), seq_d(10).coeff(n) * 2);
        }
    }

    #[test]
    fn convolutions_match_worked_prefixes() {
        let a = seq_a(4);
        let aa = a.binomial_convolution(&a).unwrap();
        assert_eq!(aa.coeffs(), ints(&[1, 2, 8, 50, 432]));
        let ab = a.binomial_convolution(&seq_b(4)).unwrap();
        assert_eq!(ab.coeffs(), ints(&[1, 2, 9, 64, 625]));
        let ad = a.binomial_convolution(&seq_d(4)).unwrap();
        assert_eq!(ad.coeffs(), ints(&[1, 1, 4, 27, 256]));
    }

    #[test]
    fn identities_hold_through_order_twenty() {
        let report = verify_convolution_identities(20);
        assert!(report.all_hold(), "{report:?}");
    }

    #[test]
    fn convolution_rejects_mismatched_orders() {
        assert_eq!(
            seq_a(3).binomial_convolution(&seq_a(4)),
            Err(SeriesError::OrderMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn abel_sum_matches_worked_examples() {
        assert_eq!(abel_sum(1, 3, -1, 3).unwrap(), BigInt::from(64));
        assert_eq!(abel_sum(2, 0, 5, 0).unwrap(), BigInt::from(1));
        assert_eq!(abel_sum(3, -1, 2, 4).unwrap(), BigInt::from(16));
        assert_eq!(abel_sum(0, 1, 1, 2), Err(SeriesError::AbelZeroX));
    }

    #[test]
    fn abel_sum_collapses_to_the_binomial_theorem_on_a_grid() {
        for x in -3i64..=3 {
            if x == 0 {
                continue;
            }
            for y in -3i64..=3 {
                for z in -2i64..=2 {
                    for n in 0..=6u32 {
                        let expected = ipow(BigInt::from(x + y), n as usize);
                        assert_eq!(
                            abel_sum(x, y, z, n).unwrap(),
                            expected,
                            "x={x} y={y} z={z} n={n}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn convolution_is_commutative(order in 0usize..12) {
            let a = seq_a(order);
            let d = seq_d(order);
            prop_assert_eq!(
                a.binomial_convolution(&d).unwrap(),
                d.binomial_convolution(&a).unwrap()
            );
        }

        #[test]
        fn convolution_is_associative(order in 0usize..10) {
            let a = seq_a(order);
            let b = seq_b(order);
            let d = seq_d(order);
            let left = a.binomial_convolution(&b).unwrap().binomial_convolution(&d).unwrap();
            let right = a.binomial_convolution(&b.binomial_convolution(&d).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn unit_prefix_is_neutral(order in 0usize..12) {
            let b = seq_b(order);
            let unit = SeriesPrefix::unit(order);
            prop_assert_eq!(b.binomial_convolution(&unit).unwrap(), b);
        }

        #[test]
        fn abel_sum_is_binomial_for_random_parameters(
            x in -20i64..=20, y in -20i64..=20, z in -10i64..=10, n in 0u32..=10,
        ) {
            prop_assume!(x != 0);
            let expected = ipow(BigInt::from(x + y), n as usize);
            prop_assert_eq!(abel_sum(x, y, z, n).unwrap(), expected);
        }
    }
}
