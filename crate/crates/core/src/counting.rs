//! The exceptional-sequence count `e(Δ)` by closed form and by the
//! vertex-deletion recursion, plus the uniform product formula and exact
//! prime factorization of the results.
//!
//! For a disjoint union the counts shuffle together:
//!
//! ```text
//! e(Δ1 + … + Δk) = multinomial(n; n1, …, nk) · e(Δ1) ⋯ e(Δk)
//! ```
//!
//! and for a connected diagram of rank `n` with Coxeter number `h`,
//! deleting each vertex in turn gives
//!
//! ```text
//! e(Δ) = (h / 2) · Σ_v e(Δ with v deleted)        (n ≥ 2)
//! ```
//!
//! with `e(A1) = 1` and `e(empty) = 1` as base cases. The recursion takes
//! values in the integers even though `h` may be odd; the division by two
//! is checked at every step.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::diagram::{ConnectedDiagram, Diagram, Family};

/// All counts are exact unsigned integers of arbitrary size.
pub type Count = BigUint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("uniform formula fails for {diagram}: e * |W| = {product}, rank! * h^rank = {expected}")]
    UniformFormulaMismatch {
        diagram: String,
        product: Count,
        expected: Count,
    },
    #[error("zero has no prime factorization")]
    FactorizeZero,
    #[error("cofactor {cofactor} survived trial division and is too large to declare prime")]
    CofactorTooLarge { cofactor: Count },
}

pub fn factorial(n: u64) -> Count {
    let mut result = Count::one();
    for k in 2..=n {
        result *= k;
    }
    result
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Count {
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    let mut result = Count::one();
    for i in 0..k {
        result *= n - i;
        result /= i + 1;
    }
    result
}

/// Multinomial coefficient of the sum of `parts` over the parts.
pub fn multinomial(parts: &[u64]) -> Count {
    let mut result = Count::one();
    let mut total = 0u64;
    for &p in parts {
        total += p;
        result *= binomial(total, p);
    }
    result
}

fn pow(base: u64, exponent: usize) -> Count {
    num_traits::pow(Count::from(base), exponent)
}

/// The closed form for a connected diagram.
pub fn e_closed(d: &ConnectedDiagram) -> Count {
    let n = d.rank();
    match d.family() {
        Family::A => pow(n as u64 + 1, n - 1),
        Family::B | Family::C => pow(n as u64, n),
        Family::D => pow(n as u64 - 1, n) * 2u32,
        Family::E => match n {
            6 => Count::from(41_472u64),
            7 => Count::from(1_062_882u64),
            _ => Count::from(37_968_750u64),
        },
        Family::F => Count::from(432u64),
        Family::G => Count::from(6u64),
    }
}

/// The count for an arbitrary diagram: closed forms per component,
/// shuffled together with the multinomial factor.
pub fn e_of(d: &Diagram) -> Count {
    let ranks: Vec<u64> = d.components().iter().map(|c| c.rank() as u64).collect();
    let mut result = multinomial(&ranks);
    for c in d.components() {
        result *= e_closed(c);
    }
    result
}

/// Memo key for counting: `B` and `C` components have equal counts, so
/// they share an entry.
pub fn counting_key(d: &Diagram) -> String {
    let mut parts: Vec<(char, usize)> = d
        .components()
        .iter()
        .map(|c| {
            let letter = match c.family() {
                Family::C => 'B',
                f => f.letter(),
            };
            (letter, c.rank())
        })
        .collect();
    parts.sort_unstable();
    let rendered: Vec<String> = parts
        .iter()
        .map(|(letter, rank)| format!("{letter}{rank}"))
        .collect();
    rendered.join("+")
}

/// Computes counts through the deletion recursion alone, never consulting
/// a closed form. Sharing one counter across calls shares the memo table.
#[derive(Debug, Default)]
pub struct RecursiveCounter {
    memo: HashMap<String, Count>,
}

impl RecursiveCounter {
    pub fn new() -> RecursiveCounter {
        RecursiveCounter::default()
    }

    pub fn count(&mut self, d: &Diagram) -> Count {
        if d.is_empty() {
            return Count::one();
        }
        let key = counting_key(d);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let ranks: Vec<u64> = d.components().iter().map(|c| c.rank() as u64).collect();
        let mut result = multinomial(&ranks);
        for c in d.components() {
            result *= self.connected(c);
        }
        self.memo.insert(key, result.clone());
        result
    }

    fn connected(&mut self, c: &ConnectedDiagram) -> Count {
        if c.rank() == 1 {
            return Count::one();
        }
        let key = counting_key(&Diagram::from_component(*c));
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut sum = Count::zero();
        for label in 1..=c.rank() {
            let deleted = c.delete_vertex(label).expect("label is in range");
            sum += self.count(&deleted);
        }
        let doubled = sum * c.coxeter_number();
        assert!(!doubled.bit(0), "h * deletion sum must be even for {c}");
        let result = doubled >> 1u32;
        self.memo.insert(key, result.clone());
        result
    }
}

/// One-shot recursive count with a fresh memo table.
pub fn e_recursive(d: &Diagram) -> Count {
    RecursiveCounter::new().count(d)
}

/// The count of `B_n` assembled from `A`-type tree counts alone, through
/// the binomial sum `n · Σ_k C(n-1, k) (k+1)^(k-1) (n-1-k)^(n-1-k)`. An
/// independent cross-check on `e_closed` for the `B`/`C` families.
pub fn e_b_via_a(n: u64) -> Count {
    assert!(n >= 2, "the B family starts at rank 2");
    let mut sum = Count::zero();
    for k in 0..n {
        let trees = pow(k + 1, k.saturating_sub(1) as usize);
        let tail = n - 1 - k;
        sum += binomial(n - 1, k) * trees * pow(tail, tail as usize);
    }
    sum * n
}

/// Per-vertex deletion summands for a connected diagram, together with
/// the reassembled total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountBreakdown {
    pub coxeter_number: u64,
    pub rows: Vec<BreakdownRow>,
    pub total: Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakdownRow {
    pub vertex: usize,
    pub deleted: Diagram,
    pub value: Count,
}

/// Evaluates one level of the deletion recursion, with the summands spelled
/// out per vertex.
pub fn e_breakdown(d: &ConnectedDiagram) -> CountBreakdown {
    let coxeter_number = d.coxeter_number();
    let rows: Vec<BreakdownRow> = (1..=d.rank())
        .map(|vertex| {
            let deleted = d.delete_vertex(vertex).expect("label is in range");
            let value = e_of(&deleted);
            BreakdownRow {
                vertex,
                deleted,
                value,
            }
        })
        .collect();
    let sum: Count = rows.iter().map(|r| &r.value).sum();
    let doubled = sum * coxeter_number;
    assert!(!doubled.bit(0), "h * deletion sum must be even for {d}");
    CountBreakdown {
        coxeter_number,
        rows,
        total: doubled >> 1u32,
    }
}

/// Both sides of the uniform product formula `e(Δ) · |W| = n! · h^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformFormula {
    pub e: Count,
    pub weyl_order: Count,
    pub rank_factorial_h_pow: Count,
}

impl UniformFormula {
    pub fn holds(&self) -> bool {
        &self.e * &self.weyl_order == self.rank_factorial_h_pow
    }
}

pub fn uniform_formula_sides(d: &ConnectedDiagram) -> UniformFormula {
    let n = d.rank();
    let h = d.coxeter_number();
    UniformFormula {
        e: e_closed(d),
        weyl_order: d.weyl_order(),
        rank_factorial_h_pow: factorial(n as u64) * pow(h, n),
    }
}

/// Checks the uniform formula exactly, erroring with both sides on a
/// mismatch (which would mean a defect in one of the tables).
pub fn verify_uniform_formula(d: &ConnectedDiagram) -> Result<UniformFormula, CountError> {
    let sides = uniform_formula_sides(d);
    if sides.holds() {
        Ok(sides)
    } else {
        Err(CountError::UniformFormulaMismatch {
            diagram: d.to_string(),
            product: &sides.e * &sides.weyl_order,
            expected: sides.rank_factorial_h_pow,
        })
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;
const PRIME_CERT_LIMIT: u64 = 1_000_000_000_000;

/// Prime factorization as sorted `(prime, exponent)` pairs, by trial
/// division up to 10^6. A surviving cofactor is declared prime only below
/// 10^12 (it has no divisor up to its square root by then); anything
/// larger is an error rather than a guess.
pub fn factorize(value: &Count) -> Result<Vec<(u64, u32)>, CountError> {
    if value.is_zero() {
        return Err(CountError::FactorizeZero);
    }
    let mut out = Vec::new();
    let mut remaining = value.clone();
    let mut divisor = 2u64;
    while divisor <= TRIAL_LIMIT {
        if let Some(small) = remaining.to_u64() {
            factorize_u64(small, divisor, &mut out);
            return Ok(out);
        }
        let mut exponent = 0u32;
        while (&remaining % divisor).is_zero() {
            remaining /= divisor;
            exponent += 1;
        }
        if exponent > 0 {
            out.push((divisor, exponent));
        }
        divisor = if divisor == 2 { 3 } else { divisor + 2 };
    }
    if remaining.is_one() {
        Ok(out)
    } else {
        // No factor up to 10^6 and still wider than u64, so far beyond
        // the certification bound.
        Err(CountError::CofactorTooLarge {
            cofactor: remaining,
        })
    }
}

fn factorize_u64(mut n: u64, mut divisor: u64, out: &mut Vec<(u64, u32)>) {
    while divisor <= TRIAL_LIMIT && (divisor as u128) * (divisor as u128) <= n as u128 {
        let mut exponent = 0u32;
        while n.is_multiple_of(divisor) {
            n /= divisor;
            exponent += 1;
        }
        if exponent > 0 {
            out.push((divisor, exponent));
        }
        divisor = if divisor == 2 { 3 } else { divisor + 2 };
    }
    if n > 1 {
        debug_assert!(
            n < PRIME_CERT_LIMIT || (divisor as u128) * (divisor as u128) > n as u128,
            "cofactor certification bound violated"
        );
        out.push((n, 1));
    }
}

/// Renders a factorization as `2^9·3^4`; the empty product renders as `1`.
pub fn format_factorization(factors: &[(u64, u32)]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    factors
        .iter()
        .map(|&(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}
