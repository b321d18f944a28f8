//! Crystallographic root systems and the Weyl-group oracle: positive
//! roots, reflections, reflection length, Coxeter elements, and an
//! exhaustive count of factorizations of a Coxeter element into
//! rank-many reflections.
//!
//! Everything is integral. Roots live in the simple-root basis, group
//! elements are integer matrices in that basis, and reflection length is
//! the rank of `w - I` computed fraction-free. The factorization count is
//! a depth-first search over the interval below the Coxeter element in
//! absolute order, memoized per element, with an explicit branch budget
//! so runaway inputs fail loudly instead of spinning.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::counting::Count;
use crate::diagram::{ConnectedDiagram, RootLength};

/// An element of the Weyl group as an integer matrix acting on the
/// simple-root basis, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    dim: usize,
    entries: Vec<i64>,
}

impl WeylElement {
    pub fn identity(dim: usize) -> WeylElement {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        WeylElement { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn mul(&self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        WeylElement { dim: n, entries }
    }

    pub fn is_identity(&self) -> bool {
        self == &WeylElement::identity(self.dim)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j] * v[j]).sum())
            .collect()
    }

    /// Multiplicative order; Weyl-group elements have tiny orders, so the
    /// hard cap only guards against misuse on non-group matrices.
    pub fn order(&self) -> usize {
        let mut power = self.clone();
        for k in 1..=1000 {
            if power.is_identity() {
                return k;
            }
            power = power.mul(self);
        }
        panic!("element order exceeds any Weyl group bound");
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> i64 {
        let n = self.dim;
        let mut m: Vec<i128> = self.entries.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for c in 0..n {
                    m.swap(pivot * n + c, col * n + c);
                }
                sign = -sign;
            }
            for r in col + 1..n {
                for c in col + 1..n {
                    m[r * n + c] = (m[col * n + col] * m[r * n + c]
                        - m[r * n + col] * m[col * n + c])
                        / prev;
                }
                m[r * n + col] = 0;
            }
            prev = m[col * n + col];
        }
        i64::try_from(sign * prev).expect("Weyl determinants are ±1")
    }
}

/// Search budget, measured in branch evaluations: one unit per candidate
/// reflection examined while expanding a not-yet-memoized element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Budget {
    /// 10^4 branches: every rank ≤ 5 diagram plus `F4`.
    #[default]
    Low,
    /// 10^7 branches: enough for `E6`, `E7` and `E8`.
    High,
    Limit(u64),
}

impl Budget {
    pub fn branch_limit(self) -> u64 {
        match self {
            Budget::Low => 10_000,
            Budget::High => 10_000_000,
            Budget::Limit(n) => n,
        }
    }
}

/// Result of a budgeted search: either the exact count together with the
/// branches actually spent, or the exhausted limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Complete { count: Count, branches: u64 },
    BudgetExhausted { limit: u64 },
}

impl SearchOutcome {
    pub fn count(&self) -> Option<&Count> {
        match self {
            SearchOutcome::Complete { count, .. } => Some(count),
            SearchOutcome::BudgetExhausted { .. } => None,
        }
    }
}

/// The root system of a connected Dynkin diagram.
#[derive(Debug, Clone)]
pub struct RootSystem {
    diagram: ConnectedDiagram,
    cartan: Vec<i64>,
    positive_roots: Vec<Vec<i64>>,
    reflections: Vec<WeylElement>,
    simple_reflections: Vec<WeylElement>,
}

/// Builds the Cartan matrix from the diagram, closes the simple roots
/// under the simple reflections, and attaches one reflection per positive
/// root. Panics only on internal inconsistencies; every legal diagram
/// builds.
pub fn build_root_system(diagram: &ConnectedDiagram) -> RootSystem {
    let n = diagram.rank();
    let edges = diagram.edges();
    let lengths = diagram.vertex_lengths();
    let long_weight = edges.iter().map(|e| e.multiplicity as i64).max().unwrap_or(1);
    let weights: Vec<i64> = lengths
        .iter()
        .map(|l| match l {
            RootLength::Short => 1,
            RootLength::Long => long_weight,
        })
        .collect();

    let mut cartan = vec![0i64; n * n];
    for i in 0..n {
        cartan[i * n + i] = 2;
    }
    for e in &edges {
        let (a, b) = (e.a - 1, e.b - 1);
        let inner = -weights[a].max(weights[b]);
        cartan[a * n + b] = inner / weights[b];
        cartan[b * n + a] = inner / weights[a];
        assert_eq!(cartan[a * n + b] * weights[b], inner, "non-integral Cartan entry");
        assert_eq!(cartan[b * n + a] * weights[a], inner, "non-integral Cartan entry");
    }

    let simple_reflect = |i: usize, v: &[i64]| {
        let c: i64 = (0..n).map(|j| v[j] * cartan[j * n + i]).sum();
        let mut image = v.to_vec();
        image[i] -= c;
        image
    };

    let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v
        })
        .collect();
    for v in &frontier {
        roots.insert(v.clone());
    }
    while let Some(v) = frontier.pop() {
        for i in 0..n {
            let image = simple_reflect(i, &v);
            if roots.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }

    let mut positive_roots: Vec<Vec<i64>> = roots
        .into_iter()
        .filter(|v| v.iter().all(|&c| c >= 0))
        .collect();
    positive_roots.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    let expected = n as u64 * diagram.coxeter_number() / 2;
    assert_eq!(
        positive_roots.len() as u64,
        expected,
        "{diagram}: positive root count disagrees with n·h/2"
    );

    let bilinear = |u: &[i64], v: &[i64]| -> i64 {
        let mut total = 0;
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                total += u[i] * cartan[i * n + j] * weights[j] * v[j];
            }
        }
        total
    };

    let reflection_for = |beta: &Vec<i64>| -> WeylElement {
        let norm = bilinear(beta, beta);
        let mut entries = vec![0i64; n * n];
        for j in 0..n {
            let mut basis = vec![0i64; n];
            basis[j] = 1;
            let twice = 2 * bilinear(&basis, beta);
            assert_eq!(twice % norm, 0, "reflection is not integral");
            let coefficient = twice / norm;
            for i in 0..n {
                entries[i * n + j] = i64::from(i == j) - coefficient * beta[i];
            }
        }
        WeylElement { dim: n, entries }
    };

    let reflections: Vec<WeylElement> = positive_roots.iter().map(reflection_for).collect();
    let simple_reflections: Vec<WeylElement> = (0..n)
        .map(|i| {
            let mut basis = vec![0i64; n];
            basis[i] = 1;
            reflection_for(&basis)
        })
        .collect();

    RootSystem {
        diagram: *diagram,
        cartan,
        positive_roots,
        reflections,
        simple_reflections,
    }
}

impl RootSystem {
    pub fn diagram(&self) -> &ConnectedDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    /// Cartan matrix entry `2(α_i, α_j)/(α_j, α_j)`, 0-based indices.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i * self.rank() + j]
    }

    /// Positive roots in the simple-root basis, sorted by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// All reflections, parallel to [`RootSystem::positive_roots`].
    pub fn reflections(&self) -> &[WeylElement] {
        &self.reflections
    }

    /// The simple reflection at a 1-based vertex label.
    pub fn simple_reflection(&self, label: usize) -> &WeylElement {
        &self.simple_reflections[label - 1]
    }

    /// The product of all simple reflections in the given label order,
    /// which must be a permutation of `1..=rank`.
    pub fn coxeter_element(&self, order: &[usize]) -> WeylElement {
        let n = self.rank();
        let mut sorted: Vec<usize> = order.to_vec();
        sorted.sort_unstable();
        assert!(
            sorted == (1..=n).collect::<Vec<_>>(),
            "order must be a permutation of 1..={n}"
        );
        order.iter().fold(WeylElement::identity(n), |acc, &label| {
            acc.mul(self.simple_reflection(label))
        })
    }

    /// The Coxeter element for the label order `1, 2, …, rank`.
    pub fn standard_coxeter_element(&self) -> WeylElement {
        let order: Vec<usize> = (1..=self.rank()).collect();
        self.coxeter_element(&order)
    }

    /// Reflection length: the rank of `w - I`, fraction-free.
    pub fn reflection_length(&self, w: &WeylElement) -> usize {
        let n = self.rank();
        let mut m: Vec<i128> = w.entries.iter().map(|&v| v as i128).collect();
        for i in 0..n {
            m[i * n + i] -= 1;
        }
        matrix_rank(m, n)
    }

    /// Counts factorizations of `target` into `reflection_length(target)`
    /// reflections by memoized depth-first search.
    pub fn count_factorizations_of(&self, target: &WeylElement, budget: Budget) -> SearchOutcome {
        let limit = budget.branch_limit();
        let mut search = Search {
            system: self,
            limit,
            branches: 0,
            memo: HashMap::new(),
        };
        let length = self.reflection_length(target);
        match search.count(target, length) {
            Ok(count) => SearchOutcome::Complete {
                count,
                branches: search.branches,
            },
            Err(Exhausted) => SearchOutcome::BudgetExhausted { limit },
        }
    }

    /// Counts maximal chains in the noncrossing partition lattice: the
    /// factorizations of the standard Coxeter element into rank-many
    /// reflections.
    pub fn count_chain_factorizations(&self, budget: Budget) -> SearchOutcome {
        let c = self.standard_coxeter_element();
        assert_eq!(
            self.reflection_length(&c),
            self.rank(),
            "a Coxeter element has reflection length equal to the rank"
        );
        self.count_factorizations_of(&c, budget)
    }
}

struct Exhausted;

struct Search<'a> {
    system: &'a RootSystem,
    limit: u64,
    branches: u64,
    memo: HashMap<WeylElement, Count>,
}

impl Search<'_> {
    fn count(&mut self, w: &WeylElement, length: usize) -> Result<Count, Exhausted> {
        if length == 0 {
            debug_assert!(w.is_identity());
            return Ok(Count::one());
        }
        if let Some(hit) = self.memo.get(w) {
            return Ok(hit.clone());
        }
        let mut total = Count::zero();
        for t in &self.system.reflections {
            self.branches += 1;
            if self.branches > self.limit {
                return Err(Exhausted);
            }
            let child = t.mul(w);
            let child_length = self.system.reflection_length(&child);
            assert_eq!(
                child_length.abs_diff(length),
                1,
                "a reflection moves reflection length by exactly one"
            );
            if child_length < length {
                total += self.count(&child, child_length)?;
            }
        }
        self.memo.insert(w.clone(), total.clone());
        Ok(total)
    }
}

fn matrix_rank(mut m: Vec<i128>, n: usize) -> usize {
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| m[r * n + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in 0..n {
                m.swap(pivot * n + c, rank * n + c);
            }
        }
        for r in rank + 1..n {
            for c in col + 1..n {
                m[r * n + c] =
                    (m[rank * n + col] * m[r * n + c] - m[r * n + col] * m[rank * n + c]) / prev;
            }
            m[r * n + col] = 0;
        }
        prev = m[rank * n + col];
        rank += 1;
    }
    rank
}
