//! Dynkin diagrams: the A–G families, disjoint unions, vertex deletion,
//! Coxeter numbers, Weyl group orders and diagram automorphisms.
//!
//! Vertex labels run `1..=rank` with a fixed adjacency per family:
//!
//! * `A_n`: path `1 - 2 - … - n`
//! * `B_n`, `C_n`: path `1 - … - n` with a double edge between `n-1` and
//!   `n`; the vertex `n` carries the short root in `B_n` and the long root
//!   in `C_n`
//! * `D_n`: fork vertices `1` and `2` both joined to `3`, then the path
//!   `3 - 4 - … - n`
//! * `E_n` (`n` in 6..=8): vertex `1` joined to `4`, plus the path
//!   `2 - 3 - … - n`
//! * `F_4`: `1 - 2 = 3 - 4` with short roots at `1` and `2`
//! * `G_2`: a triple edge between `1` and `2`, short root at `2`
//!
//! Low ranks collapse: `B1`, `C1` and `D1` parse as `A1`. `D2` and `D3`
//! are kept as typed (they are isomorphic to `A1+A1` and `A3` but retain
//! their labels).

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{family}{rank} is not a Dynkin diagram ({family} requires rank {legal})")]
    RankOutOfRange {
        family: char,
        rank: usize,
        legal: &'static str,
    },
    #[error("vertex {label} is not a vertex of {diagram} (labels run 1..={rank})")]
    InvalidVertex {
        label: usize,
        diagram: String,
        rank: usize,
    },
    #[error("component index {index} out of range ({count} components)")]
    InvalidComponent { index: usize, count: usize },
}

/// The seven families of connected Dynkin diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        match c.to_ascii_uppercase() {
            'A' => Some(Family::A),
            'B' => Some(Family::B),
            'C' => Some(Family::C),
            'D' => Some(Family::D),
            'E' => Some(Family::E),
            'F' => Some(Family::F),
            'G' => Some(Family::G),
            _ => None,
        }
    }

    /// Human-readable description of the legal ranks, used in errors.
    pub fn legal_ranks(self) -> &'static str {
        match self {
            Family::A => ">= 1",
            Family::B | Family::C | Family::D => ">= 2",
            Family::E => "6, 7 or 8",
            Family::F => "4",
            Family::G => "2",
        }
    }

    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C | Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Whether a vertex carries a long or a short simple root. In a simply
/// laced diagram every root counts as long.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootLength {
    Long,
    Short,
}

/// An edge of a Dynkin diagram; `multiplicity` is 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: u8,
}

impl Edge {
    fn simple(a: usize, b: usize) -> Edge {
        Edge {
            a,
            b,
            multiplicity: 1,
        }
    }
}

/// A connected Dynkin diagram, identified by family and rank.
///
/// The derived ordering sorts by family letter first and rank second,
/// which is exactly the canonical component order of a [`Diagram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectedDiagram {
    family: Family,
    rank: usize,
}

impl ConnectedDiagram {
    /// Builds a diagram, rejecting illegal ranks such as `E9` or `A0`.
    pub fn new(family: Family, rank: usize) -> Result<ConnectedDiagram, DiagramError> {
        if family.admits_rank(rank) {
            Ok(ConnectedDiagram { family, rank })
        } else {
            Err(DiagramError::RankOutOfRange {
                family: family.letter(),
                rank,
                legal: family.legal_ranks(),
            })
        }
    }

    /// Like [`ConnectedDiagram::new`] but collapses the degenerate low
    /// ranks `B1`, `C1` and `D1` to `A1`, which is what the parser uses.
    pub fn normalized(family: Family, rank: usize) -> Result<ConnectedDiagram, DiagramError> {
        match (family, rank) {
            (Family::B | Family::C | Family::D, 1) => ConnectedDiagram::new(Family::A, 1),
            _ => ConnectedDiagram::new(family, rank),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The Coxeter number `h`.
    pub fn coxeter_number(&self) -> u64 {
        let n = self.rank as u64;
        match self.family {
            Family::A => n + 1,
            Family::B | Family::C => 2 * n,
            Family::D => 2 * (n - 1),
            Family::E => match self.rank {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            Family::F => 12,
            Family::G => 6,
        }
    }

    /// The order of the Weyl group.
    pub fn weyl_order(&self) -> BigUint {
        let n = self.rank as u64;
        match self.family {
            Family::A => factorial(n + 1),
            Family::B | Family::C => factorial(n) << n,
            Family::D => factorial(n) << (n - 1),
            Family::E => match self.rank {
                6 => BigUint::from(51_840u64),
                7 => BigUint::from(2_903_040u64),
                _ => BigUint::from(696_729_600u64),
            },
            Family::F => BigUint::from(1_152u64),
            Family::G => BigUint::from(12u64),
        }
    }

    /// The edges of the diagram under the labeling fixed in the module
    /// docs. `D2` has no edges at all.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.rank;
        match self.family {
            Family::A => (1..n).map(|i| Edge::simple(i, i + 1)).collect(),
            Family::B | Family::C => {
                let mut edges: Vec<Edge> = (1..n - 1).map(|i| Edge::simple(i, i + 1)).collect();
                edges.push(Edge {
                    a: n - 1,
                    b: n,
                    multiplicity: 2,
                });
                edges
            }
            Family::D => {
                if n == 2 {
                    Vec::new()
                } else {
                    let mut edges = vec![Edge::simple(1, 3), Edge::simple(2, 3)];
                    edges.extend((3..n).map(|i| Edge::simple(i, i + 1)));
                    edges
                }
            }
            Family::E => {
                let mut edges = vec![Edge::simple(1, 4)];
                edges.extend((2..n).map(|i| Edge::simple(i, i + 1)));
                edges
            }
            Family::F => vec![
                Edge::simple(1, 2),
                Edge {
                    a: 2,
                    b: 3,
                    multiplicity: 2,
                },
                Edge::simple(3, 4),
            ],
            Family::G => vec![Edge {
                a: 1,
                b: 2,
                multiplicity: 3,
            }],
        }
    }

    /// Root length per vertex, indexed by `label - 1`.
    pub fn vertex_lengths(&self) -> Vec<RootLength> {
        let n = self.rank;
        match self.family {
            Family::A | Family::D | Family::E => vec![RootLength::Long; n],
            Family::B => {
                let mut lengths = vec![RootLength::Long; n];
                lengths[n - 1] = RootLength::Short;
                lengths
            }
            Family::C => {
                let mut lengths = vec![RootLength::Short; n];
                lengths[n - 1] = RootLength::Long;
                lengths
            }
            Family::F => vec![
                RootLength::Short,
                RootLength::Short,
                RootLength::Long,
                RootLength::Long,
            ],
            Family::G => vec![RootLength::Long, RootLength::Short],
        }
    }

    /// Removes one vertex and classifies what is left, a disjoint union of
    /// strictly smaller connected diagrams.
    pub fn delete_vertex(&self, label: usize) -> Result<Diagram, DiagramError> {
        if label == 0 || label > self.rank {
            return Err(DiagramError::InvalidVertex {
                label,
                diagram: self.to_string(),
                rank: self.rank,
            });
        }
        let lengths = self.vertex_lengths();
        let edges: Vec<Edge> = self
            .edges()
            .into_iter()
            .filter(|e| e.a != label && e.b != label)
            .collect();
        let mut adjacency = vec![Vec::new(); self.rank + 1];
        for e in &edges {
            adjacency[e.a].push(e.b);
            adjacency[e.b].push(e.a);
        }
        let mut seen = vec![false; self.rank + 1];
        seen[label] = true;
        let mut components = Vec::new();
        for start in 1..=self.rank {
            if seen[start] {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            let mut labels = Vec::new();
            while let Some(v) = queue.pop_front() {
                labels.push(v);
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            labels.sort_unstable();
            let in_component: Vec<Edge> = edges
                .iter()
                .filter(|e| labels.binary_search(&e.a).is_ok())
                .copied()
                .collect();
            components.push(classify_component(&labels, &in_component, &lengths));
        }
        Ok(Diagram::new(components))
    }

    /// The canonical nontrivial diagram automorphism `ρ` where one exists
    /// (`A_n` reversal, the `D_n` fork swap, the `E6` flip), and the
    /// identity otherwise.
    pub fn automorphism_rho(&self) -> DiagramAutomorphism {
        let n = self.rank;
        let map: Vec<usize> = match self.family {
            Family::A => (1..=n).map(|i| n + 1 - i).collect(),
            Family::D => {
                let mut map: Vec<usize> = (1..=n).collect();
                map.swap(0, 1);
                map
            }
            Family::E if n == 6 => vec![1, 6, 5, 4, 3, 2],
            _ => (1..=n).collect(),
        };
        DiagramAutomorphism { map }
    }
}

impl fmt::Display for ConnectedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A permutation of the vertex labels preserving edges and lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    map: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn apply(&self, label: usize) -> usize {
        self.map[label - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

fn classify_component(labels: &[usize], edges: &[Edge], lengths: &[RootLength]) -> ConnectedDiagram {
    let rank = labels.len();
    let build = |family, rank| {
        ConnectedDiagram::new(family, rank)
            .expect("vertex deletion always leaves Dynkin components")
    };
    let max_mult = edges.iter().map(|e| e.multiplicity).max().unwrap_or(1);
    if max_mult == 3 {
        return build(Family::G, rank);
    }
    if max_mult == 2 {
        if rank == 2 {
            return build(Family::B, 2);
        }
        let shorts = labels
            .iter()
            .filter(|&&v| lengths[v - 1] == RootLength::Short)
            .count();
        if shorts == 1 {
            return build(Family::B, rank);
        }
        if shorts == rank - 1 {
            return build(Family::C, rank);
        }
        debug_assert!(rank == 4 && shorts == 2);
        return build(Family::F, 4);
    }
    let degree = |v: usize| edges.iter().filter(|e| e.a == v || e.b == v).count();
    let branch_vertices: Vec<usize> = labels.iter().copied().filter(|&v| degree(v) >= 3).collect();
    match branch_vertices.as_slice() {
        [] => build(Family::A, rank),
        [branch] => {
            debug_assert_eq!(degree(*branch), 3);
            let mut arms: Vec<usize> = neighbors(*branch, edges)
                .map(|first| arm_length(*branch, first, edges))
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => build(Family::D, rank),
                [1, 2, 2] => build(Family::E, 6),
                [1, 2, 3] => build(Family::E, 7),
                [1, 2, 4] => build(Family::E, 8),
                other => unreachable!("branch arms {other:?} do not form a Dynkin diagram"),
            }
        }
        more => unreachable!("multiple branch vertices {more:?} in a deletion component"),
    }
}

fn neighbors<'a>(v: usize, edges: &'a [Edge]) -> impl Iterator<Item = usize> + 'a {
    edges.iter().filter_map(move |e| {
        if e.a == v {
            Some(e.b)
        } else if e.b == v {
            Some(e.a)
        } else {
            None
        }
    })
}

fn arm_length(branch: usize, first: usize, edges: &[Edge]) -> usize {
    let mut previous = branch;
    let mut current = first;
    let mut length = 1;
    loop {
        let next = neighbors(current, edges).find(|&w| w != previous);
        match next {
            Some(w) => {
                previous = current;
                current = w;
                length += 1;
            }
            None => return length,
        }
    }
}

/// A finite Dynkin diagram: a multiset of connected components, kept in
/// canonical order. The empty diagram is legal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Diagram {
    components: Vec<ConnectedDiagram>,
}

impl Diagram {
    pub fn empty() -> Diagram {
        Diagram::default()
    }

    /// Builds a diagram from components in any order; the canonical
    /// sorted order is restored here.
    pub fn new(components: impl IntoIterator<Item = ConnectedDiagram>) -> Diagram {
        let mut components: Vec<ConnectedDiagram> = components.into_iter().collect();
        components.sort_unstable();
        Diagram { components }
    }

    pub fn from_component(component: ConnectedDiagram) -> Diagram {
        Diagram {
            components: vec![component],
        }
    }

    pub fn components(&self) -> &[ConnectedDiagram] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank()).sum()
    }

    /// The component if the diagram is connected, `None` otherwise.
    pub fn single_component(&self) -> Option<ConnectedDiagram> {
        match self.components.as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    pub fn union(&self, other: &Diagram) -> Diagram {
        Diagram::new(
            self.components
                .iter()
                .chain(other.components.iter())
                .copied(),
        )
    }

    /// Deletes one vertex of one component, leaving the rest untouched.
    pub fn delete_vertex(&self, vertex: Vertex) -> Result<Diagram, DiagramError> {
        let component =
            self.components
                .get(vertex.component)
                .ok_or(DiagramError::InvalidComponent {
                    index: vertex.component,
                    count: self.components.len(),
                })?;
        let deleted = component.delete_vertex(vertex.label)?;
        let rest = self
            .components
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != vertex.component)
            .map(|(_, c)| *c);
        Ok(Diagram::new(rest.chain(deleted.components)))
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.components {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Diagram, DiagramError> {
        parse_diagram(s)
    }
}

/// A vertex of a [`Diagram`]: component index plus 1-based label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub component: usize,
    pub label: usize,
}

/// Parses a spec such as `"E6"` or `"B3 + a2 + A2"`. Case and whitespace
/// are ignored; `B1`, `C1` and `D1` normalize to `A1`.
pub fn parse_diagram(input: &str) -> Result<Diagram, DiagramError> {
    let mut tokens = input
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .peekable();
    let mut components = Vec::new();
    loop {
        let (position, letter) = tokens.next().ok_or_else(|| DiagramError::Syntax {
            position: input.len(),
            message: if components.is_empty() {
                "empty diagram spec".to_string()
            } else {
                "expected a term after '+'".to_string()
            },
        })?;
        let family = Family::from_letter(letter).ok_or_else(|| DiagramError::Syntax {
            position,
            message: format!("expected a family letter A-G, found {letter:?}"),
        })?;
        let mut digits = String::new();
        while let Some(&(_, c)) = tokens.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                tokens.next();
            } else {
                break;
            }
        }
        if digits.is_empty() {
            let position = tokens.peek().map_or(input.len(), |&(i, _)| i);
            return Err(DiagramError::Syntax {
                position,
                message: format!("expected a rank after {}", family.letter()),
            });
        }
        let rank: usize = digits.parse().map_err(|_| DiagramError::Syntax {
            position,
            message: format!("rank {digits} is out of range"),
        })?;
        components.push(ConnectedDiagram::normalized(family, rank)?);
        match tokens.next() {
            None => break,
            Some((_, '+')) => continue,
            Some((position, c)) => {
                return Err(DiagramError::Syntax {
                    position,
                    message: format!("expected '+' between terms, found {c:?}"),
                });
            }
        }
    }
    Ok(Diagram::new(components))
}

/// Every connected diagram of rank at most `max_rank`, in canonical order.
pub fn all_connected_up_to_rank(max_rank: usize) -> Vec<ConnectedDiagram> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for rank in 1..=max_rank {
            if family.admits_rank(rank) {
                out.push(ConnectedDiagram { family, rank });
            }
        }
    }
    out
}

fn factorial(n: u64) -> BigUint {
    let mut result = BigUint::one();
    for k in 2..=n {
        result *= k;
    }
    result
}
