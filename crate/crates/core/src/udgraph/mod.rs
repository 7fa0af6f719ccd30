//! Unit-distance graphs on Moser-lattice points.
//!
//! Vertices are kept sorted by their Moser coefficients and addressed by
//! index; subsets of vertices are 64-bit masks ([`VertexSet`]).

mod cube;
mod mis;
mod weights;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{is_unit_distance, MoserPoint, Rational};

pub use cube::{cube_colouring, CubeColouring, DEFAULT_CUBE_CAP};
pub(crate) use mis::max_independent_set;
pub use weights::{aggregate, deaggregate, restrict_colouring, WeightFunction};

/// Largest graph the bitset representation supports.
pub const MAX_VERTICES: usize = 64;

/// Default cap for the exhaustive Hall-ratio search.
pub const DEFAULT_HALL_CAP: usize = 20;

/// A set of vertex indices of a fixed graph.
///
/// Ordered by size first, then lexicographically on the ascending index
/// sequence. This is the column order of every LP built from a graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(i: usize) -> Self {
        VertexSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet(it.into_iter().fold(0u64, |m, i| m | (1u64 << i)))
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        VertexSet(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> Self {
        VertexSet(self.0 & !(1u64 << i))
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// Every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut sub = full;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = VertexSet(sub);
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & full;
            }
            Some(out)
        })
    }

    /// Comma separated indices, e.g. `0,3,7`.
    pub fn to_index_list(self) -> String {
        self.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_index_list(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(VertexSet::EMPTY);
        }
        let mut set = VertexSet::EMPTY;
        for tok in s.split(',') {
            let i: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex index {:?}", tok)))?;
            if i >= MAX_VERTICES {
                return Err(Error::Parse(format!("vertex index {} out of range", i)));
            }
            set = set.with(i);
        }
        Ok(set)
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 >> diff.trailing_zeros() & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_index_list())
    }
}

/// Finite unit-distance graph with vertices in the Moser lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGraph {
    vertices: Vec<MoserPoint>,
    adj: Vec<u64>,
    /// `input_to_vertex[k]` is the sorted index of the k-th input point.
    input_to_vertex: Vec<usize>,
}

/// Builds the unit-distance graph on `points`.
///
/// Vertices are re-sorted lexicographically by coefficients; the input
/// order is remembered so that per-vertex data given in file order (such as
/// a colouring) can be mapped onto the graph.
pub fn build_graph(points: &[MoserPoint]) -> Result<UnitGraph> {
    if points.len() > MAX_VERTICES {
        return Err(Error::TooManyVertices(points.len(), MAX_VERTICES));
    }
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(*p) {
            return Err(Error::DuplicateVertex(*p));
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&k| points[k]);
    let vertices: Vec<MoserPoint> = order.iter().map(|&k| points[k]).collect();
    let mut input_to_vertex = vec![0; points.len()];
    for (v, &k) in order.iter().enumerate() {
        input_to_vertex[k] = v;
    }
    let n = vertices.len();
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if is_unit_distance(vertices[i], vertices[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    Ok(UnitGraph {
        vertices,
        adj,
        input_to_vertex,
    })
}

impl UnitGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[MoserPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> MoserPoint {
        self.vertices[i]
    }

    pub fn neighbours(&self, i: usize) -> VertexSet {
        VertexSet(self.adj[i])
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let above = u64::MAX.checked_shl(i as u32 + 1).unwrap_or(0);
            for j in VertexSet(self.adj[i] & above).iter() {
                out.push((i, j));
            }
        }
        out
    }

    /// Sorted vertex index of the k-th point as originally given.
    pub fn vertex_of_input(&self, k: usize) -> usize {
        self.input_to_vertex[k]
    }

    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|i| self.adj[i] & s.0 == 0)
    }

    pub fn points_of(&self, s: VertexSet) -> Vec<MoserPoint> {
        s.iter().map(|i| self.vertices[i]).collect()
    }

    /// The induced subgraph on `s`, with vertices re-indexed in ascending order.
    pub fn induced(&self, s: VertexSet) -> UnitGraph {
        build_graph(&self.points_of(s)).expect("subset of a valid graph")
    }

    /// Index of `p`, if it is a vertex.
    pub fn index_of(&self, p: MoserPoint) -> Option<usize> {
        self.vertices.binary_search(&p).ok()
    }
}

/// All nonempty independent sets, in [`VertexSet`] order.
///
/// The empty set is left out: it is never a useful colour class and is not
/// an LP variable.
pub fn enumerate_independent_sets(g: &UnitGraph) -> Vec<VertexSet> {
    let n = g.len();
    let mut out = Vec::new();
    // Depth-first over increasing indices; `allowed` holds the vertices that
    // can still be added without creating an edge.
    let mut stack: Vec<(u64, u64)> = vec![(0, if n == 0 { 0 } else { VertexSet::full(n).0 })];
    while let Some((set, allowed)) = stack.pop() {
        let mut rest = allowed;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next = set | (1u64 << v);
            out.push(VertexSet(next));
            let next_allowed = rest & !g.adj[v];
            if next_allowed != 0 {
                stack.push((next, next_allowed));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Counts nonempty independent sets without materializing them.
pub fn count_independent_sets(g: &UnitGraph) -> u64 {
    fn go(adj: &[u64], allowed: u64) -> u64 {
        let mut rest = allowed;
        let mut total = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += 1 + go(adj, rest & !adj[v]);
        }
        total
    }
    if g.is_empty() {
        0
    } else {
        go(&g.adj, VertexSet::full(g.len()).0)
    }
}

fn adjacency_u128(g: &UnitGraph, within: VertexSet) -> (Vec<u128>, Vec<usize>) {
    let idx: Vec<usize> = within.iter().collect();
    let adj = idx
        .iter()
        .map(|&i| {
            idx.iter()
                .enumerate()
                .filter(|&(_, &j)| g.is_adjacent(i, j))
                .fold(0u128, |m, (k, _)| m | (1u128 << k))
        })
        .collect();
    (adj, idx)
}

/// A maximum independent set of the subgraph induced on `within`.
pub fn maximum_independent_set(g: &UnitGraph, within: VertexSet) -> VertexSet {
    let (adj, idx) = adjacency_u128(g, within);
    let best = max_independent_set(&adj);
    VertexSet::from_indices(
        (0..idx.len())
            .filter(|&k| best >> k & 1 == 1)
            .map(|k| idx[k]),
    )
}

pub fn independence_number(g: &UnitGraph) -> usize {
    maximum_independent_set(g, g.all_vertices()).len()
}

pub fn independence_ratio(g: &UnitGraph) -> Result<Rational> {
    if g.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Rational::new(
        BigInt::from(independence_number(g)),
        BigInt::from(g.len()),
    ))
}

/// Hall ratio `max_H |H| / α(H)` over nonempty induced subgraphs.
///
/// Exhaustive over all `2^n` vertex subsets, with `α` tabulated bottom-up.
pub fn hall_ratio(g: &UnitGraph, cap: usize) -> Result<Rational> {
    let n = g.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "vertices for hall ratio",
            got: n,
            cap,
        });
    }
    let size = 1usize << n;
    let mut alpha = vec![0u8; size];
    let (mut best_num, mut best_den) = (0usize, 1usize);
    for mask in 1..size {
        let v = mask.trailing_zeros() as usize;
        let without_v = mask & (mask - 1);
        let closed_nbhd = g.adj[v] as usize | (1 << v);
        let a = alpha[without_v].max(1 + alpha[mask & !closed_nbhd]);
        alpha[mask] = a;
        let h = mask.count_ones() as usize;
        if h * best_den > best_num * a as usize {
            best_num = h;
            best_den = a as usize;
        }
    }
    Ok(Rational::new(
        BigInt::from(best_num),
        BigInt::from(best_den),
    ))
}
