//! Canonical forms of Moser-lattice point sets under lattice translations,
//! rotation by π/3 and a fixed reflection, plus the one-vertex extensions
//! and deletions used by the search.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::field::{is_unit_distance, MoserPoint, SqDist};
use crate::io::GraphFile;
use crate::udgraph::{build_graph, UnitGraph};

/// Integer 4×4 matrix acting on Moser coefficient vectors from the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeTransform(pub [[i64; 4]; 4]);

impl LatticeTransform {
    pub const IDENTITY: LatticeTransform =
        LatticeTransform([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

    /// Rotation by π/3, i.e. multiplication by ω₁.
    pub const ROT: LatticeTransform =
        LatticeTransform([[0, -1, 0, 0], [1, 1, 0, 0], [0, 0, 0, -1], [0, 0, 1, 1]]);

    /// Reflection in the line through 0 and (ω₁ + ω₃)/2, i.e. `z ↦ ω₁ω₃·z̄`.
    pub const REFL: LatticeTransform =
        LatticeTransform([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]);

    pub fn apply(&self, p: MoserPoint) -> MoserPoint {
        let v = p.coeffs();
        let mut out = [0i64; 4];
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = row.iter().zip(&v).map(|(m, x)| m * x).sum();
        }
        MoserPoint::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> LatticeTransform {
        (0..k).fold(Self::IDENTITY, |acc, _| acc * *self)
    }

    /// `Rotⁱ` and `Rotⁱ·Refl` for `0 ≤ i ≤ 5`.
    pub fn group() -> [LatticeTransform; 12] {
        let mut out = [Self::IDENTITY; 12];
        for i in 0..6 {
            out[i] = Self::ROT.pow(i as u32);
            out[i + 6] = Self::ROT.pow(i as u32) * Self::REFL;
        }
        out
    }
}

impl Mul for LatticeTransform {
    type Output = LatticeTransform;
    fn mul(self, o: LatticeTransform) -> LatticeTransform {
        let mut m = [[0i64; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        LatticeTransform(m)
    }
}

/// A finite point set in the Moser lattice, stored sorted and deduplicated.
///
/// Ordering and hashing use the sorted coefficient sequence, so canonized
/// sets can be used directly as keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeGraph(Vec<MoserPoint>);

impl LatticeGraph {
    pub fn new(mut points: Vec<MoserPoint>) -> Self {
        points.sort_unstable();
        points.dedup();
        LatticeGraph(points)
    }

    pub fn points(&self) -> &[MoserPoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: &MoserPoint) -> bool {
        self.0.binary_search(p).is_ok()
    }

    pub fn to_unit_graph(&self) -> Result<UnitGraph> {
        build_graph(&self.0)
    }

    pub fn to_graph_file(&self) -> GraphFile {
        GraphFile::from_points(&self.0)
    }

    fn with(&self, p: MoserPoint) -> LatticeGraph {
        let mut pts = self.0.clone();
        pts.push(p);
        LatticeGraph::new(pts)
    }
}

impl fmt::Debug for LatticeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|p| p.coeffs()))
            .finish()
    }
}

/// Translates so that each coefficient's minimum over the set is zero, then sorts.
fn normalize(points: &mut [MoserPoint]) {
    let mut mins = [i64::MAX; 4];
    for p in points.iter() {
        for (m, c) in mins.iter_mut().zip(p.coeffs()) {
            *m = (*m).min(c);
        }
    }
    let shift = MoserPoint::from_coeffs(mins);
    for p in points.iter_mut() {
        *p = *p - shift;
    }
    points.sort_unstable();
}

/// Canonical representative of `points` under the 12 rotations/reflections
/// and all lattice translations.
///
/// Each of the 12 transformed copies is translated to have componentwise
/// minimum coefficient zero; the copy with the lexicographically smallest
/// sorted coefficient sequence wins.
pub fn canonize(points: &[MoserPoint]) -> Result<LatticeGraph> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut best: Option<Vec<MoserPoint>> = None;
    let mut candidate = Vec::with_capacity(points.len());
    for t in LatticeTransform::group() {
        candidate.clear();
        candidate.extend(points.iter().map(|p| t.apply(*p)));
        normalize(&mut candidate);
        candidate.dedup();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate.clone());
        }
    }
    Ok(LatticeGraph(best.expect("twelve candidates")))
}

/// Whether `p0, p1, p2, p3` (in cyclic order) form a non-degenerate
/// parallelogram with all four sides of length 1.
pub fn is_unit_parallelogram(
    p0: MoserPoint,
    p1: MoserPoint,
    p2: MoserPoint,
    p3: MoserPoint,
) -> bool {
    let distinct = [p0, p1, p2, p3]
        .iter()
        .enumerate()
        .all(|(i, p)| [p0, p1, p2, p3][i + 1..].iter().all(|q| p != q));
    distinct
        && p0 + p2 == p1 + p3
        && is_unit_distance(p0, p1)
        && is_unit_distance(p1, p2)
        && is_unit_distance(p2, p3)
        && is_unit_distance(p3, p0)
        // opposite vertices coinciding would make the figure a segment
        && !SqDist::between(p0, p2).is_zero()
}

/// Candidate points for a one-vertex extension of `x`, not yet canonized.
pub fn extension_candidates(x: &LatticeGraph) -> BTreeSet<MoserPoint> {
    let pts = x.points();
    let mut out = BTreeSet::new();
    // (a) unit steps along ±1, ±ω₁, ±ω₃, ±ω₁ω₃
    for &p in pts {
        for u in MoserPoint::BASIS_UNITS {
            out.insert(p + u);
        }
    }
    // (b) apex of a unit equilateral triangle on a unit edge
    for &p in pts {
        for &q in pts {
            if p != q && is_unit_distance(p, q) {
                let v = q - p;
                out.insert(p + v.mul_omega1());
                out.insert(p + v.mul_omega1_conj());
            }
        }
    }
    // (c) fourth vertex of a unit rhombus: x = xi + xj − xk, xk opposite x
    for (i, &pi) in pts.iter().enumerate() {
        for &pj in &pts[i + 1..] {
            for &pk in pts {
                if pk == pi || pk == pj {
                    continue;
                }
                let cand = pi + pj - pk;
                if is_unit_parallelogram(pk, pi, cand, pj) {
                    out.insert(cand);
                }
            }
        }
    }
    out.retain(|p| !x.contains(p));
    out
}

/// Canonized one-vertex extensions of `x`.
pub fn children(x: &LatticeGraph) -> BTreeSet<LatticeGraph> {
    extension_candidates(x)
        .into_iter()
        .map(|p| canonize(x.with(p).points()).expect("nonempty"))
        .collect()
}

/// Canonized one-vertex deletions of `x`.
pub fn parents(x: &LatticeGraph) -> Result<BTreeSet<LatticeGraph>> {
    if x.len() < 2 {
        return Err(Error::TooFewVertices {
            needed: 2,
            got: x.len(),
        });
    }
    let pts = x.points();
    Ok((0..pts.len())
        .map(|skip| {
            let rest: Vec<MoserPoint> = pts
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, p)| *p)
                .collect();
            canonize(&rest).expect("nonempty")
        })
        .collect())
}
