//! Fractional colourings from translates of an independent set of a
//! discrete lattice cube.
//!
//! For the cube `A = [−N, N]⁴` of Moser coefficients and a maximum
//! independent set `B ⊆ A`, every translate `B + t` meets `G` in an
//! independent set `M_t`. Weighting each nonempty `M_t` by `1/|B|` covers
//! every vertex exactly once, with total weight `|G − B| / |B|`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{max_independent_set, UnitGraph, VertexSet, WeightFunction};
use crate::error::{Error, Result};
use crate::field::{is_unit_distance, MoserPoint, Rational};

/// Largest cube half-width supported by the exact independent-set search.
pub const DEFAULT_CUBE_CAP: i64 = 1;

#[derive(Debug, Clone)]
pub struct CubeColouring {
    pub half_width: i64,
    /// Largest absolute Moser coefficient among the vertices of `G`.
    pub max_coefficient: i64,
    pub cube: Vec<MoserPoint>,
    pub independent_set: Vec<MoserPoint>,
    /// Number of translates `t` with `M_t` nonempty, i.e. `|G − B|`.
    pub translates: usize,
    pub gamma: WeightFunction,
    pub weight: Rational,
}

impl CubeColouring {
    /// The a priori bound `(2N + 2k + 1)⁴ / |B|` on the weight.
    pub fn weight_bound(&self) -> Rational {
        let side = 2 * self.half_width + 2 * self.max_coefficient + 1;
        Rational::new(
            BigInt::from(side.pow(4)),
            BigInt::from(self.independent_set.len()),
        )
    }
}

pub fn cube_colouring(g: &UnitGraph, half_width: i64, cap: i64) -> Result<CubeColouring> {
    if g.is_empty() {
        return Err(Error::EmptySet);
    }
    if half_width < 0 || half_width > cap {
        return Err(Error::CapExceeded {
            what: "cube half-width",
            got: half_width.max(0) as usize,
            cap: cap.max(0) as usize,
        });
    }
    let range = -half_width..=half_width;
    let mut cube = Vec::new();
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    cube.push(MoserPoint::new(a, b, c, d));
                }
            }
        }
    }
    if cube.len() > 128 {
        return Err(Error::CapExceeded {
            what: "cube points",
            got: cube.len(),
            cap: 128,
        });
    }
    let adj: Vec<u128> = cube
        .iter()
        .map(|p| {
            cube.iter()
                .enumerate()
                .filter(|(_, q)| is_unit_distance(*p, **q))
                .fold(0u128, |m, (k, _)| m | (1u128 << k))
        })
        .collect();
    let best = max_independent_set(&adj);
    let independent_set: Vec<MoserPoint> = (0..cube.len())
        .filter(|&k| best >> k & 1 == 1)
        .map(|k| cube[k])
        .collect();

    // M_t = {x ∈ G : x − t ∈ B}, keyed by t ∈ G − B.
    let mut members: BTreeMap<MoserPoint, VertexSet> = BTreeMap::new();
    for (i, &x) in g.vertices().iter().enumerate() {
        for &b in &independent_set {
            let t = x - b;
            let e = members.entry(t).or_default();
            *e = e.with(i);
        }
    }
    let b_size = BigInt::from(independent_set.len());
    let mut gamma = WeightFunction::new();
    for s in members.values() {
        gamma.add(*s, &Rational::new(BigInt::from(1), b_size.clone()));
    }
    gamma.regular = true;
    let translates = members.len();
    let max_coefficient = g
        .vertices()
        .iter()
        .flat_map(|p| p.coeffs())
        .map(i64::abs)
        .max()
        .unwrap_or(0);
    Ok(CubeColouring {
        half_width,
        max_coefficient,
        cube,
        independent_set,
        translates,
        weight: Rational::new(BigInt::from(translates), b_size),
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;
    use crate::udgraph::build_graph;
    use crate::udgraph::tests::triangle;

    #[test]
    fn single_vertex_trivial_cube() {
        let g = build_graph(&[MoserPoint::ZERO]).unwrap();
        let c = cube_colouring(&g, 0, DEFAULT_CUBE_CAP).unwrap();
        assert_eq!(c.independent_set, vec![MoserPoint::ZERO]);
        assert_eq!(c.gamma.get(VertexSet::singleton(0)), rat_int(1));
        assert_eq!(c.weight, rat_int(1));
    }

    #[test]
    fn triangle_cube_matches_set_arithmetic() {
        let g = triangle();
        let c = cube_colouring(&g, 1, DEFAULT_CUBE_CAP).unwrap();
        assert_eq!(c.cube.len(), 81);
        // Independent oracle: scan every t in a box large enough to contain
        // G − B and count those whose translate of B meets G.
        let bset: std::collections::HashSet<MoserPoint> =
            c.independent_set.iter().copied().collect();
        let mut hits = 0;
        for a in -3..=3 {
            for b in -3..=3 {
                for cc in -3..=3 {
                    for d in -3..=3 {
                        let t = MoserPoint::new(a, b, cc, d);
                        if g.vertices().iter().any(|&x| bset.contains(&(x - t))) {
                            hits += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(c.translates, hits);
        assert_eq!(
            c.weight,
            Rational::new(BigInt::from(hits), BigInt::from(bset.len()))
        );
        assert!(c.gamma.is_fractional_colouring(&g));
        assert_eq!(c.gamma.total(), c.weight);
        assert!(c.weight <= c.weight_bound());
    }

    #[test]
    fn cap_enforced() {
        let g = triangle();
        assert!(matches!(
            cube_colouring(&g, 2, DEFAULT_CUBE_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }
}
