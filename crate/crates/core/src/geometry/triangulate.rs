use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::cone::{subsets, Cone, HRep, SimplicialCone};
use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::exact::rational::{dot, Rational};
use crate::linalg::{self, QMat, QVec};

type Simplex = Vec<usize>;

fn facet_normal(pts: &[QVec], simplex: &Simplex, omit: usize, d: usize) -> QVec {
    let rows: QMat = simplex.iter().filter(|&&i| i != omit).map(|&i| pts[i].clone()).collect();
    let h = linalg::nullspace(&rows, d).swap_remove(0);
    if dot(&h, &pts[omit]).is_negative() {
        h.into_iter().map(|x| -x).collect()
    } else {
        h
    }
}

/// Placing triangulation of points that span `Q^d`, returning index simplices.
fn placing(pts: &[QVec], d: usize) -> Vec<Simplex> {
    let mut initial: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        let mut rows: QMat = initial.iter().map(|&j| pts[j].clone()).collect();
        rows.push(pts[i].clone());
        if linalg::rank(&rows) > initial.len() {
            initial.push(i);
        }
        if initial.len() == d {
            break;
        }
    }
    let mut simplices = vec![initial.clone()];
    for r in 0..pts.len() {
        if initial.contains(&r) {
            continue;
        }
        let counts = facet_counts(&simplices);
        let mut added = Vec::new();
        for s in &simplices {
            for &o in s {
                let facet: Simplex = s.iter().copied().filter(|&i| i != o).collect();
                if counts[&facet] != 1 {
                    continue;
                }
                let h = facet_normal(pts, s, o, d);
                if dot(&h, &pts[r]).is_negative() {
                    let mut ns = facet;
                    ns.push(r);
                    ns.sort_unstable();
                    added.push(ns);
                }
            }
        }
        simplices.extend(added);
    }
    simplices.sort();
    simplices
}

fn facet_counts(simplices: &[Simplex]) -> BTreeMap<Simplex, usize> {
    let mut counts = BTreeMap::new();
    for s in simplices {
        for &o in s {
            let f: Simplex = s.iter().copied().filter(|&i| i != o).collect();
            *counts.entry(f).or_insert(0) += 1;
        }
    }
    counts
}

/// Simplicial cones covering `C` with disjoint interiors, using only extreme rays of `C`
/// (redundant generators are dropped first).
pub fn triangulate(c: &Cone) -> Result<Vec<SimplicialCone>> {
    Ok(triangulate_indexed(c)?.1.into_iter().map(|s| s.0).collect())
}

#[allow(clippy::type_complexity)]
fn triangulate_indexed(c: &Cone) -> Result<(QMat, Vec<(SimplicialCone, Simplex)>)> {
    let reduced = c.drop_redundant()?;
    let rays = reduced.generators().clone();
    let h = HRep::new(&rays, c.ambient_dim());
    let d = h.frame.dim();
    if d == 0 {
        return Err(Error::Cone("the zero cone has no triangulation".into()));
    }
    let simplices = placing(&h.gens, d);
    let out = simplices
        .into_iter()
        .map(|s| (SimplicialCone::new_unnormalized(s.iter().map(|&i| rays[i].clone()).collect()), s))
        .collect();
    Ok((rays, out))
}

/// Relatively open simplicial cone of the decomposition of `C⁰` with the lattice of its span.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenPiece {
    pub cone: SimplicialCone,
    pub lattice: Lattice,
}

impl OpenPiece {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.cone.relint_contains(x)
    }
}

/// `C⁰` as a disjoint union of relatively open simplicial cones: the faces of the
/// triangulation that are not contained in a boundary facet.
pub fn open_simplicial_decomposition(c: &Cone) -> Result<Vec<OpenPiece>> {
    let (rays, tri) = triangulate_indexed(c)?;
    let simplices: Vec<Simplex> = tri.into_iter().map(|(_, s)| s).collect();
    let boundary: Vec<BTreeSet<usize>> = facet_counts(&simplices)
        .into_iter()
        .filter(|(_, n)| *n == 1)
        .map(|(f, _)| f.into_iter().collect())
        .collect();
    let mut faces: BTreeSet<(std::cmp::Reverse<usize>, Simplex)> = BTreeSet::new();
    for s in &simplices {
        for k in 1..=s.len() {
            for sub in subsets(s.len(), k) {
                let f: Simplex = sub.iter().map(|&i| s[i]).collect();
                let fs: BTreeSet<usize> = f.iter().copied().collect();
                if !boundary.iter().any(|b| fs.is_subset(b)) {
                    faces.insert((std::cmp::Reverse(f.len()), f));
                }
            }
        }
    }
    let m = c.ambient_dim();
    faces
        .into_iter()
        .map(|(_, f)| {
            let gens: QMat = f.iter().map(|&i| rays[i].clone()).collect();
            let lattice = Lattice::integer_points_of_span(m, &gens)?;
            Ok(OpenPiece { cone: SimplicialCone::new_unnormalized(gens), lattice })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{ints_to_rationals, ratio};
    use rand::{Rng, SeedableRng};

    fn square() -> Cone {
        Cone::from_ints(&[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap()
    }

    #[test]
    fn simplicial_input_is_kept() {
        let c = Cone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
        let t = triangulate(&c).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].generators(), c.generators());
        let p = open_simplicial_decomposition(&c).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].lattice.is_standard());
    }

    #[test]
    fn interior_generator_is_dropped() {
        let c = Cone::from_ints(&[vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(triangulate(&c).unwrap().len(), 1);
    }

    #[test]
    fn square_base() {
        let t = triangulate(&square()).unwrap();
        assert_eq!(t.len(), 2);
        let p = open_simplicial_decomposition(&square()).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.iter().filter(|x| x.cone.dim() == 2).count(), 1);
    }

    #[test]
    fn half_line() {
        let c = Cone::from_ints(&[vec![1]]).unwrap();
        let p = open_simplicial_decomposition(&c).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].lattice.is_standard());
    }

    #[test]
    fn partition_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let cones = [
            square(),
            Cone::from_ints(&[vec![1, 0], vec![1, 2], vec![1, 1], vec![2, 1]]).unwrap(),
            Cone::from_ints(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1], vec![2, 1, 1]]).unwrap(),
        ];
        for c in &cones {
            let pieces = open_simplicial_decomposition(c).unwrap();
            let m = c.ambient_dim();
            let h = c.hrep();
            for trial in 0..10_000 {
                // mix random points with points on the coarse grid, which hit lower faces
                let x: QVec = if trial % 2 == 0 {
                    (0..m).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect()
                } else {
                    ints_to_rationals(&(0..m).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>())
                };
                let hits = pieces.iter().filter(|p| p.contains(&x)).count();
                assert_eq!(hits, usize::from(h.relint_contains(&x)), "{x:?}");
            }
        }
    }
}
