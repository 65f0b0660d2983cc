use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::cone::SimplicialCone;
use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::exact::rational::{primitive_ray, to_rationals, Rational};
use crate::linalg::{self, QMat};

/// `L̃ ⊇ L` whose points in the closed cone form the free semigroup on `generators`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeSuperlattice {
    pub lattice: Lattice,
    #[serde(with = "crate::serde_util::qmat")]
    pub generators: QMat,
}

/// Rescales the primitive ray generators `p_j` of `Δ` in `L` to `p_j / c_j`, where `c_j` clears
/// the denominators of the `j`-th coordinate of every basis vector of `L` on the `p`-basis.
pub fn free_superlattice(delta: &SimplicialCone, l: &Lattice) -> Result<FreeSuperlattice> {
    if l.rank() != delta.dim() {
        return Err(Error::Lattice("lattice rank differs from the cone dimension".into()));
    }
    let prim: QMat = delta
        .generators()
        .iter()
        .map(|g| {
            let c = l.coords(g).ok_or_else(|| Error::Lattice("generator outside the lattice span".into()))?;
            Ok(l.point(&to_rationals(&primitive_ray(&c))))
        })
        .collect::<Result<_>>()?;
    let pt = linalg::transpose(&prim);
    let mut c = vec![BigInt::one(); prim.len()];
    for b in l.basis() {
        let coords = linalg::solve(&pt, b).ok_or_else(|| Error::Internal("basis outside the cone span".into()))?;
        for (cj, q) in c.iter_mut().zip(&coords) {
            *cj = cj.lcm(q.denom());
        }
    }
    let generators: QMat = prim
        .iter()
        .zip(&c)
        .map(|(p, cj)| p.iter().map(|x| x / Rational::from_integer(cj.clone())).collect())
        .collect();
    let lattice = Lattice::from_basis(l.ambient_dim(), generators.clone())?;
    Ok(FreeSuperlattice { lattice, generators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{ints_to_rationals, rat, ratio};

    #[test]
    fn examples() {
        let q = SimplicialCone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
        let f = free_superlattice(&q, &Lattice::standard(2)).unwrap();
        assert_eq!(f.generators, vec![ints_to_rationals(&[1, 0]), ints_to_rationals(&[0, 1])]);

        let d = SimplicialCone::from_ints(&[vec![1, 0], vec![1, 2]]).unwrap();
        let f = free_superlattice(&d, &Lattice::standard(2)).unwrap();
        assert_eq!(f.generators, vec![vec![ratio(1, 2), rat(0)], vec![ratio(1, 2), rat(1)]]);
        assert!(f.lattice.contains_lattice(&Lattice::standard(2)));
        assert_eq!(f.lattice.index_of(&Lattice::standard(2)).unwrap(), BigInt::from(2));

        let r = SimplicialCone::from_ints(&[vec![3, 1]]).unwrap();
        let l = Lattice::integer_points_of_span(2, r.generators()).unwrap();
        let f = free_superlattice(&r, &l).unwrap();
        assert_eq!(f.generators, vec![ints_to_rationals(&[3, 1])]);
    }

    #[test]
    fn semigroup_is_free_in_a_box() {
        let d = SimplicialCone::from_ints(&[vec![1, 0], vec![1, 3]]).unwrap();
        let f = free_superlattice(&d, &Lattice::standard(2)).unwrap();
        // every point of L̃ ∩ Δ in the box has nonnegative integer coordinates on the generators
        for a in -12..=12 {
            for b in -12..=12 {
                let x = vec![ratio(a, 6), ratio(b, 6)];
                if f.lattice.contains(&x) && d.contains(&x) {
                    let c = linalg::solve(&linalg::transpose(&f.generators), &x).unwrap();
                    assert!(c.iter().all(|t| t.is_integer() && *t >= rat(0)));
                }
            }
        }
    }
}
