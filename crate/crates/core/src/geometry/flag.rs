use serde::{Deserialize, Serialize};

use super::cone::SimplicialCone;
use crate::linalg::{QMat, QVec};

/// Maximal chain of faces `Δ = Δ^(0) ⊃ … ⊃ Δ^(n−1)`, encoded by ordering the generators so
/// that `Δ^(i)` is spanned by `g_{i+1}, …, g_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub cone: SimplicialCone,
}

impl Flag {
    /// Flag whose chain drops the generators in the given order.
    pub fn new(cone: &SimplicialCone, order: &[usize]) -> Self {
        Flag { cone: cone.face(order) }
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// Generators of `Δ^(i)`.
    pub fn level(&self, i: usize) -> &[QVec] {
        &self.cone.generators()[i..]
    }

    /// The ray spanning `(Δ^(i+1))*` inside `Δ^(i)`.
    pub fn dual_ray(&self, i: usize) -> &QVec {
        &self.cone.generators()[i]
    }
}

/// Rows `η_1..η_n` in ambient coordinates: `Δ = {η ≥ 0}` and `Δ^(i) = Δ ∩ {η_1 = … = η_i = 0}`.
pub fn standard_coordinates(flag: &Flag) -> QMat {
    flag.cone.dual_basis()
}

/// Face `{η_j = 0 : j ∉ I}` of a flagged cone; `indices` holds `I` (0-based, increasing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularFace {
    pub indices: Vec<usize>,
    pub generators: QMat,
}

/// The irregular face `ir(F) = {η_n = 0}` and all faces not contained in it, i.e. those whose
/// index set contains `n`.
pub fn regular_faces(flag: &Flag) -> (QMat, Vec<RegularFace>) {
    let n = flag.dim();
    let gens = flag.cone.generators();
    let irregular = gens[..n - 1].to_vec();
    let mut out = Vec::new();
    for mask in 0u64..(1 << (n - 1)) {
        let mut indices: Vec<usize> = (0..n - 1).filter(|i| mask >> i & 1 == 1).collect();
        indices.push(n - 1);
        let generators = indices.iter().map(|&i| gens[i].clone()).collect();
        out.push(RegularFace { indices, generators });
    }
    out.sort_by(|a, b| b.indices.len().cmp(&a.indices.len()).then(a.indices.cmp(&b.indices)));
    (irregular, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{dot, ints_to_rationals, rat};

    #[test]
    fn coordinates_follow_the_flag() {
        let d = SimplicialCone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
        let eta = standard_coordinates(&Flag::new(&d, &[0, 1]));
        assert_eq!(eta, vec![ints_to_rationals(&[1, 0]), ints_to_rationals(&[0, 1])]);
        let eta = standard_coordinates(&Flag::new(&d, &[1, 0]));
        assert_eq!(eta, vec![ints_to_rationals(&[0, 1]), ints_to_rationals(&[1, 0])]);

        let d = SimplicialCone::from_ints(&[vec![1, 0], vec![1, 2]]).unwrap();
        let f = Flag::new(&d, &[0, 1]);
        let eta = standard_coordinates(&f);
        // Δ^(1) = ray(1,2) is cut out by η_1 = 0
        assert_eq!(dot(&eta[0], &ints_to_rationals(&[1, 2])), rat(0));
        for (a, b) in [(3, 1), (2, 3), (1, 2), (1, 3), (0, 1)] {
            let x = ints_to_rationals(&[a, b]);
            let inside = eta.iter().all(|h| dot(h, &x) >= rat(0));
            assert_eq!(inside, d.contains(&x));
        }
    }

    #[test]
    fn regular_face_counts() {
        let d3 = SimplicialCone::from_ints(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let (ir, faces) = regular_faces(&Flag::new(&d3, &[0, 1, 2]));
        assert_eq!(ir.len(), 2);
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.indices.contains(&2)));
        let d1 = SimplicialCone::from_ints(&[vec![1]]).unwrap();
        assert_eq!(regular_faces(&Flag::new(&d1, &[0])).1.len(), 1);
        let d2 = SimplicialCone::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap();
        let idx: Vec<_> = regular_faces(&Flag::new(&d2, &[0, 1])).1.into_iter().map(|f| f.indices).collect();
        assert_eq!(idx, vec![vec![0, 1], vec![1]]);
    }
}
