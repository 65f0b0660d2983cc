use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{denominator_lcm, Rational};
use crate::linalg::{self, QMat, QVec};

/// A lattice `Z b_1 + … + Z b_d` inside `Q^m` (rank `d ≤ m`), with rational basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    ambient_dim: usize,
    #[serde(with = "crate::serde_util::qmat")]
    basis: QMat,
}

impl Lattice {
    pub fn standard(m: usize) -> Self {
        Lattice { ambient_dim: m, basis: linalg::identity(m) }
    }

    pub fn from_basis(ambient_dim: usize, basis: QMat) -> Result<Self> {
        if basis.iter().any(|b| b.len() != ambient_dim) {
            return Err(Error::Lattice("basis vector of wrong dimension".into()));
        }
        if linalg::rank(&basis) != basis.len() {
            return Err(Error::Lattice("basis vectors are linearly dependent".into()));
        }
        Ok(Lattice { ambient_dim, basis })
    }

    /// `span(vectors) ∩ Z^m`.
    pub fn integer_points_of_span(ambient_dim: usize, vectors: &[QVec]) -> Result<Self> {
        if vectors.is_empty() || linalg::rank(&vectors.to_vec()) == 0 {
            return Ok(Lattice { ambient_dim, basis: vec![] });
        }
        // rows spanning the orthogonal complement, scaled to integers
        let perp = linalg::nullspace(&vectors.to_vec(), ambient_dim);
        let perp_int: Vec<Vec<BigInt>> = perp
            .iter()
            .map(|row| {
                let l = denominator_lcm(row);
                row.iter().map(|q| (q * &l).to_integer()).collect()
            })
            .collect();
        let kernel = linalg::integer_kernel(&perp_int, ambient_dim);
        let basis = kernel
            .into_iter()
            .map(|v| v.into_iter().map(Rational::from_integer).collect())
            .collect();
        Self::from_basis(ambient_dim, basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    /// Coordinates of `x` with respect to the basis, if `x` lies in the span.
    pub fn coords(&self, x: &[Rational]) -> Option<QVec> {
        if x.len() != self.ambient_dim {
            return None;
        }
        if self.basis.is_empty() {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        linalg::solve(&linalg::transpose(&self.basis), x)
    }

    pub fn integer_coords(&self, x: &[Rational]) -> Result<Vec<BigInt>> {
        let c = self
            .coords(x)
            .ok_or_else(|| Error::NotInLattice(format!("{x:?} is outside the span")))?;
        if c.iter().any(|q| !q.is_integer()) {
            return Err(Error::NotInLattice(format!("{x:?} has fractional coordinates")));
        }
        Ok(c.into_iter().map(|q| q.to_integer()).collect())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.integer_coords(x).is_ok()
    }

    pub fn point(&self, coords: &[Rational]) -> QVec {
        let mut out = vec![Rational::zero(); self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, bi) in out.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        out
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Integer matrix whose rows are the basis of `sub` written in this lattice's basis.
    pub fn relative_matrix(&self, sub: &Lattice) -> Result<Vec<Vec<BigInt>>> {
        if sub.rank() != self.rank() {
            return Err(Error::Lattice("lattices of different rank".into()));
        }
        sub.basis.iter().map(|b| self.integer_coords(b)).collect()
    }

    /// `[self : sub]`, requiring `sub ⊆ self` of equal rank.
    pub fn index_of(&self, sub: &Lattice) -> Result<BigInt> {
        let m = self.relative_matrix(sub)?;
        let q: QMat = m.iter().map(|r| r.iter().cloned().map(Rational::from_integer).collect()).collect();
        let d = linalg::determinant(&q);
        if d.is_zero() {
            return Err(Error::Lattice("infinite index".into()));
        }
        Ok(d.abs().to_integer())
    }

    pub fn is_standard(&self) -> bool {
        self.basis.len() == self.ambient_dim && self.index_of(&Lattice::standard(self.ambient_dim)).is_ok_and(|i| i.is_one())
            && Lattice::standard(self.ambient_dim).contains_lattice(self)
    }
}
