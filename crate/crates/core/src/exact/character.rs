use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{denominator_lcm, Rational};
use crate::exact::root::RootOfUnity;
use crate::geometry::Lattice;
use crate::linalg;

/// Finite-order character `χ(x) = ζ_N^{⟨c, coords(x)⟩}` of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCharacter {
    pub lattice: Lattice,
    pub modulus: u64,
    pub exponents: Vec<i64>,
}

impl LatticeCharacter {
    pub fn new(lattice: Lattice, modulus: u64, exponents: Vec<i64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Validation("character modulus must be positive".into()));
        }
        if exponents.len() != lattice.rank() {
            return Err(Error::Validation(format!(
                "character has {} exponents for a lattice of rank {}",
                exponents.len(),
                lattice.rank()
            )));
        }
        let exponents = exponents.into_iter().map(|e| e.rem_euclid(modulus as i64)).collect();
        Ok(LatticeCharacter { lattice, modulus, exponents })
    }

    pub fn trivial(lattice: Lattice) -> Self {
        let r = lattice.rank();
        LatticeCharacter { lattice, modulus: 1, exponents: vec![0; r] }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<RootOfUnity> {
        let c = self.lattice.integer_coords(x)?;
        Ok(self.eval_coords(&c))
    }

    pub fn eval_coords(&self, c: &[BigInt]) -> RootOfUnity {
        let n = BigInt::from(self.modulus);
        let s = c
            .iter()
            .zip(&self.exponents)
            .fold(BigInt::zero(), |acc, (ci, &e)| acc + ci * e)
            .mod_floor(&n);
        RootOfUnity::new(self.modulus, s.to_i64().expect("reduced exponent fits"))
    }

    /// The same character seen on a sublattice of equal rank.
    pub fn restrict(&self, sub: &Lattice) -> Result<LatticeCharacter> {
        let exps = sub
            .basis()
            .iter()
            .map(|b| self.eval(b).map(|r| r.exponent_in(self.modulus) as i64))
            .collect::<Result<Vec<_>>>()?;
        LatticeCharacter::new(sub.clone(), self.modulus, exps)
    }
}

pub fn character_eval(chi: &LatticeCharacter, x: &[Rational]) -> Result<RootOfUnity> {
    chi.eval(x)
}

/// Characters `ψ_1..ψ_κ` of `big ⊇ chi.lattice` with `Σ ψ_i = κ·χ` on the small lattice and
/// `Σ ψ_i = 0` off it, where `κ = [big : chi.lattice]`.
pub fn induced_character_decompose(big: &Lattice, chi: &LatticeCharacter) -> Result<Vec<LatticeCharacter>> {
    let small = &chi.lattice;
    if !big.contains_lattice(small) {
        return Err(Error::Lattice("the super-lattice does not contain the character's lattice".into()));
    }
    let b = big.relative_matrix(small)?;
    let bq: linalg::QMat = b.iter().map(|r| r.iter().cloned().map(Rational::from_integer).collect()).collect();
    let kappa = linalg::determinant(&bq).abs();
    if kappa.is_zero() {
        return Err(Error::Lattice("infinite index".into()));
    }
    let kappa = kappa.to_integer().to_u64().ok_or_else(|| Error::Budget("index too large".into()))?;
    let binv = linalg::inverse(&bq).expect("nonsingular");
    let d = small.rank();
    let target: Vec<Rational> =
        chi.exponents.iter().map(|&e| Rational::new(BigInt::from(e), BigInt::from(chi.modulus))).collect();

    // t = B^{-1}(c/N + z), z running over a box of coset representatives of Z^d / B Z^d
    let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut z = vec![0u64; d];
    loop {
        let rhs: Vec<Rational> = target.iter().zip(&z).map(|(c, &zi)| c + Rational::from_integer(zi.into())).collect();
        let t: Vec<Rational> = linalg::mat_vec(&binv, &rhs).into_iter().map(|q| &q - q.floor()).collect();
        if seen.insert(t.clone()) {
            let m = denominator_lcm(&t);
            let exps = t.iter().map(|q| (q * &m).to_integer().to_i64().expect("small exponent")).collect();
            let modulus = m.to_u64().ok_or_else(|| Error::Budget("character modulus too large".into()))?;
            out.push(LatticeCharacter::new(big.clone(), modulus, exps)?);
            if out.len() as u64 == kappa {
                break;
            }
        }
        // odometer over [0, κ)^d
        let mut i = 0;
        loop {
            if i == d {
                return Err(Error::Internal("character enumeration exhausted".into()));
            }
            z[i] += 1;
            if z[i] < kappa {
                break;
            }
            z[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}
