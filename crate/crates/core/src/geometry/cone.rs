use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{dot, ints_to_rationals, primitive_ray, to_rationals, Rational};
use crate::linalg::{self, QMat, QVec};

fn normalize_ray(v: &[Rational]) -> Result<QVec> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::Cone("zero generator".into()));
    }
    Ok(to_rationals(&primitive_ray(v)))
}

/// Subsets of `0..n` of size `k`, in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Coordinates on the linear span of a vector family.
#[derive(Clone, Debug)]
pub(crate) struct SpanFrame {
    basis: QMat,
    ambient: usize,
}

impl SpanFrame {
    pub(crate) fn new(vectors: &[QVec], ambient: usize) -> Self {
        let mut basis: QMat = Vec::new();
        for v in vectors {
            let mut t = basis.clone();
            t.push(v.clone());
            if linalg::rank(&t) > basis.len() {
                basis = t;
            }
        }
        SpanFrame { basis, ambient }
    }

    pub(crate) fn dim(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn coords(&self, x: &[Rational]) -> Option<QVec> {
        if self.basis.is_empty() {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        if x.len() != self.ambient {
            return None;
        }
        linalg::solve(&linalg::transpose(&self.basis), x)
    }
}

/// Inequality description `{h ≥ 0}` of a cone inside its span, in span coordinates.
#[derive(Clone, Debug)]
pub(crate) struct HRep {
    pub(crate) frame: SpanFrame,
    pub(crate) normals: Vec<QVec>,
    pub(crate) gens: Vec<QVec>,
}

impl HRep {
    pub(crate) fn new(generators: &[QVec], ambient: usize) -> Self {
        let frame = SpanFrame::new(generators, ambient);
        let d = frame.dim();
        let gens: Vec<QVec> = generators.iter().map(|g| frame.coords(g).expect("in span")).collect();
        let mut normals: Vec<QVec> = Vec::new();
        for sub in subsets(gens.len(), d.saturating_sub(1)) {
            if d == 0 {
                break;
            }
            let rows: QMat = sub.iter().map(|&i| gens[i].clone()).collect();
            if linalg::rank(&rows) != d - 1 {
                continue;
            }
            let ns = linalg::nullspace(&rows, d);
            let mut h = to_rationals(&primitive_ray(&ns[0]));
            let vals: Vec<Rational> = gens.iter().map(|g| dot(&h, g)).collect();
            let pos = vals.iter().any(|v| v.is_positive());
            let neg = vals.iter().any(|v| v.is_negative());
            if pos && neg {
                continue;
            }
            if neg {
                h = h.into_iter().map(|x| -x).collect();
            }
            if !normals.contains(&h) {
                normals.push(h);
            }
        }
        HRep { frame, normals, gens }
    }

    fn is_pointed(&self) -> bool {
        let d = self.frame.dim();
        d > 0 && linalg::rank(&self.normals) == d
    }

    pub(crate) fn contains(&self, x: &[Rational]) -> bool {
        self.frame
            .coords(x)
            .is_some_and(|c| self.normals.iter().all(|h| !dot(h, &c).is_negative()))
    }

    pub(crate) fn relint_contains(&self, x: &[Rational]) -> bool {
        self.frame
            .coords(x)
            .is_some_and(|c| self.normals.iter().all(|h| dot(h, &c).is_positive()))
    }

    /// Indices of generators spanning extreme rays (first representative of each).
    fn extreme(&self) -> Vec<usize> {
        let d = self.frame.dim();
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            let tight: QMat = self.normals.iter().filter(|h| dot(h, g).is_zero()).cloned().collect();
            let is_extreme = if d == 1 { true } else { linalg::rank(&tight) == d - 1 };
            if is_extreme && !out.iter().any(|&j: &usize| self.gens[j] == *g) {
                out.push(i);
            }
        }
        out
    }
}

/// Rational convex cone `Σ R₊ v_i`, generators stored as primitive integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    #[serde(with = "crate::serde_util::qmat")]
    generators: QMat,
}

impl Cone {
    pub fn new(generators: Vec<QVec>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::Cone("a cone needs at least one generator".into()));
        };
        let m = first.len();
        let mut gens: QMat = Vec::new();
        for g in &generators {
            if g.len() != m {
                return Err(Error::Cone("generators of different dimensions".into()));
            }
            let r = normalize_ray(g)?;
            if !gens.contains(&r) {
                gens.push(r);
            }
        }
        Ok(Cone { generators: gens })
    }

    pub fn from_ints(generators: &[Vec<i64>]) -> Result<Self> {
        Self::new(generators.iter().map(|g| ints_to_rationals(g)).collect())
    }

    pub fn generators(&self) -> &QMat {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators[0].len()
    }

    pub fn dim(&self) -> usize {
        linalg::rank(&self.generators)
    }

    pub(crate) fn hrep(&self) -> HRep {
        HRep::new(&self.generators, self.ambient_dim())
    }

    /// No line through the origin lies in the cone.
    pub fn is_pointed(&self) -> bool {
        self.hrep().is_pointed()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.hrep().contains(x)
    }

    /// Membership in the relative interior `C⁰`.
    pub fn interior_contains(&self, x: &[Rational]) -> bool {
        self.hrep().relint_contains(x)
    }

    /// Same cone with every generator not spanning an extreme ray removed.
    pub fn drop_redundant(&self) -> Result<Cone> {
        let h = self.hrep();
        if !h.is_pointed() {
            return Err(Error::Cone("cone contains a line".into()));
        }
        Ok(Cone { generators: h.extreme().into_iter().map(|i| self.generators[i].clone()).collect() })
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }
}

/// Cone on linearly independent generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialCone {
    #[serde(with = "crate::serde_util::qmat")]
    generators: QMat,
}

impl SimplicialCone {
    /// Generators are rescaled to primitive integer vectors (order kept).
    pub fn new(generators: Vec<QVec>) -> Result<Self> {
        let gens = generators.iter().map(|g| normalize_ray(g)).collect::<Result<QMat>>()?;
        if let Some(m) = gens.first().map(Vec::len) {
            if gens.iter().any(|g| g.len() != m) {
                return Err(Error::Cone("generators of different dimensions".into()));
            }
        }
        if linalg::rank(&gens) != gens.len() {
            return Err(Error::Cone("generators are linearly dependent".into()));
        }
        Ok(SimplicialCone { generators: gens })
    }

    pub fn from_ints(generators: &[Vec<i64>]) -> Result<Self> {
        Self::new(generators.iter().map(|g| ints_to_rationals(g)).collect())
    }

    /// Keeps the given vectors as they are (they must be independent and nonzero).
    pub(crate) fn new_unnormalized(generators: QMat) -> Self {
        debug_assert_eq!(linalg::rank(&generators), generators.len());
        SimplicialCone { generators }
    }

    /// Keeps the given vectors unscaled, e.g. for rescaled flags. Panics on dependent input.
    pub fn new_unnormalized_pub(generators: QMat) -> Self {
        assert_eq!(linalg::rank(&generators), generators.len(), "dependent generators");
        SimplicialCone { generators }
    }

    pub fn generators(&self) -> &QMat {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.first().map_or(0, Vec::len)
    }

    pub fn to_cone(&self) -> Cone {
        Cone { generators: self.generators.clone() }
    }

    /// Coefficients of `x` on the generators, if `x` lies in the span.
    pub fn coords(&self, x: &[Rational]) -> Option<QVec> {
        if self.generators.is_empty() {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        linalg::solve(&linalg::transpose(&self.generators), x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.coords(x).is_some_and(|c| c.iter().all(|t| !t.is_negative()))
    }

    pub fn relint_contains(&self, x: &[Rational]) -> bool {
        self.coords(x).is_some_and(|c| c.iter().all(|t| t.is_positive()))
    }

    /// Functionals `h_j` in the span with `h_j(g_l) = δ_{jl}`.
    pub fn dual_basis(&self) -> QMat {
        let g = &self.generators;
        let gram = linalg::mat_mul(g, &linalg::transpose(g));
        let c = linalg::inverse(&gram).expect("independent generators");
        linalg::mat_mul(&c, g)
    }

    pub fn face(&self, indices: &[usize]) -> SimplicialCone {
        SimplicialCone { generators: indices.iter().map(|&i| self.generators[i].clone()).collect() }
    }

    pub fn sum_of_generators(&self) -> QVec {
        let mut s = vec![Rational::zero(); self.ambient_dim()];
        for g in &self.generators {
            for (a, b) in s.iter_mut().zip(g) {
                *a += b;
            }
        }
        s
    }

    fn index_of(&self, v: &[Rational]) -> Option<usize> {
        let r = normalize_ray(v).ok()?;
        self.generators.iter().position(|g| *g == r)
    }
}

/// Face spanned by the generators not in `sigma`; `sigma` must consist of generators of `delta`.
pub fn dual_face(delta: &SimplicialCone, sigma: &[QVec]) -> Result<Vec<QVec>> {
    let mut idx = Vec::new();
    for v in sigma {
        idx.push(delta.index_of(v).ok_or_else(|| Error::NotAFace(format!("{v:?}")))?);
    }
    Ok((0..delta.dim()).filter(|i| !idx.contains(i)).map(|i| delta.generators[i].clone()).collect())
}

/// Generators of `σ₁ * σ₂`.
pub fn linear_join(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}
