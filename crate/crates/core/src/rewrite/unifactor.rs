//! Rewriting products of factors until each level carries at most one factor.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::term::{Factor, Mono, TProd, TTerm, UTerm};
use crate::error::{Error, Result};
use crate::exact::rational::binomial;
use crate::exact::{CycloNumber, RootOfUnity};
use crate::lin::Lin;

fn int(b: BigInt) -> CycloNumber {
    CycloNumber::from_rational(crate::Rational::from_integer(b))
}

fn mul_into(prod: &mut TProd, m: Mono, a: u32) {
    if a > 0 {
        *prod.entry(m).or_insert(0) += a;
    }
}

/// `T(e w^c)^a` for leading exponent `c > 1`. As `Π_{b^c = e} (1 − b w) = 1 − e w^c`, the product
/// `Π_b (1 + T(b w)) − 1` equals `T(e w^c)` and also the average `(1/c) Σ_b T(b w)`; the
/// average is expanded, with `c` terms instead of `2^c − 1`.
pub fn root_split(m: &Mono, a: u32) -> Result<Vec<(TProd, CycloNumber)>> {
    let c = m.leading_exp();
    if c <= 1 {
        return Ok(vec![(TProd::from([(m.clone(), a)]), CycloNumber::one())]);
    }
    if m.exps.iter().any(|&x| x % c != 0) {
        return Err(Error::precondition("root_split", format!("{m}: exponents not divisible by {c}")));
    }
    let w: Vec<u32> = m.exps.iter().map(|&x| x / c).collect();
    let roots = m.root.nth_roots(c as u64);
    // multinomial expansion of (Σ_b T_b)^a
    let mut poly: BTreeMap<Vec<u32>, BigInt> = BTreeMap::from([(vec![0; c as usize], BigInt::from(1))]);
    for _ in 0..a {
        let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e, v) in &poly {
            for i in 0..c as usize {
                let mut k = e.clone();
                k[i] += 1;
                *next.entry(k).or_default() += v;
            }
        }
        poly = next;
    }
    let scale = crate::Rational::new(BigInt::from(1), BigInt::from(c).pow(a));
    Ok(poly
        .into_iter()
        .map(|(e, v)| {
            let mut p = TProd::new();
            for (r, k) in roots.iter().zip(e) {
                mul_into(&mut p, Mono::new(*r, w.clone()), k);
            }
            (p, int(v).scale(&scale))
        })
        .collect())
}

/// `T_1^a T_2^b` with `T_1`, `T_2` on the same level and leading exponent 1:
/// `T_1 T_2 = r T_1 + (−r − 1) T_2`, `r = T(γ_2/γ_1)`, once oriented so `γ_2/γ_1` is a monomial.
pub fn partial_fraction_pair(m1: &Mono, a: u32, m2: &Mono, b: u32) -> Result<Vec<(TProd, CycloNumber)>> {
    let rule = "partial_fraction_pair";
    if m1 == m2 {
        return Err(Error::precondition(rule, format!("identical factors {m1}")));
    }
    let (l1, l2) = (m1.leading(), m2.leading());
    if l1.is_none() || l1 != l2 || m1.leading_exp() != 1 || m2.leading_exp() != 1 {
        return Err(Error::precondition(rule, format!("{m1} and {m2} do not share a level")));
    }
    let d: Vec<i64> = m2.exps.iter().zip(&m1.exps).map(|(&x, &y)| x as i64 - y as i64).collect();
    let (m1, a, m2, b, d) = if d.iter().all(|&x| x >= 0) {
        (m1, a, m2, b, d)
    } else if d.iter().all(|&x| x <= 0) {
        (m2, b, m1, a, d.iter().map(|x| -x).collect())
    } else {
        return Err(Error::precondition(rule, format!("{m1} and {m2} are not comparable")));
    };
    let rho = Mono::new(m2.root.div(&m1.root), d.iter().map(|&x| x as u32).collect());
    let mut base1 = TProd::new();
    mul_into(&mut base1, m1.clone(), a);
    mul_into(&mut base1, m2.clone(), b - 1);
    let mut base2 = TProd::new();
    mul_into(&mut base2, m1.clone(), a - 1);
    mul_into(&mut base2, m2.clone(), b);
    if rho.is_constant() {
        // r = ρ/(1 − ρ) is a number, ρ ≠ 1
        let p = CycloNumber::from_root(&rho.root);
        let r = &p * &(&CycloNumber::one() - &p).inv()?;
        let s = -(&r + &CycloNumber::one());
        return Ok(vec![(base1, r), (base2, s)]);
    }
    let mut t1 = base1;
    mul_into(&mut t1, rho.clone(), 1);
    let mut t2 = base2.clone();
    mul_into(&mut t2, rho, 1);
    Ok(vec![(t1, CycloNumber::one()), (t2, CycloNumber::from_int(-1)), (base2, CycloNumber::from_int(-1))])
}

enum Step {
    Done,
    Replace(&'static str, Vec<(TProd, CycloNumber)>),
}

/// One rewrite applied to a whole term of the work list.
#[derive(Clone, Debug, PartialEq)]
pub struct UnifactorStep {
    pub rule: &'static str,
    pub input: TTerm,
    pub outputs: Vec<(TTerm, CycloNumber)>,
}

fn step(prod: &TProd) -> Result<Step> {
    for (m, &a) in prod {
        if m.is_constant() {
            if m.root.is_one() {
                return Err(Error::Divergent("constant factor T(1)".into()));
            }
            let p = CycloNumber::from_root(&m.root);
            let r = (&p * &(&CycloNumber::one() - &p).inv()?).pow(a);
            let mut rest = prod.clone();
            rest.remove(m);
            return Ok(Step::Replace("constant_factor", vec![(rest, r)]));
        }
        if m.leading_exp() > 1 {
            let mut out = Vec::new();
            let mut rest = prod.clone();
            rest.remove(m);
            for (p, c) in root_split(m, a)? {
                let mut q = rest.clone();
                for (k, v) in p {
                    mul_into(&mut q, k, v);
                }
                out.push((q, c));
            }
            return Ok(Step::Replace("root_split", out));
        }
    }
    let items: Vec<(&Mono, &u32)> = prod.iter().collect();
    for w in items.windows(2) {
        let (m1, &a) = w[0];
        let (m2, &b) = w[1];
        if m1.leading() == m2.leading() {
            let mut rest = prod.clone();
            rest.remove(m1);
            rest.remove(m2);
            let mut out = Vec::new();
            for (p, c) in partial_fraction_pair(m1, a, m2, b)? {
                let mut q = rest.clone();
                for (k, v) in p {
                    mul_into(&mut q, k, v);
                }
                out.push((q, c));
            }
            return Ok(Step::Replace("partial_fraction_pair", out));
        }
    }
    Ok(Step::Done)
}

/// Uni-factorizes a combination in the `T` convention.
pub fn uni_factorize_t(input: &Lin<TTerm>) -> Result<Lin<TTerm>> {
    uni_factorize_t_logged(input, None)
}

/// As [`uni_factorize_t`], recording every step applied.
pub fn uni_factorize_t_logged(input: &Lin<TTerm>, mut log: Option<&mut Vec<UnifactorStep>>) -> Result<Lin<TTerm>> {
    let mut work = input.clone();
    let mut done = Lin::new();
    let mut steps = 0usize;
    while let Some((t, c)) = work.pop_first() {
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::Budget("uni-factorization did not terminate".into()));
        }
        match step(&t.prod)? {
            Step::Done => done.add(t, c),
            Step::Replace(rule, v) => {
                let outs: Vec<(TTerm, CycloNumber)> =
                    v.into_iter().map(|(p, k)| (TTerm { integrated: t.integrated.clone(), prod: p }, k)).collect();
                for (o, k) in &outs {
                    work.add(o.clone(), k * &c);
                }
                if let Some(l) = log.as_deref_mut() {
                    l.push(UnifactorStep { rule, input: t, outputs: outs });
                }
            }
        }
    }
    Ok(done)
}

/// Re-applies logged steps to `input`: each step replaces its input term, with whatever
/// coefficient it carries at that point, by its outputs.
pub fn replay_unifactor(input: &Lin<TTerm>, steps: &[UnifactorStep]) -> Result<Lin<TTerm>> {
    let mut cur = input.clone();
    for s in steps {
        let c = cur
            .get(&s.input)
            .cloned()
            .ok_or_else(|| Error::Internal("replayed step input is missing".into()))?;
        cur.add(s.input.clone(), -c.clone());
        for (o, k) in &s.outputs {
            cur.add(o.clone(), k * &c);
        }
    }
    Ok(cur)
}

/// `u/(1 − u)^μ = Σ_{i<μ} C(μ−1, i) T^{i+1}`.
pub fn to_t(t: &UTerm) -> Lin<TTerm> {
    let mut acc: Vec<(TProd, CycloNumber)> = vec![(TProd::new(), CycloNumber::one())];
    for f in &t.factors {
        let mu = f.power;
        let mut next = Vec::new();
        for (p, c) in &acc {
            for i in 0..mu {
                let mut q = p.clone();
                mul_into(&mut q, f.mono.clone(), i + 1);
                next.push((q, c * &int(binomial(mu as u64 - 1, i as u64))));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(p, c)| (TTerm { integrated: t.integrated.clone(), prod: p }, c))
        .collect()
}

/// `T^a = Σ_{j<a} (−1)^j C(a−1, j) u/(1 − u)^{a−j}`.
pub fn from_t(t: &TTerm) -> Lin<UTerm> {
    let mut acc: Vec<(Vec<Factor>, CycloNumber)> = vec![(Vec::new(), CycloNumber::one())];
    for (m, &a) in &t.prod {
        let mut next = Vec::new();
        for (fs, c) in &acc {
            for j in 0..a {
                let mut g = fs.clone();
                g.push(Factor::new(m.clone(), a - j));
                let mut k = int(binomial(a as u64 - 1, j as u64));
                if j % 2 == 1 {
                    k = -k;
                }
                next.push((g, c * &k));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(fs, c)| (UTerm::new(t.integrated.clone(), fs), c))
        .collect()
}

pub fn lin_to_t(l: &Lin<UTerm>) -> Lin<TTerm> {
    let mut out = Lin::new();
    for (t, c) in l.iter() {
        out.add_scaled(&to_t(t), c);
    }
    out
}

pub fn lin_from_t(l: &Lin<TTerm>) -> Lin<UTerm> {
    let mut out = Lin::new();
    for (t, c) in l.iter() {
        out.add_scaled(&from_t(t), c);
    }
    out
}

/// Uni-factorizes a combination of terms in the `u/(1 − u)^μ` form.
pub fn uni_factorize(l: &Lin<UTerm>) -> Result<Lin<UTerm>> {
    Ok(lin_from_t(&uni_factorize_t(&lin_to_t(l))?))
}

/// `term · Π extra`, uni-factorized.
pub fn times_unifactorize(t: &UTerm, extra: &[Factor]) -> Result<Lin<UTerm>> {
    let mut fs = t.factors.clone();
    fs.extend_from_slice(extra);
    // factors sharing a monomial cannot be multiplied in the `u/(1 − u)^μ` form; go through T
    let mut prod_lin: Lin<TTerm> = Lin::single(TTerm { integrated: t.integrated.clone(), prod: TProd::new() }, CycloNumber::one());
    for f in fs {
        let single = to_t(&UTerm::new(t.integrated.clone(), vec![f]));
        let mut next = Lin::new();
        for (a, ca) in prod_lin.iter() {
            for (b, cb) in single.iter() {
                let mut p = a.prod.clone();
                for (k, v) in &b.prod {
                    mul_into(&mut p, k.clone(), *v);
                }
                next.add(TTerm { integrated: a.integrated.clone(), prod: p }, ca * cb);
            }
        }
        prod_lin = next;
    }
    Ok(lin_from_t(&uni_factorize_t(&prod_lin)?))
}

/// Sets `y_i = 1` in a term whose integrated set avoids `i`, then re-normalizes.
pub fn set_one(t: &UTerm, i: usize) -> Result<Lin<UTerm>> {
    debug_assert!(!t.integrated.contains(&i));
    let fs: Vec<Factor> = t.factors.iter().map(|f| Factor::new(f.mono.set_one(i), f.power)).collect();
    times_unifactorize(&UTerm::new(t.integrated.clone(), Vec::new()), &fs)
}

pub fn root(r: RootOfUnity) -> CycloNumber {
    CycloNumber::from_root(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::term::{lin_series, tterm_series, uterm_series};

    fn mono(root: RootOfUnity, e: &[u32]) -> Mono {
        Mono::new(root, e.to_vec())
    }

    fn series_eq_t(a: &Lin<TTerm>, b: &Lin<TTerm>, n: usize) {
        let sa = lin_series(a, n, 6, tterm_series).unwrap();
        let sb = lin_series(b, n, 6, tterm_series).unwrap();
        assert_eq!(sa, sb);
    }

    #[test]
    fn pair_identity_by_series() {
        let m1 = mono(RootOfUnity::ONE, &[1, 1, 0]);
        let m2 = mono(RootOfUnity::MINUS_ONE, &[1, 2, 1]);
        for (a, b) in [(1, 1), (2, 1), (1, 3), (2, 2)] {
            let lhs = Lin::single(TTerm { integrated: vec![], prod: TProd::from([(m1.clone(), a), (m2.clone(), b)]) }, CycloNumber::one());
            let rhs: Lin<TTerm> = partial_fraction_pair(&m1, a, &m2, b)
                .unwrap()
                .into_iter()
                .map(|(p, c)| (TTerm { integrated: vec![], prod: p }, c))
                .collect();
            series_eq_t(&lhs, &rhs, 3);
        }
        // equal exponents, distinct roots: constant r
        let m3 = mono(RootOfUnity::new(3, 1), &[1, 1, 0]);
        let lhs = Lin::single(TTerm { integrated: vec![], prod: TProd::from([(m1.clone(), 1), (m3.clone(), 2)]) }, CycloNumber::one());
        let rhs: Lin<TTerm> = partial_fraction_pair(&m1, 1, &m3, 2)
            .unwrap()
            .into_iter()
            .map(|(p, c)| (TTerm { integrated: vec![], prod: p }, c))
            .collect();
        series_eq_t(&lhs, &rhs, 3);
        assert!(partial_fraction_pair(&m1, 1, &m1, 1).is_err());
        assert!(partial_fraction_pair(&mono(RootOfUnity::ONE, &[1, 2, 0]), 1, &mono(RootOfUnity::ONE, &[1, 0, 1]), 1).is_err());
    }

    #[test]
    fn root_split_by_series() {
        let m = mono(RootOfUnity::MINUS_ONE, &[2, 4]);
        for a in 1..3 {
            let lhs = Lin::single(TTerm { integrated: vec![], prod: TProd::from([(m.clone(), a)]) }, CycloNumber::one());
            let rhs: Lin<TTerm> = root_split(&m, a)
                .unwrap()
                .into_iter()
                .map(|(p, c)| (TTerm { integrated: vec![], prod: p }, c))
                .collect();
            series_eq_t(&lhs, &rhs, 2);
        }
        assert!(root_split(&mono(RootOfUnity::ONE, &[2, 3]), 1).is_err());
    }

    #[test]
    fn conversions_roundtrip() {
        let t = UTerm::new(vec![0], vec![Factor::new(mono(RootOfUnity::ONE, &[1, 1]), 3), Factor::new(mono(RootOfUnity::MINUS_ONE, &[0, 1]), 2)]);
        let back = lin_from_t(&to_t(&t));
        assert_eq!(back, Lin::single(t.clone(), CycloNumber::one()));
        let s1 = uterm_series(&t, 2, 6).unwrap();
        let s2 = lin_series(&to_t(&t), 2, 6, tterm_series).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn unifactorize_preserves_series() {
        let t = UTerm::new(
            vec![0],
            vec![
                Factor::new(mono(RootOfUnity::ONE, &[1, 1, 1]), 1),
                Factor::new(mono(RootOfUnity::ONE, &[1, 2, 1]), 1),
                Factor::new(mono(RootOfUnity::MINUS_ONE, &[2, 2, 2]), 1),
            ],
        );
        let l = Lin::single(t, CycloNumber::one());
        let u = uni_factorize(&l).unwrap();
        assert!(u.keys().all(|x| x.is_unifactor()), "{:?}", u);
        let s1 = lin_series(&l, 3, 6, uterm_series).unwrap();
        let s2 = lin_series(&u, 3, 6, uterm_series).unwrap();
        assert_eq!(s1, s2);

        let lt = lin_to_t(&l);
        let mut log = Vec::new();
        let out = uni_factorize_t_logged(&lt, Some(&mut log)).unwrap();
        assert!(!log.is_empty());
        assert_eq!(replay_unifactor(&lt, &log).unwrap(), out);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::rewrite::term::{lin_series, tterm_series};
    use proptest::prelude::*;

    fn root() -> impl Strategy<Value = RootOfUnity> {
        (1u64..=6, 0i64..6).prop_map(|(n, k)| RootOfUnity::new(n, k))
    }

    fn lin_of(parts: Vec<(TProd, CycloNumber)>) -> Lin<TTerm> {
        parts.into_iter().map(|(p, c)| (TTerm { integrated: vec![], prod: p }, c)).collect()
    }

    proptest! {
        #[test]
        fn root_split_keeps_the_series(e in root(), tail in prop::collection::vec(0u32..=2, 0..2), c in 2u32..=3, a in 1u32..=2) {
            let mut exps = vec![c];
            exps.extend(tail.iter().map(|x| x * c));
            let n = exps.len();
            let m = Mono::new(e, exps);
            let lhs = lin_of(vec![(TProd::from([(m.clone(), a)]), CycloNumber::one())]);
            let rhs = lin_of(root_split(&m, a).unwrap());
            prop_assert_eq!(lin_series(&lhs, n, 6, tterm_series).unwrap(), lin_series(&rhs, n, 6, tterm_series).unwrap());
        }

        #[test]
        fn pair_keeps_the_series(
            e1 in root(), e2 in root(),
            t1 in prop::collection::vec(0u32..=1, 2), d in prop::collection::vec(0u32..=1, 2),
            a in 1u32..=2, b in 1u32..=2,
        ) {
            let x1: Vec<u32> = std::iter::once(1).chain(t1.iter().copied()).collect();
            let x2: Vec<u32> = std::iter::once(1).chain(t1.iter().zip(&d).map(|(x, y)| x + y)).collect();
            let (m1, m2) = (Mono::new(e1, x1), Mono::new(e2, x2));
            prop_assume!(m1 != m2);
            let lhs = lin_of(vec![(TProd::from([(m1.clone(), a), (m2.clone(), b)]), CycloNumber::one())]);
            let rhs = lin_of(partial_fraction_pair(&m1, a, &m2, b).unwrap());
            prop_assert_eq!(lin_series(&lhs, 3, 6, tterm_series).unwrap(), lin_series(&rhs, 3, 6, tterm_series).unwrap());
        }
    }
}
