//! Weight descent: integrals of uni-factor terms down to iterated integrals in one variable.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::term::{Factor, Mono, UTerm};
use super::unifactor::{set_one, times_unifactorize};
use crate::error::{Error, Result};
use crate::exact::rational::ratio;
use crate::exact::CycloNumber;
use crate::lin::Lin;
use crate::polylog::{PNormalForm, Pole};

/// A step of the reduction, in display form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub anchor: String,
    pub input: String,
    pub outputs: Vec<String>,
    pub scalar: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    pub truncated: bool,
}

const TRACE_CAP: usize = 20_000;

impl ReductionTrace {
    pub fn record(&mut self, rule: &str, anchor: &str, input: &dyn std::fmt::Display, outputs: Vec<String>, scalar: Option<String>) {
        if self.steps.len() >= TRACE_CAP {
            self.truncated = true;
            return;
        }
        self.steps.push(TraceStep { rule: rule.into(), anchor: anchor.into(), input: input.to_string(), outputs, scalar });
    }
}

fn show(l: &Lin<UTerm>) -> Vec<String> {
    l.iter().map(|(t, c)| format!("({c}) {t}")).collect()
}

fn with_integrated(t: &UTerm, v: usize) -> UTerm {
    let mut i = t.integrated.clone();
    i.push(v);
    UTerm::new(i, t.factors.clone())
}

/// Memoizing evaluator of the two weight-descent reductions on `n` variables; the last one,
/// `y_n`, stays free.
pub struct Reducer {
    n: usize,
    cache_a: HashMap<UTerm, Lin<UTerm>>,
    cache_b: HashMap<(UTerm, usize), Lin<UTerm>>,
    cache_p: HashMap<UTerm, PNormalForm>,
    steps: usize,
    max_steps: usize,
    pub trace: Option<ReductionTrace>,
}

impl Reducer {
    pub fn new(n: usize) -> Self {
        Reducer {
            n,
            cache_a: HashMap::new(),
            cache_b: HashMap::new(),
            cache_p: HashMap::new(),
            steps: 0,
            max_steps: 2_000_000,
            trace: None,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(ReductionTrace::default());
        self
    }

    pub fn with_max_steps(mut self, m: usize) -> Self {
        self.max_steps = m;
        self
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(Error::Budget(format!("reduction exceeded {} steps", self.max_steps)));
        }
        Ok(())
    }

    fn record(&mut self, rule: &str, anchor: &str, input: &UTerm, out: &Lin<UTerm>, scalar: Option<String>) {
        if let Some(t) = self.trace.as_mut() {
            t.record(rule, anchor, input, show(out), scalar);
        }
    }

    /// Rewrites a uni-factor term as `Σ M · f`: every factor led by an integrated variable
    /// has power 1 (`f` simple), the remaining factors `M` are free.
    pub fn reduce_a(&mut self, t: &UTerm) -> Result<Lin<UTerm>> {
        if let Some(r) = self.cache_a.get(t) {
            return Ok(r.clone());
        }
        self.tick()?;
        let out = self.reduce_a_uncached(t)?;
        self.record("reduce_A", "weight descent A", t, &out, None);
        self.cache_a.insert(t.clone(), out.clone());
        Ok(out)
    }

    fn reduce_a_uncached(&mut self, t: &UTerm) -> Result<Lin<UTerm>> {
        let Some(&last) = t.integrated.last() else {
            return Ok(Lin::single(t.clone(), CycloNumber::one()));
        };
        let g = UTerm::new(t.integrated[..t.integrated.len() - 1].to_vec(), t.factors.clone());
        let mut out = Lin::new();
        for (gt, c) in self.reduce_a(&g)?.iter() {
            let mut inner = Vec::new();
            let mut at = None;
            let mut above = Vec::new();
            for f in &gt.factors {
                match f.leading() {
                    Some(l) if l < last => inner.push(f.clone()),
                    Some(l) if l == last => {
                        if at.replace(f.clone()).is_some() {
                            return Err(Error::precondition("reduce_A", format!("two factors at level y{} in {gt}", last + 1)));
                        }
                    }
                    Some(_) => above.push(f.clone()),
                    None => return Err(Error::Internal(format!("constant factor in {gt}"))),
                }
            }
            let h = UTerm::new(gt.integrated.clone(), inner);
            match at {
                None => {
                    let r = with_integrated(gt, last);
                    if !r.in_zero_set(last) {
                        return Err(Error::Divergent(format!("y{} left the zero set of {r}", last + 1)));
                    }
                    out.add(r, c.clone());
                }
                Some(f) if f.power == 1 => out.add(with_integrated(gt, last), c.clone()),
                Some(f) => {
                    // integration by parts against ((1 − u y)^{−(μ−1)} − 1)/(μ − 1)
                    let mu = f.power;
                    let k = c.scale(&ratio(1, mu as i64 - 1));
                    let p = f.mono.set_one(last);
                    for tm in set_one(&h, last)?.iter() {
                        let (h1, ch) = tm;
                        let mut extra = above.clone();
                        for j in 1..mu {
                            extra.push(Factor::new(p.clone(), j));
                            out.add_scaled(&times_unifactorize(h1, &extra)?, &(&k * ch));
                            extra.pop();
                        }
                    }
                    let dh = self.reduce_b(&h, last)?;
                    for (u, cu) in dh.iter() {
                        for j in 1..mu {
                            let v = times_unifactorize(u, &[Factor::new(f.mono.clone(), j)])?;
                            for (w, cw) in v.iter() {
                                let w2 = with_integrated(w, last);
                                for (r, cr) in self.reduce_a(&w2)?.iter() {
                                    let fin = times_unifactorize(r, &above)?;
                                    let s = -(&(&(&k * cu) * cw) * cr);
                                    out.add_scaled(&fin, &s);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `y_i ∂/∂y_i` of a simple term, as uni-factor terms of lower weight.
    pub fn reduce_b(&mut self, f: &UTerm, i: usize) -> Result<Lin<UTerm>> {
        let key = (f.clone(), i);
        if let Some(r) = self.cache_b.get(&key) {
            return Ok(r.clone());
        }
        self.tick()?;
        let out = self.reduce_b_uncached(f, i)?;
        self.record("reduce_B", "weight descent B", f, &out, Some(format!("y{}", i + 1)));
        self.cache_b.insert(key, out.clone());
        Ok(out)
    }

    fn reduce_b_uncached(&mut self, f: &UTerm, i: usize) -> Result<Lin<UTerm>> {
        let Some(&last) = f.integrated.last() else {
            if !f.factors.is_empty() {
                return Err(Error::precondition("reduce_B", format!("{f} is not simple")));
            }
            return Ok(Lin::new());
        };
        if i <= last {
            return Err(Error::precondition("reduce_B", format!("y{} is integrated in {f}", i + 1)));
        }
        let mut lf = None;
        let mut rest = Vec::new();
        for x in &f.factors {
            if x.leading() == Some(last) {
                if x.power != 1 || lf.replace(x.clone()).is_some() {
                    return Err(Error::precondition("reduce_B", format!("{f} is not simple")));
                }
            } else {
                rest.push(x.clone());
            }
        }
        let g = UTerm::new(f.integrated[..f.integrated.len() - 1].to_vec(), rest);
        let mut out = Lin::new();
        let Some(l) = lf else {
            for (u, cu) in self.reduce_b(&g, i)?.iter() {
                out.add(with_integrated(u, last), cu.clone());
            }
            return Ok(out);
        };
        for (u, cu) in self.reduce_b(&g, i)?.iter() {
            for (w, cw) in times_unifactorize(u, &[l.clone()])?.iter() {
                out.add(with_integrated(w, last), cu * cw);
            }
        }
        let c = l.mono.exps[i];
        if c != 0 {
            let q = CycloNumber::from_rational(ratio(c as i64, l.mono.exps[last] as i64));
            let lp = Factor::new(l.mono.set_one(last), 1);
            for (g1, cg) in set_one(&g, last)?.iter() {
                out.add_scaled(&times_unifactorize(g1, &[lp.clone()])?, &(&q * cg));
            }
            for (u, cu) in self.reduce_b(&g, last)?.iter() {
                for (w, cw) in times_unifactorize(u, &[l.clone()])?.iter() {
                    out.add(with_integrated(w, last), -(&(&q * cu) * cw));
                }
            }
        }
        Ok(out)
    }

    /// A uni-factor term depending only on the last variable, as a P-normal form in `y = y_n`.
    pub fn to_p(&mut self, t: &UTerm) -> Result<PNormalForm> {
        if let Some(r) = self.cache_p.get(t) {
            return Ok(r.clone());
        }
        self.tick()?;
        let y = self.n - 1;
        let mut out = PNormalForm::zero();
        for (mt, c) in self.reduce_a(t)?.iter() {
            let mut free = None;
            let mut simple = Vec::new();
            for f in &mt.factors {
                match f.leading() {
                    Some(l) if l == y => {
                        if free.replace(f.clone()).is_some() {
                            return Err(Error::Internal(format!("two free factors in {mt}")));
                        }
                    }
                    Some(l) if mt.integrated.contains(&l) => simple.push(f.clone()),
                    _ => return Err(Error::Internal(format!("factor outside the integrated levels in {mt}"))),
                }
            }
            let h = UTerm::new(mt.integrated.clone(), simple);
            let ph = self.simple_to_p(&h)?;
            match free {
                None => out.add(&ph, c),
                Some(f) => {
                    if f.mono.exps[y] != 1 {
                        return Err(Error::Internal(format!("free factor {} not normalized", f.mono)));
                    }
                    // e y/(1 − e y)^ν = (1 − e y)^{−ν} − (1 − e y)^{−(ν−1)}
                    out.add(&ph.times_pole(Pole::new(f.mono.root, f.power)), c);
                    out.add(&ph.times_pole(Pole::new(f.mono.root, f.power - 1)), &-c.clone());
                }
            }
        }
        if let Some(tr) = self.trace.as_mut() {
            tr.record("reduce_to_univariate", "kernel integration", t, vec![out.to_string()], None);
        }
        self.cache_p.insert(t.clone(), out.clone());
        Ok(out)
    }

    fn simple_to_p(&mut self, h: &UTerm) -> Result<PNormalForm> {
        if h.integrated.is_empty() {
            if !h.factors.is_empty() {
                return Err(Error::Internal(format!("{h} is not simple")));
            }
            return Ok(PNormalForm::constant(CycloNumber::one()));
        }
        let y = self.n - 1;
        let mut d = PNormalForm::zero();
        for (u, cu) in self.reduce_b(h, y)?.iter() {
            d.add(&self.to_p(u)?, cu);
        }
        d.integrate_dt_over_t()
    }
}

/// `∫_0^1 I(y) dy/y` for `I = Σ` terms in the variables `y_1..y_n`, all but `y_n` integrated,
/// as the P-normal form of `F(y) = ∫_0^y I(t) dt/t`.
pub fn reduce_to_univariate(terms: &Lin<UTerm>, reducer: &mut Reducer) -> Result<PNormalForm> {
    let mut i = PNormalForm::zero();
    for (t, c) in terms.iter() {
        i.add(&reducer.to_p(t)?, c);
    }
    i.integrate_dt_over_t()
}

/// Helper for building terms in tests and examples.
pub fn factor(root: crate::exact::RootOfUnity, exps: &[u32], power: u32) -> Factor {
    Factor::new(Mono::new(root, exps.to_vec()), power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RootOfUnity;
    use crate::polylog::regularize::z_value;
    use crate::polylog::regularize_limit;
    use crate::rewrite::term::{lin_series, uterm_series};

    const ONE: RootOfUnity = RootOfUnity::ONE;

    fn single(t: UTerm) -> Lin<UTerm> {
        Lin::single(t, CycloNumber::one())
    }

    #[test]
    fn zeta_two_by_hand() {
        let t = UTerm::new(vec![0], vec![factor(ONE, &[1, 1], 1)]);
        let mut r = Reducer::new(2);
        let f = reduce_to_univariate(&single(t), &mut r).unwrap();
        let z = regularize_limit(&f).unwrap();
        assert!((z_value(&z).unwrap().re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_a_preserves_series() {
        let t = UTerm::new(vec![0, 1], vec![factor(ONE, &[1, 1, 1], 2), factor(RootOfUnity::MINUS_ONE, &[0, 1, 2], 3)]);
        let mut r = Reducer::new(3);
        let out = r.reduce_a(&t).unwrap();
        for (u, _) in out.iter() {
            let inner: Vec<_> = u.factors.iter().filter(|f| u.integrated.contains(&f.leading().unwrap())).collect();
            assert!(inner.iter().all(|f| f.power == 1), "{u}");
        }
        assert_eq!(lin_series(&single(t), 3, 6, uterm_series).unwrap(), lin_series(&out, 3, 6, uterm_series).unwrap());
    }

    #[test]
    fn reduce_b_is_euler_derivative() {
        let t = UTerm::new(vec![0, 1], vec![factor(ONE, &[1, 1, 2], 1), factor(RootOfUnity::new(3, 1), &[0, 1, 1], 1)]);
        let mut r = Reducer::new(3);
        let out = r.reduce_b(&t, 2).unwrap();
        let mut s = lin_series(&single(t), 3, 6, uterm_series).unwrap();
        for (e, c) in s.iter_mut() {
            *c = c.scale(&crate::Rational::from_integer(e[2].into()));
        }
        s.retain(|_, c| !c.is_zero());
        assert_eq!(s, lin_series(&out, 3, 6, uterm_series).unwrap());
    }
}
