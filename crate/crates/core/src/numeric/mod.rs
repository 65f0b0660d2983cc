//! Numerical oracles: direct cone sums, multiple zeta values, quadrature of integrands.

pub mod cone_sum;
pub mod special;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lin::Lin;
use crate::polylog::regularize::z_value;
use crate::polylog::{word_from_symbol, word_value_at_one, MZVSymbol, ZExpression};
use crate::rewrite::UTerm;

pub use cone_sum::{eval_cone_zeta, SumOptions};

/// A numerical value with its error estimate and how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    #[serde(with = "complex_pair")]
    pub value: Complex64,
    pub error_bound: f64,
    pub method: String,
    pub terms_used: u64,
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Value of a symbol through its iterated-integral representation.
pub fn eval_mzv(s: &MZVSymbol) -> Result<EvalResult> {
    let (scale, w) = word_from_symbol(s);
    let v = scale.to_complex() * word_value_at_one(&w)?;
    Ok(EvalResult { value: v, error_bound: 1e-13, method: "iterated-integral series".into(), terms_used: 0 })
}

/// Truncated nested sum `Σ_{0 < N_1 < … < N_m ≤ cutoff} Π c_j^{N_j − N_{j−1}} / Π N_j^{k_j}`,
/// with the first neglected term as a rough tail scale.
pub fn eval_mzv_nested(s: &MZVSymbol, cutoff: usize) -> EvalResult {
    let m = s.depth();
    if m == 0 {
        return EvalResult { value: Complex64::new(1.0, 0.0), error_bound: 0.0, method: "nested sum".into(), terms_used: 0 };
    }
    // acc[N] = Σ over chains ending at N_j = N
    let mut acc: Vec<Complex64> = (0..=cutoff)
        .map(|n| if n == 0 { Complex64::new(0.0, 0.0) } else { s.roots[0].to_complex().powu(n as u32) / (n as f64).powi(s.ks[0] as i32) })
        .collect();
    for j in 1..m {
        let c = s.roots[j].to_complex();
        let mut next = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        // running = Σ_{N' < N} acc[N'] c^{N − N'}
        let mut running = Complex64::new(0.0, 0.0);
        for n in 1..=cutoff {
            running = (running + acc[n - 1]) * c;
            next[n] = running / (n as f64).powi(s.ks[j] as i32);
        }
        acc = next;
    }
    let value: Complex64 = acc.iter().sum();
    let tail = acc[cutoff].norm() * cutoff as f64;
    EvalResult { value, error_bound: tail, method: "nested sum (truncated)".into(), terms_used: cutoff as u64 }
}

/// Numerical value of a Z-expression.
pub fn eval_z(z: &ZExpression) -> Result<EvalResult> {
    let v = z_value(z)?;
    let scale: f64 = z.iter().map(|(_, c)| c.to_complex().norm()).sum();
    Ok(EvalResult { value: v, error_bound: 1e-12 * scale.max(1.0), method: "iterated-integral series".into(), terms_used: z.len() as u64 })
}

fn eval_uterm(t: &UTerm, y: &[f64], free: &[f64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for f in &t.factors {
        let mut u = f.mono.root.to_complex();
        for (i, &a) in f.mono.exps.iter().enumerate() {
            if a > 0 {
                let x = if t.integrated.contains(&i) { y[i] } else { free[i] };
                u *= x.powi(a as i32);
            }
        }
        v *= u / (Complex64::new(1.0, 0.0) - u).powu(f.power);
    }
    for &i in &t.integrated {
        v /= y[i];
    }
    v
}

/// Monte Carlo estimate of a combination of integrals at a fixed point of the free variables.
/// Returns the mean and its standard error.
pub fn quad_estimate(l: &Lin<UTerm>, free: &[f64], samples: usize, seed: u64) -> (Complex64, f64) {
    let n = free.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sq = 0.0;
    let mut y = vec![0.0; n];
    for _ in 0..samples {
        for v in y.iter_mut() {
            *v = rng.gen::<f64>();
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (t, c) in l.iter() {
            s += c.to_complex() * eval_uterm(t, &y, free);
        }
        sum += s;
        sq += s.norm_sqr();
    }
    let mean = sum / samples as f64;
    let var = (sq / samples as f64 - mean.norm_sqr()).max(0.0);
    (mean, (var / samples as f64).sqrt())
}

/// Whether two combinations agree at `free` within `max(eps, 3 · combined stderr)`; both
/// estimates use the same sample points.
pub fn quad_check(a: &Lin<UTerm>, b: &Lin<UTerm>, free: &[f64], eps: f64, samples: usize, seed: u64) -> bool {
    let mut diff = a.clone();
    diff.add_scaled(b, &crate::exact::CycloNumber::from_int(-1));
    let (m, se) = quad_estimate(&diff, free, samples, seed);
    m.norm() <= eps.max(3.0 * se)
}
