//! Numerical values of iterated integrals.

use num_complex::Complex64;
use num_rational::BigRational;
use num_bigint::BigInt;

use super::word::{Letter, PolylogWord};
use crate::error::{Error, Result};
use crate::exact::CycloNumber;

#[derive(Clone, Copy, Debug)]
enum NumLetter {
    Zero,
    // dt / (1 - c t)
    Kernel(Complex64),
}

// Taylor coefficients a_0..a_{n-1} of the iterated integral (rightmost letter innermost).
fn series(letters: &[NumLetter], n: usize) -> Vec<Complex64> {
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    a[0] = Complex64::new(1.0, 0.0);
    for l in letters.iter().rev() {
        match *l {
            NumLetter::Zero => {
                a[0] = Complex64::new(0.0, 0.0);
                for (k, x) in a.iter_mut().enumerate().skip(1) {
                    *x /= k as f64;
                }
            }
            NumLetter::Kernel(c) => {
                let mut s = Complex64::new(0.0, 0.0);
                let mut b = vec![Complex64::new(0.0, 0.0); n];
                for k in 0..n - 1 {
                    s = s * c + a[k];
                    b[k + 1] = s / (k + 1) as f64;
                }
                a = b;
            }
        }
    }
    a
}

fn terms_needed(rate: f64, weight: usize) -> usize {
    // rate^N N^weight below 1e-18
    let lr = -rate.ln();
    let mut n = ((41.4 + 3.0 * weight as f64) / lr).ceil() as usize + 8;
    for _ in 0..4 {
        n = ((41.4 + weight as f64 * (n as f64).ln()) / lr).ceil() as usize + 8;
    }
    n.min(20_000_000)
}

fn eval_series(letters: &[NumLetter], y: f64) -> Complex64 {
    if letters.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let rate = letters
        .iter()
        .map(|l| match l {
            NumLetter::Zero => 0.0,
            NumLetter::Kernel(c) => c.norm(),
        })
        .fold(1.0f64, f64::max)
        * y.abs();
    let n = terms_needed(rate.max(1e-3), letters.len());
    let a = series(letters, n);
    let mut s = Complex64::new(0.0, 0.0);
    let mut p = 1.0;
    for x in &a {
        s += x * p;
        p *= y;
    }
    s
}

fn to_num(w: &PolylogWord) -> Vec<NumLetter> {
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::Zero => NumLetter::Zero,
            Letter::Root(e) => NumLetter::Kernel(e.to_complex()),
        })
        .collect()
}

/// Value of `w` at `0 ≤ y < 1` by its power series.
pub fn word_value_at(w: &PolylogWord, y: f64) -> Complex64 {
    eval_series(&to_num(w), y)
}

/// Value of a convergent word at `y = 1`, splitting the path at a point `t` close to 1 and
/// mapping the last stretch through `x ↦ 1 − x`.
pub fn word_value_at_one(w: &PolylogWord) -> Result<Complex64> {
    if !w.is_convergent() {
        return Err(Error::Divergent(format!("word {w} diverges at 1")));
    }
    if w.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let min_gap = w
        .letters()
        .iter()
        .filter_map(|l| match l {
            Letter::Root(e) if !e.is_one() => Some((e.to_complex() - 1.0).norm()),
            _ => None,
        })
        .fold(1.0f64, f64::min);
    let s = 0.5f64.min(min_gap / 2.0);
    let t = 1.0 - s;
    let letters = to_num(w);
    // letters pulled back along x = 1 - u, with their scalar factors
    let mut back = Vec::with_capacity(letters.len());
    for l in w.letters() {
        back.push(match l {
            Letter::Zero => (Complex64::new(1.0, 0.0), NumLetter::Kernel(Complex64::new(1.0, 0.0))),
            Letter::Root(e) if e.is_one() => (Complex64::new(1.0, 0.0), NumLetter::Zero),
            Letter::Root(e) => {
                let e = e.to_complex();
                let one = Complex64::new(1.0, 0.0);
                (one / (one - e), NumLetter::Kernel(e / (e - one)))
            }
        });
    }
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..=letters.len() {
        let tail = eval_series(&letters[i..], t);
        let mut scale = Complex64::new(1.0, 0.0);
        let mut rev = Vec::with_capacity(i);
        for (c, l) in back[..i].iter().rev() {
            scale *= c;
            rev.push(*l);
        }
        let head = if i == 0 { Complex64::new(1.0, 0.0) } else { eval_series(&rev, s) };
        total += scale * head * tail;
    }
    Ok(total)
}

/// Exact Taylor coefficients of `w` up to `y^deg`.
pub fn word_series_exact(w: &PolylogWord, deg: usize) -> Vec<CycloNumber> {
    let n = deg + 1;
    let mut a = vec![CycloNumber::zero(); n];
    a[0] = CycloNumber::one();
    for l in w.letters().iter().rev() {
        match l {
            Letter::Zero => {
                a[0] = CycloNumber::zero();
                for (k, x) in a.iter_mut().enumerate().skip(1) {
                    *x = x.scale(&BigRational::new(BigInt::from(1), BigInt::from(k)));
                }
            }
            Letter::Root(e) => {
                let c = CycloNumber::from_root(e);
                let mut s = CycloNumber::zero();
                let mut b = vec![CycloNumber::zero(); n];
                for k in 0..n - 1 {
                    s = &(&s * &c) + &a[k];
                    b[k + 1] = s.scale(&BigRational::new(BigInt::from(1), BigInt::from(k + 1)));
                }
                a = b;
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RootOfUnity;

    const PI2_6: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

    #[test]
    fn classical_values() {
        let w = PolylogWord::from_blocks(&[(2, RootOfUnity::ONE)]);
        assert!((word_value_at_one(&w).unwrap().re - PI2_6).abs() < 1e-12);
        // w0 w1 w1 = zeta(1,2) = zeta(3)
        let w = PolylogWord::from_blocks(&[(2, RootOfUnity::ONE), (1, RootOfUnity::ONE)]);
        assert!((word_value_at_one(&w).unwrap().re - 1.2020569031595942).abs() < 1e-12);
        // w[-1] at 1 is log 2
        let w = PolylogWord(vec![Letter::Root(RootOfUnity::MINUS_ONE)]);
        let v = word_value_at_one(&w).unwrap();
        assert!((v.re - 2f64.ln()).abs() < 1e-12, "{v}");
        let y = 0.3;
        let w1 = PolylogWord(vec![Letter::ONE]);
        assert!((word_value_at(&w1, y).re + (1.0f64 - y).ln()).abs() < 1e-14);
    }

    #[test]
    fn primitive_roots_far_from_one() {
        // Li1 at a 13th root: w_e(1) = -log(1 - e)/e
        let e = RootOfUnity::new(13, 1);
        let w = PolylogWord(vec![Letter::Root(e)]);
        let ec = e.to_complex();
        let expect = -(Complex64::new(1.0, 0.0) - ec).ln() / ec;
        assert!((word_value_at_one(&w).unwrap() - expect).norm() < 1e-11);
    }

    #[test]
    fn exact_series_matches_float() {
        let w = PolylogWord(vec![Letter::Zero, Letter::Root(RootOfUnity::new(3, 1)), Letter::ONE]);
        let ex = word_series_exact(&w, 8);
        let fl = series(&to_num(&w), 9);
        for (a, b) in ex.iter().zip(&fl) {
            assert!((a.to_complex() - b).norm() < 1e-12);
        }
    }
}
