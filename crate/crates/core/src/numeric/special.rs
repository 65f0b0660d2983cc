//! Hurwitz zeta at integer arguments and the digamma function, for real `q > 0`.

// B_2, B_4, ..., B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const SHIFT: f64 = 25.0;

/// `ζ(s, q) = Σ_{k≥0} (k + q)^{-s}` for integer `s ≥ 2`.
pub fn hurwitz_zeta(s: u32, q: f64) -> f64 {
    assert!(s >= 2 && q > 0.0);
    let si = s as i32;
    let mut head = 0.0;
    let mut x = q;
    while x < SHIFT {
        head += x.powi(-si);
        x += 1.0;
    }
    // Euler–Maclaurin at x
    let mut tail = x.powi(1 - si) / (s as f64 - 1.0) + 0.5 * x.powi(-si);
    let mut rising = s as f64; // (s)_{2j-1}
    let mut fact = 2.0; // (2j)!
    let mut xp = x.powi(-si - 1);
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j as f64 + 1.0;
        tail += b / fact * rising * xp;
        rising *= (s as f64 + 2.0 * j - 1.0) * (s as f64 + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        xp /= x * x;
    }
    head + tail
}

/// `ψ(q) = Γ'(q)/Γ(q)`.
pub fn digamma(q: f64) -> f64 {
    assert!(q > 0.0);
    let mut acc = 0.0;
    let mut x = q;
    while x < SHIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let mut r = x.ln() - 0.5 / x;
    let x2 = x * x;
    let mut xp = x2;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let k = 2.0 * (j as f64 + 1.0);
        r -= b / (k * xp);
        xp *= x2;
    }
    acc + r
}
