//! Independent reference computations used by the integration tests. None of
//! these call into the library's numerical code.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `Gamma((nu + 1) / 2) / Gamma(nu / 2)` for integer `nu`, by the exact
/// two-step recurrence from `nu = 1` and `nu = 2`.
pub fn gamma_ratio(nu: u32) -> f64 {
    let (mut r, mut k) = if nu % 2 == 1 {
        (1.0 / PI.sqrt(), 1)
    } else {
        (PI.sqrt() / 2.0, 2)
    };
    while k < nu {
        r *= (k as f64 + 1.0) / k as f64;
        k += 2;
    }
    r
}

fn t_density(x: f64, nu: u32) -> f64 {
    let n = nu as f64;
    gamma_ratio(nu) / (n * PI).sqrt() * (1.0 + x * x / n).powf(-(n + 1.0) / 2.0)
}

/// Student-t CDF by composite Simpson quadrature of the density on `[0, t]`.
pub fn t_cdf_quadrature(t: f64, nu: u32) -> f64 {
    let steps = 20_000;
    let h = t.abs() / steps as f64;
    let mut s = t_density(0.0, nu) + t_density(t.abs(), nu);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * t_density(i as f64 * h, nu);
    }
    let half = s * h / 3.0;
    if t >= 0.0 {
        0.5 + half
    } else {
        0.5 - half
    }
}

/// Upper-tail quantile by bisection on the quadrature CDF.
pub fn t_quantile_oracle(p: f64, nu: u32) -> f64 {
    assert!(p > 0.5 && p < 1.0);
    let (mut lo, mut hi) = (0.0, 1000.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if t_cdf_quadrature(mid, nu) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn ssr(x: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    x.iter().zip(y).map(|(x, y)| (y - a - b * x).powi(2)).sum()
}

/// Minimizes the residual sum of squares by nested golden-section search;
/// no normal equations involved.
pub fn brute_force_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let golden = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (lo, hi);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..160 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = f(d);
            }
        }
        0.5 * (lo + hi)
    };
    let best_a = |b: f64| golden(-100.0, 100.0, &|a| ssr(x, y, a, b));
    let b = golden(-100.0, 100.0, &|b| ssr(x, y, best_a(b), b));
    (best_a(b), b)
}

/// Excess prices of the price-anchoring recursion.
pub fn price_feedback_path(a2: f64, b2: f64, p0: f64, steps: usize) -> Vec<f64> {
    let mut v = vec![p0];
    for _ in 0..steps {
        let p = *v.last().unwrap();
        v.push(p * (a2 + b2 * p).exp());
    }
    v
}

/// Excess prices of the return-anchoring recursion started from growth `g0`.
pub fn return_feedback_path(a3: f64, b3: f64, g0: f64, p0: f64, steps: usize) -> Vec<f64> {
    let mut v = vec![p0];
    let mut g = g0;
    for _ in 0..steps {
        g = a3 + b3 * g;
        let p = *v.last().unwrap();
        v.push(p * g.exp());
    }
    v
}

/// Closed-form triangular count of windows `[s, e]` with `s` in
/// `[s_min, s_max]`, `e` in `[e_min, e_max]` and `e - s + 1 >= k`.
pub fn triangular_count(s_min: i64, s_max: i64, e_min: i64, e_max: i64, k: i64) -> usize {
    (s_min..=s_max)
        .map(|s| {
            let lo = e_min.max(s + k - 1);
            (e_max - lo + 1).max(0) as usize
        })
        .sum()
}

/// Standard normal draw by Box-Muller from a small xorshift generator.
pub struct Gauss {
    state: u64,
    spare: Option<f64>,
}

impl Gauss {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1,
            spare: None,
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.state ^= self.state << 13;
        self.state ^= self.state >> 7;
        self.state ^= self.state << 17;
        ((self.state >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (u, v) = (self.uniform(), self.uniform());
        let r = (-2.0 * u.ln()).sqrt();
        self.spare = Some(r * (2.0 * PI * v).sin());
        r * (2.0 * PI * v).cos()
    }
}
