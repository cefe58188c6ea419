//! Real special functions in double precision: zeta, Hurwitz zeta, polylog.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

// B_{2j}/(2j)! for j = 1..10.
const BERNOULLI_OVER_FACT: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
];

/// Hurwitz zeta `sum_{k >= 0} (k + a)^{-s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    const M: usize = 16;
    let mut sum = 0.0;
    for k in 0..M {
        sum += (k as f64 + a).powf(-s);
    }
    sum + euler_maclaurin_tail(s, a + M as f64)
}

// sum_{k >= 0} (N + k)^{-s} by Euler-Maclaurin with ten correction terms.
fn euler_maclaurin_tail(s: f64, n: f64) -> f64 {
    let mut total = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut npow = n.powf(-s - 1.0);
    for (j, c) in BERNOULLI_OVER_FACT.iter().enumerate() {
        total += c * rising * npow;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        npow /= n * n;
    }
    total
}

/// `Gamma(-3/2) = 4 sqrt(pi) / 3`.
pub fn gamma_neg_three_halves() -> f64 {
    4.0 * PI.sqrt() / 3.0
}

/// Riemann zeta for real `s != 1`.
pub fn zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s > 1.0 {
        return hurwitz_zeta(s, 1.0);
    }
    if s >= 0.0 {
        // Direct Euler-Maclaurin is well conditioned on [0, 1).
        const M: usize = 16;
        let mut sum = 0.0;
        for k in 1..=M {
            sum += (k as f64).powf(-s);
        }
        return sum + euler_maclaurin_tail(s, (M + 1) as f64);
    }
    if s == s.floor() && (s as i64) % 2 == 0 {
        return 0.0;
    }
    // Functional equation.
    let t = 1.0 - s;
    2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma(t) * zeta(t)
}

/// Polylogarithm `Li_s(y) = sum_{k >= 1} y^k k^{-s}` for real `s` and `0 <= y <= 1`.
///
/// Returns `+inf` at `y = 1` when `s <= 1`.
pub fn polylog(s: f64, y: f64) -> f64 {
    assert!((0.0..=1.0).contains(&y), "polylog argument {y} outside [0, 1]");
    if y == 0.0 {
        return 0.0;
    }
    if y == 1.0 {
        return if s > 1.0 { zeta(s) } else { f64::INFINITY };
    }
    if y <= 0.5 {
        let mut sum = 0.0f64;
        let mut yk = y;
        let mut k = 1.0f64;
        while yk > 1e-18 * sum.max(1e-300) || k < 2.0 {
            sum += yk * k.powf(-s);
            yk *= y;
            k += 1.0;
        }
        return sum;
    }
    // Expansion around y = 1 in t = -ln y (valid for t < 2 pi).
    let t = -y.ln();
    let mut sum = if s.fract() == 0.0 && s >= 1.0 {
        integer_order_singular_part(s as i64, t)
    } else {
        gamma(1.0 - s) * t.powf(s - 1.0)
    };
    let mut term_pow = 1.0; // (-t)^k / k!
    for k in 0..60 {
        let sk = s - k as f64;
        if s.fract() == 0.0 && sk == 1.0 {
            // Pole term absorbed by integer_order_singular_part.
        } else {
            let z = zeta(sk);
            let term = z * term_pow;
            sum += term;
            if k > 4 && term != 0.0 && term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        term_pow *= -t / (k as f64 + 1.0);
    }
    sum
}

// For integer s = m >= 1: (-t)^{m-1}/(m-1)! * (H_{m-1} - ln t).
fn integer_order_singular_part(m: i64, t: f64) -> f64 {
    let mut fact = 1.0;
    let mut harmonic = 0.0;
    for k in 1..m {
        fact *= k as f64;
        harmonic += 1.0 / k as f64;
    }
    (-t).powi((m - 1) as i32) / fact * (harmonic - t.ln())
}

/// `sum_{k >= n0} k^{-alpha} r^k` for `0 < r <= 1` (`alpha > 1` when `r = 1`).
///
/// Sums directly until the geometric factor kicks in, then switches to the
/// Hurwitz tail at `r = 1` or stops once the terms are negligible.
pub fn power_geometric_tail(alpha: f64, n0: u64, r: f64) -> f64 {
    assert!(r > 0.0 && r <= 1.0);
    if r == 1.0 {
        return hurwitz_zeta(alpha, n0 as f64);
    }
    let mut sum = 0.0;
    let mut k = n0 as f64;
    let mut rk = r.powf(k);
    loop {
        let term = rk * k.powf(-alpha);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        if k - n0 as f64 > 1e7 {
            // The rest is bounded by the Hurwitz tail times r^k.
            sum += rk * hurwitz_zeta(alpha, k + 1.0);
            break;
        }
        k += 1.0;
        rk *= r;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_zeta(s: f64) -> f64 {
        // Partial sum plus integral tail with midpoint correction.
        let n = 200_000u64;
        let mut sum = 0.0;
        for k in (1..=n).rev() {
            sum += (k as f64).powf(-s);
        }
        let nn = n as f64 + 0.5;
        sum + nn.powf(1.0 - s) / (s - 1.0)
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(2.5) - brute_zeta(2.5)).abs() < 1e-11);
        assert!((zeta(1.5) - brute_zeta(1.5)).abs() < 1e-9);
        assert!((zeta(0.0) + 0.5).abs() < 1e-14);
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-13);
        assert!((zeta(-3.0) - 1.0 / 120.0).abs() < 1e-13);
        assert!((zeta(0.5) + 1.4603545088095868).abs() < 1e-12);
        assert!((zeta(-0.5) + 0.207886224977355).abs() < 1e-12);
    }

    #[test]
    fn polylog_matches_direct_sum() {
        for &s in &[2.5, 1.5, 0.5, -0.5, 2.0, 1.0] {
            for &y in &[0.1, 0.5, 0.6, 0.8, 0.95] {
                let mut direct = 0.0;
                let mut yk = y;
                for k in 1..20_000 {
                    direct += yk * (k as f64).powf(-s);
                    yk *= y;
                }
                let v = polylog(s, y);
                assert!((v - direct).abs() < 1e-11 * direct.abs().max(1.0), "s={s} y={y}: {v} vs {direct}");
            }
        }
        assert!((polylog(1.0, 0.75) + (0.25f64).ln()).abs() < 1e-13);
    }

    #[test]
    fn polylog_near_one_is_continuous() {
        let a = polylog(2.5, 1.0 - 1e-10);
        assert!((a - zeta(2.5)).abs() < 1e-9);
    }

    #[test]
    fn tails() {
        let h = hurwitz_zeta(2.5, 1.0);
        assert!((h - zeta(2.5)).abs() < 1e-15);
        let direct: f64 = (1..=10).map(|k| (k as f64).powf(-2.5)).sum();
        assert!((hurwitz_zeta(2.5, 11.0) - (zeta(2.5) - direct)).abs() < 1e-14);
        let g = power_geometric_tail(2.5, 5, 0.9);
        let d: f64 = (5..5000).map(|k| (k as f64).powf(-2.5) * 0.9f64.powi(k)).sum();
        assert!((g - d).abs() < 1e-15);
    }
}
