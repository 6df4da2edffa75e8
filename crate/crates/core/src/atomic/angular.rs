//! Angular-momentum coupling coefficients (Racah formulas).
//!
//! All angular momenta are passed doubled (`2j`, `2m`) so half-integers stay
//! exact integers.

use std::sync::OnceLock;

const MAX_FACTORIAL: usize = 512;

fn ln_factorial(n: i64) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; MAX_FACTORIAL];
        for k in 1..MAX_FACTORIAL {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    });
    assert!(n >= 0 && (n as usize) < MAX_FACTORIAL, "factorial argument {n} out of table");
    table[n as usize]
}

/// `(a)!` for a doubled argument that must be even.
fn half(x: i64) -> Option<i64> {
    if x % 2 != 0 || x < 0 {
        None
    } else {
        Some(x / 2)
    }
}

fn ln_triangle(a: i64, b: i64, c: i64) -> Option<f64> {
    let p = half(a + b - c)?;
    let q = half(a - b + c)?;
    let r = half(-a + b + c)?;
    let s = half(a + b + c)?;
    Some(ln_factorial(p) + ln_factorial(q) + ln_factorial(r) - ln_factorial(s + 1))
}

fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`, doubled arguments.
pub fn wigner_3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0 {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j3 + m3) % 2 != 0 {
        return 0.0;
    }
    let Some(ln_delta) = ln_triangle(j1, j2, j3) else {
        return 0.0;
    };
    let pre = 0.5
        * (ln_delta
            + ln_factorial((j1 + m1) / 2)
            + ln_factorial((j1 - m1) / 2)
            + ln_factorial((j2 + m2) / 2)
            + ln_factorial((j2 - m2) / 2)
            + ln_factorial((j3 + m3) / 2)
            + ln_factorial((j3 - m3) / 2));
    // summation limits on k (undoubled)
    let a1 = (j3 - j2 + m1) / 2;
    let a2 = (j3 - j1 - m2) / 2;
    let b1 = (j1 + j2 - j3) / 2;
    let b2 = (j1 - m1) / 2;
    let b3 = (j2 + m2) / 2;
    let k_min = 0.max(-a1).max(-a2);
    let k_max = b1.min(b2).min(b3);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = ln_factorial(k)
            + ln_factorial(a1 + k)
            + ln_factorial(a2 + k)
            + ln_factorial(b1 - k)
            + ln_factorial(b2 - k)
            + ln_factorial(b3 - k);
        sum += parity(k) * (pre - ln_den).exp();
    }
    parity((j1 - j2 - m3) / 2) * sum
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`, doubled arguments.
pub fn wigner_6j(j1: i64, j2: i64, j3: i64, j4: i64, j5: i64, j6: i64) -> f64 {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    let mut ln_pre = 0.0;
    for &(a, b, c) in &triads {
        match ln_triangle(a, b, c) {
            Some(v) => ln_pre += 0.5 * v,
            None => return 0.0,
        }
    }
    let s: Vec<i64> = triads.iter().map(|&(a, b, c)| (a + b + c) / 2).collect();
    let p = [(j1 + j2 + j4 + j5) / 2, (j2 + j3 + j5 + j6) / 2, (j3 + j1 + j6 + j4) / 2];
    let t_min = *s.iter().max().unwrap();
    let t_max = *p.iter().min().unwrap();
    let mut sum = 0.0;
    for t in t_min..=t_max {
        let ln_den: f64 = s.iter().map(|&si| ln_factorial(t - si)).sum::<f64>()
            + p.iter().map(|&pi| ln_factorial(pi - t)).sum::<f64>();
        sum += parity(t) * (ln_pre + ln_factorial(t + 1) - ln_den).exp();
    }
    sum
}

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩`, doubled arguments.
pub fn clebsch_gordan(j1: i64, m1: i64, j2: i64, m2: i64, big_j: i64, big_m: i64) -> f64 {
    parity((j1 - j2 + big_m) / 2) * ((big_j + 1) as f64).sqrt() * wigner_3j(j1, j2, big_j, m1, m2, -big_m)
}

/// Angular part of `⟨l j m | z | l' j' m'⟩` for a spin-1/2 electron, so the
/// full element is this factor times the radial integral `⟨r⟩`.
/// Arguments `j2`, `m2` are doubled; `l` values are plain.
pub fn z_angular_factor(l: u32, j2: u32, m2: i32, lp: u32, jp2: u32, mp2: i32) -> f64 {
    if m2 != mp2 {
        return 0.0;
    }
    let (l2, lp2) = (2 * l as i64, 2 * lp as i64);
    let (j, jp, m) = (j2 as i64, jp2 as i64, m2 as i64);
    let three_j_m = wigner_3j(j, 2, jp, -m, 0, m);
    if three_j_m == 0.0 {
        return 0.0;
    }
    let reduced_j = parity((l2 + 1 + jp + 2) / 2)
        * (((j + 1) * (jp + 1)) as f64).sqrt()
        * wigner_6j(l2, j, 1, jp, lp2, 2);
    let reduced_l = parity(l as i64)
        * (((2 * l as i64 + 1) * (2 * lp as i64 + 1)) as f64).sqrt()
        * wigner_3j(l2, 2, lp2, 0, 0, 0);
    parity((j - m) / 2) * three_j_m * reduced_j * reduced_l
}
