//! Brute-force oracles, independent of the library's symbol calculus.
//!
//! Local isotropy is decided by exhaustive search modulo small prime powers;
//! global isotropy by a meet-in-the-middle search for integer vectors of
//! bounded height. Coefficients are squarefree nonzero integers.

#![allow(dead_code)]

use std::collections::HashMap;

pub fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|k| k >= 0 && k * k == n)
}

pub fn squarefree(mut n: i64) -> i64 {
    assert!(n != 0);
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
        }
        if n % p == 0 {
            out *= p;
            n /= p;
        }
        p += 1;
    }
    sign * out * n
}

pub fn prime_divisors(n: i64) -> Vec<i64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn modp(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

/// Residue → (some vector hits it, some vector with a unit coordinate hits it).
fn half_values(coeffs: &[i64], m: i64, p: i64) -> HashMap<i64, (bool, bool)> {
    let mut out: HashMap<i64, (bool, bool)> = HashMap::new();
    let n = coeffs.len();
    let total = (m as u64).pow(n as u32);
    for idx in 0..total {
        let mut k = idx;
        let mut val = 0i64;
        let mut unit = false;
        for c in coeffs {
            let x = (k % m as u64) as i64;
            k /= m as u64;
            val = modp(val + modp(c * modp(x * x, m), m), m);
            unit |= x % p != 0;
        }
        let e = out.entry(val).or_insert((false, false));
        e.0 = true;
        e.1 |= unit;
    }
    out
}

/// Whether Σ cᵢxᵢ² has a zero mod m with some xᵢ a unit mod p.
fn primitive_zero_mod(coeffs: &[i64], m: i64, p: i64) -> bool {
    if coeffs.is_empty() {
        return false;
    }
    let (l, r) = coeffs.split_at(coeffs.len() / 2);
    let hl = half_values(l, m, p);
    let hr = half_values(r, m, p);
    hl.iter().any(|(v, (any_l, unit_l))| {
        hr.get(&modp(-v, m))
            .is_some_and(|(any_r, unit_r)| (*unit_l && *any_r) || (*any_l && *unit_r))
    })
}

/// Isotropy over Q_p (p = 0 means R) by exhaustive search.
///
/// p = 2: a primitive zero modulo 2⁵ lifts when coefficients are squarefree.
/// p odd: with f = f₀ ⊥ p·f₁ (unit coefficients), a zero exists iff f₀ or f₁
/// has a nontrivial zero mod p.
pub fn locally_isotropic(coeffs: &[i64], p: i64) -> bool {
    if p == 0 {
        return coeffs.iter().any(|&c| c > 0) && coeffs.iter().any(|&c| c < 0);
    }
    if p == 2 {
        return primitive_zero_mod(coeffs, 32, 2);
    }
    let f0: Vec<i64> = coeffs.iter().copied().filter(|c| c % p != 0).collect();
    let f1: Vec<i64> = coeffs.iter().filter(|c| *c % p == 0).map(|c| c / p).collect();
    primitive_zero_mod(&f0, p, p) || primitive_zero_mod(&f1, p, p)
}

/// (a, b)_p as isotropy of ⟨a, b, −1⟩ over Q_p (p = 0 for R).
pub fn hilbert_oracle(a: i64, b: i64, p: i64) -> i8 {
    if locally_isotropic(&[squarefree(a), squarefree(b), -1], p) {
        1
    } else {
        -1
    }
}

fn half_sums(coeffs: &[i64], h: i64) -> Vec<(i128, Vec<i64>)> {
    let n = coeffs.len();
    let side = (2 * h + 1) as u64;
    let mut out = Vec::with_capacity(side.pow(n as u32) as usize);
    for idx in 0..side.pow(n as u32) {
        let mut k = idx;
        let mut v = Vec::with_capacity(n);
        let mut val = 0i128;
        for c in coeffs {
            let x = (k % side) as i64 - h;
            k /= side;
            val += *c as i128 * (x as i128) * (x as i128);
            v.push(x);
        }
        out.push((val, v));
    }
    out
}

/// A nonzero integer vector with entries in [−h, h] and Σ cᵢxᵢ² = 0.
pub fn rational_isotropic_vector(coeffs: &[i64], h: i64) -> Option<Vec<i64>> {
    if coeffs.len() < 2 {
        return None;
    }
    let (l, r) = coeffs.split_at(coeffs.len() / 2);
    let mut right: HashMap<i128, Vec<Vec<i64>>> = HashMap::new();
    for (val, v) in half_sums(r, h) {
        right.entry(val).or_default().push(v);
    }
    for (val, vl) in half_sums(l, h) {
        if let Some(cands) = right.get(&-val) {
            for vr in cands {
                if vl.iter().chain(vr).any(|&x| x != 0) {
                    let mut out = vl.clone();
                    out.extend(vr);
                    return Some(out);
                }
            }
        }
    }
    None
}

/// Anisotropic dimension over Q of a form of dimension ≤ 4 with squarefree
/// coefficients. Isotropy needs an explicit vector of height ≤ h; anisotropy
/// needs a local place where the exhaustive search finds no zero. Returns
/// None when neither certificate is found.
pub fn oracle_norm(coeffs: &[i64], h: i64) -> Option<usize> {
    assert!(coeffs.len() <= 4);
    let n = coeffs.len();
    if n <= 1 {
        return Some(n);
    }
    if rational_isotropic_vector(coeffs, h).is_some() {
        let disc: i128 = coeffs.iter().map(|&c| c as i128).product();
        return Some(match n {
            2 => 0,
            3 => 1,
            _ => {
                if is_square_i128(disc) {
                    0
                } else {
                    2
                }
            }
        });
    }
    let mut places = vec![0, 2];
    for c in coeffs {
        places.extend(prime_divisors(*c).into_iter().filter(|&p| p != 2));
    }
    places.sort();
    places.dedup();
    if places.iter().any(|&p| !locally_isotropic(coeffs, p)) {
        Some(n)
    } else {
        None
    }
}
