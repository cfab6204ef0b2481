//! Integer factorization backing square-class extraction.
//!
//! Word-sized inputs go to `num_prime`. Larger inputs are split by trial
//! division, Pollard-Brent and then Montgomery-curve ECM with growing bounds.
//! Every stage is deterministic, so repeated runs take identical paths.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_prime::nt_funcs::{factorize64, is_prime};
use num_prime::PrimalityTestConfig;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_BOUND: u64 = 1 << 12;
const RHO_ITERATIONS: u64 = 1 << 17;

/// (B1, curves) schedule for ECM; the last level repeats indefinitely.
const ECM_LEVELS: &[(u64, u32)] = &[
    (2_000, 25),
    (11_000, 90),
    (50_000, 300),
    (250_000, 700),
    (1_000_000, 1800),
];

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_BOUND))
}

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primality test: deterministic below 2^64, BPSW above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(m) => num_prime::nt_funcs::is_prime64(m),
        None => is_prime(n, Some(PrimalityTestConfig::bpsw())).probably(),
    }
}

/// Prime factorization of `n` as (prime, exponent), sorted by prime.
/// Returns an empty list for 0 and 1.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut acc: Vec<(BigUint, u32)> = Vec::new();
    if n <= &BigUint::one() {
        return acc;
    }
    let mut m = n.clone();
    if let Some(w) = m.to_u64() {
        push_word(&mut acc, w, 1);
        return finish(acc);
    }
    for &p in small_primes() {
        let pb = BigUint::from(p);
        let mut e = 0u32;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            acc.push((pb, e));
        }
    }
    let mut stack = vec![(m, 1u32)];
    while let Some((c, mult)) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if let Some(w) = c.to_u64() {
            push_word(&mut acc, w, mult);
            continue;
        }
        if is_probable_prime(&c) {
            acc.push((c, mult));
            continue;
        }
        if let Some((root, k)) = perfect_power(&c) {
            stack.push((root, mult * k));
            continue;
        }
        let d = find_divisor(&c);
        let q = &c / &d;
        stack.push((d, mult));
        stack.push((q, mult));
    }
    finish(acc)
}

fn push_word(acc: &mut Vec<(BigUint, u32)>, w: u64, mult: u32) {
    for (p, e) in factorize64(w) {
        acc.push((BigUint::from(p), e as u32 * mult));
    }
}

fn finish(mut acc: Vec<(BigUint, u32)>) -> Vec<(BigUint, u32)> {
    acc.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::with_capacity(acc.len());
    for (p, e) in acc {
        match out.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.push((p, e)),
        }
    }
    out
}

fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    for k in 2..=bits {
        let r = n.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// A nontrivial divisor of the odd composite `n` (not a perfect power).
fn find_divisor(n: &BigUint) -> BigUint {
    for c in 1u64..4 {
        if let Some(d) = pollard_brent(n, c, RHO_ITERATIONS) {
            return d;
        }
    }
    ecm(n)
}

fn pollard_brent(n: &BigUint, c: u64, max_iter: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r: u64 = 1;
    let batch: u64 = 128;
    let mut iter = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = batch.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += steps;
        }
        iter += r;
        r *= 2;
        if iter > max_iter && g.is_one() {
            return None;
        }
    }
    if &g == n {
        // Batched product overshot; replay one step at a time.
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g.is_one() || &g == n {
        None
    } else {
        Some(g)
    }
}

struct Curve<'a> {
    n: &'a BigUint,
    a24: BigUint,
}

#[derive(Clone)]
struct Pt {
    x: BigUint,
    z: BigUint,
}

impl Curve<'_> {
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    fn add_mod(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if &s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % self.n
    }

    fn dbl(&self, p: &Pt) -> Pt {
        let s = self.add_mod(&p.x, &p.z);
        let d = self.sub(&p.x, &p.z);
        let t1 = self.mul(&s, &s);
        let t2 = self.mul(&d, &d);
        let t3 = self.sub(&t1, &t2);
        let x = self.mul(&t1, &t2);
        let inner = self.add_mod(&t2, &self.mul(&self.a24, &t3));
        let z = self.mul(&t3, &inner);
        Pt { x, z }
    }

    fn add(&self, p: &Pt, q: &Pt, diff: &Pt) -> Pt {
        let u = self.mul(&self.sub(&p.x, &p.z), &self.add_mod(&q.x, &q.z));
        let v = self.mul(&self.add_mod(&p.x, &p.z), &self.sub(&q.x, &q.z));
        let s = self.add_mod(&u, &v);
        let d = self.sub(&u, &v);
        Pt {
            x: self.mul(&diff.z, &self.mul(&s, &s)),
            z: self.mul(&diff.x, &self.mul(&d, &d)),
        }
    }

    fn ladder(&self, p: &Pt, k: u64) -> Pt {
        if k == 1 {
            return p.clone();
        }
        let mut r0 = p.clone();
        let mut r1 = self.dbl(p);
        let bits = 64 - k.leading_zeros();
        for i in (0..bits - 1).rev() {
            if (k >> i) & 1 == 1 {
                r0 = self.add(&r1, &r0, p);
                r1 = self.dbl(&r1);
            } else {
                r1 = self.add(&r0, &r1, p);
                r0 = self.dbl(&r0);
            }
        }
        r0
    }
}

fn modinv(a: &BigUint, n: &BigUint) -> Result<BigUint, BigUint> {
    use num_bigint::BigInt;
    let a = BigInt::from(a.clone());
    let m = BigInt::from(n.clone());
    let e = a.extended_gcd(&m);
    if e.gcd.is_one() {
        Ok(e.x.mod_floor(&m).to_biguint().unwrap())
    } else {
        Err(e.gcd.magnitude().clone())
    }
}

fn useful(g: &BigUint, n: &BigUint) -> bool {
    !g.is_one() && g != n && !g.is_zero()
}

/// Runs one Suyama curve with stage bounds (b1, b2); returns a factor or None.
fn ecm_curve(n: &BigUint, sigma: u64, b1: u64, b2: u64, primes: &[u64]) -> Option<BigUint> {
    let s = BigUint::from(sigma);
    let u = (&s * &s + n - BigUint::from(5u32)) % n;
    let v = (BigUint::from(4u32) * &s) % n;
    let u3 = (&u * &u % n) * &u % n;
    let v3 = (&v * &v % n) * &v % n;
    let vmu = if v >= u { &v - &u } else { &v + n - &u };
    let num = (&vmu * &vmu % n) * &vmu % n * ((BigUint::from(3u32) * &u + &v) % n) % n;
    let den = BigUint::from(16u32) * &u3 % n * &v % n;
    let inv = match modinv(&den, n) {
        Ok(i) => i,
        Err(g) => return useful(&g, n).then_some(g),
    };
    let curve = Curve {
        n,
        a24: num * inv % n,
    };
    let mut p = Pt { x: u3, z: v3 };

    for &q in primes.iter().take_while(|&&q| q <= b1) {
        let mut pe = q;
        while pe <= b1 / q {
            pe *= q;
        }
        p = curve.ladder(&p, pe);
    }
    let g = p.z.gcd(n);
    if useful(&g, n) {
        return Some(g);
    }
    if !g.is_one() {
        return None;
    }

    // Stage 2: baby steps j < D/2 coprime to D, giant steps m·D.
    const D: u64 = 210;
    let mut baby: Vec<Option<Pt>> = vec![None; (D / 2) as usize];
    let p2 = curve.dbl(&p);
    let mut prev = p.clone();
    let mut cur = curve.add(&p2, &p, &p);
    baby[1] = Some(p.clone());
    let mut j = 3u64;
    while j < D / 2 {
        if j.gcd(&D) == 1 {
            baby[j as usize] = Some(cur.clone());
        }
        let next = curve.add(&cur, &p2, &prev);
        prev = cur;
        cur = next;
        j += 2;
    }
    let m0 = (b1 / D).max(1);
    let step = curve.ladder(&p, D);
    let mut g_prev = curve.ladder(&p, (m0 - 1).max(1) * D);
    let mut g_cur = curve.ladder(&p, m0 * D);
    if m0 == 1 {
        g_prev = Pt {
            x: BigUint::zero(),
            z: BigUint::zero(),
        };
    }
    let mut acc = BigUint::one();
    let mut idx = primes.partition_point(|&q| q <= b1);
    let mut m = m0;
    while m * D - D / 2 <= b2 {
        let lo = m * D - D / 2;
        let hi = m * D + D / 2;
        while idx < primes.len() && primes[idx] < hi {
            let q = primes[idx];
            if q >= lo && q > b1 {
                let j = q.abs_diff(m * D);
                if let Some(Some(b)) = baby.get(j as usize) {
                    let t = curve.sub(&curve.mul(&g_cur.x, &b.z), &curve.mul(&b.x, &g_cur.z));
                    acc = curve.mul(&acc, &t);
                }
            }
            idx += 1;
        }
        let next = if m == 1 && m0 == 1 {
            curve.dbl(&g_cur)
        } else {
            curve.add(&g_cur, &step, &g_prev)
        };
        g_prev = g_cur;
        g_cur = next;
        m += 1;
    }
    let g = acc.gcd(n);
    useful(&g, n).then_some(g)
}

fn ecm(n: &BigUint) -> BigUint {
    let mut sigma = 6u64;
    let mut level = 0usize;
    loop {
        let (b1, curves) = ECM_LEVELS[level.min(ECM_LEVELS.len() - 1)];
        let b2 = b1 * 50;
        let primes = sieve(b2 + 210);
        for _ in 0..curves {
            if let Some(d) = ecm_curve(n, sigma, b1, b2, &primes) {
                return d;
            }
            sigma += 1;
        }
        level += 1;
    }
}
