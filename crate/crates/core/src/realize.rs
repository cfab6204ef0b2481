//! Explicit surface-group representations with a prescribed Witt class.
//!
//! Genus-one blocks come from rational points of the Markov-type equation
//! x₁² + x₂² + x₃² − x₁x₂x₃ = m; blocks are joined by boundary connected sums
//! twisted so that diagonal boundaries multiply, and the last block is glued
//! on with reversed orientation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qforms::SquareClass;
use crate::rational::{self, Rational};
use crate::sl2::{commutator, conj, Mat2};
use crate::surface::{glue_closed, twist_bounded, vee, BoundedSurfaceRep, ClosedSurfaceRep};
use crate::witt::WittClass;

/// Candidate parameters tried per ζ before moving to the next ζ.
const SCAN_WIDTH: u64 = 64;
/// Largest ζ tried by the block scans.
const ZETA_MAX: i64 = 12;
/// Retries of the last join when the forced final eigenvalue is exceptional.
const FINAL_RETRIES: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovTriple {
    pub x1: Rational,
    pub x2: Rational,
    pub x3: Rational,
    pub m: Rational,
}

impl MarkovTriple {
    pub fn holds(&self) -> bool {
        let (x1, x2, x3) = (&self.x1, &self.x2, &self.x3);
        x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3 == self.m
    }
}

/// The one-parameter family of solutions with m = z + 1/z + 2:
/// x₂ = ζ + 1/ζ, x₃ = (z − (ζ² + 1 + ζ⁻²) + 1/z)/(ζ − 1/ζ), x₁ = 1 + ζx₃.
pub fn markov_solution(z: &Rational, zeta: &Rational) -> Result<MarkovTriple> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    if zeta.is_zero() || zeta.abs().is_one() {
        return Err(Error::Degenerate(format!("zeta = {}", rational::format(zeta))));
    }
    let zi = zeta.recip();
    let x2 = zeta + &zi;
    let x3 = (z - &(zeta * zeta + Rational::one() + &zi * &zi) + z.recip()) / (zeta - &zi);
    let x1 = Rational::one() + zeta * &x3;
    let m = z + z.recip() + rational::int(2);
    let t = MarkovTriple { x1, x2, x3, m };
    debug_assert!(t.holds());
    Ok(t)
}

/// A genus-one bounded representation with boundary diag(z, 1/z) and
/// relative class [α] + [β].
#[derive(Clone, Debug)]
pub struct Genus1Block {
    pub rep: BoundedSurfaceRep,
    pub z: Rational,
    pub zeta: Rational,
    pub target: WittClass,
}

/// One scan decision, kept so that realizations are reproducible and auditable.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LogEntry {
    pub stage: String,
    pub lambda: String,
    pub value: String,
    pub zeta: String,
    pub skipped: Vec<String>,
}

fn sq_rational(a: &SquareClass) -> Rational {
    a.to_rational()
}

fn valuation(r: &Rational, p: &BigInt) -> i64 {
    let mut v = 0i64;
    let mut n = r.numer().abs();
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    let mut d = r.denom().clone();
    while (&d % p).is_zero() {
        d /= p;
        v -= 1;
    }
    v
}

fn support(r: &Rational) -> Vec<BigInt> {
    let mut ps: Vec<BigInt> = crate::factor::factorize(r.numer().magnitude())
        .into_iter()
        .chain(crate::factor::factorize(r.denom().magnitude()))
        .map(|(p, _)| BigInt::from(p))
        .collect();
    ps.sort();
    ps.dedup();
    ps
}

/// Picks c ∈ c₀·Q*² so that the entries scaling like c (the 21-entries) and
/// like 1/c (the 12-entries) have balanced p-adic valuations.
fn balance(c0: &Rational, scale_c: &[Rational], scale_inv: &[Rational]) -> Rational {
    let mut primes: Vec<BigInt> = support(c0);
    for r in scale_c.iter().chain(scale_inv) {
        if !r.is_zero() {
            primes.extend(support(r));
        }
    }
    primes.sort();
    primes.dedup();
    let mut c = if c0.is_negative() {
        -Rational::one()
    } else {
        Rational::one()
    };
    for p in primes {
        let parity = valuation(c0, &p).rem_euclid(2);
        let mut targets: Vec<i64> = Vec::new();
        targets.extend(scale_c.iter().filter(|r| !r.is_zero()).map(|r| -valuation(r, &p)));
        targets.extend(scale_inv.iter().filter(|r| !r.is_zero()).map(|r| valuation(r, &p)));
        let lo = targets.iter().copied().min().unwrap_or(0);
        let hi = targets.iter().copied().max().unwrap_or(0);
        let cost = |e: i64| targets.iter().map(|t| (t - e).abs()).max().unwrap_or(0);
        let mut best: Option<(i64, i64)> = None;
        for e in (lo - 1)..=(hi + 1) {
            if e.rem_euclid(2) != parity {
                continue;
            }
            let key = (cost(e), e.abs());
            if best.is_none_or(|(k, b)| key < (k, b.abs())) {
                best = Some((key.0, e));
            }
        }
        let e = best.map(|(_, e)| e).unwrap_or(parity);
        let pr = Rational::from_integer(p.clone());
        c *= pr.pow(e as i32);
    }
    c
}

/// X and Y for given (x, z, c): Y = (1+z)⁻¹[[x₂, (zx₂² − (1+z)²)/c], [c, zx₂]],
/// X = (−x₃ZY + x₁Z + (x₃ − x₁x₂)Y⁻¹ + x₁I)/(m − x₂²).
fn block_matrices(t: &MarkovTriple, z: &Rational, c: &Rational) -> Result<(Mat2, Mat2)> {
    let one = Rational::one();
    let k = (&one + z).recip();
    let y = Mat2::new(
        &k * &t.x2,
        &k * (z * &t.x2 * &t.x2 - (&one + z) * (&one + z)) / c,
        &k * c,
        &k * z * &t.x2,
    )?;
    let zm = [z.clone(), z.recip()];
    let yi = y.inv();
    let s = (&t.m - &t.x2 * &t.x2).recip();
    let e = |zi: &Rational, zyij: &Rational, yiij: &Rational, id: &Rational| {
        &s * (-&t.x3 * zi * zyij + &t.x1 * id * zi + (&t.x3 - &t.x1 * &t.x2) * yiij + &t.x1 * id)
    };
    let zero = Rational::zero();
    let x = Mat2::new(
        e(&zm[0], y.a11(), yi.a11(), &one),
        e(&zm[0], y.a12(), yi.a12(), &zero),
        e(&zm[1], y.a21(), yi.a21(), &zero),
        e(&zm[1], y.a22(), yi.a22(), &one),
    )
    .map_err(|e| Error::Internal(format!("block X: {e}")))?;
    Ok((x, y))
}

/// Builds the block for (C = α, z, ζ) or reports which condition failed.
fn build_block(alpha: &Rational, z: &Rational, zeta: &Rational) -> std::result::Result<(Mat2, Mat2), &'static str> {
    if z.is_zero() || z.abs().is_one() {
        return Err("tr Z = ±2");
    }
    let t = markov_solution(z, zeta).map_err(|_| "degenerate zeta")?;
    if (&t.m - &t.x2 * &t.x2).is_zero() {
        return Err("m = x2^2");
    }
    let one = Rational::one();
    let e1 = &t.x1 * &t.x2 - (&one + z.recip()) * &t.x3;
    let e2 = &t.x1 * (&one + z) - &t.x2 * &t.x3;
    if e1.is_zero() || e2.is_zero() {
        return Err("c equation degenerate");
    }
    let c0 = -(alpha * z * (&one + z)) / (&e1 * &e2);
    let (x1, y1) = block_matrices(&t, z, &one).map_err(|_| "internal")?;
    let c = balance(&c0, &[x1.a21().clone(), y1.a21().clone()], &[x1.a12().clone(), y1.a12().clone()]);
    let (x, y) = block_matrices(&t, z, &c).map_err(|_| "internal")?;
    debug_assert_eq!(commutator(&x, &y), Mat2::diag(z).unwrap());
    debug_assert_eq!(x.trace(), t.x1);
    debug_assert_eq!(y.trace(), t.x2);
    Ok((x, y))
}

fn make_block(alpha: &Rational, beta: &Rational, z: &Rational, zeta: &Rational, x: Mat2, y: Mat2) -> Result<Genus1Block> {
    let rep = BoundedSurfaceRep::new(vec![(x, y)])?;
    if rep.boundary() != &Mat2::diag(z)? {
        return Err(Error::Internal("block boundary is not diag(z, 1/z)".into()));
    }
    Ok(Genus1Block {
        rep,
        z: z.clone(),
        zeta: zeta.clone(),
        target: WittClass::from_symbols(&[SquareClass::of(alpha)?, SquareClass::of(beta)?]),
    })
}

/// Block with prescribed eigenvalue z ∈ −αβ·Q*²; ζ = 2, 3, … are tried
/// before the eigenvalue is declared exceptional.
pub fn genus1_block_with_eigenvalue(alpha: &Rational, beta: &Rational, z: &Rational) -> Result<Genus1Block> {
    let q = z / &(-(alpha * beta));
    if rational::sqrt_exact(&q).is_none() {
        return Err(Error::NotSquare(rational::format(&q)));
    }
    for zeta in 2..=ZETA_MAX {
        let zeta = rational::int(zeta);
        match build_block(alpha, z, &zeta) {
            Ok((x, y)) => return make_block(alpha, beta, z, &zeta, x, y),
            Err("tr Z = ±2") => break,
            Err(_) => continue,
        }
    }
    Err(Error::ExceptionalZ(rational::format(z)))
}

/// Scans z = s·k² for k = seed, seed+1, …, with s the squarefree kernel of −αβ,
/// so that z ∈ −αβ·Q*² has the smallest available height.
pub fn genus1_block_logged(alpha: &Rational, beta: &Rational, seed: u64, stage: &str) -> Result<(Genus1Block, LogEntry)> {
    let s = sq_rational(&SquareClass::of(&-(alpha * beta))?);
    for zeta in 2..=ZETA_MAX {
        let zeta = rational::int(zeta);
        let mut skipped = Vec::new();
        for k in seed..seed + SCAN_WIDTH {
            let kk = Rational::from_integer(BigInt::from(k));
            let z = &s * &kk * &kk;
            match build_block(alpha, &z, &zeta) {
                Ok((x, y)) => {
                    let block = make_block(alpha, beta, &z, &zeta, x, y)?;
                    let lambda = rational::sqrt_exact(&(&z / &(-(alpha * beta)))).expect("z/(−αβ) is a square");
                    let entry = LogEntry {
                        stage: stage.to_string(),
                        lambda: rational::format(&lambda),
                        value: rational::format(&z),
                        zeta: rational::format(&zeta),
                        skipped,
                    };
                    return Ok((block, entry));
                }
                Err(why) => skipped.push(format!("z={}: {why}", rational::format(&z))),
            }
        }
    }
    Err(Error::Degenerate("no admissible boundary eigenvalue found".into()))
}

pub fn genus1_block(alpha: &Rational, beta: &Rational, seed: u64) -> Result<Genus1Block> {
    Ok(genus1_block_logged(alpha, beta, seed, "block")?.0)
}

fn markov_m4(l1: &Rational, l2: &Rational, l3: &Rational) -> bool {
    let t = |l: &Rational| l + l.recip();
    let (t1, t2, t3) = (t(l1), t(l2), t(l3));
    &t1 * &t1 + &t2 * &t2 + &t3 * &t3 - &t1 * &t2 * &t3 == rational::int(4)
}

fn check_eigen(l: &Rational) -> Result<()> {
    if l.is_zero() || l.abs().is_one() {
        return Err(Error::Degenerate(format!("eigenvalue {}", rational::format(l))));
    }
    Ok(())
}

/// L, M with tr L = λ₁ + 1/λ₁, tr M = λ₂ + 1/λ₂, LM = diag(λ₃, 1/λ₃), L₂₁ = c.
pub fn pair_lm(l1: &Rational, l2: &Rational, l3: &Rational, c: &Rational) -> Result<(Mat2, Mat2)> {
    for l in [l1, l2, l3] {
        check_eigen(l)?;
    }
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    if markov_m4(l1, l2, l3) {
        return Err(Error::MarkovM4);
    }
    let t1 = l1 + l1.recip();
    let t2 = l2 + l2.recip();
    let a = (l3 * &t1 - &t2) / (l3 - l3.recip());
    let l = Mat2::new(
        a.clone(),
        -(&a * &a - &t1 * &a + Rational::one()) / c,
        c.clone(),
        &t1 - &a,
    )?;
    let m = &l.inv() * &Mat2::diag(l3)?;
    Ok((l, m))
}

fn primitive(v: (Rational, Rational)) -> (Rational, Rational) {
    let l = v.0.denom().lcm(v.1.denom());
    let a = (&v.0 * Rational::from_integer(l.clone())).to_integer();
    let b = (&v.1 * Rational::from_integer(l)).to_integer();
    let g = a.gcd(&b);
    (Rational::new(a, g.clone()), Rational::new(b, g))
}

fn eigenvector(l: &Mat2, mu: &Rational) -> (Rational, Rational) {
    let v = if !l.a21().is_zero() {
        (mu - l.a22(), l.a21().clone())
    } else if !l.a12().is_zero() || mu != l.a11() {
        (l.a12().clone(), mu - l.a11())
    } else {
        (Rational::one(), Rational::zero())
    };
    primitive(v)
}

/// A ∈ SL(2,Q) with A·diag(λ, 1/λ)·A⁻¹ = L; its columns are primitive integer
/// eigenvectors for λ and 1/λ, the second rescaled to make det A = 1.
pub fn conjugator_to(l: &Mat2, lambda: &Rational) -> Result<Mat2> {
    check_eigen(lambda)?;
    if l.trace() != lambda + lambda.recip() {
        return Err(Error::NotEigenvalue(rational::format(lambda)));
    }
    let d = Mat2::diag(lambda)?;
    if *l == d {
        return Ok(Mat2::identity());
    }
    let v = eigenvector(l, lambda);
    let w = eigenvector(l, &lambda.recip());
    let det = &v.0 * &w.1 - &v.1 * &w.0;
    let a = Mat2::new(v.0, &w.0 / &det, v.1, &w.1 / &det)?;
    if conj(&a, &d) != *l {
        return Err(Error::Internal("conjugator identity fails".into()));
    }
    Ok(a)
}

/// Twisted boundary connected sum of `prev` (boundary diag(λ₁, ·)) with a
/// block (boundary diag(λ₂, ·)); the new boundary is diag(λ₃, ·) with
/// λ₃ ∈ −γδλ₁λ₂·Q*², and the relative class grows by [γ] + [δ].
/// `accept` may veto a λ₃ (used to keep the final eigenvalue admissible).
pub fn vee_with_twists_logged(
    prev: &BoundedSurfaceRep,
    block: &Genus1Block,
    gamma: &Rational,
    delta: &Rational,
    seed: u64,
    stage: &str,
    accept: &dyn Fn(&Rational) -> bool,
) -> Result<(BoundedSurfaceRep, Rational, LogEntry)> {
    let w = prev.boundary();
    if !w.is_diagonal() || w.is_central() {
        return Err(Error::Boundary(format!("expected diagonal non-central boundary, got {w}")));
    }
    let b = block.rep.boundary();
    if !b.is_diagonal() || b.is_central() {
        return Err(Error::Boundary(format!("expected diagonal non-central boundary, got {b}")));
    }
    let l1 = w.a11().clone();
    let l2 = b.a11().clone();
    let s = sq_rational(&SquareClass::of(&-(gamma * delta * &l1 * &l2))?);
    let c = sq_rational(&SquareClass::of(&(gamma * &l1))?);
    let mut skipped = Vec::new();
    for k in seed..seed + FINAL_RETRIES {
        let kk = Rational::from_integer(BigInt::from(k));
        let l3 = &s * &kk * &kk;
        let why = if l3.abs().is_one() {
            Some("lambda3 = ±1")
        } else if markov_m4(&l1, &l2, &l3) {
            Some("traces satisfy M4")
        } else if !accept(&l3) {
            Some("final eigenvalue exceptional")
        } else {
            None
        };
        if let Some(why) = why {
            skipped.push(format!("lambda3={}: {why}", rational::format(&l3)));
            continue;
        }
        let (lm, mm) = pair_lm(&l1, &l2, &l3, &c)?;
        let a = conjugator_to(&lm, &l1)?;
        let bb = conjugator_to(&mm, &l2)?;
        let joined = vee(&twist_bounded(prev, &a), &twist_bounded(&block.rep, &bb));
        if joined.boundary() != &Mat2::diag(&l3)? {
            return Err(Error::Internal("joined boundary is not diag(λ₃, 1/λ₃)".into()));
        }
        let entry = LogEntry {
            stage: stage.to_string(),
            lambda: rational::format(&kk),
            value: rational::format(&l3),
            zeta: String::new(),
            skipped,
        };
        return Ok((joined, l3, entry));
    }
    Err(Error::Degenerate("no admissible lambda3 found".into()))
}

pub fn vee_with_twists(
    prev: &BoundedSurfaceRep,
    block: &Genus1Block,
    gamma: &Rational,
    delta: &Rational,
    seed: u64,
) -> Result<BoundedSurfaceRep> {
    Ok(vee_with_twists_logged(prev, block, gamma, delta, seed, "join", &|_| true)?.0)
}

/// Symbol lists for the construction: (α_i, β_i) for i = 1..g and
/// (γ_j, δ_j) for j = 2..g−1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Targets {
    pub ab: Vec<(SquareClass, SquareClass)>,
    pub gd: Vec<(SquareClass, SquareClass)>,
}

impl Targets {
    pub fn symbols(&self) -> Vec<SquareClass> {
        self.ab
            .iter()
            .chain(&self.gd)
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }
}

/// Writes q as 4g−4 symbols: the canonical entries of q fill the (α, β)
/// slots first and [1], [−1] pads fill the rest. The entry product is a
/// square because d±(q) = 1.
pub fn decompose_target(q: &WittClass, g: usize) -> Result<Targets> {
    if g < 2 {
        return Err(Error::Genus(2));
    }
    if !q.in_i2() {
        return Err(Error::NotInI2(q.signed_discriminant().to_string()));
    }
    let bound = 4 * g - 4;
    let norm = q.norm();
    if norm > bound {
        return Err(Error::NormTooLarge { norm, bound });
    }
    let mut syms: Vec<SquareClass> = q.rep().entries().to_vec();
    while syms.len() < bound {
        syms.push(SquareClass::one());
        syms.push(SquareClass::minus_one());
    }
    let pairs: Vec<(SquareClass, SquareClass)> = syms
        .chunks(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect();
    let (ab, gd) = pairs.split_at(g);
    Ok(Targets {
        ab: ab.to_vec(),
        gd: gd.to_vec(),
    })
}

/// A realization together with its scan log.
#[derive(Clone, Debug)]
pub struct Realization {
    pub rep: ClosedSurfaceRep,
    pub targets: Targets,
    pub log: Vec<LogEntry>,
}

fn final_ok<'a>(alpha: &'a Rational, beta: &'a Rational) -> impl Fn(&Rational) -> bool + 'a {
    move |z: &Rational| {
        let (a, b) = (-alpha.clone(), -beta.clone());
        genus1_block_with_eigenvalue(&a, &b, z).is_ok()
    }
}

/// A closed genus-g representation whose Witt class is q (q ∈ I², ‖q‖ ≤ 4g−4).
pub fn realize_logged(q: &WittClass, g: usize) -> Result<Realization> {
    let targets = decompose_target(q, g)?;
    let r = |a: &SquareClass| sq_rational(a);
    let (ag, bg) = {
        let (a, b) = &targets.ab[g - 1];
        (r(a), r(b))
    };
    let accept = final_ok(&ag, &bg);
    let mut log = Vec::new();

    let (a1, b1) = (r(&targets.ab[0].0), r(&targets.ab[0].1));
    let mut seed = 1;
    let (mut zeta_rep, mut u) = loop {
        let (block, entry) = genus1_block_logged(&a1, &b1, seed, "block 1")?;
        if g > 2 || accept(&block.z) {
            log.push(entry);
            break (block.rep, block.z);
        }
        seed = entry.lambda.parse::<u64>().map(|k| k + 1).unwrap_or(seed + 1);
        if seed > FINAL_RETRIES {
            return Err(Error::Degenerate("final eigenvalue stays exceptional".into()));
        }
        let mut e = entry;
        e.skipped.push("final eigenvalue exceptional".into());
        log.push(e);
    };

    for j in 2..g {
        let (aj, bj) = (r(&targets.ab[j - 1].0), r(&targets.ab[j - 1].1));
        let (block, entry) = genus1_block_logged(&aj, &bj, 1, &format!("block {j}"))?;
        log.push(entry);
        let (gj, dj) = (r(&targets.gd[j - 2].0), r(&targets.gd[j - 2].1));
        let always = |_: &Rational| true;
        let check: &dyn Fn(&Rational) -> bool = if j == g - 1 { &accept } else { &always };
        let (joined, l3, entry) =
            vee_with_twists_logged(&zeta_rep, &block, &gj, &dj, 1, &format!("join {j}"), check)?;
        log.push(entry);
        zeta_rep = joined;
        u = l3;
    }

    let last = genus1_block_with_eigenvalue(&-ag.clone(), &-bg.clone(), &u)?;
    log.push(LogEntry {
        stage: format!("block {g}"),
        lambda: rational::format(
            &rational::sqrt_exact(&(&u / &(-(&ag * &bg)))).expect("forced eigenvalue class"),
        ),
        value: rational::format(&u),
        zeta: rational::format(&last.zeta),
        skipped: Vec::new(),
    });
    let rep = glue_closed(&zeta_rep, &last.rep)?;
    Ok(Realization { rep, targets, log })
}

pub fn realize(q: &WittClass, g: usize) -> Result<ClosedSurfaceRep> {
    Ok(realize_logged(q, g)?.rep)
}
