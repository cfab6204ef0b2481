//! Square classes, Hilbert symbols and local invariants of diagonal forms over Q.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::{factorize, is_probable_prime};
use crate::rational::{self, Rational};

/// An element of Q*/Q*^2, stored as a signed squarefree integer.
///
/// The prime support is kept alongside the value so that products and
/// Hilbert symbols never re-factor.
#[derive(Clone, Debug)]
pub struct SquareClass {
    value: BigInt,
    primes: Vec<BigUint>,
}

impl PartialEq for SquareClass {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for SquareClass {}

impl Hash for SquareClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: positive before negative, then by absolute value.
impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.is_negative(), self.value.magnitude())
            .cmp(&(other.is_negative(), other.value.magnitude()))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass {
            value: BigInt::one(),
            primes: Vec::new(),
        }
    }

    pub fn minus_one() -> Self {
        SquareClass {
            value: -BigInt::one(),
            primes: Vec::new(),
        }
    }

    /// The class of a nonzero rational.
    pub fn of(r: &Rational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut primes = odd_support(r.numer().magnitude());
        primes.extend(odd_support(r.denom().magnitude()));
        primes.sort();
        // numerator and denominator are coprime, so no prime repeats
        Ok(Self::from_parts(r.is_negative(), primes))
    }

    pub fn from_i64(n: i64) -> Result<Self> {
        Self::of(&rational::int(n))
    }

    /// The class of a product of rationals, or None when a factor is zero.
    /// Factors are handled one at a time, which keeps factorization sizes small.
    pub fn of_product(factors: &[&Rational]) -> Option<Self> {
        let mut acc = Self::one();
        for r in factors {
            acc = acc.mul(&Self::of(r).ok()?);
        }
        Some(acc)
    }

    fn from_parts(negative: bool, primes: Vec<BigUint>) -> Self {
        let mag = primes.iter().fold(BigUint::one(), |acc, p| acc * p);
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        SquareClass {
            value: BigInt::from_biguint(sign, mag),
            primes,
        }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// Primes dividing the squarefree value, ascending.
    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn has_prime(&self, p: &BigUint) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    pub fn neg(&self) -> Self {
        SquareClass {
            value: -&self.value,
            primes: self.primes.clone(),
        }
    }

    /// Product in Q*/Q*^2: symmetric difference of supports.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.primes, &other.primes);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self::from_parts(self.is_negative() != other.is_negative(), out)
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.value.clone())
    }

    /// Signed squarefree integer as text, e.g. "-14".
    pub fn parse(s: &str) -> Result<Self> {
        Self::of(&rational::parse(s)?)
    }
}

fn odd_support(n: &BigUint) -> Vec<BigUint> {
    factorize(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .collect()
}

/// The square class of a nonzero rational.
pub fn square_class(r: &Rational) -> Result<SquareClass> {
    SquareClass::of(r)
}

/// A place of Q: the real place or a prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Prime(BigUint),
}

impl Place {
    /// Checked constructor; composite or unit p is rejected.
    pub fn prime(p: BigUint) -> Result<Self> {
        if p < BigUint::from(2u32) || !is_probable_prime(&p) {
            return Err(Error::CompositePlace(p.to_string()));
        }
        Ok(Place::Prime(p))
    }

    pub fn two() -> Self {
        Place::Prime(BigUint::from(2u32))
    }

    /// "inf" (also "real", "oo") or a prime in decimal.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "real" | "oo" | "R" => Ok(Place::Real),
            t => {
                let p: BigUint = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid place {t:?}")))?;
                Self::prime(p)
            }
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Jacobi symbol (a/n) for odd n > 0.
fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn jacobi_big(a: &BigUint, n: &BigUint) -> i8 {
    if let Some(nn) = n.to_u64() {
        return jacobi_u64((a % n).to_u64().unwrap(), nn);
    }
    let mut a = a % n;
    let mut n = n.clone();
    let mut t = 1i8;
    let eight = BigUint::from(8u32);
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        a >>= z;
        let r8 = (&n % &eight).to_u8().unwrap();
        if z % 2 == 1 && (r8 == 3 || r8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        let a4 = (&a % 4u32).to_u8().unwrap();
        let n4 = (&n % 4u32).to_u8().unwrap();
        if a4 == 3 && n4 == 3 {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Legendre symbol of the integer u modulo the odd prime p (u prime to p).
fn legendre(u: &BigInt, p: &BigUint) -> i8 {
    let r = u.mod_floor(&BigInt::from(p.clone()));
    jacobi_big(r.magnitude(), p)
}

fn unit_part(a: &SquareClass, p: &BigUint) -> (bool, BigInt) {
    if a.has_prime(p) {
        (true, a.value() / BigInt::from(p.clone()))
    } else {
        (false, a.value().clone())
    }
}

fn mod8(u: &BigInt) -> u8 {
    u.mod_floor(&BigInt::from(8)).to_u8().unwrap()
}

/// Hilbert symbol on square classes.
pub fn hilbert_sc(a: &SquareClass, b: &SquareClass, v: &Place) -> i8 {
    match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) if p == &BigUint::from(2u32) => {
            let (al, u) = unit_part(a, p);
            let (be, w) = unit_part(b, p);
            let (u8_, w8) = (mod8(&u), mod8(&w));
            let eps = |x: u8| ((x - 1) / 2) % 2;
            let omega = |x: u8| ((x as u32 * x as u32 - 1) / 8 % 2) as u8;
            let mut e = eps(u8_) * eps(w8);
            if al {
                e += omega(w8);
            }
            if be {
                e += omega(u8_);
            }
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (al, u) = unit_part(a, p);
            let (be, w) = unit_part(b, p);
            let mut s = 1i8;
            if al && be && (p % 4u32) == BigUint::from(3u32) {
                s = -s;
            }
            if be {
                s *= legendre(&u, p);
            }
            if al {
                s *= legendre(&w, p);
            }
            s
        }
    }
}

/// Hilbert symbol (a,b)_v of nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: &Place) -> Result<i8> {
    Ok(hilbert_sc(&SquareClass::of(a)?, &SquareClass::of(b)?, v))
}

/// Whether the class is a square in the completion at v.
pub fn is_local_square(d: &SquareClass, v: &Place) -> bool {
    match v {
        Place::Real => !d.is_negative(),
        Place::Prime(p) if p == &BigUint::from(2u32) => mod8(d.value()) == 1,
        Place::Prime(p) => !d.has_prime(p) && legendre(d.value(), p) == 1,
    }
}

/// A diagonal form ⟨a_1, ..., a_n⟩; the empty form is the zero form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DiagonalForm {
    entries: Vec<SquareClass>,
}

impl DiagonalForm {
    pub fn new(entries: Vec<SquareClass>) -> Self {
        DiagonalForm { entries }
    }

    pub fn from_rationals(rs: &[Rational]) -> Result<Self> {
        Ok(DiagonalForm {
            entries: rs.iter().map(SquareClass::of).collect::<Result<_>>()?,
        })
    }

    pub fn from_ints(ns: &[i64]) -> Result<Self> {
        Self::from_rationals(&ns.iter().map(|&n| rational::int(n)).collect::<Vec<_>>())
    }

    /// Comma-separated rationals, e.g. "1,7,-2,-14"; blank is the zero form.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        let rs = s
            .split(',')
            .map(rational::parse_nonzero)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(&rs)
    }

    pub fn entries(&self) -> &[SquareClass] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Orthogonal sum.
    pub fn sum(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        DiagonalForm { entries }
    }

    pub fn scaled(&self, a: &SquareClass) -> Self {
        DiagonalForm {
            entries: self.entries.iter().map(|e| e.mul(a)).collect(),
        }
    }

    /// Plain discriminant ∏ a_i.
    pub fn discriminant(&self) -> SquareClass {
        self.entries
            .iter()
            .fold(SquareClass::one(), |acc, e| acc.mul(e))
    }

    /// Primes dividing some entry, ascending and without repeats.
    pub fn support(&self) -> Vec<BigUint> {
        let mut ps: Vec<BigUint> = self
            .entries
            .iter()
            .flat_map(|e| e.primes().iter().cloned())
            .collect();
        ps.sort();
        ps.dedup();
        ps
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// ∏_{i<j} (a_i, a_j)_v, accumulated as ∏_j (a_1⋯a_{j-1}, a_j)_v.
pub fn hasse_invariant(f: &DiagonalForm, v: &Place) -> i8 {
    let mut d = SquareClass::one();
    let mut eps = 1i8;
    for a in f.entries() {
        eps *= hilbert_sc(&d, a, v);
        d = d.mul(a);
    }
    eps
}

pub fn signed_discriminant(f: &DiagonalForm) -> SquareClass {
    let n = f.dim();
    let d = f.discriminant();
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        d.neg()
    } else {
        d
    }
}

pub fn signature(f: &DiagonalForm) -> i64 {
    f.entries()
        .iter()
        .map(|e| if e.is_negative() { -1 } else { 1 })
        .sum()
}

/// Local data (dim, plain discriminant, Hasse invariant) at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariants {
    pub dim: usize,
    pub disc: SquareClass,
    pub hasse: i8,
}

impl LocalInvariants {
    pub fn of(f: &DiagonalForm, v: &Place) -> Self {
        LocalInvariants {
            dim: f.dim(),
            disc: f.discriminant(),
            hasse: hasse_invariant(f, v),
        }
    }

    /// Isotropy over Q_p for a prime place.
    pub fn isotropic_at_prime(&self, v: &Place) -> bool {
        match self.dim {
            0 | 1 => false,
            2 => is_local_square(&self.disc.neg(), v),
            3 => hilbert_sc(&SquareClass::minus_one(), &self.disc.neg(), v) == self.hasse,
            4 => {
                !is_local_square(&self.disc, v)
                    || self.hasse == hilbert_sc(&SquareClass::minus_one(), &SquareClass::minus_one(), v)
            }
            _ => true,
        }
    }

    /// Splits off one hyperbolic plane: d ↦ −d, ε ↦ ε·(−d, −1).
    pub fn split_plane(&self, v: &Place) -> Self {
        let disc = self.disc.neg();
        let hasse = self.hasse * hilbert_sc(&disc, &SquareClass::minus_one(), v);
        LocalInvariants {
            dim: self.dim - 2,
            disc,
            hasse,
        }
    }

    /// Anisotropic kernel at a prime place, by repeated plane splitting.
    pub fn kernel_at_prime(&self, v: &Place) -> Self {
        let mut cur = self.clone();
        while cur.isotropic_at_prime(v) {
            cur = cur.split_plane(v);
        }
        cur
    }
}

/// Dimension of the anisotropic kernel of f over the completion at v.
pub fn local_anisotropic_dim(f: &DiagonalForm, v: &Place) -> usize {
    match v {
        Place::Real => signature(f).unsigned_abs() as usize,
        Place::Prime(_) => LocalInvariants::of(f, v).kernel_at_prime(v).dim,
    }
}
