//! SL(2,Q), its normal forms, and the cochains w, Φ*b and n with Φ*b = w + δn.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qforms::SquareClass;
use crate::rational::{self, Rational};
use crate::witt::WittClass;

/// A 2×2 rational matrix of determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a11: Rational,
    a12: Rational,
    a21: Rational,
    a22: Rational,
}

impl Mat2 {
    pub fn new(a11: Rational, a12: Rational, a21: Rational, a22: Rational) -> Result<Self> {
        let det = &a11 * &a22 - &a12 * &a21;
        if !det.is_one() {
            return Err(Error::Determinant(rational::format(&det)));
        }
        Ok(Mat2 { a11, a12, a21, a22 })
    }

    /// Caller guarantees det = 1.
    fn raw(a11: Rational, a12: Rational, a21: Rational, a22: Rational) -> Self {
        debug_assert!((&a11 * &a22 - &a12 * &a21).is_one());
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn from_ints(a11: i64, a12: i64, a21: i64, a22: i64) -> Result<Self> {
        Self::new(
            rational::int(a11),
            rational::int(a12),
            rational::int(a21),
            rational::int(a22),
        )
    }

    pub fn identity() -> Self {
        Self::raw(Rational::one(), Rational::zero(), Rational::zero(), Rational::one())
    }

    /// diag(z, 1/z).
    pub fn diag(z: &Rational) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Self::raw(z.clone(), Rational::zero(), Rational::zero(), z.recip()))
    }

    pub fn a11(&self) -> &Rational {
        &self.a11
    }

    pub fn a12(&self) -> &Rational {
        &self.a12
    }

    pub fn a21(&self) -> &Rational {
        &self.a21
    }

    pub fn a22(&self) -> &Rational {
        &self.a22
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    pub fn inv(&self) -> Self {
        Self::raw(
            self.a22.clone(),
            -&self.a12,
            -&self.a21,
            self.a11.clone(),
        )
    }

    pub fn trace(&self) -> Rational {
        &self.a11 + &self.a22
    }

    pub fn neg(&self) -> Self {
        Self::raw(-&self.a11, -&self.a12, -&self.a21, -&self.a22)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn is_diagonal(&self) -> bool {
        self.a12.is_zero() && self.a21.is_zero()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.a21.is_zero()
    }

    /// ±I.
    pub fn is_central(&self) -> bool {
        self.is_diagonal() && self.a11 == self.a22
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// The largest numerator/denominator digit count among the entries.
    pub fn height_digits(&self) -> usize {
        self.entries()
            .iter()
            .map(|r| rational::height_digits(r))
            .max()
            .unwrap_or(1)
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, y: &Mat2) -> Mat2 {
        Mat2::raw(
            &self.a11 * &y.a11 + &self.a12 * &y.a21,
            &self.a11 * &y.a12 + &self.a12 * &y.a22,
            &self.a21 * &y.a11 + &self.a22 * &y.a21,
            &self.a21 * &y.a12 + &self.a22 * &y.a22,
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |r: &Rational| rational::format(r);
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            s(&self.a11),
            s(&self.a12),
            s(&self.a21),
            s(&self.a22)
        )
    }
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    x * y
}

pub fn mat_inv(x: &Mat2) -> Mat2 {
    x.inv()
}

/// a·x·a⁻¹.
pub fn conj(a: &Mat2, x: &Mat2) -> Mat2 {
    &(a * x) * &a.inv()
}

/// x·y·x⁻¹·y⁻¹.
pub fn commutator(x: &Mat2, y: &Mat2) -> Mat2 {
    &(&(x * y) * &x.inv()) * &y.inv()
}

/// Upper-triangular (G1) or generic (G2) normal form of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// [[t, u/t], [0, 1/t]].
    G1 { u: Rational, t: Rational },
    /// [[−u/t, t − uv/t], [−1/t, −v/t]].
    G2 {
        u: Rational,
        t: Rational,
        v: Rational,
    },
}

impl NormalForm {
    pub fn decode(&self) -> Mat2 {
        match self {
            NormalForm::G1 { u, t } => Mat2::raw(t.clone(), u / t, Rational::zero(), t.recip()),
            NormalForm::G2 { u, t, v } => Mat2::raw(
                -(u / t),
                t - &(u * v) / t,
                -t.recip(),
                -(v / t),
            ),
        }
    }

    pub fn t(&self) -> &Rational {
        match self {
            NormalForm::G1 { t, .. } | NormalForm::G2 { t, .. } => t,
        }
    }
}

pub fn decompose(g: &Mat2) -> NormalForm {
    if g.a21.is_zero() {
        NormalForm::G1 {
            u: &g.a12 * &g.a11,
            t: g.a11.clone(),
        }
    } else {
        NormalForm::G2 {
            u: &g.a11 / &g.a21,
            t: -g.a21.recip(),
            v: &g.a22 / &g.a21,
        }
    }
}

/// w(x,y) = [−x₂₁·(xy)₂₁·y₂₁], with [0] = 0.
pub fn witt_cocycle(x: &Mat2, y: &Mat2) -> WittClass {
    if x.a21.is_zero() || y.a21.is_zero() {
        return WittClass::zero();
    }
    let xy21 = &x.a21 * &y.a11 + &x.a22 * &y.a21;
    let mx21 = -&x.a21;
    WittClass::symbol_of_product(&[&mx21, &xy21, &y.a21])
}

fn sc(r: &Rational) -> SquareClass {
    SquareClass::of(r).expect("normal-form parameter t is nonzero")
}

/// The Witt image Φ*b of the reduced Moore cocycle, by normal-form cases.
pub fn moore_witt_cocycle(g: &Mat2, h: &Mat2) -> WittClass {
    let (ng, nh) = (decompose(g), decompose(h));
    let (t, tp) = (sc(ng.t()), sc(nh.t()));
    let one = SquareClass::one();
    if let (NormalForm::G2 { v, .. }, NormalForm::G2 { u: up, .. }) = (&ng, &nh) {
        let wp = -(v + up);
        if wp.is_zero() {
            let tt = t.mul(&tp);
            return WittClass::from_symbols(&[one.neg(), t.neg(), tp.neg(), tt.neg()]);
        }
        let w = sc(&wp);
        let ttw = t.mul(&tp).mul(&w);
        return WittClass::from_symbols(&[w, t.neg(), tp.neg(), ttw]);
    }
    WittClass::pfister2_sc(&t, &tp)
}

/// n(g) = [g₂₁] when g₂₁ ≠ 0, else [1] − [g₁₁].
pub fn nekovar_cochain(g: &Mat2) -> WittClass {
    if g.a21.is_zero() {
        WittClass::from_symbols(&[SquareClass::one(), sc(&g.a11).neg()])
    } else {
        WittClass::symbol(&sc(&g.a21))
    }
}

/// (δn)(g,h) = n(g) − n(gh) + n(h).
pub fn coboundary_n(g: &Mat2, h: &Mat2) -> WittClass {
    nekovar_cochain(g)
        .sub(&nekovar_cochain(&(g * h)))
        .add(&nekovar_cochain(h))
}
