//! The Witt group W(Q): arithmetic, norms, canonical representatives, and the
//! monomial fragment of W(Q((x))).
//!
//! A class carries an arbitrary diagonal representative. Arithmetic is
//! concatenation; equality, norm and the canonical anisotropic representative
//! are all derived from local invariants, so no isotropic vectors are ever
//! searched for.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::qforms::{
    hasse_invariant, hilbert_sc, signature, signed_discriminant, DiagonalForm, LocalInvariants,
    Place, SquareClass,
};
use crate::rational::Rational;

#[derive(Clone, Debug, Default)]
pub struct WittClass {
    form: DiagonalForm,
}

/// Places that can carry nontrivial local data for a form: 2 and its support.
fn finite_places(f: &DiagonalForm) -> Vec<Place> {
    let mut ps = f.support();
    let two = BigUint::from(2u32);
    if !ps.contains(&two) {
        ps.insert(0, two);
    }
    ps.into_iter().map(Place::Prime).collect()
}

impl WittClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The symbol [a].
    pub fn symbol(a: &SquareClass) -> Self {
        WittClass {
            form: DiagonalForm::new(vec![a.clone()]),
        }
    }

    /// The symbol [r], with [0] read as the zero class.
    pub fn symbol_of(r: &Rational) -> Self {
        match SquareClass::of(r) {
            Ok(a) => Self::symbol(&a),
            Err(_) => Self::zero(),
        }
    }

    /// [∏ factors], or 0 when some factor vanishes.
    pub fn symbol_of_product(factors: &[&Rational]) -> Self {
        match SquareClass::of_product(factors) {
            Some(a) => Self::symbol(&a),
            None => Self::zero(),
        }
    }

    pub fn from_form(form: DiagonalForm) -> Self {
        WittClass { form }.cancelled()
    }

    pub fn from_symbols(xs: &[SquareClass]) -> Self {
        Self::from_form(DiagonalForm::new(xs.to_vec()))
    }

    pub fn from_ints(ns: &[i64]) -> Result<Self> {
        Ok(Self::from_form(DiagonalForm::from_ints(ns)?))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::from_form(DiagonalForm::parse(s)?))
    }

    /// The stored (not necessarily anisotropic) representative.
    pub fn raw(&self) -> &DiagonalForm {
        &self.form
    }

    /// Drops pairs [a], [−a], which are hyperbolic planes.
    fn cancelled(self) -> Self {
        let mut out: Vec<SquareClass> = Vec::with_capacity(self.form.dim());
        for a in self.form.entries() {
            let neg = a.neg();
            match out.iter().position(|b| *b == neg) {
                Some(i) => {
                    out.swap_remove(i);
                }
                None => out.push(a.clone()),
            }
        }
        WittClass {
            form: DiagonalForm::new(out),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        WittClass {
            form: self.form.sum(&other.form),
        }
        .cancelled()
    }

    pub fn neg(&self) -> Self {
        self.scale(&SquareClass::minus_one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Entrywise multiplication by a square class.
    pub fn scale(&self, a: &SquareClass) -> Self {
        WittClass {
            form: self.form.scaled(a),
        }
    }

    /// ⟨⟨a,b⟩⟩ = [1] − [a] − [b] + [ab].
    pub fn pfister2(a: &Rational, b: &Rational) -> Result<Self> {
        let a = SquareClass::of(a)?;
        let b = SquareClass::of(b)?;
        Ok(Self::pfister2_sc(&a, &b))
    }

    pub fn pfister2_sc(a: &SquareClass, b: &SquareClass) -> Self {
        Self::from_symbols(&[SquareClass::one(), a.neg(), b.neg(), a.mul(b)])
    }

    pub fn signature(&self) -> i64 {
        signature(&self.form)
    }

    pub fn signed_discriminant(&self) -> SquareClass {
        signed_discriminant(&self.form)
    }

    pub fn in_i2(&self) -> bool {
        self.form.dim().is_multiple_of(2) && self.signed_discriminant().is_one()
    }

    pub fn hasse(&self, v: &Place) -> i8 {
        hasse_invariant(&self.form, v)
    }

    /// Anisotropic dimension at each relevant place (real first).
    pub fn local_dims(&self) -> Vec<(Place, usize)> {
        let mut out = vec![(Place::Real, self.signature().unsigned_abs() as usize)];
        for v in finite_places(&self.form) {
            let k = LocalInvariants::of(&self.form, &v).kernel_at_prime(&v).dim;
            out.push((v, k));
        }
        out
    }

    /// Dimension of the anisotropic representative (Hasse–Minkowski).
    pub fn norm(&self) -> usize {
        if self.form.is_empty() {
            return 0;
        }
        self.local_dims().into_iter().map(|(_, d)| d).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.norm() == 0
    }

    /// The canonical anisotropic representative, entries sorted by
    /// (sign, |value|).
    ///
    /// Synthesized from invariants: the anisotropic kernel's local data is
    /// derived by splitting hyperbolic planes, then entries are chosen greedily
    /// as the first squarefree integer in the order 1, −1, 2, −2, 3, … that the
    /// remaining kernel represents.
    pub fn rep(&self) -> DiagonalForm {
        let n = self.norm();
        if n == 0 {
            return DiagonalForm::default();
        }
        let planes = (self.form.dim() - n) / 2;
        let mut state = Kernel {
            dim: n,
            disc: self.form.discriminant(),
            sig: self.signature(),
            hasse: BTreeMap::new(),
        };
        for v in finite_places(&self.form) {
            let mut inv = LocalInvariants::of(&self.form, &v);
            for _ in 0..planes {
                inv = inv.split_plane(&v);
            }
            state.disc = inv.disc.clone();
            if let Place::Prime(p) = v {
                state.hasse.insert(p, inv.hasse);
            }
        }
        let mut entries = Vec::with_capacity(n);
        while state.dim > 1 {
            let a = squarefree_candidates()
                .find(|a| state.represents(a))
                .expect("an anisotropic form represents some integer");
            state.remove(&a);
            entries.push(a);
        }
        entries.push(state.disc.clone());
        entries.sort();
        DiagonalForm::new(entries)
    }

    /// The class with its canonical representative stored.
    pub fn reduced(&self) -> Self {
        WittClass { form: self.rep() }
    }
}

impl PartialEq for WittClass {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for WittClass {}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep())
    }
}

/// Local data of a form still to be diagonalized.
struct Kernel {
    dim: usize,
    disc: SquareClass,
    sig: i64,
    hasse: BTreeMap<BigUint, i8>,
}

impl Kernel {
    fn hasse_at(&self, p: &BigUint) -> i8 {
        self.hasse.get(p).copied().unwrap_or(1)
    }

    fn places_with(&self, a: &SquareClass) -> Vec<BigUint> {
        let mut ps: Vec<BigUint> = self.hasse.keys().cloned().collect();
        ps.extend(a.primes().iter().cloned());
        ps.sort();
        ps.dedup();
        ps
    }

    /// Whether this anisotropic kernel represents a, i.e. K ⊥ ⟨−a⟩ is
    /// isotropic everywhere.
    fn represents(&self, a: &SquareClass) -> bool {
        let pos = (self.dim as i64 + self.sig) / 2;
        let neg = self.dim as i64 - pos;
        if (a.is_negative() && neg == 0) || (!a.is_negative() && pos == 0) {
            return false;
        }
        if self.dim + 1 >= 5 {
            return true;
        }
        let ma = a.neg();
        self.places_with(a).into_iter().all(|p| {
            let v = Place::Prime(p.clone());
            let inv = LocalInvariants {
                dim: self.dim + 1,
                disc: self.disc.mul(&ma),
                hasse: self.hasse_at(&p) * hilbert_sc(&self.disc, &ma, &v),
            };
            inv.isotropic_at_prime(&v)
        })
    }

    /// K = ⟨a⟩ ⊥ K′: d(K′) = d·a and ε(K′) = ε(K)·(a, d(K′)).
    fn remove(&mut self, a: &SquareClass) {
        let places = self.places_with(a);
        let disc = self.disc.mul(a);
        for p in places {
            let v = Place::Prime(p.clone());
            let e = self.hasse_at(&p) * hilbert_sc(a, &disc, &v);
            self.hasse.insert(p, e);
        }
        self.disc = disc;
        self.sig -= if a.is_negative() { -1 } else { 1 };
        self.dim -= 1;
    }
}

/// Squarefree integers ordered 1, −1, 2, −2, 3, −3, 5, …
fn squarefree_candidates() -> impl Iterator<Item = SquareClass> {
    (1u64..)
        .filter(|&n| {
            num_prime::nt_funcs::factorize64(n)
                .values()
                .all(|&e| e == 1)
        })
        .flat_map(|n| {
            let p = SquareClass::of(&Rational::from_integer(n.into())).unwrap();
            [p.clone(), p.neg()]
        })
}

/// A monomial form over Q((x)): entries c·x^e with e ∈ {0, 1}.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentForm {
    entries: Vec<(SquareClass, u8)>,
}

impl LaurentForm {
    pub fn new(entries: Vec<(SquareClass, i64)>) -> Self {
        LaurentForm {
            entries: entries
                .into_iter()
                .map(|(c, e)| (c, e.rem_euclid(2) as u8))
                .collect(),
        }
    }

    /// "coeff:exponent" pairs, e.g. "1:0,7:0,1:1,-7:1"; a bare coefficient
    /// has exponent 0.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        let mut entries = Vec::new();
        for item in s.split(',') {
            let (c, e) = item.split_once(':').unwrap_or((item, "0"));
            let c = crate::rational::parse_nonzero(c)?;
            let e: i64 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid exponent in {item:?}")))?;
            entries.push((SquareClass::of(&c)?, e));
        }
        Ok(Self::new(entries))
    }

    pub fn entries(&self) -> &[(SquareClass, u8)] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Orthogonal sum with itself n times.
    pub fn multiple(&self, n: usize) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() * n);
        for _ in 0..n {
            entries.extend(self.entries.iter().cloned());
        }
        LaurentForm { entries }
    }

    /// The residue forms q₁ (exponent 0) and q₂ (exponent 1).
    pub fn residues(&self) -> (WittClass, WittClass) {
        let pick = |k: u8| {
            WittClass::from_symbols(
                &self
                    .entries
                    .iter()
                    .filter(|(_, e)| *e == k)
                    .map(|(c, _)| c.clone())
                    .collect::<Vec<_>>(),
            )
        };
        (pick(0), pick(1))
    }
}

impl fmt::Display for LaurentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(c, e)| format!("{c}:{e}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Anisotropic dimension over Q((x)): by Springer, q₁ ⊥ x·q₂ has kernel
/// dimension ‖q₁‖ + ‖q₂‖.
pub fn laurent_anisotropic_dim(f: &LaurentForm) -> usize {
    let (q1, q2) = f.residues();
    q1.norm() + q2.norm()
}
