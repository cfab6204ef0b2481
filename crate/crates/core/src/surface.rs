//! Surface-group representations, the central extension by the Witt cocycle,
//! evaluation of the Witt class, relative classes and the gluing calculus.

use crate::error::{Error, Result};
use crate::sl2::{commutator, conj, witt_cocycle, Mat2};
use crate::witt::WittClass;

/// An element (g, u) of the central extension; (g,u)(g′,u′) = (gg′, u+u′+w(g,g′)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElem {
    pub g: Mat2,
    pub u: WittClass,
}

impl ExtElem {
    pub fn identity() -> Self {
        ExtElem {
            g: Mat2::identity(),
            u: WittClass::zero(),
        }
    }

    /// The standard lift (g, 0).
    pub fn lift(g: &Mat2) -> Self {
        ExtElem {
            g: g.clone(),
            u: WittClass::zero(),
        }
    }

    pub fn central(u: WittClass) -> Self {
        ExtElem {
            g: Mat2::identity(),
            u,
        }
    }

    pub fn mul(&self, q: &Self) -> Self {
        ExtElem {
            g: &self.g * &q.g,
            u: self.u.add(&q.u).add(&witt_cocycle(&self.g, &q.g)),
        }
    }

    /// (g,u)⁻¹ = (g⁻¹, −u − w(g, g⁻¹)).
    pub fn inv(&self) -> Self {
        let gi = self.g.inv();
        let u = self.u.neg().sub(&witt_cocycle(&self.g, &gi));
        ExtElem { g: gi, u }
    }

    /// p·q·p⁻¹·q⁻¹.
    pub fn commutator(&self, q: &Self) -> Self {
        self.mul(q).mul(&self.inv()).mul(&q.inv())
    }
}

pub fn ext_mul(p: &ExtElem, q: &ExtElem) -> ExtElem {
    p.mul(q)
}

pub fn ext_inv(p: &ExtElem) -> ExtElem {
    p.inv()
}

/// ∏ [X_i, Y_i].
pub fn commutator_product(pairs: &[(Mat2, Mat2)]) -> Mat2 {
    pairs
        .iter()
        .fold(Mat2::identity(), |acc, (x, y)| &acc * &commutator(x, y))
}

/// A representation of the closed genus-g surface group: ∏ [A_i, B_i] = I.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSurfaceRep {
    pairs: Vec<(Mat2, Mat2)>,
}

impl ClosedSurfaceRep {
    pub fn new(pairs: Vec<(Mat2, Mat2)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Genus(1));
        }
        if !commutator_product(&pairs).is_identity() {
            return Err(Error::Relator);
        }
        Ok(ClosedSurfaceRep { pairs })
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Mat2, Mat2)] {
        &self.pairs
    }

    pub fn max_height_digits(&self) -> usize {
        self.pairs
            .iter()
            .map(|(a, b)| a.height_digits().max(b.height_digits()))
            .max()
            .unwrap_or(1)
    }
}

/// A representation of the genus-g surface with one boundary circle; the
/// boundary monodromy is W = ∏ [X_i, Y_i], framed by the standard lift (W, 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedSurfaceRep {
    pairs: Vec<(Mat2, Mat2)>,
    boundary: Mat2,
}

impl BoundedSurfaceRep {
    pub fn new(pairs: Vec<(Mat2, Mat2)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Genus(1));
        }
        let boundary = commutator_product(&pairs);
        Ok(BoundedSurfaceRep { pairs, boundary })
    }

    /// Checks a declared boundary against the derived one.
    pub fn with_boundary(pairs: Vec<(Mat2, Mat2)>, boundary: &Mat2) -> Result<Self> {
        let b = Self::new(pairs)?;
        if &b.boundary != boundary {
            return Err(Error::Boundary(format!(
                "declared {boundary}, derived {}",
                b.boundary
            )));
        }
        Ok(b)
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Mat2, Mat2)] {
        &self.pairs
    }

    pub fn boundary(&self) -> &Mat2 {
        &self.boundary
    }
}

fn commutator_lift_product(pairs: &[(Mat2, Mat2)]) -> ExtElem {
    // Each commutator is lifted separately before multiplying; this is the
    // same group element and keeps intermediate heights per handle.
    pairs.iter().fold(ExtElem::identity(), |acc, (a, b)| {
        acc.mul(&ExtElem::lift(a).commutator(&ExtElem::lift(b)))
    })
}

/// The Witt class ⟨w(P), [Σ]⟩ as the central part of ∏ [Ā_i, B̄_i].
pub fn evaluate_closed(r: &ClosedSurfaceRep) -> WittClass {
    let e = commutator_lift_product(&r.pairs);
    debug_assert!(e.g.is_identity());
    e.u
}

/// The same class as a sum over the triangles of the 4g-gon with edge word
/// a₁b₁a₁⁻¹b₁⁻¹⋯: Σ_{ε_i>0} w(g_i, C_i) − Σ_{ε_i<0} w(g_{i+1}, C_i).
pub fn evaluate_closed_delta(r: &ClosedSurfaceRep) -> WittClass {
    let mut word: Vec<(&Mat2, bool)> = Vec::with_capacity(4 * r.genus());
    for (a, b) in &r.pairs {
        word.extend([(a, true), (b, true), (a, false), (b, false)]);
    }
    let mut g = Mat2::identity();
    let mut total = WittClass::zero();
    for (c, positive) in word {
        if positive {
            total = total.add(&witt_cocycle(&g, c));
            g = &g * c;
        } else {
            g = &g * &c.inv();
            total = total.sub(&witt_cocycle(&g, c));
        }
    }
    debug_assert!(g.is_identity());
    total
}

/// c̄(ξ): the central part of ∏ [X̄_i, Ȳ_i] · (W, 0)⁻¹.
pub fn relative_class(b: &BoundedSurfaceRep) -> WittClass {
    let e = commutator_lift_product(&b.pairs).mul(&ExtElem::lift(&b.boundary).inv());
    debug_assert!(e.g.is_identity());
    e.u
}

/// Closed form of the genus-one relative class: w(X,Y) − w(Y,X) − w(W, YX).
pub fn genus_one_relative_class(x: &Mat2, y: &Mat2) -> WittClass {
    let w = commutator(x, y);
    witt_cocycle(x, y)
        .sub(&witt_cocycle(y, x))
        .sub(&witt_cocycle(&w, &(y * x)))
}

/// Glues two bounded surfaces with equal boundary monodromy; the result
/// evaluates to c̄(b1) − c̄(b2).
pub fn glue_closed(b1: &BoundedSurfaceRep, b2: &BoundedSurfaceRep) -> Result<ClosedSurfaceRep> {
    if b1.boundary != b2.boundary {
        return Err(Error::Boundary(format!(
            "cannot glue {} to {}",
            b1.boundary, b2.boundary
        )));
    }
    let mut pairs = b1.pairs.clone();
    pairs.extend(b2.pairs.iter().rev().map(|(x, y)| (y.clone(), x.clone())));
    ClosedSurfaceRep::new(pairs)
}

/// Conjugates every monodromy by A; c̄ shifts by w(A,W) − w(ᴬW, A).
pub fn twist_bounded(b: &BoundedSurfaceRep, a: &Mat2) -> BoundedSurfaceRep {
    BoundedSurfaceRep {
        pairs: b
            .pairs
            .iter()
            .map(|(x, y)| (conj(a, x), conj(a, y)))
            .collect(),
        boundary: conj(a, &b.boundary),
    }
}

/// Which non-separating loop a closed twist cuts along: b_i (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopSpec {
    B(usize),
}

impl LoopSpec {
    pub const B1: LoopSpec = LoopSpec::B(1);
}

/// Dehn-type twist along b_i by V in the centralizer of B_i: A_i ↦ A_i·V.
pub fn twist_closed(r: &ClosedSurfaceRep, lp: LoopSpec, v: &Mat2) -> Result<ClosedSurfaceRep> {
    let LoopSpec::B(i) = lp;
    if i == 0 || i > r.genus() {
        return Err(Error::Genus(i.max(1)));
    }
    let (a, b) = &r.pairs[i - 1];
    if (v * b) != (b * v) {
        return Err(Error::NotCommuting);
    }
    let mut pairs = r.pairs.clone();
    pairs[i - 1] = (a * v, b.clone());
    ClosedSurfaceRep::new(pairs)
}

/// Boundary connected sum; c̄(ξ∨ξ′) = c̄(ξ) + c̄(ξ′) + w(W, W′).
pub fn vee(b1: &BoundedSurfaceRep, b2: &BoundedSurfaceRep) -> BoundedSurfaceRep {
    let mut pairs = b1.pairs.clone();
    pairs.extend(b2.pairs.iter().cloned());
    BoundedSurfaceRep {
        pairs,
        boundary: &b1.boundary * &b2.boundary,
    }
}

pub fn conjugate_rep(r: &ClosedSurfaceRep, a: &Mat2) -> ClosedSurfaceRep {
    ClosedSurfaceRep {
        pairs: r
            .pairs
            .iter()
            .map(|(x, y)| (conj(a, x), conj(a, y)))
            .collect(),
    }
}
