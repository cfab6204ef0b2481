//! Seeded random inputs for property suites.
//!
//! Matrices are assembled from integer draws a, b, c ∈ [−h, h] with a ≠ 0 and
//! d = (1 + bc)/a, so det = 1 exactly; the same (seed, h) always yields the
//! same stream.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{self, Rational};
use crate::sl2::{conj, NormalForm, Mat2};
use crate::surface::{BoundedSurfaceRep, ClosedSurfaceRep};

pub struct Gen {
    rng: ChaCha8Rng,
    height: i64,
}

impl Gen {
    pub fn new(seed: u64, height: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            height: height.clamp(1, i64::MAX as u64) as i64,
        }
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self, num: u32, den: u32) -> bool {
        self.rng.gen_ratio(num, den)
    }

    pub fn int(&mut self) -> i64 {
        self.rng.gen_range(-self.height..=self.height)
    }

    pub fn nonzero_int(&mut self) -> i64 {
        loop {
            let v = self.int();
            if v != 0 {
                return v;
            }
        }
    }

    /// n/d with |n| ≤ h and 1 ≤ d ≤ h.
    pub fn rational(&mut self) -> Rational {
        let d = self.rng.gen_range(1..=self.height);
        rational::frac(self.int(), d)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Generic element; one in eight is upper triangular.
    pub fn mat(&mut self) -> Mat2 {
        let a = rational::int(self.nonzero_int());
        let b = rational::int(self.int());
        let c = if self.coin(1, 8) {
            Rational::zero()
        } else {
            rational::int(self.int())
        };
        let d = (Rational::one() + &b * &c) / &a;
        Mat2::new(a, b, c, d).expect("det = 1 by construction")
    }

    pub fn g1(&mut self) -> Mat2 {
        NormalForm::G1 {
            u: self.rational(),
            t: self.nonzero_rational(),
        }
        .decode()
    }

    pub fn g2(&mut self) -> Mat2 {
        NormalForm::G2 {
            u: self.rational(),
            t: self.nonzero_rational(),
            v: self.rational(),
        }
        .decode()
    }

    /// A (G2, G2) pair with u′ = −v, so that w′ = 0.
    pub fn g2_pair_degenerate(&mut self) -> (Mat2, Mat2) {
        let v = self.rational();
        let g = NormalForm::G2 {
            u: self.rational(),
            t: self.nonzero_rational(),
            v: v.clone(),
        }
        .decode();
        let h = NormalForm::G2 {
            u: -v,
            t: self.nonzero_rational(),
            v: self.rational(),
        }
        .decode();
        (g, h)
    }

    /// Commuting pairs: small powers of one element, or a conjugated pair of
    /// diagonal elements, each up to sign.
    pub fn commuting_pair(&mut self) -> (Mat2, Mat2) {
        let (x, y) = if self.coin(1, 2) {
            let m = self.mat();
            let i = self.rng.gen_range(-3..=3);
            let j = self.rng.gen_range(-3..=3);
            (m.pow(i), m.pow(j))
        } else {
            let a = self.mat();
            let s = Mat2::diag(&self.nonzero_rational()).expect("nonzero");
            let t = Mat2::diag(&self.nonzero_rational()).expect("nonzero");
            (conj(&a, &s), conj(&a, &t))
        };
        let x = if self.coin(1, 4) { x.neg() } else { x };
        let y = if self.coin(1, 4) { y.neg() } else { y };
        (x, y)
    }

    /// ±M^k with |k| ≤ 2: an element of the centralizer of M.
    pub fn centralizer_element(&mut self, m: &Mat2) -> Mat2 {
        let v = m.pow(self.rng.gen_range(-2..=2));
        if self.coin(1, 2) {
            v.neg()
        } else {
            v
        }
    }

    pub fn bounded_rep(&mut self, genus: usize) -> BoundedSurfaceRep {
        let pairs = (0..genus).map(|_| (self.mat(), self.mat())).collect();
        BoundedSurfaceRep::new(pairs).expect("genus ≥ 1")
    }

    /// A closed representation of genus 1..=3 built from low-height pieces:
    /// genus 1 is a commuting pair; genus 2 is (AU, B), (BV, A) with U ∈ C(B),
    /// V ∈ C(A); genus 3 is either (A, B), (ᴾB, ᴾA), (P, [A, B]) or a genus-2
    /// representation with a commuting pair inserted. A random global
    /// conjugation is applied at the end.
    pub fn closed_rep(&mut self, genus: usize) -> ClosedSurfaceRep {
        let pairs = match genus {
            1 => vec![self.commuting_pair()],
            2 => self.genus_two_pairs(),
            _ => {
                if self.coin(1, 2) {
                    let (a, b) = (self.mat(), self.mat());
                    let p = self.mat();
                    vec![
                        (a.clone(), b.clone()),
                        (conj(&p, &b), conj(&p, &a)),
                        (p, crate::sl2::commutator(&a, &b)),
                    ]
                } else {
                    let mut pairs = self.genus_two_pairs();
                    let at = self.below(3);
                    pairs.insert(at, self.commuting_pair());
                    pairs
                }
            }
        };
        let r = ClosedSurfaceRep::new(pairs).expect("relator holds by construction");
        if self.coin(1, 2) {
            let c = self.mat();
            crate::surface::conjugate_rep(&r, &c)
        } else {
            r
        }
    }

    fn genus_two_pairs(&mut self) -> Vec<(Mat2, Mat2)> {
        let (a, b) = (self.mat(), self.mat());
        let u = self.centralizer_element(&b);
        let v = self.centralizer_element(&a);
        vec![(&a * &u, b.clone()), (&b * &v, a)]
    }
}
