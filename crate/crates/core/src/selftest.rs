//! Seeded randomized property suites.
//!
//! Each suite draws from its own generator seeded by (seed, suite index), so
//! suites run concurrently and reports are identical across runs.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::gen::Gen;
use crate::qforms::{hilbert_symbol, Place};
use crate::rational::Rational;
use crate::sl2::{
    commutator, coboundary_n, decompose, moore_witt_cocycle, witt_cocycle, Mat2, NormalForm,
};
use crate::surface::{
    evaluate_closed, evaluate_closed_delta, genus_one_relative_class, glue_closed,
    relative_class, twist_bounded, twist_closed, vee, BoundedSurfaceRep, ClosedSurfaceRep,
    LoopSpec,
};
use crate::witt::WittClass;

/// Entry height for generated surface representations; evaluation multiplies
/// up to 4g matrices, so the global cap is lowered to keep factoring cheap.
pub const REP_HEIGHT: u64 = 20;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

type Check = fn(&mut Gen, u64) -> std::result::Result<(), String>;

pub const SUITES: &[(&str, Check)] = &[
    ("cocycle_law", cocycle_law),
    ("equicommutativity", equicommutativity),
    ("moore_vs_witt", moore_vs_witt),
    ("witt_closed_form", witt_closed_form),
    ("cochain_values", cochain_values),
    ("hilbert_reciprocity", hilbert_reciprocity),
    ("moore_relations", moore_relations),
    ("evaluation_crosscheck", evaluation_crosscheck),
    ("gluing", gluing),
    ("twist_invariance", twist_invariance),
];

fn expect(ok: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn cocycle_law(g: &mut Gen, _: u64) -> std::result::Result<(), String> {
    let (x, y, z) = (g.mat(), g.mat(), g.mat());
    let d = witt_cocycle(&y, &z)
        .sub(&witt_cocycle(&(&x * &y), &z))
        .add(&witt_cocycle(&x, &(&y * &z)))
        .sub(&witt_cocycle(&x, &y));
    expect(d.is_zero(), || format!("δw ≠ 0 at x={x}, y={y}, z={z}"))
}

pub fn equicommutativity(g: &mut Gen, _: u64) -> std::result::Result<(), String> {
    let (a, b) = g.commuting_pair();
    expect(witt_cocycle(&a, &b) == witt_cocycle(&b, &a), || {
        format!("w(a,b) ≠ w(b,a) at a={a}, b={b}")
    })
}

/// Cycles through the five normal-form cases, the fifth being w′ = 0.
fn case_pair(g: &mut Gen, i: u64) -> (Mat2, Mat2) {
    match i % 5 {
        0 => (g.g2(), g.g2()),
        1 => g.g2_pair_degenerate(),
        2 => (g.g1(), g.g2()),
        3 => (g.g2(), g.g1()),
        _ => (g.g1(), g.g1()),
    }
}

pub fn moore_vs_witt(g: &mut Gen, i: u64) -> std::result::Result<(), String> {
    let (x, y) = case_pair(g, i);
    let lhs = moore_witt_cocycle(&x, &y);
    let rhs = witt_cocycle(&x, &y).add(&coboundary_n(&x, &y));
    expect(lhs == rhs, || format!("Φ*b ≠ w + δn at g={x}, h={y}"))
}

pub fn witt_closed_form(g: &mut Gen, i: u64) -> std::result::Result<(), String> {
    let (x, y) = if i.is_multiple_of(4) {
        g.g2_pair_degenerate()
    } else {
        (g.g2(), g.g2())
    };
    let (NormalForm::G2 { v, .. }, NormalForm::G2 { u: up, .. }) = (decompose(&x), decompose(&y))
    else {
        return Err(format!("expected a (G2, G2) pair, got {x}, {y}"));
    };
    let wp = -(v + up);
    let closed = WittClass::symbol_of(&wp);
    expect(witt_cocycle(&x, &y) == closed, || {
        format!("w ≠ [w′] at g={x}, h={y}")
    })
}

pub fn cochain_values(g: &mut Gen, i: u64) -> std::result::Result<(), String> {
    let (x, y) = case_pair(g, i);
    let b = moore_witt_cocycle(&x, &y);
    expect(b.in_i2(), || format!("Φ*b ∉ I² at g={x}, h={y}"))?;
    expect(witt_cocycle(&x, &y).norm() <= 1, || format!("w not a symbol at {x}, {y}"))?;
    let id = Mat2::identity();
    for c in [
        witt_cocycle(&id, &x),
        witt_cocycle(&x, &id),
        moore_witt_cocycle(&id, &x),
        moore_witt_cocycle(&x, &id),
    ] {
        expect(c.is_zero(), || format!("cochain not normalized at {x}"))?;
    }
    expect(decompose(&x).decode() == x, || format!("decompose round trip fails at {x}"))
}

pub fn hilbert_reciprocity(g: &mut Gen, _: u64) -> std::result::Result<(), String> {
    let (a, b) = (g.nonzero_rational(), g.nonzero_rational());
    let places = crate::qforms::DiagonalForm::from_rationals(&[a.clone(), b.clone()])
        .map_err(|e| e.to_string())?
        .support();
    let mut prod = hilbert_symbol(&a, &b, &Place::Real).map_err(|e| e.to_string())?;
    prod *= hilbert_symbol(&a, &b, &Place::two()).map_err(|e| e.to_string())?;
    for p in places {
        if p == 2u32.into() {
            continue;
        }
        let v = Place::prime(p).map_err(|e| e.to_string())?;
        prod *= hilbert_symbol(&a, &b, &v).map_err(|e| e.to_string())?;
    }
    expect(prod == 1, || format!("∏_v (a,b)_v = −1 at a={a}, b={b}"))
}

fn pf(a: &Rational, b: &Rational) -> WittClass {
    WittClass::pfister2(a, b).expect("nonzero arguments")
}

fn pf1(a: &Rational) -> WittClass {
    WittClass::from_symbols(&[crate::qforms::SquareClass::one()]).sub(&WittClass::symbol_of(a))
}

/// The Φ-images of the symbol relations: cocycle identity, normalization,
/// {s,t} = {t⁻¹,s}, {s,t} = {s,−st}, {s,t} = {s,(1−s)t}, the chain
/// ⟨⟨a⟩⟩ + ⟨⟨b⟩⟩ = ⟨⟨a+b⟩⟩ + ⟨⟨(a+b)ab⟩⟩ and its symbol form
/// {a,b} = {a+b, ab(a+b)}.
pub fn moore_relations(g: &mut Gen, _: u64) -> std::result::Result<(), String> {
    let (s, t, r) = (g.nonzero_rational(), g.nonzero_rational(), g.nonzero_rational());
    let one = Rational::one();
    let ctx = || format!("s={s}, t={t}, r={r}");
    expect(
        pf(&(&s * &t), &r).add(&pf(&s, &t)) == pf(&s, &(&t * &r)).add(&pf(&t, &r)),
        || format!("cocycle relation fails at {}", ctx()),
    )?;
    expect(pf(&one, &s).is_zero() && pf(&s, &one).is_zero(), || {
        format!("normalization fails at {}", ctx())
    })?;
    expect(pf(&s, &t) == pf(&t.recip(), &s), || format!("{{s,t}} = {{1/t,s}} fails at {}", ctx()))?;
    expect(pf(&s, &t) == pf(&s, &-(&s * &t)), || format!("{{s,t}} = {{s,−st}} fails at {}", ctx()))?;
    if s != one {
        expect(pf(&s, &t) == pf(&s, &((&one - &s) * &t)), || {
            format!("{{s,t}} = {{s,(1−s)t}} fails at {}", ctx())
        })?;
    }
    let sum = &s + &t;
    if !sum.is_zero() {
        let q = &sum * &s * &t;
        expect(pf1(&s).add(&pf1(&t)) == pf1(&sum).add(&pf1(&q)), || {
            format!("chain relation fails at {}", ctx())
        })?;
        expect(pf(&s, &t) == pf(&sum, &q), || format!("{{a,b}} = {{a+b,ab(a+b)}} fails at {}", ctx()))?;
    }
    Ok(())
}

fn closed_checks(r: &ClosedSurfaceRep) -> std::result::Result<WittClass, String> {
    let c = evaluate_closed(r);
    let bound = 4 * r.genus() - 2;
    expect(c.in_i2(), || format!("class ∉ I² for genus-{} rep", r.genus()))?;
    expect(c.norm() <= bound, || format!("norm {} > {bound}", c.norm()))?;
    Ok(c)
}

pub fn evaluation_crosscheck(g: &mut Gen, i: u64) -> std::result::Result<(), String> {
    let genus = 1 + (i % 3) as usize;
    let r = g.closed_rep(genus);
    let c = closed_checks(&r)?;
    expect(c == evaluate_closed_delta(&r), || {
        format!("commutator-lift and Δ-complex sums differ for genus {genus}")
    })
}

/// A second bounded representation with the same boundary:
/// X₁ ↦ X₁·U for U in the centralizer of Y₁, optionally ∨ a commuting pair.
fn same_boundary(g: &mut Gen, b: &BoundedSurfaceRep) -> BoundedSurfaceRep {
    let mut pairs = b.pairs().to_vec();
    let u = g.centralizer_element(&pairs[0].1);
    pairs[0].0 = &pairs[0].0 * &u;
    let b2 = BoundedSurfaceRep::new(pairs).expect("genus ≥ 1");
    if g.coin(1, 2) {
        let t = BoundedSurfaceRep::new(vec![g.commuting_pair()]).expect("genus 1");
        vee(&b2, &t)
    } else {
        b2
    }
}

/// Gluing (c̄(b₁) − c̄(b₂)), conjugation (shift w(A,W) − w(ᴬW,A)),
/// boundary connected sum (correction w(W,W′)) and the genus-one closed form.
pub fn gluing(g: &mut Gen, i: u64) -> std::result::Result<(), String> {
    let genus = 1 + (i % 2) as usize;
    let b1 = g.bounded_rep(genus);
    let b2 = same_boundary(g, &b1);
    let glued = glue_closed(&b1, &b2).map_err(|e| e.to_string())?;
    let c = closed_checks(&glued)?;
    expect(c == relative_class(&b1).sub(&relative_class(&b2)), || {
        "glue_closed ≠ c̄(b₁) − c̄(b₂)".to_string()
    })?;

    let a = g.mat();
    let w = b1.boundary();
    let tw = twist_bounded(&b1, &a);
    let shift = witt_cocycle(&a, w).sub(&witt_cocycle(tw.boundary(), &a));
    expect(relative_class(&tw) == relative_class(&b1).add(&shift), || {
        format!("twist_bounded shift fails for A={a}")
    })?;

    let b3 = g.bounded_rep(1);
    let v = vee(&b1, &b3);
    let expected = relative_class(&b1)
        .add(&relative_class(&b3))
        .add(&witt_cocycle(b1.boundary(), b3.boundary()));
    expect(relative_class(&v) == expected, || "vee identity fails".to_string())?;

    let (x, y) = b3.pairs()[0].clone();
    expect(relative_class(&b3) == genus_one_relative_class(&x, &y), || {
        format!("genus-one closed form fails at X={x}, Y={y}")
    })
}

pub fn twist_invariance(g: &mut Gen, i: u64) -> std::result::Result<(), String> {
    let genus = 1 + (i % 3) as usize;
    let r = g.closed_rep(genus);
    let c = closed_checks(&r)?;
    let k = 1 + g.below(genus);
    let v = g.centralizer_element(&r.pairs()[k - 1].1);
    let t = twist_closed(&r, LoopSpec::B(k), &v).map_err(|e| e.to_string())?;
    expect(closed_checks(&t)? == c, || format!("twist along b{k} changed the class"))?;
    let a = g.mat();
    let conj = crate::surface::conjugate_rep(&r, &a);
    expect(closed_checks(&conj)? == c, || "global conjugation changed the class".to_string())?;
    let rel = commutator(&r.pairs()[0].0, &r.pairs()[0].1);
    expect(genus > 1 || rel.is_identity(), || "genus-one rep not commuting".to_string())
}

fn suite_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64)
}

fn suite_height(name: &str, height: u64) -> u64 {
    match name {
        "evaluation_crosscheck" | "gluing" | "twist_invariance" => height.min(REP_HEIGHT),
        _ => height,
    }
}

pub fn run_suite(index: usize, iters: u64, seed: u64, height: u64) -> SuiteResult {
    let (name, check) = SUITES[index];
    let mut g = Gen::new(suite_seed(seed, index), suite_height(name, height));
    let mut res = SuiteResult {
        name: name.to_string(),
        passed: 0,
        failed: 0,
        first_failure: None,
    };
    for i in 0..iters {
        match check(&mut g, i) {
            Ok(()) => res.passed += 1,
            Err(e) => {
                res.failed += 1;
                res.first_failure.get_or_insert(e);
            }
        }
    }
    res
}

/// Runs every suite, one thread per suite; results are in suite order.
pub fn run(iters: u64, seed: u64, height: u64) -> Vec<SuiteResult> {
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..SUITES.len())
            .map(|i| s.spawn(move || run_suite(i, iters, seed, height)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}
