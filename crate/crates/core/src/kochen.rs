//! The Kochen operator γ(x) = β(x)/t_𝔭 with β(x) = (x^Q − x)/((x^Q − x)² − 1),
//! where Q is the residue size of 𝔭, and the holomorphy ring it detects.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::local::LocalData;
use crate::places::Place;
use crate::polyring::RationalFunction;
use crate::tower::TowerElement;

/// Base place, its canonical uniformizer and the operator exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KochenContext {
    pub place: Place,
    pub uniformizer: RationalFunction,
    /// Residue size Q = q^deg 𝔭.
    pub exponent: u64,
}

impl KochenContext {
    pub fn new(field: &crate::Field, place: &Place) -> Self {
        KochenContext {
            place: place.clone(),
            uniformizer: place.uniformizer(field),
            exponent: place.residue_size(field),
        }
    }
}

/// β or γ evaluated at an element, or the marker for a pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KochenValue {
    Value(TowerElement),
    Pole,
}

impl KochenValue {
    pub fn value(&self) -> Option<&TowerElement> {
        match self {
            KochenValue::Value(x) => Some(x),
            KochenValue::Pole => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, KochenValue::Pole)
    }
}

impl fmt::Display for KochenValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KochenValue::Value(x) => write!(f, "{x}"),
            KochenValue::Pole => f.write_str("pole"),
        }
    }
}

/// a^Q, by repeated q-th powers when Q is a power of q.
fn residue_power(a: &TowerElement, exponent: u64) -> TowerElement {
    let q = a.field().size();
    let mut x = a.clone();
    let mut k = 1;
    while k < exponent && exponent.is_multiple_of(k * q) {
        x = x.frobenius();
        k *= q;
    }
    if k == exponent {
        x
    } else {
        a.pow(exponent)
    }
}

pub fn beta(a: &TowerElement, ctx: &KochenContext) -> KochenValue {
    let b = residue_power(a, ctx.exponent).sub(a).unwrap();
    if b.is_zero() {
        return KochenValue::Value(b);
    }
    let one = TowerElement::one(b.spec());
    let den = b.mul(&b).unwrap().sub(&one).unwrap();
    match den.inv() {
        Ok(inv) => KochenValue::Value(b.mul(&inv).unwrap()),
        Err(_) => KochenValue::Pole,
    }
}

pub fn gamma(a: &TowerElement, ctx: &KochenContext) -> KochenValue {
    match beta(a, ctx) {
        KochenValue::Value(b) => {
            let inv = ctx.uniformizer.inv().expect("uniformizer is nonzero");
            KochenValue::Value(b.scale(&inv))
        }
        KochenValue::Pole => KochenValue::Pole,
    }
}

/// Which valuation regime a lies in at a place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// v(a) > 0.
    Pos,
    /// v(a) < 0.
    Neg,
    /// v(a) = 0 and v(a^Q − a) > 0.
    ZeroHigher,
    /// v(a) = 0 and v(a^Q − a) = 0.
    ZeroUnit,
}

/// Predicted v(β(a)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Predicted {
    Exact(i64),
    /// β(a) = 0.
    Infinite,
    AtMostZero,
}

impl fmt::Display for Predicted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicted::Exact(v) => write!(f, "{v}"),
            Predicted::Infinite => f.write_str("inf"),
            Predicted::AtMostZero => f.write_str("<= 0"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationCase {
    pub tag: CaseTag,
    pub predicted: Predicted,
}

impl Predicted {
    /// Whether a directly computed valuation (`None` = +∞) agrees.
    pub fn admits(&self, v: Option<i64>) -> bool {
        match (self, v) {
            (Predicted::Exact(p), Some(v)) => *p == v,
            (Predicted::Infinite, None) => true,
            (Predicted::AtMostZero, Some(v)) => v <= 0,
            _ => false,
        }
    }
}

fn ctx_of(local: &LocalData) -> KochenContext {
    KochenContext::new(local.spec().field(), local.base())
}

/// The regime of a at a place above 𝔭 and the valuation of β(a) it forces,
/// computed from v(a) and v(a^Q − a) only.
pub fn classify_beta(a: &TowerElement, local: &LocalData, place: usize) -> Result<ValuationCase> {
    let ctx = ctx_of(local);
    let b = residue_power(a, ctx.exponent).sub(a)?;
    let one = TowerElement::one(b.spec());
    if b == one || b == one.neg() {
        return Err(Error::precondition(format!(
            "{a} is a pole of the Kochen operator"
        )));
    }
    let q = ctx.exponent as i64;
    let va = local.valuation(a, place)?;
    Ok(match va {
        None => ValuationCase {
            tag: CaseTag::Pos,
            predicted: Predicted::Infinite,
        },
        Some(v) if v > 0 => ValuationCase {
            tag: CaseTag::Pos,
            predicted: Predicted::Exact(v),
        },
        Some(v) if v < 0 => ValuationCase {
            tag: CaseTag::Neg,
            predicted: Predicted::Exact(-q * v),
        },
        Some(_) => match local.valuation(&b, place)? {
            None => ValuationCase {
                tag: CaseTag::ZeroHigher,
                predicted: Predicted::Infinite,
            },
            Some(w) if w > 0 => ValuationCase {
                tag: CaseTag::ZeroHigher,
                predicted: Predicted::Exact(w),
            },
            Some(_) => ValuationCase {
                tag: CaseTag::ZeroUnit,
                predicted: Predicted::AtMostZero,
            },
        },
    })
}

/// Unramified with residue degree 1 over the base place.
pub fn is_one_one_place(local: &LocalData, place: usize) -> bool {
    let p = &local.places()[place];
    p.e == 1 && p.f == 1
}

/// An element a, not a pole, with v(γ(a)) < 0 at the given non-(1,1) place:
/// a uniformizer when ramified, else a unit whose residue lies outside F_Q.
pub fn witness_non_11(local: &LocalData, place: usize) -> Result<TowerElement> {
    if is_one_one_place(local, place) {
        return Err(Error::precondition(format!(
            "{} is a (1,1)-place above {}",
            local.places()[place],
            local.base()
        )));
    }
    let ctx = ctx_of(local);
    let candidates: Box<dyn Iterator<Item = TowerElement>> = if local.ramification() > 1 {
        Box::new(local.monomial_with_order(1))
    } else {
        let big = local.residue_field().clone();
        let q = ctx.exponent;
        Box::new(local.monomial_with_order(0).filter(move |a| {
            local
                .residue(a, place)
                .map(|r| big.pow(r, q) != r)
                .unwrap_or(false)
        }))
    };
    for a in candidates {
        if let KochenValue::Value(g) = gamma(&a, &ctx) {
            if local.valuation(&g, place)?.is_some_and(|v| v < 0) {
                return Ok(a);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no monomial witness at {} above {}",
        local.places()[place],
        local.base()
    )))
}

/// x lies in every valuation ring of a (1,1)-place above the base place.
pub fn holomorphy_membership(local: &LocalData, x: &TowerElement) -> Result<bool> {
    for p in local.places() {
        if is_one_one_place(local, p.index) && local.valuation(x, p.index)?.is_some_and(|v| v < 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub input: String,
    pub place: String,
    pub valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingReport {
    pub samples: usize,
    pub violations: Vec<Violation>,
}

/// Height of the random coefficients drawn by the sampler.
pub const SAMPLE_HEIGHT: usize = 2;

/// Random tower element with coefficient heights at most `height`.
pub fn random_element<R: rand::Rng>(local: &LocalData, height: usize, rng: &mut R) -> TowerElement {
    let spec = local.spec();
    let coeffs = (0..spec.degree())
        .map(|_| RationalFunction::random(spec.field(), height, rng))
        .collect();
    TowerElement::from_coeffs(spec, coeffs).expect("matching degree")
}

/// Checks v(γ(a)) ≥ 0 at every (1,1)-place for seeded random a.
pub fn gamma_integrality_sample(
    local: &LocalData,
    samples: usize,
    seed: u64,
) -> Result<SamplingReport> {
    let ctx = ctx_of(local);
    let places: Vec<usize> = (0..local.places().len())
        .filter(|&p| is_one_one_place(local, p))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let a = random_element(local, SAMPLE_HEIGHT, &mut rng);
        if places.is_empty() {
            continue;
        }
        let KochenValue::Value(g) = gamma(&a, &ctx) else {
            continue;
        };
        for &p in &places {
            if let Some(v) = local.valuation(&g, p)? {
                if v < 0 {
                    violations.push(Violation {
                        input: a.to_string(),
                        place: local.places()[p].to_string(),
                        valuation: v,
                    });
                }
            }
        }
    }
    Ok(SamplingReport {
        samples,
        violations,
    })
}

/// r = x / (1 + t_𝔭·γ(z)·y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KochenTriple {
    pub x: TowerElement,
    pub y: TowerElement,
    pub z: TowerElement,
}

/// Writes r ∈ R_𝔭(L) as x/(1 + t_𝔭 γ(z) y) with x, y integral at every
/// place above 𝔭, then re-verifies the identity and the integrality.
///
/// When r has a pole above 𝔭 there are no (1,1)-places there (the extension
/// is Galois, so all places above share (e, f)). With f > 1 a residue
/// witness z gives w = β(z) of valuation ≤ 0 everywhere above 𝔭, and
/// y = −(1 − t_𝔭^N)/w, x = r·t_𝔭^N works for N large. With f = 1 and e > 1
/// every β(z) has positive valuation, so 1 + β(z)·y is a unit for integral y
/// and no such triple exists.
pub fn kochen_representation(local: &LocalData, r: &TowerElement) -> Result<KochenTriple> {
    let spec = local.spec();
    let ctx = ctx_of(local);
    let one = TowerElement::one(spec);
    let zero = TowerElement::zero(spec);
    if r.is_zero() {
        return Ok(KochenTriple {
            x: zero.clone(),
            y: one,
            z: zero,
        });
    }
    if !holomorphy_membership(local, r)? {
        return Err(Error::precondition(format!(
            "{r} is not in the holomorphy ring above {}",
            local.base()
        )));
    }
    let mut worst = 0i64;
    for p in local.places() {
        if let Some(v) = local.valuation(r, p.index)? {
            worst = worst.min(v);
        }
    }
    let triple = if worst >= 0 {
        KochenTriple {
            x: r.clone(),
            y: one,
            z: zero,
        }
    } else {
        let e = local.ramification() as i64;
        if local.places().iter().all(|p| p.f == 1) {
            return Err(Error::unsupported(format!(
                "every place above {} is totally ramified with residue degree 1; β has \
                 positive valuation there, so no integral triple represents {r}",
                local.base()
            )));
        }
        let z = witness_non_11(local, 0)?;
        let KochenValue::Value(w) = beta(&z, &ctx) else {
            return Err(Error::SearchExhausted("witness is a pole".into()));
        };
        let n = (-worst + e - 1) / e;
        let tn = TowerElement::from_base(spec, ctx.uniformizer.pow(n)?);
        let x = r.mul(&tn)?;
        let y = one.sub(&tn)?.neg().div(&w)?;
        KochenTriple { x, y, z }
    };
    verify_triple(local, r, &triple)?;
    Ok(triple)
}

/// Identity r·(1 + t_𝔭 γ(z) y) = x, nonzero denominator, z not a pole, and
/// x, y integral at every place above 𝔭.
pub fn verify_triple(local: &LocalData, r: &TowerElement, triple: &KochenTriple) -> Result<()> {
    let ctx = ctx_of(local);
    let KochenValue::Value(g) = gamma(&triple.z, &ctx) else {
        return Err(Error::precondition("z is a pole of the Kochen operator"));
    };
    let spec = local.spec();
    let t = TowerElement::from_base(spec, ctx.uniformizer.clone());
    let den = TowerElement::one(spec).add(&t.mul(&g)?.mul(&triple.y)?)?;
    if den.is_zero() {
        return Err(Error::precondition("vanishing denominator"));
    }
    if r.mul(&den)? != triple.x {
        return Err(Error::precondition("identity r·(1 + t·γ(z)·y) = x fails"));
    }
    for p in local.places() {
        for (name, v) in [("x", &triple.x), ("y", &triple.y)] {
            if local.valuation(v, p.index)?.is_some_and(|v| v < 0) {
                return Err(Error::precondition(format!(
                    "{name} is not integral at {p}"
                )));
            }
        }
    }
    Ok(())
}
