//! Symbol algebras (a, b)_ζ of prime degree ℓ over K = F_q(t) with ℓ | q − 1:
//! generators u, v with u^ℓ = a, v^ℓ = b and v·u = ζ·u·v.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::ffield::{is_prime, power_residue_dlog, Fe, Field, FiniteField};
use crate::parse::parse_ratfunc;
use crate::places::{support, weak_approximation, Constraint, Place};
use crate::polyring::{monic_irreducibles, Polynomial, RationalFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolAlgebra {
    field: Field,
    degree: u64,
    a: RationalFunction,
    b: RationalFunction,
    zeta: Fe,
}

impl fmt::Display for SymbolAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {}; l={})", self.a, self.b, self.degree)
    }
}

impl SymbolAlgebra {
    pub fn new(a: RationalFunction, b: RationalFunction, degree: u64) -> Result<Self> {
        let field = a.field().clone();
        if b.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if !is_prime(degree) {
            return Err(Error::precondition(format!("degree {degree} is not prime")));
        }
        let zeta = field.primitive_root_of_unity(degree)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::precondition("symbol entries must be nonzero"));
        }
        Ok(SymbolAlgebra {
            field,
            degree,
            a,
            b,
            zeta,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The prime ℓ.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn a(&self) -> &RationalFunction {
        &self.a
    }

    pub fn b(&self) -> &RationalFunction {
        &self.b
    }

    pub fn zeta(&self) -> Fe {
        self.zeta
    }

    fn l(&self) -> usize {
        self.degree as usize
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            coords: vec![RationalFunction::zero(&self.field); self.l() * self.l()],
        }
    }

    pub fn scalar(&self, r: RationalFunction) -> AlgebraElement {
        let mut x = self.zero();
        x.coords[0] = r;
        x
    }

    pub fn one(&self) -> AlgebraElement {
        self.scalar(RationalFunction::one(&self.field))
    }

    /// c·u^i·v^j.
    pub fn basis(&self, i: usize, j: usize, c: RationalFunction) -> AlgebraElement {
        let mut x = self.zero();
        x.coords[i * self.l() + j] = c;
        x
    }

    pub fn u(&self) -> AlgebraElement {
        self.basis(1 % self.l(), 0, RationalFunction::one(&self.field))
    }

    pub fn v(&self) -> AlgebraElement {
        self.basis(0, 1 % self.l(), RationalFunction::one(&self.field))
    }

    /// Element from coordinates in the order u^i v^j, index i·ℓ + j.
    pub fn element(&self, coords: Vec<RationalFunction>) -> Result<AlgebraElement> {
        if coords.len() != self.l() * self.l() {
            return Err(Error::precondition("wrong number of coordinates"));
        }
        Ok(AlgebraElement { coords })
    }

    pub fn random_element<R: rand::Rng>(&self, height: usize, rng: &mut R) -> AlgebraElement {
        AlgebraElement {
            coords: (0..self.l() * self.l())
                .map(|_| RationalFunction::random(&self.field, height, rng))
                .collect(),
        }
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let l = self.l();
        let f = &self.field;
        let mut out = self.zero();
        for (xi, xc) in x.coords.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            let (i, j) = (xi / l, xi % l);
            for (yi, yc) in y.coords.iter().enumerate() {
                if yc.is_zero() {
                    continue;
                }
                let (k, m) = (yi / l, yi % l);
                // u^i v^j · u^k v^m = ζ^(jk) u^(i+k) v^(j+m)
                let mut c = (xc * yc).scale(f.pow(self.zeta, (j * k) as u64));
                if i + k >= l {
                    c = &c * &self.a;
                }
                if j + m >= l {
                    c = &c * &self.b;
                }
                let idx = ((i + k) % l) * l + (j + m) % l;
                out.coords[idx] = &out.coords[idx] + &c;
            }
        }
        out
    }

    /// The standard involution x ↦ Trd(x) − x, ℓ = 2 only.
    pub fn conj(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if self.degree != 2 {
            return Err(Error::precondition("conjugation needs l = 2"));
        }
        let t = self.trd(x);
        Ok(self.sub(&self.scalar(t), x))
    }

    /// Matrix of left multiplication by x on A viewed as a right K(u)-space
    /// with basis 1, v, …, v^(ℓ−1).
    fn regular_matrix(&self, x: &AlgebraElement) -> Vec<Vec<Cyclic>> {
        let l = self.l();
        let f = &self.field;
        let ring = CyclicRing { l, a: &self.a };
        // x = Σ_j v^j X_j with X_j = Σ_i x_ij ζ^(−ij) u^i.
        let zinv = f.inv(self.zeta).unwrap();
        let parts: Vec<Cyclic> = (0..l)
            .map(|j| {
                (0..l)
                    .map(|i| x.coords[i * l + j].scale(f.pow(zinv, (i * j) as u64)))
                    .collect()
            })
            .collect();
        // c·v^m = v^m·τ_m(c) with τ_m(u^i) = ζ^(−im) u^i.
        let tau = |c: &Cyclic, m: usize| -> Cyclic {
            c.iter()
                .enumerate()
                .map(|(i, ci)| ci.scale(f.pow(zinv, (i * m) as u64)))
                .collect()
        };
        let mut mat = vec![vec![ring.zero(f); l]; l];
        for k in 0..l {
            for (j, xj) in parts.iter().enumerate() {
                // v^j X_j v^k = v^(j+k) τ_k(X_j)
                let mut entry = tau(xj, k);
                if j + k >= l {
                    entry = entry.iter().map(|c| c * &self.b).collect();
                }
                mat[(j + k) % l][k] = entry;
            }
        }
        mat
    }

    /// Reduced trace: the trace of the regular matrix over K(u).
    pub fn trd(&self, x: &AlgebraElement) -> RationalFunction {
        let mat = self.regular_matrix(x);
        let ring = CyclicRing {
            l: self.l(),
            a: &self.a,
        };
        let tr = mat
            .iter()
            .enumerate()
            .fold(ring.zero(&self.field), |s, (k, row)| ring.add(&s, &row[k]));
        debug_assert!(tr[1..].iter().all(|c| c.is_zero()));
        tr[0].clone()
    }

    /// Reduced norm: the determinant of the regular matrix over K(u), by
    /// Berkowitz's division-free algorithm.
    pub fn nrd(&self, x: &AlgebraElement) -> RationalFunction {
        let ring = CyclicRing {
            l: self.l(),
            a: &self.a,
        };
        let det = ring.det(&self.field, &self.regular_matrix(x));
        debug_assert!(det[1..].iter().all(|c| c.is_zero()));
        det[0].clone()
    }

    /// Inverse: conj(x)/Nrd(x) for ℓ = 2, otherwise by solving x·y = 1 over K.
    pub fn inv(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if self.degree == 2 {
            let scale = self.nrd(x).inv()?;
            let c = self.conj(x)?;
            return Ok(AlgebraElement {
                coords: c.coords.iter().map(|a| a * &scale).collect(),
            });
        }
        let n = self.l() * self.l();
        // Column k holds the coordinates of x·e_k.
        let cols: Vec<AlgebraElement> = (0..n)
            .map(|k| {
                let mut e = self.zero();
                e.coords[k] = RationalFunction::one(&self.field);
                self.mul(x, &e)
            })
            .collect();
        let mut m: Vec<Vec<RationalFunction>> = (0..n)
            .map(|r| {
                let mut row: Vec<RationalFunction> =
                    cols.iter().map(|c| c.coords[r].clone()).collect();
                row.push(if r == 0 {
                    RationalFunction::one(&self.field)
                } else {
                    RationalFunction::zero(&self.field)
                });
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            let inv = m[col][col].inv()?;
            m[col] = m[col].iter().map(|c| c * &inv).collect();
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (c, p) in m[r].iter_mut().zip(&pivot_row) {
                        *c = &*c - &(&factor * p);
                    }
                }
            }
        }
        Ok(AlgebraElement {
            coords: m.into_iter().map(|row| row[n].clone()).collect(),
        })
    }

    /// k/ℓ with k the power-residue index of the tame symbol
    /// (−1)^(v(a)v(b))·a^(v(b))·b^(−v(a)) in the residue field at v.
    pub fn local_invariant(&self, place: &Place) -> Result<Invariant> {
        let f = &self.field;
        let va = place.valuation(&self.a).unwrap();
        let vb = place.valuation(&self.b).unwrap();
        let t = place.uniformizer(f);
        let res = place.residue_field(f);
        let unit_a = res.reduce(&place.residue(&(&self.a * &t.pow(-va)?))?);
        let unit_b = res.reduce(&place.residue(&(&self.b * &t.pow(-vb)?))?);
        let l = self.degree as i64;
        let pow = |x: &Polynomial, k: i64| -> Result<Polynomial> {
            let k = k.rem_euclid(res.size() as i64 - 1) as u64;
            Ok(res.pow(x, k))
        };
        let mut s = res.mul(&pow(&unit_a, vb)?, &pow(&unit_b, -va)?);
        if (va * vb).rem_euclid(2) == 1 {
            s = res.reduce(&-&s);
        }
        let k = power_residue_dlog(&res, &s, self.degree)?;
        Ok(Invariant {
            num: k % l as u64,
            den: self.degree,
        })
    }

    /// Places with nonzero invariant; only places in the support of a or b,
    /// and infinity, can ramify a tame symbol.
    pub fn ramified_places(&self) -> Result<BTreeSet<Place>> {
        Ok(self.invariant_profile()?.into_keys().collect())
    }

    /// Nonzero local invariants by place.
    pub fn invariant_profile(&self) -> Result<BTreeMap<Place, Invariant>> {
        let mut candidates: BTreeSet<Place> = support(&self.a)?.into_iter().collect();
        candidates.extend(support(&self.b)?);
        candidates.insert(Place::Infinity);
        let mut out = BTreeMap::new();
        for p in candidates {
            let inv = self.local_invariant(&p)?;
            if inv.num != 0 {
                out.insert(p, inv);
            }
        }
        Ok(out)
    }

    /// The invariants sum to zero in Q/Z.
    pub fn reciprocity_check(&self) -> Result<bool> {
        let total: u64 = self.invariant_profile()?.values().map(|i| i.num).sum();
        Ok(total.is_multiple_of(self.degree))
    }

    /// Traces of seeded norm-one elements x = y·conj(y)⁻¹, ℓ = 2 only.
    pub fn sample_trace_of_norm_one(
        &self,
        count: usize,
        seed: u64,
    ) -> Result<Vec<RationalFunction>> {
        if self.degree != 2 {
            return Err(Error::precondition("norm-one sampling needs l = 2"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let y = self.random_element(2, &mut rng);
            out.push(self.trace_of_norm_one(&y)?);
        }
        Ok(out)
    }

    /// Trd(y·conj(y)⁻¹), falling back to the trace of 1 when y is a zero
    /// divisor.
    pub fn trace_of_norm_one(&self, y: &AlgebraElement) -> Result<RationalFunction> {
        if self.nrd(y).is_zero() {
            return Ok(RationalFunction::from_int(&self.field, 2));
        }
        let x = self.mul(y, &self.inv(&self.conj(y)?)?);
        Ok(self.trd(&x))
    }
}

/// A local invariant num/den in (1/ℓ)Z/Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Invariant {
    pub num: u64,
    pub den: u64,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Coordinates in the basis u^i v^j, index i·ℓ + j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    coords: Vec<RationalFunction>,
}

impl AlgebraElement {
    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Elements of K[X]/(X^ℓ − a), coefficients low to high.
type Cyclic = Vec<RationalFunction>;

struct CyclicRing<'a> {
    l: usize,
    a: &'a RationalFunction,
}

impl CyclicRing<'_> {
    fn zero(&self, f: &Field) -> Cyclic {
        vec![RationalFunction::zero(f); self.l]
    }

    fn one(&self, f: &Field) -> Cyclic {
        let mut c = self.zero(f);
        c[0] = RationalFunction::one(f);
        c
    }

    fn add(&self, x: &Cyclic, y: &Cyclic) -> Cyclic {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    fn neg(&self, x: &Cyclic) -> Cyclic {
        x.iter().map(|a| -a).collect()
    }

    fn mul(&self, f: &Field, x: &Cyclic, y: &Cyclic) -> Cyclic {
        let mut out = self.zero(f);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let mut c = xi * yj;
                if i + j >= self.l {
                    c = &c * self.a;
                }
                let k = (i + j) % self.l;
                out[k] = &out[k] + &c;
            }
        }
        out
    }

    /// Characteristic polynomial coefficients [1, c_1, …, c_n] of det(xI − M).
    fn berkowitz(&self, f: &Field, m: &[Vec<Cyclic>]) -> Vec<Cyclic> {
        let n = m.len();
        if n == 0 {
            return vec![self.one(f)];
        }
        let sub: Vec<Vec<Cyclic>> = m[1..].iter().map(|row| row[1..].to_vec()).collect();
        let tail = self.berkowitz(f, &sub);
        // Toeplitz column: 1, −a₀₀, −R·C, −R·A·C, …
        let mut diags = vec![self.one(f), self.neg(&m[0][0])];
        let r: Vec<&Cyclic> = m[0][1..].iter().collect();
        let mut c: Vec<Cyclic> = m[1..].iter().map(|row| row[0].clone()).collect();
        for _ in 0..n.saturating_sub(1) {
            let dot = r.iter().zip(&c).fold(self.zero(f), |acc, (x, y)| {
                self.add(&acc, &self.mul(f, x, y))
            });
            diags.push(self.neg(&dot));
            c = sub
                .iter()
                .map(|row| {
                    row.iter().zip(&c).fold(self.zero(f), |acc, (x, y)| {
                        self.add(&acc, &self.mul(f, x, y))
                    })
                })
                .collect();
        }
        // (n+1)×n lower-triangular Toeplitz matrix times the tail vector.
        (0..=n)
            .map(|i| {
                (0..n.min(i + 1)).fold(self.zero(f), |acc, j| {
                    self.add(&acc, &self.mul(f, &diags[i - j], &tail[j]))
                })
            })
            .collect()
    }

    fn det(&self, f: &Field, m: &[Vec<Cyclic>]) -> Cyclic {
        let n = m.len();
        let c = self.berkowitz(f, m).pop().unwrap();
        if n % 2 == 1 {
            self.neg(&c)
        } else {
            c
        }
    }
}

/// Parses `(a | b; l=2)`.
pub fn parse_algebra(field: &Field, src: &str) -> Result<SymbolAlgebra> {
    let trimmed = src.trim_end();
    let start = src.len() - src.trim_start().len();
    let inner = trimmed[start..]
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ParseError::new(start, "expected (a | b; l=N)"))?;
    let base = start + 1;
    let mut depth = 0i32;
    let (mut bar, mut semi) = (None, None);
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 && bar.is_none() => bar = Some(i),
            ';' if depth == 0 && semi.is_none() => semi = Some(i),
            _ => {}
        }
    }
    let (bar, semi) = match (bar, semi) {
        (Some(b), Some(s)) if b < s => (b, s),
        _ => return Err(ParseError::new(base, "expected (a | b; l=N)").into()),
    };
    let shift = |e: Error, at: usize| match e {
        Error::Parse(p) => Error::Parse(ParseError::new(p.offset + at, p.message)),
        other => other,
    };
    let a = parse_ratfunc(field, &inner[..bar]).map_err(|e| shift(e, base))?;
    let b = parse_ratfunc(field, &inner[bar + 1..semi]).map_err(|e| shift(e, base + bar + 1))?;
    let tail = inner[semi + 1..].trim();
    let value = tail
        .strip_prefix('l')
        .map(str::trim_start)
        .and_then(|s| s.strip_prefix('='))
        .map(str::trim)
        .ok_or_else(|| ParseError::new(base + semi + 1, "expected l=N"))?;
    let degree: u64 = value
        .parse()
        .map_err(|_| ParseError::new(base + semi + 1, format!("bad degree {value:?}")))?;
    SymbolAlgebra::new(a, b, degree)
}

/// Sibling pair of algebras ramified at {𝔭, 𝔮₁} and {𝔭, 𝔮₂}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiblingPair {
    pub first: SymbolAlgebra,
    pub second: SymbolAlgebra,
}

/// Degree cap on auxiliary places used as extra uniformizers.
pub const SIBLING_AUX_DEGREE: usize = 2;
/// Most uniformizers multiplied into b.
pub const SIBLING_MAX_FACTORS: usize = 3;

/// Deterministic bounded search: a runs over non-ℓ-th-power constants and
/// then c·π for pool places π, b over products of at most three uniformizers
/// (targets first, then auxiliary places) with exponents in 1..ℓ.
pub fn construct_sibling_pair(
    field: &Field,
    p: &Place,
    q1: &Place,
    q2: &Place,
    degree: u64,
) -> Result<SiblingPair> {
    if p == q1 || p == q2 || q1 == q2 {
        return Err(Error::precondition("places must be pairwise distinct"));
    }
    if !is_prime(degree) {
        return Err(Error::precondition(format!("degree {degree} is not prime")));
    }
    field.primitive_root_of_unity(degree)?;
    let first = search_algebra(field, &[p.clone(), q1.clone()], &[p, q1, q2], degree)?;
    let second = search_algebra(field, &[p.clone(), q2.clone()], &[p, q1, q2], degree)?;
    Ok(SiblingPair { first, second })
}

fn search_algebra(
    field: &Field,
    want: &[Place],
    targets: &[&Place],
    degree: u64,
) -> Result<SymbolAlgebra> {
    let want: BTreeSet<Place> = want.iter().cloned().collect();
    let mut pool: Vec<Polynomial> = targets
        .iter()
        .filter_map(|t| match t {
            Place::Finite(pi) => Some(pi.clone()),
            Place::Infinity => None,
        })
        .collect();
    for d in 1..=SIBLING_AUX_DEGREE {
        for pi in monic_irreducibles(field, d)? {
            if !pool.contains(&pi) {
                pool.push(pi);
            }
        }
    }
    let nonresidues: Vec<Fe> = field
        .elements()
        .filter(|&c| !c.is_zero() && field.nth_roots(c, degree).is_empty())
        .collect();
    // Constant a cannot ramify at places of degree divisible by ℓ, so after
    // the constants a also runs over c·π for π in the pool.
    let mut a_choices: Vec<(RationalFunction, Option<usize>)> = nonresidues
        .iter()
        .map(|&c| (RationalFunction::constant(field, c), None))
        .collect();
    for (i, pi) in pool.iter().enumerate() {
        for c in std::iter::once(field.one()).chain(nonresidues.iter().copied()) {
            a_choices.push((pi.scale(c).into(), Some(i)));
        }
    }
    for (a, a_place) in &a_choices {
        for count in 1..=SIBLING_MAX_FACTORS {
            for combo in combinations(pool.len(), count) {
                for exps in exponent_tuples(count, degree as usize - 1) {
                    let b = combo
                        .iter()
                        .zip(&exps)
                        .fold(Polynomial::one(field), |acc, (&i, &e)| {
                            &acc * &pool[i].pow(e as u64)
                        });
                    let alg = SymbolAlgebra::new(a.clone(), b.into(), degree)?;
                    // The support of a and b is known, so only those places and ∞ can ramify.
                    let mut support: BTreeSet<Place> = combo
                        .iter()
                        .chain(a_place)
                        .map(|&i| Place::Finite(pool[i].clone()))
                        .collect();
                    support.insert(Place::Infinity);
                    let mut ramified = BTreeSet::new();
                    for p in support {
                        if alg.local_invariant(&p)?.num != 0 {
                            ramified.insert(p);
                        }
                    }
                    if ramified == want && alg.ramified_places()? == want {
                        return Ok(alg);
                    }
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no symbol algebra ramified exactly at {{{}}} within the search budget",
        want.iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Tuples in [1, max]^k in lexicographic order.
fn exponent_tuples(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=max).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// y with v(y) ≥ 0 on Δ_B and v(x − y) ≥ 0 on Δ_A \ Δ_B.
pub fn split_integral(
    x: &RationalFunction,
    delta_a: &BTreeSet<Place>,
    delta_b: &BTreeSet<Place>,
) -> Result<RationalFunction> {
    for p in delta_a.intersection(delta_b) {
        if p.valuation(x).is_some_and(|v| v < 0) {
            return Err(Error::precondition(format!(
                "{x} has a pole at {p}, which lies in both sets"
            )));
        }
    }
    if delta_b
        .iter()
        .all(|p| p.valuation(x).is_none_or(|v| v >= 0))
    {
        return Ok(x.clone());
    }
    let field = x.field();
    let mut constraints: Vec<Constraint> = delta_b
        .iter()
        .map(|p| Constraint {
            place: p.clone(),
            target: RationalFunction::zero(field),
            min_valuation: 0,
        })
        .collect();
    constraints.extend(delta_a.difference(delta_b).map(|p| Constraint {
        place: p.clone(),
        target: x.clone(),
        min_valuation: 0,
    }));
    weak_approximation(field, &constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::parse_place;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn alg(field: &Field, src: &str) -> SymbolAlgebra {
        parse_algebra(field, src).unwrap()
    }

    fn place(s: &str) -> Place {
        parse_place(&f5(), s).unwrap()
    }

    fn set(places: &[&str]) -> BTreeSet<Place> {
        places.iter().map(|s| place(s)).collect()
    }

    #[test]
    fn relations() {
        let a = alg(&f5(), "(2 | t; l=2)");
        let (u, v) = (a.u(), a.v());
        let vu = a.mul(&v, &u);
        let uv = a.mul(&u, &v);
        assert_eq!(
            vu,
            a.element(uv.coords().iter().map(|c| c.scale(a.zeta())).collect())
                .unwrap()
        );
        assert_eq!(a.mul(&u, &u), a.scalar(a.a().clone()));
        let x = a.add(&a.scalar(RationalFunction::t(&f5())), &u);
        let c = a.conj(&x).unwrap();
        assert_eq!(c, a.sub(&a.scalar(RationalFunction::t(&f5())), &u));
    }

    #[test]
    fn trace_and_norm_examples() {
        let a = alg(&f5(), "(2 | t; l=2)");
        assert_eq!(a.trd(&a.one()).to_string(), "2");
        assert_eq!(a.nrd(&a.u()), -a.a());
        assert_eq!(a.nrd(&a.v()), -a.b());
    }

    #[test]
    fn quaternion_closed_forms_and_multiplicativity() {
        let f = f5();
        let a = alg(&f, "(t+2 | t^2+3; l=2)");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let x = a.random_element(2, &mut rng);
            let y = a.random_element(2, &mut rng);
            let c = x.coords();
            let closed = &(&(&(&c[0] * &c[0]) - &(a.a() * &(&c[2] * &c[2])))
                - &(a.b() * &(&c[1] * &c[1])))
                + &(&(a.a() * a.b()) * &(&c[3] * &c[3]));
            assert_eq!(a.nrd(&x), closed);
            assert_eq!(a.trd(&x), c[0].scale(f.from_int(2)));
            assert_eq!(a.nrd(&a.mul(&x, &y)), &a.nrd(&x) * &a.nrd(&y));
            assert_eq!(a.trd(&a.add(&x, &y)), &a.trd(&x) + &a.trd(&y));
        }
    }

    #[test]
    fn cubic_norm_is_multiplicative_and_inverse_works() {
        let f7 = Field::prime(7).unwrap();
        let a = alg(&f7, "(3 | t^2+1; l=3)");
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let x = a.random_element(1, &mut rng);
            let y = a.random_element(1, &mut rng);
            assert_eq!(a.nrd(&a.mul(&x, &y)), &a.nrd(&x) * &a.nrd(&y));
            if !a.nrd(&x).is_zero() {
                assert_eq!(a.mul(&x, &a.inv(&x).unwrap()), a.one());
            }
        }
        let q = alg(&Field::prime(5).unwrap(), "(t+2 | t^2+3; l=2)");
        let x = q.random_element(2, &mut rng);
        assert_eq!(q.mul(&x, &q.inv(&x).unwrap()), q.one());
        // nrd of a scalar is its ℓ-th power.
        let s = RationalFunction::t(&f7);
        assert_eq!(a.nrd(&a.scalar(s.clone())), s.pow(3).unwrap());
        assert_eq!(a.trd(&a.one()).to_string(), "3");
    }

    #[test]
    fn invariant_examples() {
        let a = alg(&f5(), "(2 | t; l=2)");
        assert_eq!(a.local_invariant(&place("t")).unwrap().to_string(), "1/2");
        assert_eq!(a.local_invariant(&place("inf")).unwrap().to_string(), "1/2");
        assert_eq!(a.local_invariant(&place("t+4")).unwrap().to_string(), "0");
        assert_eq!(a.ramified_places().unwrap(), set(&["t", "inf"]));
        let b = alg(&f5(), "(2 | t^2-t; l=2)");
        assert_eq!(b.ramified_places().unwrap(), set(&["t", "t+4"]));
        let c = alg(&f5(), "(1 | t^3+t+1; l=2)");
        assert!(c.ramified_places().unwrap().is_empty());
        assert!(a.reciprocity_check().unwrap() && c.reciprocity_check().unwrap());
    }

    #[test]
    fn bilinearity_of_invariants() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let a = RationalFunction::random_nonzero(&f, 2, &mut rng);
            let b1 = RationalFunction::random_nonzero(&f, 2, &mut rng);
            let b2 = RationalFunction::random_nonzero(&f, 2, &mut rng);
            let x = SymbolAlgebra::new(a.clone(), b1.clone(), 3).unwrap();
            let y = SymbolAlgebra::new(a.clone(), b2.clone(), 3).unwrap();
            let xy = SymbolAlgebra::new(a, &b1 * &b2, 3).unwrap();
            let mut places: BTreeSet<Place> = x.invariant_profile().unwrap().into_keys().collect();
            places.extend(y.invariant_profile().unwrap().into_keys());
            places.extend(xy.invariant_profile().unwrap().into_keys());
            for p in places {
                let lhs = xy.local_invariant(&p).unwrap().num;
                let rhs = x.local_invariant(&p).unwrap().num + y.local_invariant(&p).unwrap().num;
                assert_eq!(lhs, rhs % 3, "at {p}");
            }
        }
    }

    #[test]
    fn sibling_pairs() {
        let f = f5();
        let pair =
            construct_sibling_pair(&f, &place("t"), &place("inf"), &place("t+4"), 2).unwrap();
        assert_eq!(pair.first.to_string(), "(2 | t; l=2)");
        assert_eq!(pair.second.to_string(), "(2 | t^2+4*t; l=2)");
        let pair =
            construct_sibling_pair(&f, &place("t"), &place("t+4"), &place("t+1"), 2).unwrap();
        assert_eq!(pair.first.to_string(), "(2 | t^2+4*t; l=2)");
        assert_eq!(pair.second.to_string(), "(2 | t^2+t; l=2)");
        assert!(matches!(
            construct_sibling_pair(&f, &place("t"), &place("inf"), &place("t+4"), 3),
            Err(Error::Unsupported(_))
        ));
        assert!(construct_sibling_pair(&f, &place("t"), &place("t"), &place("t+4"), 2).is_err());
    }

    #[test]
    fn norm_one_traces() {
        let a = alg(&f5(), "(2 | t; l=2)");
        assert_eq!(a.trace_of_norm_one(&a.one()).unwrap().to_string(), "2");
        assert_eq!(
            a.trace_of_norm_one(&a.u()).unwrap(),
            RationalFunction::from_int(&f5(), -2)
        );
        let delta = a.ramified_places().unwrap();
        for t in a.sample_trace_of_norm_one(100, 3).unwrap() {
            for p in &delta {
                assert!(p.valuation(&t).is_none_or(|v| v >= 0), "{t} at {p}");
            }
        }
    }

    #[test]
    fn split_integral_examples() {
        let f = f5();
        let da = set(&["t", "inf"]);
        let db = set(&["t", "t+4"]);
        let x = RationalFunction::t(&f);
        assert_eq!(split_integral(&x, &da, &db).unwrap(), x);
        let x = parse_ratfunc(&f, "(t^2-t+1)/(t-1)").unwrap();
        let y = split_integral(&x, &da, &db).unwrap();
        for p in &db {
            assert!(p.valuation(&y).is_none_or(|v| v >= 0));
        }
        assert!(place("inf").valuation(&(&x - &y)).is_none_or(|v| v >= 0));
        let x = parse_ratfunc(&f, "1/t").unwrap();
        assert!(split_integral(&x, &da, &db).is_err());
    }

    #[test]
    fn parse_and_render() {
        let f = f5();
        let a = alg(&f, " ( t^2+1 | (t+1)/(t+2) ; l = 2 ) ");
        assert_eq!(a.to_string(), "(t^2+1 | (t+1)/(t+2); l=2)");
        assert_eq!(alg(&f, &a.to_string()), a);
        assert!(parse_algebra(&f, "(2 | t)").is_err());
        assert!(parse_algebra(&f, "(0 | t; l=2)").is_err());
        assert!(parse_algebra(&f, "(2 | t; l=4)").is_err());
        let err = parse_algebra(&f, "(2 | t+; l=2)").unwrap_err();
        assert!(matches!(err, Error::Parse(p) if p.offset >= 5));
    }
}
