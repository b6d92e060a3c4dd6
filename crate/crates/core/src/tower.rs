//! Kummer towers K_M = K(u_1, …, u_M) with u_i^n = p_i(t).
//!
//! Elements are stored in the product basis Π u_i^(j_i), 0 ≤ j_i < n, with
//! coefficients in F_q(t). Basis indices are mixed-radix with j_1 most
//! significant, so index order is lexicographic in (j_1, …, j_M).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use crate::ffield::{gcd_u64, Fe, Field};
use crate::laurent::{hensel_nth_root, LaurentSeries, QPower};
use crate::parse::{self, degree_guard, Algebra, Var};
use crate::places::Place;
use crate::polyring::{
    discriminant, enumerate_pn_plus, factor, monic_irreducibles, Polynomial, RationalFunction,
    XPoly,
};

/// Field, Kummer exponent and level polynomials of a tower.
pub struct TowerSpec {
    field: Field,
    n: u64,
    levels: Vec<Polynomial>,
    zeta: Fe,
    size: usize,
    /// Product of basis elements a·b lands on `mul_index[a*size+b]` times
    /// `carry_poly[mul_carry[a*size+b]]`.
    mul_index: Vec<u32>,
    mul_carry: Vec<u32>,
    carry_poly: Vec<Polynomial>,
}

impl PartialEq for TowerSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.levels == other.levels
    }
}

impl Eq for TowerSpec {}

impl fmt::Debug for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self.levels.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "TowerSpec({}, n={}, levels=[{}])",
            self.field,
            self.n,
            levels.join(", ")
        )
    }
}

/// Largest number of basis elements a tower may have.
pub const MAX_TOWER_DEGREE: usize = 1 << 10;

impl TowerSpec {
    /// A tower with explicit levels. Levels must be distinct monic
    /// irreducibles; they need not lie in P_n^+ (Kummer steps such as √t are
    /// allowed), but operations at infinity require it.
    pub fn new(field: &Field, n: u64, levels: Vec<Polynomial>) -> Result<Arc<TowerSpec>> {
        if n == 0 || gcd_u64(n, field.characteristic() as u64) != 1 {
            return Err(Error::precondition(format!(
                "n = {n} must be positive and prime to p = {}",
                field.characteristic()
            )));
        }
        let zeta = field.primitive_root_of_unity(n)?;
        for (i, p) in levels.iter().enumerate() {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if p.is_constant() || !p.is_monic() || !p.is_irreducible()? {
                return Err(Error::precondition(format!(
                    "level {p} is not monic irreducible"
                )));
            }
            if levels[..i].contains(p) {
                return Err(Error::precondition(format!("level {p} appears twice")));
            }
        }
        if !levels.is_empty() && n == 1 {
            return Err(Error::precondition("levels require n ≥ 2"));
        }
        let m = levels.len();
        let size = (n as usize)
            .checked_pow(m as u32)
            .filter(|&s| s <= MAX_TOWER_DEGREE)
            .ok_or_else(|| Error::unsupported("tower degree too large"))?;
        let n_us = n as usize;
        let mut carry_poly = Vec::with_capacity(1 << m);
        for mask in 0..(1u32 << m) {
            let mut prod = Polynomial::one(field);
            for (i, p) in levels.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod = &prod * p;
                }
            }
            carry_poly.push(prod);
        }
        let mut mul_index = vec![0u32; size * size];
        let mut mul_carry = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                let (ea, eb) = (exponents_of(a, n_us, m), exponents_of(b, n_us, m));
                let mut idx = 0usize;
                let mut mask = 0u32;
                for i in 0..m {
                    let s = ea[i] + eb[i];
                    if s >= n_us {
                        mask |= 1 << i;
                    }
                    idx = idx * n_us + s % n_us;
                }
                mul_index[a * size + b] = idx as u32;
                mul_carry[a * size + b] = mask;
            }
        }
        Ok(Arc::new(TowerSpec {
            field: field.clone(),
            n,
            levels,
            zeta,
            size,
            mul_index,
            mul_carry,
            carry_poly,
        }))
    }

    /// K itself.
    pub fn base(field: &Field) -> Arc<TowerSpec> {
        Self::new(field, 1, Vec::new()).expect("trivial tower")
    }

    /// K_m: the first m elements of P_n^+ in canonical order.
    pub fn canonical(field: &Field, n: u64, m: usize) -> Result<Arc<TowerSpec>> {
        let mut levels = Vec::new();
        let mut d = n as usize;
        while levels.len() < m {
            if gcd_u64(n, field.characteristic() as u64) != 1 {
                return Err(Error::precondition("n divisible by the characteristic"));
            }
            for p in monic_irreducibles(field, d)? {
                if levels.len() == m {
                    break;
                }
                levels.push(p);
            }
            d += n as usize;
        }
        Self::new(field, n, levels)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn levels(&self) -> &[Polynomial] {
        &self.levels
    }

    #[inline]
    pub fn zeta(&self) -> Fe {
        self.zeta
    }

    /// [K_M : K] = n^M.
    #[inline]
    pub fn degree(&self) -> usize {
        self.size
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Every level degree divisible by n, so infinity splits completely.
    pub fn in_pn_plus(&self) -> bool {
        self.levels
            .iter()
            .all(|p| (p.degree().unwrap() as u64).is_multiple_of(self.n))
    }

    /// Exponent tuple of a basis index.
    pub fn exponents(&self, idx: usize) -> Vec<usize> {
        exponents_of(idx, self.n as usize, self.levels.len())
    }

    /// Basis index of an exponent tuple.
    pub fn index_of(&self, exps: &[usize]) -> usize {
        exps.iter().fold(0, |acc, &j| acc * self.n as usize + j)
    }

    /// All embedding / automorphism labels (j_1, …, j_M) in lex order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        (0..self.size).map(|i| self.exponents(i)).collect()
    }
}

fn exponents_of(mut idx: usize, n: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

/// An element of a Kummer tower.
#[derive(Clone)]
pub struct TowerElement {
    spec: Arc<TowerSpec>,
    coeffs: Vec<RationalFunction>,
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec)
            && self.coeffs == other.coeffs
    }
}

impl Eq for TowerElement {}

impl std::hash::Hash for TowerElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElement({self})")
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec = &self.spec;
        // Constant term first, then u1, u2, u1*u2, …: colexicographic order.
        let mut order: Vec<usize> = (0..spec.size).collect();
        order.sort_by_key(|&i| {
            let mut e = spec.exponents(i);
            e.reverse();
            e
        });
        let mut terms = Vec::new();
        for idx in order {
            let c = &self.coeffs[idx];
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = spec
                .exponents(idx)
                .iter()
                .enumerate()
                .filter(|(_, &j)| j > 0)
                .map(|(i, &j)| {
                    if j == 1 {
                        format!("u{}", i + 1)
                    } else {
                        format!("u{}^{j}", i + 1)
                    }
                })
                .collect();
            let coeff = match c.as_constant() {
                Some(k) => spec.field.render(k),
                None => format!("({c})"),
            };
            terms.push(match (mono.is_empty(), c.is_one()) {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{coeff}*{}", mono.join("*")),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        f.write_str(&terms.join(" + "))
    }
}

impl TowerElement {
    pub fn zero(spec: &Arc<TowerSpec>) -> Self {
        TowerElement {
            spec: spec.clone(),
            coeffs: vec![RationalFunction::zero(&spec.field); spec.size],
        }
    }

    pub fn from_base(spec: &Arc<TowerSpec>, r: RationalFunction) -> Self {
        let mut x = Self::zero(spec);
        x.coeffs[0] = r;
        x
    }

    pub fn one(spec: &Arc<TowerSpec>) -> Self {
        Self::from_base(spec, RationalFunction::one(&spec.field))
    }

    /// The radical u_i (1-based level index).
    pub fn radical(spec: &Arc<TowerSpec>, level: usize) -> Result<Self> {
        if level == 0 || level > spec.levels.len() {
            return Err(Error::precondition(format!(
                "no level u{level} in this tower"
            )));
        }
        let mut exps = vec![0; spec.levels.len()];
        exps[level - 1] = 1;
        Ok(Self::monomial(
            spec,
            &exps,
            RationalFunction::one(&spec.field),
        ))
    }

    /// c · Π u_i^(exps_i) with every exponent below n.
    pub fn monomial(spec: &Arc<TowerSpec>, exps: &[usize], c: RationalFunction) -> Self {
        let mut x = Self::zero(spec);
        x.coeffs[spec.index_of(exps)] = c;
        x
    }

    /// Element with the given coefficient vector in basis-index order.
    pub fn from_coeffs(spec: &Arc<TowerSpec>, coeffs: Vec<RationalFunction>) -> Result<Self> {
        if coeffs.len() != spec.size {
            return Err(Error::precondition(
                "coefficient count does not match the tower degree",
            ));
        }
        Ok(TowerElement {
            spec: spec.clone(),
            coeffs,
        })
    }

    #[inline]
    pub fn spec(&self) -> &Arc<TowerSpec> {
        &self.spec
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.spec.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[usize]) -> &RationalFunction {
        &self.coeffs[self.spec.index_of(exps)]
    }

    /// Nonzero coefficients keyed by exponent tuple.
    pub fn terms(&self) -> BTreeMap<Vec<usize>, RationalFunction> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.spec.exponents(i), c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The element as a member of K, if it is one.
    pub fn as_base(&self) -> Option<&RationalFunction> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| &self.coeffs[0])
    }

    /// Integral over F_q[t]: every coefficient in the product basis is a
    /// polynomial.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TowerElement {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TowerElement {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        TowerElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &RationalFunction) -> Self {
        TowerElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let spec = &self.spec;
        let n = spec.size;
        let mut out = vec![RationalFunction::zero(&spec.field); n];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let k = a * n + b;
                let mut term = ca * cb;
                let mask = spec.mul_carry[k];
                if mask != 0 {
                    term = &term * &RationalFunction::from(&spec.carry_poly[mask as usize]);
                }
                let idx = spec.mul_index[k] as usize;
                out[idx] = &out[idx] + &term;
            }
        }
        Ok(TowerElement {
            spec: spec.clone(),
            coeffs: out,
        })
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::one(&self.spec);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).unwrap();
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        result
    }

    /// x^q, using additivity of the q-th power and u_i^q = p_i^((q−1)/n)·u_i.
    pub fn frobenius(&self) -> Self {
        let spec = &self.spec;
        let step = (spec.field.size() - 1) / spec.n;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                if c.is_zero() {
                    return c.clone();
                }
                let mut factor = Polynomial::one(&spec.field);
                for (p, &k) in spec.levels.iter().zip(&spec.exponents(idx)) {
                    if k > 0 {
                        factor = &factor * &p.pow(step * k as u64);
                    }
                }
                &c.frobenius() * &RationalFunction::from(factor)
            })
            .collect();
        TowerElement {
            spec: spec.clone(),
            coeffs,
        }
    }

    /// The K-automorphism u_i ↦ ζ^(j_i) u_i.
    pub fn conjugate(&self, tuple: &[usize]) -> Self {
        let spec = &self.spec;
        let f = &spec.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let e = spec.exponents(idx);
                let k: usize = e.iter().zip(tuple).map(|(a, b)| a * b).sum();
                c.scale(f.pow(spec.zeta, k as u64))
            })
            .collect();
        TowerElement {
            spec: spec.clone(),
            coeffs,
        }
    }

    /// N_{K_M/K}(x): the product of all conjugates.
    pub fn norm(&self) -> RationalFunction {
        let mut prod = Self::one(&self.spec);
        for tuple in self.spec.tuples() {
            prod = prod.mul(&self.conjugate(&tuple)).unwrap();
        }
        prod.coeffs[0].clone()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_base() {
            return Ok(Self::from_base(&self.spec, r.inv()?));
        }
        // x^(-1) = (product of the other conjugates) / N(x).
        let mut others = Self::one(&self.spec);
        for tuple in self.spec.tuples().into_iter().skip(1) {
            others = others.mul(&self.conjugate(&tuple))?;
        }
        let norm = self.mul(&others)?;
        let norm = norm.as_base().expect("norm lies in K").clone();
        Ok(others.scale(&norm.inv()?))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Largest numerator or denominator degree among the coefficients.
    pub fn height(&self) -> i64 {
        self.coeffs
            .iter()
            .map(|c| c.num().deg().max(c.den().deg()))
            .max()
            .unwrap_or(0)
    }
}

struct TowerAlgebra<'a> {
    spec: &'a Arc<TowerSpec>,
}

impl Algebra for TowerAlgebra<'_> {
    type V = TowerElement;

    fn int(&self, n: u64) -> TowerElement {
        let f = &self.spec.field;
        let p = f.characteristic() as u64;
        TowerElement::from_base(self.spec, RationalFunction::from_int(f, (n % p) as i64))
    }

    fn var(&self, v: Var, offset: usize) -> Result<TowerElement> {
        let f = &self.spec.field;
        match v {
            Var::T => Ok(TowerElement::from_base(self.spec, RationalFunction::t(f))),
            Var::S if f.degree() > 1 => Ok(TowerElement::from_base(
                self.spec,
                RationalFunction::constant(f, f.from_digits(&[0, 1])),
            )),
            Var::S => {
                Err(ParseError::new(offset, "'s' is only defined over F_q with e > 1").into())
            }
            Var::U(i) => TowerElement::radical(self.spec, i).map_err(|_| {
                ParseError::new(offset, format!("no level u{i} in this tower")).into()
            }),
        }
    }

    fn add(&self, a: TowerElement, b: TowerElement) -> Result<TowerElement> {
        a.add(&b)
    }

    fn sub(&self, a: TowerElement, b: TowerElement) -> Result<TowerElement> {
        a.sub(&b)
    }

    fn mul(&self, a: TowerElement, b: TowerElement) -> Result<TowerElement> {
        degree_guard(
            a.height() + b.height() + self.spec.levels.iter().map(|p| p.deg()).sum::<i64>(),
            0,
        )?;
        a.mul(&b)
    }

    fn div(&self, a: TowerElement, b: TowerElement, offset: usize) -> Result<TowerElement> {
        degree_guard((a.height() + b.height()) * self.spec.size as i64, offset)?;
        a.div(&b)
    }

    fn neg(&self, a: TowerElement) -> Result<TowerElement> {
        Ok(a.neg())
    }

    fn pow(&self, a: TowerElement, k: u64, offset: usize) -> Result<TowerElement> {
        let step =
            a.height().max(1) as u64 + self.spec.levels.iter().map(|p| p.deg() as u64).sum::<u64>();
        if k > 1 && step.saturating_mul(k) > parse::MAX_DEGREE as u64 {
            return Err(
                ParseError::new(offset, format!("degree exceeds {}", parse::MAX_DEGREE)).into(),
            );
        }
        Ok(a.pow(k))
    }
}

/// Parses a tower element such as `(t+1) + 2*u1 + (t)*u1*u2`.
pub fn parse_tower_element(spec: &Arc<TowerSpec>, src: &str) -> Result<TowerElement> {
    let expr = parse::parse_expr(src)?;
    parse::eval(&TowerAlgebra { spec }, &expr)
}

/// Hensel roots of every level at infinity, leading coefficient 1.
fn level_roots_at_infinity(spec: &TowerSpec, prec: usize) -> Result<Vec<LaurentSeries>> {
    if !spec.in_pn_plus() {
        return Err(Error::precondition(
            "conjugates at infinity need every level degree divisible by n",
        ));
    }
    spec.levels
        .iter()
        .map(|p| hensel_nth_root(p, spec.n, prec))
        .collect()
}

fn ratfunc_at_infinity(r: &RationalFunction, prec: usize) -> Result<LaurentSeries> {
    let num = LaurentSeries::from_poly_at_infinity(r.num());
    let den = LaurentSeries::from_poly_at_infinity(r.den());
    num.div(&den, prec)
}

/// Images of x under the n^M embeddings into F_q((1/t)), u_i ↦ ζ^(j_i)·ⁿ√p_i,
/// in lexicographic order of (j_1, …, j_M).
pub fn conjugates(x: &TowerElement, prec: usize) -> Result<Vec<LaurentSeries>> {
    let spec = x.spec();
    let f = spec.field();
    let roots = level_roots_at_infinity(spec, prec)?;
    let coeffs: Vec<Option<LaurentSeries>> = x
        .coeffs
        .iter()
        .map(|c| {
            (!c.is_zero())
                .then(|| ratfunc_at_infinity(c, prec))
                .transpose()
        })
        .collect::<Result<_>>()?;
    // Basis monomials under the identity embedding.
    let monos: Vec<LaurentSeries> = (0..spec.size)
        .map(|idx| {
            spec.exponents(idx)
                .iter()
                .zip(&roots)
                .fold(LaurentSeries::constant(f, Fe::ONE), |acc, (&j, r)| {
                    acc.mul(&r.pow(j as u64))
                })
        })
        .collect();
    let mut out = Vec::with_capacity(spec.size);
    for tuple in spec.tuples() {
        let mut acc = LaurentSeries::zero(f);
        for (idx, c) in coeffs.iter().enumerate() {
            let Some(c) = c else { continue };
            let k: usize = spec
                .exponents(idx)
                .iter()
                .zip(&tuple)
                .map(|(a, b)| a * b)
                .sum();
            let term = c.mul(&monos[idx]).scale(f.pow(spec.zeta, k as u64));
            acc = acc.add(&term);
        }
        out.push(acc);
    }
    Ok(out)
}

/// ‖x‖_max = max over conjugates of q^(−order), certified by retrying with
/// doubled precision until every conjugate shows a nonzero leading term.
pub fn norm_max(x: &TowerElement, prec: Option<usize>) -> Result<QPower> {
    if x.is_zero() {
        return Err(Error::precondition("norm of zero"));
    }
    let spec = x.spec();
    let level_deg: i64 = spec.levels.iter().map(|p| p.deg()).sum();
    let mut prec = prec.unwrap_or(2 * (1 + (x.height() + level_deg) as usize));
    for _ in 0..8 {
        let conj = conjugates(x, prec)?;
        if conj.iter().all(|c| !c.is_zero()) {
            let best = conj.iter().map(|c| c.order().unwrap()).min().unwrap();
            return Ok(QPower {
                base: spec.field().size(),
                exponent: -best,
            });
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(
        "conjugate leading terms not certified".into(),
    ))
}

/// Discriminant data of one Kummer step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralBasisReport {
    pub disc: Polynomial,
    /// Valuation of the discriminant at every finite place dividing it.
    pub valuations: BTreeMap<Place, i64>,
    /// Valuation n−1 at (p) and no other finite place in the support.
    pub verified: bool,
}

/// Computes disc(Xⁿ − p) and checks that it is (p)^(n−1) up to a unit.
pub fn verify_integral_basis(p: &Polynomial, n: u64) -> Result<IntegralBasisReport> {
    let field = p.field();
    if n < 2
        || gcd_u64(n, field.characteristic() as u64) != 1
        || p.is_constant()
        || !p.is_monic()
        || !(p.degree().unwrap() as u64).is_multiple_of(n)
        || !p.is_irreducible()?
    {
        return Err(Error::precondition(format!("{p} is not in P_{n}^+")));
    }
    let disc = discriminant(&XPoly::kummer(n as usize, p))?;
    let valuations: BTreeMap<Place, i64> = factor(&disc)?
        .into_iter()
        .map(|(pi, m)| (Place::Finite(pi), m as i64))
        .collect();
    let own = Place::Finite(p.clone());
    let verified = valuations.get(&own) == Some(&(n as i64 - 1)) && valuations.len() == 1;
    Ok(IntegralBasisReport {
        disc,
        valuations,
        verified,
    })
}

/// Level discriminants are pairwise coprime.
pub fn comaximality_report(spec: &TowerSpec) -> Result<bool> {
    let discs: Vec<Polynomial> = spec
        .levels
        .iter()
        .map(|p| discriminant(&XPoly::kummer(spec.n as usize, p)))
        .collect::<Result<_>>()?;
    for i in 0..discs.len() {
        for j in 0..i {
            if !discs[i].gcd(&discs[j]).is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The exponent k with N = q^k.
pub fn log_q(field: &Field, bound: u64) -> Result<u32> {
    let q = field.size();
    let mut k = 0;
    let mut acc = 1u64;
    while acc < bound {
        acc = acc.saturating_mul(q);
        k += 1;
    }
    if acc != bound {
        return Err(Error::precondition(format!(
            "N = {bound} is not a power of q = {q}"
        )));
    }
    Ok(k)
}

/// All p ∈ P_n^+ with q^deg p ≤ N, in canonical order.
pub fn effective_level_bound(field: &Field, n: u64, bound: u64) -> Result<Vec<Polynomial>> {
    let k = log_q(field, bound)? as usize;
    if k < n as usize {
        if gcd_u64(n, field.characteristic() as u64) != 1 {
            return Err(Error::precondition("n divisible by the characteristic"));
        }
        return Ok(Vec::new());
    }
    enumerate_pn_plus(field, n as usize, k)
}

/// Coefficient-degree caps of the descent: deg a_j ≤ k − Σ_i j_i·deg p_i/n,
/// `None` where no nonzero coefficient fits.
fn descent_caps(spec: &TowerSpec, k: i64) -> Result<Vec<Option<usize>>> {
    if !spec.in_pn_plus() {
        return Err(Error::precondition(
            "bounded enumeration needs levels in P_n^+",
        ));
    }
    let steps: Vec<i64> = spec
        .levels
        .iter()
        .map(|p| p.deg() / spec.n as i64)
        .collect();
    Ok((0..spec.size)
        .map(|idx| {
            let shift: i64 = spec
                .exponents(idx)
                .iter()
                .zip(&steps)
                .map(|(&j, &s)| j as i64 * s)
                .sum();
            let cap = k - shift;
            (cap >= 0).then_some(cap as usize)
        })
        .collect())
}

/// Number of integral x with ‖x‖_max ≤ N, without materializing them.
pub fn count_bounded(spec: &TowerSpec, bound: u64) -> Result<u128> {
    let k = log_q(spec.field(), bound)? as i64;
    let q = spec.field().size() as u128;
    let mut total: u128 = 1;
    for c in descent_caps(spec, k)?.into_iter().flatten() {
        total = total
            .checked_mul(
                q.checked_pow(c as u32 + 1)
                    .ok_or_else(|| Error::unsupported("count overflows"))?,
            )
            .ok_or_else(|| Error::unsupported("count overflows"))?;
    }
    Ok(total)
}

/// Largest set `enumerate_bounded` will materialize.
pub const MAX_ENUMERATION: u128 = 1 << 22;

/// {x integral in K_M : ‖x‖_max ≤ N} via the coefficient bounds
/// ‖a_j‖_max ≤ N·q^(−Σ j_i deg p_i / n) of the product basis, which are
/// necessary and sufficient because basis monomials have distinct absolute
/// values modulo the value group of the lower levels.
pub fn enumerate_bounded(spec: &Arc<TowerSpec>, bound: u64) -> Result<Vec<TowerElement>> {
    let count = count_bounded(spec, bound)?;
    if count > MAX_ENUMERATION {
        return Err(Error::unsupported(format!(
            "{count} elements exceed the enumeration limit {MAX_ENUMERATION}"
        )));
    }
    let k = log_q(spec.field(), bound)? as i64;
    let field = spec.field();
    let caps = descent_caps(spec, k)?;
    let choices: Vec<Vec<RationalFunction>> = caps
        .iter()
        .map(|cap| match cap {
            None => vec![RationalFunction::zero(field)],
            Some(c) => polys_up_to(field, *c)
                .into_iter()
                .map(RationalFunction::from)
                .collect(),
        })
        .collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut pick = vec![0usize; spec.size];
    loop {
        let coeffs = pick
            .iter()
            .zip(&choices)
            .map(|(&i, c)| c[i].clone())
            .collect();
        out.push(TowerElement {
            spec: spec.clone(),
            coeffs,
        });
        // Odometer over the coefficient choices, last index fastest.
        let mut pos = spec.size;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < choices[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// All polynomials of degree ≤ d (including 0), in canonical order.
pub fn polys_up_to(field: &Field, d: usize) -> Vec<Polynomial> {
    let q = field.size();
    let total = q.pow(d as u32 + 1);
    (0..total)
        .map(|mut code| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..=d {
                coeffs.push(field.from_code((code % q) as u32).unwrap());
                code /= q;
            }
            Polynomial::new(field, coeffs)
        })
        .collect()
}
