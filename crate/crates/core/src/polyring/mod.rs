//! F_q[t] and F_q(t).

mod discriminant;
mod factor;
mod irreducible;

pub use discriminant::{discriminant, resultant, XPoly};
pub use factor::{factor, squarefree_decomposition};
pub use irreducible::{
    count_monic_irreducibles, enumerate_pn_plus, monic_irreducibles, monic_polynomials,
};

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};

/// A polynomial in t over F_q. Coefficients are stored low to high without
/// trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<Fe>,
}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical order: by degree, then lexicographically from the leading
/// coefficient down. The zero polynomial comes first.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::render_poly(self, 't'))
    }
}

impl Polynomial {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    /// Polynomial with integer coefficients (low to high), reduced mod p.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, c: Fe) -> Self {
        Self::new(field, vec![c])
    }

    /// The variable t.
    pub fn t(field: &Field) -> Self {
        Self::monomial(field, Fe::ONE, 1)
    }

    pub fn monomial(field: &Field, c: Fe, k: usize) -> Self {
        let mut coeffs = vec![Fe::ZERO; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    #[inline]
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading_coeff(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Fe::ONE
    }

    pub fn scale(&self, c: Fe) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading_coeff()).unwrap())
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(&self.field, coeffs)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field != divisor.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let dl = divisor.coeffs.len();
        if self.coeffs.len() < dl {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fe::ZERO; rem.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dl - 1], lead_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, d));
            }
        }
        rem.truncate(dl - 1);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Quotient, failing unless the division is exact.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::precondition(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one(f);
        }
        // Euclid on two buffers, reducing in place.
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.coeffs.clone(), other.coeffs.clone())
        } else {
            (other.coeffs.clone(), self.coeffs.clone())
        };
        while !b.is_empty() {
            let lead_inv = f
                .inv(*b.last().unwrap())
                .expect("nonzero leading coefficient");
            let dl = b.len();
            while a.len() >= dl {
                let c = f.mul(*a.last().unwrap(), lead_inv);
                let off = a.len() - dl;
                if !c.is_zero() {
                    for (j, &d) in b.iter().enumerate() {
                        a[off + j] = f.sub(a[off + j], f.mul(c, d));
                    }
                }
                a.pop();
                while a.last().is_some_and(|x| x.is_zero()) {
                    a.pop();
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        Self::new(f, a).monic()
    }

    /// Returns (g, u, v) with u·self + v·other = g and g monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.leading_coeff()).unwrap();
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse of self modulo m, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Result<Self> {
        let (g, u, _) = self.xgcd(m);
        if !g.is_one() {
            return Err(Error::precondition(format!(
                "{self} is not invertible mod {m}"
            )));
        }
        u.rem(m)
    }

    /// f^q = f(t^q), since coefficients in F_q are fixed by the q-th power.
    pub fn frobenius(&self) -> Self {
        let q = self.field.size() as usize;
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; (self.coeffs.len() - 1) * q + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * q] = c;
        }
        Polynomial::new(&self.field, coeffs)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::one(&self.field);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        result
    }

    pub fn pow_mod(&self, mut k: u64, m: &Self) -> Result<Self> {
        let mut result = Self::one(&self.field).rem(m)?;
        let mut b = self.rem(m)?;
        while k > 0 {
            if k & 1 == 1 {
                result = (&result * &b).rem(m)?;
            }
            k >>= 1;
            if k > 0 {
                b = (&b * &b).rem(m)?;
            }
        }
        Ok(result)
    }

    /// Multiplicity of `pi` in self (self ≠ 0, pi nonconstant).
    pub fn multiplicity(&self, pi: &Self) -> usize {
        let mut k = 0;
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.div_rem(pi).expect("nonzero divisor");
            if !r.is_zero() {
                break;
            }
            k += 1;
            cur = q;
        }
        k
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        irreducible::is_irreducible(self)
    }

    /// Uniformly random polynomial of degree at most `max_degree`.
    pub fn random<R: Rng + ?Sized>(field: &Field, max_degree: usize, rng: &mut R) -> Self {
        let q = field.size() as u32;
        let coeffs = (0..=max_degree)
            .map(|_| field.from_code(rng.gen_range(0..q)).unwrap())
            .collect();
        Self::new(field, coeffs)
    }

    /// Random monic polynomial of degree exactly `degree`.
    pub fn random_monic<R: Rng + ?Sized>(field: &Field, degree: usize, rng: &mut R) -> Self {
        let mut p = Self::random(field, degree.saturating_sub(1), rng);
        if degree == 0 {
            return Self::one(field);
        }
        p.coeffs.resize(degree + 1, Fe::ZERO);
        p.coeffs[degree] = Fe::ONE;
        p
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Fe, Fe) -> Fe) -> Self {
        assert!(
            self.field == other.field,
            "polynomials over different fields"
        );
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        Self::new(&self.field, coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let f = self.field.clone();
        self.zip_with(rhs, |a, b| f.add(a, b))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let f = self.field.clone();
        self.zip_with(rhs, |a, b| f.sub(a, b))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let f = &self.field;
        Polynomial::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Polynomial::new(f, out)
    }
}

macro_rules! forward_owned_ops {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { (&self).$m(rhs) }
        }
    )*};
}

forward_owned_ops!(Polynomial, Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// An element of F_q(t) in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::render_ratfunc(self))
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        let den = Polynomial::one(p.field());
        RationalFunction { num: p, den }
    }
}

impl From<&Polynomial> for RationalFunction {
    fn from(p: &Polynomial) -> Self {
        p.clone().into()
    }
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        let field = num.field().clone();
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(&field),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let c = field.inv(den.leading_coeff()).unwrap();
        RationalFunction {
            num: num.scale(c),
            den: den.scale(c),
        }
    }

    pub fn zero(field: &Field) -> Self {
        Polynomial::zero(field).into()
    }

    pub fn one(field: &Field) -> Self {
        Polynomial::one(field).into()
    }

    pub fn constant(field: &Field, c: Fe) -> Self {
        Polynomial::constant(field, c).into()
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::constant(field, field.from_int(n))
    }

    pub fn t(field: &Field) -> Self {
        Polynomial::t(field).into()
    }

    #[inline]
    pub fn field(&self) -> &Field {
        self.num.field()
    }

    #[inline]
    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    #[inline]
    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The element as a polynomial, if it is one.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    /// The element as a constant of F_q, if it is one.
    pub fn as_constant(&self) -> Option<Fe> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.field().inv(self.num.leading_coeff())?;
        Ok(RationalFunction {
            num: self.den.scale(c),
            den: self.num.scale(c),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = k.unsigned_abs();
        // Powers of coprime polynomials stay coprime.
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// r^q, coefficientwise Frobenius; stays in lowest terms.
    pub fn frobenius(&self) -> Self {
        RationalFunction {
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    pub fn scale(&self, c: Fe) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Random element with numerator and denominator degrees at most `height`.
    pub fn random<R: Rng + ?Sized>(field: &Field, height: usize, rng: &mut R) -> Self {
        let num = Polynomial::random(field, height, rng);
        let d = rng.gen_range(0..=height);
        let den = Polynomial::random_monic(field, d, rng);
        Self::normalize(num, den)
    }

    /// Random nonzero element with the same height bound.
    pub fn random_nonzero<R: Rng + ?Sized>(field: &Field, height: usize, rng: &mut R) -> Self {
        loop {
            let r = Self::random(field, height, rng);
            if !r.is_zero() {
                return r;
            }
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::normalize(&self.num + &rhs.num, self.den.clone());
        }
        // Henrici: with g = gcd(d1, d2), only g can share factors with the new numerator.
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return RationalFunction::zero(self.field());
            }
            return RationalFunction {
                num,
                den: &self.den * &rhs.den,
            };
        }
        let d1 = self.den.exact_div(&g).unwrap();
        let d2 = rhs.den.exact_div(&g).unwrap();
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return RationalFunction::zero(self.field());
        }
        let h = num.gcd(&g);
        let (num, den) = if h.is_one() {
            (num, &d1 * &rhs.den)
        } else {
            (
                num.exact_div(&h).unwrap(),
                (&d1 * &rhs.den).exact_div(&h).unwrap(),
            )
        };
        RationalFunction { num, den }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.field());
        }
        // Cross-cancel to keep intermediate degrees small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let c = self.field().inv(den.leading_coeff()).unwrap();
        RationalFunction {
            num: num.scale(c),
            den: den.scale(c),
        }
    }
}

forward_owned_ops!(RationalFunction, Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_ratfunc};
    use proptest::prelude::*;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn poly(s: &str) -> Polynomial {
        parse_poly(&f5(), s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(poly("t^2-1").gcd(&poly("t-1")), poly("t-1"));
        assert_eq!(poly("t^2+2").rem(&poly("t")).unwrap(), poly("2"));
        assert_eq!(&poly("t-2") * &poly("t+2"), poly("t^2+1"));
        assert_eq!(poly("t").div_rem(&poly("0")), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_is_monic() {
        let g = poly("2*t^2-2").gcd(&poly("3*t-3"));
        assert_eq!(g, poly("t-1"));
    }

    #[test]
    fn xgcd_identity() {
        let a = poly("t^3+2*t+1");
        let b = poly("t^2+3");
        let (g, u, v) = a.xgcd(&b);
        assert_eq!(&(&u * &a) + &(&v * &b), g);
    }

    #[test]
    fn canonical_order() {
        let mut v = [poly("t^2"), poly("t+4"), poly("t"), poly("2*t"), poly("3")];
        v.sort();
        let shown: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["3", "t", "t+4", "2*t", "t^2"]);
    }

    #[test]
    fn rational_normal_form() {
        let f = f5();
        let r = parse_ratfunc(&f, "(2*t^2-2)/(2*t-2)").unwrap();
        assert_eq!(r, RationalFunction::from(poly("t+1")));
        let r = parse_ratfunc(&f, "t/(3*t^2)").unwrap();
        assert_eq!(r.num(), &poly("2"));
        assert_eq!(r.den(), &poly("t"));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(0i64..5, 0..6).prop_map(|c| Polynomial::from_ints(&f5(), &c))
    }

    fn arb_rat() -> impl Strategy<Value = RationalFunction> {
        (arb_poly(), arb_poly())
            .prop_filter_map("nonzero den", |(n, d)| RationalFunction::new(n, d).ok())
    }

    proptest! {
        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.deg() < b.deg());
        }

        #[test]
        fn field_axioms_rational(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&a.div(&b).unwrap() * &b, a);
            }
        }
    }
}
