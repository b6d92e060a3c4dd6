//! Truncated Laurent series in a uniformizer w over a finite field.
//!
//! At infinity w = 1/t and series render in powers of t. A series stores
//! the coefficients from its order upward and an absolute precision `end`:
//! every coefficient of w^k with k < end is known, and those past the stored
//! ones are zero. Exact series (finite sums of monomials) carry no `end`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{gcd_u64, Fe, Field};
use crate::polyring::Polynomial;

/// Default number of retained terms.
pub const DEFAULT_PRECISION: usize = 32;

/// Default precision, overridable through `FFK_PREC_DEFAULT`.
pub fn default_precision() -> usize {
    std::env::var("FFK_PREC_DEFAULT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&p| p > 0)
        .unwrap_or(DEFAULT_PRECISION)
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    /// Exponent of `coeffs[0]`; equals `end` for a series known to be zero.
    start: i64,
    coeffs: Vec<Fe>,
    /// Absolute precision; `None` for exact series.
    end: Option<i64>,
}

fn min_end(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn shift_end(e: Option<i64>, k: i64) -> Option<i64> {
    e.map(|e| e + k)
}

/// Product of two truncated power series, keeping `len` terms.
pub(crate) fn mul_trunc(field: &Field, a: &[Fe], b: &[Fe], len: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; len.min(a.len() + b.len().max(1) - 1)];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if i + j < out.len() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
    }
    out
}

/// Inverse of a power series with nonzero constant term, to `len` terms.
pub(crate) fn inv_trunc(field: &Field, a: &[Fe], len: usize) -> Vec<Fe> {
    let a0_inv = field.inv(a[0]).expect("unit constant term");
    let mut b = Vec::with_capacity(len);
    b.push(a0_inv);
    for k in 1..len {
        let mut acc = Fe::ZERO;
        for j in 1..=k.min(a.len() - 1) {
            acc = field.add(acc, field.mul(a[j], b[k - j]));
        }
        b.push(field.neg(field.mul(acc, a0_inv)));
    }
    b
}

impl LaurentSeries {
    pub fn new(field: &Field, start: i64, coeffs: Vec<Fe>, end: Option<i64>) -> Self {
        let mut s = LaurentSeries {
            field: field.clone(),
            start,
            coeffs,
            end,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(end) = self.end {
            let keep = (end - self.start).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.start += k as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
            None => {
                self.coeffs.clear();
                self.start = self.end.unwrap_or(0);
            }
        }
    }

    /// The exact zero series.
    pub fn zero(field: &Field) -> Self {
        Self::new(field, 0, Vec::new(), None)
    }

    /// Zero known only modulo w^end.
    pub fn zero_to(field: &Field, end: i64) -> Self {
        Self::new(field, end, Vec::new(), Some(end))
    }

    pub fn constant(field: &Field, c: Fe) -> Self {
        Self::new(field, 0, vec![c], None)
    }

    pub fn monomial(field: &Field, c: Fe, k: i64) -> Self {
        Self::new(field, k, vec![c], None)
    }

    /// Exact series of a polynomial in t, expanded in w = 1/t.
    pub fn from_poly_at_infinity(f: &Polynomial) -> Self {
        let field = f.field();
        match f.degree() {
            None => Self::zero(field),
            Some(d) => {
                let coeffs = f.coeffs().iter().rev().copied().collect();
                Self::new(field, -(d as i64), coeffs, None)
            }
        }
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// No known nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.end.is_none()
    }

    /// Valuation in w, `None` when no nonzero coefficient is known.
    pub fn order(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.start)
    }

    pub fn leading_coeff(&self) -> Fe {
        self.coeffs.first().copied().unwrap_or(Fe::ZERO)
    }

    /// Absolute precision, `None` for exact series.
    pub fn end(&self) -> Option<i64> {
        self.end
    }

    /// Number of known terms from the order on, `None` for exact series.
    pub fn rel_prec(&self) -> Option<usize> {
        self.end.map(|e| (e - self.start).max(0) as usize)
    }

    /// Coefficient of w^k. Coefficients at or beyond `end` are unknown and
    /// reported as zero.
    pub fn coeff(&self, k: i64) -> Fe {
        if k < self.start {
            return Fe::ZERO;
        }
        self.coeffs
            .get((k - self.start) as usize)
            .copied()
            .unwrap_or(Fe::ZERO)
    }

    /// Known coefficients from the order upward.
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Forgets every coefficient from w^end on.
    pub fn truncate(&self, end: i64) -> Self {
        let end = min_end(self.end, Some(end));
        Self::new(
            &self.field,
            self.start.min(end.unwrap()),
            self.coeffs.clone(),
            end,
        )
    }

    /// Keeps `n` terms from the order on (exact zero stays exact).
    pub fn truncate_rel(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.truncate(self.start + n as i64)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.start,
            self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            self.end,
        )
    }

    pub fn scale(&self, c: Fe) -> Self {
        let f = &self.field;
        if c.is_zero() {
            return match self.end {
                None => Self::zero(f),
                Some(e) => Self::zero_to(f, e),
            };
        }
        Self::new(
            f,
            self.start,
            self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
            self.end,
        )
    }

    /// Multiplication by w^k.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(
            &self.field,
            self.start + k,
            self.coeffs.clone(),
            shift_end(self.end, k),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let end = min_end(self.end, other.end);
        let lo = match (self.is_zero(), other.is_zero()) {
            (true, true) => return Self::new(f, end.unwrap_or(0), Vec::new(), end),
            (true, false) => other.start,
            (false, true) => self.start,
            (false, false) => self.start.min(other.start),
        };
        let top = |s: &Self| {
            if s.is_zero() {
                lo
            } else {
                s.start + s.coeffs.len() as i64
            }
        };
        let mut hi = top(self).max(top(other));
        if let Some(e) = end {
            hi = hi.min(e);
        }
        let lo = lo.min(hi);
        let coeffs = (lo..hi)
            .map(|k| f.add(self.coeff(k), other.coeff(k)))
            .collect();
        Self::new(f, lo, coeffs, end)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let start = self.start + other.start;
        let end = min_end(
            shift_end(self.end, other.start),
            shift_end(other.end, self.start),
        );
        let exact_zero = |s: &Self| s.is_zero() && s.is_exact();
        if exact_zero(self) || exact_zero(other) {
            return Self::zero(f);
        }
        if self.is_zero() || other.is_zero() {
            return match end {
                None => Self::zero(f),
                Some(e) => Self::zero_to(f, e),
            };
        }
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = match end {
            None => full,
            Some(e) => ((e - start).max(0) as usize).min(full),
        };
        let coeffs = mul_trunc(f, &self.coeffs, &other.coeffs, len);
        Self::new(f, start, coeffs, end)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::constant(&self.field, Fe::ONE);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Inverse with at most `max_rel` terms (exact inputs need the cap).
    pub fn inv(&self, max_rel: usize) -> Result<Self> {
        if self.is_zero() {
            return Err(if self.is_exact() {
                Error::DivisionByZero
            } else {
                Error::PrecisionExhausted("inverse of a series with no known nonzero term".into())
            });
        }
        let f = &self.field;
        if self.is_exact() && self.coeffs.len() == 1 {
            let c = f.inv(self.coeffs[0])?;
            return Ok(Self::monomial(f, c, -self.start));
        }
        let rel = self.rel_prec().map_or(max_rel, |r| r.min(max_rel));
        let coeffs = inv_trunc(f, &self.coeffs, rel);
        Ok(Self::new(
            f,
            -self.start,
            coeffs,
            Some(-self.start + rel as i64),
        ))
    }

    pub fn div(&self, other: &Self, max_rel: usize) -> Result<Self> {
        Ok(self.mul(&other.inv(max_rel)?))
    }

    /// An n-th root whose leading coefficient is `lead_root`, which must
    /// satisfy lead_root^n = leading coefficient. The order must be a
    /// multiple of n and p must not divide n. At most `max_rel` terms.
    pub fn nth_root(&self, n: u64, lead_root: Fe, max_rel: usize) -> Result<Self> {
        let f = &self.field;
        if n == 0 || gcd_u64(n, f.characteristic() as u64) != 1 {
            return Err(Error::precondition(format!(
                "root index {n} must be positive and prime to the characteristic"
            )));
        }
        let ord = self
            .order()
            .ok_or_else(|| Error::precondition("n-th root of a zero series"))?;
        if ord.rem_euclid(n as i64) != 0 {
            return Err(Error::precondition(format!(
                "order {ord} is not divisible by {n}; no root in this field"
            )));
        }
        let lead = self.leading_coeff();
        if f.pow(lead_root, n) != lead {
            return Err(Error::precondition(
                "prescribed leading root is not an n-th root",
            ));
        }
        let rel = self.rel_prec().map_or(max_rel, |r| r.min(max_rel));
        let lead_inv = f.inv(lead)?;
        let unit: Vec<Fe> = self
            .coeffs
            .iter()
            .take(rel)
            .map(|&c| f.mul(c, lead_inv))
            .collect();
        // Newton for y = unit^(-1/n): y <- y + y(1 - unit*y^n)/n.
        let n_inv = f.inv(f.from_int(n as i64))?;
        let mut y = vec![Fe::ONE];
        let mut cur = 1;
        while cur < rel {
            cur = (2 * cur).min(rel);
            let mut yn = vec![Fe::ONE];
            for _ in 0..n {
                yn = mul_trunc(f, &yn, &y, cur);
            }
            let uyn = mul_trunc(f, &unit, &yn, cur);
            let mut corr: Vec<Fe> = uyn.iter().map(|&c| f.neg(c)).collect();
            corr.resize(cur, Fe::ZERO);
            corr[0] = f.add(corr[0], Fe::ONE);
            let step = mul_trunc(f, &y, &corr, cur);
            y.resize(cur, Fe::ZERO);
            for (yk, sk) in y.iter_mut().zip(step) {
                *yk = f.add(*yk, f.mul(sk, n_inv));
            }
        }
        // unit^(1/n) = unit * y^(n-1)
        let mut root = unit.clone();
        for _ in 1..n {
            root = mul_trunc(f, &root, &y, rel);
        }
        root.resize(rel, Fe::ZERO);
        let coeffs = root.into_iter().map(|c| f.mul(c, lead_root)).collect();
        let start = ord / n as i64;
        Ok(Self::new(f, start, coeffs, Some(start + rel as i64)))
    }

    /// Rendering in powers of t = 1/w, e.g. `t + t^-1 + 2*t^-3 + O(t^-5)`.
    pub fn render_at_infinity(&self) -> String {
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = -(self.start + i as i64);
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            let coeff = f.render(c);
            terms.push(match (k, c == Fe::ONE) {
                (0, _) => coeff,
                (_, true) => mono,
                _ => format!("{coeff}*{mono}"),
            });
        }
        if let Some(end) = self.end {
            terms.push(match -end {
                0 => "O(1)".to_string(),
                1 => "O(t)".to_string(),
                k => format!("O(t^{k})"),
            });
        }
        if terms.is_empty() {
            terms.push("0".to_string());
        }
        terms.join(" + ")
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({})", self.render_at_infinity())
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_at_infinity())
    }
}

/// The normalized n-th root of a monic f in F_q((1/t)), leading coefficient 1,
/// with `prec` retained terms.
pub fn hensel_nth_root(f: &Polynomial, n: u64, prec: usize) -> Result<LaurentSeries> {
    if !f.is_monic() {
        return Err(Error::precondition(format!("{f} is not monic")));
    }
    let d = f.degree().unwrap() as u64;
    if n == 0 || !d.is_multiple_of(n) {
        return Err(Error::precondition(format!(
            "n = {n} does not divide deg f = {d}; the root is not in F_q((1/t))"
        )));
    }
    if prec == 0 {
        return Err(Error::precondition("precision must be positive"));
    }
    LaurentSeries::from_poly_at_infinity(f).nth_root(n, Fe::ONE, prec)
}

/// An exact power q^exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QPower {
    pub base: u64,
    pub exponent: i64,
}

impl std::ops::Mul for QPower {
    type Output = QPower;

    fn mul(self, other: QPower) -> QPower {
        debug_assert_eq!(self.base, other.base);
        QPower {
            base: self.base,
            exponent: self.exponent + other.exponent,
        }
    }
}

impl PartialOrd for QPower {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QPower {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.exponent.cmp(&other.exponent)
    }
}

impl fmt::Display for QPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mag = |k: i64| -> String {
            match (self.base as u128).checked_pow(k.unsigned_abs() as u32) {
                Some(v) if k.unsigned_abs() <= u32::MAX as u64 => v.to_string(),
                _ => format!("{}^{}", self.base, k.unsigned_abs()),
            }
        };
        if self.exponent >= 0 {
            f.write_str(&mag(self.exponent))
        } else {
            write!(f, "1/{}", mag(self.exponent))
        }
    }
}

/// ‖a‖_∞ = q^(−order) for a series in 1/t.
pub fn abs_infinity(a: &LaurentSeries) -> Result<QPower> {
    let ord = a.order().ok_or_else(|| {
        if a.is_exact() {
            Error::precondition("absolute value of zero")
        } else {
            Error::PrecisionExhausted("no nonzero term within precision".into())
        }
    })?;
    Ok(QPower {
        base: a.field().size(),
        exponent: -ord,
    })
}
