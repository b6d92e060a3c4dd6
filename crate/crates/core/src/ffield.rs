//! Finite fields F_q with q = p^e, p an odd prime and q at most 2^20.
//!
//! Elements are stored as their base-p code `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`,
//! where `c_i` is the coefficient of `s^i` in the representative modulo the
//! defining polynomial. Numeric order of codes is the canonical enumeration order:
//! lexicographic in the coefficient tuple, highest power of `s` first.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Largest field for which a full addition table is kept.
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// An element of some [`Field`]. Only meaningful together with its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// Canonical integer code of the element.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic defining polynomial over F_p, low to high, length e + 1.
    modulus: Vec<u32>,
    generator: Fe,
    add_table: Option<Vec<u32>>,
    logs: OnceLock<LogTables>,
}

/// The finite field F_q together with its defining data.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.e == 1 {
            write!(f, "p={}", self.inner.p)
        } else {
            write!(
                f,
                "p={},e={},mod={}",
                self.inner.p,
                self.inner.e,
                render_fp_poly(&self.inner.modulus, 's')
            )
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Renders a polynomial over F_p (low to high coefficients) in descending order.
pub(crate) fn render_fp_poly(coeffs: &[u32], var: char) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        match (i, c) {
            (0, c) => out.push_str(&c.to_string()),
            (1, 1) => out.push(var),
            (1, c) => out.push_str(&format!("{c}*{var}")),
            (i, 1) => out.push_str(&format!("{var}^{i}")),
            (i, c) => out.push_str(&format!("{c}*{var}^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Schoolbook multiplication in F_p[s]/(modulus) on digit vectors.
fn slow_mul(p: u32, modulus: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let e = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &m) in modulus[..e].iter().enumerate() {
            let idx = k - e + j;
            prod[idx] = (prod[idx] + (p64 - c) * m as u64) % p64;
        }
    }
    prod.truncate(e);
    prod.into_iter().map(|v| v as u32).collect()
}

fn decode(p: u32, e: u32, mut code: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(code % p);
        code /= p;
    }
    out
}

fn encode(p: u32, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn slow_pow(p: u32, modulus: &[u32], base: &[u32], mut exp: u64) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut result = vec![0u32; e];
    result[0] = 1;
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            result = slow_mul(p, modulus, &result, &b);
        }
        b = slow_mul(p, modulus, &b, &b);
        exp >>= 1;
    }
    result
}

/// Rabin irreducibility test for a monic polynomial over F_p, digits low to high.
pub(crate) fn fp_poly_is_irreducible(p: u32, f: &[u32]) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // x^(p^k) mod f, computed as repeated p-th powers in F_p[x]/(f).
    let mut x = vec![0u32; d];
    x[1] = 1;
    let frob = |v: &[u32]| slow_pow(p, f, v, p as u64);
    let mut powers = Vec::with_capacity(d);
    let mut cur = x.clone();
    for _ in 0..d {
        cur = frob(&cur);
        powers.push(cur.clone());
    }
    if powers[d - 1] != x {
        return false;
    }
    for r in prime_factors(d as u64) {
        let k = d / r as usize;
        let mut h = powers[k - 1].clone();
        h[1] = (h[1] + p - 1) % p;
        if fp_poly_gcd_degree(p, f, &h) != 0 {
            return false;
        }
    }
    true
}

fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(p: u32, a: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn fp_poly_gcd_degree(p: u32, a: &[u32], b: &[u32]) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lead_inv = fp_inv(p, *b.last().unwrap()) as u64;
        while a.len() >= b.len() {
            let c = *a.last().unwrap() as u64 * lead_inv % p as u64;
            let shift = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                let idx = shift + j;
                a[idx] = ((a[idx] as u64 + (p as u64 - c) * bj as u64) % p as u64) as u32;
            }
            fp_trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// A common interface for F_q and residue fields F_q[t]/(π), enough for
/// power-residue computations.
pub trait FiniteField {
    type Elem: Clone + PartialEq;

    /// The constant field F_q this field contains.
    fn base(&self) -> &Field;
    fn size(&self) -> u64;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn embed(&self, c: Fe) -> Self::Elem;

    fn pow(&self, x: &Self::Elem, mut exp: u64) -> Self::Elem {
        let mut result = self.one();
        let mut b = x.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(&result, &b);
            }
            b = self.mul(&b, &b);
            exp >>= 1;
        }
        result
    }
}

/// `k` in `[0, ℓ)` with `x^((Q-1)/ℓ) = ζ_ℓ^k`, where `Q` is the size of the
/// ambient field and `ζ_ℓ` the canonical primitive ℓ-th root of unity of F_q.
pub fn power_residue_dlog<F: FiniteField>(field: &F, x: &F::Elem, l: u64) -> Result<u64> {
    if field.is_zero(x) {
        return Err(Error::precondition("power residue symbol of zero"));
    }
    let zeta = field.base().primitive_root_of_unity(l)?;
    let y = field.pow(x, (field.size() - 1) / l);
    let mut z = field.one();
    let zeta = field.embed(zeta);
    for k in 0..l {
        if z == y {
            return Ok(k);
        }
        z = field.mul(&z, &zeta);
    }
    unreachable!("x^((Q-1)/l) is always an l-th root of unity")
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// F_{p^e} defined by `modulus` (low-to-high digits over F_p, monic of degree e).
    /// With `modulus = None` the first monic irreducible of degree e in canonical
    /// order is used.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if p.is_multiple_of(2) || !is_prime(p as u64) {
            return Err(Error::unsupported(format!("p = {p} must be an odd prime")));
        }
        if e == 0 {
            return Err(Error::unsupported("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_FIELD_SIZE);
        let q = match q {
            Some(q) => q as u32,
            None => {
                return Err(Error::unsupported(format!(
                    "field size {p}^{e} exceeds {MAX_FIELD_SIZE}"
                )))
            }
        };
        let modulus = match modulus {
            Some(mut m) => {
                for c in m.iter_mut() {
                    *c %= p;
                }
                fp_trim(&mut m);
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::precondition(format!(
                        "modulus must be monic of degree {e}"
                    )));
                }
                if e > 1 && !fp_poly_is_irreducible(p, &m) {
                    return Err(Error::precondition(format!(
                        "modulus {} is reducible over F_{p}",
                        render_fp_poly(&m, 's')
                    )));
                }
                m
            }
            None if e == 1 => vec![0, 1],
            None => first_irreducible(p, e as usize),
        };
        let modulus = if e == 1 { vec![0, 1] } else { modulus };

        let add_table = if e > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = decode(p, e, a);
                for b in 0..q {
                    let db = decode(p, e, b);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = encode(p, &s);
                }
            }
            Some(t)
        } else {
            None
        };

        let factors = prime_factors(q as u64 - 1);
        let is_gen = |code: u32| {
            let d = decode(p, e, code);
            factors.iter().all(|&r| {
                let v = slow_pow(p, &modulus, &d, (q as u64 - 1) / r);
                !(v[0] == 1 && v[1..].iter().all(|&x| x == 0))
            })
        };
        let generator = Fe((1..q).find(|&c| is_gen(c)).expect("F_q^x is cyclic"));

        let field = Field {
            inner: Arc::new(Inner {
                p,
                e,
                q,
                modulus,
                generator,
                add_table,
                logs: OnceLock::new(),
            }),
        };
        if e > 1 {
            // Multiplication in proper extensions goes through the log tables.
            field.log_tables();
        }
        Ok(field)
    }

    fn log_tables(&self) -> &LogTables {
        self.inner.logs.get_or_init(|| {
            let Inner {
                p, e, q, modulus, ..
            } = &*self.inner;
            let (p, e, q) = (*p, *e, *q);
            let g = decode(p, e, self.inner.generator.0);
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![0u32; q as usize];
            let mut cur = vec![0u32; e as usize];
            cur[0] = 1;
            for i in 0..q - 1 {
                let c = encode(p, &cur);
                exp.push(c);
                log[c as usize] = i;
                cur = if e == 1 {
                    vec![(cur[0] as u64 * g[0] as u64 % p as u64) as u32]
                } else {
                    slow_mul(p, modulus, &cur, &g)
                };
            }
            LogTables { exp, log }
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    #[inline]
    pub fn size(&self) -> u64 {
        self.inner.q as u64
    }

    /// Defining polynomial over F_p, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Defining polynomial in the generator s, `None` for prime fields.
    pub fn render_modulus(&self) -> Option<String> {
        (self.inner.e > 1).then(|| render_fp_poly(&self.inner.modulus, 's'))
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// Element with the given code; `None` when out of range.
    pub fn from_code(&self, code: u32) -> Option<Fe> {
        (code < self.inner.q).then_some(Fe(code))
    }

    /// Element with the given coefficients in `s` (low to high), reduced modulo
    /// the defining polynomial.
    pub fn from_digits(&self, digits: &[i64]) -> Fe {
        if self.inner.e == 1 {
            // s does not exist over a prime field; only the constant term counts.
            return digits.first().map_or(Fe::ZERO, |&d| self.from_int(d));
        }
        // code p is the class of s
        let s = Fe(self.inner.p);
        digits.iter().rev().fold(Fe::ZERO, |acc, &d| {
            self.add(self.mul(acc, s), self.from_int(d))
        })
    }

    /// Coefficients of the representative in `s`, low to high, length e.
    pub fn digits(&self, a: Fe) -> Vec<u32> {
        decode(self.inner.p, self.inner.e, a.0)
    }

    /// Whether `a` lies in the prime field.
    pub fn is_prime_subfield(&self, a: Fe) -> bool {
        a.0 < self.inner.p
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.inner;
        if inner.e == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= inner.p { s - inner.p } else { s });
        }
        if let Some(t) = &inner.add_table {
            return Fe(t[(a.0 * inner.q + b.0) as usize]);
        }
        let (p, mut x, mut y) = (inner.p, a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..inner.e {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let inner = &*self.inner;
        if inner.e == 1 {
            return Fe(if a.0 == 0 { 0 } else { inner.p - a.0 });
        }
        let (p, mut x) = (inner.p, a.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..inner.e {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.inner;
        if inner.e == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % inner.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let t = self.log_tables();
        let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
        Fe(t.exp[(s % (inner.q as u64 - 1)) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, exp: u64) -> Fe {
        let inner = &*self.inner;
        if exp == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        if inner.e > 1 {
            let t = self.log_tables();
            let m = inner.q as u64 - 1;
            let l = t.log[a.0 as usize] as u64;
            return Fe(t.exp[((l as u128 * (exp % m) as u128) % m as u128) as usize]);
        }
        let p = inner.p as u64;
        let mut r = 1u64;
        let mut b = a.0 as u64;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        Fe(r as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.inner.q).map(Fe)
    }

    /// The canonical generator of F_q^x: the smallest element of full order.
    pub fn generator(&self) -> Fe {
        self.inner.generator
    }

    /// Discrete logarithm to the canonical generator.
    pub fn dlog(&self, a: Fe) -> Option<u64> {
        (!a.is_zero()).then(|| self.log_tables().log[a.0 as usize] as u64)
    }

    pub fn multiplicative_order(&self, a: Fe) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut order = self.size() - 1;
        for r in prime_factors(order) {
            while order.is_multiple_of(r) && self.pow(a, order / r) == Fe::ONE {
                order /= r;
            }
        }
        Some(order)
    }

    /// ζ_n = g^((q-1)/n) for the canonical generator g.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<Fe> {
        let q1 = self.size() - 1;
        if n == 0 || !q1.is_multiple_of(n) {
            return Err(Error::unsupported(format!(
                "n = {n} does not divide q - 1 = {q1}"
            )));
        }
        Ok(self.pow(self.generator(), q1 / n))
    }

    /// All x with x^n = c.
    pub fn nth_roots(&self, c: Fe, n: u64) -> Vec<Fe> {
        if c.is_zero() {
            return vec![Fe::ZERO];
        }
        let m = self.size() - 1;
        let lc = self.dlog(c).unwrap();
        let g = gcd_u64(n % m, m);
        let g = if g == 0 { m } else { g };
        if !lc.is_multiple_of(g) {
            return Vec::new();
        }
        // n x ≡ lc (mod m): solutions x0 + k m/g.
        let (nn, ll, mm) = (n % m / g, lc / g, m / g);
        let x0 = if mm == 1 {
            0
        } else {
            (ll as u128 * mod_inverse(nn % mm, mm) as u128 % mm as u128) as u64
        };
        let t = self.log_tables();
        let mut roots: Vec<Fe> = (0..g)
            .map(|k| Fe(t.exp[((x0 + k * mm) % m) as usize]))
            .collect();
        roots.sort();
        roots
    }

    /// Renders an element in the coefficient grammar: a plain integer for
    /// prime-field elements, otherwise `(c0+c1*s+...)`.
    pub fn render(&self, a: Fe) -> String {
        if self.is_prime_subfield(a) {
            return a.0.to_string();
        }
        let mut out = String::from("(");
        let mut first = true;
        for (i, d) in self.digits(a).into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            if !first {
                out.push('+');
            }
            first = false;
            match (i, d) {
                (0, d) => out.push_str(&d.to_string()),
                (1, 1) => out.push('s'),
                (1, d) => out.push_str(&format!("{d}*s")),
                (i, 1) => out.push_str(&format!("s^{i}")),
                (i, d) => out.push_str(&format!("{d}*s^{i}")),
            }
        }
        out.push(')');
        out
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

fn first_irreducible(p: u32, e: usize) -> Vec<u32> {
    let total = (p as u64).pow(e as u32);
    for code in 0..total {
        let mut m = decode(p, e as u32, code as u32);
        m.push(1);
        if fp_poly_is_irreducible(p, &m) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField for Field {
    type Elem = Fe;

    fn base(&self) -> &Field {
        self
    }

    fn size(&self) -> u64 {
        Field::size(self)
    }

    fn one(&self) -> Fe {
        Fe::ONE
    }

    fn is_zero(&self, x: &Fe) -> bool {
        x.is_zero()
    }

    fn mul(&self, x: &Fe, y: &Fe) -> Fe {
        Field::mul(self, *x, *y)
    }

    fn embed(&self, c: Fe) -> Fe {
        c
    }

    fn pow(&self, x: &Fe, exp: u64) -> Fe {
        Field::pow(self, *x, exp)
    }
}
