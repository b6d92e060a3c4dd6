//! Places of a Kummer tower above a place of K, through explicit embeddings
//! of the tower into E((ϖ)).
//!
//! For a base place with uniformizer T and residue field F_Q, let m_i be the
//! valuation of the i-th level polynomial and g = gcd(n, m_1, …, m_M). Every
//! place above has ramification e = n/g, so ϖ^e = T, and the residue fields
//! all embed into the smallest extension E of F_Q holding an n-th root of each
//! leading coefficient. The n^M embeddings send u_i to
//! ζ^(j_i)·θ_i·ϖ^(m_i/g)·(unit series), labelled by tuples j. Frobenius and
//! inertia act on labels by translation, and the places above are the orbits.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ffield::{gcd_u64, Fe, Field, FiniteField, MAX_FIELD_SIZE};
use crate::laurent::{inv_trunc, mul_trunc, LaurentSeries};
use crate::places::Place;
use crate::polyring::{factor, Polynomial, RationalFunction};
use crate::tower::{TowerElement, TowerSpec};

/// Largest ϖ-adic precision tried before giving up.
pub const MAX_LOCAL_PRECISION: usize = 1 << 12;
const START_PRECISION: usize = 16;

/// A place of the tower above a fixed base place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceAbove {
    pub index: usize,
    /// Smallest embedding label in the orbit.
    pub label: Vec<usize>,
    pub e: u64,
    pub f: u64,
}

impl fmt::Display for PlaceAbove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label: Vec<String> = self.label.iter().map(|j| j.to_string()).collect();
        write!(f, "P[{}] (e={}, f={})", label.join(","), self.e, self.f)
    }
}

/// Truncated expansions at one ϖ-adic precision.
struct Expansions {
    /// Powers of the image of t, finite places only.
    t_pows: Vec<Vec<Fe>>,
    /// π^K with K = ⌈A/e⌉; coefficients only matter modulo it.
    pi_power: Option<Polynomial>,
    /// Unit part of each basis monomial under the label-zero embedding.
    monos: Vec<Vec<Fe>>,
}

pub struct LocalData {
    spec: Arc<TowerSpec>,
    base: Place,
    big: Field,
    embed: Vec<Fe>,
    /// Root of the base place's polynomial in E (unused at infinity).
    tau: Fe,
    q_res: u64,
    e: u64,
    /// Base valuation m_i of each level polynomial.
    base_orders: Vec<i64>,
    /// ϖ-order of each radical.
    orders: Vec<i64>,
    theta: Vec<Fe>,
    zeta: Fe,
    places: Vec<PlaceAbove>,
    /// Place index of every label, indexed like tower basis elements.
    place_of: Vec<usize>,
    cache: Mutex<HashMap<usize, Arc<Expansions>>>,
}

impl fmt::Debug for LocalData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalData({:?} over {}, E = {})",
            self.spec, self.base, self.big
        )
    }
}

/// Smallest root in `big` of a polynomial given by its coefficients there.
fn smallest_root(big: &Field, coeffs: Vec<Fe>) -> Result<Fe> {
    let poly = Polynomial::new(big, coeffs);
    factor(&poly)?
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| big.neg(g.coeff(0)))
        .min()
        .ok_or_else(|| Error::precondition("no root in the local residue field"))
}

fn eval_series(field: &Field, coeffs: &[Fe], x: &[Fe], len: usize) -> Vec<Fe> {
    let mut acc = vec![Fe::ZERO; len];
    for &c in coeffs.iter().rev() {
        acc = mul_trunc(field, &acc, x, len);
        acc.resize(len, Fe::ZERO);
        if len > 0 {
            acc[0] = field.add(acc[0], c);
        }
    }
    acc
}

impl LocalData {
    pub fn new(spec: &Arc<TowerSpec>, base: &Place) -> Result<Self> {
        let field = spec.field();
        let n = spec.n();
        let res = base.residue_field(field);
        let q_res = base.residue_size(field);
        let t_unif = base.uniformizer(field);
        let mut m = Vec::new();
        let mut leads = Vec::new();
        let mut need = 1u64;
        for p in spec.levels() {
            let r = RationalFunction::from(p);
            let v = base.valuation(&r).unwrap();
            let c = base.residue(&(&r * &t_unif.pow(-v)?))?;
            // c needs an extension of degree ord(c^((Q-1)/n)) for its n-th roots.
            let y = res.pow(&c, (q_res - 1) / n);
            let mut d = 1;
            let mut z = y.clone();
            while !z.is_one() {
                z = res.mul(&z, &y);
                d += 1;
            }
            need = need / gcd_u64(need, d) * d;
            m.push(v);
            leads.push(c);
        }
        let g = m.iter().fold(n, |acc, &v| gcd_u64(acc, v.unsigned_abs()));
        let e = n / g;
        let total_deg = field.degree() as u64 * base.degree() as u64 * need;
        let p = field.characteristic();
        if (p as u64)
            .checked_pow(total_deg as u32)
            .is_none_or(|s| s > MAX_FIELD_SIZE)
        {
            return Err(Error::unsupported(format!(
                "local residue field F_{p}^{total_deg} exceeds {MAX_FIELD_SIZE} elements"
            )));
        }
        let big = if total_deg == field.degree() as u64 {
            field.clone()
        } else {
            Field::new(p, total_deg as u32, None)?
        };
        let embed: Vec<Fe> = if big == *field {
            field.elements().collect()
        } else {
            let modulus: Vec<Fe> = field
                .modulus()
                .iter()
                .map(|&c| big.from_int(c as i64))
                .collect();
            let s = if field.degree() == 1 {
                Fe::ZERO
            } else {
                smallest_root(&big, modulus)?
            };
            field
                .elements()
                .map(|a| {
                    field.digits(a).iter().rev().fold(Fe::ZERO, |acc, &d| {
                        big.add(big.mul(acc, s), big.from_int(d as i64))
                    })
                })
                .collect()
        };
        let map = |c: Fe| embed[c.code() as usize];
        let tau = match base {
            Place::Finite(pi) if pi.deg() == 1 => big.neg(map(pi.coeff(0))),
            Place::Finite(pi) => {
                smallest_root(&big, pi.coeffs().iter().map(|&c| map(c)).collect())?
            }
            Place::Infinity => Fe::ZERO,
        };
        let theta = leads
            .iter()
            .map(|c| {
                let c = c
                    .coeffs()
                    .iter()
                    .rev()
                    .fold(Fe::ZERO, |acc, &d| big.add(big.mul(acc, tau), map(d)));
                big.nth_roots(c, n)
                    .first()
                    .copied()
                    .ok_or_else(|| Error::precondition("missing n-th root"))
            })
            .collect::<Result<Vec<Fe>>>()?;
        let zeta = map(spec.zeta());
        let orders: Vec<i64> = m.iter().map(|&v| v / g as i64).collect();

        // Frobenius shifts: θ^Q = θ·ζ^a.
        let zpows: Vec<Fe> = (0..n).map(|k| big.pow(zeta, k)).collect();
        let frob: Vec<u64> = theta
            .iter()
            .map(|&th| {
                let ratio = big.pow(th, q_res - 1);
                zpows
                    .iter()
                    .position(|&z| z == ratio)
                    .expect("θ^(Q-1) is an n-th root of unity") as u64
            })
            .collect();
        let inertia: Vec<u64> = m.iter().map(|&v| v.rem_euclid(n as i64) as u64).collect();
        let levels = spec.num_levels();
        let mut subgroup = BTreeSet::new();
        subgroup.insert(vec![0u64; levels]);
        loop {
            let mut next = subgroup.clone();
            for h in &subgroup {
                for gen in [&frob, &inertia] {
                    next.insert(h.iter().zip(gen).map(|(a, b)| (a + b) % n).collect());
                }
            }
            if next.len() == subgroup.len() {
                break;
            }
            subgroup = next;
        }
        let orbit = subgroup.len() as u64;
        let mut place_of = vec![usize::MAX; spec.degree()];
        let mut places = Vec::new();
        for idx in 0..spec.degree() {
            if place_of[idx] != usize::MAX {
                continue;
            }
            let label = spec.exponents(idx);
            for h in &subgroup {
                let other: Vec<usize> = label
                    .iter()
                    .zip(h)
                    .map(|(&a, &b)| ((a as u64 + b) % n) as usize)
                    .collect();
                place_of[spec.index_of(&other)] = places.len();
            }
            places.push(PlaceAbove {
                index: places.len(),
                label,
                e,
                f: orbit / e,
            });
        }
        Ok(LocalData {
            spec: spec.clone(),
            base: base.clone(),
            big,
            embed,
            tau,
            q_res,
            e,
            base_orders: m,
            orders,
            theta,
            zeta,
            places,
            place_of,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &Arc<TowerSpec> {
        &self.spec
    }

    pub fn base(&self) -> &Place {
        &self.base
    }

    pub fn places(&self) -> &[PlaceAbove] {
        &self.places
    }

    /// Common ramification index of the places above.
    pub fn ramification(&self) -> u64 {
        self.e
    }

    /// Size Q of the base residue field.
    pub fn base_residue_size(&self) -> u64 {
        self.q_res
    }

    /// The field E containing every residue field above.
    pub fn residue_field(&self) -> &Field {
        &self.big
    }

    /// Place containing the embedding with this label.
    pub fn place_of_label(&self, label: &[usize]) -> usize {
        self.place_of[self.spec.index_of(label)]
    }

    /// ϖ-order of the monomial Π u_i^(k_i), the same at every place above.
    pub fn monomial_order(&self, exps: &[usize]) -> i64 {
        exps.iter()
            .zip(&self.orders)
            .map(|(&k, &o)| k as i64 * o)
            .sum()
    }

    fn map(&self, c: Fe) -> Fe {
        self.embed[c.code() as usize]
    }

    fn expansions(&self, prec: usize) -> Arc<Expansions> {
        if let Some(x) = self.cache.lock().unwrap().get(&prec) {
            return x.clone();
        }
        let built = Arc::new(self.build_expansions(prec));
        self.cache.lock().unwrap().insert(prec, built.clone());
        built
    }

    fn build_expansions(&self, prec: usize) -> Expansions {
        let big = &self.big;
        let e = self.e as usize;
        let n = self.spec.n();
        let levels = self.spec.levels();
        let (mut t_pows, mut pi_power) = (Vec::new(), None);
        // Each level polynomial as a series in ϖ, with its ϖ-order stripped.
        let units: Vec<Vec<Fe>> = match &self.base {
            Place::Infinity => levels
                .iter()
                .map(|p| {
                    let mut u = vec![Fe::ZERO; prec];
                    for (i, &c) in p.coeffs().iter().rev().enumerate() {
                        if e * i < prec {
                            u[e * i] = self.map(c);
                        }
                    }
                    u
                })
                .collect(),
            Place::Finite(pi) => {
                let extra = e * self.base_orders.iter().copied().max().unwrap_or(0).max(0) as usize;
                let len = prec + extra;
                let t = self.t_series(pi, len.div_ceil(e));
                let mut t_pi = vec![Fe::ZERO; len];
                for (i, &c) in t.iter().enumerate() {
                    if e * i < len {
                        t_pi[e * i] = c;
                    }
                }
                let k = prec.div_ceil(e);
                let count = pi.degree().unwrap() * k;
                let mut cur = vec![Fe::ZERO; prec];
                cur[0] = Fe::ONE;
                let t_short: Vec<Fe> = t_pi[..prec].to_vec();
                for _ in 0..count {
                    t_pows.push(cur.clone());
                    cur = mul_trunc(big, &cur, &t_short, prec);
                    cur.resize(prec, Fe::ZERO);
                }
                pi_power = Some(pi.pow(k as u64));
                levels
                    .iter()
                    .zip(&self.base_orders)
                    .map(|(p, &m_i)| {
                        let m_i = m_i as usize;
                        let coeffs: Vec<Fe> = p.coeffs().iter().map(|&c| self.map(c)).collect();
                        let full = eval_series(big, &coeffs, &t_pi, len);
                        let start = e * m_i;
                        debug_assert!(full[..start].iter().all(|c| c.is_zero()));
                        let mut u: Vec<Fe> = full[start..].to_vec();
                        u.resize(prec, Fe::ZERO);
                        u
                    })
                    .collect()
            }
        };
        // n-th roots with constant term θ, normalized to constant term 1.
        let roots: Vec<Vec<Fe>> = units
            .iter()
            .map(|u| {
                let lead_inv = big.inv(u[0]).unwrap();
                let unit: Vec<Fe> = u.iter().map(|&c| big.mul(c, lead_inv)).collect();
                let s = LaurentSeries::new(big, 0, unit, Some(prec as i64));
                let r = s
                    .nth_root(n, Fe::ONE, prec)
                    .expect("unit series has an n-th root");
                (0..prec as i64).map(|i| r.coeff(i)).collect()
            })
            .collect();
        let monos = (0..self.spec.degree())
            .map(|idx| {
                let mut acc = vec![Fe::ZERO; prec];
                acc[0] = Fe::ONE;
                for (i, &k) in self.spec.exponents(idx).iter().enumerate() {
                    for _ in 0..k {
                        acc = mul_trunc(big, &acc, &roots[i], prec);
                        acc.resize(prec, Fe::ZERO);
                    }
                    let th = big.pow(self.theta[i], k as u64);
                    acc.iter_mut().for_each(|c| *c = big.mul(*c, th));
                }
                acc
            })
            .collect();
        Expansions {
            t_pows,
            pi_power,
            monos,
        }
    }

    /// The T-adic series t(T) with π(t(T)) = T and t(0) = τ, to `len` terms.
    fn t_series(&self, pi: &Polynomial, len: usize) -> Vec<Fe> {
        let big = &self.big;
        let coeffs: Vec<Fe> = pi.coeffs().iter().map(|&c| self.map(c)).collect();
        let deriv: Vec<Fe> = pi
            .derivative()
            .coeffs()
            .iter()
            .map(|&c| self.map(c))
            .collect();
        let mut t = vec![self.tau];
        let mut cur = 1;
        while cur < len {
            cur = (2 * cur).min(len);
            t.resize(cur, Fe::ZERO);
            let mut f = eval_series(big, &coeffs, &t, cur);
            if cur > 1 {
                f[1] = big.sub(f[1], Fe::ONE);
            }
            let d = eval_series(big, &deriv, &t, cur);
            let delta = mul_trunc(big, &f, &inv_trunc(big, &d, cur), cur);
            for (a, b) in t.iter_mut().zip(delta) {
                *a = big.sub(*a, b);
            }
        }
        t.truncate(len.max(1));
        t
    }

    /// Image of a polynomial coefficient as (ϖ-shift, series of `prec` terms).
    fn coeff_image(&self, c: &Polynomial, exps: &Expansions, prec: usize) -> (i64, Vec<Fe>) {
        let big = &self.big;
        let e = self.e as usize;
        match &exps.pi_power {
            None => {
                let d = c.degree().unwrap();
                let mut s = vec![Fe::ZERO; prec];
                for (i, &a) in c.coeffs().iter().rev().enumerate() {
                    if e * i < prec {
                        s[e * i] = self.map(a);
                    }
                }
                (-((e * d) as i64), s)
            }
            Some(pk) => {
                let r = c.rem(pk).unwrap();
                let mut s = vec![Fe::ZERO; prec];
                for (i, &a) in r.coeffs().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let a = self.map(a);
                    for (x, &y) in s.iter_mut().zip(&exps.t_pows[i]) {
                        *x = big.add(*x, big.mul(a, y));
                    }
                }
                (0, s)
            }
        }
    }

    /// Leading term of Σ c_k·(monomial k) under the embedding `label`, known
    /// modulo ϖ^prec past the smallest term shift.
    fn leading_at(&self, coeffs: &[Polynomial], label: &[usize], prec: usize) -> Option<(i64, Fe)> {
        let big = &self.big;
        let exps = self.expansions(prec);
        let mut terms = Vec::new();
        for (idx, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.spec.exponents(idx);
            let (shift, s) = self.coeff_image(c, &exps, prec);
            let twist: u64 = k.iter().zip(label).map(|(&a, &b)| (a * b) as u64).sum();
            let z = big.pow(self.zeta, twist);
            let mut prod = mul_trunc(big, &s, &exps.monos[idx], prec);
            prod.iter_mut().for_each(|x| *x = big.mul(*x, z));
            terms.push((shift + self.monomial_order(&k), prod));
        }
        let low = terms.iter().map(|(s, _)| *s).min()?;
        let mut sum = vec![Fe::ZERO; prec];
        for (shift, series) in terms {
            let off = (shift - low) as usize;
            for (i, &c) in series.iter().enumerate() {
                if off + i >= prec {
                    break;
                }
                sum[off + i] = big.add(sum[off + i], c);
            }
        }
        sum.iter()
            .position(|c| !c.is_zero())
            .map(|i| (low + i as i64, sum[i]))
    }

    fn leading_certified(&self, coeffs: &[Polynomial], label: &[usize]) -> Result<(i64, Fe)> {
        let mut prec = START_PRECISION;
        while prec <= MAX_LOCAL_PRECISION {
            if let Some(x) = self.leading_at(coeffs, label, prec) {
                return Ok(x);
            }
            prec *= 2;
        }
        Err(Error::PrecisionExhausted(format!(
            "no nonzero term within ϖ^{MAX_LOCAL_PRECISION} at a place above {}",
            self.base
        )))
    }

    /// Leading ϖ-order and coefficient of x at a place, `None` for x = 0.
    pub fn leading(&self, x: &TowerElement, place: usize) -> Result<Option<(i64, Fe)>> {
        if x.is_zero() {
            return Ok(None);
        }
        let label = &self.places[place].label;
        let den = x
            .coeffs()
            .iter()
            .fold(Polynomial::one(x.field()), |acc, c| {
                let g = acc.gcd(c.den());
                &acc * &c.den().exact_div(&g).unwrap()
            });
        let scaled: Vec<Polynomial> = x
            .coeffs()
            .iter()
            .map(|c| c.num() * &den.exact_div(c.den()).unwrap())
            .collect();
        let (v_num, c_num) = self.leading_certified(&scaled, label)?;
        let mut den_coeffs = vec![Polynomial::zero(x.field()); self.spec.degree()];
        den_coeffs[0] = den;
        let (v_den, c_den) = self.leading_certified(&den_coeffs, label)?;
        Ok(Some((v_num - v_den, self.big.div(c_num, c_den)?)))
    }

    /// v_P(x) normalized so that v_P(T) = e; `None` for zero.
    pub fn valuation(&self, x: &TowerElement, place: usize) -> Result<Option<i64>> {
        if let Some(r) = x.as_base() {
            return Ok(self.base.valuation(r).map(|v| v * self.e as i64));
        }
        Ok(self.leading(x, place)?.map(|(v, _)| v))
    }

    /// Residue of x in E; requires v_P(x) ≥ 0.
    pub fn residue(&self, x: &TowerElement, place: usize) -> Result<Fe> {
        match self.leading(x, place)? {
            None => Ok(Fe::ZERO),
            Some((v, _)) if v > 0 => Ok(Fe::ZERO),
            Some((0, c)) => Ok(c),
            Some((v, _)) => Err(Error::precondition(format!(
                "pole of order {} at {}",
                -v, self.places[place]
            ))),
        }
    }

    /// Element u^k·T^b of valuation 1 at every place above.
    pub fn uniformizer(&self) -> Result<TowerElement> {
        self.monomial_with_order(1).next().ok_or_else(|| {
            Error::SearchExhausted(format!("no monomial uniformizer above {}", self.base))
        })
    }

    /// Monomials u^k·T^b with the given ϖ-order, in basis order.
    pub fn monomial_with_order(&self, target: i64) -> impl Iterator<Item = TowerElement> + '_ {
        let field = self.spec.field().clone();
        let t_unif = self.base.uniformizer(&field);
        let e = self.e as i64;
        (0..self.spec.degree()).filter_map(move |idx| {
            let k = self.spec.exponents(idx);
            let rest = target - self.monomial_order(&k);
            (rest % e == 0).then(|| {
                TowerElement::monomial(
                    &self.spec,
                    &k,
                    t_unif.pow(rest / e).expect("nonzero uniformizer"),
                )
            })
        })
    }
}
