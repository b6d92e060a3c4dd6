//! Places of F_q(t): valuations, residues, weak approximation and splitting
//! in Kummer steps.

use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::ffield::{Fe, Field, FiniteField};
use crate::parse::parse_poly;
use crate::polyring::{factor, monic_polynomials, Polynomial, RationalFunction};

/// A place of F_q(t): a monic irreducible polynomial or the degree valuation.
/// Finite places come first, in canonical polynomial order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Polynomial),
    Infinity,
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "{pi}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Parses `inf` or a monic irreducible polynomial.
pub fn parse_place(field: &Field, src: &str) -> Result<Place> {
    let s = src.trim();
    if s == "inf" || s == "∞" || s == "infinity" {
        return Ok(Place::Infinity);
    }
    let pi = parse_poly(field, s)?;
    if pi.is_constant() || !pi.is_monic() {
        return Err(
            ParseError::new(0, format!("{pi} is not a monic nonconstant polynomial")).into(),
        );
    }
    Place::finite(pi)
}

impl Place {
    /// The finite place of a monic irreducible polynomial.
    pub fn finite(pi: Polynomial) -> Result<Place> {
        if pi.is_constant() || !pi.is_monic() || !pi.is_irreducible()? {
            return Err(Error::precondition(format!(
                "{pi} is not monic irreducible"
            )));
        }
        Ok(Place::Finite(pi))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().unwrap(),
            Place::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    /// π at a finite place, 1/t at infinity.
    pub fn uniformizer(&self, field: &Field) -> RationalFunction {
        match self {
            Place::Finite(pi) => pi.into(),
            Place::Infinity => RationalFunction::t(field).inv().unwrap(),
        }
    }

    /// Size q^deg of the residue field.
    pub fn residue_size(&self, field: &Field) -> u64 {
        field.size().pow(self.degree() as u32)
    }

    /// v(f) for a polynomial, `None` for zero.
    pub fn poly_valuation(&self, f: &Polynomial) -> Option<i64> {
        if f.is_zero() {
            return None;
        }
        Some(match self {
            Place::Finite(pi) => f.multiplicity(pi) as i64,
            Place::Infinity => -f.deg(),
        })
    }

    /// v(r), `None` meaning +∞ for r = 0.
    pub fn valuation(&self, r: &RationalFunction) -> Option<i64> {
        let vn = self.poly_valuation(r.num())?;
        Some(vn - self.poly_valuation(r.den()).unwrap())
    }

    pub fn residue_field(&self, field: &Field) -> ResidueField {
        match self {
            Place::Finite(pi) => ResidueField::new(pi.clone()),
            // F_q presented as F_q[t]/(t), so residues are constants.
            Place::Infinity => ResidueField::new(Polynomial::t(field)),
        }
    }

    /// Image of r in the residue field; requires v(r) ≥ 0.
    pub fn residue(&self, r: &RationalFunction) -> Result<Polynomial> {
        let field = r.field();
        match self.valuation(r) {
            None => return Ok(Polynomial::zero(field)),
            Some(v) if v < 0 => {
                return Err(Error::precondition(format!(
                    "{r} has a pole of order {} at {self}",
                    -v
                )))
            }
            _ => {}
        }
        match self {
            Place::Finite(pi) => {
                let den_inv = r.den().inv_mod(pi)?;
                (r.num() * &den_inv).rem(pi)
            }
            Place::Infinity => {
                if r.num().deg() < r.den().deg() {
                    return Ok(Polynomial::zero(field));
                }
                let c = field.div(r.num().leading_coeff(), r.den().leading_coeff())?;
                Ok(Polynomial::constant(field, c))
            }
        }
    }
}

/// F_q[t]/(π) with elements as reduced polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    modulus: Polynomial,
}

impl ResidueField {
    pub fn new(modulus: Polynomial) -> Self {
        ResidueField { modulus }
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        f.rem(&self.modulus).unwrap()
    }

    pub fn inv(&self, a: &Polynomial) -> Result<Polynomial> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        a.inv_mod(&self.modulus)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Polynomial> + '_ {
        let field = self.modulus.field();
        let d = self.degree();
        let q = field.size();
        (0..q.pow(d as u32)).map(move |mut code| {
            let mut coeffs = Vec::with_capacity(d);
            for _ in 0..d {
                coeffs.push(field.from_code((code % q) as u32).unwrap());
                code /= q;
            }
            Polynomial::new(field, coeffs)
        })
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &Polynomial) -> u64 {
        let mut order = self.size() - 1;
        for r in crate::ffield::prime_factors(order) {
            while order.is_multiple_of(r) && self.pow(a, order / r).is_one() {
                order /= r;
            }
        }
        order
    }
}

impl FiniteField for ResidueField {
    type Elem = Polynomial;

    fn base(&self) -> &Field {
        self.modulus.field()
    }

    fn size(&self) -> u64 {
        self.base().size().pow(self.degree() as u32)
    }

    fn one(&self) -> Polynomial {
        self.reduce(&Polynomial::one(self.base()))
    }

    fn is_zero(&self, x: &Polynomial) -> bool {
        x.is_zero()
    }

    fn mul(&self, x: &Polynomial, y: &Polynomial) -> Polynomial {
        self.reduce(&(x * y))
    }

    fn embed(&self, c: Fe) -> Polynomial {
        Polynomial::constant(self.base(), c)
    }
}

/// Places where r has nonzero valuation, in canonical order.
pub fn support(r: &RationalFunction) -> Result<Vec<Place>> {
    if r.is_zero() {
        return Err(Error::precondition("support of zero"));
    }
    let mut places: Vec<Place> = Vec::new();
    for poly in [r.num(), r.den()] {
        for (pi, _) in factor(poly)? {
            places.push(Place::Finite(pi));
        }
    }
    if Place::Infinity.valuation(r) != Some(0) {
        places.push(Place::Infinity);
    }
    places.sort();
    places.dedup();
    Ok(places)
}

/// A weak approximation constraint: v(y − target) ≥ min_valuation.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub place: Place,
    pub target: RationalFunction,
    pub min_valuation: i64,
}

/// Finds y with v(y − target) ≥ m at every constrained place.
///
/// The result is P/D where D clears the target poles at the finite places
/// (times a power of an unconstrained place when the infinity constraint
/// needs room) and P is chosen by CRT modulo Π π^(m+k), then shifted by a
/// multiple of that modulus to match the target at infinity.
pub fn weak_approximation(field: &Field, constraints: &[Constraint]) -> Result<RationalFunction> {
    for (i, a) in constraints.iter().enumerate() {
        if constraints[..i].iter().any(|b| b.place == a.place) {
            return Err(Error::precondition(format!(
                "place {} is constrained twice",
                a.place
            )));
        }
        if a.target.field() != field {
            return Err(Error::FieldMismatch);
        }
    }
    let finite: Vec<(&Polynomial, &Constraint)> = constraints
        .iter()
        .filter_map(|c| match &c.place {
            Place::Finite(pi) => Some((pi, c)),
            Place::Infinity => None,
        })
        .collect();
    let at_infinity = constraints.iter().find(|c| c.place.is_infinity());

    // Pole orders k and congruence exponents m + k.
    let mut d = Polynomial::one(field);
    let mut moduli = Vec::new();
    for &(pi, c) in &finite {
        let k = c.place.valuation(&c.target).map_or(0, |v| (-v).max(0));
        d = &d * &pi.pow(k as u64);
        let exp = c.min_valuation + k;
        if exp > 0 {
            moduli.push((pi, c, exp as u64));
        }
    }
    let big_m = moduli
        .iter()
        .fold(Polynomial::one(field), |acc, (pi, _, e)| &acc * &pi.pow(*e));

    if let Some(inf) = at_infinity {
        let bound = d.deg() - inf.min_valuation;
        let needed = big_m.deg() - 1;
        if bound < needed {
            let aux = first_unconstrained_place(field, constraints)?;
            let step = aux.deg();
            let j = (needed - bound + step - 1) / step;
            d = &d * &aux.pow(j as u64);
        }
    }

    // CRT for P ≡ D·target mod π^e.
    let d_rat = RationalFunction::from(&d);
    let mut p0 = Polynomial::zero(field);
    for (pi, c, e) in &moduli {
        let modulus = pi.pow(*e);
        let local = &d_rat * &c.target;
        let residue = (local.num() * &local.den().inv_mod(&modulus)?).rem(&modulus)?;
        let cofactor = big_m.exact_div(&modulus)?;
        let lift = (&residue * &cofactor.inv_mod(&modulus)?).rem(&modulus)?;
        p0 = &p0 + &(&lift * &cofactor);
    }
    let mut p = p0.rem(&big_m)?;

    if let Some(inf) = at_infinity {
        let g = &d_rat * &inf.target;
        let g_high = g.num().div_rem(g.den())?.0;
        let h = (&g_high - &p).div_rem(&big_m)?.0;
        p = &p + &(&big_m * &h);
    }

    let y = RationalFunction::new(p, d)?;
    for c in constraints {
        let ok = c
            .place
            .valuation(&(&y - &c.target))
            .is_none_or(|v| v >= c.min_valuation);
        if !ok {
            return Err(Error::precondition(format!(
                "constraint at {} cannot be met by this construction",
                c.place
            )));
        }
    }
    Ok(y)
}

fn first_unconstrained_place(field: &Field, constraints: &[Constraint]) -> Result<Polynomial> {
    for deg in 1..=8 {
        for f in monic_polynomials(field, deg) {
            if f.is_irreducible()?
                && !constraints
                    .iter()
                    .any(|c| c.place == Place::Finite(f.clone()))
            {
                return Ok(f);
            }
        }
    }
    Err(Error::SearchExhausted(
        "no unconstrained place of degree ≤ 8".into(),
    ))
}

/// Ramification index and residue degree of one place above a base place.
pub type SplitData = Vec<(u64, u64)>;

/// Decomposition of a place of F_q(t) in F_q(t)(ⁿ√f).
pub fn split_type(place: &Place, n: u64, f: &Polynomial) -> Result<SplitData> {
    let field = f.field();
    if n == 0 || !(field.size() - 1).is_multiple_of(n) {
        return Err(Error::unsupported(format!("n = {n} does not divide q - 1")));
    }
    if f.is_constant() || !f.is_monic() || !f.is_irreducible()? {
        return Err(Error::precondition(format!("{f} is not monic irreducible")));
    }
    match place {
        Place::Finite(pi) if pi == f => Ok(vec![(n, 1)]),
        Place::Infinity => {
            let d = f.degree().unwrap() as u64;
            if !d.is_multiple_of(n) {
                return Err(Error::precondition(format!(
                    "n = {n} does not divide deg f = {d}"
                )));
            }
            Ok(vec![(1, 1); n as usize])
        }
        Place::Finite(pi) => {
            let rf = ResidueField::new(pi.clone());
            let c = rf.reduce(f);
            let q_res = rf.size();
            // X^n − c splits into factors of degree d = order of c^((Q−1)/n).
            let y = rf.pow(&c, (q_res - 1) / n);
            let d = rf.order(&y);
            Ok(vec![(1, d); (n / d) as usize])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;
    use crate::polyring::enumerate_pn_plus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn place(s: &str) -> Place {
        parse_place(&f5(), s).unwrap()
    }

    fn rat(s: &str) -> RationalFunction {
        parse_ratfunc(&f5(), s).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(place("t").valuation(&rat("t^2/(t-1)")), Some(2));
        assert_eq!(Place::Infinity.valuation(&rat("t^2/(t-1)")), Some(-1));
        assert_eq!(place("t-1").valuation(&rat("t^2-1")), Some(1));
        assert_eq!(place("t").valuation(&rat("0")), None);
    }

    #[test]
    fn residue_examples() {
        assert_eq!(place("t").residue(&rat("t^2+2")).unwrap().to_string(), "2");
        assert_eq!(
            Place::Infinity
                .residue(&rat("(t+1)/t"))
                .unwrap()
                .to_string(),
            "1"
        );
        let r = place("t^2+2").residue(&rat("t")).unwrap();
        assert_eq!(r.to_string(), "t");
        let rf = place("t^2+2").residue_field(&f5());
        assert_eq!(rf.order(&r), 8);
        assert!(place("t").residue(&rat("1/t")).is_err());
    }

    #[test]
    fn parse_place_rejects_non_places() {
        let f = f5();
        assert!(parse_place(&f, "t^2+1").is_err());
        assert!(parse_place(&f, "2*t").is_err());
        assert!(parse_place(&f, "3").is_err());
        assert_eq!(parse_place(&f, " inf ").unwrap(), Place::Infinity);
    }

    fn check(constraints: &[Constraint], y: &RationalFunction) {
        for c in constraints {
            let v = c.place.valuation(&(y - &c.target));
            assert!(
                v.is_none_or(|v| v >= c.min_valuation),
                "{} at {}",
                y,
                c.place
            );
        }
    }

    fn con(p: &str, target: &str, m: i64) -> Constraint {
        Constraint {
            place: place(p),
            target: rat(target),
            min_valuation: m,
        }
    }

    #[test]
    fn weak_approximation_examples() {
        let f = f5();
        let cs = [con("t", "0", 2), con("t-1", "1", 1)];
        assert_eq!(weak_approximation(&f, &cs).unwrap().to_string(), "t^2");
        let cs = [con("t", "0", 1)];
        assert!(weak_approximation(&f, &cs).unwrap().is_zero());
        let cs = [con("t", "1", 1), con("inf", "0", 1)];
        let y = weak_approximation(&f, &cs).unwrap();
        check(&cs, &y);
        let dup = [con("t", "1", 1), con("t", "0", 1)];
        assert!(weak_approximation(&f, &dup).is_err());
    }

    #[test]
    fn weak_approximation_random_constraints() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pool: Vec<Place> = ["t", "t+1", "t+2", "t^2+2", "t^2+t+1", "inf"]
            .iter()
            .map(|s| place(s))
            .collect();
        use rand::Rng;
        for _ in 0..300 {
            let mut cs = Vec::new();
            for p in &pool {
                if rng.gen_bool(0.5) {
                    cs.push(Constraint {
                        place: p.clone(),
                        target: RationalFunction::random(&f, 3, &mut rng),
                        min_valuation: rng.gen_range(-2..4),
                    });
                }
            }
            let y = weak_approximation(&f, &cs).unwrap();
            check(&cs, &y);
        }
    }

    #[test]
    fn product_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for field in [f5(), Field::new(3, 2, None).unwrap()] {
            for _ in 0..2000 {
                let r = RationalFunction::random_nonzero(&field, 4, &mut rng);
                let total: i64 = support(&r)
                    .unwrap()
                    .iter()
                    .map(|v| v.degree() as i64 * v.valuation(&r).unwrap())
                    .sum();
                assert_eq!(total, 0, "{r}");
            }
        }
    }

    #[test]
    fn split_type_examples() {
        let f = rat("t^2+2").num().clone();
        assert_eq!(split_type(&place("t^2+2"), 2, &f).unwrap(), vec![(2, 1)]);
        assert_eq!(
            split_type(&Place::Infinity, 2, &f).unwrap(),
            vec![(1, 1), (1, 1)]
        );
        assert_eq!(split_type(&place("t"), 2, &f).unwrap(), vec![(1, 2)]);
        let lin = rat("t").num().clone();
        assert!(split_type(&Place::Infinity, 2, &lin).is_err());
        assert!(split_type(&place("t"), 3, &f).is_err());
    }

    /// For prime n, X^n − c splits completely iff it has a root, and is
    /// irreducible otherwise.
    #[test]
    fn split_type_matches_root_counting() {
        for (p, e, n) in [(5, 1, 2), (7, 1, 3), (7, 1, 2), (3, 2, 2)] {
            let field = Field::new(p, e, None).unwrap();
            let mut places: Vec<Place> = Vec::new();
            for d in 1..=2 {
                for pi in monic_polynomials(&field, d) {
                    if pi.is_irreducible().unwrap() {
                        places.push(Place::Finite(pi));
                    }
                }
            }
            places.push(Place::Infinity);
            let levels = enumerate_pn_plus(&field, n as usize, 2 * n as usize).unwrap();
            for f in levels.iter().step_by(levels.len() / 12 + 1) {
                let mut ramified = 0;
                for v in &places {
                    let data = split_type(v, n, f).unwrap();
                    assert_eq!(data.iter().map(|(e, f)| e * f).sum::<u64>(), n);
                    if data.iter().any(|&(e, _)| e > 1) {
                        ramified += 1;
                        assert_eq!(v, &Place::Finite(f.clone()));
                        continue;
                    }
                    if let Place::Finite(pi) = v {
                        let rf = ResidueField::new(pi.clone());
                        let c = rf.reduce(f);
                        let roots = rf.elements().filter(|x| rf.pow(x, n) == c).count() as u64;
                        let expected = if roots > 0 {
                            vec![(1, 1); n as usize]
                        } else {
                            vec![(1, n)]
                        };
                        assert_eq!(data, expected, "{f} at {v}");
                        assert!(roots == 0 || roots == n);
                    }
                }
                assert_eq!(ramified, if f.degree().unwrap() <= 2 { 1 } else { 0 });
            }
        }
    }
}
