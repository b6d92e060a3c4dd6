use super::Polynomial;
use crate::error::{Error, Result};
use crate::ffield::{gcd_u64, prime_factors, Fe, Field};

/// x^(q^k) mod m by k successive q-th powers.
pub(super) fn frobenius_power(x: &Polynomial, k: usize, m: &Polynomial) -> Polynomial {
    let q = x.field().size();
    let mut y = x.rem(m).expect("nonzero modulus");
    for _ in 0..k {
        y = y.pow_mod(q, m).expect("nonzero modulus");
    }
    y
}

/// Rabin's test: t^(q^d) ≡ t mod f, and gcd(t^(q^(d/r)) − t, f) = 1 for
/// every prime r dividing d.
pub(super) fn is_irreducible(f: &Polynomial) -> Result<bool> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::precondition("irreducibility of a constant")),
    };
    if d == 1 {
        return Ok(true);
    }
    let field = f.field();
    // A root means a linear factor; cheap to rule out on small fields.
    if field.size() <= 64 && field.elements().any(|a| f.eval(a).is_zero()) {
        return Ok(false);
    }
    let t = Polynomial::t(field);
    let mut divisors: Vec<usize> = prime_factors(d as u64)
        .into_iter()
        .map(|r| d / r as usize)
        .collect();
    divisors.sort_unstable();
    divisors.dedup();
    // Walk the Frobenius powers once, checking each maximal proper subdegree.
    let mut y = t.clone();
    let mut done = 0;
    for &k in &divisors {
        y = frobenius_power(&y, k - done, f);
        done = k;
        if !(&y - &t).gcd(f).is_one() {
            return Ok(false);
        }
    }
    y = frobenius_power(&y, d - done, f);
    Ok(y == t.rem(f)?)
}

/// All monic polynomials of the given degree in canonical order.
pub fn monic_polynomials(field: &Field, degree: usize) -> impl Iterator<Item = Polynomial> + '_ {
    let q = field.size();
    let total = q.checked_pow(degree as u32).expect("enumeration too large");
    (0..total).map(move |mut code| {
        // Digit i of the code is the coefficient of t^i, so numeric order of
        // codes is lexicographic order from the top coefficient down.
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(field.from_code((code % q) as u32).unwrap());
            code /= q;
        }
        coeffs.push(Fe::ONE);
        Polynomial::new(field, coeffs)
    })
}

/// Monic irreducibles whose degree is a positive multiple of n and at most
/// `max_degree`, in canonical order.
pub fn enumerate_pn_plus(field: &Field, n: usize, max_degree: usize) -> Result<Vec<Polynomial>> {
    if n == 0 {
        return Err(Error::precondition("n must be positive"));
    }
    if gcd_u64(n as u64, field.characteristic() as u64) != 1 {
        return Err(Error::precondition(format!(
            "n = {n} is divisible by the characteristic {}",
            field.characteristic()
        )));
    }
    if max_degree < n {
        return Err(Error::precondition("max_degree is below n"));
    }
    let mut out = Vec::new();
    for d in (n..=max_degree).step_by(n) {
        out.extend(monic_irreducibles(field, d)?);
    }
    Ok(out)
}

/// Largest q^d handled by the sieve; beyond it each candidate is tested.
const SIEVE_LIMIT: u64 = 1 << 24;

/// Monic irreducibles of degree d in canonical order.
pub fn monic_irreducibles(field: &Field, d: usize) -> Result<Vec<Polynomial>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    let q = field.size();
    match q.checked_pow(d as u32) {
        Some(total) if total <= SIEVE_LIMIT => Ok(sieve(field, d, total)),
        _ => {
            let mut out = Vec::new();
            for f in monic_polynomials(field, d) {
                if f.is_irreducible()? {
                    out.push(f);
                }
            }
            Ok(out)
        }
    }
}

/// Marks every product f·g with f irreducible of degree k ≤ d/2 and g monic
/// of degree d − k; the unmarked codes are the irreducibles.
fn sieve(field: &Field, d: usize, total: u64) -> Vec<Polynomial> {
    let q = field.size();
    let mut reducible = vec![false; total as usize];
    let mut prod = vec![Fe::ZERO; d + 1];
    for k in 1..=d / 2 {
        let small = sieve(field, k, q.pow(k as u32));
        let rest = d - k;
        let mut g = vec![Fe::ZERO; rest + 1];
        g[rest] = Fe::ONE;
        for f in &small {
            let fc = f.coeffs();
            for code in 0..q.pow(rest as u32) {
                let mut c = code;
                for slot in g.iter_mut().take(rest) {
                    *slot = field.from_code((c % q) as u32).unwrap();
                    c /= q;
                }
                prod.iter_mut().for_each(|x| *x = Fe::ZERO);
                for (i, &a) in fc.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, &b) in g.iter().enumerate() {
                        prod[i + j] = field.add(prod[i + j], field.mul(a, b));
                    }
                }
                let idx = prod[..d]
                    .iter()
                    .rev()
                    .fold(0u64, |acc, x| acc * q + x.code() as u64);
                reducible[idx as usize] = true;
            }
        }
    }
    reducible
        .iter()
        .enumerate()
        .filter(|(_, &r)| !r)
        .map(|(code, _)| {
            let mut c = code as u64;
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push(field.from_code((c % q) as u32).unwrap());
                c /= q;
            }
            coeffs.push(Fe::ONE);
            Polynomial::new(field, coeffs)
        })
        .collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut r = 2;
    while r * r <= n {
        if n.is_multiple_of(r) {
            n /= r;
            if n.is_multiple_of(r) {
                return 0;
            }
            sign = -sign;
        }
        r += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree d over F_q (necklace formula).
pub fn count_monic_irreducibles(q: u64, d: u64) -> u64 {
    let total: i128 = (1..=d)
        .filter(|m| d.is_multiple_of(*m))
        .map(|m| mobius(m) as i128 * (q as i128).pow((d / m) as u32))
        .sum();
    (total / d as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        let f = f5();
        assert!(!parse_poly(&f, "t^2+1").unwrap().is_irreducible().unwrap());
        assert!(parse_poly(&f, "t^2+2").unwrap().is_irreducible().unwrap());
        assert!(parse_poly(&f, "t").unwrap().is_irreducible().unwrap());
        assert!(parse_poly(&f, "3").unwrap().is_irreducible().is_err());
    }

    #[test]
    fn enumeration_examples() {
        let f = f5();
        let p2 = enumerate_pn_plus(&f, 2, 2).unwrap();
        assert_eq!(p2.len(), 10);
        assert_eq!(p2[0].to_string(), "t^2+2");
        let p1 = enumerate_pn_plus(&f, 1, 1).unwrap();
        let shown: Vec<String> = p1.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["t", "t+1", "t+2", "t+3", "t+4"]);
        assert_eq!(enumerate_pn_plus(&f, 1, 2).unwrap().len(), 15);
        assert!(enumerate_pn_plus(&f, 5, 10).is_err());
        assert!(enumerate_pn_plus(&f, 2, 1).is_err());
    }

    /// Irreducible iff no monic factor of degree 1..=d/2 divides it.
    fn brute_irreducible(f: &Polynomial) -> bool {
        let d = f.degree().unwrap();
        (1..=d / 2).all(|k| monic_polynomials(f.field(), k).all(|g| !g.divides(f)))
    }

    #[test]
    fn counts_match_necklace_formula_and_brute_force() {
        let fields = [
            Field::prime(3).unwrap(),
            f5(),
            Field::prime(7).unwrap(),
            Field::new(3, 3, None).unwrap(),
            Field::new(5, 2, None).unwrap(),
            Field::new(3, 2, None).unwrap(),
        ];
        for field in &fields {
            let q = field.size();
            for d in 1..=4usize {
                if q.pow(d as u32) > 10_000 {
                    continue;
                }
                let mut rabin = 0;
                for f in monic_polynomials(field, d) {
                    let r = f.is_irreducible().unwrap();
                    assert_eq!(r, brute_irreducible(&f), "{f} over {field}");
                    rabin += r as u64;
                }
                assert_eq!(rabin, count_monic_irreducibles(q, d as u64), "q={q} d={d}");
                let sieved = monic_irreducibles(field, d).unwrap();
                assert_eq!(sieved.len() as u64, rabin);
                assert!(sieved.iter().all(|f| f.is_irreducible().unwrap()));
            }
        }
    }

    #[test]
    fn enumeration_is_strictly_increasing() {
        let f9 = Field::new(3, 2, None).unwrap();
        let list = enumerate_pn_plus(&f9, 2, 4).unwrap();
        assert!(list.windows(2).all(|w| w[0] < w[1]));
        assert!(list
            .iter()
            .all(|p| p.degree().unwrap() % 2 == 0 && p.is_monic()));
        assert_eq!(
            list.len() as u64,
            count_monic_irreducibles(9, 2) + count_monic_irreducibles(9, 4)
        );
    }
}
