use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::irreducible::frobenius_power;
use super::Polynomial;
use crate::error::{Error, Result};

/// Polynomial whose p-th power is f; f must lie in F_q[t^p].
fn pth_root(f: &Polynomial) -> Polynomial {
    let field = f.field();
    let p = field.characteristic() as usize;
    let root_exp = field.size() / p as u64;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| field.pow(c, root_exp))
        .collect();
    Polynomial::new(field, coeffs)
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime
/// squarefree factors with multiplicities.
pub fn squarefree_decomposition(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let p = f.field().characteristic() as usize;
    let mut out = Vec::new();
    let f = f.monic();
    if f.is_constant() {
        return out;
    }
    let fd = f.derivative();
    if fd.is_zero() {
        for (g, m) in squarefree_decomposition(&pth_root(&f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&fd);
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).unwrap();
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).unwrap();
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a squarefree monic f into factors of degree exactly d each.
fn equal_degree(f: &Polynomial, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Polynomial>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let q = field.size();
    loop {
        let a = Polynomial::random(field, n - 1, rng);
        if a.is_constant() {
            continue;
        }
        // q is odd. a^((q^d - 1)/2) = (a · a^q ⋯ a^(q^(d-1)))^((q-1)/2)
        let mut norm = a.clone();
        let mut conj = a.clone();
        for _ in 1..d {
            conj = frobenius_power(&conj, 1, f);
            norm = (&norm * &conj).rem(f).unwrap();
        }
        let b = &norm.pow_mod((q - 1) / 2, f).unwrap() - &Polynomial::one(field);
        let g = b.gcd(f);
        if !g.is_one() && g.degree() != Some(n) && !g.is_zero() {
            let h = f.exact_div(&g).unwrap();
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Factorization into monic irreducibles with multiplicities, sorted in
/// canonical order. The leading coefficient is dropped.
pub fn factor(f: &Polynomial) -> Result<Vec<(Polynomial, usize)>> {
    if f.is_zero() {
        return Err(Error::precondition("factorization of zero"));
    }
    let field = f.field();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6661_6374);
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(f) {
        let t = Polynomial::t(field);
        let mut rest = g;
        let mut h = t.clone();
        let mut d = 0;
        while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = frobenius_power(&h, 1, &rest);
            let part = (&h - &t).gcd(&rest);
            if !part.is_one() {
                let mut pieces = Vec::new();
                equal_degree(&part, d, &mut rng, &mut pieces);
                out.extend(pieces.into_iter().map(|p| (p, mult)));
                rest = rest.exact_div(&part).unwrap();
                h = h.rem(&rest).unwrap();
            }
        }
        if !rest.is_constant() {
            out.push((rest, mult));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::parse::parse_poly;
    use rand::SeedableRng;

    #[test]
    fn factors_reassemble_and_are_irreducible() {
        let fields = [
            Field::prime(3).unwrap(),
            Field::prime(5).unwrap(),
            Field::prime(7).unwrap(),
            Field::new(3, 2, None).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in &fields {
            for deg in 1..=9 {
                let f = Polynomial::random_monic(field, deg, &mut rng);
                let parts = factor(&f).unwrap();
                let mut prod = Polynomial::one(field);
                for (g, m) in &parts {
                    assert!(g.is_monic() && g.is_irreducible().unwrap(), "{g}");
                    prod = &prod * &g.pow(*m as u64);
                }
                assert_eq!(prod, f, "over {field}");
            }
        }
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        let f3 = Field::prime(3).unwrap();
        // (t^3 + 2t + 1)^3 · (t+1)^2 · t over F_3: includes a p-th power block.
        let a = parse_poly(&f3, "t^3+2*t+1").unwrap();
        let f = &(&a.pow(3) * &parse_poly(&f3, "t+1").unwrap().pow(2)) * &Polynomial::t(&f3);
        let parts = factor(&f).unwrap();
        let shown: Vec<(String, usize)> = parts.iter().map(|(g, m)| (g.to_string(), *m)).collect();
        assert_eq!(
            shown,
            [("t".into(), 1), ("t+1".into(), 2), ("t^3+2*t+1".into(), 3)]
        );
    }
}
