use std::fmt;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::ffield::Field;

/// A polynomial in an auxiliary variable X with coefficients in F_q[t],
/// stored low to high without trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct XPoly {
    field: Field,
    coeffs: Vec<Polynomial>,
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*X^{i}"))
            .collect();
        write!(f, "XPoly({})", terms.join(" + "))
    }
}

impl XPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Polynomial>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        XPoly {
            field: field.clone(),
            coeffs,
        }
    }

    /// X^n − c.
    pub fn kummer(n: usize, c: &Polynomial) -> Self {
        let field = c.field();
        let mut coeffs = vec![Polynomial::zero(field); n + 1];
        coeffs[0] = -c;
        coeffs[n] = Polynomial::one(field);
        Self::new(field, coeffs)
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(f.from_int(i as i64)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(f, Vec::new());
        }
        let mut out = vec![Polynomial::zero(f); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(f, out)
    }
}

/// Determinant over F_q[t] by fraction-free (Bareiss) elimination.
pub(crate) fn bareiss_det(mut m: Vec<Vec<Polynomial>>, field: &Field) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(field);
    }
    let mut negate = false;
    let mut prev = Polynomial::one(field);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Polynomial::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Sylvester matrix of f (degree a) and g (degree b): b shifted rows of f
/// followed by a shifted rows of g, coefficients from the top degree down.
pub(crate) fn sylvester(f: &XPoly, g: &XPoly) -> Vec<Vec<Polynomial>> {
    let field = &f.field;
    let a = f.coeffs.len() - 1;
    let b = g.coeffs.len() - 1;
    let size = a + b;
    let mut rows = Vec::with_capacity(size);
    for (poly, shifts) in [(f, b), (g, a)] {
        let deg = poly.coeffs.len() - 1;
        for s in 0..shifts {
            let mut row = vec![Polynomial::zero(field); size];
            for (k, c) in poly.coeffs.iter().enumerate() {
                row[s + deg - k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Resultant res(f, g) as the Sylvester determinant.
pub fn resultant(f: &XPoly, g: &XPoly) -> Result<Polynomial> {
    if f.coeffs.is_empty() || g.coeffs.is_empty() {
        return Ok(Polynomial::zero(&f.field));
    }
    Ok(bareiss_det(sylvester(f, g), &f.field))
}

/// disc(f) = (−1)^(d(d−1)/2) · res(f, f′) / lc(f).
pub fn discriminant(f: &XPoly) -> Result<Polynomial> {
    let d = match f.degree() {
        Some(d) if d >= 2 => d,
        _ => {
            return Err(Error::precondition(
                "discriminant needs X-degree at least 2",
            ))
        }
    };
    let fd = f.derivative();
    if fd.coeffs.is_empty() {
        return Err(Error::precondition(
            "inseparable polynomial: derivative vanishes",
        ));
    }
    let res = resultant(f, &fd)?;
    let disc = res.exact_div(&f.coeffs[d])?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 {
        -disc
    } else {
        disc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Leibniz expansion over all permutations.
    fn leibniz_det(m: &[Vec<Polynomial>], field: &Field) -> Polynomial {
        fn rec(
            m: &[Vec<Polynomial>],
            row: usize,
            used: &mut Vec<bool>,
            field: &Field,
        ) -> Polynomial {
            if row == m.len() {
                return Polynomial::one(field);
            }
            let mut acc = Polynomial::zero(field);
            let mut sign_neg = false;
            for col in 0..m.len() {
                if used[col] {
                    continue;
                }
                // Sign of choosing col = parity of unused columns to its left.
                let term = if m[row][col].is_zero() {
                    Polynomial::zero(field)
                } else {
                    used[col] = true;
                    let sub = rec(m, row + 1, used, field);
                    used[col] = false;
                    &m[row][col] * &sub
                };
                acc = if sign_neg { &acc - &term } else { &acc + &term };
                sign_neg = !sign_neg;
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.len()], field)
    }

    #[test]
    fn quadratic_examples() {
        let f5 = Field::prime(5).unwrap();
        let c = parse_poly(&f5, "t^2+2").unwrap();
        let d = discriminant(&XPoly::kummer(2, &c)).unwrap();
        assert_eq!(d, c.scale(f5.from_int(4)));
        let t = Polynomial::t(&f5);
        assert_eq!(
            discriminant(&XPoly::kummer(2, &t)).unwrap(),
            t.scale(f5.from_int(4))
        );
    }

    #[test]
    fn cubic_kummer_char_7() {
        let f7 = Field::prime(7).unwrap();
        let c = parse_poly(&f7, "t^2+3*t+1").unwrap();
        let f = XPoly::kummer(3, &c);
        // disc(X^3 − c) = −27c^2.
        let expected = c.pow(2).scale(f7.from_int(-27));
        assert_eq!(discriminant(&f).unwrap(), expected);
        let res = leibniz_det(&sylvester(&f, &f.derivative()), &f7);
        assert_eq!(resultant(&f, &f.derivative()).unwrap(), res);
    }

    #[test]
    fn bareiss_matches_leibniz_on_random_matrices() {
        let f3 = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            for _ in 0..10 {
                let m: Vec<Vec<Polynomial>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| Polynomial::random(&f3, 2, &mut rng))
                            .collect()
                    })
                    .collect();
                assert_eq!(bareiss_det(m.clone(), &f3), leibniz_det(&m, &f3));
            }
        }
    }

    #[test]
    fn discriminant_vanishes_exactly_on_repeated_roots() {
        let f5 = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let lin = |a: &Polynomial| XPoly::new(&f5, vec![a.clone(), Polynomial::one(&f5)]);
        for _ in 0..20 {
            let a = Polynomial::random(&f5, 2, &mut rng);
            let b = Polynomial::random(&f5, 2, &mut rng);
            let c = Polynomial::random(&f5, 2, &mut rng);
            let repeated = lin(&a).mul(&lin(&a)).mul(&lin(&b));
            assert!(discriminant(&repeated).unwrap().is_zero());
            let distinct = lin(&a).mul(&lin(&b)).mul(&lin(&c));
            let all_distinct = a != b && b != c && a != c;
            assert_eq!(discriminant(&distinct).unwrap().is_zero(), !all_distinct);
        }
    }

    #[test]
    fn inseparable_is_rejected() {
        let f5 = Field::prime(5).unwrap();
        let t = Polynomial::t(&f5);
        assert!(discriminant(&XPoly::kummer(5, &t)).is_err());
    }
}
