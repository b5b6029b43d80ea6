use std::fmt;

use super::{Elem, Field};
use crate::error::{Error, Result};

/// Dense univariate polynomial over a [`Field`], ascending coefficients with
/// trailing zeros stripped. The zero polynomial has no coefficients and
/// [`Poly::degree`] `None`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = if c == Elem::ONE && i > 0 { String::new() } else { self.field.format(c) };
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let sep = if !coef.is_empty() && !mono.is_empty() { "*" } else { "" };
            terms.push(format!("{coef}{sep}{mono}"));
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// c·x^d.
    pub fn monomial(field: &Field, c: Elem, d: usize) -> Poly {
        let mut v = vec![Elem::ZERO; d + 1];
        v[d] = c;
        Poly::new(field, v)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Elem::ONE, 1)
    }

    /// ∏ (x − r) over the given roots.
    pub fn from_roots(field: &Field, roots: &[Elem]) -> Poly {
        let mut c = vec![Elem::ONE];
        for &r in roots {
            let nr = field.neg(r);
            let mut next = vec![Elem::ZERO; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] = field.add(next[i + 1], a);
                next[i] = field.add(next[i], field.mul(a, nr));
            }
            c = next;
        }
        Poly::new(field, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::new(f, c))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.field.neg(Elem::ONE))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Poly::new(f, out))
    }

    /// Euclidean division: (quotient, remainder).
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quo = vec![Elem::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quo[top - dd] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quo), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Formal derivative; i·c_i is taken with i reduced mod p.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_int(i as i64), a))
            .collect();
        Poly::new(f, c)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::constant(&self.field, Elem::ONE).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(m)?;
            }
            base = base.mul(&base)?.rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }

    /// The same polynomial with coefficients pushed through `map` into `target`.
    pub fn map_into(&self, target: &Field, map: impl Fn(Elem) -> Elem) -> Poly {
        Poly::new(target, self.coeffs.iter().map(|&c| map(c)).collect())
    }

    /// All distinct roots in the coefficient field by exhaustive evaluation,
    /// sorted by element encoding.
    pub fn roots(&self, max_field: u64) -> Result<Vec<Elem>> {
        let q = self.field.q() as u64;
        if q > max_field {
            return Err(Error::FieldTooLarge { size: q, bound: max_field });
        }
        if self.is_zero() {
            return Err(Error::InvalidDimensions("the zero polynomial has every element as a root".into()));
        }
        Ok(self.field.elements().filter(|&a| self.eval(a).is_zero()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::new(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn roots_of_small_polys() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(p(&f5, &[1, 0, 1]).roots(1 << 20).unwrap(), vec![Elem(2), Elem(3)]);
        let f2 = Field::new(2, 1).unwrap();
        assert!(p(&f2, &[1, 1, 1]).roots(1 << 20).unwrap().is_empty());
        assert!(matches!(p(&f2, &[1, 1]).roots(1), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn gcd_and_derivative() {
        let f5 = Field::new(5, 1).unwrap();
        let g = p(&f5, &[-1, 0, 1]).gcd(&p(&f5, &[-1, 1])).unwrap();
        assert_eq!(g, p(&f5, &[-1, 1]));
        // x^6 + b x^5 + c over GF(3): derivative is -b x^4 since 6 = 0
        let f3 = Field::new(3, 1).unwrap();
        let d = p(&f3, &[2, 0, 0, 0, 0, 1, 1]).derivative();
        assert_eq!(d, p(&f3, &[0, 0, 0, 0, -1]));
    }

    #[test]
    fn divrem_reconstructs() {
        let f = Field::new(3, 2).unwrap();
        let a = Poly::new(&f, (0..9).map(|i| Elem((i * 7 + 3) % 9)).collect());
        let b = Poly::new(&f, vec![Elem(4), Elem(0), Elem(5), Elem(1)]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < 3);
        assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
    }

    #[test]
    fn modulus_root_in_gf8() {
        let f = Field::with_primitive_modulus(2, &[1, 1, 0, 1]).unwrap();
        let m = p(&f, &[1, 1, 0, 1]);
        assert!(m.eval(f.generator()).is_zero());
        assert_eq!(Poly::from_roots(&f, &[Elem(1), Elem(2)]).coeffs(), &[Elem(2), Elem(3), Elem(1)]);
    }
}
