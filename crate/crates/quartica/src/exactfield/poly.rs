//! Dense univariate polynomials over a cyclotomic field.
//!
//! Coefficients are indexed by degree and the vector never stores a leading
//! zero; the zero polynomial has an empty coefficient vector and degree
//! `None`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::cyclotomic::{CyclotomicField, FieldElement};
use crate::exactfield::rational::Rational;

#[derive(Clone)]
pub struct Poly {
    field: Arc<CyclotomicField>,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn new(field: &Arc<CyclotomicField>, coeffs: Vec<FieldElement>) -> Result<Poly> {
        for c in &coeffs {
            if c.order() != field.order() {
                return Err(Error::FieldMismatch(field.order(), c.order()));
            }
        }
        let mut p = Poly {
            field: Arc::clone(field),
            coeffs,
        };
        p.normalize();
        Ok(p)
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Poly {
        Poly {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Poly {
        let field = Arc::clone(c.field());
        let mut p = Poly {
            field,
            coeffs: vec![c],
        };
        p.normalize();
        p
    }

    /// The monomial c * t^k.
    pub fn monomial(c: FieldElement, k: usize) -> Poly {
        let field = Arc::clone(c.field());
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        let mut p = Poly { field, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of t^k, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    fn check_same_field(&self, other: &Poly) -> Result<()> {
        if self.field.order() != other.field.order() {
            Err(Error::FieldMismatch(self.field.order(), other.field.order()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k).checked_add(&other.coeff(k))?);
        }
        Poly::new(&self.field, coeffs)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k).checked_sub(&other.coeff(k))?);
        }
        Poly::new(&self.field, coeffs)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].checked_add(&a.checked_mul(b)?)?;
            }
        }
        Poly::new(&self.field, coeffs)
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_same_field(divisor)?;
        let Some(db) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let lead_inv = divisor.coeffs[db].inv()?;
        let dq = rem.len() - 1 - db;
        let mut quot = vec![self.field.zero(); dq + 1];
        for k in (0..=dq).rev() {
            let c = rem[k + db].checked_mul(&lead_inv)?;
            if c.is_zero() {
                continue;
            }
            for j in 0..=db {
                let t = c.checked_mul(&divisor.coeffs[j])?;
                rem[k + j] = rem[k + j].checked_sub(&t)?;
            }
            quot[k] = c;
        }
        Ok((Poly::new(&self.field, quot)?, Poly::new(&self.field, rem)?))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let coeffs: Vec<FieldElement> = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from(num_bigint::BigInt::from(i as u64 + 1))))
            .collect();
        let mut p = Poly {
            field: Arc::clone(&self.field),
            coeffs,
        };
        p.normalize();
        p
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &FieldElement) -> Result<FieldElement> {
        if t.order() != self.field.order() {
            return Err(Error::FieldMismatch(self.field.order(), t.order()));
        }
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(t)?.checked_add(c)?;
        }
        Ok(acc)
    }

    pub fn monic(&self) -> Result<Poly> {
        let Some(lead) = self.leading() else {
            return Err(Error::DivisionByZero);
        };
        let inv = lead.inv()?;
        self.scale(&inv)
    }

    pub fn scale(&self, s: &FieldElement) -> Result<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_mul(s))
            .collect::<Result<Vec<_>>>()?;
        Poly::new(&self.field, coeffs)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
        a.check_same_field(b)?;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let (_, r) = r0.divmod(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
        }
        if r0.is_zero() {
            Ok(r0)
        } else {
            r0.monic()
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let simple = !cs.contains(' ');
            if k == 0 {
                write!(f, "{cs}")?;
            } else {
                if cs == "1" {
                    // elide
                } else if cs == "-1" {
                    write!(f, "-")?;
                } else if simple {
                    write!(f, "{cs}*")?;
                } else {
                    write!(f, "({cs})*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Arc<CyclotomicField> {
        CyclotomicField::new(7).unwrap()
    }

    fn poly_i64(field: &Arc<CyclotomicField>, coeffs: &[i64]) -> Poly {
        Poly::new(
            field,
            coeffs.iter().map(|&c| field.from_integer(c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = f7();
        // gcd(t^2 - 1, t^2 - 2t + 1) = t - 1
        let a = poly_i64(&f, &[-1, 0, 1]);
        let b = poly_i64(&f, &[1, -2, 1]);
        let g = Poly::gcd(&a, &b).unwrap();
        assert_eq!(g, poly_i64(&f, &[-1, 1]));
    }

    #[test]
    fn derivative_drops_degree() {
        let f = f7();
        let p = poly_i64(&f, &[0, 1, 0, 1]); // t^3 + t
        assert_eq!(p.derivative(), poly_i64(&f, &[1, 0, 3]));
        assert!(poly_i64(&f, &[5]).derivative().is_zero());
    }

    #[test]
    fn eval_at_field_element() {
        // t^2 + t + 1 at t = z + z^-1 equals z^2 + z^-2 + z + z^-1 + 3,
        // which reduces to 2 - z^3 - z^4 in Q(zeta_7).
        let f = f7();
        let p = poly_i64(&f, &[1, 1, 1]);
        let t0 = f.zeta() + f.zeta_power(-1);
        let got = p.eval(&t0).unwrap();
        let expect = f.zeta_power(2)
            + f.zeta_power(-2)
            + f.zeta_power(1)
            + f.zeta_power(-1)
            + f.from_integer(3);
        assert_eq!(got, expect);
        assert_eq!(got, f.from_integer(2) - f.zeta_power(3) - f.zeta_power(4));
    }

    #[test]
    fn divmod_reconstructs() {
        let f = f7();
        let a = poly_i64(&f, &[3, 1, 4, 1, 5]);
        let b = poly_i64(&f, &[2, 0, 1]);
        let (q, r) = a.divmod(&b).unwrap();
        let back = q.checked_mul(&b).unwrap().checked_add(&r).unwrap();
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
        assert!(a.divmod(&Poly::zero(&f)).is_err());
    }

    #[test]
    fn gcd_divides_both_sides() {
        let f = f7();
        let g0 = poly_i64(&f, &[1, 2, 1]);
        let a = g0.checked_mul(&poly_i64(&f, &[4, 1])).unwrap();
        let b = g0.checked_mul(&poly_i64(&f, &[-3, 0, 2])).unwrap();
        let g = Poly::gcd(&a, &b).unwrap();
        let (_, ra) = a.divmod(&g).unwrap();
        let (_, rb) = b.divmod(&g).unwrap();
        assert!(ra.is_zero() && rb.is_zero());
        assert_eq!(g.leading().unwrap(), &f.one());
    }

    #[test]
    fn zero_polynomial_degree_marker() {
        let f = f7();
        assert_eq!(Poly::zero(&f).degree(), None);
        assert_eq!(poly_i64(&f, &[0]).degree(), None);
        assert_eq!(poly_i64(&f, &[7]).degree(), Some(0));
    }
}
