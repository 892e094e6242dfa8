//! Cyclotomic fields Q(zeta_n) with canonical reduced coordinates.
//!
//! Elements are vectors of rationals over the power basis
//! {zeta^0, ..., zeta^(phi(n)-1)}, reduced modulo the n-th cyclotomic
//! polynomial. Reduction to the basis is what makes equality decidable:
//! two elements are equal exactly when their coordinate vectors are.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactfield::rational::Rational;

/// The field Q(zeta_n), zeta = exp(2*pi*i/n).
///
/// Construction precomputes the reduction rows for zeta^k, degree <= k < n,
/// so multiplication folds convolution overflow in one pass.
pub struct CyclotomicField {
    order: u64,
    degree: usize,
    /// Coefficients of the n-th cyclotomic polynomial, index = degree, leading 1.
    modulus: Vec<BigInt>,
    /// reduction[i] = coordinates of zeta^(degree+i), for degree+i <= 2*degree-2.
    reduction: Vec<Vec<Rational>>,
    /// zeta_pow[m] = coordinates of zeta^m, 0 <= m < n.
    zeta_pow: Vec<Vec<Rational>>,
}

impl CyclotomicField {
    pub fn new(order: u64) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(Error::InvalidInput("field order must be at least 1".into()));
        }
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;

        // zeta^degree = -(c_0 + c_1 zeta + ... + c_(degree-1) zeta^(degree-1))
        let top: Vec<Rational> = modulus[..degree]
            .iter()
            .map(|c| Rational::from(-c.clone()))
            .collect();

        let mut reduction = Vec::new();
        if degree >= 2 {
            reduction.push(top.clone());
            for _ in 1..degree - 1 {
                let next = shift_basis(reduction.last().unwrap(), degree, &top);
                reduction.push(next);
            }
        }

        let mut zeta_pow = Vec::with_capacity(order as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        zeta_pow.push(cur.clone());
        for _ in 1..order {
            cur = shift_basis(&cur, degree, &top);
            zeta_pow.push(cur.clone());
        }

        Ok(Arc::new(CyclotomicField {
            order,
            degree,
            modulus,
            reduction,
            zeta_pow,
        }))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of the defining cyclotomic polynomial, index = degree.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            coords: vec![Rational::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, r: Rational) -> FieldElement {
        let mut coords = vec![Rational::zero(); self.degree];
        coords[0] = r;
        FieldElement {
            field: Arc::clone(self),
            coords,
        }
    }

    pub fn from_integer(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_rational(Rational::from(BigInt::from(n)))
    }

    pub fn from_coords(self: &Arc<Self>, coords: Vec<Rational>) -> Result<FieldElement> {
        if coords.len() != self.degree {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates for a field of order {}, got {}",
                self.degree,
                self.order,
                coords.len()
            )));
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            coords,
        })
    }

    /// zeta^k in reduced coordinates; k may be any integer.
    pub fn zeta_power(self: &Arc<Self>, k: i64) -> FieldElement {
        let n = self.order as i64;
        let m = k.rem_euclid(n) as usize;
        FieldElement {
            field: Arc::clone(self),
            coords: self.zeta_pow[m].clone(),
        }
    }

    pub fn zeta(self: &Arc<Self>) -> FieldElement {
        self.zeta_power(1)
    }

    fn reduce_product(&self, mut prod: Vec<Rational>) -> Vec<Rational> {
        for k in (self.degree..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], Rational::zero());
            if c.is_zero() {
                continue;
            }
            let row = &self.reduction[k - self.degree];
            for j in 0..self.degree {
                if !row[j].is_zero() {
                    prod[j] += &c * &row[j];
                }
            }
        }
        prod.truncate(self.degree);
        prod
    }
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicField(order={}, degree={})", self.order, self.degree)
    }
}

// A field is determined by its order; instances of equal order are
// interchangeable.
impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicField {}

fn shift_basis(v: &[Rational], degree: usize, top: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); degree];
    for j in 1..degree {
        out[j] = v[j - 1].clone();
    }
    let overflow = v[degree - 1].clone();
    if !overflow.is_zero() {
        for j in 0..degree {
            if !top[j].is_zero() {
                out[j] += &overflow * &top[j];
            }
        }
    }
    out
}

/// Coefficients of the n-th cyclotomic polynomial, computed by exact
/// division of x^n - 1 by Phi_d over all proper divisors d of n.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut memo: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = -BigInt::one();
        num[d as usize] = BigInt::one();
        for (e, phi_e) in &memo {
            if d % e == 0 && *e < d {
                num = int_poly_div_exact(&num, phi_e);
            }
        }
        memo.insert(d, num);
    }
    memo.remove(&n).unwrap()
}

/// Exact division of integer polynomials with monic divisor; panics if the
/// division leaves a remainder (impossible for cyclotomic factors).
fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = a.to_vec();
    let da = rem.len() - 1;
    assert!(da >= db);
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=db {
            rem[k + j] -= &c * &b[j];
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

/// An element of a cyclotomic field in canonical reduced coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<CyclotomicField>,
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn check_same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field.order != other.field.order {
            Err(Error::FieldMismatch(self.field.order, other.field.order))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let d = self.field.degree;
        let mut prod = vec![Rational::zero(); 2 * d.max(1) - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coords: self.field.reduce_product(prod),
        })
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the field's defining polynomial.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rational(r.recip()));
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let a = rp_trim(self.coords.clone());
        let (g, u, _) = rp_xgcd(&a, &modulus);
        // Phi_n is irreducible over Q, so the gcd with a nonzero residue is a
        // nonzero constant.
        debug_assert_eq!(rp_deg(&g), Some(0));
        let ginv = g[0].recip();
        let (_, mut u) = rp_divmod(&rp_scale(&u, &ginv), &modulus);
        u.resize(self.field.degree, Rational::zero());
        self.field.from_coords(u)
    }

    pub fn scale(&self, r: &Rational) -> FieldElement {
        let coords = self.coords.iter().map(|c| c * r).collect();
        FieldElement {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    pub fn square(&self) -> FieldElement {
        self.checked_mul(self).expect("same field")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field operation failed")
            }
        }
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("field operation failed")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let coords = self.coords.iter().map(|c| -c).collect();
        FieldElement {
            field: Arc::clone(&self.field),
            coords,
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coords.len()).rev() {
            let c = &self.coords[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && k > 0;
            if !unit_coeff {
                write!(f, "{}", crate::exactfield::rational::format_rational(&mag))?;
            }
            if k > 0 {
                if !unit_coeff {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

// Dense rational polynomials, little-endian, used only for the extended
// Euclidean inverse.

fn rp_trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rp_deg(v: &[Rational]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn rp_scale(v: &[Rational], s: &Rational) -> Vec<Rational> {
    v.iter().map(|c| c * s).collect()
}

fn rp_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    rp_trim(out)
}

fn rp_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    rp_trim(out)
}

fn rp_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = rp_deg(b).expect("division by zero polynomial");
    let mut rem: Vec<Rational> = a.to_vec();
    if rp_deg(&rem).map_or(true, |da| da < db) {
        return (Vec::new(), rp_trim(rem));
    }
    let da = rem.len() - 1;
    let lead_inv = b[db].recip();
    let mut quot = vec![Rational::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            let t = &c * &b[j];
            rem[k + j] -= t;
        }
        quot[k] = c;
    }
    (rp_trim(quot), rp_trim(rem))
}

/// Returns (g, u, v) with u*a + v*b = g.
fn rp_xgcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let one = vec![Rational::one()];
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut u0, mut u1) = (one.clone(), Vec::new());
    let (mut v0, mut v1) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = rp_divmod(&r0, &r1);
        let nu = rp_sub(&u0, &rp_mul(&q, &u1));
        let nv = rp_sub(&v0, &rp_mul(&q, &v1));
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, nu);
        v0 = std::mem::replace(&mut v1, nv);
    }
    (r0, u0, v0)
}
