//! Square roots inside a cyclotomic field.
//!
//! Fast path: elements of the form rational * zeta^m, solved by exponent
//! halving. General path: take numeric square roots of the complex
//! embeddings at high precision, try every sign assignment on conjugate
//! pairs, solve the (precomputed, exactly inverted) linear system back to
//! basis coordinates, round each coordinate to a bounded-denominator
//! rational, and accept a candidate only after exact verification of
//! s * s = a. The numeric layer can therefore never produce a wrong
//! answer, only a failure.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactfield::cyclotomic::{CyclotomicField, FieldElement};
use crate::exactfield::embed::{units, unit_root, FixCtx};
use crate::exactfield::rational::{rational_sqrt, Rational};

#[derive(Clone, Copy, Debug)]
pub struct SqrtOptions {
    /// Working precision of the complex embeddings.
    pub precision_bits: u32,
    /// Reconstructed coordinates may have denominators up to 2^this.
    pub denominator_bits: u32,
}

impl Default for SqrtOptions {
    fn default() -> Self {
        SqrtOptions {
            precision_bits: 256,
            denominator_bits: 64,
        }
    }
}

pub fn sqrt_in_field(a: &FieldElement) -> Result<FieldElement> {
    sqrt_in_field_with(a, &SqrtOptions::default())
}

pub fn sqrt_in_field_with(a: &FieldElement, opts: &SqrtOptions) -> Result<FieldElement> {
    let field = a.field();
    if a.is_zero() {
        return Ok(field.zero());
    }
    if let Some(r) = a.as_rational() {
        if let Some(s) = rational_sqrt(r) {
            return Ok(field.from_rational(s));
        }
    }
    if field.degree() == 1 {
        // The field is Q itself; the rational test above was exhaustive.
        return Err(no_root(opts));
    }
    if let Some(s) = monomial_fast_path(a) {
        debug_assert_eq!(s.square(), *a);
        return Ok(s);
    }
    general_path(a, opts)
}

fn no_root(opts: &SqrtOptions) -> Error {
    Error::NoSquareRoot {
        precision: opts.precision_bits,
        denominator_bits: opts.denominator_bits,
    }
}

/// Solves s^2 = q * zeta^m for s = sqrt(q) * zeta^h when possible.
///
/// Success requires q to be a rational square (a negative q is first folded
/// into the root of unity when -1 = zeta^(n/2) exists) and 2h = m (mod n) to
/// be solvable. Failure here proves nothing; the general path still runs.
fn monomial_fast_path(a: &FieldElement) -> Option<FieldElement> {
    let field = a.field();
    let n = field.order();
    for m in 0..n {
        let rotated = a.checked_mul(&field.zeta_power(-(m as i64))).ok()?;
        let Some(q) = rotated.as_rational() else {
            continue;
        };
        let (q, m) = if q.is_negative() {
            if n % 2 != 0 {
                continue;
            }
            (-q.clone(), (m + n / 2) % n)
        } else {
            (q.clone(), m)
        };
        let Some(sq) = rational_sqrt(&q) else {
            continue;
        };
        let h = if m % 2 == 0 {
            m / 2
        } else if n % 2 == 1 {
            (m + n) / 2
        } else {
            continue;
        };
        let cand = field.zeta_power(h as i64).scale(&sq);
        if cand.square() == *a {
            return Some(cand);
        }
    }
    None
}

/// Per-field data for the general path: representatives of the conjugate
/// pairs of embeddings and the exact inverse of the realified embedding
/// matrix at the working precision.
struct Solver {
    reps: Vec<u64>,
    ainv: Vec<Vec<Rational>>,
}

static SOLVER_CACHE: LazyLock<Mutex<HashMap<(u64, u32), Arc<Solver>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn solver_for(field: &Arc<CyclotomicField>, bits: u32) -> Result<Arc<Solver>> {
    let key = (field.order(), bits);
    if let Some(s) = SOLVER_CACHE.lock().unwrap().get(&key) {
        return Ok(Arc::clone(s));
    }
    let solver = build_solver(field, bits)?;
    SOLVER_CACHE
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&solver));
    Ok(solver)
}

fn build_solver(field: &Arc<CyclotomicField>, bits: u32) -> Result<Arc<Solver>> {
    let n = field.order();
    let d = field.degree();
    let ctx = FixCtx { bits };
    let reps: Vec<u64> = units(n).into_iter().filter(|&k| 2 * k < n).collect();
    assert_eq!(reps.len() * 2, d, "conjugate pairs must cover the degree");

    // Realified embedding matrix: rows alternate Re and Im of sigma_k(zeta^j).
    let mut a = Vec::with_capacity(d);
    for &k in &reps {
        let mut row_re = Vec::with_capacity(d);
        let mut row_im = Vec::with_capacity(d);
        for j in 0..d as u64 {
            let (c, s) = unit_root((k as u128 * j as u128 % n as u128) as u64, n, &ctx);
            row_re.push(ctx.to_rational(&c));
            row_im.push(ctx.to_rational(&s));
        }
        a.push(row_re);
        a.push(row_im);
    }
    let ainv = invert_matrix(a, bits)?;
    Ok(Arc::new(Solver { reps, ainv }))
}

/// Exact Gauss-Jordan inverse with partial pivoting. A pivot collapsing
/// below 2^(-bits/2) means the precision did not survive elimination.
fn invert_matrix(mut a: Vec<Vec<Rational>>, bits: u32) -> Result<Vec<Vec<Rational>>> {
    let d = a.len();
    let tiny = Rational::new(BigInt::one(), BigInt::one() << (bits / 2));
    let mut inv: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..d {
        let pivot_row = (col..d)
            .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < tiny {
            return Err(Error::PrecisionExhausted { precision: bits });
        }
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pinv = a[col][col].recip();
        for j in 0..d {
            a[col][j] *= &pinv;
            inv[col][j] *= &pinv;
        }
        for r in 0..d {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut a[r][col], Rational::zero());
            for j in 0..d {
                if j != col && !a[col][j].is_zero() {
                    let t = &factor * &a[col][j];
                    a[r][j] -= t;
                }
                if !inv[col][j].is_zero() {
                    let t = &factor * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Ok(inv)
}

fn general_path(a: &FieldElement, opts: &SqrtOptions) -> Result<FieldElement> {
    let field = a.field();
    let d = field.degree();
    let ctx = FixCtx {
        bits: opts.precision_bits,
    };
    let solver = solver_for(field, opts.precision_bits)?;
    let pairs = solver.reps.len();

    // Contribution of each conjugate pair to every coordinate, so that a
    // sign assignment is just a signed sum of precomputed vectors.
    let mut contrib: Vec<Vec<Rational>> = Vec::with_capacity(pairs);
    for (p, &k) in solver.reps.iter().enumerate() {
        let z = a.embed_dyadic(k, &ctx)?;
        let w = ctx.csqrt(&z);
        let re = ctx.to_rational(&w.re);
        let im = ctx.to_rational(&w.im);
        let mut v = Vec::with_capacity(d);
        for j in 0..d {
            let mut s = Rational::zero();
            if !re.is_zero() {
                s += &solver.ainv[j][2 * p] * &re;
            }
            if !im.is_zero() {
                s += &solver.ainv[j][2 * p + 1] * &im;
            }
            v.push(s);
        }
        contrib.push(v);
    }

    let max_den = BigInt::one() << opts.denominator_bits;
    let masks: u64 = 1 << (pairs - 1);
    for mask in 0..masks {
        let mut coords = contrib[0].clone();
        for (p, v) in contrib.iter().enumerate().skip(1) {
            let negate = mask >> (p - 1) & 1 == 1;
            for j in 0..d {
                if negate {
                    coords[j] -= &v[j];
                } else {
                    coords[j] += &v[j];
                }
            }
        }
        let rounded: Vec<Rational> = coords
            .iter()
            .map(|x| best_rational_within(x, &max_den))
            .collect();
        let cand = field.from_coords(rounded)?;
        if cand.square() == *a {
            return Ok(cand);
        }
    }
    Err(no_root(opts))
}

/// Best rational approximation with denominator at most `max_den`, by the
/// continued-fraction convergent/semiconvergent rule.
pub(crate) fn best_rational_within(x: &Rational, max_den: &BigInt) -> Rational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    // h/k convergents; (h2, k2) trails by two steps.
    let (mut h2, mut k2) = (BigInt::one(), BigInt::zero());
    let (mut h1, mut k1) = (x.numer().div_floor(x.denom()), BigInt::one());
    let r = &num - &h1 * &den;
    num = std::mem::replace(&mut den, r);
    loop {
        debug_assert!(!den.is_zero(), "exact termination implies a small denominator");
        let q = num.div_floor(&den);
        let h = &q * &h1 + &h2;
        let k = &q * &k1 + &k2;
        if &k > max_den {
            let qmax = (max_den - &k2).div_floor(&k1);
            let best = Rational::new(h1.clone(), k1.clone());
            if qmax.is_positive() {
                let semi = Rational::new(&qmax * &h1 + &h2, &qmax * &k1 + &k2);
                if (x - &semi).abs() < (x - &best).abs() {
                    return semi;
                }
            }
            return best;
        }
        let r = &num - &q * &den;
        num = std::mem::replace(&mut den, r);
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        if den.is_zero() {
            return Rational::new(h1, k1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_squares_resolve_exactly() {
        let f = CyclotomicField::new(7).unwrap();
        let a = f.from_rational(q(9, 4));
        let s = sqrt_in_field(&a).unwrap();
        assert_eq!(s.square(), a);
        assert_eq!(sqrt_in_field(&f.zero()).unwrap(), f.zero());
    }

    #[test]
    fn root_of_unity_by_exponent_halving() {
        let f = CyclotomicField::new(7).unwrap();
        // zeta has the square root zeta^4 because (zeta^4)^2 = zeta^8 = zeta.
        let s = sqrt_in_field(&f.zeta()).unwrap();
        assert_eq!(s.square(), f.zeta());
        assert!(s == f.zeta_power(4) || s == -f.zeta_power(4));

        let a = f.zeta_power(4);
        let s = sqrt_in_field(&a).unwrap();
        assert_eq!(s.square(), a);
        assert!(s == f.zeta_power(2) || s == -f.zeta_power(2));
    }

    #[test]
    fn imaginary_unit_in_order_28() {
        let f = CyclotomicField::new(28).unwrap();
        let minus_one = -f.one();
        let s = sqrt_in_field(&minus_one).unwrap();
        assert_eq!(s.square(), minus_one);
        assert!(s == f.zeta_power(7) || s == -f.zeta_power(7));
    }

    #[test]
    fn no_root_when_the_field_is_too_small() {
        let f = CyclotomicField::new(7).unwrap();
        // Q(zeta_7) contains no fourth root of unity and no sqrt(2): its only
        // quadratic subfield is Q(sqrt(-7)).
        assert!(matches!(
            sqrt_in_field(&-f.one()),
            Err(Error::NoSquareRoot { .. })
        ));
        assert!(matches!(
            sqrt_in_field(&f.from_integer(2)),
            Err(Error::NoSquareRoot { .. })
        ));
    }

    #[test]
    fn gauss_sum_root_of_minus_seven() {
        let f = CyclotomicField::new(7).unwrap();
        let a = f.from_integer(-7);
        let s = sqrt_in_field(&a).unwrap();
        assert_eq!(s.square(), a);
        // 1 + 2(zeta + zeta^2 + zeta^4) squares to -7.
        let gauss = f.one()
            + (f.zeta() + f.zeta_power(2) + f.zeta_power(4)).scale(&q(2, 1));
        assert!(s == gauss || s == -gauss);
    }

    #[test]
    fn general_path_recovers_random_squares() {
        let f = CyclotomicField::new(12).unwrap();
        let v = f.zeta_power(1).scale(&q(3, 2)) + f.zeta_power(3).scale(&q(-1, 5))
            + f.from_integer(2);
        let a = v.square();
        let s = sqrt_in_field(&a).unwrap();
        assert_eq!(s.square(), a);
        assert!(s == v || s == -v);
    }

    #[test]
    fn best_rational_is_optimal_for_small_bounds() {
        let bound = BigInt::from(10);
        for (num, den) in [(314159i64, 100000i64), (-22, 7), (1, 3), (617, 500), (-355, 113)] {
            let x = q(num, den);
            let got = best_rational_within(&x, &bound);
            assert!(got.denom() <= &bound);
            // brute force all denominators up to the bound
            let mut best = None::<Rational>;
            for d in 1..=10i64 {
                let n = (&x * q(d, 1)).round();
                let cand = Rational::new(n.numer().clone(), BigInt::from(d));
                if best.as_ref().is_none_or(|b| (&x - &cand).abs() < (&x - b).abs()) {
                    best = Some(cand);
                }
            }
            let best = best.unwrap();
            assert_eq!(
                (&x - &got).abs(),
                (&x - &best).abs(),
                "suboptimal approximation for {num}/{den}"
            );
        }
    }

    #[test]
    fn exact_small_denominators_pass_through() {
        let x = q(7, 3);
        assert_eq!(best_rational_within(&x, &BigInt::from(10)), x);
    }
}
