//! Numeric embeddings zeta -> exp(2*pi*i*k/n) of field elements.
//!
//! Two precision regimes: a plain f64 path for the floating-point oracle,
//! and a dyadic fixed-point path (BigInt mantissa over 2^bits) used by the
//! square-root reconstruction. Dyadic values keep every intermediate
//! denominator a power of two, which keeps the exact linear algebra
//! downstream cheap.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactfield::cyclotomic::FieldElement;
use crate::exactfield::rational::Rational;

/// Fixed-point real: value = m / 2^bits, with bits carried by `FixCtx`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Fix {
    pub m: BigInt,
}

#[derive(Clone, Copy)]
pub(crate) struct FixCtx {
    pub bits: u32,
}

/// Rounds x / 2^s to the nearest integer (halves toward +infinity).
fn round_shift(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    (x + (BigInt::one() << (s - 1))) >> s
}

/// Rounds n / d to the nearest integer; d must be nonzero.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (n, d) = if d.is_negative() {
        (-n, -d)
    } else {
        (n.clone(), d.clone())
    };
    ((&n << 1u32) + &d).div_floor(&(&d << 1u32))
}

impl FixCtx {
    pub fn zero(&self) -> Fix {
        Fix { m: BigInt::zero() }
    }

    pub fn one(&self) -> Fix {
        Fix {
            m: BigInt::one() << self.bits,
        }
    }

    pub fn from_rational(&self, r: &Rational) -> Fix {
        Fix {
            m: div_round(&(r.numer() << self.bits), r.denom()),
        }
    }

    pub fn to_rational(&self, x: &Fix) -> Rational {
        Rational::new(x.m.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self, x: &Fix) -> f64 {
        let bits = x.m.bits() as i64;
        if bits <= 900 {
            x.m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(self.bits as i32))
        } else {
            // Scale down first so the conversion cannot overflow.
            let drop = (bits - 900) as u32;
            let scaled = &x.m >> drop;
            scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(drop as i32 - self.bits as i32)
        }
    }

    pub fn add(&self, a: &Fix, b: &Fix) -> Fix {
        Fix { m: &a.m + &b.m }
    }

    pub fn sub(&self, a: &Fix, b: &Fix) -> Fix {
        Fix { m: &a.m - &b.m }
    }

    pub fn neg(&self, a: &Fix) -> Fix {
        Fix { m: -&a.m }
    }

    pub fn mul(&self, a: &Fix, b: &Fix) -> Fix {
        Fix {
            m: round_shift(&(&a.m * &b.m), self.bits),
        }
    }

    pub fn div(&self, a: &Fix, b: &Fix) -> Fix {
        Fix {
            m: div_round(&(&a.m << self.bits), &b.m),
        }
    }

    /// Floor square root of a nonnegative fixed-point value.
    pub fn sqrt(&self, a: &Fix) -> Fix {
        assert!(!a.m.is_negative(), "sqrt of negative fixed-point value");
        Fix {
            m: (&a.m << self.bits).sqrt(),
        }
    }

    pub fn shr(&self, a: &Fix, s: u32) -> Fix {
        Fix {
            m: round_shift(&a.m, s),
        }
    }

    /// Re-rounds into a context with fewer bits.
    pub fn round_into(&self, a: &Fix, target: &FixCtx) -> Fix {
        assert!(target.bits <= self.bits);
        Fix {
            m: round_shift(&a.m, self.bits - target.bits),
        }
    }
}

/// Fixed-point complex number.
#[derive(Clone)]
pub(crate) struct CFix {
    pub re: Fix,
    pub im: Fix,
}

impl FixCtx {
    pub fn czero(&self) -> CFix {
        CFix {
            re: self.zero(),
            im: self.zero(),
        }
    }

    pub fn cadd(&self, a: &CFix, b: &CFix) -> CFix {
        CFix {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    #[cfg(test)]
    pub fn cmul(&self, a: &CFix, b: &CFix) -> CFix {
        CFix {
            re: self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        }
    }

    pub fn cscale(&self, a: &CFix, s: &Fix) -> CFix {
        CFix {
            re: self.mul(&a.re, s),
            im: self.mul(&a.im, s),
        }
    }

    /// Principal complex square root (nonnegative real part; the positive
    /// imaginary axis maps to the first quadrant).
    pub fn csqrt(&self, a: &CFix) -> CFix {
        let norm = self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im));
        let r = self.sqrt(&norm);
        if a.im.m.is_zero() {
            return if a.re.m.is_negative() {
                CFix {
                    re: self.zero(),
                    im: self.sqrt(&self.neg(&a.re)),
                }
            } else {
                CFix {
                    re: self.sqrt(&a.re),
                    im: self.zero(),
                }
            };
        }
        if !a.re.m.is_negative() {
            let wre = self.sqrt(&self.shr(&self.add(&r, &a.re), 1));
            if wre.m.is_zero() {
                return self.czero();
            }
            let wim = self.div(&a.im, &self.add(&wre, &wre));
            CFix { re: wre, im: wim }
        } else {
            let mag = self.sqrt(&self.shr(&self.sub(&r, &a.re), 1));
            let wim = if a.im.m.is_negative() {
                self.neg(&mag)
            } else {
                mag
            };
            if wim.m.is_zero() {
                return self.czero();
            }
            let wre = self.div(&a.im, &self.add(&wim, &wim));
            CFix { re: wre, im: wim }
        }
    }
}

/// atan(1/x) * 2^bits by the alternating inverse-power series.
fn atan_inv(x: u64, bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut term = (BigInt::one() << bits) / &x;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term /= &x2;
        if term.is_zero() {
            break;
        }
        let contrib = &term / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= contrib;
        } else {
            sum += contrib;
        }
        k += 1;
    }
    sum
}

/// pi * 2^bits via Machin's identity.
pub(crate) fn pi_fix(bits: u32) -> Fix {
    Fix {
        m: 16 * atan_inv(5, bits) - 4 * atan_inv(239, bits),
    }
}

/// (cos, sin) of 2*pi*j/n at the context precision.
///
/// The angle is reduced exactly to a quadrant, the remainder is quartered so
/// the Taylor series converges fast, and two double-angle steps restore it.
pub(crate) fn unit_root(j: u64, n: u64, ctx: &FixCtx) -> (Fix, Fix) {
    const GUARD: u32 = 32;
    let work = FixCtx {
        bits: ctx.bits + GUARD,
    };
    let j = j % n;
    let quadrant = (4 * j) / n;
    let rem = 4 * j - quadrant * n;

    let (c, s) = if rem == 0 {
        (work.one(), work.zero())
    } else {
        let pi = pi_fix(work.bits);
        // beta = (pi/2) * rem/n, beta in (0, pi/2)
        let beta = work.mul(
            &pi,
            &work.from_rational(&Rational::new(BigInt::from(rem), BigInt::from(2 * n))),
        );
        let x = work.shr(&beta, 2);
        let (mut c, mut s) = taylor_cos_sin(&x, &work);
        for _ in 0..2 {
            let c2 = work.sub(&work.add(&work.mul(&c, &c), &work.mul(&c, &c)), &work.one());
            let s2 = work.add(&work.mul(&s, &c), &work.mul(&s, &c));
            c = c2;
            s = s2;
        }
        (c, s)
    };

    let (c, s) = match quadrant {
        0 => (c, s),
        1 => (work.neg(&s), c),
        2 => (work.neg(&c), work.neg(&s)),
        _ => (s, work.neg(&c)),
    };
    (work.round_into(&c, ctx), work.round_into(&s, ctx))
}

/// Taylor series for (cos x, sin x); requires |x| < 1.
fn taylor_cos_sin(x: &Fix, ctx: &FixCtx) -> (Fix, Fix) {
    let x2 = ctx.mul(x, x);
    let mut cos = ctx.one();
    let mut term = ctx.one();
    let mut k: u64 = 1;
    loop {
        term = ctx.mul(&term, &x2);
        term = Fix {
            m: div_round(&term.m, &BigInt::from((2 * k - 1) * (2 * k))),
        };
        if term.m.is_zero() {
            break;
        }
        if k % 2 == 1 {
            cos = ctx.sub(&cos, &term);
        } else {
            cos = ctx.add(&cos, &term);
        }
        k += 1;
    }
    let mut sin = x.clone();
    let mut term = x.clone();
    let mut k: u64 = 1;
    loop {
        term = ctx.mul(&term, &x2);
        term = Fix {
            m: div_round(&term.m, &BigInt::from((2 * k) * (2 * k + 1))),
        };
        if term.m.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sin = ctx.sub(&sin, &term);
        } else {
            sin = ctx.add(&sin, &term);
        }
        k += 1;
    }
    (cos, sin)
}

/// Units modulo n: the valid embedding indices.
pub(crate) fn units(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| k.gcd(&n) == 1).collect()
}

fn check_embedding(k: u64, n: u64) -> Result<u64> {
    let k = k % n;
    if k.gcd(&n) == 1 {
        Ok(k)
    } else {
        Err(Error::InvalidEmbedding { k, n })
    }
}

impl FieldElement {
    /// Value under zeta -> exp(2*pi*i*k/n) in double precision.
    pub fn embed_f64(&self, k: u64) -> Result<Complex64> {
        let n = self.order();
        let k = check_embedding(k, n)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, coord) in self.coords().iter().enumerate() {
            if coord.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * ((k as u128 * m as u128) % n as u128) as f64
                / n as f64;
            let c = coord.to_f64().unwrap_or(f64::NAN);
            acc += Complex64::new(angle.cos(), angle.sin()) * c;
        }
        Ok(acc)
    }

    /// Value under the same embedding computed at the requested precision,
    /// then rounded to double.
    pub fn embed(&self, k: u64, precision_bits: u32) -> Result<Complex64> {
        let ctx = FixCtx {
            bits: precision_bits,
        };
        let v = self.embed_dyadic(k, &ctx)?;
        Ok(Complex64::new(ctx.to_f64(&v.re), ctx.to_f64(&v.im)))
    }

    pub(crate) fn embed_dyadic(&self, k: u64, ctx: &FixCtx) -> Result<CFix> {
        let n = self.order();
        let k = check_embedding(k, n)?;
        let mut acc = ctx.czero();
        for (m, coord) in self.coords().iter().enumerate() {
            if coord.is_zero() {
                continue;
            }
            let (c, s) = unit_root((k as u128 * m as u128 % n as u128) as u64, n, ctx);
            let term = ctx.cscale(&CFix { re: c, im: s }, &ctx.from_rational(coord));
            acc = ctx.cadd(&acc, &term);
        }
        Ok(acc)
    }
}
