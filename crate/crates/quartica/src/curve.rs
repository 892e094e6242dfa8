//! Quartics x^3 + p(t) x^2 + q(t) x + r(t), bitangent lines x = a t + b,
//! and the square-root sections y = c t^2 + d t + e of the restriction.
//!
//! A line is a bitangent exactly when the restricted quartic is a constant
//! times the square of a squarefree quadratic; the section is that square
//! root, which lives in the field precisely when the leading constant has
//! an in-field square root.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{sqrt_in_field_with, CyclotomicField, FieldElement, Poly, SqrtOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct QuarticCurve {
    field: Arc<CyclotomicField>,
    p: Poly,
    q: Poly,
    r: Poly,
}

impl QuarticCurve {
    /// deg p <= 2, deg q <= 3, deg r <= 4: the homogeneity bounds of the
    /// projective model Z X^3 + p(T,Z) X^2 + q(T,Z) X + r(T,Z).
    pub fn new(field: &Arc<CyclotomicField>, p: Poly, q: Poly, r: Poly) -> Result<QuarticCurve> {
        for (poly, bound, label) in [(&p, 2, "p"), (&q, 3, "q"), (&r, 4, "r")] {
            if poly.field().order() != field.order() {
                return Err(Error::FieldMismatch(field.order(), poly.field().order()));
            }
            if poly.degree().is_some_and(|d| d > bound) {
                return Err(Error::InvalidInput(format!(
                    "coefficient {label} has degree above {bound}"
                )));
            }
        }
        Ok(QuarticCurve {
            field: Arc::clone(field),
            p,
            q,
            r,
        })
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn r(&self) -> &Poly {
        &self.r
    }

    /// F(t0, x0) for a single point.
    pub fn eval(&self, t0: &FieldElement, x0: &FieldElement) -> Result<FieldElement> {
        let x2 = x0.square();
        let x3 = x2.checked_mul(x0)?;
        let mut acc = x3;
        acc = acc.checked_add(&self.p.eval(t0)?.checked_mul(&x2)?)?;
        acc = acc.checked_add(&self.q.eval(t0)?.checked_mul(x0)?)?;
        acc.checked_add(&self.r.eval(t0)?)
    }

    /// Value of the degree-4 part at the infinite point [1 : a : 0] of the
    /// pencil of lines with slope a; zero means that point lies on the curve.
    pub fn at_infinity(&self, a: &FieldElement) -> Result<FieldElement> {
        let p2 = self.p.coeff(2);
        let q3 = self.q.coeff(3);
        let r4 = self.r.coeff(4);
        p2.checked_mul(&a.square())?
            .checked_add(&q3.checked_mul(a)?)?
            .checked_add(&r4)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BitangentLine {
    pub name: String,
    pub a: FieldElement,
    pub b: FieldElement,
}

impl BitangentLine {
    pub fn new(name: impl Into<String>, a: FieldElement, b: FieldElement) -> BitangentLine {
        BitangentLine {
            name: name.into(),
            a,
            b,
        }
    }

    pub fn same_line(&self, other: &BitangentLine) -> bool {
        self.a == other.a && self.b == other.b
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BitangentSection {
    pub line: BitangentLine,
    pub c: FieldElement,
    pub d: FieldElement,
    pub e: FieldElement,
}

impl BitangentSection {
    pub fn y_poly(&self) -> Poly {
        let field = self.c.field();
        Poly::new(
            field,
            vec![self.e.clone(), self.d.clone(), self.c.clone()],
        )
        .expect("section coefficients share one field")
    }

    pub fn y_at(&self, t0: &FieldElement) -> Result<FieldElement> {
        self.y_poly().eval(t0)
    }

    pub fn negated(&self) -> BitangentSection {
        BitangentSection {
            line: self.line.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
            e: -self.e.clone(),
        }
    }
}

/// One of the two lifts of a bitangent to the double cover: the section with
/// y(t) (sign +1) or -y(t) (sign -1).
#[derive(Clone, Debug)]
pub struct SignedSection {
    pub base: BitangentSection,
    pub sign: i8,
}

impl SignedSection {
    pub fn new(base: BitangentSection, sign: i8) -> Result<SignedSection> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidInput(format!("sign must be +1 or -1, got {sign}")));
        }
        Ok(SignedSection { base, sign })
    }

    pub fn section(&self) -> BitangentSection {
        if self.sign == 1 {
            self.base.clone()
        } else {
            self.base.negated()
        }
    }
}

/// F(t, a t + b) expanded exactly; degree <= 4 in t.
pub fn restrict(curve: &QuarticCurve, line: &BitangentLine) -> Result<Poly> {
    let field = curve.field();
    if line.a.order() != field.order() {
        return Err(Error::FieldMismatch(field.order(), line.a.order()));
    }
    let x = Poly::new(field, vec![line.b.clone(), line.a.clone()])?;
    let x2 = x.checked_mul(&x)?;
    let x3 = x2.checked_mul(&x)?;
    x3.checked_add(&curve.p.checked_mul(&x2)?)?
        .checked_add(&curve.q.checked_mul(&x)?)?
        .checked_add(&curve.r)
}

/// The decomposition F|_L = c0 * g^2 with g monic of degree 2, when it
/// exists. Distinguishes "not a bitangent at all" from "tangent at one
/// point with multiplicity 4" (square part with a double root).
fn square_part(curve: &QuarticCurve, line: &BitangentLine) -> Result<(FieldElement, Poly)> {
    let f = restrict(curve, line)?;
    let not_bitangent = || Error::NotABitangent {
        name: line.name.clone(),
    };
    if f.degree() != Some(4) {
        return Err(not_bitangent());
    }
    let g = Poly::gcd(&f, &f.derivative())?;
    // A quadruple root makes gcd(f, f') cubic: contact of multiplicity 4
    // at a single point rather than two tangency points.
    if g.degree() == Some(3) {
        return Err(Error::HyperflexContact {
            name: line.name.clone(),
        });
    }
    if g.degree() != Some(2) {
        return Err(not_bitangent());
    }
    if Poly::gcd(&g, &g.derivative())?.degree() != Some(0) {
        return Err(Error::HyperflexContact {
            name: line.name.clone(),
        });
    }
    let c0 = f.leading().expect("degree 4 implies a leading term").clone();
    let g2 = g.checked_mul(&g)?;
    if g2.scale(&c0)? != f {
        return Err(not_bitangent());
    }
    Ok((c0, g))
}

/// True iff the restriction is a constant times the square of a squarefree
/// quadratic.
pub fn verify_bitangent(curve: &QuarticCurve, line: &BitangentLine) -> bool {
    square_part(curve, line).is_ok()
}

/// Constructs the section y with y^2 = F|_L exactly. Either global sign of
/// the square root may be returned.
pub fn derive_section(curve: &QuarticCurve, line: &BitangentLine) -> Result<BitangentSection> {
    derive_section_with(curve, line, &SqrtOptions::default())
}

/// As derive_section, with explicit square-root reconstruction settings.
pub fn derive_section_with(
    curve: &QuarticCurve,
    line: &BitangentLine,
    opts: &SqrtOptions,
) -> Result<BitangentSection> {
    let (c0, g) = square_part(curve, line)?;
    let s = sqrt_in_field_with(&c0, opts).map_err(|e| match e {
        Error::NoSquareRoot { .. } | Error::PrecisionExhausted { .. } => {
            Error::NoSquareRootInField {
                context: format!(
                    "leading coefficient of the restriction to {}",
                    line.name
                ),
            }
        }
        other => other,
    })?;
    let y = g.scale(&s)?;
    let section = BitangentSection {
        line: line.clone(),
        c: y.coeff(2),
        d: y.coeff(1),
        e: y.coeff(0),
    };
    debug_assert_eq!(
        section.y_poly().checked_mul(&section.y_poly()).unwrap(),
        restrict(curve, line).unwrap()
    );
    Ok(section)
}

/// Geometric degeneracies that break the pairing combinatorics. Indices
/// refer to positions in the input slice.
#[derive(Clone, Debug, Default)]
pub struct SanityReport {
    pub identical: Vec<(usize, usize)>,
    pub concurrent: Vec<(usize, usize, usize)>,
    pub on_curve: Vec<(usize, usize)>,
    pub hyperflex: Vec<usize>,
    pub not_bitangent: Vec<usize>,
}

impl SanityReport {
    pub fn is_clean(&self) -> bool {
        self.identical.is_empty()
            && self.concurrent.is_empty()
            && self.on_curve.is_empty()
            && self.hyperflex.is_empty()
            && self.not_bitangent.is_empty()
    }
}

/// Flags identical lines, concurrent triples, line-pair intersections lying
/// on the curve (including intersections at infinity of parallel pairs), and
/// contact-degenerate lines. Diagnostic only: never fails.
pub fn curve_sanity(curve: &QuarticCurve, lines: &[BitangentLine]) -> SanityReport {
    let mut report = SanityReport::default();
    let n = lines.len();
    let mut duplicate = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            if lines[i].same_line(&lines[j]) {
                report.identical.push((i, j));
                duplicate[j] = true;
            }
        }
    }
    for (i, line) in lines.iter().enumerate() {
        match square_part(curve, line) {
            Ok(_) => {}
            Err(Error::HyperflexContact { .. }) => report.hyperflex.push(i),
            Err(_) => report.not_bitangent.push(i),
        }
    }
    for i in 0..n {
        if duplicate[i] {
            continue;
        }
        for j in i + 1..n {
            if duplicate[j] || lines[i].same_line(&lines[j]) {
                continue;
            }
            let on_q = if lines[i].a == lines[j].a {
                // Parallel lines meet at [1 : a : 0].
                curve.at_infinity(&lines[i].a).map(|v| v.is_zero())
            } else {
                meeting_parameter(&lines[i], &lines[j]).and_then(|t0| {
                    let x0 = lines[i].a.checked_mul(&t0)?.checked_add(&lines[i].b)?;
                    curve.eval(&t0, &x0).map(|v| v.is_zero())
                })
            };
            if on_q.unwrap_or(false) {
                report.on_curve.push((i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if duplicate[i] || duplicate[j] || duplicate[k] {
                    continue;
                }
                if lines[i].same_line(&lines[j])
                    || lines[i].same_line(&lines[k])
                    || lines[j].same_line(&lines[k])
                {
                    continue;
                }
                if lines_concurrent(&lines[i], &lines[j], &lines[k]) {
                    report.concurrent.push((i, j, k));
                }
            }
        }
    }
    report
}

/// Finite meeting parameter t0 of two non-parallel lines.
pub fn meeting_parameter(li: &BitangentLine, lj: &BitangentLine) -> Result<FieldElement> {
    lj.b.checked_sub(&li.b)?
        .checked_div(&li.a.checked_sub(&lj.a)?)
}

/// det [[a1-a2, b1-b2], [a1-a3, b1-b3]] = 0 detects a common point,
/// including the infinite one shared by three mutually parallel lines.
pub fn lines_concurrent(l1: &BitangentLine, l2: &BitangentLine, l3: &BitangentLine) -> bool {
    let det = (|| -> Result<FieldElement> {
        let da2 = l1.a.checked_sub(&l2.a)?;
        let db2 = l1.b.checked_sub(&l2.b)?;
        let da3 = l1.a.checked_sub(&l3.a)?;
        let db3 = l1.b.checked_sub(&l3.b)?;
        da2.checked_mul(&db3)?.checked_sub(&da3.checked_mul(&db2)?)
    })();
    det.map(|v| v.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> (Arc<CyclotomicField>, QuarticCurve) {
        let f = CyclotomicField::new(28).unwrap();
        let p = Poly::zero(&f);
        let q = Poly::monomial(f.one(), 3);
        let r = Poly::monomial(f.one(), 1);
        let curve = QuarticCurve::new(&f, p, q, r).unwrap();
        (f, curve)
    }

    /// Lines x = -zeta7^j t - zeta7^(3j) of the first Klein family.
    fn family0(f: &Arc<CyclotomicField>, j: i64) -> BitangentLine {
        BitangentLine::new(
            format!("L0_{j}"),
            -f.zeta_power(4 * j),
            -f.zeta_power(12 * j),
        )
    }

    #[test]
    fn degree_bounds_enforced() {
        let f = CyclotomicField::new(28).unwrap();
        let bad = QuarticCurve::new(
            &f,
            Poly::monomial(f.one(), 3),
            Poly::zero(&f),
            Poly::zero(&f),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn restriction_of_first_klein_line_is_a_negated_square() {
        let (f, curve) = klein();
        let line = family0(&f, 0);
        let fl = restrict(&curve, &line).unwrap();
        let g = Poly::new(&f, vec![f.one(), f.one(), f.one()]).unwrap();
        let expected = g.checked_mul(&g).unwrap().scale(&f.from_integer(-1)).unwrap();
        assert_eq!(fl, expected);
    }

    #[test]
    fn restriction_of_rotated_line_has_unit_leading_constant() {
        let (f, curve) = klein();
        // x = -zeta7 t - zeta7^3 restricts to -zeta7 (t^2 + zeta7^2 t + zeta7^4)^2.
        let line = family0(&f, 1);
        let fl = restrict(&curve, &line).unwrap();
        let g = Poly::new(
            &f,
            vec![f.zeta_power(16), f.zeta_power(8), f.one()],
        )
        .unwrap();
        let expected = g
            .checked_mul(&g)
            .unwrap()
            .scale(&-f.zeta_power(4))
            .unwrap();
        assert_eq!(fl, expected);
    }

    #[test]
    fn zero_line_restricts_to_r_and_fails_verification() {
        let (f, curve) = klein();
        let line = BitangentLine::new("axis", f.zero(), f.zero());
        let fl = restrict(&curve, &line).unwrap();
        assert_eq!(fl, Poly::monomial(f.one(), 1));
        assert!(!verify_bitangent(&curve, &line));
    }

    #[test]
    fn sections_of_the_first_two_families_verify_exactly() {
        let (f, curve) = klein();
        for j in 0..7 {
            let line = family0(&f, j);
            assert!(verify_bitangent(&curve, &line), "family 0 line {j}");
            let s = derive_section(&curve, &line).unwrap();
            let y = s.y_poly();
            assert_eq!(
                y.checked_mul(&y).unwrap(),
                restrict(&curve, &line).unwrap()
            );
        }
    }

    #[test]
    fn first_section_is_i_times_unit_quadratic() {
        let (f, curve) = klein();
        let s = derive_section(&curve, &family0(&f, 0)).unwrap();
        let i = f.zeta_power(7);
        assert!(s.c == i || s.c == -i);
        assert_eq!(s.d, s.c);
        assert_eq!(s.e, s.c);
    }

    #[test]
    fn quadruple_contact_is_rejected_distinctly() {
        let f = CyclotomicField::new(28).unwrap();
        let curve = QuarticCurve::new(
            &f,
            Poly::zero(&f),
            Poly::zero(&f),
            Poly::monomial(f.one(), 4),
        )
        .unwrap();
        let line = BitangentLine::new("contact4", f.zero(), f.zero());
        assert!(matches!(
            derive_section(&curve, &line),
            Err(Error::HyperflexContact { .. })
        ));
        assert!(!verify_bitangent(&curve, &line));
    }

    #[test]
    fn sanity_flags_identical_and_concurrent_lines() {
        let (f, curve) = klein();
        let l1 = family0(&f, 0);
        let l2 = family0(&f, 1);
        // Third line through the meeting point of l1 and l2 with a fresh slope.
        let t0 = meeting_parameter(&l1, &l2).unwrap();
        let x0 = l1.a.checked_mul(&t0).unwrap().checked_add(&l1.b).unwrap();
        let slope = f.from_integer(2);
        let b3 = x0.checked_sub(&slope.checked_mul(&t0).unwrap()).unwrap();
        let l3 = BitangentLine::new("through", slope, b3);
        let report = curve_sanity(&curve, &[l1.clone(), l2, l3, l1.clone()]);
        assert_eq!(report.identical, vec![(0, 3)]);
        assert_eq!(report.concurrent, vec![(0, 1, 2)]);
        assert!(report.not_bitangent.contains(&2));
    }

    #[test]
    fn sanity_is_clean_for_distinguished_klein_lines() {
        let (f, curve) = klein();
        let lines: Vec<BitangentLine> = (0..7).map(|j| family0(&f, j)).collect();
        let report = curve_sanity(&curve, &lines);
        assert!(report.is_clean());
    }

    #[test]
    fn signed_section_sign_gate() {
        let (f, curve) = klein();
        let s = derive_section(&curve, &family0(&f, 0)).unwrap();
        assert!(SignedSection::new(s.clone(), 2).is_err());
        let minus = SignedSection::new(s.clone(), -1).unwrap();
        assert_eq!(minus.section(), s.negated());
    }
}
