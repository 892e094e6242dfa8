//! Floating-point cross-check of the exact pipeline: a Newton search for
//! bitangents of an embedded quartic, and a numeric recomputation of
//! connected numbers by matching square-root sheets at line intersections.
//!
//! Nothing here feeds back into the exact modules; agreement between the
//! two pipelines is what the acceptance tests assert.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{BitangentLine, QuarticCurve};
use crate::error::{Error, Result};
use crate::topology::unionfind::UnionFind;

#[derive(Clone, Copy, Debug)]
pub struct NumericLine {
    pub a: Complex64,
    pub b: Complex64,
    /// Largest perfect-square defect among the two dependent coefficients
    /// of the monic restriction.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Newton starts per search round.
    pub seeds: usize,
    /// Acceptance gate on the perfect-square defect.
    pub residual_tol: f64,
    /// Sheet-matching gate at intersection points.
    pub match_tol: f64,
    /// RNG stream for the seed points.
    pub seed: u64,
    /// When set, the search retries with fresh seed batches until this many
    /// lines are found, then errs if still short.
    pub expected: Option<usize>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            seeds: 200,
            residual_tol: 1e-8,
            match_tol: 1e-6,
            seed: 1,
            expected: None,
        }
    }
}

/// Embedded curve coefficients, padded to fixed degrees.
struct NumericCurve {
    p: [Complex64; 3],
    q: [Complex64; 4],
    r: [Complex64; 5],
}

impl NumericCurve {
    fn new(curve: &QuarticCurve, k: u64) -> Result<NumericCurve> {
        let mut p = [Complex64::ZERO; 3];
        let mut q = [Complex64::ZERO; 4];
        let mut r = [Complex64::ZERO; 5];
        for (i, slot) in p.iter_mut().enumerate() {
            *slot = curve.p().coeff(i).embed_f64(k)?;
        }
        for (i, slot) in q.iter_mut().enumerate() {
            *slot = curve.q().coeff(i).embed_f64(k)?;
        }
        for (i, slot) in r.iter_mut().enumerate() {
            *slot = curve.r().coeff(i).embed_f64(k)?;
        }
        Ok(NumericCurve { p, q, r })
    }

    /// Coefficients of F(t, a t + b) by degree in t.
    fn restriction(&self, a: Complex64, b: Complex64) -> [Complex64; 5] {
        let x = [b, a];
        let x2 = [b * b, 2.0 * a * b, a * a];
        let x3 = [b * x2[0], 3.0 * a * b * b, 3.0 * a * a * b, a * a * a];
        let mut s = self.r;
        for (i, v) in x3.iter().enumerate() {
            s[i] += v;
        }
        for (m, pm) in self.p.iter().enumerate() {
            for (i, v) in x2.iter().enumerate() {
                s[m + i] += pm * v;
            }
        }
        for (m, qm) in self.q.iter().enumerate() {
            for (i, v) in x.iter().enumerate() {
                s[m + i] += qm * v;
            }
        }
        s
    }

    /// Coefficients of (dF/dx)(t, a t + b) = 3x^2 + 2 p x + q by degree in t.
    fn x_derivative(&self, a: Complex64, b: Complex64) -> [Complex64; 4] {
        let x = [b, a];
        let x2 = [b * b, 2.0 * a * b, a * a];
        let mut fx = [Complex64::ZERO; 4];
        for (i, v) in x2.iter().enumerate() {
            fx[i] += 3.0 * v;
        }
        for (m, pm) in self.p.iter().enumerate() {
            for (i, v) in x.iter().enumerate() {
                fx[m + i] += 2.0 * pm * v;
            }
        }
        for (i, qm) in self.q.iter().enumerate() {
            fx[i] += qm;
        }
        fx
    }
}

/// Perfect-square defect of the monic restriction: how far s1 and s0 are
/// from the values forced by s3 and s2.
fn square_defect(s: &[Complex64; 5]) -> Option<f64> {
    if s[4].norm() < 1e-8 {
        return None;
    }
    let m: Vec<Complex64> = (0..4).map(|i| s[i] / s[4]).collect();
    let beta = m[3] / 2.0;
    let gamma = (m[2] - beta * beta) / 2.0;
    let d1 = (2.0 * beta * gamma - m[1]).norm();
    let d0 = (gamma * gamma - m[0]).norm();
    Some(d1.max(d0))
}

// Residual of the monic square conditions and its Jacobian in (a, b).
// With m_i = s_i/s4, beta = m3/2, gamma = (m2 - beta^2)/2, a degree-4
// polynomial is a square of a quadratic iff 2*beta*gamma = m1 and
// gamma^2 = m0. The monic form has poles where s4 vanishes, which keeps
// iterates away from the degenerate lines instead of attracting them.
fn monic_conditions(
    curve: &NumericCurve,
    a: Complex64,
    b: Complex64,
) -> Option<([Complex64; 2], [[Complex64; 2]; 2])> {
    let s = curve.restriction(a, b);
    if s[4].norm() < 1e-12 {
        return None;
    }
    let fx = curve.x_derivative(a, b);
    // ds/db = fx padded; ds/da = t * fx.
    let mut dsb = [Complex64::ZERO; 5];
    let mut dsa = [Complex64::ZERO; 5];
    dsb[..4].copy_from_slice(&fx);
    dsa[1..5].copy_from_slice(&fx);
    let m = [s[0] / s[4], s[1] / s[4], s[2] / s[4], s[3] / s[4]];
    let beta = m[3] / 2.0;
    let gamma = (m[2] - beta * beta) / 2.0;
    let g = [2.0 * beta * gamma - m[1], gamma * gamma - m[0]];
    let grad = |ds: &[Complex64; 5]| {
        let dm = [
            (ds[0] - m[0] * ds[4]) / s[4],
            (ds[1] - m[1] * ds[4]) / s[4],
            (ds[2] - m[2] * ds[4]) / s[4],
            (ds[3] - m[3] * ds[4]) / s[4],
        ];
        let dbeta = dm[3] / 2.0;
        let dgamma = dm[2] / 2.0 - beta * dbeta;
        let dg1 = 2.0 * (dbeta * gamma + beta * dgamma) - dm[1];
        let dg2 = 2.0 * gamma * dgamma - dm[0];
        (dg1, dg2)
    };
    let (j11, j21) = grad(&dsa);
    let (j12, j22) = grad(&dsb);
    Some((g, [[j11, j12], [j21, j22]]))
}

fn newton_refine(curve: &NumericCurve, mut a: Complex64, mut b: Complex64) -> Option<(Complex64, Complex64)> {
    let mut residual = f64::INFINITY;
    for _ in 0..80 {
        if a.norm() > 1e6 || b.norm() > 1e6 {
            return None;
        }
        let (g, j) = monic_conditions(curve, a, b)?;
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.norm() < 1e-30 {
            return None;
        }
        let da = -(g[0] * j[1][1] - g[1] * j[0][1]) / det;
        let db = -(j[0][0] * g[1] - j[1][0] * g[0]) / det;
        // Damped step: halve while the residual fails to decrease, but
        // always move so the iteration can escape plateaus.
        let mut lambda = 1.0;
        for _ in 0..8 {
            let next = monic_conditions(curve, a + lambda * da, b + lambda * db);
            match next {
                Some((gn, _)) if gn[0].norm() + gn[1].norm() < residual => {
                    residual = gn[0].norm() + gn[1].norm();
                    break;
                }
                _ => lambda /= 2.0,
            }
        }
        a += lambda * da;
        b += lambda * db;
        if lambda * (da.norm() + db.norm()) < 1e-13 {
            break;
        }
    }
    Some((a, b))
}

/// Random-seeded Newton search for all lines whose restriction is a perfect
/// square. Deterministic for a fixed options value.
pub fn find_bitangents_numeric(
    curve: &QuarticCurve,
    k: u64,
    opts: &OracleOptions,
) -> Result<Vec<NumericLine>> {
    let numeric = NumericCurve::new(curve, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found: Vec<NumericLine> = Vec::new();
    // Batches of starts until the line set saturates: some basins are tiny,
    // so only a stall over many consecutive batches ends the search early.
    let (max_batches, stall_limit) = (200usize, 12usize);
    let mut stalled = 0usize;
    for _ in 0..max_batches {
        let before = found.len();
        for _ in 0..opts.seeds {
            let mut draw = || Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            let (a0, b0) = (draw(), draw());
            let Some((a, b)) = newton_refine(&numeric, a0, b0) else {
                continue;
            };
            let s = numeric.restriction(a, b);
            let Some(defect) = square_defect(&s) else {
                continue;
            };
            if defect > opts.residual_tol {
                continue;
            }
            let duplicate = found
                .iter()
                .any(|l| (l.a - a).norm() + (l.b - b).norm() < 1e-6);
            if !duplicate {
                found.push(NumericLine {
                    a,
                    b,
                    residual: defect,
                });
            }
        }
        if opts.expected.is_some_and(|e| found.len() >= e) {
            break;
        }
        stalled = if found.len() == before { stalled + 1 } else { 0 };
        if stalled >= stall_limit {
            break;
        }
    }
    found.sort_by(|l, m| {
        (l.a.re, l.a.im, l.b.re, l.b.im)
            .partial_cmp(&(m.a.re, m.a.im, m.b.re, m.b.im))
            .expect("accepted lines have finite coordinates")
    });
    if let Some(expected) = opts.expected {
        if found.len() < expected {
            return Err(Error::ConvergenceShortfall {
                found: found.len(),
                expected,
            });
        }
    }
    Ok(found)
}

/// One global square-root sheet per line, and the match bit for every pair:
/// true when the chosen sheets pass through the same point over the pair's
/// intersection.
pub struct SheetAssignment {
    /// Per line: (sqrt(s4), beta, gamma) with w(t) = sqrt(s4)(t^2 + beta t + gamma).
    pub sheets: Vec<(Complex64, Complex64, Complex64)>,
    pub matches: Vec<(usize, usize, bool)>,
}

pub fn sheet_assignment(
    curve: &QuarticCurve,
    lines: &[BitangentLine],
    k: u64,
    opts: &OracleOptions,
) -> Result<SheetAssignment> {
    let numeric = NumericCurve::new(curve, k)?;
    let mut embedded = Vec::with_capacity(lines.len());
    let mut sheets = Vec::with_capacity(lines.len());
    for line in lines {
        let a = line.a.embed_f64(k)?;
        let b = line.b.embed_f64(k)?;
        let s = numeric.restriction(a, b);
        if square_defect(&s).is_none_or(|d| d > opts.residual_tol) {
            return Err(Error::NotABitangent {
                name: line.name.clone(),
            });
        }
        let lead = s[4].sqrt();
        let beta = s[3] / s[4] / 2.0;
        let gamma = (s[2] / s[4] - beta * beta) / 2.0;
        embedded.push((a, b));
        sheets.push((lead, beta, gamma));
    }
    let w_at = |i: usize, t: Complex64| -> Complex64 {
        let (lead, beta, gamma) = sheets[i];
        lead * (t * t + beta * t + gamma)
    };
    let mut matches = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (ai, bi) = embedded[i];
            let (aj, bj) = embedded[j];
            let (vi, vj) = if (ai - aj).norm() < 1e-9 {
                // Parallel lines meet over t = infinity; in the chart
                // u = 1/t, y' = y/t^2 the sheets evaluate to their leading
                // coefficients.
                (sheets[i].0, sheets[j].0)
            } else {
                let t0 = (bj - bi) / (ai - aj);
                (w_at(i, t0), w_at(j, t0))
            };
            if vi.norm() < opts.match_tol && vj.norm() < opts.match_tol {
                return Err(Error::OnBranchLocus {
                    i: lines[i].name.clone(),
                    j: lines[j].name.clone(),
                });
            }
            let same = (vi - vj).norm();
            let opposite = (vi + vj).norm();
            match (same < opts.match_tol, opposite < opts.match_tol) {
                (true, true) => {
                    return Err(Error::AmbiguousMatch {
                        i: lines[i].name.clone(),
                        j: lines[j].name.clone(),
                        tol: opts.match_tol,
                    })
                }
                (false, false) => {
                    return Err(Error::MatchFailure {
                        i: lines[i].name.clone(),
                        j: lines[j].name.clone(),
                        tol: opts.match_tol,
                    })
                }
                (is_same, _) => matches.push((i, j, is_same)),
            }
        }
    }
    Ok(SheetAssignment { sheets, matches })
}

/// Component count of the lift graph built purely from floating-point sheet
/// matching.
pub fn connected_number_numeric(
    curve: &QuarticCurve,
    lines: &[BitangentLine],
    k: u64,
    opts: &OracleOptions,
) -> Result<usize> {
    if lines.is_empty() {
        return Err(Error::InvalidInput(
            "connected numbers need at least one line".into(),
        ));
    }
    let assignment = sheet_assignment(curve, lines, k, opts)?;
    let mut uf = UnionFind::new(2 * lines.len());
    for &(i, j, same) in &assignment.matches {
        if same {
            uf.union(2 * i, 2 * j);
            uf.union(2 * i + 1, 2 * j + 1);
        } else {
            uf.union(2 * i, 2 * j + 1);
            uf.union(2 * i + 1, 2 * j);
        }
    }
    Ok(uf.components())
}
