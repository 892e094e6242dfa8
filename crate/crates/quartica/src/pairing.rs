//! Intersection combinatorics of bitangent sections and the height-pairing
//! sign matrices.
//!
//! Two sections on distinct lines meet over exactly one parameter value
//! (finite when the slopes differ, over t = infinity when they are equal),
//! and there their y values are either equal or opposite. That dichotomy is
//! the entire input to the pairing: same point gives -1/2, opposite gives
//! +1/2, and a section paired with itself gives 3/2. The sign matrix stores
//! twice these values.

use std::fmt;

use num_bigint::BigInt;

use crate::curve::BitangentSection;
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionKind {
    /// The chosen lifts pass through the same point: s_{P_i} . s_{P_j} = 1.
    SamePoint,
    /// The lifts meet the opposite lifts: s_{P_i} . s_{-P_j} = 1.
    OppositePoint,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeetingPoint {
    Finite(FieldElement),
    AtInfinity,
}

#[derive(Clone, Debug)]
pub struct IntersectionDatum {
    pub i: usize,
    pub j: usize,
    pub t0: MeetingPoint,
    pub kind: IntersectionKind,
}

/// Where and how the sections of two distinct bitangents meet.
///
/// For parallel lines the comparison happens in the chart u = 1/t,
/// x' = x/t, y' = y/t^2, where the lines meet at u = 0 and the sections
/// evaluate to their leading coefficients c.
pub fn intersection_datum(
    i: usize,
    j: usize,
    si: &BitangentSection,
    sj: &BitangentSection,
) -> Result<IntersectionDatum> {
    let (li, lj) = (&si.line, &sj.line);
    if li.same_line(lj) {
        return Err(Error::DuplicateLine {
            i: li.name.clone(),
            j: lj.name.clone(),
        });
    }
    let (t0, yi, yj) = if li.a == lj.a {
        (MeetingPoint::AtInfinity, si.c.clone(), sj.c.clone())
    } else {
        let t0 = crate::curve::meeting_parameter(li, lj)?;
        let yi = si.y_at(&t0)?;
        let yj = sj.y_at(&t0)?;
        (MeetingPoint::Finite(t0), yi, yj)
    };
    if yi.is_zero() && yj.is_zero() {
        return Err(Error::OnBranchLocus {
            i: li.name.clone(),
            j: lj.name.clone(),
        });
    }
    let kind = if yi == yj {
        IntersectionKind::SamePoint
    } else if yi == -yj.clone() {
        IntersectionKind::OppositePoint
    } else {
        return Err(Error::Inconsistent {
            i: li.name.clone(),
            j: lj.name.clone(),
        });
    };
    Ok(IntersectionDatum { i, j, t0, kind })
}

/// Height pairing of two bitangent sections: 3/2 on the diagonal, otherwise
/// 1/2 - (intersection number), which is -1/2 for SamePoint and +1/2 for
/// OppositePoint.
pub fn height_pairing(si: &BitangentSection, sj: &BitangentSection) -> Result<Rational> {
    let half = |n: i64| Rational::new(BigInt::from(n), BigInt::from(2));
    if si.line.same_line(&sj.line) {
        if si == sj {
            return Ok(half(3));
        }
        if *si == sj.negated() {
            return Ok(half(-3));
        }
        return Err(Error::Inconsistent {
            i: si.line.name.clone(),
            j: sj.line.name.clone(),
        });
    }
    match intersection_datum(0, 1, si, sj)?.kind {
        IntersectionKind::SamePoint => Ok(half(-1)),
        IntersectionKind::OppositePoint => Ok(half(1)),
    }
}

/// Twice the height-pairing Gram matrix: diagonal 3, off-diagonal +-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    indices: Vec<usize>,
    entries: Vec<Vec<i8>>,
}

impl SignMatrix {
    /// Validates shape, symmetry, diagonal 3, off-diagonal +-1.
    pub fn from_entries(indices: Vec<usize>, entries: Vec<Vec<i8>>) -> Result<SignMatrix> {
        let k = indices.len();
        if entries.len() != k || entries.iter().any(|row| row.len() != k) {
            return Err(Error::MalformedMatrix(format!(
                "expected a {k} x {k} matrix"
            )));
        }
        for i in 0..k {
            if entries[i][i] != 3 {
                return Err(Error::MalformedMatrix(format!(
                    "diagonal entry ({i},{i}) is {}, expected 3",
                    entries[i][i]
                )));
            }
            for j in 0..k {
                if i != j && entries[i][j].abs() != 1 {
                    return Err(Error::MalformedMatrix(format!(
                        "off-diagonal entry ({i},{j}) is {}, expected +-1",
                        entries[i][j]
                    )));
                }
                if entries[i][j] != entries[j][i] {
                    return Err(Error::MalformedMatrix(format!(
                        "asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(SignMatrix { indices, entries })
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn entries(&self) -> &[Vec<i8>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i][j]
    }

    /// Count of -1 entries strictly above the diagonal (the quantity m_I).
    pub fn minus_count(&self) -> usize {
        let k = self.size();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| self.entries[i][j] == -1)
            .count()
    }

    /// Restriction to the given positions (positions into this matrix, not
    /// the external labels).
    pub fn submatrix(&self, positions: &[usize]) -> SignMatrix {
        let indices = positions.iter().map(|&p| self.indices[p]).collect();
        let entries = positions
            .iter()
            .map(|&pi| positions.iter().map(|&pj| self.entries[pi][pj]).collect())
            .collect();
        SignMatrix { indices, entries }
    }

    /// Replaces the external labels; lengths must match.
    pub fn relabel(mut self, indices: Vec<usize>) -> Result<SignMatrix> {
        if indices.len() != self.indices.len() {
            return Err(Error::MalformedMatrix(format!(
                "label count {} does not match size {}",
                indices.len(),
                self.indices.len()
            )));
        }
        self.indices = indices;
        Ok(self)
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            writeln!(
                f,
                "[{}]",
                row.iter()
                    .map(|e| format!("{e:>2}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )?;
        }
        Ok(())
    }
}

/// Sign matrix of a list of sections on pairwise distinct lines; labels are
/// the positions 0..k (relabel for external numbering).
pub fn gram_matrix(sections: &[BitangentSection]) -> Result<SignMatrix> {
    let k = sections.len();
    if k < 2 {
        return Err(Error::InvalidInput(
            "a sign matrix needs at least two sections".into(),
        ));
    }
    let mut entries = vec![vec![3i8; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let kind = intersection_datum(i, j, &sections[i], &sections[j])?.kind;
            let e = match kind {
                IntersectionKind::SamePoint => -1,
                IntersectionKind::OppositePoint => 1,
            };
            entries[i][j] = e;
            entries[j][i] = e;
        }
    }
    SignMatrix::from_entries((0..k).collect(), entries)
}
