//! Divisors reached by the K3-based construction, and the short-vector
//! conditions on the rank-2 lattices it starts from.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Roots;
use serde::{Deserialize, Serialize};

use super::classify::{label_from_gram, DivisorKind, DivisorLabel};
use super::surfaces::example_family_table;
use super::{verify, FanoError};
use crate::exactlin::{determinant, IntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionOutcome {
    Satisfied,
    /// A class `c` (coordinates in the input basis) meeting the condition.
    Violated { witness: [i64; 2] },
}

/// "No `c` with `c² = c_squared` and `c·h = c_dot_h`".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HassettCondition {
    pub c_squared: i64,
    pub c_dot_h: i64,
    pub outcome: ConditionOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HassettReport {
    pub gram: Vec<Vec<i64>>,
    pub h_index: usize,
    /// The three conditions of the lemma followed by the trigonality guard.
    pub conditions: Vec<HassettCondition>,
}

impl HassettReport {
    pub fn lemma_holds(&self) -> bool {
        self.conditions[..3].iter().all(|c| c.outcome == ConditionOutcome::Satisfied)
    }

    pub fn non_trigonal(&self) -> bool {
        self.conditions[3].outcome == ConditionOutcome::Satisfied
    }

    pub fn all_satisfied(&self) -> bool {
        self.lemma_holds() && self.non_trigonal()
    }
}

const CONDITIONS: [(i64, i64); 4] = [(-2, 0), (0, 1), (0, 2), (0, 3)];

/// Integer solutions `x` of `a·x² + b·x + c = 0`, or `None` if every `x` is.
fn integer_roots(a: i128, b: i128, c: i128) -> Option<Vec<i128>> {
    if a == 0 {
        if b == 0 {
            return if c == 0 { None } else { Some(vec![]) };
        }
        return Some(if c % b == 0 { vec![-c / b] } else { vec![] });
    }
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return Some(vec![]);
    }
    let r = disc.sqrt();
    if r * r != disc {
        return Some(vec![]);
    }
    let mut out: Vec<i128> = [-b + r, -b - r]
        .into_iter()
        .filter(|num| num % (2 * a) == 0)
        .map(|num| num / (2 * a))
        .collect();
    out.sort();
    out.dedup();
    Some(out)
}

/// Checks which classes `c = x·h + y·w` with prescribed `(c², c·h)` exist in
/// the rank-2 lattice `Γ`. With `c·h` fixed, `y` is affine in `x` (or `x` is
/// fixed when `h ⊥ w`), so each condition is a one-variable quadratic.
pub fn hassett_lemma_check(gram: &IntMatrix, h_index: usize) -> Result<HassettReport, FanoError> {
    if gram.rows() != 2 || !gram.is_square() || !gram.is_symmetric() || h_index > 1 {
        return Err(FanoError::UnsupportedShape("expected a symmetric 2×2 matrix and h_index ∈ {0,1}".into()));
    }
    let rows = gram
        .to_i64_rows()
        .ok_or_else(|| FanoError::UnsupportedShape("entries do not fit in 64 bits".into()))?;
    if determinant(gram)? == BigInt::from(0) {
        return Err(FanoError::UnsupportedShape("Gram matrix is degenerate".into()));
    }
    let hh = rows[h_index][h_index];
    if hh != 10 {
        return Err(FanoError::HNotNorm10);
    }
    let other = 1 - h_index;
    let o = rows[0][1] as i128;
    let m = rows[other][other] as i128;
    let mut conditions = Vec::new();
    for (t, k) in CONDITIONS {
        let (t, k) = (t as i128, k as i128);
        let mut found: Option<(i128, i128)> = None;
        if o == 0 {
            if k % 10 == 0 && t % m == 0 {
                let x = k / 10;
                let y2 = (t - 10 * x * x) / m;
                if (t - 10 * x * x) % m == 0 && y2 >= 0 {
                    let y = y2.sqrt();
                    if y * y == y2 && (x, y) != (0, 0) {
                        found = Some((x, y));
                    }
                }
            }
        } else {
            let a = 100 * m - 10 * o * o;
            let b = 2 * o * o * k - 20 * m * k;
            let c = m * k * k - o * o * t;
            let roots = integer_roots(a, b, c)
                .ok_or_else(|| FanoError::UnsupportedShape("condition does not reduce to a quadratic".into()))?;
            found = roots
                .into_iter()
                .filter(|x| (k - 10 * x) % o == 0)
                .map(|x| (x, (k - 10 * x) / o))
                .find(|&(x, y)| (x, y) != (0, 0));
        }
        let outcome = match found {
            None => ConditionOutcome::Satisfied,
            Some((x, y)) => {
                let mut w = [0i64; 2];
                w[h_index] = x as i64;
                w[other] = y as i64;
                ConditionOutcome::Violated { witness: w }
            }
        };
        conditions.push(HassettCondition {
            c_squared: t as i64,
            c_dot_h: k as i64,
            outcome,
        });
    }
    Ok(HassettReport {
        gram: rows,
        h_index,
        conditions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TargetFamily {
    /// `Γ = [[10,0],[0,−2e]]`.
    First,
    /// `Γ = [[10,5],[5,−2e]]`.
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRow {
    pub family: TargetFamily,
    pub e: i64,
    /// Which rank-3 sublattice of the rank-4 lattice of algebraic classes.
    pub lattice: String,
    pub gram: Vec<Vec<i64>>,
    pub d: u64,
    pub divisor_label: DivisorLabel,
}

fn sub_gram(big: &IntMatrix, vectors: &[[i64; 4]]) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    IntMatrix::from_columns(4, &cols).expect("length 4").congruence(big).expect("4×4")
}

fn target_row(family: TargetFamily, e: i64, name: &str, gram: IntMatrix, expected: DivisorLabel) -> Result<TargetRow, FanoError> {
    let label = label_from_gram(&gram)?;
    verify(label == expected, || format!("{family:?} e = {e}, {name}: got {label}, expected {expected}"))?;
    verify(determinant(&gram)? == BigInt::from(label.d), || "determinant mismatch".into())?;
    Ok(TargetRow {
        family,
        e,
        lattice: name.to_string(),
        gram: gram.to_i64_rows().expect("small entries"),
        d: label.d,
        divisor_label: label,
    })
}

/// Rank-3 lattices produced for `0 ≤ e ≤ e_max`. Each family value of `e`
/// is used only if its rank-2 lattice passes [`hassett_lemma_check`]; the
/// rank-3 Gram matrices are read off the rank-4 lattice of algebraic classes.
pub fn th81_targets(e_max: i64) -> Result<Vec<TargetRow>, FanoError> {
    if e_max < 0 {
        return Err(FanoError::InvalidParameter(format!("e_max = {e_max} must be nonnegative")));
    }
    let lab = |kind, d: i64| DivisorLabel::new(kind, d as u64);
    let mut rows = Vec::new();
    for e in 0..=e_max {
        // Γ = diag(10, −2e) is degenerate at e = 0.
        if e >= 1 && hassett_lemma_check(&IntMatrix::diagonal(&[10, -2 * e]), 0)?.all_satisfied() {
            // Basis (u, v, w″₁₀, w_X).
            let big = IntMatrix::from_rows(&[
                vec![2, 0, 0, 0],
                vec![0, 2, 1, 0],
                vec![0, 1, 3, 0],
                vec![0, 0, 0, 2 * e],
            ])?;
            let fam = TargetFamily::First;
            let k10 = sub_gram(&big, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]);
            rows.push(target_row(fam, e, "<u,v,w10''>", k10, lab(DivisorKind::Dsecond, 10))?);
            let a = sub_gram(&big, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]);
            rows.push(target_row(fam, e, "<u,v,w_X>", a, lab(DivisorKind::D, 8 * e))?);
            let b = sub_gram(&big, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]);
            rows.push(target_row(fam, e, "<u,v,w10''+w_X>", b, lab(DivisorKind::Dsecond, 8 * e + 10))?);
        }
        let gamma = IntMatrix::from_rows(&[vec![10, 5], vec![5, -2 * e]])?;
        if hassett_lemma_check(&gamma, 0)?.all_satisfied() {
            // Basis (u, v, w″₁₀, w′_X).
            let big = IntMatrix::from_rows(&[
                vec![2, 0, 0, 1],
                vec![0, 2, 1, 0],
                vec![0, 1, 3, 0],
                vec![1, 0, 0, 2 * e + 3],
            ])?;
            let fam = TargetFamily::Second;
            let k10 = sub_gram(&big, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]);
            rows.push(target_row(fam, e, "<u,v,w10''>", k10, lab(DivisorKind::Dsecond, 10))?);
            let k = sub_gram(&big, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]);
            rows.push(target_row(fam, e, "<u,v,w_X'>", k, lab(DivisorKind::Dprime, 8 * e + 10))?);
            let c = sub_gram(&big, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]);
            rows.push(target_row(fam, e, "<u,v,w10''+w_X'>", c, lab(DivisorKind::D, 8 * e + 20))?);
        }
    }
    Ok(rows)
}

/// Divisors named by the construction theorem with `d ≤ d_max`:
/// `𝒟_d` for `d ≡ 0 (mod 4)`, `d ≥ 12`, and `𝒟′_d`, `𝒟″_d` for
/// `d ≡ 2 (mod 8)`, `d ≥ 10`, without `𝒟″₁₈`.
pub fn theorem_divisor_set(d_max: u64) -> BTreeSet<DivisorLabel> {
    let mut out = BTreeSet::new();
    for d in 10..=d_max {
        if d % 4 == 0 && d >= 12 {
            out.insert(DivisorLabel::new(DivisorKind::D, d));
        }
        if d % 8 == 2 {
            out.insert(DivisorLabel::new(DivisorKind::Dprime, d));
            if d != 18 {
                out.insert(DivisorLabel::new(DivisorKind::Dsecond, d));
            }
        }
    }
    out
}

/// Comparison of the reached divisors (targets plus the examples' `𝒟₁₂`)
/// with [`theorem_divisor_set`], both restricted to `d ≤ d_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub e_max: i64,
    pub d_max: u64,
    pub missing: Vec<DivisorLabel>,
    pub extra: Vec<DivisorLabel>,
}

impl Coverage {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn th81_coverage(e_max: i64, d_max: u64) -> Result<Coverage, FanoError> {
    let mut reached: BTreeSet<DivisorLabel> = th81_targets(e_max)?.into_iter().map(|r| r.divisor_label).collect();
    let d12 = DivisorLabel::new(DivisorKind::D, 12);
    verify(
        example_family_table()?.iter().any(|r| r.divisor_label == d12),
        || "no example lies on D_12".into(),
    )?;
    reached.insert(d12);
    reached.retain(|l| l.d <= d_max);
    let expected = theorem_divisor_set(d_max);
    Ok(Coverage {
        e_max,
        d_max,
        missing: expected.difference(&reached).copied().collect(),
        extra: reached.difference(&expected).copied().collect(),
    })
}

/// Largest `d` for which the targets with `e ≤ e_max` can be complete:
/// the first family stops at `𝒟_{8·e_max}`.
pub fn th81_reach(e_max: i64) -> u64 {
    (8 * e_max + 7) as u64
}
