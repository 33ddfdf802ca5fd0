use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ambient::{ambient_model, AmbientModel};
use super::{verify, FanoError};
use crate::exactlin::{determinant, IntMatrix};
use crate::lattice::LatticeVector;
use crate::sublattice::SublatticeEmbedding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DivisorKind {
    D,
    Dprime,
    Dsecond,
}

/// A special divisor `𝒟_d`, `𝒟′_d` or `𝒟″_d`; written `D_12`, `Dprime_10`, `Dsecond_10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct DivisorLabel {
    pub d: u64,
    pub kind: DivisorKind,
}

impl DivisorLabel {
    pub fn new(kind: DivisorKind, d: u64) -> Self {
        DivisorLabel { d, kind }
    }
}

impl fmt::Display for DivisorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            DivisorKind::D => "D",
            DivisorKind::Dprime => "Dprime",
            DivisorKind::Dsecond => "Dsecond",
        };
        write!(f, "{prefix}_{}", self.d)
    }
}

impl FromStr for DivisorLabel {
    type Err = FanoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FanoError::InvalidParameter(format!("not a divisor label: {s:?}"));
        let (prefix, d) = s.split_once('_').ok_or_else(bad)?;
        let kind = match prefix {
            "D" => DivisorKind::D,
            "Dprime" => DivisorKind::Dprime,
            "Dsecond" => DivisorKind::Dsecond,
            _ => return Err(bad()),
        };
        Ok(DivisorLabel::new(kind, d.parse().map_err(|_| bad())?))
    }
}

impl From<DivisorLabel> for String {
    fn from(l: DivisorLabel) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for DivisorLabel {
    type Error = FanoError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Residue class of an admissible discriminant: `d ≡ 0, 2, 4 (mod 8)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiscriminantCase {
    A,
    B,
    C,
}

impl DiscriminantCase {
    pub fn of(d: u64) -> Result<Self, FanoError> {
        match d % 8 {
            _ if d == 0 => Err(FanoError::NotAdmissible(d)),
            0 => Ok(DiscriminantCase::A),
            2 => Ok(DiscriminantCase::B),
            4 => Ok(DiscriminantCase::C),
            _ => Err(FanoError::NotAdmissible(d)),
        }
    }
}

pub fn admissible_discriminant(d: u64) -> bool {
    DiscriminantCase::of(d).is_ok()
}

/// A rank-3 primitive positive definite `K ⊂ I₂₂,₂` containing `Λ₂`.
///
/// `gram` is the canonical matrix of the orbit. The embedding basis is
/// `(u, v, t)`; its Gram matrix equals `gram` except for the `𝒟′` orbit in
/// case b, where the roles of `u` and `v` are exchanged.
#[derive(Debug, Clone)]
pub struct SpecialSublattice {
    pub d: u64,
    pub gram: IntMatrix,
    pub embedding: SublatticeEmbedding,
    pub divisor_label: DivisorLabel,
}

impl SpecialSublattice {
    pub fn embedded_gram(&self) -> IntMatrix {
        self.embedding.gram()
    }
}

fn canonical_gram(d: u64) -> Result<IntMatrix, FanoError> {
    let d = d as i64;
    let rows = match DiscriminantCase::of(d as u64)? {
        DiscriminantCase::A => vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, d / 4]],
        DiscriminantCase::B => vec![vec![2, 0, 0], vec![0, 2, 1], vec![0, 1, (d + 2) / 4]],
        DiscriminantCase::C => vec![vec![2, 0, 1], vec![0, 2, 1], vec![1, 1, (d + 4) / 4]],
    };
    Ok(IntMatrix::from_rows(&rows)?)
}

/// `½·Σ parts`, which must be integral.
fn half_sum(m: &AmbientModel, parts: &[&LatticeVector]) -> Result<LatticeVector, FanoError> {
    let two = BigInt::from(2);
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.add(p)?;
    }
    verify(acc.coords().iter().all(|x| x.is_multiple_of(&two)), || "half-sum is not integral".into())?;
    Ok(m.i222.vector(acc.coords().iter().map(|x| x / &two).collect())?)
}

fn build(m: &AmbientModel, d: u64, gram: IntMatrix, t: LatticeVector) -> Result<SpecialSublattice, FanoError> {
    let embedding = SublatticeEmbedding::from_vectors(m.i222.clone(), &[m.u.clone(), m.v.clone(), t])?;
    let k = embedding.gram();
    verify(embedding.is_primitive(), || format!("representative for d = {d} is not primitive"))?;
    verify(determinant(&k)? == BigInt::from(d), || format!("representative for d = {d} has wrong determinant"))?;
    verify(
        crate::exactlin::signature(&k)? == (3, 0),
        || format!("representative for d = {d} is not positive definite"),
    )?;
    verify(
        k[(0, 0)] == BigInt::from(2) && k[(1, 1)] == BigInt::from(2) && k[(0, 1)].is_zero(),
        || "top-left block is not diag(2,2)".into(),
    )?;
    let mut out = SpecialSublattice {
        d,
        gram,
        embedding,
        divisor_label: DivisorLabel::new(DivisorKind::D, d),
    };
    out.divisor_label = orbit_label(&out)?;
    Ok(out)
}

/// One representative per orbit, each with a verified embedding.
pub fn classify_special_sublattice(d: u64) -> Result<Vec<SpecialSublattice>, FanoError> {
    let case = DiscriminantCase::of(d)?;
    let gram = canonical_gram(d)?;
    let m = ambient_model()?;
    let di = d as i64;
    let reps = match case {
        DiscriminantCase::A => vec![build(m, d, gram, m.w(di / 8))?],
        DiscriminantCase::B => {
            let w2 = m.w((di - 2) / 8).scale(&BigInt::from(2));
            let prime = half_sum(m, &[&m.u, &m.e_vec, &w2])?;
            let second = half_sum(m, &[&m.v, &m.f_vec, &w2])?;
            let mut reps = vec![build(m, d, gram.clone(), prime)?, build(m, d, gram, second)?];
            reps.sort_by_key(|k| k.divisor_label);
            reps
        }
        DiscriminantCase::C => {
            let w2 = m.w((di - 4) / 8).scale(&BigInt::from(2));
            vec![build(m, d, gram, half_sum(m, &[&m.u, &m.v, &m.e_vec, &m.f_vec, &w2])?)?]
        }
    };
    for k in &reps {
        let embedded = k.embedded_gram();
        let swapped = IntMatrix::from_columns(3, &[embedded.column(1), embedded.column(0), embedded.column(2)])?;
        let swapped = IntMatrix::from_rows(&[swapped.row(1).to_vec(), swapped.row(0).to_vec(), swapped.row(2).to_vec()])?;
        verify(embedded == k.gram || swapped == k.gram, || format!("d = {d}: embedded Gram is not the canonical one"))?;
    }
    Ok(reps)
}

fn label_from_ideals(d: u64, ku: &BigInt, kv: &BigInt) -> Result<DivisorLabel, FanoError> {
    if d.is_multiple_of(4) {
        return Ok(DivisorLabel::new(DivisorKind::D, d));
    }
    let two = BigInt::from(2);
    if ku.is_one() && *kv == two {
        Ok(DivisorLabel::new(DivisorKind::Dprime, d))
    } else if *ku == two && kv.is_one() {
        Ok(DivisorLabel::new(DivisorKind::Dsecond, d))
    } else {
        Err(FanoError::InvalidParameter(format!(
            "ideals K·u = ({ku}), K·v = ({kv}) do not determine a divisor for d = {d}"
        )))
    }
}

/// Label from the ideals `K·u` and `K·v` computed in the ambient lattice.
pub fn orbit_label(k: &SpecialSublattice) -> Result<DivisorLabel, FanoError> {
    let m = ambient_model()?;
    let ku = k.embedding.pairing_ideal(&m.u)?;
    let kv = k.embedding.pairing_ideal(&m.v)?;
    label_from_ideals(k.d, &ku, &kv)
}

/// Label of a lattice given by its Gram matrix in a basis `(u, v, x)`:
/// `K·u` and `K·v` are the gcds of the first two rows.
pub fn label_from_gram(gram: &IntMatrix) -> Result<DivisorLabel, FanoError> {
    if gram.rows() != 3 || !gram.is_square() || !gram.is_symmetric() {
        return Err(FanoError::UnsupportedShape("expected a symmetric 3×3 matrix".into()));
    }
    let det = determinant(gram)?;
    let d = det
        .to_u64()
        .filter(|_| det.is_positive())
        .ok_or_else(|| FanoError::InvalidParameter(format!("determinant {det} is not positive")))?;
    DiscriminantCase::of(d)?;
    let row_gcd = |i: usize| gram.row(i).iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    label_from_ideals(d, &row_gcd(0), &row_gcd(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert!(admissible_discriminant(10));
        assert!(!admissible_discriminant(6));
        assert!(admissible_discriminant(8));
        assert!(!admissible_discriminant(0));
    }

    #[test]
    fn label_strings_round_trip() {
        for s in ["D_12", "Dprime_10", "Dsecond_18"] {
            assert_eq!(s.parse::<DivisorLabel>().unwrap().to_string(), s);
        }
        assert!("Dthird_3".parse::<DivisorLabel>().is_err());
        let json = serde_json::to_string(&DivisorLabel::new(DivisorKind::Dprime, 10)).unwrap();
        assert_eq!(json, "\"Dprime_10\"");
    }

    #[test]
    fn small_classifications() {
        let k16 = classify_special_sublattice(16).unwrap();
        assert_eq!(k16.len(), 1);
        assert_eq!(k16[0].gram, IntMatrix::diagonal(&[2, 2, 4]));
        assert_eq!(k16[0].divisor_label.to_string(), "D_16");

        let k10 = classify_special_sublattice(10).unwrap();
        let labels: Vec<String> = k10.iter().map(|k| k.divisor_label.to_string()).collect();
        assert_eq!(labels, ["Dprime_10", "Dsecond_10"]);
        let g = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 2, 1], vec![0, 1, 3]]).unwrap();
        assert!(k10.iter().all(|k| k.gram == g));

        let k12 = classify_special_sublattice(12).unwrap();
        assert_eq!(k12[0].gram, IntMatrix::from_rows(&[vec![2, 0, 1], vec![0, 2, 1], vec![1, 1, 4]]).unwrap());
        assert_eq!(classify_special_sublattice(6).unwrap_err(), FanoError::NotAdmissible(6));
    }

    #[test]
    fn labels_from_raw_grams() {
        let tau = IntMatrix::from_rows(&[vec![2, 0, 1], vec![0, 2, 0], vec![1, 0, 3]]).unwrap();
        assert_eq!(label_from_gram(&tau).unwrap().to_string(), "Dprime_10");
        let plane = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 2, 1], vec![0, 1, 3]]).unwrap();
        assert_eq!(label_from_gram(&plane).unwrap().to_string(), "Dsecond_10");
        assert_eq!(label_from_gram(&IntMatrix::diagonal(&[2, 2, 2])).unwrap().to_string(), "D_8");
    }
}
