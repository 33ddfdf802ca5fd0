//! Discriminant groups `D(L) = L^∨/L` with their finite bilinear and
//! quadratic forms.
//!
//! Elements are coordinate vectors with respect to the stored generators,
//! reduced modulo the generator orders. For a group computed from a lattice
//! the generators come from the Smith form of the Gram matrix, and each has
//! an exact rational lift in `L ⊗ Q` used to evaluate the forms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{hermite_rows, smith_normal_form, IntMatrix, LinAlgError};
use crate::lattice::{Lattice, LatticeError, LatticeVector};
use crate::sublattice::SublatticeEmbedding;

/// Upper bound on group orders for exhaustive enumeration.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscError {
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("group of order {0} exceeds the enumeration limit")]
    TooLarge(String),
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("map is not an isometry")]
    NotIsometry,
    #[error("sublattice does not have finite index")]
    NotFiniteIndex,
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("quadratic form requested on an odd lattice")]
    OddLattice,
    #[error("discriminant group does not belong to this lattice")]
    LatticeMismatch,
    #[error("invalid form data: {0}")]
    InvalidForm(String),
    #[error("malformed residue {0:?}")]
    ParseResidue(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

fn rational_mod(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let r = x - (x / &m).floor() * &m;
    debug_assert!(r >= BigRational::zero() && r < m);
    r
}

fn fmt_rational(x: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x.is_integer() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, DiscError> {
    let bad = || DiscError::ParseResidue(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// A residue in Q/Z, normalized to `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ(BigRational);

impl QmodZ {
    pub fn new(x: &BigRational) -> Self {
        QmodZ(rational_mod(x, 1))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(&BigRational::new(n.into(), d.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn neg(&self) -> Self {
        Self::new(&-&self.0)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.0, f)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod 1")
    }
}

impl FromStr for QmodZ {
    type Err = DiscError;
    fn from_str(s: &str) -> Result<Self, DiscError> {
        Ok(Self::new(&parse_rational(s)?))
    }
}

/// A residue in Q/2Z, normalized to `[0, 2)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodTwoZ(BigRational);

impl QmodTwoZ {
    pub fn new(x: &BigRational) -> Self {
        QmodTwoZ(rational_mod(x, 2))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(&BigRational::new(n.into(), d.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Image in Q/Z.
    pub fn mod_one(&self) -> QmodZ {
        QmodZ::new(&self.0)
    }
}

impl fmt::Display for QmodTwoZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.0, f)
    }
}

impl fmt::Debug for QmodTwoZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod 2")
    }
}

impl FromStr for QmodTwoZ {
    type Err = DiscError;
    fn from_str(s: &str) -> Result<Self, DiscError> {
        Ok(Self::new(&parse_rational(s)?))
    }
}

/// An element of a discriminant group: coordinates modulo generator orders.
pub type Element = Vec<u64>;

/// Which form must vanish on an isotropic subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Isotropy {
    /// `b|_H ≡ 0`: gluing keeps the overlattice integral.
    Bilinear,
    /// `q|_H ≡ 0`: gluing keeps the overlattice even.
    Quadratic,
}

/// Optional filter on enumerated subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupConstraint {
    Any,
    /// For `D = D₁ ⊕ D₂` with `D₁` spanned by the first `split` generators:
    /// both projections restricted to `H` are injective.
    InjectiveToBoth { split: usize },
}

/// Data tying a group to the lattice it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
struct LatticeLink {
    gram: IntMatrix,
    /// Exact lifts of the generators in `L ⊗ Q` coordinates.
    lifts: Vec<Vec<BigRational>>,
    /// Rows of the left Smith transform giving coordinates of a dual vector.
    coord_rows: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<u64>,
    /// Exact representatives of `b(gᵢ, gⱼ)`; only their classes mod Z matter,
    /// but `2·bᵢⱼ` enters `q` so the representatives are kept unreduced.
    bform: Vec<Vec<BigRational>>,
    qform: Option<Vec<BigRational>>,
    link: Option<LatticeLink>,
}

/// A subgroup listed by its elements (sorted, containing 0).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiniteSubgroup {
    elements: Vec<Element>,
}

impl FiniteSubgroup {
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

fn to_u64(x: &BigInt) -> Result<u64, DiscError> {
    x.to_u64().ok_or_else(|| DiscError::TooLarge(x.to_string()))
}

fn rat(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `D(L)` computed from the Smith form `u·G·v = d`: the generator of order
/// `dᵢ > 1` lifts to column `i` of `v` divided by `dᵢ`.
pub fn discriminant_group(l: &Lattice) -> Result<DiscriminantGroup, DiscError> {
    let g = l.gram();
    let s = smith_normal_form(g);
    let n = l.rank();
    if s.rank() != n {
        return Err(DiscError::Degenerate);
    }
    let mut factors = Vec::new();
    let mut lifts = Vec::new();
    let mut coord_rows = Vec::new();
    for i in 0..n {
        let d = &s.d[(i, i)];
        if d.is_one() {
            continue;
        }
        factors.push(to_u64(d)?);
        lifts.push(
            s.v.column(i)
                .into_iter()
                .map(|x| BigRational::new(x, d.clone()))
                .collect::<Vec<_>>(),
        );
        coord_rows.push(s.u.row(i).to_vec());
    }
    let gr = g.to_rational();
    let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
        let gy = gr.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).fold(BigRational::zero(), |a, b| a + b)
    };
    let k = factors.len();
    let bform: Vec<Vec<BigRational>> = (0..k)
        .map(|i| (0..k).map(|j| pair(&lifts[i], &lifts[j])).collect())
        .collect();
    let qform = l.is_even().then(|| (0..k).map(|i| bform[i][i].clone()).collect());
    Ok(DiscriminantGroup {
        invariant_factors: factors,
        bform,
        qform,
        link: Some(LatticeLink {
            gram: g.clone(),
            lifts,
            coord_rows,
        }),
    })
}

impl DiscriminantGroup {
    /// An abstract finite form given by generator orders and form values.
    pub fn from_forms(
        invariant_factors: Vec<u64>,
        bform: Vec<Vec<BigRational>>,
        qform: Option<Vec<BigRational>>,
    ) -> Result<Self, DiscError> {
        let k = invariant_factors.len();
        if invariant_factors.iter().any(|&d| d < 2) {
            return Err(DiscError::InvalidForm("generator orders must exceed 1".into()));
        }
        if bform.len() != k || bform.iter().any(|r| r.len() != k) {
            return Err(DiscError::InvalidForm("b matrix has the wrong shape".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if !QmodZ::new(&(&bform[i][j] - &bform[j][i])).is_zero() {
                    return Err(DiscError::InvalidForm("b is not symmetric".into()));
                }
                if !(&bform[i][j] * rat(invariant_factors[i])).is_integer() {
                    return Err(DiscError::InvalidForm("b is not defined on the group".into()));
                }
            }
        }
        if let Some(q) = &qform {
            if q.len() != k {
                return Err(DiscError::InvalidForm("q vector has the wrong length".into()));
            }
            for i in 0..k {
                if !QmodZ::new(&(&q[i] - &bform[i][i])).is_zero() {
                    return Err(DiscError::InvalidForm("q does not refine b".into()));
                }
                let d = rat(invariant_factors[i]);
                if !QmodTwoZ::new(&(&q[i] * &d * &d)).is_zero() {
                    return Err(DiscError::InvalidForm("q is not defined on the group".into()));
                }
            }
        }
        Ok(DiscriminantGroup {
            invariant_factors,
            bform,
            qform,
            link: None,
        })
    }

    /// Cyclic group `Z/n` with `q(1) = value` (and `b(1,1) = value mod 1`).
    pub fn cyclic_even(n: u64, value: BigRational) -> Result<Self, DiscError> {
        if n == 1 {
            return Self::from_forms(vec![], vec![], Some(vec![]));
        }
        Self::from_forms(vec![n], vec![vec![value.clone()]], Some(vec![value]))
    }

    /// Orthogonal direct sum; the first group's generators come first.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let (ka, kb) = (a.rank(), b.rank());
        let mut bform = vec![vec![BigRational::zero(); ka + kb]; ka + kb];
        for i in 0..ka {
            for j in 0..ka {
                bform[i][j] = a.bform[i][j].clone();
            }
        }
        for i in 0..kb {
            for j in 0..kb {
                bform[ka + i][ka + j] = b.bform[i][j].clone();
            }
        }
        let qform = match (&a.qform, &b.qform) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
            _ => None,
        };
        let link = match (&a.link, &b.link) {
            (Some(x), Some(y)) => {
                let (na, nb) = (x.gram.rows(), y.gram.rows());
                let pad = |v: &[BigRational], before: usize, after: usize| -> Vec<BigRational> {
                    std::iter::repeat_n(BigRational::zero(), before)
                        .chain(v.iter().cloned())
                        .chain(std::iter::repeat_n(BigRational::zero(), after))
                        .collect()
                };
                let padi = |v: &[BigInt], before: usize, after: usize| -> Vec<BigInt> {
                    std::iter::repeat_n(BigInt::zero(), before)
                        .chain(v.iter().cloned())
                        .chain(std::iter::repeat_n(BigInt::zero(), after))
                        .collect()
                };
                Some(LatticeLink {
                    gram: IntMatrix::block_diagonal(&[&x.gram, &y.gram]),
                    lifts: x
                        .lifts
                        .iter()
                        .map(|v| pad(v, 0, nb))
                        .chain(y.lifts.iter().map(|v| pad(v, na, 0)))
                        .collect(),
                    coord_rows: x
                        .coord_rows
                        .iter()
                        .map(|v| padi(v, 0, nb))
                        .chain(y.coord_rows.iter().map(|v| padi(v, na, 0)))
                        .collect(),
                })
            }
            _ => None,
        };
        DiscriminantGroup {
            invariant_factors: a.invariant_factors.iter().chain(&b.invariant_factors).copied().collect(),
            bform,
            qform,
            link,
        }
    }

    /// The same group with both forms negated.
    pub fn negated(&self) -> Self {
        DiscriminantGroup {
            invariant_factors: self.invariant_factors.clone(),
            bform: self.bform.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            qform: self.qform.as_ref().map(|q| q.iter().map(|x| -x).collect()),
            link: None,
        }
    }

    /// The same group with `q` forgotten, so comparisons use `b` only.
    pub fn bilinear_only(&self) -> Self {
        DiscriminantGroup {
            qform: None,
            ..self.clone()
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |acc, &d| acc * d)
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.iter().fold(1, |acc, &d| acc.lcm(&d))
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        BigInt::from(self.exponent()) == self.order()
    }

    pub fn has_quadratic_form(&self) -> bool {
        self.qform.is_some()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        x.iter()
            .zip(y)
            .zip(&self.invariant_factors)
            .map(|((a, b), d)| (a + b) % d)
            .collect()
    }

    pub fn scale(&self, k: u64, x: &Element) -> Element {
        x.iter()
            .zip(&self.invariant_factors)
            .map(|(a, d)| ((*a as u128 * k as u128) % *d as u128) as u64)
            .collect()
    }

    pub fn order_of(&self, x: &Element) -> u64 {
        x.iter()
            .zip(&self.invariant_factors)
            .fold(1, |acc, (a, d)| acc.lcm(&(d / a.gcd(d))))
    }

    fn raw_b(&self, x: &Element, y: &Element) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if *yj != 0 {
                    acc += &self.bform[i][j] * rat(*xi) * rat(*yj);
                }
            }
        }
        acc
    }

    pub fn b(&self, x: &Element, y: &Element) -> QmodZ {
        QmodZ::new(&self.raw_b(x, y))
    }

    pub fn q(&self, x: &Element) -> Result<QmodTwoZ, DiscError> {
        let q = self.qform.as_ref().ok_or(DiscError::OddLattice)?;
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            acc += &q[i] * rat(*xi) * rat(*xi);
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                if *xj != 0 {
                    acc += &self.bform[i][j] * rat(2 * xi) * rat(*xj);
                }
            }
        }
        Ok(QmodTwoZ::new(&acc))
    }

    /// Generator table of `b`, reduced into `[0,1)`.
    pub fn bform_matrix(&self) -> Vec<Vec<QmodZ>> {
        self.bform.iter().map(|r| r.iter().map(QmodZ::new).collect()).collect()
    }

    /// Generator values of `q`, reduced into `[0,2)`; `None` for odd lattices.
    pub fn qform_values(&self) -> Option<Vec<QmodTwoZ>> {
        self.qform.as_ref().map(|q| q.iter().map(QmodTwoZ::new).collect())
    }

    fn is_isotropic(&self, x: &Element, kind: Isotropy) -> Result<bool, DiscError> {
        Ok(match kind {
            Isotropy::Bilinear => self.b(x, x).is_zero(),
            Isotropy::Quadratic => self.q(x)?.is_zero(),
        })
    }

    fn guard(&self) -> Result<u64, DiscError> {
        let n = self.order();
        match n.to_u64() {
            Some(k) if k <= ENUMERATION_LIMIT => Ok(k),
            _ => Err(DiscError::TooLarge(n.to_string())),
        }
    }

    /// All elements in lexicographic order of coordinates.
    pub fn elements(&self) -> Result<Vec<Element>, DiscError> {
        let n = self.guard()? as usize;
        let mut out = Vec::with_capacity(n);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.invariant_factors[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Rational lift of an element in `L ⊗ Q` coordinates.
    pub fn lift(&self, x: &Element) -> Option<Vec<BigRational>> {
        let link = self.link.as_ref()?;
        let n = link.gram.rows();
        let mut v = vec![BigRational::zero(); n];
        for (c, l) in x.iter().zip(&link.lifts) {
            if *c == 0 {
                continue;
            }
            for (vi, li) in v.iter_mut().zip(l) {
                *vi += li * rat(*c);
            }
        }
        Some(v)
    }

    /// Class of a vector `x ∈ L^∨` given by its `L ⊗ Q` coordinates.
    pub fn class_of(&self, x: &[BigRational]) -> Result<Element, DiscError> {
        let link = self.link.as_ref().ok_or(DiscError::LatticeMismatch)?;
        let gx = link.gram.to_rational().mul_vec(x);
        let mut y = Vec::with_capacity(gx.len());
        for v in gx {
            if !v.is_integer() {
                return Err(DiscError::InvalidForm("vector is not in the dual lattice".into()));
            }
            y.push(v.to_integer());
        }
        Ok(link
            .coord_rows
            .iter()
            .zip(&self.invariant_factors)
            .map(|(row, d)| {
                let c: BigInt = row.iter().zip(&y).map(|(a, b)| a * b).sum();
                c.mod_floor(&BigInt::from(*d)).to_u64().expect("reduced below a u64 modulus")
            })
            .collect())
    }

    fn check_lattice(&self, l: &Lattice) -> Result<&LatticeLink, DiscError> {
        match &self.link {
            Some(link) if &link.gram == l.gram() => Ok(link),
            _ => Err(DiscError::LatticeMismatch),
        }
    }

    pub fn to_record(&self) -> DiscriminantRecord {
        DiscriminantRecord {
            invariant_factors: self.invariant_factors.clone(),
            b: self
                .bform_matrix()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            q: self
                .qform_values()
                .map(|q| q.iter().map(ToString::to_string).collect()),
        }
    }
}

/// JSON form: `{"invariant_factors": [...], "b": [["num/den"]], "q": ["num/den"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantRecord {
    pub invariant_factors: Vec<u64>,
    pub b: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
}

impl TryFrom<DiscriminantRecord> for DiscriminantGroup {
    type Error = DiscError;

    fn try_from(r: DiscriminantRecord) -> Result<Self, DiscError> {
        let b = r
            .b
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let q = r
            .q
            .map(|q| q.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        DiscriminantGroup::from_forms(r.invariant_factors, b, q)
    }
}

/// `w⋆ = [w / div(w)] ∈ D(L)`.
pub fn vector_class(d: &DiscriminantGroup, l: &Lattice, w: &LatticeVector) -> Result<Element, DiscError> {
    d.check_lattice(l)?;
    let div = l.divisibility(w)?;
    let x: Vec<BigRational> = w
        .coords()
        .iter()
        .map(|c| BigRational::new(c.clone(), div.clone()))
        .collect();
    d.class_of(&x)
}

/// Every isotropic subgroup, sorted lexicographically by element list.
pub fn isotropic_subgroups(
    d: &DiscriminantGroup,
    kind: Isotropy,
    constraint: SubgroupConstraint,
) -> Result<Vec<FiniteSubgroup>, DiscError> {
    let all = d.elements()?;
    let candidates: Vec<Element> = all
        .into_iter()
        .filter(|x| x.iter().any(|&c| c != 0))
        .filter_map(|x| match d.is_isotropic(&x, kind) {
            Ok(true) => Some(Ok(x)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_, _>>()?;

    // Each subgroup is reached by adjoining one isotropic element at a time;
    // the generator list is kept to test orthogonality of the new element.
    let mut seen: BTreeSet<Vec<Element>> = BTreeSet::new();
    let trivial = vec![d.zero()];
    seen.insert(trivial.clone());
    let mut frontier = vec![(trivial, Vec::<Element>::new())];
    while let Some((elements, gens)) = frontier.pop() {
        let members: BTreeSet<&Element> = elements.iter().collect();
        for x in &candidates {
            if members.contains(x) || gens.iter().any(|g| !d.b(g, x).is_zero()) {
                continue;
            }
            let mut next: BTreeSet<Element> = BTreeSet::new();
            let mut multiple = d.zero();
            loop {
                for h in &elements {
                    next.insert(d.add(h, &multiple));
                }
                multiple = d.add(&multiple, x);
                if multiple.iter().all(|&c| c == 0) {
                    break;
                }
            }
            let next: Vec<Element> = next.into_iter().collect();
            if seen.insert(next.clone()) {
                let mut g = gens.clone();
                g.push(x.clone());
                frontier.push((next, g));
            }
        }
    }

    let keep = |h: &Vec<Element>| match constraint {
        SubgroupConstraint::Any => true,
        SubgroupConstraint::InjectiveToBoth { split } => h.iter().all(|x| {
            let left_zero = x[..split].iter().all(|&c| c == 0);
            let right_zero = x[split..].iter().all(|&c| c == 0);
            // Injectivity of both projections: no nonzero element dies in either.
            left_zero == right_zero
        }),
    };
    Ok(seen
        .into_iter()
        .filter(keep)
        .map(|elements| FiniteSubgroup { elements })
        .collect())
}

/// Overlattice `M ⊃ L` generated by `L` and lifts of `H`, together with its
/// basis expressed in `L ⊗ Q` coordinates (columns).
pub fn glue_overlattice_with_basis(
    l: &Lattice,
    d: &DiscriminantGroup,
    h: &FiniteSubgroup,
    kind: Isotropy,
) -> Result<(Lattice, Vec<Vec<BigRational>>), DiscError> {
    d.check_lattice(l)?;
    for x in h.elements() {
        if !d.is_isotropic(x, kind)? {
            return Err(DiscError::NotIsotropic);
        }
        for y in h.elements() {
            if !d.b(x, y).is_zero() {
                return Err(DiscError::NotIsotropic);
            }
        }
    }
    let n = l.rank();
    let mut gens: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for x in h.elements() {
        gens.push(d.lift(x).expect("checked lattice link"));
    }
    let denom = gens
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|v| v.iter().map(|x| (x * &denom).to_integer()).collect())
        .collect();
    let basis: Vec<Vec<BigRational>> = hermite_rows(&scaled)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, denom.clone())).collect())
        .collect();
    let g = l.gram().to_rational();
    let mut gram = IntMatrix::zeros(n, n);
    for i in 0..n {
        let gi = g.mul_vec(&basis[i]);
        for j in 0..n {
            let v = basis[j].iter().zip(&gi).fold(BigRational::zero(), |a, (x, y)| a + x * y);
            if !v.is_integer() {
                return Err(DiscError::NotIsotropic);
            }
            gram[(i, j)] = v.to_integer();
        }
    }
    let label = l.label().map(|s| format!("{s}+glue"));
    Ok((Lattice::new(gram, label)?, basis))
}

pub fn glue_overlattice(
    l: &Lattice,
    d: &DiscriminantGroup,
    h: &FiniteSubgroup,
    kind: Isotropy,
) -> Result<Lattice, DiscError> {
    Ok(glue_overlattice_with_basis(l, d, h, kind)?.0)
}

/// Outcome of trying to extend an isometry across a finite-index inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// The extension, as a matrix acting on ambient coordinates.
    Extended(IntMatrix),
    NotExtendable,
}

/// Extends an isometry `g` of `M` (matrix in the basis of `M`) to the
/// overlattice `L ⊃ M` of finite index, if it preserves `L`.
pub fn extend_isometry(g: &IntMatrix, m_in_l: &SublatticeEmbedding) -> Result<Extension, DiscError> {
    let b = m_in_l.basis();
    if !b.is_square() {
        return Err(DiscError::NotFiniteIndex);
    }
    let gram_m = m_in_l.gram();
    if g.rows() != gram_m.rows() || !g.is_square() || g.congruence(&gram_m)? != gram_m {
        return Err(DiscError::NotIsometry);
    }
    let br = b.to_rational();
    let b_inv = br.inverse().ok_or(DiscError::NotFiniteIndex)?;
    let ext = br.mul(&g.to_rational()).mul(&b_inv);
    Ok(match ext.to_integer() {
        Some(m) => Extension::Extended(m),
        None => Extension::NotExtendable,
    })
}

/// Whether two cyclic discriminant forms of the same order are isomorphic:
/// searches units `k` with `value(k·g₂) = value(g₁)`. Compares `q` when both
/// groups carry it, otherwise `b`.
pub fn cyclic_form_conjugate(d1: &DiscriminantGroup, d2: &DiscriminantGroup) -> Result<bool, DiscError> {
    if !d1.is_cyclic() || !d2.is_cyclic() {
        return Err(DiscError::NotCyclic);
    }
    let n1 = d1.guard()?;
    let n2 = d2.guard()?;
    if n1 != n2 {
        return Ok(false);
    }
    if n1 == 1 {
        return Ok(true);
    }
    let g1 = vec![1; d1.rank()];
    let g2 = vec![1; d2.rank()];
    let use_q = d1.has_quadratic_form() && d2.has_quadratic_form();
    if use_q {
        let target = d1.q(&g1)?;
        let base = d2.q(&g2)?;
        Ok((1..n1)
            .filter(|k| k.gcd(&n1) == 1)
            .any(|k| QmodTwoZ::new(&(base.value() * rat(k) * rat(k))) == target))
    } else {
        let target = d1.b(&g1, &g1);
        let base = d2.b(&g2, &g2);
        Ok((1..n1)
            .filter(|k| k.gcd(&n1) == 1)
            .any(|k| QmodZ::new(&(base.value() * rat(k) * rat(k))) == target))
    }
}

/// Whether two finite forms are isometric. Generators of `d1` are mapped in
/// turn to elements of `d2` with matching order and form values; compares `q`
/// when both groups carry it, otherwise `b`.
pub fn forms_isometric(d1: &DiscriminantGroup, d2: &DiscriminantGroup) -> Result<bool, DiscError> {
    if d1.order() != d2.order() {
        return Ok(false);
    }
    let use_q = d1.has_quadratic_form() && d2.has_quadratic_form();
    let targets = d2.elements()?;
    let k = d1.rank();
    let mut candidates: Vec<Vec<Element>> = Vec::with_capacity(k);
    for i in 0..k {
        let g = d1.generator(i);
        let mut c = Vec::new();
        for y in &targets {
            if d2.order_of(y) != d1.invariant_factors[i] || d2.b(y, y) != d1.b(&g, &g) {
                continue;
            }
            if use_q && d2.q(y)? != d1.q(&g)? {
                continue;
            }
            c.push(y.clone());
        }
        candidates.push(c);
    }
    let sources = d1.elements()?;
    let mut chosen: Vec<Element> = Vec::with_capacity(k);
    Ok(search_images(d1, d2, &candidates, &sources, &mut chosen))
}

fn search_images(
    d1: &DiscriminantGroup,
    d2: &DiscriminantGroup,
    candidates: &[Vec<Element>],
    sources: &[Element],
    chosen: &mut Vec<Element>,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        let mut images: Vec<Element> = sources
            .iter()
            .map(|x| {
                x.iter()
                    .zip(chosen.iter())
                    .fold(d2.zero(), |acc, (&c, y)| d2.add(&acc, &d2.scale(c, y)))
            })
            .collect();
        images.sort();
        images.dedup();
        return images.len() == sources.len();
    }
    let gi = d1.generator(i);
    for y in &candidates[i] {
        let compatible = chosen
            .iter()
            .enumerate()
            .all(|(j, z)| d2.b(y, z) == d1.b(&gi, &d1.generator(j)));
        if compatible {
            chosen.push(y.clone());
            if search_images(d1, d2, candidates, sources, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::StandardKind;

    fn two_a1() -> Lattice {
        Lattice::direct_sum(&[
            Lattice::standard(StandardKind::A1).unwrap(),
            Lattice::standard(StandardKind::A1).unwrap(),
        ])
        .unwrap()
    }

    fn half() -> QmodZ {
        QmodZ::from_ratio(1, 2)
    }

    #[test]
    fn residues_normalize() {
        assert_eq!(QmodZ::from_ratio(-18, 20), QmodZ::from_ratio(1, 10));
        assert_eq!(QmodTwoZ::from_ratio(-9, 10).to_string(), "11/10");
        assert_eq!(QmodZ::from_ratio(3, 1).to_string(), "0");
        assert_eq!("5/12".parse::<QmodZ>().unwrap(), QmodZ::from_ratio(-14, 24));
        assert!("1/0".parse::<QmodZ>().is_err());
        assert!("x".parse::<QmodTwoZ>().is_err());
    }

    #[test]
    fn two_a1_group() {
        let d = discriminant_group(&two_a1()).unwrap();
        assert_eq!(d.invariant_factors(), &[2, 2]);
        assert_eq!(
            d.bform_matrix(),
            vec![vec![half(), QmodZ::from_ratio(0, 1)], vec![QmodZ::from_ratio(0, 1), half()]]
        );
        assert_eq!(d.qform_values().unwrap(), vec![QmodTwoZ::from_ratio(1, 2); 2]);
    }

    #[test]
    fn unimodular_is_trivial() {
        let d = discriminant_group(&Lattice::standard(StandardKind::U).unwrap()).unwrap();
        assert!(d.is_trivial());
        let subs = isotropic_subgroups(&d, Isotropy::Quadratic, SubgroupConstraint::Any).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].elements(), &[Vec::<u64>::new()]);
    }

    #[test]
    fn odd_lattice_has_no_q() {
        let l = Lattice::new(IntMatrix::diagonal(&[1, 3]), None).unwrap();
        let d = discriminant_group(&l).unwrap();
        assert_eq!(d.invariant_factors(), &[3]);
        assert_eq!(d.q(&vec![1]), Err(DiscError::OddLattice));
        assert_eq!(d.b(&vec![1], &vec![1]), QmodZ::from_ratio(1, 3));
    }

    #[test]
    fn vector_classes_in_a1_sum() {
        let u = Lattice::standard(StandardKind::U).unwrap();
        let a1 = Lattice::standard(StandardKind::A1).unwrap();
        let l = Lattice::direct_sum(&[u, a1.clone(), a1]).unwrap();
        let d = discriminant_group(&l).unwrap();
        let e = l.basis_vector(2);
        let f = l.basis_vector(3);
        let ce = vector_class(&d, &l, &e).unwrap();
        let cf = vector_class(&d, &l, &f).unwrap();
        assert_eq!(d.order_of(&ce), 2);
        assert_ne!(ce, cf);
        assert_eq!(vector_class(&d, &l, &l.basis_vector(0)).unwrap(), d.zero());
        // e + 2·(u₁ + m·u₂) has divisibility 2 and the class of e.
        let w = l.vector_i64(&[2, 6, 1, 0]).unwrap();
        assert_eq!(l.divisibility(&w).unwrap(), BigInt::from(2));
        assert_eq!(vector_class(&d, &l, &w).unwrap(), ce);
        let ef = vector_class(&d, &l, &e.add(&f).unwrap()).unwrap();
        assert_eq!(ef, d.add(&ce, &cf));
        assert!(d.b(&ef, &ef).is_zero());
    }

    #[test]
    fn glue_two_a1_to_odd_unimodular() {
        let l = two_a1();
        let d = discriminant_group(&l).unwrap();
        let subs = isotropic_subgroups(&d, Isotropy::Bilinear, SubgroupConstraint::Any).unwrap();
        assert_eq!(subs.len(), 2);
        let big = subs.iter().find(|h| h.order() == 2).unwrap();
        let m = glue_overlattice(&l, &d, big, Isotropy::Bilinear).unwrap();
        assert!(m.is_unimodular());
        assert!(!m.is_even());
        assert_eq!(m.signature(), (2, 0));
        assert_eq!(
            glue_overlattice(&l, &d, big, Isotropy::Quadratic),
            Err(DiscError::NotIsotropic)
        );
        let trivial = &subs[0];
        assert_eq!(trivial.order(), 1);
        assert_eq!(glue_overlattice(&l, &d, trivial, Isotropy::Bilinear).unwrap().gram(), l.gram());
    }

    #[test]
    fn cyclic_conjugacy() {
        let a = DiscriminantGroup::cyclic_even(5, BigRational::new(2.into(), 5.into())).unwrap();
        let b = DiscriminantGroup::cyclic_even(5, BigRational::new(8.into(), 5.into())).unwrap();
        let c = DiscriminantGroup::cyclic_even(5, BigRational::new(4.into(), 5.into())).unwrap();
        assert!(cyclic_form_conjugate(&a, &a).unwrap());
        // 8/5 = 2²·2/5 mod 2.
        assert!(cyclic_form_conjugate(&a, &b).unwrap());
        // 4/5 ≡ 2k²/5 mod 2 needs k² ≡ 2 mod 5.
        assert!(!cyclic_form_conjugate(&a, &c).unwrap());
        let nc = discriminant_group(&two_a1()).unwrap();
        assert_eq!(cyclic_form_conjugate(&nc, &a), Err(DiscError::NotCyclic));
    }

    #[test]
    fn invalid_form_data() {
        let half = BigRational::new(1.into(), 2.into());
        assert!(DiscriminantGroup::from_forms(vec![2], vec![vec![half.clone()]], Some(vec![half.clone()])).is_ok());
        assert!(DiscriminantGroup::from_forms(vec![3], vec![vec![half.clone()]], None).is_err());
        assert!(DiscriminantGroup::from_forms(vec![2], vec![vec![half.clone()]], Some(vec![BigRational::zero()])).is_err());
    }

    #[test]
    fn record_roundtrip() {
        let d = discriminant_group(&two_a1()).unwrap();
        let r = d.to_record();
        assert_eq!(r.b, vec![vec!["1/2".to_string(), "0".into()], vec!["0".into(), "1/2".into()]]);
        let back = DiscriminantGroup::try_from(r.clone()).unwrap();
        assert_eq!(back.to_record(), r);
    }
}
