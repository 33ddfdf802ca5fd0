use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{verify, FanoError};
use crate::discgroup::{discriminant_group, extend_isometry, vector_class, DiscriminantGroup, Element, Extension, QmodZ};
use crate::exactlin::IntMatrix;
use crate::lattice::{Lattice, LatticeVector, StandardKind};
use crate::sublattice::SublatticeEmbedding;

/// Rank of `I₂₂,₂`; coordinates `0..22` are `e₁..e₂₂`, then `f₁, f₂`.
const RANK: usize = 24;

/// `I₂₂,₂` with `Λ₂ = ⟨u, v⟩`, its complement `Λ`, and the distinguished
/// vectors used by the constructions.
#[derive(Debug, Clone)]
pub struct AmbientModel {
    pub i222: Lattice,
    pub u: LatticeVector,
    pub v: LatticeVector,
    pub vprime: LatticeVector,
    pub lambda2: SublatticeEmbedding,
    pub lambda: SublatticeEmbedding,
    /// `Λ` as a lattice in the basis of `lambda`.
    pub lambda_lattice: Lattice,
    pub lambda_disc: DiscriminantGroup,
    pub e_vec: LatticeVector,
    pub f_vec: LatticeVector,
    pub e_class: Element,
    pub f_class: Element,
    /// A hyperbolic pair in `Λ` orthogonal to `e` and `f`.
    pub u1: LatticeVector,
    pub u2: LatticeVector,
}

fn coords(pairs: &[(usize, i64)]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); RANK];
    for &(i, x) in pairs {
        c[i] += x;
    }
    c
}

/// Vectors with one or two entries in `{±1}` and zeros elsewhere.
fn small_candidates() -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for i in 0..RANK {
        for s in [-1, 1] {
            out.push(coords(&[(i, s)]));
        }
        for j in i + 1..RANK {
            for s in [-1, 1] {
                for t in [-1, 1] {
                    out.push(coords(&[(i, s), (j, t)]));
                }
            }
        }
    }
    out
}

impl AmbientModel {
    /// Coordinates of a vector of `Λ` in the basis of `lambda`.
    pub fn to_lambda(&self, x: &LatticeVector) -> Result<LatticeVector, FanoError> {
        let c = self
            .lambda
            .coordinates_of(x)?
            .ok_or_else(|| FanoError::InvalidParameter("vector is not in Λ".into()))?;
        Ok(self.lambda_lattice.vector(c)?)
    }

    /// Ambient coordinates of a vector given in the basis of `lambda`.
    pub fn from_lambda(&self, x: &LatticeVector) -> Result<LatticeVector, FanoError> {
        Ok(self.i222.vector(self.lambda.basis().mul_vec(x.coords()))?)
    }

    /// Divisibility inside `Λ`.
    pub fn lambda_divisibility(&self, x: &LatticeVector) -> Result<BigInt, FanoError> {
        Ok(self.lambda_lattice.divisibility(&self.to_lambda(x)?)?)
    }

    /// `x⋆ ∈ D(Λ)`.
    pub fn lambda_class(&self, x: &LatticeVector) -> Result<Element, FanoError> {
        let y = self.to_lambda(x)?;
        Ok(vector_class(&self.lambda_disc, &self.lambda_lattice, &y)?)
    }

    /// `w_m = u₁ + m·u₂`, of square `2m` and divisibility 1.
    pub fn w(&self, m: i64) -> LatticeVector {
        self.u1.add(&self.u2.scale(&BigInt::from(m))).expect("same owner")
    }

    pub fn inner(&self, x: &LatticeVector, y: &LatticeVector) -> BigInt {
        self.i222.inner(x, y).expect("vectors of the model")
    }

    /// `Λ₂ ⊕ Λ` as a finite-index sublattice of `I₂₂,₂`, basis `(u, v, Λ-basis)`.
    pub fn lambda2_plus_lambda(&self) -> SublatticeEmbedding {
        let mut cols = vec![self.u.coords().to_vec(), self.v.coords().to_vec()];
        cols.extend(self.lambda.basis().columns());
        let basis = IntMatrix::from_columns(RANK, &cols).expect("columns of length 24");
        SublatticeEmbedding::new(self.i222.clone(), basis).expect("Λ₂ ⊕ Λ has full rank")
    }

    /// Matrix on the `(u, v, Λ-basis)` coordinates of `Λ₂ ⊕ Λ`: optionally
    /// swapping `u ↔ v`, and optionally applying the reflection of `Λ` that
    /// exchanges `e` and `f` and fixes `⟨e, f⟩^⊥`.
    pub fn split_isometry(&self, swap_uv: bool, swap_ef: bool) -> Result<IntMatrix, FanoError> {
        let k = self.lambda.rank();
        let mut g = IntMatrix::zeros(k + 2, k + 2);
        if swap_uv {
            g[(0, 1)] = BigInt::one();
            g[(1, 0)] = BigInt::one();
        } else {
            g[(0, 0)] = BigInt::one();
            g[(1, 1)] = BigInt::one();
        }
        let diff = self.e_vec.sub(&self.f_vec)?;
        for (j, b) in self.lambda.basis_vectors().iter().enumerate() {
            let image = if swap_ef {
                // x ↦ x − ((x·(e−f))/2)(e−f); x·e and x·f are even on Λ.
                let t = self.inner(b, &diff) / BigInt::from(2);
                b.sub(&diff.scale(&t))?
            } else {
                b.clone()
            };
            let c = self.to_lambda(&image)?;
            for (i, x) in c.coords().iter().enumerate() {
                g[(i + 2, j + 2)] = x.clone();
            }
        }
        Ok(g)
    }

    /// The involution `r_I` of `I₂₂,₂` extending `r₂ ⊕ r`.
    pub fn involution(&self) -> Result<IntMatrix, FanoError> {
        let g = self.split_isometry(true, true)?;
        match extend_isometry(&g, &self.lambda2_plus_lambda())? {
            Extension::Extended(m) => Ok(m),
            Extension::NotExtendable => Err(FanoError::InternalVerificationFailed(
                "r₂ ⊕ r does not extend to I₂₂,₂".into(),
            )),
        }
    }
}

/// Shared, lazily built model; the construction runs once per process.
pub fn ambient_model() -> Result<&'static AmbientModel, FanoError> {
    static MODEL: OnceLock<Result<AmbientModel, FanoError>> = OnceLock::new();
    MODEL.get_or_init(build_ambient_model).as_ref().map_err(Clone::clone)
}

/// Builds and verifies the model. The lifts `e`, `f` are the lexicographically
/// smallest vectors of the form `u − 2x`, `v − 2y` (with `x`, `y` having at most
/// two nonzero entries, all ±1) meeting the gluing conditions.
pub fn build_ambient_model() -> Result<AmbientModel, FanoError> {
    let i222 = Lattice::standard(StandardKind::OddUnimodular(22, 2))?.with_label("I22_2");
    let u = i222.vector(coords(&[(0, 1), (1, 1)]))?;
    let mut vp: Vec<(usize, i64)> = (0..22).map(|i| (i, 1)).collect();
    vp.extend([(22, -3), (23, -3)]);
    let vprime = i222.vector(coords(&vp))?;
    let v = vprime.sub(&u)?;
    let ip = |x: &LatticeVector, y: &LatticeVector| i222.inner(x, y).expect("same lattice");

    verify(ip(&u, &u) == BigInt::from(2), || "u² ≠ 2".into())?;
    verify(ip(&v, &v) == BigInt::from(2), || "v² ≠ 2".into())?;
    verify(ip(&u, &v).is_zero(), || "u·v ≠ 0".into())?;
    verify(i222.is_characteristic(&vprime)?, || "v′ is not characteristic".into())?;

    let lambda2 = SublatticeEmbedding::from_vectors(i222.clone(), &[u.clone(), v.clone()])?;
    verify(lambda2.is_primitive(), || "Λ₂ is not primitive".into())?;
    let lambda = lambda2.orthogonal_complement();
    let lambda_lattice = lambda.induced_lattice()?.with_label("Lambda");
    verify(lambda_lattice.is_even(), || "Λ is odd".into())?;
    verify(lambda_lattice.signature() == (20, 2), || "Λ does not have signature (20,2)".into())?;
    let lambda_disc = discriminant_group(&lambda_lattice)?;
    verify(lambda_disc.invariant_factors() == [2, 2], || "D(Λ) is not (Z/2)²".into())?;

    let candidates = small_candidates();
    let two = BigInt::from(2);
    let shifted = |base: &LatticeVector, x: &[BigInt]| -> LatticeVector {
        let c: Vec<BigInt> = base.coords().iter().zip(x).map(|(a, b)| a - &two * b).collect();
        i222.vector(c).expect("length 24")
    };
    let mut partial = AmbientModel {
        i222: i222.clone(),
        u: u.clone(),
        v: v.clone(),
        vprime,
        lambda2,
        lambda,
        lambda_lattice,
        lambda_disc,
        e_vec: u.clone(),
        f_vec: v.clone(),
        e_class: vec![],
        f_class: vec![],
        u1: u.clone(),
        u2: u.clone(),
    };
    let half = QmodZ::from_ratio(1, 2);
    let good_class = |m: &AmbientModel, x: &LatticeVector| -> Option<Element> {
        if m.lambda_divisibility(x).ok()? != two {
            return None;
        }
        let c = m.lambda_class(x).ok()?;
        (m.lambda_disc.b(&c, &c) == half).then_some(c)
    };

    let e_vec = candidates
        .iter()
        .map(|x| shifted(&u, x))
        .filter(|e| ip(e, e) == two && ip(e, &u).is_zero() && ip(e, &v).is_zero())
        .filter(|e| good_class(&partial, e).is_some())
        .min_by(|a, b| a.coords().cmp(b.coords()))
        .ok_or_else(|| FanoError::InternalVerificationFailed("no lift e found".into()))?;
    let e_class = good_class(&partial, &e_vec).expect("filtered");
    let f_vec = candidates
        .iter()
        .map(|y| shifted(&v, y))
        .filter(|f| ip(f, f) == two && ip(f, &u).is_zero() && ip(f, &v).is_zero() && ip(f, &e_vec).is_zero())
        .filter(|f| matches!(good_class(&partial, f), Some(c) if c != e_class))
        .min_by(|a, b| a.coords().cmp(b.coords()))
        .ok_or_else(|| FanoError::InternalVerificationFailed("no lift f found".into()))?;
    let f_class = good_class(&partial, &f_vec).expect("filtered");
    verify(partial.lambda_disc.b(&e_class, &f_class).is_zero(), || "b(e⋆, f⋆) ≠ 0".into())?;

    // ½(u+e), ½(v+f), ½(u+v+e+f) ∈ I₂₂,₂
    for parts in [vec![&u, &e_vec], vec![&v, &f_vec], vec![&u, &v, &e_vec, &f_vec]] {
        let sum: Vec<BigInt> = (0..RANK).map(|i| parts.iter().map(|p| &p.coords()[i]).sum()).collect();
        verify(sum.iter().all(|x| (x % &two).is_zero()), || "glue vector is not integral".into())?;
    }

    // Hyperbolic pair supported on e₄, e₅, e₆, f₁, f₂.
    let u1 = i222.vector(coords(&[(3, 1), (4, -1), (22, 1), (23, -1)]))?;
    let u2 = i222.vector(coords(&[(3, -1), (5, 1), (22, -1), (23, 1)]))?;
    for w in [&u1, &u2] {
        for other in [&u, &v, &e_vec, &f_vec] {
            verify(ip(w, other).is_zero(), || "hyperbolic pair is not orthogonal to Λ₂, e, f".into())?;
        }
        verify(ip(w, w).is_zero(), || "hyperbolic pair is not isotropic".into())?;
    }
    verify(ip(&u1, &u2).is_one(), || "u₁·u₂ ≠ 1".into())?;

    partial.e_vec = e_vec;
    partial.f_vec = f_vec;
    partial.e_class = e_class;
    partial.f_class = f_class;
    partial.u1 = u1;
    partial.u2 = u2;
    Ok(partial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::bigvec;

    #[test]
    fn model_invariants() {
        let m = build_ambient_model().unwrap();
        assert_eq!(m.i222.norm(&m.u).unwrap(), BigInt::from(2));
        assert_eq!(m.lambda_divisibility(&m.e_vec).unwrap(), BigInt::from(2));
        assert_eq!(m.lambda_divisibility(&m.f_vec).unwrap(), BigInt::from(2));
        assert_eq!(m.lambda_lattice.signature(), (20, 2));
        assert!(m.lambda_lattice.is_even());
        // Pinned lifts: e = e₂ − e₁, f = v − 2e₃.
        let mut e = vec![0i64; 24];
        e[0] = -1;
        e[1] = 1;
        assert_eq!(m.e_vec.coords(), bigvec(&e).as_slice());
        let mut f = vec![1i64; 24];
        f[0] = 0;
        f[1] = 0;
        f[2] = -1;
        f[22] = -3;
        f[23] = -3;
        assert_eq!(m.f_vec.coords(), bigvec(&f).as_slice());
    }

    #[test]
    fn w_m_properties() {
        let m = build_ambient_model().unwrap();
        for k in [-3i64, 0, 1, 7] {
            let w = m.w(k);
            assert_eq!(m.i222.norm(&w).unwrap(), BigInt::from(2 * k));
            assert_eq!(m.lambda_divisibility(&w).unwrap(), BigInt::one());
            assert_eq!(m.lambda_class(&w).unwrap(), m.lambda_disc.zero());
        }
    }

    #[test]
    fn involution_swaps_and_is_isometry() {
        let m = build_ambient_model().unwrap();
        let r = m.involution().unwrap();
        assert_eq!(r.congruence(m.i222.gram()).unwrap(), *m.i222.gram());
        assert_eq!(&r * &r, IntMatrix::identity(24));
        assert_eq!(r.mul_vec(m.u.coords()), m.v.coords());
        assert_eq!(r.mul_vec(m.e_vec.coords()), m.f_vec.coords());
    }
}
