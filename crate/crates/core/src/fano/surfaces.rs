use serde::{Deserialize, Serialize};

use super::classify::{label_from_gram, DivisorLabel};
use super::{verify, FanoError};
use crate::exactlin::{determinant, IntMatrix};

/// A surface `S ⊂ X` with `[S] = a·σ₃,₁ + b·σ₂,₂` in the Grassmannian and
/// caller-supplied invariants `K_S·σ₁|_S`, `K_S²`, `χ(𝒪_S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub a: i64,
    pub b: i64,
    pub k_dot_sigma1: i64,
    pub k_squared: i64,
    pub chi: i64,
}

impl SurfaceClass {
    pub fn new(a: i64, b: i64, k_dot_sigma1: i64, k_squared: i64, chi: i64) -> Self {
        SurfaceClass {
            a,
            b,
            k_dot_sigma1,
            k_squared,
            chi,
        }
    }
}

/// `(S)²_X = 3a + 4b + 2K_S·σ₁ + 2K_S² − 12χ`.
pub fn surface_self_intersection(s: &SurfaceClass) -> i64 {
    3 * s.a + 4 * s.b + 2 * s.k_dot_sigma1 + 2 * s.k_squared - 12 * s.chi
}

/// `d = 4(S)²_X − 2(b² + (a−b)²)`.
pub fn surface_discriminant(s: &SurfaceClass) -> i64 {
    let c = s.a - s.b;
    4 * surface_self_intersection(s) - 2 * (s.b * s.b + c * c)
}

/// Gram matrix of `⟨σ₁,₁, σ₂ − σ₁,₁, [S]⟩`, using `σ₃,₁·σ₂ = σ₂,₂·σ₁,₁ = 1`
/// and `σ₃,₁·σ₁,₁ = σ₂,₂·σ₂ = 0`.
pub fn surface_gram(s: &SurfaceClass) -> IntMatrix {
    let c = s.a - s.b;
    IntMatrix::from_rows(&[
        vec![2, 0, s.b],
        vec![0, 2, c],
        vec![s.b, c, surface_self_intersection(s)],
    ])
    .expect("3×3")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub family: String,
    /// `None` for the nodal family, whose extra class is a vanishing cycle.
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub self_int: i64,
    pub d: u64,
    pub gram: Vec<Vec<i64>>,
    pub divisor_label: DivisorLabel,
}

/// Surface invariants of the five smooth families; see the tests for their
/// derivation.
pub fn example_surfaces() -> Vec<(&'static str, SurfaceClass)> {
    vec![
        ("sigma-plane", SurfaceClass::new(1, 0, -3, 9, 1)),
        ("rho-plane", SurfaceClass::new(0, 1, -3, 9, 1)),
        ("tau-quadric", SurfaceClass::new(1, 1, -4, 8, 1)),
        ("cubic-scroll", SurfaceClass::new(2, 1, -5, 8, 1)),
        ("quintic-del-Pezzo", SurfaceClass::new(3, 2, -5, 5, 1)),
    ]
}

fn row(family: &str, a: Option<i64>, b: Option<i64>, self_int: i64, gram: IntMatrix) -> Result<ExampleRow, FanoError> {
    let det = determinant(&gram)?;
    let label = label_from_gram(&gram)?;
    verify(det == num_bigint::BigInt::from(label.d), || format!("{family}: determinant mismatch"))?;
    Ok(ExampleRow {
        family: family.to_string(),
        a,
        b,
        self_int,
        d: label.d,
        gram: gram.to_i64_rows().expect("small entries"),
        divisor_label: label,
    })
}

/// The six example families with self-intersection, discriminant and label;
/// the discriminant from the closed formula is checked against the Gram
/// determinant.
pub fn example_family_table() -> Result<Vec<ExampleRow>, FanoError> {
    let mut rows = Vec::new();
    for (name, s) in example_surfaces() {
        let r = row(name, Some(s.a), Some(s.b), surface_self_intersection(&s), surface_gram(&s))?;
        verify(r.d as i64 == surface_discriminant(&s), || format!("{name}: formula and Gram disagree"))?;
        rows.push(r);
    }
    // A node contributes a vanishing class δ with δ² = 2 orthogonal to σ₁,₁, σ₂.
    rows.push(row("nodal", None, None, 2, IntMatrix::diagonal(&[2, 2, 2]))?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        // Plane: K = −3ℓ, so K·σ₁ = −3, K² = 9, χ = 1.
        let sigma = SurfaceClass::new(1, 0, -3, 9, 1);
        assert_eq!(surface_self_intersection(&sigma), 3);
        assert_eq!(surface_discriminant(&sigma), 10);
        let rho = SurfaceClass::new(0, 1, -3, 9, 1);
        assert_eq!(surface_self_intersection(&rho), 4);
        // Quadric surface: K = −2H with H² = 2, so K·σ₁ = −4, K² = 8.
        let tau = SurfaceClass::new(1, 1, -4, 8, 1);
        assert_eq!((surface_self_intersection(&tau), surface_discriminant(&tau)), (3, 10));
        // Cubic scroll: K·H = −5 for H of degree 3, K² = 8.
        let scroll = SurfaceClass::new(2, 1, -5, 8, 1);
        assert_eq!((surface_self_intersection(&scroll), surface_discriminant(&scroll)), (4, 12));
        // Anticanonical quintic del Pezzo: K·H = −5, K² = 5.
        let quintic = SurfaceClass::new(3, 2, -5, 5, 1);
        assert_eq!((surface_self_intersection(&quintic), surface_discriminant(&quintic)), (5, 10));
    }

    #[test]
    fn table() {
        let t = example_family_table().unwrap();
        let got: Vec<(i64, u64, String)> = t.iter().map(|r| (r.self_int, r.d, r.divisor_label.to_string())).collect();
        let want = [
            (3, 10, "Dsecond_10"),
            (4, 12, "D_12"),
            (3, 10, "Dprime_10"),
            (4, 12, "D_12"),
            (5, 10, "Dsecond_10"),
            (2, 8, "D_8"),
        ];
        assert_eq!(got.len(), 6);
        for (g, w) in got.iter().zip(want) {
            assert_eq!((g.0, g.1, g.2.as_str()), w);
        }
        assert_eq!(t[5].gram, vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
    }

    #[test]
    fn degenerate_input_is_polynomial() {
        let zero = SurfaceClass::new(0, 0, 0, 0, 0);
        assert_eq!(surface_self_intersection(&zero), 0);
        assert_eq!(surface_discriminant(&zero), 0);
    }
}
