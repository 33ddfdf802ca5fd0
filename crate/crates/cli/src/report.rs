//! Report types for each subcommand and their text rendering.
//!
//! JSON goes through serde; single queries are objects and tables are arrays
//! of rows, so `ExampleRow` and `TargetRow` parse back with the library types.

use std::fmt::Write as _;

use fano_lattice::discgroup::{discriminant_group, DiscriminantRecord};
use fano_lattice::fano::{
    admissible_discriminant, classify_special_sublattice, cubic_congruence_oracle, cubic_prime_criterion,
    example_family_table, has_associated_cubic, has_associated_k3, k3_congruence_oracle, k3_prime_criterion,
    th81_targets, DiscriminantCase, DivisorLabel, ExampleRow, TargetRow,
};
use fano_lattice::{IntMatrix, Lattice};
use serde::{Deserialize, Serialize};

use crate::CliError;

fn rows_i64(m: &IntMatrix) -> Result<Vec<Vec<i64>>, CliError> {
    m.to_i64_rows().ok_or_else(|| CliError::Domain("matrix entry does not fit in 64 bits".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeInfo {
    pub label: String,
    pub gram: Vec<Vec<i64>>,
    pub rank: usize,
    pub signature: (usize, usize),
    pub even: bool,
    pub unimodular: bool,
    /// Exact integer as a decimal string; signed.
    pub determinant: String,
    pub abs_determinant: String,
    pub group: String,
    pub discriminant: DiscriminantRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub divisor_label: DivisorLabel,
    /// Canonical Gram matrix of the orbit.
    pub gram: Vec<Vec<i64>>,
    /// Gram matrix in the basis `(u, v, t)` actually embedded.
    pub embedded_gram: Vec<Vec<i64>>,
    /// Ambient coordinates of `u`, `v`, `t`.
    pub basis: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub d: u64,
    pub case: DiscriminantCase,
    pub orbits: Vec<OrbitReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: bool,
    pub prime_criterion: bool,
    pub congruence_oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssocReport {
    pub d: u64,
    pub case: DiscriminantCase,
    pub k3: Verdict,
    pub cubic: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: u64,
    pub orbits: usize,
    pub labels: Vec<DivisorLabel>,
    pub k3: bool,
    pub cubic: bool,
}

pub fn group_name(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let n = factors[i];
        let run = factors[i..].iter().take_while(|&&m| m == n).count();
        parts.push(if run == 1 { format!("Z/{n}") } else { format!("(Z/{n})^{run}") });
        i += run;
    }
    parts.join(" x ")
}

pub fn lattice_info(l: &Lattice) -> Result<LatticeInfo, CliError> {
    let disc = discriminant_group(l)?;
    let det = l.determinant();
    Ok(LatticeInfo {
        label: l.label().unwrap_or_default().to_string(),
        gram: rows_i64(l.gram())?,
        rank: l.rank(),
        signature: l.signature(),
        even: l.is_even(),
        unimodular: l.is_unimodular(),
        determinant: det.to_string(),
        abs_determinant: det.magnitude().to_string(),
        group: group_name(disc.invariant_factors()),
        discriminant: disc.to_record(),
    })
}

pub fn classify(d: u64) -> Result<ClassifyReport, CliError> {
    let case = DiscriminantCase::of(d)?;
    let mut orbits = Vec::new();
    for k in classify_special_sublattice(d)? {
        orbits.push(OrbitReport {
            divisor_label: k.divisor_label,
            gram: rows_i64(&k.gram)?,
            embedded_gram: rows_i64(&k.embedded_gram())?,
            basis: rows_i64(&k.embedding.basis().transpose())?,
        });
    }
    Ok(ClassifyReport { d, case, orbits })
}

pub fn assoc(d: u64) -> Result<AssocReport, CliError> {
    let case = DiscriminantCase::of(d)?;
    Ok(AssocReport {
        d,
        case,
        k3: Verdict {
            value: has_associated_k3(d)?,
            prime_criterion: k3_prime_criterion(d)?,
            congruence_oracle: k3_congruence_oracle(d)?,
        },
        cubic: Verdict {
            value: has_associated_cubic(d)?,
            prime_criterion: cubic_prime_criterion(d)?,
            congruence_oracle: cubic_congruence_oracle(d)?,
        },
    })
}

/// One row per admissible `d ≤ d_max`; other values are skipped.
pub fn sweep(d_max: u64) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    for d in (1..=d_max).filter(|&d| admissible_discriminant(d)) {
        let orbits = classify_special_sublattice(d)?;
        rows.push(SweepRow {
            d,
            orbits: orbits.len(),
            labels: orbits.iter().map(|k| k.divisor_label).collect(),
            k3: has_associated_k3(d)?,
            cubic: has_associated_cubic(d)?,
        });
    }
    Ok(rows)
}

pub fn examples() -> Result<Vec<ExampleRow>, CliError> {
    Ok(example_family_table()?)
}

pub fn th81(e_max: i64) -> Result<Vec<TargetRow>, CliError> {
    Ok(th81_targets(e_max)?)
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let s: Vec<String> = cells.zip(&width).map(|(c, &w)| format!("{c:<w$}")).collect();
        out.push_str(s.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for r in rows {
        line(&mut r.iter().map(String::as_str));
    }
    out
}

fn matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn case_name(c: DiscriminantCase) -> &'static str {
    match c {
        DiscriminantCase::A => "a (d = 0 mod 8)",
        DiscriminantCase::B => "b (d = 2 mod 8)",
        DiscriminantCase::C => "c (d = 4 mod 8)",
    }
}

/// Text form of a report.
pub trait Render {
    fn text(&self) -> String;
}

impl Render for LatticeInfo {
    fn text(&self) -> String {
        let mut s = String::new();
        let label = if self.label.is_empty() { "-" } else { &self.label };
        let _ = writeln!(s, "label:        {label}");
        let _ = writeln!(s, "rank:         {}", self.rank);
        let _ = writeln!(s, "signature:    ({},{})", self.signature.0, self.signature.1);
        let _ = writeln!(s, "parity:       {}", if self.even { "even" } else { "odd" });
        let _ = writeln!(s, "unimodular:   {}", yes(self.unimodular));
        let _ = writeln!(s, "determinant:  {} (|det| = {})", self.determinant, self.abs_determinant);
        let _ = writeln!(s, "discriminant: {}", self.group);
        let _ = writeln!(s, "invariant factors: {:?}", self.discriminant.invariant_factors);
        if !self.discriminant.invariant_factors.is_empty() {
            s.push_str("b (mod 1):\n");
            for r in &self.discriminant.b {
                let _ = writeln!(s, "  {}", r.join("  "));
            }
            if let Some(q) = &self.discriminant.q {
                let _ = writeln!(s, "q (mod 2):\n  {}", q.join("  "));
            }
        }
        s
    }
}

impl Render for ClassifyReport {
    fn text(&self) -> String {
        let mut s = format!("d = {}, case {}, {} orbit(s)\n", self.d, case_name(self.case), self.orbits.len());
        let rows: Vec<Vec<String>> = self
            .orbits
            .iter()
            .map(|o| vec![o.divisor_label.to_string(), matrix(&o.gram), matrix(&o.embedded_gram)])
            .collect();
        s.push_str(&table(&["label", "gram", "embedded_gram"], &rows));
        for o in &self.orbits {
            let _ = writeln!(s, "{} basis (u, v, t):", o.divisor_label);
            for b in &o.basis {
                let _ = writeln!(s, "  {b:?}");
            }
        }
        s
    }
}

impl Render for AssocReport {
    fn text(&self) -> String {
        let mut s = format!("d = {}, case {}\n", self.d, case_name(self.case));
        let rows = [("K3", self.k3), ("cubic", self.cubic)]
            .iter()
            .map(|(n, v)| {
                vec![
                    n.to_string(),
                    yes(v.value).into(),
                    yes(v.prime_criterion).into(),
                    yes(v.congruence_oracle).into(),
                ]
            })
            .collect::<Vec<_>>();
        s.push_str(&table(&["associated", "value", "prime_criterion", "congruence_oracle"], &rows));
        s
    }
}

impl Render for Vec<SweepRow> {
    fn text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .iter()
            .map(|r| {
                vec![
                    r.d.to_string(),
                    r.orbits.to_string(),
                    r.labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                    yes(r.k3).into(),
                    yes(r.cubic).into(),
                ]
            })
            .collect();
        table(&["d", "orbits", "labels", "k3", "cubic"], &rows)
    }
}

impl Render for Vec<ExampleRow> {
    fn text(&self) -> String {
        let opt = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
        let rows: Vec<Vec<String>> = self
            .iter()
            .map(|r| {
                vec![
                    r.family.clone(),
                    opt(r.a),
                    opt(r.b),
                    r.self_int.to_string(),
                    r.d.to_string(),
                    r.divisor_label.to_string(),
                    matrix(&r.gram),
                ]
            })
            .collect();
        table(&["family", "a", "b", "S^2", "d", "label", "gram"], &rows)
    }
}

impl Render for Vec<TargetRow> {
    fn text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .iter()
            .map(|r| {
                vec![
                    format!("{:?}", r.family),
                    r.e.to_string(),
                    r.lattice.clone(),
                    r.d.to_string(),
                    r.divisor_label.to_string(),
                    matrix(&r.gram),
                ]
            })
            .collect();
        table(&["family", "e", "lattice", "d", "label", "gram"], &rows)
    }
}

/// Pretty JSON followed by a newline.
pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
