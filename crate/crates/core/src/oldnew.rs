//! Truncated Fourier-coefficient tables for a basis of vector-valued forms,
//! oldform detection through `ker(↓) ⊆ ker(F̃)`, and the old/new splitting
//! systems.
//!
//! Every verdict holds up to the truncation `S` of the table: only the
//! coefficients `a_{0,γ}, …, a_{S,γ}` are ever compared.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{format_rational, parse_rational, rational_text_rows, Rational};
use crate::error::{Error, Result};
use crate::fqm::{quotient, DescribedForm, FiniteQuadraticModule, FormDescriptor, Subgroup, ENUMERATION_BOUND};
use crate::lifts::{kernel_down, LiftSystem};
use crate::linalg::{kernel_rational, rank_rational};

/// Tolerance used when rationalizing inexact coefficients.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Coefficients `a_{n,γ}(F_i)` for `n = 0..=S`, stored densely as
/// `forms[i][γ][n]`.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub form: DescribedForm,
    pub weight: i64,
    pub sturm: usize,
    pub forms: Vec<Vec<Vec<Rational>>>,
    /// Set when some coefficient was read from a decimal and rationalized.
    pub float_mode: bool,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    form: FormDescriptor,
    weight: i64,
    level: u64,
    sturm: usize,
    basis: Vec<FormFile>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    float_mode: bool,
}

#[derive(Serialize, Deserialize)]
struct FormFile {
    components: BTreeMap<usize, Vec<Value>>,
}

/// Closest continued-fraction convergent within [`FLOAT_TOLERANCE`].
fn rationalize(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::validation(format!("coefficient {x} is not finite")));
    }
    let tol = FLOAT_TOLERANCE * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    loop {
        let a = y.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if (h2 as f64 / k2 as f64 - x).abs() <= tol || frac == 0.0 || k2 > 1_000_000_000_000 {
            break;
        }
        y = 1.0 / frac;
    }
    Ok(Rational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Reads one coefficient; the flag reports a rationalized decimal.
fn parse_coefficient(v: &Value) -> Result<(Rational, bool)> {
    match v {
        Value::String(s) if s.contains(['.', 'e', 'E']) && !s.contains('/') => {
            let x: f64 = s.trim().parse().map_err(|_| Error::validation(format!("malformed coefficient {s:?}")))?;
            Ok((rationalize(x)?, true))
        }
        Value::String(s) => Ok((parse_rational(s)?, false)),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok((Rational::from_integer(BigInt::from(i)), false)),
            None => Ok((rationalize(n.as_f64().unwrap_or(f64::NAN))?, true)),
        },
        other => Err(Error::validation(format!("coefficient must be a string or number, got {other}"))),
    }
}

impl CoeffTable {
    /// `m` zero forms.
    pub fn zero(form: DescribedForm, weight: i64, sturm: usize, m: usize) -> Result<Self> {
        form.module.ensure_enumerable(ENUMERATION_BOUND)?;
        let n = form.module.order() as usize;
        Ok(CoeffTable { form, weight, sturm, forms: vec![vec![vec![Rational::zero(); sturm + 1]; n]; m], float_mode: false })
    }

    pub fn module(&self) -> &FiniteQuadraticModule {
        &self.form.module
    }

    pub fn level(&self) -> u64 {
        self.form.module.level()
    }

    /// Number of basis forms `m`.
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        let form = DescribedForm::new(file.form)?;
        if file.level != form.module.level() {
            return Err(Error::validation(format!(
                "table level {} differs from the level {} of its form",
                file.level,
                form.module.level()
            )));
        }
        let mut table = CoeffTable::zero(form, file.weight, file.sturm, file.basis.len())?;
        table.float_mode = file.float_mode;
        let n = table.module().order() as usize;
        for (i, f) in file.basis.iter().enumerate() {
            for (&g, coeffs) in &f.components {
                if g >= n {
                    return Err(Error::validation(format!("form {i}: element index {g} out of range 0..{n}")));
                }
                if coeffs.len() != file.sturm + 1 {
                    return Err(Error::validation(format!(
                        "form {i}, element {g}: {} coefficients instead of {}",
                        coeffs.len(),
                        file.sturm + 1
                    )));
                }
                for (k, v) in coeffs.iter().enumerate() {
                    let (x, inexact) = parse_coefficient(v)?;
                    table.float_mode |= inexact;
                    table.forms[i][g][k] = x;
                }
            }
        }
        Ok(table)
    }

    /// JSON with only the nonzero components written out.
    pub fn to_json(&self) -> String {
        let basis = self
            .forms
            .iter()
            .map(|f| FormFile {
                components: f
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.iter().any(|x| !x.is_zero()))
                    .map(|(g, c)| (g, c.iter().map(|x| Value::String(format_rational(x))).collect()))
                    .collect(),
            })
            .collect();
        let file = TableFile {
            form: self.form.descriptor.clone(),
            weight: self.weight,
            level: self.level(),
            sturm: self.sturm,
            basis,
            float_mode: self.float_mode,
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }

    /// `Σ λ_i F_i` as `[γ][n]`.
    pub fn combination(&self, lambda: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        if lambda.len() != self.len() {
            return Err(Error::validation(format!("λ has length {} but the table has {} forms", lambda.len(), self.len())));
        }
        let mut out = vec![vec![Rational::zero(); self.sturm + 1]; self.module().order() as usize];
        for (l, f) in lambda.iter().zip(&self.forms) {
            if l.is_zero() {
                continue;
            }
            for (acc, c) in out.iter_mut().zip(f) {
                for (a, x) in acc.iter_mut().zip(c) {
                    if !x.is_zero() {
                        *a += l * x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The same data cut down to `a_{0,γ}, …, a_{s,γ}`.
    pub fn truncate(&self, s: usize) -> Result<Self> {
        if s > self.sturm {
            return Err(Error::validation(format!("cannot extend truncation {} to {s}", self.sturm)));
        }
        let mut t = self.clone();
        t.sturm = s;
        for f in t.forms.iter_mut() {
            for c in f.iter_mut() {
                c.truncate(s + 1);
            }
        }
        Ok(t)
    }
}

/// `F_γ = G_{γ+H}` on `H^⊥` and zero elsewhere.
///
/// `g` must be written over exactly the quotient `D_H` computed for `h`.
pub fn lift_table(g: &CoeffTable, d: &DescribedForm, h: &Subgroup) -> Result<CoeffTable> {
    let q = quotient(&d.module, h)?;
    if g.module() != &q.form {
        return Err(Error::validation("table form does not match the quotient D_H"));
    }
    let mut out = CoeffTable::zero(d.clone(), g.weight, g.sturm, g.len())?;
    out.float_mode = g.float_mode;
    for (f, src) in out.forms.iter_mut().zip(&g.forms) {
        for (gamma, slot) in f.iter_mut().enumerate() {
            if let Some(c) = q.class_of(gamma) {
                slot.clone_from(&src[c]);
            }
        }
    }
    Ok(out)
}

/// Classwise sums `Σ_{γ ∈ β} F_γ` over the classes `β` of `H^⊥/H`.
pub fn down_table(f: &CoeffTable, h: &Subgroup) -> Result<CoeffTable> {
    let q = quotient(f.module(), h)?;
    let form = if h.is_trivial() { f.form.clone() } else { DescribedForm::explicit(q.form.clone()) };
    let mut out = CoeffTable::zero(form, f.weight, f.sturm, f.len())?;
    out.float_mode = f.float_mode;
    for (dst, src) in out.forms.iter_mut().zip(&f.forms) {
        for (gamma, c) in src.iter().enumerate() {
            if let Some(b) = q.class_of(gamma) {
                for (a, x) in dst[b].iter_mut().zip(c) {
                    *a += x;
                }
            }
        }
    }
    Ok(out)
}

fn check_system(table: &CoeffTable, system: &LiftSystem) -> Result<()> {
    if system.base() != table.module() {
        return Err(Error::validation("lift system and table are over different forms"));
    }
    Ok(())
}

/// `Σ_γ v_γ a_{n,γ}` for `n = 0..=S`.
fn pair_kernel(v: &[Rational], f: &[Vec<Rational>], sturm: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); sturm + 1];
    for (vg, c) in v.iter().zip(f) {
        if vg.is_zero() {
            continue;
        }
        for (a, x) in out.iter_mut().zip(c) {
            if !x.is_zero() {
                *a += vg * x;
            }
        }
    }
    out
}

/// `Σ_{γ ∈ up(r)} a_{n,γ}` for every row `r` of the system.
fn class_sums(system: &LiftSystem, f: &[Vec<Rational>], sturm: usize) -> Vec<Vec<Rational>> {
    (0..system.rows())
        .map(|r| {
            let mut out = vec![Rational::zero(); sturm + 1];
            for &g in system.up_column(r) {
                for (a, x) in out.iter_mut().zip(&f[g as usize]) {
                    *a += x;
                }
            }
            out
        })
        .collect()
}

/// Whether `Σ λ_i F_i` is old with respect to the subgroups of `system`,
/// i.e. whether every `v ∈ ker(↓)` pairs to zero with its coefficients.
pub fn is_oldform(table: &CoeffTable, lambda: &[Rational], system: &LiftSystem) -> Result<bool> {
    check_system(table, system)?;
    let f = table.combination(lambda)?;
    Ok(kernel_down(system).iter().all(|v| pair_kernel(v, &f, table.sturm).iter().all(Zero::is_zero)))
}

/// Solves `Σ_i λ_i Σ_γ v_γ a_{n,γ}(F_i) = 0` over a basis of `ker(↓)`.
pub fn oldspace_basis(table: &CoeffTable, system: &LiftSystem) -> Result<Vec<Vec<Rational>>> {
    check_system(table, system)?;
    let ker = kernel_down(system);
    Ok(oldspace_from_kernel(table, &ker))
}

fn oldspace_from_kernel(table: &CoeffTable, ker: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let m = table.len();
    let cols: Vec<Vec<Vec<Rational>>> =
        table.forms.iter().map(|f| ker.iter().map(|v| pair_kernel(v, f, table.sturm)).collect()).collect();
    transpose_system(&cols, m)
}

/// Rows `(k, n)` of a system given per form `i` as `cols[i][k][n]`.
fn transpose_system(cols: &[Vec<Vec<Rational>>], m: usize) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    if let Some(first) = cols.first() {
        for k in 0..first.len() {
            for n in 0..first[k].len() {
                rows.push((0..m).map(|i| cols[i][k][n].clone()).collect::<Vec<_>>());
            }
        }
    }
    kernel_rational(&rows, m)
}

/// Solves `Σ_i λ_i Σ_{γ ∈ β} a_{n,γ}(F_i) = 0` for every class `β` of every
/// `H_l^⊥/H_l`.
pub fn newspace_basis(table: &CoeffTable, system: &LiftSystem) -> Result<Vec<Vec<Rational>>> {
    check_system(table, system)?;
    let cols: Vec<Vec<Vec<Rational>>> = table.forms.iter().map(|f| class_sums(system, f, table.sturm)).collect();
    Ok(transpose_system(&cols, table.len()))
}

/// `F̃·↑ = 0` for `F = Σ λ_i F_i`, computed with the dense matrix of `↑`.
pub fn matrix_criterion(table: &CoeffTable, lambda: &[Rational], system: &LiftSystem) -> Result<bool> {
    check_system(table, system)?;
    let f = table.combination(lambda)?;
    let up = system.up_matrix();
    for r in 0..system.rows() {
        for n in 0..=table.sturm {
            let mut s = Rational::zero();
            for (g, row) in up.iter().enumerate() {
                if row[r] != 0 && !f[g][n].is_zero() {
                    s += &f[g][n] * Rational::from_integer(BigInt::from(row[r]));
                }
            }
            if !s.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let cols = v.len();
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    rank_rational(basis, cols) == rank_rational(&with, cols)
}

/// Old and new solution spaces of a table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    #[serde(with = "rational_text_rows")]
    pub old_basis: Vec<Vec<Rational>>,
    #[serde(with = "rational_text_rows")]
    pub new_basis: Vec<Vec<Rational>>,
    pub kernel_dim: usize,
    pub truncated_at: usize,
    pub float_mode: bool,
}

pub fn split(table: &CoeffTable, system: &LiftSystem) -> Result<SplitReport> {
    check_system(table, system)?;
    let ker = kernel_down(system);
    Ok(SplitReport {
        old_basis: oldspace_from_kernel(table, &ker),
        new_basis: newspace_basis(table, system)?,
        kernel_dim: ker.len(),
        truncated_at: table.sturm,
        float_mode: table.float_mode,
    })
}
