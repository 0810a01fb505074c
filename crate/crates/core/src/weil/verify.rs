use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::ScaledMatrix;
use super::rho::{Generator, WeilRep};
use super::sl2::{random_gamma, sl2_word, Mat2};
use crate::arith::{gauss_sum, CycNum, ScaledNum};
use crate::error::Result;
use crate::fqm::FiniteQuadraticModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<serde_json::Value>,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>) -> Self {
        CheckReport { check: check.into(), status: Status::Pass, counterexample: None }
    }

    pub fn fail(check: impl Into<String>, counterexample: serde_json::Value) -> Self {
        CheckReport { check: check.into(), status: Status::Fail, counterexample: Some(counterexample) }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Compares two matrices and reports the first differing entry.
    pub fn compare(check: impl Into<String>, lhs: &ScaledMatrix, rhs: &ScaledMatrix) -> Self {
        match lhs.first_difference(rhs) {
            None => CheckReport::pass(check),
            Some((i, j)) => CheckReport::fail(
                check,
                serde_json::json!({
                    "row": i,
                    "column": j,
                    "lhs": if i < lhs.rows() && j < lhs.cols() { lhs.entry(i, j).to_string() } else { String::new() },
                    "rhs": if i < rhs.rows() && j < rhs.cols() { rhs.entry(i, j).to_string() } else { String::new() },
                    "lhs_k": lhs.k(),
                    "rhs_k": rhs.k(),
                }),
            ),
        }
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

/// `ρ(S)^4 = 1`, `(ρ(S)ρ(T))^3 = ρ(S)^2`, unitarity of both generators and
/// `c_D · Σ e(Q(γ)) = 1`.
pub fn verify_relations(d: &FiniteQuadraticModule) -> Result<Vec<CheckReport>> {
    let w = WeilRep::new(d)?;
    let s = w.generator(Generator::S);
    let t = w.generator(Generator::T);
    let id = w.identity();
    let s2 = s.mul(s)?;
    let s4 = s2.mul(&s2)?;
    let st = s.mul(t)?;
    let st3 = st.mul(&st)?.mul(&st)?;
    let mut out = vec![
        CheckReport::compare("S^4 = 1", &s4, &id),
        CheckReport::compare("(ST)^3 = S^2", &st3, &s2),
        CheckReport::compare("S unitary", &s.conj_transpose().mul(s)?, &id),
        CheckReport::compare("T unitary", &t.conj_transpose().mul(t)?, &id),
    ];
    out.push(milgram_check(d, w.signature()));
    Ok(out)
}

fn milgram_check(d: &FiniteQuadraticModule, signature: u8) -> CheckReport {
    let g = gauss_sum(d);
    let c = ScaledNum::weil_constant(signature, d.order());
    let order = c.value().order();
    let prod = c.mul(&ScaledNum::new(0, g.clone(), d.order())).unwrap();
    let sq = prod.mul(&prod).unwrap();
    let one = CycNum::one(order);
    let z = prod.embed_complex();
    if sq.k() == 0 && *sq.value() == one && z.re > 0.0 && (z.re - 1.0).abs() < 1e-6 {
        CheckReport::pass("c_D · gauss sum = 1")
    } else {
        CheckReport::fail(
            "c_D · gauss sum = 1",
            serde_json::json!({ "gauss_sum": g.to_string(), "signature": signature }),
        )
    }
}

/// `ρ(M) = 1` for `samples` seeded random `M ∈ Γ(level)`, plus the fixed
/// anchors `1` and `[[1, N], [0, 1]]`.
pub fn verify_gamma_trivial(d: &FiniteQuadraticModule, samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let w = WeilRep::new(d)?;
    let n = d.level();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mats: Vec<Mat2> = vec![[[1, 0], [0, 1]], [[1, n as i64], [0, 1]]];
    for _ in 0..samples {
        mats.push(random_gamma(n, &mut rng, 3));
    }
    let id = w.identity();
    let mut out = Vec::new();
    for m in mats {
        let word = sl2_word(m)?;
        let r = w.of_word(&word)?;
        let name = format!("rho({m:?}) = 1");
        if r == id {
            out.push(CheckReport::pass(name));
        } else {
            let diff = r.first_difference(&id).unwrap_or((0, 0));
            out.push(CheckReport::fail(
                name,
                serde_json::json!({ "matrix": m, "word_length": word.word.len(), "row": diff.0, "column": diff.1 }),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> FiniteQuadraticModule {
        FiniteQuadraticModule::from_jordan(&s.parse().unwrap())
    }

    #[test]
    fn relations_hold() {
        for sym in ["", "2^1:A", "2^1:B", "3^1:a=2+3^1:a=1", "3^1:a=1+3^1:a=1", "2^1:a=1,v=0+2^1:a=3,v=1", "5^1:a=1", "2^2:A+3^1:a=1+3^1:a=2"] {
            let reports = verify_relations(&form(sym)).unwrap();
            assert!(all_passed(&reports), "{sym}: {reports:?}");
        }
    }

    #[test]
    fn gamma_samples() {
        for sym in ["2^1:A", "3^1:a=1+3^1:a=1", "2^1:a=1,v=0+2^1:a=1,v=0"] {
            let reports = verify_gamma_trivial(&form(sym), 5, 11).unwrap();
            assert!(all_passed(&reports), "{sym}: {reports:?}");
        }
    }

    #[test]
    fn report_serializes() {
        let r = CheckReport::pass("x");
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, r#"{"check":"x","status":"pass"}"#);
        assert_eq!(serde_json::from_str::<CheckReport>(&text).unwrap(), r);
    }
}
