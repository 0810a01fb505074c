use serde::{Deserialize, Serialize};

use super::jordan::JordanSymbol;
use super::module::FiniteQuadraticModule;
use crate::arith::QmodZ;
use crate::error::{Error, Result};

/// How a form is named in files: a Jordan symbol, an even lattice, or the
/// module itself given by generator orders, Gram values and norms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormDescriptor {
    Jordan(String),
    Explicit { orders: Vec<u64>, gram: Vec<Vec<String>>, q: Vec<String> },
    Lattice { gram: Vec<Vec<i64>> },
}

impl FormDescriptor {
    pub fn jordan(symbol: &JordanSymbol) -> Self {
        FormDescriptor::Jordan(symbol.to_string())
    }

    /// The explicit description of `d` in its own generators.
    pub fn explicit(d: &FiniteQuadraticModule) -> Self {
        FormDescriptor::Explicit {
            orders: d.orders().to_vec(),
            gram: d.gram().iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect(),
            q: d.qvals().iter().map(|x| x.to_string()).collect(),
        }
    }

    pub fn build(&self) -> Result<FiniteQuadraticModule> {
        match self {
            FormDescriptor::Jordan(text) => Ok(FiniteQuadraticModule::from_jordan(&text.parse()?)),
            FormDescriptor::Lattice { gram } => FiniteQuadraticModule::from_even_lattice(gram),
            FormDescriptor::Explicit { orders, gram, q } => {
                let parse_row = |row: &Vec<String>| row.iter().map(|x| QmodZ::parse(x)).collect::<Result<Vec<_>>>();
                let gram = gram.iter().map(parse_row).collect::<Result<Vec<_>>>()?;
                let q = parse_row(q)?;
                let d = FiniteQuadraticModule::new(orders.clone(), gram, q)?;
                if !d.is_nondegenerate()? {
                    return Err(Error::DegenerateForm("explicit form has a nontrivial radical".into()));
                }
                Ok(d)
            }
        }
    }
}

/// A descriptor together with the module it builds.
#[derive(Clone, Debug)]
pub struct DescribedForm {
    pub descriptor: FormDescriptor,
    pub module: FiniteQuadraticModule,
}

impl DescribedForm {
    pub fn new(descriptor: FormDescriptor) -> Result<Self> {
        let module = descriptor.build()?;
        Ok(DescribedForm { descriptor, module })
    }

    pub fn explicit(module: FiniteQuadraticModule) -> Self {
        DescribedForm { descriptor: FormDescriptor::explicit(&module), module }
    }
}

impl From<&JordanSymbol> for DescribedForm {
    fn from(symbol: &JordanSymbol) -> Self {
        DescribedForm { descriptor: FormDescriptor::jordan(symbol), module: FiniteQuadraticModule::from_jordan(symbol) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let d = FiniteQuadraticModule::from_jordan(&"2^1:A+3^1:a=2".parse().unwrap());
        let desc = FormDescriptor::explicit(&d);
        let text = serde_json::to_string(&desc).unwrap();
        let back: FormDescriptor = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), d);
        let j: FormDescriptor = serde_json::from_str("\"2^1:A\"").unwrap();
        assert_eq!(j.build().unwrap().order(), 4);
        let l: FormDescriptor = serde_json::from_str(r#"{"gram": [[2, 1], [1, 2]]}"#).unwrap();
        assert_eq!(l.build().unwrap().order(), 3);
    }

    #[test]
    fn rejects_degenerate() {
        let bad = FormDescriptor::Explicit { orders: vec![2], gram: vec![vec!["0".into()]], q: vec!["0".into()] };
        assert!(bad.build().is_err());
    }
}
