//! JSON schemas: algebra configuration and the serialized form format.
//!
//! Algebra config:
//! `{"family": "so", "p": 3, "q": 1}` or `{"family": "sl", "n": 3}`, both with
//! an optional `"sigma": [..]` list of simple-root indices generating the
//! parabolic.
//!
//! Forms: `{"p": int, "q": int, "coeffs": [[[i..], [j..], "a/b"], ..]}` with
//! strictly increasing index tuples, `(1,0)` indices before `(0,1)` indices,
//! entries in lexicographic monomial order.

use crate::error::{PfError, Result};
use crate::forms::BigradedForm;
use crate::lie::AlgebraSpec;
use crate::rational::{q_from_string, q_to_string};
use num::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum AlgebraConfig {
    So {
        p: usize,
        q: usize,
        #[serde(default)]
        sigma: Vec<usize>,
    },
    Sl {
        n: usize,
        #[serde(default)]
        sigma: Vec<usize>,
    },
}

impl AlgebraConfig {
    /// Validates and resolves to an algebra spec plus the sigma subset.
    pub fn resolve(&self) -> Result<(AlgebraSpec, Vec<usize>)> {
        match self {
            AlgebraConfig::So { p, q, sigma } => {
                if *q != 1 {
                    return Err(PfError::InvalidSpec(
                        "only Lorentzian signature q = 1 is supported for the so family".into(),
                    ));
                }
                Ok((AlgebraSpec::so(*p), sigma.clone()))
            }
            AlgebraConfig::Sl { n, sigma } => Ok((AlgebraSpec::sl(*n), sigma.clone())),
        }
    }
}

/// Serialized bigraded form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormJson {
    pub p: usize,
    pub q: usize,
    pub coeffs: Vec<(Vec<usize>, Vec<usize>, String)>,
}

impl FormJson {
    pub fn from_form(f: &BigradedForm) -> FormJson {
        FormJson {
            p: f.p,
            q: f.q,
            coeffs: f
                .coeffs
                .iter()
                .map(|((i, j), c)| (i.clone(), j.clone(), q_to_string(c)))
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<BigradedForm> {
        let mut f = BigradedForm::zero(self.p, self.q);
        for (i, j, c) in &self.coeffs {
            if i.len() != self.p || j.len() != self.q {
                return Err(PfError::InvalidSpec(format!(
                    "monomial ({:?}, {:?}) does not match bidegree ({}, {})",
                    i, j, self.p, self.q
                )));
            }
            if i.windows(2).any(|w| w[0] >= w[1]) || j.windows(2).any(|w| w[0] >= w[1]) {
                return Err(PfError::InvalidSpec(
                    "monomial index tuples must be strictly increasing".into(),
                ));
            }
            let val = q_from_string(c)
                .ok_or_else(|| PfError::InvalidSpec(format!("bad rational {:?}", c)))?;
            if val.is_zero() {
                continue;
            }
            if f.coeffs.insert((i.clone(), j.clone()), val).is_some() {
                return Err(PfError::InvalidSpec(format!(
                    "duplicate monomial ({:?}, {:?})",
                    i, j
                )));
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, qr};

    #[test]
    fn config_round_trip_and_validation() {
        let c: AlgebraConfig = serde_json::from_str(r#"{"family":"so","p":3,"q":1}"#).unwrap();
        let (spec, sigma) = c.resolve().unwrap();
        assert_eq!(spec, AlgebraSpec::so(3));
        assert!(sigma.is_empty());

        let c: AlgebraConfig =
            serde_json::from_str(r#"{"family":"sl","n":3,"sigma":[0]}"#).unwrap();
        let (spec, sigma) = c.resolve().unwrap();
        assert_eq!(spec, AlgebraSpec::sl(3));
        assert_eq!(sigma, vec![0]);

        let c: AlgebraConfig = serde_json::from_str(r#"{"family":"so","p":4,"q":2}"#).unwrap();
        assert!(c.resolve().is_err());
    }

    #[test]
    fn form_round_trip() {
        let mut f = BigradedForm::zero(1, 1);
        f.coeffs.insert((vec![0], vec![1]), qr(-3, 2));
        f.coeffs.insert((vec![2], vec![0]), qi(5));
        let json = FormJson::from_form(&f);
        let text = serde_json::to_string(&json).unwrap();
        let back: FormJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_form().unwrap(), f);
    }

    #[test]
    fn form_rejects_malformed_monomials() {
        let bad = FormJson {
            p: 2,
            q: 0,
            coeffs: vec![(vec![1, 0], vec![], "1".into())],
        };
        assert!(bad.to_form().is_err());
        let bad = FormJson { p: 1, q: 0, coeffs: vec![(vec![0, 1], vec![], "1".into())] };
        assert!(bad.to_form().is_err());
        let bad = FormJson { p: 1, q: 0, coeffs: vec![(vec![0], vec![], "x".into())] };
        assert!(bad.to_form().is_err());
    }
}
