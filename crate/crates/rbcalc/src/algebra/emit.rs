//! Canonical JSON emission for linear combinations and series.
//!
//! The wire shape of a combination is an array of
//! `{"basis": "<canonical string>", "coeff": "<p>/<q>"}` objects sorted by
//! the basis string, so two runs of the same computation emit identical
//! bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::lincomb::{BasisElem, LinComb};
use crate::algebra::rational::{rat_parse, rat_str};
use crate::algebra::series::TruncatedSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub basis: String,
    pub coeff: String,
}

pub fn lincomb_to_json<B: BasisElem>(x: &LinComb<B>) -> Value {
    let terms: Vec<TermJson> = x
        .sorted_terms()
        .into_iter()
        .map(|(enc, _, c)| TermJson { basis: enc, coeff: rat_str(c) })
        .collect();
    serde_json::to_value(terms).expect("term serialization cannot fail")
}

/// Basis families that can be parsed back from their canonical encoding.
pub trait ParseBasis: BasisElem + Sized {
    fn parse_encoded(s: &str) -> Result<Self>;
}

pub fn lincomb_from_json<B: ParseBasis>(v: &Value) -> Result<LinComb<B>> {
    let terms: Vec<TermJson> = serde_json::from_value(v.clone())
        .map_err(|e| Error::MalformedInput(format!("bad term array: {e}")))?;
    let mut out = LinComb::zero();
    for t in terms {
        let b = B::parse_encoded(&t.basis)?;
        let c = rat_parse(&t.coeff)
            .ok_or_else(|| Error::MalformedInput(format!("bad coefficient {}", t.coeff)))?;
        out.add_term(b, c);
    }
    Ok(out)
}

pub fn series_to_json<B: BasisElem>(s: &TruncatedSeries<B>) -> Value {
    let mut parts = Vec::new();
    for d in 0..=s.cutoff() {
        parts.push(serde_json::json!({
            "degree": d,
            "terms": lincomb_to_json(s.component(d)),
        }));
    }
    serde_json::json!({ "cutoff": s.cutoff(), "components": parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct E(u32);
    impl BasisElem for E {
        fn encode(&self) -> String {
            format!("e{}", self.0)
        }
        fn degree(&self) -> usize {
            1
        }
    }
    impl ParseBasis for E {
        fn parse_encoded(s: &str) -> Result<Self> {
            s.strip_prefix('e')
                .and_then(|t| t.parse().ok())
                .map(E)
                .ok_or_else(|| Error::MalformedInput(format!("bad letter {s}")))
        }
    }

    #[test]
    fn json_round_trip() {
        let mut x = LinComb::zero();
        x.add_term(E(3), rat(5, 6));
        x.add_term(E(1), rat(-1, 2));
        let v = lincomb_to_json(&x);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"[{"basis":"e1","coeff":"-1/2"},{"basis":"e3","coeff":"5/6"}]"#
        );
        let y: LinComb<E> = lincomb_from_json(&v).unwrap();
        assert_eq!(x, y);
    }
}
