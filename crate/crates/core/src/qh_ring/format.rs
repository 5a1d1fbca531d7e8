//! Text and JSON encodings of [`QHClass`].
//!
//! Text: terms joined by `" + "`, each `coef*s[3,1]*q^2`. A coefficient of 1
//! is omitted when another factor is present, `s[..]` is omitted for the
//! empty partition and `q^1` is written `q`. The zero class is `0`.
//!
//! JSON:
//! `{"ring":{"r":2,"n":4,"area":"1"},"terms":[{"partition":[2,2],"q":0,"coef":"1"}]}`.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{QHClass, RingError, RingParams};
use crate::partitions::{Partition, PartitionError};
use crate::rational::{parse_rational, ParseRationalError};

#[derive(Debug, Error)]
pub enum ParseClassError {
    #[error("malformed term {0:?}")]
    Term(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub r: usize,
    pub n: usize,
    pub area: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub partition: Vec<usize>,
    pub q: i64,
    pub coef: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub ring: RingJson,
    pub terms: Vec<TermJson>,
}

impl From<&RingParams> for RingJson {
    fn from(ring: &RingParams) -> Self {
        RingJson {
            r: ring.r(),
            n: ring.n(),
            area: ring.area().to_string(),
        }
    }
}

impl TryFrom<&RingJson> for RingParams {
    type Error = ParseClassError;

    fn try_from(json: &RingJson) -> Result<Self, Self::Error> {
        Ok(RingParams::new(json.r, json.n, parse_rational(&json.area)?)?)
    }
}

fn format_term(partition: &Partition, q: i64, coef: &BigRational) -> String {
    let mut factors = Vec::new();
    if !partition.is_empty() {
        factors.push(format!("s[{partition}]"));
    }
    match q {
        0 => {}
        1 => factors.push("q".to_string()),
        d => factors.push(format!("q^{d}")),
    }
    if factors.is_empty() || !coef.is_one() {
        factors.insert(0, coef.to_string());
    }
    factors.join("*")
}

impl QHClass {
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(k, c)| format_term(&k.partition, k.q, c))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses the text format. Terms may repeat; they are summed. A leading
    /// `-` before `s[..]` or `q` stands for a coefficient of `-1`.
    pub fn parse_text(ring: &RingParams, text: &str) -> Result<QHClass, ParseClassError> {
        let mut out = QHClass::zero(ring);
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        for raw in text.split('+') {
            let (partition, q, coef) = parse_term(raw.trim())?;
            out.add_term(partition, q, coef)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> ClassJson {
        ClassJson {
            ring: RingJson::from(self.ring()),
            terms: self
                .terms()
                .map(|(k, c)| TermJson {
                    partition: k.partition.parts().to_vec(),
                    q: k.q,
                    coef: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json(json: &ClassJson) -> Result<QHClass, ParseClassError> {
        let ring = RingParams::try_from(&json.ring)?;
        let mut out = QHClass::zero(&ring);
        for t in &json.terms {
            let partition = Partition::new(t.partition.clone())?;
            out.add_term(partition, t.q, parse_rational(&t.coef)?)?;
        }
        Ok(out)
    }

    pub fn from_json_str(s: &str) -> Result<QHClass, ParseClassError> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

fn parse_term(term: &str) -> Result<(Partition, i64, BigRational), ParseClassError> {
    let bad = || ParseClassError::Term(term.to_string());
    if term.is_empty() {
        return Err(bad());
    }
    let mut coef: Option<BigRational> = None;
    let mut partition: Option<Partition> = None;
    let mut q: Option<i64> = None;
    let mut sign = BigRational::one();

    for (i, raw) in term.split('*').enumerate() {
        let mut factor = raw.trim();
        if i == 0 && (factor.starts_with("-s") || factor.starts_with("-q")) {
            sign = -sign;
            factor = &factor[1..];
        }
        if let Some(inner) = factor.strip_prefix("s[").and_then(|f| f.strip_suffix(']')) {
            if partition.replace(inner.parse()?).is_some() {
                return Err(bad());
            }
        } else if factor == "q" || factor.starts_with("q^") {
            let d = match factor.strip_prefix("q^") {
                Some(e) => e.trim().parse::<i64>().map_err(|_| bad())?,
                None => 1,
            };
            if q.replace(d).is_some() {
                return Err(bad());
            }
        } else if i == 0 {
            coef = Some(parse_rational(factor)?);
        } else {
            return Err(bad());
        }
    }
    let coef = coef.unwrap_or_else(BigRational::one) * sign;
    Ok((partition.unwrap_or_default(), q.unwrap_or(0), coef))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn gr24() -> RingParams {
        RingParams::grassmannian(2, 4).unwrap()
    }

    #[test]
    fn text_rendering() {
        let ring = gr24();
        let c = QHClass::from_terms(
            &ring,
            [
                (p(&[2, 2]), 0, int(1)),
                (p(&[]), 1, int(1)),
                (p(&[1]), 2, ratio(-3, 2)),
                (p(&[]), -1, int(5)),
            ],
        )
        .unwrap();
        assert_eq!(c.to_text(), "5*q^-1 + s[2,2] + q + -3/2*s[1]*q^2");
        assert_eq!(QHClass::zero(&ring).to_text(), "0");
        assert_eq!(QHClass::one(&ring).to_text(), "1");
        assert_eq!(QHClass::one(&ring).scale(&int(-1)).to_text(), "-1");
    }

    #[test]
    fn text_parsing() {
        let ring = gr24();
        let c = QHClass::parse_text(&ring, "s[2,2] + q").unwrap();
        assert_eq!(c.coefficient(&p(&[2, 2]), 0), int(1));
        assert_eq!(c.coefficient(&p(&[]), 1), int(1));

        let c = QHClass::parse_text(&ring, "-s[1] + 2*s[1] + 3/4*q^-2 + s[]").unwrap();
        assert_eq!(c.coefficient(&p(&[1]), 0), int(1));
        assert_eq!(c.coefficient(&p(&[]), -2), ratio(3, 4));
        assert_eq!(c.coefficient(&p(&[]), 0), int(1));

        assert!(QHClass::parse_text(&ring, "0").unwrap().is_zero());
        for bad in ["", "s[3]", "s[1,2]", "q*q", "x", "1*2", "s[1] +", "s[1]*s[1]"] {
            assert!(QHClass::parse_text(&ring, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_shape() {
        let ring = gr24();
        let m = QHClass::point(&ring);
        assert_eq!(
            m.to_json_string(),
            r#"{"ring":{"r":2,"n":4,"area":"1"},"terms":[{"partition":[2,2],"q":0,"coef":"1"}]}"#
        );
        assert_eq!(QHClass::from_json_str(&m.to_json_string()).unwrap(), m);
    }

    #[test]
    fn json_rejects_bad_input() {
        let outside = r#"{"ring":{"r":2,"n":4,"area":"1"},"terms":[{"partition":[3],"q":0,"coef":"1"}]}"#;
        assert!(QHClass::from_json_str(outside).is_err());
        let bad_ring = r#"{"ring":{"r":4,"n":4,"area":"1"},"terms":[]}"#;
        assert!(QHClass::from_json_str(bad_ring).is_err());
        let bad_coef = r#"{"ring":{"r":2,"n":4,"area":"1"},"terms":[{"partition":[],"q":0,"coef":"1/0"}]}"#;
        assert!(QHClass::from_json_str(bad_coef).is_err());
    }
}
