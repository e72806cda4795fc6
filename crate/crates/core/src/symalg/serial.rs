//! JSON encoding of symbols.
//!
//! ```json
//! {"dim": 1, "kind": "wick",
//!  "terms": [{"b": [1], "g": [1], "re": "2/1", "im": "0/1", "re_s2": "0/1", "im_s2": "0/1"}]}
//! ```
//!
//! `re`/`im` hold the rational part of a coefficient and `re_s2`/`im_s2`
//! the part multiplying √2. Rationals are written `"p/q"` and accepted as
//! either `"p/q"` or `"p"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::coeff::{ExactCoeff, GaussRational};
use super::multi_index::MultiIndex;
use super::poly::{AntiWick, Monomial, Poly, SymbolKind, Weyl, Wick};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub b: Vec<u32>,
    pub g: Vec<u32>,
    #[serde(default = "zero_str")]
    pub re: String,
    #[serde(default = "zero_str")]
    pub im: String,
    #[serde(default = "zero_str")]
    pub re_s2: String,
    #[serde(default = "zero_str")]
    pub im_s2: String,
}

fn zero_str() -> String {
    "0/1".to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolRecord {
    pub dim: usize,
    pub kind: String,
    pub terms: Vec<TermRecord>,
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

impl SymbolRecord {
    pub fn encode<'a, I>(dim: usize, kind: &str, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a Monomial, &'a ExactCoeff)>,
    {
        let terms = terms
            .into_iter()
            .map(|(m, c)| {
                let p = c.rational_part();
                let q = c.sqrt2_part();
                TermRecord {
                    b: m.first.entries().to_vec(),
                    g: m.second.entries().to_vec(),
                    re: format_rational(&p.re),
                    im: format_rational(&p.im),
                    re_s2: format_rational(&q.re),
                    im_s2: format_rational(&q.im),
                }
            })
            .collect();
        Self { dim, kind: kind.to_string(), terms }
    }

    /// Parsed terms; repeated monomials are summed by the caller.
    pub fn decode_terms(&self) -> Result<Vec<(Monomial, ExactCoeff)>> {
        self.terms
            .iter()
            .map(|t| {
                for idx in [&t.b, &t.g] {
                    if idx.len() != self.dim {
                        return Err(Error::DimensionMismatch { expected: self.dim, found: idx.len() });
                    }
                }
                let p = GaussRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
                let q = GaussRational::new(parse_rational(&t.re_s2)?, parse_rational(&t.im_s2)?);
                Ok((
                    Monomial { first: MultiIndex::new(t.b.clone()), second: MultiIndex::new(t.g.clone()) },
                    ExactCoeff::new(p, q),
                ))
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("symbol records always serialize")
    }
}

impl<K: SymbolKind> Poly<K> {
    pub fn to_record(&self) -> SymbolRecord {
        SymbolRecord::encode(self.dim(), K::TAG, self.terms())
    }

    pub fn from_record(rec: &SymbolRecord) -> Result<Self> {
        if rec.kind != K::TAG {
            return Err(Error::Malformed(format!("expected a {:?} symbol, found kind {:?}", K::TAG, rec.kind)));
        }
        Poly::from_terms(rec.dim, rec.decode_terms()?)
    }

    pub fn to_json(&self) -> String {
        self.to_record().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_record(&SymbolRecord::from_json(text)?)
    }
}

/// A symbol of any kind, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySymbol {
    Wick(Poly<Wick>),
    Weyl(Poly<Weyl>),
    AntiWick(Poly<AntiWick>),
}

impl AnySymbol {
    pub fn from_json(text: &str) -> Result<Self> {
        let rec = SymbolRecord::from_json(text)?;
        match rec.kind.as_str() {
            "wick" => Ok(Self::Wick(Poly::from_record(&rec)?)),
            "weyl" => Ok(Self::Weyl(Poly::from_record(&rec)?)),
            "aw" => Ok(Self::AntiWick(Poly::from_record(&rec)?)),
            other => Err(Error::Malformed(format!("unknown symbol kind {other:?}"))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Wick(_) => Wick::TAG,
            Self::Weyl(_) => Weyl::TAG,
            Self::AntiWick(_) => AntiWick::TAG,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Wick(p) => p.dim(),
            Self::Weyl(p) => p.dim(),
            Self::AntiWick(p) => p.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::coeff::rat;
    use crate::symalg::poly::{WeylSymbol, WickSymbol};

    #[test]
    fn round_trip_is_exact() {
        let c = ExactCoeff::new(
            GaussRational::new(rat(-3, 7), rat(5, 1)),
            GaussRational::new(rat(1, 2), rat(0, 1)),
        );
        let p = &WickSymbol::zw(2, [1, 0], [0, 2], c) + &WickSymbol::one(2);
        let text = p.to_json();
        assert!(text.contains("\"5/1\""));
        assert_eq!(WickSymbol::from_json(&text).unwrap(), p);
    }

    #[test]
    fn bare_integers_are_accepted() {
        let text = r#"{"dim":1,"kind":"weyl","terms":[{"b":[2],"g":[0],"re":"1"},{"b":[0],"g":[2],"re":"-1"}]}"#;
        let p = WeylSymbol::from_json(text).unwrap();
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn kind_and_shape_are_checked() {
        let text = r#"{"dim":1,"kind":"weyl","terms":[]}"#;
        assert!(WickSymbol::from_json(text).is_err());
        let text = r#"{"dim":2,"kind":"wick","terms":[{"b":[1],"g":[0,0],"re":"1"}]}"#;
        assert!(matches!(WickSymbol::from_json(text), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_rational("1/0"), Err(Error::Malformed(_))));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn any_symbol_dispatches_on_kind() {
        let text = r#"{"dim":1,"kind":"aw","terms":[{"b":[1],"g":[1],"re":"1/1"}]}"#;
        let s = AnySymbol::from_json(text).unwrap();
        assert_eq!(s.kind(), "aw");
        assert!(AnySymbol::from_json(r#"{"dim":1,"kind":"nope","terms":[]}"#).is_err());
    }
}
