//! JSON import/export. Coefficients are exact strings (`"1/2"`,
//! `"1/2*t^2"`), never floats; every top-level document carries
//! `"schema": 1`.

use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicSeries;
use crate::error::{Error, Result};
use crate::freelie::{LieSeries, TangentPair};
use crate::scalar::Poly;
use crate::words::{parse_word, word_to_string, LyndonWord};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub degree: usize,
    pub word: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicTermJson {
    pub degree: usize,
    pub necklace: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(default = "schema")]
    pub schema: u32,
    pub alphabet: usize,
    pub truncation: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicJson {
    #[serde(default = "schema")]
    pub schema: u32,
    pub alphabet: usize,
    pub truncation: usize,
    pub terms: Vec<CyclicTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(default = "schema")]
    pub schema: u32,
    pub beta1: SeriesJson,
    pub beta2: SeriesJson,
    /// How free unknowns were pinned, when the pair comes from the solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
}

fn schema() -> u32 {
    SCHEMA
}

fn check_schema(s: u32) -> Result<()> {
    if s != SCHEMA {
        return Err(Error::Parse(format!("unsupported schema {s}")));
    }
    Ok(())
}

fn parse_coeff(text: &str) -> Result<Poly> {
    text.parse::<Poly>()
}

pub fn series_to_json(l: &LieSeries) -> SeriesJson {
    SeriesJson {
        schema: SCHEMA,
        alphabet: l.alphabet(),
        truncation: l.truncation(),
        terms: l
            .terms()
            .map(|(w, c)| TermJson {
                degree: w.len(),
                word: w.to_string(),
                coeff: c.to_string(),
            })
            .collect(),
    }
}

pub fn series_from_json(j: &SeriesJson) -> Result<LieSeries> {
    check_schema(j.schema)?;
    let mut l = LieSeries::zero(j.alphabet, j.truncation);
    for t in &j.terms {
        let w = LyndonWord::new(parse_word(&t.word, j.alphabet)?)?;
        if w.len() != t.degree {
            return Err(Error::Parse(format!("degree {} does not match word {}", t.degree, t.word)));
        }
        l.add_term(w, &parse_coeff(&t.coeff)?);
    }
    Ok(l)
}

pub fn cyclic_to_json(c: &CyclicSeries) -> CyclicJson {
    CyclicJson {
        schema: SCHEMA,
        alphabet: c.alphabet(),
        truncation: c.truncation(),
        terms: c
            .terms()
            .map(|(w, v)| CyclicTermJson {
                degree: w.len(),
                necklace: word_to_string(w),
                coeff: v.to_string(),
            })
            .collect(),
    }
}

pub fn cyclic_from_json(j: &CyclicJson) -> Result<CyclicSeries> {
    check_schema(j.schema)?;
    let mut c = CyclicSeries::zero(j.alphabet, j.truncation);
    for t in &j.terms {
        let w = parse_word(&t.necklace, j.alphabet)?;
        if w.len() != t.degree {
            return Err(Error::Parse(format!("degree {} does not match necklace {}", t.degree, t.necklace)));
        }
        c.add_term(&w, &parse_coeff(&t.coeff)?);
    }
    Ok(c)
}

pub fn pair_to_json(p: &TangentPair, strategy: Option<&str>) -> PairJson {
    PairJson {
        schema: SCHEMA,
        beta1: series_to_json(&p.beta1),
        beta2: series_to_json(&p.beta2),
        strategy: strategy.map(str::to_string),
    }
}

pub fn pair_from_json(j: &PairJson) -> Result<TangentPair> {
    check_schema(j.schema)?;
    TangentPair::new(series_from_json(&j.beta1)?, series_from_json(&j.beta2)?)
}

pub fn read_pair(text: &str) -> Result<TangentPair> {
    let j: PairJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    pair_from_json(&j)
}

pub fn to_string_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
