//! JSON file formats. Indices are 1-based on disk and 0-based in memory.

use serde::{Deserialize, Serialize};
use sosrank_core::certify::RankCertificate;
use sosrank_core::oracle::SearchResult;
use sosrank_core::{BilinearForm, BiquadForm, Monomial, Scalar, SosDecomposition};

use crate::error::CliError;

/// Integers are written as JSON numbers, everything else as a string such
/// as `"1/2*sqrt(3)"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Int(i64),
    Text(String),
}

impl CoeffJson {
    pub fn from_scalar(c: &Scalar) -> Self {
        c.to_rational()
            .filter(|q| q.is_integer())
            .and_then(|q| i64::try_from(q.to_integer()).ok())
            .map_or_else(|| CoeffJson::Text(c.to_string()), CoeffJson::Int)
    }

    pub fn to_scalar(&self) -> Result<Scalar, CliError> {
        match self {
            CoeffJson::Int(v) => Ok(Scalar::from_integer(*v)),
            CoeffJson::Text(s) => s
                .parse()
                .map_err(|e| CliError::Input(format!("coefficient {s:?}: {e}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub m: usize,
    pub n: usize,
    pub monomials: Vec<MonomialJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareJson {
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub m: usize,
    pub n: usize,
    pub squares: Vec<SquareJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub support: Vec<[usize; 2]>,
    pub compatible: bool,
    pub lower_bound: usize,
    pub witnesses: Vec<[[usize; 2]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleJson {
    pub rank: usize,
    pub best_residual: f64,
    pub success: bool,
    pub restarts_run: usize,
    /// Always `"numeric evidence"`; a failed search bounds nothing.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub factor: Option<Vec<Vec<f64>>>,
}

fn to_zero_based(v: usize, bound: usize, what: &str) -> Result<usize, CliError> {
    if v == 0 || v > bound {
        return Err(CliError::Input(format!(
            "{what} index {v} out of range 1..={bound}"
        )));
    }
    Ok(v - 1)
}

pub fn form_to_json(f: &BiquadForm) -> FormJson {
    let (m, n) = f.dims();
    FormJson {
        m,
        n,
        monomials: f
            .monomials()
            .map(|(mono, c)| MonomialJson {
                i: mono.i + 1,
                k: mono.k + 1,
                j: mono.j + 1,
                l: mono.l + 1,
                coeff: CoeffJson::from_scalar(c),
            })
            .collect(),
    }
}

pub fn form_from_json(doc: &FormJson) -> Result<BiquadForm, CliError> {
    let mut f = BiquadForm::zero(doc.m, doc.n)?;
    for t in &doc.monomials {
        let mono = Monomial::new(
            to_zero_based(t.i, doc.m, "x")?,
            to_zero_based(t.k, doc.m, "x")?,
            to_zero_based(t.j, doc.n, "y")?,
            to_zero_based(t.l, doc.n, "y")?,
        );
        f.add_term(mono, t.coeff.to_scalar()?)?;
    }
    Ok(f)
}

pub fn decomposition_to_json(d: &SosDecomposition) -> DecompositionJson {
    let (m, n) = d.target_dims();
    DecompositionJson {
        m,
        n,
        squares: d
            .squares()
            .iter()
            .map(|sq| SquareJson {
                entries: sq
                    .entries()
                    .map(|((i, j), c)| EntryJson {
                        i: i + 1,
                        j: j + 1,
                        coeff: CoeffJson::from_scalar(c),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn decomposition_from_json(doc: &DecompositionJson) -> Result<SosDecomposition, CliError> {
    let mut d = SosDecomposition::new(doc.m, doc.n);
    for sq in &doc.squares {
        let mut b = BilinearForm::zero(doc.m, doc.n);
        for e in &sq.entries {
            let cell = (
                to_zero_based(e.i, doc.m, "x")?,
                to_zero_based(e.j, doc.n, "y")?,
            );
            b.add(cell, e.coeff.to_scalar()?)?;
        }
        d.push(b)?;
    }
    Ok(d)
}

pub fn certificate_to_json(c: &RankCertificate) -> CertificateJson {
    let one = |(i, j): (usize, usize)| [i + 1, j + 1];
    CertificateJson {
        support: c.support.cells().iter().map(|&cell| one(cell)).collect(),
        compatible: c.compatible,
        lower_bound: c.lower_bound,
        witnesses: c
            .witness_pairs
            .iter()
            .map(|&(a, b)| [one(a), one(b)])
            .collect(),
    }
}

pub fn oracle_to_json(rank: usize, r: &SearchResult) -> OracleJson {
    let factor = r
        .factor
        .as_ref()
        .filter(|_| r.success)
        .map(|c| (0..c.rank()).map(|t| c.row(t).to_vec()).collect());
    OracleJson {
        rank,
        best_residual: r.best_residual,
        success: r.success,
        restarts_run: r.restarts_run,
        kind: "numeric evidence".into(),
        factor,
    }
}
