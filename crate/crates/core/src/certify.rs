//! Lower-bound certificates and exhaustive combinatorial checks.
//!
//! The certificate rests on one observation. Write any decomposition as
//! `Σ_t L_t²` with `L_t = Σ c_ij^(t) x_i y_j` and collect the coefficients of
//! each support cell into a vector `C_ij ∈ R^R`. Square terms force
//! `‖C_ij‖² = a_ij > 0`; cells off the support get `C = 0`. Two cells sharing
//! a row or column produce a cross monomial whose coefficient is exactly
//! `2·C_ij·C_pq`. For cells differing in both coordinates the monomial
//! `x_i x_p y_j y_q` also collects `C_iq·C_pj`, which vanishes whenever one
//! opposite corner lies off the support. If that holds for every such pair
//! (rectangle compatibility), the vectors are pairwise orthogonal and
//! nonzero, hence `R ≥ |S|`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::algebra::{support, BiquadForm, Cell, Rectangle, SupportPattern};
use crate::decompose::decompose_simple_3x3;
use crate::error::{Error, Result};
use crate::families;

/// Offending pair `((i, j), (p, q))`: `i ≠ p`, `j ≠ q`, and both
/// `(i, q)` and `(p, j)` in the support.
pub type WitnessPair = (Cell, Cell);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatReport {
    pub compatible: bool,
    pub witnesses: Vec<WitnessPair>,
}

/// Checks every unordered pair of support cells that differ in both
/// coordinates; a pair whose opposite corners are both present is a witness.
pub fn check_rectangle_compat(s: &SupportPattern) -> CompatReport {
    let cells: Vec<Cell> = s.cells().iter().copied().collect();
    let mut witnesses = Vec::new();
    for (a, &(i, j)) in cells.iter().enumerate() {
        for &(p, q) in &cells[a + 1..] {
            if i != p && j != q && s.contains((i, q)) && s.contains((p, j)) {
                witnesses.push(((i, j), (p, q)));
            }
        }
    }
    CompatReport {
        compatible: witnesses.is_empty(),
        witnesses,
    }
}

/// Rectangle compatibility of the cyclic support `{(i,i), (i,i+1 mod m)}`.
pub fn check_cyclic_support(m: usize) -> Result<CompatReport> {
    Ok(check_rectangle_compat(&support(&families::gen_cyclic(m)?)?))
}

/// Lower-bound witness for the sum-of-squares rank of a diagonal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub support: SupportPattern,
    pub compatible: bool,
    /// `|support|` when compatible, otherwise 0.
    pub lower_bound: usize,
    pub witness_pairs: Vec<WitnessPair>,
}

/// Certifies `sos(f) ≥ |support(f)|` for diagonal forms with strictly
/// positive coefficients on a rectangle-compatible support.
pub fn lower_bound(f: &BiquadForm) -> Result<RankCertificate> {
    let s = support(f)?;
    for (mono, c) in f.monomials() {
        if !c.is_positive() {
            return Err(Error::NonPositiveCoefficient(mono.i, mono.j));
        }
    }
    let report = check_rectangle_compat(&s);
    let lower_bound = if report.compatible { s.len() } else { 0 };
    Ok(RankCertificate {
        support: s,
        compatible: report.compatible,
        lower_bound,
        witness_pairs: report.witnesses,
    })
}

/// Bit of cell `(i, j)` in a `3 × 3` support mask.
pub fn bit3(i: usize, j: usize) -> u64 {
    1 << (3 * i + j)
}

/// Support mask of `P_{3,3,6}`.
pub fn p336_mask() -> u64 {
    bit3(0, 0) | bit3(1, 1) | bit3(2, 2) | bit3(0, 1) | bit3(1, 2) | bit3(2, 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaInstance {
    pub mask: u64,
    pub cells: usize,
    pub rectangle: Option<Rectangle>,
    /// Square count of the verified simple decomposition.
    pub squares: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub instances: Vec<LemmaInstance>,
    pub holds: bool,
}

impl LemmaReport {
    pub fn count(&self, cells: usize) -> usize {
        self.instances.iter().filter(|x| x.cells == cells).count()
    }
}

/// Every simple `3 × 3` support with seven or eight cells contains a full
/// rectangle, and peeling it gives at most five resp. six squares.
pub fn check_rectangle_lemma() -> Result<LemmaReport> {
    let mut instances = Vec::new();
    for mask in 0u64..512 {
        let cells = mask.count_ones() as usize;
        if !(7..=8).contains(&cells) {
            continue;
        }
        let s = SupportPattern::from_bitmask(3, 3, mask);
        let d = decompose_simple_3x3(&BiquadForm::simple(&s)?)?;
        instances.push(LemmaInstance {
            mask,
            cells,
            rectangle: s.first_rectangle(),
            squares: d.len(),
        });
    }
    let holds = instances
        .iter()
        .all(|x| x.rectangle.is_some() && x.squares <= x.cells - 2);
    Ok(LemmaReport { instances, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub mask: u64,
    pub t: usize,
    pub compatible: bool,
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub max_upper: usize,
    /// Masks where the certified lower bound meets `max_upper`.
    pub tight_at: Vec<u64>,
}

impl ScanReport {
    /// `attained_at` label: `P336` when that support is among the tight
    /// ones, otherwise the smallest tight mask.
    pub fn attained_label(&self) -> String {
        if self.tight_at.contains(&p336_mask()) {
            "P336".into()
        } else {
            self.tight_at
                .first()
                .map_or_else(|| "none".into(), |m| m.to_string())
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "max_upper={} attained_at={}",
            self.max_upper,
            self.attained_label()
        )
    }
}

/// Bounds for all 512 simple `3 × 3` supports: the upper bound is the
/// verified square count of [`decompose_simple_3x3`]; the lower bound is the
/// certificate when compatible, else the trivial 1 for nonzero forms.
pub fn scan_all_3x3_supports() -> Result<ScanReport> {
    let mut rows = Vec::with_capacity(512);
    for mask in 0u64..512 {
        let s = SupportPattern::from_bitmask(3, 3, mask);
        let f = BiquadForm::simple(&s)?;
        let upper = decompose_simple_3x3(&f)?.len();
        let cert = lower_bound(&f)?;
        let lower = if cert.compatible {
            cert.lower_bound
        } else {
            usize::from(!s.is_empty())
        };
        rows.push(ScanRow {
            mask,
            t: s.len(),
            compatible: cert.compatible,
            lower,
            upper,
        });
    }
    let max_upper = rows.iter().map(|r| r.upper).max().unwrap_or(0);
    let tight_at = rows
        .iter()
        .filter(|r| r.upper == max_upper && r.lower == max_upper)
        .map(|r| r.mask)
        .collect();
    Ok(ScanReport {
        rows,
        max_upper,
        tight_at,
    })
}

/// Where a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSource {
    /// Recomputed here from a rank certificate on an explicit form.
    Certified,
    /// Quoted from the literature.
    Cited,
}

impl BoundSource {
    pub fn name(self) -> &'static str {
        match self {
            BoundSource::Certified => "certified",
            BoundSource::Cited => "cited",
        }
    }
}

/// Known bounds on the worst-case rank for one concrete `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsEntry {
    pub m: usize,
    pub n: usize,
    pub lower: usize,
    pub lower_source: BoundSource,
    pub upper: usize,
    pub upper_source: BoundSource,
    pub exact: bool,
    pub conjectured_upper: Option<usize>,
}

/// One row of the symbolic summary table, rendered as text cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummaryRow {
    pub dims: String,
    pub lower: String,
    pub upper: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsTable {
    pub summary: Vec<SummaryRow>,
    pub grid: Vec<BoundsEntry>,
}

/// Rectangle-compatible witness with `m + n` cells for `m, n ≥ 3`.
pub fn witness_form(m: usize, n: usize) -> Result<BiquadForm> {
    if m == n {
        families::gen_cyclic(m)
    } else if m < n {
        families::gen_q(m, n)
    } else {
        Ok(families::gen_q(n, m)?.transpose())
    }
}

fn certified_lower(m: usize, n: usize) -> Result<usize> {
    let cert = lower_bound(&witness_form(m, n)?)?;
    if !cert.compatible {
        return Err(Error::Internal(format!(
            "witness form for {m}x{n} is not rectangle-compatible"
        )));
    }
    Ok(cert.lower_bound)
}

/// Bounds for a concrete `(m, n)`, both at least 2.
pub fn bsr_bounds(m: usize, n: usize) -> Result<BoundsEntry> {
    if m < 2 || n < 2 {
        return Err(Error::DimensionTooSmall(m, n));
    }
    let cited = |lower: usize, upper: usize, exact: bool| BoundsEntry {
        m,
        n,
        lower,
        lower_source: BoundSource::Cited,
        upper,
        upper_source: BoundSource::Cited,
        exact,
        conjectured_upper: None,
    };
    let big = m.max(n);
    Ok(match (m.min(n), big) {
        (2, 2) => cited(3, 3, true),
        (2, 3) => cited(4, 4, true),
        (2, _) => cited(big + 1, 2 * big - 1, false),
        _ => BoundsEntry {
            m,
            n,
            lower: certified_lower(m, n)?,
            lower_source: BoundSource::Certified,
            upper: m * n - 1,
            upper_source: BoundSource::Cited,
            exact: false,
            conjectured_upper: (m == 3 && n == 3).then_some(6),
        },
    })
}

/// The five-row summary plus the concrete grid `2..=max_m × 2..=max_n`.
///
/// The `(3,3)` lower bound is the certificate value on the cyclic form, and
/// the general `m+n` entry is emitted only after certificates on every
/// `3 ≤ m ≤ max(max_m, 3)`, `3 ≤ n ≤ max(max_n, 3)` agree with it.
pub fn bsr_bounds_table(max_m: usize, max_n: usize) -> Result<BoundsTable> {
    if max_m < 2 || max_n < 2 {
        return Err(Error::DimensionTooSmall(max_m, max_n));
    }
    let mut grid = Vec::new();
    for m in 2..=max_m {
        for n in 2..=max_n {
            grid.push(bsr_bounds(m, n)?);
        }
    }
    for m in 3..=max_m.max(3) {
        for n in 3..=max_n.max(3) {
            let got = certified_lower(m, n)?;
            if got != m + n {
                return Err(Error::Internal(format!(
                    "certificate for {m}x{n} gives {got}, expected {}",
                    m + n
                )));
            }
        }
    }
    let row = |dims: &str, lower: String, upper: &str| SummaryRow {
        dims: dims.into(),
        lower,
        upper: upper.into(),
    };
    let lower33 = certified_lower(3, 3)?;
    let summary = alloc::vec![
        row("(2,2)", "3 (exact)".into(), "3"),
        row("(3,2)", "4 (exact)".into(), "4"),
        row("(m,2), m>=4", "m+1".into(), "2m-1"),
        row("(3,3)", lower33.to_string(), "8 (conjectured 6)"),
        row("(m,n), m,n>=3", "m+n".into(), "mn-1"),
    ];
    Ok(BoundsTable { summary, grid })
}
