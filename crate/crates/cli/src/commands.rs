use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sosrank_core::certify::{self, BoundsTable, ScanReport};
use sosrank_core::decompose::decompose_auto;
use sosrank_core::families::{self, RectangleWeights};
use sosrank_core::oracle::{self, SearchConfig};
use sosrank_core::{BiquadForm, Rational, Rectangle};

use crate::format::{self, DecompositionJson, FormJson};
use crate::{CliError, Command, Io, Status};

pub fn dispatch(cmd: Command, io: &mut Io<'_>) -> Result<Status, CliError> {
    match cmd {
        Command::Gen { family, params } => {
            let f = generate(&family, &params)?;
            write_json_pretty(io.stdout, &format::form_to_json(&f))?;
            Ok(Status::Ok)
        }
        Command::Decompose { input, out } => decompose(input, out, io),
        Command::Verify { form, decomp } => verify(&form, &decomp, io),
        Command::Certify { input } => {
            let f = read_form(input.as_deref(), io)?;
            let cert = certify::lower_bound(&f)?;
            serde_json::to_writer(&mut *io.stdout, &format::certificate_to_json(&cert))?;
            writeln!(io.stdout)?;
            Ok(Status::Ok)
        }
        Command::Scan { out } => scan(out, io),
        Command::Oracle {
            rank,
            restarts,
            iters,
            tol,
            seed,
        } => {
            let f = read_form(None, io)?;
            let config = SearchConfig {
                rank,
                restarts,
                max_iters: iters,
                tol,
                seed,
            };
            let result = oracle::search(&f, &config)?;
            serde_json::to_writer(&mut *io.stdout, &format::oracle_to_json(rank, &result))?;
            writeln!(io.stdout)?;
            Ok(Status::Ok)
        }
        Command::Table { max_m, max_n } => {
            if max_m < 2 || max_n < 2 {
                return Err(CliError::Usage(
                    "--max-m and --max-n must be at least 2".into(),
                ));
            }
            let table = certify::bsr_bounds_table(max_m, max_n)?;
            io.stdout.write_all(render_table(&table)?.as_bytes())?;
            Ok(Status::Ok)
        }
        Command::Lemmas { max_m } => lemmas(max_m, io),
    }
}

fn usize_params(family: &str, params: &[String], expected: usize) -> Result<Vec<usize>, CliError> {
    if params.len() != expected {
        return Err(CliError::Usage(format!(
            "family {family} takes {expected} parameter(s), got {}",
            params.len()
        )));
    }
    params
        .iter()
        .map(|p| {
            p.parse().map_err(|_| {
                CliError::Usage(format!("{family}: {p:?} is not a nonnegative integer"))
            })
        })
        .collect()
}

fn rational_param(p: &str) -> Result<Rational, CliError> {
    p.parse()
        .map_err(|_| CliError::Usage(format!("{p:?} is not a rational number")))
}

fn index(v: usize) -> Result<usize, CliError> {
    v.checked_sub(1)
        .ok_or_else(|| CliError::Usage("indices are 1-based".into()))
}

/// Builds a named family from positional parameters (1-based indices).
pub fn generate(family: &str, params: &[String]) -> Result<BiquadForm, CliError> {
    let name = family.to_ascii_lowercase();
    let f = match name.as_str() {
        "p" => {
            let v = usize_params(family, params, 3)?;
            families::gen_p(v[0], v[1], v[2])?
        }
        "cyclic" => families::gen_cyclic(usize_params(family, params, 1)?[0])?,
        "q" => {
            let v = usize_params(family, params, 2)?;
            families::gen_q(v[0], v[1])?
        }
        "full" => {
            let v = usize_params(family, params, 2)?;
            families::gen_full(v[0], v[1])?
        }
        "t" => {
            let v = usize_params(family, params, 6)?;
            families::gen_t(
                v[0],
                v[1],
                index(v[2])?,
                index(v[3])?,
                index(v[4])?,
                index(v[5])?,
            )?
        }
        "w" => {
            if params.len() != 10 {
                return Err(CliError::Usage(
                    "family W takes m n i j k l a_ik a_jl a_il a_jk".into(),
                ));
            }
            let v = usize_params(family, &params[..6], 6)?;
            let a: Vec<Rational> = params[6..]
                .iter()
                .map(|p| rational_param(p))
                .collect::<Result<_, _>>()?;
            let w = RectangleWeights::new(a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone());
            let rect = Rectangle::new(index(v[2])?, index(v[3])?, index(v[4])?, index(v[5])?)?;
            families::gen_w(v[0], v[1], &w, rect)?
        }
        "pplus" | "p+" | "p_plus" => {
            usize_params(family, params, 0)?;
            families::gen_p_plus()
        }
        "diagonal" => {
            if params.len() < 2 {
                return Err(CliError::Usage(
                    "family diagonal takes m n a_11 ... a_mn".into(),
                ));
            }
            let v = usize_params(family, &params[..2], 2)?;
            let (m, n) = (v[0], v[1]);
            if params.len() != 2 + m * n {
                return Err(CliError::Usage(format!(
                    "diagonal {m} {n} needs {} coefficients, got {}",
                    m * n,
                    params.len() - 2
                )));
            }
            let coeffs: Vec<Rational> = params[2..]
                .iter()
                .map(|p| rational_param(p))
                .collect::<Result<_, _>>()?;
            let rows: Vec<Vec<Rational>> = coeffs.chunks(n.max(1)).map(<[_]>::to_vec).collect();
            families::gen_diagonal(&rows)?
        }
        _ => {
            return Err(CliError::Usage(format!(
                "unknown family {family:?} (expected P, cyclic, Q, T, W, Pplus, full, diagonal)"
            )))
        }
    };
    Ok(f)
}

fn read_json<T: DeserializeOwned>(path: Option<&Path>, io: &mut Io<'_>) -> Result<T, CliError> {
    let parsed = match path {
        Some(p) => serde_json::from_reader(BufReader::new(open(p)?)),
        None => serde_json::from_reader(&mut *io.stdin),
    };
    parsed.map_err(|e| CliError::Input(e.to_string()))
}

fn open(p: &Path) -> Result<File, CliError> {
    File::open(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
}

fn read_form(path: Option<&Path>, io: &mut Io<'_>) -> Result<BiquadForm, CliError> {
    format::form_from_json(&read_json::<FormJson>(path, io)?)
}

fn write_json_pretty<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn decompose(
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    io: &mut Io<'_>,
) -> Result<Status, CliError> {
    let f = read_form(input.as_deref(), io)?;
    let (d, strategy) = decompose_auto(&f)?;
    if !d.verify(&f)? {
        return Err(CliError::Internal(format!(
            "{} produced an unverifiable decomposition",
            strategy.name()
        )));
    }
    let doc = format::decomposition_to_json(&d);
    match out {
        Some(p) => write_json_pretty(&mut BufWriter::new(File::create(p)?), &doc)?,
        None => write_json_pretty(io.stdout, &doc)?,
    }
    writeln!(
        io.stderr,
        "strategy: {}, squares: {}",
        strategy.name(),
        d.len()
    )?;
    Ok(Status::Ok)
}

fn verify(form: &Path, decomp: &Path, io: &mut Io<'_>) -> Result<Status, CliError> {
    let f = read_form(Some(form), io)?;
    let d = format::decomposition_from_json(&read_json::<DecompositionJson>(Some(decomp), io)?)?;
    let ok = d.target_dims() == f.dims() && d.verify(&f)?;
    writeln!(io.stdout, "{}", if ok { "VERIFIED" } else { "FAILED" })?;
    Ok(if ok { Status::Ok } else { Status::Failed })
}

/// CSV body of a scan: `support_bitmask,t,lower,upper`.
pub fn scan_csv(report: &ScanReport, out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["support_bitmask", "t", "lower", "upper"])?;
    for r in &report.rows {
        w.serialize((r.mask, r.t, r.lower, r.upper))?;
    }
    w.flush()?;
    Ok(())
}

fn scan(out: Option<PathBuf>, io: &mut Io<'_>) -> Result<Status, CliError> {
    let report = certify::scan_all_3x3_supports()?;
    match out {
        Some(p) => {
            scan_csv(&report, BufWriter::new(File::create(p)?))?;
            writeln!(io.stdout, "{}", report.summary_line())?;
        }
        None => {
            scan_csv(&report, &mut *io.stdout)?;
            writeln!(io.stderr, "{}", report.summary_line())?;
        }
    }
    Ok(Status::Ok)
}

fn aligned(rows: &[[String; 3]]) -> String {
    let width = |c: usize| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0);
    let (w0, w1) = (width(0), width(1));
    let mut s = String::new();
    for (idx, r) in rows.iter().enumerate() {
        s.push_str(&format!("{:<w0$} | {:<w1$} | {}\n", r[0], r[1], r[2]));
        if idx == 0 {
            s.push_str(&format!(
                "{}-+-{}-+-{}\n",
                "-".repeat(w0),
                "-".repeat(w1),
                "-".repeat(width(2))
            ));
        }
    }
    s
}

/// Summary as CSV with header `(m,n),Lower bound,Upper bound`.
pub fn summary_csv(table: &BoundsTable) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["(m,n)", "Lower bound", "Upper bound"])?;
    for r in &table.summary {
        w.write_record([&r.dims, &r.lower, &r.upper])?;
    }
    csv_string(w)
}

/// Concrete grid as CSV.
pub fn grid_csv(table: &BoundsTable) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "m",
        "n",
        "lower",
        "lower_source",
        "upper",
        "upper_source",
        "exact",
        "conjectured_upper",
    ])?;
    for e in &table.grid {
        w.write_record([
            e.m.to_string(),
            e.n.to_string(),
            e.lower.to_string(),
            e.lower_source.name().to_string(),
            e.upper.to_string(),
            e.upper_source.name().to_string(),
            e.exact.to_string(),
            e.conjectured_upper
                .map(|c| c.to_string())
                .unwrap_or_default(),
        ])?;
    }
    csv_string(w)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Aligned summary, then the summary CSV, then the grid CSV, separated by
/// blank lines.
pub fn render_table(table: &BoundsTable) -> Result<String, CliError> {
    let mut rows = vec![[
        "(m,n)".to_string(),
        "Lower bound".into(),
        "Upper bound".into(),
    ]];
    rows.extend(
        table
            .summary
            .iter()
            .map(|r| [r.dims.clone(), r.lower.clone(), r.upper.clone()]),
    );
    Ok(format!(
        "Known bounds on BSR(m,n)\n{}\n{}\n{}",
        aligned(&rows),
        summary_csv(table)?,
        grid_csv(table)?
    ))
}

fn lemmas(max_m: usize, io: &mut Io<'_>) -> Result<Status, CliError> {
    if max_m < 3 {
        return Err(CliError::Usage("--max-m must be at least 3".into()));
    }
    let mut all = true;
    let mut line = |io: &mut Io<'_>, ok: bool, text: String| -> Result<(), CliError> {
        all &= ok;
        writeln!(io.stdout, "{} {text}", if ok { "PASS" } else { "FAIL" })?;
        Ok(())
    };

    let report = certify::check_rectangle_lemma()?;
    let (seven, eight) = (report.count(7), report.count(8));
    let worst = |cells: usize| {
        report
            .instances
            .iter()
            .filter(|x| x.cells == cells)
            .map(|x| x.squares)
            .max()
            .unwrap_or(0)
    };
    line(
        io,
        report.holds && seven == 36 && eight == 9,
        format!(
            "rectangle lemma: {seven} seven-cell and {eight} eight-cell supports contain a rectangle; \
             max squares {} and {}",
            worst(7),
            worst(8)
        ),
    )?;

    let p336 = sosrank_core::SupportPattern::from_bitmask(3, 3, certify::p336_mask());
    line(
        io,
        p336.first_rectangle().is_none(),
        "P336 support contains no rectangle".into(),
    )?;

    for m in 3..=max_m {
        let compat = certify::check_cyclic_support(m)?;
        let f = families::gen_cyclic(m)?;
        let cert = certify::lower_bound(&f)?;
        let upper = sosrank_core::decompose::decompose_singles(&f)?.len();
        line(
            io,
            compat.compatible && cert.lower_bound == 2 * m && upper == 2 * m,
            format!(
                "cyclic m={m}: compatible={}, lower_bound={}, singles={upper}",
                compat.compatible, cert.lower_bound
            ),
        )?;
    }
    Ok(if all { Status::Ok } else { Status::Failed })
}
