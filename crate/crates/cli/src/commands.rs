use std::path::Path;

use ipr_core::classes::{
    detect_segmentation_with, is_first_entries, is_restricted_triangular, FirstEntriesCert,
    SegmentationCert, SegmentationMode, TriCert,
};
use ipr_core::constructors::{
    block_diag, combine_diag, compress_profile, fs, insertion, scale_row_augment, schur, vdw,
    InsertionPlan,
};
use ipr_core::infinite::{materialize, InfMatrixSpec};
use ipr_core::search::{
    find_witness, jset_find, recheck_escaping, recheck_verdict, recheck_witness, verify_at_scale,
    JsetQuery, Outcome, Verdict, VerifyParams, Witness,
};
use ipr_core::{FinMatrix, Rational, SparseRow};
use serde::{Deserialize, Serialize};

use crate::input::{self, Failure};
use crate::{Build, Command, RecheckArgs, Report, SearchArgs};

pub fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Classify { matrix, dmax } => classify(&input::matrix(&matrix)?, dmax),
        Command::Build { family } => build(family).map(|m| plain(m.to_json())),
        Command::Verify(args) => verify(&args),
        Command::Badcoloring(args) => badcoloring(&args),
        Command::Witness { matrix, coloring, xmax, strong } => {
            witness(&input::matrix(&matrix)?, &coloring, xmax, strong)
        }
        Command::Jset { set, seqs, amax, hmax } => jset(&set, &seqs, amax, hmax),
        Command::Truncate { spec, rows } => truncate(&spec, rows),
        Command::Recheck(args) => recheck(&args),
    }
}

fn plain(stdout: String) -> Report {
    Report { stdout, summary: None, code: 0 }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serialization cannot fail")
}

// classify

#[derive(Serialize)]
struct Classification {
    nrows: usize,
    ncols: usize,
    zero_rows: Vec<usize>,
    integral: bool,
    constant_row_sum: Option<Rational>,
    first_entries: Option<FirstEntriesCert>,
    monic: bool,
    /// Cuts whose blocks are all empty or first entries.
    segmentation: Option<SegmentationCert>,
    /// Cuts allowing blocks that are neither, labelled unverified.
    segmentation_lenient: Option<SegmentationCert>,
    restricted_triangular: Option<TriCert>,
}

fn classify(a: &FinMatrix, dmax: u64) -> Result<Report, Failure> {
    if dmax == 0 {
        return Err(Failure::usage("--dmax must be at least 1"));
    }
    let first_entries = is_first_entries(a);
    let segment = |mode| detect_segmentation_with(a, mode).ok().flatten();
    let report = Classification {
        nrows: a.nrows(),
        ncols: a.ncols(),
        zero_rows: (0..a.nrows()).filter(|&i| a.row(i).is_zero()).collect(),
        integral: a.is_integral(),
        constant_row_sum: a.constant_row_sum(),
        monic: first_entries.as_ref().is_some_and(FirstEntriesCert::is_monic),
        first_entries,
        segmentation: segment(SegmentationMode::Strict),
        segmentation_lenient: segment(SegmentationMode::AllowUnverified),
        // non-integer entries simply fail the test
        restricted_triangular: is_restricted_triangular(a, dmax).ok().flatten(),
    };

    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut summary = format!(
        "{}x{} matrix; first entries: {}{}; segmented: {}; restricted triangular: {}",
        report.nrows,
        report.ncols,
        yes_no(report.first_entries.is_some()),
        if report.monic { " (monic)" } else { "" },
        report.segmentation.as_ref().map_or("no".into(), |c| format!("cuts {:?}", c.alphas)),
        report.restricted_triangular.as_ref().map_or("no".into(), |c| format!("d = {}", c.d)),
    );
    if !report.zero_rows.is_empty() {
        summary.push_str(&format!("; zero rows {:?}", report.zero_rows));
    }
    Ok(Report { stdout: to_json(&report), summary: Some(summary), code: 0 })
}

// build

fn build(family: Build) -> Result<FinMatrix, Failure> {
    Ok(match family {
        Build::Schur => schur(),
        Build::Vdw { k } => vdw(k)?,
        Build::Fs { n } => fs(n)?,
        Build::Blockdiag { matrices } => block_diag(&load_all(&matrices)?)?,
        Build::Insertion { outer, inner } => {
            insertion(&InsertionPlan::new(input::matrix(&outer)?, load_all(&inner)?)?)?
        }
        Build::Compress { l, m, matrix } => compress_profile(&input::matrix(&matrix)?, l, &m)?,
        Build::Combinediag { b, matrix } => combine_diag(&input::matrix(&matrix)?, &b)?,
        Build::Augment { b, row, matrix } => {
            scale_row_augment(&parse_row(&row)?, &b, &input::matrix(&matrix)?)?
        }
    })
}

fn load_all(paths: &[impl AsRef<Path>]) -> Result<Vec<FinMatrix>, Failure> {
    paths.iter().map(|p| input::matrix(p.as_ref())).collect()
}

fn parse_row(text: &str) -> Result<SparseRow, Failure> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("--row: {e}")))?;
    Ok(SparseRow::from_dense(&values))
}

// verify and badcoloring

fn run_search(args: &SearchArgs) -> Result<(FinMatrix, Verdict), Failure> {
    let a = input::matrix(&args.matrix)?;
    if args.threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let params = VerifyParams::new(args.colors, args.universe, args.xmax)
        .strong(args.strong)
        .threads(args.threads)
        .budget(args.budget)
        .resume_from(args.resume);
    let verdict = verify_at_scale(&a, &params)?;
    if let (Some(path), Some(c)) = (&args.coloring_out, verdict.escaping()) {
        input::write(path, &c.to_json())?;
    }
    Ok((a, verdict))
}

fn describe(a: &FinMatrix, v: &Verdict) -> (String, u8) {
    let p = &v.params;
    let scope = format!(
        "{}-colorings of [1..{}] with x in [1..{}]^{}",
        p.colors,
        p.universe,
        p.xmax,
        a.ncols()
    );
    match &v.outcome {
        Outcome::ForcedAtScale { .. } => {
            (format!("forced at scale: all {} canonical {scope} have a witness", v.checked), 0)
        }
        Outcome::EscapingColoring { counter, coloring } => (
            format!(
                "escapes at scale: coloring #{counter} {:?} has no witness among {scope}; \
                 larger bounds may still find one",
                coloring.colors()
            ),
            2,
        ),
        Outcome::BudgetExhausted { resume_offset } => (
            format!(
                "budget exhausted after {} colorings; continue with --resume {resume_offset}",
                v.checked
            ),
            3,
        ),
    }
}

fn verify(args: &SearchArgs) -> Result<Report, Failure> {
    let (a, verdict) = run_search(args)?;
    let (summary, code) = describe(&a, &verdict);
    Ok(Report { stdout: verdict.to_json(), summary: Some(summary), code })
}

fn badcoloring(args: &SearchArgs) -> Result<Report, Failure> {
    let (a, verdict) = run_search(args)?;
    let (summary, code) = describe(&a, &verdict);
    let stdout = match &verdict.outcome {
        Outcome::EscapingColoring { coloring, .. } => coloring.to_json(),
        Outcome::ForcedAtScale { .. } => "none".into(),
        Outcome::BudgetExhausted { .. } => verdict.to_json(),
    };
    Ok(Report { stdout, summary: Some(summary), code })
}

// witness

fn witness(a: &FinMatrix, coloring: &Path, xmax: u64, strong: bool) -> Result<Report, Failure> {
    if xmax == 0 {
        return Err(Failure::usage("--xmax must be at least 1"));
    }
    let c = input::coloring(coloring)?;
    Ok(match find_witness(a, &c, xmax, strong) {
        Some(w) => Report {
            stdout: to_json(&w),
            summary: Some(format!(
                "witness x = {:?}, image {:?} in color {}",
                w.x, w.image, w.color
            )),
            code: 0,
        },
        None => Report {
            stdout: "none".into(),
            summary: Some(format!("no witness with x in [1..{xmax}]^{}", a.ncols())),
            code: 2,
        },
    })
}

// jset

fn jset(set: &Path, seqs: &Path, amax: u64, hmax: usize) -> Result<Report, Failure> {
    let target: Vec<i64> = input::json(set)?;
    let sequences: Vec<Vec<i64>> = input::json(seqs)?;
    if let Some(v) = target.iter().find(|&&v| v < 1) {
        return Err(Failure::data(format!("{}: member {v} is not positive", set.display())));
    }
    let query = JsetQuery::new(target, sequences, amax, hmax)?;
    Ok(match jset_find(&query) {
        Some(hit) => Report {
            summary: Some(format!("a = {}, H = {:?}", hit.a, hit.h)),
            stdout: to_json(&hit),
            code: 0,
        },
        None => Report {
            stdout: "none".into(),
            summary: Some(format!("no (a, H) with a <= {amax}, |H| <= {hmax}")),
            code: 2,
        },
    })
}

// truncate

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum Family {
    Identity,
    Fs {
        vars: Option<u32>,
    },
    Progression,
    VdwTower,
    /// A table of rows repeated with a column shift, or used once without one.
    Rows {
        rows: Vec<SparseRow>,
        shift: Option<usize>,
    },
}

fn truncate(spec: &Path, rows: usize) -> Result<Report, Failure> {
    if rows == 0 {
        return Err(Failure::usage("row count must be at least 1"));
    }
    let spec = match input::json::<Family>(spec)? {
        Family::Identity => InfMatrixSpec::identity(),
        Family::Fs { vars } => InfMatrixSpec::finite_sums(vars),
        Family::Progression => InfMatrixSpec::progression(),
        Family::VdwTower => InfMatrixSpec::vdw_tower(),
        Family::Rows { rows, shift } => {
            InfMatrixSpec::from_rows(rows, shift).map_err(|e| Failure::data(e.to_string()))?
        }
    };
    let m = materialize(&spec, rows).map_err(|e| Failure::data(e.to_string()))?;
    Ok(plain(m.to_json()))
}

// recheck

#[derive(Serialize)]
struct RecheckResult {
    valid: bool,
}

fn recheck(args: &RecheckArgs) -> Result<Report, Failure> {
    let a = input::matrix(&args.matrix)?;
    let (valid, what) = match (&args.verdict, &args.coloring, args.xmax) {
        (Some(v), _, _) => {
            let verdict: Verdict = input::json(v)?;
            (recheck_verdict(&a, &verdict), "verdict")
        }
        (None, Some(c), Some(xmax)) => {
            let c = input::coloring(c)?;
            match &args.witness {
                Some(w) => {
                    let w: Witness = input::json(w)?;
                    (recheck_witness(&a, &c, &w, Some(xmax), args.strong), "witness")
                }
                None => (recheck_escaping(&a, &c, xmax, args.strong), "escaping coloring"),
            }
        }
        _ => return Err(Failure::usage("give --verdict, or --coloring with --xmax")),
    };
    Ok(Report {
        stdout: to_json(&RecheckResult { valid }),
        summary: Some(format!("{what}: {}", if valid { "confirmed" } else { "REJECTED" })),
        code: if valid { 0 } else { 1 },
    })
}
