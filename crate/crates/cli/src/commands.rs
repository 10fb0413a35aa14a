use heun_core::connection::{connection_pair, matrix_row, q2, row_domains, BranchTag, MatrixKind};
use heun_core::heun_series::{
    general_coefficients, subclass_coefficient, ArgumentMap, Center, FrobeniusSeries, HeunParams, LocalExpansion,
    LocalSolutionId, SubclassParams,
};
use heun_core::oracle::continuation::{continue_solution, seeded_path, ContinuationPath, PATH_CLEARANCE};
use heun_core::oracle::lemmas::{
    lemma1_beta_check, lemma2_check, lemma2_shift_pairs, lemma3_decay, lemma3_fitted_constant,
    lemma3_integral_check,
};
use heun_core::oracle::limits::limit_table;
use heun_core::oracle::verify::{default_samples, verify_matrix};
use heun_core::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    Branch, CoeffsArgs, Command, ConnectArgs, EvalArgs, Format, GeneralArgs, LemmaArgs, LimitArgs, ParamArgs, Rule,
    SweepArgs, VerifyArgs,
};
use crate::table::{complex_cells, Cell, Table};
use crate::wire::*;
use crate::CliError;

/// What a command produced: one JSON document and the same data as a table.
pub struct Output {
    pub json: String,
    pub table: Table,
    pub default_format: Format,
    /// Set when the report is complete but a check in it failed.
    pub failure: Option<String>,
}

impl Output {
    fn new<T: Serialize>(value: &T, table: Table, default_format: Format) -> Result<Self, CliError> {
        let json = serde_json::to_string(value).map_err(|e| CliError::Numerical(e.to_string()))?;
        Ok(Self {
            json,
            table,
            default_format,
            failure: None,
        })
    }
}

pub fn dispatch(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Coeffs(a) => coeffs(a),
        Command::Connect(a) => connect(a),
        Command::Verify(a) => verify(a),
        Command::LimitTable(a) => limits(a),
        Command::Lemmas(a) => lemmas(a),
    }
}

fn positive(flag: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{flag} must be positive and finite, got {v}")))
    }
}

fn subclass(p: &ParamArgs) -> Result<SubclassParams, CliError> {
    let s = SubclassParams::new(p.alpha, p.beta, p.gamma);
    s.admissibility()?;
    Ok(s)
}

fn general(g: &GeneralArgs, p: &ParamArgs) -> Result<Option<HeunParams>, CliError> {
    match (g.a, g.q, g.delta) {
        (Some(a), Some(q), Some(delta)) => Ok(Some(HeunParams::new(a, q, p.alpha, p.beta, p.gamma, delta)?)),
        (None, None, None) => Ok(None),
        _ => Err(CliError::Usage("--a, --q and --delta go together".into())),
    }
}

fn branch_tag(b: Option<Branch>) -> Option<BranchTag> {
    b.map(|b| match b {
        Branch::Plus => BranchTag::Plus,
        Branch::Minus => BranchTag::Minus,
    })
}

fn kinds(selector: &str) -> Result<Vec<MatrixKind>, CliError> {
    if selector.trim().eq_ignore_ascii_case("all") {
        return Ok(MatrixKind::ALL.to_vec());
    }
    selector.parse::<MatrixKind>()
        .map(|k| vec![k])
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Admissible real parameter sets with `Re(1-δ) > 0`, drawn from a fixed stream.
pub fn random_params(n: usize, seed: u64) -> Vec<SubclassParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let s = SubclassParams::real(rng.gen_range(0.1..1.5), rng.gen_range(0.1..1.5), rng.gen_range(0.3..1.7));
        if s.integer_distance() > 0.05 && (1.0 - s.delta()).re > 0.05 {
            out.push(s);
        }
    }
    out
}

/// Runs `one` on the parameter set or on a random sweep, in parallel, keeping input order.
fn sweep<T, F>(p: &ParamArgs, sw: &SweepArgs, one: F) -> Result<(Vec<T>, bool), CliError>
where
    T: Send,
    F: Fn(&SubclassParams) -> Result<T, CliError> + Sync,
{
    match sw.random {
        None => Ok((vec![one(&subclass(p)?)?], false)),
        Some(0) => Err(CliError::Usage("--random needs at least one set".into())),
        Some(n) => {
            let sets = random_params(n, sw.seed);
            let out = sets.par_iter().map(&one).collect::<Vec<_>>();
            Ok((out.into_iter().collect::<Result<Vec<_>, _>>()?, true))
        }
    }
}

fn sweep_output<T: Serialize>(
    reports: &[T],
    tables: Vec<Table>,
    tagged: bool,
    default_format: Format,
) -> Result<Output, CliError> {
    if tagged {
        let table = Table::concat(tables.into_iter().enumerate().map(|(i, t)| t.tagged(i)).collect());
        Output::new(&reports, table, default_format)
    } else {
        Output::new(&reports[0], tables.into_iter().next().unwrap_or_default(), default_format)
    }
}

fn eval_table(rows: &[EvalRow]) -> Table {
    let mut t = Table::new(&[
        "solution", "z_re", "z_im", "value_re", "value_im", "deriv_re", "deriv_im", "method", "error_bound",
    ]);
    for r in rows {
        let mut cells = vec![Cell::from(r.solution.as_str())];
        cells.extend(complex_cells(Some(unwire(r.z))));
        cells.extend(complex_cells(r.value.map(unwire)));
        cells.extend(complex_cells(r.derivative.map(unwire)));
        cells.push(Cell::from(r.method.as_str()));
        cells.push(Cell::from(r.error_bound));
        t.push(cells);
    }
    t
}

fn series_row(label: &str, local: &LocalExpansion, z: Complex64, tol: f64) -> Result<EvalRow, Error> {
    let jet = local.jet(z, tol)?;
    Ok(EvalRow {
        solution: label.to_string(),
        z: wire(z),
        value: Some(wire(jet.value)),
        derivative: Some(wire(jet.first)),
        method: "series".into(),
        error_bound: Some(jet.tail_bound),
        wronskian_drift: None,
        steps: None,
        error: None,
    })
}

fn continued_row(id: LocalSolutionId, s: &SubclassParams, path: &ContinuationPath, tol: f64) -> Result<EvalRow, Error> {
    let r = continue_solution(id, s, path, tol)?;
    Ok(EvalRow {
        solution: id.label().to_string(),
        z: wire(path.end()),
        value: Some(wire(r.value)),
        derivative: Some(wire(r.derivative)),
        method: "continuation".into(),
        error_bound: Some(r.est_error),
        wronskian_drift: Some(r.wronskian_drift),
        steps: Some(r.steps),
        error: None,
    })
}

/// Series inside the disc; outside it, continuation from a seed (finite
/// centres only).
fn eval_point(id: LocalSolutionId, s: &SubclassParams, z: Complex64, tol: f64) -> Result<EvalRow, Error> {
    let local = id.build(s)?;
    if local.contains(z) || id.center() == Center::Infinity {
        return series_row(id.label(), &local, z, tol);
    }
    continued_row(id, s, &seeded_path(id, z)?, tol)
}

fn eval(a: &EvalArgs) -> Result<Output, CliError> {
    positive("--tol", a.tol)?;
    let points = a.points.as_ref().map_or_else(|| vec![Complex64::new(0.3, 0.0)], |p| p.0.clone());
    if let Some(p) = general(&a.general, &a.params)? {
        if a.path.is_some() {
            return Err(CliError::Usage("--path is only available for the subclass solutions".into()));
        }
        if !matches!(a.solution.to_ascii_lowercase().as_str(), "y01" | "hl") {
            return Err(CliError::Usage("with --a/--q/--delta only the local Heun function (hl) is available".into()));
        }
        let local = LocalExpansion::new("hl", None, ArgumentMap::identity(), FrobeniusSeries::local_heun(p));
        let rows = points
            .par_iter()
            .map(|&z| series_row("hl", &local, z, a.tol))
            .collect::<Result<Vec<_>, _>>()?;
        let params = EvalParams {
            a: Some(wire(p.a)),
            q: Some(wire(p.q)),
            alpha: wire(p.alpha),
            beta: wire(p.beta),
            gamma: wire(p.gamma),
            delta: wire(p.delta),
        };
        let table = eval_table(&rows);
        return Output::new(&EvalReport { params, rows }, table, Format::Human);
    }

    let s = subclass(&a.params)?;
    let ids: Vec<LocalSolutionId> = if a.solution.trim().eq_ignore_ascii_case("all") {
        LocalSolutionId::ALL.to_vec()
    } else {
        vec![a.solution.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?]
    };
    let rows = if let Some(path) = &a.path {
        let [id] = ids[..] else {
            return Err(CliError::Usage("--path continues a single solution".into()));
        };
        let path = ContinuationPath::new(path.0.clone(), PATH_CLEARANCE).map_err(|e| CliError::Usage(e.to_string()))?;
        vec![continued_row(id, &s, &path, a.tol)?]
    } else {
        let tolerant = ids.len() > 1;
        let jobs: Vec<(LocalSolutionId, Complex64)> =
            ids.iter().flat_map(|&id| points.iter().map(move |&z| (id, z))).collect();
        jobs.par_iter()
            .map(|&(id, z)| match eval_point(id, &s, z, a.tol) {
                Err(e) if tolerant && !e.is_parameter_error() => Ok(EvalRow {
                    solution: id.label().to_string(),
                    z: wire(z),
                    value: None,
                    derivative: None,
                    method: "unavailable".into(),
                    error_bound: None,
                    wronskian_drift: None,
                    steps: None,
                    error: Some(e.to_string()),
                }),
                r => r,
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let params = EvalParams {
        a: None,
        q: None,
        alpha: wire(s.alpha()),
        beta: wire(s.beta()),
        gamma: wire(s.gamma()),
        delta: wire(s.delta()),
    };
    let table = eval_table(&rows);
    Output::new(&EvalReport { params, rows }, table, Format::Human)
}

fn coeffs(a: &CoeffsArgs) -> Result<Output, CliError> {
    let values = match (general(&a.general, &a.params)?, a.rule) {
        (Some(p), Rule::Recurrence) => general_coefficients(&p, a.n)?,
        (Some(_), Rule::Closed) => {
            return Err(CliError::Usage("the closed form exists only for the subclass".into()));
        }
        (None, Rule::Recurrence) => {
            general_coefficients(&SubclassParams::new(a.params.alpha, a.params.beta, a.params.gamma).heun(), a.n)?
        }
        (None, Rule::Closed) => {
            let s = SubclassParams::new(a.params.alpha, a.params.beta, a.params.gamma);
            (0..=a.n)
                .map(|k| {
                    if k % 2 == 1 {
                        Ok(Complex64::new(0.0, 0.0))
                    } else {
                        subclass_coefficient(&s, k / 2)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let rows: Vec<CoeffRow> = values
        .iter()
        .enumerate()
        .map(|(k, &v)| CoeffRow { k, value: wire(v) })
        .collect();
    let mut t = Table::new(&["k", "re", "im"]);
    for r in &rows {
        t.push(vec![Cell::from(r.k), Cell::from(r.value[0]), Cell::from(r.value[1])]);
    }
    Output::new(&rows, t, Format::Human)
}

fn connect_one(s: &SubclassParams, kinds: &[MatrixKind], branch: Option<BranchTag>) -> Result<ConnectReport, CliError> {
    s.admissibility()?;
    let (pair, pair_error) = match connection_pair(s) {
        Ok(p) => (Some(PairDto::from(&p)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let matrices = kinds
        .iter()
        .map(|&k| {
            let b = branch.unwrap_or_else(|| k.upper_half_plane_branch());
            MatrixDto::from_rows(k, b, [0, 1].map(|row| matrix_row(k, s, b, row)))
        })
        .collect();
    Ok(ConnectReport {
        params: ParamsDto::from(s),
        pair,
        pair_error,
        matrices,
    })
}

fn connect_table(r: &ConnectReport) -> Table {
    let mut t = Table::new(&["item", "branch_tag", "row", "col", "re", "im"]);
    let pair = [r.pair.as_ref().map(|p| p.c11), r.pair.as_ref().map(|p| p.c12)];
    for (col, v) in pair.iter().enumerate() {
        let mut cells = vec![Cell::from("pair"), Cell::Missing, Cell::from(1usize), Cell::from(col + 1)];
        cells.extend(complex_cells(v.map(unwire)));
        t.push(cells);
    }
    for m in &r.matrices {
        for (row, entries) in m.entries.iter().enumerate() {
            for col in 0..2 {
                let mut cells = vec![
                    Cell::from(m.kind.as_str()),
                    Cell::from(m.branch_tag.as_str()),
                    Cell::from(row + 1),
                    Cell::from(col + 1),
                ];
                cells.extend(complex_cells(entries.map(|e| unwire(e[col]))));
                t.push(cells);
            }
        }
    }
    t
}

fn connect(a: &ConnectArgs) -> Result<Output, CliError> {
    let kinds = kinds(&a.matrix)?;
    let branch = branch_tag(a.branch);
    let (reports, tagged) = sweep(&a.params, &a.sweep, |s| connect_one(s, &kinds, branch))?;
    let tables = reports.iter().map(connect_table).collect();
    sweep_output(&reports, tables, tagged, Format::Json)
}

fn verify_one(
    s: &SubclassParams,
    kinds: &[MatrixKind],
    points: Option<&[Complex64]>,
    branch: Option<BranchTag>,
    threshold: f64,
) -> Result<VerifyReport, CliError> {
    s.admissibility()?;
    let results = kinds
        .par_iter()
        .map(|&kind| -> Result<Result<Vec<CheckDto>, SkippedDto>, Error> {
            if let Some(e) = row_domains(kind, s).into_iter().find_map(|r| r.err()) {
                return Ok(Err(SkippedDto {
                    matrix: kind.label().into(),
                    reason: e.to_string(),
                }));
            }
            let samples = points.map_or_else(|| default_samples(kind), <[_]>::to_vec);
            let b = branch.unwrap_or_else(|| kind.branch_at(samples[0]));
            let report = verify_matrix(kind, s, b, &samples)?;
            Ok(Ok(report
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| CheckDto {
                    matrix: kind.label().into(),
                    branch_tag: b.label().into(),
                    row: i + 1,
                    samples: samples.len(),
                    max: r.max,
                    mean: r.mean,
                })
                .collect()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (mut checks, mut skipped) = (Vec::new(), Vec::new());
    for r in results {
        match r {
            Ok(c) => checks.extend(c),
            Err(s) => skipped.push(s),
        }
    }
    let max_residual = checks.iter().map(|c| c.max).fold(0.0, f64::max);
    Ok(VerifyReport {
        params: ParamsDto::from(s),
        pass: checks.iter().all(|c| c.max <= threshold),
        checks,
        skipped,
        max_residual,
        threshold,
    })
}

fn verify_table(r: &VerifyReport) -> Table {
    let mut t = Table::new(&["matrix", "branch_tag", "row", "samples", "max", "mean"]);
    for c in &r.checks {
        t.push(vec![
            Cell::from(c.matrix.as_str()),
            Cell::from(c.branch_tag.as_str()),
            Cell::from(c.row),
            Cell::from(c.samples),
            Cell::from(c.max),
            Cell::from(c.mean),
        ]);
    }
    t
}

fn verify(a: &VerifyArgs) -> Result<Output, CliError> {
    positive("--threshold", a.threshold)?;
    let kinds = kinds(&a.matrix)?;
    let points = a.points.as_ref().map(|p| p.0.as_slice());
    if points.is_some() && kinds.len() != 1 {
        return Err(CliError::Usage("--points needs a single --matrix".into()));
    }
    let branch = branch_tag(a.branch);
    let (reports, tagged) = sweep(&a.params, &a.sweep, |s| verify_one(s, &kinds, points, branch, a.threshold))?;
    let failed: Vec<String> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.pass)
        .map(|(i, r)| format!("set {i}: max residual {:.3e} above {:.1e}", r.max_residual, r.threshold))
        .collect();
    let tables = reports.iter().map(verify_table).collect();
    let mut out = sweep_output(&reports, tables, tagged, Format::Json)?;
    if !failed.is_empty() {
        out.failure = Some(failed.join("; "));
    }
    Ok(out)
}

fn limits(a: &LimitArgs) -> Result<Output, CliError> {
    if a.n_max < 16 {
        return Err(CliError::Usage(format!("--n-max must be at least 16, got {}", a.n_max)));
    }
    let s = subclass(&a.params)?;
    connection_pair(&s)?;
    let target = 2.0 * q2(s.alpha(), s.beta(), s.gamma())?;
    let rows: Vec<LimitRowDto> = limit_table(&s, a.n_max)?
        .iter()
        .map(|r| LimitRowDto {
            n: r.n,
            raw: wire(r.raw),
            extrapolated: r.extrapolated.map(wire),
            raw_error: r.raw_error,
            extrapolated_error: r.extrapolated_error,
        })
        .collect();
    let mut t = Table::new(&[
        "n", "raw_re", "raw_im", "extrapolated_re", "extrapolated_im", "raw_error", "extrapolated_error",
    ]);
    for r in &rows {
        let mut cells = vec![Cell::from(r.n)];
        cells.extend(complex_cells(Some(unwire(r.raw))));
        cells.extend(complex_cells(r.extrapolated.map(unwire)));
        cells.push(Cell::from(r.raw_error));
        cells.push(Cell::from(r.extrapolated_error));
        t.push(cells);
    }
    let report = LimitReport {
        params: ParamsDto::from(&s),
        target: wire(target),
        rows,
    };
    Output::new(&report, t, Format::Csv)
}

const L1_SAMPLES: usize = 10;
const L1_BOUND: f64 = 1e-10;
const L2_BOUND: f64 = 1e-2;
const L3_ALPHA: f64 = 0.3;
const L3_RHO: f64 = 1.5;
const L3_K: u32 = 60;

fn lemmas(a: &LemmaArgs) -> Result<Output, CliError> {
    let s = subclass(&a.params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let l1_args: Vec<(Complex64, Complex64)> = (0..L1_SAMPLES)
        .map(|_| {
            let x = Complex64::new(rng.gen_range(0.3..3.0), rng.gen_range(-1.0..1.0));
            let y = Complex64::new(rng.gen_range(0.3..3.0), rng.gen_range(-1.0..1.0));
            (x, y)
        })
        .collect();
    let mut rows: Vec<LemmaRow> = l1_args
        .par_iter()
        .map(|&(x, y)| {
            lemma1_beta_check(x, y).map(|c| LemmaRow {
                lemma: "beta-integral".into(),
                case: format!("x={x} y={y}"),
                value: c.gap,
                bound: L1_BOUND,
                pass: c.gap <= L1_BOUND,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (x, y) in lemma2_shift_pairs(&s) {
        let c = lemma2_check(x, y)?;
        let err = c.last_error();
        rows.push(LemmaRow {
            lemma: "gamma-ratio".into(),
            case: format!("a={x} b={y} z=80 monotone={}", c.monotone),
            value: err,
            bound: L2_BOUND,
            pass: err <= L2_BOUND && c.monotone,
        });
    }
    let alpha = Complex64::new(L3_ALPHA, 0.0);
    let l3 = lemma3_integral_check(alpha, L3_K, L3_RHO)?;
    let fitted = lemma3_fitted_constant(alpha, L3_RHO, &[20, 30, 40])?;
    let bound = 1e-6f64.max(fitted * L3_RHO.powi(-(L3_K as i32)));
    rows.push(LemmaRow {
        lemma: "power-integral".into(),
        case: format!("alpha={L3_ALPHA} k={L3_K} rho={L3_RHO}"),
        value: l3.gap,
        bound,
        pass: l3.gap <= bound,
    });
    let ks = [30, 40, 50, 60];
    let decay = lemma3_decay(alpha, L3_RHO, &ks)?;
    for (k, r) in ks[1..].iter().zip(&decay.ratios) {
        let rel = r / decay.expected_ratio;
        rows.push(LemmaRow {
            lemma: "power-integral-decay".into(),
            case: format!("gap({k})/gap({}) over rho^-10", k - 10),
            value: rel,
            bound: 1.0,
            pass: (0.5..=1.0).contains(&rel),
        });
    }
    let mut t = Table::new(&["lemma", "case", "value", "bound", "pass"]);
    for r in &rows {
        t.push(vec![
            Cell::from(r.lemma.as_str()),
            Cell::from(r.case.as_str()),
            Cell::from(r.value),
            Cell::from(r.bound),
            Cell::from(r.pass),
        ]);
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let mut out = Output::new(&rows, t, Format::Human)?;
    if failed > 0 {
        out.failure = Some(format!("{failed} lemma check(s) failed"));
    }
    Ok(out)
}
