//! Subcommand implementations. Each returns the text to emit and an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use nlquad::analysis::geometric_grid;
use nlquad::newtoncotes::{format_over_common_denominator, format_reduced};
use nlquad::{diagonal_derivative_report, integrate, moment_series, single_step, solve_alpha, QuadError, SampledSeries};

use crate::error::{CliError, CliResult};
use crate::format::{float, row};
use crate::presets::IntegrandPreset;
use crate::rules::parse_rule;

pub const SWEEP_HEADER: [&str; 7] = ["h", "est_nl", "est_lin", "exact", "e_nl", "e_lin", "ratio"];
pub const DEFAULT_H_MIN: f64 = 1e-6;
pub const DEFAULT_H_MAX: f64 = 0.5;
pub const DEFAULT_POINTS: usize = 50;
pub const DEFAULT_PANELS: &str = "1,2,4,8,16,32,64,128,256";
/// Largest relative deviation from uniform spacing accepted in moment input.
pub const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub integrand: String,
    pub rule: String,
    pub baseline: String,
    pub h_min: f64,
    pub h_max: Option<f64>,
    pub points: usize,
    pub kappa: Option<f64>,
}

/// Single-step errors on `[a, a + h]` over a geometric grid of `h`.
pub fn sweep(args: &SweepArgs) -> CliResult<Outcome> {
    let preset = IntegrandPreset::by_name(&args.integrand)?;
    let rule = parse_rule(&args.rule, args.kappa)?;
    let baseline = parse_rule(&args.baseline, args.kappa)?;
    let width = preset.b - preset.a;
    let h_max = args.h_max.unwrap_or(DEFAULT_H_MAX.min(width));
    if !(args.h_min > 0.0 && args.h_min < h_max) {
        return Err(CliError::Config(format!(
            "need 0 < h-min < h-max, got h-min = {}, h-max = {h_max}",
            args.h_min
        )));
    }
    if h_max > width {
        return Err(CliError::Config(format!(
            "h-max = {h_max} exceeds the interval width {width} of {}",
            preset.name()
        )));
    }
    if args.points < 2 {
        return Err(CliError::Config(format!("need at least 2 points, got {}", args.points)));
    }
    let grid = geometric_grid(args.h_min, h_max, args.points)?;

    let mut out = row(SWEEP_HEADER);
    for h in grid {
        let exact = preset.integral(preset.a, preset.a + h);
        let r = single_step(|x| preset.eval(x), preset.a, h, &rule, &baseline, exact)
            .map_err(|e| CliError::Domain(format!("h = {h}: {e}")))?;
        out.push_str(&row([r.h, r.est_nl, r.est_lin, r.exact, r.e_nl, r.e_lin, r.ratio].map(float)));
    }
    Ok(Outcome::ok(out))
}

#[derive(Debug, Clone)]
pub struct ConvergeArgs {
    pub integrand: String,
    pub rules: String,
    pub panels: String,
    pub kappa: Option<f64>,
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<String>> {
    let items: Vec<String> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect();
    if items.is_empty() {
        return Err(CliError::Config(format!("{what} list is empty")));
    }
    Ok(items)
}

/// A converge cell: the estimate, or `failed` when the row could not be integrated.
pub fn estimate_cell(result: nlquad::Result<nlquad::CompositeResult>) -> String {
    match result {
        Ok(r) => float(r.value),
        Err(_) => "failed".into(),
    }
}

/// Composite estimates per panel count, one column per rule.
pub fn converge(args: &ConvergeArgs) -> CliResult<Outcome> {
    let preset = IntegrandPreset::by_name(&args.integrand)?;
    let ids = parse_list(&args.rules, "rule")?;
    let rules = ids
        .iter()
        .map(|id| parse_rule(id, args.kappa))
        .collect::<CliResult<Vec<_>>>()?;
    let panels = parse_list(&args.panels, "panel")?
        .iter()
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| CliError::Config(format!("panel count `{p}` is not a positive integer")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if panels[0] == 0 || panels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(format!(
            "panel counts must be positive and increasing, got {panels:?}"
        )));
    }

    let exact = preset.exact();
    let mut header = vec!["N".to_string()];
    header.extend(ids.iter().map(|id| format!("estimate_{id}")));
    header.push("exact".into());
    let mut out = row(&header);
    for &n in &panels {
        let mut cells = vec![n.to_string()];
        for rule in &rules {
            cells.push(estimate_cell(integrate(|x| preset.eval(x), preset.a, preset.b, n, rule, None)));
        }
        cells.push(float(exact));
        out.push_str(&row(&cells));
    }
    Ok(Outcome::ok(out))
}

/// Exact trapezoid combination and weights of the `n`-point Newton-Cotes rule.
pub fn nc_weights(n: usize) -> CliResult<Outcome> {
    let s = solve_alpha(n)?;
    let mut out = format!("n: {n}\n");
    out.push_str(&format!("alpha: {}\n", format_reduced(&s.alphas)));
    out.push_str(&format!("weights: {}\n", format_over_common_denominator(&s.weights)));
    Ok(Outcome::ok(out))
}

#[derive(Debug, Clone)]
pub struct DerivCheckArgs {
    pub rule: String,
    pub c: f64,
    pub fd_step: f64,
    pub kappa: Option<f64>,
}

/// Diagonal partial-derivative relations of a two-point rule; exit 1 on failure.
pub fn deriv_check(args: &DerivCheckArgs) -> CliResult<Outcome> {
    let rule = parse_rule(&args.rule, args.kappa)?;
    let report = diagonal_derivative_report(&rule, args.c, args.fd_step).map_err(|e| {
        if e.is_domain() {
            // a value of c outside the rule's domain is a bad argument
            CliError::Config(format!("--c {} is outside the domain of `{}`: {e}", args.c, rule.name()))
        } else {
            CliError::Quad(e)
        }
    })?;
    let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };
    let mut out = format!("rule: {}\nc: {}\nstep: {}\n", rule.name(), float(report.c), float(report.step));
    out.push_str(&format!("q: {} [{}]\n", float(report.q), verdict(report.value_ok)));
    out.push_str(&format!(
        "q10: {} q01: {} [{}]\n",
        float(report.q10),
        float(report.q01),
        verdict(report.first_order_ok)
    ));
    out.push_str(&format!(
        "q20: {} q11: {} q02: {} [{}]\n",
        float(report.q20),
        float(report.q11),
        float(report.q02),
        verdict(report.second_order_ok)
    ));
    if let Some(t) = report.third {
        out.push_str(&format!(
            "q30: {} q21: {} q12: {} q03: {} (step {}) [{}]\n",
            float(t.q30),
            float(t.q21),
            float(t.q12),
            float(t.q03),
            float(t.step),
            verdict(t.relations_ok)
        ));
    }
    let passed = report.passed();
    out.push_str(if passed { "result: pass\n" } else { "result: fail\n" });
    Ok(Outcome {
        text: out,
        code: if passed { 0 } else { 1 },
    })
}

/// Samples read from an `x,f` file, with the file line of every row.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesInput {
    pub series: SampledSeries,
    pub lines: Vec<u64>,
}

pub fn read_series(path: &Path) -> CliResult<SeriesInput> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_series(&text)
}

pub fn parse_series(text: &str) -> CliResult<SeriesInput> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| CliError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>() != ["x", "f"] {
        return Err(CliError::Parse {
            line: 1,
            message: format!("expected header `x,f`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut xs = Vec::new();
    let mut fs_ = Vec::new();
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> CliResult<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse {
                    line,
                    message: format!("{name} = `{raw}` is not a finite number"),
                })
        };
        xs.push(field(0, "x")?);
        fs_.push(field(1, "f")?);
        lines.push(line);
    }
    if xs.len() < 2 {
        return Err(CliError::Parse {
            line: lines.last().copied().unwrap_or(1),
            message: format!("need at least 2 samples, got {}", xs.len()),
        });
    }
    let m = xs.len() - 1;
    let h = (xs[m] - xs[0]) / m as f64;
    if !(h > 0.0) {
        return Err(CliError::Grid(format!("x must increase, got span {} to {}", xs[0], xs[m])));
    }
    for (k, (&x, &line)) in xs.iter().zip(&lines).enumerate() {
        let expected = xs[0] + k as f64 * h;
        if (x - expected).abs() > GRID_TOLERANCE * h {
            return Err(CliError::Grid(format!(
                "line {line}: x = {x} deviates from the uniform grid value {expected} (h = {h})"
            )));
        }
    }
    let series = SampledSeries::new(xs[0], h, fs_)?;
    Ok(SeriesInput { series, lines })
}

/// First row of panel `k` whose sample breaks the one-sign requirement.
fn offending_row(input: &SeriesInput, k: usize) -> usize {
    let f = &input.series.values;
    let reference = f.iter().copied().find(|v| *v != 0.0).unwrap_or(0.0).signum();
    [k, k + 1]
        .into_iter()
        .find(|&i| f[i] == 0.0 || f[i].signum() != reference)
        .unwrap_or(k + 1)
}

pub fn moments(input: &SeriesInput, n: u32, tail: bool) -> CliResult<Outcome> {
    let result = moment_series(&input.series, n, tail).map_err(|e| match &e {
        QuadError::Panel { index, .. } if e.is_domain() => {
            let i = offending_row(input, *index);
            CliError::Domain(format!(
                "line {} (x = {}, f = {}): {}",
                input.lines[i],
                input.series.x(i),
                input.series.values[i],
                e.root()
            ))
        }
        QuadError::Tail(_) => CliError::Domain(format!("{e}")),
        _ => CliError::Quad(e),
    })?;
    let mut out = format!("value: {}\n", float(result.value));
    out.push_str(&format!("n: {n}\n"));
    out.push_str(&format!("panels: {}\n", result.panels));
    out.push_str(&format!("h: {}\n", float(input.series.h)));
    out.push_str(&format!(
        "tail: {}\n",
        result.tail.map_or_else(|| "none".to_string(), float)
    ));
    Ok(Outcome::ok(out))
}

/// Writes to `path`, or returns the text for standard output.
pub fn emit(text: &str, path: Option<&PathBuf>) -> CliResult<Option<String>> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(text.to_string())),
    }
}
