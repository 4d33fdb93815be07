//! Command-line front end for `lie-matrix`.
//!
//! [`dispatch`] parses an argument vector and returns the exit status with
//! everything that should go to standard output. Exit statuses: 0 success,
//! 1 malformed input, 2 undefined operation, 3 divergence where convergence
//! was required.

pub mod goldens;
pub mod specs;

use std::f64::consts::PI;

use clap::{Args, Parser, Subcommand};
use lie_matrix::convergence::{report_to_json, Classification, EntryProbeReport, JunctionReport, ProbeParams};
use lie_matrix::scalar::parse_rational;
use lie_matrix::{
    adjoint_family, adjoint_handle, adjoint_mu_check, associativity_demo, carleman_embed, circle_cover_extend,
    circle_generator_matrix, compose, entry_series_probe, find_pivot_rows, gamma_probe, invert, latent_product_report,
    lul_decompose, plu_decompose, sigma_determinants, BlockInjection, CoveredPoint, Junction, PermutationSpec,
};
use serde_json::{json, Value};

pub use specs::CliError;

#[derive(Parser, Debug)]
#[command(name = "lie-matrix", version, about = "Exact Carleman matrices, gamma-invertibility and local group demos")]
pub struct Cli {
    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Leading block of the Carleman matrix of a series.
    Embed {
        #[command(flatten)]
        series: SeriesArg,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Composite `outer ∘ inner` of two series.
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Compositional inverse of a series.
    Invert {
        #[command(flatten)]
        series: SeriesArg,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// PLU factorization of a leading block.
    Plu {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Leading minors along row and column permutations.
    Sigmadet {
        #[arg(long)]
        matrix: String,
        /// Number of minors.
        #[arg(long, default_value_t = 6)]
        count: usize,
        /// Row permutation prefix, e.g. `2,3,1`.
        #[arg(long)]
        rows: Option<String>,
        #[arg(long)]
        cols: Option<String>,
        /// Block sizes prefix, strictly increasing.
        #[arg(long)]
        beta: Option<String>,
        /// Choose rows by pivot search over this many rows.
        #[arg(long)]
        pivot_budget: Option<usize>,
    },
    /// Look for linear dependencies among the leading rows and columns.
    GammaProbe {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Rows (and columns) examined; defaults to twice `n`.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Translation-isotropy-translation factorization of a series.
    Latent {
        #[command(flatten)]
        series: SeriesArg,
        /// Probe every junction on this window.
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Probe one entry of a product of two infinite matrices.
    Probe {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Worked scenarios.
    #[command(subcommand)]
    Demo(Demo),
    /// Transcribed matrix fixtures.
    #[command(subcommand)]
    Goldens(Goldens),
}

#[derive(Args, Debug)]
pub struct SeriesArg {
    /// Builtin series: identity, geometric, h, ln1p, expm1, translation:<q>.
    #[arg(long, conflicts_with = "series", required_unless_present = "series")]
    pub builtin: Option<String>,
    /// Series JSON file `{"base_point": "0", "coeffs": [...]}`.
    #[arg(long)]
    pub series: Option<String>,
}

impl SeriesArg {
    fn spec(&self) -> &str {
        self.builtin.as_deref().or(self.series.as_deref()).expect("clap enforces one of the two")
    }
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long, default_value_t = 64)]
    pub k_max: usize,
    /// Trailing window examined for the verdict.
    #[arg(long = "trail", default_value_t = 16)]
    pub trail: usize,
    /// Divergence floor, a rational.
    #[arg(long, default_value = "1")]
    pub floor: String,
    /// Exit with status 3 when divergence is detected.
    #[arg(long)]
    pub require_convergence: bool,
}

impl ProbeArgs {
    fn params(&self) -> Result<ProbeParams, CliError> {
        Ok(ProbeParams { k_max: self.k_max, window: self.trail, floor: parse_rational(&self.floor)? })
    }
}

#[derive(Subcommand, Debug)]
pub enum Demo {
    /// Rotation matrices through the exponential chart.
    Circle {
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Comma-separated steps to multiply, each inside the certified arc.
        #[arg(long, allow_negative_numbers = true)]
        arc: Option<String>,
    },
    /// The adjoint-deformed one-parameter group.
    Adjoint {
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Rational parameter for the gamma probe.
        #[arg(long, default_value = "1", allow_negative_numbers = true)]
        t: String,
    },
    /// Both bracketings of a triangle product on the covering.
    Olver,
}

#[derive(Subcommand, Debug)]
pub enum Goldens {
    Verify,
}

/// Runs one command line. `argv[0]` is the program name.
pub fn dispatch<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    match run(&cli) {
        Ok(out) => (0, out),
        Err((e, partial)) => {
            let msg = format!("error: {e}\n");
            (e.exit_code(), if partial.is_empty() { msg } else { format!("{partial}{msg}") })
        }
    }
}

/// An error together with output produced before it was detected.
type Failure = (CliError, String);

fn run(cli: &Cli) -> Result<String, Failure> {
    let plain = |e: CliError| (e, String::new());
    match &cli.command {
        Command::Probe { left, right, i, j, probe } => run_probe(cli.json, left, right, *i, *j, probe),
        Command::Latent { series, window, probe } => run_latent(cli.json, series.spec(), *window, probe),
        other => run_simple(cli.json, other).map_err(plain),
    }
}

fn emit(json: bool, v: Value, text: String) -> String {
    if json {
        format!("{}\n", serde_json::to_string_pretty(&v).expect("values serialize"))
    } else {
        text
    }
}

fn run_simple(json: bool, command: &Command) -> Result<String, CliError> {
    match command {
        Command::Embed { series, n } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            let g = specs::load_series(series.spec(), n - 1)?;
            let m = carleman_embed(&g, *n)?;
            Ok(emit(json, m.to_json(), m.to_string()))
        }
        Command::Compose { outer, inner, n } => {
            let g = compose(&specs::load_series(outer, *n)?, &specs::load_series(inner, *n)?, *n)?;
            Ok(emit(json, g.to_json(), format!("{g}\n")))
        }
        Command::Invert { series, n } => {
            let g = invert(&specs::load_series(series.spec(), *n)?, *n)?;
            Ok(emit(json, g.to_json(), format!("{g}\n")))
        }
        Command::Plu { matrix, n } => {
            let a = specs::load_handle(matrix)?.truncation(*n);
            let plu = plu_decompose(&a)?;
            let v = json!({ "p": plu.p.prefix(), "l": plu.l.to_json(), "u": plu.u.to_json() });
            let text = format!("P: {:?}\nL:\n{}U:\n{}", plu.p.prefix(), plu.l, plu.u);
            Ok(emit(json, v, text))
        }
        Command::Sigmadet { matrix, count, rows, cols, beta, pivot_budget } => {
            let h = specs::load_handle(matrix)?;
            let perm = |s: &Option<String>| -> Result<PermutationSpec, CliError> {
                match s {
                    Some(s) => Ok(PermutationSpec::new(specs::parse_indices(s)?)?),
                    None => Ok(PermutationSpec::identity()),
                }
            };
            let row_spec = match pivot_budget {
                Some(b) => find_pivot_rows(&h, *count, *b)?,
                None => perm(rows)?,
            };
            let col_spec = perm(cols)?;
            let beta = match beta {
                Some(s) => BlockInjection::new(specs::parse_indices(s)?)?,
                None => BlockInjection::identity(),
            };
            let dets = sigma_determinants(&h, &row_spec, &col_spec, &beta, *count);
            let sizes: Vec<usize> = (1..=*count).map(|k| beta.apply(k)).collect();
            let v = json!({
                "rows": row_spec.first(sizes.last().copied().unwrap_or(0)),
                "sizes": sizes,
                "determinants": dets.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            let text = sizes.iter().zip(&dets).map(|(s, d)| format!("{s}: {d}\n")).collect();
            Ok(emit(json, v, text))
        }
        Command::GammaProbe { matrix, n, budget } => {
            let h = specs::load_handle(matrix)?;
            let verdict = gamma_probe(&h, *n, budget.unwrap_or(2 * n))?;
            let v = verdict.to_json();
            let mut text = v["verdict"].as_str().unwrap_or_default().to_string();
            if let Some(vec) = v.get("vector") {
                text += &format!(" vector={vec}");
            }
            if let Some(c) = v.get("certificate") {
                text += &format!(" certificate={}", c.as_str().unwrap_or_default());
            }
            Ok(emit(json, v, format!("{text}\n")))
        }
        Command::Demo(demo) => run_demo(json, demo),
        Command::Goldens(Goldens::Verify) => {
            let results = goldens::verify_all();
            let v = Value::Array(results.iter().map(goldens::FixtureResult::to_json).collect());
            let text: String = results.iter().flat_map(|r| r.lines()).map(|l| l + "\n").collect();
            let out = emit(json, v, text);
            if results.iter().all(goldens::FixtureResult::passed) {
                Ok(out)
            } else {
                Err(CliError::Usage(format!("{out}golden mismatch")))
            }
        }
        Command::Probe { .. } | Command::Latent { .. } => unreachable!("handled in run"),
    }
}

fn render_probe(r: &EntryProbeReport) -> String {
    let n = r.evidence.len();
    let show = |range: &mut dyn Iterator<Item = &lie_matrix::convergence::Evidence>| {
        range.map(|e| e.term.to_string()).collect::<Vec<_>>().join(" ")
    };
    let head = show(&mut r.evidence.iter().take(4));
    let tail = show(&mut r.evidence.iter().skip(n.saturating_sub(4).max(4)));
    let mut s = format!("entry ({},{}): {}", r.entry.0, r.entry.1, r.classification.as_str());
    if let Some(v) = &r.value {
        s += &format!(" value={v}");
    }
    s += &format!("\n  terms 1..{}: {head}", n.min(4));
    if !tail.is_empty() {
        s += &format!("\n  terms {}..{n}: {tail}", n.saturating_sub(3).max(5));
    }
    s += &format!("\n  partial sum through k={n}: {}\n", r.last_partial_sum());
    s
}

fn run_probe(json: bool, left: &str, right: &str, i: usize, j: usize, probe: &ProbeArgs) -> Result<String, Failure> {
    let plain = |e: CliError| (e, String::new());
    if i == 0 || j == 0 {
        return Err(plain(CliError::Usage("entries are 1-based".into())));
    }
    let a = specs::load_handle(left).map_err(plain)?;
    let b = specs::load_handle(right).map_err(plain)?;
    let r = entry_series_probe(&a, &b, i, j, &probe.params().map_err(plain)?);
    let out = emit(json, r.to_json(), render_probe(&r));
    if probe.require_convergence && r.classification == Classification::DivergentTermsDontVanish {
        return Err((CliError::Divergent(format!("entry ({i},{j}) diverges")), out));
    }
    Ok(out)
}

fn render_junction(r: &JunctionReport) -> String {
    let counts: Vec<String> = r.counts().iter().map(|(c, n)| format!("{}={n}", c.as_str())).collect();
    let mut s = format!("junction {} ({}): {}\n", r.index, flag(r.junction), counts.join(" "));
    for e in r.entries.iter().filter(|e| e.classification != Classification::FiniteExact) {
        s += &format!("  ({},{}) {}\n", e.entry.0, e.entry.1, e.classification.as_str());
    }
    s
}

fn flag(j: Junction) -> &'static str {
    match j {
        Junction::Performed => "performed",
        Junction::Latent => "latent",
    }
}

fn run_latent(json: bool, spec: &str, window: Option<usize>, probe: &ProbeArgs) -> Result<String, Failure> {
    let plain = |e: CliError| (e, String::new());
    let g = specs::load_infinite_series(spec).map_err(plain)?;
    let lp = lul_decompose(&g);
    let mut text = String::new();
    for (k, f) in lp.factors().iter().enumerate() {
        text += &format!("factor {}: {} [{:?}]\n", k + 1, f.provenance(), f.structure());
        if let Some(j) = lp.junctions().get(k) {
            text += &format!("  junction {}: {}\n", k + 1, flag(*j));
        }
    }
    let mut v = lp.to_json();
    let mut diverged = false;
    if let Some(w) = window {
        let reports = latent_product_report(&lp, w, &probe.params().map_err(plain)?);
        for r in &reports {
            text += &render_junction(r);
            diverged |= r.counts()[&Classification::DivergentTermsDontVanish] > 0;
        }
        v["probes"] = report_to_json(&reports);
    }
    let out = emit(json, v, text);
    if probe.require_convergence && diverged {
        return Err((CliError::Divergent("a probed junction diverges".into()), out));
    }
    Ok(out)
}

fn run_demo(json: bool, demo: &Demo) -> Result<String, CliError> {
    match demo {
        Demo::Circle { y, n, tol, arc } => {
            if let Some(arc) = arc {
                let r = circle_cover_extend(&specs::parse_floats(arc)?, *n, *tol)?;
                let v = json!({
                    "steps": r.steps,
                    "total_angle": r.total_angle,
                    "max_deviation": r.max_deviation,
                    "matrix": r.matrix.to_json(),
                });
                let text = format!(
                    "total angle {:.6} ({:.4} pi)\nmax deviation from diagonal: {:.3e}\n{}",
                    r.total_angle,
                    r.total_angle / PI,
                    r.max_deviation,
                    r.matrix
                );
                return Ok(emit(json, v, text));
            }
            let r = circle_generator_matrix(*y, *n, *tol)?;
            let coeffs: Vec<String> =
                r.composite.iter().take(3).map(|c| format!("{:.12}{:+.12}i", c.re, c.im)).collect();
            let text = format!(
                "y = {y}\ncomposite series: {} ...\ncertified matrix (max deviation {:.3e}, tol {:e}):\n{}raw truncated product (truncation-approximate, deviation {:.3e})\n",
                coeffs.join(", "),
                r.max_deviation,
                r.tol,
                r.certified,
                r.raw_deviation
            );
            Ok(emit(json, r.to_json(), text))
        }
        Demo::Adjoint { n, t } => {
            let fam = adjoint_family(*n)?;
            let check = adjoint_mu_check(*n)?;
            let t = parse_rational(t)?;
            let verdict = gamma_probe(&adjoint_handle(t.clone()), *n, 2 * n)?;
            let row: Vec<String> = fam.m.row(0).iter().map(ToString::to_string).collect();
            let v = json!({
                "n": n,
                "first_row": row,
                "x_squared_zero": fam.x_squared_zero,
                "mu_check": check.to_json(),
                "t": t.to_string(),
                "gamma_probe": verdict.to_json(),
            });
            let text = format!(
                "M_t first row: ({})\nX^2 = 0: {}\nM_t M_t' = M_(t + t' - t t'): {} (residual {})\ngamma probe at t = {t}: {}\n",
                row.join(", "),
                fam.x_squared_zero,
                check.holds,
                check.residual,
                verdict.label()
            );
            Ok(emit(json, v, text))
        }
        Demo::Olver => {
            let r = associativity_demo()?;
            let pt = |name: &str, p: &CoveredPoint| {
                format!("{name}: z = ({}, {}), theta = {:.6} pi\n", fmt0(p.z[0]), fmt0(p.z[1]), p.theta / PI)
            };
            let text = [
                pt("(a b) c", &r.left),
                format!("  sheet {}\n", r.sheet_left),
                pt("a (b c)", &r.right),
                format!("  sheet {}\n", r.sheet_right),
                format!("triangle winding around (-1, 0): {}\n", r.triangle_winding),
                format!("{}\n", r.verdict()),
            ]
            .concat();
            Ok(emit(json, r.to_json(), text))
        }
    }
}

/// Prints `-0` as `0`.
fn fmt0(x: f64) -> String {
    let x = if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{x}")
}

