use clap::{Args, Parser, Subcommand, ValueEnum};
use hurwitz_means::asymptotics::{
    corollary2_Ix, corollary3_Ix, theorem1_Jx, theorem2_Ix, theorem3_mean, EstimateReport,
    T_N_expanded,
};
use hurwitz_means::error::{Error, Result};
use hurwitz_means::harness::checks::CheckSettings;
use hurwitz_means::harness::{
    fit_error_exponents, parse_config, rows_to_csv, run_suite, run_sweep, ConfigMap, Estimator,
    Suite, SweepSpec, XRule,
};
use hurwitz_means::hurwitz::{kernel_K, modified_hurwitz_zeta, StripPoint};
use hurwitz_means::lattice::{
    count_A_estimate, count_frac_above, count_frac_below, enumerate_A, hyperbola_double_sum,
    hyperbola_leading, hyperbola_naive, hyperbola_normalized_deviation, saffari_density,
};
use hurwitz_means::meansq::{integral_Ix, integral_Jx, large_interval_mean};
use hurwitz_means::numerics::{Complex, NumericPolicy};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "hzmean", version, about = "Hurwitz zeta mean squares: oracles, estimators, sweeps")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Common {
    /// Comma list of real parts.
    #[arg(long, global = true)]
    sigma: Option<String>,
    /// Comma list of heights.
    #[arg(long, global = true)]
    t: Option<String>,
    /// Comma list of cells.
    #[arg(long, global = true)]
    x: Option<String>,
    /// [default: 0.25]
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Order N of the expansion. [default: 2]
    #[arg(long, global = true)]
    n_order: Option<u32>,
    /// Order M of the expanded tail. [default: 2]
    #[arg(long, global = true)]
    m_order: Option<u32>,
    /// [default: 1e-10]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// 53 or 106. [default: 106]
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// [default: 0.25]
    #[arg(long, global = true)]
    correction_factor: Option<f64>,
    /// [default: 20]
    #[arg(long, global = true)]
    envelope: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// [default: csv]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Flat `key = value` file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// zeta_x(s, alpha) and K(s) on the sigma x t grid.
    Eval {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Brute-force integrals.
    Oracle {
        #[arg(value_enum)]
        what: OracleKind,
        /// For jx, e.g. 0.75+5i.
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
    },
    /// Asymptotic estimates on the grid.
    Estimate {
        #[arg(value_enum)]
        which: EstimateKind,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
    },
    /// Estimator against oracle over a grid, one CSV row per point.
    Sweep {
        #[arg(long)]
        estimator: Option<String>,
        /// `all`, `prop:<c>` or a comma list; defaults to --x.
        #[arg(long)]
        x_rule: Option<String>,
        /// Print the exponent fit to stderr.
        #[arg(long)]
        fit: bool,
    },
    /// The set A(t, eta), or with --n the fractional-part counts.
    Density {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value = "0.1,0.25,0.4")]
        delta: String,
        /// List the members of A.
        #[arg(long)]
        members: bool,
    },
    /// Split hyperbola sums against the double loop.
    Hyperbola {
        #[arg(long, default_value = "100,1000,10000")]
        n: String,
    },
    /// Run the acceptance grids.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OracleKind {
    Ix,
    Jx,
    Mean,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum EstimateKind {
    Cor2,
    Cor3,
    Thm2,
    Thm3,
    Thm1,
}

/// Flags after the config file has been folded in.
struct Settings {
    sigma: Option<Vec<f64>>,
    t: Option<Vec<f64>>,
    x: Option<Vec<u64>>,
    eta: f64,
    n_order: u32,
    m_order: u32,
    correction_factor: f64,
    envelope: f64,
    out: Option<PathBuf>,
    format: Format,
    policy: NumericPolicy,
    config: ConfigMap,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| bad(format!("bad {what} value '{p}'"))))
        .collect()
}

fn scalar<T: FromStr>(flag: Option<T>, cfg: &ConfigMap, key: &str, default: T) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match cfg.get(key) {
        Some(s) => s.parse().map_err(|_| bad(format!("config {key}: bad value '{s}'"))),
        None => Ok(default),
    }
}

fn parse_complex(s: &str) -> Result<Complex> {
    Complex::from_str(&s.replace(' ', "")).map_err(|_| bad(format!("bad complex number '{s}'")))
}

impl Settings {
    fn resolve(c: Common) -> Result<Self> {
        let config = match &c.config {
            Some(p) => parse_config(
                &std::fs::read_to_string(p).map_err(|e| bad(format!("{}: {e}", p.display())))?,
            )?,
            None => ConfigMap::new(),
        };
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| config.get(key).cloned());
        let sigma = pick(c.sigma, "sigma").map(|s| list(&s, "sigma")).transpose()?;
        let t = pick(c.t, "t").map(|s| list(&s, "t")).transpose()?;
        let x = pick(c.x, "x").map(|s| list(&s, "x")).transpose()?;
        let tol = scalar(c.tol, &config, "tol", 1e-10)?;
        let mut policy = NumericPolicy::with_tolerance(tol);
        policy.precision_bits = scalar(c.precision_bits, &config, "precision-bits", 106)?;
        policy.validate()?;
        let format = match c.format {
            Some(f) => f,
            None => match config.get("format").map(String::as_str) {
                None | Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(o) => return Err(bad(format!("config format: '{o}'"))),
            },
        };
        Ok(Settings {
            sigma,
            t,
            x,
            eta: scalar(c.eta, &config, "eta", 0.25)?,
            n_order: scalar(c.n_order, &config, "n-order", 2)?,
            m_order: scalar(c.m_order, &config, "m-order", 2)?,
            correction_factor: scalar(c.correction_factor, &config, "correction-factor", 0.25)?,
            envelope: scalar(c.envelope, &config, "envelope", 20.0)?,
            out: c.out.or_else(|| config.get("out").map(PathBuf::from)),
            format,
            policy,
            config,
        })
    }

    fn sigmas(&self) -> Result<Vec<f64>> {
        self.sigma.clone().ok_or_else(|| bad("--sigma is required"))
    }

    fn ts(&self) -> Result<Vec<f64>> {
        self.t.clone().ok_or_else(|| bad("--t is required"))
    }

    fn xs(&self) -> Result<Vec<u64>> {
        self.x.clone().ok_or_else(|| bad("--x is required"))
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| bad(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Column names plus rows of JSON scalars; rendered as CSV or a JSON array.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for r in &self.rows {
                    let cells: Vec<String> = r
                        .iter()
                        .map(|v| match v {
                            Value::String(s) => s.clone(),
                            Value::Null => "NaN".into(),
                            other => other.to_string(),
                        })
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let objs: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect(),
                        )
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&objs).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

fn num(v: f64) -> Value {
    // JSON has no NaN; CSV renders null as NaN
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn cmd_eval(st: &Settings, alpha: f64) -> Result<Table> {
    let mut tab = Table::new(&["sigma", "t", "alpha", "x", "zeta_re", "zeta_im", "k_re", "k_im"]);
    let xs = st.x.clone().unwrap_or_else(|| vec![0]);
    for sigma in st.sigmas()? {
        for t in st.ts()? {
            let s = Complex::new(sigma, t);
            let k = kernel_K(s)?;
            for &x in &xs {
                let z = modified_hurwitz_zeta(s, alpha, x, &st.policy)?;
                tab.rows.push(vec![num(sigma), num(t), num(alpha), json!(x), num(z.re), num(z.im), num(k.re), num(k.im)]);
            }
        }
    }
    Ok(tab)
}

fn cmd_oracle(st: &Settings, what: OracleKind, u: Option<String>, v: Option<String>) -> Result<Table> {
    let p = &st.policy;
    match what {
        OracleKind::Ix => {
            let mut tab = Table::new(&["sigma", "t", "x", "value", "error_estimate"]);
            for sigma in st.sigmas()? {
                for t in st.ts()? {
                    let sp = StripPoint::new(sigma, t)?;
                    for x in st.xs()? {
                        let q = integral_Ix(sp, x, p)?;
                        tab.rows.push(vec![num(sigma), num(t), json!(x), num(q.value.re), num(q.error_estimate)]);
                    }
                }
            }
            Ok(tab)
        }
        OracleKind::Jx => {
            let u = parse_complex(&u.ok_or_else(|| bad("oracle jx needs --u"))?)?;
            let v = parse_complex(&v.ok_or_else(|| bad("oracle jx needs --v"))?)?;
            let mut tab = Table::new(&["u", "v", "x", "re", "im", "error_estimate"]);
            for x in st.xs()? {
                let q = integral_Jx(u, v, x, p)?;
                tab.rows.push(vec![json!(u.to_string()), json!(v.to_string()), json!(x), num(q.value.re), num(q.value.im), num(q.error_estimate)]);
            }
            Ok(tab)
        }
        OracleKind::Mean => {
            let mut tab = Table::new(&["sigma", "t", "value", "error_estimate"]);
            for sigma in st.sigmas()? {
                for t in st.ts()? {
                    let q = large_interval_mean(StripPoint::new(sigma, t)?, p)?;
                    tab.rows.push(vec![num(sigma), num(t), num(q.value.re), num(q.error_estimate)]);
                }
            }
            Ok(tab)
        }
    }
}

fn report_row(sigma: f64, t: f64, x: u64, r: &EstimateReport, extra: f64) -> Vec<Value> {
    vec![
        num(sigma),
        num(t),
        json!(x),
        num(r.value.re),
        num(r.value.im),
        num(r.predicted_error_scale),
        json!(r.terms_used),
        json!(r.exceptional.map(|e| e.in_a).unwrap_or(false)),
        num(extra),
        json!(r.branch_notes.replace(',', ";")),
    ]
}

fn cmd_estimate(st: &Settings, which: EstimateKind, u: Option<String>, v: Option<String>) -> Result<Table> {
    let p = &st.policy;
    let mut tab = Table::new(&[
        "sigma", "t", "x", "re", "im", "predicted_scale", "terms_used", "in_A", "t_n_expanded_re", "notes",
    ]);
    if which == EstimateKind::Thm1 {
        if let (Some(u), Some(v)) = (&u, &v) {
            let (u, v) = (parse_complex(u)?, parse_complex(v)?);
            for x in st.xs()? {
                let r = theorem1_Jx(u, v, x, st.n_order, p)?;
                let tn = T_N_expanded(u, v, x, st.n_order, st.m_order.min(st.n_order), p)?;
                tab.rows.push(report_row(u.re, u.im, x, &r, tn.re));
            }
            return Ok(tab);
        }
    }
    for sigma in st.sigmas()? {
        for t in st.ts()? {
            let sp = StripPoint::new(sigma, t)?;
            if which == EstimateKind::Thm3 {
                let r = theorem3_mean(sigma, t)?;
                tab.rows.push(report_row(sigma, t, 1, &r, f64::NAN));
                continue;
            }
            for x in st.xs()? {
                let (r, extra) = match which {
                    EstimateKind::Cor2 => (corollary2_Ix(sp, x, st.n_order, p)?, f64::NAN),
                    EstimateKind::Cor3 => (corollary3_Ix(t, x, p)?, f64::NAN),
                    EstimateKind::Thm2 => (theorem2_Ix(sp, x, st.eta, st.correction_factor, p)?, f64::NAN),
                    EstimateKind::Thm1 => {
                        let s = sp.s();
                        let r = theorem1_Jx(s, s.conj(), x, st.n_order, p)?;
                        let tn = T_N_expanded(s, s.conj(), x, st.n_order, st.m_order.min(st.n_order), p)?;
                        (r, tn.re)
                    }
                    EstimateKind::Thm3 => unreachable!(),
                };
                tab.rows.push(report_row(sigma, t, x, &r, extra));
            }
        }
    }
    Ok(tab)
}

fn cmd_sweep(st: &Settings, estimator: Option<String>, x_rule: Option<String>, fit: bool) -> Result<String> {
    let estimator: Estimator = estimator
        .or_else(|| st.config.get("estimator").cloned())
        .ok_or_else(|| bad("sweep needs --estimator"))?
        .parse()?;
    let x_rule: XRule = match x_rule.or_else(|| st.config.get("x-rule").cloned()) {
        Some(r) => r.parse()?,
        None => XRule::Fixed(st.x.clone().unwrap_or_default()),
    };
    let sigma = match (&st.sigma, estimator) {
        (Some(s), _) => s.clone(),
        (None, Estimator::Cor3) => vec![0.5],
        (None, _) => return Err(bad("--sigma is required")),
    };
    let mut spec = SweepSpec::new(estimator, sigma, st.ts()?, x_rule);
    spec.eta = st.eta;
    spec.n_order = st.n_order;
    spec.correction_factor = st.correction_factor;
    spec.policy = st.policy;
    spec.out_path = st.out.clone();
    let rows = run_sweep(&spec)?;
    if fit {
        match fit_error_exponents(&rows, spec.policy.abs_tol) {
            Ok(f) => eprintln!("{}", serde_json::to_string(&f).unwrap_or_default()),
            Err(e) => eprintln!("fit: {e}"),
        }
    }
    Ok(match st.format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows).unwrap_or_default() + "\n",
    })
}

fn cmd_density(st: &Settings, n: Option<u64>, delta: &str, members: bool) -> Result<Table> {
    if let Some(n) = n {
        let mut tab = Table::new(&["n", "delta", "count_below", "count_above", "density", "below_error", "above_error"]);
        for d in list::<f64>(delta, "delta")? {
            let below = count_frac_below(n, d);
            let above = count_frac_above(n, d);
            let dens = saffari_density(d)?;
            let nf = n as f64;
            tab.rows.push(vec![
                json!(n),
                num(d),
                json!(below),
                json!(above),
                num(dens),
                num(below as f64 / nf - dens),
                num(above as f64 / nf - (1.0 - saffari_density(1.0 - d)?)),
            ]);
        }
        return Ok(tab);
    }
    let mut tab = Table::new(&["t", "eta", "count", "estimate", "residual", "members"]);
    for t in st.ts()? {
        let a = enumerate_A(t, st.eta)?;
        let est = count_A_estimate(t, st.eta)?;
        let list = if members {
            a.members.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        } else {
            String::new()
        };
        tab.rows.push(vec![num(t), num(st.eta), json!(a.len()), num(est), num(est - a.len() as f64), json!(list)]);
    }
    Ok(tab)
}

fn cmd_hyperbola(st: &Settings, n: &str) -> Result<Table> {
    let mut tab = Table::new(&["n", "sigma", "split", "naive", "leading", "normalized_deviation"]);
    let sigmas = st.sigma.clone().unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    for big_n in list::<u64>(n, "n")? {
        for &s in &sigmas {
            tab.rows.push(vec![
                json!(big_n),
                num(s),
                num(hyperbola_double_sum(big_n, s)?),
                num(hyperbola_naive(big_n, s)),
                num(hyperbola_leading(big_n, s)?),
                num(hyperbola_normalized_deviation(big_n, s)?),
            ]);
        }
    }
    Ok(tab)
}

fn cmd_verify(st: &Settings, suite: Suite) -> Result<bool> {
    let cfg = CheckSettings {
        envelope: st.envelope,
        correction_factor: st.correction_factor,
        policy: st.policy,
    };
    let outcomes = run_suite(suite, &cfg);
    for o in &outcomes {
        eprintln!("{o}");
        for d in &o.details {
            eprintln!("    {d}");
        }
    }
    let pass = outcomes.iter().all(|o| o.pass);
    let report = json!({ "suite": suite, "pass": pass, "checks": outcomes });
    st.emit(&(serde_json::to_string_pretty(&report).unwrap_or_default() + "\n"))?;
    Ok(pass)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let st = Settings::resolve(cli.common)?;
    let table = match cli.cmd {
        Cmd::Eval { alpha } => cmd_eval(&st, alpha)?,
        Cmd::Oracle { what, u, v } => cmd_oracle(&st, what, u, v)?,
        Cmd::Estimate { which, u, v } => cmd_estimate(&st, which, u, v)?,
        Cmd::Sweep { estimator, x_rule, fit } => {
            st.emit(&cmd_sweep(&st, estimator, x_rule, fit)?)?;
            return Ok(ExitCode::SUCCESS);
        }
        Cmd::Density { n, delta, members } => cmd_density(&st, n, &delta, members)?,
        Cmd::Hyperbola { n } => cmd_hyperbola(&st, &n)?,
        Cmd::Verify { suite } => {
            let suite = match suite.parse::<Suite>() {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e} (expected identities, estimators, lattice or all)");
                    return Ok(ExitCode::from(2));
                }
            };
            let ok = cmd_verify(&st, suite)?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    };
    st.emit(&table.render(st.format))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
