//! Subcommands that build codes and ovoids over GF(2^m) and emit JSON
//! certificates of every property checked.
//!
//! Exit status: 0 when every verdict passes, 1 when a check fails, 2 for
//! bad parameters or unreadable input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ovoid_core::cyclic_code::{
    build_irreducible_cyclic, closed_dual_formula, dual_distance_direct, macwilliams_transform,
    ovoid_multiplicities, weight_distribution_by_enumeration, weight_distribution_by_periods,
    LinearCode,
};
use ovoid_core::cyclotomy::CyclotomicSystem;
use ovoid_core::designs::{dual_weight4_supports, supports_of_weight, BlockDesign};
use ovoid_core::equivalence::{
    search_equivalence, SearchMode, SearchOptions, Verdict, DEFAULT_BUDGET,
};
use ovoid_core::gf::{TowerContext, TABLE_MAX_DEGREE};
use ovoid_core::projgeo::{
    certify_cap, certify_cap_naive, elliptic_quadric, points_from_code, tits_ovoid, ProjPointSet,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TABLE_ENV: &str = "OVOID_TABLE_MAX_DEGREE";

/// Largest q for which the dual distance is found by scanning column subsets.
const DIRECT_DUAL_MAX_Q: u64 = 8;

#[derive(Parser, Debug)]
#[command(
    name = "ovoid",
    version,
    about = "Certificates for irreducible cyclic ovoid codes over GF(2^m)"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the JSON certificate instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generator matrix of C(q^4, N); N defaults to q²-1.
    ConstructCode {
        #[arg(long)]
        m: u32,
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weight distribution by enumeration and by Gaussian periods.
    Weights {
        #[arg(long, required_unless_present = "input")]
        m: Option<u32>,
        #[arg(long = "N")]
        n: Option<u64>,
        /// Matrix file of an external code.
        #[arg(long = "in", conflicts_with_all = ["m", "n"])]
        input: Option<PathBuf>,
    },
    /// Dual weight distribution by MacWilliams and the closed formula.
    DualWeights {
        #[arg(long)]
        m: u32,
    },
    /// Gaussian periods of the order-N cyclotomic classes of GF(q^4).
    GaussianPeriods {
        #[arg(long)]
        m: u32,
        #[arg(long = "N")]
        n: u64,
    },
    /// Build an ovoid of PG(3, 2^m).
    Ovoid {
        #[arg(long, value_enum)]
        source: Source,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cap and plane-profile certificate for a point-set file.
    VerifyOvoid {
        #[arg(long = "in")]
        input: PathBuf,
        /// Use the all-triples rank test instead of the line sweep.
        #[arg(long)]
        naive: bool,
    },
    /// 3-designs held by the ovoid code.
    Designs {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a semilinear map between two point sets.
    Equivalence {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, conflicts_with = "fingerprint_only")]
        exact: bool,
        #[arg(long)]
        fingerprint_only: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Code, weights, dual, ovoid and designs in one certificate.
    CertifyAll {
        #[arg(long)]
        m: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Source {
    Elliptic,
    Tits,
    FromCode,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Which {
    Minweight,
    Complement,
    Dual4,
}

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub tool_version: &'static str,
    pub subcommand: &'static str,
    pub field: Option<Value>,
    pub params: Value,
    pub results: Value,
    pub verdicts: BTreeMap<String, bool>,
    pub pass: bool,
    pub timings_ms: BTreeMap<String, u64>,
    #[serde(skip)]
    text: Option<String>,
}

impl Certificate {
    fn new(subcommand: &'static str, params: Value) -> Self {
        Certificate {
            tool_version: TOOL_VERSION,
            subcommand,
            field: None,
            params,
            results: json!({}),
            verdicts: BTreeMap::new(),
            pass: true,
            timings_ms: BTreeMap::new(),
            text: None,
        }
    }

    fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.insert(name.to_string(), ok);
    }

    fn result(&mut self, name: &str, value: impl Serialize) -> Result<()> {
        self.results[name] = serde_json::to_value(value)?;
        Ok(())
    }

    fn timed<T>(&mut self, step: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms
            .insert(step.to_string(), start.elapsed().as_millis() as u64);
        out
    }

    fn finish(mut self) -> Self {
        self.pass = self.verdicts.values().all(|&v| v);
        self
    }

    fn table(&self) -> String {
        let mut s = format!(
            "{} ({})\n",
            self.subcommand,
            if self.pass { "pass" } else { "FAIL" }
        );
        if let Some(Value::Object(h)) = &self.field {
            let parts: Vec<String> = h.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s += &format!("  field  {}\n", parts.join(" "));
        }
        for (name, ok) in &self.verdicts {
            s += &format!("  {:<4}  {name}\n", if *ok { "ok" } else { "FAIL" });
        }
        s
    }
}

/// Bad input, as opposed to a failed check.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn table_limit() -> Result<u32> {
    match std::env::var(TABLE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Usage(format!("{TABLE_ENV}={v} is not a number")).into()),
        Err(_) => Ok(TABLE_MAX_DEGREE),
    }
}

fn tower(m: u32) -> Result<TowerContext> {
    Ok(TowerContext::with_table_limit(m, table_limit()?)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())).into())
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())).into())
}

/// Runs one invocation; returns the exit status and the text for stdout.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => return (2, format!("error: {e}\n")),
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(cert) => {
            let code = if cert.pass { 0 } else { 1 };
            let out = if cli.json {
                serde_json::to_string_pretty(&cert).expect("serializable") + "\n"
            } else {
                cert.text.clone().unwrap_or_else(|| cert.table())
            };
            (code, out)
        }
        Err(e) => (exit_code(&e), format!("error: {e:#}\n")),
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<ovoid_core::Error>() {
        Some(ovoid_core::Error::Arithmetic(_)) => 1,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<Certificate> {
    let cert = match &cli.command {
        Command::ConstructCode { m, n, out } => construct_code(*m, *n, out.as_deref())?,
        Command::Weights { m, n, input } => weights(*m, *n, input.as_deref())?,
        Command::DualWeights { m } => dual_weights(*m)?,
        Command::GaussianPeriods { m, n } => gaussian_periods(*m, *n)?,
        Command::Ovoid { source, m, out } => ovoid(*source, *m, out.as_deref())?,
        Command::VerifyOvoid { input, naive } => verify_ovoid(input, *naive)?,
        Command::Designs { m, which, out } => designs(*m, *which, out.as_deref())?,
        Command::Equivalence {
            a,
            b,
            exact,
            fingerprint_only,
            budget,
        } => {
            let mode = match (exact, fingerprint_only) {
                (true, _) => SearchMode::Exact,
                (_, true) => SearchMode::FingerprintOnly,
                _ => SearchMode::Auto,
            };
            equivalence(
                a,
                b,
                SearchOptions {
                    mode,
                    budget: *budget,
                    seed: cli.seed,
                },
            )?
        }
        Command::CertifyAll { m } => certify_all(*m)?,
    };
    Ok(cert.finish())
}

fn default_classes(t: &TowerContext) -> u64 {
    t.q() * t.q() - 1
}

fn construct_code(m: u32, n: Option<u64>, out: Option<&Path>) -> Result<Certificate> {
    let t = tower(m)?;
    let classes = n.unwrap_or_else(|| default_classes(&t));
    let mut cert = Certificate::new("construct-code", json!({ "m": m, "N": classes }));
    cert.field = Some(serde_json::to_value(t.header())?);
    let code = cert.timed("construct", || build_irreducible_cyclic(&t, classes))?;
    let text = code.to_text();
    cert.result("length", code.len())?;
    cert.result("dimension", code.dimension())?;
    cert.result(
        "rows",
        code.rows().iter().map(|r| hex_row(r)).collect::<Vec<_>>(),
    )?;
    cert.verdict("length", code.len() as u64 == (t.r() - 1) / classes);
    if let Some(p) = out {
        write(p, &text)?;
    } else {
        cert.text = Some(text);
    }
    Ok(cert)
}

fn hex_row(r: &[u16]) -> String {
    r.iter()
        .map(|x| format!("{x:x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn weights(m: Option<u32>, n: Option<u64>, input: Option<&Path>) -> Result<Certificate> {
    if let Some(path) = input {
        let code = LinearCode::from_text(&read(path)?)?;
        let mut cert = Certificate::new("weights", json!({ "in": path.display().to_string() }));
        let dist = cert.timed("enumerate", || weight_distribution_by_enumeration(&code))?;
        cert.result("distribution", &dist)?;
        cert.result("min_distance", dist.min_nonzero_weight())?;
        cert.verdict(
            "total",
            dist.total() == (code.q() as u128).pow(code.dimension() as u32),
        );
        return Ok(cert);
    }
    let m = m.expect("clap requires m without --in");
    let t = tower(m)?;
    let classes = n.unwrap_or_else(|| default_classes(&t));
    let mut cert = Certificate::new("weights", json!({ "m": m, "N": classes }));
    cert.field = Some(serde_json::to_value(t.header())?);
    weights_steps(&mut cert, &t, classes)?;
    Ok(cert)
}

/// Enumeration, periods, Pless, and for N = q²-1 the two-weight enumerator
/// and the Griesmer bound.
fn weights_steps(cert: &mut Certificate, t: &TowerContext, classes: u64) -> Result<LinearCode> {
    let q = t.q();
    let code = cert.timed("construct", || build_irreducible_cyclic(t, classes))?;
    let dist = cert.timed("enumerate", || weight_distribution_by_enumeration(&code))?;
    let periods = cert.timed("periods", || weight_distribution_by_periods(t, classes))?;
    cert.result("length", code.len())?;
    cert.result("dimension", code.dimension())?;
    cert.result("distribution", &dist)?;
    cert.result("period_classes", &periods.classes)?;
    cert.verdict("periods_agree", periods.distribution == dist);
    cert.verdict(
        "pless_moments",
        dist.pless_moments_hold(code.len(), code.dimension(), q),
    );
    if classes == q * q - 1 {
        let (u, v) = ovoid_multiplicities(q);
        let expected = BTreeMap::from([((q * q - q) as usize, u), ((q * q) as usize, v)]);
        let d = dist.min_nonzero_weight().unwrap_or(0) as u64;
        cert.result("min_distance", d)?;
        cert.verdict(
            "ovoid_parameters",
            (code.len() as u64, code.dimension(), d) == (q * q + 1, 4, q * q - q),
        );
        cert.verdict("ovoid_enumerator", dist.nonzero() == expected);
        cert.verdict("griesmer", code.meets_griesmer(d));
    }
    Ok(code)
}

fn dual_weights(m: u32) -> Result<Certificate> {
    let t = tower(m)?;
    let mut cert = Certificate::new("dual-weights", json!({ "m": m }));
    cert.field = Some(serde_json::to_value(t.header())?);
    let code = build_irreducible_cyclic(&t, default_classes(&t))?;
    dual_steps(&mut cert, &code)?;
    Ok(cert)
}

fn dual_steps(cert: &mut Certificate, code: &LinearCode) -> Result<()> {
    let q = code.q();
    let n = code.len();
    let dist = cert.timed("enumerate", || weight_distribution_by_enumeration(code))?;
    let dual = cert.timed("macwilliams", || {
        macwilliams_transform(&dist, n, code.dimension(), q)
    })?;
    let formula = cert.timed("closed_formula", || {
        (4..=n)
            .map(|l| closed_dual_formula(q, l))
            .collect::<ovoid_core::Result<Vec<_>>>()
    })?;
    let agree = formula.iter().zip(4..).all(|(v, l)| v == dual.get(l));
    cert.result("dual_distribution", &dual)?;
    cert.result("dual_min_distance", dual.min_distance())?;
    cert.verdict("closed_formula_agrees", agree);
    cert.verdict("dual_distance_4", dual.min_distance() == Some(4));
    if q <= DIRECT_DUAL_MAX_Q {
        let direct = cert.timed("dual_distance_direct", || dual_distance_direct(code))?;
        cert.verdict("dual_distance_direct", direct.distance == 4);
        cert.result("dual_distance_witness", &direct)?;
    }
    Ok(())
}

fn gaussian_periods(m: u32, n: u64) -> Result<Certificate> {
    let t = tower(m)?;
    let q = t.q() as i64;
    let mut cert = Certificate::new("gaussian-periods", json!({ "m": m, "N": n }));
    cert.field = Some(serde_json::to_value(t.header())?);
    let sys = CyclotomicSystem::new(&t, n)?;
    let periods = cert.timed("periods", || sys.gaussian_periods());
    cert.result("order", periods.order)?;
    cert.result("values", &periods.values)?;
    cert.verdict("sum_is_minus_one", periods.sum() == -1);
    if n as i64 == q + 1 {
        let ok = periods.values[0] == -(q * q - q + 1)
            && periods.values[1..].iter().all(|&v| v == q - 1);
        cert.verdict("semiprimitive_values", ok);
    }
    Ok(cert)
}

fn build_ovoid(source: Source, m: u32) -> Result<ProjPointSet> {
    Ok(match source {
        Source::Elliptic => elliptic_quadric(m)?,
        Source::Tits => tits_ovoid(m)?,
        Source::FromCode => {
            let t = tower(m)?;
            let code = build_irreducible_cyclic(&t, default_classes(&t))?;
            let dist = weight_distribution_by_enumeration(&code)?;
            points_from_code(&code, &dist)?
        }
    })
}

fn ovoid(source: Source, m: u32, out: Option<&Path>) -> Result<Certificate> {
    let mut cert = Certificate::new("ovoid", json!({ "source": source, "m": m }));
    let ps = cert.timed("construct", || build_ovoid(source, m))?;
    cert.field = Some(serde_json::to_value(ps.field().context().header())?);
    let c = cert.timed("certify", || certify_cap(&ps));
    cert.result("provenance", ps.provenance())?;
    cert.result("points", ps.len())?;
    cert.verdict("is_ovoid", c.is_ovoid);
    cert.result("certificate", &c)?;
    match out {
        Some(p) => write(p, &ps.to_text())?,
        None => cert.text = Some(ps.to_text()),
    }
    Ok(cert)
}

fn read_points(path: &Path) -> Result<ProjPointSet> {
    ProjPointSet::from_text(&read(path)?).with_context(|| path.display().to_string())
}

fn verify_ovoid(input: &Path, naive: bool) -> Result<Certificate> {
    let ps = read_points(input)?;
    let mut cert = Certificate::new(
        "verify-ovoid",
        json!({ "in": input.display().to_string(), "naive": naive }),
    );
    cert.field = Some(serde_json::to_value(ps.field().context().header())?);
    let c = cert.timed("certify", || {
        if naive {
            certify_cap_naive(&ps)
        } else {
            certify_cap(&ps)
        }
    });
    cert.verdict("is_cap", c.is_cap);
    cert.verdict("is_ovoid", c.is_ovoid);
    cert.result("certificate", &c)?;
    if let Some(w) = &c.witness {
        let mut text = cert.table();
        text += &format!(
            "  collinear points {:?}: {}\n",
            w.indices,
            w.points.join(" | ")
        );
        cert.text = Some(text);
    }
    Ok(cert)
}

/// Builds, verifies and reports one of the three designs.
fn design_step(cert: &mut Certificate, code: &LinearCode, which: Which) -> Result<BlockDesign> {
    let q = code.q();
    let v = code.len();
    let (mut design, lambda) = match which {
        Which::Minweight | Which::Complement => {
            let fam = cert.timed("supports", || {
                supports_of_weight(code, (q * q - q) as usize)
            })?;
            let key = format!("{}_support_multiplicity", name(which));
            cert.verdict(&key, fam.multiplicity == Some(q - 1));
            let d = BlockDesign::new(v, fam.supports)?;
            match which {
                Which::Minweight => (d, minweight_lambda(q)),
                _ => (d.complement(), 1),
            }
        }
        Which::Dual4 => {
            let fam = cert.timed("dual4_supports", || dual_weight4_supports(code));
            let d = BlockDesign::new(v, fam.supports)?;
            cert.result("dual4_codewords", fam.codewords)?;
            (d, dual4_lambda(q))
        }
    };
    let step = format!("verify_{}", name(which));
    let report = cert.timed(&step, || design.verify(3, Some(lambda)).cloned())?;
    cert.verdict(&format!("{}_design", name(which)), report.verified);
    cert.result(name(which), &report)?;
    Ok(design)
}

/// λ = b·C(k, 3)/C(q²+1, 3) with b = q(q²+1) blocks of size k = q²-q.
fn minweight_lambda(q: u64) -> u64 {
    let k = q * q - q;
    k * (k - 1) * (k - 2) / (q * (q * q - 1))
}

/// Each of the q(q²+1) circles holds C(q+1, 4) blocks, so
/// λ·C(q²+1, 3) = q(q²+1)·C(q+1, 4)·4, i.e. λ = q - 2.
fn dual4_lambda(q: u64) -> u64 {
    q - 2
}

fn name(which: Which) -> &'static str {
    match which {
        Which::Minweight => "minweight",
        Which::Complement => "complement",
        Which::Dual4 => "dual4",
    }
}

fn designs(m: u32, which: Which, out: Option<&Path>) -> Result<Certificate> {
    let t = tower(m)?;
    let mut cert = Certificate::new("designs", json!({ "m": m, "which": which }));
    cert.field = Some(serde_json::to_value(t.header())?);
    if t.q() < 4 {
        return Err(Usage("designs need q ≥ 4".into()).into());
    }
    let code = build_irreducible_cyclic(&t, default_classes(&t))?;
    let d = design_step(&mut cert, &code, which)?;
    if let Some(p) = out {
        write(p, &d.to_text())?;
    }
    Ok(cert)
}

fn equivalence(a: &Path, b: &Path, opts: SearchOptions) -> Result<Certificate> {
    let pa = read_points(a)?;
    let pb = read_points(b)?;
    let mut cert = Certificate::new(
        "equivalence",
        json!({
            "a": a.display().to_string(),
            "b": b.display().to_string(),
            "mode": opts.mode,
            "budget": opts.budget,
            "seed": opts.seed,
        }),
    );
    cert.field = Some(serde_json::to_value(pa.field().context().header())?);
    let report = cert.timed("search", || search_equivalence(&pa, &pb, opts))?;
    if let Some(w) = &report.witness {
        cert.verdict("witness_verified", w.verified);
    }
    cert.verdict(
        "fingerprint_consistent",
        report.fingerprints_match || report.verdict != Verdict::Equivalent,
    );
    cert.result("report", &report)?;
    Ok(cert)
}

fn certify_all(m: u32) -> Result<Certificate> {
    let t = tower(m)?;
    let mut cert = Certificate::new("certify-all", json!({ "m": m }));
    cert.field = Some(serde_json::to_value(t.header())?);
    if t.q() < 4 {
        return Err(Usage("certify-all needs q ≥ 4".into()).into());
    }
    let code = weights_steps(&mut cert, &t, default_classes(&t))?;
    dual_steps(&mut cert, &code)?;
    let dist = weight_distribution_by_enumeration(&code)?;
    let ps = points_from_code(&code, &dist)?;
    let cap = cert.timed("certify_cap", || certify_cap(&ps));
    cert.verdict("is_ovoid", cap.is_ovoid);
    cert.result("cap", &cap)?;
    for which in [Which::Minweight, Which::Complement, Which::Dual4] {
        design_step(&mut cert, &code, which)?;
    }
    Ok(cert)
}
