mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use orddens::arith::{rat, rat_to_f64};
use orddens::density::{
    beta_closed, coprime_closed, gamma_closed, rho_closed, rho_series, DensityValue, FrobeniusSpec, DEFAULT_L,
};
use orddens::empirical::{count_events, Event};
use orddens::kummer::{compute_degree_table, degree_table, DegreeTable, FieldSpec, GroupSpec};
use orddens::reference::{check_table, TABLE_IDS};

use config::{Config, Count};
use report::{align, split_approx, Format, Record, Report};

/// Exact densities of primes with conditions on the order of a finitely
/// generated group of algebraic numbers modulo the prime.
#[derive(Parser)]
#[command(name = "orddens", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// File of `key value` lines supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Target {
    /// Built-in field: Q, Qzeta3, Qzeta4, Qzeta12 or Qsqrtm5 [default: Q].
    #[arg(long)]
    field: Option<String>,
    /// Monic defining polynomial, constant term first (e.g. `1,0,1`); needs --table.
    #[arg(long)]
    field_poly: Option<String>,
    /// Degree table file to use instead of the native or bundled one.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Comma-separated generators; `a` is the field generator, e.g. `2a` [default: 2].
    #[arg(long)]
    group: Option<String>,
    /// Order of the torsion subgroup added to G.
    #[arg(long)]
    torsion: Option<u64>,
}

#[derive(Args, Clone, Default)]
struct Check {
    /// Also count primes up to X and compare.
    #[arg(long)]
    verify: Option<Count>,
    /// Allowed |empirical - exact| [default: 0.01].
    #[arg(long)]
    tolerance: Option<f64>,
    /// Worker threads for prime counting.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Density of primes with m | ord.
    Density {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        m: Option<u64>,
        /// Also evaluate the truncated series and report its interval.
        #[arg(long)]
        series: bool,
        /// Series truncation bound [default: m * 2^14].
        #[arg(long)]
        bound: Option<Count>,
        #[command(flatten)]
        check: Check,
    },
    /// Density of primes with ord k-free.
    Kfree {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: Option<u32>,
        /// Prime cutoff for the constant A(k,r) [default: 100000].
        #[arg(long)]
        l_cutoff: Option<Count>,
        #[command(flatten)]
        check: Check,
    },
    /// Density of primes with v_l(ord) = v_l(m) for every l | k.
    Valuation {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        check: Check,
    },
    /// Density of primes with ord coprime to k.
    Coprime {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        check: Check,
    },
    /// Recompute the reference tables (1-8 or `all`) and compare cell by cell.
    PaperTables { which: String },
    /// Count primes for one event and compare with the exact density.
    Verify {
        #[command(flatten)]
        target: Target,
        /// div:m, kfree:k, val:k,m, coprime:k or kummer:m,n.
        #[arg(long)]
        event: Option<String>,
        /// Prime bound [default: 1e6].
        #[arg(long)]
        x: Option<Count>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compute the Kummer degree table of G natively.
    DegreeTable {
        #[command(flatten)]
        target: Target,
        /// Write the table to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Ctx {
    cfg: Config,
}

struct Resolved {
    group: GroupSpec,
    table_file: Option<PathBuf>,
    field: String,
    gens: String,
}

impl Resolved {
    fn table(&self) -> Result<DegreeTable> {
        match &self.table_file {
            Some(path) => {
                let t = DegreeTable::load(path).with_context(|| format!("loading {}", path.display()))?;
                if t.generators() != self.group.generators_text() {
                    bail!("table {} is for <{}>, not <{}>", path.display(), t.generators(), self.group.generators_text());
                }
                Ok(t.with_torsion(self.group.torsion()))
            }
            None => Ok(degree_table(&self.group)?),
        }
    }

    fn record(&self) -> Record {
        vec![
            ("field", self.field.clone()),
            ("group", self.gens.clone()),
            ("torsion", self.group.torsion().to_string()),
        ]
    }
}

impl Ctx {
    fn resolve(&self, t: Target) -> Result<Resolved> {
        let cfg = &self.cfg;
        let table_file: Option<PathBuf> = cfg.pick(t.table, "table")?;
        let poly: Option<String> = cfg.pick(t.field_poly, "field-poly")?;
        let field = match poly {
            Some(p) => {
                let Some(path) = &table_file else { bail!("--field-poly needs --table") };
                let coeffs = p
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().with_context(|| format!("bad coefficient '{c}'")))
                    .collect::<Result<Vec<_>>>()?;
                let label = DegreeTable::load(path)?.field().to_string();
                FieldSpec::from_poly(&label, coeffs)?
            }
            None => FieldSpec::builtin(&cfg.pick(t.field, "field")?.unwrap_or_else(|| "Q".into()))?,
        };
        let gens = cfg.pick(t.group, "group")?.unwrap_or_else(|| "2".into());
        let torsion = cfg.pick(t.torsion, "torsion")?.unwrap_or(1);
        let label = field.label().to_string();
        let group = GroupSpec::parse(field, &gens, torsion)?;
        Ok(Resolved { group, table_file, field: label, gens })
    }

    fn check(&self, c: Check) -> Result<(Option<u64>, f64, Option<usize>)> {
        let x = self.cfg.pick(c.verify, "verify")?.map(|c| c.0);
        let tol = self.cfg.pick(c.tolerance, "tolerance")?.unwrap_or(0.01);
        Ok((x, tol, self.cfg.pick(c.threads, "threads")?))
    }

    fn need<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.cfg.pick(flag, key)?.with_context(|| format!("missing --{key}"))
    }
}

/// Renders a density as one text line and `value`/`approx` record fields.
fn density_output(report: &mut Report, rec: &mut Record, quantity: String, v: &DensityValue) {
    let rendered = v.to_string();
    let (value, approx) = split_approx(&rendered);
    report.lines.push(rendered);
    rec.push(("quantity", quantity));
    rec.push(("value", value));
    rec.push(("approx", approx));
}

/// Counts `event` up to `x` and appends the comparison with `expected`.
fn empirical(
    report: &mut Report,
    rec: &mut Record,
    r: &Resolved,
    event: &Event,
    x: u64,
    tol: f64,
    threads: Option<usize>,
    expected: f64,
) -> Result<()> {
    if x < 1000 {
        bail!("verify: X must be at least 1000, got {x}");
    }
    let c = count_events(&r.group, std::slice::from_ref(event), x, threads)?.remove(0);
    report.lines.push(c.record());
    let (deviation, status) = match c.ratio {
        Some(ratio) => {
            let d = (ratio - expected).abs();
            (format!("{d:.6}"), if d < tol { "PASS" } else { "WARN" })
        }
        None => ("undefined".into(), "WARN"),
    };
    report.lines.push(format!("deviation {deviation} {status} (tolerance {tol})"));
    if status != "PASS" {
        report.failures.push(format!("{event}: deviation {deviation} at X = {x} exceeds {tol}"));
    }
    rec.extend([
        ("event", event.to_string()),
        ("x", x.to_string()),
        ("matched", c.matched.to_string()),
        ("total", c.total.to_string()),
        ("excluded", c.excluded.to_string()),
        ("ratio", c.ratio.map_or("undefined".into(), |q| format!("{q:.6}"))),
        ("deviation", deviation),
        ("status", status.to_string()),
    ]);
    Ok(())
}

/// Exact density of `event` as a float, for comparison with counts.
fn expected(event: &Event, t: &DegreeTable) -> Result<(String, f64)> {
    let v = match *event {
        Event::Divisible(m) => rho_closed(m, t)?,
        Event::KFree(k) => beta_closed(k, t, DEFAULT_L)?,
        Event::Valuation { k, m } => gamma_closed(k, m, t)?,
        Event::Coprime(k) => coprime_closed(k, t)?,
        Event::KummerSplit { m, n } => {
            let d = t.lift(m, n)?;
            DensityValue::exact(rat(1, i64::try_from(d).context("degree too large")?))
        }
    };
    Ok((v.to_string(), v.approx()))
}

fn run(cli: Cli) -> Result<(Report, Format)> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let format = cfg.pick(cli.format, "format")?.unwrap_or_default();
    let ctx = Ctx { cfg };
    let mut report = Report::default();
    match cli.command {
        Command::Density { target, m, series, bound, check } => {
            let r = ctx.resolve(target)?;
            let m = ctx.need(m, "m")?;
            let t = r.table()?;
            let v = rho_closed(m, &t)?;
            let mut rec = r.record();
            rec.push(("m", m.to_string()));
            density_output(&mut report, &mut rec, format!("rho_{m}"), &v);
            if series {
                let bound = ctx.cfg.pick(bound, "bound")?.map(|b| b.0);
                let s = rho_series(m, &t, &FrobeniusSpec::Trivial, bound)?;
                let (lo, hi) = s.interval.clone().expect("series yields an interval");
                let inside = v.exact.as_ref().is_some_and(|q| s.contains(q));
                report.lines.push(format!("series {s} width {:.3e}", rat_to_f64(&(&hi - &lo))));
                if !inside {
                    report.failures.push(format!("rho_{m}: closed value outside the series interval"));
                }
                rec.push(("lo", lo.to_string()));
                rec.push(("hi", hi.to_string()));
            }
            let (x, tol, threads) = ctx.check(check)?;
            if let Some(x) = x {
                empirical(&mut report, &mut rec, &r, &Event::Divisible(m), x, tol, threads, v.approx())?;
            }
            report.records.push(rec);
        }
        Command::Kfree { target, k, l_cutoff, check } => {
            let r = ctx.resolve(target)?;
            let k = ctx.need(k, "k")?;
            let l = ctx.cfg.pick(l_cutoff, "l-cutoff")?.map_or(DEFAULT_L, |c| c.0);
            let v = beta_closed(k, &r.table()?, l)?;
            let mut rec = r.record();
            rec.push(("k", k.to_string()));
            density_output(&mut report, &mut rec, format!("beta_{k}"), &v);
            let (x, tol, threads) = ctx.check(check)?;
            if let Some(x) = x {
                empirical(&mut report, &mut rec, &r, &Event::KFree(k), x, tol, threads, v.approx())?;
            }
            report.records.push(rec);
        }
        Command::Valuation { target, k, m, check } => {
            let r = ctx.resolve(target)?;
            let (k, m) = (ctx.need(k, "k")?, ctx.need(m, "m")?);
            let v = gamma_closed(k, m, &r.table()?)?;
            let mut rec = r.record();
            rec.extend([("k", k.to_string()), ("m", m.to_string())]);
            density_output(&mut report, &mut rec, format!("gamma_{k},{m}"), &v);
            let (x, tol, threads) = ctx.check(check)?;
            if let Some(x) = x {
                empirical(&mut report, &mut rec, &r, &Event::Valuation { k, m }, x, tol, threads, v.approx())?;
            }
            report.records.push(rec);
        }
        Command::Coprime { target, k, check } => {
            let r = ctx.resolve(target)?;
            let k = ctx.need(k, "k")?;
            let v = coprime_closed(k, &r.table()?)?;
            let mut rec = r.record();
            rec.push(("k", k.to_string()));
            density_output(&mut report, &mut rec, format!("coprime_{k}"), &v);
            let (x, tol, threads) = ctx.check(check)?;
            if let Some(x) = x {
                empirical(&mut report, &mut rec, &r, &Event::Coprime(k), x, tol, threads, v.approx())?;
            }
            report.records.push(rec);
        }
        Command::PaperTables { which } => {
            let ids: Vec<u8> = if which == "all" {
                TABLE_IDS.to_vec()
            } else {
                match which.parse::<u8>() {
                    Ok(id) if TABLE_IDS.contains(&id) => vec![id],
                    _ => bail!("paper-tables: expected 1-8 or 'all', got '{which}'"),
                }
            };
            for id in ids {
                let cells = check_table(id)?;
                let mut rows = vec![["field", "group", "column", "expected", "computed", "status"].map(String::from).to_vec()];
                let matched = cells.iter().filter(|c| c.ok).count();
                for c in &cells {
                    let status = if c.ok { "ok" } else { "MISMATCH" };
                    rows.push(vec![
                        c.field.clone(),
                        format!("<{}>", c.group),
                        c.column.clone(),
                        c.expected.clone(),
                        c.computed.clone(),
                        status.into(),
                    ]);
                    if !c.ok {
                        report.failures.push(format!(
                            "table {id} {} <{}> {}: expected {}, computed {}",
                            c.field, c.group, c.column, c.expected, c.computed
                        ));
                    }
                    report.records.push(vec![
                        ("table", id.to_string()),
                        ("field", c.field.clone()),
                        ("group", c.group.clone()),
                        ("column", c.column.clone()),
                        ("expected", c.expected.clone()),
                        ("computed", c.computed.clone()),
                        ("status", status.into()),
                    ]);
                }
                report.lines.push(format!("table {id}: {} cells, {matched} match", cells.len()));
                report.lines.extend(align(&rows).into_iter().map(|l| format!("  {l}")));
            }
        }
        Command::Verify { target, event, x, tolerance, threads } => {
            let r = ctx.resolve(target)?;
            let event: Event = ctx.need::<String>(event, "event")?.parse()?;
            let x = ctx.cfg.pick(x, "x")?.map_or(1_000_000, |c| c.0);
            let tol = ctx.cfg.pick(tolerance, "tolerance")?.unwrap_or(0.01);
            let threads = ctx.cfg.pick(threads, "threads")?;
            let (rendered, exact) = expected(&event, &r.table()?)?;
            let mut rec = r.record();
            report.lines.push(format!("exact {rendered}"));
            let (value, approx) = split_approx(&rendered);
            rec.extend([("value", value), ("approx", approx)]);
            empirical(&mut report, &mut rec, &r, &event, x, tol, threads, exact)?;
            report.records.push(rec);
        }
        Command::DegreeTable { target, out } => {
            let r = ctx.resolve(target)?;
            let t = compute_degree_table(&r.group)?;
            for (&(g, h), d) in t.entries() {
                report.records.push(vec![("g", g.to_string()), ("h", h.to_string()), ("degree", d.to_string())]);
            }
            match out {
                Some(path) => {
                    t.save(&path).with_context(|| format!("writing {}", path.display()))?;
                    report.lines.push(format!("wrote {} entries (z = {}) to {}", t.entries().len(), t.z(), path.display()));
                }
                None => report.lines.extend(t.to_text().lines().map(String::from)),
            }
        }
    }
    Ok((report, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format)) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = report.write(format, &mut stdout).and_then(|_| Ok(stdout.flush()?)) {
                let broken_pipe = e
                    .chain()
                    .any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe));
                if !broken_pipe {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            }
            for f in &report.failures {
                eprintln!("check failed: {f}");
            }
            if report.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
