mod output;

use clap::{Parser, Subcommand};
use dpsolid::detector::{evaluate_detector, traces};
use dpsolid::formulary::{lifetime, rule_of_thumb_energy, total_energy, Model, SuperposedSolid};
use dpsolid::materials::{derive, sigma_sound, Catalog};
use dpsolid::oracle::checks::{self, CHECK_NAMES};
use dpsolid::oracle::{Method, QuadratureSpec};
use dpsolid::scenario::{Overrides, Scenario, BUNDLED};
use dpsolid::units::{parse_as, Dim};
use dpsolid::{constants::AMU, Error};
use output::{num, opt, write_trace, Format, Table};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Diósi-Penrose energies and superposition lifetimes of solids, detector
/// components and a single-photon detector.
#[derive(Parser)]
#[command(name = "dpsolid", version)]
struct Cli {
    /// Material catalog replacing the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Temperature, e.g. "300 K" (a bare number is taken in kelvin).
    #[arg(long, global = true, value_name = "T")]
    temperature: Option<String>,
    /// Model variant: penrose (short + long distance) or diosi (smeared).
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Directory for trace files.
    #[arg(long, global = true, value_name = "DIR")]
    traces: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derived quantities of every catalog material.
    Materials,
    /// Energy and lifetime of the [solid] section of a scenario.
    Solid {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
    },
    /// Energy and lifetime of the [component] section of a scenario.
    Component {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
    },
    /// Lifetime report for the [detector] section of a scenario.
    Detector {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
    },
    /// Cross-check a closed form against the brute-force oracle.
    Oracle {
        /// Check name; `list` prints the known names.
        check: String,
        /// Cells across the thinnest feature.
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        /// pairwise or grid.
        #[arg(long, default_value = "pairwise")]
        method: String,
    },
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(format!("i/o error: {e}"))
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn temperature(cli: &Cli) -> Result<Option<f64>, Failure> {
    let Some(t) = &cli.temperature else { return Ok(None) };
    let v = match t.trim().parse::<f64>() {
        Ok(v) => v,
        Err(_) => parse_as(t, Dim::TEMPERATURE)?,
    };
    if !(v > 0.0 && v.is_finite()) {
        return Err(Failure::Input(format!("temperature must be positive, got {t}")));
    }
    Ok(Some(v))
}

fn catalog(cli: &Cli) -> Result<Option<Catalog>, Failure> {
    Ok(match &cli.catalog {
        Some(p) => Some(Catalog::load(p)?),
        None => None,
    })
}

fn overrides(cli: &Cli) -> Result<Overrides, Failure> {
    Ok(Overrides {
        catalog: catalog(cli)?,
        temperature: temperature(cli)?,
        model: cli.model.as_deref().map(str::parse::<Model>).transpose()?,
    })
}

fn scenario(cli: &Cli, name: &str) -> Result<Scenario, Failure> {
    let o = overrides(cli)?;
    let path = Path::new(name);
    if path.exists() {
        Ok(Scenario::load(path, &o)?)
    } else if BUNDLED.iter().any(|(n, _)| *n == name) {
        Ok(Scenario::bundled(name, &o)?)
    } else {
        let names: Vec<&str> = BUNDLED.iter().map(|b| b.0).collect();
        Err(Failure::Input(format!("no scenario file '{name}' and no bundled scenario of that name ({})", names.join(", "))))
    }
}

fn trace_dir(cli: &Cli) -> Result<Option<&Path>, Failure> {
    match &cli.traces {
        Some(d) => {
            std::fs::create_dir_all(d)?;
            Ok(Some(d.as_path()))
        }
        None => Ok(None),
    }
}

/// Notes go below a table, or to stderr when the output is CSV.
fn notes(out: &mut impl Write, format: Format, lines: &[String]) -> std::io::Result<()> {
    for l in lines {
        match format {
            Format::Table => writeln!(out, "{l}")?,
            Format::Csv => eprintln!("{l}"),
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let out = &mut std::io::stdout().lock();
    match &cli.command {
        Command::Materials => materials(cli, out),
        Command::Solid { scenario: s } => solid(cli, &scenario(cli, s)?, out),
        Command::Component { scenario: s } => component(cli, &scenario(cli, s)?, out),
        Command::Detector { scenario: s } => detector(cli, &scenario(cli, s)?, out),
        Command::Oracle { check, resolution, method } => oracle(cli, check, *resolution, method, out),
    }
}

fn materials(cli: &Cli, out: &mut impl Write) -> Outcome {
    let cat = catalog(cli)?.unwrap_or_else(Catalog::bundled);
    let t = temperature(cli)?.unwrap_or(dpsolid::constants::ROOM_TEMPERATURE);
    let mut table = Table::new(&[
        ("material", "-"),
        ("m_bar", "u"),
        ("rho", "g/cm3"),
        ("theta_D", "K"),
        ("v_par", "m/s"),
        ("v_perp", "m/s"),
        ("g_bar", "Å"),
        ("q_hat", "1"),
        ("sigma_theta", "Å"),
        ("sigma_v", "Å"),
        ("T_G_S/hbar", "MHz/cm3"),
    ])
    .titled(&format!("materials at {t} K"));
    for m in cat.materials() {
        let d = derive(m, t)?;
        table.push(vec![
            m.name.clone(),
            format!("{:.2}", d.m_bar / AMU),
            format!("{:.3}", m.rho / 1e3),
            format!("{:.0}", m.theta_d),
            m.v_par.map(|v| format!("{v:.0}")).unwrap_or_else(|| "-".into()),
            m.v_perp.map(|v| format!("{v:.0}")).unwrap_or_else(|| "-".into()),
            format!("{:.3}", d.g_bar * 1e10),
            format!("{:.3}", d.q_hat),
            format!("{:.4}", d.sigma * 1e10),
            sigma_sound(m, t).map(|s| format!("{:.4}", s * 1e10)).unwrap_or_else(|_| "-".into()),
            format!("{:.3}", d.rate_density() * 1e-6 * 1e-6),
        ]);
    }
    table.write(out, cli.format)?;
    Ok(0)
}

fn solid(cli: &Cli, s: &Scenario, out: &mut impl Write) -> Outcome {
    let sec = s.solid.as_ref().ok_or_else(|| Failure::Input("scenario has no [solid] section".into()))?;
    if sec.displacement.is_none() && sec.sweep.is_none() {
        return Err(Failure::Input("solid: give a displacement or a sweep".into()));
    }
    let m = &sec.material.derived;
    if let Some(ds) = sec.displacement {
        let solid = SuperposedSolid::new(sec.geometry, m.clone(), sec.volume, ds, s.model)?;
        let e = total_energy(&solid);
        let mut t = Table::new(&[("quantity", "-"), ("value", "-"), ("unit", "-")]).titled(&format!(
            "{} {} under {}",
            sec.geometry.label(),
            m.name,
            model_name(s.model)
        ));
        let thumb = match rule_of_thumb_energy(&solid) {
            Ok(e) => (num(e), num(lifetime(e)?)),
            Err(Error::AmbiguousBand { .. }) => ("-".into(), "-".into()),
            Err(e) => return Err(e.into()),
        };
        let rows = [
            ("volume", num(sec.volume), "m3"),
            ("displacement", num(ds), "m"),
            ("displacement/sigma", num(ds / m.sigma), "1"),
            ("regime", format!("{:?}", e.regime), "-"),
            ("short-distance energy", num(e.short_distance), "J"),
            ("long-distance energy", num(e.long_distance), "J"),
            ("energy", num(e.total), "J"),
            ("energy/hbar", num(e.total / dpsolid::constants::HBAR), "1/s"),
            ("lifetime", num(lifetime(e.total)?), "s"),
            ("chi", num(e.chi), "1"),
            ("rule-of-thumb energy", thumb.0, "J"),
            ("rule-of-thumb lifetime", thumb.1, "s"),
        ];
        for (q, v, u) in rows {
            t.push(vec![q.into(), v, u.into()]);
        }
        t.write(out, cli.format)?;
    }
    if let Some(sweep) = &sec.sweep {
        let mut t = Table::new(&[("displacement", "m"), ("short", "J"), ("long", "J"), ("total", "J")]).titled("sweep");
        let mut rows = Vec::new();
        for ds in sweep.values() {
            let e = total_energy(&SuperposedSolid::new(sec.geometry, m.clone(), sec.volume, ds, s.model)?);
            rows.push((ds, e.short_distance, e.long_distance, e.total));
            t.push(vec![num(ds), num(e.short_distance), num(e.long_distance), num(e.total)]);
        }
        match trace_dir(cli)? {
            Some(dir) => {
                let mut w = csv::Writer::from_path(dir.join("sweep.csv"))?;
                w.write_record(["ds [m]", "short [J]", "long [J]", "total [J]"])?;
                for (a, b, c, d) in rows {
                    w.write_record([a, b, c, d].map(|v| format!("{v:.9e}")))?;
                }
                w.flush()?;
            }
            None => t.write(out, cli.format)?,
        }
    }
    Ok(0)
}

fn model_name(m: Model) -> &'static str {
    match m {
        Model::PenroseFull => "penrose",
        Model::DiosiSmeared => "diosi",
    }
}

fn component(cli: &Cli, s: &Scenario, out: &mut impl Write) -> Outcome {
    let sec = s.component.as_ref().ok_or_else(|| Failure::Input("scenario has no [component] section".into()))?;
    let r = sec.evaluate(s.model)?;
    let mut t = Table::new(&[("effect", "-"), ("displacement", "m"), ("energy", "J")])
        .titled(&format!("{} under {}", r.name, model_name(s.model)));
    for e in &r.detail {
        t.push(vec![e.label.clone(), num(e.displacement), num(e.energy)]);
    }
    t.write(out, cli.format)?;
    let mut sum = Table::new(&[("quantity", "-"), ("value", "-"), ("unit", "-")]);
    sum.push(vec!["energy".into(), num(r.energy), "J".into()]);
    sum.push(vec!["lifetime".into(), num(r.lifetime), "s".into()]);
    sum.push(vec!["settling time".into(), opt(r.settling), "s".into()]);
    sum.push(vec!["displacement/sigma".into(), num(r.displacement_ratio), "1".into()]);
    sum.push(vec!["temperature rise".into(), opt(r.temperature_rise), "K".into()]);
    sum.write(out, cli.format)?;
    let lines: Vec<String> = r.warnings.iter().map(|w| format!("warning: {w}")).collect();
    notes(out, cli.format, &lines)?;
    Ok(0)
}

fn detector(cli: &Cli, s: &Scenario, out: &mut impl Write) -> Outcome {
    let d = s.detector.as_ref().ok_or_else(|| Failure::Input("scenario has no [detector] section".into()))?;
    let r = evaluate_detector(d)?;
    let mut t = Table::new(&[
        ("component", "-"),
        ("energy", "J"),
        ("lifetime", "s"),
        ("settling", "s"),
        ("displacement/sigma", "1"),
        ("temperature rise", "K"),
        ("flags", "-"),
    ])
    .titled(&format!("detector under {}", model_name(r.model)));
    let mut lines = Vec::new();
    for c in &r.components {
        match &c.result {
            Ok(x) => {
                let mut flags = Vec::new();
                if x.settling_warning {
                    flags.push("settling");
                }
                if r.bottleneck.as_deref() == Some(c.name.as_str()) {
                    flags.push("bottleneck");
                }
                t.push(vec![
                    c.name.clone(),
                    num(x.energy),
                    num(x.lifetime),
                    opt(x.settling),
                    num(x.displacement_ratio),
                    opt(x.temperature_rise),
                    if flags.is_empty() { "-".into() } else { flags.join("+") },
                ]);
                lines.extend(x.warnings.iter().map(|w| format!("warning: {}: {w}", c.name)));
            }
            Err(e) => {
                t.push(vec![c.name.clone(), "-".into(), "-".into(), "-".into(), "-".into(), "-".into(), "error".into()]);
                lines.push(format!("error: {}: {e}", c.name));
            }
        }
    }
    t.write(out, cli.format)?;

    let mut sum = Table::new(&[("quantity", "-"), ("value", "-"), ("unit", "-")]).titled("summary");
    let mut row = |q: &str, v: String, u: &str| sum.push(vec![q.into(), v, u.into()]);
    row("current squared integral", num(r.i2t), "A2·s");
    row("bias-loop quench time", num(r.quench_time), "s");
    row("bottleneck", r.bottleneck.clone().unwrap_or_else(|| "-".into()), "-");
    row("combined energy (interpretation)", num(r.combined_energy), "J");
    row("combined lifetime (interpretation)", num(r.combined_lifetime), "s");
    if let Some(p) = &r.piezo {
        row("piezo charging time constant", num(p.time_constant), "s");
        row("piezo-path quench time", num(p.quench_time), "s");
        row("piezo lifetime", num(p.lifetime), "s");
        row("piezo lifetime, long distance only", num(p.long_distance_lifetime), "s");
        row("piezo displacement at lifetime", num(p.displacement_at_lifetime), "m");
        row("piezo voltage at lifetime", num(p.voltage_at_lifetime), "V");
        row("piezo lifetime before quench", p.before_quench.to_string(), "-");
    }
    sum.write(out, cli.format)?;
    lines.extend(r.notes.iter().map(|n| format!("note: {n}")));
    notes(out, cli.format, &lines)?;

    if let Some(dir) = trace_dir(cli)? {
        for tr in traces(d, &r)? {
            write_trace(&dir.join(format!("{}.csv", tr.name)), tr.columns, &tr.rows)?;
        }
    }
    if let Some((name, e)) = r.errors().find(|(_, e)| e.is_numerical()) {
        return Err(Failure::Numerical(format!("{name}: {e}")));
    }
    Ok(0)
}

fn oracle(cli: &Cli, check: &str, resolution: usize, method: &str, out: &mut impl Write) -> Outcome {
    if check == "list" {
        for n in CHECK_NAMES {
            writeln!(out, "{n}")?;
        }
        return Ok(0);
    }
    let method = match method {
        "pairwise" => Method::PairwiseSum,
        "grid" => Method::PotentialGrid,
        other => return Err(Failure::Input(format!("unknown method '{other}' (expected pairwise or grid)"))),
    };
    let q = QuadratureSpec { method, ..QuadratureSpec::with_resolution(resolution) };
    let report = checks::run(check, &q)?;
    let mut t = Table::new(&[
        ("case", "-"),
        ("reference", "-"),
        ("oracle", "-"),
        ("error estimate", "-"),
        ("tolerance", "1"),
        ("result", "-"),
    ])
    .titled(&format!("oracle check {} at resolution {resolution}", report.name));
    for r in &report.rows {
        t.push(vec![
            r.label.clone(),
            num(r.reference),
            num(r.value),
            num(r.error),
            num(r.tolerance),
            if r.pass { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    t.write(out, cli.format)?;
    let lines: Vec<String> = report.notes.iter().map(|n| format!("note: {n}")).collect();
    notes(out, cli.format, &lines)?;
    Ok(if report.passed() { 0 } else { 1 })
}
