//! `charmatch`: build expansions, verify matching, reproduce figures.

mod config;
mod figures;
mod model;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{parse_interval, Grid, Num, Output, RunConfig};
use output::{fmt17, Role, Series, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(charmatch::Error),
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(charmatch::Error::FamilyMismatch { .. }) => 3,
            _ => 2,
        }
    }
}

impl From<charmatch::Error> for CliError {
    fn from(e: charmatch::Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "charmatch", version, about = "Function approximation by characteristic-number matching")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print characteristic numbers and coefficients; optionally evaluate on a grid.
    Coeffs(RunArgs),
    /// Re-measure the approximant and compare with the characteristic numbers.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Build from data with c_N shifted by 1e-3·(1 + c_N) (negative control).
        #[arg(long, value_name = "N")]
        perturb: Option<usize>,
        /// Measure under another family: derivative, moment, higher_integral, endpoint_difference.
        #[arg(long)]
        family: Option<String>,
    },
    /// Write the CSV (and SVG) of a built-in figure.
    Figure {
        /// One of the names printed by `charmatch figure list`.
        name: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Grid error norms of several approximants of one function.
    Compare {
        /// Config files, one per approximant.
        configs: Vec<PathBuf>,
        /// Kinds sharing the flag settings, as an alternative to config files.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// Function of x, e.g. "exp(x)" or "sqrt(4 - x^2)".
    #[arg(long = "f", allow_hyphen_values = true)]
    function: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// a,b
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
    /// Anchor point for bernoulli (c_0 = f(anchor)) and ws_integral.
    #[arg(long, allow_hyphen_values = true)]
    anchor: Option<String>,
    /// lo,hi,points
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// ws-a … ws-f
    #[arg(long)]
    preset: Option<String>,
    /// ln, sqrt, cube or identity
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn flags(&self) -> Result<RunConfig, CliError> {
        Ok(RunConfig {
            function: self.function.clone(),
            kind: self.kind.clone(),
            order: self.order,
            x0: self.x0.clone().map(Num::Text),
            w: self.w.clone().map(Num::Text),
            q: self.q,
            alpha: self.alpha.clone().map(Num::Text),
            interval: self.interval.as_deref().map(parse_interval).transpose()?,
            anchor: self.anchor.as_deref().map(config::constant_f64).transpose()?,
            preset: self.preset.clone(),
            lambda: self.lambda.clone(),
            grid: self.grid.as_deref().map(Grid::parse).transpose()?,
            output: Output {
                csv: self.csv.clone(),
                svg: self.svg.clone(),
                json: self.json.clone(),
            },
        })
    }

    fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        Ok(base.overlay(self.flags()?))
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: Option<&PathBuf>, value: &T) -> Result<String, CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(p) = path {
        write_file(p, &(text.clone() + "\n"))?;
    }
    Ok(text)
}

fn write_table(table: &Table, out: &Output) -> Result<(), CliError> {
    if let Some(p) = &out.csv {
        write_file(p, &table.to_csv())?;
    }
    if let Some(p) = &out.svg {
        write_file(p, &table.to_svg())?;
    }
    Ok(())
}

fn grid_table(cfg: &RunConfig, models: &[(String, &dyn charmatch::framework::Approximant)]) -> Result<Option<Table>, CliError> {
    let Some(grid) = cfg.grid else { return Ok(None) };
    grid.validate()?;
    let f = charmatch::jets::parse_expr(cfg.function()?)?;
    let xs = grid.xs();
    let fv: Vec<f64> = xs.iter().map(|&x| f.eval(x).unwrap_or(f64::NAN)).collect();
    let mut series = vec![Series { name: "f".into(), role: Role::Reference, values: fv.clone() }];
    let mut errors = Vec::new();
    for (label, a) in models {
        let v: Vec<f64> = xs.iter().map(|&x| a.eval(x).unwrap_or(f64::NAN)).collect();
        errors.push(Series {
            name: format!("err_{label}"),
            role: Role::Error,
            values: v.iter().zip(&fv).map(|(a, f)| a - f).collect(),
        });
        series.push(Series { name: label.clone(), role: Role::Approximant, values: v });
    }
    series.append(&mut errors);
    Ok(Some(Table { title: cfg.function()?.to_string(), xs, series }))
}

fn cmd_coeffs(run: &RunArgs) -> Result<ExitCode, CliError> {
    let cfg = run.resolve()?;
    let m = model::model(&cfg, None, None)?;
    let t = &m.table;
    let mut header = "n,c_n,a_n".to_string();
    if let Some((name, _)) = &t.extra {
        header.push(',');
        header.push_str(name);
    }
    println!("# {} | {} | {}", t.kind, t.family, if t.exact { "exact" } else { "float" });
    println!("{header}");
    let rows = t.c.len().max(t.a.len());
    for i in 0..rows {
        let mut line = format!(
            "{},{},{}",
            i + t.start,
            t.c.get(i).map_or("", String::as_str),
            t.a.get(i).map_or("", String::as_str)
        );
        if let Some((_, v)) = &t.extra {
            line.push(',');
            line.push_str(v.get(i).map_or("", String::as_str));
        }
        println!("{line}");
    }
    write_json(cfg.output.json.as_ref(), t)?;
    if let Some(table) = grid_table(&cfg, &[(t.kind.clone(), m.approx.as_ref())])? {
        write_table(&table, &cfg.output)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(run: &RunArgs, perturb: Option<usize>, family: Option<&str>) -> Result<ExitCode, CliError> {
    let cfg = run.resolve()?;
    let m = model::model(&cfg, perturb, family)?;
    println!("{}", write_json(cfg.output.json.as_ref(), &m.report)?);
    Ok(if m.report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_figure(name: &str, csv: Option<PathBuf>, svg: Option<PathBuf>) -> Result<ExitCode, CliError> {
    if name == "list" {
        for f in figures::FIGURES {
            println!("{f}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let table = figures::figure(name)?;
    if csv.is_none() {
        print!("{}", table.to_csv());
    }
    write_table(&table, &Output { csv, svg, json: None })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CompareRow {
    label: String,
    max_abs: f64,
    l2: f64,
}

fn cmd_compare(configs: &[PathBuf], kinds: &[String], run: &RunArgs) -> Result<ExitCode, CliError> {
    let flags = run.flags()?;
    let mut cfgs: Vec<RunConfig> = Vec::new();
    for p in configs {
        cfgs.push(RunConfig::load(p)?.overlay(flags.clone()));
    }
    let base = run.resolve()?;
    for k in kinds {
        cfgs.push(RunConfig {
            kind: Some(k.clone()),
            ..base.clone()
        });
    }
    if cfgs.len() < 2 {
        return Err(CliError::usage("compare needs at least two configs or kinds"));
    }
    let first = &cfgs[0];
    let grid = first.grid.ok_or_else(|| CliError::usage("compare needs a grid (--grid lo,hi,points)"))?;
    grid.validate()?;
    for c in &cfgs[1..] {
        if c.grid != first.grid {
            return Err(CliError::usage("configs use different grids"));
        }
        if c.function != first.function {
            return Err(CliError::usage("configs approximate different functions"));
        }
    }
    let models = cfgs.iter().map(|c| model::model(c, None, None)).collect::<Result<Vec<_>, _>>()?;
    let labelled: Vec<(String, &dyn charmatch::framework::Approximant)> = models
        .iter()
        .zip(&cfgs)
        .enumerate()
        .map(|(i, (m, c))| (format!("{}:{}:N={}", i, m.table.kind, c.order()), m.approx.as_ref()))
        .collect();
    let table = grid_table(first, &labelled)?.expect("grid checked above");
    let h = (grid.hi - grid.lo) / (grid.points - 1) as f64;
    let rows: Vec<CompareRow> = table
        .series
        .iter()
        .filter(|s| s.role == Role::Error)
        .zip(&labelled)
        .map(|(s, (label, _))| {
            let max_abs = s.values.iter().fold(0.0f64, |m, e| if e.is_nan() || m.is_nan() { f64::NAN } else { m.max(e.abs()) });
            let l2 = (h * s.values.iter().map(|e| e * e).sum::<f64>()).sqrt();
            CompareRow { label: label.clone(), max_abs, l2 }
        })
        .collect();
    println!("label,max_abs,l2");
    for r in &rows {
        println!("{},{},{}", r.label, fmt17(r.max_abs), fmt17(r.l2));
    }
    write_json(first.output.json.as_ref(), &rows)?;
    write_table(&table, &first.output)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Coeffs(run) => cmd_coeffs(run),
        Cmd::Verify { run, perturb, family } => cmd_verify(run, *perturb, family.as_deref()),
        Cmd::Figure { name, csv, svg } => cmd_figure(name, csv.clone(), svg.clone()),
        Cmd::Compare { configs, kinds, run } => cmd_compare(configs, kinds, run),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
