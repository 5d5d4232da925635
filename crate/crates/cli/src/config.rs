//! Run configuration: JSON file values overridden by flags.

use std::path::{Path, PathBuf};

use charmatch::jets::parse_expr;
use charmatch::Rational;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A number given either as JSON number or as text such as `"-1/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Value(f64),
    Text(String),
}

impl Num {
    /// Exact value; decimals are read from their shortest representation.
    pub fn rational(&self) -> Result<Rational, CliError> {
        let text = match self {
            Num::Value(v) => format!("{v}"),
            Num::Text(s) => s.clone(),
        };
        constant_rational(&text)
    }

    pub fn value(&self) -> Result<f64, CliError> {
        match self {
            Num::Value(v) => Ok(*v),
            Num::Text(s) => constant_f64(s),
        }
    }
}

pub fn constant_rational(text: &str) -> Result<Rational, CliError> {
    let e = parse_expr(text).map_err(|e| CliError::usage(format!("'{text}': {e}")))?;
    match e.as_poly() {
        Some(p) if p.degree().unwrap_or(0) == 0 => Ok(p.coeff(0)),
        _ => Err(CliError::usage(format!("'{text}' is not a rational constant"))),
    }
}

pub fn constant_f64(text: &str) -> Result<f64, CliError> {
    let e = parse_expr(text).map_err(|e| CliError::usage(format!("'{text}': {e}")))?;
    let v = e.eval(0.0).map_err(|e| CliError::usage(format!("'{text}': {e}")))?;
    let again = e.eval(1.0).map_err(|e| CliError::usage(format!("'{text}': {e}")))?;
    if v != again || !v.is_finite() {
        return Err(CliError::usage(format!("'{text}' is not a finite constant")));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(CliError::usage("grid must be given as lo,hi,points"));
        }
        let points = parts[2]
            .parse()
            .map_err(|_| CliError::usage(format!("grid point count '{}' is not an integer", parts[2])))?;
        Ok(Grid {
            lo: constant_f64(parts[0])?,
            hi: constant_f64(parts[1])?,
            points,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.points < 2 {
            return Err(CliError::usage("grid needs at least 2 points"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(CliError::usage("grid needs finite lo < hi"));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        let h = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.hi } else { self.lo + h * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub function: Option<String>,
    pub kind: Option<String>,
    pub order: Option<usize>,
    pub x0: Option<Num>,
    pub w: Option<Num>,
    pub q: Option<u32>,
    pub alpha: Option<Num>,
    pub interval: Option<(f64, f64)>,
    pub anchor: Option<f64>,
    pub preset: Option<String>,
    pub lambda: Option<String>,
    pub grid: Option<Grid>,
    #[serde(default)]
    pub output: Output,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(function, kind, order, x0, w, q, alpha, interval, anchor, preset, lambda, grid);
        if other.output.csv.is_some() {
            self.output.csv = other.output.csv;
        }
        if other.output.svg.is_some() {
            self.output.svg = other.output.svg;
        }
        if other.output.json.is_some() {
            self.output.json = other.output.json;
        }
        self
    }

    pub fn function(&self) -> Result<&str, CliError> {
        self.function.as_deref().ok_or_else(|| CliError::usage("no function given (--f)"))
    }

    pub fn kind(&self) -> Result<&str, CliError> {
        self.kind.as_deref().ok_or_else(|| CliError::usage("no expansion kind given (--kind)"))
    }

    pub fn order(&self) -> usize {
        self.order.unwrap_or(10)
    }

    pub fn x0(&self) -> Result<f64, CliError> {
        self.x0.as_ref().map_or(Ok(0.0), Num::value)
    }
}

pub fn parse_interval(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::usage("interval must be given as a,b"));
    }
    Ok((constant_f64(parts[0])?, constant_f64(parts[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_grids() {
        assert_eq!(Num::Text("-1/2".into()).rational().unwrap().to_string(), "-1/2");
        assert_eq!(Num::Value(0.1).rational().unwrap().to_string(), "1/10");
        let g = Grid::parse("-4*pi, 4*pi, 5").unwrap();
        assert_eq!(g.xs().len(), 5);
        assert_eq!(g.xs()[2], 0.0);
        assert!(Grid::parse("0,1,1").unwrap().validate().is_err());
        assert!(Grid::parse("1,0,3").unwrap().validate().is_err());
        assert!(constant_f64("x").is_err());
    }

    #[test]
    fn overlay_prefers_flags() {
        let file: RunConfig = serde_json::from_str(r#"{"function":"exp(x)","order":4,"output":{"csv":"a.csv"}}"#).unwrap();
        let flags = RunConfig {
            order: Some(8),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.order, Some(8));
        assert_eq!(merged.function.as_deref(), Some("exp(x)"));
        assert_eq!(merged.output.csv, Some(PathBuf::from("a.csv")));
        assert!(serde_json::from_str::<RunConfig>(r#"{"fn":"x"}"#).is_err());
    }
}
