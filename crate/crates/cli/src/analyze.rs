use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::Args;
use qipsim::analysis::{model_grid, r_curves, R_CURVE_TARGETS};
use serde::Serialize;

use crate::exit;

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Emit per-attempt probability curves for the standard targets.
    #[arg(long)]
    r_curves: bool,
    /// Largest attempt count on the curves.
    #[arg(long, default_value_t = 100)]
    r_max: u64,
    /// Model grid such as `n=2..8 m=2..8 d=3 eps=0.1`.
    #[arg(long, num_args = 1..)]
    grid: Option<Vec<String>>,
    /// Directory for model_grid.csv and r_curves.csv; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, PartialEq)]
pub struct GridSpec {
    pub ns: RangeInclusive<u32>,
    pub ms: RangeInclusive<u32>,
    pub d: u32,
    pub eps: f64,
}

fn parse_range(v: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("invalid range {v:?}");
    let r = match v.split_once("..") {
        Some((a, b)) => a.parse().map_err(|_| bad())?..=b.parse().map_err(|_| bad())?,
        None => {
            let x = v.parse().map_err(|_| bad())?;
            x..=x
        }
    };
    if r.is_empty() {
        return Err(format!("empty range {v:?}"));
    }
    Ok(r)
}

/// Parses `key=value` tokens; `n` and `m` are required, `d` defaults to 3
/// and `eps` to 0.1.
pub fn parse_grid(tokens: &[String]) -> Result<GridSpec, String> {
    let (mut ns, mut ms, mut d, mut eps) = (None, None, 3, 0.1);
    for tok in tokens.iter().flat_map(|t| t.split_whitespace()) {
        let (key, value) = tok.split_once('=').ok_or_else(|| format!("expected key=value, got {tok:?}"))?;
        match key {
            "n" => ns = Some(parse_range(value)?),
            "m" => ms = Some(parse_range(value)?),
            "d" => d = value.parse().map_err(|_| format!("invalid d {value:?}"))?,
            "eps" => eps = value.parse().map_err(|_| format!("invalid eps {value:?}"))?,
            _ => return Err(format!("unknown grid key {key:?}")),
        }
    }
    Ok(GridSpec { ns: ns.ok_or("grid needs n")?, ms: ms.ok_or("grid needs m")?, d, eps })
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

fn tables(a: &AnalyzeArgs) -> Result<Vec<(&'static str, Vec<u8>)>, String> {
    let mut out = Vec::new();
    if let Some(tokens) = &a.grid {
        let g = parse_grid(tokens)?;
        let rows = model_grid(g.ns, g.ms, g.d, g.eps).map_err(|e| e.to_string())?;
        out.push(("model_grid.csv", to_csv(&rows)?));
    }
    if a.r_curves {
        let rows = r_curves(&R_CURVE_TARGETS, a.r_max).map_err(|e| e.to_string())?;
        out.push(("r_curves.csv", to_csv(&rows)?));
    }
    if out.is_empty() {
        return Err("nothing to do: pass --grid and/or --r-curves".into());
    }
    Ok(out)
}

pub fn run(a: AnalyzeArgs) -> u8 {
    let tables = match tables(&a) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::USAGE;
        }
    };
    let written = match &a.out {
        Some(dir) => std::fs::create_dir_all(dir)
            .and_then(|_| tables.iter().try_for_each(|(name, bytes)| std::fs::write(dir.join(name), bytes))),
        None => {
            let mut stdout = std::io::stdout().lock();
            tables.iter().try_for_each(|(_, bytes)| stdout.write_all(bytes))
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return exit::MISMATCH;
    }
    0
}
