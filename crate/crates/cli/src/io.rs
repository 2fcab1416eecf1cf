//! Space files, measured-data tables and output paths.
//!
//! A space file is CSV preceded by `#` directives:
//!
//! ```text
//! #framework lp
//! #knob rate default=0 levels=0,1,2
//! rate,accuracy_loss,runtime
//! 0,0,4.1
//! 1,0.02,2.7
//! ```
//!
//! Knob columns hold level indices. An optional `input_id` column allows
//! several measurements per configuration; they are aggregated by median.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use tradeoff_core::bench::TableEvaluator;
use tradeoff_core::{Aggregation, CombinedConfiguration, Configuration, Knob, Record, TradeoffPoint, TradeoffSpace};

use crate::error::{CliError, CliResult};

/// Environment variable that redirects relative output paths.
pub const OUT_DIR_ENV: &str = "TRADEOFF_OUT_DIR";

pub fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(CliError::io(path))
}

/// Resolves an output path against the output-directory override.
pub fn out_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn write_output(path: &Path, contents: &str) -> CliResult<PathBuf> {
    let path = out_path(path);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(CliError::io(parent))?;
    }
    std::fs::write(&path, contents).map_err(CliError::io(&path))?;
    Ok(path)
}

pub fn read_space(path: &Path) -> CliResult<TradeoffSpace> {
    parse_space(&read_to_string(path)?, &path.display().to_string())
}

fn parse_knob(rest: &str, err: &dyn Fn(String) -> CliError) -> CliResult<Knob> {
    let mut parts = rest.split_whitespace();
    let name = parts.next().ok_or_else(|| err("#knob needs a name".into()))?;
    let (mut default, mut levels) = (None, None);
    for part in parts {
        match part.split_once('=') {
            Some(("default", v)) => {
                default = Some(
                    v.parse::<usize>()
                        .map_err(|_| err(format!("bad default index `{v}`")))?,
                )
            }
            Some(("levels", v)) => levels = Some(v.split(',').map(str::to_string).collect::<Vec<_>>()),
            _ => return Err(err(format!("unexpected knob attribute `{part}`"))),
        }
    }
    let levels = levels.ok_or_else(|| err(format!("knob `{name}` has no levels=")))?;
    Knob::new(name, levels, default.unwrap_or(0)).map_err(|e| err(e.to_string()))
}

pub fn parse_space(text: &str, source: &str) -> CliResult<TradeoffSpace> {
    let err_at = |line: u64| {
        move |message: String| CliError::Parse {
            path: source.to_string(),
            line,
            message,
        }
    };

    let mut framework: Option<String> = None;
    let mut knobs: Vec<Knob> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = err_at(i as u64 + 1);
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("#framework") {
            let id = rest.trim();
            if id.is_empty() || id.contains(char::is_whitespace) {
                return Err(err("#framework needs a single id".into()));
            }
            if framework.replace(id.to_string()).is_some() {
                return Err(err("duplicate #framework directive".into()));
            }
        } else if let Some(rest) = line.strip_prefix("#knob") {
            knobs.push(parse_knob(rest, &err)?);
        }
    }
    let framework = framework.ok_or_else(|| err_at(0)("missing #framework directive".into()))?;
    if knobs.is_empty() {
        return Err(err_at(0)("no #knob directives".into()));
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| err_at(0)(e.to_string()))?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let header_line = reader.position().line();
    let missing = |name: &str| err_at(header_line)(format!("missing column `{name}`"));
    let knob_cols: Vec<usize> = knobs
        .iter()
        .map(|k| column(k.name()).ok_or_else(|| missing(k.name())))
        .collect::<CliResult<_>>()?;
    let loss_col = column("accuracy_loss").ok_or_else(|| missing("accuracy_loss"))?;
    let runtime_col = column("runtime").ok_or_else(|| missing("runtime"))?;
    let input_col = column("input_id");
    let expected = knobs.len() + 2 + usize::from(input_col.is_some());
    if headers.len() != expected {
        return Err(err_at(header_line)(format!(
            "expected {expected} columns, found {}",
            headers.len()
        )));
    }

    let mut order: Vec<Configuration> = Vec::new();
    let mut samples: HashMap<Configuration, Vec<TradeoffPoint>> = HashMap::new();
    let mut seen: HashMap<(Configuration, String), u64> = HashMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err_at(line)(e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let err = err_at(line);
        let mut assignment = BTreeMap::new();
        for (knob, &col) in knobs.iter().zip(&knob_cols) {
            let v = &row[col];
            let level = v
                .parse::<usize>()
                .map_err(|_| err(format!("knob `{}` level `{v}` is not an index", knob.name())))?;
            assignment.insert(knob.name().to_string(), level);
        }
        let config = Configuration {
            framework_id: framework.clone(),
            assignment,
        };
        config.validate(&knobs).map_err(|e| err(e.to_string()))?;
        let number = |col: usize, what: &str| {
            row[col]
                .parse::<f64>()
                .map_err(|_| err(format!("{what} `{}` is not a number", &row[col])))
        };
        let point = TradeoffPoint::new(number(loss_col, "accuracy_loss")?, number(runtime_col, "runtime")?)
            .map_err(|e| err(e.to_string()))?;
        let input = input_col.map(|c| row[c].to_string()).unwrap_or_default();
        if let Some(first) = seen.insert((config.clone(), input.clone()), line) {
            return Err(err(format!("duplicate row for {config} (first on line {first})")));
        }
        samples
            .entry(config.clone())
            .or_insert_with(|| {
                order.push(config.clone());
                Vec::new()
            })
            .push(point);
    }

    let records = order
        .into_iter()
        .map(|c| {
            let point = Aggregation::Median.aggregate(&samples[&c])?;
            Ok(Record::new(c, point))
        })
        .collect::<tradeoff_core::Result<Vec<_>>>()?;
    let default = Configuration::defaults(framework.clone(), &knobs);
    Ok(TradeoffSpace::new(framework, knobs, records, default)?)
}

/// Serializes a space in the format read by [`parse_space`].
pub fn write_space(space: &TradeoffSpace) -> String {
    let mut out = String::new();
    writeln!(out, "#framework {}", space.framework_id()).unwrap();
    for k in space.knobs() {
        writeln!(
            out,
            "#knob {} default={} levels={}",
            k.name(),
            k.default_index(),
            k.levels().join(",")
        )
        .unwrap();
    }
    let names: Vec<&str> = space.knobs().iter().map(Knob::name).collect();
    writeln!(out, "{},accuracy_loss,runtime", names.join(",")).unwrap();
    for r in space.records() {
        for name in &names {
            write!(out, "{},", r.config.assignment[*name]).unwrap();
        }
        writeln!(out, "{},{}", r.point.accuracy_loss(), r.point.runtime()).unwrap();
    }
    out
}

pub const TABLE_HEADER: [&str; 4] = ["framework_assignments", "input_id", "accuracy_loss", "runtime"];

pub fn read_table(path: &Path) -> CliResult<TableEvaluator> {
    let text = read_to_string(path)?;
    let source = path.display().to_string();
    let err_at = |line: u64, message: String| CliError::Parse {
        path: source.clone(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| err_at(1, e.to_string()))?;
    if headers.iter().ne(TABLE_HEADER) {
        return Err(err_at(1, format!("expected header `{}`", TABLE_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| err_at(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let config: CombinedConfiguration =
            serde_json::from_str(&row[0]).map_err(|e| err_at(line, format!("bad framework_assignments: {e}")))?;
        let number = |i: usize| {
            row[i]
                .parse::<f64>()
                .map_err(|_| err_at(line, format!("`{}` is not a number", &row[i])))
        };
        let point = TradeoffPoint::new(number(2)?, number(3)?).map_err(|e| err_at(line, e.to_string()))?;
        rows.push((config, row[1].to_string(), point));
    }
    Ok(TableEvaluator::new(rows)?)
}

pub fn table_csv(rows: impl IntoIterator<Item = (CombinedConfiguration, String, TradeoffPoint)>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Data(e.to_string());
    w.write_record(TABLE_HEADER).map_err(csv_err)?;
    for (config, input, point) in rows {
        let json = serde_json::to_string(&config).map_err(|e| CliError::Data(e.to_string()))?;
        w.write_record([
            json,
            input,
            point.accuracy_loss().to_string(),
            point.runtime().to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
