use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::anyhow;

use crate::commands::{read_input, TIMEOUT_EXIT};
use crate::{CmdResult, Failure};

pub const CSV_HEADER: [&str; 8] = [
    "dataset",
    "query",
    "load_ms",
    "translate_ms",
    "saturate_ms",
    "answer_ms",
    "answers",
    "status",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub ontologies: Vec<PathBuf>,
    pub queries: Vec<PathBuf>,
    pub timeout_s: f64,
    pub repeat: usize,
    pub demand_mode: bool,
    pub output_csv: Option<PathBuf>,
    pub parallel: usize,
}

fn config_error(msg: String) -> Failure {
    Failure::new(2, anyhow!(msg))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, Failure> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(config_error(format!(
            "{key}: expected a boolean, got `{v}`"
        ))),
    }
}

impl BenchConfig {
    /// Parses `key = value` lines; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, Failure> {
        let mut cfg = BenchConfig {
            ontologies: Vec::new(),
            queries: Vec::new(),
            timeout_s: 60.0,
            repeat: 3,
            demand_mode: false,
            output_csv: None,
            parallel: 1,
        };
        let paths = |v: &str| -> Vec<PathBuf> {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| base.join(s))
                .collect()
        };
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(format!("line {}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let number_err =
                |_| config_error(format!("line {}: {key}: invalid number `{value}`", n + 1));
            match key {
                "ontologies" => cfg.ontologies.extend(paths(value)),
                "queries" => cfg.queries.extend(paths(value)),
                "timeout_s" => {
                    cfg.timeout_s = value
                        .parse()
                        .map_err(|e: std::num::ParseFloatError| number_err(e.to_string()))?
                }
                "repeat" => {
                    cfg.repeat = value
                        .parse()
                        .map_err(|e: std::num::ParseIntError| number_err(e.to_string()))?
                }
                "parallel" => {
                    cfg.parallel = value
                        .parse()
                        .map_err(|e: std::num::ParseIntError| number_err(e.to_string()))?
                }
                "demand_mode" => cfg.demand_mode = parse_bool(key, value)?,
                "output_csv" => cfg.output_csv = Some(base.join(value)),
                _ => return Err(config_error(format!("line {}: unknown key `{key}`", n + 1))),
            }
        }
        if cfg.ontologies.is_empty() || cfg.queries.is_empty() {
            return Err(config_error(
                "both `ontologies` and `queries` must be given".into(),
            ));
        }
        if cfg.timeout_s.is_nan() || cfg.timeout_s <= 0.0 {
            return Err(config_error("timeout_s must be positive".into()));
        }
        if cfg.repeat == 0 || cfg.parallel == 0 {
            return Err(config_error(
                "repeat and parallel must be at least 1".into(),
            ));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Oot,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Oot => "OOT",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub query: String,
    pub load_ms: Option<f64>,
    pub translate_ms: Option<f64>,
    pub saturate_ms: Option<f64>,
    pub answer_ms: Option<f64>,
    pub answers: Option<usize>,
    pub status: Status,
}

impl BenchRow {
    fn record(&self) -> [String; 8] {
        let ms = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
        [
            self.dataset.clone(),
            self.query.clone(),
            ms(self.load_ms),
            ms(self.translate_ms),
            ms(self.saturate_ms),
            ms(self.answer_ms),
            self.answers.map(|a| a.to_string()).unwrap_or_default(),
            self.status.as_str().to_string(),
        ]
    }
}

fn stem(p: &Path) -> String {
    p.file_stem().map_or_else(
        || p.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

/// Reads the `key=value` stats line printed by `metaql query`.
fn parse_stats(stderr: &str) -> Option<BTreeMap<&str, &str>> {
    let line = stderr.lines().find(|l| l.starts_with("answers="))?;
    Some(
        line.split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect(),
    )
}

fn run_once(ontology: &Path, query: &Path, cfg: &BenchConfig) -> BenchRow {
    let mut row = BenchRow {
        dataset: stem(ontology),
        query: stem(query),
        load_ms: None,
        translate_ms: None,
        saturate_ms: None,
        answer_ms: None,
        answers: None,
        status: Status::Error,
    };
    let exe = match std::env::current_exe() {
        Ok(p) => p,
        Err(_) => return row,
    };
    let mut cmd = Command::new(exe);
    cmd.arg("query").arg(ontology).arg(query);
    if cfg.demand_mode {
        cmd.arg("--demand");
    }
    let mut child = match cmd.stdout(Stdio::null()).stderr(Stdio::piped()).spawn() {
        Ok(c) => c,
        Err(_) => return row,
    };
    let mut err_pipe = child.stderr.take().expect("piped stderr");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = err_pipe.read_to_string(&mut s);
        s
    });
    let deadline = Instant::now() + Duration::from_secs_f64(cfg.timeout_s);
    let status = loop {
        match child.try_wait() {
            Ok(Some(s)) => break Some(s),
            Ok(None) if Instant::now() >= deadline => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(_) => break None,
        }
    };
    let stderr = reader.join().unwrap_or_default();
    let stats = parse_stats(&stderr);
    let num = |k: &str| {
        stats
            .as_ref()
            .and_then(|m| m.get(k))
            .and_then(|v| v.parse::<f64>().ok())
    };
    row.load_ms = num("load_ms");
    row.translate_ms = num("translate_ms");
    row.saturate_ms = num("saturate_ms");
    row.answer_ms = num("answer_ms");
    row.status = match status {
        None => Status::Oot,
        Some(s) if s.code() == Some(TIMEOUT_EXIT) => Status::Oot,
        Some(s) if s.success() && stats.is_some() => {
            row.answers = num("answers").map(|a| a as usize);
            Status::Ok
        }
        Some(_) => Status::Error,
    };
    row
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    })
}

/// One row summarizing the repeats of a pair: median timings over OK runs,
/// the worst status, and the answer count when all runs agree on it.
pub fn aggregate(runs: &[BenchRow]) -> BenchRow {
    let ok: Vec<&BenchRow> = runs.iter().filter(|r| r.status == Status::Ok).collect();
    let col = |f: fn(&BenchRow) -> Option<f64>| median(ok.iter().filter_map(|r| f(r)).collect());
    let status = runs.iter().map(|r| r.status).max().unwrap_or(Status::Error);
    let answers = match runs.first().and_then(|r| r.answers) {
        Some(a) if runs.iter().all(|r| r.answers == Some(a)) => Some(a),
        _ => None,
    };
    BenchRow {
        dataset: runs[0].dataset.clone(),
        query: format!("{}@median", runs[0].query),
        load_ms: col(|r| r.load_ms),
        translate_ms: col(|r| r.translate_ms),
        saturate_ms: col(|r| r.saturate_ms),
        answer_ms: col(|r| r.answer_ms),
        answers,
        status,
    }
}

/// Runs every pair; repeats of one pair always run back to back on one worker.
pub fn run_suite(cfg: &BenchConfig) -> Vec<BenchRow> {
    let pairs: Vec<(usize, &PathBuf, &PathBuf)> = cfg
        .ontologies
        .iter()
        .flat_map(|o| cfg.queries.iter().map(move |q| (o, q)))
        .enumerate()
        .map(|(i, (o, q))| (i, o, q))
        .collect();
    let queue = Mutex::new(pairs.into_iter());
    let done: Mutex<Vec<(usize, Vec<BenchRow>)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..cfg.parallel {
            s.spawn(|| loop {
                let next = queue.lock().expect("queue lock").next();
                let Some((i, o, q)) = next else { break };
                let runs: Vec<BenchRow> = (0..cfg.repeat).map(|_| run_once(o, q, cfg)).collect();
                done.lock().expect("result lock").push((i, runs));
            });
        }
    });
    let mut done = done.into_inner().expect("result lock");
    done.sort_by_key(|(i, _)| *i);
    let mut rows = Vec::new();
    for (_, runs) in done {
        let agg = aggregate(&runs);
        rows.extend(runs);
        rows.push(agg);
    }
    rows
}

pub fn write_csv(rows: &[BenchRow], out: impl std::io::Write) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(config: &Path, parallel: Option<usize>, output: Option<&Path>) -> CmdResult {
    let text = read_input(config)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let mut cfg = BenchConfig::parse(&text, base)?;
    if let Some(p) = parallel {
        if p == 0 {
            return Err(config_error("--parallel must be at least 1".into()));
        }
        cfg.parallel = p;
    }
    if let Some(o) = output {
        cfg.output_csv = Some(o.to_path_buf());
    }
    let rows = run_suite(&cfg);
    let write_err = |e: csv::Error| Failure::new(1, e);
    match &cfg.output_csv {
        Some(p) => write_csv(&rows, std::fs::File::create(p)?).map_err(write_err)?,
        None => write_csv(&rows, std::io::stdout().lock()).map_err(write_err)?,
    }
    let bad = rows.iter().filter(|r| r.status != Status::Ok).count();
    eprintln!("rows={} not_ok={bad}", rows.len());
    Ok(())
}
