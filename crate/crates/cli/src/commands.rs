use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::anyhow;
use metaql::lubm::{self, LubmConfig};
use metaql::model::{ConjunctiveQuery, Entity};
use metaql::oracle::{AnswerMode, Oracle};
use metaql::owl::{normalize_ontology, parse_ontology, Ontology};
use metaql::pipeline::{Reasoner, ReasonerOptions};
use metaql::rules::builtin_rules;
use metaql::sparql::{parse_query, to_conjunctive};
use metaql::translate::translate_ontology;

use crate::{CmdResult, Failure, QueryArgs};

/// Exit code used when `--timeout` fires.
pub const TIMEOUT_EXIT: i32 = 3;

pub fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        let code = if e.kind() == io::ErrorKind::NotFound {
            2
        } else {
            1
        };
        Failure::new(code, anyhow!("{}: {e}", path.display()))
    })
}

fn load_ontology(path: &Path) -> Result<Ontology, Failure> {
    let text = read_input(path)?;
    parse_ontology(&text).map_err(|e| Failure::new(1, anyhow!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_query(args: &QueryArgs) -> Result<ConjunctiveQuery, Failure> {
    let text = match (&args.query, &args.query_string) {
        (_, Some(s)) => s.clone(),
        (Some(p), None) => read_input(p)?,
        (None, None) => {
            return Err(Failure::new(
                2,
                anyhow!("a query file or --query-string is required"),
            ))
        }
    };
    let q = parse_query(&text).map_err(|e| Failure::new(1, e))?;
    to_conjunctive(&q).map_err(|e| Failure::new(1, e))
}

fn format_rows(rows: &[Vec<Entity>]) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<&str> = row.iter().map(Entity::iri).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

/// Exits the whole process once `secs` have elapsed.
fn arm_timeout(secs: Option<f64>) {
    if let Some(s) = secs.filter(|s| *s > 0.0) {
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_secs_f64(s));
            eprintln!("error: timed out after {s} s");
            std::process::exit(TIMEOUT_EXIT);
        });
    }
}

pub fn translate(ontology: &Path, output: Option<&Path>) -> CmdResult {
    let o = normalize_ontology(&load_ontology(ontology)?);
    let facts = translate_ontology(&o).map_err(|e| Failure::new(1, e))?;
    emit(output, &facts.to_dl())?;
    eprintln!("axioms={} facts={}", o.len(), facts.len());
    Ok(())
}

pub fn rules(stats: bool, violation: bool, output: Option<&Path>) -> CmdResult {
    let cat = if violation {
        builtin_rules().with_violation_rules()
    } else {
        builtin_rules().clone()
    };
    if stats {
        let mut s = String::new();
        for (family, n) in cat.stats() {
            writeln!(s, "{}\t{n}", family.tag()).expect("string write");
        }
        writeln!(s, "total\t{}", cat.len()).expect("string write");
        emit(output, &s)
    } else {
        emit(output, &cat.to_dl())
    }
}

pub fn query(args: &QueryArgs, threads: usize, dump_model: Option<&Path>) -> CmdResult {
    arm_timeout(args.timeout);
    let start = Instant::now();
    let text = read_input(&args.ontology)?;
    let q = load_query(args)?;
    let opts = ReasonerOptions {
        threads,
        demand: args.demand,
        check_consistency: args.check_consistency,
    };
    let mut r = Reasoner::from_text(&text, opts)
        .map_err(|e| Failure::new(1, anyhow!("{}: {e}", args.ontology.display())))?;
    let consistent = r.consistent().map_err(|e| Failure::new(1, e))?;
    let out = r.answer_conjunctive(&q).map_err(|e| Failure::new(1, e))?;
    emit(args.output.as_deref(), &format_rows(&out.rows))?;
    if let Some(p) = dump_model {
        fs::write(p, r.saturate().0.to_dl())?;
    }
    let t = r.timings;
    let mut line = format!(
        "answers={} load_ms={:.3} translate_ms={:.3} saturate_ms={:.3} answer_ms={:.3} rounds={} derived={}",
        out.rows.len(),
        t.load_ms,
        t.translate_ms,
        t.saturate_ms,
        t.answer_ms,
        out.stats.rounds,
        out.stats.total_derived()
    );
    if let Some(c) = consistent {
        write!(line, " consistent={c}").expect("string write");
    }
    eprintln!("{line}");
    if args.report_time {
        eprintln!("time_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(())
}

pub fn oracle(args: &QueryArgs, full: bool, max_depth: usize) -> CmdResult {
    arm_timeout(args.timeout);
    let start = Instant::now();
    let o = normalize_ontology(&load_ontology(&args.ontology)?);
    let q = load_query(args)?;
    let oracle = Oracle::new(&o, max_depth).map_err(|e| Failure::new(1, e))?;
    let mode = if full {
        AnswerMode::Full
    } else {
        AnswerMode::NamedOnly
    };
    let rows = oracle.answer(&q, mode);
    emit(args.output.as_deref(), &format_rows(&rows))?;
    let mut line = format!(
        "answers={} elements={} depth={}",
        rows.len(),
        oracle.model.elements.len(),
        oracle.model.depth
    );
    if args.check_consistency {
        write!(line, " consistent={}", oracle.model.is_consistent(&o)).expect("string write");
    }
    eprintln!("{line}");
    if args.report_time {
        eprintln!("time_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(())
}

pub fn extend(base: &Path, extension: &Path, output: Option<&Path>) -> CmdResult {
    let mut o = load_ontology(base)?;
    let ext = load_ontology(extension)?;
    let before = o.len();
    o.merge(&ext);
    emit(output, &o.to_functional())?;
    eprintln!("axioms={} added={}", o.len(), o.len() - before);
    Ok(())
}

pub fn generate(out_dir: &Path, departments: usize, universities: usize, seed: u64) -> CmdResult {
    let cfg = LubmConfig {
        universities,
        departments,
        seed,
    };
    let qdir = out_dir.join("queries");
    fs::create_dir_all(&qdir)?;
    let base = lubm::generate(&cfg);
    let ext = lubm::type_of_professor_extension();
    let mut merged = base.clone();
    merged.merge(&ext);
    fs::write(out_dir.join("lubm.ofn"), base.to_functional())?;
    fs::write(out_dir.join("type-of-professor.ofn"), ext.to_functional())?;
    fs::write(out_dir.join("lubm-ext.ofn"), merged.to_functional())?;
    let mut standard = Vec::new();
    for (name, text) in lubm::standard_queries()
        .into_iter()
        .chain(lubm::meta_queries())
        .chain(lubm::special_queries())
    {
        let file = format!("{name}.rq");
        fs::write(qdir.join(&file), text)?;
        if !name.starts_with("sq") {
            standard.push(format!("queries/{file}"));
        }
    }
    let conf = format!(
        "# standard and meta queries over the generated ontology\n\
         ontologies = lubm.ofn\n\
         queries = {}\n\
         timeout_s = 60\n\
         repeat = 3\n\
         demand_mode = false\n\
         output_csv = results.csv\n",
        standard.join(", ")
    );
    fs::write(out_dir.join("bench.conf"), conf)?;
    eprintln!("axioms={} extended_axioms={}", base.len(), merged.len());
    Ok(())
}
