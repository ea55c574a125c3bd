use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const EAGLES: &str = "Prefix(:=<http://example.org/zoo#>)
Ontology(
SubClassOf(:Eagle :Birds)
SubClassOf(:GoldenEagle :Eagle)
ClassAssertion(:GoldenEagle :Harry)
ClassAssertion(:EndangeredSpecies :GoldenEagle)
ObjectPropertyAssertion(:Lives_in :Harry :CPZ)
)
";

const ENDANGERED: &str = "PREFIX : <http://example.org/zoo#>
SELECT ?z WHERE { ?y a :EndangeredSpecies . ?z a ?y . ?z :Lives_in :CPZ }
";

fn metaql(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metaql"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn translate_writes_facts() {
    let dir = TempDir::new().unwrap();
    let onto = write(dir.path(), "eagles.ofn", EAGLES);
    let out = dir.path().join("eagles.dl");
    let o = metaql(&["translate", &onto, "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dl = fs::read_to_string(out).unwrap();
    assert!(dl.lines().count() >= 4);
    assert!(dl.contains(
        r#"isacCC("http://example.org/zoo#GoldenEagle","http://example.org/zoo#Eagle")."#
    ));
    assert!(dl.contains(
        r#"instc("http://example.org/zoo#EndangeredSpecies","http://example.org/zoo#GoldenEagle")."#
    ));
    assert!(stderr(&o).contains("facts="));
}

#[test]
fn translate_empty_and_malformed() {
    let dir = TempDir::new().unwrap();
    let empty = write(dir.path(), "empty.ofn", "Ontology()\n");
    let o = metaql(&["translate", &empty]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let bad = write(dir.path(), "bad.ofn", "Ontology(\nSubClassOf(:A\n");
    let o = metaql(&["translate", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn query_answers_the_endangered_meta_query() {
    let dir = TempDir::new().unwrap();
    let onto = write(dir.path(), "eagles.ofn", EAGLES);
    let q = write(dir.path(), "endangered.rq", ENDANGERED);
    for extra in [
        &[][..],
        &["--demand"][..],
        &["--check-consistency", "--report-time"][..],
    ] {
        let mut args = vec!["query", onto.as_str(), q.as_str()];
        args.extend_from_slice(extra);
        let o = metaql(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o), "http://example.org/zoo#Harry\n");
        assert!(stderr(&o).contains("answers=1"));
    }
    let o = metaql(&["query", &onto, &q, "--check-consistency", "--report-time"]);
    assert!(stderr(&o).contains("consistent=true"));
    assert!(stderr(&o).contains("time_ms="));
}

#[test]
fn query_string_and_oracle_agree() {
    let dir = TempDir::new().unwrap();
    let onto = write(dir.path(), "eagles.ofn", EAGLES);
    let q = "PREFIX : <http://example.org/zoo#> SELECT ?c WHERE { ?c a :EndangeredSpecies . :Harry a ?c }";
    let engine = metaql(&["query", &onto, "--query-string", q]);
    let oracle = metaql(&["oracle", &onto, "--query-string", q]);
    assert!(engine.status.success() && oracle.status.success());
    assert_eq!(stdout(&engine), "http://example.org/zoo#GoldenEagle\n");
    assert_eq!(stdout(&engine), stdout(&oracle));
}

#[test]
fn missing_files_exit_with_two() {
    let o = metaql(&[
        "query",
        "/nonexistent/x.ofn",
        "--query-string",
        "SELECT ?x WHERE { ?x a ?y }",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        metaql(&["translate", "/nonexistent/x.ofn"]).status.code(),
        Some(2)
    );
    assert_eq!(
        metaql(&["bench", "/nonexistent/b.conf"]).status.code(),
        Some(2)
    );
}

#[test]
fn unsupported_query_features_fail() {
    let dir = TempDir::new().unwrap();
    let onto = write(dir.path(), "eagles.ofn", EAGLES);
    let o = metaql(&[
        "query",
        &onto,
        "--query-string",
        "SELECT ?x WHERE { ?x a ?y OPTIONAL { ?x a ?z } }",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rules_dump_and_stats() {
    let o = metaql(&["rules"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.ends_with('.')));
    let stats = stdout(&metaql(&["rules", "--stats"]));
    let total: usize = stats
        .lines()
        .find_map(|l| l.strip_prefix("total\t"))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(total, text.lines().count());
    let with_v = stdout(&metaql(&["rules", "--violation"]));
    assert!(with_v.contains("violation"));
}

#[test]
fn extend_is_a_set_union() {
    let dir = TempDir::new().unwrap();
    let base = write(dir.path(), "base.ofn", EAGLES);
    let empty = write(dir.path(), "empty.ofn", "Ontology()\n");
    let ext = write(
        dir.path(),
        "ext.ofn",
        "Prefix(:=<http://example.org/zoo#>)\nOntology(\nSubClassOf(:Eagle :Birds)\nClassAssertion(:Species :Eagle)\n)\n",
    );
    let same = metaql(&["extend", &base, &empty]);
    assert!(same.status.success());
    assert!(stderr(&same).contains("added=0"));

    let merged = dir.path().join("merged.ofn");
    let o = metaql(&["extend", &base, &ext, "-o", merged.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("axioms=6 added=1"), "{}", stderr(&o));
    let text = fs::read_to_string(&merged).unwrap();
    assert_eq!(text.matches("SubClassOf").count(), 2);
}

#[test]
fn bench_rows_and_timeouts() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "eagles.ofn", EAGLES);
    write(dir.path(), "endangered.rq", ENDANGERED);
    write(dir.path(), "all.rq", "SELECT ?c ?x WHERE { ?x a ?c }");
    let conf = write(
        dir.path(),
        "b.conf",
        "# two queries, three repeats\nontologies = eagles.ofn\nqueries = endangered.rq, all.rq\nrepeat = 3\noutput_csv = out.csv\n",
    );
    let o = metaql(&["bench", &conf]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "dataset,query,load_ms,translate_ms,saturate_ms,answer_ms,answers,status"
    );
    assert_eq!(lines.len(), 1 + 6 + 2);
    assert!(lines[1..].iter().all(|l| l.ends_with(",OK")));
    assert!(lines[4].starts_with("eagles,endangered@median,"));
    assert!(lines[4].ends_with(",1,OK"));

    let slow = write(
        dir.path(),
        "slow.conf",
        "ontologies = eagles.ofn\nqueries = endangered.rq\nrepeat = 1\ntimeout_s = 0.000001\n",
    );
    let o = metaql(&["bench", &slow]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().nth(1).unwrap().ends_with(",,OOT"), "{out}");

    let bad = write(
        dir.path(),
        "bad.conf",
        "ontologies = eagles.ofn\nqueries = all.rq\nrepeat = 0\n",
    );
    assert_eq!(metaql(&["bench", &bad]).status.code(), Some(2));
}

#[test]
fn generate_writes_a_suite() {
    let dir = TempDir::new().unwrap();
    let o = metaql(&[
        "generate",
        "-o",
        dir.path().to_str().unwrap(),
        "--departments",
        "1",
    ]);
    assert!(o.status.success());
    for f in [
        "lubm.ofn",
        "lubm-ext.ofn",
        "type-of-professor.ofn",
        "bench.conf",
        "queries/q1.rq",
        "queries/sq2.rq",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let q = dir.path().join("queries/sq2.rq");
    let onto = dir.path().join("lubm-ext.ofn");
    let o = metaql(&["query", onto.to_str().unwrap(), q.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
}
