//! A seeded university-domain generator in the style of LUBM, restricted to
//! object properties and OWL 2 QL axioms, plus its query suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Axiom, ClassExpr, Entity, PropExpr};
use crate::owl::Ontology;

pub const NS: &str = "http://swat.cse.lehigh.edu/onto/univ-bench.owl#";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LubmConfig {
    pub universities: usize,
    pub departments: usize,
    pub seed: u64,
}

impl Default for LubmConfig {
    /// One university with enough departments for just over 10,334 axioms.
    fn default() -> Self {
        LubmConfig {
            universities: 1,
            departments: 15,
            seed: 0,
        }
    }
}

fn ub(local: &str) -> Entity {
    Entity::new(&format!("{NS}{local}")).expect("valid IRI")
}

fn atomic(c: &str) -> ClassExpr {
    ClassExpr::Atomic(ub(c))
}

fn some(p: &str) -> ClassExpr {
    ClassExpr::exists(PropExpr::Direct(ub(p)))
}

fn some_inv(p: &str) -> ClassExpr {
    ClassExpr::exists(PropExpr::Inverse(ub(p)))
}

const SUBCLASSES: &[(&str, &str)] = &[
    ("University", "Organization"),
    ("Department", "Organization"),
    ("ResearchGroup", "Organization"),
    ("Institute", "Organization"),
    ("College", "Organization"),
    ("Program", "Organization"),
    ("Employee", "Person"),
    ("Faculty", "Employee"),
    ("Professor", "Faculty"),
    ("FullProfessor", "Professor"),
    ("AssociateProfessor", "Professor"),
    ("AssistantProfessor", "Professor"),
    ("VisitingProfessor", "Professor"),
    ("Chair", "Professor"),
    ("Dean", "Professor"),
    ("Lecturer", "Faculty"),
    ("PostDoc", "Faculty"),
    ("AdministrativeStaff", "Employee"),
    ("ClericalStaff", "AdministrativeStaff"),
    ("SystemsStaff", "AdministrativeStaff"),
    ("Director", "Person"),
    ("Student", "Person"),
    ("UndergraduateStudent", "Student"),
    ("GraduateStudent", "Person"),
    ("TeachingAssistant", "Person"),
    ("ResearchAssistant", "Person"),
    ("Course", "Work"),
    ("GraduateCourse", "Course"),
    ("Research", "Work"),
    ("Article", "Publication"),
    ("JournalArticle", "Article"),
    ("ConferencePaper", "Article"),
    ("TechnicalReport", "Article"),
    ("Book", "Publication"),
    ("Manual", "Publication"),
    ("Software", "Publication"),
    ("Specification", "Publication"),
    ("UnofficialPublication", "Publication"),
    ("Schedule", "Thing"),
];

/// `(property, domain, range)`; empty strings mean unconstrained.
const PROPERTIES: &[(&str, &str, &str)] = &[
    ("advisor", "Person", "Professor"),
    ("affiliatedOrganizationOf", "Organization", "Organization"),
    ("affiliateOf", "Organization", "Person"),
    ("degreeFrom", "Person", "University"),
    ("doctoralDegreeFrom", "Person", "University"),
    ("hasAlumnus", "University", "Person"),
    ("headOf", "", ""),
    ("listedCourse", "Schedule", "Course"),
    ("mastersDegreeFrom", "Person", "University"),
    ("member", "Organization", "Person"),
    ("memberOf", "", ""),
    ("orgPublication", "Organization", "Publication"),
    ("publicationAuthor", "Publication", "Person"),
    ("publicationResearch", "Publication", "Research"),
    ("researchProject", "ResearchGroup", "Research"),
    ("softwareDocumentation", "Software", "Publication"),
    ("subOrganizationOf", "Organization", "Organization"),
    ("takesCourse", "", "Course"),
    ("teacherOf", "Faculty", "Course"),
    ("teachingAssistantOf", "TeachingAssistant", "Course"),
    ("undergraduateDegreeFrom", "Person", "University"),
    ("worksFor", "", ""),
    ("researchInterestIn", "Person", "Research"),
    ("courseOf", "Course", "Department"),
    ("reviewerOf", "Person", "Publication"),
];

/// The schema: class hierarchy, domains and ranges, property hierarchy,
/// inverses and a few acyclic existential restrictions.
pub fn tbox() -> Ontology {
    let mut o = Ontology::new();
    o.prefixes.insert("ub".into(), NS.into());
    for (sub, sup) in SUBCLASSES {
        let sup = if *sup == "Thing" {
            ClassExpr::Atomic(Entity::top_class())
        } else {
            atomic(sup)
        };
        o.insert(Axiom::ClassInclusion(atomic(sub), sup));
    }
    for (p, dom, rng) in PROPERTIES {
        if !dom.is_empty() {
            o.insert(Axiom::ClassInclusion(some(p), atomic(dom)));
        }
        if !rng.is_empty() {
            o.insert(Axiom::ClassInclusion(some_inv(p), atomic(rng)));
        }
    }
    let direct = |p: &str| PropExpr::Direct(ub(p));
    let inverse = |p: &str| PropExpr::Inverse(ub(p));
    for (sub, sup) in [
        ("headOf", "worksFor"),
        ("worksFor", "memberOf"),
        ("doctoralDegreeFrom", "degreeFrom"),
        ("mastersDegreeFrom", "degreeFrom"),
        ("undergraduateDegreeFrom", "degreeFrom"),
    ] {
        o.insert(Axiom::PropInclusion(direct(sub), direct(sup)));
    }
    for (p, q) in [("memberOf", "member"), ("degreeFrom", "hasAlumnus")] {
        o.insert(Axiom::PropInclusion(direct(p), inverse(q)));
        o.insert(Axiom::PropInclusion(direct(q), inverse(p)));
    }
    for (lhs, rhs) in [
        (some("takesCourse"), atomic("Student")),
        (some("worksFor"), atomic("Employee")),
        (some("headOf"), atomic("Chair")),
        (some("teachingAssistantOf"), atomic("TeachingAssistant")),
        (some("memberOf"), atomic("Person")),
    ] {
        o.insert(Axiom::ClassInclusion(lhs, rhs));
    }
    for (c, p, f) in [
        ("Chair", "headOf", "Department"),
        ("ResearchAssistant", "worksFor", "ResearchGroup"),
        ("GraduateStudent", "takesCourse", "GraduateCourse"),
        ("Faculty", "teacherOf", "Course"),
    ] {
        o.insert(Axiom::ClassInclusion(
            atomic(c),
            ClassExpr::Some {
                prop: PropExpr::Direct(ub(p)),
                filler: ub(f),
            },
        ));
    }
    o.insert(Axiom::ClassDisjoint(
        atomic("Person"),
        atomic("Organization"),
    ));
    o.insert(Axiom::ClassDisjoint(atomic("Person"), atomic("Work")));
    o
}

pub fn university(u: usize) -> Entity {
    Entity::new(&format!("http://www.University{u}.edu")).expect("valid IRI")
}

pub fn department(u: usize, d: usize) -> Entity {
    Entity::new(&format!("http://www.Department{d}.University{u}.edu")).expect("valid IRI")
}

fn in_dept(u: usize, d: usize, local: &str) -> Entity {
    Entity::new(&format!(
        "http://www.Department{d}.University{u}.edu/{local}"
    ))
    .expect("valid IRI")
}

struct Abox<'a> {
    o: &'a mut Ontology,
}

impl Abox<'_> {
    fn class(&mut self, c: &str, x: &Entity) {
        self.o.insert(Axiom::ClassAssertion(ub(c), x.clone()));
    }

    fn prop(&mut self, p: &str, x: &Entity, y: &Entity) {
        self.o
            .insert(Axiom::PropAssertion(ub(p), x.clone(), y.clone()));
    }
}

/// Schema plus a seeded ABox.
pub fn generate(cfg: &LubmConfig) -> Ontology {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut o = tbox();
    let unis = cfg.universities.max(1);
    let mut a = Abox { o: &mut o };
    for u in 0..unis.max(3) {
        a.class("University", &university(u));
    }
    for u in 0..unis {
        for d in 0..cfg.departments {
            department_abox(&mut a, &mut rng, u, d, unis.max(3));
        }
    }
    o
}

fn department_abox(a: &mut Abox<'_>, rng: &mut ChaCha8Rng, u: usize, d: usize, n_unis: usize) {
    let dept = department(u, d);
    a.class("Department", &dept);
    a.prop("subOrganizationOf", &dept, &university(u));
    let e = |s: String| in_dept(u, d, &s);
    let any_uni = |rng: &mut ChaCha8Rng| university(rng.random_range(0..n_unis));

    let courses: Vec<Entity> = (0..20).map(|i| e(format!("Course{i}"))).collect();
    let grad_courses: Vec<Entity> = (0..10).map(|i| e(format!("GraduateCourse{i}"))).collect();
    for c in &courses {
        a.class("Course", c);
        a.prop("courseOf", c, &dept);
    }
    for c in &grad_courses {
        a.class("GraduateCourse", c);
        a.prop("courseOf", c, &dept);
    }
    let groups: Vec<Entity> = (0..4).map(|i| e(format!("ResearchGroup{i}"))).collect();
    for (i, g) in groups.iter().enumerate() {
        a.class("ResearchGroup", g);
        a.prop("subOrganizationOf", g, &dept);
        let r = e(format!("Research{i}"));
        a.class("Research", &r);
        a.prop("researchProject", g, &r);
    }

    let mut faculty = Vec::new();
    for (kind, n) in [
        ("FullProfessor", 6),
        ("AssociateProfessor", 8),
        ("AssistantProfessor", 6),
        ("Lecturer", 4),
    ] {
        for i in 0..n {
            let f = e(format!("{kind}{i}"));
            a.class(kind, &f);
            a.prop("worksFor", &f, &dept);
            a.prop("undergraduateDegreeFrom", &f, &any_uni(rng));
            a.prop("mastersDegreeFrom", &f, &any_uni(rng));
            a.prop("doctoralDegreeFrom", &f, &any_uni(rng));
            a.prop(
                "researchInterestIn",
                &f,
                &e(format!("Research{}", rng.random_range(0..groups.len()))),
            );
            faculty.push((kind, f));
        }
    }
    let head = faculty[0].1.clone();
    a.prop("headOf", &head, &dept);
    for (i, c) in courses.iter().chain(&grad_courses).enumerate() {
        let t = &faculty[i % faculty.len()].1;
        a.prop("teacherOf", t, c);
    }
    let mut pubs = 0;
    for (kind, f) in &faculty {
        let n = if *kind == "Lecturer" { 1 } else { 3 };
        for _ in 0..n {
            let p = e(format!("Publication{pubs}"));
            pubs += 1;
            let class = [
                "JournalArticle",
                "ConferencePaper",
                "TechnicalReport",
                "Book",
            ][rng.random_range(0..4)];
            a.class(class, &p);
            a.prop("publicationAuthor", &p, f);
            a.prop(
                "publicationResearch",
                &p,
                &e(format!("Research{}", rng.random_range(0..groups.len()))),
            );
        }
    }
    let professors: Vec<&Entity> = faculty
        .iter()
        .filter(|(k, _)| *k != "Lecturer")
        .map(|(_, f)| f)
        .collect();

    for i in 0..90 {
        let s = e(format!("UndergraduateStudent{i}"));
        a.class("UndergraduateStudent", &s);
        a.prop("memberOf", &s, &dept);
        for _ in 0..2 {
            a.prop(
                "takesCourse",
                &s,
                &courses[rng.random_range(0..courses.len())],
            );
        }
        if i % 5 == 0 {
            a.prop(
                "advisor",
                &s,
                professors[rng.random_range(0..professors.len())],
            );
        }
    }
    for i in 0..30 {
        let s = e(format!("GraduateStudent{i}"));
        a.class("GraduateStudent", &s);
        a.prop("memberOf", &s, &dept);
        a.prop("undergraduateDegreeFrom", &s, &any_uni(rng));
        a.prop(
            "advisor",
            &s,
            professors[rng.random_range(0..professors.len())],
        );
        for _ in 0..2 {
            a.prop(
                "takesCourse",
                &s,
                &grad_courses[rng.random_range(0..grad_courses.len())],
            );
        }
        if i % 4 == 0 {
            a.class("TeachingAssistant", &s);
            a.prop(
                "teachingAssistantOf",
                &s,
                &courses[rng.random_range(0..courses.len())],
            );
        }
        if i % 3 == 0 {
            a.class("ResearchAssistant", &s);
            a.prop("worksFor", &s, &groups[rng.random_range(0..groups.len())]);
        }
    }
}

/// Meta-class assertions for the three professor ranks plus their pairwise
/// disjointness.
pub fn type_of_professor_extension() -> Ontology {
    let mut o = Ontology::new();
    o.prefixes.insert("ub".into(), NS.into());
    let ranks = ["FullProfessor", "AssociateProfessor", "AssistantProfessor"];
    for r in ranks {
        o.insert(Axiom::ClassAssertion(ub("TypeOfProfessor"), ub(r)));
    }
    for i in 0..ranks.len() {
        for j in i + 1..ranks.len() {
            o.insert(Axiom::ClassDisjoint(atomic(ranks[i]), atomic(ranks[j])));
        }
    }
    o
}

const PREFIXES: &str = "PREFIX ub: <http://swat.cse.lehigh.edu/onto/univ-bench.owl#>\n\
                        PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n\
                        PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>\n\
                        PREFIX owl: <http://www.w3.org/2002/07/owl#>\n";

fn q(name: &'static str, body: &str) -> (&'static str, String) {
    (name, format!("{PREFIXES}{body}\n"))
}

/// The fourteen standard queries, with data-property atoms dropped.
pub fn standard_queries() -> Vec<(&'static str, String)> {
    vec![
        q("q1", "SELECT ?x WHERE { ?x a ub:GraduateStudent . ?x ub:takesCourse <http://www.Department0.University0.edu/GraduateCourse0> }"),
        q("q2", "SELECT ?x ?y ?z WHERE { ?x a ub:GraduateStudent . ?y a ub:University . ?z a ub:Department . ?x ub:memberOf ?z . ?z ub:subOrganizationOf ?y . ?x ub:undergraduateDegreeFrom ?y }"),
        q("q3", "SELECT ?x WHERE { ?x a ub:Publication . ?x ub:publicationAuthor <http://www.Department0.University0.edu/AssistantProfessor0> }"),
        q("q4", "SELECT ?x WHERE { ?x a ub:Professor . ?x ub:worksFor <http://www.Department0.University0.edu> }"),
        q("q5", "SELECT ?x WHERE { ?x a ub:Person . ?x ub:memberOf <http://www.Department0.University0.edu> }"),
        q("q6", "SELECT ?x WHERE { ?x a ub:Student }"),
        q("q7", "SELECT ?x ?y WHERE { ?x a ub:Student . ?y a ub:Course . ?x ub:takesCourse ?y . <http://www.Department0.University0.edu/AssociateProfessor0> ub:teacherOf ?y }"),
        q("q8", "SELECT ?x ?y WHERE { ?x a ub:Student . ?y a ub:Department . ?x ub:memberOf ?y . ?y ub:subOrganizationOf <http://www.University0.edu> }"),
        q("q9", "SELECT ?x ?y ?z WHERE { ?x a ub:Student . ?y a ub:Faculty . ?z a ub:Course . ?x ub:advisor ?y . ?y ub:teacherOf ?z . ?x ub:takesCourse ?z }"),
        q("q10", "SELECT ?x WHERE { ?x a ub:Student . ?x ub:takesCourse <http://www.Department0.University0.edu/GraduateCourse0> }"),
        q("q11", "SELECT ?x WHERE { ?x a ub:ResearchGroup . ?x ub:subOrganizationOf ?d . ?d ub:subOrganizationOf <http://www.University0.edu> }"),
        q("q12", "SELECT ?x ?y WHERE { ?x a ub:Chair . ?y a ub:Department . ?x ub:worksFor ?y . ?y ub:subOrganizationOf <http://www.University0.edu> }"),
        q("q13", "SELECT ?x WHERE { ?x a ub:Person . <http://www.University0.edu> ub:hasAlumnus ?x }"),
        q("q14", "SELECT ?x WHERE { ?x a ub:UndergraduateStudent }"),
    ]
}

/// Queries with variables over class or property names that stay within one
/// level of the ontology.
pub fn meta_queries() -> Vec<(&'static str, String)> {
    vec![
        q("mq1", "SELECT ?x ?c WHERE { ?x a ?c . ?x ub:memberOf <http://www.Department0.University0.edu> }"),
        q("mq4", "SELECT ?p ?y WHERE { <http://www.Department0.University0.edu/AssociateProfessor0> ?p ?y }"),
        q("mq5", "SELECT ?c ?p WHERE { ?x a ?c . ?x ?p <http://www.Department0.University0.edu/Course0> }"),
        q("mq10", "SELECT ?c WHERE { ?c rdfs:subClassOf ub:Person }"),
    ]
}

/// Queries that cross meta-levels on the TypeOfProfessor extension.
pub fn special_queries() -> Vec<(&'static str, String)> {
    vec![
        q("sq1", "SELECT ?y ?z WHERE { ?y a ub:Professor . ?z a ub:TypeOfProfessor . ?y a ?z }"),
        q("sq2", "SELECT ?x ?y WHERE { ?x a ub:TypeOfProfessor . ?y a ub:TypeOfProfessor . ?x owl:disjointWith ?y }"),
    ]
}
