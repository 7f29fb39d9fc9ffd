//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;
use tro_core::ns;
use tro_core::rdf::{BlankNode, Graph, Iri, Literal, Subject, Term, Triple};
use tro_core::vocab::{SchemaConstraint, TermKind, VocabTerm, Vocabulary};

pub const EX: &str = "http://example.org/data/";

pub fn ex(local: &str) -> Iri {
    Iri::new(format!("{EX}{local}")).unwrap()
}

pub fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

// locals that exercise the prefixed-name / full-IRI decision in the writer
const LOCALS: &[&str] = &[
    "a",
    "b",
    "node-1",
    "9lives",
    "with.dot",
    "trailing.",
    "x%20y",
    "under_score",
    "ümlaut",
    "q?x=1",
    "frag#part",
    "",
];

const STRING_PARTS: &[&str] = &[
    "plain",
    " ",
    "\"quoted\"",
    "back\\slash",
    "line\nbreak",
    "tab\t",
    "cr\r",
    "é",
    "𝄞",
    "#not a comment",
    "a.b",
    "'",
    ";",
    ",",
    "",
];

fn random_iri(rng: &mut impl Rng) -> Iri {
    let local = LOCALS.choose(rng).unwrap();
    match rng.gen_range(0..4) {
        0 => ns::tro(local),
        1 => ns::schema(local),
        2 => Iri::new(format!("urn:x-test:{}", rng.gen_range(0..20))).unwrap(),
        _ => ex(local),
    }
}

fn random_predicate(rng: &mut impl Rng) -> Iri {
    match rng.gen_range(0..6) {
        0 => ns::rdf("type"),
        1 => ns::tro("roleOf"),
        2 => ns::dcterms("title"),
        _ => random_iri(rng),
    }
}

fn random_blank(rng: &mut impl Rng) -> BlankNode {
    BlankNode::new(format!("b{}", rng.gen_range(0..6))).unwrap()
}

fn random_literal(rng: &mut impl Rng) -> Literal {
    let text: String = (0..rng.gen_range(0..4))
        .map(|_| *STRING_PARTS.choose(rng).unwrap())
        .collect();
    match rng.gen_range(0..5) {
        0 => Literal::lang(text, ["en", "eu", "es-ES"].choose(rng).unwrap()).unwrap(),
        1 => Literal::date(ymd(
            rng.gen_range(1990..2030),
            rng.gen_range(1..13),
            rng.gen_range(1..29),
        )),
        2 => Literal::typed(rng.gen_range(-500i64..500).to_string(), ns::xsd("integer")).unwrap(),
        3 => Literal::typed(text, ex("customType")).unwrap(),
        _ => Literal::string(text),
    }
}

pub fn random_subject(rng: &mut impl Rng) -> Subject {
    if rng.gen_bool(0.2) {
        Subject::Blank(random_blank(rng))
    } else {
        Subject::Iri(random_iri(rng))
    }
}

pub fn random_term(rng: &mut impl Rng) -> Term {
    match rng.gen_range(0..10) {
        0 | 1 => Term::Blank(random_blank(rng)),
        2..=5 => Term::Literal(random_literal(rng)),
        _ => Term::Iri(random_iri(rng)),
    }
}

pub fn random_triple(rng: &mut impl Rng) -> Triple {
    Triple::new(random_subject(rng), random_predicate(rng), random_term(rng))
}

/// A graph of at most `max` triples with the default prefixes plus `ex:`.
pub fn random_graph(rng: &mut impl Rng, max: usize) -> Graph {
    let mut g = Graph::with_default_prefixes();
    g.set_prefix("ex", Iri::new(EX).unwrap());
    let n = rng.gen_range(0..=max);
    for _ in 0..n {
        g.insert(random_triple(rng));
    }
    g
}

/// Like [`random_graph`] but without blank nodes.
pub fn random_ground_graph(rng: &mut impl Rng, max: usize) -> Graph {
    let mut g = Graph::with_default_prefixes();
    g.set_prefix("ex", Iri::new(EX).unwrap());
    let n = rng.gen_range(0..=max);
    while g.len() < n {
        let t = random_triple(rng);
        if !matches!(t.subject, Subject::Blank(_)) && !matches!(t.object, Term::Blank(_)) {
            g.insert(t);
        }
    }
    g
}

/// Classes `ex:C0..C{n-1}` with subclass edges only from higher to lower
/// indices, so the hierarchy is acyclic.
pub fn random_hierarchy(rng: &mut impl Rng, n: usize) -> (Vocabulary, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    for i in 1..n {
        for j in 0..i {
            if rng.gen_bool(0.25) {
                edges.push((i, j));
            }
        }
    }
    (hierarchy(n, &edges), edges)
}

pub fn class_iri(i: usize) -> Iri {
    ex(&format!("C{i}"))
}

pub fn hierarchy(n: usize, edges: &[(usize, usize)]) -> Vocabulary {
    let terms = (0..n)
        .map(|i| VocabTerm::new(class_iri(i), TermKind::Class, &format!("C{i}"), ""))
        .collect();
    let constraints = edges
        .iter()
        .map(|&(sub, sup)| SchemaConstraint::SubClassOf {
            sub: class_iri(sub),
            sup: class_iri(sup),
        })
        .collect();
    Vocabulary::new(terms, constraints, ns::default_prefixes()).unwrap()
}

/// Reflexive-transitive reachability by Floyd-Warshall.
pub fn reachability(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach
}

/// Applies `x a C, C ⊑ D ⇒ x a D` until nothing changes.
pub fn naive_type_fixpoint(g: &Graph, edges: &[(Iri, Iri)]) -> Graph {
    let rdf_type = ns::rdf("type");
    let mut out = g.clone();
    loop {
        let mut added = false;
        for t in out.match_pattern(None, Some(&rdf_type), None) {
            for (sub, sup) in edges {
                if t.object.as_iri() == Some(sub)
                    && out.insert(Triple::new(
                        t.subject.clone(),
                        rdf_type.clone(),
                        sup.clone(),
                    ))
                {
                    added = true;
                }
            }
        }
        if !added {
            return out;
        }
    }
}

/// Typing triples over the classes of a random hierarchy plus some noise.
pub fn random_typed_graph(rng: &mut impl Rng, classes: usize, max: usize) -> Graph {
    let mut g = Graph::new();
    for _ in 0..rng.gen_range(0..=max) {
        let node = ex(&format!("n{}", rng.gen_range(0..15)));
        if rng.gen_bool(0.8) {
            g.insert(Triple::new(
                node,
                ns::rdf("type"),
                class_iri(rng.gen_range(0..classes)),
            ));
        } else {
            g.insert(Triple::new(node, ns::schema("name"), Literal::string("x")));
        }
    }
    g
}

/// Knobs for [`random_coi_graph`].
#[derive(Debug, Clone, Copy)]
pub struct CoiShape {
    pub persons: usize,
    pub orgs: usize,
    pub roles: usize,
    pub contracts: usize,
    /// Whether persons may own or be affiliated with organizations.
    pub links: bool,
    /// Whether a person may hold more than one role.
    pub multi_role: bool,
}

fn random_date(rng: &mut impl Rng) -> NaiveDate {
    ymd(
        rng.gen_range(2010..2016),
        rng.gen_range(1..13),
        rng.gen_range(1..29),
    )
}

/// A well-formed role/contract graph. Every role has evidence and a valid
/// interval; every contract has an award date.
pub fn random_coi_graph(rng: &mut impl Rng, shape: CoiShape) -> Graph {
    let mut g = Graph::with_default_prefixes();
    let rdf_type = ns::rdf("type");
    let person = |i: usize| ex(&format!("person/p{i}"));
    let org = |i: usize| ex(&format!("org/o{i}"));
    for i in 0..shape.persons {
        g.insert(Triple::new(
            person(i),
            rdf_type.clone(),
            ns::schema("Person"),
        ));
        g.insert(Triple::new(
            person(i),
            ns::schema("name"),
            Literal::string(format!("P{i}")),
        ));
        if shape.links && rng.gen_bool(0.6) {
            let p = if rng.gen_bool(0.5) {
                "ownerOf"
            } else {
                "affiliatedWith"
            };
            g.insert(Triple::new(
                person(i),
                ns::tro(p),
                org(rng.gen_range(0..shape.orgs)),
            ));
        }
    }
    for i in 0..shape.orgs {
        g.insert(Triple::new(
            org(i),
            rdf_type.clone(),
            ns::gist("Organization"),
        ));
        g.insert(Triple::new(
            org(i),
            ns::schema("name"),
            Literal::string(format!("O{i}")),
        ));
    }
    let mut evidence = 0;
    let mut new_evidence = |g: &mut Graph| {
        let e = ex(&format!("evidence/e{evidence}"));
        evidence += 1;
        g.insert(Triple::new(
            e.clone(),
            rdf_type.clone(),
            ns::tro("Evidence"),
        ));
        g.insert(Triple::new(
            e.clone(),
            ns::tro("evidenceURL"),
            Literal::typed(
                format!("https://example.org/{}", e.as_str().len()),
                ns::xsd("anyURI"),
            )
            .unwrap(),
        ));
        e
    };
    let mut holders = BTreeSet::new();
    for i in 0..shape.roles {
        let p = if shape.multi_role {
            rng.gen_range(0..shape.persons)
        } else if i < shape.persons {
            i
        } else {
            break;
        };
        holders.insert(p);
        let r = ex(&format!("role/r{i}"));
        let start = random_date(rng);
        g.insert(Triple::new(r.clone(), rdf_type.clone(), ns::tro("Role")));
        g.insert(Triple::new(r.clone(), ns::tro("roleOf"), person(p)));
        g.insert(Triple::new(
            r.clone(),
            ns::tro("roleIn"),
            org(rng.gen_range(0..shape.orgs)),
        ));
        g.insert(Triple::new(
            r.clone(),
            ns::tro("startDate"),
            Literal::date(start),
        ));
        if rng.gen_bool(0.7) {
            let end = start + chrono::Duration::days(rng.gen_range(0..1500));
            g.insert(Triple::new(
                r.clone(),
                ns::tro("endDate"),
                Literal::date(end),
            ));
        }
        for _ in 0..rng.gen_range(1..3) {
            let e = new_evidence(&mut g);
            g.insert(Triple::new(r.clone(), ns::tro("hasEvidence"), e));
        }
    }
    for i in 0..shape.contracts {
        let c = ex(&format!("contract/c{i}"));
        g.insert(Triple::new(
            c.clone(),
            rdf_type.clone(),
            ns::epo("Contract"),
        ));
        g.insert(Triple::new(
            c.clone(),
            ns::epo("awardedBy"),
            org(rng.gen_range(0..shape.orgs)),
        ));
        g.insert(Triple::new(
            c.clone(),
            ns::epo("awardedTo"),
            org(rng.gen_range(0..shape.orgs)),
        ));
        g.insert(Triple::new(
            c.clone(),
            ns::epo("awardDate"),
            Literal::date(random_date(rng)),
        ));
        if rng.gen_bool(0.8) {
            let e = new_evidence(&mut g);
            g.insert(Triple::new(c.clone(), ns::tro("hasEvidence"), e));
        }
    }
    g
}

/// What the brute-force oracle reports for one finding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleFinding {
    pub pattern: &'static str,
    pub person: Iri,
    pub roles: BTreeSet<Iri>,
    pub contract: Iri,
    pub organizations: BTreeSet<Iri>,
    pub overlap: (NaiveDate, Option<NaiveDate>),
    pub evidence: BTreeSet<Iri>,
}

struct OracleRole {
    iri: Iri,
    person: Iri,
    org: Iri,
    start: NaiveDate,
    end: Option<NaiveDate>,
    evidence: BTreeSet<Iri>,
}

struct OracleContract {
    iri: Iri,
    by: Iri,
    to: Iri,
    date: NaiveDate,
    evidence: BTreeSet<Iri>,
}

fn one<'a>(g: &'a Graph, s: &Iri, p: &str) -> Option<&'a Term> {
    let v: Vec<&Term> = g.objects(&Subject::Iri(s.clone()), &ns_iri(p)).collect();
    (v.len() == 1).then(|| v[0])
}

fn ns_iri(p: &str) -> Iri {
    let (prefix, local) = p.split_once(':').unwrap();
    Iri::new(format!(
        "{}{local}",
        ns::default_prefixes()[prefix].as_str()
    ))
    .unwrap()
}

fn all_iris(g: &Graph, s: &Iri, p: &str) -> BTreeSet<Iri> {
    g.objects(&Subject::Iri(s.clone()), &ns_iri(p))
        .filter_map(|t| t.as_iri().cloned())
        .collect()
}

fn date_of(t: &Term) -> NaiveDate {
    NaiveDate::parse_from_str(t.as_literal().unwrap().lexical(), "%Y-%m-%d").unwrap()
}

/// Walks every day in the window of interest and keeps those inside both
/// closed intervals.
fn day_scan_overlap(a: &OracleRole, b: &OracleRole) -> Option<(NaiveDate, Option<NaiveDate>)> {
    let lo = a.start.min(b.start);
    let hi = ymd(2035, 1, 1);
    let inside = |r: &OracleRole, d: NaiveDate| r.start <= d && r.end.is_none_or(|e| d <= e);
    let days: Vec<NaiveDate> = lo
        .iter_days()
        .take_while(|d| *d <= hi)
        .filter(|d| inside(a, *d) && inside(b, *d))
        .collect();
    let first = *days.first()?;
    let last = *days.last().unwrap();
    Some((first, if last == hi { None } else { Some(last) }))
}

/// Enumerates every (role, contract) and (role, role, contract) combination
/// in a well-formed graph produced by [`random_coi_graph`].
pub fn oracle_findings(g: &Graph) -> BTreeSet<OracleFinding> {
    let rdf_type = ns::rdf("type");
    let of_type = |class: Iri| -> Vec<Iri> {
        g.subjects(&rdf_type, &Term::Iri(class))
            .filter_map(|s| s.as_iri().cloned())
            .collect()
    };
    let roles: Vec<OracleRole> = of_type(ns::tro("Role"))
        .into_iter()
        .map(|r| OracleRole {
            person: one(g, &r, "tro:roleOf").unwrap().as_iri().unwrap().clone(),
            org: one(g, &r, "tro:roleIn").unwrap().as_iri().unwrap().clone(),
            start: date_of(one(g, &r, "tro:startDate").unwrap()),
            end: one(g, &r, "tro:endDate").map(date_of),
            evidence: all_iris(g, &r, "tro:hasEvidence"),
            iri: r,
        })
        .collect();
    let contracts: Vec<OracleContract> = of_type(ns::epo("Contract"))
        .into_iter()
        .map(|c| OracleContract {
            by: one(g, &c, "epo:awardedBy")
                .unwrap()
                .as_iri()
                .unwrap()
                .clone(),
            to: one(g, &c, "epo:awardedTo")
                .unwrap()
                .as_iri()
                .unwrap()
                .clone(),
            date: date_of(one(g, &c, "epo:awardDate").unwrap()),
            evidence: all_iris(g, &c, "tro:hasEvidence"),
            iri: c,
        })
        .collect();
    let mut linked: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for p in of_type(ns::schema("Person")) {
        let mut orgs = all_iris(g, &p, "tro:ownerOf");
        orgs.extend(all_iris(g, &p, "tro:affiliatedWith"));
        linked.insert(p, orgs);
    }
    let active = |r: &OracleRole, d: NaiveDate| r.start <= d && r.end.is_none_or(|e| d <= e);

    let mut out = BTreeSet::new();
    for r in &roles {
        for c in &contracts {
            let links = linked.get(&r.person).cloned().unwrap_or_default();
            if c.by == r.org && links.contains(&c.to) && active(r, c.date) {
                out.insert(OracleFinding {
                    pattern: "AWARD-TO-LINKED-ORG",
                    person: r.person.clone(),
                    roles: BTreeSet::from([r.iri.clone()]),
                    contract: c.iri.clone(),
                    organizations: BTreeSet::from([c.by.clone(), c.to.clone()]),
                    overlap: (c.date, Some(c.date)),
                    evidence: r.evidence.union(&c.evidence).cloned().collect(),
                });
            }
        }
    }
    for a in &roles {
        for b in &roles {
            if a.iri >= b.iri || a.person != b.person || a.org == b.org {
                continue;
            }
            for c in &contracts {
                let between = (c.by == a.org && c.to == b.org) || (c.by == b.org && c.to == a.org);
                if between && active(a, c.date) && active(b, c.date) {
                    let mut evidence: BTreeSet<Iri> =
                        a.evidence.union(&b.evidence).cloned().collect();
                    evidence.extend(c.evidence.iter().cloned());
                    out.insert(OracleFinding {
                        pattern: "DUAL-ROLE",
                        person: a.person.clone(),
                        roles: BTreeSet::from([a.iri.clone(), b.iri.clone()]),
                        contract: c.iri.clone(),
                        organizations: BTreeSet::from([a.org.clone(), b.org.clone()]),
                        overlap: day_scan_overlap(a, b).unwrap(),
                        evidence,
                    });
                }
            }
        }
    }
    out
}

pub fn as_oracle(findings: &[tro_core::coi::Finding]) -> BTreeSet<OracleFinding> {
    use tro_core::coi::Overlap;
    findings
        .iter()
        .map(|f| OracleFinding {
            pattern: f.pattern.id(),
            person: f.person.clone(),
            roles: f.roles.clone(),
            contract: f.contract.clone().unwrap(),
            organizations: f.organizations.clone(),
            overlap: match f.overlap {
                Overlap::Date(d) => (d, Some(d)),
                Overlap::Interval(i) => (i.start(), i.end()),
            },
            evidence: f.evidence.clone(),
        })
        .collect()
}
