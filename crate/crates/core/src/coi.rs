//! Candidate conflict-of-interest detection by temporal co-occurrence.
//!
//! Two patterns are evaluated over a graph:
//!
//! * `AWARD-TO-LINKED-ORG`: a person holds a role in the body that awards a
//!   contract, on the award date, to an organization the person owns or is
//!   affiliated with.
//! * `DUAL-ROLE`: a person holds overlapping roles in two organizations and
//!   one awards a contract to the other inside the overlap.
//!
//! Findings are pointers for human review, never accusations, and every one
//! is backed by evidence nodes from the graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::NaiveDate;
use serde::Serialize;

use crate::date::{format_date, parse_date};
use crate::ns;
use crate::rdf::{Graph, Iri, Subject, Term};

/// Closed interval; `end == None` means ongoing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    start: NaiveDate,
    end: Option<NaiveDate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("interval ends ({end}) before it starts ({start})")]
pub struct IntervalError {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Interval {
    pub fn new(start: NaiveDate, end: Option<NaiveDate>) -> Result<Self, IntervalError> {
        match end {
            Some(end) if end < start => Err(IntervalError { start, end }),
            _ => Ok(Interval { start, end }),
        }
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> Option<NaiveDate> {
        self.end
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        if !intervals_overlap(self, other) {
            return None;
        }
        let end = match (self.end, other.end) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Some(Interval {
            start: self.start.max(other.start),
            end,
        })
    }
}

pub fn intervals_overlap(a: &Interval, b: &Interval) -> bool {
    a.end.is_none_or(|end| b.start <= end) && b.end.is_none_or(|end| a.start <= end)
}

pub fn date_in_interval(d: NaiveDate, i: &Interval) -> bool {
    i.start <= d && i.end.is_none_or(|end| d <= end)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternId {
    AwardToLinkedOrg,
    DualRole,
}

impl PatternId {
    pub fn id(self) -> &'static str {
        match self {
            PatternId::AwardToLinkedOrg => "AWARD-TO-LINKED-ORG",
            PatternId::DualRole => "DUAL-ROLE",
        }
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// When the co-occurrence happened: the award date, or the overlap of two roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Overlap {
    Date(NaiveDate),
    Interval(Interval),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Finding {
    pub pattern: PatternId,
    pub person: Iri,
    pub roles: BTreeSet<Iri>,
    pub contract: Option<Iri>,
    pub organizations: BTreeSet<Iri>,
    pub overlap: Overlap,
    pub evidence: BTreeSet<Iri>,
}

impl Finding {
    fn sort_key(
        &self,
    ) -> (
        &'static str,
        String,
        String,
        String,
        String,
        Overlap,
        String,
    ) {
        let joined =
            |set: &BTreeSet<Iri>| set.iter().map(Iri::to_string).collect::<Vec<_>>().join(" ");
        (
            self.pattern.id(),
            self.person.to_string(),
            self.contract
                .as_ref()
                .map(Iri::to_string)
                .unwrap_or_default(),
            joined(&self.roles),
            joined(&self.organizations),
            self.overlap,
            joined(&self.evidence),
        )
    }
}

#[derive(Debug, Clone)]
struct RoleFact {
    role: Iri,
    person: Iri,
    org: Iri,
    interval: Interval,
    evidence: BTreeSet<Iri>,
}

#[derive(Debug, Clone)]
struct ContractFact {
    contract: Iri,
    by: Iri,
    to: Iri,
    date: NaiveDate,
    evidence: BTreeSet<Iri>,
}

fn iri_objects(g: &Graph, s: &Subject, p: &Iri) -> BTreeSet<Iri> {
    g.objects(s, p).filter_map(Term::as_iri).cloned().collect()
}

/// `Some(None)` when absent, `Some(Some(d))` for exactly one valid date,
/// `None` when malformed or ambiguous.
fn single_date(g: &Graph, s: &Subject, p: &Iri) -> Option<Option<NaiveDate>> {
    let values: Vec<&Term> = g.objects(s, p).collect();
    match values.as_slice() {
        [] => Some(None),
        [Term::Literal(lit)] => parse_date(lit.lexical()).map(Some),
        _ => None,
    }
}

fn role_facts(g: &Graph) -> Vec<RoleFact> {
    let mut out = Vec::new();
    for subject in g.subjects_with(&ns::tro("roleOf")) {
        let Some(role) = subject.as_iri() else {
            continue;
        };
        let Some(Some(start)) = single_date(g, &subject, &ns::tro("startDate")) else {
            continue;
        };
        let Some(end) = single_date(g, &subject, &ns::tro("endDate")) else {
            continue;
        };
        let Ok(interval) = Interval::new(start, end) else {
            continue;
        };
        let evidence = iri_objects(g, &subject, &ns::tro("hasEvidence"));
        if evidence.is_empty() {
            continue;
        }
        let orgs = iri_objects(g, &subject, &ns::tro("roleIn"));
        for person in iri_objects(g, &subject, &ns::tro("roleOf")) {
            for org in &orgs {
                out.push(RoleFact {
                    role: role.clone(),
                    person: person.clone(),
                    org: org.clone(),
                    interval,
                    evidence: evidence.clone(),
                });
            }
        }
    }
    out
}

fn contract_facts(g: &Graph) -> Vec<ContractFact> {
    let mut out = Vec::new();
    for subject in g.subjects_with(&ns::epo("awardedBy")) {
        let Some(contract) = subject.as_iri() else {
            continue;
        };
        let Some(Some(date)) = single_date(g, &subject, &ns::epo("awardDate")) else {
            continue;
        };
        let evidence = iri_objects(g, &subject, &ns::tro("hasEvidence"));
        let winners = iri_objects(g, &subject, &ns::epo("awardedTo"));
        for by in iri_objects(g, &subject, &ns::epo("awardedBy")) {
            for to in &winners {
                out.push(ContractFact {
                    contract: contract.clone(),
                    by: by.clone(),
                    to: to.clone(),
                    date,
                    evidence: evidence.clone(),
                });
            }
        }
    }
    out
}

fn person_links(g: &Graph) -> BTreeMap<Iri, BTreeSet<Iri>> {
    let mut links: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for p in [ns::tro("ownerOf"), ns::tro("affiliatedWith")] {
        for t in g.match_pattern(None, Some(&p), None) {
            if let (Some(person), Some(org)) = (t.subject.as_iri(), t.object.as_iri()) {
                links.entry(person.clone()).or_default().insert(org.clone());
            }
        }
    }
    links
}

/// Evaluates both patterns. Malformed nodes (missing or ambiguous dates,
/// roles without evidence, blank nodes) are skipped. The result is sorted by
/// pattern id, person and contract and has no duplicates.
pub fn detect_conflicts(g: &Graph) -> Vec<Finding> {
    let roles = role_facts(g);
    let contracts = contract_facts(g);
    let links = person_links(g);

    let mut by_awarder: BTreeMap<&Iri, Vec<&ContractFact>> = BTreeMap::new();
    for c in &contracts {
        by_awarder.entry(&c.by).or_default().push(c);
    }

    let mut found = BTreeSet::new();
    let mut push = |f: Finding| {
        found.insert((f.sort_key(), f));
    };

    for r in &roles {
        let Some(linked) = links.get(&r.person) else {
            continue;
        };
        for c in by_awarder.get(&r.org).into_iter().flatten() {
            if linked.contains(&c.to) && date_in_interval(c.date, &r.interval) {
                push(Finding {
                    pattern: PatternId::AwardToLinkedOrg,
                    person: r.person.clone(),
                    roles: BTreeSet::from([r.role.clone()]),
                    contract: Some(c.contract.clone()),
                    organizations: BTreeSet::from([c.by.clone(), c.to.clone()]),
                    overlap: Overlap::Date(c.date),
                    evidence: r.evidence.union(&c.evidence).cloned().collect(),
                });
            }
        }
    }

    let mut by_person: BTreeMap<&Iri, Vec<&RoleFact>> = BTreeMap::new();
    for r in &roles {
        by_person.entry(&r.person).or_default().push(r);
    }
    for (person, facts) in by_person {
        for (i, a) in facts.iter().enumerate() {
            for b in &facts[i + 1..] {
                if a.org == b.org {
                    continue;
                }
                let Some(overlap) = a.interval.intersection(&b.interval) else {
                    continue;
                };
                for c in &contracts {
                    let between =
                        (c.by == a.org && c.to == b.org) || (c.by == b.org && c.to == a.org);
                    if between && date_in_interval(c.date, &overlap) {
                        let mut evidence: BTreeSet<Iri> =
                            a.evidence.union(&b.evidence).cloned().collect();
                        evidence.extend(c.evidence.iter().cloned());
                        push(Finding {
                            pattern: PatternId::DualRole,
                            person: person.clone(),
                            roles: BTreeSet::from([a.role.clone(), b.role.clone()]),
                            contract: Some(c.contract.clone()),
                            organizations: BTreeSet::from([a.org.clone(), b.org.clone()]),
                            overlap: Overlap::Interval(overlap),
                            evidence,
                        });
                    }
                }
            }
        }
    }

    found.into_iter().map(|(_, f)| f).collect()
}

#[derive(Serialize)]
#[serde(untagged)]
enum OverlapJson {
    Date { date: String },
    Interval { start: String, end: Option<String> },
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FindingJson<'a> {
    pattern_id: &'static str,
    status: &'static str,
    person: &'a str,
    roles: Vec<&'a str>,
    contract: Option<&'a str>,
    organizations: Vec<&'a str>,
    overlap: OverlapJson,
    evidence: Vec<&'a str>,
}

impl<'a> From<&'a Finding> for FindingJson<'a> {
    fn from(f: &'a Finding) -> Self {
        let strs = |set: &'a BTreeSet<Iri>| set.iter().map(Iri::as_str).collect();
        FindingJson {
            pattern_id: f.pattern.id(),
            status: "candidate",
            person: f.person.as_str(),
            roles: strs(&f.roles),
            contract: f.contract.as_ref().map(Iri::as_str),
            organizations: strs(&f.organizations),
            overlap: match f.overlap {
                Overlap::Date(d) => OverlapJson::Date {
                    date: format_date(d),
                },
                Overlap::Interval(i) => OverlapJson::Interval {
                    start: format_date(i.start),
                    end: i.end.map(format_date),
                },
            },
            evidence: strs(&f.evidence),
        }
    }
}

/// Pretty-printed JSON array; `patternId` is always the first field.
pub fn findings_to_json(findings: &[Finding]) -> String {
    let docs: Vec<FindingJson> = findings.iter().map(FindingJson::from).collect();
    serde_json::to_string_pretty(&docs).expect("findings serialize")
}

/// One row per finding; multi-valued columns are space separated.
pub fn findings_to_csv(findings: &[Finding]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "pattern_id",
        "status",
        "person",
        "roles",
        "contract",
        "organizations",
        "overlap_start",
        "overlap_end",
        "evidence",
    ];
    w.write_record(header).expect("in-memory write");
    for f in findings {
        let join = |set: &BTreeSet<Iri>| set.iter().map(Iri::as_str).collect::<Vec<_>>().join(" ");
        let (start, end) = match f.overlap {
            Overlap::Date(d) => (format_date(d), format_date(d)),
            Overlap::Interval(i) => (
                format_date(i.start),
                i.end.map(format_date).unwrap_or_default(),
            ),
        };
        w.write_record([
            f.pattern.id(),
            "candidate",
            f.person.as_str(),
            &join(&f.roles),
            f.contract.as_ref().map_or("", Iri::as_str),
            &join(&f.organizations),
            &start,
            &end,
            &join(&f.evidence),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush"))
        .expect("CSV of UTF-8 fields is UTF-8")
}
