//! Severity-graded quality report over a graph.
//!
//! The rule catalog is closed. ERROR rules cover model integrity, WARN rules
//! cover vocabulary hygiene, INFO rules cover ontology header metadata.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::date::parse_date;
use crate::ns;
use crate::rdf::{Graph, Iri, Literal, Subject, Term, Triple};
use crate::vocab::{RangeKind, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Severity {
    #[serde(rename = "INFO")]
    Info,
    #[serde(rename = "WARN")]
    Warn,
    #[serde(rename = "ERROR")]
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warn => "WARN",
            Severity::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    DisjointClash,
    MissingRequired,
    BadRange,
    BadDate,
    IntervalOrder,
    UnknownTerm,
    NoLabel,
    NoProvenance,
    NoVersion,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::DisjointClash,
        Rule::MissingRequired,
        Rule::BadRange,
        Rule::BadDate,
        Rule::IntervalOrder,
        Rule::UnknownTerm,
        Rule::NoLabel,
        Rule::NoProvenance,
        Rule::NoVersion,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::DisjointClash => "DISJOINT-CLASH",
            Rule::MissingRequired => "MISSING-REQUIRED",
            Rule::BadRange => "BAD-RANGE",
            Rule::BadDate => "BAD-DATE",
            Rule::IntervalOrder => "INTERVAL-ORDER",
            Rule::UnknownTerm => "UNKNOWN-TERM",
            Rule::NoLabel => "NO-LABEL",
            Rule::NoProvenance => "NO-PROVENANCE",
            Rule::NoVersion => "NO-VERSION",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Rule::DisjointClash
            | Rule::MissingRequired
            | Rule::BadRange
            | Rule::BadDate
            | Rule::IntervalOrder => Severity::Error,
            Rule::UnknownTerm | Rule::NoLabel => Severity::Warn,
            Rule::NoProvenance | Rule::NoVersion => Severity::Info,
        }
    }

    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id() == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportEntry {
    pub rule: Rule,
    pub focus: Term,
    pub message: String,
}

impl ReportEntry {
    pub fn severity(&self) -> Severity {
        self.rule.severity()
    }

    pub fn rule_id(&self) -> &'static str {
        self.rule.id()
    }
}

impl fmt::Display for ReportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.severity(),
            self.rule_id(),
            self.focus,
            self.message
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub error: usize,
    pub warn: usize,
    pub info: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<ReportEntry>,
    counts: Counts,
}

impl Report {
    /// Sorts entries by rule id, then focus, then message, and tallies them.
    pub fn new(mut entries: Vec<ReportEntry>) -> Self {
        entries.sort_by_cached_key(|e| (e.rule_id(), e.focus.canonical(), e.message.clone()));
        entries.dedup();
        let mut counts = Counts::default();
        for e in &entries {
            match e.severity() {
                Severity::Error => counts.error += 1,
                Severity::Warn => counts.warn += 1,
                Severity::Info => counts.info += 1,
            }
        }
        Report { entries, counts }
    }

    pub fn entries(&self) -> &[ReportEntry] {
        &self.entries
    }

    pub fn counts(&self) -> Counts {
        self.counts
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        self.entries.iter().filter(|e| e.rule == rule).count()
    }

    /// One line per entry: `SEVERITY ruleId focus message`.
    pub fn to_text(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Entry<'a> {
            severity: Severity,
            rule_id: &'a str,
            focus: String,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            entries: Vec<Entry<'a>>,
            counts: Counts,
        }
        let doc = Doc {
            entries: self
                .entries
                .iter()
                .map(|e| Entry {
                    severity: e.severity(),
                    rule_id: e.rule_id(),
                    focus: e.focus.canonical(),
                    message: &e.message,
                })
                .collect(),
            counts: self.counts,
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

pub fn max_severity(r: &Report) -> Option<Severity> {
    r.entries.iter().map(ReportEntry::severity).max()
}

/// Adds every superclass typing implied by the vocabulary. One pass
/// suffices because the closure is precomputed.
pub fn infer_types(g: &Graph, v: &Vocabulary) -> Graph {
    let rdf_type = ns::rdf("type");
    let mut out = g.clone();
    for t in g.match_pattern(None, Some(&rdf_type), None) {
        let Some(class) = t.object.as_iri() else {
            continue;
        };
        let Ok(closure) = v.subclass_closure(class) else {
            continue;
        };
        for sup in closure.iter().filter(|c| *c != class) {
            out.insert(Triple::new(
                t.subject.clone(),
                rdf_type.clone(),
                sup.clone(),
            ));
        }
    }
    out
}

fn types_by_node(g: &Graph) -> BTreeMap<Subject, BTreeSet<Iri>> {
    let mut types: BTreeMap<Subject, BTreeSet<Iri>> = BTreeMap::new();
    for t in g.match_pattern(None, Some(&ns::rdf("type")), None) {
        if let Term::Iri(class) = t.object {
            types.entry(t.subject).or_default().insert(class);
        }
    }
    types
}

fn short(iri: &Iri, prefixes: &ns::PrefixMap) -> String {
    for (p, namespace) in prefixes {
        if let Some(local) = iri.as_str().strip_prefix(namespace.as_str()) {
            if !local.is_empty() {
                return format!("{p}:{local}");
            }
        }
    }
    iri.to_string()
}

fn datatype_fits(lit: &Literal, range: &Iri) -> bool {
    let dt = lit.datatype();
    dt == range
        || (range == &ns::xsd("string") && dt == &ns::rdf("langString"))
        || (range == &ns::xsd("decimal") && dt == &ns::xsd("integer"))
}

struct Checker<'a> {
    graph: &'a Graph,
    vocab: &'a Vocabulary,
    inferred: Graph,
    types: BTreeMap<Subject, BTreeSet<Iri>>,
    prefixes: ns::PrefixMap,
    entries: Vec<ReportEntry>,
}

impl Checker<'_> {
    fn push(&mut self, rule: Rule, focus: impl Into<Term>, message: String) {
        self.entries.push(ReportEntry {
            rule,
            focus: focus.into(),
            message,
        });
    }

    fn short(&self, iri: &Iri) -> String {
        short(iri, &self.prefixes)
    }

    fn disjoint_clash(&mut self) {
        let mut found = Vec::new();
        for set in self.vocab.disjointness_sets() {
            for (node, types) in &self.types {
                let hits: Vec<&Iri> = set.intersection(types).collect();
                if hits.len() >= 2 {
                    let names: Vec<String> = hits.iter().map(|c| self.short(c)).collect();
                    found.push((
                        node.clone(),
                        format!("typed with disjoint classes {}", names.join(", ")),
                    ));
                }
            }
        }
        for (node, msg) in found {
            self.push(Rule::DisjointClash, node, msg);
        }
    }

    fn missing_required(&mut self) {
        let mut found = Vec::new();
        for (class, property) in self.vocab.required_properties() {
            for (node, types) in &self.types {
                if types.contains(class) && !self.inferred.has_property(node, property) {
                    found.push((
                        node.clone(),
                        format!(
                            "{} without required {}",
                            self.short(class),
                            self.short(property)
                        ),
                    ));
                }
            }
        }
        for (node, msg) in found {
            self.push(Rule::MissingRequired, node, msg);
        }
    }

    fn disjoint_with(&self, class: &Iri) -> BTreeSet<&Iri> {
        self.vocab
            .disjointness_sets()
            .filter(|set| set.contains(class))
            .flat_map(|set| set.iter().filter(move |c| *c != class))
            .collect()
    }

    fn bad_range(&mut self) {
        let mut found = Vec::new();
        for (property, range, kind) in self.vocab.ranges() {
            let excluded = self.disjoint_with(range);
            for t in self.graph.match_pattern(None, Some(property), None) {
                let problem = match (kind, &t.object) {
                    (RangeKind::Class, Term::Literal(lit)) => Some(format!(
                        "{} expects a {} node, found literal {lit}",
                        self.short(property),
                        self.short(range)
                    )),
                    (RangeKind::Class, object) => {
                        let object_types = object.to_subject().and_then(|s| self.types.get(&s));
                        object_types
                            .and_then(|types| types.iter().find(|c| excluded.contains(c)))
                            .map(|clash| {
                                format!(
                                    "{} expects a {} node, found {object} typed {}",
                                    self.short(property),
                                    self.short(range),
                                    self.short(clash)
                                )
                            })
                    }
                    (RangeKind::Datatype, Term::Literal(lit)) if datatype_fits(lit, range) => None,
                    (RangeKind::Datatype, object) => Some(format!(
                        "{} expects {}, found {object}",
                        self.short(property),
                        self.short(range)
                    )),
                };
                if let Some(msg) = problem {
                    found.push((t.subject, msg));
                }
            }
        }
        for (node, msg) in found {
            self.push(Rule::BadRange, node, msg);
        }
    }

    fn bad_date(&mut self) {
        let xsd_date = ns::xsd("date");
        let mut found = Vec::new();
        for t in self.graph.iter() {
            if let Term::Literal(lit) = &t.object {
                if lit.datatype() == &xsd_date && parse_date(lit.lexical()).is_none() {
                    found.push((
                        t.subject.clone(),
                        format!("{} {lit} is not a valid date", self.short(&t.predicate)),
                    ));
                }
            }
        }
        for (node, msg) in found {
            self.push(Rule::BadDate, node, msg);
        }
    }

    fn interval_order(&mut self) {
        let start_p = ns::tro("startDate");
        let end_p = ns::tro("endDate");
        let dates = |node: &Subject, p: &Iri| -> Vec<chrono::NaiveDate> {
            self.graph
                .objects(node, p)
                .filter_map(Term::as_literal)
                .filter_map(|l| parse_date(l.lexical()))
                .collect()
        };
        let mut found = Vec::new();
        for node in self.graph.subjects_with(&end_p) {
            for start in dates(&node, &start_p) {
                for end in dates(&node, &end_p) {
                    if end < start {
                        found.push((
                            node.clone(),
                            format!("endDate {end} is before startDate {start}"),
                        ));
                    }
                }
            }
        }
        for (node, msg) in found {
            self.push(Rule::IntervalOrder, node, msg);
        }
    }

    fn unknown_terms(&mut self) {
        let in_tro = |iri: &Iri| iri.as_str().starts_with(ns::TRO);
        let mut unknown = BTreeMap::new();
        for p in self.graph.predicates().filter(|p| in_tro(p)) {
            if self.vocab.term(p).is_none() {
                unknown.insert(p.clone(), "property");
            }
        }
        for t in self.graph.match_pattern(None, Some(&ns::rdf("type")), None) {
            if let Term::Iri(class) = t.object {
                if in_tro(&class) && !self.vocab.is_class(&class) {
                    unknown.insert(class, "class");
                }
            }
        }
        for (iri, what) in unknown {
            let msg = format!("{what} {} is not part of the vocabulary", self.short(&iri));
            self.push(Rule::UnknownTerm, iri, msg);
        }
    }

    fn no_label(&mut self) {
        let label = ns::rdfs("label");
        let mut found = BTreeSet::new();
        for kind in [
            "Class",
            "ObjectProperty",
            "DatatypeProperty",
            "AnnotationProperty",
        ] {
            for node in self
                .graph
                .subjects(&ns::rdf("type"), &Term::Iri(ns::owl(kind)))
            {
                if !self.graph.has_property(&node, &label) {
                    found.insert(node);
                }
            }
        }
        for node in found {
            self.push(
                Rule::NoLabel,
                node,
                "declared term has no rdfs:label".to_string(),
            );
        }
    }

    fn header_metadata(&mut self) {
        let headers: Vec<Subject> = self
            .graph
            .subjects(&ns::rdf("type"), &Term::Iri(ns::owl("Ontology")))
            .collect();
        let provenance = [
            ns::dc("contributor"),
            ns::dcterms("created"),
            ns::dcterms("modified"),
            ns::dc("date"),
        ];
        for header in headers {
            for p in &provenance {
                if !self.graph.has_property(&header, p) {
                    let msg = format!(
                        "ontology header lacks provenance property {}",
                        self.short(p)
                    );
                    self.push(Rule::NoProvenance, header.clone(), msg);
                }
            }
            if !self.graph.has_property(&header, &ns::owl("versionInfo")) {
                self.push(
                    Rule::NoVersion,
                    header,
                    "ontology header lacks owl:versionInfo".to_string(),
                );
            }
        }
    }
}

/// Runs type inference, then the whole rule catalog. Problems are entries,
/// never errors.
pub fn check(g: &Graph, v: &Vocabulary) -> Report {
    let inferred = infer_types(g, v);
    let types = types_by_node(&inferred);
    let mut prefixes = ns::default_prefixes();
    prefixes.extend(g.prefixes().iter().map(|(k, v)| (k.clone(), v.clone())));
    let mut checker = Checker {
        graph: g,
        vocab: v,
        inferred,
        types,
        prefixes,
        entries: Vec::new(),
    };
    checker.disjoint_clash();
    checker.missing_required();
    checker.bad_range();
    checker.bad_date();
    checker.interval_order();
    checker.unknown_terms();
    checker.no_label();
    checker.header_metadata();
    Report::new(checker.entries)
}
