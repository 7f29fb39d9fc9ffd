//! The TRO vocabulary: terms, subclass edges, disjointness sets and the
//! per-class constraints the validator enforces.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ns::{self, PrefixMap};
use crate::rdf::{Graph, Iri, Literal, Triple};

/// Version recorded in the emitted ontology header.
pub const VOCAB_VERSION: &str = "0.1.0";
const CREATED: &str = "2024-01-15";
const MODIFIED: &str = "2024-06-01";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Class,
    ObjectProperty,
    DataProperty,
    AnnotationProperty,
}

impl TermKind {
    pub fn owl_type(self) -> Iri {
        match self {
            TermKind::Class => ns::owl("Class"),
            TermKind::ObjectProperty => ns::owl("ObjectProperty"),
            TermKind::DataProperty => ns::owl("DatatypeProperty"),
            TermKind::AnnotationProperty => ns::owl("AnnotationProperty"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabTerm {
    pub iri: Iri,
    pub kind: TermKind,
    pub label: String,
    pub definition: String,
}

impl VocabTerm {
    pub fn new(iri: Iri, kind: TermKind, label: &str, definition: &str) -> Self {
        VocabTerm {
            iri,
            kind,
            label: label.to_string(),
            definition: definition.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RangeKind {
    Class,
    Datatype,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaConstraint {
    /// No individual may be an instance of two of these classes.
    Disjointness(BTreeSet<Iri>),
    /// Every instance of `on_class` has at least one `property` value.
    RequiredProperty {
        on_class: Iri,
        property: Iri,
    },
    PropertyRange {
        property: Iri,
        range: Iri,
        kind: RangeKind,
    },
    SubClassOf {
        sub: Iri,
        sup: Iri,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("term {0} is declared twice")]
    DuplicateTerm(Iri),
    #[error("term {0} has an empty label")]
    EmptyLabel(Iri),
    #[error("constraint references unknown term {0}")]
    UnknownTerm(Iri),
    #[error("{0} is not a class")]
    NotAClass(Iri),
    #[error("unknown class {0}")]
    UnknownClass(Iri),
    #[error("disjointness set needs at least two classes, got {0}")]
    DisjointnessTooSmall(usize),
    #[error("subclass cycle through {0}")]
    Cycle(Iri),
}

/// An immutable vocabulary with its subclass closure precomputed.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: BTreeMap<Iri, VocabTerm>,
    constraints: Vec<SchemaConstraint>,
    namespaces: PrefixMap,
    closure: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl Vocabulary {
    pub fn new(
        terms: Vec<VocabTerm>,
        constraints: Vec<SchemaConstraint>,
        namespaces: PrefixMap,
    ) -> Result<Self, VocabError> {
        let mut by_iri = BTreeMap::new();
        for term in terms {
            if term.label.trim().is_empty() {
                return Err(VocabError::EmptyLabel(term.iri));
            }
            if by_iri.contains_key(&term.iri) {
                return Err(VocabError::DuplicateTerm(term.iri));
            }
            by_iri.insert(term.iri.clone(), term);
        }

        let class = |iri: &Iri| match by_iri.get(iri) {
            None => Err(VocabError::UnknownTerm(iri.clone())),
            Some(t) if t.kind != TermKind::Class => Err(VocabError::NotAClass(iri.clone())),
            Some(_) => Ok(()),
        };
        let known = |iri: &Iri| {
            if by_iri.contains_key(iri) {
                Ok(())
            } else {
                Err(VocabError::UnknownTerm(iri.clone()))
            }
        };
        for c in &constraints {
            match c {
                SchemaConstraint::Disjointness(set) => {
                    if set.len() < 2 {
                        return Err(VocabError::DisjointnessTooSmall(set.len()));
                    }
                    set.iter().try_for_each(class)?;
                }
                SchemaConstraint::RequiredProperty { on_class, property } => {
                    class(on_class)?;
                    known(property)?;
                }
                SchemaConstraint::PropertyRange {
                    property,
                    range,
                    kind,
                } => {
                    known(property)?;
                    // datatypes (xsd:*) are referenced by IRI, not registered
                    if *kind == RangeKind::Class {
                        class(range)?;
                    }
                }
                SchemaConstraint::SubClassOf { sub, sup } => {
                    class(sub)?;
                    class(sup)?;
                }
            }
        }

        let closure = compute_closure(&by_iri, &constraints)?;
        Ok(Vocabulary {
            terms: by_iri,
            constraints,
            namespaces,
            closure,
        })
    }

    /// Rebuilds the vocabulary with extra constraints appended.
    pub fn with_constraints(
        &self,
        extra: impl IntoIterator<Item = SchemaConstraint>,
    ) -> Result<Self, VocabError> {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra);
        Vocabulary::new(
            self.terms.values().cloned().collect(),
            constraints,
            self.namespaces.clone(),
        )
    }

    pub fn term(&self, iri: &Iri) -> Option<&VocabTerm> {
        self.terms.get(iri)
    }

    pub fn terms(&self) -> impl Iterator<Item = &VocabTerm> {
        self.terms.values()
    }

    pub fn classes(&self) -> impl Iterator<Item = &Iri> {
        self.terms
            .values()
            .filter(|t| t.kind == TermKind::Class)
            .map(|t| &t.iri)
    }

    pub fn is_class(&self, iri: &Iri) -> bool {
        self.terms
            .get(iri)
            .is_some_and(|t| t.kind == TermKind::Class)
    }

    pub fn constraints(&self) -> &[SchemaConstraint] {
        &self.constraints
    }

    pub fn namespaces(&self) -> &PrefixMap {
        &self.namespaces
    }

    pub fn disjointness_sets(&self) -> impl Iterator<Item = &BTreeSet<Iri>> {
        self.constraints.iter().filter_map(|c| match c {
            SchemaConstraint::Disjointness(set) => Some(set),
            _ => None,
        })
    }

    pub fn required_properties(&self) -> impl Iterator<Item = (&Iri, &Iri)> {
        self.constraints.iter().filter_map(|c| match c {
            SchemaConstraint::RequiredProperty { on_class, property } => Some((on_class, property)),
            _ => None,
        })
    }

    pub fn ranges(&self) -> impl Iterator<Item = (&Iri, &Iri, RangeKind)> {
        self.constraints.iter().filter_map(|c| match c {
            SchemaConstraint::PropertyRange {
                property,
                range,
                kind,
            } => Some((property, range, *kind)),
            _ => None,
        })
    }

    pub fn subclass_edges(&self) -> impl Iterator<Item = (&Iri, &Iri)> {
        self.constraints.iter().filter_map(|c| match c {
            SchemaConstraint::SubClassOf { sub, sup } => Some((sub, sup)),
            _ => None,
        })
    }

    /// `c` together with all of its transitive superclasses.
    pub fn subclass_closure(&self, c: &Iri) -> Result<&BTreeSet<Iri>, VocabError> {
        self.closure
            .get(c)
            .ok_or_else(|| VocabError::UnknownClass(c.clone()))
    }
}

fn compute_closure(
    terms: &BTreeMap<Iri, VocabTerm>,
    constraints: &[SchemaConstraint],
) -> Result<BTreeMap<Iri, BTreeSet<Iri>>, VocabError> {
    let mut direct: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for c in constraints {
        if let SchemaConstraint::SubClassOf { sub, sup } = c {
            direct.entry(sub).or_default().push(sup);
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }

    fn visit<'a>(
        class: &'a Iri,
        direct: &BTreeMap<&'a Iri, Vec<&'a Iri>>,
        marks: &mut BTreeMap<&'a Iri, Mark>,
        closure: &mut BTreeMap<Iri, BTreeSet<Iri>>,
    ) -> Result<(), VocabError> {
        match marks.get(class) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Visiting) => return Err(VocabError::Cycle(class.clone())),
            None => {}
        }
        marks.insert(class, Mark::Visiting);
        let mut set = BTreeSet::from([class.clone()]);
        for sup in direct.get(class).into_iter().flatten() {
            visit(sup, direct, marks, closure)?;
            set.extend(closure[*sup].iter().cloned());
        }
        marks.insert(class, Mark::Done);
        closure.insert(class.clone(), set);
        Ok(())
    }

    let mut marks = BTreeMap::new();
    let mut closure = BTreeMap::new();
    for term in terms.values().filter(|t| t.kind == TermKind::Class) {
        visit(&term.iri, &direct, &mut marks, &mut closure)?;
    }
    Ok(closure)
}

pub fn subclass_closure<'v>(v: &'v Vocabulary, c: &Iri) -> Result<&'v BTreeSet<Iri>, VocabError> {
    v.subclass_closure(c)
}

/// The fixed TRO vocabulary.
pub fn builtin_vocabulary() -> Vocabulary {
    use TermKind::*;

    let terms = vec![
        VocabTerm::new(
            ns::epo("Contract"),
            Class,
            "Contract",
            "A voluntary, deliberate, and legally binding agreement between two or more competent parties.",
        ),
        VocabTerm::new(
            ns::gist("Organization"),
            Class,
            "Organization",
            "A body of people organised for a purpose, such as a company, a public administration or a union.",
        ),
        VocabTerm::new(
            ns::tro("Evidence"),
            Class,
            "Evidence",
            "A document with a URL that backs a statement such as a person's role in an entity or a relation between \
             people. It is a pointer to a public source, not legal evidence.",
        ),
        VocabTerm::new(
            ns::tro("NewsArticle"),
            Class,
            "News article",
            "Evidence published by a news outlet.",
        ),
        VocabTerm::new(
            ns::tro("OpenDataRecord"),
            Class,
            "Open data record",
            "Evidence taken from an open data portal, for example a public tender registry.",
        ),
        VocabTerm::new(
            ns::tro("PublicProfile"),
            Class,
            "Public profile",
            "Evidence taken from a public profile of a person.",
        ),
        VocabTerm::new(
            ns::schema("Person"),
            Class,
            "Person",
            "A physical person. A name is mandatory.",
        ),
        VocabTerm::new(
            ns::tro("Role"),
            Class,
            "Role",
            "The function a person performs in an entity during a time range, backed by evidence.",
        ),
        VocabTerm::new(
            ns::tro("Commitment"),
            Class,
            "Commitment",
            "An obligation or engagement entered into by parties.",
        ),
        VocabTerm::new(ns::tro("roleOf"), ObjectProperty, "role of", "Links a role to the person who holds it."),
        VocabTerm::new(
            ns::tro("roleIn"),
            ObjectProperty,
            "role in",
            "Links a role to the organization where it is held.",
        ),
        VocabTerm::new(
            ns::tro("hasEvidence"),
            ObjectProperty,
            "has evidence",
            "Links a statement node to the evidence that backs it.",
        ),
        VocabTerm::new(
            ns::tro("ownerOf"),
            ObjectProperty,
            "owner of",
            "The person owns, fully or partly, the organization.",
        ),
        VocabTerm::new(
            ns::tro("affiliatedWith"),
            ObjectProperty,
            "affiliated with",
            "The person is a member of or affiliated with the organization.",
        ),
        VocabTerm::new(
            ns::tro("evidenceURL"),
            DataProperty,
            "evidence URL",
            "Where the evidence document can be retrieved.",
        ),
        VocabTerm::new(ns::tro("startDate"), DataProperty, "start date", "First day of the role."),
        VocabTerm::new(
            ns::tro("endDate"),
            DataProperty,
            "end date",
            "Last day of the role. Absent for ongoing roles.",
        ),
        VocabTerm::new(
            ns::epo("awardedBy"),
            ObjectProperty,
            "awarded by",
            "The organization that awarded the contract.",
        ),
        VocabTerm::new(
            ns::epo("awardedTo"),
            ObjectProperty,
            "awarded to",
            "The organization that won the contract.",
        ),
        VocabTerm::new(ns::epo("awardDate"), DataProperty, "award date", "Day the contract was awarded."),
        VocabTerm::new(ns::gr("amount"), DataProperty, "amount", "Contract amount in euros."),
        VocabTerm::new(ns::schema("name"), DataProperty, "name", "Name of a person or organization."),
        VocabTerm::new(
            ns::schema("publisher"),
            DataProperty,
            "publisher",
            "Name of the outlet or portal that published the evidence.",
        ),
        VocabTerm::new(ns::dcterms("title"), DataProperty, "title", "Title of a contract or document."),
        VocabTerm::new(ns::dc("date"), DataProperty, "date", "Publication date."),
    ];

    let class = RangeKind::Class;
    let datatype = RangeKind::Datatype;
    let range = |property: Iri, range: Iri, kind| SchemaConstraint::PropertyRange {
        property,
        range,
        kind,
    };
    let required =
        |on_class: Iri, property: Iri| SchemaConstraint::RequiredProperty { on_class, property };
    let sub = |sub: Iri, sup: Iri| SchemaConstraint::SubClassOf { sub, sup };

    let constraints = vec![
        SchemaConstraint::Disjointness(BTreeSet::from([
            ns::tro("Commitment"),
            ns::gist("Organization"),
            ns::tro("Evidence"),
            ns::schema("Person"),
        ])),
        sub(ns::tro("NewsArticle"), ns::tro("Evidence")),
        sub(ns::tro("OpenDataRecord"), ns::tro("Evidence")),
        sub(ns::tro("PublicProfile"), ns::tro("Evidence")),
        required(ns::schema("Person"), ns::schema("name")),
        required(ns::tro("Evidence"), ns::tro("evidenceURL")),
        required(ns::tro("Role"), ns::tro("roleOf")),
        required(ns::tro("Role"), ns::tro("roleIn")),
        required(ns::tro("Role"), ns::tro("startDate")),
        required(ns::tro("Role"), ns::tro("hasEvidence")),
        range(ns::tro("roleOf"), ns::schema("Person"), class),
        range(ns::tro("roleIn"), ns::gist("Organization"), class),
        range(ns::tro("hasEvidence"), ns::tro("Evidence"), class),
        range(ns::tro("ownerOf"), ns::gist("Organization"), class),
        range(ns::tro("affiliatedWith"), ns::gist("Organization"), class),
        range(ns::epo("awardedBy"), ns::gist("Organization"), class),
        range(ns::epo("awardedTo"), ns::gist("Organization"), class),
        range(ns::tro("evidenceURL"), ns::xsd("anyURI"), datatype),
        range(ns::tro("startDate"), ns::xsd("date"), datatype),
        range(ns::tro("endDate"), ns::xsd("date"), datatype),
        range(ns::epo("awardDate"), ns::xsd("date"), datatype),
        range(ns::gr("amount"), ns::xsd("decimal"), datatype),
        range(ns::schema("name"), ns::xsd("string"), datatype),
        range(ns::schema("publisher"), ns::xsd("string"), datatype),
        range(ns::dcterms("title"), ns::xsd("string"), datatype),
        range(ns::dc("date"), ns::xsd("date"), datatype),
    ];

    Vocabulary::new(terms, constraints, ns::default_prefixes())
        .expect("builtin vocabulary is well formed")
}

/// Emits the vocabulary as an OWL ontology graph.
pub fn vocabulary_graph(v: &Vocabulary) -> Graph {
    let mut g = Graph::new();
    for (prefix, namespace) in v.namespaces() {
        g.set_prefix(prefix.clone(), namespace.clone());
    }
    let rdf_type = ns::rdf("type");
    let ontology = ns::ontology();
    let date = |s: &str| Literal::typed(s, ns::xsd("date")).expect("xsd:date");

    g.insert(Triple::new(
        ontology.clone(),
        rdf_type.clone(),
        ns::owl("Ontology"),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::rdfs("label"),
        Literal::lang("Transparent Relations Ontology", "en").expect("valid tag"),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::owl("versionInfo"),
        Literal::string(VOCAB_VERSION),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::schema("schemaVersion"),
        Literal::string(VOCAB_VERSION),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::vann("preferredNamespacePrefix"),
        Literal::string("tro"),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::vann("preferredNamespaceUri"),
        Literal::string(ns::TRO),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::dc("contributor"),
        Literal::string("TRO contributors"),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::dcterms("created"),
        date(CREATED),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::dcterms("modified"),
        date(MODIFIED),
    ));
    g.insert(Triple::new(
        ontology.clone(),
        ns::dc("date"),
        date(MODIFIED),
    ));
    g.insert(Triple::new(
        ontology,
        ns::dcterms("license"),
        Iri::new("https://www.apache.org/licenses/LICENSE-2.0").expect("valid IRI"),
    ));

    for term in v.terms() {
        g.insert(Triple::new(
            term.iri.clone(),
            rdf_type.clone(),
            term.kind.owl_type(),
        ));
        g.insert(Triple::new(
            term.iri.clone(),
            ns::rdfs("label"),
            Literal::lang(&term.label, "en").expect("valid tag"),
        ));
        if !term.definition.is_empty() {
            g.insert(Triple::new(
                term.iri.clone(),
                ns::rdfs("comment"),
                Literal::lang(&term.definition, "en").expect("valid tag"),
            ));
        }
    }

    for c in v.constraints() {
        match c {
            SchemaConstraint::SubClassOf { sub, sup } => {
                g.insert(Triple::new(
                    sub.clone(),
                    ns::rdfs("subClassOf"),
                    sup.clone(),
                ));
            }
            SchemaConstraint::PropertyRange {
                property, range, ..
            } => {
                g.insert(Triple::new(
                    property.clone(),
                    ns::rdfs("range"),
                    range.clone(),
                ));
            }
            SchemaConstraint::Disjointness(set) => {
                let members: Vec<&Iri> = set.iter().collect();
                for (i, a) in members.iter().enumerate() {
                    for b in &members[i + 1..] {
                        g.insert(Triple::new(
                            (*a).clone(),
                            ns::owl("disjointWith"),
                            (*b).clone(),
                        ));
                    }
                }
            }
            // enforced by the validator; OWL restrictions would need blank nodes
            SchemaConstraint::RequiredProperty { .. } => {}
        }
    }
    g
}
