//! CSV ingestion for tender registry exports and role/evidence sheets.
//!
//! Both readers check the header bit-exactly, then validate each row on its
//! own: a bad row is reported with its line number and never aborts the file.

use std::collections::BTreeSet;
use std::fmt;

use chrono::NaiveDate;
use serde::Deserialize;
use thiserror::Error;

use crate::date::parse_date;
use crate::mint::{mint_entity_iri, mint_role_iri, normalize_name, EntityKind, MintConfig};
use crate::ns;
use crate::rdf::{Graph, Iri, Literal, Triple};

pub const CONTRACT_HEADER: [&str; 7] = [
    "contract_id",
    "title",
    "awarding_org",
    "awarded_org",
    "award_date",
    "amount_eur",
    "source_url",
];

pub const ROLE_HEADER: [&str; 11] = [
    "person_name",
    "role_type",
    "org",
    "start_date",
    "end_date",
    "relation",
    "related_org",
    "evidence_url",
    "evidence_title",
    "publisher",
    "evidence_date",
];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
}

impl IngestReport {
    pub fn rows(&self) -> usize {
        self.accepted + self.rejected.len()
    }

    fn merge(&mut self, other: IngestReport) {
        self.accepted += other.accepted;
        self.rejected.extend(other.rejected);
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "accepted {} rows, rejected {}",
            self.accepted,
            self.rejected.len()
        )?;
        for r in &self.rejected {
            write!(f, "\n  line {}: {}", r.line, r.reason)?;
        }
        Ok(())
    }
}

/// A contract row exactly as it appears in the registry CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct ContractRow {
    pub contract_id: String,
    pub title: String,
    pub awarding_org: String,
    pub awarded_org: String,
    pub award_date: String,
    pub amount_eur: String,
    pub source_url: String,
}

/// A validated contract award.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractRecord {
    contract_id: String,
    title: String,
    awarding_org: String,
    awarded_org: String,
    award_date: NaiveDate,
    amount: String,
    source_url: Iri,
}

fn required(field: &str, value: &str) -> Result<String, String> {
    let value = value.trim();
    if value.is_empty() {
        return Err(format!("{field} is empty"));
    }
    Ok(value.to_string())
}

fn name(field: &str, value: &str) -> Result<String, String> {
    let value = required(field, value)?;
    normalize_name(&value).map_err(|_| format!("{field} {value:?} has no letters or digits"))?;
    Ok(value)
}

fn date(field: &str, value: &str) -> Result<NaiveDate, String> {
    let value = value.trim();
    parse_date(value).ok_or_else(|| format!("{field} {value:?} is not a valid YYYY-MM-DD date"))
}

fn iri(field: &str, value: &str) -> Result<Iri, String> {
    Iri::new(value.trim()).map_err(|e| format!("{field}: {e}"))
}

fn decimal(field: &str, value: &str) -> Result<String, String> {
    let value = value.trim();
    if value.starts_with('-') {
        return Err(format!("{field} {value:?} is negative"));
    }
    let (int, frac) = match value.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (value, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || frac.is_some_and(|f| !digits(f)) {
        return Err(format!("{field} {value:?} is not a decimal number"));
    }
    Ok(value.to_string())
}

impl TryFrom<ContractRow> for ContractRecord {
    type Error = String;

    fn try_from(row: ContractRow) -> Result<Self, String> {
        Ok(ContractRecord {
            contract_id: required("contract_id", &row.contract_id)?,
            title: row.title.trim().to_string(),
            awarding_org: name("awarding_org", &row.awarding_org)?,
            awarded_org: name("awarded_org", &row.awarded_org)?,
            award_date: date("award_date", &row.award_date)?,
            amount: decimal("amount_eur", &row.amount_eur)?,
            source_url: iri("source_url", &row.source_url)?,
        })
    }
}

impl ContractRecord {
    pub fn contract_id(&self) -> &str {
        &self.contract_id
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn awarding_org(&self) -> &str {
        &self.awarding_org
    }

    pub fn awarded_org(&self) -> &str {
        &self.awarded_org
    }

    pub fn award_date(&self) -> NaiveDate {
        self.award_date
    }

    /// Amount in euros, lexical form as given.
    pub fn amount(&self) -> &str {
        &self.amount
    }

    pub fn source_url(&self) -> &Iri {
        &self.source_url
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Owner,
    Affiliated,
}

impl Relation {
    pub fn predicate(self) -> Iri {
        match self {
            Relation::Owner => ns::tro("ownerOf"),
            Relation::Affiliated => ns::tro("affiliatedWith"),
        }
    }
}

/// A role/evidence row exactly as it appears in the CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct RoleRow {
    pub person_name: String,
    pub role_type: String,
    pub org: String,
    pub start_date: String,
    pub end_date: String,
    pub relation: String,
    pub related_org: String,
    pub evidence_url: String,
    pub evidence_title: String,
    pub publisher: String,
    pub evidence_date: String,
}

/// A validated role of a person in an organization plus the evidence
/// backing it and, optionally, the person's link to another organization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleEvidenceRecord {
    person_name: String,
    role_type: String,
    org: String,
    start: NaiveDate,
    end: Option<NaiveDate>,
    link: Option<(Relation, String)>,
    evidence_url: Iri,
    evidence_title: String,
    publisher: String,
    evidence_date: NaiveDate,
}

impl TryFrom<RoleRow> for RoleEvidenceRecord {
    type Error = String;

    fn try_from(row: RoleRow) -> Result<Self, String> {
        let person_name = name("person_name", &row.person_name)?;
        let role_type = name("role_type", &row.role_type)?;
        let org = name("org", &row.org)?;
        let start = date("start_date", &row.start_date)?;
        let end = match row.end_date.trim() {
            "" => None,
            value => Some(date("end_date", value)?),
        };
        if let Some(end) = end {
            if end < start {
                return Err(format!("end_date {end} is before start_date {start}"));
            }
        }
        let relation = match row.relation.trim() {
            "" => None,
            "owner" => Some(Relation::Owner),
            "affiliated" => Some(Relation::Affiliated),
            other => {
                return Err(format!(
                    "unknown relation {other:?} (expected owner, affiliated or empty)"
                ))
            }
        };
        let related_org = row.related_org.trim();
        let link = match (relation, related_org.is_empty()) {
            (None, true) => None,
            (Some(rel), false) => Some((rel, name("related_org", related_org)?)),
            (Some(_), true) => return Err("relation is set but related_org is empty".to_string()),
            (None, false) => return Err("related_org is set but relation is empty".to_string()),
        };
        Ok(RoleEvidenceRecord {
            person_name,
            role_type,
            org,
            start,
            end,
            link,
            evidence_url: iri("evidence_url", &row.evidence_url)?,
            evidence_title: row.evidence_title.trim().to_string(),
            publisher: row.publisher.trim().to_string(),
            evidence_date: date("evidence_date", &row.evidence_date)?,
        })
    }
}

impl RoleEvidenceRecord {
    pub fn person_name(&self) -> &str {
        &self.person_name
    }

    pub fn role_type(&self) -> &str {
        &self.role_type
    }

    pub fn org(&self) -> &str {
        &self.org
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> Option<NaiveDate> {
        self.end
    }

    pub fn relation(&self) -> Option<Relation> {
        self.link.as_ref().map(|(r, _)| *r)
    }

    pub fn related_org(&self) -> Option<&str> {
        self.link.as_ref().map(|(_, o)| o.as_str())
    }

    pub fn evidence_url(&self) -> &Iri {
        &self.evidence_url
    }

    pub fn evidence_title(&self) -> &str {
        &self.evidence_title
    }

    pub fn publisher(&self) -> &str {
        &self.publisher
    }

    pub fn evidence_date(&self) -> NaiveDate {
        self.evidence_date
    }
}

fn parse_rows<Row, Rec>(
    text: &str,
    header: &[&str],
) -> Result<(Vec<Rec>, IngestReport), IngestError>
where
    Row: for<'de> Deserialize<'de>,
    Rec: TryFrom<Row, Error = String>,
{
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let expected = header.join(",");
    let found = match records.next() {
        Some(first) => first?.iter().collect::<Vec<_>>().join(","),
        None => String::new(),
    };
    if found != expected {
        return Err(IngestError::HeaderMismatch { expected, found });
    }
    let header_record = csv::StringRecord::from(header.to_vec());

    let mut out = Vec::new();
    let mut report = IngestReport::default();
    for result in records {
        let (line, outcome) = match result {
            Ok(record) => {
                let line = record.position().map_or(0, |p| p.line());
                let outcome = if record.len() != header.len() {
                    Err(format!(
                        "expected {} fields, found {}",
                        header.len(),
                        record.len()
                    ))
                } else {
                    record
                        .deserialize::<Row>(Some(&header_record))
                        .map_err(|e| e.to_string())
                        .and_then(Rec::try_from)
                };
                (line, outcome)
            }
            Err(e) => (e.position().map_or(0, |p| p.line()), Err(e.to_string())),
        };
        match outcome {
            Ok(rec) => {
                out.push(rec);
                report.accepted += 1;
            }
            Err(reason) => report.rejected.push(Rejection { line, reason }),
        }
    }
    Ok((out, report))
}

pub fn parse_contract_csv(text: &str) -> Result<(Vec<ContractRecord>, IngestReport), IngestError> {
    parse_rows::<ContractRow, ContractRecord>(text, &CONTRACT_HEADER)
}

pub fn parse_role_csv(text: &str) -> Result<(Vec<RoleEvidenceRecord>, IngestReport), IngestError> {
    parse_rows::<RoleRow, RoleEvidenceRecord>(text, &ROLE_HEADER)
}

fn entity(cfg: &MintConfig, kind: EntityKind, key: &str) -> Iri {
    mint_entity_iri(cfg, kind, key).expect("record fields were validated against minting")
}

fn organization(out: &mut BTreeSet<Triple>, cfg: &MintConfig, name: &str) -> Iri {
    let org = entity(cfg, EntityKind::Org, name);
    out.insert(Triple::new(
        org.clone(),
        ns::rdf("type"),
        ns::gist("Organization"),
    ));
    out.insert(Triple::new(
        org.clone(),
        ns::schema("name"),
        Literal::string(name),
    ));
    org
}

fn any_uri(iri: &Iri) -> Literal {
    Literal::typed(iri.as_str(), ns::xsd("anyURI")).expect("xsd:anyURI")
}

pub fn contract_to_triples(r: &ContractRecord, cfg: &MintConfig) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    let contract = entity(cfg, EntityKind::Contract, &r.contract_id);
    let awarding = organization(&mut out, cfg, &r.awarding_org);
    let awarded = organization(&mut out, cfg, &r.awarded_org);
    let evidence = entity(
        cfg,
        EntityKind::Evidence,
        &format!("contract {} {}", r.contract_id, r.source_url.as_str()),
    );

    out.insert(Triple::new(
        contract.clone(),
        ns::rdf("type"),
        ns::epo("Contract"),
    ));
    if !r.title.is_empty() {
        out.insert(Triple::new(
            contract.clone(),
            ns::dcterms("title"),
            Literal::string(&r.title),
        ));
    }
    out.insert(Triple::new(
        contract.clone(),
        ns::epo("awardDate"),
        Literal::date(r.award_date),
    ));
    out.insert(Triple::new(
        contract.clone(),
        ns::gr("amount"),
        Literal::typed(&r.amount, ns::xsd("decimal")).expect("xsd:decimal"),
    ));
    out.insert(Triple::new(
        contract.clone(),
        ns::epo("awardedBy"),
        awarding,
    ));
    out.insert(Triple::new(contract.clone(), ns::epo("awardedTo"), awarded));
    out.insert(Triple::new(
        contract,
        ns::tro("hasEvidence"),
        evidence.clone(),
    ));
    out.insert(Triple::new(
        evidence.clone(),
        ns::rdf("type"),
        ns::tro("Evidence"),
    ));
    out.insert(Triple::new(
        evidence,
        ns::tro("evidenceURL"),
        any_uri(&r.source_url),
    ));
    out
}

pub fn role_to_triples(r: &RoleEvidenceRecord, cfg: &MintConfig) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    let person = entity(cfg, EntityKind::Person, &r.person_name);
    let role = mint_role_iri(cfg, &r.person_name, &r.role_type, r.start, r.end, &r.org)
        .expect("record fields were validated against minting");
    let org = organization(&mut out, cfg, &r.org);
    let evidence = entity(
        cfg,
        EntityKind::Evidence,
        &format!(
            "{} {} {} {}",
            r.evidence_url.as_str(),
            r.evidence_date,
            r.publisher,
            r.evidence_title
        ),
    );

    out.insert(Triple::new(
        person.clone(),
        ns::rdf("type"),
        ns::schema("Person"),
    ));
    out.insert(Triple::new(
        person.clone(),
        ns::schema("name"),
        Literal::string(&r.person_name),
    ));

    out.insert(Triple::new(role.clone(), ns::rdf("type"), ns::tro("Role")));
    out.insert(Triple::new(role.clone(), ns::tro("roleOf"), person.clone()));
    out.insert(Triple::new(role.clone(), ns::tro("roleIn"), org));
    out.insert(Triple::new(
        role.clone(),
        ns::tro("startDate"),
        Literal::date(r.start),
    ));
    if let Some(end) = r.end {
        out.insert(Triple::new(
            role.clone(),
            ns::tro("endDate"),
            Literal::date(end),
        ));
    }
    out.insert(Triple::new(role, ns::tro("hasEvidence"), evidence.clone()));

    out.insert(Triple::new(
        evidence.clone(),
        ns::rdf("type"),
        ns::tro("Evidence"),
    ));
    out.insert(Triple::new(
        evidence.clone(),
        ns::tro("evidenceURL"),
        any_uri(&r.evidence_url),
    ));
    if !r.evidence_title.is_empty() {
        out.insert(Triple::new(
            evidence.clone(),
            ns::dcterms("title"),
            Literal::string(&r.evidence_title),
        ));
    }
    out.insert(Triple::new(
        evidence.clone(),
        ns::dc("date"),
        Literal::date(r.evidence_date),
    ));
    if !r.publisher.is_empty() {
        out.insert(Triple::new(
            evidence,
            ns::schema("publisher"),
            Literal::string(&r.publisher),
        ));
    }

    if let Some((relation, related)) = &r.link {
        let related = organization(&mut out, cfg, related);
        out.insert(Triple::new(person, relation.predicate(), related));
    }
    out
}

/// Merges every record into one graph carrying the default prefixes.
pub fn build_graph(
    contracts: &[ContractRecord],
    roles: &[RoleEvidenceRecord],
    cfg: &MintConfig,
) -> Graph {
    let mut g = Graph::with_default_prefixes();
    for c in contracts {
        g.extend(contract_to_triples(c, cfg));
    }
    for r in roles {
        g.extend(role_to_triples(r, cfg));
    }
    g
}

/// Parses both CSV sources and builds the merged graph.
pub fn ingest_csv(
    contracts_csv: &str,
    roles_csv: &str,
    cfg: &MintConfig,
) -> Result<(Graph, IngestReport), IngestError> {
    let (contracts, mut report) = parse_contract_csv(contracts_csv)?;
    let (roles, role_report) = parse_role_csv(roles_csv)?;
    report.merge(role_report);
    Ok((build_graph(&contracts, &roles, cfg), report))
}
