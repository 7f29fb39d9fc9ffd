//! RDF atoms: IRIs, literals, blank nodes and triples.

use std::fmt;

use thiserror::Error;

use crate::ns;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid IRI {0:?}: {1}")]
    InvalidIri(String, &'static str),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNode(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguage(String),
    #[error("rdf:langString literals must carry a language tag")]
    LangStringWithoutLanguage,
}

/// An absolute IRI.
///
/// The value always has a scheme followed by `:` and never contains
/// whitespace, angle brackets or the other characters Turtle forbids inside
/// an `IRIREF`, so every `Iri` can be written back out unescaped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        validate_iri(&value)?;
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

fn validate_iri(value: &str) -> Result<(), TermError> {
    let fail = |why| Err(TermError::InvalidIri(value.to_string(), why));
    let Some(colon) = value.find(':') else {
        return fail("missing scheme");
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return fail("scheme must start with a letter"),
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        return fail("invalid scheme character");
    }
    for c in value.chars() {
        if c.is_whitespace() || c.is_control() {
            return fail("contains whitespace or control character");
        }
        if matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            return fail("contains a character not allowed in IRIs");
        }
    }
    Ok(())
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(TermError::InvalidBlankNode(label));
        }
        Ok(BlankNode(label))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// A literal compared by lexical form, datatype and language, with no
/// value-space normalization (`"1"` and `"01"` stay distinct).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: ns::xsd("string"),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, TermError> {
        if datatype == ns::rdf("langString") {
            return Err(TermError::LangStringWithoutLanguage);
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        })
    }

    /// A language-tagged string. The tag is stored lowercased.
    pub fn lang(lexical: impl Into<String>, language: &str) -> Result<Self, TermError> {
        if !is_language_tag(language) {
            return Err(TermError::InvalidLanguage(language.to_string()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: ns::rdf("langString"),
            language: Some(language.to_ascii_lowercase()),
        })
    }

    pub fn date(date: chrono::NaiveDate) -> Self {
        Literal {
            lexical: crate::date::format_date(date),
            datatype: ns::xsd("date"),
            language: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let Some(primary) = parts.next() else {
        return false;
    };
    !primary.is_empty()
        && primary.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

pub(crate) fn escape_string(out: &mut String, value: &str) {
    for c in value.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut quoted = String::with_capacity(self.lexical.len() + 2);
        quoted.push('"');
        escape_string(&mut quoted, &self.lexical);
        quoted.push('"');
        f.write_str(&quoted)?;
        match &self.language {
            Some(lang) => write!(f, "@{lang}"),
            None if self.datatype == ns::xsd("string") => Ok(()),
            None => write!(f, "^^{}", self.datatype),
        }
    }
}

/// Subject position: an IRI or a blank node, never a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Iri(Iri),
    Blank(BlankNode),
}

impl Subject {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Subject::Iri(iri) => Some(iri),
            Subject::Blank(_) => None,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Iri(iri) => iri.fmt(f),
            Subject::Blank(b) => b.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
    Blank(BlankNode),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// The term as a subject, if it may appear in subject position.
    pub fn to_subject(&self) -> Option<Subject> {
        match self {
            Term::Iri(iri) => Some(Subject::Iri(iri.clone())),
            Term::Blank(b) => Some(Subject::Blank(b.clone())),
            Term::Literal(_) => None,
        }
    }

    /// N-Triples form, used as the canonical ordering key.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Literal(lit) => lit.fmt(f),
            Term::Blank(b) => b.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(iri) => Term::Iri(iri),
            Subject::Blank(b) => Term::Blank(b),
        }
    }
}

impl From<Iri> for Subject {
    fn from(iri: Iri) -> Self {
        Subject::Iri(iri)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Self {
        Subject::Blank(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }

    /// Ordering key made of the three canonical term forms.
    pub fn canonical_key(&self) -> (String, String, String) {
        (
            self.subject.to_string(),
            self.predicate.to_string(),
            self.object.to_string(),
        )
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_requires_scheme() {
        assert!(Iri::new("http://ehu.eus/tro#Role").is_ok());
        assert!(Iri::new("urn:x").is_ok());
        assert!(Iri::new("").is_err());
        assert!(Iri::new("no-scheme").is_err());
        assert!(Iri::new("1http://x").is_err());
        assert!(Iri::new("http://a b").is_err());
        assert!(Iri::new("http://a<b").is_err());
    }

    #[test]
    fn literal_defaults_to_xsd_string() {
        let lit = Literal::string("Ana");
        assert_eq!(lit.datatype(), &ns::xsd("string"));
        assert_eq!(lit.language(), None);
        assert_eq!(Term::from(lit).to_string(), "\"Ana\"");
    }

    #[test]
    fn language_implies_lang_string() {
        let lit = Literal::lang("Gobierno Vasco", "ES").unwrap();
        assert_eq!(lit.language(), Some("es"));
        assert_eq!(lit.datatype(), &ns::rdf("langString"));
        assert!(Literal::typed("x", ns::rdf("langString")).is_err());
        assert!(Literal::lang("x", "").is_err());
        assert!(Literal::lang("x", "en-").is_err());
    }

    #[test]
    fn literal_escaping() {
        let lit = Literal::string("a \"b\"\n\\");
        assert_eq!(lit.to_string(), r#""a \"b\"\n\\""#);
    }

    #[test]
    fn blank_node_labels() {
        assert!(BlankNode::new("b0").is_ok());
        assert!(BlankNode::new("").is_err());
        assert!(BlankNode::new("a-b").is_err());
    }

    #[test]
    fn literal_identity_is_lexical() {
        let one = Literal::typed("1", ns::xsd("integer")).unwrap();
        let zero_one = Literal::typed("01", ns::xsd("integer")).unwrap();
        assert_ne!(one, zero_one);
    }
}
