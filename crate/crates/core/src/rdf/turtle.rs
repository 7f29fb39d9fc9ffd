//! A Turtle subset reader and a deterministic Turtle writer.
//!
//! Supported: `@prefix`/`PREFIX`, IRIREFs, prefixed names, `a`, `_:` blank
//! node labels, `"..."` and `"""..."""` strings, integer and decimal
//! shorthand, `^^` datatypes, language tags, `;` and `,` lists and `#`
//! comments. Collections, `[]` property lists, `@base` and other constructs
//! are rejected with a [`ParseErrorKind::Unsupported`] error.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use super::graph::Graph;
use super::term::{escape_string, BlankNode, Iri, Literal, Subject, Term, Triple};
use crate::ns::{self, PrefixMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UndeclaredPrefix,
    Unterminated,
    MissingDot,
    Unsupported,
    InvalidTerm,
    Syntax,
}

/// Parse failure with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    DoubleCaret,
    Integer(String),
    Decimal(String),
    A,
    Dot,
    Semicolon,
    Comma,
    PrefixDirective,
    SparqlPrefix,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::IriRef(i) => write!(f, "<{i}>"),
            Token::PName { prefix, local } => write!(f, "{prefix}:{local}"),
            Token::Blank(b) => write!(f, "_:{b}"),
            Token::Str(_) => f.write_str("string literal"),
            Token::LangTag(l) => write!(f, "@{l}"),
            Token::DoubleCaret => f.write_str("'^^'"),
            Token::Integer(n) | Token::Decimal(n) => f.write_str(n),
            Token::A => f.write_str("'a'"),
            Token::Dot => f.write_str("'.'"),
            Token::Semicolon => f.write_str("';'"),
            Token::Comma => f.write_str("','"),
            Token::PrefixDirective => f.write_str("@prefix"),
            Token::SparqlPrefix => f.write_str("PREFIX"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

fn is_local_char(c: char) -> bool {
    is_name_char(c) || c == ':' || c == '%'
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            idx: 0,
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<(Token, Pos), ParseError> {
        self.skip_trivia();
        let start = self.pos();
        let Some(c) = self.peek() else {
            return Ok((Token::Eof, start));
        };
        let token = match c {
            '<' => self.iri_ref(start)?,
            '"' => self.string(start)?,
            '\'' => {
                return Err(start.error(
                    ParseErrorKind::Unsupported,
                    "unsupported construct: single-quoted string",
                ))
            }
            '[' | ']' => {
                return Err(start.error(
                    ParseErrorKind::Unsupported,
                    "unsupported construct: anonymous blank node property list '[ ]'",
                ))
            }
            '(' | ')' => {
                return Err(start.error(
                    ParseErrorKind::Unsupported,
                    "unsupported construct: collection '( )'",
                ))
            }
            '{' | '}' => {
                return Err(start.error(
                    ParseErrorKind::Unsupported,
                    "unsupported construct: named graph block",
                ))
            }
            '.' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => self.number(start)?,
            '.' => {
                self.bump();
                Token::Dot
            }
            ';' => {
                self.bump();
                Token::Semicolon
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            '^' => {
                self.bump();
                if self.peek() != Some('^') {
                    return Err(start.error(ParseErrorKind::Syntax, "expected '^^'"));
                }
                self.bump();
                Token::DoubleCaret
            }
            '@' => self.at_keyword(start)?,
            '_' if self.peek_at(1) == Some(':') => self.blank_label(start)?,
            '+' | '-' => self.number(start)?,
            c if c.is_ascii_digit() => self.number(start)?,
            ':' => {
                self.bump();
                let local = self.local_name(start)?;
                Token::PName {
                    prefix: String::new(),
                    local,
                }
            }
            c if c.is_alphabetic() => self.word(start)?,
            other => {
                return Err(start.error(
                    ParseErrorKind::Syntax,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        Ok((token, start))
    }

    fn hex_escape(&mut self, start: Pos, digits: usize) -> Result<char, ParseError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| start.error(ParseErrorKind::Syntax, "invalid unicode escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value)
            .ok_or_else(|| start.error(ParseErrorKind::Syntax, "invalid unicode escape"))
    }

    fn iri_ref(&mut self, start: Pos) -> Result<Token, ParseError> {
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(start.error(ParseErrorKind::Unterminated, "unterminated IRI"))
                }
                Some('>') => break,
                Some('\\') => {
                    let esc = self.pos();
                    match self.bump() {
                        Some('u') => value.push(self.hex_escape(esc, 4)?),
                        Some('U') => value.push(self.hex_escape(esc, 8)?),
                        _ => return Err(esc.error(ParseErrorKind::Syntax, "invalid escape in IRI")),
                    }
                }
                Some(c) => value.push(c),
            }
        }
        Ok(Token::IriRef(value))
    }

    fn string(&mut self, start: Pos) -> Result<Token, ParseError> {
        let long = self.peek_at(1) == Some('"') && self.peek_at(2) == Some('"');
        let quotes = if long { 3 } else { 1 };
        for _ in 0..quotes {
            self.bump();
        }
        let mut value = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(
                    start.error(ParseErrorKind::Unterminated, "unterminated string literal")
                );
            };
            match c {
                '"' if !long => break,
                '"' if self.peek() == Some('"') && self.peek_at(1) == Some('"') => {
                    self.bump();
                    self.bump();
                    // """a"""" ends with a quote inside the literal
                    while self.peek() == Some('"') {
                        value.push('"');
                        self.bump();
                    }
                    break;
                }
                '\n' | '\r' if !long => {
                    return Err(
                        start.error(ParseErrorKind::Unterminated, "unterminated string literal")
                    )
                }
                '\\' => {
                    let esc = self.pos();
                    let decoded = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(esc, 4)?,
                        Some('U') => self.hex_escape(esc, 8)?,
                        _ => {
                            return Err(esc
                                .error(ParseErrorKind::Syntax, "invalid escape in string literal"))
                        }
                    };
                    value.push(decoded);
                }
                c => value.push(c),
            }
        }
        Ok(Token::Str(value))
    }

    fn at_keyword(&mut self, start: Pos) -> Result<Token, ParseError> {
        self.bump();
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        match word.as_str() {
            "prefix" => Ok(Token::PrefixDirective),
            "base" => Err(start.error(ParseErrorKind::Unsupported, "unsupported construct: @base")),
            "" => Err(start.error(
                ParseErrorKind::Syntax,
                "expected keyword or language tag after '@'",
            )),
            tag => Ok(Token::LangTag(tag.to_string())),
        }
    }

    fn blank_label(&mut self, start: Pos) -> Result<Token, ParseError> {
        self.bump();
        self.bump();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        self.give_back_trailing_dots(&mut label);
        if label.is_empty() {
            return Err(start.error(ParseErrorKind::Syntax, "empty blank node label"));
        }
        Ok(Token::Blank(label))
    }

    /// A trailing '.' belongs to the statement, not to the name.
    fn give_back_trailing_dots(&mut self, name: &mut String) {
        while name.ends_with('.') {
            name.pop();
            self.idx -= 1;
            self.column -= 1;
        }
    }

    fn number(&mut self, start: Pos) -> Result<Token, ParseError> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        let mut decimal = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            decimal = true;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return Err(start.error(
                ParseErrorKind::Unsupported,
                "unsupported construct: double literal",
            ));
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(start.error(ParseErrorKind::Syntax, "malformed number"));
        }
        Ok(if decimal {
            Token::Decimal(text)
        } else {
            Token::Integer(text)
        })
    }

    fn local_name(&mut self, start: Pos) -> Result<String, ParseError> {
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => {
                        return Err(
                            start.error(ParseErrorKind::Syntax, "invalid escape in prefixed name")
                        )
                    }
                }
            } else if is_local_char(c) {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        self.give_back_trailing_dots(&mut local);
        Ok(local)
    }

    fn word(&mut self, start: Pos) -> Result<Token, ParseError> {
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|&c| is_name_char(c)) {
            word.push(c);
            self.bump();
        }
        self.give_back_trailing_dots(&mut word);
        if self.peek() == Some(':') {
            self.bump();
            let local = self.local_name(start)?;
            return Ok(Token::PName {
                prefix: word,
                local,
            });
        }
        match word.as_str() {
            "a" => Ok(Token::A),
            w if w.eq_ignore_ascii_case("prefix") => Ok(Token::SparqlPrefix),
            w if w.eq_ignore_ascii_case("base") => {
                Err(start.error(ParseErrorKind::Unsupported, "unsupported construct: BASE"))
            }
            "true" | "false" => Err(start.error(
                ParseErrorKind::Unsupported,
                "unsupported construct: boolean literal",
            )),
            w => Err(start.error(
                ParseErrorKind::Syntax,
                format!("unexpected bare word {w:?}"),
            )),
        }
    }
}

struct Parser {
    lexer: Lexer,
    lookahead: Option<(Token, Pos)>,
    prefixes: PrefixMap,
    graph: Graph,
}

impl Parser {
    fn peek(&mut self) -> Result<&(Token, Pos), ParseError> {
        if self.lookahead.is_none() {
            self.lookahead = Some(self.lexer.next_token()?);
        }
        Ok(self.lookahead.as_ref().expect("filled above"))
    }

    fn next(&mut self) -> Result<(Token, Pos), ParseError> {
        self.peek()?;
        Ok(self.lookahead.take().expect("filled above"))
    }

    fn document(mut self) -> Result<Graph, ParseError> {
        loop {
            let (token, _) = self.peek()?.clone();
            match token {
                Token::Eof => break,
                Token::PrefixDirective => {
                    self.next()?;
                    self.prefix_body()?;
                    self.expect_dot("'.' after @prefix directive")?;
                }
                Token::SparqlPrefix => {
                    self.next()?;
                    self.prefix_body()?;
                }
                _ => self.triples()?,
            }
        }
        for (p, ns) in self.prefixes {
            self.graph.set_prefix(p, ns);
        }
        Ok(self.graph)
    }

    fn prefix_body(&mut self) -> Result<(), ParseError> {
        let (token, pos) = self.next()?;
        let prefix = match token {
            Token::PName { prefix, local } if local.is_empty() => prefix,
            other => {
                return Err(pos.error(
                    ParseErrorKind::Syntax,
                    format!("expected prefix name, found {other}"),
                ))
            }
        };
        let (token, pos) = self.next()?;
        let Token::IriRef(value) = token else {
            return Err(pos.error(
                ParseErrorKind::Syntax,
                format!("expected namespace IRI, found {token}"),
            ));
        };
        let iri =
            Iri::new(value).map_err(|e| pos.error(ParseErrorKind::InvalidTerm, e.to_string()))?;
        self.prefixes.insert(prefix, iri);
        Ok(())
    }

    fn expect_dot(&mut self, what: &str) -> Result<(), ParseError> {
        let (token, pos) = self.next()?;
        match token {
            Token::Dot => Ok(()),
            Token::Eof => Err(pos.error(
                ParseErrorKind::MissingDot,
                format!("missing final '.': expected {what}"),
            )),
            other => Err(pos.error(
                ParseErrorKind::MissingDot,
                format!("expected {what}, found {other}"),
            )),
        }
    }

    fn iri(&self, token: Token, pos: Pos) -> Result<Option<Iri>, ParseError> {
        match token {
            Token::IriRef(value) => Iri::new(value).map(Some).map_err(|e| {
                pos.error(
                    ParseErrorKind::InvalidTerm,
                    format!("{e} (relative IRIs are not supported)"),
                )
            }),
            Token::PName { prefix, local } => {
                let Some(ns) = self.prefixes.get(&prefix) else {
                    return Err(pos.error(
                        ParseErrorKind::UndeclaredPrefix,
                        format!("undeclared prefix {prefix:?}"),
                    ));
                };
                Iri::new(format!("{}{local}", ns.as_str()))
                    .map(Some)
                    .map_err(|e| pos.error(ParseErrorKind::InvalidTerm, e.to_string()))
            }
            _ => Ok(None),
        }
    }

    fn blank(label: String, pos: Pos) -> Result<BlankNode, ParseError> {
        BlankNode::new(label).map_err(|e| pos.error(ParseErrorKind::InvalidTerm, e.to_string()))
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        let (token, pos) = self.next()?;
        let subject = match token {
            Token::Blank(label) => Subject::Blank(Self::blank(label, pos)?),
            token => match self.iri(token.clone(), pos)? {
                Some(iri) => Subject::Iri(iri),
                None => {
                    return Err(pos.error(
                        ParseErrorKind::Syntax,
                        format!("expected subject, found {token}"),
                    ))
                }
            },
        };
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.graph
                    .insert(Triple::new(subject.clone(), predicate.clone(), object));
                if self.peek()?.0 == Token::Comma {
                    self.next()?;
                } else {
                    break;
                }
            }
            if self.peek()?.0 != Token::Semicolon {
                break;
            }
            while self.peek()?.0 == Token::Semicolon {
                self.next()?;
            }
            if self.peek()?.0 == Token::Dot {
                break;
            }
        }
        self.expect_dot("'.', ';' or ','")
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        let (token, pos) = self.next()?;
        if token == Token::A {
            return Ok(ns::rdf("type"));
        }
        match self.iri(token.clone(), pos)? {
            Some(iri) => Ok(iri),
            None => Err(pos.error(
                ParseErrorKind::Syntax,
                format!("expected predicate, found {token}"),
            )),
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        let (token, pos) = self.next()?;
        match token {
            Token::Blank(label) => Ok(Term::Blank(Self::blank(label, pos)?)),
            Token::Integer(n) => Ok(Term::Literal(
                Literal::typed(n, ns::xsd("integer")).expect("xsd:integer"),
            )),
            Token::Decimal(n) => Ok(Term::Literal(
                Literal::typed(n, ns::xsd("decimal")).expect("xsd:decimal"),
            )),
            Token::Str(lexical) => self.literal_tail(lexical),
            token => match self.iri(token.clone(), pos)? {
                Some(iri) => Ok(Term::Iri(iri)),
                None => Err(pos.error(
                    ParseErrorKind::Syntax,
                    format!("expected object, found {token}"),
                )),
            },
        }
    }

    fn literal_tail(&mut self, lexical: String) -> Result<Term, ParseError> {
        let (token, pos) = self.peek()?.clone();
        match token {
            Token::LangTag(tag) => {
                self.next()?;
                Literal::lang(lexical, &tag)
                    .map(Term::Literal)
                    .map_err(|e| pos.error(ParseErrorKind::InvalidTerm, e.to_string()))
            }
            Token::DoubleCaret => {
                self.next()?;
                let (token, pos) = self.next()?;
                let Some(datatype) = self.iri(token.clone(), pos)? else {
                    return Err(pos.error(
                        ParseErrorKind::Syntax,
                        format!("expected datatype IRI, found {token}"),
                    ));
                };
                Literal::typed(lexical, datatype)
                    .map(Term::Literal)
                    .map_err(|e| pos.error(ParseErrorKind::InvalidTerm, e.to_string()))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }
}

pub fn parse_turtle(text: &str) -> Result<Graph, ParseError> {
    Parser {
        lexer: Lexer::new(text),
        lookahead: None,
        prefixes: BTreeMap::new(),
        graph: Graph::new(),
    }
    .document()
}

fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

struct Compactor<'a> {
    // longest namespace first, ties broken by prefix name
    entries: Vec<(&'a str, &'a str)>,
}

impl<'a> Compactor<'a> {
    fn new(prefixes: &'a PrefixMap) -> Self {
        let mut entries: Vec<(&str, &str)> = prefixes
            .iter()
            .map(|(p, ns)| (p.as_str(), ns.as_str()))
            .collect();
        entries.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
        Compactor { entries }
    }

    fn iri(&self, iri: &Iri) -> String {
        let value = iri.as_str();
        for (prefix, ns) in &self.entries {
            if let Some(local) = value.strip_prefix(ns) {
                if is_safe_local(local) {
                    return format!("{prefix}:{local}");
                }
            }
        }
        iri.to_string()
    }

    fn term(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.iri(iri),
            Term::Blank(b) => b.to_string(),
            Term::Literal(lit) => {
                let mut out = String::from("\"");
                escape_string(&mut out, lit.lexical());
                out.push('"');
                if let Some(lang) = lit.language() {
                    out.push('@');
                    out.push_str(lang);
                } else if lit.datatype() != &ns::xsd("string") {
                    out.push_str("^^");
                    out.push_str(&self.iri(lit.datatype()));
                }
                out
            }
        }
    }
}

type PredicateObjects = BTreeMap<(bool, String), (Iri, Vec<Term>)>;

/// Writes the graph as Turtle.
///
/// Output is a pure function of the triple set and prefix map: prefixes are
/// sorted by name, subjects by canonical form, `rdf:type` comes first and
/// the remaining predicates follow in canonical order.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in graph.prefixes() {
        let _ = writeln!(out, "@prefix {prefix}: {ns} .");
    }

    let rdf_type = ns::rdf("type");
    let mut by_subject: BTreeMap<String, (Subject, PredicateObjects)> = BTreeMap::new();
    for t in graph.iter() {
        let (_, predicates) = by_subject
            .entry(t.subject.to_string())
            .or_insert_with(|| (t.subject.clone(), BTreeMap::new()));
        let key = (t.predicate != rdf_type, t.predicate.to_string());
        predicates
            .entry(key)
            .or_insert_with(|| (t.predicate.clone(), Vec::new()))
            .1
            .push(t.object);
    }

    let compactor = Compactor::new(graph.prefixes());
    for (subject, predicates) in by_subject.into_values() {
        out.push('\n');
        out.push_str(&compactor.term(&Term::from(subject)));
        let count = predicates.len();
        for (i, (predicate, mut objects)) in predicates.into_values().enumerate() {
            objects.sort_by_cached_key(Term::canonical);
            let verb = if predicate == rdf_type {
                "a".to_string()
            } else {
                compactor.iri(&predicate)
            };
            let rendered: Vec<String> = objects.iter().map(|o| compactor.term(o)).collect();
            out.push_str(if i == 0 { " " } else { "    " });
            out.push_str(&verb);
            out.push(' ');
            out.push_str(&rendered.join(", "));
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("canonical N-Triples is undefined for graphs with blank nodes (found {0})")]
pub struct BlankNodeError(pub String);

/// One N-Triples line per triple, sorted bytewise.
pub fn canonical_ntriples(graph: &Graph) -> Result<String, BlankNodeError> {
    let mut lines = Vec::with_capacity(graph.len());
    for t in graph.iter() {
        if let Subject::Blank(b) = &t.subject {
            return Err(BlankNodeError(b.to_string()));
        }
        if let Term::Blank(b) = &t.object {
            return Err(BlankNodeError(b.to_string()));
        }
        lines.push(t.to_string());
    }
    lines.sort();
    let mut out = String::new();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
