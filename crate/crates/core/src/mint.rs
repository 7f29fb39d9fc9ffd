//! Deterministic slugs and IRIs for data nodes.
//!
//! Role IRIs are `base/role/<person>_<role-type>_<start>_<end|ongoing>_<org>`.
//! Slugs only contain `[a-z0-9-]`, so `_` always separates components.

use std::fmt;

use chrono::NaiveDate;
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::date::format_date;
use crate::ns;
use crate::rdf::{Iri, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MintError {
    #[error("{0:?} normalizes to an empty slug")]
    EmptySlug(String),
    #[error("role ends ({end}) before it starts ({start})")]
    InvalidInterval { start: NaiveDate, end: NaiveDate },
    #[error("mint base must end with '/': {0}")]
    BadBase(String),
    #[error(transparent)]
    Iri(#[from] TermError),
}

/// A normalized name: `[a-z0-9]+(-[a-z0-9]+)*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slug(String);

impl Slug {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Slug {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Compatibility-decomposes, lowercases, strips combining marks and
/// collapses every run of other characters into a single hyphen.
///
/// Only ASCII letters and digits survive; letters without an ASCII
/// decomposition (`ø`, `ß`) act as separators.
pub fn normalize_name(raw: &str) -> Result<Slug, MintError> {
    let mut slug = String::with_capacity(raw.len());
    let mut pending_hyphen = false;
    for c in raw
        .nfkd()
        .flat_map(char::to_lowercase)
        .filter(|c| !is_combining_mark(*c))
    {
        if c.is_ascii_lowercase() || c.is_ascii_digit() {
            if pending_hyphen && !slug.is_empty() {
                slug.push('-');
            }
            pending_hyphen = false;
            slug.push(c);
        } else {
            pending_hyphen = true;
        }
    }
    if slug.is_empty() {
        return Err(MintError::EmptySlug(raw.to_string()));
    }
    Ok(Slug(slug))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MintConfig {
    base: Iri,
}

impl MintConfig {
    pub fn new(base: Iri) -> Result<Self, MintError> {
        if !base.as_str().ends_with('/') {
            return Err(MintError::BadBase(base.into_string()));
        }
        Ok(MintConfig { base })
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    fn iri(&self, path: &str) -> Result<Iri, MintError> {
        Ok(Iri::new(format!("{}{path}", self.base.as_str()))?)
    }
}

impl Default for MintConfig {
    fn default() -> Self {
        MintConfig {
            base: Iri::new(ns::DATA_BASE).expect("valid base"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Person,
    Org,
    Contract,
    Evidence,
}

impl EntityKind {
    pub fn path_segment(self) -> &'static str {
        match self {
            EntityKind::Person => "person",
            EntityKind::Org => "org",
            EntityKind::Contract => "contract",
            EntityKind::Evidence => "evidence",
        }
    }
}

// unreserved characters stay, everything else is percent-encoded
const KEY_ENCODE: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

pub fn mint_entity_iri(cfg: &MintConfig, kind: EntityKind, key: &str) -> Result<Iri, MintError> {
    let local = match kind {
        EntityKind::Contract => {
            if key.is_empty() {
                return Err(MintError::EmptySlug(key.to_string()));
            }
            utf8_percent_encode(key, KEY_ENCODE).to_string()
        }
        _ => normalize_name(key)?.0,
    };
    cfg.iri(&format!("{}/{local}", kind.path_segment()))
}

pub fn mint_role_iri(
    cfg: &MintConfig,
    person: &str,
    role_type: &str,
    start: NaiveDate,
    end: Option<NaiveDate>,
    org: &str,
) -> Result<Iri, MintError> {
    if let Some(end) = end {
        if end < start {
            return Err(MintError::InvalidInterval { start, end });
        }
    }
    let end = end.map_or_else(|| "ongoing".to_string(), format_date);
    cfg.iri(&format!(
        "role/{}_{}_{}_{}_{}",
        normalize_name(person)?,
        normalize_name(role_type)?,
        format_date(start),
        end,
        normalize_name(org)?
    ))
}
