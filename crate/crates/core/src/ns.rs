//! Namespace constants and the default prefix map.

use std::collections::BTreeMap;

use crate::rdf::Iri;

pub const TRO: &str = "http://ehu.eus/tro#";
pub const EPO: &str = "http://data.europa.eu/a4g/ontology#";
pub const GIST: &str = "https://ontologies.semanticarts.com/gist/";
pub const SCHEMA: &str = "http://schema.org/";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const DC: &str = "http://purl.org/dc/elements/1.1/";
pub const VANN: &str = "http://purl.org/vocab/vann/";
pub const TIME: &str = "http://www.w3.org/2006/time#";
pub const DBO: &str = "http://dbpedia.org/ontology/";
pub const GR: &str = "http://purl.org/goodrelations/v1#";

/// IRI of the ontology document itself.
pub const ONTOLOGY: &str = "http://ehu.eus/tro";

/// Default namespace for minted data IRIs.
pub const DATA_BASE: &str = "http://ehu.eus/tro/data/";

pub type PrefixMap = BTreeMap<String, Iri>;

pub fn default_prefixes() -> PrefixMap {
    [
        ("tro", TRO),
        ("epo", EPO),
        ("gist", GIST),
        ("schema", SCHEMA),
        ("rdf", RDF),
        ("rdfs", RDFS),
        ("owl", OWL),
        ("xsd", XSD),
        ("dcterms", DCTERMS),
        ("dc", DC),
        ("vann", VANN),
        ("time", TIME),
        ("dbo", DBO),
        ("gr", GR),
    ]
    .into_iter()
    .map(|(p, ns)| (p.to_string(), iri(ns, "")))
    .collect()
}

fn iri(namespace: &str, local: &str) -> Iri {
    Iri::new(format!("{namespace}{local}")).expect("namespace constants are valid IRIs")
}

pub fn tro(local: &str) -> Iri {
    iri(TRO, local)
}

pub fn epo(local: &str) -> Iri {
    iri(EPO, local)
}

pub fn gist(local: &str) -> Iri {
    iri(GIST, local)
}

pub fn schema(local: &str) -> Iri {
    iri(SCHEMA, local)
}

pub fn rdf(local: &str) -> Iri {
    iri(RDF, local)
}

pub fn rdfs(local: &str) -> Iri {
    iri(RDFS, local)
}

pub fn owl(local: &str) -> Iri {
    iri(OWL, local)
}

pub fn xsd(local: &str) -> Iri {
    iri(XSD, local)
}

pub fn dcterms(local: &str) -> Iri {
    iri(DCTERMS, local)
}

pub fn dc(local: &str) -> Iri {
    iri(DC, local)
}

pub fn vann(local: &str) -> Iri {
    iri(VANN, local)
}

pub fn gr(local: &str) -> Iri {
    iri(GR, local)
}

pub fn ontology() -> Iri {
    iri(ONTOLOGY, "")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_map_carries_ontology_prefixes() {
        let map = default_prefixes();
        assert_eq!(map["tro"].as_str(), "http://ehu.eus/tro#");
        assert_eq!(map["epo"].as_str(), "http://data.europa.eu/a4g/ontology#");
        assert_eq!(
            map["gist"].as_str(),
            "https://ontologies.semanticarts.com/gist/"
        );
        assert_eq!(map["schema"].as_str(), "http://schema.org/");
        for p in [
            "rdf", "rdfs", "owl", "xsd", "dcterms", "dc", "vann", "time", "dbo",
        ] {
            assert!(map.contains_key(p), "missing {p}");
        }
    }
}
