//! In-memory triple set with SPO, POS and OSP indexes.

use std::collections::{BTreeMap, BTreeSet};

use super::term::{Iri, Subject, Term, Triple};
use crate::ns::PrefixMap;

type Index = BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>;

#[derive(Debug, Clone, Default)]
pub struct Graph {
    spo: Index,
    pos: Index,
    osp: Index,
    len: usize,
    prefixes: PrefixMap,
}

fn index_insert(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    index
        .entry(a.clone())
        .or_default()
        .entry(b.clone())
        .or_default()
        .insert(c.clone())
}

fn index_remove(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    let Some(level1) = index.get_mut(a) else {
        return false;
    };
    let Some(level2) = level1.get_mut(b) else {
        return false;
    };
    let removed = level2.remove(c);
    if level2.is_empty() {
        level1.remove(b);
    }
    if level1.is_empty() {
        index.remove(a);
    }
    removed
}

fn to_triple(s: &Term, p: &Term, o: &Term) -> Triple {
    Triple {
        subject: s.to_subject().expect("indexed subjects are never literals"),
        predicate: p.as_iri().expect("indexed predicates are IRIs").clone(),
        object: o.clone(),
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty graph carrying the default prefix map.
    pub fn with_default_prefixes() -> Self {
        Graph {
            prefixes: crate::ns::default_prefixes(),
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn set_prefix(&mut self, prefix: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(prefix.into(), namespace);
    }

    /// Inserts a triple, returning `true` iff it was not already present.
    pub fn insert(&mut self, t: Triple) -> bool {
        let s = Term::from(t.subject);
        let p = Term::Iri(t.predicate);
        let o = t.object;
        if !index_insert(&mut self.spo, &s, &p, &o) {
            return false;
        }
        index_insert(&mut self.pos, &p, &o, &s);
        index_insert(&mut self.osp, &o, &s, &p);
        self.len += 1;
        true
    }

    pub fn remove(&mut self, t: &Triple) -> bool {
        let s = Term::from(t.subject.clone());
        let p = Term::Iri(t.predicate.clone());
        let o = &t.object;
        if !index_remove(&mut self.spo, &s, &p, o) {
            return false;
        }
        index_remove(&mut self.pos, &p, o, &s);
        index_remove(&mut self.osp, o, &s, &p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, t: &Triple) -> bool {
        let s = Term::from(t.subject.clone());
        self.spo
            .get(&s)
            .and_then(|m| m.get(&Term::Iri(t.predicate.clone())))
            .is_some_and(|objs| objs.contains(&t.object))
    }

    /// Adds every triple of `other`; prefixes of `other` fill gaps only.
    pub fn extend_from(&mut self, other: &Graph) {
        for t in other.iter() {
            self.insert(t);
        }
        for (p, ns) in &other.prefixes {
            self.prefixes.entry(p.clone()).or_insert_with(|| ns.clone());
        }
    }

    /// All triples, in index order (not canonical order).
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, pm)| {
            pm.iter()
                .flat_map(move |(p, os)| os.iter().map(move |o| to_triple(s, p, o)))
        })
    }

    /// Returns the triples matching every bound position, sorted by the
    /// canonical (N-Triples) form of subject, predicate and object.
    pub fn match_pattern(
        &self,
        s: Option<&Term>,
        p: Option<&Iri>,
        o: Option<&Term>,
    ) -> Vec<Triple> {
        let p = p.map(|iri| Term::Iri(iri.clone()));
        let mut out = self.collect_unsorted(s, p.as_ref(), o);
        sort_canonical(&mut out);
        out
    }

    fn collect_unsorted(
        &self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Vec<Triple> {
        let mut out = Vec::new();
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self
                    .spo
                    .get(s)
                    .and_then(|m| m.get(p))
                    .is_some_and(|os| os.contains(o))
                {
                    out.push(to_triple(s, p, o));
                }
            }
            (Some(s), Some(p), None) => {
                if let Some(os) = self.spo.get(s).and_then(|m| m.get(p)) {
                    out.extend(os.iter().map(|o| to_triple(s, p, o)));
                }
            }
            (Some(s), None, None) => {
                if let Some(pm) = self.spo.get(s) {
                    for (p, os) in pm {
                        out.extend(os.iter().map(|o| to_triple(s, p, o)));
                    }
                }
            }
            (None, Some(p), Some(o)) => {
                if let Some(ss) = self.pos.get(p).and_then(|m| m.get(o)) {
                    out.extend(ss.iter().map(|s| to_triple(s, p, o)));
                }
            }
            (None, Some(p), None) => {
                if let Some(om) = self.pos.get(p) {
                    for (o, ss) in om {
                        out.extend(ss.iter().map(|s| to_triple(s, p, o)));
                    }
                }
            }
            (Some(s), None, Some(o)) => {
                if let Some(ps) = self.osp.get(o).and_then(|m| m.get(s)) {
                    out.extend(ps.iter().map(|p| to_triple(s, p, o)));
                }
            }
            (None, None, Some(o)) => {
                if let Some(sm) = self.osp.get(o) {
                    for (s, ps) in sm {
                        out.extend(ps.iter().map(|p| to_triple(s, p, o)));
                    }
                }
            }
            (None, None, None) => out.extend(self.iter()),
        }
        out
    }

    /// Objects of `⟨s, p, ?⟩`, in index order.
    pub fn objects<'a>(&'a self, s: &Subject, p: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        let s = Term::from(s.clone());
        let p = Term::Iri(p.clone());
        self.spo
            .get(&s)
            .and_then(|m| m.get(&p))
            .into_iter()
            .flat_map(|os| os.iter())
    }

    /// Subjects of `⟨?, p, o⟩`, in index order.
    pub fn subjects<'a>(&'a self, p: &Iri, o: &Term) -> impl Iterator<Item = Subject> + 'a {
        let p = Term::Iri(p.clone());
        self.pos
            .get(&p)
            .and_then(|m| m.get(o))
            .into_iter()
            .flat_map(|ss| ss.iter().filter_map(Term::to_subject))
    }

    /// Distinct subjects that have at least one `p` edge.
    pub fn subjects_with(&self, p: &Iri) -> BTreeSet<Subject> {
        let p = Term::Iri(p.clone());
        self.pos
            .get(&p)
            .into_iter()
            .flat_map(|m| m.values())
            .flat_map(|ss| ss.iter().filter_map(Term::to_subject))
            .collect()
    }

    pub fn has_property(&self, s: &Subject, p: &Iri) -> bool {
        self.objects(s, p).next().is_some()
    }

    /// Distinct predicates used in the graph.
    pub fn predicates(&self) -> impl Iterator<Item = &Iri> + '_ {
        self.pos.keys().filter_map(Term::as_iri)
    }

    /// Compares triple sets, ignoring prefixes.
    pub fn same_triples(&self, other: &Graph) -> bool {
        self.spo == other.spo
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.spo == other.spo && self.prefixes == other.prefixes
    }
}

impl Eq for Graph {}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

pub(crate) fn sort_canonical(triples: &mut [Triple]) {
    triples.sort_by_cached_key(Triple::canonical_key);
}
