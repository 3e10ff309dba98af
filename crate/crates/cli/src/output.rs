use std::collections::BTreeMap;
use std::fmt::Write;

use cyclofactor_core::{Factorization, FactorCount, LabeledFactor, Nat, VerificationReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub degree: Nat,
    pub multiplicity: Nat,
    pub source: String,
    pub poly: String,
}

impl From<&LabeledFactor> for FactorEntry {
    fn from(f: &LabeledFactor) -> Self {
        FactorEntry {
            degree: f.degree,
            multiplicity: f.multiplicity,
            source: f.source.name().to_string(),
            poly: f.poly.render(),
        }
    }
}

/// Machine-readable factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub p: u64,
    pub s: u32,
    pub q: Nat,
    pub n: Nat,
    pub case: String,
    pub w: Nat,
    pub total: Nat,
    pub factors: Vec<FactorEntry>,
    pub verified: bool,
    pub notes: Vec<String>,
}

impl FactorDoc {
    pub fn new(p: u64, s: u32, fz: &Factorization, report: &VerificationReport) -> Self {
        let mut notes = fz.notes.clone();
        notes.extend(report.notes.iter().cloned());
        FactorDoc {
            p,
            s,
            q: fz.q,
            n: fz.n,
            case: fz.case.tag.name().to_string(),
            w: fz.case.w,
            total: fz.total,
            factors: fz.factors.iter().map(FactorEntry::from).collect(),
            verified: report.accepted(),
            notes,
        }
    }

    fn by_degree(&self) -> BTreeMap<Nat, Nat> {
        let mut out = BTreeMap::new();
        for f in &self.factors {
            *out.entry(f.degree).or_insert(0) += 1;
        }
        out
    }
}

/// Closed-form counts for `x^n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountDoc {
    pub p: u64,
    pub s: u32,
    pub q: Nat,
    pub n: Nat,
    pub case: String,
    pub w: Nat,
    pub total: Nat,
    pub multiplicity: Nat,
    pub by_degree: BTreeMap<Nat, Nat>,
    pub notes: Vec<String>,
}

impl CountDoc {
    pub fn new(p: u64, s: u32, q: Nat, n: Nat, count: &FactorCount, multiplicity: Nat) -> Self {
        let mut notes = Vec::new();
        if multiplicity > 1 {
            notes.push(format!(
                "x^{n} - 1 = (x^{} - 1)^{multiplicity}; counts are of distinct factors",
                n / multiplicity
            ));
        }
        CountDoc {
            p,
            s,
            q,
            n,
            case: count.case.tag.name().to_string(),
            w: count.case.w,
            total: count.total,
            multiplicity,
            by_degree: count.by_degree.clone(),
            notes,
        }
    }
}

/// Factors present in only one of two factorizations.
#[derive(Debug, Clone, Default)]
pub struct Diff {
    pub only_explicit: Vec<FactorEntry>,
    pub only_oracle: Vec<FactorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffDoc {
    pub p: u64,
    pub s: u32,
    pub q: Nat,
    pub n: Nat,
    pub case: String,
    pub w: Nat,
    pub only_explicit: Vec<FactorEntry>,
    pub only_oracle: Vec<FactorEntry>,
}

impl Diff {
    pub fn between(explicit: &Factorization, oracle: &Factorization) -> Self {
        let (a, b) = explicit.diff(oracle);
        Diff {
            only_explicit: a.iter().map(FactorEntry::from).collect(),
            only_oracle: b.iter().map(FactorEntry::from).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.only_explicit.is_empty() && self.only_oracle.is_empty()
    }

    pub fn doc(&self, p: u64, s: u32, fz: &Factorization) -> DiffDoc {
        DiffDoc {
            p,
            s,
            q: fz.q,
            n: fz.n,
            case: fz.case.tag.name().to_string(),
            w: fz.case.w,
            only_explicit: self.only_explicit.clone(),
            only_oracle: self.only_oracle.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}

fn header(out: &mut String, n: Nat, q: Nat, p: u64, s: u32, case: &str, w: Nat) {
    let _ = writeln!(out, "x^{n} - 1 over F_{q} (p = {p}, s = {s})");
    let _ = writeln!(out, "case: {case} (w = {w})");
}

fn degree_table(out: &mut String, by_degree: &BTreeMap<Nat, Nat>) {
    let _ = writeln!(out, "degree: count");
    for (d, c) in by_degree {
        let _ = writeln!(out, "{d}: {c}");
    }
}

pub fn factor_text(doc: &FactorDoc, engine: &str, agreement: Option<&Diff>) -> String {
    let mut out = String::new();
    header(&mut out, doc.n, doc.q, doc.p, doc.s, &doc.case, doc.w);
    let _ = writeln!(out, "engine: {engine}");
    let _ = writeln!(out, "factors:");
    for f in &doc.factors {
        let power = if f.multiplicity > 1 {
            format!("^{}", f.multiplicity)
        } else {
            String::new()
        };
        let _ = writeln!(out, "  ({}){power}  [degree {}, {}]", f.poly, f.degree, f.source);
    }
    degree_table(&mut out, &doc.by_degree());
    let _ = writeln!(out, "total: {}", doc.total);
    for note in &doc.notes {
        let _ = writeln!(out, "note: {note}");
    }
    if let Some(d) = agreement {
        if d.is_empty() {
            let _ = writeln!(out, "oracle: agrees");
        } else {
            diff_lines(&mut out, d);
        }
    }
    let _ = writeln!(out, "{}", if doc.verified { "VERIFIED" } else { "NOT VERIFIED" });
    out
}

pub fn count_text(doc: &CountDoc) -> String {
    let mut out = String::new();
    header(&mut out, doc.n, doc.q, doc.p, doc.s, &doc.case, doc.w);
    degree_table(&mut out, &doc.by_degree);
    for note in &doc.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out, "total: {}", doc.total);
    out
}

fn diff_lines(out: &mut String, d: &Diff) {
    for f in &d.only_explicit {
        let _ = writeln!(out, "- explicit only: {} (multiplicity {})", f.poly, f.multiplicity);
    }
    for f in &d.only_oracle {
        let _ = writeln!(out, "+ oracle only: {} (multiplicity {})", f.poly, f.multiplicity);
    }
}

pub fn diff_text(d: &Diff, fz: &Factorization, p: u64, s: u32) -> String {
    let mut out = String::new();
    header(&mut out, fz.n, fz.q, p, s, fz.case.tag.name(), fz.case.w);
    if d.is_empty() {
        let _ = writeln!(out, "no differences ({} factors)", fz.factors.len());
    } else {
        diff_lines(&mut out, d);
    }
    out
}
