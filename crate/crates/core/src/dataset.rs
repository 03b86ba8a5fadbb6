//! Classification of logical rules from published gene-regulation models.
//!
//! Six models ship as fixtures. Each multivalued gene is compiled, checked
//! for NC, SNC and WNC, Booleanized, and placed in one of four situations:
//!
//! | situation | flags                      |
//! |-----------|----------------------------|
//! | a         | NC                         |
//! | b         | SNC, not NC                |
//! | c         | not WNC, Booleanization NC |
//! | d         | not WNC, Booleanization not NC |
//!
//! A gene that is WNC but not SNC fits none of them and is reported as an
//! anomaly.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;

use crate::booleanize::{booleanize_function, is_nc_partial};
use crate::canalization::{is_nc_with, is_snc, is_wnc_with, SearchLimits};
use crate::domain::{MultivaluedFunction, TruthTable};
use crate::error::{Error, Result};
use crate::ruledsl::{self, compile, OverlapPolicy, RuleModel};

/// Bundled model files as `(name, text)`.
pub const FIXTURES: &[(&str, &str)] = &[
    ("Nal10", include_str!("../fixtures/Nal10.mvr")),
    ("San19", include_str!("../fixtures/San19.mvr")),
    ("Rem15", include_str!("../fixtures/Rem15.mvr")),
    ("Mbo13", include_str!("../fixtures/Mbo13.mvr")),
    ("Sil20", include_str!("../fixtures/Sil20.mvr")),
    ("Col17", include_str!("../fixtures/Col17.mvr")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Situation {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Situation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Situation::A => "a",
            Situation::B => "b",
            Situation::C => "c",
            Situation::D => "d",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub nc: bool,
    pub snc: bool,
    pub wnc: bool,
    pub bool_nc: bool,
}

impl Flags {
    /// `None` for the WNC-but-not-SNC case.
    pub fn situation(&self) -> Option<Situation> {
        match *self {
            Flags { nc: true, .. } => Some(Situation::A),
            Flags { snc: true, .. } => Some(Situation::B),
            Flags { wnc: true, .. } => None,
            Flags { bool_nc: true, .. } => Some(Situation::C),
            _ => Some(Situation::D),
        }
    }
}

/// Runs every checker on `f`. `bool_nc` holds when every Booleanized
/// component is nested canalizing.
pub fn classify(f: &MultivaluedFunction, limits: &SearchLimits) -> Result<Flags> {
    let nc = is_nc_with(f, limits)?.is_some();
    let snc = is_snc(f).is_some();
    let wnc = is_wnc_with(f, limits)?.is_some();
    let mut bool_nc = true;
    for g in booleanize_function(f)? {
        if is_nc_partial(&g)?.is_none() {
            bool_nc = false;
            break;
        }
    }
    Ok(Flags { nc, snc, wnc, bool_nc })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneRecord {
    pub gene: String,
    pub model: String,
    /// Arity used for the census: the declared in-degree if present, else
    /// the number of regulators in the rule.
    pub n: usize,
    pub regulators: Vec<String>,
    #[serde(flatten)]
    pub flags: Flags,
    pub situation: Option<Situation>,
    pub structure_s: bool,
    #[serde(skip)]
    pub table: TruthTable,
}

/// Expected outcome for one fixture gene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub gene: &'static str,
    pub model: &'static str,
    pub situation: Situation,
    pub structure_s: bool,
}

const fn row(gene: &'static str, model: &'static str, situation: Situation, structure_s: bool) -> Expected {
    Expected {
        gene,
        model,
        situation,
        structure_s,
    }
}

use Situation::{A, B, C, D};

/// Reference classification of the 48 fixture genes, in report order.
pub const EXPECTED: &[Expected] = &[
    row("E_Spl", "Mbo13", A, false),
    row("mQH2_Q", "San19", A, true),
    row("mdH", "San19", A, true),
    row("mGR", "San19", A, false),
    row("mGSH_GSSG", "San19", A, true),
    row("mTRX", "San19", A, true),
    row("cGSH_GSSG", "San19", A, true),
    row("cGR", "San19", A, false),
    row("E2F3", "Rem15", A, true),
    row("IL12RB1", "Nal10", A, true),
    row("IL4RA", "Nal10", A, true),
    row("ATM", "Rem15", A, true),
    row("CHEK", "Rem15", A, true),
    row("Drk", "Mbo13", B, true),
    row("Dsor1", "Mbo13", B, true),
    row("Pnt", "Mbo13", B, true),
    row("Stat92E", "Mbo13", B, true),
    row("Raf", "Mbo13", B, true),
    row("RI", "Mbo13", B, true),
    row("Sos", "Mbo13", B, true),
    row("Tkv", "Mbo13", B, false),
    row("mNNT", "San19", B, false),
    row("mCa", "San19", B, true),
    row("mGPX", "San19", B, true),
    row("mTR", "San19", B, false),
    row("cGPX", "San19", B, true),
    row("cTR", "San19", B, false),
    row("cTRX", "San19", B, true),
    row("STAT5", "Nal10", B, false),
    row("Twi", "Mbo13", B, true),
    row("Ras", "Mbo13", C, false),
    row("MadMed", "Mbo13", C, false),
    row("Hop", "Mbo13", C, false),
    row("mNADPH_NADP", "San19", C, false),
    row("mNADH_NAD", "San19", C, true),
    row("cCa", "San19", C, false),
    row("KrebsCycle", "San19", C, true),
    row("VIM", "Sil20", C, false),
    row("CDH1", "Sil20", C, false),
    row("EMT", "Sil20", C, false),
    row("IL2R", "Nal10", C, true),
    row("IL4R", "Nal10", C, true),
    row("mROS", "San19", D, false),
    row("Der", "Mbo13", D, false),
    row("cROS", "San19", D, false),
    row("cNADPH_NADP", "San19", D, false),
    row("E2F1", "Rem15", D, false),
    row("Spi1", "Col17", D, false),
];

/// Reference SNC counts per census arity: `(n, snc, total)`.
pub const EXPECTED_SNC_BY_ARITY: &[(usize, usize, usize)] = &[
    (1, 7, 7),
    (2, 16, 20),
    (3, 3, 6),
    (4, 1, 5),
    (5, 0, 2),
    (6, 2, 5),
    (7, 0, 1),
    (8, 1, 1),
    (9, 0, 1),
];

pub fn expected(gene: &str) -> Option<&'static Expected> {
    EXPECTED.iter().find(|e| e.gene == gene)
}

/// The ternary function on (3,3) that is WNC but not SNC: its only
/// canalizing start is the middle value `x = 1`.
pub fn counterexample() -> MultivaluedFunction {
    let domain = crate::domain::MixedRadixDomain::new(vec![3, 3]).expect("small domain");
    MultivaluedFunction::new(domain, 3, vec![2, 0, 0, 1, 1, 1, 2, 0, 2]).expect("valid table")
}

/// Parses the bundled fixtures.
pub fn fixture_models() -> Result<Vec<RuleModel>> {
    FIXTURES
        .iter()
        .map(|(name, text)| ruledsl::parse(text).map_err(|e| Error::validation(format!("fixture {name}: {e}"))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusOptions {
    pub limits: SearchLimits,
    pub policy: OverlapPolicy,
}

/// Classifies every ruled gene with a multivalued output.
pub fn run_census(models: &[RuleModel], options: &CensusOptions) -> Result<Census> {
    let jobs: Vec<(&RuleModel, &ruledsl::Gene)> = models
        .iter()
        .flat_map(|m| m.ruled_genes().filter(|g| g.arity > 2).map(move |g| (m, g)))
        .collect();
    let mut records = jobs
        .par_iter()
        .map(|(model, gene)| {
            let compiled = compile(model, &gene.name, options.policy)
                .map_err(|e| Error::validation(format!("{} in {}: {e}", gene.name, model.name)))?;
            let f = &compiled.function;
            let flags = classify(f, &options.limits)
                .map_err(|e| Error::validation(format!("{} in {}: {e}", gene.name, model.name)))?;
            Ok(GeneRecord {
                gene: compiled.name.clone(),
                model: model.name.clone(),
                n: gene.indegree.unwrap_or(compiled.regulators.len()),
                regulators: compiled.regulators.clone(),
                flags,
                situation: flags.situation(),
                structure_s: ruledsl::detect_structure_s(f).is_some(),
                table: TruthTable::from(f),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| {
        let rank = EXPECTED.iter().position(|e| e.gene == r.gene && e.model == r.model);
        (rank.unwrap_or(usize::MAX), r.gene.clone(), r.model.clone())
    });
    Ok(Census { records })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub records: Vec<GeneRecord>,
}

/// A disagreement between a record and the reference classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub gene: String,
    pub model: String,
    pub expected: Option<Situation>,
    pub found: Option<Situation>,
}

impl Census {
    /// `n → (snc, total)`.
    pub fn snc_by_arity(&self) -> BTreeMap<usize, (usize, usize)> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            let e = out.entry(r.n).or_insert((0, 0));
            e.0 += r.flags.snc as usize;
            e.1 += 1;
        }
        out
    }

    pub fn situation_totals(&self) -> BTreeMap<Situation, usize> {
        let mut out = BTreeMap::new();
        for s in self.records.iter().filter_map(|r| r.situation) {
            *out.entry(s).or_insert(0) += 1;
        }
        out
    }

    /// Records that are WNC but not SNC.
    pub fn anomalies(&self) -> Vec<&GeneRecord> {
        self.records.iter().filter(|r| r.situation.is_none()).collect()
    }

    /// Situation disagreements with [`EXPECTED`], restricted to the models
    /// present in the census. Reference genes missing from those models are
    /// reported with `found = None`.
    pub fn mismatches(&self) -> Vec<Mismatch> {
        let mut out = Vec::new();
        for r in &self.records {
            if let Some(e) = EXPECTED.iter().find(|e| e.gene == r.gene && e.model == r.model) {
                if Some(e.situation) != r.situation {
                    out.push(Mismatch {
                        gene: r.gene.clone(),
                        model: r.model.clone(),
                        expected: Some(e.situation),
                        found: r.situation,
                    });
                }
            }
        }
        for e in EXPECTED {
            let model_present = self.records.iter().any(|r| r.model == e.model);
            let gene_present = self.records.iter().any(|r| r.gene == e.gene && r.model == e.model);
            if model_present && !gene_present {
                out.push(Mismatch {
                    gene: e.gene.to_string(),
                    model: e.model.to_string(),
                    expected: Some(e.situation),
                    found: None,
                });
            }
        }
        out
    }

    /// Genes whose single-switch verdict differs from the reference.
    pub fn structure_notes(&self) -> Vec<(&GeneRecord, bool)> {
        self.records
            .iter()
            .filter_map(|r| {
                let e = EXPECTED.iter().find(|e| e.gene == r.gene && e.model == r.model)?;
                (e.structure_s != r.structure_s).then_some((r, e.structure_s))
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut out = String::from("gene,model,n,nc,snc,wnc,bool_nc,situation,structure_s\n");
        for r in &self.records {
            let situation = r.situation.map_or("anomaly".to_string(), |s| s.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.gene,
                r.model,
                r.n,
                yn(r.flags.nc),
                yn(r.flags.snc),
                yn(r.flags.wnc),
                yn(r.flags.bool_nc),
                situation,
                yn(r.structure_s)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("records serialize")
    }

    pub fn to_markdown(&self) -> String {
        let yn = |b: bool| if b { "Yes" } else { "No" };
        let mut out = String::new();
        for s in [Situation::A, Situation::B, Situation::C, Situation::D] {
            let rows: Vec<&GeneRecord> = self.records.iter().filter(|r| r.situation == Some(s)).collect();
            if rows.is_empty() {
                continue;
            }
            let _ = writeln!(out, "### Situation ({s})\n");
            out.push_str("| Gene | Model | n | NC | SNC | WNC | Bool. NC | Struct. |\n");
            out.push_str("|---|---|---|---|---|---|---|---|\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} | {} |",
                    r.gene,
                    r.model,
                    r.n,
                    yn(r.flags.nc),
                    yn(r.flags.snc),
                    yn(r.flags.wnc),
                    yn(r.flags.bool_nc),
                    if r.structure_s { "(S)" } else { "" }
                );
            }
            out.push('\n');
        }
        let anomalies = self.anomalies();
        if !anomalies.is_empty() {
            out.push_str("### WNC but not SNC\n\n");
            for r in anomalies {
                let _ = writeln!(out, "- {} ({})", r.gene, r.model);
            }
            out.push('\n');
        }
        out.push_str("### SNC by arity\n\n| n | SNC |\n|---|---|\n");
        for (n, (snc, total)) in self.snc_by_arity() {
            let _ = writeln!(out, "| {n} | {snc}/{total} |");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn situation_rules() {
        let f = |nc, snc, wnc, bool_nc| Flags { nc, snc, wnc, bool_nc }.situation();
        assert_eq!(f(true, true, true, true), Some(A));
        assert_eq!(f(false, true, true, true), Some(B));
        assert_eq!(f(false, false, false, true), Some(C));
        assert_eq!(f(false, false, false, false), Some(D));
        assert_eq!(f(false, false, true, true), None);
    }

    #[test]
    fn reference_table_shape() {
        assert_eq!(EXPECTED.len(), 48);
        let count = |s| EXPECTED.iter().filter(|e| e.situation == s).count();
        assert_eq!([count(A), count(B), count(C), count(D)], [13, 17, 12, 6]);
        let total: usize = EXPECTED_SNC_BY_ARITY.iter().map(|r| r.2).sum();
        assert_eq!(total, 48);
    }

    #[test]
    fn fixtures_parse_and_cover_the_reference() {
        let models = fixture_models().unwrap();
        for e in EXPECTED {
            let m = models.iter().find(|m| m.name == e.model).unwrap();
            assert!(m.gene(e.gene).and_then(|g| g.clauses.as_ref()).is_some(), "{}", e.gene);
        }
        let ruled: usize = models.iter().map(|m| m.ruled_genes().count()).sum();
        assert_eq!(ruled, 48);
    }

    #[test]
    fn single_gene_census() {
        let m = ruledsl::parse("model M gene Der arity 3 input gene Drk arity 3 { 1 <- Der:1 2 <- Der:2 }").unwrap();
        let c = run_census(&[m], &CensusOptions::default()).unwrap();
        assert_eq!(c.records.len(), 1);
        let r = &c.records[0];
        assert_eq!((r.n, r.situation, r.structure_s), (1, Some(B), true));
        assert_eq!(c.snc_by_arity()[&1], (1, 1));
        assert!(c.mismatches().is_empty());
        assert!(c.to_csv().ends_with("Drk,M,1,no,yes,yes,yes,b,yes\n"));
    }

    #[test]
    fn counterexample_flags() {
        let flags = classify(&counterexample(), &SearchLimits::default()).unwrap();
        assert_eq!(
            (flags.nc, flags.snc, flags.wnc, flags.bool_nc),
            (false, false, true, false)
        );
        assert_eq!(flags.situation(), None);
    }

    #[test]
    fn empty_census() {
        let c = run_census(&[], &CensusOptions::default()).unwrap();
        assert!(c.records.is_empty());
        assert_eq!(c.to_csv().lines().count(), 1);
    }
}
