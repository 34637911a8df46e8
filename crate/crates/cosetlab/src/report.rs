//! Analysis pipeline and report emission.
//!
//! One [`AnalysisRow`] summarizes one group of subgroup classes with
//! identical analysis at a given index (the row multiplicity counts the
//! classes merged into it, like the `(x k)` markers in the tables). Rows
//! carry both stabilizer conventions for the second axiom; the rule
//! verdict is evaluated under the configured active convention.
//!
//! JSON output is byte-deterministic: fixed field order, rows sorted by
//! (index, class ordinal), and every float printed with 17 significant
//! digits.

use crate::geometry::{
    build_geometry, contextual_lines, contextual_triangles, recognize, IncidenceGeometry,
    StabilizerConvention,
};
use crate::low_index::{low_index_subgroups_with, SearchLimits, SubgroupRecord};
use crate::mic::{mic_scan, MicReport, ScanBudget};
use crate::permgroup::{axiom_i, covering_type, structure_describe, PermGroup};
use crate::presentations::Presentation;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Everything that pins down one deterministic run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub group: String,
    pub index_lo: usize,
    pub index_hi: usize,
    /// Active convention: "excl" or "incl".
    pub convention: String,
    pub tol: f64,
    pub element_cap: usize,
    pub exhaustive: bool,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: String::new(),
            index_lo: 1,
            index_hi: 1,
            convention: "excl".into(),
            tol: 1e-8,
            element_cap: 20_000,
            exhaustive: true,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn active_convention(&self) -> StabilizerConvention {
        match self.convention.as_str() {
            "incl" => StabilizerConvention::TrivialIncluded,
            _ => StabilizerConvention::TrivialExcluded,
        }
    }

    fn scan_budget(&self) -> ScanBudget {
        ScanBudget {
            element_cap: if self.exhaustive {
                self.element_cap.max(20_000)
            } else {
                self.element_cap
            },
            seed: self.seed,
            rank_tol: self.tol,
            cluster_tol: self.tol,
            ..ScanBudget::default()
        }
    }
}

/// Serialized line of an incidence geometry (points are 1-based here,
/// matching the coset labels used in the tables and figures).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LineOut {
    pub points: Vec<usize>,
    pub stabilizer_order: String,
    pub contextual: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeometryOut {
    pub convention: String,
    pub points: usize,
    pub lines: Vec<LineOut>,
    pub recognized: String,
    pub line_count: usize,
    pub line_sizes: Vec<(usize, usize)>,
    pub degree_sequence: Vec<usize>,
    pub spectrum: Vec<f64>,
    /// 3-subsets of lines of size >= 3 whose representatives contain a
    /// non-commuting pair (1-based points).
    pub contextual_triangles: Vec<[usize; 3]>,
}

/// The coset table of a class representative: per-generator images of
/// each coset (1-based) plus the Schreier representative words.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TableOut {
    /// `action[g][c]` is the 1-based image of coset `c+1` under generator
    /// `g+1`.
    pub action: Vec<Vec<usize>>,
    pub schreier_reps: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MicOut {
    pub candidates_tested: usize,
    pub is_mic: bool,
    pub gram_rank: usize,
    pub pp: Option<usize>,
    pub pp_values: Vec<f64>,
    pub stabilizer_verdict: String,
    pub budget_exhausted: bool,
    /// Fiducial amplitudes as (re, im) pairs, full precision.
    pub fiducial: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleVerdict {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "exception-contextual")]
    ExceptionContextual,
    #[serde(rename = "false-detection")]
    FalseDetection,
}

impl std::fmt::Display for RuleVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RuleVerdict::Consistent => "consistent",
            RuleVerdict::ExceptionContextual => "exception-contextual",
            RuleVerdict::FalseDetection => "false-detection",
        })
    }
}

/// One report row: a group of identically analyzed subgroup classes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnalysisRow {
    pub group: String,
    pub d: usize,
    /// 1-based ordinal of the first class merged into this row.
    pub class: usize,
    /// How many conjugacy classes share this analysis.
    pub multiplicity: usize,
    pub covering_type: String,
    pub p_order: String,
    pub structure: String,
    pub abelian_invariants: Vec<u64>,
    pub simple: Option<bool>,
    pub conjugates_in_class: usize,
    pub axiom_i: bool,
    pub axiom_ii_trivial_excluded: bool,
    pub axiom_ii_trivial_included: bool,
    /// Recognized geometry (active convention).
    pub geometry: String,
    /// Some line of size >= 3 in the active geometry is contextual.
    pub contextual: bool,
    pub is_mic: bool,
    pub mic_budget_exhausted: bool,
    pub pp: Option<usize>,
    pub verdict: RuleVerdict,
    pub coset_table: TableOut,
    pub geometry_detail: GeometryOut,
    pub mic_detail: MicOut,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RowError {
    pub d: usize,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub rows: Vec<AnalysisRow>,
    pub errors: Vec<RowError>,
}

/// The rule verdict partition. A row is consistent when the MIC presence
/// matches the axiom alignment; a MIC appearing under axiom (i) without
/// axiom (ii) is the contextual exception class; everything else —
/// including the classic "axioms hold but no MIC" case — is a false
/// detection of the rule.
pub fn classify(is_mic: bool, ax1: bool, ax2_active: bool, contextual: bool) -> RuleVerdict {
    let aligned = ax1 == ax2_active;
    if is_mic == aligned {
        RuleVerdict::Consistent
    } else if is_mic && ax1 && !ax2_active && contextual {
        RuleVerdict::ExceptionContextual
    } else {
        RuleVerdict::FalseDetection
    }
}

pub fn geometry_out(
    geom: &IncidenceGeometry,
    record: &SubgroupRecord,
    convention: StabilizerConvention,
) -> (GeometryOut, bool) {
    let ctx = contextual_lines(geom, &record.table);
    let rec = recognize(geom);
    let lines: Vec<LineOut> = geom
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| LineOut {
            points: l.points.iter().map(|p| p + 1).collect(),
            stabilizer_order: geom.line_stabilizer_order(l).to_string(),
            contextual: ctx.contains(&i),
        })
        .collect();
    // row-level contextuality looks only at lines of size >= 3
    let contextual_big = geom
        .lines()
        .iter()
        .enumerate()
        .any(|(i, l)| l.points.len() >= 3 && ctx.contains(&i));
    let triangles: Vec<[usize; 3]> = contextual_triangles(geom, &record.table)
        .into_iter()
        .map(|(_, t)| [t[0] + 1, t[1] + 1, t[2] + 1])
        .collect();
    let fp = rec.fingerprint.clone();
    (
        GeometryOut {
            convention: convention.to_string(),
            points: geom.degree(),
            lines,
            recognized: rec.to_string(),
            line_count: fp.line_count,
            line_sizes: fp.line_sizes,
            degree_sequence: fp.degree_sequence,
            spectrum: fp.spectrum,
            contextual_triangles: triangles,
        },
        contextual_big,
    )
}

pub fn table_out(record: &SubgroupRecord, pres: &Presentation) -> TableOut {
    let d = record.index;
    let names = pres.generator_names();
    TableOut {
        action: (1..=pres.generator_count() as i32)
            .map(|g| (0..d).map(|c| record.table.apply(c, g) + 1).collect())
            .collect(),
        schreier_reps: (0..d)
            .map(|c| record.table.schreier_rep(c).display_with(names).to_string())
            .collect(),
    }
}

pub fn mic_out(report: &MicReport) -> MicOut {
    MicOut {
        candidates_tested: report.candidates_tested,
        is_mic: report.is_mic,
        gram_rank: report.gram_rank,
        pp: report.pp,
        pp_values: report.pp_values.clone(),
        stabilizer_verdict: report.stabilizer_verdict.to_string(),
        budget_exhausted: report.budget_exhausted,
        fiducial: report
            .fiducial
            .as_ref()
            .map(|f| f.amplitudes().iter().map(|a| (a.re, a.im)).collect()),
    }
}

/// Analyze one presentation over the configured index range. Per-index
/// failures (search budget, enumeration overflow) land in `errors` and the
/// run continues.
pub fn analyze(pres: &Presentation, config: &RunConfig) -> Report {
    let mut rows: Vec<AnalysisRow> = Vec::new();
    let mut errors: Vec<RowError> = Vec::new();
    let budget = config.scan_budget();
    for d in config.index_lo..=config.index_hi {
        let records = match low_index_subgroups_with(pres, d, SearchLimits::default()) {
            Ok(r) => r,
            Err(e) => {
                errors.push(RowError { d, message: e.to_string() });
                continue;
            }
        };
        let mut index_rows: Vec<AnalysisRow> = Vec::new();
        for (ordinal, record) in records.iter().enumerate() {
            let group = PermGroup::new(d, record.table.permutation_rep());
            let note = structure_describe(&group);
            let ax1 = axiom_i(record);
            let geom_excl = build_geometry(&group, StabilizerConvention::TrivialExcluded);
            let geom_incl = build_geometry(&group, StabilizerConvention::TrivialIncluded);
            let ax2_excl = crate::geometry::axiom_ii(&geom_excl);
            let ax2_incl = crate::geometry::axiom_ii(&geom_incl);
            let (active_geom, ax2_active) = match config.active_convention() {
                StabilizerConvention::TrivialExcluded => (&geom_excl, ax2_excl),
                StabilizerConvention::TrivialIncluded => (&geom_incl, ax2_incl),
            };
            let (geometry_detail, contextual) =
                geometry_out(active_geom, record, config.active_convention());
            let mic = mic_scan(record, &budget);
            let verdict = classify(mic.is_mic, ax1, ax2_active, contextual);
            let row = AnalysisRow {
                group: config.group.clone(),
                d,
                class: ordinal + 1,
                multiplicity: 1,
                covering_type: covering_type(record).to_string(),
                p_order: note.order.to_string(),
                structure: note.label(),
                abelian_invariants: note.abelian_invariants.clone(),
                simple: note.simple,
                conjugates_in_class: record.conjugates_in_class,
                axiom_i: ax1,
                axiom_ii_trivial_excluded: ax2_excl,
                axiom_ii_trivial_included: ax2_incl,
                geometry: geometry_detail.recognized.clone(),
                contextual,
                is_mic: mic.is_mic,
                mic_budget_exhausted: mic.budget_exhausted,
                pp: mic.pp,
                verdict,
                coset_table: table_out(record, pres),
                geometry_detail,
                mic_detail: mic_out(&mic),
            };
            // merge with an earlier row of identical analysis
            match index_rows.iter_mut().find(|r| same_analysis(r, &row)) {
                Some(existing) => existing.multiplicity += 1,
                None => index_rows.push(row),
            }
        }
        rows.extend(index_rows);
    }
    Report { config: config.clone(), rows, errors }
}

fn same_analysis(a: &AnalysisRow, b: &AnalysisRow) -> bool {
    a.covering_type == b.covering_type
        && a.p_order == b.p_order
        && a.structure == b.structure
        && a.abelian_invariants == b.abelian_invariants
        && a.conjugates_in_class == b.conjugates_in_class
        && a.axiom_i == b.axiom_i
        && a.axiom_ii_trivial_excluded == b.axiom_ii_trivial_excluded
        && a.axiom_ii_trivial_included == b.axiom_ii_trivial_included
        && a.geometry == b.geometry
        && a.contextual == b.contextual
        && a.is_mic == b.is_mic
        && a.mic_budget_exhausted == b.mic_budget_exhausted
        && a.pp == b.pp
        && a.verdict == b.verdict
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    /// 17 significant digits for every float.
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Byte-deterministic JSON: fixed field order, floats at 17 significant
/// digits.
pub fn emit_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser).expect("report serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Fixed-schema TSV of the rows.
pub fn emit_tsv(report: &Report) -> String {
    let mut out =
        String::from("d\tclass\tP_order\taxiom_i\taxiom_ii\tgeometry\tcontextual\tmic\tpp\tverdict\n");
    let yesno = |b: bool| if b { "yes" } else { "no" };
    for row in &report.rows {
        let ax2 = match report.config.active_convention() {
            StabilizerConvention::TrivialExcluded => row.axiom_ii_trivial_excluded,
            StabilizerConvention::TrivialIncluded => row.axiom_ii_trivial_included,
        };
        let class = if row.multiplicity > 1 {
            format!("{}(x{})", row.class, row.multiplicity)
        } else {
            row.class.to_string()
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            row.d,
            class,
            row.p_order,
            yesno(row.axiom_i),
            yesno(ax2),
            row.geometry,
            yesno(row.contextual),
            yesno(row.is_mic),
            row.pp.map(|p| p.to_string()).unwrap_or_else(|| "-".into()),
            row.verdict,
        ));
    }
    out
}
