//! From enrollment records to referral edges.
//!
//! A patient enrolled in several trials produces a chain of referrals: after
//! de-duplicating `(subject, study)` pairs and ordering the subject's trials
//! by enrollment time, each consecutive pair of trials becomes one unit edge
//! between their intervention types. Two trials of the same intervention in a
//! row give a self-loop. Subjects with fewer than two distinct trials carry
//! no referral information and are dropped.

use crate::error::{Error, Result};
use crate::graph::{Edge, NodeLabel};
use chrono::NaiveDateTime;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const ENROLLMENT_HEADER: [&str; 4] = ["subject_id", "study_id", "intervention", "enrolled_at"];
const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EnrollmentRecord {
    pub subject_id: String,
    pub study_id: String,
    pub intervention: NodeLabel,
    pub enrolled_at: NaiveDateTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterventionCategory {
    Targeted,
    Immunotherapy,
    Other,
}

pub fn classify_intervention(label: &str) -> InterventionCategory {
    if label.starts_with("T:") {
        InterventionCategory::Targeted
    } else if label.starts_with("I:") {
        InterventionCategory::Immunotherapy
    } else {
        InterventionCategory::Other
    }
}

/// How a subject's ordered trials turn into edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    /// One edge per consecutive pair of trials.
    #[default]
    Consecutive,
    /// One edge from every trial to every later trial.
    AllOrdered,
}

pub fn parse_timestamp(value: &str) -> Option<NaiveDateTime> {
    let value = value.strip_suffix('Z').unwrap_or(value);
    NaiveDateTime::parse_from_str(value, TIMESTAMP_FORMAT).ok()
}

pub fn format_timestamp(t: &NaiveDateTime) -> String {
    t.format(TIMESTAMP_FORMAT).to_string()
}

/// Parses the `subject_id,study_id,intervention,enrolled_at` CSV.
pub fn parse_enrollments(bytes: &[u8]) -> Result<Vec<EnrollmentRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(bytes);
    let mut records = Vec::new();
    let mut saw_header = false;
    for row in reader.records() {
        let row =
            row.map_err(|e| Error::Parse { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        let line = row.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = row.iter().map(str::trim).collect();
        if !saw_header {
            if fields != ENROLLMENT_HEADER {
                return Err(Error::Parse {
                    line,
                    message: format!("expected header `{}`", ENROLLMENT_HEADER.join(",")),
                });
            }
            saw_header = true;
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::Parse { line, message: format!("expected 4 fields, found {}", fields.len()) });
        }
        if let Some(i) = fields.iter().position(|f| f.is_empty()) {
            return Err(Error::Parse { line, message: format!("empty {}", ENROLLMENT_HEADER[i]) });
        }
        let enrolled_at =
            parse_timestamp(fields[3]).ok_or_else(|| Error::Timestamp { line, value: fields[3].to_string() })?;
        records.push(EnrollmentRecord {
            subject_id: fields[0].to_string(),
            study_id: fields[1].to_string(),
            intervention: NodeLabel::new(fields[2])?,
            enrolled_at,
        });
    }
    if !saw_header {
        return Err(Error::Parse { line: 1, message: "missing header".into() });
    }
    Ok(records)
}

pub fn write_enrollments(records: &[EnrollmentRecord]) -> String {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    writer.write_record(ENROLLMENT_HEADER).expect("in-memory write");
    for r in records {
        writer
            .write_record([
                r.subject_id.as_str(),
                r.study_id.as_str(),
                r.intervention.as_str(),
                &format_timestamp(&r.enrolled_at),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

/// Each qualifying subject's distinct trials in time order, keyed by subject.
///
/// A repeated `(subject, study)` keeps its earliest enrollment (ties broken by
/// intervention label); equal timestamps across trials are ordered by study id.
fn trajectories(records: &[EnrollmentRecord]) -> BTreeMap<&str, Vec<&EnrollmentRecord>> {
    let mut first: BTreeMap<(&str, &str), &EnrollmentRecord> = BTreeMap::new();
    for r in records {
        first
            .entry((r.subject_id.as_str(), r.study_id.as_str()))
            .and_modify(|kept| {
                if (r.enrolled_at, &r.intervention) < (kept.enrolled_at, &kept.intervention) {
                    *kept = r;
                }
            })
            .or_insert(r);
    }
    let mut by_subject: BTreeMap<&str, Vec<&EnrollmentRecord>> = BTreeMap::new();
    for ((subject, _), r) in first {
        by_subject.entry(subject).or_default().push(r);
    }
    by_subject.retain(|_, trials| trials.len() >= 2);
    for trials in by_subject.values_mut() {
        trials.sort_by(|a, b| (a.enrolled_at, &a.study_id).cmp(&(b.enrolled_at, &b.study_id)));
    }
    by_subject
}

pub fn build_referral_edges(records: &[EnrollmentRecord]) -> Vec<Edge> {
    build_referral_edges_with(records, Pairing::Consecutive)
}

/// Unit referral edges, subjects in id order and each subject's edges in time
/// order. The result does not depend on the order of `records`.
pub fn build_referral_edges_with(records: &[EnrollmentRecord], pairing: Pairing) -> Vec<Edge> {
    let mut edges = Vec::new();
    for trials in trajectories(records).values() {
        let edge = |a: &EnrollmentRecord, b: &EnrollmentRecord| Edge {
            from: a.intervention.clone(),
            to: b.intervention.clone(),
            weight: 1,
        };
        match pairing {
            Pairing::Consecutive => edges.extend(trials.windows(2).map(|w| edge(w[0], w[1]))),
            Pairing::AllOrdered => {
                for (i, a) in trials.iter().enumerate() {
                    edges.extend(trials[i + 1..].iter().map(|b| edge(a, b)));
                }
            }
        }
    }
    edges
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohortSummary {
    pub subjects: usize,
    pub studies: usize,
    pub multi_trial_subjects: usize,
    pub multi_trial_studies: usize,
    /// Distinct `(subject, study)` enrollments among multi-trial subjects.
    pub enrollments: usize,
    /// Distinct intervention types among multi-trial subjects.
    pub interventions: usize,
}

pub fn summarize_cohort(records: &[EnrollmentRecord]) -> CohortSummary {
    let subjects: BTreeSet<&str> = records.iter().map(|r| r.subject_id.as_str()).collect();
    let studies: BTreeSet<&str> = records.iter().map(|r| r.study_id.as_str()).collect();
    let kept = trajectories(records);
    let kept_studies: BTreeSet<&str> = kept.values().flatten().map(|r| r.study_id.as_str()).collect();
    let interventions: BTreeSet<&str> = kept.values().flatten().map(|r| r.intervention.as_str()).collect();
    CohortSummary {
        subjects: subjects.len(),
        studies: studies.len(),
        multi_trial_subjects: kept.len(),
        multi_trial_studies: kept_studies.len(),
        enrollments: kept.values().map(Vec::len).sum(),
        interventions: interventions.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionSpec {
    pub label: String,
    /// Relative popularity; must be positive.
    pub weight: f64,
    /// Interventions sharing a group refer patients to each other more often.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<u32>,
}

/// Parameters for [`generate_synthetic_enrollments`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub n_subjects: usize,
    pub max_enrollments_per_subject: usize,
    pub interventions: Vec<InterventionSpec>,
    /// Chance that a follow-up trial repeats the previous intervention.
    #[serde(default)]
    pub repeat_probability: f64,
    /// Chance that a follow-up trial stays within the previous intervention's
    /// group (when it has one).
    #[serde(default)]
    pub group_probability: f64,
    /// Distinct studies available per intervention.
    #[serde(default = "default_studies")]
    pub studies_per_intervention: usize,
}

fn default_studies() -> usize {
    25
}

/// The sixteen intervention types of the reference cohort: "T: Small
/// Molecule" and "I: MAbs Checkpoint" are hubs at ten times the popularity of
/// the fourteen others, which fall into four referral groups.
pub fn reference_interventions() -> Vec<InterventionSpec> {
    let spec =
        |label: &str, weight: f64, group: Option<u32>| InterventionSpec { label: label.to_string(), weight, group };
    vec![
        spec("T: Small Molecule", 10.0, None),
        spec("I: MAbs Checkpoint", 10.0, None),
        spec("Chemotherapy", 1.0, Some(0)),
        spec("I: MAbs Targeting", 1.0, Some(0)),
        spec("T: Combined", 1.0, Some(0)),
        spec("Combined Modality", 1.0, Some(0)),
        spec("I: Adoptive Cell Transfer", 1.0, Some(1)),
        spec("I: Anti Cancer Vaccine", 1.0, Some(1)),
        spec("T: Antibody-Drug Conjugate", 1.0, Some(1)),
        spec("Radioconjugate", 1.0, Some(1)),
        spec("I: Combined", 1.0, Some(2)),
        spec("I: MAbs Co-Stimulatory", 1.0, Some(2)),
        spec("I: Oncolytic Virus", 1.0, Some(2)),
        spec("Drug Repurposing", 1.0, Some(3)),
        spec("I: Other", 1.0, Some(3)),
        spec("T: Monoclonal Antibody", 1.0, Some(3)),
    ]
}

impl SynthConfig {
    /// The frozen fixture configuration (use with seed 42).
    pub fn reference() -> Self {
        SynthConfig {
            n_subjects: 400,
            max_enrollments_per_subject: 5,
            interventions: reference_interventions(),
            repeat_probability: 0.6,
            group_probability: 0.05,
            studies_per_intervention: default_studies(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.interventions.is_empty() {
            return bad("at least one intervention is required");
        }
        if self.max_enrollments_per_subject == 0 {
            return bad("max_enrollments_per_subject must be at least 1");
        }
        if self.studies_per_intervention == 0 {
            return bad("studies_per_intervention must be at least 1");
        }
        if self.interventions.iter().any(|i| !(i.weight.is_finite() && i.weight > 0.0)) {
            return bad("intervention weights must be positive and finite");
        }
        for p in [self.repeat_probability, self.group_probability] {
            if !(0.0..=1.0).contains(&p) {
                return bad("probabilities must lie in [0, 1]");
            }
        }
        if self.repeat_probability + self.group_probability > 1.0 {
            return bad("repeat_probability + group_probability must not exceed 1");
        }
        let mut seen = BTreeSet::new();
        for i in &self.interventions {
            NodeLabel::new(&i.label).map_err(|_| Error::Config("intervention labels must be non-empty".into()))?;
            if !seen.insert(i.label.trim()) {
                return Err(Error::Config(format!("duplicate intervention {:?}", i.label)));
            }
        }
        Ok(())
    }
}

/// Deterministic synthetic cohort.
///
/// Each subject gets a uniform number of enrollments in
/// `1..=max_enrollments_per_subject`. The first intervention is drawn by
/// popularity; each later one repeats the previous intervention with
/// `repeat_probability`, stays in the previous intervention's group with
/// `group_probability`, and is otherwise drawn by popularity again. Every
/// enrollment picks one of the intervention's studies at random, so a
/// subject can land in the same study twice (de-duplicated downstream).
/// Enrollment times strictly increase within a subject.
pub fn generate_synthetic_enrollments(seed: u64, config: &SynthConfig) -> Result<Vec<EnrollmentRecord>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<NodeLabel> =
        config.interventions.iter().map(|i| NodeLabel::new(&i.label)).collect::<Result<_>>()?;
    let weights: Vec<f64> = config.interventions.iter().map(|i| i.weight).collect();
    let popularity = WeightedIndex::new(&weights).map_err(|e| Error::Config(e.to_string()))?;
    let mut groups: BTreeMap<u32, (Vec<usize>, WeightedIndex<f64>)> = BTreeMap::new();
    let mut members: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, spec) in config.interventions.iter().enumerate() {
        if let Some(g) = spec.group {
            members.entry(g).or_default().push(i);
        }
    }
    for (g, idx) in members {
        let w: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
        let dist = WeightedIndex::new(&w).map_err(|e| Error::Config(e.to_string()))?;
        groups.insert(g, (idx, dist));
    }

    let epoch = NaiveDateTime::parse_from_str("2015-01-01T08:00:00", TIMESTAMP_FORMAT).expect("valid epoch");
    let width = config.n_subjects.max(1).to_string().len().max(4);
    let mut records = Vec::new();
    for s in 0..config.n_subjects {
        let subject_id = format!("S{:0width$}", s + 1);
        // Draw as u64 so 32-bit targets consume the generator the same way.
        let count = rng.gen_range(1..=config.max_enrollments_per_subject as u64);
        let mut at = epoch
            + chrono::Duration::days(rng.gen_range(0..1500))
            + chrono::Duration::seconds(rng.gen_range(0..86_400));
        let mut current = popularity.sample(&mut rng);
        for k in 0..count {
            if k > 0 {
                let roll: f64 = rng.gen();
                current = if roll < config.repeat_probability {
                    current
                } else if roll < config.repeat_probability + config.group_probability {
                    match config.interventions[current].group.and_then(|g| groups.get(&g)) {
                        Some((idx, dist)) => idx[dist.sample(&mut rng)],
                        None => popularity.sample(&mut rng),
                    }
                } else {
                    popularity.sample(&mut rng)
                };
                at += chrono::Duration::days(rng.gen_range(14..240))
                    + chrono::Duration::seconds(rng.gen_range(0..86_400));
            }
            let study = rng.gen_range(0..config.studies_per_intervention as u64);
            records.push(EnrollmentRecord {
                subject_id: subject_id.clone(),
                study_id: format!("ST{:02}-{:03}", current + 1, study + 1),
                intervention: labels[current].clone(),
                enrolled_at: at,
            });
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(subject: &str, study: &str, intervention: &str, at: &str) -> EnrollmentRecord {
        EnrollmentRecord {
            subject_id: subject.into(),
            study_id: study.into(),
            intervention: NodeLabel::new(intervention).unwrap(),
            enrolled_at: parse_timestamp(at).unwrap(),
        }
    }

    #[test]
    fn parse_well_formed() {
        let text = "subject_id,study_id,intervention,enrolled_at\n\
                    S1,A, Chemotherapy ,2020-01-01T00:00:00\n\
                    S1,B,T: Small Molecule,2020-02-01T00:00:00Z\n\
                    S1,B,T: Small Molecule,2020-02-01T00:00:00\n";
        let records = parse_enrollments(text.as_bytes()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0].intervention.as_str(), "Chemotherapy");
        assert_eq!(records[1], records[2]);
    }

    #[test]
    fn parse_errors() {
        let missing =
            "subject_id,study_id,intervention,enrolled_at\nS1,A,Chemo,2020-01-01T00:00:00\nS1,B,,2020-01-01T00:00:00\n";
        assert!(matches!(parse_enrollments(missing.as_bytes()), Err(Error::Parse { line: 3, .. })));
        let short = "subject_id,study_id,intervention,enrolled_at\nS1,A,Chemo\n";
        assert!(matches!(parse_enrollments(short.as_bytes()), Err(Error::Parse { line: 2, .. })));
        let bad_time = "subject_id,study_id,intervention,enrolled_at\nS1,A,Chemo,01/02/2020\n";
        assert!(matches!(parse_enrollments(bad_time.as_bytes()), Err(Error::Timestamp { line: 2, .. })));
        assert!(matches!(parse_enrollments(b"a,b,c,d\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn consecutive_pairs_with_self_loop() {
        let records = vec![
            rec("S1", "C", "T: Small Molecule", "2020-03-01T00:00:00"),
            rec("S1", "A", "Chemotherapy", "2020-01-01T00:00:00"),
            rec("S1", "B", "T: Small Molecule", "2020-02-01T00:00:00"),
        ];
        let edges = build_referral_edges(&records);
        assert_eq!(
            edges,
            vec![Edge::unit("Chemotherapy", "T: Small Molecule"), Edge::unit("T: Small Molecule", "T: Small Molecule")]
        );
        let all = build_referral_edges_with(&records, Pairing::AllOrdered);
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn single_enrollment_gives_nothing() {
        assert!(build_referral_edges(&[rec("S1", "A", "Chemotherapy", "2020-01-01T00:00:00")]).is_empty());
        // the same study twice is still one trial
        let twice = [
            rec("S1", "A", "Chemotherapy", "2020-01-01T00:00:00"),
            rec("S1", "A", "Chemotherapy", "2020-05-01T00:00:00"),
        ];
        assert!(build_referral_edges(&twice).is_empty());
    }

    #[test]
    fn two_subjects_sum_after_simplify() {
        let records = vec![
            rec("S1", "A", "Chemotherapy", "2020-01-01T00:00:00"),
            rec("S1", "B", "I: Combined", "2020-02-01T00:00:00"),
            rec("S2", "C", "Chemotherapy", "2021-01-01T00:00:00"),
            rec("S2", "D", "I: Combined", "2021-02-01T00:00:00"),
        ];
        let g = crate::graph::Graph::build(build_referral_edges(&records), true).unwrap().simplify();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![Edge::new("Chemotherapy", "I: Combined", 2).unwrap()]);
    }

    #[test]
    fn dedup_keeps_earliest_and_ties_sort_by_study() {
        let records = vec![
            rec("S1", "B", "Radioconjugate", "2020-01-01T00:00:00"),
            rec("S1", "A", "Chemotherapy", "2020-01-01T00:00:00"),
            rec("S1", "Z", "I: Other", "2019-06-01T00:00:00"),
            rec("S1", "Z", "I: Other", "2018-06-01T00:00:00"),
        ];
        let edges = build_referral_edges(&records);
        assert_eq!(edges, vec![Edge::unit("I: Other", "Chemotherapy"), Edge::unit("Chemotherapy", "Radioconjugate")]);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_intervention("T: Small Molecule"), InterventionCategory::Targeted);
        assert_eq!(classify_intervention("I: Combined"), InterventionCategory::Immunotherapy);
        assert_eq!(classify_intervention("Chemotherapy"), InterventionCategory::Other);
        let labels = reference_interventions();
        let count = |c| labels.iter().filter(|i| classify_intervention(&i.label) == c).count();
        assert_eq!(
            (
                count(InterventionCategory::Targeted),
                count(InterventionCategory::Immunotherapy),
                count(InterventionCategory::Other)
            ),
            (4, 8, 4)
        );
    }

    #[test]
    fn summaries() {
        assert_eq!(summarize_cohort(&[]), CohortSummary::default());
        let s = summarize_cohort(&[
            rec("S1", "A", "Chemotherapy", "2020-01-01T00:00:00"),
            rec("S1", "B", "I: Combined", "2020-02-01T00:00:00"),
        ]);
        assert_eq!((s.subjects, s.multi_trial_subjects, s.enrollments), (1, 1, 2));
        assert_eq!((s.studies, s.multi_trial_studies, s.interventions), (2, 2, 2));
    }

    #[test]
    fn synth_is_deterministic() {
        let mut cfg = SynthConfig::reference();
        cfg.n_subjects = 10;
        let a = generate_synthetic_enrollments(1, &cfg).unwrap();
        assert_eq!(a, generate_synthetic_enrollments(1, &cfg).unwrap());
        assert_ne!(a, generate_synthetic_enrollments(2, &cfg).unwrap());
        for w in a.windows(2) {
            if w[0].subject_id == w[1].subject_id {
                assert!(w[0].enrolled_at < w[1].enrolled_at);
            }
        }
    }

    #[test]
    fn synth_single_enrollment_gives_no_edges() {
        let mut cfg = SynthConfig::reference();
        cfg.max_enrollments_per_subject = 1;
        let records = generate_synthetic_enrollments(5, &cfg).unwrap();
        assert_eq!(records.len(), cfg.n_subjects);
        assert!(build_referral_edges(&records).is_empty());
    }

    #[test]
    fn synth_config_errors() {
        let mut cfg = SynthConfig::reference();
        cfg.interventions[3].weight = 0.0;
        assert!(matches!(generate_synthetic_enrollments(0, &cfg), Err(Error::Config(_))));
        let mut cfg = SynthConfig::reference();
        cfg.repeat_probability = 0.99;
        assert!(matches!(generate_synthetic_enrollments(0, &cfg), Err(Error::Config(_))));
        let mut cfg = SynthConfig::reference();
        cfg.interventions[1].label = cfg.interventions[0].label.clone();
        assert!(matches!(generate_synthetic_enrollments(0, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn enrollment_csv_round_trip() {
        let mut cfg = SynthConfig::reference();
        cfg.n_subjects = 25;
        let records = generate_synthetic_enrollments(9, &cfg).unwrap();
        assert_eq!(parse_enrollments(write_enrollments(&records).as_bytes()).unwrap(), records);
    }
}
