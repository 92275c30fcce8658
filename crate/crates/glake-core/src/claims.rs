//! Parsing positional claims back out of free text and checking them
//! against mask-derived ground truth.
//!
//! The parser is rule-based over the closed template vocabulary: lake
//! counts (numerals or the number words one..twenty near "glacial
//! lake(s)"), ordinal markers ("1st", "first", ...), quadrant phrases, and
//! the proximity phrases "near the center" / "far from the center". Text
//! outside that vocabulary lowers `parse_coverage`; nothing is guessed.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{label_components, AnalysisConfig, LakeInstance, Proximity, Quadrant};
use crate::qa::dataset::enumerate_masks;
use crate::raster::load_mask;
use crate::Scalar;

/// One positional assertion extracted from text. Absent fields were not
/// stated, never inferred — except that a bare "center" quadrant implies
/// near proximity, which is what that phrase means in the vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub ordinal: Option<u32>,
    pub quadrant: Option<Quadrant>,
    pub proximity: Option<Proximity>,
}

/// Structured claims parsed from one answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSet {
    pub stated_count: Option<u32>,
    pub claims: Vec<Claim>,
    /// Fraction of expected fields (count + quadrant/proximity per lake)
    /// actually recovered from the text.
    pub parse_coverage: Scalar,
}

impl ClaimSet {
    /// Sorts claims by ordinal (claims without ordinals keep their text
    /// order at the end) and rejects duplicate ordinals.
    pub fn new(stated_count: Option<u32>, mut claims: Vec<Claim>) -> Result<Self> {
        if stated_count == Some(0) {
            return Err(Error::Config("stated_count must be >= 1 when present".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for claim in &claims {
            if let Some(ord) = claim.ordinal {
                if !seen.insert(ord) {
                    return Err(Error::DuplicateOrdinal(ord));
                }
            }
        }
        claims.sort_by_key(|c| c.ordinal.map_or(u64::MAX, |o| o as u64));
        let expected_lakes = claims.len().max(stated_count.unwrap_or(0) as usize);
        let expected_fields = 1 + 2 * expected_lakes;
        let recovered = usize::from(stated_count.is_some())
            + claims
                .iter()
                .map(|c| usize::from(c.quadrant.is_some()) + usize::from(c.proximity.is_some()))
                .sum::<usize>();
        Ok(Self {
            stated_count,
            claims,
            parse_coverage: recovered as Scalar / expected_fields as Scalar,
        })
    }

    pub fn empty() -> Self {
        Self {
            stated_count: None,
            claims: Vec::new(),
            parse_coverage: 0.0,
        }
    }
}

/// Verification of one answer against its mask's instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub image_id: String,
    pub count_match: bool,
    pub per_lake: Vec<LakeCheck>,
    pub exact_match: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LakeCheck {
    pub ordinal: u32,
    pub quadrant_match: bool,
    pub proximity_match: bool,
}

const NUMBER_WORDS: [&str; 20] = [
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    "twenty",
];

fn number_word(token: &str) -> Option<u32> {
    NUMBER_WORDS
        .iter()
        .position(|&w| w == token)
        .map(|i| i as u32 + 1)
}

fn numeral(token: &str) -> Option<u32> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

/// "1st"/"2nd"/"23rd"/"11th" and the words first/second/third.
fn ordinal_marker(token: &str) -> Option<u32> {
    match token {
        "first" => return Some(1),
        "second" => return Some(2),
        "third" => return Some(3),
        _ => {}
    }
    let digits = token.trim_end_matches(|c: char| c.is_ascii_alphabetic());
    let suffix = &token[digits.len()..];
    if matches!(suffix, "st" | "nd" | "rd" | "th") {
        numeral(digits)
    } else {
        None
    }
}

/// Lowercase, hyphens to spaces, the vocabulary's punctuation removed,
/// whitespace collapsed.
fn tokenize_claim_text(text: &str) -> Vec<String> {
    text.to_lowercase()
        .replace('-', " ")
        .replace(['.', ',', ':', ';', '!', '?', '"', '(', ')'], "")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

struct Span {
    start: usize,
    len: usize,
}

fn find_phrase_spans(tokens: &[String], phrase: &[&str], consumed: &mut [bool]) -> Vec<Span> {
    let mut spans = Vec::new();
    if tokens.len() < phrase.len() {
        return spans;
    }
    let mut i = 0;
    while i + phrase.len() <= tokens.len() {
        let window = &tokens[i..i + phrase.len()];
        let free = !consumed[i..i + phrase.len()].iter().any(|&c| c);
        if free && window.iter().zip(phrase).all(|(t, p)| t == p) {
            consumed[i..i + phrase.len()].iter_mut().for_each(|c| *c = true);
            spans.push(Span {
                start: i,
                len: phrase.len(),
            });
            i += phrase.len();
        } else {
            i += 1;
        }
    }
    spans
}

/// Extracts a [`ClaimSet`] from arbitrary text. Never fails; unrecognized
/// text yields an empty set with zero coverage.
pub fn parse_answer(text: &str) -> ClaimSet {
    let tokens = tokenize_claim_text(text);
    let mut consumed = vec![false; tokens.len()];

    // Proximity phrases first: they contain the word "center", which must
    // not double as the center quadrant.
    let mut proximities: Vec<(usize, Proximity)> = Vec::new();
    for span in find_phrase_spans(&tokens, &["far", "from", "the", "center"], &mut consumed) {
        proximities.push((span.start, Proximity::Far));
    }
    for span in find_phrase_spans(&tokens, &["near", "the", "center"], &mut consumed) {
        proximities.push((span.start, Proximity::Near));
    }
    proximities.sort_by_key(|&(start, _)| start);

    let mut quadrants: Vec<(usize, Quadrant)> = Vec::new();
    for (phrase, quadrant) in [
        (&["top", "left"][..], Quadrant::TopLeft),
        (&["top", "right"][..], Quadrant::TopRight),
        (&["bottom", "left"][..], Quadrant::BottomLeft),
        (&["bottom", "right"][..], Quadrant::BottomRight),
    ] {
        for span in find_phrase_spans(&tokens, phrase, &mut consumed) {
            quadrants.push((span.start, quadrant));
        }
    }
    for (i, token) in tokens.iter().enumerate() {
        if !consumed[i] && token == "center" {
            quadrants.push((i, Quadrant::Center));
        }
    }
    quadrants.sort_by_key(|&(start, _)| start);

    let ordinals: Vec<(usize, u32)> = tokens
        .iter()
        .enumerate()
        .filter_map(|(i, t)| ordinal_marker(t).map(|v| (i, v)))
        .collect();

    let stated_count = extract_count(&tokens);

    let mut claims = Vec::new();
    if ordinals.is_empty() {
        let quadrant = quadrants.first().map(|&(_, q)| q);
        let proximity = proximities.first().map(|&(_, p)| p);
        if quadrant.is_some() || proximity.is_some() {
            claims.push(Claim {
                ordinal: None,
                quadrant,
                proximity,
            });
        }
    } else {
        let mut seen = std::collections::BTreeSet::new();
        for (k, &(start, value)) in ordinals.iter().enumerate() {
            let end = ordinals.get(k + 1).map_or(tokens.len(), |&(next, _)| next);
            if !seen.insert(value) {
                continue;
            }
            let quadrant = quadrants
                .iter()
                .find(|&&(pos, _)| pos >= start && pos < end)
                .map(|&(_, q)| q);
            let proximity = proximities
                .iter()
                .find(|&&(pos, _)| pos >= start && pos < end)
                .map(|&(_, p)| p);
            claims.push(Claim {
                ordinal: Some(value),
                quadrant,
                proximity,
            });
        }
    }

    // In the vocabulary a bare "center" position means "at the image
    // center", which is near by definition.
    for claim in &mut claims {
        if claim.quadrant == Some(Quadrant::Center) && claim.proximity.is_none() {
            claim.proximity = Some(Proximity::Near);
        }
    }

    ClaimSet::new(stated_count, claims).expect("parse pre-deduplicates ordinals")
}

/// A count is a numeral or number word within a small window around a
/// "glacial lake(s)" mention; ordinal tokens do not count. With no explicit
/// count, a singular "glacial lake" mention implies one.
fn extract_count(tokens: &[String]) -> Option<u32> {
    let mut saw_singular = false;
    for i in 0..tokens.len().saturating_sub(1) {
        if tokens[i] != "glacial" {
            continue;
        }
        let plural = match tokens[i + 1].as_str() {
            "lake" => false,
            "lakes" => true,
            _ => continue,
        };
        saw_singular |= !plural;
        let lo = i.saturating_sub(6);
        let hi = (i + 1 + 6).min(tokens.len() - 1);
        for token in &tokens[lo..=hi] {
            if ordinal_marker(token).is_some() {
                continue;
            }
            if let Some(n) = numeral(token).or_else(|| number_word(token)) {
                return Some(n);
            }
        }
    }
    if saw_singular {
        Some(1)
    } else {
        None
    }
}

/// Checks a claim set against the instances extracted from the mask.
///
/// Claims with ordinals pair to the matching truth ordinal; claims without
/// pair greedily by quadrant (truth ordinal ascending), then positionally.
/// Every truth instance gets a [`LakeCheck`]; absent claim fields count as
/// mismatches and are listed in the notes.
pub fn verify(image_id: &str, claims: &ClaimSet, truth: &[LakeInstance]) -> VerificationReport {
    let mut notes = Vec::new();

    let count_match = match claims.stated_count {
        Some(n) => n as usize == truth.len(),
        None => {
            notes.push("no lake count stated".to_owned());
            truth.is_empty()
        }
    };

    let mut used = vec![false; claims.claims.len()];
    let mut paired: Vec<Option<usize>> = vec![None; truth.len()];

    for (t, inst) in truth.iter().enumerate() {
        if let Some(c) = claims
            .claims
            .iter()
            .position(|c| c.ordinal == Some(inst.ordinal))
        {
            used[c] = true;
            paired[t] = Some(c);
        }
    }
    // Greedy quadrant pass for ordinal-free claims.
    for (t, inst) in truth.iter().enumerate() {
        if paired[t].is_some() {
            continue;
        }
        let found = (0..claims.claims.len()).find(|&c| {
            !used[c]
                && claims.claims[c].ordinal.is_none()
                && claims.claims[c].quadrant == Some(inst.position.quadrant)
        });
        if let Some(c) = found {
            used[c] = true;
            paired[t] = Some(c);
        }
    }
    // Positional fill with whatever ordinal-free claims remain.
    for slot in paired.iter_mut().filter(|p| p.is_none()) {
        let found =
            (0..claims.claims.len()).find(|&c| !used[c] && claims.claims[c].ordinal.is_none());
        if let Some(c) = found {
            used[c] = true;
            *slot = Some(c);
        }
    }

    let mut per_lake = Vec::with_capacity(truth.len());
    for (t, inst) in truth.iter().enumerate() {
        let check = match paired[t].map(|c| &claims.claims[c]) {
            Some(claim) => {
                if claim.quadrant.is_none() {
                    notes.push(format!("claim for lake {} states no quadrant", inst.ordinal));
                }
                if claim.proximity.is_none() {
                    notes.push(format!("claim for lake {} states no proximity", inst.ordinal));
                }
                LakeCheck {
                    ordinal: inst.ordinal,
                    quadrant_match: claim.quadrant == Some(inst.position.quadrant),
                    proximity_match: claim.proximity == Some(inst.position.proximity),
                }
            }
            None => {
                notes.push(format!("no claim for lake {}", inst.ordinal));
                LakeCheck {
                    ordinal: inst.ordinal,
                    quadrant_match: false,
                    proximity_match: false,
                }
            }
        };
        per_lake.push(check);
    }

    for (c, claim) in claims.claims.iter().enumerate() {
        if !used[c] {
            notes.push(match claim.ordinal {
                Some(ord) => format!("extra claim for ordinal {ord} beyond {} lake(s)", truth.len()),
                None => format!("extra unpaired claim beyond {} lake(s)", truth.len()),
            });
        }
    }

    let exact_match = count_match && per_lake.iter().all(|c| c.quadrant_match && c.proximity_match);
    VerificationReport {
        image_id: image_id.to_owned(),
        count_match,
        per_lake,
        exact_match,
        notes,
    }
}

/// One answer to verify: either a full generated record or a bare
/// `{image_id, text}` pair from a model under evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct AnswerRecord {
    pub image_id: String,
    pub answer: String,
    pub config_echo: Option<AnalysisConfig>,
}

/// Reads answers from JSON lines, accepting generated-record lines (which
/// carry `answer` and `config_echo`) and plain `{image_id, text}` lines.
pub fn read_answers(path: &Path) -> Result<Vec<AnswerRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut answers = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::Json { path: path.into(), source: e })?;
        let image_id = value
            .get("image_id")
            .and_then(|v| v.as_str())
            .ok_or_else(|| {
                Error::Config(format!("{}:{}: missing image_id", path.display(), lineno + 1))
            })?
            .to_owned();
        let answer = value
            .get("answer")
            .or_else(|| value.get("text"))
            .and_then(|v| v.as_str())
            .ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: missing answer/text field",
                    path.display(),
                    lineno + 1
                ))
            })?
            .to_owned();
        let config_echo = value
            .get("config_echo")
            .cloned()
            .and_then(|v| serde_json::from_value(v).ok());
        answers.push(AnswerRecord {
            image_id,
            answer,
            config_echo,
        });
    }
    Ok(answers)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchConfig {
    /// Analysis parameters for answers that do not carry a config echo.
    pub fallback: AnalysisConfig,
    pub binarize_threshold: u8,
}

impl Default for BatchConfig {
    fn default() -> Self {
        Self {
            fallback: AnalysisConfig::default(),
            binarize_threshold: 0,
        }
    }
}

/// Aggregate rates over a verified batch. These are a diagnostic defined by
/// this toolkit's closed template vocabulary, not a standard benchmark
/// metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub records: usize,
    pub verified: usize,
    pub missing_mask: usize,
    pub missing_ids: Vec<String>,
    pub exact_match_rate: Scalar,
    pub count_accuracy: Scalar,
    pub quadrant_accuracy: Scalar,
    pub proximity_accuracy: Scalar,
    pub note: String,
}

/// Parses and verifies every answer against the masks in `mask_dir`.
/// Answers whose mask is missing are flagged, excluded from the rates, and
/// counted.
pub fn batch_verify(
    answers: &[AnswerRecord],
    mask_dir: &Path,
    config: &BatchConfig,
) -> Result<(Vec<VerificationReport>, AggregateReport)> {
    let mask_paths: BTreeMap<String, std::path::PathBuf> = enumerate_masks(mask_dir)?
        .into_iter()
        .filter_map(|p| {
            p.file_stem()
                .map(|s| (s.to_string_lossy().into_owned(), p.clone()))
        })
        .collect();

    let results: Vec<std::result::Result<VerificationReport, String>> = answers
        .par_iter()
        .map(|record| {
            let Some(path) = mask_paths.get(&record.image_id) else {
                return Ok(Err(record.image_id.clone()));
            };
            let mask = load_mask(path, config.binarize_threshold)?;
            let analysis = record.config_echo.unwrap_or(config.fallback);
            let truth = label_components(&mask, &analysis);
            let claims = parse_answer(&record.answer);
            Ok(Ok(verify(&record.image_id, &claims, &truth)))
        })
        .collect::<Result<_>>()?;

    let mut reports = Vec::new();
    let mut missing_ids = Vec::new();
    for result in results {
        match result {
            Ok(report) => reports.push(report),
            Err(id) => missing_ids.push(id),
        }
    }

    let verified = reports.len();
    let rate = |num: usize, den: usize| if den == 0 { 0.0 } else { num as Scalar / den as Scalar };
    let lake_checks: usize = reports.iter().map(|r| r.per_lake.len()).sum();
    let aggregate = AggregateReport {
        records: answers.len(),
        verified,
        missing_mask: missing_ids.len(),
        missing_ids,
        exact_match_rate: rate(reports.iter().filter(|r| r.exact_match).count(), verified),
        count_accuracy: rate(reports.iter().filter(|r| r.count_match).count(), verified),
        quadrant_accuracy: rate(
            reports.iter().flat_map(|r| &r.per_lake).filter(|c| c.quadrant_match).count(),
            lake_checks,
        ),
        proximity_accuracy: rate(
            reports.iter().flat_map(|r| &r.per_lake).filter(|c| c.proximity_match).count(),
            lake_checks,
        ),
        note: "positional rates are a diagnostic over this toolkit's closed template vocabulary"
            .to_owned(),
    };
    Ok((reports, aggregate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{BoundingBox, CenterPoint, PositionLabel};

    fn truth_instance(ordinal: u32, quadrant: Quadrant, proximity: Proximity) -> LakeInstance {
        LakeInstance {
            ordinal,
            bbox: BoundingBox { x: 0, y: 0, w: 2, h: 2 },
            center: CenterPoint { cx: 1.0, cy: 1.0 },
            position: PositionLabel { quadrant, proximity },
            area: 4,
        }
    }

    #[test]
    fn parses_dual_lake_answer() {
        let set = parse_answer(
            "There are two glacial lakes: the 1st is in the top right, far from the center, \
             and the 2nd is in the bottom left, near the center.",
        );
        assert_eq!(set.stated_count, Some(2));
        assert_eq!(
            set.claims,
            vec![
                Claim {
                    ordinal: Some(1),
                    quadrant: Some(Quadrant::TopRight),
                    proximity: Some(Proximity::Far),
                },
                Claim {
                    ordinal: Some(2),
                    quadrant: Some(Quadrant::BottomLeft),
                    proximity: Some(Proximity::Near),
                },
            ]
        );
        assert_eq!(set.parse_coverage, 1.0);
    }

    #[test]
    fn parses_singular_answer_with_implied_count() {
        let set = parse_answer("The glacial lake is present in the top left area.");
        assert_eq!(set.stated_count, Some(1));
        assert_eq!(
            set.claims,
            vec![Claim {
                ordinal: None,
                quadrant: Some(Quadrant::TopLeft),
                proximity: None,
            }]
        );
        assert!(set.parse_coverage < 1.0 && set.parse_coverage > 0.0);
    }

    #[test]
    fn unrecognized_text_yields_empty_set() {
        let set = parse_answer("No lakes mentioned here.");
        assert_eq!(set, ClaimSet::empty());
    }

    #[test]
    fn parse_is_case_whitespace_and_hyphen_tolerant() {
        let a = parse_answer("THE GLACIAL   LAKE IS IN THE TOP-LEFT, NEAR THE CENTER.");
        let b = parse_answer("the glacial lake is in the top left, near the center.");
        assert_eq!(a, b);
        assert_eq!(a.claims[0].quadrant, Some(Quadrant::TopLeft));
        assert_eq!(a.claims[0].proximity, Some(Proximity::Near));
    }

    #[test]
    fn bare_center_is_quadrant_with_near_implied() {
        let set = parse_answer("The glacial lake is seen in the center.");
        assert_eq!(set.claims[0].quadrant, Some(Quadrant::Center));
        assert_eq!(set.claims[0].proximity, Some(Proximity::Near));
    }

    #[test]
    fn word_ordinals_and_count_words_parse() {
        let set = parse_answer(
            "There are exactly two glacial lakes: the first is at top left, near the center \
             and the second at bottom right, far from the center.",
        );
        assert_eq!(set.stated_count, Some(2));
        assert_eq!(set.claims[0].ordinal, Some(1));
        assert_eq!(set.claims[1].ordinal, Some(2));
        assert_eq!(set.claims[1].quadrant, Some(Quadrant::BottomRight));
    }

    #[test]
    fn multi_lake_count_and_segments() {
        let set = parse_answer(
            "There are 3 glacial lakes in the image. The 1st glacial lake lies in the top left, \
             near the center. The 2nd glacial lake can be seen at bottom right, far from the \
             center. The 3rd glacial lake appears in the top right, near the center.",
        );
        assert_eq!(set.stated_count, Some(3));
        assert_eq!(set.claims.len(), 3);
        assert_eq!(set.claims[2].quadrant, Some(Quadrant::TopRight));
        assert_eq!(set.claims[2].proximity, Some(Proximity::Near));
        assert_eq!(set.parse_coverage, 1.0);
    }

    #[test]
    fn count_ignores_ordinal_tokens() {
        let set = parse_answer("The 2nd glacial lake is near the center.");
        // "2nd" is an ordinal, not a count; singular mention implies one.
        assert_eq!(set.stated_count, Some(1));
    }

    #[test]
    fn duplicate_ordinals_keep_first() {
        let set = parse_answer(
            "The 1st glacial lake is in the top left, near the center. \
             The 1st glacial lake is in the bottom right, far from the center.",
        );
        assert_eq!(set.claims.len(), 1);
        assert_eq!(set.claims[0].quadrant, Some(Quadrant::TopLeft));
    }

    #[test]
    fn claim_set_rejects_duplicate_ordinals() {
        let dup = vec![
            Claim { ordinal: Some(1), quadrant: None, proximity: None },
            Claim { ordinal: Some(1), quadrant: None, proximity: None },
        ];
        assert!(ClaimSet::new(Some(2), dup).is_err());
    }

    #[test]
    fn claim_order_is_sorted_by_ordinal() {
        let shuffled = vec![
            Claim { ordinal: Some(3), quadrant: Some(Quadrant::TopLeft), proximity: Some(Proximity::Near) },
            Claim { ordinal: Some(1), quadrant: Some(Quadrant::TopRight), proximity: Some(Proximity::Far) },
            Claim { ordinal: Some(2), quadrant: Some(Quadrant::Center), proximity: Some(Proximity::Near) },
        ];
        let set = ClaimSet::new(Some(3), shuffled).unwrap();
        let ordinals: Vec<u32> = set.claims.iter().filter_map(|c| c.ordinal).collect();
        assert_eq!(ordinals, [1, 2, 3]);
    }

    #[test]
    fn verify_single_field_mismatch() {
        let claims = ClaimSet::new(
            Some(1),
            vec![Claim {
                ordinal: Some(1),
                quadrant: Some(Quadrant::TopLeft),
                proximity: Some(Proximity::Near),
            }],
        )
        .unwrap();
        let truth = [truth_instance(1, Quadrant::TopRight, Proximity::Near)];
        let report = verify("img", &claims, &truth);
        assert!(report.count_match);
        assert!(!report.per_lake[0].quadrant_match);
        assert!(report.per_lake[0].proximity_match);
        assert!(!report.exact_match);
    }

    #[test]
    fn verify_extra_claim_and_count_mismatch() {
        let claims = ClaimSet::new(
            Some(3),
            (1..=3)
                .map(|i| Claim {
                    ordinal: Some(i),
                    quadrant: Some(Quadrant::TopLeft),
                    proximity: Some(Proximity::Near),
                })
                .collect(),
        )
        .unwrap();
        let truth = [
            truth_instance(1, Quadrant::TopLeft, Proximity::Near),
            truth_instance(2, Quadrant::TopLeft, Proximity::Near),
        ];
        let report = verify("img", &claims, &truth);
        assert!(!report.count_match);
        assert_eq!(report.per_lake.len(), 2);
        assert!(report.per_lake.iter().all(|c| c.quadrant_match && c.proximity_match));
        assert!(report.notes.iter().any(|n| n.contains("extra claim")));
        assert!(!report.exact_match);
    }

    #[test]
    fn verify_missing_claim_counts_as_mismatch() {
        let claims = ClaimSet::new(
            Some(2),
            vec![Claim {
                ordinal: Some(1),
                quadrant: Some(Quadrant::TopLeft),
                proximity: Some(Proximity::Near),
            }],
        )
        .unwrap();
        let truth = [
            truth_instance(1, Quadrant::TopLeft, Proximity::Near),
            truth_instance(2, Quadrant::BottomRight, Proximity::Far),
        ];
        let report = verify("img", &claims, &truth);
        assert!(report.count_match);
        assert!(!report.exact_match);
        assert!(report.notes.iter().any(|n| n.contains("no claim for lake 2")));
    }

    #[test]
    fn verify_greedy_quadrant_pairing_without_ordinals() {
        let claims = ClaimSet::new(
            Some(1),
            vec![Claim {
                ordinal: None,
                quadrant: Some(Quadrant::BottomLeft),
                proximity: Some(Proximity::Near),
            }],
        )
        .unwrap();
        let truth = [truth_instance(1, Quadrant::BottomLeft, Proximity::Near)];
        let report = verify("img", &claims, &truth);
        assert!(report.exact_match);
    }

    #[test]
    fn verify_is_order_insensitive_for_ordinal_claims() {
        let forward = ClaimSet::new(
            Some(2),
            vec![
                Claim { ordinal: Some(1), quadrant: Some(Quadrant::TopRight), proximity: Some(Proximity::Far) },
                Claim { ordinal: Some(2), quadrant: Some(Quadrant::BottomLeft), proximity: Some(Proximity::Near) },
            ],
        )
        .unwrap();
        let backward = ClaimSet::new(
            Some(2),
            vec![
                Claim { ordinal: Some(2), quadrant: Some(Quadrant::BottomLeft), proximity: Some(Proximity::Near) },
                Claim { ordinal: Some(1), quadrant: Some(Quadrant::TopRight), proximity: Some(Proximity::Far) },
            ],
        )
        .unwrap();
        let truth = [
            truth_instance(1, Quadrant::TopRight, Proximity::Far),
            truth_instance(2, Quadrant::BottomLeft, Proximity::Near),
        ];
        assert_eq!(verify("img", &forward, &truth), verify("img", &backward, &truth));
    }
}
