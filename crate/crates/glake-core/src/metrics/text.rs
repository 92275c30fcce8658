//! Text-generation metrics computed from first principles: sentence BLEU-4
//! with clipped n-gram precisions, ROUGE-L (LCS F1), and an exact-match
//! METEOR variant with no stemming or synonym resources.
//!
//! The METEOR here ("meteor-lite") aligns unigrams by exact match only, so
//! its absolute scores are not comparable to resource-backed METEOR
//! implementations. A chunk continues while matches are adjacent in the
//! candidate and step by one (either direction) in the reference; chunk
//! count is minimized exhaustively up to 10 matches, greedily beyond, and
//! the mode used is recorded in the per-pair detail.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{from_count, Real};
use crate::Scalar;

/// Normalized word tokens: lowercased, the punctuation set
/// `. , : ; ! ? " ( )` removed, split on whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSequence {
    tokens: Vec<String>,
}

impl TokenSequence {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl From<Vec<String>> for TokenSequence {
    fn from(tokens: Vec<String>) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.chars().any(char::is_whitespace)));
        Self { tokens }
    }
}

pub fn tokenize(text: &str) -> TokenSequence {
    let tokens = text
        .to_lowercase()
        .replace(['.', ',', ':', ';', '!', '?', '"', '(', ')'], "")
        .split_whitespace()
        .map(str::to_owned)
        .collect();
    TokenSequence { tokens }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    None,
    /// Add-one smoothing of numerator and denominator for n >= 2.
    AddOne,
}

/// Clipped n-gram counts for BLEU-4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BleuDetail {
    pub matches: [u64; 4],
    pub totals: [u64; 4],
    pub candidate_len: usize,
    pub reference_len: usize,
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts = HashMap::new();
    if n > 0 && tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window).or_insert(0) += 1;
        }
    }
    counts
}

/// Modified (clipped) n-gram match and total counts for n = 1..4.
pub fn bleu4_detail(candidate: &TokenSequence, reference: &TokenSequence) -> BleuDetail {
    let mut matches = [0u64; 4];
    let mut totals = [0u64; 4];
    for n in 1..=4 {
        let cand = ngram_counts(candidate.tokens(), n);
        let reference = ngram_counts(reference.tokens(), n);
        for (gram, &count) in &cand {
            totals[n - 1] += count;
            matches[n - 1] += count.min(reference.get(gram).copied().unwrap_or(0));
        }
    }
    BleuDetail {
        matches,
        totals,
        candidate_len: candidate.len(),
        reference_len: reference.len(),
    }
}

/// BLEU-4 from counts: geometric mean of the four precisions with uniform
/// weights and brevity penalty `exp(1 - r/c)` when the candidate is
/// shorter. Without smoothing any zero precision (including a candidate
/// shorter than four tokens) zeroes the score; add-one smoothing applies to
/// n >= 2 only.
pub fn bleu4_from_detail<F: Real>(detail: &BleuDetail, smoothing: Smoothing) -> F {
    if detail.candidate_len == 0 {
        return F::zero();
    }
    let mut log_sum = F::zero();
    for n in 0..4 {
        let (num, den) = match smoothing {
            Smoothing::AddOne if n > 0 => (detail.matches[n] + 1, detail.totals[n] + 1),
            _ => (detail.matches[n], detail.totals[n]),
        };
        if num == 0 || den == 0 {
            return F::zero();
        }
        let p = from_count::<F>(num) / from_count::<F>(den);
        log_sum = log_sum + p.ln();
    }
    let quarter = F::one() / F::from_u8(4).unwrap();
    let c = from_count::<F>(detail.candidate_len as u64);
    let r = from_count::<F>(detail.reference_len as u64);
    let bp = if detail.candidate_len < detail.reference_len {
        (F::one() - r / c).exp()
    } else {
        F::one()
    };
    bp * (log_sum * quarter).exp()
}

pub fn bleu4<F: Real>(candidate: &TokenSequence, reference: &TokenSequence, smoothing: Smoothing) -> F {
    bleu4_from_detail(&bleu4_detail(candidate, reference), smoothing)
}

/// Longest common subsequence length by two-row dynamic programming.
pub fn lcs_len(a: &[String], b: &[String]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for ai in a {
        for (j, bj) in b.iter().enumerate() {
            curr[j + 1] = if ai == bj {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// ROUGE-L F1: LCS-based precision/recall with beta = 1. Zero when either
/// side is empty.
pub fn rouge_l<F: Real>(candidate: &TokenSequence, reference: &TokenSequence) -> F {
    rouge_l_from_lcs(
        lcs_len(candidate.tokens(), reference.tokens()),
        candidate.len(),
        reference.len(),
    )
}

fn rouge_l_from_lcs<F: Real>(lcs: usize, candidate_len: usize, reference_len: usize) -> F {
    if lcs == 0 || candidate_len == 0 || reference_len == 0 {
        return F::zero();
    }
    let l = from_count::<F>(lcs as u64);
    let p = l / from_count::<F>(candidate_len as u64);
    let r = l / from_count::<F>(reference_len as u64);
    let two = F::from_u8(2).unwrap();
    two * p * r / (p + r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignmentMode {
    Exhaustive,
    Greedy,
}

/// Unigram alignment summary: match count, minimal chunk count, and how the
/// minimum was searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeteorDetail {
    pub matches: u64,
    pub chunks: u64,
    pub mode: AlignmentMode,
    pub candidate_len: usize,
    pub reference_len: usize,
}

/// Matches as many unigrams as possible (exact match, each position used
/// once), then minimizes the chunk count over all maximum matchings.
pub fn meteor_alignment(candidate: &TokenSequence, reference: &TokenSequence) -> MeteorDetail {
    let cand = candidate.tokens();
    let reference_tokens = reference.tokens();

    let mut token_ids: HashMap<&str, usize> = HashMap::new();
    let mut ref_positions: Vec<Vec<usize>> = Vec::new();
    for (pos, token) in reference_tokens.iter().enumerate() {
        let next_id = ref_positions.len();
        let id = *token_ids.entry(token).or_insert(next_id);
        if id == ref_positions.len() {
            ref_positions.push(Vec::new());
        }
        ref_positions[id].push(pos);
    }

    // Candidate positions whose token occurs in the reference, ascending.
    let matchable: Vec<(usize, usize)> = cand
        .iter()
        .enumerate()
        .filter_map(|(pos, token)| token_ids.get(token.as_str()).map(|&id| (pos, id)))
        .collect();

    let mut cand_count = vec![0usize; ref_positions.len()];
    for &(_, id) in &matchable {
        cand_count[id] += 1;
    }
    let m_max: u64 = cand_count
        .iter()
        .zip(&ref_positions)
        .map(|(&c, r)| c.min(r.len()) as u64)
        .sum();
    if m_max == 0 {
        return MeteorDetail {
            matches: 0,
            chunks: 0,
            mode: AlignmentMode::Exhaustive,
            candidate_len: cand.len(),
            reference_len: reference_tokens.len(),
        };
    }

    let (chunks, mode) = if m_max <= 10 {
        (
            exhaustive_min_chunks(&matchable, &ref_positions, cand_count, m_max),
            AlignmentMode::Exhaustive,
        )
    } else {
        (
            greedy_chunks(&matchable, &ref_positions),
            AlignmentMode::Greedy,
        )
    };
    MeteorDetail {
        matches: m_max,
        chunks,
        mode,
        candidate_len: cand.len(),
        reference_len: reference_tokens.len(),
    }
}

fn chunk_step(prev: Option<(usize, usize)>, cand_pos: usize, ref_pos: usize) -> u64 {
    match prev {
        Some((pc, pr)) if cand_pos == pc + 1 && ref_pos.abs_diff(pr) == 1 => 0,
        _ => 1,
    }
}

fn exhaustive_min_chunks(
    matchable: &[(usize, usize)],
    ref_positions: &[Vec<usize>],
    rem_cand: Vec<usize>,
    m_max: u64,
) -> u64 {
    struct Search<'a> {
        matchable: &'a [(usize, usize)],
        ref_positions: &'a [Vec<usize>],
        ref_used: Vec<Vec<bool>>,
        rem_cand: Vec<usize>,
        rem_ref: Vec<usize>,
        m_max: u64,
        best: u64,
    }

    impl Search<'_> {
        fn potential(&self) -> u64 {
            self.rem_cand
                .iter()
                .zip(&self.rem_ref)
                .map(|(&c, &r)| c.min(r) as u64)
                .sum()
        }

        fn recurse(&mut self, idx: usize, matched: u64, chunks: u64, prev: Option<(usize, usize)>) {
            if chunks >= self.best {
                return;
            }
            if matched == self.m_max {
                self.best = chunks;
                return;
            }
            if idx == self.matchable.len() || matched + self.potential() < self.m_max {
                return;
            }
            let (pos, id) = self.matchable[idx];
            self.rem_cand[id] -= 1;
            for r_idx in 0..self.ref_positions[id].len() {
                if self.ref_used[id][r_idx] {
                    continue;
                }
                let ref_pos = self.ref_positions[id][r_idx];
                self.ref_used[id][r_idx] = true;
                self.rem_ref[id] -= 1;
                self.recurse(
                    idx + 1,
                    matched + 1,
                    chunks + chunk_step(prev, pos, ref_pos),
                    Some((pos, ref_pos)),
                );
                self.rem_ref[id] += 1;
                self.ref_used[id][r_idx] = false;
            }
            // Leave this candidate position unmatched.
            self.recurse(idx + 1, matched, chunks, prev);
            self.rem_cand[id] += 1;
        }
    }

    let mut search = Search {
        matchable,
        ref_positions,
        ref_used: ref_positions.iter().map(|p| vec![false; p.len()]).collect(),
        rem_ref: ref_positions.iter().map(Vec::len).collect(),
        rem_cand,
        m_max,
        best: u64::MAX,
    };
    search.recurse(0, 0, 0, None);
    search.best
}

fn greedy_chunks(matchable: &[(usize, usize)], ref_positions: &[Vec<usize>]) -> u64 {
    use std::collections::BTreeSet;
    let mut available: Vec<BTreeSet<usize>> = ref_positions
        .iter()
        .map(|p| p.iter().copied().collect())
        .collect();
    let mut chunks = 0u64;
    let mut prev: Option<(usize, usize)> = None;
    for &(pos, id) in matchable {
        if available[id].is_empty() {
            continue;
        }
        let ref_pos = match prev {
            Some((pc, pr)) if pos == pc + 1 => {
                if available[id].contains(&(pr + 1)) {
                    pr + 1
                } else if pr > 0 && available[id].contains(&(pr - 1)) {
                    pr - 1
                } else {
                    *available[id].iter().next().expect("nonempty")
                }
            }
            _ => *available[id].iter().next().expect("nonempty"),
        };
        available[id].remove(&ref_pos);
        chunks += chunk_step(prev, pos, ref_pos);
        prev = Some((pos, ref_pos));
    }
    chunks
}

/// METEOR-lite score: `F_mean * (1 - penalty)` with
/// `F_mean = 10PR / (R + 9P)` and `penalty = 0.5 * (chunks/matches)^3`.
pub fn meteor_from_detail<F: Real>(detail: &MeteorDetail) -> F {
    if detail.matches == 0 {
        return F::zero();
    }
    let m = from_count::<F>(detail.matches);
    let p = m / from_count::<F>(detail.candidate_len as u64);
    let r = m / from_count::<F>(detail.reference_len as u64);
    let ten = F::from_u8(10).unwrap();
    let nine = F::from_u8(9).unwrap();
    let f_mean = ten * p * r / (r + nine * p);
    let frag = from_count::<F>(detail.chunks) / m;
    let half = F::one() / F::from_u8(2).unwrap();
    let penalty = half * frag * frag * frag;
    f_mean * (F::one() - penalty)
}

pub fn meteor_lite<F: Real>(candidate: &TokenSequence, reference: &TokenSequence) -> F {
    meteor_from_detail(&meteor_alignment(candidate, reference))
}

/// All three metric scores plus intermediate counts for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairScore<F = Scalar> {
    pub bleu4: F,
    pub rouge_l: F,
    pub meteor: F,
    pub bleu: BleuDetail,
    pub lcs: u64,
    pub meteor_detail: MeteorDetail,
}

pub fn score_texts<F: Real>(candidate: &str, reference: &str, smoothing: Smoothing) -> PairScore<F> {
    let cand = tokenize(candidate);
    let reference = tokenize(reference);
    let bleu = bleu4_detail(&cand, &reference);
    let lcs = lcs_len(cand.tokens(), reference.tokens());
    let meteor_detail = meteor_alignment(&cand, &reference);
    PairScore {
        bleu4: bleu4_from_detail(&bleu, smoothing),
        rouge_l: rouge_l_from_lcs(lcs, cand.len(), reference.len()),
        meteor: meteor_from_detail(&meteor_detail),
        bleu,
        lcs: lcs as u64,
        meteor_detail,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextOptions {
    pub smoothing: Smoothing,
    /// Additionally report pooled corpus-level BLEU-4.
    pub corpus_bleu: bool,
}

impl Default for TextOptions {
    fn default() -> Self {
        Self {
            smoothing: Smoothing::None,
            corpus_bleu: false,
        }
    }
}

/// Macro-averaged corpus scores with per-pair details.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusScore<F = Scalar> {
    pub bleu4: F,
    pub rouge_l: F,
    pub meteor: F,
    pub corpus_bleu: Option<F>,
    pub pairs: Vec<PairScore<F>>,
}

/// Scores each (candidate, reference) pair and macro-averages. The pooled
/// corpus BLEU, when requested, sums clipped counts and lengths over all
/// pairs before applying the BLEU formula once.
pub fn evaluate_corpus<F: Real>(pairs: &[(String, String)], options: TextOptions) -> Result<CorpusScore<F>> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("no text pairs to evaluate".into()));
    }
    let scored: Vec<PairScore<F>> = pairs
        .par_iter()
        .map(|(candidate, reference)| score_texts(candidate, reference, options.smoothing))
        .collect();
    let n = from_count::<F>(scored.len() as u64);
    let mean = |f: &dyn Fn(&PairScore<F>) -> F| scored.iter().map(f).fold(F::zero(), |a, b| a + b) / n;
    let corpus_bleu = options.corpus_bleu.then(|| {
        let mut pooled = BleuDetail {
            matches: [0; 4],
            totals: [0; 4],
            candidate_len: 0,
            reference_len: 0,
        };
        for pair in &scored {
            for n in 0..4 {
                pooled.matches[n] += pair.bleu.matches[n];
                pooled.totals[n] += pair.bleu.totals[n];
            }
            pooled.candidate_len += pair.bleu.candidate_len;
            pooled.reference_len += pair.bleu.reference_len;
        }
        bleu4_from_detail(&pooled, options.smoothing)
    });
    Ok(CorpusScore {
        bleu4: mean(&|p| p.bleu4),
        rouge_l: mean(&|p| p.rouge_l),
        meteor: mean(&|p| p.meteor),
        corpus_bleu,
        pairs: scored,
    })
}
