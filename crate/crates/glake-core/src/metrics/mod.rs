//! Evaluation metrics: segmentation overlap and text generation.

pub mod seg;
pub mod text;

pub use seg::{aggregate, aggregate_micro, score_pair, SegScore};
pub use text::{
    bleu4, evaluate_corpus, lcs_len, meteor_lite, rouge_l, score_texts, tokenize, AlignmentMode,
    CorpusScore, PairScore, Smoothing, TextOptions, TokenSequence,
};
