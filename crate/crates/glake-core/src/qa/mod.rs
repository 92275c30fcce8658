//! Template storage, answer/question rendering, and dataset assembly.

pub mod dataset;
pub mod render;
pub mod templates;

pub use dataset::{
    enumerate_masks, generate_dataset, read_dataset, records_to_jsonl, write_dataset,
    DatasetManifest, GenerationConfig, QaRecord, SplitSummary,
};
pub use render::{fill_answer, ordinal, render_answer, render_pair, render_question, Branch, RenderedPair};
pub use templates::{load_templates, QaTemplate, TemplateFamily, TemplateSet, ALLOWED_PLACEHOLDERS};
