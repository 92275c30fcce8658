//! Question–answer template sets and their schema validation.
//!
//! Template files are JSON with the shape
//! `{family, version, single: [{q, a}], dual: [{q, a}], multi: [{q, a}],
//! per_lake: [string]}`. Placeholders are drawn from a closed set; anything
//! else is a schema error that names the template index and the offending
//! placeholder.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The placeholders templates may use, across all branches.
pub const ALLOWED_PLACEHOLDERS: [&str; 6] = [
    "position_description",
    "position_description[0]",
    "position_description[1]",
    "total_number",
    "all_glacial_sentences",
    "number_position",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateFamily {
    /// Single-lake location templates; asks where the lake is.
    PositionOnly,
    /// Count-and-locate templates with per-lake descriptions.
    InstanceAware,
}

impl fmt::Display for TemplateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TemplateFamily::PositionOnly => "position_only",
            TemplateFamily::InstanceAware => "instance_aware",
        })
    }
}

/// One question/answer template pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaTemplate {
    pub q: String,
    pub a: String,
}

/// A validated template family: `single` covers N=1, `dual` N=2, `multi`
/// N>=3 (count sentence), `per_lake` the sentences filled into
/// `{all_glacial_sentences}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateSet {
    pub family: TemplateFamily,
    pub version: String,
    pub single: Vec<QaTemplate>,
    pub dual: Vec<QaTemplate>,
    pub multi: Vec<QaTemplate>,
    pub per_lake: Vec<String>,
}

impl TemplateSet {
    pub fn from_json(json: &str) -> Result<Self> {
        let set: TemplateSet = serde_json::from_str(json)
            .map_err(|e| Error::TemplateSchema(format!("invalid template JSON: {e}")))?;
        set.validate()?;
        Ok(set)
    }

    /// Checks branch completeness and placeholder discipline.
    pub fn validate(&self) -> Result<()> {
        if self.single.is_empty() {
            return Err(Error::TemplateSchema("single branch is empty".into()));
        }
        if self.family == TemplateFamily::InstanceAware {
            for (name, empty) in [
                ("dual", self.dual.is_empty()),
                ("multi", self.multi.is_empty()),
                ("per_lake", self.per_lake.is_empty()),
            ] {
                if empty {
                    return Err(Error::TemplateSchema(format!(
                        "{name} branch is empty but family is instance_aware"
                    )));
                }
            }
        }
        for (branch, templates, allowed) in [
            ("single", &self.single, &["position_description"][..]),
            (
                "dual",
                &self.dual,
                &["position_description[0]", "position_description[1]"][..],
            ),
            (
                "multi",
                &self.multi,
                &["total_number", "all_glacial_sentences"][..],
            ),
        ] {
            for (index, template) in templates.iter().enumerate() {
                check_placeholders(branch, index, &template.q, &[])?;
                check_placeholders(branch, index, &template.a, allowed)?;
            }
        }
        for (index, sentence) in self.per_lake.iter().enumerate() {
            check_placeholders(
                "per_lake",
                index,
                sentence,
                &["number_position", "position_description"],
            )?;
        }
        Ok(())
    }

    /// Canonical serialized form; digested into manifests so records can be
    /// traced back to the exact templates that produced them.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("template set serializes")
    }
}

/// Loads and validates a template set from a JSON file.
pub fn load_templates(path: &Path) -> Result<TemplateSet> {
    let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    TemplateSet::from_json(&json)
}

fn check_placeholders(branch: &'static str, index: usize, text: &str, allowed: &[&str]) -> Result<()> {
    for placeholder in placeholders_in(text) {
        let placeholder = placeholder.map_err(|message| Error::Template {
            branch,
            index,
            message,
        })?;
        if !ALLOWED_PLACEHOLDERS.contains(&placeholder) {
            return Err(Error::Template {
                branch,
                index,
                message: format!("unknown placeholder {{{placeholder}}}"),
            });
        }
        if !allowed.contains(&placeholder) {
            return Err(Error::Template {
                branch,
                index,
                message: format!(
                    "placeholder {{{placeholder}}} not allowed here (expected one of: {})",
                    if allowed.is_empty() {
                        "none".to_owned()
                    } else {
                        allowed.join(", ")
                    }
                ),
            });
        }
    }
    Ok(())
}

/// Iterates `{...}` spans; an unbalanced brace yields an error message.
fn placeholders_in(text: &str) -> impl Iterator<Item = std::result::Result<&str, String>> {
    let mut rest = text;
    std::iter::from_fn(move || {
        let open = rest.find('{')?;
        let after = &rest[open + 1..];
        match after.find(['{', '}']) {
            Some(i) if after.as_bytes()[i] == b'}' => {
                let name = &after[..i];
                rest = &after[i + 1..];
                Some(Ok(name))
            }
            _ => {
                rest = "";
                Some(Err("unbalanced '{' in template".into()))
            }
        }
    })
}
