//! Answer and question rendering.
//!
//! Branch selection is a pure function of the instance count: one lake uses
//! a `single` template, two use `dual`, three or more use `multi` plus one
//! independently sampled `per_lake` sentence per lake, joined in ordinal
//! order with single spaces.

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{describe_position, LakeInstance};
use crate::qa::templates::{QaTemplate, TemplateFamily, TemplateSet};

/// English ordinal: 1 -> "1st", 2 -> "2nd", 11 -> "11th", 22 -> "22nd".
pub fn ordinal(n: u32) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Single,
    Dual,
    Multi,
}

impl Branch {
    pub fn for_count(count: usize) -> Self {
        match count {
            0 | 1 => Branch::Single,
            2 => Branch::Dual,
            _ => Branch::Multi,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Single => "single",
            Branch::Dual => "dual",
            Branch::Multi => "multi",
        }
    }
}

/// A fully rendered record body: the question and answer share one sampled
/// template pair, identified by `template_id` (`family/branch/index`).
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedPair {
    pub question: String,
    pub answer: String,
    pub template_id: String,
}

fn branch_templates<'a>(templates: &'a TemplateSet, count: usize) -> Result<(Branch, &'a [QaTemplate])> {
    if count == 0 {
        return Err(Error::EmptyInput("cannot render a record for zero lakes".into()));
    }
    if templates.family == TemplateFamily::PositionOnly && count != 1 {
        return Err(Error::BranchMismatch {
            family: templates.family.to_string(),
            branch: "single",
            count,
        });
    }
    let branch = Branch::for_count(count);
    let pool: &[QaTemplate] = match branch {
        Branch::Single => &templates.single,
        Branch::Dual => &templates.dual,
        Branch::Multi => &templates.multi,
    };
    if pool.is_empty() {
        return Err(Error::BranchMismatch {
            family: templates.family.to_string(),
            branch: branch.as_str(),
            count,
        });
    }
    Ok((branch, pool))
}

fn template_id(templates: &TemplateSet, branch: Branch, index: usize) -> String {
    format!("{}/{}/{}", templates.family, branch.as_str(), index)
}

/// Fills an answer template for the given instances. Which placeholders are
/// substituted follows from the instance count; `per_lake` and `rng` are
/// only consulted for three or more lakes.
pub fn fill_answer(
    template: &str,
    instances: &[LakeInstance],
    per_lake: &[String],
    rng: &mut impl Rng,
) -> Result<String> {
    let answer = match instances.len() {
        0 => return Err(Error::EmptyInput("cannot render an answer for zero lakes".into())),
        1 => template.replace(
            "{position_description}",
            &describe_position(&instances[0].position),
        ),
        2 => template
            .replace(
                "{position_description[0]}",
                &describe_position(&instances[0].position),
            )
            .replace(
                "{position_description[1]}",
                &describe_position(&instances[1].position),
            ),
        n => {
            if per_lake.is_empty() {
                return Err(Error::BranchMismatch {
                    family: "instance_aware".into(),
                    branch: "per_lake",
                    count: n,
                });
            }
            let sentences: Vec<String> = instances
                .iter()
                .map(|inst| {
                    per_lake[rng.gen_range(0..per_lake.len())]
                        .replace("{number_position}", &ordinal(inst.ordinal))
                        .replace("{position_description}", &describe_position(&inst.position))
                })
                .collect();
            template
                .replace("{total_number}", &n.to_string())
                .replace("{all_glacial_sentences}", &sentences.join(" "))
        }
    };
    if answer.contains(['{', '}']) {
        return Err(Error::TemplateSchema(format!(
            "unsubstituted placeholder left in rendered answer: {answer:?}"
        )));
    }
    Ok(answer)
}

/// Samples an answer template for the branch matching `instances.len()` and
/// fills it. Returns the text and its template id.
pub fn render_answer(
    instances: &[LakeInstance],
    templates: &TemplateSet,
    rng: &mut impl Rng,
) -> Result<(String, String)> {
    let (branch, pool) = branch_templates(templates, instances.len())?;
    let index = rng.gen_range(0..pool.len());
    let answer = fill_answer(&pool[index].a, instances, &templates.per_lake, rng)?;
    Ok((answer, template_id(templates, branch, index)))
}

/// Samples a question template for the branch matching `count`. Questions
/// carry no placeholders, so rendering is selection only.
pub fn render_question(
    count: usize,
    templates: &TemplateSet,
    rng: &mut impl Rng,
) -> Result<(String, String)> {
    let (branch, pool) = branch_templates(templates, count)?;
    let index = rng.gen_range(0..pool.len());
    Ok((pool[index].q.clone(), template_id(templates, branch, index)))
}

/// Samples one template pair and renders both sides from it, so a record's
/// question and answer are two halves of the same template.
pub fn render_pair(
    instances: &[LakeInstance],
    templates: &TemplateSet,
    rng: &mut impl Rng,
) -> Result<RenderedPair> {
    let (branch, pool) = branch_templates(templates, instances.len())?;
    let index = rng.gen_range(0..pool.len());
    let answer = fill_answer(&pool[index].a, instances, &templates.per_lake, rng)?;
    Ok(RenderedPair {
        question: pool[index].q.clone(),
        answer,
        template_id: template_id(templates, branch, index),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{BoundingBox, CenterPoint, PositionLabel, Proximity, Quadrant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn instance(ordinal: u32, quadrant: Quadrant, proximity: Proximity) -> LakeInstance {
        LakeInstance {
            ordinal,
            bbox: BoundingBox { x: 0, y: 0, w: 2, h: 2 },
            center: CenterPoint { cx: 1.0, cy: 1.0 },
            position: PositionLabel { quadrant, proximity },
            area: 4,
        }
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn ordinal_basic_suffixes() {
        assert_eq!(ordinal(1), "1st");
        assert_eq!(ordinal(2), "2nd");
        assert_eq!(ordinal(3), "3rd");
        assert_eq!(ordinal(4), "4th");
    }

    #[test]
    fn ordinal_teen_exceptions() {
        assert_eq!(ordinal(11), "11th");
        assert_eq!(ordinal(12), "12th");
        assert_eq!(ordinal(13), "13th");
        assert_eq!(ordinal(111), "111th");
    }

    #[test]
    fn ordinal_follows_last_digit() {
        assert_eq!(ordinal(21), "21st");
        assert_eq!(ordinal(22), "22nd");
        assert_eq!(ordinal(33), "33rd");
        assert_eq!(ordinal(101), "101st");
    }

    #[test]
    fn single_answer_substitutes_position() {
        let one = [instance(1, Quadrant::TopLeft, Proximity::Near)];
        let got = fill_answer(
            "The glacial lake can be observed in the {position_description} area of the image.",
            &one,
            &[],
            &mut rng(),
        )
        .unwrap();
        assert_eq!(
            got,
            "The glacial lake can be observed in the top left, near the center area of the image."
        );
    }

    #[test]
    fn dual_answer_substitutes_both_positions() {
        let two = [
            instance(1, Quadrant::TopRight, Proximity::Far),
            instance(2, Quadrant::BottomLeft, Proximity::Near),
        ];
        let got = fill_answer(
            "There are two glacial lakes: the 1st is in the {position_description[0]}, and the 2nd is in the {position_description[1]}.",
            &two,
            &[],
            &mut rng(),
        )
        .unwrap();
        assert_eq!(
            got,
            "There are two glacial lakes: the 1st is in the top right, far from the center, and the 2nd is in the bottom left, near the center."
        );
    }

    #[test]
    fn multi_answer_counts_then_describes_in_ordinal_order() {
        let three = [
            instance(1, Quadrant::TopLeft, Proximity::Near),
            instance(2, Quadrant::BottomRight, Proximity::Far),
            instance(3, Quadrant::TopRight, Proximity::Near),
        ];
        let per_lake = vec!["The {number_position} glacial lake lies in the {position_description}.".to_owned()];
        let got = fill_answer(
            "There are {total_number} glacial lakes in the image. {all_glacial_sentences}",
            &three,
            &per_lake,
            &mut rng(),
        )
        .unwrap();
        assert_eq!(
            got,
            "There are 3 glacial lakes in the image. \
             The 1st glacial lake lies in the top left, near the center. \
             The 2nd glacial lake lies in the bottom right, far from the center. \
             The 3rd glacial lake lies in the top right, near the center."
        );
    }

    #[test]
    fn rendered_text_has_no_braces() {
        let four: Vec<LakeInstance> = (1..=4)
            .map(|i| instance(i, Quadrant::BottomLeft, Proximity::Far))
            .collect();
        let per_lake = vec![
            "The {number_position} glacial lake lies in the {position_description}.".to_owned(),
            "The {number_position} glacial lake can be seen at {position_description}.".to_owned(),
        ];
        let got = fill_answer(
            "Observed glacial lakes: {total_number}. {all_glacial_sentences}",
            &four,
            &per_lake,
            &mut rng(),
        )
        .unwrap();
        assert!(!got.contains('{') && !got.contains('}'), "{got}");
        assert!(got.starts_with("Observed glacial lakes: 4."));
    }

    #[test]
    fn position_only_family_rejects_multi_lake() {
        let set = TemplateSet {
            family: TemplateFamily::PositionOnly,
            version: "t".into(),
            single: vec![QaTemplate {
                q: "Where?".into(),
                a: "In the {position_description}.".into(),
            }],
            dual: vec![],
            multi: vec![],
            per_lake: vec![],
        };
        let two = [
            instance(1, Quadrant::TopLeft, Proximity::Near),
            instance(2, Quadrant::TopRight, Proximity::Near),
        ];
        assert!(render_answer(&two, &set, &mut rng()).is_err());
        assert!(render_question(2, &set, &mut rng()).is_err());
    }

    #[test]
    fn template_ids_name_family_branch_index() {
        let set = TemplateSet {
            family: TemplateFamily::PositionOnly,
            version: "t".into(),
            single: vec![QaTemplate {
                q: "Where is the glacial lake?".into(),
                a: "In the {position_description}.".into(),
            }],
            dual: vec![],
            multi: vec![],
            per_lake: vec![],
        };
        let one = [instance(1, Quadrant::Center, Proximity::Near)];
        let pair = render_pair(&one, &set, &mut rng()).unwrap();
        assert_eq!(pair.template_id, "position_only/single/0");
        assert_eq!(pair.question, "Where is the glacial lake?");
        assert_eq!(pair.answer, "In the center.");
    }
}
