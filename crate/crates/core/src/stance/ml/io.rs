//! Model persistence and labeled-data loading.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::stance::ml::svm::LinearStanceModel;
use crate::stance::StanceLabel;

/// Format version written by [`save_model`].
pub const MODEL_VERSION: u32 = 1;

#[derive(serde::Serialize)]
struct ModelFileRef<'a> {
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a std::collections::BTreeMap<String, String>>,
    #[serde(flatten)]
    model: &'a LinearStanceModel,
}

/// Write a model as versioned JSON.
pub fn save_model(model: &LinearStanceModel, path: impl AsRef<Path>) -> Result<()> {
    save_model_with_meta(model, path, None)
}

/// [`save_model`] with run metadata recorded in the file. Readers ignore
/// the field.
pub fn save_model_with_meta(
    model: &LinearStanceModel,
    path: impl AsRef<Path>,
    meta: Option<&std::collections::BTreeMap<String, String>>,
) -> Result<()> {
    let file = ModelFileRef { version: MODEL_VERSION, meta, model };
    let mut writer = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut writer, &file)?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

/// Read a model written by [`save_model`]. The round trip preserves weights
/// bit-exactly.
pub fn load_model(path: impl AsRef<Path>) -> Result<LinearStanceModel> {
    load_model_from(BufReader::new(File::open(path)?))
}

pub fn load_model_from(mut reader: impl Read) -> Result<LinearStanceModel> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::CorruptModel(e.to_string()))?;
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::CorruptModel("missing version field".into()))?;
    if version != MODEL_VERSION as u64 {
        return Err(Error::ModelVersionMismatch {
            found: version as u32,
            supported: MODEL_VERSION,
        });
    }
    let mut model: LinearStanceModel =
        serde_json::from_value(value).map_err(|e| Error::CorruptModel(e.to_string()))?;
    model.vocabulary.rebuild_index();
    for (c, w) in model.weights.iter().enumerate() {
        if w.len() != model.vocabulary.len() {
            return Err(Error::CorruptModel(format!(
                "class {c} weight vector has length {}, vocabulary has {}",
                w.len(),
                model.vocabulary.len()
            )));
        }
    }
    Ok(model)
}

/// One row of a labeled training file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTweet {
    pub tweet_id: String,
    pub text: String,
    pub label: StanceLabel,
}

#[derive(Deserialize)]
struct LabeledRow {
    tweet_id: String,
    text: String,
    label: String,
}

/// Read a labeled CSV `tweet_id,text,label` with label in
/// {remain, leave, none}. Lines starting with `#` are skipped.
pub fn load_labeled_csv(path: impl AsRef<Path>) -> Result<Vec<LabeledTweet>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path.as_ref())?;
    let mut rows = Vec::new();
    for (idx, row) in reader.deserialize::<LabeledRow>().enumerate() {
        let row = row?;
        let label = match row.label.as_str() {
            "remain" => StanceLabel::ProRemain,
            "leave" => StanceLabel::ProLeave,
            "none" => StanceLabel::NonPolarized,
            other => {
                return Err(Error::MalformedRecord {
                    line_no: idx as u64 + 2,
                    reason: format!("unknown label {other:?} (expected remain, leave, or none)"),
                })
            }
        };
        rows.push(LabeledTweet { tweet_id: row.tweet_id, text: row.text, label });
    }
    Ok(rows)
}
