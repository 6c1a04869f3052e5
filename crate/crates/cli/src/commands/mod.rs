pub mod bots;
pub mod correlate;
pub mod crosstab;
pub mod ingest;
pub mod mentions;
pub mod pipeline;
pub mod sentiment;
pub mod stance;
pub mod stats;
pub mod topics;

use stancekit::corpus::TweetRecord;
use stancekit::stance::rules::HashtagLexicon;

use crate::artifacts;
use crate::context::Ctx;
use crate::CliError;

/// The normalized corpus a previous `ingest` wrote.
pub(crate) fn load_corpus_artifact(ctx: &Ctx) -> Result<Vec<TweetRecord>, CliError> {
    let path = ctx.require("corpus.jsonl", "ingest")?;
    artifacts::read_corpus_artifact(&path)
}

/// The configured hashtag lexicon, or the bundled one.
pub(crate) fn load_lexicon(ctx: &Ctx) -> Result<HashtagLexicon, CliError> {
    match &ctx.config.lexicon {
        Some(path) => Ok(HashtagLexicon::from_path(path)?),
        None => Ok(HashtagLexicon::bundled()),
    }
}
