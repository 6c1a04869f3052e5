//! Twitter-flavoured text normalization.

use std::sync::LazyLock;

use regex::Regex;

/// Placeholder token substituted for URLs.
pub const URL_TOKEN: &str = "<url>";
/// Placeholder token substituted for @-handles.
pub const MENTION_TOKEN: &str = "<mention>";

/// An ordered sequence of normalized tokens; lowercase, no empties.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence(pub Vec<String>);

impl TokenSequence {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

static TOKEN_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?x)
        (?P<url>https?://\S+ | www\.\S+)
      | (?P<mention>@\w+)
      | \#(?P<hashtag>\w+)
      | (?P<word>\w+)
      | (?P<punct>\S)
    ")
    .unwrap()
});

/// Collapse any run of 3+ identical characters to exactly 2 ("sooooo" -> "soo").
fn squeeze_repeats(token: &str) -> String {
    let mut out = String::with_capacity(token.len());
    let mut prev: Option<char> = None;
    let mut run = 0usize;
    for c in token.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run <= 2 {
            out.push(c);
        }
    }
    out
}

/// Normalize raw tweet text into tokens.
///
/// Lowercases, maps URLs to `<url>` and handles to `<mention>`, strips `#`
/// from hashtags keeping the word, splits punctuation into single-character
/// tokens, and squeezes character runs of three or more down to two.
pub fn tokenize(text: &str) -> TokenSequence {
    let lowered = text.to_lowercase();
    let mut tokens = Vec::new();
    for caps in TOKEN_RE.captures_iter(&lowered) {
        if caps.name("url").is_some() {
            tokens.push(URL_TOKEN.to_string());
        } else if caps.name("mention").is_some() {
            tokens.push(MENTION_TOKEN.to_string());
        } else if let Some(m) = caps.name("hashtag").or_else(|| caps.name("word")) {
            tokens.push(squeeze_repeats(m.as_str()));
        } else if let Some(m) = caps.name("punct") {
            tokens.push(m.as_str().to_string());
        }
    }
    TokenSequence(tokens)
}
