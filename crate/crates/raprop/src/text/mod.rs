//! Text substrate: tokenization, stemming, stop words, coarse POS
//! tagging, URL chunking and residual-content extraction. Everything
//! here is deterministic and total; similarity and agreement build on
//! these primitives.

mod lexicon;
pub mod porter;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::corpus::TweetRecord;

pub use lexicon::{Lexicon, LexiconError, StopWords};

/// Coarse word classes. URL, hashtag and mention come from token shape;
/// the rest from the lexicon and tagger heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosClass {
    Url,
    Hashtag,
    Mention,
    ProperNoun,
    CommonNoun,
    Adjective,
    Adverb,
    Numeral,
    Pronoun,
    Verb,
    Interjection,
    Preposition,
    Existential,
    Determiner,
    Conjunction,
    Punctuation,
    Other,
}

impl PosClass {
    pub const ALL: [PosClass; 17] = [
        PosClass::Url,
        PosClass::Hashtag,
        PosClass::Mention,
        PosClass::ProperNoun,
        PosClass::CommonNoun,
        PosClass::Adjective,
        PosClass::Adverb,
        PosClass::Numeral,
        PosClass::Pronoun,
        PosClass::Verb,
        PosClass::Interjection,
        PosClass::Preposition,
        PosClass::Existential,
        PosClass::Determiner,
        PosClass::Conjunction,
        PosClass::Punctuation,
        PosClass::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PosClass::Url => "Url",
            PosClass::Hashtag => "Hashtag",
            PosClass::Mention => "Mention",
            PosClass::ProperNoun => "ProperNoun",
            PosClass::CommonNoun => "CommonNoun",
            PosClass::Adjective => "Adjective",
            PosClass::Adverb => "Adverb",
            PosClass::Numeral => "Numeral",
            PosClass::Pronoun => "Pronoun",
            PosClass::Verb => "Verb",
            PosClass::Interjection => "Interjection",
            PosClass::Preposition => "Preposition",
            PosClass::Existential => "Existential",
            PosClass::Determiner => "Determiner",
            PosClass::Conjunction => "Conjunction",
            PosClass::Punctuation => "Punctuation",
            PosClass::Other => "Other",
        }
    }

    /// Noun classes drive query expansion and the non-mediator boost.
    pub fn is_noun(self) -> bool {
        matches!(self, PosClass::ProperNoun | PosClass::CommonNoun)
    }
}

impl fmt::Display for PosClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PosClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosClass::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown POS class {s:?}"))
    }
}

/// One token of a tweet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Lowercased surface form (URLs keep their original casing).
    pub surface: String,
    /// Stemmed form; the unit of matching everywhere downstream.
    pub stem: String,
    pub pos: PosClass,
    /// 0-based index in the tweet's token sequence.
    pub position: usize,
    pub is_stop: bool,
    /// Original surface started with an uppercase letter; feeds the
    /// capitalized-mid-sentence proper-noun heuristic.
    pub titlecase: bool,
}

/// A tweet after tokenization, with the agreement-ready token sub-list
/// (punctuation/determiners/conjunctions/stop words removed, URLs
/// replaced by their chunks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedTweet {
    pub tweet_id: u64,
    pub tokens: Vec<Token>,
    pub agreement_tokens: Vec<Token>,
}

impl TokenizedTweet {
    /// Count of non-punctuation tokens, the "term" count of the tweet.
    pub fn term_count(&self) -> usize {
        self.tokens
            .iter()
            .filter(|t| t.pos != PosClass::Punctuation)
            .count()
    }

    /// True when any token or URL chunk carries one of the given stems.
    pub fn matches_any_stem(&self, stems: &HashSet<String>) -> bool {
        self.tokens.iter().any(|t| stems.contains(&t.stem))
            || self
                .agreement_tokens
                .iter()
                .any(|t| stems.contains(&t.stem))
    }
}

/// Tokenizer + tagger over a lexicon and stop-word list.
#[derive(Debug, Clone)]
pub struct Analyzer {
    lexicon: Lexicon,
    stopwords: StopWords,
}

impl Default for Analyzer {
    fn default() -> Self {
        Self::bundled()
    }
}

impl Analyzer {
    pub fn bundled() -> Self {
        Self {
            lexicon: Lexicon::bundled(),
            stopwords: StopWords::bundled(),
        }
    }

    pub fn new(lexicon: Lexicon, stopwords: StopWords) -> Self {
        Self { lexicon, stopwords }
    }

    /// Split, classify and stem a text. Total: never fails, empty input
    /// gives an empty token list.
    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let mut tokens: Vec<Token> = text.split_whitespace().filter_map(raw_token).collect();
        for (i, tok) in tokens.iter_mut().enumerate() {
            tok.position = i;
            tok.is_stop = tok.pos != PosClass::Url && self.stopwords.contains(&tok.surface);
        }
        self.tag_pos(&mut tokens);
        tokens
    }

    /// Assign classes to tokens the shape rules left as `Other`:
    /// digit-bearing tokens are numerals, known words come from the
    /// lexicon, unknown capitalized words mid-sentence are proper nouns
    /// and everything else defaults to a common noun.
    pub fn tag_pos(&self, tokens: &mut [Token]) {
        for tok in tokens.iter_mut() {
            if tok.pos != PosClass::Other {
                continue;
            }
            tok.pos = if tok.surface.chars().any(|c| c.is_ascii_digit()) {
                PosClass::Numeral
            } else if let Some(class) = self.lexicon.lookup(&tok.surface) {
                class
            } else if tok.titlecase && tok.position > 0 {
                PosClass::ProperNoun
            } else {
                PosClass::CommonNoun
            };
        }
    }

    /// Split a URL into content chunks: scheme dropped, the rest cut on
    /// `/ . ? = & - _ :`, chunks lowercased, stemmed and tagged as
    /// common nouns. Positions are sequential from 0; callers re-base.
    pub fn url_chunks(&self, url: &str) -> Vec<Token> {
        let rest = url
            .strip_prefix("http://")
            .or_else(|| url.strip_prefix("https://"))
            .or_else(|| url.strip_prefix("HTTP://"))
            .or_else(|| url.strip_prefix("HTTPS://"))
            .unwrap_or(url);
        rest.split(['/', '.', '?', '=', '&', '-', '_', ':'])
            .filter(|c| !c.is_empty())
            .enumerate()
            .map(|(i, chunk)| {
                let surface = chunk.to_lowercase();
                let stem = porter::stem(&surface);
                let is_stop = self.stopwords.contains(&surface);
                Token {
                    surface,
                    stem,
                    pos: PosClass::CommonNoun,
                    position: i,
                    is_stop,
                    titlecase: false,
                }
            })
            .collect()
    }

    /// The agreement view of a token list: punctuation, determiners,
    /// conjunctions and stop words removed; URL tokens replaced by their
    /// chunks, appended at the end with positions after the last token.
    pub fn strip_for_agreement(&self, tokens: &[Token]) -> Vec<Token> {
        let mut kept: Vec<Token> = Vec::with_capacity(tokens.len());
        let mut chunks: Vec<Token> = Vec::new();
        let mut next_position = tokens.iter().map(|t| t.position + 1).max().unwrap_or(0);
        for tok in tokens {
            match tok.pos {
                PosClass::Url => {
                    for mut chunk in self.url_chunks(&tok.surface) {
                        if chunk.is_stop {
                            continue;
                        }
                        chunk.position = next_position;
                        next_position += 1;
                        chunks.push(chunk);
                    }
                }
                PosClass::Punctuation | PosClass::Determiner | PosClass::Conjunction => {}
                _ if tok.is_stop => {}
                _ => kept.push(tok.clone()),
            }
        }
        kept.extend(chunks);
        kept
    }

    /// Full per-tweet pipeline: tokenize the text and derive the
    /// agreement token list.
    pub fn tokenize_tweet(&self, record: &TweetRecord) -> TokenizedTweet {
        let tokens = self.tokenize(&record.text);
        let agreement_tokens = self.strip_for_agreement(&tokens);
        TokenizedTweet {
            tweet_id: record.tweet_id,
            tokens,
            agreement_tokens,
        }
    }

    /// Deduplicated query stems in first-occurrence order: stop words
    /// and punctuation dropped, everything else stemmed.
    pub fn query_stems(&self, text: &str) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut stems = Vec::new();
        for tok in self.tokenize(text) {
            if tok.is_stop || tok.pos == PosClass::Punctuation {
                continue;
            }
            if seen.insert(tok.stem.clone()) {
                stems.push(tok.stem);
            }
        }
        stems
    }
}

/// Remove every token whose stem is in the query; the residual content
/// of a tweet.
pub fn residual<'a>(tokens: &'a [Token], query_stems: &HashSet<String>) -> Vec<&'a Token> {
    tokens
        .iter()
        .filter(|t| !query_stems.contains(&t.stem))
        .collect()
}

fn raw_token(piece: &str) -> Option<Token> {
    let lower_piece = piece.to_lowercase();
    if lower_piece.starts_with("http://") || lower_piece.starts_with("https://") {
        let trimmed = piece.trim_end_matches(['.', ',', ';', ':', '!', '?', ')', '"', '\'']);
        if trimmed.len() <= "http://".len() {
            return None;
        }
        return Some(Token {
            surface: trimmed.to_string(),
            stem: trimmed.to_lowercase(),
            pos: PosClass::Url,
            position: 0,
            is_stop: false,
            titlecase: false,
        });
    }

    let core = piece
        .trim_start_matches(|c: char| !c.is_alphanumeric() && c != '#' && c != '@')
        .trim_end_matches(|c: char| !c.is_alphanumeric());
    if core.is_empty() {
        // Pure punctuation keeps its own token so positions stay faithful.
        return Some(Token {
            surface: piece.to_string(),
            stem: piece.to_string(),
            pos: PosClass::Punctuation,
            position: 0,
            is_stop: false,
            titlecase: false,
        });
    }

    if let Some(body) = core.strip_prefix('#') {
        if !body.is_empty() {
            let body = body.to_lowercase();
            return Some(Token {
                surface: format!("#{body}"),
                stem: porter::stem(&body),
                pos: PosClass::Hashtag,
                position: 0,
                is_stop: false,
                titlecase: false,
            });
        }
    }
    if let Some(body) = core.strip_prefix('@') {
        if !body.is_empty() {
            let body = body.to_lowercase();
            return Some(Token {
                surface: format!("@{body}"),
                stem: body,
                pos: PosClass::Mention,
                position: 0,
                is_stop: false,
                titlecase: false,
            });
        }
    }

    let titlecase = core.chars().next().is_some_and(|c| c.is_uppercase());
    let surface = core.to_lowercase();
    let stem = porter::stem(&surface);
    Some(Token {
        surface,
        stem,
        pos: PosClass::Other,
        position: 0,
        is_stop: false,
        titlecase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analyzer() -> Analyzer {
        Analyzer::bundled()
    }

    #[test]
    fn empty_text_gives_no_tokens() {
        assert!(analyzer().tokenize("").is_empty());
    }

    #[test]
    fn shape_classes_from_fixture() {
        let toks = analyzer().tokenize("#BBC cuts http://b.bc/x");
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[0].pos, PosClass::Hashtag);
        assert_eq!(toks[0].stem, "bbc");
        assert_eq!(toks[1].pos, PosClass::Verb);
        assert_eq!(toks[2].pos, PosClass::Url);
        assert_eq!(toks[2].surface, "http://b.bc/x");
        assert_eq!(
            toks.iter().map(|t| t.position).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn stemming_merges_inflections() {
        let toks = analyzer().tokenize("Running runs");
        assert_eq!(toks[0].stem, "run");
        assert_eq!(toks[1].stem, "run");
    }

    #[test]
    fn digit_rule_tags_numeral() {
        let toks = analyzer().tokenize("wait 42 minutes");
        assert_eq!(toks[1].pos, PosClass::Numeral);
    }

    #[test]
    fn capitalized_mid_sentence_is_proper_noun() {
        let toks = analyzer().tokenize("meeting Obama tonight");
        assert_eq!(toks[1].pos, PosClass::ProperNoun);
        // Sentence-initial capitalized unknown word defaults to common noun.
        let toks = analyzer().tokenize("Obama speaks");
        assert_eq!(toks[0].pos, PosClass::CommonNoun);
    }

    #[test]
    fn lexicon_beats_heuristics() {
        let toks = analyzer().tokenize("read the news");
        assert_eq!(toks[1].pos, PosClass::Determiner);
        assert!(toks[1].is_stop);
    }

    #[test]
    fn url_chunks_drop_scheme_and_empties() {
        let an = analyzer();
        let chunks: Vec<String> = an
            .url_chunks("http://bbc.co.uk/news")
            .into_iter()
            .map(|t| t.surface)
            .collect();
        assert_eq!(chunks, vec!["bbc", "co", "uk", "news"]);

        assert!(an.url_chunks("http://").is_empty());

        let chunks: Vec<String> = an
            .url_chunks("https://a-b.com")
            .into_iter()
            .map(|t| t.surface)
            .collect();
        assert_eq!(chunks, vec!["a", "b", "com"]);
    }

    #[test]
    fn strip_removes_noise_and_chunks_urls() {
        let an = analyzer();
        let toks = an.tokenize("the and a this");
        assert!(an.strip_for_agreement(&toks).is_empty());

        let toks = an.tokenize("Storm surge hits the coast now :: http://bbc.co.uk/news");
        let stripped = an.strip_for_agreement(&toks);
        // "the" (determiner/stop), "now" (kept: adverb, not stop), "::" (punct)
        // dropped or kept accordingly; URL replaced by 4 chunks.
        let surfaces: Vec<&str> = stripped.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(
            surfaces,
            vec!["storm", "surge", "hits", "coast", "now", "bbc", "co", "uk", "news"]
        );
        // Chunk positions continue past the original token positions.
        let positions: Vec<usize> = stripped.iter().map(|t| t.position).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));

        // Idempotence.
        let again = an.strip_for_agreement(&stripped);
        assert_eq!(again, stripped);
    }

    #[test]
    fn strip_introduces_only_tokenize_or_chunk_stems() {
        let an = analyzer();
        let text = "Flood warning for the valley http://news.example.com/flood-watch";
        let toks = an.tokenize(text);
        let mut allowed: HashSet<String> = toks.iter().map(|t| t.stem.clone()).collect();
        for t in &toks {
            if t.pos == PosClass::Url {
                allowed.extend(an.url_chunks(&t.surface).into_iter().map(|c| c.stem));
            }
        }
        for t in an.strip_for_agreement(&toks) {
            assert!(allowed.contains(&t.stem), "foreign stem {:?}", t.stem);
        }
    }

    #[test]
    fn residual_removes_query_stems() {
        let an = analyzer();
        let toks = an.tokenize("white house aide resigns");
        let query: HashSet<String> = an.query_stems("white house").into_iter().collect();
        let rest = residual(&toks, &query);
        let stems: Vec<&str> = rest.iter().map(|t| t.stem.as_str()).collect();
        assert_eq!(stems, vec!["aid", "resign"]);

        // Total removal and identity.
        assert!(residual(&an.tokenize("white house"), &query).is_empty());
        let other = an.tokenize("completely unrelated words");
        assert_eq!(residual(&other, &query).len(), other.len());
    }

    #[test]
    fn mention_kept_in_agreement_tokens() {
        let an = analyzer();
        let toks = an.tokenize("via @reuters desk");
        let stripped = an.strip_for_agreement(&toks);
        assert!(stripped
            .iter()
            .any(|t| t.pos == PosClass::Mention && t.stem == "reuters"));
    }

    #[test]
    fn query_stems_dedupe_and_skip_stops() {
        let an = analyzer();
        assert_eq!(
            an.query_stems("the White House house"),
            vec!["white", "hous"]
        );
    }
}
