//! Tokenization shared by the hashing embedder and BM25.

/// Lowercases `text` and splits it on every non-alphanumeric character.
///
/// No stemming and no stopword removal.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}
