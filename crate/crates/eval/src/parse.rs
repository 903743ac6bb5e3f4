use regex::Regex;
use std::sync::LazyLock;

static ANSWER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"(?i:answer)(?:\s+(?i:is))?\s*[:=\-]?\s*(?:(?i:option)\s+)?[(\[<>*"']*([A-Z])\b"#).expect("valid regex")
});
static LONE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b([A-Z])\b").expect("valid regex"));

fn index_of(letter: char, option_count: usize) -> Option<usize> {
    if !letter.is_ascii_alphabetic() {
        return None;
    }
    let i = (letter.to_ascii_uppercase() as u8 - b'A') as usize;
    (i < option_count).then_some(i)
}

/// Reads an option letter out of free-form model output.
///
/// 1. The whole reply is one letter, ignoring case, whitespace and punctuation.
/// 2. Otherwise the last "answer ... X" phrase with a valid capital letter.
/// 3. Otherwise a lone capital letter token, if exactly one valid one appears.
///
/// Anything else is unparsed.
pub fn parse_choice(raw: &str, option_count: usize) -> Option<usize> {
    let core = raw.trim_matches(|c: char| !c.is_alphanumeric());
    let mut chars = core.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if let Some(i) = index_of(c, option_count) {
            return Some(i);
        }
    }
    if let Some(i) = ANSWER
        .captures_iter(raw)
        .filter_map(|c| index_of(c[1].chars().next()?, option_count))
        .last()
    {
        return Some(i);
    }
    let mut found: Vec<usize> = LONE
        .captures_iter(raw)
        .filter_map(|c| index_of(c[1].chars().next()?, option_count))
        .collect();
    found.sort_unstable();
    found.dedup();
    match found[..] {
        [i] => Some(i),
        _ => None,
    }
}
