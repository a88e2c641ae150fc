//! Raw tokenization: splits text on non-alphanumeric boundaries.

/// A raw token before labeling and lemmatization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken<'a> {
    pub text: &'a str,
    pub sentence_initial: bool,
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '_')
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Split `text` into alphanumeric runs.
///
/// Apostrophes, hyphens and underscores are kept when they sit between two
/// alphanumeric characters. Tokens starting with a digit also keep `,` and
/// `.` between digits so that `1,000.5` stays whole. A token is sentence
/// initial when it is the first of the text or a `.`, `!` or `?` occurs
/// between it and the previous token.
pub fn raw_tokens(text: &str) -> Vec<RawToken<'_>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut sentence_initial = true;
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if !c.is_alphanumeric() {
            if is_terminator(c) {
                sentence_initial = true;
            }
            i += 1;
            continue;
        }
        let numeric = c.is_ascii_digit();
        let mut j = i + 1;
        while j < chars.len() {
            let c = chars[j].1;
            if c.is_alphanumeric() {
                j += 1;
                continue;
            }
            let next = chars.get(j + 1).map(|&(_, n)| n);
            let prev = chars[j - 1].1;
            let joins = if numeric && matches!(c, ',' | '.') {
                prev.is_ascii_digit() && next.is_some_and(|n| n.is_ascii_digit())
            } else {
                is_joiner(c) && prev.is_alphanumeric() && next.is_some_and(char::is_alphanumeric)
            };
            if joins {
                j += 1;
            } else {
                break;
            }
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        out.push(RawToken {
            text: &text[start..end],
            sentence_initial,
        });
        sentence_initial = false;
        i = j;
    }
    out
}

/// Integer or decimal, optionally with comma thousands separators.
pub fn is_number(token: &str) -> bool {
    let (int_part, frac) = match token.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (token, None),
    };
    if let Some(frac) = frac {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
    }
    if int_part.is_empty() {
        return false;
    }
    if int_part.bytes().all(|b| b.is_ascii_digit()) {
        return true;
    }
    let groups: Vec<&str> = int_part.split(',').collect();
    let first = groups[0];
    !first.is_empty()
        && first.len() <= 3
        && first.bytes().all(|b| b.is_ascii_digit())
        && groups[1..]
            .iter()
            .all(|g| g.len() == 3 && g.bytes().all(|b| b.is_ascii_digit()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<&str> {
        raw_tokens(s).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn splits_and_keeps_internal_joiners() {
        assert_eq!(texts("The dogs barked."), ["The", "dogs", "barked"]);
        assert_eq!(
            texts("don't well-known old_days -x- 'q'"),
            ["don't", "well-known", "old_days", "x", "q"]
        );
        assert_eq!(texts("cost 1,000.50, then 3.5."), ["cost", "1,000.50", "then", "3.5"]);
        assert_eq!(texts("a--b"), ["a", "b"]);
        assert!(texts("").is_empty());
        assert!(texts(" ... !!").is_empty());
    }

    #[test]
    fn sentence_initial_flags() {
        let toks = raw_tokens("One two. Three? four 3.5 five");
        let flags: Vec<bool> = toks.iter().map(|t| t.sentence_initial).collect();
        assert_eq!(flags, [true, false, true, true, false, false]);
    }

    #[test]
    fn number_rule() {
        for n in ["1984", "3.14", "1,000", "12,345,678.9", "0"] {
            assert!(is_number(n), "{n}");
        }
        for n in ["1,00", "3rd", "1.", ".5", "12,3456", "a1", ""] {
            assert!(!is_number(n), "{n}");
        }
    }
}
