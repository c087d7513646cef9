//! Tokenizing raw transcriptions.
//!
//! Tokens are separated by whitespace. A token ending in `&` is joined to the
//! following token (the space was spurious); a `#` inside a token marks a
//! missing space and splits it. Leading and trailing punctuation is split off
//! into tokens of its own.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{JOIN_MARK, SPLIT_MARK};
use crate::error::TranscriptError;
use crate::normalizer::TranscriptToken;

pub fn tokenize(text: &str, punctuation: &str) -> Result<Vec<TranscriptToken>, TranscriptError> {
    let is_punct = |c: char| punctuation.contains(c);
    let mut tokens: Vec<TranscriptToken> = Vec::new();
    let mut pending: Vec<String> = Vec::new();

    let push = |tokens: &mut Vec<TranscriptToken>, raw: String, joined: Option<Vec<String>>, split_next: bool| {
        let position = tokens.len();
        tokens.push(TranscriptToken {
            raw,
            position,
            joined_from: joined,
            split_next,
        });
    };

    for piece in text.split_whitespace() {
        let (body, joins) = match piece.strip_suffix(JOIN_MARK) {
            Some(b) => (b, true),
            None => (piece, false),
        };
        let parts: Vec<&str> = body.split(SPLIT_MARK).filter(|p| !p.is_empty()).collect();
        let last = parts.len().saturating_sub(1);

        for (i, part) in parts.iter().enumerate() {
            let is_last = i == last;
            if is_last && joins {
                pending.push(part.to_string());
                continue;
            }
            let leading: usize = part.chars().take_while(|&c| is_punct(c)).map(char::len_utf8).sum();
            if leading == part.len() && pending.is_empty() {
                for c in part.chars() {
                    push(&mut tokens, c.to_string(), None, false);
                }
                continue;
            }
            let (lead, rest) = if pending.is_empty() { part.split_at(leading) } else { ("", *part) };
            let trailing: usize = rest.chars().rev().take_while(|&c| is_punct(c)).map(char::len_utf8).sum();
            let (core_part, trail) = if trailing < rest.len() {
                rest.split_at(rest.len() - trailing)
            } else {
                (rest, "")
            };

            for c in lead.chars() {
                push(&mut tokens, c.to_string(), None, false);
            }
            let split_next = !is_last && trail.is_empty();
            if pending.is_empty() {
                push(&mut tokens, core_part.to_string(), None, split_next);
            } else {
                let mut fragments = core::mem::take(&mut pending);
                fragments.push(core_part.to_string());
                push(&mut tokens, fragments.concat(), Some(fragments), split_next);
            }
            for c in trail.chars() {
                push(&mut tokens, c.to_string(), None, false);
            }
        }
    }

    if let Some(fragment) = pending.pop() {
        return Err(TranscriptError::DanglingContinuation { fragment });
    }
    Ok(tokens)
}
