//! S-expressions for Baire-space cover derivations.
//!
//! ```text
//! D := (eta [a])
//!    | (zeta [a] D)              ; D concludes a prefix of [a]
//!    | (fan [a] D0 … Dk REST?)   ; Di concludes [a]*i
//!    | (level [a] n)             ; n nested fans below [a]
//! REST := (rest eta) | (rest level m)
//! ```
//!
//! Fan branches past the listed ones follow `REST`: an η leaf at `[a]*n`,
//! or `m` nested fans below it. Without `REST` such a branch is an error
//! when requested. `;` starts a comment.

use std::sync::Arc;

use formtop_core::baire::{level_derivation, Derivation, DerivationError};
use formtop_core::FiniteSeq;

use crate::error::InputError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Seq(String),
    Word(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Seq(String),
    Word(String),
    List(Vec<Sexp>),
}

fn tokenize(path: &str, text: &str) -> Result<Vec<(usize, Token)>, InputError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split(';').next().unwrap_or("");
        let mut chars = content.char_indices().peekable();
        while let Some((start, c)) = chars.next() {
            match c {
                '(' => out.push((line, Token::Open)),
                ')' => out.push((line, Token::Close)),
                '[' => {
                    let mut end = None;
                    for (j, d) in chars.by_ref() {
                        if d == ']' {
                            end = Some(j);
                            break;
                        }
                    }
                    let end = end.ok_or_else(|| InputError::located(path, line, "unclosed `[`"))?;
                    out.push((line, Token::Seq(content[start..=end].to_string())));
                }
                c if c.is_whitespace() => {}
                _ => {
                    let mut end = start + c.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_whitespace() || "()[]".contains(d) {
                            break;
                        }
                        end = j + d.len_utf8();
                        chars.next();
                    }
                    out.push((line, Token::Word(content[start..end].to_string())));
                }
            }
        }
    }
    Ok(out)
}

fn read_sexp(path: &str, tokens: &[(usize, Token)], pos: &mut usize) -> Result<(usize, Sexp), InputError> {
    let last_line = tokens.last().map_or(1, |t| t.0);
    let (line, tok) = tokens
        .get(*pos)
        .cloned()
        .ok_or_else(|| InputError::located(path, last_line, "unexpected end of input"))?;
    *pos += 1;
    match tok {
        Token::Seq(s) => Ok((line, Sexp::Seq(s))),
        Token::Word(w) => Ok((line, Sexp::Word(w))),
        Token::Close => Err(InputError::located(path, line, "unexpected `)`")),
        Token::Open => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(InputError::located(path, last_line, "unclosed `(`")),
                    Some((_, Token::Close)) => {
                        *pos += 1;
                        return Ok((line, Sexp::List(items)));
                    }
                    Some(_) => items.push(read_sexp(path, tokens, pos)?.1),
                }
            }
        }
    }
}

struct Builder<'a> {
    path: &'a str,
    line: usize,
}

impl Builder<'_> {
    fn err(&self, message: impl Into<String>) -> InputError {
        InputError::located(self.path, self.line, message)
    }

    fn seq(&self, s: &Sexp) -> Result<FiniteSeq, InputError> {
        match s {
            Sexp::Seq(text) => text.parse().map_err(|e| self.err(format!("{e}"))),
            _ => Err(self.err("expected a sequence like [0,1]")),
        }
    }

    fn nat(&self, s: &Sexp) -> Result<usize, InputError> {
        match s {
            Sexp::Word(w) => w
                .parse()
                .map_err(|_| self.err(format!("`{w}` is not a natural number"))),
            _ => Err(self.err("expected a natural number")),
        }
    }

    fn build(&self, s: &Sexp) -> Result<Derivation, InputError> {
        let Sexp::List(items) = s else {
            return Err(self.err("expected a parenthesised rule"));
        };
        let (head, args) = match items.split_first() {
            Some((Sexp::Word(w), args)) => (w.as_str(), args),
            _ => return Err(self.err("a rule starts with eta, zeta, fan or level")),
        };
        match (head, args) {
            ("eta", [a]) => Ok(Derivation::eta(self.seq(a)?)),
            ("zeta", [a, premise]) => {
                let at = self.seq(a)?;
                let premise = self.build(premise)?;
                if !formtop_core::seq::leq_b(&at, premise.conclusion()) {
                    return Err(self.err(format!(
                        "zeta premise concludes {}, which is not an initial segment of {at}",
                        premise.conclusion()
                    )));
                }
                Ok(Derivation::zeta(at, premise))
            }
            ("level", [a, n]) => Ok(level_derivation(&self.seq(a)?, self.nat(n)?)),
            ("fan", [a, rest @ ..]) => self.fan(self.seq(a)?, rest),
            _ => Err(self.err(format!("malformed `{head}` rule"))),
        }
    }

    fn fan(&self, at: FiniteSeq, args: &[Sexp]) -> Result<Derivation, InputError> {
        let (branches, rest) = match args.split_last() {
            Some((Sexp::List(last), init)) if matches!(last.first(), Some(Sexp::Word(w)) if w == "rest") => {
                (init, Some(self.rest(&last[1..])?))
            }
            _ => (args, None),
        };
        let mut listed = Vec::new();
        for (n, b) in branches.iter().enumerate() {
            let d = self.build(b)?;
            let want = at.push(n as u64);
            if d.conclusion() != &want {
                return Err(self.err(format!("fan branch {n} concludes {} instead of {want}", d.conclusion())));
            }
            listed.push(d);
        }
        let listed = Arc::new(listed);
        let node = at.clone();
        Ok(Derivation::fan_fallible(at, move |n| {
            if let Some(d) = usize::try_from(n).ok().and_then(|i| listed.get(i)) {
                return Ok(d.clone());
            }
            match rest {
                Some(None) => Ok(Derivation::eta(node.push(n))),
                Some(Some(m)) => Ok(level_derivation(&node.push(n), m)),
                None => Err(DerivationError::MalformedTree {
                    at: node.clone(),
                    reason: format!("no branch {n} and no rest clause"),
                }),
            }
        }))
    }

    /// `None` for η leaves, `Some(m)` for `m` nested fans.
    fn rest(&self, args: &[Sexp]) -> Result<Option<usize>, InputError> {
        match args {
            [Sexp::Word(w)] if w == "eta" => Ok(None),
            [Sexp::Word(w), m] if w == "level" => Ok(Some(self.nat(m)?)),
            _ => Err(self.err("expected (rest eta) or (rest level m)")),
        }
    }
}

pub fn parse_derivation(path: &str, text: &str) -> Result<Derivation, InputError> {
    let tokens = tokenize(path, text)?;
    let mut pos = 0;
    let (line, sexp) = read_sexp(path, &tokens, &mut pos)?;
    if let Some((extra, _)) = tokens.get(pos) {
        return Err(InputError::located(path, *extra, "trailing input after the derivation"));
    }
    Builder { path, line }.build(&sexp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use formtop_core::baire::{split_cover, ChoiceStream, DecidableSubset};

    fn s(v: &[u64]) -> FiniteSeq {
        FiniteSeq::from(v)
    }

    #[test]
    fn fan_with_rest() {
        let d = parse_derivation("d", "(fan [] (eta [0]) (fan [1] (rest eta)) (rest level 1)) ; comment").unwrap();
        assert_eq!(d.conclusion(), &FiniteSeq::nil());
        let u = DecidableSubset::finite([s(&[0]), s(&[1, 4]), s(&[5, 2])]);
        let hit = split_cover(&ChoiceStream::periodic(vec![1, 4]).unwrap(), &d, &u, 10).unwrap();
        assert_eq!(hit, s(&[1, 4]));
        let hit = split_cover(&ChoiceStream::periodic(vec![5, 2]).unwrap(), &d, &u, 10).unwrap();
        assert_eq!(hit, s(&[5, 2]));
    }

    #[test]
    fn zeta_and_level() {
        let d = parse_derivation("d", "(zeta [1,0,1]\n  (level [1] 2))").unwrap();
        assert_eq!(d.conclusion(), &s(&[1, 0, 1]));
        assert!(parse_derivation("d", "(zeta [1] (eta [2]))").is_err());
    }

    #[test]
    fn missing_branch_is_an_error_on_request() {
        let d = parse_derivation("d", "(fan [] (eta [0]))").unwrap();
        assert!(d.child(0).is_ok());
        assert!(d.child(1).is_err());
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "(eta [0]",
            "(eta [0]))",
            "(eta 0)",
            "(fan [] (eta [1]))",
            "(fly [])",
            "(eta [0]) (eta [1])",
            "(eta [0",
        ] {
            assert!(parse_derivation("d", text).is_err(), "{text}");
        }
    }
}
