//! Token grammars for the command-line specs.
//!
//! | kind | forms |
//! |------|-------|
//! | set | `all`, `empty`, `binary`, `level:n`, `max-len:n`, `min-len:n`, `finite:[a];[b]`, `complement-of:[a]`, `up:<set>` |
//! | spread | `binary`, `kary:k`, `min-entry:c`, `parity`, `seeded:s`, `table:depth:[a];[b]` |
//! | stream | `constant:n`, `zeros-after:[a]`, `periodic:[p]`, `table:[prefix]:[cycle]`, `random:bound` |
//! | relation | `first-entry`, `sum-first-k:k`, `constant:n`, `empty`, `file:path` |
//! | Σ⁰₁ predicate | `level:k`, `first-entry-after:k`, `sum-reaches:m` |
//! | enumerated cover | `shrinking`, `inner`, `constant:p/q,r/s`, `file:path` |

use std::path::Path;

use formtop_core::baire::{ChoiceStream, DecidableSubset};
use formtop_core::continuity::{SeqNatRelation, Sigma01Presentation};
use formtop_core::reals::{EnumeratedCover, RatInterval};
use formtop_core::spread::Spread;
use formtop_core::FiniteSeq;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{read_file, InputError};

fn split_head(input: &str) -> (&str, Option<&str>) {
    match input.split_once(':') {
        Some((head, rest)) => (head.trim(), Some(rest.trim())),
        None => (input.trim(), None),
    }
}

fn number<T: std::str::FromStr>(kind: &'static str, input: &str, arg: Option<&str>) -> Result<T, InputError> {
    let arg = arg.ok_or_else(|| InputError::spec(kind, input, "missing numeric argument"))?;
    arg.parse()
        .map_err(|_| InputError::spec(kind, input, format!("`{arg}` is not a natural number")))
}

fn no_arg(kind: &'static str, input: &str, arg: Option<&str>) -> Result<(), InputError> {
    match arg {
        None => Ok(()),
        Some(_) => Err(InputError::spec(kind, input, "takes no argument")),
    }
}

pub fn parse_seq(kind: &'static str, text: &str) -> Result<FiniteSeq, InputError> {
    text.trim()
        .parse()
        .map_err(|e| InputError::spec(kind, text, format!("{e}")))
}

/// `[a];[b];…`; the empty string is the empty list.
fn seq_list(kind: &'static str, input: &str, arg: Option<&str>) -> Result<Vec<FiniteSeq>, InputError> {
    let arg = arg.ok_or_else(|| InputError::spec(kind, input, "missing sequence list"))?;
    arg.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_seq(kind, s))
        .collect()
}

pub fn parse_set(input: &str) -> Result<DecidableSubset, InputError> {
    const KIND: &str = "set spec";
    let (head, arg) = split_head(input);
    match head {
        "all" => no_arg(KIND, input, arg).map(|_| DecidableSubset::all()),
        "empty" => no_arg(KIND, input, arg).map(|_| DecidableSubset::empty()),
        "binary" => no_arg(KIND, input, arg).map(|_| DecidableSubset::binary()),
        "level" => Ok(DecidableSubset::level(number(KIND, input, arg)?)),
        "max-len" => Ok(DecidableSubset::max_len(number(KIND, input, arg)?)),
        "min-len" => Ok(DecidableSubset::min_len(number(KIND, input, arg)?)),
        "finite" => Ok(DecidableSubset::finite(seq_list(KIND, input, arg)?)),
        "complement-of" => {
            let a = arg.ok_or_else(|| InputError::spec(KIND, input, "missing sequence"))?;
            Ok(DecidableSubset::complement_of(&parse_seq(KIND, a)?))
        }
        "up" => {
            let inner = arg.ok_or_else(|| InputError::spec(KIND, input, "missing inner set"))?;
            Ok(parse_set(inner)?.monotone_closure())
        }
        _ => Err(InputError::spec(KIND, input, "unknown set form")),
    }
}

pub fn parse_spread(input: &str) -> Result<Spread, InputError> {
    const KIND: &str = "spread spec";
    let (head, arg) = split_head(input);
    match head {
        "binary" => no_arg(KIND, input, arg).map(|_| Spread::binary()),
        "parity" => no_arg(KIND, input, arg).map(|_| Spread::parity()),
        "kary" => Spread::kary(number(KIND, input, arg)?)
            .ok_or_else(|| InputError::spec(KIND, input, "arity must be at least 1")),
        "min-entry" => Ok(Spread::min_entry(number(KIND, input, arg)?)),
        "seeded" => Ok(Spread::seeded(number(KIND, input, arg)?)),
        "table" => {
            let rest = arg.ok_or_else(|| InputError::spec(KIND, input, "expected table:depth:[a];[b]"))?;
            let (depth, members) = split_head(rest);
            let depth: usize = number(KIND, input, Some(depth))?;
            let members = seq_list(KIND, input, members)?;
            Spread::table(depth, members).ok_or_else(|| {
                InputError::spec(
                    KIND,
                    input,
                    "members must contain nil, be closed under prefixes and give every node shorter than the depth a child",
                )
            })
        }
        _ => Err(InputError::spec(KIND, input, "unknown spread form")),
    }
}

/// `seed` drives the `random:bound` form; entry `i` depends only on `(seed, i)`.
pub fn parse_stream(input: &str, seed: u64) -> Result<ChoiceStream, InputError> {
    const KIND: &str = "stream spec";
    let (head, arg) = split_head(input);
    match head {
        "constant" => Ok(ChoiceStream::constant(number(KIND, input, arg)?)),
        "zeros-after" => {
            let a = arg.ok_or_else(|| InputError::spec(KIND, input, "missing sequence"))?;
            Ok(ChoiceStream::zeros_after(&parse_seq(KIND, a)?))
        }
        "periodic" => {
            let a = arg.ok_or_else(|| InputError::spec(KIND, input, "missing period"))?;
            ChoiceStream::periodic(parse_seq(KIND, a)?.into_entries())
                .ok_or_else(|| InputError::spec(KIND, input, "the period must be non-empty"))
        }
        "table" => {
            let rest = arg.ok_or_else(|| InputError::spec(KIND, input, "expected table:[prefix]:[cycle]"))?;
            let (prefix, cycle) = rest
                .split_once("]:")
                .map(|(p, c)| (format!("{p}]"), c.to_string()))
                .ok_or_else(|| InputError::spec(KIND, input, "expected table:[prefix]:[cycle]"))?;
            let prefix = parse_seq(KIND, &prefix)?.into_entries();
            let cycle = parse_seq(KIND, &cycle)?.into_entries();
            ChoiceStream::table(prefix, cycle)
                .ok_or_else(|| InputError::spec(KIND, input, "the cycle must be non-empty"))
        }
        "random" => {
            let bound: u64 = number(KIND, input, arg)?;
            if bound == 0 {
                return Err(InputError::spec(KIND, input, "the bound must be positive"));
            }
            Ok(ChoiceStream::from_fn(move |i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_word_pos(u128::from(i) * 2);
                rng.next_u64() % bound
            }))
        }
        _ => Err(InputError::spec(KIND, input, "unknown stream form")),
    }
}

pub fn parse_relation(input: &str) -> Result<SeqNatRelation, InputError> {
    const KIND: &str = "relation spec";
    let (head, arg) = split_head(input);
    match head {
        "first-entry" => no_arg(KIND, input, arg).map(|_| SeqNatRelation::first_entry()),
        "empty" => no_arg(KIND, input, arg).map(|_| SeqNatRelation::empty()),
        "constant" => Ok(SeqNatRelation::constant(number(KIND, input, arg)?)),
        "sum-first-k" => Ok(SeqNatRelation::sum_first_k(number(KIND, input, arg)?)),
        "file" => {
            let path = arg.ok_or_else(|| InputError::spec(KIND, input, "missing path"))?;
            parse_relation_table(path, &read_file(Path::new(path))?)
        }
        _ => Err(InputError::spec(KIND, input, "unknown relation form")),
    }
}

/// One `[a] -> n` per line; `#` starts a comment.
pub fn parse_relation_table(path: &str, text: &str) -> Result<SeqNatRelation, InputError> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let (a, n) = line
            .split_once("->")
            .ok_or_else(|| InputError::located(path, i + 1, "expected `[a] -> n`"))?;
        let a: FiniteSeq = a
            .trim()
            .parse()
            .map_err(|e| InputError::located(path, i + 1, format!("{e}")))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| InputError::located(path, i + 1, format!("`{}` is not a natural number", n.trim())))?;
        pairs.push((a, n));
    }
    Ok(SeqNatRelation::from_table(pairs))
}

/// A Σ⁰₁ predicate `D(a, n)`:
///
/// * `level:k`: `lh a ≥ k ∧ n = 0`;
/// * `first-entry-after:k`: `lh a ≥ k ∧ n = a₀`;
/// * `sum-reaches:m`: `n ≤ lh a` and the first `n` entries sum to at least `m`.
pub fn parse_sigma(input: &str) -> Result<Sigma01Presentation, InputError> {
    const KIND: &str = "predicate spec";
    let (head, arg) = split_head(input);
    match head {
        "level" => {
            let k: usize = number(KIND, input, arg)?;
            Ok(Sigma01Presentation::new(move |a, n| a.len() >= k && n == 0))
        }
        "first-entry-after" => {
            let k: usize = number(KIND, input, arg)?;
            Ok(Sigma01Presentation::new(move |a, n| a.len() >= k.max(1) && n == a[0]))
        }
        "sum-reaches" => {
            let m: u64 = number(KIND, input, arg)?;
            Ok(Sigma01Presentation::new(move |a, n| {
                usize::try_from(n).is_ok_and(|n| n <= a.len() && a[..n].iter().sum::<u64>() >= m)
            }))
        }
        _ => Err(InputError::spec(KIND, input, "unknown predicate form")),
    }
}

pub fn parse_enumerated_cover(input: &str) -> Result<EnumeratedCover, InputError> {
    const KIND: &str = "enumerated cover";
    let (head, arg) = split_head(input);
    match head {
        "shrinking" => no_arg(KIND, input, arg).map(|_| EnumeratedCover::shrinking()),
        "inner" => no_arg(KIND, input, arg).map(|_| EnumeratedCover::inner()),
        "constant" => {
            let iv = arg.ok_or_else(|| InputError::spec(KIND, input, "missing interval"))?;
            Ok(EnumeratedCover::constant(parse_interval(iv)?))
        }
        "file" => {
            let path = arg.ok_or_else(|| InputError::spec(KIND, input, "missing path"))?;
            let list = parse_cover_file(path, &read_file(Path::new(path))?)?;
            EnumeratedCover::from_list(list).ok_or_else(|| InputError::spec(KIND, input, "the listed prefix is empty"))
        }
        _ => Err(InputError::spec(KIND, input, "unknown cover generator")),
    }
}

pub fn parse_interval(text: &str) -> Result<RatInterval, InputError> {
    text.parse()
        .map_err(|e| InputError::spec("interval", text, format!("{e}")))
}

/// One interval `p/q,r/s` per line; `#` starts a comment.
pub fn parse_cover_file(path: &str, text: &str) -> Result<Vec<RatInterval>, InputError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let iv = line
            .parse()
            .map_err(|e| InputError::located(path, i + 1, format!("{e}")))?;
        out.push(iv);
    }
    Ok(out)
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}
