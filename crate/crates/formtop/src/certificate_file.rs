//! Reads interval-cover certificates back from their printed tree form.
//!
//! One node per line, children indented two spaces deeper than their parent:
//!
//! ```text
//! split (0/1,1/1) at 13/24 7/12
//!   weaken (0/1,7/12) <= (-1/1,3/5)
//!     eta (-1/1,3/5)
//!   weaken (13/24,1/1) <= (1/2,2/1)
//!     eta (1/2,2/1)
//! ```

use formtop_core::reals::{RatInterval, RealCertificate};
use formtop_core::Rational;

use crate::error::InputError;

struct Line<'a> {
    number: usize,
    depth: usize,
    text: &'a str,
}

pub fn parse_certificate(path: &str, text: &str) -> Result<RealCertificate, InputError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if indent % 2 != 0 || content.starts_with('\t') {
            return Err(InputError::located(path, i + 1, "indent by multiples of two spaces"));
        }
        lines.push(Line {
            number: i + 1,
            depth: indent / 2,
            text: content.trim(),
        });
    }
    let mut pos = 0;
    let cert = node(path, &lines, &mut pos, 0)?;
    if let Some(extra) = lines.get(pos) {
        return Err(InputError::located(
            path,
            extra.number,
            "a certificate has a single root",
        ));
    }
    Ok(cert)
}

fn node(path: &str, lines: &[Line], pos: &mut usize, depth: usize) -> Result<RealCertificate, InputError> {
    let last = lines.last().map_or(1, |l| l.number);
    let line = lines
        .get(*pos)
        .ok_or_else(|| InputError::located(path, last, "missing premise"))?;
    if line.depth != depth {
        return Err(InputError::located(
            path,
            line.number,
            format!("expected indentation depth {depth}, found {}", line.depth),
        ));
    }
    *pos += 1;
    let err = |m: String| InputError::located(path, line.number, m);
    let interval = |t: &str| t.parse::<RatInterval>().map_err(|e| err(format!("{e}")));
    let rational = |t: &str| t.parse::<Rational>().map_err(|e| err(format!("{e}")));
    let words: Vec<&str> = line.text.split_whitespace().collect();
    match words[..] {
        ["eta", at] => Ok(RealCertificate::Eta { at: interval(at)? }),
        ["discard-below", at] => Ok(RealCertificate::DiscardBelow { at: interval(at)? }),
        ["discard-above", at] => Ok(RealCertificate::DiscardAbove { at: interval(at)? }),
        ["approx-below", at] => Ok(RealCertificate::ApproxBelow { at: interval(at)? }),
        ["approx-above", at] => Ok(RealCertificate::ApproxAbove { at: interval(at)? }),
        ["weaken", at, "<=", wider] => {
            let (at, wider) = (interval(at)?, interval(wider)?);
            let premise = Box::new(node(path, lines, pos, depth + 1)?);
            Ok(RealCertificate::Weaken { at, wider, premise })
        }
        ["split", at, "at", p1, q1] => {
            let (at, p1, q1) = (interval(at)?, rational(p1)?, rational(q1)?);
            let left = Box::new(node(path, lines, pos, depth + 1)?);
            let right = Box::new(node(path, lines, pos, depth + 1)?);
            Ok(RealCertificate::Split {
                at,
                p1,
                q1,
                left,
                right,
            })
        }
        _ => Err(err(format!("unrecognised node `{}`", line.text))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use formtop_core::reals::{certify, Mode};

    #[test]
    fn printed_certificates_read_back() {
        let cases = [
            (
                Mode::Real,
                RatInterval::of(0, 1, 1, 1),
                vec![RatInterval::of(-1, 1, 3, 5), RatInterval::of(1, 2, 2, 1)],
            ),
            (
                Mode::UnitInterval,
                RatInterval::of(-1, 1, 2, 1),
                vec![RatInterval::of(-1, 10, 11, 10)],
            ),
            (Mode::UnitInterval, RatInterval::of(2, 1, 3, 1), vec![]),
        ];
        for (mode, t, u) in cases {
            let cert = certify(mode, &t, &u).unwrap();
            assert_eq!(parse_certificate("c", &cert.to_string()).unwrap(), cert);
        }
    }

    #[test]
    fn shape_errors() {
        for text in [
            "split (0,1) at 1/2 3/4\n  eta (0,1)\n",
            "eta (0,1)\neta (0,1)\n",
            "weaken (0,1) <= (0,2)\n   eta (0,2)\n",
            "eta (1,0)\n",
            "jump (0,1)\n",
        ] {
            assert!(parse_certificate("c", text).is_err(), "{text}");
        }
    }
}
