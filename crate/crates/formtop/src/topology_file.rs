//! Line-keyed topology documents.
//!
//! A positive topology generated by axioms:
//!
//! ```text
//! name two-points
//! atoms 2
//! axiom 0 <| {1}
//! positivity generated     # greatest | empty | membership | generated
//! pos 1 {1}                # only with `generated`
//! ```
//!
//! A concrete space, read as its representable topology:
//!
//! ```text
//! points 2
//! atoms 2
//! forces 0 1
//! ```
//!
//! `#` starts a comment. Keys are case-sensitive and may appear once,
//! except `axiom`, `pos` and `forces`.

use formtop_core::finite::{representable, Bounds, FiniteConcreteSpace, FinitePositiveTopology, Mask, PositivitySpec};

use crate::error::InputError;
use crate::specs::strip_comment;

#[derive(Debug, Clone)]
pub struct TopologyDoc {
    pub name: Option<String>,
    pub topology: FinitePositiveTopology,
    /// Whether the topology was read off a concrete space.
    pub concrete: bool,
}

#[derive(Default)]
struct Fields {
    name: Option<String>,
    atoms: Option<usize>,
    points: Option<usize>,
    axioms: Vec<(usize, usize, Mask)>,
    positivity: Option<(usize, String)>,
    pos: Vec<(usize, usize, Mask)>,
    forces: Vec<(usize, usize, usize)>,
}

fn parse_nat(path: &str, line: usize, token: &str) -> Result<usize, InputError> {
    token
        .parse()
        .map_err(|_| InputError::located(path, line, format!("`{token}` is not a natural number")))
}

/// `{0,2}` as a mask.
fn parse_mask(path: &str, line: usize, token: &str) -> Result<Mask, InputError> {
    let inner = token
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| InputError::located(path, line, format!("expected a subset like {{0,1}}, found `{token}`")))?;
    let mut mask: Mask = 0;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let a = parse_nat(path, line, part)?;
        if a >= 32 {
            return Err(InputError::located(path, line, format!("atom {a} is out of range")));
        }
        mask |= 1 << a;
    }
    Ok(mask)
}

fn set_once<T>(slot: &mut Option<T>, value: T, path: &str, line: usize, key: &str) -> Result<(), InputError> {
    if slot.is_some() {
        return Err(InputError::located(path, line, format!("`{key}` given twice")));
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_topology(path: &str, text: &str, bounds: &Bounds) -> Result<TopologyDoc, InputError> {
    let mut f = Fields::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match key {
            "name" => set_once(&mut f.name, rest.to_string(), path, line, key)?,
            "atoms" => set_once(&mut f.atoms, parse_nat(path, line, rest)?, path, line, key)?,
            "points" => set_once(&mut f.points, parse_nat(path, line, rest)?, path, line, key)?,
            "positivity" => set_once(&mut f.positivity, (line, rest.to_string()), path, line, key)?,
            "axiom" => {
                let (a, u) = rest
                    .split_once("<|")
                    .ok_or_else(|| InputError::located(path, line, "expected `axiom a <| {…}`"))?;
                let a = parse_nat(path, line, a.trim())?;
                f.axioms.push((line, a, parse_mask(path, line, u.trim())?));
            }
            "pos" => {
                let (a, u) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| InputError::located(path, line, "expected `pos a {…}`"))?;
                let a = parse_nat(path, line, a.trim())?;
                f.pos.push((line, a, parse_mask(path, line, u.trim())?));
            }
            "forces" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [x, a] = parts[..] else {
                    return Err(InputError::located(path, line, "expected `forces x a`"));
                };
                f.forces
                    .push((line, parse_nat(path, line, x)?, parse_nat(path, line, a)?));
            }
            other => return Err(InputError::located(path, line, format!("unknown key `{other}`"))),
        }
    }
    build(path, f, bounds)
}

fn build(path: &str, f: Fields, bounds: &Bounds) -> Result<TopologyDoc, InputError> {
    let size = f
        .atoms
        .ok_or_else(|| InputError::located(path, 0, "missing `atoms` line"))?;
    if size == 0 || size > bounds.max_pow_atoms {
        return Err(InputError::located(
            path,
            0,
            format!("`atoms {size}` must lie between 1 and {}", bounds.max_pow_atoms),
        ));
    }
    if let Some(points) = f.points {
        if let Some(&(line, ..)) = f.axioms.first().or(f.pos.first()) {
            return Err(InputError::located(
                path,
                line,
                "a concrete space takes `forces` lines only",
            ));
        }
        if let Some((line, _)) = f.positivity {
            return Err(InputError::located(
                path,
                line,
                "a concrete space takes `forces` lines only",
            ));
        }
        let forcing: Vec<(usize, usize)> = f.forces.iter().map(|&(_, x, a)| (x, a)).collect();
        let space = FiniteConcreteSpace::new(points, size, &forcing)
            .map_err(|e| InputError::located(path, 0, e.to_string()))?;
        let topology = representable(&space).map_err(|e| InputError::located(path, 0, e.to_string()))?;
        return Ok(TopologyDoc {
            name: f.name,
            topology,
            concrete: true,
        });
    }
    if let Some(&(line, ..)) = f.forces.first() {
        return Err(InputError::located(path, line, "`forces` needs a `points` line"));
    }
    for &(line, a, u) in f.axioms.iter().chain(&f.pos) {
        if a >= size || u >> size != 0 {
            return Err(InputError::located(
                path,
                line,
                format!("mentions an atom outside 0..{size}"),
            ));
        }
    }
    let (pos_line, kind) = f.positivity.unwrap_or((0, "greatest".to_string()));
    let spec = match kind.as_str() {
        "greatest" => PositivitySpec::Greatest,
        "empty" => PositivitySpec::Empty,
        "membership" => PositivitySpec::Membership,
        "generated" => PositivitySpec::Generated(f.pos.iter().map(|&(_, a, u)| (a, u)).collect()),
        other => {
            return Err(InputError::located(
                path,
                pos_line,
                format!("unknown positivity `{other}`: expected greatest, empty, membership or generated"),
            ))
        }
    };
    if kind != "generated" {
        if let Some(&(line, ..)) = f.pos.first() {
            return Err(InputError::located(
                path,
                line,
                "`pos` lines need `positivity generated`",
            ));
        }
    }
    let axioms: Vec<(usize, Mask)> = f.axioms.iter().map(|&(_, a, u)| (a, u)).collect();
    let topology = FinitePositiveTopology::from_axioms(size, &axioms, spec, bounds)
        .map_err(|e| InputError::located(path, pos_line, e.to_string()))?;
    Ok(TopologyDoc {
        name: f.name,
        topology,
        concrete: false,
    })
}
