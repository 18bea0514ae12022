//! Input file formats.
//!
//! Set files hold one conjunction per line, with atoms joined by `&&`.
//! Consecutive lines form one block and are conjoined; blank lines separate
//! the blocks of a union. An optional `dim N` line fixes the ambient
//! dimension, otherwise it is the largest variable index used.
//!
//! Simplex files hold one simplex per line: `(p/q, ...); (p/q, ...); ...`.
//!
//! Orthant families are comma-separated sign strings such as `++,--`.
//!
//! Drill spec files are `key value` lines:
//!
//! ```text
//! ambient 3
//! center 1            # or `center 1 general` for a curved center
//! generators x2; x3 + x1*x3
//! zeta 1, x1; x3, 0   # chart form instead of generators
//! change 1; x1        # coefficients g for the generator-change check
//! ```
//!
//! With neither `generators` nor `zeta` the spec is the trivial drilling of
//! `R^e × {0}`. In all files `#` starts a comment.

use nash_atlas_core::drill::{CenterSpec, DrillError};
use nash_atlas_core::expr::{NashExpr, NashMap};
use nash_atlas_core::sets::{Relation, SemiSet, SetError, SignAtom};
use nash_atlas_core::simplicial::{Simplex, SimplicialError};
use nash_atlas_core::weld::{OrthantSet, WeldError};
use nash_atlas_core::Q;

use crate::grammar::{parse_expr, parse_polynomial, parse_rational, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ParseError },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Simplex(#[from] SimplicialError),
    #[error(transparent)]
    Weld(#[from] WeldError),
    #[error(transparent)]
    Drill(#[from] DrillError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Lines with comments stripped and trimmed, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
}

// Two-character symbols precede their one-character prefixes.
const RELATIONS: [(&str, Relation); 10] = [
    ("<=", Relation::Le),
    (">=", Relation::Ge),
    ("!=", Relation::Ne),
    ("==", Relation::Eq),
    ("≤", Relation::Le),
    ("≥", Relation::Ge),
    ("≠", Relation::Ne),
    ("<", Relation::Lt),
    (">", Relation::Gt),
    ("=", Relation::Eq),
];

fn split_atom(atom: &str) -> Option<(&str, Relation, &str)> {
    let mut best: Option<(usize, &str, Relation)> = None;
    for (sym, rel) in RELATIONS {
        if let Some(pos) = atom.find(sym) {
            if best.map_or(true, |(p, _, _)| pos < p) {
                best = Some((pos, sym, rel));
            }
        }
    }
    best.map(|(pos, sym, rel)| (&atom[..pos], rel, &atom[pos + sym.len()..]))
}

pub fn parse_set(text: &str) -> Result<SemiSet, FormatError> {
    let mut dim: Option<usize> = None;
    let mut blocks: Vec<Vec<(usize, &str, Relation, &str)>> = vec![Vec::new()];
    for ((n, line), raw) in lines(text).zip(text.lines()) {
        if raw.trim().is_empty() {
            if !blocks.last().expect("nonempty").is_empty() {
                blocks.push(Vec::new());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("dim") {
            let d = rest.trim().parse().map_err(|_| syntax(n, format!("bad dimension {:?}", rest.trim())))?;
            dim = Some(d);
            continue;
        }
        for atom in line.split("&&") {
            let (lhs, rel, rhs) = split_atom(atom).ok_or_else(|| syntax(n, format!("no relation in {:?}", atom.trim())))?;
            blocks.last_mut().expect("nonempty").push((n, lhs, rel, rhs));
        }
    }
    if blocks.last().is_some_and(|b| b.is_empty()) {
        blocks.pop();
    }
    let dim = match dim {
        Some(d) => d,
        None => {
            let mut m = 0;
            for &(n, lhs, _, rhs) in blocks.iter().flatten() {
                for side in [lhs, rhs] {
                    m = m.max(parse_expr(side, None).map_err(|source| FormatError::Expr { line: n, source })?.arity());
                }
            }
            m
        }
    };
    let conjunctions = blocks
        .into_iter()
        .map(|block| {
            block
                .into_iter()
                .map(|(n, lhs, rel, rhs)| {
                    let err = |source| FormatError::Expr { line: n, source };
                    let p = &parse_polynomial(lhs, Some(dim)).map_err(err)? - &parse_polynomial(rhs, Some(dim)).map_err(err)?;
                    Ok(SignAtom::new(p, rel))
                })
                .collect::<Result<Vec<_>, FormatError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SemiSet::new(dim, conjunctions)?)
}

fn parse_point(n: usize, src: &str) -> Result<Vec<Q>, FormatError> {
    let inner = src
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| syntax(n, format!("vertex {:?} is not a parenthesized tuple", src.trim())))?;
    inner
        .split(',')
        .map(|c| parse_rational(c).map_err(|source| FormatError::Expr { line: n, source }))
        .collect()
}

pub fn parse_simplices(text: &str) -> Result<Vec<Simplex>, FormatError> {
    lines(text)
        .filter(|(_, l)| !l.is_empty())
        .map(|(n, l)| {
            let vertices = l.split(';').map(|v| parse_point(n, v)).collect::<Result<Vec<_>, _>>()?;
            Ok(Simplex::new(vertices)?)
        })
        .collect()
}

pub fn parse_signs(word: &str) -> Result<Vec<i8>, FormatError> {
    word.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(syntax(1, format!("sign {other:?} in {word:?}"))),
        })
        .collect()
}

pub fn parse_orthants(text: &str) -> Result<OrthantSet, FormatError> {
    let signs = text
        .split(',')
        .map(|w| w.chars().filter(|c| !c.is_whitespace()).collect::<String>())
        .filter(|w| !w.is_empty())
        .map(|w| parse_signs(&w))
        .collect::<Result<Vec<_>, _>>()?;
    let ell = signs.first().map_or(0, Vec::len);
    if signs.iter().any(|s| s.len() != ell) {
        return Err(syntax(1, "sign strings have different lengths"));
    }
    Ok(OrthantSet::new(ell, &signs)?)
}

pub fn format_signs(signs: &[i8]) -> String {
    signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

/// A parsed drill spec plus the coefficients for the generator-change check.
#[derive(Clone, Debug)]
pub struct DrillSpecFile {
    pub spec: CenterSpec,
    pub change: Option<Vec<NashExpr>>,
}

fn expr_list(n: usize, src: &str, sep: char, d: usize) -> Result<Vec<NashExpr>, FormatError> {
    src.split(sep).map(|e| parse_expr(e, Some(d)).map_err(|source| FormatError::Expr { line: n, source })).collect()
}

pub fn parse_drill_spec(text: &str) -> Result<DrillSpecFile, FormatError> {
    let mut d = None;
    let mut center = None;
    let mut generators = None;
    let mut zeta = None;
    let mut change = None;
    for (n, l) in lines(text).filter(|(_, l)| !l.is_empty()) {
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match key {
            "ambient" => d = Some(rest.parse::<usize>().map_err(|_| syntax(n, "ambient needs a dimension"))?),
            "center" => {
                let mut words = rest.split_whitespace();
                let e = words.next().and_then(|w| w.parse::<usize>().ok()).ok_or_else(|| syntax(n, "center needs a dimension"))?;
                let general = match words.next() {
                    None => false,
                    Some("general") => true,
                    Some(w) => return Err(syntax(n, format!("unknown center qualifier {w:?}"))),
                };
                center = Some((e, general));
            }
            "generators" | "zeta" | "change" => {
                let d = d.ok_or_else(|| syntax(n, format!("{key} before ambient")))?;
                match key {
                    "generators" => generators = Some(expr_list(n, rest, ';', d)?),
                    "change" => change = Some(expr_list(n, rest, ';', d)?),
                    _ => {
                        let maps = rest
                            .split(';')
                            .map(|m| expr_list(n, m, ',', d).map(|c| NashMap::new(d, c)))
                            .collect::<Result<Vec<_>, _>>()?;
                        zeta = Some(maps);
                    }
                }
            }
            other => return Err(syntax(n, format!("unknown key {other:?}"))),
        }
    }
    let d = d.ok_or_else(|| syntax(0, "missing ambient line"))?;
    let (e, general) = center.ok_or_else(|| syntax(0, "missing center line"))?;
    if e >= d {
        return Err(syntax(0, format!("center dimension {e} must be below the ambient dimension {d}")));
    }
    let spec = match (generators, zeta, general) {
        (Some(_), Some(_), _) => return Err(syntax(0, "give either generators or zeta, not both")),
        (Some(f), None, false) => CenterSpec::generator_form(d, e, f)?,
        (Some(f), None, true) => CenterSpec::generator_form_general(d, e, f)?,
        (None, _, true) => return Err(syntax(0, "a general center needs generators")),
        (None, Some(z), false) => CenterSpec::chart_form(d, e, z)?,
        (None, None, false) => CenterSpec::trivial(d, e)?,
    };
    Ok(DrillSpecFile { spec, change })
}
