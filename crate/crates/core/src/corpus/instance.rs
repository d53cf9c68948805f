//! Instance documents: real coefficients keyed by (polynomial, monomial).
//!
//! ```text
//! elimgen-instance 1
//! vars x y
//! polys 2
//! coef 0 x^-1*y^2 2
//! coef 0 x -7
//! end
//! ```

use std::fmt::Write as _;

use super::grammar::{format_monomial, is_identifier, parse_monomial};
use super::problem::{parse_coeff, Coeff, ProblemError};
use crate::laurent::{LaurentPoly, LaurentSystem, Monomial};

pub const INSTANCE_HEADER: &str = "elimgen-instance 1";

fn err(line: usize, column: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_value(text: &str) -> Option<f64> {
    if let Ok(v) = text.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    match parse_coeff(text) {
        Ok(Coeff::Exact(r)) => Some(*r.numer() as f64 / *r.denom() as f64),
        _ => None,
    }
}

/// Parses an instance; returns the variable names and the system.
pub fn parse_instance(text: &str) -> Result<(Vec<String>, LaurentSystem<f64>), ProblemError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == INSTANCE_HEADER => {}
        Some((n, _)) => return Err(err(n, 1, format!("expected `{INSTANCE_HEADER}`"))),
        None => return Err(err(1, 1, "empty document")),
    }
    let mut vars: Option<Vec<String>> = None;
    let mut polys: Option<Vec<Vec<(Monomial, f64)>>> = None;
    let mut ended = false;
    for (n, line) in lines {
        if ended {
            return Err(err(n, 1, "content after `end`"));
        }
        let col = |word: &str| line[..word.as_ptr() as usize - line.as_ptr() as usize].chars().count() + 1;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["vars", names @ ..] if !names.is_empty() => {
                if let Some(bad) = names.iter().find(|v| !is_identifier(v)) {
                    return Err(err(n, col(bad), format!("bad variable name `{bad}`")));
                }
                vars = Some(names.iter().map(|s| s.to_string()).collect());
            }
            ["polys", count] => {
                let c: usize = count.parse().map_err(|_| err(n, col(count), "bad count"))?;
                if c == 0 {
                    return Err(err(n, col(count), "empty polynomial list"));
                }
                polys = Some(vec![Vec::new(); c]);
            }
            ["coef", j, m, v] => {
                let names = vars.as_ref().ok_or_else(|| err(n, 1, "`vars` must come first"))?;
                let list = polys.as_mut().ok_or_else(|| err(n, 1, "`polys` must come first"))?;
                let idx: usize = j.parse().map_err(|_| err(n, col(j), "bad polynomial index"))?;
                let slot = list.get_mut(idx).ok_or_else(|| err(n, col(j), format!("no polynomial {idx}")))?;
                let m = parse_monomial(m, names).map_err(|e| err(n, col(m), e.to_string()))?;
                let value = parse_value(v).ok_or_else(|| err(n, col(v), format!("bad value `{v}`")))?;
                slot.push((m, value));
            }
            ["end"] => ended = true,
            _ => return Err(err(n, 1, format!("unrecognized line `{}`", line.trim()))),
        }
    }
    if !ended {
        return Err(ProblemError::Invalid("missing `end`".into()));
    }
    let vars = vars.ok_or_else(|| ProblemError::Invalid("missing `vars`".into()))?;
    let polys = polys
        .ok_or_else(|| ProblemError::Invalid("missing `polys`".into()))?
        .into_iter()
        .map(|terms| LaurentPoly::new(vars.len(), terms))
        .collect::<Result<Vec<_>, _>>()?;
    let system = LaurentSystem::new(vars.len(), polys)?;
    Ok((vars, system))
}

pub fn render_instance(vars: &[String], system: &LaurentSystem<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "{INSTANCE_HEADER}").unwrap();
    writeln!(out, "vars {}", vars.join(" ")).unwrap();
    writeln!(out, "polys {}", system.len()).unwrap();
    for (j, p) in system.polys().iter().enumerate() {
        for (m, c) in p.terms() {
            writeln!(out, "coef {j} {} {c:?}", format_monomial(m, vars)).unwrap();
        }
    }
    writeln!(out, "end").unwrap();
    out
}
