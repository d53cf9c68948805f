//! Line-oriented template document.
//!
//! ```text
//! elimgen-template 1
//! prime 65521
//! vars x y
//! action x^1*y^-1
//! structure 0 x^2*y^-1 x^1 y^1 1
//! shifts 0 1 x^-1
//! excessive x^1*y^-1
//! reducible ...
//! basis ...
//! dropped x^-1
//! row 0 1
//! c2 x 1 3
//! block 0 32761 ...
//! end
//! ```
//!
//! Monomials use the corpus grammar. Every set is written in grevlex-descending
//! order, so `render(parse(text)) == text` for any rendered document.

use std::fmt::Write as _;

use thiserror::Error;

use super::{C2Pair, Partition, RowSource, ShiftTuple, Template};
use crate::corpus::grammar::{format_monomial, is_identifier, parse_monomial, GrammarError};
use crate::field::PrimeField;
use crate::gf::ExactMatrix;
use crate::laurent::{Monomial, MonomialSet};

pub const FORMAT_HEADER: &str = "elimgen-template 1";

const SET_KEYS: [&str; 4] = ["excessive", "reducible", "basis", "dropped"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Monomial { line: usize, source: GrammarError },
    #[error("incomplete document: {0}")]
    Incomplete(String),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

impl Template {
    pub fn render(&self, names: &[String]) -> String {
        let fmt_set = |s: &MonomialSet| {
            s.iter()
                .map(|m| format!(" {}", format_monomial(m, names)))
                .collect::<String>()
        };
        let mut out = String::new();
        writeln!(out, "{FORMAT_HEADER}").unwrap();
        writeln!(out, "prime {}", self.field.modulus()).unwrap();
        writeln!(out, "vars {}", names.join(" ")).unwrap();
        writeln!(out, "action {}", format_monomial(&self.action, names)).unwrap();
        for (j, s) in self.structure.iter().enumerate() {
            writeln!(out, "structure {j}{}", fmt_set(s)).unwrap();
        }
        for (j, s) in self.shifts.sets().iter().enumerate() {
            writeln!(out, "shifts {j}{}", fmt_set(s)).unwrap();
        }
        writeln!(out, "excessive{}", fmt_set(&self.partition.excessive)).unwrap();
        writeln!(out, "reducible{}", fmt_set(&self.partition.reducible)).unwrap();
        writeln!(out, "basis{}", fmt_set(&self.partition.basis)).unwrap();
        writeln!(out, "dropped{}", fmt_set(&self.dropped)).unwrap();
        for r in &self.rows {
            writeln!(out, "row {} {}", r.poly, format_monomial(&r.shift, names)).unwrap();
        }
        for (name, c) in names.iter().zip(&self.c2_pairs) {
            writeln!(out, "c2 {name} {} {}", c.numerator, c.denominator).unwrap();
        }
        for i in 0..self.reduced_block.rows() {
            let vals: String = self.reduced_block.row(i).iter().map(|v| format!(" {v}")).collect();
            writeln!(out, "block {i}{vals}").unwrap();
        }
        writeln!(out, "end").unwrap();
        out
    }

    /// Parses a document produced by [`Template::render`]; returns the
    /// template and its variable names.
    pub fn parse(text: &str) -> Result<(Template, Vec<String>), FormatError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        match lines.next() {
            Some((_, FORMAT_HEADER)) => {}
            Some((n, other)) => return Err(syntax(n, format!("expected `{FORMAT_HEADER}`, found `{other}`"))),
            None => return Err(FormatError::Incomplete("empty document".into())),
        }

        let mut prime = None;
        let mut names: Option<Vec<String>> = None;
        let mut action = None;
        let mut structure: Vec<MonomialSet> = Vec::new();
        let mut shifts: Vec<MonomialSet> = Vec::new();
        let mut sets: [Option<MonomialSet>; 4] = [None, None, None, None];
        let mut rows = Vec::new();
        let mut c2 = Vec::new();
        let mut block: Vec<Vec<u32>> = Vec::new();
        let mut ended = false;

        for (n, line) in lines {
            if ended {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(syntax(n, "content after `end`"));
            }
            let mut words = line.split_whitespace();
            let Some(key) = words.next() else { continue };
            let rest: Vec<&str> = words.collect();
            let names_ref = || names.as_deref().ok_or_else(|| syntax(n, "`vars` must come first"));
            let mono = |w: &str, names: &[String]| {
                parse_monomial(w, names).map_err(|source| FormatError::Monomial { line: n, source })
            };
            let set = |ws: &[&str], names: &[String]| -> Result<MonomialSet, FormatError> {
                let ms = ws.iter().map(|w| mono(w, names)).collect::<Result<Vec<Monomial>, _>>()?;
                let s = MonomialSet::from_monomials(ms.clone());
                if s.as_slice() != ms.as_slice() {
                    return Err(syntax(n, "set must be distinct and grevlex-descending"));
                }
                Ok(s)
            };
            let index = |w: Option<&&str>| -> Result<usize, FormatError> {
                w.ok_or_else(|| syntax(n, "missing index"))?
                    .parse()
                    .map_err(|_| syntax(n, "bad index"))
            };
            match key {
                "prime" => {
                    let p: u64 = rest
                        .first()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| syntax(n, "bad prime"))?;
                    prime = Some(PrimeField::new(p).map_err(|e| syntax(n, e.to_string()))?);
                }
                "vars" => {
                    if rest.is_empty() || !rest.iter().all(|w| is_identifier(w)) {
                        return Err(syntax(n, "bad variable list"));
                    }
                    names = Some(rest.iter().map(|w| w.to_string()).collect());
                }
                "action" => {
                    let [w] = rest[..] else {
                        return Err(syntax(n, "expected one monomial"));
                    };
                    action = Some(mono(w, names_ref()?)?);
                }
                "structure" | "shifts" => {
                    let target = if key == "structure" { &mut structure } else { &mut shifts };
                    if index(rest.first())? != target.len() {
                        return Err(syntax(n, "polynomial indices must be consecutive"));
                    }
                    target.push(set(&rest[1..], names_ref()?)?);
                }
                "excessive" | "reducible" | "basis" | "dropped" => {
                    let slot = SET_KEYS.iter().position(|k| *k == key).unwrap();
                    if sets[slot].is_some() {
                        return Err(syntax(n, format!("duplicate `{key}`")));
                    }
                    sets[slot] = Some(set(&rest, names_ref()?)?);
                }
                "row" => {
                    let poly = index(rest.first())?;
                    let [_, w] = rest[..] else {
                        return Err(syntax(n, "expected `row <poly> <shift>`"));
                    };
                    rows.push(RowSource {
                        poly,
                        shift: mono(w, names_ref()?)?,
                    });
                }
                "c2" => {
                    let names = names_ref()?;
                    if rest.len() != 3 || names.get(c2.len()).map(String::as_str) != Some(rest[0]) {
                        return Err(syntax(n, "expected `c2 <var> <q> <r>` in variable order"));
                    }
                    c2.push(C2Pair {
                        numerator: index(rest.get(1))?,
                        denominator: index(rest.get(2))?,
                    });
                }
                "block" => {
                    if index(rest.first())? != block.len() {
                        return Err(syntax(n, "block rows must be consecutive"));
                    }
                    let vals = rest[1..]
                        .iter()
                        .map(|w| w.parse::<u32>().map_err(|_| syntax(n, "bad field element")))
                        .collect::<Result<Vec<_>, _>>()?;
                    block.push(vals);
                }
                "end" => ended = true,
                other => return Err(syntax(n, format!("unknown key `{other}`"))),
            }
        }

        let missing = |what: &str| FormatError::Incomplete(format!("missing `{what}`"));
        if !ended {
            return Err(missing("end"));
        }
        let field = prime.ok_or_else(|| missing("prime"))?;
        let names = names.ok_or_else(|| missing("vars"))?;
        let action = action.ok_or_else(|| missing("action"))?;
        let [excessive, reducible, basis, dropped] = sets;
        let dropped = dropped.ok_or_else(|| missing("dropped"))?;
        let partition = Partition {
            excessive: excessive.ok_or_else(|| missing("excessive"))?,
            reducible: reducible.ok_or_else(|| missing("reducible"))?,
            basis: basis.ok_or_else(|| missing("basis"))?,
        };
        let bad = |m: &str| Err(FormatError::Incomplete(m.to_string()));
        if structure.is_empty() || structure.len() != shifts.len() {
            return bad("structure and shift lists must be nonempty and of equal length");
        }
        if !partition.is_disjoint() {
            return bad("E, R and B must be disjoint");
        }
        if partition.column_order().iter().any(|m| dropped.contains(m)) {
            return bad("dropped columns must not reappear in E, R or B");
        }
        if c2.len() != names.len() {
            return bad("one c2 pair per variable");
        }
        let nb = partition.basis.len();
        if c2.iter().any(|c| c.numerator >= nb || c.denominator >= nb) {
            return bad("c2 index out of range");
        }
        if rows.iter().any(|r| r.poly >= structure.len()) {
            return bad("row refers to an unknown polynomial");
        }
        if block.len() != partition.reducible.len() || block.iter().any(|r| r.len() != nb) {
            return bad("block must be #R x #B");
        }
        let p = field.modulus();
        if block.iter().flatten().any(|&v| v >= p) {
            return bad("block entry not reduced mod p");
        }
        let reduced_block = ExactMatrix::from_fn(field, block.len(), nb, |i, j| block[i][j]);
        Ok((
            Template {
                field,
                action,
                structure,
                shifts: ShiftTuple::new(shifts),
                partition,
                rows,
                c2_pairs: c2,
                dropped,
                reduced_block,
            },
            names,
        ))
    }
}
