//! LP text format (the CPLEX-style `Maximize / Subject To / Bounds / End`
//! layout). Rational rows are scaled to integers before writing.

use std::fmt::Write;

use num::{BigInt, Signed, Zero};

use super::LinearProgram;
use crate::error::{Error, Result};
use crate::rational::{denominator_lcm, Rational};

const TERMS_PER_LINE: usize = 8;

fn clear(
    terms: &[(usize, Rational)],
    rhs: Option<&Rational>,
) -> (Vec<(usize, BigInt)>, BigInt, BigInt) {
    let scale = denominator_lcm(terms.iter().map(|(_, c)| c).chain(rhs));
    let s = Rational::from_integer(scale.clone());
    let ints = terms
        .iter()
        .map(|(j, c)| (*j, (c * &s).to_integer()))
        .collect();
    let r = rhs.map(|r| (r * &s).to_integer()).unwrap_or_default();
    (ints, r, scale)
}

fn write_row(out: &mut String, lp: &LinearProgram, label: &str, terms: &[(usize, BigInt)]) {
    write!(out, " {label}:").unwrap();
    let mut sorted = terms.to_vec();
    sorted.sort_by_key(|(j, _)| *j);
    let sorted: Vec<_> = sorted.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if sorted.is_empty() {
        match lp.variables.first() {
            Some(v) => write!(out, " 0 {v}").unwrap(),
            None => out.push_str(" 0"),
        }
    }
    for (k, (j, c)) in sorted.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c.is_negative() { '-' } else { '+' };
        let mag = c.abs();
        if k == 0 && sign == '+' {
            out.push(' ');
        } else {
            write!(out, " {sign} ").unwrap();
        }
        if mag != BigInt::from(1) {
            write!(out, "{mag} ").unwrap();
        }
        out.push_str(&lp.variables[*j]);
    }
}

/// Writes the program. The objective is also scaled to integers; the factor
/// is noted in a leading comment.
pub fn to_lp_file(lp: &LinearProgram) -> String {
    let mut out = String::new();
    let (obj, _, scale) = clear(&lp.objective, None);
    writeln!(out, "\\ objective scaled by {scale}").unwrap();
    out.push_str("Maximize\n");
    if obj.iter().all(|(_, c)| c.is_zero()) {
        out.push_str(" obj: 0\n");
    } else {
        write_row(&mut out, lp, "obj", &obj);
        out.push('\n');
    }
    out.push_str("Subject To\n");
    for c in &lp.constraints {
        let (terms, rhs, _) = clear(&c.terms, Some(&c.rhs));
        write_row(&mut out, lp, &c.name, &terms);
        writeln!(out, " = {rhs}").unwrap();
    }
    out.push_str("Bounds\n");
    for v in &lp.variables {
        writeln!(out, " {v} >= 0").unwrap();
    }
    out.push_str("End\n");
    out
}

#[derive(PartialEq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    End,
}

/// Reads back the subset of the format written by [`to_lp_file`]: equality
/// rows, `>= 0` bounds, integer coefficients.
pub fn parse_lp_file(text: &str) -> Result<LinearProgram> {
    let mut lp = LinearProgram::new();
    let mut section = Section::Start;
    // (line, label, body) statements, continuation lines joined
    let mut stmts: Vec<(usize, Section, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        let next = match lower.as_str() {
            "maximize" | "max" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: k + 1,
            msg: msg.to_string(),
        };
        match section {
            Section::Start | Section::End => return Err(err("text outside a section")),
            Section::Bounds => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 3 || parts[1] != ">=" || parts[2] != "0" {
                    return Err(err("only `name >= 0` bounds are supported"));
                }
                if lp.variable_index(parts[0]).is_none() {
                    lp.add_variable(parts[0]);
                }
            }
            Section::Objective | Section::Constraints => {
                let starts_new = line.contains(':');
                match stmts.last_mut() {
                    Some((_, s, body)) if !starts_new && *s == section => {
                        body.push(' ');
                        body.push_str(line);
                    }
                    _ if !starts_new => return Err(err("expected `label:`")),
                    _ => stmts.push((
                        k + 1,
                        if section == Section::Objective {
                            Section::Objective
                        } else {
                            Section::Constraints
                        },
                        line.to_string(),
                    )),
                }
            }
        }
    }
    if section != Section::End {
        return Err(Error::Parse {
            line: 0,
            msg: "missing End".into(),
        });
    }
    let var_index = |lp: &mut LinearProgram, name: &str| -> usize {
        lp.variable_index(name)
            .unwrap_or_else(|| lp.add_variable(name))
    };
    for (line, section, body) in stmts {
        let err = |msg: String| Error::Parse { line, msg };
        let (label, rest) = body.split_once(':').unwrap();
        let (lhs, rhs) = match rest.split_once('=') {
            Some((l, r)) => (l, Some(r.trim())),
            None => (rest, None),
        };
        let mut terms: Vec<(usize, Rational)> = Vec::new();
        let mut sign = BigInt::from(1);
        let mut coef: Option<BigInt> = None;
        for tok in lhs.split_whitespace() {
            match tok {
                "+" => {}
                "-" => sign = -sign,
                _ if tok.parse::<BigInt>().is_ok() => coef = Some(tok.parse().unwrap()),
                name => {
                    let c = &sign * coef.take().unwrap_or_else(|| BigInt::from(1));
                    let j = var_index(&mut lp, name);
                    terms.push((j, Rational::from_integer(c)));
                    sign = BigInt::from(1);
                }
            }
        }
        if let Some(c) = coef {
            if !c.is_zero() {
                return Err(err(format!("dangling constant {c}")));
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        match section {
            Section::Objective => lp.set_objective(terms),
            _ => {
                let rhs = rhs.ok_or_else(|| err("expected `= rhs`".into()))?;
                let rhs: BigInt = rhs.parse().map_err(|_| err(format!("bad rhs `{rhs}`")))?;
                lp.add_equality(label.trim(), terms, Rational::from_integer(rhs));
            }
        }
    }
    lp.validate()?;
    Ok(lp)
}
