//! Plain-text solution lines `<P> <x> <S> <a1,a2,...>` and checkpoint files built
//! from them.

use std::fmt::Write as _;

use num_bigint::BigUint;

use super::types::{Direction, ExactSolution, ProblemSpec, SolutionModM};
use crate::error::{Error, Result};

/// `3 4 2 0,4,6` for `3^4 = 2^0 + 2^4 + 2^6`.
pub fn format_solution_line(
    direction: Direction,
    x: &dyn std::fmt::Display,
    exponents: &[u64],
) -> String {
    let exps: Vec<String> = exponents.iter().map(u64::to_string).collect();
    format!(
        "{} {} {} {}",
        direction.power_base(),
        x,
        direction.summand_base(),
        exps.join(",")
    )
}

/// Parses one solution line back into its direction, `x` and exponents.
pub fn parse_solution_line(line: &str, line_no: usize) -> Result<(Direction, BigUint, Vec<u64>)> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 4 || fields.iter().any(|f| f.is_empty()) {
        return Err(err(format!(
            "expected `<P> <x> <S> <a1,...>`, got {line:?}"
        )));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|e| err(format!("{s:?}: {e}")));
    let direction =
        Direction::from_bases(num(fields[0])?, num(fields[2])?).map_err(|e| err(e.to_string()))?;
    let x = fields[1]
        .parse::<BigUint>()
        .map_err(|e| err(format!("{:?}: {e}", fields[1])))?;
    let exponents = fields[3].split(',').map(num).collect::<Result<Vec<_>>>()?;
    Ok((direction, x, exponents))
}

/// The working set after chain index `index`, plus the exact solutions already found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub index: usize,
    pub found: Vec<ExactSolution>,
    pub solutions: Vec<SolutionModM>,
}

const STEP: &str = "# step ";
const FOUND: &str = "# found ";

pub fn write_checkpoint(direction: Direction, cp: &Checkpoint) -> String {
    let mut out = String::new();
    writeln!(out, "{STEP}{}", cp.index).unwrap();
    for e in &cp.found {
        writeln!(
            out,
            "{FOUND}{}",
            format_solution_line(direction, &e.x, &e.exponents)
        )
        .unwrap();
    }
    for s in &cp.solutions {
        writeln!(
            out,
            "{}",
            format_solution_line(direction, &s.x, &s.exponents)
        )
        .unwrap();
    }
    out
}

pub fn parse_checkpoint(text: &str, spec: &ProblemSpec) -> Result<Checkpoint> {
    let mut index = None;
    let mut found = Vec::new();
    let mut solutions = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if let Some(rest) = line.strip_prefix(STEP) {
            let i = rest
                .trim()
                .parse::<usize>()
                .map_err(|e| err(e.to_string()))?;
            if index.replace(i).is_some() {
                return Err(err("repeated step header".into()));
            }
            continue;
        }
        let (body, exact) = match line.strip_prefix(FOUND) {
            Some(rest) => (rest, true),
            None if line.trim().is_empty() || line.starts_with('#') => continue,
            None => (line, false),
        };
        let (direction, x, exponents) = parse_solution_line(body, line_no)?;
        if direction != spec.direction || exponents.len() != spec.n {
            return Err(err(format!(
                "solution does not match {} with n = {}",
                spec.direction, spec.n
            )));
        }
        if exact {
            let x = u64::try_from(&x).map_err(|e| err(e.to_string()))?;
            let e = ExactSolution::checked(x, exponents, direction);
            if !e.verified {
                return Err(err("recorded solution does not hold".into()));
            }
            found.push(e);
        } else {
            let i = index.ok_or_else(|| err("solution before the step header".into()))?;
            solutions.push(SolutionModM {
                x,
                exponents,
                modulus_index: i,
            });
        }
    }
    let index = index.ok_or(Error::Parse {
        line: 1,
        msg: "missing `# step <i>` header".into(),
    })?;
    Ok(Checkpoint {
        index,
        found,
        solutions,
    })
}
