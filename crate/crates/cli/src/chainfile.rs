//! Chain files: one factor per line as a product of prime powers, optionally
//! followed by `|`-separated order columns, with `#` comments and an optional
//! `direction 3=sum2` / `direction 2=sum3` header line.
//!
//! ```text
//! # comment
//! direction 3=sum2
//! 2^4 * 7 * 73 | 3^2 | 3^2 | 2^2 * 3 | 2
//! 3^3 * 19
//! ```

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use powsums::modcore::arith::factor_u64;
use powsums::modcore::FactoredModulus;
use powsums::planner::{Chain, StepMeta};
use powsums::solver::Direction;
use powsums::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Line {
    /// Comment or blank line, kept verbatim.
    Verbatim(String),
    Direction(Direction),
    Factor {
        factor: FactoredModulus,
        meta: Option<StepMeta>,
        line_no: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainFile {
    pub lines: Vec<Line>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// `b^e * b^e * ...` with whitespace ignored.
fn parse_product(expr: &str, line: usize) -> Result<Vec<(u64, u32)>> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(parse_err(line, "empty product"));
    }
    compact
        .split('*')
        .map(|term| {
            let (b, e) = match term.split_once('^') {
                Some((b, e)) => (b, e),
                None => (term, "1"),
            };
            let b = b
                .parse::<u64>()
                .map_err(|_| parse_err(line, format!("bad base in {term:?}")))?;
            let e = e
                .parse::<u32>()
                .map_err(|_| parse_err(line, format!("bad exponent in {term:?}")))?;
            Ok((b, e))
        })
        .collect()
}

fn parse_value(expr: &str, line: usize) -> Result<Option<BigUint>> {
    if expr.trim() == "-" {
        return Ok(None);
    }
    let terms = parse_product(expr, line)?;
    Ok(Some(
        terms
            .into_iter()
            .fold(BigUint::one(), |acc, (b, e)| acc * BigUint::from(b).pow(e)),
    ))
}

/// Canonical ascending-prime rendering, `2^2 * 3`; `-` for `None`.
pub fn render_value(v: Option<&BigUint>) -> String {
    let Some(v) = v else {
        return "-".into();
    };
    match v.to_u64().map(factor_u64) {
        Some(Ok(f)) if !f.is_empty() => f
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" * "),
        _ => v.to_string(),
    }
}

fn render_meta(m: &StepMeta) -> String {
    format!(
        "{} | {} | {} | {}",
        render_value(m.factor_loop.as_ref()),
        render_value(Some(&m.cumulative_loop)),
        render_value(m.factor_coprime_order.as_ref()),
        m.cumulative_coprime_valuation
    )
}

impl ChainFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                lines.push(Line::Verbatim(raw.to_string()));
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("direction") {
                let d = rest
                    .trim()
                    .parse::<Direction>()
                    .map_err(|e| parse_err(line_no, e.to_string()))?;
                lines.push(Line::Direction(d));
                continue;
            }
            let cols: Vec<&str> = trimmed.split('|').collect();
            let factor = FactoredModulus::from_prime_powers(parse_product(cols[0], line_no)?)
                .map_err(|e| parse_err(line_no, e.to_string()))?;
            if factor.is_one() {
                return Err(parse_err(line_no, "factor must exceed 1"));
            }
            let meta = match cols.len() {
                1 => None,
                5 => {
                    let v = cols[4].trim().parse::<u32>().map_err(|_| {
                        parse_err(line_no, format!("bad valuation {:?}", cols[4].trim()))
                    })?;
                    Some(StepMeta {
                        factor_loop: parse_value(cols[1], line_no)?,
                        cumulative_loop: parse_value(cols[2], line_no)?
                            .ok_or_else(|| parse_err(line_no, "cumulative order cannot be `-`"))?,
                        factor_coprime_order: parse_value(cols[3], line_no)?,
                        cumulative_coprime_valuation: v,
                    })
                }
                n => {
                    return Err(parse_err(
                        line_no,
                        format!("expected 1 or 5 `|`-separated columns, found {n}"),
                    ))
                }
            };
            lines.push(Line::Factor {
                factor,
                meta,
                line_no,
            });
        }
        let file = ChainFile { lines };
        if file.factors().next().is_none() {
            return Err(parse_err(1, "no factor lines"));
        }
        Ok(file)
    }

    pub fn direction(&self) -> Option<Direction> {
        self.lines.iter().find_map(|l| match l {
            Line::Direction(d) => Some(*d),
            _ => None,
        })
    }

    pub fn factors(&self) -> impl Iterator<Item = &FactoredModulus> {
        self.lines.iter().filter_map(|l| match l {
            Line::Factor { factor, .. } => Some(factor),
            _ => None,
        })
    }

    /// Builds the chain, checking any stored order columns against recomputation.
    ///
    /// `direction` overrides nothing: when both it and the header are given they must agree.
    pub fn to_chain(&self, direction: Option<Direction>) -> Result<Chain> {
        let d = match (direction, self.direction()) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidInput(format!(
                    "chain file is for {b}, asked for {a}"
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => {
                return Err(Error::InvalidInput(
                    "chain file has no direction line and none was given".into(),
                ))
            }
        };
        let chain = Chain::new(d, self.factors().cloned().collect())?;
        let stored = self.lines.iter().filter_map(|l| match l {
            Line::Factor { meta, line_no, .. } => Some((meta, *line_no)),
            _ => None,
        });
        for ((meta, line_no), computed) in stored.zip(chain.meta()) {
            if let Some(m) = meta {
                if m != computed {
                    return Err(parse_err(
                        line_no,
                        format!(
                            "order columns {} do not match recomputed {}",
                            render_meta(m),
                            render_meta(computed)
                        ),
                    ));
                }
            }
        }
        Ok(chain)
    }

    /// A file for `chain` with full order columns under the given comment lines.
    pub fn from_chain(chain: &Chain, comments: &[&str]) -> Self {
        let mut lines: Vec<Line> = comments
            .iter()
            .map(|c| Line::Verbatim(format!("# {c}")))
            .collect();
        lines.push(Line::Direction(chain.direction()));
        for (k, (f, m)) in chain.factors().iter().zip(chain.meta()).enumerate() {
            lines.push(Line::Factor {
                factor: f.clone(),
                meta: Some(m.clone()),
                line_no: comments.len() + 2 + k,
            });
        }
        ChainFile { lines }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            match l {
                Line::Verbatim(s) => out.push_str(s),
                Line::Direction(d) => write!(out, "direction {d}").unwrap(),
                Line::Factor { factor, meta, .. } => {
                    write!(out, "{factor}").unwrap();
                    if let Some(m) = meta {
                        write!(out, " | {}", render_meta(m)).unwrap();
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}
