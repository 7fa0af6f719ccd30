//! Plain-text LP files in the CPLEX LP dialect, solution files, and the
//! external solver round trip.
//!
//! ```text
//! \ chi_f
//! Minimize
//!  obj: x0 + x1 + x2
//! Subject To
//!  v0: x0 >= 1
//! Bounds
//!  x0 >= 0
//! End
//! ```
//!
//! Solution files hold `x<j> <value>` lines, optionally `y<i> <value>` row
//! duals and a `# status <word>` line.

use std::fmt::Write as _;
use std::process::Command;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use super::{LpModel, LpRow, Sense, Status};
use crate::error::{Error, Result};
use crate::field::Rational;

/// Environment variable holding the external solver command template.
pub const EXTERNAL_SOLVER_ENV: &str = "CHIGF_LP_SOLVER";

const TERMS_PER_LINE: usize = 32;

fn write_terms(s: &mut String, terms: &[(u32, i64)]) {
    if terms.is_empty() {
        s.push_str(" 0 x0");
        return;
    }
    for (k, &(j, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            s.push_str("\n  ");
        }
        let sign = if c < 0 { "-" } else { "+" };
        if k == 0 {
            if c < 0 {
                s.push_str(" -");
            }
        } else {
            write!(s, " {}", sign).unwrap();
        }
        if c.abs() != 1 {
            write!(s, " {}", c.abs()).unwrap();
        }
        write!(s, " x{}", j).unwrap();
    }
}

/// Exact decimal rendering when the denominator divides a power of ten.
fn decimal(r: &Rational) -> Option<String> {
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(r.numer().to_string());
    }
    let scaled = r * Rational::from_integer(BigInt::from(10).pow(places));
    let n = scaled.to_integer();
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - places as usize);
    Some(format!(
        "{}{}.{}",
        if n.is_negative() { "-" } else { "" },
        int,
        frac
    ))
}

/// Renders `model` as LP text. Rows with a non-decimal right-hand side are
/// multiplied through by its denominator.
pub fn export_lp(model: &LpModel) -> String {
    let mut s = String::new();
    writeln!(s, "\\ {}", model.name).unwrap();
    s.push_str("Minimize\n obj:");
    let obj: Vec<(u32, i64)> = model
        .cost
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(j, c)| (j as u32, *c))
        .collect();
    write_terms(&mut s, &obj);
    s.push_str("\nSubject To\n");
    for row in &model.rows {
        let (coeffs, rhs) = match decimal(&row.rhs) {
            Some(d) => (row.coeffs.clone(), d),
            None => {
                let den = row.rhs.denom().to_i64().expect("denominator fits i64");
                let coeffs = row.coeffs.iter().map(|&(j, c)| (j, c * den)).collect();
                (coeffs, row.rhs.numer().to_string())
            }
        };
        write!(s, " {}:", row.name).unwrap();
        write_terms(&mut s, &coeffs);
        writeln!(s, " {} {}", row.sense.symbol(), rhs).unwrap();
    }
    s.push_str("Bounds\n");
    for (j, free) in model.free.iter().enumerate() {
        if *free {
            writeln!(s, " x{} free", j).unwrap();
        } else {
            writeln!(s, " x{} >= 0", j).unwrap();
        }
    }
    s.push_str("End\n");
    s
}

/// SHA-256 of the exported text, in hex.
pub fn model_hash(model: &LpModel) -> String {
    hex::encode(Sha256::digest(export_lp(model).as_bytes()))
}

fn parse_decimal(t: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad number {:?}", t));
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{}{}", int, frac);
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(n);
    if scale >= 0 {
        r *= Rational::from_integer(ten.pow(scale as u32));
    } else {
        r /= Rational::from_integer(ten.pow((-scale) as u32));
    }
    Ok(if neg { -r } else { r })
}

fn parse_var(t: &str) -> Result<u32> {
    t.strip_prefix('x')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad variable {:?}", t)))
}

fn parse_terms(tokens: &[&str]) -> Result<Vec<(u32, i64)>> {
    let mut out: Vec<(u32, i64)> = Vec::new();
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for &t in tokens {
        match t {
            "+" => sign = 1,
            "-" => sign = -1,
            _ if t.starts_with('x') => {
                let c = sign * coef.unwrap_or(1);
                if c != 0 {
                    out.push((parse_var(t)?, c));
                }
                sign = 1;
                coef = None;
            }
            _ => {
                coef = Some(
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t)))?,
                )
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(PartialEq)]
enum Section {
    Head,
    Objective,
    Constraints,
    Bounds,
    End,
}

fn parse_row(st: &[&str]) -> Result<LpRow> {
    let name = st[0]
        .strip_suffix(':')
        .ok_or_else(|| Error::Parse(format!("unnamed constraint starting {:?}", st[0])))?
        .to_string();
    let k = st
        .iter()
        .position(|t| matches!(*t, "<=" | ">=" | "="))
        .ok_or_else(|| Error::Parse(format!("constraint {} has no sense", name)))?;
    let sense = match st[k] {
        "<=" => Sense::Le,
        ">=" => Sense::Ge,
        _ => Sense::Eq,
    };
    if k + 2 != st.len() {
        return Err(Error::Parse(format!(
            "constraint {} has a malformed right-hand side",
            name
        )));
    }
    Ok(LpRow {
        name,
        coeffs: parse_terms(&st[1..k])?,
        sense,
        rhs: parse_decimal(st[k + 1])?,
    })
}

/// Parses LP text written by [`export_lp`].
pub fn import_lp(text: &str) -> Result<LpModel> {
    let mut model = LpModel::default();
    let mut section = Section::Head;
    let mut pending: Vec<&str> = Vec::new();
    let mut objective: Vec<&str> = Vec::new();
    let mut bounds: Vec<(u32, bool)> = Vec::new();
    for line in text.lines() {
        if let Some(c) = line.strip_prefix('\\') {
            if model.name.is_empty() {
                model.name = c.trim().to_string();
            }
            continue;
        }
        let next = match line.trim().to_ascii_lowercase().as_str() {
            "minimize" => Some(Section::Objective),
            "subject to" => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(next) = next {
            if !pending.is_empty() {
                model.rows.push(parse_row(&pending)?);
                pending.clear();
            }
            section = next;
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match section {
            Section::Objective => objective.extend(tokens),
            Section::Constraints => {
                if tokens[0].ends_with(':') && !pending.is_empty() {
                    model.rows.push(parse_row(&pending)?);
                    pending.clear();
                }
                pending.extend(tokens);
            }
            Section::Bounds => match tokens.as_slice() {
                [v, "free"] => bounds.push((parse_var(v)?, true)),
                [v, ">=", "0"] => bounds.push((parse_var(v)?, false)),
                _ => return Err(Error::Parse(format!("unsupported bound {:?}", line))),
            },
            Section::Head | Section::End => {
                return Err(Error::Parse(format!("unexpected line {:?}", line)));
            }
        }
    }
    if section != Section::End {
        return Err(Error::Parse("missing End".into()));
    }
    let n = bounds
        .iter()
        .map(|(j, _)| *j as usize + 1)
        .max()
        .unwrap_or(0);
    model.cost = vec![0; n];
    model.free = vec![false; n];
    for (j, f) in bounds {
        model.free[j as usize] = f;
    }
    let obj_tokens = objective.strip_prefix(&["obj:"]).unwrap_or(&objective);
    for (j, c) in parse_terms(obj_tokens)? {
        *model
            .cost
            .get_mut(j as usize)
            .ok_or_else(|| Error::Parse(format!("objective variable x{} has no bound", j)))? = c;
    }
    if let Some(r) = model
        .rows
        .iter()
        .find(|r| r.coeffs.iter().any(|(j, _)| *j as usize >= n))
    {
        return Err(Error::Parse(format!(
            "constraint {} uses a variable without bounds",
            r.name
        )));
    }
    Ok(model)
}

/// Values read back from a solution file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSolution {
    pub status: Status,
    pub primal: Vec<f64>,
    /// Row duals in row order; empty if the file has none.
    pub dual: Vec<f64>,
}

/// Reads `x<j> <value>` lines; variables not listed are zero.
pub fn read_solution(text: &str, n_vars: usize, n_rows: usize) -> Result<ExternalSolution> {
    let mut status = Status::Optimal;
    let mut primal = vec![0.0; n_vars];
    let mut dual = vec![0.0; n_rows];
    let mut saw_dual = false;
    for line in text.lines() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["#", "status", s] => {
                status = match *s {
                    "optimal" => Status::Optimal,
                    "infeasible" => Status::Infeasible,
                    "unbounded" => Status::Unbounded,
                    _ => Status::NumericFailure,
                }
            }
            [c, ..] if c.starts_with('#') => {}
            [name, value] => {
                let v: f64 = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad value {:?}", line)))?;
                let (vec, idx) = if let Some(j) = name.strip_prefix('x') {
                    (&mut primal, j)
                } else if let Some(i) = name.strip_prefix('y') {
                    saw_dual = true;
                    (&mut dual, i)
                } else {
                    return Err(Error::Parse(format!("bad solution line {:?}", line)));
                };
                let k: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index {:?}", line)))?;
                *vec.get_mut(k)
                    .ok_or_else(|| Error::Parse(format!("index out of range {:?}", line)))? = v;
            }
            _ => return Err(Error::Parse(format!("bad solution line {:?}", line))),
        }
    }
    if !saw_dual {
        dual.clear();
    }
    Ok(ExternalSolution {
        status,
        primal,
        dual,
    })
}

/// Exports `model`, runs the command template, and reads the solution back.
pub(crate) fn run_external(model: &LpModel, template: &str) -> Result<ExternalSolution> {
    let dir = tempfile::tempdir()?;
    let lp = dir.path().join("model.lp");
    let sol = dir.path().join("model.sol");
    std::fs::write(&lp, export_lp(model))?;
    let cmd = template
        .replace("{lp}", &lp.to_string_lossy())
        .replace("{sol}", &sol.to_string_lossy());
    log::info!("running external solver: {}", cmd);
    let out = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .output()
        .map_err(|e| Error::BackendUnavailable(format!("{}: {}", cmd, e)))?;
    if !out.status.success() {
        return Err(Error::BackendUnavailable(format!(
            "{} exited with {}: {}",
            cmd,
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        )));
    }
    let text = std::fs::read_to_string(&sol)
        .map_err(|e| Error::BackendUnavailable(format!("no solution file from {}: {}", cmd, e)))?;
    read_solution(&text, model.n_vars(), model.n_rows())
}
