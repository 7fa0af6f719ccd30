//! Text formats for graphs and colourings, and the bundled data files.
//!
//! Graph files hold one vertex per line as four space separated integers
//! `a b c d`. Lines starting with `#` are comments. Both formats keep
//! comments and blank lines so that parse + serialize is byte-identical for
//! canonically formatted files.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::MoserPoint;

pub const M7_TXT: &str = include_str!("../../../data/m7.txt");
pub const G27_TXT: &str = include_str!("../../../data/g27.txt");
pub const G27_COLOURING_TXT: &str = include_str!("../../../data/g27_colouring.txt");

pub fn m7_points() -> Vec<MoserPoint> {
    GraphFile::parse(M7_TXT)
        .expect("bundled M7 parses")
        .points()
}

pub fn g27_points() -> Vec<MoserPoint> {
    GraphFile::parse(G27_TXT)
        .expect("bundled G27 parses")
        .points()
}

pub fn g27_colouring() -> Vec<usize> {
    ColouringFile::parse(G27_COLOURING_TXT)
        .expect("bundled colouring parses")
        .colours()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum GraphLine {
    Text(String),
    Point(MoserPoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphFile {
    lines: Vec<GraphLine>,
}

fn is_passthrough(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (no, line) in text.lines().enumerate() {
            if is_passthrough(line) {
                lines.push(GraphLine::Text(line.to_string()));
            } else {
                let p = line
                    .parse()
                    .map_err(|e| Error::Parse(format!("line {}: {}", no + 1, e)))?;
                lines.push(GraphLine::Point(p));
            }
        }
        Ok(GraphFile { lines })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_points(points: &[MoserPoint]) -> Self {
        GraphFile {
            lines: points.iter().map(|p| GraphLine::Point(*p)).collect(),
        }
    }

    pub fn with_comment(mut self, comment: &str) -> Self {
        self.lines
            .insert(0, GraphLine::Text(format!("# {}", comment)));
        self
    }

    /// Points in file order.
    pub fn points(&self) -> Vec<MoserPoint> {
        self.lines
            .iter()
            .filter_map(|l| match l {
                GraphLine::Point(p) => Some(*p),
                GraphLine::Text(_) => None,
            })
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            match l {
                GraphLine::Text(t) => s.push_str(t),
                GraphLine::Point(p) => write!(s, "{}", p).unwrap(),
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ColouringLine {
    Text(String),
    Colours(Vec<usize>),
}

/// Per-vertex colours in graph-file order, whitespace separated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColouringFile {
    lines: Vec<ColouringLine>,
}

impl ColouringFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (no, line) in text.lines().enumerate() {
            if is_passthrough(line) {
                lines.push(ColouringLine::Text(line.to_string()));
                continue;
            }
            let colours = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("line {}: bad colour {:?}", no + 1, t)))
                })
                .collect::<Result<Vec<_>>>()?;
            lines.push(ColouringLine::Colours(colours));
        }
        Ok(ColouringFile { lines })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_colours(colours: &[usize]) -> Self {
        ColouringFile {
            lines: vec![ColouringLine::Colours(colours.to_vec())],
        }
    }

    pub fn colours(&self) -> Vec<usize> {
        self.lines
            .iter()
            .flat_map(|l| match l {
                ColouringLine::Colours(c) => c.clone(),
                ColouringLine::Text(_) => Vec::new(),
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            match l {
                ColouringLine::Text(t) => s.push_str(t),
                ColouringLine::Colours(c) => {
                    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    s.push_str(&parts.join(" "));
                }
            }
            s.push('\n');
        }
        s
    }
}
