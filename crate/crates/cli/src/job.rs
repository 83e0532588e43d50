//! The job file format.
//!
//! ```text
//! # comment
//! [pic-local]
//! p = 2
//! P = [1,1]
//! E = [[[0,1],[1,1]]]
//! ```
//!
//! A file holds one or more sections. Each section starts with a
//! `[command]` header followed by `key = value` lines. Unknown keys are
//! rejected, as are repeated ones.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use blockpic_core::brauertree::{Side, VertexSpec};
use blockpic_core::picard::KleinFourCase;
use thiserror::Error;

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JobSpec {
    Aut {
        p: u64,
        exponents: Vec<u32>,
    },
    Fusion {
        p: u64,
        exponents: Vec<u32>,
        e: Vec<Matrix>,
        survey: bool,
    },
    PicLocal {
        p: u64,
        exponents: Vec<u32>,
        e: Vec<Matrix>,
        m: Option<u32>,
    },
    PicFrobenius {
        p: u64,
        exponents: Vec<u32>,
        e: Vec<Matrix>,
    },
    PicCyclic {
        p: u64,
        exponents: Vec<u32>,
        e: Vec<Matrix>,
        d: Option<u64>,
    },
    PicKleinfour {
        case: KleinFourCase,
        m: Option<u32>,
    },
    PicNilpotent {
        p: u64,
        exponents: Vec<u32>,
        m: Option<u32>,
    },
    Dade {
        free: usize,
        torsion: Vec<u64>,
        action: Vec<Matrix>,
        v: Option<Vec<i64>>,
    },
    Tree {
        vertices: Vec<VertexSpec>,
        pi: Option<Vec<u32>>,
        n: Option<i64>,
    },
    Verify {
        p: u64,
        exponents: Vec<u32>,
        e: Vec<Matrix>,
        m: Option<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown command `{name}`")]
    UnknownCommand { line: usize, name: String },
    #[error("line {line}: unknown key `{key}` for [{command}]")]
    UnknownKey {
        line: usize,
        command: String,
        key: String,
    },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("[{command}] starting at line {line}: missing key `{key}`")]
    MissingKey {
        line: usize,
        command: String,
        key: String,
    },
    #[error("line {line}: `{key}` must be {expected}")]
    Type {
        line: usize,
        key: String,
        expected: &'static str,
    },
    #[error("input contains no job")]
    Empty,
}

impl JobSpec {
    pub fn command(&self) -> &'static str {
        match self {
            JobSpec::Aut { .. } => "aut",
            JobSpec::Fusion { .. } => "fusion",
            JobSpec::PicLocal { .. } => "pic-local",
            JobSpec::PicFrobenius { .. } => "pic-frobenius",
            JobSpec::PicCyclic { .. } => "pic-cyclic",
            JobSpec::PicKleinfour { .. } => "pic-kleinfour",
            JobSpec::PicNilpotent { .. } => "pic-nilpotent",
            JobSpec::Dade { .. } => "dade",
            JobSpec::Tree { .. } => "tree",
            JobSpec::Verify { .. } => "verify",
        }
    }
}

/// Keys accepted by each command, required ones first.
fn keys(command: &str) -> Option<(&'static [&'static str], &'static [&'static str])> {
    Some(match command {
        "aut" => (&["p", "P"], &[]),
        "fusion" => (&["p", "P"], &["E", "survey"]),
        "pic-local" => (&["p", "P", "E"], &["m"]),
        "pic-frobenius" => (&["p", "P", "E"], &[]),
        "pic-cyclic" => (&["p", "P", "E"], &["d"]),
        "pic-kleinfour" => (&["case"], &["m"]),
        "pic-nilpotent" => (&["p", "P"], &["m"]),
        "dade" => (&["torsion", "action"], &["free", "v"]),
        "tree" => (&["vertices"], &["pi", "n"]),
        "verify" => (&["p", "P"], &["E", "m"]),
        _ => return None,
    })
}

struct Section {
    command: String,
    line: usize,
    values: BTreeMap<String, (usize, String)>,
}

/// Parse every section of `text`.
pub fn parse_input(text: &str) -> Result<Vec<JobSpec>, ParseError> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ParseError::Syntax {
                line,
                msg: "unterminated section header".into(),
            })?;
            let name = name.trim();
            if keys(name).is_none() {
                return Err(ParseError::UnknownCommand {
                    line,
                    name: name.to_string(),
                });
            }
            sections.push(Section {
                command: name.to_string(),
                line,
                values: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = s.split_once('=').ok_or_else(|| ParseError::Syntax {
            line,
            msg: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let section = sections.last_mut().ok_or_else(|| ParseError::Syntax {
            line,
            msg: "key before any [command] header".into(),
        })?;
        let (req, opt) = keys(&section.command).expect("checked at header");
        if !req.contains(&key) && !opt.contains(&key) {
            return Err(ParseError::UnknownKey {
                line,
                command: section.command.clone(),
                key: key.to_string(),
            });
        }
        if section
            .values
            .insert(key.to_string(), (line, value.trim().to_string()))
            .is_some()
        {
            return Err(ParseError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
    }
    if sections.is_empty() {
        return Err(ParseError::Empty);
    }
    sections.iter().map(build).collect()
}

/// Parse text that must hold exactly one job.
pub fn parse_job(text: &str) -> Result<JobSpec, ParseError> {
    let mut jobs = parse_input(text)?;
    if jobs.len() != 1 {
        return Err(ParseError::Syntax {
            line: 1,
            msg: format!("expected one job, found {}", jobs.len()),
        });
    }
    Ok(jobs.remove(0))
}

struct Fields<'a> {
    s: &'a Section,
}

impl Fields<'_> {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.s.values.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn require(&self, key: &str) -> Result<(usize, &str), ParseError> {
        self.raw(key).ok_or_else(|| ParseError::MissingKey {
            line: self.s.line,
            command: self.s.command.clone(),
            key: key.to_string(),
        })
    }

    fn typed<T>(
        &self,
        key: &str,
        expected: &'static str,
        f: impl Fn(&str) -> Option<T>,
    ) -> Result<Option<T>, ParseError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => f(v).map(Some).ok_or(ParseError::Type {
                line,
                key: key.to_string(),
                expected,
            }),
        }
    }

    fn required<T>(
        &self,
        key: &str,
        expected: &'static str,
        f: impl Fn(&str) -> Option<T>,
    ) -> Result<T, ParseError> {
        self.require(key)?;
        Ok(self.typed(key, expected, f)?.expect("present"))
    }

    fn prime(&self) -> Result<u64, ParseError> {
        self.required("p", "a positive integer", |v| v.parse::<u64>().ok().filter(|&p| p > 0))
    }

    fn exponents(&self) -> Result<Vec<u32>, ParseError> {
        self.required("P", "a list of positive exponents like [2,1]", |v| {
            let list = parse_int_list(v)?;
            list.into_iter()
                .map(|x| u32::try_from(x).ok().filter(|&e| e > 0))
                .collect()
        })
    }

    fn matrices(&self, key: &str) -> Result<Vec<Matrix>, ParseError> {
        Ok(self
            .typed(key, "a list of integer matrices like [[[0,1],[1,1]]]", parse_matrix_list)?
            .unwrap_or_default())
    }

    fn m(&self) -> Result<Option<u32>, ParseError> {
        Ok(self
            .typed("m", "a nonnegative integer or `large`", |v| {
                if v == "large" {
                    Some(None)
                } else {
                    v.parse::<u32>().ok().map(Some)
                }
            })?
            .flatten())
    }
}

fn build(s: &Section) -> Result<JobSpec, ParseError> {
    let f = Fields { s };
    let (req, _) = keys(&s.command).expect("known command");
    for key in req {
        f.require(key)?;
    }
    Ok(match s.command.as_str() {
        "aut" => JobSpec::Aut {
            p: f.prime()?,
            exponents: f.exponents()?,
        },
        "fusion" => JobSpec::Fusion {
            p: f.prime()?,
            exponents: f.exponents()?,
            e: f.matrices("E")?,
            survey: f
                .typed("survey", "`yes` or `no`", |v| match v {
                    "yes" => Some(true),
                    "no" => Some(false),
                    _ => None,
                })?
                .unwrap_or(false),
        },
        "pic-local" => JobSpec::PicLocal {
            p: f.prime()?,
            exponents: f.exponents()?,
            e: f.matrices("E")?,
            m: f.m()?,
        },
        "pic-frobenius" => JobSpec::PicFrobenius {
            p: f.prime()?,
            exponents: f.exponents()?,
            e: f.matrices("E")?,
        },
        "pic-cyclic" => JobSpec::PicCyclic {
            p: f.prime()?,
            exponents: f.exponents()?,
            e: f.matrices("E")?,
            d: f.typed("d", "a positive integer", |v| v.parse::<u64>().ok().filter(|&d| d > 0))?,
        },
        "pic-kleinfour" => JobSpec::PicKleinfour {
            case: f.required("case", "one of A4, A5_principal, nilpotent", parse_case)?,
            m: f.m()?,
        },
        "pic-nilpotent" => JobSpec::PicNilpotent {
            p: f.prime()?,
            exponents: f.exponents()?,
            m: f.m()?,
        },
        "dade" => JobSpec::Dade {
            free: f
                .typed("free", "a nonnegative integer", |v| v.parse::<usize>().ok())?
                .unwrap_or(0),
            torsion: f.required("torsion", "a list of moduli like [3]", |v| {
                parse_int_list(v)?
                    .into_iter()
                    .map(|x| u64::try_from(x).ok().filter(|&d| d >= 2))
                    .collect()
            })?,
            action: f.matrices("action")?,
            v: f.typed("v", "an integer vector like [1,0]", parse_int_list)?,
        },
        "tree" => JobSpec::Tree {
            vertices: f.required("vertices", "vertices like (1 2 3); (1); (2); (3)", parse_vertices)?,
            pi: f.typed("pi", "a list of edge labels", |v| {
                parse_int_list(v)?
                    .into_iter()
                    .map(|x| u32::try_from(x).ok())
                    .collect()
            })?,
            n: f.typed("n", "an integer", |v| v.parse::<i64>().ok())?,
        },
        "verify" => JobSpec::Verify {
            p: f.prime()?,
            exponents: f.exponents()?,
            e: f.matrices("E")?,
            m: f.m()?,
        },
        _ => unreachable!("unknown commands rejected at the header"),
    })
}

fn parse_case(v: &str) -> Option<KleinFourCase> {
    match v {
        "A4" => Some(KleinFourCase::A4),
        "A5_principal" => Some(KleinFourCase::A5Principal),
        "nilpotent" => Some(KleinFourCase::Nilpotent),
        _ => None,
    }
}

fn case_name(c: KleinFourCase) -> &'static str {
    match c {
        KleinFourCase::A4 => "A4",
        KleinFourCase::A5Principal => "A5_principal",
        KleinFourCase::Nilpotent => "nilpotent",
    }
}

/// Nested bracketed integer lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nested {
    Int(i64),
    List(Vec<Nested>),
}

pub fn parse_nested(s: &str) -> Option<Nested> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let v = nested_at(bytes, &mut pos, 0)?;
    skip_ws(bytes, &mut pos);
    (pos == bytes.len()).then_some(v)
}

const MAX_DEPTH: usize = 8;

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn nested_at(b: &[u8], pos: &mut usize, depth: usize) -> Option<Nested> {
    skip_ws(b, pos);
    if *pos >= b.len() {
        return None;
    }
    if b[*pos] == b'[' {
        if depth >= MAX_DEPTH {
            return None;
        }
        *pos += 1;
        let mut items = Vec::new();
        skip_ws(b, pos);
        if *pos < b.len() && b[*pos] == b']' {
            *pos += 1;
            return Some(Nested::List(items));
        }
        loop {
            items.push(nested_at(b, pos, depth + 1)?);
            skip_ws(b, pos);
            match b.get(*pos)? {
                b',' => *pos += 1,
                b']' => {
                    *pos += 1;
                    return Some(Nested::List(items));
                }
                _ => return None,
            }
        }
    }
    let start = *pos;
    if b[*pos] == b'-' {
        *pos += 1;
    }
    while *pos < b.len() && b[*pos].is_ascii_digit() {
        *pos += 1;
    }
    std::str::from_utf8(&b[start..*pos]).ok()?.parse().ok().map(Nested::Int)
}

fn ints(n: &Nested) -> Option<Vec<i64>> {
    match n {
        Nested::List(items) => items
            .iter()
            .map(|x| match x {
                Nested::Int(v) => Some(*v),
                Nested::List(_) => None,
            })
            .collect(),
        Nested::Int(_) => None,
    }
}

fn matrix(n: &Nested) -> Option<Matrix> {
    match n {
        Nested::List(rows) => rows.iter().map(ints).collect(),
        Nested::Int(_) => None,
    }
}

pub fn parse_int_list(s: &str) -> Option<Vec<i64>> {
    ints(&parse_nested(s)?)
}

/// One matrix, `[[a,b],[c,d]]`.
pub fn parse_matrix(s: &str) -> Option<Matrix> {
    matrix(&parse_nested(s)?)
}

pub fn parse_matrix_list(s: &str) -> Option<Vec<Matrix>> {
    match parse_nested(s)? {
        Nested::List(ms) => ms.iter().map(matrix).collect(),
        Nested::Int(_) => None,
    }
}

/// `(1 2 3); r(1); s(2)`: cyclic edge orders, optionally marked with the
/// side (`r` for a `ρ`-vertex, `s` for a `σ`-vertex).
pub fn parse_vertices(s: &str) -> Option<Vec<VertexSpec>> {
    s.split(';')
        .map(|part| {
            let part = part.trim();
            let (side, rest) = match part.chars().next()? {
                'r' => (Some(Side::Rho), &part[1..]),
                's' => (Some(Side::Sigma), &part[1..]),
                _ => (None, part),
            };
            let inner = rest.trim().strip_prefix('(')?.strip_suffix(')')?;
            let edges: Option<Vec<u32>> = inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().ok())
                .collect();
            Some(VertexSpec { edges: edges?, side })
        })
        .collect()
}

fn fmt_list<T: fmt::Display>(xs: &[T]) -> String {
    let cells: Vec<String> = xs.iter().map(T::to_string).collect();
    format!("[{}]", cells.join(","))
}

pub fn fmt_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m.iter().map(|r| fmt_list(r)).collect();
    format!("[{}]", rows.join(","))
}

fn fmt_matrices(ms: &[Matrix]) -> String {
    let items: Vec<String> = ms.iter().map(fmt_matrix).collect();
    format!("[{}]", items.join(","))
}

fn fmt_m(m: Option<u32>) -> String {
    m.map_or_else(|| "large".to_string(), |m| m.to_string())
}

pub fn fmt_vertices(vs: &[VertexSpec]) -> String {
    let parts: Vec<String> = vs
        .iter()
        .map(|v| {
            let mark = match v.side {
                Some(Side::Rho) => "r",
                Some(Side::Sigma) => "s",
                None => "",
            };
            let edges: Vec<String> = v.edges.iter().map(u32::to_string).collect();
            format!("{mark}({})", edges.join(" "))
        })
        .collect();
    parts.join("; ")
}

/// The canonical text of a job; `parse_job(&print_job(j)) == j`.
pub fn print_job(job: &JobSpec) -> String {
    let mut out = format!("[{}]\n", job.command());
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    match job {
        JobSpec::Aut { p, exponents } => {
            kv("p", p.to_string());
            kv("P", fmt_list(exponents));
        }
        JobSpec::Fusion {
            p,
            exponents,
            e,
            survey,
        } => {
            kv("p", p.to_string());
            kv("P", fmt_list(exponents));
            kv("E", fmt_matrices(e));
            kv("survey", if *survey { "yes" } else { "no" }.to_string());
        }
        JobSpec::PicLocal { p, exponents, e, m } | JobSpec::Verify { p, exponents, e, m } => {
            kv("p", p.to_string());
            kv("P", fmt_list(exponents));
            kv("E", fmt_matrices(e));
            kv("m", fmt_m(*m));
        }
        JobSpec::PicFrobenius { p, exponents, e } => {
            kv("p", p.to_string());
            kv("P", fmt_list(exponents));
            kv("E", fmt_matrices(e));
        }
        JobSpec::PicCyclic { p, exponents, e, d } => {
            kv("p", p.to_string());
            kv("P", fmt_list(exponents));
            kv("E", fmt_matrices(e));
            if let Some(d) = d {
                kv("d", d.to_string());
            }
        }
        JobSpec::PicKleinfour { case, m } => {
            kv("case", case_name(*case).to_string());
            kv("m", fmt_m(*m));
        }
        JobSpec::PicNilpotent { p, exponents, m } => {
            kv("p", p.to_string());
            kv("P", fmt_list(exponents));
            kv("m", fmt_m(*m));
        }
        JobSpec::Dade {
            free,
            torsion,
            action,
            v,
        } => {
            kv("free", free.to_string());
            kv("torsion", fmt_list(torsion));
            kv("action", fmt_matrices(action));
            if let Some(v) = v {
                kv("v", fmt_list(v));
            }
        }
        JobSpec::Tree { vertices, pi, n } => {
            kv("vertices", fmt_vertices(vertices));
            if let Some(pi) = pi {
                kv("pi", fmt_list(pi));
            }
            if let Some(n) = n {
                kv("n", n.to_string());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pic_local_example() {
        let job = parse_job("[pic-local]\np = 2\nP = [1,1]\nE = [[[0,1],[1,1]]]").unwrap();
        assert_eq!(
            job,
            JobSpec::PicLocal {
                p: 2,
                exponents: vec![1, 1],
                e: vec![vec![vec![0, 1], vec![1, 1]]],
                m: None,
            }
        );
    }

    #[test]
    fn missing_p() {
        let err = parse_job("[pic-local]\nP = [1,1]\nE = []").unwrap_err();
        assert!(matches!(err, ParseError::MissingKey { ref key, .. } if key == "p"));
    }

    #[test]
    fn tree_example() {
        let job = parse_job("[tree]\nvertices = (1 2 3); (1); (2); (3)").unwrap();
        let JobSpec::Tree { vertices, .. } = &job else { panic!() };
        assert_eq!(vertices.len(), 4);
        assert_eq!(vertices[0].edges, vec![1, 2, 3]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_job("[aut]\np = 2\nQ = [1]"), Err(ParseError::UnknownKey { .. })));
        assert!(matches!(parse_job("[aut]\np = 2\np = 3\nP = [1]"), Err(ParseError::DuplicateKey { .. })));
        assert!(matches!(parse_job("[aut]\np = two\nP = [1]"), Err(ParseError::Type { .. })));
        assert!(matches!(parse_job("[nope]"), Err(ParseError::UnknownCommand { .. })));
        assert!(matches!(parse_job("p = 2"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_job(""), Err(ParseError::Empty)));
    }

    #[test]
    fn nested_lists() {
        assert_eq!(parse_matrix("[[1, -2],[3,4]]"), Some(vec![vec![1, -2], vec![3, 4]]));
        assert_eq!(parse_int_list("[]"), Some(vec![]));
        assert_eq!(parse_int_list("[1,]"), None);
        assert_eq!(parse_int_list("[[[[[[[[[[1]]]]]]]]]]"), None);
    }
}
