//! On-disk interchange formats.
//!
//! Two file kinds, both keyed by an explicit format tag so a wrong file is
//! rejected with a message instead of a confusing downstream error:
//!
//! * coloring files: the full color array in colex rank order, plus (r, n)
//!   and the declared color count. JSON is canonical; a `.csv` path selects
//!   a compact line-oriented variant whose header row carries r and n and
//!   whose remaining lines carry one color id each, again in colex order.
//! * factor files: the n edges of a one-factor with their colors, plus the
//!   construction metadata when the n = 3 solver produced it. JSON only.
//!
//! Readers re-validate everything they can locally: array lengths, the
//! declared color count against the distinct count, factor shape, color
//! distinctness, and (for colorings) properness. A factor file's colors
//! are its own claim; checking them against a coloring is the verify
//! command's job, since only it has both files.
//!
//! Augmentation traces are written as JSON lines, one trace per line, so
//! they stream and diff well.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Edge, OneFactor, Params, ProperColoring};
use crate::solver::{K3rCertificate, K3rMode};
use crate::trace::AugmentationTrace;

pub const COLORING_FORMAT: &str = "rainbow-coloring";
pub const COLORING_VERSION: u32 = 1;
pub const FACTOR_FORMAT: &str = "rainbow-factor";

// ==================================================================
// Coloring files
// ==================================================================

/// JSON schema of a coloring file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringFile {
    pub format: String,
    pub version: u32,
    pub r: usize,
    pub n: usize,
    pub color_count: usize,
    /// Color id of each edge, indexed by colex rank.
    pub colors: Vec<u32>,
}

impl ColoringFile {
    pub fn from_coloring(coloring: &ProperColoring) -> Self {
        let params = coloring.params();
        ColoringFile {
            format: COLORING_FORMAT.to_string(),
            version: COLORING_VERSION,
            r: params.r(),
            n: params.n(),
            color_count: coloring.color_count(),
            colors: coloring.colors().to_vec(),
        }
    }

    /// Validates the declared fields and re-verifies properness.
    pub fn into_coloring(self) -> Result<ProperColoring> {
        if self.format != COLORING_FORMAT {
            return Err(Error::InvalidParams(format!(
                "format tag is {:?}, expected {COLORING_FORMAT:?}",
                self.format
            )));
        }
        if self.version != COLORING_VERSION {
            return Err(Error::InvalidParams(format!(
                "unsupported coloring file version {}",
                self.version
            )));
        }
        let params = Params::new(self.r, self.n)?;
        let coloring = ProperColoring::new(params, self.colors)?;
        if coloring.color_count() != self.color_count {
            return Err(Error::InvalidParams(format!(
                "declared color_count {} but the array holds {} distinct colors",
                self.color_count,
                coloring.color_count()
            )));
        }
        Ok(coloring)
    }
}

/// Writes a coloring to `path`; `.csv` selects the line-oriented variant,
/// anything else the canonical JSON.
pub fn write_coloring(path: &Path, coloring: &ProperColoring) -> Result<()> {
    let body = if is_csv(path) {
        let params = coloring.params();
        let mut s = format!("{},{}\n", params.r(), params.n());
        for c in coloring.colors() {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    } else {
        let mut s = serde_json::to_string(&ColoringFile::from_coloring(coloring))
            .expect("coloring files serialize");
        s.push('\n');
        s
    };
    write_text(path, &body)
}

/// Reads a coloring from `path`, dispatching on the extension, and
/// re-validates it (including properness).
pub fn read_coloring(path: &Path) -> Result<ProperColoring> {
    let text = read_text(path)?;
    if is_csv(path) {
        read_coloring_csv(path, &text)
    } else {
        let file: ColoringFile = serde_json::from_str(&text).map_err(|e| parse(path, e))?;
        file.into_coloring().map_err(|e| rewrap(path, e))
    }
}

fn read_coloring_csv(path: &Path, text: &str) -> Result<ProperColoring> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse(path, "empty file, expected an r,n header line"))?;
    let mut parts = header.split(',');
    let (r, n) = match (parts.next(), parts.next(), parts.next()) {
        (Some(r), Some(n), None) => (
            r.trim()
                .parse::<usize>()
                .map_err(|_| parse(path, format!("bad r in header {header:?}")))?,
            n.trim()
                .parse::<usize>()
                .map_err(|_| parse(path, format!("bad n in header {header:?}")))?,
        ),
        _ => return Err(parse(path, format!("header {header:?} is not r,n"))),
    };
    let mut colors = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let c: u32 = line
            .parse()
            .map_err(|_| parse(path, format!("line {}: bad color id {line:?}", lineno + 1)))?;
        colors.push(c);
    }
    let params = Params::new(r, n).map_err(|e| rewrap(path, e))?;
    ProperColoring::new(params, colors).map_err(|e| rewrap(path, e))
}

// ==================================================================
// Factor files
// ==================================================================

/// JSON schema of a one-factor file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorFile {
    pub format: String,
    pub r: usize,
    pub n: usize,
    /// The n edges, each a sorted vertex array.
    pub edges: Vec<Edge>,
    /// Declared color of each edge, parallel to `edges`.
    pub colors: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<K3rMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<K3rCertificate>,
}

impl FactorFile {
    pub fn from_factor(
        coloring: &ProperColoring,
        factor: &OneFactor,
        mode: Option<K3rMode>,
        certificate: Option<K3rCertificate>,
    ) -> Self {
        let params = coloring.params();
        FactorFile {
            format: FACTOR_FORMAT.to_string(),
            r: params.r(),
            n: params.n(),
            edges: factor.edges().to_vec(),
            colors: factor.colors_under(coloring),
            mode,
            certificate,
        }
    }

    /// Validates shape and color distinctness and rebuilds the factor.
    /// The declared colors are not checked against any coloring here.
    pub fn into_factor(self) -> Result<(OneFactor, Vec<u32>)> {
        if self.format != FACTOR_FORMAT {
            return Err(Error::InvalidParams(format!(
                "format tag is {:?}, expected {FACTOR_FORMAT:?}",
                self.format
            )));
        }
        let params = Params::new(self.r, self.n)?;
        if self.colors.len() != self.edges.len() {
            return Err(Error::InvalidParams(format!(
                "{} edges but {} colors",
                self.edges.len(),
                self.colors.len()
            )));
        }
        let mut sorted = self.colors.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(
                "declared edge colors are not pairwise distinct".into(),
            ));
        }
        let factor = OneFactor::new(params, self.edges)?;
        Ok((factor, self.colors))
    }
}

/// Writes a factor file as JSON (factors have no CSV form).
pub fn write_factor(path: &Path, file: &FactorFile) -> Result<()> {
    let mut body = serde_json::to_string_pretty(file).expect("factor files serialize");
    body.push('\n');
    write_text(path, &body)
}

/// Reads and validates a factor file.
pub fn read_factor(path: &Path) -> Result<FactorFile> {
    let text = read_text(path)?;
    let file: FactorFile = serde_json::from_str(&text).map_err(|e| parse(path, e))?;
    if file.format != FACTOR_FORMAT {
        return Err(parse(
            path,
            format!("format tag is {:?}, expected {FACTOR_FORMAT:?}", file.format),
        ));
    }
    Ok(file)
}

// ==================================================================
// Trace dumps
// ==================================================================

/// Writes traces as JSON lines, one trace per line.
pub fn write_traces(path: &Path, traces: &[AugmentationTrace]) -> Result<()> {
    let mut body = String::new();
    for trace in traces {
        body.push_str(&serde_json::to_string(trace).expect("traces serialize"));
        body.push('\n');
    }
    write_text(path, &body)
}

/// Reads a JSON-lines trace dump.
pub fn read_traces(path: &Path) -> Result<Vec<AugmentationTrace>> {
    let text = read_text(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| parse(path, e)))
        .collect()
}

// ==================================================================

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_text(path: &Path, body: &str) -> Result<()> {
    let io = |source| Error::Io { path: path.display().to_string(), source };
    let mut f = std::fs::File::create(path).map_err(io)?;
    f.write_all(body.as_bytes()).map_err(io)?;
    Ok(())
}

fn parse(path: &Path, message: impl ToString) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

/// Attaches the file path to structural errors raised below the file
/// layer, keeping properness failures intact for exit-code mapping.
fn rewrap(path: &Path, e: Error) -> Error {
    match e {
        Error::NotProper(w) => Error::NotProper(w),
        Error::InvalidParams(m)
        | Error::InvalidEdge(m)
        | Error::Precondition(m)
        | Error::Capacity(m) => parse(path, m),
        Error::ColorLengthMismatch { got, expected } => {
            parse(path, format!("color array has length {got}, expected {expected}"))
        }
        other => other,
    }
}

// ==================================================================
