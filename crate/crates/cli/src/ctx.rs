use csphere_core::regvar::{RationalExponent, RegVarFunction};
use csphere_core::Error;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::{Path, PathBuf};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
    Check(Vec<String>),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
            Failure::Check(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Compute(m) => write!(f, "computation error: {m}"),
            Failure::Check(v) => write!(f, "check failed: {}", v.join("; ")),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(format!("i/o: {e}"))
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

pub fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Parameter echo, digests and timing of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Arguments after the program name, without --out and --threads.
    pub argv: Vec<String>,
    pub params: serde_json::Value,
    pub derived: serde_json::Map<String, serde_json::Value>,
    pub version: String,
    pub threads: usize,
    pub wall_clock_secs: f64,
    pub summary: String,
    pub outputs: Vec<FileRecord>,
}

pub struct Ctx {
    pub out: Option<PathBuf>,
    pub check: bool,
    pub files: Vec<FileRecord>,
    pub derived: serde_json::Map<String, serde_json::Value>,
    violations: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// 17 significant digits, '.' decimal, no locale.
pub fn f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Ctx {
    pub fn new(out: Option<PathBuf>, check: bool) -> Outcome<Self> {
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
        }
        Ok(Ctx { out, check, files: Vec::new(), derived: serde_json::Map::new(), violations: Vec::new() })
    }

    pub fn derive(&mut self, key: &str, value: impl Serialize) {
        self.derived.insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    /// Records an invariant violation; any violation turns the run into exit 3.
    pub fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.violations.push(what.into());
        }
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Outcome<()> {
        let Some(dir) = &self.out else { return Ok(()) };
        std::fs::write(dir.join(name), bytes)?;
        self.files.push(FileRecord { name: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
        Ok(())
    }

    pub fn csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Outcome<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        if self.out.is_none() {
            return Ok(());
        }
        let mut s = format!("# manifest: {MANIFEST}\n{}\n", header.join(","));
        for row in rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        self.write(name, s.as_bytes())
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Outcome<()> {
        if self.out.is_none() {
            return Ok(());
        }
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
        s.push('\n');
        self.write(name, s.as_bytes())
    }

    pub fn binary(&mut self, name: &str, bytes: &[u8]) -> Outcome<()> {
        self.write(name, bytes)
    }
}

pub fn rational(s: &str) -> Outcome<RationalExponent> {
    let c: RationalExponent = s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if !c.in_counting_range() {
        return usage(format!("exponent {c} outside [1, 2]"));
    }
    Ok(c)
}

/// c below 2 as needed by the analytic modules.
pub fn rational_class(s: &str) -> Outcome<RationalExponent> {
    let c = rational(s)?;
    if c.p() >= 2 * c.q() {
        return usage(format!("exponent {c} must be below 2 here"));
    }
    Ok(c)
}

/// A float or p/q.
pub fn real_exponent(s: &str) -> Outcome<f64> {
    let v = match s.split_once('/') {
        Some(_) => s.parse::<RationalExponent>().map(|c| c.c()).map_err(|e| Failure::Usage(e.to_string()))?,
        None => s.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("cannot parse exponent {s:?}")))?,
    };
    if !(1.0..=2.0).contains(&v) {
        return usage(format!("exponent {v} outside [1, 2]"));
    }
    Ok(v)
}

pub fn function(s: &str) -> Outcome<RegVarFunction> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

pub fn triple<T: Copy>(v: &[T], what: &str) -> Outcome<[T; 3]> {
    match v {
        [a, b, c] => Ok([*a, *b, *c]),
        _ => usage(format!("{what} needs exactly three components")),
    }
}

pub fn unit(v: &[f64], what: &str) -> Outcome<[f64; 3]> {
    let x = triple(v, what)?;
    let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return usage(format!("{what} must be a nonzero vector"));
    }
    Ok(x.map(|t| t / n))
}

pub fn read_manifest(path: &Path) -> Outcome<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad manifest {}: {e}", path.display())))
}
