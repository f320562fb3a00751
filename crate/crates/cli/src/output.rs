//! Number formatting, CSV/JSON emission and the run manifest.

use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use sha2::{Digest, Sha256};

/// Bumped whenever a JSON payload changes shape.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One emitted file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub body: String,
}

/// Six significant digits in scientific notation.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.5e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// serde_json formatter printing every float with [`num`]. Non-finite
/// values never reach it; serde_json writes them as `null`.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(num(value).as_bytes())
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    payload: &'a T,
}

pub fn json_artifact<T: Serialize>(name: &str, command: &str, payload: &T) -> Artifact {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        payload,
    }
    .serialize(&mut ser)
    .expect("payload types serialise");
    buf.push(b'\n');
    Artifact {
        name: name.into(),
        body: String::from_utf8(buf).expect("serde_json emits UTF-8"),
    }
}

/// CSV built row by row from pre-formatted cells.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(cells).expect("in-memory write");
    }

    pub fn finish(self, name: &str) -> Artifact {
        let bytes = self.writer.into_inner().expect("in-memory flush");
        Artifact {
            name: name.into(),
            body: String::from_utf8(bytes).expect("cells are UTF-8"),
        }
    }
}

/// Two-column `quantity,value` table.
pub struct KeyValues(Table);

impl KeyValues {
    pub fn new() -> Self {
        Self(Table::new(&["quantity", "value"]))
    }
    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.0.row([key, &num(value)]);
        self
    }
    pub fn text(&mut self, key: &str, value: &str) -> &mut Self {
        self.0.row([key, value]);
        self
    }
    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.text(key, if value { "true" } else { "false" })
    }
    pub fn finish(self, name: &str) -> Artifact {
        self.0.finish(name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub tool_version: &'static str,
    pub timestamp: String,
    pub outputs: Vec<OutputEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    /// `invocation` is the canonical command line; the timestamp stays out
    /// of every hash.
    pub fn new(command: &str, invocation: &str, config: &[u8], artifacts: &[Artifact]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(invocation.as_bytes());
        hasher.update([0u8]);
        hasher.update(config);
        Self {
            command: command.into(),
            config_hash: hasher.finalize().iter().map(|b| format!("{b:02x}")).collect(),
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            outputs: artifacts
                .iter()
                .map(|a| OutputEntry {
                    file: a.name.clone(),
                    sha256: sha256_hex(a.body.as_bytes()),
                })
                .collect(),
        }
    }
}

pub fn write_all(dir: &Path, artifacts: &[Artifact], manifest: &RunManifest) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for a in artifacts {
        std::fs::write(dir.join(&a.name), &a.body)?;
    }
    let mut body = serde_json::to_string_pretty(manifest).map_err(io::Error::other)?;
    body.push('\n');
    std::fs::write(dir.join("manifest.json"), body)
}

/// Stdout form: a single artifact as is, several each under a `# name` line.
pub fn render_stdout(artifacts: &[Artifact]) -> String {
    if let [only] = artifacts {
        return only.body.clone();
    }
    let mut out = String::new();
    for a in artifacts {
        out.push_str("# ");
        out.push_str(&a.name);
        out.push('\n');
        out.push_str(&a.body);
    }
    out
}
