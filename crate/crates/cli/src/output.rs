//! Provenance stamping and file writers shared by the commands.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Flags that only affect where or how fast a run happens. They are left
/// out of the recorded command so reruns stay byte-identical.
const UNRECORDED: [&str; 2] = ["--threads", "--out"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// What every artifact records about the run that produced it.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub command: String,
    pub seed: u64,
}

fn quote(arg: &str) -> String {
    if !arg.is_empty() && arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_.,:=/+@%".contains(c)) {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', r"'\''"))
    }
}

impl Provenance {
    /// Builds the record from raw arguments, program name first.
    pub fn from_args<I, S>(args: I, seed: u64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut parts = vec!["isingbench".to_string()];
        let mut skip_next = false;
        for arg in args.into_iter().skip(1) {
            let arg = arg.as_ref();
            if skip_next {
                skip_next = false;
                continue;
            }
            if UNRECORDED.contains(&arg) {
                skip_next = true;
                continue;
            }
            if UNRECORDED.iter().any(|f| arg.starts_with(&format!("{f}="))) {
                continue;
            }
            parts.push(quote(arg));
        }
        Provenance { command: parts.join(" "), seed }
    }

    /// Metadata for instance and sample files. No timestamp, so identical
    /// runs give identical bytes.
    pub fn json(&self) -> Value {
        json!({ "tool": "isingbench", "version": VERSION, "command": self.command, "seed": self.seed })
    }

    pub fn json_with(&self, extra: Value) -> Value {
        let mut v = self.json();
        if let (Some(m), Value::Object(e)) = (v.as_object_mut(), extra) {
            m.extend(e);
        }
        v
    }

    /// `# `-prefixed header for CSV reports.
    pub fn csv_header(&self, extra: &[(&str, String)]) -> String {
        let mut s = format!(
            "# isingbench {VERSION}\n# command: {}\n# seed: {}\n# timestamp: {}\n",
            self.command,
            self.seed,
            timestamp()
        );
        for (k, v) in extra {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s
    }

    /// Comment body for SVG reports; deterministic for fixed inputs.
    pub fn svg_comment(&self) -> String {
        format!("isingbench {VERSION}; command: {}; seed: {}", self.command, self.seed).replace("--", "- -")
    }
}

/// UTC time in RFC 3339. `SOURCE_DATE_EPOCH` overrides the clock.
pub fn timestamp() -> String {
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .map(|secs| UNIX_EPOCH + Duration::from_secs(secs))
        .unwrap_or_else(SystemTime::now);
    humantime::format_rfc3339_seconds(now).to_string()
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes `rows` as `<stem>.csv` or `<stem>.json` under `dir`.
pub fn write_table<T: Serialize>(
    dir: &Path,
    stem: &str,
    rows: &[T],
    prov: &Provenance,
    extra: &[(&str, String)],
    format: Format,
) -> Result<PathBuf> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(prov.csv_header(extra).into_bytes());
            for r in rows {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("flushing CSV: {e}"))?;
            let path = dir.join(format!("{stem}.csv"));
            write_text(&path, &String::from_utf8(bytes)?)?;
            Ok(path)
        }
        Format::Json => {
            let mut meta = prov.json();
            meta["timestamp"] = json!(timestamp());
            for (k, v) in extra {
                meta[*k] = json!(v);
            }
            let mut text = serde_json::to_string_pretty(&json!({ "meta": meta, "rows": rows }))?;
            text.push('\n');
            let path = dir.join(format!("{stem}.json"));
            write_text(&path, &text)?;
            Ok(path)
        }
    }
}
