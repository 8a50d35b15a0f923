//! Atomic output files and the `run.json` metadata record.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Versioned<'a, T: Serialize> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: &'a T,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digest_file(path: &Path) -> Result<FileDigest> {
    let mut file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex(&hasher.finalize()),
    })
}

struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Collects everything a run writes into one directory.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<FileDigest>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Writes `name` via a temp file in the same directory, renamed into
    /// place only once `fill` succeeds.
    pub fn write<F>(&mut self, name: &str, fill: F) -> Result<()>
    where
        F: FnOnce(&mut dyn Write) -> Result<()>,
    {
        let tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        let mut w = HashingWriter {
            inner: BufWriter::new(tmp),
            hasher: Sha256::new(),
        };
        fill(&mut w)?;
        w.flush()?;
        let sha256 = hex(&w.hasher.finalize());
        let tmp = w.inner.into_inner().map_err(|e| e.into_error())?;
        let target = self.dir.join(name);
        tmp.persist(&target)
            .with_context(|| format!("writing {}", target.display()))?;
        self.written.push(FileDigest {
            path: name.to_string(),
            sha256,
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(
                &mut *w,
                &Versioned {
                    schema_version: SCHEMA_VERSION,
                    body,
                },
            )?;
            writeln!(w)?;
            Ok(())
        })
    }

    /// Writes `run.json`. Its `digest` is the SHA-256 of the same document
    /// with `digest` set to the empty string.
    pub fn finish<C: Serialize>(mut self, subcommand: &str, config: &C, inputs: Vec<FileDigest>) -> Result<()> {
        #[derive(Serialize)]
        struct Run<'a, C: Serialize> {
            schema_version: u32,
            tool: &'static str,
            version: &'static str,
            subcommand: &'a str,
            config: &'a C,
            inputs: Vec<FileDigest>,
            outputs: Vec<FileDigest>,
            digest: String,
        }
        let mut run = Run {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config,
            inputs,
            outputs: std::mem::take(&mut self.written),
            digest: String::new(),
        };
        run.digest = hex(&Sha256::digest(serde_json::to_vec_pretty(&run)?));
        let bytes = serde_json::to_vec_pretty(&run)?;
        self.write("run.json", |w| {
            w.write_all(&bytes)?;
            writeln!(w)?;
            Ok(())
        })
    }
}
