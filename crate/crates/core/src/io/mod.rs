//! Text file formats for traces, maps, peak lists and decay loci, plus the
//! grayscale map renderer. Floats are written with 17 significant digits so
//! every format round-trips bit-exactly.

mod map;
mod peaks;
mod render;
mod trace;

pub use map::{parse_map, serialize_map, MAP_HEADER};
pub use peaks::{parse_peaks, serialize_loci, serialize_peaks, LOCI_HEADER, PEAKS_HEADER};
pub use render::{parse_pgm, render_map, RenderedImage, Scaling};
pub use trace::{parse_trace, serialize_trace, TraceFile, TRACE_HEADER};

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Write via a sibling temporary file and rename, so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(std::io::Error::other(format!("not a file path: {}", path.display()))))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn parse_f64(s: &str, line: usize, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::MalformedRow {
        line,
        reason: format!("{what}: cannot parse `{}` as a number", s.trim()),
    })
}

/// Lines with 1-based numbers; a trailing newline does not yield an empty line.
pub(crate) fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
}

pub(crate) fn expect_header(first: Option<(usize, &str)>, expected: &'static str) -> Result<()> {
    match first {
        Some((_, l)) if l.trim() == expected => Ok(()),
        Some((_, l)) => Err(Error::WrongHeader {
            expected,
            found: l.to_string(),
        }),
        None => Err(Error::WrongHeader {
            expected,
            found: String::new(),
        }),
    }
}

/// `# key=value` → (key, value), or None for any other line.
pub(crate) fn metadata_line(line: &str) -> Option<(&str, &str)> {
    line.strip_prefix("# ")?.split_once('=')
}

pub(crate) fn split_fields(line: &str, n: usize, lineno: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != n {
        return Err(Error::MalformedRow {
            line: lineno,
            reason: format!("expected {n} comma-separated fields, got {}", fields.len()),
        });
    }
    Ok(fields)
}
