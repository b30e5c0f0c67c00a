use super::{expect_header, fmt_f64, metadata_line, numbered_lines, parse_f64, split_fields};
use crate::error::{Error, Result};
use crate::params::{ParamFile, PARAM_FILE_KEYS};
use crate::transport::TransportTrace;

pub const TRACE_HEADER: &str = "# trace-v1";
const COLUMNS: &str = "B_tesla,rho_ohm";

/// A ρ_xx(B) trace with free-form `key=value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub metadata: Vec<(String, String)>,
    pub b: Vec<f64>,
    pub rho: Vec<f64>,
}

impl TraceFile {
    /// Parameter snapshot in config-file units plus the coupling used.
    pub fn from_trace(t: &TransportTrace) -> Self {
        let pf = serde_json::to_value(ParamFile::from_params(&t.material, &t.resonator))
            .expect("flat struct serializes");
        let mut metadata: Vec<(String, String)> = PARAM_FILE_KEYS
            .iter()
            .map(|k| (k.to_string(), pf[*k].to_string()))
            .collect();
        metadata.push(("eta_used".into(), t.eta_used.to_string()));
        Self {
            metadata,
            b: t.b_values(),
            rho: t.rho_xx.clone(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn serialize_trace(t: &TraceFile) -> Result<String> {
    if t.b.len() != t.rho.len() {
        return Err(Error::CountMismatch {
            expected: t.b.len(),
            actual: t.rho.len(),
        });
    }
    for (k, v) in &t.metadata {
        if k.is_empty() || k.contains(['=', '\n', '\r']) || v.contains(['\n', '\r']) {
            return Err(Error::param("metadata", format!("unrepresentable entry `{k}`")));
        }
    }
    if let Some(i) = t.b.windows(2).position(|w| !(w[1] > w[0])) {
        let line = 2 + t.metadata.len() + 1 + i + 1;
        return Err(Error::NonMonotoneAxis { line });
    }
    let mut out = String::with_capacity(64 * (t.b.len() + t.metadata.len() + 2));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (k, v) in &t.metadata {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(COLUMNS);
    out.push('\n');
    for (b, rho) in t.b.iter().zip(&t.rho) {
        out.push_str(&format!("{},{}\n", fmt_f64(*b), fmt_f64(*rho)));
    }
    Ok(out)
}

pub fn parse_trace(text: &str) -> Result<TraceFile> {
    let mut lines = numbered_lines(text).peekable();
    expect_header(lines.next(), TRACE_HEADER)?;
    let mut metadata = Vec::new();
    loop {
        match lines.next() {
            Some((_, l)) if l == COLUMNS => break,
            Some((n, l)) => {
                let (k, v) = metadata_line(l).ok_or_else(|| Error::MalformedRow {
                    line: n,
                    reason: format!("expected `# key=value` or `{COLUMNS}`"),
                })?;
                metadata.push((k.to_string(), v.to_string()));
            }
            None => return Err(Error::MissingMetadata("B_tesla,rho_ohm column header")),
        }
    }
    let (mut b, mut rho) = (Vec::new(), Vec::new());
    for (n, l) in lines {
        let f = split_fields(l, 2, n)?;
        let bv = parse_f64(f[0], n, "B_tesla")?;
        if let Some(&prev) = b.last() {
            if !(bv > prev) {
                return Err(Error::NonMonotoneAxis { line: n });
            }
        }
        b.push(bv);
        rho.push(parse_f64(f[1], n, "rho_ohm")?);
    }
    Ok(TraceFile { metadata, b, rho })
}
