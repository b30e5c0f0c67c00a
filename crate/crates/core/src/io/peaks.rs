use super::{expect_header, fmt_f64, metadata_line, numbered_lines, parse_f64, split_fields};
use crate::error::{Error, Result};
use crate::fitting::{Peak, PeakList};
use crate::photoresponse::DecayLocus;

pub const PEAKS_HEADER: &str = "# peaks-v1";
pub const LOCI_HEADER: &str = "# loci-v1";
const PEAK_COLUMNS: &str = "B_tesla,f_hz,weight";
const LOCI_COLUMNS: &str = "n,branch,B_tesla,f_hz";

pub fn serialize_peaks(peaks: &PeakList) -> String {
    let mut out = format!("{PEAKS_HEADER}\n");
    if !peaks.source.contains(['\n', '\r']) {
        out.push_str(&format!("# source={}\n", peaks.source));
    }
    out.push_str(PEAK_COLUMNS);
    out.push('\n');
    for p in peaks.points() {
        out.push_str(&format!("{},{},{}\n", fmt_f64(p.b), fmt_f64(p.f), fmt_f64(p.weight)));
    }
    out
}

pub fn parse_peaks(text: &str) -> Result<PeakList> {
    let mut lines = numbered_lines(text);
    expect_header(lines.next(), PEAKS_HEADER)?;
    let mut source = String::new();
    loop {
        match lines.next() {
            Some((_, l)) if l == PEAK_COLUMNS => break,
            Some((n, l)) => match metadata_line(l) {
                Some(("source", v)) => source = v.to_string(),
                Some(_) => {}
                None => {
                    return Err(Error::MalformedRow {
                        line: n,
                        reason: format!("expected `# key=value` or `{PEAK_COLUMNS}`"),
                    })
                }
            },
            None => return Err(Error::MissingMetadata("B_tesla,f_hz,weight column header")),
        }
    }
    let mut points = Vec::new();
    for (n, l) in lines {
        let f = split_fields(l, 3, n)?;
        let p = Peak {
            b: parse_f64(f[0], n, "B_tesla")?,
            f: parse_f64(f[1], n, "f_hz")?,
            weight: parse_f64(f[2], n, "weight")?,
        };
        if !(p.b > 0.0 && p.f > 0.0 && p.weight > 0.0) || !(p.b.is_finite() && p.f.is_finite() && p.weight.is_finite()) {
            return Err(Error::MalformedRow {
                line: n,
                reason: "need finite B > 0, f > 0, weight > 0".into(),
            });
        }
        points.push(p);
    }
    PeakList::new(points, source)
}

pub fn serialize_loci(loci: &[DecayLocus]) -> String {
    let mut out = format!("{LOCI_HEADER}\n{LOCI_COLUMNS}\n");
    for l in loci {
        out.push_str(&format!(
            "{},{},{},{}\n",
            l.n,
            l.branch.label(),
            fmt_f64(l.b_star),
            fmt_f64(l.f_star)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polariton::Branch;

    #[test]
    fn peaks_round_trip_is_exact() {
        let pts = vec![
            Peak { b: 0.3, f: 1.7e11, weight: 0.2 },
            Peak { b: 0.3, f: 2.9e11, weight: 0.7 },
            Peak { b: 0.35, f: 1.8e11, weight: 0.1 },
        ];
        let pl = PeakList::new(pts, "extract_peaks").unwrap();
        let text = serialize_peaks(&pl);
        let back = parse_peaks(&text).unwrap();
        assert_eq!(back, pl);
        assert_eq!(serialize_peaks(&back), text);
    }

    #[test]
    fn peaks_errors() {
        assert!(matches!(parse_peaks("# peaks-v0\n"), Err(Error::WrongHeader { .. })));
        let bad = "# peaks-v1\nB_tesla,f_hz,weight\n0.3,1e11,1\n0.3,-1e11,1\n";
        assert!(matches!(parse_peaks(bad), Err(Error::MalformedRow { line: 4, .. })));
        let empty = parse_peaks("# peaks-v1\nB_tesla,f_hz,weight\n").unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn loci_layout() {
        let loci = [DecayLocus { n: 2, branch: Branch::Upper, b_star: 0.25, f_star: 2.1e11 }];
        let text = serialize_loci(&loci);
        let row = text.lines().nth(2).unwrap();
        assert!(row.starts_with("2,UP,2.5"), "{row}");
    }
}
