use super::{expect_header, fmt_f64, metadata_line, numbered_lines, parse_f64, split_fields};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D, Quantity, ResponseMap};

pub const MAP_HEADER: &str = "# map-v1";
const COLUMNS: &str = "iB,if,value";

fn axis_line(a: &Grid1D) -> String {
    format!("{},{},{}", fmt_f64(a.start()), fmt_f64(a.stop()), a.count())
}

fn parse_axis(v: &str, line: usize) -> Result<Grid1D> {
    let f = split_fields(v, 3, line)?;
    let count = f[2].trim().parse::<usize>().map_err(|_| Error::MalformedRow {
        line,
        reason: format!("axis count `{}` is not a non-negative integer", f[2]),
    })?;
    Grid1D::new(parse_f64(f[0], line, "axis start")?, parse_f64(f[1], line, "axis stop")?, count)
}

pub fn serialize_map(map: &ResponseMap) -> String {
    let nf = map.f_axis().count();
    let mut out = String::with_capacity(48 * map.grid.values().len() + 256);
    out.push_str(MAP_HEADER);
    out.push('\n');
    out.push_str(&format!("# b_axis={}\n", axis_line(map.b_axis())));
    out.push_str(&format!("# f_axis={}\n", axis_line(map.f_axis())));
    out.push_str(&format!("# quantity={}\n", map.quantity.name()));
    out.push_str(COLUMNS);
    out.push('\n');
    for (k, v) in map.grid.values().iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", k / nf, k % nf, fmt_f64(*v)));
    }
    out
}

pub fn parse_map(text: &str) -> Result<ResponseMap> {
    let mut lines = numbered_lines(text);
    expect_header(lines.next(), MAP_HEADER)?;
    let (mut b_axis, mut f_axis, mut quantity) = (None, None, None);
    loop {
        let Some((n, l)) = lines.next() else {
            return Err(Error::MissingMetadata("iB,if,value column header"));
        };
        if l == COLUMNS {
            break;
        }
        let bad = |reason: String| Error::MalformedRow { line: n, reason };
        let (k, v) = metadata_line(l).ok_or_else(|| bad(format!("expected `# key=value` or `{COLUMNS}`")))?;
        match k {
            "b_axis" => b_axis = Some(parse_axis(v, n)?),
            "f_axis" => f_axis = Some(parse_axis(v, n)?),
            "quantity" => {
                quantity = Some(Quantity::from_name(v).ok_or_else(|| bad(format!("unknown quantity `{v}`")))?)
            }
            _ => return Err(bad(format!("unknown metadata key `{k}`"))),
        }
    }
    let b_axis = b_axis.ok_or(Error::MissingMetadata("b_axis"))?;
    let f_axis = f_axis.ok_or(Error::MissingMetadata("f_axis"))?;
    let quantity = quantity.ok_or(Error::MissingMetadata("quantity"))?;
    let (nb, nf) = (b_axis.count(), f_axis.count());

    let mut rows = Vec::with_capacity(nb * nf);
    for (n, l) in lines {
        let f = split_fields(l, 3, n)?;
        let index = |s: &str, what: &str| {
            s.trim().parse::<usize>().map_err(|_| Error::MalformedRow {
                line: n,
                reason: format!("{what} `{s}` is not a non-negative integer"),
            })
        };
        rows.push((n, index(f[0], "iB")?, index(f[1], "if")?, parse_f64(f[2], n, "value")?));
    }
    if rows.len() != nb * nf {
        return Err(Error::CountMismatch {
            expected: nb * nf,
            actual: rows.len(),
        });
    }
    let mut values = Vec::with_capacity(rows.len());
    for (k, &(n, ib, jf, v)) in rows.iter().enumerate() {
        if ib >= nb || jf >= nf {
            return Err(Error::MalformedRow {
                line: n,
                reason: format!("index ({ib}, {jf}) outside {nb}x{nf} grid"),
            });
        }
        if (ib, jf) != (k / nf, k % nf) {
            return Err(Error::MalformedRow {
                line: n,
                reason: format!("expected cell ({}, {}) in row-major order, got ({ib}, {jf})", k / nf, k % nf),
            });
        }
        values.push(v);
    }
    Ok(ResponseMap {
        grid: Grid2D::from_values(b_axis, f_axis, values)?,
        quantity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> ResponseMap {
        let b = Grid1D::new(0.05, 1.2, 3).unwrap();
        let f = Grid1D::new(60e9, 600e9, 4).unwrap();
        let values = (0..12).map(|k| (k as f64).sin() / 7.0).collect();
        ResponseMap {
            grid: Grid2D::from_values(b, f, values).unwrap(),
            quantity: Quantity::Photoresponse,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let m = small();
        let text = serialize_map(&m);
        assert_eq!(parse_map(&text).unwrap(), m);
        assert!(text.starts_with("# map-v1\n# b_axis="));
    }

    #[test]
    fn tampered_row_count() {
        let text = serialize_map(&small());
        let mut lines: Vec<&str> = text.lines().collect();
        lines.pop();
        let tampered = lines.join("\n") + "\n";
        assert!(matches!(
            parse_map(&tampered),
            Err(Error::CountMismatch { expected: 12, actual: 11 })
        ));
    }

    #[test]
    fn index_errors_name_the_line() {
        let text = serialize_map(&small());
        let out_of_range = text.replacen("\n2,3,", "\n2,9,", 1);
        assert!(matches!(parse_map(&out_of_range), Err(Error::MalformedRow { line: 17, .. })));
        let swapped = text.replacen("\n0,0,", "\n0,1,", 1);
        assert!(matches!(parse_map(&swapped), Err(Error::MalformedRow { line: 6, .. })));
        assert!(matches!(
            parse_map(&text.replace("# map-v1", "# trace-v1")),
            Err(Error::WrongHeader { .. })
        ));
        assert!(matches!(
            parse_map(&text.replace("# quantity=photoresponse\n", "")),
            Err(Error::MissingMetadata("quantity"))
        ));
    }

    proptest! {
        #[test]
        fn random_map_round_trip(
            nb in 2usize..8, nf in 2usize..8,
            b0 in -5.0f64..5.0, db in 1e-6f64..5.0,
            vals in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 64),
        ) {
            let b = Grid1D::new(b0, b0 + db, nb).unwrap();
            let f = Grid1D::new(60e9, 600e9, nf).unwrap();
            let m = ResponseMap {
                grid: Grid2D::from_values(b, f, vals[..nb * nf].to_vec()).unwrap(),
                quantity: Quantity::Transmission,
            };
            let back = parse_map(&serialize_map(&m)).unwrap();
            prop_assert_eq!(
                back.grid.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                m.grid.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
            prop_assert_eq!(back, m);
        }
    }
}
