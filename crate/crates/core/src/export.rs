//! Plain CSV output: one header line, LF endings, 17 significant digits.

use std::io::{self, Write};

use crate::Scalar;

fn num<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

/// Writes `header` followed by one line per row.
pub fn write_rows<W: Write, T: Scalar, const N: usize>(
    mut out: W,
    header: &str,
    rows: &[[T; N]],
) -> io::Result<()> {
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| num(x)).collect();
        out.write_all(line.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `s,phi`.
pub fn write_phi_curve<W: Write, T: Scalar>(out: W, curve: &[(T, T)]) -> io::Result<()> {
    let rows: Vec<[T; 2]> = curve.iter().map(|&(s, v)| [s, v]).collect();
    write_rows(out, "s,phi", &rows)
}

/// `s,phi0`.
pub fn write_eigenfunction<W: Write, T: Scalar>(out: W, samples: &[(T, T)]) -> io::Result<()> {
    let rows: Vec<[T; 2]> = samples.iter().map(|&(s, v)| [s, v]).collect();
    write_rows(out, "s,phi0", &rows)
}

/// `t,survival,stderr`.
pub fn write_survival<W: Write, T: Scalar>(out: W, rows: &[(T, T, T)]) -> io::Result<()> {
    let rows: Vec<[T; 3]> = rows.iter().map(|&(t, p, e)| [t, p, e]).collect();
    write_rows(out, "t,survival,stderr", &rows)
}
