//! Plain-text matrix format: a line with `n`, then `n` lines of `n`
//! whitespace-separated decimals. `inf` is accepted only where the target
//! matrix type allows it.

use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use super::{AsymmetricCostMatrix, Costs, SymmetricCostMatrix};
use crate::{Error, Result};

/// Reads one matrix block from numbered lines, skipping blank lines.
pub fn parse_matrix_block<'a, I>(lines: &mut I) -> Result<(usize, Vec<f64>)>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut next_line = || lines.find(|(_, l)| !l.trim().is_empty());
    let (hline, header) = next_line().ok_or_else(|| Error::parse(0, "missing matrix order"))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::parse(hline + 1, format!("bad matrix order {:?}", header.trim())))?;
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let (lno, line) = next_line()
            .ok_or_else(|| Error::parse(hline + 1, format!("expected {n} rows, found {row}")))?;
        let before = data.len();
        for tok in line.split_whitespace() {
            let v = f64::from_str(tok)
                .map_err(|_| Error::parse(lno + 1, format!("bad number {tok:?}")))?;
            data.push(v);
        }
        if data.len() - before != n {
            return Err(Error::parse(
                lno + 1,
                format!("expected {n} entries, found {}", data.len() - before),
            ));
        }
    }
    Ok((n, data))
}

pub fn write_matrix<W: Write, C: Costs + ?Sized>(w: &mut W, c: &C) -> io::Result<()> {
    let n = c.order();
    writeln!(w, "{n}")?;
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{}", c.cost(i, j))).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_matrix_file<T: FromStr<Err = Error>>(path: impl AsRef<Path>) -> Result<T> {
    std::fs::read_to_string(path)?.parse()
}

impl FromStr for SymmetricCostMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, data) = parse_matrix_block(&mut s.lines().enumerate())?;
        if data.iter().any(|v| v.is_infinite()) {
            return Err(Error::InvalidMatrix("inf is not allowed in a symmetric matrix".into()));
        }
        SymmetricCostMatrix::new(n, data)
    }
}

impl FromStr for AsymmetricCostMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, data) = parse_matrix_block(&mut s.lines().enumerate())?;
        AsymmetricCostMatrix::new(n, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_infinity() {
        let m = AsymmetricCostMatrix::from_rows(&[
            vec![0.0, f64::INFINITY, 0.1],
            vec![2.5, 0.0, 1e-12],
            vec![3.0, 7.0, 0.0],
        ])
        .unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("inf"));
        assert_eq!(text.parse::<AsymmetricCostMatrix>().unwrap(), m);
    }

    #[test]
    fn symmetric_rejects_inf_and_short_rows() {
        assert!("2\n0 inf\ninf 0\n".parse::<SymmetricCostMatrix>().is_err());
        let err = "3\n0 1 2\n1 0\n2 3 0\n".parse::<SymmetricCostMatrix>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
