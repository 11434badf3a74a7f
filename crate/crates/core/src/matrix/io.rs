//! Text matrix format: a `rows cols resolution_log2` header, then the
//! row-major numerators, then optionally one `+`/`-` per element.

use std::io::Write;
use std::path::Path;

use super::{FixedMatrix, ResultMatrix, SignedWeightMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixFile {
    Unsigned(FixedMatrix),
    Signed(SignedWeightMatrix),
}

impl MatrixFile {
    pub fn magnitudes(&self) -> &FixedMatrix {
        match self {
            MatrixFile::Unsigned(m) => m,
            MatrixFile::Signed(w) => w.magnitudes(),
        }
    }

    pub fn into_weights(self) -> SignedWeightMatrix {
        match self {
            MatrixFile::Unsigned(m) => m.into(),
            MatrixFile::Signed(w) => w,
        }
    }
}

pub fn parse_matrix(text: &str, origin: &str) -> Result<MatrixFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(origin, 1, "empty matrix file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(origin, hline, "header must be `rows cols resolution_log2`"))?;
    let [rows, cols, res] = dims[..] else {
        return Err(Error::parse(origin, hline, "header must be `rows cols resolution_log2`"));
    };
    let count = rows * cols;
    let mut numerators = Vec::with_capacity(count);
    let mut signs = Vec::new();
    let mut last_line = hline;
    for (line_no, line) in lines {
        last_line = line_no;
        for token in line.split_whitespace() {
            if numerators.len() < count {
                let k = token
                    .parse::<u64>()
                    .map_err(|_| Error::parse(origin, line_no, format!("bad numerator '{token}'")))?;
                numerators.push(k);
                continue;
            }
            for c in token.chars() {
                match c {
                    '+' => signs.push(false),
                    '-' => signs.push(true),
                    _ => return Err(Error::parse(origin, line_no, format!("bad sign '{c}'"))),
                }
            }
        }
    }
    if numerators.len() != count {
        return Err(Error::parse(
            origin,
            last_line,
            format!("expected {count} numerators, found {}", numerators.len()),
        ));
    }
    let magnitudes = FixedMatrix::new(rows, cols, res as u32, numerators)
        .map_err(|e| Error::parse(origin, hline, e.to_string()))?;
    if signs.is_empty() {
        return Ok(MatrixFile::Unsigned(magnitudes));
    }
    if signs.len() != count {
        return Err(Error::parse(
            origin,
            last_line,
            format!("expected {count} signs, found {}", signs.len()),
        ));
    }
    Ok(MatrixFile::Signed(SignedWeightMatrix::new(magnitudes, signs)?))
}

pub fn read_matrix(path: &Path) -> Result<MatrixFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text, &path.display().to_string())
}

pub fn write_matrix<W: Write>(m: &MatrixFile, mut out: W) -> std::io::Result<()> {
    let mag = m.magnitudes();
    writeln!(out, "{} {} {}", mag.rows(), mag.cols(), mag.resolution_log2())?;
    for row in mag.numerators().chunks(mag.cols()) {
        let line: Vec<String> = row.iter().map(u64::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    if let MatrixFile::Signed(w) = m {
        for row in w.signs().chunks(mag.cols()) {
            let line: String = row.iter().map(|&neg| if neg { '-' } else { '+' }).collect();
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

/// One CSV line per row, exact decimals.
pub fn write_result_csv<W: Write>(m: &ResultMatrix, mut out: W) -> std::io::Result<()> {
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|k| m.get(i, k).to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
