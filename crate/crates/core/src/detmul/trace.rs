use std::io::Write;

use super::{downscale_pair, scalable_multiply};
use crate::error::Result;
use crate::streams::UnaryValue;

/// One cycle of the multiplier's output stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub cycle: u64,
    pub i: u64,
    pub j: u64,
    /// Downscaled operand bits before flipping.
    pub a_bit: bool,
    pub b_bit: bool,
    pub flip_a: bool,
    pub flip_b: bool,
    pub out_bit: bool,
}

pub fn trace_multiply(a: UnaryValue, b: UnaryValue) -> Result<Vec<TraceRow>> {
    let result = scalable_multiply(a, b)?;
    let (da, db) = downscale_pair(a, b)?;
    let qa = 1u64 << da.quotient.resolution_log2();
    let [pa, pb] = &result.plans;
    let rows = (0..result.stream.len() as u64)
        .map(|t| {
            let (i, j) = (t % qa, t / qa);
            TraceRow {
                cycle: t,
                i,
                j,
                a_bit: i < da.quotient.numerator(),
                b_bit: j < db.quotient.numerator(),
                flip_a: pa.flip_cycles.binary_search(&t).is_ok(),
                flip_b: pb.flip_cycles.binary_search(&t).is_ok(),
                out_bit: result.stream.get(t as usize),
            }
        })
        .collect();
    Ok(rows)
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "cycle,i,j,a_bit,b_bit,flip_a,flip_b,out_bit")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.cycle, r.i, r.j, r.a_bit as u8, r.b_bit as u8, r.flip_a as u8, r.flip_b as u8, r.out_bit as u8
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_matches_stream() {
        let a = UnaryValue::new(5, 4).unwrap();
        let b = UnaryValue::new(15, 4).unwrap();
        let rows = trace_multiply(a, b).unwrap();
        assert_eq!(rows.len(), 16);
        for r in &rows {
            assert_eq!(r.out_bit, (r.a_bit ^ r.flip_a) && (r.b_bit ^ r.flip_b));
        }
        assert_eq!(rows.iter().filter(|r| r.out_bit).count(), 5);
        let mut buf = Vec::new();
        write_trace_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(2).unwrap(), "1,1,0,0,1,1,0,1");
    }
}
