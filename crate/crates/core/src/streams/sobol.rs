//! Base-2 Sobol sequences from tabulated direction numbers.
//!
//! Dimension 0 is the van der Corput sequence (every `m_k = 1`) and is not
//! stored. Dimension `k >= 1` is the line with `d = k + 1` of the table, in
//! the usual `d s a m_1 .. m_s` layout. Points are generated in Gray-code
//! order, so point `i` is the XOR of the direction numbers selected by the
//! set bits of `i ^ (i >> 1)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const BITS: u32 = 32;

const STANDARD_TABLE: &str = include_str!("../../data/sobol_directions.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
struct Primitive {
    degree: u32,
    coefficients: u32,
    initial: Vec<u32>,
}

/// Direction numbers for a set of dimensions, expanded to 32 bits.
#[derive(Clone, Debug)]
pub struct DirectionTable {
    primitives: Vec<Primitive>,
    directions: Vec<[u32; BITS as usize]>,
}

impl DirectionTable {
    /// The bundled table.
    pub fn standard() -> &'static DirectionTable {
        static TABLE: OnceLock<DirectionTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            DirectionTable::parse(STANDARD_TABLE, "sobol_directions.txt")
                .expect("bundled direction numbers are well formed")
        })
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut primitives = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') || line.starts_with('d') {
                continue;
            }
            let fields: Vec<u32> = line
                .split_whitespace()
                .map(|f| {
                    f.parse::<u32>()
                        .map_err(|e| Error::parse(origin, lineno, format!("{f:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            if fields.len() < 3 {
                return Err(Error::parse(origin, lineno, "expected `d s a m_1 .. m_s`"));
            }
            let (d, s, a) = (fields[0], fields[1], fields[2]);
            let initial = fields[3..].to_vec();
            if d as usize != primitives.len() + 2 {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("expected dimension {}, found {d}", primitives.len() + 2),
                ));
            }
            if s == 0 || s >= BITS || initial.len() != s as usize {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("degree {s} needs exactly {s} initial direction numbers"),
                ));
            }
            if a >> (s - 1) != 0 {
                return Err(Error::parse(origin, lineno, format!("coefficient word {a} too wide for degree {s}")));
            }
            for (k, &m) in initial.iter().enumerate() {
                if m % 2 == 0 || m >= 1 << (k + 1) {
                    return Err(Error::parse(
                        origin,
                        lineno,
                        format!("m_{} = {m} must be odd and below 2^{}", k + 1, k + 1),
                    ));
                }
            }
            primitives.push(Primitive {
                degree: s,
                coefficients: a,
                initial,
            });
        }
        let mut directions = vec![[0u32; BITS as usize]];
        for k in 0..BITS {
            directions[0][k as usize] = 1 << (BITS - 1 - k);
        }
        directions.extend(primitives.iter().map(expand));
        Ok(Self {
            primitives,
            directions,
        })
    }

    /// Number of dimensions, including the implicit dimension 0.
    pub fn dimensions(&self) -> usize {
        self.directions.len()
    }

    /// The expanded `m_k` values (`m_1 ..= m_32`) of a dimension.
    pub fn m_values(&self, dimension: usize) -> Result<Vec<u64>> {
        let v = self.direction_numbers(dimension)?;
        Ok(v.iter()
            .enumerate()
            .map(|(k, &vk)| (vk >> (BITS - 1 - k as u32)) as u64)
            .collect())
    }

    /// Direction numbers `v_k = m_k << (32 - k)` of a dimension.
    pub fn direction_numbers(&self, dimension: usize) -> Result<&[u32; BITS as usize]> {
        self.directions.get(dimension).ok_or_else(|| {
            Error::param(format!(
                "Sobol dimension {dimension} unknown (table has {})",
                self.dimensions()
            ))
        })
    }

    /// Degree and coefficient word of the primitive polynomial behind a
    /// stored dimension (`None` for dimension 0).
    pub fn polynomial(&self, dimension: usize) -> Option<(u32, u32)> {
        dimension
            .checked_sub(1)
            .and_then(|k| self.primitives.get(k))
            .map(|p| (p.degree, p.coefficients))
    }

    /// The `index`-th point of `dimension`, as an integer in `[0, 2^width)`.
    pub fn point(&self, index: u64, dimension: usize, width_log2: u32) -> Result<u64> {
        if width_log2 > BITS {
            return Err(Error::param(format!("Sobol width {width_log2} exceeds {BITS} bits")));
        }
        if index >> BITS != 0 {
            return Err(Error::param(format!("Sobol index {index} exceeds 2^{BITS}")));
        }
        let v = self.direction_numbers(dimension)?;
        let gray = index ^ (index >> 1);
        let x = (0..BITS as usize)
            .filter(|&k| gray >> k & 1 == 1)
            .fold(0u32, |acc, k| acc ^ v[k]);
        Ok(if width_log2 == 0 { 0 } else { (x >> (BITS - width_log2)) as u64 })
    }

    /// The first `2^width_log2` points of a dimension, generated incrementally.
    pub fn sequence(&self, dimension: usize, width_log2: u32) -> Result<Vec<u64>> {
        if width_log2 > BITS {
            return Err(Error::param(format!("Sobol width {width_log2} exceeds {BITS} bits")));
        }
        let v = self.direction_numbers(dimension)?;
        let len = 1usize << width_log2;
        let mut out = Vec::with_capacity(len);
        let mut x = 0u32;
        for i in 0..len {
            out.push(if width_log2 == 0 { 0 } else { (x >> (BITS - width_log2)) as u64 });
            // Gray code i -> i+1 flips the bit at the number of trailing ones of i.
            let c = (!i).trailing_zeros() as usize;
            if c < BITS as usize {
                x ^= v[c];
            }
        }
        Ok(out)
    }
}

fn expand(p: &Primitive) -> [u32; BITS as usize] {
    let s = p.degree as usize;
    let mut m: Vec<u64> = p.initial.iter().map(|&x| x as u64).collect();
    for k in s..BITS as usize {
        let mut next = m[k - s] ^ (m[k - s] << s);
        for l in 1..s {
            if p.coefficients >> (s - 1 - l) & 1 == 1 {
                next ^= m[k - l] << l;
            }
        }
        m.push(next);
    }
    let mut v = [0u32; BITS as usize];
    for k in 0..BITS as usize {
        v[k] = (m[k] << (BITS as usize - 1 - k)) as u32;
    }
    v
}

/// The `index`-th point of the bundled table's `dimension`, in `[0, 2^width)`.
pub fn sobol_point(index: u64, dimension: usize, width_log2: u32) -> Result<u64> {
    DirectionTable::standard().point(index, dimension, width_log2)
}
