use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::point::TorusPoint;
use crate::{Error, Result};

/// Grid resolution `ε = base^-exponent`, so that `ε` divides 1 evenly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scale {
    pub base: u32,
    pub exponent: u32,
}

impl Scale {
    pub fn new(base: u32, exponent: u32) -> Result<Self> {
        if base != 2 && base != 3 {
            return Err(Error::InvalidScale(format!("base {base} is not 2 or 3")));
        }
        if exponent > 30 {
            return Err(Error::InvalidScale(format!("exponent {exponent} too large")));
        }
        Ok(Self { base, exponent })
    }

    pub fn dyadic(exponent: u32) -> Self {
        Self { base: 2, exponent }
    }

    pub fn triadic(exponent: u32) -> Self {
        Self { base: 3, exponent }
    }

    /// Recovers the scale from a side length, which must be `2^-k` or `3^-k`.
    pub fn from_epsilon(eps: f64) -> Result<Self> {
        if !(eps > 0.0) || eps > 1.0 {
            return Err(Error::InvalidScale(format!("epsilon {eps} outside (0, 1]")));
        }
        for base in [2u32, 3] {
            let k = (-(eps.ln()) / (base as f64).ln()).round();
            if k >= 0.0 && k <= 30.0 {
                let s = Self { base, exponent: k as u32 };
                if (s.side() - eps).abs() <= 1e-12 * eps {
                    return Ok(s);
                }
            }
        }
        Err(Error::InvalidScale(format!("epsilon {eps} does not divide 1 as 2^-k or 3^-k")))
    }

    pub fn cells_per_axis(&self) -> usize {
        (self.base as usize).pow(self.exponent)
    }

    pub fn side(&self) -> f64 {
        1.0 / self.cells_per_axis() as f64
    }
}

/// Occupancy bitmask over the `ε`-grid of `[0,1)^D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCover<const D: usize> {
    scale: Scale,
    bits: Vec<u64>,
    count: usize,
}

const MAX_CELLS: usize = 1 << 31;
const MAGIC: &[u8; 4] = b"GCV1";

impl<const D: usize> GridCover<D> {
    pub fn new(scale: Scale) -> Result<Self> {
        let n = scale.cells_per_axis();
        let total = n
            .checked_pow(D as u32)
            .filter(|&t| t <= MAX_CELLS)
            .ok_or_else(|| Error::InvalidScale(format!("grid {n}^{D} exceeds the cell cap")))?;
        Ok(Self { scale, bits: vec![0; total.div_ceil(64)], count: 0 })
    }

    pub fn full(scale: Scale) -> Result<Self> {
        let mut g = Self::new(scale)?;
        for i in 0..g.total_cells() {
            g.insert(i);
        }
        Ok(g)
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn total_cells(&self) -> usize {
        self.scale.cells_per_axis().pow(D as u32)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Total volume of the occupied cells.
    pub fn volume(&self) -> f64 {
        self.count as f64 * self.scale.side().powi(D as i32)
    }

    pub fn cell_of(&self, p: &TorusPoint<D>) -> usize {
        let n = self.scale.cells_per_axis();
        let mut idx = 0;
        for i in (0..D).rev() {
            let c = ((p.0[i] * n as f64) as usize).min(n - 1);
            idx = idx * n + c;
        }
        idx
    }

    pub fn cell_coords(&self, flat: usize) -> [usize; D] {
        let n = self.scale.cells_per_axis();
        let mut c = [0; D];
        let mut r = flat;
        for ci in c.iter_mut() {
            *ci = r % n;
            r /= n;
        }
        c
    }

    pub fn flat_index(&self, coords: &[usize; D]) -> usize {
        let n = self.scale.cells_per_axis();
        coords.iter().rev().fold(0, |acc, &c| acc * n + c)
    }

    /// Lower corner of a cell.
    pub fn cell_lo(&self, flat: usize) -> [f64; D] {
        let side = self.scale.side();
        let c = self.cell_coords(flat);
        let mut lo = [0.0; D];
        for i in 0..D {
            lo[i] = c[i] as f64 * side;
        }
        lo
    }

    pub fn cell_center(&self, flat: usize) -> TorusPoint<D> {
        let half = 0.5 * self.scale.side();
        let mut lo = self.cell_lo(flat);
        for x in lo.iter_mut() {
            *x += half;
        }
        TorusPoint(lo)
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.bits[flat / 64] >> (flat % 64) & 1 == 1
    }

    pub fn contains_point(&self, p: &TorusPoint<D>) -> bool {
        self.contains(self.cell_of(p))
    }

    /// Marks a cell; returns whether it was newly set.
    pub fn insert(&mut self, flat: usize) -> bool {
        let (w, b) = (flat / 64, flat % 64);
        let fresh = self.bits[w] >> b & 1 == 0;
        if fresh {
            self.bits[w] |= 1 << b;
            self.count += 1;
        }
        fresh
    }

    pub fn remove(&mut self, flat: usize) -> bool {
        let (w, b) = (flat / 64, flat % 64);
        let was = self.bits[w] >> b & 1 == 1;
        if was {
            self.bits[w] &= !(1 << b);
            self.count -= 1;
        }
        was
    }

    /// Marks every cell meeting the closed lifted box `[lo, hi]`, with torus
    /// wrap-around.
    pub fn insert_box(&mut self, lo: &[f64; D], hi: &[f64; D]) {
        let n = self.scale.cells_per_axis() as i64;
        let mut start = [0i64; D];
        let mut len = [0i64; D];
        for i in 0..D {
            let a = (lo[i] * n as f64).floor() as i64;
            let b = (hi[i] * n as f64).floor() as i64;
            start[i] = a;
            len[i] = (b - a + 1).min(n);
        }
        let mut off = [0i64; D];
        loop {
            let mut coords = [0usize; D];
            for i in 0..D {
                coords[i] = (start[i] + off[i]).rem_euclid(n) as usize;
            }
            let f = self.flat_index(&coords);
            self.insert(f);
            let mut axis = 0;
            loop {
                if axis == D {
                    return;
                }
                off[axis] += 1;
                if off[axis] < len[axis] {
                    break;
                }
                off[axis] = 0;
                axis += 1;
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Bitwise OR with a cover of the same scale.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.scale != self.scale {
            return Err(Error::InvalidScale("merging covers of different scales".into()));
        }
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
        self.count = self.bits.iter().map(|w| w.count_ones() as usize).sum();
        Ok(())
    }

    /// Run-length encoding: 16-byte header (`GCV1`, d: u8, base: u8, k: u16,
    /// count: u64, little endian), then alternating run lengths as LEB128
    /// varints, starting with a run of empty cells.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.count / 4);
        out.extend_from_slice(MAGIC);
        out.push(D as u8);
        out.push(self.scale.base as u8);
        out.extend_from_slice(&(self.scale.exponent as u16).to_le_bytes());
        out.extend_from_slice(&(self.count as u64).to_le_bytes());
        let total = self.total_cells();
        let mut state = false;
        let mut run = 0u64;
        for i in 0..total {
            if self.contains(i) != state {
                push_varint(&mut out, run);
                state = !state;
                run = 0;
            }
            run += 1;
        }
        push_varint(&mut out, run);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 || &bytes[..4] != MAGIC {
            return Err(Error::Decode("missing GCV1 header".into()));
        }
        if bytes[4] as usize != D {
            return Err(Error::Decode(format!("dimension {} != {D}", bytes[4])));
        }
        let scale = Scale::new(bytes[5] as u32, u16::from_le_bytes([bytes[6], bytes[7]]) as u32)
            .map_err(|e| Error::Decode(format!("{e}")))?;
        let mut count_bytes = [0u8; 8];
        count_bytes.copy_from_slice(&bytes[8..16]);
        let count = u64::from_le_bytes(count_bytes) as usize;
        let mut g = Self::new(scale)?;
        let total = g.total_cells();
        let mut pos = 16;
        let mut cell = 0usize;
        let mut state = false;
        while pos < bytes.len() {
            let run = read_varint(bytes, &mut pos)? as usize;
            if cell + run > total {
                return Err(Error::Decode("run overflows the grid".into()));
            }
            if state {
                for i in cell..cell + run {
                    g.insert(i);
                }
            }
            cell += run;
            state = !state;
        }
        if cell != total {
            return Err(Error::Decode(format!("runs cover {cell} of {total} cells")));
        }
        if g.count != count {
            return Err(Error::Decode(format!("header count {count} != popcount {}", g.count)));
        }
        Ok(g)
    }
}

fn push_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Result<u64> {
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos).ok_or_else(|| Error::Decode("truncated varint".into()))?;
        *pos += 1;
        v |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
        shift += 7;
        if shift > 63 {
            return Err(Error::Decode("varint too long".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scale_from_epsilon() {
        assert_eq!(Scale::from_epsilon(0.125).unwrap(), Scale::dyadic(3));
        assert_eq!(Scale::from_epsilon(1.0 / 27.0).unwrap(), Scale::triadic(3));
        assert!(Scale::from_epsilon(0.2).is_err());
        assert!(Scale::from_epsilon(0.0).is_err());
        assert!(Scale::from_epsilon(-0.5).is_err());
    }

    #[test]
    fn box_insertion_wraps() {
        let mut g = GridCover::<2>::new(Scale::dyadic(2)).unwrap();
        g.insert_box(&[-0.1, -0.1], &[0.1, 0.1]);
        assert_eq!(g.count(), 4);
        assert!(g.contains_point(&TorusPoint::new([0.9, 0.9])));
        assert!(g.contains_point(&TorusPoint::new([0.1, 0.9])));
    }

    #[test]
    fn header_layout() {
        let mut g = GridCover::<3>::new(Scale::dyadic(3)).unwrap();
        g.insert(5);
        let bytes = g.encode();
        assert_eq!(&bytes[..4], b"GCV1");
        assert_eq!(bytes[4], 3);
        assert_eq!(bytes[5], 2);
        assert_eq!(u16::from_le_bytes([bytes[6], bytes[7]]), 3);
        assert_eq!(bytes[8], 1);
        assert!(GridCover::<2>::decode(&bytes).is_err());
        assert!(GridCover::<3>::decode(&bytes[..bytes.len() - 1]).is_err());
    }

    proptest! {
        #[test]
        fn encode_roundtrip(cells in proptest::collection::vec(0usize..4096, 0..300)) {
            let mut g = GridCover::<2>::new(Scale::dyadic(6)).unwrap();
            for c in &cells {
                g.insert(*c);
            }
            let back = GridCover::<2>::decode(&g.encode()).unwrap();
            prop_assert_eq!(back.count(), g.iter().count());
            prop_assert_eq!(back, g);
        }
    }
}
