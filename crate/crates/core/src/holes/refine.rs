use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::{follows, CylinderWord, MapWithHoles};
use crate::geometry::{binomial_half_width, GridCover, MeasureEstimate, Scale, TorusPoint};
use crate::rng::{mix, stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineConfig {
    /// Grid of the outer covers.
    pub scale: Scale,
    /// Uniform samples drawn in the outer cover for the volume estimate.
    pub volume_samples: usize,
    /// Witnesses produced by pulling random points back along the word.
    pub pullback_witnesses: usize,
    pub seed: u64,
}

impl RefineConfig {
    /// `2⁻¹⁴` in one dimension, `2⁻⁸` in two, `2⁻⁵` in three.
    pub fn for_dimension(d: usize, seed: u64) -> Self {
        let k = match d {
            1 => 14,
            2 => 8,
            _ => 5,
        };
        Self { scale: Scale::dyadic(k), volume_samples: 4096, pullback_witnesses: 64, seed }
    }
}

/// Outer cover, inner witnesses and volume bounds of one cylinder.
#[derive(Debug, Clone)]
pub struct CylinderGeometry<const D: usize> {
    pub word: CylinderWord,
    pub outer: GridCover<D>,
    /// Points whose orbit follows the word; all lie in `outer`.
    pub witnesses: Vec<TorusPoint<D>>,
    /// Monte Carlo volume inside the outer cover, 99% half-width.
    pub volume: MeasureEstimate,
    pub volume_lower: f64,
    pub volume_upper: f64,
}

#[derive(Debug, Clone)]
pub enum Refinement<const D: usize> {
    /// No witness was found; the volume is at most the reported bound.
    Empty { word: CylinderWord, volume_upper: f64 },
    Found(CylinderGeometry<D>),
}

impl<const D: usize> Refinement<D> {
    pub fn geometry(&self) -> Option<&CylinderGeometry<D>> {
        match self {
            Refinement::Found(g) => Some(g),
            Refinement::Empty { .. } => None,
        }
    }

    pub fn volume_upper(&self) -> f64 {
        match self {
            Refinement::Found(g) => g.volume_upper,
            Refinement::Empty { volume_upper, .. } => *volume_upper,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Refinement::Empty { .. })
    }
}

/// Computes cylinder geometry, memoizing outer covers by word.
///
/// The outer cover of `(α₁, …, αₙ)` is the cover of `(α₂, …, αₙ)` pulled back
/// through the inverse branch `α₁`: each cell is replaced by the grid box around
/// the preimage of its center, inflated by the branch Lipschitz constant times
/// the cell half-diagonal. Cells lying inside the hole are dropped.
pub struct CylinderRefiner<'a, M: ?Sized, const D: usize> {
    map: &'a M,
    pub config: RefineConfig,
    covers: BTreeMap<Vec<u8>, GridCover<D>>,
}

impl<'a, M: MapWithHoles<D> + ?Sized, const D: usize> CylinderRefiner<'a, M, D> {
    pub fn new(map: &'a M, config: RefineConfig) -> Self {
        Self { map, config, covers: BTreeMap::new() }
    }

    pub fn map(&self) -> &'a M {
        self.map
    }

    fn pull(&self, symbol: usize, src: &GridCover<D>) -> Result<GridCover<D>> {
        let mut dst = GridCover::new(src.scale())?;
        let side = src.scale().side();
        let r = self.map.inverse_norm_bound(symbol) * side * (D as f64).sqrt() / 2.0 * (1.0 + 1e-9) + 1e-12;
        for cell in src.iter() {
            let x = self.map.inverse_branch(symbol, &src.cell_center(cell));
            let mut lo = [0.0; D];
            let mut hi = [0.0; D];
            for i in 0..D {
                lo[i] = x.0[i] - r;
                hi[i] = x.0[i] + r;
            }
            dst.insert_box(&lo, &hi);
        }
        let in_hole: Vec<usize> = dst.iter().filter(|&c| self.map.cell_in_hole(&dst.cell_lo(c), side)).collect();
        for c in in_hole {
            dst.remove(c);
        }
        Ok(dst)
    }

    /// Outer cover of the cylinder of `symbols`.
    pub fn outer_cover(&mut self, symbols: &[u8]) -> Result<GridCover<D>> {
        if let Some(c) = self.covers.get(symbols) {
            return Ok(c.clone());
        }
        // deepest memoized suffix, then pull back towards the front
        let mut start = symbols.len();
        let mut cover = GridCover::full(self.config.scale)?;
        for s in 1..symbols.len() {
            if let Some(c) = self.covers.get(&symbols[s..]) {
                start = s;
                cover = c.clone();
                break;
            }
        }
        for k in (0..start).rev() {
            cover = self.pull(symbols[k] as usize, &cover)?;
            self.covers.insert(symbols[k..].to_vec(), cover.clone());
        }
        Ok(cover)
    }

    pub fn refine(&mut self, word: &CylinderWord) -> Result<Refinement<D>> {
        let symbols = word.symbols();
        if symbols.iter().any(|&s| s as usize >= self.map.symbol_count()) {
            return Err(Error::InvalidWord(format!("{word} has symbols outside the alphabet")));
        }
        let outer = self.outer_cover(symbols)?;
        if outer.is_empty() {
            return Ok(Refinement::Empty { word: word.clone(), volume_upper: 0.0 });
        }
        let tag = symbols.iter().fold(mix(symbols.len() as u64), |h, &s| mix(h ^ s as u64));
        let cfg = self.config;
        let cells: Vec<usize> = outer.iter().collect();
        let side = outer.scale().side();

        let mut witnesses = Vec::new();
        let mut rng = stream(cfg.seed, tag, 0);
        let mut hits = 0usize;
        for _ in 0..cfg.volume_samples {
            let lo = outer.cell_lo(cells[rng.random_range(0..cells.len())]);
            let mut x = [0.0; D];
            for i in 0..D {
                x[i] = lo[i] + side * rng.random::<f64>();
            }
            let p = TorusPoint::new(x);
            if follows(self.map, &p, symbols) {
                hits += 1;
                witnesses.push(p);
            }
        }
        let mut rng = stream(cfg.seed, tag, 1);
        for _ in 0..cfg.pullback_witnesses {
            let mut z = [0.0; D];
            for v in z.iter_mut() {
                *v = rng.random();
            }
            let mut p = TorusPoint::new(z);
            for &s in symbols.iter().rev() {
                p = self.map.inverse_branch(s as usize, &p);
            }
            if follows(self.map, &p, symbols) {
                if !outer.contains_point(&p) {
                    return Err(Error::InconsistentGeometry(format!(
                        "witness {:?} of {word} lies outside its outer cover",
                        p.0
                    )));
                }
                witnesses.push(p);
            }
        }

        let cover_volume = outer.volume();
        let n = cfg.volume_samples.max(1);
        let volume = MeasureEstimate {
            value: cover_volume * hits as f64 / n as f64,
            half_width: binomial_half_width(hits, n, cover_volume),
            hits,
            samples: cfg.volume_samples,
        };
        let volume_upper = volume.upper().min(cover_volume);
        if witnesses.is_empty() {
            return Ok(Refinement::Empty { word: word.clone(), volume_upper });
        }
        Ok(Refinement::Found(CylinderGeometry {
            word: word.clone(),
            outer,
            witnesses,
            volume_lower: volume.lower().min(volume_upper),
            volume_upper,
            volume,
        }))
    }
}

/// One-shot refinement without memoization.
pub fn refine_cylinder<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    word: &CylinderWord,
    config: RefineConfig,
) -> Result<Refinement<D>> {
    CylinderRefiner::new(map, config).refine(word)
}
