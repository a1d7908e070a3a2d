use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::profile::step_terms;
use super::refine::{CylinderRefiner, RefineConfig, Refinement};
use super::{follows, itinerary, CylinderWord, MapWithHoles};
use crate::geometry::TorusPoint;
use crate::{Error, Result};

pub const DEFAULT_WORD_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationConfig {
    /// Abort once more than this many words are kept at one level.
    pub cap: usize,
    /// Use witness minima in the per-step terms. Without it the terms are the
    /// branch floors, which needs no geometry.
    pub geometric_terms: bool,
    pub refine: RefineConfig,
}

impl EnumerationConfig {
    pub fn new(refine: RefineConfig) -> Self {
        Self { cap: DEFAULT_WORD_CAP, geometric_terms: true, refine }
    }
}

/// Word counts of an enumeration. Every visited word is either kept or pruned.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Census {
    pub visited: usize,
    pub pruned: usize,
    pub kept: usize,
    /// `(visited, pruned, kept)` per depth, starting at depth 1.
    pub levels: Vec<(usize, usize, usize)>,
}

impl Census {
    fn record(&mut self, visited: usize, pruned: usize, kept: usize) {
        self.visited += visited;
        self.pruned += pruned;
        self.kept += kept;
        self.levels.push((visited, pruned, kept));
    }

    pub fn consistent(&self) -> bool {
        self.kept + self.pruned == self.visited
            && self.levels.iter().all(|&(v, p, k)| v == p + k)
    }
}

/// Words whose running averages stayed at or below the threshold so far, with
/// the sum of their per-step terms.
struct Frontier {
    words: Vec<(CylinderWord, f64)>,
}

enum ChildFate {
    Bad(f64),
    Good,
    Empty,
}

struct Walker<'r, 'a, M: ?Sized, const D: usize> {
    refiner: &'r mut CylinderRefiner<'a, M, D>,
    threshold: f64,
    geometric: bool,
}

impl<M: MapWithHoles<D> + ?Sized, const D: usize> Walker<'_, '_, M, D> {
    fn judge(&mut self, child: &CylinderWord, parent_sum: f64) -> Result<ChildFate> {
        let j = child.len();
        let symbol = *child.symbols().last().expect("nonempty") as usize;
        let map = self.refiner.map();
        let floor_sum = parent_sum + map.expansion_floor(symbol);
        if floor_sum / j as f64 > self.threshold {
            return Ok(ChildFate::Good);
        }
        if !self.geometric {
            return Ok(ChildFate::Bad(floor_sum));
        }
        match self.refiner.refine(child)? {
            Refinement::Empty { .. } => Ok(ChildFate::Empty),
            Refinement::Found(g) => {
                let (term, _) = step_terms(map, symbol, &g.witnesses, j);
                let sum = parent_sum + term;
                Ok(if sum / j as f64 > self.threshold { ChildFate::Good } else { ChildFate::Bad(sum) })
            }
        }
    }

    fn children(&self, frontier: &Frontier) -> Vec<(CylinderWord, f64)> {
        let map = self.refiner.map();
        let m = map.symbol_count();
        let mut out = Vec::new();
        if frontier.words.is_empty() {
            return out;
        }
        for (w, sum) in &frontier.words {
            let last = *w.symbols().last().expect("nonempty") as usize;
            for s in 0..m {
                if map.allows(last, s) {
                    out.push((w.extended(s as u8), *sum));
                }
            }
        }
        out
    }
}

/// Result of a bad-set enumeration at depth `n`.
#[derive(Debug, Clone)]
pub struct BadVolume {
    pub n: usize,
    pub threshold: f64,
    pub census: Census,
    /// Bad `n`-words with their Monte Carlo volume and volume upper bound.
    pub words: Vec<(CylinderWord, f64, f64)>,
    /// Sum of Monte Carlo volume estimates.
    pub volume: f64,
    /// Sum of the 99% half-widths.
    pub half_width: f64,
    /// Sum of per-word volume upper bounds.
    pub volume_upper: f64,
    /// Set when the cap was hit; only `volume_upper` is meaningful then.
    pub inconclusive: bool,
}

impl BadVolume {
    pub fn volume_lower(&self) -> f64 {
        (self.volume - self.half_width).max(0.0)
    }
}

/// `Leb(Bₙ(threshold))` by breadth-first enumeration of bad words.
pub fn bad_volume<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    n: usize,
    threshold: f64,
    config: EnumerationConfig,
) -> Result<BadVolume> {
    let mut refiner = CylinderRefiner::new(map, config.refine);
    bad_volume_with(&mut refiner, n, threshold, config)
}

pub(crate) fn bad_volume_with<const D: usize, M: MapWithHoles<D> + ?Sized>(
    refiner: &mut CylinderRefiner<'_, M, D>,
    n: usize,
    threshold: f64,
    config: EnumerationConfig,
) -> Result<BadVolume> {
    check_args(n, threshold)?;
    let m = refiner.map().symbol_count();
    let mut walker = Walker { refiner, threshold, geometric: config.geometric_terms };
    let mut census = Census::default();
    let mut frontier = Frontier { words: vec![] };
    let mut candidates: Vec<(CylinderWord, f64)> =
        (0..m).map(|s| (CylinderWord::new(vec![s as u8], m).expect("in range"), 0.0)).collect();
    for depth in 1..=n {
        if depth > 1 {
            candidates = walker.children(&frontier);
        }
        let visited = candidates.len();
        let mut kept = Vec::new();
        for (w, sum) in candidates.drain(..) {
            if let ChildFate::Bad(s) = walker.judge(&w, sum)? {
                kept.push((w, s));
            }
        }
        census.record(visited, visited - kept.len(), kept.len());
        if kept.len() > config.cap {
            return Ok(BadVolume {
                n,
                threshold,
                census,
                words: Vec::new(),
                volume: f64::NAN,
                half_width: f64::NAN,
                volume_upper: 1.0,
                inconclusive: true,
            });
        }
        frontier.words = kept;
    }
    let mut words = Vec::new();
    let (mut volume, mut half_width, mut volume_upper) = (0.0, 0.0, 0.0);
    for (w, _) in &frontier.words {
        match walker.refiner.refine(w)? {
            Refinement::Found(g) => {
                volume += g.volume.value;
                half_width += g.volume.half_width;
                volume_upper += g.volume_upper;
                words.push((w.clone(), g.volume.value, g.volume_upper));
            }
            Refinement::Empty { volume_upper: u, .. } => {
                half_width += u;
                volume_upper += u;
                words.push((w.clone(), 0.0, u));
            }
        }
    }
    Ok(BadVolume { n, threshold, census, words, volume, half_width, volume_upper, inconclusive: false })
}

fn check_args(n: usize, threshold: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("depth n must be at least 1".into()));
    }
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold {threshold} must be >= 0")));
    }
    Ok(())
}

/// The first-good-time partition: `S_k` holds the `(k+1)`-words whose running
/// average first exceeds the threshold at step `k+1`.
#[derive(Debug, Clone)]
pub struct SnPartition {
    pub n: usize,
    pub threshold: f64,
    /// `levels[k]` lists the words of `S_k`.
    pub levels: Vec<Vec<CylinderWord>>,
    /// Words still bad at depth `n`.
    pub bad: Vec<CylinderWord>,
    pub census: Census,
    /// Witnesses checked for disjointness, per level.
    pub witnesses_checked: Vec<usize>,
    /// Whether every checked witness is classified into its own word.
    pub disjoint: bool,
    pub inconclusive: bool,
    lookup: BTreeMap<Vec<u8>, usize>,
}

impl SnPartition {
    /// Level `k` and word of the `S_k` set containing the itinerary `symbols`,
    /// if any prefix of it is an `S_k` word.
    pub fn classify<'s>(&self, symbols: &'s [u8]) -> Option<(usize, &'s [u8])> {
        (1..=symbols.len().min(self.n)).find_map(|j| self.lookup.get(&symbols[..j]).map(|&k| (k, &symbols[..j])))
    }

    /// Return time `k + 1` of `x`, or `None` if `x` is in the induced hole.
    pub fn return_time<const D: usize, M: MapWithHoles<D> + ?Sized>(&self, map: &M, x: &TorusPoint<D>) -> Option<usize> {
        let (it, _) = itinerary(map, x, self.n);
        self.classify(&it).map(|(k, _)| k + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(|l| l.is_empty())
    }
}

pub fn sn_partition<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    n: usize,
    threshold: f64,
    config: EnumerationConfig,
) -> Result<SnPartition> {
    check_args(n, threshold)?;
    let mut refiner = CylinderRefiner::new(map, config.refine);
    let m = map.symbol_count();
    let geometric = config.geometric_terms;
    let mut walker = Walker { refiner: &mut refiner, threshold, geometric };
    let mut census = Census::default();
    let mut frontier = Frontier { words: vec![] };
    let mut levels = Vec::with_capacity(n);
    let mut inconclusive = false;
    for depth in 1..=n {
        let candidates = if depth == 1 {
            (0..m).map(|s| (CylinderWord::new(vec![s as u8], m).expect("in range"), 0.0)).collect()
        } else {
            walker.children(&frontier)
        };
        let visited = candidates.len();
        let mut kept = Vec::new();
        let mut good = Vec::new();
        for (w, sum) in candidates {
            match walker.judge(&w, sum)? {
                ChildFate::Bad(s) => kept.push((w, s)),
                ChildFate::Good => good.push(w),
                ChildFate::Empty => {}
            }
        }
        census.record(visited, visited - kept.len(), kept.len());
        levels.push(good);
        if kept.len() > config.cap {
            inconclusive = true;
            frontier.words = Vec::new();
            break;
        }
        frontier.words = kept;
    }
    let bad = frontier.words.into_iter().map(|(w, _)| w).collect();
    let mut lookup = BTreeMap::new();
    for (k, level) in levels.iter().enumerate() {
        for w in level {
            lookup.insert(w.symbols().to_vec(), k);
        }
    }
    let mut part = SnPartition {
        n,
        threshold,
        levels,
        bad,
        census,
        witnesses_checked: Vec::new(),
        disjoint: true,
        inconclusive,
        lookup,
    };
    if geometric {
        for k in 0..part.levels.len() {
            let mut checked = 0;
            for w in part.levels[k].clone() {
                if let Refinement::Found(g) = refiner.refine(&w)? {
                    for x in &g.witnesses {
                        debug_assert!(follows(map, x, w.symbols()));
                        let (it, _) = itinerary(map, x, part.n);
                        checked += 1;
                        if part.classify(&it) != Some((k, w.symbols())) {
                            part.disjoint = false;
                        }
                    }
                }
            }
            part.witnesses_checked.push(checked);
        }
    }
    Ok(part)
}

/// Cylinders of `Q_{n,l,t}`: `n`-words with `φₙ ≤ threshold`, grouped by the
/// number `l` of zero symbols and the number `t` of runs of zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct QCell {
    pub l: usize,
    pub t: usize,
    pub words: usize,
    pub volume: f64,
    pub volume_upper: f64,
}

/// Depth-first branch and bound over `n`-words; a prefix is cut once its floor
/// sum plus the smallest floor for the remaining steps exceeds `n · threshold`.
pub fn q_cells<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    n: usize,
    threshold: f64,
    config: EnumerationConfig,
) -> Result<(Vec<QCell>, Census)> {
    check_args(n, threshold)?;
    let m = map.symbol_count();
    let floors: Vec<f64> = (0..m).map(|s| map.expansion_floor(s)).collect();
    let min_floor = floors.iter().copied().fold(f64::INFINITY, f64::min);
    let budget = n as f64 * threshold;
    let mut census = Census::default();
    let mut level_counts = vec![(0usize, 0usize, 0usize); n];
    let mut finals: Vec<CylinderWord> = Vec::new();
    let mut stack: Vec<(Vec<u8>, f64)> = (0..m).rev().map(|s| (vec![s as u8], floors[s])).collect();
    while let Some((w, sum)) = stack.pop() {
        let j = w.len();
        level_counts[j - 1].0 += 1;
        if sum + (n - j) as f64 * min_floor > budget {
            level_counts[j - 1].1 += 1;
            continue;
        }
        level_counts[j - 1].2 += 1;
        if j == n {
            finals.push(CylinderWord::new(w, m)?);
            if finals.len() > config.cap {
                return Err(Error::InvalidParameter(format!("more than {} candidate Q words", config.cap)));
            }
            continue;
        }
        let last = w[j - 1] as usize;
        for s in (0..m).rev() {
            if map.allows(last, s) {
                let mut c = w.clone();
                c.push(s as u8);
                stack.push((c, sum + floors[s]));
            }
        }
    }
    for (v, p, k) in level_counts {
        census.record(v, p, k);
    }
    let mut refiner = CylinderRefiner::new(map, config.refine);
    let mut cells: BTreeMap<(usize, usize), QCell> = BTreeMap::new();
    for w in finals {
        let profile = if config.geometric_terms { refiner.profile(&w)? } else { None };
        let phi_n = match &profile {
            Some(p) => p.phi_n(),
            None if config.geometric_terms => continue,
            None => w.symbols().iter().map(|&s| floors[s as usize]).sum::<f64>() / n as f64,
        };
        if phi_n > threshold {
            continue;
        }
        let (volume, upper) = match refiner.refine(&w)? {
            Refinement::Found(g) => (g.volume.value, g.volume_upper),
            Refinement::Empty { volume_upper, .. } => (0.0, volume_upper),
        };
        let (l, t) = w.zero_runs();
        let cell = cells.entry((l, t)).or_insert(QCell { l, t, words: 0, volume: 0.0, volume_upper: 0.0 });
        cell.words += 1;
        cell.volume += volume;
        cell.volume_upper += upper;
    }
    Ok((cells.into_values().collect(), census))
}
