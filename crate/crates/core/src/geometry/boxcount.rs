use alloc::vec::Vec;
use rand::Rng;

use super::grid::{GridCover, Scale};
use super::point::TorusPoint;
use crate::rng::stream;
use crate::{Error, Result};

/// A set given by a deterministic membership test.
pub trait PointSet<const D: usize> {
    fn contains(&self, p: &TorusPoint<D>) -> bool;
}

impl<const D: usize, F: Fn(&TorusPoint<D>) -> bool> PointSet<D> for F {
    fn contains(&self, p: &TorusPoint<D>) -> bool {
        self(p)
    }
}

/// Anything that can report which `ε`-grid cells a set occupies.
pub trait CoverSampler<const D: usize> {
    fn cover(&self, scale: Scale) -> Result<GridCover<D>>;

    /// Covers at several scales, returned in the order given.
    fn cover_ladder(&self, ladder: &[Scale]) -> Result<Vec<GridCover<D>>> {
        ladder.iter().map(|s| self.cover(*s)).collect()
    }
}

/// Number of occupied `ε`-boxes. A lower bound for the minimal cover count
/// that converges to the grid count as the sampling density grows.
pub fn box_count<const D: usize, S: CoverSampler<D>>(sampler: &S, epsilon: f64) -> Result<usize> {
    let scale = Scale::from_epsilon(epsilon)?;
    Ok(sampler.cover(scale)?.count())
}

/// An explicit finite sample of the set.
#[derive(Debug, Clone, Copy)]
pub struct PointCloud<'a, const D: usize>(pub &'a [TorusPoint<D>]);

impl<const D: usize> CoverSampler<D> for PointCloud<'_, D> {
    fn cover(&self, scale: Scale) -> Result<GridCover<D>> {
        if self.0.is_empty() {
            return Err(Error::EmptyBudget);
        }
        let mut g = GridCover::new(scale)?;
        for p in self.0 {
            let c = g.cell_of(p);
            g.insert(c);
        }
        Ok(g)
    }
}

/// Per-box sampling density. Each candidate box receives `initial` uniform
/// samples (stopping at the first member found); boxes still empty are
/// resampled with twice the density until the occupied count changes by less
/// than `tolerance` (relative) or the density would exceed `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleDensity {
    pub initial: usize,
    pub max: usize,
    pub tolerance: f64,
}

impl Default for SampleDensity {
    fn default() -> Self {
        Self { initial: 64, max: 1024, tolerance: 0.005 }
    }
}

/// Box counting by stratified membership sampling. On a nested ladder the
/// candidates at each scale are the children of boxes occupied at the next
/// coarser scale, and the member point found in a parent marks its child.
#[derive(Debug, Clone)]
pub struct MembershipSampler<S> {
    pub set: S,
    pub density: SampleDensity,
    pub seed: u64,
}

impl<S> MembershipSampler<S> {
    pub fn new(set: S, density: SampleDensity, seed: u64) -> Self {
        Self { set, density, seed }
    }
}

impl<S> MembershipSampler<S> {
    fn fill<const D: usize>(
        &self,
        cover: &mut GridCover<D>,
        candidates: &[usize],
        level: u64,
        witnesses: &mut Vec<(usize, TorusPoint<D>)>,
    ) -> Result<()>
    where
        S: PointSet<D>,
    {
        let d = self.density;
        if d.initial == 0 {
            return Err(Error::EmptyBudget);
        }
        let side = cover.scale().side();
        let mut empty: Vec<usize> = candidates.iter().copied().filter(|&c| !cover.contains(c)).collect();
        let mut per_box = d.initial;
        let mut round = 0u64;
        loop {
            let before = cover.count();
            for &cell in &empty {
                let lo = cover.cell_lo(cell);
                let mut rng = stream(self.seed, level << 8 | round, cell as u64);
                for _ in 0..per_box {
                    let mut x = [0.0; D];
                    for i in 0..D {
                        x[i] = lo[i] + side * rng.random::<f64>();
                    }
                    let p = TorusPoint::new(x);
                    if self.set.contains(&p) {
                        cover.insert(cell);
                        witnesses.push((cell, p));
                        break;
                    }
                }
            }
            empty.retain(|&c| !cover.contains(c));
            let gained = cover.count() - before;
            if round > 0 && (gained as f64) <= d.tolerance * before as f64 {
                break;
            }
            if empty.is_empty() || per_box * 2 > d.max {
                break;
            }
            per_box *= 2;
            round += 1;
        }
        Ok(())
    }

    fn cover_with_witnesses<const D: usize>(
        &self,
        scale: Scale,
        parent: Option<(&GridCover<D>, &[(usize, TorusPoint<D>)])>,
    ) -> Result<(GridCover<D>, Vec<(usize, TorusPoint<D>)>)>
    where
        S: PointSet<D>,
    {
        let mut cover = GridCover::new(scale)?;
        let mut witnesses = Vec::new();
        let candidates: Vec<usize> = match parent {
            None => (0..cover.total_cells()).collect(),
            Some((pc, pw)) => {
                for (_, p) in pw {
                    let c = cover.cell_of(p);
                    if cover.insert(c) {
                        witnesses.push((c, *p));
                    }
                }
                let ratio = (scale.base as usize).pow(scale.exponent - pc.scale().exponent);
                let mut cands = Vec::with_capacity(pc.count() * ratio.pow(D as u32));
                for parent_cell in pc.iter() {
                    let pcoords = pc.cell_coords(parent_cell);
                    let mut off = [0usize; D];
                    'children: loop {
                        let mut cc = [0usize; D];
                        for i in 0..D {
                            cc[i] = pcoords[i] * ratio + off[i];
                        }
                        cands.push(cover.flat_index(&cc));
                        let mut axis = 0;
                        loop {
                            if axis == D {
                                break 'children;
                            }
                            off[axis] += 1;
                            if off[axis] < ratio {
                                break;
                            }
                            off[axis] = 0;
                            axis += 1;
                        }
                    }
                }
                cands.sort_unstable();
                cands
            }
        };
        self.fill(&mut cover, &candidates, scale.exponent as u64, &mut witnesses)?;
        Ok((cover, witnesses))
    }
}

impl<const D: usize, S: PointSet<D>> CoverSampler<D> for MembershipSampler<S> {
    fn cover(&self, scale: Scale) -> Result<GridCover<D>> {
        Ok(self.cover_with_witnesses(scale, None)?.0)
    }

    fn cover_ladder(&self, ladder: &[Scale]) -> Result<Vec<GridCover<D>>> {
        if ladder.is_empty() {
            return Ok(Vec::new());
        }
        let base = ladder[0].base;
        if ladder.iter().any(|s| s.base != base) {
            return ladder.iter().map(|s| self.cover(*s)).collect();
        }
        let mut order: Vec<usize> = (0..ladder.len()).collect();
        order.sort_by_key(|&i| ladder[i].exponent);
        let mut out: Vec<Option<GridCover<D>>> = (0..ladder.len()).map(|_| None).collect();
        let mut prev: Option<(GridCover<D>, Vec<(usize, TorusPoint<D>)>)> = None;
        for &i in &order {
            let scale = ladder[i];
            let next = match &prev {
                Some((pc, pw)) if pc.scale() == scale => (pc.clone(), pw.clone()),
                Some((pc, pw)) => self.cover_with_witnesses(scale, Some((pc, pw)))?,
                None => self.cover_with_witnesses(scale, None)?,
            };
            out[i] = Some(next.0.clone());
            prev = Some(next);
        }
        Ok(out.into_iter().map(|c| c.expect("every ladder slot filled")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor_member(p: &TorusPoint<1>, depth: u32) -> bool {
        let mut x = p.0[0];
        for _ in 0..depth {
            if x > 1.0 / 3.0 && x < 2.0 / 3.0 {
                return false;
            }
            x = (3.0 * x).fract();
        }
        true
    }

    #[test]
    fn unit_square_at_half() {
        let s = MembershipSampler::new(|_: &TorusPoint<2>| true, SampleDensity::default(), 1);
        assert_eq!(box_count(&s, 0.5).unwrap(), 4);
    }

    #[test]
    fn single_point_counts_one() {
        let pts = [TorusPoint::new([0.3, 0.7])];
        for k in 1..10 {
            assert_eq!(box_count(&PointCloud(&pts), 0.5f64.powi(k)).unwrap(), 1);
        }
    }

    #[test]
    fn cantor_counts_match_interval_enumeration() {
        let set = |p: &TorusPoint<1>| cantor_member(p, 11);
        let s = MembershipSampler::new(set, SampleDensity::default(), 7);
        let ladder: Vec<Scale> = (1..=8).map(Scale::triadic).collect();
        let covers = s.cover_ladder(&ladder).unwrap();
        for (k, c) in (1..=8).zip(&covers) {
            // explicit enumeration of the level-k intervals
            let mut intervals = alloc::vec![(0u64, 1u64)];
            for _ in 0..k {
                intervals = intervals.iter().flat_map(|&(a, _)| [(3 * a, 1), (3 * a + 2, 1)]).collect();
            }
            assert_eq!(intervals.len(), 1 << k);
            assert_eq!(c.count(), 1 << k);
            for (a, _) in intervals {
                assert!(c.contains(a as usize));
            }
        }
    }

    #[test]
    fn ladder_matches_monotonicity() {
        let disk = |p: &TorusPoint<2>| p.norm() < 0.3;
        let s = MembershipSampler::new(disk, SampleDensity::default(), 3);
        let ladder: Vec<Scale> = (2..=6).map(Scale::dyadic).collect();
        let covers = s.cover_ladder(&ladder).unwrap();
        for w in covers.windows(2) {
            assert!(w[1].count() >= w[0].count());
            assert!(w[1].count() <= 4 * w[0].count());
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = MembershipSampler::new(|_: &TorusPoint<1>| true, SampleDensity { initial: 0, ..Default::default() }, 0);
        assert_eq!(box_count(&s, 0.5), Err(Error::EmptyBudget));
        let s = MembershipSampler::new(|_: &TorusPoint<1>| true, SampleDensity::default(), 0);
        assert!(box_count(&s, 0.0).is_err());
        assert!(box_count(&s, -1.0).is_err());
        assert!(box_count(&PointCloud::<1>(&[]), 0.5).is_err());
    }
}
