//! The induced map `F_n(x) = f^{k+1}(x)` on the first-good-time sets `S_k`.

use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::bounds::delta_bound;
use crate::geometry::{lebesgue_estimate, BoundingBox, MeasureEstimate, Region, TorusPoint};
use crate::holes::{sn_partition, EnumerationConfig, MapWithHoles, SnPartition};
use crate::linalg::{self, Matrix};
use crate::rng::stream;
use crate::{Error, Result};

const TAG_EXPANSION: u64 = 0x1d_e1;
const TAG_REPELLER: u64 = 0x1d_e2;

pub struct InducedExpander<'a, M: ?Sized, const D: usize> {
    map: &'a M,
    pub partition: SnPartition,
    /// Set when no `S_k` is realised: every point lies in the induced hole.
    pub empty_domain: bool,
}

pub fn build_induced<'a, const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &'a M,
    n: usize,
    threshold: f64,
    config: EnumerationConfig,
) -> Result<InducedExpander<'a, M, D>> {
    let partition = sn_partition(map, n, threshold, config)?;
    let empty_domain = partition.is_empty();
    Ok(InducedExpander { map, partition, empty_domain })
}

impl<'a, const D: usize, M: MapWithHoles<D> + ?Sized> InducedExpander<'a, M, D> {
    pub fn map(&self) -> &'a M {
        self.map
    }

    pub fn depth(&self) -> usize {
        self.partition.n
    }

    pub fn threshold(&self) -> f64 {
        self.partition.threshold
    }

    /// `k + 1` on `S_k`; `None` in the induced hole.
    pub fn return_time(&self, x: &TorusPoint<D>) -> Option<usize> {
        self.partition.return_time(self.map, x)
    }

    pub fn in_hole(&self, x: &TorusPoint<D>) -> bool {
        self.return_time(x).is_none()
    }

    /// `F_n(x)` and the return time used.
    pub fn step(&self, x: &TorusPoint<D>) -> Option<(TorusPoint<D>, usize)> {
        let j = self.return_time(x)?;
        let mut y = *x;
        for _ in 0..j {
            y = self.map.step(&y);
        }
        Some((y, j))
    }

    /// `DF_n(x)` for a return time `j`.
    pub fn jacobian(&self, x: &TorusPoint<D>, j: usize) -> Matrix<D> {
        let mut acc = linalg::identity::<D>();
        let mut y = *x;
        for _ in 0..j {
            acc = linalg::mul(&self.map.jacobian(&y), &acc);
            y = self.map.step(&y);
        }
        acc
    }

    pub fn hole(&self) -> InducedHole<'_, 'a, M, D> {
        InducedHole(self)
    }
}

/// `H_{F_n}`, the complement of the union of the `S_k`.
pub struct InducedHole<'r, 'a, M: ?Sized, const D: usize>(&'r InducedExpander<'a, M, D>);

impl<const D: usize, M: MapWithHoles<D> + ?Sized> Region<D> for InducedHole<'_, '_, M, D> {
    fn contains(&self, p: &TorusPoint<D>) -> bool {
        self.0.in_hole(p)
    }

    fn bounding_box(&self) -> BoundingBox<D> {
        BoundingBox::unit()
    }

    fn label(&self) -> &str {
        "induced-hole"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCheck<const D: usize> {
    pub threshold: f64,
    pub samples: usize,
    /// Samples that fell in the domain and were checked.
    pub checked: usize,
    /// Smallest `log(1/‖DF⁻¹(Fx)‖)/j − threshold` seen.
    pub min_margin: f64,
    pub worst_point: Option<TorusPoint<D>>,
    pub worst_return: usize,
    pub violations: usize,
}

impl<const D: usize> ExpansionCheck<D> {
    pub fn pass(&self) -> bool {
        self.checked > 0 && self.violations == 0
    }
}

/// Checks `‖DF_n⁻¹(F_n x)‖ ≤ e^{−c j}` at uniform samples of the domain.
pub fn verify_expansion<const D: usize, M: MapWithHoles<D> + ?Sized>(
    f: &InducedExpander<'_, M, D>,
    samples: usize,
    seed: u64,
) -> Result<ExpansionCheck<D>> {
    if f.empty_domain {
        return Err(Error::Precondition("induced map has an empty domain".into()));
    }
    if samples == 0 {
        return Err(Error::EmptyBudget);
    }
    let c = f.threshold();
    let mut rng = stream(seed, TAG_EXPANSION, 0);
    let mut out = ExpansionCheck {
        threshold: c,
        samples,
        checked: 0,
        min_margin: f64::INFINITY,
        worst_point: None,
        worst_return: 0,
        violations: 0,
    };
    for _ in 0..samples {
        let x = TorusPoint::new(core::array::from_fn(|_| rng.random::<f64>()));
        let Some(j) = f.return_time(&x) else { continue };
        out.checked += 1;
        let margin = linalg::min_singular(&f.jacobian(&x, j)).ln() / j as f64 - c;
        if !(margin > 0.0) {
            out.violations += 1;
        }
        if margin < out.min_margin || out.worst_point.is_none() {
            out.min_margin = margin;
            out.worst_point = Some(x);
            out.worst_return = j;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoleVolume {
    pub measured: MeasureEstimate,
    pub delta: f64,
    pub mu_f: f64,
    /// `μ_f Σ_{j=1}^{n−1} Sʲ (m+1)ʲ`.
    pub series: f64,
    pub bound: f64,
}

impl HoleVolume {
    /// The measured volume does not exceed the bound beyond its CI.
    pub fn pass(&self) -> bool {
        self.measured.lower() <= self.bound
    }
}

/// Monte Carlo `Leb(H_{F_n})` against `δ(n) + μ_f + μ_f Σ_{j<n} Sʲ(m+1)ʲ`.
pub fn induced_hole_volume<const D: usize, M: MapWithHoles<D> + ?Sized>(
    f: &InducedExpander<'_, M, D>,
    budget: usize,
    seed: u64,
) -> Result<HoleVolume> {
    let map = f.map;
    let n = f.depth();
    let mu_f = map.hole_volume();
    let ratio = map.inverse_derivative_sup() * map.intersection_bound() as f64;
    let series = mu_f * (1..n).map(|j| ratio.powi(j as i32)).sum::<f64>();
    let delta = delta_bound(n, map.delta_parameter())?;
    let measured = lebesgue_estimate(&f.hole(), budget, seed)?;
    Ok(HoleVolume { measured, delta, mu_f, series, bound: delta + mu_f + series })
}

/// Smallest `n ≤ cap` with `δ(n, ·) < μ_f`.
pub fn choose_n0<const D: usize, M: MapWithHoles<D> + ?Sized>(map: &M, cap: usize) -> Result<Option<usize>> {
    let (p, mu_f) = (map.delta_parameter(), map.hole_volume());
    for n in 1..=cap {
        if delta_bound(n, p)? < mu_f {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionCheck {
    pub samples: usize,
    /// Samples surviving the requested number of induced steps.
    pub survivors: usize,
    /// Survivors whose base orbit met the hole.
    pub violations: usize,
}

/// Points surviving `steps` iterates of `F_n` must survive the matching base
/// iterates of `f`.
pub fn repeller_inclusion<const D: usize, M: MapWithHoles<D> + ?Sized>(
    f: &InducedExpander<'_, M, D>,
    samples: usize,
    steps: usize,
    seed: u64,
) -> Result<InclusionCheck> {
    if samples == 0 {
        return Err(Error::EmptyBudget);
    }
    if steps == 0 {
        return Err(Error::Precondition(format!("steps must be positive, got {steps}")));
    }
    let mut rng = stream(seed, TAG_REPELLER, 0);
    let mut out = InclusionCheck { samples, survivors: 0, violations: 0 };
    'sample: for _ in 0..samples {
        let x = TorusPoint::new(core::array::from_fn(|_| rng.random::<f64>()));
        let mut y = x;
        let mut base = 0;
        for _ in 0..steps {
            match f.step(&y) {
                Some((z, j)) => {
                    y = z;
                    base += j;
                }
                None => continue 'sample,
            }
        }
        out.survivors += 1;
        let mut z = x;
        for _ in 0..base {
            if f.map.branch_of(&z).is_none() {
                out.violations += 1;
                continue 'sample;
            }
            z = f.map.step(&z);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ConformalTorusMap, DiazVianaFamily, TriplingMap};
    use crate::holes::RefineConfig;

    fn config(d: usize) -> EnumerationConfig {
        EnumerationConfig::new(RefineConfig::for_dimension(d, 7))
    }

    #[test]
    fn tripling_returns_immediately() {
        let f = build_induced(&TriplingMap, 1, 0.1, config(1)).unwrap();
        assert!(!f.empty_domain);
        assert_eq!(f.return_time(&TorusPoint::new([0.1])), Some(1));
        assert_eq!(f.return_time(&TorusPoint::new([0.9])), Some(1));
        assert!(f.in_hole(&TorusPoint::new([0.5])));
        let e = verify_expansion(&f, 2000, 1).unwrap();
        assert!(e.pass() && (e.min_margin - (3f64.ln() - 0.1)).abs() < 1e-12);
        let h = induced_hole_volume(&f, 20_000, 2).unwrap();
        assert!((h.measured.value - 1.0 / 3.0).abs() < 0.01);
        assert!(h.pass() && h.bound >= 1.0 / 3.0 && h.series == 0.0);
    }

    #[test]
    fn conformal_margin() {
        let f = build_induced(&ConformalTorusMap, 2, 0.1, config(2)).unwrap();
        let e = verify_expansion(&f, 500, 3).unwrap();
        assert_eq!(e.checked, 500);
        assert!((e.min_margin - (0.5 * 10f64.ln() - 0.1)).abs() < 1e-9);
    }

    #[test]
    fn diaz_viana_hole_is_the_base_hole() {
        let m = DiazVianaFamily::new(0.1).unwrap();
        let f = build_induced(&m, 4, m.threshold(), config(1)).unwrap();
        assert!(f.partition.levels[1..].iter().all(|l| l.is_empty()));
        let h = induced_hole_volume(&f, 20_000, 4).unwrap();
        assert!((h.measured.value - m.hole_volume()).abs() <= h.measured.half_width + 1e-3);
        assert!(h.pass());
        let r = repeller_inclusion(&f, 2000, 3, 5).unwrap();
        assert!(r.survivors > 0 && r.violations == 0);
    }

    #[test]
    fn n0_for_tripling() {
        assert_eq!(choose_n0(&TriplingMap, 100).unwrap(), Some(1));
    }
}
