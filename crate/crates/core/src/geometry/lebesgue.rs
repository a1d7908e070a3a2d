use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::point::TorusPoint;
use super::region::Region;
use crate::rng::stream;
use crate::{Error, Result};

/// Normal quantile for a two-sided 99% interval.
pub const Z_99: f64 = 2.576;
/// Upper 99% bound on the expected hit count when none were observed.
pub const RULE_OF_THREE_99: f64 = 5.3;

const MIN_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureEstimate {
    pub value: f64,
    /// 99% confidence half-width.
    pub half_width: f64,
    pub hits: usize,
    pub samples: usize,
}

impl MeasureEstimate {
    pub fn lower(&self) -> f64 {
        (self.value - self.half_width).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        self.value + self.half_width
    }
}

/// 99% half-width for a hit fraction scaled by `volume`. Normal approximation
/// above 30 hits; below that the rule-of-three bound, widened by the normal
/// term so that a handful of hits never gives a tighter interval than zero.
pub fn binomial_half_width(hits: usize, samples: usize, volume: f64) -> f64 {
    let n = samples as f64;
    if hits > 30 {
        let p = hits as f64 / n;
        Z_99 * (p * (1.0 - p) / n).sqrt() * volume
    } else {
        (RULE_OF_THREE_99 + Z_99 * (hits as f64).sqrt()) / n * volume
    }
}

/// Stratified Monte Carlo volume of `region` inside its bounding box. The box
/// is split into `m^D` equal strata with the same number of uniform samples
/// each; the binomial half-width is conservative for stratified sampling.
pub fn lebesgue_estimate<const D: usize, R: Region<D> + ?Sized>(
    region: &R,
    budget: usize,
    seed: u64,
) -> Result<MeasureEstimate> {
    if budget < MIN_BUDGET {
        return Err(Error::InvalidParameter(format!("budget {budget} below {MIN_BUDGET}")));
    }
    let bb = region.bounding_box();
    let mut width = [0.0; D];
    for i in 0..D {
        width[i] = (bb.hi[i] - bb.lo[i]).min(1.0);
        if !(width[i] > 0.0) {
            return Err(Error::InvalidParameter(format!("bounding box of {} is degenerate", region.label())));
        }
    }
    let volume: f64 = width.iter().product();

    let mut m = ((budget / 16) as f64).powf(1.0 / D as f64).floor().max(1.0) as usize;
    while m > 1 && m.pow(D as u32) > budget {
        m -= 1;
    }
    let strata = m.pow(D as u32);
    let per = budget / strata;
    let samples = per * strata;

    let mut hits = 0usize;
    for s in 0..strata {
        let mut idx = [0usize; D];
        let mut r = s;
        for i in 0..D {
            idx[i] = r % m;
            r /= m;
        }
        let mut rng = stream(seed, 0x4c45_4245, s as u64);
        for _ in 0..per {
            let mut x = [0.0; D];
            for i in 0..D {
                let u = (idx[i] as f64 + rng.random::<f64>()) / m as f64;
                x[i] = bb.lo[i] + width[i] * u;
            }
            if region.contains(&TorusPoint::new(x)) {
                hits += 1;
            }
        }
    }
    Ok(MeasureEstimate {
        value: volume * hits as f64 / samples as f64,
        half_width: binomial_half_width(hits, samples, volume),
        hits,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, EmptyRegion};

    #[test]
    fn disk_area() {
        let disk = Ball::new(TorusPoint::new([0.5, 0.5]), 0.1);
        let e = lebesgue_estimate(&disk, 100_000, 1).unwrap();
        let exact = core::f64::consts::PI * 0.01;
        assert!((e.value - exact).abs() <= e.half_width, "{e:?}");
    }

    #[test]
    fn empty_region_rule_of_three() {
        let e = lebesgue_estimate::<2, _>(&EmptyRegion, 10_000, 1).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.half_width <= RULE_OF_THREE_99 / 10_000.0 + 1e-15);
    }

    #[test]
    fn small_budget_rejected() {
        assert!(lebesgue_estimate::<1, _>(&EmptyRegion, 999, 1).is_err());
    }
}
