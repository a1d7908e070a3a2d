use alloc::vec::Vec;

use super::refine::{CylinderRefiner, RefineConfig, Refinement};
use super::{CylinderWord, MapWithHoles};
use crate::geometry::TorusPoint;
use crate::Result;

/// Average least expansions `φ₁, …, φₙ` along a word.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionProfile {
    pub word: CylinderWord,
    /// Per-step lower bounds for `inf_{x ∈ C_j} log ‖Df⁻¹(fʲx)‖⁻¹`.
    pub terms: Vec<f64>,
    /// Minimum of the same quantity over the witnesses of `C_j`.
    pub witness_min: Vec<f64>,
    /// Running means of `terms`.
    pub phi: Vec<f64>,
    /// Whether every witness of the full cylinder satisfies
    /// `∏ ‖Df⁻¹(fʲx)‖ ≤ e^{−n φₙ}`.
    pub product_check: bool,
}

impl ExpansionProfile {
    pub fn phi_n(&self) -> f64 {
        *self.phi.last().unwrap_or(&0.0)
    }
}

/// Per-step term at step `j` (1-based) for the prefix cylinder with the given
/// witnesses: the larger of the branch floor and the witness minimum less the
/// Lipschitz slack over the branch diameter. Returns `(term, witness_min)`.
pub fn step_terms<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    symbol: usize,
    witnesses: &[TorusPoint<D>],
    j: usize,
) -> (f64, f64) {
    let mut wmin = f64::INFINITY;
    for x in witnesses {
        let mut y = *x;
        for _ in 1..j {
            y = map.step(&y);
        }
        wmin = wmin.min(map.log_expansion(&y));
    }
    let floor = map.expansion_floor(symbol);
    let slack = map.expansion_lipschitz(symbol) * map.branch_diameter(symbol);
    (floor.max(wmin - slack), wmin)
}

pub(crate) fn running_means(terms: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            acc += t;
            acc / (i + 1) as f64
        })
        .collect()
}

impl<M: MapWithHoles<D> + ?Sized, const D: usize> CylinderRefiner<'_, M, D> {
    /// Profile of `word`, or `None` if some prefix cylinder is empty.
    pub fn profile(&mut self, word: &CylinderWord) -> Result<Option<ExpansionProfile>> {
        let n = word.len();
        let mut terms = Vec::with_capacity(n);
        let mut witness_min = Vec::with_capacity(n);
        let mut last = None;
        for j in 1..=n {
            let prefix = word.prefix(j);
            let geometry = match self.refine(&prefix)? {
                Refinement::Found(g) => g,
                Refinement::Empty { .. } => return Ok(None),
            };
            let (t, w) = step_terms(self.map(), word.symbols()[j - 1] as usize, &geometry.witnesses, j);
            terms.push(t);
            witness_min.push(w);
            last = Some(geometry);
        }
        let phi = running_means(&terms);
        let target = phi[n - 1] * n as f64;
        let map = self.map();
        let product_check = last.expect("n >= 1").witnesses.iter().all(|x| {
            let mut y = *x;
            let mut sum = 0.0;
            for j in 0..n {
                sum += map.log_expansion(&y);
                if j + 1 < n {
                    y = map.step(&y);
                }
            }
            sum >= target - 1e-9
        });
        Ok(Some(ExpansionProfile { word: word.clone(), terms, witness_min, phi, product_check }))
    }
}

/// `φ_j` along `word` computed from fresh cylinder geometry.
pub fn phi_profile<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    word: &CylinderWord,
    config: RefineConfig,
) -> Result<Option<ExpansionProfile>> {
    CylinderRefiner::new(map, config).profile(word)
}
