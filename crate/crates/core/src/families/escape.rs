use crate::geometry::{PointSet, TorusPoint};

/// Boundary samples used to check that a trap is forward invariant.
pub const TRAP_CHECK_SAMPLES: usize = 10_000;

/// A map with a trapping region around an attractor.
pub trait Trapped<const D: usize> {
    fn advance(&self, x: &TorusPoint<D>) -> TorusPoint<D>;

    fn in_trap(&self, x: &TorusPoint<D>) -> bool;

    /// The `i`-th of `n` points spread over the trap boundary, or `None` when
    /// the trap is empty.
    fn trap_boundary(&self, i: usize, n: usize) -> Option<TorusPoint<D>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Escape {
    pub survived: bool,
    /// Index of the first iterate in the trap, or the horizon.
    pub steps: usize,
}

/// Iterates `x` for up to `horizon` steps, stopping at the first iterate that
/// lies in the trap.
pub fn escape_time<const D: usize, M: Trapped<D> + ?Sized>(map: &M, x: &TorusPoint<D>, horizon: usize) -> Escape {
    let mut y = *x;
    for k in 0..=horizon {
        if map.in_trap(&y) {
            return Escape { survived: false, steps: k };
        }
        if k < horizon {
            y = map.advance(&y);
        }
    }
    Escape { survived: true, steps: horizon }
}

/// Whether boundary samples of the trap map into its closure. An empty trap is
/// trivially invariant.
pub fn trap_is_invariant<const D: usize, M: Trapped<D> + ?Sized>(map: &M, samples: usize) -> bool {
    (0..samples).all(|i| match map.trap_boundary(i, samples) {
        None => true,
        Some(x) => map.in_trap(&map.advance(&x)),
    })
}

/// The escape-time approximation of the repeller: points that avoid the trap
/// for `horizon` steps.
#[derive(Debug, Clone, Copy)]
pub struct Survivors<'a, M: ?Sized> {
    pub map: &'a M,
    pub horizon: usize,
    /// Whether trap invariance was verified; results are advisory otherwise.
    pub verified: bool,
}

impl<'a, M: ?Sized> Survivors<'a, M> {
    pub fn new<const D: usize>(map: &'a M, horizon: usize) -> Self
    where
        M: Trapped<D>,
    {
        Self { map, horizon, verified: trap_is_invariant(map, TRAP_CHECK_SAMPLES) }
    }
}

impl<const D: usize, M: Trapped<D> + ?Sized> PointSet<D> for Survivors<'_, M> {
    fn contains(&self, p: &TorusPoint<D>) -> bool {
        escape_time(self.map, p, self.horizon).survived
    }
}

/// Escape through the hole of a map with holes. No invariance is needed since
/// every iterate is tested against the hole itself.
#[derive(Debug, Clone, Copy)]
pub struct HoleEscape<'a, M: ?Sized>(pub &'a M);

impl<const D: usize, M: crate::holes::MapWithHoles<D> + ?Sized> Trapped<D> for HoleEscape<'_, M> {
    fn advance(&self, x: &TorusPoint<D>) -> TorusPoint<D> {
        self.0.step(x)
    }

    fn in_trap(&self, x: &TorusPoint<D>) -> bool {
        self.0.branch_of(x).is_none()
    }

    fn trap_boundary(&self, _i: usize, _n: usize) -> Option<TorusPoint<D>> {
        None
    }
}
