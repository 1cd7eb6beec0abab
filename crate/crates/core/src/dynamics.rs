//! System abstraction: phase points, model metadata, trajectory advancement
//! and invariant-measure sampling.

use crate::error::{Error, Result};
use crate::hyperbolic::UnitTangent;
use crate::rng::RngStream;

/// Whether time advances in integer steps or continuously.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeKind {
    Map,
    Flow,
}

/// Small fixed-capacity coordinate vector (tori and suspensions need at
/// most base dimension 2 plus one fiber coordinate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordVec {
    len: u8,
    v: [f64; 3],
}

impl CoordVec {
    pub fn new(coords: &[f64]) -> Self {
        assert!(coords.len() <= 3, "CoordVec holds at most 3 coordinates");
        let mut v = [0.0; 3];
        v[..coords.len()].copy_from_slice(coords);
        CoordVec {
            len: coords.len() as u8,
            v,
        }
    }

    pub fn d1(x: f64) -> Self {
        Self::new(&[x])
    }

    pub fn d2(x: f64, y: f64) -> Self {
        Self::new(&[x, y])
    }

    pub fn d3(x: f64, y: f64, z: f64) -> Self {
        Self::new(&[x, y, z])
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.v[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }
}

/// A point of phase space. Toral systems use plain coordinates in [0,1);
/// hyperbolic systems delegate to a unit tangent vector.
#[derive(Debug, Clone, Copy)]
pub enum PhasePoint {
    Coords(CoordVec),
    Tangent(UnitTangent),
}

impl PhasePoint {
    pub fn coords(v: &[f64]) -> Self {
        PhasePoint::Coords(CoordVec::new(v))
    }

    pub fn as_coords(&self) -> Result<&CoordVec> {
        match self {
            PhasePoint::Coords(c) => Ok(c),
            PhasePoint::Tangent(_) => Err(Error::InvalidArgument(
                "expected a coordinate phase point, got a unit tangent".into(),
            )),
        }
    }

    pub fn as_tangent(&self) -> Result<&UnitTangent> {
        match self {
            PhasePoint::Tangent(u) => Ok(u),
            PhasePoint::Coords(_) => Err(Error::InvalidArgument(
                "expected a unit tangent phase point, got coordinates".into(),
            )),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            PhasePoint::Coords(c) => c.is_finite(),
            PhasePoint::Tangent(u) => u.is_finite(),
        }
    }
}

/// Static description of a dynamical system, echoed into run manifests.
#[derive(Debug, Clone)]
pub struct SystemModel {
    pub name: String,
    pub kind: TimeKind,
    pub dimension: usize,
    /// Sup-norm speed bound for flows; Lipschitz constant of one step for
    /// maps. An honest upper bound: dist(x_t, x_s) <= velocity_bound |t-s|.
    pub velocity_bound: f64,
    pub parameters: Vec<(String, f64)>,
}

/// A measure-preserving map or flow with a sampler for its invariant
/// measure. Implementations are immutable values safe to share across
/// worker threads; `advance` never mutates its input.
pub trait System: Send + Sync {
    fn name(&self) -> &str;
    fn time_kind(&self) -> TimeKind;
    fn dimension(&self) -> usize;
    fn velocity_bound(&self) -> f64;
    fn parameters(&self) -> Vec<(String, f64)>;

    /// Advance by `dt` (a non-negative integer for maps). Exact group
    /// composition or modular arithmetic; no integrator anywhere.
    fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint>;

    /// One i.i.d. sample from the invariant measure.
    fn sample_invariant(&self, rng: &mut RngStream) -> Result<PhasePoint>;

    fn model(&self) -> SystemModel {
        SystemModel {
            name: self.name().to_string(),
            kind: self.time_kind(),
            dimension: self.dimension(),
            velocity_bound: self.velocity_bound(),
            parameters: self.parameters(),
        }
    }
}

/// Validate a requested advancement time against the system's time kind.
pub fn check_dt(kind: TimeKind, dt: f64) -> Result<()> {
    if !dt.is_finite() || dt < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "advance needs finite dt >= 0, got {dt}"
        )));
    }
    if kind == TimeKind::Map && dt.fract() != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "map systems advance in integer steps, got dt = {dt}"
        )));
    }
    Ok(())
}

/// n i.i.d. samples from the invariant measure, deterministic in
/// (master_seed, stream_index).
pub fn sample_invariant_n(
    system: &dyn System,
    rng: &mut RngStream,
    n: usize,
) -> Result<Vec<PhasePoint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1 samples".into()));
    }
    (0..n).map(|_| system.sample_invariant(rng)).collect()
}
