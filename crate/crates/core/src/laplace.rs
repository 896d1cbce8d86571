//! Tagged Laplace-transform evaluators `s ↦ E[exp(−sX)]`.
//!
//! Evaluators return `ln L(s)`; the rate integral needs `1 − L(s)` for tiny
//! `s`, which is only accurate when formed as `−expm1(ln L)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ClusterScheme;
use crate::zfbf::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    Signal,
    Interference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceTag {
    pub quantity: Quantity,
    pub scheme: Option<ClusterScheme>,
    pub direction: Option<Direction>,
    /// Distance from the cluster center for location-specific (disjoint) users.
    pub offset: Option<f64>,
}

impl LaplaceTag {
    pub fn new(quantity: Quantity, scheme: ClusterScheme, direction: Direction) -> Self {
        Self {
            quantity,
            scheme: Some(scheme),
            direction: Some(direction),
            offset: None,
        }
    }

    pub fn untagged(quantity: Quantity) -> Self {
        Self {
            quantity,
            scheme: None,
            direction: None,
            offset: None,
        }
    }

    pub fn at_offset(mut self, d: f64) -> Self {
        self.offset = Some(d);
        self
    }
}

type LogFn<'a> = dyn Fn(f64) -> Result<f64> + Send + Sync + 'a;

pub struct LaplaceEval<'a> {
    pub tag: LaplaceTag,
    ln: Box<LogFn<'a>>,
}

impl fmt::Debug for LaplaceEval<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaplaceEval")
            .field("tag", &self.tag)
            .finish_non_exhaustive()
    }
}

impl<'a> LaplaceEval<'a> {
    /// Wrap a function returning `ln L(s)`.
    pub fn from_log(tag: LaplaceTag, ln: impl Fn(f64) -> Result<f64> + Send + Sync + 'a) -> Self {
        Self { tag, ln: Box::new(ln) }
    }

    /// Transform of the zero random variable.
    pub fn unit(tag: LaplaceTag) -> Self {
        Self::from_log(tag, |_| Ok(0.0))
    }

    /// Transform of a point mass at `c ≥ 0`.
    pub fn constant(tag: LaplaceTag, c: f64) -> Self {
        Self::from_log(tag, move |s| Ok(-s * c))
    }

    /// Transform of `Γ(k, θ)`.
    pub fn gamma(tag: LaplaceTag, k: f64, theta: f64) -> Self {
        Self::from_log(tag, move |s| Ok(-k * (theta * s).ln_1p()))
    }

    pub fn ln_value(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::invalid("s", "Laplace argument must be non-negative"));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        (self.ln)(s)
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        self.ln_value(s).map(f64::exp)
    }

    /// Cache evaluations by exact argument; adaptive rules applied to related
    /// integrands revisit the same nodes, so this pays off for expensive transforms.
    pub fn memoized(self) -> Self {
        let LaplaceEval { tag, ln } = self;
        let cache: Mutex<HashMap<u64, f64>> = Mutex::new(HashMap::new());
        Self::from_log(tag, move |s| {
            if let Some(&v) = cache.lock().expect("cache poisoned").get(&s.to_bits()) {
                return Ok(v);
            }
            let v = ln(s)?;
            cache.lock().expect("cache poisoned").insert(s.to_bits(), v);
            Ok(v)
        })
    }

    /// Transform of `c·X`, i.e. `s ↦ L(c·s)`.
    pub fn scaled(self, c: f64) -> Self {
        let LaplaceEval { tag, ln } = self;
        Self::from_log(tag, move |s| ln(c * s))
    }
}
