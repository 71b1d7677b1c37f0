//! Equal-weight quadrature on the unit sphere `S^(2n-1)` of C^n.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::point::{CPoint, LogValue};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_NODES_1D: usize = 4096;
pub const DEFAULT_NODES: usize = 200_000;

/// Fraction of nodes allowed to hit `-inf` before a mean is declared degenerate.
pub const MAX_REJECTED_FRACTION: f64 = 0.01;

/// Nodes are summed in fixed-size chunks, then the chunk sums sequentially, so results do
/// not depend on the thread count.
const CHUNK: usize = 4096;

/// In C^1 the nodes are `exp(i (k + 1/2) 2 pi / N)`; the half step keeps them off the real
/// axis, where test atoms tend to sit. In C^n, n >= 2, they are normalised Gaussian vectors
/// drawn from a seeded ChaCha stream, in antipodal pairs so odd moments cancel exactly.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    dim: usize,
    seed: u64,
    nodes: Vec<Complex64>,
}

impl SphereQuadrature {
    pub fn new(dim: usize, node_count: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(domain!("sphere quadrature needs n >= 1"));
        }
        if node_count < 2 {
            return Err(domain!("sphere quadrature needs at least 2 nodes"));
        }
        let nodes = if dim == 1 {
            let step = std::f64::consts::TAU / node_count as f64;
            (0..node_count)
                .map(|k| Complex64::from_polar(1.0, (k as f64 + 0.5) * step))
                .collect()
        } else {
            if node_count % 2 != 0 {
                return Err(domain!("random sphere quadrature needs an even node count"));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut nodes = Vec::with_capacity(node_count * dim);
            let mut buf = vec![Complex64::new(0.0, 0.0); dim];
            for _ in 0..node_count / 2 {
                let mut norm2 = 0.0;
                while norm2 < 1e-20 {
                    for c in buf.iter_mut() {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        *c = Complex64::new(re, im);
                    }
                    norm2 = buf.iter().map(|c| c.norm_sqr()).sum();
                }
                let inv = norm2.sqrt().recip();
                nodes.extend(buf.iter().map(|c| c * inv));
                nodes.extend(buf.iter().map(|c| -c * inv));
            }
            nodes
        };
        Ok(SphereQuadrature { dim, seed, nodes })
    }

    /// The default rule for dimension `n` (4096 nodes in C^1, 2e5 seeded nodes otherwise).
    pub fn default_for(dim: usize) -> Result<Self> {
        let count = if dim == 1 { DEFAULT_NODES_1D } else { DEFAULT_NODES };
        Self::new(dim, count, DEFAULT_SEED)
    }

    /// Process-wide cache of rules, so oracles can share the large default ones.
    pub fn shared(dim: usize, node_count: usize, seed: u64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize, u64), Arc<SphereQuadrature>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (dim, node_count, seed);
        if let Some(q) = cache.lock().expect("quadrature cache poisoned").get(&key) {
            return Ok(q.clone());
        }
        let q = Arc::new(Self::new(dim, node_count, seed)?);
        cache.lock().expect("quadrature cache poisoned").insert(key, q.clone());
        Ok(q)
    }

    pub fn shared_default(dim: usize) -> Result<Arc<Self>> {
        let count = if dim == 1 { DEFAULT_NODES_1D } else { DEFAULT_NODES };
        Self::shared(dim, count, DEFAULT_SEED)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len() / self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.node_count() as f64
    }

    pub fn node(&self, k: usize) -> CPoint {
        CPoint::from_vec(self.nodes[k * self.dim..(k + 1) * self.dim].to_vec())
    }

    pub fn nodes(&self) -> impl Iterator<Item = CPoint> + '_ {
        self.nodes.chunks_exact(self.dim).map(|c| CPoint::from_vec(c.to_vec()))
    }

    /// Equal-weight mean of `f(center + r xi)` over the nodes `xi`.
    ///
    /// Nodes where `f` is `-inf` are dropped and the remaining weights renormalised; more
    /// than [`MAX_REJECTED_FRACTION`] of them is an error.
    pub fn mean<F>(&self, center: &CPoint, r: f64, f: F) -> Result<f64>
    where
        F: Fn(&CPoint) -> LogValue + Sync,
    {
        center.check_dim(self.dim)?;
        let dim = self.dim;
        let parts: Vec<(f64, usize)> = self
            .nodes
            .par_chunks(CHUNK * dim)
            .map_init(
                || center.clone(),
                |scratch, chunk| {
                    let mut sum = 0.0;
                    let mut rejected = 0;
                    for xi in chunk.chunks_exact(dim) {
                        for ((s, c), x) in scratch.coords_mut().iter_mut().zip(center.coords()).zip(xi) {
                            *s = c + x * r;
                        }
                        match f(scratch) {
                            LogValue::Finite(v) => sum += v,
                            LogValue::NegInfinity => rejected += 1,
                        }
                    }
                    (sum, rejected)
                },
            )
            .collect();
        let (sum, rejected) = parts.iter().fold((0.0, 0), |(s, k), (ps, pk)| (s + ps, k + pk));
        let total = self.node_count();
        if rejected > 0 {
            if rejected as f64 > MAX_REJECTED_FRACTION * total as f64 {
                return Err(Error::Degenerate(format!(
                    "{rejected} of {total} sphere nodes hit -inf (radius {r}, centre {center})"
                )));
            }
            log::debug!("sphere mean: rejected {rejected} of {total} nodes at -inf");
        }
        Ok(sum / (total - rejected) as f64)
    }

    /// Plain equal-weight mean of a real function of the node.
    pub fn average<F>(&self, f: F) -> f64
    where
        F: Fn(&[Complex64]) -> f64 + Sync,
    {
        let dim = self.dim;
        let parts: Vec<f64> = self
            .nodes
            .par_chunks(CHUNK * dim)
            .map(|chunk| chunk.chunks_exact(dim).map(&f).sum::<f64>())
            .collect();
        parts.iter().sum::<f64>() / self.node_count() as f64
    }
}
