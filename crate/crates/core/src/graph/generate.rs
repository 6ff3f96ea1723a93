use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

/// Seeded random stream. Two streams built from the same seed produce the
/// same draws on every platform.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Samples an Erdős–Rényi graph G(n, p) with `p = avg_degree / (n - 1)`, so the
/// expected mean degree is `avg_degree`.
///
/// Every unordered pair is visited in lexicographic order with one Bernoulli
/// draw, which keeps the sample a pure function of the stream state.
pub fn generate_er(n: usize, avg_degree: f64, rng: &mut RngStream) -> Result<Graph, GraphError> {
    let max_degree = n.saturating_sub(1) as f64;
    if n == 0 || !avg_degree.is_finite() || avg_degree < 0.0 || avg_degree > max_degree {
        return Err(GraphError::InfeasibleDensity { n, avg_degree });
    }
    if avg_degree == 0.0 {
        return Ok(Graph::empty(n));
    }
    let p = (avg_degree / max_degree).min(1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_normalized(n, edges))
}
