//! Exact closed-walk counts `s_k(v) = (A^k)_{vv}` in arbitrary precision.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedWalkCounts {
    pub origin: Vertex,
    /// `counts[k]` is the number of closed walks of length `k` at `origin`.
    #[serde(serialize_with = "as_decimal_strings")]
    pub counts: Vec<BigUint>,
}

fn as_decimal_strings<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
}

impl ClosedWalkCounts {
    pub fn max_length(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Counts for `k = 0..=max_length` by repeated integer mat-vec from the
/// indicator of `v`.
pub fn closed_walk_counts(graph: &Graph, v: Vertex, max_length: usize) -> Result<ClosedWalkCounts> {
    graph.check_vertex(v)?;
    let n = graph.vertex_count();
    let mut x = vec![BigUint::zero(); n];
    x[v] = BigUint::from(1u8);
    let mut counts = Vec::with_capacity(max_length + 1);
    counts.push(x[v].clone());
    let mut next = vec![BigUint::zero(); n];
    for _ in 0..max_length {
        for (u, out) in next.iter_mut().enumerate() {
            *out = graph.neighbors(u).iter().map(|&w| &x[w]).sum();
        }
        std::mem::swap(&mut x, &mut next);
        counts.push(x[v].clone());
    }
    Ok(ClosedWalkCounts { origin: v, counts })
}

pub fn all_closed_walk_counts(graph: &Graph, max_length: usize) -> Vec<ClosedWalkCounts> {
    crate::par::map_indices(graph.vertex_count(), |v| {
        closed_walk_counts(graph, v, max_length).expect("vertex in range")
    })
}

/// Natural logarithm of a big integer, `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64-bit mantissa").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a_k = s_{2k}(v)^{1/(2k)}` for `k = 1..=K/2`.
pub fn walk_growth_estimate(counts: &ClosedWalkCounts) -> Vec<f64> {
    (1..=counts.max_length() / 2)
        .map(|k| (ln_biguint(&counts.counts[2 * k]) / (2 * k) as f64).exp())
        .collect()
}

/// Exact check that `s_{2k}^{1/(2k)}` is nondecreasing, i.e.
/// `s_{2k+2}^k >= s_{2k}^{k+1}` for every available `k >= 1`.
pub fn growth_is_monotone(counts: &ClosedWalkCounts) -> bool {
    let half = counts.max_length() / 2;
    (1..half).all(|k| {
        let lo = &counts.counts[2 * k];
        let hi = &counts.counts[2 * k + 2];
        hi.pow(k as u32) >= lo.pow(k as u32 + 1)
    })
}
