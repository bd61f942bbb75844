//! Deterministic power iteration kernels.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Matrix-free symmetric operator.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;
    /// `y <- M x`
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl SymmetricOperator for Graph {
    fn dim(&self) -> usize {
        self.vertex_count()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(u).iter().map(|&w| x[w]).sum();
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn scale_to_unit(a: &mut [f64]) -> f64 {
    let n = norm(a);
    if n > 0.0 {
        a.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// All-ones plus a small fixed per-index perturbation, unit length.
pub(crate) fn start_vector(n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 1e-3 * (splitmix64(i as u64) as f64 / u64::MAX as f64))
        .collect();
    scale_to_unit(&mut x);
    x
}

pub fn default_max_iterations(n: usize) -> usize {
    let n = n.max(2) as f64;
    (100.0 * n * n.ln()) as usize + 10_000
}

/// Output of an eigenpair solve.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn residual_of(op: &impl SymmetricOperator, x: &[f64], scratch: &mut [f64]) -> (f64, f64) {
    op.apply(x, scratch);
    let rho = dot(x, scratch);
    let r = scratch
        .iter()
        .zip(x)
        .map(|(ax, xi)| (ax - rho * xi).powi(2))
        .sum::<f64>()
        .sqrt();
    (rho, r)
}

const CHECK_EVERY: usize = 8;

/// Largest eigenvalue of a nonnegative symmetric operator, iterating on
/// its square so that a `-lambda` eigenvalue of equal modulus cannot stall
/// convergence. Convergence is measured on the operator itself after
/// projecting onto the positive-eigenvalue part via `(M + rho) x`.
pub fn top_eigenpair(
    op: &impl SymmetricOperator,
    tol: f64,
    max_iterations: usize,
) -> Result<Eigenpair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut x = start_vector(n);
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut candidate = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut best = (0.0, f64::INFINITY);
    for it in 0..=max_iterations {
        op.apply(&x, &mut y);
        if it % CHECK_EVERY == 0 || it == max_iterations {
            let rho = dot(&y, &y).sqrt();
            for i in 0..n {
                candidate[i] = y[i] + rho * x[i];
            }
            if scale_to_unit(&mut candidate) == 0.0 {
                candidate.copy_from_slice(&x);
            }
            let (value, residual) = residual_of(op, &candidate, &mut scratch);
            if residual < best.1 {
                best = (value, residual);
            }
            if residual <= tol {
                return Ok(Eigenpair {
                    value,
                    vector: candidate,
                    residual,
                    iterations: it,
                });
            }
        }
        op.apply(&y, &mut z);
        if scale_to_unit(&mut z) == 0.0 {
            // Nilpotent on the start vector: the operator is zero here.
            return Ok(Eigenpair {
                value: 0.0,
                vector: x,
                residual: 0.0,
                iterations: it,
            });
        }
        std::mem::swap(&mut x, &mut z);
    }
    Err(Error::NonConvergence {
        best: best.0,
        residual: best.1,
        iterations: max_iterations,
    })
}

/// `shift * I + sign * M`, restricted to the orthogonal complement of
/// `deflate` (unit vectors).
struct Shifted<'a, O> {
    op: &'a O,
    shift: f64,
    sign: f64,
    deflate: &'a [Vec<f64>],
}

impl<O: SymmetricOperator> Shifted<'_, O> {
    fn project(&self, x: &mut [f64]) {
        for q in self.deflate {
            let c = dot(q, x);
            x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
        }
    }
}

impl<O: SymmetricOperator> SymmetricOperator for Shifted<'_, O> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.op.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = self.shift * xi + self.sign * *yi;
        }
        self.project(y);
    }
}

/// Largest eigenvalue of `shift * I + sign * M` on the complement of
/// `deflate`, by plain power iteration. The caller picks `shift` so that
/// the operator is positive semidefinite there. Returns the eigenvalue of
/// the shifted operator.
pub fn shifted_top_eigenvalue(
    op: &impl SymmetricOperator,
    shift: f64,
    sign: f64,
    deflate: &[Vec<f64>],
    tol: f64,
    max_iterations: usize,
) -> Result<Eigenpair> {
    let shifted = Shifted {
        op,
        shift,
        sign,
        deflate,
    };
    let n = op.dim();
    let mut x: Vec<f64> = start_vector(n)
        .into_iter()
        .enumerate()
        // Break the symmetry of all-ones, which is often exactly the
        // deflated direction on regular graphs.
        .map(|(i, v)| v + if i % 2 == 0 { 0.3 } else { -0.2 } / (n as f64).sqrt())
        .collect();
    shifted.project(&mut x);
    if scale_to_unit(&mut x) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut y = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut best = (0.0, f64::INFINITY);
    for it in 0..=max_iterations {
        if it % CHECK_EVERY == 0 || it == max_iterations {
            let (value, residual) = residual_of(&shifted, &x, &mut scratch);
            if residual < best.1 {
                best = (value, residual);
            }
            if residual <= tol {
                return Ok(Eigenpair {
                    value,
                    vector: x,
                    residual,
                    iterations: it,
                });
            }
        }
        shifted.apply(&x, &mut y);
        if scale_to_unit(&mut y) == 0.0 {
            return Ok(Eigenpair {
                value: 0.0,
                vector: x,
                residual: 0.0,
                iterations: it,
            });
        }
        std::mem::swap(&mut x, &mut y);
    }
    Err(Error::NonConvergence {
        best: best.0,
        residual: best.1,
        iterations: max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, cycle, path};

    #[test]
    fn bipartite_graphs_converge() {
        for g in [
            path(7).unwrap(),
            cycle(10).unwrap(),
            complete_bipartite(2, 5).unwrap(),
        ] {
            let pair = top_eigenpair(&g, 1e-11, 1_000_000).unwrap();
            assert!(pair.residual <= 1e-11);
            assert!(pair.vector.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn reports_non_convergence() {
        let g = path(200).unwrap();
        match top_eigenpair(&g, 1e-14, 3) {
            Err(Error::NonConvergence { iterations, .. }) => assert_eq!(iterations, 3),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn start_vector_is_deterministic_and_positive() {
        assert_eq!(start_vector(17), start_vector(17));
        assert!(start_vector(17).iter().all(|&x| x > 0.0));
        assert!((norm(&start_vector(17)) - 1.0).abs() < 1e-15);
    }
}
