use nalgebra::DMatrix;

use crate::graph::Graph;

/// All adjacency eigenvalues in ascending order.
pub fn dense_spectrum(graph: &Graph) -> Vec<f64> {
    let n = graph.vertex_count();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (u, v) in graph.edges() {
        m[(u, v)] = 1.0;
        m[(v, u)] = 1.0;
    }
    let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, petersen};

    #[test]
    fn known_spectra() {
        let k4 = dense_spectrum(&complete(4).unwrap());
        for (got, want) in k4.iter().zip([-1.0, -1.0, -1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let p = dense_spectrum(&petersen().unwrap());
        let want = [-2.0, -2.0, -2.0, -2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0];
        for (got, want) in p.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
