//! Fixed inputs shared by the benchmarks.

use hsikit::grpres::{IntMatrix, ManifoldDesc};
use hsikit::linkdiag::PDDiagram;

/// A deterministic dense matrix with small entries.
pub fn sample_matrix(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| ((i * 7 + j * 3 + i * j) % 19) as i64 - 9).collect()).collect();
    IntMatrix::from_rows(&rows)
}

pub fn lens_family(max_p: i64) -> Vec<ManifoldDesc> {
    (1..=max_p).flat_map(|p| (if p == 1 { 0..1 } else { 1..p }).filter(move |&q| num_gcd(p, q) == 1).map(move |q| ManifoldDesc::lens(p, q))).collect()
}

pub fn figure_eight() -> PDDiagram {
    PDDiagram::new(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]).expect("valid diagram")
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_well_formed() {
        assert_eq!(sample_matrix(5).nrows(), 5);
        assert_eq!(lens_family(5).len(), 1 + 1 + 2 + 2 + 4);
        assert_eq!(figure_eight().crossing_count(), 4);
    }
}
