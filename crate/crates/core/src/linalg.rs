use nalgebra::{DMatrix, SymmetricEigen};

/// Largest `|H_ij − H_ji|`.
pub fn asymmetry(h: &DMatrix<f64>) -> f64 {
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((h[(i, j)] - h[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize(h: &DMatrix<f64>) -> DMatrix<f64> {
    (h + h.transpose()) * 0.5
}

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn sym_eigen_sorted(h: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(h.clone());
    let mut idx: Vec<usize> = (0..h.nrows()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

pub fn sym_eigenvalues(h: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Spectral norm of a symmetric matrix.
pub fn sym_operator_norm(h: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(h).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Sorted eigenvalues of `[[a, b], [b, c]]`, computed without cancellation
/// in the smaller root.
pub fn eig2_sym(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let rad = (0.5 * (a - c)).hypot(b);
    let hi = mean + rad;
    let lo = mean - rad;
    let det = a * c - b * b;
    if mean >= 0.0 {
        let lo2 = if hi != 0.0 { det / hi } else { lo };
        (lo2.min(hi), hi)
    } else {
        let hi2 = if lo != 0.0 { det / lo } else { hi };
        (lo, hi2.max(lo))
    }
}

/// Euclidean distance.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}
