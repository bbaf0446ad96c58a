//! Seeded point clouds. All randomness in the crate flows through here.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the ball `B_radius ⊂ ℝⁿ` by rejection from the cube.
pub fn point_in_ball<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r2: f64 = p.iter().map(|v| v * v).sum();
        if r2 <= 1.0 {
            return p.into_iter().map(|v| v * radius).collect();
        }
    }
}

pub fn points_in_ball(seed: u64, n: usize, radius: f64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = rng(seed);
    (0..count).map(|_| point_in_ball(&mut rng, n, radius)).collect()
}

/// Nodes of the `per_axis^n` tensor grid on `[−radius, radius]ⁿ` that lie
/// in the closed ball.
pub fn grid_in_ball(n: usize, radius: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let per_axis = per_axis.max(2);
    let h = 2.0 * radius / (per_axis - 1) as f64;
    let total = per_axis.pow(n as u32);
    let mut out = Vec::new();
    for flat in 0..total {
        let mut rem = flat;
        let p: Vec<f64> = (0..n)
            .map(|_| {
                let k = rem % per_axis;
                rem /= per_axis;
                -radius + h * k as f64
            })
            .collect();
        if p.iter().map(|v| v * v).sum::<f64>() <= radius * radius * (1.0 + 1e-12) {
            out.push(p);
        }
    }
    out
}

/// Random orthogonal matrix from Gram–Schmidt on a uniform matrix.
pub fn orthogonal<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    loop {
        let m = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let qr = m.qr();
        let r = qr.r();
        if (0..n).all(|i| r[(i, i)].abs() > 1e-3) {
            return qr.q();
        }
    }
}

/// Random symmetric matrix with entries in `[−scale, scale]`.
pub fn symmetric<R: Rng>(rng: &mut R, n: usize, scale: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-scale..scale));
    (&m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_clouds_repeat() {
        assert_eq!(points_in_ball(7, 3, 0.5, 20), points_in_ball(7, 3, 0.5, 20));
        assert!(points_in_ball(7, 3, 0.5, 200)
            .iter()
            .all(|p| crate::linalg::norm(p) <= 0.5));
    }

    #[test]
    fn grid_contains_origin_for_odd_counts() {
        let g = grid_in_ball(2, 1.0, 5);
        assert!(g.iter().any(|p| p.iter().all(|v| v.abs() < 1e-15)));
        assert!(g.iter().all(|p| crate::linalg::norm(p) <= 1.0 + 1e-12));
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut r = rng(3);
        let q = orthogonal(&mut r, 4);
        assert!((q.transpose() * &q - DMatrix::identity(4, 4)).abs().max() < 1e-12);
    }
}
