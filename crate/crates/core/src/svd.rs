//! Singular values of small dense matrices by one-sided (Hestenes) Jacobi
//! iteration. The matrices here are at most a few dozen entries on a side,
//! so a handful of sweeps is plenty and no blocking or pivot strategy is
//! needed.

/// Dense row-major `f64` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().copied().collect();
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn row_slice(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// All singular values of `m`, in descending order. The list has
/// `min(rows, cols)` entries.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    // One-sided Jacobi orthogonalizes columns; run on the taller
    // orientation so the column count equals min(rows, cols).
    let work = if m.rows >= m.cols { m.clone() } else { m.transpose() };
    let (rows, cols) = (work.rows, work.cols);
    // Column-major copy for cache-friendly column rotations.
    let mut col: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| work.get(i, j)).collect())
        .collect();

    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };

    const MAX_SWEEPS: usize = 60;
    const ORTH_TOL: f64 = 1e-14;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let app = dot(&col[p], &col[p]);
                let aqq = dot(&col[q], &col[q]);
                let apq = dot(&col[p], &col[q]);
                if apq.abs() <= ORTH_TOL * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                #[allow(clippy::needless_range_loop)] // rotating two columns in lockstep
                for i in 0..rows {
                    let (vp, vq) = (col[p][i], col[q][i]);
                    col[p][i] = c * vp - s * vq;
                    col[q][i] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = col.iter().map(|c| dot(c, c).sqrt()).collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    sigma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn diagonal_matrix() {
        let m = Mat::from_rows(vec![vec![3.0, 0.0], vec![0.0, -5.0], vec![0.0, 0.0]]);
        assert_close(&singular_values(&m), &[5.0, 3.0], 1e-12);
    }

    #[test]
    fn rank_one_all_ones() {
        let m = Mat::from_rows(vec![vec![1.0; 3]; 3]);
        assert_close(&singular_values(&m), &[3.0, 0.0, 0.0], 1e-12);
    }

    #[test]
    fn wide_equals_tall() {
        let m = Mat::from_rows(vec![vec![1.0, 2.0, 0.5], vec![-1.0, 0.25, 3.0]]);
        let a = singular_values(&m);
        let b = singular_values(&m.transpose());
        assert_close(&a, &b, 1e-12);
    }

    #[test]
    fn frobenius_and_product_identities_randomized() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..50 {
            let rows = 2 + rng.below(6);
            let cols = 2 + rng.below(6);
            let m = Mat::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| rng.uniform(-2.0, 2.0)).collect())
                    .collect(),
            );
            let s = singular_values(&m);
            assert_eq!(s.len(), rows.min(cols));
            // Sum of squares equals the Frobenius norm squared.
            let fro: f64 = (0..rows)
                .map(|i| m.row_slice(i).iter().map(|x| x * x).sum::<f64>())
                .sum();
            let ssq: f64 = s.iter().map(|x| x * x).sum();
            assert!((fro - ssq).abs() < 1e-9 * (1.0 + fro));
            // Descending and nonnegative.
            for w in s.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
            assert!(*s.last().unwrap() >= -1e-12);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        // Singular values of [[a, b], [c, d]] have a classical closed form.
        let (a, b, c, d) = (1.0, 2.0, 3.0, 4.0);
        let m = Mat::from_rows(vec![vec![a, b], vec![c, d]]);
        let f = a * a + b * b + c * c + d * d;
        let det = (a * d - b * c).abs();
        let disc = (f * f - 4.0 * det * det).sqrt();
        let want = [((f + disc) / 2.0).sqrt(), ((f - disc) / 2.0).sqrt()];
        assert_close(&singular_values(&m), &want, 1e-12);
    }
}
