//! Tiny dense real linear algebra for Newton and continuation steps.

/// Solve `a·x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` for a numerically singular matrix.
pub fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for col in 0..N {
        let piv = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() <= 1e-300_f64.max(scale * 1e-15) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..N {
            let f = a[r][col] / a[col][col];
            for k in col..N {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for r in (0..N).rev() {
        let mut s = b[r];
        for k in r + 1..N {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Kernel direction of a full-rank 3×4 matrix (generalized cross product),
/// normalized to unit length.
pub fn kernel_3x4(j: [[f64; 4]; 3]) -> Option<[f64; 4]> {
    let mut t = [0.0; 4];
    for (col, out) in t.iter_mut().enumerate() {
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            let mut k = 0;
            for c in 0..4 {
                if c != col {
                    m[r][k] = j[r][c];
                    k += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        *out = sign * det3(m);
    }
    let n = libm::sqrt(t.iter().map(|v| v * v).sum::<f64>());
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(t.map(|v| v / n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_with_pivoting() {
        let a = [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]];
        let x = solve(a, [4.5, 3.0, 6.0]).unwrap();
        // x = (1.5, 1.5, 1.5)
        for v in x {
            assert!((v - 1.5).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_is_orthogonal_to_rows() {
        let j = [[1.0, 2.0, 0.0, -1.0], [0.0, 1.0, 3.0, 2.0], [2.0, -1.0, 1.0, 0.5]];
        let t = kernel_3x4(j).unwrap();
        for row in j {
            let dot: f64 = row.iter().zip(t).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-13);
        }
    }
}
