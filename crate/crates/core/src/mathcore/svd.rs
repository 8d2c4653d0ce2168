use super::{MathError, SmallMatrix, MAX_DIMENSION};

/// Pairwise orthogonality threshold for the one-sided Jacobi sweeps: a column
/// pair is left alone once |<a_p, a_q>| <= TOL * |a_p| |a_q|.
const ORTHOGONALITY_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;
/// Singular values below this are reported as exactly zero.
const ZERO_SINGULAR_VALUE: f64 = 1e-300;

/// Singular values and right singular vectors of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// `right_singular_vectors[l]` pairs with `singular_values[l]`.
    pub right_singular_vectors: Vec<Vec<f64>>,
}

/// Thin SVD via one-sided (Hestenes) Jacobi rotations on the columns.
///
/// Column pairs are rotated until every pair is orthogonal to working
/// precision, which drives the off-diagonal part of the implied d x d Gram
/// matrix to zero without ever forming it. The column norms are then the
/// singular values and the accumulated rotation is V. Left singular vectors are
/// not returned.
pub fn svd_thin(m: &SmallMatrix) -> Result<SvdResult, MathError> {
    let rows = m.rows();
    let d = m.cols();
    if d > MAX_DIMENSION {
        return Err(MathError::InvalidInput(format!(
            "svd_thin supports at most {MAX_DIMENSION} columns, got {d}"
        )));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(MathError::InvalidInput("matrix has non-finite entries".into()));
    }

    // column-major working copy
    let mut cols: Vec<Vec<f64>> = (0..d).map(|c| (0..rows).map(|r| m.get(r, c)).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..d)
        .map(|c| {
            let mut e = vec![0.0; d];
            e[c] = 1.0;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..d {
            for q in p + 1..d {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(l, c)| {
            let s = dot(c, c).sqrt();
            (if s < ZERO_SINGULAR_VALUE { 0.0 } else { s }, l)
        })
        .collect();
    // stable: equal singular values keep their column order
    order.sort_by(|a, b| b.0.total_cmp(&a.0));

    Ok(SvdResult {
        singular_values: order.iter().map(|&(s, _)| s).collect(),
        right_singular_vectors: order.iter().map(|&(_, l)| v[l].clone()).collect(),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}
