//! Test-side reference implementations, written independently of the
//! library: brute-force neighbor search by full sorting, nalgebra's SVD and
//! textbook special functions.

#![allow(dead_code)]

use nalgebra::DMatrix;

use gknn::neighbors::PointSet;

pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0x2545_f491_4f6c_dd1d)
    }

    pub fn uniform(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn normal(&mut self) -> f64 {
        let u = self.uniform().max(1e-300);
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }
}

pub fn uniform_points(n: usize, d: usize, seed: u64) -> PointSet {
    let mut r = Lcg::new(seed);
    PointSet::new(d, (0..n * d).map(|_| r.uniform()).collect()).unwrap()
}

pub fn normal_points(n: usize, d: usize, seed: u64) -> PointSet {
    let mut r = Lcg::new(seed);
    PointSet::new(d, (0..n * d).map(|_| r.normal()).collect()).unwrap()
}

/// Random orthogonal matrix by Gram-Schmidt on Gaussian columns.
pub fn random_rotation(d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = Lcg::new(seed);
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| r.normal()).collect();
        for u in &q {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-6 {
            q.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    q
}

pub fn apply(points: &PointSet, rot: &[Vec<f64>], shift: &[f64]) -> PointSet {
    points
        .map_points(|p| rot.iter().zip(shift).map(|(row, s)| row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + s).collect())
        .unwrap()
}

/// psi(x) by upward recursion to x >= 12 and the asymptotic series.
pub fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + x.ln() - 0.5 / x - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0))))
}

/// ln of the unit d-ball volume, pi^(d/2) / Gamma(1 + d/2), with Gamma at
/// integers and half-integers by recursion.
pub fn ln_ball(d: usize) -> f64 {
    let mut g = if d % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() / 2.0 };
    let mut z = if d % 2 == 0 { 1.0 } else { 1.5 };
    while z < 1.0 + d as f64 / 2.0 - 1e-9 {
        g *= z;
        z += 1.0;
    }
    0.5 * d as f64 * std::f64::consts::PI.ln() - g.ln()
}

fn sq_euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// k nearest neighbors of i by (key, index) order; key is squared distance
/// for the Euclidean norm.
pub fn brute_knn(points: &PointSet, i: usize, k: usize, euclid: bool) -> Vec<(f64, usize)> {
    let p = points.point(i);
    let mut all: Vec<(f64, usize)> = (0..points.len())
        .filter(|&j| j != i)
        .map(|j| {
            let q = points.point(j);
            (if euclid { sq_euclid(p, q) } else { max_dist(p, q) }, j)
        })
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if all.len() > k {
        all.select_nth_unstable_by(k - 1, cmp);
        all.truncate(k);
    }
    all.sort_by(cmp);
    all
}

pub struct NaiveTerms {
    pub value: f64,
    pub correction: f64,
    pub fallbacks: usize,
}

/// g-knn entropy written out directly from its definition.
pub fn naive_gknn_entropy(points: &PointSet, k: usize, floor: f64, tol: f64) -> NaiveTerms {
    let n = points.len();
    let d = points.dim();
    let mut sum_log_k = 0.0;
    let mut sum_log_eps = 0.0;
    let mut sum_ratio = 0.0;
    let mut fallbacks = 0;
    for i in 0..n {
        let nb = brute_knn(points, i, k, true);
        let eps = nb[k - 1].0.sqrt();
        let mut members = vec![i];
        members.extend(nb.iter().map(|&(_, j)| j));
        let m = members.len();
        let mut centroid = vec![0.0; d];
        for &j in &members {
            for c in 0..d {
                centroid[c] += points.point(j)[c];
            }
        }
        centroid.iter_mut().for_each(|c| *c /= m as f64);
        let y = DMatrix::from_fn(m, d, |r, c| points.point(members[r])[c] - centroid[c]);
        let svd = y.svd(false, true);
        let v_t = svd.v_t.unwrap();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let s1 = svd.singular_values[order[0]];
        let ratios: Vec<f64> = order.iter().map(|&l| (svd.singular_values[l] / s1).max(floor)).collect();
        let axes: Vec<Vec<f64>> = order.iter().map(|&l| v_t.row(l).iter().copied().collect()).collect();
        let centre = points.point(i);
        let inside = nb
            .iter()
            .filter(|&&(_, j)| {
                let q: f64 = axes
                    .iter()
                    .zip(&ratios)
                    .map(|(a, r)| {
                        let proj: f64 = points.point(j).iter().zip(centre).zip(a).map(|((x, c), v)| (x - c) * v).sum();
                        (proj / (eps * r)).powi(2)
                    })
                    .sum();
                q <= 1.0 + tol
            })
            .count();
        if inside == 0 {
            fallbacks += 1;
        }
        sum_log_k += (inside.max(1) as f64).ln();
        sum_log_eps += eps.ln();
        sum_ratio += ratios.iter().map(|r| r.ln()).sum::<f64>();
    }
    let nf = n as f64;
    NaiveTerms {
        value: nf.ln() + ln_ball(d) - sum_log_k / nf + d as f64 * sum_log_eps / nf + sum_ratio / nf,
        correction: sum_ratio / nf,
        fallbacks,
    }
}

pub fn naive_kl_entropy(points: &PointSet, k: usize) -> f64 {
    let n = points.len();
    let d = points.dim();
    let sum: f64 = (0..n).map(|i| 0.5 * brute_knn(points, i, k, true)[k - 1].0.ln()).sum();
    -digamma(k as f64) + digamma(n as f64) + ln_ball(d) + d as f64 * sum / n as f64
}

pub fn naive_ksg(points: &PointSet, d_x: usize, k: usize) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let eps = brute_knn(points, i, k, false)[k - 1].0;
        let p = points.point(i);
        let (mut nx, mut ny) = (0usize, 0usize);
        for j in (0..n).filter(|&j| j != i) {
            let q = points.point(j);
            if max_dist(&p[..d_x], &q[..d_x]) < eps {
                nx += 1;
            }
            if max_dist(&p[d_x..], &q[d_x..]) < eps {
                ny += 1;
            }
        }
        acc += digamma(nx as f64 + 1.0) + digamma(ny as f64 + 1.0);
    }
    digamma(k as f64) + digamma(n as f64) - acc / n as f64
}
