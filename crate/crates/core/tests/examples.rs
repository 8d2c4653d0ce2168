//! Statistical spot checks of the estimators on samples with known answers.

mod common;

use std::f64::consts::{E, PI};

use gknn::estimators::{estimate, gknn_entropy_points, kl_entropy_points, Dataset, EstimatorConfig};
use gknn::models::{generate, true_mi_corr_gaussian, true_mi_family1, Family, FamilySpec, StreamRng};
use gknn::neighbors::PointSet;

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn column_sample(n: usize, seed: u64, normal: bool) -> Vec<f64> {
    let mut r = StreamRng::new(seed, 77);
    (0..n).map(|_| if normal { r.standard_normal() } else { r.uniform() }).collect()
}

fn shuffled(v: &[f64], seed: u64) -> Vec<f64> {
    let mut out = v.to_vec();
    let mut r = StreamRng::new(seed, 78);
    for i in (1..out.len()).rev() {
        let j = (r.next_u64() % (i as u64 + 1)) as usize;
        out.swap(i, j);
    }
    out
}

fn pairs(x: &[f64], y: &[f64]) -> Dataset {
    Dataset::new(PointSet::new(2, x.iter().zip(y).flat_map(|(a, b)| [*a, *b]).collect()).unwrap(), 1).unwrap()
}

#[test]
fn gknn_mi_of_shuffled_copy_is_near_zero() {
    let m = mean((1..=10).map(|seed| {
        let x = column_sample(10_000, seed, false);
        let y = shuffled(&x, seed);
        estimate(&pairs(&x, &y), &EstimatorConfig::gknn_mi(20)).unwrap().value
    }));
    assert!(m.abs() <= 0.1, "mean = {m}");
}

#[test]
fn gknn_mi_tracks_the_uniform_ridge() {
    let ds = generate(&FamilySpec::new(Family::UniformRidge, 0.01, 10_000, 1)).unwrap().dataset;
    let v = estimate(&ds, &EstimatorConfig::gknn_mi(20)).unwrap().value;
    let truth = true_mi_family1(0.01).unwrap().value.unwrap();
    assert!((v - truth).abs() <= 0.5, "{v} vs {truth}");
}

#[test]
fn gknn_entropy_of_2d_normal() {
    let mut r = StreamRng::new(5, 1);
    let pts = PointSet::new(2, (0..20_000).map(|_| r.standard_normal()).collect()).unwrap();
    let h = gknn_entropy_points(&pts, &EstimatorConfig::gknn_entropy(20)).unwrap().value;
    let truth = (2.0 * PI * E).ln();
    assert!((h - truth).abs() <= 0.15, "{h} vs {truth}");
}

#[test]
fn kl_entropy_of_uniform_and_normal() {
    let one_d = |seed, normal| PointSet::new(1, column_sample(10_000, seed, normal)).unwrap();
    let cfg = EstimatorConfig::kl_entropy(4);
    let u = mean((1..=10).map(|s| kl_entropy_points(&one_d(s, false), &cfg).unwrap()));
    assert!(u.abs() <= 0.03, "uniform: {u}");
    let g = mean((1..=10).map(|s| kl_entropy_points(&one_d(s, true), &cfg).unwrap()));
    let truth = 0.5 * (2.0 * PI * E).ln();
    assert!((g - truth).abs() <= 0.03, "normal: {g} vs {truth}");
}

#[test]
fn ksg_independence_and_correlated_gaussian() {
    let cfg = EstimatorConfig::ksg_mi(4);
    let indep = mean((1..=10).map(|s| {
        let x = column_sample(10_000, s, false);
        let y = column_sample(10_000, s + 100, false);
        estimate(&pairs(&x, &y), &cfg).unwrap().value
    }));
    assert!(indep.abs() <= 0.05, "{indep}");
    let corr = mean((1..=10).map(|s| {
        let ds = generate(&FamilySpec::new(Family::CorrGaussian, 0.1, 10_000, s)).unwrap().dataset;
        estimate(&ds, &cfg).unwrap().value
    }));
    assert!((corr - 0.8304).abs() <= 0.05, "{corr}");
}

#[test]
fn ksg_undershoots_nearly_deterministic_gaussian() {
    let alpha = 2f64.powi(-14);
    let truth = true_mi_corr_gaussian(alpha).unwrap().value.unwrap();
    for k in 2..=6 {
        let m = mean((1..=10).map(|s| {
            let ds = generate(&FamilySpec::new(Family::CorrGaussian, alpha, 100, s)).unwrap().dataset;
            estimate(&ds, &EstimatorConfig::ksg_mi(k)).unwrap().value
        }));
        assert!(truth - m >= 1.0, "k={k}: truth {truth}, mean {m}");
    }
}
