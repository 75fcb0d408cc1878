//! Seeded synthetic data generators used by the test suites and for
//! desk-scale experiments.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataio::FaciesDataset;
use crate::matrix::DataMatrix;

/// Bivariate Gaussian sample with correlation `rho`, columns "x" and "y".
pub fn correlated_gaussian_pair(n: usize, rho: f64, seed: u64) -> DataMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = (1.0 - rho * rho).sqrt();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        xs.push(z1);
        ys.push(rho * z1 + scale * z2);
    }
    DataMatrix::from_columns(vec!["x".to_string(), "y".to_string()], vec![xs, ys]).unwrap()
}

/// Labeled fixture with `informative` signal-bearing features and `noise`
/// independent ones, spread over `wells` contiguous wells.
///
/// Labels are drawn uniformly from `n_classes` codes (1-based). Informative
/// feature j equals `sep_j * label + N(0,1)` with separations 3.0, 2.5, 2.0,
/// ... floored at 1.5, so every informative variable carries a strong but
/// distinct amount of signal; noise features are standard normal. Feature
/// names are `inf_1..` and `noise_1..`.
pub fn informative_noise_dataset(
    n: usize,
    informative: usize,
    noise: usize,
    wells: usize,
    n_classes: usize,
    seed: u64,
) -> FaciesDataset {
    assert!(wells >= 1 && n >= 2 * wells, "each well needs >= 2 rows");
    assert!(n_classes >= 2);
    assert!(informative + noise >= 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<i64> = (0..n).map(|_| rng.random_range(1..=n_classes as i64)).collect();

    let mut names = Vec::new();
    let mut columns = Vec::new();
    for j in 0..informative {
        let sep = (3.0 - 0.5 * j as f64).max(1.5);
        let col: Vec<f64> = labels
            .iter()
            .map(|&c| {
                let z: f64 = rng.sample(StandardNormal);
                sep * c as f64 + z
            })
            .collect();
        names.push(format!("inf_{}", j + 1));
        columns.push(col);
    }
    for j in 0..noise {
        let col: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        names.push(format!("noise_{}", j + 1));
        columns.push(col);
    }
    let features = DataMatrix::from_columns(names, columns).unwrap();

    let per_well = n / wells;
    let mut well_ids = Vec::with_capacity(n);
    let mut depths = Vec::with_capacity(n);
    for i in 0..n {
        // contiguous blocks; the last well absorbs the remainder
        let w = (i / per_well).min(wells - 1);
        well_ids.push(format!("well_{}", w + 1));
        depths.push(1000.0 + (i - w * per_well) as f64 * 0.5);
    }

    let class_names: BTreeMap<i64, String> = (1..=n_classes as i64)
        .map(|c| (c, format!("class_{c}")))
        .collect();

    FaciesDataset::new(well_ids, depths, features, labels, class_names, None).unwrap()
}
