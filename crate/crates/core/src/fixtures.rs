//! The small reference election used throughout the docs and tests: three
//! alternatives `a, b, c` (indices 0, 1, 2), seven voters in districts
//! `{0,1,2}, {3,4}, {5,6}` with weights `(3, 2, 2)`.

use crate::model::{DistrictPartition, ValuationProfile, WeightVector};

pub fn worked_example() -> (ValuationProfile, DistrictPartition, WeightVector) {
    let profile = ValuationProfile::new(vec![
        vec![0.3, 0.5, 0.2],
        vec![0.4, 0.1, 0.5],
        vec![0.4, 0.1, 0.5],
        vec![1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.4, 0.5, 0.1],
        vec![0.4, 0.5, 0.1],
    ])
    .expect("reference profile is unit-sum");
    let partition = DistrictPartition::new(vec![0, 0, 0, 1, 1, 2, 2], 3).expect("valid partition");
    let weights = WeightVector::new(vec![3.0, 2.0, 2.0]).expect("positive weights");
    (profile, partition, weights)
}
