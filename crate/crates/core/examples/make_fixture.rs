//! Write the synthetic informative-vs-noise well-log fixture as a CSV, for
//! trying the CLI without real data.
//!
//! Usage: cargo run -p ce-core --example make_fixture -- [PATH] [ROWS] [SEED]

use ce_core::dataio::{write_csv, CsvSchema, MissingPolicy};
use ce_core::synthetic;

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "fixture.csv".to_string());
    let rows: usize = args.next().map_or(1000, |v| v.parse().expect("ROWS"));
    let seed: u64 = args.next().map_or(7, |v| v.parse().expect("SEED"));

    let ds = synthetic::informative_noise_dataset(rows, 3, 5, 4, 3, seed);
    let schema = CsvSchema {
        well_col: "well".into(),
        depth_col: "depth".into(),
        label_col: "facies".into(),
        feature_cols: ds.feature_names().to_vec(),
        missing_policy: MissingPolicy::DropRow,
        missing_sentinel: None,
    };
    write_csv(&ds, path.as_ref(), &schema).expect("write fixture");
    println!(
        "wrote {path}: {} rows, features {}",
        ds.n_rows(),
        ds.feature_names().join(",")
    );
}
