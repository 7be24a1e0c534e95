//! Shared inputs for the benchmarks.

use histspline::{flatten_positions, generate_corpus, CorpusConfig};

/// Flattened positions of a default-config braking corpus with `count` series.
pub fn braking_positions(count: usize) -> Vec<f64> {
    let config = CorpusConfig {
        count,
        ..CorpusConfig::default()
    };
    flatten_positions(&generate_corpus(&config).expect("default config is valid"))
}
