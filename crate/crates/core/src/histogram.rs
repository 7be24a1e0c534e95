//! Bin-count selection and weighted, density-normalized histograms.
//!
//! Bins are uniform over `[min, max]` of the sample values. Each bin is
//! half-open `[e_i, e_{i+1})` except the last, which is closed so the
//! maximum sample is counted.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Upper end of the Knuth scan when no explicit bound is given.
pub const DEFAULT_KNUTH_SEARCH_MAX: usize = 200;

/// Observations with per-observation nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl Samples {
    /// Wraps `values` with uniform weights `1/N`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        let weights = vec![1.0 / n as f64; n];
        Self::with_weights(values, weights)
    }

    pub fn with_weights(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::EmptyInput(values.len()));
        }
        if weights.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                actual: weights.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights("weights must be finite and nonnegative"));
        }
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::InvalidWeights("weights sum to zero"));
        }
        Ok(Self { values, weights })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `(min, max)` of the values.
    pub fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    fn sorted_values(&self) -> Vec<f64> {
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        sorted
    }
}

/// How many equal-width bins to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinRule {
    /// `round(sqrt(N))`
    SqrtN,
    /// `ceil(log2(N)) + 1`
    Sturges,
    /// width `3.49 * sigma * N^(-1/3)`
    Scott,
    /// width `2 * IQR * N^(-1/3)`
    FreedmanDiaconis,
    /// Maximizes the Bayesian log-posterior over `1..=search_max` bins.
    Knuth { search_max: usize },
    FixedCount(usize),
}

impl BinRule {
    pub fn knuth() -> Self {
        BinRule::Knuth {
            search_max: DEFAULT_KNUTH_SEARCH_MAX,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BinRule::FixedCount(0) => Err(Error::InvalidBinRule("fixed bin count must be >= 1".into())),
            BinRule::Knuth { search_max: 0 } => {
                Err(Error::InvalidBinRule("knuth search bound must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BinRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinRule::SqrtN => f.write_str("sqrt"),
            BinRule::Sturges => f.write_str("sturges"),
            BinRule::Scott => f.write_str("scott"),
            BinRule::FreedmanDiaconis => f.write_str("fd"),
            BinRule::Knuth { search_max } if *search_max == DEFAULT_KNUTH_SEARCH_MAX => {
                f.write_str("knuth")
            }
            BinRule::Knuth { search_max } => write!(f, "knuth:{search_max}"),
            BinRule::FixedCount(k) => write!(f, "fixed:{k}"),
        }
    }
}

impl FromStr for BinRule {
    type Err = Error;

    /// Parses `sqrt`, `sturges`, `scott`, `fd`, `knuth`, `knuth:MAX` or `fixed:K`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_count = |arg: &str| {
            arg.parse::<usize>()
                .map_err(|_| Error::InvalidBinRule(format!("bad count in {s:?}")))
        };
        let rule = match s.split_once(':') {
            None => match s {
                "sqrt" => BinRule::SqrtN,
                "sturges" => BinRule::Sturges,
                "scott" => BinRule::Scott,
                "fd" => BinRule::FreedmanDiaconis,
                "knuth" => BinRule::knuth(),
                _ => return Err(Error::InvalidBinRule(format!("unknown rule {s:?}"))),
            },
            Some(("fixed", k)) => BinRule::FixedCount(parse_count(k)?),
            Some(("knuth", k)) => BinRule::Knuth {
                search_max: parse_count(k)?,
            },
            Some(_) => return Err(Error::InvalidBinRule(format!("unknown rule {s:?}"))),
        };
        rule.validate()?;
        Ok(rule)
    }
}

/// Equal-width histogram normalized to unit area.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    heights: Vec<f64>,
    centers: Vec<f64>,
}

impl Histogram {
    /// Assembles a histogram from raw edges and heights.
    ///
    /// Only the structural invariants are checked here; normalization is
    /// enforced by consumers that depend on it.
    pub fn from_parts(edges: Vec<f64>, heights: Vec<f64>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::InvalidHistogram("at least one bin is required"));
        }
        if edges.len() != heights.len() + 1 {
            return Err(Error::LengthMismatch {
                expected: heights.len() + 1,
                actual: edges.len(),
            });
        }
        if let Some(index) = edges.iter().position(|e| !e.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        if let Some(i) = edges.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NonMonotoneKnots(i + 1));
        }
        if heights.iter().any(|h| !h.is_finite() || *h < 0.0) {
            return Err(Error::InvalidHistogram("heights must be finite and nonnegative"));
        }
        let centers = edges.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
        Ok(Self {
            edges,
            heights,
            centers,
        })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn bin_count(&self) -> usize {
        self.heights.len()
    }

    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.windows(2).map(|w| w[1] - w[0])
    }

    /// Probability mass `h_i * width_i` of each bin.
    pub fn masses(&self) -> impl Iterator<Item = f64> + '_ {
        self.heights.iter().zip(self.widths()).map(|(h, w)| h * w)
    }

    pub fn total_mass(&self) -> f64 {
        self.masses().sum()
    }
}

/// `b + 1` equally spaced edges from `lo` to `hi`, with both ends exact.
pub(crate) fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
    let span = hi - lo;
    let mut edges: Vec<f64> = (0..=bins)
        .map(|i| lo + span * (i as f64 / bins as f64))
        .collect();
    edges[bins] = hi;
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidHistogram("bin width underflows the value range"));
    }
    Ok(edges)
}

/// Index of the bin containing `v`; values at or above the last interior
/// edge fall in the final bin.
fn bin_index(edges: &[f64], v: f64) -> usize {
    let interior = &edges[1..edges.len() - 1];
    interior.partition_point(|&e| e <= v)
}

/// Builds the equal-width histogram of `samples` with `bin_count` bins.
///
/// `heights[i] = (weight in bin i) / (total weight * width_i)`.
pub fn build_histogram(samples: &Samples, bin_count: usize) -> Result<Histogram> {
    if bin_count == 0 {
        return Err(Error::InvalidBinRule("bin count must be >= 1".into()));
    }
    let (lo, hi) = samples.range();
    if hi <= lo {
        return Err(Error::ZeroRange);
    }
    let edges = uniform_edges(lo, hi, bin_count)?;
    let mut bin_weight = vec![0.0; bin_count];
    for (&v, &w) in samples.values().iter().zip(samples.weights()) {
        bin_weight[bin_index(&edges, v)] += w;
    }
    // normalize by the binned total so the masses sum to one up to B roundings
    let total: f64 = bin_weight.iter().sum();
    let heights = bin_weight
        .iter()
        .zip(edges.windows(2))
        .map(|(m, e)| m / (total * (e[1] - e[0])))
        .collect();
    Histogram::from_parts(edges, heights)
}

/// Knuth's marginal log-posterior for an equal-width histogram with
/// `counts.len()` bins, up to an additive constant:
///
/// `N ln B + lnG(B/2) - B lnG(1/2) - lnG(N + B/2) + sum_k lnG(n_k + 1/2)`
pub fn knuth_log_posterior(counts: &[u64], total: u64) -> Result<f64> {
    if counts.is_empty() {
        return Err(Error::InvalidBinRule("at least one bin is required".into()));
    }
    let actual: u64 = counts.iter().sum();
    if actual != total {
        return Err(Error::CountMismatch {
            expected: total,
            actual,
        });
    }
    let n = total as f64;
    let b = counts.len() as f64;
    let occupancy: f64 = counts.iter().map(|&c| ln_gamma(c as f64 + 0.5)).sum();
    Ok(n * b.ln() + ln_gamma(b / 2.0) - b * ln_gamma(0.5) - ln_gamma(n + b / 2.0) + occupancy)
}

/// Counts per bin for `bins` uniform bins over the range of `sorted`.
fn counts_from_sorted(sorted: &[f64], bins: usize) -> Result<Vec<u64>> {
    let lo = sorted[0];
    let hi = sorted[sorted.len() - 1];
    let edges = uniform_edges(lo, hi, bins)?;
    let mut counts = Vec::with_capacity(bins);
    let mut below_prev = 0usize;
    for &e in &edges[1..bins] {
        let below = sorted.partition_point(|&v| v < e);
        counts.push((below - below_prev) as u64);
        below_prev = below;
    }
    counts.push((sorted.len() - below_prev) as u64);
    Ok(counts)
}

fn knuth_bin_count(samples: &Samples, search_max: usize) -> Result<usize> {
    let sorted = samples.sorted_values();
    let total = sorted.len() as u64;
    let mut best = (1, f64::NEG_INFINITY);
    for bins in 1..=search_max {
        let counts = counts_from_sorted(&sorted, bins)?;
        let logp = knuth_log_posterior(&counts, total)?;
        // strict comparison keeps the smallest maximizer on ties
        if logp > best.1 {
            best = (bins, logp);
        }
    }
    Ok(best.0)
}

fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Linear-interpolation quantile of sorted data (the "type 7" definition).
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

fn count_from_width(range: f64, width: f64) -> usize {
    ((range / width).ceil() as usize).max(1)
}

/// Number of bins chosen by `rule`. Deterministic for fixed inputs.
///
/// Scott, Freedman-Diaconis, and Knuth use the raw values only; weights
/// do not enter the bin-count decision.
pub fn select_bin_count(samples: &Samples, rule: BinRule) -> Result<usize> {
    rule.validate()?;
    let n = samples.len();
    if n < 2 {
        return Err(Error::EmptyInput(n));
    }
    let (lo, hi) = samples.range();
    let range = hi - lo;
    if range <= 0.0 {
        return Err(Error::ZeroRange);
    }
    let cube_root = (n as f64).cbrt();
    match rule {
        BinRule::SqrtN => Ok(((n as f64).sqrt().round() as usize).max(1)),
        BinRule::Sturges => Ok(((n - 1).ilog2() + 1) as usize + 1),
        BinRule::Scott => {
            let sigma = std_dev(samples.values());
            if sigma <= 0.0 {
                return Err(Error::DegenerateDispersion("standard deviation"));
            }
            Ok(count_from_width(range, 3.49 * sigma / cube_root))
        }
        BinRule::FreedmanDiaconis => {
            let sorted = samples.sorted_values();
            let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
            if iqr <= 0.0 {
                return Err(Error::DegenerateDispersion("interquartile range"));
            }
            Ok(count_from_width(range, 2.0 * iqr / cube_root))
        }
        BinRule::Knuth { search_max } => knuth_bin_count(samples, search_max),
        BinRule::FixedCount(k) => Ok(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit(values: &[f64]) -> Samples {
        Samples::new(values.to_vec()).unwrap()
    }

    #[test]
    fn sturges_and_sqrt_counts() {
        let thousand = unit(&(0..1000).map(f64::from).collect::<Vec<_>>());
        assert_eq!(select_bin_count(&thousand, BinRule::Sturges).unwrap(), 11);
        let hundred = unit(&(0..100).map(f64::from).collect::<Vec<_>>());
        assert_eq!(select_bin_count(&hundred, BinRule::SqrtN).unwrap(), 10);
        let pow2 = unit(&(0..1024).map(f64::from).collect::<Vec<_>>());
        assert_eq!(select_bin_count(&pow2, BinRule::Sturges).unwrap(), 11);
    }

    #[test]
    fn scott_and_fd_widths() {
        // 0..=99: sample variance n(n+1)/12, IQR = 49.5
        let s = unit(&(0..100).map(f64::from).collect::<Vec<_>>());
        let sigma = (100.0f64 * 101.0 / 12.0).sqrt();
        let h = 3.49 * sigma / 100f64.cbrt();
        assert_eq!(
            select_bin_count(&s, BinRule::Scott).unwrap(),
            (99.0 / h).ceil() as usize
        );
        let h = 2.0 * 49.5 / 100f64.cbrt();
        assert_eq!(
            select_bin_count(&s, BinRule::FreedmanDiaconis).unwrap(),
            (99.0 / h).ceil() as usize
        );
    }

    #[test]
    fn dispersion_and_range_errors() {
        let flat = unit(&[2.0, 2.0, 2.0]);
        assert_eq!(select_bin_count(&flat, BinRule::SqrtN), Err(Error::ZeroRange));
        // IQR is zero but the range is not
        let spiky = unit(&[0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 5.0]);
        assert_eq!(
            select_bin_count(&spiky, BinRule::FreedmanDiaconis),
            Err(Error::DegenerateDispersion("interquartile range"))
        );
        assert!(matches!(Samples::new(vec![1.0]), Err(Error::EmptyInput(1))));
        assert!(matches!(
            Samples::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteInput { index: 1 })
        ));
        assert!(Samples::with_weights(vec![1.0, 2.0], vec![0.0, 0.0]).is_err());
        assert!(Samples::with_weights(vec![1.0, 2.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("knuth".parse::<BinRule>().unwrap(), BinRule::knuth());
        assert_eq!(
            "knuth:50".parse::<BinRule>().unwrap(),
            BinRule::Knuth { search_max: 50 }
        );
        assert_eq!("fixed:7".parse::<BinRule>().unwrap(), BinRule::FixedCount(7));
        assert!("fixed:0".parse::<BinRule>().is_err());
        assert!("fixed:x".parse::<BinRule>().is_err());
        assert!("bogus".parse::<BinRule>().is_err());
        for rule in ["sqrt", "sturges", "scott", "fd", "knuth", "knuth:9", "fixed:3"] {
            assert_eq!(rule.parse::<BinRule>().unwrap().to_string(), rule);
        }
    }

    #[test]
    fn knuth_single_bin_is_zero() {
        for n in [1u64, 7, 1000] {
            assert_relative_eq!(knuth_log_posterior(&[n], n).unwrap(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn knuth_two_equal_bins_by_hand() {
        // 10 ln 2 + lnG(1) - 2 lnG(1/2) - lnG(11) + 2 lnG(5.5)
        // lnG(1/2) = ln(sqrt(pi)), lnG(11) = ln(10!), G(5.5) = 9!! sqrt(pi) / 2^5
        let ln_sqrt_pi = 0.5 * std::f64::consts::PI.ln();
        let ln_g_5_5 = (945.0f64 / 32.0).ln() + ln_sqrt_pi;
        let expected = 10.0 * 2f64.ln() - 2.0 * ln_sqrt_pi - 3_628_800f64.ln() + 2.0 * ln_g_5_5;
        let got = knuth_log_posterior(&[5, 5], 10).unwrap();
        assert_relative_eq!(got, expected, epsilon = 1e-10);
    }

    #[test]
    fn knuth_count_mismatch() {
        assert_eq!(
            knuth_log_posterior(&[1, 2], 4),
            Err(Error::CountMismatch {
                expected: 4,
                actual: 3
            })
        );
    }

    #[test]
    fn histogram_symmetric_split() {
        let h = build_histogram(&unit(&[0.0, 1.0, 2.0, 3.0]), 2).unwrap();
        assert_eq!(h.edges(), &[0.0, 1.5, 3.0]);
        assert_relative_eq!(h.heights()[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(h.heights()[1], 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(h.centers(), &[0.75, 2.25]);
    }

    #[test]
    fn histogram_last_bin_is_closed() {
        // three samples in [0,1), the maximum lands in the closed last bin
        let h = build_histogram(&unit(&[0.0, 0.0, 0.0, 3.0]), 3).unwrap();
        assert_eq!(h.edges(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(h.heights(), &[0.75, 0.0, 0.25]);
    }

    #[test]
    fn histogram_respects_weights() {
        let s = Samples::with_weights(vec![0.0, 1.0, 2.0, 3.0], vec![3.0, 1.0, 0.0, 0.0]).unwrap();
        let h = build_histogram(&s, 2).unwrap();
        assert_relative_eq!(h.heights()[0], 1.0 / 1.5, epsilon = 1e-15);
        assert_eq!(h.heights()[1], 0.0);
    }

    #[test]
    fn histogram_zero_range() {
        assert_eq!(build_histogram(&unit(&[1.0, 1.0]), 3), Err(Error::ZeroRange));
    }

    #[test]
    fn sorted_counts_match_per_sample_binning() {
        let values: Vec<f64> = (0..500).map(|i| ((i * 37) % 101) as f64 * 0.3).collect();
        let s = unit(&values);
        let sorted = s.sorted_values();
        for bins in [1, 2, 7, 33, 101] {
            let edges = uniform_edges(sorted[0], sorted[499], bins).unwrap();
            let mut direct = vec![0u64; bins];
            for &v in &values {
                direct[bin_index(&edges, v)] += 1;
            }
            assert_eq!(counts_from_sorted(&sorted, bins).unwrap(), direct);
        }
    }

    proptest! {
        #[test]
        fn histogram_is_normalized(
            values in prop::collection::vec(-1e3f64..1e3, 2..200),
            bins in 1usize..60,
        ) {
            let s = Samples::new(values).unwrap();
            let (lo, hi) = s.range();
            prop_assume!(hi > lo);
            let h = build_histogram(&s, bins).unwrap();
            prop_assert!((h.total_mass() - 1.0).abs() <= 1e-12);
            prop_assert_eq!(h.edges()[0], lo);
            prop_assert_eq!(h.edges()[bins], hi);
        }

        #[test]
        fn histogram_ignores_sample_order(
            values in prop::collection::vec(-50f64..50.0, 2..100),
            bins in 1usize..20,
            rotate in 0usize..100,
        ) {
            let s = Samples::new(values.clone()).unwrap();
            let (lo, hi) = s.range();
            prop_assume!(hi > lo);
            let mut shuffled = values;
            let k = rotate % shuffled.len();
            shuffled.rotate_left(k);
            shuffled.reverse();
            let a = build_histogram(&s, bins).unwrap();
            let b = build_histogram(&Samples::new(shuffled).unwrap(), bins).unwrap();
            prop_assert_eq!(a.edges(), b.edges());
            for (x, y) in a.heights().iter().zip(b.heights()) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }

        #[test]
        fn knuth_posterior_is_permutation_invariant(
            counts in prop::collection::vec(0u64..50, 1..20),
            rotate in 0usize..20,
        ) {
            let total = counts.iter().sum();
            let mut permuted = counts.clone();
            let k = rotate % permuted.len();
            permuted.rotate_right(k);
            permuted.reverse();
            let a = knuth_log_posterior(&counts, total).unwrap();
            let b = knuth_log_posterior(&permuted, total).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }
}
