//! Closed-form models: aggregated-traffic CDF, expected digital-RB count,
//! throughput estimate, capacity bounds, and the ADC sample-efficiency metric.

use crate::config::SystemConfig;
use crate::subband::{alpha, canonical_sharer};
use thiserror::Error;

/// Irwin-Hall orders beyond this lose too much precision to the
/// alternating sum in double precision.
pub const MAX_IRWIN_HALL_ORDER: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("Irwin-Hall order must lie in 1..={MAX_IRWIN_HALL_ORDER}, got {0}")]
    IrwinHallOrder(usize),
    #[error("traffic rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("analog and digital spectral efficiencies coincide, crossover is undefined")]
    NoSeGap,
    #[error("efficiency grid must not be empty")]
    EmptyGrid,
    #[error("efficiency grid rows must all have the same length")]
    RaggedGrid,
    #[error("sub-band RB index {index} outside grid with {num_rbs} resource blocks")]
    SubbandOutOfRange { index: usize, num_rbs: usize },
    #[error("the proposed-architecture efficiency needs a non-empty sub-band")]
    EmptySubband,
}

/// CDF of the sum of `n` i.i.d. Uniform(0, 1) variables at `x`.
///
/// Uses the alternating sum `(1/n!) * sum_k (-1)^k C(n,k) (x-k)^n` over
/// `k = 0..=floor(x)`, clamped to `[0, 1]`.
pub fn irwin_hall_cdf(x: f64, n: usize) -> Result<f64, AnalyticsError> {
    if n == 0 || n > MAX_IRWIN_HALL_ORDER {
        return Err(AnalyticsError::IrwinHallOrder(n));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= n as f64 {
        return Ok(1.0);
    }
    let mut sum = 0.0;
    let mut binom = 1.0; // C(n, k), updated incrementally
    let mut sign = 1.0;
    for k in 0..=(x.floor() as usize) {
        sum += sign * binom * (x - k as f64).powi(n as i32);
        binom *= (n - k) as f64 / (k + 1) as f64;
        sign = -sign;
    }
    let mut factorial = 1.0;
    for i in 2..=n {
        factorial *= i as f64;
    }
    Ok((sum / factorial).clamp(0.0, 1.0))
}

/// CDF of the total traffic of `n` users at `a` bits.
///
/// Each user draws uniform on `[0, 2 * rate]`, so the sum follows an
/// Irwin-Hall distribution of order `n` evaluated at `a / (2 * rate)`.
/// `n = 0` is the empty sum, which is 0 with certainty.
pub fn traffic_sum_cdf(a: f64, n: usize, rate: f64) -> Result<f64, AnalyticsError> {
    let rate_positive = rate > 0.0;
    if !rate_positive {
        return Err(AnalyticsError::NonPositiveRate(rate));
    }
    if n == 0 {
        return Ok(if a >= 0.0 { 1.0 } else { 0.0 });
    }
    irwin_hall_cdf(a / (2.0 * rate), n)
}

/// Expected number of sub-band RBs carried by the digital chain when
/// `n_sharing` users are pre-assigned to the sub-band.
///
/// With `F` the CDF of the users' aggregate traffic, this evaluates
/// `sum_{h=1}^{alpha-1} h (F(h C_D) - F((h-1) C_D)) + alpha (1 - F((alpha-1) C_D))`.
pub fn expected_digital_rbs(
    n_sharing: usize,
    config: &SystemConfig,
) -> Result<f64, AnalyticsError> {
    if n_sharing == 0 || config.traffic_rate == 0.0 {
        return Ok(0.0);
    }
    let a = alpha(config);
    let cd = config.se_digital;
    let f = |bits: f64| traffic_sum_cdf(bits, n_sharing, config.traffic_rate);
    let mut expectation = 0.0;
    let mut prev = f(0.0)?;
    for h in 1..a {
        let next = f(h as f64 * cd)?;
        expectation += h as f64 * (next - prev);
        prev = next;
    }
    expectation += a as f64 * (1.0 - f((a as f64 - 1.0) * cd)?);
    Ok(expectation)
}

/// Closed-form estimate of the aggregate throughput for `num_users` users,
/// in bits per slot.
///
/// Every sub-band contributes its expected digital-RB count at `C_D` and the
/// remainder at `C_A`; the total is capped by the mean offered load
/// `num_users * Lambda`.
pub fn throughput_estimate(config: &SystemConfig, num_users: usize) -> Result<f64, AnalyticsError> {
    let n = config.num_antennas;
    let mut sharers = vec![0usize; n + 1];
    for u in 1..=num_users {
        sharers[canonical_sharer(u, n)] += 1;
    }
    let a = alpha(config) as f64;
    let mut total = 0.0;
    let mut cache: Vec<(usize, f64)> = Vec::new();
    for &count in &sharers[1..] {
        let expected = match cache.iter().find(|(c, _)| *c == count) {
            Some(&(_, e)) => e,
            None => {
                let e = expected_digital_rbs(count, config)?;
                cache.push((count, e));
                e
            }
        };
        total += expected * config.se_digital + (a - expected) * config.se_analog;
    }
    let offered = num_users as f64 * config.traffic_rate;
    Ok(offered.min(total))
}

/// Fraction of the bandwidth covered by at least one digital sub-band.
pub fn zeta_d(num_users: usize, num_antennas: usize) -> f64 {
    debug_assert!(num_antennas >= 1);
    (num_users as f64 / num_antennas as f64).min(1.0)
}

/// User count below which hybrid mode beats heterogeneous mode:
/// `N (C_H - C_A) / (C_D - C_A)`.
pub fn hybrid_crossover(config: &SystemConfig) -> Result<f64, AnalyticsError> {
    let gap = config.se_digital - config.se_analog;
    if gap <= 0.0 {
        return Err(AnalyticsError::NoSeGap);
    }
    Ok(config.num_antennas as f64 * (config.se_hybrid - config.se_analog) / gap)
}

/// Maximum achievable average spectral efficiency for `num_users` users.
///
/// Piecewise in the user count: `C_H` below the crossover, the coverage-scaled
/// digital SE between crossover and `N`, and `C_D` beyond. At the boundaries
/// the adjacent branches coincide and the larger one is returned.
pub fn max_se(num_users: f64, config: &SystemConfig) -> Result<f64, AnalyticsError> {
    let crossover = hybrid_crossover(config)?;
    let n = config.num_antennas as f64;
    if num_users >= n {
        return Ok(config.se_digital);
    }
    let scaled = config.se_analog + num_users / n * (config.se_digital - config.se_analog);
    Ok(if num_users < crossover {
        config.se_hybrid
    } else if num_users > crossover {
        scaled
    } else {
        config.se_hybrid.max(scaled)
    })
}

/// `R * max_se`, in bits per slot.
pub fn max_rate(num_users: f64, config: &SystemConfig) -> Result<f64, AnalyticsError> {
    Ok(config.num_rbs as f64 * max_se(num_users, config)?)
}

/// Receiver front-end whose sample efficiency is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridArchitecture {
    /// Both chains digitize the full band.
    ClassicalHybrid,
    /// One full-band analog chain plus a digital chain confined to a sub-band.
    Proposed,
}

/// A scheduled resource grid used for the ADC sample-efficiency metric.
#[derive(Debug, Clone)]
pub struct EfficiencyGrid {
    /// `owners[slot][rb]` is the id of the user the RB was allocated to,
    /// 0 when unallocated.
    pub owners: Vec<Vec<u32>>,
    /// The user whose receiver is evaluated.
    pub target_user: u32,
    /// RB indices of the target user's digital sub-band (empty when none).
    pub subband: Vec<usize>,
    pub architecture: GridArchitecture,
}

/// Percentage of digitized RB-slots that carry the target user's own data.
///
/// Classical receivers digitize the whole grid, so the efficiency is the
/// share of owned RB-slots. For the proposed receiver the analog chain's
/// waste over the full grid and the digital chain's waste over its sub-band
/// are averaged and subtracted from 100.
pub fn sample_efficiency(grid: &EfficiencyGrid) -> Result<f64, AnalyticsError> {
    if grid.owners.is_empty() || grid.owners[0].is_empty() {
        return Err(AnalyticsError::EmptyGrid);
    }
    let num_rbs = grid.owners[0].len();
    if grid.owners.iter().any(|row| row.len() != num_rbs) {
        return Err(AnalyticsError::RaggedGrid);
    }
    if let Some(&index) = grid.subband.iter().find(|&&rb| rb >= num_rbs) {
        return Err(AnalyticsError::SubbandOutOfRange { index, num_rbs });
    }

    let num_slots = grid.owners.len();
    let total = (num_slots * num_rbs) as f64;
    let own_total = grid
        .owners
        .iter()
        .flatten()
        .filter(|&&owner| owner == grid.target_user)
        .count() as f64;

    match grid.architecture {
        GridArchitecture::ClassicalHybrid => Ok(100.0 * own_total / total),
        GridArchitecture::Proposed => {
            if grid.subband.is_empty() {
                return Err(AnalyticsError::EmptySubband);
            }
            let own_in_subband = grid
                .owners
                .iter()
                .flat_map(|row| grid.subband.iter().map(move |&rb| row[rb]))
                .filter(|&owner| owner == grid.target_user)
                .count() as f64;
            let subband_total = (grid.subband.len() * num_slots) as f64;
            let waste_analog = 100.0 * (1.0 - own_total / total);
            let waste_digital = 100.0 * (1.0 - own_in_subband / subband_total);
            Ok(100.0 - (waste_analog + waste_digital) / 2.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Mode;
    use crate::traffic::{draw_arrival, RngStream, TrafficModel};
    use proptest::prelude::*;

    fn reference_config(rate: f64) -> SystemConfig {
        SystemConfig {
            traffic_rate: rate,
            mode: Mode::Heterogeneous,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn irwin_hall_known_points() {
        assert!((irwin_hall_cdf(0.5, 1).unwrap() - 0.5).abs() < 1e-12);
        assert!((irwin_hall_cdf(1.0, 2).unwrap() - 0.5).abs() < 1e-12);
        // x^2 / 2 below the first knot.
        assert!((irwin_hall_cdf(0.76, 2).unwrap() - 0.2888).abs() < 1e-12);
        assert_eq!(irwin_hall_cdf(-1.0, 3).unwrap(), 0.0);
        assert_eq!(irwin_hall_cdf(3.5, 3).unwrap(), 1.0);
    }

    #[test]
    fn irwin_hall_rejects_bad_order() {
        assert!(irwin_hall_cdf(0.5, 0).is_err());
        assert!(irwin_hall_cdf(0.5, 31).is_err());
        assert!(irwin_hall_cdf(0.5, 30).is_ok());
    }

    #[test]
    fn irwin_hall_matches_monte_carlo() {
        let mut rng = RngStream::new(11, 0);
        let samples = 1_000_000usize;
        for n in 1..=4usize {
            for frac in [0.25, 0.5, 0.75] {
                let x = frac * n as f64;
                let mut hits = 0usize;
                let mut rng_n = RngStream::new(11, n as u64);
                for _ in 0..samples {
                    let sum: f64 = (0..n).map(|_| rng_n.next_unit()).sum();
                    if sum <= x {
                        hits += 1;
                    }
                }
                let estimate = hits as f64 / samples as f64;
                let cdf = irwin_hall_cdf(x, n).unwrap();
                let sigma = (cdf * (1.0 - cdf) / samples as f64).sqrt();
                assert!(
                    (cdf - estimate).abs() <= 3.0 * sigma,
                    "n={n} x={x}: cdf {cdf} vs mc {estimate}"
                );
            }
        }
        let _ = rng.next_unit();
    }

    #[test]
    fn traffic_sum_cdf_examples() {
        assert!((traffic_sum_cdf(500.0, 1, 500.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((traffic_sum_cdf(76.0, 2, 50.0).unwrap() - 0.2888).abs() < 1e-12);
        assert_eq!(traffic_sum_cdf(2000.0, 2, 500.0).unwrap(), 1.0);
        assert_eq!(traffic_sum_cdf(5.0, 0, 500.0).unwrap(), 1.0);
        assert_eq!(traffic_sum_cdf(-5.0, 0, 500.0).unwrap(), 0.0);
        assert!(traffic_sum_cdf(5.0, 1, 0.0).is_err());
    }

    #[test]
    fn expected_digital_rbs_known_values() {
        let c500 = reference_config(500.0);
        assert!((expected_digital_rbs(1, &c500).unwrap() - 19.24).abs() < 1e-9);
        let c50 = reference_config(50.0);
        assert!((expected_digital_rbs(2, &c50).unwrap() - 18.024).abs() < 1e-9);
        assert_eq!(expected_digital_rbs(0, &c500).unwrap(), 0.0);
    }

    #[test]
    fn expected_digital_rbs_matches_brute_force() {
        // Small sub-band so the whole range of X is exercised.
        let config = SystemConfig {
            num_rbs: 24,
            num_antennas: 4,
            ..reference_config(0.0)
        };
        let a = alpha(&config); // 6
        for (n_sharing, rate) in [(1usize, 5.0), (1, 20.0), (2, 12.0), (2, 40.0)] {
            let cfg = SystemConfig {
                traffic_rate: rate,
                ..config.clone()
            };
            let model = TrafficModel::uniform(rate);
            let mut rng = RngStream::new(5, n_sharing as u64);
            let samples = 1_000_000usize;
            let mut sum = 0.0;
            for _ in 0..samples {
                let v: f64 = (0..n_sharing).map(|_| draw_arrival(&model, &mut rng)).sum();
                sum += (v / cfg.se_digital).ceil().min(a as f64);
            }
            let mc = sum / samples as f64;
            let analytic = expected_digital_rbs(n_sharing, &cfg).unwrap();
            assert!(
                (analytic - mc).abs() / mc < 0.005,
                "n={n_sharing} rate={rate}: analytic {analytic} vs mc {mc}"
            );
        }
    }

    #[test]
    fn throughput_estimate_reference_points() {
        let c500 = reference_config(500.0);
        assert!((throughput_estimate(&c500, 2).unwrap() - 755.44).abs() < 1e-9);
        assert!((throughput_estimate(&c500, 32).unwrap() - 2487.04).abs() < 1e-9);
        let c100 = reference_config(100.0);
        assert!((throughput_estimate(&c100, 13).unwrap() - 1271.8).abs() < 1e-9);
        assert!((throughput_estimate(&c100, 32).unwrap() - 2195.2).abs() < 1e-9);
        let c50 = reference_config(50.0);
        assert!((throughput_estimate(&c50, 39).unwrap() - 1948.504).abs() < 1e-9);
        // Offered-load-limited region.
        assert!((throughput_estimate(&c500, 1).unwrap() - 500.0).abs() < 1e-9);
        assert!((throughput_estimate(&c50, 20).unwrap() - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn zeta_d_examples() {
        assert_eq!(zeta_d(16, 32), 0.5);
        assert_eq!(zeta_d(64, 32), 1.0);
        assert_eq!(zeta_d(0, 32), 0.0);
    }

    #[test]
    fn crossover_examples() {
        let cfg = reference_config(500.0);
        assert!((hybrid_crossover(&cfg).unwrap() - 16.0 / 3.0).abs() < 1e-12);
        let flat = SystemConfig {
            se_hybrid: 1.0,
            ..cfg.clone()
        };
        assert_eq!(hybrid_crossover(&flat).unwrap(), 0.0);
        let all_digital = SystemConfig {
            se_hybrid: 4.0,
            ..cfg.clone()
        };
        assert_eq!(hybrid_crossover(&all_digital).unwrap(), 32.0);
        let degenerate = SystemConfig {
            se_analog: 2.0,
            se_hybrid: 2.0,
            se_digital: 2.0,
            ..cfg
        };
        assert!(hybrid_crossover(&degenerate).is_err());
    }

    #[test]
    fn max_rate_examples() {
        let cfg = reference_config(500.0);
        assert!((max_rate(3.0, &cfg).unwrap() - 960.0).abs() < 1e-9);
        assert!((max_rate(32.0, &cfg).unwrap() - 2560.0).abs() < 1e-9);
        assert!((max_se(16.0, &cfg).unwrap() - 2.5).abs() < 1e-12);
        assert!((max_rate(16.0, &cfg).unwrap() - 1600.0).abs() < 1e-9);
        let crossover = hybrid_crossover(&cfg).unwrap();
        assert!((max_rate(crossover, &cfg).unwrap() - 960.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn irwin_hall_is_nondecreasing(n in 1usize..=8, steps in 2usize..50) {
            let mut prev = 0.0;
            for i in 0..=steps {
                let x = n as f64 * i as f64 / steps as f64;
                let value = irwin_hall_cdf(x, n).unwrap();
                prop_assert!(value >= prev - 1e-12);
                prop_assert!((0.0..=1.0).contains(&value));
                prev = value;
            }
            prop_assert!((irwin_hall_cdf(n as f64, n).unwrap() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn expected_digital_rbs_monotone(rate_a in 1.0f64..200.0, bump in 0.0f64..200.0,
                                         n in 1usize..4) {
            let config = reference_config(rate_a);
            let bumped = reference_config(rate_a + bump);
            let a = alpha(&config) as f64;
            let low = expected_digital_rbs(n, &config).unwrap();
            let high = expected_digital_rbs(n, &bumped).unwrap();
            let more_sharing = expected_digital_rbs(n + 1, &config).unwrap();
            prop_assert!((0.0..=a).contains(&low));
            prop_assert!(high >= low - 1e-12);
            prop_assert!(more_sharing >= low - 1e-12);
        }

        #[test]
        fn estimate_below_both_caps(users in 1usize..120, rate in 0.0f64..900.0) {
            let config = reference_config(rate);
            let estimate = throughput_estimate(&config, users).unwrap();
            let offered = users as f64 * rate;
            let ceiling = config.num_rbs as f64 * config.se_digital;
            prop_assert!(estimate <= offered.min(ceiling) + 1e-9);
            prop_assert!(estimate >= 0.0);
        }

        #[test]
        fn bound_monotone_and_capped(users in 0u32..200) {
            let config = reference_config(500.0);
            let ceiling = config.num_rbs as f64 * config.se_digital;
            let here = max_rate(users as f64, &config).unwrap();
            let next = max_rate(users as f64 + 1.0, &config).unwrap();
            prop_assert!(next >= here - 1e-9);
            prop_assert!(here <= ceiling + 1e-9);
            if (users as f64) < hybrid_crossover(&config).unwrap() {
                prop_assert!((here - 960.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn full_ownership_is_fully_efficient() {
        let grid = EfficiencyGrid {
            owners: vec![vec![7; 10]; 15],
            target_user: 7,
            subband: vec![],
            architecture: GridArchitecture::ClassicalHybrid,
        };
        assert_eq!(sample_efficiency(&grid).unwrap(), 100.0);
    }

    #[test]
    fn proposed_requires_subband() {
        let grid = EfficiencyGrid {
            owners: vec![vec![1; 10]; 15],
            target_user: 1,
            subband: vec![],
            architecture: GridArchitecture::Proposed,
        };
        assert_eq!(sample_efficiency(&grid), Err(AnalyticsError::EmptySubband));
    }

    #[test]
    fn grid_validation() {
        let ragged = EfficiencyGrid {
            owners: vec![vec![1; 10], vec![1; 9]],
            target_user: 1,
            subband: vec![],
            architecture: GridArchitecture::ClassicalHybrid,
        };
        assert_eq!(sample_efficiency(&ragged), Err(AnalyticsError::RaggedGrid));
        let out_of_range = EfficiencyGrid {
            owners: vec![vec![1; 10]; 2],
            target_user: 1,
            subband: vec![10],
            architecture: GridArchitecture::Proposed,
        };
        assert!(matches!(
            sample_efficiency(&out_of_range),
            Err(AnalyticsError::SubbandOutOfRange { .. })
        ));
    }
}
