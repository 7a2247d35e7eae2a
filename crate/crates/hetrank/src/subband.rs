//! Sub-band arithmetic: which resource blocks each user digitizes.
//!
//! User `u` owns the `alpha = floor(R / N)` blocks starting at `u * alpha`,
//! taken modulo `R`. Users beyond `N` reuse the sub-band of their canonical
//! sharer in `1..=N`, so distinct sub-bands are either disjoint or identical.
//! RB indices are 0-based; user ids start at 1.

use crate::config::{Mode, SystemConfig};

/// Number of resource blocks in one digital sub-band: `floor(R / N)`.
pub fn alpha(config: &SystemConfig) -> usize {
    config.num_rbs / config.num_antennas
}

/// Maps any user id onto the sub-band owner in `1..=N` it shares with.
///
/// Uses `((u - 1) mod N) + 1` so that ids stay in `1..=N`; in particular
/// multiples of `N` map onto user `N` rather than onto 0.
pub fn canonical_sharer(user: usize, num_antennas: usize) -> usize {
    debug_assert!(user >= 1);
    (user - 1) % num_antennas + 1
}

/// The ordered RB indices of user `user`'s digital sub-band.
pub fn subband(user: usize, config: &SystemConfig) -> Vec<usize> {
    let a = alpha(config);
    let start = subband_start(user, config);
    (0..a).map(|i| (start + i) % config.num_rbs).collect()
}

/// First RB index of the user's sub-band.
fn subband_start(user: usize, config: &SystemConfig) -> usize {
    let sharer = canonical_sharer(user, config.num_antennas);
    (sharer * alpha(config)) % config.num_rbs
}

/// Whether RB `rb` lies in user `user`'s digital sub-band.
pub fn in_subband(rb: usize, user: usize, config: &SystemConfig) -> bool {
    let a = alpha(config);
    let start = subband_start(user, config);
    // Distance from the sub-band start, walking forward mod R.
    let offset = (rb + config.num_rbs - start) % config.num_rbs;
    offset < a
}

/// The users among `1..=num_users` that digitize RB `rb`.
pub fn users_on_rb(rb: usize, num_users: usize, config: &SystemConfig) -> Vec<usize> {
    debug_assert!(rb < config.num_rbs);
    (1..=num_users)
        .filter(|&u| in_subband(rb, u, config))
        .collect()
}

/// Bits RB `rb` carries when assigned to `user`.
///
/// Hybrid mode always yields `C_H`; heterogeneous mode yields `C_D` inside
/// the user's sub-band and `C_A` elsewhere.
pub fn rb_rate(rb: usize, user: usize, config: &SystemConfig) -> f64 {
    match config.mode {
        Mode::Hybrid => config.se_hybrid,
        Mode::Heterogeneous => {
            if in_subband(rb, user, config) {
                config.se_digital
            } else {
                config.se_analog
            }
        }
    }
}
