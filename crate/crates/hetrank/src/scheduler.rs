//! Slot-by-slot proportional-fairness resource allocation and metric
//! collection.
//!
//! Arrivals land between slots (clipped to the buffer, the excess is counted
//! as dropped). Within a slot the RBs are visited in ascending index order
//! and each one goes to the non-empty-queue user with the highest PF weight
//! `C_r / C_u`; ties are broken uniformly at random from a dedicated stream.
//! The winner is served `min(queue, C_r)` bits. EWMA rate estimates update
//! once per slot.

use crate::config::{ConfigError, Mode, SystemConfig};
use crate::subband::{self, in_subband};
use crate::traffic::{draw_arrival, RngStream, TrafficModel};

/// Lower bound on the EWMA rate so PF weights stay finite.
pub const EWMA_FLOOR: f64 = 1e-6;

/// Stream id of the tie-break stream; user traffic streams use the user id.
const TIE_BREAK_STREAM: u64 = 0;

/// Per-user scheduler state.
#[derive(Debug, Clone, PartialEq)]
pub struct UserState {
    /// User id, starting at 1.
    pub id: usize,
    /// Buffered bits, within `[0, buffer_capacity]`.
    pub queue: f64,
    /// EWMA of the served rate, C_u (always positive).
    pub ewma_rate: f64,
    /// RB indices of the digital sub-band; empty in hybrid mode.
    pub subband: Vec<usize>,
}

/// Which chain carried an assigned RB.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Analog,
    Digital,
    HybridChain,
}

/// Why the RB ended up on that chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationReason {
    /// Served at the full single-chain rate (digital in heterogeneous mode,
    /// the shared rate in hybrid mode).
    DigitalPreferred,
    /// Analog because every sub-band owner of the RB had an empty queue.
    AnalogNoDigitalData,
    /// Analog although an owner had data: the analog user's PF weight won.
    AnalogPfWeight,
}

/// One assigned resource block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbAssignment {
    pub user: usize,
    pub chain: ChainKind,
    pub served: f64,
    pub reason: AllocationReason,
}

/// Outcome of one slot; `rbs[r]` is `None` when RB `r` stayed unused.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotAllocation {
    pub rbs: Vec<Option<RbAssignment>>,
}

impl SlotAllocation {
    pub fn served_total(&self) -> f64 {
        self.rbs.iter().flatten().map(|a| a.served).sum()
    }

    /// Bits served per user id (index 0 holds user 1).
    pub fn served_per_user(&self, num_users: usize) -> Vec<f64> {
        let mut served = vec![0.0; num_users];
        for assignment in self.rbs.iter().flatten() {
            served[assignment.user - 1] += assignment.served;
        }
        served
    }

    pub fn unused_count(&self) -> usize {
        self.rbs.iter().filter(|rb| rb.is_none()).count()
    }
}

/// Whole-run bit accounting.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BitLedger {
    pub arrived: f64,
    pub dropped: f64,
    pub served: f64,
}

/// Aggregate metrics over the measured (post-warmup) slots.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    /// Mean bits served per slot, summed over users.
    pub aggregate_rate: f64,
    /// Mean bits served per slot for each user.
    pub per_user_rate: Vec<f64>,
    /// Fraction of all RBs carried on the analog chain (heterogeneous mode).
    pub analog_rb_fraction: f64,
    /// Fraction of the analog-chain RBs whose sub-band owners were all empty
    /// at decision time; 1.0 when no analog RB was allocated.
    pub analog_due_to_no_data_fraction: f64,
    /// Fraction of RBs left unused.
    pub unused_rb_fraction: f64,
}

/// Full state of one simulation run.
#[derive(Debug, Clone)]
pub struct SimulationState {
    config: SystemConfig,
    users: Vec<UserState>,
    slot: usize,
    tie_rng: RngStream,
    traffic_rngs: Vec<RngStream>,
    traffic_model: TrafficModel,
    /// For each RB, the user indices (0-based) whose sub-band contains it.
    owners_by_rb: Vec<Vec<usize>>,
    ledger: BitLedger,
    measured_slots: usize,
    served_sum: f64,
    per_user_served_sum: Vec<f64>,
    analog_rbs: u64,
    analog_no_data_rbs: u64,
    unused_rbs: u64,
}

impl SimulationState {
    pub fn new(config: SystemConfig, num_users: usize) -> Result<Self, ConfigError> {
        config.validate()?;
        if num_users == 0 {
            return Err(ConfigError::NoUsers);
        }
        let users: Vec<UserState> = (1..=num_users)
            .map(|id| UserState {
                id,
                queue: 0.0,
                ewma_rate: config.se_analog.max(EWMA_FLOOR),
                subband: match config.mode {
                    Mode::Heterogeneous => subband::subband(id, &config),
                    Mode::Hybrid => Vec::new(),
                },
            })
            .collect();
        let mut owners_by_rb = vec![Vec::new(); config.num_rbs];
        if config.mode == Mode::Heterogeneous {
            for (index, user) in users.iter().enumerate() {
                for &rb in &user.subband {
                    owners_by_rb[rb].push(index);
                }
            }
        }
        Ok(SimulationState {
            tie_rng: RngStream::new(config.seed, TIE_BREAK_STREAM),
            traffic_rngs: (1..=num_users)
                .map(|id| RngStream::new(config.seed, id as u64))
                .collect(),
            traffic_model: TrafficModel::uniform(config.traffic_rate),
            owners_by_rb,
            per_user_served_sum: vec![0.0; num_users],
            config,
            users,
            slot: 0,
            ledger: BitLedger::default(),
            measured_slots: 0,
            served_sum: 0.0,
            analog_rbs: 0,
            analog_no_data_rbs: 0,
            unused_rbs: 0,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn users(&self) -> &[UserState] {
        &self.users
    }

    /// Mutable user access for scripted scenarios and tests.
    pub fn users_mut(&mut self) -> &mut [UserState] {
        &mut self.users
    }

    pub fn ledger(&self) -> BitLedger {
        self.ledger
    }

    /// Bits still queued across all users.
    pub fn backlog(&self) -> f64 {
        self.users.iter().map(|u| u.queue).sum()
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    /// Draws arrivals, allocates one slot, updates the EWMA estimates and
    /// the post-warmup metric accumulators.
    pub fn step(&mut self) -> SlotAllocation {
        let arrivals: Vec<f64> = {
            let model = self.traffic_model;
            self.traffic_rngs
                .iter_mut()
                .map(|rng| draw_arrival(&model, rng))
                .collect()
        };
        let allocation = run_slot(self, &arrivals);
        let served = allocation.served_per_user(self.users.len());
        update_ewma(self, &served);
        if self.slot >= self.config.warmup_slots {
            self.measured_slots += 1;
            for (sum, value) in self.per_user_served_sum.iter_mut().zip(&served) {
                *sum += value;
            }
            for rb in &allocation.rbs {
                match rb {
                    None => self.unused_rbs += 1,
                    Some(a) => {
                        self.served_sum += a.served;
                        if a.chain == ChainKind::Analog {
                            self.analog_rbs += 1;
                            if a.reason == AllocationReason::AnalogNoDigitalData {
                                self.analog_no_data_rbs += 1;
                            }
                        }
                    }
                }
            }
        }
        self.slot += 1;
        allocation
    }

    /// Metrics over the measured slots so far; zeros before the first one.
    pub fn metrics(&self) -> RunMetrics {
        if self.measured_slots == 0 {
            return RunMetrics {
                aggregate_rate: 0.0,
                per_user_rate: vec![0.0; self.users.len()],
                analog_rb_fraction: 0.0,
                analog_due_to_no_data_fraction: 1.0,
                unused_rb_fraction: 0.0,
            };
        }
        let slots = self.measured_slots as f64;
        let total_rbs = slots * self.config.num_rbs as f64;
        RunMetrics {
            aggregate_rate: self.served_sum / slots,
            per_user_rate: self
                .per_user_served_sum
                .iter()
                .map(|sum| sum / slots)
                .collect(),
            analog_rb_fraction: self.analog_rbs as f64 / total_rbs,
            analog_due_to_no_data_fraction: if self.analog_rbs > 0 {
                self.analog_no_data_rbs as f64 / self.analog_rbs as f64
            } else {
                1.0
            },
            unused_rb_fraction: self.unused_rbs as f64 / total_rbs,
        }
    }
}

/// PF weight of `user` on RB `rb`: the RB rate divided by the EWMA rate.
///
/// Panics if the EWMA invariant (C_u > 0) is violated.
pub fn pf_weight(rb: usize, user: &UserState, config: &SystemConfig) -> f64 {
    assert!(
        user.ewma_rate > 0.0,
        "EWMA rate of user {} is not positive",
        user.id
    );
    subband::rb_rate(rb, user.id, config) / user.ewma_rate
}

/// Adds the arrivals to the queues (clipping at the buffer) and allocates
/// every RB of one slot. EWMA estimates are not touched.
pub fn run_slot(state: &mut SimulationState, arrivals: &[f64]) -> SlotAllocation {
    assert_eq!(arrivals.len(), state.users.len());
    for (user, &arrival) in state.users.iter_mut().zip(arrivals) {
        state.ledger.arrived += arrival;
        let space = (state.config.buffer_capacity - user.queue).max(0.0);
        let accepted = arrival.min(space);
        user.queue += accepted;
        state.ledger.dropped += arrival - accepted;
    }

    let num_rbs = state.config.num_rbs;
    let mut rbs = Vec::with_capacity(num_rbs);
    let mut ties: Vec<usize> = Vec::new();
    for rb in 0..num_rbs {
        let mut best = f64::NEG_INFINITY;
        ties.clear();
        for (index, user) in state.users.iter().enumerate() {
            if user.queue <= 0.0 {
                continue;
            }
            let weight = pf_weight(rb, user, &state.config);
            if weight > best {
                best = weight;
                ties.clear();
                ties.push(index);
            } else if weight == best {
                ties.push(index);
            }
        }
        if ties.is_empty() {
            // Work conservation: only an all-empty system leaves an RB idle.
            rbs.push(None);
            continue;
        }
        let winner = if ties.len() == 1 {
            ties[0]
        } else {
            ties[state.tie_rng.pick(ties.len())]
        };
        let winner_id = state.users[winner].id;
        let chain = match state.config.mode {
            Mode::Hybrid => ChainKind::HybridChain,
            Mode::Heterogeneous => {
                if in_subband(rb, winner_id, &state.config) {
                    ChainKind::Digital
                } else {
                    ChainKind::Analog
                }
            }
        };
        let reason = match chain {
            ChainKind::Digital | ChainKind::HybridChain => AllocationReason::DigitalPreferred,
            ChainKind::Analog => {
                let owners = &state.owners_by_rb[rb];
                if owners.iter().all(|&j| state.users[j].queue <= 0.0) {
                    AllocationReason::AnalogNoDigitalData
                } else {
                    AllocationReason::AnalogPfWeight
                }
            }
        };
        debug_assert!(
            chain != ChainKind::Digital || in_subband(rb, winner_id, &state.config),
            "digital assignment outside the user's sub-band"
        );
        let rate = subband::rb_rate(rb, winner_id, &state.config);
        let user = &mut state.users[winner];
        let served = rate.min(user.queue);
        user.queue -= served;
        state.ledger.served += served;
        rbs.push(Some(RbAssignment {
            user: winner_id,
            chain,
            served,
            reason,
        }));
    }
    SlotAllocation { rbs }
}

/// Per-slot EWMA update: `C_u <- gamma C_u + (1 - gamma) served`, floored.
pub fn update_ewma(state: &mut SimulationState, served: &[f64]) {
    assert_eq!(served.len(), state.users.len());
    let gamma = state.config.ewma_gamma;
    for (user, &bits) in state.users.iter_mut().zip(served) {
        user.ewma_rate = (gamma * user.ewma_rate + (1.0 - gamma) * bits).max(EWMA_FLOOR);
    }
}

/// Runs a full simulation and returns its metrics.
///
/// Deterministic in `(config.seed, num_users)`.
pub fn run_simulation(config: &SystemConfig, num_users: usize) -> Result<RunMetrics, ConfigError> {
    let mut state = SimulationState::new(config.clone(), num_users)?;
    for _ in 0..config.num_slots {
        state.step();
    }
    Ok(state.metrics())
}
