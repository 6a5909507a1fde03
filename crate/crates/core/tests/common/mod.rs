//! Shared generators and a from-scratch reference model for the
//! integration tests.

#![allow(dead_code)]

pub mod oracle;

use occpx::appraisal::{DesirabilityEntry, DesirabilityMode, Thresholds};
use occpx::characterization::{Effect, GoalSpec, LikelihoodRule, TerminalStatus};
use occpx::emotion::{AxiomSet, EmotionType, Goal, GoalId, Tick};
use occpx::{Config, Event};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const KINDS: [&str; 4] = ["a", "b", "c", "d"];
pub const ENTITIES: [&str; 2] = ["e1", "e2"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_or_edge(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..6) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen_range(0.0..=1.0),
    }
}

pub struct ConfigOptions {
    pub random_axioms: bool,
    pub random_thresholds: bool,
}

impl Default for ConfigOptions {
    fn default() -> Self {
        ConfigOptions {
            random_axioms: true,
            random_thresholds: true,
        }
    }
}

pub fn random_config(rng: &mut impl Rng, opts: &ConfigOptions) -> Config {
    let mut c = Config::default();
    let n_goals = rng.gen_range(1..=3);
    let ids: Vec<GoalId> = (0..n_goals).map(|i| GoalId::new(format!("g{i}"))).collect();
    for id in &ids {
        c.goals.push(GoalSpec {
            goal: Goal {
                id: id.clone(),
                significance: if rng.gen_bool(0.3) {
                    1.0
                } else {
                    rng.gen_range(0.05..=1.0)
                },
            },
            initial_likelihood: unit_or_edge(rng),
        });
    }
    for _ in 0..rng.gen_range(0..=6) {
        let effects = (0..rng.gen_range(1..=3))
            .map(|_| {
                let goal = ids.choose(rng).unwrap().clone();
                match rng.gen_range(0..10) {
                    0..=2 => Effect::SetLikelihood {
                        goal,
                        value: unit_or_edge(rng),
                    },
                    3..=8 => {
                        let delta =
                            rng.gen_range(0.05..0.4) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        Effect::AddLikelihood {
                            goal,
                            delta: if rng.gen_bool(0.3) {
                                delta / 10.0
                            } else {
                                delta
                            },
                            per: rng.gen_bool(0.3).then(|| "amount".to_string()),
                            floor: if rng.gen_bool(0.5) {
                                0.0
                            } else {
                                rng.gen_range(0.0..0.2)
                            },
                            ceiling: if rng.gen_bool(0.5) {
                                1.0
                            } else {
                                rng.gen_range(0.8..=1.0)
                            },
                        }
                    }
                    _ => Effect::SetStatus {
                        goal,
                        status: if rng.gen_bool(0.5) {
                            TerminalStatus::Achieved
                        } else {
                            TerminalStatus::Failed
                        },
                    },
                }
            })
            .collect();
        c.rules.push(LikelihoodRule {
            event: KINDS.choose(rng).unwrap().to_string(),
            entity: rng
                .gen_bool(0.2)
                .then(|| ENTITIES.choose(rng).unwrap().to_string()),
            effects,
        });
    }
    c.appraisal.des.mode = if rng.gen_bool(0.8) {
        DesirabilityMode::Table
    } else {
        DesirabilityMode::DeltaScaled
    };
    for kind in KINDS {
        for id in &ids {
            if rng.gen_bool(0.6) {
                c.appraisal.des.entries.push(DesirabilityEntry {
                    event: kind.to_string(),
                    entity: rng
                        .gen_bool(0.15)
                        .then(|| ENTITIES.choose(rng).unwrap().to_string()),
                    goal: id.clone(),
                    value: rng.gen_range(-1.0..=1.0),
                });
            }
        }
    }
    if opts.random_thresholds {
        let mut t = Thresholds::default();
        for e in EmotionType::ALL {
            if rng.gen_bool(0.5) {
                t.set(e, rng.gen_range(0.0..0.5));
            }
        }
        c.thresholds = t;
    }
    for e in EmotionType::ALL {
        c.decay.set_rate(e, rng.gen_range(0.001..0.2));
    }
    c.decay.constant = if rng.gen_bool(0.5) {
        -1.0
    } else {
        rng.gen_range(-1.0..-0.1)
    };
    c.decay.cull_epsilon = rng.gen_range(0.001..0.05);
    if opts.random_axioms {
        let mut axioms = if rng.gen_bool(0.7) {
            AxiomSet::default()
        } else {
            AxiomSet::empty()
        };
        for _ in 0..rng.gen_range(0..=3) {
            let a = *EmotionType::ALL.choose(rng).unwrap();
            let b = *EmotionType::ALL.choose(rng).unwrap();
            if a != b {
                axioms.add(a, b).unwrap();
            }
        }
        c.axioms = axioms;
    }
    c.history_window = rng.gen_range(1..=50);
    c
}

/// Events with non-decreasing times; ticks advance the clock by one.
pub fn random_events(rng: &mut impl Rng, max_len: usize) -> Vec<Event> {
    let len = rng.gen_range(0..=max_len);
    let mut clock: Tick = 0;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        if rng.gen_bool(0.4) {
            clock += 1;
            out.push(Event::tick(clock));
        } else {
            let mut e = Event::new(*KINDS.choose(rng).unwrap(), clock);
            if rng.gen_bool(0.5) {
                e = e.with("entity", ENTITIES.choose(rng).unwrap());
            }
            if rng.gen_bool(0.5) {
                e = e.with("amount", rng.gen_range(1..=20));
            }
            out.push(e);
        }
    }
    out
}
