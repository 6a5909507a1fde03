//! The transition function: one event in, one successor state out.
//!
//! A non-tick event updates beliefs, triggers new emotions against the
//! updated beliefs, merges them with the decayed active set and finally drops
//! likelihood facts of goals that reached a terminal status. A tick advances
//! the clock by one and only decays.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::appraisal::{new_emotions, NewEmotion};
use crate::characterization::{CharacterizationConfig, ConfigError, Effect, LikelihoodRule};
use crate::emotion::{
    initial_state, AgentState, AxiomSet, BeliefState, EmotionInstance, EmotionState, EmotionType,
    GoalId, Tick,
};
use crate::scalar::Scalar;

pub const TICK: &str = "tick";

/// Something the agent perceived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub kind: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub payload: BTreeMap<String, String>,
    pub time: Tick,
}

impl Event {
    pub fn new(kind: impl Into<String>, time: Tick) -> Self {
        Event {
            kind: kind.into(),
            payload: BTreeMap::new(),
            time,
        }
    }

    pub fn tick(time: Tick) -> Self {
        Event::new(TICK, time)
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.payload.insert(key.into(), value.to_string());
        self
    }

    pub fn is_tick(&self) -> bool {
        self.kind == TICK
    }

    pub fn entity(&self) -> Option<&str> {
        self.payload.get("entity").map(String::as_str)
    }

    /// Numeric payload field, if present and parseable.
    pub fn number(&self, key: &str) -> Option<f64> {
        self.payload.get(key).and_then(|v| v.parse().ok())
    }
}

/// Decay parameters for `w0 * exp(c * rate * (t - t0))`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayParams<S> {
    pub rates: [S; 6],
    /// The shared constant `c` in `[-1, 0)`.
    pub constant: S,
    /// Decayed instances below this intensity are dropped.
    pub cull_epsilon: S,
}

pub const DEFAULT_DECAY_RATE: f64 = 0.005;
pub const DEFAULT_DECAY_CONSTANT: f64 = -1.0;
pub const DEFAULT_CULL_EPSILON: f64 = 0.01;

impl<S: Scalar> Default for DecayParams<S> {
    fn default() -> Self {
        DecayParams {
            rates: [S::lit(DEFAULT_DECAY_RATE); 6],
            constant: S::lit(DEFAULT_DECAY_CONSTANT),
            cull_epsilon: S::lit(DEFAULT_CULL_EPSILON),
        }
    }
}

impl<S: Scalar> DecayParams<S> {
    pub fn rate(&self, etype: EmotionType) -> S {
        self.rates[etype.index()]
    }

    pub fn set_rate(&mut self, etype: EmotionType, rate: S) {
        self.rates[etype.index()] = rate;
    }

    /// Intensity of an episode with peak `peak` triggered `elapsed` ticks ago.
    pub fn intensity(&self, etype: EmotionType, peak: S, elapsed: Tick) -> S {
        let dt = S::from_u64(elapsed).unwrap_or_else(S::max_value);
        peak * (self.constant * self.rate(etype) * dt).exp()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("rule for '{event}' references unknown goal '{goal}'")]
    UnknownGoal { event: String, goal: GoalId },
    #[error("event at time {event_time} precedes agent time {state_time}")]
    TimeWentBackwards { state_time: Tick, event_time: Tick },
}

/// `e(K)`: applies the effects of every matching rule in declaration order.
///
/// Terminal goals are never modified.
pub fn apply_event_to_beliefs<S: Scalar>(
    beliefs: &BeliefState<S>,
    event: &Event,
    rules: &[LikelihoodRule<S>],
) -> Result<BeliefState<S>, EngineError> {
    let mut next = beliefs.clone();
    for rule in rules.iter().filter(|r| r.matches(event)) {
        for effect in &rule.effects {
            let goal = effect.goal();
            let Some(current) = next.get(goal) else {
                return Err(EngineError::UnknownGoal {
                    event: event.kind.clone(),
                    goal: goal.clone(),
                });
            };
            if current.status.is_terminal() {
                continue;
            }
            match effect {
                Effect::SetLikelihood { value, .. } => {
                    next.set_likelihood(goal, *value);
                }
                Effect::AddLikelihood {
                    delta,
                    per,
                    floor,
                    ceiling,
                    ..
                } => {
                    let scale = match per {
                        Some(key) => match event.number(key) {
                            Some(n) => S::lit(n),
                            None => continue,
                        },
                        None => S::one(),
                    };
                    let v = current.likelihood.unwrap_or_else(S::zero);
                    let step = *delta * scale;
                    // Bounds never pull a likelihood across them towards the delta.
                    let moved = v + step;
                    let value = if step < S::zero() {
                        moved.max(v.min(*floor))
                    } else {
                        moved.min(v.max(*ceiling))
                    };
                    next.set_likelihood(goal, value);
                }
                Effect::SetStatus { status, .. } => {
                    next.set_status(goal, (*status).into());
                }
            }
        }
    }
    Ok(next)
}

/// `K' = e(K) \ H`: forget the likelihood of achieved or failed goals.
pub fn terminal_cleanup<S: Scalar>(beliefs: &BeliefState<S>) -> BeliefState<S> {
    let mut cleaned = beliefs.clone();
    let terminal: Vec<GoalId> = beliefs
        .iter()
        .filter(|(_, b)| b.status.is_terminal())
        .map(|(id, _)| id.clone())
        .collect();
    for id in &terminal {
        cleaned.clear_likelihood(id);
    }
    cleaned
}

/// `decayedEmo(Emo)` at time `now`.
///
/// Intensities are recomputed from each instance's own peak and trigger time,
/// which is the value the emotional memory holds for that episode.
pub fn decay_emotions<S: Scalar>(
    emotions: &EmotionState<S>,
    now: Tick,
    params: &DecayParams<S>,
) -> EmotionState<S> {
    emotions
        .iter()
        .filter_map(|inst| {
            let w = params.intensity(inst.etype, inst.peak, now.saturating_sub(inst.t0));
            (w >= params.cull_epsilon && w > S::zero()).then(|| EmotionInstance {
                intensity: w,
                ..inst.clone()
            })
        })
        .collect()
}

/// Drops every new emotion that conflicts with a later new emotion for the
/// same goal, and collapses duplicates to their maximum.
fn consistent_new<S: Scalar>(new: &[NewEmotion<S>], axioms: &AxiomSet) -> Vec<NewEmotion<S>> {
    let mut kept: Vec<NewEmotion<S>> = Vec::with_capacity(new.len());
    for n in new {
        kept.retain(|k| !(k.goal == n.goal && axioms.excludes(k.etype, n.etype)));
        if let Some(dup) = kept
            .iter_mut()
            .find(|k| k.goal == n.goal && k.etype == n.etype)
        {
            if n.intensity >= dup.intensity {
                *dup = n.clone();
            }
        } else {
            kept.push(n.clone());
        }
    }
    kept
}

/// The merge `newEmo (+) decayedEmo`.
///
/// 1. A decayed instance survives unless the new set re-triggers its type or
///    a conflicting type for the same goal.
/// 2. A new emotion without a decayed counterpart is added with itself as peak.
/// 3. When both exist the more intense one wins wholesale; ties go to the new one.
pub fn merge<S: Scalar>(
    new: &[NewEmotion<S>],
    decayed: &EmotionState<S>,
    axioms: &AxiomSet,
) -> EmotionState<S> {
    let new = consistent_new(new, axioms);
    let mut merged = EmotionState::new();

    for old in decayed.iter() {
        let displaced = new.iter().any(|n| {
            n.goal == old.goal && (n.etype == old.etype || axioms.excludes(n.etype, old.etype))
        });
        if !displaced {
            merged.insert(old.clone());
        }
    }

    for n in &new {
        let fresh = EmotionInstance {
            etype: n.etype,
            goal: n.goal.clone(),
            intensity: n.intensity.min(S::one()),
            t0: n.time,
            peak: n.intensity.min(S::one()),
        };
        match decayed.get(n.etype, &n.goal) {
            Some(old) if old.intensity > fresh.intensity => merged.insert(old.clone()),
            _ => merged.insert(fresh),
        }
    }
    merged
}

/// Applies one event to `state` in place.
pub fn advance<S: Scalar>(
    config: &CharacterizationConfig<S>,
    state: &mut AgentState<S>,
    event: &Event,
) -> Result<(), EngineError> {
    if event.time < state.time {
        return Err(EngineError::TimeWentBackwards {
            state_time: state.time,
            event_time: event.time,
        });
    }
    if event.is_tick() {
        state.time += 1;
        state.emotions = decay_emotions(&state.emotions, state.time, &config.decay);
    } else {
        let after = apply_event_to_beliefs(&state.beliefs, event, &config.rules)?;
        let triggered = new_emotions(
            &state.beliefs,
            &after,
            event,
            &state.history,
            config,
            state.time,
        );
        let decayed = decay_emotions(&state.emotions, state.time, &config.decay);
        state.emotions = merge(&triggered, &decayed, &config.axioms);
        state.beliefs = terminal_cleanup(&after);
    }
    state.history.record(state.time, &state.emotions);
    Ok(())
}

/// `delta(s, e)`.
pub fn step<S: Scalar>(
    config: &CharacterizationConfig<S>,
    state: &AgentState<S>,
    event: &Event,
) -> Result<AgentState<S>, EngineError> {
    let mut next = state.clone();
    advance(config, &mut next, event)?;
    Ok(next)
}

/// The observable part of a state after a transition.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSnapshot<S> {
    pub time: Tick,
    pub beliefs: BeliefState<S>,
    pub emotions: EmotionState<S>,
}

impl<S: Scalar> From<&AgentState<S>> for StateSnapshot<S> {
    fn from(state: &AgentState<S>) -> Self {
        StateSnapshot {
            time: state.time,
            beliefs: state.beliefs.clone(),
            emotions: state.emotions.clone(),
        }
    }
}

/// A validated characterization bound to the transition function.
#[derive(Clone, Debug)]
pub struct Engine<S: Scalar> {
    config: CharacterizationConfig<S>,
}

impl<S: Scalar> Engine<S> {
    pub fn new(config: CharacterizationConfig<S>) -> Result<Self, ConfigError> {
        config.check()?;
        Ok(Engine { config })
    }

    pub fn config(&self) -> &CharacterizationConfig<S> {
        &self.config
    }

    pub fn initial_state(&self) -> AgentState<S> {
        initial_state(&self.config)
    }

    pub fn step(&self, state: &AgentState<S>, event: &Event) -> Result<AgentState<S>, EngineError> {
        step(&self.config, state, event)
    }

    pub fn advance(&self, state: &mut AgentState<S>, event: &Event) -> Result<(), EngineError> {
        advance(&self.config, state, event)
    }

    /// Runs `events` from `s0` and returns `s0` followed by one snapshot per event.
    pub fn run<'a>(
        &self,
        events: impl IntoIterator<Item = &'a Event>,
    ) -> Result<Vec<StateSnapshot<S>>, EngineError> {
        let mut state = self.initial_state();
        let mut snapshots = vec![StateSnapshot::from(&state)];
        for event in events {
            self.advance(&mut state, event)?;
            snapshots.push(StateSnapshot::from(&state));
        }
        Ok(snapshots)
    }
}
