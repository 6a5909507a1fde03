//! State of the emotional agent: goals, beliefs, active emotions and the
//! bounded emotional memory.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::appraisal::NewEmotion;
use crate::characterization::CharacterizationConfig;
use crate::scalar::Scalar;
use crate::transition;

/// Discrete clock value. Only tick events advance it.
pub type Tick = u64;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GoalId(String);

impl GoalId {
    pub fn new(id: impl Into<String>) -> Self {
        GoalId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GoalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for GoalId {
    fn from(s: &str) -> Self {
        GoalId::new(s)
    }
}

/// A goal with its static significance in `(0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Goal<S> {
    pub id: GoalId,
    pub significance: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoalStatus {
    Proceeding,
    Achieved,
    Failed,
}

impl GoalStatus {
    pub fn is_terminal(self) -> bool {
        !matches!(self, GoalStatus::Proceeding)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GoalStatus::Proceeding => "proceeding",
            GoalStatus::Achieved => "achieved",
            GoalStatus::Failed => "failed",
        }
    }
}

/// Belief facts for a single goal.
#[derive(Clone, Debug, PartialEq)]
pub struct GoalBelief<S> {
    pub status: GoalStatus,
    pub likelihood: Option<S>,
}

/// The belief base `K`: status and likelihood facts per goal.
///
/// Between belief update and terminal cleanup a terminal goal may still carry
/// its likelihood; after cleanup a likelihood is present exactly when the goal
/// is proceeding.
#[derive(Clone, Debug, PartialEq)]
pub struct BeliefState<S> {
    goals: BTreeMap<GoalId, GoalBelief<S>>,
}

impl<S: Scalar> Default for BeliefState<S> {
    fn default() -> Self {
        BeliefState {
            goals: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> BeliefState<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a proceeding goal with the given likelihood (clamped to `[0, 1]`).
    pub fn insert_goal(&mut self, id: GoalId, likelihood: S) {
        self.goals.insert(
            id,
            GoalBelief {
                status: GoalStatus::Proceeding,
                likelihood: Some(likelihood.unit_clamp()),
            },
        );
    }

    pub fn contains(&self, id: &GoalId) -> bool {
        self.goals.contains_key(id)
    }

    pub fn get(&self, id: &GoalId) -> Option<&GoalBelief<S>> {
        self.goals.get(id)
    }

    pub fn likelihood(&self, id: &GoalId) -> Option<S> {
        self.goals.get(id).and_then(|b| b.likelihood)
    }

    pub fn status(&self, id: &GoalId) -> Option<GoalStatus> {
        self.goals.get(id).map(|b| b.status)
    }

    /// Overwrites the likelihood of a proceeding goal. Terminal or unknown
    /// goals are left untouched; the return value says whether anything changed.
    pub fn set_likelihood(&mut self, id: &GoalId, value: S) -> bool {
        match self.goals.get_mut(id) {
            Some(b) if !b.status.is_terminal() => {
                b.likelihood = Some(value.unit_clamp());
                true
            }
            _ => false,
        }
    }

    pub fn set_status(&mut self, id: &GoalId, status: GoalStatus) -> bool {
        match self.goals.get_mut(id) {
            Some(b) if !b.status.is_terminal() => {
                b.status = status;
                true
            }
            _ => false,
        }
    }

    pub(crate) fn clear_likelihood(&mut self, id: &GoalId) {
        if let Some(b) = self.goals.get_mut(id) {
            b.likelihood = None;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GoalId, &GoalBelief<S>)> {
        self.goals.iter()
    }

    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }
}

/// The six event-based emotion types, in appraisal evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmotionType {
    Joy,
    Distress,
    Hope,
    Fear,
    Satisfaction,
    Disappointment,
}

impl EmotionType {
    pub const ALL: [EmotionType; 6] = [
        EmotionType::Joy,
        EmotionType::Distress,
        EmotionType::Hope,
        EmotionType::Fear,
        EmotionType::Satisfaction,
        EmotionType::Disappointment,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionType::Joy => "joy",
            EmotionType::Distress => "distress",
            EmotionType::Hope => "hope",
            EmotionType::Fear => "fear",
            EmotionType::Satisfaction => "satisfaction",
            EmotionType::Disappointment => "disappointment",
        }
    }

    /// Whether the emotion is pleasant. Used to split heat-map layers.
    pub fn is_positive(self) -> bool {
        matches!(
            self,
            EmotionType::Joy | EmotionType::Hope | EmotionType::Satisfaction
        )
    }
}

impl fmt::Display for EmotionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown emotion type '{0}'")]
pub struct UnknownEmotionType(pub String);

impl FromStr for EmotionType {
    type Err = UnknownEmotionType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EmotionType::ALL
            .into_iter()
            .find(|e| e.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownEmotionType(s.to_string()))
    }
}

/// One active emotion towards a goal.
#[derive(Clone, Debug, PartialEq)]
pub struct EmotionInstance<S> {
    pub etype: EmotionType,
    pub goal: GoalId,
    pub intensity: S,
    /// Trigger time.
    pub t0: Tick,
    /// Intensity at `t0`; decay is always recomputed from this value.
    pub peak: S,
}

pub type EmotionKey = (EmotionType, GoalId);

/// The set `Emo` of active emotions, at most one per `(etype, goal)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmotionState<S> {
    active: BTreeMap<EmotionKey, EmotionInstance<S>>,
}

impl<S> Default for EmotionState<S> {
    fn default() -> Self {
        EmotionState {
            active: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> EmotionState<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces the instance for its `(etype, goal)`. Instances
    /// with non-positive intensity are not stored.
    pub fn insert(&mut self, instance: EmotionInstance<S>) {
        let key = (instance.etype, instance.goal.clone());
        if instance.intensity > S::zero() {
            self.active.insert(key, instance);
        } else {
            self.active.remove(&key);
        }
    }

    pub fn remove(&mut self, etype: EmotionType, goal: &GoalId) -> Option<EmotionInstance<S>> {
        self.active.remove(&(etype, goal.clone()))
    }

    pub fn get(&self, etype: EmotionType, goal: &GoalId) -> Option<&EmotionInstance<S>> {
        self.active.get(&(etype, goal.clone()))
    }

    pub fn intensity(&self, etype: EmotionType, goal: &GoalId) -> Option<S> {
        self.get(etype, goal).map(|i| i.intensity)
    }

    pub fn contains(&self, etype: EmotionType, goal: &GoalId) -> bool {
        self.active.contains_key(&(etype, goal.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &EmotionInstance<S>> {
        self.active.values()
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }
}

impl<S: Scalar> FromIterator<EmotionInstance<S>> for EmotionState<S> {
    fn from_iter<I: IntoIterator<Item = EmotionInstance<S>>>(iter: I) -> Self {
        let mut state = EmotionState::new();
        for inst in iter {
            state.insert(inst);
        }
        state
    }
}

/// Default emotional memory window in ticks.
pub const DEFAULT_HISTORY_WINDOW: Tick = 10_000;

/// Bounded emotional memory: snapshots of `Emo` stamped with the time they
/// were recorded. Snapshots older than `latest - window` are evicted.
#[derive(Clone, Debug, PartialEq)]
pub struct EmotionHistory<S> {
    window: Tick,
    latest: Tick,
    entries: VecDeque<(Tick, EmotionState<S>)>,
}

impl<S: Scalar> EmotionHistory<S> {
    pub fn new(window: Tick) -> Self {
        EmotionHistory {
            window,
            latest: 0,
            entries: VecDeque::new(),
        }
    }

    pub fn window(&self) -> Tick {
        self.window
    }

    /// Records the emotional state at time `time` and evicts snapshots that
    /// fell out of the window.
    pub fn record(&mut self, time: Tick, emotions: &EmotionState<S>) {
        self.latest = self.latest.max(time);
        self.entries.push_back((time, emotions.clone()));
        let horizon = self.latest.saturating_sub(self.window);
        while matches!(self.entries.front(), Some((t, _)) if *t < horizon) {
            self.entries.pop_front();
        }
    }

    fn in_window(&self) -> impl Iterator<Item = &(Tick, EmotionState<S>)> {
        let horizon = self.latest.saturating_sub(self.window);
        self.entries.iter().filter(move |(t, _)| *t >= horizon)
    }

    /// Whether any remembered snapshot holds `etype` towards `goal`.
    pub fn contains(&self, etype: EmotionType, goal: &GoalId) -> bool {
        self.in_window().any(|(_, s)| s.contains(etype, goal))
    }

    /// Peak intensity of the `(etype, goal)` episode triggered at `t0`.
    pub fn peak(&self, etype: EmotionType, goal: &GoalId, t0: Tick) -> Option<S> {
        self.in_window()
            .filter(|(t, _)| *t == t0)
            .filter_map(|(_, s)| s.get(etype, goal))
            .find(|inst| inst.t0 == t0)
            .map(|inst| inst.peak)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `emhistory(etype, g, t0)`.
pub fn history_peak<S: Scalar>(
    history: &EmotionHistory<S>,
    etype: EmotionType,
    goal: &GoalId,
    t0: Tick,
) -> Option<S> {
    history.peak(etype, goal, t0)
}

/// Pairs of emotion types that may not be simultaneously active for one goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSet {
    pairs: Vec<(EmotionType, EmotionType)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("an emotion cannot exclude itself: {0}")]
pub struct ReflexiveAxiom(pub EmotionType);

impl AxiomSet {
    pub fn empty() -> Self {
        AxiomSet { pairs: Vec::new() }
    }

    /// Builds a set from unordered pairs; duplicates collapse.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (EmotionType, EmotionType)>,
    ) -> Result<Self, ReflexiveAxiom> {
        let mut set = AxiomSet::empty();
        for (a, b) in pairs {
            set.add(a, b)?;
        }
        Ok(set)
    }

    pub fn add(&mut self, a: EmotionType, b: EmotionType) -> Result<(), ReflexiveAxiom> {
        if a == b {
            return Err(ReflexiveAxiom(a));
        }
        let pair = (a.min(b), a.max(b));
        if let Err(pos) = self.pairs.binary_search(&pair) {
            self.pairs.insert(pos, pair);
        }
        Ok(())
    }

    pub fn pairs(&self) -> &[(EmotionType, EmotionType)] {
        &self.pairs
    }

    pub fn excludes(&self, a: EmotionType, b: EmotionType) -> bool {
        self.pairs.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// `axiomset(<etype, g>)`: every type that conflicts with `etype`.
    pub fn partners(&self, etype: EmotionType) -> impl Iterator<Item = EmotionType> + '_ {
        self.pairs.iter().filter_map(move |&(a, b)| {
            if a == etype {
                Some(b)
            } else if b == etype {
                Some(a)
            } else {
                None
            }
        })
    }
}

impl Default for AxiomSet {
    fn default() -> Self {
        AxiomSet {
            pairs: vec![
                (EmotionType::Joy, EmotionType::Hope),
                (EmotionType::Distress, EmotionType::Fear),
            ],
        }
    }
}

/// Two mutually exclusive emotions found active for the same goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub goal: GoalId,
    pub pair: (EmotionType, EmotionType),
}

pub fn check_axioms<S: Scalar>(
    emotions: &EmotionState<S>,
    axioms: &AxiomSet,
) -> Vec<AxiomViolation> {
    let mut violations = Vec::new();
    let goals: BTreeSet<&GoalId> = emotions.iter().map(|i| &i.goal).collect();
    for goal in goals {
        for &(a, b) in axioms.pairs() {
            if emotions.contains(a, goal) && emotions.contains(b, goal) {
                violations.push(AxiomViolation {
                    goal: goal.clone(),
                    pair: (a, b),
                });
            }
        }
    }
    violations
}

/// A state `<K, Emo>` of the transition system, together with the clock and
/// emotional memory needed to evaluate it.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentState<S> {
    pub time: Tick,
    pub beliefs: BeliefState<S>,
    pub emotions: EmotionState<S>,
    pub history: EmotionHistory<S>,
}

/// Builds `s0`: every goal proceeding at its initial likelihood, with the
/// prospect emotions that likelihood implies.
pub fn initial_state<S: Scalar>(config: &CharacterizationConfig<S>) -> AgentState<S> {
    let mut beliefs = BeliefState::new();
    let mut prospects = Vec::new();
    for spec in &config.goals {
        beliefs.insert_goal(spec.goal.id.clone(), spec.initial_likelihood);
        let v = spec.initial_likelihood.unit_clamp();
        let x = spec.goal.significance;
        let hope = v * x - config.thresholds.get(EmotionType::Hope);
        let fear = (S::one() - v) * x - config.thresholds.get(EmotionType::Fear);
        for (etype, w) in [(EmotionType::Hope, hope), (EmotionType::Fear, fear)] {
            if w > S::zero() {
                prospects.push(NewEmotion {
                    etype,
                    goal: spec.goal.id.clone(),
                    intensity: w.min(S::one()),
                    time: 0,
                });
            }
        }
    }
    let emotions = transition::merge(&prospects, &EmotionState::new(), &config.axioms);
    let mut history = EmotionHistory::new(config.history_window);
    history.record(0, &emotions);
    AgentState {
        time: 0,
        beliefs,
        emotions,
        history,
    }
}
