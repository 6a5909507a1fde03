//! Appraisal dimensions and the activation functions that turn one event
//! into newly triggered emotions.
//!
//! Every activation function has the same shape: a guard over the beliefs
//! before and after the event, an activation potential, and the emotion's
//! threshold subtracted from it. Only strictly positive results trigger.

use serde::{Deserialize, Serialize};

use crate::characterization::CharacterizationConfig;
use crate::emotion::{BeliefState, EmotionHistory, EmotionType, Goal, GoalId, GoalStatus, Tick};
use crate::scalar::Scalar;
use crate::transition::Event;

/// Per-type activation thresholds, each in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds<S>([S; 6]);

impl<S: Scalar> Thresholds<S> {
    pub fn uniform(value: S) -> Self {
        Thresholds([value; 6])
    }

    pub fn get(&self, etype: EmotionType) -> S {
        self.0[etype.index()]
    }

    pub fn set(&mut self, etype: EmotionType, value: S) {
        self.0[etype.index()] = value;
    }

    pub fn with(mut self, etype: EmotionType, value: S) -> Self {
        self.set(etype, value);
        self
    }
}

impl<S: Scalar> Default for Thresholds<S> {
    fn default() -> Self {
        Thresholds::uniform(S::zero())
    }
}

/// A static desirability value of an event kind for a goal.
#[derive(Clone, Debug, PartialEq)]
pub struct DesirabilityEntry<S> {
    pub event: String,
    /// Restricts the entry to events whose `entity` payload equals this id.
    pub entity: Option<String>,
    pub goal: GoalId,
    pub value: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesirabilityMode {
    /// Look the value up in the configured table.
    #[default]
    Table,
    /// Scale the likelihood change the event causes by the goal's significance.
    DeltaScaled,
}

/// The desirability dimension `Des`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Desirability<S> {
    pub mode: DesirabilityMode,
    pub entries: Vec<DesirabilityEntry<S>>,
}

impl<S: Scalar> Desirability<S> {
    fn table_value(&self, event: &Event, goal: &GoalId) -> Option<S> {
        let candidates = self
            .entries
            .iter()
            .filter(|d| d.event == event.kind && &d.goal == goal);
        let mut generic = None;
        for entry in candidates {
            match &entry.entity {
                Some(id) if event.entity() == Some(id.as_str()) => return Some(entry.value),
                Some(_) => {}
                None => {
                    generic.get_or_insert(entry.value);
                }
            }
        }
        generic
    }
}

/// Placeholder for an appraisal dimension the six event-based emotions never consult.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Inert;

/// `Pi = <Des, Praisew, DesOther, Liking>`. Only `des` is evaluated.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AppraisalDimensions<S> {
    pub des: Desirability<S>,
    pub praisew: Inert,
    pub des_other: Inert,
    pub liking: Inert,
}

/// An emotion triggered by the current event, before merging.
#[derive(Clone, Debug, PartialEq)]
pub struct NewEmotion<S> {
    pub etype: EmotionType,
    pub goal: GoalId,
    pub intensity: S,
    pub time: Tick,
}

/// Desirability of `event` for `goal`, in `[-1, 1]`.
///
/// `before` is the belief base the event was perceived in and `after` the
/// result of applying the event to it; delta-scaled mode reads the
/// likelihood change between the two.
pub fn desirability<S: Scalar>(
    before: &BeliefState<S>,
    after: &BeliefState<S>,
    event: &Event,
    goal: &Goal<S>,
    des: &Desirability<S>,
) -> S {
    let one = S::one();
    match des.mode {
        DesirabilityMode::Table => des
            .table_value(event, &goal.id)
            .map(|v| v.clamp_to(-one, one))
            .unwrap_or_else(S::zero),
        DesirabilityMode::DeltaScaled => {
            match (before.likelihood(&goal.id), after.likelihood(&goal.id)) {
                (Some(v), Some(v_new)) => ((v_new - v) * goal.significance).clamp_to(-one, one),
                _ => S::zero(),
            }
        }
    }
}

fn positive<S: Scalar>(w: S) -> Option<S> {
    (w > S::zero()).then(|| w.min(S::one()))
}

/// Joy: the event made the goal certain (`likelihood = 1`) and is desirable.
pub fn activate_joy<S: Scalar>(
    after: &BeliefState<S>,
    desirability: S,
    goal: &Goal<S>,
    thresholds: &Thresholds<S>,
) -> Option<S> {
    if after.likelihood(&goal.id) != Some(S::one()) || desirability <= S::zero() {
        return None;
    }
    positive(desirability - thresholds.get(EmotionType::Joy))
}

/// Distress: the event made the goal impossible (`likelihood = 0`) and is undesirable.
pub fn activate_distress<S: Scalar>(
    after: &BeliefState<S>,
    desirability: S,
    goal: &Goal<S>,
    thresholds: &Thresholds<S>,
) -> Option<S> {
    if after.likelihood(&goal.id) != Some(S::zero()) || desirability >= S::zero() {
        return None;
    }
    positive(desirability.abs() - thresholds.get(EmotionType::Distress))
}

/// Hope: the likelihood rose but the goal is not yet certain, `v < v' < 1`.
pub fn activate_hope<S: Scalar>(
    before: &BeliefState<S>,
    after: &BeliefState<S>,
    goal: &Goal<S>,
    thresholds: &Thresholds<S>,
) -> Option<S> {
    let v = before.likelihood(&goal.id)?;
    let v_new = after.likelihood(&goal.id)?;
    if !(v < v_new && v_new < S::one()) {
        return None;
    }
    positive(v_new * goal.significance - thresholds.get(EmotionType::Hope))
}

/// Fear: the likelihood fell but the goal is not yet lost, `0 < v' < v`.
pub fn activate_fear<S: Scalar>(
    before: &BeliefState<S>,
    after: &BeliefState<S>,
    goal: &Goal<S>,
    thresholds: &Thresholds<S>,
) -> Option<S> {
    let v = before.likelihood(&goal.id)?;
    let v_new = after.likelihood(&goal.id)?;
    if !(S::zero() < v_new && v_new < v) {
        return None;
    }
    positive((S::one() - v_new) * goal.significance - thresholds.get(EmotionType::Fear))
}

fn remembered<S: Scalar>(
    etype: EmotionType,
    goal: &GoalId,
    history: &EmotionHistory<S>,
    same_step: &[NewEmotion<S>],
) -> bool {
    history.contains(etype, goal)
        || same_step
            .iter()
            .any(|n| n.etype == etype && &n.goal == goal)
}

/// Satisfaction: a hoped-for goal is confirmed achieved after joy about it.
///
/// `same_step` holds the emotions already triggered by this event; joy from
/// the same event counts as remembered.
pub fn activate_satisfaction<S: Scalar>(
    after: &BeliefState<S>,
    goal: &Goal<S>,
    history: &EmotionHistory<S>,
    same_step: &[NewEmotion<S>],
    thresholds: &Thresholds<S>,
) -> Option<S> {
    if after.status(&goal.id) != Some(GoalStatus::Achieved)
        || !history.contains(EmotionType::Hope, &goal.id)
        || !remembered(EmotionType::Joy, &goal.id, history, same_step)
    {
        return None;
    }
    positive(goal.significance - thresholds.get(EmotionType::Satisfaction))
}

/// Disappointment: a hoped-for goal is confirmed failed after distress about it.
pub fn activate_disappointment<S: Scalar>(
    after: &BeliefState<S>,
    goal: &Goal<S>,
    history: &EmotionHistory<S>,
    same_step: &[NewEmotion<S>],
    thresholds: &Thresholds<S>,
) -> Option<S> {
    if after.status(&goal.id) != Some(GoalStatus::Failed)
        || !history.contains(EmotionType::Hope, &goal.id)
        || !remembered(EmotionType::Distress, &goal.id, history, same_step)
    {
        return None;
    }
    positive(goal.significance - thresholds.get(EmotionType::Disappointment))
}

/// `newEmo(K, e, G)`: every positive activation over all goals.
///
/// `after` must be the belief base before terminal cleanup. Within a goal the
/// types are evaluated in [`EmotionType::ALL`] order so that same-step joy or
/// distress can feed the confirmation emotions. Must not be called for ticks.
pub fn new_emotions<S: Scalar>(
    before: &BeliefState<S>,
    after: &BeliefState<S>,
    event: &Event,
    history: &EmotionHistory<S>,
    config: &CharacterizationConfig<S>,
    time: Tick,
) -> Vec<NewEmotion<S>> {
    debug_assert!(!event.is_tick(), "ticks only decay emotions");
    let thresholds = &config.thresholds;
    let mut triggered = Vec::new();
    for spec in &config.goals {
        let goal = &spec.goal;
        let des = desirability(before, after, event, goal, &config.appraisal.des);
        let start = triggered.len();
        for etype in EmotionType::ALL {
            let same_step = &triggered[start..];
            let w = match etype {
                EmotionType::Joy => activate_joy(after, des, goal, thresholds),
                EmotionType::Distress => activate_distress(after, des, goal, thresholds),
                EmotionType::Hope => activate_hope(before, after, goal, thresholds),
                EmotionType::Fear => activate_fear(before, after, goal, thresholds),
                EmotionType::Satisfaction => {
                    activate_satisfaction(after, goal, history, same_step, thresholds)
                }
                EmotionType::Disappointment => {
                    activate_disappointment(after, goal, history, same_step, thresholds)
                }
            };
            if let Some(intensity) = w {
                triggered.push(NewEmotion {
                    etype,
                    goal: goal.id.clone(),
                    intensity,
                    time,
                });
            }
        }
    }
    triggered
}
