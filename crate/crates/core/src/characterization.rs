//! Player characterization: the designer-supplied inputs of the model.
//!
//! Configurations are TOML documents with four sections:
//!
//! ```toml
//! [[goals]]
//! id = "complete_level"
//! significance = 1.0
//! initial_likelihood = 0.5
//!
//! [[rules]]
//! event = "door_opened"
//! effects = [{ op = "add_likelihood", goal = "complete_level", delta = 0.1667 }]
//!
//! [desirability]
//! mode = "table"
//! entries = [{ event = "door_opened", goal = "complete_level", value = 0.6 }]
//!
//! [emotion]
//! history_window = 10000
//! thresholds = { joy = 0.0 }
//! decay_rates = { fear = 0.005 }
//! ```
//!
//! Omitted thresholds default to 0, decay rates to 0.005, the decay constant
//! to -1 and the axioms to `{hope, joy}` and `{fear, distress}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::appraisal::{
    AppraisalDimensions, Desirability, DesirabilityEntry, DesirabilityMode, Thresholds,
};
use crate::emotion::{
    AxiomSet, EmotionType, Goal, GoalId, GoalStatus, Tick, DEFAULT_HISTORY_WINDOW,
};
use crate::labsim::EVENT_VOCABULARY;
use crate::scalar::Scalar;
use crate::transition::{DecayParams, Event, TICK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    Achieved,
    Failed,
}

impl From<TerminalStatus> for GoalStatus {
    fn from(s: TerminalStatus) -> Self {
        match s {
            TerminalStatus::Achieved => GoalStatus::Achieved,
            TerminalStatus::Failed => GoalStatus::Failed,
        }
    }
}

/// One belief change caused by a matching event.
#[derive(Clone, Debug, PartialEq)]
pub enum Effect<S> {
    SetLikelihood {
        goal: GoalId,
        value: S,
    },
    /// Adds `delta` (times the numeric payload field `per`, when given),
    /// bounded to `[floor, ceiling]`.
    AddLikelihood {
        goal: GoalId,
        delta: S,
        per: Option<String>,
        floor: S,
        ceiling: S,
    },
    SetStatus {
        goal: GoalId,
        status: TerminalStatus,
    },
}

impl<S> Effect<S> {
    pub fn goal(&self) -> &GoalId {
        match self {
            Effect::SetLikelihood { goal, .. }
            | Effect::AddLikelihood { goal, .. }
            | Effect::SetStatus { goal, .. } => goal,
        }
    }
}

/// A likelihood function: how events of one kind change goal beliefs.
#[derive(Clone, Debug, PartialEq)]
pub struct LikelihoodRule<S> {
    pub event: String,
    /// Restricts the rule to events whose `entity` payload equals this id.
    pub entity: Option<String>,
    pub effects: Vec<Effect<S>>,
}

impl<S> LikelihoodRule<S> {
    pub fn matches(&self, event: &Event) -> bool {
        self.event == event.kind
            && self
                .entity
                .as_deref()
                .is_none_or(|id| event.entity() == Some(id))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoalSpec<S> {
    pub goal: Goal<S>,
    pub initial_likelihood: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationConfig<S> {
    pub goals: Vec<GoalSpec<S>>,
    pub rules: Vec<LikelihoodRule<S>>,
    pub appraisal: AppraisalDimensions<S>,
    pub thresholds: Thresholds<S>,
    pub decay: DecayParams<S>,
    pub axioms: AxiomSet,
    pub history_window: Tick,
}

impl<S: Scalar> Default for CharacterizationConfig<S> {
    fn default() -> Self {
        CharacterizationConfig {
            goals: Vec::new(),
            rules: Vec::new(),
            appraisal: AppraisalDimensions::default(),
            thresholds: Thresholds::default(),
            decay: DecayParams::default(),
            axioms: AxiomSet::default(),
            history_window: DEFAULT_HISTORY_WINDOW,
        }
    }
}

impl<S: Scalar> CharacterizationConfig<S> {
    pub fn goal(&self, id: &GoalId) -> Option<&Goal<S>> {
        self.goals.iter().map(|g| &g.goal).find(|g| &g.id == id)
    }

    /// Fails when validation reports any error-level problem.
    pub fn check(&self) -> Result<(), ConfigError> {
        let errors: Vec<Problem> = validate_config(self)
            .into_iter()
            .filter(|p| p.severity == Severity::Error)
            .collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errors))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub severity: Severity,
    pub message: String,
}

impl Problem {
    fn error(message: impl Into<String>) -> Self {
        Problem {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(message: impl Into<String>) -> Self {
        Problem {
            severity: Severity::Warning,
            message: message.into(),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Error => write!(f, "error: {}", self.message),
            Severity::Warning => write!(f, "warning: {}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", .0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Problem>),
}

fn unit_interval<S: Scalar>(v: S) -> bool {
    v >= S::zero() && v <= S::one()
}

/// Every problem with `config`. Warnings do not prevent running it.
// Negated comparisons below also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate_config<S: Scalar>(config: &CharacterizationConfig<S>) -> Vec<Problem> {
    let mut problems = Vec::new();
    if config.goals.is_empty() {
        problems.push(Problem::error("no goals defined"));
    }
    let mut seen = BTreeSet::new();
    for spec in &config.goals {
        let id = &spec.goal.id;
        if id.as_str().is_empty() {
            problems.push(Problem::error("goal with empty id"));
        }
        if !seen.insert(id.clone()) {
            problems.push(Problem::error(format!("duplicate goal '{id}'")));
        }
        let x = spec.goal.significance;
        if !(x > S::zero() && x <= S::one()) {
            problems.push(Problem::error(format!(
                "goal '{id}': significance out of (0,1]: {x}"
            )));
        }
        if !unit_interval(spec.initial_likelihood) {
            problems.push(Problem::error(format!(
                "goal '{id}': initial_likelihood out of [0,1]: {}",
                spec.initial_likelihood
            )));
        }
    }

    let mut rule_events = BTreeSet::new();
    for (i, rule) in config.rules.iter().enumerate() {
        let n = i + 1;
        rule_events.insert(rule.event.as_str());
        if rule.event == TICK {
            problems.push(Problem::warning(format!(
                "rule {n}: rules on '{TICK}' never fire"
            )));
        }
        if rule.effects.is_empty() {
            problems.push(Problem::warning(format!(
                "rule {n} ('{}') has no effects",
                rule.event
            )));
        }
        for effect in &rule.effects {
            let goal = effect.goal();
            if !seen.contains(goal) {
                problems.push(Problem::error(format!(
                    "rule {n} ('{}') references unknown goal '{goal}'",
                    rule.event
                )));
            }
            match effect {
                Effect::SetLikelihood { value, .. } if !unit_interval(*value) => {
                    problems.push(Problem::error(format!(
                        "rule {n}: set_likelihood value out of [0,1]: {value}"
                    )));
                }
                Effect::AddLikelihood {
                    delta,
                    floor,
                    ceiling,
                    ..
                } => {
                    if !delta.is_finite() {
                        problems.push(Problem::error(format!("rule {n}: delta is not finite")));
                    }
                    if !unit_interval(*floor) || !unit_interval(*ceiling) || floor > ceiling {
                        problems.push(Problem::error(format!(
                            "rule {n}: bounds must satisfy 0 <= floor <= ceiling <= 1"
                        )));
                    }
                }
                _ => {}
            }
        }
    }

    for entry in &config.appraisal.des.entries {
        if !seen.contains(&entry.goal) {
            problems.push(Problem::error(format!(
                "desirability of '{}' references unknown goal '{}'",
                entry.event, entry.goal
            )));
        }
        if !(entry.value.abs() <= S::one()) {
            problems.push(Problem::error(format!(
                "desirability of '{}' for '{}' out of [-1,1]: {}",
                entry.event, entry.goal, entry.value
            )));
        }
        if !rule_events.contains(entry.event.as_str())
            && !EVENT_VOCABULARY.contains(&entry.event.as_str())
        {
            problems.push(Problem::warning(format!(
                "desirability event '{}' matches no rule and no simulator event",
                entry.event
            )));
        }
    }

    for etype in EmotionType::ALL {
        let t = config.thresholds.get(etype);
        if !(t >= S::zero() && t < S::one()) {
            problems.push(Problem::error(format!(
                "threshold for {etype} out of [0,1): {t}"
            )));
        }
        let r = config.decay.rate(etype);
        if !(r > S::zero() && r.is_finite()) {
            problems.push(Problem::error(format!(
                "decay rate for {etype} must be positive: {r}"
            )));
        }
    }
    let c = config.decay.constant;
    if !(c >= -S::one() && c < S::zero()) {
        problems.push(Problem::error(format!("decay constant out of [-1,0): {c}")));
    }
    if !(config.decay.cull_epsilon > S::zero()) {
        problems.push(Problem::error("cull_epsilon must be positive"));
    }
    if config.history_window == 0 {
        problems.push(Problem::error("history_window must be at least 1"));
    }
    problems
}

// ---- file format ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
struct ConfigDoc<S> {
    #[serde(default)]
    goals: Vec<GoalDoc<S>>,
    #[serde(default)]
    rules: Vec<RuleDoc<S>>,
    #[serde(default)]
    desirability: DesirabilityDoc<S>,
    #[serde(default)]
    emotion: EmotionDoc<S>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
struct GoalDoc<S> {
    id: String,
    significance: S,
    initial_likelihood: S,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
struct RuleDoc<S> {
    event: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entity: Option<String>,
    effects: Vec<EffectDoc<S>>,
}

#[derive(Serialize, Deserialize)]
#[serde(
    tag = "op",
    rename_all = "snake_case",
    deny_unknown_fields,
    bound = "S: Scalar"
)]
enum EffectDoc<S> {
    SetLikelihood {
        goal: String,
        value: S,
    },
    AddLikelihood {
        goal: String,
        delta: S,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        per: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        floor: Option<S>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ceiling: Option<S>,
    },
    SetStatus {
        goal: String,
        status: TerminalStatus,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
struct DesirabilityDoc<S> {
    #[serde(default)]
    mode: DesirabilityMode,
    #[serde(default)]
    entries: Vec<EntryDoc<S>>,
}

impl<S> Default for DesirabilityDoc<S> {
    fn default() -> Self {
        DesirabilityDoc {
            mode: DesirabilityMode::Table,
            entries: Vec::new(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
struct EntryDoc<S> {
    event: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entity: Option<String>,
    goal: String,
    value: S,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
struct EmotionDoc<S> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    history_window: Option<Tick>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    decay_constant: Option<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cull_epsilon: Option<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axioms: Option<Vec<[String; 2]>>,
    #[serde(default)]
    thresholds: BTreeMap<String, S>,
    #[serde(default)]
    decay_rates: BTreeMap<String, S>,
}

impl<S> Default for EmotionDoc<S> {
    fn default() -> Self {
        EmotionDoc {
            history_window: None,
            decay_constant: None,
            cull_epsilon: None,
            axioms: None,
            thresholds: BTreeMap::new(),
            decay_rates: BTreeMap::new(),
        }
    }
}

fn location(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |nl| before.len() - nl - 1)
        + 1;
    (line, column)
}

fn line_of(text: &str, needle: &str) -> (usize, usize) {
    text.find(needle).map_or((1, 1), |o| location(text, o))
}

fn convert<S: Scalar>(
    doc: ConfigDoc<S>,
    text: &str,
) -> Result<CharacterizationConfig<S>, ConfigError> {
    let emotion_name = |name: &str| {
        name.parse::<EmotionType>().map_err(|e| {
            let (line, column) = line_of(text, name);
            ConfigError::Syntax {
                line,
                column,
                message: e.to_string(),
            }
        })
    };

    let mut config = CharacterizationConfig {
        goals: Vec::new(),
        ..CharacterizationConfig::default()
    };
    config.goals = doc
        .goals
        .into_iter()
        .map(|g| GoalSpec {
            goal: Goal {
                id: GoalId::new(g.id),
                significance: g.significance,
            },
            initial_likelihood: g.initial_likelihood,
        })
        .collect();
    config.rules = doc
        .rules
        .into_iter()
        .map(|r| LikelihoodRule {
            event: r.event,
            entity: r.entity,
            effects: r
                .effects
                .into_iter()
                .map(|e| match e {
                    EffectDoc::SetLikelihood { goal, value } => Effect::SetLikelihood {
                        goal: GoalId::new(goal),
                        value,
                    },
                    EffectDoc::AddLikelihood {
                        goal,
                        delta,
                        per,
                        floor,
                        ceiling,
                    } => Effect::AddLikelihood {
                        goal: GoalId::new(goal),
                        delta,
                        per,
                        floor: floor.unwrap_or_else(S::zero),
                        ceiling: ceiling.unwrap_or_else(S::one),
                    },
                    EffectDoc::SetStatus { goal, status } => Effect::SetStatus {
                        goal: GoalId::new(goal),
                        status,
                    },
                })
                .collect(),
        })
        .collect();
    config.appraisal.des = Desirability {
        mode: doc.desirability.mode,
        entries: doc
            .desirability
            .entries
            .into_iter()
            .map(|e| DesirabilityEntry {
                event: e.event,
                entity: e.entity,
                goal: GoalId::new(e.goal),
                value: e.value,
            })
            .collect(),
    };

    let em = doc.emotion;
    for (name, value) in &em.thresholds {
        config.thresholds.set(emotion_name(name)?, *value);
    }
    for (name, value) in &em.decay_rates {
        config.decay.set_rate(emotion_name(name)?, *value);
    }
    if let Some(c) = em.decay_constant {
        config.decay.constant = c;
    }
    if let Some(eps) = em.cull_epsilon {
        config.decay.cull_epsilon = eps;
    }
    if let Some(w) = em.history_window {
        config.history_window = w;
    }
    if let Some(pairs) = em.axioms {
        let mut axioms = AxiomSet::empty();
        for [a, b] in &pairs {
            axioms
                .add(emotion_name(a)?, emotion_name(b)?)
                .map_err(|e| {
                    let (line, column) = line_of(text, "axioms");
                    ConfigError::Syntax {
                        line,
                        column,
                        message: e.to_string(),
                    }
                })?;
        }
        config.axioms = axioms;
    }
    Ok(config)
}

/// Parses and validates a characterization document.
pub fn parse_config<S: Scalar>(text: &str) -> Result<CharacterizationConfig<S>, ConfigError> {
    let doc: ConfigDoc<S> = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |span| location(text, span.start));
        ConfigError::Syntax {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    let config = convert(doc, text)?;
    config.check()?;
    Ok(config)
}

/// Serializes `config` with every default spelled out.
pub fn to_toml<S: Scalar>(config: &CharacterizationConfig<S>) -> String {
    let doc = ConfigDoc {
        goals: config
            .goals
            .iter()
            .map(|g| GoalDoc {
                id: g.goal.id.to_string(),
                significance: g.goal.significance,
                initial_likelihood: g.initial_likelihood,
            })
            .collect(),
        rules: config
            .rules
            .iter()
            .map(|r| RuleDoc {
                event: r.event.clone(),
                entity: r.entity.clone(),
                effects: r
                    .effects
                    .iter()
                    .map(|e| match e {
                        Effect::SetLikelihood { goal, value } => EffectDoc::SetLikelihood {
                            goal: goal.to_string(),
                            value: *value,
                        },
                        Effect::AddLikelihood {
                            goal,
                            delta,
                            per,
                            floor,
                            ceiling,
                        } => EffectDoc::AddLikelihood {
                            goal: goal.to_string(),
                            delta: *delta,
                            per: per.clone(),
                            floor: Some(*floor),
                            ceiling: Some(*ceiling),
                        },
                        Effect::SetStatus { goal, status } => EffectDoc::SetStatus {
                            goal: goal.to_string(),
                            status: *status,
                        },
                    })
                    .collect(),
            })
            .collect(),
        desirability: DesirabilityDoc {
            mode: config.appraisal.des.mode,
            entries: config
                .appraisal
                .des
                .entries
                .iter()
                .map(|e| EntryDoc {
                    event: e.event.clone(),
                    entity: e.entity.clone(),
                    goal: e.goal.to_string(),
                    value: e.value,
                })
                .collect(),
        },
        emotion: EmotionDoc {
            history_window: Some(config.history_window),
            decay_constant: Some(config.decay.constant),
            cull_epsilon: Some(config.decay.cull_epsilon),
            axioms: Some(
                config
                    .axioms
                    .pairs()
                    .iter()
                    .map(|(a, b)| [a.as_str().to_string(), b.as_str().to_string()])
                    .collect(),
            ),
            thresholds: EmotionType::ALL
                .iter()
                .map(|&e| (e.as_str().to_string(), config.thresholds.get(e)))
                .collect(),
            decay_rates: EmotionType::ALL
                .iter()
                .map(|&e| (e.as_str().to_string(), config.decay.rate(e)))
                .collect(),
        },
    };
    toml::to_string(&doc).expect("configuration documents always serialize")
}
