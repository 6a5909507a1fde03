//! An event-driven emotion engine for agents with goals.
//!
//! Beliefs about goal likelihoods change in response to events; appraisal
//! turns those changes into emotions (joy, distress, hope, fear,
//! satisfaction, disappointment) that decay over time. A small grid-world
//! simulator produces event traces, and the reporting layer turns runs
//! into timelines, heat maps and property verdicts.
//!
//! All numeric code is generic over [`Scalar`]; the aliases below fix it
//! to `f64`, with `F32` variants where single precision is useful.

pub mod appraisal;
pub mod bundled;
pub mod characterization;
pub mod cli;
pub mod emotion;
pub mod labsim;
pub mod reporting;
pub mod scalar;
pub mod transition;

pub use scalar::Scalar;

pub type AgentState = emotion::AgentState<f64>;
pub type BeliefState = emotion::BeliefState<f64>;
pub type EmotionState = emotion::EmotionState<f64>;
pub type EmotionInstance = emotion::EmotionInstance<f64>;
pub type EmotionHistory = emotion::EmotionHistory<f64>;
pub type Config = characterization::CharacterizationConfig<f64>;
pub type Engine = transition::Engine<f64>;
pub type StateSnapshot = transition::StateSnapshot<f64>;
pub type DecayParams = transition::DecayParams<f64>;
pub type Thresholds = appraisal::Thresholds<f64>;

pub type ConfigF32 = characterization::CharacterizationConfig<f32>;
pub type EngineF32 = transition::Engine<f32>;
pub type StateSnapshotF32 = transition::StateSnapshot<f32>;

pub use emotion::{EmotionType, GoalId, GoalStatus, Tick};
pub use transition::Event;
