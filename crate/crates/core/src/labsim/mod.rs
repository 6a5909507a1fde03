//! A small grid world with buttons, doors and fire hazards, explored by a
//! scripted agent whose perceptions become the engine's event trace.

mod level;
mod sim;

pub use level::{
    Cell, DoorAction, Level, LevelError, Pos, Wire, DEFAULT_FIRE_DAMAGE, DEFAULT_MAX_HEALTH,
};
pub use sim::{
    apply_action, explore_policy_step, simulate, Action, Dir, EventTrace, Outcome, SimError,
    SimOptions, TraceEntry, WorldState, AGENT_DIED, BUTTON_PRESSED, DEFAULT_STEP_CAP, DOOR_CLOSED,
    DOOR_OPENED, FIRE_DAMAGE, LEVEL_COMPLETED, STEP_CAP,
};

/// Every event kind the simulator emits.
pub const EVENT_VOCABULARY: &[&str] = &[
    crate::transition::TICK,
    BUTTON_PRESSED,
    DOOR_OPENED,
    DOOR_CLOSED,
    FIRE_DAMAGE,
    AGENT_DIED,
    LEVEL_COMPLETED,
    STEP_CAP,
];
