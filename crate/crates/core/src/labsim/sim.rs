use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::level::{Cell, DoorAction, Level, Pos};
use crate::transition::Event;

pub const BUTTON_PRESSED: &str = "button_pressed";
pub const DOOR_OPENED: &str = "door_opened";
pub const DOOR_CLOSED: &str = "door_closed";
pub const FIRE_DAMAGE: &str = "fire_damage";
pub const AGENT_DIED: &str = "agent_died";
pub const LEVEL_COMPLETED: &str = "level_completed";
pub const STEP_CAP: &str = "step_cap";

pub const DEFAULT_STEP_CAP: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Up,
    Left,
    Right,
    Down,
}

impl Dir {
    /// Neighbour order follows row-major order of the neighbour cells.
    pub const ALL: [Dir; 4] = [Dir::Up, Dir::Left, Dir::Right, Dir::Down];

    fn offset(self) -> (isize, isize) {
        match self {
            Dir::Up => (-1, 0),
            Dir::Left => (0, -1),
            Dir::Right => (0, 1),
            Dir::Down => (1, 0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Move(Dir),
    PressButton,
    Wait,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldState {
    pub pos: Pos,
    pub health: u32,
    pub door_open: BTreeMap<String, bool>,
    pub pressed: BTreeSet<String>,
    pub visited: BTreeSet<Pos>,
    pub tick: u64,
    pub alive: bool,
    pub completed: bool,
}

impl WorldState {
    pub fn new(level: &Level) -> Self {
        WorldState {
            pos: level.start,
            health: level.max_health,
            door_open: level.door_open.clone(),
            pressed: BTreeSet::new(),
            visited: BTreeSet::from([level.start]),
            tick: 0,
            alive: true,
            completed: false,
        }
    }

    pub fn passable(&self, level: &Level, pos: Pos) -> bool {
        match level.cell(pos) {
            Cell::Wall => false,
            Cell::Door(id) => self.door_open.get(id).copied().unwrap_or(false),
            _ => true,
        }
    }

    fn neighbour(&self, level: &Level, pos: Pos, dir: Dir) -> Option<Pos> {
        let (dr, dc) = dir.offset();
        level
            .in_bounds(pos.row as isize + dr, pos.col as isize + dc)
            .filter(|&p| self.passable(level, p))
    }

    /// Whether pressing `button` would open at least one closed door.
    fn makes_progress(&self, level: &Level, button: &str) -> bool {
        level.wiring.get(button).is_some_and(|wires| {
            wires.iter().any(|w| {
                matches!(w.action, DoorAction::Open | DoorAction::Toggle)
                    && !self.door_open.get(&w.door).copied().unwrap_or(false)
            })
        })
    }

    fn button_here<'l>(&self, level: &'l Level) -> Option<&'l str> {
        match level.cell(self.pos) {
            Cell::Button(id) => Some(id.as_str()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("illegal move {dir:?} from {from}")]
    IllegalMove { from: Pos, dir: Dir },
    #[error("no button at {0}")]
    NoButton(Pos),
    #[error("the run is already over")]
    Finished,
}

/// Breadth-first distances and first steps from `from` over passable cells.
/// Cells are discovered in row-major neighbour order, so the first path found
/// to any cell is the canonical one.
fn bfs(world: &WorldState, level: &Level, from: Pos) -> BTreeMap<Pos, (usize, Option<Dir>)> {
    let mut seen = BTreeMap::new();
    seen.insert(from, (0usize, None));
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        let (d, first) = seen[&p];
        for dir in Dir::ALL {
            if let Some(n) = world.neighbour(level, p, dir) {
                if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(n) {
                    e.insert((d + 1, first.or(Some(dir))));
                    queue.push_back(n);
                }
            }
        }
    }
    seen
}

/// The scripted explorer.
///
/// Targets, by priority: a reachable unpressed button that would open a
/// closed door, then any unvisited reachable cell, then a reachable exit.
/// Within a priority the nearest target wins, ties broken by row-major order.
pub fn explore_policy_step(world: &WorldState, level: &Level) -> Action {
    if let Some(id) = world.button_here(level) {
        if !world.pressed.contains(id) && world.makes_progress(level, id) {
            return Action::PressButton;
        }
    }
    let reach = bfs(world, level, world.pos);
    let nearest = |pred: &dyn Fn(Pos) -> bool| {
        reach
            .iter()
            .filter(|(p, _)| pred(**p))
            .min_by_key(|(p, (d, _))| (*d, **p))
            .map(|(_, (_, first))| *first)
    };

    let button_target = |p: Pos| match level.cell(p) {
        Cell::Button(id) => !world.pressed.contains(id) && world.makes_progress(level, id),
        _ => false,
    };
    let unvisited = |p: Pos| !world.visited.contains(&p);
    let exit = |p: Pos| *level.cell(p) == Cell::Exit;

    for pred in [&button_target as &dyn Fn(Pos) -> bool, &unvisited, &exit] {
        if let Some(first) = nearest(pred) {
            return first.map_or(Action::Wait, Action::Move);
        }
    }
    Action::Wait
}

/// Performs one world step. The first event is always the tick.
pub fn apply_action(
    world: &WorldState,
    action: Action,
    level: &Level,
) -> Result<(WorldState, Vec<Event>), SimError> {
    if !world.alive || world.completed {
        return Err(SimError::Finished);
    }
    let mut next = world.clone();
    next.tick += 1;
    let t = next.tick;
    let mut events = vec![Event::tick(t)];
    match action {
        Action::Wait => {}
        Action::Move(dir) => {
            let to = world
                .neighbour(level, world.pos, dir)
                .ok_or(SimError::IllegalMove {
                    from: world.pos,
                    dir,
                })?;
            next.pos = to;
            next.visited.insert(to);
            match level.cell(to) {
                Cell::Fire => {
                    next.health = next.health.saturating_sub(level.fire_damage);
                    events.push(
                        Event::new(FIRE_DAMAGE, t)
                            .with("amount", level.fire_damage)
                            .with("health", next.health),
                    );
                    if next.health == 0 {
                        next.alive = false;
                        events.push(Event::new(AGENT_DIED, t));
                    }
                }
                Cell::Exit => {
                    next.completed = true;
                    events.push(Event::new(LEVEL_COMPLETED, t));
                }
                _ => {}
            }
        }
        Action::PressButton => {
            let id = world
                .button_here(level)
                .ok_or(SimError::NoButton(world.pos))?;
            next.pressed.insert(id.to_string());
            events.push(Event::new(BUTTON_PRESSED, t).with("entity", id));
            for wire in level.wiring.get(id).into_iter().flatten() {
                let open = next.door_open.get(&wire.door).copied().unwrap_or(false);
                let want = match wire.action {
                    DoorAction::Open => true,
                    DoorAction::Close => false,
                    DoorAction::Toggle => !open,
                };
                if want != open {
                    next.door_open.insert(wire.door.clone(), want);
                    let kind = if want { DOOR_OPENED } else { DOOR_CLOSED };
                    events.push(Event::new(kind, t).with("entity", &wire.door));
                }
            }
        }
    }
    Ok((next, events))
}

/// One emitted event with the agent's position at emission.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub event: Event,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    Died,
    StepCap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventTrace {
    pub start: Pos,
    pub entries: Vec<TraceEntry>,
}

impl EventTrace {
    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.entries.iter().map(|e| &e.event)
    }

    pub fn count(&self, kind: &str) -> usize {
        self.events().filter(|e| e.kind == kind).count()
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.entries
            .iter()
            .rev()
            .map(|e| &e.event)
            .find_map(|e| match e.kind.as_str() {
                LEVEL_COMPLETED => Some(Outcome::Completed),
                AGENT_DIED => Some(Outcome::Died),
                STEP_CAP => Some(Outcome::StepCap),
                _ => None,
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimOptions {
    pub step_cap: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            step_cap: DEFAULT_STEP_CAP,
        }
    }
}

/// Runs the explorer until the level is completed, the agent dies, or the
/// step cap is reached.
pub fn simulate(level: &Level, options: &SimOptions) -> EventTrace {
    let mut world = WorldState::new(level);
    let mut entries = Vec::new();
    while world.alive && !world.completed {
        if world.tick >= options.step_cap {
            entries.push(TraceEntry {
                event: Event::new(STEP_CAP, world.tick),
                pos: world.pos,
            });
            break;
        }
        let action = explore_policy_step(&world, level);
        let (next, events) =
            apply_action(&world, action, level).expect("the explorer only chooses legal actions");
        world = next;
        entries.extend(events.into_iter().map(|event| TraceEntry {
            event,
            pos: world.pos,
        }));
    }
    EventTrace {
        start: level.start,
        entries,
    }
}
