//! ASCII level files.
//!
//! ```text
//! [map]
//! #########
//! #@..1.A.X#
//! #########
//!
//! [legend]
//! 1 = button b1
//! A = door d1 closed
//!
//! [wiring]
//! b1 -> open d1
//!
//! [settings]
//! max_health 100
//! fire_damage 8
//! ```
//!
//! Map glyphs: `#` wall, `.` floor, `f` fire, `@` start, `X` exit. Any other
//! glyph must be declared in the legend as a button or a door. A door glyph
//! may cover several cells; a button glyph exactly one.

use std::collections::BTreeMap;
use std::fmt;

/// Grid coordinate. Ordering is row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl Pos {
    pub fn new(row: usize, col: usize) -> Self {
        Pos { row, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Wall,
    Floor,
    Fire,
    Start,
    Exit,
    Button(String),
    Door(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoorAction {
    Open,
    Close,
    Toggle,
}

impl DoorAction {
    fn parse(word: &str) -> Option<Self> {
        match word {
            "open" => Some(DoorAction::Open),
            "close" => Some(DoorAction::Close),
            "toggle" => Some(DoorAction::Toggle),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wire {
    pub action: DoorAction,
    pub door: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    pub start: Pos,
    pub buttons: BTreeMap<String, Pos>,
    pub doors: BTreeMap<String, Vec<Pos>>,
    /// Initial open state per door.
    pub door_open: BTreeMap<String, bool>,
    pub wiring: BTreeMap<String, Vec<Wire>>,
    pub max_health: u32,
    pub fire_damage: u32,
    source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LevelError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> LevelError {
    LevelError {
        line,
        message: message.into(),
    }
}

pub const DEFAULT_MAX_HEALTH: u32 = 100;
pub const DEFAULT_FIRE_DAMAGE: u32 = 8;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Map,
    Legend,
    Wiring,
    Settings,
}

enum Glyph {
    Button(String),
    Door(String, bool),
}

impl Level {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, pos: Pos) -> &Cell {
        &self.cells[pos.row * self.cols + pos.col]
    }

    pub fn in_bounds(&self, row: isize, col: isize) -> Option<Pos> {
        (row >= 0 && col >= 0 && (row as usize) < self.rows && (col as usize) < self.cols)
            .then(|| Pos::new(row as usize, col as usize))
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| Pos::new(r, c)))
    }

    pub fn exits(&self) -> impl Iterator<Item = Pos> + '_ {
        self.positions().filter(|&p| *self.cell(p) == Cell::Exit)
    }

    /// The text this level was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn parse(text: &str) -> Result<Level, LevelError> {
        let mut section = Section::None;
        let mut map: Vec<(usize, Vec<char>)> = Vec::new();
        let mut legend: BTreeMap<char, (usize, Glyph)> = BTreeMap::new();
        let mut wiring_lines: Vec<(usize, String, Vec<Wire>)> = Vec::new();
        let mut max_health = DEFAULT_MAX_HEALTH;
        let mut fire_damage = DEFAULT_FIRE_DAMAGE;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end();
            let trimmed = line.trim();
            if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = match name {
                    "map" => Section::Map,
                    "legend" => Section::Legend,
                    "wiring" => Section::Wiring,
                    "settings" => Section::Settings,
                    other => return Err(err(line_no, format!("unknown section [{other}]"))),
                };
                continue;
            }
            if section == Section::Map {
                if trimmed.is_empty() {
                    continue;
                }
                map.push((line_no, line.chars().collect()));
                continue;
            }
            if trimmed.is_empty() || trimmed.starts_with("//") || trimmed.starts_with(';') {
                continue;
            }
            match section {
                Section::None => {
                    return Err(err(line_no, "content outside of a section"));
                }
                Section::Map => unreachable!(),
                Section::Legend => {
                    let (glyph, rest) = trimmed
                        .split_once('=')
                        .ok_or_else(|| err(line_no, "legend lines look like `1 = button b1`"))?;
                    let mut chars = glyph.trim().chars();
                    let (Some(ch), None) = (chars.next(), chars.next()) else {
                        return Err(err(line_no, "legend glyph must be a single character"));
                    };
                    if "#.f@X ".contains(ch) {
                        return Err(err(line_no, format!("glyph '{ch}' is reserved")));
                    }
                    let words: Vec<&str> = rest.split_whitespace().collect();
                    let entry = match words.as_slice() {
                        ["button", id] => Glyph::Button(id.to_string()),
                        ["door", id] => Glyph::Door(id.to_string(), false),
                        ["door", id, "closed"] => Glyph::Door(id.to_string(), false),
                        ["door", id, "open"] => Glyph::Door(id.to_string(), true),
                        _ => {
                            return Err(err(
                                line_no,
                                "expected `button <id>` or `door <id> [open|closed]`",
                            ))
                        }
                    };
                    if legend.insert(ch, (line_no, entry)).is_some() {
                        return Err(err(line_no, format!("glyph '{ch}' declared twice")));
                    }
                }
                Section::Wiring => {
                    let (button, rest) = trimmed
                        .split_once("->")
                        .ok_or_else(|| err(line_no, "wiring lines look like `b1 -> open d1`"))?;
                    let mut wires = Vec::new();
                    for part in rest.split(',') {
                        let words: Vec<&str> = part.split_whitespace().collect();
                        let [verb, door] = words.as_slice() else {
                            return Err(err(
                                line_no,
                                format!("bad wiring action '{}'", part.trim()),
                            ));
                        };
                        let action = DoorAction::parse(verb)
                            .ok_or_else(|| err(line_no, format!("unknown door action '{verb}'")))?;
                        wires.push(Wire {
                            action,
                            door: door.to_string(),
                        });
                    }
                    wiring_lines.push((line_no, button.trim().to_string(), wires));
                }
                Section::Settings => {
                    let words: Vec<&str> = trimmed.split_whitespace().collect();
                    let [key, value] = words.as_slice() else {
                        return Err(err(line_no, "settings lines look like `max_health 100`"));
                    };
                    let value: u32 = value
                        .parse()
                        .map_err(|_| err(line_no, format!("'{value}' is not a whole number")))?;
                    match *key {
                        "max_health" => max_health = value,
                        "fire_damage" => fire_damage = value,
                        other => return Err(err(line_no, format!("unknown setting '{other}'"))),
                    }
                }
            }
        }

        let Some((first_line, first)) = map.first() else {
            return Err(err(1, "missing [map] section"));
        };
        let cols = first.len();
        let first_line = *first_line;
        let rows = map.len();
        let mut cells = Vec::with_capacity(rows * cols);
        let mut start = None;
        let mut buttons = BTreeMap::new();
        let mut doors: BTreeMap<String, Vec<Pos>> = BTreeMap::new();
        let mut door_open = BTreeMap::new();
        for (r, (line_no, chars)) in map.iter().enumerate() {
            if chars.len() != cols {
                return Err(err(
                    *line_no,
                    format!(
                        "map is not rectangular: row has {} cells, expected {cols}",
                        chars.len()
                    ),
                ));
            }
            for (c, &ch) in chars.iter().enumerate() {
                let pos = Pos::new(r, c);
                let cell = match ch {
                    '#' => Cell::Wall,
                    '.' => Cell::Floor,
                    'f' => Cell::Fire,
                    'X' => Cell::Exit,
                    '@' => {
                        if start.replace(pos).is_some() {
                            return Err(err(*line_no, "multiple starts '@'"));
                        }
                        Cell::Start
                    }
                    other => match legend.get(&other) {
                        Some((_, Glyph::Button(id))) => {
                            if buttons.insert(id.clone(), pos).is_some() {
                                return Err(err(*line_no, format!("button {id} placed twice")));
                            }
                            Cell::Button(id.clone())
                        }
                        Some((_, Glyph::Door(id, open))) => {
                            doors.entry(id.clone()).or_default().push(pos);
                            door_open.insert(id.clone(), *open);
                            Cell::Door(id.clone())
                        }
                        None => {
                            return Err(err(*line_no, format!("undeclared map glyph '{other}'")))
                        }
                    },
                };
                cells.push(cell);
            }
        }
        if let Some((line, _)) = legend.values().find(|(_, g)| match g {
            Glyph::Button(id) => !buttons.contains_key(id),
            Glyph::Door(id, _) => !doors.contains_key(id),
        }) {
            return Err(err(*line, "legend glyph does not appear on the map"));
        }
        let start = start.ok_or_else(|| err(first_line, "map has no start '@'"))?;
        if !cells.contains(&Cell::Exit) {
            return Err(err(first_line, "map has no exit 'X'"));
        }

        let mut wiring: BTreeMap<String, Vec<Wire>> = BTreeMap::new();
        for (line_no, button, wires) in wiring_lines {
            if !buttons.contains_key(&button) {
                return Err(err(
                    line_no,
                    format!("wiring source '{button}' is not a button on the map"),
                ));
            }
            if let Some(w) = wires.iter().find(|w| !doors.contains_key(&w.door)) {
                return Err(err(
                    line_no,
                    format!("wiring target '{}' is not a door on the map", w.door),
                ));
            }
            wiring.entry(button).or_default().extend(wires);
        }

        Ok(Level {
            rows,
            cols,
            cells,
            start,
            buttons,
            doors,
            door_open,
            wiring,
            max_health,
            fire_damage,
            source: text.to_string(),
        })
    }
}
