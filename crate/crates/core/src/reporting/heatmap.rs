use std::fmt::Write as _;

use crate::emotion::EmotionType;
use crate::labsim::{Cell, EventTrace, Level, Pos};
use crate::scalar::Scalar;
use crate::transition::StateSnapshot;

pub type Rgb = [u8; 3];

pub const WALL_COLOR: Rgb = [255, 255, 255];
pub const UNEXPLORED_COLOR: Rgb = [128, 128, 128];
pub const NO_EMOTION_COLOR: Rgb = [0, 0, 0];

/// Color ramp endpoints `(weak, strong)` per emotion type.
pub const RAMPS: [(Rgb, Rgb); 6] = [
    // joy: bright red
    ([200, 0, 0], [255, 0, 0]),
    // distress: purple
    ([80, 0, 96], [200, 0, 255]),
    // hope: dark red
    ([64, 0, 0], [160, 0, 0]),
    // fear: orange to yellow
    ([255, 120, 0], [255, 255, 0]),
    // satisfaction: yellow
    ([160, 160, 0], [255, 255, 0]),
    // disappointment: blue
    ([0, 0, 96], [64, 64, 255]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    Wall,
    Unexplored,
    NoEmotion,
    Valued,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    Positive,
    Negative,
}

impl Layer {
    pub fn contains(self, etype: EmotionType) -> bool {
        etype.is_positive() == (self == Layer::Positive)
    }
}

/// Running maximum of each emotion type's intensity per grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatMap {
    rows: usize,
    cols: usize,
    walls: Vec<bool>,
    visited: Vec<bool>,
    values: Vec<[f64; 6]>,
}

/// Attribute every recorded state to the cell the agent occupied when the
/// state was reached. The initial state belongs to the start cell; state
/// `i + 1` belongs to the position of trace entry `i`.
pub fn build_heatmap<S: Scalar>(
    level: &Level,
    trace: &EventTrace,
    snapshots: &[StateSnapshot<S>],
) -> HeatMap {
    let (rows, cols) = (level.rows(), level.cols());
    let mut map = HeatMap {
        rows,
        cols,
        walls: level
            .positions()
            .map(|p| matches!(level.cell(p), Cell::Wall))
            .collect(),
        visited: vec![false; rows * cols],
        values: vec![[0.0; 6]; rows * cols],
    };
    let positions = std::iter::once(trace.start).chain(trace.entries.iter().map(|e| e.pos));
    for (pos, snap) in positions.zip(snapshots) {
        map.observe(pos, snap);
    }
    map
}

impl HeatMap {
    fn index(&self, pos: Pos) -> usize {
        pos.row * self.cols + pos.col
    }

    fn observe<S: Scalar>(&mut self, pos: Pos, snap: &StateSnapshot<S>) {
        let i = self.index(pos);
        self.visited[i] = true;
        for inst in snap.emotions.iter() {
            let slot = &mut self.values[i][inst.etype.index()];
            *slot = slot.max(inst.intensity.as_f64());
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn class(&self, pos: Pos) -> CellClass {
        let i = self.index(pos);
        if self.walls[i] {
            CellClass::Wall
        } else if !self.visited[i] {
            CellClass::Unexplored
        } else if self.values[i].iter().all(|&v| v == 0.0) {
            CellClass::NoEmotion
        } else {
            CellClass::Valued
        }
    }

    /// Peak intensity of `etype` seen at `pos`; `None` for walls and
    /// unexplored cells.
    pub fn value(&self, pos: Pos, etype: EmotionType) -> Option<f64> {
        match self.class(pos) {
            CellClass::Wall | CellClass::Unexplored => None,
            _ => Some(self.values[self.index(pos)][etype.index()]),
        }
    }

    /// Strongest emotion of the layer at `pos`, earliest type on ties.
    pub fn dominant(&self, pos: Pos, layer: Layer) -> Option<(EmotionType, f64)> {
        let mut best: Option<(EmotionType, f64)> = None;
        for etype in EmotionType::ALL.into_iter().filter(|&e| layer.contains(e)) {
            let v = self.value(pos, etype)?;
            if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
                best = Some((etype, v));
            }
        }
        best
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| Pos::new(r, c)))
    }

    pub fn color(&self, pos: Pos, layer: Layer) -> Rgb {
        match self.class(pos) {
            CellClass::Wall => WALL_COLOR,
            CellClass::Unexplored => UNEXPLORED_COLOR,
            _ => match self.dominant(pos, layer) {
                None => NO_EMOTION_COLOR,
                Some((etype, v)) => ramp(RAMPS[etype.index()], v),
            },
        }
    }

    /// Binary PPM, one pixel per cell.
    pub fn render_ppm(&self, layer: Layer) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.cols, self.rows).into_bytes();
        out.reserve(self.rows * self.cols * 3);
        for pos in self.positions() {
            out.extend_from_slice(&self.color(pos, layer));
        }
        out
    }

    /// One row per cell: class and the peak of each emotion type.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,class");
        for e in EmotionType::ALL {
            let _ = write!(out, ",{e}");
        }
        out.push('\n');
        for pos in self.positions() {
            let class = match self.class(pos) {
                CellClass::Wall => "wall",
                CellClass::Unexplored => "unexplored",
                CellClass::NoEmotion => "none",
                CellClass::Valued => "valued",
            };
            let _ = write!(out, "{},{},{class}", pos.row, pos.col);
            for e in EmotionType::ALL {
                match self.value(pos, e) {
                    Some(v) => {
                        let _ = write!(out, ",{v:.6}");
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn ramp((lo, hi): (Rgb, Rgb), w: f64) -> Rgb {
    let w = w.clamp(0.0, 1.0);
    std::array::from_fn(|i| {
        let (a, b) = (f64::from(lo[i]), f64::from(hi[i]));
        (a + (b - a) * w).round() as u8
    })
}
