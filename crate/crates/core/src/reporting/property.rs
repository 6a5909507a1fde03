//! Temporal properties over an emotion timeline.
//!
//! ```text
//! ALWAYS hope complete <= 1
//! NEVER distress complete > 0.5
//! EVENTUALLY fear complete >= 0.8
//! WITHIN 10 50 joy complete > 0
//! ```

use std::fmt;
use std::str::FromStr;

use crate::emotion::{EmotionType, GoalId, Tick};
use crate::reporting::timeline::EmotionTimeline;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparator {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Comparator {
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Eq => lhs == rhs,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
            Comparator::Eq => "==",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub etype: EmotionType,
    pub goal: GoalId,
    pub cmp: Comparator,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceProperty {
    Always(Condition),
    Never(Condition),
    Eventually(Condition),
    Within {
        from: Tick,
        to: Tick,
        cond: Condition,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// `witness` is the first violating tick, when there is one.
    Fails {
        witness: Option<Tick>,
    },
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("property line {line}: {message}")]
pub struct PropertyError {
    pub line: usize,
    pub message: String,
}

pub fn check_property(timeline: &EmotionTimeline, property: &TraceProperty) -> Verdict {
    let cond = property.condition();
    let series = timeline.series(cond.etype, &cond.goal);
    let at = |t: Tick| cond.cmp.holds(series[t as usize], cond.value);
    let first =
        |range: std::ops::Range<Tick>, want: bool| range.into_iter().find(|&t| at(t) == want);
    let n = series.len() as Tick;
    match property {
        TraceProperty::Always(_) => match first(0..n, false) {
            None => Verdict::Holds,
            w => Verdict::Fails { witness: w },
        },
        TraceProperty::Never(_) => match first(0..n, true) {
            None => Verdict::Holds,
            w => Verdict::Fails { witness: w },
        },
        TraceProperty::Eventually(_) => match first(0..n, true) {
            Some(_) => Verdict::Holds,
            None => Verdict::Fails { witness: None },
        },
        TraceProperty::Within { from, to, .. } => {
            let lo = (*from).min(n);
            let hi = to.saturating_add(1).min(n).max(lo);
            match first(lo..hi, true) {
                Some(_) => Verdict::Holds,
                None => Verdict::Fails { witness: None },
            }
        }
    }
}

impl TraceProperty {
    pub fn condition(&self) -> &Condition {
        match self {
            TraceProperty::Always(c)
            | TraceProperty::Never(c)
            | TraceProperty::Eventually(c)
            | TraceProperty::Within { cond: c, .. } => c,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.etype,
            self.goal,
            self.cmp.as_str(),
            self.value
        )
    }
}

impl fmt::Display for TraceProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceProperty::Always(c) => write!(f, "ALWAYS {c}"),
            TraceProperty::Never(c) => write!(f, "NEVER {c}"),
            TraceProperty::Eventually(c) => write!(f, "EVENTUALLY {c}"),
            TraceProperty::Within { from, to, cond } => write!(f, "WITHIN {from} {to} {cond}"),
        }
    }
}

impl FromStr for TraceProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let Some((&op, rest)) = words.split_first() else {
            return Err("empty property".into());
        };
        let tick = |w: &str| {
            w.parse::<Tick>()
                .map_err(|_| format!("expected a tick, found '{w}'"))
        };
        match op.to_ascii_uppercase().as_str() {
            "ALWAYS" => Ok(TraceProperty::Always(condition(rest)?)),
            "NEVER" => Ok(TraceProperty::Never(condition(rest)?)),
            "EVENTUALLY" => Ok(TraceProperty::Eventually(condition(rest)?)),
            "WITHIN" => {
                let [from, to, rest @ ..] = rest else {
                    return Err("WITHIN needs two ticks and a condition".into());
                };
                let (from, to) = (tick(from)?, tick(to)?);
                if from > to {
                    return Err(format!("empty window {from}..{to}"));
                }
                Ok(TraceProperty::Within {
                    from,
                    to,
                    cond: condition(rest)?,
                })
            }
            other => Err(format!("unknown operator '{other}'")),
        }
    }
}

fn condition(words: &[&str]) -> Result<Condition, String> {
    let [etype, goal, cmp, value] = words else {
        return Err("expected '<emotion> <goal> <op> <value>'".into());
    };
    let cmp = match *cmp {
        "<" => Comparator::Lt,
        "<=" => Comparator::Le,
        ">" => Comparator::Gt,
        ">=" => Comparator::Ge,
        "==" | "=" => Comparator::Eq,
        other => return Err(format!("unknown comparator '{other}'")),
    };
    let value: f64 = value
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| format!("bad threshold '{value}'"))?;
    Ok(Condition {
        etype: etype.parse().map_err(|e| format!("{e}"))?,
        goal: GoalId::new(*goal),
        cmp,
        value,
    })
}

/// One property per line; blank lines and `#` comments are skipped.
pub fn parse_properties(text: &str) -> Result<Vec<TraceProperty>, PropertyError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse().map_err(|message| PropertyError {
            line: i + 1,
            message,
        })?);
    }
    Ok(out)
}
