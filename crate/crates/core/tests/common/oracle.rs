//! Reference model of the transition system, written directly from the
//! model's definitions. It keeps an unbounded log of every recorded state and
//! recovers episode peaks from that log, so it shares no state handling with
//! the engine.

use std::collections::BTreeMap;

use occpx::appraisal::DesirabilityMode;
use occpx::characterization::Effect;
use occpx::emotion::{EmotionType, GoalStatus, Tick};
use occpx::{Config, Event, StateSnapshot};

pub type Key = (EmotionType, String);

#[derive(Clone, Debug, PartialEq)]
pub struct Belief {
    pub status: GoalStatus,
    pub likelihood: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct OracleState {
    pub time: Tick,
    pub beliefs: BTreeMap<String, Belief>,
    /// `(intensity, trigger time)`.
    pub emotions: BTreeMap<Key, (f64, Tick)>,
    log: Vec<(Tick, BTreeMap<Key, f64>)>,
}

fn record(s: &mut OracleState) {
    let entry = s
        .emotions
        .iter()
        .map(|(k, (w, _))| (k.clone(), *w))
        .collect();
    s.log.push((s.time, entry));
}

fn remembered(s: &OracleState, window: Tick, key: &Key) -> bool {
    let horizon = s.time.saturating_sub(window);
    s.log
        .iter()
        .filter(|(t, _)| *t >= horizon)
        .any(|(_, m)| m.contains_key(key))
}

fn peak_from_log(s: &OracleState, key: &Key, t0: Tick) -> f64 {
    s.log
        .iter()
        .rev()
        .find(|(t, m)| *t == t0 && m.contains_key(key))
        .map(|(_, m)| m[key])
        .expect("an active episode was recorded at its trigger time")
}

/// `(etype, intensity)` candidates, before merging.
type Triggers = Vec<(EmotionType, String, f64)>;

fn resolve(config: &Config, triggers: Triggers) -> Triggers {
    let mut kept: Triggers = Vec::new();
    for t in triggers {
        kept.retain(|k| !(k.1 == t.1 && config.axioms.excludes(k.0, t.0)));
        kept.push(t);
    }
    kept
}

fn merge(
    config: &Config,
    s: &mut OracleState,
    decayed: BTreeMap<Key, (f64, Tick)>,
    triggers: Triggers,
) {
    let triggers = resolve(config, triggers);
    let mut out = BTreeMap::new();
    for (key, old) in &decayed {
        let hit = triggers
            .iter()
            .any(|(e, g, _)| g == &key.1 && (*e == key.0 || config.axioms.excludes(*e, key.0)));
        if !hit {
            out.insert(key.clone(), *old);
        }
    }
    for (e, g, w) in triggers {
        let key = (e, g);
        let w = w.min(1.0);
        match decayed.get(&key) {
            Some(old) if old.0 > w => {
                out.insert(key, *old);
            }
            _ => {
                out.insert(key, (w, s.time));
            }
        }
    }
    s.emotions = out;
}

pub fn initial(config: &Config) -> OracleState {
    let mut s = OracleState::default();
    let mut triggers = Vec::new();
    for spec in &config.goals {
        let id = spec.goal.id.to_string();
        let v = spec.initial_likelihood;
        let x = spec.goal.significance;
        s.beliefs.insert(
            id.clone(),
            Belief {
                status: GoalStatus::Proceeding,
                likelihood: Some(v),
            },
        );
        let hope = v * x - config.thresholds.get(EmotionType::Hope);
        let fear = (1.0 - v) * x - config.thresholds.get(EmotionType::Fear);
        if hope > 0.0 {
            triggers.push((EmotionType::Hope, id.clone(), hope));
        }
        if fear > 0.0 {
            triggers.push((EmotionType::Fear, id, fear));
        }
    }
    merge(config, &mut s, BTreeMap::new(), triggers);
    record(&mut s);
    s
}

fn decayed(config: &Config, s: &OracleState, now: Tick) -> BTreeMap<Key, (f64, Tick)> {
    let mut out = BTreeMap::new();
    for (key, &(_, t0)) in &s.emotions {
        let peak = peak_from_log(s, key, t0);
        let rate = config.decay.rate(key.0);
        let w = peak * (config.decay.constant * rate * (now - t0) as f64).exp();
        if w >= config.decay.cull_epsilon && w > 0.0 {
            out.insert(key.clone(), (w, t0));
        }
    }
    out
}

fn beliefs_after(config: &Config, s: &OracleState, event: &Event) -> BTreeMap<String, Belief> {
    let mut k = s.beliefs.clone();
    for rule in &config.rules {
        if rule.event != event.kind {
            continue;
        }
        if let Some(id) = &rule.entity {
            if event.payload.get("entity") != Some(id) {
                continue;
            }
        }
        for effect in &rule.effects {
            let b = k
                .get_mut(effect.goal().as_str())
                .expect("generated rules name real goals");
            if b.status != GoalStatus::Proceeding {
                continue;
            }
            match effect {
                Effect::SetLikelihood { value, .. } => b.likelihood = Some(value.clamp(0.0, 1.0)),
                Effect::AddLikelihood {
                    delta,
                    per,
                    floor,
                    ceiling,
                    ..
                } => {
                    let scale = match per {
                        None => 1.0,
                        Some(f) => match event.payload.get(f).and_then(|x| x.parse::<f64>().ok()) {
                            Some(n) => n,
                            None => continue,
                        },
                    };
                    let v = b.likelihood.unwrap_or(0.0);
                    let d = delta * scale;
                    let mut n = v + d;
                    if d < 0.0 {
                        n = n.max(v.min(*floor));
                    } else {
                        n = n.min(v.max(*ceiling));
                    }
                    b.likelihood = Some(n.clamp(0.0, 1.0));
                }
                Effect::SetStatus { status, .. } => b.status = (*status).into(),
            }
        }
    }
    k
}

fn des(
    config: &Config,
    event: &Event,
    goal: &str,
    v: Option<f64>,
    v_new: Option<f64>,
    x: f64,
) -> f64 {
    let d = &config.appraisal.des;
    match d.mode {
        DesirabilityMode::Table => {
            let mut generic = None;
            for e in d
                .entries
                .iter()
                .filter(|e| e.event == event.kind && e.goal.as_str() == goal)
            {
                match &e.entity {
                    Some(id) if event.payload.get("entity") == Some(id) => {
                        return e.value.clamp(-1.0, 1.0)
                    }
                    Some(_) => {}
                    None => {
                        if generic.is_none() {
                            generic = Some(e.value.clamp(-1.0, 1.0));
                        }
                    }
                }
            }
            generic.unwrap_or(0.0)
        }
        DesirabilityMode::DeltaScaled => match (v, v_new) {
            (Some(a), Some(b)) => ((b - a) * x).clamp(-1.0, 1.0),
            _ => 0.0,
        },
    }
}

/// Emotions the event triggers, in evaluation order.
pub fn triggers(
    config: &Config,
    s: &OracleState,
    event: &Event,
    after: &BTreeMap<String, Belief>,
) -> Triggers {
    let thr = |e| config.thresholds.get(e);
    let window = config.history_window;
    let mut out: Triggers = Vec::new();
    for spec in &config.goals {
        let g = spec.goal.id.to_string();
        let x = spec.goal.significance;
        let before = &s.beliefs[&g];
        let now = &after[&g];
        let (v, vn) = (before.likelihood, now.likelihood);
        let d = des(config, event, &g, v, vn, x);
        let mut mine: Vec<(EmotionType, f64)> = Vec::new();
        if vn == Some(1.0) && d > 0.0 {
            mine.push((EmotionType::Joy, d - thr(EmotionType::Joy)));
        }
        if vn == Some(0.0) && d < 0.0 {
            mine.push((EmotionType::Distress, -d - thr(EmotionType::Distress)));
        }
        if let (Some(v), Some(vn)) = (v, vn) {
            if v < vn && vn < 1.0 {
                mine.push((EmotionType::Hope, vn * x - thr(EmotionType::Hope)));
            }
            if 0.0 < vn && vn < v {
                mine.push((EmotionType::Fear, (1.0 - vn) * x - thr(EmotionType::Fear)));
            }
        }
        mine.retain(|(_, w)| *w > 0.0);
        let hoped = remembered(s, window, &(EmotionType::Hope, g.clone()));
        let seen = |e: EmotionType, mine: &[(EmotionType, f64)]| {
            remembered(s, window, &(e, g.clone())) || mine.iter().any(|(m, _)| *m == e)
        };
        if now.status == GoalStatus::Achieved && hoped && seen(EmotionType::Joy, &mine) {
            let w = x - thr(EmotionType::Satisfaction);
            if w > 0.0 {
                mine.push((EmotionType::Satisfaction, w));
            }
        }
        if now.status == GoalStatus::Failed && hoped && seen(EmotionType::Distress, &mine) {
            let w = x - thr(EmotionType::Disappointment);
            if w > 0.0 {
                mine.push((EmotionType::Disappointment, w));
            }
        }
        out.extend(mine.into_iter().map(|(e, w)| (e, g.clone(), w.min(1.0))));
    }
    out
}

pub fn step(config: &Config, s: &mut OracleState, event: &Event) {
    if event.kind == "tick" {
        s.time += 1;
        s.emotions = decayed(config, s, s.time);
    } else {
        let after = beliefs_after(config, s, event);
        let trig = triggers(config, s, event, &after);
        let dec = decayed(config, s, s.time);
        merge(config, s, dec, trig);
        s.beliefs = after;
        for b in s.beliefs.values_mut() {
            if b.status != GoalStatus::Proceeding {
                b.likelihood = None;
            }
        }
    }
    record(s);
}

/// Batch evaluation: the state reached from `s0` after `events`.
pub fn run(config: &Config, events: &[Event]) -> OracleState {
    let mut s = initial(config);
    for e in events {
        step(config, &mut s, e);
    }
    s
}

/// Largest absolute difference between a snapshot and an oracle state, or
/// `None` when their structure differs.
pub fn distance(snap: &StateSnapshot, s: &OracleState) -> Option<f64> {
    if snap.time != s.time
        || snap.beliefs.len() != s.beliefs.len()
        || snap.emotions.len() != s.emotions.len()
    {
        return None;
    }
    let mut worst: f64 = 0.0;
    for (id, b) in snap.beliefs.iter() {
        let o = s.beliefs.get(id.as_str())?;
        if o.status != b.status {
            return None;
        }
        match (b.likelihood, o.likelihood) {
            (Some(x), Some(y)) => worst = worst.max((x - y).abs()),
            (None, None) => {}
            _ => return None,
        }
    }
    for inst in snap.emotions.iter() {
        let &(w, t0) = s.emotions.get(&(inst.etype, inst.goal.to_string()))?;
        if t0 != inst.t0 {
            return None;
        }
        worst = worst.max((w - inst.intensity).abs());
    }
    Some(worst)
}
