mod common;

use occpx::appraisal::{
    activate_distress, activate_fear, activate_hope, activate_joy, NewEmotion, Thresholds,
};
use occpx::bundled;
use occpx::characterization::{parse_config, to_toml};
use occpx::emotion::{
    BeliefState, EmotionInstance, EmotionState, EmotionType, Goal, GoalId, GoalStatus,
};
use occpx::labsim::{simulate, EventTrace, Level, SimOptions};
use occpx::reporting::{
    build_heatmap, build_timeline, check_property, EmotionTimeline, Layer, TimelineRow,
    TraceProperty, Verdict,
};
use occpx::transition::{merge, DecayParams};
use occpx::{Config, Engine, Event, StateSnapshot};
use proptest::prelude::*;

use common::{random_config, random_events, rng, ConfigOptions};

fn random_run(seed: u64, max_len: usize) -> (Config, Vec<Event>, Vec<StateSnapshot>) {
    let mut r = rng(seed);
    let config = random_config(&mut r, &ConfigOptions::default());
    let events = random_events(&mut r, max_len);
    let snaps = Engine::new(config.clone()).unwrap().run(&events).unwrap();
    (config, events, snaps)
}

fn emotion() -> impl Strategy<Value = EmotionType> {
    (0usize..6).prop_map(|i| EmotionType::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decay_matches_closed_form(
        peak in 0.0f64..=1.0,
        rate in 1e-4f64..0.5,
        c in -1.0f64..-1e-3,
        elapsed in 0u64..5_000,
        etype in emotion(),
    ) {
        let mut p = DecayParams::<f64> { constant: c, ..DecayParams::default() };
        p.set_rate(etype, rate);
        let w = p.intensity(etype, peak, elapsed);
        let expected = peak * (c * rate * elapsed as f64).exp();
        prop_assert!((w - expected).abs() <= 1e-12);
        prop_assert!(p.intensity(etype, peak, elapsed + 1) <= w);
    }

    #[test]
    fn ticks_only_decay(seed in any::<u64>()) {
        let (_, events, snaps) = random_run(seed, 80);
        for (i, e) in events.iter().enumerate() {
            if !e.is_tick() {
                continue;
            }
            let (before, after) = (&snaps[i], &snaps[i + 1]);
            prop_assert_eq!(after.time, before.time + 1);
            prop_assert_eq!(&after.beliefs, &before.beliefs);
            for inst in after.emotions.iter() {
                let old = before.emotions.get(inst.etype, &inst.goal);
                prop_assert!(old.is_some(), "tick created {:?}", inst);
                prop_assert!(inst.intensity <= old.unwrap().intensity);
                prop_assert_eq!(inst.t0, old.unwrap().t0);
            }
        }
    }

    #[test]
    fn non_tick_events_keep_the_clock(seed in any::<u64>()) {
        let (_, events, snaps) = random_run(seed, 80);
        for (i, e) in events.iter().enumerate().filter(|(_, e)| !e.is_tick()) {
            prop_assert_eq!(snaps[i + 1].time, snaps[i].time, "{:?}", e);
        }
    }

    #[test]
    fn terminal_goals_are_absorbing(seed in any::<u64>()) {
        let (config, _, snaps) = random_run(seed, 120);
        for spec in &config.goals {
            let id = &spec.goal.id;
            let mut terminal: Option<GoalStatus> = None;
            for s in &snaps {
                let b = s.beliefs.get(id).unwrap();
                if let Some(t) = terminal {
                    prop_assert_eq!(b.status, t);
                }
                if b.status.is_terminal() {
                    prop_assert!(b.likelihood.is_none());
                    terminal = Some(b.status);
                } else {
                    let v = b.likelihood.unwrap();
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn intensities_stay_in_unit_interval(seed in any::<u64>()) {
        let (_, _, snaps) = random_run(seed, 120);
        for s in &snaps {
            for inst in s.emotions.iter() {
                prop_assert!(inst.intensity > 0.0 && inst.intensity <= 1.0);
                prop_assert!(inst.intensity <= inst.peak && inst.t0 <= s.time);
            }
        }
    }

    #[test]
    fn stronger_instance_wins(old in 0.011f64..=1.0, new in 0.0f64..=1.0, etype in emotion()) {
        let g = GoalId::new("g");
        let decayed: EmotionState<f64> = std::iter::once(EmotionInstance {
            etype,
            goal: g.clone(),
            intensity: old,
            t0: 1,
            peak: old,
        })
        .collect();
        let fresh = [NewEmotion { etype, goal: g.clone(), intensity: new, time: 9 }];
        let merged = merge(&fresh, &decayed, &occpx::emotion::AxiomSet::default());
        let inst = merged.get(etype, &g).unwrap();
        prop_assert_eq!(inst.intensity, old.max(new));
        prop_assert_eq!(inst.t0, if new >= old { 9 } else { 1 });
    }

    #[test]
    fn guards_are_disjoint(
        v in 0.0f64..=1.0,
        v_new in prop_oneof![Just(0.0), Just(1.0), 0.0f64..=1.0],
        des in -1.0f64..=1.0,
        x in 0.01f64..=1.0,
    ) {
        let goal = Goal { id: GoalId::new("g"), significance: x };
        let mut before = BeliefState::new();
        before.insert_goal(goal.id.clone(), v);
        let mut after = BeliefState::new();
        after.insert_goal(goal.id.clone(), v_new);
        let t = Thresholds::default();
        let joy = activate_joy(&after, des, &goal, &t).is_some();
        let hope = activate_hope(&before, &after, &goal, &t).is_some();
        let fear = activate_fear(&before, &after, &goal, &t).is_some();
        let distress = activate_distress(&after, des, &goal, &t).is_some();
        prop_assert!(!(joy && hope) && !(fear && distress) && !(hope && fear));
    }

    #[test]
    fn config_round_trips_through_toml(seed in any::<u64>()) {
        let mut r = rng(seed);
        let config = random_config(&mut r, &ConfigOptions::default());
        let text = to_toml(&config);
        let back: Config = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &config);
        prop_assert_eq!(to_toml(&back), text);
    }

    #[test]
    fn mangled_configs_never_panic(cuts in prop::collection::vec((any::<prop::sample::Index>(), any::<char>()), 1..6)) {
        let mut text: Vec<char> = bundled::SETUP2_CONFIG.chars().collect();
        for (at, ch) in cuts {
            let i = at.index(text.len());
            if ch.is_ascii_digit() { text.remove(i); } else { text.insert(i, ch); }
        }
        let text: String = text.into_iter().collect();
        if let Ok(c) = parse_config::<f64>(&text) {
            prop_assert!(Engine::new(c).is_ok());
        }
    }

    #[test]
    fn mangled_levels_never_panic(cuts in prop::collection::vec((any::<prop::sample::Index>(), "[#. ~SX1A\n]"), 1..6)) {
        let mut text = bundled::SETUP1_LEVEL.to_string();
        for (at, s) in cuts {
            let mut i = at.index(text.len());
            while !text.is_char_boundary(i) { i -= 1; }
            text.replace_range(i..(i + 1).min(text.len()), &s);
        }
        if let Ok(level) = Level::parse(&text) {
            let trace = simulate(&level, &SimOptions { step_cap: 400 });
            prop_assert!(!trace.entries.is_empty());
        }
    }

    #[test]
    fn property_checker_matches_brute_force(
        values in prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..=1.0], 1..40),
        bound in 0.0f64..=1.0,
        from in 0u64..45,
        len in 0u64..20,
    ) {
        let g = GoalId::new("g");
        let mut rows: Vec<TimelineRow> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.0)
            .map(|(t, v)| TimelineRow { time: t as u64, etype: EmotionType::Fear, goal: g.clone(), intensity: *v })
            .collect();
        rows.push(TimelineRow { time: values.len() as u64 - 1, etype: EmotionType::Joy, goal: g.clone(), intensity: 0.5 });
        let tl = EmotionTimeline::from_rows(rows);
        let cond = format!("fear g >= {bound}");
        let hits: Vec<u64> = (0..values.len() as u64).filter(|&t| values[t as usize] >= bound).collect();
        let misses: Vec<u64> = (0..values.len() as u64).filter(|&t| values[t as usize] < bound).collect();
        let check = |s: String| check_property(&tl, &s.parse::<TraceProperty>().unwrap());

        prop_assert_eq!(check(format!("ALWAYS {cond}")),
            misses.first().map_or(Verdict::Holds, |&t| Verdict::Fails { witness: Some(t) }));
        prop_assert_eq!(check(format!("NEVER {cond}")),
            hits.first().map_or(Verdict::Holds, |&t| Verdict::Fails { witness: Some(t) }));
        prop_assert_eq!(check(format!("EVENTUALLY {cond}")).holds(), !hits.is_empty());
        let to = from + len;
        prop_assert_eq!(check(format!("WITHIN {from} {to} {cond}")).holds(),
            hits.iter().any(|t| (from..=to).contains(t)));
    }
}

fn setup2() -> (Level, EventTrace, Vec<StateSnapshot>) {
    let level = Level::parse(bundled::SETUP2_LEVEL).unwrap();
    let trace = simulate(&level, &SimOptions::default());
    let config: Config = parse_config(bundled::SETUP2_CONFIG).unwrap();
    let events: Vec<Event> = trace.events().cloned().collect();
    let snaps = Engine::new(config).unwrap().run(&events).unwrap();
    (level, trace, snaps)
}

#[test]
fn heatmap_only_grows_as_the_trace_extends() {
    let (level, trace, snaps) = setup2();
    let prefix = |k: usize| {
        let t = EventTrace {
            start: trace.start,
            entries: trace.entries[..k].to_vec(),
        };
        build_heatmap(&level, &t, &snaps[..=k])
    };
    let mut prev = prefix(0);
    for k in (5..=trace.entries.len())
        .step_by(5)
        .chain([trace.entries.len()])
    {
        let next = prefix(k);
        for p in next.positions() {
            for e in EmotionType::ALL {
                match (prev.value(p, e), next.value(p, e)) {
                    (Some(a), Some(b)) => assert!(b >= a, "{p} {e} fell from {a} to {b}"),
                    (Some(_), None) => panic!("{p} lost its value"),
                    _ => {}
                }
            }
        }
        prev = next;
    }
}

#[test]
fn images_are_deterministic() {
    let (level, trace, snaps) = setup2();
    let a = build_heatmap(&level, &trace, &snaps);
    let b = build_heatmap(&level, &trace, &snaps);
    for layer in [Layer::Positive, Layer::Negative] {
        assert_eq!(a.render_ppm(layer), b.render_ppm(layer));
    }
    assert_ne!(a.render_ppm(Layer::Positive), a.render_ppm(Layer::Negative));
}

#[test]
fn single_precision_tracks_double() {
    let level = Level::parse(bundled::SETUP1_LEVEL).unwrap();
    let trace = simulate(&level, &SimOptions::default());
    let events: Vec<Event> = trace.events().cloned().collect();
    let wide = Engine::new(parse_config::<f64>(bundled::SETUP1_CONFIG).unwrap())
        .unwrap()
        .run(&events)
        .unwrap();
    let narrow = occpx::EngineF32::new(parse_config::<f32>(bundled::SETUP1_CONFIG).unwrap())
        .unwrap()
        .run(&events)
        .unwrap();
    let (tw, tn) = (build_timeline(&wide), build_timeline(&narrow));
    assert_eq!(tw.keys(), tn.keys());
    for (e, g) in tw.keys() {
        for (a, b) in tw.series(e, &g).iter().zip(tn.series(e, &g)) {
            assert!((a - b).abs() < 1e-4, "{e} {g}: {a} vs {b}");
        }
    }
}
