mod support;

use gymv_core::grammar::{Command, Direction, Grammar};
use gymv_core::wrappers::{history_len, WrapperConfig};
use gymv_core::{AgentMap, Registry, Seed, SegmentTag, SOLO_AGENT};
use proptest::prelude::*;
use support::laws;

fn solo(a: &str) -> AgentMap<String> {
    AgentMap::from([(SOLO_AGENT.to_string(), a.to_string())])
}

#[test]
fn presentation_wrappers_change_nothing_the_env_decides() {
    let reg = Registry::builtin();
    for id in reg.ids() {
        laws::presentation_invariance(&reg, &id, 50).unwrap();
    }
}

#[test]
fn history_lists_min_t_k_minus_one_pairs() {
    let reg = Registry::builtin();
    for id in gymv_core::multi::IDS {
        for k in [0, 3, 5] {
            for seed in 0..5 {
                laws::history_counts(&reg, id, k, seed).unwrap();
            }
        }
    }
}

#[test]
fn tool_calls_do_not_advance_the_env() {
    let reg = Registry::builtin();
    for id in reg.ids() {
        for seed in 0..5 {
            laws::tool_neutrality(&reg, &id, seed).unwrap();
        }
    }
}

#[test]
fn tool_budget_resets_after_a_real_step() {
    let reg = Registry::builtin();
    let spec = reg.spec("frozenlake", 0).unwrap().with_wrapper(WrapperConfig::Tool {
        name: "arithmetic".into(),
        budget: 1,
    });
    let mut env = reg.make(&spec, Seed(0)).unwrap();
    env.reset().unwrap();
    let first = env.step(&solo("TOOL: 1+1")).unwrap();
    assert_eq!(
        first.observations[SOLO_AGENT].segment(SegmentTag::ToolResult),
        Some("2")
    );
    assert_eq!(first.info[SOLO_AGENT]["tool_call"], true);
    let second = env.step(&solo("tool: 1+1")).unwrap();
    assert!(second.observations[SOLO_AGENT]
        .segment(SegmentTag::ToolResult)
        .unwrap()
        .contains("budget"));
    let bad = env.step(&solo("TOOL: 1/0"));
    assert!(bad.is_ok());
    env.step(&solo("ponder")).unwrap();
    assert_eq!(env.steps(), 1);
    let again = env.step(&solo("TOOL: 6*7")).unwrap();
    assert_eq!(
        again.observations[SOLO_AGENT].segment(SegmentTag::ToolResult),
        Some("42")
    );
}

#[test]
fn parser_examples() {
    let g = Grammar::Direction;
    assert_eq!(g.extract_last("I will go up"), Some(Command::Move(Direction::Up)));
    assert_eq!(
        g.extract_last("left... no, right"),
        Some(Command::Move(Direction::Right))
    );
    assert_eq!(g.extract_last("zzz qqq"), None);
}

#[test]
fn action_parser_rewrites_free_text_and_keeps_the_raw_action() {
    let reg = Registry::builtin();
    let bare = reg.spec("frozenlake", 1).unwrap();
    let parsed = bare.clone().with_wrapper(WrapperConfig::ActionParser);
    let mut a = reg.make(&bare, Seed(2)).unwrap();
    let mut b = reg.make(&parsed, Seed(2)).unwrap();
    a.reset().unwrap();
    b.reset().unwrap();
    for (canon, free) in [
        ("down", "hmm, I think down"),
        ("right", "left... no, right"),
        ("up", "UP!"),
    ] {
        if a.is_done() {
            break;
        }
        let ra = a.step(&solo(canon)).unwrap();
        let rb = b.step(&solo(free)).unwrap();
        assert_eq!(ra.rewards, rb.rewards);
        assert_eq!(a.state_hash(), b.state_hash());
        assert_eq!(rb.info[SOLO_AGENT]["raw_action"], free);
        assert_eq!(rb.info[SOLO_AGENT]["action"], canon);
    }
    // without the parser, free text is an invalid no-op
    let mut c = reg.make(&bare, Seed(2)).unwrap();
    c.reset().unwrap();
    let h = c.state_hash();
    let r = c.step(&solo("hmm, I think down")).unwrap();
    assert_eq!(c.state_hash(), h);
    assert!(r.info[SOLO_AGENT].contains_key("invalid_action"));
}

#[test]
fn rules_text_is_verbatim_and_image_is_unchanged() {
    let reg = Registry::builtin();
    for id in reg.ids() {
        let info = reg.info(&id).unwrap();
        let bare = reg.spec(&id, 0).unwrap();
        let on = bare.clone().with_wrapper(WrapperConfig::Rules { enabled: true });
        let off = bare.clone().with_wrapper(WrapperConfig::Rules { enabled: false });
        let o0 = reg.make(&bare, Seed(5)).unwrap().reset().unwrap();
        let o1 = reg.make(&on, Seed(5)).unwrap().reset().unwrap();
        let o2 = reg.make(&off, Seed(5)).unwrap().reset().unwrap();
        for (agent, o) in &o1 {
            assert_eq!(o.segment(SegmentTag::Rules), Some(info.rules.as_str()), "{id}");
            assert_eq!(o.image, o0[agent].image);
            assert!(o.prompt().starts_with(&info.rules));
            assert!(!o2[agent].has(SegmentTag::Rules));
        }
    }
}

#[test]
fn caption_matches_the_text_state() {
    let reg = Registry::builtin();
    let spec = reg.spec("sokoban", 0).unwrap().with_wrapper(WrapperConfig::Caption);
    let mut env = reg.make(&spec, Seed(8)).unwrap();
    let obs = env.reset().unwrap();
    let cap = obs[SOLO_AGENT].segment(SegmentTag::Caption).unwrap().to_string();
    assert_eq!(Some(cap.clone()), env.base().caption());
    // the caption encodes the grid row by row
    let side = cap.lines().count();
    assert!(cap.lines().all(|l| l.chars().count() == side));
    assert_eq!(cap.matches('@').count() + cap.matches('+').count(), 1);
    let r = env.step(&solo("up")).unwrap();
    assert_eq!(
        r.observations[SOLO_AGENT]
            .segment(SegmentTag::Caption)
            .map(str::to_string),
        env.base().caption()
    );
}

#[test]
fn caption_on_a_captionless_env_is_a_config_error() {
    let reg = Registry::builtin();
    for id in reg.ids() {
        let base = reg.make_base(&reg.spec(&id, 0).unwrap(), Seed(0)).unwrap();
        let res = reg.make(&reg.spec(&id, 0).unwrap().with_wrapper(WrapperConfig::Caption), Seed(0));
        assert_eq!(base.caption().is_some(), res.is_ok(), "{id}");
    }
}

proptest! {
    #[test]
    fn history_len_is_min_t_k_minus_one(t in 0usize..1000, k in 0u32..50) {
        let n = history_len(t, k);
        prop_assert_eq!(n, t.min(k.saturating_sub(1) as usize));
        prop_assert!(n <= t);
    }

    #[test]
    fn extract_last_takes_the_final_direction(words in proptest::collection::vec(0usize..6, 1..12)) {
        let vocab = ["up", "down", "left", "right", "maybe", "then"];
        let text = words.iter().map(|&i| vocab[i]).collect::<Vec<_>>().join(" ");
        let want = words.iter().rev().find(|&&i| i < 4).map(|&i| Command::Move(Direction::from_word(vocab[i]).unwrap()));
        prop_assert_eq!(Grammar::Direction.extract_last(&text), want);
    }
}
