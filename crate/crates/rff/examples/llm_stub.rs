//! The chat-backed adapter end to end without a real model: a local
//! scripted endpoint drives the loop, the session is recorded to a
//! cassette, and the cassette replays to a byte-identical trace with no
//! endpoint at all.
//!
//! ```bash
//! cargo run --example llm_stub
//! ```

use std::sync::Arc;
use std::time::Duration;

use rff::core::EngineConfig;
use rff::engines::run_rff_t;
use rff::game24::{rat, Game24State, Game24Target, NumberSet};
use rff::llm::stub::{StubReply, StubServer};
use rff::llm::{
    Cassette, ChatClient, Game24Llm, LlmConfig, RecordingTransport, ReplayTransport,
    ScriptedTransport, TemplateSet,
};

fn script() -> Vec<&'static str> {
    vec![
        "No, the numbers are far from the goal.",
        "Target: 4 6, because 4 * 6 = 24",
        "Move: 2 * 3 = 6",
        "Yes, the sets are equal.",
        "Answer: 2*3*4",
    ]
}

fn run(client: ChatClient) -> rff::core::SearchTrace {
    let adapter = Game24Llm::new(client, TemplateSet::builtin(), rat(24));
    run_rff_t(
        &adapter,
        Game24State::initial(NumberSet::parse("2 3 4").expect("valid puzzle")),
        Game24Target::root(rat(24)),
        &EngineConfig::new(10, 5),
    )
    .expect("config is valid")
}

fn main() {
    // live loop against a local scripted endpoint, with a rate limit to
    // show the retry path
    let mut replies = vec![StubReply::Status(429, "busy".into())];
    replies.extend(script().into_iter().map(StubReply::content));
    let server = StubServer::start(replies).expect("stub binds");
    let cfg = LlmConfig::game24(server.base_url(), "stub-model")
        .with_backoff_base(Duration::from_millis(1));
    let live = run(ChatClient::over_http(cfg.clone()).expect("client builds"));
    println!("live outcome: {:?}", live.outcome);
    println!("requests served: {}", server.finish().len());

    // record the same conversation to a cassette, then replay it with the
    // network fully out of the loop
    let cassette_path = std::env::temp_dir().join("rff-llm-stub-cassette.json");
    let recording = RecordingTransport::new(
        ScriptedTransport::from_contents(script()),
        cassette_path.clone(),
    );
    let recorded = run(ChatClient::new(cfg.clone(), Arc::new(recording)));

    let replay = ReplayTransport::new(Cassette::load(&cassette_path).expect("cassette saved"));
    let replayed = run(ChatClient::new(cfg, Arc::new(replay)));
    assert_eq!(
        recorded.serialize(),
        replayed.serialize(),
        "cassette replay is byte-identical"
    );
    println!("cassette replay byte-identical: {:?}", replayed.outcome);
    println!("cassette at {}", cassette_path.display());
}
