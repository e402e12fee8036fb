//! Seeded synthetic catalogs, queries and datasets.
//!
//! Node texts draw from a small set of topical vocabularies so that a lexical
//! embedder produces structured, non-trivial rankings. Output is a pure
//! function of the arguments.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{AgentNode, KnowledgeGraph, ToolNode};
use crate::eval::EvalQuery;

const TOPICS: [(&str, &[&str]); 12] = [
    (
        "files",
        &[
            "file",
            "directory",
            "path",
            "read",
            "write",
            "folder",
            "disk",
            "archive",
        ],
    ),
    (
        "web",
        &["web", "search", "page", "browser", "url", "crawl", "link", "html"],
    ),
    (
        "weather",
        &["weather", "forecast", "temperature", "rain", "wind", "climate", "storm"],
    ),
    (
        "maps",
        &["map", "route", "directions", "location", "distance", "geocode", "place"],
    ),
    (
        "finance",
        &["stock", "price", "market", "currency", "exchange", "portfolio", "quote"],
    ),
    (
        "calendar",
        &["calendar", "event", "meeting", "schedule", "reminder", "date", "invite"],
    ),
    (
        "mail",
        &["email", "message", "inbox", "send", "reply", "attachment", "contact"],
    ),
    (
        "code",
        &["code", "repository", "commit", "branch", "issue", "pull", "review"],
    ),
    (
        "travel",
        &["flight", "hotel", "booking", "airport", "trip", "rental", "reservation"],
    ),
    (
        "media",
        &["video", "image", "audio", "music", "playlist", "photo", "stream"],
    ),
    ("data", &["database", "query", "table", "sql", "row", "schema", "index"]),
    (
        "news",
        &["news", "article", "headline", "feed", "topic", "summary", "source"],
    ),
];

const VERBS: [&str; 10] = [
    "get", "list", "find", "create", "update", "delete", "fetch", "search", "convert", "check",
];

const FILLER: [&str; 8] = ["quickly", "the", "for", "with", "using", "all", "latest", "my"];

fn phrase(rng: &mut ChaCha8Rng, words: &[&str], len: usize) -> String {
    (0..len)
        .map(|_| *words.choose(rng).expect("vocabulary is nonempty"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A catalog with `agents` agents and `tools` tools, every tool owned by
/// some agent. When `tools >= agents` every agent owns at least one tool.
pub fn catalog(agents: usize, tools: usize, seed: u64) -> KnowledgeGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let agent_topics: Vec<usize> = (0..agents).map(|_| rng.random_range(0..TOPICS.len())).collect();
    let agent_nodes: Vec<AgentNode> = agent_topics
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let (topic, words) = TOPICS[t];
            let len = rng.random_range(0..6);
            let description = if len == 0 {
                String::new()
            } else {
                phrase(&mut rng, words, len)
            };
            AgentNode::new(format!("a{i}"), format!("{topic}-{i}"), description)
        })
        .collect();

    let mut owners: Vec<usize> = (0..tools).map(|j| if j < agents { j } else { 0 }).collect();
    for owner in owners.iter_mut().skip(agents) {
        *owner = rng.random_range(0..agents.max(1));
    }
    owners.shuffle(&mut rng);
    let tool_nodes: Vec<ToolNode> = if agents == 0 {
        Vec::new()
    } else {
        owners
            .iter()
            .enumerate()
            .map(|(j, &owner)| {
                // A minority of tools drift into another topic.
                let t = if rng.random_bool(0.2) {
                    rng.random_range(0..TOPICS.len())
                } else {
                    agent_topics[owner]
                };
                let words = TOPICS[t].1;
                let verb = VERBS.choose(&mut rng).expect("verbs are nonempty");
                let noun = words.choose(&mut rng).expect("vocabulary is nonempty");
                let len = rng.random_range(2..7);
                ToolNode::new(
                    format!("a{owner}.t{j}"),
                    format!("{verb}_{noun}"),
                    phrase(&mut rng, words, len),
                    format!("a{owner}"),
                )
            })
            .collect()
    };
    KnowledgeGraph::new(agent_nodes, tool_nodes).expect("synthetic catalog is valid")
}

/// `count` random queries mixing topical words and filler.
pub fn queries(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut words = Vec::new();
            for _ in 0..rng.random_range(1..3) {
                let (_, topic) = TOPICS.choose(&mut rng).expect("topics are nonempty");
                let len = rng.random_range(1..4);
                words.push(phrase(&mut rng, topic, len));
            }
            if rng.random_bool(0.5) {
                words.push(phrase(&mut rng, &FILLER, 1));
            }
            words.join(" ")
        })
        .collect()
}

/// A dataset over `graph`: each question targets one to three agents, with
/// one step per target built from the target's tool texts.
pub fn dataset(graph: &KnowledgeGraph, count: usize, seed: u64) -> Vec<EvalQuery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if graph.agents().is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|q| {
            let n_targets = rng.random_range(1..=3.min(graph.agents().len()));
            let targets: Vec<&AgentNode> = graph.agents().choose_multiple(&mut rng, n_targets).collect();
            let steps: Vec<String> = targets
                .iter()
                .map(|agent| {
                    let tools: Vec<&ToolNode> = graph.tools_of(&agent.id).collect();
                    let source = match tools.choose(&mut rng) {
                        Some(tool) => format!("{} {}", tool.name.replace('_', " "), tool.description),
                        None => format!("{} {}", agent.name, agent.description),
                    };
                    let words: Vec<&str> = source.split_whitespace().collect();
                    let len = rng.random_range(2..5);
                    phrase(&mut rng, &words, len)
                })
                .collect();
            EvalQuery {
                id: format!("q{q}"),
                question: steps.join(" then "),
                relevant_agents: targets.iter().map(|a| a.id.clone()).collect(),
                relevant_agents_per_step: Some(targets.iter().map(|a| vec![a.id.clone()]).collect()),
                steps,
            }
        })
        .collect()
}
