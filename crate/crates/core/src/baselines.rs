//! Reference retrievers: Okapi BM25 over node texts, agent-only dense
//! retrieval, tool-only dense retrieval with owner traversal, and standard
//! weighted RRF over the two per-corpus rank lists.
//!
//! Every baseline returns [`RoutedAgent`]s so results are interchangeable with
//! the graph pipeline. In baseline evidence, `base_rank` is the rank in the
//! strategy's own list and `fused_score` is the strategy's own score.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{KnowledgeGraph, NodeType};
use crate::embedding::{node_text, EmbeddingVector, TextOptions};
use crate::error::Result;
use crate::fusion::{fused_order, FusionConfig, ScoredCandidate};
use crate::index::{Candidate, VectorIndex};
use crate::retrieval::{traverse_to_agents, RoutedAgent};
use crate::text::tokenize;

/// Retrieval strategy selectable from configs and the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Dual search, type-weighted fusion and owner traversal.
    #[default]
    Graph,
    /// Dense search over agent texts only.
    AgentOnly,
    /// Dense search over tool texts, mapped to owners.
    ToolOnly,
    /// Okapi BM25 over agent texts by default.
    Bm25,
    /// Weighted RRF over per-corpus ranks.
    Wrrf,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Graph,
        Strategy::AgentOnly,
        Strategy::ToolOnly,
        Strategy::Bm25,
        Strategy::Wrrf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Graph => "graph",
            Strategy::AgentOnly => "agent-only",
            Strategy::ToolOnly => "tool-only",
            Strategy::Bm25 => "bm25",
            Strategy::Wrrf => "wrrf",
        }
    }

    /// Whether the strategy consumes query embeddings.
    pub fn needs_embedding(self) -> bool {
        !matches!(self, Strategy::Bm25)
    }

    /// Caveat attached to reports for strategies that approximate a
    /// retriever whose exact definition is unavailable.
    pub fn note(self) -> Option<&'static str> {
        match self {
            Strategy::AgentOnly => Some("reconstruction: dense retrieval over agent descriptions only"),
            Strategy::Wrrf => Some("reconstruction: weighted RRF over per-corpus ranks"),
            _ => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected graph, agent-only, tool-only, bm25 or wrrf)"))
    }
}

/// Okapi BM25 free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

/// Which node texts the BM25 index covers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bm25Corpus {
    #[default]
    Agents,
    Tools,
    Both,
}

impl FromStr for Bm25Corpus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "agents" => Ok(Bm25Corpus::Agents),
            "tools" => Ok(Bm25Corpus::Tools),
            "both" => Ok(Bm25Corpus::Both),
            other => Err(format!(
                "unknown BM25 corpus `{other}` (expected agents, tools or both)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Bm25Doc {
    node_id: String,
    node_type: NodeType,
    ordinal: usize,
    term_freqs: HashMap<String, usize>,
    len: usize,
}

/// Inverted statistics for Okapi BM25.
///
/// Tokenization lowercases and splits on non-alphanumerics, with no stemming
/// and no stopword list. IDF uses the nonnegative form
/// `ln(1 + (N - df + 0.5) / (df + 0.5))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bm25Index {
    docs: Vec<Bm25Doc>,
    doc_freqs: HashMap<String, usize>,
    avg_len: f64,
    params: Bm25Params,
    corpus: Bm25Corpus,
}

impl Bm25Index {
    /// Indexes the chosen corpus of `graph`, agents before tools.
    pub fn build(graph: &KnowledgeGraph, corpus: Bm25Corpus, params: Bm25Params, opts: &TextOptions) -> Self {
        let mut docs = Vec::new();
        if matches!(corpus, Bm25Corpus::Agents | Bm25Corpus::Both) {
            docs.extend(
                graph
                    .agents()
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.id.clone(), NodeType::Agent, i, node_text(a, opts))),
            );
        }
        if matches!(corpus, Bm25Corpus::Tools | Bm25Corpus::Both) {
            docs.extend(
                graph
                    .tools()
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (t.id.clone(), NodeType::Tool, i, node_text(t, opts))),
            );
        }
        Self::from_typed(docs, params, corpus)
    }

    /// Indexes raw `(id, text)` documents as agent nodes, in order.
    pub fn from_documents<I, S, T>(docs: I, params: Bm25Params) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: AsRef<str>,
    {
        let typed = docs
            .into_iter()
            .enumerate()
            .map(|(i, (id, text))| (id.into(), NodeType::Agent, i, text.as_ref().to_string()))
            .collect();
        Self::from_typed(typed, params, Bm25Corpus::Agents)
    }

    fn from_typed(raw: Vec<(String, NodeType, usize, String)>, params: Bm25Params, corpus: Bm25Corpus) -> Self {
        let mut doc_freqs: HashMap<String, usize> = HashMap::new();
        let docs: Vec<Bm25Doc> = raw
            .into_iter()
            .map(|(node_id, node_type, ordinal, text)| {
                let tokens = tokenize(&text);
                let mut term_freqs: HashMap<String, usize> = HashMap::new();
                for tok in &tokens {
                    *term_freqs.entry(tok.clone()).or_default() += 1;
                }
                for term in term_freqs.keys() {
                    *doc_freqs.entry(term.clone()).or_default() += 1;
                }
                Bm25Doc {
                    node_id,
                    node_type,
                    ordinal,
                    term_freqs,
                    len: tokens.len(),
                }
            })
            .collect();
        let total: usize = docs.iter().map(|d| d.len).sum();
        let avg_len = if docs.is_empty() {
            0.0
        } else {
            total as f64 / docs.len() as f64
        };
        Self {
            docs,
            doc_freqs,
            avg_len,
            params,
            corpus,
        }
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn corpus(&self) -> Bm25Corpus {
        self.corpus
    }

    pub fn avg_doc_len(&self) -> f64 {
        self.avg_len
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.doc_freqs.get(term).copied().unwrap_or(0)
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.docs.len() as f64;
        let df = self.doc_freq(term) as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    fn score_doc(&self, doc: &Bm25Doc, query_terms: &[String]) -> f64 {
        let Bm25Params { k1, b } = self.params;
        let norm = if self.avg_len > 0.0 {
            1.0 - b + b * doc.len as f64 / self.avg_len
        } else {
            1.0
        };
        query_terms
            .iter()
            .map(|term| {
                let tf = doc.term_freqs.get(term).copied().unwrap_or(0) as f64;
                if tf == 0.0 {
                    0.0
                } else {
                    self.idf(term) * tf * (k1 + 1.0) / (tf + k1 * norm)
                }
            })
            .sum()
    }

    /// BM25 score of every document, in index order. Repeated query terms
    /// count once per occurrence.
    pub fn scores(&self, query: &str) -> Vec<f64> {
        let terms = tokenize(query);
        self.docs.iter().map(|d| self.score_doc(d, &terms)).collect()
    }

    /// The `k` best documents as `(node_id, score)`, score descending, ties
    /// by index order. An empty query yields an empty list.
    pub fn top_k(&self, query: &str, k: usize) -> Vec<(String, f64)> {
        let scores = self.scores(query);
        self.ranked_by(query, &scores)
            .into_iter()
            .take(k)
            .map(|i| (self.docs[i].node_id.clone(), scores[i]))
            .collect()
    }

    fn ranked_by(&self, query: &str, scores: &[f64]) -> Vec<usize> {
        if tokenize(query).is_empty() {
            return Vec::new();
        }
        let mut order: Vec<usize> = (0..self.docs.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        order
    }
}

/// Free-function form of [`Bm25Index::top_k`].
pub fn bm25_top_k(index: &Bm25Index, query: &str, k: usize) -> Vec<(String, f64)> {
    index.top_k(query, k)
}

/// BM25 agent routing: documents with a positive score, best first, mapped
/// to their agents and deduplicated to `k`.
pub fn bm25_retrieve(index: &Bm25Index, graph: &KnowledgeGraph, query: &str, k: usize) -> Result<Vec<RoutedAgent>> {
    let scores = index.scores(query);
    let order = index.ranked_by(query, &scores);
    let hits = order
        .into_iter()
        .filter(|&i| scores[i] > 0.0)
        .enumerate()
        .map(|(rank, i)| {
            let doc = &index.docs[i];
            ScoredCandidate {
                candidate: Candidate {
                    node_id: doc.node_id.clone(),
                    node_type: doc.node_type,
                    similarity: scores[i],
                    corpus_rank: rank + 1,
                    ingestion_ordinal: doc.ordinal,
                },
                base_rank: rank + 1,
                fused_score: scores[i],
            }
        });
    traverse_to_agents(graph, hits, k)
}

fn as_own_score(c: Candidate) -> ScoredCandidate {
    ScoredCandidate {
        base_rank: c.corpus_rank,
        fused_score: c.similarity,
        candidate: c,
    }
}

/// Top `k` agents by similarity of their own text.
pub fn agent_only_retrieve(agent_index: &VectorIndex, query: &EmbeddingVector, k: usize) -> Result<Vec<RoutedAgent>> {
    if k == 0 || agent_index.is_empty() {
        return Ok(Vec::new());
    }
    Ok(agent_index
        .top_n(query, k)?
        .into_iter()
        .map(|c| RoutedAgent {
            agent_id: c.node_id.clone(),
            evidence: as_own_score(c),
            step: None,
        })
        .collect())
}

/// Top `n` tools by similarity, mapped to owners and deduplicated to `k`.
pub fn tool_only_retrieve(
    tool_index: &VectorIndex,
    graph: &KnowledgeGraph,
    query: &EmbeddingVector,
    k: usize,
    n: usize,
) -> Result<Vec<RoutedAgent>> {
    if k == 0 || tool_index.is_empty() {
        return Ok(Vec::new());
    }
    let hits = tool_index.top_n(query, n)?.into_iter().map(as_own_score);
    traverse_to_agents(graph, hits, k)
}

/// Weighted RRF over the per-corpus rank lists: a node ranked `r` in its own
/// corpus scores `alpha(type) / (k + r)`. Ties fall back to similarity, then
/// tools first, then ingestion ordinal.
pub fn standard_wrrf_retrieve(
    tool_index: &VectorIndex,
    agent_index: &VectorIndex,
    graph: &KnowledgeGraph,
    query: &EmbeddingVector,
    cfg: &FusionConfig,
    k: usize,
    n: usize,
) -> Result<Vec<RoutedAgent>> {
    cfg.validate()?;
    let mut fused = Vec::new();
    for index in [tool_index, agent_index] {
        if index.is_empty() {
            continue;
        }
        for c in index.top_n(query, n)? {
            let fused_score = crate::fusion::wrrf_score(&[(c.corpus_rank, cfg.alpha(c.node_type))], cfg.k)?;
            fused.push(ScoredCandidate {
                base_rank: c.corpus_rank,
                fused_score,
                candidate: c,
            });
        }
    }
    fused.sort_by(fused_order);
    traverse_to_agents(graph, fused, k)
}

/// Agents whose evidence came through an agent node versus a tool node.
pub fn provenance_counts(agents: &[RoutedAgent]) -> (usize, usize) {
    let via_agent = agents
        .iter()
        .filter(|a| a.evidence.node_type() == NodeType::Agent)
        .count();
    (via_agent, agents.len() - via_agent)
}

/// Distinct agent ids in order of first appearance.
pub fn distinct_agents<'a>(ids: impl IntoIterator<Item = &'a str>) -> Vec<&'a str> {
    let mut seen = HashSet::new();
    ids.into_iter().filter(|id| seen.insert(*id)).collect()
}
