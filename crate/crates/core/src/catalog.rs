//! Agent/tool catalog: manifest ingestion, the bipartite graph, persistence.
//!
//! A catalog is a bipartite graph `G = (agents, tools, edges)` where every
//! tool carries exactly one ownership edge to its parent agent. The graph is
//! validated on construction and immutable afterwards. Ingestion order is kept
//! for both node sets; it is the stable secondary ordering used for
//! tie-breaking everywhere downstream.
//!
//! # Manifest format
//!
//! A manifest is JSON, either a single document or one record per line
//! (JSON Lines). Accepted top-level shapes:
//!
//! - an array of agent records;
//! - an object `{"agents": [...], "tools": [...]}` where the optional flat
//!   `tools` array carries tools that name their parent through `agent`;
//! - a single agent record, or a stream of agent records (JSON Lines).
//!
//! An agent record is `{"id"?, "name", "description"?, "metadata"?, "tools"?}`
//! and each nested tool is `{"id"?, "name", "description"?, "schema"?}`.
//! `inputSchema` and `input_schema` are accepted as aliases of `schema`; a
//! non-string schema is stored as compact JSON text. Records without ids get
//! `agent:<name>` and `tool:<agent-name>/<tool-name>`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Version written into persisted graph files.
pub const GRAPH_FORMAT_VERSION: u32 = 1;

/// The two node types of the bipartite graph.
///
/// The derived ordering puts `Tool` before `Agent`; consolidation uses it to
/// break exact similarity ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeType {
    Tool,
    Agent,
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeType::Tool => "tool",
            NodeType::Agent => "agent",
        })
    }
}

/// An executable agent (MCP server).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentNode {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl AgentNode {
    pub fn new(id: impl Into<String>, name: impl Into<String>, description: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            description: description.into(),
            metadata: BTreeMap::new(),
        }
    }
}

/// A single tool, owned by exactly one agent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolNode {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub parent_agent_id: String,
    /// Parameter schema rendered as text. Not embedded unless requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_text: Option<String>,
}

impl ToolNode {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        description: impl Into<String>,
        parent_agent_id: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            description: description.into(),
            parent_agent_id: parent_agent_id.into(),
            schema_text: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{source_name}: record {record}{}: {message}", .name.as_deref().map(|n| format!(" (`{n}`)")).unwrap_or_default())]
    Parse {
        source_name: String,
        /// Zero-based record position in the manifest.
        record: usize,
        name: Option<String>,
        message: String,
    },
    #[error("duplicate agent id `{0}`")]
    DuplicateAgent(String),
    #[error("duplicate tool id `{0}`")]
    DuplicateTool(String),
    #[error("id `{0}` is used by both an agent and a tool")]
    CrossTypeId(String),
    #[error("{node_type} `{id}` has an empty {field}")]
    EmptyField {
        node_type: NodeType,
        id: String,
        field: &'static str,
    },
    #[error("orphan tool `{tool_id}`: parent agent `{agent_id}` does not exist")]
    OrphanTool { tool_id: String, agent_id: String },
    #[error("unknown {node_type} id `{id}`")]
    UnknownNode { id: String, node_type: NodeType },
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: unsupported graph format version {found} (this build reads {expected})", .path.display())]
    VersionMismatch { path: PathBuf, found: u32, expected: u32 },
    #[error("{}: malformed graph file: {message}", .path.display())]
    Malformed { path: PathBuf, message: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphData {
    agents: Vec<AgentNode>,
    tools: Vec<ToolNode>,
}

/// Validated bipartite graph of agents and tools.
///
/// Equality compares the node lists, so it is sensitive to ingestion order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct KnowledgeGraph {
    agents: Vec<AgentNode>,
    tools: Vec<ToolNode>,
    agent_pos: HashMap<String, usize>,
    tool_pos: HashMap<String, usize>,
    /// Tool ordinal -> owning agent ordinal.
    owner: Vec<usize>,
    agent_tools: Vec<Vec<usize>>,
}

impl PartialEq for KnowledgeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.agents == other.agents && self.tools == other.tools
    }
}

impl Eq for KnowledgeGraph {}

impl TryFrom<GraphData> for KnowledgeGraph {
    type Error = CatalogError;

    fn try_from(data: GraphData) -> Result<Self, Self::Error> {
        KnowledgeGraph::new(data.agents, data.tools)
    }
}

impl From<KnowledgeGraph> for GraphData {
    fn from(graph: KnowledgeGraph) -> Self {
        GraphData {
            agents: graph.agents,
            tools: graph.tools,
        }
    }
}

impl Default for KnowledgeGraph {
    fn default() -> Self {
        Self::empty()
    }
}

impl KnowledgeGraph {
    pub fn empty() -> Self {
        Self {
            agents: Vec::new(),
            tools: Vec::new(),
            agent_pos: HashMap::new(),
            tool_pos: HashMap::new(),
            owner: Vec::new(),
            agent_tools: Vec::new(),
        }
    }

    /// Validates the node sets and derives the ownership map.
    pub fn new(agents: Vec<AgentNode>, tools: Vec<ToolNode>) -> Result<Self, CatalogError> {
        let mut agent_pos = HashMap::with_capacity(agents.len());
        for (i, agent) in agents.iter().enumerate() {
            if agent.id.is_empty() {
                return Err(CatalogError::EmptyField {
                    node_type: NodeType::Agent,
                    id: agent.name.clone(),
                    field: "id",
                });
            }
            if agent.name.trim().is_empty() {
                return Err(CatalogError::EmptyField {
                    node_type: NodeType::Agent,
                    id: agent.id.clone(),
                    field: "name",
                });
            }
            if agent_pos.insert(agent.id.clone(), i).is_some() {
                return Err(CatalogError::DuplicateAgent(agent.id.clone()));
            }
        }

        let mut tool_pos = HashMap::with_capacity(tools.len());
        let mut owner = Vec::with_capacity(tools.len());
        let mut agent_tools = vec![Vec::new(); agents.len()];
        for (i, tool) in tools.iter().enumerate() {
            if tool.id.is_empty() {
                return Err(CatalogError::EmptyField {
                    node_type: NodeType::Tool,
                    id: tool.name.clone(),
                    field: "id",
                });
            }
            if tool.name.trim().is_empty() {
                return Err(CatalogError::EmptyField {
                    node_type: NodeType::Tool,
                    id: tool.id.clone(),
                    field: "name",
                });
            }
            if agent_pos.contains_key(&tool.id) {
                return Err(CatalogError::CrossTypeId(tool.id.clone()));
            }
            if tool_pos.insert(tool.id.clone(), i).is_some() {
                return Err(CatalogError::DuplicateTool(tool.id.clone()));
            }
            let Some(&parent) = agent_pos.get(&tool.parent_agent_id) else {
                return Err(CatalogError::OrphanTool {
                    tool_id: tool.id.clone(),
                    agent_id: tool.parent_agent_id.clone(),
                });
            };
            owner.push(parent);
            agent_tools[parent].push(i);
        }

        Ok(Self {
            agents,
            tools,
            agent_pos,
            tool_pos,
            owner,
            agent_tools,
        })
    }

    /// Agents in ingestion order.
    pub fn agents(&self) -> &[AgentNode] {
        &self.agents
    }

    /// Tools in ingestion order.
    pub fn tools(&self) -> &[ToolNode] {
        &self.tools
    }

    /// Number of ownership edges; always equal to the tool count.
    pub fn edge_count(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty() && self.tools.is_empty()
    }

    pub fn agent(&self, id: &str) -> Option<&AgentNode> {
        self.agent_pos.get(id).map(|&i| &self.agents[i])
    }

    pub fn tool(&self, id: &str) -> Option<&ToolNode> {
        self.tool_pos.get(id).map(|&i| &self.tools[i])
    }

    /// Ingestion ordinal of a node within its own corpus.
    pub fn ordinal(&self, id: &str, node_type: NodeType) -> Option<usize> {
        match node_type {
            NodeType::Agent => self.agent_pos.get(id).copied(),
            NodeType::Tool => self.tool_pos.get(id).copied(),
        }
    }

    /// Maps a node to the agent that executes it: identity for agents,
    /// the parent agent for tools.
    pub fn owner_of(&self, node_id: &str, node_type: NodeType) -> Result<&str, CatalogError> {
        let unknown = || CatalogError::UnknownNode {
            id: node_id.to_string(),
            node_type,
        };
        match node_type {
            NodeType::Agent => self.agent(node_id).map(|a| a.id.as_str()).ok_or_else(unknown),
            NodeType::Tool => self
                .tool_pos
                .get(node_id)
                .map(|&i| self.agents[self.owner[i]].id.as_str())
                .ok_or_else(unknown),
        }
    }

    /// Owning agent of the tool at `tool_ordinal`.
    pub fn owner_by_ordinal(&self, tool_ordinal: usize) -> &AgentNode {
        &self.agents[self.owner[tool_ordinal]]
    }

    /// Tools owned by `agent_id`, in ingestion order.
    pub fn tools_of(&self, agent_id: &str) -> impl Iterator<Item = &ToolNode> + '_ {
        self.agent_pos
            .get(agent_id)
            .map(|&a| self.agent_tools[a].as_slice())
            .unwrap_or_default()
            .iter()
            .map(|&t| &self.tools[t])
    }

    /// `(tool id, agent id)` pairs in tool ingestion order.
    pub fn ownership_edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.tools
            .iter()
            .zip(&self.owner)
            .map(|(t, &a)| (t.id.as_str(), self.agents[a].id.as_str()))
    }

    /// Resolves an agent reference given either as an id or as a unique name.
    pub fn resolve_agent(&self, reference: &str) -> Option<&AgentNode> {
        if let Some(agent) = self.agent(reference) {
            return Some(agent);
        }
        let mut by_name = self.agents.iter().filter(|a| a.name == reference);
        match (by_name.next(), by_name.next()) {
            (Some(a), None) => Some(a),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Manifest ingestion
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct AgentRecord {
    #[serde(default)]
    id: Option<String>,
    name: String,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    metadata: BTreeMap<String, Value>,
    #[serde(default)]
    tools: Vec<ToolRecord>,
}

#[derive(Debug, Deserialize)]
struct ToolRecord {
    #[serde(default)]
    id: Option<String>,
    name: String,
    #[serde(default)]
    description: Option<String>,
    #[serde(default, alias = "inputSchema", alias = "input_schema")]
    schema: Option<Value>,
    /// Parent reference; required for flat tools, must match when nested.
    #[serde(default, alias = "agent_id", alias = "parent_agent_id")]
    agent: Option<String>,
}

fn value_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn record_name(value: &Value) -> Option<String> {
    value.get("name").and_then(Value::as_str).map(str::to_string)
}

/// Parses manifest text into a validated graph. `source_name` is used in
/// error messages.
pub fn parse_manifest(source_name: &str, content: &str) -> Result<KnowledgeGraph, CatalogError> {
    let parse_err = |record: usize, name: Option<String>, message: String| CatalogError::Parse {
        source_name: source_name.to_string(),
        record,
        name,
        message,
    };

    let mut values = Vec::new();
    for (i, item) in serde_json::Deserializer::from_str(content)
        .into_iter::<Value>()
        .enumerate()
    {
        values.push(item.map_err(|e| parse_err(i, None, e.to_string()))?);
    }

    let (agent_values, flat_tool_values) = match values.as_slice() {
        [Value::Array(items)] => (items.clone(), Vec::new()),
        [Value::Object(obj)] if obj.contains_key("agents") => {
            let agents = match &obj["agents"] {
                Value::Array(items) => items.clone(),
                _ => return Err(parse_err(0, None, "`agents` must be an array".into())),
            };
            let tools = match obj.get("tools") {
                None | Some(Value::Null) => Vec::new(),
                Some(Value::Array(items)) => items.clone(),
                Some(_) => return Err(parse_err(0, None, "`tools` must be an array".into())),
            };
            (agents, tools)
        }
        _ => (values, Vec::new()),
    };

    let mut agents = Vec::with_capacity(agent_values.len());
    let mut tools = Vec::new();
    for (i, value) in agent_values.into_iter().enumerate() {
        let name = record_name(&value);
        let record: AgentRecord =
            serde_json::from_value(value).map_err(|e| parse_err(i, name.clone(), e.to_string()))?;
        let agent_id = record.id.clone().unwrap_or_else(|| format!("agent:{}", record.name));
        for tool in record.tools {
            if let Some(parent) = &tool.agent {
                if parent != &agent_id {
                    return Err(parse_err(
                        i,
                        name,
                        format!(
                            "nested tool `{}` names parent `{parent}` but is listed under `{agent_id}`",
                            tool.name
                        ),
                    ));
                }
            }
            tools.push(make_tool(tool, &agent_id, &record.name));
        }
        agents.push(AgentNode {
            id: agent_id,
            name: record.name,
            description: record.description.unwrap_or_default(),
            metadata: record
                .metadata
                .iter()
                .map(|(k, v)| (k.clone(), value_text(v)))
                .collect(),
        });
    }

    let agent_names: HashMap<String, String> = agents.iter().map(|a| (a.id.clone(), a.name.clone())).collect();
    for (i, value) in flat_tool_values.into_iter().enumerate() {
        let name = record_name(&value);
        let record: ToolRecord =
            serde_json::from_value(value).map_err(|e| parse_err(i, name.clone(), format!("flat tool: {e}")))?;
        let Some(parent) = record.agent.clone() else {
            return Err(parse_err(i, name, "flat tool record lacks `agent`".into()));
        };
        // Unknown parents fall through to graph validation as orphans.
        let parent_name = agent_names.get(&parent).cloned().unwrap_or_else(|| parent.clone());
        tools.push(make_tool(record, &parent, &parent_name));
    }

    KnowledgeGraph::new(agents, tools)
}

fn make_tool(record: ToolRecord, agent_id: &str, agent_name: &str) -> ToolNode {
    ToolNode {
        id: record
            .id
            .unwrap_or_else(|| format!("tool:{agent_name}/{}", record.name)),
        name: record.name,
        description: record.description.unwrap_or_default(),
        parent_agent_id: agent_id.to_string(),
        schema_text: record.schema.as_ref().filter(|v| !v.is_null()).map(value_text),
    }
}

/// Reads and parses a manifest file.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<KnowledgeGraph, CatalogError> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_manifest(&path.display().to_string(), &content)
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GraphFileOut<'a> {
    format_version: u32,
    graph: &'a KnowledgeGraph,
}

#[derive(Deserialize)]
struct GraphFileIn {
    graph: KnowledgeGraph,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

/// Serializes a graph into the versioned file format.
pub fn graph_to_bytes(graph: &KnowledgeGraph) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&GraphFileOut {
        format_version: GRAPH_FORMAT_VERSION,
        graph,
    })
    .expect("graph serialization is infallible");
    out.push(b'\n');
    out
}

pub fn save_graph(graph: &KnowledgeGraph, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    let path = path.as_ref();
    fs::write(path, graph_to_bytes(graph)).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<KnowledgeGraph, CatalogError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let malformed = |e: serde_json::Error| CatalogError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let probe: VersionProbe = serde_json::from_slice(&bytes).map_err(malformed)?;
    if probe.format_version != GRAPH_FORMAT_VERSION {
        return Err(CatalogError::VersionMismatch {
            path: path.to_path_buf(),
            found: probe.format_version,
            expected: GRAPH_FORMAT_VERSION,
        });
    }
    let file: GraphFileIn = serde_json::from_slice(&bytes).map_err(malformed)?;
    Ok(file.graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"[
        {"name": "airbnb", "description": "vacation rental search",
         "tools": [
            {"name": "search_listings", "description": ""},
            {"name": "get_listing", "description": "listing details", "inputSchema": {"type": "object"}}
         ]},
        {"name": "weather", "description": "forecasts",
         "tools": [{"name": "forecast", "description": "daily forecast"}]}
    ]"#;

    #[test]
    fn two_agent_fixture_counts() {
        let g = parse_manifest("fixture", FIXTURE).unwrap();
        assert_eq!(g.agents().len(), 2);
        assert_eq!(g.tools().len(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.tools()[0].id, "tool:airbnb/search_listings");
        assert_eq!(
            g.owner_of("tool:weather/forecast", NodeType::Tool).unwrap(),
            "agent:weather"
        );
        assert_eq!(g.tools()[1].schema_text.as_deref(), Some(r#"{"type":"object"}"#));
        assert_eq!(g.tools()[0].schema_text, None);
    }

    #[test]
    fn json_lines_and_document_forms_agree() {
        let lines = r#"{"name": "airbnb", "description": "vacation rental search", "tools": [{"name": "search_listings"}]}
{"name": "weather", "tools": []}"#;
        let doc = r#"{"agents": [
            {"name": "airbnb", "description": "vacation rental search"},
            {"name": "weather"}],
          "tools": [{"name": "search_listings", "agent": "agent:airbnb"}]}"#;
        let a = parse_manifest("lines", lines).unwrap();
        let b = parse_manifest("doc", doc).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.agents()[1].description, "");
    }

    #[test]
    fn orphan_tool_names_the_tool() {
        let doc = r#"{"agents": [{"id": "a1", "name": "one"}],
          "tools": [{"id": "t9", "name": "nine", "agent": "aX"}]}"#;
        let err = parse_manifest("doc", doc).unwrap_err();
        assert!(matches!(&err, CatalogError::OrphanTool { tool_id, .. } if tool_id == "t9"));
        assert!(err.to_string().contains("t9"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let doc = r#"[{"id": "a", "name": "x"}, {"id": "a", "name": "y"}]"#;
        assert!(matches!(
            parse_manifest("d", doc),
            Err(CatalogError::DuplicateAgent(id)) if id == "a"
        ));
        // Synthesized id collision: same tool name twice under one agent.
        let doc = r#"[{"name": "x", "tools": [{"name": "t"}, {"name": "t"}]}]"#;
        assert!(matches!(
            parse_manifest("d", doc),
            Err(CatalogError::DuplicateTool(id)) if id == "tool:x/t"
        ));
    }

    #[test]
    fn malformed_record_is_named() {
        let doc = r#"[{"name": "ok"}, {"name": "bad", "tools": 7}]"#;
        let err = parse_manifest("m.json", doc).unwrap_err();
        match err {
            CatalogError::Parse { record, name, .. } => {
                assert_eq!(record, 1);
                assert_eq!(name.as_deref(), Some("bad"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_manifest("m.json", "[{"),
            Err(CatalogError::Parse { .. })
        ));
    }

    #[test]
    fn empty_name_and_cross_type_ids() {
        assert!(matches!(
            parse_manifest("d", r#"[{"name": "  "}]"#),
            Err(CatalogError::EmptyField { field: "name", .. })
        ));
        let doc = r#"[{"id": "x", "name": "a", "tools": [{"id": "x", "name": "t"}]}]"#;
        assert!(matches!(parse_manifest("d", doc), Err(CatalogError::CrossTypeId(_))));
    }

    #[test]
    fn owner_of_identity_and_unknown() {
        let g = KnowledgeGraph::new(
            vec![AgentNode::new("a1", "one", ""), AgentNode::new("a2", "two", "")],
            vec![ToolNode::new("t3", "three", "", "a2")],
        )
        .unwrap();
        assert_eq!(g.owner_of("a1", NodeType::Agent).unwrap(), "a1");
        assert_eq!(g.owner_of("t3", NodeType::Tool).unwrap(), "a2");
        assert!(matches!(
            g.owner_of("t3", NodeType::Agent),
            Err(CatalogError::UnknownNode { .. })
        ));
        assert_eq!(g.tools_of("a2").map(|t| t.id.as_str()).collect::<Vec<_>>(), ["t3"]);
        assert_eq!(g.tools_of("a1").count(), 0);
    }

    #[test]
    fn resolve_agent_by_id_or_unique_name() {
        let g = parse_manifest("f", FIXTURE).unwrap();
        assert_eq!(g.resolve_agent("agent:airbnb").unwrap().name, "airbnb");
        assert_eq!(g.resolve_agent("weather").unwrap().id, "agent:weather");
        assert!(g.resolve_agent("nope").is_none());
    }

    #[test]
    fn graph_file_round_trip_and_byte_stability() {
        let dir = tempfile::tempdir().unwrap();
        let g = parse_manifest("f", FIXTURE).unwrap();
        let p1 = dir.path().join("a.json");
        let p2 = dir.path().join("b.json");
        save_graph(&g, &p1).unwrap();
        save_graph(&load_graph(&p1).unwrap(), &p2).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
        assert_eq!(load_graph(&p2).unwrap(), g);

        let empty = dir.path().join("empty.json");
        save_graph(&KnowledgeGraph::empty(), &empty).unwrap();
        assert!(load_graph(&empty).unwrap().is_empty());
    }

    #[test]
    fn graph_file_version_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.json");
        fs::write(&p, r#"{"format_version": 99, "graph": {"agents": [], "tools": []}}"#).unwrap();
        assert!(matches!(
            load_graph(&p),
            Err(CatalogError::VersionMismatch { found: 99, .. })
        ));
    }
}
