use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::mem::size_of;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::CountryRef;

/// Dense node index, assigned in insertion order starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Trend,
    User,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Trend => "trend",
            NodeKind::User => "user",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrendNode {
    pub id: NodeId,
    pub label: String,
    /// Country of first insertion. Not part of the GML schema, so graphs
    /// read back from disk carry `None`.
    pub country: Option<CountryRef>,
    pub follower_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserNode {
    pub id: NodeId,
    pub handle: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Trend(TrendNode),
    User(UserNode),
}

impl Node {
    pub fn id(&self) -> NodeId {
        match self {
            Node::Trend(t) => t.id,
            Node::User(u) => u.id,
        }
    }

    pub fn kind(&self) -> NodeKind {
        match self {
            Node::Trend(_) => NodeKind::Trend,
            Node::User(_) => NodeKind::User,
        }
    }

    /// Trend label or user handle.
    pub fn label(&self) -> &str {
        match self {
            Node::Trend(t) => &t.label,
            Node::User(u) => &u.handle,
        }
    }
}

/// Undirected trend–user edge, stored with the trend endpoint as `source`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOutcome {
    /// Unseen handle: a user node and an edge were inserted.
    New,
    /// Known handle following another trend: only the edge was inserted.
    DuplicateUser,
    /// The edge already existed; nothing was inserted.
    DuplicateEdge,
}

/// Counters of duplicates filtered out during construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEvents {
    pub duplicate_trends: u64,
    pub duplicate_users: u64,
    pub duplicate_edges: u64,
}

/// Undirected bipartite graph of trends and the users following them.
#[derive(Debug, Clone, Default)]
pub struct TrendGraph {
    nodes: Vec<Node>,
    degree: Vec<u64>,
    edges: BTreeSet<Edge>,
    trends_by_label: HashMap<String, NodeId>,
    users_by_handle: HashMap<String, NodeId>,
    events: GraphEvents,
}

impl TrendGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a trend, or returns the id of the trend with the same label.
    ///
    /// Labels are compared exactly (case-sensitive, no normalisation). A hit
    /// on an existing label counts as a duplicate-trend event.
    pub fn add_trend(&mut self, label: &str, country: Option<CountryRef>) -> Result<NodeId> {
        if label.is_empty() {
            return Err(Error::invalid("trend label must be non-empty"));
        }
        if let Some(&id) = self.trends_by_label.get(label) {
            self.events.duplicate_trends += 1;
            return Ok(id);
        }
        let id = self.next_id()?;
        self.trends_by_label.insert(label.to_owned(), id);
        self.push(Node::Trend(TrendNode {
            id,
            label: label.to_owned(),
            country,
            follower_count: 0,
        }));
        Ok(id)
    }

    /// Links `handle` to `trend`, creating the user node on first sight.
    pub fn add_follower_edge(&mut self, trend: NodeId, handle: &str) -> Result<EdgeOutcome> {
        self.trend(trend)
            .ok_or_else(|| Error::not_found(format!("trend node {trend}")))?;
        if handle.is_empty() {
            return Err(Error::invalid("user handle must be non-empty"));
        }
        let (user, fresh_user) = match self.users_by_handle.get(handle) {
            Some(&id) => (id, false),
            None => {
                let id = self.next_id()?;
                self.users_by_handle.insert(handle.to_owned(), id);
                self.push(Node::User(UserNode {
                    id,
                    handle: handle.to_owned(),
                }));
                (id, true)
            }
        };
        if !self.link(trend, user) {
            self.events.duplicate_edges += 1;
            return Ok(EdgeOutcome::DuplicateEdge);
        }
        if fresh_user {
            Ok(EdgeOutcome::New)
        } else {
            self.events.duplicate_users += 1;
            Ok(EdgeOutcome::DuplicateUser)
        }
    }

    pub fn node_degree(&self, id: NodeId) -> Result<u64> {
        self.degree
            .get(id.index())
            .copied()
            .ok_or_else(|| Error::not_found(format!("node {id}")))
    }

    /// Constant-time membership test.
    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id.index())
    }

    pub fn trend(&self, id: NodeId) -> Option<&TrendNode> {
        match self.nodes.get(id.index()) {
            Some(Node::Trend(t)) => Some(t),
            _ => None,
        }
    }

    pub fn trend_id(&self, label: &str) -> Option<NodeId> {
        self.trends_by_label.get(label).copied()
    }

    pub fn user_id(&self, handle: &str) -> Option<NodeId> {
        self.users_by_handle.get(handle).copied()
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn trends(&self) -> impl Iterator<Item = &TrendNode> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Trend(t) => Some(t),
            Node::User(_) => None,
        })
    }

    /// Edges in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn trend_count(&self) -> usize {
        self.trends_by_label.len()
    }

    pub fn user_count(&self) -> usize {
        self.users_by_handle.len()
    }

    pub fn events(&self) -> GraphEvents {
        self.events
    }

    /// Rough heap footprint of the graph, from element counts and sizes.
    pub fn approx_bytes(&self) -> usize {
        let strings: usize = self.nodes.iter().map(|n| n.label().len()).sum();
        self.nodes.len() * (size_of::<Node>() + size_of::<u64>())
            + self.edges.len() * size_of::<Edge>()
            // label bytes live twice: in the node and as the index key
            + 2 * strings
            + self.nodes.len() * (size_of::<String>() + size_of::<NodeId>())
    }

    /// Full-scan check of the structural invariants.
    pub fn check_invariants(&self) -> Result<()> {
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id().index() != i {
                return Err(Error::invalid(format!(
                    "node at slot {i} has id {}",
                    node.id()
                )));
            }
            if node.label().is_empty() {
                return Err(Error::invalid(format!("node {i} has an empty label")));
            }
            if let Node::Trend(t) = node {
                if t.follower_count != self.degree[i] {
                    return Err(Error::invalid(format!(
                        "trend {i}: follower_count {} != degree {}",
                        t.follower_count, self.degree[i]
                    )));
                }
            }
        }
        for e in &self.edges {
            let ok = matches!(
                (self.node(e.source), self.node(e.target)),
                (Some(Node::Trend(_)), Some(Node::User(_)))
            );
            if !ok {
                return Err(Error::invalid(format!(
                    "edge {}-{} does not join a trend to a user",
                    e.source, e.target
                )));
            }
        }
        Ok(())
    }

    fn next_id(&self) -> Result<NodeId> {
        u32::try_from(self.nodes.len())
            .map(NodeId)
            .map_err(|_| Error::invalid("graph exceeds u32::MAX nodes"))
    }

    fn push(&mut self, node: Node) {
        debug_assert_eq!(node.id().index(), self.nodes.len());
        self.nodes.push(node);
        self.degree.push(0);
    }

    /// Returns false if the edge already exists.
    fn link(&mut self, trend: NodeId, user: NodeId) -> bool {
        if !self.edges.insert(Edge {
            source: trend,
            target: user,
        }) {
            return false;
        }
        self.degree[trend.index()] += 1;
        self.degree[user.index()] += 1;
        if let Node::Trend(t) = &mut self.nodes[trend.index()] {
            t.follower_count += 1;
        }
        true
    }

    // Used by the GML reader, which must reproduce ids exactly.
    pub(crate) fn insert_node(&mut self, kind: NodeKind, label: String) -> Result<NodeId> {
        if label.is_empty() {
            return Err(Error::invalid("empty node label"));
        }
        let id = self.next_id()?;
        let index = match kind {
            NodeKind::Trend => &mut self.trends_by_label,
            NodeKind::User => &mut self.users_by_handle,
        };
        if index.contains_key(&label) {
            return Err(Error::invalid(format!(
                "duplicate {} label {label:?}",
                kind.as_str()
            )));
        }
        index.insert(label.clone(), id);
        self.push(match kind {
            NodeKind::Trend => Node::Trend(TrendNode {
                id,
                label,
                country: None,
                follower_count: 0,
            }),
            NodeKind::User => Node::User(UserNode { id, handle: label }),
        });
        Ok(id)
    }

    pub(crate) fn insert_edge(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        let (trend, user) = match (self.node(a).map(Node::kind), self.node(b).map(Node::kind)) {
            (Some(NodeKind::Trend), Some(NodeKind::User)) => (a, b),
            (Some(NodeKind::User), Some(NodeKind::Trend)) => (b, a),
            (None, _) => return Err(Error::not_found(format!("node {a}"))),
            (_, None) => return Err(Error::not_found(format!("node {b}"))),
            _ => {
                return Err(Error::invalid(format!(
                    "edge {a}-{b} does not join a trend to a user"
                )))
            }
        };
        if !self.link(trend, user) {
            return Err(Error::invalid(format!("parallel edge {a}-{b}")));
        }
        Ok(())
    }
}
