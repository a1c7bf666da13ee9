//! Agglomerative clustering of the embedding and dendrogram cut-sets.
//!
//! Node ids follow the usual convention: leaves are `0..n` (leaf `i` is
//! point `i`) and the internal node created by merge step `s` has id `n + s`,
//! so children always have smaller ids than their parent and the root is
//! `2n − 2`.
//!
//! A [`CutSet`] is a set of selected nodes that always contains the root.
//! Each leaf belongs to the cluster of its lowest selected ancestor.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Embedding, Linkage};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub height: f64,
    /// Point index, for leaves only.
    pub point: Option<usize>,
    /// Number of leaves in the subtree.
    pub size: usize,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.left.is_none()
    }

    pub fn children(&self) -> Option<(NodeId, NodeId)> {
        self.left.zip(self.right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    nodes: Vec<Node>,
    parent: Vec<Option<NodeId>>,
    /// Leaves in depth-first (left before right) order; every subtree is a
    /// contiguous range of it.
    leaf_order: Vec<usize>,
    /// Half-open range of `leaf_order` covered by each node.
    span: Vec<(usize, usize)>,
}

impl Dendrogram {
    /// Builds a dendrogram from `n − 1` merges `(a, b, height)`, where merge
    /// `s` creates node `n + s` from two not-yet-merged nodes.
    pub fn from_merges(n: usize, merges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        if merges.len() != n - 1 {
            return Err(Error::InvalidCutSet(format!(
                "{} merges given for {n} leaves",
                merges.len()
            )));
        }
        let total = 2 * n - 1;
        let mut nodes: Vec<Node> = (0..n)
            .map(|i| Node {
                id: i,
                left: None,
                right: None,
                height: 0.0,
                point: Some(i),
                size: 1,
            })
            .collect();
        let mut parent = vec![None; total];
        for (s, &(a, b, height)) in merges.iter().enumerate() {
            let id = n + s;
            for c in [a, b] {
                if c >= id || parent[c].is_some() || a == b {
                    return Err(Error::InvalidCutSet(format!(
                        "merge {s} uses invalid or already merged node {c}"
                    )));
                }
            }
            if !height.is_finite() {
                return Err(Error::InvalidCutSet(format!("merge {s} has non-finite height")));
            }
            let (left, right) = (a.min(b), a.max(b));
            parent[left] = Some(id);
            parent[right] = Some(id);
            nodes.push(Node {
                id,
                left: Some(left),
                right: Some(right),
                height,
                point: None,
                size: nodes[left].size + nodes[right].size,
            });
        }

        let mut leaf_order = Vec::with_capacity(n);
        let mut span = vec![(0, 0); total];
        // iterative DFS; a node's span closes when it is popped the second time
        let mut stack = vec![(total - 1, false)];
        while let Some((id, done)) = stack.pop() {
            if done {
                span[id].1 = leaf_order.len();
                continue;
            }
            span[id].0 = leaf_order.len();
            match nodes[id].children() {
                None => {
                    leaf_order.push(id);
                    span[id].1 = leaf_order.len();
                }
                Some((l, r)) => {
                    stack.push((id, true));
                    stack.push((r, false));
                    stack.push((l, false));
                }
            }
        }
        Ok(Dendrogram {
            nodes,
            parent,
            leaf_order,
            span,
        })
    }

    pub fn n_leaves(&self) -> usize {
        self.leaf_order.len()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id]
    }

    /// True if `node` lies in the subtree rooted at `ancestor` (inclusive).
    #[inline]
    pub fn contains(&self, ancestor: NodeId, node: NodeId) -> bool {
        let (a0, a1) = self.span[ancestor];
        let (b0, b1) = self.span[node];
        a0 <= b0 && b1 <= a1
    }

    /// Points in the subtree of `id`, in leaf order.
    pub fn leaves(&self, id: NodeId) -> &[usize] {
        let (lo, hi) = self.span[id];
        &self.leaf_order[lo..hi]
    }

    /// Merge list `(left, right, height)` in creation order.
    pub fn merges(&self) -> Vec<(NodeId, NodeId, f64)> {
        self.nodes[self.n_leaves()..]
            .iter()
            .map(|n| (n.left.unwrap(), n.right.unwrap(), n.height))
            .collect()
    }
}

/// Condensed upper-triangular distance matrix over cluster slots.
struct Condensed {
    n: usize,
    data: Vec<f64>,
}

impl Condensed {
    fn new(n: usize, dist: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                data.push(dist(i, j));
            }
        }
        Condensed { n, data }
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.index(i, j)]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let idx = self.index(i, j);
        self.data[idx] = v;
    }
}

/// Merge priority: distance, then the smaller node id, then the larger one.
#[inline]
fn pair_key(d: f64, a: NodeId, b: NodeId) -> (f64, NodeId, NodeId) {
    (d, a.min(b), a.max(b))
}

#[inline]
fn key_cmp(x: (f64, NodeId, NodeId), y: (f64, NodeId, NodeId)) -> Ordering {
    x.0.total_cmp(&y.0)
        .then(x.1.cmp(&y.1))
        .then(x.2.cmp(&y.2))
}

/// Agglomerative clustering of the embedding under Euclidean distance.
///
/// Each step merges the pair of clusters with the smallest linkage distance;
/// equal distances are broken by the lexicographically smallest
/// `(min node id, max node id)`. Nearest-neighbour pointers are cached per
/// cluster, which keeps the stored-matrix algorithm close to `O(n²)`.
pub fn build_dendrogram(embedding: &Embedding, linkage: Linkage) -> Result<Dendrogram> {
    let n = embedding.n();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let pts = embedding.coords();
    let mut dist = Condensed::new(n, |i, j| {
        let dx = pts[i][0] - pts[j][0];
        let dy = pts[i][1] - pts[j][1];
        dx.hypot(dy)
    });

    let mut active = vec![true; n];
    let mut node_of = (0..n).collect::<Vec<NodeId>>();
    let mut size = vec![1usize; n];
    let mut nn = vec![0usize; n];
    let mut heights = vec![0.0f64; 2 * n - 1];

    let nearest = |i: usize, active: &[bool], node_of: &[NodeId], dist: &Condensed| {
        let mut best: Option<(usize, (f64, NodeId, NodeId))> = None;
        for j in 0..n {
            if j == i || !active[j] {
                continue;
            }
            let key = pair_key(dist.get(i, j), node_of[i], node_of[j]);
            if best.is_none_or(|(_, b)| key_cmp(key, b) == Ordering::Less) {
                best = Some((j, key));
            }
        }
        best.map(|(j, _)| j).unwrap_or(i)
    };
    for (i, slot) in nn.iter_mut().enumerate() {
        *slot = nearest(i, &active, &node_of, &dist);
    }

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut best: Option<(usize, (f64, NodeId, NodeId))> = None;
        for i in (0..n).filter(|&i| active[i]) {
            let key = pair_key(dist.get(i, nn[i]), node_of[i], node_of[nn[i]]);
            if best.is_none_or(|(_, b)| key_cmp(key, b) == Ordering::Less) {
                best = Some((i, key));
            }
        }
        let (a, (d, _, _)) = best.expect("at least two active clusters");
        let b = nn[a];
        let (keep, drop) = (a.min(b), a.max(b));
        let new_id = n + step;
        let height = d
            .max(heights[node_of[a]])
            .max(heights[node_of[b]]);
        heights[new_id] = height;
        merges.push((node_of[a], node_of[b], height));

        let (sa, sb) = (size[keep] as f64, size[drop] as f64);
        for k in (0..n).filter(|&k| active[k] && k != keep && k != drop) {
            let (da, db) = (dist.get(keep, k), dist.get(drop, k));
            let merged = match linkage {
                Linkage::Single => da.min(db),
                Linkage::Complete => da.max(db),
                Linkage::Average => (sa * da + sb * db) / (sa + sb),
            };
            dist.set(keep, k, merged);
        }
        active[drop] = false;
        size[keep] += size[drop];
        node_of[keep] = new_id;

        if step + 1 == n - 1 {
            break;
        }
        for k in (0..n).filter(|&k| active[k] && k != keep) {
            if nn[k] == keep || nn[k] == drop {
                nn[k] = nearest(k, &active, &node_of, &dist);
            } else {
                let current = pair_key(dist.get(k, nn[k]), node_of[k], node_of[nn[k]]);
                let candidate = pair_key(dist.get(k, keep), node_of[k], new_id);
                if key_cmp(candidate, current) == Ordering::Less {
                    nn[k] = keep;
                }
            }
        }
        nn[keep] = nearest(keep, &active, &node_of, &dist);
    }
    Dendrogram::from_merges(n, &merges)
}

/// Selected dendrogram nodes, in insertion order, always including the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CutSet {
    selected: Vec<NodeId>,
}

impl CutSet {
    pub fn root(d: &Dendrogram) -> Self {
        CutSet {
            selected: vec![d.root()],
        }
    }

    /// Validates `nodes` against `d`: the root must come first, ids must be
    /// in range and unique, and every selected node must induce a non-empty
    /// cluster.
    pub fn from_nodes(d: &Dendrogram, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.first() != Some(&d.root()) {
            return Err(Error::InvalidCutSet("the root must be selected first".into()));
        }
        let mut seen = vec![false; d.len()];
        for &v in &nodes {
            if v >= d.len() {
                return Err(Error::InvalidCutSet(format!("node {v} does not exist")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidCutSet(format!("node {v} selected twice")));
            }
        }
        let cut = CutSet { selected: nodes };
        let layout = CutLayout::new(d, &cut);
        if let Some(&v) = cut.selected.iter().find(|&&v| layout.own[v] == 0) {
            return Err(Error::InvalidCutSet(format!(
                "node {v} is fully shadowed by deeper selected nodes"
            )));
        }
        Ok(cut)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.selected
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.selected.contains(&v)
    }

    /// The cut-set with `v` appended.
    pub fn with_split(&self, v: NodeId) -> CutSet {
        let mut selected = self.selected.clone();
        selected.push(v);
        CutSet { selected }
    }

    /// The cut-set with `v` removed; other nodes keep their order.
    pub fn without(&self, v: NodeId) -> CutSet {
        CutSet {
            selected: self.selected.iter().copied().filter(|&x| x != v).collect(),
        }
    }
}

/// Per-node bookkeeping for one cut-set, computed in two linear passes.
pub(crate) struct CutLayout {
    pub selected: Vec<bool>,
    /// Leaves of the subtree not claimed by a selected strict descendant.
    pub own: Vec<usize>,
    /// Lowest selected ancestor-or-self.
    pub host: Vec<NodeId>,
}

impl CutLayout {
    pub fn new(d: &Dendrogram, cut: &CutSet) -> Self {
        let total = d.len();
        let mut selected = vec![false; total];
        for &v in cut.nodes() {
            selected[v] = true;
        }
        // children precede parents in id order
        let mut covered = vec![0usize; total];
        for node in d.nodes() {
            if let Some((l, r)) = node.children() {
                covered[node.id] = [l, r]
                    .iter()
                    .map(|&c| if selected[c] { d.node(c).size } else { covered[c] })
                    .sum();
            }
        }
        let own = (0..total).map(|v| d.node(v).size - covered[v]).collect();
        let mut host = vec![d.root(); total];
        for v in (0..total).rev() {
            host[v] = if selected[v] {
                v
            } else {
                d.parent(v).map_or(d.root(), |p| host[p])
            };
        }
        CutLayout {
            selected,
            own,
            host,
        }
    }
}

/// Point sets of the clusters induced by `c`, ordered like `c.nodes()`.
pub fn clusters_from_cutset(d: &Dendrogram, c: &CutSet) -> Result<Vec<Vec<usize>>> {
    if c.nodes().first() != Some(&d.root()) {
        return Err(Error::InvalidCutSet("the root must be selected first".into()));
    }
    if let Some(&v) = c.nodes().iter().find(|&&v| v >= d.len()) {
        return Err(Error::InvalidCutSet(format!("node {v} does not exist")));
    }
    let layout = CutLayout::new(d, c);
    let mut slot = vec![usize::MAX; d.len()];
    for (idx, &v) in c.nodes().iter().enumerate() {
        if slot[v] != usize::MAX {
            return Err(Error::InvalidCutSet(format!("node {v} selected twice")));
        }
        slot[v] = idx;
    }
    let mut clusters = vec![Vec::new(); c.len()];
    for leaf in 0..d.n_leaves() {
        clusters[slot[layout.host[leaf]]].push(d.node(leaf).point.unwrap_or(leaf));
    }
    if let Some(idx) = clusters.iter().position(|c| c.is_empty()) {
        return Err(Error::InvalidCutSet(format!(
            "selected node {} induces an empty cluster",
            c.nodes()[idx]
        )));
    }
    Ok(clusters)
}

/// Unselected nodes whose addition leaves both the new cluster and the
/// remainder of its host cluster with at least `min_cluster_size` points.
/// Returned in increasing id order.
pub fn candidate_splits(d: &Dendrogram, c: &CutSet, min_cluster_size: usize) -> Vec<NodeId> {
    let min = min_cluster_size.max(1);
    let layout = CutLayout::new(d, c);
    (0..d.len())
        .filter(|&v| {
            !layout.selected[v] && layout.own[v] >= min && {
                let host = layout.host[v];
                layout.own[host] - layout.own[v] >= min
            }
        })
        .collect()
}

/// Selected nodes other than the root, in increasing id order.
pub fn candidate_merges(d: &Dendrogram, c: &CutSet) -> Vec<NodeId> {
    let mut v: Vec<NodeId> = c.nodes().iter().copied().filter(|&x| x != d.root()).collect();
    v.sort_unstable();
    v
}
