//! Flow-network encoding of the blocking problem.
//!
//! Monitors occupy cells, so the quantity to minimize is a *vertex* cut, not
//! an edge cut. The standard reduction applies: every traversable cell is
//! split into an entry half and an exit half joined by an internal arc whose
//! capacity is the cost of occupying that cell — 1 for interior free cells,
//! effectively infinite for cells that may not be blocked (border cells,
//! which a monitor cannot seal, and target cells, which must stay untouched).
//! Adjacency between cells becomes infinite-capacity arcs between exit and
//! entry halves, a super-source feeds every free border cell, and one or more
//! sinks drain the target cells. A maximum flow then equals a minimum vertex
//! cut by duality, and the saturated internal arcs name the cells to occupy.
//!
//! "Infinite" is `grid area + 1`: larger than any possible set of unit
//! internal arcs, so a finite min cut never includes such an arc, while sums
//! stay far from `i64` overflow.

use alloc::vec::Vec;

use crate::grid::{CellState, Coord, OccupancyGrid};

/// Handle to a node of a [`FlowNetwork`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// What a node represents.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    /// Entry half of a split cell: arcs from neighbors land here.
    CellIn(Coord),
    /// Exit half of a split cell: arcs to neighbors and sinks leave here.
    CellOut(Coord),
    /// Artificial origin feeding all free border cells.
    SuperSource,
    /// Merged sink draining every target region at once.
    SuperSink,
    /// Sink draining a single target region.
    TargetSink(u16),
    /// Node of a hand-built network with no grid meaning.
    Plain,
}

/// One directed arc. Arcs are stored in pairs: arc `i` and its reverse
/// companion `i ^ 1` (capacity 0) so residual bookkeeping is index
/// arithmetic.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Arc {
    pub head: u32,
    pub cap: i64,
}

/// Directed flow network over split grid cells (or arbitrary hand-built
/// nodes).
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub(crate) kinds: Vec<NodeKind>,
    pub(crate) arcs: Vec<Arc>,
    /// Arc ids (both directions) leaving each node.
    pub(crate) adj: Vec<Vec<u32>>,
    source: NodeId,
    sink: Option<NodeId>,
    /// Capacity used for "may not be cut" arcs; anything at or above this is
    /// treated as uncuttable when extracting the cut.
    infinite_cap: i64,
}

impl FlowNetwork {
    /// Starts a hand-built network with `node_count` plain nodes. The sink
    /// must be set via [`FlowNetwork::set_sink`] before solving.
    pub fn custom(node_count: usize, source: usize, infinite_cap: i64) -> Self {
        assert!(source < node_count);
        let mut net = FlowNetwork {
            kinds: alloc::vec![NodeKind::Plain; node_count],
            arcs: Vec::new(),
            adj: alloc::vec![Vec::new(); node_count],
            source: NodeId(source as u32),
            sink: None,
            infinite_cap,
        };
        net.kinds[source] = NodeKind::SuperSource;
        net
    }

    pub fn set_sink(&mut self, sink: NodeId) {
        assert!(sink.index() < self.kinds.len());
        assert_ne!(sink, self.source, "sink must differ from source");
        if self.kinds[sink.index()] == NodeKind::Plain {
            self.kinds[sink.index()] = NodeKind::SuperSink;
        }
        self.sink = Some(sink);
    }

    fn push_node(&mut self, kind: NodeKind) -> NodeId {
        let id = NodeId(self.kinds.len() as u32);
        self.kinds.push(kind);
        self.adj.push(Vec::new());
        id
    }

    /// Adds a forward arc `tail -> head` with the given capacity, plus its
    /// zero-capacity reverse companion.
    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, cap: i64) {
        assert!(cap >= 0, "arc capacity must be non-negative");
        assert!(tail.index() < self.kinds.len() && head.index() < self.kinds.len());
        let fwd = self.arcs.len() as u32;
        self.arcs.push(Arc { head: head.0, cap });
        self.arcs.push(Arc { head: tail.0, cap: 0 });
        self.adj[tail.index()].push(fwd);
        self.adj[head.index()].push(fwd + 1);
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    /// Handle to the node at `index`. Panics when out of range.
    pub fn node(&self, index: usize) -> NodeId {
        assert!(index < self.kinds.len(), "node index {index} out of range");
        NodeId(index as u32)
    }

    /// Number of forward arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn kind(&self, n: NodeId) -> NodeKind {
        self.kinds[n.index()]
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    /// The sink, if one has been attached.
    pub fn sink(&self) -> Option<NodeId> {
        self.sink
    }

    pub fn infinite_cap(&self) -> i64 {
        self.infinite_cap
    }

    /// True when the source has no outgoing arcs — a grid whose border is
    /// fully walled off. Max flow is trivially 0 and the empty cut is valid.
    pub fn is_degenerate_source(&self) -> bool {
        self.adj[self.source.index()].is_empty()
    }

    /// Forward arcs in insertion order as `(tail, head, capacity)`. The index
    /// of an arc in this iteration matches `FlowState::flow`.
    pub fn forward_arcs(&self) -> impl Iterator<Item = (NodeId, NodeId, i64)> + '_ {
        (0..self.arcs.len()).step_by(2).map(move |i| {
            let tail = self.arcs[i + 1].head; // reverse companion points back
            (NodeId(tail), NodeId(self.arcs[i].head), self.arcs[i].cap)
        })
    }

    /// Capacity of forward arc `k` (in `forward_arcs` order).
    pub fn arc_cap(&self, k: usize) -> i64 {
        self.arcs[2 * k].cap
    }

    /// The grid cell a node belongs to, if any.
    pub fn cell_of(&self, n: NodeId) -> Option<Coord> {
        match self.kinds[n.index()] {
            NodeKind::CellIn(c) | NodeKind::CellOut(c) => Some(c),
            _ => None,
        }
    }
}

/// Node ids of the two halves of a traversable cell in a network built by
/// [`build_base_network`]. Halves are numbered by the cell's rank among
/// traversable cells in row-major order.
///
/// Scans the grid, so use `rank_table` when mapping many cells.
fn cell_halves(grid: &OccupancyGrid, c: Coord) -> (NodeId, NodeId) {
    debug_assert_ne!(grid.cell(c), CellState::Obstacle);
    let rank = grid
        .coords()
        .take_while(|x| *x != c)
        .filter(|x| grid.cell(*x) != CellState::Obstacle)
        .count() as u32;
    (NodeId(2 * rank), NodeId(2 * rank + 1))
}

/// Row-major rank of every traversable cell (`u32::MAX` for obstacles).
fn rank_table(grid: &OccupancyGrid) -> Vec<u32> {
    let mut table = alloc::vec![u32::MAX; grid.area()];
    let mut rank = 0;
    for (i, c) in grid.coords().enumerate() {
        if grid.cell(c) != CellState::Obstacle {
            table[i] = rank;
            rank += 1;
        }
    }
    table
}

/// Builds the sink-less base network for a grid: split cells, internal arcs,
/// adjacency arcs, super-source arcs. Both sink attachments start from this.
///
/// Obstacle cells produce no nodes. If the grid has no free border cell the
/// source ends up degenerate (see [`FlowNetwork::is_degenerate_source`]);
/// every cut is then trivially empty.
pub fn build_base_network(grid: &OccupancyGrid) -> FlowNetwork {
    let infinite = grid.area() as i64 + 1;
    let mut kinds = Vec::new();
    for c in grid.coords() {
        if grid.cell(c) != CellState::Obstacle {
            kinds.push(NodeKind::CellIn(c));
            kinds.push(NodeKind::CellOut(c));
        }
    }
    let source = NodeId(kinds.len() as u32);
    kinds.push(NodeKind::SuperSource);
    let node_count = kinds.len();

    let mut net = FlowNetwork {
        kinds,
        arcs: Vec::new(),
        adj: alloc::vec![Vec::new(); node_count],
        source,
        sink: None,
        infinite_cap: infinite,
    };

    let ranks = rank_table(grid);
    let half_in = |c: Coord| NodeId(2 * ranks[c.row * grid.width() + c.col]);
    let half_out = |c: Coord| NodeId(2 * ranks[c.row * grid.width() + c.col] + 1);

    for c in grid.coords() {
        let state = grid.cell(c);
        if state == CellState::Obstacle {
            continue;
        }
        // Interior free cells cost one monitor; border and target cells may
        // never be cut.
        let cap = if state == CellState::Free && !grid.is_border(c) {
            1
        } else {
            infinite
        };
        net.add_arc(half_in(c), half_out(c), cap);
    }
    for c in grid.coords() {
        if grid.cell(c) == CellState::Obstacle {
            continue;
        }
        for n in grid.neighbors(c) {
            if grid.cell(n) != CellState::Obstacle {
                net.add_arc(half_out(c), half_in(n), infinite);
            }
        }
    }
    for b in grid.border_free_cells() {
        net.add_arc(source, half_in(b), infinite);
    }
    net
}

/// Returns a copy of `base` with a sink draining only target `id`.
///
/// Panics if `id` is not a target of `grid`. `base` must have been built by
/// [`build_base_network`] for this same grid.
pub fn attach_single_sink(base: &FlowNetwork, grid: &OccupancyGrid, id: u16) -> FlowNetwork {
    assert!(id < grid.target_count(), "target id {id} out of range");
    let mut net = base.clone();
    let sink = net.push_node(NodeKind::TargetSink(id));
    for c in grid.cells_of_target(id) {
        let (_, cell_out) = cell_halves(grid, c);
        net.add_arc(cell_out, sink, net.infinite_cap);
    }
    net.sink = Some(sink);
    net
}

/// Returns a copy of `base` with a single merged sink draining every target
/// region, so one cut must seal them all at once.
pub fn attach_merged_sink(base: &FlowNetwork, grid: &OccupancyGrid) -> FlowNetwork {
    assert!(grid.target_count() >= 1, "grid has no targets");
    let mut net = base.clone();
    let sink = net.push_node(NodeKind::SuperSink);
    for (c, _) in grid.target_cells() {
        let (_, cell_out) = cell_halves(grid, c);
        net.add_arc(cell_out, sink, net.infinite_cap);
    }
    net.sink = Some(sink);
    net
}

/// Alternative merged-sink construction that rewires target neighborhoods
/// instead of draining the targets themselves: every traversable neighbor of
/// a target gains a sink arc, and the arcs between that neighbor and the
/// target are disabled, leaving target cells unreachable.
///
/// Whether targets remain traversable waypoints is the one free choice in the
/// encoding; [`attach_merged_sink`] keeps them traversable, this variant does
/// not. Both yield the same minimum cut value (flow may route through a
/// target only after the point where it could already have reached the sink),
/// which the test suite checks by solving both on random grids.
pub fn attach_merged_sink_rewired(base: &FlowNetwork, grid: &OccupancyGrid) -> FlowNetwork {
    assert!(grid.target_count() >= 1, "grid has no targets");
    let mut net = base.clone();
    let sink = net.push_node(NodeKind::SuperSink);
    for (c, _) in grid.target_cells() {
        let (t_in, t_out) = cell_halves(grid, c);
        for n in grid.neighbors(c) {
            if grid.cell(n) == CellState::Obstacle {
                continue;
            }
            let (n_in, n_out) = cell_halves(grid, n);
            net.add_arc(n_out, sink, net.infinite_cap);
            disable_arc(&mut net, n_out, t_in);
            disable_arc(&mut net, t_out, n_in);
        }
    }
    net.sink = Some(sink);
    net
}

/// Zeroes the capacity of the forward arc `tail -> head` (which must exist).
fn disable_arc(net: &mut FlowNetwork, tail: NodeId, head: NodeId) {
    let arc = net.adj[tail.index()]
        .iter()
        .copied()
        .find(|&a| a % 2 == 0 && net.arcs[a as usize].head == head.0)
        .expect("arc to disable exists");
    net.arcs[arc as usize].cap = 0;
}
