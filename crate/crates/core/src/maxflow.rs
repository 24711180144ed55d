//! Preflow-push maximum flow and minimum-cut extraction.
//!
//! The solver is the lowest-label variant with the two standard heuristics
//! (gap relabeling, periodic global relabeling). Lowest-label selection suits
//! these networks: the border source floods far more excess into the grid
//! than the unit-capacity interior can carry, and draining nodes nearest the
//! sink first saturates the cut before the surplus starts churning labels.
//! Phase one drives a maximum preflow into the sink while only touching nodes
//! below height `n`; phase two returns stranded excess to the source by
//! walking flow paths backwards, leaving a genuine maximum flow. The minimum cut is then the set of
//! saturated arcs leaving the nodes reachable from the source in the residual
//! graph — the source-minimal cut, which makes extraction deterministic even
//! when several minimum cuts exist.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::flownet::{
    attach_merged_sink, attach_single_sink, build_base_network, FlowNetwork, NodeId, NodeKind,
};
use crate::grid::{Coord, OccupancyGrid};

/// A maximum flow: per-arc flows plus the solver's final bookkeeping.
#[derive(Clone, Debug)]
pub struct FlowState {
    /// Flow value (total flow into the sink).
    pub value: i64,
    /// Flow on each forward arc, aligned with `FlowNetwork::forward_arcs`.
    pub flow: Vec<i64>,
    /// Final node excesses. Zero everywhere except source and sink.
    pub excess: Vec<i64>,
    /// Final height labels, kept for diagnostics.
    pub height: Vec<u32>,
}

/// Value of a minimum cut.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CutValue {
    /// Total capacity of the cut arcs. For grid networks this equals the
    /// number of cut cells.
    Finite(i64),
    /// The cut would have to sever an uncuttable arc: no placement of
    /// monitors on interior free cells can seal the targets.
    Infeasible,
}

impl CutValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, CutValue::Finite(_))
    }
}

/// A minimum cut extracted from a solved network.
#[derive(Clone, Debug)]
pub struct CutResult {
    pub value: CutValue,
    /// Grid cells whose internal arcs form the cut, row-major sorted.
    /// Empty for infeasible cuts and for networks not built from a grid.
    pub cells: Vec<Coord>,
    /// Nodes on the source side of the cut.
    pub source_side: Vec<NodeId>,
    /// Flow value of the solve that produced this cut.
    pub flow_value: i64,
}

/// Which targets the cut must seal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TargetSelection {
    /// All targets at once through a merged sink.
    All,
    /// One target region by id.
    Single(u16),
}

/// Computes a maximum flow on `net`, which must have a sink attached.
pub fn max_flow(net: &FlowNetwork) -> FlowState {
    let sink = net.sink().expect("max_flow requires a network with a sink");
    let mut solver = Solver::new(net, net.source().index(), sink.index());
    solver.run_phase_one();
    solver.cancel_stranded_excess();
    solver.into_state()
}

struct Solver<'a> {
    net: &'a FlowNetwork,
    s: usize,
    t: usize,
    n: usize,
    /// Residual capacity per arc id (forward and reverse interleaved).
    resid: Vec<i64>,
    excess: Vec<i64>,
    height: Vec<u32>,
    /// Next arc to examine per node, an index into `net.adj[u]`.
    cur: Vec<u32>,
    /// Active nodes indexed by height; only heights below `n` are used.
    buckets: Vec<Vec<u32>>,
    /// Lowest bucket that may be non-empty (a low-water mark). Lowest-label
    /// selection drives excess already near the sink home first, so the cut
    /// saturates before the bulk of the preflow starts hunting for detours;
    /// the next global relabel then parks everything stranded in one sweep.
    lowest: usize,
    queued: Vec<bool>,
    /// Number of nodes at each height, for the gap heuristic.
    height_count: Vec<u32>,
    /// Discharges since the last global relabel.
    work: usize,
}

impl<'a> Solver<'a> {
    fn new(net: &'a FlowNetwork, s: usize, t: usize) -> Self {
        let n = net.node_count();
        Solver {
            net,
            s,
            t,
            n,
            resid: net.arcs.iter().map(|a| a.cap).collect(),
            excess: vec![0; n],
            height: vec![0; n],
            cur: vec![0; n],
            buckets: vec![Vec::new(); n.max(1)],
            lowest: 0,
            queued: vec![false; n],
            height_count: vec![0; 2 * n + 2],
            work: 0,
        }
    }

    #[inline]
    fn head(&self, arc: u32) -> usize {
        self.net.arcs[arc as usize].head as usize
    }

    /// Recomputes exact distance-to-sink labels by reverse BFS over the
    /// residual graph, then rebuilds the active buckets.
    fn global_relabel(&mut self) {
        let n = self.n;
        let unreached = n as u32;
        for h in &mut self.height {
            *h = unreached;
        }
        self.height[self.t] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(self.t as u32);
        while let Some(v) = queue.pop_front() {
            let dist = self.height[v as usize] + 1;
            for &a in &self.net.adj[v as usize] {
                // The companion arc runs head -> v; positive residual there
                // means `head` can still send to v.
                let u = self.head(a);
                if self.resid[(a ^ 1) as usize] > 0 && self.height[u] == unreached && u != self.s {
                    self.height[u] = dist;
                    queue.push_back(u as u32);
                }
            }
        }
        self.height[self.s] = n as u32;

        for c in &mut self.height_count {
            *c = 0;
        }
        for &h in &self.height {
            self.height_count[h as usize] += 1;
        }
        for bucket in &mut self.buckets {
            bucket.clear();
        }
        for q in &mut self.queued {
            *q = false;
        }
        self.lowest = n;
        for v in 0..n {
            self.cur[v] = 0;
            if v != self.s && v != self.t && self.excess[v] > 0 && (self.height[v] as usize) < n {
                self.buckets[self.height[v] as usize].push(v as u32);
                self.queued[v] = true;
                self.lowest = self.lowest.min(self.height[v] as usize);
            }
        }
        self.work = 0;
    }

    fn enqueue(&mut self, v: usize) {
        if v != self.s
            && v != self.t
            && !self.queued[v]
            && self.excess[v] > 0
            && (self.height[v] as usize) < self.n
        {
            self.buckets[self.height[v] as usize].push(v as u32);
            self.queued[v] = true;
            self.lowest = self.lowest.min(self.height[v] as usize);
        }
    }

    fn push(&mut self, arc: u32, amount: i64) {
        let a = arc as usize;
        self.resid[a] -= amount;
        self.resid[a ^ 1] += amount;
    }

    /// Relabels `u`, applying the gap heuristic when its old level empties.
    fn relabel(&mut self, u: usize) {
        let n = self.n;
        let old = self.height[u];
        let mut min_h = u32::MAX;
        for &a in &self.net.adj[u] {
            if self.resid[a as usize] > 0 {
                min_h = min_h.min(self.height[self.head(a)]);
            }
        }
        let new_h = if min_h == u32::MAX { n as u32 + 1 } else { min_h + 1 };
        debug_assert!(new_h > old);

        self.height_count[old as usize] -= 1;
        if self.height_count[old as usize] == 0 && (old as usize) < n {
            // Gap: no node is left at `old`, so every node between `old` and
            // `n` is cut off from the sink and can be parked above `n`.
            let parked = n as u32 + 1;
            for v in 0..n {
                let h = self.height[v];
                if h > old && (h as usize) < n {
                    self.height_count[h as usize] -= 1;
                    self.height_count[parked as usize] += 1;
                    self.height[v] = parked;
                }
            }
            self.height[u] = parked;
            self.height_count[parked as usize] += 1;
        } else {
            self.height[u] = new_h;
            self.height_count[new_h as usize] += 1;
        }
        self.cur[u] = 0;
    }

    /// Pushes from `u` until its excess is gone or it rises to `n` or above.
    fn discharge(&mut self, u: usize) {
        let n = self.n;
        while self.excess[u] > 0 {
            if (self.cur[u] as usize) == self.net.adj[u].len() {
                self.relabel(u);
                if self.height[u] as usize >= n {
                    return; // stranded; phase two sends this excess home
                }
                continue;
            }
            let a = self.net.adj[u][self.cur[u] as usize];
            let v = self.head(a);
            if self.resid[a as usize] > 0 && self.height[u] == self.height[v] + 1 {
                let amount = self.excess[u].min(self.resid[a as usize]);
                self.push(a, amount);
                self.excess[u] -= amount;
                self.excess[v] += amount;
                self.enqueue(v);
            } else {
                self.cur[u] += 1;
            }
        }
    }

    /// Phase one: maximum preflow. On return `excess[t]` is the max-flow
    /// value and no node below height `n` is active.
    fn run_phase_one(&mut self) {
        if self.net.is_degenerate_source() {
            return;
        }
        // Saturate every source arc, then label from scratch.
        let source_arcs: Vec<u32> = self.net.adj[self.s]
            .iter()
            .copied()
            .filter(|&a| self.resid[a as usize] > 0)
            .collect();
        for a in source_arcs {
            let amount = self.resid[a as usize];
            let v = self.head(a);
            self.push(a, amount);
            self.excess[self.s] -= amount;
            self.excess[v] += amount;
        }
        self.global_relabel();

        loop {
            // Find the lowest non-empty bucket. `enqueue` keeps `lowest`
            // a lower bound, so scanning up never misses an active node.
            let (u, level) = loop {
                if self.lowest >= self.n {
                    return;
                }
                match self.buckets[self.lowest].pop() {
                    Some(u) => break (u as usize, self.lowest),
                    None => self.lowest += 1,
                }
            };
            self.queued[u] = false;
            // Skip entries left stale by gap lifting or global relabeling.
            if self.height[u] as usize != level || self.excess[u] == 0 {
                continue;
            }
            self.discharge(u);
            self.work += 1;
            if self.work >= self.n {
                self.global_relabel();
            }
        }
    }

    /// Phase two: cancels excess stranded at interior nodes by walking flow
    /// backwards to the source, removing flow cycles encountered on the way.
    /// Afterwards flow conservation holds at every node but source and sink.
    fn cancel_stranded_excess(&mut self) {
        let n = self.n;
        // Per-node scan position over incoming flow-carrying arcs. Flow only
        // decreases in this phase, so positions never need to rewind.
        let mut scan: Vec<u32> = vec![0; n];
        // Position of each node on the current walk (+1), 0 = not on it.
        let mut on_path: Vec<u32> = vec![0; n];
        let mut path_nodes: Vec<u32> = Vec::new();
        // path_arcs[i] carries the flow from path_nodes[i + 1] into
        // path_nodes[i]; all ids are reverse companions, so `resid` on them
        // *is* the flow on the forward arc.
        let mut path_arcs: Vec<u32> = Vec::new();

        for v in 0..n {
            if v == self.s || v == self.t {
                continue;
            }
            while self.excess[v] > 0 {
                path_nodes.clear();
                path_arcs.clear();
                path_nodes.push(v as u32);
                on_path[v] = 1;
                let mut x = v;
                loop {
                    // Find an arc still carrying flow into x.
                    let arc = loop {
                        let i = scan[x] as usize;
                        let candidates = &self.net.adj[x];
                        assert!(
                            i < candidates.len(),
                            "positive excess with no incoming flow"
                        );
                        let a = candidates[i];
                        // Odd ids are reverse companions of arcs into x.
                        if a % 2 == 1 && self.resid[a as usize] > 0 {
                            break a;
                        }
                        scan[x] += 1;
                    };
                    let u = self.head(arc);
                    if u == self.s {
                        // Complete path: cancel as much as v still owes.
                        let mut amount = self.excess[v];
                        for &a in path_arcs.iter().chain([arc].iter()) {
                            amount = amount.min(self.resid[a as usize]);
                        }
                        for &a in path_arcs.iter().chain([arc].iter()) {
                            self.push(a, amount);
                        }
                        self.excess[v] -= amount;
                        self.excess[self.s] += amount;
                        for &p in &path_nodes {
                            on_path[p as usize] = 0;
                        }
                        break;
                    }
                    if on_path[u] != 0 {
                        // Flow cycle: remove it and resume from u.
                        let keep = on_path[u] as usize; // nodes to keep
                        let cycle_arcs: Vec<u32> = path_arcs[keep - 1..]
                            .iter()
                            .copied()
                            .chain([arc])
                            .collect();
                        let mut amount = i64::MAX;
                        for &a in &cycle_arcs {
                            amount = amount.min(self.resid[a as usize]);
                        }
                        for &a in &cycle_arcs {
                            self.push(a, amount);
                        }
                        for &p in &path_nodes[keep..] {
                            on_path[p as usize] = 0;
                        }
                        path_nodes.truncate(keep);
                        path_arcs.truncate(keep - 1);
                        x = u;
                        continue;
                    }
                    path_nodes.push(u as u32);
                    path_arcs.push(arc);
                    on_path[u] = path_nodes.len() as u32;
                    x = u;
                }
            }
        }
        debug_assert!(
            (0..n).all(|v| v == self.s || v == self.t || self.excess[v] == 0),
            "phase two left excess at an interior node"
        );
    }

    fn into_state(self) -> FlowState {
        let flow: Vec<i64> = (0..self.net.arcs.len())
            .step_by(2)
            .map(|a| self.resid[a + 1]) // reverse residual = forward flow
            .collect();
        FlowState {
            value: self.excess[self.t],
            flow,
            excess: self.excess,
            height: self.height,
        }
    }
}

/// Extracts the source-minimal minimum cut from a solved network.
///
/// The source side is everything reachable from the source in the residual
/// graph; the cut is the saturated forward arcs leaving it. If any of those
/// arcs is uncuttable (capacity at or above the network's infinite threshold)
/// the instance is infeasible and no cell list is returned.
pub fn extract_min_cut(net: &FlowNetwork, state: &FlowState) -> CutResult {
    let n = net.node_count();
    let mut reachable = vec![false; n];
    reachable[net.source().index()] = true;
    let mut queue = VecDeque::new();
    queue.push_back(net.source().index());
    while let Some(u) = queue.pop_front() {
        for &a in &net.adj[u] {
            let residual = if a % 2 == 0 {
                net.arcs[a as usize].cap - state.flow[a as usize / 2]
            } else {
                state.flow[a as usize / 2]
            };
            let v = net.arcs[a as usize].head as usize;
            if residual > 0 && !reachable[v] {
                reachable[v] = true;
                queue.push_back(v);
            }
        }
    }
    if let Some(sink) = net.sink() {
        debug_assert!(
            !reachable[sink.index()],
            "sink reachable in residual graph: flow is not maximum"
        );
    }

    let mut cut_caps = 0i64;
    let mut cells = Vec::new();
    let mut feasible = true;
    for (k, (tail, head, cap)) in net.forward_arcs().enumerate() {
        if reachable[tail.index()] && !reachable[head.index()] {
            debug_assert_eq!(state.flow[k], cap, "cut arc must be saturated");
            cut_caps += cap;
            if cap >= net.infinite_cap() {
                feasible = false;
            } else if let (NodeKind::CellIn(a), NodeKind::CellOut(b)) =
                (net.kind(tail), net.kind(head))
            {
                debug_assert_eq!(a, b);
                cells.push(a);
            }
        }
    }
    let source_side: Vec<NodeId> = (0..n).filter(|v| reachable[*v]).map(|v| net.node(v)).collect();

    if !feasible {
        return CutResult {
            value: CutValue::Infeasible,
            cells: Vec::new(),
            source_side,
            flow_value: state.value,
        };
    }
    cells.sort();
    debug_assert_eq!(
        cut_caps, state.value,
        "max-flow value must equal min-cut capacity"
    );
    CutResult {
        value: CutValue::Finite(cut_caps),
        cells,
        source_side,
        flow_value: state.value,
    }
}

/// Solves one blocking instance on a grid: builds the base network, attaches
/// the requested sink, runs max flow and extracts the cut.
pub fn min_vertex_cut(grid: &OccupancyGrid, selection: TargetSelection) -> CutResult {
    let base = build_base_network(grid);
    let net = match selection {
        TargetSelection::All => attach_merged_sink(&base, grid),
        TargetSelection::Single(id) => attach_single_sink(&base, grid, id),
    };
    solve_network(&net)
}

/// Max flow plus cut extraction on an already-built network.
pub fn solve_network(net: &FlowNetwork) -> CutResult {
    let state = max_flow(net);
    extract_min_cut(net, &state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flownet::FlowNetwork;

    const BIG: i64 = i64::MAX / 4;

    /// Hand-built network with node 0 as source.
    fn custom(n: usize, arcs: &[(usize, usize, i64)], sink: usize) -> FlowNetwork {
        let mut net = FlowNetwork::custom(n, 0, BIG);
        for &(t, h, c) in arcs {
            let (tail, head) = (net.node(t), net.node(h));
            net.add_arc(tail, head, c);
        }
        let sink = net.node(sink);
        net.set_sink(sink);
        net
    }

    #[test]
    fn single_arc_carries_its_capacity() {
        let net = custom(2, &[(0, 1, 5)], 1);
        let state = max_flow(&net);
        assert_eq!(state.value, 5);
        let cut = extract_min_cut(&net, &state);
        assert_eq!(cut.value, CutValue::Finite(5));
    }

    #[test]
    fn series_arcs_bottleneck() {
        let net = custom(3, &[(0, 1, 7), (1, 2, 4)], 2);
        let state = max_flow(&net);
        assert_eq!(state.value, 4);
        // Phase two must trim the over-push on the first arc.
        assert_eq!(state.flow, alloc::vec![4, 4]);
    }

    #[test]
    fn diamond_network() {
        // Both source arcs and both sink arcs can run full: 4 + 3, with one
        // unit rerouted across the middle.
        let net = custom(
            4,
            &[(0, 1, 4), (0, 2, 3), (1, 3, 3), (2, 3, 4), (1, 2, 10)],
            3,
        );
        let state = max_flow(&net);
        assert_eq!(state.value, 7);
    }

    #[test]
    fn zero_capacity_blocks() {
        let net = custom(3, &[(0, 1, 0), (1, 2, 9)], 2);
        let state = max_flow(&net);
        assert_eq!(state.value, 0);
    }

    #[test]
    fn disconnected_sink_gives_zero_flow_empty_cut() {
        let net = custom(3, &[(0, 1, 2)], 2);
        let state = max_flow(&net);
        assert_eq!(state.value, 0);
        let cut = extract_min_cut(&net, &state);
        assert_eq!(cut.value, CutValue::Finite(0));
        assert!(cut.cells.is_empty());
    }

    #[test]
    fn conservation_holds_after_phase_two() {
        let net = custom(
            6,
            &[
                (0, 1, 10),
                (0, 2, 10),
                (1, 3, 4),
                (2, 3, 5),
                (3, 4, 6),
                (1, 4, 1),
                (4, 5, 5),
                (2, 5, 1),
            ],
            5,
        );
        let state = max_flow(&net);
        let mut net_flow = alloc::vec![0i64; net.node_count()];
        for (k, (tail, head, _)) in net.forward_arcs().enumerate() {
            net_flow[tail.index()] -= state.flow[k];
            net_flow[head.index()] += state.flow[k];
        }
        for v in 1..5 {
            assert_eq!(net_flow[v], 0, "conservation at node {v}");
        }
        assert_eq!(state.value, 6);
        assert_eq!(net_flow[5], state.value);
    }

    #[test]
    fn stranded_excess_returns_to_source() {
        // The source over-pushes 10 into node 1; only 1 unit can continue.
        let net = custom(3, &[(0, 1, 10), (1, 2, 1)], 2);
        let state = max_flow(&net);
        assert_eq!(state.value, 1);
        assert_eq!(state.flow, alloc::vec![1, 1]);
        assert_eq!(state.excess[1], 0);
    }

    #[test]
    #[should_panic(expected = "requires a network with a sink")]
    fn solving_without_sink_panics() {
        let net = FlowNetwork::custom(2, 0, BIG);
        max_flow(&net);
    }

    #[test]
    fn grid_cut_on_empty_grid_single_target() {
        // Lone target in open space: the four neighbors form the only
        // minimum cut.
        let grid = OccupancyGrid::from_ascii(
            ".....\n\
             .....\n\
             ..A..\n\
             .....\n\
             .....",
        )
        .unwrap();
        let cut = min_vertex_cut(&grid, TargetSelection::All);
        assert_eq!(cut.value, CutValue::Finite(4));
        assert_eq!(
            cut.cells,
            alloc::vec![
                Coord::new(1, 2),
                Coord::new(2, 1),
                Coord::new(2, 3),
                Coord::new(3, 2)
            ]
        );
        assert_eq!(cut.flow_value, 4);
    }

    #[test]
    fn grid_cut_uses_corridor_chokepoint() {
        // The pocket is reachable only through the corridor at column 5;
        // one monitor anywhere on it suffices and the solver picks the
        // source-nearest spot.
        let grid = OccupancyGrid::from_ascii(
            ".........\n\
             .#######.\n\
             .#..A..#.\n\
             .###.###.\n\
             ...#.#...\n\
             ...#.#...\n\
             ...#.#...\n\
             .........",
        )
        .unwrap();
        let cut = min_vertex_cut(&grid, TargetSelection::All);
        assert_eq!(cut.value, CutValue::Finite(1));
        assert_eq!(cut.cells, alloc::vec![Coord::new(6, 4)]);
    }

    #[test]
    fn target_on_open_border_approach_is_infeasible() {
        // Target adjacent to a free border cell: no interior cell can block
        // that approach.
        let grid = OccupancyGrid::from_ascii(
            ".....\n\
             .A...\n\
             .....",
        )
        .unwrap();
        let cut = min_vertex_cut(&grid, TargetSelection::All);
        assert_eq!(cut.value, CutValue::Infeasible);
        assert!(cut.cells.is_empty());
    }

    #[test]
    fn walled_grid_needs_no_monitors() {
        let grid = OccupancyGrid::from_ascii(
            "#####\n\
             #.A.#\n\
             #####",
        )
        .unwrap();
        let cut = min_vertex_cut(&grid, TargetSelection::All);
        assert_eq!(cut.value, CutValue::Finite(0));
        assert!(cut.cells.is_empty());
    }

    #[test]
    fn single_target_selection_ignores_other_targets() {
        // Sealing A alone costs 1 (its corridor); B sits in the open and
        // costs more on its own.
        let grid = OccupancyGrid::from_ascii(
            ".........\n\
             ..###....\n\
             ..#A#....\n\
             ..#.#....\n\
             ..#.#.B..\n\
             .........\n\
             .........",
        )
        .unwrap();
        let cut_a = min_vertex_cut(&grid, TargetSelection::Single(0));
        assert_eq!(cut_a.value, CutValue::Finite(1));
        let cut_b = min_vertex_cut(&grid, TargetSelection::Single(1));
        assert!(matches!(cut_b.value, CutValue::Finite(v) if v >= 2));
    }

    #[test]
    fn merged_cut_never_exceeds_sum_of_single_cuts() {
        for seed in 0..12 {
            let spec = crate::grid::GenSpec::open(
                24,
                24,
                10,
                crate::grid::TargetCount::Range { min: 2, max: 4 },
                seed,
            );
            let grid = crate::grid::generate(&spec).unwrap();
            let merged = min_vertex_cut(&grid, TargetSelection::All);
            let mut sum = 0i64;
            let mut all_finite = true;
            for id in 0..grid.target_count() {
                match min_vertex_cut(&grid, TargetSelection::Single(id)).value {
                    CutValue::Finite(v) => sum += v,
                    CutValue::Infeasible => all_finite = false,
                }
            }
            if all_finite {
                match merged.value {
                    CutValue::Finite(v) => {
                        assert!(v <= sum, "seed {seed}: merged {v} > sum {sum}")
                    }
                    CutValue::Infeasible => panic!("seed {seed}: merged infeasible"),
                }
            }
        }
    }
}
