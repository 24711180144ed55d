//! Debug dump of a flow network in a greppable text form.
//!
//! The dump lists every forward arc as `tail head capacity`, followed by a
//! legend mapping node indices back to their grid meaning. It exists for
//! poking at the reduction by hand; nothing parses it back.

use cordon_core::flownet::{FlowNetwork, NodeKind};

/// Renders the whole network. Arcs appear in construction order, which for
/// grid-built networks is row-major.
pub fn dump_network(net: &FlowNetwork) -> String {
    let mut out = format!(
        "cordon-net v1 nodes={} arcs={} inf={}\n",
        net.node_count(),
        net.arc_count(),
        net.infinite_cap()
    );
    out.push_str("arcs (tail head capacity):\n");
    for (tail, head, cap) in net.forward_arcs() {
        out.push_str(&format!("{} {} {cap}\n", tail.index(), head.index()));
    }
    out.push_str("nodes:\n");
    for i in 0..net.node_count() {
        let label = match net.kind(net.node(i)) {
            NodeKind::CellIn(c) => format!("in({},{})", c.row, c.col),
            NodeKind::CellOut(c) => format!("out({},{})", c.row, c.col),
            NodeKind::SuperSource => "source".to_string(),
            NodeKind::SuperSink => "sink".to_string(),
            NodeKind::TargetSink(id) => format!("sink({id})"),
            NodeKind::Plain => "plain".to_string(),
        };
        out.push_str(&format!("{i} {label}\n"));
    }
    out
}
