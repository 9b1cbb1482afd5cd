use std::fmt::Write;

use crate::community::{color_assignment, Partition};
use crate::scalar::Scalar;
use crate::ugraph::UGraph;

/// Fill colors cycled through by community.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const MARGIN: f64 = 10.0;

/// Renders nodes as community-colored circles over straight edge lines.
/// Output bytes depend only on the inputs.
pub fn export_svg<F: Scalar>(
    graph: &UGraph,
    positions: &[[F; 2]],
    partition: &Partition,
    node_radius: F,
) -> String {
    assert_eq!(positions.len(), graph.node_count(), "one position per node");
    assert_eq!(partition.len(), graph.node_count(), "one community per node");
    let r = node_radius.to_f64().unwrap_or(0.0).max(0.0);
    let pts: Vec<(f64, f64)> = positions
        .iter()
        .map(|p| (p[0].to_f64().unwrap_or(0.0), p[1].to_f64().unwrap_or(0.0)))
        .collect();

    let (min_x, min_y, max_x, max_y) = if pts.is_empty() {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        pts.iter().fold(
            (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(x, y)| (a.min(x), b.min(y), c.max(x), d.max(y)),
        )
    };
    let pad = r + MARGIN;
    let (x0, y0) = (min_x - pad, min_y - pad);
    let (w, h) = (max_x - min_x + 2.0 * pad, max_y - min_y + 2.0 * pad);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"{x0:.2} {y0:.2} {w:.2} {h:.2}\">"
    );
    if graph.edge_count() > 0 {
        out.push_str("<g stroke=\"#999999\" stroke-opacity=\"0.6\" stroke-width=\"1\">\n");
        for (u, v) in graph.edges() {
            let _ = writeln!(
                out,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
                pts[u].0, pts[u].1, pts[v].0, pts[v].1
            );
        }
        out.push_str("</g>\n");
    }
    if !pts.is_empty() {
        let colors = color_assignment(partition, PALETTE.len());
        out.push_str("<g stroke=\"#ffffff\" stroke-width=\"1.5\">\n");
        for (node, &(x, y)) in pts.iter().enumerate() {
            let fill = PALETTE[colors[&partition.community_of(node)]];
            let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r:.2}\" fill=\"{fill}\"/>");
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
