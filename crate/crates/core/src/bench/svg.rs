use std::fmt::Write;

use super::geometry::{Obstacle, Point, World};
use super::roadmap::Roadmap;
use super::runner::EpisodeRender;
use crate::dyngraph::Edge;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

fn px(p: &Point) -> (f64, f64) {
    let s = SIZE - 2.0 * MARGIN;
    (MARGIN + p.x * s, SIZE - MARGIN - p.y * s)
}

fn line(out: &mut String, a: &Point, b: &Point, style: &str) {
    let (x1, y1) = px(a);
    let (x2, y2) = px(b);
    let _ = writeln!(
        out,
        r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#
    );
}

fn edge(out: &mut String, pts: &[Point], e: Edge, style: &str) {
    line(out, &pts[e.source.index()], &pts[e.target.index()], style);
}

/// Obstacles filled, evaluated edges thin (red when blocked), tree edges
/// bold, expanded vertices as dots, the returned path on top.
pub fn render_episode(roadmap: &Roadmap, world: &World, ep: &EpisodeRender) -> String {
    let pts = &roadmap.points;
    let s = SIZE - 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{} episode {}</title>", ep.planner, ep.episode);
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#eef3fb"/>"##
    );
    for o in &world.obstacles {
        match *o {
            Obstacle::Rect { min, max } => {
                let (x, y) = px(&Point::new(min[0], max[1]));
                let _ = writeln!(
                    out,
                    r##"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="#e8a0a0"/>"##,
                    (max[0] - min[0]) * s,
                    (max[1] - min[1]) * s
                );
            }
            Obstacle::Circle { center, radius } => {
                let (cx, cy) = px(&center.into());
                let _ = writeln!(
                    out,
                    r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="#e8a0a0"/>"##,
                    radius * s
                );
            }
        }
    }
    for &(e, cost) in &ep.evaluated {
        let colour = if cost.is_finite() {
            "#6a8fc7"
        } else {
            "#c0392b"
        };
        edge(
            &mut out,
            pts,
            e,
            &format!(r#"stroke="{colour}" stroke-width="0.8""#),
        );
    }
    for &e in &ep.tree {
        edge(&mut out, pts, e, r##"stroke="#333" stroke-width="2""##);
    }
    for v in &ep.expanded {
        let (cx, cy) = px(&pts[v.index()]);
        let _ = writeln!(
            out,
            r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="2.5" fill="#222"/>"##
        );
    }
    for pair in ep.path.windows(2) {
        edge(
            &mut out,
            pts,
            Edge::new(pair[0], pair[1]),
            r##"stroke="#1e9e50" stroke-width="4""##,
        );
    }
    for (v, colour) in [(roadmap.start, "#1e9e50"), (roadmap.goal, "#d4a017")] {
        let (cx, cy) = px(&pts[v.index()]);
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="6" fill="{colour}"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::roadmap::sample_points;
    use crate::bench::scenario::Sampling;
    use crate::dyngraph::VertexId;

    #[test]
    fn draws_every_layer() {
        let r = Roadmap::from_points(
            sample_points(Sampling::Grid, 4),
            1.0,
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            0.01,
        )
        .unwrap();
        let world = World::new(vec![
            Obstacle::Rect {
                min: [0.4, 0.4],
                max: [0.6, 0.6],
            },
            Obstacle::Circle {
                center: [0.2, 0.8],
                radius: 0.05,
            },
        ]);
        let ep = EpisodeRender {
            planner: "lgls".into(),
            episode: 0,
            evaluated: vec![(Edge::new(0, 1), 1.0), (Edge::new(0, 2), f64::INFINITY)],
            tree: vec![Edge::new(0, 1)],
            expanded: vec![VertexId(0), VertexId(1)],
            path: vec![VertexId(0), VertexId(1), VertexId(3)],
        };
        let svg = render_episode(&r, &world, &ep);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<line").count(), 2 + 1 + 2);
        assert_eq!(svg.matches("<circle").count(), 1 + 2 + 2);
        assert!(svg.contains("#c0392b"));
    }
}
