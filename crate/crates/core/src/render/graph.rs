use alloc::string::String;
use alloc::vec::Vec;

use super::{glyph_height, text_width, RasterImage, RenderError, Role, Style};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDrawing {
    pub labels: Vec<String>,
    pub edges: Vec<GraphEdge>,
    /// Nodes painted in the highlight color (source and target, typically).
    pub highlights: Vec<usize>,
    /// Explicit node centers; `None` selects the circular layout.
    pub positions: Option<Vec<(i64, i64)>>,
    pub canvas: u32,
}

pub const NODE_RADIUS: i64 = 20;
const CANVAS: u32 = 512;

impl GraphDrawing {
    pub fn new(labels: Vec<String>, edges: Vec<GraphEdge>) -> Self {
        GraphDrawing {
            labels,
            edges,
            highlights: Vec::new(),
            positions: None,
            canvas: CANVAS,
        }
    }
}

/// Node `i` of `n` sits at angle 2*pi*i/n on a circle centered in the canvas.
pub fn circular_layout(n: usize, canvas: u32) -> Vec<(i64, i64)> {
    let c = f64::from(canvas) / 2.0;
    let radius = c - NODE_RADIUS as f64 - 24.0;
    (0..n)
        .map(|i| {
            if n == 1 {
                return (c as i64, c as i64);
            }
            let theta = 2.0 * core::f64::consts::PI * i as f64 / n as f64;
            let x = c + radius * libm::cos(theta);
            let y = c + radius * libm::sin(theta);
            (libm::round(x) as i64, libm::round(y) as i64)
        })
        .collect()
}

/// Axis-aligned box occupied by a node label, `(x0, y0, x1, y1)` inclusive.
pub type LabelBox = (i64, i64, i64, i64);

pub fn node_label_boxes(drawing: &GraphDrawing, style: &Style) -> Vec<LabelBox> {
    let positions = drawing
        .positions
        .clone()
        .unwrap_or_else(|| circular_layout(drawing.labels.len(), drawing.canvas));
    let h = i64::from(glyph_height(style.font_scale));
    drawing
        .labels
        .iter()
        .zip(positions)
        .map(|(l, (x, y))| {
            let w = i64::from(text_width(l, style.font_scale));
            (x - w / 2, y - h / 2, x - w / 2 + w - 1, y - h / 2 + h - 1)
        })
        .collect()
}

/// Positions along an edge, in percent from `a`, tried in order for its label.
const LABEL_STOPS: [i64; 5] = [50, 38, 62, 28, 72];

fn overlaps(a: LabelBox, b: LabelBox) -> bool {
    a.0 <= b.2 && b.0 <= a.2 && a.1 <= b.3 && b.1 <= a.3
}

pub fn render_graph(drawing: &GraphDrawing, style: &Style) -> Result<RasterImage, RenderError> {
    let mut img = RasterImage::checked(drawing.canvas, drawing.canvas, Role::Background.color(), style.max_dim)?;
    let positions = drawing
        .positions
        .clone()
        .unwrap_or_else(|| circular_layout(drawing.labels.len(), drawing.canvas));
    let edge = Role::Edge.color();
    for e in &drawing.edges {
        let (x0, y0) = positions[e.a];
        let (x1, y1) = positions[e.b];
        img.draw_line(x0, y0, x1, y1, 2, edge);
    }
    // weights go on top of every edge so crossings never hide them
    let mut placed: Vec<LabelBox> = Vec::new();
    for e in &drawing.edges {
        if let Some(label) = &e.label {
            let (x0, y0) = positions[e.a];
            let (x1, y1) = positions[e.b];
            let w = i64::from(text_width(label, style.font_scale));
            let h = i64::from(glyph_height(style.font_scale));
            let at = |t: i64| (x0 + (x1 - x0) * t / 100, y0 + (y1 - y0) * t / 100);
            let boxed = |(mx, my): (i64, i64)| (mx - w / 2 - 2, my - h / 2 - 2, mx + w / 2 + 2, my + h / 2 + 2);
            let (mx, my) = LABEL_STOPS
                .iter()
                .map(|&t| at(t))
                .find(|&p| !placed.iter().any(|b| overlaps(*b, boxed(p))))
                .unwrap_or_else(|| at(50));
            placed.push(boxed((mx, my)));
            img.fill_rect(mx - w / 2 - 2, my - h / 2 - 2, w + 4, h + 4, Role::Background.color());
            img.draw_text_centered(mx, my, label, style.font_scale, Role::Text.color());
        }
    }
    for (i, ((x, y), label)) in positions.iter().zip(&drawing.labels).enumerate() {
        let fill = if drawing.highlights.contains(&i) {
            Role::Highlight
        } else {
            Role::Node
        };
        img.fill_circle(*x, *y, NODE_RADIUS, fill.color());
        img.stroke_circle(*x, *y, NODE_RADIUS, 2, Role::Text.color());
        img.draw_text_centered(*x, *y, label, style.font_scale, Role::Text.color());
    }
    Ok(img)
}
