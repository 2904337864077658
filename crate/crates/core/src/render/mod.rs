//! Deterministic rasterization into RGB8 buffers.
//!
//! No anti-aliasing and no system fonts: every pixel is a pure function of
//! the drawn state, so encoded images are byte-stable across machines.

mod font;
mod graph;
mod grid;
mod lines;
mod palette;

use alloc::vec;
use alloc::vec::Vec;

pub use self::font::{glyph_height, text_width, FONT_SCALE};
pub use self::graph::{
    circular_layout, node_label_boxes, render_graph, GraphDrawing, GraphEdge, LabelBox, NODE_RADIUS,
};
pub use self::grid::{render_grid, Cell, GridLayout};
pub use self::lines::{render_lines, Viewport};
pub use self::palette::{Rgb, Role, FAMILIES};

/// Upper bound on either image dimension.
pub const MAX_DIM: u32 = 768;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    pub cell_px: u32,
    pub margin: u32,
    pub font_scale: u32,
    pub max_dim: u32,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            cell_px: 40,
            margin: 16,
            font_scale: FONT_SCALE,
            max_dim: MAX_DIM,
        }
    }
}

impl Style {
    pub fn with_cell(cell_px: u32) -> Self {
        Style {
            cell_px,
            ..Style::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("image {width}x{height} exceeds the {max}px limit")]
pub struct RenderError {
    pub width: u32,
    pub height: u32,
    pub max: u32,
}

/// Row-major RGB8 image.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RasterImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl core::fmt::Debug for RasterImage {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "RasterImage({}x{})", self.width, self.height)
    }
}

impl RasterImage {
    pub fn new(width: u32, height: u32, fill: Rgb) -> Self {
        let mut pixels = vec![0u8; (width * height * 3) as usize];
        for px in pixels.chunks_exact_mut(3) {
            px.copy_from_slice(&fill.0);
        }
        RasterImage { width, height, pixels }
    }

    pub fn checked(width: u32, height: u32, fill: Rgb, max: u32) -> Result<Self, RenderError> {
        if width == 0 || height == 0 || width > max || height > max {
            return Err(RenderError { width, height, max });
        }
        Ok(RasterImage::new(width, height, fill))
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        let i = ((y * self.width + x) * 3) as usize;
        Rgb([self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]])
    }

    pub fn put(&mut self, x: i64, y: i64, c: Rgb) {
        if x < 0 || y < 0 || x >= i64::from(self.width) || y >= i64::from(self.height) {
            return;
        }
        let i = ((y as u32 * self.width + x as u32) * 3) as usize;
        self.pixels[i..i + 3].copy_from_slice(&c.0);
    }

    pub fn fill_rect(&mut self, x: i64, y: i64, w: i64, h: i64, c: Rgb) {
        let x0 = x.max(0);
        let y0 = y.max(0);
        let x1 = (x + w).min(i64::from(self.width));
        let y1 = (y + h).min(i64::from(self.height));
        for yy in y0..y1 {
            for xx in x0..x1 {
                self.put(xx, yy, c);
            }
        }
    }

    pub fn stroke_rect(&mut self, x: i64, y: i64, w: i64, h: i64, thickness: i64, c: Rgb) {
        self.fill_rect(x, y, w, thickness, c);
        self.fill_rect(x, y + h - thickness, w, thickness, c);
        self.fill_rect(x, y, thickness, h, c);
        self.fill_rect(x + w - thickness, y, thickness, h, c);
    }

    /// Bresenham line with a square brush of side `thickness`.
    pub fn draw_line(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, thickness: i64, c: Rgb) {
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        let (mut x, mut y) = (x0, y0);
        let half = thickness / 2;
        loop {
            self.fill_rect(x - half, y - half, thickness, thickness, c);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }

    pub fn fill_circle(&mut self, cx: i64, cy: i64, r: i64, c: Rgb) {
        for y in -r..=r {
            for x in -r..=r {
                if x * x + y * y <= r * r {
                    self.put(cx + x, cy + y, c);
                }
            }
        }
    }

    pub fn stroke_circle(&mut self, cx: i64, cy: i64, r: i64, thickness: i64, c: Rgb) {
        let inner = (r - thickness).max(0);
        for y in -r..=r {
            for x in -r..=r {
                let d = x * x + y * y;
                if d <= r * r && d > inner * inner {
                    self.put(cx + x, cy + y, c);
                }
            }
        }
    }

    /// Draws `text` with its top-left corner at `(x, y)`.
    pub fn draw_text(&mut self, x: i64, y: i64, text: &str, scale: u32, c: Rgb) {
        font::draw(self, x, y, text, scale, c);
    }

    /// Draws `text` centered on `(cx, cy)`.
    pub fn draw_text_centered(&mut self, cx: i64, cy: i64, text: &str, scale: u32, c: Rgb) {
        let w = i64::from(text_width(text, scale));
        let h = i64::from(glyph_height(scale));
        self.draw_text(cx - w / 2, cy - h / 2, text, scale, c);
    }

    /// Number of pixels equal to `c`.
    pub fn count(&self, c: Rgb) -> usize {
        self.pixels.chunks_exact(3).filter(|p| *p == c.0).count()
    }
}
