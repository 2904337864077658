use alloc::format;

use super::{glyph_height, text_width, RasterImage, RenderError, Role, Style};

/// World-space window mapped onto a square canvas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub canvas: u32,
    pub margin: u32,
}

impl Viewport {
    pub fn symmetric(half_x: f64, half_y: f64) -> Self {
        Viewport {
            x_min: -half_x,
            x_max: half_x,
            y_min: -half_y,
            y_max: half_y,
            canvas: 512,
            margin: 24,
        }
    }

    fn span(&self) -> f64 {
        f64::from(self.canvas - 2 * self.margin)
    }

    pub fn to_px(&self, x: f64, y: f64) -> (i64, i64) {
        let m = f64::from(self.margin);
        let px = m + (x - self.x_min) * self.span() / (self.x_max - self.x_min);
        let py = m + (self.y_max - y) * self.span() / (self.y_max - self.y_min);
        (libm::round(px) as i64, libm::round(py) as i64)
    }

    /// Sub-interval of `[x_min, x_max]` on which `y = a*x + b` stays inside.
    pub fn clip(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        if a == 0.0 {
            return (self.y_min..=self.y_max)
                .contains(&b)
                .then_some((self.x_min, self.x_max));
        }
        let x_at_min = (self.y_min - b) / a;
        let x_at_max = (self.y_max - b) / a;
        let (lo, hi) = if x_at_min < x_at_max {
            (x_at_min, x_at_max)
        } else {
            (x_at_max, x_at_min)
        };
        let lo = lo.max(self.x_min);
        let hi = hi.min(self.x_max);
        (lo <= hi).then_some((lo, hi))
    }
}

/// Plots `y = a*x + b` for each `(a, b)`, labelled with 1-based indices.
pub fn render_lines(lines: &[(f64, f64)], vp: &Viewport, style: &Style) -> Result<RasterImage, RenderError> {
    let mut img = RasterImage::checked(vp.canvas, vp.canvas, Role::Background.color(), style.max_dim)?;
    let axis = Role::GridLine.color();
    let (x0, y_axis) = vp.to_px(vp.x_min, 0.0);
    let (x1, _) = vp.to_px(vp.x_max, 0.0);
    if (vp.y_min..=vp.y_max).contains(&0.0) {
        img.draw_line(x0, y_axis, x1, y_axis, 1, axis);
    }
    if (vp.x_min..=vp.x_max).contains(&0.0) {
        let (xa, ya0) = vp.to_px(0.0, vp.y_max);
        let (_, ya1) = vp.to_px(0.0, vp.y_min);
        img.draw_line(xa, ya0, xa, ya1, 1, axis);
    }
    // integer ticks along both axes
    let mut t = libm::ceil(vp.x_min);
    while t <= vp.x_max {
        let (px, py) = vp.to_px(t, 0.0);
        img.draw_line(px, py - 3, px, py + 3, 1, axis);
        t += 1.0;
    }
    let mut t = libm::ceil(vp.y_min);
    while t <= vp.y_max {
        let (px, py) = vp.to_px(0.0, t);
        img.draw_line(px - 3, py, px + 3, py, 1, axis);
        t += 1.0;
    }
    let line = Role::Line.color();
    for &(a, b) in lines {
        if let Some((lo, hi)) = vp.clip(a, b) {
            let (px0, py0) = vp.to_px(lo, a * lo + b);
            let (px1, py1) = vp.to_px(hi, a * hi + b);
            img.draw_line(px0, py0, px1, py1, 2, line);
        }
    }
    let h = i64::from(glyph_height(style.font_scale));
    for (i, &(a, b)) in lines.iter().enumerate() {
        if let Some((lo, hi)) = vp.clip(a, b) {
            // label sits a little inside the right end of the visible segment
            let x = hi - (hi - lo) * 0.08;
            let (px, py) = vp.to_px(x, a * x + b);
            let label = format!("{}", i + 1);
            let w = i64::from(text_width(&label, style.font_scale));
            let lx = px.clamp(w / 2 + 2, i64::from(vp.canvas) - w / 2 - 2);
            let ly = (py - h).clamp(h / 2 + 2, i64::from(vp.canvas) - h / 2 - 2);
            img.fill_rect(lx - w / 2 - 2, ly - h / 2 - 2, w + 4, h + 4, Role::Background.color());
            img.draw_text_centered(lx, ly, &label, style.font_scale, Role::Text.color());
        }
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizontal_line_through_origin_row() {
        let vp = Viewport::symmetric(5.0, 5.0);
        let img = render_lines(&[(0.0, 0.0)], &vp, &Style::default()).unwrap();
        let (_, row) = vp.to_px(0.0, 0.0);
        let (left, _) = vp.to_px(-4.0, 0.0);
        assert_eq!(img.get(left as u32, row as u32), Role::Line.color());
    }

    #[test]
    fn crossing_lines_meet_near_the_analytic_point() {
        let vp = Viewport::symmetric(10.0, 10.0);
        // y = x + 1 and y = -2x + 4 cross at (1, 2)
        let lines = [(1.0, 1.0), (-2.0, 4.0)];
        let img = render_lines(&lines, &vp, &Style::default()).unwrap();
        let (px, py) = vp.to_px(1.0, 2.0);
        let near =
            (-1..=1).any(|dx| (-1..=1).any(|dy| img.get((px + dx) as u32, (py + dy) as u32) == Role::Line.color()));
        assert!(near);
        // each line alone also passes within a pixel of the point
        for l in lines {
            let single = render_lines(&[l], &vp, &Style::default()).unwrap();
            let hit = (-1..=1)
                .any(|dx| (-1..=1).any(|dy| single.get((px + dx) as u32, (py + dy) as u32) == Role::Line.color()));
            assert!(hit);
        }
    }

    #[test]
    fn clip_drops_lines_outside_the_window() {
        let vp = Viewport::symmetric(5.0, 5.0);
        assert_eq!(vp.clip(0.0, 9.0), None);
        let (lo, hi) = vp.clip(1.0, 0.0).unwrap();
        assert_eq!((lo, hi), (-5.0, 5.0));
    }
}
