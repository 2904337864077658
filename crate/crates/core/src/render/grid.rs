use alloc::string::String;
use alloc::vec::Vec;

use super::{RasterImage, RenderError, Role, Style};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub role: Role,
    pub glyph: Option<String>,
    pub glyph_role: Role,
}

impl Cell {
    pub fn plain(role: Role) -> Self {
        Cell {
            role,
            glyph: None,
            glyph_role: Role::Text,
        }
    }

    pub fn text(role: Role, glyph: impl Into<String>) -> Self {
        Cell {
            role,
            glyph: Some(glyph.into()),
            glyph_role: Role::Text,
        }
    }

    pub fn mark(role: Role, glyph: impl Into<String>, glyph_role: Role) -> Self {
        Cell {
            role,
            glyph: Some(glyph.into()),
            glyph_role,
        }
    }
}

/// Where the cells of a rendered grid sit in the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridLayout {
    pub origin_x: u32,
    pub origin_y: u32,
    pub cell_px: u32,
    pub rows: u32,
    pub cols: u32,
}

impl GridLayout {
    pub fn cell_center(&self, r: u32, c: u32) -> (u32, u32) {
        (
            self.origin_x + c * self.cell_px + self.cell_px / 2,
            self.origin_y + r * self.cell_px + self.cell_px / 2,
        )
    }
}

const LINE_PX: i64 = 2;

/// Paints a matrix of roles as uniform blocks separated by gridlines. The
/// margin is half a cell, so both dimensions are multiples of the cell size.
pub fn render_grid(cells: &[Vec<Cell>], style: &Style) -> Result<(RasterImage, GridLayout), RenderError> {
    let rows = cells.len() as u32;
    let cols = cells.first().map_or(0, |r| r.len()) as u32;
    let cp = style.cell_px;
    let margin = cp / 2;
    let width = cols * cp + 2 * margin;
    let height = rows * cp + 2 * margin;
    let mut img = RasterImage::checked(width, height, Role::Background.color(), style.max_dim)?;
    if rows == 0 || cols == 0 {
        return Err(RenderError {
            width: 0,
            height: 0,
            max: style.max_dim,
        });
    }
    let layout = GridLayout {
        origin_x: margin,
        origin_y: margin,
        cell_px: cp,
        rows,
        cols,
    };
    for (r, row) in cells.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            let x = i64::from(margin + c as u32 * cp);
            let y = i64::from(margin + r as u32 * cp);
            img.fill_rect(x, y, i64::from(cp), i64::from(cp), cell.role.color());
            if let Some(g) = &cell.glyph {
                let (cx, cy) = layout.cell_center(r as u32, c as u32);
                img.draw_text_centered(
                    i64::from(cx),
                    i64::from(cy),
                    g,
                    style.font_scale,
                    cell.glyph_role.color(),
                );
            }
        }
    }
    let grid = Role::GridLine.color();
    for r in 0..=rows {
        let y = i64::from(margin + r * cp) - LINE_PX / 2;
        img.fill_rect(i64::from(margin) - 1, y, i64::from(cols * cp) + 2, LINE_PX, grid);
    }
    for c in 0..=cols {
        let x = i64::from(margin + c * cp) - LINE_PX / 2;
        img.fill_rect(x, i64::from(margin) - 1, LINE_PX, i64::from(rows * cp) + 2, grid);
    }
    Ok((img, layout))
}
