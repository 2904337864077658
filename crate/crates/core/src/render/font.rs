//! Embedded 8x8 bitmap glyphs, integer-scaled.

use font8x8::legacy::BASIC_LEGACY;

use super::{RasterImage, Rgb};

/// Default scale: 8px cells become 16px, so glyph ink is at least 10px tall.
pub const FONT_SCALE: u32 = 2;

/// Rows 0..7 of the basic glyphs carry ink; row 7 is descender space.
const INK_ROWS: u32 = 7;

pub fn text_width(text: &str, scale: u32) -> u32 {
    text.chars().count() as u32 * 8 * scale
}

/// Height of the inked part of a glyph line.
pub fn glyph_height(scale: u32) -> u32 {
    INK_ROWS * scale
}

fn glyph(ch: char) -> [u8; 8] {
    let code = ch as usize;
    if code < 128 {
        BASIC_LEGACY[code]
    } else {
        BASIC_LEGACY[b'?' as usize]
    }
}

pub(super) fn draw(img: &mut RasterImage, x: i64, y: i64, text: &str, scale: u32, c: Rgb) {
    let s = i64::from(scale);
    for (i, ch) in text.chars().enumerate() {
        let rows = glyph(ch);
        let ox = x + i as i64 * 8 * s;
        for (ry, bits) in rows.iter().enumerate() {
            for rx in 0..8 {
                // bit 0 is the leftmost pixel
                if bits & (1 << rx) != 0 {
                    img.fill_rect(ox + rx * s, y + ry as i64 * s, s, s, c);
                }
            }
        }
    }
}
