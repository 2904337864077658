//! PNG codec with pinned settings: 8-bit RGB, no interlacing, default
//! deflate level, no adaptive filtering. The same pixels always encode to
//! the same bytes.

use std::io::Cursor;

use gymv_core::RasterImage;

#[derive(Debug, thiserror::Error)]
pub enum PngError {
    #[error("png encode: {0}")]
    Encode(#[from] png::EncodingError),
    #[error("png decode: {0}")]
    Decode(#[from] png::DecodingError),
    #[error("unsupported png layout: {0}")]
    Layout(String),
}

pub fn encode(img: &RasterImage) -> Result<Vec<u8>, PngError> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width, img.height);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        enc.set_compression(png::Compression::Default);
        enc.set_filter(png::FilterType::Sub);
        enc.set_adaptive_filter(png::AdaptiveFilterType::NonAdaptive);
        let mut w = enc.write_header()?;
        w.write_image_data(&img.pixels)?;
        w.finish()?;
    }
    Ok(out)
}

/// Decodes 8-bit RGB or RGBA (alpha dropped) into a raster.
pub fn decode(bytes: &[u8]) -> Result<RasterImage, PngError> {
    let mut dec = png::Decoder::new(Cursor::new(bytes));
    dec.set_transformations(png::Transformations::IDENTITY);
    let mut reader = dec.read_info()?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let frame = reader.next_frame(&mut buf)?;
    if frame.bit_depth != png::BitDepth::Eight {
        return Err(PngError::Layout(format!("bit depth {:?}", frame.bit_depth)));
    }
    let data = &buf[..frame.buffer_size()];
    let pixels = match frame.color_type {
        png::ColorType::Rgb => data.to_vec(),
        png::ColorType::Rgba => data.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect(),
        other => return Err(PngError::Layout(format!("color type {other:?}"))),
    };
    Ok(RasterImage {
        width: frame.width,
        height: frame.height,
        pixels,
    })
}
