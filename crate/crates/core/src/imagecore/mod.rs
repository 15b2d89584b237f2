//! Numeric substrate: image buffers, color math, filtering, rasterization
//! and rectangle search.

mod blur;
mod buffer;
mod ciede2000;
mod color;
mod io;
mod raster;
mod rect;
mod resample;

pub use blur::{gaussian_blur, gaussian_blur_gray, gaussian_kernel, masked_gaussian_blur};
pub(crate) use blur::blur_plane;
pub use buffer::{GrayImage, LinearImage, PixelMask, Polygon, Rect};
pub use ciede2000::ciede2000;
pub use color::{
    adobe_linear_to_srgb_linear, adobe_to_srgb_matrix, adobe_to_xyz_matrix, gray_value,
    linear_srgb_to_lab, srgb_decode, srgb_decode_value, srgb_encode, srgb_encode_value,
    srgb_to_xyz_matrix, to_grayscale, EncodedImage, GamutConversion, Lab, Mat3,
};
pub(crate) use color::srgb_encode_buffer;
pub use io::{
    image_dimensions, read_linear_image, read_mask, write_exr, write_mask_png, write_png16,
    Transfer,
};
pub use raster::{fill_polygon, rasterize_polygons};
pub use rect::largest_inscribed_rect;
pub use resample::{resample_bilinear, resample_bilinear_window};
