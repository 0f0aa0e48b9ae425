use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::roots::RootCloud;
use crate::{Error, Result};

pub type Rgb = [u8; 3];

/// Pixel raster over a rectangle of the complex plane. Pixel `(0, 0)` is
/// the top-left corner; rows run downward in the imaginary part. Each pixel
/// is the half-open cell `[re0, re1) x (im0, im1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub width: usize,
    pub height: usize,
    pub min: Complex64,
    pub max: Complex64,
}

impl Geometry {
    pub fn new(width: usize, height: usize, min: Complex64, max: Complex64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image size must be positive".into()));
        }
        if width.checked_mul(height).is_none_or(|p| p > 1 << 28) {
            return Err(Error::InvalidArgument("image too large".into()));
        }
        let finite = [min.re, min.im, max.re, max.im].iter().all(|x| x.is_finite());
        if !finite || !(min.re < max.re && min.im < max.im) {
            return Err(Error::InvalidArgument("viewport must have positive area".into()));
        }
        Ok(Self { width, height, min, max })
    }

    /// Square viewport centered at `center` with half-width `half`.
    pub fn square(size: usize, center: Complex64, half: f64) -> Result<Self> {
        let d = Complex64::new(half, half);
        Self::new(size, size, center - d, center + d)
    }

    pub fn pixel_size(&self) -> (f64, f64) {
        (
            (self.max.re - self.min.re) / self.width as f64,
            (self.max.im - self.min.im) / self.height as f64,
        )
    }

    pub fn pixel_center(&self, x: usize, y: usize) -> Complex64 {
        let (dx, dy) = self.pixel_size();
        Complex64::new(
            self.min.re + (x as f64 + 0.5) * dx,
            self.max.im - (y as f64 + 0.5) * dy,
        )
    }

    /// Pixel containing `z`, or `None` outside the viewport.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let (dx, dy) = self.pixel_size();
        let fx = ((z.re - self.min.re) / dx).floor();
        let fy = ((self.max.im - z.im) / dy).floor();
        (fx >= 0.0 && fy >= 0.0 && fx < self.width as f64 && fy < self.height as f64)
            .then_some((fx as usize, fy as usize))
    }

    /// Fractional pixel coordinates of `z` (pixel centers sit at `k + 0.5`).
    pub(crate) fn to_pixel_space(&self, z: Complex64) -> (f64, f64) {
        let (dx, dy) = self.pixel_size();
        ((z.re - self.min.re) / dx, (self.max.im - z.im) / dy)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageGrid {
    pub geometry: Geometry,
    /// Row-major RGB bytes.
    pub pixels: Vec<u8>,
}

impl ImageGrid {
    pub fn new(geometry: Geometry, fill: Rgb) -> Self {
        Self {
            geometry,
            pixels: fill.repeat(geometry.width * geometry.height),
        }
    }

    pub fn width(&self) -> usize {
        self.geometry.width
    }

    pub fn height(&self) -> usize {
        self.geometry.height
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (y * self.geometry.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: Rgb) {
        let i = 3 * (y * self.geometry.width + x);
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }

    /// Colors the pixel containing `z`; points outside are ignored.
    pub fn plot(&mut self, z: Complex64, rgb: Rgb) {
        if let Some((x, y)) = self.geometry.pixel_of(z) {
            self.set(x, y, rgb);
        }
    }

    /// Marks every cloud point in `rgb`.
    pub fn overlay_cloud(&mut self, cloud: &RootCloud, rgb: Rgb) {
        for p in &cloud.points {
            self.plot(p.z, rgb);
        }
    }

    pub fn count(&self, rgb: Rgb) -> usize {
        self.pixels.chunks_exact(3).filter(|p| *p == rgb).count()
    }

    /// Binary PPM: `P6\n<w> <h>\n255\n` followed by the RGB bytes.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.geometry.width, self.geometry.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn write_image(img: &ImageGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, img.to_ppm()).map_err(|e| io_error(path, e))
}

/// Writes the cloud as JSON when the path ends in `.json`, as CSV otherwise.
pub fn write_cloud(cloud: &RootCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = if path.extension().is_some_and(|e| e == "json") {
        cloud.to_json()
    } else {
        cloud.to_csv()
    };
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}
