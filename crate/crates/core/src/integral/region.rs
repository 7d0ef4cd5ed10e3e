use crate::error::{Error, Result};

/// Rectangle between table corners `(x0, y0)` and `(x1, y1)`.
///
/// It covers pixel columns `x0..x1` and rows `y0..y1` (zero-based, end
/// exclusive), which is the `x0 < x <= x1` convention of one-based table
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Region {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Region {
    pub const fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        Self { x0, y0, x1, y1 }
    }

    /// The single pixel at `(x, y)`.
    pub const fn pixel(x: usize, y: usize) -> Self {
        Self::new(x, y, x + 1, y + 1)
    }

    pub const fn full(width: usize, height: usize) -> Self {
        Self::new(0, 0, width, height)
    }

    /// Window of half-extent `(half_w, half_h)` centred on `(cx, cy)`, clamped
    /// to a `width` x `height` image. The unclamped window spans
    /// `2 * half_w + 1` columns.
    #[inline]
    pub fn centered(
        cx: usize,
        cy: usize,
        half_w: usize,
        half_h: usize,
        width: usize,
        height: usize,
    ) -> Self {
        Self {
            x0: cx.saturating_sub(half_w),
            y0: cy.saturating_sub(half_h),
            x1: (cx + half_w + 1).min(width),
            y1: (cy + half_h + 1).min(height),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.x1 - self.x0
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.y1 - self.y0
    }

    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.width() * self.height()
    }

    pub fn translated(&self, dx: usize, dy: usize) -> Self {
        Self::new(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)
    }

    /// Reject empty regions and regions outside a `width` x `height` image.
    pub fn check(&self, width: usize, height: usize) -> Result<()> {
        if self.x0 >= self.x1 || self.y0 >= self.y1 {
            return Err(Error::Contract(format!("degenerate region {self:?}")));
        }
        if self.x1 > width || self.y1 > height {
            return Err(Error::Contract(format!(
                "region {self:?} exceeds a {width}x{height} image"
            )));
        }
        Ok(())
    }
}
