use crate::error::{Error, Result};

/// Half-extents of one receptive field.
///
/// A pixel's window spans `2 * half_w + 1` columns and `2 * half_h + 1` rows
/// centred on it, clamped to the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceptiveField {
    pub half_w: usize,
    pub half_h: usize,
}

/// Receptive fields from largest to smallest, halving at every step.
///
/// The first field's half-extents equal the image size, so every pixel's
/// first window covers the whole image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleSchedule {
    fields: Vec<ReceptiveField>,
}

impl ScaleSchedule {
    pub fn fields(&self) -> &[ReceptiveField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReceptiveField> {
        self.fields.iter()
    }
}

/// Largest scale count for which the smallest field stays at least 2x2.
pub fn max_scales(width: usize, height: usize) -> usize {
    let side = width.min(height);
    if side < 2 {
        0
    } else {
        side.ilog2() as usize
    }
}

/// Build the `scales`-entry halving pyramid for a `width` x `height` image.
pub fn make_scale_schedule(width: usize, height: usize, scales: usize) -> Result<ScaleSchedule> {
    if width < 2 || height < 2 {
        return Err(Error::Parameter(format!(
            "image must be at least 2x2, got {width}x{height}"
        )));
    }
    if scales == 0 {
        return Err(Error::Parameter("scale count must be at least 1".into()));
    }
    let limit = max_scales(width, height);
    if scales > limit {
        return Err(Error::Parameter(format!(
            "{scales} scales would shrink the smallest field of a {width}x{height} image below 2x2; \
             at most {limit} scales are admissible"
        )));
    }
    let fields = (0..scales)
        .map(|i| ReceptiveField {
            half_w: width >> i,
            half_h: height >> i,
        })
        .collect();
    Ok(ScaleSchedule { fields })
}
