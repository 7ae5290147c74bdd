//! Hilbert space-filling-curve partitioning.

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};
use crate::nbody::Particle;

use super::Assignment;

pub const DEFAULT_HILBERT_ORDER: u32 = 10;
pub const MAX_HILBERT_ORDER: u32 = 16;

/// Cell of `p` on the `2^order × 2^order` grid over `bbox`, clamped to the
/// boundary cells.
pub fn cell_of(p: Vec2, bbox: &Rect, order: u32) -> (u32, u32) {
    let side = 1u32 << order;
    let axis = |v: f64, lo: f64, extent: f64| -> u32 {
        if extent <= 0.0 {
            return 0;
        }
        let t = ((v - lo) / extent * side as f64).floor();
        if t.is_nan() || t < 0.0 {
            0
        } else if t >= side as f64 {
            side - 1
        } else {
            t as u32
        }
    };
    (
        axis(p.x, bbox.min.x, bbox.width()),
        axis(p.y, bbox.min.y, bbox.height()),
    )
}

/// Distance along the Hilbert curve of grid cell `(x, y)`.
pub fn cell_to_index(x: u32, y: u32, order: u32) -> u64 {
    let n = 1u64 << order;
    let (mut x, mut y) = (x as u64, y as u64);
    let mut d = 0u64;
    let mut s = n / 2;
    while s > 0 {
        let rx = u64::from(x & s > 0);
        let ry = u64::from(y & s > 0);
        d += s * s * ((3 * rx) ^ ry);
        rotate_quadrant(n, &mut x, &mut y, rx, ry);
        s /= 2;
    }
    d
}

/// Inverse of [`cell_to_index`].
pub fn index_to_cell(d: u64, order: u32) -> (u32, u32) {
    let n = 1u64 << order;
    let (mut x, mut y) = (0u64, 0u64);
    let mut t = d;
    let mut s = 1u64;
    while s < n {
        let rx = 1 & (t / 2);
        let ry = 1 & (t ^ rx);
        rotate_quadrant(s, &mut x, &mut y, rx, ry);
        x += s * rx;
        y += s * ry;
        t /= 4;
        s *= 2;
    }
    (x as u32, y as u32)
}

fn rotate_quadrant(n: u64, x: &mut u64, y: &mut u64, rx: u64, ry: u64) {
    if ry == 0 {
        if rx == 1 {
            *x = n - 1 - *x;
            *y = n - 1 - *y;
        }
        std::mem::swap(x, y);
    }
}

fn check_order(order: u32) -> Result<()> {
    if !(1..=MAX_HILBERT_ORDER).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "hilbert order must be in 1..={MAX_HILBERT_ORDER}, got {order}"
        )));
    }
    Ok(())
}

/// Hilbert index in `[0, 4^order)` of the cell holding `p`.
pub fn hilbert_index(p: Vec2, bbox: &Rect, order: u32) -> Result<u64> {
    check_order(order)?;
    let (x, y) = cell_of(p, bbox, order);
    Ok(cell_to_index(x, y, order))
}

/// Chunk boundaries of a curve partition: rank `r` owns the `(index, id)`
/// keys up to and including `upper[r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveChunks {
    bbox: Rect,
    order: u32,
    upper: Vec<(u64, usize)>,
}

impl CurveChunks {
    pub fn parts(&self) -> usize {
        self.upper.len()
    }

    pub fn locate(&self, p: Vec2, id: usize) -> usize {
        let (x, y) = cell_of(p, &self.bbox, self.order);
        let key = (cell_to_index(x, y, self.order), id);
        self.upper
            .partition_point(|b| *b < key)
            .min(self.upper.len() - 1)
    }
}

/// Sorts particles along the curve and cuts the sequence into `parts`
/// contiguous chunks whose sizes differ by at most one.
pub fn hsfc_partition(
    particles: &[Particle],
    parts: usize,
    bbox: &Rect,
    order: u32,
) -> Result<(CurveChunks, Assignment)> {
    check_order(order)?;
    if parts == 0 {
        return Err(Error::InvalidParameter("part count must be >= 1".into()));
    }
    if parts > particles.len() {
        return Err(Error::TooManyParts {
            parts,
            particles: particles.len(),
        });
    }
    let mut keyed: Vec<(u64, usize)> = particles
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (x, y) = cell_of(p.position, bbox, order);
            (cell_to_index(x, y, order), i)
        })
        .collect();
    keyed.sort_unstable();

    let n = particles.len();
    let (base, extra) = (n / parts, n % parts);
    let mut ranks = vec![0usize; n];
    let mut upper = Vec::with_capacity(parts);
    let mut start = 0;
    for rank in 0..parts {
        let len = base + usize::from(rank < extra);
        for &(_, i) in &keyed[start..start + len] {
            ranks[i] = rank;
        }
        upper.push(keyed[start + len - 1]);
        start += len;
    }
    Ok((
        CurveChunks {
            bbox: *bbox,
            order,
            upper,
        },
        Assignment::new(ranks, parts),
    ))
}
