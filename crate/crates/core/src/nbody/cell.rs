use crate::geometry::{Rect, Vec2};

/// Uniform bin grid over the domain with cells no smaller than the cut-off,
/// so every pair closer than the cut-off sits in the same or adjacent cells.
///
/// Bins are rebuilt with a counting sort; within a cell, particle indices
/// stay ascending, which fixes the pair visiting order.
#[derive(Debug, Clone)]
pub struct CellGrid {
    origin: Vec2,
    cell_w: f64,
    cell_h: f64,
    nx: usize,
    ny: usize,
    starts: Vec<usize>,
    items: Vec<usize>,
}

impl CellGrid {
    pub fn new(domain: &Rect, min_cell: f64) -> Self {
        let count = |extent: f64| -> usize {
            if min_cell > 0.0 && extent > 0.0 {
                ((extent / min_cell).floor() as usize).max(1)
            } else {
                1
            }
        };
        let (nx, ny) = (count(domain.width()), count(domain.height()));
        CellGrid {
            origin: domain.min,
            cell_w: domain.width() / nx as f64,
            cell_h: domain.height() / ny as f64,
            nx,
            ny,
            starts: vec![0; nx * ny + 1],
            items: Vec::new(),
        }
    }

    pub fn build(domain: &Rect, min_cell: f64, positions: &[Vec2]) -> Self {
        let mut g = CellGrid::new(domain, min_cell);
        g.rebuild(positions);
        g
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.cell_w, self.cell_h)
    }

    pub fn cell_of(&self, p: Vec2) -> (usize, usize) {
        let clamp = |v: f64, lo: f64, size: f64, n: usize| -> usize {
            if size <= 0.0 {
                return 0;
            }
            let t = ((v - lo) / size).floor();
            if t.is_nan() || t < 0.0 {
                0
            } else {
                (t as usize).min(n - 1)
            }
        };
        (
            clamp(p.x, self.origin.x, self.cell_w, self.nx),
            clamp(p.y, self.origin.y, self.cell_h, self.ny),
        )
    }

    pub fn rebuild(&mut self, positions: &[Vec2]) {
        let cells: Vec<usize> = positions
            .iter()
            .map(|&p| {
                let (cx, cy) = self.cell_of(p);
                cy * self.nx + cx
            })
            .collect();
        self.starts.iter_mut().for_each(|s| *s = 0);
        for &c in &cells {
            self.starts[c + 1] += 1;
        }
        for c in 0..self.nx * self.ny {
            self.starts[c + 1] += self.starts[c];
        }
        let mut fill = self.starts.clone();
        self.items.resize(positions.len(), 0);
        for (i, &c) in cells.iter().enumerate() {
            self.items[fill[c]] = i;
            fill[c] += 1;
        }
    }

    pub fn cell(&self, cx: usize, cy: usize) -> &[usize] {
        let c = cy * self.nx + cx;
        &self.items[self.starts[c]..self.starts[c + 1]]
    }

    /// Calls `f(i, j, positions[i] - positions[j], r²)` once for every
    /// unordered pair closer than `r_cut`, in a fixed order.
    pub fn for_each_pair(
        &self,
        positions: &[Vec2],
        r_cut: f64,
        mut f: impl FnMut(usize, usize, Vec2, f64),
    ) {
        let rc2 = r_cut * r_cut;
        // half stencil: each neighboring cell pair is visited once
        const STENCIL: [(isize, isize); 4] = [(1, 0), (-1, 1), (0, 1), (1, 1)];
        for cy in 0..self.ny {
            for cx in 0..self.nx {
                let here = self.cell(cx, cy);
                for (a, &i) in here.iter().enumerate() {
                    let pi = positions[i];
                    for &j in &here[a + 1..] {
                        let d = pi - positions[j];
                        let r2 = d.norm_sq();
                        if r2 < rc2 {
                            f(i, j, d, r2);
                        }
                    }
                }
                for (dx, dy) in STENCIL {
                    let (nx, ny) = (cx as isize + dx, cy as isize + dy);
                    if nx < 0 || ny < 0 || nx >= self.nx as isize || ny >= self.ny as isize {
                        continue;
                    }
                    let there = self.cell(nx as usize, ny as usize);
                    for &i in here {
                        let pi = positions[i];
                        for &j in there {
                            let d = pi - positions[j];
                            let r2 = d.norm_sq();
                            if r2 < rc2 {
                                f(i, j, d, r2);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn cells_not_smaller_than_cutoff() {
        let g = CellGrid::new(&Rect::unit(), 0.03);
        assert_eq!(g.dims(), (33, 33));
        assert!(g.cell_size().0 >= 0.03 && g.cell_size().1 >= 0.03);
    }

    #[test]
    fn every_particle_in_one_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pos: Vec<Vec2> = (0..500).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
        let g = CellGrid::build(&Rect::unit(), 0.07, &pos);
        let (nx, ny) = g.dims();
        let mut seen = vec![0; pos.len()];
        for cy in 0..ny {
            for cx in 0..nx {
                for &i in g.cell(cx, cy) {
                    seen[i] += 1;
                    assert_eq!(g.cell_of(pos[i]), (cx, cy));
                }
            }
        }
        assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn pairs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pos: Vec<Vec2> = (0..400).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
        let rc = 0.06;
        let g = CellGrid::build(&Rect::unit(), rc, &pos);
        let mut got = BTreeSet::new();
        g.for_each_pair(&pos, rc, |i, j, d, r2| {
            assert_eq!(d, pos[i] - pos[j]);
            assert_eq!(r2, d.norm_sq());
            assert!(got.insert((i.min(j), i.max(j))));
        });
        let mut want = BTreeSet::new();
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                if (pos[i] - pos[j]).norm_sq() < rc * rc {
                    want.insert((i, j));
                }
            }
        }
        assert_eq!(got, want);
    }
}
