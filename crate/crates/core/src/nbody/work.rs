use crate::geometry::Vec2;
use crate::partition::Assignment;

use super::cell::CellGrid;

/// Interactions charged to each rank in one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkVector(pub Vec<f64>);

impl WorkVector {
    pub fn zeros(parts: usize) -> Self {
        WorkVector(vec![0.0; parts])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Counts pairs closer than `r_cut`. A pair owned by one rank costs that rank
/// one unit; a pair spanning two ranks costs each of them one unit.
pub fn count_work(
    positions: &[Vec2],
    assignment: &Assignment,
    grid: &CellGrid,
    r_cut: f64,
) -> WorkVector {
    let mut counts = vec![0u64; assignment.parts()];
    grid.for_each_pair(positions, r_cut, |i, j, _, _| {
        let (ri, rj) = (assignment.rank_of(i), assignment.rank_of(j));
        counts[ri] += 1;
        if rj != ri {
            counts[rj] += 1;
        }
    });
    WorkVector(counts.into_iter().map(|c| c as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn run(pos: &[Vec2], ranks: Vec<usize>, parts: usize, rc: f64) -> Vec<f64> {
        let g = CellGrid::build(&Rect::unit(), rc, pos);
        count_work(pos, &Assignment::new(ranks, parts), &g, rc).0
    }

    #[test]
    fn examples() {
        let far = [
            Vec2::new(0.1, 0.1),
            Vec2::new(0.5, 0.5),
            Vec2::new(0.9, 0.1),
        ];
        assert_eq!(run(&far, vec![0, 1, 0], 2, 0.05), vec![0.0, 0.0]);
        let pair = [Vec2::new(0.5, 0.5), Vec2::new(0.52, 0.5)];
        assert_eq!(run(&pair, vec![0, 0], 2, 0.05), vec![1.0, 0.0]);
        assert_eq!(run(&pair, vec![0, 1], 2, 0.05), vec![1.0, 1.0]);
    }

    #[test]
    fn total_against_all_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 500;
        let rc = 0.05;
        let pos: Vec<Vec2> = (0..n).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
        let ranks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let work = run(&pos, ranks.clone(), 4, rc);
        let (mut own, mut cross) = (0.0, 0.0);
        let mut per = [0.0; 4];
        for i in 0..n {
            for j in i + 1..n {
                if (pos[i] - pos[j]).norm() < rc {
                    if ranks[i] == ranks[j] {
                        own += 1.0;
                        per[ranks[i]] += 1.0;
                    } else {
                        cross += 1.0;
                        per[ranks[i]] += 1.0;
                        per[ranks[j]] += 1.0;
                    }
                }
            }
        }
        assert_eq!(work.iter().sum::<f64>(), own + 2.0 * cross);
        assert_eq!(work, per.to_vec());
    }
}
