//! Sparse rank computation for large graded strand matrices.
//!
//! Strand matrices of structured resolutions are extremely sparse (a handful
//! of entries per column), so elimination with a fill-minimizing pivot rule
//! stays fast where dense elimination would be quadratic in memory.

use crate::field::Scalar;
use std::collections::HashMap;

/// Sparse matrix in triplet form; duplicate entries are summed.
pub struct SparseTriplets {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseTriplets {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseTriplets { rows, cols, entries: Vec::new() }
    }

    pub fn push(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert!(i < self.rows && j < self.cols);
        if !v.is_zero() {
            self.entries.push((i, j, v));
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Rank by fraction-producing Gaussian elimination with a Markowitz-style
    /// pivot rule (least fill-in estimate among the sparsest rows).
    pub fn rank(self) -> usize {
        let SparseTriplets { rows, cols, entries } = self;
        // Row-wise maps column -> value.
        let mut row_data: Vec<HashMap<usize, Scalar>> = vec![HashMap::new(); rows];
        let mut col_count: Vec<usize> = vec![0; cols];
        for (i, j, v) in entries {
            match row_data[i].entry(j) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(v);
                    col_count[j] += 1;
                }
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&v);
                    if s.is_zero() {
                        e.remove();
                        col_count[j] -= 1;
                    } else {
                        e.insert(s);
                    }
                }
            }
        }
        let mut active_rows: Vec<bool> = row_data.iter().map(|r| !r.is_empty()).collect();
        let mut rank = 0;
        loop {
            // Pivot choice: minimize (row_nnz - 1) * (col_nnz - 1).
            let mut best: Option<(usize, usize, usize)> = None;
            for i in 0..rows {
                if !active_rows[i] || row_data[i].is_empty() {
                    continue;
                }
                let rn = row_data[i].len();
                for (&j, _) in row_data[i].iter() {
                    let score = (rn - 1) * (col_count[j].saturating_sub(1));
                    if best.map_or(true, |(s, _, _)| score < s) {
                        best = Some((score, i, j));
                    }
                }
                if let Some((0, _, _)) = best {
                    break;
                }
            }
            let Some((_, pi, pj)) = best else { break };
            rank += 1;
            let pivot_row: Vec<(usize, Scalar)> =
                row_data[pi].iter().map(|(&j, v)| (j, v.clone())).collect();
            for (j, _) in &pivot_row {
                col_count[*j] -= 1;
            }
            let pivot_inv = row_data[pi][&pj].inv();
            active_rows[pi] = false;
            row_data[pi].clear();
            for i in 0..rows {
                if !active_rows[i] {
                    continue;
                }
                let Some(f) = row_data[i].get(&pj).map(|v| v.mul(&pivot_inv)) else {
                    continue;
                };
                for (j, pv) in &pivot_row {
                    let delta = f.mul(pv).neg();
                    match row_data[i].entry(*j) {
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(delta);
                            col_count[*j] += 1;
                        }
                        std::collections::hash_map::Entry::Occupied(mut e) => {
                            let s = e.get().add(&delta);
                            if s.is_zero() {
                                e.remove();
                                col_count[*j] -= 1;
                            } else {
                                e.insert(s);
                            }
                        }
                    }
                }
                debug_assert!(!row_data[i].contains_key(&pj));
                if row_data[i].is_empty() {
                    active_rows[i] = false;
                }
            }
        }
        rank
    }
}
