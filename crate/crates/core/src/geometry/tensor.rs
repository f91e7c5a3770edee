use std::ops::{Index, IndexMut};

use serde::Serialize;

/// Dense tensor with every index running over `0..dim`, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor { dim, rank, data: vec![0.0; dim.pow(rank as u32)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Frobenius norm of the coordinate components.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn offset<const R: usize>(&self, idx: [usize; R]) -> usize {
        debug_assert_eq!(R, self.rank, "tensor rank mismatch");
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }
}

impl<const R: usize> Index<[usize; R]> for Tensor {
    type Output = f64;
    fn index(&self, idx: [usize; R]) -> &f64 {
        &self.data[self.offset(idx)]
    }
}

impl<const R: usize> IndexMut<[usize; R]> for Tensor {
    fn index_mut(&mut self, idx: [usize; R]) -> &mut f64 {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}
