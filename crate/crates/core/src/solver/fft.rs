//! Separable d-dimensional FFT on a cube of side N, row-major layout.

use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::linalg::C64;

pub struct CubeFft {
    pub dims: usize,
    pub side: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl CubeFft {
    pub fn new(dims: usize, side: usize) -> Self {
        let mut planner = FftPlanner::new();
        CubeFft { dims, side, forward: planner.plan_fft_forward(side), inverse: planner.plan_fft_inverse(side) }
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [C64]) {
        self.run(data, &self.forward);
    }

    /// Inverse transform in place, scaled so that inverse∘forward = identity.
    pub fn inverse(&self, data: &mut [C64]) {
        self.run(data, &self.inverse);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    fn run(&self, data: &mut [C64], plan: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len());
        let n = self.side;
        let mut scratch = vec![C64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        let mut buf = Vec::new();
        for axis in 0..self.dims {
            let stride = n.pow((self.dims - 1 - axis) as u32);
            if stride == 1 {
                plan.process_with_scratch(data, &mut scratch);
                continue;
            }
            // Gather each slab so that lines along `axis` are contiguous.
            let slab = n * stride;
            buf.resize(slab, C64::new(0.0, 0.0));
            for chunk in data.chunks_mut(slab) {
                for t in 0..n {
                    for inner in 0..stride {
                        buf[inner * n + t] = chunk[t * stride + inner];
                    }
                }
                plan.process_with_scratch(&mut buf, &mut scratch);
                for t in 0..n {
                    for inner in 0..stride {
                        chunk[t * stride + inner] = buf[inner * n + t];
                    }
                }
            }
        }
    }
}
