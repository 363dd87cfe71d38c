use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Axis-wise 3D transform. Forward carries the `1/N` normalisation so that
/// coefficients are Fourier means.
pub struct Transform {
    dims: [usize; 3],
    fwd: [Option<Arc<dyn Fft<f64>>>; 3],
    inv: [Option<Arc<dyn Fft<f64>>>; 3],
}

thread_local! {
    static PLANS: RefCell<HashMap<[usize; 3], Rc<Transform>>> = RefCell::new(HashMap::new());
}

/// Runs `f` with this thread's transform for `dims`.
pub fn with_transform<R>(dims: [usize; 3], f: impl FnOnce(&Transform) -> R) -> R {
    let plan = PLANS.with(|p| {
        p.borrow_mut().entry(dims).or_insert_with(|| Rc::new(Transform::new(dims))).clone()
    });
    f(&plan)
}

impl Transform {
    pub fn new(dims: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = std::array::from_fn(|a| (dims[a] > 1).then(|| planner.plan_fft_forward(dims[a])));
        let inv = std::array::from_fn(|a| (dims[a] > 1).then(|| planner.plan_fft_inverse(dims[a])));
        Transform { dims, fwd, inv }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.apply(data, &self.fwd);
        let s = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.apply(data, &self.inv);
    }

    fn apply(&self, data: &mut [Complex64], plans: &[Option<Arc<dyn Fft<f64>>>; 3]) {
        let [n1, n2, n3] = self.dims;
        assert_eq!(data.len(), n1 * n2 * n3);
        let mut scratch = Vec::new();
        if let Some(p) = &plans[2] {
            scratch.resize(p.get_inplace_scratch_len(), Complex64::default());
            p.process_with_scratch(data, &mut scratch);
        }
        if let Some(p) = &plans[1] {
            scratch.resize(p.get_inplace_scratch_len(), Complex64::default());
            let mut buf = vec![Complex64::default(); n2 * n3];
            for plane in data.chunks_mut(n2 * n3) {
                for i2 in 0..n2 {
                    for i3 in 0..n3 {
                        buf[i3 * n2 + i2] = plane[i2 * n3 + i3];
                    }
                }
                p.process_with_scratch(&mut buf, &mut scratch);
                for i2 in 0..n2 {
                    for i3 in 0..n3 {
                        plane[i2 * n3 + i3] = buf[i3 * n2 + i2];
                    }
                }
            }
        }
        if let Some(p) = &plans[0] {
            scratch.resize(p.get_inplace_scratch_len(), Complex64::default());
            let m = n2 * n3;
            let mut buf = vec![Complex64::default(); n1 * m];
            for i1 in 0..n1 {
                for j in 0..m {
                    buf[j * n1 + i1] = data[i1 * m + j];
                }
            }
            p.process_with_scratch(&mut buf, &mut scratch);
            for i1 in 0..n1 {
                for j in 0..m {
                    data[i1 * m + j] = buf[j * n1 + i1];
                }
            }
        }
    }
}
