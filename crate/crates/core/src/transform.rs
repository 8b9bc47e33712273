//! Fast transform over the character group.
//!
//! For weights `w(a)` on the units modulo `q`, computes
//! `S(chi) = sum_a chi(a) w(a)` for every character at once. Reindexing the
//! units by discrete logarithms turns the sum into a multidimensional DFT over
//! the cyclic components (a single length-`(q-1)` DFT for prime `q`).

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::characters::CharacterGroup;
use crate::scalar::Real;

pub struct CharacterTransform<T: Real> {
    orders: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
    plans: Vec<Arc<dyn Fft<T>>>,
}

impl<T: Real> std::fmt::Debug for CharacterTransform<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterTransform")
            .field("orders", &self.orders)
            .finish()
    }
}

impl<T: Real> CharacterTransform<T> {
    pub fn new(group: &CharacterGroup) -> Self {
        let s = group.structure();
        let orders = s.orders();
        let mut planner = FftPlanner::<T>::new();
        // chi(a) = e(+sum c_j a_j / n_j): the unnormalized inverse DFT
        let plans = orders.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        Self {
            strides: s.strides().to_vec(),
            len: s.unit_count(),
            orders,
            plans,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In place: `data[u]` (unit flat index) becomes `S(chi)` at character index `u`.
    pub fn apply(&self, data: &mut [Complex<T>]) {
        assert_eq!(data.len(), self.len, "weight vector must have phi(q) entries");
        for (axis, plan) in self.plans.iter().enumerate() {
            let n = self.orders[axis];
            if n <= 1 {
                continue;
            }
            let stride = self.strides[axis];
            if stride == 1 {
                plan.process(data);
                continue;
            }
            let block = n * stride;
            let mut line = vec![Complex::new(T::zero(), T::zero()); n];
            for start in (0..self.len).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = data[base + k * stride];
                    }
                    plan.process(&mut line);
                    for (k, v) in line.iter().enumerate() {
                        data[base + k * stride] = *v;
                    }
                }
            }
        }
    }

    /// Transform of weights given per residue `0..q` (non-units ignored).
    pub fn apply_residues(&self, group: &CharacterGroup, by_residue: &[Complex<T>]) -> Vec<Complex<T>> {
        let s = group.structure();
        let mut data: Vec<Complex<T>> = (0..self.len).map(|u| by_residue[s.unit(u) as usize]).collect();
        self.apply(&mut data);
        data
    }
}
