//! Supremum search over a parameter interval for piecewise-smooth functions.

use crate::scalar::Real;

/// Sweep layout: a uniform grid plus clustered points on both sides of each breakpoint.
#[derive(Debug, Clone, Copy)]
pub struct SweepGrid {
    pub uniform: usize,
    pub per_breakpoint: usize,
    /// Golden-section refinement steps around the best few grid points.
    pub refine_steps: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self { uniform: 512, per_breakpoint: 32, refine_steps: 40 }
    }
}

impl SweepGrid {
    /// Sorted, deduplicated sample points in `[lo, hi]`.
    pub fn points<T: Real>(&self, lo: T, hi: T, breakpoints: &[T]) -> Vec<T> {
        let mut pts = Vec::with_capacity(self.uniform + 1 + breakpoints.len() * (self.per_breakpoint + 1));
        let n = self.uniform.max(1);
        for i in 0..=n {
            pts.push(lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n));
        }
        let mut bps: Vec<T> = breakpoints.iter().copied().filter(|&b| b >= lo && b <= hi).collect();
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bps.dedup();
        let side = self.per_breakpoint / 2;
        for (i, &b) in bps.iter().enumerate() {
            pts.push(b);
            let left_gap = if i > 0 { b - bps[i - 1] } else { b - lo };
            let right_gap = if i + 1 < bps.len() { bps[i + 1] - b } else { hi - b };
            for j in 0..side {
                let scale = T::lit(0.5f64.powi(j as i32 + 1));
                if left_gap > T::zero() {
                    pts.push(b - left_gap * scale * T::half());
                }
                if right_gap > T::zero() {
                    pts.push(b + right_gap * scale * T::half());
                }
            }
        }
        pts.retain(|&x| x >= lo && x <= hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// `(sup, argmax)` of `f` over `[lo, hi]`.
    pub fn sup<T: Real, F: Fn(T) -> T>(&self, f: F, lo: T, hi: T, breakpoints: &[T]) -> (T, T) {
        let pts = self.points(lo, hi, breakpoints);
        let vals: Vec<T> = pts.iter().map(|&x| f(x)).collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
        let mut best = (vals[order[0]], pts[order[0]]);
        for &i in order.iter().take(3) {
            let a = if i > 0 { pts[i - 1] } else { pts[i] };
            let b = if i + 1 < pts.len() { pts[i + 1] } else { pts[i] };
            if a < b {
                let (v, x) = golden_max(&f, a, b, self.refine_steps);
                if v > best.0 {
                    best = (v, x);
                }
            }
        }
        best
    }
}

fn golden_max<T: Real, F: Fn(T) -> T>(f: &F, mut a: T, mut b: T, steps: usize) -> (T, T) {
    let ratio = T::lit(0.618_033_988_749_894_8);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..steps {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (f1, x1)
    } else {
        (f2, x2)
    }
}
