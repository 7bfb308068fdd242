//! Compensated summation for the long positive-term sums in this crate.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }

    pub fn merge(&mut self, other: NeumaierSum) {
        self.add(other.s);
        self.add(other.c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation() {
        let mut acc = NeumaierSum::new();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn long_positive_sum_stays_accurate() {
        let mut acc = NeumaierSum::new();
        let n = 10_000_000u64;
        for _ in 0..n {
            acc.add(0.1);
        }
        let exact = 0.1 * n as f64;
        assert!((acc.value() - exact).abs() / exact < 1e-15);
    }
}
