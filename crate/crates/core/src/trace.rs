//! Time series of free-boundary positions extracted from a simulation.

/// One interface sample: inner edge a and outer edge b of the gas support at
/// time t (a < b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSample {
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

/// The recorded free-boundary history of a run, plus the detected focus time
/// (the moment the inner edge reaches the origin), if any.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InterfaceTrace {
    pub samples: Vec<InterfaceSample>,
    pub focus_time: Option<f64>,
}

impl InterfaceTrace {
    /// Earliest index k such that the next `run` consecutive increments all
    /// move the right way for a filling hole: Δa ≤ 0 and Δb ≥ 0. Early samples
    /// can jitter while the discrete profile relaxes; this locates where the
    /// monotone regime begins.
    pub fn monotonicity_onset(&self, run: usize) -> Option<usize> {
        if self.samples.len() < run + 1 {
            return None;
        }
        'outer: for k in 0..self.samples.len() - run {
            for j in k..k + run {
                let (s0, s1) = (self.samples[j], self.samples[j + 1]);
                if s1.a > s0.a || s1.b < s0.b {
                    continue 'outer;
                }
            }
            return Some(k);
        }
        None
    }

    /// True when every increment from index k onward has Δa ≤ 0 and Δb ≥ 0.
    pub fn monotone_after(&self, k: usize) -> bool {
        self.samples[k..]
            .windows(2)
            .all(|w| w[1].a <= w[0].a && w[1].b >= w[0].b)
    }
}
