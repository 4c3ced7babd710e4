use super::BasisError;

/// Strictly increasing time nodes carrying piecewise-linear hat functions.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGrid {
    times: Vec<f64>,
}

impl TemporalGrid {
    pub fn new(times: Vec<f64>) -> Result<Self, BasisError> {
        if times.len() < 2 {
            return Err(BasisError::GridTooShort(times.len()));
        }
        if let Some(k) = times.iter().position(|t| !t.is_finite()) {
            return Err(BasisError::NonFiniteTime(k));
        }
        if let Some(k) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(BasisError::NonMonotoneTime(k + 1));
        }
        Ok(TemporalGrid { times })
    }

    /// `count` equally spaced nodes from `start` to `stop` inclusive.
    pub fn uniform(start: f64, stop: f64, count: usize) -> Result<Self, BasisError> {
        if count < 2 {
            return Err(BasisError::GridTooShort(count));
        }
        let step = (stop - start) / (count - 1) as f64;
        let mut times: Vec<f64> = (0..count).map(|k| start + step * k as f64).collect();
        times[count - 1] = stop;
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of time nodes `N`.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn span(&self) -> (f64, f64) {
        (self.start(), self.end())
    }

    /// Interval lengths `h_j = t_{j+1} - t_j`.
    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        self.times.windows(2).map(|w| w[1] - w[0])
    }

    /// Interval `k` and local coordinate `s` in `[0, 1]` with
    /// `t = (1 - s) t_k + s t_{k+1}`. A time equal to a node yields `s == 0`
    /// for that node (the last node maps to `s == 1` of the last interval).
    pub fn locate(&self, t: f64) -> Result<(usize, f64), BasisError> {
        let (start, end) = self.span();
        if !(t >= start && t <= end) {
            return Err(BasisError::TimeOutOfSpan { t, start, end });
        }
        let last = self.times.len() - 2;
        let k = match self.times.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(k) if k > last => return Ok((last, 1.0)),
            Ok(k) => return Ok((k, 0.0)),
            Err(k) => k - 1,
        };
        let s = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        Ok((k, s))
    }

    /// Hat function of node `j` at time `t`.
    pub fn hat(&self, j: usize, t: f64) -> Result<f64, BasisError> {
        if j >= self.times.len() {
            return Err(BasisError::NodeOutOfRange {
                index: j,
                count: self.times.len(),
            });
        }
        let (k, s) = self.locate(t)?;
        Ok(if j == k {
            1.0 - s
        } else if j == k + 1 {
            s
        } else {
            0.0
        })
    }
}
