use crate::error::{Error, Result};

/// Adaptive cutoff schedule driven by upward crossings of `||w||_{L^2}`
/// through the integers.
///
/// `T_0 = ... = T_{i0} = 0` with `i0 = floor(||theta_in||)`. On an accepted
/// step ending at `t` with `||w(t)|| >= i + 1` the next stopping time
/// `T_{i+1} = t` is recorded and the level on the new interval becomes
/// `(1 + ||w(T_{i+1})||)^tau`. At `t = 0` the level is
/// `(1 + ceil(||theta_in||))^tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    tau: f64,
    i0: usize,
    initial_level: f64,
    stopping_times: Vec<f64>,
    // levels[i] holds on [T_i, T_{i+1}) for i >= i0
    levels: Vec<f64>,
    norms_at_stops: Vec<f64>,
    last_t: f64,
}

impl Schedule {
    pub fn new(theta_in_l2: f64, tau: f64) -> Result<Self> {
        if !(theta_in_l2 >= 0.0 && theta_in_l2.is_finite()) {
            return Err(Error::contract(format!("initial norm {theta_in_l2} must be finite")));
        }
        if !(tau > 0.0) {
            return Err(Error::contract(format!("tau = {tau} must be positive")));
        }
        let i0 = theta_in_l2.floor() as usize;
        let level = (1.0 + theta_in_l2).powf(tau);
        Ok(Self {
            tau,
            i0,
            initial_level: (1.0 + theta_in_l2.ceil()).powf(tau),
            stopping_times: vec![0.0; i0 + 1],
            levels: vec![level; i0 + 1],
            norms_at_stops: vec![theta_in_l2; i0 + 1],
            last_t: 0.0,
        })
    }

    pub fn i0(&self) -> usize {
        self.i0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Recorded `T_0, T_1, ...`.
    pub fn stopping_times(&self) -> &[f64] {
        &self.stopping_times
    }

    /// `||w(T_i)||` at each recorded stopping time.
    pub fn norms_at_stops(&self) -> &[f64] {
        &self.norms_at_stops
    }

    /// Level used on `[T_i, T_{i+1})`.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Index `i` of the current interval `[T_i, T_{i+1})`.
    pub fn current_index(&self) -> usize {
        self.stopping_times.len() - 1
    }

    /// Nominal level `lambda^i = (i + 1)^tau`.
    pub fn nominal_level(&self, i: usize) -> f64 {
        ((i + 1) as f64).powf(self.tau)
    }

    /// `lambda_t` for the most recent time passed to [`Schedule::update`].
    pub fn current_level(&self) -> f64 {
        if self.last_t == 0.0 {
            self.initial_level
        } else {
            *self.levels.last().expect("non-empty")
        }
    }

    /// `lambda_t` at a time `t` not later than the last update.
    pub fn level_at(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.initial_level;
        }
        let idx = self.stopping_times.partition_point(|&s| s <= t);
        // the interval containing t > 0 starts at the last T_i <= t; ties
        // at zero resolve to the last of the coincident stops
        self.levels[idx.saturating_sub(1)]
    }

    /// Records the accepted state `(t, ||w(t)||)`. Returns the indices of the
    /// stopping times crossed.
    pub fn update(&mut self, t: f64, w_l2: f64) -> Result<Vec<usize>> {
        if t < self.last_t || t.is_nan() {
            return Err(Error::contract(format!(
                "schedule times must be non-decreasing ({t} after {})",
                self.last_t
            )));
        }
        self.last_t = t;
        let mut crossed = Vec::new();
        while w_l2 >= (self.current_index() + 1) as f64 {
            self.stopping_times.push(t);
            self.levels.push((1.0 + w_l2).powf(self.tau));
            self.norms_at_stops.push(w_l2);
            crossed.push(self.current_index());
        }
        Ok(crossed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_initial_norm() {
        let s = Schedule::new(0.0, 3.0).unwrap();
        assert_eq!(s.i0(), 0);
        assert_eq!(s.current_level(), 1.0);
        assert_eq!(s.stopping_times(), &[0.0]);
    }

    #[test]
    fn i0_is_the_floor() {
        let s = Schedule::new(2.5, 3.0).unwrap();
        assert_eq!(s.i0(), 2);
        assert_eq!(s.stopping_times(), &[0.0, 0.0, 0.0]);
        assert_eq!(s.nominal_level(2), 27.0);
        assert_eq!(s.level_at(0.0), 64.0);
    }

    #[test]
    fn records_upward_crossings() {
        let mut s = Schedule::new(0.5, 2.0).unwrap();
        assert!(s.update(0.1, 0.9).unwrap().is_empty());
        assert_eq!(s.current_level(), 2.25);
        assert_eq!(s.update(0.2, 1.05).unwrap(), vec![1]);
        assert_eq!(s.stopping_times(), &[0.0, 0.2]);
        assert!((s.current_level() - 2.05f64.powi(2)).abs() < 1e-15);
        // falling back below does not undo the stop
        assert!(s.update(0.3, 0.2).unwrap().is_empty());
        // two thresholds at once
        assert_eq!(s.update(0.4, 3.1).unwrap(), vec![2, 3]);
        assert_eq!(s.stopping_times(), &[0.0, 0.2, 0.4, 0.4]);
        assert_eq!(s.level_at(0.25), s.levels()[1]);
        assert_eq!(s.level_at(0.45), s.levels()[3]);
    }

    #[test]
    fn rejects_time_going_backwards() {
        let mut s = Schedule::new(0.0, 3.0).unwrap();
        s.update(0.5, 0.1).unwrap();
        assert!(s.update(0.4, 0.1).is_err());
    }
}
