/// What happened at a checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    Expand,
    /// Compression to `ell` columns keeping `k_hat` Ritz vectors, with a
    /// filter of half-degree `p`.
    Compress { ell: usize, k_hat: usize, p: usize },
    /// Thick restart to `ell` Ritz vectors.
    Restart { ell: usize },
    /// No compression was possible; the basis cap was raised to `m`.
    Grow { m: usize },
    Converged,
    Breakdown,
}

impl Event {
    pub fn name(&self) -> &'static str {
        match self {
            Event::Expand => "expand",
            Event::Compress { .. } => "compress",
            Event::Restart { .. } => "restart",
            Event::Grow { .. } => "grow",
            Event::Converged => "converged",
            Event::Breakdown => "breakdown",
        }
    }
}

/// State of the run right after one matrix-vector product.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub matvecs: usize,
    /// Up to `k` smallest Ritz values of the projected matrix, before any
    /// compression or restart performed at this step.
    pub ritz: Vec<f64>,
    /// Present only where convergence was checked.
    pub residual_estimate: Option<f64>,
    pub event: Event,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceHistory {
    pub checkpoints: Vec<Checkpoint>,
    /// Set when the residual estimate failed to drop by at least 10% at three
    /// consecutive checks.
    pub stagnated: bool,
    checks: Vec<f64>,
}

impl ConvergenceHistory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a checkpoint; matvec counts must increase strictly.
    pub fn push(&mut self, cp: Checkpoint) {
        if let Some(last) = self.checkpoints.last() {
            assert!(cp.matvecs > last.matvecs, "checkpoint matvec counts must increase");
        }
        if let Some(r) = cp.residual_estimate {
            self.record_check(r);
        }
        self.checkpoints.push(cp);
    }

    fn record_check(&mut self, r: f64) {
        self.checks.push(r);
        let c = &self.checks;
        if c.len() >= 4 {
            let tail = &c[c.len() - 4..];
            if tail.windows(2).all(|w| w[1] > 0.9 * w[0]) {
                self.stagnated = true;
            }
        }
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn last_mut(&mut self) -> Option<&mut Checkpoint> {
        self.checkpoints.last_mut()
    }

    pub fn len(&self) -> usize {
        self.checkpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }

    pub fn compressions(&self) -> impl Iterator<Item = &Checkpoint> {
        self.checkpoints.iter().filter(|c| matches!(c.event, Event::Compress { .. } | Event::Restart { .. }))
    }
}
