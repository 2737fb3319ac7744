use crate::linalg::C64;

/// Truncated, renormalized coherent state.
#[derive(Clone, Debug)]
pub struct CoherentState {
    pub amplitudes: Vec<C64>,
    /// |amplitude|² of the highest kept Fock level before renormalization.
    pub top_weight: f64,
}

impl CoherentState {
    pub const TRUNCATION_WARNING: f64 = 1e-10;

    pub fn is_truncated(&self) -> bool {
        self.top_weight > Self::TRUNCATION_WARNING
    }
}

pub fn coherent_state(beta: C64, n_max: usize) -> CoherentState {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut term = C64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(term);
    for k in 1..=n_max {
        term = term * beta / (k as f64).sqrt();
        amps.push(term);
    }
    let top_weight = amps[n_max].norm_sqr();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    CoherentState {
        amplitudes: amps,
        top_weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::space::destroy;

    #[test]
    fn vacuum() {
        let s = coherent_state(C64::default(), 5);
        assert_eq!(s.amplitudes[0], C64::new(1.0, 0.0));
        assert!(s.amplitudes[1..].iter().all(|z| *z == C64::default()));
    }

    #[test]
    fn series_values() {
        let s = coherent_state(C64::new(1.0, 0.0), 20);
        let mut fact = 1.0;
        for (k, z) in s.amplitudes.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((z.re - (-0.5f64).exp() / fact.sqrt()).abs() < 1e-12);
        }
        assert!(!s.is_truncated());
        assert!(coherent_state(C64::new(3.0, 0.0), 5).is_truncated());
    }

    #[test]
    fn eigenvector_of_annihilation() {
        let beta = C64::new(0.7, -0.9);
        let s = coherent_state(beta, 30);
        let out = destroy(30).apply(&s.amplitudes);
        for k in 0..29 {
            assert!((out[k] - beta * s.amplitudes[k]).norm() < 1e-10);
        }
    }
}
