use crate::PsychError;
use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

/// Proportion correct with a Wald interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CttStats {
    pub x: usize,
    pub n: usize,
    pub p_hat: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl CttStats {
    pub fn half_width(&self) -> f64 {
        Z95 * self.se
    }

    pub fn contains(&self, p: f64) -> bool {
        (self.ci_low..=self.ci_high).contains(&p)
    }
}

pub fn ctt(x: usize, n: usize) -> Result<CttStats, PsychError> {
    if n == 0 {
        return Err(PsychError::Empty);
    }
    if x > n {
        return Err(PsychError::Invalid(format!("{x} correct out of {n}")));
    }
    let p_hat = x as f64 / n as f64;
    let se = (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    Ok(CttStats {
        x,
        n,
        p_hat,
        se,
        ci_low: (p_hat - Z95 * se).max(0.0),
        ci_high: (p_hat + Z95 * se).min(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boundary_and_small_case() {
        let s = ctt(0, 10).unwrap();
        assert_eq!((s.p_hat, s.se, s.ci_low, s.ci_high), (0.0, 0.0, 0.0, 0.0));
        let s = ctt(3, 4).unwrap();
        assert_eq!(s.p_hat, 0.75);
        // sqrt(0.1875 / 4) by hand
        assert!((s.se - 0.216_506_35).abs() < 1e-8);
        assert!((s.ci_low - 0.325_647_5).abs() < 1e-6);
        assert_eq!(s.ci_high, 1.0);
        assert_eq!(ctt(1, 0), Err(PsychError::Empty));
        assert!(ctt(5, 4).is_err());
    }

    proptest! {
        #[test]
        fn se_zero_iff_extreme(n in 1usize..5000, frac in 0.0f64..=1.0) {
            let x = ((n as f64) * frac).round() as usize;
            let s = ctt(x, n).unwrap();
            prop_assert_eq!(s.se == 0.0, x == 0 || x == n);
            prop_assert!(s.ci_low >= 0.0 && s.ci_high <= 1.0 && s.contains(s.p_hat));
        }

        #[test]
        fn interval_shrinks_with_n(x in 1usize..50, scale in 2usize..20) {
            let n = 100;
            let a = ctt(x, n).unwrap();
            let b = ctt(x * scale, n * scale).unwrap();
            prop_assert!(b.half_width() < a.half_width());
        }
    }
}
