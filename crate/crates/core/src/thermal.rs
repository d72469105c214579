//! Thermal weights of the sources.

/// `coth(omega / 2T)`, reducing to `sgn(omega)` at `T = 0`.
pub fn a_weight(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        if omega > 0.0 {
            1.0
        } else if omega < 0.0 {
            -1.0
        } else {
            0.0
        }
    } else {
        1.0 / (omega / (2.0 * temperature)).tanh()
    }
}

/// Bose occupation `1 / (exp(omega/T) - 1)`; `-theta(-omega)` at `T = 0`.
pub fn occupation(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        if omega < 0.0 {
            -1.0
        } else {
            0.0
        }
    } else {
        1.0 / (omega / temperature).exp_m1()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_temperature_limits() {
        assert_eq!(a_weight(2.0, 0.0), 1.0);
        assert_eq!(a_weight(-2.0, 0.0), -1.0);
        assert_eq!(occupation(-0.3, 0.0), -1.0);
        assert_eq!(occupation(0.3, 0.0), 0.0);
    }

    proptest! {
        #[test]
        fn weights_are_consistent(w in prop_oneof![-20.0..-1e-3f64, 1e-3..20.0f64], t in 1e-2..10.0f64) {
            let a = a_weight(w, t);
            let n = occupation(w, t);
            prop_assert!((a - (1.0 + 2.0 * n)).abs() <= 1e-12 * a.abs().max(1.0));
            prop_assert!((a_weight(-w, t) + a).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
