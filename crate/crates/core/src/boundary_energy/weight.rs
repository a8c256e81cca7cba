/// Plus-state mixture weight `e^{βW} / (e^{βW} + e^{−βW})`, evaluated
/// without overflow for any finite `βW`.
pub fn metastate_weight(w: f64, beta: f64) -> f64 {
    let x = 2.0 * beta * w;
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Histogram bin of `metastate_weight(w, beta)` among `bins` uniform bins
/// on `[0, 1]`, computed so that `weight_bin(−w) = bins − 1 − weight_bin(w)`
/// holds exactly.
pub fn weight_bin(w: f64, beta: f64, bins: usize) -> usize {
    let x = 2.0 * beta * w;
    let e = (-x.abs()).exp();
    let minority = e / (1.0 + e);
    let low = ((minority * bins as f64) as usize).min(bins / 2);
    if x > 0.0 {
        bins - 1 - low
    } else {
        low
    }
}

/// Bin of a weight in `[0, 1]`.
pub fn lambda_bin(lambda: f64, bins: usize) -> usize {
    ((lambda.clamp(0.0, 1.0) * bins as f64) as usize).min(bins - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(metastate_weight(0.0, 3.0), 0.5);
        assert_eq!(metastate_weight(12.0, 0.0), 0.5);
        assert_eq!(metastate_weight(1e6, 1.0), 1.0);
        assert_eq!(metastate_weight(-1e6, 1.0), 0.0);
        assert_eq!(weight_bin(0.0, 1.0, 101), 50);
    }

    proptest! {
        #[test]
        fn complement_symmetry(w in -50.0f64..50.0, beta in 0.0f64..5.0) {
            let a = metastate_weight(w, beta);
            let b = metastate_weight(-w, beta);
            prop_assert!((a + b - 1.0).abs() < 1e-15);
            prop_assert_eq!(weight_bin(-w, beta, 101), 100 - weight_bin(w, beta, 101));
            let direct = lambda_bin(a, 101);
            prop_assert!(direct.abs_diff(weight_bin(w, beta, 101)) <= 1);
        }

        #[test]
        fn strictly_increasing(w in -8.0f64..8.0, dw in 1e-3f64..1.0, beta in 0.1f64..2.0) {
            let a = metastate_weight(w, beta);
            let b = metastate_weight(w + dw, beta);
            prop_assert!(b > a);
            prop_assert!(a > 0.0 && a < 1.0);
        }
    }
}
