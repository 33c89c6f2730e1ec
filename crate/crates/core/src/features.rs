// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Peak and envelope detection on sampled curves.

/// Indices of local maxima whose topographic prominence is at least
/// `min_prominence`. A flat top counts once, at its first sample.
/// End points are never maxima.
pub fn local_maxima(ys: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = ys.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if ys[i] > ys[i - 1] {
            // Walk across a plateau.
            let mut j = i;
            while j + 1 < n && ys[j + 1] == ys[i] {
                j += 1;
            }
            if j + 1 < n && ys[j + 1] < ys[i] && prominence(ys, i) >= min_prominence {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Local minima, by the same rules as [`local_maxima`].
pub fn local_minima(ys: &[f64], min_prominence: f64) -> Vec<usize> {
    let neg: Vec<f64> = ys.iter().map(|y| -y).collect();
    local_maxima(&neg, min_prominence)
}

/// Height of the peak at `i` above the higher of the two lowest points
/// reached before climbing to something taller (or hitting an end).
pub fn prominence(ys: &[f64], i: usize) -> f64 {
    let peak = ys[i];
    let mut left_min = peak;
    for &y in ys[..i].iter().rev() {
        if y > peak {
            break;
        }
        left_min = left_min.min(y);
    }
    let mut right_min = peak;
    for &y in &ys[i + 1..] {
        if y > peak {
            break;
        }
        right_min = right_min.min(y);
    }
    peak - left_min.max(right_min)
}

/// Rise-then-decay envelope: the maximum sits strictly inside the series,
/// the first sample is below `edge_fraction` of it and so is the last.
pub fn rises_then_decays(ys: &[f64], edge_fraction: f64) -> bool {
    let Some((imax, &ymax)) = ys.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return false;
    };
    if ymax <= 0.0 || imax == 0 || imax + 1 == ys.len() {
        return false;
    }
    ys[0] <= edge_fraction * ymax && ys[ys.len() - 1] <= edge_fraction * ymax
}

/// True if the values never increase by more than `tol`.
pub fn non_increasing(values: &[f64], tol: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_separated_peaks() {
        let xs: Vec<f64> = (0..400).map(|i| i as f64 * 0.05).collect();
        let ys: Vec<f64> =
            xs.iter().map(|x| (-(x - 5.0f64).powi(2)).exp() + 0.5 * (-(x - 12.0f64).powi(2)).exp()).collect();
        assert_eq!(local_maxima(&ys, 0.1), vec![100, 240]);
        assert_eq!(local_minima(&ys, 0.1).len(), 1);
        assert_eq!(local_maxima(&ys, 0.6), vec![100]);
    }

    #[test]
    fn plateau_and_edges() {
        assert_eq!(local_maxima(&[0.0, 1.0, 1.0, 0.0], 0.5), vec![1]);
        assert!(local_maxima(&[2.0, 1.0, 0.0], 0.0).is_empty());
        assert!(local_maxima(&[0.0, 1.0, 1.0], 0.0).is_empty());
        assert!(local_maxima(&[], 0.0).is_empty());
    }

    #[test]
    fn prominence_of_shoulder() {
        let ys = [0.0, 3.0, 2.5, 2.8, 1.0, 0.0];
        assert!((prominence(&ys, 3) - 0.3).abs() < 1e-12);
        assert!((prominence(&ys, 1) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_shapes() {
        let rise_decay: Vec<f64> = (0..100).map(|i| i as f64 * (-(i as f64) / 10.0).exp()).collect();
        assert!(rises_then_decays(&rise_decay, 0.2));
        let monotone: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(!rises_then_decays(&monotone, 0.2));
        assert!(non_increasing(&[3.0, 2.0, 2.0, 1.0], 0.0));
        assert!(!non_increasing(&[3.0, 3.5], 0.1));
    }
}
