//! Halton low-discrepancy points.

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// First `n` points of the 2D Halton sequence with bases 2 and 3, starting
/// at index 1 so the origin is skipped.
pub fn halton_2d(n: usize) -> Vec<[f64; 2]> {
    (1..=n as u64)
        .map(|i| [radical_inverse(i, 2), radical_inverse(i, 3)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_points() {
        // hand-computed: 1 -> (1/2, 1/3), 2 -> (1/4, 2/3), 3 -> (3/4, 1/9)
        let p = halton_2d(3);
        assert_eq!(p[0], [0.5, 1.0 / 3.0]);
        assert_eq!(p[1], [0.25, 2.0 / 3.0]);
        assert_eq!(p[2], [0.75, 1.0 / 9.0]);
    }

    #[test]
    fn base_three_digits() {
        // 5 = 12 in base 3 -> 0.21 = 2/3 + 1/9
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
        assert_eq!(radical_inverse(0, 2), 0.0);
    }
}
