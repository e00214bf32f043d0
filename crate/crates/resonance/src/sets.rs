//! Frequency-interaction sets for products of two and three bands.

/// `(k₁,k₂) ∈ 𝒳_k`.
pub fn in_x(k: i32, k1: i32, k2: i32) -> bool {
    if k1 < -1 || k2 < -1 {
        return false;
    }
    let mx = k1.max(k2);
    (mx - k).abs() <= 8 || (mx >= k + 8 && (k1 - k2).abs() <= 8)
}

/// `(k₁,k₂,k₃) ∈ 𝒴_k`.
pub fn in_y(k: i32, k1: i32, k2: i32, k3: i32) -> bool {
    if k1 < -1 || k2 < -1 || k3 < -1 {
        return false;
    }
    let mut v = [k1, k2, k3];
    v.sort();
    let (med, mx) = (v[1], v[2]);
    (mx - k).abs() <= 4 || (mx >= k + 4 && mx - med <= 4)
}

/// Explicit `𝒳_k` and `𝒴_k`, truncated at `k_max`.
pub fn interaction_sets(k: i32, k_max: i32) -> (Vec<(i32, i32)>, Vec<(i32, i32, i32)>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k1 in -1..=k_max {
        for k2 in -1..=k_max {
            if in_x(k, k1, k2) {
                xs.push((k1, k2));
            }
            for k3 in -1..=k_max {
                if in_y(k, k1, k2, k3) {
                    ys.push((k1, k2, k3));
                }
            }
        }
    }
    (xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert!(in_x(-1, -1, -1));
        for k in -1..6 {
            assert!(in_x(k, k + 9, k + 9));
            assert!(!in_x(k, k + 9, k - 5));
        }
        assert!(!in_x(0, -2, 0));
    }

    #[test]
    fn enumeration_matches_predicates() {
        let (xs, ys) = interaction_sets(2, 12);
        assert!(xs.contains(&(-1, -1)));
        assert!(xs.iter().all(|&(a, b)| in_x(2, a, b)));
        assert!(!xs.contains(&(11, 0)));
        assert!(ys.contains(&(12, 10, -1)));
        assert!(!ys.contains(&(12, 3, -1)));
        assert!(ys.iter().all(|&(a, b, c)| in_y(2, a, b, c)));
    }

    #[test]
    fn y_is_symmetric() {
        for k in -1..4 {
            for a in -1..10 {
                for b in -1..10 {
                    for c in -1..10 {
                        assert_eq!(in_y(k, a, b, c), in_y(k, c, a, b));
                        assert_eq!(in_y(k, a, b, c), in_y(k, b, a, c));
                    }
                }
            }
        }
    }
}
