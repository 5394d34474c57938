use crate::objective::WeightVector;

/// Euclidean projection onto `{x : x ≥ 0, Σx = 1}`.
///
/// Sort-based: find the threshold `τ` with `Σ max(v_i − τ, 0) = 1` and
/// return `x_i = max(v_i − τ, 0)`. Non-finite entries are treated as very
/// negative (`NaN`, `-inf`) or dominate (`+inf`).
pub fn project_to_simplex(v: &[f64]) -> WeightVector {
    assert!(!v.is_empty(), "projection of an empty vector");
    if let Some(k) = v.iter().position(|x| *x == f64::INFINITY) {
        let mut e = vec![0.0; v.len()];
        e[k] = 1.0;
        return WeightVector::new(e).expect("unit vector is feasible");
    }
    let clean: Vec<f64> = v.iter().map(|&x| if x.is_finite() { x } else { -1e300 }).collect();
    let x = project_raw(&clean);
    WeightVector::renormalize(x).expect("projection has positive mass")
}

/// Projection on plain slices; the result sums to 1 up to rounding.
pub(crate) fn project_raw(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k as f64 + 1.0);
        if uk - t > 0.0 {
            tau = t;
        } else {
            break;
        }
    }
    v.iter().map(|&vi| (vi - tau).max(0.0)).collect()
}
