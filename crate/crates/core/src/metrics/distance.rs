use super::MetricsError;

const SIMPLEX_TOL: f64 = 1e-9;

/// Exact 1-D Wasserstein-1 distance between two empirical distributions.
pub fn wasserstein1(a: &[f64], b: &[f64]) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::TooFew {
            what: "wasserstein1 sample",
            need: 1,
            got: 0,
        });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(MetricsError::NonFinite("wasserstein1 sample"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    if a.len() == b.len() {
        let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect();
        return Ok(crate::stats::mean(&d));
    }
    // Integrate |F_a - F_b| over the merged breakpoints.
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut prev = a[0].min(b[0]);
    let mut total = 0.0;
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        total += (i as f64 / na - j as f64 / nb).abs() * (next - prev);
        while i < a.len() && a[i] == next {
            i += 1;
        }
        while j < b.len() && b[j] == next {
            j += 1;
        }
        prev = next;
    }
    Ok(total)
}

fn check_simplex(p: &[f64], which: &'static str) -> Result<(), MetricsError> {
    if let Some(v) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(MetricsError::NotSimplex {
            which,
            reason: format!("entry {v} is not a finite nonnegative number"),
        });
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > SIMPLEX_TOL {
        return Err(MetricsError::NotSimplex {
            which,
            reason: format!("entries sum to {s}"),
        });
    }
    Ok(())
}

fn check_pair(p: &[f64], q: &[f64]) -> Result<(), MetricsError> {
    if p.len() != q.len() {
        return Err(MetricsError::LengthMismatch(p.len(), q.len()));
    }
    check_simplex(p, "p")?;
    check_simplex(q, "q")
}

/// `KL(p || q) = sum p_i ln(p_i / q_i)` with `0 ln 0 = 0`.
pub fn kl_discrete(p: &[f64], q: &[f64]) -> Result<f64, MetricsError> {
    check_pair(p, q)?;
    let mut total = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(MetricsError::Support(i));
            }
            total += pi * (pi / qi).ln();
        }
    }
    Ok(total.max(0.0))
}

pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64, MetricsError> {
    check_pair(p, q)?;
    let s: f64 = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok((0.5 * s).min(1.0))
}
