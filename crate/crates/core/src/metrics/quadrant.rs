use crate::empirical::{rank_coordinates, Empirical2d};
use crate::metrics::TargetGaussian;

/// sup over lower-left quadrants B_(u,v) = {x <= u, y <= v} of |P̂(B) - G(B)|.
///
/// The distinct sample coordinates cut the plane into cells on which the
/// empirical count is constant while G(B) increases in both corners. The
/// supremum over a cell is therefore reached either at its lower-left corner
/// or as the limit at its upper-right corner, and both are checked, which
/// makes the result exact.
pub fn quadrant_sup(emp: &Empirical2d, target: &TargetGaussian) -> f64 {
    let (xs, xrank) = rank_coordinates(emp.points().iter().map(|p| p[0]));
    let (ys, yrank) = rank_coordinates(emp.points().iter().map(|p| p[1]));
    let k = emp.len() as f64;

    // Index a in 0..=p addresses the cell [X_{a-1}, X_a) with X_{-1} = -inf, X_p = +inf.
    let corner_lo = |d: &[f64]| -> Vec<f64> {
        std::iter::once(0.0).chain(d.iter().map(|&x| target.component_cdf(x))).collect()
    };
    let corner_hi = |d: &[f64]| -> Vec<f64> {
        d.iter().map(|&x| target.component_cdf(x)).chain(std::iter::once(1.0)).collect()
    };
    let (lo_x, hi_x) = (corner_lo(&xs), corner_hi(&xs));
    let (lo_y, hi_y) = (corner_lo(&ys), corner_hi(&ys));

    let by_column = bucket_by_rank(&xrank, xs.len());
    // below[b] = number of points already swept with y-rank < b.
    let mut below = vec![0usize; ys.len() + 1];
    let mut sup: f64 = 0.0;
    for a in 0..=xs.len() {
        for (b, &count) in below.iter().enumerate() {
            let f_hat = count as f64 / k;
            let over = f_hat - lo_x[a] * lo_y[b];
            let under = hi_x[a] * hi_y[b] - f_hat;
            sup = sup.max(over).max(under);
        }
        if a < xs.len() {
            for &i in &by_column[a] {
                for c in &mut below[yrank[i] + 1..] {
                    *c += 1;
                }
            }
        }
    }
    sup.clamp(0.0, 1.0)
}

/// sup over lower-left quadrants of |P̂_a(B) - P̂_b(B)|.
pub fn quadrant_two_sample(a: &Empirical2d, b: &Empirical2d) -> f64 {
    let all = || a.points().iter().chain(b.points());
    let (xs, xrank) = rank_coordinates(all().map(|p| p[0]));
    let (ys, yrank) = rank_coordinates(all().map(|p| p[1]));
    let (ka, kb) = (a.len() as f64, b.len() as f64);
    let split = a.len();

    let by_column = bucket_by_rank(&xrank, xs.len());
    let mut below_a = vec![0usize; ys.len() + 1];
    let mut below_b = vec![0usize; ys.len() + 1];
    let mut sup: f64 = 0.0;
    for column in by_column {
        for &i in &column {
            let counts = if i < split { &mut below_a } else { &mut below_b };
            for c in &mut counts[yrank[i] + 1..] {
                *c += 1;
            }
        }
        for (ca, cb) in below_a.iter().zip(&below_b) {
            sup = sup.max((*ca as f64 / ka - *cb as f64 / kb).abs());
        }
    }
    sup
}

fn bucket_by_rank(ranks: &[usize], buckets: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); buckets];
    for (i, &r) in ranks.iter().enumerate() {
        out[r].push(i);
    }
    out
}
