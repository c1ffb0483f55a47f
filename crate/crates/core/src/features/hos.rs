//! Higher-order statistics: per-channel second-order cumulant and the
//! fourth-order cross-cumulant of a channel group.

use crate::error::{Error, Result};

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// `E[x²] - E[x]²` in the population (divide-by-W) form.
pub fn second_order_cumulant(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            len: x.len(),
            required: 2,
        });
    }
    let m = mean(x);
    Ok(x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64)
}

/// `E[wxyz] - E[wx]E[yz] - E[wy]E[xz] - E[wz]E[xy]` on mean-removed inputs.
pub fn fourth_order_cross_cumulant(group: [&[f64]; 4]) -> Result<f64> {
    let n = group[0].len();
    if let Some(bad) = group.iter().find(|g| g.len() != n) {
        return Err(Error::Dim {
            expected: n,
            found: bad.len(),
        });
    }
    if n < 2 {
        return Err(Error::TooShort { len: n, required: 2 });
    }
    let c: Vec<Vec<f64>> = group
        .iter()
        .map(|g| {
            let m = mean(g);
            g.iter().map(|v| v - m).collect()
        })
        .collect();
    let nf = n as f64;
    let e2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>() / nf;
    let e4 = (0..n).map(|t| c[0][t] * c[1][t] * c[2][t] * c[3][t]).sum::<f64>() / nf;
    Ok(e4
        - e2(&c[0], &c[1]) * e2(&c[2], &c[3])
        - e2(&c[0], &c[2]) * e2(&c[1], &c[3])
        - e2(&c[0], &c[3]) * e2(&c[1], &c[2]))
}
