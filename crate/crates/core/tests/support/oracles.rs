//! Direct per-definition reference implementations, written with plain index
//! loops and no shared code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

pub fn mean(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        s += x[i];
    }
    s / x.len() as f64
}

/// The 21 time-domain features in their fixed order, with strict `>`
/// threshold comparisons and a threshold of `rel × population std`.
pub fn time_domain(x: &[f64], rel: f64) -> [f64; 21] {
    let n = x.len();
    let nf = n as f64;
    let mu = mean(x);
    let mut pvar = 0.0;
    for i in 0..n {
        pvar += (x[i] - mu) * (x[i] - mu);
    }
    let thr = rel * (pvar / nf).sqrt();

    let mut amplitude = 0.0f64;
    let mut ssi = 0.0;
    let mut iemg = 0.0;
    for i in 0..n {
        if x[i].abs() > amplitude {
            amplitude = x[i].abs();
        }
        ssi += x[i] * x[i];
        iemg += x[i].abs();
    }
    let rms = (ssi / nf).sqrt();
    let var = ssi / (nf - 1.0);
    let mav = iemg / nf;

    let mut wl = 0.0;
    let mut dsq = 0.0;
    let mut wamp = 0.0;
    let mut zc = 0.0;
    for i in 0..n - 1 {
        let d = x[i + 1] - x[i];
        wl += d.abs();
        dsq += d * d;
        if d.abs() > thr {
            wamp += 1.0;
        }
        let crosses = (x[i] > 0.0 && x[i + 1] < 0.0) || (x[i] < 0.0 && x[i + 1] > 0.0);
        if crosses && (x[i] - x[i + 1]).abs() > thr {
            zc += 1.0;
        }
    }
    let mut ssc = 0.0;
    for i in 1..n - 1 {
        if (x[i] - x[i - 1]) * (x[i] - x[i + 1]) > thr {
            ssc += 1.0;
        }
    }
    let mut myop = 0.0;
    for i in 0..n {
        if x[i].abs() > thr {
            myop += 1.0;
        }
    }
    myop /= nf;

    let mut any_zero = false;
    let mut lsum = 0.0;
    for i in 0..n {
        if x[i] == 0.0 {
            any_zero = true;
        } else {
            lsum += x[i].abs().ln();
        }
    }
    let log = if any_zero { 0.0 } else { (lsum / nf).exp() };

    let dasdv = (dsq / (nf - 1.0)).sqrt();

    // 1-based positions.
    let exponent = |p: f64| if p >= 0.2 * nf && p <= 0.8 * nf { 0.75 } else { 0.5 };
    let mut emav = 0.0;
    for i in 1..=n {
        emav += x[i - 1].abs().powf(exponent(i as f64));
    }
    emav /= nf;
    let mut ewl = 0.0;
    for i in 2..=n {
        ewl += (x[i - 1] - x[i - 2]).abs().powf(exponent(i as f64));
    }

    let mut mmav = 0.0;
    let mut mmav2 = 0.0;
    for i in 1..=n {
        let p = i as f64;
        let a = x[i - 1].abs();
        let w1 = if 0.25 * nf <= p && p <= 0.75 * nf { 1.0 } else { 0.5 };
        let w2 = if p < 0.25 * nf {
            4.0 * p / nf
        } else if p > 0.75 * nf {
            4.0 * (nf - p) / nf
        } else {
            1.0
        };
        mmav += w1 * a;
        mmav2 += w2 * a;
    }
    mmav /= nf;
    mmav2 /= nf;

    let mfl = if dsq > 0.0 { dsq.sqrt().log10() } else { 0.0 };
    let aac = wl / nf;

    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let c = x[i] - mu;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let (kurt, skew) = if m2 > 0.0 {
        (m4 / (m2 * m2), m3 / (m2 * m2.sqrt()))
    } else {
        (0.0, 0.0)
    };

    [
        amplitude, rms, var, wl, mav, ssi, zc, ssc, wamp, iemg, log, myop, dasdv, emav, ewl, mmav, mmav2, mfl, aac,
        kurt, skew,
    ]
}

pub fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - ma) * (b[i] - mb);
    }
    s / (a.len() as f64 - 1.0)
}

pub fn second_cumulant(x: &[f64]) -> f64 {
    let mut s2 = 0.0;
    for i in 0..x.len() {
        s2 += x[i] * x[i];
    }
    let m = mean(x);
    s2 / x.len() as f64 - m * m
}

pub fn fourth_cross_cumulant(g: [&[f64]; 4]) -> f64 {
    let n = g[0].len();
    let c: Vec<Vec<f64>> = g
        .iter()
        .map(|s| {
            let m = mean(s);
            s.iter().map(|v| v - m).collect()
        })
        .collect();
    let e2 = |p: usize, q: usize| {
        let mut s = 0.0;
        for i in 0..n {
            s += c[p][i] * c[q][i];
        }
        s / n as f64
    };
    let mut e4 = 0.0;
    for i in 0..n {
        e4 += c[0][i] * c[1][i] * c[2][i] * c[3][i];
    }
    e4 /= n as f64;
    e4 - e2(0, 1) * e2(2, 3) - e2(0, 2) * e2(1, 3) - e2(0, 3) * e2(1, 2)
}

/// Max over lags `l` in `(-W, W)` of `Σ a[n] b[n+l] / sqrt(E_a E_b)`, with the
/// lag of the (first) maximum.
pub fn max_similarity(a: &[f64], b: &[f64]) -> (f64, isize) {
    let w = a.len() as isize;
    let mut ea = 0.0;
    let mut eb = 0.0;
    for i in 0..a.len() {
        ea += a[i] * a[i];
        eb += b[i] * b[i];
    }
    let norm = (ea * eb).sqrt();
    let mut best = (f64::NEG_INFINITY, 0);
    for lag in -(w - 1)..w {
        let mut s = 0.0;
        for i in 0..w {
            let j = i + lag;
            if j >= 0 && j < w {
                s += a[i as usize] * b[j as usize];
            }
        }
        if s / norm > best.0 {
            best = (s / norm, lag);
        }
    }
    best
}

/// Brute-force k-NN: full sort by (squared distance, row), majority vote,
/// vote ties to the class seen first in that order, then lower index.
pub fn knn(points: &[Vec<f64>], labels: &[usize], n_classes: usize, k: usize, q: &[f64]) -> usize {
    let mut d: Vec<(f64, usize)> = Vec::new();
    for i in 0..points.len() {
        let mut s = 0.0;
        for j in 0..q.len() {
            s += (points[i][j] - q[j]) * (points[i][j] - q[j]);
        }
        d.push((s, i));
    }
    d.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
    let mut votes = vec![0; n_classes];
    let mut first = vec![usize::MAX; n_classes];
    for r in 0..k {
        let c = labels[d[r].1];
        votes[c] += 1;
        if first[c] == usize::MAX {
            first[c] = r;
        }
    }
    let top = *votes.iter().max().unwrap();
    let mut best = usize::MAX;
    for c in 0..n_classes {
        if votes[c] == top && (best == usize::MAX || first[c] < first[best]) {
            best = c;
        }
    }
    best
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
