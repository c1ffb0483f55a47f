//! Soft-margin SVM trained by SMO with second-order working-set selection,
//! combined one-vs-one (default) or one-vs-rest for multiclass problems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Kernel {
    /// `exp(-gamma ‖a - b‖²)`; `gamma = None` means `1 / d`.
    Rbf { gamma: Option<f64> },
    Linear,
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::Rbf { gamma: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiclass {
    #[default]
    OneVsOne,
    OneVsRest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SvmParams {
    pub c: f64,
    pub kernel: Kernel,
    pub multiclass: Multiclass,
    /// Stopping tolerance on the maximal KKT violation.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            kernel: Kernel::default(),
            multiclass: Multiclass::OneVsOne,
            tolerance: 1e-3,
            max_iterations: 1_000_000,
        }
    }
}

/// Kernel with its width resolved against the training dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResolvedKernel {
    Rbf { gamma: f64 },
    Linear,
}

impl ResolvedKernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            ResolvedKernel::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
            ResolvedKernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
        }
    }
}

/// One binary machine. `positive` is the class mapped to `y = +1`; for
/// one-vs-rest machines `negative` is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMachine {
    pub positive: usize,
    pub negative: Option<usize>,
    pub support_vectors: Vec<Vec<f64>>,
    /// Dual variables of the support vectors, each in `[0, C]`.
    pub alphas: Vec<f64>,
    /// `±1` labels of the support vectors.
    pub targets: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
}

impl BinaryMachine {
    pub fn decision(&self, kernel: &ResolvedKernel, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(self.alphas.iter().zip(&self.targets))
            .map(|(sv, (a, y))| a * y * kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub n_classes: usize,
    pub dim: usize,
    pub c: f64,
    pub kernel: ResolvedKernel,
    pub multiclass: Multiclass,
    pub machines: Vec<BinaryMachine>,
}

/// Solve the binary dual
/// `min ½ αᵀQα - Σα  s.t.  0 <= α <= C, yᵀα = 0` with `Q_ij = y_i y_j K_ij`.
fn smo(k: &[Vec<f64>], y: &[f64], params: &SvmParams) -> Result<(Vec<f64>, f64, usize)> {
    let n = y.len();
    let c = params.c;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let q = |i: usize, j: usize| y[i] * y[j] * k[i][j];

    let is_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let is_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let mut iter = 0;
    loop {
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = usize::MAX;
        for t in 0..n {
            if is_up(alpha[t], y[t]) && (-y[t] * grad[t] > gmax || i_sel == usize::MAX) {
                gmax = -y[t] * grad[t];
                i_sel = t;
            }
        }
        let mut gmin = f64::INFINITY;
        let mut j_sel = usize::MAX;
        let mut best_obj = f64::INFINITY;
        for t in 0..n {
            if !is_low(alpha[t], y[t]) {
                continue;
            }
            let v = -y[t] * grad[t];
            gmin = gmin.min(v);
            if i_sel == usize::MAX {
                continue;
            }
            let b = gmax - v;
            if b > 0.0 {
                let a = k[i_sel][i_sel] + k[t][t] - 2.0 * k[i_sel][t];
                let a = if a > 0.0 { a } else { TAU };
                let obj = -(b * b) / a;
                if obj < best_obj {
                    best_obj = obj;
                    j_sel = t;
                }
            }
        }

        if i_sel == usize::MAX || j_sel == usize::MAX || gmax - gmin < params.tolerance {
            break;
        }
        if iter >= params.max_iterations {
            return Err(Error::Convergence {
                iterations: iter,
                max_violation: gmax - gmin,
            });
        }
        iter += 1;

        let (i, j) = (i_sel, j_sel);
        let (old_ai, old_aj) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = k[i][i] + k[j][j] - 2.0 * k[i][j];
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = k[i][i] + k[j][j] - 2.0 * k[i][j];
            let quad = if quad > 0.0 { quad } else { TAU };
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_ai, alpha[j] - old_aj);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
    }

    // Offset from free multipliers, or the midpoint of the feasible interval.
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free_count += 1;
            free_sum += yg;
        }
    }
    let rho = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (ub + lb) / 2.0
    };
    Ok((alpha, -rho, iter))
}

fn train_binary(
    x: &[&[f64]],
    y: &[f64],
    positive: usize,
    negative: Option<usize>,
    kernel: &ResolvedKernel,
    params: &SvmParams,
) -> Result<BinaryMachine> {
    let gram: Vec<Vec<f64>> = x
        .iter()
        .map(|a| x.iter().map(|b| kernel.eval(a, b)).collect())
        .collect();
    let (alpha, bias, iterations) = smo(&gram, y, params)?;
    let mut machine = BinaryMachine {
        positive,
        negative,
        support_vectors: Vec::new(),
        alphas: Vec::new(),
        targets: Vec::new(),
        bias,
        iterations,
    };
    for (t, &a) in alpha.iter().enumerate() {
        if a > 0.0 {
            machine.support_vectors.push(x[t].to_vec());
            machine.alphas.push(a);
            machine.targets.push(y[t]);
        }
    }
    Ok(machine)
}

pub fn svm_train(x: &[Vec<f64>], y: &[usize], n_classes: usize, params: &SvmParams) -> Result<SvmModel> {
    if x.len() != y.len() {
        return Err(Error::Dim {
            expected: x.len(),
            found: y.len(),
        });
    }
    if !(params.c > 0.0) {
        return Err(Error::Config(format!("SVM penalty C = {} must be positive", params.c)));
    }
    let mut present = vec![false; n_classes];
    for &c in y {
        if c >= n_classes {
            return Err(Error::Config(format!("label {c} outside {n_classes} classes")));
        }
        present[c] = true;
    }
    let classes: Vec<usize> = (0..n_classes).filter(|&c| present[c]).collect();
    if classes.len() < 2 {
        return Err(Error::DegenerateLabels);
    }
    let dim = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != dim) {
        return Err(Error::Dim {
            expected: dim,
            found: r.len(),
        });
    }
    let kernel = match params.kernel {
        Kernel::Rbf { gamma } => ResolvedKernel::Rbf {
            gamma: gamma.unwrap_or(1.0 / dim.max(1) as f64),
        },
        Kernel::Linear => ResolvedKernel::Linear,
    };

    let mut machines = Vec::new();
    match params.multiclass {
        Multiclass::OneVsOne => {
            for (a, &p) in classes.iter().enumerate() {
                for &q in &classes[a + 1..] {
                    let (rows, targets): (Vec<&[f64]>, Vec<f64>) = x
                        .iter()
                        .zip(y)
                        .filter(|(_, &c)| c == p || c == q)
                        .map(|(r, &c)| (r.as_slice(), if c == p { 1.0 } else { -1.0 }))
                        .unzip();
                    machines.push(train_binary(&rows, &targets, p, Some(q), &kernel, params)?);
                }
            }
        }
        Multiclass::OneVsRest => {
            let rows: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
            for &p in &classes {
                let targets: Vec<f64> = y.iter().map(|&c| if c == p { 1.0 } else { -1.0 }).collect();
                machines.push(train_binary(&rows, &targets, p, None, &kernel, params)?);
            }
        }
    }
    Ok(SvmModel {
        n_classes,
        dim,
        c: params.c,
        kernel,
        multiclass: params.multiclass,
        machines,
    })
}

impl SvmModel {
    /// One-vs-one: each machine votes; ties go to the larger summed decision
    /// magnitude, then the lower class index. One-vs-rest: largest decision.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.dim {
            return Err(Error::Dim {
                expected: self.dim,
                found: x.len(),
            });
        }
        match self.multiclass {
            Multiclass::OneVsOne => {
                let mut votes = vec![0usize; self.n_classes];
                let mut strength = vec![0.0f64; self.n_classes];
                for m in &self.machines {
                    let f = m.decision(&self.kernel, x);
                    let winner = if f > 0.0 { m.positive } else { m.negative.expect("pairwise machine") };
                    votes[winner] += 1;
                    strength[winner] += f.abs();
                }
                Ok((0..self.n_classes)
                    .max_by(|&a, &b| {
                        votes[a]
                            .cmp(&votes[b])
                            .then(strength[a].total_cmp(&strength[b]))
                            .then(b.cmp(&a))
                    })
                    .expect("at least one class"))
            }
            Multiclass::OneVsRest => {
                let mut best = (f64::NEG_INFINITY, usize::MAX);
                for m in &self.machines {
                    let f = m.decision(&self.kernel, x);
                    if f > best.0 {
                        best = (f, m.positive);
                    }
                }
                Ok(best.1)
            }
        }
    }
}
