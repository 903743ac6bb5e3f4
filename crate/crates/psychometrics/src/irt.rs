use crate::{ctt::Z95, PsychError};
use serde::{Deserialize, Serialize};

/// Items × participants, with `None` for responses missing by design.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMatrix {
    items: usize,
    persons: usize,
    data: Vec<Option<bool>>,
}

impl ResponseMatrix {
    pub fn new(items: usize, persons: usize) -> Self {
        ResponseMatrix {
            items,
            persons,
            data: vec![None; items * persons],
        }
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn persons(&self) -> usize {
        self.persons
    }

    pub fn get(&self, item: usize, person: usize) -> Option<bool> {
        self.data[item * self.persons + person]
    }

    pub fn set(&mut self, item: usize, person: usize, y: Option<bool>) {
        self.data[item * self.persons + person] = y;
    }

    pub fn observed(&self) -> usize {
        self.data.iter().filter(|y| y.is_some()).count()
    }

    /// Proportion correct over observed entries.
    pub fn accuracy(&self) -> f64 {
        let (c, n) = self.data.iter().flatten().fold((0, 0), |(c, n), &y| (c + y as usize, n + 1));
        c as f64 / n as f64
    }

    fn item_row(&self, i: usize) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.data[i * self.persons..(i + 1) * self.persons]
            .iter()
            .enumerate()
            .filter_map(|(j, y)| y.map(|y| (j, y)))
    }

    fn person_col(&self, j: usize) -> impl Iterator<Item = (usize, bool)> + '_ {
        (0..self.items).filter_map(move |i| self.get(i, j).map(|y| (i, y)))
    }
}

/// Prior scales. Discrimination is log-normal, so its prior is normal on
/// `ln a`; difficulty and ability are normal around zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub log_a_sd: f64,
    pub b_sd: f64,
    pub theta_sd: f64,
}

impl Default for Priors {
    fn default() -> Self {
        Priors {
            log_a_sd: 0.5,
            b_sd: 2.0,
            theta_sd: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// `None` fits the bare likelihood, which diverges on perfect rows.
    pub priors: Option<Priors>,
    pub max_sweeps: usize,
    pub rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            priors: Some(Priors::default()),
            max_sweeps: 500,
            rel_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrtModel {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub theta: Vec<f64>,
    /// Observed-data log-likelihood at the reported (standardized) parameters.
    pub loglik: f64,
    pub sweeps: usize,
    pub converged: bool,
}

pub fn probability(a: f64, b: f64, theta: f64) -> f64 {
    1.0 / (1.0 + (-a * (theta - b)).exp())
}

/// Numerically safe `ln σ(z)`.
fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}

fn obs_loglik(y: bool, z: f64) -> f64 {
    if y {
        log_sigmoid(z)
    } else {
        log_sigmoid(-z)
    }
}

impl IrtModel {
    pub fn p(&self, item: usize, person: usize) -> f64 {
        probability(self.a[item], self.b[item], self.theta[person])
    }

    /// Expected accuracy of each item averaged over every fitted participant.
    pub fn item_means(&self) -> Vec<f64> {
        (0..self.a.len())
            .map(|i| (0..self.theta.len()).map(|j| self.p(i, j)).sum::<f64>() / self.theta.len() as f64)
            .collect()
    }
}

/// Gradient with respect to (`ln a`, `b`, `θ`).
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub log_a: Vec<f64>,
    pub b: Vec<f64>,
    pub theta: Vec<f64>,
}

fn prior_term(x: f64, sd: f64) -> f64 {
    -x * x / (2.0 * sd * sd)
}

/// Penalized joint log-likelihood over observed entries, parameterized by
/// `ln a`. Prior constants are dropped.
pub fn penalized_loglik(r: &ResponseMatrix, log_a: &[f64], b: &[f64], theta: &[f64], priors: &Priors) -> f64 {
    let mut ll = 0.0;
    for i in 0..r.items {
        let a = log_a[i].exp();
        for (j, y) in r.item_row(i) {
            ll += obs_loglik(y, a * (theta[j] - b[i]));
        }
        ll += prior_term(log_a[i], priors.log_a_sd) + prior_term(b[i], priors.b_sd);
    }
    ll + theta.iter().map(|&t| prior_term(t, priors.theta_sd)).sum::<f64>()
}

pub fn penalized_gradient(r: &ResponseMatrix, log_a: &[f64], b: &[f64], theta: &[f64], priors: &Priors) -> Gradient {
    let mut g = Gradient {
        log_a: vec![0.0; r.items],
        b: vec![0.0; r.items],
        theta: vec![0.0; r.persons],
    };
    for i in 0..r.items {
        let a = log_a[i].exp();
        for (j, y) in r.item_row(i) {
            let d = theta[j] - b[i];
            let resid = y as u8 as f64 - probability(a, b[i], theta[j]);
            g.log_a[i] += resid * a * d;
            g.b[i] -= resid * a;
            g.theta[j] += resid * a;
        }
        g.log_a[i] -= log_a[i] / priors.log_a_sd.powi(2);
        g.b[i] -= b[i] / priors.b_sd.powi(2);
    }
    for (gt, &t) in g.theta.iter_mut().zip(theta) {
        *gt -= t / priors.theta_sd.powi(2);
    }
    g
}

/// Prior-free likelihood with an infinite-variance prior stands in for
/// "no priors"; the fit guards against the perfect rows that would diverge.
const FLAT: Priors = Priors {
    log_a_sd: f64::INFINITY,
    b_sd: f64::INFINITY,
    theta_sd: f64::INFINITY,
};

fn item_objective(r: &ResponseMatrix, i: usize, log_a: f64, b: f64, theta: &[f64], pr: &Priors) -> f64 {
    let a = log_a.exp();
    r.item_row(i).map(|(j, y)| obs_loglik(y, a * (theta[j] - b))).sum::<f64>()
        + prior_term(log_a, pr.log_a_sd)
        + prior_term(b, pr.b_sd)
}

fn person_objective(r: &ResponseMatrix, j: usize, t: f64, log_a: &[f64], b: &[f64], pr: &Priors) -> f64 {
    r.person_col(j)
        .map(|(i, y)| obs_loglik(y, log_a[i].exp() * (t - b[i])))
        .sum::<f64>()
        + prior_term(t, pr.theta_sd)
}

const MAX_HALVINGS: usize = 30;

/// One Fisher-scoring step on (ln a_i, b_i) with step halving.
fn update_item(r: &ResponseMatrix, i: usize, log_a: &mut [f64], b: &mut [f64], theta: &[f64], pr: &Priors) {
    let (la, bi) = (log_a[i], b[i]);
    let a = la.exp();
    let (mut g1, mut g2) = (-la / pr.log_a_sd.powi(2), -bi / pr.b_sd.powi(2));
    let (mut h11, mut h22, mut h12) = (-1.0 / pr.log_a_sd.powi(2), -1.0 / pr.b_sd.powi(2), 0.0);
    for (j, y) in r.item_row(i) {
        let d = theta[j] - bi;
        let p = probability(a, bi, theta[j]);
        let w = p * (1.0 - p);
        let resid = y as u8 as f64 - p;
        g1 += resid * a * d;
        g2 -= resid * a;
        h11 -= w * a * a * d * d;
        h22 -= w * a * a;
        h12 += w * a * a * d;
    }
    let det = h11 * h22 - h12 * h12;
    if !(det.is_finite() && det > 0.0) {
        return;
    }
    let s1 = -(h22 * g1 - h12 * g2) / det;
    let s2 = -(h11 * g2 - h12 * g1) / det;
    let base = item_objective(r, i, la, bi, theta, pr);
    let mut step = 1.0;
    for _ in 0..MAX_HALVINGS {
        let (nl, nb) = (la + step * s1, bi + step * s2);
        if item_objective(r, i, nl, nb, theta, pr) >= base {
            log_a[i] = nl;
            b[i] = nb;
            return;
        }
        step *= 0.5;
    }
}

fn update_person(r: &ResponseMatrix, j: usize, log_a: &[f64], b: &[f64], theta: &mut [f64], pr: &Priors) {
    let t = theta[j];
    let mut g = -t / pr.theta_sd.powi(2);
    let mut h = -1.0 / pr.theta_sd.powi(2);
    for (i, y) in r.person_col(j) {
        let a = log_a[i].exp();
        let p = probability(a, b[i], t);
        g += (y as u8 as f64 - p) * a;
        h -= p * (1.0 - p) * a * a;
    }
    if !(h.is_finite() && h < 0.0) {
        return;
    }
    let s = -g / h;
    let base = person_objective(r, j, t, log_a, b, pr);
    let mut step = 1.0;
    for _ in 0..MAX_HALVINGS {
        let nt = t + step * s;
        if person_objective(r, j, nt, log_a, b, pr) >= base {
            theta[j] = nt;
            return;
        }
        step *= 0.5;
    }
}

/// Joint maximum a posteriori fit by alternating item and ability sweeps.
/// Afterwards abilities are standardized to mean 0, sd 1 and items rescaled
/// so every `a(θ − b)` is unchanged.
pub fn fit_2pl(r: &ResponseMatrix, opts: &FitOptions) -> Result<IrtModel, PsychError> {
    if r.items == 0 || r.persons == 0 || r.observed() == 0 {
        return Err(PsychError::Empty);
    }
    for j in 0..r.persons {
        if r.person_col(j).next().is_none() {
            return Err(PsychError::Invalid(format!("participant {j} has no responses")));
        }
    }
    if opts.priors.is_none() {
        for i in 0..r.items {
            let ys: Vec<bool> = r.item_row(i).map(|(_, y)| y).collect();
            if ys.len() < 2 || ys.iter().all(|&y| y) || ys.iter().all(|&y| !y) {
                return Err(PsychError::Degenerate(format!(
                    "item {i} needs both outcomes among at least two responses when fitting without priors"
                )));
            }
        }
    }
    let pr = opts.priors.unwrap_or(FLAT);
    let mut log_a = vec![0.0; r.items];
    let mut b = vec![0.0; r.items];
    // Start abilities at the logit of each participant's shrunken accuracy.
    let mut theta: Vec<f64> = (0..r.persons)
        .map(|j| {
            let (c, n) = r.person_col(j).fold((0.5, 1.0), |(c, n), (_, y)| (c + y as u8 as f64, n + 1.0));
            let p = c / n;
            (p / (1.0 - p)).ln()
        })
        .collect();
    let mut prev = penalized_loglik(r, &log_a, &b, &theta, &pr);
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        for i in 0..r.items {
            update_item(r, i, &mut log_a, &mut b, &theta, &pr);
        }
        for j in 0..r.persons {
            update_person(r, j, &log_a, &b, &mut theta, &pr);
        }
        let cur = penalized_loglik(r, &log_a, &b, &theta, &pr);
        let rel = (cur - prev).abs() / prev.abs().max(f64::MIN_POSITIVE);
        prev = cur;
        if rel < opts.rel_tol {
            converged = true;
            break;
        }
    }

    let n = theta.len() as f64;
    let mean = theta.iter().sum::<f64>() / n;
    let sd = (theta.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n).sqrt();
    let sd = if sd > 0.0 { sd } else { 1.0 };
    let theta: Vec<f64> = theta.iter().map(|t| (t - mean) / sd).collect();
    let a: Vec<f64> = log_a.iter().map(|la| la.exp() * sd).collect();
    let b: Vec<f64> = b.iter().map(|bi| (bi - mean) / sd).collect();
    let loglik = (0..r.items)
        .flat_map(|i| r.item_row(i).map(move |(j, y)| (i, j, y)))
        .map(|(i, j, y)| obs_loglik(y, a[i] * (theta[j] - b[i])))
        .sum();
    Ok(IrtModel {
        a,
        b,
        theta,
        loglik,
        sweeps,
        converged,
    })
}

/// Category-level expected accuracy from per-item expected probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrtCategoryStats {
    pub items: usize,
    pub p_irt: f64,
    /// Between-item sample variance; absent for a single item.
    pub s2: Option<f64>,
    pub se: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

impl IrtCategoryStats {
    pub fn half_width(&self) -> Option<f64> {
        self.se.map(|s| Z95 * s)
    }
}

pub fn irt_category_from_means(pbar: &[f64]) -> Result<IrtCategoryStats, PsychError> {
    let n = pbar.len();
    if n == 0 {
        return Err(PsychError::Empty);
    }
    let p_irt = pbar.iter().sum::<f64>() / n as f64;
    let s2 = (n > 1).then(|| pbar.iter().map(|p| (p - p_irt).powi(2)).sum::<f64>() / (n - 1) as f64);
    let se = s2.map(|v| v.sqrt() / (n as f64).sqrt());
    Ok(IrtCategoryStats {
        items: n,
        p_irt,
        s2,
        se,
        ci_low: se.map(|s| p_irt - Z95 * s),
        ci_high: se.map(|s| p_irt + Z95 * s),
    })
}

/// Summary over a subset of item indices; each item's expectation averages
/// all fitted participants.
pub fn irt_category(model: &IrtModel, subset: &[usize]) -> Result<IrtCategoryStats, PsychError> {
    if let Some(&bad) = subset.iter().find(|&&i| i >= model.a.len()) {
        return Err(PsychError::Invalid(format!("item index {bad} out of range")));
    }
    let means = model.item_means();
    irt_category_from_means(&subset.iter().map(|&i| means[i]).collect::<Vec<_>>())
}
