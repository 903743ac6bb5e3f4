use dise_psychometrics::sim::{simulate, Population};
use dise_psychometrics::{penalized_gradient, penalized_loglik, Priors};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn analytic_gradient_matches_central_differences() {
    let (ni, np) = (12, 30);
    let pop = Population::draw(ni, np, 5);
    let r = simulate(&pop, |i, j| (i * 7 + j) % 5 != 0, 6);
    let pr = Priors::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let h = 1e-5;
    for _ in 0..20 {
        let mut la: Vec<f64> = (0..ni).map(|_| rng.gen_range(-0.7..0.9)).collect();
        let mut b: Vec<f64> = (0..ni).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut th: Vec<f64> = (0..np).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let g = penalized_gradient(&r, &la, &b, &th, &pr);
        let analytic: Vec<f64> = g.log_a.iter().chain(&g.b).chain(&g.theta).copied().collect();
        let mut numeric = Vec::new();
        for block in 0..3 {
            let len = if block == 2 { np } else { ni };
            for k in 0..len {
                let mut eval = |d: f64| {
                    let v = match block {
                        0 => &mut la[k],
                        1 => &mut b[k],
                        _ => &mut th[k],
                    };
                    let keep = *v;
                    *v = keep + d;
                    let f = penalized_loglik(&r, &la, &b, &th, &pr);
                    match block {
                        0 => la[k] = keep,
                        1 => b[k] = keep,
                        _ => th[k] = keep,
                    }
                    f
                };
                numeric.push((eval(h) - eval(-h)) / (2.0 * h));
            }
        }
        let diff: f64 = analytic.iter().zip(&numeric).map(|(a, n)| (a - n).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!(diff / norm < 1e-5, "relative error {}", diff / norm);
    }
}
