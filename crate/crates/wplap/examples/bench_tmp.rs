use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wplap::ode::ToleranceSpec;
use wplap::prufer::{find_abar, solve_model_ivp_with, ModelParams, SolveOptions};
use wplap::ptrig::PExponent;

fn main() {
    for &(c0, use_p) in &[(5e-5f64, false), (5e-5, true), (1e-4, true), (2e-5, false)] {
        let mut rng = ChaCha8Rng::seed_from_u64(271828);
        let mut worst_all = 0.0f64;
        for _trial in 0..12 {
            let p = rng.gen_range(1.3..3.5);
            let kappa = -rng.gen_range(0.1..2.0);
            let lambda = rng.gen_range(0.5..5.0);
            let pe = PExponent::new(p).unwrap();
            let m = ModelParams::new(pe, kappa, lambda).unwrap();
            let abar = find_abar(&m).unwrap();
            let opts = SolveOptions { tol: ToleranceSpec { rel: 1e-12, abs: 1e-14, max_steps: 1_000_000 }, horizon: None };
            let (traj, geom) = solve_model_ivp_with(&m, -abar, &opts).unwrap();
            let ex = if use_p { (2.0f64/3.0).max((p - 1.0) / 2.0) } else { 2.0/3.0 };
            for s in traj.samples() {
                if s.t - geom.a < 1e-3 || geom.b_of_a - s.t < 1e-3 { continue; }
                let (sp, cp) = m.p().sin_cos_p(s.theta);
                if cp.abs() <= 0.05 || sp.abs() <= 0.05 { continue; }
                let dt = c0 * cp.abs().powf(ex) / m.alpha().max(1.0) / (lambda*(p-1.0)).powf(1.0/3.0).max(1.0);
                worst_all = worst_all.max(traj.ode_residual_fd(s.t, dt).abs());
            }
        }
        println!("c0={c0:.1e} p-dependent-exp={use_p}: WORST={worst_all:.3e}");
    }
}
