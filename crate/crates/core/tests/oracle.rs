use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgraph_core::conditions;
use qgraph_core::linalg;
use qgraph_core::numeric::{self, SampledCondition, ORDER_STEP};
use qgraph_core::rational::{int, ratio};
use qgraph_core::solutions;
use qgraph_core::{Params, Rational, Wave};

fn params(n: usize) -> Arc<Params> {
    Params::parse(n, "3/2", "5/7", "2").unwrap()
}

fn random_combo(rng: &mut ChaCha8Rng, p: &Arc<Params>, waves: &[Wave]) -> Wave {
    let coeffs: Vec<Rational> = waves
        .iter()
        .map(|_| match rng.gen_range(0..3) {
            0 => int(0),
            _ => ratio(rng.gen_range(-12..=12), rng.gen_range(1..=5)),
        })
        .collect();
    Wave::linear_combination(p, coeffs.iter().zip(waves)).unwrap()
}

/// Worst relative residual of the two diagonal checks.
fn diagonal_relative(w: &Wave, h: f64) -> (f64, f64) {
    let cont = numeric::sampled_condition_check(w, SampledCondition::DiagContinuity, 20, h);
    let dbc = numeric::sampled_condition_check(w, SampledCondition::Dbc, 20, h);
    (cont.relative.max(dbc.relative), dbc.max_residual)
}

#[test]
fn numeric_oracle_agrees_with_exact_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut checked = [0usize; 2];
    for k in 0..100 {
        let n = 3 + k % 2;
        let p = params(n);
        let from_kernel = k < 50;
        let pool: Vec<Wave> = if from_kernel {
            solutions::enumerate(&p)
                .members
                .into_iter()
                .map(|m| m.wave)
                .collect()
        } else {
            solutions::primary_generators(&p)
                .into_iter()
                .map(|g| g.wave)
                .collect()
        };
        let w = random_combo(&mut rng, &p, &pool);
        if w.is_zero() {
            continue;
        }
        let exact = conditions::is_eigensolution(&w);
        let (coarse_rel, coarse_abs) = diagonal_relative(&w, 1e-2);
        let (fine_rel, fine_abs) = diagonal_relative(&w, 1e-3);
        if exact {
            // Truncation error of a second-order stencil: 100x smaller at h/10.
            assert!(fine_rel < 1e-2, "combo {k}: solution flagged, {fine_rel:e}");
            assert!(
                fine_abs < 1e-9 || coarse_abs / fine_abs > 50.0,
                "combo {k}: {coarse_abs:e} -> {fine_abs:e}"
            );
        } else {
            assert!(
                coarse_rel > 1e-2 && fine_rel > 1e-2,
                "combo {k}: non-solution passed numerically"
            );
            assert!(
                coarse_abs / fine_abs < 2.0,
                "combo {k}: residual shrinks like a solution"
            );
        }
        assert_eq!(exact, from_kernel, "combo {k}");
        checked[usize::from(exact)] += 1;
    }
    assert!(checked[0] >= 45 && checked[1] >= 45, "{checked:?}");
}

#[test]
fn random_solutions_converge_at_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for k in 0..20 {
        let n = 3 + k % 3;
        let p = params(n);
        let kernel: Vec<Wave> = solutions::enumerate(&p)
            .members
            .into_iter()
            .map(|m| m.wave)
            .collect();
        let w = random_combo(&mut rng, &p, &kernel);
        let survey = numeric::order_survey([&w], ORDER_STEP).unwrap();
        assert!(survey.points > 0);
        assert!(survey.within(1.8, 2.2), "combo {k}: {survey:?}");
        for cond in SampledCondition::ALL {
            let r = numeric::sampled_condition_check(&w, cond, 30, 1e-4);
            assert!(r.relative < 1e-2, "combo {k}: {r:?}");
        }
    }
}

#[test]
fn coupling_independent_families_survive_rescaling() {
    for n in 3..=5 {
        let p = params(n);
        let q = p.with_c(p.c() * int(2)).unwrap();
        let (kp, kq) = (solutions::enumerate(&p), solutions::enumerate(&q));
        assert_eq!(kp.len(), kq.len());
        for f in [
            solutions::family_off_diagonal(&p),
            solutions::family_antisymmetric(&p),
        ] {
            for row in f.coords.row_vecs() {
                assert!(linalg::in_rowspace(row, &kp.coords).unwrap());
                assert!(linalg::in_rowspace(row, &kq.coords).unwrap(), "{}", f.label);
            }
        }
        let nonsmooth = solutions::family_nonsmooth(&p);
        for row in nonsmooth.coords.row_vecs() {
            assert!(!linalg::in_rowspace(row, &kq.coords).unwrap());
        }
        assert!(!linalg::rowspace_equal(&kp.coords, &kq.coords).unwrap());
    }
}
