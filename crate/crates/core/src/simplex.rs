//! Nelder–Mead simplex minimiser with adaptive coefficients and simplex
//! rebuilds on stagnation.

#[derive(Clone, Copy, Debug)]
pub(crate) struct Options {
    /// Total objective evaluations allowed, including rebuilds.
    pub max_evals: usize,
    /// Edge length of the initial (and every rebuilt) simplex.
    pub step: f64,
    /// Stop as soon as the best value drops below this.
    pub target: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

pub(crate) fn minimize<F>(mut f: F, x0: &[f64], opts: Options) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_x = x0.to_vec();
    let mut best_f = eval(&best_x, &mut evals);
    let mut step = opts.step;
    while evals < opts.max_evals && best_f > opts.target {
        let (x, fx) = descend(&mut eval, &best_x, best_f, step, &opts, &mut evals);
        let improved = best_f - fx > 1e-12 * best_f.abs().max(1e-300);
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
        if !improved {
            // A rebuild that found nothing: try once more at a finer scale,
            // then give up.
            if step < opts.step * 1e-3 {
                break;
            }
            step *= 1e-2;
        } else {
            step = opts.step;
        }
    }
    Minimum {
        x: best_x,
        f: best_f,
        evals,
    }
}

fn descend<E>(
    eval: &mut E,
    x0: &[f64],
    f0: f64,
    step: f64,
    opts: &Options,
    evals: &mut usize,
) -> (Vec<f64>, f64)
where
    E: FnMut(&[f64], &mut usize) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = eval(&x, evals);
        simplex.push((x, fx));
    }

    let mut centroid = vec![0.0; n];
    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (ci - wi)).collect()
    };

    while *evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if best <= opts.target {
            break;
        }
        let spread = worst - best;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= 1e-15 * best.abs() + 1e-300 || diameter < 1e-13 {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst_x = simplex[n].0.clone();
        let reflected = point(&centroid, &worst_x, alpha);
        let fr = eval(&reflected, evals);
        if fr < best {
            let expanded = point(&centroid, &worst_x, gamma);
            let fe = eval(&expanded, evals);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst {
            let c = point(&centroid, &worst_x, alpha * rho);
            let fc = eval(&c, evals);
            (c, fc)
        } else {
            let c = point(&centroid, &worst_x, -rho);
            let fc = eval(&c, evals);
            (c, fc)
        };
        if fc < worst.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            for (xi, ai) in x.iter_mut().zip(&anchor) {
                *xi = ai + sigma * (*xi - ai);
            }
            *fx = eval(x, evals);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    (x, fx)
}
